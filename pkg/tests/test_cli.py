import shlex

import numpy as np
import pytest

from warmglove.cli import build_parser, main


@pytest.fixture
def corpus_file(tmp_path):
    path = tmp_path / "corpus.txt"
    path.write_text(
        "the cat sat on the mat with the cat\n"
        "the dog sat on the log and the dog barked\n" * 3
        + "the cat and the dog sat near the mat\n" * 2,
        encoding="utf-8")
    return path


def run_pipeline(tmp_path, corpus_file, train_args=()):
    cooc = tmp_path / "X.cooc"
    vecs = tmp_path / "vecs.txt"
    assert main(["cooccur", "--window", "4", "--min-count", "2",
                 "--out", str(cooc), str(corpus_file)]) == 0
    assert main(["train", "--cooc", str(cooc), "--dim", "5", "--epochs", "40",
                 "--seed", "3", "--out", str(vecs), "--quiet",
                 *train_args]) == 0
    return cooc, vecs


class TestExitCodes:
    def test_top_level_help(self, capsys):
        assert main(["--help"]) == 0
        assert "cooccur" in capsys.readouterr().out

    def test_subcommand_help_shows_standard_defaults(self, capsys):
        assert main(["train", "--help"]) == 0
        out = capsys.readouterr().out
        for needle in ("0.75", "100.0", "0.05", "0.1", "50"):
            assert needle in out
        assert main(["cooccur", "--help"]) == 0
        assert "10" in capsys.readouterr().out

    def test_unknown_subcommand_is_usage_error(self, capsys):
        assert main(["frobnicate"]) == 1
        err = capsys.readouterr().err
        assert err.startswith("warmglove: error:")
        assert len(err.strip().splitlines()) == 1

    def test_missing_required_flag_is_usage_error(self, capsys):
        assert main(["train"]) == 1
        assert "--cooc" in capsys.readouterr().err

    def test_missing_input_file_is_runtime_error(self, tmp_path, capsys):
        assert main(["train", "--cooc", str(tmp_path / "nope.cooc"),
                     "--out", str(tmp_path / "v.txt"), "--quiet"]) == 2
        assert "nope.cooc" in capsys.readouterr().err

    def test_bad_flag_value_is_usage_error(self, tmp_path, corpus_file):
        cooc, _ = run_pipeline(tmp_path, corpus_file)
        assert main(["train", "--cooc", str(cooc), "--lr", "-1",
                     "--out", str(tmp_path / "v.txt"), "--quiet"]) == 1

    def test_divergence_is_runtime_error(self, tmp_path, corpus_file, capsys):
        cooc, _ = run_pipeline(tmp_path, corpus_file)
        assert main(["train", "--cooc", str(cooc), "--lr", "1e100",
                     "--epochs", "30", "--out", str(tmp_path / "v.txt"),
                     "--quiet"]) == 2
        assert "cost" in capsys.readouterr().err


class TestDocumentedInvocations:
    @pytest.mark.parametrize("line", [
        "cooccur --window 10 --min-count 300 --out X.cooc a.txt b.txt",
        "train --cooc X.cooc --dim 50 --alpha 0.75 --x-max 100 --lr 0.05 "
        "--epochs 50000 --mu 0.1 --priors glove.txt --init-at-priors "
        "--seed 1 --out vectors.txt --report report.csv",
        "simulate --size 500 --density 0.10 --prior-frac 0.5 --trials 5 "
        "--mu-grid 0,0.001,0.01,0.1,1,10 --epochs 2000 --out sweep.csv",
        "bench --sizes 5000,10000,20000 --density 0.10 --iters 10 "
        "--corpora 5 --out bench.csv",
        "featurize --embeddings vectors.txt --in docs.txt --out features.csv",
    ])
    def test_documented_invocation_parses(self, line):
        args = build_parser().parse_args(shlex.split(line))
        assert args.command == line.split()[0]


class TestPipeline:
    def test_cooccur_writes_matrix_and_vocab(self, tmp_path, corpus_file):
        cooc = tmp_path / "X.cooc"
        assert main(["cooccur", "--window", "4", "--min-count", "2",
                     "--out", str(cooc), str(corpus_file)]) == 0
        header = cooc.read_text().splitlines()[0].split()
        dim, nnz = int(header[0]), int(header[1])
        assert dim > 0 and nnz > 0
        vocab_lines = (tmp_path / "X.cooc.vocab").read_text().splitlines()
        assert len(vocab_lines) == dim
        assert all("\t" in ln for ln in vocab_lines)

    def test_train_writes_vectors_with_tokens(self, tmp_path, corpus_file):
        _, vecs = run_pipeline(tmp_path, corpus_file)
        from warmglove.embedding_io import read_embeddings
        emb = read_embeddings(vecs)
        assert emb.dim == 5
        assert "the" in emb.tokens

    def test_train_report_columns(self, tmp_path, corpus_file):
        cooc, _ = run_pipeline(tmp_path, corpus_file)
        report = tmp_path / "rep.csv"
        assert main(["train", "--cooc", str(cooc), "--dim", "4",
                     "--epochs", "7", "--out", str(tmp_path / "v2.txt"),
                     "--report", str(report), "--quiet"]) == 0
        lines = report.read_text().splitlines()
        assert lines[0] == "epoch,cost,seconds"
        assert len(lines) == 8
        costs = [float(ln.split(",")[1]) for ln in lines[1:]]
        assert costs[-1] < costs[0]

    def test_train_with_priors_and_warm_init(self, tmp_path, corpus_file):
        cooc, vecs = run_pipeline(tmp_path, corpus_file)
        from warmglove.embedding_io import read_embeddings
        tokens = read_embeddings(vecs).tokens[:4]
        prior_file = tmp_path / "priors.txt"
        rng = np.random.default_rng(0)
        lines = [t + " " + " ".join(f"{v:.4f}" for v in rng.normal(size=5))
                 for t in tokens]
        prior_file.write_text("\n".join(lines) + "\n")
        out = tmp_path / "warm.txt"
        assert main(["train", "--cooc", str(cooc), "--dim", "5",
                     "--epochs", "30", "--mu", "0.5",
                     "--priors", str(prior_file), "--init-at-priors",
                     "--out", str(out), "--quiet"]) == 0
        assert out.exists()

    def test_priors_dim_mismatch_fails(self, tmp_path, corpus_file, capsys):
        cooc, _ = run_pipeline(tmp_path, corpus_file)
        prior_file = tmp_path / "priors.txt"
        prior_file.write_text("the 1.0 2.0\n")
        assert main(["train", "--cooc", str(cooc), "--dim", "5",
                     "--epochs", "5", "--priors", str(prior_file),
                     "--out", str(tmp_path / "v.txt"), "--quiet"]) == 2

    def test_init_at_priors_requires_priors(self, tmp_path, corpus_file):
        cooc, _ = run_pipeline(tmp_path, corpus_file)
        assert main(["train", "--cooc", str(cooc), "--init-at-priors",
                     "--out", str(tmp_path / "v.txt"), "--quiet"]) == 1

    def test_per_epoch_lines_on_stderr(self, tmp_path, corpus_file, capsys):
        cooc, _ = run_pipeline(tmp_path, corpus_file)
        assert main(["train", "--cooc", str(cooc), "--dim", "3",
                     "--epochs", "3", "--out", str(tmp_path / "v.txt")]) == 0
        err = capsys.readouterr().err
        assert err.count("epoch") >= 3 and "cost" in err

    def test_featurize_matches_library(self, tmp_path, corpus_file):
        _, vecs = run_pipeline(tmp_path, corpus_file)
        docs = tmp_path / "docs.txt"
        docs.write_text("the cat sat\nunknown words only\n")
        features = tmp_path / "features.csv"
        assert main(["featurize", "--embeddings", str(vecs),
                     "--in", str(docs), "--out", str(features)]) == 0
        rows = features.read_text().splitlines()
        assert len(rows) == 2
        from warmglove.corpus import tokenize
        from warmglove.embedding_io import read_embeddings
        from warmglove.featurize import sum_features
        emb = read_embeddings(vecs)
        expected = sum_features(tokenize("the cat sat"), emb).vector
        got = np.array([float(v) for v in rows[0].split(",")])
        np.testing.assert_allclose(got, expected, atol=1e-4)
        assert all(float(v) == 0.0 for v in rows[1].split(","))

    def test_simulate_row_count(self, tmp_path):
        out = tmp_path / "sweep.csv"
        assert main(["simulate", "--size", "30", "--density", "0.3",
                     "--trials", "2", "--mu-grid", "0,0.5", "--epochs", "25",
                     "--dim", "4", "--out", str(out), "--quiet"]) == 0
        lines = out.read_text().splitlines()
        assert lines[0].startswith("trial,mu,")
        assert len(lines) == 1 + 2 * 2

    def test_bench_csv_and_table(self, tmp_path, capsys):
        out = tmp_path / "bench.csv"
        assert main(["bench", "--sizes", "30,60", "--iters", "1",
                     "--corpora", "1", "--dim", "4", "--out", str(out),
                     "--quiet"]) == 0
        stdout = capsys.readouterr().out
        assert "vectorized" in stdout and "loop" in stdout
        lines = out.read_text().splitlines()
        comments = [ln for ln in lines if ln.startswith("#")]
        data = [ln for ln in lines if not ln.startswith("#")]
        assert any("cpu" in c for c in comments)
        assert data[0] == "implementation,vocab_size,mean_s,stddev_s"
        assert len(data) == 5


class TestConfigFile:
    def test_config_supplies_values_flags_win(self, tmp_path, corpus_file):
        cooc = tmp_path / "X.cooc"
        config = tmp_path / "run.conf"
        config.write_text(
            "window = 4\nmin-count = 2\n"
            f"out = {tmp_path / 'from_config.cooc'}\n")
        # config supplies window/min-count; the flag overrides out
        assert main(["cooccur", "--config", str(config),
                     "--out", str(cooc), str(corpus_file)]) == 0
        assert cooc.exists()
        assert not (tmp_path / "from_config.cooc").exists()

    def test_config_alone_supplies_required_flag(self, tmp_path, corpus_file):
        target = tmp_path / "via_config.cooc"
        config = tmp_path / "run.conf"
        config.write_text(f"out = {target}\nmin-count = 2\n# a comment\n")
        assert main(["cooccur", "--config", str(config), str(corpus_file)]) == 0
        assert target.exists()

    def test_malformed_config_is_usage_error(self, tmp_path, corpus_file, capsys):
        config = tmp_path / "run.conf"
        config.write_text("not a key value line\n")
        assert main(["cooccur", "--config", str(config), "--out",
                     str(tmp_path / "x.cooc"), str(corpus_file)]) == 1
        assert "key = value" in capsys.readouterr().err

    def test_bad_config_value_is_usage_error(self, tmp_path, corpus_file):
        config = tmp_path / "run.conf"
        config.write_text("window = banana\n")
        assert main(["cooccur", "--config", str(config), "--out",
                     str(tmp_path / "x.cooc"), str(corpus_file)]) == 1


def test_module_entry_point():
    import subprocess
    import sys
    proc = subprocess.run([sys.executable, "-m", "warmglove", "--help"],
                          capture_output=True, text=True)
    assert proc.returncode == 0
    assert "cooccur" in proc.stdout
