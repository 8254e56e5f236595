import csv
import json

import pytest

from chatscreen.cli import build_parser, main

TINY_CONFIG = {
    "model": {"vocab_size": 80, "embed_dim": 8, "seq_len": 12, "gru_units": 4,
              "num_classes": 2, "dropout_rate": 0.1, "embedding_trainable": False},
    "train": {"epochs": 4, "batch_size": 32, "early_stop_patience": 3, "seed": 3},
    "split": {"train_frac": 0.5, "val_frac": 0.2, "test_frac": 0.3, "shuffle_seed": 3},
}


@pytest.fixture(scope="module")
def workspace(tmp_path_factory):
    """Synth corpus + tiny trained archive shared across CLI tests."""
    root = tmp_path_factory.mktemp("cli")
    data = root / "corpus.csv"
    config = root / "config.json"
    model = root / "model.bin"
    history = root / "history.csv"
    config.write_text(json.dumps(TINY_CONFIG))
    assert main(["synth-data", "--out", str(data), "--n", "240", "--seed", "5"]) == 0
    assert main(["train", "--data", str(data), "--config", str(config),
                 "--out", str(model), "--history", str(history)]) == 0
    return {"root": root, "data": data, "config": config,
            "model": model, "history": history}


class TestSynthData:
    def test_csv_shape_and_classes(self, tmp_path):
        out = tmp_path / "synth.csv"
        assert main(["synth-data", "--out", str(out), "--n", "50", "--seed", "1"]) == 0
        with open(out, newline="") as fh:
            rows = list(csv.DictReader(fh))
        assert len(rows) == 50
        assert set(r["class"] for r in rows) == {"suicide", "non-suicide"}

    def test_deterministic_per_seed(self, tmp_path):
        a, b = tmp_path / "a.csv", tmp_path / "b.csv"
        main(["synth-data", "--out", str(a), "--n", "30", "--seed", "9"])
        main(["synth-data", "--out", str(b), "--n", "30", "--seed", "9"])
        assert a.read_bytes() == b.read_bytes()


class TestTrain:
    def test_archive_and_history_written(self, workspace):
        assert workspace["model"].exists()
        lines = workspace["history"].read_text().splitlines()
        assert lines[0] == "epoch,train_loss,train_acc,val_loss,val_acc"
        assert 1 <= len(lines) - 1 <= TINY_CONFIG["train"]["epochs"]

    def test_deterministic_archives(self, workspace, tmp_path):
        out2 = tmp_path / "model2.bin"
        assert main(["train", "--data", str(workspace["data"]),
                     "--config", str(workspace["config"]),
                     "--out", str(out2)]) == 0
        assert out2.read_bytes() == workspace["model"].read_bytes()

    def test_flag_overrides_config(self, workspace, tmp_path, capsys):
        out = tmp_path / "m.bin"
        assert main(["train", "--data", str(workspace["data"]),
                     "--config", str(workspace["config"]),
                     "--out", str(out), "--epochs", "1"]) == 0
        captured = capsys.readouterr()
        assert "epoch 1/1" in captured.out


class TestEvaluate:
    def test_report_files_emitted(self, workspace, tmp_path):
        report_dir = tmp_path / "report"
        assert main(["evaluate", "--model", str(workspace["model"]),
                     "--data", str(workspace["data"]),
                     "--report-dir", str(report_dir)]) == 0
        overall = (report_dir / "overall_stats.csv").read_text()
        assert len(overall.splitlines()) == 15  # header + 14 merits
        assert (report_dir / "class_stats.csv").exists()
        assert (report_dir / "confusion_matrix.csv").exists()
        assert (report_dir / "report.txt").exists()


class TestPredict:
    def test_prints_probability_and_label(self, workspace, capsys):
        assert main(["predict", "--model", str(workspace["model"]),
                     "--text", "granite lantern meadow"]) == 0
        out = capsys.readouterr().out
        assert "suicide_probability=" in out
        assert "label=" in out

    def test_all_stopword_text_scores_padding_sequence(self, workspace, capsys):
        assert main(["predict", "--model", str(workspace["model"]),
                     "--text", "the and of to a i"]) == 0
        out = capsys.readouterr().out
        prob = float(out.split("suicide_probability=")[1].split()[0])
        assert 0.0 <= prob <= 1.0


class TestExitCodes:
    def test_usage_error_is_2(self):
        with pytest.raises(SystemExit) as excinfo:
            main(["train"])  # missing required flags
        assert excinfo.value.code == 2

    def test_unknown_command_is_2(self):
        with pytest.raises(SystemExit) as excinfo:
            main(["frobnicate"])
        assert excinfo.value.code == 2

    def test_runtime_error_is_1(self, tmp_path, capsys):
        assert main(["predict", "--model", str(tmp_path / "missing.bin"),
                     "--text", "hi"]) == 1
        assert "error:" in capsys.readouterr().err

    def test_parser_has_all_subcommands(self):
        parser = build_parser()
        text = parser.format_help()
        for name in ("train", "evaluate", "predict", "serve", "synth-data"):
            assert name in text


class TestServeWiring:
    def test_serve_builds_manager_and_parses_addr(self, workspace, tmp_path, monkeypatch):
        import uvicorn

        captured = {}

        def fake_run(app, host, port):
            captured["app"] = app
            captured["host"] = host
            captured["port"] = port

        monkeypatch.setattr(uvicorn, "run", fake_run)
        monkeypatch.setenv("CHATSCREEN_API_TOKEN", "topsecret")
        thresholds = tmp_path / "thresholds.json"
        thresholds.write_text(json.dumps({
            "flag": 0.7, "high_max": 0.7, "high_ewma": 0.5,
            "elevated_max": 0.4, "ewma_decay": 0.6,
        }))
        data_dir = tmp_path / "sessions"
        assert main(["serve", "--model", str(workspace["model"]),
                     "--addr", "0.0.0.0:9005",
                     "--data-dir", str(data_dir),
                     "--thresholds", str(thresholds)]) == 0
        assert captured["host"] == "0.0.0.0"
        assert captured["port"] == 9005
        assert data_dir.is_dir()

        from fastapi.testclient import TestClient

        client = TestClient(captured["app"])
        assert client.get("/v1/health").status_code == 401
        resp = client.get("/v1/health",
                          headers={"Authorization": "Bearer topsecret"})
        assert resp.status_code == 200
        assert len(resp.json()["model_checksum"]) == 8
