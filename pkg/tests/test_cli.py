import json

import pytest
from fastapi.testclient import TestClient

from cate.cli import main
from cate.rnn import load_checkpoint, save_checkpoint
from cate.service import create_app


@pytest.fixture(scope="module")
def trained_checkpoint(tmp_path_factory):
    """End-to-end: generate -> train -> checkpoint on disk."""
    workdir = tmp_path_factory.mktemp("cli")
    treebank = workdir / "tb.txt"
    model = workdir / "model.json"
    assert main(["generate", "--seed", "7", "--n", "30",
                 "--out", str(treebank)]) == 0
    assert main(["train", "--treebank", str(treebank), "--out", str(model),
                 "--dim", "10", "--epochs", "25", "--patience", "25",
                 "--seed", "0"]) == 0
    return workdir, treebank, model


def test_generate_train_roundtrip(trained_checkpoint):
    _, _, model = trained_checkpoint
    assert model.exists()
    params = load_checkpoint(model)
    assert params.dim == 10


def test_parse_ascii(trained_checkpoint, capsys):
    _, _, model = trained_checkpoint
    code = main(["parse", "--model", str(model),
                 "--sentence", "set to true", "--beam", "1"])
    out = capsys.readouterr().out
    assert code == 0
    assert out.count("(W ") == 3
    assert "cum_logprob" in out


def test_parse_json_matches_http_tree(trained_checkpoint, capsys):
    _, _, model = trained_checkpoint
    sentence = "If the sensor fails, then the process shall stop."
    code = main(["parse", "--model", str(model), "--sentence", sentence,
                 "--beam", "2", "--format", "json"])
    assert code == 0
    cli_tree = json.loads(capsys.readouterr().out)

    workdir = model.parent / "served"
    workdir.mkdir(exist_ok=True)
    save_checkpoint(load_checkpoint(model), workdir / "m.json")
    client = TestClient(create_app(workdir))
    response = client.post("/api/parse",
                           json={"sentence": sentence, "beam_width": 2})
    assert response.status_code == 200
    assert response.json()["tree"] == cli_tree


def test_calibrate_updates_checkpoint(trained_checkpoint):
    workdir, treebank, model = trained_checkpoint
    out = workdir / "calibrated.json"
    code = main(["calibrate", "--model", str(model),
                 "--treebank", str(treebank), "--out", str(out)])
    assert code == 0
    assert load_checkpoint(out).temperature is not None


def test_eval_runs(trained_checkpoint, capsys):
    _, treebank, model = trained_checkpoint
    code = main(["eval", "--model", str(model), "--treebank", str(treebank),
                 "--split", "train", "--beam", "2", "--format", "json"])
    assert code == 0
    report = json.loads(capsys.readouterr().out)
    assert report["corpus_size"] == 24  # 80% of 30


def test_unknown_subcommand_exit_1(capsys):
    assert main(["bogus"]) == 1


def test_missing_file_exit_2(capsys):
    assert main(["parse", "--model", "/nonexistent.json",
                 "--sentence", "a"]) == 2


def test_help_exit_0(capsys):
    assert main(["--help"]) == 0
