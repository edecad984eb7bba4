import os

import numpy as np
import pytest

from conftest import FIXTURES
from hebbnet.cli import CliError, load_dataset, main
from hebbnet.model import CenteredLayer, load_model


def run(argv):
    return main(argv)


def test_dataset_specifiers():
    ds = load_dataset("rand:5x7", seed=3, role="in")
    assert ds.X.shape == (5, 7)
    ds2 = load_dataset("randn:4x6", seed=3, role="out")
    assert ds2.X.shape == (4, 6)
    # input and output roles draw from different streams
    assert not np.array_equal(load_dataset("rand:5x7", 3, "in").X,
                              load_dataset("rand:5x7", 3, "out").X)
    idx = load_dataset(f"idx:{FIXTURES}/images_2x2x2.idx", 0, "in")
    assert idx.X.shape == (2, 4)
    both = load_dataset(f"idx:{FIXTURES}/images_2x2x2.idx,labels={FIXTURES}/labels_3.idx", 0, "in")
    assert both.labels is not None
    dense = load_dataset(f"dense:{FIXTURES}/dense_labeled.txt,label-last", 0, "in")
    assert dense.labels.tolist() == [3, 2]
    with pytest.raises(CliError):
        load_dataset("csv:foo", 0, "in")


def test_hetero_csv_schema_and_determinism(tmp_path):
    a = os.path.join(tmp_path, "a.csv")
    b = os.path.join(tmp_path, "b.csv")
    argv = ["hetero", "--in", "rand:15x10", "--out", "rand:15x8", "--rule", "hd",
            "--act", "sigmoid", "--centered", "--epochs", "1", "--batch", "1",
            "--eta", "1", "--trials", "2", "--seed", "9"]
    assert run(argv + ["--csv", a]) == 0
    assert run(argv + ["--csv", b]) == 0
    assert open(a, "rb").read() == open(b, "rb").read()
    lines = open(a).read().splitlines()
    assert lines[0] == "trial,pattern_index,mae"
    assert len(lines) == 1 + 2 * 15
    trial, idx, mae = lines[1].split(",")
    assert trial == "0" and idx == "0"
    float(mae)


def test_curve_requires_fixed_eta(tmp_path):
    csv = os.path.join(tmp_path, "c.csv")
    argv = ["curve", "--in", "rand:10x6", "--out", "rand:10x6", "--rule", "hebb",
            "--centered", "--seed", "2", "--csv", csv]
    assert run(argv + ["--eta", "2"]) == 0
    assert run(argv) == 1  # missing --eta is a user error


def test_auto_subcommand(tmp_path):
    csv = os.path.join(tmp_path, "a.csv")
    model_path = os.path.join(tmp_path, "ae.hdn")
    argv = ["auto", "--in", "rand:20x12", "--hidden", "4", "--rule", "hd",
            "--enc-act", "identity", "--dec-act", "sigmoid", "--centered",
            "--epochs", "3", "--batch", "10", "--nu-hidden", "0.01",
            "--eta", "0.5", "--seed", "4", "--csv", csv, "--save-model", model_path]
    assert run(argv) == 0
    lines = open(csv).read().splitlines()
    assert lines[0] == "trial,pattern_index,mae" and len(lines) == 21
    back = load_model(model_path)
    assert back.W.shape == (12, 4)


def test_classify_subcommand(tmp_path):
    csv = os.path.join(tmp_path, "c.csv")
    argv = ["classify", "--in", f"dense:{FIXTURES}/dense_labeled.txt,label-last",
            "--rule", "hd", "--act", "softmax", "--epochs", "2", "--batch", "1",
            "--eta", "0.5", "--seed", "1", "--csv", csv]
    assert run(argv) == 0
    lines = open(csv).read().splitlines()
    assert lines[0] == "trial,epoch,test_error"
    assert len(lines) == 3


def test_grid_subcommand_schema(tmp_path):
    csv = os.path.join(tmp_path, "g.csv")
    argv = ["grid", "--in", "rand:10x6", "--out", "rand:10x6", "--rule", "hd",
            "--act", "sigmoid", "--centered", "--eta", "1", "--objective", "last5",
            "--seed", "3", "--csv", csv, "--jobs", "1"]
    assert run(argv) == 0
    lines = open(csv).read().splitlines()
    assert lines[0] == "eta,omega,score" and len(lines) == 2


def test_grid_lr_emits_full_grid(tmp_path):
    csv = os.path.join(tmp_path, "g.csv")
    argv = ["grid", "--in", "rand:8x5", "--out", "rand:8x5", "--rule", "hebb",
            "--act", "sigmoid", "--centered", "--grid-lr", "--objective", "all",
            "--seed", "3", "--csv", csv, "--jobs", "1"]
    assert run(argv) == 0
    assert len(open(csv).read().splitlines()) == 1 + 35


def test_hetero_with_grid_selection(tmp_path):
    csv = os.path.join(tmp_path, "h.csv")
    argv = ["hetero", "--in", "rand:10x6", "--out", "rand:10x6", "--rule", "hd",
            "--act", "sigmoid", "--centered", "--grid-lr", "--objective", "last5",
            "--trials", "1", "--seed", "3", "--csv", csv, "--jobs", "1"]
    assert run(argv) == 0
    assert len(open(csv).read().splitlines()) == 11


def test_save_model_roundtrip(tmp_path):
    csv = os.path.join(tmp_path, "h.csv")
    model_path = os.path.join(tmp_path, "layer.hdn")
    argv = ["hetero", "--in", "rand:6x4", "--out", "rand:6x3", "--rule", "gd",
            "--act", "sigmoid", "--eta", "0.2", "--seed", "8",
            "--csv", csv, "--save-model", model_path]
    assert run(argv) == 0
    back = load_model(model_path)
    assert isinstance(back, CenteredLayer)
    assert back.W.shape == (4, 3)


def test_verify_subcommand_exit_code(capsys):
    assert run(["verify", "--seed", "0", "--instances", "2"]) == 0
    out = capsys.readouterr().out
    assert out.startswith("1..")
    assert "not ok" not in out


def test_unknown_flag_exits_2():
    with pytest.raises(SystemExit) as exc:
        run(["hetero", "--bogus"])
    assert exc.value.code == 2


def test_runtime_failure_exits_1(tmp_path, capsys):
    csv = os.path.join(tmp_path, "x.csv")
    code = run(["hetero", "--in", "rand:10x6", "--out", "rand:12x6", "--rule", "hd",
                "--eta", "1", "--seed", "1", "--csv", csv])
    assert code == 1
    assert "error" in capsys.readouterr().err


def test_mismatched_pattern_count_message(tmp_path, capsys):
    # disagreement is caught before training starts
    code = run(["curve", "--in", "rand:10x6", "--out", "rand:11x6", "--rule", "hd",
                "--eta", "1", "--seed", "1", "--csv", os.path.join(tmp_path, "x.csv")])
    assert code == 1
