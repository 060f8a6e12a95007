import numpy as np
import pytest

from cvep_speller.cli import main
from cvep_speller.code import generate_msequence
from cvep_speller.dsp import Epoch
from cvep_speller.io import load_epochs, write_epochs
from cvep_speller.lexicon import KeyboardLayout
from cvep_speller.synth import SynthConfig, synth_epoch


def test_gen_code(capsys):
    assert main(["gen-code"]) == 0
    lines = capsys.readouterr().out.splitlines()
    assert lines[0] == str(generate_msequence())
    assert len(lines) == 33
    idx, lag, bits = lines[2].split(",")
    assert (idx, lag) == ("1", "2")
    assert bits == lines[0][-2:] + lines[0][:-2]


def test_gen_code_collision(capsys):
    assert main(["gen-code", "--num-chars", "64", "--bits-per-shift", "1"]) != 0
    assert "error" in capsys.readouterr().err


def test_filter(tmp_path, rng):
    src, dst = tmp_path / "in.txt", tmp_path / "out.txt"
    write_epochs(src, [Epoch(rng.standard_normal((1, 504)) + 3.0, 240.0, 252, 2)])
    assert main(["filter", str(src), str(dst)]) == 0
    (out,) = load_epochs(dst)
    assert out.data.shape == (1, 504)
    assert abs(out.data.mean()) < 0.2


def test_simulate_requires_seed():
    with pytest.raises(SystemExit):
        main(["simulate"])


def test_simulate_deterministic(tmp_path):
    args = ["simulate", "--seed", "3", "--trials", "20", "--repetitions", "1,2", "--noise-sigma", "15"]
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    assert main(args + ["-o", str(a)]) == 0
    assert main(args + ["-o", str(b)]) == 0
    assert a.read_bytes() == b.read_bytes()
    assert a.read_text().count("\n") == 3


def test_baseline_json(tmp_path):
    out = tmp_path / "r.json"
    assert main(["baseline", "--seed", "1", "--trials", "5", "--repetitions", "1", "-o", str(out), "--format", "json"]) == 0
    assert '"calibrated"' in out.read_text()


def test_decode(tmp_path, capsys):
    cfg = SynthConfig()
    layout = KeyboardLayout()
    eps = [synth_epoch(cfg, layout.position(c), 2, i) for i, c in enumerate("ZOO")]
    path = tmp_path / "word.txt"
    write_epochs(path, eps)
    dict_path = tmp_path / "d.txt"
    dict_path.write_text("zoo\ncat\nzap\n")
    assert main(["decode", str(path), "--dictionary", str(dict_path)]) == 0
    out = capsys.readouterr().out
    assert "letter 1: lag=- score=- feedback=(none)" in out
    assert "resolved: ZOO after 2 letters" in out


def test_decode_bad_file(tmp_path, capsys):
    p = tmp_path / "bad.txt"
    p.write_text("nonsense\n")
    assert main(["decode", str(p)]) == 1
    assert "expected '#cvep-epoch v1' header" in capsys.readouterr().err
