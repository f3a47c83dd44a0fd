from __future__ import annotations

import json

import pytest

from fuchsian_forge.cli import main
from fuchsian_forge.realization import RealizationCertificate


@pytest.fixture(scope="module")
def cert_path(tmp_path_factory):
    path = tmp_path_factory.mktemp("cli") / "cert.json"
    assert main(["realize", "--field", "x^2-5", "--embedding", "1", "--a", "1", "--b", "2+x", "--out", str(path)]) == 0
    return path


def test_realize_writes_certificate(cert_path):
    cert = RealizationCertificate.loads(cert_path.read_text())
    assert cert.field.degree == 2


def test_verify_passes(cert_path, capsys):
    assert main(["verify", str(cert_path)]) == 0
    out = capsys.readouterr().out
    assert "PASS V1 residuals" in out and out.strip().endswith("PASS")


def test_verify_rejects_tampered(cert_path, tmp_path, capsys):
    data = json.loads(cert_path.read_text())
    data["r"] = ["7", "0"]
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps(data))
    assert main(["verify", str(bad)]) == 1
    assert "FAIL" in capsys.readouterr().out


def test_verify_rejects_garbage(tmp_path, capsys):
    bad = tmp_path / "garbage.json"
    bad.write_text("{}")
    assert main(["verify", str(bad)]) == 1
    assert "FAIL well-formed" in capsys.readouterr().out


@pytest.mark.parametrize("fmt", ["certificate-attachment", "table"])
def test_matrices(cert_path, tmp_path, capsys, fmt):
    out = tmp_path / f"mats.{fmt}"
    rc = main(["matrices", str(cert_path), "--M", "2", "--prec-bits", "128", "--format", fmt, "--out", str(out)])
    err = capsys.readouterr().err
    assert rc == 0, err
    assert "FAIL" not in err
    assert "PASS relation" in err
    assert out.read_text()


def test_matrices_failures(cert_path, tmp_path):
    assert main(["matrices", str(cert_path), "--format", "csv", "--out", str(tmp_path / "x")]) == 1
    assert main(["matrices", str(cert_path), "--M", "-1", "--out", str(tmp_path / "x")]) == 1


def test_theorem23(tmp_path, capsys):
    table = tmp_path / "table.json"
    assert main(["theorem23", "--out", str(table)]) == 0
    out = capsys.readouterr().out
    assert "FAIL" not in out and out.count("PASS") >= 14 + 9 + 9
    assert len(json.loads(table.read_text())["traces"]) == 14


def test_realize_failures(tmp_path, capsys):
    out = str(tmp_path / "c.json")
    assert main(["realize", "--a", "-1", "--b", "-1", "--out", out]) == 1
    assert "NotRealSplit" in capsys.readouterr().err
    assert main(["realize", "--field", "x^2-1", "--embedding", "1", "--a", "x", "--b", "1", "--out", out]) == 1
    assert "x - 1" in capsys.readouterr().err
    assert main(["realize", "--field", "x^2+1", "--a", "1", "--b", "1", "--out", out]) == 1
    assert "NoSuchRealEmbedding" in capsys.readouterr().err


def test_bad_rational_argument():
    with pytest.raises(SystemExit):
        main(["realize", "--a", "1", "--b", "1", "--epsilon", "abc", "--out", "-"])
