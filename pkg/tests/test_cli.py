import json
import math
import os

import pytest

from qfilab import make_state, save_state
from qfilab.cli import main, resolve_state


def read_csv(path):
    header, columns, rows = None, None, []
    with open(path, "r", encoding="utf-8") as fh:
        for line in fh:
            line = line.rstrip("\n")
            if line.startswith("#"):
                header = line
            elif columns is None:
                columns = line.split(",")
            else:
                rows.append([float(v) for v in line.split(",")])
    return header, columns, rows


def test_fig3a_csv_contract(tmp_path):
    out = tmp_path / "fig3a.csv"
    assert main(["fig3a", "--points", "60", "--out", str(out)]) == 0
    header, columns, rows = read_csv(out)
    assert header.startswith("# qfilab ")
    assert "fig3a" in header and "cutoff=" in header and "points=60" in header
    assert columns == ["mean_n", "snl", "hl", "tmsv_crb", "tmsv_noon_crb", "zeta_noon_crb"]
    assert len(rows) == 60
    for row in rows:
        mean = row[0]
        assert row[1] == pytest.approx(mean**-0.5, rel=1e-10)
        assert row[2] == pytest.approx(1 / mean, rel=1e-10)
        assert row[3] == pytest.approx((mean**2 + 2 * mean) ** -0.5, rel=1e-10)
        assert row[4] == pytest.approx((2 * mean**2 + 2 * mean) ** -0.5, rel=1e-10)
        if mean >= 1.369:
            assert row[5] == 0.0
    finite = [r for r in rows if r[5] > 0]
    assert finite, "sweep should include rows below the crossing"


def test_fig3a_sidecar_provenance(tmp_path):
    out = tmp_path / "fig3a.csv"
    main(["fig3a", "--points", "40", "--out", str(out)])
    sidecar = json.loads((tmp_path / "fig3a.csv.provenance.json").read_text())
    assert sidecar["figure"] == "fig3a"
    assert sidecar["crossing_mean"] == pytest.approx(1.36843, abs=1e-4)
    assert sidecar["divergent_rows"]
    trend = [t["mean_square"] for t in sidecar["mean_square_trend"]]
    assert all(b > a for a, b in zip(trend, trend[1:]))


def test_fig3b_csv_contract(tmp_path):
    out = tmp_path / "fig3b.csv"
    assert main(["fig3b", "--points", "80", "--out", str(out)]) == 0
    _, columns, rows = read_csv(out)
    assert columns == ["mean_n", "noon_crb", "dualfock_crb"]
    crossing = 2 * 1.3684327776
    for mean, noon_crb, dual_crb in rows:
        if mean >= 2.737:
            assert noon_crb == 0.0 and dual_crb == 0.0
        elif mean < crossing - 1e-6:
            assert 0.0 < noon_crb < dual_crb


def test_curve_output_byte_stable(tmp_path):
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    main(["fig3a", "--points", "25", "--out", str(a)])
    main(["fig3a", "--points", "25", "--out", str(b)])
    assert a.read_bytes() == b.read_bytes()


def test_curve_bytes_independent_of_threads(tmp_path, monkeypatch):
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    monkeypatch.setenv("QFILAB_THREADS", "1")
    main(["fig3b", "--points", "25", "--out", str(a)])
    monkeypatch.setenv("QFILAB_THREADS", "4")
    main(["fig3b", "--points", "25", "--out", str(b)])
    assert a.read_bytes() == b.read_bytes()


def test_svg_written(tmp_path):
    out = tmp_path / "fig3a.csv"
    main(["fig3a", "--points", "25", "--out", str(out), "--svg"])
    svg = (tmp_path / "fig3a.svg").read_text()
    assert svg.startswith("<svg") and "polyline" in svg


def test_unreachable_sweep_exits_2(tmp_path, capsys):
    code = main(["fig3a", "--x-min", "0.5", "--x-max", "5", "--points", "10",
                 "--out", str(tmp_path / "x.csv")])
    assert code == 2
    assert "error:" in capsys.readouterr().err


def test_qfi_catalog_noon(capsys):
    assert main(["qfi", "catalog:noon:3"]) == 0
    payload = json.loads(capsys.readouterr().out)
    assert payload["qfi"] == pytest.approx(9.0, rel=1e-9)
    assert payload["fi"] <= payload["qfi"] + 1e-8
    assert set(payload) >= {"phi", "fi", "qfi", "crb", "povm", "pipeline"}


def test_qfi_divergent_family_exits_3(capsys):
    code = main(["qfi", "catalog:zeta_noon:3:100"])
    payload = json.loads(capsys.readouterr().out)
    assert code == 3
    assert payload["qfi"] == "divergent"
    assert payload["crb"] == 0.0
    assert "divergence" in payload


def test_qfi_invalid_catalog_exits_2(capsys):
    assert main(["qfi", "catalog:noon:0"]) == 2
    assert main(["qfi", "catalog:wombat:3"]) == 2
    capsys.readouterr()


def test_fi_scan_constant_for_single_photon(tmp_path):
    out = tmp_path / "scan.csv"
    assert main(["fi-scan", "catalog:noon:1", "--points", "41", "--out", str(out)]) == 0
    _, columns, rows = read_csv(out)
    assert columns == ["phi", "fi", "qfi"]
    for _, fi, qfi in rows:
        assert fi == pytest.approx(1.0, abs=1e-9)
        assert qfi == pytest.approx(1.0, abs=1e-12)


def test_estimate_bytes_reproducible(tmp_path):
    a, b = tmp_path / "a.jsonl", tmp_path / "b.jsonl"
    argv = ["estimate", "catalog:noon:1", "--phi-true", "0.3", "--trials", "200",
            "--reps", "3", "--seed", "11"]
    main(argv + ["--out", str(a)])
    main(argv + ["--out", str(b)])
    assert a.read_bytes() == b.read_bytes()
    lines = a.read_text().splitlines()
    assert len(lines) == 3
    runs = [json.loads(line) for line in lines]
    assert [r["repetition"] for r in runs] == [0, 1, 2]
    assert all(r["rng"] == "philox4x64" for r in runs)


def test_estimate_seed_changes_bytes(tmp_path):
    a, b = tmp_path / "a.jsonl", tmp_path / "b.jsonl"
    base = ["estimate", "catalog:noon:1", "--phi-true", "0.3", "--trials", "200"]
    main(base + ["--seed", "1", "--out", str(a)])
    main(base + ["--seed", "2", "--out", str(b)])
    assert a.read_bytes() != b.read_bytes()


def test_catalog_list(capsys):
    assert main(["catalog", "list"]) == 0
    text = capsys.readouterr().out
    for family in ("noon", "dual_fock", "zeta_noon", "zeta_dual_fock", "tmsv"):
        assert family in text


def test_state_validate_roundtrip(tmp_path, capsys):
    path = tmp_path / "state.json"
    save_state(make_state([(1, 0, 1.0), (0, 1, 1.0j)], cutoff=2), path)
    assert main(["state", "validate", str(path)]) == 0
    payload = json.loads(capsys.readouterr().out)
    assert payload["valid"] and payload["cutoff"] == 2
    assert payload["entries"] == 2


def test_state_validate_rejects_garbage(tmp_path, capsys):
    bad = tmp_path / "bad.json"
    bad.write_text('{"cutoff": 2, "entries": [{"na": 5, "nb": 0, "re": 1.0, "im": 0.0}]}')
    assert main(["state", "validate", str(bad)]) == 2
    assert "invalid" in capsys.readouterr().err


def test_resolve_state_file_and_catalog(tmp_path):
    path = tmp_path / "s.json"
    save_state(make_state([(2, 0, 1.0)], cutoff=2), path)
    state, dist, desc = resolve_state(str(path))
    assert desc.startswith("file:") and dist is None
    state, dist, _ = resolve_state("catalog:tmsv:2")
    assert dist is not None
    assert state.cutoff == 2 * 33  # auto cutoff from the 1e-10 tail bound
