"""End-to-end checks of the command line interface.

Every test drives ``qstable.cli.main`` in-process with an argv list, so we
can assert on exit codes, stdout/stderr, and output file bytes without
spawning subprocesses.
"""

import math

import numpy as np
import pytest

from qstable.analysis import variance_coefficient
from qstable.cli import _ladder_etas, _replicate_chunks, main


def _parse_csv(text):
    lines = text.strip("\n").split("\n")
    header = lines[0].split(",")
    return [dict(zip(header, line.split(","))) for line in lines[1:]]


def _run(argv, capsys):
    rc = main(argv)
    captured = capsys.readouterr()
    return rc, captured.out, captured.err


# ---------------------------------------------------------------------------
# helpers


def test_replicate_chunks_partition():
    for total, parts in [(10, 3), (7, 1), (5, 9), (100, 8)]:
        chunks = _replicate_chunks(total, parts)
        assert chunks[0][0] == 0
        assert chunks[-1][1] == total
        for (a, b), (c, _) in zip(chunks, chunks[1:]):
            assert b == c
            assert b > a
        sizes = [b - a for a, b in chunks]
        assert max(sizes) - min(sizes) <= 1


def test_ladder_etas_geometric():
    etas = _ladder_etas(0.5, 3.0, 3)
    assert np.allclose(etas, [4.5, 1.5, 0.5])
    with pytest.raises(ValueError):
        _ladder_etas(0.5, 1.0, 3)


# ---------------------------------------------------------------------------
# variance-curve


def test_variance_curve_locates_one_bit_optimum(capsys):
    rc, out, _ = _run(
        ["variance-curve", "--alpha", "0+", "--grid", "1.4:1.8:41"], capsys
    )
    assert rc == 0
    rows = _parse_csv(out)
    assert set(rows[0]) == {"eta_1", "V"}
    assert len(rows) == 41
    best = min(rows, key=lambda r: float(r["V"]))
    assert abs(float(best["eta_1"]) - 1.593624253) < 0.011
    assert abs(float(best["V"]) - 1.54413865237) < 0.002


def test_variance_curve_ladder_mode(capsys):
    rc, out, _ = _run(
        [
            "variance-curve",
            "--alpha",
            "1.0",
            "--m",
            "3",
            "--ladder-t",
            "3",
            "--grid",
            "0.4:0.9:11",
        ],
        capsys,
    )
    assert rc == 0
    rows = _parse_csv(out)
    assert list(rows[0]) == ["eta_1", "eta_2", "eta_3", "V"]
    for row in rows:
        e1, e2, e3 = (float(row[k]) for k in ("eta_1", "eta_2", "eta_3"))
        assert e1 == pytest.approx(9.0 * e3, rel=1e-12)
        assert e2 == pytest.approx(3.0 * e3, rel=1e-12)
    values = [float(r["V"]) for r in rows]
    # the ladder family straddles the two-bit optimum, so its best point
    # must beat the best one-bit coefficient
    assert min(values) < 2.46740110027


def test_variance_curve_endpoint_mode(capsys):
    rc, out, _ = _run(
        [
            "variance-curve",
            "--alpha",
            "2.0",
            "--m",
            "3",
            "--eta-first",
            "0.55",
            "--eta-last",
            "0.09",
            "--grid",
            "0.12:0.4:15",
        ],
        capsys,
    )
    assert rc == 0
    rows = _parse_csv(out)
    for row in rows:
        assert float(row["eta_1"]) == 0.55
        assert float(row["eta_3"]) == 0.09
    best = min(float(r["V"]) for r in rows)
    assert best < 2.25


def test_variance_curve_writes_file(tmp_path, capsys):
    out_path = tmp_path / "curve.csv"
    rc, out, _ = _run(
        [
            "variance-curve",
            "--alpha",
            "1.0",
            "--grid",
            "0.8:1.2:5",
            "--out",
            str(out_path),
        ],
        capsys,
    )
    assert rc == 0
    assert out == ""
    text = out_path.read_text()
    assert text.endswith("\n")
    assert len(_parse_csv(text)) == 5


# ---------------------------------------------------------------------------
# optimize-thresholds


def test_optimize_thresholds_stdout_format(capsys):
    rc, out, _ = _run(["optimize-thresholds", "--alpha", "2.0", "--m", "3"], capsys)
    assert rc == 0
    assert out == "(0.547, 0.195, 0.093; 2.236)\n"


def test_optimize_thresholds_csv(tmp_path, capsys):
    out_path = tmp_path / "opt.csv"
    rc, _, _ = _run(
        ["optimize-thresholds", "--alpha", "1.0", "--m", "1", "--out", str(out_path)],
        capsys,
    )
    assert rc == 0
    rows = _parse_csv(out_path.read_text())
    assert len(rows) == 1
    assert float(rows[0]["eta_1"]) == pytest.approx(1.0, abs=1e-6)
    assert float(rows[0]["V"]) == pytest.approx(math.pi**2 / 4, rel=1e-9)


# ---------------------------------------------------------------------------
# tail-bounds


def test_tail_bounds_limit_rows(capsys):
    rc, out, _ = _run(
        [
            "tail-bounds",
            "--alpha",
            "0+",
            "--etas",
            "1.0",
            "--epsilons",
            "0.0,0.5,1.0,1.5",
        ],
        capsys,
    )
    assert rc == 0
    rows = _parse_csv(out)
    assert list(rows[0]) == [
        "eta",
        "epsilon",
        "exponent_right",
        "exponent_left",
        "g_right",
        "g_left",
    ]

    flat = {float(r["epsilon"]): r for r in rows}
    zero = flat[0.0]
    assert float(zero["exponent_right"]) == 0.0
    assert float(zero["exponent_left"]) == 0.0
    two_v = 2.0 * (math.e - 1.0)
    assert float(zero["g_right"]) == pytest.approx(two_v, rel=1e-12)
    assert float(zero["g_left"]) == pytest.approx(two_v, rel=1e-12)

    # at epsilon = 1 the left deviation event is "estimate hits zero", whose
    # exponent collapses to -log F(1/eta), exactly 1 for this distribution
    assert float(flat[1.0]["exponent_left"]) == pytest.approx(1.0, rel=1e-12)
    assert float(flat[1.0]["g_left"]) == pytest.approx(1.0, rel=1e-12)

    wide = flat[1.5]
    assert math.isnan(float(wide["exponent_left"]))
    assert math.isnan(float(wide["g_left"]))
    assert float(wide["exponent_right"]) > 0.0


def test_tail_bounds_right_dominates(capsys):
    rc, out, _ = _run(
        [
            "tail-bounds",
            "--alpha",
            "1.0",
            "--etas",
            "1.0,1.5",
            "--epsilons",
            "0.2,0.4",
        ],
        capsys,
    )
    assert rc == 0
    for row in _parse_csv(out):
        assert float(row["g_right"]) > float(row["g_left"])


# ---------------------------------------------------------------------------
# simulate-mse


def test_simulate_mse_matches_theory_under_mismatch(capsys):
    rc, out, _ = _run(
        [
            "simulate-mse",
            "--alpha-gen",
            "0.05",
            "--alpha-est",
            "0+",
            "--eta",
            "1.593624253",
            "--n-list",
            "100",
            "--replicates",
            "20000",
            "--seed",
            "3",
        ],
        capsys,
    )
    assert rc == 0
    rows = {r["estimator"]: r for r in _parse_csv(out)}
    assert set(rows) == {"mle", "corrected"}
    for row in rows.values():
        ratio = float(row["mse"]) / float(row["theory_mse"])
        assert 0.95 < ratio < 1.15


def test_simulate_mse_correction_helps_at_small_n(capsys):
    rc, out, _ = _run(
        [
            "simulate-mse",
            "--alpha-gen",
            "0+",
            "--eta",
            "1.593624253",
            "--n-list",
            "10",
            "--replicates",
            "20000",
            "--seed",
            "4",
        ],
        capsys,
    )
    assert rc == 0
    rows = {r["estimator"]: r for r in _parse_csv(out)}
    assert float(rows["corrected"]["mse"]) < float(rows["mle"]["mse"])


def test_simulate_mse_deterministic_bytes(tmp_path, capsys):
    argv = [
        "simulate-mse",
        "--alpha-gen",
        "1.0",
        "--eta",
        "1.0",
        "--n-list",
        "50,200",
        "--replicates",
        "2000",
        "--seed",
        "7",
    ]
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    assert _run(argv + ["--out", str(a)], capsys)[0] == 0
    assert _run(argv + ["--out", str(b)], capsys)[0] == 0
    assert a.read_bytes() == b.read_bytes()

    c, d = tmp_path / "c.csv", tmp_path / "d.csv"
    assert _run(argv + ["--threads", "2", "--out", str(c)], capsys)[0] == 0
    assert _run(argv + ["--threads", "2", "--out", str(d)], capsys)[0] == 0
    assert c.read_bytes() == d.read_bytes()


def test_simulate_mse_rejects_conflicting_eta_flags(capsys):
    rc, _, err = _run(
        [
            "simulate-mse",
            "--alpha-gen",
            "1.0",
            "--eta",
            "1.0",
            "--etas",
            "4.5,1.5,0.5",
            "--n-list",
            "50",
        ],
        capsys,
    )
    assert rc == 1
    assert err.startswith("error:")


# ---------------------------------------------------------------------------
# build-table and table-backed simulation


def test_build_table_and_simulate_with_it(tmp_path, capsys):
    table_path = tmp_path / "ladder.sqtb"
    rc, out, _ = _run(
        [
            "build-table",
            "--alpha",
            "1.0",
            "--ladder-t",
            "3",
            "--T",
            "20",
            "--out",
            str(table_path),
        ],
        capsys,
    )
    assert rc == 0
    assert out == f"wrote {table_path}: T=20, 1771 cells, 0 unsolvable\n"
    assert table_path.stat().st_size > 0

    rc, out, _ = _run(
        [
            "simulate-mse",
            "--alpha-gen",
            "1.0",
            "--etas",
            "4.5,1.5,0.5",
            "--table",
            str(table_path),
            "--n-list",
            "60",
            "--replicates",
            "2000",
            "--seed",
            "5",
        ],
        capsys,
    )
    assert rc == 0
    rows = {r["estimator"]: r for r in _parse_csv(out)}
    assert set(rows) == {"mle", "corrected", "table"}
    # a T=20 grid is coarse, but its MSE should stay in the same ballpark
    # as the exact solver on identical counts
    assert float(rows["table"]["mse"]) < 1.5 * float(rows["mle"]["mse"])


def test_build_table_requires_real_output_file(capsys):
    rc, _, err = _run(
        ["build-table", "--alpha", "1.0", "--ladder-t", "3", "--T", "8"], capsys
    )
    assert rc == 1
    assert err.startswith("error:")


def test_simulate_mse_rejects_mismatched_table(tmp_path, capsys):
    table_path = tmp_path / "ladder.sqtb"
    rc, _, _ = _run(
        [
            "build-table",
            "--alpha",
            "1.0",
            "--ladder-t",
            "3",
            "--T",
            "8",
            "--out",
            str(table_path),
        ],
        capsys,
    )
    assert rc == 0
    rc, _, err = _run(
        [
            "simulate-mse",
            "--alpha-gen",
            "1.0",
            "--etas",
            "4.0,2.0,1.0",
            "--table",
            str(table_path),
            "--n-list",
            "50",
            "--replicates",
            "500",
        ],
        capsys,
    )
    assert rc == 1
    assert "ratio" in err


# ---------------------------------------------------------------------------
# cs-recover


def test_cs_recover_schema_and_thread_invariance(tmp_path, capsys):
    argv = [
        "cs-recover",
        "--N",
        "40",
        "--K",
        "3",
        "--zetas",
        "2,5",
        "--n-list",
        "20",
        "--etas",
        "1.5",
        "--trials",
        "6",
        "--seed",
        "4",
        "--skip-full-info",
        "--quantiles",
        "0.5,0.75",
    ]
    rc, out, _ = _run(argv, capsys)
    assert rc == 0
    rows = _parse_csv(out)
    assert list(rows[0]) == [
        "trial",
        "zeta",
        "n",
        "eta",
        "estimator",
        "quantile",
        "error",
    ]
    estimators = {r["estimator"] for r in rows}
    assert estimators == {"true-k", "1bit"}
    # 2 variants x 2 zetas x 2 quantiles
    assert len(rows) == 8
    for row in rows:
        assert row["trial"] == "6"
        if row["estimator"] == "true-k":
            assert row["n"] == "" and row["eta"] == ""
        else:
            assert row["n"] == "20" and float(row["eta"]) == 1.5
        assert float(row["error"]) >= 0.0

    a, b = tmp_path / "t1.csv", tmp_path / "t3.csv"
    assert _run(argv + ["--threads", "1", "--out", str(a)], capsys)[0] == 0
    assert _run(argv + ["--threads", "3", "--out", str(b)], capsys)[0] == 0
    assert a.read_bytes() == b.read_bytes()


def test_cs_recover_validates_scheme_bits(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["cs-recover", "--N", "20", "--K", "2", "--scheme-bits", "3"])
    assert exc.value.code == 2
    capsys.readouterr()


# ---------------------------------------------------------------------------
# config files


def test_config_file_supplies_defaults(tmp_path, capsys):
    cfg = tmp_path / "curve.cfg"
    cfg.write_text(
        "# one-bit variance sweep\n"
        "alpha = 0+\n"
        "grid = 1.0:2.0:3\n"
    )
    rc, out, _ = _run(["variance-curve", "--config", str(cfg)], capsys)
    assert rc == 0
    rows = _parse_csv(out)
    assert [float(r["eta_1"]) for r in rows] == [1.0, 1.5, 2.0]


def test_config_flags_override_file(tmp_path, capsys):
    cfg = tmp_path / "curve.cfg"
    cfg.write_text("alpha = 1.0\ngrid = 1.0:2.0:3\n")
    rc, out, _ = _run(
        ["variance-curve", "--config", str(cfg), "--grid", "1.5:1.5:1"], capsys
    )
    assert rc == 0
    rows = _parse_csv(out)
    assert len(rows) == 1
    assert float(rows[0]["eta_1"]) == 1.5
    assert float(rows[0]["V"]) == pytest.approx(
        variance_coefficient(1.0, 1.5), rel=1e-12
    )


def test_config_rejects_unknown_key(tmp_path, capsys):
    cfg = tmp_path / "bad.cfg"
    cfg.write_text("alpha = 1.0\nturbo = yes\n")
    rc, _, err = _run(["variance-curve", "--config", str(cfg)], capsys)
    assert rc == 1
    assert "turbo" in err


def test_config_rejects_nesting(tmp_path, capsys):
    inner = tmp_path / "inner.cfg"
    inner.write_text("alpha = 1.0\n")
    outer = tmp_path / "outer.cfg"
    outer.write_text(f"config = {inner}\n")
    rc, _, err = _run(["variance-curve", "--config", str(outer)], capsys)
    assert rc == 1
    assert err.startswith("error:")


def test_config_accepts_dashed_keys_and_booleans(tmp_path, capsys):
    cfg = tmp_path / "cs.cfg"
    cfg.write_text(
        "N = 40\nK = 3\nzetas = 2\nn-list = 20\netas = 1.5\n"
        "trials = 4\nskip-full-info = true\nquantiles = 0.5\n"
    )
    rc, out, _ = _run(["cs-recover", "--config", str(cfg)], capsys)
    assert rc == 0
    estimators = {r["estimator"] for r in _parse_csv(out)}
    assert "full-info" not in estimators
    assert estimators == {"true-k", "1bit"}


# ---------------------------------------------------------------------------
# error handling


def test_missing_required_flag_is_reported(capsys):
    rc, _, err = _run(["variance-curve"], capsys)
    assert rc == 1
    assert err.startswith("error:")


def test_unknown_flag_exits_with_usage_error(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["variance-curve", "--alpha", "1.0", "--frobnicate"])
    assert exc.value.code == 2
    capsys.readouterr()


def test_alpha_outside_range_exits_with_usage_error(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["variance-curve", "--alpha", "3.0"])
    assert exc.value.code == 2
    capsys.readouterr()


def test_no_subcommand_exits_with_usage_error(capsys):
    with pytest.raises(SystemExit):
        main([])
    capsys.readouterr()
