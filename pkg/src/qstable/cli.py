"""Command-line harness emitting deterministic CSV artifacts.

Every subcommand takes the common flags --seed/--out/--replicates/
--threads plus --config FILE holding plain ``key=value`` lines (keys are
flag names, dashes or underscores); explicit flags win over file
entries.  Floats print with 17 significant digits, so a fixed
configuration and seed reproduce output files byte for byte.  Worker
threads split replicates into contiguous stream-id blocks, which keeps
per-replicate draws independent of how the work is scheduled.
"""

from __future__ import annotations

import argparse
import math
import sys
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path

import numpy as np

from .analysis import optimize_thresholds, tail_constants, variance_coefficient
from .coding import ThresholdScheme
from .cs import run_recovery_experiment, summarize_errors
from .dist import ZeroPlus, is_zero_plus, validate_alpha
from .errors import DegenerateSchemeError, EstimationError
from .mc import simulate_1bit, simulate_multibit
from .rng import RngStream
from .tabulation import build_table, load_table, lookup_batch, save_table

__all__ = ["main"]

_TRUE_WORDS = {"1", "true", "yes", "on"}
_FALSE_WORDS = {"0", "false", "no", "off"}


# ---------------------------------------------------------------------------
# flag value parsers


def _parse_alpha(text: str):
    t = text.strip().lower()
    if t in ("0+", "zeroplus", "zero-plus", "zero_plus"):
        return ZeroPlus
    try:
        value = float(t)
    except ValueError:
        raise argparse.ArgumentTypeError(
            f"alpha must be a number in (0, 2] or '0+', got {text!r}"
        ) from None
    return float(validate_alpha(value))


def _parse_grid(text: str) -> np.ndarray:
    """'lo:hi:count' (inclusive linspace) or a comma-separated list."""
    if ":" in text:
        parts = text.split(":")
        if len(parts) != 3:
            raise argparse.ArgumentTypeError("grid must be lo:hi:count or v1,v2,...")
        lo, hi, count = float(parts[0]), float(parts[1]), int(parts[2])
        if count < 1 or not hi >= lo:
            raise argparse.ArgumentTypeError("grid needs hi >= lo and count >= 1")
        return np.linspace(lo, hi, count)
    return _parse_floats(text)


def _parse_floats(text: str) -> np.ndarray:
    values = [float(v) for v in text.split(",") if v.strip()]
    if not values:
        raise argparse.ArgumentTypeError("expected a comma-separated number list")
    return np.array(values)


def _parse_ints(text: str) -> tuple:
    values = [int(v) for v in text.split(",") if v.strip()]
    if not values:
        raise argparse.ArgumentTypeError("expected a comma-separated integer list")
    return tuple(values)


# ---------------------------------------------------------------------------
# CSV output


def _fmt(value) -> str:
    if value is None:
        return ""
    if isinstance(value, (bool, np.bool_)):
        return str(bool(value))
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        return f"{float(value):.17g}"
    return str(value)


def _write_csv(out, header, rows) -> None:
    lines = [",".join(header)]
    lines.extend(",".join(_fmt(v) for v in row) for row in rows)
    text = "\n".join(lines) + "\n"
    if out in (None, "-"):
        sys.stdout.write(text)
    else:
        Path(out).write_text(text)


# ---------------------------------------------------------------------------
# config files


def _read_config(path) -> dict:
    entries = {}
    for lineno, raw in enumerate(Path(path).read_text().splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ValueError(f"{path}:{lineno}: expected key=value")
        key, _, value = line.partition("=")
        entries[key.strip().replace("-", "_")] = value.strip()
    return entries


def _convert_config(subparser: argparse.ArgumentParser, entries: dict) -> dict:
    actions = {a.dest: a for a in subparser._actions}
    out = {}
    for key, text in entries.items():
        if key == "config":
            raise ValueError("config files cannot nest")
        action = actions.get(key)
        if action is None:
            raise ValueError(f"unknown config key {key!r}")
        if isinstance(action, (argparse._StoreTrueAction, argparse._StoreFalseAction)):
            low = text.lower()
            if low not in _TRUE_WORDS | _FALSE_WORDS:
                raise ValueError(f"config key {key!r} expects a boolean, got {text!r}")
            flag_on = low in _TRUE_WORDS
            out[key] = flag_on if isinstance(action, argparse._StoreTrueAction) else not flag_on
        elif action.type is not None:
            out[key] = action.type(text)
        else:
            out[key] = text
    return out


# ---------------------------------------------------------------------------
# shared plumbing


def _replicate_chunks(total: int, parts: int):
    """Contiguous (lo, hi) ranges covering [0, total), sizes within one."""
    parts = max(1, min(int(parts), total))
    base, extra = divmod(total, parts)
    ranges = []
    lo = 0
    for i in range(parts):
        size = base + (1 if i < extra else 0)
        if size:
            ranges.append((lo, lo + size))
        lo += size
    return ranges


def _run_chunked(fn, total: int, threads: int):
    """fn over replicate ranges, results in range order."""
    chunks = _replicate_chunks(total, threads)
    if len(chunks) == 1:
        return [fn(chunks[0])]
    with ThreadPoolExecutor(max_workers=len(chunks)) as pool:
        return list(pool.map(fn, chunks))


def _ladder_etas(eta_last: float, t: float, m: int) -> np.ndarray:
    if not t > 1.0:
        raise ValueError("ladder ratio t must exceed 1")
    return eta_last * t ** np.arange(m - 1, -1, -1, dtype=float)


def _require(condition: bool, message: str) -> None:
    if not condition:
        raise ValueError(message)


# ---------------------------------------------------------------------------
# variance-curve


def _conf_variance_curve(p):
    p.add_argument("--alpha", type=_parse_alpha, help="stable exponent, 0+ for the limit")
    p.add_argument("--m", type=int, default=1, help="number of thresholds (default 1)")
    p.add_argument("--grid", type=_parse_grid, help="sweep values: lo:hi:count or list")
    p.add_argument("--ladder-t", type=float, help="strategy 1: eta_i = t^(m-i) * grid value")
    p.add_argument("--eta-first", type=float, help="strategy 2: fixed largest eta (m=3)")
    p.add_argument("--eta-last", type=float, help="strategy 2: fixed smallest eta (m=3)")


def _cmd_variance_curve(args) -> int:
    _require(args.alpha is not None, "need --alpha")
    _require(args.grid is not None, "need --grid")
    m = args.m
    if m == 1:
        schemes = (np.array([g]) for g in args.grid)
    elif args.ladder_t is not None:
        powers = _ladder_etas(1.0, args.ladder_t, m)
        schemes = (powers * g for g in args.grid)
    elif args.eta_first is not None or args.eta_last is not None:
        _require(m == 3, "fixed-endpoint sweeps take --m 3")
        _require(
            args.eta_first is not None and args.eta_last is not None,
            "need both --eta-first and --eta-last",
        )
        schemes = (np.array([args.eta_first, g, args.eta_last]) for g in args.grid)
    else:
        raise ValueError("for m > 1 give --ladder-t or --eta-first/--eta-last")
    rows = []
    for etas in schemes:
        rows.append(tuple(etas) + (variance_coefficient(args.alpha, etas),))
    header = tuple(f"eta_{i + 1}" for i in range(m)) + ("V",)
    _write_csv(args.out, header, rows)
    return 0


# ---------------------------------------------------------------------------
# simulate-mse


def _conf_simulate_mse(p):
    p.add_argument("--alpha-gen", type=_parse_alpha, help="generation exponent")
    p.add_argument("--alpha-est", type=_parse_alpha, help="estimation exponent (defaults to --alpha-gen)")
    p.add_argument("--eta", type=float, help="single normalized threshold (1-bit)")
    p.add_argument("--etas", type=_parse_floats, help="decreasing eta list (multibit)")
    p.add_argument("--ladder-eta", type=float, help="smallest eta of a geometric ladder")
    p.add_argument("--ladder-t", type=float, help="ladder ratio (with --ladder-eta)")
    p.add_argument("--m", type=int, default=3, help="ladder size (default 3)")
    p.add_argument("--lam", type=float, default=1.0, help="true scale (default 1)")
    p.add_argument("--n-list", type=_parse_ints, help="sample sizes, comma separated")
    p.add_argument("--table", help="SQTB file adding 'table' estimator rows (m=3)")
    p.add_argument("--table-mode", choices=("interp", "nearest"), default="interp")


def _resolve_scheme_etas(args) -> np.ndarray:
    given = sum(v is not None for v in (args.eta, args.etas, args.ladder_eta))
    _require(given == 1, "give exactly one of --eta, --etas, --ladder-eta")
    if args.eta is not None:
        etas = np.array([float(args.eta)])
    elif args.etas is not None:
        etas = np.asarray(args.etas, dtype=float)
    else:
        _require(args.ladder_t is not None, "--ladder-eta needs --ladder-t")
        etas = _ladder_etas(float(args.ladder_eta), float(args.ladder_t), args.m)
    _require(bool(np.all(etas > 0.0)), "etas must be positive")
    _require(bool(np.all(np.diff(etas) < 0.0)) or etas.size == 1, "etas must be strictly decreasing")
    return etas


def _check_table_matches(table, alpha_est, etas) -> None:
    same_family = is_zero_plus(alpha_est) == is_zero_plus(table.alpha)
    if same_family and not is_zero_plus(alpha_est):
        same_family = abs(float(alpha_est) - float(table.alpha)) <= 1e-12
    _require(same_family, "table alpha does not match --alpha-est")
    want = (float(etas[0] / etas[1]), float(etas[0] / etas[2]))
    have = table.threshold_ratios
    _require(
        all(math.isclose(w, h, rel_tol=1e-9) for w, h in zip(want, have)),
        f"table threshold ratios {have} do not match the scheme (want {want})",
    )


def _mse_chunk(args, a_gen, a_est, etas, n, stream, table, lohi):
    lo, hi = lohi
    sub = stream.child(stream.stream_id + lo)
    lam = args.lam
    out = {}
    if etas.size == 1:
        r = simulate_1bit(a_gen, a_est, float(etas[0]), n, hi - lo, sub, lam=lam)
        out["mle"] = (r.mse * (hi - lo), hi - lo)
        out["corrected"] = (r.mse_corrected * (hi - lo), hi - lo)
        return out
    _, counts, est, corr = simulate_multibit(
        a_gen, a_est, etas, n, hi - lo, sub, lam=lam, return_estimates=True
    )
    for name, values in (("mle", est), ("corrected", corr)):
        good = np.isfinite(values)
        out[name] = (float(((values[good] - lam) ** 2).sum()), int(good.sum()))
    if table is not None:
        looked = lookup_batch(table, counts, lam / float(etas[0]), mode=args.table_mode)
        good = np.isfinite(looked)
        out["table"] = (float(((looked[good] - lam) ** 2).sum()), int(good.sum()))
    return out


def _cmd_simulate_mse(args) -> int:
    a_gen = args.alpha_gen if args.alpha_gen is not None else args.alpha_est
    a_est = args.alpha_est if args.alpha_est is not None else args.alpha_gen
    _require(a_gen is not None, "need --alpha-gen or --alpha-est")
    _require(args.n_list is not None, "need --n-list")
    _require(args.replicates >= 1, "--replicates must be positive")
    etas = _resolve_scheme_etas(args)
    table = None
    if args.table is not None:
        _require(etas.size == 3, "--table needs a 3-threshold scheme")
        table = load_table(args.table)
        _check_table_matches(table, a_est, etas)
    coefficient = variance_coefficient(a_est, etas)
    stream = RngStream(seed=args.seed, stream_id=0)
    rows = []
    for n in args.n_list:
        sums: dict = {}
        for part in _run_chunked(
            lambda lohi: _mse_chunk(args, a_gen, a_est, etas, n, stream, table, lohi),
            args.replicates,
            args.threads,
        ):
            for name, (sq, cnt) in part.items():
                acc_sq, acc_cnt = sums.get(name, (0.0, 0))
                sums[name] = (acc_sq + sq, acc_cnt + cnt)
        theory = args.lam * args.lam * coefficient / n
        for name in ("mle", "corrected", "table"):
            if name not in sums:
                continue
            sq, cnt = sums[name]
            if cnt == 0:
                raise EstimationError(f"all replicates failed for estimator {name} at n={n}")
            dropped = args.replicates - cnt
            if dropped:
                print(f"note: dropped {dropped} failed replicate(s) for {name} at n={n}", file=sys.stderr)
            rows.append((n, name, sq / cnt, theory))
    _write_csv(args.out, ("n", "estimator", "mse", "theory_mse"), rows)
    return 0


# ---------------------------------------------------------------------------
# optimize-thresholds


def _conf_optimize(p):
    p.add_argument("--alpha", type=_parse_alpha, help="stable exponent, 0+ for the limit")
    p.add_argument("--m", type=int, help="number of thresholds (1, 3 or 5)")


def _cmd_optimize(args) -> int:
    _require(args.alpha is not None and args.m is not None, "need --alpha and --m")
    etas, value = optimize_thresholds(args.alpha, args.m)
    print("(" + ", ".join(f"{e:.3f}" for e in etas) + f"; {value:.3f})")
    if args.out not in (None, "-"):
        header = tuple(f"eta_{i + 1}" for i in range(len(etas))) + ("V",)
        _write_csv(args.out, header, [tuple(etas) + (value,)])
    return 0


# ---------------------------------------------------------------------------
# tail-bounds


def _conf_tail_bounds(p):
    p.add_argument("--alpha", type=_parse_alpha, help="stable exponent, 0+ for the limit")
    p.add_argument("--etas", type=_parse_grid, help="normalized thresholds (default 1.0:2.0:5)")
    p.add_argument("--epsilons", type=_parse_grid, help="relative errors (default 0:1:21)")


def _cmd_tail_bounds(args) -> int:
    _require(args.alpha is not None, "need --alpha")
    etas = args.etas if args.etas is not None else np.linspace(1.0, 2.0, 5)
    epsilons = args.epsilons if args.epsilons is not None else np.linspace(0.0, 1.0, 21)
    rows = []
    for eta in etas:
        for eps in epsilons:
            tc = tail_constants(args.alpha, float(eta), float(eps))
            rows.append(
                (
                    float(eta),
                    float(eps),
                    tc.exponent_right,
                    math.nan if tc.exponent_left is None else tc.exponent_left,
                    tc.g_right,
                    math.nan if tc.g_left is None else tc.g_left,
                )
            )
    header = ("eta", "epsilon", "exponent_right", "exponent_left", "g_right", "g_left")
    _write_csv(args.out, header, rows)
    return 0


# ---------------------------------------------------------------------------
# build-table


def _conf_build_table(p):
    p.add_argument("--alpha", type=_parse_alpha, help="stable exponent, 0+ for the limit")
    p.add_argument("--ratios", type=_parse_floats, help="threshold ratios C2/C1,C3/C1")
    p.add_argument("--ladder-t", type=float, help="geometric ratios t,t^2 instead of --ratios")
    p.add_argument("--T", type=int, help="lattice resolution")


def _cmd_build_table(args) -> int:
    _require(args.alpha is not None, "need --alpha")
    _require(args.T is not None, "need --T")
    _require(args.out not in (None, "-"), "build-table needs --out FILE (binary output)")
    if args.ratios is not None:
        ratios = [float(r) for r in args.ratios]
        _require(len(ratios) == 2, "--ratios takes exactly two values")
    else:
        _require(args.ladder_t is not None, "give --ratios or --ladder-t")
        ratios = [float(args.ladder_t), float(args.ladder_t) ** 2]
    _require(1.0 < ratios[0] < ratios[1], "ratios must satisfy 1 < r2 < r3")
    scheme = ThresholdScheme(alpha=args.alpha, thresholds=np.array([1.0, ratios[0], ratios[1]]))
    table = build_table(args.alpha, scheme, args.T)
    save_table(table, args.out)
    bad = int(np.count_nonzero(~np.isfinite(table.entries)))
    print(f"wrote {args.out}: T={args.T}, {table.entries.size} cells, {bad} unsolvable")
    return 0


# ---------------------------------------------------------------------------
# cs-recover


def _conf_cs_recover(p):
    p.add_argument("--N", type=int, default=1000, help="signal dimension")
    p.add_argument("--K", type=int, default=20, help="support size")
    p.add_argument("--value-scale", type=float, default=5.0, help="sd of nonzero values")
    p.add_argument("--zetas", type=_parse_floats, default=np.array([2.0, 5.0, 10.0, 20.0]),
                   help="measurement budgets as multiples of K log(N/0.01)")
    p.add_argument("--n-list", type=_parse_ints, default=(20, 50, 100),
                   help="auxiliary sample sizes for the scale estimate")
    p.add_argument("--etas", type=_parse_floats, default=np.array([0.2, 0.5, 1.5, 2.0, 3.0]),
                   help="normalized thresholds for the quantized estimate")
    p.add_argument("--trials", type=int, default=1000, help="independent signal/design draws")
    p.add_argument("--alpha", type=_parse_alpha, default=0.05, help="design exponent")
    p.add_argument("--scheme-bits", type=int, choices=(1, 2), default=1)
    p.add_argument("--quantiles", type=_parse_floats, default=np.array([0.5, 0.75, 0.95]))
    p.add_argument("--skip-true-k", action="store_true", help="drop the oracle variant")
    p.add_argument("--skip-full-info", action="store_true", help="drop the unquantized variant")


def _cmd_cs_recover(args) -> int:
    _require(args.trials >= 1, "--trials must be positive")
    _require(not is_zero_plus(args.alpha), "the design needs a real alpha")

    def chunk(lohi):
        return run_recovery_experiment(
            N=args.N,
            K=args.K,
            value_scale=args.value_scale,
            zetas=tuple(float(z) for z in args.zetas),
            n_list=tuple(args.n_list),
            eta_list=tuple(float(e) for e in args.etas),
            trials=args.trials,
            seed=args.seed,
            alpha=args.alpha,
            scheme_bits=args.scheme_bits,
            quantiles=tuple(float(q) for q in args.quantiles),
            include_true_k=not args.skip_true_k,
            include_full_info=not args.skip_full_info,
            trial_range=lohi,
        )

    parts = _run_chunked(chunk, args.trials, args.threads)
    errors = np.concatenate([diag["errors"] for _, diag in parts], axis=2)
    ties = sum(diag["simultaneous_positive"] for _, diag in parts)
    variants = parts[0][1]["variants"]
    rows = [
        (r["trial"], r["zeta"], r["n"], r["eta"], r["estimator"], r["quantile"], r["error"])
        for r in summarize_errors(
            variants, tuple(float(z) for z in args.zetas), errors,
            tuple(float(q) for q in args.quantiles),
        )
    ]
    _write_csv(args.out, ("trial", "zeta", "n", "eta", "estimator", "quantile", "error"), rows)
    if ties:
        print(f"note: {ties} simultaneous-positive score pairs became abstentions", file=sys.stderr)
    return 0


# ---------------------------------------------------------------------------
# wiring


def _add_common(p):
    p.add_argument("--seed", type=int, default=0, help="base RNG seed (u64)")
    p.add_argument("--out", default="-", help="output path, - for stdout")
    p.add_argument("--replicates", type=int, default=100_000,
                   help="Monte Carlo replicates where applicable (default 1e5)")
    p.add_argument("--threads", type=int, default=1, help="worker threads for replicated runs")
    p.add_argument("--config", help="key=value file supplying flag defaults")


_COMMANDS = (
    ("variance-curve", "asymptotic variance coefficient sweeps", _conf_variance_curve, _cmd_variance_curve),
    ("simulate-mse", "empirical vs theoretical MSE of the estimators", _conf_simulate_mse, _cmd_simulate_mse),
    ("optimize-thresholds", "variance-minimizing normalized thresholds", _conf_optimize, _cmd_optimize),
    ("tail-bounds", "Chernoff tail constants over an epsilon grid", _conf_tail_bounds, _cmd_tail_bounds),
    ("build-table", "precompute and save a 2-bit MLE lattice table", _conf_build_table, _cmd_build_table),
    ("cs-recover", "one-scan sign recovery error quantiles", _conf_cs_recover, _cmd_cs_recover),
)


def _build_parser():
    parser = argparse.ArgumentParser(
        prog="qstable",
        description="Scale estimation for symmetric stable laws from quantized samples.",
    )
    sub = parser.add_subparsers(dest="command", required=True, metavar="command")
    registry = {}
    for name, help_text, configure, run in _COMMANDS:
        p = sub.add_parser(name, help=help_text)
        configure(p)
        _add_common(p)
        p.set_defaults(run=run)
        registry[name] = p
    return parser, registry


def main(argv=None) -> int:
    parser, registry = _build_parser()
    try:
        args = parser.parse_args(argv)
        if args.config:
            defaults = _convert_config(registry[args.command], _read_config(args.config))
            registry[args.command].set_defaults(**defaults)
            args = parser.parse_args(argv)
        return args.run(args)
    except (ValueError, OSError, argparse.ArgumentTypeError, EstimationError, DegenerateSchemeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
