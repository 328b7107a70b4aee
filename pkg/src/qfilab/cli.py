"""Command-line front end.

Subcommands: fig3a, fig3b, qfi, fi-scan, estimate, catalog list,
state validate. CSV outputs are byte stable for fixed flags: floats are
printed with 12 significant digits, rows are assembled in sweep order no
matter how many workers computed them, and every CSV starts with a '#'
header carrying the tool version, the flags, and the cutoff. Divergent
bound rows print a literal 0 and their provenance goes to a JSON sidecar
next to the CSV.

Exit codes: 0 success, 2 validation error, 3 when a divergence was
encountered where a finite value was requested.

States are addressed either by a JSON file path or by a compact catalog
URI, catalog:<family>:<params>, for example catalog:noon:3 or
catalog:zeta_noon:3:1000 (see `qfilab catalog list`).
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
from concurrent.futures import ThreadPoolExecutor

import numpy as np

from . import __version__
from . import catalog as cat
from . import curves
from .curves import SpecError
from .estimation import default_window, run_estimation
from .fisher import FisherReport, fi_scan, qfi_pure
from .fock import apply_beamsplitter, load_state

THREADS_ENV = "QFILAB_THREADS"

_CATALOG_HELP = [
    ("noon:N", "two-branch state with N photons, N >= 1"),
    ("dual_fock:N", "equal occupation |N,N>, N >= 0"),
    ("dual_fock_bs:N", "closed-form splitter image of |N,N>, N >= 1"),
    ("zeta_noon:x[:cutoff]", "1/N^x weighted two-branch family, x > 1 (default cutoff 1000)"),
    ("zeta_noon_doubled:x[:cutoff]", "same weights on 2N-photon branches"),
    ("zeta_dual_fock:x[:cutoff]", "1/N^x weighted |N,N> family"),
    ("tmsv:mean[:cutoff]", "squeezed vacuum, mean total photons > 0 (cutoff from tail bound 1e-10)"),
    ("tmsv_noon:mean[:cutoff]", "two-branch family with the tmsv distribution"),
]


def _worker_count() -> int:
    raw = os.environ.get(THREADS_ENV, "")
    try:
        n = int(raw)
    except ValueError:
        n = 0
    return max(1, n) if n else min(8, os.cpu_count() or 1)


def _fmt(value: float) -> str:
    return f"{value:.12g}"


def resolve_state(spec: str):
    """Return (state, distribution or None, description) for a catalog URI
    or a JSON state file path."""
    if not spec.startswith("catalog:"):
        state = load_state(spec)
        return state, None, f"file:{spec}"
    parts = spec.split(":")
    family, params = parts[1], parts[2:]

    def _int(s):
        return int(s)

    def _float(s):
        return float(s)

    try:
        if family == "noon":
            return cat.noon(_int(params[0])), None, spec
        if family == "dual_fock":
            return cat.dual_fock(_int(params[0])), None, spec
        if family == "dual_fock_bs":
            return cat.dual_fock_after_bs_closed_form(_int(params[0])), None, spec
        if family in ("zeta_noon", "zeta_noon_doubled", "zeta_dual_fock"):
            x = _float(params[0])
            cutoff = _int(params[1]) if len(params) > 1 else 1000
            fn = getattr(cat, family)
            state, dist = fn(x, cutoff)
            return state, dist, spec
        if family in ("tmsv", "tmsv_noon"):
            mean = _float(params[0])
            cutoff = (
                _int(params[1])
                if len(params) > 1
                else cat.tmsv_cutoff_for(mean, 1e-10)
            )
            fn = getattr(cat, family)
            state, dist = fn(mean, cutoff)
            return state, dist, spec
    except IndexError:
        raise SpecError(f"missing parameters in {spec!r}") from None
    raise SpecError(f"unknown catalog family in {spec!r}")


# ---------------------------------------------------------------------------
# output helpers

def _write_text(path: str | None, text: str) -> None:
    if path is None or path == "-":
        sys.stdout.write(text)
    else:
        with open(path, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)


def _csv_text(header_meta: str, columns: list[str], rows: list[list[float]]) -> str:
    lines = [f"# qfilab {__version__} | {header_meta}"]
    lines.append(",".join(columns))
    for row in rows:
        lines.append(",".join(_fmt(v) for v in row))
    return "\n".join(lines) + "\n"


_SVG_COLORS = ("#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b")


def _write_svg(path: str, x: list[float], series: dict[str, list[float]],
               title: str, xlabel: str) -> None:
    """Minimal polyline plot; a convenience view of the CSV contract."""
    width, height, margin = 640, 420, 56
    xs = np.asarray(x, dtype=float)
    ally = np.concatenate([np.asarray(v, dtype=float) for v in series.values()])
    x0, x1 = float(xs.min()), float(xs.max())
    y0, y1 = float(ally.min()), float(ally.max())
    if x1 == x0:
        x1 = x0 + 1.0
    if y1 == y0:
        y1 = y0 + 1.0

    def px(v):
        return margin + (v - x0) / (x1 - x0) * (width - 2 * margin)

    def py(v):
        return height - margin - (v - y0) / (y1 - y0) * (height - 2 * margin)

    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}">',
        f'<rect width="{width}" height="{height}" fill="white"/>',
        f'<text x="{width/2:.0f}" y="20" text-anchor="middle" font-size="14">{title}</text>',
        f'<line x1="{margin}" y1="{height-margin}" x2="{width-margin}" y2="{height-margin}" stroke="black"/>',
        f'<line x1="{margin}" y1="{margin}" x2="{margin}" y2="{height-margin}" stroke="black"/>',
        f'<text x="{width/2:.0f}" y="{height-16}" text-anchor="middle" font-size="12">{xlabel}</text>',
    ]
    for i in range(5):
        tx = x0 + i * (x1 - x0) / 4
        ty = y0 + i * (y1 - y0) / 4
        parts.append(
            f'<text x="{px(tx):.1f}" y="{height-margin+16}" text-anchor="middle" '
            f'font-size="10">{tx:.3g}</text>'
        )
        parts.append(
            f'<text x="{margin-6}" y="{py(ty):.1f}" text-anchor="end" '
            f'font-size="10">{ty:.3g}</text>'
        )
    for i, (label, ys) in enumerate(series.items()):
        color = _SVG_COLORS[i % len(_SVG_COLORS)]
        pts = " ".join(f"{px(a):.2f},{py(b):.2f}" for a, b in zip(xs, ys))
        parts.append(f'<polyline points="{pts}" fill="none" stroke="{color}" stroke-width="1.5"/>')
        parts.append(
            f'<text x="{width-margin+4}" y="{margin + 14*i}" font-size="11" '
            f'fill="{color}">{label}</text>'
        )
    parts.append("</svg>")
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write("\n".join(parts) + "\n")


# ---------------------------------------------------------------------------
# curve subcommands

def _sweep(args) -> np.ndarray:
    if args.points < 2:
        raise SpecError("--points must be >= 2")
    if not args.x_max > args.x_min:
        raise SpecError("--x-max must exceed --x-min")
    return np.linspace(args.x_min, args.x_max, args.points)


def _run_curve(args, figure: str) -> int:
    means = _sweep(args)
    point_fn = curves.fig3a_point if figure == "fig3a" else curves.fig3b_point
    scale = 1 if figure == "fig3a" else 2
    with ThreadPoolExecutor(max_workers=_worker_count()) as pool:
        points = list(pool.map(lambda m: point_fn(float(m), args.tol), means))

    if figure == "fig3a":
        columns = ["mean_n", "snl", "hl", "tmsv_crb", "tmsv_noon_crb", "zeta_noon_crb"]
    else:
        columns = ["mean_n", "noon_crb", "dualfock_crb"]
    rows = [[p.mean_n] + [p.values[c] for c in columns[1:]] for p in points]
    meta = (
        f"{figure} | points={args.points} x_min={_fmt(args.x_min)} "
        f"x_max={_fmt(args.x_max)} tol={args.tol:g} "
        f"cutoff={args.cutoff if args.cutoff else 'inf'}"
    )
    _write_text(args.out, _csv_text(meta, columns, rows))

    divergent_rows = [
        {"mean_n": p.mean_n, "columns": list(p.divergent_columns)}
        for p in points
        if p.divergent_columns
    ]
    if args.out not in (None, "-"):
        trend_cutoffs = [100, 1000, 10_000, 100_000]
        if args.cutoff:
            trend_cutoffs = sorted({min(c, args.cutoff) for c in trend_cutoffs})
        sidecar = {
            "figure": figure,
            "family": "zeta-weighted two-branch family"
            if figure == "fig3a"
            else "zeta-weighted doubled two-branch and equal-occupation families",
            "crossing_mean": curves.crossing_mean(scale, args.tol),
            "exponent_at_divergence": 3.0,
            "divergence": "second moment of the photon distribution grows without "
            "bound with the cutoff for weight exponents x <= 3",
            "mean_square_trend": [
                {"cutoff": k, "mean_square": v}
                for k, v in curves.truncated_mean_square_trend(3.0, trend_cutoffs, scale)
            ],
            "divergent_rows": divergent_rows,
        }
        with open(args.out + ".provenance.json", "w", encoding="utf-8") as fh:
            json.dump(sidecar, fh, indent=1)
            fh.write("\n")
        if args.svg:
            series = {c: [r[i + 1] for r in rows] for i, c in enumerate(columns[1:])}
            _write_svg(
                os.path.splitext(args.out)[0] + ".svg",
                [r[0] for r in rows],
                series,
                title=f"{figure}: phase uncertainty vs mean photon number",
                xlabel="mean photon number",
            )
    return 0


# ---------------------------------------------------------------------------
# report subcommands

def _cmd_qfi(args) -> int:
    state, dist, desc = resolve_state(args.state)
    pre = apply_beamsplitter(state) if args.pipeline == "MZI" else state
    phis = np.linspace(0.0, 2.0 * math.pi, 181)
    scan = fi_scan(state, phis, args.pipeline)
    best = int(np.argmax(scan))
    divergent = bool(dist and dist.mean_square.divergent)
    report = FisherReport(
        phi=float(phis[best]),
        fi=float(scan[best]),
        qfi=qfi_pure(pre),
        povm="counting:na_nb",
        pipeline=args.pipeline,
        qfi_divergent=divergent,
    )
    payload = report.to_json_dict()
    payload["state"] = desc
    if divergent:
        payload["divergence"] = {
            "family": dist.family,
            "truncated_qfi": qfi_pure(pre),
            "truncated_crb": report.crb_single,
            "note": "family QFI grows without bound with the cutoff; "
            "CRB reported as exactly 0",
        }
    _write_text(args.out, json.dumps(payload, indent=1) + "\n")
    return 3 if divergent else 0


def _cmd_fi_scan(args) -> int:
    state, dist, _ = resolve_state(args.state)
    phis = _sweep(args)
    fi = fi_scan(state, phis, args.pipeline)
    pre = apply_beamsplitter(state) if args.pipeline == "MZI" else state
    qfi = qfi_pure(pre)
    columns = ["phi", "fi", "qfi"]
    rows = [[float(p), float(f), qfi] for p, f in zip(phis, fi)]
    meta = (
        f"fi-scan {args.state} | pipeline={args.pipeline} points={args.points} "
        f"x_min={_fmt(args.x_min)} x_max={_fmt(args.x_max)} tol={args.tol:g} "
        f"cutoff={state.cutoff}"
    )
    _write_text(args.out, _csv_text(meta, columns, rows))
    if args.svg and args.out not in (None, "-"):
        _write_svg(
            os.path.splitext(args.out)[0] + ".svg",
            [r[0] for r in rows],
            {"fi": [r[1] for r in rows], "qfi": [r[2] for r in rows]},
            title=f"information scan: {args.state}",
            xlabel="phase (rad)",
        )
    return 0


def _cmd_estimate(args) -> int:
    state, _, _ = resolve_state(args.state)
    if args.trials < 1:
        raise SpecError("--trials must be >= 1")
    if args.reps < 1:
        raise SpecError("--reps must be >= 1")
    window = tuple(args.window) if args.window else default_window(
        state, args.phi_true, args.pipeline
    )
    lines = []
    for rep in range(args.reps):
        run = run_estimation(
            state,
            args.phi_true,
            args.pipeline,
            args.trials,
            seed=args.seed,
            repetition=rep,
            window=window,
        )
        lines.append(run.to_json_line())
    _write_text(args.out, "\n".join(lines) + "\n")
    return 0


def _cmd_catalog_list(_args) -> int:
    sys.stdout.write("catalog families (address as catalog:<family>:<params>)\n")
    for spec, doc in _CATALOG_HELP:
        sys.stdout.write(f"  {spec:32s} {doc}\n")
    return 0


def _cmd_state_validate(args) -> int:
    try:
        state = load_state(args.path)
    except (OSError, ValueError, json.JSONDecodeError) as exc:
        sys.stderr.write(f"invalid state file: {exc}\n")
        return 2
    with open(args.path, "r", encoding="utf-8") as fh:
        raw = json.load(fh)
    raw_norm = math.sqrt(
        sum(e["re"] ** 2 + e["im"] ** 2 for e in raw.get("entries", []))
    )
    summary = {
        "valid": True,
        "cutoff": state.cutoff,
        "entries": len(state),
        "raw_norm": raw_norm,
        "renormalized": abs(raw_norm - 1.0) > state.norm_tolerance,
        "occupied_sectors": state.occupied_sectors(),
    }
    sys.stdout.write(json.dumps(summary, indent=1) + "\n")
    return 0


# ---------------------------------------------------------------------------
# parser

def _add_common(parser, *, points, x_min, x_max):
    parser.add_argument("--points", type=int, default=points)
    parser.add_argument("--x-min", dest="x_min", type=float, default=x_min)
    parser.add_argument("--x-max", dest="x_max", type=float, default=x_max)
    parser.add_argument("--out", default=None, help="output path ('-' = stdout)")
    parser.add_argument("--tol", type=float, default=1e-12)
    parser.add_argument("--svg", action="store_true",
                        help="also write a simple SVG next to the CSV")
    parser.add_argument("--cutoff", type=int, default=None)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="qfilab",
        description="Interferometric phase-information toolbox "
        "(set QFILAB_THREADS to cap sweep workers)",
    )
    parser.add_argument("--version", action="version", version=f"qfilab {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("fig3a", help="benchmark bound curves, single two-branch family")
    _add_common(p, points=200, x_min=1.01, x_max=5.0)

    p = sub.add_parser("fig3b", help="doubled two-branch vs equal-occupation curves")
    _add_common(p, points=200, x_min=2.02, x_max=5.0)

    p = sub.add_parser("qfi", help="information report for a state")
    p.add_argument("state", help="catalog URI or state file")
    p.add_argument("--pipeline", choices=("MZI", "MMZI"), default="MMZI")
    p.add_argument("--out", default=None)

    p = sub.add_parser("fi-scan", help="FI versus phase as CSV")
    p.add_argument("state")
    p.add_argument("--pipeline", choices=("MZI", "MMZI"), default="MMZI")
    _add_common(p, points=721, x_min=0.0, x_max=2.0 * math.pi)

    p = sub.add_parser("estimate", help="seeded Monte-Carlo estimation runs (JSON lines)")
    p.add_argument("state")
    p.add_argument("--pipeline", choices=("MZI", "MMZI"), default="MMZI")
    p.add_argument("--phi-true", dest="phi_true", type=float, required=True)
    p.add_argument("--trials", type=int, default=1000)
    p.add_argument("--reps", type=int, default=1)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--window", type=float, nargs=2, default=None,
                   metavar=("LO", "HI"))
    p.add_argument("--out", default=None)

    p = sub.add_parser("catalog", help="catalog utilities")
    csub = p.add_subparsers(dest="catalog_command", required=True)
    csub.add_parser("list", help="list families and parameter domains")

    p = sub.add_parser("state", help="state-file utilities")
    ssub = p.add_subparsers(dest="state_command", required=True)
    v = ssub.add_parser("validate", help="validate a JSON state file")
    v.add_argument("path")

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.command == "fig3a":
            return _run_curve(args, "fig3a")
        if args.command == "fig3b":
            return _run_curve(args, "fig3b")
        if args.command == "qfi":
            return _cmd_qfi(args)
        if args.command == "fi-scan":
            return _cmd_fi_scan(args)
        if args.command == "estimate":
            return _cmd_estimate(args)
        if args.command == "catalog":
            return _cmd_catalog_list(args)
        if args.command == "state":
            return _cmd_state_validate(args)
    except SpecError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return 2
    except (ValueError, OSError) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
