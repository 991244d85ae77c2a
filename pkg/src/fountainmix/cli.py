"""Command line front end.

Each subcommand computes one report, writes it as CSV (or JSON) plus a
rendered figure next to it, and drops a manifest capturing the effective
configuration.  Output files are written to a temporary name and renamed
into place, so a failed run never leaves a partial table behind.

Defaults can be overridden by a JSON config file (--config); explicit
command line flags win over the file, which wins over built-ins.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys
import time
from pathlib import Path

import numpy as np

from .coupon import (
    ChainSpec,
    completion_pmf,
    evolve_pmf,
    finite_tradeoff,
    tradeoff,
)
from .delivery import (
    Mode,
    SessionConfig,
    overhead_curve,
    same_code_completion_times,
    standard_sources,
    sweep_mixture,
)

__all__ = ["main"]

_VERSION = "0.1.0"
_COMMON_DEFAULTS = {"out": None, "format": "csv", "no_plot": False}


# --- option plumbing ---

def _load_config(path: str) -> dict:
    try:
        data = json.loads(Path(path).read_text())
    except json.JSONDecodeError as e:
        raise ValueError(f"config file {path}: {e}") from None
    if not isinstance(data, dict):
        raise ValueError(f"config file {path}: expected a JSON object")
    return data


def _effective(args: argparse.Namespace, defaults: dict) -> dict:
    """Merge CLI flags over config file over defaults."""
    file_cfg = _load_config(args.config) if args.config else {}
    unknown = set(file_cfg) - set(defaults)
    if unknown:
        raise ValueError(f"unknown config keys: {', '.join(sorted(unknown))}")
    eff = {}
    for key, default in defaults.items():
        cli = getattr(args, key, None)
        if cli is not None and cli is not False:
            eff[key] = cli
        elif key in file_cfg:
            eff[key] = file_cfg[key]
        else:
            eff[key] = default
    return eff


def _int_list(value) -> list[int]:
    if isinstance(value, (list, tuple)):
        return [int(v) for v in value]
    return [int(tok) for tok in str(value).split(",") if tok.strip()]


def _n_list(value) -> list[float]:
    items = value if isinstance(value, (list, tuple)) else str(value).split(",")
    out = []
    for tok in items:
        tok = str(tok).strip()
        out.append(math.inf if tok in ("inf", "infinity") else int(tok))
    return out


def _erasure(value):
    if isinstance(value, (int, float)):
        return float(value)
    parts = [float(tok) for tok in str(value).split(",") if tok.strip()]
    return parts[0] if len(parts) == 1 else tuple(parts)


def _apply_quick(eff: dict) -> int:
    trials = int(eff["trials"])
    if eff.get("quick"):
        trials = max(1, trials // 10)
    eff["trials"] = trials
    return trials


# --- table rendering ---

def _cell(v) -> str:
    if isinstance(v, float):
        return "inf" if math.isinf(v) else f"{v:.6f}"
    return str(v)


def _csv_text(headers: list[str], rows: list[dict]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(headers)
    for r in rows:
        w.writerow([_cell(r[h]) for h in headers])
    return buf.getvalue()


def _json_text(headers: list[str], rows: list[dict]) -> str:
    def conv(v):
        if isinstance(v, float):
            return "inf" if math.isinf(v) else round(v, 6)
        return v

    return json.dumps([{h: conv(r[h]) for h in headers} for r in rows], indent=2) + "\n"


def _atomic_write(path: Path, text: str) -> None:
    tmp = path.parent / f".{path.name}.tmp"
    tmp.write_text(text)
    os.replace(tmp, path)


def _atomic_figure(path: Path, render) -> None:
    tmp = path.parent / f".{path.name}.tmp"
    try:
        render(tmp)
        os.replace(tmp, path)
    finally:
        tmp.unlink(missing_ok=True)


# --- subcommand handlers; each returns (headers, rows, eff, plot_fn) ---

def _cmd_chain(args):
    eff = _effective(args, {"n": 50, "systems": 2, **_COMMON_DEFAULTS})
    spec = ChainSpec(n=int(eff["n"]), systems=int(eff["systems"]))
    pmfs = evolve_pmf(spec)
    rows = [
        {"ell": p.step, "unseen": i, "probability": float(pr)}
        for p in pmfs
        for i, pr in enumerate(p.probs)
        if pr > 0
    ]

    def plot_fn(path):
        from . import plotting

        plotting.plot_chain(pmfs, spec, path)

    return ["ell", "unseen", "probability"], rows, eff, plot_fn


def _cmd_tradeoff(args):
    eff = _effective(
        args,
        {
            "systems": "1,2,4,8",
            "n": "inf",
            "sigma_max": 4.0,
            "sigma_points": 61,
            **_COMMON_DEFAULTS,
        },
    )
    sigma_max = float(eff["sigma_max"])
    points = int(eff["sigma_points"])
    if sigma_max < 1 or points < 2:
        raise ValueError("need sigma_max >= 1 and at least two sigma points")
    rows = []
    for s in _int_list(eff["systems"]):
        for nv in _n_list(eff["n"]):
            if math.isinf(nv):
                for sigma in np.linspace(1.0, sigma_max, points):
                    rows.append(
                        {
                            "systems": s,
                            "n": math.inf,
                            "sigma": float(sigma),
                            "delta": tradeoff(float(sigma), s),
                        }
                    )
            else:
                nv = int(nv)
                k_min = max(1, math.ceil(nv / sigma_max))
                for k in range(nv, k_min - 1, -1):
                    sigma, delta = finite_tradeoff(nv, k, s)
                    rows.append(
                        {"systems": s, "n": nv, "sigma": sigma, "delta": delta}
                    )

    def plot_fn(path):
        from . import plotting

        plotting.plot_tradeoff(rows, path)

    return ["systems", "n", "sigma", "delta"], rows, eff, plot_fn


_CODE_DEFAULTS = {"code_k": 1024, "rln_seed": 0, "ldpc_seed": 0}


def _cmd_mixture(args):
    eff = _effective(
        args,
        {
            "step": 8,
            "trials": 2000,
            "seed": 0,
            "quick": False,
            **_CODE_DEFAULTS,
            **_COMMON_DEFAULTS,
        },
    )
    trials = _apply_quick(eff)
    codes = standard_sources(
        int(eff["code_k"]), int(eff["rln_seed"]), int(eff["ldpc_seed"])
    )
    points = sweep_mixture(
        codes, step=int(eff["step"]), trials=trials, master_seed=int(eff["seed"])
    )
    rows = [
        {
            "rln": p.counts[0],
            "rs": p.counts[1],
            "ldpc": p.counts[2],
            "trials": p.trials,
            "successes": p.successes,
            "probability": p.probability,
        }
        for p in points
    ]

    def plot_fn(path):
        from . import plotting

        plotting.plot_mixture(points, path)

    return ["rln", "rs", "ldpc", "trials", "successes", "probability"], rows, eff, plot_fn


def _cmd_overhead(args):
    eff = _effective(
        args,
        {
            "mixture": "43,43,42",
            "extra_max": 3,
            "trials": 20000,
            "seed": 0,
            "quick": False,
            **_CODE_DEFAULTS,
            **_COMMON_DEFAULTS,
        },
    )
    trials = _apply_quick(eff)
    codes = standard_sources(
        int(eff["code_k"]), int(eff["rln_seed"]), int(eff["ldpc_seed"])
    )
    points = overhead_curve(
        codes,
        _int_list(eff["mixture"]),
        extra_max=int(eff["extra_max"]),
        trials=trials,
        master_seed=int(eff["seed"]),
    )
    rows = [
        {
            "extra": p.extra,
            "rln": p.counts[0],
            "rs": p.counts[1],
            "ldpc": p.counts[2],
            "trials": p.trials,
            "successes": p.successes,
            "probability": p.probability,
        }
        for p in points
    ]

    def plot_fn(path):
        from . import plotting

        plotting.plot_overhead(points, path)

    return (
        ["extra", "rln", "rs", "ldpc", "trials", "successes", "probability"],
        rows,
        eff,
        plot_fn,
    )


def _cmd_simulate_same(args):
    eff = _effective(
        args,
        {
            "n": 50,
            "k": 35,
            "systems": 2,
            "trials": 100000,
            "seed": 0,
            "erasure": 0.0,
            "budget": None,
            "quick": False,
            **_COMMON_DEFAULTS,
        },
    )
    trials = _apply_quick(eff)
    erasure = _erasure(eff["erasure"])
    budget = None if eff["budget"] is None else int(eff["budget"])
    config = SessionConfig(
        mode=Mode.SAME_CODE,
        n=int(eff["n"]),
        k=int(eff["k"]),
        systems=int(eff["systems"]),
        erasure_fraction=erasure,
        trial_count=trials,
        master_seed=int(eff["seed"]),
        budget=budget,
    )
    times = same_code_completion_times(config)
    finite = times[np.isfinite(times)].astype(np.int64)
    values, counts = np.unique(finite, return_counts=True)
    rows = [
        {
            "transmissions": int(v),
            "count": int(c),
            "probability": int(c) / trials,
        }
        for v, c in zip(values, counts)
    ]
    failures = int(np.isinf(times).sum())
    if failures:
        rows.append(
            {
                "transmissions": math.inf,
                "count": failures,
                "probability": failures / trials,
            }
        )
    spec = ChainSpec(n=config.n, systems=config.systems, k=config.k)
    plain = erasure == 0.0 and budget is None
    exact = completion_pmf(spec).probs if plain else None

    def plot_fn(path):
        from . import plotting

        plotting.plot_same_code(times, spec, exact, path)

    return ["transmissions", "count", "probability"], rows, eff, plot_fn


# --- parser ---

def _add_common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--out", default=None, help="output table path")
    p.add_argument("--format", choices=("csv", "json"), default=None)
    p.add_argument("--config", default=None, help="JSON file of option defaults")
    p.add_argument("--no-plot", action="store_true", dest="no_plot",
                   help="skip rendering the figure")


def _add_code_opts(p: argparse.ArgumentParser) -> None:
    p.add_argument("--code-k", type=int, default=None, dest="code_k",
                   help="information bits of each source code")
    p.add_argument("--rln-seed", type=int, default=None, dest="rln_seed")
    p.add_argument("--ldpc-seed", type=int, default=None, dest="ldpc_seed")


def _build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="fountainmix",
        description="Analytics and simulation for uncoordinated delivery from coded sources.",
    )
    sub = p.add_subparsers(dest="command", required=True)

    c = sub.add_parser("chain", help="exact unseen-count pmf per transmission step")
    c.add_argument("--n", type=int, default=None, help="symbols per source")
    c.add_argument("--systems", "--S", type=int, default=None, dest="systems")
    _add_common(c)
    c.set_defaults(handler=_cmd_chain)

    t = sub.add_parser("tradeoff", help="storage/delay tradeoff curves")
    t.add_argument("--systems", "--S", default=None, dest="systems",
                   help="comma list of source counts")
    t.add_argument("--n", default=None, help="comma list of n values, or inf")
    t.add_argument("--sigma-max", type=float, default=None, dest="sigma_max")
    t.add_argument("--sigma-points", type=int, default=None, dest="sigma_points")
    _add_common(t)
    t.set_defaults(handler=_cmd_tradeoff)

    m = sub.add_parser("mixture", help="decoding probability over download mixtures")
    m.add_argument("--step", type=int, default=None, help="mixture grid step in blocks")
    m.add_argument("--trials", type=int, default=None)
    m.add_argument("--seed", type=int, default=None)
    m.add_argument("--quick", action="store_true", help="divide trials by 10")
    _add_code_opts(m)
    _add_common(m)
    m.set_defaults(handler=_cmd_mixture)

    o = sub.add_parser("overhead", help="decoding probability vs extra downloads")
    o.add_argument("--mixture", default=None, help="base mixture, e.g. 43,43,42")
    o.add_argument("--extra-max", type=int, default=None, dest="extra_max")
    o.add_argument("--trials", type=int, default=None)
    o.add_argument("--seed", type=int, default=None)
    o.add_argument("--quick", action="store_true")
    _add_code_opts(o)
    _add_common(o)
    o.set_defaults(handler=_cmd_overhead)

    s = sub.add_parser("simulate-same", help="sampled completion times, same-code sources")
    s.add_argument("--n", type=int, default=None)
    s.add_argument("--k", type=int, default=None)
    s.add_argument("--systems", "--S", type=int, default=None, dest="systems")
    s.add_argument("--trials", type=int, default=None)
    s.add_argument("--seed", type=int, default=None)
    s.add_argument("--erasure", default=None, help="fraction, or comma list per source")
    s.add_argument("--budget", type=int, default=None)
    s.add_argument("--quick", action="store_true")
    _add_common(s)
    s.set_defaults(handler=_cmd_simulate_same)

    return p


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    t0 = time.perf_counter()
    try:
        headers, rows, eff, plot_fn = args.handler(args)
        fmt = eff["format"]
        out = Path(eff["out"]) if eff["out"] else Path(f"{args.command}.{fmt}")
        text = _csv_text(headers, rows) if fmt == "csv" else _json_text(headers, rows)
        _atomic_write(out, text)
        figure = None
        if plot_fn is not None and not eff["no_plot"]:
            figure = out.with_suffix(".png")
            _atomic_figure(figure, plot_fn)
        manifest = {
            "command": args.command,
            "version": _VERSION,
            "config": {k: v for k, v in eff.items()},
            "output": str(out),
            "figure": None if figure is None else str(figure),
            "rows": len(rows),
            "wall_clock_seconds": round(time.perf_counter() - t0, 3),
        }
        _atomic_write(
            Path(f"{out}.manifest.json"), json.dumps(manifest, indent=2, sort_keys=True) + "\n"
        )
    except ValueError as e:
        print(f"error: {e}", file=sys.stderr)
        return 2
    except OSError as e:
        print(f"error: {e}", file=sys.stderr)
        return 1
    print(f"wrote {out} ({len(rows)} rows)" + (f" and {figure}" if figure else ""))
    return 0


if __name__ == "__main__":
    sys.exit(main())
