"""Figure rendering for the CLI reports (Agg backend, files only)."""

from __future__ import annotations

import math

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402

from .coupon import ChainSpec, StepPmf, asymptotic_unseen  # noqa: E402

_RC = {
    "figure.figsize": (7.0, 4.5),
    "figure.dpi": 140,
    "axes.grid": True,
    "grid.alpha": 0.3,
    "font.size": 10,
}


def plot_chain(pmfs: list[StepPmf], spec: ChainSpec, path) -> None:
    with plt.rc_context(_RC):
        fig, ax = plt.subplots()
        steps = np.array([p.step for p in pmfs])
        means = np.array([p.mean() for p in pmfs])
        ax.plot(steps, means, lw=1.8, label="exact E[unseen]")
        tau = steps / spec.n
        ax.plot(
            steps,
            spec.n * np.array([asymptotic_unseen(t, spec.systems) for t in tau]),
            "--",
            lw=1.2,
            label="large-n limit",
        )
        ax.set_xlabel("transmissions")
        ax.set_ylabel("unseen symbols")
        ax.set_title(f"round-robin collection, n={spec.n}, S={spec.systems}")
        ax.legend()
        fig.tight_layout()
        fig.savefig(path, format="png")
        plt.close(fig)


def plot_tradeoff(rows: list[dict], path) -> None:
    with plt.rc_context(_RC):
        fig, ax = plt.subplots()
        series: dict[tuple, list] = {}
        for r in rows:
            series.setdefault((r["systems"], r["n"]), []).append(
                (r["sigma"], r["delta"])
            )
        for (s, n), pts in series.items():
            pts.sort()
            tag = "n=inf" if math.isinf(n) else f"n={n}"
            ax.plot(*zip(*pts), lw=1.5, label=f"S={s}, {tag}")
        ax.set_xlabel("storage overhead sigma")
        ax.set_ylabel("delay overhead delta")
        ax.set_title("storage / delay tradeoff")
        ax.legend()
        fig.tight_layout()
        fig.savefig(path, format="png")
        plt.close(fig)


def plot_mixture(points, path) -> None:
    """Simplex scatter: each mixture at its barycentric position."""
    with plt.rc_context(_RC):
        fig, ax = plt.subplots(figsize=(6.4, 5.6))
        counts = np.array([p.counts for p in points], dtype=float)
        total = counts.sum(axis=1)
        frac = counts / total[:, None]
        x = frac[:, 1] + 0.5 * frac[:, 2]
        y = (math.sqrt(3) / 2) * frac[:, 2]
        prob = np.array([p.probability for p in points])
        sc = ax.scatter(x, y, c=prob, cmap="viridis", vmin=0.0, vmax=1.0, s=48)
        fig.colorbar(sc, ax=ax, label="decoding probability")
        ax.text(-0.02, -0.04, "RLN", ha="right")
        ax.text(1.02, -0.04, "RS", ha="left")
        ax.text(0.5, math.sqrt(3) / 2 + 0.03, "LDPC", ha="center")
        ax.set_xlim(-0.12, 1.12)
        ax.set_ylim(-0.12, math.sqrt(3) / 2 + 0.12)
        ax.set_aspect("equal")
        ax.axis("off")
        ax.set_title("decoding probability across download mixtures")
        fig.tight_layout()
        fig.savefig(path, format="png")
        plt.close(fig)


def plot_overhead(points, path) -> None:
    with plt.rc_context(_RC):
        fig, ax = plt.subplots()
        ax.plot(
            [p.extra for p in points],
            [p.probability for p in points],
            "o-",
            lw=1.5,
        )
        ax.set_xlabel("extra blocks beyond k")
        ax.set_ylabel("decoding probability")
        ax.set_ylim(-0.02, 1.02)
        ax.set_title("decoding probability vs download overhead")
        fig.tight_layout()
        fig.savefig(path, format="png")
        plt.close(fig)


def plot_same_code(times: np.ndarray, spec: ChainSpec, exact_probs, path) -> None:
    """Empirical completion histogram with the exact pmf overlaid."""
    with plt.rc_context(_RC):
        fig, ax = plt.subplots()
        finite = times[np.isfinite(times)]
        if finite.size:
            lo, hi = int(finite.min()), int(finite.max())
            bins = np.arange(lo - 0.5, hi + 1.5)
            ax.hist(
                finite,
                bins=bins,
                density=True,
                alpha=0.55,
                label=f"simulated ({times.size} trials)",
            )
        if exact_probs is not None:
            ells = np.arange(len(exact_probs))
            mask = np.array(exact_probs) > 0
            ax.plot(ells[mask], np.array(exact_probs)[mask], "k.-", lw=1.0,
                    ms=4, label="exact pmf")
        ax.set_xlabel("transmissions to completion")
        ax.set_ylabel("probability")
        ax.set_title(f"completion time, n={spec.n}, k={spec.k}, S={spec.systems}")
        ax.legend()
        fig.tight_layout()
        fig.savefig(path, format="png")
        plt.close(fig)
