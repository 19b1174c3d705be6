"""PNG figures for the CLI subcommands (matplotlib, Agg backend)."""

from __future__ import annotations

import math
from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402

_COLORS = {"CM": "tab:blue", "no CM": "tab:orange", "no-CM": "tab:orange", "inconclusive": "tab:gray"}


def _save(fig, figdir, name) -> Path:
    path = Path(figdir) / name
    path.parent.mkdir(parents=True, exist_ok=True)
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)
    return path


def plot_catalog(records, figdir) -> Path:
    fig, ax = plt.subplots(figsize=(8, 3.5))
    ids = [r["id"] for r in records]
    ax.bar(ids, [r["genus"] for r in records], color=[_COLORS.get(r["expected"], "k") for r in records])
    ax.set_ylabel("genus")
    ax.set_title("catalog: genus by curve (blue CM, orange no CM)")
    ax.tick_params(axis="x", rotation=60)
    return _save(fig, figdir, "classify.png")


def plot_streit(records, figdir) -> Path:
    fig, ax = plt.subplots(figsize=(8, 3.5))
    labels = [f"{r['curve']} g={r['genus']}" for r in records]
    ax.bar(labels, [r["inner_product"] for r in records], color="tab:green")
    ax.set_ylabel("<Sym2 chi, 1>")
    ax.set_title("symmetric-square multiplicity of the trivial character")
    ax.tick_params(axis="x", rotation=70, labelsize=7)
    return _save(fig, figdir, "streit.png")


def plot_quotients(records, figdir) -> Path:
    fig, ax = plt.subplots(figsize=(6, 3.5))
    ids = [r["curve"] for r in records]
    ax.bar(ids, [r["genus"] for r in records], color="tab:purple")
    ax.set_ylabel("quotient genus")
    ax.set_title("quotient curves")
    return _save(fig, figdir, "quotient.png")


def _roots(coeffs_desc):
    import numpy as np

    return list(np.roots(coeffs_desc))


def plot_frobenius(curve_id, frob_records, figdir) -> Path | None:
    """Normalized Frobenius eigenvalues alpha / sqrt(p) on the unit circle."""
    if not frob_records:
        return None
    fig, ax = plt.subplots(figsize=(4.5, 4.5))
    t = [2 * math.pi * i / 360 for i in range(361)]
    ax.plot([math.cos(a) for a in t], [math.sin(a) for a in t], color="0.8", lw=1)
    for rec in frob_records:
        coeffs = [float(c) for c in reversed(rec["g_p_coeffs"])]
        s = math.sqrt(rec["p"])
        pts = [r / s for r in _roots(coeffs)]
        ax.scatter([z.real for z in pts], [z.imag for z in pts], s=18, label=f"p={rec['p']}")
    ax.set_aspect("equal")
    ax.set_title(f"{curve_id}: Frobenius eigenvalues / sqrt(p)")
    ax.legend(fontsize=7)
    return _save(fig, figdir, f"frobenius_{curve_id}.png")


def plot_verdicts(records, figdir) -> Path:
    fig, ax = plt.subplots(figsize=(8, 2.8))
    ids = [r["curve"] for r in records]
    y = [1 if r["verdict"] == "CM" else (-1 if r["verdict"] == "no-CM" else 0) for r in records]
    ax.bar(ids, y, color=[_COLORS.get(r["verdict"], "k") for r in records])
    ax.set_yticks([-1, 0, 1], ["no-CM", "inconclusive", "CM"])
    ax.set_title("verdicts by curve")
    ax.tick_params(axis="x", rotation=60)
    return _save(fig, figdir, "verdict.png")
