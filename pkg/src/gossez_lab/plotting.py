"""Figure rendering for scan reports.

Draws the probe estimate and the theorem lower bound against lambda and
writes the figure to a file; the image format follows the path suffix.
matplotlib is imported lazily so the CSV-only paths never touch it.
"""

from __future__ import annotations

from typing import Sequence


def render_scan(rows: Sequence[dict], path: str) -> None:
    """rows: dicts with keys lambda, lower_bound, estimate, dim, method."""
    if not rows:
        raise ValueError("nothing to plot: empty scan")
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    lams = [row["lambda"] for row in rows]
    lower = [row["lower_bound"] for row in rows]
    estimate = [row["estimate"] for row in rows]
    dim = rows[0]["dim"]

    fig, ax = plt.subplots(figsize=(6.4, 4.2))
    ax.plot(lams, lower, "--", color="tab:gray", label="distance lower bound d(lambda)")
    ax.plot(
        lams,
        estimate,
        "o-",
        color="tab:blue",
        label=f"probe estimate (dim {dim})",
    )
    ax.axhline(0.0, color="black", linewidth=0.6)
    ax.set_xlabel("lambda")
    ax.set_ylabel("sup distance to -e*")
    ax.set_title("range distance scan for G + lambda J")
    ax.grid(alpha=0.3)
    ax.legend()
    fig.savefig(path, dpi=150, bbox_inches="tight")
    plt.close(fig)
