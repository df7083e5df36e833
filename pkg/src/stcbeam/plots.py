"""Matplotlib rendering of pattern cuts to image files."""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402

_STYLE = {
    "static": dict(color="tab:gray", linestyle=":", linewidth=1.2),
    "phase-only": dict(color="tab:blue", linestyle="--", linewidth=1.4),
    "amp-phase": dict(color="tab:red", linestyle="-", linewidth=1.6),
}


def render_cut_figure(path, curves, title, floor_db=-60.0):
    """Write one normalized-cut comparison figure.

    ``curves`` is a list of (label, theta_deg, power_db) tuples.
    """
    fig, ax = plt.subplots(figsize=(7.0, 4.2))
    for label, theta_deg, power_db in curves:
        ax.plot(theta_deg, power_db, label=label, **_STYLE.get(label, {}))
    ax.set_xlabel("angle (deg)")
    ax.set_ylabel("normalized power (dB)")
    ax.set_title(title)
    ax.set_xlim(-90, 90)
    ax.set_ylim(floor_db, 2)
    ax.grid(True, alpha=0.3)
    ax.legend(loc="upper right", fontsize=9)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
