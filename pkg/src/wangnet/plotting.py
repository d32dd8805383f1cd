"""PNG figures for T-coil design runs (root locus and magnitude response)."""
from __future__ import annotations

import math

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402

# fixed metadata so repeated runs write identical files
_PNG_META = {"Software": None}


def plot_root_locus(path, cb, p1, p2, *, circle=None, marker=None, tau: float = 1.0) -> None:
    """Pole trajectories over C_B, in units of 1/tau.

    ``circle`` is ``(center, radius)`` of the complex-pole circle and
    ``marker`` the chosen pole pair, both in rad/s.
    """
    p1 = np.asarray(p1) * tau
    p2 = np.asarray(p2) * tau
    fig, ax = plt.subplots(figsize=(5, 5))
    ax.plot(p1.real, p1.imag, ".", ms=3, color="C0", label="poles")
    ax.plot(p2.real, p2.imag, ".", ms=3, color="C0")
    if circle is not None:
        c, r = circle
        t = np.linspace(0, 2 * math.pi, 361)
        ax.plot((c + r * np.cos(t)) * tau, r * np.sin(t) * tau, "--", lw=0.8, color="0.5",
                label="circle")
    if marker is not None:
        m = np.asarray(marker) * tau
        ax.plot(m.real, m.imag, "x", ms=8, color="C3", label="design")
    # far real poles at small C_B would squash the interesting region
    span = None
    if marker is not None:
        span = 2.0 * float(np.max(np.abs(m)))
    elif circle is not None:
        span = 1.5 * (abs(circle[0]) + circle[1]) * tau
    if span:
        ax.set_xlim(-span, 0.25 * span)
        ax.set_ylim(-0.625 * span, 0.625 * span)
    ax.axhline(0, color="0.8", lw=0.5)
    ax.axvline(0, color="0.8", lw=0.5)
    ax.set_aspect("equal")
    ax.set_xlabel("Re(s) RC")
    ax.set_ylabel("Im(s) RC")
    ax.set_title("Root locus vs C_B")
    ax.legend(loc="best", fontsize=8)
    fig.tight_layout()
    fig.savefig(path, dpi=100, metadata=_PNG_META)
    plt.close(fig)


def plot_response(path, omega, mag, *, bw: float | None = None, tau: float = 1.0) -> None:
    """Magnitude response in dB against normalized frequency omega*tau."""
    x = np.asarray(omega) * tau
    fig, ax = plt.subplots(figsize=(6, 4))
    ax.semilogx(x, 20 * np.log10(np.asarray(mag)), color="C0", label="T-coil")
    ax.semilogx(x, -10 * np.log10(1 + x * x), "--", color="0.5", label="RC only")
    ax.axhline(-3.0103, color="0.8", lw=0.5)
    if bw is not None:
        ax.axvline(bw * tau, color="C3", lw=0.8, label="-3 dB")
    ax.set_xlabel("omega RC")
    ax.set_ylabel("|H| (dB)")
    ax.set_ylim(-30, 6)
    ax.grid(True, which="both", lw=0.3)
    ax.legend(loc="lower left", fontsize=8)
    fig.tight_layout()
    fig.savefig(path, dpi=100, metadata=_PNG_META)
    plt.close(fig)
