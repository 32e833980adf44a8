"""Figure rendering from exported files; headless (Agg) only."""

from __future__ import annotations

import os

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402

from .readers import SchemaError, read_csv_columns, read_state_vtk  # noqa: E402


def _fc_slopes_periodic(x, y):
    # Fritsch-Carlson slopes for closed data, for drawing the smooth control
    m = len(x) - 1
    h = np.diff(x)
    delta = np.diff(y) / h
    d = np.zeros(len(x))
    for k in range(m):
        dp, dn = delta[(k - 1) % m], delta[k]
        if dp * dn <= 0:
            d[k] = 0.0
        else:
            w1 = 2 * h[k] + h[(k - 1) % m]
            w2 = h[k] + 2 * h[(k - 1) % m]
            d[k] = (w1 + w2) / (w1 / dp + w2 / dn)
    d[m] = d[0]
    return d


def _hermite(x, y, d, t):
    k = np.clip(np.searchsorted(x, t, side="right") - 1, 0, len(x) - 2)
    s = t - x[k]
    h = x[k + 1] - x[k]
    by1 = (3 * h * s**2 - 2 * s**3) / h**3
    return ((1 - by1) * y[k] + by1 * y[k + 1]
            + s**2 * (s - h) / h**2 * d[k + 1] + s * (s - h) ** 2 / h**2 * d[k])


def render_trace_compare(inputs: list[str], out: str) -> None:
    """Overlay best-objective-vs-evaluations series from trace CSVs."""
    fig, ax = plt.subplots(figsize=(7, 4.5))
    for path in inputs:
        cols = read_csv_columns(path, ["feval", "bestJ"])
        label = os.path.splitext(os.path.basename(path))[0]
        ax.plot(cols["feval"], cols["bestJ"], label=label, linewidth=1.6)
    ax.set_xlabel("function evaluations")
    ax.set_ylabel("best objective value")
    ax.set_yscale("log")
    ax.grid(True, alpha=0.3)
    ax.legend()
    fig.tight_layout()
    fig.savefig(out, dpi=150)
    plt.close(fig)


def render_domain_and_control(inputs: list[str], out: str, omega0=None) -> None:
    """State contours with the zero level set (left) and the control (right).

    ``inputs``: state VTK, level-set CSV, control CSV, in that order.
    """
    if len(inputs) != 3:
        raise SchemaError("domain_and_control needs inputs: state.vtk levelset.csv control.csv")
    vtk_path, levelset_path, control_path = inputs
    pts, tris, fields = read_state_vtk(vtk_path)
    if "y" not in fields:
        raise SchemaError(f"{vtk_path}: missing column 'y'")
    level = read_csv_columns(levelset_path, ["segment_id", "x", "y"])
    ctrl = read_csv_columns(control_path, ["k", "theta_k", "a_k"])

    fig, (ax1, ax2) = plt.subplots(1, 2, figsize=(11, 4.8))
    tc = ax1.tricontourf(pts[:, 0], pts[:, 1], tris, fields["y"], levels=24,
                         cmap="RdBu_r")
    fig.colorbar(tc, ax=ax1, shrink=0.85)
    for sid in np.unique(level["segment_id"]):
        mask = level["segment_id"] == sid
        ax1.plot(level["x"][mask], level["y"][mask], "k-", linewidth=2.0)
    if omega0 is not None:
        poly = np.asarray(list(omega0) + [omega0[0]])
        ax1.plot(poly[:, 0], poly[:, 1], "r-", linewidth=1.8)
    ax1.set_aspect("equal")
    ax1.set_title("state and zero level set")

    th = ctrl["theta_k"]
    a = ctrl["a_k"]
    xc = np.append(th, 2 * np.pi)
    yc = np.append(a, a[0])
    d = _fc_slopes_periodic(xc, yc)
    dense = np.linspace(0.0, 2 * np.pi, 720)
    ax2.plot(dense, _hermite(xc, yc, d, dense), "b-", linewidth=1.6)
    ax2.plot(th, a, "bo", markersize=3.5)
    ax2.set_xlabel("boundary angle")
    ax2.set_ylabel("control value")
    ax2.set_xlim(0.0, 2 * np.pi)
    ax2.grid(True, alpha=0.3)
    ax2.set_title("boundary control")
    fig.tight_layout()
    fig.savefig(out, dpi=150)
    plt.close(fig)


def render_pchip_kink(inputs: list[str], out: str) -> None:
    """Interpolant value at the probe point against the varied knot value."""
    if len(inputs) != 1:
        raise SchemaError("pchip_kink takes exactly one CSV input")
    cols = read_csv_columns(inputs[0], ["a", "u_at_0.3"])
    fig, ax = plt.subplots(figsize=(6.5, 4.2))
    ax.plot(cols["a"], cols["u_at_0.3"], "b-", linewidth=1.6)
    ax.set_xlabel("knot value a")
    ax.set_ylabel("interpolant at x = 0.3")
    ax.grid(True, alpha=0.3)
    fig.tight_layout()
    fig.savefig(out, dpi=150)
    plt.close(fig)
