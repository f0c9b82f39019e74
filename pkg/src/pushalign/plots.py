"""Figure rendering for reports, traces, and trajectory paths.

matplotlib is imported lazily with the Agg backend so the CSV pipeline
works on headless machines and never pays the import cost unless figures
are requested.
"""

from __future__ import annotations

from pathlib import Path


def _plt():
    import matplotlib
    matplotlib.use("Agg", force=True)
    import matplotlib.pyplot as plt
    return plt


def plot_report(report, path: str | Path) -> Path:
    """Success counts and peak-force spread for one campaign."""
    plt = _plt()
    fig, (ax1, ax2) = plt.subplots(1, 2, figsize=(9, 4))
    labels, succ, fail = [], [], []
    for (method, group), s in report.cells.items():
        labels.append(f"{method}\n{group}")
        succ.append(s.successes)
        fail.append(s.trials - s.successes)
    xs = range(len(labels))
    ax1.bar(xs, succ, color="tab:green", label="success")
    ax1.bar(xs, fail, bottom=succ, color="tab:red", label="failure")
    ax1.set_xticks(list(xs))
    ax1.set_xticklabels(labels)
    ax1.set_ylabel("trials")
    ax1.set_title("outcomes")
    ax1.legend()
    forces = [r.peak_force for r in report.trials]
    colors = ["tab:green" if r.success else "tab:red" for r in report.trials]
    ax2.scatter(range(len(forces)), forces, c=colors, s=12)
    ax2.set_xlabel("trial")
    ax2.set_ylabel("peak in-plane force [N]")
    ax2.set_title("peak forces")
    fig.tight_layout()
    out = Path(path)
    fig.savefig(out, dpi=120)
    plt.close(fig)
    return out


def plot_trace(samples, labels, path: str | Path) -> Path:
    """Force components over time with contact phases shaded."""
    plt = _plt()
    fig, ax = plt.subplots(figsize=(9, 4))
    steps = [s.step for s in samples]
    ax.plot(steps, [s.wrench.fx for s in samples], label="fx", lw=0.9)
    ax.plot(steps, [s.wrench.fy for s in samples], label="fy", lw=0.9)
    ax.plot(steps, [s.wrench.fz for s in samples], label="fz", lw=0.9)
    start = None
    for i, label in enumerate(labels):
        contact = label.startswith("contact")
        if contact and start is None:
            start = steps[i]
        if start is not None and (not contact or i == len(labels) - 1):
            ax.axvspan(start, steps[i], color="tab:orange", alpha=0.15, lw=0)
            start = None
    ax.set_xlabel("step")
    ax.set_ylabel("force [N]")
    ax.legend(loc="upper right")
    ax.set_title("interaction forces (contact phases shaded)")
    fig.tight_layout()
    out = Path(path)
    fig.savefig(out, dpi=120)
    plt.close(fig)
    return out


def plot_path(waypoints, path: str | Path) -> Path:
    """Top-down view of a generated trajectory."""
    plt = _plt()
    fig, ax = plt.subplots(figsize=(5, 5))
    xs = [p[0] for p in waypoints]
    ys = [p[1] for p in waypoints]
    ax.plot(xs, ys, "-", lw=0.8)
    ax.plot(xs[0], ys[0], "go", label="start")
    ax.plot(xs[-1], ys[-1], "rs", label="end")
    ax.set_aspect("equal")
    ax.set_xlabel("x [mm]")
    ax.set_ylabel("y [mm]")
    ax.legend()
    fig.tight_layout()
    out = Path(path)
    fig.savefig(out, dpi=120)
    plt.close(fig)
    return out
