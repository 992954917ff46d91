"""Figure rendering for spectrum reports.

matplotlib is imported lazily so the computational modules stay importable
in minimal environments; the Agg backend keeps rendering headless.
"""

from __future__ import annotations


def render_spectrum_figure(report, path) -> str:
    import matplotlib

    matplotlib.use("Agg")
    from matplotlib import pyplot as plt

    values = sorted(report.attained)
    flagged = set(report.violations)
    good = [v for v in values if v not in flagged]
    bad = [v for v in values if v in flagged]
    fig, ax = plt.subplots(figsize=(7.0, 2.6))
    if good:
        ax.vlines(good, 0, 1, color="tab:blue", linewidth=1.5)
        ax.scatter(good, [1] * len(good), color="tab:blue", zorder=3, label="attained")
    if bad:
        ax.vlines(bad, 0, 1, color="tab:red", linewidth=1.5)
        ax.scatter(bad, [1] * len(bad), color="tab:red", zorder=3, label="violates prediction")
    ax.set_ylim(0, 1.35)
    ax.set_yticks([])
    ax.set_xlabel("Reidemeister number")
    det_note = "" if report.det_filter is None else f", det = {report.det_filter}"
    ax.set_title(
        f"rank {report.rank}, class {report.nil_class}, "
        f"entries in [-{report.entry_bound}, {report.entry_bound}]{det_note}"
    )
    if good or bad:
        ax.legend(loc="lower right", fontsize=8)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return str(path)
