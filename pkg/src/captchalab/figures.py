"""Report rendering: per-trial rate chart, summary bars, and a CSV table."""

from __future__ import annotations

import csv
from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402

from .harness import Report  # noqa: E402


def write_report_artifacts(report: Report, out_dir: str | Path) -> list[Path]:
    """Write rates_by_trial.png, rate_summary.png and per_trial.csv.

    Returns the paths written.
    """
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    written = []

    csv_path = out / "per_trial.csv"
    with csv_path.open("w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["trial_id", "machine_rate", "human_rate", "verdict"])
        for tid, machine, human, verdict in report.per_trial:
            writer.writerow([tid, machine, human, verdict])
    written.append(csv_path)

    idx = range(1, len(report.per_trial) + 1)
    machine = [m for _, m, _, _ in report.per_trial]
    human = [h for _, _, h, _ in report.per_trial]
    fig, ax = plt.subplots(figsize=(10, 3.2))
    ax.plot(idx, machine, drawstyle="steps-mid", label="machine", lw=1.2)
    ax.plot(idx, human, drawstyle="steps-mid", label="human", lw=1.2, alpha=0.8)
    ax.set_xlabel("trial")
    ax.set_ylabel("rate (chars correct)")
    ax.set_ylim(-0.3, max(4, max(machine + human)) + 0.3)
    ax.legend(loc="lower left", ncol=2, frameon=False)
    ax.set_title("Per-trial recognition rates")
    fig.tight_layout()
    trial_png = out / "rates_by_trial.png"
    fig.savefig(trial_png, dpi=120)
    plt.close(fig)
    written.append(trial_png)

    pct = report.percentages()
    labels = ["machine\nchar", "human\nchar", "machine\nfull", "human\nfull"]
    values = [pct["machine_char_rate"], pct["human_char_rate"],
              pct["machine_full_rate"], pct["human_full_rate"]]
    fig, ax = plt.subplots(figsize=(5, 3.4))
    bars = ax.bar(labels, values, color=["#336699", "#993333"] * 2)
    for bar, value in zip(bars, values):
        ax.text(bar.get_x() + bar.get_width() / 2, value + 1, f"{value:.2f}",
                ha="center", va="bottom", fontsize=9)
    ax.set_ylim(0, 110)
    ax.set_ylabel("percent")
    ax.set_title(f"Aggregate rates over {report.n_trials} trials")
    fig.tight_layout()
    summary_png = out / "rate_summary.png"
    fig.savefig(summary_png, dpi=120)
    plt.close(fig)
    written.append(summary_png)

    return written
