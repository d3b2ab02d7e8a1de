"""Write data/study/sessions.csv (published times and outcomes) and a synthetic SUS file.

Only per-participant SUS scores were published, not the ten answers behind them,
so sus_synthetic.csv holds answer vectors constructed to give exactly those scores.
"""
import csv
from pathlib import Path

OUT = Path(__file__).resolve().parents[1] / "data" / "study"

TASK1_TIMES = [327, 751, 296, 211, 228, 310, 235, 481, 197, 380, 161, 182, 229, 281, 149, 170, 218, 209, 398, 246]
TASK2_TIMES = [288, 797, 240, 437, 310, 300, 257, 354, 233, 430, 317, 224, 374, 560, 250, 253, 342, 224, 405, 249]
TASK2_FAILED = {"P2"}
SUS_SCORES = [82.5, 47.5, 70, 77.5, 75, 67.5, 90, 90, 100, 80, 82.5, 72.5, 72.5, 97.5, 90, 82.5, 75, 70, 82.5, 87.5]


def answers_for(score):
    """Ten 1..5 answers with the given SUS score: fill odd items up, then lower even items."""
    raw = round(score / 2.5)
    odd, even = [1] * 5, [5] * 5
    for i in range(raw):
        if i < 20:
            odd[i % 5] += 1
        else:
            even[i % 5] -= 1
    out = []
    for o, e in zip(odd, even):
        out += [o, e]
    return out


def main():
    OUT.mkdir(parents=True, exist_ok=True)
    with open(OUT / "sessions.csv", "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["participant", "task", "success", "time_seconds"])
        for task, times in (("1", TASK1_TIMES), ("2", TASK2_TIMES)):
            for j, t in enumerate(times, start=1):
                p = f"P{j}"
                w.writerow([p, task, 0 if task == "2" and p in TASK2_FAILED else 1, t])
    with open(OUT / "sus_synthetic.csv", "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["participant"] + [f"q{i}" for i in range(1, 11)])
        for j, s in enumerate(SUS_SCORES, start=1):
            w.writerow([f"P{j}"] + answers_for(s))


if __name__ == "__main__":
    main()
