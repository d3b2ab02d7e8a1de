"""Recompute completion rate, TBE, ORE and SUS from the study tables in data/study."""
import argparse
from pathlib import Path

from odrk.usability import StudyLog, read_sessions, read_sus, summarize_study

STUDY = Path(__file__).resolve().parents[1] / "data" / "study"


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--sessions", default=STUDY / "sessions.csv", type=Path)
    ap.add_argument("--sus", default=STUDY / "sus_synthetic.csv", type=Path)
    ap.add_argument("--json", action="store_true")
    args = ap.parse_args()
    log = StudyLog(read_sessions(args.sessions.read_text()), read_sus(args.sus.read_text()))
    report = summarize_study(log)
    print(report.to_json() if args.json else report.to_text(), end="\n" if args.json else "")
    if not args.json:
        print()
        for t in report.tasks:
            print(f"task {t.task}: TBE {t.tbe:.10f} goals/s, ORE {t.ore:.6f}%, mean {t.mean_time:.2f}s")


if __name__ == "__main__":
    main()
