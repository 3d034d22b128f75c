"""Run the bundled end-to-end demo and print its report.

    python3 scripts/run_demo.py [--output DIR] [--seed N]
"""

import argparse
import sys

from hansard_scale.cli import pipeline_demo


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--output", default="demo_output")
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()
    report = pipeline_demo(args.output, seed=args.seed)
    print(report.text, end="")
    print(f"finished in {report.seconds:.1f} s; outputs in {report.output}")
    return 0 if report.ok else 1


if __name__ == "__main__":
    sys.exit(main())
