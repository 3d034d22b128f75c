"""Regenerate every fixture from its seed.

    python3 scripts/make_fixtures.py [ROOT]
"""

import sys

from hansard_scale.fixtures import write_fixtures


def main() -> None:
    root = sys.argv[1] if len(sys.argv) > 1 else "fixtures"
    for path, what in write_fixtures(root).items():
        print(f"{root}/{path}\t{what}")


if __name__ == "__main__":
    main()
