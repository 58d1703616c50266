"""Regenerate the JSON fixtures under fixtures/."""

import argparse
from pathlib import Path

from arcop.fixtures import write_fixture_files


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--dir", default=str(Path(__file__).resolve().parent.parent / "fixtures"))
    args = ap.parse_args()
    paths = write_fixture_files(args.dir)
    print(f"wrote {len(paths)} files to {args.dir}")


if __name__ == "__main__":
    main()
