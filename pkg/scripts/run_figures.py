#!/usr/bin/env python3
"""Run shipped figure-protocol configs through the benchmark CLI.

Example:
    python scripts/run_figures.py --out results/ --trials 20 fig42 fig422
Runs every config when none are named.  Trials/seed/worker overrides pass
straight through to `bandex run`.
"""

import argparse
import os
import sys

from bandex.cli import main as bandex_main

CONFIG_DIR = os.path.join(os.path.dirname(__file__), "..", "configs")


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("names", nargs="*", help="config stems, e.g. fig42")
    parser.add_argument("--out", default="results")
    parser.add_argument("--trials", type=int, default=None)
    parser.add_argument("--seed", type=int, default=None)
    parser.add_argument("--workers", type=int, default=None)
    args = parser.parse_args()

    stems = args.names or sorted(
        os.path.splitext(f)[0] for f in os.listdir(CONFIG_DIR) if f.endswith(".json")
    )
    for stem in stems:
        path = os.path.join(CONFIG_DIR, f"{stem}.json")
        if not os.path.exists(path):
            print(f"skipping unknown config {stem!r}", file=sys.stderr)
            continue
        argv = ["run", path, "--out", args.out]
        for flag, value in (
            ("--trials", args.trials),
            ("--seed", args.seed),
            ("--workers", args.workers),
        ):
            if value is not None:
                argv += [flag, str(value)]
        print(f"== bandex {' '.join(argv)}", flush=True)
        code = bandex_main(argv)
        if code != 0:
            return code
    return 0


if __name__ == "__main__":
    sys.exit(main())
