#!/usr/bin/env python3
"""Run the full experiment pipeline over the model catalog.

Writes one report directory per (command, distribution) pair under the
chosen output root (default ./runs) using the reference rig.
"""

import argparse
import sys

from gfalg.cli import main as gfalg_main

CATALOG = ("delta", "delta_prime", "heaviside", "pv_inverse", "gaussian",
           "gaussian_times_sine")
COMMANDS = ("embed", "classify", "regularity", "wavefront", "bb-classify",
            "crosscheck")


def run(root: str) -> int:
    worst = 0
    for dist in CATALOG:
        for command in COMMANDS:
            out = f"{root}/{command}/{dist}"
            argv = [command, "--dist", dist, "--out", out]
            if command == "bb-classify":
                argv += ["--weight", "omega:log1p"]
            code = gfalg_main(argv)
            print(f"{command:14s} {dist:20s} exit={code}  -> {out}")
            worst = max(worst, code)
    for extra in ("weights-check", "mollifier-build", "impossibility-demo"):
        out = f"{root}/{extra}"
        code = gfalg_main([extra, "--out", out])
        print(f"{extra:14s} {'-':20s} exit={code}  -> {out}")
        worst = max(worst, code)
    return worst


if __name__ == "__main__":
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--root", default="runs", help="output root directory")
    args = ap.parse_args()
    sys.exit(run(args.root))
