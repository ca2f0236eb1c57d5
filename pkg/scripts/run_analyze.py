#!/usr/bin/env python3
"""Reproduce the analyze reports for the built-in model families.

Writes one JSON report per model into reports/ (created next to the cwd).
"""

import pathlib
import sys

from rank2dist.cli import main

RUNS = [
    ["analyze", "--model", "monge", "--n", "5"],
    ["analyze", "--model", "monge", "--n", "6"],
    ["analyze", "--model", "monge", "--n", "7"],
    ["analyze", "--model", "monge", "--n", "8"],
    ["analyze", "--model", "cartan-jet", "--k", "4"],
    ["analyze", "--model", "free-flat", "--step", "4"],
    ["analyze", "--model", "monge", "--n", "5", "--prolong", "2"],
]


def run():
    outdir = pathlib.Path("reports")
    outdir.mkdir(exist_ok=True)
    rc = 0
    for args in RUNS:
        name = "_".join(a.lstrip("-") for a in args) + ".json"
        code = main(args + ["--out", str(outdir / name)])
        print("%-60s exit %d" % (" ".join(args), code))
        rc = rc or code
    return rc


if __name__ == "__main__":
    sys.exit(run())
