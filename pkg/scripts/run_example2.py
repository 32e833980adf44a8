#!/usr/bin/env python3
"""Finer reference run at h = 0.025; otherwise identical to example 1."""

import os
import sys

from obstacle_control.cli import main

BASE = os.path.join("runs", "example2")
SETS = ["--set", "mesh.h=0.025", "--set", "optimizer.max_feval=400"]


def run() -> int:
    os.makedirs(BASE, exist_ok=True)
    mesh_file = os.path.join(BASE, "mesh.txt")
    if main(SETS + ["mesh", "--out", mesh_file]) != 0:
        return 1
    for variant in ("standard", "weak_wolfe"):
        code = main(SETS + ["--set", f"optimizer.variant={variant}",
                            "optimize", "--mesh", mesh_file,
                            "--out-dir", os.path.join(BASE, variant)])
        if code != 0:
            return code
    return main(["export", "--kind", "compare",
                 "--traces",
                 os.path.join(BASE, "standard", "trace_standard.csv"),
                 os.path.join(BASE, "weak_wolfe", "trace_weak_wolfe.csv"),
                 "--out", os.path.join(BASE, "compare.csv")])


if __name__ == "__main__":
    sys.exit(run())
