"""Readers for the documented export schemas (CSV tables, legacy VTK)."""

from __future__ import annotations

import csv

import numpy as np


class SchemaError(ValueError):
    """An input file does not match its documented schema."""


def read_csv_columns(path, required: list[str]) -> dict[str, np.ndarray]:
    """Read a header CSV; raise SchemaError naming any missing column."""
    with open(path, newline="") as fh:
        reader = csv.DictReader(fh)
        names = reader.fieldnames or []
        for col in required:
            if col not in names:
                raise SchemaError(f"{path}: missing column '{col}'")
        rows = list(reader)
    out = {}
    for col in names:
        try:
            out[col] = np.array([float(r[col]) for r in rows])
        except (TypeError, ValueError):
            raise SchemaError(f"{path}: non-numeric data in column '{col}'") from None
    return out


def read_state_vtk(path):
    """Points, triangles and point-data scalars from a legacy ASCII VTK file."""
    with open(path) as fh:
        lines = [ln.rstrip("\n") for ln in fh]
    i = 0

    def fail(msg):
        raise SchemaError(f"{path}: {msg}")

    def skip_to(prefix):
        nonlocal i
        while i < len(lines) and not lines[i].startswith(prefix):
            i += 1
        if i == len(lines):
            fail(f"section '{prefix}' not found")

    skip_to("POINTS")
    n = int(lines[i].split()[1])
    i += 1
    pts = np.array([[float(v) for v in lines[i + k].split()[:2]] for k in range(n)])
    i += n
    skip_to("CELLS")
    t = int(lines[i].split()[1])
    i += 1
    tris = []
    for k in range(t):
        parts = lines[i + k].split()
        if parts[0] != "3":
            fail("only triangle cells are supported")
        tris.append([int(parts[1]), int(parts[2]), int(parts[3])])
    i += t
    skip_to("POINT_DATA")
    i += 1
    fields: dict[str, np.ndarray] = {}
    while i < len(lines):
        if lines[i].startswith("SCALARS"):
            name = lines[i].split()[1]
            i += 2  # SCALARS line + LOOKUP_TABLE line
            vals = np.array([float(lines[i + k]) for k in range(n)])
            fields[name] = vals
            i += n
        else:
            i += 1
    if not fields:
        fail("no point-data scalars found")
    return pts, np.array(tris), fields
