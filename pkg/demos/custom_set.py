#!/usr/bin/env python3
"""Certify a set you define yourself: write a JSON spec, load it, run the
pipeline, and inspect the certificate — the same flow the `okacert certify`
command drives.
"""

import json
import tempfile
from pathlib import Path

import numpy as np

from okacert import (
    SamplingPlan,
    canonical_json,
    certify_oka_complement,
    load_set,
)
from okacert.cli import main as cli_main

# a slab crossed with a disc in C^2: {|Re z1| <= 1} x {|z2| <= 1} would
# contain complex lines, so take the rotated polyhedral wedge instead
spec = {
    "type": "polyhedron",
    "A": [[1.0, 0.0, 0.0, 0.0],
          [-1.0, 0.0, 0.0, 0.0],
          [0.0, 1.0, 0.0, 0.0],
          [0.0, -1.0, 0.0, 0.0],
          [0.0, 0.0, 1.0, 0.0],
          [0.0, 0.0, -1.0, 0.0],
          [0.0, 0.0, 0.0, 1.0],
          [0.0, 0.0, 0.0, -1.0]],
    "b": [1.0, 1.0, 1.0, 1.0, 1.0, 1.0, 1.0, 1.0],
}

with tempfile.TemporaryDirectory() as td:
    path = Path(td) / "box.json"
    path.write_text(json.dumps(spec), encoding="utf-8")

    E = load_set(str(path))
    print("loaded:", type(E).__name__, "in real dimension", E.m)
    print("contains origin:", bool(E.contains(np.zeros(4))))
    print("contains (3,0,0,0):", bool(E.contains(np.array([3.0, 0, 0, 0]))))
    print()

    cert = certify_oka_complement(E, SamplingPlan().scaled(150))
    print("overall:", cert.overall)
    for c in cert.checks:
        print(f"  {c.name:24s} {c.verdict}")
    print()

    # the compact box is bounded: no lines, no halflines, every boundary
    # hyperplane is stable, so the complement certifies
    out = Path(td) / "cert.json"
    code = cli_main(["certify", str(path), "--samples", "150",
                     "--out", str(out)])
    blob = json.loads(out.read_text(encoding="utf-8"))
    print("cli exit code:", code)
    print("certificate digest:", blob["input_digest"][:16], "...")
    print("bytes stable under re-encoding:",
          canonical_json(blob) == out.read_text(encoding="utf-8").strip())
