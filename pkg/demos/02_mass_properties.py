"""Exact polyhedral mass properties versus the analytic values.

Integrates volume, centroid and the inertia matrix over a unit cube and a
refined icosphere, then shows the normalization operator at work.  Run:

    python demos/02_mass_properties.py
"""

import math
import sys
from pathlib import Path

import numpy as np

sys.path.insert(0, str(Path(__file__).resolve().parents[1] / "tests"))

import cadeval as cv
import fixtures as fx

cube = fx.unit_cube()
props = cv.mass_properties(cube)
print("unit cube")
print(f"  volume    {props.volume:.12f}          (exact 1)")
print(f"  centroid  {np.round(props.centroid, 12)}    (exact 0.5 each)")
print(f"  inertia   diag {np.round(np.diag(props.inertia), 12)} (exact 1/6)")
print(f"  trace     {props.trace:.12f}          (exact 0.5)")

sphere = fx.icosphere(4)
sprops = cv.mass_properties(sphere)
exact_volume = 4 * math.pi / 3
exact_trace = 2 * exact_volume * 3 / 5
print("\nicosphere, subdivision 4 (5120 triangles)")
print(f"  volume  {sprops.volume:.6f}  vs 4*pi/3 = {exact_volume:.6f} "
      f"({abs(sprops.volume - exact_volume) / exact_volume:.2%} off)")
print(f"  trace   {sprops.trace:.6f}  vs 6V/5  = {exact_trace:.6f} "
      f"({abs(sprops.trace - exact_trace) / exact_trace:.2%} off)")

# normalization: centroid to origin, RMS radius of gyration to 1
normalized, shift, scale = cv.normalize_solid(
    cube.transformed(scale=7.0, translation=(5, -3, 2))
)
nprops = cv.mass_properties(normalized)
print("\nnormalized 7x-scaled, translated cube")
print(f"  centroid         {np.round(nprops.centroid, 9)}")
print(f"  tr(I) / (2 Vol)  {nprops.trace / (2 * nprops.volume):.9f}  (target 1)")
print(f"  bounds           {normalized.bounds()[0]} .. {normalized.bounds()[1]}")
