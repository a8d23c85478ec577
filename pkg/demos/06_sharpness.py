"""Sharpness of the bound: a family/measure pair that attains it.

At a corner of the bound curve (l plus the drop p) one can build a
restricted rotation schedule and a pinch measure (an s-dimensional Cantor
factor on one axis times a ball on the untouched axes) whose projections
have dimension exactly l + s - no better than the theorem promises.  The
estimated projected dimensions across the grid concentrate at l + s.
"""

import numpy as np

from projlab import (
    ExperimentConfig,
    family_to_dict,
    run_sharpness,
    sharpness_family,
)

s = np.log(2) / np.log(3)  # Cantor factor dimension
spec = sharpness_family(3, 2, 1, l=1, p=1)
print("restricted schedule (param, row, column, weight):", spec.schedule)

cfg = ExperimentConfig(
    mode="sharpness",
    family=family_to_dict(spec),
    seed=12,
    l=1,
    s=float(s),
    level=12,
    sample_count=100_000,
    lambda_grid=(16,),
    tolerance=0.14,
)
report = run_sharpness(cfg)

summ = report.summary
print(f"\ntarget projected dimension l + s = {summ['target']:.4f}")
print(f"measure dimension before projecting: {summ['nominal_dim']:.4f}")
print(f"rows inside the band {summ['band'][0]:.2f}..{summ['band'][1]:.2f}: "
      f"{summ['in_band_fraction'] * 100:.0f}%")
print("\nlambda     est_dim")
for row in report.rows:
    print(f"{row['lambda'][0]:+.3f}    {row['est_dim']:.3f}")
