"""
Bistable transmission through three Kerr centers
================================================

Three equal real centers at c = 0, 1, 2.  With z = 20 and alpha = 2 the
transmission curve folds over near the linear resonances, so several
self-consistent branches coexist at the same k.
"""

import numpy as np

from nldelta import PRESETS, SweepSpec, branch_counts, run_sweep, solve_scattering
from nldelta.model import DeltaCenter, validate_and_sort

# the strong-nonlinearity preset, swept over the default k range
spec = SweepSpec(0.1, 6.0, 600, PRESETS["fig1-strong"].problem())
records = run_sweep(spec)
counts = branch_counts(records)

multi = sorted(k for k, n in counts.items() if n > 1)
print(f"{len(records)} records over {len(counts)} k values")
print(f"most branches at one k: {max(counts.values())}")
print(f"multi-branch k from {multi[0]:.3f} to {multi[-1]:.3f}")

# the linear curve with the same opacity marks where the folds sit
ks = spec.k_values()
linear = np.array([
    solve_scattering(validate_and_sort([DeltaCenter(c, 20.0) for c in (0.0, 1.0, 2.0)], k))[0].t_intensity
    for k in ks])
peaks = ks[1:-1][(linear[1:-1] > linear[:-2]) & (linear[1:-1] >= linear[2:])]
print("linear resonances at k =", np.round(peaks, 3))

# one bistable point in detail: branches are ordered by |psi(c_N)|
for s in solve_scattering(PRESETS["fig1-strong"].problem(2.4)):
    print(f"k = 2.4  branch {s.branch_index}: |T|^2 = {s.t_intensity:.6f}  "
          f"|psi(c_N)| = {abs(s.psi_at_centers[-1]):.6f}")
