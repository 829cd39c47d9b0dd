"""
Bound states of a symmetric double well
=======================================

Two attractive centers of strength Omega a distance d apart.  For a
linear well the odd state appears once d Omega > 2.  With alpha > 0 the
odd states come in pairs, and the upper odd level can rise above the
even one at large separation.  Shooting from infinity confirms each level.
"""

from nldelta import symmetric_double_report
from nldelta.oracle import symmetric_shooting

for alpha in (0.0, 0.5, 1.0):
    print(f"\nOmega = 2, alpha = {alpha}")
    for d in (0.5, 1.0, 3.0, 10.0):
        states, notes = symmetric_double_report(2.0, alpha, d)
        shots = sorted(s.nu for s in symmetric_shooting(2.0, alpha, d))
        levels = ", ".join(f"{s.parity.value} {s.nu:.6f}" for s in states)
        gap = max((abs(a - b) for a, b in zip(sorted(s.nu for s in states), shots)), default=0.0)
        print(f"  d = {d:4g}: {levels or 'none'}   (shooting gap {gap:.1e})")
        if "odd" in notes:
            print(f"           {notes['odd']}")
