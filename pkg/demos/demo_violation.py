"""Walkthrough: Bell violation factors of entangled qudit pairs.

For each dimension d in {3, 4, 5} we take the reference entangled state,
build the d-dimensional homogeneous Bell operator, and evaluate the violation
factor v.  Local realism caps v at 1 (checked exhaustively); the quantum
values exceed it by a wide margin.
"""
import numpy as np

from quditbell import (
    REFERENCE_STATES,
    builtin_operator,
    canonical_basis,
    lhv_max,
    optimize_basis,
    theta_scan,
    violation,
)


def main():
    print("violation factors (local-realism bound is exactly 1)\n")
    print(f"{'d':>3} {'lhv max':>12} {'canonical v':>12} {'optimized v':>12}")
    for d in (3, 4, 5):
        state = REFERENCE_STATES[f"psi{d}"]()
        t = builtin_operator(d)
        bound = lhv_max(t)
        v_canon = violation(state, t, canonical_basis(d))
        _, v_opt = optimize_basis(state, t)
        print(f"{d:>3} {bound:>12.9f} {v_canon:>12.5f} {v_opt:>12.5f}")

    # The violation is sensitive to the shared base phase of the geometric
    # measurement settings.  A scan over the phase angle shows the reference
    # value sits at the phase e^{i pi/2d} by construction, not by accident.
    print("\nbase-phase scan for d = 3 (coarse, 2000 points):")
    state = REFERENCE_STATES["psi3"]()
    t = builtin_operator(3)
    theta, v = theta_scan(state, t, num_points=2000)
    print(f"  best phase angle {np.angle(theta):.4f} rad -> v = {v:.5f}")
    print(f"  reference phase  {np.pi / 6:.4f} rad -> v = "
          f"{violation(state, t, canonical_basis(3)):.5f}")


if __name__ == "__main__":
    main()
