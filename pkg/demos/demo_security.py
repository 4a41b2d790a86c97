"""Walkthrough: noise thresholds and the cloning-attack security criterion.

A violation v tolerates isotropic noise up to N = 1 - 1/v.  Against the
optimal phase-covariant cloner (fidelity F_A per dimension), the protocol is
secure while the working violation stays below (d-1)/(d F_A - 1) — and the
homogeneous-inequality protocol's violations fit under that bound with more
headroom than the CGLMP-based predecessor in every dimension.
"""
from quditbell.security import (
    comparison_report,
    comparison_table_text,
    criterion_table_text,
    noise_threshold,
)


def main():
    print("security criterion v < (d-1)/(d F_A - 1):\n")
    print(criterion_table_text())

    print("\nprotocol comparison (d = 3, 4, 5):\n")
    print(comparison_table_text())

    print("\nheadroom between predecessor violation and the secure maximum:")
    for d in (3, 4, 5):
        r = comparison_report(d)
        print(
            f"  d={d}: gap = {r.gap:.4f}, "
            f"noise tolerance {noise_threshold(r.v_hddeb):.4f} "
            f"vs predecessor {noise_threshold(r.v_ndeb):.4f}"
        )
    print("\nThe gap widens with d: higher dimensions buy both more noise")
    print("tolerance and more slack under the cloning-attack bound.")


if __name__ == "__main__":
    main()
