"""Centralized numerical defaults used by the library and the CLI."""

import math

#: grid size is the next power of two >= OVERSAMPLE * (2 * degree + 1)
OVERSAMPLE = 8

#: relative tolerance of the Luxemburg norm bisection
LUXEMBURG_TOL = 1e-10

#: |1 - (1 - w)^4| <= 15 |w| for |w| <= 1
A0 = 15.0

#: |f_n| <= A0 * 2^n + A0 * 2^(n-1)
A0_PRIME = 22.5

#: |1 - w^4|^4 <= 64 |1 - w|^2 for |w| <= 1
SQUARE_GAP = 64.0

#: slack used for pointwise envelope assertions
ENVELOPE_SLACK = 1e-6

#: leakage values at or below this are treated as exact analyticity
LEAKAGE_FLOOR = 1e-13

SCHEMA_VERSION = 1


def pn_l1_constant(r):
    """Constant in ||f_n||_{p_n} <= C (||f_n||_1 + (n+1)^-(r+2))."""
    return math.exp(r + 2.0) * max(1.0, A0_PRIME)
