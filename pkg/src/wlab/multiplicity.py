"""The two attachment multiplicities mu+/mu- of a relative curve, and friends.

A nodal real rational curve meeting the (-2)-curve E transversally carries a
tangency profile (alpha real intersection points, beta conjugate pairs) and a
mass m (its number of solitary real nodes).  Its k-th multiplicities are

    mu_plus(m, alpha, beta, k)  = (-1)^m * sum over k = a + 2b of C(alpha,a)*C(beta,b)
    mu_minus(m, alpha, beta, k) = (-1)^(m+beta) * 2^beta   if alpha == 0 and k == beta
                                  0                        otherwise

Everything here is exact integer arithmetic; Python integers are unbounded,
so sums of squared weights and large binomials need no special handling.
"""

from __future__ import annotations

import math


def binomial(n: int, r: int) -> int:
    """C(n, r) with C(n, r) = 0 whenever r < 0 or r > n."""
    if r < 0 or r > n or n < 0:
        return 0
    return math.comb(n, r)


def _check_profile(m: int, alpha: int, beta: int, k: int) -> None:
    if m < 0 or alpha < 0 or beta < 0 or k < 0:
        raise ValueError("m, alpha, beta, k must all be nonnegative")


def mu_plus(m: int, alpha: int, beta: int, k: int) -> int:
    """Signed number of ways to pick k attachment points respecting reality.

    Real intersection points are picked singly, conjugate pairs only as
    pairs, so the sum runs over the splittings k = a + 2b.
    """
    _check_profile(m, alpha, beta, k)
    total = sum(
        binomial(alpha, k - 2 * b) * binomial(beta, b) for b in range(k // 2 + 1)
    )
    return -total if m % 2 else total


def mu_minus(m: int, alpha: int, beta: int, k: int) -> int:
    """Multiplicity on the chi-raising side: nonzero only for alpha=0, k=beta."""
    _check_profile(m, alpha, beta, k)
    if alpha == 0 and k == beta:
        return (-1) ** (m + beta) * 2**beta
    return 0


def mu_plus_series(m: int, alpha: int, beta: int) -> list[int]:
    """Coefficient list of (-1)^m * (1+x)^alpha * (1+x^2)^beta.

    Closed form of the mu_plus generating series; the coefficient at x^k
    equals mu_plus(m, alpha, beta, k).  Used as an independent oracle.
    """
    _check_profile(m, alpha, beta, 0)
    coeffs = [0] * (alpha + 2 * beta + 1)
    for a in range(alpha + 1):
        ca = binomial(alpha, a)
        for b in range(beta + 1):
            coeffs[a + 2 * b] += ca * binomial(beta, b)
    if m % 2:
        coeffs = [-c for c in coeffs]
    return coeffs


def complex_weight(alpha: int, beta: int, k: int) -> int:
    """Unconstrained attachment count C(alpha + 2*beta, k).

    Forgetting the real structure, all alpha + 2*beta intersection points
    with E are interchangeable; this is the weight entering the complex
    Abramovich-Bertram aggregation.
    """
    if alpha < 0 or beta < 0 or k < 0:
        raise ValueError("alpha, beta, k must be nonnegative")
    return binomial(alpha + 2 * beta, k)
