"""Independent checks for the localization engine.

Nothing here goes through ``localize``: the Vandermonde determinant is a
cofactor expansion, the Lagrange power sum is plain Fraction arithmetic,
random evaluation compares values rather than representations, and the S^2
area comes from floating-point quadrature (the only float code in eqloc).
"""

from __future__ import annotations

import math
import random
from collections.abc import Sequence
from fractions import Fraction
from functools import lru_cache

import numpy as np

from .errors import DenominatorVanishes, RankMismatch
from .exactalg import LinFactoredRational, Polynomial, as_rational, rat_eval


def vandermonde_det(nodes: Sequence) -> Polynomial:
    """Determinant of ``V[i][j] = nodes[j]**i`` by Laplace expansion.

    Nodes may be Polynomials or rationals. Expansion runs down the rows with
    the minors memoized on the set of remaining columns, so the cost is
    ``O(2^s * s)`` products rather than ``s!``.
    """
    s = len(nodes)
    rank = next((x.rank for x in nodes if isinstance(x, Polynomial)), 0)
    polys = [
        x if isinstance(x, Polynomial) else Polynomial.constant(rank, as_rational(x)) for x in nodes
    ]
    for p in polys:
        if p.rank != rank:
            raise RankMismatch(rank, p.rank)
    powers = [[p**i for i in range(s)] for p in polys]

    @lru_cache(maxsize=None)
    def minor(row: int, cols: tuple) -> Polynomial:
        # determinant of rows row..s-1 restricted to cols
        if not cols:
            return Polynomial.one(rank)
        total = Polynomial.zero(rank)
        for pos, j in enumerate(cols):
            entry = powers[j][row]
            if entry.is_zero():
                continue
            sub = minor(row + 1, cols[:pos] + cols[pos + 1 :])
            term = entry * sub
            total = total - term if pos % 2 else total + term
        return total

    return minor(0, tuple(range(s)))


def lagrange_power_sum(n: int, nodes: Sequence) -> Fraction:
    """``sum_i x_i^n / prod_{j != i} (x_i - x_j)`` over n+1 distinct rationals."""
    xs = [as_rational(x) for x in nodes]
    if len(xs) != n + 1:
        raise ValueError(f"need {n + 1} nodes, got {len(xs)}")
    if len(set(xs)) != len(xs):
        raise ValueError("nodes must be distinct")
    total = Fraction(0)
    for i, xi in enumerate(xs):
        den = Fraction(1)
        for j, xj in enumerate(xs):
            if j != i:
                den *= xi - xj
        total += xi**n / den
    return total


def random_rational(rng: random.Random, bound: int = 10**4) -> Fraction:
    return Fraction(rng.randint(-bound, bound), rng.randint(1, bound))


def rat_equal_by_evaluation(
    a: LinFactoredRational, b: LinFactoredRational, trials: int = 8, seed: int | None = 0
) -> bool:
    """Probabilistic equality: ``a - b`` vanishes at ``trials`` random points.

    Points hitting a denominator zero are resampled, up to ``10 * trials``
    attempts; running out of attempts counts as inequality.
    """
    if a.rank != b.rank:
        raise RankMismatch(a.rank, b.rank)
    return sum_equal_by_evaluation([a], b, trials, seed)


def sum_equal_by_evaluation(
    terms: Sequence[LinFactoredRational], target: LinFactoredRational, trials: int = 8, seed: int | None = 0
) -> bool:
    """Like :func:`rat_equal_by_evaluation` but sums ``terms`` pointwise, never symbolically."""
    rank = target.rank
    rng = random.Random(seed)
    done = 0
    for _ in range(10 * trials):
        point = [random_rational(rng) for _ in range(rank)]
        try:
            lhs = sum((rat_eval(t, point) for t in terms), Fraction(0))
            rhs = rat_eval(target, point)
        except DenominatorVanishes:
            continue
        if lhs != rhs:
            return False
        done += 1
        if done == trials:
            return True
    return False


def s2_area_quadrature(samples: int) -> float:
    """Midpoint rule for ``int_0^{2pi} int_0^{pi} sin(phi) dphi dtheta``.

    ``samples`` midpoints per axis; the integrand does not depend on theta,
    so the tensor-product rule factors into two one-dimensional sums.
    """
    if samples < 2:
        raise ValueError("samples must be at least 2")
    dphi = math.pi / samples
    dtheta = 2 * math.pi / samples
    phi = (np.arange(samples) + 0.5) * dphi
    theta_sum = samples * dtheta
    return float(theta_sum * np.sum(np.sin(phi)) * dphi)
