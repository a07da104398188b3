"""Equivariant characteristic classes restricted to fixed components."""

from __future__ import annotations

from collections.abc import Sequence
from dataclasses import dataclass
from fractions import Fraction

from .exactalg import LinearForm, LinFactoredRational, Polynomial
from .model import FixedComponent, FixedPoint


def elementary_symmetric(k: int, forms: Sequence[LinearForm], rank: int | None = None) -> Polynomial:
    """k-th elementary symmetric polynomial of ``forms``.

    ``rank`` is only needed when ``forms`` is empty.
    """
    if k < 0:
        raise ValueError("k must be non-negative")
    if rank is None:
        if not forms:
            raise ValueError("rank is required for an empty list of forms")
        rank = forms[0].rank
    if k > len(forms):
        return Polynomial.zero(rank)
    # e[j] holds e_j of the forms consumed so far
    e = [Polynomial.one(rank)] + [Polynomial.zero(rank)] * k
    for f in forms:
        for j in range(min(k, len(forms)), 0, -1):
            if e[j - 1]:
                e[j] = e[j] + e[j - 1].mul_linear(f)
    return e[k]


def euler_class_at(p: FixedPoint) -> Polynomial:
    """Product of the tangent weights at an isolated fixed point."""
    e = Polynomial.one(p.rank)
    for w in p.weights:
        e = e.mul_linear(w)
    return e


def chern_restriction(k: int, p: FixedPoint) -> Polynomial:
    """``c_k^T(TM)`` restricted to ``p``: the k-th elementary symmetric polynomial of its weights."""
    return elementary_symmetric(k, p.weights, p.rank)


def _as_rat(x, rank: int) -> LinFactoredRational:
    if isinstance(x, LinFactoredRational):
        return x
    if isinstance(x, Polynomial):
        return LinFactoredRational.from_polynomial(x)
    if isinstance(x, LinearForm):
        return LinFactoredRational.from_polynomial(x.to_polynomial())
    return LinFactoredRational.from_polynomial(Polynomial.constant(rank, x))


@dataclass(frozen=True)
class TruncatedClass:
    """``sum_k coeffs[k] * h^k`` in ``R[h] / h^(len(coeffs))``.

    Coefficients are :class:`LinFactoredRational`; polynomials and scalars are
    promoted on construction.
    """

    coeffs: tuple
    rank: int

    def __init__(self, coeffs: Sequence, rank: int | None = None):
        if not coeffs:
            raise ValueError("a truncated class needs at least one coefficient")
        if rank is None:
            rank = next(
                (c.rank for c in coeffs if isinstance(c, (Polynomial, LinFactoredRational, LinearForm))),
                None,
            )
            if rank is None:
                raise ValueError("rank is required when all coefficients are scalars")
        object.__setattr__(self, "rank", rank)
        object.__setattr__(self, "coeffs", tuple(_as_rat(c, rank) for c in coeffs))

    @property
    def order(self) -> int:
        """Highest retained power of h (the component's complex dimension)."""
        return len(self.coeffs) - 1

    @classmethod
    def one(cls, rank: int, order: int) -> TruncatedClass:
        return cls([1] + [0] * order, rank)

    def __mul__(self, other: TruncatedClass) -> TruncatedClass:
        if self.order != other.order:
            raise ValueError("truncation orders differ")
        m = self.order
        out = [LinFactoredRational.zero(self.rank)] * (m + 1)
        for i, a in enumerate(self.coeffs):
            if a.is_zero():
                continue
            for j in range(m + 1 - i):
                b = other.coeffs[j]
                if not b.is_zero():
                    out[i + j] = out[i + j] + a * b
        return TruncatedClass(out, self.rank)

    def __add__(self, other: TruncatedClass) -> TruncatedClass:
        if self.order != other.order:
            raise ValueError("truncation orders differ")
        return TruncatedClass([a + b for a, b in zip(self.coeffs, other.coeffs)], self.rank)

    def __str__(self):
        parts = []
        for k, c in enumerate(self.coeffs):
            if k == 0:
                parts.append(str(c))
            elif k == 1:
                parts.append(f"({c})*h")
            else:
                parts.append(f"({c})*h^{k}")
        return " + ".join(parts)


def linear_class(beta: LinearForm, d: int, order: int) -> TruncatedClass:
    """``beta + d*h`` truncated at ``h^order``."""
    coeffs = [beta.to_polynomial()] + [0] * order
    if order >= 1:
        coeffs[1] = d
    return TruncatedClass(coeffs, beta.rank)


def inverse_euler_component(c: FixedComponent | FixedPoint) -> TruncatedClass:
    """``prod_j 1/(beta_j + d_j*h)`` expanded and truncated at ``h^dimC``.

    Each factor is the finite geometric series
    ``(1/beta) * sum_k (-d/beta)^k h^k``; h is nilpotent so the series stops.
    """
    rank = c.rank
    m = c.dimC
    normal = c.normal_weights if isinstance(c, FixedComponent) else [(w, 0) for w in c.weights]
    result = TruncatedClass.one(rank, m)
    for beta, d in normal:
        series = []
        for k in range(m + 1):
            num = Polynomial.constant(rank, Fraction(-d) ** k)
            series.append(LinFactoredRational(num, [(beta, k + 1)]))
        result = result * TruncatedClass(series, rank)
    return result


def moment_power_class(c: FixedComponent, k: int, omega_multiple=1) -> TruncatedClass:
    """``(omega|_F + mu(F))^k`` on a component where ``omega|_F = omega_multiple * h``."""
    coeffs = [c.moment.to_polynomial()] + [0] * c.dimC
    if c.dimC:
        coeffs[1] = omega_multiple
    base = TruncatedClass(coeffs, c.rank)
    out = TruncatedClass.one(c.rank, c.dimC)
    for _ in range(k):
        out = out * base
    return out


def component_contribution(c: FixedComponent | FixedPoint, restricted) -> LinFactoredRational:
    """``integral_F restricted / e^T(nu_F)``.

    For an isolated point ``restricted`` may be a plain polynomial; the result
    is then ``restricted / prod(weights)``.
    """
    if isinstance(c, FixedPoint):
        if isinstance(restricted, TruncatedClass):
            if restricted.order != 0:
                raise ValueError(f"point {c.name!r} takes a class with a single coefficient")
            num = restricted.coeffs[0]
        else:
            num = _as_rat(restricted, c.rank)
        return num * LinFactoredRational(Polynomial.one(c.rank), c.weights)
    if not isinstance(restricted, TruncatedClass):
        restricted = TruncatedClass([restricted] + [0] * c.dimC, c.rank)
    if restricted.order != c.dimC:
        raise ValueError(
            f"component {c.name!r} needs {c.dimC + 1} coefficients, got {restricted.order + 1}"
        )
    top = (restricted * inverse_euler_component(c)).coeffs[c.dimC]
    return top * c.generator_integral
