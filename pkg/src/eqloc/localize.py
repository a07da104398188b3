"""Atiyah-Bott localization over the fixed-point data of a TorusModel."""

from __future__ import annotations

import math
from collections.abc import Mapping
from dataclasses import dataclass
from fractions import Fraction

from .charclass import component_contribution, euler_class_at
from .errors import NonConstantVolume, NonPolynomialResult
from .exactalg import LinFactoredRational, Polynomial, rat_add
from .model import FixedPoint, TorusModel


@dataclass(frozen=True)
class PowerOfOmegaBar:
    """The integrand ``(omega + mu)^k``; restricts to ``mu_f^k`` at a point."""

    k: int

    def __post_init__(self):
        if not isinstance(self.k, int) or self.k < 0:
            raise ValueError("power must be a non-negative integer")


# name -> Polynomial (points) or TruncatedClass (components)
EquivariantIntegrand = PowerOfOmegaBar | Mapping


@dataclass(frozen=True)
class LocalizationResult:
    value: Polynomial
    contributions: tuple[tuple[str, LinFactoredRational], ...]


def _require_isolated(m: TorusModel, what: str) -> None:
    if not m.isolated:
        names = [c.name for c in m.components if not isinstance(c, FixedPoint)]
        raise ValueError(
            f"{what} needs isolated fixed points; pass explicit classes for components {names}"
        )


def contributions(m: TorusModel, integrand: EquivariantIntegrand) -> list[tuple[str, LinFactoredRational]]:
    """Per-component summands ``integral_F iota^* alpha / e^T(nu_F)``."""
    if isinstance(integrand, PowerOfOmegaBar):
        _require_isolated(m, "a power-of-omega integrand")
        k = integrand.k
        return [
            (p.name, component_contribution(p, p.moment.to_polynomial() ** k))
            for p in m.components
        ]
    missing = [c.name for c in m.components if c.name not in integrand]
    if missing:
        raise ValueError(f"integrand does not cover components {missing}")
    extra = set(integrand) - {c.name for c in m.components}
    if extra:
        raise ValueError(f"integrand names unknown components {sorted(extra)}")
    return [(c.name, component_contribution(c, integrand[c.name])) for c in m.components]


def localize(m: TorusModel, integrand: EquivariantIntegrand) -> LocalizationResult:
    """Sum the fixed-point contributions and insist the poles cancel.

    Raises :class:`NonPolynomialResult` if the sum keeps a denominator: the
    fixed-point data then cannot come from a global equivariant class.
    """
    parts = contributions(m, integrand)
    total = LinFactoredRational.zero(m.rank)
    for _, c in parts:
        total = rat_add(total, c)
    if not total.is_polynomial():
        raise NonPolynomialResult(total, parts)
    return LocalizationResult(total.numerator, tuple(parts))


def power_integral(m: TorusModel, k: int) -> Polynomial:
    """``integral_M (omega + mu)^k``; zero for k < dimC, degree k - dimC otherwise."""
    return localize(m, PowerOfOmegaBar(k)).value


def dh_series(m: TorusModel, order: int) -> list[Polynomial]:
    """Entries ``sum_f mu_f^k / (k! e_f)`` for ``k = 0..order``.

    These are the homogeneous pieces of ``integral exp(omega + mu)``; entry
    ``dimC`` is the symplectic volume.
    """
    _require_isolated(m, "dh_series")
    return [power_integral(m, k).scale(Fraction(1, math.factorial(k))) for k in range(order + 1)]


def dh_volume(m: TorusModel) -> Fraction:
    """``integral omega^n / n!`` as an exact rational."""
    _require_isolated(m, "dh_volume")
    top = power_integral(m, m.dimC).scale(Fraction(1, math.factorial(m.dimC)))
    if not top.is_constant():
        raise NonConstantVolume(top)
    return top.constant_value()


def dh_closed_form(m: TorusModel) -> LinFactoredRational:
    """``sum_f exp(mu_f) / e_f`` for a noncompact model with vanishing moments.

    With every moment zero the exponentials are 1 and the sum is exact. The
    result is returned as-is: noncompact models are exempt from the
    polynomiality check.
    """
    if not m.noncompact:
        raise ValueError("closed-form DH evaluation is reserved for noncompact models")
    _require_isolated(m, "dh_closed_form")
    if any(not p.moment.is_zero() for p in m.components):
        raise ValueError("closed-form DH evaluation needs all moments to vanish")
    total = LinFactoredRational.zero(m.rank)
    for p in m.components:
        total = rat_add(total, component_contribution(p, Polynomial.one(m.rank)))
    return total


def euler_characteristic(m: TorusModel) -> int:
    """``integral e^T(TM)``; every summand is ``e_f / e_f = 1`` so this counts points."""
    _require_isolated(m, "euler_characteristic")
    integrand = {p.name: euler_class_at(p) for p in m.components}
    result = localize(m, integrand)
    for _, c in result.contributions:
        if c != 1:
            raise NonPolynomialResult(c, result.contributions)
    value = result.value.constant_value()
    assert value.denominator == 1
    return int(value)

