import importlib
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from eqloc import (
    FixedPoint,
    LinearForm,
    LinFactoredRational,
    NonConstantVolume,
    NonPolynomialResult,
    Polynomial,
    PowerOfOmegaBar,
    TorusModel,
    builtin_cpn,
    builtin_gaussian,
    builtin_s2,
    chern_restriction,
    dh_closed_form,
    dh_series,
    dh_volume,
    euler_characteristic,
    load_model,
    localize,
    parse_polynomial,
    permute_variables,
    power_integral,
    product,
    rat_add,
    subtorus_restrict,
)
from eqloc.charclass import euler_class_at
from strategies import small_rationals


def cpn_chern_integrand(n):
    return {f"f{i}": Polynomial.var(n + 1, i) ** n for i in range(n + 1)}


def test_s2_area():
    assert localize(builtin_s2(1), PowerOfOmegaBar(1)).value == 2


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_cpn_chern_integral(n):
    assert localize(builtin_cpn(n), cpn_chern_integrand(n)).value == 1


def test_tampered_cp1_raises():
    m = builtin_cpn(1)
    f0, f1 = m.components
    bad = TorusModel(2, 1, (f0, FixedPoint("f1", f1.moment, (LinearForm([1, -2]),))))
    with pytest.raises(NonPolynomialResult) as info:
        power_integral(bad, 1)
    rem = info.value.remainder
    assert not rem.is_polynomial()
    # t0/(t0 - t1) + t1/(t0 - 2 t1), cleared by hand
    assert rem == LinFactoredRational(parse_polynomial("t0^2 - t0*t1 - t1^2", 2), [LinearForm([1, -1]), LinearForm([1, -2])])
    assert [name for name, _ in info.value.contributions] == ["f0", "f1"]


def test_power_integral_examples():
    assert power_integral(builtin_cpn(2), 0) == 0
    assert power_integral(builtin_cpn(2), 2) == 1
    assert power_integral(builtin_s2(1), 1) == 2


def test_power_integral_above_top_degree_cp1():
    # t0^2/(t0 - t1) + t1^2/(t1 - t0) = t0 + t1
    assert power_integral(builtin_cpn(1), 2) == parse_polynomial("t0 + t1", 2)


def test_dh_series_examples():
    assert dh_series(builtin_s2(1), 1) == [0, 2]
    assert dh_series(builtin_cpn(2), 2) == [0, 0, Fraction(1, 2)]


def test_gaussian_closed_form():
    got = dh_closed_form(builtin_gaussian())
    assert got == LinFactoredRational(Polynomial.one(1), [LinearForm([1])])
    assert str(got) == "1 / (t0)"


def test_closed_form_refuses_compact_models():
    with pytest.raises(ValueError):
        dh_closed_form(builtin_s2(1))


def test_gaussian_is_not_polynomial():
    with pytest.raises(NonPolynomialResult):
        power_integral(builtin_gaussian(), 0)


def test_dh_volume_examples():
    assert dh_volume(builtin_s2(1)) == 2
    assert dh_volume(builtin_cpn(1)) == 1
    assert dh_volume(product(builtin_s2(1), builtin_s2(1))) == 4


def test_non_constant_volume_guard(monkeypatch):
    # homogeneous fixed-point data always gives a constant top entry; fake the
    # top integral to exercise the guard
    loc = importlib.import_module("eqloc.localize")
    monkeypatch.setattr(loc, "power_integral", lambda m, k: parse_polynomial("t0", 1))
    with pytest.raises(NonConstantVolume):
        loc.dh_volume(builtin_s2(1))


def test_euler_characteristic_examples():
    assert euler_characteristic(builtin_s2(1)) == 2
    assert euler_characteristic(builtin_cpn(3)) == 4
    assert euler_characteristic(product(builtin_s2(1), builtin_cpn(1))) == 4


def test_euler_summands_are_one_before_summation():
    m = builtin_cpn(3)
    res = localize(m, {p.name: euler_class_at(p) for p in m.components})
    assert all(c == 1 for _, c in res.contributions)


def test_components_require_explicit_classes(fixtures_dir):
    m = load_model((fixtures_dir / "cp2_line_component.json").read_bytes())
    with pytest.raises(ValueError):
        power_integral(m, 2)
    with pytest.raises(ValueError):
        euler_characteristic(m)
    with pytest.raises(ValueError, match="cover"):
        localize(m, {"L": Polynomial.zero(1)})


def test_unknown_component_in_integrand():
    m = builtin_s2(1)
    one = Polynomial.one(1)
    with pytest.raises(ValueError, match="unknown"):
        localize(m, {"N": one, "S": one, "X": one})


def test_subtorus_consistency_generic():
    m = subtorus_restrict(builtin_cpn(2), [[0], [1], [2]])
    assert power_integral(m, 2) == 1


# -- randomized invariants ------------------------------------------------------

BASE_MODELS = [
    builtin_s2(1),
    builtin_s2(Fraction(3, 2)),
    builtin_cpn(1),
    builtin_cpn(2),
    builtin_cpn(3),
    product(builtin_s2(1), builtin_s2(2)),
    product(builtin_s2(1), builtin_cpn(1)),
    product(builtin_cpn(1), builtin_s2(Fraction(-1, 2))),
]

models = st.sampled_from(BASE_MODELS)


@st.composite
def model_and_poly_coeffs(draw, count=3):
    """A model plus random H_T(pt) coefficients for a global class.

    The class is sum_k a_k (omega + mu)^k + sum_k b_k c_k(TM); both pieces are
    restrictions of global equivariant classes, so their localization is a polynomial.
    """
    m = draw(models)
    r = m.rank

    def coeff():
        terms = draw(
            st.dictionaries(
                st.lists(st.integers(0, 1), min_size=r, max_size=r).map(tuple), small_rationals, max_size=2
            )
        )
        return Polynomial(r, terms)

    a = [coeff() for _ in range(count)]
    b = [coeff() for _ in range(m.dimC + 1)]
    return m, a, b


def global_class(m, a, b):
    out = {}
    for p in m.components:
        mu = p.moment.to_polynomial()
        val = Polynomial.zero(m.rank)
        for k, ak in enumerate(a):
            val = val + ak * mu**k
        for k, bk in enumerate(b):
            val = val + bk * chern_restriction(k, p)
        out[p.name] = val
    return out


@st.composite
def two_classes(draw):
    m, a1, b1 = draw(model_and_poly_coeffs())
    r = m.rank
    a2 = [Polynomial(r, {(0,) * r: draw(small_rationals)}) for _ in range(3)]
    b2 = [Polynomial(r, {(0,) * r: draw(small_rationals)}) for _ in range(m.dimC + 1)]
    return m, global_class(m, a1, b1), global_class(m, a2, b2)


@given(two_classes())
def test_linearity(data):
    m, alpha, beta = data
    both = {name: alpha[name] + beta[name] for name in alpha}
    assert localize(m, both).value == localize(m, alpha).value + localize(m, beta).value


@given(models, st.integers(0, 6))
def test_degree_law(m, k):
    v = power_integral(m, k)
    if k < m.dimC:
        assert v.is_zero()
    else:
        assert v.is_zero() or (v.is_homogeneous() and v.degree == k - m.dimC)


@given(models, st.integers(0, 5), small_rationals.filter(bool))
def test_moment_scaling(m, k, c):
    assert power_integral(m.scale_moments(c), k) == power_integral(m, k).scale(c**k)


@given(models.flatmap(lambda m: st.tuples(st.just(m), st.permutations(range(m.rank)), st.integers(0, 5))))
def test_permutation_equivariance(data):
    m, perm, k = data
    assert power_integral(permute_variables(m, perm), k) == power_integral(m, k).permute(perm)


@given(model_and_poly_coeffs())
def test_contributions_sum_to_value(data):
    m, a, b = data
    res = localize(m, global_class(m, a, b))
    total = LinFactoredRational.zero(m.rank)
    for _, c in res.contributions:
        total = rat_add(total, c)
    assert total.is_polynomial()
    assert total.to_polynomial() == res.value


@given(st.lists(st.integers(-3, 3), min_size=3, max_size=3))
def test_subtorus_consistency_random_rank_one(col):
    a, b, c = col
    if a == b or b == c or a == c:
        return  # collapsing subtorus; covered by the component tests
    m = subtorus_restrict(builtin_cpn(2), [[a], [b], [c]])
    assert power_integral(m, 2) == 1
    assert euler_characteristic(m) == 3
