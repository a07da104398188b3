"""Torus actions described by their fixed-point data.

A :class:`TorusModel` is everything localization needs to know about a
Hamiltonian torus action on a compact symplectic manifold: the torus rank,
the complex dimension, and for every connected component of the fixed set
its moment value and the weights of the torus on the normal directions.

Sign conventions
----------------
At a fixed point the stored tangent weights are oriented so that the weight
along an edge points *from* the point towards the neighbour, matching the
moment difference. For CP^n the fixed point ``f_i`` (moment ``t_i``) carries
the weights ``t_i - t_j`` for ``j != i``; for S^2 the pole with moment
``+s*t0`` carries weight ``+t0``. With these orientations the power integral
``sum_f mu_f^n / e_f`` of CP^n equals +1 and the S^2 area is ``2*s``. The
reversed orientation multiplies every top-degree integral by ``(-1)^n``.
"""

from __future__ import annotations

import json
from collections.abc import Sequence
from dataclasses import dataclass, field, replace
from fractions import Fraction

from .errors import (
    ModelError,
    ModelParseError,
    UnsupportedComponentProduct,
    WeightCollapsesToZero,
)
from .exactalg import LinearForm, as_rational, parse_rational


@dataclass(frozen=True)
class FixedPoint:
    """An isolated fixed point: moment value and tangent weights."""

    name: str
    moment: LinearForm
    weights: tuple[LinearForm, ...]

    def __post_init__(self):
        object.__setattr__(self, "weights", tuple(self.weights))

    dimC = 0

    @property
    def rank(self) -> int:
        return self.moment.rank


@dataclass(frozen=True)
class FixedComponent:
    """A positive-dimensional fixed component ``F``.

    ``H^*(F)`` is modelled as ``Q[h] / h^(dimC+1)`` with ``integral(h^dimC) =
    generator_integral``. Each normal line bundle contributes
    ``(beta, d)`` with ``c1 = d*h`` and torus weight ``beta``.
    """

    name: str
    dimC: int
    moment: LinearForm
    normal_weights: tuple[tuple[LinearForm, int], ...]
    generator_integral: Fraction = Fraction(1)

    def __post_init__(self):
        object.__setattr__(
            self, "normal_weights", tuple((b, int(d)) for b, d in self.normal_weights)
        )
        object.__setattr__(self, "generator_integral", as_rational(self.generator_integral))

    @property
    def rank(self) -> int:
        return self.moment.rank

    @property
    def weights(self) -> tuple[LinearForm, ...]:
        return tuple(b for b, _ in self.normal_weights)

    def as_point(self) -> FixedPoint:
        if self.dimC:
            raise ValueError(f"component {self.name!r} has positive dimension")
        return FixedPoint(self.name, self.moment, self.weights)


Component = FixedPoint | FixedComponent


def _normal_count(c: Component) -> int:
    return len(c.weights)


@dataclass(frozen=True)
class TorusModel:
    rank: int
    dimC: int
    components: tuple[Component, ...]
    noncompact: bool = field(default=False)

    def __post_init__(self):
        comps = tuple(
            c.as_point() if isinstance(c, FixedComponent) and c.dimC == 0 else c
            for c in self.components
        )
        object.__setattr__(self, "components", comps)
        validate(self)

    @property
    def isolated(self) -> bool:
        return all(isinstance(c, FixedPoint) for c in self.components)

    @property
    def points(self) -> tuple[FixedPoint, ...]:
        return tuple(c for c in self.components if isinstance(c, FixedPoint))

    def component(self, name: str) -> Component:
        for c in self.components:
            if c.name == name:
                return c
        raise KeyError(name)

    def scale_moments(self, s) -> TorusModel:
        s = as_rational(s)
        return replace(self, components=tuple(replace(c, moment=c.moment * s) for c in self.components))


def validate(m: TorusModel) -> None:
    """Check every structural invariant; raise :class:`ModelError` on failure."""
    if not isinstance(m.rank, int) or m.rank < 1:
        raise ModelError(f"rank must be a positive integer, got {m.rank!r}")
    if not isinstance(m.dimC, int) or m.dimC < 0:
        raise ModelError(f"dimC must be a non-negative integer, got {m.dimC!r}")
    if not m.components:
        raise ModelError("model has no fixed components")
    seen = set()
    for c in m.components:
        if c.name in seen:
            raise ModelError("duplicate component name", c.name)
        seen.add(c.name)
        if c.moment.rank != m.rank:
            raise ModelError(f"moment has length {c.moment.rank}, expected {m.rank}", c.name)
        if c.dimC < 0:
            raise ModelError("negative dimension", c.name)
        if c.dimC + _normal_count(c) != m.dimC:
            raise ModelError(
                f"dimension mismatch: {c.dimC} + {_normal_count(c)} normal weights != dimC {m.dimC}",
                c.name,
            )
        for j, w in enumerate(c.weights):
            if w.rank != m.rank:
                raise ModelError(f"weight #{j} has length {w.rank}, expected {m.rank}", c.name)
            if w.is_zero():
                raise ModelError(f"weight #{j} is zero", c.name)
        if isinstance(c, FixedComponent) and not c.generator_integral:
            raise ModelError("generator_integral must be nonzero", c.name)


# ---------------------------------------------------------------------------
# Builtins


def builtin_s2(scale=1) -> TorusModel:
    """Rotation of S^2 about its axis; moments ``+scale*t0`` and ``-scale*t0``."""
    s = as_rational(scale)
    if not s:
        raise ValueError("scale must be nonzero")
    t = LinearForm([1])
    return TorusModel(
        1,
        1,
        (
            FixedPoint("N", t * s, (t,)),
            FixedPoint("S", t * -s, (-t,)),
        ),
    )


def builtin_cpn(n: int) -> TorusModel:
    """CP^n with the standard (n+1)-torus; moment ``t_i`` at ``f_i``."""
    if not isinstance(n, int) or n < 1:
        raise ValueError("n must be a positive integer")
    r = n + 1
    pts = []
    for i in range(r):
        ti = LinearForm.var(r, i)
        weights = tuple(ti - LinearForm.var(r, j) for j in range(r) if j != i)
        pts.append(FixedPoint(f"f{i}", ti, weights))
    return TorusModel(r, n, tuple(pts))


def builtin_gaussian() -> TorusModel:
    """C with U(1) rotating it: one fixed point, moment 0, weight t0. Noncompact."""
    t = LinearForm([1])
    return TorusModel(1, 1, (FixedPoint("0", LinearForm([0]), (t,)),), noncompact=True)


# ---------------------------------------------------------------------------
# Combinators


def _embed(form: LinearForm, offset: int, rank: int) -> LinearForm:
    c = [0] * rank
    c[offset : offset + form.rank] = form.coeffs
    return LinearForm(c)


def product(a: TorusModel, b: TorusModel) -> TorusModel:
    """Cartesian product; variables of ``b`` follow those of ``a``."""
    r = a.rank + b.rank
    comps = []
    for ca in a.components:
        for cb in b.components:
            if ca.dimC and cb.dimC:
                raise UnsupportedComponentProduct(ca.name, cb.name)
            name = f"{ca.name}*{cb.name}"
            moment = _embed(ca.moment, 0, r) + _embed(cb.moment, a.rank, r)
            if not ca.dimC and not cb.dimC:
                weights = tuple(_embed(w, 0, r) for w in ca.weights) + tuple(
                    _embed(w, a.rank, r) for w in cb.weights
                )
                comps.append(FixedPoint(name, moment, weights))
                continue
            if ca.dimC:
                comp, comp_off, pt, pt_off = ca, 0, cb, a.rank
            else:
                comp, comp_off, pt, pt_off = cb, a.rank, ca, 0
            normal = [(_embed(w, comp_off, r), d) for w, d in comp.normal_weights]
            normal += [(_embed(w, pt_off, r), 0) for w in pt.weights]
            # keep the a-factor's normal directions first
            if comp is cb:
                normal = normal[len(comp.normal_weights) :] + normal[: len(comp.normal_weights)]
            comps.append(
                FixedComponent(name, comp.dimC, moment, tuple(normal), comp.generator_integral)
            )
    return TorusModel(r, a.dimC + b.dimC, tuple(comps), a.noncompact or b.noncompact)


def subtorus_restrict(m: TorusModel, matrix: Sequence[Sequence[int]]) -> TorusModel:
    """Restrict to the subtorus ``t_i = sum_k matrix[i][k] * s_k``.

    ``matrix`` is integer with shape ``(m.rank, r_new)``. A weight that
    restricts to zero means the subtorus fixes more than the listed points;
    that is refused with :class:`WeightCollapsesToZero`.
    """
    matrix = [list(row) for row in matrix]
    if len(matrix) != m.rank:
        raise ValueError(f"matrix has {len(matrix)} rows, model rank is {m.rank}")
    width = len(matrix[0]) if matrix else 0
    if width < 1 or any(len(row) != width for row in matrix):
        raise ValueError("matrix must be rectangular with at least one column")
    for row in matrix:
        for x in row:
            if isinstance(x, bool) or not isinstance(x, int):
                raise ValueError(f"matrix entries must be integers, got {x!r}")
    comps = []
    for c in m.components:
        moment = c.moment.compose(matrix)
        if isinstance(c, FixedPoint):
            weights = []
            for j, w in enumerate(c.weights):
                w2 = w.compose(matrix)
                if w2.is_zero():
                    raise WeightCollapsesToZero(c.name, j)
                weights.append(w2)
            comps.append(FixedPoint(c.name, moment, tuple(weights)))
        else:
            normal = []
            for j, (w, d) in enumerate(c.normal_weights):
                w2 = w.compose(matrix)
                if w2.is_zero():
                    raise WeightCollapsesToZero(c.name, j)
                normal.append((w2, d))
            comps.append(replace(c, moment=moment, normal_weights=tuple(normal)))
    return TorusModel(width, m.dimC, tuple(comps), m.noncompact)


def permute_variables(m: TorusModel, perm: Sequence[int]) -> TorusModel:
    """Rename ``t_i`` to ``t_{perm[i]}`` throughout the model."""
    r = m.rank
    if sorted(perm) != list(range(r)):
        raise ValueError(f"not a permutation of range({r}): {perm}")
    matrix = [[1 if perm[i] == k else 0 for k in range(r)] for i in range(r)]
    # t_i = s_{perm[i]}: a form sum c_i t_i becomes sum c_i s_{perm[i]}
    return subtorus_restrict(m, matrix)


_BUILTIN_HELP = "s2 | cpn[:n] | gaussian | product:<spec>,<spec>[,...]"


def parse_builtin(spec: str, scale=1) -> TorusModel:
    """Build a model from a spec string such as ``cpn:2`` or ``product:s2,cpn:1``."""
    spec = spec.strip()
    if spec.startswith("product:"):
        parts = [p for p in spec[len("product:") :].split(",") if p]
        if len(parts) < 2:
            raise ValueError(f"product needs at least two factors: {spec!r}")
        models = [parse_builtin(p, scale) for p in parts]
        out = models[0]
        for nxt in models[1:]:
            out = product(out, nxt)
        return out
    name, _, arg = spec.partition(":")
    if name == "s2" and not arg:
        return builtin_s2(scale)
    if name == "gaussian" and not arg:
        return builtin_gaussian()
    if name == "cpn":
        try:
            n = int(arg) if arg else 1
        except ValueError:
            raise ValueError(f"bad CP^n dimension in {spec!r}") from None
        return builtin_cpn(n)
    raise ValueError(f"unknown builtin {spec!r}; expected {_BUILTIN_HELP}")


# ---------------------------------------------------------------------------
# File format


def _form_json(f: LinearForm) -> list[str]:
    return [str(c) for c in f.coeffs]


def model_to_dict(m: TorusModel) -> dict:
    comps = []
    for c in m.components:
        d = {"name": c.name, "dimC": c.dimC, "moment": _form_json(c.moment)}
        if isinstance(c, FixedPoint):
            d["weights"] = [_form_json(w) for w in c.weights]
        else:
            d["normal_weights"] = [
                {"beta": _form_json(b), "c1_multiple": k} for b, k in c.normal_weights
            ]
            d["generator_integral"] = str(c.generator_integral)
        comps.append(d)
    out = {"rank": m.rank, "dimC": m.dimC, "components": comps}
    if m.noncompact:
        out["noncompact"] = True
    return out


def render_model(m: TorusModel) -> str:
    return json.dumps(model_to_dict(m))


def _get(obj, key, where, kind, default=...):
    if not isinstance(obj, dict):
        raise ModelParseError("expected an object", where)
    if key not in obj:
        if default is ...:
            raise ModelParseError(f"missing field {key!r}", where)
        return default
    val = obj[key]
    if kind is int and (isinstance(val, bool) or not isinstance(val, int)):
        raise ModelParseError(f"expected an integer, got {val!r}", f"{where}.{key}")
    if kind is not int and not isinstance(val, kind):
        raise ModelParseError(f"expected {kind.__name__}, got {val!r}", f"{where}.{key}")
    return val


def _parse_form(arr, rank, where) -> LinearForm:
    if not isinstance(arr, list):
        raise ModelParseError("expected an array of rational strings", where)
    if len(arr) != rank:
        raise ModelParseError(f"expected {rank} entries, got {len(arr)}", where)
    coeffs = []
    for i, s in enumerate(arr):
        try:
            coeffs.append(parse_rational(s))
        except ValueError as e:
            raise ModelParseError(str(e), f"{where}[{i}]") from None
    return LinearForm(coeffs)


def model_from_dict(data) -> TorusModel:
    rank = _get(data, "rank", "$", int)
    dimC = _get(data, "dimC", "$", int)
    if rank < 1:
        raise ModelParseError("rank must be positive", "$.rank")
    noncompact = _get(data, "noncompact", "$", bool, False)
    raw = _get(data, "components", "$", list)
    comps = []
    for idx, item in enumerate(raw):
        where = f"$.components[{idx}]"
        name = _get(item, "name", where, str)
        cdim = _get(item, "dimC", where, int, 0)
        moment = _parse_form(_get(item, "moment", where, list), rank, f"{where}.moment")
        if cdim == 0 and "weights" in item:
            ws = _get(item, "weights", where, list)
            weights = tuple(
                _parse_form(w, rank, f"{where}.weights[{j}]") for j, w in enumerate(ws)
            )
            comps.append(FixedPoint(name, moment, weights))
            continue
        nws = _get(item, "normal_weights", where, list)
        normal = []
        for j, nw in enumerate(nws):
            w2 = f"{where}.normal_weights[{j}]"
            beta = _parse_form(_get(nw, "beta", w2, list), rank, f"{w2}.beta")
            normal.append((beta, _get(nw, "c1_multiple", w2, int)))
        gi = _get(item, "generator_integral", where, str, "1")
        try:
            gi = parse_rational(gi)
        except ValueError as e:
            raise ModelParseError(str(e), f"{where}.generator_integral") from None
        comps.append(FixedComponent(name, cdim, moment, tuple(normal), gi))
    return TorusModel(rank, dimC, tuple(comps), noncompact)


def load_model(text: bytes | str) -> TorusModel:
    """Parse and validate a model file.

    Raises :class:`ModelParseError` (with line or field path) for malformed
    input and :class:`ModelError` (naming the component) for invariant
    violations.
    """
    if isinstance(text, bytes):
        try:
            text = text.decode("utf-8")
        except UnicodeDecodeError as e:
            raise ModelParseError(f"invalid UTF-8: {e}") from None
    try:
        data = json.loads(text)
    except json.JSONDecodeError as e:
        raise ModelParseError(e.msg, f"line {e.lineno}, column {e.colno}") from None
    return model_from_dict(data)
