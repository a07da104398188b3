"""Exact arithmetic over Q[t0, ..., t_{r-1}].

Three value types live here:

* :class:`LinearForm` -- a homogeneous linear combination of the torus
  parameters with rational coefficients (weights and moment values).
* :class:`Polynomial` -- a sparse multivariate polynomial with rational
  coefficients, stored as ``{exponent tuple: Fraction}``.
* :class:`LinFactoredRational` -- a polynomial divided by a product of linear
  forms. Every denominator that localization produces is a product of
  weights, so cancellation only ever needs exact division by a linear form
  and no multivariate GCD.

All values are immutable once built. Rationals are :class:`fractions.Fraction`.
"""

from __future__ import annotations

import re
from collections.abc import Iterable, Mapping, Sequence
from fractions import Fraction
from types import MappingProxyType

from .errors import DenominatorVanishes, RankMismatch

Rational = Fraction
Monomial = tuple  # tuple[int, ...] of length rank

_RATIONAL_RE = re.compile(r"[+-]?\d+(?:/\d+)?")


def parse_rational(text: str) -> Fraction:
    """Parse ``[sign]digits[/digits]`` into a Fraction."""
    if not isinstance(text, str) or not _RATIONAL_RE.fullmatch(text):
        raise ValueError(f"not a rational literal: {text!r}")
    value = text.split("/")
    if len(value) == 2 and int(value[1]) == 0:
        raise ValueError(f"zero denominator in {text!r}")
    return Fraction(text)


def as_rational(value) -> Fraction:
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise TypeError("booleans are not rationals")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        return parse_rational(value)
    raise TypeError(f"cannot use {type(value).__name__} as an exact rational")


def _check_rank(a: int, b: int) -> None:
    if a != b:
        raise RankMismatch(a, b)


# ---------------------------------------------------------------------------
# Linear forms


class LinearForm:
    """``sum_i coeffs[i] * t_i`` with no constant term."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Iterable):
        object.__setattr__(self, "coeffs", tuple(as_rational(c) for c in coeffs))

    def __setattr__(self, name, value):
        raise AttributeError("LinearForm is immutable")

    @classmethod
    def zero(cls, rank: int) -> LinearForm:
        return cls((0,) * rank)

    @classmethod
    def var(cls, rank: int, index: int, coeff=1) -> LinearForm:
        c = [0] * rank
        c[index] = coeff
        return cls(c)

    @property
    def rank(self) -> int:
        return len(self.coeffs)

    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def lead_index(self) -> int:
        for i, c in enumerate(self.coeffs):
            if c:
                return i
        raise ValueError("zero linear form has no leading variable")

    def normalized(self) -> tuple[Fraction, LinearForm]:
        """Return ``(scale, monic)`` with ``self == scale * monic``.

        ``monic`` has first nonzero coefficient equal to 1.
        """
        s = self.coeffs[self.lead_index()]
        if s == 1:
            return s, self
        return s, LinearForm(c / s for c in self.coeffs)

    def compose(self, matrix: Sequence[Sequence[int]]) -> LinearForm:
        """Pull back along ``t_i = sum_k matrix[i][k] * s_k``."""
        if len(matrix) != self.rank:
            raise RankMismatch(self.rank, len(matrix))
        width = len(matrix[0]) if matrix else 0
        return LinearForm(
            sum((c * row[k] for c, row in zip(self.coeffs, matrix)), Fraction(0))
            for k in range(width)
        )

    def evaluate(self, point: Sequence) -> Fraction:
        _check_rank(self.rank, len(point))
        return sum((c * as_rational(x) for c, x in zip(self.coeffs, point)), Fraction(0))

    def to_polynomial(self) -> Polynomial:
        r = self.rank
        terms = {}
        for i, c in enumerate(self.coeffs):
            if c:
                e = [0] * r
                e[i] = 1
                terms[tuple(e)] = c
        return Polynomial._raw(r, terms)

    def __add__(self, other):
        if not isinstance(other, LinearForm):
            return NotImplemented
        _check_rank(self.rank, other.rank)
        return LinearForm(a + b for a, b in zip(self.coeffs, other.coeffs))

    def __sub__(self, other):
        if not isinstance(other, LinearForm):
            return NotImplemented
        _check_rank(self.rank, other.rank)
        return LinearForm(a - b for a, b in zip(self.coeffs, other.coeffs))

    def __neg__(self):
        return LinearForm(-c for c in self.coeffs)

    def __mul__(self, scalar):
        if isinstance(scalar, (LinearForm, Polynomial)):
            return NotImplemented
        s = as_rational(scalar)
        return LinearForm(s * c for c in self.coeffs)

    __rmul__ = __mul__

    def __eq__(self, other):
        return isinstance(other, LinearForm) and self.coeffs == other.coeffs

    def __hash__(self):
        return hash(("LinearForm", self.coeffs))

    def __lt__(self, other):
        return self.coeffs < other.coeffs

    def __repr__(self):
        return f"LinearForm({[str(c) for c in self.coeffs]})"

    def __str__(self):
        return str(self.to_polynomial())


# ---------------------------------------------------------------------------
# Polynomials


def _format_terms(items, zero="0") -> str:
    parts = []
    for e, c in items:
        mono = "*".join(
            f"t{i}" if k == 1 else f"t{i}^{k}" for i, k in enumerate(e) if k
        )
        mag = abs(c)
        if not mono:
            body = str(mag)
        elif mag == 1:
            body = mono
        else:
            body = f"{mag}*{mono}"
        if not parts:
            parts.append(f"-{body}" if c < 0 else body)
        else:
            parts.append(f" - {body}" if c < 0 else f" + {body}")
    return "".join(parts) if parts else zero


class Polynomial:
    """Sparse polynomial in ``t0..t{rank-1}`` over Q.

    ``terms`` maps exponent tuples to nonzero Fractions. Equality ignores term
    order; :meth:`sorted_terms` and ``str`` use graded-lex, ``t0 > t1 > ...``.
    """

    __slots__ = ("rank", "_terms", "_hash")

    def __init__(self, rank: int, terms: Mapping | None = None):
        if rank < 0:
            raise ValueError("rank must be non-negative")
        clean = {}
        for e, c in (terms or {}).items():
            e = tuple(int(k) for k in e)
            if len(e) != rank:
                raise RankMismatch(rank, len(e))
            if any(k < 0 for k in e):
                raise ValueError(f"negative exponent in {e}")
            c = as_rational(c)
            if c:
                c = clean.get(e, 0) + c
                if c:
                    clean[e] = c
                else:
                    clean.pop(e, None)
        object.__setattr__(self, "rank", rank)
        object.__setattr__(self, "_terms", clean)
        object.__setattr__(self, "_hash", None)

    @classmethod
    def _raw(cls, rank: int, terms: dict) -> Polynomial:
        # terms must already be canonical: right length, no zero coefficients
        p = object.__new__(cls)
        object.__setattr__(p, "rank", rank)
        object.__setattr__(p, "_terms", terms)
        object.__setattr__(p, "_hash", None)
        return p

    def __setattr__(self, name, value):
        raise AttributeError("Polynomial is immutable")

    @classmethod
    def zero(cls, rank: int) -> Polynomial:
        return cls._raw(rank, {})

    @classmethod
    def constant(cls, rank: int, value) -> Polynomial:
        value = as_rational(value)
        return cls._raw(rank, {(0,) * rank: value} if value else {})

    @classmethod
    def one(cls, rank: int) -> Polynomial:
        return cls.constant(rank, 1)

    @classmethod
    def var(cls, rank: int, index: int) -> Polynomial:
        e = [0] * rank
        e[index] = 1
        return cls._raw(rank, {tuple(e): Fraction(1)})

    @property
    def terms(self) -> Mapping:
        return MappingProxyType(self._terms)

    def __len__(self):
        return len(self._terms)

    def __bool__(self):
        return bool(self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    @property
    def degree(self) -> int:
        """Total degree; -1 for the zero polynomial."""
        return max((sum(e) for e in self._terms), default=-1)

    def is_constant(self) -> bool:
        return all(not any(e) for e in self._terms)

    def constant_value(self) -> Fraction:
        if not self.is_constant():
            raise ValueError(f"not a constant: {self}")
        return self._terms.get((0,) * self.rank, Fraction(0))

    def is_homogeneous(self) -> bool:
        return len({sum(e) for e in self._terms}) <= 1

    def sorted_terms(self) -> list:
        return sorted(self._terms.items(), key=lambda t: (sum(t[0]), t[0]), reverse=True)

    def evaluate(self, point: Sequence) -> Fraction:
        _check_rank(self.rank, len(point))
        pt = [as_rational(x) for x in point]
        total = Fraction(0)
        for e, c in self._terms.items():
            v = c
            for x, k in zip(pt, e):
                if k:
                    v *= x**k
            total += v
        return total

    def scale(self, s) -> Polynomial:
        s = as_rational(s)
        if not s:
            return Polynomial.zero(self.rank)
        return Polynomial._raw(self.rank, {e: c * s for e, c in self._terms.items()})

    def mul_linear(self, form: LinearForm) -> Polynomial:
        _check_rank(self.rank, form.rank)
        nz = [(i, c) for i, c in enumerate(form.coeffs) if c]
        out: dict = {}
        for e, c in self._terms.items():
            for i, fc in nz:
                k = list(e)
                k[i] += 1
                k = tuple(k)
                out[k] = out.get(k, 0) + c * fc
        return Polynomial._raw(self.rank, {k: v for k, v in out.items() if v})

    def permute(self, perm: Sequence[int]) -> Polynomial:
        """Rename variable ``t_i`` to ``t_{perm[i]}``."""
        if sorted(perm) != list(range(self.rank)):
            raise ValueError(f"not a permutation of range({self.rank}): {perm}")
        out = {}
        for e, c in self._terms.items():
            k = [0] * self.rank
            for i, x in enumerate(e):
                k[perm[i]] = x
            out[tuple(k)] = c
        return Polynomial._raw(self.rank, out)

    def compose(self, matrix: Sequence[Sequence[int]]) -> Polynomial:
        """Substitute ``t_i = sum_k matrix[i][k] * s_k``."""
        _check_rank(self.rank, len(matrix))
        width = len(matrix[0]) if matrix else 0
        images = [LinearForm(row).to_polynomial() for row in matrix]
        if not images:
            return Polynomial.constant(width, self.constant_value())
        out = Polynomial.zero(width)
        for e, c in self._terms.items():
            term = Polynomial.constant(width, c)
            for img, k in zip(images, e):
                if k:
                    term = term * img**k
            out = out + term
        return out

    def _coerce(self, other) -> Polynomial | None:
        if isinstance(other, Polynomial):
            _check_rank(self.rank, other.rank)
            return other
        if isinstance(other, LinearForm):
            _check_rank(self.rank, other.rank)
            return other.to_polynomial()
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            return Polynomial.constant(self.rank, other)
        return None

    def __add__(self, other):
        o = self._coerce(other)
        return NotImplemented if o is None else poly_add(self, o)

    __radd__ = __add__

    def __neg__(self):
        return Polynomial._raw(self.rank, {e: -c for e, c in self._terms.items()})

    def __sub__(self, other):
        o = self._coerce(other)
        return NotImplemented if o is None else poly_add(self, -o)

    def __rsub__(self, other):
        o = self._coerce(other)
        return NotImplemented if o is None else poly_add(o, -self)

    def __mul__(self, other):
        o = self._coerce(other)
        return NotImplemented if o is None else poly_mul(self, o)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if not isinstance(k, int) or k < 0:
            raise ValueError("exponent must be a non-negative integer")
        result = Polynomial.one(self.rank)
        base = self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    def __eq__(self, other):
        if isinstance(other, Polynomial):
            return self.rank == other.rank and self._terms == other._terms
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            return self.is_constant() and self.constant_value() == other
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            object.__setattr__(self, "_hash", hash((self.rank, frozenset(self._terms.items()))))
        return self._hash

    def __repr__(self):
        return f"Polynomial({self.rank}, {self})"

    def __str__(self):
        return _format_terms(self.sorted_terms())


def poly_add(a: Polynomial, b: Polynomial) -> Polynomial:
    _check_rank(a.rank, b.rank)
    if len(a._terms) < len(b._terms):
        a, b = b, a
    out = dict(a._terms)
    for e, c in b._terms.items():
        v = out.get(e)
        if v is None:
            out[e] = c
        else:
            v += c
            if v:
                out[e] = v
            else:
                del out[e]
    return Polynomial._raw(a.rank, out)


def poly_mul(a: Polynomial, b: Polynomial) -> Polynomial:
    _check_rank(a.rank, b.rank)
    if not a._terms or not b._terms:
        return Polynomial.zero(a.rank)
    if len(a._terms) < len(b._terms):
        a, b = b, a
    out: dict = {}
    for eb, cb in b._terms.items():
        for ea, ca in a._terms.items():
            k = tuple([x + y for x, y in zip(ea, eb)])
            v = out.get(k)
            out[k] = ca * cb if v is None else v + ca * cb
    return Polynomial._raw(a.rank, {k: v for k, v in out.items() if v})


def poly_divide_linear(p: Polynomial, f: LinearForm) -> Polynomial | None:
    """Exact quotient ``p / f``, or ``None`` when ``f`` does not divide ``p``.

    Division is synthetic in the leading variable ``t_a`` of ``f``: terms are
    bucketed by their ``t_a`` degree and each bucket only feeds the one below,
    so a single top-down pass suffices.
    """
    _check_rank(p.rank, f.rank)
    if f.is_zero():
        raise ZeroDivisionError("division by the zero linear form")
    lead, monic = f.normalized()
    a = monic.lead_index()
    rest = [(i, c) for i, c in enumerate(monic.coeffs) if c and i != a]
    buckets: dict[int, dict] = {}
    for e, c in p._terms.items():
        buckets.setdefault(e[a], {})[e] = c
    q = {}
    for d in range(max(buckets, default=0), 0, -1):
        cur = buckets.get(d)
        if not cur:
            continue
        low = buckets.setdefault(d - 1, {})
        for e, c in cur.items():
            if not c:
                continue
            qe = list(e)
            qe[a] -= 1
            qe = tuple(qe)
            q[qe] = c
            for i, fc in rest:
                k = list(qe)
                k[i] += 1
                k = tuple(k)
                low[k] = low.get(k, 0) - c * fc
    if any(buckets.get(0, {}).values()):
        return None
    if lead != 1:
        q = {e: c / lead for e, c in q.items()}
    return Polynomial._raw(p.rank, q)


# ---------------------------------------------------------------------------
# Rational functions with linear-form denominators


def _cancel(num: Polynomial, den: dict) -> tuple[Polynomial, dict]:
    if num.is_zero():
        return num, {}
    for f in list(den):
        m = den[f]
        while m:
            q = poly_divide_linear(num, f)
            if q is None:
                break
            num = q
            m -= 1
        if m:
            den[f] = m
        else:
            del den[f]
    return num, den


class LinFactoredRational:
    """``numerator / prod_f f**m`` with every ``f`` a monic linear form.

    Construction normalizes each factor (first nonzero coefficient 1, scale
    moved to the numerator), merges repeats and cancels every factor that
    divides the numerator, so the representation is canonical and ``==`` is
    equality of rational functions.
    """

    __slots__ = ("numerator", "denominator", "_hash")

    def __init__(self, numerator: Polynomial, denominator: Iterable = ()):
        num = numerator
        den: dict = {}
        for item in denominator:
            f, m = (item, 1) if isinstance(item, LinearForm) else item
            _check_rank(num.rank, f.rank)
            if m < 0:
                raise ValueError("denominator multiplicity must be positive")
            if not m:
                continue
            if f.is_zero():
                raise ZeroDivisionError("zero linear form in denominator")
            s, monic = f.normalized()
            if s != 1:
                num = num.scale(Fraction(1) / s**m)
            den[monic] = den.get(monic, 0) + m
        num, den = _cancel(num, den)
        self._set(num, den)

    def _set(self, num, den):
        object.__setattr__(self, "numerator", num)
        object.__setattr__(self, "denominator", tuple(sorted(den.items())))
        object.__setattr__(self, "_hash", None)

    @classmethod
    def _canonical(cls, num: Polynomial, den: dict) -> LinFactoredRational:
        # den keys already monic
        num, den = _cancel(num, den)
        r = object.__new__(cls)
        r._set(num, den)
        return r

    def __setattr__(self, name, value):
        raise AttributeError("LinFactoredRational is immutable")

    @classmethod
    def from_polynomial(cls, p: Polynomial) -> LinFactoredRational:
        return cls._canonical(p, {})

    @classmethod
    def zero(cls, rank: int) -> LinFactoredRational:
        return cls.from_polynomial(Polynomial.zero(rank))

    @classmethod
    def one(cls, rank: int) -> LinFactoredRational:
        return cls.from_polynomial(Polynomial.one(rank))

    @property
    def rank(self) -> int:
        return self.numerator.rank

    def is_polynomial(self) -> bool:
        return not self.denominator

    def to_polynomial(self) -> Polynomial:
        if self.denominator:
            raise ValueError(f"not a polynomial: {self}")
        return self.numerator

    def is_zero(self) -> bool:
        return self.numerator.is_zero()

    def denominator_degree(self) -> int:
        return sum(m for _, m in self.denominator)

    def denominator_polynomial(self) -> Polynomial:
        d = Polynomial.one(self.rank)
        for f, m in self.denominator:
            for _ in range(m):
                d = d.mul_linear(f)
        return d

    def factors(self) -> list[LinearForm]:
        return [f for f, m in self.denominator for _ in range(m)]

    def evaluate(self, point: Sequence) -> Fraction:
        return rat_eval(self, point)

    def _coerce(self, other):
        if isinstance(other, LinFactoredRational):
            _check_rank(self.rank, other.rank)
            return other
        if isinstance(other, Polynomial):
            _check_rank(self.rank, other.rank)
            return LinFactoredRational.from_polynomial(other)
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            return LinFactoredRational.from_polynomial(Polynomial.constant(self.rank, other))
        return None

    def __add__(self, other):
        o = self._coerce(other)
        return NotImplemented if o is None else rat_add(self, o)

    __radd__ = __add__

    def __neg__(self):
        r = object.__new__(LinFactoredRational)
        r._set(-self.numerator, dict(self.denominator))
        return r

    def __sub__(self, other):
        o = self._coerce(other)
        return NotImplemented if o is None else rat_add(self, -o)

    def __rsub__(self, other):
        o = self._coerce(other)
        return NotImplemented if o is None else rat_add(o, -self)

    def __mul__(self, other):
        o = self._coerce(other)
        return NotImplemented if o is None else rat_mul(self, o)

    __rmul__ = __mul__

    def __eq__(self, other):
        o = self._coerce(other) if not isinstance(other, LinFactoredRational) else other
        if o is None:
            return NotImplemented
        return (
            self.rank == o.rank
            and self.numerator == o.numerator
            and self.denominator == o.denominator
        )

    def __hash__(self):
        if self._hash is None:
            object.__setattr__(self, "_hash", hash((self.numerator, self.denominator)))
        return self._hash

    def denominator_str(self) -> str:
        if not self.denominator:
            return "1"
        return "*".join(f"({f})" if m == 1 else f"({f})^{m}" for f, m in self.denominator)

    def __repr__(self):
        return f"LinFactoredRational({self})"

    def __str__(self):
        if not self.denominator:
            return str(self.numerator)
        num = str(self.numerator)
        if len(self.numerator) > 1:
            num = f"({num})"
        return f"{num} / {self.denominator_str()}"


def rat_add(a: LinFactoredRational, b: LinFactoredRational) -> LinFactoredRational:
    """Sum over the common denominator (per-factor max multiplicity), then cancel."""
    _check_rank(a.rank, b.rank)
    if a.is_zero():
        return b
    if b.is_zero():
        return a
    da, db = dict(a.denominator), dict(b.denominator)
    common = dict(da)
    for f, m in db.items():
        if m > common.get(f, 0):
            common[f] = m
    na, nb = a.numerator, b.numerator
    for f, m in common.items():
        for _ in range(m - da.get(f, 0)):
            na = na.mul_linear(f)
        for _ in range(m - db.get(f, 0)):
            nb = nb.mul_linear(f)
    return LinFactoredRational._canonical(poly_add(na, nb), common)


def rat_mul(a: LinFactoredRational, b: LinFactoredRational) -> LinFactoredRational:
    _check_rank(a.rank, b.rank)
    den = dict(a.denominator)
    for f, m in b.denominator:
        den[f] = den.get(f, 0) + m
    return LinFactoredRational._canonical(poly_mul(a.numerator, b.numerator), den)


def rat_eval(a: LinFactoredRational, point: Sequence) -> Fraction:
    _check_rank(a.rank, len(point))
    value = a.numerator.evaluate(point)
    for f, m in a.denominator:
        v = f.evaluate(point)
        if not v:
            raise DenominatorVanishes(f, point)
        value /= v**m
    return value


def rat_sum(items: Iterable[LinFactoredRational], rank: int) -> LinFactoredRational:
    total = LinFactoredRational.zero(rank)
    for x in items:
        total = rat_add(total, x)
    return total


# ---------------------------------------------------------------------------
# Parsing

_TOKEN_RE = re.compile(r"\s*(?:(\d+)|t(\d+)|([-+*/^()]))")


def parse_polynomial(text: str, rank: int) -> Polynomial:
    """Parse a polynomial expression in ``t0..t{rank-1}``.

    Accepts the canonical rendering (``"t0^2 - 2/3*t0*t1 + 1"``) and, more
    generally, sums, products, parentheses, integer powers and division by
    rational constants.
    """
    tokens = []
    pos = 0
    text = text.strip()
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if not m or m.end() == pos:
            raise ValueError(f"unexpected character at offset {pos} in {text!r}")
        num, var, op = m.groups()
        if num is not None:
            tokens.append(("num", int(num)))
        elif var is not None:
            i = int(var)
            if i >= rank:
                raise ValueError(f"variable t{i} out of range for rank {rank}")
            tokens.append(("var", i))
        else:
            tokens.append(("op", op))
        pos = m.end()
    if not tokens:
        raise ValueError("empty polynomial expression")
    tokens.append(("end", None))
    idx = 0

    def peek():
        return tokens[idx]

    def take():
        nonlocal idx
        tok = tokens[idx]
        idx += 1
        return tok

    def expr():
        value = term()
        while peek() in (("op", "+"), ("op", "-")):
            op = take()[1]
            rhs = term()
            value = value + rhs if op == "+" else value - rhs
        return value

    def term():
        value = unary()
        while peek() in (("op", "*"), ("op", "/")):
            op = take()[1]
            rhs = unary()
            if op == "*":
                value = value * rhs
            else:
                if not rhs.is_constant() or rhs.is_zero():
                    raise ValueError("division only by nonzero rational constants")
                value = value.scale(1 / rhs.constant_value())
        return value

    def unary():
        if peek() == ("op", "-"):
            take()
            return -unary()
        if peek() == ("op", "+"):
            take()
            return unary()
        return power()

    def power():
        base = atom()
        if peek() == ("op", "^"):
            take()
            kind, k = take()
            if kind != "num":
                raise ValueError("exponent must be a non-negative integer literal")
            return base**k
        return base

    def atom():
        kind, val = take()
        if kind == "num":
            return Polynomial.constant(rank, val)
        if kind == "var":
            return Polynomial.var(rank, val)
        if (kind, val) == ("op", "("):
            inner = expr()
            if take() != ("op", ")"):
                raise ValueError("unbalanced parentheses")
            return inner
        raise ValueError(f"unexpected token {val!r}")

    result = expr()
    if peek()[0] != "end":
        raise ValueError(f"trailing input in {text!r}")
    return result
