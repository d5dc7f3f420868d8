"""Sparse multivariate integer polynomials and exact helpers on them.

Everything here is exact: integer coefficients throughout, rational
arithmetic only inside the univariate Wronskian helper.  The GCD runs a
recursive subresultant polynomial remainder sequence, so coprimality
tests never touch floating point.
"""

from __future__ import annotations

import math
from fractions import Fraction
from types import MappingProxyType
from typing import Iterable, Mapping, Sequence

from .errors import ContractViolation
from .scalars import mplog

ExponentVector = tuple[int, ...]


def _as_exponent(nvars: int, e) -> ExponentVector:
    e = tuple(int(v) for v in e)
    if len(e) != nvars:
        raise ContractViolation(f"exponent {e} has arity {len(e)}, expected {nvars}")
    if any(v < 0 for v in e):
        raise ContractViolation(f"exponent {e} has a negative entry")
    return e


def eval_monomial(point: Sequence[int], e: ExponentVector) -> int:
    """x^e at an integer point, with 0^0 = 1."""
    out = 1
    for x, k in zip(point, e):
        if k:
            out *= x ** k
    return out


class IntegerPolynomial:
    """Immutable sparse polynomial over the integers.

    Terms are stored as a map from exponent vectors to nonzero integer
    coefficients.  ``nvars`` fixes the arity even when some variables do
    not occur.
    """

    __slots__ = ("nvars", "_terms", "_hash")

    def __init__(self, nvars: int, terms: Mapping[ExponentVector, int] | Iterable):
        nvars = int(nvars)
        if nvars < 1:
            raise ContractViolation("nvars must be at least 1")
        items = terms.items() if isinstance(terms, Mapping) else terms
        acc: dict[ExponentVector, int] = {}
        for e, c in items:
            c = int(c)
            if c == 0:
                continue
            e = _as_exponent(nvars, e)
            c += acc.get(e, 0)
            if c:
                acc[e] = c
            else:
                acc.pop(e, None)
        object.__setattr__(self, "nvars", nvars)
        object.__setattr__(self, "_terms", acc)
        object.__setattr__(self, "_hash", None)

    def __setattr__(self, name, value):  # immutability guard
        raise AttributeError("IntegerPolynomial is immutable")

    # -- constructors -------------------------------------------------

    @classmethod
    def zero(cls, nvars: int) -> "IntegerPolynomial":
        return cls(nvars, {})

    @classmethod
    def constant(cls, nvars: int, c: int) -> "IntegerPolynomial":
        return cls(nvars, {(0,) * nvars: int(c)})

    @classmethod
    def monomial(cls, nvars: int, e, c: int = 1) -> "IntegerPolynomial":
        return cls(nvars, {tuple(e): int(c)})

    @classmethod
    def variable(cls, nvars: int, i: int) -> "IntegerPolynomial":
        e = [0] * nvars
        e[i] = 1
        return cls(nvars, {tuple(e): 1})

    # -- basic queries -------------------------------------------------

    @property
    def terms(self) -> Mapping[ExponentVector, int]:
        return MappingProxyType(self._terms)

    @property
    def is_zero(self) -> bool:
        return not self._terms

    @property
    def is_constant(self) -> bool:
        return all(not any(e) for e in self._terms)

    def constant_term(self) -> int:
        return self._terms.get((0,) * self.nvars, 0)

    def total_degree(self) -> int:
        """Total degree; -1 for the zero polynomial."""
        if not self._terms:
            return -1
        return max(sum(e) for e in self._terms)

    def degree_in(self, i: int) -> int:
        if not self._terms:
            return -1
        return max(e[i] for e in self._terms)

    def variables_used(self) -> frozenset[int]:
        used = set()
        for e in self._terms:
            for i, v in enumerate(e):
                if v:
                    used.add(i)
        return frozenset(used)

    def depends_on(self, i: int) -> bool:
        return any(e[i] for e in self._terms)

    def content(self) -> int:
        """gcd of the coefficients; 0 for the zero polynomial."""
        return math.gcd(*self._terms.values()) if self._terms else 0

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, IntegerPolynomial)
            and self.nvars == other.nvars
            and self._terms == other._terms
        )

    def __hash__(self) -> int:
        h = self._hash
        if h is None:
            h = hash((self.nvars, frozenset(self._terms.items())))
            object.__setattr__(self, "_hash", h)
        return h

    def __bool__(self) -> bool:
        return bool(self._terms)

    def __repr__(self) -> str:
        if not self._terms:
            return "0"
        parts = []
        for e in sorted(self._terms, reverse=True):
            c = self._terms[e]
            factors = [f"x{i + 1}" + (f"^{k}" if k > 1 else "") for i, k in enumerate(e) if k]
            body = "*".join(factors)
            if body:
                if c == 1:
                    parts.append(body)
                elif c == -1:
                    parts.append(f"-{body}")
                else:
                    parts.append(f"{c}*{body}")
            else:
                parts.append(str(c))
        out = " + ".join(parts)
        return out.replace("+ -", "- ")

    # -- ring operations ----------------------------------------------

    def _require_same_arity(self, other: "IntegerPolynomial") -> None:
        if self.nvars != other.nvars:
            raise ContractViolation("polynomials have different arities")

    def __add__(self, other):
        if isinstance(other, int):
            other = IntegerPolynomial.constant(self.nvars, other)
        self._require_same_arity(other)
        acc = dict(self._terms)
        for e, c in other._terms.items():
            s = acc.get(e, 0) + c
            if s:
                acc[e] = s
            else:
                acc.pop(e, None)
        return IntegerPolynomial(self.nvars, acc)

    __radd__ = __add__

    def __neg__(self):
        return IntegerPolynomial(self.nvars, {e: -c for e, c in self._terms.items()})

    def __sub__(self, other):
        if isinstance(other, int):
            other = IntegerPolynomial.constant(self.nvars, other)
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, int):
            if other == 0:
                return IntegerPolynomial.zero(self.nvars)
            return IntegerPolynomial(
                self.nvars, {e: c * other for e, c in self._terms.items()}
            )
        self._require_same_arity(other)
        acc: dict[ExponentVector, int] = {}
        for e1, c1 in self._terms.items():
            for e2, c2 in other._terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                s = acc.get(e, 0) + c1 * c2
                if s:
                    acc[e] = s
                else:
                    acc.pop(e, None)
        return IntegerPolynomial(self.nvars, acc)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if k < 0:
            raise ContractViolation("negative power of a polynomial")
        out = IntegerPolynomial.constant(self.nvars, 1)
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    # -- calculus and evaluation ----------------------------------------

    def evaluate(self, point: Sequence[int]) -> int:
        if len(point) != self.nvars:
            raise ContractViolation(
                f"point has arity {len(point)}, polynomial has {self.nvars}"
            )
        point = tuple(int(x) for x in point)
        return sum(c * eval_monomial(point, e) for e, c in self._terms.items())

    def partial_derivative(self, i: int) -> "IntegerPolynomial":
        if not 0 <= i < self.nvars:
            raise ContractViolation(f"variable index {i} out of range")
        acc = {}
        for e, c in self._terms.items():
            if e[i]:
                d = list(e)
                d[i] -= 1
                acc[tuple(d)] = c * e[i]
        return IntegerPolynomial(self.nvars, acc)

    def coefficients_in(self, i: int) -> dict[int, "IntegerPolynomial"]:
        """Split into coefficients of powers of variable ``i``.

        Returns {j: c_j} with self = sum c_j * x_i^j, each c_j in the
        same arity but free of x_i.
        """
        buckets: dict[int, dict] = {}
        for e, c in self._terms.items():
            j = e[i]
            d = list(e)
            d[i] = 0
            buckets.setdefault(j, {})[tuple(d)] = c
        return {j: IntegerPolynomial(self.nvars, t) for j, t in sorted(buckets.items())}

    def drop_variable(self, i: int) -> "IntegerPolynomial":
        if self.depends_on(i):
            raise ContractViolation(f"polynomial depends on variable {i}")
        acc = {e[:i] + e[i + 1 :]: c for e, c in self._terms.items()}
        return IntegerPolynomial(self.nvars - 1, acc)

    def insert_variable(self, i: int) -> "IntegerPolynomial":
        """Embed into one more variable, the new one unused at index ``i``."""
        acc = {e[:i] + (0,) + e[i:]: c for e, c in self._terms.items()}
        return IntegerPolynomial(self.nvars + 1, acc)

    def primitive_part(self) -> "IntegerPolynomial":
        c = self.content()
        if c in (0, 1):
            return self
        return IntegerPolynomial(self.nvars, {e: v // c for e, v in self._terms.items()})


# -- module level operation wrappers -------------------------------------


def evaluate(f: IntegerPolynomial, point: Sequence[int]) -> int:
    """Exact integer value of f at an integer point."""
    return f.evaluate(point)


def partial_derivative(f: IntegerPolynomial, i: int) -> IntegerPolynomial:
    return f.partial_derivative(i)


def top_degree_part(f: IntegerPolynomial) -> IntegerPolynomial:
    """The homogeneous part of highest total degree."""
    if f.is_zero:
        raise ContractViolation("top-degree part of the zero polynomial")
    d = f.total_degree()
    return IntegerPolynomial(f.nvars, {e: c for e, c in f.terms.items() if sum(e) == d})


# -- monomial orders ------------------------------------------------------


class MonomialOrder:
    """Strict total order on exponent vectors.

    Two kinds: plain lexicographic, and height-weighted where the weight
    of e is sum(e_i * log(height_i)) with lexicographic tie-breaking.
    Weight comparisons are exact when every height is an integer: the
    weights of a and b compare exactly as the integers prod(height_i^a_i)
    and prod(height_i^b_i) do.
    """

    __slots__ = ("kind", "heights", "_logs")

    def __init__(self, kind: str, heights: tuple | None = None):
        if kind not in ("lex", "weighted"):
            raise ContractViolation(f"unknown order kind {kind!r}")
        if kind == "weighted":
            if not heights or any(h <= 1 for h in heights):
                raise ContractViolation("weighted order needs heights > 1")
            heights = tuple(heights)
        object.__setattr__(self, "kind", kind)
        object.__setattr__(self, "heights", heights)
        object.__setattr__(self, "_logs", None)

    def __setattr__(self, name, value):
        raise AttributeError("MonomialOrder is immutable")

    @classmethod
    def lex(cls) -> "MonomialOrder":
        return cls("lex")

    @classmethod
    def weighted(cls, heights) -> "MonomialOrder":
        return cls("weighted", tuple(heights))

    @property
    def exact(self) -> bool:
        return self.kind == "lex" or all(
            isinstance(h, int) or (isinstance(h, float) and h.is_integer())
            for h in self.heights
        )

    def _weight_key(self, e: ExponentVector):
        if self.exact:
            w = 1
            for h, k in zip(self.heights, e):
                w *= int(h) ** k
            return w
        logs = self._logs
        if logs is None:
            logs = tuple(mplog(h) for h in self.heights)
            object.__setattr__(self, "_logs", logs)
        return sum(k * lg for k, lg in zip(e, logs))

    def sort_key(self, e: ExponentVector):
        """Key realizing the order for sorted(); ties broken by lex."""
        if self.kind == "lex":
            return e
        return (self._weight_key(e), e)

    def compare_exponents(self, a: ExponentVector, b: ExponentVector) -> int:
        if len(a) != len(b):
            raise ContractViolation("exponent arities differ")
        ka, kb = self.sort_key(tuple(a)), self.sort_key(tuple(b))
        if ka < kb:
            return -1
        return 1 if ka > kb else 0


def compare(a, b, order: MonomialOrder) -> int:
    """-1, 0, or 1 as exponent vector a sits below, at, or above b."""
    return order.compare_exponents(tuple(a), tuple(b))


def max_exponent(f: IntegerPolynomial, order: MonomialOrder) -> ExponentVector:
    """Largest exponent vector of f under the given order.

    The zero polynomial has no terms and is rejected.
    """
    if f.is_zero:
        raise ContractViolation("max_exponent of the zero polynomial")
    return max(f.terms, key=order.sort_key)


# -- gcd and coprimality ---------------------------------------------------


def _lex_leading(f: IntegerPolynomial) -> tuple[ExponentVector, int]:
    e = max(f.terms)
    return e, f.terms[e]


def exact_divide(f: IntegerPolynomial, g: IntegerPolynomial) -> IntegerPolynomial | None:
    """Quotient f/g when g divides f exactly over Z, else None."""
    f._require_same_arity(g)
    if g.is_zero:
        raise ContractViolation("division by the zero polynomial")
    quot: dict[ExponentVector, int] = {}
    rem = f
    ge, gc = _lex_leading(g)
    while not rem.is_zero:
        re, rc = _lex_leading(rem)
        de = tuple(a - b for a, b in zip(re, ge))
        if any(v < 0 for v in de) or rc % gc:
            return None
        qc = rc // gc
        quot[de] = quot.get(de, 0) + qc
        rem = rem - IntegerPolynomial.monomial(f.nvars, de, qc) * g
    return IntegerPolynomial(f.nvars, quot)


def _pseudo_remainder(a: IntegerPolynomial, b: IntegerPolynomial, v: int) -> IntegerPolynomial:
    """prem(a, b) in variable v: lc(b)^(da-db+1) * a reduced mod b."""
    da, db = a.degree_in(v), b.degree_in(v)
    if db < 0:
        raise ContractViolation("pseudo-remainder by zero")
    lead_b = b.coefficients_in(v)[db]
    r = a
    steps = 0
    while True:
        dr = r.degree_in(v)
        if r.is_zero or dr < db:
            break
        lead_r = r.coefficients_in(v)[dr]
        shift = IntegerPolynomial.monomial(
            a.nvars, tuple(dr - db if i == v else 0 for i in range(a.nvars))
        )
        r = r * lead_b - b * (lead_r * shift)
        steps += 1
    # cancellation can finish early; pad to the full lc(b)^(da-db+1) scale
    pad = da - db + 1 - steps
    if pad > 0 and not r.is_zero:
        r = r * lead_b ** pad
    return r


def _content_wrt(f: IntegerPolynomial, v: int) -> IntegerPolynomial:
    coeffs = list(f.coefficients_in(v).values())
    g = coeffs[0]
    for c in coeffs[1:]:
        g = polynomial_gcd(g, c)
        if g.is_constant and abs(g.constant_term()) == 1:
            break
    return _normalize_sign(g)


def _normalize_sign(f: IntegerPolynomial) -> IntegerPolynomial:
    if f.is_zero:
        return f
    _, c = _lex_leading(f)
    return -f if c < 0 else f


def polynomial_gcd(f: IntegerPolynomial, g: IntegerPolynomial) -> IntegerPolynomial:
    """GCD over Z[x_1..x_n] by a recursive subresultant remainder sequence.

    Sign-normalized so the lexicographically leading coefficient is
    positive.  gcd(0, 0) = 0.
    """
    f._require_same_arity(g)
    n = f.nvars
    if f.is_zero:
        return _normalize_sign(g)
    if g.is_zero:
        return _normalize_sign(f)
    if f.is_constant or g.is_constant:
        c = math.gcd(f.content(), g.content())
        return IntegerPolynomial.constant(n, c)

    shared = f.variables_used() & g.variables_used()
    if not shared:
        # no common variable, so any common divisor is an integer
        return IntegerPolynomial.constant(n, math.gcd(f.content(), g.content()))
    v = max(shared)
    if not f.depends_on(v):
        return polynomial_gcd(f, _content_wrt(g, v))
    if not g.depends_on(v):
        return polynomial_gcd(_content_wrt(f, v), g)

    cf, cg = _content_wrt(f, v), _content_wrt(g, v)
    a = exact_divide(f, cf)
    b = exact_divide(g, cg)
    assert a is not None and b is not None
    if a.degree_in(v) < b.degree_in(v):
        a, b = b, a

    one = IntegerPolynomial.constant(n, 1)
    gg, hh = one, one
    while True:
        delta = a.degree_in(v) - b.degree_in(v)
        r = _pseudo_remainder(a, b, v)
        if r.is_zero:
            break
        if r.degree_in(v) == 0:
            b = one
            break
        a, b = b, r
        scale = gg * hh ** delta
        b = exact_divide(b, scale)
        assert b is not None, "subresultant scale failed to divide"
        gg = a.coefficients_in(v)[a.degree_in(v)]
        if delta == 0:
            pass
        elif delta == 1:
            hh = gg
        else:
            num = gg ** delta
            hh = exact_divide(num, hh ** (delta - 1))
            assert hh is not None

    if b.degree_in(v) <= 0:
        pp = one
    else:
        pp = exact_divide(b, _content_wrt(b, v))
        assert pp is not None
    return _normalize_sign(polynomial_gcd(cf, cg) * pp)


def is_coprime(f: IntegerPolynomial, g: IntegerPolynomial) -> bool:
    """True when f and g share no nonconstant factor."""
    if f.is_zero and g.is_zero:
        return False
    if f.is_zero:
        return g.is_constant
    if g.is_zero:
        return f.is_constant
    return polynomial_gcd(f, g).is_constant


# -- univariate rational polynomials and Wronskians ------------------------


class RationalUniPoly:
    """Dense univariate polynomial with Fraction coefficients."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Iterable):
        cs = [Fraction(c) for c in coeffs]
        while cs and cs[-1] == 0:
            cs.pop()
        object.__setattr__(self, "coeffs", tuple(cs))

    def __setattr__(self, name, value):
        raise AttributeError("RationalUniPoly is immutable")

    @classmethod
    def zero(cls) -> "RationalUniPoly":
        return cls(())

    @classmethod
    def constant(cls, c) -> "RationalUniPoly":
        return cls((c,))

    @classmethod
    def x(cls) -> "RationalUniPoly":
        return cls((0, 1))

    @classmethod
    def from_integer_poly(cls, f: IntegerPolynomial) -> "RationalUniPoly":
        used = f.variables_used()
        if len(used) > 1:
            raise ContractViolation("polynomial is not univariate")
        v = next(iter(used)) if used else 0
        out = [0] * (f.degree_in(v) + 1 if not f.is_zero else 0)
        for e, c in f.terms.items():
            out[e[v]] = c
        return cls(out)

    @property
    def is_zero(self) -> bool:
        return not self.coeffs

    def degree(self) -> int:
        return len(self.coeffs) - 1

    def leading(self) -> Fraction:
        if not self.coeffs:
            raise ContractViolation("leading coefficient of zero")
        return self.coeffs[-1]

    def __eq__(self, other) -> bool:
        return isinstance(other, RationalUniPoly) and self.coeffs == other.coeffs

    def __hash__(self) -> int:
        return hash(self.coeffs)

    def __bool__(self) -> bool:
        return bool(self.coeffs)

    def __repr__(self) -> str:
        if not self.coeffs:
            return "0"
        parts = []
        for k in range(len(self.coeffs) - 1, -1, -1):
            c = self.coeffs[k]
            if c == 0:
                continue
            if k == 0:
                parts.append(str(c))
            else:
                mono = "t" if k == 1 else f"t^{k}"
                if c == 1:
                    parts.append(mono)
                elif c == -1:
                    parts.append(f"-{mono}")
                else:
                    parts.append(f"{c}*{mono}")
        return " + ".join(parts).replace("+ -", "- ")

    def __add__(self, other):
        if isinstance(other, (int, Fraction)):
            other = RationalUniPoly.constant(other)
        a, b = self.coeffs, other.coeffs
        n = max(len(a), len(b))
        return RationalUniPoly(
            [(a[i] if i < len(a) else 0) + (b[i] if i < len(b) else 0) for i in range(n)]
        )

    __radd__ = __add__

    def __neg__(self):
        return RationalUniPoly([-c for c in self.coeffs])

    def __sub__(self, other):
        if isinstance(other, (int, Fraction)):
            other = RationalUniPoly.constant(other)
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return RationalUniPoly([c * other for c in self.coeffs])
        a, b = self.coeffs, other.coeffs
        if not a or not b:
            return RationalUniPoly.zero()
        out = [Fraction(0)] * (len(a) + len(b) - 1)
        for i, ca in enumerate(a):
            if ca:
                for j, cb in enumerate(b):
                    out[i + j] += ca * cb
        return RationalUniPoly(out)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if k < 0:
            raise ContractViolation("negative power")
        out = RationalUniPoly.constant(1)
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def derivative(self) -> "RationalUniPoly":
        return RationalUniPoly([k * c for k, c in enumerate(self.coeffs)][1:])

    def __divmod__(self, other: "RationalUniPoly"):
        if other.is_zero:
            raise ContractViolation("division by zero polynomial")
        rem = list(self.coeffs)
        d = other.degree()
        lead = other.coeffs[-1]
        quot = [Fraction(0)] * max(len(rem) - d, 0)
        while len(rem) - 1 >= d and rem:
            k = len(rem) - 1 - d
            q = rem[-1] / lead
            quot[k] = q
            for j, c in enumerate(other.coeffs):
                rem[k + j] -= q * c
            while rem and rem[-1] == 0:
                rem.pop()
        return RationalUniPoly(quot), RationalUniPoly(rem)

    def divides(self, other: "RationalUniPoly") -> bool:
        """True when self divides other exactly (self nonzero)."""
        if self.is_zero:
            return other.is_zero
        _, r = divmod(other, self)
        return r.is_zero

    def evaluate(self, x) -> Fraction:
        out = Fraction(0)
        for c in reversed(self.coeffs):
            out = out * Fraction(x) + c
        return out


def _poly_matrix_det(rows: list[list[RationalUniPoly]]) -> RationalUniPoly:
    """Determinant of a small square matrix of polynomials, by expansion."""
    n = len(rows)
    cols = tuple(range(n))
    memo: dict[tuple[int, tuple[int, ...]], RationalUniPoly] = {}

    def det(r: int, cs: tuple[int, ...]) -> RationalUniPoly:
        if not cs:
            return RationalUniPoly.constant(1)
        key = (r, cs)
        got = memo.get(key)
        if got is not None:
            return got
        acc = RationalUniPoly.zero()
        for k, c in enumerate(cs):
            entry = rows[r][c]
            if not entry.is_zero:
                sub = det(r + 1, cs[:k] + cs[k + 1 :])
                term = entry * sub
                acc = acc + (term if k % 2 == 0 else -term)
        memo[key] = acc
        return acc

    return det(0, cols)


def wronskian(polys: Sequence[RationalUniPoly]) -> RationalUniPoly:
    """Wronskian determinant of univariate polynomials.

    Row i holds the i-th derivatives, so a single polynomial is its own
    Wronskian and W(1, t) = 1.
    """
    ps = [p if isinstance(p, RationalUniPoly) else RationalUniPoly(p) for p in polys]
    if not ps:
        raise ContractViolation("wronskian of an empty family")
    rows = [ps]
    for _ in range(len(ps) - 1):
        rows.append([p.derivative() for p in rows[-1]])
    return _poly_matrix_det(rows)
