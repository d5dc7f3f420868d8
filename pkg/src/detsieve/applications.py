"""Counting applications: diagonal quadrics and sums of unlike powers.

Both counts are exact.  The quadric count can additionally run the full
certificate pipeline with its sharpened cover scale; the unlike-powers
count can be recomputed through hyperplane slices, exercising the
congruence machinery slice by slice.
"""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .determinant import CoverReport, aux_pipeline
from .enumeration import PointSet, SideCondition, enumerate_points
from .errors import ContractViolation, SoundnessError
from .exponents import BoxBounds
from .polynomials import IntegerPolynomial, RationalUniPoly, wronskian
from mpmath import mp

from .scalars import to_mpf, workprec


def _is_perfect_square(v: int) -> bool:
    return v >= 0 and math.isqrt(v) ** 2 == v


def _integer_nth_root(v: int, n: int) -> int | None:
    """The integer r with r^n = v, if one exists."""
    if n < 1:
        raise ContractViolation("root index must be positive")
    if v < 0 and n % 2 == 0:
        return None
    neg = v < 0
    a = -v if neg else v
    if a == 0:
        return 0
    if n == 1:
        return v
    r = int(round(a ** (1.0 / n)))
    for c in (r - 2, r - 1, r, r + 1, r + 2):
        if c >= 0 and c ** n == a:
            return -c if neg else c
    return None


# -- diagonal quadrics ----------------------------------------------------------


@dataclass(frozen=True)
class QuadricInstance:
    """Diagonal quadric a1*x1^2 + a2*x2^2 + a3*x3^2 = n inside a cube."""

    a1: int
    a2: int
    a3: int
    n: int
    B: int

    def __post_init__(self):
        for name in ("a1", "a2", "a3", "n", "B"):
            object.__setattr__(self, name, int(getattr(self, name)))
        if self.a1 * self.a2 * self.a3 == 0:
            raise ContractViolation("quadric coefficients must be nonzero")
        if self.B < 1:
            raise ContractViolation("box size must be positive")
        if math.gcd(self.a1, self.a2, self.a3, self.n) != 1:
            raise ContractViolation(
                "coefficients and target must not share a common factor"
            )
        if _is_perfect_square(-self.a1 * self.a2 * self.a3 * self.n):
            raise ContractViolation("rational lines possible")

    @property
    def coefficients(self) -> tuple:
        return (self.a1, self.a2, self.a3)

    def surface(self) -> IntegerPolynomial:
        return IntegerPolynomial(
            3,
            {(2, 0, 0): self.a1, (0, 2, 0): self.a2,
             (0, 0, 2): self.a3, (0, 0, 0): -self.n},
        )


def q_of_n(n: int) -> int:
    """Column count of the cutoff-n staircase: C(n+3,3) - C(n+1,3)."""
    n = int(n)
    if n < 0:
        raise ContractViolation("cutoff index must be nonnegative")
    return math.comb(n + 3, 3) - math.comb(n + 1, 3)


def quadric_cover_scale(q: int, B: int):
    """Sharpened cover scale q^(-1/6) * B^(2/3) for the quadric pipeline."""
    if q < 1 or B < 1:
        raise ContractViolation("cover scale needs positive modulus and box")
    with workprec():
        # integer powers first so perfect-power inputs stay exact
        return mp.root(to_mpf(B) ** 2, 3) / mp.root(to_mpf(q), 6)


@dataclass(frozen=True)
class QuadricCount:
    count: int
    points: PointSet
    mode: str
    permutation: tuple | None = None
    modulus: int | None = None
    report: CoverReport | None = None


def count_quadric(
    inst: QuadricInstance,
    mode: str = "brute",
    *,
    epsilon: float = 0.5,
    floor_const: int | None = None,
    seed: int = 0,
    minor_samples: int = 32,
) -> QuadricCount:
    """Exact point count on the quadric, by direct enumeration or through
    the certificate pipeline with the sharpened quadric cover scale.

    Pipeline mode permutes coordinates so the largest coefficient sits
    first, takes its absolute value as the modulus, and cross-checks that
    every point ends up covered by an emitted polynomial or the leftover
    list.
    """
    box = BoxBounds(inst.B, inst.B, inst.B)
    if mode == "brute":
        f = inst.surface()
        side = SideCondition(IntegerPolynomial.variable(3, 1), 1)
        pts = enumerate_points(f, side, box)
        return QuadricCount(count=len(pts), points=pts, mode=mode)
    if mode != "pipeline":
        raise ContractViolation(f"unknown quadric mode {mode!r}")

    a = inst.coefficients
    lead = max(range(3), key=lambda i: (abs(a[i]), -i))
    perm = (lead,) + tuple(i for i in range(3) if i != lead)
    ap = tuple(a[i] for i in perm)
    q = abs(ap[0])
    f = IntegerPolynomial(
        3,
        {(2, 0, 0): ap[0], (0, 2, 0): ap[1], (0, 0, 2): ap[2], (0, 0, 0): -inst.n},
    )
    g = IntegerPolynomial(
        3, {(0, 2, 0): ap[1], (0, 0, 2): ap[2], (0, 0, 0): -inst.n}
    )
    pts = enumerate_points(f, SideCondition(g, q), box)
    with workprec():
        scale = quadric_cover_scale(q, inst.B) * to_mpf(inst.B) ** to_mpf(epsilon)
    report = aux_pipeline(
        f, g, q, box, None, epsilon, list(pts),
        seed=seed, minor_samples=minor_samples,
        floor_const=floor_const, scale_override=scale,
    )
    if not report.coverage_complete:
        raise SoundnessError("a quadric point escaped every emitted cover")
    return QuadricCount(
        count=len(pts), points=pts, mode=mode,
        permutation=perm, modulus=q, report=report,
    )


# -- sums of unlike powers ------------------------------------------------------


@dataclass(frozen=True)
class UnlikePowersInstance:
    """x1^k + x2^l + x3^m + x4^k = N inside a cube."""

    k: int
    l: int
    m: int
    N: int
    B: int

    def __post_init__(self):
        for name in ("k", "l", "m", "N", "B"):
            object.__setattr__(self, name, int(getattr(self, name)))
        if min(self.k, self.l, self.m) < 2:
            raise ContractViolation("all exponents must be at least 2")
        if self.N == 0:
            raise ContractViolation("target must be nonzero")
        if self.B < 1:
            raise ContractViolation("box size must be positive")

    def validate_theorem_mode(self) -> None:
        if self.k % 2 == 0 or self.k < 13:
            raise ContractViolation("leading exponent must be odd and at least 13")
        if not (self.k > self.l > self.m >= 2):
            raise ContractViolation("exponents must be strictly decreasing")

    def hypersurface(self) -> IntegerPolynomial:
        return IntegerPolynomial(
            4,
            {(self.k, 0, 0, 0): 1, (0, self.l, 0, 0): 1,
             (0, 0, self.m, 0): 1, (0, 0, 0, self.k): 1,
             (0, 0, 0, 0): -self.N},
        )


@dataclass(frozen=True)
class ThreefoldSlice:
    """One hyperplane slice u = alpha*x1 + beta*x4 + gamma of a threefold.

    h_u is the integer polynomial beta^k' * h(x1, x2, x3, (u-alpha*x1-gamma)/beta)
    and the slice surface is u*h_u + beta^k' * g.
    """

    alpha: int
    beta: int
    gamma: int
    h: IntegerPolynomial
    g: IntegerPolynomial
    u: int
    h_u: IntegerPolynomial
    slice_poly: IntegerPolynomial
    degenerate: bool

    @property
    def modulus(self) -> int:
        """Congruence modulus forced on g along the slice."""
        if self.u == 0:
            return 1
        kp = self.h.total_degree()
        return abs(self.u) // math.gcd(self.u, self.beta ** kp)


def build_slice(
    alpha: int, beta: int, gamma: int,
    h: IntegerPolynomial, g: IntegerPolynomial, u: int,
) -> ThreefoldSlice:
    """Substitute x4 = (u - alpha*x1 - gamma)/beta into h and clear beta powers.

    The substitution is carried out over the integers: with h written as
    sum_j c_j(x1,x2,x3) * x4^j and k' = deg h, the result is
    sum_j c_j * (u - gamma - alpha*x1)^j * beta^(k'-j).
    """
    alpha, beta, gamma, u = int(alpha), int(beta), int(gamma), int(u)
    if beta == 0:
        raise ContractViolation("beta must be nonzero")
    if h.nvars != 4:
        raise ContractViolation("slicing expects a four-variable polynomial")
    if g.nvars != 3 or g.depends_on(0):
        raise ContractViolation("side polynomial must be in (x2, x3) only")
    kp = h.total_degree()
    linear = IntegerPolynomial(3, {(0, 0, 0): u - gamma, (1, 0, 0): -alpha})
    h_u = IntegerPolynomial.zero(3)
    for j, cj in h.coefficients_in(3).items():
        h_u = h_u + cj.drop_variable(3) * (linear ** j) * (beta ** (kp - j))
    slice_poly = h_u * u + g * (beta ** kp)
    return ThreefoldSlice(
        alpha=alpha, beta=beta, gamma=gamma, h=h, g=g, u=u,
        h_u=h_u, slice_poly=slice_poly, degenerate=(u == 0),
    )


def _alternating_factor(k: int) -> IntegerPolynomial:
    """h with x1^k + x4^k = (x1 + x4) * h, for odd k."""
    terms = {}
    for i in range(k):
        e = [0, 0, 0, 0]
        e[0] = k - 1 - i
        e[3] = i
        terms[tuple(e)] = -1 if i % 2 else 1
    return IntegerPolynomial(4, terms)


@dataclass(frozen=True)
class UnlikeCount:
    count: int
    mode: str
    zero_slice: int | None = None
    per_slice: tuple | None = None
    assumed_hypothesis: str | None = None


def count_unlike(inst: UnlikePowersInstance, mode: str = "brute") -> UnlikeCount:
    """Exact count of box points on the unlike-powers hypersurface.

    brute loops over all quadruples; meet-in-middle hashes the multiset
    of x1^k + x4^k values; sliced-pipeline splits along u = x1 + x4 and
    enumerates each slice surface under its congruence side condition,
    so agreement with brute also validates the per-slice congruences.
    """
    B, k, l, m, N = inst.B, inst.k, inst.l, inst.m, inst.N
    rng = range(-B, B + 1)
    pk = {v: v ** k for v in rng}
    pl = {v: v ** l for v in rng}
    pm = {v: v ** m for v in rng}

    if mode == "brute":
        count = 0
        for x1 in rng:
            for x2 in rng:
                s12 = pk[x1] + pl[x2]
                for x3 in rng:
                    s123 = s12 + pm[x3]
                    for x4 in rng:
                        if s123 + pk[x4] == N:
                            count += 1
        return UnlikeCount(count=count, mode=mode)

    if mode == "meet-in-middle":
        outer = Counter(pk[x1] + pk[x4] for x1 in rng for x4 in rng)
        count = sum(
            outer.get(N - pl[x2] - pm[x3], 0) for x2 in rng for x3 in rng
        )
        return UnlikeCount(count=count, mode=mode)

    if mode != "sliced-pipeline":
        raise ContractViolation(f"unknown unlike-powers mode {mode!r}")

    inst.validate_theorem_mode()
    h = _alternating_factor(k)
    g3 = IntegerPolynomial(3, {(0, l, 0): 1, (0, 0, m): 1, (0, 0, 0): -N})
    box = BoxBounds(B, B, B)

    # u = 0 forces x4 = -x1 for odd k; the count splits off as a cylinder
    fibers = sum(
        1 for x2 in rng for x3 in rng if pl[x2] + pm[x3] == N
    )
    zero_slice = fibers * (2 * B + 1)

    total = zero_slice
    per_slice = []
    for u in range(-3 * B, 3 * B + 1):
        if u == 0:
            continue
        sl = build_slice(1, 1, 0, h, g3, u)
        side = SideCondition(g3, sl.modulus)
        pts = enumerate_points(sl.slice_poly, side, box)
        here = sum(1 for (x1, _, _) in pts if abs(u - x1) <= B)
        if here:
            per_slice.append((u, here))
        total += here
    return UnlikeCount(
        count=total, mode=mode,
        zero_slice=zero_slice, per_slice=tuple(per_slice),
        assumed_hypothesis="slice surfaces assumed geometrically irreducible "
                           "for every nonzero u",
    )


# -- gcd-twisted power sums ------------------------------------------------------


@dataclass(frozen=True)
class GcdPowerSum:
    total: object
    majorant: object
    terms: int


def gcd_power_sum(alpha, X: int, n: int) -> GcdPowerSum:
    """Sum of (u / gcd(u, n))^alpha for u up to X, with its divisor majorant.

    The majorant sums u^alpha for u up to X/d over every divisor d of n;
    each term of the twisted sum injects into it, so total <= majorant
    holds term by term.
    """
    alpha_f = float(alpha)
    if not -1.0 < alpha_f < 0.0:
        raise ContractViolation("exponent must lie strictly between -1 and 0")
    X, n = int(X), int(n)
    if X < 1 or n < 1:
        raise ContractViolation("range and twist must be positive")
    with workprec():
        a = to_mpf(alpha)
        cache: dict[int, object] = {}

        def upow(u: int):
            got = cache.get(u)
            if got is None:
                got = to_mpf(u) ** a
                cache[u] = got
            return got

        total = sum((upow(u // math.gcd(u, n)) for u in range(1, X + 1)),
                    to_mpf(0))
        divs = [d for d in range(1, n + 1) if n % d == 0]
        majorant = to_mpf(0)
        count = X
        for d in divs:
            for u in range(1, X // d + 1):
                majorant += upow(u)
                count += 1
        return GcdPowerSum(total=total, majorant=majorant, terms=count)


# -- Wronskian exclusion ----------------------------------------------------------


@dataclass(frozen=True)
class WronskianReport:
    applicable: bool
    wronskian_nonzero: bool
    lhs: int
    rhs: int
    passed: bool
    divisibility_ok: bool
    degrees: tuple
    exps: tuple


def wronskian_bound_check(
    gammas: Sequence[RationalUniPoly], exps: Sequence[int]
) -> WronskianReport:
    """Degree bound for power families whose sum is a nonzero constant.

    Checks max(d_i * l_i) <= (r-1) * sum(d_i) - r(r-1)/2 whenever the
    powers gamma_i^(l_i) are independent (nonzero Wronskian), and records
    whether the product of gamma_i^max(l_i - r + 1, 0) divides the
    Wronskian.  A dependent family yields an inapplicable report, not an
    error.
    """
    gammas = list(gammas)
    exps = tuple(int(v) for v in exps)
    r = len(gammas)
    if r == 0 or len(exps) != r:
        raise ContractViolation("need one exponent per polynomial")
    if any(v < 1 for v in exps):
        raise ContractViolation("exponents must be positive")
    if any(g.is_zero for g in gammas):
        raise ContractViolation("component polynomials must be nonzero")

    powers = [g ** l for g, l in zip(gammas, exps)]
    total = powers[0]
    for p in powers[1:]:
        total = total + p
    if total.degree() > 0 or total.is_zero:
        raise ContractViolation("the powers must sum to a nonzero constant")

    degrees = tuple(g.degree() for g in gammas)
    w = wronskian(powers)
    if w.is_zero:
        return WronskianReport(
            applicable=False, wronskian_nonzero=False,
            lhs=0, rhs=0, passed=False, divisibility_ok=False,
            degrees=degrees, exps=exps,
        )

    lhs = max(d * l for d, l in zip(degrees, exps))
    rhs = (r - 1) * sum(degrees) - r * (r - 1) // 2
    divisor = RationalUniPoly.constant(1)
    for g, l in zip(gammas, exps):
        s = max(l - r + 1, 0)
        if s:
            divisor = divisor * g ** s
    return WronskianReport(
        applicable=True, wronskian_nonzero=True,
        lhs=lhs, rhs=rhs, passed=lhs <= rhs,
        divisibility_ok=divisor.divides(w),
        degrees=degrees, exps=exps,
    )


# -- excluded subvarieties ---------------------------------------------------------


@dataclass(frozen=True)
class SubvarietySystem:
    equations: tuple
    points: tuple

    @property
    def count(self) -> int:
        return len(self.points)


@dataclass(frozen=True)
class SubvarietyReport:
    systems: tuple
    union_points: tuple

    @property
    def union_count(self) -> int:
        return len(self.union_points)


def excluded_subvarieties(inst: UnlikePowersInstance) -> SubvarietyReport:
    """The four coordinate-subsum systems that can carry excess points,
    each intersected with the hypersurface, with exact box point counts."""
    inst.validate_theorem_mode()
    k, l, m, N, B = inst.k, inst.l, inst.m, inst.N, inst.B
    rng = range(-B, B + 1)
    f4 = inst.hypersurface()

    def poly4(terms):
        return IntegerPolynomial(4, terms)

    sys_polys = (
        poly4({(k, 0, 0, 0): 1, (0, 0, 0, k): 1}),
        poly4({(0, l, 0, 0): 1, (0, 0, m, 0): 1}),
        poly4({(k, 0, 0, 0): 1, (0, l, 0, 0): 1, (0, 0, 0, k): 1}),
        poly4({(k, 0, 0, 0): 1, (0, 0, m, 0): 1, (0, 0, 0, k): 1}),
    )

    # system 1: odd k forces x4 = -x1, leaving the fiber x2^l + x3^m = N
    pts1 = sorted(
        (x1, x2, x3, -x1)
        for x1 in rng for x2 in rng for x3 in rng
        if x2 ** l + x3 ** m == N
    )

    # system 2: x2^l = -x3^m, and x1^k + x4^k = N
    pairs2 = [(x2, x3) for x2 in rng for x3 in rng if x2 ** l + x3 ** m == 0]
    halves2 = []
    for x1 in rng:
        x4 = _integer_nth_root(N - x1 ** k, k)
        if x4 is not None and abs(x4) <= B:
            halves2.append((x1, x4))
    pts2 = sorted(
        (x1, x2, x3, x4) for (x1, x4) in halves2 for (x2, x3) in pairs2
    )

    # system 3: forces x3^m = N on the hypersurface
    thirds3 = [x3 for x3 in rng if x3 ** m == N]
    triples3 = []
    for x1 in rng:
        for x2 in rng:
            x4 = _integer_nth_root(-(x1 ** k) - x2 ** l, k)
            if x4 is not None and abs(x4) <= B:
                triples3.append((x1, x2, x4))
    pts3 = sorted(
        (x1, x2, x3, x4) for (x1, x2, x4) in triples3 for x3 in thirds3
    )

    # system 4: forces x2^l = N on the hypersurface
    seconds4 = [x2 for x2 in rng if x2 ** l == N]
    triples4 = []
    for x1 in rng:
        for x3 in rng:
            x4 = _integer_nth_root(-(x1 ** k) - x3 ** m, k)
            if x4 is not None and abs(x4) <= B:
                triples4.append((x1, x3, x4))
    pts4 = sorted(
        (x1, x2, x3, x4) for (x1, x3, x4) in triples4 for x2 in seconds4
    )

    systems = []
    union: set = set()
    for sp, pts in zip(sys_polys, (pts1, pts2, pts3, pts4)):
        for pt in pts:
            if sp.evaluate(pt) != 0 or f4.evaluate(pt) != 0:
                raise SoundnessError(f"subvariety point {pt} fails its equations")
        systems.append(SubvarietySystem(equations=(sp, f4), points=tuple(pts)))
        union.update(pts)
    return SubvarietyReport(
        systems=tuple(systems), union_points=tuple(sorted(union))
    )


# -- predicted exponents -----------------------------------------------------------


@dataclass(frozen=True)
class QuadricExponents:
    box_powers: tuple
    coefficient_powers: tuple


@dataclass(frozen=True)
class UnlikeExponents:
    main: float
    secondary: float
    comparison: float


def predicted_exponents(inst):
    """Growth exponents the counting bounds predict for this instance."""
    if isinstance(inst, QuadricInstance):
        return QuadricExponents(
            box_powers=(Fraction(4, 3), Fraction(7, 6), Fraction(1, 2)),
            coefficient_powers=(Fraction(-1, 3), Fraction(-1, 6), Fraction(0)),
        )
    if isinstance(inst, UnlikePowersInstance):
        k, l = inst.k, inst.l
        root = math.sqrt(k - 1)
        trim = 1 - 1 / (2 * l)
        return UnlikeExponents(
            main=4 / 3 + trim / root,
            secondary=1 + 2 * trim / root,
            comparison=4 / 3 + 1 / math.sqrt(k),
        )
    raise ContractViolation(f"no exponent prediction for {type(inst).__name__}")
