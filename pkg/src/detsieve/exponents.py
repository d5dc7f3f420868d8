"""Exponent staircase sets, growth parameters, and shift multiplicities.

The central objects are the finite staircase set of exponent vectors
below a log-height cutoff, the scalar parameters controlling how many
auxiliary curves a cover needs, and the per-column shift multiplicities
that the determinant reduction factors out.

Exactness policy: whenever the box bounds are integers and the cutoff is
the log of a known integer, every membership test and every floor is
decided by integer comparisons of the form B1^e1 * B2^e2 * B3^e3 <= T.
Floating point (96-bit mpf) only enters for non-integral boxes and for
the smooth parameters themselves.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property
from typing import Callable, Sequence

from mpmath import mp

from .errors import ContractViolation
from .polynomials import ExponentVector, IntegerPolynomial, MonomialOrder, max_exponent
from .scalars import mpexp, mplog, mpsqrt, to_mpf, workprec

INFINITE = math.inf

#: refuse exact floor verification past this many multiplications
_FLOOR_ITER_CAP = 20000


# -- boxes ------------------------------------------------------------------


def _canonical_bound(b):
    if isinstance(b, bool):
        raise ContractViolation("box bound must be a number")
    if isinstance(b, int):
        return b
    bf = float(b)
    return int(bf) if bf.is_integer() else bf


@dataclass(frozen=True)
class BoxBounds:
    """Coordinate bounds B1, B2, B3 of the search box, each at least 2."""

    b1: int | float
    b2: int | float
    b3: int | float

    def __post_init__(self):
        for b in (self.b1, self.b2, self.b3):
            if _canonical_bound(b) < 2:
                raise ContractViolation(f"box bound {b} is below 2")
        object.__setattr__(self, "b1", _canonical_bound(self.b1))
        object.__setattr__(self, "b2", _canonical_bound(self.b2))
        object.__setattr__(self, "b3", _canonical_bound(self.b3))

    @property
    def bounds(self) -> tuple:
        return (self.b1, self.b2, self.b3)

    @property
    def bmin(self):
        return min(self.bounds)

    @property
    def bmax(self):
        return max(self.bounds)

    @property
    def integral(self) -> bool:
        return all(isinstance(b, int) for b in self.bounds)

    @property
    def equal(self) -> bool:
        return self.b1 == self.b2 == self.b3

    def log_heights(self) -> tuple:
        return tuple(mplog(b) for b in self.bounds)

    def height(self, e: Sequence[int]) -> int:
        """Exact integer B^e; only valid for integral boxes."""
        if not self.integral:
            raise ContractViolation("exact height needs integer box bounds")
        h = 1
        for b, k in zip(self.bounds, e):
            if k:
                h *= b ** int(k)
        return h

    def log_height(self, e: Sequence[int]):
        with workprec():
            return sum(k * lg for k, lg in zip(e, self.log_heights()))


# -- log-height cutoffs -----------------------------------------------------


class ExactLog:
    """A nonnegative log-scale quantity, optionally log of a known integer.

    Used for the staircase cutoff and for the side condition's top
    log-height, so comparisons against monomial heights stay exact
    whenever an integer representation exists.
    """

    __slots__ = ("value", "height")

    def __init__(self, value, height: int | None):
        if height is not None:
            height = int(height)
            if height < 1:
                raise ContractViolation("height must be a positive integer")
            value = mplog(height)
        else:
            value = to_mpf(value)
        if value < 0:
            raise ContractViolation("log-scale quantity must be nonnegative")
        object.__setattr__(self, "value", value)
        object.__setattr__(self, "height", height)

    def __setattr__(self, name, v):
        raise AttributeError("ExactLog is immutable")

    @classmethod
    def from_height(cls, height: int) -> "ExactLog":
        return cls(None, height)

    @classmethod
    def from_value(cls, value) -> "ExactLog":
        return cls(value, None)

    @classmethod
    def power(cls, base: int, n: int) -> "ExactLog":
        """log(base^n) held exactly."""
        if base < 2 or n < 0:
            raise ContractViolation("power cutoff needs base >= 2 and n >= 0")
        return cls(None, base ** n)

    @classmethod
    def coerce(cls, y) -> "ExactLog":
        if isinstance(y, ExactLog):
            return y
        return cls.from_value(y)

    @classmethod
    def box_height(cls, box: BoxBounds, e: Sequence[int]) -> "ExactLog":
        if box.integral:
            return cls.from_height(box.height(e))
        return cls.from_value(box.log_height(e))

    def __repr__(self):
        if self.height is not None:
            return f"ExactLog(log {self.height})"
        return f"ExactLog({float(self.value)!r})"

    def __eq__(self, other):
        if not isinstance(other, ExactLog):
            return NotImplemented
        if self.height is not None and other.height is not None:
            return self.height == other.height
        return self.value == other.value

    def __hash__(self):
        return hash(self.height if self.height is not None else self.value)


# -- staircase sets ----------------------------------------------------------


def _dominant_vector(m) -> ExponentVector:
    m = tuple(int(v) for v in m)
    if len(m) != 3 or any(v < 0 for v in m):
        raise ContractViolation(f"dominant exponent {m} must be three nonnegative integers")
    if not any(m):
        raise ContractViolation("dominant exponent must be nonzero")
    return m


@dataclass(frozen=True)
class ExponentSet:
    """Staircase set below a cutoff, avoiding the dominant exponent.

    members: every e with log B^e <= cutoff and e_i < dominant_i in at
    least one coordinate, sorted by the active order.
    restricted_members: the members with e_1 < dominant_1.
    """

    box: BoxBounds
    dominant: ExponentVector
    cutoff: ExactLog
    order: MonomialOrder
    members: tuple
    restricted_members: tuple

    @cached_property
    def member_set(self) -> frozenset:
        return frozenset(self.members)

    @cached_property
    def restricted_set(self) -> frozenset:
        return frozenset(self.restricted_members)

    def __len__(self) -> int:
        return len(self.members)


def cutoff_allows(box: BoxBounds, cutoff: ExactLog, e: Sequence[int]) -> bool:
    """Exact test of log B^e <= cutoff."""
    e = tuple(int(v) for v in e)
    if box.integral and cutoff.height is not None:
        return box.height(e) <= cutoff.height
    with workprec():
        return box.log_height(e) <= cutoff.value


def satisfies_dominant_condition(e: Sequence[int], m: Sequence[int]) -> bool:
    return any(ei < mi for ei, mi in zip(e, m))


def coordinate_caps(box: BoxBounds, cutoff: ExactLog) -> tuple[int, int, int]:
    """Largest k per coordinate with B_i^k <= the cutoff height."""
    caps = []
    for i, b in enumerate(box.bounds):
        if box.integral and cutoff.height is not None:
            k, h = 0, 1
            while h * b <= cutoff.height:
                h *= b
                k += 1
            caps.append(k)
        else:
            with workprec():
                caps.append(int(mp.floor(cutoff.value / mplog(b))))
    return tuple(caps)


def build_exponent_set(
    Y,
    m: Sequence[int],
    box: BoxBounds,
    order: MonomialOrder | None = None,
) -> ExponentSet:
    """Enumerate the staircase set below cutoff Y for dominant exponent m.

    Y may be a number (natural log scale) or an ExactLog.  Members come
    out sorted by the active order, which defaults to the box-weighted
    order with lexicographic ties.
    """
    cutoff = ExactLog.coerce(Y)
    m = _dominant_vector(m)
    if order is None:
        order = MonomialOrder.weighted(box.bounds)
    exact = box.integral and cutoff.height is not None
    T = cutoff.height
    members = []
    if exact:
        b1, b2, b3 = box.bounds
        h1 = 1
        e1 = 0
        while h1 <= T:
            h12 = h1
            e2 = 0
            while h12 <= T:
                h = h12
                e3 = 0
                while h <= T:
                    if e1 < m[0] or e2 < m[1] or e3 < m[2]:
                        members.append((e1, e2, e3))
                    h *= b3
                    e3 += 1
                h12 *= b2
                e2 += 1
            h1 *= b1
            e1 += 1
    else:
        caps = coordinate_caps(box, cutoff)
        logs = box.log_heights()
        with workprec():
            for e1 in range(caps[0] + 1):
                for e2 in range(caps[1] + 1):
                    base = e1 * logs[0] + e2 * logs[1]
                    if base > cutoff.value:
                        break
                    for e3 in range(caps[2] + 1):
                        if base + e3 * logs[2] > cutoff.value:
                            break
                        e = (e1, e2, e3)
                        if satisfies_dominant_condition(e, m):
                            members.append(e)
    members.sort(key=order.sort_key)
    restricted = tuple(e for e in members if e[0] < m[0])
    return ExponentSet(
        box=box,
        dominant=m,
        cutoff=cutoff,
        order=order,
        members=tuple(members),
        restricted_members=restricted,
    )


class SetStatistics(tuple):
    """(count, sum_log, sum_e2, sum_e3) with named access."""

    __slots__ = ()

    def __new__(cls, count, sum_log, sum_e2, sum_e3):
        return super().__new__(cls, (count, sum_log, sum_e2, sum_e3))

    count = property(lambda s: s[0])
    sum_log = property(lambda s: s[1])
    sum_e2 = property(lambda s: s[2])
    sum_e3 = property(lambda s: s[3])


def set_statistics(E: ExponentSet) -> SetStatistics:
    """Exact member count, total log-height, and restricted coordinate sums.

    sum_log runs over all members; sum_e2 and sum_e3 run over the
    restricted members only.
    """
    sums = [0, 0, 0]
    for e in E.members:
        sums[0] += e[0]
        sums[1] += e[1]
        sums[2] += e[2]
    logs = E.box.log_heights()
    with workprec():
        sum_log = sums[0] * logs[0] + sums[1] * logs[1] + sums[2] * logs[2]
    se2 = sum(e[1] for e in E.restricted_members)
    se3 = sum(e[2] for e in E.restricted_members)
    return SetStatistics(len(E.members), sum_log, se2, se3)


def main_term_deviation(E: ExponentSet) -> tuple:
    """Relative deviations of count and sum_log from their smooth main terms.

    The smooth reference values are (logT/prod log B_i) Y^2/2 for the
    count and (logT/prod log B_i) Y^3/3 for the log sum, where T is the
    box height of the dominant exponent.  Diagnostic only.
    """
    stats = set_statistics(E)
    logs = E.box.log_heights()
    with workprec():
        log_top = sum(k * lg for k, lg in zip(E.dominant, logs))
        denom = logs[0] * logs[1] * logs[2]
        y = E.cutoff.value
        main_count = log_top / denom * y ** 2 / 2
        main_sum = log_top / denom * y ** 3 / 3
        dev_count = abs(stats.count / main_count - 1)
        dev_sum = abs(stats.sum_log / main_sum - 1)
    return dev_count, dev_sum


# -- growth parameters -------------------------------------------------------


@dataclass(frozen=True)
class MethodParams:
    """Scalar parameters steering the auxiliary-curve construction.

    cover_scale grows like the number of curves a cover needs before the
    epsilon slack; cover_scale_eps includes the B^epsilon slack and is
    the threshold the column count sqrt(E)*r has to beat.  modulus_gain
    is the coefficient of log q in log(cover_scale_eps): it measures how
    much each factor of the congruence modulus shrinks the cover.
    """

    box: BoxBounds
    modulus: int
    epsilon: float
    dominant: ExponentVector
    side_exponent: ExponentVector
    side: ExactLog
    top_height: int | None
    log_top_height: object
    cover_scale: object
    cover_scale_eps: object
    modulus_gain: object

    @property
    def needs_single_cover(self) -> bool:
        """True when the threshold is at most 1, forcing the one-curve branch."""
        return self.cover_scale_eps <= 1


def side_log_height(g: IntegerPolynomial, box: BoxBounds) -> tuple[ExponentVector, ExactLog]:
    """Heaviest exponent of g under box weights, with its exact log-height."""
    if g.is_zero:
        raise ContractViolation("side condition polynomial is zero")
    s_star = max_exponent(g, MonomialOrder.weighted(box.bounds))
    return s_star, ExactLog.box_height(box, s_star)


def compute_params(
    f: IntegerPolynomial,
    g: IntegerPolynomial,
    q: int,
    box: BoxBounds,
    order: MonomialOrder,
    epsilon: float,
) -> MethodParams:
    """Derive the growth parameters for surface f with side condition g mod q."""
    if f.nvars != 3 or g.nvars != 3:
        raise ContractViolation("parameters are defined for three variables")
    if g.is_constant:
        raise ContractViolation("side condition polynomial must be non-constant")
    if g.depends_on(0):
        raise ContractViolation("side condition polynomial must not involve x1")
    q = int(q)
    if q < 1:
        raise ContractViolation("modulus must be a positive integer")
    if not epsilon > 0:
        raise ContractViolation("epsilon must be positive")
    m = max_exponent(f, order)
    if not any(m):
        raise ContractViolation("dominant exponent of f is zero")

    s_star, side = side_log_height(g, box)
    logs = box.log_heights()
    with workprec():
        log_top = sum(k * lg for k, lg in zip(m, logs))
        top_height = box.height(m) if box.integral else None
        prod_logs = logs[0] * logs[1] * logs[2]
        root = mpsqrt(prod_logs / log_top)
        log_q = mplog(q) if q > 1 else to_mpf(0)
        log_bmax = mplog(box.bmax)
        shrink = m[0] * logs[0] * log_q / (2 * side.value * log_top)
        log_k = root * (1 - shrink)
        cover_scale = mpexp(log_k)
        cover_scale_eps = mpexp(log_k + epsilon * log_bmax)
        gain = (
            m[0]
            * logs[0] ** to_mpf(1.5)
            * mpsqrt(logs[1] * logs[2])
            / (2 * side.value * log_top ** to_mpf(1.5))
        )
    return MethodParams(
        box=box,
        modulus=q,
        epsilon=float(epsilon),
        dominant=m,
        side_exponent=s_star,
        side=side,
        top_height=top_height,
        log_top_height=log_top,
        cover_scale=cover_scale,
        cover_scale_eps=cover_scale_eps,
        modulus_gain=gain,
    )


# -- shift multiplicities ----------------------------------------------------


def _shift_vector(t) -> ExponentVector:
    t = tuple(int(v) for v in t)
    if len(t) != 3 or any(v < 0 for v in t):
        raise ContractViolation(f"shift {t} must be three nonnegative integers")
    return t


def lambda_single(e: Sequence[int], t: Sequence[int], E: ExponentSet):
    """Largest k with e - k*t still in the restricted staircase set.

    Infinite for t = 0.  The input e must itself be restricted.
    """
    e = tuple(int(v) for v in e)
    t = _shift_vector(t)
    if e not in E.restricted_set:
        raise ContractViolation(f"{e} is not a restricted member of the set")
    if not any(t):
        return INFINITE
    k = 0
    while True:
        nxt = tuple(a - b for a, b in zip(e, (v * (k + 1) for v in t)))
        if any(v < 0 for v in nxt) or nxt not in E.restricted_set:
            return k
        k += 1


def _exact_floor(He: int, Hs: int, Ht: int, T: int) -> int:
    """Largest mu >= 0 with He * Hs^mu <= T * Ht^mu, requiring Hs > Ht."""
    with workprec():
        est = (mplog(T) - mplog(He)) / (mplog(Hs) - mplog(Ht))
        mu = max(0, int(mp.floor(est)))
    if mu > _FLOOR_ITER_CAP:
        raise ContractViolation(
            "shift floor exceeds the exact-verification cap; the side "
            "log-height is too close to the shift log-height"
        )

    def ok(k: int) -> bool:
        return He * Hs ** k <= T * Ht ** k

    if ok(mu):
        while ok(mu + 1):
            mu += 1
    else:
        while mu > 0 and not ok(mu):
            mu -= 1
    return mu


def _float_floor(log_He, log_Hs, log_Ht, Y) -> int:
    with workprec():
        return max(0, int(mp.floor((Y - log_He) / (log_Hs - log_Ht))))


def shift_floor(e: Sequence[int], t: Sequence[int], E: ExponentSet, S) -> float | int:
    """The budget floor((Y - log B^e)/(S - log B^t)); infinite when equal."""
    e = tuple(int(v) for v in e)
    t = _shift_vector(t)
    S = ExactLog.coerce(S)
    box = E.box
    exact = box.integral and E.cutoff.height is not None and S.height is not None
    if exact:
        Ht = box.height(t)
        if S.height < Ht:
            raise ContractViolation("side log-height is below the shift log-height")
        if S.height == Ht:
            return INFINITE
        return _exact_floor(box.height(e), S.height, Ht, E.cutoff.height)
    with workprec():
        log_Ht = box.log_height(t)
        if S.value < log_Ht:
            raise ContractViolation("side log-height is below the shift log-height")
        if S.value == log_Ht:
            return INFINITE
        return _float_floor(box.log_height(e), S.value, log_Ht, E.cutoff.value)


def shift_multiplicity(e: Sequence[int], t: Sequence[int], E: ExponentSet, S) -> int:
    """Per-column exponent of the modulus: min of chain length and budget."""
    lam = lambda_single(e, t, E)
    cap = shift_floor(e, t, E, S)
    mu = min(lam, cap)
    if mu == INFINITE:
        raise ContractViolation("shift multiplicity is unbounded for t = 0 with S = log B^t")
    return int(mu)


def lambda_total(E: ExponentSet, t: Sequence[int], S) -> int:
    """Total modulus exponent factored out of any full minor: sum of
    per-column multiplicities over the restricted members."""
    t = _shift_vector(t)
    S = ExactLog.coerce(S)
    return sum(shift_multiplicity(e, t, E, S) for e in E.restricted_members)


# -- cutoff selection --------------------------------------------------------


def default_floor_constant(epsilon: float | None) -> int:
    """Minimum multiples of log B the cutoff must reach; grows as 1/epsilon."""
    if epsilon is None:
        return 10
    if not epsilon > 0:
        raise ContractViolation("epsilon must be positive")
    return max(10, math.ceil(4 / epsilon))


def choose_Y(
    mode: str,
    constraint: Callable[[ExactLog], bool],
    *,
    box: BoxBounds,
    epsilon: float | None = None,
    floor_const: int | None = None,
    hard_cap: int = 512,
    grid_low=None,
    grid_points: int = 64,
) -> ExactLog:
    """Smallest admissible cutoff of the requested shape.

    mode 'equal-box': candidates n * log B for integers n, requiring an
    equal integral box; returns the first n at or above the floor
    constant whose cutoff satisfies the constraint.

    mode 'grid-scan': grid_points candidates evenly spaced in
    [grid_low, 2*grid_low]; returns the smallest candidate meeting both
    the floor and the constraint.  Candidates snap to exact integer
    heights when the box is integral.
    """
    c_floor = floor_const if floor_const is not None else default_floor_constant(epsilon)
    if c_floor < 0:
        raise ContractViolation("floor constant must be nonnegative")

    if mode == "equal-box":
        if not (box.equal and box.integral):
            raise ContractViolation("equal-box cutoffs need an equal integral box")
        base = box.b1
        for n in range(max(c_floor, 0), hard_cap + 1):
            cand = ExactLog.power(base, n)
            if constraint(cand):
                return cand
        raise ContractViolation(
            f"no cutoff n*log({base}) with n in [{c_floor}, {hard_cap}] "
            "satisfies the constraint; raise the cap or loosen the constraint"
        )

    if mode == "grid-scan":
        if grid_low is None:
            raise ContractViolation("grid-scan needs grid_low")
        with workprec():
            low = to_mpf(grid_low)
            if low <= 0:
                raise ContractViolation("grid_low must be positive")
            floor_value = c_floor * mplog(box.bmax)
            seen = set()
            for k in range(grid_points):
                y = low * (1 + to_mpf(k) / (grid_points - 1))
                if box.integral:
                    h = mpexp(y)
                    near = int(mp.nint(h))
                    # snap heights that are integers up to rounding noise
                    if near >= 1 and abs(h - near) < mp.mpf(2) ** -60 * near:
                        height = near
                    else:
                        height = int(mp.floor(h))
                    if height < 1 or height in seen:
                        continue
                    seen.add(height)
                    cand = ExactLog.from_height(height)
                else:
                    cand = ExactLog.from_value(y)
                if cand.value < floor_value:
                    continue
                if constraint(cand):
                    return cand
        raise ContractViolation(
            "no grid candidate in [Z, 2Z] satisfies the floor and the "
            "constraint; raise Z"
        )

    raise ContractViolation(f"unknown cutoff mode {mode!r}")
