"""Monomial matrices, exact minors, divisibility certificates, covers.

The engine builds the matrix of monomial values at surface points,
factors a guaranteed power of the congruence modulus out of every full
minor by explicit column operations, and extracts integer kernel
polynomials that vanish on all the points of a class.  All determinants,
ranks, and valuations are computed exactly.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping, Sequence

from .arith import factorize, is_prime, prime_power_decompose
from .enumeration import PointSet, ResidueData, residue_split, split_leftover
from .errors import ContractViolation, HypothesisViolation, SoundnessError
from .exponents import (
    INFINITE,
    BoxBounds,
    ExactLog,
    ExponentSet,
    MethodParams,
    build_exponent_set,
    choose_Y,
    compute_params,
    default_floor_constant,
    shift_multiplicity,
)
from .polynomials import (
    IntegerPolynomial,
    MonomialOrder,
    eval_monomial,
    is_coprime,
    top_degree_part,
)
from .scalars import mplog, to_mpf, workprec


# -- matrices and exact linear algebra ----------------------------------------


@dataclass(frozen=True)
class MonomialMatrix:
    """Grid of monomial values: entry (j, i) is rows[j] raised to cols[i]."""

    rows: tuple
    cols: tuple
    entries: tuple

    @property
    def shape(self) -> tuple[int, int]:
        return len(self.rows), len(self.cols)

    def entry(self, j: int, i: int) -> int:
        return self.entries[j][i]


def build_matrix(points: Sequence, E: ExponentSet) -> MonomialMatrix:
    """Monomial-value matrix with one row per point, one column per member."""
    pts = tuple(tuple(int(x) for x in p) for p in points)
    if not pts:
        raise ContractViolation("matrix needs at least one point")
    for p in pts:
        if len(p) != 3:
            raise ContractViolation(f"point {p} is not a triple")
    cols = E.members
    if not cols:
        raise ContractViolation("matrix needs at least one column")
    entries = tuple(tuple(eval_monomial(p, e) for e in cols) for p in pts)
    return MonomialMatrix(rows=pts, cols=cols, entries=entries)


def integer_determinant(grid: Sequence[Sequence[int]]) -> int:
    """Exact determinant by fraction-free (Bareiss) elimination."""
    n = len(grid)
    if n == 0:
        return 1
    a = [list(map(int, row)) for row in grid]
    for row in a:
        if len(row) != n:
            raise ContractViolation("determinant of a non-square grid")
    sign = 1
    prev = 1
    for k in range(n - 1):
        if a[k][k] == 0:
            piv = next((i for i in range(k + 1, n) if a[i][k]), None)
            if piv is None:
                return 0
            a[k], a[piv] = a[piv], a[k]
            sign = -sign
        pivot = a[k][k]
        for i in range(k + 1, n):
            aik = a[i][k]
            row_i = a[i]
            row_k = a[k]
            for j in range(k + 1, n):
                row_i[j] = (row_i[j] * pivot - aik * row_k[j]) // prev
            row_i[k] = 0
        prev = pivot
    return sign * a[-1][-1]


def _row_reduce(grid: Sequence[Sequence[int]]):
    """Gaussian elimination over the rationals.

    Returns (rank, pivot_cols, pivot_rows, reduced) where pivot_rows are
    indices of original rows forming an independent spanning subset and
    reduced is the RREF restricted to the pivot rows.
    """
    rows = [[Fraction(v) for v in r] for r in grid]
    nrows = len(rows)
    ncols = len(rows[0]) if nrows else 0
    origin = list(range(nrows))
    pivot_cols: list[int] = []
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, nrows) if rows[i][c]), None)
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        origin[r], origin[piv] = origin[piv], origin[r]
        inv = 1 / rows[r][c]
        rows[r] = [v * inv for v in rows[r]]
        for i in range(nrows):
            if i != r and rows[i][c]:
                factor = rows[i][c]
                rows[i] = [a - factor * b for a, b in zip(rows[i], rows[r])]
        pivot_cols.append(c)
        r += 1
        if r == nrows:
            break
    return r, pivot_cols, origin[:r], rows[:r]


def rank_over_rationals(M: MonomialMatrix) -> int:
    """Exact rank of the value matrix."""
    rank, _, _, _ = _row_reduce(M.entries)
    return rank


def minor_determinant(M: MonomialMatrix, rows: Sequence[int]) -> int:
    """Exact determinant of the square minor on the given row subset."""
    idx = [int(i) for i in rows]
    _, ncols = M.shape
    if len(idx) != ncols:
        raise ContractViolation(
            f"minor needs {ncols} rows to be square, got {len(idx)}"
        )
    return integer_determinant([M.entries[i] for i in idx])


def p_adic_valuation(n: int, p: int):
    """Exponent of the prime p in n; infinite for n = 0."""
    p = int(p)
    if not is_prime(p):
        raise ContractViolation(f"{p} is not prime")
    n = int(n)
    if n == 0:
        return INFINITE
    v = 0
    while n % p == 0:
        n //= p
        v += 1
    return v


def prime_power_valuation(n: int, p: int, j: int):
    """Largest k with (p^j)^k dividing n; infinite for n = 0."""
    v = p_adic_valuation(n, p)
    return INFINITE if v == INFINITE else v // j


# -- divisibility certificates -------------------------------------------------


@dataclass(frozen=True)
class CheckedMinor:
    """One verified row subset: its valuation and the exact column relation."""

    rows: tuple
    determinant_zero: bool
    valuation: int | None
    relation_ok: bool


@dataclass(frozen=True)
class DivisibilityCertificate:
    """Constructive witness that q^lam divides every full minor.

    The witness data is the inverse z of the selected coefficient, the
    integer lift s with z*coefficient - q*lift = 1, the per-column
    multiplicities, and the reduced matrix left after factoring the
    modulus out column by column.  det_transform is the determinant of
    the column-operation matrix; soundness requires it to be a unit mod
    the modulus (it equals 1 in every regime the pipeline uses).
    """

    base_modulus: int
    prime: int
    prime_exponent: int
    lam: int
    certified_divisor: int
    shift: tuple
    coefficient: int
    inverse: int
    lift: int
    multiplicities: tuple
    det_transform: int
    columns: tuple
    row_points: tuple
    reduced_entries: tuple
    checked_minors: tuple


def select_shift(g: IntegerPolynomial, q: int) -> tuple:
    """Shift-vector policy: the constant slot if its coefficient is a unit
    mod q, else one of the two pure top-degree slots."""
    if math.gcd(q, g.constant_term()) == 1:
        return (0, 0, 0)
    l = g.total_degree()
    for t in ((0, l, 0), (0, 0, l)):
        c = g.terms.get(t, 0)
        if c and math.gcd(q, c) == 1:
            return t
    raise ContractViolation(
        f"no admissible shift for modulus {q}: neither the constant term "
        "nor a pure top-degree coefficient is a unit"
    )


def congruence_reduce(
    M: MonomialMatrix,
    g: IntegerPolynomial,
    q: int,
    t: Sequence[int],
    E: ExponentSet,
    S,
    *,
    samples: int = 32,
    rng: random.Random | None = None,
    extra_subsets: Sequence[Sequence[int]] = (),
) -> DivisibilityCertificate:
    """Factor q^mu out of each restricted column, certifying q^lam | minors.

    Requires a prime-power modulus, rows satisfying the congruence, and a
    shift slot whose coefficient in g is a unit mod q.  Each restricted
    column is replaced, by explicit column operations, with the values of
    a polynomial all of whose coefficients are divisible by q^mu; the
    certificate records enough data to re-verify every step, and checks
    sampled full minors against the reduced matrix exactly.
    """
    decomp = prime_power_decompose(q)
    if decomp is None:
        raise ContractViolation(f"modulus {q} is not a prime power")
    p, j = decomp
    t = tuple(int(v) for v in t)
    if len(t) != 3 or any(v < 0 for v in t):
        raise ContractViolation(f"shift {t} must be three nonnegative integers")
    if t[0] != 0:
        raise ContractViolation("shift must have first coordinate zero")
    if g.nvars != 3 or g.depends_on(0):
        raise ContractViolation("side polynomial must be in (x2, x3) only")
    if M.cols != E.members:
        raise ContractViolation("matrix columns do not match the exponent set")
    c_t = g.terms.get(t, 0)
    if math.gcd(c_t, q) != 1:
        raise ContractViolation(
            f"coefficient {c_t} of the shift slot {t} is not a unit mod {q}"
        )
    for pt in M.rows:
        if g.evaluate(pt) % q != 0:
            raise ContractViolation(f"point {pt} violates the congruence mod {q}")

    z = pow(c_t, -1, q)
    s = (z * c_t - 1) // q
    if z * c_t - q * s != 1:
        raise SoundnessError("inverse-lift identity failed")
    gq = g * z - IntegerPolynomial.monomial(3, t, q * s)
    if gq.terms.get(t, 0) != 1:
        raise SoundnessError("reduced side polynomial lost its unit slot")

    col_pos = {e: i for i, e in enumerate(E.members)}
    mus = tuple(
        (e, shift_multiplicity(e, t, E, S)) for e in E.restricted_members
    )
    lam = sum(mu for _, mu in mus)

    nrows, ncols = M.shape
    gq_powers: dict[int, IntegerPolynomial] = {0: IntegerPolynomial.constant(3, 1)}

    def gq_power(k: int) -> IntegerPolynomial:
        got = gq_powers.get(k)
        if got is None:
            got = gq_power(k - 1) * gq
            gq_powers[k] = got
        return got

    # column-operation matrix, starting from the identity
    A = [[1 if r == c else 0 for c in range(ncols)] for r in range(ncols)]
    reduced = [list(row) for row in M.entries]
    for e, mu in mus:
        i = col_pos[e]
        if mu == 0:
            continue
        shifted = tuple(a - mu * b for a, b in zip(e, t))
        replacement = IntegerPolynomial.monomial(3, shifted) * gq_power(mu)
        coeffs = replacement.terms
        for u in coeffs:
            if u not in E.restricted_set:
                raise SoundnessError(
                    f"replacement column for {e} leaves the restricted set at {u}"
                )
        for r in range(ncols):
            A[r][i] = 0
        for u, cu in coeffs.items():
            A[col_pos[u]][i] = cu
        divisor = q ** mu
        for row_idx in range(nrows):
            val = sum(
                cu * M.entries[row_idx][col_pos[u]] for u, cu in coeffs.items()
            )
            if val % divisor:
                raise SoundnessError(
                    f"column value {val} for {e} is not divisible by {q}^{mu}"
                )
            reduced[row_idx][i] = val // divisor

    det_transform = integer_determinant(A)
    if math.gcd(det_transform, q) != 1:
        raise SoundnessError(
            "column-operation determinant shares a factor with the modulus"
        )

    reduced_entries = tuple(tuple(row) for row in reduced)

    checked: list[CheckedMinor] = []
    if nrows >= ncols and ncols >= 1:
        if rng is None:
            rng = random.Random(0)
        subsets: list[tuple] = [tuple(range(ncols))]
        for extra in extra_subsets:
            subsets.append(tuple(sorted(int(v) for v in extra)))
        for _ in range(samples):
            subsets.append(tuple(sorted(rng.sample(range(nrows), ncols))))
        seen = set()
        divisor = q ** lam
        for sub in subsets:
            if sub in seen:
                continue
            seen.add(sub)
            if len(sub) != ncols or any(not 0 <= i < nrows for i in sub):
                raise ContractViolation(f"bad row subset {sub}")
            delta = integer_determinant([M.entries[i] for i in sub])
            delta_red = integer_determinant([reduced_entries[i] for i in sub])
            if delta * det_transform != divisor * delta_red:
                raise SoundnessError(
                    f"determinant relation failed on rows {sub}"
                )
            if delta == 0:
                checked.append(CheckedMinor(sub, True, None, True))
            else:
                v = prime_power_valuation(delta, p, j)
                if v < lam:
                    raise SoundnessError(
                        f"minor on rows {sub} has valuation {v} below {lam}"
                    )
                checked.append(CheckedMinor(sub, False, v, True))

    return DivisibilityCertificate(
        base_modulus=q,
        prime=p,
        prime_exponent=j,
        lam=lam,
        certified_divisor=q ** lam,
        shift=t,
        coefficient=c_t,
        inverse=z,
        lift=s,
        multiplicities=mus,
        det_transform=det_transform,
        columns=E.members,
        row_points=M.rows,
        reduced_entries=reduced_entries,
        checked_minors=tuple(checked),
    )


def congruence_certificates(
    M: MonomialMatrix,
    g: IntegerPolynomial,
    q: int,
    E: ExponentSet,
    S,
    *,
    samples: int = 32,
    rng: random.Random | None = None,
    extra_subsets: Sequence[Sequence[int]] = (),
) -> tuple:
    """One certificate per prime power dividing q; empty for q = 1.

    The certified divisors multiply: their product divides every full
    minor, because valuations at distinct primes are independent.
    """
    q = int(q)
    if q < 1:
        raise ContractViolation("modulus must be a positive integer")
    if q == 1:
        return ()
    out = []
    for p, j in sorted(factorize(q).items()):
        qp = p ** j
        t = select_shift(g, qp)
        out.append(
            congruence_reduce(
                M, g, qp, t, E, S,
                samples=samples, rng=rng, extra_subsets=extra_subsets,
            )
        )
    return tuple(out)


# -- kernel polynomials ---------------------------------------------------------


@dataclass(frozen=True)
class AuxiliaryPolynomial:
    """Nonzero integer polynomial vanishing at all its listed points."""

    poly: IntegerPolynomial
    vanishes_on: tuple
    coprime_to_f: bool
    degree_bound: int
    role: str = "class-cover"


def null_space_polynomial(M: MonomialMatrix, f: IntegerPolynomial) -> AuxiliaryPolynomial:
    """Primitive integer kernel vector of M, read as a polynomial.

    The kernel is taken for the first free column, denominators cleared,
    content divided out, leading sign normalized.  Vanishing at every row
    point is re-verified exactly; coprimality with f is checked and
    recorded.
    """
    rank, pivot_cols, _, rref = _row_reduce(M.entries)
    ncols = len(M.cols)
    if rank >= ncols:
        raise ContractViolation("no null vector: the matrix has full column rank")
    pivot_set = set(pivot_cols)
    free = next(c for c in range(ncols) if c not in pivot_set)
    vec = [Fraction(0)] * ncols
    vec[free] = Fraction(1)
    for k, c in enumerate(pivot_cols):
        vec[c] = -rref[k][free]
    denom = math.lcm(*(v.denominator for v in vec))
    ints = [int(v * denom) for v in vec]
    content = math.gcd(*ints)
    if content:
        ints = [v // content for v in ints]
    lead = next(v for v in ints if v)
    if lead < 0:
        ints = [-v for v in ints]

    poly = IntegerPolynomial(3, {e: c for e, c in zip(M.cols, ints) if c})
    if poly.is_zero:
        raise SoundnessError("kernel extraction produced the zero polynomial")
    for pt in M.rows:
        if poly.evaluate(pt) != 0:
            raise SoundnessError(f"kernel polynomial fails to vanish at {pt}")
    return AuxiliaryPolynomial(
        poly=poly,
        vanishes_on=M.rows,
        coprime_to_f=is_coprime(poly, f),
        degree_bound=poly.total_degree(),
    )


# -- the cover pipeline -----------------------------------------------------------


@dataclass(frozen=True)
class FalsificationRecord:
    """A nonzero full minor where the vanishing argument demanded zero."""

    label: tuple
    rows: tuple
    determinant: int
    column_count: int
    row_count: int
    sqrt_e_times_r: float
    threshold: float
    valuations: tuple  # (prime, exponent, lam, valuation or None)
    residue_valuations: tuple = ()  # (residue prime, exact valuation)


@dataclass(frozen=True)
class ClassOutcome:
    label: tuple
    points: tuple
    row_count: int
    column_count: int
    rank: int
    outcome: str  # 'aux' or 'falsified'
    aux_index: int | None
    certificates: tuple
    falsification: FalsificationRecord | None


@dataclass(frozen=True)
class CoverReport:
    """Everything the cover construction produced, exactly as computed."""

    branch: str
    hypothesis_route: str
    params: MethodParams
    threshold: object
    residue_primes: tuple
    residue_product: int
    cutoff: ExactLog
    floor_constant: int
    set_size: int
    degree_cap: int
    classes: tuple
    auxiliaries: tuple
    leftover: tuple
    falsifications: tuple
    coverage_complete: bool
    counts: Mapping[str, int]


def _degree_cap(box: BoxBounds, cutoff: ExactLog) -> int:
    bmin = box.bmin
    if box.integral and cutoff.height is not None:
        d, h = 0, 1
        while h * bmin <= cutoff.height:
            h *= bmin
            d += 1
        return d
    with workprec():
        return int(math.floor(float(cutoff.value / mplog(bmin))))


def _hypothesis_route(g: IntegerPolynomial, q: int, box: BoxBounds) -> str:
    c0 = g.constant_term()
    if math.gcd(q, c0) == 1:
        return "constant-term"
    if box.equal:
        l = g.total_degree()
        g0 = top_degree_part(g)
        a = g0.terms.get((0, l, 0), 0)
        b = g0.terms.get((0, 0, l), 0)
        if math.gcd(q, c0, a, b) == 1:
            return "top-degree"
    raise HypothesisViolation(
        "modulus shares a factor with the side polynomial's constant term, "
        "and the equal-box top-degree fallback does not apply"
    )


def aux_pipeline(
    f: IntegerPolynomial,
    g: IntegerPolynomial,
    q: int,
    box: BoxBounds,
    residues: ResidueData | None,
    epsilon: float,
    points: Sequence,
    *,
    order: MonomialOrder | None = None,
    seed: int = 0,
    minor_samples: int = 32,
    floor_const: int | None = None,
    scale_override=None,
    hard_cap: int = 512,
) -> CoverReport:
    """Cover the point set by few low-degree curves, with certificates.

    Splits the points into residue classes, picks one cutoff large enough
    that the column count beats the cover threshold, and per class either
    extracts a kernel polynomial vanishing on the whole class or reports
    the nonzero minor that falsified the construction.  A nonvanishing
    partial derivative of f is always appended so that singular surface
    points are covered too.
    """
    if f.nvars != 3 or g.nvars != 3:
        raise ContractViolation("pipeline is defined for three variables")
    if f.is_zero or f.is_constant:
        raise ContractViolation("surface polynomial must be non-constant")
    q = int(q)
    if q < 1:
        raise ContractViolation("modulus must be a positive integer")

    route = _hypothesis_route(g, q, box)

    pts = tuple(tuple(int(x) for x in p) for p in points)
    for pt in pts:
        if f.evaluate(pt) != 0:
            raise ContractViolation(f"point {pt} is not on the surface")
        if g.evaluate(pt) % q != 0:
            raise ContractViolation(f"point {pt} violates the congruence mod {q}")
        if any(abs(x) > b for x, b in zip(pt, box.bounds)):
            raise ContractViolation(f"point {pt} leaves the box")

    if residues is None:
        residues = ResidueData(())
    for rp in residues.primes:
        if math.gcd(rp, q) != 1:
            raise HypothesisViolation(
                f"residue prime {rp} shares a factor with the modulus {q}"
            )

    if order is None:
        order = MonomialOrder.weighted(box.bounds)
    params = compute_params(f, g, q, box, order, epsilon)
    threshold = params.cover_scale_eps if scale_override is None else to_mpf(scale_override)

    point_set = PointSet(tuple(sorted(pts)), box, False)
    if threshold <= 1:
        branch = "single-cover"
        r = 1
        classes = {(): point_set} if pts else {}
        excluded: tuple = ()
    else:
        branch = "standard"
        r = residues.product
        classes = residue_split(point_set, residues, f)
        excluded = split_leftover(point_set, classes)

    set_cache: dict = {}

    def staircase(cutoff: ExactLog) -> ExponentSet:
        key = cutoff.height if cutoff.height is not None else cutoff.value
        got = set_cache.get(key)
        if got is None:
            got = build_exponent_set(cutoff, params.dominant, box, order)
            set_cache[key] = got
        return got

    def constraint(cutoff: ExactLog) -> bool:
        count = len(staircase(cutoff))
        with workprec():
            return to_mpf(count) * r * r > threshold * threshold

    c_floor = floor_const if floor_const is not None else default_floor_constant(epsilon)
    if box.equal and box.integral:
        cutoff = choose_Y(
            "equal-box", constraint, box=box, floor_const=c_floor, hard_cap=hard_cap
        )
    else:
        with workprec():
            low = max(params.log_top_height, c_floor * mplog(box.bmax))
        cutoff = None
        for _ in range(24):
            try:
                cutoff = choose_Y(
                    "grid-scan", constraint, box=box,
                    floor_const=c_floor, grid_low=low,
                )
                break
            except ContractViolation:
                low = low * 2
        if cutoff is None:
            raise ContractViolation(
                "no cutoff satisfied the cover constraint after repeated doubling"
            )

    E_set = staircase(cutoff)
    e_count = len(E_set)
    cap = _degree_cap(box, cutoff)
    S = params.side
    rng = random.Random(seed)

    auxiliaries: list[AuxiliaryPolynomial] = []
    outcomes: list[ClassOutcome] = []
    falsifications: list[FalsificationRecord] = []
    leftover: list = list(excluded)
    counts = {
        "classes": len(classes),
        "points": len(pts),
        "matrices_built": 0,
        "rank_computations": 0,
        "certificates": 0,
        "minors_checked": 0,
    }

    for label in sorted(classes):
        class_points = classes[label].points
        M = build_matrix(class_points, E_set)
        counts["matrices_built"] += 1
        rank, _, pivot_rows, _ = _row_reduce(M.entries)
        counts["rank_computations"] += 1
        J = len(class_points)

        certs: tuple = ()
        if rank < e_count:
            aux = null_space_polynomial(M, f)
            if aux.poly.total_degree() > cap:
                raise SoundnessError(
                    "kernel polynomial exceeds the cutoff degree cap"
                )
            if q > 1 and J >= e_count:
                certs = congruence_certificates(
                    M, g, q, E_set, S, samples=minor_samples, rng=rng
                )
            auxiliaries.append(aux)
            outcomes.append(
                ClassOutcome(
                    label=label,
                    points=class_points,
                    row_count=J,
                    column_count=e_count,
                    rank=rank,
                    outcome="aux",
                    aux_index=len(auxiliaries) - 1,
                    certificates=certs,
                    falsification=None,
                )
            )
        else:
            delta = minor_determinant(M, pivot_rows[:e_count])
            if delta == 0:
                raise SoundnessError("full-rank pivot minor evaluated to zero")
            if q > 1:
                certs = congruence_certificates(
                    M, g, q, E_set, S,
                    samples=minor_samples, rng=rng,
                    extra_subsets=(pivot_rows[:e_count],),
                )
            vals = tuple(
                (c.prime, c.prime_exponent, c.lam,
                 prime_power_valuation(delta, c.prime, c.prime_exponent))
                for c in certs
            )
            rvals = tuple(
                (rp, p_adic_valuation(delta, rp)) for rp in residues.primes
            )
            with workprec():
                sqrt_er = float(to_mpf(e_count) ** to_mpf(0.5) * r)
            rec = FalsificationRecord(
                label=label,
                rows=tuple(pivot_rows[:e_count]),
                determinant=delta,
                column_count=e_count,
                row_count=J,
                sqrt_e_times_r=sqrt_er,
                threshold=float(threshold),
                valuations=vals,
                residue_valuations=rvals,
            )
            falsifications.append(rec)
            leftover.extend(class_points)
            outcomes.append(
                ClassOutcome(
                    label=label,
                    points=class_points,
                    row_count=J,
                    column_count=e_count,
                    rank=rank,
                    outcome="falsified",
                    aux_index=None,
                    certificates=certs,
                    falsification=rec,
                )
            )
        counts["certificates"] += len(certs)
        counts["minors_checked"] += sum(len(c.checked_minors) for c in certs)

    deriv_index = next(
        (i for i in range(3) if not f.partial_derivative(i).is_zero), None
    )
    if deriv_index is None:
        raise ContractViolation("surface polynomial has no nonzero derivative")
    deriv = f.partial_derivative(deriv_index)
    auxiliaries.append(
        AuxiliaryPolynomial(
            poly=deriv,
            vanishes_on=(),
            coprime_to_f=is_coprime(deriv, f),
            degree_bound=deriv.total_degree(),
            role="singular-cover",
        )
    )

    leftover_set = set(leftover)
    coverage_complete = all(
        pt in leftover_set or any(a.poly.evaluate(pt) == 0 for a in auxiliaries)
        for pt in pts
    )

    return CoverReport(
        branch=branch,
        hypothesis_route=route,
        params=params,
        threshold=threshold,
        residue_primes=residues.primes,
        residue_product=r,
        cutoff=cutoff,
        floor_constant=c_floor,
        set_size=e_count,
        degree_cap=cap,
        classes=tuple(outcomes),
        auxiliaries=tuple(auxiliaries),
        leftover=tuple(sorted(leftover_set)),
        falsifications=tuple(falsifications),
        coverage_complete=coverage_complete,
        counts=counts,
    )
