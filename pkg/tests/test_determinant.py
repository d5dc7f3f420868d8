"""Monomial matrices, exact minors, divisibility certificates, kernel covers."""

import math
import random

import pytest

from detsieve.determinant import (
    AuxiliaryPolynomial,
    MonomialMatrix,
    aux_pipeline,
    build_matrix,
    congruence_certificates,
    congruence_reduce,
    integer_determinant,
    minor_determinant,
    null_space_polynomial,
    p_adic_valuation,
    prime_power_valuation,
    rank_over_rationals,
    select_shift,
)
from detsieve.enumeration import ResidueData, SideCondition, enumerate_points
from detsieve.errors import ContractViolation, HypothesisViolation, SoundnessError
from detsieve.exponents import (
    INFINITE,
    BoxBounds,
    ExactLog,
    build_exponent_set,
    side_log_height,
)
from detsieve.polynomials import IntegerPolynomial, MonomialOrder

P = IntegerPolynomial


def staircase(base, n, m=(2, 0, 0)):
    box = BoxBounds(base, base, base)
    return build_exponent_set(
        ExactLog.power(base, n), m, box, MonomialOrder.weighted(box.bounds)
    )


def quadric_instance():
    """Eight symmetric points of a rank-deficient congruence instance."""
    f = P(3, {(2, 0, 0): 5, (0, 2, 0): 1, (0, 0, 2): 1, (0, 0, 0): -6})
    g = P(3, {(0, 2, 0): 1, (0, 0, 2): 1, (0, 0, 0): -6})
    box = BoxBounds(2, 2, 2)
    pts = enumerate_points(f, SideCondition(g, 5), box)
    return f, g, box, pts


def rich_instance():
    """Thirty-two points giving a full-rank matrix with nonzero minors."""
    f = P(3, {(2, 0, 0): 5, (0, 2, 0): 1, (0, 0, 2): 1, (0, 0, 0): -174})
    g = P(3, {(0, 2, 0): 1, (0, 0, 2): 1, (0, 0, 0): -174})
    box = BoxBounds(13, 13, 13)
    pts = enumerate_points(f, SideCondition(g, 5), box)
    return f, g, box, pts


def grid_matrix(entries, cols=None):
    """Wrap a raw integer grid for the rank and minor helpers."""
    rows = tuple((i, 0, 0) for i in range(len(entries)))
    if cols is None:
        cols = tuple((i, 0, 0) for i in range(len(entries[0])))
    return MonomialMatrix(rows, tuple(cols), tuple(tuple(r) for r in entries))


class TestBuildMatrix:
    def test_single_point_row(self):
        E = staircase(3, 2)
        M = build_matrix([(1, 2, 3)], E)
        row = {e: M.entry(0, i) for i, e in enumerate(M.cols)}
        assert row[(0, 0, 0)] == 1
        assert row[(1, 0, 0)] == 1
        assert row[(0, 1, 1)] == 6
        assert row[(0, 2, 0)] == 4
        assert row[(0, 0, 2)] == 9

    def test_origin_row(self):
        E = staircase(3, 2)
        M = build_matrix([(0, 0, 0)], E)
        for i, e in enumerate(M.cols):
            assert M.entry(0, i) == (1 if e == (0, 0, 0) else 0)

    def test_first_axis_zero_kills_column(self):
        E = staircase(3, 2)
        pts = [(0, 1, 2), (0, -1, 1), (0, 3, 3)]
        M = build_matrix(pts, E)
        i = M.cols.index((1, 0, 0))
        assert all(M.entry(j, i) == 0 for j in range(len(pts)))

    def test_empty_points_rejected(self):
        with pytest.raises(ContractViolation):
            build_matrix([], staircase(3, 2))


class TestRankAndMinors:
    def test_rank_of_repeated_rows(self):
        assert rank_over_rationals(grid_matrix([[1, 1], [1, 1]])) == 1

    def test_rank_of_identity(self):
        assert rank_over_rationals(grid_matrix([[1, 0, 0], [0, 1, 0], [0, 0, 1]])) == 3

    def test_underdetermined_instance_rank(self):
        _, _, _, pts = quadric_instance()
        E = staircase(2, 3)
        M = build_matrix(pts, E)
        assert len(pts) == 8
        assert len(E.members) == 16
        assert rank_over_rationals(M) == 8

    def test_two_by_two_minor(self):
        assert minor_determinant(grid_matrix([[2, 3], [5, 7]]), (0, 1)) == -1

    def test_repeated_row_minor_vanishes(self):
        assert minor_determinant(grid_matrix([[2, 3], [5, 7]]), (0, 0)) == 0

    def test_vandermonde_minor(self):
        M = grid_matrix([[1, 1, 1], [1, 2, 4], [1, 3, 9]])
        assert minor_determinant(M, (0, 1, 2)) == 2

    def test_non_square_selection_rejected(self):
        M = grid_matrix([[1, 1, 1], [1, 2, 4], [1, 3, 9]])
        with pytest.raises(ContractViolation):
            minor_determinant(M, (0, 1))

    def test_matches_cofactor_expansion(self):
        def cofactor(rows):
            if len(rows) == 1:
                return rows[0][0]
            total = 0
            for i, head in enumerate(rows[0]):
                rest = [r[:i] + r[i + 1:] for r in rows[1:]]
                total += (-1) ** i * head * cofactor(rest)
            return total

        rng = random.Random(1009)
        for _ in range(1000):
            n = rng.randrange(1, 6)
            rows = [[rng.randrange(-9, 10) for _ in range(n)] for _ in range(n)]
            assert integer_determinant(rows) == cofactor(rows)

    def test_zero_column_short_circuit(self):
        assert integer_determinant([[0, 3], [0, 7]]) == 0
        assert integer_determinant([[0, 1], [1, 0]]) == -1


class TestValuations:
    def test_frozen_values(self):
        assert p_adic_valuation(48, 2) == 4
        assert p_adic_valuation(5**4 * 7, 5) == 4
        assert p_adic_valuation(0, 3) == INFINITE

    def test_composite_base_rejected(self):
        with pytest.raises(ContractViolation):
            p_adic_valuation(48, 6)

    def test_prime_power_scaling(self):
        assert prime_power_valuation(5**4 * 7, 5, 2) == 2
        assert prime_power_valuation(5**4 * 7, 5, 3) == 1
        assert prime_power_valuation(0, 5, 2) == INFINITE


class TestSelectShift:
    def test_unit_constant_prefers_origin(self):
        g = P(3, {(0, 2, 0): 1, (0, 0, 2): 1, (0, 0, 0): -6})
        assert select_shift(g, 5) == (0, 0, 0)

    def test_falls_back_to_second_axis(self):
        g = P(3, {(0, 2, 0): 1, (0, 0, 2): -1, (0, 0, 0): -20})
        assert select_shift(g, 5) == (0, 2, 0)

    def test_falls_back_to_third_axis(self):
        g = P(3, {(0, 2, 0): 5, (0, 0, 2): -1, (0, 0, 0): -20})
        assert select_shift(g, 5) == (0, 0, 2)

    def test_no_admissible_shift(self):
        g = P(3, {(0, 2, 0): 5, (0, 0, 2): -5, (0, 0, 0): -10})
        with pytest.raises(ContractViolation):
            select_shift(g, 5)


class TestCongruenceReduce:
    def test_frozen_lambda_four(self):
        _, g, _, pts = quadric_instance()
        E = staircase(2, 3)
        M = build_matrix(pts, E)
        cert = congruence_reduce(M, g, 5, (0, 0, 0), E, ExactLog.power(2, 2))
        assert cert.lam == 4
        assert cert.certified_divisor == 5**4
        assert cert.det_transform == 1
        # Bezout data is exact
        assert cert.inverse * cert.coefficient - 5 * cert.lift == 1
        # underdetermined: no full minors exist to sample
        assert cert.checked_minors == ()

    def test_tiny_cutoff_gives_trivial_certificate(self):
        _, g, _, pts = quadric_instance()
        E = staircase(2, 1)
        M = build_matrix(pts, E)
        cert = congruence_reduce(M, g, 5, (0, 0, 0), E, ExactLog.power(2, 2))
        assert cert.lam == 0
        assert cert.certified_divisor == 1

    def test_saturated_quadratic_shift(self):
        # side height equals shift height: only the staircase walk
        # limits each column, so the multiplicity is 1 exactly on the
        # columns with a full quadratic step available
        q, c = 5, 2
        f = P(3, {(2, 0, 0): q, (0, 2, 0): 1, (0, 0, 2): -1, (0, 0, 0): -q * c * c})
        g = P(3, {(0, 2, 0): 1, (0, 0, 2): -1, (0, 0, 0): -q * c * c})
        box = BoxBounds(4, 4, 4)
        pts = enumerate_points(f, SideCondition(g, q), box)
        assert len(pts) == 42
        E = staircase(4, 3)
        M = build_matrix(pts, E)
        cert = congruence_reduce(
            M, g, q, (0, 2, 0), E, ExactLog.power(4, 2),
            samples=8, rng=random.Random(3),
        )
        assert cert.lam == 4
        for e, mu in cert.multiplicities:
            assert mu == (1 if e[1] >= 2 else 0)
        assert all(m.relation_ok for m in cert.checked_minors)

    def test_full_rank_instance_minors_validate(self):
        _, g, _, pts = rich_instance()
        E = staircase(13, 2)
        M = build_matrix(pts, E)
        assert len(pts) == 32
        assert rank_over_rationals(M) == 9
        S = side_log_height(g, BoxBounds(13, 13, 13))[1]
        cert = congruence_reduce(
            M, g, 5, (0, 0, 0), E, S, samples=16, rng=random.Random(7)
        )
        assert cert.lam == 1
        nonzero = [m for m in cert.checked_minors if not m.determinant_zero]
        assert nonzero
        for m in cert.checked_minors:
            assert m.relation_ok
            if not m.determinant_zero:
                assert m.valuation >= cert.lam
                # cross-check one exact valuation against the raw minor
                delta = minor_determinant(M, m.rows)
                assert delta % 5**m.valuation == 0
                assert delta % 5 ** (m.valuation + 1) != 0

    def test_synthetic_two_by_two_leg(self):
        # columns built from explicit unit-inverse multiples of the side
        # polynomial: the exact determinant picks up both factors
        g = P(3, {(0, 2, 0): 1, (0, 0, 2): 1, (0, 0, 0): -6})
        q, c = 5, -6
        z = pow(c, -1, q)
        s = (z * c - 1) // q
        assert z * c - q * s == 1
        gq = {e: z * v for e, v in g.terms.items()}
        gq[(0, 0, 0)] -= q * s

        def gq_at(pt):
            return sum(v * pt[1] ** e[1] * pt[2] ** e[2] for e, v in gq.items())

        p1, p2 = (0, 1, 0), (0, 0, 1)
        for pt in (p1, p2):
            assert g.evaluate(pt) % q == 0
        grid = [[gq_at(p1), p1[1] * gq_at(p1)], [gq_at(p2), p2[1] * gq_at(p2)]]
        det = integer_determinant(grid)
        assert det != 0
        assert det % q**2 == 0

    def test_composite_modulus_rejected(self):
        _, g, _, pts = quadric_instance()
        E = staircase(2, 3)
        M = build_matrix(pts, E)
        with pytest.raises(ContractViolation):
            congruence_reduce(M, g, 6, (0, 0, 0), E, ExactLog.power(2, 2))

    def test_non_unit_coefficient_rejected(self):
        g = P(3, {(0, 2, 0): 1, (0, 0, 2): 1, (0, 0, 0): -5})
        pts = [(0, 0, 0), (0, 1, 2), (0, 2, 1)]
        assert all(g.evaluate(p) % 5 == 0 for p in pts)
        E = staircase(2, 3)
        M = build_matrix(pts, E)
        with pytest.raises(ContractViolation, match="not a unit"):
            congruence_reduce(M, g, 5, (0, 0, 0), E, ExactLog.power(2, 2))

    def test_violating_point_named(self):
        _, g, _, pts = quadric_instance()
        bad = (1, 1, 1)
        E = staircase(2, 3)
        M = build_matrix(list(pts) + [bad], E)
        with pytest.raises(ContractViolation, match=r"\(1, 1, 1\)"):
            congruence_reduce(M, g, 5, (0, 0, 0), E, ExactLog.power(2, 2))

    def test_first_axis_shift_rejected(self):
        _, g, _, pts = quadric_instance()
        E = staircase(2, 3)
        M = build_matrix(pts, E)
        with pytest.raises(ContractViolation):
            congruence_reduce(M, g, 5, (1, 0, 0), E, ExactLog.power(2, 2))


class TestCompositeCertificates:
    def test_two_prime_factors(self):
        g = P(3, {(0, 2, 0): 1, (0, 0, 2): 1, (0, 0, 0): -26})
        box = BoxBounds(6, 6, 6)
        pts = [
            (x1, x2, x3)
            for x1 in range(-6, 7)
            for x2, x3 in ((5, 1), (5, -1), (-5, 1), (-5, -1),
                           (1, 5), (1, -5), (-1, 5), (-1, -5))
        ]
        assert all(g.evaluate(p) % 15 == 0 for p in pts)
        E = staircase(6, 2)
        M = build_matrix(pts, E)
        S = side_log_height(g, box)[1]
        certs = congruence_certificates(M, g, 15, E, S, rng=random.Random(11))
        assert len(certs) == 2
        assert [c.prime for c in certs] == [3, 5]
        assert all(c.base_modulus in (3, 5) for c in certs)
        divisor = math.prod(c.certified_divisor for c in certs)
        for m in certs[0].checked_minors:
            if not m.determinant_zero:
                delta = minor_determinant(M, m.rows)
                assert delta % divisor == 0

    def test_unit_modulus_no_certificates(self):
        g = P(3, {(0, 2, 0): 1, (0, 0, 2): 1, (0, 0, 0): -6})
        E = staircase(2, 2)
        M = build_matrix([(0, 1, 0)], E)
        S = side_log_height(g, BoxBounds(2, 2, 2))[1]
        assert congruence_certificates(M, g, 1, E, S) == ()


class TestNullSpace:
    def test_two_column_kernel(self):
        M = MonomialMatrix(
            rows=((1, 0, 0), (1, 2, 2)),
            cols=((0, 0, 0), (1, 0, 0)),
            entries=((1, 1), (1, 1)),
        )
        f = P(3, {(0, 2, 0): 1, (0, 0, 2): 1, (0, 0, 0): -6})
        aux = null_space_polynomial(M, f)
        assert aux.poly.terms in (
            {(0, 0, 0): 1, (1, 0, 0): -1},
            {(0, 0, 0): -1, (1, 0, 0): 1},
        )
        assert aux.coprime_to_f

    def test_full_rank_rejected(self):
        M = grid_matrix([[1, 0], [0, 1]])
        with pytest.raises(ContractViolation, match="no null vector"):
            null_space_polynomial(M, P(3, {(2, 0, 0): 1, (0, 0, 0): -1}))

    def test_quadric_instance_kernel(self):
        f, _, _, pts = quadric_instance()
        E = staircase(2, 3)
        M = build_matrix(pts, E)
        aux = null_space_polynomial(M, f)
        assert aux.poly.terms == {(0, 1, 1): 1}
        assert aux.coprime_to_f
        for pt in pts:
            assert aux.poly.evaluate(pt) == 0

    def test_support_and_content(self):
        f, _, _, pts = rich_instance()
        E = staircase(13, 3)
        head = list(pts)[:10]  # few enough rows to force a kernel
        M = build_matrix(head, E)
        aux = null_space_polynomial(M, f)
        members = set(E.members)
        assert set(aux.poly.terms) <= members
        assert math.gcd(*aux.poly.terms.values()) == 1
        for pt in head:
            assert aux.poly.evaluate(pt) == 0


class TestAuxPipeline:
    def test_standard_branch_emits_cover(self):
        f, g, box, pts = quadric_instance()
        rep = aux_pipeline(f, g, 5, box, ResidueData(()), 0.5, pts, floor_const=10)
        assert rep.branch == "standard"
        assert rep.hypothesis_route == "constant-term"
        assert [c.outcome for c in rep.classes] == ["aux"]
        assert [a.role for a in rep.auxiliaries] == ["class-cover", "singular-cover"]
        assert rep.set_size == 121
        assert rep.coverage_complete
        assert rep.leftover == ()
        assert rep.falsifications == ()
        cover = rep.auxiliaries[0]
        for pt in pts:
            assert cover.poly.evaluate(pt) == 0

    def test_singular_cover_is_partial_derivative(self):
        f, g, box, pts = quadric_instance()
        rep = aux_pipeline(f, g, 5, box, ResidueData(()), 0.5, pts, floor_const=10)
        last = rep.auxiliaries[-1]
        assert last.role == "singular-cover"
        assert last.poly.terms in (
            f.partial_derivative(i).terms for i in range(3)
        )

    def test_falsified_branch_reports_exact_minor(self):
        f, g, box, pts = rich_instance()
        rep = aux_pipeline(
            f, g, 5, box, ResidueData(()), 0.5, pts,
            scale_override=2, floor_const=2,
        )
        assert [c.outcome for c in rep.classes] == ["falsified"]
        assert rep.set_size == 9
        assert len(rep.falsifications) == 1
        rec = rep.falsifications[0]
        assert rec.determinant != 0
        for prime, _, lam, val in rec.valuations:
            assert prime == 5
            assert val >= lam
        assert set(rep.leftover) == set(pts)
        assert rep.coverage_complete
        # certificates still emitted for the full-rank class
        (cls,) = rep.classes
        assert cls.certificates
        assert cls.certificates[0].lam == 1

    def test_single_cover_branch(self):
        f, g, box, pts = rich_instance()
        rep = aux_pipeline(
            f, g, 5, box, ResidueData(()), 0.5, pts, scale_override=0.5
        )
        assert rep.branch == "single-cover"
        assert len(rep.classes) == 1
        assert rep.coverage_complete

    def test_residue_split_classes(self):
        f, g, box, pts = quadric_instance()
        rep = aux_pipeline(f, g, 5, box, ResidueData((3,)), 0.5, pts, floor_const=10)
        assert rep.residue_product == 3
        assert len(rep.classes) == 8
        covered = set()
        for cls in rep.classes:
            covered.update(cls.points)
        assert covered == set(pts)
        assert rep.coverage_complete

    def test_constant_term_hypothesis_enforced(self):
        f, _, _, _ = quadric_instance()
        g = P(3, {(0, 2, 0): 1, (0, 0, 2): 1, (0, 0, 0): -5})
        with pytest.raises(HypothesisViolation):
            aux_pipeline(f, g, 5, BoxBounds(2, 2, 3), ResidueData(()), 0.5, [])

    def test_equal_box_top_degree_route(self):
        f, _, box, pts = quadric_instance()
        g = P(3, {(0, 2, 0): 1, (0, 0, 2): 1, (0, 0, 0): -5})
        kept = [p for p in pts if g.evaluate(p) % 5 == 0]
        rep = aux_pipeline(f, g, 5, box, ResidueData(()), 0.5, kept, floor_const=10)
        assert rep.hypothesis_route == "top-degree"

    def test_residue_prime_dividing_modulus_rejected(self):
        f, g, box, pts = quadric_instance()
        with pytest.raises(HypothesisViolation):
            aux_pipeline(f, g, 5, box, ResidueData((5,)), 0.5, pts)

    def test_off_surface_point_rejected(self):
        f, g, box, _ = quadric_instance()
        with pytest.raises(ContractViolation):
            aux_pipeline(f, g, 5, box, ResidueData(()), 0.5, [(1, 1, 1)])

    def test_deterministic_across_seeds_for_structure(self):
        f, g, box, pts = quadric_instance()
        a = aux_pipeline(f, g, 5, box, ResidueData(()), 0.5, pts, floor_const=10, seed=1)
        b = aux_pipeline(f, g, 5, box, ResidueData(()), 0.5, pts, floor_const=10, seed=9)
        assert [c.outcome for c in a.classes] == [c.outcome for c in b.classes]
        assert a.auxiliaries[0].poly.terms == b.auxiliaries[0].poly.terms
