"""
Simplex exacto: optimalidad con dualidad fuerte, certificados de Farkas y rayos.
"""
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from common.errors import DimensionMismatchError
from common.numeric import NumericMode
from controllers.lp_engine import LinearProgram, LPStatus, solve


@st.composite
def feasible_bounded_lps(draw, mode=NumericMode.RATIONAL):
    """A x = b con b = A x0 (x0 ≥ 0) y c ≥ 0: siempre factible y acotado."""
    m = draw(st.integers(1, 4))
    n = draw(st.integers(1, 6))
    A = [[draw(st.integers(-3, 3)) for _ in range(n)] for _ in range(m)]
    x0 = [draw(st.integers(0, 3)) for _ in range(n)]
    b = [sum(a * x for a, x in zip(row, x0)) for row in A]
    c = [draw(st.integers(0, 5)) for _ in range(n)]
    return LinearProgram.build(A, b, c, mode)


class TestOptimal:
    def test_small_program(self):
        lp = LinearProgram.build([[1, 1]], [1], [1, 2])
        outcome = solve(lp)
        assert outcome.status is LPStatus.OPTIMAL
        assert outcome.objective == 1
        assert outcome.x == (Fraction(1), Fraction(0))
        assert outcome.y == (Fraction(1),)
        assert outcome.verify(lp)

    def test_redundant_rows(self):
        lp = LinearProgram.build([[1, 1, 0], [2, 2, 0], [0, 1, 1]], [2, 4, 1], [1, 0, 3])
        outcome = solve(lp)
        assert outcome.status is LPStatus.OPTIMAL
        assert outcome.objective == 1
        assert outcome.verify(lp)

    def test_negative_right_hand_side(self):
        lp = LinearProgram.build([[-1, -1]], [-3], [2, 1])
        outcome = solve(lp)
        assert outcome.objective == 3
        assert outcome.verify(lp)

    @given(feasible_bounded_lps())
    @settings(max_examples=300, deadline=None)
    def test_rational_strong_duality(self, lp):
        outcome = solve(lp)
        assert outcome.status is LPStatus.OPTIMAL
        assert outcome.objective == sum(b * y for b, y in zip(lp.b, outcome.y))
        assert outcome.verify(lp)

    @given(feasible_bounded_lps(mode=NumericMode.DOUBLE))
    @settings(max_examples=150, deadline=None)
    def test_double_mode_certificates(self, lp):
        outcome = solve(lp)
        assert outcome.status is LPStatus.OPTIMAL
        assert outcome.verify(lp)


class TestCertificates:
    def test_infeasible_farkas(self):
        lp = LinearProgram.build([[1, 1]], [-1], [0, 0])
        outcome = solve(lp)
        assert outcome.status is LPStatus.INFEASIBLE
        assert outcome.farkas == (Fraction(-1),)
        assert outcome.verify(lp)

    @given(feasible_bounded_lps())
    @settings(max_examples=150, deadline=None)
    def test_contradictory_row_is_certified(self, lp):
        # Σx = -1 no admite x ≥ 0
        n = lp.shape[1]
        A = [list(row) for row in lp.A] + [[1] * n]
        broken = LinearProgram.build(A, list(lp.b) + [-1], list(lp.c))
        outcome = solve(broken)
        assert outcome.status is LPStatus.INFEASIBLE
        assert outcome.verify(broken)

    def test_unbounded_ray(self):
        lp = LinearProgram.build([[1, -1]], [0], [-1, 0])
        outcome = solve(lp)
        assert outcome.status is LPStatus.UNBOUNDED
        assert outcome.ray == (Fraction(1), Fraction(1))
        assert outcome.verify(lp)

    def test_wrong_certificate_is_rejected(self):
        lp = LinearProgram.build([[1, 1]], [1], [1, 2])
        outcome = solve(lp)
        tampered = type(outcome)(outcome.status, outcome.objective, (Fraction(1, 2), Fraction(1, 2)), outcome.y)
        assert not tampered.verify(lp)


def test_dimension_checks():
    with pytest.raises(DimensionMismatchError):
        LinearProgram.build([[1, 1]], [1, 2], [0, 0])
    with pytest.raises(DimensionMismatchError):
        LinearProgram.build([[1, 1], [1]], [1, 2], [0, 0])
