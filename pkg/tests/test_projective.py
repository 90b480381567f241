from fractions import Fraction

import pytest

from momentum import CaseTag
from polycore import PolyQ
from projective import (
    ProjectiveError,
    build_projective_profile,
    c_of_b,
    cM_limit,
    cM_of_b,
    cM_range,
    curvature_pair,
    extension_residuals,
    h_ratio,
    hl_values,
    pmy_check_projective,
    range_gap,
    scan_b,
    snap_b,
    solve_projective,
)


def closed_form_cM(b: Fraction) -> Fraction:
    """c_M(b) for m=1, n=2, lambda=1, a=1."""
    return 2 * (-13 + 37 * b + 39 * b**2 + 7 * b**3 + 2 * b**4) / ((b - 1) ** 2 * (1 + 4 * b + b**2))


class TestIntegrals:
    def test_exact_example(self):
        assert cM_of_b(1, 2, 1, 1, 2) == Fraction(610, 13)
        assert c_of_b(1, 2, 1, 1, 2) == Fraction(276, 13)
        assert curvature_pair(1, 2, 1, 1, 2) == (Fraction(610, 13), Fraction(276, 13))

    @pytest.mark.parametrize("b, expected", [(2, Fraction(610, 13)), (3, Fraction(200, 11))])
    def test_closed_form_points(self, b, expected):
        assert cM_of_b(1, 2, 1, 1, b) == expected

    def test_closed_form_identity(self):
        for k in range(1, 21):
            b = 1 + Fraction(9 * k, 21)
            assert cM_of_b(1, 2, 1, 1, b) == closed_form_cM(b)

    def test_b_equal_a(self):
        hl = hl_values(1, 2, -1, Fraction(1, 10), Fraction(1, 10))
        assert (hl.H1, hl.H2, hl.H3, hl.L1, hl.L2) == (0, 0, 0, 0, 0)
        with pytest.raises(ProjectiveError):
            cM_of_b(1, 2, -1, Fraction(1, 10), Fraction(1, 10))

    @pytest.mark.parametrize(
        "lam, a, b", [(1, 2, 1), (1, 0, 1), (-1, Fraction(1, 2), 1), (-1, Fraction(1, 2), 2)]
    )
    def test_invalid_interval(self, lam, a, b):
        with pytest.raises(ProjectiveError):
            hl_values(1, 2, lam, a, b)

    def test_signs(self):
        negative = hl_values(1, 2, -1, Fraction(1, 10), Fraction(1, 2))
        assert negative.H1 > 0 and negative.H2 > 0 and negative.H3 > 0
        assert hl_values(1, 2, 1, 1, 3).H2 < 0

    def test_h_ratio_diagonal(self):
        zeta = Fraction(1, 5)
        hl = hl_values(1, 2, -1, zeta, 2 * zeta)
        assert h_ratio(1, 2, -1, zeta, 2 * zeta) == hl.H1 / hl.H2


class TestRange:
    def test_limit(self):
        assert cM_limit(1, 2, 1) == 4
        assert cM_range(1, 2, 1).describe() == "(4, inf)"
        assert 4 not in cM_range(1, 2, 1)
        assert 5 in cM_range(1, 2, 1)
        assert cM_range(1, 2, -1).describe() == "all reals"

    def test_lambda_zero(self):
        with pytest.raises(ProjectiveError):
            cM_range(1, 2, 0)

    def test_sampled_values_above_limit(self):
        samples = [1 + Fraction(k * k, 10) for k in range(1, 100)] + [Fraction(1000)]
        assert all(cM_of_b(1, 2, 1, 1, b) > 4 for b in samples)
        assert all(range_gap(1, 2, 1, 1, b) < 0 for b in samples)
        assert abs(float(cM_of_b(1, 2, 1, 1, 1000)) - 4) < 0.05


class TestProfile:
    def test_exact_profile(self, projective_exact):
        base = projective_exact.base
        num = PolyQ.from_coefficients([64, -114, 13, 60, -23])
        den = PolyQ.from_coefficients([0, 13, 13])
        assert base.phi.equals(num, den)
        assert base.phi(Fraction(2)) == 0
        assert base.phi.derivative()(Fraction(2)) == -1
        assert base.case_tag is CaseTag.PROJECTIVE_EXTENSION
        assert base.far_root == "simple"
        assert projective_exact.extension_ok
        assert projective_exact.c_M == Fraction(610, 13)
        assert projective_exact.c == Fraction(276, 13)

    def test_residuals(self, projective_exact):
        assert extension_residuals(projective_exact.base.P, projective_exact.base.Q, Fraction(2)) == (0, 0)

    def test_pmy_model(self, projective_exact):
        model = pmy_check_projective(projective_exact)
        assert model.predicted[0] == pytest.approx(1.0)
        assert model.predicted[1] < 0

    def test_b_not_above_a(self):
        with pytest.raises(ProjectiveError):
            build_projective_profile(1, 2, 1, 2, 1)

    def test_snap(self):
        assert snap_b(2.0000000001) == 2
        assert snap_b(0.5) == Fraction(1, 2)


class TestSolve:
    def test_recovers_exact_b(self):
        profiles, scan = solve_projective(1, 2, 1, 1, Fraction(610, 13))
        assert [p.b for p in profiles] == [Fraction(2)]
        assert scan.roots[0] == pytest.approx(2.0, abs=1e-8)

    def test_outside_range_has_no_root(self):
        scan = scan_b(1, 2, 1, 1, 3)
        assert scan.roots == []
        assert "0 root(s)" in scan.describe()

    def test_lambda_zero_rejected(self):
        with pytest.raises(ProjectiveError):
            scan_b(1, 2, 0, 1, 5)

    def test_two_roots_small_a(self):
        profiles, _ = solve_projective(1, 2, -1, Fraction(1, 1000), 2)
        assert [float(p.b) for p in profiles] == pytest.approx([0.0893745, 0.998], abs=1e-3)
        assert [float(p.c) for p in profiles] == pytest.approx([68.7366, 11.9761], rel=1e-3)
        for profile in profiles:
            assert extension_residuals(profile.base.P, profile.base.Q, profile.b) == (0, 0)
            assert profile.c_M_requested == 2

    def test_negative_base_curvature(self):
        profiles, _ = solve_projective(1, 2, -1, Fraction(1, 10), -2)
        assert len(profiles) == 1
        assert float(profiles[0].b) == pytest.approx(0.61146, abs=1e-4)
        assert float(profiles[0].c) == pytest.approx(5.02242, abs=1e-3)
