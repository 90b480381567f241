import math
import random
from fractions import Fraction

import numpy as np
import pytest

from flat import (
    EndpointClass,
    FlatProblem,
    FlatProblemError,
    Location,
    ObstructionViolation,
    assemble_profile,
    build_F,
    check_no_extension,
    expected_asymptotics,
    f_polynomial,
    phi_of_t,
    puncture_coefficient,
    rescaled_F,
    sample_potential,
    t_of_phi,
    unit_puncture_problem,
)
from polycore import PolyQ


def poly(*coefficients):
    return PolyQ.from_coefficients(coefficients)


class TestFlatProblem:
    @pytest.mark.parametrize(
        "n, a, c",
        [(1, 1, 0), (2, 0, 0), (2, -1, 0), (2, 1, 2), (3, 2, 3)],
    )
    def test_invalid(self, n, a, c):
        with pytest.raises(FlatProblemError):
            FlatProblem(n, Fraction(a), Fraction(c))

    def test_coerces_to_fractions(self):
        problem = FlatProblem(2, 1, -6)
        assert isinstance(problem.a, Fraction)
        assert problem.curvature_constant == 2


class TestBuildF:
    def test_c_negative_factorisation(self, flat_cneg):
        # (phi - 1)^2 (phi + 3)
        assert flat_cneg.F == poly(3, -5, 1, 1)
        assert flat_cneg.endpoint_class is EndpointClass.INFINITE_POINCARE
        assert flat_cneg.b is None
        assert (flat_cneg.c1, flat_cneg.c2) == (5, -3)

    def test_c_positive_factorisation(self, flat_cpos):
        # (1/6)(phi - 1)^2 (4 - phi)
        expected = (PolyQ.linear(1, -1) ** 2 * PolyQ.linear(-1, 4)).scale(Fraction(1, 6))
        assert flat_cpos.F == expected
        assert flat_cpos.endpoint_class is EndpointClass.FINITE_SIMPLE_ROOT
        assert flat_cpos.b == 4
        assert flat_cpos.b_width == 0
        assert flat_cpos.kappa == Fraction(8, 3)

    def test_c_zero(self, flat_c0):
        assert flat_c0.F == poly(1, -2, 1)
        assert flat_c0.endpoint_class is EndpointClass.INFINITE_LOG_GROWTH
        assert flat_c0.phi0 == 2

    @pytest.mark.parametrize("n, a, c", [(2, 1, 0), (3, 2, -1), (4, Fraction(1, 3), 5), (2, 3, Fraction(1, 2))])
    def test_double_root_and_second_derivative(self, n, a, c):
        problem = FlatProblem(n, Fraction(a), Fraction(c))
        F = f_polynomial(problem)
        a = problem.a
        assert F(a) == 0
        assert F.derivative()(a) == 0
        expected = (PolyQ.constant(n * (n - 1)) - PolyQ.monomial(1, problem.c)) * PolyQ.monomial(n - 2)
        assert F.derivative().derivative() == expected

    def test_irrational_end_point(self):
        # b = 5 + sqrt(46)
        profile = build_F(FlatProblem(3, Fraction(1), Fraction(1)))
        assert profile.endpoint_class is EndpointClass.FINITE_SIMPLE_ROOT
        assert profile.b_width > 0
        assert abs(float(profile.F(profile.b))) < 1e-30
        assert float(profile.b) == pytest.approx(5 + 46**0.5)
        assert float(profile.kappa) == pytest.approx(-float(profile.b) ** 2 / float(profile.F.derivative()(profile.b)))

    def test_assemble_from_document_polynomial(self, flat_cpos):
        rebuilt = assemble_profile(flat_cpos.problem, flat_cpos.F)
        assert rebuilt.b == flat_cpos.b
        assert (rebuilt.c1, rebuilt.c2) == (flat_cpos.c1, flat_cpos.c2)
        assert rebuilt.t_normalization == pytest.approx(flat_cpos.t_normalization)

    @pytest.mark.parametrize(
        "F, message",
        [
            (PolyQ.from_coefficients([]), "degree"),
            (poly(1), "degree"),
            (poly(-1, 0, 1), "double root"),
        ],
    )
    def test_assemble_rejects_degenerate_polynomial(self, F, message):
        with pytest.raises(FlatProblemError, match=message):
            assemble_profile(FlatProblem(2, Fraction(1), Fraction(0)), F)


class TestScaling:
    def test_scaling_identity_random(self):
        rng = random.Random(20240501)
        checked = 0
        while checked < 50:
            n = rng.choice([2, 3, 4])
            a = Fraction(rng.randint(1, 40), rng.randint(1, 12))
            c = Fraction(rng.randint(-30, 30), rng.randint(1, 9))
            if c > 0 and a * c >= n * (n - 1):
                continue
            problem = FlatProblem(n, a, c)
            lhs = f_polynomial(problem).rescale(a)
            rhs = f_polynomial(unit_puncture_problem(problem)) * a**n
            assert lhs == rhs
            checked += 1

    def test_rescaled_F_of_profile(self):
        profile = build_F(FlatProblem(3, Fraction(2), Fraction(-1)))
        unit = f_polynomial(FlatProblem(3, Fraction(1), Fraction(-2)))
        assert rescaled_F(profile) == unit * 8


class TestObstruction:
    def test_kappa_for_c_one(self, flat_cpos):
        assert check_no_extension(flat_cpos) == Fraction(8, 3)

    def test_rejects_non_positive_c(self, flat_c0, flat_cneg):
        for profile in (flat_c0, flat_cneg):
            with pytest.raises(FlatProblemError):
                check_no_extension(profile)

    def test_obstruction_is_a_problem_error(self):
        assert issubclass(ObstructionViolation, FlatProblemError)

    def test_kappa_never_one_on_grid(self):
        kappas = []
        for a in (Fraction(1, 4), Fraction(1, 2), Fraction(1), Fraction(3, 2), Fraction(3)):
            limit = 2 / a
            for k in range(1, 11):
                c = limit * Fraction(k, 11)
                kappas.append(float(check_no_extension(build_F(FlatProblem(2, a, c)))))
        assert len(kappas) == 50
        assert all(abs(kappa - 1) > 1e-3 for kappa in kappas)


class TestSolution:
    def test_closed_form_for_c_zero(self, flat_c0):
        for phi in np.linspace(1.01, 50.0, 100):
            expected = math.log(phi - 1) - 1 / (phi - 1)
            assert abs(t_of_phi(flat_c0, phi) - expected) < 1e-10

    def test_reference_value(self, flat_c0):
        assert t_of_phi(flat_c0, Fraction(2)) == pytest.approx(-1.0, abs=1e-12)

    def test_near_puncture(self, flat_c0):
        eps = 1e-4
        assert t_of_phi(flat_c0, 1 + eps) - (math.log(eps) - 1 / eps) == pytest.approx(0.0, abs=1e-6)

    def test_monotone_and_round_trip(self, flat_cneg):
        phis = [1.001, 1.1, 2.0, 10.0, 1000.0]
        ts = [t_of_phi(flat_cneg, phi) for phi in phis]
        assert all(t1 < t2 for t1, t2 in zip(ts, ts[1:]))
        for phi, t in zip(phis, ts):
            assert phi_of_t(flat_cneg, t) == pytest.approx(phi, rel=1e-8)

    def test_poincare_sup_is_zero(self, flat_cneg):
        t = t_of_phi(flat_cneg, 1e6)
        assert -1e-5 < t < 0

    def test_outside_domain(self, flat_cpos):
        with pytest.raises(FlatProblemError):
            t_of_phi(flat_cpos, 0.5)
        with pytest.raises(FlatProblemError):
            t_of_phi(flat_cpos, 4.0)

    def test_t_range_for_poincare(self, flat_cneg):
        with pytest.raises(FlatProblemError):
            phi_of_t(flat_cneg, 0.1)

    def test_sample_potential_columns(self, flat_c0):
        table = sample_potential(flat_c0, np.linspace(-3.0, 3.0, 25))
        assert table.u[0] == 0.0
        np.testing.assert_allclose(table.det_g, np.exp(2 / (table.phi - 1)), rtol=1e-8)
        # u' = phi: u increases with t
        assert np.all(np.diff(table.u) > 0)
        assert len(list(table.rows())) == 25

    def test_sample_potential_rejects_bad_grid(self, flat_c0):
        with pytest.raises(FlatProblemError):
            sample_potential(flat_c0, [1.0, 0.0])
        with pytest.raises(FlatProblemError):
            sample_potential(flat_c0, [])


class TestAsymptotics:
    @pytest.mark.parametrize(
        "n, a, c, expected",
        [(2, 1, 0, -1.0), (2, 1, -6, -0.25), (2, 1, 1, -2.0), (3, 1, -2, -0.25)],
    )
    def test_puncture_coefficient(self, n, a, c, expected):
        assert puncture_coefficient(FlatProblem(n, Fraction(a), Fraction(c))) == pytest.approx(expected)

    def test_models_by_endpoint(self, flat_c0, flat_cneg, flat_cpos):
        near, far = expected_asymptotics(flat_c0)
        assert near.location is Location.PUNCTURE_ZERO
        assert far.location is Location.INFINITY_ALE
        assert far.predicted == pytest.approx([1.0, 2.0, 0.5])
        assert expected_asymptotics(flat_cneg)[1].location is Location.BOUNDARY_POINCARE
        incomplete = expected_asymptotics(flat_cpos)[1]
        assert incomplete.location is Location.INFINITY_INCOMPLETE
        assert incomplete.predicted == pytest.approx([4.0, 8 / 3])

    def test_poincare_coefficient_sign(self):
        _, far = expected_asymptotics(FlatProblem(3, Fraction(1), Fraction(-6)))
        assert far.predicted == pytest.approx([-2.0])

    def test_describe(self, flat_c0):
        text = expected_asymptotics(flat_c0)[0].describe()
        assert text.startswith("PunctureZero:")
        assert "log(-log r^2)" in text
