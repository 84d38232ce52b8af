import math
from fractions import Fraction

import numpy as np
import pytest
from mpmath import mpf, workprec

from mop_trees import _poly as P
from mop_trees.errors import NormalityError
from mop_trees.measures import uniform
from mop_trees.mop_engine import (
    MopSystem,
    consistency_residual,
    consistency_residual_from,
    interlacing_check,
    real_zeros,
    second_kind,
    second_kind_boundary,
    second_kind_boundary_mp,
    sign_lambda_check,
    type1_interlacing_check,
    type1_recursion_residual,
)

from oracles import UniformPairOracle

ORACLE = UniformPairOracle()


def as_floats(coeffs):
    return [float(c) for c in coeffs]


class TestType2:
    def test_empty_index(self, ang_sys):
        assert as_floats(ang_sys.type2((0, 0))) == [1.0]

    def test_degree_one_is_shifted_mean(self, ang_sys):
        assert as_floats(ang_sys.type2((1, 0))) == pytest.approx([1.5, 1.0], abs=1e-30)

    def test_one_one_against_rational_oracle(self, ang_sys):
        # oracle: exact Fraction solve of the 2x2 moment system -> x^2 - 7/3
        expected = [float(c) for c in ORACLE.type2((1, 1))]
        assert expected == [-7 / 3, 0.0, 1.0]
        assert as_floats(ang_sys.type2((1, 1))) == pytest.approx(expected, abs=1e-30)

    def test_deep_index_against_rational_oracle(self, ang_sys):
        expected = [float(c) for c in ORACLE.type2((3, 2))]
        assert as_floats(ang_sys.type2((3, 2))) == pytest.approx(expected, rel=1e-25)

    def test_normality_error_on_degenerate_pair(self):
        twin = MopSystem(uniform(0, 1), uniform(0, 1), 128)
        with pytest.raises(NormalityError):
            twin.type2((1, 1))


class TestType1:
    def test_one_one_constants(self, ang_sys):
        A1, A2, A0 = ang_sys.type1((1, 1))
        assert as_floats(A1) == pytest.approx([-1 / 3], abs=1e-30)
        assert as_floats(A2) == pytest.approx([1 / 3], abs=1e-30)
        assert A0 == ()

    def test_single_condition(self, ang_sys):
        A1, A2, _ = ang_sys.type1((1, 0))
        assert as_floats(A1) == pytest.approx([1.0], abs=1e-30)  # 1/mass
        assert A2 == ()

    def test_two_one_against_rational_oracle(self, ang_sys):
        a1o, a2o = ORACLE.type1((2, 1))
        A1, A2, _ = ang_sys.type1((2, 1))
        assert as_floats(A1) == pytest.approx([float(c) for c in a1o], rel=1e-25)
        assert as_floats(A2) == pytest.approx([float(c) for c in a2o], rel=1e-25)

    def test_normalization_integral(self, ang_sys):
        # int x^{|n|-1} (A1 dmu1 + A2 dmu2) = 1
        n = (2, 2)
        A1, A2, _ = ang_sys.type1(n)
        with workprec(256):
            m1 = ang_sys.mu1.moments_mp(6, 256)
            m2 = ang_sys.mu2.moments_mp(6, 256)
            val = sum(c * m1[3 + i] for i, c in enumerate(A1))
            val += sum(c * m2[3 + i] for i, c in enumerate(A2))
        assert float(val) == pytest.approx(1.0, abs=1e-40)


class TestRecurrence:
    def test_means_at_origin(self, ang_sys):
        a1, a2, b1, b2 = ang_sys.recurrence((0, 0))
        assert (float(b1), float(b2)) == pytest.approx((-1.5, 1.5), abs=1e-30)

    def test_rescaled_legendre(self, ang_sys):
        # classical a1 = 1/3 on [-1, 1], scaled by (half-length)^2 = 1/4 -> 1/12,
        # confirmed by the Fraction oracle
        assert ORACLE.a((1, 0), 1) == Fraction(1, 12)
        assert float(ang_sys.recurrence((1, 0))[0]) == pytest.approx(1 / 12, abs=1e-30)

    def test_marginal_zero_convention(self, ang_sys):
        assert float(ang_sys.recurrence((0, 3))[0]) == 0.0
        assert float(ang_sys.recurrence((3, 0))[1]) == 0.0

    def test_against_rational_oracle_grid(self, ang_sys):
        for n in [(1, 1), (2, 1), (2, 2), (3, 2)]:
            a1, a2, b1, b2 = (float(v) for v in ang_sys.recurrence(n))
            assert a1 == pytest.approx(float(ORACLE.a(n, 1)), rel=1e-25)
            assert a2 == pytest.approx(float(ORACLE.a(n, 2)), rel=1e-25)
            assert b1 == pytest.approx(float(ORACLE.b(n, 1)), rel=1e-25)
            assert b2 == pytest.approx(float(ORACLE.b(n, 2)), rel=1e-25)

    def test_a_routes_agree(self, ang_sys):
        # route 1: h-ratios; route 2: solve the polynomial identity
        # x P_n - P_{n+e_i} - b_i P_n = a1 P_{n-e1} + a2 P_{n-e2} coefficientwise
        from mop_trees.mop_engine import E1, E2, add, sub

        n = (2, 2)
        with workprec(256):
            a1, a2, b1, b2 = ang_sys.recurrence(n)
            pn = ang_sys.record(n).P
            lhs = P.pxshift(pn)
            lhs = P.padd(lhs, P.pscale(ang_sys.record(add(n, E1)).P, -1))
            lhs = P.padd(lhs, P.pscale(pn, -b1))
            p1 = ang_sys.record(sub(n, E1)).P
            p2 = ang_sys.record(sub(n, E2)).P
            # both P_{n-e} are monic of one lower degree; split by evaluation
            # at a zero of the second one
            z2 = real_zeros(p2)[0]
            a1_poly = P.pval(lhs, z2) / P.pval(p1, z2)
            a2_poly = lhs[len(pn) - 2] - a1_poly  # top coefficient is a1 + a2
            assert abs(float(a1_poly - a1)) < 1e-25
            assert abs(float(a2_poly - a2)) < 1e-25

    def test_h_values_signed(self, ang_sys):
        h1, h2 = ang_sys.h_values((1, 1))
        assert float(h1) == pytest.approx(float(ORACLE.h((1, 1), 1)), rel=1e-28)
        assert float(ORACLE.h((1, 1), 1)) == -0.25  # signed, not a square norm


class TestConsistency:
    def test_residuals_tiny(self, ang_sys):
        r = consistency_residual(ang_sys, (1, 1))
        assert max(float(x) for x in r) < 1e-30

    def test_symmetric_first_relation(self, ang_sys):
        r1, _, _ = consistency_residual(ang_sys, (1, 1))
        assert float(r1) < 1e-40

    def test_perturbation_detected(self, ang_sys):
        base = {
            n: tuple(float(v) for v in ang_sys.recurrence(n))
            for n in [
                (1, 1), (2, 1), (1, 2), (0, 1), (1, 0), (0, 0), (2, 2), (0, 2), (2, 0),
            ]
        }

        def perturbed(n):
            a1, a2, b1, b2 = base[n]
            if n == (2, 1):
                a1 += 0.1
            return a1, a2, b1, b2

        r = consistency_residual_from(perturbed, (1, 1))
        assert r[1] > 0.01

    def test_type1_recursion_identity(self, ang_sys):
        for n in [(1, 1), (2, 2), (2, 1)]:
            for i in (1, 2):
                for j in (1, 2):
                    assert float(type1_recursion_residual(ang_sys, n, i, j)) < 1e-45


class TestSecondKind:
    def test_normalization_at_infinity(self, ang_sys):
        z = mpf(10) ** 8
        L, _, _ = second_kind(ang_sys, (1, 0), z)
        assert complex(z * L).real == pytest.approx(1.0, rel=1e-7)

    def test_value_against_quadrature_oracle(self, ang_sys):
        # oracle: Q_{(1,1)} has constant densities -1/3 and 1/3; integrate directly
        xs1 = np.linspace(-2, -1, 400001)
        xs2 = np.linspace(1, 2, 400001)
        oracle = np.trapezoid((-1 / 3) / (5 - xs1), xs1) + np.trapezoid((1 / 3) / (5 - xs2), xs2)
        L, _, _ = second_kind(ang_sys, (1, 1), 5.0)
        assert complex(L).real == pytest.approx(oracle, abs=1e-10)

    def test_r_leading_order_decay(self, ang_sys):
        # R_{n,k}(z) = h z^{-n_k-1} (1 + O(1/z)): the deviation decays like 1/z
        n = (1, 1)
        h1, _ = ang_sys.h_values(n)
        devs = []
        for z in (1e4, 1e6):
            _, R1, _ = second_kind(ang_sys, n, z)
            devs.append(abs(complex(R1) * z ** (n[0] + 1) / float(h1) - 1))
        assert devs[0] < 10 / 1e4 and devs[1] < 10 / 1e6
        assert devs[1] < devs[0] / 50

    def test_boundary_routes_agree(self, ang_sys):
        x = -1.4
        a = second_kind_boundary(ang_sys, (2, 2), x, "+")
        b = complex(second_kind_boundary_mp(ang_sys, (2, 2), x, "+"))
        assert a == pytest.approx(b, abs=1e-11)

    def test_boundary_conjugate(self, ang_sys):
        x = 1.5
        a = second_kind_boundary(ang_sys, (2, 1), x, "+")
        b = second_kind_boundary(ang_sys, (2, 1), x, "-")
        assert a == pytest.approx(np.conj(b))


class TestZeros:
    def test_quadratic(self):
        zs = real_zeros((-1.0, 0.0, 1.0))
        assert [float(z) for z in zs] == pytest.approx([-1.0, 1.0], abs=1e-30)

    def test_degree_one(self, ang_sys):
        zs = real_zeros(ang_sys.type2((1, 0)))
        assert [float(z) for z in zs] == pytest.approx([-1.5], abs=1e-30)

    def test_one_in_each_interval(self, ang_sys):
        # bracketing oracle: sign changes of the polynomial on a fine grid
        coeffs = np.asarray([float(c) for c in ang_sys.type2((1, 1))])
        grid = np.linspace(-2.5, 2.5, 10001)
        vals = np.polynomial.polynomial.polyval(grid, coeffs)
        brackets = grid[:-1][np.sign(vals[:-1]) * np.sign(vals[1:]) < 0]
        assert len(brackets) == 2
        zs = [float(z) for z in real_zeros(ang_sys.type2((1, 1)))]
        assert -2 <= zs[0] <= -1 and 1 <= zs[1] <= 2
        for b, z in zip(brackets, zs):
            assert abs(b - z) < 1e-3

    def test_all_zeros_in_hulls(self, ang_sys):
        for n in [(2, 2), (3, 1), (2, 4)]:
            for z in real_zeros(ang_sys.record(n).P):
                x = float(z)
                assert -2 <= x <= -1 or 1 <= x <= 2


class TestInterlacing:
    def test_basic(self, ang_sys):
        assert interlacing_check(ang_sys, (1, 1), 1)

    def test_vacuous(self, ang_sys):
        assert interlacing_check(ang_sys, (0, 0), 2)

    def test_negative_control(self):
        from mop_trees.mop_engine import _strict_interlace

        assert not _strict_interlace([0.5, 2.5], [0.0, 1.0, 2.0])

    def test_type1_patterns(self, ang_sys):
        assert type1_interlacing_check(ang_sys, (2, 2), 2, 1)
        assert type1_interlacing_check(ang_sys, (3, 2), 1, 2)
        assert type1_interlacing_check(ang_sys, (1, 1), 1, 2)  # vacuous
        assert type1_interlacing_check(ang_sys, (2, 2), 1, 1)
        assert type1_interlacing_check(ang_sys, (2, 3), 2, 2)


class TestSignLambda:
    def test_one_one(self, ang_sys):
        A1, _, _ = ang_sys.type1((1, 1))
        assert float(A1[0]) < 0
        assert sign_lambda_check(ang_sys, (1, 1))

    def test_two_two_positive_lead(self, ang_sys):
        A1, _, _ = ang_sys.type1((2, 2))
        assert float(A1[-1]) > 0
        assert sign_lambda_check(ang_sys, (2, 2))

    def test_grid(self, ang_sys):
        for n1 in range(1, 5):
            for n2 in range(1, 5):
                assert sign_lambda_check(ang_sys, (n1, n2))


class TestNormalityInvariant:
    def test_degrees_exact_small_grid(self, ang_sys):
        for n1 in range(0, 5):
            for n2 in range(0, 5):
                p = ang_sys.type2((n1, n2))
                assert len(p) == n1 + n2 + 1
                assert float(p[-1]) == 1.0

    def test_orthogonality_residuals(self, ang_sys):
        n = (3, 2)
        p = ang_sys.record(n).P
        with workprec(256):
            m1 = ang_sys.mu1.moments_mp(10, 256)
            m2 = ang_sys.mu2.moments_mp(10, 256)
            worst = mpf(0)
            for mom, nk in ((m1, 3), (m2, 2)):
                for m in range(nk):
                    worst = max(worst, abs(sum(c * mom[m + i] for i, c in enumerate(p))))
        assert float(worst) < 1e-51  # 1e-(0.2 * 256)


class TestRecordExport:
    def test_json_fields(self, ang_sys):
        doc = ang_sys.record_json((1, 1))
        assert doc["n"] == [1, 1]
        assert doc["P"] == pytest.approx([-7 / 3, 0.0, 1.0])
        assert doc["a"] == pytest.approx([1 / 12, 1 / 12])
        assert set(doc) == {"n", "P", "A1", "A2", "a", "b", "h"}
