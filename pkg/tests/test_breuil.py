"""Divided-power ring arithmetic and the rank-2 module verification."""

import math

import pytest

from padicmf.breuil import (
    BreuilModule,
    SElement,
    _dp_power,
    build_breuil,
    carry_factor,
    d_S_u,
    lift_to_S,
    phi_S,
    quotient_to_R,
    s_add,
    s_mul,
    verify_breuil,
)
from padicmf.errors import NotNormalized
from padicmf.padic import OKElement
from padicmf.series import Series
from conftest import make_series, random_series


def random_s(prof, rng, max_udeg=5):
    out = SElement.zero(prof)
    coeffs = list(out.coeffs)
    for _ in range(rng.randint(1, 3)):
        d = rng.randint(0, max_udeg)
        coeffs[d] = random_series(prof, rng, max_deg=3)
    return SElement(prof, coeffs)


class TestCarry:
    def test_carry_factor_e1(self):
        # (u^1/1!)(u^1/1!) = 2! u^2/2!
        assert carry_factor(1, 1, 1) == 2

    def test_carry_factor_ramified(self):
        # (u^e/1!)(u^e/1!) = 2 u^(2e)/2!
        assert carry_factor(2, 2, 2) == 2
        assert carry_factor(3, 3, 3) == 2

    def test_carry_is_integral(self):
        for e in (1, 2, 3):
            for i in range(12):
                for j in range(12):
                    num = math.factorial((i + j) // e)
                    den = math.factorial(i // e) * math.factorial(j // e)
                    assert num % den == 0
                    assert carry_factor(i, j, e) == num // den


class TestSRing:
    def test_one_is_identity(self, prof3, rng):
        one = SElement.one(prof3)
        x = random_s(prof3, rng)
        assert (s_mul(one, x) - x).is_zero()

    def test_associativity_random(self, prof3, rng):
        # oracle: expand both parenthesizations
        for _ in range(10):
            x, y, z = (random_s(prof3, rng) for _ in range(3))
            assert (s_mul(s_mul(x, y), z) - s_mul(x, s_mul(y, z))).is_zero()

    def test_commutativity_and_distributivity(self, prof3, rng):
        for _ in range(10):
            x, y, z = (random_s(prof3, rng) for _ in range(3))
            assert (s_mul(x, y) - s_mul(y, x)).is_zero()
            assert (s_mul(x, s_add(y, z))
                    - s_add(s_mul(x, y), s_mul(x, z))).is_zero()

    def test_inverse(self, prof3, rng):
        one = SElement.one(prof3)
        for _ in range(5):
            x = random_s(prof3, rng)
            coeffs = list(x.coeffs)
            coeffs[0] = random_series(prof3, rng, max_deg=2,
                                      unit_constant=True)
            x = SElement(prof3, coeffs)
            assert (s_mul(x, x.inv()) - one).is_zero()


class TestPhiS:
    def test_u_to_up(self, prof3):
        pu = phi_S(SElement.u(prof3))
        assert not pu.coeffs[3].is_zero()
        assert all(pu.coeffs[i].is_zero() for i in (0, 1, 2, 4))

    def test_one_fixed(self, prof3):
        one = SElement.one(prof3)
        assert (phi_S(one) - one).is_zero()

    def test_phiE_over_p_is_unit(self, prof3):
        mu = phi_S(SElement.eisenstein(prof3)).scale_p(-1)
        assert mu.min_val() == 0 and mu.constant_val() == 0

    def test_phiE_over_p_is_unit_ramified(self, prof3e2):
        mu = phi_S(SElement.eisenstein(prof3e2)).scale_p(-1)
        assert mu.min_val() == 0 and mu.constant_val() == 0

    def test_ring_homomorphism(self, prof3, rng):
        for _ in range(8):
            x = random_s(prof3, rng, max_udeg=3)
            y = random_s(prof3, rng, max_udeg=3)
            assert (phi_S(x * y) - phi_S(x) * phi_S(y)).is_zero()

    def test_restricts_to_base_frobenius(self, prof3, rng):
        from padicmf.series import frobenius_R0
        f = random_series(prof3, rng, max_deg=4)
        lifted = SElement.from_series(prof3, f)
        assert (phi_S(lifted)
                - SElement.from_series(prof3, frobenius_R0(f))).is_zero()


class TestQuotient:
    def test_eisenstein_dies(self, prof3):
        assert quotient_to_R(SElement.eisenstein(prof3)).is_zero()

    def test_u_goes_to_pi(self, prof3):
        q = quotient_to_R(SElement.u(prof3))
        assert (q - Series.constant(prof3.w_ring, "Y", prof3.trunc_y,
                                    prof3.w_ring.from_int(3))).is_zero()

    def test_divided_square_dies(self, prof3):
        g2 = _dp_power(SElement.eisenstein(prof3), 2)
        assert quotient_to_R(g2).is_zero()

    def test_ring_homomorphism(self, prof3, rng):
        for _ in range(10):
            x = random_s(prof3, rng, max_udeg=4)
            y = random_s(prof3, rng, max_udeg=4)
            lhs = quotient_to_R(s_mul(x, y))
            rhs = quotient_to_R(x) * quotient_to_R(y)
            assert (lhs - rhs).is_zero()

    def test_ramified_quotient(self, prof3e2):
        assert quotient_to_R(SElement.eisenstein(prof3e2)).is_zero()
        q = quotient_to_R(SElement.u(prof3e2))
        pi = OKElement.pi(prof3e2)
        assert (q.coeffs[0] - pi).is_zero()


class TestDerivation:
    def test_u_is_flat(self, prof3):
        assert d_S_u(SElement.u(prof3)).is_zero()

    def test_y_coefficient(self, prof3):
        x = SElement.from_series(prof3, make_series(prof3, [0, 1]), 2)
        dx = d_S_u(x)
        assert (dx.coeffs[2] - make_series(prof3, [1])).is_zero()

    def test_leibniz(self, prof3, rng):
        for _ in range(8):
            x = random_s(prof3, rng, max_udeg=3)
            y = random_s(prof3, rng, max_udeg=3)
            lhs = d_S_u(x * y)
            rhs = x * d_S_u(y) + y * d_S_u(x)
            assert (lhs - rhs).is_zero()


class TestLift:
    def test_pi_to_u(self, prof3e2):
        ok = prof3e2.ok_ring
        my = prof3e2.trunc_y
        pi_series = Series.constant(ok, "Y", my, OKElement.pi(prof3e2))
        lifted = lift_to_S(pi_series)
        assert (lifted - SElement.u(prof3e2)).is_zero()

    def test_unramified_series_lift_is_u_free(self, prof3, rng):
        f = random_series(prof3, rng)
        lifted = lift_to_S(f)
        assert all(lifted.coeffs[i].is_zero()
                   for i in range(1, prof3.trunc_u))

    def test_round_trip(self, prof3, rng):
        for _ in range(10):
            f = random_series(prof3, rng)
            assert (quotient_to_R(lift_to_S(f)) - f).is_zero()

    def test_round_trip_ramified(self, prof3e2, rng):
        ok = prof3e2.ok_ring
        my = prof3e2.trunc_y
        pi = OKElement.pi(prof3e2)
        g = Series.from_coeffs(
            ok, "Y", my,
            [ok.one() + pi, ok.from_int(rng.randint(-5, 5)), pi])
        assert (quotient_to_R(lift_to_S(g)) - g).is_zero()


class TestBreuilModule:
    def test_split_case(self, prof3):
        M = build_breuil(Series.zero(prof3.w_ring, "Y", prof3.trunc_y))
        v = verify_breuil(M)
        assert v.passed is True

    def test_linear_generator(self, prof3):
        M = build_breuil(make_series(prof3, [0, 1]))
        v = verify_breuil(M)
        assert v.passed is True
        gen1, gen2 = M.fil1_generator()
        # generator image downstairs is (1, p g1)
        img = quotient_to_R(gen2)
        assert (img - make_series(prof3, [0, 3])).is_zero()

    def test_not_normalized(self, prof3):
        with pytest.raises(NotNormalized):
            build_breuil(make_series(prof3, [1], scale=-1))

    def test_tampered_frobenius_fails(self, prof3):
        M = build_breuil(make_series(prof3, [0, 1]), phi_exponents=(1, 1))
        v = verify_breuil(M)
        assert v.passed is False
        assert "witness-p-e2" in v.failing

    def test_lift_choice_does_not_matter(self, prof3, rng):
        # adding a multiple of E(u) to the lift lands in the same verdict
        base = build_breuil(make_series(prof3, [0, 1]))
        E = SElement.eisenstein(prof3)
        for _ in range(3):
            noise = random_s(prof3, rng, max_udeg=3)
            M = BreuilModule(prof3, base.g1_lift + E * noise)
            assert verify_breuil(M).passed is True

    def test_ramified_module(self, prof3e2):
        ok = prof3e2.ok_ring
        my = prof3e2.trunc_y
        pi = OKElement.pi(prof3e2)
        g1 = Series.from_coeffs(ok, "Y", my, [pi, ok.one()])
        M = build_breuil(g1)
        assert verify_breuil(M).passed is True


def test_phi_fil1_powers_bound(prof3):
    # phi(E^n/n!) = (p^n/n!) (phi(E)/p)^n: valuation n - val_p(n!)
    E = SElement.eisenstein(prof3)
    from padicmf.padic import vp_int
    for n in (1, 2, 3, 4, 5):
        img = phi_S(_dp_power(E, n))
        expected = n - (vp_int(math.factorial(n), 3)
                        if math.factorial(n) > 1 else 0)
        assert img.min_val() == expected
        assert expected >= 1
