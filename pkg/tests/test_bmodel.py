"""Graded de Rham model: theta, the split systems, basis identities,
the rank dichotomy, and the classification pipeline."""

import pytest

from padicmf.bmodel import (
    ADMISSIBLE_MIXED,
    ETALE,
    MULTIPLICATIVE,
    NOT_WEAKLY_ADMISSIBLE,
    WEAKLY_ADMISSIBLE_NON_ADMISSIBLE,
    BModelElement,
    classify,
    solve_basis_systems,
    split_filtration_generator,
    theta,
    vcris_rank,
    wdr_basis,
)
from padicmf.errors import (
    DeterminantNotUnit,
    NegativeTDegree,
    NotPrimitive,
    TDegreeWindowExceeded,
    UnsupportedShape,
)
from padicmf.filtered import FilteredModule, FiltrationStep
from padicmf.series import Bivariate, Series, taylor_shift
from conftest import make_series, random_series


def model_of(prof, f):
    return BModelElement.from_bivariate(prof, taylor_shift(f))


class TestTheta:
    def test_c_goes_to_y(self, prof3):
        y = Series.variable(prof3.w_ring, "Y", prof3.trunc_y)
        assert (theta(model_of(prof3, y)) - y).is_zero()

    def test_u_dies(self, prof3):
        w = prof3.w_ring
        u_only = Bivariate.zero(w, prof3.trunc_c, prof3.trunc_u)
        u_only.grid[0][1] = w.one()
        x = BModelElement.from_bivariate(prof3, u_only)
        assert theta(x).is_zero()

    def test_t_dies_and_negative_raises(self, prof3):
        w = prof3.w_ring
        one = Bivariate.one(w, prof3.trunc_c, prof3.trunc_u)
        pos = BModelElement.from_bivariate(prof3, one, 1)
        assert theta(pos).is_zero()
        neg = BModelElement.from_bivariate(prof3, one, -1)
        with pytest.raises(NegativeTDegree):
            theta(neg)

    def test_homomorphism_example(self, prof3):
        # theta((c + p)(1 + u)) = Y + p
        f = make_series(prof3, [3, 1])
        cp = model_of(prof3, f)
        w = prof3.w_ring
        one_u = Bivariate.one(w, prof3.trunc_c, prof3.trunc_u)
        one_u.grid[0][1] = w.one()
        prod = cp * BModelElement.from_bivariate(prof3, one_u)
        assert (theta(prod) - f).is_zero()

    def test_homomorphism_random(self, prof3, rng):
        for _ in range(15):
            a = model_of(prof3, random_series(prof3, rng, max_deg=5))
            b = model_of(prof3, random_series(prof3, rng, max_deg=5))
            assert (theta(a * b) - theta(a) * theta(b)).is_zero()
            assert (theta(a + b) - (theta(a) + theta(b))).is_zero()


class TestTWindow:
    def test_product_inside_window(self, prof3):
        w = prof3.w_ring
        one = Bivariate.one(w, prof3.trunc_c, prof3.trunc_u)
        a = BModelElement.from_bivariate(prof3, one, -1)
        b = BModelElement.from_bivariate(prof3, one, 2)
        assert (a * b).component(1) == one

    def test_window_exceeded_raises(self, prof3):
        w = prof3.w_ring
        one = Bivariate.one(w, prof3.trunc_c, prof3.trunc_u)
        a = BModelElement.from_bivariate(prof3, one, 2)
        with pytest.raises(TDegreeWindowExceeded):
            a * a

    def test_t_is_invertible(self, prof3):
        w = prof3.w_ring
        one = Bivariate.one(w, prof3.trunc_c, prof3.trunc_u)
        x = BModelElement.from_bivariate(prof3, one, 1)
        assert (x.t_shift(-1) - BModelElement.one(prof3, w)).is_zero()


class TestSplit:
    def test_paper_shape(self, prof3):
        one = Series.one(prof3.w_ring, "Y", prof3.trunc_y)
        zero = Series.zero(prof3.w_ring, "Y", prof3.trunc_y)
        sp = split_filtration_generator(make_series(prof3, [3, 1]), one,
                                        zero, one)
        fc = sp.parts["f"].at_c.subst_u0()
        w = prof3.w_ring
        assert (fc.coefficient(0) - w.from_int(3)).is_zero()
        assert (fc.coefficient(1) - w.one()).is_zero()
        assert sp.parts["f"].tail.grid[0][0].unit == 1
        assert sp.parts["g"].tail.is_zero()

    def test_trivial_and_square(self, prof3):
        one = Series.one(prof3.w_ring, "Y", prof3.trunc_y)
        zero = Series.zero(prof3.w_ring, "Y", prof3.trunc_y)
        sp = split_filtration_generator(one, zero, zero, one)
        assert sp.parts["f"].tail.is_zero()
        g = make_series(prof3, [0, 0, 1])   # Y^2: tail = 2c + u
        sp2 = split_filtration_generator(g, one, one, zero)
        tail = sp2.parts["f"].tail
        assert tail.grid[1][0].unit == 2 and tail.grid[0][1].unit == 1

    def test_primitivity_required(self, prof3):
        p_series = make_series(prof3, [3])
        with pytest.raises(NotPrimitive):
            split_filtration_generator(p_series, p_series, p_series,
                                       p_series)

    def test_determinant_constant_required(self, prof3):
        y = Series.variable(prof3.w_ring, "Y", prof3.trunc_y)
        one = Series.one(prof3.w_ring, "Y", prof3.trunc_y)
        zero = Series.zero(prof3.w_ring, "Y", prof3.trunc_y)
        with pytest.raises(DeterminantNotUnit):
            split_filtration_generator(y, one, zero, zero)


class TestSolve:
    def test_trivial_systems(self, prof3):
        one = Series.one(prof3.w_ring, "Y", prof3.trunc_y)
        zero = Series.zero(prof3.w_ring, "Y", prof3.trunc_y)
        sp = split_filtration_generator(one, zero, zero, one)
        s1, s2 = solve_basis_systems(sp)
        assert s1.a.is_zero() and s1.b.is_zero()
        assert s2.a.is_zero() and s2.b.is_zero()

    def test_paper_system(self, prof3):
        # a = -1/(c + p + u), b = -a; checked by resubstitution
        one = Series.one(prof3.w_ring, "Y", prof3.trunc_y)
        zero = Series.zero(prof3.w_ring, "Y", prof3.trunc_y)
        f = make_series(prof3, [3, 1])
        sp = split_filtration_generator(f, one, zero, one)
        s1, s2 = solve_basis_systems(sp)
        F = sp.parts["f"].full
        lhs = F * s1.a + sp.parts["f"].tail
        assert lhs.is_zero()
        assert (s1.a + s1.b).is_zero()
        assert s2.a.is_zero() and s2.b.is_zero()

    def test_oracle_agreement_random(self, prof3, rng):
        one = Series.one(prof3.w_ring, "Y", prof3.trunc_y)
        zero = Series.zero(prof3.w_ring, "Y", prof3.trunc_y)
        for _ in range(8):
            f = random_series(prof3, rng, max_deg=4, unit_constant=True)
            g = random_series(prof3, rng, max_deg=4)
            sp = split_filtration_generator(f, g, zero, one)
            s1, s2 = solve_basis_systems(sp)   # raises on disagreement
            F, G = sp.parts["f"].full, sp.parts["g"].full
            assert (F * s1.a + sp.parts["f"].tail).is_zero()
            assert (G * s1.a + s1.b + sp.parts["g"].tail).is_zero()


class TestWdrBasis:
    def test_paper_tuple(self, prof3):
        one = Series.one(prof3.w_ring, "Y", prof3.trunc_y)
        zero = Series.zero(prof3.w_ring, "Y", prof3.trunc_y)
        bp = wdr_basis(make_series(prof3, [3, 1]), one, zero, one)
        assert bp.verdict.passed is True
        assert bp.we_basis == ("t^-1 e1", "e2")

    def test_split_case(self, prof3):
        one = Series.one(prof3.w_ring, "Y", prof3.trunc_y)
        zero = Series.zero(prof3.w_ring, "Y", prof3.trunc_y)
        bp = wdr_basis(one, zero, zero, one)
        assert bp.verdict.passed is True

    def test_random_unit_and_nonunit(self, prof3, rng):
        one = Series.one(prof3.w_ring, "Y", prof3.trunc_y)
        zero = Series.zero(prof3.w_ring, "Y", prof3.trunc_y)
        for _ in range(5):
            f = random_series(prof3, rng, max_deg=4, unit_constant=True)
            g = random_series(prof3, rng, max_deg=4)
            assert wdr_basis(f, g, zero, one).verdict.passed is True
        for _ in range(5):
            # non-unit f with unit g: complement (h, r) = (1, 0)
            f = make_series(prof3, [3]) + \
                Series.variable(prof3.w_ring, "Y",
                                prof3.trunc_y) * random_series(
                                    prof3, rng, max_deg=3)
            g = random_series(prof3, rng, max_deg=4, unit_constant=True)
            assert wdr_basis(f, g, one, zero).verdict.passed is True


class TestRank:
    def test_counterexample_rank_one(self, prof3):
        one = Series.one(prof3.w_ring, "Y", prof3.trunc_y)
        res = vcris_rank(make_series(prof3, [3, 1]), one)
        assert res.rank == 1 and res.weierstrass_degree_f == 1

    def test_normalized_rank_two(self, prof3):
        one = Series.one(prof3.w_ring, "Y", prof3.trunc_y)
        res = vcris_rank(one, make_series(prof3, [0, 3]))
        assert res.rank == 2 and res.weierstrass_degree_f == 0

    def test_unit_with_tail_rank_two(self, prof3):
        res = vcris_rank(make_series(prof3, [1, 3]),
                         Series.variable(prof3.w_ring, "Y", prof3.trunc_y))
        assert res.rank == 2

    def test_primitivity(self, prof3):
        p_series = make_series(prof3, [3])
        with pytest.raises(NotPrimitive):
            vcris_rank(p_series, p_series)

    def test_invariance_under_unit_rescale(self, prof3, rng):
        one = Series.one(prof3.w_ring, "Y", prof3.trunc_y)
        f, g = make_series(prof3, [3, 1]), one
        base = vcris_rank(f, g).rank
        for _ in range(5):
            u = random_series(prof3, rng, max_deg=3, unit_constant=True)
            assert vcris_rank(f * u, g * u).rank == base

    def test_invariance_under_e2_rescaling(self, prof3):
        one = Series.one(prof3.w_ring, "Y", prof3.trunc_y)
        f = make_series(prof3, [3, 1])
        for n in range(3):
            assert vcris_rank(f, one.scale_p(-n)).rank == 1
        g = make_series(prof3, [0, 3])
        for n in range(3):
            assert vcris_rank(one, g.scale_p(-n)).rank == 2


def _module(prof, phi_entries, fil_steps):
    w = prof.w_ring
    my = prof.trunc_y
    zero = Series.zero(w, "Y", my)
    phi = [[make_series(prof, [c]) if isinstance(c, int) else c
            for c in row] for row in phi_entries]
    conn = [[zero, zero], [zero, zero]]
    return FilteredModule(prof, 2, phi, conn, fil_steps)


class TestClassify:
    def _vectors(self, prof):
        w = prof.w_ring
        my = prof.trunc_y
        one = Series.one(w, "Y", my)
        zero = Series.zero(w, "Y", my)
        return [one, zero], [zero, one], one, zero

    def test_counterexample(self, prof3):
        e1, e2, one, zero = self._vectors(prof3)
        D = _module(prof3, [[3, 0], [0, 1]],
                    [FiltrationStep(0, [e1, e2]),
                     FiltrationStep(1, [[make_series(prof3, [3, 1]), one]])])
        out = classify(D)
        assert out.verdict == WEAKLY_ADMISSIBLE_NON_ADMISSIBLE
        assert out.vcris.rank == 1
        assert out.weak_admissibility.passed is True

    def test_admissible_mixed(self, prof3):
        e1, e2, one, zero = self._vectors(prof3)
        D = _module(prof3, [[3, 0], [0, 1]],
                    [FiltrationStep(0, [e1, e2]),
                     FiltrationStep(1, [[one, make_series(prof3, [0, 3])]])])
        out = classify(D)
        assert out.verdict == ADMISSIBLE_MIXED
        assert out.breuil_verdict.passed is True

    def test_admissible_swapped_slopes(self, prof3):
        # Frobenius diag(1, p): the classifier swaps coordinates
        e1, e2, one, zero = self._vectors(prof3)
        D = _module(prof3, [[1, 0], [0, 3]],
                    [FiltrationStep(0, [e1, e2]),
                     FiltrationStep(1, [[make_series(prof3, [0, 3]), one]])])
        out = classify(D)
        assert out.verdict == ADMISSIBLE_MIXED

    def test_etale(self, prof3):
        e1, e2, one, zero = self._vectors(prof3)
        D = _module(prof3, [[3, 0], [0, 3]],
                    [FiltrationStep(1, [e1, e2])])
        assert classify(D).verdict == ETALE

    def test_multiplicative(self, prof3):
        e1, e2, one, zero = self._vectors(prof3)
        D = _module(prof3, [[1, 0], [0, 1]],
                    [FiltrationStep(0, [e1, e2])])
        assert classify(D).verdict == MULTIPLICATIVE

    def test_not_weakly_admissible(self, prof3):
        e1, e2, one, zero = self._vectors(prof3)
        D = _module(prof3, [[3, 0], [0, 1]],
                    [FiltrationStep(0, [e1, e2]),
                     FiltrationStep(1, [e2])])
        assert classify(D).verdict == NOT_WEAKLY_ADMISSIBLE

    def test_rejects_weights_outside_01(self, prof3):
        e1, e2, one, zero = self._vectors(prof3)
        D = _module(prof3, [[9, 0], [0, 1]],
                    [FiltrationStep(0, [e1, e2]),
                     FiltrationStep(2, [[one, one]])])
        with pytest.raises(UnsupportedShape):
            classify(D)

    def test_rejects_non_diagonal(self, prof3):
        e1, e2, one, zero = self._vectors(prof3)
        D = _module(prof3, [[3, one], [0, 1]],
                    [FiltrationStep(0, [e1, e2])])
        with pytest.raises(UnsupportedShape):
            classify(D)

    def test_precision_stability(self):
        # a conclusive verdict does not flip when precision rises by 50%
        from padicmf.padic import PrecisionProfile
        for factor in (1.0, 1.5):
            prof = PrecisionProfile(p=3).scaled(factor)
            e1 = [Series.one(prof.w_ring, "Y", prof.trunc_y),
                  Series.zero(prof.w_ring, "Y", prof.trunc_y)]
            e2 = [e1[1], e1[0]]
            one = e1[0]
            D = _module(prof, [[3, 0], [0, 1]],
                        [FiltrationStep(0, [e1, e2]),
                         FiltrationStep(1, [[make_series(prof, [3, 1]),
                                             one]])])
            assert classify(D).verdict == WEAKLY_ADMISSIBLE_NON_ADMISSIBLE
