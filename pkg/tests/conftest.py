import random

import pytest

from padicmf.padic import PrecisionProfile
from padicmf.series import Series


@pytest.fixture(scope="session")
def prof3():
    return PrecisionProfile(p=3)


@pytest.fixture(scope="session")
def prof5():
    return PrecisionProfile(p=5)


@pytest.fixture(scope="session")
def prof3m2():
    # residue degree 2 with the generator satisfying w^2 + 2w + 2 = 0 mod 3
    return PrecisionProfile(p=3, m=2, prec_p=10, unramified_poly=(2, 2, 1))


@pytest.fixture(scope="session")
def prof3e2():
    return PrecisionProfile(p=3, e=2, trunc_u=12)


def make_series(prof, coeffs, scale=0, length=None):
    w = prof.w_ring
    n = prof.trunc_y if length is None else length
    return Series.from_coeffs(w, "Y", n, [w.from_int(c) for c in coeffs],
                              scale)


def random_series(prof, rng, max_terms=4, max_deg=None, val_floor=0,
                  unit_constant=False):
    """Sparse random integral series; optionally with a unit constant."""
    my = prof.trunc_y
    max_deg = my - 1 if max_deg is None else max_deg
    coeffs = [0] * my
    for _ in range(rng.randint(1, max_terms)):
        d = rng.randint(0, max_deg)
        coeffs[d] = rng.randint(-20, 20) * prof.p**rng.randint(0, 1)
    if unit_constant:
        c = rng.randint(1, 20)
        while c % prof.p == 0:
            c += 1
        coeffs[0] = c
    if all(c == 0 for c in coeffs):
        coeffs[0] = 1
    return make_series(prof, coeffs, scale=val_floor)


@pytest.fixture
def rng():
    return random.Random(20260809)
