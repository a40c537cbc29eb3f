"""The truncated divided-power ring S and rank-2 Breuil modules.

S-elements are stored in the basis u^n / floor(n/e)! with coefficients in
the unramified series base, so every product stays integral: the carry
factor floor((m+n)/e)! / (floor(m/e)! floor(n/e)!) is a positive integer
(a binomial coefficient times a rising factorial).  The degree-one ideal
is generated by the divided powers of the Eisenstein polynomial, and the
quotient by it is the ramified series base via u -> pi.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from .errors import InvalidInput, NotAUnit, NotNormalized, RingMismatch
from .padic import INF, OKElement, PadicElement, vp_int
from .report import Verdict
from .series import Series, derivation_dY, frobenius_R0, invert_series

_fact = math.factorial


def carry_factor(i: int, j: int, e: int) -> int:
    """Integer with (u^i/a_i!)(u^j/a_j!) = C * u^(i+j)/a_(i+j)!."""
    return _fact((i + j) // e) // (_fact(i // e) * _fact(j // e))


def _cap_w(c: PadicElement, n):
    if c.prec <= n:
        return c
    if c.unit is None or n <= c.val:
        return PadicElement.zero(c.prof, n)
    return PadicElement.make(c.prof, c.val, c.unit, n)


def _cap_precision(c, n):
    """Reduce a coefficient's claimed absolute precision to n p-digits."""
    if isinstance(c, OKElement):
        return OKElement(c.prof, [_cap_w(x, n) for x in c.coeffs])
    return _cap_w(c, n)


class SElement:
    """p^scale * sum b_n u^n / floor(n/e)! with b_n in the series base."""

    __slots__ = ("profile", "coeffs", "scale", "valid")

    def __init__(self, profile, coeffs, scale=0, valid=None):
        self.profile = profile
        if len(coeffs) != profile.trunc_u:
            raise InvalidInput("S-element needs trunc_u coefficients")
        self.coeffs = coeffs
        self.scale = scale
        self.valid = profile.trunc_u if valid is None \
            else min(valid, profile.trunc_u)

    # -- constructors ---------------------------------------------------

    @staticmethod
    def zero(profile):
        w = profile.w_ring
        my = profile.trunc_y
        return SElement(profile, [Series.zero(w, "Y", my)
                                  for _ in range(profile.trunc_u)])

    @staticmethod
    def from_series(profile, f: Series, u_degree=0):
        if f.ring.kind != "w":
            raise RingMismatch("S coefficients live over the unramified base")
        out = SElement.zero(profile)
        coeffs = list(out.coeffs)
        coeffs[u_degree] = f
        return SElement(profile, coeffs, 0)

    @staticmethod
    def one(profile):
        w = profile.w_ring
        return SElement.from_series(
            profile, Series.one(w, "Y", profile.trunc_y))

    @staticmethod
    def u(profile, degree=1):
        """The monomial u^degree (divided-power basis coefficient 1)."""
        w = profile.w_ring
        return SElement.from_series(
            profile, Series.one(w, "Y", profile.trunc_y), degree)

    @staticmethod
    def eisenstein(profile):
        """E(u) as an S-element (degrees <= e carry trivial factorials)."""
        w = profile.w_ring
        my = profile.trunc_y
        out = SElement.zero(profile)
        coeffs = list(out.coeffs)
        for i, c in enumerate(profile.eisenstein):
            if c != 0:
                coeffs[i] = Series.constant(w, "Y", my, w.from_int(c))
        return SElement(profile, coeffs)

    # -- structure ------------------------------------------------------

    def _chk(self, other):
        if self.profile is not other.profile:
            raise RingMismatch("S-elements from different profiles")

    def is_zero(self):
        return all(f.is_zero() for f in self.coeffs[:self.valid])

    def min_val(self):
        """Minimal p-valuation over stored coefficients, scale included."""
        best = INF
        for f in self.coeffs[:self.valid]:
            for c in f.coeffs[:f.valid]:
                if not c.is_zero():
                    best = min(best, f.ring.val(c) + f.scale)
        return best + self.scale if best != INF else INF

    def constant_val(self):
        """p-valuation of the u^0 Y^0 coefficient (INF if it vanishes)."""
        c = self.coeffs[0].constant_term()
        if c.is_zero():
            return INF
        return c.val_p() + self.scale

    def _ord(self):
        for i in range(self.valid):
            if not self.coeffs[i].is_exact_zero():
                return i
        return self.valid

    def _aligned(self, other):
        s = min(self.scale, other.scale)

        def shift(x):
            if x.scale == s:
                return x
            return SElement(x.profile,
                            [f.scale_p(x.scale - s) for f in x.coeffs],
                            s, x.valid)
        return shift(self), shift(other)

    # -- arithmetic -------------------------------------------------------

    def __add__(self, other):
        self._chk(other)
        a, b = self._aligned(other)
        return SElement(self.profile,
                        [x + y for x, y in zip(a.coeffs, b.coeffs)],
                        a.scale, min(a.valid, b.valid))

    def __neg__(self):
        return SElement(self.profile, [-f for f in self.coeffs],
                        self.scale, self.valid)

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        self._chk(other)
        prof = self.profile
        e = prof.e
        mu = prof.trunc_u
        w = prof.w_ring
        my = prof.trunc_y
        out = [Series.zero(w, "Y", my) for _ in range(mu)]
        for i, a in enumerate(self.coeffs):
            if a.is_exact_zero():
                continue
            for j in range(mu - i):
                b = other.coeffs[j]
                if b.is_exact_zero():
                    continue
                prod = a * b
                cf = carry_factor(i, j, e)
                if cf != 1:
                    prod = prod.scalar_mul(cf)
                out[i + j] = out[i + j] + prod
        valid = min(mu, self.valid + other._ord(), other.valid + self._ord())
        return SElement(prof, out, self.scale + other.scale, valid)

    def scalar_series(self, f: Series):
        return SElement(self.profile, [f * g for g in self.coeffs],
                        self.scale, self.valid)

    def scalar_int(self, n: int):
        return SElement(self.profile,
                        [g.scalar_mul(n) for g in self.coeffs],
                        self.scale, self.valid)

    def scale_p(self, k: int):
        return SElement(self.profile, self.coeffs, self.scale + k,
                        self.valid)

    def inv(self):
        """Inverse when the u^0 coefficient series is invertible.

        Divided-power multiplication is triangular in the u-degree with
        unit carry C(0, n) = 1, so a graded recursion over inversion in
        the coefficient base suffices.
        """
        prof = self.profile
        b0 = self.coeffs[0]
        if b0.coeffs[0].is_zero():
            raise NotAUnit("u^0 coefficient is not invertible")
        b0inv = invert_series(b0)
        mu = prof.trunc_u
        w = prof.w_ring
        out = [b0inv] + [Series.zero(w, "Y", prof.trunc_y)
                         for _ in range(mu - 1)]
        e = prof.e
        for n in range(1, mu):
            acc = Series.zero(w, "Y", prof.trunc_y)
            for i in range(1, n + 1):
                if self.coeffs[i].is_exact_zero():
                    continue
                term = self.coeffs[i] * out[n - i]
                cf = carry_factor(i, n - i, e)
                if cf != 1:
                    term = term.scalar_mul(cf)
                acc = acc + term
            out[n] = -(b0inv * acc)
        return SElement(prof, out, -self.scale, self.valid)

    def __eq__(self, other):
        if not isinstance(other, SElement):
            return NotImplemented
        return (self - other).is_zero()

    __hash__ = None

    def __repr__(self):
        terms = []
        for i, f in enumerate(self.coeffs[:self.valid]):
            if not f.is_zero():
                terms.append(f"({f!r})*u^{i}/{_fact(i // self.profile.e)}")
        pre = f"{self.profile.p}^{self.scale} * " if self.scale else ""
        return pre + (" + ".join(terms[:6]) if terms else "0")


# ----------------------------------------------------------------------
# spec-level operations
# ----------------------------------------------------------------------

def s_add(x: SElement, y: SElement) -> SElement:
    return x + y


def s_mul(x: SElement, y: SElement) -> SElement:
    return x * y


def phi_S(x: SElement) -> SElement:
    """Frobenius: coefficientwise on the base, u -> u^p on the basis.

    phi(u^n/a_n!) = (floor(pn/e)!/floor(n/e)!) u^(pn)/floor(pn/e)!, an
    integer conversion factor since pn >= n.
    """
    prof = x.profile
    p = prof.p
    mu = prof.trunc_u
    w = prof.w_ring
    out = [Series.zero(w, "Y", prof.trunc_y) for _ in range(mu)]
    e = prof.e
    for n, f in enumerate(x.coeffs):
        if n * p >= mu:
            break
        if f.is_exact_zero():
            continue
        conv = _fact((p * n) // e) // _fact(n // e)
        g = frobenius_R0(f)
        if conv != 1:
            g = g.scalar_mul(conv)
        out[n * p] = out[n * p] + g
    return SElement(prof, out, x.scale, min(mu, p * x.valid))


def tail_precision_bound(profile, valid_u) -> int:
    """p-valuation floor of the dropped u-tail under u -> pi.

    val_p(pi^n / floor(n/e)!) >= (n/e)(p-2)/(p-1), increasing in n.
    """
    p, e = profile.p, profile.e
    bound = (valid_u * (p - 2)) // (e * (p - 1))
    if e > 1:
        bound = max(0, bound - 1)
    return bound


def quotient_to_R(x: SElement) -> Series:
    """Evaluate u -> pi; the kernel (to truncation) is the PD ideal.

    pi^n / floor(n/e)! is integral since val_p(j!) <= j/(p-1) <= j.  The
    dropped u-tail contributes only terms of large p-valuation, so the
    output coefficients carry a correspondingly capped precision.
    """
    prof = x.profile
    rr = prof.ok_ring
    my = prof.trunc_y
    out = Series.zero(rr, "Y", my)
    valid = my
    for n, f in enumerate(x.coeffs[:x.valid]):
        if f.is_exact_zero():
            continue
        pin = _pi_power_over_fact(prof, n)
        if rr.kind == "ok":
            g = Series(rr, "Y", my, [rr.coerce(c) for c in f.coeffs],
                       f.scale, f.valid)
        else:
            g = f
        out = out + g.scalar_mul(pin)
        valid = min(valid, g.valid)
    cap = tail_precision_bound(prof, x.valid) - out.scale
    coeffs = [_cap_precision(c, cap) for c in out.coeffs]
    return Series(rr, "Y", my, coeffs, out.scale + x.scale, valid)


def _pi_power_over_fact(prof, n):
    """pi^n / floor(n/e)! as a coefficient of the ramified base."""
    q = n // prof.e
    fact = _fact(q)
    w = prof.w_ring
    fv = vp_int(fact, prof.p) if fact > 1 else 0
    funit = fact // prof.p**fv
    finv = (w.from_int(funit).inv() if funit != 1 else w.one()).scale(-fv)
    if prof.e == 1:
        # pi is the root of the degree-1 Eisenstein polynomial: -a0
        root = -prof.eisenstein[0]
        rv = vp_int(root, prof.p)
        runit = root // prof.p**rv
        acc = w.from_int(runit ** q).scale(rv * q) if q else w.one()
        return acc * finv
    ok = prof.ok_ring
    acc = ok.one()
    pi = OKElement.pi(prof, 1)
    for _ in range(n):
        acc = acc * pi
    return acc * OKElement.from_w(finv)


def d_S_u(x: SElement) -> SElement:
    """Connection coefficient: d/dY on each base coefficient, u fixed."""
    return SElement(x.profile, [derivation_dY(f) for f in x.coeffs],
                    x.scale, x.valid)


def lift_to_S(g1: Series) -> SElement:
    """Canonical section of the quotient: pi^j -> u^j on the standard basis."""
    prof = g1.ring.prof
    out = SElement.zero(prof)
    coeffs = list(out.coeffs)
    if g1.ring.kind == "w":
        coeffs[0] = g1
        return SElement(prof, coeffs, 0)
    w = prof.w_ring
    my = prof.trunc_y
    for j in range(prof.e):
        comp = [c.coeffs[j] for c in g1.coeffs]
        coeffs[j] = Series(w, "Y", my, comp, g1.scale, g1.valid)
    return SElement(prof, coeffs, 0)


# ----------------------------------------------------------------------
# Breuil modules
# ----------------------------------------------------------------------

@dataclass
class BreuilModule:
    """Rank-2 free S-module with Fil^1, Frobenius, connection, derivation.

    Frobenius is diagonal with p-power exponents; the degree-one piece is
    the PD ideal times the module plus (e1 + p*lift(g1)*e2) S.  Connection
    and u-derivation matrices are zero in this construction; the latter is
    stored for format completeness only.
    """

    profile: object
    g1_lift: SElement
    phi_exponents: tuple = (1, 0)
    connection: list = field(default_factory=list)
    n_derivation: list = field(default_factory=list)

    def __post_init__(self):
        if not self.connection:
            z = SElement.zero(self.profile)
            self.connection = [[z, z], [z, z]]
        if not self.n_derivation:
            z = SElement.zero(self.profile)
            self.n_derivation = [[z, z], [z, z]]

    def fil1_generator(self):
        """(e1, e2) coefficients of the extra degree-one generator."""
        return (SElement.one(self.profile), self.g1_lift.scale_p(1))


def build_breuil(g1: Series, phi_exponents=(1, 0)) -> BreuilModule:
    """Construct the rank-2 module for a normalized degree-one generator.

    `g1` must be integral over the ramified base (the raw generator
    coordinate is p*g1); non-integral input means the caller skipped the
    e2 -> e2/p^n rescaling.
    """
    prof = g1.ring.prof
    for c in g1.coeffs[:g1.valid]:
        if not c.is_zero() and g1.ring.val(c) + g1.scale < 0:
            raise NotNormalized(
                "generator coordinate is not in p*R: rescale e2 first")
    return BreuilModule(prof, lift_to_S(g1), tuple(phi_exponents))


def verify_breuil(M: BreuilModule) -> Verdict:
    """Constructive two-sided check that phi(Fil^1) spans p times the module.

    Forward witnesses: with mu = phi(E)/p a unit, p e2 = mu^{-1} phi(E e2)
    and p e1 = phi(e1 + p g1 e2) - phi(g1) (p e2).  Reverse inclusion:
    phi of each degree-one generator is coefficientwise divisible by p.
    """
    prof = M.profile
    v = Verdict("breuil-module")
    mod = prof.modulus(("Y", prof.trunc_y), ("u", prof.trunc_u))
    a1, a2 = M.phi_exponents
    E = SElement.eisenstein(prof)
    phiE = phi_S(E)
    mu = phiE.scale_p(-1)
    is_unit = mu.min_val() >= 0 and mu.constant_val() == 0
    v.add("phi-E-over-p-unit", is_unit,
          f"phi(E(u))/p has u^0 Y^0 valuation {mu.constant_val()}", mod)
    if not is_unit:
        return v
    mu_inv = mu.inv()

    one = SElement.one(prof)
    p1 = one.scale_p(1)

    # p e2 = x2 phi(E e2); phi(E e2) = p mu p^{a2} e2
    need = -a2
    if need < 0:
        v.add("witness-p-e2", False,
              f"p e2 unreachable: images are divisible by p^{1 + a2}", mod)
        return v
    x2 = mu_inv.scale_p(need)
    ok2 = (x2 * phiE.scale_p(a2) - p1).is_zero()
    v.add("witness-p-e2", ok2,
          "x2 phi(E) p^a2 = p with x2 = p^(-a2) mu^-1", mod)

    # p e1 = c phi(e1 + p g1 e2) + d phi(E e2)
    if a1 > 1:
        v.add("witness-p-e1", False,
              f"p e1 unreachable: needs p^{1 - a1}", mod)
        return v
    c = one.scale_p(1 - a1)
    phig1 = phi_S(M.g1_lift)
    comp1 = c.scale_p(a1) - p1
    d = -(c * phig1 * mu_inv)
    comp2 = (c * phig1).scale_p(1 + a2) + (d * mu).scale_p(1 + a2)
    ok1 = comp1.is_zero() and comp2.is_zero()
    v.add("witness-p-e1", ok1,
          "c phi(e1 + p g1 e2) + d phi(E e2) = p e1", mod)

    # reverse inclusion on the degree-one generators
    vals = [phiE.scale_p(a1).min_val(), phiE.scale_p(a2).min_val(),
            one.scale_p(a1).min_val(), phig1.scale_p(1 + a2).min_val()]
    vals = [x for x in vals if x != INF]
    ok_rev = all(x >= 1 for x in vals)
    v.add("reverse-inclusion", ok_rev,
          f"phi of each Fil^1 generator divisible by p "
          f"(min valuation {min(vals) if vals else 'inf'})", mod)

    # divided powers of E stay in pS after Frobenius
    details = []
    ok_dp = True
    n = 1
    while n * prof.p * prof.e < prof.trunc_u and n <= 6:
        img = phi_S(_dp_power(E, n))
        lower = n - (vp_int(_fact(n), prof.p) if n > 1 else 0)
        got = img.min_val()
        ok_dp = ok_dp and got >= max(1, lower)
        details.append(f"n={n}: val {got} >= {max(1, lower)}")
        n += 1
    v.add("phi-fil1-powers-divisible", ok_dp, "; ".join(details), mod)

    conn_zero = all(s.is_zero() for row in M.connection for s in row)
    nder_zero = all(s.is_zero() for row in M.n_derivation for s in row)
    v.add("connection-horizontal", conn_zero,
          "connection vanishes on the basis; Frobenius trivially horizontal",
          mod)
    v.add("quasi-nilpotence", conn_zero and nder_zero,
          "zero connection and u-derivation are nilpotent mod p", mod)

    # quotient by the degree-one piece is free of rank 1 over the base
    img0 = quotient_to_R(M.fil1_generator()[0])
    c0 = img0.coeffs[0]
    unimodular = (not c0.is_zero()) \
        and img0.ring.val(c0) + img0.scale == 0
    v.add("quotient-rank-one", unimodular,
          "image of the generator has a unit first coordinate", mod)
    return v


def _dp_power(E: SElement, n: int) -> SElement:
    """E(u)^n / n! in the divided-power basis (exact integer rescale)."""
    prof = E.profile
    acc = E
    for _ in range(n - 1):
        acc = acc * E
    f = _fact(n)
    fv = vp_int(f, prof.p) if f > 1 else 0
    unit = f // prof.p**fv
    if unit != 1:
        inv_unit = prof.w_ring.from_int(unit).inv()
        acc = SElement(prof, [g.scalar_mul(inv_unit) for g in acc.coeffs],
                       acc.scale, acc.valid)
    return acc.scale_p(-fv)
