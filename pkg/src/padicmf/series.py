"""Truncated power series over the p-adic coefficient rings.

Univariate series model W(k)[[Y]][1/p] and O_K[[Y]][1/p] at a fixed
truncation order; bivariate grids model K[[c, u]] for the shifted-variable
computations.  Every series carries a "valid up to degree" marker so that
operations which drop high-order information (Frobenius degree inflation,
differentiation) cannot pass dropped terms off as zeros.  Equality is
always "equal modulo (p^N, var^M)" and verdicts report that modulus.
"""

from __future__ import annotations

import math

from .errors import (
    Inconclusive,
    InconclusiveWeierstrass,
    InvalidInput,
    NotAUnit,
    NotPrimitive,
    RingMismatch,
    ZeroWithinTruncation,
)
from .padic import INF, OKElement, _simplify

_FLOOR = math.floor


class Series:
    """Truncated univariate power series: p^scale * sum(coeffs[n] var^n).

    Canonical form extracts the maximal integer p-power into `scale`.
    `valid` is the degree below which coefficients are trustworthy.
    """

    __slots__ = ("ring", "var", "length", "coeffs", "scale", "valid")

    def __init__(self, ring, var, length, coeffs, scale=0, valid=None):
        self.ring = ring
        self.var = var
        self.length = length
        if len(coeffs) != length:
            raise InvalidInput("coefficient list length must equal truncation")
        self.coeffs = coeffs
        self.scale = scale
        self.valid = length if valid is None else min(valid, length)

    # -- constructors ---------------------------------------------------

    @staticmethod
    def zero(ring, var, length):
        return Series(ring, var, length, [ring.zero() for _ in range(length)])

    @staticmethod
    def constant(ring, var, length, c):
        coeffs = [ring.zero() for _ in range(length)]
        coeffs[0] = ring.coerce(c)
        return Series(ring, var, length, coeffs)

    @staticmethod
    def one(ring, var, length):
        return Series.constant(ring, var, length, ring.one())

    @staticmethod
    def variable(ring, var, length):
        coeffs = [ring.zero() for _ in range(length)]
        if length > 1:
            coeffs[1] = ring.one()
        return Series(ring, var, length, coeffs)

    @staticmethod
    def from_coeffs(ring, var, length, coeffs, scale=0):
        coeffs = [ring.coerce(c) for c in coeffs]
        if len(coeffs) > length:
            raise InvalidInput("more coefficients than the truncation order")
        coeffs += [ring.zero() for _ in range(length - len(coeffs))]
        return Series(ring, var, length, coeffs, scale)

    # -- structure ------------------------------------------------------

    def _chk(self, other):
        if self.ring is not other.ring or self.var != other.var \
                or self.length != other.length:
            raise RingMismatch("series from different rings or truncations")

    def is_zero(self) -> bool:
        """Zero modulo (p^prec, var^valid)."""
        return all(c.is_zero() for c in self.coeffs[:self.valid])

    def is_exact_zero(self) -> bool:
        return self.valid == self.length and \
            all(c.is_exact_zero() for c in self.coeffs)

    def ord_lower_bound(self) -> int:
        """Largest d such that all coefficients below d are exactly zero."""
        for i in range(self.valid):
            if not self.coeffs[i].is_exact_zero():
                return i
        return self.valid

    def constant_term(self):
        """Coefficient of degree 0 including the p-power scale."""
        return self.coeffs[0].scale(self.scale) if self.scale \
            else self.coeffs[0]

    def coefficient(self, n):
        if n >= self.length:
            return self.ring.zero()
        return self.coeffs[n].scale(self.scale) if self.scale \
            else self.coeffs[n]

    def canonical(self):
        """Extract the maximal integer p-power into the scale."""
        vals = [self.ring.val(c) for c in self.coeffs if not c.is_zero()]
        if not vals:
            return self
        mu = _FLOOR(min(vals))
        if mu == 0:
            return self
        coeffs = [c.scale(-mu) for c in self.coeffs]
        return Series(self.ring, self.var, self.length, coeffs,
                      self.scale + mu, self.valid)

    def precision_floor(self):
        floors = [self.ring.precision_floor(c) for c in self.coeffs[:self.valid]]
        base = min(floors, default=INF)
        return base + self.scale if base != INF else INF

    # -- arithmetic -----------------------------------------------------

    def _align(self, other):
        s = min(self.scale, other.scale)
        a = self if self.scale == s else Series(
            self.ring, self.var, self.length,
            [c.scale(self.scale - s) for c in self.coeffs], s, self.valid)
        b = other if other.scale == s else Series(
            other.ring, other.var, other.length,
            [c.scale(other.scale - s) for c in other.coeffs], s, other.valid)
        return a, b

    def __add__(self, other):
        self._chk(other)
        a, b = self._align(other)
        coeffs = [x + y for x, y in zip(a.coeffs, b.coeffs)]
        return Series(self.ring, self.var, self.length, coeffs, a.scale,
                      min(a.valid, b.valid))

    def __neg__(self):
        return Series(self.ring, self.var, self.length,
                      [-c for c in self.coeffs], self.scale, self.valid)

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        self._chk(other)
        n = self.length
        zero = self.ring.zero()
        out = [zero for _ in range(n)]
        for i, a in enumerate(self.coeffs):
            if a.is_exact_zero():
                continue
            for j in range(n - i):
                b = other.coeffs[j]
                if b.is_exact_zero():
                    continue
                out[i + j] = out[i + j] + a * b
        valid = min(n, self.valid + other.ord_lower_bound(),
                    other.valid + self.ord_lower_bound())
        return Series(self.ring, self.var, n, out,
                      self.scale + other.scale, valid)

    def scalar_mul(self, c):
        c = self.ring.coerce(c) if not isinstance(c, int) else c
        return Series(self.ring, self.var, self.length,
                      [x * c for x in self.coeffs], self.scale, self.valid)

    def scale_p(self, k: int):
        return Series(self.ring, self.var, self.length, self.coeffs,
                      self.scale + k, self.valid)

    def inv(self):
        return invert_series(self)

    def eval_zero(self):
        """Value at var = 0."""
        return self.constant_term()

    def __eq__(self, other):
        if not isinstance(other, Series):
            return NotImplemented
        return (self - other).is_zero()

    __hash__ = None

    def __repr__(self):
        terms = []
        for i, c in enumerate(self.coeffs[:self.valid]):
            if not c.is_zero():
                terms.append(f"({c!r})*{self.var}^{i}")
        body = " + ".join(terms) if terms else "0"
        pre = f"{self.ring.prof.p}^{self.scale} * " if self.scale else ""
        return f"{pre}{body} + O({self.var}^{self.valid})"


# ----------------------------------------------------------------------
# spec-level operations on univariate series
# ----------------------------------------------------------------------

def frobenius_R0(f: Series) -> Series:
    """Coefficientwise sigma composed with var -> var^p.

    The dropped-degree floor moves from valid to min(p*valid, length):
    the input tail O(Y^valid) maps into degrees >= p*valid.
    """
    ring = f.ring
    if ring.kind != "w":
        raise RingMismatch("Frobenius lives on the unramified series ring")
    p = ring.prof.p
    n = f.length
    out = [ring.zero() for _ in range(n)]
    for i, c in enumerate(f.coeffs):
        if i * p >= n:
            break
        if not c.is_exact_zero():
            out[i * p] = ring.sigma(c)
    valid = min(n, p * f.valid)
    return Series(ring, f.var, n, out, f.scale, valid)


def derivation_dY(f: Series) -> Series:
    """Formal derivative; significant up to degree valid - 1."""
    ring = f.ring
    n = f.length
    out = [f.coeffs[i + 1] * (i + 1) for i in range(n - 1)] + [ring.zero()]
    return Series(ring, f.var, n, out, f.scale, max(0, f.valid - 1))


def _unit_levels(f: Series):
    """Per-coefficient (valuation, conclusive, zero-bound) in pi-units."""
    ring = f.ring
    e = ring.prof.e if ring.kind == "ok" else 1
    levels = []
    for c in f.coeffs[:f.valid]:
        if isinstance(c, OKElement):
            pf = c.sub_precision_floor()
            levels.append((c.val_pi(), c.val_pi_is_conclusive(),
                           e * pf if pf != INF else INF))
        else:
            v = INF if c.is_zero() else c.val_p()
            levels.append((v, not c.is_zero(), c.prec))
    return levels, e


def weierstrass_degree(f: Series) -> int:
    """Index of the first unit coefficient; 0 iff f is a unit of R[1/p].

    The p-power scale counts: p*(1+Y) is not primitive.  Raises
    NotPrimitive when the uniformizer divides every coefficient and
    InconclusiveWeierstrass when no unit appears below the valid degree.
    """
    levels, e = _unit_levels(f)
    if not levels:
        raise InconclusiveWeierstrass("series has no valid coefficients")
    shift = e * f.scale
    for i, (v, conclusive, bound) in enumerate(levels):
        if v == INF:
            bnd = bound + shift if bound != INF else INF
            if bnd <= 0:
                raise InconclusiveWeierstrass(
                    f"coefficient {i} known only to O(pi^{bnd}); "
                    "cannot rule out a unit")
            continue
        if not conclusive:
            raise InconclusiveWeierstrass(
                f"valuation of coefficient {i} not conclusive at precision")
        eff = v + shift
        if eff == 0:
            return i
        if eff < 0:
            raise NotPrimitive(
                "series is not integral; extract the p-power scale first")
    if all(v != INF or (bound + shift if bound != INF else INF) >= 1
           for v, _, bound in levels):
        raise NotPrimitive("uniformizer divides all coefficients")
    raise InconclusiveWeierstrass(
        f"no unit coefficient below degree {f.valid}")


def gauss_valuation(f: Series):
    """min_n val_p(coefficient of Y^n): the generic-point valuation."""
    best = INF
    bound = INF
    for c in f.coeffs[:f.valid]:
        if not c.is_zero():
            best = min(best, f.ring.val(c))
        else:
            pf = f.ring.precision_floor(c)
            bound = min(bound, pf)
    if best == INF:
        raise ZeroWithinTruncation(
            "series is zero within truncation; Gauss valuation undefined")
    if bound < best:
        raise Inconclusive(
            f"Gauss valuation >= {bound} only known at this precision")
    return _simplify(best + f.scale)


def invert_series(f):
    """Inverse modulo the truncation ideal; needs an invertible lowest term."""
    if isinstance(f, Bivariate):
        return _invert_bivariate(f)
    ring = f.ring
    c0 = f.coeffs[0]
    if c0.is_zero():
        raise NotAUnit("constant term is zero at the current precision")
    b0 = c0.inv()
    n = f.length
    out = [b0] + [ring.zero() for _ in range(n - 1)]
    for k in range(1, n):
        acc = ring.zero()
        for i in range(1, k + 1):
            if not f.coeffs[i].is_exact_zero():
                acc = acc + f.coeffs[i] * out[k - i]
        out[k] = -(b0 * acc)
    return Series(ring, f.var, n, out, -f.scale, f.valid)


def series_eq(a: Series, b: Series) -> bool:
    return (a - b).is_zero()


def eq_modulus(a: Series, b: Series) -> str:
    prof = a.ring.prof
    d = a - b
    pf = d.precision_floor()
    pexp = prof.prec_p if pf == INF else int(pf)
    return f"mod {prof.p}^{pexp}, {a.var}^{d.valid}"


# ----------------------------------------------------------------------
# bivariate grids K[[c, u]]
# ----------------------------------------------------------------------

class Bivariate:
    """Truncated bivariate series p^scale * sum grid[i][j] c^i u^j.

    `valid` bounds the trustworthy total degree; the monomial ideal
    (c^mc, u^mu) is the structural truncation.
    """

    __slots__ = ("ring", "mc", "mu", "grid", "scale", "valid", "vars")

    def __init__(self, ring, mc, mu, grid, scale=0, valid=None, vars=("c", "u")):
        self.ring = ring
        self.mc = mc
        self.mu = mu
        self.grid = grid
        self.scale = scale
        cap = mc + mu
        self.valid = cap if valid is None else min(valid, cap)
        self.vars = vars

    @staticmethod
    def zero(ring, mc, mu):
        return Bivariate(ring, mc, mu,
                         [[ring.zero() for _ in range(mu)] for _ in range(mc)])

    @staticmethod
    def constant(ring, mc, mu, coeff):
        z = Bivariate.zero(ring, mc, mu)
        z.grid[0][0] = ring.coerce(coeff)
        return z

    @staticmethod
    def one(ring, mc, mu):
        return Bivariate.constant(ring, mc, mu, ring.one())

    def _chk(self, other):
        if self.ring is not other.ring or self.mc != other.mc \
                or self.mu != other.mu:
            raise RingMismatch("bivariate series over different truncations")

    def is_zero(self):
        for i in range(self.mc):
            for j in range(self.mu):
                if i + j < self.valid and not self.grid[i][j].is_zero():
                    return False
        return True

    def ord_lower_bound(self):
        best = self.valid
        for i in range(self.mc):
            for j in range(self.mu):
                if i + j < best and not self.grid[i][j].is_exact_zero():
                    best = i + j
        return best

    def _aligned(self, other):
        s = min(self.scale, other.scale)
        def shift(x):
            if x.scale == s:
                return x
            k = x.scale - s
            grid = [[c.scale(k) for c in row] for row in x.grid]
            return Bivariate(x.ring, x.mc, x.mu, grid, s, x.valid, x.vars)
        return shift(self), shift(other)

    def __add__(self, other):
        self._chk(other)
        a, b = self._aligned(other)
        grid = [[x + y for x, y in zip(ra, rb)]
                for ra, rb in zip(a.grid, b.grid)]
        return Bivariate(self.ring, self.mc, self.mu, grid, a.scale,
                         min(a.valid, b.valid), self.vars)

    def __neg__(self):
        grid = [[-c for c in row] for row in self.grid]
        return Bivariate(self.ring, self.mc, self.mu, grid, self.scale,
                         self.valid, self.vars)

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        self._chk(other)
        ring = self.ring
        zero = ring.zero()
        grid = [[zero for _ in range(self.mu)] for _ in range(self.mc)]
        for i1 in range(self.mc):
            row1 = self.grid[i1]
            for j1 in range(self.mu):
                a = row1[j1]
                if a.is_exact_zero():
                    continue
                for i2 in range(self.mc - i1):
                    row2 = other.grid[i2]
                    tgt = grid[i1 + i2]
                    for j2 in range(self.mu - j1):
                        b = row2[j2]
                        if b.is_exact_zero():
                            continue
                        tgt[j1 + j2] = tgt[j1 + j2] + a * b
        valid = min(self.mc + self.mu,
                    self.valid + other.ord_lower_bound(),
                    other.valid + self.ord_lower_bound())
        return Bivariate(ring, self.mc, self.mu, grid,
                         self.scale + other.scale, valid, self.vars)

    def scalar_mul(self, c):
        c = self.ring.coerce(c) if not isinstance(c, int) else c
        grid = [[x * c for x in row] for row in self.grid]
        return Bivariate(self.ring, self.mc, self.mu, grid, self.scale,
                         self.valid, self.vars)

    def scale_p(self, k):
        return Bivariate(self.ring, self.mc, self.mu, self.grid,
                         self.scale + k, self.valid, self.vars)

    def inv(self):
        return _invert_bivariate(self)

    def mul_u(self):
        """Multiply by u (drop the top u-row)."""
        zero = self.ring.zero()
        grid = [[zero] + row[:-1] for row in self.grid]
        return Bivariate(self.ring, self.mc, self.mu, grid, self.scale,
                         min(self.valid + 1, self.mc + self.mu), self.vars)

    def div_u(self):
        """Exact division by u; the u^0 column must vanish."""
        for i in range(self.mc):
            if not self.grid[i][0].is_zero():
                raise InvalidInput("series not divisible by u")
        zero = self.ring.zero()
        grid = [row[1:] + [zero] for row in self.grid]
        return Bivariate(self.ring, self.mc, self.mu, grid, self.scale,
                         max(0, self.valid - 1), self.vars)

    def subst_u0(self) -> Series:
        """Set u = 0: univariate series in c."""
        coeffs = [row[0] for row in self.grid]
        return Series(self.ring, self.vars[0], self.mc, coeffs, self.scale,
                      min(self.valid, self.mc))

    def constant_term(self):
        return self.grid[0][0].scale(self.scale) if self.scale \
            else self.grid[0][0]

    def precision_floor(self):
        floors = [self.ring.precision_floor(c)
                  for i, row in enumerate(self.grid)
                  for j, c in enumerate(row) if i + j < self.valid]
        base = min(floors, default=INF)
        return base + self.scale if base != INF else INF

    def __eq__(self, other):
        if not isinstance(other, Bivariate):
            return NotImplemented
        return (self - other).is_zero()

    __hash__ = None

    def __repr__(self):
        terms = []
        for i in range(self.mc):
            for j in range(self.mu):
                if i + j < self.valid and not self.grid[i][j].is_zero():
                    terms.append(
                        f"({self.grid[i][j]!r})*"
                        f"{self.vars[0]}^{i}{self.vars[1]}^{j}")
        body = " + ".join(terms[:8]) if terms else "0"
        if len(terms) > 8:
            body += " + ..."
        pre = f"{self.ring.prof.p}^{self.scale} * " if self.scale else ""
        return f"{pre}{body}"


def _invert_bivariate(f: Bivariate) -> Bivariate:
    ring = f.ring
    c00 = f.grid[0][0]
    if c00.is_zero():
        raise NotAUnit("constant term is zero at the current precision")
    b00 = c00.inv()
    mc, mu = f.mc, f.mu
    zero = ring.zero()
    out = [[zero for _ in range(mu)] for _ in range(mc)]
    out[0][0] = b00
    # graded recursion on total degree: triangular in (i, j)
    for d in range(1, mc + mu - 1):
        for i in range(min(d, mc - 1), -1, -1):
            j = d - i
            if j >= mu:
                continue
            acc = zero
            for k in range(i + 1):
                for l in range(j + 1):
                    if k == 0 and l == 0:
                        continue
                    a = f.grid[k][l]
                    if a.is_exact_zero():
                        continue
                    acc = acc + a * out[i - k][j - l]
            out[i][j] = -(b00 * acc)
    return Bivariate(ring, mc, mu, out, -f.scale, f.valid, f.vars)


def taylor_shift(f: Series, mc=None, mu=None) -> Bivariate:
    """F(c, u) = f(c + u), truncated at (mc, mu); F(c, 0) renames Y to c."""
    ring = f.ring
    prof = ring.prof
    mc = prof.trunc_c if mc is None else mc
    mu = prof.trunc_u if mu is None else mu
    zero = ring.zero()
    grid = [[zero for _ in range(mu)] for _ in range(mc)]
    for i in range(mc):
        for j in range(mu):
            n = i + j
            if n >= f.length:
                continue
            a = f.coeffs[n]
            if a.is_exact_zero():
                continue
            grid[i][j] = a * math.comb(n, i)
    return Bivariate(ring, mc, mu, grid, f.scale, f.valid)


def biv_eq_modulus(a: Bivariate, b: Bivariate) -> str:
    prof = a.ring.prof
    d = a - b
    pf = d.precision_floor()
    pexp = prof.prec_p if pf == INF else int(pf)
    return (f"mod {prof.p}^{pexp}, {a.vars[0]}^{a.mc}, {a.vars[1]}^{a.mu}, "
            f"total degree {d.valid}")
