"""Exact p-adic arithmetic with absolute-precision tracking.

Rings covered: Z_p and Q_p, the unramified extension W = W(F_{p^m})[1/p]
with its Frobenius lift ``sigma``, and the totally ramified extension
O_K = W[pi]/E(pi) for an Eisenstein polynomial E.

Every element stores one absolute precision: x is known modulo p^prec.
Operations output the minimum precision implied by their inputs and never
claim more; the relative precision (prec - valuation) is capped at the
profile's digit count.
"""

from __future__ import annotations

import math
from fractions import Fraction

from .errors import (
    HenselFailure,
    InvalidInput,
    InversionOfZero,
    PrecisionExhausted,
    RingMismatch,
)

INF = math.inf


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    d = 3
    while d * d <= n:
        if n % d == 0:
            return False
        d += 2
    return True


def vp_int(n: int, p: int) -> int:
    """p-adic valuation of a nonzero integer."""
    if n == 0:
        raise ValueError("valuation of 0")
    v = 0
    while n % p == 0:
        n //= p
        v += 1
    return v


def _simplify(v):
    """Collapse integral Fractions to int; pass ints and INF through."""
    if isinstance(v, Fraction) and v.denominator == 1:
        return int(v)
    return v


# ----------------------------------------------------------------------
# dense polynomial helpers over F_p (coefficient lists, low degree)
# ----------------------------------------------------------------------

def _fp_trim(a):
    a = list(a)
    while a and a[-1] % 1 == 0 and a[-1] == 0:
        a.pop()
    return a


def _fp_divmod(a, b, p):
    a, b = _fp_trim(a), _fp_trim(b)
    if not b:
        raise ZeroDivisionError
    q = [0] * max(0, len(a) - len(b) + 1)
    r = list(a)
    lc_inv = pow(b[-1], -1, p)
    while r and len(r) >= len(b):
        c = (r[-1] * lc_inv) % p
        shift = len(r) - len(b)
        q[shift] = c
        for i, bc in enumerate(b):
            r[shift + i] = (r[shift + i] - c * bc) % p
        r = _fp_trim(r)
    return q, r


def _fp_mulmod(a, b, poly, p):
    out = [0] * (len(a) + len(b) - 1) if a and b else []
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] = (out[i + j] + x * y) % p
    _, r = _fp_divmod(out, poly, p)
    return r


def _fp_powmod(a, n, poly, p):
    result = [1]
    base = _fp_trim(a)
    while n > 0:
        if n & 1:
            result = _fp_mulmod(result, base, poly, p)
        base = _fp_mulmod(base, base, poly, p)
        n >>= 1
    return result


def _fp_gcd(a, b, p):
    a, b = _fp_trim(a), _fp_trim(b)
    while b:
        _, r = _fp_divmod(a, b, p)
        a, b = b, r
    return a


def _fp_inverse_mod(a, poly, p):
    """s with s*a = 1 mod (poly, p), or None if not invertible."""
    r0, t0 = _fp_trim([c % p for c in poly]), []
    r1, t1 = _fp_trim([c % p for c in a]), [1]
    while r1:
        q, r2 = _fp_divmod(r0, r1, p)
        qt = [0] * (len(q) + len(t1) - 1) if q and t1 else []
        for i, x in enumerate(q):
            if x:
                for j, y in enumerate(t1):
                    qt[i + j] = (qt[i + j] + x * y) % p
        width = max(len(t0), len(qt))
        t2 = [((t0[i] if i < len(t0) else 0) - (qt[i] if i < len(qt) else 0)) % p
              for i in range(width)]
        r0, t0, r1, t1 = r1, t1, r2, _fp_trim(t2)
    if len(r0) != 1:
        return None
    c = pow(r0[0], -1, p)
    _, t = _fp_divmod([(x * c) % p for x in t0], poly, p)
    return t


def _prime_divisors(n):
    out = []
    d = 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1
    if n > 1:
        out.append(n)
    return out


def _irreducible_mod_p(poly, p):
    """Rabin irreducibility test for a monic degree-m poly over F_p."""
    poly = [c % p for c in poly]
    m = len(_fp_trim(poly)) - 1
    if m < 1:
        return False
    x = [0, 1]
    xpm = _fp_powmod(x, p**m, poly, p)
    width = max(len(xpm), 2)
    diff = _fp_trim([((xpm[i] if i < len(xpm) else 0)
                      - (x[i] if i < 2 else 0)) % p for i in range(width)])
    if diff:
        return False
    for q in _prime_divisors(m):
        d = m // q
        xpd = _fp_powmod(x, p**d, poly, p)
        width = max(len(xpd), 2)
        sub = [((xpd[i] if i < len(xpd) else 0)
                - (x[i] if i < 2 else 0)) % p for i in range(width)]
        g = _fp_gcd(sub, poly, p)
        if len(g) != 1:
            return False
    return True


def find_unramified_poly(p: int, m: int) -> tuple[int, ...]:
    """Small-coefficient monic irreducible of degree m over F_p."""
    if m == 1:
        return (0, 1)
    for code in range(1, p**m):
        coeffs = []
        c = code
        for _ in range(m):
            coeffs.append(c % p)
            c //= p
        if coeffs[0] == 0:
            continue
        poly = coeffs + [1]
        if _irreducible_mod_p(poly, p):
            return tuple(poly)
    raise HenselFailure(f"no irreducible degree-{m} polynomial found mod {p}")


# ----------------------------------------------------------------------
# helpers over A = Z[w]/(P(w), p^N): elements are int tuples of length m
# ----------------------------------------------------------------------

def _a_mul(a, b, poly, mod):
    m = len(poly) - 1
    out = [0] * (2 * m - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    for k in range(len(out) - 1, m - 1, -1):
        c = out[k]
        if c:
            out[k] = 0
            for i in range(m):
                out[k - m + i] -= c * poly[i]
    return tuple(c % mod for c in out[:m])


def _a_eval_poly(int_poly, x, poly, mod):
    """Evaluate an integer-coefficient polynomial at x in A (Horner)."""
    m = len(poly) - 1
    acc = (int_poly[-1] % mod,) + (0,) * (m - 1)
    for c in reversed(int_poly[:-1]):
        acc = _a_mul(acc, x, poly, mod)
        acc = ((acc[0] + c) % mod,) + acc[1:]
    return acc


def _a_inv(a, poly, p, n_digits):
    """Inverse in Z[w]/(P, p^N): F_p ext-gcd seed plus Newton lifting."""
    m = len(poly) - 1
    seed = _fp_inverse_mod(list(a), poly, p)
    if seed is None:
        raise InversionOfZero("element not invertible modulo p")
    z = tuple((seed + [0] * m)[:m])
    prec = 1
    while prec < n_digits:
        prec = min(2 * prec, n_digits)
        mod = p ** prec
        az = _a_mul(a, z, poly, mod)
        two_minus = tuple(((2 if i == 0 else 0) - az[i]) % mod for i in range(m))
        z = _a_mul(z, two_minus, poly, mod)
    return z


# ----------------------------------------------------------------------
# precision profile
# ----------------------------------------------------------------------

class PrecisionProfile:
    """Shared, read-only description of the working rings and truncations.

    Fields: prime p > 2, residue degree m, p-adic digit count prec_p,
    ramification e with Eisenstein coefficients, truncation orders
    trunc_y, trunc_u, trunc_c for the formal variables, and the t-degree
    window used by the graded model ring.  Instances are immutable after
    construction and safe to share between threads.
    """

    def __init__(self, p, m=1, prec_p=12, e=1, eisenstein=None,
                 trunc_y=16, trunc_u=24, trunc_c=16, t_window=2,
                 unramified_poly=None):
        if not isinstance(p, int) or not is_prime(p) or p <= 2:
            raise InvalidInput(f"p must be a prime > 2, got {p}")
        if m < 1 or e < 1:
            raise InvalidInput("m and e must be >= 1")
        for name, v in (("prec_p", prec_p), ("trunc_y", trunc_y),
                        ("trunc_u", trunc_u), ("trunc_c", trunc_c)):
            if v < 1:
                raise InvalidInput(f"{name} must be >= 1")
        self.p = p
        self.m = m
        self.prec_p = prec_p
        self.e = e
        if eisenstein is None:
            eisenstein = [-p] + [0] * (e - 1) + [1]
        eisenstein = tuple(int(c) for c in eisenstein)
        if len(eisenstein) != e + 1 or eisenstein[e] != 1:
            raise InvalidInput("Eisenstein polynomial must be monic of degree e")
        for c in eisenstein[1:e]:
            if c != 0 and vp_int(c, p) < 1:
                raise InvalidInput("Eisenstein lower coefficients need val >= 1")
        if eisenstein[0] == 0 or vp_int(eisenstein[0], p) != 1:
            raise InvalidInput("Eisenstein constant term needs val exactly 1")
        self.eisenstein = eisenstein
        self.trunc_y = trunc_y
        self.trunc_u = trunc_u
        self.trunc_c = trunc_c
        self.t_window = t_window
        if unramified_poly is None:
            unramified_poly = find_unramified_poly(p, m)
        unramified_poly = tuple(int(c) for c in unramified_poly)
        if len(unramified_poly) != m + 1 or unramified_poly[m] != 1:
            raise InvalidInput("unramified polynomial must be monic of degree m")
        if m > 1 and not _irreducible_mod_p(unramified_poly, p):
            raise HenselFailure("defining polynomial reducible/inseparable mod p")
        self.unramified_poly = unramified_poly
        self._sigma_pows = self._compute_sigma() if m > 1 else None
        self._w_ring = None
        self._ok_ring = None

    def _compute_sigma(self):
        """Hensel-lift the root w' of P with w' = w^p (mod p); cache powers."""
        p, m, n = self.p, self.m, self.prec_p
        poly = self.unramified_poly
        x0 = _fp_powmod([0, 1], p, [c % p for c in poly], p)
        x = tuple((x0 + [0] * m)[:m])
        dpoly = [i * c for i, c in enumerate(poly)][1:]
        prec = 1
        while prec < n:
            prec = min(2 * prec, n)
            cur = p ** prec
            px = _a_eval_poly(poly, x, poly, cur)
            dpx = _a_eval_poly(dpoly, x, poly, cur)
            dpx_inv = _a_inv(dpx, poly, p, prec)
            corr = _a_mul(px, dpx_inv, poly, cur)
            x = tuple((a - b) % cur for a, b in zip(x, corr))
        pows = [(1,) + (0,) * (m - 1)]
        for _ in range(1, m):
            pows.append(_a_mul(pows[-1], x, poly, p ** n))
        return pows

    def scaled(self, factor: float) -> "PrecisionProfile":
        """Same rings with all precisions multiplied by `factor` (ceiling)."""
        def up(v):
            return max(1, int(math.ceil(v * factor)))
        return PrecisionProfile(
            self.p, self.m, up(self.prec_p), self.e, self.eisenstein,
            up(self.trunc_y), up(self.trunc_u), up(self.trunc_c),
            self.t_window, self.unramified_poly)

    def modulus(self, *vars_with_orders) -> str:
        parts = [f"{self.p}^{self.prec_p}"]
        parts += [f"{v}^{o}" for v, o in vars_with_orders]
        return "mod " + ", ".join(parts)

    @property
    def w_ring(self):
        if self._w_ring is None:
            self._w_ring = WRing(self)
        return self._w_ring

    @property
    def ok_ring(self):
        if self._ok_ring is None:
            self._ok_ring = OKRing(self) if self.e > 1 else self.w_ring
        return self._ok_ring

    def __repr__(self):
        return (f"PrecisionProfile(p={self.p}, m={self.m}, "
                f"prec_p={self.prec_p}, e={self.e})")


# ----------------------------------------------------------------------
# W(F_{p^m})[1/p] elements
# ----------------------------------------------------------------------

class PadicElement:
    """p^val * unit, known modulo p^prec; unit is an int (m=1) or tuple.

    Zero is canonical: unit None, val INF, prec = the absolute precision at
    which the element is known to vanish (INF for the exact zero).
    """

    __slots__ = ("prof", "val", "unit", "prec")

    def __init__(self, prof, val, unit, prec):
        self.prof = prof
        self.val = val
        self.unit = unit
        self.prec = prec

    # -- constructors ---------------------------------------------------

    @staticmethod
    def zero(prof, prec=INF):
        return PadicElement(prof, INF, None, prec)

    @staticmethod
    def make(prof, val, raw, prec):
        """Normalize a raw integer (or tuple) times p^val at abs precision."""
        p, m = prof.p, prof.m
        if prec == INF:
            # exact input: extract the valuation before the relative cap
            if m == 1 or isinstance(raw, int):
                if raw == 0:
                    return PadicElement.zero(prof)
                t = vp_int(raw, p)
                raw = raw // p**t
            else:
                nz = [c for c in raw if c != 0]
                if not nz:
                    return PadicElement.zero(prof)
                t = min(vp_int(c, p) for c in nz)
                raw = tuple(c // p**t for c in raw)
            val += t
        if prec <= val:
            return PadicElement.zero(prof, prec)
        rel = min(prec - val, prof.prec_p)
        mod = p ** rel
        if m == 1:
            r = raw % mod
            if r == 0:
                return PadicElement.zero(prof, min(prec, val + rel))
            t = vp_int(r, p)
            unit = (r // p**t) % (p ** (rel - t))
            return PadicElement(prof, val + t, unit, min(prec, val + rel))
        if isinstance(raw, int):
            raw = (raw,) + (0,) * (m - 1)
        vec = [c % mod for c in raw]
        if all(c == 0 for c in vec):
            return PadicElement.zero(prof, min(prec, val + rel))
        t = min(vp_int(c, p) for c in vec if c != 0)
        sub = p ** (rel - t)
        unit = tuple((c // p**t) % sub for c in vec)
        return PadicElement(prof, val + t, unit, min(prec, val + rel))

    @staticmethod
    def from_int(prof, n, pscale=0):
        if n == 0:
            return PadicElement.zero(prof)
        return PadicElement.make(prof, pscale, n, INF)

    @staticmethod
    def from_vector(prof, coeffs, pscale=0):
        """Exact element sum(a_i w^i) * p^pscale from integer coefficients."""
        if prof.m == 1:
            if len(coeffs) != 1:
                raise InvalidInput("coefficient vector must have length m")
            return PadicElement.from_int(prof, coeffs[0], pscale)
        if len(coeffs) != prof.m:
            raise InvalidInput("coefficient vector must have length m")
        if all(c == 0 for c in coeffs):
            return PadicElement.zero(prof)
        return PadicElement.make(prof, pscale, tuple(coeffs), INF)

    # -- predicates -----------------------------------------------------

    def is_zero(self) -> bool:
        """Indistinguishable from zero at this element's precision."""
        return self.unit is None

    def is_exact_zero(self) -> bool:
        return self.unit is None and self.prec == INF

    def is_unit(self) -> bool:
        return self.unit is not None and self.val == 0

    def val_p(self):
        return self.val

    @property
    def rel(self):
        if self.unit is None:
            return 0
        return self.prec - self.val if self.prec != INF else self.prof.prec_p

    def _vec(self):
        if self.prof.m == 1:
            return (self.unit,)
        return self.unit

    # -- arithmetic -----------------------------------------------------

    def _chk(self, other):
        if self.prof is not other.prof:
            raise RingMismatch("operands from different profiles")

    def __add__(self, other):
        if isinstance(other, int):
            other = PadicElement.from_int(self.prof, other)
        self._chk(other)
        prof = self.prof
        prec = min(self.prec, other.prec)
        if self.unit is None and other.unit is None:
            return PadicElement.zero(prof, prec)
        if self.unit is None:
            return PadicElement.make(prof, other.val, other.unit, prec)
        if other.unit is None:
            return PadicElement.make(prof, self.val, self.unit, prec)
        v = min(self.val, other.val)
        p = prof.p
        if prof.m == 1:
            raw = (self.unit * p**(self.val - v)
                   + other.unit * p**(other.val - v))
        else:
            fa, fb = p**(self.val - v), p**(other.val - v)
            raw = tuple(x * fa + y * fb
                        for x, y in zip(self._vec(), other._vec()))
        return PadicElement.make(prof, v, raw, prec)

    __radd__ = __add__

    def __neg__(self):
        if self.unit is None:
            return self
        raw = -self.unit if self.prof.m == 1 else tuple(-c for c in self.unit)
        return PadicElement.make(self.prof, self.val, raw, self.prec)

    def __sub__(self, other):
        if isinstance(other, int):
            other = PadicElement.from_int(self.prof, other)
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, int):
            other = PadicElement.from_int(self.prof, other)
        self._chk(other)
        prof = self.prof
        if self.unit is None or other.unit is None:
            if self.is_exact_zero() or other.is_exact_zero():
                return PadicElement.zero(prof)
            a = self.prec if self.unit is None else self.val
            b = other.prec if other.unit is None else other.val
            return PadicElement.zero(prof, a + b)
        val = self.val + other.val
        rel = min(self.rel, other.rel, prof.prec_p)
        if prof.m == 1:
            raw = self.unit * other.unit
        else:
            raw = _a_mul(self._vec(), other._vec(), prof.unramified_poly,
                         prof.p ** rel)
        return PadicElement.make(prof, val, raw, val + rel)

    __rmul__ = __mul__

    def inv(self):
        if self.unit is None:
            raise InversionOfZero(
                f"inverse of zero at precision O(p^{self.prec})")
        prof = self.prof
        rel = self.rel
        if rel <= 0:
            raise PrecisionExhausted("no significant digits for inversion")
        if prof.m == 1:
            raw = pow(self.unit, -1, prof.p ** rel)
        else:
            raw = _a_inv(self._vec(), prof.unramified_poly, prof.p, rel)
        return PadicElement.make(prof, -self.val, raw, -self.val + rel)

    def scale(self, k: int):
        """Multiply by p^k exactly."""
        if self.unit is None:
            return PadicElement.zero(
                self.prof, self.prec + k if self.prec != INF else INF)
        return PadicElement(self.prof, self.val + k, self.unit,
                            self.prec + k if self.prec != INF
                            else self.val + k + self.rel)

    def sigma(self):
        """Witt-vector Frobenius: fixes Q_p, maps w to its Hensel conjugate."""
        prof = self.prof
        if prof.m == 1 or self.unit is None:
            return self
        rel = self.rel
        mod = prof.p ** rel
        acc = [0] * prof.m
        for i, c in enumerate(self._vec()):
            if c:
                img = prof._sigma_pows[i]
                for j in range(prof.m):
                    acc[j] = (acc[j] + c * img[j]) % mod
        return PadicElement.make(prof, self.val, tuple(acc), self.prec)

    def __eq__(self, other):
        if not isinstance(other, (PadicElement, int)):
            return NotImplemented
        return (self - other).is_zero()

    __hash__ = None

    def __repr__(self):
        if self.unit is None:
            if self.prec == INF:
                return "0"
            return f"O({self.prof.p}^{self.prec})"
        u = self.unit if self.prof.m == 1 else list(self.unit)
        return f"{self.prof.p}^{self.val}*{u} + O({self.prof.p}^{self.prec})"


# spec-named operation surface ------------------------------------------

def add(x: PadicElement, y: PadicElement) -> PadicElement:
    return x + y


def mul(x: PadicElement, y: PadicElement) -> PadicElement:
    return x * y


def neg(x: PadicElement) -> PadicElement:
    return -x


def inv(x: PadicElement) -> PadicElement:
    return x.inv()


def sigma(x: PadicElement) -> PadicElement:
    return x.sigma()


def val_p(x) -> int | Fraction | float:
    """Valuation normalized so val_p(p) = 1; INF for zero."""
    if isinstance(x, OKElement):
        v = x.val_pi()
        return INF if v == INF else _simplify(Fraction(v, x.prof.e))
    return x.val_p()


# ----------------------------------------------------------------------
# O_K = W[pi]/E(pi) elements
# ----------------------------------------------------------------------

class OKElement:
    """Polynomial of degree < e in pi with PadicElement coefficients.

    The pi-valuation min_j(e*val_p(c_j) + j) is exact: the candidate values
    are pairwise distinct mod e, so the minimum is attained once.
    """

    __slots__ = ("prof", "coeffs")

    def __init__(self, prof, coeffs):
        self.prof = prof
        self.coeffs = tuple(coeffs)

    @staticmethod
    def zero(prof):
        return OKElement(prof, [PadicElement.zero(prof)] * prof.e)

    @staticmethod
    def from_w(x: PadicElement):
        prof = x.prof
        return OKElement(prof, [x] + [PadicElement.zero(prof)] * (prof.e - 1))

    @staticmethod
    def pi(prof, k=1):
        """pi^k for 0 <= k < e."""
        coeffs = [PadicElement.zero(prof)] * prof.e
        coeffs[k] = PadicElement.from_int(prof, 1)
        return OKElement(prof, coeffs)

    def is_zero(self):
        return all(c.is_zero() for c in self.coeffs)

    def is_exact_zero(self):
        return all(c.is_exact_zero() for c in self.coeffs)

    def val_pi(self):
        e = self.prof.e
        best = INF
        for j, c in enumerate(self.coeffs):
            if c.unit is not None:
                best = min(best, e * c.val + j)
        return best

    def val_pi_is_conclusive(self):
        e = self.prof.e
        v = self.val_pi()
        for j, c in enumerate(self.coeffs):
            if c.unit is None and c.prec != INF and e * c.prec + j <= v:
                return False
        return v != INF

    def is_unit(self):
        return self.val_pi() == 0

    def sub_precision_floor(self):
        return min((c.prec for c in self.coeffs), default=INF)

    def _chk(self, other):
        if self.prof is not other.prof:
            raise RingMismatch("operands from different profiles")

    def _coerce(self, other):
        if isinstance(other, int):
            other = PadicElement.from_int(self.prof, other)
        if isinstance(other, PadicElement):
            other = OKElement.from_w(other)
        return other

    def __add__(self, other):
        other = self._coerce(other)
        self._chk(other)
        return OKElement(self.prof,
                         [a + b for a, b in zip(self.coeffs, other.coeffs)])

    __radd__ = __add__

    def __neg__(self):
        return OKElement(self.prof, [-c for c in self.coeffs])

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return (-self) + self._coerce(other)

    def __mul__(self, other):
        other = self._coerce(other)
        self._chk(other)
        prof = self.prof
        e = prof.e
        if e == 1:
            return OKElement(prof, [self.coeffs[0] * other.coeffs[0]])
        prod = [PadicElement.zero(prof) for _ in range(2 * e - 1)]
        for i, a in enumerate(self.coeffs):
            if a.is_exact_zero():
                continue
            for j, b in enumerate(other.coeffs):
                if b.is_exact_zero():
                    continue
                prod[i + j] = prod[i + j] + a * b
        eis = prof.eisenstein
        for k in range(2 * e - 2, e - 1, -1):
            c = prod[k]
            if c.is_exact_zero():
                continue
            prod[k] = PadicElement.zero(prof)
            for i in range(e):
                if eis[i] != 0:
                    prod[k - e + i] = prod[k - e + i] - c * eis[i]
        return OKElement(prof, prod[:e])

    __rmul__ = __mul__

    def scale(self, k: int):
        return OKElement(self.prof, [c.scale(k) for c in self.coeffs])

    def inv(self):
        """Inverse in K = O_K[1/p]; Newton iteration after pi-normalization."""
        prof = self.prof
        if prof.e == 1:
            return OKElement(prof, [self.coeffs[0].inv()])
        v = self.val_pi()
        if v == INF:
            raise InversionOfZero("inverse of zero in O_K[1/p]")
        e = prof.e
        s = (-v) % e
        t = (v + s) // e
        z = self * OKElement.pi(prof, s) if s else self
        y = z.scale(-t)
        # val_pi(y) = 0, attained at the constant coefficient
        zcur = OKElement.from_w(y.coeffs[0].inv())
        two = OKElement.from_w(PadicElement.from_int(prof, 2))
        steps = max(1, math.ceil(math.log2(max(2, e * prof.prec_p)))) + 1
        for _ in range(steps):
            zcur = zcur * (two - y * zcur)
        # x^{-1} = pi^s * (x pi^s)^{-1} = pi^s * p^{-t} * y^{-1}
        out = zcur.scale(-t)
        if s:
            out = OKElement.pi(prof, s) * out
        return out

    def __eq__(self, other):
        if not isinstance(other, (OKElement, PadicElement, int)):
            return NotImplemented
        return (self - self._coerce(other)).is_zero()

    __hash__ = None

    def __repr__(self):
        return "OK(" + ", ".join(repr(c) for c in self.coeffs) + ")"


# ----------------------------------------------------------------------
# coefficient-ring handles used by the series layer
# ----------------------------------------------------------------------

class WRing:
    """Handle for W(F_{p^m})[1/p] coefficients."""

    kind = "w"

    def __init__(self, prof):
        self.prof = prof

    def zero(self):
        return PadicElement.zero(self.prof)

    def one(self):
        return PadicElement.from_int(self.prof, 1)

    def from_int(self, n, pscale=0):
        return PadicElement.from_int(self.prof, n, pscale)

    def p_power(self, k):
        return PadicElement.from_int(self.prof, 1, k)

    def from_descriptor(self, d):
        prof = self.prof
        if isinstance(d, bool):
            raise InvalidInput("boolean is not a coefficient")
        if isinstance(d, int):
            return PadicElement.from_int(prof, d)
        if isinstance(d, list):
            if not all(isinstance(c, int) and not isinstance(c, bool)
                       for c in d):
                raise InvalidInput("coefficient vector entries must be integers")
            return PadicElement.from_vector(prof, d)
        if isinstance(d, dict):
            unknown = set(d) - {"coeffs", "pscale"}
            if unknown:
                raise InvalidInput(
                    f"unknown coefficient fields: {sorted(unknown)}")
            coeffs = d.get("coeffs")
            if not isinstance(coeffs, list):
                raise InvalidInput("'coeffs' must be a list of integers")
            pscale = d.get("pscale", 0)
            if not isinstance(pscale, int) or isinstance(pscale, bool):
                raise InvalidInput("'pscale' must be an integer")
            if prof.m == 1:
                if len(coeffs) != 1:
                    raise InvalidInput("coefficient vector must have length m")
                return PadicElement.from_int(prof, coeffs[0], pscale)
            return PadicElement.from_vector(prof, coeffs, pscale)
        raise InvalidInput(f"bad coefficient descriptor: {d!r}")

    def export(self, x: PadicElement):
        if x.unit is None:
            return 0
        vec = list(x._vec())
        if self.prof.m == 1 and x.val == 0:
            return vec[0]
        return {"coeffs": vec, "pscale": x.val}

    def val(self, x):
        return x.val_p()

    def sigma(self, x):
        return x.sigma()

    def coerce(self, x):
        if isinstance(x, PadicElement):
            if x.prof is not self.prof:
                raise RingMismatch("coefficient from a different profile")
            return x
        raise RingMismatch("expected a W-coefficient")

    def precision_floor(self, x):
        return x.prec


class OKRing:
    """Handle for O_K[1/p] coefficients (only instantiated when e > 1)."""

    kind = "ok"

    def __init__(self, prof):
        self.prof = prof

    def zero(self):
        return OKElement.zero(self.prof)

    def one(self):
        return OKElement.from_w(PadicElement.from_int(self.prof, 1))

    def from_int(self, n, pscale=0):
        return OKElement.from_w(PadicElement.from_int(self.prof, n, pscale))

    def p_power(self, k):
        return OKElement.from_w(PadicElement.from_int(self.prof, 1, k))

    def from_descriptor(self, d):
        if isinstance(d, dict) and "pi_coeffs" in d:
            unknown = set(d) - {"pi_coeffs"}
            if unknown:
                raise InvalidInput(
                    f"unknown coefficient fields: {sorted(unknown)}")
            lst = d["pi_coeffs"]
            if not isinstance(lst, list) or not lst or len(lst) > self.prof.e:
                raise InvalidInput("'pi_coeffs' must list 1..e coefficients")
            w = WRing(self.prof)
            coeffs = [w.from_descriptor(c) for c in lst]
            coeffs += [PadicElement.zero(self.prof)] * (self.prof.e - len(coeffs))
            return OKElement(self.prof, coeffs)
        w = WRing(self.prof)
        return OKElement.from_w(w.from_descriptor(d))

    def export(self, x: OKElement):
        w = WRing(self.prof)
        if all(c.is_zero() for c in x.coeffs[1:]):
            return w.export(x.coeffs[0])
        return {"pi_coeffs": [w.export(c) for c in x.coeffs]}

    def val(self, x):
        v = x.val_pi()
        return INF if v == INF else _simplify(Fraction(v, self.prof.e))

    def sigma(self, x):
        raise RingMismatch("Frobenius is not defined on the ramified ring")

    def coerce(self, x):
        if isinstance(x, OKElement):
            if x.prof is not self.prof:
                raise RingMismatch("coefficient from a different profile")
            return x
        if isinstance(x, PadicElement):
            if x.prof is not self.prof:
                raise RingMismatch("coefficient from a different profile")
            return OKElement.from_w(x)
        raise RingMismatch("expected an O_K coefficient")

    def precision_floor(self, x):
        return x.sub_precision_floor()
