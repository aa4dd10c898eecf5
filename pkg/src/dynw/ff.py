"""Finite fields F_{p^k} as quotients of univariate polynomial rings over F_p.

The modulus of a context is always verified irreducible at construction (a
wrong modulus would silently corrupt every point count downstream): a monic
degree-k polynomial m over F_p is reducible iff it has an irreducible factor
of degree j <= k/2, iff gcd(m, x^{p^j} - x) is nonconstant for some such j.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterator

from .config import RunConfig, DEFAULT
from .errors import BudgetExceeded
from .rational import is_prime

# Dense univariate polynomials over F_p are plain lists of ints, low degree
# first, with no trailing zeros.


def _ptrim(f: list[int]) -> list[int]:
    while f and f[-1] == 0:
        f.pop()
    return f


def _pmul(f: list[int], g: list[int], p: int) -> list[int]:
    if not f or not g:
        return []
    out = [0] * (len(f) + len(g) - 1)
    for i, a in enumerate(f):
        if a == 0:
            continue
        for j, b in enumerate(g):
            out[i + j] = (out[i + j] + a * b) % p
    return _ptrim(out)


def _pmod(f: list[int], m: list[int], p: int) -> list[int]:
    f = f[:]
    dm = len(m) - 1
    inv_lead = pow(m[-1], p - 2, p)
    while len(f) - 1 >= dm and f:
        shift = len(f) - 1 - dm
        factor = f[-1] * inv_lead % p
        for i, c in enumerate(m):
            f[shift + i] = (f[shift + i] - factor * c) % p
        _ptrim(f)
    return f


def _pgcd(f: list[int], g: list[int], p: int) -> list[int]:
    while g:
        f, g = g, _pmod(f, g, p)
    if f:
        inv = pow(f[-1], p - 2, p)
        f = [c * inv % p for c in f]
    return f


def _ppow_x(e: int, m: list[int], p: int) -> list[int]:
    """x^e mod m over F_p, by square and multiply."""
    result = [1]
    base = _pmod([0, 1], m, p)
    while e:
        if e & 1:
            result = _pmod(_pmul(result, base, p), m, p)
        base = _pmod(_pmul(base, base, p), m, p)
        e >>= 1
    return result


def _is_irreducible(m: list[int], p: int) -> bool:
    k = len(m) - 1
    if k < 1:
        return False
    if k == 1:
        return True
    for j in range(1, k // 2 + 1):
        xq = _ppow_x(p**j, m, p)
        diff = xq[:]
        if len(diff) < 2:
            diff += [0] * (2 - len(diff))
        diff[1] = (diff[1] - 1) % p
        g = _pgcd(m, _ptrim(diff), p)
        if len(g) != 1:
            return False
    return True


class FFContext:
    """The field F_{p^k} = F_p[t] / (modulus)."""

    __slots__ = ("p", "k", "modulus", "_zero", "_one")

    def __init__(self, p: int, k: int = 1, modulus: tuple[int, ...] | None = None):
        if not is_prime(p):
            raise ValueError(f"{p} is not prime")
        if k < 1:
            raise ValueError("extension degree must be >= 1")
        self.p = p
        self.k = k
        if modulus is None:
            modulus = self._find_modulus()
        else:
            modulus = tuple(c % p for c in modulus)
            if len(modulus) != k + 1 or modulus[-1] != 1:
                raise ValueError("modulus must be monic of degree k")
            if not _is_irreducible(list(modulus), p):
                raise ValueError("modulus is reducible")
        self.modulus = modulus
        self._zero = FFElement(self, (0,) * k)
        self._one = FFElement(self, (1,) + (0,) * (k - 1))

    def _find_modulus(self) -> tuple[int, ...]:
        """Smallest monic irreducible of degree k, lexicographic on low coefficients."""
        p, k = self.p, self.k
        if k == 1:
            return (0, 1)
        # counter enumerates the k low coefficients in lexicographic order
        for counter in range(p**k):
            coeffs = []
            c = counter
            for _ in range(k):
                coeffs.append(c % p)
                c //= p
            m = coeffs + [1]
            if m[0] != 0 and _is_irreducible(m, p):
                return tuple(m)
        raise RuntimeError("no irreducible modulus found")  # impossible

    @property
    def q(self) -> int:
        return self.p**self.k

    def zero(self) -> "FFElement":
        return self._zero

    def one(self) -> "FFElement":
        return self._one

    def from_int(self, n: int) -> "FFElement":
        return FFElement(self, (n % self.p,) + (0,) * (self.k - 1))

    def from_rational(self, q) -> "FFElement":
        q = Fraction(q)
        if q.denominator % self.p == 0:
            raise ZeroDivisionError(f"denominator of {q} vanishes mod {self.p}")
        num = self.from_int(q.numerator)
        if q.denominator == 1:
            return num
        return num * self.from_int(q.denominator).inverse()

    def element(self, coeffs) -> "FFElement":
        coeffs = tuple(c % self.p for c in coeffs)
        if len(coeffs) != self.k:
            raise ValueError("coefficient vector has wrong length")
        return FFElement(self, coeffs)

    def __eq__(self, other):
        return (
            isinstance(other, FFContext)
            and (self.p, self.k, self.modulus) == (other.p, other.k, other.modulus)
        )

    def __hash__(self):
        return hash((self.p, self.k, self.modulus))

    def __repr__(self):
        return f"FFContext(p={self.p}, k={self.k})"


class FFElement:
    __slots__ = ("context", "coeffs")

    def __init__(self, context: FFContext, coeffs: tuple[int, ...]):
        self.context = context
        self.coeffs = coeffs

    def _check(self, other: "FFElement"):
        if self.context != other.context:
            raise ValueError("elements of different field contexts")

    def __add__(self, other):
        if isinstance(other, int):
            other = self.context.from_int(other)
        self._check(other)
        p = self.context.p
        return FFElement(self.context, tuple((a + b) % p for a, b in zip(self.coeffs, other.coeffs)))

    __radd__ = __add__

    def __neg__(self):
        p = self.context.p
        return FFElement(self.context, tuple(-a % p for a in self.coeffs))

    def __sub__(self, other):
        if isinstance(other, int):
            other = self.context.from_int(other)
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, int):
            other = self.context.from_int(other)
        self._check(other)
        ctx = self.context
        p, k = ctx.p, ctx.k
        if k == 1:
            return FFElement(ctx, (self.coeffs[0] * other.coeffs[0] % p,))
        prod = [0] * (2 * k - 1)
        for i, a in enumerate(self.coeffs):
            if a == 0:
                continue
            for j, b in enumerate(other.coeffs):
                prod[i + j] += a * b
        m = ctx.modulus
        for d in range(2 * k - 2, k - 1, -1):
            c = prod[d] % p
            if c:
                for i in range(k):
                    prod[d - k + i] -= c * m[i]
            prod[d] = 0
        return FFElement(ctx, tuple(v % p for v in prod[:k]))

    __rmul__ = __mul__

    def __pow__(self, e: int):
        if e < 0:
            return self.inverse() ** (-e)
        result = self.context.one()
        base = self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def inverse(self) -> "FFElement":
        """Multiplicative inverse by the extended Euclidean algorithm."""
        if self.is_zero():
            raise ZeroDivisionError("inverse of zero")
        ctx = self.context
        p = ctx.p
        r0, r1 = list(ctx.modulus), _ptrim(list(self.coeffs))
        s0, s1 = [], [1]
        while len(r1) > 1:
            # one division step: r0 = q*r1 + r
            q = [0] * (len(r0) - len(r1) + 1)
            rem = r0[:]
            inv_lead = pow(r1[-1], p - 2, p)
            while len(rem) >= len(r1) and rem:
                shift = len(rem) - len(r1)
                factor = rem[-1] * inv_lead % p
                q[shift] = factor
                for i, c in enumerate(r1):
                    rem[shift + i] = (rem[shift + i] - factor * c) % p
                _ptrim(rem)
            r0, r1 = r1, rem
            qs1 = _pmul(q, s1, p)
            news = [0] * max(len(s0), len(qs1))
            for i, c in enumerate(s0):
                news[i] = c
            for i, c in enumerate(qs1):
                news[i] = (news[i] - c) % p
            s0, s1 = s1, _ptrim(news)
        # r1 is a nonzero constant; normalize
        inv_c = pow(r1[0], p - 2, p)
        s1 = [c * inv_c % p for c in s1]
        s1 += [0] * (ctx.k - len(s1))
        return FFElement(ctx, tuple(s1[: ctx.k]))

    def frobenius(self) -> "FFElement":
        return self ** self.context.p

    def is_zero(self) -> bool:
        return all(c == 0 for c in self.coeffs)

    def __eq__(self, other):
        if isinstance(other, int):
            other = self.context.from_int(other)
        return (
            isinstance(other, FFElement)
            and self.context == other.context
            and self.coeffs == other.coeffs
        )

    def __hash__(self):
        return hash((self.context.p, self.context.k, self.coeffs))

    def __repr__(self):
        if self.context.k == 1:
            return f"ff({self.coeffs[0]} mod {self.context.p})"
        return f"ff({list(self.coeffs)} over p={self.context.p},k={self.context.k})"


def ff_enumerate(ctx: FFContext, config: RunConfig = DEFAULT) -> Iterator[FFElement]:
    """Yield each element of F_{p^k} exactly once, lexicographic on coeffs."""
    if ctx.q > config.enumeration_cap:
        raise BudgetExceeded(f"q = {ctx.q} exceeds enumeration cap {config.enumeration_cap}")
    p, k = ctx.p, ctx.k

    def rec(prefix: tuple[int, ...]) -> Iterator[FFElement]:
        if len(prefix) == k:
            yield FFElement(ctx, prefix)
            return
        for c in range(p):
            yield from rec(prefix + (c,))

    return rec(())
