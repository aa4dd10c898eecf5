"""Dynatomic polynomials of x^2 + c and the associated degree arithmetic.

The n-th dynatomic polynomial is computed by the Moebius product

    Phi_n(c, x) = prod_{d | n} (f^d(x) - x)^{mu(n/d)},

organized as a chain of exact divisions (see dynatomic_cx for the staging).
Every division doubles as a correctness assertion, since a non-exact
division can only come from a logic error.

Degree bookkeeping (all exact big-integer arithmetic):

    D1(n) = sum_{k | n} mu(n/k) 2^k          degree in x of Phi_n
    D0(n) = D1(n) / n                        always an integer
    B(n)  = (D1(n) - sum_{k | n, k < n} D1(k) phi(n/k)) / 2
    genus_lb(n) = 1 + B(n)/2 - D0(n)         reported raw, may be negative
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from . import _packed as pk
from .config import RunConfig, DEFAULT
from .errors import NonExactDivision
from .multipoly import MultiPoly, poly_exact_divide
from .rational import divisors_of

VAR_C = "c"
VAR_X = "x"


# ------------------------------------------------------- elementary functions


def moebius(n: int) -> int:
    if n < 1:
        raise ValueError("moebius expects n >= 1")
    result = 1
    d = 2
    while d * d <= n:
        if n % d == 0:
            n //= d
            if n % d == 0:
                return 0
            result = -result
        d += 1
    if n > 1:
        result = -result
    return result


def euler_phi(n: int) -> int:
    if n < 1:
        raise ValueError("euler_phi expects n >= 1")
    result = n
    d = 2
    while d * d <= n:
        if n % d == 0:
            while n % d == 0:
                n //= d
            result -= result // d
        d += 1
    if n > 1:
        result -= result // n
    return result


def degree_d1(n: int) -> int:
    return sum(moebius(n // k) * (1 << k) for k in divisors_of(n))


def degree_d0(n: int) -> int:
    d1 = degree_d1(n)
    if d1 % n:
        raise ArithmeticError(f"n = {n} does not divide D1(n) = {d1}")
    return d1 // n


def branch_count(n: int) -> int:
    """Number of affine branch points of the cycle-parameter map at level n.

    The proper-divisor sum is empty for n = 1, giving B(1) = D1(1)/2 = 1.
    """
    total = degree_d1(n) - sum(
        degree_d1(k) * euler_phi(n // k) for k in divisors_of(n) if k < n
    )
    if total % 2:
        raise ArithmeticError(f"odd branch-count numerator at n = {n}")
    return total // 2


# ----------------------------------------------------------------- cx bridge


def _cx_to_multipoly(cx: list) -> MultiPoly:
    terms = pk.cx_to_terms(cx)
    return MultiPoly((VAR_C, VAR_X), {e: Fraction(c) for e, c in terms.items()})


def _fn_minus_x(n: int) -> list:
    return pk.cx_add(pk.fc_iterate(n), [None, [-1]])


# ------------------------------------------------------------------ operations


def iterate_fc(n: int) -> MultiPoly:
    """The n-th iterate of x^2 + c as a polynomial in (c, x); f^0 = x."""
    if n < 0:
        raise ValueError("iterate count must be >= 0")
    return _cx_to_multipoly(pk.fc_iterate(n))


@dataclass
class DynatomicTable:
    n: int
    phi: MultiPoly
    degree_x: int
    degree_c: int


_dynatomic_cache: dict[int, list] = {}


def _prime_support(n: int) -> list[int]:
    primes = []
    d = 2
    while d * d <= n:
        if n % d == 0:
            primes.append(d)
            while n % d == 0:
                n //= d
        d += 1
    if n > 1:
        primes.append(n)
    return primes


def dynatomic_cx(n: int) -> list:
    """Internal cx form of Phi_n, cached.

    For one or two prime factors the Moebius product is evaluated as a
    chain of single-dividend exact divisions, which keeps the largest
    intermediate close to f^n itself:

        one prime p:     (f^n - x) / (f^(n/p) - x)
        two primes p,q:  [(f^n - x)/(f^(n/p) - x)] / [(f^(n/q) - x)/(f^(n/pq) - x)]

    (Every factor of the inner quotients is a full dynatomic level with the
    right p-adic valuation, so each division is exact.)  Three or more prime
    factors fall back to the two-product form; the smallest such level is 30,
    far beyond the construction cap.
    """
    if n in _dynatomic_cache:
        return pk.cx_copy(_dynatomic_cache[n])
    primes = _prime_support(n)
    try:
        if len(primes) <= 1:
            phi = _fn_minus_x(n)
            if primes:
                phi = pk.cx_divexact(phi, _fn_minus_x(n // primes[0]))
        elif len(primes) == 2:
            p, q = primes
            numer = pk.cx_divexact(_fn_minus_x(n), _fn_minus_x(n // p))
            denom = pk.cx_divexact(_fn_minus_x(n // q), _fn_minus_x(n // (p * q)))
            phi = pk.cx_divexact(numer, denom)
        else:
            numer = None
            denom = None
            for d in divisors_of(n):
                m = moebius(n // d)
                if m == 0:
                    continue
                factor = _fn_minus_x(d)
                if m == 1:
                    numer = factor if numer is None else pk.cx_mul(numer, factor)
                else:
                    denom = factor if denom is None else pk.cx_mul(denom, factor)
            phi = pk.cx_divexact(numer, denom)
    except ArithmeticError as exc:  # pragma: no cover - internal invariant
        raise NonExactDivision(f"dynatomic quotient at n = {n}: {exc}") from exc
    _dynatomic_cache[n] = pk.cx_copy(phi)
    return phi


def dynatomic(n: int, config: RunConfig = DEFAULT) -> DynatomicTable:
    """The n-th dynatomic polynomial with its degree bookkeeping."""
    if n < 1:
        raise ValueError("dynatomic level must be >= 1")
    if n > config.max_dynatomic_n:
        raise ValueError(
            f"n = {n} exceeds max_dynatomic_n = {config.max_dynatomic_n}"
        )
    phi_cx = dynatomic_cx(n)
    d1 = degree_d1(n)
    deg_x = pk.cx_deg_x(phi_cx)
    deg_c = pk.cx_deg_c(phi_cx)
    if deg_x != d1 or 2 * deg_c != d1:
        raise NonExactDivision(
            f"dynatomic degrees at n = {n}: got ({deg_x}, {deg_c}), want ({d1}, {d1 // 2})"
        )
    return DynatomicTable(n=n, phi=_cx_to_multipoly(phi_cx), degree_x=deg_x, degree_c=deg_c)


def product_identity_holds(n: int) -> bool:
    """Check prod_{d | n} Phi_d = f^n - x exactly."""
    prod = None
    for d in sorted(divisors_of(n)):
        phi = dynatomic_cx(d)
        prod = phi if prod is None else pk.cx_mul(prod, phi)
    return pk.cx_eq(prod, _fn_minus_x(n))


def generalized_dynatomic(m: int, n: int, config: RunConfig = DEFAULT) -> MultiPoly:
    """Dynatomic polynomial of preperiod m and eventual period n.

    For m = 0 this is Phi_n; for m >= 1 it is
    Phi_n(c, f^m(x)) / Phi_n(c, f^{m-1}(x)), with the division exact.
    """
    if m < 0 or n < 1:
        raise ValueError("need m >= 0 and n >= 1")
    if n > config.max_dynatomic_n:
        raise ValueError(f"n = {n} exceeds max_dynatomic_n = {config.max_dynatomic_n}")
    phi = dynatomic_cx(n)
    if m == 0:
        return _cx_to_multipoly(phi)
    numer = _compose_x(phi, pk.fc_iterate(m))
    denom = _compose_x(phi, pk.fc_iterate(m - 1))
    try:
        quot = pk.cx_divexact(numer, denom)
    except ArithmeticError as exc:
        raise NonExactDivision(f"generalized dynatomic ({m}, {n}): {exc}") from exc
    return _cx_to_multipoly(quot)


def _compose_x(A: list, g: list) -> list:
    """Substitute x -> g(c, x) in the cx form A, by Horner in x."""
    acc: list = []
    for xd in range(pk.cx_deg_x(A), -1, -1):
        acc = pk.cx_mul(acc, g) if acc else []
        slot = A[xd] if xd < len(A) and A[xd] else None
        if slot:
            acc = pk.cx_add(acc, [slot[:]])
    return acc


# --------------------------------------------------------------- degree reports


@dataclass
class DegreeReport:
    n: int
    D1: int
    D0: int
    B: int
    genus_lb: Fraction


def degree_report(n: int) -> DegreeReport:
    """Exact degree, branch-count, and genus-lower-bound data for level n.

    genus_lb = 1 + B(n)/2 - D0(n) is returned raw (it can be negative and is
    only meaningful as a curve bound for large n; callers decide how to use
    it).
    """
    if n < 1:
        raise ValueError("degree_report expects n >= 1")
    if n > 256:
        raise ValueError("degree_report supports n <= 256")
    d1 = degree_d1(n)
    d0 = degree_d0(n)
    b = branch_count(n)
    genus_lb = 1 + Fraction(b, 2) - d0
    return DegreeReport(n=n, D1=d1, D0=d0, B=b, genus_lb=genus_lb)


@dataclass
class BoundsReport:
    n: int
    D1: int
    lower: int
    upper: int
    lower_holds: bool
    upper_holds: bool
    lower_strict: bool
    upper_strict: bool
    d0_lower_holds: bool
    d0_upper_holds: bool
    d0_lower_strict: bool
    d0_upper_strict: bool
    strict_required: bool
    ok: bool


def check_degree_bounds(n: int) -> BoundsReport:
    """Verify 2^(n-1) <= D1(n) <= 2^n and the D0 analogue, with strictness.

    Strict inequalities are required whenever n >= 3; the report's `ok`
    field records whether everything that must hold does.
    """
    if n < 1:
        raise ValueError("check_degree_bounds expects n >= 1")
    d1 = degree_d1(n)
    d0 = Fraction(d1, n)
    lower, upper = 1 << (n - 1), 1 << n
    lo_holds, hi_holds = lower <= d1, d1 <= upper
    lo_strict, hi_strict = lower < d1, d1 < upper
    d0_lo = Fraction(lower, n)
    d0_hi = Fraction(upper, n)
    d0_lo_holds, d0_hi_holds = d0_lo <= d0, d0 <= d0_hi
    d0_lo_strict, d0_hi_strict = d0_lo < d0, d0 < d0_hi
    strict_required = n >= 3
    ok = lo_holds and hi_holds and d0_lo_holds and d0_hi_holds
    if strict_required:
        ok = ok and lo_strict and hi_strict and d0_lo_strict and d0_hi_strict
    return BoundsReport(
        n=n,
        D1=d1,
        lower=lower,
        upper=upper,
        lower_holds=lo_holds,
        upper_holds=hi_holds,
        lower_strict=lo_strict,
        upper_strict=hi_strict,
        d0_lower_holds=d0_lo_holds,
        d0_upper_holds=d0_hi_holds,
        d0_lower_strict=d0_lo_strict,
        d0_upper_strict=d0_hi_strict,
        strict_required=strict_required,
        ok=ok,
    )


@dataclass
class AsymptoticReport:
    n: int
    chain_holds: bool
    lhs: int
    rhs: int
    B: int
    six_d0: int
    b_exceeds_six_d0: bool


def asymptotic_genus_check(n: int) -> AsymptoticReport:
    """Exact-integer check of the sufficient branch-point growth inequality.

    chain_holds is true iff 2^(n-2) - n*2^floor(n/2) + n >= ceil(6*2^n / n);
    the floor exponent keeps everything in Z and only strengthens the bound.
    The report also records whether B(n) > 6*D0(n) holds outright.
    """
    if n < 12:
        raise ValueError("asymptotic_genus_check expects n >= 12")
    lhs = (1 << (n - 2)) - n * (1 << (n // 2)) + n
    rhs = -((-6 * (1 << n)) // n)  # ceiling division
    b = branch_count(n)
    six_d0 = 6 * degree_d0(n)
    return AsymptoticReport(
        n=n,
        chain_holds=lhs >= rhs,
        lhs=lhs,
        rhs=rhs,
        B=b,
        six_d0=six_d0,
        b_exceeds_six_d0=b > six_d0,
    )


def clear_caches() -> None:
    _dynatomic_cache.clear()
    pk.clear_caches()


__all__ = [
    "DynatomicTable",
    "DegreeReport",
    "BoundsReport",
    "AsymptoticReport",
    "iterate_fc",
    "dynatomic",
    "generalized_dynatomic",
    "degree_report",
    "check_degree_bounds",
    "asymptotic_genus_check",
    "product_identity_holds",
    "degree_d1",
    "degree_d0",
    "branch_count",
    "moebius",
    "euler_phi",
    "poly_exact_divide",
]
