"""Dynatomic polynomial and degree-arithmetic tests."""

import random
from fractions import Fraction

import pytest

from dynw.config import RunConfig
from dynw.dynatomic import (
    asymptotic_genus_check,
    branch_count,
    check_degree_bounds,
    degree_d1,
    degree_report,
    dynatomic,
    euler_phi,
    generalized_dynatomic,
    iterate_fc,
    moebius,
    product_identity_holds,
)
from dynw.multipoly import MultiPoly, poly_exact_divide

P = MultiPoly.parse


def test_iterates():
    assert iterate_fc(0) == MultiPoly.var("x")
    assert iterate_fc(1) == P("x^2 + c")
    assert iterate_fc(2) == P("x^4 + 2*c*x^2 + c^2 + c")  # (x^2+c)^2 + c by hand
    # composition law f^(m+1) = f(f^m)
    f3 = iterate_fc(3)
    assert f3 == iterate_fc(2).substitute("x", P("x^2 + c"))
    with pytest.raises(ValueError):
        iterate_fc(-1)


def test_dynatomic_small_levels():
    assert dynatomic(1).phi == P("x^2 - x + c")
    assert str(dynatomic(2).phi) == "x^2 + x + c + 1"
    # independent oracle for level 3: direct expansion and exact division
    f3 = iterate_fc(3)
    phi3_oracle = poly_exact_divide(f3 - MultiPoly.var("x"), P("x^2 - x + c"))
    t = dynatomic(3)
    assert t.phi == phi3_oracle
    assert t.degree_x == 6 and t.degree_c == 3


def test_dynatomic_degree_bookkeeping():
    for n in range(1, 9):
        t = dynatomic(n)
        assert t.degree_x == degree_d1(n)
        assert 2 * t.degree_c == degree_d1(n)


def test_dynatomic_level_cap():
    cfg = RunConfig(max_dynatomic_n=3)
    with pytest.raises(ValueError):
        dynatomic(4, cfg)
    with pytest.raises(ValueError):
        dynatomic(0)


def test_product_identity_direct():
    # independent path: multiply the MultiPoly factors directly
    x = MultiPoly.var("x")
    for n in range(1, 7):
        prod = MultiPoly.constant(1)
        for d in range(1, n + 1):
            if n % d == 0:
                prod = prod * dynatomic(d).phi
        assert prod == iterate_fc(n) - x


def test_product_identity_engine():
    for n in range(1, 9):
        assert product_identity_holds(n)


def test_generalized_dynatomic():
    g11 = generalized_dynatomic(1, 1)
    assert g11 == P("x^2 + x + c")
    # oracle: the quotient re-multiplies to the composed numerator
    num = dynatomic(1).phi.substitute("x", P("x^2 + c"))
    assert g11 * dynatomic(1).phi == num

    assert generalized_dynatomic(0, 2) == dynatomic(2).phi
    g12 = generalized_dynatomic(1, 2)
    assert g12 == P("x^2 - x + c + 1")
    assert g12 * dynatomic(2).phi == dynatomic(2).phi.substitute("x", P("x^2 + c"))


def test_generalized_dynatomic_identity_grid():
    fpow = {m: iterate_fc(m) for m in range(0, 4)}
    for n in range(1, 5):
        phi = dynatomic(n).phi
        for m in range(1, 4):
            lhs = generalized_dynatomic(m, n) * phi.substitute("x", fpow[m - 1])
            assert lhs == phi.substitute("x", fpow[m])


def test_degree_report_values():
    r = degree_report(3)
    assert (r.D1, r.D0, r.B, r.genus_lb) == (6, 2, 1, Fraction(-1, 2))
    r = degree_report(1)
    assert (r.D1, r.D0, r.B) == (2, 2, 1)  # empty proper-divisor sum
    r = degree_report(12)
    assert (r.D1, r.D0, r.B, r.genus_lb) == (4020, 335, 1959, Fraction(1291, 2))
    r = degree_report(256)  # big-integer-only path goes far beyond construction
    assert r.D1 == 2**256 - 2**128 and r.D1 % 256 == 0
    with pytest.raises(ValueError):
        degree_report(0)
    with pytest.raises(ValueError):
        degree_report(257)


def test_degree_report_against_sympy_oracle():
    sympy = pytest.importorskip("sympy")
    from sympy import divisors
    from sympy.functions.combinatorial.numbers import mobius, totient

    for n in range(1, 25):
        d1 = sum(int(mobius(n // k)) * 2**k for k in divisors(n))
        b = (d1 - sum(int(totient(n // k)) * sum(int(mobius(k // j)) * 2**j for j in divisors(k))
                      for k in divisors(n) if k < n)) // 2
        r = degree_report(n)
        assert r.D1 == d1
        assert r.D0 * n == d1
        assert r.B == b
        assert r.genus_lb == 1 + Fraction(b, 2) - d1 // n


def test_divisibility_property():
    for n in range(1, 65):
        assert degree_d1(n) % n == 0


def test_moebius_and_phi():
    assert [moebius(n) for n in range(1, 11)] == [1, -1, -1, 0, -1, 1, -1, 0, 0, 1]
    assert [euler_phi(n) for n in range(1, 11)] == [1, 1, 2, 2, 4, 2, 6, 4, 6, 4]


def test_check_degree_bounds():
    r = check_degree_bounds(2)
    assert r.D1 == 2 and r.lower == 2 and not r.lower_strict and r.ok
    r = check_degree_bounds(3)
    assert r.lower_strict and r.upper_strict and r.ok  # 4 < 6 < 8
    r = check_degree_bounds(10)
    assert r.lower_strict and r.upper_strict and r.ok
    assert all(check_degree_bounds(n).ok for n in range(1, 31))


def test_asymptotic_genus_check():
    assert asymptotic_genus_check(25).chain_holds
    r12 = asymptotic_genus_check(12)
    assert not r12.chain_holds
    assert r12.B == 1959 and r12.six_d0 == 2010 and not r12.b_exceeds_six_d0
    assert asymptotic_genus_check(30).chain_holds
    assert not asymptotic_genus_check(24).chain_holds
    with pytest.raises(ValueError):
        asymptotic_genus_check(11)


def test_branch_count_small():
    assert branch_count(1) == 1
    assert branch_count(2) == 0
    assert branch_count(3) == 1
    assert branch_count(12) == 1959
    assert all(branch_count(n) >= 0 for n in range(1, 65))


def test_exact_period_of_dynatomic_roots_mod_101():
    """Points where the level-n polynomial vanishes but no lower level does
    have exact period n under x -> x^2 + c."""
    p = 101
    rng = random.Random(17)
    # terms grouped by x-degree: by_xdeg[n][ex] = [(coefficient, c-degree)]
    by_xdeg = {}
    for n in range(1, 9):
        phi = dynatomic(n).phi
        slots = [[] for _ in range(phi.degree("x") + 1)]
        for (ec, ex), coef in phi.terms.items():  # variables are (c, x)
            slots[ex].append((coef.numerator % p, ec))
        by_xdeg[n] = slots

    def x_values(n, c0, cpow):
        """Phi_n(c0, x) for all x, by Horner on the specialized coefficients."""
        ucoef = [sum(co * cpow[ec] for co, ec in slot) % p for slot in by_xdeg[n]]
        out = []
        for x0 in range(p):
            acc = 0
            for co in reversed(ucoef):
                acc = (acc * x0 + co) % p
            out.append(acc)
        return out

    for n in range(1, 9):
        found = 0
        for c0 in rng.sample(range(p), p):
            cpow = [1] * 2048
            for i in range(1, 2048):
                cpow[i] = cpow[i - 1] * c0 % p
            level_n = x_values(n, c0, cpow)
            lower = [x_values(d, c0, cpow) for d in range(1, n)]
            for x0 in range(p):
                if level_n[x0] != 0 or any(vals[x0] == 0 for vals in lower):
                    continue
                z = (x0 * x0 + c0) % p
                length = 1
                while z != x0:
                    z = (z * z + c0) % p
                    length += 1
                    assert length <= n, "orbit exceeded the claimed period"
                assert length == n
                found += 1
            if found >= 50:
                break
        assert found >= 50, f"not enough sample points at level {n}"
