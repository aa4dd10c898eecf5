"""Rational preperiodic classifier tests."""

import io
import random
from fractions import Fraction
from math import gcd

import pytest

from oracles import brute_force_preperiodic

from dynw.classify import (
    classify,
    orbit,
    preperiodic_candidates,
    records_csv_text,
    sweep,
)
from dynw.config import RunConfig
from dynw.dynatomic import degree_d0
from dynw.errors import StepBudgetExceeded
from dynw.portraits import cycle_structure


def test_candidates_square_denominator():
    cands = preperiodic_candidates(Fraction(-3, 4))
    for x in (Fraction(1, 2), Fraction(-1, 2), Fraction(3, 2), Fraction(-3, 2)):
        assert x in cands
    assert preperiodic_candidates(Fraction(1, 3)) == []
    assert preperiodic_candidates(Fraction(2, 9)) != []
    # c = 5: integer candidates only, reaching past the escape radius ~2.8
    cands = preperiodic_candidates(Fraction(5))
    assert all(x.denominator == 1 for x in cands)
    assert {Fraction(k) for k in range(-2, 3)} <= set(cands)


def test_orbit_examples():
    rec = orbit(Fraction(-1), Fraction(1), 64)
    assert rec.orbit == [1, 0, -1]
    assert (rec.preperiod, rec.eventual_period, rec.escaped) == (1, 2, False)

    rec = orbit(Fraction(0), Fraction(0), 64)
    assert (rec.preperiod, rec.eventual_period) == (0, 1)

    rec = orbit(Fraction(1), Fraction(1), 64)
    assert rec.escaped

    with pytest.raises(ValueError):
        orbit(Fraction(0), Fraction(0), 0)


def test_orbit_consistency_invariant():
    rng = random.Random(3)
    for _ in range(200):
        c = Fraction(rng.randint(-8, 8), rng.choice((1, 1, 4, 9)))
        if c.denominator > 1 and gcd(c.numerator, c.denominator) != 1:
            continue
        for x in preperiodic_candidates(c)[:6]:
            rec = orbit(c, x, 256)
            if rec.escaped:
                continue
            for a, b in zip(rec.orbit, rec.orbit[1:]):
                assert a * a + c == b
            m, n = rec.preperiod, rec.eventual_period
            val = x
            for _ in range(m + n):
                val = val * val + c
            target = x
            for _ in range(m):
                target = target * target + c
            assert val == target


def test_classify_known_parameters():
    r = classify(Fraction(-3, 4))
    assert r.label == "4(1,1)" and r.generic and r.point_count == 4
    assert set(r.points) == {Fraction(3, 2), Fraction(-3, 2), Fraction(1, 2), Fraction(-1, 2)}

    assert classify(Fraction(1)).label == "empty"
    assert classify(Fraction(1)).point_count == 0

    r = classify(Fraction(-1))
    assert not r.generic and "NonGeneric" in r.flags
    assert r.label == "3(2)" and set(r.points) == {-1, 0, 1}

    assert classify(Fraction(0)).label == "3(1,1)"
    assert classify(Fraction(1, 4)).label == "2(1)"
    assert classify(Fraction(-2)).label == "5(1,1)a"
    assert classify(Fraction(-29, 16)).label == "8(3)"
    assert classify(Fraction(-21, 16)).label == "8(2,1,1)"


def test_classify_soundness():
    """Every vertex value satisfies its recorded preperiod/period exactly."""
    rng = random.Random(8)
    for _ in range(60):
        c = Fraction(rng.randint(-10, 10), rng.choice((1, 4, 9, 16)))
        c = Fraction(c.numerator, c.denominator)
        rec = classify(c)
        pts = set(rec.points)
        for x in rec.points:
            assert x * x + c in pts  # forward closure
            o = orbit(c, x, 256)
            assert not o.escaped
            m, n = o.preperiod, o.eventual_period
            # minimality: no smaller pair works
            val = x
            seq = [x]
            for _ in range(m + n):
                val = val * val + c
                seq.append(val)
            assert seq[m + n] == seq[m]
            for mm in range(m):
                assert seq[mm] != seq[mm + n]
            for nn in range(1, n):
                assert seq[m] != seq[m + nn] if m + nn <= m + n else True


def test_classify_generic_structure_constraints():
    rng = random.Random(12)
    for _ in range(80):
        c = Fraction(rng.randint(-12, 12), rng.choice((1, 1, 4, 9, 25)))
        rec = classify(c)
        if rec.generic:
            assert rec.point_count % 2 == 0
            sigma = cycle_structure(rec.portrait)
            for length in set(sigma.lengths):
                assert sigma.count(length) <= degree_d0(length)
        assert rec.point_count == rec.portrait.n


def test_candidate_completeness_against_brute_force():
    rng = random.Random(2718)
    checked = 0
    while checked < 12:  # the full 50-parameter sweep runs in the acceptance suite
        den = rng.choice((1, 4, 9))
        num = rng.randint(-10, 10)
        if gcd(abs(num), den) != 1:
            continue
        c = Fraction(num, den)
        if max(abs(c.numerator), c.denominator) > 10:
            continue
        checked += 1
        oracle = brute_force_preperiodic(c, 10)
        cands = set(preperiodic_candidates(c))
        assert oracle <= cands, f"missed preperiodic points at c={c}"
        assert oracle == {x for x in cands if not orbit(c, x, 256).escaped}


def test_sweep_height_one():
    summary = sweep(1)
    assert [r.c for r in summary.records] == [Fraction(-1), Fraction(0), Fraction(1)]
    by_c = {r.c: r for r in summary.records}
    assert not by_c[Fraction(-1)].generic
    assert not by_c[Fraction(0)].generic
    assert by_c[Fraction(1)].label == "empty"
    assert summary.anomalies == []


def test_sweep_csv_output():
    buf = io.StringIO()
    summary = sweep(2, out=buf)
    lines = buf.getvalue().strip().split("\n")
    assert lines[0] == "c_num,c_den,portrait_serialized,canonical_label,generic,point_count,flags"
    assert len(lines) == len(summary.records) + 1
    # deterministic order: by height, then numerator, then denominator
    cs = [(int(line.split(",")[0]), int(line.split(",")[1])) for line in lines[1:]]
    keys = [(max(abs(a), b), a, b) for a, b in cs]
    assert keys == sorted(keys)


def test_sweep_parallel_matches_serial():
    serial = sweep(6, config=RunConfig(jobs=1))
    parallel = sweep(6, config=RunConfig(jobs=2))
    assert records_csv_text(serial.records) == records_csv_text(parallel.records)


def test_step_budget():
    with pytest.raises(StepBudgetExceeded):
        # a genuinely periodic point cannot resolve in a single step
        orbit(Fraction(-1), Fraction(0), 1)
