"""Engine-level tests for the packed integer-polynomial arithmetic."""

import random

import pytest

import dynw._packed as pk


def random_cx(rng, max_x=12, max_c=8, bits=64):
    out = []
    for _ in range(rng.randint(1, max_x)):
        if rng.random() < 0.3:
            out.append(None)
            continue
        out.append([rng.randint(-(2**bits), 2**bits) for _ in range(rng.randint(1, max_c))])
    return pk.cx_trim(out)


def reference_mul(A, B):
    """Schoolbook product on plain dicts, independent of the packed paths."""
    ta, tb = pk.cx_to_terms(A), pk.cx_to_terms(B)
    out = {}
    for (ca, xa), va in ta.items():
        for (cb, xb), vb in tb.items():
            key = (ca + cb, xa + xb)
            out[key] = out.get(key, 0) + va * vb
    return {k: v for k, v in out.items() if v}


def test_pack_round_trip():
    rng = random.Random(1)
    for _ in range(200):
        u = [rng.randint(-(2**100), 2**100) for _ in range(rng.randint(1, 30))]
        while u and u[-1] == 0:
            u.pop()
        W = pk._width_for(pk._bits(u) + 2)
        assert pk._unpack(pk._pack(u, W, len(u) + 3), W, len(u) + 3) == u


def test_mul_matches_reference():
    rng = random.Random(2)
    for _ in range(100):
        A, B = random_cx(rng), random_cx(rng)
        got = pk.cx_to_terms(pk.cx_mul(A, B))
        assert got == reference_mul(A, B)


def test_square_matches_reference():
    rng = random.Random(3)
    for _ in range(100):
        A = random_cx(rng)
        assert pk.cx_to_terms(pk.cx_square(A)) == reference_mul(A, A)


def test_blocked_paths_match_plain(monkeypatch):
    """A tiny block ceiling forces the blocked multiply/square code paths."""
    rng = random.Random(4)
    cases = [(random_cx(rng, max_x=40, max_c=20), random_cx(rng, max_x=40, max_c=20))
             for _ in range(20)]
    plain = [(pk.cx_mul(A, B), pk.cx_square(A)) for A, B in cases]
    monkeypatch.setattr(pk, "MAX_PACK_BYTES", 256)
    for (A, B), (prod, square) in zip(cases, plain):
        assert pk.cx_eq(pk.cx_mul(A, B), prod)
        assert pk.cx_eq(pk.cx_square(A), square)


def test_divexact_random_products():
    rng = random.Random(5)
    for _ in range(100):
        Q = random_cx(rng)
        D = random_cx(rng)
        if not Q or not D:
            continue
        D[-1] = [1]  # monic in x
        N = pk.cx_mul(Q, D)
        assert pk.cx_eq(pk.cx_divexact(N, D), Q)


def test_divexact_rejects_non_exact():
    x2_plus_1 = [[1], None, [1]]
    x_plus_1 = [[1], [1]]
    with pytest.raises(ArithmeticError):
        pk.cx_divexact(x2_plus_1, x_plus_1)
    with pytest.raises(ValueError):
        pk.cx_divexact(x2_plus_1, [[2], [2]])  # not monic
    with pytest.raises(ZeroDivisionError):
        pk.cx_divexact(x2_plus_1, [])


def test_divexact_packs_each_row_once(monkeypatch):
    """The windowed division packs each remainder row exactly once: the pack
    call count stays linear in the dividend, never quadratic."""
    calls = 0
    original = pk._pack

    def counting_pack(u, W, nslots):
        nonlocal calls
        calls += 1
        return original(u, W, nslots)

    monkeypatch.setattr(pk, "_pack", counting_pack)
    rng = random.Random(6)
    Q = pk.cx_trim([[rng.randint(-99, 99)] for _ in range(60)])
    D = pk.cx_trim([[rng.randint(-99, 99)], [3], [1]])
    D[-1] = [1]
    N = pk.cx_mul(Q, D)
    calls = 0
    pk.cx_divexact(N, D, verify=False)
    assert calls <= len(N) + len(D) + 4
