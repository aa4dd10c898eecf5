"""Internal dense arithmetic for integer polynomials in (c, x).

Dynatomic construction multiplies and exactly divides bivariate integer
polynomials whose dense size grows like 4^n; a dict-of-monomials approach
is far too slow past n = 8.  Instead we use Kronecker packing: a
polynomial in c with bounded coefficients is encoded as one big integer
(base 2^W digits, signed), so polynomial products become single big-int
products, which gmpy2/GMP handles with subquadratic algorithms.

Representation ("cx form"): a polynomial in (c, x) is a list indexed by
x-degree whose entries are dense c-coefficient lists of ints (or None for a
zero x-slot).  All arithmetic here is exact over Z; the slot width W of
every packing is derived from rigorous bit-size bounds of the operands, so
digit recovery can never alias.
"""

from __future__ import annotations

try:
    from gmpy2 import mpz
except ImportError:  # pragma: no cover - gmpy2 is a declared dependency
    mpz = int

# --------------------------------------------------------------- c-poly layer
# A c-poly is a dense list of ints, index = degree in c, no trailing zeros.


def _trim(u: list[int]) -> list[int]:
    while u and u[-1] == 0:
        u.pop()
    return u


def _bits(u: list[int]) -> int:
    return max((abs(c).bit_length() for c in u), default=0)


def _pack(u: list[int], W: int, nslots: int) -> "mpz":
    """Encode sum u[i] * 2^(W*i) via byte assembly of positive/negative parts."""
    nbytes = W // 8
    pos = bytearray(nbytes * nslots)
    neg = bytearray(nbytes * nslots)
    for i, coef in enumerate(u):
        if coef > 0:
            pos[i * nbytes : i * nbytes + (coef.bit_length() + 7) // 8] = coef.to_bytes(
                (coef.bit_length() + 7) // 8, "little"
            )
        elif coef < 0:
            coef = -coef
            neg[i * nbytes : i * nbytes + (coef.bit_length() + 7) // 8] = coef.to_bytes(
                (coef.bit_length() + 7) // 8, "little"
            )
    return mpz(int.from_bytes(pos, "little")) - mpz(int.from_bytes(neg, "little"))


def _offset_constant(W: int, nslots: int) -> "mpz":
    half = 1 << (W - 1)
    pattern = half.to_bytes(W // 8, "little")
    return mpz(int.from_bytes(pattern * nslots, "little"))


def _unpack(packed: "mpz", W: int, nslots: int) -> list[int]:
    """Decode signed base-2^W digits; valid while all true digits fit in W-1 bits."""
    return _trim(_unpack_flat(packed, W, nslots))


def _width_for(bits: int) -> int:
    return ((bits + 8) // 8) * 8  # at least one spare bit plus byte alignment


# ------------------------------------------------------------------ cx layer
# cx form: list over x-degree of (c-poly | None).


def cx_trim(A: list) -> list:
    while A and not A[-1]:
        A.pop()
    return [slot if slot else None for slot in A]


def cx_bits(A: list) -> int:
    return max((_bits(s) for s in A if s), default=0)


def cx_nnz(A: list) -> int:
    return sum(1 for s in A if s)


def cx_copy(A: list) -> list:
    return [s[:] if s else None for s in A]


def cx_add(A: list, B: list, sign: int = 1) -> list:
    out = [s[:] if s else None for s in A]
    if len(out) < len(B):
        out += [None] * (len(B) - len(out))
    for i, s in enumerate(B):
        if not s:
            continue
        if out[i] is None:
            out[i] = [sign * c for c in s]
        else:
            t = out[i]
            if len(t) < len(s):
                t += [0] * (len(s) - len(t))
            for j, c in enumerate(s):
                t[j] += sign * c
            _trim(t)
    return cx_trim(out)


def _pack2d(A: list, W: int, n_c: int) -> "mpz":
    """Pack a whole cx form into one integer: x-slot i sits at bit W*n_c*i."""
    nbytes = W // 8
    stride = nbytes * n_c
    pos = bytearray(stride * len(A))
    neg = bytearray(stride * len(A))
    for xi, s in enumerate(A):
        if not s:
            continue
        row = xi * stride
        for ci, coef in enumerate(s):
            if coef > 0:
                b = coef.to_bytes((coef.bit_length() + 7) // 8, "little")
                pos[row + ci * nbytes : row + ci * nbytes + len(b)] = b
            elif coef < 0:
                coef = -coef
                b = coef.to_bytes((coef.bit_length() + 7) // 8, "little")
                neg[row + ci * nbytes : row + ci * nbytes + len(b)] = b
    return mpz(int.from_bytes(pos, "little")) - mpz(int.from_bytes(neg, "little"))


def _unpack2d(M: "mpz", W: int, n_c: int, n_x: int) -> list:
    flat = _unpack_flat(M, W, n_c * n_x)
    out = []
    for xi in range(n_x):
        out.append(_trim(flat[xi * n_c : (xi + 1) * n_c]))
    return cx_trim(out)


def _unpack_flat(packed: "mpz", W: int, nslots: int) -> list[int]:
    nbytes = W // 8
    half = 1 << (W - 1)
    shifted = int(packed + _offset_constant(W, nslots))
    if shifted < 0:
        raise OverflowError("packed value out of range; slot width too small")
    raw = shifted.to_bytes(nbytes * nslots + 16, "little")
    if any(raw[nslots * nbytes :]):
        raise OverflowError("packed value out of range; slot width too small")
    return [
        int.from_bytes(raw[i * nbytes : (i + 1) * nbytes], "little") - half
        for i in range(nslots)
    ]


_SLOTWISE_LIMIT = 8
# ceiling on the byte size of a single packed operand; larger inputs are
# multiplied in x-blocks so peak memory stays bounded
MAX_PACK_BYTES = 192 * 1024 * 1024


def _acc_rows(out: list, chunk: list, offset: int) -> None:
    for r, slot in enumerate(chunk):
        if not slot:
            continue
        tgt = out[offset + r]
        if tgt is None:
            out[offset + r] = slot[:]
            continue
        if len(tgt) < len(slot):
            tgt += [0] * (len(slot) - len(tgt))
        for j, coef in enumerate(slot):
            tgt[j] += coef
        _trim(tgt)


def _block_ranges(n_rows: int, W: int, n_c: int) -> list[tuple[int, int]]:
    row_bytes = n_c * (W // 8)
    per = max(1, MAX_PACK_BYTES // max(row_bytes, 1))
    return [(i, min(i + per, n_rows)) for i in range(0, n_rows, per)]


def _mul2d_blocked(A: list, B: list, W: int, n_c_out: int, n_x_out: int) -> list:
    """Blocked 2-D Kronecker product: x-ranges small enough to pack whole."""
    a_ranges = _block_ranges(len(A), W, n_c_out)
    b_ranges = _block_ranges(len(B), W, n_c_out)
    out: list = [None] * n_x_out
    b_packed = {}
    for lo_a, hi_a in a_ranges:
        pa = _pack2d(A[lo_a:hi_a], W, n_c_out)
        for lo_b, hi_b in b_ranges:
            if (lo_b, hi_b) not in b_packed:
                b_packed[(lo_b, hi_b)] = _pack2d(B[lo_b:hi_b], W, n_c_out)
            chunk = _unpack2d(
                pa * b_packed[(lo_b, hi_b)], W, n_c_out, (hi_a - lo_a) + (hi_b - lo_b) - 1
            )
            _acc_rows(out, chunk, lo_a + lo_b)
    return cx_trim(out)


def cx_mul(A: list, B: list) -> list:
    """Exact product; full 2-D Kronecker when both factors are large."""
    A = cx_trim(cx_copy(A))
    B = cx_trim(cx_copy(B))
    if not A or not B:
        return []
    nc_a = max(len(s) for s in A if s)
    nc_b = max(len(s) for s in B if s)
    pair_bound = min(nc_a, nc_b) * min(cx_nnz(A), cx_nnz(B))
    W = _width_for(cx_bits(A) + cx_bits(B) + pair_bound.bit_length() + 1)
    n_c_out = nc_a + nc_b - 1
    n_x_out = len(A) + len(B) - 1

    if min(cx_nnz(A), cx_nnz(B)) <= _SLOTWISE_LIMIT:
        packed_a = [(_pack(s, W, n_c_out) if s else None) for s in A]
        packed_b = [(_pack(s, W, n_c_out) if s else None) for s in B]
        out = [mpz(0)] * n_x_out
        for i, pa in enumerate(packed_a):
            if pa is None:
                continue
            for j, pb in enumerate(packed_b):
                if pb is None:
                    continue
                out[i + j] += pa * pb
        return cx_trim([_unpack(s, W, n_c_out) if s else None for s in out])

    if max(len(A), len(B)) * n_c_out * (W // 8) > MAX_PACK_BYTES:
        return _mul2d_blocked(A, B, W, n_c_out, n_x_out)
    prod = _pack2d(A, W, n_c_out) * _pack2d(B, W, n_c_out)
    return _unpack2d(prod, W, n_c_out, n_x_out)


def cx_square(A: list) -> list:
    A = cx_trim(cx_copy(A))
    if not A:
        return []
    nc = max(len(s) for s in A if s)
    pair_bound = nc * cx_nnz(A)
    W = _width_for(2 * cx_bits(A) + pair_bound.bit_length() + 1)
    n_c_out = 2 * nc - 1
    n_x_out = 2 * len(A) - 1
    if len(A) * n_c_out * (W // 8) > MAX_PACK_BYTES:
        return _square2d_blocked(A, W, n_c_out, n_x_out)
    packed = _pack2d(A, W, n_c_out)
    return _unpack2d(packed * packed, W, n_c_out, n_x_out)


def _square2d_blocked(A: list, W: int, n_c_out: int, n_x_out: int) -> list:
    ranges = _block_ranges(len(A), W, n_c_out)
    packed = [(_pack2d(A[lo:hi], W, n_c_out), lo, hi) for lo, hi in ranges]
    out: list = [None] * n_x_out
    for i, (pa, lo_a, hi_a) in enumerate(packed):
        for pb, lo_b, hi_b in packed[i:]:
            prod = pa * pb
            if lo_a != lo_b:
                prod *= 2
            chunk = _unpack2d(prod, W, n_c_out, (hi_a - lo_a) + (hi_b - lo_b) - 1)
            _acc_rows(out, chunk, lo_a + lo_b)
    return cx_trim(out)


def cx_divexact(N: list, D: list, verify: bool = True) -> list:
    """Exact quotient N / D for D monic in x; ArithmeticError if not exact.

    Classical long division in (Z[c])[x], but every c-coefficient stays
    Kronecker-packed for the whole run, so each elimination step is one
    big-integer multiply-subtract.  The slot width is a heuristic bound on
    the intermediate coefficient sizes; the final re-multiplication check
    (on by default) makes the result rigorous regardless, and a failed
    check retries with doubled width before concluding the division is not
    exact.
    """
    N = cx_trim(cx_copy(N))
    D = cx_trim(cx_copy(D))
    if not D:
        raise ZeroDivisionError("division by zero polynomial")
    if D[-1] != [1]:
        raise ValueError("divisor must be monic in x")
    if not N:
        return []
    deg_n, deg_d = len(N) - 1, len(D) - 1
    if deg_n < deg_d:
        raise ArithmeticError("non-exact division: dividend degree too small")

    nc = (cx_deg_c(N) + 1) + (cx_deg_c(D) + 1)
    base_bits = cx_bits(N) + cx_bits(D) + nc.bit_length() + 40
    for attempt in range(3):
        W = _width_for(base_bits << attempt)
        quot = _div_packed(N, D, deg_n, deg_d, W, nc)
        if quot is None:
            continue
        if not verify or cx_eq(cx_mul(quot, D), N):
            return quot
    raise ArithmeticError("non-exact division: nonzero remainder")


def _div_packed(N: list, D: list, deg_n: int, deg_d: int, W: int, nc: int):
    """One packed long-division pass; None signals overflow/non-exactness.

    Only a sliding window of deg_d remainder rows is ever packed at once,
    and quotient rows are unpacked as soon as they are produced, so peak
    memory stays near the size of the inputs even for huge dividends.
    """
    dp = [(_pack(s, W, nc) if s else None) for s in D[:deg_d]]
    rows: dict[int, "mpz"] = {}

    def get_row(i: int):
        if i not in rows:
            s = N[i] if i < len(N) and N[i] else None
            rows[i] = _pack(s, W, nc) if s else mpz(0)
        return rows[i]

    quot: list = [None] * (deg_n - deg_d + 1)
    try:
        for xd in range(deg_n, deg_d - 1, -1):
            q = get_row(xd)
            rows.pop(xd, None)
            if q:
                for i, d_i in enumerate(dp):
                    if d_i is not None:
                        idx = xd - deg_d + i
                        rows[idx] = get_row(idx) - q * d_i
                quot[xd - deg_d] = _unpack(q, W, nc)
        if any(get_row(i) for i in range(deg_d)):
            return None
    except OverflowError:
        return None
    return cx_trim(quot)


def cx_eq(A: list, B: list) -> bool:
    A = cx_trim(cx_copy(A))
    B = cx_trim(cx_copy(B))
    if len(A) != len(B):
        return False
    for s, t in zip(A, B):
        if (s or []) != (t or []):
            return False
    return True


def cx_deg_x(A: list) -> int:
    A = cx_trim(cx_copy(A))
    return len(A) - 1


def cx_deg_c(A: list) -> int:
    return max((len(s) - 1 for s in A if s), default=-1)


def cx_to_terms(A: list) -> dict:
    """Exponent map {(e_c, e_x): int} of a cx form."""
    out = {}
    for ex, s in enumerate(A):
        if not s:
            continue
        for ec, coef in enumerate(s):
            if coef:
                out[(ec, ex)] = coef
    return out


# ------------------------------------------------------- iterates of x^2 + c

_fc_cache: list = []


def fc_iterate(n: int) -> list:
    """cx form of the n-th iterate of x^2 + c (f^0 = x), cached."""
    if not _fc_cache:
        _fc_cache.append([None, [1]])  # f^0 = x
    while len(_fc_cache) <= n:
        prev = _fc_cache[-1]
        nxt = cx_square(prev)
        nxt = cx_add(nxt, [[0, 1]])  # + c
        _fc_cache.append(nxt)
    return cx_copy(_fc_cache[n])


def clear_caches() -> None:
    _fc_cache.clear()
