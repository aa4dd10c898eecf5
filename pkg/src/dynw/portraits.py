"""Functional-graph portraits: validation, canonical forms, automorphisms,
embeddings, and exhaustive enumeration of generic quadratic portraits.

A portrait is a finite functional graph: vertex i (1-indexed) has the single
out-edge i -> image[i-1].  A *generic quadratic* portrait additionally has
every in-degree 0 or 2, at most D0(n) cycles of each length n, and zero or
exactly two fixed points.

Canonical forms use AHU subtree encoding on the trees hanging off cycle
vertices, minimal rotation of each cycle's encoding sequence, and a fixed
total order on components, so canonical_form(P) == canonical_form(Q) exactly
when P and Q are isomorphic.

Text format: "N:t1,t2,...,tN" gives the image array; "0:" is the empty
portrait.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import permutations

from .dynatomic import degree_d0
from .errors import BudgetExceeded, InadmissibleCycleStructure, NotGeneric, ParseError

AUT_BUDGET = 20
ENUM_BUDGET = 16


@dataclass(frozen=True)
class Portrait:
    n: int
    image: tuple[int, ...]

    def __post_init__(self):
        if self.n < 0 or len(self.image) != self.n:
            raise ValueError("image array length must equal vertex count")
        for t in self.image:
            if not 1 <= t <= self.n:
                raise ValueError(f"image value {t} out of range 1..{self.n}")

    @staticmethod
    def from_text(text: str) -> "Portrait":
        text = text.strip()
        if ":" not in text:
            raise ParseError(f"portrait text needs 'N:t1,...,tN', got {text!r}")
        head, _, tail = text.partition(":")
        try:
            n = int(head)
        except ValueError as exc:
            raise ParseError(f"bad vertex count in {text!r}") from exc
        tail = tail.strip()
        if not tail:
            img: tuple[int, ...] = ()
        else:
            try:
                img = tuple(int(t) for t in tail.split(","))
            except ValueError as exc:
                raise ParseError(f"bad image entry in {text!r}") from exc
        try:
            return Portrait(n, img)
        except ValueError as exc:
            raise ParseError(str(exc)) from exc

    def to_text(self) -> str:
        return f"{self.n}:" + ",".join(str(t) for t in self.image)

    def successor(self, v: int) -> int:
        return self.image[v - 1]

    def __str__(self) -> str:
        return self.to_text()


EMPTY = Portrait(0, ())


@dataclass(frozen=True)
class CycleStructure:
    lengths: tuple[int, ...]

    def __post_init__(self):
        if any(l < 1 for l in self.lengths):
            raise ValueError("cycle lengths must be positive")
        if tuple(sorted(self.lengths, reverse=True)) != self.lengths:
            raise ValueError("cycle lengths must be nonincreasing")

    @staticmethod
    def of(lengths) -> "CycleStructure":
        return CycleStructure(tuple(sorted(lengths, reverse=True)))

    @staticmethod
    def parse(text: str) -> "CycleStructure":
        text = text.strip().strip("()")
        if not text:
            return CycleStructure(())
        try:
            return CycleStructure.of(int(t) for t in text.split(","))
        except ValueError as exc:
            raise ParseError(f"bad cycle structure {text!r}") from exc

    def count(self, length: int) -> int:
        return sum(1 for l in self.lengths if l == length)

    def admissible(self) -> bool:
        """At most D0(l) cycles of each length l, and never exactly one fixed point."""
        if self.count(1) == 1:
            return False
        return all(self.count(l) <= degree_d0(l) for l in set(self.lengths))

    def __str__(self) -> str:
        return "(" + ",".join(str(l) for l in self.lengths) + ")"


# ----------------------------------------------------------- basic structure


def indegrees(P: Portrait) -> list[int]:
    deg = [0] * P.n
    for t in P.image:
        deg[t - 1] += 1
    return deg


def preimages(P: Portrait) -> list[list[int]]:
    pre: list[list[int]] = [[] for _ in range(P.n)]
    for v in range(1, P.n + 1):
        pre[P.image[v - 1] - 1].append(v)
    return pre


def find_cycles(P: Portrait) -> list[list[int]]:
    """All cycles, each listed in successor order; discovery order is by
    smallest vertex, so the output is deterministic."""
    color = [0] * (P.n + 1)  # 0 unvisited, 1 on current path, 2 done
    cycles = []
    for start in range(1, P.n + 1):
        if color[start]:
            continue
        path = []
        v = start
        while color[v] == 0:
            color[v] = 1
            path.append(v)
            v = P.successor(v)
        if color[v] == 1:
            idx = path.index(v)
            cycles.append(path[idx:])
        for u in path:
            color[u] = 2
    return cycles


def cycle_vertices(P: Portrait) -> set[int]:
    return {v for cyc in find_cycles(P) for v in cyc}


def cycle_structure(P: Portrait) -> CycleStructure:
    return CycleStructure.of(len(c) for c in find_cycles(P))


def vertex_depths(P: Portrait) -> list[int]:
    """Distance from each vertex to its cycle (0 on the cycle)."""
    on_cycle = cycle_vertices(P)
    depth = [-1] * (P.n + 1)
    for v in on_cycle:
        depth[v] = 0
    for start in range(1, P.n + 1):
        if depth[start] >= 0:
            continue
        chain = []
        v = start
        while depth[v] < 0:
            chain.append(v)
            v = P.successor(v)
        base = depth[v]
        for i, u in enumerate(reversed(chain), start=1):
            depth[u] = base + i
    return depth


def relabel(P: Portrait, perm: tuple[int, ...]) -> Portrait:
    """Apply a vertex relabeling; perm[i-1] is the new name of vertex i."""
    img = [0] * P.n
    for v in range(1, P.n + 1):
        img[perm[v - 1] - 1] = perm[P.image[v - 1] - 1]
    return Portrait(P.n, tuple(img))


# ------------------------------------------------------------------ validation


@dataclass(frozen=True)
class Violation:
    rule: str  # InDegree | CycleCount | FixedPointPair
    detail: str


@dataclass
class GenericityReport:
    is_generic: bool
    violations: list[Violation] = field(default_factory=list)


def validate_generic(P: Portrait) -> GenericityReport:
    """Check the three generic-quadratic rules; the empty portrait is generic."""
    violations = []
    for v, d in enumerate(indegrees(P), start=1):
        if d not in (0, 2):
            violations.append(Violation("InDegree", f"vertex {v} has in-degree {d}"))
    sigma = cycle_structure(P)
    for length in sorted(set(sigma.lengths)):
        cap = degree_d0(length)
        have = sigma.count(length)
        if have > cap:
            violations.append(
                Violation("CycleCount", f"{have} cycles of length {length}, max {cap}")
            )
    fixed = sigma.count(1)
    if fixed not in (0, 2):
        violations.append(Violation("FixedPointPair", f"{fixed} fixed points"))
    return GenericityReport(is_generic=not violations, violations=violations)


def is_generic(P: Portrait) -> bool:
    return validate_generic(P).is_generic


# -------------------------------------------------------------- canonical form


def _tree_children(P: Portrait) -> list[list[int]]:
    """children[v-1]: preimages of v that hang off the cycle side of v."""
    on_cycle = cycle_vertices(P)
    pre = preimages(P)
    children: list[list[int]] = [[] for _ in range(P.n)]
    for v in range(1, P.n + 1):
        for u in pre[v - 1]:
            if u in on_cycle:
                continue  # the cycle predecessor is not part of the hanging tree
            children[v - 1].append(u)
    return children


def _ahu_encode(P: Portrait) -> tuple[list, list[list[int]]]:
    """AHU encodings of the hanging trees; enc[v-1] is a nested tuple."""
    children = _tree_children(P)
    depths = vertex_depths(P)
    enc: list = [None] * P.n
    order = sorted(range(1, P.n + 1), key=lambda v: -depths[v])
    for v in order:
        enc[v - 1] = tuple(sorted(enc[u - 1] for u in children[v - 1]))
    return enc, children


def _min_rotation(seq: list) -> tuple[int, tuple]:
    best_r, best = 0, tuple(seq)
    for r in range(1, len(seq)):
        rot = tuple(seq[r:] + seq[:r])
        if rot < best:
            best_r, best = r, rot
    return best_r, best


def canonical_form(P: Portrait) -> Portrait:
    """The canonical representative of the isomorphism class of P.

    Two portraits have equal canonical forms exactly when they are
    isomorphic, and canonical_form is idempotent.
    """
    if P.n == 0:
        return P
    enc, children = _ahu_encode(P)
    comps = []
    for cyc in find_cycles(P):
        seq = [enc[v - 1] for v in cyc]
        r, best = _min_rotation(seq)
        rotated = cyc[r:] + cyc[:r]
        comps.append((-len(cyc), best, rotated))
    comps.sort(key=lambda t: (t[0], t[1]))

    label: dict[int, int] = {}

    def assign(v: int) -> None:
        label[v] = len(label) + 1
        for u in sorted(children[v - 1], key=lambda u: enc[u - 1]):
            assign(u)

    img = []
    for _, _, rotated in comps:
        for v in rotated:
            label[v] = len(label) + 1
        for v in rotated:
            for u in sorted(children[v - 1], key=lambda u: enc[u - 1]):
                assign(u)
    new_img = [0] * P.n
    for v in range(1, P.n + 1):
        new_img[label[v] - 1] = label[P.successor(v)]
    return Portrait(P.n, tuple(new_img))


def isomorphic(P: Portrait, Q: Portrait) -> bool:
    return canonical_form(P) == canonical_form(Q)


# ------------------------------------------------- embeddings and automorphisms


def _injections(sources: list, targets: list):
    """All injective assignments of sources into targets (order respected)."""
    if len(sources) > len(targets):
        return
    for picks in permutations(targets, len(sources)):
        yield list(zip(sources, picks))


def embeddings(P: Portrait, Q: Portrait) -> list[tuple[int, ...]]:
    """All injective edge-preserving vertex maps from P into Q.

    Each result psi is a tuple with psi[i-1] the Q-vertex assigned to i.
    Distinct maps are counted separately.  A cycle of P must land bijectively
    on a Q-cycle of the same length, so the search anchors each P-component
    on a choice of target cycle and rotation, then extends through the trees.
    """
    if P.n > Q.n:
        return []
    if max(P.n, Q.n) > AUT_BUDGET:
        raise BudgetExceeded(f"embedding search limited to {AUT_BUDGET} vertices")
    if P.n == 0:
        return [()]

    p_children = _tree_children(P)
    q_children = _tree_children(Q)
    p_cycles = find_cycles(P)
    q_cycles = find_cycles(Q)

    def tree_maps(u: int, w: int) -> list[dict[int, int]]:
        """Maps of the subtree of P at u into the subtree of Q at w, given u -> w."""
        kids_p = p_children[u - 1]
        kids_q = q_children[w - 1]
        results = []
        for assignment in _injections(kids_p, kids_q):
            partials = [{u: w}]
            for up, wq in assignment:
                subs = tree_maps(up, wq)
                partials = [{**m, **s} for m in partials for s in subs]
                if not partials:
                    break
            results.extend(partials)
        return results

    def comp_maps(cyc: list[int]) -> list[tuple[int, dict[int, int]]]:
        """(target cycle index, vertex map) choices for one P-component."""
        out = []
        for qi, qcyc in enumerate(q_cycles):
            if len(qcyc) != len(cyc):
                continue
            for r in range(len(qcyc)):
                maps = [{}]
                for off, v in enumerate(cyc):
                    w = qcyc[(r + off) % len(qcyc)]
                    subs = tree_maps(v, w)
                    maps = [{**m, **s} for m in maps for s in subs]
                    if not maps:
                        break
                out.extend((qi, m) for m in maps)
        return out

    total: list[dict[int, int]] = [{}]
    used: list[set] = [set()]
    for cyc in p_cycles:
        choices = comp_maps(cyc)
        new_total, new_used = [], []
        for m, u in zip(total, used):
            for qi, cm in choices:
                if qi in u:
                    continue
                new_total.append({**m, **cm})
                new_used.append(u | {qi})
        total, used = new_total, new_used
        if not total:
            return []
    return sorted(tuple(m[v] for v in range(1, P.n + 1)) for m in total)


def automorphism_group(P: Portrait) -> list[tuple[int, ...]]:
    """All graph automorphisms of P, as permutation tuples."""
    if P.n > AUT_BUDGET:
        raise BudgetExceeded(f"automorphism search limited to {AUT_BUDGET} vertices")
    return embeddings(P, P)


# ------------------------------------------------------------------ enumeration


def minimal_portrait(sigma: CycleStructure) -> Portrait:
    """The smallest generic portrait with the given cycle structure:
    the cycles plus exactly one extra preimage per cycle vertex."""
    if not sigma.admissible():
        raise InadmissibleCycleStructure(f"cycle structure {sigma} is not admissible")
    img: list[int] = []
    base = 0
    for length in sigma.lengths:
        for i in range(length):
            img.append(base + (i + 1) % length + 1)  # cycle edge c_i -> c_{i+1}
        for i in range(length):
            img.append(base + (i + 1) % length + 1)  # tail t_i -> c_{i+1}
        base += 2 * length
    # interleave: vertices were appended cycle-first then tails per component;
    # image values already refer to cycle vertices, so the layout is consistent.
    return canonical_form(Portrait(len(img), tuple(img)))


def attach_pair(P: Portrait, v: int) -> Portrait:
    """P with a new preimage pair pointing at vertex v (which had in-degree 0)."""
    img = list(P.image) + [v, v]
    return Portrait(P.n + 2, tuple(img))


def indegree_zero_vertices(P: Portrait) -> list[int]:
    return [v for v, d in enumerate(indegrees(P), start=1) if d == 0]


def enumerate_generic(n: int, sigma: CycleStructure) -> list[Portrait]:
    """All isomorphism classes of generic quadratic portraits with exactly n
    vertices and the given cycle structure, as canonical representatives."""
    if not sigma.admissible():
        raise InadmissibleCycleStructure(f"cycle structure {sigma} is not admissible")
    if n % 2:
        raise InadmissibleCycleStructure("generic portraits have even vertex count")
    if n > ENUM_BUDGET:
        raise BudgetExceeded(f"enumeration limited to {ENUM_BUDGET} vertices")
    if n == 0:
        return [EMPTY] if not sigma.lengths else []
    base = minimal_portrait(sigma)
    if base.n > n:
        return []
    level = {base.image: base}
    size = base.n
    while size < n:
        nxt: dict[tuple[int, ...], Portrait] = {}
        for P in level.values():
            for v in indegree_zero_vertices(P):
                grown = canonical_form(attach_pair(P, v))
                nxt[grown.image] = grown
        level = nxt
        size += 2
    return [level[key] for key in sorted(level)]


def disjoint_union(P: Portrait, Q: Portrait) -> Portrait:
    img = list(P.image) + [t + P.n for t in Q.image]
    return Portrait(P.n + Q.n, tuple(img))


def minimal_extensions(P: Portrait, B: int) -> list[Portrait]:
    """All generic classes P' strictly containing P with no generic class
    strictly between, and no cycle longer than B.

    Candidates come from the two growth moves (attach one preimage pair, or
    adjoin a new minimally-decorated cycle of length <= B, where a first
    fixed point brings its required twin along); each candidate is then
    checked against an exhaustive search for intermediate classes.
    """
    if B < 1:
        raise ValueError("cycle bound B must be >= 1")
    report = validate_generic(P)
    if not report.is_generic:
        raise NotGeneric(f"portrait is not generic: {report.violations[0].detail}")
    if P.n + 2 * B > ENUM_BUDGET + 2 or B > 8:
        raise BudgetExceeded("minimal-extension search out of budget")

    sigma = cycle_structure(P)
    candidates: dict[tuple[int, ...], Portrait] = {}
    for v in indegree_zero_vertices(P):
        grown = canonical_form(attach_pair(P, v))
        candidates[grown.image] = grown
    for length in range(1, B + 1):
        if length == 1:
            if sigma.count(1) != 0:
                continue  # a generic portrait already has both fixed points or none
            block = minimal_portrait(CycleStructure.of([1, 1]))
        else:
            if sigma.count(length) + 1 > degree_d0(length):
                continue
            block = minimal_portrait(CycleStructure.of([length]))
        grown = canonical_form(disjoint_union(P, block))
        candidates[grown.image] = grown

    results = []
    for cand in candidates.values():
        if not _has_intermediate(P, cand):
            results.append(cand)
    return sorted(results, key=lambda p: (p.n, p.image))


def _sub_multisets(extra: list[int]):
    seen = set()
    for mask in range(1 << len(extra)):
        subset = tuple(sorted((extra[i] for i in range(len(extra)) if mask >> i & 1), reverse=True))
        if subset not in seen:
            seen.add(subset)
            yield subset


def _has_intermediate(P: Portrait, Pp: Portrait) -> bool:
    """Exhaustive search for a generic Q with P strictly inside Q strictly inside Pp."""
    sig_p = list(cycle_structure(P).lengths)
    sig_pp = list(cycle_structure(Pp).lengths)
    extra = list(sig_pp)
    for l in sig_p:
        extra.remove(l)
    for size in range(P.n + 2, Pp.n, 2):
        for subset in _sub_multisets(extra):
            sigma = CycleStructure.of(sig_p + list(subset))
            if not sigma.admissible():
                continue
            for Q in enumerate_generic(size, sigma):
                if embeddings(P, Q) and embeddings(Q, Pp):
                    return True
    return False
