"""Polynomial-system models of dynamical modular curves.

Three constructions:

* full_model(P): one variable per portrait vertex plus c, the N edge
  equations x_i^2 + c = x_j, and all pairwise distinctness inequations.
* reduced_model(P): one variable per generator.  A generator of preperiod m
  and eventual period n contributes the (m, n) dynatomic equation; pairs of
  generators with equal eventual period contribute distinctness inequations
  (cycle-separating ones between different cycles, sibling-collision
  exclusions within a shared cycle; see reduced_model).
* multi_level_model(n_1 >= ... >= n_m): the dynatomic equation at each
  level plus orbit-distinctness between equal levels.

Generators are a greedy closure basis: a known vertex propagates forward
along its edge, and a known vertex reveals its sibling (the second preimage
of its image) as a negation.  Ties between equally productive starting
vertices prefer periodic vertices, so the classical small models come out
in their textbook shape.

Point-variable naming: letters x, y, z, ... are assigned in ascending
(period, preperiod) order while the variables tuple lists generators in
descending order, matching the usual presentation (c, z, y, x) for levels
(3, 2, 1).

Models are bookkeeping objects for counting and projection only; no
normalization, genus computation, or projective closure happens here.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from .config import RunConfig, DEFAULT
from .dynatomic import degree_d0, dynatomic, generalized_dynatomic
from .errors import InadmissibleCycleStructure, NotGeneric, ParseError
from .multipoly import MultiPoly
from .portraits import Portrait, find_cycles, preimages, validate_generic, vertex_depths
from .rational import is_prime

_NAME_POOL = ("x", "y", "z", "u", "v", "w", "s", "t")


def _point_var(i: int) -> str:
    return _NAME_POOL[i] if i < len(_NAME_POOL) else f"x{i + 1}"


def fc_power(var: str, e: int) -> MultiPoly:
    """The e-th iterate of x^2 + c evaluated at the named variable."""
    q = MultiPoly.var(var)
    c = MultiPoly.var("c")
    for _ in range(e):
        q = q * q + c
    return q


@dataclass
class PropagationStep:
    kind: str  # "image" | "negate"
    vertex: int
    source: int


@dataclass
class GeneratorSet:
    generators: list[int]
    closure_trace: list[PropagationStep]


@dataclass
class CurveModel:
    name: str
    variables: tuple[str, ...]
    equations: list[MultiPoly]
    inequations: list[MultiPoly]
    provenance: str  # "full" | "reduced" | "multilevel" | "plane"
    free_variables: tuple[str, ...] | None = None
    steps: list[tuple[str, str, str]] = field(default_factory=list)
    meta: dict = field(default_factory=dict)

    def enumeration_variables(self) -> tuple[str, ...]:
        return self.free_variables if self.free_variables else self.variables


# ------------------------------------------------------------- generator sets


def _orbit_data(P: Portrait) -> dict[int, tuple[int, int]]:
    """(preperiod, eventual period) of each vertex."""
    depth = vertex_depths(P)
    period = {}
    for cyc in find_cycles(P):
        for v in cyc:
            period[v] = len(cyc)
    out = {}
    for v in range(1, P.n + 1):
        u = v
        while u not in period:
            u = P.successor(u)
        out[v] = (depth[v], period[u])
    return out


def _close(P: Portrait, known: set[int]) -> set[int]:
    """Closure under forward images and sibling negation."""
    pre = preimages(P)
    known = set(known)
    changed = True
    while changed:
        changed = False
        for v in sorted(known):
            w = P.successor(v)
            if w not in known:
                known.add(w)
                changed = True
            for u in pre[P.successor(v) - 1]:
                if u != v and u not in known:
                    known.add(u)
                    changed = True
    return known


def generator_set(P: Portrait) -> GeneratorSet:
    """Greedy minimal closure basis with a deterministic tie-break.

    Repeatedly add the vertex whose closure gain is largest; among ties,
    periodic vertices come first (smallest index), then in-degree-zero
    vertices by decreasing depth, then everything else by index.
    """
    report = validate_generic(P)
    if not report.is_generic:
        raise NotGeneric(f"portrait is not generic: {report.violations[0].detail}")
    if P.n == 0:
        return GeneratorSet(generators=[], closure_trace=[])

    depth = vertex_depths(P)
    on_cycle = {v for cyc in find_cycles(P) for v in cyc}
    indeg = [0] * (P.n + 1)
    for t in P.image:
        indeg[t] += 1

    def tie_key(v: int):
        if v in on_cycle:
            return (0, v)
        if indeg[v] == 0:
            return (1, -depth[v], v)
        return (2, v)

    generators: list[int] = []
    known: set[int] = set()
    while len(known) < P.n:
        best_v, best_gain = None, -1
        for v in sorted(range(1, P.n + 1), key=tie_key):
            if v in known:
                continue
            gain = len(_close(P, known | {v})) - len(known)
            if gain > best_gain:
                best_v, best_gain = v, gain
        generators.append(best_v)
        known = _close(P, known | {best_v})

    # replay the closure to record a deterministic derivation log
    trace: list[PropagationStep] = []
    have = set(generators)
    pre = preimages(P)
    progress = True
    while progress:
        progress = False
        for v in sorted(have):
            w = P.successor(v)
            if w not in have:
                have.add(w)
                trace.append(PropagationStep("image", w, v))
                progress = True
        for v in sorted(have):
            for u in pre[P.successor(v) - 1]:
                if u != v and u not in have:
                    have.add(u)
                    trace.append(PropagationStep("negate", u, v))
                    progress = True
    return GeneratorSet(generators=generators, closure_trace=trace)


# ------------------------------------------------------------------ full model


def full_model(P: Portrait) -> CurveModel:
    """The affine model with one variable per vertex: N edge equations
    x_i^2 + c = x_j and all pairwise distinctness conditions."""
    report = validate_generic(P)
    if not report.is_generic:
        raise NotGeneric(f"portrait is not generic: {report.violations[0].detail}")
    if P.n < 1:
        raise ValueError("full_model needs at least one vertex")
    variables = ("c",) + tuple(f"x{i}" for i in range(1, P.n + 1))
    c = MultiPoly.var("c")
    xs = {i: MultiPoly.var(f"x{i}") for i in range(1, P.n + 1)}
    equations = [xs[i] * xs[i] + c - xs[P.successor(i)] for i in range(1, P.n + 1)]
    inequations = [
        xs[i] - xs[j] for i in range(1, P.n + 1) for j in range(i + 1, P.n + 1)
    ]
    gens = generator_set(P)
    free = ("c",) + tuple(f"x{g}" for g in gens.generators)
    steps = [
        (s.kind, f"x{s.vertex}", f"x{s.source}") for s in gens.closure_trace
    ]
    return CurveModel(
        name=f"full:{P.to_text()}",
        variables=variables,
        equations=equations,
        inequations=inequations,
        provenance="full",
        free_variables=free,
        steps=steps,
        meta={"generators": gens.generators},
    )


# --------------------------------------------------------------- reduced model


def _ordered_generators(P: Portrait, gens: list[int]) -> list[tuple[int, int, int]]:
    """(vertex, preperiod, period), listed in descending (period, preperiod)."""
    data = _orbit_data(P)
    return sorted(
        ((g, data[g][0], data[g][1]) for g in gens),
        key=lambda t: (-t[2], -t[1], t[0]),
    )


def _entry_cycle(P: Portrait, v: int, m: int) -> int:
    """Index (within find_cycles) of the cycle reached by vertex v."""
    u = v
    for _ in range(m):
        u = P.successor(u)
    for idx, cyc in enumerate(find_cycles(P)):
        if u in cyc:
            return idx
    raise AssertionError("vertex does not reach a cycle")  # unreachable


def reduced_model(P: Portrait, config: RunConfig = DEFAULT) -> CurveModel:
    """Generator-reduced model: one dynatomic equation per generator plus
    distinctness inequations between generators of equal eventual period.

    Two generators with the same eventual period get cycle-separating
    inequations f^{m_j}(y) != f^{m_i + k}(x) when their orbits enter
    different cycles of the portrait.  When they enter the same cycle (the
    cycles already coincide, so separating them would exclude every genuine
    point) the degenerate collisions with the first generator's closure are
    excluded instead: every vertex derived from x is of the form
    +-f^j(x), and the only ones sharing y's orbit type are +-f^{m_i-m_j}(x).
    """
    gens = generator_set(P)
    if not gens.generators:
        raise ValueError("the empty portrait has no model variables")
    ordered = _ordered_generators(P, gens.generators)
    by_asc = sorted(ordered, key=lambda t: (t[2], t[1], t[0]))
    var_of = {g: _point_var(i) for i, (g, _, _) in enumerate(by_asc)}

    variables = ("c",) + tuple(var_of[g] for g, _, _ in ordered)
    equations = []
    for g, m, n in ordered:
        eq = generalized_dynatomic(m, n, config) if m else dynatomic(n, config).phi
        equations.append(eq.rename({"x": var_of[g]}))
    inequations = []
    for i in range(len(ordered)):
        gi, mi, ni = ordered[i]
        for j in range(i + 1, len(ordered)):
            gj, mj, nj = ordered[j]
            if ni != nj:
                continue
            if _entry_cycle(P, gi, mi) != _entry_cycle(P, gj, mj):
                entry_j = fc_power(var_of[gj], mj)
                for k in range(ni):
                    inequations.append(entry_j - fc_power(var_of[gi], mi + k))
            else:
                vj = MultiPoly.var(var_of[gj])
                twin = fc_power(var_of[gi], mi - mj)
                inequations.append(vj - twin)
                inequations.append(vj + twin)
    return CurveModel(
        name=f"reduced:{P.to_text()}",
        variables=variables,
        equations=equations,
        inequations=inequations,
        provenance="reduced",
        free_variables=variables,
        meta={
            "generators": [g for g, _, _ in ordered],
            "generator_vars": {str(g): var_of[g] for g, _, _ in ordered},
            "orbit_types": {str(g): [m, n] for g, m, n in ordered},
        },
    )


# ------------------------------------------------------------ multilevel model


def multi_level_model(n_list, config: RunConfig = DEFAULT) -> CurveModel:
    """Model for several marked periodic orbits: dynatomic equation at each
    level, plus distinctness from earlier orbits of the same length."""
    levels = sorted((int(n) for n in n_list), reverse=True)
    if not levels or any(n < 1 for n in levels):
        raise InadmissibleCycleStructure("levels must be positive integers")
    for n in set(levels):
        if levels.count(n) > degree_d0(n):
            raise InadmissibleCycleStructure(
                f"{levels.count(n)} marked {n}-cycles exceed the bound {degree_d0(n)}"
            )
    by_asc = sorted(range(len(levels)), key=lambda i: (levels[i], i))
    var_of = {idx: _point_var(pos) for pos, idx in enumerate(by_asc)}
    variables = ("c",) + tuple(var_of[i] for i in range(len(levels)))
    equations = [
        dynatomic(n, config).phi.rename({"x": var_of[i]}) for i, n in enumerate(levels)
    ]
    inequations = []
    for i in range(len(levels)):
        for j in range(i + 1, len(levels)):
            if levels[i] != levels[j]:
                continue
            vj = MultiPoly.var(var_of[j])
            for k in range(levels[i]):
                inequations.append(vj - fc_power(var_of[i], k))
    return CurveModel(
        name="multilevel:" + ",".join(str(n) for n in levels),
        variables=variables,
        equations=equations,
        inequations=inequations,
        provenance="multilevel",
        free_variables=variables,
        meta={"levels": levels},
    )


def plane_model(n: int, config: RunConfig = DEFAULT) -> CurveModel:
    """The plane dynatomic model at level n, in variables (c, x)."""
    phi = dynatomic(n, config).phi
    return CurveModel(
        name=f"plane:{n}",
        variables=("c", "x"),
        equations=[phi],
        inequations=[],
        provenance="plane",
        free_variables=("c", "x"),
    )


# --------------------------------------------------------- trace relation check


@dataclass
class TraceReport:
    p: int
    points: int
    violations: list[tuple[int, int]]


def trace_relation_check(p: int, config: RunConfig = DEFAULT) -> TraceReport:
    """Check the 3-cycle trace invariant at every affine F_p point of the
    level-3 plane model.

    For a marked point x entering the 3-cycle (x, f(x), f^2(x)), the cycle
    is classically parametrized by a single quadratic parameter t with

        t^2 - 2*t + 29 + 16*c = 0.

    The parameter is the affine normalization t = -(4*s + 1) of the raw
    cycle sum s = x + f(x) + f^2(x); the raw sum itself satisfies
    s^2 + s + c + 2 = 0, and the two statements are equivalent.  The check
    evaluates the normalized relation at every solution and reports
    violations (there should be none at any odd prime).
    """
    if not is_prime(p):
        raise ValueError(f"{p} is not prime")
    if p == 2:
        raise ValueError("the trace normalization degenerates at p = 2")
    if p * p > config.enumeration_cap:
        raise ValueError(f"p^2 exceeds enumeration cap {config.enumeration_cap}")
    phi3 = dynatomic(3, config).phi
    terms = [
        (coef.numerator % p, e[phi3.variables.index("c")], e[phi3.variables.index("x")])
        for e, coef in phi3.terms.items()
    ]
    points = 0
    violations = []
    for c0 in range(p):
        cpow = [1] * 4
        for i in range(1, 4):
            cpow[i] = cpow[i - 1] * c0 % p
        for x0 in range(p):
            acc = 0
            for coef, ec, ex in terms:
                acc += coef * cpow[ec] * pow(x0, ex, p)
            if acc % p:
                continue
            points += 1
            fx = (x0 * x0 + c0) % p
            f2x = (fx * fx + c0) % p
            s = (x0 + fx + f2x) % p
            t = (-(4 * s + 1)) % p
            if (t * t - 2 * t + 29 + 16 * c0) % p:
                violations.append((c0, x0))
    return TraceReport(p=p, points=points, violations=violations)


# ------------------------------------------------------------------------ JSON

SCHEMA_VERSION = 1


def model_to_json(model: CurveModel) -> str:
    doc = {
        "schema_version": SCHEMA_VERSION,
        "name": model.name,
        "variables": list(model.variables),
        "equations": [str(e) for e in model.equations],
        "inequations": [str(e) for e in model.inequations],
        "provenance": model.provenance,
    }
    if model.free_variables:
        doc["free_variables"] = list(model.free_variables)
    if model.steps:
        doc["steps"] = [list(s) for s in model.steps]
    if model.meta:
        doc["meta"] = model.meta
    return json.dumps(doc, sort_keys=True, indent=2) + "\n"


def model_from_json(text: str) -> CurveModel:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"bad model JSON: {exc}") from exc
    try:
        return CurveModel(
            name=doc.get("name", "model"),
            variables=tuple(doc["variables"]),
            equations=[MultiPoly.parse(e) for e in doc["equations"]],
            inequations=[MultiPoly.parse(e) for e in doc["inequations"]],
            provenance=doc.get("provenance", "plane"),
            free_variables=tuple(doc["free_variables"]) if "free_variables" in doc else None,
            steps=[tuple(s) for s in doc.get("steps", [])],
            meta=doc.get("meta", {}),
        )
    except KeyError as exc:
        raise ParseError(f"model JSON missing field {exc}") from exc
