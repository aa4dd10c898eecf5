"""Exact computation of the rational preperiodic portrait of x^2 + c.

The candidate envelope: write c = a/b in lowest terms.

* If b is not a perfect square, there are no rational preperiodic points at
  all: for any prime p with v_p(c) = -e < 0, iteration forces
  v_p(x) = -e/2, so e must be even, for every p dividing b.
* If b = m^2, every preperiodic x = u/v in lowest terms has v dividing m
  (in fact v = m when m > 1), and |x| <= 1/2 + sqrt(1/4 + |c|), since any
  point beyond that radius has strictly growing orbit.  Escape from this
  envelope therefore certifies non-preperiodicity.

classify(c) runs every candidate's orbit, keeps the preperiodic ones (the
set is automatically forward-closed), builds the portrait, canonicalizes,
and matches the catalog.  sweep() does this for all c = a/m^2 up to a
height bound and tallies the classes; any generic portrait outside the
conjectured twelve rational classes is reported as an anomaly rather than
an error, since completeness of that list is conditional on the absence of
rational points of period above 3.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd
from multiprocessing import Pool

from .catalog import TWELVE_RATIONAL_LABELS, match
from .config import RunConfig, DEFAULT
from .errors import StepBudgetExceeded
from .portraits import Portrait, canonical_form, validate_generic
from .rational import isqrt_ceil, perfect_square_root


def preperiodic_candidates(c: Fraction) -> list[Fraction]:
    """A finite superset of the rational preperiodic points of x^2 + c.

    Returns [] when the denominator of c is not a perfect square; otherwise
    all u/m with b = m^2 and |u| within the integer ceiling of the escape
    radius m/2 + sqrt(m^2/4 + |a|).
    """
    c = Fraction(c)
    m = perfect_square_root(c.denominator)
    if m is None:
        return []
    a = abs(c.numerator)
    u_max = (m + isqrt_ceil(m * m + 4 * a)) // 2 + 1
    return [Fraction(u, m) for u in range(-u_max, u_max + 1)]


def _escapes(c: Fraction, x: Fraction, m: int) -> bool:
    """True when x is outside the candidate envelope of c.

    |x| > 1/2 + sqrt(1/4 + |c|) is tested exactly as
    2|x| > 1 and (2|x| - 1)^2 > 1 + 4|c|; a denominator not dividing m also
    certifies escape.
    """
    if m % x.denominator != 0:
        return True
    two_abs = 2 * abs(x)
    return two_abs > 1 and (two_abs - 1) ** 2 > 1 + 4 * abs(c)


@dataclass
class OrbitRecord:
    start: Fraction
    orbit: list[Fraction]
    preperiod: int | None
    eventual_period: int | None
    escaped: bool


def orbit(c: Fraction, x: Fraction, max_steps: int) -> OrbitRecord:
    """Iterate x under x^2 + c with cycle detection.

    Stops when a value repeats (preperiodic, with minimal preperiod and
    eventual period reported) or leaves the candidate envelope (escaped,
    certifying non-preperiodicity).
    """
    if max_steps < 1:
        raise ValueError("max_steps must be >= 1")
    c, x = Fraction(c), Fraction(x)
    m = perfect_square_root(c.denominator)
    if m is None or _escapes(c, x, m):
        return OrbitRecord(x, [x], None, None, escaped=True)
    seen = {x: 0}
    values = [x]
    current = x
    for _ in range(max_steps):
        current = current * current + c
        if current in seen:
            idx = seen[current]
            return OrbitRecord(
                x, values, preperiod=idx, eventual_period=len(values) - idx, escaped=False
            )
        if _escapes(c, current, m):
            values.append(current)
            return OrbitRecord(x, values, None, None, escaped=True)
        seen[current] = len(values)
        values.append(current)
    raise StepBudgetExceeded(f"orbit of {x} under c={c} unresolved after {max_steps} steps")


@dataclass
class ClassificationRecord:
    c: Fraction
    portrait: Portrait
    label: str | None
    generic: bool
    point_count: int
    flags: list[str] = field(default_factory=list)
    points: list[Fraction] = field(default_factory=list)


def classify(c: Fraction, config: RunConfig = DEFAULT) -> ClassificationRecord:
    """The exact rational preperiodic portrait of x^2 + c."""
    c = Fraction(c)
    candidates = preperiodic_candidates(c)
    budget = max(config.step_budget, len(candidates) + 4)
    points = [x for x in candidates if not orbit(c, x, budget).escaped]
    points.sort()
    index = {x: i + 1 for i, x in enumerate(points)}
    image = tuple(index[x * x + c] for x in points)
    P = canonical_form(Portrait(len(points), image))
    entry = match(P)
    report = validate_generic(P)
    flags = []
    if not report.is_generic:
        flags.append("NonGeneric")
        flags.extend(sorted({v.rule for v in report.violations}))
    return ClassificationRecord(
        c=c,
        portrait=P,
        label=entry.label if entry else None,
        generic=report.is_generic,
        point_count=P.n,
        flags=flags,
        points=points,
    )


# ------------------------------------------------------------------------ sweep


@dataclass
class SweepSummary:
    height_bound: int
    records: list[ClassificationRecord]
    tally: dict[str, int]
    anomalies: list[ClassificationRecord]


def _sweep_domain(height_bound: int) -> list[Fraction]:
    """All c = a/m^2 in lowest terms with max(|a|, m^2) <= height_bound,
    ordered by (height, numerator, denominator)."""
    out = []
    m = 1
    while m * m <= height_bound:
        den = m * m
        for a in range(-height_bound, height_bound + 1):
            if gcd(abs(a), den) == 1:
                out.append(Fraction(a, den))
        m += 1
    out.sort(key=lambda c: (max(abs(c.numerator), c.denominator), c.numerator, c.denominator))
    return out


def _classify_job(c: Fraction) -> ClassificationRecord:
    return classify(c)


def sweep(height_bound: int, out=None, config: RunConfig = DEFAULT) -> SweepSummary:
    """Classify every square-denominator c up to the height bound.

    Writes CSV rows to `out` (a text stream) when given.  The summary
    tallies portrait classes and lists every *generic* record that is not
    among the twelve conjectured rational classes as an anomaly.
    """
    if height_bound < 1:
        raise ValueError("height bound must be >= 1")
    domain = _sweep_domain(height_bound)
    if config.jobs > 1:
        with Pool(config.jobs) as pool:
            records = pool.map(_classify_job, domain)
    else:
        records = [classify(c, config) for c in domain]

    tally: dict[str, int] = {}
    anomalies = []
    for rec in records:
        key = rec.label if rec.label else f"unlabeled:{rec.portrait.to_text()}"
        tally[key] = tally.get(key, 0) + 1
        if rec.generic and rec.label not in TWELVE_RATIONAL_LABELS:
            anomalies.append(rec)
    if out is not None:
        write_records_csv(out, records)
    return SweepSummary(
        height_bound=height_bound,
        records=records,
        tally=dict(sorted(tally.items())),
        anomalies=anomalies,
    )


CSV_COLUMNS = (
    "c_num",
    "c_den",
    "portrait_serialized",
    "canonical_label",
    "generic",
    "point_count",
    "flags",
)


def write_records_csv(out, records: list[ClassificationRecord]) -> None:
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(CSV_COLUMNS)
    for rec in records:
        writer.writerow(
            [
                rec.c.numerator,
                rec.c.denominator,
                rec.portrait.to_text(),
                rec.label or "",
                int(rec.generic),
                rec.point_count,
                ";".join(rec.flags),
            ]
        )


def records_csv_text(records: list[ClassificationRecord]) -> str:
    buf = io.StringIO()
    write_records_csv(buf, records)
    return buf.getvalue()
