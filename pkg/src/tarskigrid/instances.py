"""Instance families, exhaustive enumeration, and the JSON document format.

Instance documents are JSON objects: ``{"kind": ..., "sides": [...]}`` plus
kind-specific fields. Explicit tables store ``"values"`` as a flat row-major
array (last coordinate fastest) of k-long integer arrays, 1-based, matching
``enumerate_box`` order. Sign tables store (k+1)-long arrays over {-1,0,1}.
Tables are validated when loaded.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Iterator, Optional

from .errors import LoadError, UsageError
from .lattice import Box, Point, enumerate_box, leq, sgn
from .oracles import FnOracle, SignOracle, validate, validate_fn
from .rng import XorShift64Star

KINDS = ("hidden_point", "constant_shift", "random_steps", "explicit_table",
         "explicit_sign_table")


@dataclass(frozen=True)
class InstanceSpec:
    kind: str
    sides: tuple
    p: Optional[tuple] = None
    v: Optional[tuple] = None
    seed: Optional[int] = None
    num_steps: Optional[int] = None
    values: Optional[tuple] = None  # tuple of tuples, row-major

    @property
    def box(self) -> Box:
        return Box.from_sides(self.sides)


# ---------------------------------------------------------------------------
# Generators
# ---------------------------------------------------------------------------

def gen_hidden_point(box: Box, p: Point) -> FnOracle:
    """Monotone map ``f(x)_i = x_i + sgn(p_i - x_i)`` with unique fixed point p."""
    if not box.contains(p):
        raise UsageError(f"hidden point {p} outside box")

    def fn(x):
        return tuple(xi + sgn(pi - xi) for xi, pi in zip(x, p))

    return FnOracle(box, fn)


def gen_constant_shift(box: Box, v) -> FnOracle:
    """Monotone map ``f(x)_i = clamp(x_i + v_i)`` for a sign vector v."""
    v = tuple(v)
    if len(v) != box.dim or any(s not in (-1, 0, 1) for s in v):
        raise UsageError(f"shift {v} is not a {box.dim}-long sign vector")
    lo, hi = box.lo, box.hi

    def fn(x):
        return tuple(min(h, max(l, xi + s)) for xi, s, l, h in zip(x, v, lo, hi))

    return FnOracle(box, fn)


def steps_oracle(box: Box, steps_per_coord) -> FnOracle:
    """Monotone map from explicit threshold steps.

    ``steps_per_coord[i]`` is a sequence of ``(s, w)`` pairs; then
    ``f(x)_i = max({lo_i} | {w : s ⪯ x})``. The eligible set only grows with
    x, so f is monotone by construction.
    """
    if len(steps_per_coord) != box.dim:
        raise UsageError("need one step list per coordinate")
    lo = box.lo

    def fn(x):
        out = []
        for i, steps in enumerate(steps_per_coord):
            best = lo[i]
            for s, w in steps:
                if w > best and leq(s, x):
                    best = w
            out.append(best)
        return tuple(out)

    return FnOracle(box, fn)


def gen_random_steps(box: Box, seed: int, num_steps: int) -> FnOracle:
    """Seeded random instance of :func:`steps_oracle`.

    Draw order is fixed: for each output coordinate i, ``num_steps`` pairs of
    (threshold point drawn coordinate by coordinate, then the value w in
    ``[lo_i, hi_i]``), all from one XorShift64Star(seed) stream. Identical
    (seed, parameters) give bit-identical oracles.
    """
    if num_steps < 1:
        raise UsageError("num_steps must be >= 1")
    gen = XorShift64Star(seed)
    steps = []
    for i in range(box.dim):
        coord_steps = []
        for _ in range(num_steps):
            s = gen.point(box)
            w = gen.randint(box.lo[i], box.hi[i])
            coord_steps.append((s, w))
        steps.append(coord_steps)
    return steps_oracle(box, steps)


# ---------------------------------------------------------------------------
# Exhaustive enumeration of monotone self-maps
# ---------------------------------------------------------------------------

ENUMERATION_CAP = 10 ** 6


def monotone_chain_tables(box: Box, lo_v: int, hi_v: int) -> Iterator[tuple]:
    """All monotone maps ``box -> [lo_v, hi_v]`` as row-major value tables.

    Enumerated by backtracking over row-major prefixes: each point's value is
    bounded below by the values of its already-assigned predecessors
    (row-major order is a linear extension, so ``x - e_d`` always precedes x).
    """
    pts = list(enumerate_box(box))
    preds = []
    for t, x in enumerate(pts):
        row = []
        for d in range(box.dim):
            if x[d] > box.lo[d]:
                row.append(box.index_of(x[:d] + (x[d] - 1,) + x[d + 1 :]))
        preds.append(row)
    n = len(pts)
    vals = [0] * n

    def backtrack(t):
        if t == n:
            yield tuple(vals)
            return
        floor = lo_v
        for q in preds[t]:
            if vals[q] > floor:
                floor = vals[q]
        for v in range(floor, hi_v + 1):
            vals[t] = v
            yield from backtrack(t + 1)

    yield from backtrack(0)


def count_monotone_chain_maps(box: Box, coord: int) -> int:
    """Number of monotone maps from ``box`` to its ``coord``-th value range."""
    return sum(1 for _ in monotone_chain_tables(box, box.lo[coord], box.hi[coord]))


def enumerate_monotone_maps(box: Box, cap: int = ENUMERATION_CAP) -> Iterator[FnOracle]:
    """Yield every monotone self-map of ``box`` exactly once.

    A self-map is monotone iff each output coordinate is a monotone map to
    that coordinate's chain, so the stream is the product over output
    coordinates of :func:`monotone_chain_tables`. Intended for tiny boxes;
    the projected count is checked against ``cap`` first.
    """
    per_coord = [
        list(monotone_chain_tables(box, box.lo[i], box.hi[i]))
        for i in range(box.dim)
    ]
    total = 1
    for tables in per_coord:
        total *= len(tables)
    if total > cap:
        raise UsageError(f"enumeration would yield {total} maps, over cap {cap}")

    vol = box.volume
    idx = [0] * box.dim
    while True:
        chosen = [per_coord[i][idx[i]] for i in range(box.dim)]
        values = tuple(
            tuple(chosen[i][t] for i in range(box.dim)) for t in range(vol)
        )
        yield instantiate(InstanceSpec("explicit_table", box.sides, values=values),
                          validate_tables=False)
        d = box.dim - 1
        while d >= 0 and idx[d] == len(per_coord[d]) - 1:
            idx[d] = 0
            d -= 1
        if d < 0:
            return
        idx[d] += 1


_SIGN_VECTORS_CACHE: dict = {}


def _sign_vectors(m: int) -> tuple:
    got = _SIGN_VECTORS_CACHE.get(m)
    if got is None:
        out = [()]
        for _ in range(m):
            out = [v + (s,) for v in out for s in (-1, 0, 1)]
        got = _SIGN_VECTORS_CACHE[m] = tuple(out)
    return got


def enumerate_sign_tables(box: Box) -> Iterator[tuple]:
    """All valid sign-oracle tables on ``box``, row-major, exactly once.

    Enumerated directly from the two defining conditions by backtracking:
    each point's candidate vectors are pre-filtered by the range condition
    and checked for the monotone condition against the point's already
    assigned unit-step predecessors (which suffices, by transitivity along
    chains). Intended for tiny boxes.
    """
    k = box.dim
    pts = list(enumerate_box(box))
    cands = []
    preds = []
    for x in pts:
        ok = [v for v in _sign_vectors(k + 1)
              if all(box.lo[i] <= x[i] + v[i] <= box.hi[i] for i in range(k))]
        cands.append(ok)
        row = []
        for d in range(k):
            if x[d] > box.lo[d]:
                row.append((box.index_of(x[:d] + (x[d] - 1,) + x[d + 1 :]), d))
        preds.append(row)
    n = len(pts)
    table: list = [None] * n

    def compatible(t, v):
        x = pts[t]
        for q, d in preds[t]:
            w = table[q]
            y = pts[q]
            for i in range(k):
                if y[i] + w[i] > x[i] + v[i]:
                    return False
            if w[k] > v[k]:
                return False
        return True

    def backtrack(t):
        if t == n:
            yield tuple(table)
            return
        for v in cands[t]:
            if compatible(t, v):
                table[t] = v
                yield from backtrack(t + 1)

    yield from backtrack(0)


# ---------------------------------------------------------------------------
# Instantiation and the document format
# ---------------------------------------------------------------------------

def table_fn_oracle(box: Box, values: tuple, check: bool = True) -> FnOracle:
    values = tuple(tuple(v) for v in values)
    if len(values) != box.volume:
        raise LoadError(f"table has {len(values)} rows, box has {box.volume} points")

    def fn(x):
        return values[box.index_of(x)]

    oracle = FnOracle(box, fn)
    if check:
        report = validate_fn(oracle, "exhaustive")
        if not report:
            raise LoadError(report.violation)
    return oracle


def table_sign_oracle(box: Box, values: tuple, check: bool = True) -> SignOracle:
    values = tuple(tuple(v) for v in values)
    if len(values) != box.volume:
        raise LoadError(f"table has {len(values)} rows, box has {box.volume} points")

    def fn(x):
        return values[box.index_of(x)]

    oracle = SignOracle.from_function(box, box.dim + 1, fn)
    if check:
        report = validate(oracle, "exhaustive")
        if not report:
            raise LoadError(report.violation)
    return oracle


def instantiate(spec: InstanceSpec, validate_tables: bool = True):
    """Build the oracle described by ``spec`` (FnOracle, or SignOracle for sign tables)."""
    box = spec.box
    if spec.kind == "hidden_point":
        oracle = gen_hidden_point(box, tuple(spec.p))
    elif spec.kind == "constant_shift":
        oracle = gen_constant_shift(box, tuple(spec.v))
    elif spec.kind == "random_steps":
        oracle = gen_random_steps(box, spec.seed, spec.num_steps)
    elif spec.kind == "explicit_table":
        oracle = table_fn_oracle(box, spec.values, check=validate_tables)
    elif spec.kind == "explicit_sign_table":
        oracle = table_sign_oracle(box, spec.values, check=validate_tables)
    else:
        raise LoadError(f"unknown instance kind {spec.kind!r}")
    oracle.spec = spec
    return oracle


def spec_to_dict(spec: InstanceSpec) -> dict:
    doc = {"kind": spec.kind, "sides": list(spec.sides)}
    if spec.p is not None:
        doc["p"] = list(spec.p)
    if spec.v is not None:
        doc["v"] = list(spec.v)
    if spec.seed is not None:
        doc["seed"] = spec.seed
    if spec.num_steps is not None:
        doc["num_steps"] = spec.num_steps
    if spec.values is not None:
        doc["values"] = [list(v) for v in spec.values]
    return doc


def serialize_instance(spec: InstanceSpec) -> str:
    return json.dumps(spec_to_dict(spec), sort_keys=True)


def parse_instance(document) -> InstanceSpec:
    """Parse a JSON text or dict; tables are validated by ``instantiate``."""
    if isinstance(document, str):
        try:
            doc = json.loads(document)
        except json.JSONDecodeError as e:
            raise LoadError(f"not valid JSON: {e}") from None
    else:
        doc = document
    if not isinstance(doc, dict):
        raise LoadError("instance document must be a JSON object")
    kind = doc.get("kind")
    if kind not in KINDS:
        raise LoadError(f"unknown or missing kind {kind!r}; expected one of {KINDS}")
    sides = doc.get("sides")
    if (not isinstance(sides, list) or len(sides) == 0
            or any(type(s) is not int or s < 1 for s in sides)):
        raise LoadError(f"bad sides {sides!r}")
    spec = InstanceSpec(
        kind=kind,
        sides=tuple(sides),
        p=tuple(doc["p"]) if "p" in doc else None,
        v=tuple(doc["v"]) if "v" in doc else None,
        seed=doc.get("seed"),
        num_steps=doc.get("num_steps"),
        values=tuple(tuple(row) for row in doc["values"]) if "values" in doc else None,
    )
    _check_spec_fields(spec)
    return spec


def _check_spec_fields(spec: InstanceSpec) -> None:
    need = {
        "hidden_point": ("p",),
        "constant_shift": ("v",),
        "random_steps": ("seed", "num_steps"),
        "explicit_table": ("values",),
        "explicit_sign_table": ("values",),
    }[spec.kind]
    for field_name in need:
        if getattr(spec, field_name) is None:
            raise LoadError(f"kind {spec.kind!r} requires field {field_name!r}")
    box = spec.box
    if spec.p is not None and not box.contains(spec.p):
        raise LoadError(f"hidden point {spec.p} outside box of sides {spec.sides}")
    if spec.v is not None and (len(spec.v) != box.dim
                               or any(s not in (-1, 0, 1) for s in spec.v)):
        raise LoadError(f"shift {spec.v} is not a {box.dim}-long sign vector")
    if spec.num_steps is not None and spec.num_steps < 1:
        raise LoadError("num_steps must be >= 1")
