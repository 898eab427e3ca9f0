"""Query-counted oracles over integer boxes, plus every adapter the solvers need.

Two oracle flavors exist. ``FnOracle`` wraps a monotone self-map ``f`` of a
box and answers points with points. ``SignOracle`` answers points with sign
vectors and is the shape all solvers consume; the two defining conditions are

  * range:     ``x_i + g(x)_i`` stays inside the box, for every grid dimension
  * monotone:  ``x ⪯ y`` implies ``(x, 0) + g(x) ⪯ (y, 0) + g(y)``

generalized from the unit grid to rectangular boxes by reading the range
condition per dimension.

Query accounting counts ROOT evaluations. ``total`` ticks on every query that
reaches a root; ``distinct`` ticks only the first time a point is physically
evaluated there (a root-level cache deduplicates). Adapters contribute to a
per-label breakdown but never to the root counters, so stacking adapters does
not inflate budgets. ``peek`` evaluates outside the counters and the cache:
debug assertions and result verification use it, tallied under ``"debug"``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Optional

from .config import debug_checks_enabled
from .errors import InstanceInvalidError, UsageError
from .lattice import (
    Box,
    Point,
    SignVector,
    drop_coord,
    enumerate_box,
    insert_coord,
    sgn,
)
from .rng import XorShift64Star


@dataclass
class QueryStats:
    total: int = 0
    distinct: int = 0
    debug: int = 0
    by_adapter: dict = field(default_factory=dict)

    def bump_label(self, label: str) -> None:
        self.by_adapter[label] = self.by_adapter.get(label, 0) + 1

    def snapshot(self) -> "QueryStats":
        return QueryStats(self.total, self.distinct, self.debug, dict(self.by_adapter))


class FnOracle:
    """Query access to a function ``f: box -> box`` with root-level accounting.

    The self-map property is enforced at evaluation time; monotonicity is the
    caller's promise, checked by :func:`validate_fn` rather than assumed.
    """

    def __init__(self, box: Box, fn: Callable[[Point], Point], label: str = "f",
                 cache: bool = True):
        self.box = box
        self._fn = fn
        self.label = label
        self.stats = QueryStats()
        self._seen: set = set()
        self._cache: Optional[dict] = {} if cache else None

    def query(self, x: Point) -> Point:
        if not self.box.contains(x):
            raise UsageError(f"query point {x} outside box [{self.box.lo}, {self.box.hi}]")
        st = self.stats
        st.total += 1
        st.bump_label(self.label)
        if self._cache is not None:
            hit = self._cache.get(x)
            if hit is not None:
                return hit
        y = tuple(self._fn(x))
        if x not in self._seen:
            if not self.box.contains(y):
                raise InstanceInvalidError(f"f({x}) = {y} escapes the box (not a self-map)")
            self._seen.add(x)
            st.distinct += 1
        if self._cache is not None:
            self._cache[x] = y
        return y

    def peek(self, x: Point) -> Point:
        """Fresh evaluation: bypasses cache and budget counters."""
        if not self.box.contains(x):
            raise UsageError(f"peek point {x} outside box")
        self.stats.debug += 1
        self.stats.bump_label("debug")
        return tuple(self._fn(x))

    @property
    def cache_size(self) -> int:
        return len(self._seen)


class SignOracle:
    """Query access to ``g: box -> {-1,0,1}^m`` (normally ``m = box.dim + 1``)."""

    def __init__(self, box: Box, m: int, eval_fn, peek_fn, stats: QueryStats,
                 label: str):
        self.box = box
        self.m = m
        self._eval = eval_fn
        self._peek = peek_fn
        self.stats = stats
        self.label = label

    @classmethod
    def from_function(cls, box: Box, m: int, fn, label: str = "g",
                      cache: bool = True) -> "SignOracle":
        """A root sign oracle: counts total/distinct and checks basic sanity."""
        stats = QueryStats()
        seen: set = set()
        store: Optional[dict] = {} if cache else None
        k = box.dim

        def do_eval(x):
            stats.total += 1
            stats.bump_label(label)
            if store is not None:
                hit = store.get(x)
                if hit is not None:
                    return hit
            v = tuple(fn(x))
            if x not in seen:
                _check_root_value(box, k, m, x, v)
                seen.add(x)
                stats.distinct += 1
            if store is not None:
                store[x] = v
            return v

        def do_peek(x):
            stats.debug += 1
            stats.bump_label("debug")
            return tuple(fn(x))

        oracle = cls(box, m, do_eval, do_peek, stats, label)
        oracle._seen = seen  # exposed for the cache-size invariant tests
        return oracle

    @classmethod
    def virtual(cls, box: Box, m: int, fn, stats: QueryStats,
                label: str = "virtual") -> "SignOracle":
        """A memoized oracle whose answers are computed on demand.

        Used for simulated oracles whose evaluation already performs (and
        counts) real root queries; it therefore contributes only to the
        per-label breakdown. Peeking is rejected: recomputing an answer would
        rerun the simulation.
        """
        store: dict = {}

        def do_eval(x):
            stats.bump_label(label)
            hit = store.get(x)
            if hit is None:
                hit = tuple(fn(x))
                store[x] = hit
            return hit

        def no_peek(x):
            raise UsageError("virtual oracles do not support peek")

        return cls(box, m, do_eval, no_peek, stats, label)

    def query(self, x: Point) -> SignVector:
        if not self.box.contains(x):
            raise UsageError(f"query point {x} outside box [{self.box.lo}, {self.box.hi}]")
        return self._eval(x)

    def peek(self, x: Point) -> SignVector:
        if not self.box.contains(x):
            raise UsageError(f"peek point {x} outside box")
        return self._peek(x)

    def derived(self, box: Box, m: int, eval_fn, peek_fn, label: str) -> "SignOracle":
        out = SignOracle(box, m, eval_fn, peek_fn, self.stats, label)

        def counted_eval(x, _inner=eval_fn, _stats=self.stats, _label=label):
            _stats.bump_label(_label)
            return _inner(x)

        out._eval = counted_eval
        return out


def _check_root_value(box: Box, k: int, m: int, x: Point, v: tuple) -> None:
    if len(v) != m or any(s not in (-1, 0, 1) for s in v):
        raise InstanceInvalidError(f"g({x}) = {v} is not a {m}-long sign vector")
    for i in range(min(k, m)):
        if not box.lo[i] <= x[i] + v[i] <= box.hi[i]:
            raise InstanceInvalidError(
                f"range condition violated at {x}: coordinate {i} moves to "
                f"{x[i] + v[i]}, outside [{box.lo[i]}, {box.hi[i]}]"
            )


# ---------------------------------------------------------------------------
# Adapters
# ---------------------------------------------------------------------------

def slice_oracle(f: FnOracle, dim: int, value: int) -> SignOracle:
    """Fix coordinate ``dim`` of ``f`` at ``value`` and expose movement signs.

    The derived oracle lives on the box with dimension ``dim`` removed and
    returns ``k+1`` signs ``sgn(f(x')_j - x'_j)``: the kept dimensions in
    order, then the sliced dimension's sign LAST. For monotone self-maps the
    result satisfies both sign-oracle conditions.
    """
    box = f.box
    if not 0 <= dim < box.dim:
        raise UsageError(f"slice dimension {dim} out of range")
    if not box.lo[dim] <= value <= box.hi[dim]:
        raise UsageError(f"slice value {value} outside [{box.lo[dim]}, {box.hi[dim]}]")
    out_box = box.without_dim(dim)
    m = box.dim

    def signs_of(x, y):
        return tuple(sgn(b - a) for a, b in zip(x, y))

    def do_eval(x):
        xp = insert_coord(x, dim, value)
        s = signs_of(xp, f.query(xp))
        return drop_coord(s, dim) + (s[dim],)

    def do_peek(x):
        xp = insert_coord(x, dim, value)
        s = signs_of(xp, f.peek(xp))
        return drop_coord(s, dim) + (s[dim],)

    stats = f.stats
    out = SignOracle(out_box, m, None, do_peek, stats, "slice")

    def counted(x):
        stats.bump_label("slice")
        return do_eval(x)

    out._eval = counted
    return out


def box_restriction(o: SignOracle, sub: Box) -> SignOracle:
    """Restrict ``o`` to a sub-box.

    The range condition relative to ``sub`` is the caller's responsibility;
    it holds whenever the corner certificates do: the first ``k`` signs are
    all >= 0 at ``sub.lo`` and all <= 0 at ``sub.hi``. With debug checks on,
    the certificates are asserted by two peeks.
    """
    if not o.box.contains_box(sub):
        raise UsageError(f"sub-box [{sub.lo}, {sub.hi}] not inside [{o.box.lo}, {o.box.hi}]")
    k = sub.dim
    if debug_checks_enabled():
        v_lo = o.peek(sub.lo)
        if any(s < 0 for s in v_lo[:k]):
            raise InstanceInvalidError(
                f"restriction certificate failed at lo corner {sub.lo}: {v_lo}")
        v_hi = o.peek(sub.hi)
        if any(s > 0 for s in v_hi[:k]):
            raise InstanceInvalidError(
                f"restriction certificate failed at hi corner {sub.hi}: {v_hi}")
    return o.derived(sub, o.m, o.query, o.peek, "restrict")


def project_last(o: SignOracle, a: int, suffix: Point, j: int) -> SignOracle:
    """Freeze the suffix of ``o`` and keep sign ``j`` as the new last output.

    ``o`` has ``a + b`` dimensions and ``a + b + 1`` outputs; the result lives
    on the a-dimensional prefix box and returns ``a + 1`` signs: the first
    ``a`` of ``g(x, suffix)`` followed by output ``j`` (0-based,
    ``a <= j <= a + b``).
    """
    total_dim = o.box.dim
    b = total_dim - a
    if a < 0 or b < 0 or len(suffix) != b:
        raise UsageError(f"bad prefix split a={a} for {total_dim}-dim oracle")
    if not (a <= j < total_dim + 1):
        raise UsageError(f"projected output {j} outside [{a}, {total_dim}]")
    if not o.box.suffix(a).contains(suffix):
        raise UsageError(f"suffix {suffix} outside box")
    prefix_box = o.box.prefix(a)

    def do_eval(x):
        full = o.query(x + suffix)
        return full[:a] + (full[j],)

    def do_peek(x):
        full = o.peek(x + suffix)
        return full[:a] + (full[j],)

    return o.derived(prefix_box, a + 1, do_eval, do_peek, "project")


def collapse_last_up(o: SignOracle) -> SignOracle:
    """Map the last sign {0, +1} -> +1 and -1 -> -1; other signs unchanged."""

    def do_eval(x):
        v = o.query(x)
        return v[:-1] + (1 if v[-1] >= 0 else -1,)

    def do_peek(x):
        v = o.peek(x)
        return v[:-1] + (1 if v[-1] >= 0 else -1,)

    return o.derived(o.box, o.m, do_eval, do_peek, "collapse+")


def collapse_last_down(o: SignOracle) -> SignOracle:
    """Map the last sign {0, -1} -> -1 and +1 -> +1; other signs unchanged."""

    def do_eval(x):
        v = o.query(x)
        return v[:-1] + (-1 if v[-1] <= 0 else 1,)

    def do_peek(x):
        v = o.peek(x)
        return v[:-1] + (-1 if v[-1] <= 0 else 1,)

    return o.derived(o.box, o.m, do_eval, do_peek, "collapse-")


# ---------------------------------------------------------------------------
# Validation
# ---------------------------------------------------------------------------

@dataclass
class ValidationReport:
    ok: bool
    violation: Optional[str] = None
    checked_points: int = 0
    checked_pairs: int = 0

    def __bool__(self):
        return self.ok


EXHAUSTIVE_CAP = 10 ** 6


def validate(o: SignOracle, mode: str = "exhaustive", count: int = 1000,
             seed: int = 0, cap: int = EXHAUSTIVE_CAP) -> ValidationReport:
    """Check the two sign-oracle conditions.

    ``exhaustive`` visits every point and every unit-step neighbor pair.
    Neighbor pairs suffice: the order is generated by unit steps and the
    monotone condition is transitive along chains. ``sampled`` draws random
    comparable pairs from a seeded generator. Violations are report content
    rather than exceptions, and all evaluations go through ``peek``.
    """
    k = o.box.dim
    if mode == "exhaustive":
        if o.box.volume > cap:
            raise UsageError(f"volume {o.box.volume} exceeds exhaustive cap {cap}")
        points = 0
        pairs = 0
        for x in enumerate_box(o.box):
            v = o.peek(x)
            points += 1
            bad = _range_violation(o.box, k, x, v)
            if bad:
                return ValidationReport(False, bad, points, pairs)
            for d in range(k):
                if x[d] == o.box.hi[d]:
                    continue
                y = x[:d] + (x[d] + 1,) + x[d + 1 :]
                w = o.peek(y)
                pairs += 1
                bad = _pair_violation(k, x, v, y, w)
                if bad:
                    return ValidationReport(False, bad, points, pairs)
        return ValidationReport(True, None, points, pairs)
    if mode == "sampled":
        gen = XorShift64Star(seed)
        points = 0
        pairs = 0
        for _ in range(count):
            x = gen.point(o.box)
            y = tuple(gen.randint(c, b) for c, b in zip(x, o.box.hi))
            v = o.peek(x)
            w = o.peek(y)
            points += 2
            pairs += 1
            bad = (_range_violation(o.box, k, x, v)
                   or _range_violation(o.box, k, y, w)
                   or _pair_violation(k, x, v, y, w))
            if bad:
                return ValidationReport(False, bad, points, pairs)
        return ValidationReport(True, None, points, pairs)
    raise UsageError(f"unknown validate mode {mode!r}")


def _range_violation(box: Box, k: int, x, v) -> Optional[str]:
    if len(v) != k + 1 or any(s not in (-1, 0, 1) for s in v):
        return f"g({x}) = {v} is not a {k + 1}-long sign vector"
    for i in range(k):
        if not box.lo[i] <= x[i] + v[i] <= box.hi[i]:
            return (f"range violation at {x}: {x[i]} + ({v[i]}) = {x[i] + v[i]} "
                    f"outside [{box.lo[i]}, {box.hi[i]}] in dimension {i}")
    return None


def _pair_violation(k: int, x, v, y, w) -> Optional[str]:
    for i in range(k):
        if x[i] + v[i] > y[i] + w[i]:
            return (f"monotone violation in output {i + 1} between {x} and {y}: "
                    f"{x[i]}+({v[i]}) > {y[i]}+({w[i]})")
    if v[k] > w[k]:
        return (f"monotone violation in output {k + 1} between {x} and {y}: "
                f"{v[k]} > {w[k]}")
    return None


def validate_fn(f: FnOracle, mode: str = "exhaustive", count: int = 1000,
                seed: int = 0, cap: int = EXHAUSTIVE_CAP) -> ValidationReport:
    """Self-map plus monotonicity check for a function oracle (via peek)."""
    box = f.box
    k = box.dim
    if mode == "exhaustive":
        if box.volume > cap:
            raise UsageError(f"volume {box.volume} exceeds exhaustive cap {cap}")
        points = 0
        pairs = 0
        for x in enumerate_box(box):
            y = f.peek(x)
            points += 1
            if not box.contains(y):
                return ValidationReport(False, f"f({x}) = {y} escapes the box",
                                        points, pairs)
            for d in range(k):
                if x[d] == box.hi[d]:
                    continue
                x2 = x[:d] + (x[d] + 1,) + x[d + 1 :]
                y2 = f.peek(x2)
                pairs += 1
                if any(u > u2 for u, u2 in zip(y, y2)):
                    return ValidationReport(
                        False,
                        f"monotonicity violated at ({x}, {x2}): f gives {y} vs {y2}",
                        points, pairs)
        return ValidationReport(True, None, points, pairs)
    if mode == "sampled":
        gen = XorShift64Star(seed)
        points = 0
        pairs = 0
        for _ in range(count):
            x = gen.point(box)
            y = tuple(gen.randint(c, b) for c, b in zip(x, box.hi))
            fx, fy = f.peek(x), f.peek(y)
            points += 2
            pairs += 1
            if not box.contains(fx) or not box.contains(fy):
                return ValidationReport(False, f"f escapes the box at {x} or {y}",
                                        points, pairs)
            if any(u > u2 for u, u2 in zip(fx, fy)):
                return ValidationReport(
                    False, f"monotonicity violated at ({x}, {y})", points, pairs)
        return ValidationReport(True, None, points, pairs)
    raise UsageError(f"unknown validate mode {mode!r}")
