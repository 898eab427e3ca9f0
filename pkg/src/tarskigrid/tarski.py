"""Top-level fixed-point solvers for monotone self-maps of a box.

``solve_tarski`` runs the slice-and-shrink loop: while some dimension of the
bracket box [l, r] is wider than 2, slice the widest dimension at its
midpoint, solve the sign problem on the slice, and move the corresponding
bracket corner to the returned point. The final cell (every side <= 3) is
swept by brute force. ``solve_tarski_dqy`` is the coordinate-wise binary
search baseline; ``brute_force_fixed_point`` and ``all_fixed_points`` are
the exhaustive instruments the test suites verify against.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Set

from .config import debug_checks_enabled
from .errors import InstanceInvalidError, UsageError
from .lattice import Box, Point, enumerate_box, insert_coord, leq, sgn
from .oracles import FnOracle, QueryStats, box_restriction, slice_oracle
from .star import solve_star

BRUTE_FORCE_CAP = 10 ** 6


@dataclass(frozen=True)
class TarskiResult:
    point: Point
    rounds: int
    stats: QueryStats


def solve_tarski(f: FnOracle, base2d: str = "fps") -> TarskiResult:
    """Find a fixed point of a monotone ``f`` via sign-problem slices.

    Dimension choice: the largest gap among those > 2, ties to the lowest
    index. A slice answer with nonpositive polarity is prefixed (f(q) ⪯ q)
    and replaces the high corner; otherwise it replaces the low corner. The
    bracket invariant l ⪯ f(l), f(r) ⪯ r guarantees a fixed point stays
    inside [l, r] throughout (checked with two debug peeks per round when
    debug checks are on).
    """
    box = f.box
    if box.dim < 1:
        raise UsageError("solve_tarski needs at least one dimension")
    l, r = box.lo, box.hi
    rounds = 0
    checks = debug_checks_enabled()
    while True:
        gaps = [b - a for a, b in zip(l, r)]
        if checks:
            _check_bracket(f, l, r)
        i = -1
        best = 2
        for d, gap in enumerate(gaps):
            if gap > best:
                i, best = d, gap
        if i < 0:
            break
        v = (l[i] + r[i] + 1) // 2
        g = box_restriction(slice_oracle(f, i, v),
                            Box(l, r).without_dim(i))
        sol = solve_star(g, base2d=base2d)
        q = insert_coord(sol.point, i, v)
        if sol.polarity == "nonpos":
            r = q
        else:
            l = q
        rounds += 1
    fp = brute_force_fixed_point(f, Box(l, r))
    if fp is None:
        raise InstanceInvalidError(
            f"no fixed point in the final cell [{l}, {r}]; f is not monotone")
    if f.peek(fp) != fp:
        raise InstanceInvalidError(f"fixed point {fp} failed fresh re-verification")
    return TarskiResult(fp, rounds, f.stats.snapshot())


def _check_bracket(f: FnOracle, l: Point, r: Point) -> None:
    if not leq(l, r):
        raise InstanceInvalidError(f"bracket out of order: {l} vs {r}")
    if not leq(l, f.peek(l)):
        raise InstanceInvalidError(f"loop invariant broke: f({l}) is not above it")
    if not leq(f.peek(r), r):
        raise InstanceInvalidError(f"loop invariant broke: f({r}) is not below it")


def brute_force_fixed_point(f: FnOracle, box: Box,
                            cap: int = BRUTE_FORCE_CAP) -> Optional[Point]:
    """First fixed point of f in row-major order, or None."""
    if box.volume > cap:
        raise UsageError(f"volume {box.volume} over brute-force cap {cap}")
    for p in enumerate_box(box):
        if f.query(p) == p:
            return p
    return None


def all_fixed_points(f: FnOracle, box: Box,
                     cap: int = BRUTE_FORCE_CAP) -> Set[Point]:
    """Exhaustive fixed-point set; empty means the instance is invalid."""
    if box.volume > cap:
        raise UsageError(f"volume {box.volume} over brute-force cap {cap}")
    out = {p for p in enumerate_box(box) if f.query(p) == p}
    if not out:
        raise InstanceInvalidError("monotone self-map with no fixed point: invalid")
    return out


def solve_tarski_dqy(f: FnOracle) -> TarskiResult:
    """Coordinate binary-search baseline.

    Recursively: binary search the last coordinate value v; for each probe,
    find (recursively) a fixed point x of the slice map y -> f(y, v) inside
    the current anchor box, then branch on sgn(f(x, v)_last - v). Anchors
    carry the bracket discipline across probes: a slice fixed point that
    moves up becomes the low anchor for higher v (it is postfixed there),
    and symmetrically for the high side, which keeps every sub-search inside
    a self-mapped sub-box and forces the endgame to land on a fixed point.
    """
    box = f.box
    if box.dim < 1:
        raise UsageError("solve_tarski_dqy needs at least one dimension")
    nodes = 0

    def rec(d: int, suffix: Point, alo: Point, ahi: Point) -> Point:
        nonlocal nodes
        nodes += 1
        if d == 0:
            return ()
        lo_v, hi_v = alo[d - 1], ahi[d - 1]
        xa, xb = alo[: d - 1], ahi[: d - 1]
        l, r = lo_v, hi_v

        def probe(v, xa, xb):
            x = rec(d - 1, (v,) + suffix, xa, xb)
            y = f.query(x + (v,) + suffix)
            return x, sgn(y[d - 1] - v)

        while r - l > 1:
            v = (l + r) // 2
            x, s = probe(v, xa, xb)
            if s == 0:
                return x + (v,)
            if s > 0:
                l, xa = v, x
            else:
                r, xb = v, x
        x, s = probe(l, xa, xb)
        if s == 0:
            return x + (l,)
        if s > 0:
            xa = x
            x, s = probe(r, xa, xb)
            if s == 0:
                return x + (r,)
            raise InstanceInvalidError(
                f"bracket endgame failed at coordinate {d - 1}: sign {s} at {r}")
        raise InstanceInvalidError(
            f"low bracket end moved down at coordinate {d - 1} value {l}")

    fp = rec(box.dim, (), box.lo, box.hi)
    if f.peek(fp) != fp:
        raise InstanceInvalidError(f"fixed point {fp} failed fresh re-verification")
    return TarskiResult(fp, nodes, f.stats.snapshot())
