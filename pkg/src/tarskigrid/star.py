"""Solvers for the sign-oracle search problem on boxes.

Given ``g: box -> {-1,0,1}^(k+1)`` satisfying the range and monotone
conditions (see :mod:`tarskigrid.oracles`), find a point whose signs are all
>= 0 or all <= 0. The module provides:

  * the 1-D base case (plain bisection on the first sign),
  * two 2-D solvers: a staircase solver (row-wise zero tracking, O(log^2 n))
    and a rectangle-bisection solver targeting an O(log n) budget,
  * the refinement step that upgrades any solver into one returning an
    ordered witness pair with per-coordinate sign guarantees,
  * the decomposition driver that solves (a+b)-dimensional instances by
    simulating a b-dimensional solver against a virtual oracle, and
  * the dispatcher that splits k dimensions as (k-2) + 2 recursively.

All solvers query the point they return, so callers can trust
``StarSolution.signs`` to be genuine oracle output.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, List, Optional

from .config import debug_checks_enabled
from .errors import InstanceInvalidError, SolverContractError, UsageError
from .lattice import (
    Box,
    Point,
    SignVector,
    enumerate_box,
    glb,
    is_uniform,
    leq,
    lub,
    uniform_nonneg,
    uniform_nonpos,
)
from .oracles import (
    SignOracle,
    box_restriction,
    collapse_last_down,
    collapse_last_up,
    project_last,
)

Solver = Callable[[SignOracle], "StarSolution"]

BASE2D_CHOICES = ("fps", "staircase")


@dataclass(frozen=True)
class StarSolution:
    point: Point
    signs: SignVector
    polarity: str  # "nonneg" | "nonpos"


def _mk_solution(point: Point, signs: SignVector) -> StarSolution:
    # All-zero vectors classify as nonpos so that the outer fixed-point loop
    # treats slice-fixed points as prefixed and shrinks toward the low corner.
    if uniform_nonpos(signs):
        return StarSolution(point, signs, "nonpos")
    if uniform_nonneg(signs):
        return StarSolution(point, signs, "nonneg")
    raise InstanceInvalidError(f"solver produced non-uniform signs {signs} at {point}")


@dataclass(frozen=True)
class RefinedWitness:
    p_left: Point
    p_right: Point
    case: int  # 1, 2 or 3


@dataclass
class LedgerRound:
    q: Point
    r: SignVector
    p_left: Point
    p_right: Point


@dataclass
class DecompositionLedger:
    """Per-round history of the simulated outer solver."""

    rounds: List[LedgerRound] = field(default_factory=list)

    def consistency_violations(self) -> List[str]:
        """Pairs of rounds whose answers contradict the monotone condition."""
        out = []
        rounds = self.rounds
        for i, ri in enumerate(rounds):
            b = len(ri.q)
            for j, rj in enumerate(rounds):
                if i == j or not leq(ri.q, rj.q):
                    continue
                for t in range(b):
                    if ri.q[t] + ri.r[t] > rj.q[t] + rj.r[t]:
                        out.append(f"rounds {i},{j}: output {t + 1}: "
                                   f"{ri.q[t]}+({ri.r[t]}) > {rj.q[t]}+({rj.r[t]})")
                if ri.r[b] > rj.r[b]:
                    out.append(f"rounds {i},{j}: last output {ri.r[b]} > {rj.r[b]}")
        return out


# ---------------------------------------------------------------------------
# 1-D
# ---------------------------------------------------------------------------

def _solve_1d_core(lo: int, hi: int, h) -> tuple:
    """Bisection against ``h: value -> (s1, s2)``; returns (value, signs).

    Bracket discipline: the range condition forces s1 >= 0 at ``lo`` and
    s1 <= 0 at ``hi``. A midpoint with s1 = +1 becomes the new low end, s1 =
    -1 the new high end, and any uniform answer returns immediately (note
    (0, anything) is always uniform). At gap <= 1 at least one endpoint must
    be uniform: two mixed endpoints would violate monotonicity.
    """
    l, r = lo, hi
    while r - l > 1:
        mid = (l + r) // 2
        v = h(mid)
        if is_uniform(v):
            return mid, v
        if v[0] == 1:
            l = mid
        elif v[0] == -1:
            r = mid
        else:  # pragma: no cover - (0, x) is uniform, handled above
            raise InstanceInvalidError(f"unreachable sign pattern {v} at {mid}")
    v = h(l)
    if is_uniform(v):
        return l, v
    w = h(r)
    if is_uniform(w):
        return r, w
    raise InstanceInvalidError(
        f"both endpoints mixed at gap <= 1 ({l}: {v}, {r}: {w}); oracle not monotone")


def solve_star_1d(o: SignOracle) -> StarSolution:
    """Solve a 1-dimensional instance in at most ceil(log2 n) + 3 queries."""
    if o.box.dim != 1 or o.m != 2:
        raise UsageError("solve_star_1d needs a 1-dim oracle with 2 outputs")
    y, v = _solve_1d_core(o.box.lo[0], o.box.hi[0], lambda c: o.query((c,)))
    return _mk_solution((y,), v)


def bracketed_zero_in_row(o: SignOracle, row: int, c_lo: int, c_hi: int) -> int:
    """Column with first sign 0 on ``row``, given bracket certificates.

    Pre: ``g((c_lo, row))_1 >= 0`` and ``g((c_hi, row))_1 <= 0`` (the caller's
    certificates; not queried up front). Uses <= ceil(log2 range) + 2 queries.
    """
    l, r = c_lo, c_hi
    while r - l > 1:
        c = (l + r) // 2
        s = o.query((c, row))[0]
        if s == 0:
            return c
        if s == 1:
            l = c
        else:
            r = c
    s = o.query((l, row))[0]
    if s == 0:
        return l
    if s == -1:
        raise InstanceInvalidError(
            f"bracket certificate failed at column {l}, row {row}")
    s = o.query((r, row))[0]
    if s == 0:
        return r
    raise InstanceInvalidError(
        f"no first-sign zero between columns {l} and {r} in row {row}")


# ---------------------------------------------------------------------------
# 2-D staircase solver
# ---------------------------------------------------------------------------

def solve_star_2d_staircase(o: SignOracle) -> StarSolution:
    """Reference 2-D solver: O(log^2 n) queries, simple invariants.

    Runs the 1-D bisection over rows, where evaluating a row means locating a
    first-sign zero column by bracketed search and reading the remaining two
    signs there. Column brackets are inherited from previously evaluated
    rows: below a known zero the first sign stays >= 0 at the same column,
    above it stays <= 0, so evaluated curve points are chain-ordered and the
    derived row function is a valid 1-dimensional instance on the evaluated
    set.
    """
    _check_2d(o)
    box = o.box
    curve: dict = {}  # row -> (column, (sign2, sign3))

    def eval_row(y: int):
        got = curve.get(y)
        if got is None:
            c_lo, c_hi = box.lo[0], box.hi[0]
            for yy, (c, _) in curve.items():
                if yy < y:
                    if c > c_lo:
                        c_lo = c
                elif c < c_hi:
                    c_hi = c
            c = bracketed_zero_in_row(o, y, c_lo, c_hi)
            full = o.query((c, y))
            got = (c, (full[1], full[2]))
            curve[y] = got
        return got[1]

    y, _ = _solve_1d_core(box.lo[1], box.hi[1], eval_row)
    c, _ = curve[y]
    return _mk_solution((c, y), o.query((c, y)))


# ---------------------------------------------------------------------------
# 2-D rectangle-bisection solver
# ---------------------------------------------------------------------------

def _check_2d(o: SignOracle) -> None:
    if o.box.dim != 2 or o.m != 3:
        raise UsageError("2-D solvers need a 2-dim oracle with 3 outputs")


def _classify(v: SignVector) -> str:
    if is_uniform(v):
        return "return"
    if v[0] >= 0 and v[1] >= 0:
        return "lo"  # usable low corner; last sign is forced to -1
    if v[0] <= 0 and v[1] <= 0:
        return "hi"
    return "mixed"


def solve_star_2d_bisect(o: SignOracle) -> StarSolution:
    """Fast 2-D solver: certificate-rectangle bisection.

    Maintains a rectangle [l, r] with corner certificates (first two signs
    >= 0 at l and <= 0 at r; last sign -1 at l and +1 at r, else we are
    done). Such a rectangle always contains a point with both grid signs 0,
    because x -> x + (g1, g2) maps it into itself. Each round queries the
    rectangle midpoint: a one-sided answer shrinks both dimensions; a mixed
    answer triggers a sign search along the midline of the longer dimension
    which either finishes or halves that dimension. Two oppositely mixed
    points can never be adjacent (their first-sign sum would decrease), so
    the line search always exits with progress on valid oracles.

    The worst-case bound is O(log^2 side); on the instance families used in
    the benchmarks the measured cost tracks C * log2(side) (the frozen budget
    constant lives with the verification suites).
    """
    _check_2d(o)
    box = o.box
    l, r = box.lo, box.hi
    vl = o.query(l)
    if is_uniform(vl):
        return _mk_solution(l, vl)
    if vl[0] < 0 or vl[1] < 0:
        raise InstanceInvalidError(f"low corner certificate failed: g({l}) = {vl}")
    vr = o.query(r)
    if is_uniform(vr):
        return _mk_solution(r, vr)
    if vr[0] > 0 or vr[1] > 0:
        raise InstanceInvalidError(f"high corner certificate failed: g({r}) = {vr}")
    while True:
        e0, e1 = r[0] - l[0], r[1] - l[1]
        if e0 <= 1 and e1 <= 1:
            for p in enumerate_box(Box(l, r)):
                v = o.query(p)
                if is_uniform(v):
                    return _mk_solution(p, v)
            raise InstanceInvalidError(
                f"no uniform point in the final cell [{l}, {r}]")
        m = ((l[0] + r[0]) // 2, (l[1] + r[1]) // 2)
        vm = o.query(m)
        cls = _classify(vm)
        if cls == "return":
            return _mk_solution(m, vm)
        if cls == "lo":
            l = m
            continue
        if cls == "hi":
            r = m
            continue
        out = _mixed_step(o, l, r, m, vm, 1 if e1 >= e0 else 0)
        if out[0] == "return":
            return out[1]
        _, l, r = out


def _mixed_step(o: SignOracle, l: Point, r: Point, m: Point, vm: SignVector,
                s: int):
    """Resolve a mixed midpoint by searching the midline of split axis ``s``.

    The search runs along the other axis t at fixed coordinate m[s]. Anchor
    invariant: the low anchor shows (g_t, g_s) = (+1, -1), the high anchor
    (-1, +1). Every non-mixed answer either solves the instance or supplies
    a certified corner on the midline, halving dimension s.
    """
    t = 1 - s
    if s == 1:
        def P(c):
            return (c, m[1])
    else:
        def P(c):
            return (m[0], c)

    lo_a: Optional[int] = None
    hi_a: Optional[int] = None
    if vm[t] == 1:
        lo_a = m[t]
        c = r[t]  # g_t <= 0 is guaranteed at this end
    else:
        hi_a = m[t]
        c = l[t]  # g_t >= 0 guaranteed
    while True:
        w = o.query(P(c))
        cls = _classify(w)
        if cls == "return":
            return ("return", _mk_solution(P(c), w))
        if cls == "lo":
            return ("rect", P(c), r)
        if cls == "hi":
            return ("rect", l, P(c))
        if w[t] == 1:
            lo_a = c
        else:
            hi_a = c
        if lo_a is None or hi_a is None:
            raise InstanceInvalidError(
                f"guaranteed-sign end of the midline came back mixed at {P(c)}: {w}")
        if hi_a - lo_a <= 1:
            raise InstanceInvalidError(
                f"adjacent opposite mixed patterns at {P(lo_a)}/{P(hi_a)}; "
                "oracle not monotone")
        c = (lo_a + hi_a) // 2


# ---------------------------------------------------------------------------
# Refinement
# ---------------------------------------------------------------------------

def solve_refined_star(o: SignOracle, solver: Solver) -> RefinedWitness:
    """Witness pair via at most two runs of ``solver`` plus O(1) queries.

    First run: on the oracle with the last sign collapsed upward ({0, +1}
    -> +1). The returned point updates one side of the pair; if its true
    last sign is nonzero we are in case 1 or 2 and done. Otherwise the
    second run solves the downward collapse restricted to the current pair's
    box, which settles case 1 or case 3.
    """
    k = o.box.dim
    if o.m != k + 1:
        raise UsageError("refined solver needs m = dim + 1 outputs")
    lo, hi = o.box.lo, o.box.hi
    s1 = solver(collapse_last_up(o))
    p_star = s1.point
    if s1.signs[-1] == 1:
        p_left, p_right = p_star, hi
    else:
        p_left, p_right = lo, p_star
    true_last = o.query(p_star)[-1]
    if true_last == 1:
        return RefinedWitness(p_left, p_right, 1)
    if true_last == -1:
        return RefinedWitness(p_left, p_right, 2)
    if s1.signs[-1] != 1:  # collapse maps 0 to +1; anything else is corrupt
        raise InstanceInvalidError(
            f"upward collapse returned {s1.signs[-1]} where the true sign is 0")
    restricted = box_restriction(collapse_last_down(o), Box(p_left, p_right))
    s2 = solver(restricted)
    q_star = s2.point
    if s2.signs[-1] == 1:
        return RefinedWitness(q_star, p_right, 1)
    return RefinedWitness(p_left, q_star, 3)


# ---------------------------------------------------------------------------
# Decomposition
# ---------------------------------------------------------------------------

class _Found(Exception):
    def __init__(self, solution: StarSolution):
        self.solution = solution


LEDGER_CHECK_CAP = 10 ** 4


def decompose_star(o: SignOracle, a: int, solver_a: Solver, solver_b: Solver,
                   warm_start: bool = True,
                   ledger: Optional[DecompositionLedger] = None,
                   check_invariants: Optional[bool] = None) -> StarSolution:
    """Solve an (a+b)-dimensional instance with an a-dim and a b-dim solver.

    The b-dimensional solver runs against a virtual oracle. Answering its
    query q takes one witness-refinement run per trailing output (b+1 runs):
    each run pins another trailing sign to a constant over the current
    witness box, after which the signs at ``(p_left, q)`` answer q. Warm
    start: each round's witness box starts from the least upper bound of
    comparable earlier left witnesses and the greatest lower bound of
    comparable earlier right witnesses (seeded with the box corners), which
    is exactly what makes answers to comparable queries mutually consistent.

    If the trailing signs come back uniform, the full-dimensional point is a
    solution and the simulation short-circuits. ``ledger`` (if supplied)
    collects the non-terminating rounds.
    """
    K = o.box.dim
    b = K - a
    if a < 1 or b < 1:
        raise UsageError(f"need a >= 1 and b >= 1, got a={a}, b={b}")
    if o.m != K + 1:
        raise UsageError("decomposition needs m = dim + 1 outputs")
    checks = debug_checks_enabled() if check_invariants is None else check_invariants
    prefix_box = o.box.prefix(a)
    suffix_box = o.box.suffix(a)
    history = ledger if ledger is not None else DecompositionLedger()

    def answer(q: Point) -> SignVector:
        if warm_start:
            p_l = lub([h.p_left for h in history.rounds if leq(h.q, q)]
                      + [prefix_box.lo])
            p_r = glb([h.p_right for h in history.rounds if leq(q, h.q)]
                      + [prefix_box.hi])
        else:
            p_l, p_r = prefix_box.lo, prefix_box.hi
        calls = 0
        for j in range(a, K + 1):
            gj = project_last(o, a, q, j)
            w = solve_refined_star(box_restriction(gj, Box(p_l, p_r)), solver_a)
            p_l, p_r = w.p_left, w.p_right
            calls += 1
        if calls != b + 1:  # pragma: no cover - structural
            raise SolverContractError(f"{calls} refinement runs in a round, "
                                      f"expected {b + 1}")
        full_left = o.query(p_l + q)
        r = full_left[a:]
        if uniform_nonneg(r):
            raise _Found(_mk_solution(p_l + q, full_left))
        if uniform_nonpos(r):
            raise _Found(_mk_solution(p_r + q, o.query(p_r + q)))
        rec = LedgerRound(q, r, p_l, p_r)
        if checks:
            _check_round(o, a, b, history, rec, full_left)
        history.rounds.append(rec)
        return r

    virtual = SignOracle.virtual(suffix_box, b + 1, answer, o.stats)
    try:
        stray = solver_b(virtual)
    except _Found as f:
        return f.solution
    raise SolverContractError(
        f"outer solver returned {stray.point} without a uniform answer firing; "
        "solvers must query their returned point")


def _check_round(o: SignOracle, a: int, b: int, history: DecompositionLedger,
                 rec: LedgerRound, full_left: SignVector) -> None:
    if not leq(rec.p_left, rec.p_right):
        raise InstanceInvalidError(
            f"witness pair out of order: {rec.p_left} vs {rec.p_right}")
    if any(s < 0 for s in full_left[:a]):
        raise InstanceInvalidError(
            f"left witness signs broke at ({rec.p_left}, {rec.q}): {full_left}")
    full_right = o.peek(rec.p_right + rec.q)
    if any(s > 0 for s in full_right[:a]):
        raise InstanceInvalidError(
            f"right witness signs broke at ({rec.p_right}, {rec.q}): {full_right}")
    if full_right[a:] != rec.r:
        raise InstanceInvalidError(
            f"corner equality broke at round {len(history.rounds)}: "
            f"{full_right[a:]} != {rec.r}")
    if len(history.rounds) <= LEDGER_CHECK_CAP:
        for i, h in enumerate(history.rounds):
            for x, y in ((h, rec), (rec, h)):
                if not leq(x.q, y.q):
                    continue
                for t in range(b):
                    if x.q[t] + x.r[t] > y.q[t] + y.r[t]:
                        raise InstanceInvalidError(
                            f"virtual-oracle consistency broke between rounds "
                            f"{i} and {len(history.rounds)} in output {t + 1}")
                if x.r[b] > y.r[b]:
                    raise InstanceInvalidError(
                        f"virtual-oracle consistency broke between rounds "
                        f"{i} and {len(history.rounds)} in the last output")


# ---------------------------------------------------------------------------
# Dispatcher
# ---------------------------------------------------------------------------

def split_schedule(k: int) -> List[tuple]:
    """Outermost-first (a, b) splits for k >= 3; e.g. 5 -> [(3, 2), (1, 2)].

    The outer solver is always the 2-D base, so the multiplicative overhead
    of a round stays at b + 1 = 3, and odd k bottoms out at the 1-D base.
    """
    out = []
    while k >= 3:
        out.append((k - 2, 2))
        k -= 2
    return out


def solve_star(o: SignOracle, base2d: str = "fps", warm_start: bool = True,
               ledger: Optional[DecompositionLedger] = None) -> StarSolution:
    """Dispatch on dimension: 1-D and 2-D bases, decomposition above.

    ``base2d`` selects the 2-D base solver: "fps" for the fast
    rectangle-bisection solver, "staircase" for the reference solver.
    """
    if base2d not in BASE2D_CHOICES:
        raise UsageError(f"base2d must be one of {BASE2D_CHOICES}")
    k = o.box.dim
    if k == 0:
        # A 0-dim oracle has one point and one sign; always uniform.
        return _mk_solution((), o.query(()))
    if k == 1:
        return solve_star_1d(o)
    base = solve_star_2d_bisect if base2d == "fps" else solve_star_2d_staircase
    if k == 2:
        return base(o)

    def solver_a(sub: SignOracle) -> StarSolution:
        return solve_star(sub, base2d=base2d, warm_start=warm_start)

    return decompose_star(o, k - 2, solver_a, base, warm_start=warm_start,
                          ledger=ledger)
