"""Benchmark harness: seeded sweeps, CSV records, and scaling summaries.

Every run re-verifies its fixed point with one fresh evaluation before the
record is marked valid. Debug invariant checks are forced off around the
measured solve so certificate peeks never distort query counts. Records are
deterministic: the instance seed derives from (base seed, family, n, k, rep)
through the package RNG, so identical configurations reproduce identical
``distinct_queries`` byte for byte (only ``wall_time_ns`` varies).
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass
from statistics import median
from typing import Dict, List, Optional, Sequence

from .config import debug_checks
from .errors import UsageError
from .instances import InstanceSpec, instantiate
from .lattice import Box
from .rng import XorShift64Star, mix
from .tarski import brute_force_fixed_point, solve_tarski, solve_tarski_dqy

CSV_COLUMNS = (
    "instance_id", "family", "sides", "k", "algorithm", "base2d_config",
    "distinct_queries", "total_queries", "rounds", "valid", "wall_time_ns",
    "seed",
)

FAMILIES = ("hidden_point", "constant_shift", "random_steps")
_FAMILY_CODE = {"hidden_point": 1, "constant_shift": 2, "random_steps": 3}
ALGORITHMS = ("new", "dqy", "brute")

RANDOM_STEPS_NUM_STEPS = 8


@dataclass(frozen=True)
class BenchRecord:
    instance_id: str
    family: str
    sides: tuple
    k: int
    algorithm: str
    base2d_config: str
    distinct_queries: int
    total_queries: int
    rounds: int
    valid: bool
    wall_time_ns: int
    seed: int

    def row(self) -> list:
        return [
            self.instance_id, self.family,
            "x".join(str(s) for s in self.sides), self.k, self.algorithm,
            self.base2d_config, self.distinct_queries, self.total_queries,
            self.rounds, "true" if self.valid else "false", self.wall_time_ns,
            self.seed,
        ]


def derive_seed(base_seed: int, family: str, n: int, k: int, rep: int) -> int:
    return mix(base_seed, _FAMILY_CODE[family], n, k, rep)


def make_spec(family: str, n: int, k: int, seed: int) -> InstanceSpec:
    """Instance of a benchmark family, fully determined by the seed."""
    box = Box.grid(n, k)
    gen = XorShift64Star(seed)
    if family == "hidden_point":
        return InstanceSpec("hidden_point", box.sides, p=gen.point(box))
    if family == "constant_shift":
        return InstanceSpec("constant_shift", box.sides,
                            v=tuple(gen.sign() for _ in range(k)))
    if family == "random_steps":
        return InstanceSpec("random_steps", box.sides, seed=seed,
                            num_steps=RANDOM_STEPS_NUM_STEPS)
    raise UsageError(f"unknown family {family!r}; expected one of {FAMILIES}")


def run_one(family: str, n: int, k: int, algorithm: str, base2d: str,
            seed: int) -> BenchRecord:
    spec = make_spec(family, n, k, seed)
    f = instantiate(spec)
    start = time.perf_counter_ns()
    with debug_checks(False):
        if algorithm == "new":
            result = solve_tarski(f, base2d=base2d)
            point, rounds = result.point, result.rounds
        elif algorithm == "dqy":
            result = solve_tarski_dqy(f)
            point, rounds = result.point, result.rounds
        elif algorithm == "brute":
            point = brute_force_fixed_point(f, f.box)
            rounds = 0
        else:
            raise UsageError(f"unknown algorithm {algorithm!r}")
    elapsed = time.perf_counter_ns() - start
    valid = point is not None and f.peek(point) == point
    return BenchRecord(
        instance_id=f"{family}-k{k}-n{n}-s{seed}",
        family=family, sides=f.box.sides, k=k, algorithm=algorithm,
        base2d_config=base2d if algorithm == "new" else "-",
        distinct_queries=f.stats.distinct, total_queries=f.stats.total,
        rounds=rounds, valid=valid, wall_time_ns=elapsed, seed=seed,
    )


def run_sweep(family: str, k: int, n_grid: Sequence[int], reps: int,
              base_seed: int, algorithms: Sequence[str],
              base2d: str = "fps") -> List[BenchRecord]:
    """One record per (n, rep, algorithm), in deterministic order."""
    records = []
    for n in n_grid:
        for rep in range(reps):
            seed = derive_seed(base_seed, family, n, k, rep)
            for algo in algorithms:
                records.append(run_one(family, n, k, algo, base2d, seed))
    return records


def write_csv(records: Sequence[BenchRecord], path) -> None:
    import csv

    with open(path, "w", newline="\n", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(CSV_COLUMNS)
        for rec in records:
            writer.writerow(rec.row())


# ---------------------------------------------------------------------------
# Scaling summaries
# ---------------------------------------------------------------------------

EXPONENTS = (1, 2, 3, 4)


def max_distinct_by_n(records: Sequence[BenchRecord],
                      algorithm: str) -> Dict[int, int]:
    out: Dict[int, int] = {}
    for rec in records:
        if rec.algorithm != algorithm:
            continue
        n = max(rec.sides)
        out[n] = max(out.get(n, 0), rec.distinct_queries)
    return out


def median_distinct_by_n(records: Sequence[BenchRecord],
                         algorithm: str) -> Dict[int, float]:
    buckets: Dict[int, list] = {}
    for rec in records:
        if rec.algorithm != algorithm:
            continue
        buckets.setdefault(max(rec.sides), []).append(rec.distinct_queries)
    return {n: median(v) for n, v in buckets.items()}


def ratio_table(max_by_n: Dict[int, int]) -> Dict[int, Dict[int, float]]:
    """ratio_table[e][n] = max_queries / (log2 n)^e for e in EXPONENTS."""
    out: Dict[int, Dict[int, float]] = {}
    for e in EXPONENTS:
        out[e] = {n: q / (math.log2(n) ** e) for n, q in sorted(max_by_n.items())}
    return out


def nonincreasing_over_top_half(ratios: Dict[int, float],
                                tol: float = 0.0) -> bool:
    """True if consecutive ratios in the top half never grow beyond 1 + tol."""
    ns = sorted(ratios)
    top = ns[len(ns) // 2 :]
    return all(ratios[b] <= ratios[a] * (1.0 + tol)
               for a, b in zip(top, top[1:]))


def nonincreasing(ratios: Dict[int, float], tol: float = 0.0) -> bool:
    ns = sorted(ratios)
    return all(ratios[b] <= ratios[a] * (1.0 + tol)
               for a, b in zip(ns, ns[1:]))


def flat_over_top_half(ratios: Dict[int, float], tol: float) -> bool:
    """True if top-half ratios all sit within ±tol of their mean."""
    ns = sorted(ratios)
    top = [ratios[n] for n in ns[len(ns) // 2 :]]
    mean = sum(top) / len(top)
    if mean == 0:
        return all(v == 0 for v in top)
    return all(abs(v - mean) <= tol * mean for v in top)


def flag_exponent(max_by_n: Dict[int, int], tol: float = 0.0) -> Optional[int]:
    """Smallest e whose ratio is non-increasing over the top half of the grid."""
    table = ratio_table(max_by_n)
    for e in EXPONENTS:
        if nonincreasing_over_top_half(table[e], tol):
            return e
    return None


def format_summary(records: Sequence[BenchRecord]) -> str:
    lines = []
    algos = sorted({rec.algorithm for rec in records})
    for algo in algos:
        max_by_n = max_distinct_by_n(records, algo)
        med_by_n = median_distinct_by_n(records, algo)
        if not max_by_n:
            continue
        lines.append(f"algorithm {algo}:")
        lines.append("  n        max_q   median_q " +
                     " ".join(f"q/log^{e}" for e in EXPONENTS))
        table = ratio_table(max_by_n)
        for n in sorted(max_by_n):
            ratios = " ".join(f"{table[e][n]:8.3f}" for e in EXPONENTS)
            lines.append(f"  {n:<8d} {max_by_n[n]:<7d} {med_by_n[n]:<8.1f} {ratios}")
        e = flag_exponent(max_by_n)
        if e is None:
            lines.append("  no exponent in 1..4 is non-increasing over the top half")
        else:
            lines.append(f"  smallest non-increasing exponent over the top half: {e}")
    return "\n".join(lines)
