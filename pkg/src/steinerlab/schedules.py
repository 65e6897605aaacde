"""Direction sequences driving the symmetrization experiments.

Four generator families plus user-supplied angle lists:

* prime: angles are the running sums sqrt(2)/2 + sqrt(2)/3 + sqrt(2)/5 + ...
  over the primes, reduced mod 2pi. The increments shrink but their sum
  diverges, so the emitted directions wind around the circle indefinitely
  while eventually becoming dense.
* gronchi: running sums of 1/2 + 1/3 + 1/4 + ... (generalized to increments
  (i+1)^-power), the square-summable-but-divergent family.
* random: i.i.d. uniform angles from a seeded numpy Generator.
* greedy: no fixed sequence; directions are chosen per step from a growing
  candidate pool by minimizing an objective on the current body (greedy_step).
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Iterator

import numpy as np

from .geometry import (
    CenteredBall,
    ConvexPolygon,
    Direction,
    area,
    hausdorff_to_ball,
    origin_radius,
    simplify,
)
from .symmetrize import steiner_polygon

TWO_PI = 2.0 * math.pi
SQRT2 = math.sqrt(2.0)
PI2_OVER_6 = math.pi * math.pi / 6.0
SIX_OVER_PI2 = 6.0 / (math.pi * math.pi)

KINDS = ("prime", "gronchi", "random", "greedy", "explicit")
OBJECTIVES = ("ball", "radius")
POOL_RULES = ("prime", "vdc")


class ScheduleError(ValueError):
    """Invalid schedule configuration or misuse of a schedule kind."""


class EndOfScheduleError(ScheduleError):
    """An explicit schedule has no more angles."""


@dataclass(frozen=True)
class Schedule:
    """A direction-sequence recipe; see the module docstring for the kinds.

    Stateless by design: step states are plain integers handed back by
    next_direction, so a schedule value can drive any number of concurrent
    runs.
    """

    kind: str
    seed: int = 0
    gronchi_power: float = 1.0
    angles: tuple[float, ...] = ()
    objective: str = "ball"
    pool_rule: str = "prime"
    pool_init: int = 32
    pool_growth: float = 2.0
    improve_tol: float = 1e-6
    max_steps: int | None = None

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ScheduleError(f"unknown schedule kind {self.kind!r}; expected one of {KINDS}")
        if self.kind == "gronchi" and not (0.5 < self.gronchi_power <= 1.0):
            raise ScheduleError(
                "gronchi power must lie in (0.5, 1] so increments are divergent "
                f"but square-summable, got {self.gronchi_power}"
            )
        if self.kind == "explicit":
            object.__setattr__(self, "angles", tuple(float(a) for a in self.angles))
            if not all(math.isfinite(a) for a in self.angles):
                raise ScheduleError("explicit schedule angles must be finite")
        if self.kind == "greedy":
            if self.objective not in OBJECTIVES:
                raise ScheduleError(f"objective must be one of {OBJECTIVES}, got {self.objective!r}")
            if self.pool_rule not in POOL_RULES:
                raise ScheduleError(f"pool rule must be one of {POOL_RULES}, got {self.pool_rule!r}")
            if self.pool_init < 1:
                raise ScheduleError("initial pool size must be at least 1")
            if self.pool_growth <= 1.0:
                raise ScheduleError("pool growth factor must exceed 1")
        if self.max_steps is not None and self.max_steps < 0:
            raise ScheduleError("max_steps must be nonnegative")


# ---------------------------------------------------------------------------
# Primes and the prime-angle sums: sieve in growing batches, keep cumulative
# sums and products around since every caller asks for prefixes.
# ---------------------------------------------------------------------------

_primes = np.array([], dtype=np.int64)
_theta = np.array([])  # cumulative sums of sqrt(2)/p
_cos_prod = np.array([])  # cumulative products of cos(sqrt(2)/p)
_euler_prod = np.array([])  # cumulative products of (1 - 1/p^2)^-1
_sieve_limit = 0


def _ensure_primes(count: int) -> None:
    global _primes, _theta, _cos_prod, _euler_prod, _sieve_limit
    if len(_primes) >= count:
        return
    limit = max(_sieve_limit, 1 << 16)
    while True:
        limit *= 2
        sieve = np.ones(limit, dtype=bool)
        sieve[:2] = False
        for i in range(2, int(limit**0.5) + 1):
            if sieve[i]:
                sieve[i * i :: i] = False
        primes = np.flatnonzero(sieve)
        if len(primes) >= count:
            break
    _sieve_limit = limit
    _primes = primes
    inc = SQRT2 / primes
    _theta = np.cumsum(inc)
    _cos_prod = np.cumprod(np.cos(inc))
    _euler_prod = np.cumprod(1.0 / (1.0 - 1.0 / (primes.astype(float) ** 2)))


def primes_stream() -> Iterator[int]:
    """The primes 2, 3, 5, 7, ... as an unbounded iterator."""
    i = 0
    while True:
        _ensure_primes(i + 1)
        yield int(_primes[i])
        i += 1


def prime_list(m: int) -> np.ndarray:
    """The first m primes as an array."""
    if m < 1:
        raise ScheduleError("need at least one prime")
    _ensure_primes(m)
    return _primes[:m].copy()


def prime_angle(m: int) -> float:
    """Cumulative angle sqrt(2)*(1/p_1 + ... + 1/p_m), not reduced."""
    if m < 1:
        raise ScheduleError("step index must be at least 1")
    _ensure_primes(m)
    return float(_theta[m - 1])


def cosine_product(m: int) -> float:
    """prod_{i<=m} cos(sqrt(2)/p_i): the length of a unit segment after m
    symmetrizations along the prime-angle schedule."""
    if m < 1:
        raise ScheduleError("step index must be at least 1")
    _ensure_primes(m)
    return float(_cos_prod[m - 1])


def cosine_products(m: int) -> np.ndarray:
    """All partial products up to m (for whole-prefix monotonicity checks)."""
    if m < 1:
        raise ScheduleError("step index must be at least 1")
    _ensure_primes(m)
    return _cos_prod[:m].copy()


def euler_bound_check(m: int) -> tuple[float, float]:
    """The two sides of the reciprocal product comparison at step m.

    Returns (lhs, rhs) with lhs = prod 1/cos(sqrt(2)/p_i) and
    rhs = prod (1 - 1/p_i^2)^-1. Since cos x >= 1 - x^2/2 gives
    cos(sqrt(2)/p) >= 1 - 1/p^2 termwise, lhs <= rhs; and rhs is a
    sub-product of the Euler factorization of sum 1/k^2, so rhs <= pi^2/6.
    Both comparisons are re-verified on every call; together they put the
    floor 6/pi^2 under every cosine product.
    """
    if m < 1:
        raise ScheduleError("step index must be at least 1")
    _ensure_primes(m)
    lhs = float(1.0 / _cos_prod[m - 1])
    rhs = float(_euler_prod[m - 1])
    if not lhs <= rhs <= PI2_OVER_6 + 1e-12:
        raise ScheduleError(
            f"product bound violated at m={m}: {lhs} <= {rhs} <= {PI2_OVER_6} failed"
        )
    return lhs, rhs


_gronchi_cache: dict[float, np.ndarray] = {}


def gronchi_angle(m: int, power: float = 1.0) -> float:
    """Cumulative angle 1/2^power + 1/3^power + ... + 1/(m+1)^power."""
    if m < 1:
        raise ScheduleError("step index must be at least 1")
    sums = _gronchi_cache.get(power)
    if sums is None or len(sums) < m:
        n = max(m, 1024, 0 if sums is None else 2 * len(sums))
        sums = np.cumsum(np.arange(2, n + 2, dtype=float) ** -power)
        _gronchi_cache[power] = sums
    return float(sums[m - 1])


# random schedules draw from per-seed caches so that a schedule value can be
# replayed from any state without re-running the generator from scratch
_random_cache: dict[int, tuple[np.random.Generator, list[float]]] = {}


def _random_angle(seed: int, index: int) -> float:
    gen, drawn = _random_cache.setdefault(seed, (np.random.default_rng(seed), []))
    while len(drawn) <= index:
        drawn.extend(gen.uniform(0.0, TWO_PI, size=max(64, len(drawn))).tolist())
    return drawn[index]


def next_direction(s: Schedule, state: int = 0) -> tuple[Direction, int]:
    """Emit the direction at the given step state and the successor state.

    States are 0-based counters. Greedy schedules have no body-independent
    next direction; drive them through greedy_step instead.
    """
    if state < 0:
        raise ScheduleError("schedule state must be nonnegative")
    if s.kind == "prime":
        return Direction(prime_angle(state + 1) % TWO_PI), state + 1
    if s.kind == "gronchi":
        g = gronchi_angle(state + 1, s.gronchi_power)
        return Direction(g % TWO_PI), state + 1
    if s.kind == "random":
        return Direction(_random_angle(s.seed, state)), state + 1
    if s.kind == "explicit":
        if state >= len(s.angles):
            raise EndOfScheduleError(f"explicit schedule has only {len(s.angles)} angles")
        return Direction(s.angles[state]), state + 1
    raise ScheduleError("greedy schedules pick directions from the current body; use greedy_step")


def _vdc(i: int) -> float:
    # van der Corput radical inverse, base 2
    x, denom = 0.0, 1.0
    while i:
        denom *= 2.0
        i, rem = divmod(i, 2)
        x += rem / denom
    return x


def dense_pool(size: int, rule: str = "prime") -> list[Direction]:
    """The first `size` directions of a fixed dense enumeration of the circle.

    Growing the size only appends: pools are prefixes of one another, which
    is what makes greedy's pool-doubling monotone.
    """
    if size < 1:
        raise ScheduleError("pool size must be at least 1")
    if rule == "prime":
        _ensure_primes(size)
        return [Direction(a) for a in (_theta[:size] % TWO_PI)]
    if rule == "vdc":
        return [Direction(TWO_PI * _vdc(i)) for i in range(1, size + 1)]
    raise ScheduleError(f"pool rule must be one of {POOL_RULES}, got {rule!r}")


def greedy_step(
    k: ConvexPolygon,
    pool: list[Direction],
    objective: str = "ball",
    eval_cap: int = 256,
) -> tuple[Direction, ConvexPolygon]:
    """Pick the pool direction whose symmetral minimizes the objective.

    Candidates are scored on a vertex-capped copy of the body so a large pool
    stays affordable; the winning direction is then applied to the full body.
    Ties break toward the smallest angle, so the result does not depend on
    pool evaluation order.
    """
    if not pool:
        raise ScheduleError("candidate pool is empty")
    score = _objective_fn(objective, k)
    k_eval = simplify(k, eval_cap)
    best: tuple[float, float] | None = None
    best_u = pool[0]
    for u in pool:
        val = score(steiner_polygon(k_eval, u))
        key = (val, u.angle)
        if best is None or key < best:
            best = key
            best_u = u
    return best_u, steiner_polygon(k, best_u)


def _objective_fn(objective: str, k: ConvexPolygon) -> Callable[[ConvexPolygon], float]:
    if objective == "ball":
        target = CenteredBall(math.sqrt(area(k) / math.pi))
        return lambda p: hausdorff_to_ball(p, target)
    if objective == "radius":
        return origin_radius
    raise ScheduleError(f"objective must be one of {OBJECTIVES}, got {objective!r}")


# ---------------------------------------------------------------------------
# Schedule configuration files: a JSON object with a "kind" key plus the
# kind-specific parameters used above.
# ---------------------------------------------------------------------------

_CONFIG_KEYS = {
    "kind", "seed", "gronchi_power", "angles", "objective",
    "pool_rule", "pool_init", "pool_growth", "improve_tol", "max_steps",
}


def schedule_from_config(obj) -> Schedule:
    if not isinstance(obj, dict):
        raise ScheduleError(f"schedule config must be an object, got {type(obj).__name__}")
    if "kind" not in obj:
        raise ScheduleError('schedule config is missing the "kind" key')
    unknown = set(obj) - _CONFIG_KEYS
    if unknown:
        raise ScheduleError(f"unknown schedule config keys: {sorted(unknown)}")
    kwargs = dict(obj)
    if "angles" in kwargs:
        kwargs["angles"] = tuple(kwargs["angles"])
    return Schedule(**kwargs)
