"""Exact event-driven simulation of the push-block interlacing dynamics.

Level m carries m particles on the grid x in Z + (m+1)/2, encoded as
integers x2 = 2x.  Every particle rings two exponential clocks; on odd
levels the right clock runs at rate 1/eps and the left at eps, on even
levels the rates swap.  The total rate (eps + 1/eps) M (M+1)/2 never
changes, so the event chain picks a particle uniformly, then a direction
by level parity.  A ring whose jump is blocked by the level below still
consumes its waiting time.

Blocking looks one level down and pushing propagates strictly upward, so
the first M levels form an autonomous Markov process: truncation at M is
exact rather than an approximation.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterator

import numpy as np

from ._accel import consume_events
from .finite_kernel import GridPoint

__all__ = [
    "TargetOutOfRange",
    "SimConfig",
    "ParticleConfig",
    "PairTarget",
    "EndpointTarget",
    "init_config",
    "apply_jump",
    "run",
    "run_trials",
    "estimate_occupancy",
    "estimate_pair_and_endpoints",
]


class TargetOutOfRange(ValueError):
    """Estimation target outside the simulated levels."""


@dataclass(frozen=True)
class SimConfig:
    """Simulation problem: levels 1..M, rate asymmetry, horizon, trials."""

    levels: int
    eps_rate: float
    t_end: float
    trials: int
    seed: int

    def __post_init__(self):
        if self.levels < 1:
            raise ValueError(f"levels must be >= 1, got {self.levels}")
        if not (0.0 < self.eps_rate < 1.0):
            raise ValueError(f"eps_rate must be in (0,1), got {self.eps_rate}")
        if self.t_end < 0.0:
            raise ValueError(f"t_end must be >= 0, got {self.t_end}")
        if self.trials < 1:
            raise ValueError(f"trials must be >= 1, got {self.trials}")
        if not (0 <= self.seed < 2**64):
            raise ValueError(f"seed must be a 64-bit unsigned int, got {self.seed}")


@dataclass(frozen=True)
class ParticleConfig:
    """Interlaced particle array; levels[m-1] holds level m as sorted x2."""

    levels: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        for m, row in enumerate(self.levels, start=1):
            if len(row) != m:
                raise ValueError(f"level {m} must hold {m} particles, got {len(row)}")
            for x2 in row:
                if (x2 + m + 1) % 2 != 0:
                    raise ValueError(f"x2={x2} off the level-{m} grid")
            if any(a >= b for a, b in zip(row, row[1:])):
                raise ValueError(f"level {m} not strictly increasing: {row}")
            if m >= 2:
                below = self.levels[m - 2]
                # interlacing: row[i] < below[i] < row[i+1]
                for i in range(m - 1):
                    if not (row[i] < below[i] < row[i + 1]):
                        raise ValueError(
                            f"interlacing broken between levels {m-1},{m} at slot {i}"
                        )

    @property
    def n_levels(self) -> int:
        return len(self.levels)


def init_config(M: int) -> ParticleConfig:
    """Packed triangle x_k^m = -(m+1)/2 + k, i.e. x2 = 2k - m - 1."""
    if M < 1:
        raise ValueError(f"M must be >= 1, got {M}")
    return ParticleConfig(tuple(
        tuple(2 * k - m - 1 for k in range(1, m + 1)) for m in range(1, M + 1)
    ))


def _flatten(cfg: ParticleConfig) -> np.ndarray:
    return np.array([x2 for row in cfg.levels for x2 in row], dtype=np.int64)


def _unflatten(pos: np.ndarray, M: int) -> ParticleConfig:
    rows = []
    at = 0
    for m in range(1, M + 1):
        rows.append(tuple(int(v) for v in pos[at:at + m]))
        at += m
    return ParticleConfig(tuple(rows))


def _tables(M: int, eps: float):
    """Slot tables: level offsets, per-slot (level, index), right-probability."""
    n = M * (M + 1) // 2
    tri = np.array([m * (m - 1) // 2 for m in range(1, M + 1)], dtype=np.int64)
    lev = np.empty(n, dtype=np.int64)
    idx = np.empty(n, dtype=np.int64)
    pright = np.empty(n, dtype=np.float64)
    p_odd = 1.0 / (1.0 + eps * eps)
    p_even = eps * eps / (1.0 + eps * eps)
    at = 0
    for m in range(1, M + 1):
        for k in range(1, m + 1):
            lev[at] = m
            idx[at] = k
            pright[at] = p_odd if m % 2 == 1 else p_even
            at += 1
    return tri, lev, idx, pright


def apply_jump(cfg: ParticleConfig, m: int, k: int, direction: str) -> ParticleConfig:
    """One attempted jump of particle k (1-based) on level m.

    Returns the new configuration; a blocked attempt returns the input
    unchanged.  Raises IndexError for an invalid (m, k).
    """
    if not (1 <= m <= cfg.n_levels) or not (1 <= k <= m):
        raise IndexError(f"no particle (m={m}, k={k}) in a {cfg.n_levels}-level array")
    if direction not in ("left", "right"):
        raise ValueError(f"direction must be 'left' or 'right', got {direction!r}")
    rows = [list(r) for r in cfg.levels]
    x2 = rows[m - 1][k - 1]
    M = cfg.n_levels
    if direction == "right":
        if k <= m - 1 and rows[m - 2][k - 1] == x2 + 1:
            return cfg
        rows[m - 1][k - 1] = x2 + 2
        l = 1
        while m + l <= M and rows[m + l - 1][k + l - 1] == x2 + l:
            rows[m + l - 1][k + l - 1] += 2
            l += 1
    else:
        if k >= 2 and rows[m - 2][k - 2] == x2 - 1:
            return cfg
        rows[m - 1][k - 1] = x2 - 2
        l = 1
        while m + l <= M and rows[m + l - 1][k - 1] == x2 - l:
            rows[m + l - 1][k - 1] -= 2
            l += 1
    return ParticleConfig(tuple(tuple(r) for r in rows))


def run(cfg: ParticleConfig, p: SimConfig, rng: np.random.Generator) -> ParticleConfig:
    """Evolve one trajectory to p.t_end with the given generator.

    Randomness is drawn in batches (waiting times, particle picks,
    direction picks) and consumed by the compiled event loop; the batch
    schedule is a deterministic function of the config, so a fixed seed
    reproduces the trajectory bit for bit on either backend.
    """
    M = p.levels
    if cfg.n_levels != M:
        raise ValueError(f"config has {cfg.n_levels} levels, SimConfig wants {M}")
    if p.t_end == 0.0:
        return cfg
    n = M * (M + 1) // 2
    R = (p.eps_rate + 1.0 / p.eps_rate) * n
    pos = _flatten(cfg)
    tri, lev, idx, pright = _tables(M, p.eps_rate)
    mean_events = R * p.t_end
    batch = max(64, int(mean_events + 10.0 * math.sqrt(mean_events) + 20.0))
    t = 0.0
    while True:
        waits = rng.exponential(scale=1.0 / R, size=batch)
        upart = rng.random(size=batch)
        udir = rng.random(size=batch)
        t, _, finished = consume_events(
            pos, tri, lev, idx, pright, waits, upart, udir, t, p.t_end, M
        )
        if finished:
            return _unflatten(pos, M)


def _trial_rng(seed: int, trial: int) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence((seed, trial))))


def run_trials(p: SimConfig) -> Iterator[tuple[int, ParticleConfig]]:
    """Terminal configurations of the independent trials, in trial order."""
    start = init_config(p.levels)
    for trial in range(p.trials):
        yield trial, run(start, p, _trial_rng(p.seed, trial))


def _bernoulli(count: int, n: int) -> tuple[float, float]:
    f = count / n
    return f, math.sqrt(f * (1.0 - f) / n)


def estimate_occupancy(p: SimConfig) -> dict[GridPoint, tuple[float, float]]:
    """Empirical one-point function: site -> (frequency, standard error).

    Covers every site occupied in at least one trial; the standard error
    is the Bernoulli estimate sqrt(f(1-f)/trials).
    """
    counts: dict[tuple[int, int], int] = {}
    for _, cfg in run_trials(p):
        for m, row in enumerate(cfg.levels, start=1):
            for x2 in row:
                counts[(m, x2)] = counts.get((m, x2), 0) + 1
    return {
        GridPoint(m, x2): _bernoulli(c, p.trials)
        for (m, x2), c in sorted(counts.items())
    }


@dataclass(frozen=True)
class PairTarget:
    """Joint occupancy of two sites."""

    a: GridPoint
    b: GridPoint


@dataclass(frozen=True)
class EndpointTarget:
    """Particle at the site with no particle two levels up at the same x."""

    at: GridPoint


def estimate_pair_and_endpoints(
    p: SimConfig, targets: list
) -> dict[object, tuple[float, float]]:
    """Empirical joint frequencies for pair and endpoint targets."""
    for tgt in targets:
        if isinstance(tgt, PairTarget):
            if tgt.a.m > p.levels or tgt.b.m > p.levels:
                raise TargetOutOfRange(f"{tgt} beyond level {p.levels}")
        elif isinstance(tgt, EndpointTarget):
            if tgt.at.m + 2 > p.levels:
                raise TargetOutOfRange(
                    f"{tgt} needs level {tgt.at.m + 2} > {p.levels}"
                )
        else:
            raise TypeError(f"unknown target {tgt!r}")
    counts = {tgt: 0 for tgt in targets}
    for _, cfg in run_trials(p):
        occ = [frozenset(row) for row in cfg.levels]
        for tgt in targets:
            if isinstance(tgt, PairTarget):
                hit = (tgt.a.x2 in occ[tgt.a.m - 1]
                       and tgt.b.x2 in occ[tgt.b.m - 1])
            else:
                hit = (tgt.at.x2 in occ[tgt.at.m - 1]
                       and tgt.at.x2 not in occ[tgt.at.m + 1])
            if hit:
                counts[tgt] += 1
    return {tgt: _bernoulli(c, p.trials) for tgt, c in counts.items()}
