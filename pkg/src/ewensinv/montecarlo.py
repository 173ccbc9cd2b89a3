"""Monte Carlo estimates of inversion and cycle statistics.

Samples are drawn in fixed blocks of ``BLOCK_SIZE``; block b uses the child
stream ``make_generator(seed, block=b)``. Each block is reduced to
(count, mean, M2) and the blocks are merged in index order, so the result
does not depend on how many worker threads ran (``EWENS_THREADS`` caps them).
"""

from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass
from typing import Callable, Mapping

import numpy as np

from . import formulas
from .permcore import cycle_type_rows, fixed_point_counts_rows, inverse_rows, inversion_counts_rows
from .sampler import EwensParams, RandomSeed, make_generator, sample_array

__all__ = [
    "BLOCK_SIZE",
    "POISSON_SLACK",
    "EstimateWithError",
    "PoissonComparison",
    "Moments",
    "estimate_statistics",
    "estimate_expected_inversions",
    "estimate_pair_probability",
    "estimate_fixed_points",
    "estimate_cycle_length_counts",
    "report_record",
    "worker_count",
]

BLOCK_SIZE = 8192
POISSON_SLACK = 0.01

Statistic = Callable[[np.ndarray], np.ndarray]


@dataclass(frozen=True)
class Moments:
    """Running count / mean / sum of squared deviations; merge is associative."""

    count: int = 0
    mean: float = 0.0
    m2: float = 0.0

    @classmethod
    def of(cls, x: np.ndarray) -> "Moments":
        x = np.asarray(x, dtype=np.float64)
        if x.size == 0:
            return cls()
        mu = float(x.mean())
        return cls(int(x.size), mu, float(((x - mu) ** 2).sum()))

    def merge(self, other: "Moments") -> "Moments":
        if other.count == 0:
            return self
        if self.count == 0:
            return other
        n = self.count + other.count
        delta = other.mean - self.mean
        mean = self.mean + delta * other.count / n
        m2 = self.m2 + other.m2 + delta * delta * self.count * other.count / n
        return Moments(n, mean, m2)

    @property
    def variance(self) -> float:
        return self.m2 / (self.count - 1) if self.count > 1 else 0.0

    @property
    def std_error(self) -> float:
        return math.sqrt(self.variance / self.count) if self.count else math.nan


@dataclass(frozen=True)
class EstimateWithError:
    mean: float
    std_error: float
    sample_count: int
    seed: RandomSeed
    variance: float = 0.0

    def z(self, target: float) -> float:
        diff = self.mean - target
        if self.std_error == 0:
            return 0.0 if diff == 0 else math.copysign(math.inf, diff)
        return diff / self.std_error


@dataclass(frozen=True)
class PoissonComparison:
    m: int
    empirical_mean: float
    empirical_variance: float
    target: float
    z_mean: float
    std_error: float
    sample_count: int
    slack: float = POISSON_SLACK

    def accepted(self, k: float = 4.0) -> bool:
        """|mean - theta/m| < max(k * std_error, slack); the slack covers finite-n bias."""
        return abs(self.empirical_mean - self.target) < max(k * self.std_error, self.slack)


def worker_count() -> int:
    env = os.environ.get("EWENS_THREADS")
    cap = os.cpu_count() or 1
    if env:
        try:
            cap = max(1, int(env))
        except ValueError:
            raise ValueError(f"EWENS_THREADS must be an integer, got {env!r}") from None
    return cap


def _check(params: EwensParams, samples: int) -> None:
    if not isinstance(params, EwensParams):
        raise TypeError("params must be EwensParams")
    if isinstance(samples, bool) or not isinstance(samples, int) or samples < 2:
        raise ValueError(f"samples must be >= 2, got {samples!r}")


def estimate_statistics(
    params: EwensParams,
    samples: int,
    seed: RandomSeed,
    statistics: Mapping[str, Statistic],
    workers: int | None = None,
) -> dict[str, Moments]:
    """Moments of several per-permutation statistics computed on shared samples."""
    _check(params, samples)
    sizes = [BLOCK_SIZE] * (samples // BLOCK_SIZE)
    if samples % BLOCK_SIZE:
        sizes.append(samples % BLOCK_SIZE)

    def run_block(b: int) -> dict[str, Moments]:
        perms = sample_array(params, sizes[b], make_generator(seed, block=b))
        return {name: Moments.of(stat(perms)) for name, stat in statistics.items()}

    workers = min(workers or worker_count(), len(sizes))
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(run_block, range(len(sizes))))
    else:
        parts = [run_block(b) for b in range(len(sizes))]
    out = {name: Moments() for name in statistics}
    for part in parts:
        for name in statistics:
            out[name] = out[name].merge(part[name])
    return out


def _to_estimate(mom: Moments, seed: RandomSeed) -> EstimateWithError:
    return EstimateWithError(mom.mean, mom.std_error, mom.count, seed, mom.variance)


def pair_statistic(i: int, j: int) -> Statistic:
    def stat(perms: np.ndarray) -> np.ndarray:
        inv = inverse_rows(perms)
        return (inv[:, i - 1] > inv[:, j - 1]).astype(np.float64)

    return stat


def cycle_length_statistic(m: int) -> Statistic:
    return lambda perms: cycle_type_rows(perms, m)


def estimate_expected_inversions(params: EwensParams, samples: int, seed: RandomSeed) -> EstimateWithError:
    mom = estimate_statistics(params, samples, seed, {"inv": inversion_counts_rows})["inv"]
    return _to_estimate(mom, seed)


def estimate_pair_probability(params: EwensParams, i: int, j: int, samples: int, seed: RandomSeed) -> EstimateWithError:
    if not 1 <= i < j <= params.n:
        raise ValueError(f"need 1 <= i < j <= {params.n}, got ({i}, {j})")
    mom = estimate_statistics(params, samples, seed, {"pair": pair_statistic(i, j)})["pair"]
    return _to_estimate(mom, seed)


def estimate_fixed_points(params: EwensParams, samples: int, seed: RandomSeed) -> EstimateWithError:
    mom = estimate_statistics(params, samples, seed, {"fix": fixed_point_counts_rows})["fix"]
    return _to_estimate(mom, seed)


def poisson_comparison(params: EwensParams, m: int, mom: Moments) -> PoissonComparison:
    target = float(params.theta) / m
    est = _to_estimate(mom, RandomSeed())
    return PoissonComparison(
        m=m,
        empirical_mean=mom.mean,
        empirical_variance=mom.variance,
        target=target,
        z_mean=est.z(target),
        std_error=mom.std_error,
        sample_count=mom.count,
    )


def estimate_cycle_length_counts(params: EwensParams, m: int, samples: int, seed: RandomSeed) -> PoissonComparison:
    """Mean and variance of the number of m-cycles, compared with Poisson(theta/m)."""
    if isinstance(m, bool) or not isinstance(m, int) or not 1 <= m <= params.n:
        raise ValueError(f"cycle length m must be in [1, {params.n}], got {m!r}")
    mom = estimate_statistics(params, samples, seed, {"cyc": cycle_length_statistic(m)})["cyc"]
    return poisson_comparison(params, m, mom)


def report_record(
    name: str,
    est: EstimateWithError | PoissonComparison,
    target: float,
    params: EwensParams,
    seed: RandomSeed,
    **extra,
) -> dict:
    """JSON-ready record {target, mean, std_error, z, samples, seed, params}."""
    if isinstance(est, PoissonComparison):
        mean, se, count, z = est.empirical_mean, est.std_error, est.sample_count, est.z_mean
    else:
        mean, se, count, z = est.mean, est.std_error, est.sample_count, est.z(target)
    rec = {
        "check": name,
        "target": target,
        "mean": mean,
        "std_error": se,
        "z": z if math.isfinite(z) else repr(z),
        "samples": count,
        "seed": asdict(seed),
        "params": {"n": params.n, "theta": float(params.theta)},
    }
    rec.update(extra)
    return rec


def expected_inversions_target(params: EwensParams) -> float:
    return formulas.expected_inversions(params).value


def pair_probability_target(params: EwensParams, i: int, j: int) -> float:
    return formulas.pair_inversion_probability(params, i, j).value
