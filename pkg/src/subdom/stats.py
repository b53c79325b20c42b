"""Monte-Carlo statistics of the subcarrier-domain matrix.

Covers the sweep behaviour of a sub-channel magnitude under growing angle
mismatch Omega = theta - theta*, the near-zero set G of a magnitude profile,
and the rank/diversity counts of thresholded matrices.  All trial loops are
seeded per trial (seed + trial index) and reduced by an ordered merge, so
parallel and serial runs produce identical results.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .channel import PathComponent, path_matrix, subcarrier_domain
from .fourier import AnglePair

# "Non-zero" needs a numeric threshold; when no epsilon is given we use this
# fraction of the matrix max-magnitude (absolute floor for zero matrices).
DEFAULT_RELATIVE_EPSILON = 1e-6

# Operationalized sweep-contrast thresholds: the aligned peak must beat the
# anti-aligned peak by this ratio, and at least this fraction of k-bins must
# exceed epsilon once the alignment collapses.
PEAK_RATIO_MIN = 1.0
SPREAD_FRACTION_MIN = 0.25


def resolve_epsilon(magnitudes: np.ndarray, epsilon: float | None) -> float:
    if epsilon is not None:
        if epsilon <= 0:
            raise ValueError(f"epsilon must be > 0, got {epsilon}")
        return float(epsilon)
    peak = float(np.max(magnitudes)) if magnitudes.size else 0.0
    return DEFAULT_RELATIVE_EPSILON * peak if peak > 0 else DEFAULT_RELATIVE_EPSILON


def run_trials(trials: int, seed: int, fn, workers: int = 1) -> list:
    """Run fn(trial_index, rng) for each trial with rng seeded seed + index.

    Results come back in trial order regardless of worker count, so the
    reduction is deterministic.
    """
    if trials < 1:
        raise ValueError(f"trials must be >= 1, got {trials}")
    if workers <= 1:
        return [fn(t, np.random.default_rng(seed + t)) for t in range(trials)]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        futures = [pool.submit(fn, t, np.random.default_rng(seed + t))
                   for t in range(trials)]
        return [f.result() for f in futures]


@dataclass(frozen=True, eq=False)
class MagnitudeProfile:
    """Per-receive-bin magnitudes of a domain matrix plus its near-zero set.

    ``values[k]`` is the max entry magnitude of row k (for a flat, diagonal
    channel this is just |entry(k, k)|); ``diag_values`` keeps the diagonal
    convention alongside for square matrices.  ``near_zero_indices`` is the
    set G = {k : values[k] < epsilon} and ``average_a`` the mean magnitude
    the coefficients move around.
    """

    values: np.ndarray = field(repr=False)
    epsilon: float = 0.0
    diag_values: np.ndarray | None = field(default=None, repr=False)
    near_zero_indices: tuple = ()
    average_a: float = 0.0

    @property
    def near_zero_count(self) -> int:
        return len(self.near_zero_indices)

    def rows(self) -> list:
        """(index, rowmax magnitude, diagonal magnitude, near-zero flag) per
        bin; both magnitude conventions side by side."""
        out = []
        for k, v in enumerate(self.values):
            diag = float(self.diag_values[k]) if self.diag_values is not None else float("nan")
            out.append((k, float(v), diag, int(k in self.near_zero_indices)))
        return out


def magnitude_profile(matrix, epsilon: float | None = None) -> MagnitudeProfile:
    """Magnitude profile of a domain matrix (or SubcarrierDomainMatrix)."""
    entries = getattr(matrix, "entries", matrix)
    mags = np.abs(np.asarray(entries, dtype=complex))
    if mags.ndim != 2:
        raise ValueError(f"2-D matrix required, got shape {mags.shape}")
    values = np.max(mags, axis=1)
    diag = np.abs(np.diagonal(mags)) if mags.shape[0] == mags.shape[1] else None
    eps = resolve_epsilon(mags, epsilon)
    near_zero = tuple(int(k) for k in np.flatnonzero(values < eps))
    return MagnitudeProfile(values, eps, diag, near_zero, float(np.mean(values)))


@dataclass(frozen=True)
class SweepSpec:
    """Configuration of an Omega sweep for a fixed sub-channel index C.

    For each Omega in the schedule, ``trials`` single-path channels are built
    with theta = theta_star + Omega*(1 + jitter), jitter drawn uniformly from
    [-omega_jitter, +omega_jitter] per trial (so Omega = 0 stays exact), and
    the magnitudes |entry(k, C)| are averaged over trials for k in k_range.
    """

    l: int
    fixed_index: int  # the fixed sub-channel column C
    theta_star: float
    omega_schedule: tuple
    trials: int = 100
    seed: int = 42
    epsilon: float = 1e-6
    gain: float = 1.0
    omega_jitter: float = 0.02

    def __post_init__(self):
        if self.l < 1:
            raise ValueError(f"l must be >= 1, got {self.l}")
        if not 0 < self.fixed_index <= self.l - 1:
            raise ValueError(
                f"fixed_index must be in [1, {self.l - 1}], got {self.fixed_index}")
        if len(self.omega_schedule) == 0:
            raise ValueError("omega_schedule must not be empty")
        if self.trials < 1:
            raise ValueError(f"trials must be >= 1, got {self.trials}")
        if self.epsilon <= 0:
            raise ValueError(f"epsilon must be > 0, got {self.epsilon}")
        if self.gain < 0:
            raise ValueError(f"gain must be >= 0, got {self.gain}")

    @property
    def k_values(self) -> np.ndarray:
        # k range [0, 2C] clipped to valid row indices
        return np.arange(0, min(2 * self.fixed_index, self.l - 1) + 1)


@dataclass(frozen=True, eq=False)
class SweepResult:
    spec: SweepSpec
    omegas: np.ndarray = field(repr=False)
    k_values: np.ndarray = field(repr=False)
    mean_magnitudes: np.ndarray = field(repr=False)  # (n_omega, n_k)

    @property
    def series_means(self) -> np.ndarray:
        return np.mean(self.mean_magnitudes, axis=1)

    def peak_bin(self, omega_index: int) -> int:
        return int(self.k_values[np.argmax(self.mean_magnitudes[omega_index])])

    def rows(self) -> list:
        out = []
        for i, omega in enumerate(self.omegas):
            for j, k in enumerate(self.k_values):
                out.append((float(omega), int(k), float(self.mean_magnitudes[i, j])))
        return out


def omega_sweep(spec: SweepSpec, workers: int = 1) -> SweepResult:
    """Mean |entry(k, C)| per (Omega, k) over seeded single-path trials."""
    k_values = spec.k_values
    omegas = np.asarray(spec.omega_schedule, dtype=float)

    def one_trial(t, rng):
        rows = np.empty((omegas.size, k_values.size))
        for i, omega in enumerate(omegas):
            jitter = rng.uniform(-spec.omega_jitter, spec.omega_jitter)
            theta = spec.theta_star + omega * (1.0 + jitter)
            pair = AnglePair(spec.theta_star, theta)
            T = path_matrix([PathComponent(spec.gain, pair)], spec.l)
            R = subcarrier_domain(T, spec.l)
            rows[i] = np.abs(R.entries[k_values, spec.fixed_index])
        return rows

    per_trial = run_trials(spec.trials, spec.seed, one_trial, workers)
    mean = np.sum(np.stack(per_trial), axis=0) / spec.trials
    return SweepResult(spec, omegas, k_values, mean)


@dataclass(frozen=True)
class SweepContrast:
    peak_ratio: float
    spread_fraction: float
    passed: bool


def check_sweep_contrast(result: SweepResult, aligned_index: int = 0,
                         anti_index: int = -1,
                         peak_ratio_min: float = PEAK_RATIO_MIN,
                         spread_min: float = SPREAD_FRACTION_MIN) -> SweepContrast:
    """Compare the aligned and anti-aligned rows of a sweep: the aligned peak
    must exceed the anti-aligned peak and the anti-aligned row must spread
    over at least ``spread_min`` of the k-bins above epsilon."""
    aligned = result.mean_magnitudes[aligned_index]
    anti = result.mean_magnitudes[anti_index]
    ratio = float(np.max(aligned) / np.max(anti)) if np.max(anti) > 0 else np.inf
    spread = float(np.mean(anti > result.spec.epsilon))
    return SweepContrast(ratio, spread, ratio > peak_ratio_min and spread >= spread_min)


def _on_grid_paths(l, gains, bins, omega):
    paths = []
    for gain, b in zip(gains, bins):
        theta_star = float(np.arccos(b / l))
        paths.append(PathComponent(gain, AnglePair(theta_star, theta_star + omega)))
    return paths


def near_zero_monotonicity(l: int, gains, seed: int, trials: int = 100,
                           epsilon: float | None = None,
                           workers: int = 1) -> tuple:
    """Mean |G| of the magnitude profile at Omega = 0 versus Omega near pi.

    Each trial places len(gains) paths on random distinct grid bins.  The
    aligned endpoint keeps theta = theta* exactly; the anti-aligned endpoint
    draws Omega uniformly from [0.85*pi, 0.98*pi], close to pi but never
    exactly pi (exact pi reflects the grid onto itself and stays sparse).
    Returns (mean |G| aligned, mean |G| anti-aligned); for generic positive
    gains the first is the larger.
    """
    if l < 4:
        raise ValueError(f"l must be >= 4, got {l}")
    gains = [float(g) for g in gains]
    if any(g < 0 for g in gains):
        raise ValueError("gains must be >= 0")
    if len(gains) > l:
        raise ValueError(f"at most l={l} paths supported, got {len(gains)}")

    def one_trial(t, rng):
        bins = rng.choice(l, size=len(gains), replace=False)
        aligned = subcarrier_domain(path_matrix(_on_grid_paths(l, gains, bins, 0.0), l), l)
        omega = np.pi * (0.85 + 0.13 * rng.uniform())
        anti = subcarrier_domain(path_matrix(_on_grid_paths(l, gains, bins, omega), l), l)
        return (magnitude_profile(aligned, epsilon).near_zero_count,
                magnitude_profile(anti, epsilon).near_zero_count)

    counts = run_trials(trials, seed, one_trial, workers)
    aligned_counts, anti_counts = zip(*counts)
    return float(np.mean(aligned_counts)), float(np.mean(anti_counts))


@dataclass(frozen=True)
class RankReport:
    """Counts of rows/columns/entries above the threshold epsilon."""

    nonzero_rows: int
    nonzero_cols: int
    rank: int
    diversity: int
    epsilon: float


def rank_report(M, epsilon: float | None = None) -> RankReport:
    """Thresholded rank min(|S_i|, |S_k|) and diversity (non-zero entry
    count) of a matrix."""
    entries = getattr(M, "entries", M)
    mags = np.abs(np.asarray(entries, dtype=complex))
    if mags.ndim != 2:
        raise ValueError(f"2-D matrix required, got shape {mags.shape}")
    eps = resolve_epsilon(mags, epsilon)
    rows = int(np.sum(np.max(mags, axis=1) > eps))
    cols = int(np.sum(np.max(mags, axis=0) > eps))
    diversity = int(np.sum(mags > eps))
    return RankReport(rows, cols, min(rows, cols), diversity, eps)


def rank_approximation(paths) -> float:
    """Diagnostic only: min(sum cos theta_i, sum cos theta_i*) over the
    paths.  Reported alongside the counted rank, never asserted (the
    cosines can be negative)."""
    cos_out = sum(np.cos(p.angles.theta) for p in paths)
    cos_in = sum(np.cos(p.angles.theta_star) for p in paths)
    return float(min(cos_out, cos_in))


def random_offgrid_paths(l: int, rng, count: int | None = None,
                         gain_range: tuple = (0.5, 1.5)) -> list:
    """Paths with uniformly random angles (off-grid almost surely) and
    uniform gains; ``count`` defaults to l."""
    count = l if count is None else count
    lo, hi = gain_range
    return [PathComponent(float(rng.uniform(lo, hi)),
                          AnglePair(float(rng.uniform(0, 2 * np.pi)),
                                    float(rng.uniform(0, 2 * np.pi))))
            for _ in range(count)]


def diversity_vs_l(l_list, paths_generator, trials: int, seed: int,
                   epsilon: float | None = None, workers: int = 1) -> list:
    """Mean diversity of the domain matrix per sub-channel count.

    ``paths_generator(l, rng)`` supplies the channel paths per trial.
    Returns [(l, mean diversity), ...]; with off-grid random paths the means
    are non-decreasing in l.
    """
    l_list = list(l_list)
    if any(b <= a for a, b in zip(l_list, l_list[1:])):
        raise ValueError("l_list must be strictly increasing")
    table = []
    for l in l_list:
        def one_trial(t, rng, l=l):
            R = subcarrier_domain(path_matrix(paths_generator(l, rng), l), l)
            return rank_report(R, epsilon).diversity
        values = run_trials(trials, seed, one_trial, workers)
        table.append((l, float(np.mean(values))))
    return table
