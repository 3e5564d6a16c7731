"""Seeded Monte Carlo study of phase jitter in the chain.

Each trial freezes one quasi-static jitter draw per phase shifter and
recomputes the whole sweep with brute-force matrix products (the chain
closed form only holds when every unit sees the same phase).  Two jitter
modes exist:

* ``correlated-per-block`` -- one Gaussian offset per chain unit, shared by
  the unit's two shifters (they are driven by the same control);
* ``independent-per-shifter`` -- separate offsets for the lower-arm and
  upper-arm shifters of every unit (fabrication-path noise).

Randomness comes from the counter-based Philox generator: trial i draws
from the stream keyed by ``(seed, i)``, so results are bit-reproducible and
independent of evaluation order or any future work sharding.  Trials are
reduced in fixed-size batches so the summation tree never changes.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .analysis import (
    _grid,
    _validate_chain_sweep,
    format_float,
    fringe_visibility,
    g2_trace,
    intensities_n,
)
from .elements import ChainConfig, d_block, d_prime_block
from .errors import ValidationError

NOISY_TRACE_CSV_HEADER = "phi,i_a,i_b,g2,ci95_g2"

JITTER_MODES = ("correlated-per-block", "independent-per-shifter")

_TRIAL_BATCH = 128  # fixed: the reduction order must not depend on tuning


@dataclass(frozen=True)
class NoiseConfig:
    """Gaussian phase-jitter ensemble parameters."""

    sigma: float
    trials: int
    seed: int
    mode: str = "correlated-per-block"

    def __post_init__(self):
        if not (isinstance(self.sigma, (int, float, np.floating)) and math.isfinite(self.sigma) and self.sigma >= 0.0):
            raise ValidationError(f"sigma must be a nonnegative real, got {self.sigma!r}")
        if not isinstance(self.trials, (int, np.integer)) or self.trials < 1:
            raise ValidationError(f"trials must be a positive integer, got {self.trials!r}")
        if not isinstance(self.seed, (int, np.integer)) or not 0 <= self.seed < 2**64:
            raise ValidationError(f"seed must be an unsigned 64-bit integer, got {self.seed!r}")
        if self.mode not in JITTER_MODES:
            raise ValidationError(f"mode must be one of {JITTER_MODES}, got {self.mode!r}")


@dataclass(frozen=True, eq=False)
class NoisyTrace:
    """Trial means of a jittered sweep plus normal-approximation g2 CIs."""

    phi_grid: np.ndarray
    mean_i_a: np.ndarray
    mean_i_b: np.ndarray
    mean_g2: np.ndarray
    ci95_g2: np.ndarray
    visibility: float

    def __post_init__(self):
        for name in ("phi_grid", "mean_i_a", "mean_i_b", "mean_g2", "ci95_g2"):
            object.__setattr__(self, name, np.asarray(getattr(self, name), dtype=float))
        if not (
            self.phi_grid.shape
            == self.mean_i_a.shape
            == self.mean_i_b.shape
            == self.mean_g2.shape
            == self.ci95_g2.shape
        ):
            raise ValidationError("noisy trace columns must share one grid length")
        if np.any(self.ci95_g2 < 0.0):
            raise ValidationError("confidence half-widths must be nonnegative")


def _trial_jitter(noise: NoiseConfig, n: int, trial: int):
    """Per-shifter offsets (lower-arm, upper-arm), each shape (n,)."""
    rng = np.random.Generator(np.random.Philox(key=[noise.seed, trial]))
    if noise.mode == "correlated-per-block":
        shared = rng.normal(0.0, noise.sigma, size=n)
        return shared, shared
    draws = rng.normal(0.0, noise.sigma, size=(n, 2))
    return draws[:, 0], draws[:, 1]


def _batch_jitter(noise: NoiseConfig, n: int, trials):
    lower = np.empty((len(trials), n))
    upper = np.empty((len(trials), n))
    for row, trial in enumerate(trials):
        lower[row], upper[row] = _trial_jitter(noise, n, int(trial))
    return lower, upper


def jittered_intensities(cfg: ChainConfig, phi_grid, delta_lower, delta_upper):
    """Intensity pair of the chain with fixed per-unit shifter offsets.

    ``delta_lower`` / ``delta_upper`` have shape (trials, n); the sweep grid
    broadcasts along the second axis.  The chain is composed unit by unit
    with matrix products, then the loss prefactor is applied to the
    intensities (jitter itself is lossless).  Returns (i_a, i_b), each of
    shape (trials, samples).
    """
    phi_grid = np.atleast_1d(np.asarray(phi_grid, dtype=float))
    delta_lower = np.asarray(delta_lower, dtype=float)
    delta_upper = np.asarray(delta_upper, dtype=float)
    if delta_lower.shape != delta_upper.shape or delta_lower.ndim != 2:
        raise ValidationError("jitter arrays must share a (trials, n) shape")
    if delta_lower.shape[1] != cfg.n:
        raise ValidationError(f"expected jitter for {cfg.n} chain units")
    running = None
    for unit in range(cfg.n):
        x = phi_grid[None, :] + delta_lower[:, unit, None]
        y = phi_grid[None, :] + delta_upper[:, unit, None]
        block = d_prime_block(y) @ d_block(x)
        running = block if running is None else block @ running
    e0 = complex(cfg.input_amplitude)
    upper = running[..., 0, 0] * e0
    lower = running[..., 1, 0] * e0
    scale = cfg.amplitude_prefactor**2
    i_a = scale * (upper.real**2 + upper.imag**2)
    i_b = scale * (lower.real**2 + lower.imag**2)
    return i_a, i_b


def run_noise_ensemble(
    cfg: ChainConfig,
    noise: NoiseConfig,
    samples: int,
    window: float = 2.0 * math.pi,
) -> NoisyTrace:
    """Trial-averaged sweep of the jittered chain.

    Identical (seed, grid, config) inputs give bit-identical output.  With
    sigma = 0 every trial is the same deterministic sweep, so that sweep is
    returned directly as the exact ensemble mean (any mode).
    """
    _validate_chain_sweep(cfg.n, samples, window)
    phi_grid = _grid(samples, window)
    if noise.sigma == 0.0:
        det = g2_trace(cfg, samples, window)
        zeros = np.zeros(samples)
        return NoisyTrace(
            det.phi_grid, det.i_a, det.i_b, det.g2, zeros, fringe_visibility(det.g2)
        )
    sum_i_a = np.zeros(samples)
    sum_i_b = np.zeros(samples)
    sum_g2 = np.zeros(samples)
    sum_g2_sq = np.zeros(samples)
    trials = noise.trials
    for start in range(0, trials, _TRIAL_BATCH):
        batch = range(start, min(start + _TRIAL_BATCH, trials))
        delta_lower, delta_upper = _batch_jitter(noise, cfg.n, batch)
        i_a, i_b = jittered_intensities(cfg, phi_grid, delta_lower, delta_upper)
        norm = i_a.mean(axis=1, keepdims=True) * i_b.mean(axis=1, keepdims=True)
        g2 = i_a * i_b / norm
        sum_i_a += i_a.sum(axis=0)
        sum_i_b += i_b.sum(axis=0)
        sum_g2 += g2.sum(axis=0)
        sum_g2_sq += (g2 * g2).sum(axis=0)
    mean_i_a = sum_i_a / trials
    mean_i_b = sum_i_b / trials
    mean_g2 = sum_g2 / trials
    if trials > 1:
        variance = np.maximum(sum_g2_sq - sum_g2 * sum_g2 / trials, 0.0) / (trials - 1)
        ci95 = 1.96 * np.sqrt(variance / trials)
    else:
        ci95 = np.zeros(samples)
    return NoisyTrace(phi_grid, mean_i_a, mean_i_b, mean_g2, ci95, fringe_visibility(mean_g2))


def anticorrelation_error_rate(
    cfg: ChainConfig,
    noise: NoiseConfig,
    basis_phi: float,
    threshold: float = 0.01,
) -> float:
    """Fraction of trials in which the nominally dark port lights up.

    ``basis_phi`` must sit on a correlation zero (an integer multiple of
    ``pi / (2 n)``), where exactly one output port is dark.  A trial counts
    as an error when the dark port carries more than ``threshold`` of the
    total output intensity -- the "both lines active" signature that flags
    decoherence in a serial chain.
    """
    if not (math.isfinite(basis_phi)):
        raise ValidationError(f"basis phase must be finite, got {basis_phi!r}")
    if not (0.0 < threshold < 1.0):
        raise ValidationError(f"threshold must lie in (0, 1), got {threshold!r}")
    zero_spacing = math.pi / (2.0 * cfg.n)
    nearest = round(basis_phi / zero_spacing) * zero_spacing
    if abs(basis_phi - nearest) > 1e-9:
        raise ValidationError(
            f"basis phase {basis_phi!r} is not a correlation zero k*pi/(2*{cfg.n})"
        )
    i_a0, i_b0 = intensities_n(cfg, basis_phi)
    dark_port = 0 if i_a0 < i_b0 else 1
    phi_grid = np.array([basis_phi])
    errors = 0
    for start in range(0, noise.trials, _TRIAL_BATCH):
        batch = range(start, min(start + _TRIAL_BATCH, noise.trials))
        delta_lower, delta_upper = _batch_jitter(noise, cfg.n, batch)
        i_a, i_b = jittered_intensities(cfg, phi_grid, delta_lower, delta_upper)
        dark = (i_a if dark_port == 0 else i_b)[:, 0]
        total = i_a[:, 0] + i_b[:, 0]
        errors += int(np.count_nonzero(dark > threshold * total))
    return errors / noise.trials


def write_noisy_trace_csv(trace: NoisyTrace, path):
    """Write the trial means in the trace CSV format plus a ci95_g2 column."""
    with open(path, "w", encoding="utf-8", newline="") as f:
        f.write(NOISY_TRACE_CSV_HEADER + "\n")
        for row in zip(
            trace.phi_grid, trace.mean_i_a, trace.mean_i_b, trace.mean_g2, trace.ci95_g2
        ):
            f.write(",".join(format_float(x) for x in row) + "\n")
