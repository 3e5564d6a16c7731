"""Phase sweeps, intensity-correlation traces, and fringe analysis.

The central object is a :class:`CorrelationTrace`: a uniform phase grid over
``[0, window)`` with the two output intensities and their normalized product

    g2(phi) = I_a(phi) I_b(phi) / (<I_a> <I_b>)

where the angle brackets are means over the trace's own grid.  For a lossless
n-unit chain this evaluates to ``(1 - cos(4 n phi)) / 2``, so the correlation
fringe period is ``pi / (2 n)`` and the corresponding effective de Broglie
wavelength is ``lambda0 / (4 n)``.  Loss scales numerator and denominator of
g2 equally and drops out.

Traces are exchanged as CSV with header ``phi,i_a,i_b,g2``, one row per
sample, full-precision decimal values, LF line endings.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .elements import ChainConfig, chain_output
from .errors import NoModulationError, ValidationError
from .linalg import apply, field_pair, intensities

SPEED_OF_LIGHT = 299_792_458.0  # m/s

TRACE_CSV_HEADER = "phi,i_a,i_b,g2"

_GRID_SPACING_TOL = 1e-12
_PERIOD_MULTIPLE_REL_TOL = 1e-9
_PEAK_TIE_REL_TOL = 1e-9
_FLAT_SPECTRUM_REL_TOL = 1e-12


@dataclass(frozen=True, eq=False)
class CorrelationTrace:
    """Sampled phase sweep: grid, both intensities, normalized correlation."""

    phi_grid: np.ndarray
    i_a: np.ndarray
    i_b: np.ndarray
    g2: np.ndarray
    meta: object = None

    def __post_init__(self):
        for name in ("phi_grid", "i_a", "i_b", "g2"):
            object.__setattr__(self, name, np.asarray(getattr(self, name), dtype=float))
        n = self.phi_grid.size
        if n < 2 or self.phi_grid.ndim != 1:
            raise ValidationError("trace needs a 1-d phase grid with at least 2 samples")
        for name in ("i_a", "i_b", "g2"):
            if getattr(self, name).shape != self.phi_grid.shape:
                raise ValidationError(f"trace column {name} does not match the grid length")
        diffs = np.diff(self.phi_grid)
        if diffs[0] <= 0.0 or np.max(np.abs(diffs - diffs[0])) > _GRID_SPACING_TOL:
            raise ValidationError("phase grid must be ascending with constant spacing")
        if np.any(self.i_a < 0.0) or np.any(self.i_b < 0.0):
            raise ValidationError("intensities must be nonnegative")

    @property
    def samples(self) -> int:
        return self.phi_grid.size

    @property
    def spacing(self) -> float:
        return float(self.phi_grid[1] - self.phi_grid[0])

    @property
    def window(self) -> float:
        """Swept width; the grid covers [phi_grid[0], phi_grid[0] + window)."""
        return self.samples * self.spacing


@dataclass(frozen=True)
class AnalysisResult:
    """Fringe-period analysis of a correlation trace."""

    period_phase: float
    visibility: float
    lambda_ratio: float
    inferred_n: int
    equivalent_photon_number: int


@dataclass(frozen=True)
class CoherenceBudget:
    """Source linewidth and the coherence length it allows."""

    linewidth_hz: float
    coherence_length_m: float


def intensities_n(cfg: ChainConfig, phi):
    """Output intensity pair (I_a, I_b) of the n-unit chain.

    ``I_a = s (1 + cos(2 n phi)) / 2`` and ``I_b = s (1 - cos(2 n phi)) / 2``
    with the loss scale ``s = eta^{4(n-1)} |E0|^2``.  Accepts scalar or array
    phi.
    """
    arg = np.cos(2.0 * cfg.n * np.asarray(phi, dtype=float))
    scale = 0.5 * cfg.input_intensity * cfg.amplitude_prefactor**2
    i_a = scale * (1.0 + arg)
    i_b = scale * (1.0 - arg)
    if i_a.ndim == 0:
        return float(i_a), float(i_b)
    return i_a, i_b


def g2_first_order(phi):
    """Correlation of a single bare MZI: ``(1 - cos(2 phi)) / 2``.

    This is the classical (Rayleigh) resolution limit; the trace machinery
    applied to a lone lower-arm MZI block reproduces it pointwise.
    """
    out = 0.5 * (1.0 - np.cos(2.0 * np.asarray(phi, dtype=float)))
    return float(out) if out.ndim == 0 else out


def _validate_chain_sweep(n: int, samples: int, window: float):
    if not isinstance(samples, (int, np.integer)) or samples < 16 * n:
        raise ValidationError(
            f"need at least {16 * n} samples for an n={n} chain, got {samples!r}"
        )
    if not (isinstance(window, (int, float, np.floating)) and math.isfinite(window) and window > 0):
        raise ValidationError(f"window must be a positive phase width, got {window!r}")
    period = math.pi / (2.0 * n)
    cycles = window / period
    if abs(cycles - round(cycles)) > _PERIOD_MULTIPLE_REL_TOL * max(1.0, abs(cycles)) or round(cycles) < 1:
        raise ValidationError(
            f"window {window!r} is not an integer number of correlation periods "
            f"pi/(2*{n}); grid means would bias the g2 normalization"
        )


def _grid(samples: int, window: float) -> np.ndarray:
    return np.arange(samples) * (window / samples)


def _normalized_trace(phi_grid, i_a, i_b, meta) -> CorrelationTrace:
    mean_a = float(np.mean(i_a))
    mean_b = float(np.mean(i_b))
    if mean_a <= 0.0 or mean_b <= 0.0:
        raise ValidationError("an output port carries no mean intensity; g2 is undefined")
    g2 = i_a * i_b / (mean_a * mean_b)
    return CorrelationTrace(phi_grid, i_a, i_b, g2, meta)


def g2_trace(cfg: ChainConfig, samples: int, window: float = 2.0 * math.pi) -> CorrelationTrace:
    """Sweep the n-unit chain over ``[0, window)`` and build its trace.

    Requires ``samples >= 16 n`` and a window that is an integer number of
    correlation periods ``pi / (2 n)`` so the normalization means are
    unbiased.
    """
    _validate_chain_sweep(cfg.n, samples, window)
    phi_grid = _grid(samples, window)
    i_a, i_b = intensities_n(cfg, phi_grid)
    return _normalized_trace(phi_grid, i_a, i_b, cfg)


def g2_trace_from_matrix(
    matrix_fn,
    samples: int,
    window: float = 2.0 * math.pi,
    input_amplitude: complex = 1.0 + 0.0j,
    meta: object = None,
) -> CorrelationTrace:
    """Build a trace by driving an arbitrary phi -> 2x2 matrix function.

    The input field (input_amplitude, 0) is pushed through ``matrix_fn(phi)``
    at every grid point.  Used for compiled circuits and single blocks; no
    period bookkeeping is possible here, so the caller picks a window that
    covers whole fringes.
    """
    if not isinstance(samples, (int, np.integer)) or samples < 2:
        raise ValidationError(f"need at least 2 samples, got {samples!r}")
    if not (math.isfinite(window) and window > 0):
        raise ValidationError(f"window must be a positive phase width, got {window!r}")
    phi_grid = _grid(samples, window)
    vin = field_pair(input_amplitude, 0.0)
    fields = np.stack([apply(matrix_fn(float(p)), vin) for p in phi_grid])
    i_a, i_b = intensities(fields)
    return _normalized_trace(phi_grid, i_a, i_b, meta)


def detect_period(trace: CorrelationTrace) -> float:
    """Dominant fringe period of the g2 column, in radians.

    Takes the discrete Fourier transform of ``g2 - mean`` and picks the
    strongest nonzero-frequency bin k (ties within 1e-9 relative resolve to
    the lowest k); the period is ``window / k``.  A spectrally flat trace
    raises :class:`NoModulationError`.
    """
    g2 = trace.g2
    spectrum = np.abs(np.fft.rfft(g2 - np.mean(g2)))
    if spectrum.size < 2:
        raise NoModulationError("trace is too short to carry modulation")
    magnitudes = spectrum[1:]
    peak = float(np.max(magnitudes))
    dc = abs(float(np.sum(g2)))
    if peak < _FLAT_SPECTRUM_REL_TOL * max(dc, 1.0):
        raise NoModulationError("no modulation: the g2 trace is flat")
    k_star = 1 + int(np.argmax(magnitudes >= peak * (1.0 - _PEAK_TIE_REL_TOL)))
    return trace.window / k_star


def fringe_visibility(values) -> float:
    """(max - min) / (max + min) of a sampled fringe."""
    values = np.asarray(values, dtype=float)
    hi = float(np.max(values))
    lo = float(np.min(values))
    if hi + lo <= 0.0:
        raise ValidationError("visibility is undefined for an all-zero fringe")
    return (hi - lo) / (hi + lo)


def de_broglie_wavelength(
    period_phase: float, lambda0: float = 1.0, visibility: float = 1.0
) -> AnalysisResult:
    """Interpret a correlation fringe period as a de Broglie wavelength.

    ``lambda_ratio = period / (2 pi)`` is the effective wavelength in units
    of the carrier; the chain depth is the nearest n with period
    ``pi / (2 n)`` (half-integer results round up, so a bare MZI's period of
    pi reads as n = 1); the equivalent entangled-photon number is 4 n.
    Visibility is carried through from the source trace.
    """
    if not (math.isfinite(period_phase) and 0.0 < period_phase <= 2.0 * math.pi):
        raise ValidationError(f"period must lie in (0, 2*pi], got {period_phase!r}")
    if not (math.isfinite(visibility) and -1e-9 <= visibility <= 1.0 + 1e-9):
        raise ValidationError(f"visibility must lie in [0, 1], got {visibility!r}")
    if not (math.isfinite(lambda0) and lambda0 > 0.0):
        raise ValidationError(f"lambda0 must be positive, got {lambda0!r}")
    inferred_n = int(math.floor(math.pi / (2.0 * period_phase) + 0.5))
    if inferred_n < 1:
        raise ValidationError(
            f"period {period_phase!r} is too long for even a single chain unit"
        )
    return AnalysisResult(
        period_phase=float(period_phase),
        visibility=min(max(float(visibility), 0.0), 1.0),
        lambda_ratio=period_phase / (2.0 * math.pi),
        inferred_n=inferred_n,
        equivalent_photon_number=4 * inferred_n,
    )


def analyze_trace(trace: CorrelationTrace, lambda0: float = 1.0) -> AnalysisResult:
    """Period detection, visibility, and wavelength extraction in one step."""
    period = detect_period(trace)
    return de_broglie_wavelength(period, lambda0, visibility=fringe_visibility(trace.g2))


def coherence_budget(linewidth_hz: float) -> CoherenceBudget:
    """Coherence length c / linewidth for a source of the given linewidth.

    A millihertz-class laser gives about 3e8 km, which is what makes deep
    chains usable in the first place.
    """
    if not (isinstance(linewidth_hz, (int, float, np.floating)) and math.isfinite(linewidth_hz) and linewidth_hz > 0):
        raise ValidationError(f"linewidth must be positive, got {linewidth_hz!r}")
    return CoherenceBudget(float(linewidth_hz), SPEED_OF_LIGHT / float(linewidth_hz))


# --- CSV exchange --------------------------------------------------------


def format_float(value: float) -> str:
    """Full-precision decimal text (17 significant digits, exact round-trip)."""
    return format(float(value), ".17g")


def write_trace_csv(trace: CorrelationTrace, path):
    """Write the trace in the ``phi,i_a,i_b,g2`` format with LF endings."""
    with open(path, "w", encoding="utf-8", newline="") as f:
        f.write(TRACE_CSV_HEADER + "\n")
        for row in zip(trace.phi_grid, trace.i_a, trace.i_b, trace.g2):
            f.write(",".join(format_float(x) for x in row) + "\n")


def read_trace_csv(path) -> CorrelationTrace:
    """Read a ``phi,i_a,i_b,g2`` CSV (extra trailing columns are ignored)."""
    with open(path, "r", encoding="utf-8") as f:
        lines = [line.rstrip("\r\n") for line in f]
    lines = [line for line in lines if line]
    if not lines:
        raise ValidationError(f"{path}: empty trace file")
    header = [col.strip() for col in lines[0].split(",")]
    if header[:4] != TRACE_CSV_HEADER.split(","):
        raise ValidationError(f"{path}: expected header '{TRACE_CSV_HEADER}'")
    columns = ([], [], [], [])
    for lineno, line in enumerate(lines[1:], start=2):
        cells = line.split(",")
        if len(cells) < 4:
            raise ValidationError(f"{path}: line {lineno}: expected at least 4 columns")
        try:
            values = [float(cell) for cell in cells[:4]]
        except ValueError as exc:
            raise ValidationError(f"{path}: line {lineno}: {exc}") from None
        for col, value in zip(columns, values):
            col.append(value)
    return CorrelationTrace(*columns, meta={"source": str(path)})
