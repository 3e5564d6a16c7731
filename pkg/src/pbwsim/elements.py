"""Optical elements and composite blocks of the cascaded-MZI simulator.

Conventions
-----------
Fields are two-port columns (upper, lower).  The 50:50 beam splitter is
``(1/sqrt 2) [[1, i], [i, 1]]``: reflection picks up the i, so the splitter
itself imposes a pi/2 shift between its two outputs.  ``d_block(phi)`` is a
plain MZI (splitter, phase shifter in the lower arm, splitter) and
``d_prime_block(phi)`` its mirrored twin with the shifter in the upper arm.
``ccd_block(phi)`` is the cross-coupled double unit, the prime block applied
after the plain one with both shifters driven by the same phi.  An n-unit
chain produces intensity fringes in cos(2 n phi), which is what makes the
effective de Broglie wavelength shrink as lambda0 / 4n.

All phase arguments accept scalars or arrays; array input yields a stacked
``(..., 2, 2)`` result (or ``(..., 2)`` for field outputs).

Loss model: each connection between consecutive chain units attenuates the
field by the scalar amplitude factor eta**2 (one factor of eta per coupling
interface, two interfaces per connection).  There is no loss before the
first unit, so an n-unit chain carries the overall amplitude prefactor
``eta**(2*(n - 1))``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import ValidationError
from .linalg import apply, field_pair

_INV_SQRT2 = 1.0 / math.sqrt(2.0)


def _stack2x2(a11, a12, a21, a22) -> np.ndarray:
    a11, a12, a21, a22 = np.broadcast_arrays(
        np.asarray(a11, dtype=np.complex128),
        np.asarray(a12, dtype=np.complex128),
        np.asarray(a21, dtype=np.complex128),
        np.asarray(a22, dtype=np.complex128),
    )
    out = np.empty(a11.shape + (2, 2), dtype=np.complex128)
    out[..., 0, 0] = a11
    out[..., 0, 1] = a12
    out[..., 1, 0] = a21
    out[..., 1, 1] = a22
    return out


@dataclass(frozen=True)
class ChainConfig:
    """Parameters of a serially connected chain of cross-coupled double MZIs.

    n: number of chain units; eta: per-interface amplitude transmission in
    (0, 1]; input_amplitude: field fed into the upper port of the first
    splitter; lambda0: carrier wavelength (arbitrary length unit).
    """

    n: int
    eta: float = 1.0
    input_amplitude: complex = 1.0 + 0.0j
    lambda0: float = 1.0

    def __post_init__(self):
        if not isinstance(self.n, (int, np.integer)) or isinstance(self.n, bool) or self.n < 1:
            raise ValidationError(f"n must be a positive integer, got {self.n!r}")
        if not (math.isfinite(self.eta) and 0.0 < self.eta <= 1.0):
            raise ValidationError(f"eta must lie in (0, 1], got {self.eta!r}")
        amp = complex(self.input_amplitude)
        if not (math.isfinite(amp.real) and math.isfinite(amp.imag)) or abs(amp) == 0.0:
            raise ValidationError(f"input amplitude must be finite and nonzero, got {amp!r}")
        if not (math.isfinite(self.lambda0) and self.lambda0 > 0.0):
            raise ValidationError(f"lambda0 must be positive, got {self.lambda0!r}")

    @property
    def mzi_block_count(self) -> int:
        """Number of elementary MZI blocks (two per chain unit)."""
        return 2 * self.n

    @property
    def equivalent_photon_number(self) -> int:
        """Entangled-photon number N whose de Broglie fringe this chain matches."""
        return 4 * self.n

    @property
    def input_intensity(self) -> float:
        amp = complex(self.input_amplitude)
        return amp.real**2 + amp.imag**2

    @property
    def amplitude_prefactor(self) -> float:
        """Overall loss factor eta**(2*(n-1)) carried by the output fields."""
        return self.eta ** (2 * (self.n - 1))


@dataclass(frozen=True)
class MagicPhase:
    """Input phase offset +/-(order - 1/2) pi that darkens one splitter output."""

    order: int
    sign: int = 1

    def __post_init__(self):
        if not isinstance(self.order, (int, np.integer)) or self.order < 1:
            raise ValidationError(f"order must be a positive integer, got {self.order!r}")
        if self.sign not in (-1, 1):
            raise ValidationError(f"sign must be +1 or -1, got {self.sign!r}")

    def value(self) -> float:
        return self.sign * (self.order - 0.5) * math.pi


def beam_splitter() -> np.ndarray:
    """Lossless 50:50 splitter ``(1/sqrt 2) [[1, i], [i, 1]]``."""
    return _INV_SQRT2 * np.array([[1.0, 1.0j], [1.0j, 1.0]], dtype=np.complex128)


def phase_lower(phi) -> np.ndarray:
    """Phase shifter in the lower arm: diag(1, e^{i phi})."""
    e = np.exp(1j * np.asarray(phi, dtype=float))
    one = np.ones_like(e)
    zero = np.zeros_like(e)
    return _stack2x2(one, zero, zero, e)


def phase_upper(phi) -> np.ndarray:
    """Phase shifter in the upper arm: diag(e^{i phi}, 1)."""
    e = np.exp(1j * np.asarray(phi, dtype=float))
    one = np.ones_like(e)
    zero = np.zeros_like(e)
    return _stack2x2(e, zero, zero, one)


def loss(t: float) -> np.ndarray:
    """Scalar amplitude attenuation ``t * I`` with t in (0, 1]."""
    if not (isinstance(t, (int, float, np.floating, np.integer)) and math.isfinite(t)):
        raise ValidationError(f"loss factor must be a finite real, got {t!r}")
    if not 0.0 < t <= 1.0:
        raise ValidationError(f"loss factor must lie in (0, 1], got {t!r}")
    return float(t) * np.eye(2, dtype=np.complex128)


def d_block(phi) -> np.ndarray:
    """MZI block splitter-lower shifter-splitter, in closed form.

    Equals beam_splitter() @ phase_lower(phi) @ beam_splitter() entrywise:
    ``(1/2) [[1 - e, i (1 + e)], [i (1 + e), e - 1]]`` with ``e = e^{i phi}``.
    """
    e = np.exp(1j * np.asarray(phi, dtype=float))
    off = 0.5j * (1.0 + e)
    return _stack2x2(0.5 * (1.0 - e), off, off, 0.5 * (e - 1.0))


def d_prime_block(phi) -> np.ndarray:
    """Mirrored MZI block with the shifter in the upper arm.

    Equals beam_splitter() @ phase_upper(phi) @ beam_splitter():
    ``(1/2) [[e - 1, i (e + 1)], [i (e + 1), 1 - e]]``.
    """
    e = np.exp(1j * np.asarray(phi, dtype=float))
    off = 0.5j * (e + 1.0)
    return _stack2x2(0.5 * (e - 1.0), off, off, 0.5 * (1.0 - e))


def ccd_block(phi) -> np.ndarray:
    """Cross-coupled double unit d_prime_block(phi) @ d_block(phi).

    Closed form ``-(1/2) [[1 + E, i (1 - E)], [-i (1 - E), 1 + E]]`` with
    ``E = e^{i 2 phi}``; the doubled phase is the source of the fringe
    compression.
    """
    e2 = np.exp(2j * np.asarray(phi, dtype=float))
    diag = -0.5 * (1.0 + e2)
    off = -0.5j * (1.0 - e2)
    return _stack2x2(diag, off, -off, diag)


def chain_closed_form(cfg: ChainConfig, phi) -> np.ndarray:
    """Transfer matrix of the full n-unit chain, loss prefactor included.

    ``(1/2) (-1)^n eta^{2(n-1)} [[1 + E, i (1 - E)], [-i (1 - E), 1 + E]]``
    with ``E = e^{i 2 n phi}``.  The global ``(-1)^n`` is kept so the matrix
    agrees entrywise with the brute-force product of the unit blocks; it
    cancels in every intensity.
    """
    e2n = np.exp(2j * cfg.n * np.asarray(phi, dtype=float))
    pref = 0.5 * (-1.0) ** cfg.n * cfg.amplitude_prefactor
    diag = pref * (1.0 + e2n)
    off = pref * 1j * (1.0 - e2n)
    return _stack2x2(diag, off, -off, diag)


def chain_output(cfg: ChainConfig, phi) -> np.ndarray:
    """Output field pair of the n-unit chain fed on the upper port.

    upper = (E0/2) (-1)^n     eta^{2(n-1)} (1 + e^{i 2 n phi})
    lower = (E0/2) (-1)^{n+1} eta^{2(n-1)} i (1 - e^{i 2 n phi})
    """
    e2n = np.exp(2j * cfg.n * np.asarray(phi, dtype=float))
    pref = 0.5 * complex(cfg.input_amplitude) * (-1.0) ** cfg.n * cfg.amplitude_prefactor
    upper = pref * (1.0 + e2n)
    lower = -pref * 1j * (1.0 - e2n)
    upper, lower = np.broadcast_arrays(upper, lower)
    return np.stack([upper, lower], axis=-1)


def bs_anticorrelation(psi, input_amplitude: complex = 1.0 + 0.0j) -> np.ndarray:
    """Two balanced inputs on one splitter with relative phase psi.

    Feeds ``E0/sqrt 2`` into the upper port and ``(E0/sqrt 2) e^{i psi}`` into
    the lower port and returns the output pair.  The upper output intensity
    is proportional to ``1 - sin psi``, so it vanishes exactly at the magic
    phases ``psi = +(order - 1/2) pi`` (the lower output at the opposite
    sign).
    """
    psi = np.asarray(psi, dtype=float)
    amp = complex(input_amplitude) * _INV_SQRT2
    vin_upper = np.broadcast_to(amp + 0.0 * psi, psi.shape)
    vin_lower = amp * np.exp(1j * psi)
    vin = np.stack(np.broadcast_arrays(vin_upper, vin_lower), axis=-1)
    return apply(beam_splitter(), vin)


def input_field(cfg: ChainConfig) -> np.ndarray:
    """Chain input column (E0, 0)."""
    return field_pair(cfg.input_amplitude, 0.0)
