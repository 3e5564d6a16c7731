"""2x2 complex matrix and two-port field arithmetic.

Transfer matrices are plain ``(2, 2)`` complex128 arrays and two-port fields
are length-2 complex128 arrays ordered (upper arm, lower arm).  Stacked
variants with leading batch axes are accepted everywhere it is cheap to do
so; all operations are pure.
"""

from __future__ import annotations

import numpy as np

from .errors import ValidationError

IDENTITY = np.eye(2, dtype=np.complex128)


def transfer_matrix(a11, a12, a21, a22) -> np.ndarray:
    """Build a 2x2 complex matrix from its entries, row major."""
    return np.array([[a11, a12], [a21, a22]], dtype=np.complex128)


def field_pair(upper, lower) -> np.ndarray:
    """Two-port field column (upper, lower)."""
    return np.array([upper, lower], dtype=np.complex128)


def mat_mul(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Matrix product ``a @ b`` (b acts on the field first)."""
    return np.matmul(a, b)


def mat_pow(m: np.ndarray, n: int) -> np.ndarray:
    """n-th matrix power by repeated squaring; ``n = 0`` yields the identity."""
    if not isinstance(n, (int, np.integer)) or n < 0:
        raise ValidationError(f"matrix power needs an integer n >= 0, got {n!r}")
    return np.linalg.matrix_power(np.asarray(m, dtype=np.complex128), int(n))


def apply(m: np.ndarray, v: np.ndarray) -> np.ndarray:
    """Apply a (possibly stacked) matrix to a (possibly stacked) field pair."""
    return np.einsum("...ij,...j->...i", m, v)


def intensity(amplitude) -> float | np.ndarray:
    """|amplitude|^2, elementwise for arrays."""
    a = np.asarray(amplitude)
    out = a.real**2 + a.imag**2
    return float(out) if out.ndim == 0 else out


def intensities(fields) -> tuple:
    """(upper, lower) intensities of a field pair; fields may be stacked."""
    f = np.asarray(fields)
    return intensity(f[..., 0]), intensity(f[..., 1])


def total_intensity(fields) -> float | np.ndarray:
    i_up, i_lo = intensities(fields)
    return i_up + i_lo


def is_unitary(m: np.ndarray, tol: float = 1e-12) -> bool:
    """True iff the max-entry modulus of ``m^dagger m - I`` is below tol."""
    if not tol > 0:
        raise ValidationError(f"tolerance must be positive, got {tol!r}")
    m = np.asarray(m, dtype=np.complex128)
    dev = np.conj(np.swapaxes(m, -1, -2)) @ m - IDENTITY
    return bool(np.max(np.abs(dev)) < tol)


def max_abs_diff(a, b) -> float:
    """Max entrywise complex modulus of the difference (test metric)."""
    return float(np.max(np.abs(np.asarray(a) - np.asarray(b))))
