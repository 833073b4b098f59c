"""Finite orthonormal mode basis and the contraction algebra on it.

Field variables and two-point kernels are stored as coordinates in an
orthonormal basis, so every contraction reduces to an ordinary
matrix/vector product.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .errors import DimensionError

#: Relative tolerance used for algebraic identities (hermiticity, symmetry).
ALGEBRA_TOL = 1e-12


def _frozen(a) -> np.ndarray:
    out = np.array(a, dtype=complex)
    out.setflags(write=False)
    return out


@dataclass(frozen=True)
class ModeBasis:
    """A set of ``n_modes`` orthonormal modes with opaque labels."""

    n_modes: int
    labels: tuple = field(default=())

    def __post_init__(self):
        if int(self.n_modes) < 1:
            raise DimensionError(f"n_modes must be >= 1, got {self.n_modes}")
        object.__setattr__(self, "n_modes", int(self.n_modes))
        labels = tuple(self.labels) or tuple(f"e{i}" for i in range(self.n_modes))
        if len(labels) != self.n_modes:
            raise DimensionError("number of labels must equal n_modes")
        object.__setattr__(self, "labels", labels)


@dataclass(frozen=True, eq=False)
class FieldVector:
    """Complex amplitudes of a field variable or mode function."""

    basis: ModeBasis
    amps: np.ndarray

    def __post_init__(self):
        amps = _frozen(self.amps).reshape(-1)
        if amps.shape != (self.basis.n_modes,):
            raise DimensionError(
                f"expected {self.basis.n_modes} amplitudes, got {amps.shape[0]}"
            )
        object.__setattr__(self, "amps", amps)

    def norm(self) -> float:
        return float(np.linalg.norm(self.amps))

    def conj(self) -> FieldVector:
        return FieldVector(self.basis, self.amps.conj())

    def normalized(self) -> FieldVector:
        n = self.norm()
        if n == 0:
            raise DimensionError("cannot normalize a zero vector")
        return FieldVector(self.basis, self.amps / n)

    def __add__(self, other: FieldVector) -> FieldVector:
        _check_same(self.basis, other.basis)
        return FieldVector(self.basis, self.amps + other.amps)

    def __sub__(self, other: FieldVector) -> FieldVector:
        _check_same(self.basis, other.basis)
        return FieldVector(self.basis, self.amps - other.amps)

    def __mul__(self, c) -> FieldVector:
        return FieldVector(self.basis, complex(c) * self.amps)

    __rmul__ = __mul__

    def __repr__(self):
        return f"FieldVector({np.array2string(self.amps, precision=6)})"


@dataclass(frozen=True, eq=False)
class Kernel:
    """A two-point kernel ``K(k1, k2)`` as an ``n_modes x n_modes`` matrix."""

    basis: ModeBasis
    entries: np.ndarray

    def __post_init__(self):
        entries = _frozen(self.entries)
        n = self.basis.n_modes
        if entries.shape != (n, n):
            raise DimensionError(f"expected ({n}, {n}) kernel, got {entries.shape}")
        object.__setattr__(self, "entries", entries)

    def _scale(self) -> float:
        return max(float(np.max(np.abs(self.entries))), 1.0)

    @property
    def is_hermitian(self) -> bool:
        K = self.entries
        return bool(np.max(np.abs(K - K.conj().T)) <= ALGEBRA_TOL * self._scale())

    @property
    def is_symmetric(self) -> bool:
        K = self.entries
        return bool(np.max(np.abs(K - K.T)) <= ALGEBRA_TOL * self._scale())

    def inv(self) -> Kernel:
        return Kernel(self.basis, np.linalg.inv(self.entries))

    def det(self) -> complex:
        return complex(np.linalg.det(self.entries))

    def conj(self) -> Kernel:
        """Elementwise complex conjugate (not the adjoint)."""
        return Kernel(self.basis, self.entries.conj())

    def __add__(self, other: Kernel) -> Kernel:
        _check_same(self.basis, other.basis)
        return Kernel(self.basis, self.entries + other.entries)

    def __sub__(self, other: Kernel) -> Kernel:
        _check_same(self.basis, other.basis)
        return Kernel(self.basis, self.entries - other.entries)

    def __mul__(self, c) -> Kernel:
        return Kernel(self.basis, complex(c) * self.entries)

    __rmul__ = __mul__

    def __matmul__(self, other):
        if isinstance(other, Kernel):
            return diamond_kk(self, other)
        if isinstance(other, FieldVector):
            return diamond_kv(self, other)
        return NotImplemented

    def __repr__(self):
        return f"Kernel({np.array2string(self.entries, precision=6)})"


def _check_same(a: ModeBasis, b: ModeBasis):
    if a.n_modes != b.n_modes:
        raise DimensionError(f"basis mismatch: {a.n_modes} vs {b.n_modes} modes")


def identity(basis: ModeBasis) -> Kernel:
    return Kernel(basis, np.eye(basis.n_modes))


def zero_kernel(basis: ModeBasis) -> Kernel:
    return Kernel(basis, np.zeros((basis.n_modes, basis.n_modes)))


def zero_vector(basis: ModeBasis) -> FieldVector:
    return FieldVector(basis, np.zeros(basis.n_modes))


def diamond_vv(x: FieldVector, y: FieldVector) -> complex:
    """Contract a conjugated field with a field: ``sum_i conj(x_i) y_i``."""
    _check_same(x.basis, y.basis)
    return complex(np.vdot(x.amps, y.amps))


def diamond_kv(K: Kernel, y: FieldVector) -> FieldVector:
    _check_same(K.basis, y.basis)
    return FieldVector(y.basis, K.entries @ y.amps)


def diamond_kk(K: Kernel, L: Kernel) -> Kernel:
    _check_same(K.basis, L.basis)
    return Kernel(K.basis, K.entries @ L.entries)


def trace(K: Kernel) -> complex:
    return complex(np.trace(K.entries))


def adjoint(K: Kernel) -> Kernel:
    return Kernel(K.basis, K.entries.conj().T)


def outer(x: FieldVector, y: FieldVector) -> Kernel:
    """Rank-one kernel ``x y^dagger``."""
    _check_same(x.basis, y.basis)
    return Kernel(x.basis, np.outer(x.amps, y.amps.conj()))


def gram_schmidt(vs: Sequence[FieldVector], tol: float = ALGEBRA_TOL):
    """Orthonormalize ``vs``, dropping linearly dependent directions.

    Uses modified Gram-Schmidt with one re-orthogonalization pass. A residual
    is dropped when its norm is below ``tol`` times the largest input norm.

    Returns:
        tuple[list[FieldVector], np.ndarray]: the orthonormal vectors and a
        coefficient matrix ``C`` with ``vs[i] = sum_j C[i, j] * out[j]``.
    """
    vs = list(vs)
    if not vs:
        raise DimensionError("gram_schmidt needs at least one vector")
    basis = vs[0].basis
    for v in vs[1:]:
        _check_same(basis, v.basis)

    scale = max(v.norm() for v in vs)
    out: list[np.ndarray] = []
    if scale == 0:
        return [], np.zeros((len(vs), 0), dtype=complex)
    for v in vs:
        r = v.amps.copy()
        for _ in range(2):
            for e in out:
                r = r - np.vdot(e, r) * e
        n = np.linalg.norm(r)
        if n > tol * scale:
            out.append(r / n)

    coeffs = np.array([[np.vdot(e, v.amps) for e in out] for v in vs], dtype=complex)
    return [FieldVector(basis, e) for e in out], coeffs.reshape(len(vs), len(out))


def random_unitary(n: int, rng: np.random.Generator) -> np.ndarray:
    """Haar-random unitary via QR of a complex Ginibre matrix."""
    z = (rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))) / np.sqrt(2)
    q, r = np.linalg.qr(z)
    d = np.diag(r)
    return q * (d / np.abs(d))
