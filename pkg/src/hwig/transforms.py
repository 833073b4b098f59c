"""Field-variable transformations: homogeneous beamsplitter and weak twin-beam
Bogoliubov transformation (stimulated parametric down-conversion).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import DomainError, InvalidPairError
from .modes import ALGEBRA_TOL, FieldVector, Kernel, ModeBasis, _check_same


@dataclass(frozen=True)
class BeamsplitterSpec:
    """Homogeneous beamsplitter with amplitude reflectivity ``zeta``."""

    zeta: float

    def __post_init__(self):
        if not 0.0 <= self.zeta <= 1.0:
            raise DomainError(f"amplitude reflectivity must lie in [0, 1], got {self.zeta}")

    @property
    def transmissivity(self) -> float:
        return float(np.sqrt(1.0 - self.zeta**2))


@dataclass(frozen=True, eq=False)
class WeakBogoliubov:
    """Weak twin-beam kernels ``U = 1 + xi^2 F`` and ``V -> xi V``.

    ``V`` must be symmetric so that signal and idler transform with the same
    kernel; ``F`` is then the Hermitian kernel ``V V^*/2``.
    """

    V: Kernel
    F: Kernel
    xi_strength: float = 0.0

    def __post_init__(self):
        if self.xi_strength < 0:
            raise DomainError("xi_strength must be non-negative")
        _check_same(self.V.basis, self.F.basis)
        if not self.V.is_symmetric:
            raise InvalidPairError("twin-beam kernel V must be symmetric")
        if not self.F.is_hermitian:
            raise InvalidPairError("F must be Hermitian")
        expected = 0.5 * self.V.entries @ self.V.entries.conj()
        scale = max(float(np.max(np.abs(expected))), 1.0)
        if np.max(np.abs(self.F.entries - expected)) > ALGEBRA_TOL * scale:
            raise InvalidPairError("F must equal V V^*/2 under weak squeezing")

    @classmethod
    def from_v(cls, V: Kernel, xi_strength: float = 0.0) -> WeakBogoliubov:
        F = Kernel(V.basis, 0.5 * V.entries @ V.entries.conj())
        return cls(V, F, xi_strength)

    @property
    def basis(self) -> ModeBasis:
        return self.V.basis

    def scaled(self, c: float) -> WeakBogoliubov:
        return WeakBogoliubov.from_v(self.V * c, self.xi_strength)


def beamsplitter_map(spec: BeamsplitterSpec, alpha: FieldVector, beta: FieldVector):
    """Transform the two port variables of a homogeneous beamsplitter."""
    _check_same(alpha.basis, beta.basis)
    t, z = spec.transmissivity, spec.zeta
    a = t * alpha.amps + 1j * z * beta.amps
    b = t * beta.amps + 1j * z * alpha.amps
    return FieldVector(alpha.basis, a), FieldVector(beta.basis, b)


def twin_beam_map(wb: WeakBogoliubov, alpha: FieldVector, beta: FieldVector):
    """Apply the weak twin-beam transformation to signal/idler variables."""
    _check_same(alpha.basis, beta.basis)
    _check_same(alpha.basis, wb.basis)
    x = wb.xi_strength
    U = np.eye(wb.basis.n_modes) + x**2 * wb.F.entries
    V = wb.V.entries
    a = U @ alpha.amps + x * V @ beta.amps.conj()
    b = U @ beta.amps + x * V @ alpha.amps.conj()
    return FieldVector(alpha.basis, a), FieldVector(beta.basis, b)


def ab_from_uv(U: Kernel, V: Kernel):
    """Squeezed-state kernels from Bogoliubov kernels.

    ``A = U U + V V^*`` and ``B = U V + V U^*`` with ``^*`` the elementwise
    conjugate.

    Raises:
        InvalidPairError: if ``A`` is not Hermitian or ``B`` not symmetric.
    """
    _check_same(U.basis, V.basis)
    u, v = U.entries, V.entries
    A = Kernel(U.basis, u @ u + v @ v.conj())
    B = Kernel(U.basis, u @ v + v @ u.conj())
    if not A.is_hermitian:
        raise InvalidPairError("U, V give a non-Hermitian A kernel")
    if not B.is_symmetric:
        raise InvalidPairError("U, V give a non-symmetric B kernel")
    return A, B


def bogoliubov_pair(
    basis: ModeBasis,
    r: Sequence[float],
    phi: Sequence[float] | None = None,
    unitary: np.ndarray | None = None,
):
    """Build a valid ``(U, V)`` pair from per-mode squeezing parameters.

    In the mode basis given by the columns of ``unitary`` the kernels are
    ``diag(cosh r)`` and ``diag(exp(i phi) sinh r)``. Missing trailing
    entries of ``r``/``phi`` are taken as zero.
    """
    n = basis.n_modes
    r_full = np.zeros(n)
    r_full[: len(r)] = r
    phi_full = np.zeros(n)
    if phi is not None:
        phi_full[: len(phi)] = phi
    if np.any(r_full < 0):
        raise DomainError("squeezing parameters must be non-negative")
    W = np.eye(n, dtype=complex) if unitary is None else np.asarray(unitary, dtype=complex)
    U = W @ np.diag(np.cosh(r_full)) @ W.conj().T
    V = W @ np.diag(np.exp(1j * phi_full) * np.sinh(r_full)) @ W.T
    return Kernel(basis, U), Kernel(basis, V)
