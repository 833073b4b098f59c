r"""Gaussian Wigner functionals and polynomial-Gaussian states.

A Gaussian state is stored as

.. math::
    W(\alpha) = C \exp[-2\delta^\dagger A \delta - \delta^\dagger B \bar\delta
                       - \delta^T \bar B \delta], \qquad \delta = \alpha - \xi,

with the measure :math:`\prod_i d^2\alpha_i/\pi` (so the vacuum has
:math:`C = 2^N`). In the doubled variable :math:`z = (\delta, \bar\delta)`
the exponent is :math:`-z^\dagger H z` with :math:`H = [[A, B], [\bar B, \bar A]]`;
a normalized state has :math:`C = 2^N \sqrt{\det H}` and
:math:`\langle z z^\dagger \rangle = H^{-1}/2`.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DimensionError, DomainError, InvalidPairError
from .modes import (
    ALGEBRA_TOL,
    FieldVector,
    Kernel,
    ModeBasis,
    _check_same,
    identity,
    outer,
    zero_kernel,
    zero_vector,
)
from .transforms import ab_from_uv


def as_points(alpha, n_modes: int):
    """Coerce ``alpha`` to an ``(P, n_modes)`` complex array.

    Returns the array and the leading shape to restore on output.
    """
    if isinstance(alpha, FieldVector):
        if alpha.basis.n_modes != n_modes:
            raise DimensionError("field vector does not match the state's basis")
        return alpha.amps[None, :], ()
    a = np.asarray(alpha, dtype=complex)
    if n_modes == 1 and (a.ndim == 0 or a.shape[-1] != 1):
        a = a[..., None]
    if a.shape[-1] != n_modes:
        raise DimensionError(f"expected trailing dimension {n_modes}, got {a.shape}")
    lead = a.shape[:-1]
    return a.reshape(-1, n_modes), lead


def _restore(values: np.ndarray, lead):
    if lead == ():
        return values.reshape(()).item()
    return values.reshape(lead)


@dataclass(frozen=True, eq=False)
class GaussianWigner:
    """Gaussian Wigner functional with kernels ``A`` (Hermitian), ``B``
    (symmetric), mean ``xi`` and log prefactor ``log C``."""

    A: Kernel
    B: Kernel
    mean: FieldVector
    log_prefactor: float

    def __post_init__(self):
        _check_same(self.A.basis, self.B.basis)
        _check_same(self.A.basis, self.mean.basis)
        if not self.A.is_hermitian:
            raise InvalidPairError("A kernel must be Hermitian")
        if not self.B.is_symmetric:
            raise InvalidPairError("B kernel must be symmetric")
        if np.min(np.linalg.eigvalsh(self.h_matrix())) <= 0:
            raise InvalidPairError("quadratic form is not positive definite")

    @classmethod
    def normalized(cls, A: Kernel, B: Kernel, mean: FieldVector | None = None) -> GaussianWigner:
        basis = A.basis
        if mean is None:
            mean = zero_vector(basis)
        H = _h_matrix(A.entries, B.entries)
        sign, logdet = np.linalg.slogdet(H)
        if sign.real <= 0:
            raise InvalidPairError("quadratic form is not positive definite")
        log_c = basis.n_modes * np.log(2.0) + 0.5 * logdet
        return cls(A, B, mean, float(log_c))

    @property
    def basis(self) -> ModeBasis:
        return self.A.basis

    @property
    def n_modes(self) -> int:
        return self.A.basis.n_modes

    def h_matrix(self) -> np.ndarray:
        return _h_matrix(self.A.entries, self.B.entries)

    def covariances(self):
        """Central second moments ``(<d d^dagger>, <d d^T>)`` with ``d = alpha - xi``."""
        n = self.n_modes
        Hinv = np.linalg.inv(self.h_matrix())
        return 0.5 * Hinv[:n, :n], 0.5 * Hinv[:n, n:]

    def total_weight(self) -> float:
        """Integral of the functional under the ``d^2 alpha / pi`` measure."""
        _, logdet = np.linalg.slogdet(self.h_matrix())
        return float(np.exp(self.log_prefactor - self.n_modes * np.log(2.0) - 0.5 * logdet))

    def gradient_field(self, pts: np.ndarray):
        """``(delta, g)`` with ``g = A delta + B conj(delta)`` at each point.

        The Wirtinger derivatives are ``dW/d conj(alpha) = -2 g W`` and
        ``dW/d alpha = -2 conj(g) W``.
        """
        d = pts - self.mean.amps[None, :]
        g = d @ self.A.entries.T + d.conj() @ self.B.entries.T
        return d, g


def _h_matrix(A: np.ndarray, B: np.ndarray) -> np.ndarray:
    return np.block([[A, B], [B.conj(), A.conj()]])


def _log_gauss(g: GaussianWigner, pts: np.ndarray) -> np.ndarray:
    d = pts - g.mean.amps[None, :]
    quad = np.einsum("pi,ij,pj->p", d.conj(), g.A.entries, d).real
    anom = np.einsum("pi,ij,pj->p", d.conj(), g.B.entries, d.conj()).real
    return g.log_prefactor - 2.0 * quad - 2.0 * anom


def eval_gaussian(g: GaussianWigner, alpha):
    """Value of the Gaussian functional at ``alpha`` (vector or ``(..., N)`` array)."""
    pts, lead = as_points(alpha, g.n_modes)
    return _restore(np.exp(_log_gauss(g, pts)), lead)


@dataclass(frozen=True, eq=False)
class PolyGaussian:
    r"""A real degree-2 polynomial times a Gaussian.

    The polynomial is

    .. math::
        c + l^\dagger\alpha + \alpha^\dagger l + \alpha^\dagger Q \alpha
          + \bar\alpha^T S \bar\alpha + \alpha^T \bar S \alpha

    with ``lin = l``, ``quad = Q`` (Hermitian) and ``anom = S`` (symmetric).
    """

    base: GaussianWigner
    c: float
    lin: FieldVector
    quad: Kernel
    anom: Kernel

    def __post_init__(self):
        basis = self.base.basis
        for part in (self.lin, self.quad, self.anom):
            _check_same(basis, part.basis)
        if not self.quad.is_hermitian:
            raise InvalidPairError("quadratic coefficient must be Hermitian")
        if not self.anom.is_symmetric:
            raise InvalidPairError("anomalous coefficient must be symmetric")
        object.__setattr__(self, "c", float(np.real(self.c)))

    @classmethod
    def constant(cls, base: GaussianWigner, c: float = 1.0) -> PolyGaussian:
        b = base.basis
        return cls(base, c, zero_vector(b), zero_kernel(b), zero_kernel(b))

    @classmethod
    def from_affine_square(cls, base, a, b, z, kappa) -> PolyGaussian:
        """``|a^dagger alpha + conj(b^dagger alpha) + z|^2 - kappa`` times ``base``.

        ``a`` and ``b`` are coefficient vectors (arrays), ``z`` and ``kappa``
        scalars.
        """
        a = np.asarray(a, dtype=complex)
        b = np.asarray(b, dtype=complex)
        basis = base.basis
        Q = np.outer(a, a.conj()) + np.outer(b, b.conj())
        S = 0.5 * (np.outer(a, b) + np.outer(b, a))
        lin = z * a + np.conj(z) * b
        return cls(
            base,
            abs(z) ** 2 - float(np.real(kappa)),
            FieldVector(basis, lin),
            Kernel(basis, 0.5 * (Q + Q.conj().T)),
            Kernel(basis, S),
        )

    @property
    def basis(self) -> ModeBasis:
        return self.base.basis

    def scaled(self, k: float) -> PolyGaussian:
        return PolyGaussian(self.base, k * self.c, self.lin * k, self.quad * k, self.anom * k)

    def polynomial(self, alpha, real: bool = True):
        """Polynomial prefactor alone; ``real=False`` keeps the (round-off)
        imaginary part for diagnostics."""
        pts, lead = as_points(alpha, self.basis.n_modes)
        l, Q, S = self.lin.amps, self.quad.entries, self.anom.entries
        lin = pts @ l.conj()
        val = (
            self.c
            + lin
            + lin.conj()
            + np.einsum("pi,ij,pj->p", pts.conj(), Q, pts)
            + np.einsum("pi,ij,pj->p", pts.conj(), S, pts.conj())
            + np.einsum("pi,ij,pj->p", pts, S.conj(), pts)
        )
        return _restore(val.real if real else val, lead)

    def expectation(self) -> float:
        """Integral of the whole functional under the ``d^2 alpha / pi`` measure."""
        M11, M20 = mgf_moment2(self.base)
        m11, m20 = M11.entries, M20.entries
        xi = self.base.mean.amps
        val = (
            self.c
            + 2.0 * np.real(np.vdot(self.lin.amps, xi))
            + np.real(np.trace(self.quad.entries @ m11))
            + 2.0 * np.real(np.sum(self.anom.entries * m20.conj()))
        )
        return float(val * self.base.total_weight())


def eval_polygauss(p: PolyGaussian, alpha):
    pts, lead = as_points(alpha, p.basis.n_modes)
    vals = p.polynomial(pts) * np.exp(_log_gauss(p.base, pts))
    return _restore(vals, lead)


@dataclass(frozen=True, eq=False)
class ThermalSpec:
    """Single-mode thermal light: mean photon number ``tau`` in mode ``theta``."""

    tau: float
    theta: FieldVector

    def __post_init__(self):
        if self.tau < 0:
            raise DomainError(f"mean photon number must be >= 0, got {self.tau}")
        if abs(self.theta.norm() - 1.0) > 1e-10:
            raise DomainError("thermal mode must be normalized")

    def kernel(self) -> Kernel:
        """``T = 1 - tau/(1+tau) Theta Theta^dagger``."""
        basis = self.theta.basis
        return identity(basis) - outer(self.theta, self.theta) * (self.tau / (1.0 + self.tau))


def make_vacuum(basis: ModeBasis) -> GaussianWigner:
    return GaussianWigner.normalized(identity(basis), zero_kernel(basis))


def make_coherent(basis: ModeBasis, xi: FieldVector) -> GaussianWigner:
    return GaussianWigner.normalized(identity(basis), zero_kernel(basis), xi)


def make_thermal(spec: ThermalSpec) -> GaussianWigner:
    basis = spec.theta.basis
    return GaussianWigner.normalized(spec.kernel(), zero_kernel(basis))


def make_squeezed_vacuum(U: Kernel, V: Kernel) -> GaussianWigner:
    A, B = ab_from_uv(U, V)
    return GaussianWigner.normalized(A, B)


def purity_check(g: GaussianWigner) -> float:
    """Max-norm residual of ``A - B conj(A)^-1 conj(B) - A^-1``; zero iff pure."""
    A, B = g.A.entries, g.B.entries
    if np.linalg.cond(A) > 1.0 / ALGEBRA_TOL:
        raise InvalidPairError("A kernel is singular")
    R = A - B @ np.linalg.solve(A.conj(), B.conj()) - np.linalg.inv(A)
    return float(np.max(np.abs(R)))


def mgf_moment2(g: GaussianWigner):
    """Second-moment kernels ``M11 = <alpha alpha^dagger>`` and ``M20 = <alpha alpha^T>``.

    These are the source derivatives of the moment generating functional at
    zero sources; for the pure squeezed vacuum ``M11 = A/2`` and
    ``M20 = -A^-1 B conj(A)/2``.
    """
    s11, s12 = g.covariances()
    xi = g.mean.amps
    basis = g.basis
    return (
        Kernel(basis, s11 + np.outer(xi, xi.conj())),
        Kernel(basis, s12 + np.outer(xi, xi)),
    )
