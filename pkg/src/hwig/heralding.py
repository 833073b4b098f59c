"""Heralded single-photon subtraction and addition on Gaussian inputs.

Both maps turn a Gaussian ``W`` into ``W * (|u(alpha)|^2 - kappa)`` where
``u`` is an affine form in ``alpha`` and ``conj(alpha)``:

* subtraction: ``u = M^dagger (g - alpha)``, ``kappa = M^dagger (A - 1) M / 2``
* addition:    ``u = M_V^dagger (g + alpha)``, ``kappa = M_V^dagger (A + 1) M_V / 2``

with ``g = A (alpha - xi) + B conj(alpha - xi)`` and ``M_V = V conj(M)``.
These are the J-derivatives of the generating functions implemented below
(``subtraction_generating_function`` / ``addition_generating_function``),
which are kept as separate code paths for cross-checking.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DomainError, HeraldImpossibleError
from .modes import FieldVector, Kernel, _check_same, gram_schmidt, outer
from .states import GaussianWigner, PolyGaussian, _restore, as_points, eval_gaussian, mgf_moment2
from .transforms import WeakBogoliubov

#: Below this inverse normalization the herald is treated as impossible.
HERALD_TOL = 1e-12


@dataclass(frozen=True, eq=False)
class DetectorKernel:
    """Single-mode number-resolving detector ``D = M M^dagger``."""

    mode: FieldVector

    def __post_init__(self):
        if abs(self.mode.norm() - 1.0) > 1e-10:
            raise DomainError("detector mode must be normalized")

    @classmethod
    def from_kernel(cls, D: Kernel, tol: float = 1e-10) -> DetectorKernel:
        """Recover the detector mode from a rank-one kernel; multimode kernels are rejected."""
        if not D.is_hermitian:
            raise DomainError("detector kernel must be Hermitian")
        w, vecs = np.linalg.eigh(D.entries)
        if abs(w[-1] - 1.0) > tol or np.any(np.abs(w[:-1]) > tol):
            raise DomainError("detector kernel must be a rank-one projector (single-mode)")
        return cls(FieldVector(D.basis, vecs[:, -1]))

    @property
    def basis(self):
        return self.mode.basis

    @property
    def D(self) -> Kernel:
        return outer(self.mode, self.mode)


@dataclass(frozen=True, eq=False)
class HeraldedState:
    """Normalized heralded state together with its herald statistics."""

    state: PolyGaussian
    norm_inverse: float
    subspace: tuple
    kind: str

    @property
    def norm_constant(self) -> float:
        return 1.0 / self.norm_inverse

    def success_probability(self, strength: float) -> float:
        """Leading-order herald probability for reflectivity / squeezing ``strength``."""
        return strength**2 * self.norm_inverse

    def unnormalized(self) -> PolyGaussian:
        """The heralded functional before division by its trace (strength^2 dropped)."""
        return self.state.scaled(self.norm_inverse)

    def normalization_residual(self) -> float:
        return abs(self.state.expectation() - 1.0)


def _moment_kernel(det: DetectorKernel, J: float) -> np.ndarray:
    """``<beta beta^dagger>`` under vacuum times the projector generating function."""
    n = det.basis.n_modes
    return 0.5 * np.eye(n) - 0.25 * (1.0 - J) * det.D.entries


def projector_moments(det: DetectorKernel, J: float, m: int, n: int):
    """Moment ``<conj(beta)^m beta^n>`` of the vacuum-weighted projector generator.

    ``(0, 0)`` gives 1, ``(1, 1)`` the kernel ``1/2 - (1-J) D/4`` (indexed
    ``[k', k] = <beta(k') conj(beta(k))>``), unbalanced orders vanish and
    ``(2, 2)`` is the Wick sum as an array ``[i1, i2, j1, j2]``.
    """
    if J < 0:
        raise DomainError("generating parameter J must be >= 0")
    if not (0 <= m <= 2 and 0 <= n <= 2):
        raise DomainError("only moments up to second order in each variable are supported")
    basis = det.basis
    N = basis.n_modes
    C = _moment_kernel(det, J)
    if m != n:
        return np.zeros((N,) * (m + n), dtype=complex) if m + n else 0.0
    if m == 0:
        return 1.0
    if m == 1:
        return Kernel(basis, C)
    return np.einsum("ai,bj->ijab", C, C) + np.einsum("bi,aj->ijab", C, C)


def _subtraction_form(W_in: GaussianWigner, M: np.ndarray):
    A, B = W_in.A.entries, W_in.B.entries
    xi = W_in.mean.amps
    E = A - np.eye(len(M))
    a = E @ M
    b = B @ M.conj()
    z = -np.vdot(M, A @ xi + B @ xi.conj())
    kappa = 0.5 * np.real(np.vdot(M, E @ M))
    return a, b, z, kappa


def _addition_form(W_in: GaussianWigner, MV: np.ndarray):
    A, B = W_in.A.entries, W_in.B.entries
    xi = W_in.mean.amps
    Ap = A + np.eye(len(MV))
    a = Ap @ MV
    b = B @ MV.conj()
    z = -np.vdot(MV, A @ xi + B @ xi.conj())
    kappa = 0.5 * np.real(np.vdot(MV, Ap @ MV))
    return a, b, z, kappa


def _finish(W_in, a, b, z, kappa, norm_inv, kind) -> HeraldedState:
    if norm_inv < HERALD_TOL:
        raise HeraldImpossibleError(
            f"{kind}: inverse normalization {norm_inv:.3e} is zero; the herald never fires"
        )
    raw = PolyGaussian.from_affine_square(W_in, a, b, z, kappa)
    basis = W_in.basis
    dirs = [FieldVector(basis, v) for v in (a, b) if np.linalg.norm(v) > 0]
    subspace, _ = gram_schmidt(dirs) if dirs else ([], None)
    return HeraldedState(raw.scaled(1.0 / norm_inv), float(norm_inv), tuple(subspace), kind)


def normalize_subtract(W_in: GaussianWigner, det: DetectorKernel) -> float:
    """Inverse normalization ``tr(D M11) - tr(D)/2`` of the subtracted state."""
    _check_same(W_in.basis, det.basis)
    M11, _ = mgf_moment2(W_in)
    M = det.mode.amps
    return float(np.real(np.vdot(M, M11.entries @ M)) - 0.5)


def subtract_photon(W_in: GaussianWigner, det: DetectorKernel) -> HeraldedState:
    """Heralded single-photon subtraction through a weakly reflecting beamsplitter.

    Raises:
        HeraldImpossibleError: when the input has no photons to remove in the
            detected mode (e.g. vacuum).
    """
    _check_same(W_in.basis, det.basis)
    a, b, z, kappa = _subtraction_form(W_in, det.mode.amps)
    return _finish(W_in, a, b, z, kappa, normalize_subtract(W_in, det), "subtract")


def transformed_detector_mode(wb: WeakBogoliubov, det: DetectorKernel) -> FieldVector:
    """``M_V = V conj(M)``: the signal mode heralded by the idler detector."""
    _check_same(wb.basis, det.basis)
    return FieldVector(det.basis, wb.V.entries @ det.mode.amps.conj())


def normalize_add(W_in: GaussianWigner, wb: WeakBogoliubov, det: DetectorKernel) -> float:
    """Inverse normalization ``M_V^dagger M11 M_V + tr(D F)`` of the added state."""
    _check_same(W_in.basis, det.basis)
    MV = transformed_detector_mode(wb, det).amps
    M11, _ = mgf_moment2(W_in)
    M = det.mode.amps
    trDF = np.real(np.vdot(M, wb.F.entries @ M))
    return float(np.real(np.vdot(MV, M11.entries @ MV)) + trDF)


def add_photon(W_in: GaussianWigner, wb: WeakBogoliubov, det: DetectorKernel) -> HeraldedState:
    """Heralded single-photon addition by weak stimulated down-conversion."""
    _check_same(W_in.basis, det.basis)
    MV = transformed_detector_mode(wb, det).amps
    a, b, z, kappa = _addition_form(W_in, MV)
    return _finish(W_in, a, b, z, kappa, normalize_add(W_in, wb, det), "add")


def _derivative_data(W_in: GaussianWigner, alpha):
    pts, lead = as_points(alpha, W_in.n_modes)
    W = eval_gaussian(W_in, pts)
    _, g = W_in.gradient_field(pts)
    return pts, lead, np.atleast_1d(W), g


def subtraction_generating_function(W_in: GaussianWigner, det: DetectorKernel, J: float, alpha):
    """Strength^2 coefficient of the beamsplitter output traced against the
    projector generating function, as a function of ``J``.

    Assembled term by term from the functional derivatives of ``W_in``
    contracted with the beta moments; its J-derivative at 0 is the
    unnormalized subtracted state.
    """
    _check_same(W_in.basis, det.basis)
    pts, lead, W, g = _derivative_data(W_in, alpha)
    C = _moment_kernel(det, J)
    A = W_in.A.entries
    def form(x, K, y):
        return np.einsum("pi,ij,pj->p", x.conj(), K, y)
    # d = dW/dalpha = -2 conj(g) W, d' = dW/dconj(alpha) = -2 g W
    val = (
        -2.0 * np.sum(np.abs(pts) ** 2, axis=1)
        + 2.0 * np.trace(C).real
        + 4.0 * form(pts, C, pts)
        - 4.0 * (form(g, C, pts) + form(pts, C, g))
        + 2.0 * np.real(np.sum(g.conj() * pts, axis=1))
        + 4.0 * form(g, C, g)
        - 2.0 * np.trace(A @ C)
    )
    return _restore(np.real(val) * W, lead)


def addition_generating_function(
    W_in: GaussianWigner, wb: WeakBogoliubov, det: DetectorKernel, J: float, alpha
):
    """Squeezing^2 coefficient of the twin-beam output traced against the
    projector generating function, as a function of ``J``."""
    _check_same(W_in.basis, det.basis)
    pts, lead, W, g = _derivative_data(W_in, alpha)
    C = _moment_kernel(det, J)
    A, V, F = W_in.A.entries, wb.V.entries, wb.F.entries
    v = pts.conj() @ V.T            # V conj(alpha)
    y = g @ V.conj()                # V^dagger g  (V symmetric)
    def form(x, K, y_):
        return np.einsum("pi,ij,pj->p", x.conj(), K, y_)
    t1 = -4.0 * np.real(form(g, F, pts))
    t4 = 4.0 * form(y.conj(), C, y.conj()) - 2.0 * np.trace(V.T @ A.T @ V.conj() @ C)
    t5 = -2.0 * (np.sum(np.abs(v) ** 2, axis=1) + 2.0 * np.trace(F @ C))
    t6 = 4.0 * form(v, C, v)
    t7 = 4.0 * (form(y.conj(), C, v) + form(v, C, y.conj()))
    val = t1 + t4 + t5 + t6 + t7
    return _restore(np.real(val) * W, lead)
