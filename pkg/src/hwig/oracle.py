"""Brute-force checks over a small discretized phase space.

Everything here goes through numerical integration and finite differences
rather than the closed-form polynomial updates in :mod:`hwig.heralding`.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Callable

import numpy as np
from scipy.special import roots_hermite

from .errors import DimensionError, OracleError
from .reduction import Axis
from .states import GaussianWigner, eval_gaussian

GH_MAX_MODES = 2
MC_MAX_MODES = 4


@dataclass(frozen=True, eq=False)
class QuadratureSpec:
    """How to integrate over ``prod_i d^2 alpha_i / pi``.

    Nodes and samples are drawn for a Gaussian with standard deviation
    ``scale`` per real coordinate, shifted by ``center``. ``transform``
    (a real ``2N x 2N`` matrix acting on ``(q1, p1, q2, p2, ...)``) replaces
    the isotropic scaling when given; see :meth:`adapted`.
    """

    scheme: str = "gauss-hermite"
    order: int = 40
    samples: int = 1_000_000
    scale: float = 0.5
    center: object = 0j
    transform: np.ndarray | None = None
    seed: int = 1234

    def __post_init__(self):
        if self.scheme not in ("gauss-hermite", "monte-carlo"):
            raise ValueError(f"unknown scheme {self.scheme!r}")

    @classmethod
    def adapted(cls, W: GaussianWigner, order: int = 40, widen: float = 1.0, **kw) -> QuadratureSpec:
        """Nodes matched to the covariance of ``W``; Gauss-Hermite is then
        exact for any polynomial times ``W``."""
        cov = real_covariance(W) * widen**2
        L = np.linalg.cholesky(cov)
        return cls(order=order, center=W.mean.amps.copy(), transform=L, **kw)

    def _affine(self, n_modes: int) -> np.ndarray:
        if self.transform is not None:
            T = np.asarray(self.transform, dtype=float)
            if T.shape != (2 * n_modes, 2 * n_modes):
                raise DimensionError("transform does not match the number of modes")
            return T
        return self.scale * np.eye(2 * n_modes)


def real_covariance(W: GaussianWigner) -> np.ndarray:
    """Covariance of ``(q1, p1, q2, p2, ...)`` with ``alpha = q + i p``."""
    s11, s12 = W.covariances()
    n = W.n_modes
    cov = np.empty((2 * n, 2 * n))
    cov[0::2, 0::2] = 0.5 * np.real(s11 + s12)
    cov[1::2, 1::2] = 0.5 * np.real(s11 - s12)
    cov[0::2, 1::2] = 0.5 * np.imag(s12 - s11)
    cov[1::2, 0::2] = 0.5 * np.imag(s11 + s12)
    return 0.5 * (cov + cov.T)


@lru_cache(maxsize=32)
def _gh_1d(order: int):
    x, w = roots_hermite(order)
    return x, w * np.exp(x**2)


def _to_complex(x: np.ndarray, n_modes: int, center) -> np.ndarray:
    return x[:, 0::2] + 1j * x[:, 1::2] + np.broadcast_to(np.asarray(center, dtype=complex), (n_modes,))


def _gh_nodes(n_modes: int, order: int, spec: QuadratureSpec):
    y, w = _gh_1d(order)
    dims = 2 * n_modes
    ys = np.stack([g.ravel() for g in np.meshgrid(*([y] * dims), indexing="ij")], axis=-1)
    ws = np.prod(np.stack([g.ravel() for g in np.meshgrid(*([w] * dims), indexing="ij")]), axis=0)
    # weight exp(-y^2) <-> standard normal after x = sqrt(2) T y
    T = np.sqrt(2.0) * spec._affine(n_modes)
    x = ys @ T.T
    wts = ws * abs(np.linalg.det(T)) / np.pi**n_modes
    return _to_complex(x, n_modes, spec.center), wts


def integrate(f: Callable[[np.ndarray], np.ndarray], n_modes: int, spec: QuadratureSpec = QuadratureSpec()):
    """Integrate ``f`` over ``n_modes`` complex amplitudes.

    ``f`` receives an ``(P, n_modes)`` complex array and returns ``P`` values.

    Returns:
        tuple: ``(value, error_estimate)``. For Gauss-Hermite the error is the
        change against a rule of two-thirds the order; for Monte Carlo it is
        the standard error.
    """
    if spec.scheme == "gauss-hermite":
        if n_modes > GH_MAX_MODES:
            raise DimensionError(f"Gauss-Hermite supports at most {GH_MAX_MODES} modes")
        pts, w = _gh_nodes(n_modes, spec.order, spec)
        val = np.sum(w * f(pts))
        pts2, w2 = _gh_nodes(n_modes, max(2 * spec.order // 3, 4), spec)
        return val, float(abs(val - np.sum(w2 * f(pts2))))

    if n_modes > MC_MAX_MODES:
        raise DimensionError(f"Monte Carlo supports at most {MC_MAX_MODES} modes")
    rng = np.random.default_rng(spec.seed)
    dims = 2 * n_modes
    T = spec._affine(n_modes)
    y = rng.standard_normal((spec.samples, dims))
    x = y @ T.T
    log_pdf = -0.5 * np.sum(y**2, axis=1) - 0.5 * dims * np.log(2 * np.pi) - np.log(abs(np.linalg.det(T)))
    vals = f(_to_complex(x, n_modes, spec.center)) * np.exp(-log_pdf) / np.pi**n_modes
    return np.mean(vals), float(np.std(vals) / np.sqrt(spec.samples))


def wirtinger(f, pts: np.ndarray, conj: bool = False, h: float = 1e-3):
    """Fourth-order central-difference Wirtinger derivative of ``f`` (single mode).

    ``d/dalpha = (d/dq - i d/dp)/2``; ``conj=True`` gives ``d/dconj(alpha)``.
    """
    def d(step):
        return (-f(pts + 2 * step) + 8 * f(pts + step) - 8 * f(pts - step) + f(pts - 2 * step)) / (12 * h)
    dq = d(h)
    dp = d(1j * h)
    return 0.5 * (dq + 1j * dp) if conj else 0.5 * (dq - 1j * dp)


def verify_partial_integration(W: GaussianWigner, spec: QuadratureSpec | None = None) -> float:
    """``|int alpha dW/dalpha + 1|`` for a single-mode functional."""
    if W.n_modes != 1:
        raise DimensionError("partial-integration check is single-mode")
    spec = spec or QuadratureSpec.adapted(W, order=40)
    def f(pts):
        dW = wirtinger(lambda a: eval_gaussian(W, a), pts)
        return pts[:, 0] * dW
    val, _ = integrate(f, 1, spec)
    return float(abs(val + 1.0))


def _projector(beta_M: np.ndarray, J: float) -> np.ndarray:
    return 2.0 / (1.0 + J) * np.exp(-2.0 * (1.0 - J) / (1.0 + J) * np.abs(beta_M) ** 2)


def herald_oracle(
    kind: str,
    W_in: GaussianWigner,
    detector_mode: complex = 1.0,
    axes=(Axis(-2.5, 2.5, 41), Axis(-2.5, 2.5, 41)),
    V: complex = 1.0,
    h: float = 1e-3,
    order: int = 40,
    dJ: float = 0.05,
) -> np.ndarray:
    """Unnormalized single-photon heralded state on a ``(q, p)`` grid, N = 1.

    Builds the joint signal/idler Wigner function after the beamsplitter
    (``kind='subtract'``) or weak twin-beam (``kind='add'``), multiplies by
    the projector generating function of the idler, integrates the idler by
    Gauss-Hermite quadrature, takes the strength^2 coefficient with a
    Richardson-extrapolated second difference and differentiates in ``J`` at
    0 with a five-point stencil.

    Raises:
        OracleError: if the Richardson estimates disagree by more than 1e-4.
    """
    if W_in.n_modes != 1:
        raise DimensionError("herald oracle is single-mode")
    if kind not in ("subtract", "add"):
        raise ValueError(f"unknown kind {kind!r}")
    qa, pa = axes
    Q, P = np.meshgrid(qa.points(), pa.points(), indexing="ij")
    alpha = (Q + 1j * P).ravel()[:, None]
    bnodes, bw = _gh_nodes(1, order, QuadratureSpec(scale=0.5))
    beta = bnodes[:, 0][None, :]
    beta_M = np.conj(detector_mode) * beta
    F = 0.5 * abs(V) ** 2

    def w_in(x):
        return eval_gaussian(W_in, x.reshape(-1, 1)).reshape(x.shape)

    def joint(s):
        if kind == "subtract":
            c = np.sqrt(1.0 - s * s)
            return 2.0 * np.exp(-2.0 * np.abs(c * beta + 1j * s * alpha) ** 2) * w_in(c * alpha + 1j * s * beta)
        a2 = alpha + s * s * F * alpha + s * V * np.conj(beta)
        b2 = beta + s * s * F * beta + s * V * np.conj(alpha)
        return w_in(a2) * 2.0 * np.exp(-2.0 * np.abs(b2) ** 2)

    steps = (h, h / 2)
    joints = {s: joint(s) for s in (0.0, h, -h, h / 2, -h / 2)}

    def traced(s, J):
        return joints[s] @ (bw * _projector(beta_M[0], J))

    def second_order(J, step):
        return (traced(step, J) - 2 * traced(0.0, J) + traced(-step, J)) / (2 * step**2)

    def extrap(J):
        coarse, fine = (second_order(J, s) for s in steps)
        rich = (4 * fine - coarse) / 3
        if np.max(np.abs(rich - fine)) > 1e-4:
            raise OracleError("finite-difference estimate unstable; adjust the step size")
        return rich

    Js = (-2 * dJ, -dJ, dJ, 2 * dJ)
    e = {J: extrap(J) for J in Js}
    deriv = (e[Js[0]] - 8 * e[Js[1]] + 8 * e[Js[2]] - e[Js[3]]) / (12 * dJ)
    return np.real(deriv).reshape(Q.shape)
