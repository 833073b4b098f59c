"""Collapse heralded states onto the subspace of transformed detector modes,
sample them on phase-space grids and measure their negativity."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .errors import DimensionError, DomainError, ReductionError
from .modes import FieldVector, Kernel, ModeBasis
from .states import GaussianWigner, PolyGaussian, eval_polygauss

SUPPORT_TOL = 1e-10


def marginalize(p: PolyGaussian, subspace: Sequence[FieldVector], labels=None) -> PolyGaussian:
    """Integrate out everything orthogonal to ``subspace``.

    The polynomial must depend on ``alpha`` only through its projection on
    ``subspace``; the Gaussian is replaced by its exact marginal. The result
    lives on a new basis whose coordinates are ``a_j = G_j^dagger alpha``.

    Raises:
        ReductionError: if the polynomial has support outside the subspace or
            the subspace is not orthonormal.
    """
    if not subspace:
        raise ReductionError("empty subspace")
    G = np.column_stack([v.amps for v in subspace])
    d = G.shape[1]
    if np.max(np.abs(G.conj().T @ G - np.eye(d))) > 1e-10:
        raise ReductionError("subspace vectors must be orthonormal")
    P = G @ G.conj().T
    l, Q, S = p.lin.amps, p.quad.entries, p.anom.entries
    scale = max(abs(p.c), np.max(np.abs(l)), np.max(np.abs(Q)), np.max(np.abs(S)), 1.0)
    resid = max(
        np.max(np.abs(l - P @ l)),
        np.max(np.abs(Q - P @ Q @ P)),
        np.max(np.abs(S - P @ S @ P.conj())),
    )
    if resid > SUPPORT_TOL * scale:
        raise ReductionError(f"polynomial support leaves the subspace (residual {resid:.2e})")

    basis = ModeBasis(d, tuple(labels) if labels else tuple(f"G{j}" for j in range(d)))
    g = p.base
    s11, s12 = g.covariances()
    r11 = G.conj().T @ s11 @ G
    r12 = G.conj().T @ s12 @ G.conj()
    cov = np.block([[r11, r12], [r12.conj(), r11.conj()]])
    H = 0.5 * np.linalg.inv(cov)
    H = 0.5 * (H + H.conj().T)
    A = 0.5 * (H[:d, :d] + H[:d, :d].conj().T)
    B = 0.5 * (H[:d, d:] + H[:d, d:].T)
    base = GaussianWigner.normalized(
        Kernel(basis, A), Kernel(basis, B), FieldVector(basis, G.conj().T @ g.mean.amps)
    )
    # carry over any overall weight of an unnormalized input
    base = GaussianWigner(base.A, base.B, base.mean, base.log_prefactor + np.log(g.total_weight()))
    Sr = G.conj().T @ S @ G.conj()
    return PolyGaussian(
        base,
        p.c,
        FieldVector(basis, G.conj().T @ l),
        Kernel(basis, G.conj().T @ Q @ G),
        Kernel(basis, 0.5 * (Sr + Sr.T)),
    )


@dataclass(frozen=True)
class Axis:
    """Uniform grid axis from ``lo`` to ``hi`` with ``n`` points."""

    lo: float
    hi: float
    n: int

    def __post_init__(self):
        if self.n < 2 or self.step <= 0:
            raise DomainError(f"grid step must be positive (lo={self.lo}, hi={self.hi}, n={self.n})")

    @property
    def step(self) -> float:
        return (self.hi - self.lo) / (self.n - 1) if self.n > 1 else 0.0

    def points(self) -> np.ndarray:
        return np.linspace(self.lo, self.hi, self.n)

    @classmethod
    def parse(cls, text: str) -> Axis:
        lo, hi, n = text.split(":")
        return cls(float(lo), float(hi), int(n))

    def __str__(self):
        return f"{self.lo!r}:{self.hi!r}:{self.n}"


DEFAULT_AXIS = Axis(-4.0, 4.0, 161)


@dataclass(frozen=True, eq=False)
class ReducedWignerGrid:
    """A reduced Wigner function sampled on a ``q, p`` (or ``q1, p1, q2, p2``) grid.

    ``values`` is indexed ``[iq1, ip1, iq2, ip2, ...]`` with ``alpha_j = q_j + i p_j``.
    """

    axes: tuple
    values: np.ndarray
    labels: tuple = field(default=())

    @property
    def dims(self) -> int:
        return len(self.axes)

    def coordinates(self) -> list:
        return [ax.points() for ax in self.axes]

    def cell_measure(self) -> float:
        """Volume element including the ``1/pi`` per complex dimension."""
        return float(np.prod([ax.step for ax in self.axes]) / np.pi ** (self.dims // 2))

    def quadrature(self) -> float:
        return float(np.sum(self.values) * self.cell_measure())

    def section(self, fixed: dict) -> ReducedWignerGrid:
        """2D slice; ``fixed`` maps axis index to the coordinate to hold."""
        idx = []
        for k, ax in enumerate(self.axes):
            if k in fixed:
                idx.append(int(np.argmin(np.abs(ax.points() - fixed[k]))))
            else:
                idx.append(slice(None))
        keep = tuple(ax for k, ax in enumerate(self.axes) if k not in fixed)
        return ReducedWignerGrid(keep, self.values[tuple(idx)], self.labels)


def sample_grid(reduced: PolyGaussian, axes: Sequence[Axis], chunk: int = 1 << 18) -> ReducedWignerGrid:
    """Evaluate a reduced state with one complex dimension per ``(q, p)`` axis pair."""
    axes = tuple(axes)
    d = reduced.basis.n_modes
    if len(axes) not in (2, 4) or len(axes) != 2 * d:
        raise DimensionError(f"need {2 * d} axes (2 or 4 supported), got {len(axes)}")
    mesh = np.meshgrid(*[ax.points() for ax in axes], indexing="ij")
    flat = [m.ravel() for m in mesh]
    pts = np.stack([flat[2 * j] + 1j * flat[2 * j + 1] for j in range(d)], axis=-1)
    out = np.empty(pts.shape[0])
    for s in range(0, pts.shape[0], chunk):
        out[s : s + chunk] = eval_polygauss(reduced, pts[s : s + chunk])
    return ReducedWignerGrid(axes, out.reshape(mesh[0].shape), reduced.basis.labels)


@dataclass(frozen=True)
class NegativityMetrics:
    min_value: float
    argmin: tuple
    negative_volume: float


def negativity_metrics(grid: ReducedWignerGrid) -> NegativityMetrics:
    """Minimum, its grid coordinates, and the integrated negative part."""
    v = grid.values
    k = np.unravel_index(int(np.argmin(v)), v.shape)
    coords = tuple(float(ax.points()[i]) for ax, i in zip(grid.axes, k))
    neg = float(np.sum(np.where(v < 0, -v, 0.0)) * grid.cell_measure())
    return NegativityMetrics(float(v[k]), coords, neg)


def mode_overlap(a: FieldVector, b: FieldVector) -> float:
    """``|a^dagger b|^2 / (|a|^2 |b|^2)``."""
    na, nb = a.norm(), b.norm()
    if na == 0 or nb == 0:
        raise DomainError("mode overlap of a zero vector is undefined")
    return float(abs(np.vdot(a.amps, b.amps)) ** 2 / (na * nb) ** 2)


def reduce_heralded(hs) -> PolyGaussian:
    """Marginalize a heralded state onto its transformed detector modes."""
    return marginalize(hs.state, hs.subspace)
