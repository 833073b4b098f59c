"""Acceptance criteria, one test per criterion.

Run ``pytest tests/test_acceptance.py`` for a one-line pass/fail summary per
criterion at the end of the report.
"""

import subprocess
import sys

import numpy as np
import pytest

from hwig import cli
from hwig.config import PRESETS
from hwig.heralding import (
    DetectorKernel,
    add_photon,
    addition_generating_function,
    normalize_add,
    normalize_subtract,
    projector_moments,
    subtract_photon,
    subtraction_generating_function,
)
from hwig.modes import FieldVector, Kernel, ModeBasis, random_unitary
from hwig.oracle import QuadratureSpec, _projector, herald_oracle, integrate, verify_partial_integration
from hwig.reduction import Axis, negativity_metrics, reduce_heralded
from hwig.states import (
    ThermalSpec,
    eval_gaussian,
    eval_polygauss,
    make_coherent,
    make_squeezed_vacuum,
    make_thermal,
    make_vacuum,
    purity_check,
)
from hwig.transforms import WeakBogoliubov, bogoliubov_pair

from .conftest import random_vector

B1 = ModeBasis(1)
DET1 = DetectorKernel(FieldVector(B1, [1.0]))


def grid_of(p, axes):
    q, pp = (ax.points() for ax in axes)
    return eval_polygauss(p, (q[:, None] + 1j * pp[None, :])[..., None])


def test_01_squeezed_subtraction_origin(criterion):
    with criterion(1, "subtracted squeezed vacuum origin = -2", 1.0):
        rng = np.random.default_rng(1)
        n = 4
        b = ModeBasis(n)
        worst = 0.0
        for _ in range(20):
            W_u = random_unitary(n, rng)
            r, phi = rng.uniform(0.1, 1.0), rng.uniform(0, 2 * np.pi)
            ov = 1.0 - rng.uniform(0.0, 0.8)  # in (0.2, 1]
            U, V = bogoliubov_pair(b, [r], [phi], W_u)
            M = np.sqrt(ov) * W_u[:, 0] + np.sqrt(1 - ov) * np.exp(1j * rng.uniform(0, 6.3)) * W_u[:, 1]
            hs = subtract_photon(make_squeezed_vacuum(U, V), DetectorKernel(FieldVector(b, M)))
            red = reduce_heralded(hs)
            worst = max(worst, abs(eval_polygauss(red, np.zeros(red.basis.n_modes)) + 2.0))
        assert worst <= 1e-9, f"max deviation {worst:.2e}"


def test_02_purity(criterion):
    with criterion(2, "purity identity for squeezed vacua", 1.0):
        rng = np.random.default_rng(2)
        worst = 0.0
        for _ in range(50):
            n = int(rng.integers(1, 9))
            r = rng.uniform(0.0, 1.5, size=n)
            phi = rng.uniform(0, 2 * np.pi, size=n)
            W = make_squeezed_vacuum(*bogoliubov_pair(ModeBasis(n), r, phi, random_unitary(n, rng)))
            worst = max(worst, purity_check(W))
        assert worst <= 1e-10, f"max residual {worst:.2e}"


def test_03_projector_moments(criterion):
    with criterion(3, "projector moment kernels vs beta quadrature", 10.0):
        vac = make_vacuum(B1)
        for phase in (1.0, np.exp(0.9j)):
            det = DetectorKernel(FieldVector(B1, [phase]))
            for J in (0.0, 0.3, 1.0):
                def weight(b):
                    return eval_gaussian(vac, b) * _projector(np.conj(phase) * b[:, 0], J)
                m11, _ = integrate(lambda b: np.abs(b[:, 0]) ** 2 * weight(b), 1)
                m20, _ = integrate(lambda b: b[:, 0] ** 2 * weight(b), 1)
                m02, _ = integrate(lambda b: np.conj(b[:, 0]) ** 2 * weight(b), 1)
                expected = projector_moments(det, J, 1, 1).entries[0, 0]
                assert abs(expected - (0.5 - 0.25 * (1 - J))) <= 1e-15
                assert abs(m11 - expected) <= 1e-6, f"M11 J={J}: {m11} vs {expected}"
                assert abs(m20) <= 1e-8 and abs(m02) <= 1e-8
                assert np.all(projector_moments(det, J, 2, 0) == 0)
                assert np.all(projector_moments(det, J, 0, 2) == 0)


def test_04_oracle_equivalence(criterion):
    with criterion(4, "finite-difference heralding oracle vs closed-form maps", 120.0):
        axes = (Axis(-2.5, 2.5, 41),) * 2
        sv = make_squeezed_vacuum(*bogoliubov_pair(B1, [0.5]))
        hs = subtract_photon(sv, DET1)
        err = np.max(np.abs(herald_oracle("subtract", sv, axes=axes) - grid_of(hs.unnormalized(), axes)))
        assert err <= 1e-5, f"subtract: {err:.2e}"
        wb = WeakBogoliubov.from_v(Kernel(B1, [[1.0]]))
        for W in (make_vacuum(B1), make_coherent(B1, FieldVector(B1, [1.0]))):
            hs = add_photon(W, wb, DET1)
            err = np.max(np.abs(herald_oracle("add", W, axes=axes) - grid_of(hs.unnormalized(), axes)))
            assert err <= 1e-5, f"add: {err:.2e}"


def test_05_added_coherent_grid(criterion):
    with criterion(5, "photon-added coherent grid min at xi0/2", 5.0):
        res = cli.run_core(PRESETS["fig3"])
        m = negativity_metrics(res.grid)
        assert abs(res.grid.quadrature() - 1.0) <= 1e-4
        target = -np.exp(-0.5)
        assert abs(m.min_value - target) <= 1e-6, (
            f"grid min {m.min_value:.6f} at {m.argmin}, expected {target:.6f} at (0.5, 0)"
        )
        assert m.argmin == pytest.approx((0.5, 0.0))


def test_06_added_thermal_grid(criterion):
    with criterion(6, "photon-added thermal (tau=5) origin = -2/36", 5.0):
        res = cli.run_core(PRESETS["fig4"])
        grid = res.grid
        q, p = grid.coordinates()
        i, j = int(np.argmin(np.abs(q))), int(np.argmin(np.abs(p)))
        assert q[i] == 0.0 and p[j] == 0.0
        assert abs(grid.values[i, j] + 2 / 36) <= 1e-9
        m = negativity_metrics(grid)
        assert m.argmin == (0.0, 0.0)
        assert abs(grid.quadrature() - 1.0) <= 1e-4, f"quadrature {grid.quadrature()}"


def test_07_normalization_constants(criterion):
    with criterion(7, "inverse normalization closed forms vs quadrature", 30.0):
        rng = np.random.default_rng(7)
        M = np.exp(1j * rng.uniform(0, 6.3))
        det = DetectorKernel(FieldVector(B1, [M]))

        def moment(W, weight):
            val, _ = integrate(lambda a: weight(a[:, 0]) * eval_gaussian(W, a), 1, QuadratureSpec.adapted(W))
            return val

        # subtraction from squeezed vacuum: 1/2 M* E M
        r, phi = 0.5, rng.uniform(0, 6.3)
        sv = make_squeezed_vacuum(*bogoliubov_pair(B1, [r], [phi]))
        closed = 0.5 * (sv.A.entries[0, 0].real - 1.0)
        quad = moment(sv, lambda a: np.abs(np.conj(M) * a) ** 2) - 0.5
        assert abs(closed - quad) <= 1e-6 and abs(normalize_subtract(sv, det) - quad) <= 1e-6

        v = 0.8 * np.exp(1j * rng.uniform(0, 6.3))
        wb = WeakBogoliubov.from_v(Kernel(B1, [[v]]))
        MV = v * np.conj(M)
        trDF = 0.5 * abs(v) ** 2

        # addition to coherent: M_V* xi xi* M_V + |M_V|^2
        xi = 0.7 - 0.4j
        coh = make_coherent(B1, FieldVector(B1, [xi]))
        closed = abs(np.conj(MV) * xi) ** 2 + abs(MV) ** 2
        quad = moment(coh, lambda a: np.abs(np.conj(MV) * np.conj(a)) ** 2) + trDF
        assert abs(closed - quad) <= 1e-6 and abs(normalize_add(coh, wb, det) - quad) <= 1e-6

        # addition to thermal: 1/2 M_V* (T^-1 + 1) M_V
        tau = 3.0
        th = make_thermal(ThermalSpec(tau, FieldVector(B1, [1.0])))
        closed = 0.5 * abs(MV) ** 2 * (1 + tau + 1)
        quad = moment(th, lambda a: np.abs(np.conj(MV) * np.conj(a)) ** 2) + trDF
        assert abs(closed - quad) <= 1e-6 and abs(normalize_add(th, wb, det) - quad) <= 1e-6


def test_08_scale_invariance(criterion):
    with criterion(8, "reduced photon-added grids independent of |V|", 5.0):
        worst = 0.0
        for name in ("fig3", "fig4"):
            base = cli.run_core(PRESETS[name]).grid.values
            for c in (0.1, 3.0):
                scaled = cli.run_core(PRESETS[name].with_values(v_scale=c)).grid.values
                worst = max(worst, float(np.max(np.abs(scaled - base))))
        assert worst <= 1e-10, f"max change {worst:.2e}"


def test_09_j_affinity(criterion):
    with criterion(9, "generating functions affine in J", 1.0):
        rng = np.random.default_rng(9)
        n = 3
        b = ModeBasis(n)
        W = make_squeezed_vacuum(*bogoliubov_pair(b, [0.6, 0.3], [0.4, 2.0], random_unitary(n, rng)))
        det = DetectorKernel(random_vector(b, rng, normalized=True))
        v = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
        wb = WeakBogoliubov.from_v(Kernel(b, v + v.T), 0.1)
        pts = rng.normal(size=(50, n)) + 1j * rng.normal(size=(50, n))
        for f in (
            lambda J: subtraction_generating_function(W, det, J, pts),
            lambda J: addition_generating_function(W, wb, det, J, pts),
        ):
            s0, sh, s1 = f(0.0), f(0.5), f(1.0)
            scale = max(float(np.max(np.abs(np.concatenate([s0, s1])))), 1.0)
            dev = float(np.max(np.abs(sh - 0.5 * (s0 + s1))))
            assert dev <= 1e-12 * scale, f"collinearity defect {dev:.2e}"


def test_10_partial_integration(criterion):
    with criterion(10, "partial functional integration identity", 30.0):
        states = {
            "vacuum": make_vacuum(B1),
            "thermal": make_thermal(ThermalSpec(2.0, FieldVector(B1, [1.0]))),
            "squeezed": make_squeezed_vacuum(*bogoliubov_pair(B1, [0.5])),
        }
        for name, W in states.items():
            res = verify_partial_integration(W)
            assert res <= 1e-6, f"{name}: residual {res:.2e}"


def test_11_cli_determinism(criterion, tmp_path):
    with criterion(11, "CLI output byte-identical across runs", 10.0):
        outs = []
        for k in range(2):
            d = tmp_path / f"run{k}"
            subprocess.run(
                [sys.executable, "-m", "hwig.cli", "preset", "fig4", "--seed", "7", "--out", str(d)],
                check=True,
            )
            outs.append(((d / "fig4.csv").read_bytes(), (d / "fig4.summary.json").read_bytes()))
        assert outs[0] == outs[1]


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-q"]))
