import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hwig.errors import DomainError, InvalidPairError
from hwig.modes import FieldVector, Kernel, ModeBasis, identity, zero_kernel, zero_vector
from hwig.oracle import QuadratureSpec, integrate
from hwig.states import (
    GaussianWigner,
    PolyGaussian,
    ThermalSpec,
    eval_gaussian,
    eval_polygauss,
    make_coherent,
    make_squeezed_vacuum,
    make_thermal,
    make_vacuum,
    mgf_moment2,
    purity_check,
)
from hwig.transforms import bogoliubov_pair

from .conftest import random_squeezing, random_vector

B1, B2 = ModeBasis(1), ModeBasis(2)


def squeezed_1(r, phi=0.0):
    return make_squeezed_vacuum(*bogoliubov_pair(B1, [r], [phi]))


def e(basis, i=0):
    v = np.zeros(basis.n_modes, dtype=complex)
    v[i] = 1
    return FieldVector(basis, v)


class TestConstructors:
    def test_vacuum_values(self):
        assert eval_gaussian(make_vacuum(B1), [0.0]) == pytest.approx(2.0)
        assert eval_gaussian(make_vacuum(B2), [0.0, 0.0]) == pytest.approx(4.0)
        a = 0.3 - 0.4j
        assert eval_gaussian(make_vacuum(B1), [a]) == pytest.approx(2 * np.exp(-2 * abs(a) ** 2))

    def test_coherent(self):
        W = make_coherent(B1, e(B1))
        assert eval_gaussian(W, [1.0]) == pytest.approx(2.0)
        assert eval_gaussian(W, [0.0]) == pytest.approx(2 * np.exp(-2))

    def test_coherent_zero_is_vacuum(self, rng):
        pts = rng.normal(size=(10, 2)) + 1j * rng.normal(size=(10, 2))
        np.testing.assert_allclose(
            eval_gaussian(make_coherent(B2, zero_vector(B2)), pts), eval_gaussian(make_vacuum(B2), pts)
        )

    def test_thermal_kernel(self):
        spec = ThermalSpec(5.0, e(B2, 1))
        assert spec.kernel().det() == pytest.approx(1 / 6)
        assert eval_gaussian(make_thermal(spec), [0.0, 0.0]) == pytest.approx(4 / 6)

    def test_thermal_zero_is_vacuum(self):
        np.testing.assert_allclose(make_thermal(ThermalSpec(0.0, e(B1))).A.entries, [[1.0]])

    def test_thermal_rejects_negative(self):
        with pytest.raises(DomainError):
            ThermalSpec(-0.1, e(B1))

    def test_squeezed_single_mode(self):
        W = squeezed_1(0.5)
        assert W.A.entries[0, 0] == pytest.approx(np.cosh(1.0))
        assert W.B.entries[0, 0] == pytest.approx(np.sinh(1.0))
        assert eval_gaussian(W, [0.0]) == pytest.approx(2.0)

    def test_trivial_pair_is_vacuum(self):
        W = make_squeezed_vacuum(identity(B2), zero_kernel(B2))
        np.testing.assert_allclose(W.A.entries, np.eye(2))
        np.testing.assert_allclose(W.B.entries, 0)

    def test_invalid_pair(self):
        with pytest.raises(InvalidPairError):
            make_squeezed_vacuum(Kernel(B2, [[1, 1], [0, 1]]), zero_kernel(B2))

    def test_non_integrable_rejected(self):
        with pytest.raises(InvalidPairError):
            GaussianWigner.normalized(identity(B1), Kernel(B1, [[2.0]]))


class TestNormalization:
    @pytest.mark.parametrize(
        "make",
        [
            lambda: make_vacuum(B1),
            lambda: make_coherent(B1, FieldVector(B1, [0.7 - 0.2j])),
            lambda: make_thermal(ThermalSpec(2.0, e(B1))),
            lambda: squeezed_1(0.5, 0.3),
            lambda: make_vacuum(B2),
            lambda: make_coherent(B2, FieldVector(B2, [0.5, 1j])),
            lambda: make_thermal(ThermalSpec(1.5, FieldVector(B2, [0.6, 0.8j]))),
        ],
    )
    def test_quadrature_is_one(self, make):
        W = make()
        n = W.n_modes
        val, _ = integrate(lambda p: eval_gaussian(W, p), n, QuadratureSpec.adapted(W, order=30 if n == 1 else 14))
        assert val == pytest.approx(1.0, abs=1e-6)
        assert W.total_weight() == pytest.approx(1.0, abs=1e-12)

    def test_two_mode_squeezed(self, rng):
        W = make_squeezed_vacuum(*random_squeezing(2, rng, rmax=0.6))
        val, _ = integrate(lambda p: eval_gaussian(W, p), 2, QuadratureSpec.adapted(W, order=14))
        assert val == pytest.approx(1.0, abs=1e-6)


class TestPurity:
    def test_vacuum(self):
        assert purity_check(make_vacuum(B2)) == 0.0

    def test_thermal_residual(self):
        res = purity_check(make_thermal(ThermalSpec(5.0, e(B1))))
        assert res == pytest.approx(35 / 6)

    @pytest.mark.parametrize("n", [1, 2, 4, 6])
    def test_random_squeezed_pure(self, rng, n):
        for _ in range(5):
            assert purity_check(make_squeezed_vacuum(*random_squeezing(n, rng))) <= 1e-10

    def test_singular_rejected(self):
        W = GaussianWigner(Kernel(B2, np.diag([1.0, 1e-14])), zero_kernel(B2), zero_vector(B2), 0.0)
        with pytest.raises(InvalidPairError):
            purity_check(W)


class TestMoments:
    def test_vacuum(self):
        M11, M20 = mgf_moment2(make_vacuum(B2))
        np.testing.assert_allclose(M11.entries, 0.5 * np.eye(2))
        np.testing.assert_allclose(M20.entries, 0)

    def test_coherent(self):
        xi = np.array([0.3 + 0.1j, -1.0])
        M11, M20 = mgf_moment2(make_coherent(B2, FieldVector(B2, xi)))
        np.testing.assert_allclose(M11.entries, np.outer(xi, xi.conj()) + 0.5 * np.eye(2))
        np.testing.assert_allclose(M20.entries, np.outer(xi, xi))

    def test_thermal(self):
        spec = ThermalSpec(5.0, FieldVector(B2, [0.6, 0.8j]))
        M11, M20 = mgf_moment2(make_thermal(spec))
        np.testing.assert_allclose(M11.entries, 0.5 * spec.kernel().inv().entries, atol=1e-12)
        th = spec.theta.amps
        assert np.vdot(th, M11.entries @ th).real == pytest.approx(3.0)
        np.testing.assert_allclose(M20.entries, 0, atol=1e-15)

    def test_squeezed_closed_form(self, rng):
        W = make_squeezed_vacuum(*random_squeezing(3, rng))
        A, B = W.A.entries, W.B.entries
        M11, M20 = mgf_moment2(W)
        np.testing.assert_allclose(M11.entries, 0.5 * A, atol=1e-12)
        np.testing.assert_allclose(M20.entries, -0.5 * np.linalg.solve(A, B) @ A.conj(), atol=1e-12)

    @pytest.mark.parametrize(
        "W",
        [
            make_coherent(B2, FieldVector(B2, [0.4j, -0.3])),
            make_thermal(ThermalSpec(1.0, FieldVector(B2, [0.6, 0.8]))),
            make_squeezed_vacuum(*bogoliubov_pair(B2, [0.4, 0.2], [0.5, 1.0], np.array([[0.6, 0.8j], [0.8j, 0.6]]))),
        ],
        ids=["coherent", "thermal", "squeezed"],
    )
    def test_against_quadrature(self, W):
        spec = QuadratureSpec.adapted(W, order=12)
        M11, M20 = mgf_moment2(W)
        for i in range(2):
            for j in range(2):
                m11, _ = integrate(lambda p: p[:, i] * np.conj(p[:, j]) * eval_gaussian(W, p), 2, spec)
                m20, _ = integrate(lambda p: p[:, i] * p[:, j] * eval_gaussian(W, p), 2, spec)
                assert m11 == pytest.approx(M11.entries[i, j], abs=1e-6)
                assert m20 == pytest.approx(M20.entries[i, j], abs=1e-6)


class TestPolyGaussian:
    def test_constant_on_vacuum(self):
        p = PolyGaussian.constant(make_vacuum(B1), -1.0)
        assert eval_polygauss(p, [0.0]) == pytest.approx(-2.0)

    def test_affine_square_matches_direct(self, rng):
        b = ModeBasis(3)
        W = make_squeezed_vacuum(*random_squeezing(3, rng))
        a, bb = random_vector(b, rng).amps, random_vector(b, rng).amps
        z, kappa = 0.3 - 0.2j, 0.7
        p = PolyGaussian.from_affine_square(W, a, bb, z, kappa)
        pts = rng.normal(size=(20, 3)) + 1j * rng.normal(size=(20, 3))
        u = pts @ a.conj() + np.conj(pts @ bb.conj()) + z
        np.testing.assert_allclose(p.polynomial(pts), np.abs(u) ** 2 - kappa, atol=1e-12)

    def test_rejects_non_hermitian_quad(self):
        W = make_vacuum(B2)
        with pytest.raises(InvalidPairError):
            PolyGaussian(W, 0.0, zero_vector(B2), Kernel(B2, [[0, 1], [0, 0]]), zero_kernel(B2))

    @settings(max_examples=30, deadline=None)
    @given(st.integers(0, 2**32 - 1))
    def test_polynomial_is_real(self, seed):
        rng = np.random.default_rng(seed)
        b = ModeBasis(3)
        q = rng.normal(size=(3, 3)) + 1j * rng.normal(size=(3, 3))
        s = rng.normal(size=(3, 3)) + 1j * rng.normal(size=(3, 3))
        p = PolyGaussian(
            make_vacuum(b), rng.normal(), random_vector(b, rng), Kernel(b, q + q.conj().T), Kernel(b, s + s.T)
        )
        pts = rng.normal(size=(16, 3)) + 1j * rng.normal(size=(16, 3))
        val = p.polynomial(pts, real=False)
        assert np.all(np.abs(val.imag) <= 1e-12 * np.maximum(np.abs(val), 1.0))

    def test_expectation_against_quadrature(self, rng):
        W = make_squeezed_vacuum(*random_squeezing(2, rng, rmax=0.5))
        W = GaussianWigner.normalized(W.A, W.B, FieldVector(B2, [0.2, -0.1j]))
        p = PolyGaussian.from_affine_square(W, [1.0, 0.5j], [0.2, 0.1], 0.3, 0.4)
        val, _ = integrate(lambda x: eval_polygauss(p, x), 2, QuadratureSpec.adapted(W, order=12))
        assert p.expectation() == pytest.approx(val, abs=1e-9)

    def test_scalar_and_batched_eval(self):
        p = PolyGaussian.constant(make_vacuum(B2), 1.0)
        assert np.ndim(eval_polygauss(p, [0.0, 0.0])) == 0
        assert eval_polygauss(p, np.zeros((4, 5, 2))).shape == (4, 5)
