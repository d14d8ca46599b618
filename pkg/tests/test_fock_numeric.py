import math

import numpy as np
import pytest

from fockweyl.fock_numeric import (
    FockBasisSpec,
    QuadratureGrid,
    auto_envelope_integral_Cn,
    coherent_coeffs,
    hermite_functions,
    hermite_functions_1d,
    kernel_to_matrix,
    quad_integral_Cn,
)
from fockweyl.gaussian import GaussianKernelOp, gk_adjoint, gk_compose, gk_trace
from fockweyl.group import WeightSystem
from fockweyl.representation import bargmann_apply, sigma_kernel
from fockweyl.verify import random_complex, random_trace_class_op


def test_coherent_coefficients():
    spec = FockBasisSpec(2, 0.7, 30)
    c0 = coherent_coeffs(np.zeros(2), spec)
    assert c0[0] == 1 and not np.any(c0[1:])
    z = np.array([0.4 - 0.3j, 0.2 + 0.5j])
    total = np.sum(np.abs(coherent_coeffs(z, spec)) ** 2)
    assert total == pytest.approx(math.exp(0.5 * 0.7 * np.sum(np.abs(z) ** 2)), rel=1e-14)
    # the basis expansion of e_z reproduces e_z(w) = exp(lam w.conj(z)/2)
    w = np.array([0.1 + 0.2j, -0.3j])
    assert coherent_coeffs(z, spec) @ spec.basis_values(w) == pytest.approx(np.exp(0.35 * w @ np.conj(z)), rel=1e-13)


@pytest.mark.parametrize("lam", [0.7, 2.0])
def test_complex_grid_moments(lam):
    grid = QuadratureGrid.complex_grid(1, lam, 20)
    assert quad_integral_Cn(lambda w: np.ones(w.shape[0]), grid) == pytest.approx(1.0, abs=1e-14)
    for p in range(4):
        for q in range(4):
            val = quad_integral_Cn(lambda w: w[:, 0] ** p * np.conj(w[:, 0]) ** q, grid)
            expected = (2 / lam) ** p * math.factorial(p) if p == q else 0.0
            assert abs(val - expected) <= 1e-12 * max(1.0, expected)


def test_scaled_grid_matches_unscaled():
    f = lambda w: np.abs(w[:, 0]) ** 4 * np.exp(-0.1 * np.abs(w[:, 0]) ** 2)  # noqa: E731
    a = quad_integral_Cn(f, QuadratureGrid.complex_grid(1, 1.0, 40))
    b = quad_integral_Cn(f, QuadratureGrid.complex_grid(1, 1.0, 40, scale=1.3))
    assert a == pytest.approx(b, rel=1e-10)


def test_envelope_integral_shifted_gaussian():
    # int exp(-|w - w0|^2) dm(w) over C is pi for any centre
    w0 = 2.0 - 1.5j
    val = auto_envelope_integral_Cn(lambda w: np.exp(-np.abs(w[..., 0] - w0) ** 2), 1, 30)
    assert val == pytest.approx(math.pi, rel=1e-12)


@pytest.mark.parametrize("n", [1, 2])
def test_identity_matrix(n):
    spec = FockBasisSpec(n, 0.7, 6)
    M = kernel_to_matrix(GaussianKernelOp.identity(n, 0.7), spec)
    assert np.allclose(M.entries, np.eye(spec.size), atol=1e-13)


def test_sigma_matrix_is_diagonal(ws, rng):
    t = rng.uniform(-2, 2, ws.m)
    spec = FockBasisSpec(ws.n, ws.lam, 8)
    M = kernel_to_matrix(sigma_kernel(t, ws), spec)
    expected = np.array([ws.chi(t) * np.exp(-1j * ws.angles(t) @ np.array(p)) for p in spec.indices])
    assert np.allclose(M.entries, np.diag(expected), atol=1e-13)


def test_adjoint_is_conjugate_transpose(ws, rng):
    k = random_trace_class_op(rng, ws)
    spec = FockBasisSpec(ws.n, ws.lam, 6)
    assert np.allclose(kernel_to_matrix(gk_adjoint(k), spec).entries, kernel_to_matrix(k, spec).entries.conj().T, atol=1e-13)


def test_compression_convergence(rng):
    ws = WeightSystem.simple(1, 1.0)
    k1, k2 = random_trace_class_op(rng, ws), random_trace_class_op(rng, ws)
    spec = FockBasisSpec(1, 1.0, 24)
    lhs = kernel_to_matrix(gk_compose(k1, k2), spec).entries
    rhs = (kernel_to_matrix(k1, spec) @ kernel_to_matrix(k2, spec)).entries
    assert np.linalg.norm(lhs - rhs) <= 1e-6 * np.linalg.norm(lhs)
    spec30 = FockBasisSpec(1, 1.0, 30)
    tr = gk_trace(k1)
    assert abs(kernel_to_matrix(k1, spec30).trace() - tr) <= 1e-8 * abs(tr)


def test_quadrature_compression_agrees_with_taylor(rng):
    ws = WeightSystem.simple(1, 0.7)
    k = random_trace_class_op(rng, ws)
    spec = FockBasisSpec(1, 0.7, 8)
    a = kernel_to_matrix(k, spec).entries
    b = kernel_to_matrix(k, spec, method="quadrature", quad_order=60).entries
    assert np.allclose(a, b, atol=1e-10)
    with pytest.raises(ValueError):
        kernel_to_matrix(k, FockBasisSpec(1, 0.7, 8), method="nope")


@pytest.mark.parametrize("lam", [0.7, 1.0, 2.0])
def test_hermite_orthonormal_and_parity(lam):
    grid = QuadratureGrid.real_grid(1, 60)
    x = grid.nodes[:, 0] / math.sqrt(lam)
    w = grid.weights * np.exp(grid.nodes[:, 0] ** 2) / math.sqrt(lam)
    H = hermite_functions_1d(x, 10, lam)
    gram = (H * w[:, None]).T @ H
    assert np.allclose(gram, np.eye(11), atol=1e-10)
    Hm = hermite_functions_1d(-x, 10, lam)
    assert np.array_equal(Hm, H * (-1.0) ** np.arange(11))


def test_hermite_tensor_products():
    x = np.array([[0.3, -0.4], [1.0, 0.2]])
    H = hermite_functions(x, 2, 0.7)
    h0, h1 = hermite_functions_1d(x[:, 0], 2, 0.7), hermite_functions_1d(x[:, 1], 2, 0.7)
    # graded lex order: (0,0), (0,1), (1,0), ...
    spec = FockBasisSpec(2, 0.7, 2)
    for j, p in enumerate(spec.indices):
        assert np.allclose(H[:, j], h0[:, p[0]] * h1[:, p[1]])


@pytest.mark.parametrize("lam", [0.7, 2.0])
def test_bargmann_maps_hermite_to_fock_basis(lam):
    ws = WeightSystem.simple(1, lam)
    spec = FockBasisSpec(1, lam, 6)
    z = np.array([[0.3 + 0.2j], [-0.5 + 0.9j], [1.1 - 0.4j]])
    for p in range(7):
        B = bargmann_apply(lambda x: hermite_functions_1d(x[:, 0], 6, lam)[:, p], z, ws)
        assert np.allclose(B, spec.basis_values(z)[:, p], atol=1e-8)


def test_basis_spec_validation():
    with pytest.raises(ValueError):
        FockBasisSpec(0, 1.0, 3)
    with pytest.raises(ValueError):
        kernel_to_matrix(GaussianKernelOp.identity(1, 1.0), FockBasisSpec(1, 2.0, 3))


def test_random_complex_scale(rng):
    z = random_complex(rng, 20000)
    assert np.mean(np.abs(z) ** 2) == pytest.approx(1.0, abs=0.05)
