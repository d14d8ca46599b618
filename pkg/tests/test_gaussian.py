import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from fockweyl.errors import NotIntegrable, NotTraceClass, SingularM
from fockweyl.fock_numeric import auto_envelope_integral_Cn
from fockweyl.gaussian import (
    GaussianIntegralSpec,
    GaussianKernelOp,
    gaussian_integral,
    gk_adjoint,
    gk_compose,
    gk_evaluate,
    gk_hs_inner,
    gk_trace,
    real_gaussian_integral,
)
from fockweyl.group import WeightSystem
from fockweyl.verify import random_complex, random_integrable_spec, random_trace_class_op

seeds = st.integers(0, 2**32 - 1)


def params_close(k1, k2, tol):
    diffs = [abs(k1.c - k2.c), np.max(np.abs(k1.a - k2.a)), np.max(np.abs(k1.b - k2.b)), np.max(np.abs(k1.Q - k2.Q))]
    return max(diffs) <= tol * max(1.0, abs(k2.c))


@pytest.mark.parametrize("n", [1, 2])
@pytest.mark.parametrize("lam", [0.7, 2.0])
def test_standard_gaussian(n, lam):
    zero = np.zeros((n, n))
    spec = GaussianIntegralSpec(zero, 0.25 * lam * np.eye(n), zero, np.zeros(n), np.zeros(n))
    assert gaussian_integral(spec) == pytest.approx((2 * math.pi / lam) ** n, rel=1e-14)


@pytest.mark.parametrize("n", [1, 2])
def test_reproducing_identity(n, rng):
    # int exp(-lam|w|^2/2 + u.w + v.wb) dm = (2 pi/lam)^n exp(2 u.v / lam)
    lam = 0.7
    zero = np.zeros((n, n))
    u, v = random_complex(rng, n), random_complex(rng, n)
    spec = GaussianIntegralSpec(zero, 0.25 * lam * np.eye(n), zero, u, v)
    expected = (2 * math.pi / lam) ** n * np.exp(2 * (u @ v) / lam)
    assert gaussian_integral(spec) == pytest.approx(expected, rel=1e-13)


@given(seeds)
def test_lemma_matches_quadrature_n1(seed):
    spec = random_integrable_spec(np.random.default_rng(seed), 1)
    quad = auto_envelope_integral_Cn(spec.integrand, 1, 60)
    exact = gaussian_integral(spec)
    assert abs(quad - exact) <= 1e-8 * max(1.0, abs(exact))


def test_lemma_matches_quadrature_n2(rng):
    for _ in range(2):
        spec = random_integrable_spec(rng, 2)
        quad = auto_envelope_integral_Cn(spec.integrand, 2, 40)
        exact = gaussian_integral(spec)
        assert abs(quad - exact) <= 1e-7 * max(1.0, abs(exact))


def test_not_integrable():
    spec = GaussianIntegralSpec([[0]], [[-0.5]], [[0]], [0], [0])
    with pytest.raises(NotIntegrable):
        gaussian_integral(spec)


def test_spec_validation():
    with pytest.raises(ValueError):
        GaussianIntegralSpec(np.array([[0, 1], [0, 0]]), np.eye(2), np.zeros((2, 2)), [0, 0], [0, 0])


def test_real_gaussian_integral():
    H = np.array([[2.0, 0.3], [0.3, 1.0]])
    J = np.array([0.5, -1.0])
    expected = math.pi / math.sqrt(np.linalg.det(H)) * math.exp(0.25 * J @ np.linalg.solve(H, J))
    assert real_gaussian_integral(H, J) == pytest.approx(expected, rel=1e-14)
    # oscillatory: int exp(-i x^2) dx = sqrt(pi) exp(-i pi/4)
    val = real_gaussian_integral(np.array([[1j]]), np.zeros(1), allow_oscillatory=True)
    assert val == pytest.approx(math.sqrt(math.pi) * np.exp(-0.25j * math.pi), rel=1e-14)
    with pytest.raises(NotIntegrable):
        real_gaussian_integral(np.array([[1j]]), np.zeros(1))
    with pytest.raises(SingularM):
        real_gaussian_integral(np.zeros((1, 1)), np.zeros(1), allow_oscillatory=True)


def test_evaluate_examples(rng):
    lam = 0.7
    z, w = random_complex(rng, 2), random_complex(rng, 2)
    ident = GaussianKernelOp.identity(2, lam)
    assert gk_evaluate(ident, z, w) == pytest.approx(np.exp(0.5 * lam * z @ np.conj(w)))
    k = random_trace_class_op(rng, WeightSystem.simple(2, lam))
    assert gk_evaluate(k, np.zeros(2), np.zeros(2)) == pytest.approx(k.c)


def test_compose_with_identity(ws, rng):
    k = random_trace_class_op(rng, ws)
    ident = GaussianKernelOp.identity(ws.n, ws.lam)
    assert params_close(gk_compose(k, ident), k, 1e-14)
    assert params_close(gk_compose(ident, k), k, 1e-14)


def test_compose_matches_quadrature(ws, rng):
    k1, k2 = random_trace_class_op(rng, ws), random_trace_class_op(rng, ws)
    k12 = gk_compose(k1, k2)
    lam, n = ws.lam, ws.n
    order = 60 if n == 1 else 30
    for _ in range(3 if n == 1 else 1):
        z, w = random_complex(rng, n), random_complex(rng, n)

        def integrand(u):
            zz = np.broadcast_to(z, u.shape)
            ww = np.broadcast_to(w, u.shape)
            return gk_evaluate(k1, zz, u) * gk_evaluate(k2, u, ww) * np.exp(-0.5 * lam * np.sum(np.abs(u) ** 2, axis=-1))

        quad = (lam / (2 * math.pi)) ** n * auto_envelope_integral_Cn(integrand, n, order)
        exact = gk_evaluate(k12, z, w)
        assert abs(quad - exact) <= 1e-7 * max(1.0, abs(exact))


@given(seeds)
def test_compose_associative_and_trace_cyclic(seed):
    rng = np.random.default_rng(seed)
    ws = WeightSystem([[0.5, -0.9], [0.3, 0.7]], [0.4, -0.2], 0.7)
    k1, k2, k3 = (random_trace_class_op(rng, ws) for _ in range(3))
    assert params_close(gk_compose(gk_compose(k1, k2), k3), gk_compose(k1, gk_compose(k2, k3)), 1e-10)
    t12, t21 = gk_trace(gk_compose(k1, k2)), gk_trace(gk_compose(k2, k1))
    assert abs(t12 - t21) <= 1e-10 * max(1.0, abs(t12))


def test_trace_examples():
    with pytest.raises(NotTraceClass):
        gk_trace(GaussianKernelOp.identity(1, 1.0))
    for lam in (0.7, 1.0, 2.0):
        P0 = GaussianKernelOp(1.0, [0], [0], [[0]], lam)
        assert gk_trace(P0) == pytest.approx(1.0, abs=1e-14)
        assert gk_hs_inner(P0, P0) == pytest.approx(1.0, abs=1e-14)


def test_coherent_projector_is_rank_one_projection(ws, rng):
    P = GaussianKernelOp.coherent_projector(random_complex(rng, ws.n), ws.lam)
    assert gk_trace(P) == pytest.approx(1.0, abs=1e-12)
    assert params_close(gk_compose(P, P), P, 1e-12)
    assert params_close(gk_adjoint(P), P, 1e-14)


def test_adjoint_and_hs_inner(ws, rng):
    k1, k2, k3 = (random_trace_class_op(rng, ws) for _ in range(3))
    assert params_close(gk_adjoint(gk_adjoint(k1)), k1, 0)
    z, w = random_complex(rng, ws.n), random_complex(rng, ws.n)
    assert gk_evaluate(gk_adjoint(k1), z, w) == pytest.approx(np.conj(gk_evaluate(k1, w, z)))
    norm = gk_hs_inner(k1, k1)
    assert abs(norm.imag) <= 1e-12 * abs(norm) and norm.real > 0
    assert gk_hs_inner(k2, k1) == pytest.approx(np.conj(gk_hs_inner(k1, k2)), rel=1e-10)
    # scalars come out linearly on the left and conjugate-linearly on the right
    s = 0.3 - 1.1j
    scaled = lambda k: GaussianKernelOp(s * k.c, k.a, k.b, k.Q, k.lam)  # noqa: E731
    base = gk_hs_inner(k1, k3)
    assert gk_hs_inner(scaled(k1), k3) == pytest.approx(s * base, rel=1e-12)
    assert gk_hs_inner(k1, scaled(k3)) == pytest.approx(np.conj(s) * base, rel=1e-12)


def test_json_roundtrip(ws, rng):
    k = random_trace_class_op(rng, ws)
    assert params_close(GaussianKernelOp.from_json(k.to_json()), k, 0)


def test_kernel_validation():
    with pytest.raises(ValueError):
        gk_compose(GaussianKernelOp.identity(1, 1.0), GaussianKernelOp.identity(1, 2.0))
