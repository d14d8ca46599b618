import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from fockweyl.algebra import DiffOp, PolyXY, PolyZ, weyl_quantize_poly
from fockweyl.errors import DomainError, NotTraceClass
from fockweyl.gaussian import GaussianKernelOp, gk_adjoint, gk_compose, gk_evaluate, gk_trace
from fockweyl.group import GroupElement, LieElement, WeightSystem, act_on_Cn, group_exp
from fockweyl.correspondences import (
    berezin_diffop,
    berezin_dpi,
    berezin_dpi_poly,
    berezin_pi_closed,
    berezin_symbol,
    conjugate_by_pi,
    double_symbol,
    sw_axioms_check,
    traciality_integral,
    weyl0_Apq_closed,
    weyl0_Apq_poly,
    weyl0_diffop,
    weyl0_dpi,
    weyl0_dpi_poly,
    weyl0_gaussian,
    weyl0_inverse,
    weyl0_pi_closed,
    weyl0_symbol_integral,
    weyl0_symbol_trace,
    weyl1_diffop,
    weyl1_direct_from_fock,
    weyl1_symbol,
)
from fockweyl.representation import dpi_symbolic, omega0_kernel, pi_kernel
from fockweyl.verify import (
    pi_admissible,
    pi_quadrature_friendly,
    random_complex,
    random_group_element,
    random_lie_element,
    random_poly_xy,
    random_trace_class_op,
)

seeds = st.integers(0, 2**32 - 1)


def admissible(rng, ws):
    return random_group_element(rng, ws, lambda a: pi_admissible(a) and pi_quadrature_friendly(a))


# --- Berezin calculus -----------------------------------------------------------


def test_berezin_examples(ws, rng):
    z = random_complex(rng, ws.n)
    assert berezin_symbol(GaussianKernelOp.identity(ws.n, ws.lam), z) == pytest.approx(1.0)
    assert double_symbol(GaussianKernelOp.identity(ws.n, ws.lam), z, random_complex(rng, ws.n)) == pytest.approx(1.0)
    for _ in range(20):
        g, z, w = random_group_element(rng, ws), random_complex(rng, ws.n), random_complex(rng, ws.n)
        k = pi_kernel(g, ws)
        assert berezin_symbol(k, z) == pytest.approx(berezin_pi_closed(g, z, ws), rel=1e-12)
        assert double_symbol(k, z, z) == pytest.approx(berezin_symbol(k, z), rel=1e-14)
        # Berezin symbol of the adjoint is the complex conjugate
        assert berezin_symbol(gk_adjoint(k), z) == pytest.approx(np.conj(berezin_symbol(k, z)), rel=1e-12)
        ratio = gk_evaluate(k, z, w) / np.exp(0.5 * ws.lam * z @ np.conj(w))
        assert double_symbol(k, z, w) == pytest.approx(ratio, rel=1e-12)


def test_berezin_of_dpi(ws, rng):
    X = random_lie_element(rng, ws)
    assert berezin_diffop(dpi_symbolic(X, ws), ws.lam).allclose(berezin_dpi_poly(X, ws), atol=1e-14)
    z = random_complex(rng, ws.n)
    assert berezin_dpi(X, z, ws) == pytest.approx(berezin_dpi_poly(X, ws)(z))


# --- W0: trace, vectorized and integral forms --------------------------------


def test_weyl0_of_vacuum_projector(ws, rng):
    P0 = GaussianKernelOp(1.0, np.zeros(ws.n), np.zeros(ws.n), np.zeros((ws.n, ws.n)), ws.lam)
    for _ in range(5):
        z = random_complex(rng, ws.n)
        expected = 2**ws.n * math.exp(-ws.lam * np.sum(np.abs(z) ** 2))
        assert weyl0_symbol_trace(P0, z) == pytest.approx(expected, rel=1e-12)
        assert weyl0_gaussian(P0, z) == pytest.approx(expected, rel=1e-12)
        assert weyl0_symbol_integral(P0, z, order=60 if ws.n == 1 else 40) == pytest.approx(expected, rel=1e-8, abs=1e-12)


def test_weyl0_of_identity_is_one():
    # Id Omega0(z) = Omega0(z), whose diagonal integral converges to 1
    ident = GaussianKernelOp.identity(2, 0.7)
    z = np.array([0.3 + 0.1j, -1.0j])
    assert weyl0_symbol_trace(ident, z) == pytest.approx(1.0, abs=1e-14)
    assert weyl0_gaussian(ident, z) == pytest.approx(1.0, abs=1e-14)


def test_weyl0_refuses_divergent_trace():
    # the quantizer itself has a delta-function symbol
    parity = omega0_kernel(np.zeros(1), WeightSystem.simple(1, 1.0))
    with pytest.raises(NotTraceClass):
        weyl0_symbol_trace(parity, np.zeros(1))
    with pytest.raises(NotTraceClass):
        weyl0_gaussian(parity, np.zeros(1))


def test_weyl0_trace_forms_agree(ws, rng):
    for _ in range(10):
        k = random_trace_class_op(rng, ws)
        z = random_complex(rng, ws.n)
        t = weyl0_symbol_trace(k, z)
        assert weyl0_gaussian(k, z) == pytest.approx(t, rel=1e-12)
    k = random_trace_class_op(rng, ws)
    zs = np.array([random_complex(rng, ws.n) for _ in range(4)])
    assert weyl0_gaussian(k, zs) == pytest.approx([weyl0_symbol_trace(k, z) for z in zs], rel=1e-12)


def test_weyl0_integral_form_on_trace_class(rng):
    ws = WeightSystem.simple(1, 0.7)
    for _ in range(5):
        k = random_trace_class_op(rng, ws)
        z = random_complex(rng, 1)
        t = weyl0_symbol_trace(k, z)
        assert weyl0_symbol_integral(k, z, order=60) == pytest.approx(t, rel=1e-7, abs=1e-9)


def test_weyl0_pi_three_ways(ws, rng):
    for _ in range(20):
        g, z = admissible(rng, ws), random_complex(rng, ws.n)
        closed = weyl0_pi_closed(g, z, ws)
        assert weyl0_pi_closed(g, z, ws, form="product") == pytest.approx(closed, rel=1e-12)
        assert weyl0_symbol_trace(pi_kernel(g, ws), z) == pytest.approx(closed, rel=1e-10)
        assert weyl0_symbol_integral(pi_kernel(g, ws), z, order=60) == pytest.approx(closed, rel=1e-7, abs=1e-7)


def test_weyl0_pi_identity_and_domain(ws):
    z = np.full(ws.n, 0.3 - 0.2j)
    assert weyl0_pi_closed(GroupElement.identity(ws), z, ws) == pytest.approx(1.0, rel=1e-14)
    ws1 = WeightSystem.simple(1, 1.0)
    with pytest.raises(DomainError):
        weyl0_pi_closed(GroupElement([math.pi], [0]), np.zeros(1), ws1)
    with pytest.raises(ValueError):
        weyl0_pi_closed(GroupElement.identity(ws1), np.zeros(1), ws1, form="nope")


# --- W0 on polynomial differential operators ---------------------------------


def test_weyl0_Apq_examples():
    assert weyl0_Apq_poly((0,), (0,), 0.7) == PolyZ.constant(1.0, 1)
    lam = 0.7
    z = np.array([0.4 - 0.9j])
    expected = (lam * abs(z[0]) ** 2 - 1) / 2
    assert weyl0_Apq_closed((1,), (1,), z, WeightSystem.simple(1, lam)) == pytest.approx(expected, rel=1e-14)


@pytest.mark.parametrize("n", [1, 2])
def test_weyl0_Apq_vs_integral(n, rng):
    lam = 0.7
    ws = WeightSystem.simple(n, lam)
    degrees = [(1,), (2,), (3,)] if n == 1 else [(1, 0), (2, 1), (0, 3)]
    for p in degrees + [(0,) * n]:
        for q in degrees:
            z = random_complex(rng, n)
            D = DiffOp({(p, q): 1.0}, n)
            quad = weyl0_symbol_integral(D, z, lam, order=12)
            closed = weyl0_Apq_closed(p, q, z, ws)
            assert quad == pytest.approx(closed, rel=1e-8, abs=1e-10)


@pytest.mark.parametrize("lam", [0.7, 2.0])
def test_weyl0_Apq_reality(lam):
    # on Fock space z^* = (2/lam) d and d^* = (lam/2) z, so
    # (z^p d^q)^* = (lam/2)^|q| (2/lam)^|p| z^q d^p and W0 of the adjoint is the conjugate
    for p in range(4):
        for q in range(4):
            F = weyl0_Apq_poly((p,), (q,), lam)
            G = weyl0_Apq_poly((q,), (p,), lam).scale((lam / 2) ** q * (2 / lam) ** p)
            assert F.conj().allclose(G, atol=1e-12)


@given(seeds)
def test_weyl0_inverse_roundtrip(seed):
    rng = np.random.default_rng(seed)
    n, lam = 2, 0.7
    terms = {}
    for _ in range(4):
        p = tuple(rng.integers(0, 3, n))
        q = tuple(rng.integers(0, 3, n))
        terms[(p, q)] = complex(rng.uniform(-1, 1), rng.uniform(-1, 1))
    D = DiffOp(terms, n)
    assert weyl0_inverse(weyl0_diffop(D, lam), lam).allclose(D, atol=1e-12)


# --- W0 of the derived representation -----------------------------------------


def test_weyl0_dpi(ws, rng):
    X = LieElement(np.zeros(ws.m), np.zeros(ws.n), 0.8)
    assert weyl0_dpi(X, random_complex(rng, ws.n), ws) == pytest.approx(0.8j * ws.lam)
    for _ in range(20):
        X = random_lie_element(rng, ws)
        assert weyl0_diffop(dpi_symbolic(X, ws), ws.lam).allclose(weyl0_dpi_poly(X, ws), atol=1e-12)
        # the two symbols differ by (i/2) sum alpha_k(t)
        diff = weyl0_dpi_poly(X, ws) - berezin_dpi_poly(X, ws)
        assert diff.allclose(PolyZ.constant(0.5j * np.sum(ws.angles(X.t)), ws.n), atol=1e-14)


def test_weyl0_dpi_is_derivative_of_weyl0_pi(ws, rng):
    X, z = random_lie_element(rng, ws), random_complex(rng, ws.n)

    def D(h):
        return (weyl0_pi_closed(group_exp(X, h, ws), z, ws) - weyl0_pi_closed(group_exp(X, -h, ws), z, ws)) / (2 * h)

    h = 1e-3
    richardson = (4 * D(h / 2) - D(h)) / 3
    assert richardson == pytest.approx(weyl0_dpi(X, z, ws), rel=1e-6, abs=1e-6)


# --- Stratonovich-Weyl axioms ----------------------------------------------------


def test_covariance(ws, rng):
    for _ in range(10):
        k, g, z = random_trace_class_op(rng, ws), random_group_element(rng, ws), random_complex(rng, ws.n)
        kc = conjugate_by_pi(k, g, ws)
        gz = act_on_Cn(g, z, ws)
        assert weyl0_symbol_trace(kc, z) == pytest.approx(weyl0_symbol_trace(k, gz), rel=1e-9, abs=1e-9)
        assert berezin_symbol(kc, z) == pytest.approx(berezin_symbol(k, gz), rel=1e-9, abs=1e-9)


def test_covariance_with_pi(ws, rng):
    for _ in range(10):
        g, g2, z = admissible(rng, ws), random_group_element(rng, ws), random_complex(rng, ws.n)
        kc = conjugate_by_pi(pi_kernel(g, ws), g2, ws)
        gz = act_on_Cn(g2, z, ws)
        assert weyl0_gaussian(kc, z) == pytest.approx(weyl0_pi_closed(g, gz, ws), rel=1e-9, abs=1e-12)


def test_traciality_exact_pair(ws):
    P0 = GaussianKernelOp(1.0, np.zeros(ws.n), np.zeros(ws.n), np.zeros((ws.n, ws.n)), ws.lam)
    assert traciality_integral(P0, P0, 40) == pytest.approx(1.0, abs=1e-12)
    assert gk_trace(gk_compose(P0, P0)) == pytest.approx(1.0, abs=1e-14)


def test_sw_axioms(rng):
    ws = WeightSystem([[0.6], [-0.4]], [0.0, 0.0], 2.0)
    ops = [random_trace_class_op(rng, ws) for _ in range(3)]
    gs = [random_group_element(rng, ws) for _ in range(3)]
    zs = [random_complex(rng, 1) for _ in range(3)]
    report = {c.name: c for c in sw_axioms_check(ops, gs, zs, ws, order=60)}
    assert set(report) == {"unit", "reality", "covariance-weyl0", "covariance-berezin", "traciality"}
    assert report["unit"].max_abs_residual <= 1e-12
    assert report["reality"].max_abs_residual <= 1e-12
    assert report["covariance-weyl0"].max_abs_residual <= 1e-9
    assert report["traciality"].max_abs_residual <= 1e-7
    assert report["traciality"].samples == 6
    assert "wall_time" in report["unit"].to_json()


# --- Schrodinger-side symbols ------------------------------------------------------


@given(seeds)
def test_weyl1_of_weyl_quantization(seed):
    rng = np.random.default_rng(seed)
    n = 1 + seed % 2
    lam = (0.7, 1.0, 2.0)[seed % 3]
    f = random_poly_xy(rng, n, 4)
    assert weyl1_diffop(weyl_quantize_poly(f), lam).allclose(f.scale_y(lam), atol=1e-10)


def test_weyl1_examples():
    lam = 0.7
    x, y = PolyXY.x(0, 1), PolyXY.y(0, 1)
    assert weyl1_diffop(DiffOp.x(0, 1), lam).allclose(x, atol=1e-15)
    assert weyl1_diffop(DiffOp.d(0, 1).scale(1j), lam).allclose(y.scale(lam), atol=1e-15)


def test_weyl1_projector_quadrature_matches_fock_side():
    lam = 1.0
    P0 = GaussianKernelOp(1.0, [0], [0], [[0]], lam)
    a, b = np.array([0.3]), np.array([-0.2])
    fock_side = weyl1_symbol(P0, a, b)
    assert fock_side == pytest.approx(2 * math.exp(-lam * (0.09 + 0.04)), rel=1e-12)
    assert weyl1_direct_from_fock(P0, a, b, order=30, inner_order=40) == pytest.approx(fock_side, rel=1e-7)
