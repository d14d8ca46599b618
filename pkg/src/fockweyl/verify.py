"""Verification suites: deterministic property checks with residual reports.

Each ``check_*`` function takes a weight system, a numpy Generator and keyword sizes,
and returns ``(samples, max_abs_residual)``.  The suites wrap them into
:class:`CheckRecord` entries with a tolerance; the CLI and the acceptance tests share
these functions.

Random sampling: ``t`` uniform in ``[-2, 2]^m`` (rejected when a domain guard applies),
``z0`` with independent ``N(0, 1/2)`` real and imaginary parts (``E|z0_k|^2 = 1``), and
``c0`` uniform in ``[-pi, pi]``.
"""

from __future__ import annotations

import itertools
import json
import math
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from . import correspondences as corr
from . import group as grp
from . import orbit as orb
from . import representation as rep
from . import star as st
from .algebra import DiffOp, PolyXY, PolyZ, diffop_compose, multi_indices, pushforward_j, weyl_quantize_poly
from .errors import FockWeylError, OffOrbit
from .fock_numeric import FockBasisSpec, auto_envelope_integral_Cn, hermite_functions_1d, kernel_to_matrix
from .gaussian import (
    GaussianIntegralSpec,
    GaussianKernelOp,
    gaussian_integral,
    gk_adjoint,
    gk_compose,
    gk_trace,
)
from .group import Covector, GroupElement, LieElement, WeightSystem

SCHEMA_VERSION = 1
SUITES = ("group", "gaussian", "representation", "correspondences", "orbit", "star")


def rel_err(a, b) -> float:
    """``max |a - b| / max(1, |b|)`` elementwise."""
    a = np.asarray(a, dtype=complex)
    b = np.asarray(b, dtype=complex)
    return float(np.max(np.abs(a - b) / np.maximum(1.0, np.abs(b)), initial=0.0))


# ---------------------------------------------------------------------------
# samplers


def random_complex(rng: np.random.Generator, n: int, scale: float = 1.0) -> np.ndarray:
    return scale * math.sqrt(0.5) * (rng.normal(size=n) + 1j * rng.normal(size=n))


def random_t(rng, ws: WeightSystem, accept=None, max_tries: int = 10000) -> np.ndarray:
    for _ in range(max_tries):
        t = rng.uniform(-2, 2, ws.m)
        if accept is None or accept(ws.angles(t)):
            return t
    raise RuntimeError("no admissible t found; the domain filter rejects everything")


def random_group_element(rng, ws: WeightSystem, accept=None) -> GroupElement:
    t = random_t(rng, ws, accept)
    return GroupElement(t, random_complex(rng, ws.n), rng.uniform(-math.pi, math.pi))


def random_lie_element(rng, ws: WeightSystem) -> LieElement:
    return LieElement(rng.uniform(-2, 2, ws.m), random_complex(rng, ws.n), rng.uniform(-math.pi, math.pi))


def random_covector(rng, ws: WeightSystem) -> Covector:
    return Covector(rng.normal(size=ws.m), random_complex(rng, ws.n), rng.normal())


def random_trace_class_op(rng, ws: WeightSystem) -> GaussianKernelOp:
    """``c exp(a.z + b.wb + z^T Q wb)`` with ``|Q| = 0.2 lam`` in operator norm.

    The bound keeps ``A Omega0(z)`` trace class and the symbol product integrable with
    mild oscillation.
    """
    n, lam = ws.n, ws.lam
    M = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
    M *= 0.4 / np.linalg.norm(M, 2)
    c = complex(rng.normal(), rng.normal())
    return GaussianKernelOp(c, 0.5 * lam * random_complex(rng, n, 0.7), 0.5 * lam * random_complex(rng, n, 0.7), 0.5 * lam * M, lam)


def random_integrable_spec(rng, n: int) -> GaussianIntegralSpec:
    while True:
        A = 0.2 * (rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n)))
        D = 0.2 * (rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n)))
        B = np.eye(n) + 0.2 * (rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n)))
        spec = GaussianIntegralSpec(0.5 * (A + A.T), B, 0.5 * (D + D.T), random_complex(rng, n), random_complex(rng, n))
        if np.linalg.eigvalsh(spec.N.real).min() > 0.5:
            return spec


def random_poly_xy(rng, n: int, degree: int, density: float = 0.5) -> PolyXY:
    terms = {}
    for p in multi_indices(n, degree):
        for q in multi_indices(n, degree - sum(p)):
            if rng.random() < density:
                terms[(p, q)] = complex(rng.uniform(-1, 1), rng.uniform(-1, 1))
    return PolyXY(terms, n)


def _dist_to_lattice(x, period: float, shift: float = 0.0) -> np.ndarray:
    y = np.asarray(x) - shift
    return np.abs(y - period * np.round(y / period))


def pi_admissible(alpha, margin: float = 1e-3) -> bool:
    """``alpha_k`` away from ``pi + 2 pi Z``."""
    return bool(np.all(_dist_to_lattice(alpha, 2 * math.pi, math.pi) > margin))


def pi_quadrature_friendly(alpha) -> bool:
    """``|tan(alpha_k / 2)| <= 1.5``: the integral form's oscillation stays within Gauss-Hermite reach."""
    return bool(np.all(np.abs(np.tan(0.5 * np.asarray(alpha))) <= 1.5))


def mehler_friendly(alpha) -> bool:
    """``alpha_k`` at least 0.3 from ``pi Z``."""
    return bool(np.all(_dist_to_lattice(alpha, math.pi) >= 0.3))


def mehler_quadrature_friendly(alpha) -> bool:
    """``alpha_k`` at least 0.8 from ``pi Z``.

    The Bargmann-conjugation integrand loses its Gaussian envelope in one direction as
    ``alpha_k`` approaches ``pi Z``; beyond this margin Gauss-Hermite of order 40-60
    reaches ``1e-8``.
    """
    return bool(np.all(_dist_to_lattice(alpha, math.pi) >= 0.8))


# ---------------------------------------------------------------------------
# group


def check_exp_homomorphism(ws, rng, samples: int = 200):
    """``exp((s1 + s2) X) = exp(s1 X) exp(s2 X)``; one quarter of the draws has ``|alpha(t) s| < 1e-6``."""
    worst = 0.0
    for i in range(samples):
        X = random_lie_element(rng, ws)
        s1, s2 = rng.uniform(-2, 2, 2)
        if i % 4 == 0:
            amax = max(np.max(np.abs(ws.angles(X.t))), 1e-300)
            s1, s2 = rng.uniform(-0.2, 0.2, 2) * 1e-6 / amax
        lhs = grp.group_exp(X, s1 + s2, ws)
        rhs = grp.group_multiply(grp.group_exp(X, s1, ws), grp.group_exp(X, s2, ws), ws)
        worst = max(worst, rel_err(lhs.coords(), rhs.coords()))
    return samples, worst


def check_group_axioms(ws, rng, samples: int = 200):
    """Associativity and ``g g^{-1} = e``."""
    worst = 0.0
    for _ in range(samples):
        g1, g2, g3 = (random_group_element(rng, ws) for _ in range(3))
        a = grp.group_multiply(grp.group_multiply(g1, g2, ws), g3, ws)
        b = grp.group_multiply(g1, grp.group_multiply(g2, g3, ws), ws)
        e = grp.group_multiply(g1, grp.group_inverse(g1, ws), ws)
        worst = max(worst, rel_err(a.coords(), b.coords()), float(np.max(np.abs(e.coords()))))
    return samples, worst


def check_coadjoint_pairing(ws, rng, samples: int = 200):
    """``<Ad*(g) xi, Ad(g) X> = <xi, X>``."""
    worst = 0.0
    for _ in range(samples):
        g = random_group_element(rng, ws)
        xi, X = random_covector(rng, ws), random_lie_element(rng, ws)
        lhs = grp.pairing(grp.coadjoint(g, xi, ws), grp.adjoint(g, X, ws))
        worst = max(worst, rel_err(lhs, grp.pairing(xi, X)))
    return samples, worst


def _lie_from_curve(curve, h: float) -> np.ndarray:
    """Central difference of a group-valued curve at 0, in ``(t, Re z, Im z, c)`` coordinates."""
    return (curve(h).coords() - curve(-h).coords()) / (2 * h)


def check_adjoint_derivative(ws, rng, samples: int = 50, h: float = 1e-4):
    """``Ad(g) X = d/ds g exp(sX) g^{-1}`` and ``[X, Y] = d/ds Ad(exp(sX)) Y`` at ``s = 0``."""
    worst = 0.0
    for _ in range(samples):
        g = random_group_element(rng, ws)
        X, Y = random_lie_element(rng, ws), random_lie_element(rng, ws)
        ginv = grp.group_inverse(g, ws)

        def conj_curve(s):
            return grp.group_multiply(grp.group_multiply(g, grp.group_exp(X, s, ws), ws), ginv, ws)

        worst = max(worst, rel_err(_lie_from_curve(conj_curve, h), grp.adjoint(g, X, ws).coords()))
        d = (grp.adjoint(grp.group_exp(X, h, ws), Y, ws).coords() - grp.adjoint(grp.group_exp(X, -h, ws), Y, ws).coords()) / (2 * h)
        worst = max(worst, rel_err(d, grp.lie_bracket(X, Y, ws).coords()))
    return samples, worst


# ---------------------------------------------------------------------------
# gaussian


def check_gaussian_lemma(ws, rng, samples: int = 50, order: int | None = None):
    """Closed-form Gaussian integral against envelope-adapted Gauss-Hermite quadrature."""
    n = ws.n
    order = order or default_quad_order(n)
    worst = 0.0
    for _ in range(samples):
        spec = random_integrable_spec(rng, n)
        quad = auto_envelope_integral_Cn(spec.integrand, n, order)
        exact = gaussian_integral(spec)
        worst = max(worst, abs(quad - exact) / abs(exact))
    return samples, worst


def check_compose_associative(ws, rng, samples: int = 50):
    worst = 0.0
    for _ in range(samples):
        k1, k2, k3 = (random_trace_class_op(rng, ws) for _ in range(3))
        a = gk_compose(gk_compose(k1, k2), k3)
        b = gk_compose(k1, gk_compose(k2, k3))
        worst = max(worst, a.param_distance(b), gk_adjoint(gk_adjoint(k1)).param_distance(k1))
    return samples, worst


def check_trace_vs_matrix(ws, rng, samples: int = 10, degree: int = 24):
    """Closed-form trace against the trace of the truncated Fock-basis matrix."""
    spec = FockBasisSpec(ws.n, ws.lam, degree)
    worst = 0.0
    for _ in range(samples):
        k = random_trace_class_op(rng, ws)
        worst = max(worst, rel_err(kernel_to_matrix(k, spec).trace(), gk_trace(k)))
    return samples, worst


# ---------------------------------------------------------------------------
# representation


def check_pi_homomorphism(ws, rng, samples: int = 200):
    """``pi(g) pi(g') = pi(g g')`` on kernel parameters."""
    worst = 0.0
    for _ in range(samples):
        g1, g2 = random_group_element(rng, ws), random_group_element(rng, ws)
        lhs = gk_compose(rep.pi_kernel(g1, ws), rep.pi_kernel(g2, ws))
        rhs = rep.pi_kernel(grp.group_multiply(g1, g2, ws), ws)
        worst = max(worst, lhs.param_distance(rhs))
    return samples, worst


def check_pi_structure(ws, rng, samples: int = 100):
    """``pi(g) = rho(z0, c0) sigma(t)`` and ``pi(g)^* = pi(g^{-1})``."""
    worst = 0.0
    for _ in range(samples):
        g = random_group_element(rng, ws)
        k = rep.pi_kernel(g, ws)
        fact = gk_compose(rep.rho_kernel(g.z0, g.c0, ws), rep.sigma_kernel(g.t, ws))
        worst = max(worst, fact.param_distance(k), gk_adjoint(k).param_distance(rep.pi_kernel(grp.group_inverse(g, ws), ws)))
    return samples, worst


def check_mehler_vs_oracle(ws, rng, samples: int = 20, points: int = 10, order: int | None = None):
    """Mehler kernel against the quadrature kernel of ``B^{-1} sigma(t) B``."""
    # sigma(t) is diagonal, so the oracle integrates one coordinate at a time
    order = order or default_quad_order(1)
    worst = 0.0
    for _ in range(samples):
        t = random_t(rng, ws, mehler_quadrature_friendly)
        K = rep.mehler_kernel(t, ws)
        ks = rep.sigma_kernel(t, ws)
        for _ in range(points):
            x, y = rng.uniform(-1.5, 1.5, ws.n), rng.uniform(-1.5, 1.5, ws.n)
            worst = max(worst, rel_err(rep.conjugated_kernel_oracle(ks, x, y, order), K.evaluate(x, y)))
            worst = max(worst, rel_err(rep.mehler_factored(t, x, y, ws), K.evaluate(x, y)))
    return samples * points, worst


def check_pi_prime_vs_oracle(ws, rng, samples: int = 20, points: int = 10, order: int | None = None):
    order = order or default_quad_order(1)
    worst = 0.0
    for _ in range(samples):
        g = random_group_element(rng, ws, mehler_quadrature_friendly)
        K = rep.pi_prime_kernel(g, ws)
        kp = rep.pi_kernel(g, ws)
        for _ in range(points):
            x, y = rng.uniform(-1.5, 1.5, ws.n), rng.uniform(-1.5, 1.5, ws.n)
            worst = max(worst, rel_err(rep.conjugated_kernel_oracle(kp, x, y, order), K.evaluate(x, y)))
    return samples * points, worst


def check_hermite_eigen(ws, rng, samples: int = 20, degree: int = 6, order: int = 120):
    """``sigma'(t) h_p = chi(t) e^{-i alpha(t) p} h_p`` coordinate by coordinate.

    The Mehler kernel factorizes over coordinates, so each one-dimensional factor is
    tested with the single-weight system ``alpha[:, k]``; ``t`` is drawn with
    ``|cot alpha_k(t)| <= 1.5`` so the Gauss-Hermite rule resolves the oscillation.
    """
    worst = 0.0
    count = 0
    x = np.linspace(-1.5, 1.5, 7)
    for k in range(ws.n):
        ws1 = WeightSystem(ws.alpha[:, k : k + 1], np.zeros(ws.m), ws.lam)
        for _ in range(samples):
            t = random_t(rng, ws1, lambda a: mehler_friendly(a) and np.all(np.abs(1 / np.tan(a)) <= 1.5))
            K = rep.mehler_kernel(t, ws1)
            alpha = ws1.angles(t)[0]
            h = hermite_functions_1d(x, degree, ws.lam)
            for p in range(degree + 1):
                got = rep.hermite_action_oracle(K, p, x, ws.lam, order)
                worst = max(worst, float(np.max(np.abs(got - np.exp(-1j * alpha * p) * h[:, p]))))
                count += 1
    return count, worst


def check_mehler_group_law(ws, rng, samples: int = 50):
    """``sigma'(t) sigma'(t') = sigma'(t + t')`` and ``sigma'(t)^* = sigma'(-t)`` on kernel parameters."""
    worst = 0.0
    for _ in range(samples):
        while True:
            t1, t2 = random_t(rng, ws, mehler_friendly), random_t(rng, ws, mehler_friendly)
            if mehler_friendly(ws.angles(t1 + t2)):
                break
        lhs = rep.schrodinger_compose(rep.mehler_kernel(t1, ws), rep.mehler_kernel(t2, ws))
        worst = max(worst, lhs.param_distance(rep.mehler_kernel(t1 + t2, ws)))
        worst = max(worst, rep.schrodinger_adjoint(rep.mehler_kernel(t1, ws)).param_distance(rep.mehler_kernel(-t1, ws)))
    return samples, worst


# ---------------------------------------------------------------------------
# correspondences


def check_weyl0_pi_forms(ws, rng, samples: int = 100, order: int | None = None, integral: bool = True):
    """``W0(pi(g))``: trace form vs closed form, the two closed forms, and the integral form.

    Returns three ``(samples, residual)`` pairs.  Elements are drawn with
    ``|tan(alpha_k/2)| <= 1.5`` so the integral form stays within quadrature reach; since
    ``pi(g)`` is diagonal, that integral splits into planar ones.
    """
    order = order or default_quad_order(1)
    r_trace = r_forms = r_int = 0.0
    n_int = 0
    for _ in range(samples):
        g = random_group_element(rng, ws, lambda a: pi_admissible(a) and pi_quadrature_friendly(a))
        z = random_complex(rng, ws.n)
        closed = corr.weyl0_pi_closed(g, z, ws)[()]
        prod = corr.weyl0_pi_closed(g, z, ws, form="product")[()]
        trace = corr.weyl0_symbol_trace(rep.pi_kernel(g, ws), z)
        r_trace = max(r_trace, rel_err(trace, closed))
        r_forms = max(r_forms, rel_err(prod, closed))
        if integral:
            r_int = max(r_int, rel_err(corr.weyl0_symbol_integral(rep.pi_kernel(g, ws), z, order=order), closed))
            n_int += 1
    return (samples, r_trace), (samples, r_forms), (n_int, r_int)


def check_weyl0_Apq(ws, rng, max_degree: int = 3, order: int = 8):
    """Closed form of ``W0(z^p d^q)`` against its integral form, ``|p|, |q| <= max_degree``."""
    worst = 0.0
    count = 0
    idx = multi_indices(ws.n, max_degree)
    for p, q in itertools.product(idx, idx):
        z = random_complex(rng, ws.n)
        D = DiffOp.monomial(p, q)
        quad = corr.weyl0_symbol_integral(D, z, ws.lam, order=order)
        worst = max(worst, rel_err(quad, corr.weyl0_Apq_closed(p, q, z, ws)[()]))
        worst = max(worst, corr.weyl0_inverse(corr.weyl0_Apq_poly(p, q, ws.lam), ws.lam).max_abs_diff(D))
        count += 1
    return count, worst


def check_covariance(ws, rng, samples: int = 50):
    """``S(pi(g)^{-1} A pi(g))(z) = S(A)(g.z)`` and the same for ``W0``.  Returns two pairs."""
    cov_s = cov_w = 0.0
    for _ in range(samples):
        k = random_trace_class_op(rng, ws)
        g = random_group_element(rng, ws)
        z = random_complex(rng, ws.n)
        kc = corr.conjugate_by_pi(k, g, ws)
        gz = grp.act_on_Cn(g, z, ws)
        cov_s = max(cov_s, rel_err(corr.berezin_symbol(kc, z)[()], corr.berezin_symbol(k, gz)[()]))
        cov_w = max(cov_w, rel_err(corr.weyl0_symbol_trace(kc, z), corr.weyl0_symbol_trace(k, gz)))
    return (samples, cov_s), (samples, cov_w)


def check_unit(ws, rng, samples: int = 50):
    worst = max(abs(gk_trace(rep.omega0_kernel(random_complex(rng, ws.n), ws)) - 1) for _ in range(samples))
    return samples, float(worst)


def check_reality(ws, rng, samples: int = 50):
    """``W0(A^*) = conj W0(A)`` for Gaussian operators and for ``pi(g)`` (closed forms)."""
    worst = 0.0
    for _ in range(samples):
        k = random_trace_class_op(rng, ws)
        z = random_complex(rng, ws.n)
        worst = max(worst, abs(corr.weyl0_symbol_trace(gk_adjoint(k), z) - np.conj(corr.weyl0_symbol_trace(k, z))))
        g = random_group_element(rng, ws, pi_admissible)
        lhs = corr.weyl0_pi_closed(grp.group_inverse(g, ws), z, ws)[()]
        worst = max(worst, rel_err(lhs, np.conj(corr.weyl0_pi_closed(g, z, ws)[()])))
    return 2 * samples, worst


def check_traciality(ws, rng, samples: int = 20, order: int | None = None):
    """``int W0(A) W0(B) dmu_lam = Tr(AB)``; the first pair is (coherent projector, itself)."""
    order = order or default_quad_order(ws.n)
    proj = GaussianKernelOp.coherent_projector(random_complex(rng, ws.n), ws.lam)
    pairs = [(proj, proj)] + [(random_trace_class_op(rng, ws), random_trace_class_op(rng, ws)) for _ in range(samples - 1)]
    worst = abs(corr.traciality_integral(proj, proj, order) - 1)
    for k1, k2 in pairs:
        lhs = corr.traciality_integral(k1, k2, order)
        worst = max(worst, rel_err(lhs, gk_trace(gk_compose(k1, k2))))
    return len(pairs), float(worst)


def check_dpi_symbols(ws, rng, samples: int = 50):
    """``W0`` and ``S`` of ``dpi(X)`` from the differential operator vs the closed polynomials."""
    worst = 0.0
    for _ in range(samples):
        X = random_lie_element(rng, ws)
        D = rep.dpi_symbolic(X, ws)
        worst = max(worst, corr.weyl0_diffop(D, ws.lam).max_abs_diff(corr.weyl0_dpi_poly(X, ws)))
        worst = max(worst, corr.berezin_diffop(D, ws.lam).max_abs_diff(corr.berezin_dpi_poly(X, ws)))
    return samples, worst


def check_weyl1_of_weyl_quantization(ws, rng, samples: int = 20, degree: int = 4):
    """``W1(W(f)) = f(x, lam y)`` as polynomials."""
    worst = 0.0
    for _ in range(samples):
        f = random_poly_xy(rng, ws.n, degree)
        worst = max(worst, corr.weyl1_diffop(weyl_quantize_poly(f), ws.lam).max_abs_diff(f.scale_y(ws.lam)))
    return samples, worst


# ---------------------------------------------------------------------------
# orbit


def check_psi_pairing(ws, rng, samples: int = 100):
    """``i <psi(z), X> = W0(dpi(X))(z)`` as polynomials and pointwise."""
    worst = 0.0
    for _ in range(samples):
        X = random_lie_element(rng, ws)
        poly = orb.psi_pairing_poly(X, ws)
        worst = max(worst, poly.max_abs_diff(corr.weyl0_dpi_poly(X, ws)))
        z = random_complex(rng, ws.n)
        worst = max(worst, abs(1j * grp.pairing(orb.psi_map(z, ws), X) - corr.weyl0_dpi(X, z, ws)[()]))
    return samples, worst


def check_psi_equivariance(ws, rng, samples: int = 200):
    worst = 0.0
    for _ in range(samples):
        g, z = random_group_element(rng, ws), random_complex(rng, ws.n)
        worst = max(worst, orb.psi_equivariance_check(g, z, ws), abs(orb.psi_map(grp.act_on_Cn(g, z, ws), ws).d - ws.lam))
    return samples, worst


def check_w0_prime(ws, rng, samples: int = 20):
    """Round trip through the orbit chart, plus the ``OffOrbit`` error path."""
    worst = 0.0
    for _ in range(samples):
        k = random_trace_class_op(rng, ws)
        z = random_complex(rng, ws.n)
        worst = max(worst, abs(orb.w0_prime(k, orb.psi_map(z, ws), ws) - corr.weyl0_gaussian(k, z)[()]))
        xi = orb.psi_map(z, ws)
        try:
            orb.w0_prime(k, Covector(xi.s, xi.v, xi.d + 0.1), ws)
            worst = max(worst, 1.0)
        except OffOrbit:
            pass
    return samples, worst


# ---------------------------------------------------------------------------
# star


def check_moyal_associativity(ws, rng, samples: int = 100, degree: int = 4):
    worst = 0.0
    for _ in range(samples):
        f, g, h = (random_poly_xy(rng, ws.n, degree) for _ in range(3))
        worst = max(worst, st.moyal(st.moyal(f, g), h).max_abs_diff(st.moyal(f, st.moyal(g, h))))
    return samples, worst


def check_moyal_weyl(ws, rng, samples: int = 100, degree: int = 4):
    """``W(f *_M g) = W(f) W(g)`` and the antisymmetry of ``P^l``."""
    worst = 0.0
    for _ in range(samples):
        f, g = random_poly_xy(rng, ws.n, degree), random_poly_xy(rng, ws.n, degree)
        lhs = weyl_quantize_poly(st.moyal(f, g))
        worst = max(worst, lhs.max_abs_diff(diffop_compose(weyl_quantize_poly(f), weyl_quantize_poly(g))))
        for l in range(degree + 1):
            worst = max(worst, st.moyal_Pl(f, g, l).max_abs_diff(st.moyal_Pl(g, f, l).scale((-1) ** l)))
    return samples, worst


def check_star_routes(ws, rng, samples: int = 30, degree: int = 3):
    """Expansion vs operator routes for ``*_M``, ``*_1`` and ``*_0`` (plus the ``j``-pullback route), and ``*_0 = *_M`` along ``j`` at ``lam = 1``."""
    worst = 0.0
    lam = ws.lam
    for _ in range(samples):
        f, g = random_poly_xy(rng, ws.n, degree), random_poly_xy(rng, ws.n, degree)
        worst = max(worst, st.moyal(f, g).max_abs_diff(st.moyal(f, g, "operator")))
        worst = max(worst, st.star1(f, g, lam).max_abs_diff(st.star1(f, g, lam, "scaling")))
        F, G = pushforward_j(f), pushforward_j(g)
        ref = st.star0(F, G, lam)
        worst = max(worst, ref.max_abs_diff(st.star0(F, G, lam, "operator")), ref.max_abs_diff(st.star0(F, G, lam, "pullback")))
        worst = max(worst, pushforward_j(st.moyal(f, g)).max_abs_diff(st.star0(F, G, 1.0)))
    return samples, worst


def check_gaussian_star_series(ws, rng, total_degree: int = 6):
    """Gaussian ``*_0`` identity against the ``(u, v)`` expansion of both sides (``n = 1``)."""
    worst = 0.0
    count = 0
    for i in range(total_degree + 1):
        for j in range(total_degree + 1 - i):
            lhs = st.gaussian_series_lhs(i, j, ws.lam)
            worst = max(worst, lhs.max_abs_diff(st.gaussian_series_rhs(i, j, ws.lam)))
            count += 1
    return count, worst


def check_gaussian_sigma_route(ws, rng, samples: int = 50):
    """``W0(sigma(t)) *_0 W0(sigma(t')) = W0(sigma(t + t'))`` through :func:`gaussian_star0`."""
    worst = 0.0
    lam = ws.lam

    def gauss(t):
        alpha = ws.angles(t)
        pref = 2.0**ws.n * ws.chi(t) * np.prod(1.0 / (1.0 + np.exp(-1j * alpha)))
        return pref, 1j * lam * np.tan(0.5 * alpha)

    for _ in range(samples):
        while True:
            t1 = random_t(rng, ws, pi_admissible)
            t2 = random_t(rng, ws, pi_admissible)
            if pi_admissible(ws.angles(t1 + t2), 1e-2):
                break
        (c1, u), (c2, v) = gauss(t1), gauss(t2)
        pref, e = st.gaussian_star0(u, v, lam)
        z = random_complex(rng, ws.n)
        got = c1 * c2 * pref * np.exp(np.sum(e * np.abs(z) ** 2))
        ref = corr.weyl0_pi_closed(GroupElement(t1 + t2, np.zeros(ws.n), 0.0), z, ws)[()]
        worst = max(worst, rel_err(got, ref))
    return samples, worst


def check_star_exp_taylor(ws, rng, samples: int = 10, order: int = 8):
    """Series coefficients of ``exp_*0(sP)`` against Cauchy-integral Taylor coefficients of the closed form."""
    worst = 0.0
    for _ in range(samples):
        c0 = rng.uniform(-1, 1)
        a = random_complex(rng, ws.n, 0.5)
        b = rng.uniform(0.2, 1.0, ws.n) * rng.choice([-1, 1], ws.n)
        z = random_complex(rng, ws.n, 0.7)
        series = st.star_exp_series(st.star_exp_polynomial(c0, a, b), order, "star0", ws.lam)
        worst = max(worst, float(np.max(np.abs(series.evaluate(z) - st.closed_form_taylor(c0, a, b, z, ws.lam, order)))))
    return samples, worst


def check_star_exp_moyal(ws, rng, samples: int = 10, order: int = 8):
    """Moyal-form closed star exponential vs the ``*_0`` closed form at ``lam = 1`` and vs the Moyal series."""
    worst = 0.0
    for _ in range(samples):
        c0 = rng.uniform(-1, 1)
        u, v = rng.uniform(-0.5, 0.5, ws.n), rng.uniform(-0.5, 0.5, ws.n)
        b = rng.uniform(0.2, 1.0, ws.n) * rng.choice([-1, 1], ws.n)
        x, y = rng.uniform(-0.7, 0.7, ws.n), rng.uniform(-0.7, 0.7, ws.n)
        val = st.star_exp_moyal_closed(c0, u, v, b, x, y)
        worst = max(worst, rel_err(val, st.star_exp_closed(c0, u + 1j * v, b, x + 1j * y, 1.0)))
        series = st.star_exp_series(st.star_exp_moyal_polynomial(c0, u, v, b), order, "moyal")
        taylor = st.closed_form_taylor(c0, u + 1j * v, b, x + 1j * y, 1.0, order)
        worst = max(worst, float(np.max(np.abs(series.evaluate(x, y) - taylor))))
    return samples, worst


def check_star_exp_quadratic(ws, rng, samples: int = 20):
    """Pure-quadratic case ``exp_*0(i b |z|^2) = cos(b/lam)^{-1} exp(i lam |z|^2 tan(b/lam))`` (``n = 1``)."""
    worst = 0.0
    lam = ws.lam
    for _ in range(samples):
        b = rng.uniform(0.1, 1.4) * lam * rng.choice([-1, 1])
        z = random_complex(rng, 1)
        ref = np.exp(1j * lam * abs(z[0]) ** 2 * math.tan(b / lam)) / math.cos(b / lam)
        worst = max(worst, rel_err(st.star_exp_closed(0.0, [0.0], [b], z, lam), ref))
    return samples, worst


# ---------------------------------------------------------------------------
# configuration and reports


def default_quad_order(n: int) -> int:
    return 60 if n == 1 else 40


@dataclass
class Config:
    lam: float = 1.0
    n: int = 1
    m: int = 1
    alpha: list = field(default_factory=lambda: [[1.0]])
    beta: list = field(default_factory=lambda: [0.0])
    seed: int = 0
    truncation_degree: int = 24
    quad_order: int | None = None
    tolerances: dict = field(default_factory=dict)
    timing: bool = True

    def __post_init__(self):
        if not (isinstance(self.n, int) and self.n >= 1 and isinstance(self.m, int) and self.m >= 1):
            raise ValueError(f"n and m must be positive integers, got n={self.n}, m={self.m}")
        alpha = np.asarray(self.alpha, dtype=float)
        if alpha.shape != (self.m, self.n):
            raise ValueError(f"alpha must be {self.m}x{self.n}, got shape {alpha.shape}")
        if np.asarray(self.beta, dtype=float).shape != (self.m,):
            raise ValueError(f"beta must have length m={self.m}")
        if not self.lam > 0:
            raise ValueError(f"lambda must be positive, got {self.lam}")
        if self.truncation_degree < 0:
            raise ValueError("truncation_degree must be non-negative")
        if self.quad_order is None:
            self.quad_order = default_quad_order(self.n)
        if self.quad_order < 2:
            raise ValueError("quad_order must be at least 2")
        unknown = set(self.tolerances) - set(SUITES)
        if unknown:
            raise ValueError(f"tolerance overrides for unknown suites: {sorted(unknown)}")

    @property
    def ws(self) -> WeightSystem:
        return WeightSystem(self.alpha, self.beta, self.lam)

    @classmethod
    def from_json(cls, data: dict) -> Config:
        known = {"lambda", "n", "m", "alpha", "beta", "seed", "truncation_degree", "quad_order", "tolerances"}
        extra = set(data) - known
        if extra:
            raise ValueError(f"unknown config keys: {sorted(extra)}")
        kwargs = {k: data[k] for k in known - {"lambda"} if k in data}
        if "lambda" in data:
            kwargs["lam"] = float(data["lambda"])
        if "alpha" in data:
            alpha = np.atleast_2d(np.asarray(data["alpha"], dtype=float))
            kwargs.setdefault("m", alpha.shape[0])
            kwargs.setdefault("n", alpha.shape[1])
            kwargs.setdefault("beta", [0.0] * alpha.shape[0])
        return cls(**kwargs)

    def to_json(self) -> dict:
        return {
            "lambda": self.lam,
            "n": self.n,
            "m": self.m,
            "alpha": np.asarray(self.alpha, dtype=float).tolist(),
            "beta": np.asarray(self.beta, dtype=float).tolist(),
            "seed": self.seed,
            "truncation_degree": self.truncation_degree,
            "quad_order": self.quad_order,
            "tolerances": dict(sorted(self.tolerances.items())),
        }


@dataclass
class CheckRecord:
    name: str
    samples: int
    max_abs_residual: float
    tolerance: float
    wall_time: float
    error: str | None = None

    @property
    def passed(self) -> bool:
        return self.error is None and self.max_abs_residual <= self.tolerance

    def to_json(self) -> dict:
        out = {
            "name": self.name,
            "samples": self.samples,
            "max_abs_residual": self.max_abs_residual,
            "tolerance": self.tolerance,
            "pass": self.passed,
            "wall_time": self.wall_time,
        }
        if self.error is not None:
            out["error"] = self.error
        return out


def _suite_checks(name: str, cfg: Config):
    """``(check name, tolerance, thunk)`` triples; a thunk returns ``(samples, residual)``
    or a list of ``(name, samples, residual, tolerance)`` for multi-output checks."""
    ws = cfg.ws
    order = cfg.quad_order
    # the oracles for pi(g) and sigma(t) split into planar integrals, so they never need
    # the coarser rule that keeps 2n-dimensional grids affordable
    planar = max(order, default_quad_order(1))
    if name == "group":
        return [
            ("exp-homomorphism", 1e-12, lambda r: check_exp_homomorphism(ws, r)),
            ("group-axioms", 1e-12, lambda r: check_group_axioms(ws, r)),
            ("coadjoint-pairing", 1e-12, lambda r: check_coadjoint_pairing(ws, r)),
            ("adjoint-derivative", 1e-6, lambda r: check_adjoint_derivative(ws, r)),
        ]
    if name == "gaussian":
        return [
            ("gaussian-lemma-vs-quadrature", 1e-8 if ws.n == 1 else 1e-7, lambda r: check_gaussian_lemma(ws, r, order=order)),
            ("compose-associative", 1e-12, lambda r: check_compose_associative(ws, r)),
            ("trace-vs-matrix", 1e-6, lambda r: check_trace_vs_matrix(ws, r, degree=cfg.truncation_degree)),
        ]
    if name == "representation":
        return [
            ("pi-homomorphism", 1e-10, lambda r: check_pi_homomorphism(ws, r)),
            ("pi-structure", 1e-10, lambda r: check_pi_structure(ws, r)),
            ("mehler-vs-oracle", 1e-6, lambda r: check_mehler_vs_oracle(ws, r, order=planar)),
            ("pi-prime-vs-oracle", 1e-6, lambda r: check_pi_prime_vs_oracle(ws, r, order=planar)),
            ("hermite-eigen", 1e-7, lambda r: check_hermite_eigen(ws, r)),
            ("mehler-group-law", 1e-10, lambda r: check_mehler_group_law(ws, r)),
        ]
    if name == "correspondences":

        def pi_forms(r):
            (n1, a), (n2, b), (n3, c) = check_weyl0_pi_forms(ws, r, order=planar)
            return [
                ("weyl0-pi-trace-vs-closed", n1, a, 1e-10),
                ("weyl0-pi-closed-forms", n2, b, 1e-12),
                ("weyl0-pi-integral-vs-closed", n3, c, 1e-7),
            ]

        def covariance(r):
            (n1, a), (n2, b) = check_covariance(ws, r)
            return [("covariance-berezin", n1, a, 1e-9), ("covariance-weyl0", n2, b, 1e-9)]

        return [
            ("weyl0-pi", None, pi_forms),
            ("weyl0-Apq", 1e-8, lambda r: check_weyl0_Apq(ws, r)),
            ("covariance", None, covariance),
            ("unit", 1e-12, lambda r: check_unit(ws, r)),
            ("reality", 1e-12, lambda r: check_reality(ws, r)),
            ("traciality", 1e-7, lambda r: check_traciality(ws, r, order=order)),
            ("dpi-symbols", 1e-12, lambda r: check_dpi_symbols(ws, r)),
            ("weyl1-of-weyl-quantization", 1e-10, lambda r: check_weyl1_of_weyl_quantization(ws, r)),
        ]
    if name == "orbit":
        return [
            ("psi-pairing", 1e-12, lambda r: check_psi_pairing(ws, r)),
            ("psi-equivariance", 1e-9, lambda r: check_psi_equivariance(ws, r)),
            ("w0-prime", 1e-12, lambda r: check_w0_prime(ws, r)),
        ]
    if name == "star":
        return [
            ("moyal-associativity", 1e-12, lambda r: check_moyal_associativity(ws, r)),
            ("moyal-weyl-homomorphism", 1e-12, lambda r: check_moyal_weyl(ws, r)),
            ("star-routes", 1e-12, lambda r: check_star_routes(ws, r)),
            ("gaussian-star-series", 1e-10, lambda r: check_gaussian_star_series(ws, r)),
            ("gaussian-sigma-route", 1e-10, lambda r: check_gaussian_sigma_route(ws, r)),
            ("star-exp-taylor", 1e-9, lambda r: check_star_exp_taylor(ws, r)),
            ("star-exp-moyal", 1e-9, lambda r: check_star_exp_moyal(ws, r)),
            ("star-exp-quadratic", 1e-12, lambda r: check_star_exp_quadratic(ws, r)),
        ]
    raise ValueError(f"unknown suite {name!r}; expected one of {SUITES + ('all',)}")


def run_suite(name: str, cfg: Config) -> list[CheckRecord]:
    """Run one suite; every check gets its own generator seeded by ``(seed, suite, index)``."""
    suite_index = SUITES.index(name) if name in SUITES else None
    checks = _suite_checks(name, cfg)
    override = cfg.tolerances.get(name)
    records = []
    for i, (cname, tol, thunk) in enumerate(checks):
        rng = np.random.default_rng([cfg.seed, suite_index, i])
        t0 = time.perf_counter()
        try:
            out = thunk(rng)
            err = None
        except FockWeylError as exc:
            out, err = None, f"{type(exc).__name__}: {exc}"
        elapsed = time.perf_counter() - t0 if cfg.timing else 0.0
        if err is not None:
            records.append(CheckRecord(cname, 0, math.inf, override if override is not None else (tol or 0.0), elapsed, err))
        elif isinstance(out, list):
            share = elapsed / len(out)
            for sub, samples, resid, sub_tol in out:
                records.append(CheckRecord(sub, samples, float(resid), override if override is not None else sub_tol, share))
        else:
            samples, resid = out
            records.append(CheckRecord(cname, samples, float(resid), override if override is not None else tol, elapsed))
    return records


def run(names, cfg: Config, jobs: int = 1) -> dict:
    """Run the selected suites and assemble the JSON report; unselected suites are listed as skipped."""
    names = list(SUITES) if "all" in names else list(names)
    for name in names:
        if name not in SUITES:
            raise ValueError(f"unknown suite {name!r}; expected one of {SUITES + ('all',)}")
    if jobs > 1:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            results = dict(zip(names, pool.map(lambda s: run_suite(s, cfg), names)))
    else:
        results = {s: run_suite(s, cfg) for s in names}
    suites = {}
    all_records = []
    for s in SUITES:
        if s in results:
            recs = results[s]
            all_records.extend(recs)
            suites[s] = {"status": "ran", "pass": all(r.passed for r in recs), "checks": [r.to_json() for r in recs]}
        else:
            suites[s] = {"status": "skipped", "reason": "not selected"}
    passed = sum(r.passed for r in all_records)
    return {
        "schema": SCHEMA_VERSION,
        "config": cfg.to_json(),
        "suites": suites,
        "summary": {
            "checks": len(all_records),
            "passed": passed,
            "failed": len(all_records) - passed,
            "pass": passed == len(all_records),
        },
    }


def report_to_text(report: dict) -> str:
    return json.dumps(report, indent=2, sort_keys=False)
