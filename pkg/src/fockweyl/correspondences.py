"""Symbol maps: Berezin ``S``, double symbol ``s``, complex Weyl ``W0`` and Schrodinger ``W1``.

``W0(A)(z) = Tr(A Omega0(z))`` is computed three ways for Gaussian-kernel operators:

* trace form -- exact composition with the quantizer followed by the closed trace;
* integral form -- ``2^n int k_A(z+w, z-w) exp(lam/2(-|z|^2 - |w|^2 + z.conj(w) - conj(z).w)) dmu_lam(w)``
  evaluated by quadrature;
* closed forms for special families (``pi(g)``, ``z^p d^q``, ``dpi(X)``).
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass
from itertools import combinations_with_replacement

import numpy as np

from .algebra import DiffOp, PolyXY, PolyZ, mi_factorial, mi_le, mi_sub, multi_indices, pullback_j
from .errors import DomainError, NotTraceClass
from .fock_numeric import QuadratureGrid, auto_envelope_integral_Cn
from .gaussian import (
    PD_THRESHOLD,
    GaussianIntegralSpec,
    GaussianKernelOp,
    gk_adjoint,
    gk_compose,
    gk_evaluate,
    gk_trace,
    quad_form,
    sqrt_det,
)
from .group import GroupElement, LieElement, WeightSystem, act_on_Cn, group_inverse
from .representation import bargmann_conjugate_diffop, omega0_kernel, pi_kernel

DOMAIN_EPS = 1e-8


def _as_points(z, n: int) -> np.ndarray:
    z = np.asarray(z, dtype=complex)
    if z.ndim == 0:
        z = z.reshape(1)
    if z.shape[-1] != n:
        raise ValueError(f"points must have trailing dimension {n}, got shape {z.shape}")
    return z


# ---------------------------------------------------------------------------
# Berezin calculus


def berezin_symbol(k: GaussianKernelOp, z) -> np.ndarray:
    """``S(A)(z) = k(z, z) exp(-lam|z|^2/2)``."""
    z = _as_points(z, k.n)
    return gk_evaluate(k, z, z) * np.exp(-0.5 * k.lam * np.sum(np.abs(z) ** 2, axis=-1))


def double_symbol(k: GaussianKernelOp, z, w) -> np.ndarray:
    """``s(A)(z, w) = k(z, w) / <e_w, e_z>`` with ``<e_w, e_z> = exp(lam z.conj(w)/2)``."""
    z = _as_points(z, k.n)
    w = _as_points(w, k.n)
    return gk_evaluate(k, z, w) * np.exp(-0.5 * k.lam * np.sum(z * np.conj(w), axis=-1))


def berezin_pi_closed(g: GroupElement, z, ws: WeightSystem) -> np.ndarray:
    """Berezin symbol of ``pi(g)`` in closed form from the diagonal kernel."""
    lam = ws.lam
    z = _as_points(z, ws.n)
    inv = ws.torus(-g.t)
    expo = (
        0.5 * lam * (z @ np.conj(g.z0))
        + 0.5 * lam * np.sum(np.conj(z) * inv * (z - g.z0), axis=-1)
        - 0.5 * lam * np.sum(np.abs(z) ** 2, axis=-1)
        - 0.25 * lam * np.vdot(g.z0, g.z0).real
    )
    return ws.chi(g.t) * np.exp(1j * lam * g.c0) * np.exp(expo)


def berezin_diffop(D: DiffOp, lam: float) -> PolyZ:
    """Berezin symbol of ``sum c z^p d^q``: ``sum c z^p (lam conj(z)/2)^q``."""
    return PolyZ({(p, q): c * (lam / 2) ** sum(q) for (p, q), c in D.terms.items()}, D.dim)


# ---------------------------------------------------------------------------
# complex Weyl symbol: trace and integral forms


def weyl0_symbol_trace(k: GaussianKernelOp, z) -> complex:
    """``Tr(A Omega0(z))`` through exact composition and trace (raises ``NotTraceClass``)."""
    z = np.atleast_1d(np.asarray(z, dtype=complex))
    ws = WeightSystem(np.zeros((1, k.n)), [0.0], k.lam)
    return gk_trace(gk_compose(k, omega0_kernel(z, ws)))


def weyl0_gaussian(k: GaussianKernelOp, z) -> np.ndarray:
    """Vectorized trace form of ``W0`` for a Gaussian-kernel operator.

    With ``B = lam/4 I + Q^T/2`` (independent of ``z``):
    ``W0(z) = c 2^n (lam/2)^n DetN(B)^{-1/2} exp(-lam|z|^2 + 2 conj(z).b + (a + 2Q conj(z))^T B^{-1} (lam z - b)/2)``.
    """
    lam, n = k.lam, k.n
    z = _as_points(z, n)
    zb = np.conj(z)
    B = 0.25 * lam * np.eye(n) + 0.5 * k.Q.T
    zero = np.zeros((n, n))
    N = GaussianIntegralSpec(zero, B, zero, np.zeros(n), np.zeros(n)).N
    R = np.real(N)
    if np.linalg.eigvalsh(0.5 * (R + R.T)).min() <= PD_THRESHOLD:
        raise NotTraceClass("A Omega0(z) is not trace class for this kernel")
    Binv = np.linalg.inv(B)
    a_z = k.a + 2 * zb @ k.Q.T
    b_z = lam * z - k.b
    expo = -lam * np.sum(np.abs(z) ** 2, axis=-1) + 2 * zb @ k.b + 0.5 * quad_form(a_z, Binv, b_z)
    pref = k.c * 2.0**n * (lam / 2) ** n / sqrt_det(N)
    return pref * np.exp(expo)


def weyl0_symbol_integral(A, z, lam: float | None = None, order: int = 40) -> complex:
    """Integral form of ``W0`` by quadrature.

    ``A`` is a :class:`GaussianKernelOp` (envelope-adapted Gauss-Hermite) or a holomorphic
    :class:`DiffOp` ``sum c z^p d^q`` (whose integrand is a polynomial times
    ``exp(-lam|w|^2)``, so the rule is exact for large enough ``order``).
    """
    if isinstance(A, GaussianKernelOp):
        lam = A.lam
        n = A.n
        z = np.atleast_1d(np.asarray(z, dtype=complex))
        if n > 1 and np.count_nonzero(A.Q - np.diag(np.diag(A.Q))) == 0:
            # diagonal kernels make the integrand a product over coordinates
            val = complex(A.c)
            for j in range(n):
                Aj = GaussianKernelOp(1.0, A.a[j : j + 1], A.b[j : j + 1], A.Q[j : j + 1, j : j + 1], lam)
                val *= weyl0_symbol_integral(Aj, z[j : j + 1], order=order)
            return val

        def integrand(w):
            zz = np.broadcast_to(z, w.shape)
            k = gk_evaluate(A, zz + w, zz - w)
            expo = 0.5 * lam * (
                -np.sum(np.abs(zz) ** 2, axis=-1)
                - np.sum(np.abs(w) ** 2, axis=-1)
                + np.sum(zz * np.conj(w), axis=-1)
                - np.sum(np.conj(zz) * w, axis=-1)
            )
            return k * np.exp(expo)

        return 2.0**n * (lam / (2 * math.pi)) ** n * auto_envelope_integral_Cn(integrand, n, order)
    if isinstance(A, DiffOp):
        if lam is None:
            raise ValueError("lam is required for a DiffOp")
        n = A.dim
        z = np.atleast_1d(np.asarray(z, dtype=complex))
        # int f e^{-lam|w|^2} dmu_lam = 2^{-n} int f e^{-(2 lam)|w|^2/2} dmu_{2 lam}
        grid = QuadratureGrid.complex_grid(n, 2 * lam, order)
        w = grid.nodes
        zp, zm = z + w, np.conj(z - w)
        total = np.zeros(w.shape[0], dtype=complex)
        for (p, q), c in A.terms.items():
            total = total + c * np.prod(zp ** np.array(p), axis=-1) * np.prod((0.5 * lam * zm) ** np.array(q), axis=-1)
        return complex(np.sum(grid.weights * total))
    raise TypeError(f"unsupported operator type {type(A).__name__}")


# ---------------------------------------------------------------------------
# closed forms


def weyl0_Apq_poly(p, q, lam: float) -> PolyZ:
    """``W0(z^p d^q) = 2^{-|q|} sum_{k<=p,q} (-1)^|k| p! q! / (k!(p-k)!(q-k)!) lam^{|q|-|k|} z^{p-k} conj(z)^{q-k}``."""
    p, q = tuple(p), tuple(q)
    n = len(p)
    terms = {}
    kmax = tuple(min(a, b) for a, b in zip(p, q))
    for k in multi_indices(n, sum(kmax)):
        if not mi_le(k, kmax):
            continue
        coef = (
            2.0 ** (-sum(q))
            * (-1) ** sum(k)
            * mi_factorial(p)
            * mi_factorial(q)
            / (mi_factorial(k) * mi_factorial(mi_sub(p, k)) * mi_factorial(mi_sub(q, k)))
            * lam ** (sum(q) - sum(k))
        )
        terms[(mi_sub(p, k), mi_sub(q, k))] = coef
    return PolyZ(terms, n)


def weyl0_Apq_closed(p, q, z, ws: WeightSystem) -> np.ndarray:
    return weyl0_Apq_poly(p, q, ws.lam)(_as_points(z, len(tuple(p))))


def weyl0_diffop(D: DiffOp, lam: float) -> PolyZ:
    """``W0`` of a holomorphic polynomial differential operator, term by term."""
    out = PolyZ.zero(D.dim)
    for (p, q), c in D.terms.items():
        out = out + weyl0_Apq_poly(p, q, lam).scale(c)
    return out


def weyl0_inverse(F: PolyZ, lam: float) -> DiffOp:
    """Inverse of :func:`weyl0_diffop` on polynomials.

    ``W0(z^p d^q)`` has leading term ``(lam/2)^|q| z^p conj(z)^q`` plus terms of strictly
    lower degree, so the map is triangular in total degree.
    """
    n = F.dim
    rest = dict(F.terms)
    out: dict = {}
    while rest:
        (p, q) = max(rest, key=lambda key: (sum(key[0]) + sum(key[1]), key))
        c = rest[(p, q)]
        coef = c * (2.0 / lam) ** sum(q)
        out[(p, q)] = out.get((p, q), 0) + coef
        for key, v in weyl0_Apq_poly(p, q, lam).terms.items():
            if key == (p, q):
                continue
            rest[key] = rest.get(key, 0) - coef * v
            if rest[key] == 0:
                del rest[key]
        del rest[(p, q)]
    return DiffOp(out, n)


def _check_pi_domain(alpha: np.ndarray):
    for k, a in enumerate(alpha):
        shifted = a - math.pi
        dist = abs(shifted - 2 * math.pi * round(shifted / (2 * math.pi)))
        if dist <= DOMAIN_EPS:
            raise DomainError(f"alpha_{k + 1}(t) = {a!r} is within {DOMAIN_EPS} of pi + 2 pi Z")


def weyl0_pi_closed(g: GroupElement, z, ws: WeightSystem, form: str = "det") -> np.ndarray:
    """Closed forms of ``W0(pi(g))(z)``.

    ``form="det"``::

        2^n chi e^{i lam c0} Det(I + A(-t))^{-1} exp(-lam (A(-t)z0).conj(z) - lam|z|^2 - lam|z0|^2/4)
            * exp(lam/2 (A(-t)z0 + 2z)^T (I + A(t))^{-1} conj(A(-t)z0 + 2z))

    ``form="product"`` writes the same value coordinatewise with
    ``prod_k (1 + e^{-i alpha_k})^{-1}`` and ``|e^{-i alpha_k} z0_k + 2 z_k|^2``.
    """
    alpha = ws.angles(g.t)
    _check_pi_domain(alpha)
    lam, n = ws.lam, ws.n
    z = _as_points(z, n)
    pref = 2.0**n * ws.chi(g.t) * np.exp(1j * lam * g.c0)
    if form == "det":
        Ainv = np.diag(np.exp(-1j * alpha))
        At = np.diag(np.exp(1j * alpha))
        I = np.eye(n)
        v = Ainv @ g.z0
        vz = v + 2 * z
        first = -lam * (np.conj(z) @ v) - lam * np.sum(np.abs(z) ** 2, axis=-1) - 0.25 * lam * np.vdot(g.z0, g.z0).real
        second = 0.5 * lam * quad_form(vz, np.linalg.inv(I + At), np.conj(vz))
        return pref / np.linalg.det(I + Ainv) * np.exp(first + second)
    if form == "product":
        e = np.exp(1j * alpha)
        v = np.conj(e) * g.z0
        first = -lam * (np.conj(z) @ v) - lam * np.sum(np.abs(z) ** 2, axis=-1) - 0.25 * lam * np.sum(np.abs(g.z0) ** 2)
        second = 0.5 * lam * (np.abs(v + 2 * z) ** 2) @ (1.0 / (1.0 + e))
        return pref * np.prod(1.0 / (1.0 + np.conj(e))) * np.exp(first + second)
    raise ValueError(f"unknown form {form!r}")


def weyl0_dpi_poly(X: LieElement, ws: WeightSystem) -> PolyZ:
    """``W0(dpi(X)) = i<beta,t> + i lam c + lam/2 (conj(u).z - conj(z).u) + i/2 sum alpha_k(t)(1 - lam|z_k|^2)``."""
    n, lam = ws.n, ws.lam
    alpha = ws.angles(X.t)
    zero = (0,) * n
    terms = {(zero, zero): 1j * float(ws.beta @ X.t) + 1j * lam * X.c + 0.5j * float(np.sum(alpha))}
    for k in range(n):
        e = tuple(int(i == k) for i in range(n))
        terms[(e, zero)] = 0.5 * lam * np.conj(X.u[k])
        terms[(zero, e)] = -0.5 * lam * X.u[k]
        terms[(e, e)] = -0.5j * lam * alpha[k]
    return PolyZ(terms, n)


def berezin_dpi_poly(X: LieElement, ws: WeightSystem) -> PolyZ:
    """``S(dpi(X)) = i<beta,t> + i lam c + lam/2 (conj(u).z - conj(z).u) - i lam/2 conj(z).(alpha(t) z)``."""
    n, lam = ws.n, ws.lam
    alpha = ws.angles(X.t)
    zero = (0,) * n
    terms = {(zero, zero): 1j * float(ws.beta @ X.t) + 1j * lam * X.c}
    for k in range(n):
        e = tuple(int(i == k) for i in range(n))
        terms[(e, zero)] = 0.5 * lam * np.conj(X.u[k])
        terms[(zero, e)] = -0.5 * lam * X.u[k]
        terms[(e, e)] = -0.5j * lam * alpha[k]
    return PolyZ(terms, n)


def weyl0_dpi(X: LieElement, z, ws: WeightSystem) -> np.ndarray:
    return weyl0_dpi_poly(X, ws)(_as_points(z, ws.n))


def berezin_dpi(X: LieElement, z, ws: WeightSystem) -> np.ndarray:
    return berezin_dpi_poly(X, ws)(_as_points(z, ws.n))


# ---------------------------------------------------------------------------
# Schrodinger side


def weyl1_symbol(k_fock: GaussianKernelOp, a, b) -> complex:
    """``W1(A)(a, b) = W0(B A B^{-1})(a + ib)``; ``k_fock`` is the Fock-side conjugate ``B A B^{-1}``."""
    a = np.atleast_1d(np.asarray(a, dtype=float))
    b = np.atleast_1d(np.asarray(b, dtype=float))
    return weyl0_symbol_trace(k_fock, a + 1j * b)


def weyl1_diffop(D: DiffOp, lam: float) -> PolyXY:
    """``W1`` of a polynomial differential operator on ``R^n``, as a polynomial in ``(x, y)``."""
    return pullback_j(weyl0_diffop(bargmann_conjugate_diffop(D, lam), lam))


def weyl1_direct_from_fock(k_fock: GaussianKernelOp, a, b, order: int = 40, inner_order: int = 40) -> complex:
    """Quadrature oracle for ``W1``: Schrodinger kernel by Bargmann conjugation, then the
    Wigner-type trace ``2^n int K(a+w, a-w) exp(2i lam b.w) dw``."""
    from .representation import conjugated_kernel_oracle, weyl1_direct

    def K_eval(x, y):
        x = np.atleast_2d(x)
        y = np.atleast_2d(y)
        return np.array([conjugated_kernel_oracle(k_fock, xi, yi, inner_order) for xi, yi in zip(x, y)])

    return weyl1_direct(K_eval, a, b, k_fock.lam, order)


# ---------------------------------------------------------------------------
# Stratonovich-Weyl axioms


@dataclass
class AxiomCheck:
    name: str
    samples: int
    max_abs_residual: float
    wall_time: float

    def to_json(self) -> dict:
        return {
            "name": self.name,
            "samples": self.samples,
            "max_abs_residual": self.max_abs_residual,
            "wall_time": self.wall_time,
        }


def conjugate_by_pi(k: GaussianKernelOp, g: GroupElement, ws: WeightSystem) -> GaussianKernelOp:
    """``pi(g)^{-1} A pi(g)``."""
    p = pi_kernel(g, ws)
    return gk_compose(gk_compose(pi_kernel(group_inverse(g, ws), ws), k), p)


def traciality_integral(k1: GaussianKernelOp, k2: GaussianKernelOp, order: int = 40) -> complex:
    """``int W0(A) W0(B) dmu_lam`` by envelope-adapted quadrature."""
    lam, n = k1.lam, k1.n
    return (lam / (2 * math.pi)) ** n * auto_envelope_integral_Cn(
        lambda z: weyl0_gaussian(k1, z) * weyl0_gaussian(k2, z), n, order
    )


def sw_axioms_check(ops, gs, zs, ws: WeightSystem, order: int = 40) -> list[AxiomCheck]:
    """Residuals of the four Stratonovich-Weyl axioms on the given samples.

    Covariance is tested in the orientation ``W(pi(g)^{-1} A pi(g))(z) = W(A)(g.z)``.
    """
    zs = [np.atleast_1d(np.asarray(z, dtype=complex)) for z in zs]
    out = []

    t0 = time.perf_counter()
    unit = max(abs(gk_trace(omega0_kernel(z, ws)) - 1) for z in zs)
    out.append(AxiomCheck("unit", len(zs), float(unit), time.perf_counter() - t0))

    t0 = time.perf_counter()
    real = 0.0
    for k in ops:
        ka = gk_adjoint(k)
        for z in zs:
            real = max(real, abs(weyl0_symbol_trace(ka, z) - np.conj(weyl0_symbol_trace(k, z))))
    out.append(AxiomCheck("reality", len(ops) * len(zs), float(real), time.perf_counter() - t0))

    t0 = time.perf_counter()
    cov_w = cov_s = 0.0
    count = 0
    for k, g, z in zip(ops, gs, zs):
        kc = conjugate_by_pi(k, g, ws)
        gz = act_on_Cn(g, z, ws)
        lhs, rhs = weyl0_symbol_trace(kc, z), weyl0_symbol_trace(k, gz)
        cov_w = max(cov_w, abs(lhs - rhs) / max(1.0, abs(rhs)))
        lhs, rhs = berezin_symbol(kc, z)[()], berezin_symbol(k, gz)[()]
        cov_s = max(cov_s, abs(lhs - rhs) / max(1.0, abs(rhs)))
        count += 1
    elapsed = time.perf_counter() - t0
    out.append(AxiomCheck("covariance-weyl0", count, float(cov_w), elapsed))
    out.append(AxiomCheck("covariance-berezin", count, float(cov_s), elapsed))

    t0 = time.perf_counter()
    trac = 0.0
    pairs = list(combinations_with_replacement(range(len(ops)), 2))
    for i, j in pairs:
        lhs = traciality_integral(ops[i], ops[j], order)
        rhs = gk_trace(gk_compose(ops[i], ops[j]))
        trac = max(trac, abs(lhs - rhs) / max(1.0, abs(rhs)))
    out.append(AxiomCheck("traciality", len(pairs), float(trac), time.perf_counter() - t0))
    return out
