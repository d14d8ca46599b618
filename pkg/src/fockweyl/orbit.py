"""The map ``psi: C^n -> g*`` onto the coadjoint orbit through ``xi0`` and the pulled-back ``W0``.

``psi(z) = (beta + 1/2 sum_k (1 - lam|z_k|^2) alpha[:, k], -lam z, lam)`` where the character
``chi(t) = exp(i <beta, t>)`` contributes ``-i dchi = beta``.  Residuals on ``g*`` use the
Euclidean norm on the coordinates ``(s, Re v, Im v, d)``.
"""

from __future__ import annotations

import numpy as np

from .algebra import DiffOp, PolyZ
from .errors import OffOrbit
from .gaussian import GaussianKernelOp
from .group import Covector, GroupElement, LieElement, WeightSystem, act_on_Cn, coadjoint

ORBIT_TOL = 1e-8


def psi_map(z, ws: WeightSystem) -> Covector:
    z = np.atleast_1d(np.asarray(z, dtype=complex))
    if z.shape != (ws.n,):
        raise ValueError(f"z must have shape ({ws.n},), got {z.shape}")
    s = ws.beta + 0.5 * ws.alpha @ (1 - ws.lam * np.abs(z) ** 2)
    return Covector(s, -ws.lam * z, ws.lam)


def base_point(ws: WeightSystem) -> Covector:
    """``xi0 = psi(0)``."""
    return psi_map(np.zeros(ws.n), ws)


def psi_pairing_poly(X: LieElement, ws: WeightSystem) -> PolyZ:
    """``z -> i <psi(z), X>`` as a polynomial, assembled from the components of ``psi``.

    The ``v`` slot is the polynomial vector ``-lam z`` and the pairing
    ``omega(v, u) = -(v.conj(u) - conj(v).u) / (2i)`` is expanded symbolically.
    """
    n, lam = ws.n, ws.lam
    one = PolyZ.constant(1.0, n)
    zs = [PolyZ.z(k, n) for k in range(n)]
    zbs = [PolyZ.zb(k, n) for k in range(n)]
    # s slot: one polynomial per torus coordinate
    s_poly = []
    for j in range(ws.m):
        acc = one.scale(ws.beta[j])
        for k in range(n):
            acc = acc + (one - (zs[k] * zbs[k]).scale(lam)).scale(0.5 * ws.alpha[j, k])
        s_poly.append(acc)
    v_poly = [zk.scale(-lam) for zk in zs]
    vb_poly = [zbk.scale(-lam) for zbk in zbs]
    pair = PolyZ.zero(n)
    for j in range(ws.m):
        pair = pair + s_poly[j].scale(X.t[j])
    for k in range(n):
        pair = pair + (v_poly[k].scale(np.conj(X.u[k])) - vb_poly[k].scale(X.u[k])).scale(-1 / 2j)
    pair = pair + one.scale(lam * X.c)
    return pair.scale(1j)


def psi_equivariance_check(g: GroupElement, z, ws: WeightSystem) -> float:
    """``|psi(g.z) - Ad*(g) psi(z)|``."""
    lhs = psi_map(act_on_Cn(g, z, ws), ws)
    rhs = coadjoint(g, psi_map(z, ws), ws)
    return float(np.linalg.norm(lhs.coords() - rhs.coords()))


def psi_inverse(xi: Covector, ws: WeightSystem) -> np.ndarray:
    """``z = -v / lam`` after checking that ``xi`` lies on the orbit chart."""
    if abs(xi.d - ws.lam) > ORBIT_TOL:
        raise OffOrbit(f"central coordinate d={xi.d} differs from lambda={ws.lam}")
    z = -xi.v / ws.lam
    resid = float(np.linalg.norm(xi.s - psi_map(z, ws).s))
    if resid > ORBIT_TOL:
        raise OffOrbit(f"s-component is inconsistent with v (residual {resid:.3g})")
    return z


def w0_prime(A, xi: Covector, ws: WeightSystem) -> complex:
    """``W0(A)(psi^{-1}(xi))``.

    ``A`` is a GaussianKernelOp, a polynomial DiffOp, a GroupElement (meaning ``pi(g)``),
    a PolyZ symbol, or any callable symbol on ``C^n``.
    """
    from .correspondences import weyl0_diffop, weyl0_gaussian, weyl0_pi_closed

    z = psi_inverse(xi, ws)
    if isinstance(A, GaussianKernelOp):
        return complex(weyl0_gaussian(A, z)[()])
    if isinstance(A, DiffOp):
        return complex(weyl0_diffop(A, ws.lam)(z))
    if isinstance(A, GroupElement):
        return complex(weyl0_pi_closed(A, z, ws)[()])
    if callable(A):
        return complex(np.asarray(A(z))[()])
    raise TypeError(f"unsupported operator type {type(A).__name__}")
