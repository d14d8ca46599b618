"""Star products on polynomials and star exponentials.

``P^l(f, g)`` is the ``l``-th bidifferential term built from the coupling
``Lambda = [[0, I], [-I, 0]]`` in the coordinates ``u = (x, y)``.  Expanding the
``l``-fold contraction by multinomials gives

    P^l(f, g) = sum_{|r| + |s| = l} l!/(r! s!) (-1)^|s| (d_x^r d_y^s f)(d_x^s d_y^r g).

The Moyal product is ``sum_l (-i/2)^l / l! P^l``; ``star1`` uses ``(-i/(2 lam))^l`` and
``star0`` is ``star1`` transported along ``j(x, y) = x + iy``.  Each product also has a
second route through operator composition, so the expansions can be checked against
an independent path.
"""

from __future__ import annotations

import functools
import itertools
import math
from dataclasses import dataclass

import numpy as np

from .algebra import (
    DiffOp,
    PolyXY,
    PolyZ,
    diffop_compose,
    mi_degree,
    mi_factorial,
    multi_indices_of_degree,
    pullback_j,
    pushforward_j,
    weyl_quantize_poly,
)
from .errors import DegenerateB, DomainError, OrderTooLarge, SingularProduct
from .group import WeightSystem

MAX_SERIES_ORDER = 12
COS_EPS = 1e-8
SINGULAR_EPS = 1e-10


def _lam(lam_or_ws) -> float:
    if isinstance(lam_or_ws, WeightSystem):
        return lam_or_ws.lam
    lam = float(lam_or_ws)
    if not lam > 0:
        raise ValueError(f"lambda must be positive, got {lam}")
    return lam


def _pairs(l: int, n: int):
    """All ``(r, s)`` multi-index pairs with ``|r| + |s| = l``."""
    for rs in multi_indices_of_degree(2 * n, l):
        yield rs[:n], rs[n:]


# ---------------------------------------------------------------------------
# bidifferential terms and products


def moyal_Pl(f: PolyXY, g: PolyXY, l: int) -> PolyXY:
    """The ``l``-th bidifferential term ``P^l(f, g)``."""
    if l < 0:
        raise ValueError(f"l must be non-negative, got {l}")
    if f.dim != g.dim:
        raise ValueError("dimension mismatch")
    if l > min(f.degree(), g.degree()):
        return PolyXY.zero(f.dim)
    out = PolyXY.zero(f.dim)
    for r, s in _pairs(l, f.dim):
        df = f.diff(r, s)
        if not df:
            continue
        dg = g.diff(s, r)
        if not dg:
            continue
        coef = math.factorial(l) / (mi_factorial(r) * mi_factorial(s)) * (-1) ** mi_degree(s)
        out = out + (df * dg).scale(coef)
    return out


def _bidiff_series(f, g, h: complex, sign_first: bool):
    """``sum_{r,s} h^(|r|+|s|) (-1)^|r or s| / (r! s!) (D1^r D2^s f)(D1^s D2^r g)``.

    ``D1``, ``D2`` differentiate the first and second variable block.  With the sign on
    ``s`` and ``h = -i/2`` this is the Moyal expansion; with the sign on ``r`` and
    ``h = 1/lam`` on PolyZ it is the ``*_0`` expansion ``exp(lam^-1 (d_zb (x) d_z - d_z (x) d_zb))``.
    """
    # The operator is a product over coordinates, so each monomial pair contributes the
    # outer product of one-dimensional tables.
    acc: dict = {}
    for (p1, q1), c1 in f.terms.items():
        for (p2, q2), c2 in g.terms.items():
            base = c1 * c2
            for mono, w in _bidiff_pair(p1, q1, p2, q2, h, sign_first):
                acc[mono] = acc.get(mono, 0j) + base * w
    return f._new(acc)


@functools.lru_cache(maxsize=1 << 17)
def _bidiff_pair(p1, q1, p2, q2, h: complex, sign_first: bool) -> tuple:
    """All ``(monomial, weight)`` contributions of one monomial pair."""
    tables = [_bidiff_1d(p1[k], q1[k], p2[k], q2[k], h, sign_first) for k in range(len(p1))]
    out = []
    for combo in itertools.product(*tables):
        w = 1.0
        for _, _, wk in combo:
            w *= wk
        out.append(((tuple(e for e, _, _ in combo), tuple(e for _, e, _ in combo)), w))
    return tuple(out)


@functools.lru_cache(maxsize=None)
def _bidiff_1d(p1: int, q1: int, p2: int, q2: int, h: complex, sign_first: bool) -> tuple:
    """One-coordinate terms ``(first exponent, second exponent, weight)`` of ``_bidiff_series``."""
    out = []
    for r in range(min(p1, q2) + 1):
        for s in range(min(q1, p2) + 1):
            w = (-1) ** (r if sign_first else s) * h ** (r + s) / (math.factorial(r) * math.factorial(s))
            w *= math.perm(p1, r) * math.perm(q1, s) * math.perm(p2, s) * math.perm(q2, r)
            out.append((p1 + p2 - r - s, q1 + q2 - s - r, w))
    return tuple(out)


def _expansion(f: PolyXY, g: PolyXY, h: complex) -> PolyXY:
    return _bidiff_series(f, g, h, sign_first=False)


def weyl_symbol_of_diffop(D: DiffOp) -> PolyXY:
    """Inverse of the classical Weyl quantization on polynomial differential operators.

    ``W(x^a y^s) = i^|s| x^a d^s + (terms of total degree lower by an even amount)``, so
    the inverse peels off the top-degree part repeatedly.
    """
    n = D.dim
    rest = dict(D.terms)
    out: dict = {}
    while rest:
        top = max(sum(a) + sum(s) for a, s in rest)
        layer = {(a, s): c * (-1j) ** sum(s) for (a, s), c in rest.items() if sum(a) + sum(s) == top}
        out.update(layer)
        for key, c in weyl_quantize_poly(PolyXY(layer, n)).terms.items():
            rest[key] = rest.get(key, 0j) - c
        # the top layer cancels exactly in exact arithmetic; drop any rounding residue
        rest = {k: v for k, v in rest.items() if v != 0 and sum(k[0]) + sum(k[1]) < top}
    return PolyXY(out, n)


def moyal(f: PolyXY, g: PolyXY, method: str = "expansion") -> PolyXY:
    """``f *_M g``; ``method="operator"`` computes ``W^{-1}(W(f) W(g))`` instead."""
    if method == "expansion":
        return _expansion(f, g, -0.5j)
    if method == "operator":
        return weyl_symbol_of_diffop(diffop_compose(weyl_quantize_poly(f), weyl_quantize_poly(g)))
    raise ValueError(f"unknown method {method!r}")


def star1(f: PolyXY, g: PolyXY, lam_or_ws, method: str = "expansion") -> PolyXY:
    """``f *_1 g``; ``method="scaling"`` uses ``(f^lam *_M g^lam)_lam`` with ``f_lam(x, y) = f(x, lam y)``."""
    lam = _lam(lam_or_ws)
    if method == "expansion":
        return _expansion(f, g, -0.5j / lam)
    if method == "scaling":
        return moyal(f.scale_y(1.0 / lam), g.scale_y(1.0 / lam)).scale_y(lam)
    raise ValueError(f"unknown method {method!r}")


def star0(F: PolyZ, G: PolyZ, lam_or_ws, method: str = "expansion") -> PolyZ:
    """``F *_0 G`` on polynomials in ``(z, zb)``.

    ``method="expansion"`` applies the bidifferential series in ``(z, zb)``, which is the
    ``star1`` expansion rewritten with ``d_x = d_z + d_zb`` and ``d_y = i(d_z - d_zb)``;
    ``method="pullback"`` literally pulls back along ``j``, applies ``star1`` and pushes
    forward; ``method="operator"`` composes the differential operators whose ``W0``
    symbols are ``F`` and ``G``.
    """
    lam = _lam(lam_or_ws)
    if method == "expansion":
        return _bidiff_series(F, G, 1.0 / lam, sign_first=True)
    if method == "pullback":
        return pushforward_j(star1(pullback_j(F), pullback_j(G), lam))
    if method == "operator":
        from .correspondences import weyl0_diffop, weyl0_inverse

        return weyl0_diffop(weyl0_inverse(F, lam) @ weyl0_inverse(G, lam), lam)
    raise ValueError(f"unknown method {method!r}")


def _product(kind: str, lam: float | None):
    if kind == "moyal":
        return moyal
    if kind == "star1":
        return lambda f, g: star1(f, g, lam)
    if kind == "star0":
        return lambda f, g: star0(f, g, lam)
    raise ValueError(f"unknown product kind {kind!r}")


# ---------------------------------------------------------------------------
# formal series in s


@dataclass(frozen=True)
class FormalSeries:
    """Truncated power series ``sum_k coefficients[k] s^k`` with polynomial coefficients."""

    coefficients: tuple
    order: int

    def __post_init__(self):
        coeffs = tuple(self.coefficients)
        if len(coeffs) != self.order + 1:
            raise ValueError(f"expected {self.order + 1} coefficients, got {len(coeffs)}")
        object.__setattr__(self, "coefficients", coeffs)

    def __getitem__(self, k: int):
        return self.coefficients[k]

    def __add__(self, other: FormalSeries) -> FormalSeries:
        order = min(self.order, other.order)
        return FormalSeries([a + b for a, b in zip(self.coefficients, other.coefficients)][: order + 1], order)

    def multiply(self, other: FormalSeries, product) -> FormalSeries:
        """Cauchy product truncated at the lower order, with coefficient product ``product``."""
        order = min(self.order, other.order)
        zero = self.coefficients[0] - self.coefficients[0]
        out = []
        for k in range(order + 1):
            acc = zero
            for i in range(k + 1):
                acc = acc + product(self.coefficients[i], other.coefficients[k - i])
            out.append(acc)
        return FormalSeries(out, order)

    def derivative(self) -> FormalSeries:
        """Term-wise ``d/ds``; the order drops by one."""
        if self.order == 0:
            return FormalSeries([self.coefficients[0] - self.coefficients[0]], 0)
        return FormalSeries([c.scale(k) for k, c in enumerate(self.coefficients) if k > 0], self.order - 1)

    def integrate(self) -> FormalSeries:
        """Term-wise antiderivative vanishing at ``s = 0``; the order rises by one."""
        zero = self.coefficients[0] - self.coefficients[0]
        return FormalSeries([zero] + [c.scale(1.0 / (k + 1)) for k, c in enumerate(self.coefficients)], self.order + 1)

    def evaluate(self, *point) -> np.ndarray:
        """Coefficient values at a point (``z`` for PolyZ, ``x, y`` for PolyXY)."""
        return np.array([c(*point) for c in self.coefficients])


def star_exp_series(P, order: int, kind: str = "star0", lam_or_ws=1.0) -> FormalSeries:
    """Series of ``exp_*(sP)``: the coefficient of ``s^k`` is ``P^{*k} / k!``."""
    if order > MAX_SERIES_ORDER:
        raise OrderTooLarge(f"order={order} exceeds the limit {MAX_SERIES_ORDER}")
    if order < 0:
        raise ValueError(f"order must be non-negative, got {order}")
    lam = None if kind == "moyal" else _lam(lam_or_ws)
    prod = _product(kind, lam)
    power = type(P).constant(1.0, P.dim)
    coeffs = [power]
    for k in range(1, order + 1):
        power = prod(power, P)
        coeffs.append(power.scale(1.0 / math.factorial(k)))
    return FormalSeries(coeffs, order)


# ---------------------------------------------------------------------------
# closed-form star exponentials


def star_exp_polynomial(c0: float, a, b, n: int | None = None) -> PolyZ:
    """``P(z) = i c0 + conj(a).z - a.conj(z) + i sum b_k |z_k|^2`` as a PolyZ."""
    a = np.atleast_1d(np.asarray(a, dtype=complex))
    b = np.atleast_1d(np.asarray(b, dtype=float))
    n = len(a) if n is None else n
    P = PolyZ.constant(1j * c0, n)
    for k in range(n):
        zk, zbk = PolyZ.z(k, n), PolyZ.zb(k, n)
        P = P + zk.scale(np.conj(a[k])) - zbk.scale(a[k]) + (zk * zbk).scale(1j * b[k])
    return P


def _check_b(b, lam: float):
    if np.any(b == 0):
        k = int(np.flatnonzero(b == 0)[0])
        raise DegenerateB(f"b[{k}] = 0; use star_exp_series instead")
    cos = np.cos(b / lam)
    bad = np.abs(cos) <= COS_EPS
    if np.any(bad):
        k = int(np.flatnonzero(bad)[0])
        raise DomainError(f"cos(b[{k}]/lambda) = {cos[k]:.3g} is too close to zero")


def _star_exp_closed_scaled(s, c0, a, b, z, lam):
    """Closed form of ``exp_*0(sP)`` written holomorphically in ``s`` (``a`` and ``conj a``
    enter as independent linear factors), so it can be evaluated at complex ``s``."""
    s = np.asarray(s, dtype=complex)[..., None]
    sb = s * b
    tan = np.tan(sb / lam)
    abs_a2 = np.abs(a) ** 2
    abs_z2 = np.abs(z) ** 2
    lin = z * np.conj(a) - a * np.conj(z)
    expo = (
        1j * s[..., 0] * c0
        + 1j * lam * np.sum(s * s * abs_a2 * (-1.0 / (lam * sb) + tan / sb**2), axis=-1)
        + 1j * lam * np.sum(abs_z2 * tan, axis=-1)
        + lam * np.sum(s * tan / sb * lin, axis=-1)
    )
    return np.exp(expo) / np.prod(np.cos(sb / lam), axis=-1)


def star_exp_closed(c0: float, a, b, z, lam_or_ws) -> complex:
    """Closed form of ``exp_*0(P)`` for ``P = i c0 + conj(a).z - a.conj(z) + i sum b_k |z_k|^2``."""
    lam = _lam(lam_or_ws)
    a = np.atleast_1d(np.asarray(a, dtype=complex))
    b = np.atleast_1d(np.asarray(b, dtype=float))
    z = np.atleast_1d(np.asarray(z, dtype=complex))
    _check_b(b, lam)
    return complex(_star_exp_closed_scaled(1.0, float(c0), a, b, z, lam))


def star_exp_moyal_closed(c0: float, u, v, b, x, y) -> complex:
    """Closed form of ``exp_*M(P)`` for ``P = i c0 + 2i(-v.x + u.y) + i sum b_k (x_k^2 + y_k^2)``."""
    u, v, b, x, y = (np.atleast_1d(np.asarray(t, dtype=float)) for t in (u, v, b, x, y))
    _check_b(b, 1.0)
    tan = np.tan(b)
    expo = (
        1j * c0
        + 1j * np.sum((u**2 + v**2) * (tan / b**2 - 1.0 / b))
        + 1j * np.sum((x**2 + y**2) * tan)
        + 2j * np.sum(tan / b * (y * u - v * x))
    )
    return complex(np.exp(expo) / np.prod(np.cos(b)))


def star_exp_moyal_polynomial(c0: float, u, v, b) -> PolyXY:
    u, v, b = (np.atleast_1d(np.asarray(t, dtype=float)) for t in (u, v, b))
    n = len(b)
    P = PolyXY.constant(1j * c0, n)
    for k in range(n):
        xk, yk = PolyXY.x(k, n), PolyXY.y(k, n)
        P = P + xk.scale(-2j * v[k]) + yk.scale(2j * u[k]) + (xk * xk + yk * yk).scale(1j * b[k])
    return P


def closed_form_taylor(c0: float, a, b, z, lam_or_ws, order: int, points: int = 64) -> np.ndarray:
    """Taylor coefficients in ``s`` of ``exp_*0(sP)(z)`` from the closed form.

    Uses the Cauchy integral on a circle of radius half the distance to the nearest pole
    ``|s| = pi lam / (2 max|b_k|)``, capped at 1, with ``points`` equally spaced nodes.
    """
    lam = _lam(lam_or_ws)
    a = np.atleast_1d(np.asarray(a, dtype=complex))
    b = np.atleast_1d(np.asarray(b, dtype=float))
    z = np.atleast_1d(np.asarray(z, dtype=complex))
    _check_b(b, lam)
    radius = min(1.0, 0.5 * math.pi * lam / (2 * np.max(np.abs(b))))
    theta = 2 * math.pi * np.arange(points) / points
    vals = _star_exp_closed_scaled(radius * np.exp(1j * theta), float(c0), a, b, z, lam)
    fft = np.fft.fft(vals) / points
    return fft[: order + 1] / radius ** np.arange(order + 1)


# ---------------------------------------------------------------------------
# Gaussians


def gaussian_star0(u, v, lam_or_ws=1.0) -> tuple[complex, np.ndarray]:
    """``exp(-sum u_k|z_k|^2) *_0 exp(-sum v_k|z_k|^2) = pref * exp(sum e_k |z_k|^2)``.

    Returns ``(pref, e)`` with ``pref = prod (1 + u_k v_k / lam^2)^{-1}`` and
    ``e_k = -(u_k + v_k) / (1 + u_k v_k / lam^2)``.
    """
    lam = _lam(lam_or_ws)
    u = np.atleast_1d(np.asarray(u, dtype=complex))
    v = np.atleast_1d(np.asarray(v, dtype=complex))
    den = 1 + u * v / lam**2
    bad = np.abs(den) < SINGULAR_EPS
    if np.any(bad):
        k = int(np.flatnonzero(bad)[0])
        raise SingularProduct(f"1 + u[{k}] v[{k}] / lambda^2 = {den[k]:.3g} is too close to zero")
    return complex(np.prod(1 / den)), -(u + v) / den


def gaussian_series_lhs(i: int, j: int, lam_or_ws=1.0) -> PolyZ:
    """Coefficient of ``u^i v^j`` in ``exp(-u|z|^2) *_0 exp(-v|z|^2)`` (n = 1), computed with ``star0``."""
    r2 = PolyZ.z(0, 1) * PolyZ.zb(0, 1)
    return star0(r2**i, r2**j, lam_or_ws).scale((-1) ** (i + j) / (math.factorial(i) * math.factorial(j)))


def gaussian_series_rhs(i: int, j: int, lam_or_ws=1.0) -> PolyZ:
    """Coefficient of ``u^i v^j`` in ``(1 + w)^{-1} exp(-(u + v)|z|^2 / (1 + w))``, ``w = uv/lam^2``.

    Rewritten as ``sum_l (-(u + v)|z|^2)^l / l! (1 + w)^{-(l+1)}`` and expanded binomially.
    """
    lam = _lam(lam_or_ws)
    r2 = PolyZ.z(0, 1) * PolyZ.zb(0, 1)
    out = PolyZ.zero(1)
    for m in range(min(i, j) + 1):
        l = i + j - 2 * m
        coef = (-1) ** l / math.factorial(l) * math.comb(l, i - m) * (-1) ** m * math.comb(l + m, m) / lam ** (2 * m)
        out = out + (r2**l).scale(coef)
    return out
