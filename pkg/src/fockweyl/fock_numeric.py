"""Numerical oracles: truncated Fock bases, Gauss-Hermite quadrature and Hermite functions.

Nothing here uses the closed forms of :mod:`fockweyl.gaussian`; the point of this module is
to provide independent numbers to compare against.
"""

from __future__ import annotations

import functools
import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from numpy.polynomial.hermite import hermgauss

from .algebra import MultiIndex, multi_indices
from .gaussian import GaussianKernelOp, gk_evaluate


@lru_cache(maxsize=None)
def _hermgauss(order: int) -> tuple[np.ndarray, np.ndarray]:
    return hermgauss(order)


# ---------------------------------------------------------------------------
# truncated basis


@dataclass(frozen=True)
class FockBasisSpec:
    """Orthonormal monomials ``phi_p = z^p / ||z^p||`` with ``|p| <= degree``."""

    n: int
    lam: float
    degree: int

    def __post_init__(self):
        if self.n < 1 or self.degree < 0 or not self.lam > 0:
            raise ValueError(f"invalid basis spec n={self.n} lam={self.lam} degree={self.degree}")

    @property
    def indices(self) -> tuple[MultiIndex, ...]:
        return multi_indices(self.n, self.degree)

    @property
    def size(self) -> int:
        return len(self.indices)

    def norms(self) -> np.ndarray:
        """``||z^p|| = sqrt((2/lam)^|p| p!)`` in basis order."""
        return np.array(
            [math.sqrt((2.0 / self.lam) ** sum(p) * math.prod(math.factorial(k) for k in p)) for p in self.indices]
        )

    def basis_values(self, z) -> np.ndarray:
        """``phi_p(z)`` for all ``p``; shape ``z.shape[:-1] + (size,)``."""
        z = np.asarray(z, dtype=complex)
        P = np.array(self.indices)
        mono = np.prod(z[..., None, :] ** P, axis=-1)
        return mono / self.norms()


@dataclass(frozen=True)
class FockMatrix:
    """Dense compression ``(<A phi_q, phi_p>)_{p, q}`` in graded lexicographic order."""

    spec: FockBasisSpec
    entries: np.ndarray

    def __matmul__(self, other: FockMatrix) -> FockMatrix:
        return FockMatrix(self.spec, self.entries @ other.entries)

    def trace(self) -> complex:
        return complex(np.trace(self.entries))

    def to_json(self) -> dict:
        return {
            "basis": {
                "n": self.spec.n,
                "lambda": self.spec.lam,
                "degree": self.spec.degree,
                "ordering": "graded-lex",
                "indices": [list(p) for p in self.spec.indices],
            },
            "re": self.entries.real.tolist(),
            "im": self.entries.imag.tolist(),
        }


def coherent_coeffs(z, spec: FockBasisSpec) -> np.ndarray:
    """``<e_z, phi_p> = (lam/2)^{|p|/2} conj(z)^p / sqrt(p!)``."""
    zb = np.conj(np.atleast_1d(np.asarray(z, dtype=complex)))
    out = np.empty(spec.size, dtype=complex)
    for i, p in enumerate(spec.indices):
        fact = math.prod(math.factorial(k) for k in p)
        out[i] = (spec.lam / 2) ** (sum(p) / 2) * np.prod(zb ** np.array(p)) / math.sqrt(fact)
    return out


# ---------------------------------------------------------------------------
# quadrature


@dataclass(frozen=True)
class QuadratureGrid:
    """Tensor Gauss-Hermite rule.

    ``kind == "Cn"``: nodes in ``C^n`` with weights for ``int f(w) exp(-lam|w|^2/2) dmu_lam(w)``.
    ``kind == "Rn"``: nodes in ``R^n`` with weights for ``int f(x) exp(-|x|^2) dx``.
    """

    kind: str
    order: int
    nodes: np.ndarray
    weights: np.ndarray

    @classmethod
    def complex_grid(cls, n: int, lam: float, order: int, scale: float = 1.0) -> QuadratureGrid:
        """Rule for the Fock measure; ``scale`` rescales nodes (weights stay exact for the base measure).

        With ``scale != 1`` the rule integrates ``f`` against ``exp(-lam|w|^2/2) dmu_lam`` by
        folding the ratio of weights into ``weights``.
        """
        xi, wi = _hermgauss(order)
        r = math.sqrt(2.0 / lam) * scale
        grids = np.meshgrid(*([xi] * (2 * n)), indexing="ij")
        wgrids = np.meshgrid(*([wi] * (2 * n)), indexing="ij")
        pts = np.stack([g.ravel() for g in grids], axis=-1)
        w = np.prod(np.stack([g.ravel() for g in wgrids], axis=-1), axis=-1) / np.pi**n
        nodes = r * (pts[:, :n] + 1j * pts[:, n:])
        if scale != 1.0:
            # int f e^{-lam|w|^2/2} dmu = s^{2n} int f(s w') e^{-lam s^2|w'|^2/2} dmu(w')
            sq = np.sum(pts**2, axis=-1)
            w = w * scale ** (2 * n) * np.exp(sq * (1 - scale**2))
        return cls("Cn", order, nodes, w)

    @classmethod
    def real_grid(cls, n: int, order: int) -> QuadratureGrid:
        xi, wi = _hermgauss(order)
        grids = np.meshgrid(*([xi] * n), indexing="ij")
        wgrids = np.meshgrid(*([wi] * n), indexing="ij")
        nodes = np.stack([g.ravel() for g in grids], axis=-1)
        weights = np.prod(np.stack([g.ravel() for g in wgrids], axis=-1), axis=-1)
        return cls("Rn", order, nodes, weights)

    def integrate(self, f) -> complex:
        return complex(np.sum(self.weights * f(self.nodes)))


def quad_integral_Cn(f, grid: QuadratureGrid) -> complex:
    """Estimate ``int_{C^n} f(w) exp(-lam|w|^2/2) dmu_lam(w)``."""
    if grid.kind != "Cn":
        raise ValueError("quad_integral_Cn needs a complex grid")
    return grid.integrate(f)


def fit_gaussian_envelope(logabs, d: int, center=None, step: float = 1.0) -> tuple[np.ndarray, np.ndarray]:
    """Fit ``log|f(X)| ~ const - (X - m)^T H (X - m)`` by central differences.

    Exact when ``log|f|`` is a quadratic polynomial, which is the case for every
    Gaussian-times-phase integrand.  Returns ``(m, H)``.
    """
    x0 = np.zeros(d) if center is None else np.asarray(center, dtype=float)
    h = step
    e = np.eye(d) * h
    f0 = logabs(x0)
    grad = np.array([(logabs(x0 + e[i]) - logabs(x0 - e[i])) / (2 * h) for i in range(d)])
    hess = np.empty((d, d))
    for i in range(d):
        hess[i, i] = (logabs(x0 + e[i]) - 2 * f0 + logabs(x0 - e[i])) / h**2
        for j in range(i):
            v = (
                logabs(x0 + e[i] + e[j])
                - logabs(x0 + e[i] - e[j])
                - logabs(x0 - e[i] + e[j])
                + logabs(x0 - e[i] - e[j])
            ) / (4 * h * h)
            hess[i, j] = hess[j, i] = v
    H = -0.5 * hess
    m = x0 + np.linalg.solve(H, 0.5 * grad)
    return m, H


def envelope_integral_Rd(f, m: np.ndarray, H: np.ndarray, order: int) -> complex:
    """``int_{R^d} f(X) dX`` by Gauss-Hermite adapted to the envelope ``exp(-(X-m)^T H (X-m))``.

    ``f`` is vectorized over a leading axis of points.  Uses ``X = m + C^{-T} xi`` with
    ``H = C C^T``.
    """
    H = 0.5 * (H + H.T)
    C = np.linalg.cholesky(H)
    xi, w = _envelope_rule(H.shape[0], order)
    # row form of X = m + C^{-T} xi
    X = m + xi @ np.linalg.inv(C)
    return complex(np.sum(w * f(X)) / abs(np.linalg.det(C)))


@functools.lru_cache(maxsize=16)
def _envelope_rule(d: int, order: int) -> tuple[np.ndarray, np.ndarray]:
    """Gauss-Hermite nodes with the weight function divided out, for plain ``int dX``."""
    grid = QuadratureGrid.real_grid(d, order)
    w = grid.weights * np.exp(np.sum(grid.nodes**2, axis=-1))
    nodes = grid.nodes.copy()
    nodes.setflags(write=False)
    w.setflags(write=False)
    return nodes, w


def auto_envelope_integral_Cn(f, n: int, order: int, step: float = 1.0) -> complex:
    """``int_{C^n} f(w) dm(w)`` (Lebesgue) for Gaussian-type ``f`` via a fitted envelope."""

    def to_c(X):
        X = np.asarray(X)
        return X[..., :n] + 1j * X[..., n:]

    def logabs(X):
        return float(np.log(np.abs(f(to_c(X[None, :]))[0])))

    m, H = fit_gaussian_envelope(logabs, 2 * n, step=step)
    if np.linalg.eigvalsh(0.5 * (H + H.T)).min() <= 0:
        raise ValueError("integrand is not Gaussian-dominated")
    return envelope_integral_Rd(lambda X: f(to_c(X)), m, H, order)


# ---------------------------------------------------------------------------
# operator compression


def _taylor_image(k: GaussianKernelOp, spec: FockBasisSpec) -> dict[MultiIndex, np.ndarray]:
    """Truncated power series of ``A z^q`` for all ``|q| <= degree``.

    ``A z^q = c exp(a.z) prod_k L_k(z)^{q_k}`` with ``L(z) = (2/lam)(b + Q^T z)``.
    Series are dense arrays of shape ``(D+1,)*n`` indexed by exponents.
    """
    n, D = spec.n, spec.degree
    shape = (D + 1,) * n
    tot = np.indices(shape).sum(axis=0)
    mask = tot <= D
    s = 2.0 / k.lam
    lin_const = s * k.b
    lin_coef = s * k.Q  # L_k = lin_const[k] + sum_j lin_coef[j, k] z_j

    def times_linear(arr, kk):
        out = lin_const[kk] * arr
        for j in range(n):
            c = lin_coef[j, kk]
            if c != 0:
                shifted = np.zeros_like(arr)
                src = [slice(None)] * n
                dst = [slice(None)] * n
                src[j] = slice(0, D)
                dst[j] = slice(1, D + 1)
                shifted[tuple(dst)] = arr[tuple(src)]
                out = out + c * shifted
        return out * mask

    exp_series = []
    for j in range(n):
        r = np.arange(D + 1)
        exp_series.append(np.array([k.a[j] ** i / math.factorial(i) for i in r], dtype=complex))

    def times_exp(arr):
        out = arr
        for j in range(n):
            T = np.zeros((D + 1, D + 1), dtype=complex)
            for i in range(D + 1):
                T[i:, i] = exp_series[j][: D + 1 - i]
            out = np.moveaxis(np.tensordot(T, np.moveaxis(out, j, 0), axes=(1, 0)), 0, j)
        return out * mask

    base = np.zeros(shape, dtype=complex)
    base[(0,) * n] = 1.0
    powers: dict[MultiIndex, np.ndarray] = {(0,) * n: base}
    for q in spec.indices:
        if q in powers:
            continue
        kk = next(i for i, e in enumerate(q) if e > 0)
        prev = tuple(e - (i == kk) for i, e in enumerate(q))
        powers[q] = times_linear(powers[prev], kk)
    return {q: k.c * times_exp(arr) for q, arr in powers.items()}


def kernel_to_matrix(k: GaussianKernelOp, spec: FockBasisSpec, method: str = "taylor", quad_order: int = 60) -> FockMatrix:
    """Compression of a Gaussian-kernel operator to the truncated basis.

    ``method="taylor"`` extracts Taylor coefficients of ``A z^q`` exactly;
    ``method="quadrature"`` integrates the kernel against basis functions (``n = 1`` only).
    """
    if k.n != spec.n or k.lam != spec.lam:
        raise ValueError("kernel and basis disagree on n or lambda")
    norms = spec.norms()
    idx = spec.indices
    if method == "taylor":
        images = _taylor_image(k, spec)
        M = np.empty((spec.size, spec.size), dtype=complex)
        for j, q in enumerate(idx):
            col = images[q]
            M[:, j] = [col[p] for p in idx]
        M *= norms[:, None] / norms[None, :]
        return FockMatrix(spec, M)
    if method == "quadrature":
        if spec.n != 1:
            raise ValueError("quadrature compression is implemented for n = 1 only")
        grid = QuadratureGrid.complex_grid(1, spec.lam, quad_order)
        w = grid.nodes
        phi = spec.basis_values(w)  # (N, size)
        K = gk_evaluate(k, w[:, None, :], w[None, :, :])
        wt = grid.weights
        M = (np.conj(phi) * wt[:, None]).T @ K @ (phi * wt[:, None])
        return FockMatrix(spec, M)
    raise ValueError(f"unknown method {method!r}")


# ---------------------------------------------------------------------------
# Hermite functions on R^n


def hermite_functions_1d(x, degree: int, lam: float) -> np.ndarray:
    """``h_0 .. h_degree`` at ``x``, orthonormal in ``L^2(R, dx)`` with ``h_0 ~ exp(-lam x^2/2)``."""
    x = np.asarray(x, dtype=float)
    s = math.sqrt(lam) * x
    out = np.empty(x.shape + (degree + 1,))
    out[..., 0] = (lam / math.pi) ** 0.25 * np.exp(-0.5 * s * s)
    if degree >= 1:
        out[..., 1] = math.sqrt(2.0) * s * out[..., 0]
    for j in range(1, degree):
        out[..., j + 1] = math.sqrt(2.0 / (j + 1)) * s * out[..., j] - math.sqrt(j / (j + 1)) * out[..., j - 1]
    return out


def hermite_functions(x, degree: int, lam: float) -> np.ndarray:
    """``h_p(x) = prod_k h_{p_k}(x_k)`` for ``|p| <= degree`` in graded lexicographic order.

    ``x`` has trailing axis ``n``; result has trailing axis of length ``#{|p| <= degree}``.
    """
    x = np.asarray(x, dtype=float)
    n = x.shape[-1]
    tables = [hermite_functions_1d(x[..., k], degree, lam) for k in range(n)]
    cols = []
    for p in multi_indices(n, degree):
        v = tables[0][..., p[0]]
        for k in range(1, n):
            v = v * tables[k][..., p[k]]
        cols.append(v)
    return np.stack(cols, axis=-1)


# Phase relating the two bases: B h_p = BARGMANN_PHASE**|p| * phi_p.  Fixed once by
# transforming h_0 and h_1 (see the test-suite); with the kernel used here it is +1.
BARGMANN_PHASE = 1.0
