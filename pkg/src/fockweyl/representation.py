"""The generic representation ``pi`` on Fock space and its Schrodinger model ``pi'``.

Fock-side operators are :class:`~fockweyl.gaussian.GaussianKernelOp` values.  On
``L^2(R^n)`` we use :class:`SchrodingerGaussianKernel`, kernels of the form
``c exp(x^T P x + y^T R y + x^T S y + lx.x + ly.y)``.

The Bargmann transform is ``(B phi)(z) = int B(z, x) phi(x) dx`` with
``B(z, x) = (lam/pi)^{n/4} exp(-lam z.z/4 + lam z.x - lam x.x/2)``; it maps the Hermite
function ``h_p`` to ``phi_p = z^p / ||z^p||``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .algebra import DiffOp
from .errors import DomainError
from .fock_numeric import QuadratureGrid, auto_envelope_integral_Cn, _hermgauss
from .gaussian import GaussianKernelOp, quad_form, real_gaussian_integral
from .group import GroupElement, LieElement, WeightSystem

DOMAIN_EPS = 1e-8


# ---------------------------------------------------------------------------
# Fock side


def rho_kernel(z0, c0: float, ws: WeightSystem) -> GaussianKernelOp:
    """Heisenberg part: ``(rho(h) f)(z) = exp(i lam c0 + lam conj(z0).z/2 - lam|z0|^2/4) f(z - z0)``."""
    lam = ws.lam
    z0 = np.atleast_1d(np.asarray(z0, dtype=complex))
    c = np.exp(1j * lam * c0 - 0.25 * lam * np.vdot(z0, z0).real)
    return GaussianKernelOp(c, 0.5 * lam * np.conj(z0), -0.5 * lam * z0, 0.5 * lam * np.eye(ws.n), lam)


def sigma_kernel(t, ws: WeightSystem) -> GaussianKernelOp:
    """Torus part: ``(sigma(t) f)(z) = chi(t) f(A(-t) z)``."""
    lam, n = ws.lam, ws.n
    return GaussianKernelOp(ws.chi(t), np.zeros(n), np.zeros(n), 0.5 * lam * np.diag(ws.torus(-np.asarray(t, float))), lam)


def pi_kernel(g: GroupElement, ws: WeightSystem) -> GaussianKernelOp:
    """``k(z, w) = chi(t) e^{i lam c0} exp(lam conj(z0).z/2 + lam conj(w).A(-t)(z - z0)/2 - lam|z0|^2/4)``."""
    lam = ws.lam
    inv = ws.torus(-g.t)
    c = ws.chi(g.t) * np.exp(1j * lam * g.c0 - 0.25 * lam * np.vdot(g.z0, g.z0).real)
    return GaussianKernelOp(c, 0.5 * lam * np.conj(g.z0), -0.5 * lam * inv * g.z0, 0.5 * lam * np.diag(inv), lam)


def omega0_kernel(z0, ws: WeightSystem) -> GaussianKernelOp:
    """Quantizer ``(Omega0(z0) f)(w) = 2^n exp(lam (w.conj(z0) - |z0|^2)) f(2 z0 - w)``."""
    lam, n = ws.lam, ws.n
    z0 = np.atleast_1d(np.asarray(z0, dtype=complex))
    c = 2.0**n * np.exp(-lam * np.vdot(z0, z0).real)
    return GaussianKernelOp(c, lam * np.conj(z0), lam * z0, -0.5 * lam * np.eye(n), lam)


def dpi_symbolic(X: LieElement, ws: WeightSystem) -> DiffOp:
    """Derived representation as a first-order holomorphic operator.

    ``dpi(X) = i<beta, t> + i lam c + (lam/2) conj(u).z - sum_k (u_k + i alpha_k(t) z_k) d_k``
    (the ``x`` slot of the returned :class:`DiffOp` is ``z``).
    """
    n, lam = ws.n, ws.lam
    alpha = ws.angles(X.t)
    zero = (0,) * n
    terms = {(zero, zero): 1j * float(np.dot(ws.beta, X.t)) + 1j * lam * X.c}
    for k in range(n):
        e = tuple(int(i == k) for i in range(n))
        terms[(e, zero)] = terms.get((e, zero), 0) + 0.5 * lam * np.conj(X.u[k])
        terms[(zero, e)] = -X.u[k]
        terms[(e, e)] = -1j * alpha[k]
    return DiffOp(terms, n)


# ---------------------------------------------------------------------------
# Bargmann transform


def bargmann_log_kernel(z, x, lam: float) -> np.ndarray:
    """``log B(z, x)`` (principal branch of the prefactor)."""
    z = np.asarray(z, dtype=complex)
    x = np.asarray(x, dtype=float)
    n = z.shape[-1]
    expo = -0.25 * lam * np.sum(z * z, axis=-1) + lam * np.sum(z * x, axis=-1) - 0.5 * lam * np.sum(x * x, axis=-1)
    return 0.25 * n * math.log(lam / math.pi) + expo


def bargmann_kernel(z, x, lam: float) -> np.ndarray:
    return np.exp(bargmann_log_kernel(z, x, lam))


def _real_grid_for(lam: float, n: int, order: int):
    """Nodes/weights for ``int g(x) dx`` where ``g`` decays like ``exp(-lam|x|^2)``."""
    grid = QuadratureGrid.real_grid(n, order)
    x = grid.nodes / math.sqrt(lam)
    w = grid.weights * np.exp(np.sum(grid.nodes**2, axis=-1)) / lam ** (n / 2)
    return x, w


def bargmann_apply(phi, z, ws: WeightSystem, order: int = 60) -> np.ndarray:
    """``(B phi)(z)`` by Gauss-Hermite quadrature; ``phi`` maps ``(N, n)`` real points to values.

    Accurate for ``phi`` decaying like ``exp(-lam x^2/2)`` (Hermite functions and their
    translates by moderate amounts).
    """
    z = np.asarray(z, dtype=complex)
    x, w = _real_grid_for(ws.lam, ws.n, order)
    vals = phi(x)
    K = bargmann_kernel(z[..., None, :], x, ws.lam)
    return np.sum(K * (w * vals), axis=-1)


def bargmann_inverse(f, x, ws: WeightSystem, order: int = 60) -> np.ndarray:
    """``(B^{-1} f)(x) = int conj(B(z, x)) f(z) exp(-lam|z|^2/2) dmu_lam(z)`` by quadrature."""
    x = np.asarray(x, dtype=float)
    grid = QuadratureGrid.complex_grid(ws.n, ws.lam, order)
    vals = f(grid.nodes)
    K = np.conj(bargmann_kernel(grid.nodes, x[..., None, :], ws.lam))
    return np.sum(K * (grid.weights * vals), axis=-1)


def bargmann_conjugate_diffop(D: DiffOp, lam: float) -> DiffOp:
    """``B D B^{-1}`` for a polynomial differential operator on ``R^n``.

    Uses ``B x B^{-1} = z/2 + d/lam`` and ``B d B^{-1} = d - lam z/2``.
    """
    n = D.dim
    xs = [DiffOp.x(k, n).scale(0.5) + DiffOp.d(k, n).scale(1.0 / lam) for k in range(n)]
    ds = [DiffOp.d(k, n) - DiffOp.x(k, n).scale(0.5 * lam) for k in range(n)]
    out = DiffOp.zero(n)
    for (a, b), c in D.terms.items():
        term = DiffOp.constant(c, n)
        for k in range(n):
            term = term @ (xs[k] ** a[k])
        for k in range(n):
            term = term @ (ds[k] ** b[k])
        out = out + term
    return out


def rho_prime_apply(z0, c0: float, phi, x, ws: WeightSystem) -> np.ndarray:
    """Schrodinger representation: ``exp(i lam (c0 - b.x + a.b/2)) phi(x - a)`` for ``z0 = a + ib``."""
    z0 = np.atleast_1d(np.asarray(z0, dtype=complex))
    a, b = z0.real, z0.imag
    x = np.asarray(x, dtype=float)
    phase = np.exp(1j * ws.lam * (c0 - x @ b + 0.5 * float(a @ b)))
    return phase * phi(x - a)


def omega1_apply(a, b, phi, x, ws: WeightSystem) -> np.ndarray:
    """``(Omega1(a, b) phi)(x) = 2^n exp(2i lam b.(a - x)) phi(2a - x)``."""
    a = np.atleast_1d(np.asarray(a, dtype=float))
    b = np.atleast_1d(np.asarray(b, dtype=float))
    x = np.asarray(x, dtype=float)
    return 2.0 ** ws.n * np.exp(2j * ws.lam * ((a - x) @ b)) * phi(2 * a - x)


# ---------------------------------------------------------------------------
# Schrodinger-side Gaussian kernels


@dataclass(frozen=True)
class SchrodingerGaussianKernel:
    """Integral kernel ``c exp(x^T P x + y^T R y + x^T S y + lx.x + ly.y)`` on ``L^2(R^n)``."""

    c: complex
    P: np.ndarray
    R: np.ndarray
    S: np.ndarray
    lx: np.ndarray
    ly: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "c", complex(self.c))
        for name in ("P", "R", "S"):
            object.__setattr__(self, name, np.atleast_2d(np.asarray(getattr(self, name), dtype=complex)))
        for name in ("lx", "ly"):
            object.__setattr__(self, name, np.atleast_1d(np.asarray(getattr(self, name), dtype=complex)))

    @property
    def n(self) -> int:
        return self.P.shape[0]

    def evaluate(self, x, y) -> np.ndarray:
        x = np.asarray(x, dtype=complex)
        y = np.asarray(y, dtype=complex)
        q = (
            quad_form(x, self.P, x)
            + quad_form(y, self.R, y)
            + quad_form(x, self.S, y)
        )
        return self.c * np.exp(q + x @ self.lx + y @ self.ly)

    def params(self) -> np.ndarray:
        return np.concatenate([[self.c], self.P.ravel(), self.R.ravel(), self.S.ravel(), self.lx, self.ly])

    def param_distance(self, other: SchrodingerGaussianKernel) -> float:
        p, q = self.params(), other.params()
        return float(np.max(np.abs(p - q) / np.maximum(1.0, np.abs(q))))

    def to_json(self) -> dict:
        def enc(m):
            return np.stack([np.real(m), np.imag(m)], axis=-1).tolist()

        return {
            "c": [self.c.real, self.c.imag],
            "P": enc(self.P),
            "R": enc(self.R),
            "S": enc(self.S),
            "lx": enc(self.lx),
            "ly": enc(self.ly),
        }


def schrodinger_compose(K1: SchrodingerGaussianKernel, K2: SchrodingerGaussianKernel) -> SchrodingerGaussianKernel:
    """Kernel of ``K1 K2``, i.e. ``int K1(x, u) K2(u, y) du`` (oscillatory integrals allowed)."""
    H = -(K1.R + K2.P)
    H = 0.5 * (H + H.T)
    ell = K1.ly + K2.lx
    prefactor = real_gaussian_integral(H, np.zeros(K1.n), allow_oscillatory=True)
    G = 0.25 * np.linalg.inv(H)
    S1, S2 = K1.S, K2.S
    return SchrodingerGaussianKernel(
        K1.c * K2.c * prefactor * np.exp(ell @ G @ ell),
        K1.P + S1 @ G @ S1.T,
        K2.R + S2.T @ G @ S2,
        2 * S1 @ G @ S2,
        K1.lx + 2 * S1 @ G @ ell,
        K2.ly + 2 * S2.T @ G @ ell,
    )


def schrodinger_adjoint(K: SchrodingerGaussianKernel) -> SchrodingerGaussianKernel:
    """``K*(x, y) = conj(K(y, x))``."""
    return SchrodingerGaussianKernel(np.conj(K.c), np.conj(K.R), np.conj(K.P), np.conj(K.S).T, np.conj(K.ly), np.conj(K.lx))


def _check_mehler_domain(alpha: np.ndarray):
    for k, a in enumerate(alpha):
        dist = abs(a - math.pi * round(a / math.pi))
        if dist <= DOMAIN_EPS:
            raise DomainError(f"alpha_{k + 1}(t) = {a!r} is within {DOMAIN_EPS} of pi*Z")


def mehler_kernel(t, ws: WeightSystem) -> SchrodingerGaussianKernel:
    """Kernel of ``sigma'(t) = B^{-1} sigma(t) B`` (determinant form, per-coordinate roots).

    With ``a_k = exp(-i alpha_k(t))`` and ``d_k = 1 / (a_k^2 - 1)``:
    ``P = R = diag(lam/2 + lam d)``, ``S = diag(-2 lam a d)`` and prefactor
    ``(lam/pi)^{n/2} chi(t) prod_k (1 - a_k^2)^{-1/2}``.
    """
    alpha = ws.angles(t)
    _check_mehler_domain(alpha)
    lam, n = ws.lam, ws.n
    a = np.exp(-1j * alpha)
    d = 1.0 / (a * a - 1.0)
    c = (lam / math.pi) ** (n / 2) * ws.chi(t) * np.prod(1.0 / np.sqrt(1.0 - a * a))
    diag = np.diag(0.5 * lam + lam * d)
    return SchrodingerGaussianKernel(c, diag, diag, np.diag(-2 * lam * a * d), np.zeros(n), np.zeros(n))


def mehler_det_prefactor(t, ws: WeightSystem) -> complex:
    """Prefactor using the principal root of the full ``Det(I - A(-t)^2)``.

    Differs from the per-coordinate product by a sign whenever the factor phases sum past
    ``pi``; exposed so the discrepancy can be reported.
    """
    alpha = ws.angles(t)
    _check_mehler_domain(alpha)
    a = np.exp(-1j * alpha)
    det = np.prod(1.0 - a * a)
    return complex((ws.lam / math.pi) ** (ws.n / 2) * ws.chi(t) / np.sqrt(det))


def mehler_factored(t, x, y, ws: WeightSystem) -> np.ndarray:
    """The cot/csc form ``(lam/pi)^{n/2} chi prod (1 - e^{-2i alpha})^{-1/2}
    exp(i lam/2 sum cot(alpha)(x^2 + y^2) - i lam sum x y / sin(alpha))``."""
    alpha = ws.angles(t)
    _check_mehler_domain(alpha)
    lam, n = ws.lam, ws.n
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    pref = (lam / math.pi) ** (n / 2) * ws.chi(t) * np.prod(1.0 / np.sqrt(1.0 - np.exp(-2j * alpha)))
    cot = np.cos(alpha) / np.sin(alpha)
    expo = 0.5j * lam * ((x * x + y * y) @ cot) - 1j * lam * ((x * y) @ (1.0 / np.sin(alpha)))
    return pref * np.exp(expo)


def pi_prime_kernel(g: GroupElement, ws: WeightSystem) -> SchrodingerGaussianKernel:
    """Kernel of ``pi'(g) = B^{-1} pi(g) B``: ``exp(i lam (c - b.x + a.b/2)) b_t(x - a, y)``, ``z0 = a + ib``.

    Requires ``alpha_k(t)`` away from ``pi Z``; pure Heisenberg elements are applied
    through :func:`rho_prime_apply` instead.
    """
    K = mehler_kernel(g.t, ws)
    a, b = g.z0.real, g.z0.imag
    lam = ws.lam
    c = K.c * np.exp(1j * lam * (g.c0 + 0.5 * float(a @ b)) + a @ K.P @ a)
    return SchrodingerGaussianKernel(c, K.P, K.R, K.S, -2 * K.P @ a - 1j * lam * b, -K.S.T @ a)


# ---------------------------------------------------------------------------
# quadrature oracles for the Schrodinger model


def conjugated_kernel_oracle(k: GaussianKernelOp, x, y, order: int = 60) -> complex:
    """Kernel of ``B^{-1} A B`` at ``(x, y)`` by quadrature over ``C^n``.

    ``K(x, y) = int conj(B(z, x)) (A B(., y))(z) exp(-lam|z|^2/2) dmu_lam(z)``, where
    ``A B(., y)`` is evaluated through the kernel action on the entire function ``B(., y)``.
    """
    lam, n = k.lam, k.n
    x = np.atleast_1d(np.asarray(x, dtype=float))
    y = np.atleast_1d(np.asarray(y, dtype=float))
    if n > 1 and np.count_nonzero(k.Q - np.diag(np.diag(k.Q))) == 0:
        # a diagonal kernel and the Bargmann kernel are both products over coordinates,
        # so the 2n-dimensional integral splits exactly into n planar ones
        val = complex(k.c)
        for j in range(n):
            kj = GaussianKernelOp(1.0, k.a[j : j + 1], k.b[j : j + 1], k.Q[j : j + 1, j : j + 1], lam)
            val *= conjugated_kernel_oracle(kj, x[j : j + 1], y[j : j + 1], order)
        return val

    def integrand(z):
        # A B(., y) at z is c exp(a.z) B((2/lam)(b + Q^T z), y); combine all exponents before exp
        arg = (2.0 / lam) * (k.b + z @ k.Q)
        log_ab = np.log(k.c) + z @ k.a + bargmann_log_kernel(arg, y, lam)
        log_total = np.conj(bargmann_log_kernel(z, x, lam)) + log_ab - 0.5 * lam * np.sum(np.abs(z) ** 2, axis=-1)
        return np.exp(log_total)

    return (lam / (2 * math.pi)) ** n * auto_envelope_integral_Cn(integrand, n, order)


def hermite_action_oracle(K: SchrodingerGaussianKernel, p: int, x, lam: float, order: int = 120) -> np.ndarray:
    """``int K(x, y) h_p(y) dy`` for ``n = 1`` by Gauss-Hermite in ``y`` (weight ``exp(-lam y^2)``).

    Accurate when the kernel's oscillation in ``y`` is mild compared with ``exp(-lam y^2/2)``.
    """
    from .fock_numeric import hermite_functions_1d

    if K.n != 1:
        raise ValueError("hermite_action_oracle is for n = 1")
    xi, wi = _hermgauss(order)
    s = math.sqrt(lam / 2)
    y = xi / s
    w = wi / s * np.exp(xi**2)
    hp = hermite_functions_1d(y, p, lam)[:, p]
    x = np.atleast_1d(np.asarray(x, dtype=float))
    vals = K.evaluate(x[:, None, None], y[None, :, None])
    return vals @ (w * hp)


def weyl1_direct(K_eval, a, b, lam: float, order: int = 60) -> complex:
    """``W1(A)(a, b) = 2^n int K(a + w, a - w) exp(2i lam b.w) dw`` by envelope quadrature.

    ``K_eval(x, y)`` evaluates the Schrodinger kernel of ``A`` on batches of points.
    """
    from .fock_numeric import fit_gaussian_envelope, envelope_integral_Rd

    a = np.atleast_1d(np.asarray(a, dtype=float))
    b = np.atleast_1d(np.asarray(b, dtype=float))
    n = a.shape[0]

    def f(W):
        return K_eval(a + W, a - W) * np.exp(2j * lam * (W @ b))

    def logabs(W):
        return float(np.log(np.abs(f(W[None, :]))[0]))

    m, H = fit_gaussian_envelope(logabs, n)
    return 2.0**n * envelope_integral_Rd(f, m, H, order)


__all__ = [
    "rho_kernel",
    "sigma_kernel",
    "pi_kernel",
    "omega0_kernel",
    "dpi_symbolic",
    "bargmann_kernel",
    "bargmann_log_kernel",
    "bargmann_apply",
    "bargmann_inverse",
    "bargmann_conjugate_diffop",
    "rho_prime_apply",
    "omega1_apply",
    "SchrodingerGaussianKernel",
    "schrodinger_compose",
    "schrodinger_adjoint",
    "mehler_kernel",
    "mehler_det_prefactor",
    "mehler_factored",
    "pi_prime_kernel",
    "conjugated_kernel_oracle",
    "hermite_action_oracle",
    "weyl1_direct",
]
