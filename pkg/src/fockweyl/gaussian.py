"""Closed-form Gaussian integrals and the algebra of Gaussian-kernel operators on Fock space.

The Fock space ``F_lam`` carries the measure ``exp(-lam|w|^2/2) dmu_lam(w)`` with
``dmu_lam = (lam / 2 pi)^n dm``.  An operator ``A`` is encoded by its kernel
``k_A(z, w) = <A e_w, e_z>`` where ``e_z(w) = exp(lam conj(z) w / 2)``; then

    (A f)(z) = int k_A(z, w) f(w) exp(-lam|w|^2/2) dmu_lam(w).

:class:`GaussianKernelOp` holds kernels ``c exp(a.z + b.conj(w) + z^T Q conj(w))``.  This
family is closed under composition and adjoints, and traces are closed form.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import NotIntegrable, NotTraceClass, SingularM

PD_THRESHOLD = 1e-12
COND_LIMIT = 1e12


def sqrt_det(N: np.ndarray) -> complex:
    """Square root of ``det N`` continued from the real positive-definite case.

    For complex symmetric ``N`` with positive definite real part every eigenvalue lies in
    the open right half plane, so the product of principal roots of the eigenvalues is the
    continuous branch that is positive on real positive-definite matrices.  (The principal
    root of the full determinant can differ from it by a sign once the eigenvalue phases
    add up past ``pi``.)
    """
    ev = np.linalg.eigvals(np.asarray(N, dtype=complex))
    return complex(np.prod(np.sqrt(ev)))


def _min_eig_real_part(N: np.ndarray) -> float:
    R = np.real(np.asarray(N))
    return float(np.linalg.eigvalsh(0.5 * (R + R.T)).min())


def quad_form(x, M, y) -> np.ndarray:
    """``x^T M y`` over the trailing axis, vectorized over leading axes."""
    return np.sum((np.asarray(x) @ M) * np.asarray(y), axis=-1)


@dataclass(frozen=True)
class GaussianIntegralSpec:
    """Data for ``int_{C^n} exp(-(w.Aw + wb.D wb + 2 wb.B w) + u.w + v.wb) dm(w)``."""

    A: np.ndarray
    B: np.ndarray
    D: np.ndarray
    u: np.ndarray
    v: np.ndarray

    def __post_init__(self):
        A = np.atleast_2d(np.asarray(self.A, dtype=complex))
        B = np.atleast_2d(np.asarray(self.B, dtype=complex))
        D = np.atleast_2d(np.asarray(self.D, dtype=complex))
        n = B.shape[0]
        for name, mat in (("A", A), ("B", B), ("D", D)):
            if mat.shape != (n, n):
                raise ValueError(f"{name} must be {n}x{n}, got {mat.shape}")
        if not (np.allclose(A, A.T, rtol=0, atol=1e-14) and np.allclose(D, D.T, rtol=0, atol=1e-14)):
            raise ValueError("A and D must be symmetric")
        object.__setattr__(self, "A", A)
        object.__setattr__(self, "B", B)
        object.__setattr__(self, "D", D)
        object.__setattr__(self, "u", np.atleast_1d(np.asarray(self.u, dtype=complex)))
        object.__setattr__(self, "v", np.atleast_1d(np.asarray(self.v, dtype=complex)))

    @property
    def n(self) -> int:
        return self.B.shape[0]

    @property
    def M(self) -> np.ndarray:
        return np.block([[self.A, self.B.T], [self.B, self.D]])

    @property
    def N(self) -> np.ndarray:
        """Real quadratic form in ``(x, y)`` with ``w = x + iy``."""
        n = self.n
        eye = np.eye(n)
        U = np.block([[eye, 1j * eye], [eye, -1j * eye]])
        return U.T @ self.M @ U

    def integrand(self, w: np.ndarray) -> np.ndarray:
        """Pointwise integrand; ``w`` has trailing axis ``n``."""
        w = np.asarray(w, dtype=complex)
        wb = np.conj(w)
        quad = (
            quad_form(w, self.A, w)
            + quad_form(wb, self.D, wb)
            + 2 * quad_form(wb, self.B, w)
        )
        return np.exp(-quad + w @ self.u + wb @ self.v)


def gaussian_integral(spec: GaussianIntegralSpec) -> complex:
    """``pi^n (det N)^{-1/2} exp((u, v) M^{-1} (u, v)^T / 4)``.

    Raises :class:`NotIntegrable` unless ``Re N`` is positive definite and
    :class:`SingularM` when ``M`` is numerically singular.
    """
    N = spec.N
    if _min_eig_real_part(N) <= PD_THRESHOLD:
        raise NotIntegrable(f"Re(N) is not positive definite (min eigenvalue {_min_eig_real_part(N):.3g})")
    M = spec.M
    if np.linalg.cond(M) > COND_LIMIT:
        raise SingularM(f"M is singular or ill-conditioned (cond {np.linalg.cond(M):.3g})")
    uv = np.concatenate([spec.u, spec.v])
    expo = 0.25 * uv @ np.linalg.solve(M, uv)
    return complex(np.pi**spec.n * np.exp(expo) / sqrt_det(N))


def real_gaussian_integral(H: np.ndarray, J: np.ndarray, allow_oscillatory: bool = False) -> complex:
    """``int_{R^d} exp(-u^T H u + J^T u) du = pi^{d/2} det(H)^{-1/2} exp(J^T H^{-1} J / 4)``.

    ``H`` is complex symmetric.  With ``allow_oscillatory`` the real part may be merely
    positive semidefinite; the value is then the analytic continuation.
    """
    H = np.atleast_2d(np.asarray(H, dtype=complex))
    J = np.atleast_1d(np.asarray(J, dtype=complex))
    lo = _min_eig_real_part(H)
    if lo <= (-PD_THRESHOLD if allow_oscillatory else PD_THRESHOLD):
        raise NotIntegrable(f"Re(H) is not positive {'semi' if allow_oscillatory else ''}definite (min eigenvalue {lo:.3g})")
    if np.linalg.cond(H) > COND_LIMIT:
        raise SingularM(f"H is singular or ill-conditioned (cond {np.linalg.cond(H):.3g})")
    d = H.shape[0]
    expo = 0.25 * J @ np.linalg.solve(H, J)
    return complex(np.pi ** (d / 2) * np.exp(expo) / sqrt_det(H))


# ---------------------------------------------------------------------------
# Gaussian-kernel operators


def _pairs(v) -> list:
    return [[float(x.real), float(x.imag)] for x in np.asarray(v, dtype=complex).ravel()]


def _unpairs(data) -> np.ndarray:
    arr = np.asarray(data, dtype=float)
    return arr[..., 0] + 1j * arr[..., 1]


@dataclass(frozen=True)
class GaussianKernelOp:
    """Operator with kernel ``c exp(a.z + b.conj(w) + z^T Q conj(w))`` on ``F_lam``."""

    c: complex
    a: np.ndarray
    b: np.ndarray
    Q: np.ndarray
    lam: float

    def __post_init__(self):
        a = np.atleast_1d(np.asarray(self.a, dtype=complex)).copy()
        b = np.atleast_1d(np.asarray(self.b, dtype=complex)).copy()
        Q = np.atleast_2d(np.asarray(self.Q, dtype=complex)).copy()
        n = a.shape[0]
        if b.shape != (n,) or Q.shape != (n, n):
            raise ValueError(f"inconsistent shapes a{a.shape} b{b.shape} Q{Q.shape}")
        if not self.lam > 0:
            raise ValueError(f"lambda must be positive, got {self.lam}")
        for arr in (a, b, Q):
            arr.setflags(write=False)
        object.__setattr__(self, "c", complex(self.c))
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b)
        object.__setattr__(self, "Q", Q)
        object.__setattr__(self, "lam", float(self.lam))

    @property
    def n(self) -> int:
        return self.a.shape[0]

    @classmethod
    def identity(cls, n: int, lam: float) -> GaussianKernelOp:
        return cls(1.0, np.zeros(n), np.zeros(n), 0.5 * lam * np.eye(n), lam)

    @classmethod
    def coherent_projector(cls, z1, lam: float) -> GaussianKernelOp:
        """Rank-one projector onto ``e_{z1}`` (normalized)."""
        z1 = np.atleast_1d(np.asarray(z1, dtype=complex))
        n = z1.shape[0]
        return cls(np.exp(-0.5 * lam * np.vdot(z1, z1).real), 0.5 * lam * np.conj(z1), 0.5 * lam * z1, np.zeros((n, n)), lam)

    def scaled(self, s: complex) -> GaussianKernelOp:
        return GaussianKernelOp(s * self.c, self.a, self.b, self.Q, self.lam)

    def params(self) -> np.ndarray:
        """Flat parameter vector ``(c, a, b, Q)`` for parameter-wise comparisons."""
        return np.concatenate([[self.c], self.a, self.b, self.Q.ravel()])

    def param_distance(self, other: GaussianKernelOp) -> float:
        """Max relative parameter deviation, ``|x - y| / max(1, |y|)`` componentwise."""
        p, q = self.params(), other.params()
        return float(np.max(np.abs(p - q) / np.maximum(1.0, np.abs(q))))

    def apply(self, f, z):
        """``(A f)(z) = c e^{a.z} f((2/lam)(b + Q^T z))`` for entire ``f``."""
        z = np.asarray(z, dtype=complex)
        arg = (2.0 / self.lam) * (self.b + z @ self.Q)
        return self.c * np.exp(z @ self.a) * f(arg)

    def to_json(self) -> dict:
        return {
            "c": [self.c.real, self.c.imag],
            "a": _pairs(self.a),
            "b": _pairs(self.b),
            "Q": [_pairs(row) for row in self.Q],
            "lambda": self.lam,
        }

    @classmethod
    def from_json(cls, data: dict) -> GaussianKernelOp:
        c = data["c"]
        c = complex(c[0], c[1]) if isinstance(c, (list, tuple)) else complex(c)
        return cls(c, _unpairs(data["a"]), _unpairs(data["b"]), _unpairs(data["Q"]), data["lambda"])


def gk_evaluate(k: GaussianKernelOp, z, w) -> np.ndarray:
    """``k(z, w)``, vectorized over leading axes of ``z`` and ``w``."""
    z = np.asarray(z, dtype=complex)
    wb = np.conj(np.asarray(w, dtype=complex))
    expo = z @ k.a + wb @ k.b + quad_form(z, k.Q, wb)
    return k.c * np.exp(expo)


def _check_pair(k1: GaussianKernelOp, k2: GaussianKernelOp):
    if k1.n != k2.n or k1.lam != k2.lam:
        raise ValueError(f"incompatible kernels: n={k1.n},{k2.n} lam={k1.lam},{k2.lam}")


def gk_compose(k1: GaussianKernelOp, k2: GaussianKernelOp) -> GaussianKernelOp:
    """Kernel of the operator product ``A1 A2``.

    The intermediate integral has quadratic part ``lam|u|^2/2`` only, so it always
    converges and the product stays in the family:

        c = c1 c2 exp((2/lam) a2.b1),  a = a1 + (2/lam) Q1 a2,
        b = b2 + (2/lam) Q2^T b1,      Q = (2/lam) Q1 Q2.
    """
    _check_pair(k1, k2)
    s = 2.0 / k1.lam
    return GaussianKernelOp(
        k1.c * k2.c * np.exp(s * (k2.a @ k1.b)),
        k1.a + s * (k1.Q @ k2.a),
        k2.b + s * (k2.Q.T @ k1.b),
        s * (k1.Q @ k2.Q),
        k1.lam,
    )


def trace_spec(k: GaussianKernelOp) -> GaussianIntegralSpec:
    """The diagonal integral ``int k(z, z) exp(-lam|z|^2/2) dm(z)`` as a lemma spec."""
    n = k.n
    B = 0.25 * k.lam * np.eye(n) - 0.5 * k.Q.T
    zero = np.zeros((n, n))
    return GaussianIntegralSpec(zero, B, zero, k.a, k.b)


def gk_trace(k: GaussianKernelOp) -> complex:
    """``Tr A = int k(z, z) exp(-lam|z|^2/2) dmu_lam(z)``; raises :class:`NotTraceClass` on divergence."""
    try:
        val = gaussian_integral(trace_spec(k))
    except (NotIntegrable, SingularM) as exc:
        raise NotTraceClass(f"diagonal integral diverges: {exc}") from exc
    return complex(k.c * (k.lam / (2 * np.pi)) ** k.n * val)


def gk_adjoint(k: GaussianKernelOp) -> GaussianKernelOp:
    return GaussianKernelOp(np.conj(k.c), np.conj(k.b), np.conj(k.a), k.Q.conj().T, k.lam)


def gk_hs_inner(k1: GaussianKernelOp, k2: GaussianKernelOp) -> complex:
    """Hilbert-Schmidt inner product ``Tr(A1 A2*)``."""
    return gk_trace(gk_compose(k1, gk_adjoint(k2)))
