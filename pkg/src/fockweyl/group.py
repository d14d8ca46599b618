"""The generalized diamond group ``G = R^m x| H_n`` and its Lie algebra.

Elements are ``(t, z0, c0)`` with ``t`` in ``R^m``, ``z0`` in ``C^n``, ``c0`` real.  The torus
``R^m`` acts on ``C^n`` by ``t . z = A(t) z`` with ``A(t) = diag(exp(i alpha_k(t)))`` and
``alpha_k(t) = sum_j alpha[j, k] t_j``.  The product is

    (t, z, c)(t', z', c') = (t + t', z + t.z', c + c' + omega(z, t.z') / 2)

with ``omega(z, w) = -Im(z . conj(w))``.  Inverses in ``R^m`` are additive.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np


def _vec(x, dtype) -> np.ndarray:
    arr = np.atleast_1d(np.asarray(x, dtype=dtype)).copy()
    arr.setflags(write=False)
    return arr


def _encode_complex(v: np.ndarray) -> list[list[float]]:
    return [[float(c.real), float(c.imag)] for c in np.asarray(v, dtype=complex)]


def _decode_complex(data) -> np.ndarray:
    arr = np.asarray(data, dtype=float)
    if arr.ndim == 1:
        # tolerate a plain real list
        return arr.astype(complex)
    return arr[:, 0] + 1j * arr[:, 1]


@dataclass(frozen=True)
class WeightSystem:
    """Model parameters: torus weights ``alpha`` (m x n), character direction ``beta``, and ``lam``."""

    alpha: np.ndarray
    beta: np.ndarray
    lam: float = 1.0

    def __post_init__(self):
        alpha = np.atleast_2d(np.asarray(self.alpha, dtype=float)).copy()
        beta = _vec(self.beta, float)
        if beta.shape != (alpha.shape[0],):
            raise ValueError(f"beta must have length m={alpha.shape[0]}, got {beta.shape}")
        if not np.all(np.isfinite(alpha)):
            raise ValueError("alpha must be finite")
        if not self.lam > 0:
            raise ValueError(f"lambda must be positive, got {self.lam}")
        alpha.setflags(write=False)
        object.__setattr__(self, "alpha", alpha)
        object.__setattr__(self, "beta", beta)
        object.__setattr__(self, "lam", float(self.lam))

    @classmethod
    def simple(cls, n: int = 1, lam: float = 1.0) -> WeightSystem:
        """``m = n`` with ``alpha_k(t) = t_k`` and trivial character."""
        return cls(np.eye(n), np.zeros(n), lam)

    @property
    def m(self) -> int:
        return self.alpha.shape[0]

    @property
    def n(self) -> int:
        return self.alpha.shape[1]

    def angles(self, t) -> np.ndarray:
        """``(alpha_1(t), ..., alpha_n(t))``."""
        return np.asarray(t, dtype=float) @ self.alpha

    def torus(self, t) -> np.ndarray:
        """Diagonal of ``A(t)``."""
        return np.exp(1j * self.angles(t))

    def chi(self, t) -> complex:
        return complex(np.exp(1j * float(np.dot(self.beta, t))))

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "m": self.m,
            "alpha": self.alpha.tolist(),
            "beta": self.beta.tolist(),
            "lambda": self.lam,
        }

    @classmethod
    def from_json(cls, data: dict) -> WeightSystem:
        ws = cls(data["alpha"], data.get("beta", np.zeros(len(data["alpha"]))), data.get("lambda", 1.0))
        if "n" in data and data["n"] != ws.n or "m" in data and data["m"] != ws.m:
            raise ValueError("n/m in config disagree with the shape of alpha")
        return ws


@dataclass(frozen=True)
class GroupElement:
    t: np.ndarray
    z0: np.ndarray
    c0: float = 0.0

    def __post_init__(self):
        object.__setattr__(self, "t", _vec(self.t, float))
        object.__setattr__(self, "z0", _vec(self.z0, complex))
        object.__setattr__(self, "c0", float(self.c0))

    @classmethod
    def identity(cls, ws: WeightSystem) -> GroupElement:
        return cls(np.zeros(ws.m), np.zeros(ws.n), 0.0)

    def coords(self) -> np.ndarray:
        """Real coordinate vector ``(t, Re z0, Im z0, c0)``."""
        return np.concatenate([self.t, self.z0.real, self.z0.imag, [self.c0]])

    def to_json(self) -> dict:
        return {"t": self.t.tolist(), "z0": _encode_complex(self.z0), "c0": self.c0}

    @classmethod
    def from_json(cls, data: dict) -> GroupElement:
        return cls(data["t"], _decode_complex(data["z0"]), data.get("c0", 0.0))


@dataclass(frozen=True)
class LieElement:
    t: np.ndarray
    u: np.ndarray
    c: float = 0.0

    def __post_init__(self):
        object.__setattr__(self, "t", _vec(self.t, float))
        object.__setattr__(self, "u", _vec(self.u, complex))
        object.__setattr__(self, "c", float(self.c))

    def __add__(self, other: LieElement) -> LieElement:
        return LieElement(self.t + other.t, self.u + other.u, self.c + other.c)

    def __sub__(self, other: LieElement) -> LieElement:
        return LieElement(self.t - other.t, self.u - other.u, self.c - other.c)

    def __mul__(self, s: float) -> LieElement:
        return LieElement(s * self.t, s * self.u, s * self.c)

    __rmul__ = __mul__

    def coords(self) -> np.ndarray:
        return np.concatenate([self.t, self.u.real, self.u.imag, [self.c]])

    def to_json(self) -> dict:
        return {"t": self.t.tolist(), "u": _encode_complex(self.u), "c": self.c}

    @classmethod
    def from_json(cls, data: dict) -> LieElement:
        return cls(data["t"], _decode_complex(data["u"]), data.get("c", 0.0))


@dataclass(frozen=True)
class Covector:
    """Element ``(s, v, d)`` of the dual algebra."""

    s: np.ndarray
    v: np.ndarray
    d: float = 0.0

    def __post_init__(self):
        object.__setattr__(self, "s", _vec(self.s, float))
        object.__setattr__(self, "v", _vec(self.v, complex))
        object.__setattr__(self, "d", float(self.d))

    def coords(self) -> np.ndarray:
        """Coordinates ``(s, Re v, Im v, d)``; the Euclidean norm on these is the residual norm."""
        return np.concatenate([self.s, self.v.real, self.v.imag, [self.d]])

    def to_json(self) -> dict:
        return {"s": self.s.tolist(), "v": _encode_complex(self.v), "d": self.d}

    @classmethod
    def from_json(cls, data: dict) -> Covector:
        return cls(data["s"], _decode_complex(data["v"]), data.get("d", 0.0))


# ---------------------------------------------------------------------------


def symplectic_form(p1, p2) -> complex:
    """``omega((z, w), (z', w')) = (i/2) sum (z w' - z' w)``.

    Real when both arguments have the form ``(z, conj(z))``.
    """
    z1, w1 = (np.asarray(a, dtype=complex) for a in p1)
    z2, w2 = (np.asarray(a, dtype=complex) for a in p2)
    return complex(0.5j * np.sum(z1 * w2 - z2 * w1))


def omega(z, w) -> float:
    """``symplectic_form((z, conj z), (w, conj w)) = -Im(z . conj(w))``, vectorized over leading axes."""
    z = np.asarray(z, dtype=complex)
    w = np.asarray(w, dtype=complex)
    return -np.imag(np.sum(z * np.conj(w), axis=-1))


def group_multiply(g1: GroupElement, g2: GroupElement, ws: WeightSystem) -> GroupElement:
    w = ws.torus(g1.t) * g2.z0
    return GroupElement(g1.t + g2.t, g1.z0 + w, g1.c0 + g2.c0 + 0.5 * float(omega(g1.z0, w)))


def group_inverse(g: GroupElement, ws: WeightSystem) -> GroupElement:
    return GroupElement(-g.t, -ws.torus(-g.t) * g.z0, -g.c0)


def act_on_Cn(g: GroupElement, z, ws: WeightSystem) -> np.ndarray:
    """Affine action ``g . z = A(t) z + z0``; ``z`` may carry leading batch axes."""
    return ws.torus(g.t) * np.asarray(z, dtype=complex) + g.z0


def lie_bracket(X: LieElement, Y: LieElement, ws: WeightSystem) -> LieElement:
    u = 1j * (ws.angles(X.t) * Y.u - ws.angles(Y.t) * X.u)
    return LieElement(np.zeros(ws.m), u, float(omega(X.u, Y.u)))


_EXP_SERIES_CUTOFF = 0.5


def _theta_minus_sin_over_sq(theta: np.ndarray) -> np.ndarray:
    """``(theta - sin theta) / theta^2`` with a power series near zero."""
    theta = np.asarray(theta, dtype=float)
    out = np.empty_like(theta)
    small = np.abs(theta) < _EXP_SERIES_CUTOFF
    th = theta[small]
    # sum_j (-1)^j theta^(2j+1) / (2j+3)!, Horner in theta^2
    acc = np.zeros_like(th)
    sq = th * th
    for j in range(10, -1, -1):
        acc = acc * sq + (-1) ** j / math.factorial(2 * j + 3)
    out[small] = th * acc
    big = ~small
    tb = theta[big]
    out[big] = (tb - np.sin(tb)) / tb**2
    return out


def _phase_integral(theta: np.ndarray) -> np.ndarray:
    """``(exp(i theta) - 1) / (i theta)``, accurate for all real ``theta`` including 0."""
    theta = np.asarray(theta, dtype=float)
    half = np.sin(theta / 2) * np.sinc(theta / (2 * np.pi))
    return np.sinc(theta / np.pi) + 1j * half


def group_exp(X: LieElement, s: float, ws: WeightSystem) -> GroupElement:
    """``exp(sX)`` in closed form; removable singularities at ``alpha_k(t) s = 0`` are handled."""
    s = float(s)
    alpha = ws.angles(X.t)
    theta = alpha * s
    z = s * X.u * _phase_integral(theta)
    c = s * X.c + 0.5 * s * s * float(np.sum(np.abs(X.u) ** 2 * _theta_minus_sin_over_sq(theta)))
    return GroupElement(s * X.t, z, c)


def adjoint(g: GroupElement, X: LieElement, ws: WeightSystem) -> LieElement:
    """``Ad(g) X = (t, A(t0) u - i alpha(t) z0, c + omega(z0, A(t0) u) - sum alpha_k(t)|z0_k|^2 / 2)``."""
    au = ws.torus(g.t) * X.u
    alpha = ws.angles(X.t)
    u = au - 1j * alpha * g.z0
    c = X.c + float(omega(g.z0, au)) - 0.5 * float(np.sum(alpha * np.abs(g.z0) ** 2))
    return LieElement(X.t, u, c)


def coadjoint(g: GroupElement, xi: Covector, ws: WeightSystem) -> Covector:
    """``Ad*(g) xi``, defined by ``<Ad*(g) xi, X> = <xi, Ad(g^-1) X>``."""
    w = ws.torus(g.t) * xi.v
    per_k = np.real(w * np.conj(g.z0)) - 0.5 * xi.d * np.abs(g.z0) ** 2
    s = xi.s + ws.alpha @ per_k
    return Covector(s, w - xi.d * g.z0, xi.d)


def pairing(xi: Covector, X: LieElement) -> float:
    """``<xi, X> = <s, t> + omega(v, u) + c d``."""
    return float(np.dot(xi.s, X.t) + omega(xi.v, X.u) + X.c * xi.d)
