"""Multi-indices, sparse complex polynomials and normal-ordered differential operators.

Two polynomial flavours share one implementation:

* :class:`PolyZ` -- polynomials in ``z`` and ``zb`` (the conjugate slot treated as an
  independent variable), i.e. ``sum c_pq z^p zb^q``.
* :class:`PolyXY` -- polynomials in real phase-space variables ``(x, y)``.

:class:`DiffOp` holds operators ``sum c_ab x^a d^b`` in normal order (all
multiplications to the left of all derivatives).  The same class is used for
operators on ``R^n`` and for holomorphic operators on Fock space, where ``x``
plays the role of ``z``.

Coefficients are complex doubles; only exact zeros are pruned.
"""

from __future__ import annotations

import ast
import itertools
import math
from collections.abc import Iterable, Mapping
from functools import lru_cache
from types import MappingProxyType

import numpy as np

MultiIndex = tuple[int, ...]


# ---------------------------------------------------------------------------
# multi-index bookkeeping


def mi_degree(p: MultiIndex) -> int:
    return sum(p)


def mi_factorial(p: MultiIndex) -> int:
    return math.prod(math.factorial(k) for k in p)


def mi_le(p: MultiIndex, q: MultiIndex) -> bool:
    return all(a <= b for a, b in zip(p, q))


def mi_binom(q: MultiIndex, p: MultiIndex) -> int:
    """Multi-index binomial ``q choose p``; requires ``p <= q`` componentwise."""
    if not mi_le(p, q):
        raise ValueError(f"binomial undefined: {p} is not <= {q}")
    return math.prod(math.comb(b, a) for a, b in zip(p, q))


def mi_add(p: MultiIndex, q: MultiIndex) -> MultiIndex:
    return tuple(a + b for a, b in zip(p, q))


def mi_sub(p: MultiIndex, q: MultiIndex) -> MultiIndex:
    return tuple(a - b for a, b in zip(p, q))


def mi_falling(c: MultiIndex, j: MultiIndex) -> int:
    """``c! / (c - j)!`` (zero unless ``j <= c``)."""
    if not mi_le(j, c):
        return 0
    return math.prod(math.perm(a, b) for a, b in zip(c, j))


def graded_lex_key(p: MultiIndex):
    """Sort key: total degree first, then lexicographically descending exponents."""
    return (sum(p), tuple(-a for a in p))


@lru_cache(maxsize=None)
def multi_indices(n: int, max_degree: int) -> tuple[MultiIndex, ...]:
    """All ``p`` in ``N^n`` with ``|p| <= max_degree`` in graded lexicographic order."""
    out = [p for p in itertools.product(range(max_degree + 1), repeat=n) if sum(p) <= max_degree]
    return tuple(sorted(out, key=graded_lex_key))


def multi_indices_of_degree(n: int, degree: int) -> tuple[MultiIndex, ...]:
    return tuple(p for p in multi_indices(n, degree) if sum(p) == degree)


# ---------------------------------------------------------------------------
# sparse containers


class _Sparse:
    """Immutable sparse map ``(MultiIndex, MultiIndex) -> complex``."""

    __slots__ = ("_terms", "dim")

    def __init__(self, terms: Mapping | Iterable = (), dim: int = 1):
        items = terms.items() if isinstance(terms, Mapping) else terms
        acc: dict[tuple[MultiIndex, MultiIndex], complex] = {}
        for (p, q), c in items:
            p, q = tuple(int(a) for a in p), tuple(int(a) for a in q)
            if len(p) != dim or len(q) != dim:
                raise ValueError(f"exponent length mismatch for dim={dim}: {p}, {q}")
            if min(p + q, default=0) < 0:
                raise ValueError(f"negative exponent in {p}, {q}")
            acc[(p, q)] = acc.get((p, q), 0j) + complex(c)
        self._terms = MappingProxyType({k: v for k, v in acc.items() if v != 0})
        self.dim = dim

    # construction helpers -------------------------------------------------
    @classmethod
    def zero(cls, dim: int):
        return cls({}, dim)

    @classmethod
    def constant(cls, c: complex, dim: int):
        z = (0,) * dim
        return cls({(z, z): c}, dim)

    @classmethod
    def monomial(cls, p: MultiIndex, q: MultiIndex, c: complex = 1.0):
        return cls({(tuple(p), tuple(q)): c}, len(p))

    def _new(self, terms: dict):
        """Build from an internally produced dict whose keys are already canonical."""
        return self._trusted(type(self), terms, self.dim)

    @staticmethod
    def _trusted(cls, terms: dict, dim: int):
        obj = object.__new__(cls)
        obj._terms = MappingProxyType({k: complex(v) for k, v in terms.items() if v != 0})
        obj.dim = dim
        return obj

    # container protocol ---------------------------------------------------
    @property
    def terms(self) -> Mapping[tuple[MultiIndex, MultiIndex], complex]:
        return self._terms

    def __len__(self):
        return len(self._terms)

    def __bool__(self):
        return bool(self._terms)

    def items(self):
        """Terms in canonical graded lexicographic order."""
        return sorted(self._terms.items(), key=lambda kv: graded_lex_key(kv[0][0] + kv[0][1]))

    def coeff(self, p: MultiIndex, q: MultiIndex) -> complex:
        return self._terms.get((tuple(p), tuple(q)), 0j)

    def degree(self) -> int:
        return max((sum(p) + sum(q) for p, q in self._terms), default=-1)

    # linear structure -----------------------------------------------------
    def _check(self, other):
        if type(other) is not type(self):
            raise TypeError(f"cannot combine {type(self).__name__} with {type(other).__name__}")
        if other.dim != self.dim:
            raise ValueError(f"dimension mismatch: {self.dim} vs {other.dim}")

    def __add__(self, other):
        if isinstance(other, (int, float, complex)):
            other = self.constant(other, self.dim)
        self._check(other)
        acc = dict(self._terms)
        for k, v in other._terms.items():
            acc[k] = acc.get(k, 0j) + v
        return self._new(acc)

    __radd__ = __add__

    def __neg__(self):
        return self._new({k: -v for k, v in self._terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def scale(self, c: complex):
        c = complex(c)
        if c == 0:
            return self.zero(self.dim)
        return self._new({k: c * v for k, v in self._terms.items()})

    def max_abs_diff(self, other) -> float:
        self._check(other)
        keys = set(self._terms) | set(other._terms)
        return max((abs(self.coeff(*k) - other.coeff(*k)) for k in keys), default=0.0)

    def allclose(self, other, atol: float = 1e-12) -> bool:
        return self.max_abs_diff(other) <= atol

    def __eq__(self, other):
        return type(other) is type(self) and other.dim == self.dim and dict(other._terms) == dict(self._terms)

    def __hash__(self):
        return hash((type(self).__name__, self.dim, frozenset(self._terms.items())))

    def __repr__(self):
        return f"{type(self).__name__}({self.to_text()!s})"

    # serialization ----------------------------------------------------------
    def to_json(self) -> list[dict]:
        return [
            {"p": list(p), "q": list(q), "re": c.real, "im": c.imag}
            for (p, q), c in self.items()
        ]

    @classmethod
    def from_json(cls, data: list[dict], dim: int | None = None):
        if dim is None:
            if not data:
                raise ValueError("dim is required for an empty term list")
            dim = len(data[0]["p"])
        return cls({(tuple(t["p"]), tuple(t["q"])): complex(t.get("re", 0.0), t.get("im", 0.0)) for t in data}, dim)

    _slot_names: tuple[str, str] = ("p", "q")

    def to_text(self) -> str:
        if not self._terms:
            return "0"
        a, b = self._slot_names
        parts = []
        for (p, q), c in self.items():
            factors = [_format_coef(c)]
            for k, e in enumerate(p):
                if e:
                    factors.append(f"{a}{k + 1}" + (f"^{e}" if e > 1 else ""))
            for k, e in enumerate(q):
                if e:
                    factors.append(f"{b}{k + 1}" + (f"^{e}" if e > 1 else ""))
            parts.append(" * ".join(factors))
        return " + ".join(parts)


def _format_coef(c: complex) -> str:
    if c.imag == 0:
        return repr(c.real)
    if c.real == 0:
        return f"{c.imag!r}j"
    return f"({c.real!r}{c.imag:+}j)"


class _Poly(_Sparse):
    """Commutative polynomial in two blocks of ``n`` variables."""

    __slots__ = ()

    def __mul__(self, other):
        if isinstance(other, (int, float, complex, np.number)):
            return self.scale(other)
        self._check(other)
        acc: dict = {}
        for (p1, q1), c1 in self._terms.items():
            for (p2, q2), c2 in other._terms.items():
                k = (mi_add(p1, p2), mi_add(q1, q2))
                acc[k] = acc.get(k, 0j) + c1 * c2
        return self._new(acc)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        out = self.constant(1.0, self.dim)
        for _ in range(k):
            out = out * self
        return out

    def derivative(self, variable: int, order: int = 1):
        """Formal partial derivative; ``variable < n`` is the first block, otherwise the second."""
        n = self.dim
        if not 0 <= variable < 2 * n:
            raise ValueError(f"variable index {variable} out of range for dim={n}")
        orders = [0] * (2 * n)
        orders[variable] = order
        return self.diff(tuple(orders[:n]), tuple(orders[n:]))

    def diff(self, dp: MultiIndex, dq: MultiIndex):
        """Mixed derivative ``d^dp (first block) d^dq (second block)``."""
        acc = {}
        for (p, q), c in self._terms.items():
            fp, fq = mi_falling(p, dp), mi_falling(q, dq)
            if fp and fq:
                acc[(mi_sub(p, dp), mi_sub(q, dq))] = c * fp * fq
        return self._new(acc)

    def _eval(self, u, v):
        u = np.asarray(u, dtype=complex)
        v = np.asarray(v, dtype=complex)
        if u.shape[-1] != self.dim:
            raise ValueError(f"expected trailing dimension {self.dim}, got {u.shape}")
        out = np.zeros(u.shape[:-1], dtype=complex)
        for (p, q), c in self._terms.items():
            out = out + c * np.prod(u ** np.array(p), axis=-1) * np.prod(v ** np.array(q), axis=-1)
        return out


class PolyZ(_Poly):
    """Polynomial ``sum c_pq z^p zb^q`` on ``C^n``."""

    __slots__ = ()
    _slot_names = ("z", "zb")

    @classmethod
    def z(cls, k: int, dim: int):
        e = tuple(int(i == k) for i in range(dim))
        return cls.monomial(e, (0,) * dim)

    @classmethod
    def zb(cls, k: int, dim: int):
        e = tuple(int(i == k) for i in range(dim))
        return cls.monomial((0,) * dim, e)

    def __call__(self, z):
        """Evaluate at ``z`` (trailing axis of length n), with ``zb = conj(z)``."""
        z = np.asarray(z, dtype=complex)
        return self._eval(z, np.conj(z))

    def evaluate_pair(self, z, zb):
        """Evaluate with independent holomorphic and anti-holomorphic arguments."""
        return self._eval(z, zb)

    def conj(self) -> PolyZ:
        """Polynomial of the complex-conjugate function."""
        return PolyZ({(q, p): np.conj(c) for (p, q), c in self._terms.items()}, self.dim)


class PolyXY(_Poly):
    """Polynomial ``sum c_ab x^a y^b`` on ``R^n x R^n``."""

    __slots__ = ()
    _slot_names = ("x", "y")

    @classmethod
    def x(cls, k: int, dim: int):
        e = tuple(int(i == k) for i in range(dim))
        return cls.monomial(e, (0,) * dim)

    @classmethod
    def y(cls, k: int, dim: int):
        e = tuple(int(i == k) for i in range(dim))
        return cls.monomial((0,) * dim, e)

    def __call__(self, x, y):
        return self._eval(x, y)

    def scale_y(self, factor: float) -> PolyXY:
        """The polynomial ``(x, y) -> f(x, factor * y)``."""
        return PolyXY({(p, q): c * factor ** sum(q) for (p, q), c in self._terms.items()}, self.dim)


class DiffOp(_Sparse):
    """Normal-ordered differential operator ``sum c_ab x^a d^b`` with polynomial coefficients."""

    __slots__ = ()
    _slot_names = ("x", "d")

    @classmethod
    def identity(cls, dim: int):
        return cls.constant(1.0, dim)

    @classmethod
    def x(cls, k: int, dim: int):
        e = tuple(int(i == k) for i in range(dim))
        return cls.monomial(e, (0,) * dim)

    @classmethod
    def d(cls, k: int, dim: int):
        e = tuple(int(i == k) for i in range(dim))
        return cls.monomial((0,) * dim, e)

    def __matmul__(self, other):
        return diffop_compose(self, other)

    def __mul__(self, other):
        if isinstance(other, (int, float, complex, np.number)):
            return self.scale(other)
        return diffop_compose(self, other)

    def __rmul__(self, other):
        if isinstance(other, (int, float, complex, np.number)):
            return self.scale(other)
        return NotImplemented

    def __pow__(self, k: int):
        out = DiffOp.identity(self.dim)
        for _ in range(k):
            out = diffop_compose(out, self)
        return out

    def commutator(self, other: DiffOp) -> DiffOp:
        return diffop_compose(self, other) - diffop_compose(other, self)

    def apply(self, f: _Poly) -> _Poly:
        """Act on the first block of variables of a polynomial (the second block is inert)."""
        if f.dim != self.dim:
            raise ValueError(f"dimension mismatch: {self.dim} vs {f.dim}")
        zero = (0,) * self.dim
        out = f.zero(f.dim)
        for (a, b), c in self._terms.items():
            out = out + (f.diff(b, zero) * f.monomial(a, zero)).scale(c)
        return out


# ---------------------------------------------------------------------------
# operations


def poly_mul(f: _Poly, g: _Poly) -> _Poly:
    return f * g


def poly_derivative(f: _Poly, variable: int, order: int = 1) -> _Poly:
    return f.derivative(variable, order)


def _compose_monomials(a1, b1, a2, b2):
    """``x^a1 d^b1 x^a2 d^b2`` in normal order, as ``{(a, b): coefficient}``."""
    # d^b x^c = sum_j C(b, j) c!/(c-j)! x^(c-j) d^(b-j), coordinatewise
    out = {}
    ranges = [range(min(b, c) + 1) for b, c in zip(b1, a2)]
    for j in itertools.product(*ranges):
        coef = mi_binom(b1, j) * mi_falling(a2, j)
        a = mi_add(a1, mi_sub(a2, j))
        b = mi_add(mi_sub(b1, j), b2)
        out[(a, b)] = out.get((a, b), 0) + coef
    return out


def diffop_compose(d1: DiffOp, d2: DiffOp) -> DiffOp:
    """Operator product ``d1 o d2`` brought back to normal order."""
    if d1.dim != d2.dim:
        raise ValueError(f"dimension mismatch: {d1.dim} vs {d2.dim}")
    acc: dict = {}
    for (a1, b1), c1 in d1.terms.items():
        for (a2, b2), c2 in d2.terms.items():
            for k, m in _compose_monomials(a1, b1, a2, b2).items():
                acc[k] = acc.get(k, 0j) + c1 * c2 * m
    return DiffOp(acc, d1.dim)


def weyl_quantize_poly(f: PolyXY) -> DiffOp:
    """Classical Weyl quantization of a phase-space polynomial.

    ``x^a y^s`` acts as ``phi -> (i d/dy)^s [ (x + y/2)^a phi(x + y) ] at y = 0``,
    which expands by Leibniz to
    ``i^|s| sum_j C(s, j) 2^-|j| a!/(a-j)! x^(a-j) d^(s-j)``.
    """
    n = f.dim
    acc: dict = {}
    for (a, s), c in f.terms.items():
        phase = 1j ** sum(s)
        for j in itertools.product(*(range(min(si, ai) + 1) for si, ai in zip(s, a))):
            coef = phase * mi_binom(s, j) * 0.5 ** sum(j) * mi_falling(a, j)
            key = (mi_sub(a, j), mi_sub(s, j))
            acc[key] = acc.get(key, 0j) + c * coef
    return DiffOp(acc, n)


# ---------------------------------------------------------------------------
# z <-> (x, y) along j(x, y) = x + iy


def pullback_j(f: PolyZ) -> PolyXY:
    """``f o j`` where ``z = x + iy`` and ``zb = x - iy``."""
    n = f.dim
    zs = [PolyXY.x(k, n) + PolyXY.y(k, n).scale(1j) for k in range(n)]
    zbs = [PolyXY.x(k, n) - PolyXY.y(k, n).scale(1j) for k in range(n)]
    return _substitute(f, zs, zbs, PolyXY)


def pushforward_j(f: PolyXY) -> PolyZ:
    """``f o j^{-1}`` where ``x = (z + zb)/2`` and ``y = (z - zb)/(2i)``."""
    n = f.dim
    xs = [(PolyZ.z(k, n) + PolyZ.zb(k, n)).scale(0.5) for k in range(n)]
    ys = [(PolyZ.z(k, n) - PolyZ.zb(k, n)).scale(-0.5j) for k in range(n)]
    return _substitute(f, xs, ys, PolyZ)


def _substitute(f, first, second, target):
    n = f.dim
    cache: dict = {}

    def power(vars_, k, e, tag):
        key = (tag, k, e)
        if key not in cache:
            cache[key] = vars_[k] ** e
        return cache[key]

    out = target.zero(n)
    for (p, q), c in f.terms.items():
        term = target.constant(c, n)
        for k in range(n):
            if p[k]:
                term = term * power(first, k, p[k], 0)
            if q[k]:
                term = term * power(second, k, q[k], 1)
        out = out + term
    return out


# ---------------------------------------------------------------------------
# text format


def parse_poly(text: str, kind: str = "xy", dim: int | None = None) -> PolyXY | PolyZ:
    """Parse ``coef * x1^a1 * y1^b1 + ...`` (kind ``xy``) or ``coef * z1^a * zb1^b`` (kind ``z``).

    Coefficients may be any Python numeric literal, including complex ones such as
    ``2j`` or ``(1-0.5j)``.
    """
    cls = {"xy": PolyXY, "z": PolyZ}[kind]
    names = {"xy": ("x", "y"), "z": ("z", "zb")}[kind]
    try:
        tree = ast.parse(text.replace("^", "**"), mode="eval").body
    except SyntaxError as exc:
        raise ValueError(f"cannot parse polynomial {text!r}: {exc.msg}") from exc

    found = [node.id for node in ast.walk(tree) if isinstance(node, ast.Name)]
    max_index = 0
    for name in found:
        head = name.rstrip("0123456789")
        idx = name[len(head):]
        if head not in names or not idx or int(idx) < 1:
            raise ValueError(f"unknown variable {name!r} for kind {kind!r}")
        max_index = max(max_index, int(idx))
    n = dim if dim is not None else max(max_index, 1)
    if max_index > n:
        raise ValueError(f"variable index {max_index} exceeds dim={n}")

    def ev(node):
        if isinstance(node, ast.Constant) and isinstance(node.value, (int, float, complex)):
            return cls.constant(node.value, n)
        if isinstance(node, ast.Name):
            head = node.id.rstrip("0123456789")
            k = int(node.id[len(head):]) - 1
            e = tuple(int(i == k) for i in range(n))
            zero = (0,) * n
            return cls.monomial(e, zero) if head == names[0] else cls.monomial(zero, e)
        if isinstance(node, ast.UnaryOp) and isinstance(node.op, (ast.USub, ast.UAdd)):
            v = ev(node.operand)
            return -v if isinstance(node.op, ast.USub) else v
        if isinstance(node, ast.BinOp):
            if isinstance(node.op, ast.Pow):
                if not (isinstance(node.right, ast.Constant) and isinstance(node.right.value, int)):
                    raise ValueError("exponents must be non-negative integer literals")
                return ev(node.left) ** node.right.value
            left, right = ev(node.left), ev(node.right)
            if isinstance(node.op, ast.Add):
                return left + right
            if isinstance(node.op, ast.Sub):
                return left - right
            if isinstance(node.op, ast.Mult):
                return left * right
        raise ValueError(f"unsupported syntax in polynomial: {ast.dump(node)}")

    return ev(tree)
