import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from fockweyl.algebra import (
    DiffOp,
    PolyXY,
    PolyZ,
    diffop_compose,
    graded_lex_key,
    mi_binom,
    mi_falling,
    multi_indices,
    multi_indices_of_degree,
    parse_poly,
    poly_derivative,
    poly_mul,
    pullback_j,
    pushforward_j,
    weyl_quantize_poly,
)

coef = st.complex_numbers(max_magnitude=2, allow_nan=False, allow_infinity=False).map(lambda c: complex(round(c.real, 3), round(c.imag, 3)))


def sparse(cls, dim, max_degree=3):
    keys = [(p, q) for p in multi_indices(dim, max_degree) for q in multi_indices(dim, max_degree - sum(p))]
    return st.dictionaries(st.sampled_from(keys), coef, max_size=5).map(lambda d: cls(d, dim))


polys_z = sparse(PolyZ, 2)
polys_xy = sparse(PolyXY, 1)
diffops = sparse(DiffOp, 1, 2)


def test_multi_indices_graded_lex_order():
    idx = multi_indices(2, 2)
    assert idx[0] == (0, 0)
    assert [sum(p) for p in idx] == sorted(sum(p) for p in idx)
    assert sorted(idx, key=graded_lex_key) == list(idx)
    assert len(multi_indices_of_degree(3, 2)) == 6


def test_multi_index_helpers():
    assert mi_binom((3, 2), (1, 1)) == 6
    with pytest.raises(ValueError):
        mi_binom((1,), (2,))
    assert mi_falling((4,), (2,)) == 12


def test_monomial_product_and_unit():
    z, zb = PolyZ.z(0, 1), PolyZ.zb(0, 1)
    assert poly_mul(z, zb) == PolyZ.monomial((1,), (1,))
    f = z + zb.scale(2j)
    assert f * PolyZ.constant(1.0, 1) == f


def test_modulus_identity():
    x, y = PolyXY.x(0, 1), PolyXY.y(0, 1)
    lhs = (x + y.scale(1j)) * (x - y.scale(1j))
    assert lhs == x * x + y * y


def test_derivatives():
    x, y = PolyXY.x(0, 1), PolyXY.y(0, 1)
    assert poly_derivative(x * x, 0) == x.scale(2)
    assert not poly_derivative(x, 1)
    z, zb = PolyZ.z(0, 1), PolyZ.zb(0, 1)
    # variable index n addresses the first antiholomorphic slot
    assert poly_derivative(z * zb * zb, 1) == (z * zb).scale(2)


def test_weyl_quantization_examples():
    x, y = PolyXY.x(0, 1), PolyXY.y(0, 1)
    assert weyl_quantize_poly(x) == DiffOp.x(0, 1)
    assert weyl_quantize_poly(y) == DiffOp.d(0, 1).scale(1j)
    expected = (DiffOp.x(0, 1) @ DiffOp.d(0, 1)).scale(1j) + DiffOp.identity(1).scale(0.5j)
    assert weyl_quantize_poly(x * y).allclose(expected)


def test_canonical_commutation():
    d, x = DiffOp.d(0, 1), DiffOp.x(0, 1)
    assert diffop_compose(d, x) == x @ d + DiffOp.identity(1)
    Wx, Wy = weyl_quantize_poly(PolyXY.x(0, 1)), weyl_quantize_poly(PolyXY.y(0, 1))
    assert (Wx @ Wy - Wy @ Wx).allclose(DiffOp.identity(1).scale(-1j))


@given(polys_z, polys_z, polys_z)
def test_poly_ring_laws(f, g, h):
    assert ((f * g) * h).allclose(f * (g * h), atol=1e-9)
    assert (f * (g + h)).allclose(f * g + f * h, atol=1e-9)
    assert (f * g).allclose(g * f, atol=0)


@given(diffops, diffops, diffops)
def test_diffop_composition_associative(a, b, c):
    assert ((a @ b) @ c).allclose(a @ (b @ c), atol=1e-9)


@given(diffops, polys_xy)
def test_diffop_apply_matches_composition(D, f):
    # (D o x^k) applied to 1 equals D applied to x^k
    f_x = PolyXY({(p, (0,)): c for (p, q), c in f.terms.items()}, 1)
    as_op = DiffOp({(p, (0,)): c for (p, _), c in f_x.terms.items()}, 1)
    lhs = (D @ as_op).apply(PolyXY.constant(1.0, 1))
    assert lhs.allclose(D.apply(f_x), atol=1e-9)


@given(polys_z)
def test_j_roundtrip(f):
    assert pushforward_j(pullback_j(f)).allclose(f, atol=1e-9)


@given(polys_z)
def test_evaluation_matches_conjugate(f):
    z = np.array([0.3 - 0.2j, -0.7 + 0.1j])
    assert np.isclose(f.conj()(z), np.conj(f(z)))
    assert np.isclose(pullback_j(f)(z.real, z.imag), f(z))


def test_parse_poly():
    f = parse_poly("2*x1^2*y1 - (1-0.5j)*y2 + 3", "xy")
    assert f.dim == 2
    assert f.coeff((2, 0), (1, 0)) == 2
    assert f.coeff((0, 0), (0, 1)) == -(1 - 0.5j)
    assert f.coeff((0, 0), (0, 0)) == 3
    g = parse_poly("z1*zb1 + 1j", "z")
    assert g == PolyZ.z(0, 1) * PolyZ.zb(0, 1) + PolyZ.constant(1j, 1)


def test_json_roundtrip():
    f = parse_poly("2*x1^2*y1 - 1j*y2", "xy")
    assert PolyXY.from_json(f.to_json(), 2) == f


@pytest.mark.parametrize("text", ["x1 +", "foo(x1)", "x0"])
def test_parse_poly_rejects_garbage(text):
    with pytest.raises(ValueError):
        parse_poly(text, "xy")
