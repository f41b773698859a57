import pytest

from cechlab.bundles import (
    IncompatibleTransition,
    direct_sum,
    dual,
    end_bundle,
    extension_bundle,
    flat_index,
    line_bundle,
    mat_identity,
    mat_mul,
    pullback_bundle,
    restrict_to_line,
    tangent_bundle,
    tensor,
)
from cechlab.ring import LaurentPoly, exp_trunc
from cechlab.spaces import make_standard_space


def test_line_bundle_examples():
    w2 = make_standard_space("W", 2)
    assert str(line_bundle(w2, -4).M[0][0]) == "z^4"
    zm1 = make_standard_space("Z", -1)
    assert str(line_bundle(zm1, -2).M[0][0]) == "z^2"
    assert str(line_bundle(w2, 0).M[0][0]) == "1"


def test_tangent_matrices_match_hand_jacobians():
    w2 = make_standard_space("W", 2)
    m = tangent_bundle(w2).M
    assert [[str(e) for e in row] for row in m] == [
        ["-z^-2", "0", "0"],
        ["2*z*u1", "z^2", "0"],
        ["0", "0", "1"],
    ]
    w3 = make_standard_space("W", 3)
    m = tangent_bundle(w3).M
    assert [[str(e) for e in row] for row in m] == [
        ["-z^-2", "0", "0"],
        ["3*z^2*u1", "z^3", "0"],
        ["-z^-2*u2", "0", "z^-1"],
    ]
    for k in (-1, 2, 5):
        zk = make_standard_space("Z", k)
        m = tangent_bundle(zk).M
        ring = zk.uring
        z = LaurentPoly.var(ring, 0)
        u = LaurentPoly.var(ring, 1)
        assert m[0][0] == -(z ** -2) and m[0][1].is_zero()
        assert m[1][0] == k * z ** (k - 1) * u and m[1][1] == z ** k


def test_inverse_is_exact_for_all_constructions():
    w2 = make_standard_space("W", 2)
    for b in (
        line_bundle(w2, -3),
        tangent_bundle(w2),
        end_bundle(tangent_bundle(w2)),
        dual(tangent_bundle(w2)),
        tensor(line_bundle(w2, 1), tangent_bundle(w2)),
        direct_sum(line_bundle(w2, 2), line_bundle(w2, -2)),
    ):
        ident = mat_identity(w2.uring, b.rank)
        assert mat_mul(b.M, b.Minv) == ident
        assert mat_mul(b.Minv, b.M) == ident


def test_end_flattening_convention():
    assert flat_index(3, 2, 1) == 4
    assert flat_index(3, 2, 3) == 6
    assert flat_index(3, 3, 1) == 7


def test_end_of_line_bundle_is_trivial():
    w2 = make_standard_space("W", 2)
    e = end_bundle(line_bundle(w2, -5))
    assert str(e.M[0][0]) == "1"


def test_end_determinant_is_one():
    from cechlab.bundles import mat_det

    z2 = make_standard_space("Z", 2)
    e = end_bundle(tangent_bundle(z2))  # 4x4 determinant stays tractable
    assert mat_det(e.M) == LaurentPoly.const(z2.uring, 1)


def test_end_fixes_identity_section():
    # conjugation invariance: M_End applied to vec(I) returns vec(I)
    w2 = make_standard_space("W", 2)
    e = end_bundle(tangent_bundle(w2))
    ring = w2.uring
    ident_vec = [
        LaurentPoly.const(ring, 1) if (i % 4 == 0) else LaurentPoly.zero(ring)
        for i in range(9)
    ]
    out = [
        sum((e.M[i][j] * ident_vec[j] for j in range(9)), LaurentPoly.zero(ring))
        for i in range(9)
    ]
    assert out == ident_vec


def test_extension_matrix_examples():
    zm1 = make_standard_space("Z", -1)
    ring = zm1.uring
    z = LaurentPoly.var(ring, 0)
    u = LaurentPoly.var(ring, 1)
    p = z ** -2 * exp_trunc(u, 2)
    ext = extension_bundle(zm1, -1, 1, p)
    assert ext.M[0][0] == z
    assert ext.M[0][1] == z ** -1 * exp_trunc(u, 2)
    assert ext.M[1][0].is_zero()
    assert ext.M[1][1] == z ** -1
    split = extension_bundle(zm1, -1, 1, LaurentPoly.zero(ring))
    assert split.M[0][1].is_zero()


def test_restrict_to_line():
    zm1 = make_standard_space("Z", -1)
    ring = zm1.uring
    z = LaurentPoly.var(ring, 0)
    u = LaurentPoly.var(ring, 1)
    ext = extension_bundle(zm1, -1, 1, z ** -2 * exp_trunc(u, 5))
    line = restrict_to_line(ext)
    assert [[str(e) for e in row] for row in line] == [["z", "z^-1"], ["0", "z^-1"]]
    w2 = make_standard_space("W", 2)
    line = restrict_to_line(tangent_bundle(w2))
    assert [[str(e) for e in row] for row in line] == [
        ["-z^-2", "0", "0"],
        ["0", "z^2", "0"],
        ["0", "0", "1"],
    ]


def test_pullback_examples():
    zm1 = make_standard_space("Z", -1)
    w3 = make_standard_space("W", 3)
    ring = zm1.uring
    z = LaurentPoly.var(ring, 0)
    u = LaurentPoly.var(ring, 1)
    ext = extension_bundle(zm1, -1, 1, z ** -2 * exp_trunc(u, 4))
    pulled = pullback_bundle(ext, w3, {1: 2})
    r3 = w3.uring
    z3 = LaurentPoly.var(r3, 0)
    u2 = LaurentPoly.var(r3, 2)
    assert pulled.M[0][1] == z3 ** -1 * exp_trunc(u2, 4)
    # scalar bundles pull back unchanged
    o = pullback_bundle(line_bundle(zm1, -7), w3, {1: 2})
    assert o.M[0][0] == z3 ** 7
    # Z_1 rule z u does not match v2 = z^-1 u2
    z1 = make_standard_space("Z", 1)
    with pytest.raises(IncompatibleTransition):
        pullback_bundle(line_bundle(z1, -2), w3, {1: 2})


def test_pullback_commutes_with_restrict():
    zm1 = make_standard_space("Z", -1)
    w3 = make_standard_space("W", 3)
    ring = zm1.uring
    z = LaurentPoly.var(ring, 0)
    u = LaurentPoly.var(ring, 1)
    ext = extension_bundle(zm1, -1, 1, z ** -2 * exp_trunc(u, 4))
    a = restrict_to_line(pullback_bundle(ext, w3, {1: 2}))
    b = restrict_to_line(ext)
    flat_a = [[sorted((e[0],) for e in entry.terms) for entry in row] for row in a]
    flat_b = [[sorted((e[0],) for e in entry.terms) for entry in row] for row in b]
    assert flat_a == flat_b


def test_dual_and_tensor_degrees():
    w2 = make_standard_space("W", 2)
    d = dual(line_bundle(w2, 3))
    assert str(d.M[0][0]) == "z^3"  # O(3)* = O(-3)
    t = tensor(line_bundle(w2, 2), line_bundle(w2, -5))
    assert str(t.M[0][0]) == "z^3"  # O(-3)
