from fractions import Fraction

import pytest

from cechlab.bundles import end_bundle, line_bundle, tangent_bundle
from cechlab.cech import (
    BoxError,
    CechEngine,
    DegreeBox,
    Exact,
    StableInBox,
    SymbolicParameterError,
    WitnessFound,
    _BoxModel,
    coboundary_generators,
    h1,
    is_coboundary,
    make_class,
    monomial_class,
    reduce_class,
    verify_witness,
)
from cechlab.deform import build_family
from cechlab.ring import LaurentPoly, exp_trunc
from cechlab.spaces import make_standard_space

from oracles import brute_h1_keys


def _deformed(family, k, t1=Fraction(1)):
    base = make_standard_space(family, k)
    r = base.uring
    z = LaurentPoly.var(r, 0)
    zero = LaurentPoly.zero(r)
    if family == "W" and k == 2:
        u2 = LaurentPoly.var(r, 2)
        cocycles = [(zero, z ** -1 * u2, zero)]
    else:
        cocycles = [(zero, z ** (-k + 1))]
    return build_family(base, cocycles, [t1]).perturbed


# -- coboundary generators -----------------------------------------------------


def test_v_generator_images():
    zm1 = make_standard_space("Z", -1)
    gens = coboundary_generators(line_bundle(zm1, -2), DegreeBox.make(-4, 1, 3, 1))
    # the V-monomial v maps to z^-2 * (z^-1 u) = z^-3 u
    images = {
        (tag["xi_power"], tuple(tag["v_exponents"])): str(cls.components[0])
        for tag, cls in gens
        if tag["side"] == "V"
    }
    assert images[(0, (1,))] == "z^-3*u"
    z1 = make_standard_space("Z", 1)
    gens = coboundary_generators(line_bundle(z1, -2), DegreeBox.make(-4, 1, 3, 1))
    images = {
        (tag["xi_power"], tuple(tag["v_exponents"])): str(cls.components[0])
        for tag, cls in gens
        if tag["side"] == "V"
    }
    assert images[(0, (1,))] == "z^-1*u"


def test_u_generators_are_themselves():
    w1 = make_standard_space("W", 1)
    gens = coboundary_generators(line_bundle(w1, -2), DegreeBox.make(-2, 1, 1, 2))
    for tag, cls in gens:
        if tag["side"] == "U":
            (exp,) = list(cls.components[0].terms)
            assert list(exp) == tag["exponents"]
            assert exp[0] >= 0


# -- h1, exact mode -------------------------------------------------------------


def test_h1_w1_tangent_vanishes():
    res = h1(tangent_bundle(make_standard_space("W", 1)), DegreeBox.make(-8, 2, 8, 2))
    assert res.generators == []
    assert isinstance(res.certification, Exact)


def test_h1_w2_tangent_basis():
    res = h1(tangent_bundle(make_standard_space("W", 2)), DegreeBox.make(-8, 2, 8, 2))
    assert set(res.generator_keys()) == {(2, (-1, 0, j)) for j in range(9)}
    assert res.dims_by_fiber_degree == {d: 1 for d in range(9)}
    assert res.pattern == "1 classes per fiber degree (0..8)"


def test_h1_z1_single_class():
    res = h1(line_bundle(make_standard_space("Z", 1), -2), DegreeBox.make(-8, 2, 8, 1))
    assert res.generator_keys() == [(1, (-1, 0))]
    assert isinstance(res.certification, Exact)


def test_h1_zminus1_window():
    res = h1(line_bundle(make_standard_space("Z", -1), -2), DegreeBox.make(-12, -1, 4, 1))
    expected = {(1, (l, i)) for i in range(5) for l in range(-1 - i, 0)}
    assert set(res.generator_keys()) == expected


def test_h1_invariant_under_box_enlargement():
    bundle = tangent_bundle(make_standard_space("W", 2))
    small = DegreeBox.make(-6, 1, 4, 2)
    big = DegreeBox.make(-10, 3, 8, 2)
    keys_small = set(h1(bundle, small).generator_keys())
    keys_big = {
        k for k in h1(bundle, big).generator_keys() if small.contains_exp(k[1])
    }
    assert keys_small == keys_big


def test_h1_exact_matches_brute_force_oracle():
    cases = [
        (line_bundle(make_standard_space("Z", -1), -2), -6, 1, 3, 8),
        (line_bundle(make_standard_space("Z", 2), -3), -6, 1, 3, 8),
        (line_bundle(make_standard_space("W", 2), -4), -5, 1, 2, 8),
        (tangent_bundle(make_standard_space("W", 3)), -5, 1, 2, 8),
        (end_bundle(tangent_bundle(make_standard_space("W", 2))), -3, 0, 1, 5),
    ]
    for bundle, lo, hi, fm, margin in cases:
        res = h1(bundle, DegreeBox.make(lo, hi, fm, bundle.space.fiber_count))
        assert isinstance(res.certification, Exact)
        got = sorted((c - 1, k) for c, k in res.generator_keys())
        want = brute_h1_keys(bundle, lo, hi, fm, margin=margin)
        assert got == want, (bundle.name, got, want)


def test_exact_and_box_modes_agree_on_monomial_models():
    # force the windowed path on an exact-capable bundle
    bundle = line_bundle(make_standard_space("Z", -1), -2)
    box = DegreeBox.make(-5, 1, 3, 1)
    exact_res = h1(bundle, box)
    eng = CechEngine(bundle)
    eng.exact = None
    eng.box_model = _BoxModel(bundle)
    box_res = eng.h1(box)
    assert box_res.generator_keys() == exact_res.generator_keys()
    assert isinstance(box_res.certification, StableInBox)


# -- is_coboundary --------------------------------------------------------------


def test_coboundary_true_with_witness_on_z1():
    z1 = make_standard_space("Z", 1)
    bundle = line_bundle(z1, -2)
    ring = z1.uring
    z = LaurentPoly.var(ring, 0)
    u = LaurentPoly.var(ring, 1)
    cls = make_class(bundle, [z ** -2 * exp_trunc(u, 8)])
    ok, cert = is_coboundary(bundle, cls, DegreeBox.make(-8, 2, 8, 1))
    assert ok and isinstance(cert, WitnessFound)
    assert verify_witness(bundle, cls, cert)
    # the witness on the V side is the truncated series in V variables
    assert not cert.beta[0].is_zero()


def test_noncoboundary_exact_on_w2():
    bundle = tangent_bundle(make_standard_space("W", 2))
    cls = monomial_class(bundle, 2, (-1, 0, 3))
    ok, cert = is_coboundary(bundle, cls, DegreeBox.make(-6, 2, 4, 2))
    assert not ok and isinstance(cert, Exact)


def test_noncoboundary_stable_on_deformed_w2():
    space = _deformed("W", 2)
    bundle = line_bundle(space, -4)
    box = DegreeBox.make(-8, 8, 6, 2)
    cls = monomial_class(bundle, 1, (-1, 0, 0))
    ok, cert = is_coboundary(bundle, cls, box)
    assert not ok
    assert isinstance(cert, StableInBox) and cert.rounds == 2
    assert cert.box.base_lo == -16  # two rounds of +4


def test_coboundary_on_deformed_z2_hand_identity():
    space = _deformed("Z", 2)
    bundle = line_bundle(space, -2)
    cls = monomial_class(bundle, 1, (-1, 0))
    ok, cert = is_coboundary(bundle, cls, DegreeBox.make(-6, 2, 6, 1))
    assert ok and verify_witness(bundle, cls, cert)
    # the hand identity z^-1 = -u + z^-2 (z^2 u + z) is itself a valid witness
    ring = space.uring
    vring = space.vring
    hand = WitnessFound(
        (-LaurentPoly.var(ring, 1),), (LaurentPoly.var(vring, 1),)
    )
    assert verify_witness(bundle, cls, hand)


def test_class_outside_box_rejected():
    bundle = line_bundle(make_standard_space("Z", 1), -2)
    cls = monomial_class(bundle, 1, (-9, 0))
    with pytest.raises(BoxError):
        is_coboundary(bundle, cls, DegreeBox.make(-4, 2, 3, 1))


def test_cell_limit_env_var(monkeypatch):
    from cechlab.cech import CellLimitError

    monkeypatch.setenv("CECH_MAX_CELLS", "10")
    space = _deformed("W", 2)
    bundle = line_bundle(space, -4)
    with pytest.raises(CellLimitError):
        h1(bundle, DegreeBox.make(-8, 8, 6, 2))


def test_symbolic_parameters_rejected():
    base = make_standard_space("Z", 2)
    r = base.uring
    fam = build_family(base, [(LaurentPoly.zero(r), LaurentPoly.var(r, 0, -1))])
    with pytest.raises(SymbolicParameterError):
        h1(line_bundle(fam.perturbed, -2), DegreeBox.make(-4, 2, 3, 1))


# -- reduce_class ----------------------------------------------------------------


def test_reduce_series_on_zminus1():
    zm1 = make_standard_space("Z", -1)
    bundle = line_bundle(zm1, -2)
    ring = zm1.uring
    z = LaurentPoly.var(ring, 0)
    u = LaurentPoly.var(ring, 1)
    cls = make_class(bundle, [z ** -2 * exp_trunc(u, 6)])
    res = reduce_class(bundle, cls, DegreeBox.make(-8, 2, 6, 1))
    want = LaurentPoly.zero(ring)
    for i in range(1, 7):
        fact = 1
        for n in range(2, i + 1):
            fact *= n
        want = want + z ** -2 * u ** i * Fraction(1, fact)
    assert res.representative.components[0] == want
    # the difference carries a verifiable witness
    diff = make_class(bundle, [cls.components[0] - res.representative.components[0]])
    assert verify_witness(bundle, diff, res.witness)


def test_reduce_coboundary_to_zero():
    z1 = make_standard_space("Z", 1)
    bundle = line_bundle(z1, -2)
    ring = z1.uring
    z = LaurentPoly.var(ring, 0)
    u = LaurentPoly.var(ring, 1)
    cls = make_class(bundle, [z ** -2 * u ** 3])
    res = reduce_class(bundle, cls, DegreeBox.make(-6, 2, 4, 1))
    assert res.representative.is_zero()


def test_reduce_is_idempotent():
    w3 = make_standard_space("W", 3)
    bundle = line_bundle(w3, -2)
    box = DegreeBox.make(-6, 2, 4, 2)
    cls = monomial_class(bundle, 1, (-2, 0, 3))
    res = reduce_class(bundle, cls, box)
    assert res.representative.components[0] == cls.components[0]  # already canonical
    again = reduce_class(bundle, res.representative, box)
    assert again.representative.components == res.representative.components


def test_w3_pullback_classes_survive_reduction():
    w3 = make_standard_space("W", 3)
    bundle = line_bundle(w3, -2)
    box = DegreeBox.make(-6, 2, 6, 2)
    for m in range(1, 7):
        cls = monomial_class(bundle, 1, (-2, 0, m))
        ok, cert = is_coboundary(bundle, cls, box)
        assert not ok and isinstance(cert, Exact)


def test_every_generator_fails_is_coboundary_and_rest_reduce_into_basis():
    # spec invariant, checked on a surface and a threefold bundle
    cases = [
        (line_bundle(make_standard_space("Z", -1), -2), DegreeBox.make(-5, 1, 3, 1)),
        (tangent_bundle(make_standard_space("W", 2)), DegreeBox.make(-4, 1, 3, 2)),
    ]
    for bundle, box in cases:
        res = h1(bundle, box)
        basis = set(res.generator_keys())
        for comp, poly in res.generators:
            (exp,) = list(poly.terms)
            ok, _ = is_coboundary(bundle, monomial_class(bundle, comp, exp), box)
            assert not ok
        # every omitted in-window monomial reduces into the basis
        from itertools import product

        f = bundle.space.fiber_count
        ranges = [range(box.base_lo, box.base_hi + 1)] + [
            range(0, box.fiber_max[j] + 1) for j in range(f)
        ]
        for c in range(bundle.rank):
            for combo in product(*ranges):
                key = (c + 1, tuple(combo))
                if key in basis:
                    continue
                cls = monomial_class(bundle, c + 1, tuple(combo))
                red = reduce_class(bundle, cls, box)
                keys = {
                    (i + 1, e)
                    for i, p in enumerate(red.representative.components)
                    for e in p.terms
                }
                assert keys <= basis


def test_reduce_in_box_mode_on_deformed_space():
    space = _deformed("Z", 2)
    bundle = line_bundle(space, -2)
    box = DegreeBox.make(-5, 2, 4, 1)
    ring = space.uring
    z = LaurentPoly.var(ring, 0)
    u = LaurentPoly.var(ring, 1)
    cls = make_class(bundle, [z ** -1 + z ** -2 * u])
    res = reduce_class(bundle, cls, box)
    assert res.representative.is_zero()  # deformed Z_2 has no obstructions here
    assert verify_witness(bundle, cls, res.witness)
    assert isinstance(res.certification, StableInBox)


def test_end_bundle_exact_mode_and_trivial_family():
    # regression lock for the flagged discrepancy: z^-1 u1 u2^m at entry (2,1)
    # of End(TW_2) is an exact coboundary with the E11 witness
    from cechlab.bundles import flat_index

    w2 = make_standard_space("W", 2)
    eb = end_bundle(tangent_bundle(w2))
    for m in (0, 2):
        cls = monomial_class(eb, flat_index(3, 2, 1), (-1, 1, m))
        ok, cert = is_coboundary(eb, cls, DegreeBox.make(-6, 2, (2, m + 1), 2))
        assert ok and verify_witness(eb, cls, cert)
        alpha = [p for p in cert.alpha if not p.is_zero()]
        assert len(alpha) == 1  # supported on E11 alone
    # while z^-i u2^m at (2,1) are nontrivial
    for i in (1, 2, 3):
        cls = monomial_class(eb, flat_index(3, 2, 1), (-i, 0, 1))
        ok, cert = is_coboundary(eb, cls, DegreeBox.make(-6, 2, (2, 2), 2))
        assert not ok and isinstance(cert, Exact)
