"""Framed slope checks, filtrations, bounds, oriented verdicts and the
pair/module equivalences, on hand-built and randomized lattice models."""

import random
from fractions import Fraction as F

import pytest

from flipchain.stability import (
    AmbiguousModel,
    AxiomViolated,
    CurveContext,
    FramedModel,
    FramedType,
    MissingSplitData,
    SplitDescriptor,
    SubobjectData,
    close_constraints,
    final_chamber_stable,
    hn_filtration,
    is_fm_semistable,
    is_fm_stable,
    is_oriented_semistable,
    is_oriented_stable,
    is_pair_semistable,
    is_pair_stable,
    max_destabilizer,
    model_from_json_obj,
    model_to_json_obj,
    oriented_split_case,
    random_rank2_model,
    rank2_threshold_holds,
    reduced_framed_slope,
    run_stability_suite,
    sigma_max,
    sigma_upper_bound,
    verify_rank2_equivalences,
)

CTX = CurveContext(2)


def rank2(d, subs, framing=True, delta_iso=False, split=None):
    return FramedModel(CTX, FramedType(2, d, framing, delta_iso=delta_iso), tuple(subs), split)


def sub(sid, rank, deg, fr, phi=True, parents=()):
    return SubobjectData(sid, rank, deg, fr, phi_invariant=phi, parents=frozenset(parents))


# -- slopes -------------------------------------------------------------------


def test_reduced_framed_slope():
    assert reduced_framed_slope(1, -3, False, F(1), True) == -3
    assert reduced_framed_slope(2, -5, True, F(1), True) == -3
    assert reduced_framed_slope(1, -1, True, F(3), True) == -4
    # the ambient framing gates the charge
    assert reduced_framed_slope(1, -1, True, F(3), False) == -1


# -- framed module (semi)stability ---------------------------------------------


def test_fm_semistable_at_wall():
    m = rank2(-5, [sub("L", 1, -3, fr=False)])
    assert is_fm_semistable(m, F(1)) and not is_fm_stable(m, F(1))
    assert not is_fm_semistable(m, F(2))


def test_empty_model_is_stable_everywhere():
    m = rank2(-5, [])
    for s in (F(1, 2), F(1), F(7)):
        assert is_fm_stable(m, s)


def test_sigma_must_be_positive():
    m = rank2(-5, [])
    with pytest.raises(ValueError):
        is_fm_semistable(m, F(0))


def test_pair_quantifier_restriction():
    m = rank2(-5, [sub("L", 1, -3, fr=False, phi=False)])
    assert is_pair_semistable(m, F(2)) and not is_fm_semistable(m, F(2))
    m2 = rank2(-5, [sub("L", 1, -3, fr=False, phi=True)])
    assert not is_pair_semistable(m2, F(2))


def test_pair_equals_fm_when_everything_invariant():
    rng = random.Random(3)
    for _ in range(50):
        m = random_rank2_model(rng)
        m = FramedModel(
            m.ctx,
            m.typ,
            tuple(SubobjectData(s.id, s.rank, s.degree, s.fr, True, s.parents) for s in m.subs),
            m.split,
        )
        for s in (F(1, 2), F(1), F(3)):
            assert is_pair_semistable(m, s) == is_fm_semistable(m, s)
            assert is_pair_stable(m, s) == is_fm_stable(m, s)


# -- maximal destabilizer -------------------------------------------------------


def test_max_destabilizer_basic():
    m = rank2(-5, [sub("L", 1, -1, fr=True)])
    assert max_destabilizer(m, F(2)).id == "L"


def test_max_destabilizer_returns_sub_at_strict_equality():
    m = rank2(-5, [sub("L", 1, -3, fr=False)])
    assert max_destabilizer(m, F(1)).id == "L"


def test_max_destabilizer_none_cases():
    assert max_destabilizer(rank2(-5, []), F(1)) is None
    m = rank2(-5, [sub("L", 1, -4, fr=False)])  # slope -4 < -11/4
    assert max_destabilizer(m, F(1, 2)) is None


def test_max_destabilizer_rank_then_containment():
    ctx = CurveContext(2)
    inner = sub("inner", 1, -2, fr=False, parents={"outer"})
    outer = sub("outer", 2, -4, fr=False)  # same slope, larger rank
    m = FramedModel(ctx, FramedType(3, -9, True), (inner, outer))
    assert max_destabilizer(m, F(1)).id == "outer"


def test_max_destabilizer_containment_tie():
    inner = sub("inner", 1, -2, fr=False, parents={"outer"})
    outer = sub("outer", 1, -2, fr=False)
    m = rank2(-5, [inner, outer])
    assert max_destabilizer(m, F(1)).id == "outer"


def test_max_destabilizer_ambiguous():
    m = rank2(-5, [sub("a", 1, -2, fr=False), sub("b", 1, -2, fr=False)])
    with pytest.raises(AmbiguousModel):
        max_destabilizer(m, F(1))


# -- Harder-Narasimhan filtration ------------------------------------------------


def test_hn_two_step():
    m = rank2(-5, [sub("L", 1, -1, fr=True)])
    hn = hn_filtration(m, F(2))
    assert hn.steps == ("L",)
    assert hn.graded == ((1, -1, True), (1, -4, False))
    assert hn.graded_slopes(F(2)) == (F(-3), F(-4))


def test_hn_semistable_single_piece():
    m = rank2(-5, [sub("L", 1, -3, fr=False)])
    hn = hn_filtration(m, F(1))
    assert hn.steps == () and hn.graded == ((2, -5, True),)


def test_hn_three_step_chain():
    # nested destabilizers force a three-piece filtration
    f1 = sub("F1", 1, 2, fr=False, parents={"F2"})
    f2 = sub("F2", 2, 1, fr=False)
    m = FramedModel(CTX, FramedType(3, -6, True), (f1, f2))
    hn = hn_filtration(m, F(1))
    assert hn.steps == ("F1", "F2")
    assert hn.graded == ((1, 2, False), (1, -1, False), (1, -7, True))
    slopes = hn.graded_slopes(F(1))
    assert all(a > b for a, b in zip(slopes, slopes[1:]))


def test_hn_first_step_is_max_destabilizer():
    rng = random.Random(11)
    for _ in range(200):
        m = random_rank2_model(rng)
        for s in (F(1, 2), F(2), F(9, 2)):
            try:
                hn = hn_filtration(m, s)
            except AmbiguousModel:
                continue
            if not is_fm_semistable(m, s):
                assert hn.steps[0] == max_destabilizer(m, s).id
            slopes = hn.graded_slopes(s)
            assert all(a > b for a, b in zip(slopes, slopes[1:]))


# -- kernel bound and final chamber ----------------------------------------------


def test_sigma_upper_bound():
    assert sigma_upper_bound(rank2(-5, [sub("K", 1, -3, fr=False)])) == 5
    assert sigma_upper_bound(rank2(-6, [sub("K", 1, -4, fr=False)])) == 6
    assert sigma_upper_bound(rank2(-5, [sub("F", 1, -1, fr=True)])) is None


def test_sigma_upper_bound_with_frame_degree():
    ctx = CurveContext(2, frame_degree=3)
    m = FramedModel(ctx, FramedType(2, -5, True), (sub("K", 1, -3, fr=False),))
    assert sigma_upper_bound(m) == -5 - 2 * (-5 - 3)  # 11


def test_final_chamber_stable():
    assert final_chamber_stable(rank2(-5, [sub("F", 1, -1, fr=True)]))
    assert not final_chamber_stable(rank2(-5, [sub("K", 1, -3, fr=False)]))
    # and it matches direct evaluation past every wall
    m = rank2(-5, [sub("K", 1, -3, fr=False)])
    assert not is_fm_stable(m, F(6))


def test_final_chamber_matches_large_sigma():
    rng = random.Random(5)
    for _ in range(200):
        m = random_rank2_model(rng)
        d = m.typ.degree
        far = max(
            [F(d - 2 * s.degree) for s in m.subs if not s.fr]
            + [F(2 * s.degree - d) for s in m.subs if s.fr]
            + [F(0)]
        ) + 1
        assert final_chamber_stable(m) == is_fm_stable(m, far)


def test_sigma_max():
    assert sigma_max(rank2(-5, [sub("K", 1, -3, fr=False)])) == 1
    assert sigma_max(rank2(-6, [sub("K", 1, -4, fr=False)])) == 2
    assert sigma_max(rank2(-5, [sub("F", 1, -1, fr=True)])) is None


def test_sigma_max_phi_filter():
    m = rank2(-5, [sub("K", 1, -3, fr=False, phi=False), sub("K2", 1, -4, fr=False, phi=True)])
    assert sigma_max(m, use_phi=False) == 1
    assert sigma_max(m, use_phi=True) == 3


# -- oriented objects --------------------------------------------------------------


def test_oriented_first_disjunct():
    m = rank2(-5, [sub("F", 1, -2, fr=True)], delta_iso=False)
    assert is_oriented_semistable(m) and is_oriented_stable(m)


def test_oriented_needs_delta_iso():
    m = rank2(-5, [sub("L", 1, -3, fr=False)], delta_iso=False)
    assert not is_oriented_semistable(m)


def test_oriented_kernel_sub_charged_inequality():
    # At the canonical parameter 1 the kernel subobject satisfies the shifted
    # inequality strictly (-4 < -3), so the object is stable outright.
    m = rank2(-5, [sub("L", 1, -3, fr=False)], delta_iso=True)
    assert sigma_max(m) == 1
    assert is_oriented_semistable(m) and is_oriented_stable(m)


def test_oriented_negative_parameter_fails():
    m = rank2(-5, [sub("K", 1, -1, fr=False)], delta_iso=True)  # parameter -3
    assert sigma_max(m) == -3
    assert not is_oriented_semistable(m)


def test_oriented_equality_needs_split():
    # the complement summand sits exactly on the shifted equality
    k = sub("K", 1, -3, fr=False)
    c = sub("C", 1, -2, fr=True)
    plain = rank2(-5, [k, c], delta_iso=True)
    assert is_oriented_semistable(plain) and not is_oriented_stable(plain)
    split = rank2(-5, [k, c], delta_iso=True, split=SplitDescriptor("K", "C"))
    assert is_oriented_stable(split)
    with pytest.raises(MissingSplitData):
        oriented_split_case(plain)
    assert oriented_split_case(split)


def test_oriented_pair_filter():
    k = sub("K", 1, -3, fr=False, phi=True)
    bad = sub("B", 1, 0, fr=True, phi=False)  # violates the module-side inequality
    m = rank2(-5, [k, bad], delta_iso=True)
    assert not is_oriented_semistable(m, pair=False)
    assert is_oriented_semistable(m, pair=True)


# -- rank-2 equivalences -------------------------------------------------------------


def test_equivalences_hold_on_closed_model():
    m = rank2(-5, [sub("L", 1, -3, fr=False)], delta_iso=True)
    closed = close_constraints(m, [F(1, 2), F(1), F(2), F(3), F(4)])
    for s in (F(1, 2), F(1), F(2), F(3), F(4)):
        assert verify_rank2_equivalences(closed, s).ok


def test_equivalences_hold_with_irrelevant_noninvariant_sub():
    # only a non-destabilizing subobject lacks invariance: still closed
    m = rank2(
        -5,
        [sub("K", 1, -3, fr=False, phi=True), sub("W", 1, -4, fr=True, phi=False)],
        delta_iso=True,
    )
    rep = verify_rank2_equivalences(m, F(1, 2))
    assert rep.ok


def test_axiom_violated_and_why_it_matters():
    m = rank2(-5, [sub("B", 1, -1, fr=True, phi=False)], delta_iso=True)
    with pytest.raises(AxiomViolated):
        verify_rank2_equivalences(m, F(2))
    assert is_pair_semistable(m, F(2)) != is_fm_semistable(m, F(2))


def test_axiom_checked_at_canonical_parameter():
    # closed at the probed sigma but the canonical-parameter destabilizer is
    # not invariant, which would break the oriented comparison
    k = sub("K", 1, -3, fr=False, phi=True)
    f = sub("F", 1, 0, fr=True, phi=False)
    m = rank2(-5, [k, f], delta_iso=True)
    with pytest.raises(AxiomViolated):
        verify_rank2_equivalences(m, F(4))


def test_threshold_formulas():
    rng = random.Random(13)
    for _ in range(150):
        m = random_rank2_model(rng)
        amb_nz = m.typ.framing_nonzero
        for s in (F(1, 3), F(1), F(5, 2), F(4), F(13, 2)):
            amb = reduced_framed_slope(2, m.typ.degree, amb_nz, s, amb_nz)
            for so in m.subs:
                holds = reduced_framed_slope(so.rank, so.degree, so.fr, s, amb_nz) <= amb
                assert holds == rank2_threshold_holds(so, m.typ, s)
                strict = reduced_framed_slope(so.rank, so.degree, so.fr, s, amb_nz) < amb
                assert strict == rank2_threshold_holds(so, m.typ, s, strict=True)


# -- model validation and serialization ------------------------------------------------


def test_validation_rejects_bad_models():
    with pytest.raises(ValueError):
        rank2(-5, [sub("a", 1, 0, fr=True), sub("a", 1, 1, fr=True)])  # duplicate id
    with pytest.raises(ValueError):
        rank2(-5, [sub("a", 2, 0, fr=True)])  # rank not proper
    with pytest.raises(ValueError):
        rank2(-5, [sub("a", 1, 0, fr=True)], framing=False)  # fr without framing
    with pytest.raises(ValueError):
        rank2(-5, [sub("a", 1, 0, fr=True, parents={"missing"})])
    with pytest.raises(ValueError):  # fr=True inside a kernel subobject
        FramedModel(
            CTX,
            FramedType(3, -6, True),
            (sub("in", 1, -3, fr=True, parents={"out"}), sub("out", 2, -4, fr=False)),
        )
    with pytest.raises(ValueError):  # containment cycle
        rank2(-5, [sub("a", 1, 0, fr=True, parents={"b"}), sub("b", 1, 0, fr=True, parents={"a"})])
    with pytest.raises(ValueError):  # split summands must add up
        rank2(
            -5,
            [sub("K", 1, -3, fr=False), sub("C", 1, -1, fr=True)],
            split=SplitDescriptor("K", "C"),
        )


def test_model_json_round_trip():
    m = rank2(
        -5,
        [sub("K", 1, -3, fr=False), sub("C", 1, -2, fr=True, parents=())],
        delta_iso=True,
        split=SplitDescriptor("K", "C"),
    )
    assert model_from_json_obj(model_to_json_obj(m)) == m


# -- the seeded property suite ----------------------------------------------------------


def test_suite_small_run_clean():
    res = run_stability_suite(seed=123, n_models=300, chain_models=50)
    assert res.ok, res.failures[:5]
    assert res.models >= 350
    assert res.checks > 5000
