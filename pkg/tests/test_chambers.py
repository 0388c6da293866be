"""Wall lists, chamber location and flip-locus numerics."""

from fractions import Fraction

import pytest

from flipchain.chambers import (
    InvalidInput,
    OutOfRange,
    build_chambers,
    chamber_of,
    eta,
    flip_locus,
    fm_index_range,
    moduli_dim,
)


def test_eta():
    assert eta(0, -5) == 0
    assert eta(3, -5) == 1
    assert eta(4, -5) == 3


def test_build_chambers_d_minus5():
    cd = build_chambers(-5, 2)
    assert cd.walls == (1, 3)
    assert [c.fm_index for c in cd.chambers] == [2, 3, 4]
    assert cd.representatives == (Fraction(1, 2), Fraction(2), Fraction(4))
    assert cd.chambers[-1].closed_upper and cd.chambers[-1].upper == 5


def test_build_chambers_d_minus6():
    assert build_chambers(-6, 2).walls == (2, 4)


def test_build_chambers_single_wall():
    assert build_chambers(-3, 2).walls == (1,)


def test_build_chambers_no_walls():
    for d in (-1, -2):
        cd = build_chambers(d, 2)
        assert cd.walls == ()
        assert len(cd.chambers) == 1
        assert cd.chambers[0].upper == -d


def test_build_chambers_rejects_bad_input():
    with pytest.raises(InvalidInput):
        build_chambers(0, 2)
    with pytest.raises(InvalidInput):
        build_chambers(-5, 1)


def test_wall_endpoints_and_parity_sweep():
    for d in range(-20, -2):
        cd = build_chambers(d, 2)
        assert cd.walls[0] == (1 if d % 2 else 2)
        assert cd.walls[-1] == -d - 2
        lo, hi = fm_index_range(d)
        assert cd.walls == tuple(eta(i, d) for i in range(lo + 1, hi + 1))


def test_chamber_of():
    cd = build_chambers(-5, 2)
    assert chamber_of(Fraction(1, 2), cd).index == 0
    loc = chamber_of(Fraction(1), cd)
    assert loc.kind == "wall" and loc.wall == 1
    assert chamber_of(Fraction(6), cd).kind == "empty"
    assert chamber_of(Fraction(5), cd).index == 2  # right endpoint is included
    assert chamber_of(Fraction(7, 2), cd).index == 2
    with pytest.raises(InvalidInput):
        chamber_of(Fraction(0), cd)


def test_chambers_cover_everything():
    cd = build_chambers(-9, 3)
    probes = [Fraction(n, 7) for n in range(1, 64)]
    for s in probes:
        loc = chamber_of(s, cd)
        assert loc.kind in ("chamber", "wall", "empty")
        assert (loc.kind == "empty") == (s > 9)


def test_flip_locus_examples():
    fl = flip_locus(3, -5, 2)
    assert (fl.rank_minus, fl.rank_plus) == (4, 1)
    assert fl.dim_p_minus == 6 and fl.codim_minus == 1
    fl = flip_locus(2, -5, 2)
    assert (fl.rank_minus, fl.rank_plus) == (2, 2)
    assert fl.dim_p_minus == 5 and fl.codim_minus == 2


def test_flip_locus_range():
    with pytest.raises(OutOfRange):
        flip_locus(4, -5, 2)  # the last chamber has no flip above it
    with pytest.raises(OutOfRange):
        flip_locus(1, -5, 2)


def test_moduli_dim():
    assert moduli_dim(-5, 2) == 7
    assert moduli_dim(-1, 2) == 3
    assert moduli_dim(-5, 3) == 9


def test_single_subobject_walls_land_on_eta_values():
    # a single rank-1 subobject is strictly semistable exactly at |2 deg F - d|,
    # which is eta(deg F - d, d) for a framed subobject and eta(-deg F, d) for
    # a kernel one
    from flipchain.stability import CurveContext, FramedModel, FramedType, SubobjectData
    from flipchain.stability import is_fm_semistable, is_fm_stable

    for d in (-5, -6, -9):
        cd = build_chambers(d, 2)
        for deg, fr in ((d + 1, True), (0, True), ((d - 1) // 2, False), (d + 1, False)):
            sigma = 2 * deg - d if fr else d - 2 * deg
            if sigma <= 0:
                continue
            i = deg - d if fr else -deg
            assert sigma == eta(i, d)
            m = FramedModel(
                CurveContext(2),
                FramedType(2, d, True),
                (SubobjectData("F", 1, deg, fr),),
            )
            s = Fraction(sigma)
            if sigma <= -d:
                assert is_fm_semistable(m, s) and not is_fm_stable(m, s)
            if sigma <= -d - 2:
                assert sigma in cd.walls


def test_rank_sum_and_codim_sweep():
    for g in (2, 3, 4, 5):
        for d in range(-15, -2):
            lo, hi = fm_index_range(d)
            for i in range(lo, hi):
                fl = flip_locus(i, d, g)
                assert fl.rank_minus > 0 and fl.rank_plus > 0
                assert fl.rank_minus + fl.rank_plus == g + i
                if i < -d - 2:
                    assert fl.codim_minus >= 2 and fl.codim_plus >= 2
                else:
                    assert fl.codim_minus == 1
                    assert fl.dim_p_minus == -d + 2 * g - 3
