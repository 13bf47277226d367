from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from berkline.errors import PreconditionError
from berkline.fields import PAdicField, TAdicField
from berkline.gamma import INF, Gamma
from berkline.pline import PLinePoint, STD, INV, gauss_point, simple_point, skeleton
from berkline.trop import (
    TropPoint,
    polydisk_gauss_val,
    semilattice_member,
    tau_h,
    trop_normalize,
)

Q5 = PAdicField(5)
QT = TAdicField()

H_PAIR = [[1, 0], [0, 1]]  # (x_0, x_1)
H_EMBED = [[1, 0, 0], [0, 0, 1], [0, 1, -1]]  # (x_0^2, x_1^2, x_0 x_1 - x_1^2)


def G(x):
    return Gamma(x)


def test_trop_normalize_examples():
    assert trop_normalize([G(1), G(0)]).coords == (G(1), G(0))
    assert trop_normalize([G(3), G(5), G(4)]).coords == (G(0), G(2), G(1))
    assert trop_normalize([INF, G(2)]).coords == (INF, G(0))
    assert trop_normalize([Fraction(1, 2), 3]).coords == (G(0), G(Fraction(5, 2)))
    with pytest.raises(PreconditionError):
        trop_normalize([INF, INF])
    with pytest.raises(PreconditionError):
        trop_normalize([])
    with pytest.raises(PreconditionError):
        TropPoint((G(1), G(2)))


@given(st.lists(st.one_of(st.fractions(min_value=-9, max_value=9, max_denominator=8), st.just(INF)), min_size=1, max_size=5))
def test_trop_normalize_property(raw):
    if all(isinstance(v, Gamma) and v.is_inf for v in raw):
        return
    pt = trop_normalize(raw)
    assert min(v._key() for v in pt.coords) == G(0)._key()


def test_tau_h_simple_examples():
    assert tau_h(Q5, H_PAIR, [1, 5]).coords == (G(0), G(1))
    assert tau_h(Q5, H_PAIR, [5, 1]).coords == (G(1), G(0))
    assert tau_h(Q5, [[1, 0, 0], [0, 1, 0], [0, 0, 1]], [1, 1]).coords == (G(0), G(0), G(0))
    assert tau_h(Q5, H_PAIR, [0, 1]).coords == (INF, G(0))
    with pytest.raises(PreconditionError):
        tau_h(Q5, [[0, 1]], [1, 0])  # x_1 vanishes at [1:0]
    with pytest.raises(PreconditionError):
        tau_h(Q5, H_PAIR, [0, 0])
    with pytest.raises(PreconditionError):
        tau_h(Q5, [[1, 0], [1]], [1, 1])


def test_tau_h_gauss():
    assert tau_h(Q5, H_PAIR, gauss_point(Q5)).coords == (G(0), G(0))


def test_tau_h_monomial_form():
    h = [{(1, 0): 1}, {(0, 1): 1}]
    assert tau_h(Q5, h, [1, 5]).coords == (G(0), G(1))
    h3 = [{(2, 0, 0): 1}, {(0, 1, 1): 1}]
    assert tau_h(Q5, h3, [1, 5, 25]).coords == (G(0), G(3))
    with pytest.raises(PreconditionError):
        tau_h(Q5, [{(1, 0): 1}, {(2, 0): 1}], [1, 1])


def leg_points(side, s):
    if side == 0:
        return PLinePoint(STD, Fraction(0), G(s))
    if side == 1:
        return PLinePoint(STD, Fraction(1), G(s))
    return PLinePoint(INV, Fraction(0), G(s))


@given(st.fractions(min_value=0, max_value=12, max_denominator=8))
def test_tau_h_embedding_legs(s):
    assert tau_h(Q5, H_EMBED, leg_points(0, s)).coords == (G(0), G(2 * s), G(s))
    assert tau_h(Q5, H_EMBED, leg_points(1, s)).coords == (G(0), G(0), G(s))
    assert tau_h(Q5, H_EMBED, leg_points(2, s)).coords == (G(2 * s), G(0), G(0))


def test_tau_h_injective_on_star_sample():
    points = [leg_points(side, Fraction(k, 3)) for side in (0, 1, 2) for k in range(1, 8)]
    points.append(gauss_point(Q5))
    images = [tau_h(Q5, H_EMBED, p).coords for p in points]
    assert len(set(images)) == len(images)


@settings(max_examples=50)
@given(
    st.fractions(min_value=-8, max_value=8, max_denominator=6).filter(lambda z: z != 0),
    st.integers(min_value=0, max_value=2),
    st.fractions(min_value=0, max_value=9, max_denominator=6),
)
def test_tau_h_scaling_invariance(scale, side, s):
    p = leg_points(side, s)
    scaled = [[scale * Fraction(c) for c in row] for row in H_EMBED]
    assert tau_h(Q5, scaled, p) == tau_h(Q5, H_EMBED, p)


def test_polydisk_examples():
    assert polydisk_gauss_val(Q5, {(1, 1): 1}, [G(1), G(2)]) == G(3)
    assert polydisk_gauss_val(Q5, {(0, 0): 50}, [G(4), G(7)]) == G(2)
    assert polydisk_gauss_val(Q5, {(1,): 1, (0,): 5}, [G(2)]) == G(1)
    assert polydisk_gauss_val(Q5, {(1, 0): 1, (0, 0): 1}, [INF, G(0)]) == G(0)
    assert polydisk_gauss_val(Q5, {(1,): 1}, [INF]) == INF
    with pytest.raises(PreconditionError):
        polydisk_gauss_val(Q5, {}, [G(1)])
    with pytest.raises(PreconditionError):
        polydisk_gauss_val(Q5, {(1,): 1}, [G(-1)])
    with pytest.raises(PreconditionError):
        polydisk_gauss_val(Q5, {(1, 1): 1}, [G(1)])


def test_semilattice_examples():
    assert semilattice_member(Q5, {(1,): 1}, [G(1)], 1) is True
    assert semilattice_member(Q5, {(1,): Fraction(1, 5)}, [G(1)], 1) is True
    assert semilattice_member(Q5, {(0,): Fraction(1, 5)}, [G(1)], 3) is False
    assert semilattice_member(Q5, {}, [G(1)], 0) is True
    with pytest.raises(PreconditionError):
        semilattice_member(Q5, {(2, 0): 1}, [G(1), G(1)], 1)


mono_polys = st.dictionaries(
    st.tuples(st.integers(0, 2), st.integers(0, 2)),
    st.fractions(min_value=-20, max_value=20, max_denominator=25),
    min_size=1,
    max_size=4,
)
radii2 = st.tuples(
    st.fractions(min_value=0, max_value=6, max_denominator=4).map(G),
    st.fractions(min_value=0, max_value=6, max_denominator=4).map(G),
)


@given(mono_polys, mono_polys, radii2)
def test_semilattice_module_property(h1, h2, gamma):
    if not (semilattice_member(Q5, h1, gamma, 4) and semilattice_member(Q5, h2, gamma, 4)):
        return
    total = dict(h1)
    for e, c in h2.items():
        total[e] = total.get(e, Fraction(0)) + c
    assert semilattice_member(Q5, total, gamma, 4) is True


@given(mono_polys, radii2, st.integers(min_value=-6, max_value=6))
def test_semilattice_integral_scaling(h, gamma, k):
    if k < 0 or not semilattice_member(Q5, h, gamma, 4):
        return
    scaled = {e: Fraction(5) ** k * c for e, c in h.items()}
    assert semilattice_member(Q5, scaled, gamma, 4) is True


@given(
    st.tuples(st.integers(0, 3), st.integers(0, 3)),
    radii2,
    st.fractions(min_value=-30, max_value=30, max_denominator=25).filter(lambda c: c != 0),
)
def test_semilattice_dichotomy(e, gamma, c):
    # for one monomial direction the admissible scalars form a ball
    weight = polydisk_gauss_val(Q5, {e: Fraction(1)}, gamma)
    member = semilattice_member(Q5, {e: c}, gamma, 6)
    assert member == (Q5.val(c) + weight >= 0)


def test_trop_tadic_smoke():
    assert tau_h(QT, H_PAIR, [QT.one, QT.one + QT.one]).coords == (G(0), G(0))
    assert polydisk_gauss_val(QT, {(1,): QT.one}, [G(3)]) == G(3)
