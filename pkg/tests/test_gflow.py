from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from berkline.errors import InconsistencyError, PreconditionError
from berkline.gamma import Gamma, INF
from berkline.gflow import (
    Cell,
    build_complex,
    cell_dimension,
    cells,
    classify_D0,
    core_bounds,
    exit_time,
    final_image_membership,
    flow,
    lipschitz_bound,
    locate_cell,
    recession_barycenter,
    xi_value,
)


def fr(x):
    return Fraction(x)


def plane():
    return build_complex(
        {
            "w": ["a", "h"],
            "h": "h",
            "functionals": [
                {"alpha": {"a": 1, "h": -1}, "c": 0},
                {"alpha": {"a": 1}, "c": 0},
                {"alpha": {"h": 1}, "c": 0},
            ],
            "xi": [{"alpha": {"h": 1}, "c": 0}],
            "region": [{"alpha": {"a": 1}, "c": 0}, {"alpha": {"h": 1}, "c": 0}],
        }
    )


def three():
    return build_complex(
        {
            "w": ["a", "b", "h"],
            "h": "h",
            "functionals": [
                {"alpha": {"a": 1}, "c": 0},
                {"alpha": {"b": 1}, "c": 0},
                {"alpha": {"h": 1}, "c": 0},
                {"alpha": {"a": 1, "h": -1}, "c": 0},
                {"alpha": {"b": 1, "h": -1}, "c": 0},
                {"alpha": {"a": 1, "b": -1}, "c": 0},
            ],
            "xi": [{"alpha": {"h": 1}, "c": 0}],
            "region": [
                {"alpha": {"a": 1}, "c": 0},
                {"alpha": {"b": 1}, "c": 0},
                {"alpha": {"h": 1}, "c": 0},
            ],
        }
    )


PLANE = plane()
THREE = three()
BOUNDS3 = core_bounds(THREE)
L3 = lipschitz_bound(THREE)


def test_build_validation():
    with pytest.raises(PreconditionError):
        build_complex({"w": [], "h": "h"})
    with pytest.raises(PreconditionError):
        build_complex({"w": ["a"], "h": "b"})
    with pytest.raises(PreconditionError):
        build_complex({"w": ["a", "a"], "h": "a"})
    with pytest.raises(PreconditionError):
        build_complex({"w": ["a"], "h": "a", "functionals": [{"alpha": {"z": 1}, "c": 0}]})


def test_symmetry_closure():
    K = build_complex(
        {
            "w": ["a", "b", "h"],
            "h": "h",
            "functionals": [{"alpha": {"a": 1}, "c": 0}],
            "symmetry": [{"a": "b", "b": "a", "h": "h"}],
        }
    )
    alphas = sorted(f.alpha for f in K.functionals)
    assert alphas == [(fr(0), fr(1), fr(0)), (fr(1), fr(0), fr(0))]


def test_duplicate_functionals_collapse():
    K = build_complex(
        {
            "w": ["a", "h"],
            "h": "h",
            "functionals": [
                {"alpha": {"a": 1}, "c": 0},
                {"alpha": {"a": 2}, "c": 0},
                {"alpha": {"a": -1}, "c": 0},
            ],
        }
    )
    assert len(K.functionals) == 2  # x_a and -x_a stay distinct, 2x_a folds


def test_thirteen_cells():
    assert len(cells(PLANE)) == 13


def test_empty_functional_list_single_cell():
    K = build_complex({"w": ["a", "h"], "h": "h"})
    assert cells(K) == (Cell(()),)


def test_locate_cell():
    K = PLANE
    assert locate_cell(K, [3, 1]).pattern == (">", ">", ">")
    assert locate_cell(K, [0, 0]).pattern == ("=", "=", "=")
    assert locate_cell(K, [1, 1]).pattern == ("=", ">", ">")
    with pytest.raises(PreconditionError):
        locate_cell(K, [INF, 1])


def test_classify_D0():
    K = PLANE
    assert classify_D0(K, locate_cell(K, [3, 1])) is False
    assert classify_D0(K, locate_cell(K, [1, 1])) is True
    assert classify_D0(K, locate_cell(K, [1, 2])) is True
    assert classify_D0(K, locate_cell(K, [0, 0])) is True
    assert classify_D0(K, locate_cell(K, [-3, 2])) is True


def test_barycenter_examples():
    K = PLANE
    assert recession_barycenter(K, locate_cell(K, [3, 1])) == (fr(1), fr(0))
    assert recession_barycenter(K, locate_cell(K, [1, 1])) == (fr(0), fr(0))
    T = THREE
    cell = locate_cell(T, [2, 3, 0])
    assert classify_D0(T, cell) is False
    assert recession_barycenter(T, cell) == (Fraction(1, 4), Fraction(3, 4), fr(0))


def test_exit_time_example():
    K = PLANE
    cell = locate_cell(K, [3, 1])
    e = recession_barycenter(K, cell)
    assert exit_time(K, cell, e, [3, 1]) == Gamma(2)
    with pytest.raises(PreconditionError):
        exit_time(K, cell, e, [1, 5])
    with pytest.raises(PreconditionError):
        exit_time(K, cell, (fr(0), fr(0)), [3, 1])


def test_flow_running_example():
    K = PLANE
    res = flow(K, INF, [3, 1])
    assert res.endpoint == (Gamma(1), Gamma(1))
    assert len(res.steps) == 1
    assert res.steps[0].duration == Gamma(2)
    assert res.steps[0].direction == (fr(1), fr(0))
    assert final_image_membership(K, res.endpoint) is True
    assert final_image_membership(K, [3, 1]) is False


def test_flow_fixes_stable_points():
    K = PLANE
    for x in ([1, 2], [0, 0], [1, 1]):
        res = flow(K, INF, x)
        assert res.steps == ()
        assert res.endpoint == K.point(x)


def test_flow_infinite_height_fixed():
    K = PLANE
    res = flow(K, INF, [7, INF])
    assert res.steps == () and res.endpoint == (Gamma(7), INF)
    assert final_image_membership(K, [7, INF]) is True


def test_flow_partial_time():
    K = PLANE
    res = flow(K, Fraction(1, 2), [3, 1])
    assert res.endpoint == (Gamma(Fraction(5, 2)), Gamma(1))
    res2 = flow(K, Fraction(3, 2), res.endpoint)
    assert res2.endpoint == (Gamma(1), Gamma(1))


def test_flow_two_crossings_dims_decrease():
    T = THREE
    res = flow(T, INF, [2, 3, 0])
    assert res.endpoint == (Gamma(0), Gamma(0), Gamma(0))
    dims = [cell_dimension(T, s.cell) for s in res.steps]
    assert dims == sorted(dims, reverse=True)
    assert len(set(dims)) == len(dims)
    assert [s.duration for s in res.steps] == [Gamma(2), Gamma(3)]


def test_flow_region_check():
    K = PLANE
    with pytest.raises(PreconditionError):
        flow(K, INF, [-1, 2])
    with pytest.raises(PreconditionError):
        flow(K, -1, [1, 1])


def test_lineality_inconsistency():
    K = build_complex(
        {"w": ["a", "h"], "h": "h", "functionals": [{"alpha": {"h": 1}, "c": 0}]}
    )
    cell = locate_cell(K, [5, 0])
    assert classify_D0(K, cell) is False
    with pytest.raises(InconsistencyError):
        recession_barycenter(K, cell)
    with pytest.raises(InconsistencyError):
        flow(K, INF, [5, 0])


def test_pinned_noninteger_inconsistency():
    K = build_complex(
        {"w": ["a", "h"], "h": "h", "functionals": [{"alpha": {"a": 2, "h": -1}, "c": 0}]}
    )
    cell = locate_cell(K, [1, 2])
    assert classify_D0(K, cell) is False
    with pytest.raises(InconsistencyError):
        recession_barycenter(K, cell)


def test_unbounded_slice_inconsistency():
    K = build_complex(
        {
            "w": ["a", "b", "h"],
            "h": "h",
            "functionals": [
                {"alpha": {"a": 1, "b": 1}, "c": 0},
                {"alpha": {"a": 1}, "c": 0},
                {"alpha": {"h": 1}, "c": 0},
            ],
        }
    )
    cell = locate_cell(K, [4, -4, 0])
    assert classify_D0(K, cell) is False
    with pytest.raises(InconsistencyError):
        recession_barycenter(K, cell)


def test_core_bounds_plane():
    K = PLANE
    bounds = core_bounds(K)
    assert bounds["a"] == (1, fr(0))
    assert bounds["h"] == (1, fr(0))
    with pytest.raises(PreconditionError):
        core_bounds(build_complex({"w": ["a", "h"], "h": "h"}))


coords2 = st.fractions(min_value=0, max_value=8, max_denominator=6)
coords3 = st.tuples(coords2, coords2, coords2)


@settings(max_examples=60, deadline=None)
@given(coords3)
def test_flow_terminates_on_stable_set(xyz):
    T = THREE
    res = flow(T, INF, list(xyz))
    assert final_image_membership(T, res.endpoint) is True
    # endpoint respects the reported core bounds
    for name, (m, c) in BOUNDS3.items():
        i = T.w.index(name)
        xh = res.endpoint[T.h_index].finite
        assert res.endpoint[i].finite <= m * xh + c
    # visited cells are distinct with strictly decreasing dimension
    dims = [cell_dimension(T, s.cell) for s in res.steps]
    assert dims == sorted(dims, reverse=True) and len(set(dims)) == len(dims)
    # xi (the height) is preserved along every step
    for s in res.steps:
        assert s.direction[T.h_index] == 0


@settings(max_examples=40, deadline=None)
@given(coords3, st.fractions(min_value=0, max_value=5, max_denominator=4), st.fractions(min_value=0, max_value=5, max_denominator=4))
def test_flow_semigroup(xyz, s, t):
    T = THREE
    one = flow(T, Fraction(s) + Fraction(t), list(xyz))
    two = flow(T, s, flow(T, t, list(xyz)).endpoint)
    assert one.endpoint == two.endpoint


@settings(max_examples=40, deadline=None)
@given(coords3, st.integers(min_value=0, max_value=2), st.fractions(min_value=0, max_value=Fraction(1, 4), max_denominator=16))
def test_flow_continuity_bound(xyz, axis, eps):
    T = THREE
    L = L3
    x = list(xyz)
    y = list(xyz)
    y[axis] = y[axis] + eps
    ex = flow(T, INF, x).endpoint
    ey = flow(T, INF, y).endpoint
    gap = max(abs(u.finite - v.finite) for u, v in zip(ex, ey))
    assert gap <= L * eps


def test_xi_value():
    K = PLANE
    assert xi_value(K, 0, [3, 1]) == 1
    res = flow(K, INF, [3, 1])
    assert xi_value(K, 0, res.endpoint) == 1
