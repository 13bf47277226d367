"""Piecewise-linear downhill flows on a finite product of value coordinates.

A cell complex is cut out of Q^w by finitely many affine functionals;
cells are the nonempty sign patterns.  A distinguished coordinate h
measures height.  Cells on which every coordinate is bounded by a
natural-number multiple of x_h plus a constant are stable; every other
cell carries the exact barycenter direction of its recession slice
[v_h = 0, sum v = 1], and the flow moves points against that direction
until they reach the stable set or exhaust their time budget.  Points
with x_h = infinity never move.

All geometry is exact: feasibility and suprema run through the rational
simplex in polyhedra, recession cones through exact ray enumeration.
The continuation rule composes steps as x - tau * e_C and restarts in
the boundary cell reached at the exit time; cell dimensions strictly
decrease at each crossing, so runs terminate, and the two situations the
construction cannot produce (a flow direction that leaves its cell's
affine hull, and an unbounded recession slice on an unstable cell) stop
the run with an inconsistency error instead of guessing.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping, Sequence

from .errors import InconsistencyError, PreconditionError
from .gamma import Gamma, INF
from .polyhedra import (
    OPTIMAL,
    UNBOUNDED,
    cone_generators,
    dot,
    lp_max,
    rank,
    strict_feasible,
)

LT, EQ, GT = "<", "=", ">"


@dataclass(frozen=True, slots=True)
class Functional:
    """Affine test x -> sign(alpha . x - c)."""

    alpha: tuple
    c: Fraction

    def sign(self, x: Sequence) -> str:
        v = dot(self.alpha, x) - self.c
        return EQ if v == 0 else (GT if v > 0 else LT)


@dataclass(frozen=True, slots=True)
class Cell:
    """Sign pattern over the complex's functional list."""

    pattern: tuple


@dataclass(frozen=True, slots=True)
class FlowStep:
    duration: Gamma
    cell: Cell
    direction: tuple


@dataclass(frozen=True, slots=True)
class FlowResult:
    steps: tuple
    endpoint: tuple

    @property
    def total_time(self) -> Gamma:
        total = Gamma(0)
        for s in self.steps:
            total = total + s.duration
        return total


def _rat(x) -> Fraction:
    if isinstance(x, float):
        raise PreconditionError("exact rational input required, not float")
    if isinstance(x, str):
        return Fraction(x)
    return Fraction(x)


class CellComplex:
    """Immutable decomposition data; geometric caches fill in lazily."""

    def __init__(self, w, h, functionals, xis=(), region=()):
        self.w = tuple(w)
        self.h = h
        self.h_index = self.w.index(h)
        self.functionals = tuple(functionals)
        self.xis = tuple(xis)
        self.region = tuple(region)
        self.n = len(self.w)
        self._cells = None
        self._dim = {}
        self._cone = {}
        self._d0 = {}
        self._bary = {}

    def point(self, x) -> tuple:
        """Coerce a mapping or sequence to a coordinate tuple of Gamma."""
        if isinstance(x, Mapping):
            missing = [name for name in self.w if name not in x]
            if missing:
                raise PreconditionError(f"point is missing coordinates {missing}")
            vals = [x[name] for name in self.w]
        else:
            vals = list(x)
            if len(vals) != self.n:
                raise PreconditionError("point has the wrong number of coordinates")
        out = []
        for v in vals:
            if isinstance(v, Gamma):
                out.append(v)
            elif isinstance(v, str) and v in ("inf", "oo"):
                out.append(INF)
            else:
                out.append(Gamma(_rat(v)))
        return tuple(out)


def _affine(layout, w) -> tuple:
    """Parse one {'alpha': ..., 'c': ...} block to (alpha tuple, c)."""
    if isinstance(layout, Mapping):
        alpha_raw = layout.get("alpha", {})
        c = _rat(layout.get("c", 0))
    else:
        alpha_raw, c = layout
        c = _rat(c)
    if isinstance(alpha_raw, Mapping):
        unknown = [k for k in alpha_raw if k not in w]
        if unknown:
            raise PreconditionError(f"unknown coordinates {unknown}")
        alpha = tuple(_rat(alpha_raw.get(name, 0)) for name in w)
    else:
        if len(alpha_raw) != len(w):
            raise PreconditionError("coefficient list length must match w")
        alpha = tuple(_rat(a) for a in alpha_raw)
    return alpha, c


def _canonical_functional(alpha: tuple, c: Fraction) -> tuple:
    lead = next((a for a in alpha if a != 0), None)
    if lead is None:
        scale = Fraction(1) if c == 0 else Fraction(1) / abs(c)
    else:
        scale = Fraction(1) / abs(lead)
    return tuple(a * scale for a in alpha), c * scale


def build_complex(layout: Mapping) -> CellComplex:
    """Assemble a complex from coordinate names, functionals, and options.

    ``layout`` needs "w" (coordinate names) and "h" (the distinguished
    name); optional "functionals", "xi", "region" are lists of
    {"alpha": ..., "c": ...} blocks (alpha a name map or a list aligned
    with w; functional sign and region sense are alpha . x - c vs 0,
    region meaning alpha . x >= c).  Optional "symmetry" lists
    permutations of w as name maps; the functional list is closed under
    the group they generate.
    """
    w = tuple(layout.get("w", ()))
    if not w or len(set(w)) != len(w):
        raise PreconditionError("w must list distinct coordinate names")
    h = layout.get("h")
    if h not in w:
        raise PreconditionError("h must be one of the coordinates")
    funcs = []
    seen = set()
    for block in layout.get("functionals", ()):
        alpha, c = _affine(block, w)
        key = _canonical_functional(alpha, c)
        if key not in seen:
            seen.add(key)
            funcs.append(Functional(alpha, c))
    perms = []
    for p in layout.get("symmetry", ()):
        if sorted(p) != sorted(w) or sorted(p.values()) != sorted(w):
            raise PreconditionError("symmetry entries must be permutations of w")
        perms.append({name: p[name] for name in w})
    changed = True
    while changed:
        changed = False
        for perm in perms:
            idx = [w.index(perm[name]) for name in w]
            for f in list(funcs):
                moved = [Fraction(0)] * len(w)
                for j, name in enumerate(w):
                    moved[idx[j]] = f.alpha[j]
                alpha = tuple(moved)
                key = _canonical_functional(alpha, f.c)
                if key not in seen:
                    seen.add(key)
                    funcs.append(Functional(alpha, f.c))
                    changed = True
    xis = [_affine(block, w) for block in layout.get("xi", ())]
    region = [_affine(block, w) for block in layout.get("region", ())]
    return CellComplex(w, h, funcs, xis, region)


def locate_cell(K: CellComplex, x) -> Cell:
    """Sign pattern of a point with all-finite coordinates."""
    coords = _finite_coords(K, x)
    return Cell(tuple(f.sign(coords) for f in K.functionals))


def _finite_coords(K: CellComplex, x) -> tuple:
    pt = K.point(x)
    if any(v.is_inf for v in pt):
        raise PreconditionError("point must have all-finite coordinates")
    return tuple(v.finite for v in pt)


def _cell_constraints(K: CellComplex, cell: Cell) -> tuple:
    """(equalities, strict inequalities) as (alpha, rhs) with alpha.x > rhs."""
    if len(cell.pattern) != len(K.functionals):
        raise PreconditionError("cell pattern does not match the complex")
    eqs, gts = [], []
    for f, s in zip(K.functionals, cell.pattern):
        if s == EQ:
            eqs.append((f.alpha, f.c))
        elif s == GT:
            gts.append((f.alpha, f.c))
        elif s == LT:
            gts.append((tuple(-a for a in f.alpha), -f.c))
        else:
            raise PreconditionError(f"invalid sign {s!r} in cell pattern")
    return eqs, gts


def cell_dimension(K: CellComplex, cell: Cell) -> int:
    if cell.pattern not in K._dim:
        eqs, _ = _cell_constraints(K, cell)
        K._dim[cell.pattern] = K.n - rank([a for a, _ in eqs], K.n)
    return K._dim[cell.pattern]


def _recession(K: CellComplex, cell: Cell) -> tuple:
    if cell.pattern not in K._cone:
        eqs, gts = _cell_constraints(K, cell)
        K._cone[cell.pattern] = cone_generators(
            [a for a, _ in eqs], [a for a, _ in gts], K.n
        )
    return K._cone[cell.pattern]


def _m_bound(K: CellComplex, cell: Cell, i: int):
    """Minimal m in N with x_i <= m*x_h + c valid on the cell, or None."""
    lin, rays = _recession(K, cell)
    hi = None
    lo = Fraction(0)
    pinned = None
    for l in lin:
        if l[K.h_index] != 0:
            m = l[i] / l[K.h_index]
            if pinned is not None and pinned != m:
                return None
            pinned = m
        elif l[i] != 0:
            return None
    for g in rays:
        gh = g[K.h_index]
        if gh > 0:
            lo = max(lo, g[i] / gh)
        elif gh == 0:
            if g[i] > 0:
                return None
        else:
            bound = g[i] / gh
            hi = bound if hi is None else min(hi, bound)
    if pinned is not None:
        if pinned.denominator != 1 or pinned < lo or (hi is not None and pinned > hi):
            return None
        return int(pinned)
    m = -((-lo.numerator) // lo.denominator)  # ceil
    if hi is not None and m > hi:
        return None
    return m


def classify_D0(K: CellComplex, cell: Cell) -> bool:
    """True when every coordinate is bounded by some m*x_h + c on the cell."""
    if cell.pattern not in K._d0:
        K._d0[cell.pattern] = all(
            _m_bound(K, cell, i) is not None for i in range(K.n)
        )
    return K._d0[cell.pattern]


def recession_barycenter(K: CellComplex, cell: Cell) -> tuple:
    """Flow direction: 0 on stable cells, else the exact barycenter of
    the recession slice [v_h = 0, sum v = 1], which must be a nonempty
    bounded polytope with nonnegative vertices."""
    if cell.pattern in K._bary:
        return K._bary[cell.pattern]
    if classify_D0(K, cell):
        e = tuple(Fraction(0) for _ in range(K.n))
        K._bary[cell.pattern] = e
        return e
    eqs, gts = _cell_constraints(K, cell)
    unit_h = tuple(
        Fraction(1 if j == K.h_index else 0) for j in range(K.n)
    )
    lin, rays = cone_generators(
        [a for a, _ in eqs] + [unit_h], [a for a, _ in gts], K.n
    )
    if lin:
        raise InconsistencyError(
            "recession slice of an unstable cell has a lineality direction"
        )
    if not rays:
        raise InconsistencyError("recession slice of an unstable cell is empty")
    vertices = []
    for r in rays:
        s = sum(r)
        if s <= 0:
            raise InconsistencyError(
                "recession slice of an unstable cell is unbounded"
            )
        vertices.append(tuple(x / s for x in r))
    k = Fraction(len(vertices))
    e = tuple(sum(col, Fraction(0)) / k for col in zip(*vertices))
    if any(x < 0 for x in e):
        raise InconsistencyError("flow direction has a negative component")
    K._bary[cell.pattern] = e
    return e


def exit_time(K: CellComplex, cell: Cell, e: Sequence, x) -> Gamma:
    """First time x - t*e leaves the cell; infinite when it never does."""
    coords = _finite_coords(K, x)
    if locate_cell(K, coords) != cell:
        raise PreconditionError("point does not lie in the given cell")
    if all(v == 0 for v in e):
        raise PreconditionError("exit time needs a nonzero direction")
    best = INF
    _, gts = _cell_constraints(K, cell)
    for alpha, rhs in gts:
        ae = dot(alpha, e)
        if ae > 0:
            t = Gamma((dot(alpha, coords) - rhs) / ae)
            if t < best:
                best = t
    return best


def flow(K: CellComplex, t, x) -> FlowResult:
    """Run the downhill flow for time t (infinite t runs to termination)."""
    t = t if isinstance(t, Gamma) else Gamma(_rat(t))
    if t < 0:
        raise PreconditionError("flow time must be nonnegative")
    pt = K.point(x)
    if pt[K.h_index].is_inf:
        return FlowResult((), pt)
    coords = _finite_coords(K, pt)
    if K.region and not all(dot(a, coords) >= c for a, c in K.region):
        raise PreconditionError("start point lies outside the region")
    steps = []
    remaining = t
    prev_dim = None
    while True:
        cell = locate_cell(K, coords)
        dim = cell_dimension(K, cell)
        if prev_dim is not None and dim >= prev_dim:
            raise InconsistencyError(
                "flow re-entered a cell of equal or higher dimension"
            )
        prev_dim = dim
        if classify_D0(K, cell):
            break
        e = recession_barycenter(K, cell)
        eqs, _ = _cell_constraints(K, cell)
        if any(dot(alpha, e) != 0 for alpha, _ in eqs):
            raise InconsistencyError(
                "flow direction leaves the cell's affine hull"
            )
        tau = exit_time(K, cell, e, coords)
        if remaining.is_inf and tau.is_inf:
            raise InconsistencyError(
                "trajectory never reaches the stable set"
            )
        dt = tau if tau < remaining else remaining
        coords = tuple(c - dt.finite * ei for c, ei in zip(coords, e))
        steps.append(FlowStep(dt, cell, e))
        if remaining <= tau:
            break
        remaining = remaining - dt
    endpoint = tuple(Gamma(c) for c in coords)
    return FlowResult(tuple(steps), endpoint)


def final_image_membership(K: CellComplex, x) -> bool:
    """True on the stable set: x_h infinite or the located cell stable."""
    pt = K.point(x)
    if pt[K.h_index].is_inf:
        return True
    return classify_D0(K, locate_cell(K, pt))


def cells(K: CellComplex) -> tuple:
    """All nonempty sign cells, found by witness propagation."""
    if K._cells is not None:
        return K._cells
    partial = [((), tuple(Fraction(0) for _ in range(K.n)))]
    for f in K.functionals:
        grown = []
        for pattern, wit in partial:
            cur = f.sign(wit)
            grown.append((pattern + (cur,), wit))
            for s in (LT, EQ, GT):
                if s == cur:
                    continue
                eqs, gts = _pattern_constraints(K, pattern + (s,))
                found = strict_feasible(eqs, [], gts, K.n)
                if found is not None:
                    grown.append((pattern + (s,), found))
        partial = grown
    K._cells = tuple(Cell(p) for p, _ in sorted(partial))
    return K._cells


def _pattern_constraints(K: CellComplex, prefix: tuple) -> tuple:
    eqs, gts = [], []
    for f, s in zip(K.functionals, prefix):
        if s == EQ:
            eqs.append((f.alpha, f.c))
        elif s == GT:
            gts.append((f.alpha, f.c))
        else:
            gts.append((tuple(-a for a in f.alpha), -f.c))
    return eqs, gts


def core_bounds(K: CellComplex) -> dict:
    """Per-coordinate (m, c) with x_i <= m*x_h + c on the stable set
    intersected with the region; vacuous coordinates report (0, 0)."""
    if not K.region:
        raise PreconditionError("core bounds need a bounded-below region")
    active = []
    for cell in cells(K):
        if not classify_D0(K, cell):
            continue
        eqs, gts = _cell_constraints(K, cell)
        closure = [(a, r) for a, r in gts] + list(K.region)
        if strict_feasible(eqs, closure, [], K.n) is None:
            continue
        active.append((cell, eqs, closure))
    out = {}
    for i, name in enumerate(K.w):
        if not active:
            out[name] = (0, Fraction(0))
            continue
        m = max(_m_bound(K, cell, i) for cell, _, _ in active)
        best = None
        for _, eqs, closure in active:
            obj = tuple(
                Fraction(1 if j == i else 0) - m * Fraction(1 if j == K.h_index else 0)
                for j in range(K.n)
            )
            status, val, _ = lp_max(obj, eqs, closure, K.n)
            if status == UNBOUNDED:
                raise InconsistencyError(
                    "stable cell is unbounded above within the region"
                )
            if status == OPTIMAL and (best is None or val > best):
                best = val
        out[name] = (m, Fraction(0) if best is None else best)
    return out


def lipschitz_bound(K: CellComplex) -> Fraction:
    """Product bound on endpoint displacement per unit of start offset.

    Every trajectory visits each cell at most once, and within one cell
    the exit map x -> x - tau(x) e stretches sup-norm distances by at
    most 1 + |e|_inf * |alpha|_1 / (alpha . e) for the binding exit
    constraint, so the product over all unstable cells bounds the whole
    endpoint map along any chain.
    """
    L = Fraction(1)
    for cell in cells(K):
        if classify_D0(K, cell):
            continue
        eqs, gts = _cell_constraints(K, cell)
        if K.region and strict_feasible(eqs, list(K.region), gts, K.n) is None:
            # trajectories stay inside the region, so cells that never
            # meet it cannot contribute a stretch factor
            continue
        e = recession_barycenter(K, cell)
        factor = None
        einf = max(abs(v) for v in e)
        for alpha, _ in gts:
            ae = dot(alpha, e)
            if ae > 0:
                f = 1 + einf * sum(abs(a) for a in alpha) / ae
                factor = f if factor is None else max(factor, f)
        if factor is not None:
            L *= factor
    return L


def xi_value(K: CellComplex, index: int, x) -> Fraction:
    """Value of the indexed preserved function at a finite point."""
    alpha, c = K.xis[index]
    return dot(alpha, _finite_coords(K, x)) - c
