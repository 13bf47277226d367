"""Scene files, canonical JSON, and export renderers.

A scene is a JSON object carrying a "field" description and exactly one
task block among skeleton, retract, newton, trop, flow, family, plus an
optional "format" (json, dot, svg, csv).  Rendering is deterministic:
object keys are sorted, rationals are printed in lowest terms, and no
run-dependent data (timestamps, addresses, float noise) ever reaches the
output, so re-running a scene reproduces its artifact byte for byte.
"""

from __future__ import annotations

import json
import random
from fractions import Fraction

from .errors import InconsistencyError, PreconditionError, SceneError
from .fields import field_from_json
from .gamma import Gamma, INF
from .gflow import build_complex, cell_dimension, final_image_membership, flow
from .newton import branch_events, root_valuations_along_path
from .pline import (
    PLinePoint,
    gauss_point,
    infinity_point,
    normalize_point,
    psi_divisor,
    retract,
    simple_point,
    skeleton,
    skeleton_contains,
)
from .topo import family_sweep
from .trop import tau_h

__all__ = [
    "FORMATS",
    "TASKS",
    "canon_json",
    "load_scene",
    "parse_gamma",
    "parse_point",
    "point_json",
    "run_scene",
    "tree_dot",
    "tree_json",
]

TASKS = ("skeleton", "retract", "newton", "trop", "flow", "family")
FORMATS = ("json", "dot", "svg", "csv")


def canon_json(obj) -> str:
    return json.dumps(obj, sort_keys=True, indent=2) + "\n"


def rat_str(x) -> str:
    return str(Fraction(x))


def parse_rat(obj) -> Fraction:
    if isinstance(obj, bool) or not isinstance(obj, (int, str)):
        raise SceneError(f"expected an exact rational, got {obj!r}")
    try:
        return Fraction(obj)
    except (ValueError, ZeroDivisionError) as exc:
        raise SceneError(f"bad rational literal {obj!r}") from exc


def gamma_json(g: Gamma) -> str:
    return "inf" if g.is_inf else rat_str(g.finite)


def parse_gamma(obj) -> Gamma:
    if isinstance(obj, str) and obj in ("inf", "oo"):
        return INF
    return Gamma(parse_rat(obj))


def parse_point(field, obj) -> PLinePoint:
    """A point from scene data: "inf", a field element, or a chart triple."""
    if isinstance(obj, str) and obj in ("inf", "oo"):
        return infinity_point(field)
    if isinstance(obj, dict) and "chart" in obj:
        chart = obj["chart"]
        if chart not in ("std", "inv"):
            raise SceneError(f"unknown chart {chart!r}")
        center = field.elem_from_json(obj.get("center", 0))
        radius = parse_gamma(obj.get("radius", "inf"))
        return normalize_point(field, PLinePoint(chart, center, radius))
    return simple_point(field, field.elem_from_json(obj))


def point_json(field, p: PLinePoint) -> dict:
    q = normalize_point(field, p)
    return {
        "chart": q.chart,
        "center": field.elem_to_json(q.center),
        "radius": gamma_json(q.radius),
    }


def _elem_str(field, a) -> str:
    enc = field.elem_to_json(a)
    if isinstance(enc, str):
        return enc
    return json.dumps(enc, sort_keys=True, separators=(",", ":"))


def _point_label(field, q: PLinePoint) -> str:
    if q == gauss_point(field):
        return "gauss"
    if q == infinity_point(field):
        return "infinity"
    prefix = "x" if q.chart == "std" else "1/x"
    if q.radius.is_inf:
        return f"{prefix}={_elem_str(field, q.center)}"
    return f"B_{prefix}({_elem_str(field, q.center)}; {gamma_json(q.radius)})"


def tree_json(field, tree) -> dict:
    vertices = [
        {"point": point_json(field, q), "tags": sorted(tree.tags[i])}
        for i, q in enumerate(tree.points)
    ]
    edges = [
        {"child": i, "parent": p, "length": gamma_json(tree.lengths[i])}
        for i, p in enumerate(tree.parent)
        if p is not None
    ]
    return {"root": tree.root, "vertices": vertices, "edges": edges}


def tree_dot(field, tree, name: str = "skeleton") -> str:
    lines = [f"graph {name} {{", '  node [fontname="monospace"];']
    for i, q in enumerate(tree.points):
        label = _point_label(field, q)
        if tree.tags[i]:
            label += " {" + ",".join(sorted(tree.tags[i])) + "}"
        label = label.replace('"', '\\"')
        lines.append(f'  v{i} [label="{label}"];')
    for p, c, ln in tree.edges():
        lines.append(f'  v{p} -- v{c} [label="{gamma_json(ln)}"];')
    lines.append("}")
    return "\n".join(lines) + "\n"


def load_scene(path) -> dict:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            data = json.load(fh)
    except OSError as exc:
        raise SceneError(f"cannot read scene file: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise SceneError(f"scene is not valid JSON: {exc}") from exc
    if not isinstance(data, dict):
        raise SceneError("scene must be a JSON object")
    return data


def scene_task(scene: dict) -> str:
    present = [t for t in TASKS if t in scene]
    if len(present) != 1:
        raise SceneError(
            f"scene needs exactly one task block, found {present if present else 'none'}"
        )
    return present[0]


def run_scene(scene: dict, fmt=None, seed: int = 0, check: bool = False) -> bytes:
    if "field" not in scene:
        raise SceneError("scene needs a field description")
    field = field_from_json(scene["field"])
    task = scene_task(scene)
    block = scene[task]
    if not isinstance(block, dict):
        raise SceneError(f"the {task} block must be a JSON object")
    chosen = fmt if fmt is not None else scene.get("format", "json")
    if chosen not in FORMATS:
        raise SceneError(f"unknown format {chosen!r}")
    runner = _RUNNERS[task]
    return runner(field, block, chosen, seed, check)


# --- skeleton -------------------------------------------------------------


def _divisor_points(field, block) -> list:
    divisor = block.get("divisor")
    if not isinstance(divisor, list) or not divisor:
        raise SceneError("divisor must be a nonempty list of points")
    return [parse_point(field, d) for d in divisor]


def _run_skeleton(field, block, fmt, seed, check) -> bytes:
    pts = _divisor_points(field, block)
    tree = skeleton(field, pts)
    if check:
        _check_skeleton(field, tree, pts)
    if fmt == "json":
        return canon_json(tree_json(field, tree)).encode("utf-8")
    if fmt == "dot":
        return tree_dot(field, tree).encode("utf-8")
    raise SceneError("skeleton scenes render as json or dot")


def _check_skeleton(field, tree, pts) -> None:
    tree.validate()
    if tree.points[tree.root] != gauss_point(field):
        raise InconsistencyError("skeleton root is not the Gauss point")
    for d in pts:
        q = normalize_point(field, d)
        if retract(field, q, pts) != q:
            raise InconsistencyError("divisor point moved by its own retraction")


# --- retract --------------------------------------------------------------


def _run_retract(field, block, fmt, seed, check) -> bytes:
    pts = _divisor_points(field, block)
    if "point" not in block:
        raise SceneError("retract block needs a point")
    a = parse_point(field, block["point"])
    q = retract(field, a, pts)
    if check:
        _check_retract(field, a, q, pts, seed)
    if fmt == "json":
        return canon_json({"image": point_json(field, q)}).encode("utf-8")
    raise SceneError("retract scenes render as json")


def _check_retract(field, a, q, pts, seed) -> None:
    rng = random.Random(seed)
    if retract(field, q, pts) != q:
        raise InconsistencyError("retraction is not idempotent")
    tree = skeleton(field, pts)
    if not skeleton_contains(field, tree, q):
        raise InconsistencyError("retraction image left the skeleton")
    base = psi_divisor(field, 0, a, pts)
    for _ in range(5):
        t = Fraction(rng.randint(0, 24), rng.randint(1, 4))
        via = psi_divisor(field, 0, psi_divisor(field, t, a, pts), pts)
        if via != base:
            raise InconsistencyError("homotopy endpoint depends on the stopover time")


# --- newton ---------------------------------------------------------------


def _parse_bivariate(field, block) -> list:
    coeffs = block.get("coeffs")
    if not isinstance(coeffs, list) or not coeffs:
        raise SceneError("newton block needs a nonempty coeffs table")
    rows = []
    for row in coeffs:
        if not isinstance(row, list):
            raise SceneError("each coeffs row must be a list")
        rows.append([field.elem_from_json(a) for a in row])
    return rows


def _run_newton(field, block, fmt, seed, check) -> bytes:
    rows = _parse_bivariate(field, block)
    center = field.elem_from_json(block.get("center", 0))
    profile = root_valuations_along_path(field, rows, center)
    events = branch_events(profile)
    if check:
        _check_newton(profile, events)
    if fmt == "json":
        return canon_json(_profile_json(profile, events)).encode("utf-8")
    if fmt == "csv":
        return _profile_csv(profile).encode("utf-8")
    if fmt == "svg":
        return _profile_svg(profile).encode("utf-8")
    raise SceneError("newton scenes render as json, csv, or svg")


def _root_json(fn, mult) -> dict:
    if fn.is_infinite:
        return {"mult": mult, "value": "inf"}
    if len(fn.terms) == 1:
        s, o = fn.terms[0]
        return {"mult": mult, "slope": rat_str(s), "intercept": rat_str(o)}
    return {
        "mult": mult,
        "terms": [[rat_str(s), rat_str(o)] for s, o in fn.terms],
    }


def _profile_json(profile, events) -> dict:
    pieces = []
    for lo, hi, roots in profile.pieces:
        pieces.append(
            {
                "lo": gamma_json(lo),
                "hi": gamma_json(hi),
                "roots": [_root_json(fn, m) for fn, m in roots],
            }
        )
    return {"pieces": pieces, "events": [gamma_json(e) for e in events]}


def _profile_csv(profile) -> str:
    lines = ["lo,hi,slope,intercept,mult"]
    for lo, hi, roots in profile.pieces:
        for fn, mult in roots:
            if fn.is_infinite:
                s = o = "inf"
            else:
                (sl, ic), = fn.terms
                s, o = rat_str(sl), rat_str(ic)
            lines.append(f"{gamma_json(lo)},{gamma_json(hi)},{s},{o},{mult}")
    return "\n".join(lines) + "\n"


_PALETTE = ("#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#8c564b", "#e377c2")


def _px(x) -> str:
    return f"{float(x):.2f}"


def _profile_svg(profile) -> str:
    """Root-valuation graphs over the radius interval [0, 10]."""
    horizon = Fraction(10)
    segs = []
    ys = [Fraction(0)]
    for lo, hi, roots in profile.pieces:
        a = lo.finite
        if a > horizon:
            continue
        b = horizon if hi.is_inf or hi.finite > horizon else hi.finite
        for fn, mult in roots:
            if fn.is_infinite:
                continue
            (s, o), = fn.terms
            y0, y1 = s * a + o, s * b + o
            segs.append((a, y0, b, y1, mult))
            ys.extend([y0, y1])
    lo_y, hi_y = min(ys), max(ys)
    if hi_y == lo_y:
        hi_y = lo_y + 1
    width, height, margin = 640, 400, 50

    def sx(t):
        return margin + (t / horizon) * (width - 2 * margin)

    def sy(v):
        return height - margin - ((v - lo_y) / (hi_y - lo_y)) * (height - 2 * margin)

    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" '
        f'viewBox="0 0 {width} {height}">',
        f'<rect width="{width}" height="{height}" fill="white"/>',
        f'<line x1="{margin}" y1="{height - margin}" x2="{width - margin}" '
        f'y2="{height - margin}" stroke="black"/>',
        f'<line x1="{margin}" y1="{margin}" x2="{margin}" '
        f'y2="{height - margin}" stroke="black"/>',
        f'<text x="{width - margin}" y="{height - margin + 20}" '
        f'font-size="12" text-anchor="end">t = {rat_str(horizon)}</text>',
        f'<text x="{margin - 8}" y="{margin}" font-size="12" '
        f'text-anchor="end">{rat_str(hi_y)}</text>',
        f'<text x="{margin - 8}" y="{height - margin}" font-size="12" '
        f'text-anchor="end">{rat_str(lo_y)}</text>',
    ]
    for lo, hi, _ in profile.pieces[:-1]:
        if hi.is_inf or hi.finite > horizon:
            continue
        x = sx(hi.finite)
        parts.append(
            f'<line x1="{_px(x)}" y1="{margin}" x2="{_px(x)}" '
            f'y2="{height - margin}" stroke="#999999" stroke-dasharray="4 3"/>'
        )
    for k, (a, y0, b, y1, mult) in enumerate(segs):
        color = _PALETTE[k % len(_PALETTE)]
        parts.append(
            f'<line x1="{_px(sx(a))}" y1="{_px(sy(y0))}" x2="{_px(sx(b))}" '
            f'y2="{_px(sy(y1))}" stroke="{color}" stroke-width="{1 + mult}"/>'
        )
    parts.append("</svg>")
    return "\n".join(parts) + "\n"


def _flat_values(roots, t):
    out = []
    for fn, mult in roots:
        v = fn.eval(t)
        out.extend([gamma_json(v)] * mult)
    return sorted(out)


def _check_newton(profile, events) -> None:
    masses = {sum(m for _, m in roots) for _, _, roots in profile.pieces}
    if len(masses) != 1:
        raise InconsistencyError("root mass is not conserved across pieces")
    for (lo1, hi1, r1), (lo2, hi2, r2) in zip(profile.pieces, profile.pieces[1:]):
        if hi1 != lo2:
            raise InconsistencyError("profile pieces do not abut")
        if _flat_values(r1, hi1) != _flat_values(r2, lo2):
            raise InconsistencyError("root valuations jump at a piece boundary")
    for a, b in zip(events, events[1:]):
        if not a < b:
            raise InconsistencyError("branch events are not strictly increasing")


# --- trop -----------------------------------------------------------------


def _parse_trop_input(field, obj):
    if isinstance(obj, list):
        if len(obj) != 2:
            raise SceneError("homogeneous coordinates must be a pair")
        return [field.elem_from_json(a) for a in obj]
    return parse_point(field, obj)


def _run_trop(field, block, fmt, seed, check) -> bytes:
    rows = block.get("map")
    if not isinstance(rows, list) or not rows:
        raise SceneError("trop block needs a map given as coefficient rows")
    table = []
    for row in rows:
        if not isinstance(row, list):
            raise SceneError("each map row must be a coefficient list")
        table.append([field.elem_from_json(a) for a in row])
    raw_points = block.get("points")
    if not isinstance(raw_points, list) or not raw_points:
        raise SceneError("trop block needs a nonempty points list")
    inputs = [_parse_trop_input(field, x) for x in raw_points]
    values = [tau_h(field, table, x) for x in inputs]
    if check:
        _check_trop(field, table, inputs, values, seed)
    if fmt == "json":
        payload = {"values": [[gamma_json(g) for g in v.coords] for v in values]}
        return canon_json(payload).encode("utf-8")
    if fmt == "csv":
        header = ",".join(f"g{i}" for i in range(len(values[0].coords)))
        lines = [header]
        lines += [",".join(gamma_json(g) for g in v.coords) for v in values]
        return ("\n".join(lines) + "\n").encode("utf-8")
    raise SceneError("trop scenes render as json or csv")


def _check_trop(field, table, inputs, values, seed) -> None:
    rng = random.Random(seed)
    for x, v in zip(inputs, values):
        if not isinstance(x, list):
            continue
        lam = field.coerce(Fraction(rng.randint(1, 30)))
        scaled = [lam * u for u in x]
        if tau_h(field, table, scaled) != v:
            raise InconsistencyError("tropical image is not scaling invariant")


# --- flow -----------------------------------------------------------------


def _run_flow(field, block, fmt, seed, check) -> bytes:
    keys = ("w", "h", "functionals", "xi", "region", "symmetry")
    layout = {k: block[k] for k in keys if k in block}
    K = build_complex(layout)
    if "start" not in block:
        raise SceneError("flow block needs a start point")
    start = block["start"]
    raw_t = block.get("t", "inf")
    t = INF if (isinstance(raw_t, str) and raw_t in ("inf", "oo")) else parse_rat(raw_t)
    res = flow(K, t, start)
    if check:
        _check_flow(K, t, start, res, seed)
    if fmt == "json":
        payload = {
            "endpoint": [gamma_json(g) for g in res.endpoint],
            "steps": [
                {
                    "cell": "".join(s.cell.pattern),
                    "duration": gamma_json(s.duration),
                    "direction": [rat_str(d) for d in s.direction],
                }
                for s in res.steps
            ],
            "total": gamma_json(res.total_time),
        }
        return canon_json(payload).encode("utf-8")
    raise SceneError("flow scenes render as json")


def _check_flow(K, t, start, res, seed) -> None:
    rng = random.Random(seed)
    if not final_image_membership(K, res.endpoint):
        raise InconsistencyError("flow endpoint escapes the stable set")
    dims = [cell_dimension(K, s.cell) for s in res.steps]
    if dims != sorted(dims, reverse=True) or len(set(dims)) != len(dims):
        raise InconsistencyError("visited cell dimensions fail to decrease")
    for s in res.steps:
        if s.direction[K.h_index] != 0:
            raise InconsistencyError("flow direction moves the preserved height")
    if t is INF or (isinstance(t, Gamma) and t.is_inf):
        s = Fraction(rng.randint(0, 40), rng.randint(1, 4))
        two = flow(K, INF, flow(K, s, start).endpoint)
        if two.endpoint != res.endpoint:
            raise InconsistencyError("flow fails the semigroup law")
    else:
        frac = Fraction(rng.randint(0, 8), 8)
        s = Fraction(t) * frac
        two = flow(K, Fraction(t) - s, flow(K, s, start).endpoint)
        if two.endpoint != res.endpoint:
            raise InconsistencyError("flow fails the semigroup law")


# --- family ---------------------------------------------------------------


def _family_callable(field, divisor):
    entries = []
    for e in divisor:
        if isinstance(e, str) and e in ("inf", "oo"):
            entries.append(("inf", None))
        elif isinstance(e, str) and e == "b":
            entries.append(("b", None))
        elif isinstance(e, dict) and "affine" in e:
            aff = e["affine"]
            if not isinstance(aff, list) or len(aff) != 2:
                raise SceneError("affine entries need [constant, slope]")
            c0 = field.coerce(field.elem_from_json(aff[0]))
            c1 = field.coerce(field.elem_from_json(aff[1]))
            entries.append(("affine", (c0, c1)))
        else:
            entries.append(("const", field.coerce(field.elem_from_json(e))))

    def fam(b):
        out = []
        for kind, data in entries:
            if kind == "inf":
                out.append("inf")
            elif kind == "b":
                out.append(b)
            elif kind == "affine":
                c0, c1 = data
                out.append(c0 + c1 * b)
            else:
                out.append(data)
        return out

    return fam


def _run_family(field, block, fmt, seed, check) -> bytes:
    divisor = block.get("divisor")
    if not isinstance(divisor, list) or not divisor:
        raise SceneError("family block needs a divisor template")
    raw_samples = block.get("samples")
    if not isinstance(raw_samples, list) or not raw_samples:
        raise SceneError("family block needs a nonempty samples list")
    samples = [field.coerce(field.elem_from_json(b)) for b in raw_samples]
    fam = _family_callable(field, divisor)
    classes = family_sweep(field, fam, samples)
    if check:
        _check_family(field, fam, samples, classes, len(divisor), seed)
    if fmt == "json":
        payload = {
            "classes": {
                code: [field.elem_to_json(b) for b in members]
                for code, members in classes.items()
            }
        }
        return canon_json(payload).encode("utf-8")
    if fmt == "dot":
        graphs = []
        for idx, code in enumerate(sorted(classes)):
            rep = classes[code][0]
            pts = [
                infinity_point(field) if isinstance(e, str) else simple_point(field, e)
                for e in fam(rep)
            ]
            graphs.append(tree_dot(field, skeleton(field, pts), name=f"class{idx}"))
        return "".join(graphs).encode("utf-8")
    if fmt == "csv":
        lines = ["class,sample"]
        for idx, code in enumerate(sorted(classes)):
            for b in classes[code]:
                lines.append(f"{idx},{_elem_str(field, b)}")
        return ("\n".join(lines) + "\n").encode("utf-8")
    raise SceneError("family scenes render as json, dot, or csv")


def _check_family(field, fam, samples, classes, width, seed) -> None:
    if width <= 5 and len(classes) > 16:
        raise InconsistencyError("family produced more classes than the finiteness bound")
    shuffled = list(samples)
    random.Random(seed).shuffle(shuffled)
    again = family_sweep(field, fam, shuffled)

    def norm(cl):
        return {k: sorted(_elem_str(field, b) for b in v) for k, v in cl.items()}

    if norm(again) != norm(classes):
        raise InconsistencyError("family partition depends on sample order")


_RUNNERS = {
    "skeleton": _run_skeleton,
    "retract": _run_retract,
    "newton": _run_newton,
    "trop": _run_trop,
    "flow": _run_flow,
    "family": _run_family,
}
