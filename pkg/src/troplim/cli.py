"""Command-line surface: one subcommand per pipeline stage.

Every run produces a deterministic report: results ordered by input path,
sha256 digests instead of timestamps, rationals rendered as "p/q" strings.
`--json` emits the report as canonical JSON on stdout; the default is a
short human summary.  `--output` captures the primary artifact: for
`refine` the refined fan file, for `dualcx` and `subdivide` the resulting
complex file, and for every other subcommand the JSON report itself.

Exit codes: 0 success, 2 validation failure, 3 parse failure, 4 resource
cap (ambient rank or tower depth).  `--parallel k` maps independent input
files across k workers; the report order stays sorted by path regardless
of completion order.
"""

from __future__ import annotations

import argparse
import math
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

from .complexes import (
    DeltaComplex,
    compare_fiber,
    count_cells,
    euler_characteristic,
    from_incidence,
    induced_map,
    map_fiber,
    rational_points,
    scale_subdivide,
    toric_fiber_complex,
)
from .errors import (
    DepthCap,
    IncompleteTower,
    ParseError,
    ResourceCap,
    TropLimError,
    UndecidableSign,
    ValidationError,
)
from .fans import Fan, common_refinement, fan_from_cones, is_subdivision, validate_fan
from .galaxy import (
    OpenPoint,
    base_change,
    classify_point,
    decomposition,
    elliptic_tower,
    galaxy_point,
    polygon_degeneration,
)
from .io import (
    canonical_json,
    cone_to_json,
    fmt_rational,
    load_json,
    parse_complex_data,
    parse_fan,
    parse_fan_data,
    parse_incidence,
    parse_int,
    parse_polynomial,
    parse_rational,
    parse_symbolic_vector_data,
    require_field,
    serialize_complex,
    serialize_fan,
    sha256_file,
    tower_spec_from_data,
)
from .lattice import make_cone
from .sampling import SampleConfig, distance_to_ptrop, lift_coefficients, ptrop_sample_oracle
from .towers import (
    TOWER_DEPTH_CAP,
    FanTower,
    ResolvedRay,
    Symbol,
    chain_toward,
    fiber_model,
    resolve_direction,
)
from .tropical import ptrop_normal_fan, ptrop_recession, trop_hypersurface

_ARTIFACT_COMMANDS = ("refine", "dualcx", "subdivide")


@dataclass(frozen=True)
class JobConfig:
    """One CLI invocation, validated."""

    subcommand: str
    inputs: tuple[str, ...]
    output: Optional[str] = None
    seed: int = 0
    json_out: bool = False
    svg: bool = False
    depth: int = TOWER_DEPTH_CAP
    level: Optional[int] = None
    parallel: int = 1
    cluster_angle: float = 3e-3
    enclosure_width: Fraction = Fraction(1, 10 ** 6)

    def __post_init__(self):
        if not self.inputs:
            raise ValidationError("at least one input file is required")
        if self.cluster_angle <= 0 or self.enclosure_width <= 0:
            raise ValidationError("tolerances must be positive")
        if not 1 <= self.depth <= TOWER_DEPTH_CAP:
            raise ValidationError(
                f"depth must lie in 1..{TOWER_DEPTH_CAP}")
        if self.level is not None and self.level < 1:
            raise ValidationError("level must be a positive integer")
        if self.parallel < 1:
            raise ValidationError("worker count must be at least 1")


# -- small helpers -----------------------------------------------------------


def _q(vec) -> list[str]:
    return [fmt_rational(c) for c in vec]

def _counts_json(counts: dict) -> dict:
    return {str(d): c for d, c in sorted(counts.items())}


def _perm_det(rows) -> int:
    order = [list(r).index(1) for r in rows]
    flips = sum(1 for i in range(len(order))
                for j in range(i + 1, len(order)) if order[i] > order[j])
    return -1 if flips % 2 else 1


def _write(path: str, text: str):
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(text)


def _svg_path(cfg: JobConfig, path: str) -> str:
    if cfg.output and len(cfg.inputs) == 1:
        base = cfg.output
    else:
        base = path
    return (base[:-5] if base.endswith(".json") else base) + ".svg"


def _write_svg(cfg: JobConfig, path: str, svg: str) -> str:
    out = _svg_path(cfg, path)
    _write(out, svg)
    return out


def _maybe_artifact(cfg: JobConfig, result: dict, payload: dict) -> dict:
    if cfg.output and len(cfg.inputs) == 1:
        _write(cfg.output, canonical_json(payload))
        result["artifact"] = cfg.output
    return result


# -- SVG rendering (deterministic, rank/dimension 2 only) --------------------


def fan_svg(fan: Fan) -> str:
    """Plane fan picture: rays from the origin, one wedge per maximal cone."""
    if fan.n != 2:
        raise ValidationError(f"svg rendering needs a rank-2 fan, got rank "
                              f"{fan.n}")
    size, c, r = 420, 210.0, 170.0

    def at(v):
        norm = math.hypot(v[0], v[1])
        return c + r * v[0] / norm, c - r * v[1] / norm

    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{size}" '
        f'height="{size}" viewBox="0 0 {size} {size}">',
        f'<circle cx="{c}" cy="{c}" r="{r}" fill="none" stroke="#cccccc"/>',
    ]
    for cone in fan.maximal:
        if len(cone.rays) == 2:
            (x1, y1), (x2, y2) = at(cone.rays[0]), at(cone.rays[1])
            parts.append(
                f'<path d="M {c:.1f} {c:.1f} L {x1:.2f} {y1:.2f} '
                f'A {r:.1f} {r:.1f} 0 0 0 {x2:.2f} {y2:.2f} Z" '
                f'fill="#4477aa22" stroke="none"/>')
    for ray in fan.rays:
        x, y = at(ray)
        parts.append(f'<line x1="{c:.1f}" y1="{c:.1f}" x2="{x:.2f}" '
                     f'y2="{y:.2f}" stroke="#cc3333" stroke-width="2"/>')
        parts.append(f'<text x="{x:.2f}" y="{y:.2f}" font-size="11">'
                     f'({ray[0]},{ray[1]})</text>')
    parts.append("</svg>")
    return "\n".join(parts) + "\n"


def complex_svg(x: DeltaComplex) -> str:
    """1-skeleton picture: vertices on a circle, loops as side circles."""
    if x.dim > 2:
        raise ValidationError(
            f"svg rendering covers complexes of dimension <= 2, got "
            f"{x.dim}")
    verts = [c.name for c in x.by_dim(0)]
    size, c, r = 420, 210.0, 160.0
    pos = {}
    for i, name in enumerate(verts):
        a = 2 * math.pi * i / len(verts) - math.pi / 2
        pos[name] = (c + r * math.cos(a), c + r * math.sin(a))
    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{size}" '
        f'height="{size}" viewBox="0 0 {size} {size}">',
    ]
    for e in x.by_dim(1):
        end, start = e.faces
        if start == end:
            x0, y0 = pos[start]
            # a loop edge: offset circle tangent to the vertex
            parts.append(f'<circle cx="{x0 + 22:.2f}" cy="{y0:.2f}" r="22" '
                         f'fill="none" stroke="#444444"/>')
        else:
            (x0, y0), (x1, y1) = pos[start], pos[end]
            parts.append(f'<line x1="{x0:.2f}" y1="{y0:.2f}" x2="{x1:.2f}" '
                         f'y2="{y1:.2f}" stroke="#444444"/>')
    for name, (x0, y0) in pos.items():
        parts.append(f'<circle cx="{x0:.2f}" cy="{y0:.2f}" r="4" '
                     f'fill="#cc3333"/>')
        parts.append(f'<text x="{x0 + 6:.2f}" y="{y0 - 6:.2f}" '
                     f'font-size="11">{name}</text>')
    parts.append("</svg>")
    return "\n".join(parts) + "\n"


# -- handlers, one per subcommand --------------------------------------------


def handle_trop(cfg: JobConfig, path: str) -> dict:
    f = parse_polynomial(path)
    h = trop_hypersurface(f)
    return {
        "input": path,
        "vars": f.n,
        "degree": f.degree,
        "terms": len(f.terms),
        "cell_count": len(h.cells),
        "cells": [{
            "dim": cell.dim,
            "achievers": [list(e) for e in cell.achievers],
            "relint_point": _q(cell.relint_point),
            "recession_rays": [[str(a) for a in r]
                               for r in cell.recession.rays],
        } for cell in h.cells],
    }


def handle_ptrop(cfg: JobConfig, path: str) -> dict:
    f = parse_polynomial(path)
    exact = ptrop_normal_fan(f)
    via_recession = ptrop_recession(trop_hypersurface(f))
    result = {
        "input": path,
        "vars": f.n,
        "points": [[str(a) for a in p] for p in exact.points],
        "cones": [cone_to_json(c) for c in exact.cones],
        "is_finite": exact.is_finite,
        "routes_agree": exact == via_recession,
        "oracle_clusters": None,
    }
    if f.n in (2, 3):
        coeffs = lift_coefficients(f, seed=cfg.seed)
        clusters = ptrop_sample_oracle(
            coeffs, f.n,
            SampleConfig(seed=cfg.seed, cluster_angle=cfg.cluster_angle))
        result["oracle_clusters"] = [{
            "direction": [round(v, 9) for v in cl.direction],
            "size": cl.size,
            "distance_to_exact": round(distance_to_ptrop(
                exact, cl.direction), 9),
        } for cl in clusters]
    return result


def handle_fan_validate(cfg: JobConfig, path: str) -> dict:
    obj = load_json(path)
    rank, cones = parse_fan_data(obj, path)
    report = validate_fan(cones, rank)
    out = {
        "input": path,
        "rank": rank,
        "maximal_cones": len(cones),
        "valid": report.valid,
        "complete": report.complete,
        "violations": list(report.violations),
    }
    if report.valid:
        fan = fan_from_cones(cones, rank)
        out["rays"] = [[str(a) for a in r] for r in fan.rays]
        if cfg.svg:
            out["svg"] = _write_svg(cfg, path, fan_svg(fan))
    return out


def handle_refine(cfg: JobConfig) -> dict:
    if len(cfg.inputs) != 2:
        raise ValidationError("refine takes exactly two fan files")
    path_a, path_b = cfg.inputs
    a, b = parse_fan(path_a), parse_fan(path_b)
    fan = common_refinement(a, b)
    out = {
        "inputs": [path_a, path_b],
        "rank": fan.n,
        "maximal_cones": len(fan.maximal),
        "complete": fan.complete,
        "refines_first": is_subdivision(fan, a) is not None,
        "refines_second": is_subdivision(fan, b) is not None,
        "fan": serialize_fan(fan),
    }
    if cfg.output:
        _write(cfg.output, canonical_json(serialize_fan(fan)))
        out["artifact"] = cfg.output
    if cfg.svg:
        out["svg"] = _write_svg(cfg, path_a, fan_svg(fan))
    return out


def handle_limit_point(cfg: JobConfig, path: str) -> dict:
    obj = load_json(path)
    steps = obj.get("steps", 0)
    if isinstance(steps, int) and steps + 1 > cfg.depth:
        raise DepthCap(f"{steps} refinement steps exceed --depth "
                       f"{cfg.depth}")
    tower = tower_spec_from_data(obj, path)
    if not isinstance(tower, FanTower):
        raise ValidationError(
            f"{path}: limit-point needs a fan tower, not an elliptic "
            f"tower input")
    if "direction" in obj:
        x = parse_symbolic_vector_data(obj["direction"], f"{path}.direction")
    else:
        strategy = obj.get("strategy")
        if isinstance(strategy, dict) and \
                strategy.get("kind") == "toward-direction":
            x = parse_symbolic_vector_data(
                require_field(strategy, "direction", f"{path}.strategy"),
                f"{path}.strategy.direction")
        else:
            raise ParseError(f"{path}: missing field 'direction'")
    chain = chain_toward(tower, x)
    res = resolve_direction(chain)
    out = {
        "input": path,
        "depth": tower.depth,
        "carrier_dims": [cone.dim for _, cone in chain.entries],
        "resolved": isinstance(res, ResolvedRay),
    }
    if isinstance(res, ResolvedRay):
        out["ray"] = [str(a) for a in res.ray.direction]
    else:
        out["cone"] = cone_to_json(res.cone)
    return out


def handle_fiber_rank(cfg: JobConfig, path: str) -> dict:
    x = parse_symbolic_vector_data(load_json(path), path)
    model = fiber_model(x.n, x)
    return {
        "input": path,
        "n": x.n,
        "symbols": [s.name for s in x.symbols],
        "rank": model.rank,
        "fiber_dim": model.dim,
        "kind": model.kind,
        "basis_change": [list(r) for r in model.basis_change],
        "det": _perm_det(model.basis_change),
    }


def handle_dualcx(cfg: JobConfig, path: str) -> dict:
    inc = parse_incidence(path)
    x = from_incidence(inc)
    out = {
        "input": path,
        "mode": inc.mode,
        "counts": _counts_json(count_cells(x)),
        "euler": euler_characteristic(x),
        "complex": serialize_complex(x),
    }
    if cfg.svg:
        out["svg"] = _write_svg(cfg, path, complex_svg(x))
    return _maybe_artifact(cfg, out, serialize_complex(x))


def _complex_from_file(obj: dict, path: str) -> DeltaComplex:
    """A complex file, or {"elliptic": {"m": k}} for the I_k cycle."""
    if "elliptic" in obj:
        ell = obj["elliptic"]
        if not isinstance(ell, dict):
            raise ParseError(f"{path}.elliptic: expected an object")
        m = parse_int(require_field(ell, "m", f"{path}.elliptic"),
                      f"{path}.elliptic.m")
        return polygon_degeneration(m).complex
    return parse_complex_data(obj, path)


def handle_subdivide(cfg: JobConfig, path: str) -> dict:
    level = cfg.level if cfg.level is not None else 1
    obj = load_json(path)
    if "elliptic" in obj:
        ell = obj["elliptic"]
        if not isinstance(ell, dict):
            raise ParseError(f"{path}.elliptic: expected an object")
        m = parse_int(require_field(ell, "m", f"{path}.elliptic"),
                      f"{path}.elliptic.m")
        # base change keeps the canonical circle labels v0..v(Nm-1)
        y = base_change(polygon_degeneration(m), level).complex
    else:
        y = scale_subdivide(parse_complex_data(obj, path), level).complex
    out = {
        "input": path,
        "level": level,
        "counts": _counts_json(count_cells(y)),
        "euler": euler_characteristic(y),
        "complex": serialize_complex(y),
    }
    if cfg.svg:
        out["svg"] = _write_svg(cfg, path, complex_svg(y))
    return _maybe_artifact(cfg, out, serialize_complex(y))


def handle_rational_points(cfg: JobConfig, path: str) -> dict:
    level = cfg.level if cfg.level is not None else 1
    x = _complex_from_file(load_json(path), path)
    pts = sorted(rational_points(x, level))
    return {
        "input": path,
        "level": level,
        "count": len(pts),
        "points": [{"cell": name, "coords": _q(coords)}
                   for name, coords in pts],
    }


def handle_map_fibers(cfg: JobConfig, path: str) -> dict:
    obj = load_json(path)
    source_obj = require_field(obj, "source", path)
    target_obj = require_field(obj, "target", path)
    if not isinstance(source_obj, dict) or not isinstance(target_obj, dict):
        raise ParseError(f"{path}: source and target must be complex objects")
    source = parse_complex_data(source_obj, f"{path}.source")
    target = parse_complex_data(target_obj, f"{path}.target")
    vm_raw = require_field(obj, "vertex_map", path)
    if not isinstance(vm_raw, dict):
        raise ParseError(f"{path}.vertex_map: expected an object")
    cell_images = None
    if obj.get("cell_images") is not None:
        raw = obj["cell_images"]
        if not isinstance(raw, dict):
            raise ParseError(f"{path}.cell_images: expected an object")
        cell_images = {}
        for k, v in raw.items():
            if not (isinstance(v, list) and len(v) == 2):
                raise ParseError(f"{path}.cell_images[{k!r}]: expected "
                                 f"[target cell, phi]")
            cell_images[str(k)] = (str(v[0]), tuple(
                parse_int(i, f"{path}.cell_images[{k!r}]") for i in v[1]))
    mapping = induced_map(source, target, vm_raw, cell_images)
    reference = None
    if obj.get("reference") is not None:
        reference = parse_complex_data(obj["reference"], f"{path}.reference")
    entries = []
    any_mismatch = False
    for i, pt in enumerate(require_field(obj, "points", path)):
        where = f"{path}.points[{i}]"
        if not isinstance(pt, dict):
            raise ParseError(f"{where}: expected an object")
        cell = str(require_field(pt, "cell", where))
        coords = [parse_rational(c, f"{where}.coords")
                  for c in require_field(pt, "coords", where)]
        fiber = map_fiber(mapping, cell, coords)
        entry = {
            "cell": cell,
            "coords": _q(coords),
            "f_vector": list(fiber.f_vector),
            "euler": fiber.euler,
            "empty": fiber.is_empty,
        }
        if reference is not None:
            cmpv = compare_fiber(fiber, reference)
            entry["match"] = cmpv.match
            any_mismatch = any_mismatch or not cmpv.match
        entries.append(entry)
    out = {"input": path, "points": entries}
    if reference is not None:
        out["reference_euler"] = euler_characteristic(reference)
        out["mismatch"] = any_mismatch
    return out


def handle_toric_fiber(cfg: JobConfig, path: str) -> dict:
    obj = load_json(path)
    matrix_raw = require_field(obj, "matrix", path)
    if not isinstance(matrix_raw, list):
        raise ParseError(f"{path}.matrix: expected a list of rows")
    matrix = [[parse_int(a, f"{path}.matrix[{i}]") for a in row]
              for i, row in enumerate(matrix_raw)]
    source_obj = require_field(obj, "source", path)
    target_obj = require_field(obj, "target", path)
    if not isinstance(source_obj, dict) or not isinstance(target_obj, dict):
        raise ParseError(f"{path}: source and target must be fan objects")
    rank_s, cones_s = parse_fan_data(source_obj, f"{path}.source")
    rank_t, cones_t = parse_fan_data(target_obj, f"{path}.target")
    source = fan_from_cones(cones_s, rank_s)
    target = fan_from_cones(cones_t, rank_t)
    base_obj = require_field(obj, "base", path)
    if not isinstance(base_obj, dict):
        raise ParseError(f"{path}.base: expected a cone object")
    base_rays = [
        [parse_int(a, f"{path}.base.rays[{i}]") for a in row]
        for i, row in enumerate(require_field(base_obj, "rays",
                                              f"{path}.base"))]
    base = make_cone(base_rays, n=rank_t)
    fiber = toric_fiber_complex(matrix, source, target, base)
    return {
        "input": path,
        "base": cone_to_json(base),
        "counts": _counts_json(fiber.counts),
        "euler": fiber.euler,
        "cells": sum(len(cs) for _, cs in fiber.cells),
    }


def handle_galaxy(cfg: JobConfig, path: str) -> dict:
    obj = load_json(path)
    ell = require_field(obj, "elliptic", path)
    if not isinstance(ell, dict):
        raise ParseError(f"{path}.elliptic: expected an object")
    m = parse_int(require_field(ell, "m", f"{path}.elliptic"),
                  f"{path}.elliptic.m")
    degrees = [parse_int(d, f"{path}.elliptic.degrees")
               for d in require_field(ell, "degrees", f"{path}.elliptic")]
    if len(degrees) > cfg.depth:
        raise DepthCap(f"{len(degrees)} tower levels exceed --depth "
                       f"{cfg.depth}")
    tower = elliptic_tower(m, degrees)
    outcomes = []
    for i, raw in enumerate(obj.get("points", [])):
        where = f"{path}.points[{i}]"
        if isinstance(raw, dict):
            sym_obj = require_field(raw, "symbol", where)
            if not isinstance(sym_obj, dict):
                raise ParseError(f"{where}.symbol: expected an object")
            sym = Symbol(
                str(require_field(sym_obj, "name", f"{where}.symbol")),
                parse_rational(require_field(sym_obj, "lo",
                                             f"{where}.symbol"),
                               f"{where}.symbol.lo"),
                parse_rational(require_field(sym_obj, "hi",
                                             f"{where}.symbol"),
                               f"{where}.symbol.hi"))
            point, shown = galaxy_point(sym), sym.name
        else:
            value = parse_rational(raw, where)
            point = galaxy_point(value)
            shown = fmt_rational(point.rational)
        try:
            res = classify_point(tower, point)
        except IncompleteTower as exc:
            outcomes.append({"point": shown, "kind": "incomplete",
                             "error": str(exc)})
            continue
        except UndecidableSign as exc:
            outcomes.append({"point": shown, "kind": "undecidable",
                             "error": str(exc)})
            continue
        if isinstance(res, OpenPoint):
            outcomes.append({
                "point": shown, "kind": "open",
                "label": fmt_rational(res.label),
                "level": res.level, "vertex": res.vertex,
            })
        else:
            outcomes.append({
                "point": shown, "kind": "closed",
                "carriers": [{
                    "level": e.level, "cell": e.cell,
                    "interval": [fmt_rational(e.interval[0]),
                                 fmt_rational(e.interval[1])],
                    "width": fmt_rational(e.width),
                } for e in res.carriers],
            })
    out = {
        "input": path,
        "m": m,
        "degrees": degrees,
        "cycle_sizes": [lv.m for lv in tower.levels],
        "points": outcomes,
    }
    if cfg.level is not None:
        record = decomposition(polygon_degeneration(m), cfg.level)
        out["decomposition"] = {
            "level": record.level,
            "open_slots": record.slot_count,
            "non_klt_cells": record.non_klt_cells,
        }
    return out


_HANDLERS = {
    "trop": handle_trop,
    "ptrop": handle_ptrop,
    "fan-validate": handle_fan_validate,
    "limit-point": handle_limit_point,
    "fiber-rank": handle_fiber_rank,
    "dualcx": handle_dualcx,
    "subdivide": handle_subdivide,
    "rational-points": handle_rational_points,
    "map-fibers": handle_map_fibers,
    "toric-fiber": handle_toric_fiber,
    "galaxy": handle_galaxy,
}


# -- report assembly ---------------------------------------------------------


def run(cfg: JobConfig) -> dict:
    """Execute the job and return the report."""
    if cfg.subcommand == "refine":
        results = [handle_refine(cfg)]
        digests = list(cfg.inputs)
    else:
        handler = _HANDLERS[cfg.subcommand]
        ordered = sorted(cfg.inputs)
        if cfg.parallel > 1 and len(ordered) > 1:
            with ThreadPoolExecutor(max_workers=cfg.parallel) as pool:
                results = list(pool.map(lambda p: handler(cfg, p), ordered))
        else:
            results = [handler(cfg, p) for p in ordered]
        digests = ordered
    return {
        "command": cfg.subcommand,
        "seed": cfg.seed,
        "inputs": [{"path": p, "sha256": sha256_file(p)} for p in digests],
        "results": results,
    }


def _summary(cmd: str, res: dict) -> str:
    if cmd == "trop":
        return (f"{res['input']}: {res['cell_count']} cells, degree "
                f"{res['degree']}")
    if cmd == "ptrop":
        pts = " ".join("[" + ":".join(p) + "]" for p in res["points"])
        agree = "agree" if res["routes_agree"] else "DISAGREE"
        line = f"{res['input']}: points {pts or '(none)'}, routes {agree}"
        if res["oracle_clusters"] is not None:
            line += f", {len(res['oracle_clusters'])} oracle clusters"
        return line
    if cmd == "fan-validate":
        state = "valid" if res["valid"] else "INVALID"
        if res["valid"] and res["complete"]:
            state += " complete"
        return (f"{res['input']}: {res['maximal_cones']} maximal cones, "
                f"{state}")
    if cmd == "refine":
        return (f"{' + '.join(res['inputs'])}: {res['maximal_cones']} "
                f"maximal cones")
    if cmd == "limit-point":
        what = "ray [" + ":".join(res["ray"]) + "]" if res["resolved"] \
            else f"unresolved cone after depth {res['depth']}"
        return f"{res['input']}: {what}"
    if cmd == "fiber-rank":
        return (f"{res['input']}: rank {res['rank']}, fiber dim "
                f"{res['fiber_dim']}, det {res['det']:+d}")
    if cmd in ("dualcx", "subdivide"):
        counts = " ".join(f"{d}:{c}" for d, c in res["counts"].items())
        return f"{res['input']}: cells {counts}, euler {res['euler']}"
    if cmd == "rational-points":
        return (f"{res['input']}: {res['count']} rational points at level "
                f"{res['level']}")
    if cmd == "map-fibers":
        parts = [f"({p['cell']}) chi={p['euler']}" for p in res["points"]]
        line = f"{res['input']}: " + ", ".join(parts)
        if "mismatch" in res:
            line += ", mismatch" if res["mismatch"] else ", match"
        return line
    if cmd == "toric-fiber":
        counts = " ".join(f"{d}:{c}" for d, c in res["counts"].items())
        return f"{res['input']}: cells {counts}, euler {res['euler']}"
    if cmd == "galaxy":
        kinds = " ".join(f"{p['point']}:{p['kind']}" for p in res["points"])
        return f"{res['input']}: {kinds or '(no points)'}"
    return str(res)


def render_text(report: dict) -> str:
    lines = [f"command: {report['command']}  seed: {report['seed']}"]
    for item in report["inputs"]:
        lines.append(f"input: {item['path']}  sha256: "
                     f"{item['sha256'][:12]}")
    for res in report["results"]:
        lines.append(_summary(report["command"], res))
    return "\n".join(lines) + "\n"


# -- argument parsing --------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="troplim",
        description="Exact tropical limits: fans, germs, skeletons, towers.")
    sub = parser.add_subparsers(dest="subcommand", required=True)

    def add(name, help_text, svg=False, level_flag=None, level_default=None):
        p = sub.add_parser(name, help=help_text)
        p.add_argument("inputs", nargs="+", metavar="FILE")
        p.add_argument("--json", action="store_true", dest="json_out",
                       help="emit the report as canonical JSON")
        p.add_argument("--output", metavar="PATH",
                       help="write the primary artifact or report here")
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--depth", type=int, default=TOWER_DEPTH_CAP,
                       help=f"tower depth cap (max {TOWER_DEPTH_CAP})")
        p.add_argument("--parallel", type=int, default=1, metavar="K",
                       help="process independent inputs with K workers")
        if svg:
            p.add_argument("--svg", action="store_true",
                           help="also write an SVG next to the output")
        if level_flag:
            p.add_argument(level_flag, type=int, default=level_default,
                           dest="level", metavar="N")
        return p

    add("trop", "cell structure of a tropical hypersurface")
    ptrop = add("ptrop", "projective tropicalization of a germ, with oracle")
    ptrop.add_argument("--cluster-angle", type=float, default=3e-3,
                       dest="cluster_angle", metavar="RAD")
    add("fan-validate", "check the fan axioms and completeness", svg=True)
    add("refine", "common refinement of two fans", svg=True)
    add("limit-point", "resolve a direction through a fan tower")
    add("fiber-rank", "rank and fiber dimension of a symbolic vector")
    add("dualcx", "dual complex of a strata incidence file", svg=True)
    add("subdivide", "scale subdivision of an affine complex", svg=True,
        level_flag="--N", level_default=1)
    add("rational-points", "level-N rational points of a complex",
        level_flag="--level", level_default=1)
    add("map-fibers", "exact fibers of a simplicial map dataset")
    add("toric-fiber", "fiber complex of a compatible map of fans")
    add("galaxy", "classify angles along an elliptic tower",
        level_flag="--level", level_default=None)
    return parser


def config_from_args(args: argparse.Namespace) -> JobConfig:
    return JobConfig(
        subcommand=args.subcommand,
        inputs=tuple(args.inputs),
        output=args.output,
        seed=args.seed,
        json_out=args.json_out,
        svg=getattr(args, "svg", False),
        depth=args.depth,
        level=getattr(args, "level", None),
        parallel=args.parallel,
        cluster_angle=getattr(args, "cluster_angle", 3e-3),
    )


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = config_from_args(args)
        report = run(cfg)
    except ParseError as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return 3
    except ResourceCap as exc:
        print(f"resource cap: {exc}", file=sys.stderr)
        return 4
    except TropLimError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    text = canonical_json(report) if cfg.json_out else render_text(report)
    sys.stdout.write(text)
    if cfg.output and cfg.subcommand not in _ARTIFACT_COMMANDS:
        _write(cfg.output, canonical_json(report))
    return 0


if __name__ == "__main__":
    sys.exit(main())
