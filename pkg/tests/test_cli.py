"""Tests for file formats and the command-line surface."""

import json
from fractions import Fraction as F

import pytest

from troplim import cli
from troplim import io
from troplim.complexes import (
    from_incidence,
    segment_complex,
    tetrahedron_boundary,
    tetrahedron_solid,
)
from troplim.errors import ParseError, ValidationError
from troplim.fans import fan_from_cones
from troplim.galaxy import base_change, polygon_degeneration
from troplim.lattice import make_cone
from troplim.towers import FanTower

NODAL = {"vars": 2, "terms": [
    {"exp": [1, 1], "val": "0"}, {"exp": [3, 0], "val": "0"},
    {"exp": [0, 3], "val": "0"}]}
QUADRANT = {"rank": 2,
            "rays": [["1", "0"], ["0", "1"], ["-1", "0"], ["0", "-1"]],
            "maximal_cones": [[0, 1], [1, 2], [2, 3], [3, 0]]}
NODAL_INC = {"mode": "analytic",
             "strata": [{"name": "C", "codim": 0, "branches": 1},
                        {"name": "p", "codim": 1, "branches": 2}],
             "closures": [["p", "C"]]}


def put(tmp_path, name, obj):
    p = tmp_path / name
    p.write_text(json.dumps(obj, indent=2) + "\n", encoding="utf-8")
    return str(p)


def run_json(capsys, argv):
    code = cli.main(argv + ["--json"])
    out = capsys.readouterr().out
    return code, json.loads(out) if code == 0 else None


# -- parsing and round trips -------------------------------------------------


def test_parse_fan_quadrant(tmp_path):
    fan = io.parse_fan(put(tmp_path, "q.json", QUADRANT))
    assert fan.n == 2 and len(fan.maximal) == 4 and fan.complete


def test_parse_incidence_nodal_loop(tmp_path):
    inc = io.parse_incidence(put(tmp_path, "n.json", NODAL_INC))
    loop = from_incidence(inc)
    assert [c.name for c in loop.cells] == ["C", "p"]
    assert loop.cell("p").faces == ("C", "C")


def test_parse_polynomial_exact_values(tmp_path):
    f = io.parse_polynomial(put(tmp_path, "f.json", {
        "vars": 2, "terms": [{"exp": [2, 0], "val": "-3/2"},
                             {"exp": [0, 1], "val": 4}]}))
    assert f.terms == (((0, 1), 4), ((2, 0), F(-3, 2)))


def test_round_trips_are_byte_identical(tmp_path):
    cases = [
        ("fan.json", QUADRANT, io.parse_fan, io.serialize_fan),
        ("poly.json", NODAL, io.parse_polynomial, io.serialize_polynomial),
        ("inc.json", NODAL_INC, io.parse_incidence, io.serialize_incidence),
        ("cx.json", io.serialize_complex(segment_complex()),
         io.parse_complex, io.serialize_complex),
    ]
    for name, obj, parse, serialize in cases:
        path = put(tmp_path, name, obj)
        canonical = io.canonical_json(serialize(parse(path)))
        (tmp_path / name).write_text(canonical, encoding="utf-8")
        assert io.canonical_json(serialize(parse(path))) == canonical


def test_symbolic_vector_round_trip(tmp_path):
    obj = {"symbols": [{"name": "sqrt2", "lo": "1414213/1000000",
                        "hi": "1414214/1000000"}],
           "entries": [["1", "0"], ["0", "1"]]}
    path = put(tmp_path, "v.json", obj)
    x = io.parse_symbolic_vector_data(io.load_json(path), path)
    canonical = io.canonical_json(io.serialize_symbolic_vector(x))
    (tmp_path / "v.json").write_text(canonical, encoding="utf-8")
    y = io.parse_symbolic_vector_data(io.load_json(path), path)
    assert io.canonical_json(io.serialize_symbolic_vector(y)) == canonical


def test_parse_tower_specs(tmp_path):
    t = io.parse_tower_spec(put(tmp_path, "t.json", {
        "base_fan": QUADRANT,
        "strategy": {"kind": "stellar-at-barycenters"}, "steps": 2}))
    assert isinstance(t, FanTower) and t.depth == 3
    ell = io.parse_tower_spec(put(tmp_path, "e.json", {
        "elliptic": {"m": 3, "degrees": [1, 2]}}))
    assert [lv.m for lv in ell.levels] == [3, 6]


def test_parse_errors_name_the_location(tmp_path):
    bad = put(tmp_path, "bad.json", {"vars": 2, "terms": [
        {"exp": [1, 1], "val": "0"}, {"exp": [1], "val": "0"}]})
    with pytest.raises(ParseError, match=r"terms\[1\]\.exp"):
        io.parse_polynomial(bad)
    with pytest.raises(ParseError, match="missing field 'terms'"):
        io.parse_polynomial(put(tmp_path, "m.json", {"vars": 2}))
    broken = tmp_path / "broken.json"
    broken.write_text('{"vars": 2,\n  "terms": }\n', encoding="utf-8")
    with pytest.raises(ParseError, match="line 2"):
        io.parse_polynomial(str(broken))
    with pytest.raises(ParseError, match="bad rational"):
        io.parse_polynomial(put(tmp_path, "r.json", {
            "vars": 1, "terms": [{"exp": [1], "val": "1/0"}]}))


def test_job_config_validation():
    with pytest.raises(ValidationError):
        cli.JobConfig("trop", ())
    with pytest.raises(ValidationError):
        cli.JobConfig("trop", ("x.json",), cluster_angle=0.0)
    with pytest.raises(ValidationError):
        cli.JobConfig("trop", ("x.json",), depth=65)
    with pytest.raises(ValidationError):
        cli.JobConfig("trop", ("x.json",), level=0)
    with pytest.raises(ValidationError):
        cli.JobConfig("trop", ("x.json",), parallel=0)


# -- subcommands end to end --------------------------------------------------


def test_ptrop_nodal_cubic_report(tmp_path, capsys):
    path = put(tmp_path, "nodal.json", NODAL)
    code, report = run_json(capsys, ["ptrop", path])
    assert code == 0
    res = report["results"][0]
    assert res["points"] == [["1", "2"], ["2", "1"]]
    assert res["routes_agree"] and res["is_finite"]
    clusters = res["oracle_clusters"]
    assert len(clusters) == 2
    assert all(c["distance_to_exact"] < 1e-2 for c in clusters)
    assert report["inputs"][0]["sha256"] == io.sha256_file(path)


def test_subdivide_elliptic_writes_complex_file(tmp_path, capsys):
    path = put(tmp_path, "i3.json", {"elliptic": {"m": 3}})
    out = str(tmp_path / "i6.json")
    code, report = run_json(capsys, ["subdivide", "--N", "2", path,
                                     "--output", out])
    assert code == 0
    assert report["results"][0]["counts"] == {"0": 6, "1": 6}
    emitted = io.parse_complex(out)
    assert emitted == base_change(polygon_degeneration(3), 2).complex
    with open(out, encoding="utf-8") as fh:
        assert fh.read() == io.canonical_json(io.serialize_complex(emitted))


def test_map_fibers_k3_mismatch(tmp_path, capsys):
    path = put(tmp_path, "k3.json", {
        "source": io.serialize_complex(tetrahedron_solid()),
        "target": io.serialize_complex(segment_complex()),
        "vertex_map": {"v0": "z0", "v1": "z1", "v2": "z1", "v3": "z1"},
        "points": [{"cell": "e", "coords": ["1/2", "1/2"]}],
        "reference": io.serialize_complex(tetrahedron_boundary())})
    code, report = run_json(capsys, ["map-fibers", path])
    assert code == 0
    res = report["results"][0]
    assert res["points"][0]["f_vector"] == [3, 3, 1]
    assert res["points"][0]["euler"] == 1
    assert res["reference_euler"] == 2
    assert res["mismatch"] is True


def test_toric_fiber_counts(tmp_path, capsys):
    path = put(tmp_path, "tf.json", {
        "matrix": [[1, 0]],
        "source": {"rank": 2, "rays": [["1", "0"], ["1", "1"], ["1", "2"]],
                   "maximal_cones": [[0, 1], [1, 2]]},
        "target": {"rank": 1, "rays": [["1"]], "maximal_cones": [[0]]},
        "base": {"rays": [[1]]}})
    code, report = run_json(capsys, ["toric-fiber", path])
    assert code == 0
    res = report["results"][0]
    assert res["counts"] == {"0": 3, "1": 2}
    assert res["euler"] == 1


def test_galaxy_outcomes(tmp_path, capsys):
    path = put(tmp_path, "gal.json", {
        "elliptic": {"m": 3, "degrees": [1, 2, 4, 8, 16]},
        "points": ["1/6", "0", "1/5",
                   {"symbol": {"name": "sqrt2-1", "lo": "414213/1000000",
                               "hi": "414214/1000000"}},
                   {"symbol": {"name": "wide", "lo": "33/100",
                               "hi": "34/100"}}]})
    code, report = run_json(capsys, ["galaxy", path, "--level", "2"])
    assert code == 0
    res = report["results"][0]
    by_point = {p["point"]: p for p in res["points"]}
    assert by_point["1/6"]["kind"] == "open"
    assert by_point["1/6"]["level"] == 1
    assert by_point["1/6"]["vertex"] == "v1"
    assert by_point["0"] == {"point": "0", "kind": "open", "label": "0",
                             "level": 0, "vertex": "v0"}
    assert by_point["1/5"]["kind"] == "incomplete"
    closed = by_point["sqrt2-1"]
    assert closed["kind"] == "closed"
    assert [c["width"] for c in closed["carriers"]] == [
        "1/3", "1/6", "1/12", "1/24", "1/48"]
    assert by_point["wide"]["kind"] == "undecidable"
    assert res["cycle_sizes"] == [3, 6, 12, 24, 48]
    assert res["decomposition"] == {"level": 2, "open_slots": 6,
                                    "non_klt_cells": 6}


def test_limit_point_resolves_rational_direction(tmp_path, capsys):
    path = put(tmp_path, "lp.json", {
        "base_fan": QUADRANT,
        "strategy": {"kind": "toward-direction",
                     "direction": {"entries": ["2", "3"]}},
        "steps": 6})
    code, report = run_json(capsys, ["limit-point", path])
    assert code == 0
    res = report["results"][0]
    assert res["resolved"] and res["ray"] == ["2", "3"]
    assert res["carrier_dims"][-1] == 1


def test_fiber_rank_reports_model(tmp_path, capsys):
    irr = put(tmp_path, "irr.json", {
        "symbols": [{"name": "sqrt2", "lo": "1414213/1000000",
                     "hi": "1414214/1000000"}],
        "entries": [["1", "0"], ["0", "1"]]})
    rat = put(tmp_path, "rat.json", {"entries": ["1", "1"]})
    code, report = run_json(capsys, ["fiber-rank", irr, rat])
    assert code == 0
    by_input = {r["input"]: r for r in report["results"]}
    assert by_input[irr]["rank"] == 2 and by_input[irr]["fiber_dim"] == 0
    assert by_input[rat]["rank"] == 1 and by_input[rat]["fiber_dim"] == 1
    assert {r["det"] for r in report["results"]} <= {1, -1}


def test_fan_validate_reports_invalid_without_failing(tmp_path, capsys):
    path = put(tmp_path, "bad-fan.json", {
        "rank": 2, "rays": [["1", "0"], ["1", "1"], ["0", "1"]],
        "maximal_cones": [[0, 2], [1, 2]]})
    code, report = run_json(capsys, ["fan-validate", path])
    assert code == 0
    res = report["results"][0]
    assert res["valid"] is False and res["violations"]


def test_refine_writes_fan_artifact(tmp_path, capsys):
    a = put(tmp_path, "a.json", QUADRANT)
    b = put(tmp_path, "b.json", {
        "rank": 2, "rays": [["1", "1"], ["-1", "1"], ["-1", "-1"],
                            ["1", "-1"]],
        "maximal_cones": [[0, 1], [1, 2], [2, 3], [3, 0]]})
    out = str(tmp_path / "ref.json")
    code, report = run_json(capsys, ["refine", a, b, "--output", out])
    assert code == 0
    res = report["results"][0]
    assert res["maximal_cones"] == 8
    assert res["refines_first"] and res["refines_second"]
    assert len(io.parse_fan(out).maximal) == 8


def test_rational_points_and_dualcx(tmp_path, capsys):
    i3 = put(tmp_path, "i3.json", {"elliptic": {"m": 3}})
    code, report = run_json(capsys, ["rational-points", "--level", "2", i3])
    assert code == 0 and report["results"][0]["count"] == 6
    inc = put(tmp_path, "inc.json", NODAL_INC)
    code, report = run_json(capsys, ["dualcx", inc])
    assert code == 0
    assert report["results"][0]["counts"] == {"0": 1, "1": 1}
    assert report["results"][0]["euler"] == 0


def test_trop_cell_listing(tmp_path, capsys):
    path = put(tmp_path, "nodal.json", NODAL)
    code, report = run_json(capsys, ["trop", path])
    assert code == 0
    cells = report["results"][0]["cells"]
    assert report["results"][0]["cell_count"] == 4
    assert sorted(c["dim"] for c in cells) == [0, 1, 1, 1]


# -- determinism, ordering, exit codes ---------------------------------------


def test_reports_are_deterministic(tmp_path, capsys):
    path = put(tmp_path, "nodal.json", NODAL)
    outputs = []
    for _ in range(2):
        code = cli.main(["ptrop", path, "--json", "--seed", "5"])
        assert code == 0
        outputs.append(capsys.readouterr().out)
    assert outputs[0] == outputs[1]


def test_parallel_results_ordered_by_path(tmp_path, capsys):
    paths = [put(tmp_path, f"f{i}.json", NODAL) for i in (3, 1, 2)]
    code, report = run_json(capsys, ["trop"] + paths + ["--parallel", "3"])
    assert code == 0
    assert [r["input"] for r in report["results"]] == sorted(paths)
    assert [i["path"] for i in report["inputs"]] == sorted(paths)


def test_exit_code_parse_failure(tmp_path, capsys):
    broken = tmp_path / "broken.json"
    broken.write_text("{ nope", encoding="utf-8")
    assert cli.main(["trop", str(broken)]) == 3
    assert "parse error" in capsys.readouterr().err


def test_exit_code_validation_failure(tmp_path, capsys):
    path = put(tmp_path, "q.json", QUADRANT)
    assert cli.main(["refine", path]) == 2
    assert "exactly two fan files" in capsys.readouterr().err


def test_exit_code_resource_cap(tmp_path, capsys):
    path = put(tmp_path, "gal.json", {
        "elliptic": {"m": 3, "degrees": [1, 2, 4, 8]}, "points": []})
    assert cli.main(["galaxy", path, "--depth", "3"]) == 4
    assert "resource cap" in capsys.readouterr().err


def test_svg_emission_and_rank_guard(tmp_path, capsys):
    path = put(tmp_path, "q.json", QUADRANT)
    code, report = run_json(capsys, ["fan-validate", path, "--svg"])
    assert code == 0
    svg_path = report["results"][0]["svg"]
    with open(svg_path, encoding="utf-8") as fh:
        assert fh.read().startswith("<svg")
    rank3 = put(tmp_path, "r3.json", {
        "rank": 3, "rays": [["1", "0", "0"], ["0", "1", "0"],
                            ["0", "0", "1"]],
        "maximal_cones": [[0, 1, 2]]})
    assert cli.main(["fan-validate", rank3, "--svg"]) == 2


def test_output_writes_report_for_pure_report_commands(tmp_path, capsys):
    path = put(tmp_path, "nodal.json", NODAL)
    out = str(tmp_path / "report.json")
    code = cli.main(["trop", path, "--output", out])
    assert code == 0
    capsys.readouterr()
    with open(out, encoding="utf-8") as fh:
        stored = json.load(fh)
    assert stored["command"] == "trop"
    assert stored["results"][0]["cell_count"] == 4


def test_cone_serialization_helpers():
    cone = make_cone([(1, 0), (1, 2)], n=2)
    assert io.cone_to_json(cone) == {"rays": [["1", "0"], ["1", "2"]]}
    fan = fan_from_cones([cone])
    blob = io.serialize_fan(fan)
    assert blob["rank"] == 2 and blob["maximal_cones"] == [[0, 1]]
