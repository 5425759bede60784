"""Command-line entry point: ``balanced-covers <subcommand> ...``.

Every run prints one document holding a manifest (tool version, subcommand,
input digests, seed) and the result. Timing is left out unless ``--timing``
is given, so repeated runs produce identical bytes.
"""
from __future__ import annotations

import argparse
import csv
import hashlib
import io as _stdio
import random
import sys
import time
from pathlib import Path

from . import __version__, io
from .applications import (
    KkmsInstance,
    check_sperner,
    find_rainbow,
    kkms_boundary_degree,
    kkms_subsets,
    kkms_witness,
    random_kkm_cover,
    random_kkms_instance,
    random_sperner_instance,
    simplex_config,
    sperner_degree,
    theorem_b_check,
)
from .balanced import (
    bs_equivalent,
    complex_from_profile,
    enumerate_minimal_balanced,
    hypergraph_hash,
)
from .degree import construct_degree_k_circle, degree
from .errors import CapacityError, GenericityError, InputError, TheoremViolationError
from .geometry import affine_rank, relint_membership
from .index_field import (
    GridCover,
    additivity_check,
    bivortex,
    component_svg,
    constant,
    vortex,
)
from .simplicial import OrientedTriangulation, cone_apex_detect, reduced_homology, verify_sphere_homology
from .triangulations import CarrierLabeledTriangulation

EXIT_OK, EXIT_INPUT, EXIT_COMPUTE, EXIT_THEOREM, EXIT_USAGE = 0, 2, 3, 4, 64


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


class _Run:
    """Collects input digests while loading files."""

    def __init__(self, args):
        self.args = args
        self.digests: dict = {}

    def load(self, flag: str, path: str | None):
        if path is None:
            raise InputError(f"--{flag} is required")
        src, raw = io.load(path)
        self.digests.setdefault(flag, []).append(hashlib.sha256(raw).hexdigest())
        return src

    def manifest(self) -> dict:
        return {
            "tool": "balanced-covers",
            "version": __version__,
            "subcommand": self.args.command,
            "inputs": {k: v[0] if len(v) == 1 else v for k, v in sorted(self.digests.items())},
            "seed": self.args.seed,
        }


def _sets(sets) -> list:
    return [[i + 1 for i in s] for s in sets]


def _degree_json(res) -> dict:
    if res.ok:
        cert = res.certificate
        return {
            "status": "ok",
            "degree": res.degree,
            "direction": io.fmt_vector(cert.direction),
            "crossings": [
                {"facet": c.facet + 1, "t": io.fmt(c.t), "barycentric": io.fmt_vector(c.barycentric), "sign": c.sign}
                for c in cert.crossings
            ],
        }
    return {
        "status": "balanced_witness",
        "degree": None,
        "facet": res.witness.facet + 1,
        "support": [i + 1 for i in sorted(res.witness.support)],
    }


# ---------------------------------------------------------------- commands


def cmd_balanced(run: _Run):
    config = io.parse_config(run.load("config", _one(run.args.config)))
    profile = enumerate_minimal_balanced(config)
    sets = _sets(profile.sorted_sets())
    result = {"m": config.m, "dim": config.dim, "minimal_balanced": sets, "count": len(sets)}
    if run.args.up_to_permutation:
        result["hypergraph_hash"] = hypergraph_hash(profile)
    return result, (["set"], [[" ".join(map(str, s))] for s in sets])


def cmd_complex(run: _Run):
    config = io.parse_config(run.load("config", _one(run.args.config)))
    cx = complex_from_profile(enumerate_minimal_balanced(config))
    apex = cone_apex_detect(cx)
    facets = _sets(cx.sorted_facets())
    result = {"complex": io.complex_json(cx), "cone_apex": None if apex is None else apex + 1}
    return result, (["facet"], [[" ".join(map(str, f))] for f in facets])


def cmd_homology(run: _Run):
    args = run.args
    if args.complex:
        cx = io.parse_complex(run.load("complex", args.complex))
        result = {}
        expect = None
    else:
        config = io.parse_config(run.load("config", _one(args.config)))
        cx = complex_from_profile(enumerate_minimal_balanced(config))
        rank = affine_rank(config.points + (config.base,))
        interior = relint_membership(config.points, config.base)
        result = {"rank": rank, "relative_interior": interior}
        expect = rank if interior else None
    h = reduced_homology(cx)
    result["homology"] = h.records()
    if expect is not None:
        ok = verify_sphere_homology(cx, expect)
        result["verdict"] = f"sphere S^{expect - 1}: {'true' if ok else 'false'}"
        result["sphere"] = ok
    elif "rank" in result:
        result["verdict"] = f"acyclic: {'true' if h.trivial else 'false'}"
        result["acyclic"] = h.trivial
    rows = [[g["degree"], g["betti"], " ".join(map(str, g["torsion"]))] for g in result["homology"]]
    return result, (["degree", "betti", "torsion"], rows)


def cmd_equiv(run: _Run):
    paths = run.args.config or []
    if len(paths) != 2:
        raise InputError("equiv needs exactly two --config files")
    a = io.parse_config(run.load("config", paths[0]))
    b = io.parse_config(run.load("config", paths[1]))
    same = bs_equivalent(a, b, run.args.up_to_permutation)
    result = {"equivalent": same, "up_to_permutation": bool(run.args.up_to_permutation)}
    return result, (["equivalent"], [[str(same).lower()]])


def cmd_degree(run: _Run):
    config = io.parse_config(run.load("config", _one(run.args.config)))
    cover = io.parse_cover(run.load("cover", run.args.cover), m=config.m)
    if run.args.triangulation is None and config.dim == 2:
        # the cover's vertices, in increasing id order, form a closed loop
        order = sorted(cover.weights)
        if len(order) < 2:
            raise InputError("a loop needs at least two vertices")
        tri = OrientedTriangulation(1, tuple((u, order[(i + 1) % len(order)]) for i, u in enumerate(order)))
    else:
        tri = io.parse_triangulation(run.load("triangulation", run.args.triangulation))
    res = degree(tri, cover, config, run.args.seed)
    out = _degree_json(res)
    return out, (["status", "degree"], [[out["status"], "" if out["degree"] is None else out["degree"]]])


def cmd_make_circle(run: _Run):
    config = io.parse_config(run.load("config", _one(run.args.config)))
    if run.args.k is None:
        raise InputError("--k is required")
    tri, cover = construct_degree_k_circle(config, run.args.k)
    check = degree(tri, cover, config, run.args.seed)
    result = {
        "k": run.args.k,
        "triangulation": io.triangulation_json(tri),
        "cover": io.cover_json(cover),
        "degree": check.degree,
    }
    return result, (["k", "vertices", "degree"], [[run.args.k, tri.vertex_count, check.degree]])


def _rng(run: _Run) -> random.Random:
    return random.Random(run.args.seed)


def _labeled_instance(run: _Run):
    """Read ``{"n", "triangulation", "carriers", ...}`` from ``--instance``."""
    src = run.load("instance", run.args.instance)
    n = io.integer(src, io.require(src, src.data, "n"), "n")
    if n < 1:
        src.fail("n", "must be positive")
    tri = io.parse_triangulation(src, io.require(src, src.data, "triangulation"), "triangulation")
    carriers = io.parse_carriers(src, io.require(src, src.data, "carriers"), "carriers", n)
    try:
        labeled = CarrierLabeledTriangulation(n, tri, carriers)
    except InputError as exc:
        src.fail("carriers", str(exc))
    return src, labeled


def _random_n(run: _Run, default: int) -> int:
    return run.args.n if run.args.n is not None else default


def cmd_sperner(run: _Run):
    if run.args.instance:
        src, labeled = _labeled_instance(run)
        col = io.require(src, src.data, "coloring")
        if not isinstance(col, dict):
            src.fail("coloring", "expected an object")
        coloring = {}
        for k, c in col.items():
            c = io.integer(src, c, f"coloring[{k!r}]")
            if not 1 <= c <= labeled.n:
                src.fail(f"coloring[{k!r}]", f"color {c} out of range 1..{labeled.n}")
            coloring[io.vertex_key(src, k, "coloring")] = c - 1
    else:
        labeled, coloring = random_sperner_instance(_random_n(run, 3), run.args.facets, _rng(run))
    valid = check_sperner(labeled, coloring)
    rb = find_rainbow(labeled.tri, coloring, labeled.n)
    result = {
        "n": labeled.n,
        "facets": len(labeled.tri.facets),
        "sperner": valid,
        "rainbow_facets": [i + 1 for i in rb.facets],
        "rainbow_count": len(rb.facets),
        "signed_count": rb.signed_count,
    }
    if labeled.n >= 2:
        result["boundary"] = _degree_json(sperner_degree(labeled, coloring, run.args.seed))
    rows = [[i + 1] for i in rb.facets]
    return result, (["rainbow_facet"], rows)


def _theorem_b_json(report) -> dict:
    out = {"boundary": _degree_json(report.boundary), "obstruction": report.obstruction}
    if report.witness_facet is None:
        out["verdict"] = "no obstruction"
    else:
        out["verdict"] = "balanced facet"
        out["witness"] = {
            "facet": report.witness_facet + 1,
            "support": [i + 1 for i in sorted(report.support)],
            "balanced_set": [i + 1 for i in report.balanced_set],
        }
    return out


def _witness_rows(out):
    w = out.get("witness")
    return (["verdict", "facet", "balanced_set"], [[out["verdict"], w["facet"] if w else "", " ".join(map(str, w["balanced_set"])) if w else ""]])


def cmd_kkm(run: _Run):
    if run.args.instance:
        src, labeled = _labeled_instance(run)
        cover = io.parse_cover(src, io.require(src, src.data, "cover"), "cover", m=labeled.n)
        for u in labeled.tri.vertices:
            if not cover.support(u) <= labeled.carrier[u]:
                src.fail("cover", f"vertex {u}: weight outside its carrier face")
    else:
        rng = _rng(run)
        labeled, _ = random_sperner_instance(_random_n(run, 3), run.args.facets, rng)
        cover = random_kkm_cover(labeled, rng)
    report = theorem_b_check(labeled.tri, cover, simplex_config(labeled.n), run.args.seed)
    out = {"n": labeled.n, "facets": len(labeled.tri.facets), **_theorem_b_json(report)}
    return out, _witness_rows(out)


def cmd_kkms(run: _Run):
    if run.args.instance:
        src, labeled = _labeled_instance(run)
        subsets = kkms_subsets(labeled.n)
        cover = io.parse_cover(src, io.require(src, src.data, "cover"), "cover", m=len(subsets))
        try:
            inst = KkmsInstance(labeled.n, labeled, cover)
        except InputError as exc:
            src.fail("cover", str(exc))
    else:
        inst = random_kkms_instance(_random_n(run, 3), run.args.facets, _rng(run))
    profile = enumerate_minimal_balanced(inst.config)
    w = kkms_witness(inst, profile)
    bd = kkms_boundary_degree(inst, run.args.seed, profile)
    family = [[i + 1 for i in sorted(s)] for s in w.family]
    out = {
        "n": inst.n,
        "facets": len(inst.subdivision.tri.facets),
        "witness": {"facet": w.facet + 1, "family": family},
        "boundary": _degree_json(bd),
    }
    return out, (["facet", "member"], [[w.facet + 1, " ".join(map(str, s))] for s in family])


def cmd_theorem_b(run: _Run):
    config = io.parse_config(run.load("config", _one(run.args.config)))
    tri = io.parse_triangulation(run.load("triangulation", run.args.triangulation))
    cover = io.parse_cover(run.load("cover", run.args.cover), m=config.m)
    out = _theorem_b_json(theorem_b_check(tri, cover, config, run.args.seed))
    return out, _witness_rows(out)


def _parse_grid(src: io.Source, config) -> GridCover:
    """A table of weights, or a named builder with its parameters."""
    data = src.data
    if isinstance(data, dict) and "builder" in data:
        name = data["builder"]
        res = io.integer(src, io.require(src, data, "resolution"), "resolution")
        mode = data.get("mode", "argmax")
        if name == "vortex":
            center = io.rational_vector(src, data["center"], "center") if "center" in data else None
            charge = io.integer(src, data.get("charge", 1), "charge")
            return vortex(config, res, center, charge, mode)
        if name == "bivortex":
            charges = tuple(io.integer(src, c, f"charges[{i}]") for i, c in enumerate(data.get("charges", [1, -1])))
            centers = None
            if "centers" in data:
                centers = [io.rational_vector(src, c, f"centers[{i}]") for i, c in enumerate(data["centers"])]
            return bivortex(config, res, charges, centers, mode)
        if name == "constant":
            return constant(config, res, io.rational_vector(src, io.require(src, data, "weights"), "weights"))
        src.fail("builder", f"unknown builder {name!r} (vortex, bivortex, constant)")
    n = io.integer(src, io.require(src, data, "n"), "n")
    res = io.integer(src, io.require(src, data, "resolution"), "resolution")
    lower = io.rational_vector(src, io.require(src, data, "lower"), "lower")
    upper = io.rational_vector(src, io.require(src, data, "upper"), "upper")
    table = io.as_list(src, io.require(src, data, "weights"), "weights")
    weights = {i: io.rational_vector(src, w, f"weights[{i}]") for i, w in enumerate(table)}
    try:
        return GridCover(n, lower, upper, res, weights)
    except InputError as exc:
        src.fail("", str(exc))


def cmd_index(run: _Run):
    config = io.parse_config(run.load("config", _one(run.args.config)))
    grid = _parse_grid(run.load("grid", run.args.grid), config)
    report = additivity_check(grid, config, run.args.seed)
    comps = [
        {"cells": [i + 1 for i in sorted(c.cells)], "index": c.index, "stable": c.stable}
        for c in report.components
    ]
    out = {
        "resolution": grid.resolution,
        "outer_degree": report.outer_degree,
        "index_sum": report.index_sum,
        "additive": report.additive,
        "components": comps,
        "support_only_facets": [i + 1 for i in sorted(report.discrepancies)],
    }
    if run.args.emit_svg:
        Path(run.args.emit_svg).write_text(component_svg(grid, report))
    rows = [[k + 1, len(c["cells"]), c["index"], str(c["stable"]).lower()] for k, c in enumerate(comps)]
    return out, (["component", "cells", "index", "stable"], rows)


COMMANDS = {
    "balanced": cmd_balanced,
    "complex": cmd_complex,
    "homology": cmd_homology,
    "equiv": cmd_equiv,
    "degree": cmd_degree,
    "make-circle": cmd_make_circle,
    "sperner": cmd_sperner,
    "kkm": cmd_kkm,
    "kkms": cmd_kkms,
    "theorem-b": cmd_theorem_b,
    "index": cmd_index,
}


def _one(paths):
    if not paths:
        raise InputError("--config is required")
    if len(paths) > 1:
        raise InputError("this subcommand takes a single --config")
    return paths[0]


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--config", action="append", help="point configuration JSON (equiv takes two)")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--format", choices=("json", "csv"), default="json")
    common.add_argument("--output", help="write the result here instead of stdout")
    common.add_argument("--timing", action="store_true", help="add wall-clock time to the manifest")

    parser = _Parser(prog="balanced-covers", description="Balanced subsets, nerve homology and cover degrees.")
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    sub.add_parser("balanced", parents=[common]).add_argument("--up-to-permutation", action="store_true")
    sub.add_parser("complex", parents=[common])
    sub.add_parser("homology", parents=[common]).add_argument("--complex")
    sub.add_parser("equiv", parents=[common]).add_argument("--up-to-permutation", action="store_true")
    p = sub.add_parser("degree", parents=[common])
    p.add_argument("--triangulation")
    p.add_argument("--cover")
    sub.add_parser("make-circle", parents=[common]).add_argument("--k", type=int)
    for name in ("sperner", "kkm", "kkms"):
        p = sub.add_parser(name, parents=[common])
        p.add_argument("--instance", help="instance JSON; omit to generate one from --seed")
        p.add_argument("--n", type=int, help="simplex vertices for generated instances")
        p.add_argument("--facets", type=int, default=60, help="facet budget for generated instances")
    p = sub.add_parser("theorem-b", parents=[common])
    p.add_argument("--triangulation")
    p.add_argument("--cover")
    p = sub.add_parser("index", parents=[common])
    p.add_argument("--grid")
    p.add_argument("--emit-svg", metavar="PATH")
    return parser


def _render(fmt: str, doc: dict, table) -> str:
    if fmt == "json":
        return io.dumps(doc)
    buf = _stdio.StringIO()
    for key, value in doc["manifest"].items():
        buf.write(f"# {key}: {value}\n")
    w = csv.writer(buf, lineterminator="\n")
    header, rows = table
    w.writerow(header)
    w.writerows(rows)
    return buf.getvalue()


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    run = _Run(args)
    start = time.perf_counter()
    try:
        result, table = COMMANDS[args.command](run)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except (GenericityError, CapacityError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_COMPUTE
    except TheoremViolationError as exc:
        print(f"internal error (theorem violated): {exc}", file=sys.stderr)
        return EXIT_THEOREM
    manifest = run.manifest()
    if args.timing:
        manifest["seconds"] = round(time.perf_counter() - start, 6)
    text = _render(args.format, {"manifest": manifest, "result": result}, table)
    if args.output:
        Path(args.output).write_text(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
