"""Command line entry point: ``hompath {plan2d,plan3d,coord} ...``.

Exit status: 0 when k classes were found, 3 for a partial result, 2 for
invalid input.
"""
from __future__ import annotations

import argparse
import sys

from . import io
from .coord import CoordScene
from .planner import StartGoalError, plan_k_classes, shorten_result
from .spaces import CoordSpace, GridSpace2D, GridSpace3D, InvalidRequestError

EXIT_OK = 0
EXIT_INVALID = 2
EXIT_PARTIAL = 3


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="hompath", description="k cheapest paths in distinct homotopy classes")
    sub = ap.add_subparsers(dest="command", required=True)
    for name, help_ in (
        ("plan2d", "plane with polygonal obstacles"),
        ("plan3d", "complement of a polygonal knot or link"),
        ("coord", "joint moves of point robots on a grid"),
    ):
        p = sub.add_parser(name, help=help_)
        p.add_argument("--scene", required=True, help="scene JSON file")
        p.add_argument("--k", type=int, default=1, help="number of classes")
        p.add_argument("--res", type=int, default=None, help="grid vertices along the longest side")
        p.add_argument("--out", required=True, help="result JSON file")
        p.add_argument("--obj", default=None, help="optional OBJ export")
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--max-word", type=int, default=12)
        p.add_argument("--max-expansions", type=int, default=10**7)
        if name == "plan2d":
            p.add_argument("--connectivity", choices=("4", "8", "hex"), default=None)
        if name != "coord":
            p.add_argument("--no-shorten", action="store_true", help="skip path shortening")
    return ap


def _space(req: io.PlanRequest):
    if req.kind == "plan2d":
        return GridSpace2D(req.scene, req.res, req.start, req.goal, req.connectivity)
    if req.kind == "plan3d":
        return GridSpace3D(req.scene, req.res, req.start, req.goal, bounds=req.bounds, seed=req.seed)
    scene: CoordScene = req.scene
    return CoordSpace(scene, req.start, req.goal)


def run(req: io.PlanRequest, shorten: bool = True):
    space = _space(req)
    result = plan_k_classes(space, req.k, req.max_word, req.max_expansions)
    if shorten and req.kind != "coord":
        shorten_result(result, space, seed=req.seed)
    return space, result


def run_cli(argv=None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    default_res = {"plan2d": 40, "plan3d": 50, "coord": 0}[args.command]
    try:
        req = io.load_request(
            args.command,
            args.scene,
            k=args.k,
            res=args.res if args.res is not None else default_res,
            max_word=args.max_word,
            max_expansions=args.max_expansions,
            seed=args.seed,
            connectivity=getattr(args, "connectivity", None),
        )
        space, result = run(req, shorten=not getattr(args, "no_shorten", False))
    except (io.InputError, InvalidRequestError, StartGoalError, OSError, ValueError) as e:
        print(f"hompath: invalid input: {e}", file=sys.stderr)
        return EXIT_INVALID
    rec = io.result_record(args.command, result, space.presentation)
    with open(args.out, "w") as fh:
        fh.write(rec.to_json())
    if args.obj:
        surfaces = space.surfaces.surfaces if args.command == "plan3d" else []
        paths = [c.shortened or c.points for c in result.classes] if args.command != "coord" else []
        io.export_obj(surfaces, paths, args.obj)
    for i, c in enumerate(result.classes):
        print(f"class {i + 1}: cost {c.cost:g}  word '{c.word}'", file=sys.stderr)
    if not result.complete:
        print(f"hompath: only {len(result.classes)} of {req.k} classes found", file=sys.stderr)
        return EXIT_PARTIAL
    return EXIT_OK


def main():
    sys.exit(run_cli())


if __name__ == "__main__":
    main()
