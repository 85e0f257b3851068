"""Command-line interface.

Exit codes: 0 for any computed answer (including NotEquivalent and Unknown),
1 when a witness fails its own certificate, 2 for input errors.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from pathlib import Path

from . import __version__
from .arith import NotRepresentableError
from .classify import SelfSimilar, classify
from .cube import (
    DEFAULT_MAX_COMPONENT_CELLS,
    DEFAULT_MAX_DEPTH,
    CubeError,
    FractalCube,
    NotTotallyDisconnectedError,
    check_total_disconnectedness,
    cube_dimension,
    render,
)
from .manifest import ManifestError, load_manifest
from .symbolic import EnumerationLimitError, dimension_moran
from .witness import max_pairs_budget, verify_witness

EPILOG = """\
Self-similar instances are classified from their contraction ratios alone.
Every such instance is taken on trust to satisfy the strong separation
condition; the tool cannot check it.  HOLDER_LAB_MAX_PAIRS overrides the pair
budget of 'verify'.
"""


class UsageError(Exception):
    pass


def _emit(payload: dict) -> None:
    json.dump(payload, sys.stdout, indent=2)
    sys.stdout.write("\n")


def _cube(manifest, iid: str) -> FractalCube:
    inst = manifest.get(iid)
    if not isinstance(inst, FractalCube):
        raise UsageError(f"{iid!r} is not a fractal cube")
    return inst


def cmd_classify(args) -> int:
    m = load_manifest(args.manifest)
    verdict = classify(m.get(args.id_a), m.get(args.id_b), args.mode, args.assume_td)
    _emit({"a": args.id_a, "b": args.id_b, "mode": args.mode, **verdict.to_json()})
    return 0


def cmd_check_td(args) -> int:
    m = load_manifest(args.manifest)
    status = check_total_disconnectedness(_cube(m, args.id), args.max_depth, args.max_cells)
    _emit({"id": args.id, **status.to_json()})
    return 0


def _default_depth(n: int, budget: int) -> int:
    k = 0
    while (n ** (k + 1)) * (n ** (k + 1) - 1) // 2 <= budget:
        k += 1
    return k


def cmd_verify(args) -> int:
    m = load_manifest(args.manifest)
    verdict = classify(m.get(args.id_a), m.get(args.id_b), args.mode, args.assume_td)
    if verdict.witness is None:
        raise UsageError(f"no witness available: verdict {verdict.kind.value} ({verdict.reason})")
    budget = max_pairs_budget()
    depth = args.depth if args.depth is not None else _default_depth(verdict.witness.source.n, budget)
    report = verify_witness(verdict.witness, depth, budget)
    _emit({"a": args.id_a, "b": args.id_b, "verdict": verdict.kind.value, **report.to_json()})
    return 0 if report.passed else 1


def cmd_render(args) -> int:
    m = load_manifest(args.manifest)
    text = render(_cube(m, args.id), args.depth)
    if args.out in (None, "-"):
        sys.stdout.write(text)
    else:
        Path(args.out).write_text(text)
        print(f"wrote {args.out}", file=sys.stderr)
    return 0


def cmd_dimension(args) -> int:
    m = load_manifest(args.manifest)
    inst = m.get(args.id)
    if isinstance(inst, FractalCube):
        dim = cube_dimension(inst)
        value, exact = dim.value, dim.exact
    else:
        assert isinstance(inst, SelfSimilar)
        value = dimension_moran(inst.ratios)
        ratios = ", ".join(map(str, inst.ratios))
        exact = f"root s of sum(r_i^s) = 1 for r = ({ratios})"
        if inst.is_uniform:
            exact = f"log {len(inst.ratios)} / -log {inst.ratios[0]}"
            value = math.log(len(inst.ratios)) / -inst.ratios[0].log()
    _emit({"id": args.id, "exact": exact, "value": value, "value_12": f"{value:.12f}"})
    return 0


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="holder-lab",
        description="Decide Lipschitz and strict Hölder equivalence of self-similar sets exactly.",
        epilog=EPILOG,
        formatter_class=argparse.RawDescriptionHelpFormatter,
    )
    p.add_argument("--version", action="version", version=__version__)
    sub = p.add_subparsers(dest="command", required=True)

    c = sub.add_parser("classify", help="classify a pair of instances", epilog=EPILOG)
    c.add_argument("manifest")
    c.add_argument("id_a")
    c.add_argument("id_b")
    c.add_argument("--mode", choices=("lipschitz", "holder"), default="holder")
    c.add_argument("--assume-td", action="store_true", help="treat cubes as totally disconnected without a certificate")
    c.set_defaults(func=cmd_classify)

    t = sub.add_parser("check-td", help="certify total disconnectedness of a fractal cube")
    t.add_argument("manifest")
    t.add_argument("id")
    t.add_argument("--max-depth", type=int, default=DEFAULT_MAX_DEPTH)
    t.add_argument("--max-cells", type=int, default=DEFAULT_MAX_COMPONENT_CELLS)
    t.set_defaults(func=cmd_check_td)

    v = sub.add_parser("verify", help="check a witness map on all pairs of a cylinder enumeration", epilog=EPILOG)
    v.add_argument("manifest")
    v.add_argument("id_a")
    v.add_argument("id_b")
    v.add_argument("--depth", type=int, default=None)
    v.add_argument("--mode", choices=("lipschitz", "holder"), default="holder")
    v.add_argument("--assume-td", action="store_true")
    v.set_defaults(func=cmd_verify)

    r = sub.add_parser("render", help="write a plain PBM picture of a level-k approximation")
    r.add_argument("manifest")
    r.add_argument("id")
    r.add_argument("--depth", type=int, default=1)
    r.add_argument("--out", default=None)
    r.set_defaults(func=cmd_render)

    d = sub.add_parser("dimension", help="Hausdorff dimension of an instance")
    d.add_argument("manifest")
    d.add_argument("id")
    d.set_defaults(func=cmd_dimension)
    return p


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (ManifestError, UsageError, NotTotallyDisconnectedError, CubeError,
            EnumerationLimitError, NotRepresentableError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
