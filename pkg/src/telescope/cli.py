"""Command line interface: one ``telescope`` binary with subcommands.

JSON on stdout is the machine interface (``--output json``, the default);
``--output text`` prints the same fields as aligned ``key: value`` lines.
Exit status is 0 on success, 1 when a computation fails (or a suite
criterion fails) and 2 for usage errors, which include unreadable or
malformed inputs and out-of-range parameters.
"""
from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path

from . import bounds as bd
from .boxes import box_homology, format_boxes, parse_box, parse_boxes, write_ppm
from .constructible import POLICIES, eta_schedule, stabilize, telescope
from .errors import BadThresholds, InvalidParams, ParseError, TelescopeError, TooManyFunctions
from .fibred import check_inequality
from .formula import parse_formula
from .homology import homology_report
from .mcomplex import MSpec, build_M, check_connectivity, collapse
from .poset import parse_poset
from .simplicial import parse_complex
from .suite import CRITERIA, corpus, run_suite

VARIANTS = ("equations", "nonstrict", "mixed", "gv", "projection",
            "pfaffian_total", "pfaffian_degree_k", "pfaffian_projection")


class UsageError(Exception):
    pass


@dataclass
class RunConfig:
    subcommand: str
    args: argparse.Namespace
    seed: int = 0
    output: str = "json"
    inputs: list = field(default_factory=list)


def _read(path) -> str:
    try:
        return Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from None


def _num(v):
    """JSON-friendly exact number: int when integral, 'p/q' otherwise."""
    v = Fraction(v)
    return v.numerator if v.denominator == 1 else f"{v.numerator}/{v.denominator}"


def _caps(text: str) -> tuple[int, ...]:
    try:
        return tuple(int(c) for c in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"caps must be comma separated integers, got {text!r}") from None


def _fraction(text: str) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"not a rational number: {text!r}") from None


# -- subcommands ----------------------------------------------------------------

def cmd_homology(cfg: RunConfig) -> dict:
    return homology_report(parse_complex(_read(cfg.args.complex)))


def cmd_mcomplex(cfg: RunConfig) -> dict:
    a = cfg.args
    text = _read(a.poset)
    P = parse_poset(text, range(len(a.caps)))
    K = build_M(MSpec(P, a.caps))
    b = homology_report(K)
    out = {"f_vector": list(K.f_vector), "betti": b["betti"], "torsion": b["torsion"],
           "connectivity_ok": None, "collapsible": None}
    if a.check_connectivity is not None:
        out["connectivity_ok"] = check_connectivity(K, a.check_connectivity)["homology_ok"]
    if a.collapse:
        out["collapsible"] = collapse(K, restarts=a.restarts, seed=cfg.seed).value
    return out


def cmd_telescope(cfg: RunConfig) -> dict:
    a = cfg.args
    F = parse_formula(_read(a.formula))
    try:
        box = parse_box(a.box.replace("x", " x "))
    except ParseError as exc:
        raise UsageError(str(exc)) from None
    if len(box) != F.n:
        raise UsageError(f"the formula has {F.n} variables but the box has {len(box)} coordinates")
    if a.emit_image and F.n != 2:
        raise UsageError("image output needs a 2D box set")
    res = stabilize(F, a.m, box, a.depth, eta_schedule(a.eta, a.rounds), policy=a.policy, compact=a.compact)
    T = None
    if a.emit_boxes or a.emit_image:
        T = telescope(F, a.m, res.eta_used, box, a.depth, a.policy, a.compact).boxes
    if a.emit_boxes:
        Path(a.emit_boxes).write_text(format_boxes(T), encoding="utf-8")
    if a.emit_image:
        write_ppm(T, a.emit_image, window=box)
    return {"betti": list(res.betti.free), "torsion": [list(t) for t in res.betti.torsion],
            "components": res.betti[0], "eta_used": _num(res.eta_used), "stable": res.stable,
            "truncated": any(t for _, _, t in res.runs),
            "runs": [{"eta": _num(e), "betti": list(b.free)} for e, b, _ in res.runs]}


def cmd_fibred(cfg: RunConfig) -> dict:
    a = cfg.args
    T = parse_boxes(_read(a.boxes))
    return check_inequality(T, a.n, a.k)


def cmd_bounds(cfg: RunConfig) -> dict:
    a = cfg.args
    pf = None
    if a.variant.startswith("pfaffian"):
        if None in (a.ell, a.alpha, a.beta):
            raise UsageError("pfaffian variants need --ell, --alpha and --beta")
        pf = (a.ell, a.alpha, a.beta)
    P = bd.BoundParams(n=a.n, s=a.s, d=a.d, k=a.k, r=a.r, pfaffian=pf, c=a.c)
    extra = {}
    if a.variant in ("equations", "nonstrict", "mixed"):
        value = bd.classical_bound(a.variant, P)
    elif a.variant == "gv":
        value = bd.gv_bound_k(P)
        extra["nu"] = bd.nu(P.n, P.k, P.s)
    elif a.variant == "projection":
        res = bd.projection_bound(P, a.c_qe)
        value = res["value"]
        extra = {"terms": [_num(t) for t in res["terms"]], "quantifier_elimination": res["quantifier_elimination"]}
    else:
        value = bd.pfaffian_bounds(a.variant.removeprefix("pfaffian_"), P, a.c1, a.c2)
    return {"value": _num(value), "formula": bd.FORMULAS[a.variant], "constants_note": bd.CONSTANTS_NOTE, **extra}


def cmd_suite(cfg: RunConfig) -> tuple[dict, int]:
    only = None
    if cfg.args.only:
        only = {int(x) for x in cfg.args.only.split(",")}
    outcomes = run_suite(cfg.seed, only)
    if cfg.output == "text":
        for o in outcomes:
            print(o.line())
    res = {"seed": cfg.seed, "passed": all(o.passed for o in outcomes),
           "criteria": [{"number": o.number, "name": o.name, "passed": o.passed, "limit": o.limit}
                        for o in outcomes]}
    return res, 0 if res["passed"] else 1


def cmd_examples(cfg: RunConfig) -> dict:
    out = Path(cfg.args.out)
    try:
        out.mkdir(parents=True, exist_ok=True)
        written = []
        for name, text in corpus().items():
            (out / name).write_text(text, encoding="utf-8")
            written.append(str(out / name))
    except OSError as exc:
        raise UsageError(f"cannot write to {out}: {exc.strerror}") from None
    return {"written": written}


COMMANDS = {"homology": cmd_homology, "mcomplex": cmd_mcomplex, "telescope": cmd_telescope,
            "fibred": cmd_fibred, "bounds": cmd_bounds, "suite": cmd_suite, "examples": cmd_examples}


# -- parser ---------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=0, help="seed for every randomized step (default 0)")
    common.add_argument("--output", choices=("json", "text"), default="json")

    p = argparse.ArgumentParser(prog="telescope", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="subcommand", required=True, metavar="SUBCOMMAND")

    h = sub.add_parser("homology", parents=[common], help="integer homology of a simplicial complex file")
    h.add_argument("complex", help="one maximal simplex per line")

    m = sub.add_parser("mcomplex", parents=[common], help="build M(m0, ..., mN) from a poset and caps")
    m.add_argument("--poset", required=True, help="lines 'a < b'")
    m.add_argument("--caps", required=True, type=_caps, help="comma separated caps m0,...,mN")
    m.add_argument("--check-connectivity", type=int, metavar="M")
    m.add_argument("--collapse", action="store_true")
    m.add_argument("--restarts", type=int, default=32)

    t = sub.add_parser("telescope", parents=[common], help="Betti numbers of the telescope of a formula")
    t.add_argument("--formula", required=True)
    t.add_argument("--m", type=int, default=2)
    t.add_argument("--eta", type=_fraction, default=Fraction(1, 10))
    t.add_argument("--rounds", type=int, default=2, help="length of the squaring η schedule")
    t.add_argument("--box", required=True, help="e.g. -2,2x-2,2")
    t.add_argument("--depth", type=int, default=8)
    t.add_argument("--policy", choices=POLICIES, default="outer")
    t.add_argument("--compact", action="store_true", help="intersect with the ball |x|² ≤ 1/δ")
    t.add_argument("--emit-boxes", metavar="PATH")
    t.add_argument("--emit-image", metavar="PATH", help="binary PPM of a 2D box set")

    f = sub.add_parser("fibred", parents=[common], help="check the fibred-power Betti inequality")
    f.add_argument("--boxes", required=True)
    f.add_argument("--n", type=int, required=True)
    f.add_argument("--k", type=int, required=True)

    b = sub.add_parser("bounds", parents=[common], help="evaluate an explicit Betti-number bound")
    b.add_argument("--variant", choices=VARIANTS, required=True)
    for name, default in (("n", 1), ("s", 1), ("d", 1), ("k", 0), ("r", 0)):
        b.add_argument(f"--{name}", type=int, default=default)
    b.add_argument("--c", type=_fraction, default=Fraction(1))
    b.add_argument("--c-qe", type=int, default=1, help="constant in the (sd)^(c'n²r) comparison value")
    b.add_argument("--c1", type=int, default=1)
    b.add_argument("--c2", type=int, default=1)
    b.add_argument("--ell", type=int)
    b.add_argument("--alpha", type=int)
    b.add_argument("--beta", type=int)

    s = sub.add_parser("suite", parents=[common], help="run the seeded acceptance criteria")
    s.add_argument("--only", help="comma separated criterion numbers (1-%d)" % len(CRITERIA))

    e = sub.add_parser("examples", parents=[common], help="write the canonical example inputs")
    e.add_argument("--out", default="examples_out")
    return p


def _glue_negative_values(argv: list[str]) -> list[str]:
    # "--box -2,2x-2,2" would otherwise be read as an unknown option
    out, i = [], 0
    while i < len(argv):
        if argv[i] == "--box" and i + 1 < len(argv):
            out.append(f"--box={argv[i + 1]}")
            i += 2
        else:
            out.append(argv[i])
            i += 1
    return out


def _text(d: dict) -> str:
    width = max((len(k) for k in d), default=0)
    return "".join(f"{k.ljust(width)}  {json.dumps(v, sort_keys=True)}\n" for k, v in d.items())


def run(cfg: RunConfig) -> tuple[dict, int]:
    res = COMMANDS[cfg.subcommand](cfg)
    return res if isinstance(res, tuple) else (res, 0)


def main(argv=None) -> int:
    argv = _glue_negative_values(list(sys.argv[1:] if argv is None else argv))
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    paths = [v for k, v in vars(args).items() if k in ("complex", "poset", "formula", "boxes") and v]
    cfg = RunConfig(args.subcommand, args, seed=args.seed, output=args.output, inputs=paths)
    try:
        result, status = run(cfg)
    except (UsageError, ParseError, InvalidParams, BadThresholds, TooManyFunctions) as exc:
        print(f"telescope {cfg.subcommand}: {exc}", file=sys.stderr)
        return 2
    except TelescopeError as exc:
        print(f"telescope {cfg.subcommand}: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1
    if cfg.output == "json":
        sys.stdout.write(json.dumps(result, sort_keys=True) + "\n")
    elif cfg.subcommand != "suite":
        sys.stdout.write(_text(result))
    return status


if __name__ == "__main__":
    sys.exit(main())
