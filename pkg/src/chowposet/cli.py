"""Command-line front end: `chowposet family|compute|check|verify`."""
from __future__ import annotations

import argparse
import hashlib
import json
import sys
import time

from . import families as fam
from .chow import (
    BatteryReport,
    aug_chow_poly,
    chow_all_methods,
    chow_poly,
    gamma_of,
    gamma_refined,
    h_interlacing_grid,
    h_refined,
    interlacing_battery,
    interlacing_grid,
    real_rootedness_report,
    tn_check,
)
from .errors import (
    ChowPosetError,
    InvalidPoset,
    LabelingError,
    NotALattice,
    NotRankUniform,
    NotSupersolvable,
    SchemaError,
    SizeLimitExceeded,
    UnknownFamily,
)
from .labeling import is_umel, verify_el
from .lattice import umel_from_supersolvable
from .poly import IntPoly, certify_interlacing, certify_real_rooted_nonpositive
from .poset import (
    DEFAULT_MAX_CHAINS,
    char_poly,
    is_rank_uniform,
    max_chains,
    order_complex_polys,
    reduced_char_poly,
)
from .suite import DEFAULT_SEED, run_suite

EXIT_OK, EXIT_CHECK, EXIT_INPUT, EXIT_LIMIT = 0, 1, 2, 3
SAFE_INT = 2**53


class InputError(Exception):
    pass


# ---------------------------------------------------------------- JSON helpers

def jsonable(obj):
    """Recursively convert to JSON types; integers beyond 2^53 become decimal strings."""
    if isinstance(obj, bool) or obj is None or isinstance(obj, (str, float)):
        return obj
    if isinstance(obj, int):
        return str(obj) if abs(obj) > SAFE_INT else obj
    if hasattr(obj, "item") and callable(obj.item):  # numpy scalars
        return jsonable(obj.item())
    if isinstance(obj, IntPoly):
        return [jsonable(c) for c in obj.coeffs]
    if isinstance(obj, dict):
        return {str(k): jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple, set, frozenset)):
        items = sorted(obj) if isinstance(obj, (set, frozenset)) else obj
        return [jsonable(v) for v in items]
    if hasattr(obj, "as_dict"):
        return jsonable(obj.as_dict())
    return str(obj)


def poly_doc(p: IntPoly, var: str = "x") -> dict:
    return {"var": var, "coeffs": jsonable(p)}


def parse_poly(text: str) -> IntPoly:
    """Either '1,4,1' (low to high) or a polynomial JSON object / array."""
    text = text.strip()
    try:
        if text.startswith("{") or text.startswith("["):
            doc = json.loads(text)
            coeffs = doc["coeffs"] if isinstance(doc, dict) else doc
        else:
            coeffs = [c for c in text.split(",") if c.strip()]
        return IntPoly([int(c) for c in coeffs])
    except (ValueError, KeyError, TypeError) as exc:
        raise InputError(f"cannot parse polynomial {text!r}: {exc}") from exc


def dump(doc, target: str | None):
    text = json.dumps(doc, indent=2, sort_keys=False) + "\n"
    if target in (None, "-"):
        sys.stdout.write(text)
    else:
        with open(target, "w") as fh:
            fh.write(text)


# ---------------------------------------------------------------- inputs

def family_params(args) -> dict:
    return {k: getattr(args, k) for k in ("n", "m", "k", "q") if getattr(args, k, None) is not None}


def load_input(args):
    """(poset, labeling or None, digest source) from --family or --input."""
    if getattr(args, "family", None):
        P, lab = fam.make_family(args.family, args.max_elements, **family_params(args))
        source = json.dumps({"family": args.family, **family_params(args)}, sort_keys=True)
        return P, lab, source
    path = getattr(args, "input", None)
    if path is None:
        raise InputError("give --input FILE|- or --family NAME")
    try:
        text = sys.stdin.read() if path == "-" else open(path).read()
        doc = json.loads(text)
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise InputError(f"{path} is not valid JSON: {exc}") from exc
    if isinstance(doc, dict) and isinstance(doc.get("elements"), list):
        if len(doc["elements"]) > args.max_elements:
            raise SizeLimitExceeded(f"{len(doc['elements'])} elements > {args.max_elements}")
    P, lab = fam.from_json(doc)
    return P, lab, json.dumps(doc, sort_keys=True)


def need_labels(lab):
    if lab is None:
        raise InputError("this command needs an edge labeling ('labels' in the document)")
    return lab


# ---------------------------------------------------------------- report

class Report:
    def __init__(self, command: list, digest_source: str):
        self.doc = {
            "command": command,
            "inputs_digest": hashlib.sha256(digest_source.encode()).hexdigest(),
            "outputs": {},
            "checks": [],
        }

    def out(self, key, value):
        self.doc["outputs"][key] = jsonable(value)

    def check(self, name, ok, witness=None):
        entry = {"name": name, "pass": bool(ok)}
        if not ok:
            entry["witness"] = jsonable(witness if witness is not None else {"reason": "check failed"})
        self.doc["checks"].append(entry)

    @property
    def ok(self) -> bool:
        return all(c["pass"] for c in self.doc["checks"])

    def finish(self, elapsed_ms=None) -> dict:
        self.doc["checks"].sort(key=lambda c: c["name"])
        self.doc["pass"] = self.ok
        if elapsed_ms is not None:
            self.doc["timing_ms"] = elapsed_ms
        return self.doc


def add_battery(rep: Report, prefix: str, battery: BatteryReport):
    for name, ok, detail in battery.checks:
        rep.check(f"{prefix}: {name}", ok, detail)


# ---------------------------------------------------------------- commands

def cmd_family(args):
    P, lab = fam.make_family(args.name, args.max_elements, **family_params(args))
    return fam.to_json(P, lab), EXIT_OK


def cmd_compute(args, rep: Report, P, lab):
    what, method = args.what, args.method
    if what in ("chow", "aug-chow"):
        aug = what == "aug-chow"
        if method:
            vals = {method: aug_chow_poly(P, method) if aug else chow_poly(P, method)}
        else:
            vals = chow_all_methods(P, aug, recursion_limit=None)
        first = next(iter(vals.values()))
        rep.out("polynomial", poly_doc(first))
        rep.out("methods", {m: v for m, v in vals.items()})
        agree = len(set(vals.values())) == 1
        rep.out("methods_agree", agree)
        rep.check("methods agree", agree, {m: v for m, v in vals.items()})
    elif what == "gamma":
        m = method or "flag"
        rep.out("gamma_chow", poly_doc(gamma_of(P, False, m), "y"))
        rep.out("gamma_aug_chow", poly_doc(gamma_of(P, True, m), "y"))
        if lab is not None and args.refined:
            ref = gamma_refined(P, lab, args.refine_method)
            rep.out("refinement", ref)
            add_battery(rep, "grid", interlacing_grid(ref))
    elif what == "h":
        f, h = order_complex_polys(P)
        rep.out("h", poly_doc(h, "y"))
        if lab is not None and args.refined:
            refs = h_refined(P, lab, args.refine_method)
            rep.out("refinement", [{"corank": r.corank, "element": P.name(r.element), "h": r.h} for r in refs])
            add_battery(rep, "grid", h_interlacing_grid(refs))
    elif what == "chain":
        f, _ = order_complex_polys(P)
        rep.out("chain_polynomial", poly_doc(f, "y"))
        rep.out("maximal_chains", P.maximal_chain_count)
        if args.list_chains:
            chains = max_chains(P, args.max_chains)
            rep.out("chains", [[P.name(e) for e in c] for c in chains])
    elif what == "char":
        rep.out("characteristic", poly_doc(char_poly(P)))
        rep.out("reduced_characteristic", poly_doc(reduced_char_poly(P)) if P.n >= 1 else None)


def cmd_check(args, rep: Report, P, lab):
    what = args.what
    if what == "el":
        res = verify_el(P, need_labels(lab))
        rep.check("el", res.ok, res.witness)
    elif what == "umel":
        res = is_umel(P, need_labels(lab))
        rep.out("umel", res)
        rep.check("umel", res.ok, {"failed": res.failed, "detail": res.detail})
    elif what == "rank-uniform":
        res = is_rank_uniform(P)
        rep.check("rank-uniform", res.ok, res.witness)
    elif what == "supersolvable":
        try:
            lab2, report = umel_from_supersolvable(P)
            rep.out("modular_chain", [P.name(e) for e in report.chain])
            rep.out("labels", [[s, t, lab2(s, t)] for s, t in P.covers])
            rep.out("report", report)
            rep.check("supersolvable", True)
            rep.check("supersolvable labeling is UMEL", report.umel["ok"], report.umel)
        except (NotSupersolvable, NotALattice, NotRankUniform) as exc:
            rep.check("supersolvable", False, {"reason": type(exc).__name__, "message": str(exc),
                                               "witness": exc.witness})
    elif what == "tn":
        res = tn_check(P)
        rep.out("lower_whitney_matrix", res.matrix)
        rep.check("tn", res.ok, {"reason": res.reason, "witness": res.witness})
    elif what == "realroot":
        if args.f is not None:
            cert = certify_real_rooted_nonpositive(parse_poly(args.f))
            rep.out("certificate", cert)
            rep.check("real-rooted nonpositive", bool(cert), cert.as_dict())
        else:
            add_battery(rep, "realroot", real_rootedness_report(P))
    elif what == "interlace":
        if args.f is not None or args.g is not None:
            if args.f is None or args.g is None:
                raise InputError("check interlace needs both --f and --g")
            f, g = parse_poly(args.f), parse_poly(args.g)
            rep.check("f interlaces g", certify_interlacing(f, g), {"f": f, "g": g})
        else:
            add_battery(rep, "battery", interlacing_battery(P, need_labels(lab)))
    elif what == "battery":
        lab = need_labels(lab)
        add_battery(rep, "battery", interlacing_battery(P, lab))
        add_battery(rep, "realroot", real_rootedness_report(P))
        add_battery(rep, "gamma grid", interlacing_grid(gamma_refined(P, lab, "recurse")))
        add_battery(rep, "h grid", h_interlacing_grid(h_refined(P, lab, "recurse")))


def cmd_verify(args, rep: Report):
    rep.out("level", args.level)
    rep.out("seed", args.seed)
    for name, (ok, witness) in run_suite(args.level, args.golden, args.seed).items():
        rep.check(name, ok, witness)


# ---------------------------------------------------------------- parser

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--output", default="-", help="output file, '-' for stdout")
    common.add_argument("--seed", type=int, default=DEFAULT_SEED)
    common.add_argument("--max-elements", type=int, default=fam.DEFAULT_MAX_ELEMENTS)
    common.add_argument("--max-chains", type=int, default=DEFAULT_MAX_CHAINS)
    common.add_argument("--timing", action="store_true", help="add wall-clock milliseconds to the report")

    params = argparse.ArgumentParser(add_help=False)
    for p in ("n", "m", "k", "q"):
        params.add_argument(f"--{p}", type=int)

    source = argparse.ArgumentParser(add_help=False, parents=[params])
    source.add_argument("--input", help="poset JSON document, '-' for stdin")
    source.add_argument("--family", help="build a named family instead of reading --input")

    parser = argparse.ArgumentParser(prog="chowposet", description="Chow polynomials of graded posets.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("family", parents=[common, params], help="emit a poset document")
    p.add_argument("name", help=f"one of {', '.join(sorted(fam.FAMILIES))}")

    p = sub.add_parser("compute", parents=[common, source], help="compute a polynomial")
    p.add_argument("what", choices=["chow", "aug-chow", "gamma", "h", "chain", "char"])
    p.add_argument("--method", help="chow: recursion|flag; aug-chow: sum|adjoin|flag; gamma: flag|recursion")
    p.add_argument("--refined", action="store_true", help="gamma/h: add refinements by first label")
    p.add_argument("--refine-method", default="recurse", choices=["recurse", "enumerate"])
    p.add_argument("--list-chains", action="store_true", help="chain: list maximal chains (capped by --max-chains)")

    p = sub.add_parser("check", parents=[common, source], help="run a check")
    p.add_argument("what", choices=["el", "umel", "rank-uniform", "supersolvable", "tn",
                                    "realroot", "interlace", "battery"])
    p.add_argument("--f", help="polynomial coefficients low to high, e.g. 1,4,1")
    p.add_argument("--g", help="second polynomial for interlace")

    p = sub.add_parser("verify", parents=[common], help="run the verification suite")
    p.add_argument("--level", choices=["quick", "full"], default="quick")
    p.add_argument("--golden", help="override the type-B golden file")
    return parser


def main(argv=None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_INPUT
    start = time.perf_counter()
    try:
        if args.command == "family":
            doc, code = cmd_family(args)
            dump(doc, args.output)
            return code
        if args.command == "verify":
            rep = Report(argv, json.dumps({"level": args.level, "seed": args.seed,
                                                              "golden": args.golden}, sort_keys=True))
            cmd_verify(args, rep)
        else:
            needs_poset = not (args.command == "check" and args.what in ("realroot", "interlace")
                               and (args.f is not None or args.g is not None))
            if needs_poset:
                P, lab, source = load_input(args)
            else:
                P, lab, source = None, None, json.dumps({"f": args.f, "g": args.g}, sort_keys=True)
            rep = Report(argv, source)
            if args.command == "compute":
                cmd_compute(args, rep, P, lab)
            else:
                cmd_check(args, rep, P, lab)
    except SizeLimitExceeded as exc:
        print(f"resource limit: {exc}", file=sys.stderr)
        return EXIT_LIMIT
    except (InputError, SchemaError, InvalidPoset, LabelingError, UnknownFamily, ValueError) as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except ChowPosetError as exc:
        print(f"input error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_INPUT
    elapsed = round((time.perf_counter() - start) * 1000) if args.timing else None
    doc = rep.finish(elapsed)
    dump(doc, args.output)
    return EXIT_OK if rep.ok else EXIT_CHECK


if __name__ == "__main__":
    sys.exit(main())
