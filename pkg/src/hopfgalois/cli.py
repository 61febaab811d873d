"""Command-line interface.

Exit codes: 0 completed with every checked property holding, 1 a property
failed, 2 a budget was exhausted, 3 invalid input.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
import time
from datetime import datetime, timezone

from . import __version__
from .abelian import AbelianType, BudgetExceeded, aut_order, order_statistics
from .fixtures import GroupHandle, RemarkGroup, family, handle_label, parse_group_spec, to_finite_group
from .pcgroup import PcPresentation

log = logging.getLogger("hopfgalois")

EXIT_OK, EXIT_FAIL, EXIT_BUDGET, EXIT_INPUT = 0, 1, 2, 3
SAFE_INT = 2**53


class InputError(ValueError):
    pass


def jsonable(obj):
    """Tuples to lists, dict keys to str, integers beyond 2^53 to decimal strings."""
    if isinstance(obj, bool) or obj is None or isinstance(obj, (str, float)):
        return obj
    if isinstance(obj, int):
        return str(obj) if abs(obj) > SAFE_INT else obj
    if hasattr(obj, "item") and callable(obj.item):
        return jsonable(obj.item())
    if isinstance(obj, dict):
        return {str(k): jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple, set, frozenset)):
        return [jsonable(v) for v in obj]
    raise TypeError(f"cannot serialize {type(obj).__name__}")


# -- argument handling ---------------------------------------------------------


def _exponents(text: str) -> tuple[int, ...]:
    try:
        return tuple(int(v) for v in text.split(",") if v.strip())
    except ValueError as e:
        raise argparse.ArgumentTypeError(f"bad exponent list {text!r}") from e


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="hopfgalois", description=__doc__.splitlines()[0])
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--p", type=int, help="the prime")
    common.add_argument("--n", type=int, help="family parameter n")
    common.add_argument("--exponents", type=_exponents, help="abelian type, e.g. 2,1,1")
    common.add_argument("--family", help="fixture family 1-5 or 'remark'")
    common.add_argument("--target", help="group spec (inline JSON or file path)")
    common.add_argument("--ambient", help="abelian group spec (inline JSON or file path)")
    common.add_argument("--restrict-sylow", dest="restrict", action="store_true", default=True)
    common.add_argument("--no-restrict-sylow", dest="restrict", action="store_false")
    common.add_argument("--max-nodes", type=int, default=None)
    common.add_argument("--threads", type=int, default=1)
    common.add_argument("--seed", type=int, default=None)
    common.add_argument("--json", dest="json_path", help="write the report here instead of stdout")
    common.add_argument("--long-running", action="store_true", help="allow jobs that may run for hours")
    common.add_argument("--no-meta", action="store_true", help="omit timestamps and timings")
    common.add_argument("-v", "--verbose", action="store_true")
    sub = ap.add_subparsers(dest="verb", required=True)
    for verb, text in [
        ("info", "invariants of a group"),
        ("construct", "the abelian partner A and the regular subgroup N'"),
        ("verify-nonab", "verify the construction, including the normalizer order"),
        ("search", "search a regular subgroup isomorphic to --target in Hol(--ambient)"),
        ("enumerate", "census of regular subgroups of Hol(--ambient)"),
        ("census", "the order-125 censuses and non-realizability searches"),
        ("lemma-suite", "transitivity, order and power-formula checks on small holomorphs"),
    ]:
        sub.add_parser(verb, parents=[common], help=text)
    return ap


def _family_handle(args) -> GroupHandle:
    if args.p is None:
        raise InputError("--family needs --p")
    if str(args.family) == "remark":
        return RemarkGroup(args.p)
    if args.n is None:
        raise InputError("--family needs --n")
    try:
        return family(int(args.family), args.p, args.n)
    except ValueError as e:
        raise InputError(str(e)) from e


def _group(args, which: str = "target") -> GroupHandle:
    spec = getattr(args, which)
    if spec is not None:
        try:
            return parse_group_spec(spec)
        except (ValueError, KeyError, TypeError) as e:
            raise InputError(f"invalid {which} spec: {e}") from e
    if args.family is not None and which == "target":
        return _family_handle(args)
    if args.exponents is not None:
        if args.p is None:
            raise InputError("--exponents needs --p")
        return AbelianType(args.p, args.exponents)
    raise InputError(f"missing --{which}")


def _ambient(args) -> AbelianType:
    g = _group(args, "ambient")
    if not isinstance(g, AbelianType):
        raise InputError("the ambient group must be abelian")
    return g


def _source(args) -> PcPresentation | RemarkGroup:
    g = _group(args, "target")
    if isinstance(g, AbelianType):
        raise InputError("the source group must be nonabelian")
    return g


# -- verbs -----------------------------------------------------------------------


def cmd_info(args) -> tuple[dict, int]:
    g = _group(args, "ambient" if args.ambient is not None else "target")
    G = to_finite_group(g)
    out = {"group": g.spec(), "label": handle_label(g), **G.fingerprint()}
    if isinstance(g, AbelianType):
        out["aut_order"] = aut_order(g)
        out["hol_order"] = g.order * out["aut_order"]
    else:
        out["aut_order"] = g.aut_count()
    return out, EXIT_OK


def cmd_construct(args) -> tuple[dict, int]:
    from .construct import build_phi, build_regular_nprime, derive_abelian_target

    src = _source(args)
    plan = derive_abelian_target(src)
    phis = build_phi(plan)
    np_ = build_regular_nprime(plan, phis)
    out = plan.as_dict()
    out["phi"] = [[list(r) for r in f] for f in phis]
    out["nprime"] = np_.subgroup.witness()
    out["nprime_order"] = np_.subgroup.order
    return out, EXIT_OK


def cmd_verify_nonab(args) -> tuple[dict, int]:
    from .construct import ConstructionInapplicable, remark_negative_check, verify_nonab_theorem

    src = _source(args)
    if isinstance(src, RemarkGroup):
        if not args.long_running:
            out = {"source": src.spec(), "applicable": False,
                   "derived_order": len(src.derived_subgroup()),
                   "note": "rerun with --long-running for the normalizer comparison"}
            return out, EXIT_OK
        out = remark_negative_check(src.p, threads=args.threads, seed=args.seed, max_nodes=args.max_nodes)
        ok = out["construction_inapplicable"] and out.get("differs", False)
        return out, EXIT_OK if ok else EXIT_FAIL
    try:
        out = verify_nonab_theorem(src, strategy="scan_parallel", threads=args.threads)
    except ConstructionInapplicable as e:
        return {"source": src.spec(), "applicable": False, "reason": str(e)}, EXIT_FAIL
    return out, EXIT_OK if out["theorem_holds"] else EXIT_FAIL


def cmd_search(args) -> tuple[dict, int]:
    from .realizability import realizability_report

    G = _group(args, "target")
    N = _ambient(args)
    if to_finite_group(G).order != N.order:
        raise InputError("target and ambient must have the same order")
    out = realizability_report(G, N, restrict=args.restrict, seed=args.seed, threads=args.threads,
                               max_nodes=args.max_nodes)
    checks = out.get("witness_checks", {})
    ok = all(v for k, v in checks.items() if k != "multiplicative_type")
    return out, EXIT_OK if ok else EXIT_FAIL


def _census_ok(rep: dict, t: AbelianType) -> bool:
    if t.p > t.n:
        return rep["only_ambient_abelian_type"] and rep["lemma_fail"] == 0
    return True


def cmd_enumerate(args) -> tuple[dict, int]:
    from .realizability import census

    t = _ambient(args)
    rep = census(t, restrict=args.restrict, threads=args.threads, seed=args.seed)
    return rep, EXIT_OK if _census_ok(rep, t) else EXIT_FAIL


def cmd_census(args) -> tuple[dict, int]:
    from .realizability import SearchSpec, census, search_regular

    p = args.p or 5
    reports, ok = [], True
    for exps in [(1, 1, 1), (2, 1), (3,)]:
        t = AbelianType(p, exps)
        log.info("census of %s", t)
        rep = census(t, restrict=True, threads=args.threads, seed=args.seed)
        ok &= _census_ok(rep, t)
        reports.append(rep)
    searches = []
    amb = AbelianType(p, (1, 1, 1))
    for exps in [(3,), (2, 1)]:
        tgt = AbelianType(p, exps)
        log.info("search %s in Hol(%s)", tgt, amb)
        res = search_regular(SearchSpec(amb, tgt, True, seed=args.seed, threads=args.threads,
                                        max_nodes=args.max_nodes))
        searches.append({"target": tgt.spec(), "ambient": amb.spec(), "found": res.found,
                         "exhausted": res.exhausted, "nodes": res.nodes})
        ok &= (not res.found) and res.exhausted
    return {"censuses": reports, "searches": searches}, EXIT_OK if ok else EXIT_FAIL


def cmd_lemma_suite(args) -> tuple[dict, int]:
    from .suites import lemma_suite

    out = lemma_suite(seed=args.seed or 0)
    return out, EXIT_OK if out["ok"] else EXIT_FAIL


COMMANDS = {
    "info": cmd_info,
    "construct": cmd_construct,
    "verify-nonab": cmd_verify_nonab,
    "search": cmd_search,
    "enumerate": cmd_enumerate,
    "census": cmd_census,
    "lemma-suite": cmd_lemma_suite,
}


def run(argv: list[str] | None = None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as e:
        return EXIT_OK if e.code == 0 else EXIT_INPUT
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, stream=sys.stderr,
                        format="%(message)s")
    if args.threads < 1:
        print("--threads must be positive", file=sys.stderr)
        return EXIT_INPUT
    start = time.monotonic()
    try:
        report, code = COMMANDS[args.verb](args)
    except BudgetExceeded as e:
        report, code = {"error": "budget", "message": str(e)}, EXIT_BUDGET
    except (InputError, ValueError) as e:
        report, code = {"error": "input", "message": str(e)}, EXIT_INPUT
    report = {"command": args.verb, **report, "exit_code": code}
    if not args.no_meta:
        report["meta"] = {
            "version": __version__,
            "timestamp": datetime.now(timezone.utc).isoformat(timespec="seconds"),
            "elapsed_seconds": round(time.monotonic() - start, 3),
        }
    text = json.dumps(jsonable(report), indent=2, sort_keys=True)
    if args.json_path:
        with open(args.json_path, "w") as fh:
            fh.write(text + "\n")
    else:
        print(text)
    return code


def main() -> None:
    sys.exit(run())
