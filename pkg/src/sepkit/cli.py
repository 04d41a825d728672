"""Command-line front end.

Exit codes: 0 success, 1 error (including failed verification), 2 the
Dyck construction found a witness instead of a code, 3 the Preiss
recursion ran out of fuel.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import asdict, dataclass
from fractions import Fraction

from . import dyck, preiss
from .cantor import UPPoint, borel_rank, eval_borel, eval_spc, is_monotone, spc_norm, support
from .errors import SepkitError
from .graphtree import BAIRE, CANTOR, GraphTree
from .sequences import kb_compare, lo_code_of_tree
from .serialize import (borel_from_json, borel_to_json, digest, polytope_from_json, report_dumps, show_rat,
                        spc_from_json, spc_to_json, vec_from_json)
from .souslin import build_good_scheme, scheme_from_json, scheme_to_json, validate_good

EXIT_OK, EXIT_ERROR, EXIT_WITNESS, EXIT_FUEL = 0, 1, 2, 3

ORDER_WORDS = {-1: "less", 0: "equal", 1: "greater"}


@dataclass(frozen=True)
class DyckRunConfig:
    alphabet: int | None = None
    memo: bool = True
    verify_depth: int | None = None
    max_states: int = dyck.DEFAULT_MAX_STATES


@dataclass(frozen=True)
class PreissRunConfig:
    cubes: int = 2
    fuel: int = 10_000
    levels: int = 6
    grid_step: str = "1/4"
    address_len: int = 6
    address_limit: int = 64


class CliError(Exception):
    def __init__(self, message, code=EXIT_ERROR, payload=None):
        super().__init__(message)
        self.code = code
        self.payload = payload


def _load(path: str):
    try:
        with open(path) as f:
            return json.load(f)
    except json.JSONDecodeError as exc:
        raise CliError(f"{path}: invalid JSON at line {exc.lineno} column {exc.colno}: {exc.msg}") from None
    except OSError as exc:
        raise CliError(f"{path}: {exc.strerror}") from None


def _input(path: str) -> tuple[object, dict]:
    obj = _load(path)
    return obj, {"path": path, "sha256": digest(obj)}


def _tree(path: str, side: str) -> tuple[GraphTree, dict]:
    obj, meta = _input(path)
    try:
        g = GraphTree.from_json(obj, side=side)
    except SepkitError as exc:
        raise CliError(f"{path}: {exc}") from None
    return g, meta


def _write(path: str | None, report: dict):
    if path:
        with open(path, "w") as f:
            f.write(report_dumps(report))


def _emit(args, human: str, machine):
    if getattr(args, "json", False):
        sys.stdout.write(report_dumps(machine))
    else:
        print(human)


def _max_states(flag: int | None) -> int:
    if flag is not None:
        return flag
    env = os.environ.get("SEPKIT_MAX_STATES")
    if env is None:
        return dyck.DEFAULT_MAX_STATES
    try:
        return int(env)
    except ValueError:
        raise CliError(f"SEPKIT_MAX_STATES must be an integer, got {env!r}") from None


# ------------------------------------------------------------------ dyck


def dyck_report(T: GraphTree, S: GraphTree, cfg: DyckRunConfig, inputs: dict) -> dict:
    rep = dyck.dyck_separate(T, S, cfg.alphabet, cfg.memo, cfg.verify_depth, cfg.max_states)
    out = {"kind": "dyck-report", "config": asdict(cfg), "inputs": inputs, "outcome": rep.outcome,
           "product_states": rep.product_states}
    if rep.outcome == dyck.CODE_EMITTED:
        out.update(code=spc_to_json(rep.code), borel=borel_to_json(rep.borel), height=rep.height,
                   norm=spc_norm(rep.code), support=sorted(support(rep.code)), verification=rep.verification)
    else:
        out["witness"] = rep.witness.to_json()
    return out


def cmd_dyck(args) -> int:
    T, mt = _tree(args.t, CANTOR)
    S, ms = _tree(args.s, CANTOR)
    if args.action == "separate":
        cfg = DyckRunConfig(args.alphabet, not args.no_memo, args.depth, _max_states(args.max_states))
        report = dyck_report(T, S, cfg, {"T": mt, "S": ms})
        _write(args.out, report)
        if report["outcome"] == dyck.WITNESS_FOUND:
            w = report["witness"]
            _emit(args, f"witness: x={w['x']} y={w['y']}", report)
            return EXIT_WITNESS
        v = report["verification"]
        _emit(args, f"code emitted: norm {report['norm']}, verified at depth {v['depth']}, "
                    f"{v['violations']} violations", report)
        return EXIT_OK if v["violations"] == 0 else EXIT_ERROR
    # verify
    stored = _load(args.report)
    if stored.get("outcome") != dyck.CODE_EMITTED:
        raise CliError(f"{args.report}: report carries no code")
    code = spc_from_json(stored["code"])
    depth = args.depth if args.depth is not None else stored["verification"]["depth"]
    v = dyck.verify_dyck(T, S, code, depth)
    same = v == stored.get("verification")
    _emit(args, f"depth {depth}: {v['violations']} violations"
                + ("" if same else " (differs from the stored summary)"), {"verification": v, "reproduced": same})
    return EXIT_OK if v["violations"] == 0 else EXIT_ERROR


# ---------------------------------------------------------------- preiss


def _scheme(path: str):
    obj, meta = _input(path)
    try:
        return scheme_from_json(obj), meta
    except SepkitError as exc:
        raise CliError(f"{path}: {exc}") from None


def _preiss_verify(A, S, code, cfg: PreissRunConfig, guarantee: int) -> dict:
    pts = preiss.grid(guarantee, A.dimension, Fraction(cfg.grid_step))
    addrs = preiss.sample_addresses(S, cfg.address_len, cfg.address_limit)
    v = preiss.verify_preiss(A, S, code, pts, addrs, guarantee)
    v["cgc"] = preiss.validate_cgc(code, pts)
    return v


def preiss_report(A, S, cfg: PreissRunConfig, inputs: dict) -> dict:
    rep = preiss.preiss_separate(A, S, cfg.cubes, cfg.fuel, cfg.levels)
    out = {"kind": "preiss-report", "config": asdict(cfg), "inputs": inputs, "outcome": rep.outcome,
           "guarantee_cube": rep.guarantee_cube, "explored": {str(k): v for k, v in rep.explored.items()},
           "cases": rep.cases, "fuel_used": rep.fuel_used,
           "contract": f"separates A (approximated to depth {A.depth}) within [-{rep.guarantee_cube}, "
                       f"{rep.guarantee_cube}]^{A.dimension} from B; the cube [-{cfg.cubes}, {cfg.cubes}]^"
                       f"{A.dimension} stands for the whole space"}
    if rep.code is not None:
        out["code"] = preiss.cgc_to_json(rep.code)
        out["verification"] = _preiss_verify(A, S, rep.code, cfg, rep.guarantee_cube)
    else:
        out["exhausted_by"] = rep.exhausted_by
    return out


def _verified(v: dict) -> bool:
    return not v["violations"] and v["cgc"]["ok"]


def cmd_preiss(args) -> int:
    A, ma = _scheme(args.a)
    S, mb = _tree(args.b, BAIRE)
    if args.action == "separate":
        val = validate_good(A)
        if not val.ok:
            raise CliError(f"{args.a}: scheme is not good", payload={"validation": val.to_json()})
        cfg = PreissRunConfig(args.cubes, args.fuel, args.levels)
        report = preiss_report(A, S, cfg, {"A": ma, "B": mb})
        _write(args.out, report)
        if report["outcome"] == preiss.FUEL_EXHAUSTED:
            _emit(args, f"fuel exhausted ({report['exhausted_by']}) after {report['fuel_used']} nodes", report)
            return EXIT_FUEL
        v = report["verification"]
        _emit(args, f"code emitted: {report['fuel_used']} nodes, {v['a_checked']} A-samples, "
                    f"{v['b_checked']} B-samples, {len(v['violations'])} violations", report)
        return EXIT_OK if _verified(v) else EXIT_ERROR
    stored = _load(args.report)
    if stored.get("outcome") != preiss.CODE_EMITTED:
        raise CliError(f"{args.report}: report carries no code")
    cfg = PreissRunConfig(**stored["config"])
    code = preiss.cgc_from_json(stored["code"])
    v = _preiss_verify(A, S, code, cfg, stored["guarantee_cube"])
    same = v == stored.get("verification")
    _emit(args, f"{len(v['violations'])} violations" + ("" if same else " (differs from the stored summary)"),
          {"verification": v, "reproduced": same})
    return EXIT_OK if _verified(v) else EXIT_ERROR


# ----------------------------------------------------------------- tools


def _code(path: str):
    obj = _load(path)
    probe = obj.get("root", obj) if isinstance(obj, dict) else obj
    defs = obj.get("defs", []) if isinstance(obj, dict) else []
    borel = any(isinstance(o, dict) and ("co_cylinder" in o or "co_union" in o) for o in [probe] + defs)
    try:
        return (borel_from_json(obj) if borel else spc_from_json(obj)), borel
    except SepkitError as exc:
        raise CliError(f"{path}: {exc}") from None


def _word(text: str) -> tuple[int, ...]:
    text = text.strip()
    if not text:
        return ()
    try:
        return tuple(int(a) for a in text.split(","))
    except ValueError:
        raise CliError(f"bad sequence {text!r}; expected comma-separated naturals") from None


def cmd_codes(args) -> int:
    c, borel = _code(args.code)
    if args.action == "eval":
        x = UPPoint.parse(args.point)
        val = eval_borel(c, x) if borel else eval_spc(c, x)
        _emit(args, "true" if val else "false", {"value": val})
    elif args.action == "norm":
        n = borel_rank(c) if borel else spc_norm(c)
        _emit(args, str(n), {"norm": n, "kind": "borel-rank" if borel else "sp-norm"})
    else:
        mono = is_monotone(c, args.bound)
        _emit(args, "true" if mono else "false", {"monotone": mono})
    return EXIT_OK


def cmd_geom(args) -> int:
    from .geometry import hull_distance_inf
    P = polytope_from_json(_load(args.p), args.p)
    x = vec_from_json(args.x)
    d = hull_distance_inf(x, P)
    _emit(args, show_rat(d), {"distance": show_rat(d)})
    return EXIT_OK


def cmd_schemes(args) -> int:
    if args.action == "build-good":
        T, meta = _tree(args.t, BAIRE)
        s = build_good_scheme(T, args.dim, args.depth, args.cube, args.alphabet)
        doc = scheme_to_json(s)
        _write(args.out, doc)
        _emit(args, f"{len(s.entries)} entries, alphabet {s.alphabet}", doc)
        return EXIT_OK
    s, _ = _scheme(args.scheme)
    rep = validate_good(s, exhaustive=args.exhaustive)
    _emit(args, "good" if rep.ok else f"{len(rep.violations)} violations: {rep.violations[:3]}", rep.to_json())
    return EXIT_OK if rep.ok else EXIT_ERROR


def cmd_orders(args) -> int:
    if args.action == "kb":
        r = kb_compare(_word(args.u), _word(args.v))
        _emit(args, ORDER_WORDS[r], {"order": ORDER_WORDS[r]})
        return EXIT_OK
    try:
        nodes = [tuple(n) for n in json.loads(args.tree)]
    except (json.JSONDecodeError, TypeError):
        raise CliError("--tree must be a JSON list of integer lists") from None
    chain = lo_code_of_tree(nodes).chain()
    _emit(args, " < ".join(map(str, chain)), {"chain": chain})
    return EXIT_OK


# ---------------------------------------------------------------- parser


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="machine-readable output")
    p = argparse.ArgumentParser(prog="sepkit", description="Exact separators for analytic sets.")
    sub = p.add_subparsers(dest="command", required=True)

    d = sub.add_parser("dyck", help="semi-positive separation in Cantor space")
    dsub = d.add_subparsers(dest="action", required=True)
    ds = dsub.add_parser("separate", parents=[common])
    ds.add_argument("--t", required=True, help="tree presenting the monotone set A")
    ds.add_argument("--s", required=True, help="tree presenting B")
    ds.add_argument("--alphabet", type=int)
    ds.add_argument("--verify-depth", "--depth", dest="depth", type=int, help="verification depth")
    ds.add_argument("--max-states", type=int)
    ds.add_argument("--no-memo", action="store_true")
    ds.add_argument("--out")
    dv = dsub.add_parser("verify", parents=[common])
    dv.add_argument("--report", required=True)
    dv.add_argument("--t", required=True)
    dv.add_argument("--s", required=True)
    dv.add_argument("--depth", type=int)
    d.set_defaults(func=cmd_dyck)

    q = sub.add_parser("preiss", help="convexly generated separation in R^N")
    qsub = q.add_subparsers(dest="action", required=True)
    qs = qsub.add_parser("separate", parents=[common])
    qs.add_argument("--a", required=True, help="good scheme for A")
    qs.add_argument("--b", required=True, help="Baire-side tree for B")
    qs.add_argument("--cubes", type=int, default=2)
    qs.add_argument("--fuel", type=int, default=10_000)
    qs.add_argument("--levels", type=int, default=6)
    qs.add_argument("--out")
    qv = qsub.add_parser("verify", parents=[common])
    qv.add_argument("--report", required=True)
    qv.add_argument("--a", required=True)
    qv.add_argument("--b", required=True)
    q.set_defaults(func=cmd_preiss)

    c = sub.add_parser("codes", help="semi-positive and Borel codes")
    csub = c.add_subparsers(dest="action", required=True)
    ce = csub.add_parser("eval", parents=[common])
    ce.add_argument("--code", required=True)
    ce.add_argument("--point", required=True, help="ultimately periodic point, e.g. 1(0)")
    cn = csub.add_parser("norm", parents=[common])
    cn.add_argument("--code", required=True)
    cm = csub.add_parser("monotone", parents=[common])
    cm.add_argument("--code", required=True)
    cm.add_argument("--bound", type=int, default=16)
    c.set_defaults(func=cmd_codes)

    g = sub.add_parser("geom", help="exact polytope geometry")
    gsub = g.add_subparsers(dest="action", required=True)
    gh = gsub.add_parser("hull-dist", parents=[common])
    gh.add_argument("--p", required=True, help="polytope JSON")
    gh.add_argument("--x", required=True, help="point, e.g. 2,0")
    g.set_defaults(func=cmd_geom)

    s = sub.add_parser("schemes", help="Souslin schemes")
    ssub = s.add_subparsers(dest="action", required=True)
    sb = ssub.add_parser("build-good", parents=[common])
    sb.add_argument("--t", required=True)
    sb.add_argument("--dim", type=int, required=True)
    sb.add_argument("--depth", type=int, required=True)
    sb.add_argument("--cube", type=int, required=True)
    sb.add_argument("--alphabet", type=int)
    sb.add_argument("--out")
    sv = ssub.add_parser("validate", parents=[common])
    sv.add_argument("--scheme", required=True)
    sv.add_argument("--exhaustive", action="store_true")
    s.set_defaults(func=cmd_schemes)

    o = sub.add_parser("orders", help="sequence codes and orders")
    osub = o.add_subparsers(dest="action", required=True)
    ok = osub.add_parser("kb", parents=[common])
    ok.add_argument("--u", required=True)
    ok.add_argument("--v", required=True)
    ol = osub.add_parser("lo-of-tree", parents=[common])
    ol.add_argument("--tree", required=True, help='JSON list of nodes, e.g. "[[],[0],[1]]"')
    o.set_defaults(func=cmd_orders)
    return p


def main(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
    except SystemExit as exc:
        # argparse exits 2 on usage errors, which would read as a witness
        return EXIT_OK if exc.code in (0, None) else EXIT_ERROR
    try:
        return args.func(args)
    except CliError as exc:
        if exc.payload is not None:
            sys.stdout.write(report_dumps({"error": str(exc), **exc.payload}))
        print(f"error: {exc}", file=sys.stderr)
        return exc.code
    except (SepkitError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
