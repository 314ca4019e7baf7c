"""Command-line entry point with JSON output on stdout.

Exit codes: 0 for success / passing checks, 1 for a failing check (the
report carries a witness), 2 for input errors.  Output is a single JSON
document; `--pretty` switches to indented rendering.  All randomized
subcommands take an explicit seed, so identical invocations produce
byte-identical output.
"""

from __future__ import annotations

import argparse
import json
import sys

from . import canonical, kripke, ladder, selftest, topology, vietoris
from .errors import ParseError, ValidationError, VktError
from .formula import atoms_of, modal_depth, parse, to_nnf, to_text
from .report import CheckResult

PASS, FAIL, INPUT_ERROR = 0, 1, 2


def _emit(doc, pretty: bool) -> None:
    if pretty:
        print(json.dumps(doc, sort_keys=True, indent=2))
    else:
        print(json.dumps(doc, sort_keys=True, separators=(",", ":")))


def _load_json(path: str):
    try:
        with open(path, "r", encoding="utf-8") as fh:
            return json.load(fh)
    except OSError as e:
        raise ValidationError(f"{path}: {e.strerror or e}") from None
    except json.JSONDecodeError as e:
        raise ValidationError(f"{path}: line {e.lineno} column {e.colno}: {e.msg}") from None


def _load_model(path: str) -> kripke.KripkeModel:
    try:
        return kripke.model_from_json(_load_json(path))
    except ValidationError as e:
        raise ValidationError(f"{path}: {e}") from None


def _load_topology(path: str) -> topology.FiniteTopology:
    try:
        return topology.topology_from_json(_load_json(path))
    except ValidationError as e:
        raise ValidationError(f"{path}: {e}") from None


def _load_relation(path: str, a, b) -> kripke.Relation:
    try:
        return kripke.relation_from_json(a, b, _load_json(path))
    except ValidationError as e:
        raise ValidationError(f"{path}: {e}") from None


def _load_map(path: str) -> dict[str, str]:
    data = _load_json(path)
    if not isinstance(data, dict) or "map" not in data or not isinstance(data["map"], dict):
        raise ValidationError(f"{path}: expected an object with a 'map' key")
    for k, v in data["map"].items():
        if not isinstance(v, str):
            raise ValidationError(f"{path}: map[{k!r}] is not a state name")
    return dict(data["map"])


def _states_arg(text: str) -> list[str]:
    return [s for s in (part.strip() for part in text.split(",")) if s]


def _report_exit(res: CheckResult) -> int:
    if not res.precondition_ok:
        return INPUT_ERROR
    return PASS if res.passed else FAIL


# --- subcommand handlers -----------------------------------------------------


def _cmd_parse(args) -> tuple[dict, int]:
    f = parse(args.formula)
    return {
        "result": to_text(f),
        "depth": modal_depth(f),
        "atoms": sorted(atoms_of(f)),
    }, PASS


def _cmd_nnf(args) -> tuple[dict, int]:
    f = parse(args.formula)
    return {"result": to_text(to_nnf(f))}, PASS


def _cmd_eval(args) -> tuple[dict, int]:
    m = _load_model(args.model)
    modes = [args.formula is not None, args.diamond_pre is not None, args.box_pre is not None]
    if sum(modes) != 1:
        raise ValidationError("give exactly one of --formula, --diamond-pre, --box-pre")
    if args.formula is not None:
        f = parse(args.formula)
        return {"states": sorted(kripke.eval_states(m, f))}, PASS
    if args.diamond_pre is not None:
        u = _states_arg(args.diamond_pre)
        return {"states": sorted(kripke.diamond_pre(m, u))}, PASS
    u = _states_arg(args.box_pre)
    return {"states": sorted(kripke.box_pre(m, u))}, PASS


def _cmd_bisim(args) -> tuple[dict, int]:
    a = _load_model(args.model_a)
    b = _load_model(args.model_b)
    rel = kripke.largest_bisimulation(a, b)
    return {"pairs": [[x, y] for x, y in rel.sorted_pairs()]}, PASS


def _cmd_is_bisim(args) -> tuple[dict, int]:
    a = _load_model(args.model_a)
    b = _load_model(args.model_b)
    rel = _load_relation(args.relation, a, b)
    left, right = a, b
    if args.converse:
        rel = kripke.converse(rel)
        left, right = b, a
    if args.compose is not None:
        if args.model_c is None:
            raise ValidationError("--compose needs --model-c for the second relation's target")
        c = _load_model(args.model_c)
        rel2 = _load_relation(args.compose, right, c)
        rel = kripke.compose(rel, rel2)
        right = c
    res = kripke.is_bisimulation(left, right, rel)
    doc = {
        "check": "is-bisimulation",
        "pass": res.ok,
        "witness": None if res.ok else {"pair": list(res.pair), "clause": res.clause},
        "pairs": [[x, y] for x, y in rel.sorted_pairs()],
    }
    return doc, PASS if res.ok else FAIL


def _cmd_hom_check(args) -> tuple[dict, int]:
    a = _load_model(args.model_a)
    b = _load_model(args.model_b)
    mapping = _load_map(args.map)
    ok = kripke.is_homomorphism(a, b, mapping)
    return {"check": "is-homomorphism", "pass": ok, "witness": None}, PASS if ok else FAIL


def _cmd_quotient(args) -> tuple[dict, int]:
    m = _load_model(args.model)
    qm, pi = kripke.quotient(m)
    return {
        "model": kripke.model_to_json(qm),
        "projection": {x: pi[x] for x in m.states},
        "saturated": kripke.check_saturation_finite(m),
    }, PASS


def _cmd_topologize(args) -> tuple[dict, int]:
    modes = [args.model is not None, args.carrier is not None, args.topology is not None]
    if sum(modes) != 1:
        raise ValidationError("give exactly one of --model, --carrier, --topology")
    if args.model is not None:
        m = _load_model(args.model)
        tm = topology.formula_topology(m)
        return {"topology": topology.topology_to_json(tm.topology)}, PASS
    if args.carrier is not None:
        if args.subbase is None:
            raise ValidationError("--carrier needs --subbase")
        carrier = _states_arg(args.carrier)
        sub = _load_json(args.subbase)
        if not isinstance(sub, list) or not all(
            isinstance(s, list) and all(isinstance(x, str) for x in s) for s in sub
        ):
            raise ValidationError(f"{args.subbase}: subbase must be a list of element lists")
        t = topology.generate(carrier, sub)
        return {"topology": topology.topology_to_json(t)}, PASS
    t = _load_topology(args.topology)
    if args.closure_of is not None:
        a = _states_arg(args.closure_of)
        return {"closure": sorted(topology.closure(t, a))}, PASS
    if args.clopen is not None:
        a = _states_arg(args.clopen)
        return {"clopen": topology.is_clopen(t, a)}, PASS
    raise ValidationError("--topology needs --closure-of or --clopen")


def _cmd_check_topmodel(args) -> tuple[dict, int]:
    tm = topology.TopologicalModel(
        model=_load_model(args.model), topology=_load_topology(args.topology)
    )
    res = topology.check_topological_model(tm)
    return res.to_json(), _report_exit(res)


def _cmd_vietoris_check(args) -> tuple[dict, int]:
    tm = topology.TopologicalModel(
        model=_load_model(args.model), topology=_load_topology(args.topology)
    )
    res = vietoris.structure_map_continuous(tm)
    doc = res.to_json()
    if args.map is not None:
        if args.to_model is None or args.to_topology is None:
            raise ValidationError("--map needs --to-model and --to-topology")
        dst = topology.TopologicalModel(
            model=_load_model(args.to_model), topology=_load_topology(args.to_topology)
        )
        mapping = _load_map(args.map)
        src_space = vietoris.vietoris_space(tm.topology)
        dst_space = vietoris.vietoris_space(dst.topology)
        point_map = vietoris.vietoris_map(mapping, src_space, dst_space)
        doc["map_on_points"] = {
            ",".join(sorted(src_space.point_names(k))): sorted(dst_space.point_names(v))
            for k, v in point_map.items()
        }
    if args.space:
        space = vietoris.vietoris_space(tm.topology)
        doc["space"] = {
            "points": len(space.points),
            "subbase_size": 2 * len(tm.topology.opens),
        }
    return doc, _report_exit(res)


def _cmd_closure_sub(args) -> tuple[dict, int]:
    tm = topology.TopologicalModel(
        model=_load_model(args.model), topology=_load_topology(args.topology)
    )
    res = vietoris.closed_subcoalgebra_check(tm, _states_arg(args.subset))
    return res.to_json(), _report_exit(res)


def _cmd_closure_bisim(args) -> tuple[dict, int]:
    tma = topology.TopologicalModel(
        model=_load_model(args.model_a), topology=_load_topology(args.topology_a)
    )
    tmb = topology.TopologicalModel(
        model=_load_model(args.model_b), topology=_load_topology(args.topology_b)
    )
    rel = _load_relation(args.relation, tma.model, tmb.model)
    res = vietoris.closed_bisimulation_check(tma, tmb, rel)
    return res.to_json(), _report_exit(res)


def _cmd_final_seq(args) -> tuple[dict, int]:
    atoms = _states_arg(args.atoms) if args.atoms else []
    sizes = canonical.level_sizes(len(atoms), args.depth)
    doc: dict = {"atoms": sorted(atoms), "sizes": sizes[: args.depth + 1]}
    if max(doc["sizes"]) > canonical.LEVEL_SIZE_LIMIT:
        raise ValidationError(
            f"level sizes exceed {canonical.LEVEL_SIZE_LIMIT}; lower --depth or --atoms"
        )
    if args.types:
        level = canonical.final_level(atoms, args.depth)
        listing = []
        for t in level.types:
            entry = {"type": canonical.type_to_json(t)}
            if args.chi:
                entry["formula"] = to_text(canonical.characteristic_formula(t))
            listing.append(entry)
        doc["types"] = listing
    return doc, PASS


def _cmd_behavior(args) -> tuple[dict, int]:
    m = _load_model(args.model)
    beh = canonical.behavior_map(m, args.depth)
    blocks: dict[canonical.BehaviorType, list[str]] = {}
    for x in m.states:
        blocks.setdefault(beh[x], []).append(x)
    kernel = sorted(sorted(b) for b in blocks.values())
    return {
        "assignment": {x: canonical.type_to_json(beh[x]) for x in m.states},
        "kernel": kernel,
    }, PASS


def _cmd_truth_lemma(args) -> tuple[dict, int]:
    m = _load_model(args.model)
    if args.terminal:
        res = canonical.terminal_uniqueness_check(m, args.depth)
        return res.to_json(), _report_exit(res)
    if args.formula is None:
        raise ValidationError("give --formula or --terminal")
    f = parse(args.formula)
    if modal_depth(f) > args.depth:
        raise ValidationError(
            f"formula depth {modal_depth(f)} exceeds --depth {args.depth}"
        )
    beh = canonical.behavior_map(m, args.depth)
    truth = kripke.eval_states(m, f)
    bad = None
    for x in m.states:
        if (x in truth) != canonical.type_satisfies(beh[x], f):
            bad = {"state": x}
            break
    res = CheckResult("bounded-truth-lemma", bad is None, bad,
                      info={"formula": to_text(f), "depth": args.depth})
    return res.to_json(), _report_exit(res)


def _cmd_ladder(args) -> tuple[dict, int]:
    if args.mode == "eval":
        if len(args.formula_list) != 1:
            raise ValidationError("ladder eval needs exactly one --formula")
        v = ladder.ladder_eval(args.which, parse(args.formula_list[0]))
        return {
            "prefix": list(v.prefix),
            "tail": v.tail,
            "root": v.at_root,
            "inf": v.at_inf,
        }, PASS
    if args.mode == "nonsat-chain":
        res = ladder.nonsaturation_witness_chain(args.max_index)
        return res.to_json(), _report_exit(res)
    # mode == "saturation"
    if not args.formula_list and not args.with_param:
        raise ValidationError("ladder saturation needs --formula members or --with-param")
    family = [parse(text) for text in args.formula_list]
    res = ladder.saturation_check_extended(family, plus_param=args.with_param)
    return res.to_json(), _report_exit(res)


def _cmd_selftest(args) -> tuple[dict, int]:
    names = [args.suite] if args.suite else list(selftest.SUITES)
    results = []
    ok = True
    for name in names:
        if name not in selftest.SUITES:
            raise ValidationError(f"unknown suite {name!r}; know {sorted(selftest.SUITES)}")
        res = selftest.run_suite(name, args.seed, args.count)
        results.append({"suite": name, **res.to_json()})
        ok = ok and res.passed
    return {"check": "selftest", "pass": ok, "results": results}, PASS if ok else FAIL


# --- argument wiring ----------------------------------------------------------


def _build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="vkt",
        description="Modal logic on finite Kripke structures, finite topologies, "
                    "hyperspaces and bounded canonical models.",
    )
    ap.add_argument("--pretty", action="store_true", help="indent the JSON output")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("parse", help="parse a formula and report its normal rendering")
    p.add_argument("--formula", required=True)
    p.set_defaults(fn=_cmd_parse)

    p = sub.add_parser("nnf", help="negation normal form of a formula")
    p.add_argument("--formula", required=True)
    p.set_defaults(fn=_cmd_nnf)

    p = sub.add_parser("eval", help="truth set of a formula, or a modal preimage")
    p.add_argument("--model", required=True)
    p.add_argument("--formula")
    p.add_argument("--diamond-pre", metavar="STATES")
    p.add_argument("--box-pre", metavar="STATES")
    p.set_defaults(fn=_cmd_eval)

    p = sub.add_parser("bisim", help="largest bisimulation between two models")
    p.add_argument("--model-a", required=True)
    p.add_argument("--model-b", required=True)
    p.set_defaults(fn=_cmd_bisim)

    p = sub.add_parser("is-bisim", help="check a relation; optionally converse/compose first")
    p.add_argument("--model-a", required=True)
    p.add_argument("--model-b", required=True)
    p.add_argument("--relation", required=True)
    p.add_argument("--converse", action="store_true")
    p.add_argument("--compose", metavar="RELATION_FILE")
    p.add_argument("--model-c")
    p.set_defaults(fn=_cmd_is_bisim)

    p = sub.add_parser("hom-check", help="is a state map a homomorphism")
    p.add_argument("--model-a", required=True)
    p.add_argument("--model-b", required=True)
    p.add_argument("--map", required=True)
    p.set_defaults(fn=_cmd_hom_check)

    p = sub.add_parser("quotient", help="collapse bisimilar states")
    p.add_argument("--model", required=True)
    p.set_defaults(fn=_cmd_quotient)

    p = sub.add_parser("topologize", help="definable-set topology, subbase generation, "
                                          "closure and clopen queries")
    p.add_argument("--model")
    p.add_argument("--carrier", metavar="ELEMS")
    p.add_argument("--subbase", metavar="JSON_FILE")
    p.add_argument("--topology")
    p.add_argument("--closure-of", metavar="ELEMS")
    p.add_argument("--clopen", metavar="ELEMS")
    p.set_defaults(fn=_cmd_topologize)

    p = sub.add_parser("check-topmodel", help="the four structure conditions")
    p.add_argument("--model", required=True)
    p.add_argument("--topology", required=True)
    p.set_defaults(fn=_cmd_check_topmodel)

    p = sub.add_parser("vietoris-check", help="continuity of the structure map on the subbase")
    p.add_argument("--model", required=True)
    p.add_argument("--topology", required=True)
    p.add_argument("--map", metavar="MAP_FILE")
    p.add_argument("--to-model")
    p.add_argument("--to-topology")
    p.add_argument("--space", action="store_true", help="include hyperspace summary")
    p.set_defaults(fn=_cmd_vietoris_check)

    p = sub.add_parser("closure-sub", help="closure of a successor-closed subset")
    p.add_argument("--model", required=True)
    p.add_argument("--topology", required=True)
    p.add_argument("--subset", required=True, metavar="STATES")
    p.set_defaults(fn=_cmd_closure_sub)

    p = sub.add_parser("closure-bisim", help="closure of a bisimulation in the product")
    p.add_argument("--model-a", required=True)
    p.add_argument("--topology-a", required=True)
    p.add_argument("--model-b", required=True)
    p.add_argument("--topology-b", required=True)
    p.add_argument("--relation", required=True)
    p.set_defaults(fn=_cmd_closure_bisim)

    p = sub.add_parser("final-seq", help="level cardinalities and type listings")
    p.add_argument("--atoms", default="", metavar="NAMES")
    p.add_argument("--depth", type=int, required=True)
    p.add_argument("--types", action="store_true")
    p.add_argument("--chi", action="store_true", help="include characteristic formulas")
    p.set_defaults(fn=_cmd_final_seq)

    p = sub.add_parser("behavior", help="state-to-type assignment and its kernel")
    p.add_argument("--model", required=True)
    p.add_argument("--depth", type=int, required=True)
    p.set_defaults(fn=_cmd_behavior)

    p = sub.add_parser("truth-lemma", help="model truth vs type satisfaction; "
                                           "--terminal for the uniqueness checks")
    p.add_argument("--model", required=True)
    p.add_argument("--depth", type=int, required=True)
    p.add_argument("--formula")
    p.add_argument("--terminal", action="store_true")
    p.set_defaults(fn=_cmd_truth_lemma)

    p = sub.add_parser("ladder", help="the two infinite example structures")
    p.add_argument("mode", choices=["eval", "nonsat-chain", "saturation"])
    p.add_argument("--which", choices=[ladder.CHAIN, ladder.EXTENDED], default=ladder.CHAIN)
    p.add_argument("--formula", action="append", dest="formula_list", default=[])
    p.add_argument("--max-index", type=int, default=8)
    p.add_argument("--with-param", action="store_true")
    p.set_defaults(fn=_cmd_ladder)

    p = sub.add_parser("selftest", help="run the property suites")
    p.add_argument("--suite")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--count", type=int, default=None)
    p.set_defaults(fn=_cmd_selftest)

    return ap


def main(argv: list[str] | None = None) -> int:
    ap = _build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as e:
        return INPUT_ERROR if e.code not in (0, None) else 0
    pretty = args.pretty
    try:
        doc, code = args.fn(args)
    except ParseError as e:
        _emit({"error": {"message": str(e), "column": e.column}}, pretty)
        return INPUT_ERROR
    except VktError as e:
        _emit({"error": {"message": str(e)}}, pretty)
        return INPUT_ERROR
    except Exception as e:  # subcommands are total: report, never crash
        _emit({"error": {"message": f"internal error: {e!r}"}}, pretty)
        return INPUT_ERROR
    _emit(doc, pretty)
    return code


if __name__ == "__main__":
    sys.exit(main())
