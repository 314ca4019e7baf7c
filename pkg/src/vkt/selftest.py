"""Randomized and exhaustive property suites, runnable from the CLI.

Each suite is a function (seed, count) -> CheckResult and is deterministic
for a fixed seed.  The acceptance tests run the same suites at their full
scales; `vkt selftest` runs them at quicker defaults.
"""

from __future__ import annotations

import random

from . import canonical, generators, kripke, ladder, topology, vietoris
from .formula import Box, Diamond, modal_depth, to_nnf, to_text
from .report import CheckResult

__all__ = ["SUITES", "run_suite", "run_all"]


def suite_nnf(seed: int, count: int = 10_000) -> CheckResult:
    """Truth sets are unchanged by negation normal form; the result has
    negations only on atoms and the same modal depth."""
    rng = random.Random(seed)
    for k in range(count):
        m = generators.random_model(rng, max_states=8)
        f = generators.random_formula(rng, m.atoms, max_depth=6)
        g = to_nnf(f)
        if kripke.eval_mask(m, f) != kripke.eval_mask(m, g):
            return CheckResult("nnf-semantics", False,
                               {"formula": to_text(f), "case": k})
        if not _nnf_shape_ok(g) or modal_depth(g) != modal_depth(f):
            return CheckResult("nnf-semantics", False,
                               {"formula": to_text(f), "case": k, "reason": "shape"})
    return CheckResult("nnf-semantics", True, info={"cases": count})


def _nnf_shape_ok(f) -> bool:
    from .formula import is_nnf

    return is_nnf(f)


def suite_bisim_oracle(seed: int, count: int = 1_000) -> CheckResult:
    """Fixpoint bisimilarity equals the union of all bisimulations,
    exhaustively on every model with up to 3 states over at most one atom
    and on random 4-state models."""
    checked = 0
    for atoms in ((), ("p",)):
        for n in range(0, 4):
            for m in generators.all_models(n, atoms):
                fast = kripke.largest_bisimulation(m, m).pairs
                slow = kripke.brute_force_largest_bisimulation(m, m).pairs
                if fast != slow:
                    return CheckResult("bisimulation-oracle", False,
                                       {"model": kripke.model_to_json(m)})
                checked += 1
    rng = random.Random(seed)
    for k in range(count):
        m = generators.random_model(rng, max_states=4, min_states=4)
        fast = kripke.largest_bisimulation(m, m).pairs
        slow = kripke.brute_force_largest_bisimulation(m, m).pairs
        if fast != slow:
            return CheckResult("bisimulation-oracle", False,
                               {"model": kripke.model_to_json(m), "case": k})
        checked += 1
    return CheckResult("bisimulation-oracle", True, info={"cases": checked})


def suite_hennessy_milner(seed: int, count: int = 1_000) -> CheckResult:
    """The largest bisimulation between two finite models coincides with
    the stabilized behavior kernel."""
    rng = random.Random(seed)
    for k in range(count):
        a = generators.random_model(rng, max_states=6, atoms=("p",))
        b = generators.random_model(rng, max_states=6, atoms=("p",))
        bisim = kripke.largest_bisimulation(a, b).pairs
        behav, _depth = canonical.stable_behavior_relation(a, b)
        if bisim != behav.pairs:
            return CheckResult("hennessy-milner", False, {
                "model_a": kripke.model_to_json(a),
                "model_b": kripke.model_to_json(b),
                "case": k,
            })
    return CheckResult("hennessy-milner", True, info={"cases": count})


def suite_continuity(seed: int, count: int = 1_000) -> CheckResult:
    """The four structure conditions hold iff the structure map is
    continuous on the defining subbase, clause for clause, on a mix of
    passing and deliberately broken instances."""
    rng = random.Random(seed)
    passing = failing = 0
    for k in range(count):
        tm = generators.random_any_topmodel(rng)
        r1 = topology.check_topological_model(tm)
        r2 = vietoris.structure_map_continuous(tm)
        flags1 = [c.passed for c in r1.clauses]
        flags2 = [c.passed for c in r2.clauses]
        if r1.passed != r2.passed or flags1 != flags2:
            return CheckResult("def5-vs-continuity", False, {
                "model": kripke.model_to_json(tm.model),
                "topology": topology.topology_to_json(tm.topology),
                "def5": flags1, "continuity": flags2, "case": k,
            })
        if r1.passed:
            passing += 1
        else:
            failing += 1
    return CheckResult("def5-vs-continuity", True,
                       info={"cases": count, "passing": passing, "failing": failing})


def suite_characterization(seed: int, count: int = 1_000) -> CheckResult:
    """The definable-set topology of any finite model satisfies the four
    structure conditions."""
    rng = random.Random(seed)
    for k in range(count):
        m = generators.random_model(rng, max_states=8)
        tm = topology.formula_topology(m)
        res = topology.check_topological_model(tm)
        if not res.passed:
            return CheckResult("formula-topology-passes", False, {
                "model": kripke.model_to_json(m), "witness": res.witness, "case": k,
            })
    return CheckResult("formula-topology-passes", True, info={"cases": count})


def suite_closure_substructure(seed: int, count: int = 1_000) -> CheckResult:
    """Topological closures of successor-closed subsets stay
    successor-closed, on condition-passing topological models."""
    rng = random.Random(seed)
    for k in range(count):
        tm = generators.random_passing_topmodel(rng)
        u = generators.random_substructure(rng, tm.model)
        res = vietoris.closed_subcoalgebra_check(tm, u)
        if not res.precondition_ok or not res.passed:
            return CheckResult("closure-substructure", False, {
                "model": kripke.model_to_json(tm.model),
                "subset": sorted(u), "witness": res.witness, "case": k,
            })
    return CheckResult("closure-substructure", True, info={"cases": count})


def suite_closure_bisimulation(seed: int, count: int = 1_000) -> CheckResult:
    """Product-topology closures of bisimulations remain bisimulations,
    on condition-passing topological models."""
    rng = random.Random(seed)
    for k in range(count):
        tma = generators.random_passing_topmodel(rng)
        pick = rng.random()
        if pick < 0.4:
            tmb = tma
            s = kripke.largest_bisimulation(tma.model, tma.model)
        elif pick < 0.8:
            tmb = generators.random_passing_topmodel(rng)
            s = kripke.largest_bisimulation(tma.model, tmb.model)
        else:
            tmb = generators.random_passing_topmodel(rng)
            s = kripke.Relation(tma.model, tmb.model, frozenset())
        res = vietoris.closed_bisimulation_check(tma, tmb, s)
        if not res.precondition_ok or not res.passed:
            return CheckResult("closure-bisimulation", False, {
                "model_a": kripke.model_to_json(tma.model),
                "model_b": kripke.model_to_json(tmb.model),
                "witness": res.witness, "case": k,
            })
    return CheckResult("closure-bisimulation", True, info={"cases": count})


def suite_truth_lemma(seed: int, count: int = 10_000) -> CheckResult:
    """Satisfaction in the model agrees with structural satisfaction on
    the state's behavior type, for formulas within the type depth."""
    rng = random.Random(seed)
    depth = 3
    triples = 0
    while triples < count:
        m = generators.random_model(rng, max_states=6, atoms=("p", "q"))
        beh = canonical.behavior_map(m, depth)
        for _ in range(4):
            f = generators.random_formula(rng, m.atoms, max_depth=depth, size_budget=25)
            truth = kripke.eval_mask(m, f)
            for i, x in enumerate(m.states):
                model_truth = bool(truth >> i & 1)
                type_truth = canonical.type_satisfies(beh[x], f)
                triples += 1
                if model_truth != type_truth:
                    return CheckResult("bounded-truth-lemma", False, {
                        "model": kripke.model_to_json(m),
                        "state": x, "formula": to_text(f),
                    })
    return CheckResult("bounded-truth-lemma", True, info={"triples": triples})


def suite_final_levels(seed: int, count: int = 0) -> CheckResult:
    """Level cardinalities follow the doubling recurrence."""
    del seed, count
    z0 = canonical.final_level(("p",), 0)
    z1 = canonical.final_level(("p",), 1)
    got = (len(z0.types), len(z1.types))
    if got != (2, 8):
        return CheckResult("final-level-sizes", False, {"one_atom": list(got)})
    z1e = canonical.final_level((), 1)
    z2e = canonical.final_level((), 2)
    got_e = (len(z1e.types), len(z2e.types))
    if got_e != (2, 4):
        return CheckResult("final-level-sizes", False, {"zero_atoms": list(got_e)})
    sizes = canonical.level_sizes(1, 2)
    if sizes != [2, 8, 512]:
        return CheckResult("final-level-sizes", False, {"recurrence": sizes})
    return CheckResult("final-level-sizes", True,
                       info={"one_atom": [2, 8], "zero_atoms": [2, 4]})


def suite_ladder_chain(seed: int, count: int = 0) -> CheckResult:
    """Rung i of the chain satisfies exactly the box powers above i, and
    no finite subfamily certifies the root's box-of-family."""
    del seed, count
    for i in range(11):
        for j in range(1, 12):
            v = ladder.ladder_eval(ladder.CHAIN, ladder.box_power(j))
            want = j >= i + 1
            if v.at(i) != want:
                return CheckResult("chain-box-powers", False,
                                   {"rung": i, "power": j, "got": v.at(i)})
    res = ladder.nonsaturation_witness_chain(8)
    if not res.passed:
        return CheckResult("chain-box-powers", False, {"nonsaturation": res.witness})
    return CheckResult("chain-box-powers", True,
                       info={"rungs": 11, "subsets": res.info["subsets_checked"]})


def suite_ladder_extended(seed: int, count: int = 10_000) -> CheckResult:
    """At the loop state, a formula, its box and its diamond coincide; and
    whenever a family covers, the reported finite subfamily covers too."""
    rng = random.Random(seed)
    for k in range(count):
        f = generators.random_closed_formula(rng, max_depth=8)
        v = ladder.ladder_eval(ladder.EXTENDED, f)
        vb = ladder.ladder_eval(ladder.EXTENDED, Box(f))
        vd = ladder.ladder_eval(ladder.EXTENDED, Diamond(f))
        if not (v.at_inf == vb.at_inf == vd.at_inf):
            return CheckResult("extended-loop-collapse", False,
                               {"formula": to_text(f), "case": k})
    rng2 = random.Random(seed + 1)
    families = 0
    while families < 200:
        fam = [generators.random_closed_formula(rng2, max_depth=4, size_budget=12)
               for _ in range(rng2.randint(1, 4))]
        res = ladder.saturation_check_extended(fam, plus_param=rng2.random() < 0.5)
        if res.passed and not res.info["subfamily_verified"]:
            return CheckResult("extended-loop-collapse", False,
                               {"family": res.info["family"]})
        families += 1
    return CheckResult("extended-loop-collapse", True,
                       info={"formulas": count, "families": families})


def suite_quotient(seed: int, count: int = 1_000) -> CheckResult:
    """Quotient projections are homomorphisms and quotients are simple."""
    rng = random.Random(seed)
    for k in range(count):
        m = generators.random_model(rng, max_states=6)
        qm, pi = kripke.quotient(m)
        if not kripke.is_homomorphism(m, qm, pi):
            return CheckResult("quotient", False,
                               {"model": kripke.model_to_json(m), "reason": "projection"})
        auto = kripke.largest_bisimulation(qm, qm).pairs
        if auto != frozenset((x, x) for x in qm.states):
            return CheckResult("quotient", False,
                               {"model": kripke.model_to_json(m), "reason": "not simple"})
    return CheckResult("quotient", True, info={"cases": count})


def suite_functor(seed: int, count: int = 200) -> CheckResult:
    """Image maps on hyperspace points: identity and composition laws and
    the subbase preimage identities."""
    rng = random.Random(seed)
    for k in range(count):
        m = generators.random_model(rng, max_states=4, atoms=("p",))
        t1 = topology.formula_topology(m).topology
        qm, pi = kripke.quotient(m)
        t2 = topology.formula_topology(qm).topology
        v1 = vietoris.vietoris_space(t1)
        v2 = vietoris.vietoris_space(t2)
        ident = {x: x for x in m.states}
        vid = vietoris.vietoris_map(ident, v1, v1)
        if any(vid[kk] != kk for kk in v1.points):
            return CheckResult("hyperspace-functor", False, {"law": "identity", "case": k})
        vpi = vietoris.vietoris_map(pi, v1, v2)
        # collapse everything: constant map into the one-point space
        one = topology.generate(["z"], [["z"]])
        vone = vietoris.vietoris_space(one)
        const = {x: "z" for x in qm.states}
        vconst = vietoris.vietoris_map(const, v2, vone)
        comp = {x: "z" for x in m.states}
        vcomp = vietoris.vietoris_map(comp, v1, vone)
        if any(vcomp[kk] != vconst[vpi[kk]] for kk in v1.points):
            return CheckResult("hyperspace-functor", False, {"law": "composition", "case": k})
        # subbase preimages: (Vf)^-1(<O>) = <f^-1(O)> and same for boxes
        for o in sorted(t2.opens):
            pre_d = frozenset(kk for kk in v1.points if vpi[kk] in v2.diamond[o])
            pre_o = t1.mask_of([x for x in m.states if t2.mask_of([pi[x]]) & o])
            if pre_d != v1.diamond[pre_o]:
                return CheckResult("hyperspace-functor", False,
                                   {"law": "diamond-preimage", "case": k})
            pre_b = frozenset(kk for kk in v1.points if vpi[kk] in v2.box[o])
            if pre_b != v1.box[pre_o]:
                return CheckResult("hyperspace-functor", False,
                                   {"law": "box-preimage", "case": k})
    return CheckResult("hyperspace-functor", True, info={"cases": count})


def suite_separation(seed: int, count: int = 500) -> CheckResult:
    """Distinct atom-set points are separated by some atom's up-set."""
    rng = random.Random(seed)
    atoms = ["p", "q", "r", "t"]
    for k in range(count):
        u = frozenset(p for p in atoms if rng.random() < 0.5)
        w = frozenset(p for p in atoms if rng.random() < 0.5)
        sep = vietoris.separating_atom(u, w)
        if u == w:
            if sep is not None:
                return CheckResult("point-separation", False, {"case": k})
        else:
            if sep is None or (vietoris.in_up_set(sep, u) == vietoris.in_up_set(sep, w)):
                return CheckResult("point-separation", False, {"case": k})
    return CheckResult("point-separation", True, info={"cases": count})


def suite_duality(seed: int, count: int = 500) -> CheckResult:
    """Diamond/box preimage duality, plus converse and composition of
    bisimulations being bisimulations."""
    rng = random.Random(seed)
    for k in range(count):
        m = generators.random_model(rng, max_states=6)
        u = frozenset(x for x in m.states if rng.random() < 0.5)
        lhs = kripke.diamond_pre(m, frozenset(m.states) - u)
        rhs = frozenset(m.states) - kripke.box_pre(m, u)
        if lhs != rhs:
            return CheckResult("preimage-duality", False,
                               {"model": kripke.model_to_json(m), "set": sorted(u)})
        a = generators.random_model(rng, max_states=4, atoms=("p",))
        b = generators.random_model(rng, max_states=4, atoms=("p",))
        c = generators.random_model(rng, max_states=4, atoms=("p",))
        r1 = kripke.largest_bisimulation(a, b)
        r2 = kripke.largest_bisimulation(b, c)
        if not kripke.is_bisimulation(b, a, kripke.converse(r1)).ok:
            return CheckResult("preimage-duality", False, {"law": "converse", "case": k})
        if not kripke.is_bisimulation(a, c, kripke.compose(r1, r2)).ok:
            return CheckResult("preimage-duality", False, {"law": "compose", "case": k})
    return CheckResult("preimage-duality", True, info={"cases": count})


def suite_projection(seed: int, count: int = 300) -> CheckResult:
    """Dropping one level of a behavior type matches the one-level-lower
    behavior, kernels refine downward, and the stable kernel is exactly
    bisimilarity."""
    rng = random.Random(seed)
    for k in range(count):
        m = generators.random_model(rng, max_states=5)
        maps = [canonical.behavior_map(m, d) for d in range(4)]
        for d in range(1, 4):
            for x in m.states:
                if canonical.project(maps[d][x]) != maps[d - 1][x]:
                    return CheckResult("projection-compatibility", False,
                                       {"state": x, "depth": d, "case": k})
        for d in range(1, 4):
            for x in m.states:
                for y in m.states:
                    if maps[d][x] == maps[d][y] and maps[d - 1][x] != maps[d - 1][y]:
                        return CheckResult("projection-compatibility", False,
                                           {"law": "kernel-refinement", "case": k})
        rel, _ = canonical.stable_behavior_relation(m, m)
        if rel.pairs != kripke.largest_bisimulation(m, m).pairs:
            return CheckResult("projection-compatibility", False,
                               {"law": "stable-kernel", "case": k})
    return CheckResult("projection-compatibility", True, info={"cases": count})


SUITES: dict[str, tuple] = {
    "nnf": (suite_nnf, 10_000),
    "bisim-oracle": (suite_bisim_oracle, 1_000),
    "hennessy-milner": (suite_hennessy_milner, 1_000),
    "continuity": (suite_continuity, 1_000),
    "characterization": (suite_characterization, 1_000),
    "closure-sub": (suite_closure_substructure, 1_000),
    "closure-bisim": (suite_closure_bisimulation, 1_000),
    "truth-lemma": (suite_truth_lemma, 10_000),
    "final-levels": (suite_final_levels, 0),
    "ladder-chain": (suite_ladder_chain, 0),
    "ladder-extended": (suite_ladder_extended, 10_000),
    "quotient": (suite_quotient, 1_000),
    "functor": (suite_functor, 200),
    "separation": (suite_separation, 500),
    "duality": (suite_duality, 500),
    "projection": (suite_projection, 300),
}


def run_suite(name: str, seed: int, count: int | None = None) -> CheckResult:
    fn, default = SUITES[name]
    return fn(seed, count if count is not None else default)


def run_all(seed: int, count: int | None = None) -> list[CheckResult]:
    return [run_suite(name, seed, count) for name in SUITES]
