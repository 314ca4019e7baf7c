"""The hyperspace of compact subsets over a finite base space.

On a finite carrier every subset is compact, so the hyperspace's points
are all subsets, encoded as bitmasks of the base carrier.  The hyperspace
topology itself is never materialized (it lives over 2^carrier points);
continuity of structure maps is decided on the defining subbase, which is
what the correspondence and closure checks need.
"""

from __future__ import annotations

from typing import Iterable, Mapping

from .errors import BoundError, ValidationError
from .kripke import (
    KripkeModel,
    Relation,
    box_pre_mask,
    diamond_pre_mask,
    is_bisimulation,
)
from .report import CheckResult, all_pass
from .topology import FiniteTopology, TopologicalModel

__all__ = [
    "VietorisSpace", "vietoris_space", "is_continuous", "vietoris_map",
    "structure_map_continuous", "closed_subcoalgebra_check",
    "closed_bisimulation_check", "product_closure_pairs",
    "in_up_set", "separating_atom", "HYPERSPACE_CARRIER_LIMIT",
]

HYPERSPACE_CARRIER_LIMIT = 12


class VietorisSpace:
    """Points and defining subbase of the hyperspace over a finite base.

    `points` lists every subset of the base carrier as a mask.  For each
    base-open O, `diamond[O]` collects the points meeting O and `box[O]`
    the points contained in O.
    """

    def __init__(self, base: FiniteTopology):
        n = len(base.carrier)
        if n > HYPERSPACE_CARRIER_LIMIT:
            raise BoundError(
                f"hyperspace carrier limit is {HYPERSPACE_CARRIER_LIMIT} points, got {n}"
            )
        self.base = base
        self.points = tuple(range(1 << n))
        self.diamond: dict[int, frozenset[int]] = {}
        self.box: dict[int, frozenset[int]] = {}
        for o in sorted(base.opens):
            self.diamond[o] = frozenset(k for k in self.points if k & o)
            self.box[o] = frozenset(k for k in self.points if not (k & ~o))

    def point_names(self, mask: int) -> frozenset[str]:
        return self.base.names_of(mask)

    def __repr__(self) -> str:
        return f"VietorisSpace(points={len(self.points)}, base_opens={len(self.base.opens)})"


def vietoris_space(t: FiniteTopology) -> VietorisSpace:
    """Build the hyperspace over `t` with its defining subbase."""
    return VietorisSpace(t)


def is_continuous(mapping: Mapping[str, str], src: FiniteTopology, dst: FiniteTopology) -> bool:
    """Preimage of every destination open is open in the source."""
    for x in src.carrier:
        if x not in mapping:
            raise ValidationError(f"map is not total: no image for {x!r}")
        dst.mask_of([mapping[x]])
    for o in dst.opens:
        pre = 0
        for i, x in enumerate(src.carrier):
            if dst.mask_of([mapping[x]]) & o:
                pre |= 1 << i
        if not src.is_open_mask(pre):
            return False
    return True


def vietoris_map(
    mapping: Mapping[str, str], src: VietorisSpace, dst: VietorisSpace
) -> dict[int, int]:
    """Point map K -> image of K under a continuous base map."""
    if not is_continuous(mapping, src.base, dst.base):
        raise ValidationError("base map is not continuous")
    image_bit = [dst.base.mask_of([mapping[x]]) for x in src.base.carrier]
    out = {}
    for k in src.points:
        img = 0
        rest = k
        while rest:
            low = rest & -rest
            img |= image_bit[low.bit_length() - 1]
            rest ^= low
        out[k] = img
    return out


def structure_map_continuous(tm: TopologicalModel) -> CheckResult:
    """Continuity of x -> (successor set, valuation) on the defining subbase.

    Checks, per base-open O, that the preimages of the box and diamond
    subbase sets (computed from their definitions) are open, and per atom
    that the preimage of its up-set and the complement are open.  Passing
    is equivalent to the four topological-model conditions.
    """
    m, t = tm.model, tm.topology
    clauses = [CheckResult("successors-are-points", True, None,
                           info={"note": "successor sets of a finite space are compact"})]

    bad = None
    for o in sorted(t.opens):
        # preimage of the 'meets O' subbase set
        pre = 0
        for i in range(m.n):
            if m.succ_mask(i) & o:
                pre |= 1 << i
        if pre != diamond_pre_mask(m, o):
            bad = {"open": sorted(t.names_of(o)), "reason": "diamond identity"}
            break
        if not t.is_open_mask(pre):
            bad = {"open": sorted(t.names_of(o)), "preimage": sorted(t.names_of(pre))}
            break
    clauses.append(CheckResult("diamond-subbase-preimages-open", bad is None, bad))

    bad = None
    for o in sorted(t.opens):
        # preimage of the 'inside O' subbase set
        pre = 0
        for i in range(m.n):
            if not (m.succ_mask(i) & ~o):
                pre |= 1 << i
        if pre != box_pre_mask(m, o):
            bad = {"open": sorted(t.names_of(o)), "reason": "box identity"}
            break
        if not t.is_open_mask(pre):
            bad = {"open": sorted(t.names_of(o)), "preimage": sorted(t.names_of(pre))}
            break
    clauses.append(CheckResult("box-subbase-preimages-open", bad is None, bad))

    bad = None
    for p in m.atoms:
        pre = 0
        for i, x in enumerate(m.states):
            if p in m.valuation(x):
                pre |= 1 << i
        if not (t.is_open_mask(pre) and t.is_open_mask(t.full_mask & ~pre)):
            bad = {"atom": p, "preimage": sorted(t.names_of(pre))}
            break
    clauses.append(CheckResult("valuation-preimages-clopen", bad is None, bad))

    return all_pass("structure-map-continuous", clauses)


def product_closure_pairs(
    ta: FiniteTopology, tb: FiniteTopology, pairs: Iterable[tuple[str, str]]
) -> frozenset[tuple[str, str]]:
    """Closure of a pair set in the product topology.

    The minimal neighborhood of (a, b) in the product is the box
    U_a x U_b of the factor minimal neighborhoods, so (a, b) is in the
    closure iff that box meets the pair set.
    """
    pair_list = [(ta.mask_of([x]), tb.mask_of([y])) for x, y in pairs]
    out = set()
    for i, x in enumerate(ta.carrier):
        ua = ta.min_nbhd_mask(i)
        for j, y in enumerate(tb.carrier):
            ub = tb.min_nbhd_mask(j)
            for px, py in pair_list:
                if (ua & px) and (ub & py):
                    out.add((x, y))
                    break
    return frozenset(out)


def closed_subcoalgebra_check(tm: TopologicalModel, U: Iterable[str]) -> CheckResult:
    """Successor-closedness of the topological closure of a substructure.

    Precondition: U itself is successor-closed; a violation is reported
    distinctly (`precondition_ok=False`) rather than as a theorem failure.
    """
    m, t = tm.model, tm.topology
    u_mask = t.mask_of(U)
    for i in range(m.n):
        if u_mask >> i & 1:
            escape = m.succ_mask(i) & ~u_mask
            if escape:
                leader = next(iter(m.names_of(escape & -escape)))
                return CheckResult(
                    "closed-substructure",
                    passed=False,
                    precondition_ok=False,
                    witness={"state": m.states[i], "successor": leader,
                             "reason": "input is not successor-closed"},
                )
    closure_mask = t.closure_mask(u_mask)
    for i in range(m.n):
        if closure_mask >> i & 1:
            escape = m.succ_mask(i) & ~closure_mask
            if escape:
                leader = next(iter(m.names_of(escape & -escape)))
                return CheckResult(
                    "closed-substructure",
                    passed=False,
                    witness={"state": m.states[i], "successor": leader,
                             "closure": sorted(t.names_of(closure_mask))},
                )
    return CheckResult(
        "closed-substructure",
        passed=True,
        info={"closure": sorted(t.names_of(closure_mask))},
    )


def closed_bisimulation_check(
    tma: TopologicalModel, tmb: TopologicalModel, S: Relation
) -> CheckResult:
    """Bisimulation clauses for the product-topology closure of S.

    Precondition: S is a bisimulation between the underlying models; a
    violation is reported distinctly.
    """
    if S.left != tma.model or S.right != tmb.model:
        raise ValidationError("relation endpoints do not match the given models")
    pre = is_bisimulation(tma.model, tmb.model, S)
    if not pre.ok:
        return CheckResult(
            "closed-bisimulation",
            passed=False,
            precondition_ok=False,
            witness={"pair": list(pre.pair), "clause": pre.clause,
                     "reason": "input relation is not a bisimulation"},
        )
    closed = product_closure_pairs(tma.topology, tmb.topology, S.pairs)
    closed_rel = Relation(tma.model, tmb.model, closed)
    res = is_bisimulation(tma.model, tmb.model, closed_rel)
    if not res.ok:
        return CheckResult(
            "closed-bisimulation",
            passed=False,
            witness={"pair": list(res.pair), "clause": res.clause,
                     "closure_size": len(closed)},
        )
    return CheckResult(
        "closed-bisimulation",
        passed=True,
        info={"closure_size": len(closed), "input_size": len(S.pairs)},
    )


# --- the constant atom-set component -----------------------------------------


def in_up_set(p: str, u: Iterable[str]) -> bool:
    """Membership of the point `u` in the basic open named by atom `p`."""
    return p in set(u)


def separating_atom(u: Iterable[str], w: Iterable[str]) -> str | None:
    """An atom whose up-set contains exactly one of two distinct points.

    Returns None only when u and w are equal as sets; this is the
    point-separation property of the atom-set component.
    """
    us, ws = frozenset(u), frozenset(w)
    diff = sorted(us.symmetric_difference(ws))
    return diff[0] if diff else None
