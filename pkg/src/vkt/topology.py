"""Finite topologies over state sets and the topological-model checker.

Open-set families are stored explicitly (as bitmasks over the carrier),
which keeps closure, interior and clopen tests direct reads of the
family.  Carriers are capped at 16 points.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable

from .errors import BoundError, ValidationError
from .kripke import (
    KripkeModel,
    box_pre_mask,
    diamond_pre_mask,
    bisimilarity_partition,
)
from .report import CheckResult, all_pass

__all__ = [
    "FiniteTopology", "TopologicalModel", "generate",
    "closure", "interior", "is_clopen",
    "check_topological_model", "formula_topology",
    "topology_from_json", "topology_to_json",
    "CARRIER_LIMIT",
]

CARRIER_LIMIT = 16


class FiniteTopology:
    """An explicit open-set family over a finite carrier.

    The constructor validates the topology axioms (empty set and carrier
    present, family closed under pairwise union and intersection) unless
    built through `generate`, and reports the first violating pair.
    """

    def __init__(self, carrier: Iterable[str], opens: Iterable[Iterable[str]], *, _trusted_masks=None):
        self.carrier = tuple(carrier)
        if len(set(self.carrier)) != len(self.carrier):
            raise ValidationError("duplicate carrier elements")
        if len(self.carrier) > CARRIER_LIMIT:
            raise BoundError(f"carrier larger than {CARRIER_LIMIT} points")
        self._index = {x: i for i, x in enumerate(self.carrier)}
        self._full = (1 << len(self.carrier)) - 1

        if _trusted_masks is not None:
            self._opens_order = tuple(sorted(_trusted_masks))
        else:
            order = []
            for member in opens:
                order.append(self.mask_of(member))
            self._opens_order = tuple(order)
        self.opens = frozenset(self._opens_order)

        if _trusted_masks is None:
            self._validate()
        self._min_nbhd = self._minimal_neighborhoods()

    def _validate(self):
        if 0 not in self.opens:
            raise ValidationError("the empty set is not open")
        if self._full not in self.opens:
            raise ValidationError("the full carrier is not open")
        # A family containing the empty set and the carrier is a topology
        # exactly when it coincides with the topology it generates; compare
        # first, and only scan pairs for a witness when that fails.
        if self.opens == _saturate_unions(self._minimal_neighborhoods(), self._full):
            return
        ordered = sorted(self.opens)
        for a in ordered:
            for b in ordered:
                if a < b:
                    if (a | b) not in self.opens:
                        raise ValidationError(
                            f"opens not closed under union: {sorted(self.names_of(a))} "
                            f"and {sorted(self.names_of(b))}"
                        )
                    if (a & b) not in self.opens:
                        raise ValidationError(
                            f"opens not closed under intersection: {sorted(self.names_of(a))} "
                            f"and {sorted(self.names_of(b))}"
                        )
        raise ValidationError("opens family is not a topology")  # unreachable

    def _minimal_neighborhoods(self) -> tuple[int, ...]:
        out = []
        for i in range(len(self.carrier)):
            bit = 1 << i
            nbhd = self._full
            for o in self.opens:
                if o & bit:
                    nbhd &= o
            out.append(nbhd)
        return tuple(out)

    # -- mask helpers -----------------------------------------------------

    def mask_of(self, names: Iterable[str]) -> int:
        mask = 0
        for x in names:
            try:
                mask |= 1 << self._index[x]
            except KeyError:
                raise ValidationError(f"not a carrier element: {x!r}") from None
        return mask

    def names_of(self, mask: int) -> frozenset[str]:
        return frozenset(x for x, i in self._index.items() if mask >> i & 1)

    @property
    def full_mask(self) -> int:
        return self._full

    def min_nbhd_mask(self, i: int) -> int:
        return self._min_nbhd[i]

    def is_open_mask(self, mask: int) -> bool:
        return mask in self.opens

    def interior_mask(self, mask: int) -> int:
        out = 0
        for i in range(len(self.carrier)):
            if self._min_nbhd[i] & ~mask == 0:
                out |= 1 << i
        return out

    def closure_mask(self, mask: int) -> int:
        return self._full & ~self.interior_mask(self._full & ~mask)

    def open_families(self) -> list[frozenset[str]]:
        return [self.names_of(o) for o in sorted(self.opens)]

    def __eq__(self, other) -> bool:
        if not isinstance(other, FiniteTopology):
            return NotImplemented
        return self.carrier == other.carrier and self.opens == other.opens

    def __hash__(self) -> int:
        return hash((self.carrier, self.opens))

    def __repr__(self) -> str:
        return f"FiniteTopology(carrier={len(self.carrier)}, opens={len(self.opens)})"


def _saturate_unions(nbhd: tuple[int, ...] | list[int], full: int) -> frozenset[int]:
    """All unions of the given neighborhood masks, plus the empty set and full."""
    opens = {0}
    frontier = [0]
    while frontier:
        cur = frontier.pop()
        for u in nbhd:
            nxt = cur | u
            if nxt not in opens:
                opens.add(nxt)
                frontier.append(nxt)
    opens.add(full)
    return frozenset(opens)


def generate(carrier: Iterable[str], subbase: Iterable[Iterable[str]]) -> FiniteTopology:
    """Smallest topology containing `subbase`.

    Closes under finite intersections and then arbitrary unions via the
    minimal-neighborhood construction; the empty set and the carrier are
    always present.
    """
    carrier = tuple(carrier)
    index = {x: i for i, x in enumerate(carrier)}
    full = (1 << len(carrier)) - 1
    sub_masks = []
    for member in subbase:
        mask = 0
        for x in member:
            if x not in index:
                raise ValidationError(f"subbase member uses unknown element {x!r}")
            mask |= 1 << index[x]
        sub_masks.append(mask)
    # Minimal neighborhood of i: intersection of all subbase sets through i
    # (the empty intersection is the whole carrier).
    nbhd = []
    for i in range(len(carrier)):
        u = full
        for s in sub_masks:
            if s >> i & 1:
                u &= s
        nbhd.append(u)
    return FiniteTopology(carrier, (), _trusted_masks=_saturate_unions(nbhd, full))


def closure(t: FiniteTopology, A: Iterable[str]) -> frozenset[str]:
    """Intersection of all closed supersets of A."""
    return t.names_of(t.closure_mask(t.mask_of(A)))


def interior(t: FiniteTopology, A: Iterable[str]) -> frozenset[str]:
    """Largest open subset of A."""
    return t.names_of(t.interior_mask(t.mask_of(A)))


def is_clopen(t: FiniteTopology, A: Iterable[str]) -> bool:
    """True when both A and its complement are open."""
    mask = t.mask_of(A)
    return t.is_open_mask(mask) and t.is_open_mask(t.full_mask & ~mask)


@dataclass(frozen=True)
class TopologicalModel:
    """A Kripke model paired with a topology over its states.

    The topology's carrier must equal the state set; if the orders differ
    the topology is re-indexed onto the model's state order.  Whether the
    pair satisfies the four structure conditions is decided by
    `check_topological_model`, not enforced here, so deliberately broken
    instances can be built for testing.
    """

    model: KripkeModel
    topology: FiniteTopology

    def __post_init__(self):
        if set(self.topology.carrier) != set(self.model.states):
            raise ValidationError("topology carrier differs from the model's state set")
        if self.topology.carrier != self.model.states:
            aligned = FiniteTopology(
                self.model.states,
                [self.topology.names_of(o) for o in sorted(self.topology.opens)],
            )
            object.__setattr__(self, "topology", aligned)


def check_topological_model(tm: TopologicalModel) -> CheckResult:
    """Per-condition check of the four structure conditions.

    (1) successor sets compact — unconditional on a finite carrier;
    (2) diamond preimages of opens open; (3) box preimages of opens open;
    (4) atom truth sets clopen.  Witnesses name the first failing open
    or atom.
    """
    m, t = tm.model, tm.topology
    clauses = [CheckResult("successor-sets-compact", True, None,
                           info={"note": "every subset of a finite carrier is compact"})]

    bad = None
    for o in sorted(t.opens):
        pre = diamond_pre_mask(m, o)
        if not t.is_open_mask(pre):
            bad = {"open": sorted(t.names_of(o)), "diamond_pre": sorted(t.names_of(pre))}
            break
    clauses.append(CheckResult("diamond-preimages-open", bad is None, bad))

    bad = None
    for o in sorted(t.opens):
        pre = box_pre_mask(m, o)
        if not t.is_open_mask(pre):
            bad = {"open": sorted(t.names_of(o)), "box_pre": sorted(t.names_of(pre))}
            break
    clauses.append(CheckResult("box-preimages-open", bad is None, bad))

    bad = None
    for p in m.atoms:
        truth = m._atom_mask[p]
        if not (t.is_open_mask(truth) and t.is_open_mask(t.full_mask & ~truth)):
            bad = {"atom": p, "states": sorted(m.names_of(truth))}
            break
    clauses.append(CheckResult("atom-sets-clopen", bad is None, bad))

    return all_pass("topological-model", clauses)


def formula_topology(m: KripkeModel) -> TopologicalModel:
    """The topology generated by the definable subsets of `m`.

    On a finite model the definable sets are exactly the unions of
    bisimilarity blocks, so the blocks serve as the generating subbase.
    The result always passes `check_topological_model`.
    """
    blocks = bisimilarity_partition(m).blocks
    t = generate(m.states, blocks)
    return TopologicalModel(model=m, topology=t)


# --- JSON format -------------------------------------------------------------


def topology_to_json(t: FiniteTopology) -> dict:
    return {
        "carrier": list(t.carrier),
        "opens": [sorted(t.names_of(o)) for o in sorted(t.opens)],
    }


def topology_from_json(data: object) -> FiniteTopology:
    if not isinstance(data, dict):
        raise ValidationError("topology document must be a JSON object")
    for key in ("carrier", "opens"):
        if key not in data:
            raise ValidationError(f"topology document is missing key {key!r}")
    carrier = data["carrier"]
    opens = data["opens"]
    if not isinstance(carrier, list) or not all(isinstance(x, str) for x in carrier):
        raise ValidationError("'carrier' must be a list of strings")
    if not isinstance(opens, list):
        raise ValidationError("'opens' must be a list of lists")
    for k, member in enumerate(opens):
        if not (isinstance(member, list) and all(isinstance(x, str) for x in member)):
            raise ValidationError(f"opens[{k}] is not a list of carrier elements")
    return FiniteTopology(carrier, opens)
