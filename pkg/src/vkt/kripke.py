"""Finite Kripke structures: modal semantics, bisimulations, quotients.

States are addressed by name at the API boundary; internally every state
set is an int bitmask over the model's dense state indexing, which keeps
the fixpoint and oracle computations cheap at desk scale.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Iterator, Mapping, NamedTuple

from .errors import ValidationError
from .formula import And, Atom, Bot, Box, Diamond, Formula, Not, Or, Top

__all__ = [
    "KripkeModel", "Relation", "Partition", "BisimCheck",
    "eval_states", "eval_mask", "diamond_pre", "box_pre",
    "is_bisimulation", "largest_bisimulation", "brute_force_largest_bisimulation",
    "converse", "compose", "identity_relation", "graph_relation",
    "is_homomorphism", "bisimilarity_partition", "quotient",
    "check_saturation_finite", "model_from_json", "model_to_json",
    "relation_from_json", "relation_to_json",
]


def _iter_bits(mask: int) -> Iterator[int]:
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


class KripkeModel:
    """Immutable finite Kripke structure over a declared atom fragment.

    `states` fixes the external names and the dense index order; `rel` is
    the successor relation as name pairs; `val` maps each state to the
    atoms true there, all of which must belong to `atoms`.
    """

    def __init__(
        self,
        states: Iterable[str],
        rel: Iterable[tuple[str, str]],
        val: Mapping[str, Iterable[str]],
        atoms: Iterable[str],
    ):
        self.states = tuple(states)
        self.atoms = tuple(atoms)
        self.rel = tuple((x, y) for x, y in rel)

        if len(set(self.states)) != len(self.states):
            raise ValidationError("duplicate state names")
        if len(set(self.atoms)) != len(self.atoms):
            raise ValidationError("duplicate atom names")
        self._index = {x: i for i, x in enumerate(self.states)}
        atom_set = set(self.atoms)

        for x, y in self.rel:
            if x not in self._index:
                raise ValidationError(f"rel references unknown state {x!r}")
            if y not in self._index:
                raise ValidationError(f"rel references unknown state {y!r}")

        self.val: dict[str, tuple[str, ...]] = {}
        for x, props in val.items():
            if x not in self._index:
                raise ValidationError(f"val references unknown state {x!r}")
            props = tuple(props)
            if len(set(props)) != len(props):
                raise ValidationError(f"duplicate atoms in val of {x!r}")
            for p in props:
                if p not in atom_set:
                    raise ValidationError(f"val of {x!r} uses undeclared atom {p!r}")
            self.val[x] = props
        for x in self.states:
            self.val.setdefault(x, ())

        n = len(self.states)
        succ = [0] * n
        for x, y in self.rel:
            succ[self._index[x]] |= 1 << self._index[y]
        self._succ = tuple(succ)
        self._full = (1 << n) - 1
        self._atom_mask = {p: 0 for p in self.atoms}
        for x in self.states:
            bit = 1 << self._index[x]
            for p in self.val[x]:
                self._atom_mask[p] |= bit
        self._val_sets = {x: frozenset(self.val[x]) for x in self.states}

    # -- basic accessors ------------------------------------------------

    @property
    def n(self) -> int:
        return len(self.states)

    def index_of(self, x: str) -> int:
        try:
            return self._index[x]
        except KeyError:
            raise ValidationError(f"unknown state {x!r}") from None

    def successors(self, x: str) -> frozenset[str]:
        return self.names_of(self._succ[self.index_of(x)])

    def succ_mask(self, i: int) -> int:
        return self._succ[i]

    def valuation(self, x: str) -> frozenset[str]:
        self.index_of(x)
        return self._val_sets[x]

    def mask_of(self, names: Iterable[str]) -> int:
        mask = 0
        for x in names:
            mask |= 1 << self.index_of(x)
        return mask

    def names_of(self, mask: int) -> frozenset[str]:
        return frozenset(self.states[i] for i in _iter_bits(mask))

    def __eq__(self, other) -> bool:
        if not isinstance(other, KripkeModel):
            return NotImplemented
        return (
            self.states == other.states
            and set(self.atoms) == set(other.atoms)
            and frozenset(self.rel) == frozenset(other.rel)
            and self._val_sets == other._val_sets
        )

    def __hash__(self) -> int:
        return hash((self.states, frozenset(self.atoms), frozenset(self.rel)))

    def __repr__(self) -> str:
        return f"KripkeModel(states={len(self.states)}, rel={len(self.rel)}, atoms={list(self.atoms)})"


@dataclass(frozen=True)
class Relation:
    """A set of state pairs between two (possibly identical) models."""

    left: KripkeModel
    right: KripkeModel
    pairs: frozenset[tuple[str, str]]

    def __post_init__(self):
        for x, y in self.pairs:
            self.left.index_of(x)
            self.right.index_of(y)

    def sorted_pairs(self) -> list[tuple[str, str]]:
        return sorted(self.pairs, key=lambda p: (self.left.index_of(p[0]), self.right.index_of(p[1])))


@dataclass(frozen=True)
class Partition:
    """Disjoint nonempty blocks; block order follows the least member index."""

    blocks: tuple[frozenset[str], ...]

    def block_of(self, x: str) -> frozenset[str]:
        for b in self.blocks:
            if x in b:
                return b
        raise ValidationError(f"state {x!r} not covered by partition")


# --- modal semantics ---------------------------------------------------------


def eval_mask(m: KripkeModel, f: Formula) -> int:
    """Truth set of `f` as a bitmask; shared subtrees are evaluated once."""
    memo: dict[int, int] = {}
    full = m._full
    succ = m._succ

    def go(g: Formula) -> int:
        key = id(g)
        cached = memo.get(key)
        if cached is not None:
            return cached
        if isinstance(g, Atom):
            try:
                r = m._atom_mask[g.name]
            except KeyError:
                raise ValidationError(f"undeclared atom {g.name!r}") from None
        elif isinstance(g, Top):
            r = full
        elif isinstance(g, Bot):
            r = 0
        elif isinstance(g, Not):
            r = full & ~go(g.child)
        elif isinstance(g, And):
            r = go(g.left) & go(g.right)
        elif isinstance(g, Or):
            r = go(g.left) | go(g.right)
        elif isinstance(g, Diamond):
            u = go(g.child)
            r = 0
            for i, s in enumerate(succ):
                if s & u:
                    r |= 1 << i
        elif isinstance(g, Box):
            u = go(g.child)
            r = 0
            for i, s in enumerate(succ):
                if not (s & ~u):
                    r |= 1 << i
        else:
            raise ValidationError(f"not a formula node: {g!r}")
        memo[key] = r
        return r

    return go(f)


def eval_states(m: KripkeModel, f: Formula) -> frozenset[str]:
    """The states of `m` satisfying `f`."""
    return m.names_of(eval_mask(m, f))


def diamond_pre(m: KripkeModel, U: Iterable[str]) -> frozenset[str]:
    """States with at least one successor in U."""
    u = m.mask_of(U)
    return m.names_of(diamond_pre_mask(m, u))


def box_pre(m: KripkeModel, U: Iterable[str]) -> frozenset[str]:
    """States all of whose successors lie in U (vacuously the deadlocked ones)."""
    u = m.mask_of(U)
    return m.names_of(box_pre_mask(m, u))


def diamond_pre_mask(m: KripkeModel, u: int) -> int:
    r = 0
    for i, s in enumerate(m._succ):
        if s & u:
            r |= 1 << i
    return r


def box_pre_mask(m: KripkeModel, u: int) -> int:
    r = 0
    for i, s in enumerate(m._succ):
        if not (s & ~u):
            r |= 1 << i
    return r


# --- bisimulations -----------------------------------------------------------


class BisimCheck(NamedTuple):
    ok: bool
    pair: tuple[str, str] | None  # first violating pair, in index order
    clause: int | None  # 1 = valuations, 2 = forth, 3 = back


def is_bisimulation(a: KripkeModel, b: KripkeModel, r: Relation) -> BisimCheck:
    """Check the three bisimulation clauses at every pair of `r`."""
    if r.left is not a and r.left != a:
        raise ValidationError("relation's left endpoint is not the first model")
    if r.right is not b and r.right != b:
        raise ValidationError("relation's right endpoint is not the second model")
    pair_masks = [0] * a.n  # per left index: mask of related right indices
    for x, y in r.pairs:
        pair_masks[a.index_of(x)] |= 1 << b.index_of(y)
    for i in range(a.n):
        row = pair_masks[i]
        for j in _iter_bits(row):
            x, y = a.states[i], b.states[j]
            if a._val_sets[x] != b._val_sets[y]:
                return BisimCheck(False, (x, y), 1)
            for i2 in _iter_bits(a._succ[i]):
                if not (pair_masks[i2] & b._succ[j]):
                    return BisimCheck(False, (x, y), 2)
            for j2 in _iter_bits(b._succ[j]):
                hit = False
                for i2 in _iter_bits(a._succ[i]):
                    if pair_masks[i2] & (1 << j2):
                        hit = True
                        break
                if not hit:
                    return BisimCheck(False, (x, y), 3)
    return BisimCheck(True, None, None)


def largest_bisimulation(a: KripkeModel, b: KripkeModel) -> Relation:
    """Greatest fixpoint: start from the valuation-compatible pairs and
    delete pairs violating the forth/back clauses until stable."""
    na, nb = a.n, b.n
    rows = [0] * na  # rows[i]: mask of right indices related to left i
    cols = [0] * nb
    for i in range(na):
        va = a._val_sets[a.states[i]]
        for j in range(nb):
            if va == b._val_sets[b.states[j]]:
                rows[i] |= 1 << j
                cols[j] |= 1 << i
    sa, sb = a._succ, b._succ
    changed = True
    while changed:
        changed = False
        for i in range(na):
            row = rows[i]
            for j in _iter_bits(row):
                ok = True
                for i2 in _iter_bits(sa[i]):
                    if not (rows[i2] & sb[j]):
                        ok = False
                        break
                if ok:
                    for j2 in _iter_bits(sb[j]):
                        if not (cols[j2] & sa[i]):
                            ok = False
                            break
                if not ok:
                    rows[i] &= ~(1 << j)
                    cols[j] &= ~(1 << i)
                    changed = True
    pairs = frozenset(
        (a.states[i], b.states[j]) for i in range(na) for j in _iter_bits(rows[i])
    )
    return Relation(a, b, pairs)


def brute_force_largest_bisimulation(
    a: KripkeModel, b: KripkeModel, value_filter: bool = True
) -> Relation:
    """Oracle: enumerate candidate relations, keep the bisimulations, union.

    With `value_filter` the enumeration ranges over subsets of the
    valuation-compatible pairs only; a relation containing a mismatched
    pair fails clause 1 outright, so the union is unchanged.  Candidate
    counts are capped at 2^22 enumerated relations.
    """
    candidates: list[tuple[int, int]] = []
    for i in range(a.n):
        for j in range(b.n):
            if not value_filter or a._val_sets[a.states[i]] == b._val_sets[b.states[j]]:
                candidates.append((i, j))
    k = len(candidates)
    if k > 22:
        raise ValidationError(f"too many candidate pairs for brute force: {k}")
    pos = {ij: t for t, ij in enumerate(candidates)}
    bad = 0  # candidate slots whose pair mismatches on valuations
    forth: list[list[int]] = []  # per slot: one mask per left-successor
    back: list[list[int]] = []
    for t, (i, j) in enumerate(candidates):
        if a._val_sets[a.states[i]] != b._val_sets[b.states[j]]:
            bad |= 1 << t
        need_f = []
        for i2 in _iter_bits(a._succ[i]):
            mask = 0
            for j2 in _iter_bits(b._succ[j]):
                slot = pos.get((i2, j2))
                if slot is not None:
                    mask |= 1 << slot
            need_f.append(mask)
        need_b = []
        for j2 in _iter_bits(b._succ[j]):
            mask = 0
            for i2 in _iter_bits(a._succ[i]):
                slot = pos.get((i2, j2))
                if slot is not None:
                    mask |= 1 << slot
            need_b.append(mask)
        forth.append(need_f)
        back.append(need_b)

    union = 0
    for mask in range(1 << k):
        if mask | union == union:
            continue  # cannot enlarge the union even if it is a bisimulation
        if mask & bad:
            continue
        ok = True
        rest = mask
        while rest:
            low = rest & -rest
            t = low.bit_length() - 1
            rest ^= low
            for need in forth[t]:
                if not (need & mask):
                    ok = False
                    break
            if ok:
                for need in back[t]:
                    if not (need & mask):
                        ok = False
                        break
            if not ok:
                break
        if ok:
            union |= mask
    pairs = frozenset(
        (a.states[i], b.states[j]) for t, (i, j) in enumerate(candidates) if union >> t & 1
    )
    return Relation(a, b, pairs)


def converse(r: Relation) -> Relation:
    return Relation(r.right, r.left, frozenset((y, x) for x, y in r.pairs))


def compose(r1: Relation, r2: Relation) -> Relation:
    if r1.right != r2.left:
        raise ValidationError("endpoint mismatch: r1's right model differs from r2's left model")
    by_mid: dict[str, list[str]] = {}
    for y, z in r2.pairs:
        by_mid.setdefault(y, []).append(z)
    pairs = frozenset((x, z) for x, y in r1.pairs for z in by_mid.get(y, ()))
    return Relation(r1.left, r2.right, pairs)


def identity_relation(m: KripkeModel) -> Relation:
    return Relation(m, m, frozenset((x, x) for x in m.states))


def graph_relation(a: KripkeModel, b: KripkeModel, mapping: Mapping[str, str]) -> Relation:
    """The graph of a total state map as a Relation."""
    missing = [x for x in a.states if x not in mapping]
    if missing:
        raise ValidationError(f"map is not total: no image for {missing[0]!r}")
    return Relation(a, b, frozenset((x, mapping[x]) for x in a.states))


def is_homomorphism(a: KripkeModel, b: KripkeModel, mapping: Mapping[str, str]) -> bool:
    """True iff the graph of `mapping` is a bisimulation."""
    return is_bisimulation(a, b, graph_relation(a, b, mapping)).ok


# --- quotients ---------------------------------------------------------------


def bisimilarity_partition(m: KripkeModel) -> Partition:
    """Blocks of the largest auto-bisimulation, ordered by least member index."""
    rel = largest_bisimulation(m, m)
    related: dict[str, set[str]] = {x: set() for x in m.states}
    for x, y in rel.pairs:
        related[x].add(y)
    blocks = []
    seen: set[str] = set()
    for x in m.states:
        if x not in seen:
            block = frozenset(related[x])
            blocks.append(block)
            seen |= block
    return Partition(tuple(blocks))


def quotient(m: KripkeModel) -> tuple[KripkeModel, dict[str, str]]:
    """Collapse bisimilar states; returns the quotient and the projection.

    Each block is named after its least-index member.  The projection is a
    homomorphism, and the quotient is simple: its largest auto-bisimulation
    is the identity.
    """
    part = bisimilarity_partition(m)
    rep: dict[str, str] = {}
    reps: list[str] = []
    for block in part.blocks:
        name = min(block, key=m.index_of)
        reps.append(name)
        for x in block:
            rep[x] = name
    rel = sorted(
        {(rep[x], rep[y]) for x, y in m.rel},
        key=lambda p: (m.index_of(p[0]), m.index_of(p[1])),
    )
    val = {r: m.val[r] for r in reps}
    qm = KripkeModel(states=reps, rel=rel, val=val, atoms=m.atoms)
    return qm, rep


def check_saturation_finite(m: KripkeModel) -> bool:
    """Finite structures are image finite, hence saturated; always True.

    Exists as the trivial base case of the saturation API; the two
    infinite structures live in the ladder module.
    """
    # Image finiteness is immediate: every successor set sits inside a
    # finite carrier.
    return m.n >= 0


# --- JSON formats ------------------------------------------------------------


def model_to_json(m: KripkeModel) -> dict:
    return {
        "atoms": list(m.atoms),
        "states": list(m.states),
        "rel": [[x, y] for x, y in m.rel],
        "val": {x: list(m.val[x]) for x in m.states},
    }


def model_from_json(data: object) -> KripkeModel:
    if not isinstance(data, dict):
        raise ValidationError("model document must be a JSON object")
    for key in ("atoms", "states", "rel", "val"):
        if key not in data:
            raise ValidationError(f"model document is missing key {key!r}")
    atoms = data["atoms"]
    states = data["states"]
    rel = data["rel"]
    val = data["val"]
    if not isinstance(states, list) or not all(isinstance(s, str) for s in states):
        raise ValidationError("'states' must be a list of strings")
    if not isinstance(atoms, list) or not all(isinstance(p, str) for p in atoms):
        raise ValidationError("'atoms' must be a list of strings")
    if not isinstance(rel, list):
        raise ValidationError("'rel' must be a list of [from, to] pairs")
    pairs = []
    for k, entry in enumerate(rel):
        if not (isinstance(entry, list) and len(entry) == 2 and all(isinstance(e, str) for e in entry)):
            raise ValidationError(f"rel[{k}] is not a [from, to] pair of state names")
        pairs.append((entry[0], entry[1]))
    if not isinstance(val, dict):
        raise ValidationError("'val' must be an object mapping states to atom lists")
    val_map = {}
    for x, props in val.items():
        if not (isinstance(props, list) and all(isinstance(p, str) for p in props)):
            raise ValidationError(f"val[{x!r}] is not a list of atom names")
        val_map[x] = props
    return KripkeModel(states=states, rel=pairs, val=val_map, atoms=atoms)


def relation_to_json(r: Relation) -> dict:
    return {"pairs": [[x, y] for x, y in r.sorted_pairs()]}


def relation_from_json(a: KripkeModel, b: KripkeModel, data: object) -> Relation:
    if not isinstance(data, dict) or "pairs" not in data:
        raise ValidationError("relation document must be an object with a 'pairs' key")
    pairs = data["pairs"]
    if not isinstance(pairs, list):
        raise ValidationError("'pairs' must be a list")
    out = []
    for k, entry in enumerate(pairs):
        if not (isinstance(entry, list) and len(entry) == 2 and all(isinstance(e, str) for e in entry)):
            raise ValidationError(f"pairs[{k}] is not a [left, right] pair of state names")
        out.append((entry[0], entry[1]))
    return Relation(a, b, frozenset(out))
