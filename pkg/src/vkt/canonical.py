"""Bounded-depth behavior types: finite approximants of the canonical model.

A depth-d type records a valuation over a declared atom fragment and a
set of depth-(d-1) successor types.  Types are hash-consed, so equality
checks and set operations stay cheap even for deeply nested values, and
each carries a canonical sort key for deterministic enumeration.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Mapping

from .errors import BoundError, ValidationError
from .formula import (
    Atom,
    And,
    Bot,
    Box,
    Diamond,
    Formula,
    Not,
    Or,
    Top,
    conj,
    disj,
    modal_depth,
)
from .kripke import KripkeModel, Relation, eval_mask
from .report import CheckResult, all_pass

__all__ = [
    "BehaviorType", "FinalLevel", "behavior_type", "final_level",
    "level_sizes", "behavior_map", "type_satisfies", "characteristic_formula",
    "project", "one_step_coherent", "terminal_uniqueness_check",
    "stable_behavior_relation", "type_to_json", "LEVEL_SIZE_LIMIT",
]

LEVEL_SIZE_LIMIT = 1 << 16


class BehaviorType:
    """One element of a final-sequence level; construct via `behavior_type`."""

    __slots__ = ("atoms", "depth", "val", "succs", "_key", "_hash")

    def __init__(self, atoms, depth, val, succs, key, hsh):
        self.atoms = atoms
        self.depth = depth
        self.val = val
        self.succs = succs
        self._key = key
        self._hash = hsh

    def __eq__(self, other):
        if self is other:
            return True
        if not isinstance(other, BehaviorType):
            return NotImplemented
        return (
            self.depth == other.depth
            and self.atoms == other.atoms
            and self.val == other.val
            and self.succs == other.succs
        )

    def __hash__(self):
        return self._hash

    def sort_key(self):
        return self._key

    def __repr__(self):
        if self.depth == 0:
            return "Type0({})".format(",".join(sorted(self.val)))
        return "Type{}({};{} succ)".format(self.depth, ",".join(sorted(self.val)), len(self.succs))


_INTERN: dict[tuple, BehaviorType] = {}


def behavior_type(
    atoms: Iterable[str], depth: int, val: Iterable[str], succs: Iterable[BehaviorType] = ()
) -> BehaviorType:
    """Intern a type; successors are sorted and deduplicated canonically."""
    atoms = frozenset(atoms)
    val = frozenset(val)
    if not val <= atoms:
        raise ValidationError("valuation uses atoms outside the declared fragment")
    if depth < 0:
        raise ValidationError("negative depth")
    succ_list = sorted(set(succs), key=BehaviorType.sort_key)
    if depth == 0:
        if succ_list:
            raise ValidationError("depth-0 types have no successor component")
    else:
        for s in succ_list:
            if s.depth != depth - 1:
                raise ValidationError("successor types must sit one level down")
            if s.atoms != atoms:
                raise ValidationError("successor types must share the atom fragment")
    ident = (atoms, depth, val, tuple(id(s) for s in succ_list))
    cached = _INTERN.get(ident)
    if cached is not None:
        return cached
    key = (tuple(sorted(val)), tuple(s._key for s in succ_list))
    hsh = hash((depth, val, tuple(s._hash for s in succ_list)))
    t = BehaviorType(atoms, depth, val, tuple(succ_list), key, hsh)
    _INTERN[ident] = t
    return t


@dataclass(frozen=True)
class FinalLevel:
    """All types of one depth over a fragment, in canonical order."""

    atoms: frozenset[str]
    depth: int
    types: tuple[BehaviorType, ...]


def level_sizes(n_atoms: int, depth: int) -> list[int]:
    """Level cardinalities |Z_0|..|Z_depth| by the recurrence
    |Z_0| = 2^a, |Z_{k+1}| = 2^|Z_k| * 2^a."""
    sizes = [1 << n_atoms]
    for _ in range(depth):
        if sizes[-1] > 60:  # 2^|Z_k| would already dwarf any usable bound
            sizes.append(LEVEL_SIZE_LIMIT + 1)
        else:
            sizes.append((1 << sizes[-1]) * (1 << n_atoms))
    return sizes


def final_level(atoms: Iterable[str], depth: int) -> FinalLevel:
    """Enumerate one full level; refuses levels beyond 2^16 types."""
    atoms = frozenset(atoms)
    sizes = level_sizes(len(atoms), depth)
    for d, size in enumerate(sizes):
        if size > LEVEL_SIZE_LIMIT:
            raise BoundError(
                f"level {d} over {len(atoms)} atoms has {size} > {LEVEL_SIZE_LIMIT} types"
            )
    ordered_atoms = sorted(atoms)
    vals = []
    for mask in range(1 << len(ordered_atoms)):
        vals.append(frozenset(p for i, p in enumerate(ordered_atoms) if mask >> i & 1))
    level = [behavior_type(atoms, 0, v) for v in vals]
    level.sort(key=BehaviorType.sort_key)
    for d in range(1, depth + 1):
        nxt = []
        for succ_mask in range(1 << len(level)):
            chosen = [level[i] for i in range(len(level)) if succ_mask >> i & 1]
            for v in vals:
                nxt.append(behavior_type(atoms, d, v, chosen))
        nxt.sort(key=BehaviorType.sort_key)
        level = nxt
    return FinalLevel(atoms=atoms, depth=depth, types=tuple(level))


def behavior_map(
    m: KripkeModel, depth: int, atoms: Iterable[str] | None = None
) -> dict[str, BehaviorType]:
    """Depth-`depth` behavior of every state.

    The fragment defaults to the model's declared atoms; an explicit
    fragment must contain them.
    """
    fragment = frozenset(atoms) if atoms is not None else frozenset(m.atoms)
    if not frozenset(m.atoms) <= fragment:
        raise ValidationError("model atoms are not contained in the declared fragment")
    cur = {
        x: behavior_type(fragment, 0, m.valuation(x) & fragment) for x in m.states
    }
    for d in range(1, depth + 1):
        cur = {
            x: behavior_type(
                fragment, d, m.valuation(x) & fragment,
                {cur[y] for y in m.successors(x)},
            )
            for x in m.states
        }
    return cur


def type_satisfies(t: BehaviorType, f: Formula) -> bool:
    """Structural satisfaction of `f` on a type of sufficient depth."""
    if modal_depth(f) > t.depth:
        raise ValidationError(
            f"formula depth {modal_depth(f)} exceeds type depth {t.depth}"
        )
    memo: dict[tuple[int, int], bool] = {}

    def go(t: BehaviorType, g: Formula) -> bool:
        key = (id(t), id(g))
        cached = memo.get(key)
        if cached is not None:
            return cached
        if isinstance(g, Atom):
            r = g.name in t.val
        elif isinstance(g, Top):
            r = True
        elif isinstance(g, Bot):
            r = False
        elif isinstance(g, Not):
            r = not go(t, g.child)
        elif isinstance(g, And):
            r = go(t, g.left) and go(t, g.right)
        elif isinstance(g, Or):
            r = go(t, g.left) or go(t, g.right)
        elif isinstance(g, Box):
            r = all(go(s, g.child) for s in t.succs)
        elif isinstance(g, Diamond):
            r = any(go(s, g.child) for s in t.succs)
        else:
            raise ValidationError(f"not a formula node: {g!r}")
        memo[key] = r
        return r

    return go(t, f)


def characteristic_formula(t: BehaviorType) -> Formula:
    """A formula whose truth set in any model is exactly the states of
    behavior `t`: the valuation literals, a diamond per successor type and
    a box over their disjunction (box-false when there are none)."""
    memo: dict[int, Formula] = {}

    def chi(t: BehaviorType) -> Formula:
        cached = memo.get(id(t))
        if cached is not None:
            return cached
        literals: list[Formula] = [
            Atom(p) if p in t.val else Not(Atom(p)) for p in sorted(t.atoms)
        ]
        if t.depth == 0:
            out = conj(literals)
        else:
            parts = literals + [Diamond(chi(s)) for s in t.succs]
            parts.append(Box(disj([chi(s) for s in t.succs])))
            out = conj(parts)
        memo[id(t)] = out
        return out

    return chi(t)


def project(t: BehaviorType) -> BehaviorType:
    """Drop one level of successor detail: the canonical Z_{d+1} -> Z_d map."""
    if t.depth == 0:
        raise ValidationError("depth-0 types have no projection")
    memo: dict[int, BehaviorType] = {}

    def go(t: BehaviorType) -> BehaviorType:
        cached = memo.get(id(t))
        if cached is not None:
            return cached
        if t.depth == 1:
            out = behavior_type(t.atoms, 0, t.val)
        else:
            out = behavior_type(t.atoms, t.depth - 1, t.val, {go(s) for s in t.succs})
        memo[id(t)] = out
        return out

    return go(t)


def one_step_coherent(m: KripkeModel, assignment: Mapping[str, BehaviorType]) -> bool:
    """Whether an assignment of equal-depth types unfolds the model by one
    step: valuations match, and the successor component equals the
    projected types of the actual successors."""
    depths = {assignment[x].depth for x in m.states}
    if len(depths) > 1:
        raise ValidationError("assignment mixes depths")
    for x in m.states:
        t = assignment[x]
        if t.val != m.valuation(x) & t.atoms:
            return False
        if t.depth >= 1:
            expected = frozenset(project(assignment[y]) for y in m.successors(x))
            if frozenset(t.succs) != expected:
                return False
    return True


def terminal_uniqueness_check(m: KripkeModel, depth: int) -> CheckResult:
    """Two executable facets of terminality at bounded depth.

    (a) unfolding: the successor component of each depth-(d+1) behavior is
    exactly the set of depth-d behaviors of the actual successors;
    (b) separation: distinct behaviors realized at each depth <= d are told
    apart by a characteristic formula of that depth.
    """
    beh: list[dict[str, BehaviorType]] = [behavior_map(m, d) for d in range(depth + 2)]

    bad = None
    for d in range(depth + 1):
        for x in m.states:
            succ_types = frozenset(beh[d][y] for y in m.successors(x))
            if frozenset(beh[d + 1][x].succs) != succ_types:
                bad = {"state": x, "depth": d + 1}
                break
        if bad:
            break
    unfold = CheckResult("one-step-unfolding", bad is None, bad)

    bad = None
    for d in range(depth + 1):
        realized = sorted(set(beh[d].values()), key=BehaviorType.sort_key)
        for i, t1 in enumerate(realized):
            chi = characteristic_formula(t1)
            if not type_satisfies(t1, chi):
                bad = {"depth": d, "type": type_to_json(t1), "reason": "fails own formula"}
                break
            for t2 in realized[i + 1:]:
                if type_satisfies(t2, chi):
                    bad = {
                        "depth": d,
                        "type": type_to_json(t1),
                        "other": type_to_json(t2),
                        "reason": "not separated",
                    }
                    break
            if bad:
                break
        if bad:
            break
    separate = CheckResult("type-separation", bad is None, bad)

    return all_pass("terminal-uniqueness", [unfold, separate],
                    info={"depth": depth, "states": m.n})


def stable_behavior_relation(a: KripkeModel, b: KripkeModel) -> tuple[Relation, int]:
    """Cross-model pairs with equal behavior at the stabilization depth.

    Behavior kernels on the disjoint union of states refine as the depth
    grows and stop changing after at most |X_a| + |X_b| steps; the
    returned depth is the first stable one.  Both models are typed over
    the union of their fragments so the comparison is meaningful.
    """
    fragment = frozenset(a.atoms) | frozenset(b.atoms)
    cur_a = {x: behavior_type(fragment, 0, a.valuation(x)) for x in a.states}
    cur_b = {y: behavior_type(fragment, 0, b.valuation(y)) for y in b.states}

    def signature() -> tuple[int, ...]:
        # canonical numbering of the kernel partition over both state sets;
        # types of adjacent depths are distinct objects, so partitions are
        # compared through this numbering
        table: dict[BehaviorType, int] = {}
        joint = [cur_a[x] for x in a.states] + [cur_b[y] for y in b.states]
        return tuple(table.setdefault(t, len(table)) for t in joint)

    depth = 0
    prev_sig = signature()
    limit = a.n + b.n + 1
    while depth < limit:
        depth += 1
        cur_a = {
            x: behavior_type(fragment, depth, a.valuation(x), {cur_a[y] for y in a.successors(x)})
            for x in a.states
        }
        cur_b = {
            y: behavior_type(fragment, depth, b.valuation(y), {cur_b[z] for z in b.successors(y)})
            for y in b.states
        }
        sig = signature()
        if sig == prev_sig:
            pairs = frozenset(
                (x, y) for x in a.states for y in b.states if cur_a[x] == cur_b[y]
            )
            return Relation(a, b, pairs), depth - 1
        prev_sig = sig
    # unreachable: a partition over n_a + n_b points cannot refine forever
    pairs = frozenset((x, y) for x in a.states for y in b.states if cur_a[x] == cur_b[y])
    return Relation(a, b, pairs), depth


def type_to_json(t: BehaviorType) -> dict:
    out: dict = {"depth": t.depth, "val": sorted(t.val)}
    if t.depth > 0:
        out["succs"] = [type_to_json(s) for s in t.succs]
    return out
