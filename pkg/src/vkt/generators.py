"""Seeded random and exhaustive instance generation for the check suites."""

from __future__ import annotations

import random
from typing import Iterator, Sequence

from .formula import Atom, And, BOT, Box, Diamond, Formula, Not, Or, TOP
from .kripke import KripkeModel
from .topology import FiniteTopology, TopologicalModel, formula_topology, generate
from .kripke import bisimilarity_partition


def random_model(
    rng: random.Random,
    max_states: int = 6,
    atoms: Sequence[str] = ("p", "q"),
    edge_prob: float = 0.35,
    min_states: int = 1,
) -> KripkeModel:
    n = rng.randint(min_states, max_states)
    states = [f"s{i}" for i in range(n)]
    rel = [
        (x, y) for x in states for y in states if rng.random() < edge_prob
    ]
    val = {x: [p for p in atoms if rng.random() < 0.5] for x in states}
    return KripkeModel(states=states, rel=rel, val=val, atoms=atoms)


def all_models(n_states: int, atoms: Sequence[str]) -> Iterator[KripkeModel]:
    """Every model with exactly `n_states` states over the given fragment."""
    states = [f"s{i}" for i in range(n_states)]
    edges = [(x, y) for x in states for y in states]
    n_val = (1 << len(atoms)) ** n_states
    for rel_mask in range(1 << len(edges)):
        rel = [e for k, e in enumerate(edges) if rel_mask >> k & 1]
        for val_code in range(n_val):
            code = val_code
            val = {}
            for x in states:
                chosen = code % (1 << len(atoms))
                code //= 1 << len(atoms)
                val[x] = [p for i, p in enumerate(atoms) if chosen >> i & 1]
            yield KripkeModel(states=states, rel=rel, val=val, atoms=atoms)


def random_formula(
    rng: random.Random,
    atoms: Sequence[str],
    max_depth: int,
    size_budget: int = 40,
) -> Formula:
    """Random formula with modal depth at most `max_depth`.

    `size_budget` caps the node count so deep nestings stay small.
    With no atoms available the leaves are constants, so the result is
    closed.
    """
    budget = [size_budget]

    def leaf() -> Formula:
        c = rng.randrange(4 if atoms else 2)
        if c == 0:
            return TOP
        if c == 1:
            return BOT
        return Atom(rng.choice(list(atoms)))

    def go(depth: int) -> Formula:
        budget[0] -= 1
        if budget[0] <= 0:
            return leaf()
        c = rng.random()
        if c < 0.28:
            return leaf()
        if c < 0.44:
            return Not(go(depth))
        if c < 0.58:
            return And(go(depth), go(depth))
        if c < 0.72:
            return Or(go(depth), go(depth))
        if depth == 0:
            return leaf()
        if c < 0.86:
            return Box(go(depth - 1))
        return Diamond(go(depth - 1))

    return go(max_depth)


def random_closed_formula(rng: random.Random, max_depth: int, size_budget: int = 40) -> Formula:
    return random_formula(rng, (), max_depth, size_budget)


def random_passing_topmodel(
    rng: random.Random,
    max_states: int = 6,
    atoms: Sequence[str] = ("p",),
) -> TopologicalModel:
    """A topological model satisfying the four structure conditions.

    Draws a random model with its definable-set topology; occasionally
    the valuation is emptied and the relation made total so that the
    indiscrete topology qualifies, which keeps coarse instances in the
    mix.
    """
    style = rng.random()
    if style < 0.15:
        n = rng.randint(1, max_states)
        states = [f"s{i}" for i in range(n)]
        rel = [(x, rng.choice(states)) for x in states]
        m = KripkeModel(states=states, rel=rel, val={}, atoms=())
        if rng.random() < 0.5:
            t = FiniteTopology(states, [[], states])
            return TopologicalModel(model=m, topology=t)
        return formula_topology(m)
    m = random_model(rng, max_states=max_states, atoms=atoms)
    tm = formula_topology(m)
    if style < 0.5:
        return tm
    # try one block merge; keep it only when the conditions survive
    from .topology import check_topological_model

    blocks = list(bisimilarity_partition(m).blocks)
    if len(blocks) >= 2:
        i, j = rng.sample(range(len(blocks)), 2)
        merged = [b for k, b in enumerate(blocks) if k not in (i, j)]
        merged.append(blocks[i] | blocks[j])
        candidate = TopologicalModel(model=m, topology=generate(m.states, merged))
        if check_topological_model(candidate).passed:
            return candidate
    return tm


def random_any_topmodel(
    rng: random.Random,
    max_states: int = 6,
    atoms: Sequence[str] = ("p",),
) -> TopologicalModel:
    """A structurally valid topological model that may or may not satisfy
    the four conditions; used where broken instances are wanted."""
    kind = rng.random()
    if kind < 0.4:
        return random_passing_topmodel(rng, max_states, atoms)
    m = random_model(rng, max_states=max_states, atoms=atoms)
    if kind < 0.55:
        t = FiniteTopology(m.states, [[], m.states])  # indiscrete
    elif kind < 0.7:
        t = generate(m.states, [[x] for x in m.states])  # discrete
    else:
        subbase = []
        for _ in range(rng.randint(1, 3)):
            subbase.append([x for x in m.states if rng.random() < 0.5])
        t = generate(m.states, subbase)
    return TopologicalModel(model=m, topology=t)


def random_substructure(rng: random.Random, m: KripkeModel) -> frozenset[str]:
    """A successor-closed subset: a random seed set plus everything reachable."""
    seed = [x for x in m.states if rng.random() < 0.4]
    out = set(seed)
    frontier = list(seed)
    while frontier:
        x = frontier.pop()
        for y in m.successors(x):
            if y not in out:
                out.add(y)
                frontier.append(y)
    return frozenset(out)
