"""Exact model checking on the infinite chain and its loop extension.

Two structures are supported.  `chain`: a root with an edge to every
rung s_0, s_1, ..., plus backward edges s_{i+1} -> s_i; the rung s_0 has
no successors.  `extended`: the same plus a loop state with a self-loop,
also reachable from the root.  All valuations are empty, so only closed
formulas are evaluated.

Truth of any closed formula along the rungs is eventually constant, so a
finite prefix plus a tail bit represents it exactly; no truncation is
involved anywhere in this module.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Literal

from .errors import ValidationError
from .formula import (
    And,
    Atom,
    Bot,
    Box,
    Diamond,
    Formula,
    Not,
    Or,
    Top,
    BOT,
    disj,
    to_text,
)
from .kripke import KripkeModel
from .report import CheckResult

__all__ = [
    "LadderValue", "ladder_eval", "nonsaturation_witness_chain",
    "saturation_check_extended", "truncated_chain", "box_power",
    "CHAIN", "EXTENDED",
]

CHAIN = "chain"
EXTENDED = "extended"

Which = Literal["chain", "extended"]


@dataclass(frozen=True)
class LadderValue:
    """Exact truth of one closed formula everywhere in a ladder structure.

    `prefix[i]` is the truth at rung s_i; from index len(prefix) on, the
    truth is constantly `tail` (the prefix is trimmed so its last entry
    differs from `tail`).  `at_root` is the truth at the root and
    `at_inf` the truth at the loop state (None for the plain chain).
    """

    prefix: tuple[bool, ...]
    tail: bool
    at_root: bool
    at_inf: bool | None

    def at(self, i: int) -> bool:
        """Truth at rung s_i."""
        return self.prefix[i] if i < len(self.prefix) else self.tail


def _make(prefix: Iterable[bool], tail: bool, at_root: bool, at_inf: bool | None) -> LadderValue:
    prefix = list(prefix)
    while prefix and prefix[-1] == tail:
        prefix.pop()
    return LadderValue(tuple(prefix), tail, at_root, at_inf)


def _check_which(which: str) -> bool:
    if which == CHAIN:
        return False
    if which == EXTENDED:
        return True
    raise ValidationError(f"unknown structure {which!r}; expected 'chain' or 'extended'")


def ladder_eval(which: Which, f: Formula) -> LadderValue:
    """Exact truth of a closed formula at every state of the structure.

    Boolean connectives act pointwise on the representation.  A box at
    rung s_{i+1} reads its argument at s_i, is vacuously true at s_0, and
    at the loop state coincides with its argument; at the root it
    quantifies over every rung (and the loop state when present).
    Diamonds are dual.  Formulas containing atoms are rejected.
    """
    ext = _check_which(which)
    memo: dict[int, LadderValue] = {}

    def go(g: Formula) -> LadderValue:
        cached = memo.get(id(g))
        if cached is not None:
            return cached
        if isinstance(g, Atom):
            raise ValidationError(
                f"the ladder structures have empty valuations; atom {g.name!r} not allowed"
            )
        if isinstance(g, Top):
            r = _make((), True, True, True if ext else None)
        elif isinstance(g, Bot):
            r = _make((), False, False, False if ext else None)
        elif isinstance(g, Not):
            v = go(g.child)
            r = _make(
                (not p for p in v.prefix), not v.tail, not v.at_root,
                None if v.at_inf is None else not v.at_inf,
            )
        elif isinstance(g, And) or isinstance(g, Or):
            l, rgt = go(g.left), go(g.right)
            width = max(len(l.prefix), len(rgt.prefix))
            if isinstance(g, And):
                r = _make(
                    (l.at(i) and rgt.at(i) for i in range(width)),
                    l.tail and rgt.tail,
                    l.at_root and rgt.at_root,
                    None if not ext else (l.at_inf and rgt.at_inf),
                )
            else:
                r = _make(
                    (l.at(i) or rgt.at(i) for i in range(width)),
                    l.tail or rgt.tail,
                    l.at_root or rgt.at_root,
                    None if not ext else (l.at_inf or rgt.at_inf),
                )
        elif isinstance(g, Box):
            v = go(g.child)
            rungs = [True] + [v.at(i) for i in range(len(v.prefix) + 1)]
            root = all(v.prefix) and v.tail and (v.at_inf if ext else True)
            r = _make(rungs, v.tail, root, v.at_inf if ext else None)
        elif isinstance(g, Diamond):
            v = go(g.child)
            rungs = [False] + [v.at(i) for i in range(len(v.prefix) + 1)]
            root = any(v.prefix) or v.tail or (bool(v.at_inf) if ext else False)
            r = _make(rungs, v.tail, root, v.at_inf if ext else None)
        else:
            raise ValidationError(f"not a formula node: {g!r}")
        memo[id(g)] = r
        return r

    return go(f)


def box_power(n: int) -> Formula:
    """n nested boxes over false; true exactly at rungs s_i with i <= n - 1."""
    f: Formula = BOT
    for _ in range(n):
        f = Box(f)
    return f


def truncated_chain(n: int, extended: bool = False) -> KripkeModel:
    """Finite cut-off of a ladder structure, for cross-checks against the
    generic evaluator: root `s`, rungs `s0`..`s{n-1}`, and with `extended`
    the loop state `sinf`."""
    states = ["s"] + [f"s{i}" for i in range(n)] + (["sinf"] if extended else [])
    rel = [("s", f"s{i}") for i in range(n)]
    rel += [(f"s{i + 1}", f"s{i}") for i in range(n - 1)]
    if extended:
        rel.append(("s", "sinf"))
        rel.append(("sinf", "sinf"))
    return KripkeModel(states=states, rel=rel, val={}, atoms=())


def nonsaturation_witness_chain(max_index: int = 8) -> CheckResult:
    """The chain's failure of saturation at the root, made executable.

    Part (a): every rung s_i satisfies the member with index i of the
    parametric family box^{i+1} false (checked structurally on the
    computed values for i <= max_index + 1).  Part (b): for every subset
    I of {0..max_index}, some rung falsifies the finite disjunction of
    the corresponding members, so no finite subfamily works at the root.
    """
    member_values = {}
    covered_own_index = True
    for i in range(max_index + 2):
        v = ladder_eval(CHAIN, box_power(i + 1))
        member_values[i] = v
        # the value is True exactly on rungs 0..i
        if v.prefix != (True,) * (i + 1) or v.tail or not v.at(i):
            covered_own_index = False

    details = []
    all_witnessed = True
    for mask in range(1 << (max_index + 1)):
        chosen = [i for i in range(max_index + 1) if mask >> i & 1]
        d = disj([box_power(i + 1) for i in chosen])
        v = ladder_eval(CHAIN, d)
        witness = None
        j = 0
        while witness is None:
            if not v.at(j):
                witness = j
                break
            if j >= len(v.prefix) and v.tail:
                break  # disjunction is cofinally true; no witness exists
            j += 1
        if witness is None:
            all_witnessed = False
            details.append({"family_indices": chosen, "witness": None})
        else:
            details.append({"family_indices": chosen, "witness": f"s{witness}"})

    passed = covered_own_index and all_witnessed
    return CheckResult(
        "chain-not-saturated-at-root",
        passed=passed,
        witness=None if passed else {"reason": "expected witness missing"},
        info={
            "root_satisfies_infinite_family": covered_own_index,
            "subsets_checked": 1 << (max_index + 1),
            "finite_subfamilies": details,
        },
    )


def saturation_check_extended(
    family: list[Formula], plus_param: bool = False
) -> CheckResult:
    """Decide box-of-family coverage at the extended structure's root and,
    when it holds, output a finite subfamily that already covers.

    Coverage means every successor of the root (all rungs plus the loop
    state) satisfies some member.  With `plus_param` the family is
    extended by the parametric members box^{i+1} false, which cover each
    rung individually but never the loop state.  The returned subfamily
    follows the finite-subcover recipe: one member true at the loop state
    covers a cofinite tail of rungs, finitely many members cover the rest.
    """
    values = [ladder_eval(EXTENDED, f) for f in family]

    inf_idx = None
    for k, v in enumerate(values):
        if v.at_inf:
            inf_idx = k
            break
    if inf_idx is None:
        return CheckResult(
            "extended-box-coverage",
            passed=False,
            witness={"state": "sinf", "reason": "no member holds at the loop state"},
            info={"family": [to_text(f) for f in family], "plus_param": plus_param},
        )

    # truth at the loop state forces an eventually-true tail along the rungs
    tail_start = len(values[inf_idx].prefix)
    horizon = max([len(v.prefix) for v in values] + [tail_start])
    picks: list[dict] = []
    for j in range(horizon):
        if j >= tail_start and values[inf_idx].at(j):
            continue
        explicit = next((k for k, v in enumerate(values) if v.at(j)), None)
        if explicit is not None:
            picks.append({"kind": "member", "index": explicit})
        elif plus_param:
            picks.append({"kind": "parametric", "power": j + 1})
        else:
            return CheckResult(
                "extended-box-coverage",
                passed=False,
                witness={"state": f"s{j}", "reason": "rung covered by no member"},
                info={"family": [to_text(f) for f in family], "plus_param": plus_param},
            )
    picks.append({"kind": "member", "index": inf_idx})
    dedup = []
    for p in picks:
        if p not in dedup:
            dedup.append(p)

    # re-verify: the finite disjunction of the chosen members covers
    chosen_formulas = [
        family[p["index"]] if p["kind"] == "member" else box_power(p["power"])
        for p in dedup
    ]
    d = ladder_eval(EXTENDED, disj(chosen_formulas))
    verified = all(d.prefix) and d.tail and bool(d.at_inf)

    return CheckResult(
        "extended-box-coverage",
        passed=verified,
        witness=None if verified else {"reason": "chosen subfamily does not cover"},
        info={
            "family": [to_text(f) for f in family],
            "plus_param": plus_param,
            "subfamily": dedup,
            "subfamily_verified": verified,
        },
    )
