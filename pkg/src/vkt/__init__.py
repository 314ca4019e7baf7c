"""Modal logic on finite Kripke structures, finite topologies,
hyperspaces of compact subsets, and bounded canonical models."""

from .formula import (
    Atom, And, Bot, Box, Diamond, Formula, Not, Or, Top, TOP, BOT,
    parse, to_text, to_nnf, modal_depth, atoms_of,
)
from .kripke import (
    KripkeModel, Relation, Partition,
    eval_states, diamond_pre, box_pre,
    is_bisimulation, largest_bisimulation, converse, compose,
    is_homomorphism, quotient, check_saturation_finite,
)
from .topology import (
    FiniteTopology, TopologicalModel, generate, closure, interior, is_clopen,
    check_topological_model, formula_topology,
)
from .vietoris import (
    VietorisSpace, vietoris_space, vietoris_map, structure_map_continuous,
    closed_subcoalgebra_check, closed_bisimulation_check,
)
from .canonical import (
    BehaviorType, FinalLevel, final_level, behavior_map, type_satisfies,
    characteristic_formula, terminal_uniqueness_check,
)
from .ladder import (
    LadderValue, ladder_eval, nonsaturation_witness_chain,
    saturation_check_extended,
)

__version__ = "0.1.0"
