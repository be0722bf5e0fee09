"""Universal trees, separating automata and universal graphs for parity games,
with the size-preserving constructions between them and solvers that use them.
"""

from .errors import BudgetExceeded, IncompatiblePriorities, ParseError, PreconditionError
from .graphs import (
    Path,
    PriorityGraph,
    compose,
    count_graphs,
    enumerate_graphs,
    find_homomorphism,
    find_odd_cycle,
    is_homomorphism,
    random_graph,
    random_parity_graph,
    satisfies_parity,
)
from .trees import (
    OrderedTree,
    complete_universal_tree,
    count_trees,
    embeds,
    enumerate_trees,
    graph_of_tree,
    is_tree_like,
    is_universal_tree,
    maximal_parity_graphs,
    minimal_universal_tree,
    tree_of_graph,
)
from .saturation import is_maximal, saturate
from .automata import (
    SafetyAutomaton,
    accepts_all_paths,
    automaton_from_tree,
    graph_of_automaton,
    is_separating,
    language_subset_parity,
    minimal_separating_automaton,
    run_word,
)
from .universal import (
    EquivalenceLedger,
    automaton_homomorphism,
    homomorphism_into_universal,
    is_universal_graph,
    minimal_universal_graph,
    theorem1_ledger,
    universal_graph_from_automaton,
    universal_tree_from_universal_graph,
)
from .games import (
    ADAM,
    EVE,
    ParityGame,
    ParityResult,
    PositionalStrategy,
    product_with_automaton,
    product_with_graph,
    random_game,
    restrict_to_strategy,
    solve_parity_via_automaton,
    solve_parity_via_universal,
    solve_safety,
    strategy_is_winning,
    zielonka,
)

__all__ = [
    "BudgetExceeded",
    "IncompatiblePriorities",
    "ParseError",
    "PreconditionError",
    "Path",
    "PriorityGraph",
    "compose",
    "count_graphs",
    "enumerate_graphs",
    "find_homomorphism",
    "find_odd_cycle",
    "is_homomorphism",
    "random_graph",
    "random_parity_graph",
    "satisfies_parity",
    "OrderedTree",
    "complete_universal_tree",
    "count_trees",
    "embeds",
    "enumerate_trees",
    "graph_of_tree",
    "is_tree_like",
    "is_universal_tree",
    "maximal_parity_graphs",
    "minimal_universal_tree",
    "tree_of_graph",
    "is_maximal",
    "saturate",
    "SafetyAutomaton",
    "accepts_all_paths",
    "automaton_from_tree",
    "graph_of_automaton",
    "is_separating",
    "language_subset_parity",
    "minimal_separating_automaton",
    "run_word",
    "EquivalenceLedger",
    "automaton_homomorphism",
    "homomorphism_into_universal",
    "is_universal_graph",
    "minimal_universal_graph",
    "theorem1_ledger",
    "universal_graph_from_automaton",
    "universal_tree_from_universal_graph",
    "ADAM",
    "EVE",
    "ParityGame",
    "ParityResult",
    "PositionalStrategy",
    "product_with_automaton",
    "product_with_graph",
    "random_game",
    "restrict_to_strategy",
    "solve_parity_via_automaton",
    "solve_parity_via_universal",
    "solve_safety",
    "strategy_is_winning",
    "zielonka",
]

__version__ = "0.1.0"
