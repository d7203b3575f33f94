"""Minimax-regret matroid optimization via pairwise preference elicitation.

Element weights are only known to be convex combinations of p attribute
columns.  The toolkit asks a decision maker (simulated or human) which
of two elements outweighs the other, turns each answer into a halfspace
cut of the parametric uncertainty region, and stops once one base is
optimal everywhere in the remaining region or the regret bound drops
below a tolerance.
"""

from .elicitation import (
    ElicitationEngine,
    ElicitationReport,
    RunStatus,
    run,
)
from .matroid import (
    MatroidInstance,
    MatroidKind,
    Sense,
    enumerate_bases,
    greedy_opt_base,
    is_independent,
    rank,
)
from .polytope import (
    UncertaintyPolytope,
    brute_force_vertex_enum,
    cut,
    initial_simplex,
)
from .regret import Choice, EvalContext, SimulatedOracle, exact_mmr, max_regret, regret
from .uncertainty import (
    AttributeMatrix,
    preference_halfspace,
    realize_weights,
    sigma_to_lambda,
)

__version__ = "0.1.0"

__all__ = [
    "AttributeMatrix",
    "Choice",
    "ElicitationEngine",
    "ElicitationReport",
    "EvalContext",
    "MatroidInstance",
    "MatroidKind",
    "RunStatus",
    "Sense",
    "SimulatedOracle",
    "UncertaintyPolytope",
    "brute_force_vertex_enum",
    "cut",
    "enumerate_bases",
    "exact_mmr",
    "greedy_opt_base",
    "initial_simplex",
    "is_independent",
    "max_regret",
    "preference_halfspace",
    "rank",
    "realize_weights",
    "regret",
    "run",
    "sigma_to_lambda",
    "__version__",
]
