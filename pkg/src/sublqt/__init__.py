"""Distributed suboptimal LQ tracking control for leader-follower networks."""

from .costsim import (
    ClosedLoop,
    Trajectory,
    build_closed_loop,
    consensus_reached,
    exact_cost,
    mode_decompose,
    simulate,
)
from .design import (
    AgentModel,
    CaseBCoefficient,
    CaseTag,
    CostSpec,
    DesignCertificate,
    DesignRequest,
    check_initial_condition,
    classify_c,
    default_c,
    synthesize,
    verify_certificate,
)
from .graph import GammaSpectrum, NetworkSpec, gamma_spectrum, laplacian
from .riccati import AreProblem, AreSolution, solve_are

__version__ = "0.1.0"
