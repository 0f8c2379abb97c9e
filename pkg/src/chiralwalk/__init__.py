"""Continuous-time quantum walks on Hermitian adjacency matrices."""

__version__ = "0.1.0"

from .linalg import SpectralDecomposition, eigh, jacobi_eigh  # noqa: E402
from .graphs import GraphSpec, build, cone  # noqa: E402
from .mixing import (  # noqa: E402
    QuantumWalk,
    average_mixing,
    is_local_uniform,
    is_uniform,
    mixing_matrix,
    mixing_time_search,
)
from .quotient import switching_certificate, verify_equitable  # noqa: E402
from .measured import StoppingRuleConfig, monte_carlo, run_trial  # noqa: E402

__all__ = [
    "SpectralDecomposition", "eigh", "jacobi_eigh", "GraphSpec", "build", "cone",
    "QuantumWalk", "average_mixing", "is_local_uniform", "is_uniform", "mixing_matrix",
    "mixing_time_search", "switching_certificate", "verify_equitable",
    "StoppingRuleConfig", "monte_carlo", "run_trial",
]
