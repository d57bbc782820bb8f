"""Round-based lifetime simulator for clustered heterogeneous sensor networks.

Implements WEP (weighted cluster-head election with a greedy chain among the
cluster heads) next to the LEACH, SEP, PEGASIS and direct-transmission
baselines.
"""

from wepsim.model import (
    ConfigError,
    HeterogeneityConfig,
    Node,
    NodeClass,
    Protocol,
    RadioParams,
    RoundLog,
    SimConfig,
    advanced_count,
    total_initial_energy,
    validate_config,
)
from wepsim.engine import RunResult, init_network, run_batch, run_simulation
from wepsim.metrics import RunSummary, aggregate, summarize

__all__ = [
    "ConfigError",
    "HeterogeneityConfig",
    "Node",
    "NodeClass",
    "Protocol",
    "RadioParams",
    "RoundLog",
    "RunResult",
    "RunSummary",
    "SimConfig",
    "advanced_count",
    "aggregate",
    "init_network",
    "run_batch",
    "run_simulation",
    "summarize",
    "total_initial_energy",
    "validate_config",
]

__version__ = "0.1.0"
