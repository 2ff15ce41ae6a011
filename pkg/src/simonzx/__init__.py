"""Simon-oracle synthesis, ZX rewriting to cluster-state form, and
brute-force verification at desk scale."""

from .bits import (
    BitString,
    Characteristic,
    FunctionTable,
    Gate,
    PeriodReport,
    characteristic_of_function,
    characteristic_of_gate,
    find_period,
    gf2_solve_period,
)
from .synth import GateList, factorize, leader_table, synthesize_oracle
from .statevec import Circuit, run_simon_protocol, run_state, working_outcome_distribution
from .zx import ZxDiagram, eval_tensor, proportional, verify_adaptive_cnot
from .mbqc import (
    MeasurementPattern,
    OracleSettings,
    build_raw_translation,
    extract_pattern,
    instantiate,
    mbqc_outcome_distribution,
    simplify_adaptive,
    simplify_to_mbqc,
    simulate_pattern,
)
from .topology import ClusterTopology, topology

__version__ = "0.1.0"

__all__ = [
    "BitString",
    "Characteristic",
    "FunctionTable",
    "Gate",
    "PeriodReport",
    "characteristic_of_function",
    "characteristic_of_gate",
    "find_period",
    "gf2_solve_period",
    "GateList",
    "factorize",
    "leader_table",
    "synthesize_oracle",
    "Circuit",
    "run_simon_protocol",
    "run_state",
    "working_outcome_distribution",
    "ZxDiagram",
    "eval_tensor",
    "proportional",
    "verify_adaptive_cnot",
    "MeasurementPattern",
    "OracleSettings",
    "build_raw_translation",
    "extract_pattern",
    "instantiate",
    "mbqc_outcome_distribution",
    "simplify_adaptive",
    "simplify_to_mbqc",
    "simulate_pattern",
    "ClusterTopology",
    "topology",
]
