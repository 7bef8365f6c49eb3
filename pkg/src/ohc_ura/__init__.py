"""One-hot coded unsourced random access with RF-fingerprint message authentication."""

from .analytics import (
    AnalyticalPoint,
    SolverConfig,
    analyze,
    min_ebn0_for_pupe,
    p_type_a,
    p_type_b,
    p_type_c,
    pupe_analytical,
    q_function,
    regime_transition_dl,
    spoofing_analytical,
    symbol_error_prob,
)
from .channel import ChannelParams, assign_round, derive_params, observe, observe_dense
from .codec import MessagePayload, OneHotCodeword, code_rate, decode_index, encode
from .receiver import Provenance, RecoveredList, RffiModel, recover_round
from .rf import DeviceProfile, DevicePopulation, distort, sample_population
from .simkit import EstimateReport, SystemConfig, estimate, run_round, sweep

__all__ = [
    "AnalyticalPoint", "SolverConfig", "analyze", "min_ebn0_for_pupe", "p_type_a", "p_type_b",
    "p_type_c", "pupe_analytical", "q_function", "regime_transition_dl", "spoofing_analytical",
    "symbol_error_prob", "ChannelParams", "assign_round", "derive_params", "observe", "observe_dense",
    "MessagePayload", "OneHotCodeword", "code_rate", "decode_index", "encode", "Provenance",
    "RecoveredList", "RffiModel", "recover_round", "DeviceProfile", "DevicePopulation", "distort",
    "sample_population", "EstimateReport", "SystemConfig", "estimate", "run_round", "sweep",
]
