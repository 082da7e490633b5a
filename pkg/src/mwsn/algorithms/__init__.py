"""Deployment optimizers, energy accounting and the optimality checker."""
from .ccml import bottleneck_candidates, run_bccml, run_ccml
from .checker import SensorCheck, check_necessary_conditions
from .dcml import StepCap, run_dcml, run_lloyd_alpha
from .energy import EnergyBudget, EnergyLedger, achieved_lifetime, movement_energy
from .trace import IterationRecord, IterationTrace, Problem, best_subgraph_distortion, make_record

__all__ = [
    "EnergyBudget",
    "EnergyLedger",
    "IterationRecord",
    "IterationTrace",
    "Problem",
    "SensorCheck",
    "StepCap",
    "achieved_lifetime",
    "best_subgraph_distortion",
    "bottleneck_candidates",
    "check_necessary_conditions",
    "make_record",
    "movement_energy",
    "run_bccml",
    "run_ccml",
    "run_dcml",
    "run_lloyd_alpha",
]
