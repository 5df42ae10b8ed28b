"""Sharp constants and extremal sets of Poincare trace inequalities on the unit ball."""

from .geometry import HalfMoonParams, SetMeasures, cap_angle, measures, removed_ball
from .med import MedSolution, c_med, k_med, kmed_sweep, solve
from .mv import LemmaReport, SweepReport, kmv_sweep, lemma_suite
from .quotients import QuotientValue, g_med, q_med, q_mv
from .special import DimensionalConstants, constants, omega, phi, psi

__all__ = [
    "DimensionalConstants",
    "HalfMoonParams",
    "LemmaReport",
    "MedSolution",
    "QuotientValue",
    "SetMeasures",
    "SweepReport",
    "c_med",
    "cap_angle",
    "constants",
    "g_med",
    "k_med",
    "kmed_sweep",
    "kmv_sweep",
    "lemma_suite",
    "measures",
    "omega",
    "phi",
    "psi",
    "q_med",
    "q_mv",
    "removed_ball",
    "solve",
]

__version__ = "0.1.0"
