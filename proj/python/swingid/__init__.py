"""Swing-leg impedance toolkit.

Planar swing-leg dynamics, joint impedance identification from
force-perturbation responses, gait event detection, and simulation of the
admittance force controller used to deliver the perturbations.
"""

from ._core import (
    BodyModel,
    ControllerParams,
    FeedForward,
    FrfResult,
    GaitEvents,
    IdentOptions,
    IdentResult,
    ImpedanceParams,
    JointVec,
    LoopTraces,
    PlantModel,
    PvaLimits,
    SegmentParams,
    StartReport,
    StepMetrics,
    Trajectory,
    __version__,
    detect_events,
    frf_welch,
    identify,
    inverse_dynamics,
    pva_limit,
    simulate_loop,
    step_metrics,
)

__all__ = [
    "BodyModel",
    "ControllerParams",
    "FeedForward",
    "FrfResult",
    "GaitEvents",
    "IdentOptions",
    "IdentResult",
    "ImpedanceParams",
    "JointVec",
    "LoopTraces",
    "PlantModel",
    "PvaLimits",
    "SegmentParams",
    "StartReport",
    "StepMetrics",
    "Trajectory",
    "__version__",
    "detect_events",
    "frf_welch",
    "identify",
    "inverse_dynamics",
    "pva_limit",
    "simulate_loop",
    "step_metrics",
]
