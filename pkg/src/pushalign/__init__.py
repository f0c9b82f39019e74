"""Quasi-static pushing-alignment simulator, controller, and benchmark."""

from .baselines import (
    SearchPolicy,
    SpiralParams,
    TrajectoryKind,
    TrajectoryParams,
    execute_spiral,
    generate_trajectory,
    spiral_path,
)
from .contact import (
    FIXTURE_CAPACITY,
    MAX_SUBSTEP,
    TOL_TOUCH,
    ContactState,
    Fixture,
    ForceBalance,
    FrictionParams,
    MotionRegime,
    ResolveResult,
    Scene,
    drive_force,
    enumerate_contacts,
    force_balance_y,
    make_press_balance,
    pushability,
    resist_force,
    resolve_step,
)
from .control import (
    CommandFrame,
    ControllerGains,
    GripperCompliance,
    SelectionMatrix,
    Wrench,
    admittance_update,
    gripper_deflection,
    hybrid_step,
    selection_pair,
)
from .geometry import (
    ContactPatch,
    Polygon,
    Pose,
    Segment,
    penetration,
    pocket_containment_error,
    transform,
)
from .harness import (
    CampaignReport,
    CellStats,
    TrialConfig,
    TrialResult,
    export_trace,
    format_summary,
    make_trial_config,
    phase_labels,
    run_campaign,
    run_trial,
    sample_error,
    write_report,
)
from .scenario import ScenarioBundle, ScenarioError, load_scenario
from .skill import (
    MotionCommand,
    SkillOutcome,
    SkillParams,
    TraceSample,
    build_actions,
    execute_skill,
    inspect,
    settle_press,
)

__version__ = "0.1.0"

__all__ = [
    "CampaignReport", "CellStats", "CommandFrame", "ContactPatch",
    "ContactState", "ControllerGains", "FIXTURE_CAPACITY", "Fixture",
    "ForceBalance", "FrictionParams", "GripperCompliance", "MAX_SUBSTEP",
    "MotionCommand", "MotionRegime", "Polygon", "Pose", "ResolveResult",
    "Scene", "ScenarioBundle", "ScenarioError", "SearchPolicy",
    "SelectionMatrix", "SkillOutcome", "SkillParams", "SpiralParams",
    "TOL_TOUCH", "TraceSample", "TrajectoryKind", "TrajectoryParams",
    "TrialConfig", "TrialResult", "Wrench", "admittance_update",
    "build_actions", "drive_force", "enumerate_contacts", "execute_skill",
    "execute_spiral", "export_trace", "force_balance_y", "format_summary",
    "generate_trajectory", "gripper_deflection", "hybrid_step", "inspect",
    "load_scenario", "make_press_balance", "make_trial_config",
    "penetration", "phase_labels", "pocket_containment_error", "pushability",
    "resist_force", "resolve_step", "run_campaign", "run_trial",
    "sample_error", "selection_pair", "settle_press", "spiral_path",
    "transform", "write_report",
]
