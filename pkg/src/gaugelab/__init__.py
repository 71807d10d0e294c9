"""gaugelab: a numerical laboratory for classical lattice gauge dynamics.

Evolves abelian and nonabelian gauge fields side by side on a periodic
lattice and measures where the two worlds part ways: superposition defects,
Fourier mode coupling, Lyapunov exponents, and the collapse-time
phenomenology that the nonlinear energy scale implies.
"""

from gaugelab.algebra import (
    SU2,
    SU3,
    U1,
    GaugeGroup,
    GroupKind,
    LieAlgebraElement,
    StructureConstants,
    basis_element,
    commutator,
    gauge_group,
    lie_inner,
    structure_constants,
    zero_element,
)
from gaugelab.analysis import (
    DefectSeries,
    ModeCouplingReport,
    ModeSpectrum,
    ScalingResult,
    defect_scaling,
    mode_coupling,
    mode_spectrum,
    superposition_defect,
)
from gaugelab.chaos import LyapunovEstimate, lyapunov_benettin
from gaugelab.collapse import (
    DEFAULT_CONSTANTS,
    CollapseEstimate,
    PhysicalConstants,
    SystemPreset,
    TableRow,
    coherence_table,
    collapse_time,
    default_presets,
    hit_process,
    lattice_collapse_time,
    load_presets,
    visibility,
)
from gaugelab.errors import (
    BlowupError,
    ConfigError,
    DegeneratePerturbationError,
    EnergyDriftError,
    GaugelabError,
    NumericError,
)
from gaugelab.evolve import (
    MAX_SAFE_DT,
    EvolveParams,
    TrajectorySummary,
    eom_rhs,
    evolve,
    leapfrog_step,
)
from gaugelab.serialize import (
    load_state_binary,
    load_state_text,
    save_state_binary,
    save_state_text,
    state_from_bytes,
    state_to_bytes,
)
from gaugelab.lattice import (
    EnergyReport,
    FieldState,
    FieldStrength,
    InitKind,
    InitSpec,
    LatticeGeometry,
    add_states,
    energy_report,
    field_strength,
    gauss_residual,
    make_state,
    scale_state,
    state_norm,
)

__version__ = "0.1.0"

__all__ = [
    "U1",
    "SU2",
    "SU3",
    "GaugeGroup",
    "GroupKind",
    "LieAlgebraElement",
    "StructureConstants",
    "gauge_group",
    "structure_constants",
    "commutator",
    "lie_inner",
    "zero_element",
    "basis_element",
    "LatticeGeometry",
    "FieldState",
    "FieldStrength",
    "EnergyReport",
    "InitKind",
    "InitSpec",
    "make_state",
    "add_states",
    "scale_state",
    "state_norm",
    "field_strength",
    "gauss_residual",
    "energy_report",
    "MAX_SAFE_DT",
    "EvolveParams",
    "TrajectorySummary",
    "eom_rhs",
    "leapfrog_step",
    "evolve",
    "DefectSeries",
    "ScalingResult",
    "ModeSpectrum",
    "ModeCouplingReport",
    "superposition_defect",
    "defect_scaling",
    "mode_spectrum",
    "mode_coupling",
    "LyapunovEstimate",
    "lyapunov_benettin",
    "PhysicalConstants",
    "DEFAULT_CONSTANTS",
    "SystemPreset",
    "CollapseEstimate",
    "TableRow",
    "collapse_time",
    "lattice_collapse_time",
    "coherence_table",
    "hit_process",
    "visibility",
    "load_presets",
    "default_presets",
    "state_to_bytes",
    "state_from_bytes",
    "save_state_binary",
    "load_state_binary",
    "save_state_text",
    "load_state_text",
    "GaugelabError",
    "ConfigError",
    "NumericError",
    "BlowupError",
    "EnergyDriftError",
    "DegeneratePerturbationError",
]
