//! Independent Fock-space oracle for the scissor circuit.

pub mod oracle;
pub mod state;
pub mod transform;

pub use oracle::{
    apply_interferometer, build_input, cm_min_cutoff, oracle_cm, oracle_conditional_state, oracle_state,
    oracle_state_branch, oracle_thermal_state, project_success, Detector, Herald, InputKind, OracleQubit,
    DEFAULT_CUTOFF, DEFAULT_P_NODES,
};
pub use state::{FockState, ModeInput, Occupation, PureComponent, MAX_MODES, TAIL_BOUND};
pub use transform::{BeamSplitter, ModeTransform};
