//! Safe multi-party protocols: a declarative program format, exact
//! state-vector simulation with ownership tracking, error probabilities and
//! conditional information loss.

pub mod fixtures;
mod gates;
mod info;
mod input;
mod program;
mod simulate;

pub use gates::{controlled, gate_matrix, multi_controlled_x, or_of_ands, x_power};
pub use info::{
    cleve_profile, coordinate_terms, information_loss, information_terms, subadditivity_profile,
    CleveEntry, IlTerm, InfoLossReport, SubadditivityEntry,
};
pub use input::{InputEntry, PartitionedInput};
pub use program::{
    AnswerSpec, GateKind, GateSpec, PriorEntanglement, ProtocolProgram, QubitRef, RoundSpec,
    ValidationReport, Violation, ViolationKind, MAX_BELL_PAIRS,
};
pub use simulate::{
    error_probability, error_probability_fn, inputs, prior_state, purification_name, simulate,
    simulate_distribution, simulate_loaded, Inputs, SimulationTrace, SIM_MAX_WIDTH,
};

#[cfg(test)]
mod tests;
