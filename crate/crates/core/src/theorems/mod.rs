//! Numerical checks of the structural results about measurement space.

pub mod konrad;
pub mod locc;
pub mod protocol;

pub use konrad::{konrad_single_sided_check, konrad_two_sided_check, Channel, SingleSidedCheck, TwoSidedCheck};
pub use locc::{
    build_dilation, conditional_blocks, fourier_step, run_locc_all_outcomes, run_locc_construction, FourierStep,
    LoccEnsemble, LoccTrace, Party, PartyStep,
};
pub use protocol::{
    check_protocol_equivalence, outcome_table, success_probability_mspace, success_probability_original,
    EquivalenceCheck, OutcomeTable, ProtocolSpec, VerificationPair,
};
