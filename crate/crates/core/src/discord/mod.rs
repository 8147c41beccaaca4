//! Correlations of a bipartite state relative to an incoherent basis on A.

pub mod examples;
pub mod measures;
pub mod monotone;
pub mod petz;
pub mod recover;
pub mod zero;

pub use measures::{
    basis_discord, classical_correlations, dephase_a, discord, mutual_information, DiscordReport,
};
pub use monotone::{
    deterministic_monotonicity_trial, ensemble_monotonicity_trial, j_increase_witness, JWitness,
    Quantity, TrialOutcome,
};
pub use petz::{petz_channel, petz_recover, RecoveryChannel};
pub use recover::{
    memory_monotonicity_trial, recoverability, recoverability_with_candidates, MemoryTrial,
    Recoverability, RecoveryBudget,
};
pub use zero::{
    zero_discord_decompose, DecompositionFailure, DiscordBlock, ZeroDiscordDecomposition,
    ZERO_DISCORD_TOL,
};
