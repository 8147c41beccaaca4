//! Basis-dependent structure: dephasing, the incoherent operation hierarchy,
//! ancilla dilations and single-system coherence measures.

pub mod classify;
pub mod dilation;
pub mod measures;
pub mod random;

pub use classify::{
    classify_channel, classify_kraus, dephase, dephasing_commutator, incoherent_output_deviation,
    ClassificationReport, KrausSymbolicForm, DEFAULT_TOL,
};
pub use dilation::{dilation_construct, dilation_outputs, dilation_verify, DilationSpec};
pub use measures::{
    coherence_measures, dephased_distance_coherence, fidelity_of_coherence, rel_ent_coherence,
    CoherenceMeasures,
};
pub use random::{random_gi_channel, random_incoherent_non_si_channel, random_si_channel};
