//! Self-contained worked examples with expected values.

use serde::Serialize;

use crate::coherence::dilation::{dilation_construct, dilation_verify};
use crate::coherence::random::random_si_channel;
use crate::discord::examples::{coherent_measurement, mixed_example, mixing_channel, qutrit_qubit_example};
use crate::discord::measures::basis_discord;
use crate::discord::monotone::j_increase_witness;
use crate::discord::petz::petz_recover;
use crate::discord::zero::{zero_discord_decompose, ZERO_DISCORD_TOL};
use crate::error::Result;
use crate::linalg::basis::Basis;
use crate::linalg::info::trace_distance;
use crate::linalg::random::Sampler;
use crate::universal::{depolarizing_channel, depolarizing_choi, p_range};

/// Created discord of the mixed example, in bits.
pub const CREATED_DISCORD: f64 = 0.1887;
pub const CREATED_DISCORD_TOL: f64 = 5e-4;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Case {
    DeltaCreation,
    ZeroDelta,
    DilationRoundtrip,
    JWitness,
    DepolarizingBoundary,
}

impl Case {
    pub const ALL: [Case; 5] = [
        Case::DeltaCreation,
        Case::ZeroDelta,
        Case::DilationRoundtrip,
        Case::JWitness,
        Case::DepolarizingBoundary,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Case::DeltaCreation => "delta-creation",
            Case::ZeroDelta => "zero-delta",
            Case::DilationRoundtrip => "dilation-roundtrip",
            Case::JWitness => "j-witness",
            Case::DepolarizingBoundary => "depolarizing-boundary",
        }
    }

    pub fn parse(s: &str) -> Option<Case> {
        Case::ALL.into_iter().find(|c| c.name() == s)
    }
}

/// One computed quantity and the condition it must meet.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Check {
    pub quantity: String,
    pub computed: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub expected: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tolerance: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub above: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub below: Option<f64>,
    pub pass: bool,
}

impl Check {
    pub fn near(quantity: &str, computed: f64, expected: f64, tolerance: f64) -> Self {
        Self {
            quantity: quantity.into(),
            computed,
            expected: Some(expected),
            tolerance: Some(tolerance),
            above: None,
            below: None,
            pass: (computed - expected).abs() <= tolerance,
        }
    }

    pub fn above(quantity: &str, computed: f64, bound: f64) -> Self {
        Self {
            quantity: quantity.into(),
            computed,
            expected: None,
            tolerance: None,
            above: Some(bound),
            below: None,
            pass: computed > bound,
        }
    }

    pub fn below(quantity: &str, computed: f64, bound: f64) -> Self {
        Self {
            quantity: quantity.into(),
            computed,
            expected: None,
            tolerance: None,
            above: None,
            below: Some(bound),
            pass: computed < bound,
        }
    }

    fn flag(quantity: &str, holds: bool) -> Self {
        Self::near(quantity, if holds { 1.0 } else { 0.0 }, 1.0, 0.0)
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Reproduction {
    pub case: Case,
    pub checks: Vec<Check>,
    pub pass: bool,
}

pub fn reproduce(case: Case) -> Result<Reproduction> {
    let checks = match case {
        Case::DeltaCreation => delta_creation()?,
        Case::ZeroDelta => zero_delta()?,
        Case::DilationRoundtrip => dilation_roundtrip()?,
        Case::JWitness => witness()?,
        Case::DepolarizingBoundary => depolarizing_boundary()?,
    };
    let pass = checks.iter().all(|c| c.pass);
    Ok(Reproduction { case, checks, pass })
}

fn delta_creation() -> Result<Vec<Check>> {
    let z = Basis::computational(3);
    let before = basis_discord(&qutrit_qubit_example(), &z)?;
    let after = basis_discord(&mixed_example(), &z)?;
    Ok(vec![
        Check::near("delta_before", before.discord, 0.0, 1e-9),
        Check::near("delta_after", after.discord, CREATED_DISCORD, CREATED_DISCORD_TOL),
        Check::near("I_after", after.mutual_information, 0.5, 1e-9),
        Check::flag(
            "mixing_channel_is_si",
            crate::coherence::classify::classify_channel(&mixing_channel(), &z, None, 1e-8)?
                .strictly_incoherent,
        ),
    ])
}

fn zero_delta() -> Result<Vec<Check>> {
    let rho = qutrit_qubit_example();
    let z = Basis::computational(3);
    let report = basis_discord(&rho, &z)?;
    let (_, recovered) = petz_recover(&rho, &z)?;
    let decomposition = zero_discord_decompose(&rho, &z, ZERO_DISCORD_TOL)?;
    Ok(vec![
        Check::near("delta", report.discord, 0.0, 1e-9),
        Check::near("I", report.mutual_information, 1.0, 1e-9),
        Check::below("petz_trace_distance", trace_distance(rho.state(), recovered.state()), 1e-7),
        Check::flag("decomposition_succeeded", decomposition.succeeded()),
        Check::near("blocks", decomposition.blocks.len() as f64, 2.0, 0.0),
    ])
}

fn dilation_roundtrip() -> Result<Vec<Check>> {
    let mut s = Sampler::new(2024);
    let mut checks = Vec::new();
    for (label, d, n) in [("d2_n2", 2, 2), ("d3_n3", 3, 3), ("d4_n4", 4, 4)] {
        let b = s.basis(d);
        let e = random_si_channel(&mut s, d, n, &b);
        let spec = dilation_construct(&e, &b)?;
        checks.push(Check::below(&format!("max_error_{label}"), dilation_verify(&spec, &e, 10, 7)?, 1e-10));
    }
    let z = Basis::computational(3);
    let spec = dilation_construct(&mixing_channel(), &z)?;
    checks.push(Check::below(
        "max_error_mixing_channel",
        dilation_verify(&spec, &mixing_channel(), 10, 7)?,
        1e-10,
    ));
    Ok(checks)
}

fn witness() -> Result<Vec<Check>> {
    let w = j_increase_witness(&coherent_measurement(), &Basis::computational(2))?;
    Ok(vec![
        Check::near("J_before", w.j_before, 0.0, 1e-10),
        Check::above("J_after", w.j_after, 1e-4),
        Check::near("tau", w.tau.norm(), 0.5, 1e-12),
    ])
}

fn depolarizing_boundary() -> Result<Vec<Check>> {
    let (lo, hi) = p_range(2);
    let mut checks = vec![
        Check::near("p_min_d2", lo, -1.0 / 3.0, 0.0),
        Check::near("p_max_d2", hi, 1.0, 0.0),
    ];
    for d in 2..=4 {
        let lo = p_range(d).0;
        let at = depolarizing_channel(d, lo, &Basis::computational(d))?.choi().min_eigenvalue();
        checks.push(Check::near(&format!("choi_min_at_boundary_d{d}"), at, 0.0, 1e-10));
        let outside = depolarizing_choi(d, lo - 1e-3).min_eigenvalue();
        checks.push(Check::below(&format!("choi_min_outside_d{d}"), outside, -1e-5));
    }
    Ok(checks)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_case_passes() {
        for c in Case::ALL {
            let r = reproduce(c).unwrap();
            assert!(r.pass, "{}: {:?}", c.name(), r.checks);
            assert_eq!(Case::parse(c.name()), Some(c));
        }
    }
}
