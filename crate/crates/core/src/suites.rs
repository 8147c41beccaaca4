//! Seeded property suites.
//!
//! Trial `t` of a suite run with seed `s` draws everything from
//! `Sampler::for_trial(s, t)`, so a report is the same whatever the number of
//! worker threads. Each trial reduces to an inequality `lhs ≤ rhs` (or an
//! agreement flag) and the inputs are hashed for regression diffs.

use std::time::{Duration, Instant};

use rayon::prelude::*;
use serde::Serialize;

use crate::channels::KrausChannel;
use crate::coherence::dilation::{dilation_construct, dilation_verify};
use crate::coherence::measures::dephased_distance_coherence;
use crate::coherence::random::{random_gi_channel, random_incoherent_non_si_channel, random_si_channel};
use crate::discord::examples::coherent_measurement;
use crate::discord::measures::basis_discord;
use crate::discord::monotone::{
    deterministic_monotonicity_trial, ensemble_monotonicity_trial, j_increase_witness, Quantity,
};
use crate::discord::petz::petz_recover;
use crate::discord::recover::{memory_monotonicity_trial, RecoveryBudget};
use crate::discord::zero::{zero_discord_decompose, ZERO_DISCORD_TOL};
use crate::error::{Error, Result};
use crate::io::inputs_hash;
use crate::linalg::basis::Basis;
use crate::linalg::info::{trace_distance, Metric};
use crate::linalg::matrix::ComplexMatrix;
use crate::linalg::random::Sampler;
use crate::linalg::state::{BipartiteState, DensityMatrix};
use crate::universal::{
    canonical_phase, depolarizing_channel, every_basis_falsifier, is_depolarizing,
    isotropic_decompose, p_range,
};
use crate::zoo::standard_zoo;

/// Slack for `C'_D` monotonicity.
pub const CPRIME_SLACK: f64 = 1e-9;
pub const DELTA_ZERO_TOL: f64 = 1e-8;
pub const PETZ_ZERO_TOL: f64 = 1e-7;
pub const DILATION_TOL: f64 = 1e-10;
pub const WITNESS_BEFORE_TOL: f64 = 1e-10;
pub const WITNESS_AFTER_MIN: f64 = 1e-4;
pub const MEMORY_SLACK: f64 = crate::discord::recover::MEMORY_SLACK;
pub const ROUND_TRIP_TOL: f64 = 1e-9;
pub const ZOO_BASES: usize = 200;
pub const FALSIFIER_TOL: f64 = 1e-8;
pub const UNITARY_MATCH_TOL: f64 = 1e-8;
/// One in this many equivalence trials is a planted zero-discord state.
pub const PLANTED_EVERY: usize = 5;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Suite {
    CprimeMonotone,
    JEnsemble,
    DeltaEnsemble,
    GiDeterministic,
    DilationRoundtrip,
    ZeroDeltaEquivalence,
    JWitness,
    RecoverMemory,
    DepolarizingRoundtrip,
    ZooConsistency,
}

impl Suite {
    pub const ALL: [Suite; 10] = [
        Suite::CprimeMonotone,
        Suite::JEnsemble,
        Suite::DeltaEnsemble,
        Suite::GiDeterministic,
        Suite::DilationRoundtrip,
        Suite::ZeroDeltaEquivalence,
        Suite::JWitness,
        Suite::RecoverMemory,
        Suite::DepolarizingRoundtrip,
        Suite::ZooConsistency,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::CprimeMonotone => "cprime-monotone",
            Suite::JEnsemble => "j-ensemble",
            Suite::DeltaEnsemble => "delta-ensemble",
            Suite::GiDeterministic => "gi-deterministic",
            Suite::DilationRoundtrip => "dilation-roundtrip",
            Suite::ZeroDeltaEquivalence => "zero-delta-equivalence",
            Suite::JWitness => "j-witness",
            Suite::RecoverMemory => "recover-memory",
            Suite::DepolarizingRoundtrip => "depolarizing-roundtrip",
            Suite::ZooConsistency => "zoo-consistency",
        }
    }

    pub fn parse(s: &str) -> Option<Suite> {
        Suite::ALL.into_iter().find(|x| x.name() == s)
    }

    pub fn default_trials(self) -> usize {
        match self {
            Suite::CprimeMonotone | Suite::JEnsemble | Suite::DeltaEnsemble => 1000,
            Suite::GiDeterministic | Suite::ZeroDeltaEquivalence => 500,
            Suite::DilationRoundtrip | Suite::RecoverMemory => 200,
            Suite::JWitness => 51,
            Suite::DepolarizingRoundtrip => 100,
            Suite::ZooConsistency => 50,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SuiteOptions {
    pub trials: usize,
    pub seed: u64,
    pub jobs: usize,
    /// Distance used by `recover-memory`.
    pub metric: Metric,
    /// Restarts of the recoverability optimizer in `recover-memory`.
    pub restarts: usize,
}

impl SuiteOptions {
    pub fn new(suite: Suite, seed: u64) -> Self {
        Self {
            trials: suite.default_trials(),
            seed,
            jobs: 1,
            metric: Metric::Trace,
            restarts: 4,
        }
    }

    fn before_budget(&self, trial: usize) -> RecoveryBudget {
        RecoveryBudget {
            restarts: self.restarts,
            max_iters: 1000,
            ancilla_dim: None,
            seed: self.seed ^ (trial as u64).wrapping_mul(0x9e37_79b9),
        }
    }

    fn after_budget(&self, trial: usize) -> RecoveryBudget {
        RecoveryBudget {
            restarts: 1,
            max_iters: 300,
            ancilla_dim: Some(2),
            seed: self.seed ^ (trial as u64).wrapping_mul(0x85eb_ca6b),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TrialRecord {
    pub trial: usize,
    pub seed: u64,
    pub inputs_hash: String,
    pub lhs: f64,
    pub rhs: f64,
    pub pass: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SuiteFailure {
    pub trial: usize,
    pub inputs_hash: String,
    pub lhs: f64,
    pub rhs: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct SuiteReport {
    pub suite: Suite,
    pub seed: u64,
    pub trials: usize,
    pub failures: Vec<SuiteFailure>,
    /// Kept out of the JSON so reports diff cleanly.
    #[serde(skip)]
    pub wall_time: Duration,
    #[serde(skip)]
    pub records: Vec<TrialRecord>,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

pub fn run_suite(suite: Suite, opts: &SuiteOptions) -> Result<SuiteReport> {
    let start = Instant::now();
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(opts.jobs.max(1))
        .build()
        .map_err(|e| Error::Invalid(e.to_string()))?;
    let records: Vec<TrialRecord> = pool.install(|| {
        (0..opts.trials)
            .into_par_iter()
            .map(|t| run_trial(suite, t, opts))
            .collect::<Result<_>>()
    })?;
    let failures = records
        .iter()
        .filter(|r| !r.pass)
        .map(|r| SuiteFailure {
            trial: r.trial,
            inputs_hash: r.inputs_hash.clone(),
            lhs: r.lhs,
            rhs: r.rhs,
        })
        .collect();
    Ok(SuiteReport {
        suite,
        seed: opts.seed,
        trials: opts.trials,
        failures,
        wall_time: start.elapsed(),
        records,
    })
}

struct Outcome {
    hash: String,
    lhs: f64,
    rhs: f64,
    pass: bool,
}

impl Outcome {
    fn inequality(hash: String, lhs: f64, rhs: f64, slack: f64) -> Self {
        Self {
            hash,
            lhs,
            rhs,
            pass: lhs <= rhs + slack,
        }
    }
}

pub fn run_trial(suite: Suite, trial: usize, opts: &SuiteOptions) -> Result<TrialRecord> {
    let mut s = Sampler::for_trial(opts.seed, trial as u64);
    let o = match suite {
        Suite::CprimeMonotone => cprime_trial(&mut s, trial)?,
        Suite::JEnsemble => ensemble_trial(&mut s, trial, Quantity::ClassicalCorrelations)?,
        Suite::DeltaEnsemble => ensemble_trial(&mut s, trial, Quantity::Discord)?,
        Suite::GiDeterministic => gi_trial(&mut s, trial)?,
        Suite::DilationRoundtrip => dilation_trial(&mut s, trial)?,
        Suite::ZeroDeltaEquivalence => equivalence_trial(&mut s, trial)?,
        Suite::JWitness => witness_trial(&mut s, trial)?,
        Suite::RecoverMemory => memory_trial(&mut s, trial, opts)?,
        Suite::DepolarizingRoundtrip => depolarizing_trial(&mut s, trial)?,
        Suite::ZooConsistency => zoo_trial(trial, opts.seed)?,
    };
    Ok(TrialRecord {
        trial,
        seed: opts.seed,
        inputs_hash: o.hash,
        lhs: o.lhs,
        rhs: o.rhs,
        pass: o.pass,
    })
}

fn random_bipartite(s: &mut Sampler, da: usize, db: usize) -> BipartiteState {
    BipartiteState::new(da, db, s.density_matrix(da * db)).expect("sampled dims agree")
}

fn cprime_trial(s: &mut Sampler, trial: usize) -> Result<Outcome> {
    let d = 2 + trial % 3;
    let rho = s.density_matrix(d);
    let b = s.basis(d);
    let n = 1 + s.index(4);
    let e = random_si_channel(s, d, n, &b);
    let out = e.apply(&rho)?;
    // report the metric closest to violation
    let mut worst: Option<(f64, f64)> = None;
    for m in Metric::ALL {
        let lhs = dephased_distance_coherence(&out, &b, m)?;
        let rhs = dephased_distance_coherence(&rho, &b, m)?;
        if worst.is_none_or(|(l, r)| lhs - rhs > l - r) {
            worst = Some((lhs, rhs));
        }
    }
    let (lhs, rhs) = worst.expect("three metrics");
    Ok(Outcome::inequality(inputs_hash(&(&rho, &b, &e)), lhs, rhs, CPRIME_SLACK))
}

fn bipartite_dims(trial: usize) -> (usize, usize) {
    (2 + trial % 2, 2 + (trial / 2) % 2)
}

fn ensemble_trial(s: &mut Sampler, trial: usize, q: Quantity) -> Result<Outcome> {
    let (da, db) = bipartite_dims(trial);
    let rho = random_bipartite(s, da, db);
    let b = s.basis(da);
    let n = 1 + s.index(4);
    let e = random_si_channel(s, da, n, &b);
    let t = ensemble_monotonicity_trial(q, &rho, &e, &b)?;
    Ok(Outcome {
        hash: inputs_hash(&(&rho, &b, &e)),
        lhs: t.lhs,
        rhs: t.rhs,
        pass: t.pass,
    })
}

fn gi_trial(s: &mut Sampler, trial: usize) -> Result<Outcome> {
    let (da, db) = bipartite_dims(trial);
    let rho = random_bipartite(s, da, db);
    let b = s.basis(da);
    let n = 1 + s.index(4);
    let e = random_gi_channel(s, da, n, &b);
    let t = deterministic_monotonicity_trial(Quantity::Discord, &rho, &e, &b)?;
    Ok(Outcome {
        hash: inputs_hash(&(&rho, &b, &e)),
        lhs: t.lhs,
        rhs: t.rhs,
        pass: t.pass,
    })
}

fn dilation_trial(s: &mut Sampler, trial: usize) -> Result<Outcome> {
    let d = 2 + trial % 3;
    let n = 1 + s.index(4);
    let b = s.basis(d);
    let e = random_si_channel(s, d, n, &b);
    let spec = dilation_construct(&e, &b)?;
    let state_seed = s.index(1 << 30) as u64;
    let err = dilation_verify(&spec, &e, 5, state_seed)?;
    Ok(Outcome::inequality(inputs_hash(&(&b, &e, state_seed)), err, DILATION_TOL, 0.0))
}

/// `Σ_α p_α ρ_A^α ⊗ ρ_B^α` with the `ρ_A^α` supported on a random partition
/// of the basis `b`.
pub fn planted_zero_discord(s: &mut Sampler, da: usize, db: usize, b: &Basis) -> BipartiteState {
    let order = s.permutation(da);
    let n_blocks = 1 + s.index(da);
    let mut cuts: Vec<usize> = s.permutation(da - 1).into_iter().take(n_blocks - 1).map(|c| c + 1).collect();
    cuts.sort_unstable();
    let mut bounds = vec![0];
    bounds.extend(cuts);
    bounds.push(da);
    let weights: Vec<f64> = (0..n_blocks).map(|_| 0.1 + s.uniform()).collect();
    let total: f64 = weights.iter().sum();
    let mut m = ComplexMatrix::zeros(da * db, da * db);
    for (k, w) in weights.iter().enumerate() {
        let block = &order[bounds[k]..bounds[k + 1]];
        let local = s.density_matrix(block.len());
        let mut a = ComplexMatrix::zeros(da, da);
        for (r, &i) in block.iter().enumerate() {
            for (c, &j) in block.iter().enumerate() {
                a = &a + &b.unit(i, j).scale(local.matrix()[(r, c)]);
            }
        }
        m = &m + &a.kron(s.density_matrix(db).matrix()).scale_real(w / total);
    }
    BipartiteState::new(da, db, DensityMatrix::new(m.hermitian_part()).expect("convex mixture of states"))
        .expect("dims agree")
}

fn equivalence_trial(s: &mut Sampler, trial: usize) -> Result<Outcome> {
    let (da, db) = bipartite_dims(trial / PLANTED_EVERY);
    let b = s.basis(da);
    let rho = if trial % PLANTED_EVERY == 0 {
        planted_zero_discord(s, da, db, &b)
    } else {
        random_bipartite(s, da, db)
    };
    let delta = basis_discord(&rho, &b)?.discord;
    let (_, recovered) = petz_recover(&rho, &b)?;
    let petz = trace_distance(rho.state(), recovered.state());
    let decomposed = zero_discord_decompose(&rho, &b, ZERO_DISCORD_TOL)?.succeeded();
    let zero = delta < DELTA_ZERO_TOL;
    Ok(Outcome {
        hash: inputs_hash(&(&rho, &b)),
        lhs: delta,
        rhs: petz,
        pass: zero == (petz < PETZ_ZERO_TOL) && zero == decomposed,
    })
}

fn witness_trial(s: &mut Sampler, trial: usize) -> Result<Outcome> {
    let (e, b) = if trial == 0 {
        (coherent_measurement(), Basis::computational(2))
    } else {
        let d = 2 + trial % 3;
        let b = s.basis(d);
        (random_incoherent_non_si_channel(s, d, &b), b)
    };
    let w = j_increase_witness(&e, &b)?;
    Ok(Outcome {
        hash: inputs_hash(&(&e, &b)),
        lhs: w.j_before,
        rhs: w.j_after,
        pass: w.j_before.abs() < WITNESS_BEFORE_TOL && w.j_after > WITNESS_AFTER_MIN,
    })
}

fn memory_trial(s: &mut Sampler, trial: usize, opts: &SuiteOptions) -> Result<Outcome> {
    let rho = random_bipartite(s, 2, 2);
    let b = if trial % 2 == 0 { Basis::computational(2) } else { s.basis(2) };
    let n = 1 + s.index(3);
    let e = random_si_channel(s, 2, n, &b);
    let t = memory_monotonicity_trial(
        &rho,
        &e,
        &b,
        opts.metric,
        &opts.before_budget(trial),
        &opts.after_budget(trial),
    )?;
    Ok(Outcome::inequality(inputs_hash(&(&rho, &b, &e)), t.after, t.before, MEMORY_SLACK))
}

fn depolarizing_trial(s: &mut Sampler, trial: usize) -> Result<Outcome> {
    let d = 2 + trial % 3;
    let (lo, hi) = p_range(d);
    let p = s.uniform_in(lo, hi);
    let b = s.basis(d);
    let e = depolarizing_channel(d, p, &b)?;
    let rho = s.density_matrix(d);
    let want = &rho.matrix().scale_real(p) + &ComplexMatrix::identity(d).scale_real((1.0 - p) / d as f64);
    let action_ok = e.apply_matrix(rho.matrix())?.max_abs_diff(&want) < 1e-10;
    let si_ok = crate::coherence::classify::classify_channel(&e, &b, None, crate::coherence::DEFAULT_TOL)?
        .strictly_incoherent;
    let err = is_depolarizing(&e, ROUND_TRIP_TOL).map_or(f64::INFINITY, |q| (q - p).abs());
    Ok(Outcome {
        hash: inputs_hash(&(d, p, &b)),
        lhs: err,
        rhs: ROUND_TRIP_TOL,
        pass: err < ROUND_TRIP_TOL && action_ok && si_ok,
    })
}

/// Agreement of the randomized every-basis check with the exact criterion
/// on one zoo entry, plus recovery of planted isotropic parameters.
pub fn zoo_check(index: usize, seed: u64) -> Result<ZooCheck> {
    let zoo = standard_zoo();
    let entry = &zoo[index % zoo.len()];
    let e: KrausChannel = entry.spec.build()?;
    let falsified = every_basis_falsifier(&e, ZOO_BASES, seed.wrapping_add(index as u64), FALSIFIER_TOL).is_some();
    let depolarizing = is_depolarizing(&e, ROUND_TRIP_TOL);
    let mut planted_error = None;
    if let Some((u, p)) = entry.spec.planted_isotropic() {
        planted_error = Some(match isotropic_decompose(&e, ROUND_TRIP_TOL) {
            Some(r) => (r.unitary.max_abs_diff(&canonical_phase(&u)), (r.p - p).abs()),
            None => (f64::INFINITY, f64::INFINITY),
        });
    }
    Ok(ZooCheck {
        name: entry.name.clone(),
        falsified,
        depolarizing,
        expected_depolarizing: entry.spec.is_depolarizing(),
        planted_error,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct ZooCheck {
    pub name: String,
    pub falsified: bool,
    pub depolarizing: Option<f64>,
    pub expected_depolarizing: bool,
    /// `(‖U_est − e^{iθ}U‖_max, |p_est − p|)` for planted isotropic entries.
    pub planted_error: Option<(f64, f64)>,
}

impl ZooCheck {
    pub fn pass(&self) -> bool {
        let consistent = !self.falsified == self.depolarizing.is_some()
            && self.depolarizing.is_some() == self.expected_depolarizing;
        let planted = self
            .planted_error
            .is_none_or(|(u, p)| u < UNITARY_MATCH_TOL && p < ROUND_TRIP_TOL);
        consistent && planted
    }
}

fn zoo_trial(trial: usize, seed: u64) -> Result<Outcome> {
    let c = zoo_check(trial, seed)?;
    let flag = |x: bool| if x { 1.0 } else { 0.0 };
    Ok(Outcome {
        hash: inputs_hash(&c.name),
        lhs: flag(!c.falsified),
        rhs: flag(c.depolarizing.is_some()),
        pass: c.pass(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small(suite: Suite, trials: usize) -> SuiteReport {
        let opts = SuiteOptions {
            trials,
            ..SuiteOptions::new(suite, 11)
        };
        run_suite(suite, &opts).unwrap()
    }

    #[test]
    fn names_round_trip() {
        for s in Suite::ALL {
            assert_eq!(Suite::parse(s.name()), Some(s));
        }
        assert_eq!(Suite::parse("nope"), None);
    }

    #[test]
    fn quick_runs_pass() {
        for s in Suite::ALL {
            let n = if s == Suite::RecoverMemory { 3 } else { 12 };
            let r = small(s, n);
            assert!(r.passed(), "{}: {:?}", s.name(), r.failures);
            assert_eq!(r.records.len(), n);
        }
    }

    #[test]
    fn reports_do_not_depend_on_jobs() {
        let base = SuiteOptions {
            trials: 20,
            ..SuiteOptions::new(Suite::DeltaEnsemble, 3)
        };
        let one = run_suite(Suite::DeltaEnsemble, &base).unwrap();
        let four = run_suite(Suite::DeltaEnsemble, &SuiteOptions { jobs: 4, ..base }).unwrap();
        assert_eq!(one.records, four.records);
    }

    #[test]
    fn planted_states_have_no_discord() {
        let mut s = Sampler::new(5);
        for da in 2..=3 {
            for _ in 0..20 {
                let b = s.basis(da);
                let rho = planted_zero_discord(&mut s, da, 2, &b);
                assert!(basis_discord(&rho, &b).unwrap().discord.abs() < 1e-9);
            }
        }
    }
}
