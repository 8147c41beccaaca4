//! A fixed, seeded collection of named channels used by the every-basis
//! consistency checks. The manifest serializes each entry with the parameters
//! needed to rebuild it.

use serde::{Deserialize, Serialize};

use crate::channels::KrausChannel;
use crate::coherence::random::random_si_channel;
use crate::error::Result;
use crate::linalg::basis::Basis;
use crate::linalg::matrix::{ComplexMatrix, C64};
use crate::linalg::random::Sampler;
use crate::universal::{depolarizing_channel, isotropic_channel};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ChannelSpec {
    /// Kraus operators written in a Haar-random basis drawn from `basis_seed`.
    Depolarizing { d: usize, p: f64, basis_seed: u64 },
    /// `e^{iθ} I`.
    Phase { d: usize, theta: f64 },
    Hadamard,
    /// Haar-random unitary.
    Unitary { d: usize, seed: u64 },
    /// `(1−s)ρ + sΦ(ρ)` in the computational basis.
    Dephasing { d: usize, strength: f64 },
    AmplitudeDamping { gamma: f64 },
    RandomSi { d: usize, n_kraus: usize, seed: u64 },
    /// `p UρU† + (1−p)I/d` with a Haar-random `U`.
    Isotropic { d: usize, p: f64, seed: u64 },
}

impl ChannelSpec {
    pub fn build(&self) -> Result<KrausChannel> {
        match *self {
            ChannelSpec::Depolarizing { d, p, basis_seed } => {
                depolarizing_channel(d, p, &Sampler::new(basis_seed).basis(d))
            }
            ChannelSpec::Phase { d, theta } => {
                KrausChannel::unitary(ComplexMatrix::identity(d).scale(C64::from_polar(1.0, theta)))
            }
            ChannelSpec::Hadamard => {
                let h = std::f64::consts::FRAC_1_SQRT_2;
                KrausChannel::unitary(ComplexMatrix::from_real_rows(&[&[h, h], &[h, -h]]))
            }
            ChannelSpec::Unitary { d, seed } => KrausChannel::unitary(Sampler::new(seed).unitary(d)),
            ChannelSpec::Dephasing { d, strength } => {
                let z = Basis::computational(d);
                let mut kraus = vec![ComplexMatrix::identity(d).scale_real((1.0 - strength).sqrt())];
                kraus.extend((0..d).map(|i| z.projector(i).scale_real(strength.sqrt())));
                KrausChannel::new(d, d, kraus)
            }
            ChannelSpec::AmplitudeDamping { gamma } => KrausChannel::new(
                2,
                2,
                vec![
                    ComplexMatrix::from_real_rows(&[&[1.0, 0.0], &[0.0, (1.0 - gamma).sqrt()]]),
                    ComplexMatrix::from_real_rows(&[&[0.0, gamma.sqrt()], &[0.0, 0.0]]),
                ],
            ),
            ChannelSpec::RandomSi { d, n_kraus, seed } => Ok(random_si_channel(
                &mut Sampler::new(seed),
                d,
                n_kraus,
                &Basis::computational(d),
            )),
            ChannelSpec::Isotropic { d, p, seed } => {
                isotropic_channel(&Sampler::new(seed).unitary(d), p)
            }
        }
    }

    /// Whether the channel is of the form `pρ + (1−p)I/d`.
    pub fn is_depolarizing(&self) -> bool {
        matches!(self, ChannelSpec::Depolarizing { .. } | ChannelSpec::Phase { .. })
    }

    /// The planted `(U, p)` of an isotropic entry.
    pub fn planted_isotropic(&self) -> Option<(ComplexMatrix, f64)> {
        match *self {
            ChannelSpec::Isotropic { d, p, seed } => Some((Sampler::new(seed).unitary(d), p)),
            _ => None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ZooEntry {
    pub name: String,
    pub spec: ChannelSpec,
}

fn entry(name: String, spec: ChannelSpec) -> ZooEntry {
    ZooEntry { name, spec }
}

/// The 50-channel zoo.
pub fn standard_zoo() -> Vec<ZooEntry> {
    let mut zoo = Vec::with_capacity(50);
    let mut seed = 1000;
    for d in 2..=4 {
        let lo = -1.0 / ((d * d - 1) as f64);
        for p in [lo, 0.0, 0.3, 0.9] {
            seed += 1;
            zoo.push(entry(
                format!("depolarizing-d{d}-p{p:.4}"),
                ChannelSpec::Depolarizing { d, p, basis_seed: seed },
            ));
        }
    }
    for (d, theta) in [(2, 0.7), (3, 2.1)] {
        zoo.push(entry(format!("phase-d{d}"), ChannelSpec::Phase { d, theta }));
    }
    zoo.push(entry("hadamard".into(), ChannelSpec::Hadamard));
    for d in [2, 2, 3, 3, 4] {
        seed += 1;
        zoo.push(entry(format!("unitary-d{d}-{seed}"), ChannelSpec::Unitary { d, seed }));
    }
    for (d, strength) in [(2, 1.0), (2, 0.5), (3, 1.0), (3, 0.2), (4, 0.7), (4, 1.0)] {
        zoo.push(entry(
            format!("dephasing-d{d}-s{strength}"),
            ChannelSpec::Dephasing { d, strength },
        ));
    }
    for gamma in [0.1, 0.3, 0.5, 0.8, 1.0] {
        zoo.push(entry(
            format!("amplitude-damping-g{gamma}"),
            ChannelSpec::AmplitudeDamping { gamma },
        ));
    }
    for (d, n_kraus) in [(2, 1), (2, 2), (2, 3), (3, 1), (3, 2), (3, 4), (4, 2), (4, 3)] {
        seed += 1;
        zoo.push(entry(
            format!("random-si-d{d}-n{n_kraus}"),
            ChannelSpec::RandomSi { d, n_kraus, seed },
        ));
    }
    for (d, p) in [
        (2, 0.7),
        (2, -0.25),
        (2, 0.4),
        (3, 0.5),
        (3, -0.1),
        (3, 0.8),
        (3, 0.3),
        (4, 0.6),
        (4, 0.25),
        (4, 0.9),
        (4, -0.05),
    ] {
        seed += 1;
        zoo.push(entry(
            format!("isotropic-d{d}-p{p}"),
            ChannelSpec::Isotropic { d, p, seed },
        ));
    }
    zoo
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zoo_has_fifty_valid_channels() {
        let zoo = standard_zoo();
        assert_eq!(zoo.len(), 50);
        for e in &zoo {
            let c = e.spec.build().unwrap();
            assert!(c.is_trace_preserving(), "{}", e.name);
        }
        let mut names: Vec<&str> = zoo.iter().map(|e| e.name.as_str()).collect();
        names.sort_unstable();
        names.dedup();
        assert_eq!(names.len(), 50);
    }

    #[test]
    fn manifest_round_trip() {
        let zoo = standard_zoo();
        let text = serde_json::to_string(&zoo).unwrap();
        let back: Vec<ZooEntry> = serde_json::from_str(&text).unwrap();
        assert_eq!(back, zoo);
    }
}
