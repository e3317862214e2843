//! PSOAM modes and mode-groups.
//!
//! A mode-group superposes `Q` plane-spiral modes with a `1/sqrt(Q)` power
//! normalization. Its azimuthal pattern is
//!
//! ```text
//! BP(phi) = 1/sqrt(Q) * sum_q A_q * exp(-j (l_q * phi + phi0_q))
//! ```
//!
//! which is always evaluated as that sum, so arbitrary amplitude and phase
//! weightings are supported.

use std::collections::BTreeMap;
use std::f64::consts::PI;

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PsoamMode {
    pub order: i32,
    pub amplitude: f64,
    /// Initial phase in radians.
    pub initial_phase: f64,
}

impl PsoamMode {
    pub const fn unit(order: i32) -> Self {
        Self {
            order,
            amplitude: 1.0,
            initial_phase: 0.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<PsoamMode>", into = "Vec<PsoamMode>")]
pub struct ModeGroup {
    modes: Vec<PsoamMode>,
}

impl TryFrom<Vec<PsoamMode>> for ModeGroup {
    type Error = Error;

    fn try_from(modes: Vec<PsoamMode>) -> Result<Self> {
        ModeGroup::new(modes)
    }
}

impl From<ModeGroup> for Vec<PsoamMode> {
    fn from(mg: ModeGroup) -> Self {
        mg.modes
    }
}

impl ModeGroup {
    pub fn new(modes: Vec<PsoamMode>) -> Result<Self> {
        if modes.is_empty() {
            return Err(invalid("modes", "a mode-group needs at least one mode"));
        }
        for m in &modes {
            if !(m.amplitude.is_finite() && m.amplitude >= 0.0) {
                return Err(invalid(
                    "amplitude",
                    format!("mode {} has amplitude {}", m.order, m.amplitude),
                ));
            }
            if !m.initial_phase.is_finite() {
                return Err(invalid("initial_phase", format!("mode {} phase not finite", m.order)));
            }
        }
        let mut orders: Vec<i32> = modes.iter().map(|m| m.order).collect();
        orders.sort_unstable();
        if orders.windows(2).any(|w| w[0] == w[1]) {
            return Err(invalid("modes", "mode orders must be distinct"));
        }
        Ok(Self { modes })
    }

    /// Equi-amplitude, in-phase group over the given orders.
    pub fn uniform(orders: &[i32]) -> Result<Self> {
        Self::new(orders.iter().map(|&l| PsoamMode::unit(l)).collect())
    }

    /// `MG{first, first + 1, ..., last}` with unit weights.
    pub fn consecutive(first: i32, last: i32) -> Result<Self> {
        if last < first {
            return Err(invalid("modes", format!("empty range {first}..{last}")));
        }
        Self::uniform(&(first..=last).collect::<Vec<_>>())
    }

    /// A single PSOAM mode (omnidirectional in azimuth).
    pub fn single(order: i32) -> Self {
        Self {
            modes: vec![PsoamMode::unit(order)],
        }
    }

    pub fn modes(&self) -> &[PsoamMode] {
        &self.modes
    }

    /// Number of superposed modes.
    pub fn q(&self) -> usize {
        self.modes.len()
    }

    fn sorted_orders(&self) -> Vec<i32> {
        let mut orders: Vec<i32> = self.modes.iter().map(|m| m.order).collect();
        orders.sort_unstable();
        orders
    }

    /// Lowest order in the group.
    pub fn first_order(&self) -> i32 {
        self.sorted_orders()[0]
    }

    /// Common interval of the (sorted) orders, if they form an arithmetic
    /// progression. `None` for a single mode.
    pub fn interval(&self) -> Option<i32> {
        let orders = self.sorted_orders();
        if orders.len() < 2 {
            return None;
        }
        let step = orders[1] - orders[0];
        orders
            .windows(2)
            .all(|w| w[1] - w[0] == step)
            .then_some(step)
    }

    /// True for single modes and for groups of adjacent orders.
    pub fn is_consecutive(&self) -> bool {
        self.q() == 1 || self.interval() == Some(1)
    }

    fn is_uniform(&self) -> bool {
        self.modes
            .iter()
            .all(|m| m.amplitude == self.modes[0].amplitude && m.initial_phase == 0.0)
    }

    pub fn beam_pattern(&self, phi: f64) -> Complex64 {
        let norm = 1.0 / (self.q() as f64).sqrt();
        self.modes
            .iter()
            .map(|m| Complex64::from_polar(m.amplitude, -(m.order as f64 * phi + m.initial_phase)))
            .sum::<Complex64>()
            * norm
    }

    /// Power pattern `|BP(phi)|^2`.
    pub fn power_pattern(&self, phi: f64) -> f64 {
        self.beam_pattern(phi).norm_sqr()
    }

    /// `l_f + dl (Q - 1) / 2`, the mainlobe phase slope.
    pub fn equivalent_order(&self) -> Result<f64> {
        if self.q() == 1 {
            return Ok(self.modes[0].order as f64);
        }
        let step = self.interval().ok_or(Error::EquivalentOrderUndefined)?;
        Ok(self.first_order() as f64 + step as f64 * (self.q() - 1) as f64 / 2.0)
    }

    /// Boresight peak power relative to a single mode of the same
    /// per-mode power. Equals `10 log10(Q)` for unit in-phase groups.
    pub fn directivity_gain_db(&self) -> f64 {
        let mean_power =
            self.modes.iter().map(|m| m.amplitude * m.amplitude).sum::<f64>() / self.q() as f64;
        10.0 * (self.power_pattern(0.0) / mean_power).log10()
    }

    /// Full width, in degrees, between the azimuths where the power pattern
    /// drops to half of its boresight value.
    pub fn half_power_beamwidth(&self) -> Result<f64> {
        if self.q() == 1 {
            return Err(Error::Omnidirectional);
        }
        if !self.is_consecutive() {
            return Err(Error::NotConsecutive);
        }
        let half = self.power_pattern(0.0) / 2.0;
        let right = self.half_power_edge(half, 1.0)?;
        let left = self.half_power_edge(half, -1.0)?;
        Ok((right + left).to_degrees())
    }

    /// Distance from boresight to the first half-power crossing on one side.
    fn half_power_edge(&self, half: f64, dir: f64) -> Result<f64> {
        const STEPS: usize = 4096;
        let step = PI / STEPS as f64;
        let mut inside = 0.0;
        for i in 1..=STEPS {
            let phi = step * i as f64;
            if self.power_pattern(dir * phi) < half {
                let mut lo = inside;
                let mut hi = phi;
                while hi - lo > 1e-12 {
                    let mid = 0.5 * (lo + hi);
                    if self.power_pattern(dir * mid) >= half {
                        lo = mid;
                    } else {
                        hi = mid;
                    }
                }
                return Ok(0.5 * (lo + hi));
            }
            inside = phi;
        }
        Err(invalid("modes", "pattern never falls to half power"))
    }

    /// Normalized complex weight of each mode order, `A_q / sqrt(Q) * exp(-j phi0_q)`.
    pub fn mode_spectrum(&self) -> BTreeMap<i32, Complex64> {
        let norm = 1.0 / (self.q() as f64).sqrt();
        self.modes
            .iter()
            .map(|m| (m.order, Complex64::from_polar(m.amplitude * norm, -m.initial_phase)))
            .collect()
    }

    /// Copy with shifted orders, `MG{l + k}`.
    pub fn shifted(&self, k: i32) -> Self {
        Self {
            modes: self
                .modes
                .iter()
                .map(|m| PsoamMode {
                    order: m.order + k,
                    ..*m
                })
                .collect(),
        }
    }

    /// Copy with feed-network amplitude and phase errors applied.
    pub fn perturb(&self, err: &FeedErrorModel) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(err.seed);
        let amp = Normal::new(0.0, err.amplitude_error_rms).expect("validated rms");
        let phase = Normal::new(0.0, err.phase_error_rms).expect("validated rms");
        let modes = self
            .modes
            .iter()
            .map(|m| {
                let mut out = *m;
                if err.amplitude_error_rms > 0.0 {
                    out.amplitude = (m.amplitude * (1.0 + amp.sample(&mut rng))).max(0.0);
                }
                if err.phase_error_rms > 0.0 {
                    out.initial_phase = m.initial_phase + phase.sample(&mut rng);
                }
                out
            })
            .collect();
        Self { modes }
    }

    /// Shorthand label, `MG{1..4}` or `MG{-1,1}`.
    pub fn label(&self) -> String {
        let orders = self.sorted_orders();
        if self.q() > 2 && self.interval() == Some(1) && self.is_uniform() {
            return format!("MG{{{}..{}}}", orders[0], orders[orders.len() - 1]);
        }
        let list: Vec<String> = self.modes.iter().map(|m| m.order.to_string()).collect();
        format!("MG{{{}}}", list.join(","))
    }
}

/// Feed-network imperfections: multiplicative Gaussian amplitude error and
/// additive Gaussian phase error per mode.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FeedErrorModel {
    pub amplitude_error_rms: f64,
    /// Radians.
    pub phase_error_rms: f64,
    pub seed: u64,
}

impl FeedErrorModel {
    pub fn new(amplitude_error_rms: f64, phase_error_rms: f64, seed: u64) -> Result<Self> {
        if !(amplitude_error_rms >= 0.0 && amplitude_error_rms.is_finite()) {
            return Err(invalid("amplitude_error_rms", "must be finite and >= 0"));
        }
        if !(phase_error_rms >= 0.0 && phase_error_rms.is_finite()) {
            return Err(invalid("phase_error_rms", "must be finite and >= 0"));
        }
        Ok(Self {
            amplitude_error_rms,
            phase_error_rms,
            seed,
        })
    }

    pub fn ideal() -> Self {
        Self {
            amplitude_error_rms: 0.0,
            phase_error_rms: 0.0,
            seed: 0,
        }
    }

    pub fn with_seed(self, seed: u64) -> Self {
        Self { seed, ..self }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn coherent_sum_on_boresight() {
        let mg = ModeGroup::consecutive(1, 4).unwrap();
        let bp = mg.beam_pattern(0.0);
        assert!((bp - Complex64::new(2.0, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn single_mode_is_omnidirectional() {
        let mg = ModeGroup::single(3);
        for i in 0..64 {
            let phi = -PI + i as f64 * 0.1;
            assert!((mg.beam_pattern(phi).norm() - 1.0).abs() < 1e-14);
        }
        assert_eq!(mg.half_power_beamwidth(), Err(Error::Omnidirectional));
    }

    #[test]
    fn plane_wave_pair_has_null_at_quadrature() {
        let mg = ModeGroup::uniform(&[-1, 1]).unwrap();
        assert!(mg.beam_pattern(PI / 2.0).norm() < 1e-15);
    }

    #[test]
    fn equivalent_orders() {
        assert_eq!(ModeGroup::consecutive(1, 10).unwrap().equivalent_order(), Ok(5.5));
        assert_eq!(ModeGroup::consecutive(11, 20).unwrap().equivalent_order(), Ok(15.5));
        assert_eq!(ModeGroup::consecutive(1, 4).unwrap().equivalent_order(), Ok(2.5));
        assert_eq!(ModeGroup::uniform(&[-1, 1]).unwrap().equivalent_order(), Ok(0.0));
        assert_eq!(ModeGroup::single(-3).equivalent_order(), Ok(-3.0));
        assert_eq!(
            ModeGroup::uniform(&[1, 2, 4]).unwrap().equivalent_order(),
            Err(Error::EquivalentOrderUndefined)
        );
    }

    #[test]
    fn interval_and_consecutive() {
        let mg = ModeGroup::uniform(&[4, 3, 2, 1]).unwrap();
        assert_eq!(mg.interval(), Some(1));
        assert!(mg.is_consecutive());
        assert_eq!(mg.first_order(), 1);
        let pair = ModeGroup::uniform(&[-1, 1]).unwrap();
        assert_eq!(pair.interval(), Some(2));
        assert!(!pair.is_consecutive());
        assert_eq!(pair.half_power_beamwidth(), Err(Error::NotConsecutive));
    }

    #[test]
    fn directivity() {
        let g4 = ModeGroup::consecutive(1, 4).unwrap().directivity_gain_db();
        assert!((g4 - 6.0206).abs() < 1e-4);
        assert!(ModeGroup::single(2).directivity_gain_db().abs() < 1e-12);
        let g10 = ModeGroup::consecutive(1, 10).unwrap().directivity_gain_db();
        assert!((g10 - 10.0).abs() < 1e-12);
    }

    #[test]
    fn beamwidth_shrinks_with_q() {
        let w2 = ModeGroup::consecutive(1, 2).unwrap().half_power_beamwidth().unwrap();
        let w4 = ModeGroup::consecutive(1, 4).unwrap().half_power_beamwidth().unwrap();
        let w10 = ModeGroup::consecutive(1, 10).unwrap().half_power_beamwidth().unwrap();
        assert!(w4 < w2 && w10 < w4, "{w2} {w4} {w10}");
    }

    #[test]
    fn beamwidth_matches_independent_bisection() {
        // |sin(2 phi) / sin(phi / 2)|^2 = 8 is the half-power point of MG{1..4}.
        let f = |phi: f64| (2.0 * phi).sin() / (phi / 2.0).sin() - 8f64.sqrt();
        let (mut lo, mut hi) = (1e-6, PI / 4.0);
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if f(mid) > 0.0 {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        let oracle = 2.0 * lo.to_degrees();
        let got = ModeGroup::consecutive(1, 4).unwrap().half_power_beamwidth().unwrap();
        assert!((got - oracle).abs() < 1e-7, "{got} vs {oracle}");
        assert!((got - 81.97).abs() < 0.01, "{got}");
    }

    #[test]
    fn spectrum_weights() {
        let spec = ModeGroup::consecutive(1, 4).unwrap().mode_spectrum();
        assert_eq!(spec.len(), 4);
        assert!(spec.values().all(|w| (w - Complex64::new(0.5, 0.0)).norm() < 1e-15));
        let single = ModeGroup::single(2).mode_spectrum();
        assert_eq!(single.get(&2), Some(&Complex64::new(1.0, 0.0)));
    }

    #[test]
    fn spectrum_inverts_pattern_by_quadrature() {
        let mut modes: Vec<PsoamMode> = (1..=4).map(PsoamMode::unit).collect();
        modes[2].initial_phase = 30f64.to_radians();
        modes[1].amplitude = 0.7;
        let mg = ModeGroup::new(modes).unwrap();
        let n = 1024;
        for (order, weight) in mg.mode_spectrum() {
            let sum: Complex64 = (0..n)
                .map(|i| {
                    let phi = 2.0 * PI * i as f64 / n as f64;
                    mg.beam_pattern(phi) * Complex64::from_polar(1.0, order as f64 * phi)
                })
                .sum();
            let recovered = sum / n as f64;
            assert!((recovered - weight).norm() < 1e-10);
        }
        let w3 = mg.mode_spectrum()[&3];
        assert!((w3.arg().to_degrees() + 30.0).abs() < 1e-10);
    }

    #[test]
    fn zero_error_perturbation_is_identity() {
        let mg = ModeGroup::consecutive(-4, -1).unwrap();
        assert_eq!(mg.perturb(&FeedErrorModel::ideal()), mg);
    }

    #[test]
    fn perturbation_is_seeded() {
        let mg = ModeGroup::consecutive(1, 4).unwrap();
        let err = FeedErrorModel::new(0.05, 0.05, 7).unwrap();
        assert_eq!(mg.perturb(&err), mg.perturb(&err));
        assert_ne!(mg.perturb(&err), mg.perturb(&err.with_seed(8)));
    }

    #[test]
    fn amplitude_error_matches_half_normal_mean() {
        let mg = ModeGroup::consecutive(0, 99).unwrap();
        let mut total = 0.0;
        let mut count = 0usize;
        for seed in 0..1000 {
            let err = FeedErrorModel::new(0.05, 0.0, seed).unwrap();
            for m in mg.perturb(&err).modes() {
                total += (m.amplitude - 1.0).abs();
                count += 1;
            }
        }
        let mean = total / count as f64;
        let expected = 0.05 * (2.0 / PI).sqrt();
        assert!((mean - expected).abs() < 5e-4, "{mean} vs {expected}");
    }

    #[test]
    fn shifting_orders_shifts_equivalent_order() {
        let mg = ModeGroup::consecutive(1, 4).unwrap();
        assert_eq!(mg.shifted(3).equivalent_order(), Ok(5.5));
    }

    #[test]
    fn rejects_bad_groups() {
        assert!(ModeGroup::uniform(&[]).is_err());
        assert!(ModeGroup::uniform(&[1, 1]).is_err());
        let bad = PsoamMode {
            order: 1,
            amplitude: -1.0,
            initial_phase: 0.0,
        };
        assert!(ModeGroup::new(vec![bad]).is_err());
    }

    #[test]
    fn labels() {
        assert_eq!(ModeGroup::consecutive(1, 10).unwrap().label(), "MG{1..10}");
        assert_eq!(ModeGroup::uniform(&[-1, 1]).unwrap().label(), "MG{-1,1}");
    }
}
