//! Partial-arc sampling reception: receivers on an equal-gain arc inside the
//! mainlobe, demultiplexed by analog phase shifting.

use std::f64::consts::PI;

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use serde::{Deserialize, Serialize};

use crate::channel::{from_positions, ChannelKind};
use crate::derive_seed;
use crate::error::{invalid, Error, Result};
use crate::geometry::{wavelength_for, Point};
use crate::modegroup::{FeedErrorModel, ModeGroup};

fn wrap_2pi(x: f64) -> f64 {
    let w = x.rem_euclid(2.0 * PI);
    if (2.0 * PI - w) < 1e-12 {
        0.0
    } else {
        w
    }
}

fn check_delta(delta_le: f64) -> Result<f64> {
    if !delta_le.is_finite() {
        return Err(invalid("delta_le", "must be finite"));
    }
    if delta_le == 0.0 {
        return Err(Error::PasrUndefined);
    }
    let d = delta_le.abs();
    if d <= 1.0 {
        return Err(invalid("delta_le", "|delta_le| <= 1 needs an unbounded aperture"));
    }
    Ok(d)
}

/// Receive aperture `2 D tan(pi / (2 |dl_e|))` for a two-receiver arrangement.
pub fn pasr_aperture(distance: f64, delta_le: f64) -> Result<f64> {
    let d = check_delta(delta_le)?;
    if !(distance > 0.0 && distance.is_finite()) {
        return Err(invalid("distance", "must be > 0"));
    }
    Ok(2.0 * distance * (PI / (2.0 * d)).tan())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PasrArrangement {
    pub n_rx: usize,
    /// Arc-fraction denominator: the receivers sample a `2 pi / delta` arc.
    pub delta: f64,
    pub distance: f64,
    /// Azimuth step between neighbouring receivers, radians.
    pub neighbor_angle: f64,
    /// Receiver azimuths, increasing, symmetric about boresight.
    pub azimuths: Vec<f64>,
    /// One shift set per demux target, one shift per receiver, radians.
    /// Filled for the antisymmetric pair `l_e = +-dl_e/2` until
    /// [`PasrArrangement::demux_for`] retargets it.
    pub phase_shift_sets: Vec<Vec<f64>>,
}

/// Arrangement with `delta = dl_e` (one full phase cycle across the arc).
pub fn pasr_placement(distance: f64, delta_le: f64, n_rx: usize) -> Result<PasrArrangement> {
    pasr_placement_with(distance, delta_le, n_rx, 1)
}

/// Arrangement with `delta = dl_e / k'`.
pub fn pasr_placement_with(distance: f64, delta_le: f64, n_rx: usize, k_prime: i32) -> Result<PasrArrangement> {
    let d = check_delta(delta_le)?;
    if !(distance > 0.0 && distance.is_finite()) {
        return Err(invalid("distance", "must be > 0"));
    }
    if n_rx < 2 {
        return Err(invalid("n_rx", "needs at least two receivers"));
    }
    if k_prime == 0 {
        return Err(invalid("k_prime", "must be a non-zero integer"));
    }
    let delta = d / k_prime.unsigned_abs() as f64;
    let neighbor_angle = 2.0 * PI / (delta * n_rx as f64);
    if (n_rx - 1) as f64 * neighbor_angle >= PI {
        return Err(invalid("k_prime", "arc spans a half-plane or more"));
    }
    let mid = (n_rx - 1) as f64 / 2.0;
    let azimuths = (0..n_rx).map(|r| (r as f64 - mid) * neighbor_angle).collect();
    let mut arr = PasrArrangement {
        n_rx,
        delta,
        distance,
        neighbor_angle,
        azimuths,
        phase_shift_sets: Vec::new(),
    };
    arr.phase_shift_sets = [0.5 * d, -0.5 * d]
        .iter()
        .map(|&le| arr.normalize_shifts(arr.azimuths.iter().map(|&phi| -le * phi).collect()))
        .collect();
    Ok(arr)
}

impl PasrArrangement {
    /// Receiver positions on the arc of radius `distance` around the transmitter.
    pub fn positions(&self) -> Vec<Point> {
        self.azimuths
            .iter()
            .map(|&phi| Point::new(self.distance * phi.cos(), self.distance * phi.sin()))
            .collect()
    }

    /// Width of a straight broadside aperture subtending the same arc.
    pub fn equivalent_aperture(&self) -> f64 {
        2.0 * self.distance * ((self.n_rx - 1) as f64 * self.neighbor_angle / 2.0).tan()
    }

    /// Shifts relative to one receiver, choosing the reference that keeps
    /// the largest shift smallest.
    fn normalize_shifts(&self, raw: Vec<f64>) -> Vec<f64> {
        raw.iter()
            .map(|&reference| raw.iter().map(|&s| wrap_2pi(s - reference)).collect::<Vec<_>>())
            .min_by(|a, b| {
                let ma = a.iter().cloned().fold(0.0, f64::max);
                let mb = b.iter().cloned().fold(0.0, f64::max);
                ma.total_cmp(&mb)
            })
            .unwrap_or_default()
    }

    /// Shift set that phase-aligns `mg` across the receivers.
    pub fn alignment_shifts(&self, mg: &ModeGroup) -> Vec<f64> {
        self.normalize_shifts(self.azimuths.iter().map(|&phi| mg.beam_pattern(phi).arg()).collect())
    }

    /// Copy with one shift set per demux target, in `targets` order.
    pub fn demux_for(&self, targets: &[ModeGroup]) -> Self {
        Self {
            phase_shift_sets: targets.iter().map(|mg| self.alignment_shifts(mg)).collect(),
            ..self.clone()
        }
    }
}

fn check_equal_gain(mg1: &ModeGroup, mg2: &ModeGroup) -> Result<()> {
    if !mg1.is_consecutive() || !mg2.is_consecutive() {
        return Err(Error::NotConsecutive);
    }
    if mg1.q() != mg2.q() {
        return Err(invalid("mode groups", "equal-gain sampling needs equal Q"));
    }
    Ok(())
}

/// `sum_r BP1(phi_r) conj(BP2(phi_r))` over the arrangement's receivers.
pub fn orthogonality_sum(mg1: &ModeGroup, mg2: &ModeGroup, arr: &PasrArrangement) -> Result<Complex64> {
    check_equal_gain(mg1, mg2)?;
    Ok(arr
        .azimuths
        .iter()
        .map(|&phi| mg1.beam_pattern(phi) * mg2.beam_pattern(phi).conj())
        .sum())
}

/// Common gain factor of the sum: mean of `|BP1 BP2|` over the receivers.
pub fn orthogonality_gamma(mg1: &ModeGroup, mg2: &ModeGroup, arr: &PasrArrangement) -> f64 {
    arr.azimuths
        .iter()
        .map(|&phi| (mg1.beam_pattern(phi) * mg2.beam_pattern(phi)).norm())
        .sum::<f64>()
        / arr.n_rx as f64
}

/// The phase-only part of the sum, `sum_r exp(-j dl_e phi_r)`, i.e. the
/// orthogonality sum with the per-receiver gain factored out.
pub fn phase_structure_sum(delta_le: f64, arr: &PasrArrangement) -> Complex64 {
    arr.azimuths
        .iter()
        .map(|&phi| Complex64::from_polar(1.0, -delta_le * phi))
        .sum()
}

/// `sum_r received_r exp(-j shift_r)`.
pub fn analog_combine(received: &[Complex64], phase_shifts: &[f64]) -> Result<Complex64> {
    if received.len() != phase_shifts.len() {
        return Err(Error::DimensionMismatch {
            expected: phase_shifts.len(),
            got: received.len(),
        });
    }
    Ok(received
        .iter()
        .zip(phase_shifts)
        .map(|(r, &s)| r * Complex64::from_polar(1.0, -s))
        .sum())
}

pub fn dbm_to_mw(dbm: f64) -> f64 {
    10f64.powf(dbm / 10.0)
}

pub fn mw_to_dbm(mw: f64) -> f64 {
    10.0 * mw.log10()
}

/// Received power per (transmitted MG, demux setting): `powers_mw[tx][setting]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PowerTransferMatrix {
    pub labels: Vec<String>,
    pub powers_mw: Vec<Vec<f64>>,
}

impl PowerTransferMatrix {
    pub fn new(labels: Vec<String>, powers_mw: Vec<Vec<f64>>) -> Result<Self> {
        let n = labels.len();
        if powers_mw.len() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                got: powers_mw.len(),
            });
        }
        for row in &powers_mw {
            if row.len() != n {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    got: row.len(),
                });
            }
            if row.iter().any(|p| !(*p >= 0.0)) {
                return Err(invalid("powers_mw", "powers must be non-negative"));
            }
        }
        Ok(Self { labels, powers_mw })
    }

    pub fn from_dbm(labels: Vec<String>, dbm: &[Vec<f64>]) -> Result<Self> {
        let mw = dbm.iter().map(|r| r.iter().map(|&p| dbm_to_mw(p)).collect()).collect();
        Self::new(labels, mw)
    }

    pub fn size(&self) -> usize {
        self.labels.len()
    }

    pub fn dbm(&self, tx: usize, setting: usize) -> f64 {
        mw_to_dbm(self.powers_mw[tx][setting])
    }
}

/// `10 log10(sum unexpected / expected)` for each demux setting, in dB.
pub fn crosstalk(ptm: &PowerTransferMatrix) -> Result<Vec<f64>> {
    (0..ptm.size())
        .map(|setting| {
            let expected = ptm.powers_mw[setting][setting];
            if !(expected > 0.0) {
                return Err(Error::ZeroExpectedPower { setting });
            }
            let unexpected: f64 = (0..ptm.size())
                .filter(|&tx| tx != setting)
                .map(|tx| ptm.powers_mw[tx][setting])
                .sum();
            Ok(10.0 * (unexpected / expected).log10())
        })
        .collect()
}

/// Continuous-wave tones, one per transmitted MG, at complex baseband.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ToneSet {
    pub carrier_hz: f64,
    pub offsets_hz: Vec<f64>,
    pub sample_rate_hz: f64,
    pub n_samples: usize,
    pub power_dbm: f64,
}

impl Default for ToneSet {
    fn default() -> Self {
        Self {
            carrier_hz: 10.2025e9,
            offsets_hz: vec![-0.5e6, 0.5e6],
            sample_rate_hz: 20e6,
            n_samples: 400,
            power_dbm: 10.0,
        }
    }
}

impl ToneSet {
    pub fn validate(&self, n_tones: usize) -> Result<()> {
        if self.offsets_hz.len() != n_tones {
            return Err(Error::DimensionMismatch {
                expected: n_tones,
                got: self.offsets_hz.len(),
            });
        }
        if !(self.carrier_hz > 0.0 && self.sample_rate_hz > 0.0) || self.n_samples == 0 {
            return Err(invalid("tones", "carrier, sample rate and sample count must be positive"));
        }
        // Tones must be orthogonal over the window: integer cycles apart.
        for (i, a) in self.offsets_hz.iter().enumerate() {
            if a.abs() >= self.sample_rate_hz / 2.0 {
                return Err(invalid("offsets_hz", "tone beyond Nyquist"));
            }
            for b in &self.offsets_hz[i + 1..] {
                let cycles = (a - b) * self.n_samples as f64 / self.sample_rate_hz;
                if cycles.abs() < 0.5 || (cycles - cycles.round()).abs() > 1e-9 {
                    return Err(invalid("offsets_hz", "tone spacing must be a whole number of bins"));
                }
            }
        }
        Ok(())
    }

    fn tone(&self, offset: f64) -> Vec<Complex64> {
        let amp = dbm_to_mw(self.power_dbm).sqrt();
        (0..self.n_samples)
            .map(|t| Complex64::from_polar(amp, 2.0 * PI * offset * t as f64 / self.sample_rate_hz))
            .collect()
    }

    /// Power of the `offset` tone in `x`, by projection over the window.
    fn tone_power(&self, x: &[Complex64], offset: f64) -> f64 {
        let n = x.len() as f64;
        x.iter()
            .enumerate()
            .map(|(t, v)| v * Complex64::from_polar(1.0, -2.0 * PI * offset * t as f64 / self.sample_rate_hz))
            .sum::<Complex64>()
            .norm_sqr()
            / (n * n)
    }
}

/// Feed-error seed for one MG, tied to its mode orders so swapping the
/// transmit order keeps each MG's realisation.
fn mg_seed(seed: u64, mg: &ModeGroup) -> u64 {
    mg.modes()
        .iter()
        .fold(seed, |s, m| derive_seed(s, m.order as i64 as u64))
}

/// Gaussian error in where the receivers actually sit, relative to the
/// ideal arc. The demux phase shifts stay at their ideal values.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PlacementError {
    pub azimuth_rms: f64,
    pub range_rms: f64,
    pub seed: u64,
}

impl PlacementError {
    pub fn new(azimuth_rms: f64, range_rms: f64, seed: u64) -> Result<Self> {
        for (name, v) in [("azimuth_rms", azimuth_rms), ("range_rms", range_rms)] {
            if !(v >= 0.0 && v.is_finite()) {
                return Err(invalid(name, "must be finite and >= 0"));
            }
        }
        Ok(Self {
            azimuth_rms,
            range_rms,
            seed,
        })
    }

    pub fn ideal() -> Self {
        Self {
            azimuth_rms: 0.0,
            range_rms: 0.0,
            seed: 0,
        }
    }

    fn apply(&self, arr: &PasrArrangement) -> Vec<Point> {
        if self.azimuth_rms == 0.0 && self.range_rms == 0.0 {
            return arr.positions();
        }
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        let az = Normal::new(0.0, self.azimuth_rms).expect("validated rms");
        let range = Normal::new(0.0, self.range_rms).expect("validated rms");
        arr.azimuths
            .iter()
            .map(|&phi| {
                let phi = phi + az.sample(&mut rng);
                let r = arr.distance + range.sample(&mut rng);
                Point::new(r * phi.cos(), r * phi.sin())
            })
            .collect()
    }
}

/// Two-MG PASR link with CW tones: places receivers for the pair's `dl_e`,
/// builds the coaxial channel with (possibly perturbed) feeds, applies each
/// ideal shift set and measures each tone at each combiner output.
pub fn pasr_experiment(
    mgs: &[ModeGroup; 2],
    distance: f64,
    tones: &ToneSet,
    error: &FeedErrorModel,
) -> Result<PowerTransferMatrix> {
    pasr_experiment_with(mgs, distance, 1, tones, error)
}

/// [`pasr_experiment`] on the `delta = dl_e / k'` arrangement.
pub fn pasr_experiment_with(
    mgs: &[ModeGroup; 2],
    distance: f64,
    k_prime: i32,
    tones: &ToneSet,
    error: &FeedErrorModel,
) -> Result<PowerTransferMatrix> {
    pasr_experiment_perturbed(mgs, distance, k_prime, tones, error, &PlacementError::ideal())
}

/// [`pasr_experiment_with`] with the receivers moved off the ideal arc.
pub fn pasr_experiment_perturbed(
    mgs: &[ModeGroup; 2],
    distance: f64,
    k_prime: i32,
    tones: &ToneSet,
    error: &FeedErrorModel,
    placement: &PlacementError,
) -> Result<PowerTransferMatrix> {
    tones.validate(2)?;
    for mg in mgs {
        if !mg.is_consecutive() {
            return Err(Error::NotConsecutive);
        }
    }
    let delta_le = mgs[0].equivalent_order()? - mgs[1].equivalent_order()?;
    let arr = pasr_placement_with(distance, delta_le, 2, k_prime)?.demux_for(mgs);
    let fed: Vec<ModeGroup> = mgs
        .iter()
        .map(|mg| mg.perturb(&error.with_seed(mg_seed(error.seed, mg))))
        .collect();
    let wavelength = wavelength_for(tones.carrier_hz);
    let h = from_positions(&[Point::ORIGIN, Point::ORIGIN], &placement.apply(&arr), wavelength, 1.0, Some(&fed), ChannelKind::MgMimo)?;

    let signals: Vec<Vec<Complex64>> = tones.offsets_hz.iter().map(|&f| tones.tone(f)).collect();
    let received: Vec<Vec<Complex64>> = (0..arr.n_rx)
        .map(|r| {
            (0..tones.n_samples)
                .map(|t| (0..2).map(|n| h.entries[(r, n)] * signals[n][t]).sum())
                .collect()
        })
        .collect();

    let mut powers = vec![vec![0.0; 2]; 2];
    for (setting, shifts) in arr.phase_shift_sets.iter().enumerate() {
        let combined: Vec<Complex64> = (0..tones.n_samples)
            .map(|t| {
                let col: Vec<Complex64> = received.iter().map(|r| r[t]).collect();
                analog_combine(&col, shifts)
            })
            .collect::<Result<_>>()?;
        for (tx, &f) in tones.offsets_hz.iter().enumerate() {
            powers[tx][setting] = tones.tone_power(&combined, f);
        }
    }
    PowerTransferMatrix::new(mgs.iter().map(ModeGroup::label).collect(), powers)
}

/// Mean over `n_seeds` feed-error draws of the worse of the two crosstalks,
/// one value per `(amplitude_rms, phase_rms)` level.
pub fn crosstalk_vs_feed_error(
    mgs: &[ModeGroup; 2],
    distance: f64,
    k_prime: i32,
    tones: &ToneSet,
    levels: &[(f64, f64)],
    n_seeds: usize,
    base_seed: u64,
) -> Result<Vec<f64>> {
    if n_seeds == 0 {
        return Err(invalid("n_seeds", "must be at least 1"));
    }
    levels
        .iter()
        .map(|&(amp, phase)| {
            let mut total = 0.0;
            for s in 0..n_seeds {
                let err = FeedErrorModel::new(amp, phase, derive_seed(base_seed, s as u64))?;
                let ct = crosstalk(&pasr_experiment_with(mgs, distance, k_prime, tones, &err)?)?;
                total += ct.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
            }
            Ok(total / n_seeds as f64)
        })
        .collect()
}
