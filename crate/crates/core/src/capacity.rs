//! Water-filling capacity and capacity-gain distance sweeps.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::channel::{build_channel, calibrate_total_power, System, TransferMatrix};
use crate::error::{invalid, Error, Result};
use crate::geometry::LinkGeometry;
use crate::linalg::RANK_CUTOFF;

#[derive(Debug, Clone, PartialEq)]
pub struct PowerAllocation {
    /// Power per subchannel, in the order of the singular values given.
    pub powers: Vec<f64>,
    pub total: f64,
    pub water_level: f64,
}

/// Water-filling over subchannel gains `nu_k^2 / sigma^2`.
pub fn waterfill(singular_values: &[f64], total_power: f64, noise_variance: f64) -> Result<PowerAllocation> {
    if !(total_power > 0.0 && total_power.is_finite()) {
        return Err(invalid("total_power", format!("must be > 0, got {total_power}")));
    }
    if singular_values.iter().any(|&v| !(v >= 0.0) || !v.is_finite()) {
        return Err(invalid("singular_values", "must be finite and >= 0"));
    }
    // Inverse gains sigma^2 / nu^2; zero singular values never get power.
    let floors: Vec<f64> = singular_values
        .iter()
        .map(|&v| if v > 0.0 { noise_variance / (v * v) } else { f64::INFINITY })
        .collect();
    let min_floor = floors.iter().copied().fold(f64::INFINITY, f64::min);
    if !min_floor.is_finite() {
        return Err(Error::RankZero);
    }
    let filled = |mu: f64| -> f64 { floors.iter().map(|&f| (mu - f).max(0.0)).sum() };

    let mut lo = min_floor;
    let mut hi = min_floor + total_power;
    while hi - lo > 1e-12 * hi {
        let mid = 0.5 * (lo + hi);
        if filled(mid) > total_power {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    let water_level = 0.5 * (lo + hi);
    let powers = floors.iter().map(|&f| (water_level - f).max(0.0)).collect();
    Ok(PowerAllocation {
        powers,
        total: total_power,
        water_level,
    })
}

fn usable_singular_values(h: &TransferMatrix) -> Result<Vec<f64>> {
    let sv = h.singular_values();
    let max = sv.first().copied().unwrap_or(0.0);
    if max == 0.0 {
        return Err(Error::RankZero);
    }
    Ok(sv.into_iter().filter(|&s| s > RANK_CUTOFF * max).collect())
}

/// Shannon capacity in bits/s/Hz with water-filling.
pub fn capacity(h: &TransferMatrix, total_power: f64, noise_variance: f64) -> Result<f64> {
    let sv = usable_singular_values(h)?;
    let alloc = waterfill(&sv, total_power, noise_variance)?;
    Ok(sv
        .iter()
        .zip(&alloc.powers)
        .map(|(&nu, &p)| (1.0 + nu * nu * p / noise_variance).log2())
        .sum())
}

/// Capacity with the total power split evenly over the nonzero subchannels.
pub fn equal_power_capacity(h: &TransferMatrix, total_power: f64, noise_variance: f64) -> Result<f64> {
    let sv = usable_singular_values(h)?;
    let p = total_power / sv.len() as f64;
    Ok(sv.iter().map(|&nu| (1.0 + nu * nu * p / noise_variance).log2()).sum())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepScenario {
    pub system: System,
    /// Geometry template; its distance is replaced at every grid point.
    pub geometry: LinkGeometry,
    pub target_snr_db: f64,
    /// Boresight distances in meters, strictly increasing.
    pub distances: Vec<f64>,
    pub beta: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CurvePoint {
    pub distance_m: f64,
    pub distance_wavelengths: f64,
    pub cg: f64,
    pub capacity_bits: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CapacityCurve {
    pub points: Vec<CurvePoint>,
    pub system: System,
    pub target_snr_db: f64,
    pub wavelength: f64,
    pub rx_aperture: f64,
}

impl CapacityCurve {
    pub fn peak(&self) -> CurvePoint {
        *self
            .points
            .iter()
            .max_by(|a, b| a.cg.total_cmp(&b.cg))
            .expect("curves are nonempty")
    }
}

/// `n` log-spaced points from `start` to `end` inclusive.
pub fn log_spaced(start: f64, end: f64, n: usize) -> Vec<f64> {
    if n == 1 {
        return vec![start];
    }
    let (a, b) = (start.ln(), end.ln());
    (0..n)
        .map(|i| (a + (b - a) * i as f64 / (n - 1) as f64).exp())
        .collect()
}

/// Capacity gain over SISO at each distance, recalibrating the transmit
/// power so the reference link always sees the target SNR.
pub fn capacity_gain_sweep(scenario: &SweepScenario) -> Result<CapacityCurve> {
    let grid = &scenario.distances;
    if grid.is_empty() {
        return Err(invalid("distances", "empty distance grid"));
    }
    if grid.windows(2).any(|w| w[1] <= w[0]) {
        return Err(invalid("distances", "grid must be strictly increasing"));
    }
    let snr = 10f64.powf(scenario.target_snr_db / 10.0);
    let siso = (1.0 + snr).log2();
    let lambda = scenario.geometry.wavelength;
    let points = grid
        .par_iter()
        .map(|&d| -> Result<CurvePoint> {
            let geom = scenario.geometry.at_distance(d)?;
            let p_total = calibrate_total_power(&geom, scenario.target_snr_db, 1.0)?;
            let h = build_channel(&geom, &scenario.system, scenario.beta)?;
            let c = capacity(&h, p_total, 1.0)?;
            Ok(CurvePoint {
                distance_m: d,
                distance_wavelengths: d / lambda,
                cg: c / siso,
                capacity_bits: c,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(CapacityCurve {
        points,
        system: scenario.system.clone(),
        target_snr_db: scenario.target_snr_db,
        wavelength: lambda,
        rx_aperture: scenario.geometry.rx_aperture,
    })
}

/// Largest distance (meters) at which the curve still reaches `target_cg`,
/// linearly interpolated onto the next grid point.
pub fn distance_at_cg(curve: &CapacityCurve, target_cg: f64) -> Result<f64> {
    let pts = &curve.points;
    let last = pts
        .iter()
        .rposition(|p| p.cg >= target_cg)
        .ok_or(Error::TargetUnreachable { target: target_cg })?;
    if last + 1 == pts.len() {
        return Err(Error::NotBracketed { target: target_cg });
    }
    let (a, b) = (pts[last], pts[last + 1]);
    let t = (a.cg - target_cg) / (a.cg - b.cg);
    Ok(a.distance_m + t * (b.distance_m - a.distance_m))
}

/// Like [`distance_at_cg`], but a curve whose peak falls short of the target
/// by at most `peak_tolerance` is read at its own peak level: such a curve
/// touches the target, and the crossing is where its tail leaves the peak.
pub fn distance_at_cg_touching(curve: &CapacityCurve, target_cg: f64, peak_tolerance: f64) -> Result<f64> {
    let peak = curve.peak().cg;
    if peak >= target_cg || peak < target_cg - peak_tolerance {
        return distance_at_cg(curve, target_cg);
    }
    distance_at_cg(curve, peak)
}
