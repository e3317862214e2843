//! 64-point OFDM framing: 56 active bins symmetric about a null DC bin,
//! 52 data and 4 pilots (pilots at +-7 and +-21).

use std::sync::Arc;

use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct OfdmConfig {
    pub fft_size: usize,
    pub cyclic_prefix: usize,
    /// Signed bin offsets from DC carrying data.
    pub data_bins: Vec<i32>,
    pub pilot_bins: Vec<i32>,
    pub bandwidth_hz: f64,
    pub symbols_per_frame: usize,
}

impl Default for OfdmConfig {
    fn default() -> Self {
        let pilots = vec![-21, -7, 7, 21];
        let data = (-28..=28)
            .filter(|b| *b != 0 && !pilots.contains(b))
            .collect();
        Self {
            fft_size: 64,
            cyclic_prefix: 16,
            data_bins: data,
            pilot_bins: pilots,
            bandwidth_hz: 20e6,
            symbols_per_frame: 40,
        }
    }
}

impl OfdmConfig {
    pub fn data_subcarriers(&self) -> usize {
        self.data_bins.len()
    }

    pub fn pilot_subcarriers(&self) -> usize {
        self.pilot_bins.len()
    }

    pub fn active_subcarriers(&self) -> usize {
        self.data_bins.len() + self.pilot_bins.len()
    }

    pub fn subcarrier_spacing_hz(&self) -> f64 {
        self.bandwidth_hz / self.fft_size as f64
    }

    pub fn symbol_len(&self) -> usize {
        self.fft_size + self.cyclic_prefix
    }

    pub fn validate(&self) -> Result<()> {
        let half = (self.fft_size / 2) as i32;
        let mut active: Vec<i32> = self.data_bins.iter().chain(&self.pilot_bins).copied().collect();
        active.sort_unstable();
        if active.windows(2).any(|w| w[0] == w[1]) {
            return Err(invalid("ofdm", "data and pilot bins overlap"));
        }
        if active.contains(&0) {
            return Err(invalid("ofdm", "DC bin must stay null"));
        }
        if active.iter().any(|&b| b <= -half || b >= half) {
            return Err(invalid("ofdm", "bin outside the transform"));
        }
        if active.iter().any(|b| active.binary_search(&-b).is_err()) {
            return Err(invalid("ofdm", "active bins must be symmetric around DC"));
        }
        if self.active_subcarriers() as f64 * self.subcarrier_spacing_hz() > self.bandwidth_hz {
            return Err(invalid("ofdm", "active band exceeds bandwidth"));
        }
        if self.cyclic_prefix > self.fft_size {
            return Err(invalid("ofdm", "cyclic prefix longer than symbol"));
        }
        if self.symbols_per_frame == 0 {
            return Err(invalid("symbols_per_frame", "must be positive"));
        }
        Ok(())
    }

    fn fft_index(&self, bin: i32) -> usize {
        bin.rem_euclid(self.fft_size as i32) as usize
    }
}

/// Frequency-domain content recovered from a block of OFDM symbols.
#[derive(Debug, Clone, PartialEq)]
pub struct OfdmSymbols {
    pub data: Vec<Complex64>,
    pub pilots: Vec<Complex64>,
}

/// Reusable transform plans for one configuration. Transforms are
/// unitary, so per-bin and per-sample powers agree.
#[derive(Clone)]
pub struct OfdmEngine {
    cfg: OfdmConfig,
    forward: Arc<dyn Fft<f64>>,
    inverse: Arc<dyn Fft<f64>>,
    data_idx: Vec<usize>,
    pilot_idx: Vec<usize>,
    norm: f64,
}

impl std::fmt::Debug for OfdmEngine {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("OfdmEngine").field("cfg", &self.cfg).finish()
    }
}

impl OfdmEngine {
    pub fn new(cfg: &OfdmConfig) -> Result<Self> {
        cfg.validate()?;
        let mut planner = FftPlanner::new();
        Ok(Self {
            forward: planner.plan_fft_forward(cfg.fft_size),
            inverse: planner.plan_fft_inverse(cfg.fft_size),
            data_idx: cfg.data_bins.iter().map(|&b| cfg.fft_index(b)).collect(),
            pilot_idx: cfg.pilot_bins.iter().map(|&b| cfg.fft_index(b)).collect(),
            norm: 1.0 / (cfg.fft_size as f64).sqrt(),
            cfg: cfg.clone(),
        })
    }

    pub fn config(&self) -> &OfdmConfig {
        &self.cfg
    }

    /// Maps data (and optionally pilot) symbols onto bins and returns time
    /// samples with cyclic prefix. Without pilots the pilot bins stay empty.
    pub fn modulate(&self, data: &[Complex64], pilots: Option<&[Complex64]>) -> Result<Vec<Complex64>> {
        let nd = self.cfg.data_subcarriers();
        if !data.len().is_multiple_of(nd) {
            return Err(Error::BadLength {
                len: data.len(),
                multiple: nd,
            });
        }
        let n_sym = data.len() / nd;
        let np = self.cfg.pilot_subcarriers();
        if let Some(p) = pilots {
            if p.len() != n_sym * np {
                return Err(Error::DimensionMismatch {
                    expected: n_sym * np,
                    got: p.len(),
                });
            }
        }
        let n = self.cfg.fft_size;
        let cp = self.cfg.cyclic_prefix;
        let mut out = Vec::with_capacity(n_sym * (n + cp));
        let mut buf = vec![Complex64::default(); n];
        for s in 0..n_sym {
            buf.iter_mut().for_each(|x| *x = Complex64::default());
            for (k, &idx) in self.data_idx.iter().enumerate() {
                buf[idx] = data[s * nd + k];
            }
            if let Some(p) = pilots {
                for (k, &idx) in self.pilot_idx.iter().enumerate() {
                    buf[idx] = p[s * np + k];
                }
            }
            self.inverse.process(&mut buf);
            buf.iter_mut().for_each(|x| *x *= self.norm);
            out.extend_from_slice(&buf[n - cp..]);
            out.extend_from_slice(&buf);
        }
        Ok(out)
    }

    pub fn demodulate(&self, samples: &[Complex64]) -> Result<OfdmSymbols> {
        let len = self.cfg.symbol_len();
        if !samples.len().is_multiple_of(len) {
            return Err(Error::BadLength {
                len: samples.len(),
                multiple: len,
            });
        }
        let n_sym = samples.len() / len;
        let cp = self.cfg.cyclic_prefix;
        let mut data = Vec::with_capacity(n_sym * self.data_idx.len());
        let mut pilots = Vec::with_capacity(n_sym * self.pilot_idx.len());
        let mut buf = vec![Complex64::default(); self.cfg.fft_size];
        for sym in samples.chunks_exact(len) {
            buf.copy_from_slice(&sym[cp..]);
            self.forward.process(&mut buf);
            data.extend(self.data_idx.iter().map(|&i| buf[i] * self.norm));
            pilots.extend(self.pilot_idx.iter().map(|&i| buf[i] * self.norm));
        }
        Ok(OfdmSymbols { data, pilots })
    }
}

pub fn ofdm_modulate(data: &[Complex64], cfg: &OfdmConfig) -> Result<Vec<Complex64>> {
    OfdmEngine::new(cfg)?.modulate(data, None)
}

pub fn ofdm_demodulate(samples: &[Complex64], cfg: &OfdmConfig) -> Result<OfdmSymbols> {
    OfdmEngine::new(cfg)?.demodulate(samples)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn ramp(n: usize) -> Vec<Complex64> {
        (0..n)
            .map(|i| Complex64::new((i as f64 * 0.37).sin(), (i as f64 * 1.3).cos()))
            .collect()
    }

    #[test]
    fn default_layout() {
        let cfg = OfdmConfig::default();
        cfg.validate().unwrap();
        assert_eq!(cfg.active_subcarriers(), 56);
        assert_eq!(cfg.data_subcarriers(), 52);
        assert_eq!(cfg.pilot_subcarriers(), 4);
        assert_eq!(cfg.subcarrier_spacing_hz(), 312_500.0);
    }

    #[test]
    fn round_trip_identity() {
        let cfg = OfdmConfig::default();
        let data = ramp(52 * 3);
        let pilots = ramp(12);
        let engine = OfdmEngine::new(&cfg).unwrap();
        let out = engine.demodulate(&engine.modulate(&data, Some(&pilots)).unwrap()).unwrap();
        for (a, b) in out.data.iter().zip(&data) {
            assert!((a - b).norm() < 1e-12);
        }
        for (a, b) in out.pilots.iter().zip(&pilots) {
            assert!((a - b).norm() < 1e-12);
        }
    }

    #[test]
    fn zeros_in_zeros_out() {
        let samples = ofdm_modulate(&vec![Complex64::default(); 104], &OfdmConfig::default()).unwrap();
        assert_eq!(samples.len(), 160);
        assert!(samples.iter().all(|s| s.norm() == 0.0));
    }

    #[test]
    fn parseval_without_prefix() {
        let cfg = OfdmConfig {
            cyclic_prefix: 0,
            ..OfdmConfig::default()
        };
        let data = ramp(52 * 4);
        let samples = ofdm_modulate(&data, &cfg).unwrap();
        let time: f64 = samples.iter().map(|s| s.norm_sqr()).sum();
        let freq: f64 = data.iter().map(|s| s.norm_sqr()).sum();
        assert!((time - freq).abs() < 1e-10 * freq);
    }

    #[test]
    fn cyclic_prefix_copies_tail() {
        let cfg = OfdmConfig::default();
        let s = ofdm_modulate(&ramp(52), &cfg).unwrap();
        assert_eq!(&s[..16], &s[64..80]);
    }

    #[test]
    fn single_bin_is_a_tone() {
        let cfg = OfdmConfig::default();
        let mut data = vec![Complex64::default(); 52];
        // Bin +5 is the 33rd data bin (-28..-1 minus two pilots = 26, then 1..5).
        let k = cfg.data_bins.iter().position(|&b| b == 5).unwrap();
        data[k] = Complex64::new(1.0, 0.0);
        let s = ofdm_modulate(&data, &cfg).unwrap();
        for (t, x) in s[16..].iter().enumerate() {
            let want = Complex64::from_polar(1.0 / 8.0, 2.0 * PI * 5.0 * t as f64 / 64.0);
            assert!((x - want).norm() < 1e-12);
        }
        // Independent DFT oracle: peak bin is +5.
        let peak = (0..64)
            .max_by(|&a, &b| {
                let mag = |k: usize| {
                    s[16..]
                        .iter()
                        .enumerate()
                        .map(|(t, x)| x * Complex64::from_polar(1.0, -2.0 * PI * (k * t) as f64 / 64.0))
                        .sum::<Complex64>()
                        .norm()
                };
                mag(a).total_cmp(&mag(b))
            })
            .unwrap();
        assert_eq!(peak, 5);
    }

    #[test]
    fn length_mismatch() {
        assert!(ofdm_modulate(&ramp(51), &OfdmConfig::default()).is_err());
        assert!(ofdm_demodulate(&ramp(79), &OfdmConfig::default()).is_err());
    }

    #[test]
    fn layout_validation() {
        let mut cfg = OfdmConfig::default();
        cfg.data_bins.push(0);
        assert!(cfg.validate().is_err());
        let mut cfg = OfdmConfig::default();
        cfg.data_bins.retain(|&b| b != 3);
        assert!(cfg.validate().is_err());
    }
}
