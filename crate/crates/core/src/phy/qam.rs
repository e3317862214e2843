//! Gray-coded square QAM with unit average power.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Modulation {
    Qpsk,
    Qam16,
    Qam64,
}

impl Modulation {
    pub const ALL: [Modulation; 3] = [Modulation::Qpsk, Modulation::Qam16, Modulation::Qam64];

    pub fn bits_per_symbol(self) -> usize {
        match self {
            Modulation::Qpsk => 2,
            Modulation::Qam16 => 4,
            Modulation::Qam64 => 6,
        }
    }

    /// Levels per axis.
    fn side(self) -> usize {
        1 << (self.bits_per_symbol() / 2)
    }

    /// Scale taking the odd-integer grid to unit average power,
    /// `1 / sqrt(2 (M - 1) / 3)` for an M-point constellation.
    pub fn scale(self) -> f64 {
        let m = (self.side() * self.side()) as f64;
        (1.5 / (m - 1.0)).sqrt()
    }

    pub fn name(self) -> &'static str {
        match self {
            Modulation::Qpsk => "qpsk",
            Modulation::Qam16 => "qam16",
            Modulation::Qam64 => "qam64",
        }
    }

    /// All constellation points, indexed by their bit label (MSB first).
    pub fn constellation(self) -> Vec<Complex64> {
        let bps = self.bits_per_symbol();
        (0..1usize << bps)
            .map(|label| {
                let bits: Vec<bool> = (0..bps).rev().map(|b| label >> b & 1 == 1).collect();
                map_symbol(&bits, self)
            })
            .collect()
    }
}

fn gray_to_index(bits: &[bool]) -> usize {
    let mut index = 0usize;
    let mut acc = false;
    for &b in bits {
        acc ^= b;
        index = index << 1 | acc as usize;
    }
    index
}

fn index_to_gray(index: usize, width: usize, out: &mut Vec<bool>) {
    let gray = index ^ (index >> 1);
    for b in (0..width).rev() {
        out.push(gray >> b & 1 == 1);
    }
}

/// First half of the bits picks the in-phase level, second half quadrature.
fn map_symbol(bits: &[bool], modulation: Modulation) -> Complex64 {
    let half = bits.len() / 2;
    let side = modulation.side() as f64;
    let level = |b: &[bool]| 2.0 * gray_to_index(b) as f64 - (side - 1.0);
    Complex64::new(level(&bits[..half]), level(&bits[half..])) * modulation.scale()
}

pub fn qam_map(bits: &[bool], modulation: Modulation) -> Result<Vec<Complex64>> {
    let bps = modulation.bits_per_symbol();
    if !bits.len().is_multiple_of(bps) {
        return Err(Error::BadLength {
            len: bits.len(),
            multiple: bps,
        });
    }
    Ok(bits.chunks_exact(bps).map(|c| map_symbol(c, modulation)).collect())
}

/// Hard-decision nearest-point demapping.
pub fn qam_demap(symbols: &[Complex64], modulation: Modulation) -> Vec<bool> {
    let mut out = Vec::with_capacity(symbols.len() * modulation.bits_per_symbol());
    for &s in symbols {
        demap_into(s, modulation, &mut out);
    }
    out
}

pub(crate) fn demap_into(symbol: Complex64, modulation: Modulation, out: &mut Vec<bool>) {
    let side = modulation.side();
    let width = modulation.bits_per_symbol() / 2;
    let inv = 1.0 / modulation.scale();
    let max = (side - 1) as f64;
    let index = |x: f64| -> usize { ((x * inv + max) / 2.0).round().clamp(0.0, max) as usize };
    index_to_gray(index(symbol.re), width, out);
    index_to_gray(index(symbol.im), width, out);
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn qpsk_points_unit_magnitude() {
        let pts = Modulation::Qpsk.constellation();
        assert_eq!(pts.len(), 4);
        assert!(pts.iter().all(|p| (p.norm() - 1.0).abs() < 1e-15));
    }

    #[test]
    fn scale_factors_match_brute_force() {
        for (m, side) in [(Modulation::Qam16, 4i32), (Modulation::Qam64, 8)] {
            let levels: Vec<f64> = (0..side).map(|i| (2 * i - (side - 1)) as f64).collect();
            let mean: f64 = levels
                .iter()
                .flat_map(|&a| levels.iter().map(move |&b| a * a + b * b))
                .sum::<f64>()
                / (side * side) as f64;
            assert!((m.scale() - 1.0 / mean.sqrt()).abs() < 1e-15);
        }
        assert!((Modulation::Qam16.scale() - 1.0 / 10f64.sqrt()).abs() < 1e-15);
        assert!((Modulation::Qam64.scale() - 1.0 / 42f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn unit_average_power() {
        for m in Modulation::ALL {
            let pts = m.constellation();
            let p = pts.iter().map(|p| p.norm_sqr()).sum::<f64>() / pts.len() as f64;
            assert!((p - 1.0).abs() < 1e-12, "{m:?}");
        }
    }

    #[test]
    fn gray_neighbours_differ_by_one_bit() {
        for m in Modulation::ALL {
            let pts = m.constellation();
            let d_min = 2.0 * m.scale();
            for (a, pa) in pts.iter().enumerate() {
                for (b, pb) in pts.iter().enumerate() {
                    if ((pa - pb).norm() - d_min).abs() < 1e-9 {
                        assert_eq!((a ^ b).count_ones(), 1, "{m:?} {a} {b}");
                    }
                }
            }
        }
    }

    #[test]
    fn round_trip_exact_points() {
        for m in Modulation::ALL {
            let bps = m.bits_per_symbol();
            let bits: Vec<bool> = (0..bps << bps).map(|i| (i * 7 + i / 3) % 5 < 2).collect();
            let syms = qam_map(&bits, m).unwrap();
            assert_eq!(qam_demap(&syms, m), bits);
        }
    }

    #[test]
    fn small_perturbation_keeps_decision() {
        let pts = Modulation::Qam16.constellation();
        let half = Modulation::Qam16.scale();
        // Halfway between two points, nudged toward the first.
        let mid = (pts[0] + pts[1]) / 2.0;
        let nudged = mid + (pts[0] - mid) * 1e-6 / half;
        let bits = qam_demap(&[nudged], Modulation::Qam16);
        assert_eq!(bits, qam_demap(&[pts[0]], Modulation::Qam16));
    }

    #[test]
    fn demap_then_map_lands_on_nearest_point() {
        for m in Modulation::ALL {
            let pts = m.constellation();
            for i in 0..100 {
                for j in 0..100 {
                    let s = Complex64::new(-1.6 + 0.032 * i as f64, -1.6 + 0.032 * j as f64);
                    let back = qam_map(&qam_demap(&[s], m), m).unwrap()[0];
                    let nearest = pts
                        .iter()
                        .map(|p| (p - s).norm())
                        .fold(f64::INFINITY, f64::min);
                    assert!(((back - s).norm() - nearest).abs() < 1e-12);
                }
            }
        }
    }

    #[test]
    fn bad_length() {
        assert_eq!(
            qam_map(&[true, false, true], Modulation::Qam16),
            Err(Error::BadLength { len: 3, multiple: 4 })
        );
    }
}
