//! Line-of-sight transfer matrices.
//!
//! Entry `(m, n)` couples transmit element `n` to receive element `m`:
//!
//! ```text
//! h_mn = beta * lambda / (4 pi d_mn) * exp(-j k d_mn) * BP_n(phi_mn)
//! ```
//!
//! with `BP_n == 1` for conventional horn-fed MIMO.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::geometry::{azimuth_from_tx, path_distance, LinkGeometry, Point, Side};
use crate::linalg::CMatrix;
use crate::modegroup::{FeedErrorModel, ModeGroup};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ChannelKind {
    Mimo,
    MgMimo,
    PsoamMimo,
}

/// What sits at each transmit element.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum System {
    /// Unit-gain, equi-phase elements.
    Mimo,
    /// One mode-group per transmit element.
    MgMimo { groups: Vec<ModeGroup> },
    /// One single-order PSOAM wave per transmit element.
    PsoamMimo { orders: Vec<i32> },
}

impl System {
    pub fn kind(&self) -> ChannelKind {
        match self {
            System::Mimo => ChannelKind::Mimo,
            System::MgMimo { .. } => ChannelKind::MgMimo,
            System::PsoamMimo { .. } => ChannelKind::PsoamMimo,
        }
    }

    /// Number of transmit elements the system description implies, if any.
    pub fn n_streams(&self) -> Option<usize> {
        match self {
            System::Mimo => None,
            System::MgMimo { groups } => Some(groups.len()),
            System::PsoamMimo { orders } => Some(orders.len()),
        }
    }

    /// Transmit patterns, `None` for unit-gain elements.
    pub fn patterns(&self) -> Option<Vec<ModeGroup>> {
        match self {
            System::Mimo => None,
            System::MgMimo { groups } => Some(groups.clone()),
            System::PsoamMimo { orders } => {
                Some(orders.iter().map(|&l| ModeGroup::single(l)).collect())
            }
        }
    }

    /// Same system with feed errors applied to every mode-group. Each group
    /// gets its own stream of errors derived from `err.seed` and its index.
    pub fn perturbed(&self, err: &FeedErrorModel) -> System {
        match self {
            System::MgMimo { groups } => System::MgMimo {
                groups: groups
                    .iter()
                    .enumerate()
                    .map(|(i, g)| g.perturb(&err.with_seed(crate::derive_seed(err.seed, i as u64))))
                    .collect(),
            },
            other => other.clone(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TransferMatrix {
    /// `n_rx x n_tx` complex amplitude gains.
    pub entries: CMatrix,
    pub wavelength: f64,
    pub kind: ChannelKind,
}

impl TransferMatrix {
    pub fn n_rx(&self) -> usize {
        self.entries.nrows()
    }

    pub fn n_tx(&self) -> usize {
        self.entries.ncols()
    }

    pub fn singular_values(&self) -> Vec<f64> {
        crate::linalg::singular_values(&self.entries)
    }

    /// Entries as `(re, im)` pairs, row-major.
    pub fn to_pairs(&self) -> Vec<Vec<(f64, f64)>> {
        (0..self.n_rx())
            .map(|m| {
                (0..self.n_tx())
                    .map(|n| {
                        let h = self.entries[(m, n)];
                        (h.re, h.im)
                    })
                    .collect()
            })
            .collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NoiseModel {
    /// Complex noise variance per receive element and sample.
    pub variance: f64,
    pub seed: u64,
}

impl NoiseModel {
    pub fn new(variance: f64, seed: u64) -> Result<Self> {
        if !(variance > 0.0 && variance.is_finite()) {
            return Err(invalid("noise_variance", format!("must be > 0, got {variance}")));
        }
        Ok(Self { variance, seed })
    }
}

/// Free-space coupling `lambda / (4 pi d) * exp(-j k d)`.
pub fn free_space(distance: f64, wavelength: f64) -> Complex64 {
    let k = 2.0 * PI / wavelength;
    Complex64::from_polar(wavelength / (4.0 * PI * distance), -k * distance)
}

/// Builds a transfer matrix from explicit element positions. `patterns`
/// holds one transmit beam pattern per transmit element.
pub fn from_positions(
    tx: &[Point],
    rx: &[Point],
    wavelength: f64,
    beta: f64,
    patterns: Option<&[ModeGroup]>,
    kind: ChannelKind,
) -> Result<TransferMatrix> {
    if let Some(p) = patterns {
        if p.len() != tx.len() {
            return Err(Error::DimensionMismatch {
                expected: tx.len(),
                got: p.len(),
            });
        }
    }
    let mut entries = CMatrix::zeros(rx.len(), tx.len());
    for (m, &r) in rx.iter().enumerate() {
        for (n, &t) in tx.iter().enumerate() {
            let d = path_distance(t, r);
            if d == 0.0 {
                return Err(Error::ZeroPropagationDistance { tx: n, rx: m });
            }
            let mut h = free_space(d, wavelength) * beta;
            if let Some(p) = patterns {
                h *= p[n].beam_pattern(azimuth_from_tx(t, r)?);
            }
            entries[(m, n)] = h;
        }
    }
    Ok(TransferMatrix {
        entries,
        wavelength,
        kind,
    })
}

pub fn build_mimo_channel(geom: &LinkGeometry, beta: f64) -> Result<TransferMatrix> {
    geom.validate()?;
    from_positions(
        &geom.element_positions(Side::Tx),
        &geom.element_positions(Side::Rx),
        geom.wavelength,
        beta,
        None,
        ChannelKind::Mimo,
    )
}

pub fn build_mg_channel(
    geom: &LinkGeometry,
    groups: &[ModeGroup],
    beta: f64,
) -> Result<TransferMatrix> {
    geom.validate()?;
    if groups.len() != geom.n_tx {
        return Err(Error::DimensionMismatch {
            expected: geom.n_tx,
            got: groups.len(),
        });
    }
    from_positions(
        &geom.element_positions(Side::Tx),
        &geom.element_positions(Side::Rx),
        geom.wavelength,
        beta,
        Some(groups),
        ChannelKind::MgMimo,
    )
}

/// PSOAM-MIMO is the mode-group channel with single-mode groups.
pub fn build_psoam_channel(
    geom: &LinkGeometry,
    orders: &[i32],
    beta: f64,
) -> Result<TransferMatrix> {
    let groups: Vec<ModeGroup> = orders.iter().map(|&l| ModeGroup::single(l)).collect();
    let mut h = build_mg_channel(geom, &groups, beta)?;
    h.kind = ChannelKind::PsoamMimo;
    Ok(h)
}

pub fn build_channel(geom: &LinkGeometry, system: &System, beta: f64) -> Result<TransferMatrix> {
    match system {
        System::Mimo => build_mimo_channel(geom, beta),
        System::MgMimo { groups } => build_mg_channel(geom, groups, beta),
        System::PsoamMimo { orders } => build_psoam_channel(geom, orders, beta),
    }
}

/// Total transmit power that gives the reference SISO link (unit-gain
/// element at the transmit centroid, one at the receive centroid) the
/// requested receiving SNR.
pub fn calibrate_total_power(geom: &LinkGeometry, target_snr_db: f64, noise_variance: f64) -> Result<f64> {
    if !target_snr_db.is_finite() {
        return Err(invalid("target_snr_db", "must be finite"));
    }
    let d = path_distance(geom.tx_centroid(), geom.rx_centroid());
    let h_ref = free_space(d, geom.wavelength).norm_sqr();
    Ok(10f64.powf(target_snr_db / 10.0) * noise_variance / h_ref)
}
