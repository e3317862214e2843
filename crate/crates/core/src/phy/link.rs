//! Monte-Carlo link simulation: bits -> QAM -> OFDM -> H -> AWGN -> ZF -> bits.

use num_complex::Complex64;
use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::ofdm::{OfdmConfig, OfdmEngine};
use super::qam::{demap_into, qam_map, Modulation};
use crate::channel::{build_channel, calibrate_total_power, NoiseModel, System, TransferMatrix};
use crate::derive_seed;
use crate::error::{invalid, Error, Result};
use crate::geometry::LinkGeometry;
use crate::linalg::{pseudo_inverse, CMatrix};
use crate::modegroup::FeedErrorModel;

/// Payload bits per CRC-protected frame.
pub const FRAME_PAYLOAD_BITS: usize = 4096;
const CRC_BITS: usize = 32;

/// Raw-BER level below which hard-decision FEC would clean up the stream.
pub const FEC_THRESHOLD: f64 = 3.8e-3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Csi {
    Perfect,
    /// Least-squares estimate from time-orthogonal pilots on the pilot bins.
    PilotEstimated,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LinkConfig {
    pub modulation: Modulation,
    pub geometry: LinkGeometry,
    pub system: System,
    pub snr_grid_db: Vec<f64>,
    pub bits_per_point: usize,
    pub csi: Csi,
    pub seed: u64,
    pub ofdm: OfdmConfig,
    pub beta: f64,
    pub noise_variance: f64,
    pub feed_error: Option<FeedErrorModel>,
    /// CRC frames per SNR point for the success rate; 0 skips it.
    pub frames_per_point: usize,
}

impl LinkConfig {
    pub fn new(modulation: Modulation, geometry: LinkGeometry, system: System, snr_grid_db: Vec<f64>) -> Self {
        let ofdm = OfdmConfig::default();
        let bits_per_point = modulation.bits_per_symbol() * ofdm.data_subcarriers() * geometry.n_tx * 200;
        Self {
            modulation,
            geometry,
            system,
            snr_grid_db,
            bits_per_point,
            csi: Csi::Perfect,
            seed: 0,
            ofdm,
            beta: 1.0,
            noise_variance: 1.0,
            feed_error: None,
            frames_per_point: 0,
        }
    }

    pub fn n_streams(&self) -> usize {
        self.geometry.n_tx
    }

    /// Bits carried by one OFDM symbol across all streams.
    pub fn bits_per_ofdm_symbol(&self) -> usize {
        self.modulation.bits_per_symbol() * self.ofdm.data_subcarriers() * self.n_streams()
    }

    pub fn validate(&self) -> Result<()> {
        self.geometry.validate()?;
        self.ofdm.validate()?;
        if self.snr_grid_db.is_empty() {
            return Err(invalid("snr_grid_db", "empty SNR grid"));
        }
        if self.snr_grid_db.iter().any(|s| !s.is_finite()) {
            return Err(invalid("snr_grid_db", "SNR values must be finite"));
        }
        if let Some(n) = self.system.n_streams() {
            if n != self.geometry.n_tx {
                return Err(Error::DimensionMismatch {
                    expected: self.geometry.n_tx,
                    got: n,
                });
            }
        }
        if self.geometry.n_rx < self.geometry.n_tx {
            return Err(invalid("n_rx", "zero-forcing needs at least as many receivers as streams"));
        }
        if self.bits_per_point == 0 || !self.bits_per_point.is_multiple_of(self.bits_per_ofdm_symbol()) {
            return Err(Error::BadLength {
                len: self.bits_per_point,
                multiple: self.bits_per_ofdm_symbol(),
            });
        }
        if !(self.noise_variance > 0.0 && self.noise_variance.is_finite()) {
            return Err(invalid("noise_variance", "must be > 0"));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StreamStats {
    pub ber: f64,
    pub evm_pct: f64,
    pub bit_errors: u64,
    pub bits: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SnrPoint {
    pub snr_db: f64,
    pub streams: Vec<StreamStats>,
    pub eta_s: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LinkReport {
    pub points: Vec<SnrPoint>,
    pub spectrum_efficiency: f64,
    /// Set when the channel had dependent columns and detection fell back
    /// to the truncated pseudo-inverse.
    pub singular_channel: bool,
}

impl LinkReport {
    /// Bit error rate over all streams at each SNR point.
    pub fn aggregate_ber(&self) -> Vec<f64> {
        self.points
            .iter()
            .map(|p| {
                let errors: u64 = p.streams.iter().map(|s| s.bit_errors).sum();
                let bits: u64 = p.streams.iter().map(|s| s.bits).sum();
                errors as f64 / bits as f64
            })
            .collect()
    }
}

/// `y = H x + n` per sample. Each stream is scaled by `sqrt(P_total / n_tx)`,
/// so unit-power symbols put `P_total` on every active subcarrier in total.
pub fn transmit(
    frames: &[Vec<Complex64>],
    h: &TransferMatrix,
    noise: Option<&NoiseModel>,
    total_power: f64,
) -> Result<Vec<Vec<Complex64>>> {
    let n_tx = h.n_tx();
    if frames.len() != n_tx {
        return Err(Error::DimensionMismatch {
            expected: n_tx,
            got: frames.len(),
        });
    }
    let len = frames[0].len();
    if let Some(bad) = frames.iter().find(|f| f.len() != len) {
        return Err(Error::DimensionMismatch {
            expected: len,
            got: bad.len(),
        });
    }
    let amp = (total_power / n_tx as f64).sqrt();
    let g = h.entries.scale(amp);
    Ok(apply_channel(frames, &g, noise))
}

fn apply_channel(frames: &[Vec<Complex64>], g: &CMatrix, noise: Option<&NoiseModel>) -> Vec<Vec<Complex64>> {
    let len = frames[0].len();
    let mut rng = noise.map(|n| ChaCha8Rng::seed_from_u64(n.seed));
    let sigma = noise.map_or(0.0, |n| (n.variance / 2.0).sqrt());
    (0..g.nrows())
        .map(|m| {
            let row: Vec<Complex64> = (0..g.ncols()).map(|n| g[(m, n)]).collect();
            (0..len)
                .map(|t| {
                    let mut y: Complex64 = row.iter().zip(frames).map(|(h, x)| h * x[t]).sum();
                    if let Some(rng) = rng.as_mut() {
                        let re: f64 = rng.sample(StandardNormal);
                        let im: f64 = rng.sample(StandardNormal);
                        y += Complex64::new(re, im) * sigma;
                    }
                    y
                })
                .collect()
        })
        .collect()
}

/// Linear zero-forcing detector, `x_hat = pinv(H) y`.
#[derive(Debug, Clone)]
pub struct ZeroForcing {
    pinv: CMatrix,
}

impl ZeroForcing {
    /// Rejects channels without full column rank.
    pub fn new(h_est: &CMatrix) -> Result<Self> {
        Ok(Self {
            pinv: pseudo_inverse(h_est, true)?,
        })
    }

    /// Pseudo-inverse with numerically-zero singular values dropped.
    pub fn truncated(h_est: &CMatrix) -> Result<Self> {
        Ok(Self {
            pinv: pseudo_inverse(h_est, false)?,
        })
    }

    pub fn n_rx(&self) -> usize {
        self.pinv.ncols()
    }

    pub fn detect(&self, y: &[Complex64], out: &mut [Complex64]) {
        for (k, o) in out.iter_mut().enumerate() {
            *o = y.iter().enumerate().map(|(m, v)| self.pinv[(k, m)] * v).sum();
        }
    }
}

/// Applies ZF to per-receiver sample streams; returns per-transmitter streams.
pub fn zf_detect(y: &[Vec<Complex64>], h_est: &CMatrix) -> Result<Vec<Vec<Complex64>>> {
    if y.len() != h_est.nrows() {
        return Err(Error::DimensionMismatch {
            expected: h_est.nrows(),
            got: y.len(),
        });
    }
    let zf = ZeroForcing::new(h_est)?;
    let len = y.first().map_or(0, Vec::len);
    let n_tx = h_est.ncols();
    let mut out = vec![Vec::with_capacity(len); n_tx];
    let mut col = vec![Complex64::default(); y.len()];
    let mut xh = vec![Complex64::default(); n_tx];
    for t in 0..len {
        for (m, stream) in y.iter().enumerate() {
            col[m] = stream[t];
        }
        zf.detect(&col, &mut xh);
        for (k, x) in xh.iter().enumerate() {
            out[k].push(*x);
        }
    }
    Ok(out)
}

/// `bits/symbol * streams * data / active` in bits/s/Hz.
pub fn spectrum_efficiency(modulation: Modulation, n_streams: usize, cfg: &OfdmConfig) -> f64 {
    modulation.bits_per_symbol() as f64 * n_streams as f64 * cfg.data_subcarriers() as f64
        / cfg.active_subcarriers() as f64
}

fn random_bits(rng: &mut impl RngCore, n: usize) -> Vec<bool> {
    let mut out = Vec::with_capacity(n);
    while out.len() < n {
        let word = rng.next_u64();
        let take = (n - out.len()).min(64);
        out.extend((0..take).map(|b| word >> b & 1 == 1));
    }
    out
}

/// Everything fixed for one SNR point.
struct PointLink<'a> {
    cfg: &'a LinkConfig,
    ofdm: &'a OfdmEngine,
    /// Channel including the per-stream transmit amplitude.
    effective: CMatrix,
    noise_variance: f64,
}

struct BlockOutput {
    bits: Vec<Vec<bool>>,
    error_energy: Vec<f64>,
    reference_energy: Vec<f64>,
}

impl PointLink<'_> {
    fn new<'a>(cfg: &'a LinkConfig, ofdm: &'a OfdmEngine, h: &TransferMatrix, snr_db: f64) -> Result<PointLink<'a>> {
        let p_total = calibrate_total_power(&cfg.geometry, snr_db, cfg.noise_variance)?;
        let amp = (p_total / h.n_tx() as f64).sqrt();
        Ok(PointLink {
            cfg,
            ofdm,
            effective: h.entries.scale(amp),
            noise_variance: cfg.noise_variance,
        })
    }

    fn detector(&self, h_est: &CMatrix) -> Result<(ZeroForcing, bool)> {
        match ZeroForcing::new(h_est) {
            Ok(zf) => Ok((zf, false)),
            Err(Error::SingularChannel) => Ok((ZeroForcing::truncated(h_est)?, true)),
            Err(e) => Err(e),
        }
    }

    /// Pilot pattern: OFDM symbol `s` carries unit pilots on stream `s mod N`.
    fn pilots(&self, stream: usize, n_sym: usize) -> Vec<Complex64> {
        let np = self.cfg.ofdm.pilot_subcarriers();
        let n = self.cfg.n_streams();
        (0..n_sym)
            .flat_map(|s| {
                let v = if s % n == stream { Complex64::new(1.0, 0.0) } else { Complex64::default() };
                std::iter::repeat_n(v, np)
            })
            .collect()
    }

    fn estimate(&self, pilots_rx: &[Vec<Complex64>], n_sym: usize) -> CMatrix {
        let np = self.cfg.ofdm.pilot_subcarriers();
        let n_tx = self.cfg.n_streams();
        let mut est = CMatrix::zeros(pilots_rx.len(), n_tx);
        let mut counts = vec![0usize; n_tx];
        for s in 0..n_sym {
            counts[s % n_tx] += np;
        }
        for (m, p) in pilots_rx.iter().enumerate() {
            for s in 0..n_sym {
                let n = s % n_tx;
                let sum: Complex64 = p[s * np..(s + 1) * np].iter().sum();
                est[(m, n)] += sum;
            }
            for (n, &c) in counts.iter().enumerate() {
                if c > 0 {
                    est[(m, n)] /= c as f64;
                }
            }
        }
        est
    }

    /// Sends one block of bits per stream and returns the detected bits.
    fn run_block(&self, bits: &[Vec<bool>], noise_seed: u64) -> Result<(BlockOutput, bool)> {
        let modulation = self.cfg.modulation;
        let symbols: Vec<Vec<Complex64>> = bits
            .iter()
            .map(|b| qam_map(b, modulation))
            .collect::<Result<_>>()?;
        let n_sym = symbols[0].len() / self.cfg.ofdm.data_subcarriers();
        let with_pilots = self.cfg.csi == Csi::PilotEstimated;
        let tx: Vec<Vec<Complex64>> = symbols
            .iter()
            .enumerate()
            .map(|(n, s)| {
                let p = with_pilots.then(|| self.pilots(n, n_sym));
                self.ofdm.modulate(s, p.as_deref())
            })
            .collect::<Result<_>>()?;
        let noise = NoiseModel::new(self.noise_variance, noise_seed)?;
        let rx = apply_channel(&tx, &self.effective, Some(&noise));
        let demod: Vec<_> = rx
            .iter()
            .map(|r| self.ofdm.demodulate(r))
            .collect::<Result<_>>()?;

        let h_est = if with_pilots {
            let pilots: Vec<Vec<Complex64>> = demod.iter().map(|d| d.pilots.clone()).collect();
            self.estimate(&pilots, n_sym)
        } else {
            self.effective.clone()
        };
        let (zf, singular) = self.detector(&h_est)?;

        let n_tx = self.cfg.n_streams();
        let n_data = symbols[0].len();
        let mut out_bits = vec![Vec::with_capacity(bits[0].len()); n_tx];
        let mut err = vec![0.0; n_tx];
        let mut reference = vec![0.0; n_tx];
        let mut col = vec![Complex64::default(); demod.len()];
        let mut xh = vec![Complex64::default(); n_tx];
        #[allow(clippy::needless_range_loop)] // `i` indexes every stream's symbols
        for i in 0..n_data {
            for (m, d) in demod.iter().enumerate() {
                col[m] = d.data[i];
            }
            zf.detect(&col, &mut xh);
            for k in 0..n_tx {
                let x = symbols[k][i];
                err[k] += (xh[k] - x).norm_sqr();
                reference[k] += x.norm_sqr();
                demap_into(xh[k], modulation, &mut out_bits[k]);
            }
        }
        Ok((
            BlockOutput {
                bits: out_bits,
                error_energy: err,
                reference_energy: reference,
            },
            singular,
        ))
    }
}

fn link_channel(cfg: &LinkConfig) -> Result<TransferMatrix> {
    let system = match &cfg.feed_error {
        Some(err) => cfg.system.perturbed(err),
        None => cfg.system.clone(),
    };
    build_channel(&cfg.geometry, &system, cfg.beta)
}

fn simulate_point(cfg: &LinkConfig, ofdm: &OfdmEngine, h: &TransferMatrix, index: usize) -> Result<(SnrPoint, bool)> {
    let snr_db = cfg.snr_grid_db[index];
    let link = PointLink::new(cfg, ofdm, h, snr_db)?;
    let point_seed = derive_seed(cfg.seed, index as u64);
    let mut rng = ChaCha8Rng::seed_from_u64(point_seed);
    let n_tx = cfg.n_streams();
    let per_symbol = cfg.modulation.bits_per_symbol() * cfg.ofdm.data_subcarriers();
    let total_symbols = cfg.bits_per_point / cfg.bits_per_ofdm_symbol();
    let mut errors = vec![0u64; n_tx];
    let mut bits_sent = vec![0u64; n_tx];
    let mut err_energy = vec![0.0; n_tx];
    let mut ref_energy = vec![0.0; n_tx];
    let mut singular = false;
    let mut done = 0;
    let mut block = 0u64;
    while done < total_symbols {
        let n_sym = cfg.ofdm.symbols_per_frame.min(total_symbols - done);
        let bits: Vec<Vec<bool>> = (0..n_tx).map(|_| random_bits(&mut rng, n_sym * per_symbol)).collect();
        let (out, sing) = link.run_block(&bits, derive_seed(point_seed, block + 1))?;
        singular |= sing;
        for k in 0..n_tx {
            errors[k] += bits[k].iter().zip(&out.bits[k]).filter(|(a, b)| a != b).count() as u64;
            bits_sent[k] += bits[k].len() as u64;
            err_energy[k] += out.error_energy[k];
            ref_energy[k] += out.reference_energy[k];
        }
        done += n_sym;
        block += 1;
    }
    let streams = (0..n_tx)
        .map(|k| StreamStats {
            ber: errors[k] as f64 / bits_sent[k] as f64,
            evm_pct: 100.0 * (err_energy[k] / ref_energy[k]).sqrt(),
            bit_errors: errors[k],
            bits: bits_sent[k],
        })
        .collect();
    let eta_s = if cfg.frames_per_point > 0 {
        Some(frames_at_point(cfg, ofdm, h, index, cfg.frames_per_point)?.0)
    } else {
        None
    };
    Ok((SnrPoint { snr_db, streams, eta_s }, singular))
}

/// Runs every SNR point of the configuration. Points run in parallel, each
/// from its own derived seed, so results do not depend on scheduling.
pub fn simulate_link(cfg: &LinkConfig) -> Result<LinkReport> {
    cfg.validate()?;
    let ofdm = OfdmEngine::new(&cfg.ofdm)?;
    let h = link_channel(cfg)?;
    let results = (0..cfg.snr_grid_db.len())
        .into_par_iter()
        .map(|i| simulate_point(cfg, &ofdm, &h, i))
        .collect::<Result<Vec<_>>>()?;
    let singular_channel = results.iter().any(|(_, s)| *s);
    Ok(LinkReport {
        points: results.into_iter().map(|(p, _)| p).collect(),
        spectrum_efficiency: spectrum_efficiency(cfg.modulation, cfg.n_streams(), &cfg.ofdm),
        singular_channel,
    })
}

fn pack_bytes(bits: &[bool]) -> Vec<u8> {
    bits.chunks(8)
        .map(|c| c.iter().fold(0u8, |acc, &b| acc << 1 | b as u8) << (8 - c.len()))
        .collect()
}

fn crc_bits(payload: &[bool]) -> Vec<bool> {
    let crc = crc32fast::hash(&pack_bytes(payload));
    (0..CRC_BITS).rev().map(|b| crc >> b & 1 == 1).collect()
}

/// Payload plus CRC-32, zero-padded to whole OFDM symbols.
fn build_frame(payload: Vec<bool>, bits_per_symbol: usize) -> Vec<bool> {
    let mut frame = payload;
    let crc = crc_bits(&frame);
    frame.extend(crc);
    let padded = frame.len().div_ceil(bits_per_symbol) * bits_per_symbol;
    frame.resize(padded, false);
    frame
}

fn frame_ok(frame: &[bool]) -> bool {
    let payload = &frame[..FRAME_PAYLOAD_BITS];
    let received = &frame[FRAME_PAYLOAD_BITS..FRAME_PAYLOAD_BITS + CRC_BITS];
    crc_bits(payload) == received
}

fn frames_at_point(
    cfg: &LinkConfig,
    ofdm: &OfdmEngine,
    h: &TransferMatrix,
    index: usize,
    n_frames: usize,
) -> Result<(f64, bool)> {
    let link = PointLink::new(cfg, ofdm, h, cfg.snr_grid_db[index])?;
    let point_seed = derive_seed(derive_seed(cfg.seed, index as u64), 0xC0C);
    let mut rng = ChaCha8Rng::seed_from_u64(point_seed);
    let n_tx = cfg.n_streams();
    let per_symbol = cfg.modulation.bits_per_symbol() * cfg.ofdm.data_subcarriers();
    let mut ok = 0usize;
    let mut singular = false;
    let slots = n_frames.div_ceil(n_tx);
    for slot in 0..slots {
        let frames: Vec<Vec<bool>> = (0..n_tx)
            .map(|_| build_frame(random_bits(&mut rng, FRAME_PAYLOAD_BITS), per_symbol))
            .collect();
        let (out, sing) = link.run_block(&frames, derive_seed(point_seed, slot as u64 + 1))?;
        singular |= sing;
        for (k, rx) in out.bits.iter().enumerate() {
            if slot * n_tx + k < n_frames && frame_ok(rx) {
                ok += 1;
            }
        }
    }
    Ok((ok as f64 / n_frames as f64, singular))
}

/// Fraction of `n_frames` CRC-32 frames received intact, per SNR point.
/// Frames are dealt round-robin over the streams.
pub fn frame_success_rate(cfg: &LinkConfig, n_frames: usize) -> Result<Vec<f64>> {
    if n_frames == 0 {
        return Err(invalid("n_frames", "must be at least 1"));
    }
    let mut check = cfg.clone();
    check.bits_per_point = check.bits_per_ofdm_symbol();
    check.validate()?;
    let ofdm = OfdmEngine::new(&cfg.ofdm)?;
    let h = link_channel(cfg)?;
    (0..cfg.snr_grid_db.len())
        .into_par_iter()
        .map(|i| frames_at_point(cfg, &ofdm, &h, i, n_frames).map(|(eta, _)| eta))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channel::ChannelKind;
    use crate::geometry::TxLayout;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn matrix(rows: usize, cols: usize, v: &[Complex64]) -> TransferMatrix {
        TransferMatrix {
            entries: CMatrix::from_row_slice(rows, cols, v),
            wavelength: 0.03,
            kind: ChannelKind::Mimo,
        }
    }

    #[test]
    fn noiseless_identity_passes_through() {
        let h = matrix(2, 2, &[c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(1.0, 0.0)]);
        let x = vec![vec![c(1.0, 2.0), c(-0.5, 0.1)], vec![c(0.3, -0.3), c(2.0, 0.0)]];
        assert_eq!(transmit(&x, &h, None, 2.0).unwrap(), x);
    }

    #[test]
    fn noise_variance_is_calibrated() {
        let h = matrix(1, 1, &[c(0.0, 0.0)]);
        let x = vec![vec![c(0.0, 0.0); 1_000_000]];
        let noise = NoiseModel::new(0.25, 11).unwrap();
        let y = transmit(&x, &h, Some(&noise), 1.0).unwrap();
        let var = y[0].iter().map(|v| v.norm_sqr()).sum::<f64>() / y[0].len() as f64;
        assert!((var / 0.25 - 1.0).abs() < 0.01, "{var}");
    }

    #[test]
    fn received_power_linear_in_total_power() {
        let h = matrix(1, 2, &[c(0.3, 0.1), c(-0.2, 0.4)]);
        let x = vec![vec![c(1.0, 0.0), c(0.0, 1.0)], vec![c(0.5, 0.5), c(1.0, -1.0)]];
        let p1: f64 = transmit(&x, &h, None, 1.0).unwrap()[0].iter().map(|v| v.norm_sqr()).sum();
        let p2: f64 = transmit(&x, &h, None, 2.0).unwrap()[0].iter().map(|v| v.norm_sqr()).sum();
        assert!((p2 / p1 - 2.0).abs() < 1e-12);
    }

    #[test]
    fn transmit_dimension_checks() {
        let h = matrix(2, 2, &[c(1.0, 0.0); 4]);
        assert!(transmit(&[vec![c(1.0, 0.0)]], &h, None, 1.0).is_err());
        assert!(transmit(&[vec![c(1.0, 0.0)], vec![]], &h, None, 1.0).is_err());
    }

    #[test]
    fn zf_identity_and_exact_recovery() {
        let id = CMatrix::identity(2, 2);
        let y = vec![vec![c(1.0, 2.0)], vec![c(3.0, -1.0)]];
        let x = zf_detect(&y, &id).unwrap();
        assert!((x[0][0] - y[0][0]).norm() < 1e-15 && (x[1][0] - y[1][0]).norm() < 1e-15);

        let h = matrix(2, 2, &[c(0.9, 0.2), c(-0.3, 0.5), c(0.1, -0.4), c(1.1, 0.3)]);
        let tx = vec![vec![c(1.0, -1.0), c(0.2, 0.7)], vec![c(-0.4, 0.4), c(1.0, 0.0)]];
        let rx = transmit(&tx, &h, None, 2.0).unwrap();
        let est = zf_detect(&rx, &h.entries).unwrap();
        for k in 0..2 {
            for t in 0..2 {
                assert!((est[k][t] - tx[k][t]).norm() < 1e-10 * tx[k][t].norm());
            }
        }
    }

    #[test]
    fn zf_rejects_singular() {
        let h = CMatrix::from_row_slice(2, 2, &[c(1.0, 0.0), c(2.0, 0.0), c(1.0, 0.0), c(2.0, 0.0)]);
        assert_eq!(
            zf_detect(&[vec![c(1.0, 0.0)], vec![c(1.0, 0.0)]], &h),
            Err(Error::SingularChannel)
        );
    }

    #[test]
    fn zf_noise_enhancement_matches_gram_inverse() {
        let h = matrix(2, 2, &[c(1.0, 0.0), c(0.6, 0.3), c(0.2, -0.5), c(0.9, 0.0)]);
        let n = 400_000;
        let zeros = vec![vec![c(0.0, 0.0); n]; 2];
        let noise = NoiseModel::new(1.0, 5).unwrap();
        let rx = transmit(&zeros, &h, Some(&noise), 2.0).unwrap();
        let est = zf_detect(&rx, &h.entries).unwrap();
        // Direct 2x2 inverse of H^H H.
        let m = &h.entries;
        let a = m[(0, 0)].norm_sqr() + m[(1, 0)].norm_sqr();
        let d = m[(0, 1)].norm_sqr() + m[(1, 1)].norm_sqr();
        let b = m[(0, 0)].conj() * m[(0, 1)] + m[(1, 0)].conj() * m[(1, 1)];
        let det = a * d - b.norm_sqr();
        let want = [d / det, a / det];
        for k in 0..2 {
            let got = est[k].iter().map(|v| v.norm_sqr()).sum::<f64>() / n as f64;
            assert!((got / want[k] - 1.0).abs() < 0.02, "stream {k}: {got} vs {}", want[k]);
        }
    }

    #[test]
    fn spectrum_efficiency_accounting() {
        let cfg = OfdmConfig::default();
        let se = |m| spectrum_efficiency(m, 2, &cfg);
        assert!((se(Modulation::Qpsk) - 3.714).abs() < 1e-3);
        assert!((se(Modulation::Qam16) - 7.429).abs() < 1e-3);
        assert!((se(Modulation::Qam64) - 11.143).abs() < 1e-3);
    }

    #[test]
    fn crc_frames() {
        let payload: Vec<bool> = (0..FRAME_PAYLOAD_BITS).map(|i| i % 3 == 0).collect();
        let mut frame = build_frame(payload, 104);
        assert_eq!(frame.len() % 104, 0);
        assert!(frame_ok(&frame));
        frame[17] = !frame[17];
        assert!(!frame_ok(&frame));
    }

    #[test]
    fn crc_matches_reference_check_value() {
        // CRC-32 check value for "123456789".
        let bits: Vec<bool> = b"123456789"
            .iter()
            .flat_map(|&byte| (0..8).rev().map(move |b| byte >> b & 1 == 1))
            .collect();
        assert_eq!(pack_bytes(&bits), b"123456789");
        assert_eq!(crc32fast::hash(b"123456789"), 0xCBF4_3926);
    }

    fn siso_config(snr: Vec<f64>) -> LinkConfig {
        let geom = LinkGeometry::new(TxLayout::Coaxial, 0.0, 5.0, 1, 1, 0.0294).unwrap();
        let mut cfg = LinkConfig::new(Modulation::Qpsk, geom, System::Mimo, snr);
        cfg.bits_per_point = 104 * 50;
        cfg
    }

    #[test]
    fn link_config_validation() {
        let mut cfg = siso_config(vec![]);
        assert!(cfg.validate().is_err());
        cfg.snr_grid_db = vec![10.0];
        cfg.bits_per_point = 105;
        assert!(cfg.validate().is_err());
        cfg.bits_per_point = 104;
        cfg.validate().unwrap();
    }

    #[test]
    fn clean_channel_delivers_every_frame() {
        let cfg = siso_config(vec![60.0]);
        assert_eq!(frame_success_rate(&cfg, 20).unwrap(), vec![1.0]);
        assert_eq!(simulate_link(&cfg).unwrap().points[0].streams[0].bit_errors, 0);
    }

    #[test]
    fn drowned_channel_delivers_nothing() {
        let cfg = siso_config(vec![-30.0]);
        assert_eq!(frame_success_rate(&cfg, 20).unwrap(), vec![0.0]);
    }

    #[test]
    fn pilot_estimation_close_to_perfect() {
        let mut cfg = siso_config(vec![8.0]);
        cfg.bits_per_point = 104 * 2000;
        let perfect = simulate_link(&cfg).unwrap().aggregate_ber()[0];
        cfg.csi = Csi::PilotEstimated;
        let estimated = simulate_link(&cfg).unwrap().aggregate_ber()[0];
        assert!(estimated >= perfect * 0.8 && estimated < perfect * 1.5, "{perfect} {estimated}");
    }
}
