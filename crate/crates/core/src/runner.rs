//! Executes an [`ExperimentConfig`] and writes `results.csv`, optional
//! side tables, and `manifest.json` (schema in `docs/manifest.md`).

use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;

use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::capacity::{capacity_gain_sweep, distance_at_cg_touching, log_spaced, SweepScenario};
use crate::channel::System;
use crate::config::{Diagnostic, ExperimentConfig, GroupSpec, Scenario};
use crate::derive_seed;
use crate::geometry::{rayleigh_distance, LinkGeometry};
use crate::modegroup::{FeedErrorModel, ModeGroup};
use crate::pasr::{
    crosstalk, crosstalk_vs_feed_error, pasr_experiment_perturbed, pasr_placement_with, PlacementError, PowerTransferMatrix,
};
use crate::phy::{simulate_link, LinkConfig, FEC_THRESHOLD};

#[derive(Debug, thiserror::Error)]
pub enum RunError {
    #[error("invalid config:\n{}", format_diagnostics(.0))]
    Invalid(Vec<Diagnostic>),
    #[error(transparent)]
    Numeric(#[from] crate::Error),
    #[error("cannot write {path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
}

fn format_diagnostics(d: &[Diagnostic]) -> String {
    d.iter().map(|d| format!("  {d}")).collect::<Vec<_>>().join("\n")
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct OutputFile {
    pub file: String,
    pub sha256: String,
    pub bytes: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunManifest {
    pub tool: String,
    pub version: String,
    pub scenario: String,
    /// SHA-256 of the canonical JSON form of the parsed config.
    pub config_sha256: String,
    pub seed: u64,
    pub outputs: Vec<OutputFile>,
    pub wall_clock_seconds: f64,
}

/// One CSV table: header plus string rows.
struct Table {
    name: &'static str,
    header: Vec<String>,
    rows: Vec<Vec<String>>,
}

impl Table {
    fn new(name: &'static str, header: &[&str]) -> Self {
        Self {
            name,
            header: header.iter().map(|s| s.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    fn to_bytes(&self) -> Vec<u8> {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(&self.header).expect("in-memory write");
        for r in &self.rows {
            w.write_record(r).expect("in-memory write");
        }
        w.into_inner().expect("in-memory flush")
    }
}

/// Shortest round-trip decimal, scientific for extreme magnitudes.
/// Rust float formatting never consults the locale.
fn num(x: f64) -> String {
    format!("{x:?}")
}

fn opt(x: Option<f64>) -> String {
    x.map(num).unwrap_or_default()
}

fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

pub fn config_hash(cfg: &ExperimentConfig) -> String {
    sha256_hex(&serde_json::to_vec(cfg).expect("config serializes"))
}

/// Validates, runs and writes outputs into `out_dir`. `seed` overrides the
/// config's seed.
pub fn run(cfg: &ExperimentConfig, out_dir: &Path, seed: Option<u64>) -> Result<RunManifest, RunError> {
    let diags = cfg.validate();
    if !diags.is_empty() {
        return Err(RunError::Invalid(diags));
    }
    let start = Instant::now();
    let seed = seed.unwrap_or(cfg.seed);
    let tables = match cfg.scenario {
        Scenario::CapacitySweep => capacity_tables(cfg)?,
        Scenario::BerSweep | Scenario::Robustness => link_tables(cfg, seed)?,
        Scenario::Pasr => pasr_tables(cfg, seed)?,
        Scenario::Pattern => pattern_tables(cfg),
    };
    let io = |path: &Path| {
        let path = path.to_path_buf();
        move |source| RunError::Io { path, source }
    };
    fs::create_dir_all(out_dir).map_err(io(out_dir))?;
    let mut outputs = Vec::new();
    for t in &tables {
        let bytes = t.to_bytes();
        let path = out_dir.join(t.name);
        fs::write(&path, &bytes).map_err(io(&path))?;
        outputs.push(OutputFile {
            file: t.name.to_string(),
            sha256: sha256_hex(&bytes),
            bytes: bytes.len() as u64,
        });
    }
    let manifest = RunManifest {
        tool: env!("CARGO_PKG_NAME").to_string(),
        version: env!("CARGO_PKG_VERSION").to_string(),
        scenario: cfg.scenario.name().to_string(),
        config_sha256: config_hash(cfg),
        seed,
        outputs,
        wall_clock_seconds: start.elapsed().as_secs_f64(),
    };
    let path = out_dir.join("manifest.json");
    let json = serde_json::to_vec_pretty(&manifest).expect("manifest serializes");
    fs::write(&path, json).map_err(io(&path))?;
    Ok(manifest)
}

/// Label, system and its geometry for every configured system.
fn systems(cfg: &ExperimentConfig) -> crate::Result<Vec<(String, System, LinkGeometry)>> {
    let base = cfg.geometry.as_ref().expect("validated");
    cfg.systems
        .iter()
        .map(|s| {
            let system = s.build().expect("validated");
            Ok((s.label(&system), system, s.geometry(base).build()?))
        })
        .collect()
}

fn groups(specs: &[GroupSpec]) -> Vec<ModeGroup> {
    specs.iter().map(|g| g.build().expect("validated")).collect()
}

fn capacity_tables(cfg: &ExperimentConfig) -> crate::Result<Vec<Table>> {
    let spec = cfg.capacity.as_ref().expect("validated");
    let base = cfg.geometry.as_ref().expect("validated").build()?;
    let lambda = base.wavelength;
    let distances = log_spaced(spec.start_wavelengths * lambda, spec.end_wavelengths * lambda, spec.points);
    let mut results = Table::new(
        "results.csv",
        &["system", "D_wavelengths", "D_meters", "cg", "capacity_bits"],
    );
    let mut summary = Table::new(
        "summary.csv",
        &["system", "peak_cg", "peak_D_wavelengths", "target_cg", "crossing_D_wavelengths", "rayleigh_D_wavelengths"],
    );
    let rayleigh = rayleigh_distance(base.rx_aperture, lambda) / lambda;
    for (label, system, geometry) in systems(cfg)? {
        let curve = capacity_gain_sweep(&SweepScenario {
            system,
            geometry,
            target_snr_db: spec.snr_db,
            distances: distances.clone(),
            beta: spec.beta,
        })?;
        for p in &curve.points {
            results.rows.push(vec![
                label.clone(),
                num(p.distance_wavelengths),
                num(p.distance_m),
                num(p.cg),
                num(p.capacity_bits),
            ]);
        }
        let peak = curve.peak();
        for &target in &spec.cg_targets {
            let crossing = distance_at_cg_touching(&curve, target, spec.peak_tolerance).ok();
            summary.rows.push(vec![
                label.clone(),
                num(peak.cg),
                num(peak.distance_wavelengths),
                num(target),
                opt(crossing.map(|d| d / lambda)),
                num(rayleigh),
            ]);
        }
    }
    Ok(vec![results, summary])
}

fn link_tables(cfg: &ExperimentConfig, seed: u64) -> crate::Result<Vec<Table>> {
    let spec = cfg.link.as_ref().expect("validated");
    let mut results = Table::new("results.csv", &["system", "snr_db", "stream", "ber", "evm_pct", "eta_s"]);
    let mut summary = Table::new(
        "summary.csv",
        &["system", "spectrum_efficiency", "singular_channel", "first_snr_below_fec_db"],
    );
    for (i, (label, system, geometry)) in systems(cfg)?.into_iter().enumerate() {
        let system_seed = derive_seed(seed, i as u64);
        let mut link = LinkConfig::new(spec.modulation, geometry, system, spec.snr_db.clone());
        link.ofdm = spec.ofdm.clone();
        link.bits_per_point = spec.bits_per_point.unwrap_or(link.bits_per_ofdm_symbol() * 200);
        link.frames_per_point = spec.frames_per_point;
        link.csi = spec.csi;
        link.seed = system_seed;
        link.beta = spec.beta;
        link.noise_variance = spec.noise_variance;
        link.feed_error = spec
            .feed_error
            .as_ref()
            .map(|f| f.build(derive_seed(system_seed, u64::MAX)))
            .transpose()?;
        let report = simulate_link(&link)?;
        for p in &report.points {
            for (k, s) in p.streams.iter().enumerate() {
                results.rows.push(vec![
                    label.clone(),
                    num(p.snr_db),
                    (k + 1).to_string(),
                    num(s.ber),
                    num(s.evm_pct),
                    opt(p.eta_s),
                ]);
            }
        }
        let fec = report
            .aggregate_ber()
            .iter()
            .zip(&report.points)
            .find(|(b, _)| **b <= FEC_THRESHOLD)
            .map(|(_, p)| p.snr_db);
        summary.rows.push(vec![
            label,
            num(report.spectrum_efficiency),
            report.singular_channel.to_string(),
            opt(fec),
        ]);
    }
    Ok(vec![results, summary])
}

fn pasr_tables(cfg: &ExperimentConfig, seed: u64) -> crate::Result<Vec<Table>> {
    let spec = cfg.pasr.as_ref().expect("validated");
    let g = groups(&spec.groups);
    let pair = [g[0].clone(), g[1].clone()];
    let error = match &spec.feed_error {
        Some(f) => f.build(seed)?,
        None => FeedErrorModel::ideal(),
    };
    let placement = match &spec.placement_error {
        Some(p) => p.build(derive_seed(seed, 1))?,
        None => PlacementError::ideal(),
    };
    let ptm = pasr_experiment_perturbed(&pair, spec.distance, spec.k_prime, &spec.tones, &error, &placement)?;
    let ct = crosstalk(&ptm)?;
    let mut tables = vec![ptm_table(&ptm, &ct)];

    let delta_le = pair[0].equivalent_order()? - pair[1].equivalent_order()?;
    let arr = pasr_placement_with(spec.distance, delta_le, 2, spec.k_prime)?.demux_for(&pair);
    let mut placement = Table::new(
        "placement.csv",
        &["receiver", "azimuth_deg", "x_m", "y_m", "shift_deg_demux_1", "shift_deg_demux_2"],
    );
    for (r, (phi, p)) in arr.azimuths.iter().zip(arr.positions()).enumerate() {
        placement.rows.push(vec![
            (r + 1).to_string(),
            num(phi.to_degrees()),
            num(p.x),
            num(p.y),
            num(arr.phase_shift_sets[0][r].to_degrees()),
            num(arr.phase_shift_sets[1][r].to_degrees()),
        ]);
    }
    tables.push(placement);

    if !spec.feed_error_levels.is_empty() {
        let levels: Vec<(f64, f64)> = spec
            .feed_error_levels
            .iter()
            .map(|[a, p]| (*a, p.to_radians()))
            .collect();
        let trend = crosstalk_vs_feed_error(&pair, spec.distance, spec.k_prime, &spec.tones, &levels, spec.n_seeds, seed)?;
        let mut t = Table::new("crosstalk_trend.csv", &["amplitude_rms", "phase_rms_deg", "mean_worst_ct_db"]);
        for ([a, p], ct) in spec.feed_error_levels.iter().zip(trend) {
            t.rows.push(vec![num(*a), num(*p), num(ct)]);
        }
        tables.push(t);
    }
    Ok(tables)
}

/// Power-transfer layout: one row per transmitted MG, one dBm column per demux
/// setting, then the crosstalk row.
fn ptm_table(ptm: &PowerTransferMatrix, ct: &[f64]) -> Table {
    let mut header = vec!["transmitted".to_string()];
    header.extend(ptm.labels.iter().map(|l| format!("demux {l} (dBm)")));
    let mut rows: Vec<Vec<String>> = (0..ptm.size())
        .map(|tx| {
            let mut row = vec![ptm.labels[tx].clone()];
            row.extend((0..ptm.size()).map(|s| num(ptm.dbm(tx, s))));
            row
        })
        .collect();
    let mut ct_row = vec!["CT (dB)".to_string()];
    ct_row.extend(ct.iter().map(|c| num(*c)));
    rows.push(ct_row);
    Table {
        name: "results.csv",
        header,
        rows,
    }
}

/// Power floor for nulls, so the gain column never prints `-inf`.
const GAIN_FLOOR_DB: f64 = -400.0;

fn pattern_tables(cfg: &ExperimentConfig) -> Vec<Table> {
    let spec = cfg.pattern.as_ref().expect("validated");
    let mut t = Table::new("results.csv", &["group", "phi_deg", "gain_db", "phase_deg"]);
    let steps = (360.0 / spec.step_deg).round() as i64;
    for mg in groups(&spec.groups) {
        let label = mg.label();
        for i in 0..=steps {
            let phi_deg = -180.0 + i as f64 * 360.0 / steps as f64;
            let bp = mg.beam_pattern(phi_deg.to_radians());
            let gain = (10.0 * bp.norm_sqr().log10()).max(GAIN_FLOOR_DB);
            t.rows.push(vec![label.clone(), num(phi_deg), num(gain), num(bp.arg().to_degrees())]);
        }
    }
    vec![t]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pattern_run_writes_boresight_gain() {
        let cfg = ExperimentConfig::from_toml(
            "scenario = \"pattern\"\n[pattern]\ngroups = [\"1..4\"]\nstep_deg = 1.0\n",
        )
        .unwrap();
        let dir = std::env::temp_dir().join(format!("mgmimo-pattern-{}", std::process::id()));
        let manifest = run(&cfg, &dir, None).unwrap();
        let text = fs::read_to_string(dir.join("results.csv")).unwrap();
        let row = text.lines().find(|l| l.contains(",0.0,")).unwrap();
        let gain: f64 = row.split(',').nth(2).unwrap().parse().unwrap();
        assert!((gain - 10.0 * 4f64.log10()).abs() < 1e-12);
        assert_eq!(manifest.outputs.len(), 1);
        assert!(dir.join("manifest.json").exists());
        fs::remove_dir_all(dir).unwrap();
    }

    #[test]
    fn invalid_config_is_rejected_before_writing() {
        let cfg = ExperimentConfig::from_toml("scenario = \"pattern\"\n[pattern]\ngroups = []\n").unwrap();
        let dir = std::env::temp_dir().join(format!("mgmimo-invalid-{}", std::process::id()));
        assert!(matches!(run(&cfg, &dir, None), Err(RunError::Invalid(_))));
        assert!(!dir.exists());
    }

    #[test]
    fn numbers_format_plainly() {
        assert_eq!(num(1234567.5), "1234567.5");
        assert_eq!(num(-0.25), "-0.25");
        assert_eq!(num(1e-300), "1e-300");
    }
}
