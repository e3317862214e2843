//! TOML experiment configuration and its validation.
//!
//! The schema is documented in `docs/config.md`; `configs/` holds one file
//! per scenario.

use std::fmt;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::channel::{ChannelKind, System};
use crate::geometry::{wavelength_for, LinkGeometry, TxLayout};
use crate::modegroup::{FeedErrorModel, ModeGroup, PsoamMode};
use crate::pasr::{pasr_placement_with, PlacementError, ToneSet};
use crate::phy::{Csi, Modulation, OfdmConfig};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Scenario {
    CapacitySweep,
    BerSweep,
    Pasr,
    Robustness,
    Pattern,
}

impl Scenario {
    pub fn name(self) -> &'static str {
        match self {
            Scenario::CapacitySweep => "capacity_sweep",
            Scenario::BerSweep => "ber_sweep",
            Scenario::Pasr => "pasr",
            Scenario::Robustness => "robustness",
            Scenario::Pattern => "pattern",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Layout {
    Coaxial,
    Ula,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GeometrySpec {
    pub layout: Layout,
    /// Meters; ULA transmitters only.
    pub tx_aperture: Option<f64>,
    pub rx_aperture: f64,
    /// Boresight distance in meters. Ignored by capacity sweeps.
    #[serde(default = "one")]
    pub distance: f64,
    #[serde(default = "two")]
    pub n_tx: usize,
    #[serde(default = "two")]
    pub n_rx: usize,
    pub frequency_hz: Option<f64>,
    pub wavelength: Option<f64>,
}

fn one() -> f64 {
    1.0
}

fn two() -> usize {
    2
}

impl GeometrySpec {
    pub fn wavelength(&self) -> Option<f64> {
        self.wavelength.or(self.frequency_hz.map(wavelength_for))
    }

    pub fn build(&self) -> crate::Result<LinkGeometry> {
        let tx_layout = match self.layout {
            Layout::Coaxial => TxLayout::Coaxial,
            Layout::Ula => TxLayout::Ula {
                aperture: self.tx_aperture.unwrap_or(f64::NAN),
            },
        };
        LinkGeometry::new(
            tx_layout,
            self.rx_aperture,
            self.distance,
            self.n_tx,
            self.n_rx,
            self.wavelength().unwrap_or(f64::NAN),
        )
    }
}

/// A mode group written as `"1..4"`, `"-1,1"`, `[1, 2, 3]` or a list of
/// `{ order, amplitude, phase_deg }` tables.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum GroupSpec {
    Text(String),
    Orders(Vec<i32>),
    Modes(Vec<ModeSpec>),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModeSpec {
    pub order: i32,
    #[serde(default = "one")]
    pub amplitude: f64,
    #[serde(default)]
    pub phase_deg: f64,
}

impl GroupSpec {
    pub fn build(&self) -> Result<ModeGroup, String> {
        let group = match self {
            GroupSpec::Text(s) => parse_group(s)?,
            GroupSpec::Orders(orders) => ModeGroup::uniform(orders).map_err(|e| e.to_string())?,
            GroupSpec::Modes(modes) => ModeGroup::new(
                modes
                    .iter()
                    .map(|m| PsoamMode {
                        order: m.order,
                        amplitude: m.amplitude,
                        initial_phase: m.phase_deg.to_radians(),
                    })
                    .collect(),
            )
            .map_err(|e| e.to_string())?,
        };
        Ok(group)
    }
}

fn parse_group(text: &str) -> Result<ModeGroup, String> {
    let body = text.trim().trim_start_matches("MG").trim_matches(|c| c == '{' || c == '}');
    let order = |s: &str| -> Result<i32, String> {
        s.trim().parse().map_err(|_| format!("`{}` is not an integer mode order", s.trim()))
    };
    if let Some((a, b)) = body.split_once("..") {
        let (a, b) = (order(a)?, order(b)?);
        return ModeGroup::consecutive(a, b).map_err(|e| e.to_string());
    }
    let orders = body.split(',').map(order).collect::<Result<Vec<_>, _>>()?;
    ModeGroup::uniform(&orders).map_err(|e| e.to_string())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SystemSpec {
    pub name: Option<String>,
    pub kind: ChannelKind,
    /// Overrides the shared transmitter layout for this system.
    pub layout: Option<Layout>,
    pub tx_aperture: Option<f64>,
    #[serde(default)]
    pub groups: Vec<GroupSpec>,
    #[serde(default)]
    pub orders: Vec<i32>,
}

impl SystemSpec {
    /// The shared geometry with this system's transmitter overrides applied.
    pub fn geometry(&self, base: &GeometrySpec) -> GeometrySpec {
        let mut g = base.clone();
        if let Some(layout) = self.layout {
            g.layout = layout;
            g.tx_aperture = self.tx_aperture;
        } else if self.tx_aperture.is_some() {
            g.tx_aperture = self.tx_aperture;
        }
        g
    }

    pub fn build(&self) -> Result<System, String> {
        Ok(match self.kind {
            ChannelKind::Mimo => System::Mimo,
            ChannelKind::PsoamMimo => System::PsoamMimo {
                orders: self.orders.clone(),
            },
            ChannelKind::MgMimo => System::MgMimo {
                groups: self.groups.iter().map(GroupSpec::build).collect::<Result<_, _>>()?,
            },
        })
    }

    pub fn label(&self, system: &System) -> String {
        if let Some(name) = &self.name {
            return name.clone();
        }
        match system {
            System::Mimo => "MIMO".to_string(),
            System::MgMimo { groups } => groups.iter().map(ModeGroup::label).collect::<Vec<_>>().join(" / "),
            System::PsoamMimo { orders } => {
                let o: Vec<String> = orders.iter().map(|l| format!("l={l}")).collect();
                format!("PSOAM {}", o.join(" / "))
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CapacitySpec {
    #[serde(default = "default_snr")]
    pub snr_db: f64,
    #[serde(default = "default_start")]
    pub start_wavelengths: f64,
    #[serde(default = "default_end")]
    pub end_wavelengths: f64,
    #[serde(default = "default_points")]
    pub points: usize,
    /// Capacity gains whose crossing distance goes in the summary.
    #[serde(default = "default_targets")]
    pub cg_targets: Vec<f64>,
    /// Shortfall under which a peak still counts as touching a target.
    #[serde(default)]
    pub peak_tolerance: f64,
    #[serde(default = "f_one")]
    pub beta: f64,
}

fn default_snr() -> f64 {
    30.0
}
fn default_start() -> f64 {
    10.0
}
fn default_end() -> f64 {
    2000.0
}
fn default_points() -> usize {
    400
}
fn default_targets() -> Vec<f64> {
    vec![2.0]
}
fn f_one() -> f64 {
    1.0
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FeedErrorSpec {
    pub amplitude_rms: f64,
    pub phase_rms_deg: f64,
    pub seed: Option<u64>,
}

impl FeedErrorSpec {
    pub fn build(&self, default_seed: u64) -> crate::Result<FeedErrorModel> {
        FeedErrorModel::new(
            self.amplitude_rms,
            self.phase_rms_deg.to_radians(),
            self.seed.unwrap_or(default_seed),
        )
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LinkSpec {
    pub modulation: Modulation,
    pub snr_db: Vec<f64>,
    /// Defaults to 200 OFDM symbols per stream.
    pub bits_per_point: Option<usize>,
    #[serde(default)]
    pub frames_per_point: usize,
    #[serde(default = "perfect")]
    pub csi: Csi,
    #[serde(default = "f_one")]
    pub beta: f64,
    #[serde(default = "f_one")]
    pub noise_variance: f64,
    pub feed_error: Option<FeedErrorSpec>,
    #[serde(default)]
    pub ofdm: OfdmConfig,
}

fn perfect() -> Csi {
    Csi::Perfect
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PasrSpec {
    pub groups: Vec<GroupSpec>,
    pub distance: f64,
    #[serde(default = "k_one")]
    pub k_prime: i32,
    #[serde(default)]
    pub tones: ToneSet,
    pub feed_error: Option<FeedErrorSpec>,
    pub placement_error: Option<PlacementErrorSpec>,
    /// `[amplitude_rms, phase_rms_deg]` levels for the crosstalk trend.
    #[serde(default)]
    pub feed_error_levels: Vec<[f64; 2]>,
    #[serde(default = "twenty")]
    pub n_seeds: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PlacementErrorSpec {
    #[serde(default)]
    pub azimuth_rms_deg: f64,
    #[serde(default)]
    pub range_rms_m: f64,
    pub seed: Option<u64>,
}

impl PlacementErrorSpec {
    pub fn build(&self, default_seed: u64) -> crate::Result<PlacementError> {
        PlacementError::new(
            self.azimuth_rms_deg.to_radians(),
            self.range_rms_m,
            self.seed.unwrap_or(default_seed),
        )
    }
}

fn k_one() -> i32 {
    1
}
fn twenty() -> usize {
    20
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PatternSpec {
    pub groups: Vec<GroupSpec>,
    #[serde(default = "f_one")]
    pub step_deg: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub scenario: Scenario,
    #[serde(default)]
    pub seed: u64,
    /// Used when no output directory is given on the command line.
    pub out_dir: Option<PathBuf>,
    pub geometry: Option<GeometrySpec>,
    #[serde(default)]
    pub systems: Vec<SystemSpec>,
    pub capacity: Option<CapacitySpec>,
    pub link: Option<LinkSpec>,
    pub pasr: Option<PasrSpec>,
    pub pattern: Option<PatternSpec>,
}

/// One violated invariant, located by its path in the config file.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Diagnostic {
    pub path: String,
    pub message: String,
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.path, self.message)
    }
}

struct Diagnostics(Vec<Diagnostic>);

impl Diagnostics {
    fn push(&mut self, path: impl Into<String>, message: impl Into<String>) {
        self.0.push(Diagnostic {
            path: path.into(),
            message: message.into(),
        });
    }
}

impl ExperimentConfig {
    pub fn from_toml(text: &str) -> Result<Self, Diagnostic> {
        toml::from_str(text).map_err(|e| Diagnostic {
            path: e
                .span()
                .map(|s| format!("byte {}", s.start))
                .unwrap_or_else(|| "<file>".to_string()),
            message: e.message().to_string(),
        })
    }

    pub fn from_path(path: &Path) -> Result<Self, Diagnostic> {
        let text = std::fs::read_to_string(path).map_err(|e| Diagnostic {
            path: path.display().to_string(),
            message: format!("cannot read config: {e}"),
        })?;
        Self::from_toml(&text)
    }

    /// Every violated invariant; empty when the config is runnable.
    pub fn validate(&self) -> Vec<Diagnostic> {
        let mut d = Diagnostics(Vec::new());
        match self.scenario {
            Scenario::CapacitySweep => {
                let geom = self.check_geometry(&mut d);
                self.check_systems(&mut d, geom);
                match &self.capacity {
                    None => d.push("capacity", "missing section for capacity_sweep"),
                    Some(c) => check_capacity(&mut d, c),
                }
            }
            Scenario::BerSweep | Scenario::Robustness => {
                let geom = self.check_geometry(&mut d);
                self.check_systems(&mut d, geom);
                match &self.link {
                    None => d.push("link", "missing section for link scenarios"),
                    Some(l) => check_link(&mut d, l, geom.map(|g| g.1).as_ref(), self.scenario),
                }
            }
            Scenario::Pasr => match &self.pasr {
                None => d.push("pasr", "missing section for pasr"),
                Some(p) => check_pasr(&mut d, p),
            },
            Scenario::Pattern => match &self.pattern {
                None => d.push("pattern", "missing section for pattern"),
                Some(p) => {
                    check_groups(&mut d, "pattern.groups", &p.groups);
                    if p.groups.is_empty() {
                        d.push("pattern.groups", "no mode groups to plot");
                    }
                    if !(p.step_deg > 0.0 && p.step_deg <= 180.0) {
                        d.push("pattern.step_deg", "must be in (0, 180]");
                    }
                }
            },
        }
        d.0
    }

    fn check_geometry(&self, d: &mut Diagnostics) -> Option<(&GeometrySpec, LinkGeometry)> {
        let Some(g) = &self.geometry else {
            d.push("geometry", "missing section");
            return None;
        };
        check_geometry_spec(d, "geometry", g).map(|built| (g, built))
    }

    fn check_systems(&self, d: &mut Diagnostics, base: Option<(&GeometrySpec, LinkGeometry)>) {
        if self.systems.is_empty() {
            d.push("systems", "at least one system is required");
        }
        for (i, s) in self.systems.iter().enumerate() {
            let path = format!("systems[{i}]");
            match s.kind {
                ChannelKind::MgMimo => {
                    check_groups(d, &format!("{path}.groups"), &s.groups);
                    if !s.orders.is_empty() {
                        d.push(format!("{path}.orders"), "mg_mimo takes groups, not orders");
                    }
                }
                ChannelKind::PsoamMimo => {
                    if !s.groups.is_empty() {
                        d.push(format!("{path}.groups"), "psoam_mimo takes orders, not groups");
                    }
                }
                ChannelKind::Mimo => {
                    if !s.groups.is_empty() || !s.orders.is_empty() {
                        d.push(path.clone(), "mimo takes neither groups nor orders");
                    }
                }
            }
            let geom = base.and_then(|(spec, built)| {
                if s.layout.is_none() && s.tx_aperture.is_none() {
                    Some(built)
                } else {
                    check_geometry_spec(d, &path, &s.geometry(spec))
                }
            });
            if let (Some(g), Ok(system)) = (geom, s.build()) {
                if let Some(n) = system.n_streams() {
                    if n != g.n_tx {
                        d.push(path.clone(), format!("{n} transmit patterns for n_tx = {}", g.n_tx));
                    }
                }
            }
        }
    }
}

fn check_geometry_spec(d: &mut Diagnostics, path: &str, g: &GeometrySpec) -> Option<LinkGeometry> {
    let before = d.0.len();
    if !(g.rx_aperture >= 0.0 && g.rx_aperture.is_finite()) {
        d.push(format!("{path}.rx_aperture"), format!("must be >= 0, got {}", g.rx_aperture));
    }
    match (g.layout, g.tx_aperture) {
        (Layout::Ula, None) => d.push(format!("{path}.tx_aperture"), "required for a ULA transmitter"),
        (Layout::Ula, Some(a)) if !(a >= 0.0 && a.is_finite()) => {
            d.push(format!("{path}.tx_aperture"), format!("must be >= 0, got {a}"))
        }
        (Layout::Coaxial, Some(_)) => d.push(format!("{path}.tx_aperture"), "coaxial transmitters have no aperture"),
        _ => {}
    }
    match (g.frequency_hz, g.wavelength) {
        (None, None) => d.push(path, "give frequency_hz or wavelength"),
        (Some(_), Some(_)) => d.push(path, "give only one of frequency_hz and wavelength"),
        _ => {
            if !(g.wavelength().is_some_and(|w| w > 0.0 && w.is_finite())) {
                d.push(format!("{path}.wavelength"), "must be > 0");
            }
        }
    }
    if !(g.distance > 0.0 && g.distance.is_finite()) {
        d.push(format!("{path}.distance"), "must be > 0");
    }
    if g.n_tx == 0 {
        d.push(format!("{path}.n_tx"), "must be positive");
    }
    if g.n_rx == 0 {
        d.push(format!("{path}.n_rx"), "must be positive");
    }
    if d.0.len() > before {
        return None;
    }
    match g.build() {
        Ok(geom) => Some(geom),
        Err(e) => {
            d.push(path, e.to_string());
            None
        }
    }
}

fn check_groups(d: &mut Diagnostics, path: &str, groups: &[GroupSpec]) {
    for (i, g) in groups.iter().enumerate() {
        if let Err(e) = g.build() {
            d.push(format!("{path}[{i}]"), e);
        }
    }
}

fn check_capacity(d: &mut Diagnostics, c: &CapacitySpec) {
    if !c.snr_db.is_finite() {
        d.push("capacity.snr_db", "must be finite");
    }
    if !(c.start_wavelengths > 0.0 && c.end_wavelengths > c.start_wavelengths && c.end_wavelengths.is_finite()) {
        d.push("capacity", "need 0 < start_wavelengths < end_wavelengths");
    }
    if c.points < 2 {
        d.push("capacity.points", "need at least two grid points");
    }
    if !(c.peak_tolerance >= 0.0) {
        d.push("capacity.peak_tolerance", "must be >= 0");
    }
    if !(c.beta > 0.0) {
        d.push("capacity.beta", "must be > 0");
    }
}

fn check_snr_grid(d: &mut Diagnostics, path: &str, grid: &[f64]) {
    if grid.is_empty() {
        d.push(path, "empty SNR grid");
    } else if grid.iter().any(|s| !s.is_finite()) {
        d.push(path, "SNR values must be finite");
    } else if grid.windows(2).any(|w| w[1] <= w[0]) {
        d.push(path, "SNR grid must be strictly increasing");
    }
}

fn check_link(d: &mut Diagnostics, l: &LinkSpec, geom: Option<&LinkGeometry>, scenario: Scenario) {
    check_snr_grid(d, "link.snr_db", &l.snr_db);
    if let Err(e) = l.ofdm.validate() {
        d.push("link.ofdm", e.to_string());
    }
    if let (Some(g), Some(bits)) = (geom, l.bits_per_point) {
        let unit = l.modulation.bits_per_symbol() * l.ofdm.data_subcarriers() * g.n_tx;
        if bits == 0 || bits % unit != 0 {
            d.push("link.bits_per_point", format!("must be a positive multiple of {unit}"));
        }
    }
    if let Some(g) = geom {
        if g.n_rx < g.n_tx {
            d.push("geometry.n_rx", "zero-forcing needs n_rx >= n_tx");
        }
    }
    if scenario == Scenario::Robustness && l.frames_per_point == 0 {
        d.push("link.frames_per_point", "robustness needs at least one frame per point");
    }
    if !(l.noise_variance > 0.0) {
        d.push("link.noise_variance", "must be > 0");
    }
    if !(l.beta > 0.0) {
        d.push("link.beta", "must be > 0");
    }
    if let Some(fe) = &l.feed_error {
        if let Err(e) = fe.build(0) {
            d.push("link.feed_error", e.to_string());
        }
    }
}

fn check_pasr(d: &mut Diagnostics, p: &PasrSpec) {
    check_groups(d, "pasr.groups", &p.groups);
    if p.groups.len() != 2 {
        d.push("pasr.groups", format!("PASR demultiplexes exactly two groups, got {}", p.groups.len()));
    }
    if let Err(e) = p.tones.validate(2) {
        d.push("pasr.tones", e.to_string());
    }
    if p.n_seeds == 0 {
        d.push("pasr.n_seeds", "must be at least 1");
    }
    if let Some(Err(e)) = p.feed_error.as_ref().map(|f| f.build(0)) {
        d.push("pasr.feed_error", e.to_string());
    }
    if let Some(Err(e)) = p.placement_error.as_ref().map(|f| f.build(0)) {
        d.push("pasr.placement_error", e.to_string());
    }
    for (i, [a, ph]) in p.feed_error_levels.iter().enumerate() {
        if !(*a >= 0.0 && *ph >= 0.0) {
            d.push(format!("pasr.feed_error_levels[{i}]"), "error levels must be >= 0");
        }
    }
    let groups: Vec<ModeGroup> = p.groups.iter().filter_map(|g| g.build().ok()).collect();
    if groups.len() != 2 {
        return;
    }
    let le: Vec<f64> = groups.iter().filter_map(|g| g.equivalent_order().ok()).collect();
    if le.len() == 2 && le[0] == le[1] {
        d.push("pasr.groups", crate::Error::PasrUndefined.to_string());
        return;
    }
    if groups.iter().any(|g| !g.is_consecutive()) || groups[0].q() != groups[1].q() {
        d.push("pasr.groups", "equal-gain sampling needs consecutive groups of equal Q");
        return;
    }
    if let Err(e) = pasr_placement_with(p.distance, le[0] - le[1], 2, p.k_prime) {
        d.push("pasr", e.to_string());
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const BASELINE: &str = r#"
scenario = "capacity_sweep"
[geometry]
layout = "coaxial"
rx_aperture = 0.190986
wavelength = 0.03
[[systems]]
kind = "mg_mimo"
groups = ["1..10", "11..20"]
[[systems]]
kind = "mimo"
[capacity]
snr_db = 30
"#;

    #[test]
    fn baseline_config_is_clean() {
        let cfg = ExperimentConfig::from_toml(BASELINE).unwrap();
        assert_eq!(cfg.validate(), vec![]);
        let c = cfg.capacity.unwrap();
        assert_eq!((c.points, c.cg_targets), (400, vec![2.0]));
    }

    #[test]
    fn group_syntaxes() {
        let a = GroupSpec::Text("1..4".into()).build().unwrap();
        let b = GroupSpec::Text("MG{1,2,3,4}".into()).build().unwrap();
        let c = GroupSpec::Orders(vec![1, 2, 3, 4]).build().unwrap();
        assert_eq!(a, b);
        assert_eq!(a, c);
        let d = GroupSpec::Modes(vec![ModeSpec {
            order: 2,
            amplitude: 0.5,
            phase_deg: 90.0,
        }])
        .build()
        .unwrap();
        assert!((d.modes()[0].initial_phase - std::f64::consts::FRAC_PI_2).abs() < 1e-15);
        assert!(GroupSpec::Text("1..x".into()).build().is_err());
        assert_eq!(GroupSpec::Text("-2..-1".into()).build().unwrap().q(), 2);
    }

    #[test]
    fn negative_aperture_reported() {
        let text = BASELINE.replace("rx_aperture = 0.190986", "rx_aperture = -1.0");
        let diags = ExperimentConfig::from_toml(&text).unwrap().validate();
        assert!(diags.iter().any(|d| d.path == "geometry.rx_aperture"), "{diags:?}");
    }

    #[test]
    fn empty_snr_grid_reported() {
        let text = r#"
scenario = "ber_sweep"
[geometry]
layout = "coaxial"
rx_aperture = 0.6
distance = 5.0
frequency_hz = 10.2e9
[[systems]]
kind = "mimo"
[link]
modulation = "qpsk"
snr_db = []
"#;
        let diags = ExperimentConfig::from_toml(text).unwrap().validate();
        assert_eq!(diags.len(), 1, "{diags:?}");
        assert_eq!(diags[0].path, "link.snr_db");
    }

    #[test]
    fn pasr_without_vorticity_difference() {
        let text = r#"
scenario = "pasr"
[pasr]
groups = ["-1,1", "-2,2"]
distance = 2.0
"#;
        let diags = ExperimentConfig::from_toml(text).unwrap().validate();
        assert!(diags.iter().any(|d| d.message.contains("PASR undefined")), "{diags:?}");
    }

    #[test]
    fn negative_error_rms_is_reported() {
        let text = r#"
scenario = "pasr"
[pasr]
groups = ["1..4", "-4..-1"]
distance = 2.0
feed_error = { amplitude_rms = -0.1, phase_rms_deg = 1.0 }
placement_error = { azimuth_rms_deg = -1.0 }
"#;
        let paths: Vec<String> = ExperimentConfig::from_toml(text).unwrap().validate().into_iter().map(|d| d.path).collect();
        assert_eq!(paths, ["pasr.feed_error", "pasr.placement_error"]);
    }

    #[test]
    fn parse_errors_are_diagnostics() {
        assert!(ExperimentConfig::from_toml("scenario = \"nope\"").is_err());
        assert!(ExperimentConfig::from_toml("scenario = \"pattern\"\nbogus = 1").is_err());
    }
}
