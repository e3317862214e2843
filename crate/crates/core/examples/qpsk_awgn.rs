//! Single-stream QPSK through the full OFDM chain against the AWGN theory
//! curve.

use mgmimo::channel::System;
use mgmimo::geometry::{wavelength_for, LinkGeometry, TxLayout};
use mgmimo::phy::{simulate_link, LinkConfig, Modulation};
use statrs::function::erf::erfc;

fn main() -> mgmimo::Result<()> {
    let geom = LinkGeometry::new(TxLayout::Coaxial, 0.0, 5.0, 1, 1, wavelength_for(10.2e9))?;
    let snr: Vec<f64> = (0..6).map(|i| 2.0 * i as f64).collect();
    let mut cfg = LinkConfig::new(Modulation::Qpsk, geom, System::Mimo, snr);
    cfg.bits_per_point = 104 * 10_000;
    let report = simulate_link(&cfg)?;
    println!("{:>8} {:>12} {:>12} {:>8}", "SNR dB", "BER", "theory", "EVM %");
    for p in &report.points {
        let s = &p.streams[0];
        let theory = 0.5 * erfc((10f64.powf(p.snr_db / 10.0) / 2.0).sqrt());
        println!("{:>8} {:>12.3e} {:>12.3e} {:>8.2}", p.snr_db, s.ber, theory, s.evm_pct);
    }
    Ok(())
}
