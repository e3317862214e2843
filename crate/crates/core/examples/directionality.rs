//! Received power of an MG pair against a single-mode pair at 25 m, and the
//! BER that extra beam gain buys at the same transmit SNR.

use num_complex::Complex64;

use mgmimo::channel::{build_channel, System};
use mgmimo::geometry::{wavelength_for, LinkGeometry, TxLayout};
use mgmimo::modegroup::ModeGroup;
use mgmimo::phy::{simulate_link, LinkConfig, Modulation};

fn mean_gain(system: &System, geom: &LinkGeometry) -> mgmimo::Result<f64> {
    let h = build_channel(geom, system, 1.0)?;
    let total: f64 = h.entries.iter().map(Complex64::norm_sqr).sum();
    Ok(total / h.n_rx() as f64)
}

fn main() -> mgmimo::Result<()> {
    let geom = LinkGeometry::new(TxLayout::Ula { aperture: 0.35 }, 0.35, 25.0, 2, 2, wavelength_for(10.2e9))?;
    let mg = System::MgMimo {
        groups: vec![ModeGroup::consecutive(1, 4)?, ModeGroup::consecutive(-4, -1)?],
    };
    let single = System::PsoamMimo { orders: vec![2, -3] };
    let gain_db = 10.0 * (mean_gain(&mg, &geom)? / mean_gain(&single, &geom)?).log10();
    println!("MG over single-mode received power: {gain_db:.2} dB");

    let snr = vec![0.0, 4.0, 8.0, 12.0];
    for (name, system) in [("MG{1..4}/{-4..-1}", mg), ("PSOAM 2/-3", single)] {
        let mut cfg = LinkConfig::new(Modulation::Qpsk, geom, system, snr.clone());
        cfg.bits_per_point = 208 * 2000;
        let ber = simulate_link(&cfg)?.aggregate_ber();
        println!("{name:<20} {}", ber.iter().map(|b| format!("{b:.2e}")).collect::<Vec<_>>().join("  "));
    }
    Ok(())
}
