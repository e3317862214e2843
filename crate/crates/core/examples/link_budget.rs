//! Quick reference numbers: Rayleigh distances, spectrum efficiency per
//! modulation and the SNR calibration power.

use mgmimo::channel::calibrate_total_power;
use mgmimo::geometry::{rayleigh_distance, wavelength_for, LinkGeometry, TxLayout};
use mgmimo::phy::{spectrum_efficiency, Modulation, OfdmConfig};

fn main() -> mgmimo::Result<()> {
    let lambda = wavelength_for(10.2e9);
    for aperture in [0.35, 0.6, 0.85] {
        println!("aperture {aperture:.2} m: Rayleigh distance {:.2} m", rayleigh_distance(aperture, lambda));
    }

    let ofdm = OfdmConfig::default();
    println!(
        "\nOFDM: {} data + {} pilot bins, {:.1} kHz spacing",
        ofdm.data_subcarriers(),
        ofdm.pilot_subcarriers(),
        ofdm.subcarrier_spacing_hz() / 1e3
    );
    for m in Modulation::ALL {
        println!("  2 streams of {:<6} {:.2} bits/s/Hz", m.name(), spectrum_efficiency(m, 2, &ofdm));
    }

    let geom = LinkGeometry::new(TxLayout::Coaxial, 0.6, 5.0, 2, 2, lambda)?;
    let p = calibrate_total_power(&geom, 20.0, 1.0)?;
    println!("\ntotal power for 20 dB at 5 m, unit noise: {:.3e}", p);
    Ok(())
}
