//! Capacity gain over a SISO link against distance for conventional MIMO
//! and two mode-group pairs, with the CG = 2 crossing distances.

use std::f64::consts::PI;

use mgmimo::capacity::{capacity_gain_sweep, distance_at_cg_touching, log_spaced, SweepScenario};
use mgmimo::channel::System;
use mgmimo::geometry::{rayleigh_distance, wavelength_for, LinkGeometry, TxLayout};
use mgmimo::modegroup::ModeGroup;

fn main() -> mgmimo::Result<()> {
    let lambda = wavelength_for(10e9);
    let aperture = 20.0 * lambda / PI;
    let systems = [
        ("MIMO", TxLayout::Ula { aperture }, System::Mimo),
        (
            "MG{1..10}/{11..20}",
            TxLayout::Coaxial,
            System::MgMimo {
                groups: vec![ModeGroup::consecutive(1, 10)?, ModeGroup::consecutive(11, 20)?],
            },
        ),
        (
            "MG{11..20}/{-20..-11}",
            TxLayout::Coaxial,
            System::MgMimo {
                groups: vec![ModeGroup::consecutive(11, 20)?, ModeGroup::consecutive(-20, -11)?],
            },
        ),
        ("PSOAM 10/20", TxLayout::Coaxial, System::PsoamMimo { orders: vec![10, 20] }),
    ];

    println!("Rayleigh distance {:.1} lambda", rayleigh_distance(aperture, lambda) / lambda);
    println!("{:<24} {:>8} {:>10} {:>14}", "system", "peak CG", "at lambda", "CG=2 lambda");
    for (name, layout, system) in systems {
        let curve = capacity_gain_sweep(&SweepScenario {
            system,
            geometry: LinkGeometry::new(layout, aperture, 1.0, 2, 2, lambda)?,
            target_snr_db: 30.0,
            distances: log_spaced(10.0 * lambda, 2000.0 * lambda, 400),
            beta: 1.0,
        })?;
        let peak = curve.peak();
        let crossing = distance_at_cg_touching(&curve, 2.0, 0.05)
            .map(|d| format!("{:.1}", d / lambda))
            .unwrap_or_else(|_| "never".into());
        println!(
            "{name:<24} {:>8.3} {:>10.1} {:>14}",
            peak.cg, peak.distance_wavelengths, crossing
        );
    }
    Ok(())
}
