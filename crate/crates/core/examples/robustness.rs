//! 64-QAM frame delivery at 11 m: MG-MIMO against conventional MIMO.

use mgmimo::channel::System;
use mgmimo::geometry::{wavelength_for, LinkGeometry, TxLayout};
use mgmimo::modegroup::ModeGroup;
use mgmimo::phy::{frame_success_rate, LinkConfig, Modulation};

fn main() -> mgmimo::Result<()> {
    let geom = LinkGeometry::new(TxLayout::Ula { aperture: 0.35 }, 0.35, 11.0, 2, 2, wavelength_for(10.2e9))?;
    let mg = System::MgMimo {
        groups: vec![ModeGroup::consecutive(1, 4)?, ModeGroup::consecutive(-4, -1)?],
    };
    let snr = vec![22.0, 24.0, 26.0, 28.0, 30.0];
    println!("{:<8} {}", "", snr.iter().map(|s| format!("{s:>7} dB")).collect::<String>());
    for (name, system) in [("MG", mg), ("MIMO", System::Mimo)] {
        let mut cfg = LinkConfig::new(Modulation::Qam64, geom, system, snr.clone());
        cfg.seed = 11;
        let eta = frame_success_rate(&cfg, 100)?;
        println!("{name:<8} {}", eta.iter().map(|e| format!("{e:>10.3}")).collect::<String>());
    }
    Ok(())
}
