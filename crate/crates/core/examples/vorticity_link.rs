//! QPSK over 2x2 MG-MIMO for several equivalent-order differences. Larger
//! differences separate the beams better and lower the BER.

use mgmimo::channel::System;
use mgmimo::geometry::{wavelength_for, LinkGeometry, TxLayout};
use mgmimo::modegroup::ModeGroup;
use mgmimo::phy::{simulate_link, LinkConfig, Modulation};

fn main() -> mgmimo::Result<()> {
    let geom = LinkGeometry::new(TxLayout::Coaxial, 0.6, 5.0, 2, 2, wavelength_for(10.2e9))?;
    let pairs: [(&[i32], &[i32]); 4] = [
        (&[-1, 1], &[-2, 2]),
        (&[1, 2], &[-2, -1]),
        (&[2, 3], &[-3, -2]),
        (&[3, 4], &[-4, -3]),
    ];
    let snr: Vec<f64> = (0..6).map(|i| 5.0 + 5.0 * i as f64).collect();
    print!("{:<22}", "pair");
    for s in &snr {
        print!("{:>10}", format!("{s} dB"));
    }
    println!();
    for (a, b) in pairs {
        let (a, b) = (ModeGroup::uniform(a)?, ModeGroup::uniform(b)?);
        let dle = a.equivalent_order()? - b.equivalent_order()?;
        let label = format!("{} / {} ({dle})", a.label(), b.label());
        let mut cfg = LinkConfig::new(Modulation::Qpsk, geom, System::MgMimo { groups: vec![a, b] }, snr.clone());
        cfg.bits_per_point = 208 * 2000;
        let report = simulate_link(&cfg)?;
        print!("{label:<22}");
        for ber in report.aggregate_ber() {
            print!("{ber:>10.2e}");
        }
        println!("{}", if report.singular_channel { "  (singular)" } else { "" });
    }
    Ok(())
}
