//! Azimuthal gain of a few mode groups, and how the equivalent order sets
//! the phase slope.

use std::f64::consts::PI;

use mgmimo::modegroup::ModeGroup;

fn main() -> mgmimo::Result<()> {
    let groups = [
        ModeGroup::single(3),
        ModeGroup::consecutive(1, 4)?,
        ModeGroup::consecutive(-4, -1)?,
        ModeGroup::consecutive(1, 10)?,
    ];
    println!("{:<12} {:>6} {:>10} {:>12}", "group", "l_e", "peak dB", "HPBW deg");
    for g in &groups {
        let hpbw = g
            .half_power_beamwidth()
            .map(|w| format!("{w:.2}"))
            .unwrap_or_else(|_| "omni".into());
        println!(
            "{:<12} {:>6} {:>10.2} {:>12}",
            g.label(),
            g.equivalent_order()?,
            g.directivity_gain_db(),
            hpbw
        );
    }

    let g = &groups[1];
    println!("\n{} near boresight:", g.label());
    for deg in [-30, -15, 0, 15, 30] {
        let phi = deg as f64 * PI / 180.0;
        let bp = g.beam_pattern(phi);
        println!(
            "  {deg:>4} deg  gain {:>7.2} dB  phase {:>8.2} deg",
            10.0 * bp.norm_sqr().log10(),
            bp.arg().to_degrees()
        );
    }
    Ok(())
}
