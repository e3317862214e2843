//! Partial arc sampling receiver: place two receivers on the arc, demux two
//! tones with analog phase shifts and report crosstalk, ideal and with feed
//! error.

use mgmimo::modegroup::{FeedErrorModel, ModeGroup};
use mgmimo::pasr::{crosstalk, crosstalk_vs_feed_error, pasr_experiment, pasr_placement, ToneSet};

fn main() -> mgmimo::Result<()> {
    let pair = [ModeGroup::consecutive(1, 4)?, ModeGroup::consecutive(-4, -1)?];
    let dle = pair[0].equivalent_order()? - pair[1].equivalent_order()?;
    let arr = pasr_placement(2.0, dle, 2)?.demux_for(&pair);
    println!(
        "dl_e {dle}: receivers {:.1} deg apart, equivalent aperture {:.3} m",
        arr.neighbor_angle.to_degrees(),
        arr.equivalent_aperture()
    );
    for (mg, shifts) in pair.iter().zip(&arr.phase_shift_sets) {
        let deg: Vec<String> = shifts.iter().map(|s| format!("{:.0}", s.to_degrees())).collect();
        println!("  demux {} with shifts [{}] deg", mg.label(), deg.join(", "));
    }

    let tones = ToneSet::default();
    let ptm = pasr_experiment(&pair, 2.0, &tones, &FeedErrorModel::ideal())?;
    println!("\n{:<14} {:>16} {:>16}", "transmitted", "demux 1 (dBm)", "demux 2 (dBm)");
    for (i, label) in ptm.labels.iter().enumerate() {
        println!("{label:<14} {:>16.2} {:>16.2}", ptm.dbm(i, 0), ptm.dbm(i, 1));
    }
    let ct = crosstalk(&ptm)?;
    println!("{:<14} {:>16.1} {:>16.1}", "CT (dB)", ct[0], ct[1]);

    let levels: Vec<(f64, f64)> = [1.0, 2.0, 5.0, 10.0]
        .iter()
        .map(|&p: &f64| (p / 100.0, p.to_radians()))
        .collect();
    let trend = crosstalk_vs_feed_error(&pair, 2.0, 1, &tones, &levels, 20, 7)?;
    println!("\nmean worst CT over 20 feed-error draws:");
    for ((amp, phase), ct) in levels.iter().zip(trend) {
        println!("  {:>4.0}% / {:>3.0} deg  {ct:>7.1} dB", amp * 100.0, phase.to_degrees());
    }
    Ok(())
}
