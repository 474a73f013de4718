//! Angles produced by each annealing schedule.

use qineq::schedule::{derive_params, ScheduleKind, ScheduleSpec};

fn main() -> qineq::Result<()> {
    let p = 6;
    for kind in [ScheduleKind::Sinusoidal, ScheduleKind::Linear, ScheduleKind::RandomAngles] {
        let params = derive_params(&ScheduleSpec::new(kind, 0.75, p)?.with_seed(11))?;
        println!("{kind}");
        for (l, (b, g)) in params.betas.iter().zip(&params.gammas).enumerate() {
            println!("  layer {}: beta {b:.4} gamma {g:.4}", l + 1);
        }
    }
    Ok(())
}
