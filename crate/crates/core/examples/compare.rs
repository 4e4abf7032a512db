//! Median final ISL of the MM solver and CAN over seeded random starts.
//!
//! `cargo run --release --example compare -- [N] [iterations] [trials]`

use unipol::baselines::can_run;
use unipol::solver::{run, PhaseRange, SolverConfig};

fn median(mut v: Vec<f64>) -> f64 {
    v.sort_by(f64::total_cmp);
    let m = v.len() / 2;
    if v.len() % 2 == 0 {
        0.5 * (v[m - 1] + v[m])
    } else {
        v[m]
    }
}

fn main() -> unipol::Result<()> {
    let args: Vec<usize> = std::env::args().skip(1).filter_map(|a| a.parse().ok()).collect();
    let n = args.first().copied().unwrap_or(100);
    let iters = args.get(1).copied().unwrap_or(1000);
    let trials = args.get(2).copied().unwrap_or(30);
    let range = if std::env::var("PHASE_RANGE").as_deref() == Ok("paper") {
        PhaseRange::Paper
    } else {
        PhaseRange::Full
    };

    let (mut init, mut mm, mut can, mut secs) = (vec![], vec![], vec![], 0.0);
    for seed in 0..trials as u64 {
        let cfg = SolverConfig::new(n).with_iterations(iters).with_seed(seed).with_phase_range(range);
        let a = run(&cfg, None)?;
        let b = can_run(&cfg, None)?;
        init.push(a.initial_isl());
        mm.push(a.final_isl());
        can.push(b.final_isl());
        secs += a.total_seconds();
    }
    println!("N = {n}, {iters} iterations, {trials} trials");
    println!("median initial ISL {:.3}", median(init));
    println!("median final ISL   unipol {:.3}   can {:.3}", median(mm), median(can));
    println!("mean unipol time   {:.3} s", secs / trials as f64);
    Ok(())
}
