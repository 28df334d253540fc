//! Basin hopping: random perturbation, Powell descent, Metropolis acceptance.

use super::powell::powell_local;
use super::{run_tracked, Objective, OptOutcome, OptimizerConfig, StopToken, Tracker, Xoshiro256Plus};

const TARGET_ACCEPT_RATE: f64 = 0.5;
const STEP_FACTOR: f64 = 0.9;

pub fn basin_hopping(
    f: &dyn Objective,
    x0: &[f64],
    cfg: &OptimizerConfig,
    rng: &mut Xoshiro256Plus,
    stop: &StopToken,
) -> OptOutcome {
    let bh = &cfg.bh;
    let n = x0.len();
    let iters = bh.powell_max_iters.unwrap_or(100 * n.max(1));
    let tracker = Tracker::new(f, cfg.max_evals, stop, x0);
    run_tracked(tracker, |tr| {
        let (mut x, mut energy) = powell_local(tr, x0, bh.powell_tolerance, iters)?;
        let mut step = bh.step_size;
        let mut nstep = 0usize;
        let mut naccept = 0usize;
        loop {
            nstep += 1;
            if bh.adapt_interval > 0 && nstep % bh.adapt_interval == 0 {
                if naccept as f64 / nstep as f64 > TARGET_ACCEPT_RATE {
                    step /= STEP_FACTOR;
                } else {
                    step *= STEP_FACTOR;
                }
            }
            let trial: Vec<f64> = x.iter().map(|&v| v + rng.uniform(-step, step)).collect();
            let (cand, cand_energy) = powell_local(tr, &trial, bh.powell_tolerance, iters)?;
            let accept = cand_energy < energy || {
                let w = ((energy - cand_energy) / bh.temperature).exp();
                rng.next_f64() < w.min(1.0)
            };
            if accept {
                naccept += 1;
                x = cand;
                energy = cand_energy;
            }
        }
    })
}
