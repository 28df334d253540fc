//! Improved stochastic ranking evolution strategy, unconstrained mode.

use super::crs2::start_inside;
use super::{run_tracked, Objective, OptOutcome, OptimizerConfig, StopToken, Termination, Tracker, Xoshiro256Plus};

const DIFF_WEIGHT: f64 = 0.85;
const SMOOTHING: f64 = 0.2;
const RESAMPLES: usize = 10;

pub(crate) fn sizes(cfg: &OptimizerConfig, n: usize) -> (usize, usize) {
    let lambda = (cfg.isres.population_factor * (n + 1)).max(2);
    let asked = cfg
        .isres
        .survivors
        .unwrap_or(((lambda as f64) / 7.0).round() as usize);
    let mu = asked.clamp(1, lambda - 1);
    if mu != asked {
        log::warn!("ISRES: {asked} survivors clamped to {mu} for {lambda} offspring");
    }
    (lambda, mu)
}

/// Bubble-sort ranking. Adjacent pairs are compared by objective when both
/// penalties are zero or with probability `pf`, otherwise by penalty.
pub(crate) fn stochastic_rank(vals: &[f64], penalty: &[f64], pf: f64, rng: &mut Xoshiro256Plus) -> Vec<usize> {
    let m = vals.len();
    let mut idx: Vec<usize> = (0..m).collect();
    for _ in 0..m {
        let mut swapped = false;
        for j in 0..m.saturating_sub(1) {
            let (a, b) = (idx[j], idx[j + 1]);
            let by_value = (penalty[a] == 0.0 && penalty[b] == 0.0) || rng.next_f64() < pf;
            let out_of_order = if by_value { vals[a] > vals[b] } else { penalty[a] > penalty[b] };
            if out_of_order {
                idx.swap(j, j + 1);
                swapped = true;
            }
        }
        if !swapped {
            break;
        }
    }
    idx
}

fn inside(x: &[f64], (lo, hi): (f64, f64)) -> bool {
    x.iter().all(|v| (lo..=hi).contains(v))
}

pub fn isres_minimize(
    f: &dyn Objective,
    x0: &[f64],
    cfg: &OptimizerConfig,
    rng: &mut Xoshiro256Plus,
    stop: &StopToken,
) -> OptOutcome {
    let n = x0.len();
    let bounds = cfg.bounds;
    let (lo, hi) = bounds;
    let start = start_inside(x0, bounds, "ISRES");
    let (lambda, mu) = sizes(cfg, n);
    let tracker = Tracker::new(f, cfg.max_evals, stop, &start);
    run_tracked(tracker, |tr| {
        if n == 0 {
            tr.eval(&start)?;
            return Ok(Termination::Converged);
        }
        let nf = n as f64;
        let tau = 1.0 / (2.0 * nf.sqrt()).sqrt();
        let tau_global = 1.0 / (2.0 * nf).sqrt();
        let sigma0 = (hi - lo) / nf.sqrt();
        let penalty = vec![0.0; lambda];

        let mut xs: Vec<Vec<f64>> = Vec::with_capacity(lambda);
        xs.push(start.clone());
        while xs.len() < lambda {
            xs.push((0..n).map(|_| rng.uniform(lo, hi)).collect());
        }
        let mut sigmas = vec![vec![sigma0; n]; lambda];
        let mut vals = Vec::with_capacity(lambda);
        for x in &xs {
            vals.push(tr.eval(x)?);
        }

        loop {
            let rank = stochastic_rank(&vals, &penalty, cfg.isres.ranking_probability, rng);
            let px: Vec<Vec<f64>> = rank[..mu].iter().map(|&k| xs[k].clone()).collect();
            let ps: Vec<Vec<f64>> = rank[..mu].iter().map(|&k| sigmas[k].clone()).collect();

            for k in 0..lambda {
                let i = k % mu;
                let g = tau_global * rng.normal();
                for j in 0..n {
                    let s = ps[i][j] * (g + tau * rng.normal()).exp();
                    sigmas[k][j] = s.min(hi - lo);
                }
                let mut placed = false;
                if k + 1 < mu {
                    for j in 0..n {
                        xs[k][j] = px[k][j] + DIFF_WEIGHT * (px[0][j] - px[k + 1][j]);
                    }
                    placed = inside(&xs[k], bounds);
                }
                if !placed {
                    for j in 0..n {
                        let mut v = px[i][j];
                        for _ in 0..RESAMPLES {
                            let t = px[i][j] + sigmas[k][j] * rng.normal();
                            if (lo..=hi).contains(&t) {
                                v = t;
                                break;
                            }
                        }
                        xs[k][j] = v;
                    }
                }
                for j in 0..n {
                    sigmas[k][j] = ps[i][j] + SMOOTHING * (sigmas[k][j] - ps[i][j]);
                }
            }
            for (x, v) in xs.iter().zip(vals.iter_mut()) {
                *v = tr.eval(x)?;
            }
        }
    })
}
