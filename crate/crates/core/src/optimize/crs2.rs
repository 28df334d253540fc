//! Controlled random search with local mutation (CRS2-LM).

use super::{clamp_into, run_tracked, Objective, OptOutcome, OptimizerConfig, StopToken, Termination, Tracker, Xoshiro256Plus};

pub(crate) fn population_size(cfg: &OptimizerConfig, n: usize) -> usize {
    let asked = cfg.crs2.population.unwrap_or(cfg.crs2.population_factor * (n + 1));
    if asked < n + 2 {
        log::warn!("CRS2: population {asked} raised to {}", n + 2);
    }
    asked.max(n + 2)
}

/// Seeds the population with the start point and uniform samples from the box.
pub(crate) fn start_inside(x0: &[f64], bounds: (f64, f64), who: &str) -> Vec<f64> {
    let mut x = x0.to_vec();
    clamp_into(&mut x, bounds);
    if x != x0 {
        log::warn!("{who}: start point clamped into [{}, {}]", bounds.0, bounds.1);
    }
    x
}

pub fn crs2_minimize(
    f: &dyn Objective,
    x0: &[f64],
    cfg: &OptimizerConfig,
    rng: &mut Xoshiro256Plus,
    stop: &StopToken,
) -> OptOutcome {
    let n = x0.len();
    let bounds = cfg.bounds;
    let start = start_inside(x0, bounds, "CRS2");
    let size = population_size(cfg, n);
    let tracker = Tracker::new(f, cfg.max_evals, stop, &start);
    run_tracked(tracker, |tr| {
        let mut pts: Vec<Vec<f64>> = Vec::with_capacity(size);
        let mut vals: Vec<f64> = Vec::with_capacity(size);
        vals.push(tr.eval(&start)?);
        pts.push(start.clone());
        while pts.len() < size {
            let p: Vec<f64> = (0..n).map(|_| rng.uniform(bounds.0, bounds.1)).collect();
            vals.push(tr.eval(&p)?);
            pts.push(p);
        }
        if n == 0 {
            return Ok(Termination::Converged);
        }
        let mut others: Vec<usize> = Vec::with_capacity(size);
        let mut trial = vec![0.0; n];
        loop {
            let best = argmin(&vals);
            let worst = argmax(&vals);

            // reflect one random point through the centroid of best and n-1 others
            others.clear();
            others.extend((0..size).filter(|&i| i != best));
            for k in 0..n {
                let j = k + rng.below(others.len() - k);
                others.swap(k, j);
            }
            for (i, t) in trial.iter_mut().enumerate() {
                let mut c = pts[best][i];
                for &k in &others[..n - 1] {
                    c += pts[k][i];
                }
                c /= n as f64;
                *t = 2.0 * c - pts[others[n - 1]][i];
            }
            clamp_into(&mut trial, bounds);
            let ft = tr.eval(&trial)?;
            if ft < vals[worst] {
                pts[worst].copy_from_slice(&trial);
                vals[worst] = ft;
                continue;
            }

            // local mutation of the rejected trial toward the best point
            for (i, t) in trial.iter_mut().enumerate() {
                let w = rng.next_f64();
                *t = pts[best][i] * (1.0 + w) - w * *t;
            }
            clamp_into(&mut trial, bounds);
            let fm = tr.eval(&trial)?;
            if fm < vals[worst] {
                pts[worst].copy_from_slice(&trial);
                vals[worst] = fm;
            }
        }
    })
}

fn argmin(v: &[f64]) -> usize {
    let mut k = 0;
    for (i, &x) in v.iter().enumerate() {
        if x < v[k] {
            k = i;
        }
    }
    k
}

fn argmax(v: &[f64]) -> usize {
    let mut k = 0;
    for (i, &x) in v.iter().enumerate() {
        if x > v[k] {
            k = i;
        }
    }
    k
}
