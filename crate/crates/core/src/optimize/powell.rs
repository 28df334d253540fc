//! Powell's direction-set method with Brent line searches.

use super::{run_tracked, Halt, Objective, OptOutcome, OptimizerConfig, StopToken, Termination, Tracker};

const GOLD: f64 = 1.618_034;
const CGOLD: f64 = 0.381_966_0;
const TINY: f64 = 1e-21;
const GROW_LIMIT: f64 = 110.0;
const MIN_TOL: f64 = 1e-11;
const BRENT_ITERS: usize = 500;
const BRACKET_ITERS: usize = 1000;
const MAX_HALVINGS: usize = 64;

/// Objective restricted to the line `x + t * d`.
struct Line<'t, 'a> {
    tr: &'t mut Tracker<'a>,
    x: &'t [f64],
    d: &'t [f64],
    buf: Vec<f64>,
}

impl Line<'_, '_> {
    /// `None` when the point has a non-finite coordinate.
    fn at(&mut self, t: f64) -> Result<Option<f64>, Halt> {
        for ((b, &x), &d) in self.buf.iter_mut().zip(self.x).zip(self.d) {
            *b = x + t * d;
        }
        if !t.is_finite() || self.buf.iter().any(|v| !v.is_finite()) {
            return Ok(None);
        }
        let v = self.tr.eval(&self.buf)?;
        Ok(v.is_finite().then_some(v))
    }

    /// Evaluates at `t`, halving toward `anchor` while the point or its
    /// value is non-finite.
    fn probe(&mut self, anchor: f64, mut t: f64) -> Result<(f64, f64), Halt> {
        for _ in 0..MAX_HALVINGS {
            if let Some(v) = self.at(t)? {
                return Ok((t, v));
            }
            t = anchor + (t - anchor) * 0.5;
        }
        Ok((t, f64::INFINITY))
    }

    fn bracket(&mut self, f0: f64) -> Result<[(f64, f64); 3], Halt> {
        let (mut xa, mut fa) = (0.0, f0);
        let (mut xb, mut fb) = self.probe(0.0, 1.0)?;
        if fa < fb {
            std::mem::swap(&mut xa, &mut xb);
            std::mem::swap(&mut fa, &mut fb);
        }
        let (mut xc, mut fc) = self.probe(xb, xb + GOLD * (xb - xa))?;
        let mut iter = 0;
        while fc < fb && iter < BRACKET_ITERS {
            iter += 1;
            let tmp1 = (xb - xa) * (fb - fc);
            let tmp2 = (xb - xc) * (fb - fa);
            let val = tmp2 - tmp1;
            let denom = if val.abs() < TINY { 2.0 * TINY } else { 2.0 * val };
            let mut w = xb - ((xb - xc) * tmp2 - (xb - xa) * tmp1) / denom;
            if !w.is_finite() {
                w = xc + GOLD * (xc - xb);
            }
            let wlim = xb + GROW_LIMIT * (xc - xb);
            let fw;
            if (w - xc) * (xb - w) > 0.0 {
                let (w1, f1) = self.probe(xb, w)?;
                if f1 < fc {
                    return Ok(order([(xb, fb), (w1, f1), (xc, fc)]));
                } else if f1 > fb {
                    return Ok(order([(xa, fa), (xb, fb), (w1, f1)]));
                }
                (w, fw) = self.probe(xc, xc + GOLD * (xc - xb))?;
            } else if (w - wlim) * (wlim - xc) >= 0.0 {
                (w, fw) = self.probe(xc, wlim)?;
            } else if (w - wlim) * (xc - w) > 0.0 {
                let (w1, f1) = self.probe(xc, w)?;
                if f1 < fc {
                    xb = xc;
                    fb = fc;
                    xc = w1;
                    fc = f1;
                    (w, fw) = self.probe(xc, xc + GOLD * (xc - xb))?;
                } else {
                    (w, fw) = (w1, f1);
                }
            } else {
                (w, fw) = self.probe(xc, xc + GOLD * (xc - xb))?;
            }
            xa = xb;
            fa = fb;
            xb = xc;
            fb = fc;
            xc = w;
            fc = fw;
        }
        Ok(order([(xa, fa), (xb, fb), (xc, fc)]))
    }

    /// Brent minimization along the line; returns `(t, f(t))`.
    fn minimize(&mut self, f0: f64, tol: f64) -> Result<(f64, f64), Halt> {
        let [(xa, _), (xb, fb), (xc, _)] = self.bracket(f0)?;
        let (mut a, mut b) = if xa < xc { (xa, xc) } else { (xc, xa) };
        let (mut x, mut w, mut v) = (xb, xb, xb);
        let (mut fx, mut fw, mut fv) = (fb, fb, fb);
        let mut deltax: f64 = 0.0;
        let mut rat: f64 = 0.0;
        for _ in 0..BRENT_ITERS {
            let tol1 = tol * x.abs() + MIN_TOL;
            let tol2 = 2.0 * tol1;
            let xmid = 0.5 * (a + b);
            if (x - xmid).abs() < tol2 - 0.5 * (b - a) {
                break;
            }
            if deltax.abs() <= tol1 {
                deltax = if x >= xmid { a - x } else { b - x };
                rat = CGOLD * deltax;
            } else {
                let tmp1 = (x - w) * (fx - fv);
                let mut tmp2 = (x - v) * (fx - fw);
                let mut p = (x - v) * tmp2 - (x - w) * tmp1;
                tmp2 = 2.0 * (tmp2 - tmp1);
                if tmp2 > 0.0 {
                    p = -p;
                }
                tmp2 = tmp2.abs();
                let dx_prev = deltax;
                deltax = rat;
                if p > tmp2 * (a - x) && p < tmp2 * (b - x) && p.abs() < (0.5 * tmp2 * dx_prev).abs() {
                    rat = p / tmp2;
                    let u = x + rat;
                    if u - a < tol2 || b - u < tol2 {
                        rat = if xmid - x >= 0.0 { tol1 } else { -tol1 };
                    }
                } else {
                    deltax = if x >= xmid { a - x } else { b - x };
                    rat = CGOLD * deltax;
                }
            }
            let u = if rat.abs() < tol1 {
                if rat >= 0.0 {
                    x + tol1
                } else {
                    x - tol1
                }
            } else {
                x + rat
            };
            let fu = self.at(u)?.unwrap_or(f64::INFINITY);
            if fu > fx {
                if u < x {
                    a = u;
                } else {
                    b = u;
                }
                if fu <= fw || w == x {
                    v = w;
                    fv = fw;
                    w = u;
                    fw = fu;
                } else if fu <= fv || v == x || v == w {
                    v = u;
                    fv = fu;
                }
            } else {
                if u >= x {
                    a = x;
                } else {
                    b = x;
                }
                v = w;
                fv = fw;
                w = x;
                fw = fx;
                x = u;
                fx = fu;
            }
        }
        Ok((x, fx))
    }
}

fn order(mut p: [(f64, f64); 3]) -> [(f64, f64); 3] {
    if p[0].0 > p[2].0 {
        p.swap(0, 2);
    }
    p
}

/// Line search from `x` along `d`; updates `x`, `fx`, and `d` to the step taken.
fn line_search(tr: &mut Tracker, x: &mut Vec<f64>, fx: &mut f64, d: &mut [f64], tol: f64) -> Result<(), Halt> {
    let n = x.len();
    let (t, ft) = {
        let mut line = Line {
            tr: &mut *tr,
            x,
            d,
            buf: vec![0.0; n],
        };
        line.minimize(*fx, tol)?
    };
    if ft <= *fx && t.is_finite() {
        let step: Vec<f64> = d.iter().map(|&di| t * di).collect();
        let moved: Vec<f64> = x.iter().zip(&step).map(|(a, s)| a + s).collect();
        if moved.iter().all(|v| v.is_finite()) {
            *x = moved;
            *fx = ft;
            d.copy_from_slice(&step);
            return Ok(());
        }
    }
    d.iter_mut().for_each(|v| *v = 0.0);
    Ok(())
}

/// Local Powell search from `x0`. Returns the local minimum on convergence.
pub(crate) fn powell_local(tr: &mut Tracker, x0: &[f64], ftol: f64, max_iters: usize) -> Result<(Vec<f64>, f64), Halt> {
    let n = x0.len();
    let mut x = x0.to_vec();
    let mut fval = tr.eval(&x)?;
    if n == 0 {
        return Ok((x, fval));
    }
    let mut direc: Vec<Vec<f64>> = (0..n)
        .map(|i| {
            let mut e = vec![0.0; n];
            e[i] = 1.0;
            e
        })
        .collect();
    let line_tol = ftol.max(1e-12);
    for _ in 0..max_iters {
        let fx = fval;
        let x_start = x.clone();
        let mut bigind = 0;
        let mut delta = 0.0;
        for (i, d) in direc.iter_mut().enumerate() {
            let before = fval;
            line_search(tr, &mut x, &mut fval, d, line_tol)?;
            if before - fval > delta {
                delta = before - fval;
                bigind = i;
            }
        }
        if 2.0 * (fx - fval) <= ftol * (fx.abs() + fval.abs()) + 1e-20 {
            break;
        }
        let mut direc1: Vec<f64> = x.iter().zip(&x_start).map(|(a, b)| a - b).collect();
        let x2: Vec<f64> = x.iter().zip(&x_start).map(|(a, b)| 2.0 * a - b).collect();
        if !x2.iter().all(|v| v.is_finite()) {
            continue;
        }
        let fx2 = tr.eval(&x2)?;
        if fx > fx2 {
            let mut t = 2.0 * (fx + fx2 - 2.0 * fval);
            let temp = fx - fval - delta;
            t *= temp * temp;
            let temp = fx - fx2;
            t -= delta * temp * temp;
            if t < 0.0 {
                line_search(tr, &mut x, &mut fval, &mut direc1, line_tol)?;
                if direc1.iter().any(|&v| v != 0.0) {
                    direc.swap(bigind, n - 1);
                    direc[n - 1] = direc1;
                }
            }
        }
    }
    Ok((x, fval))
}

/// Standalone Powell run: one local search from `x0`.
pub fn powell_minimize(f: &dyn Objective, x0: &[f64], cfg: &OptimizerConfig, stop: &StopToken) -> OptOutcome {
    let tracker = Tracker::new(f, cfg.max_evals, stop, x0);
    let iters = cfg.bh.powell_max_iters.unwrap_or(100 * x0.len().max(1));
    run_tracked(tracker, |tr| {
        powell_local(tr, x0, cfg.bh.powell_tolerance, iters)?;
        Ok(Termination::Converged)
    })
}
