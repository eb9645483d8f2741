//! Dense BFGS with a strong-Wolfe line search.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BfgsOptions {
    /// Stop once the infinity norm of the gradient is at most this.
    pub gtol: f64,
    pub max_iter: usize,
    pub c1: f64,
    pub c2: f64,
    /// Trial steps allowed per line search, bracketing and zoom combined.
    pub max_line_search: usize,
}

impl Default for BfgsOptions {
    fn default() -> Self {
        BfgsOptions { gtol: 1e-6, max_iter: 500, c1: 1e-4, c2: 0.9, max_line_search: 40 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BfgsStatus {
    Converged,
    MaxIterations,
    LineSearchFailed,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BfgsOutcome {
    pub x: Vec<f64>,
    pub f: f64,
    pub gradient: Vec<f64>,
    pub iterations: usize,
    pub evaluations: usize,
    pub status: BfgsStatus,
}

impl BfgsOutcome {
    pub fn converged(&self) -> bool {
        self.status == BfgsStatus::Converged
    }
}

struct Point {
    x: Vec<f64>,
    f: f64,
    g: Vec<f64>,
}

struct Trial {
    alpha: f64,
    f: f64,
    slope: f64,
    point: Point,
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn inf_norm(v: &[f64]) -> f64 {
    v.iter().fold(0.0, |m, x| m.max(x.abs()))
}

/// Minimizer of the cubic matching values and slopes at `a` and `b`,
/// or `None` when it is undefined.
fn cubic_min(a: f64, fa: f64, da: f64, b: f64, fb: f64, db: f64) -> Option<f64> {
    let d1 = da + db - 3.0 * (fa - fb) / (a - b);
    let disc = d1 * d1 - da * db;
    if !(disc >= 0.0) {
        return None;
    }
    let d2 = (b - a).signum() * disc.sqrt();
    let denom = db - da + 2.0 * d2;
    if denom == 0.0 {
        return None;
    }
    let x = b - (b - a) * (db + d2 - d1) / denom;
    x.is_finite().then_some(x)
}

struct LineSearch<'a, F> {
    f: &'a mut F,
    x: &'a [f64],
    p: &'a [f64],
    f0: f64,
    slope0: f64,
    opts: &'a BfgsOptions,
    evals: usize,
    best: Option<Point>,
}

impl<F> LineSearch<'_, F>
where
    F: FnMut(&[f64]) -> Result<(f64, Vec<f64>)>,
{
    fn eval(&mut self, alpha: f64) -> Result<Trial> {
        let x: Vec<f64> = self.x.iter().zip(self.p).map(|(x, p)| x + alpha * p).collect();
        let (f, g) = (self.f)(&x)?;
        self.evals += 1;
        if !f.is_finite() {
            return Err(Error::LineSearch(format!("objective is {f} at step {alpha:e}")));
        }
        let slope = dot(&g, self.p);
        if self.best.as_ref().map_or(true, |b| f < b.f) {
            self.best = Some(Point { x: x.clone(), f, g: g.clone() });
        }
        Ok(Trial { alpha, f, slope, point: Point { x, f, g } })
    }

    fn armijo_fails(&self, t: &Trial) -> bool {
        t.f > self.f0 + self.opts.c1 * t.alpha * self.slope0
    }

    fn curvature_holds(&self, t: &Trial) -> bool {
        t.slope.abs() <= -self.opts.c2 * self.slope0
    }

    fn search(&mut self, alpha_init: f64) -> Result<Option<Point>> {
        let mut prev = Trial { alpha: 0.0, f: self.f0, slope: self.slope0, point: Point { x: vec![], f: 0.0, g: vec![] } };
        let mut alpha = alpha_init;
        let mut first = true;
        while self.evals < self.opts.max_line_search {
            let t = self.eval(alpha)?;
            if self.armijo_fails(&t) || (!first && t.f >= prev.f) {
                return self.zoom(prev, t);
            }
            if self.curvature_holds(&t) {
                return Ok(Some(t.point));
            }
            if t.slope >= 0.0 {
                return self.zoom(t, prev);
            }
            alpha = 2.0 * t.alpha;
            prev = t;
            first = false;
        }
        Ok(None)
    }

    fn zoom(&mut self, mut lo: Trial, mut hi: Trial) -> Result<Option<Point>> {
        while self.evals < self.opts.max_line_search {
            let (left, right) = if lo.alpha < hi.alpha { (lo.alpha, hi.alpha) } else { (hi.alpha, lo.alpha) };
            let width = right - left;
            if width <= f64::EPSILON * right.abs().max(1e-300) {
                return Ok(None);
            }
            let mid = 0.5 * (left + right);
            let alpha = match cubic_min(lo.alpha, lo.f, lo.slope, hi.alpha, hi.f, hi.slope) {
                Some(a) if a > left + 0.1 * width && a < right - 0.1 * width => a,
                _ => mid,
            };
            let t = self.eval(alpha)?;
            if self.armijo_fails(&t) || t.f >= lo.f {
                hi = t;
            } else {
                if self.curvature_holds(&t) {
                    return Ok(Some(t.point));
                }
                if t.slope * (hi.alpha - lo.alpha) >= 0.0 {
                    hi = lo;
                }
                lo = t;
            }
        }
        Ok(None)
    }
}

/// Minimizes a smooth function given jointly as value and gradient.
///
/// The best point seen is always returned, so the final value never exceeds
/// the value at `x0`.
pub fn bfgs_minimize<F>(mut f: F, x0: &[f64], opts: &BfgsOptions) -> Result<BfgsOutcome>
where
    F: FnMut(&[f64]) -> Result<(f64, Vec<f64>)>,
{
    if !(opts.gtol > 0.0) {
        return Err(Error::InvalidInput("gtol must be positive".into()));
    }
    let n = x0.len();
    let (f0, g0) = f(x0)?;
    if !f0.is_finite() || g0.iter().any(|g| !g.is_finite()) {
        return Err(Error::NonFinite("objective at the starting point".into()));
    }
    let mut evaluations = 1;
    let mut cur = Point { x: x0.to_vec(), f: f0, g: g0 };
    // Row-major inverse Hessian approximation.
    let mut h = identity(n);
    let mut fresh = true;
    let mut iterations = 0;
    let status = loop {
        if inf_norm(&cur.g) <= opts.gtol {
            break BfgsStatus::Converged;
        }
        if iterations >= opts.max_iter {
            break BfgsStatus::MaxIterations;
        }
        let mut p = mat_vec(&h, &cur.g, n);
        p.iter_mut().for_each(|v| *v = -*v);
        let mut slope = dot(&p, &cur.g);
        if !(slope < 0.0) {
            h = identity(n);
            fresh = true;
            p = cur.g.iter().map(|v| -v).collect();
            slope = -dot(&cur.g, &cur.g);
        }
        let alpha_init = if fresh { (1.0 / inf_norm(&p)).min(1.0) } else { 1.0 };
        let mut ls = LineSearch { f: &mut f, x: &cur.x, p: &p, f0: cur.f, slope0: slope, opts, evals: 0, best: None };
        let found = ls.search(alpha_init)?;
        evaluations += ls.evals;
        let best_trial = ls.best.take();
        let next = match found {
            Some(pt) => pt,
            None => {
                if let Some(b) = best_trial.filter(|b| b.f < cur.f) {
                    cur = b;
                }
                if fresh {
                    break BfgsStatus::LineSearchFailed;
                }
                h = identity(n);
                fresh = true;
                iterations += 1;
                continue;
            }
        };
        iterations += 1;
        let s: Vec<f64> = next.x.iter().zip(&cur.x).map(|(a, b)| a - b).collect();
        let y: Vec<f64> = next.g.iter().zip(&cur.g).map(|(a, b)| a - b).collect();
        let sy = dot(&s, &y);
        let yy = dot(&y, &y);
        if sy > f64::EPSILON * dot(&s, &s).sqrt() * yy.sqrt() && yy > 0.0 {
            if fresh {
                let scale = sy / yy;
                h.iter_mut().for_each(|v| *v *= scale);
            }
            bfgs_update(&mut h, &s, &y, sy, n);
            fresh = false;
        }
        cur = next;
    };
    Ok(BfgsOutcome { x: cur.x, f: cur.f, gradient: cur.g, iterations, evaluations, status })
}

fn identity(n: usize) -> Vec<f64> {
    let mut h = vec![0.0; n * n];
    for i in 0..n {
        h[i * n + i] = 1.0;
    }
    h
}

fn mat_vec(h: &[f64], v: &[f64], n: usize) -> Vec<f64> {
    (0..n).map(|i| dot(&h[i * n..(i + 1) * n], v)).collect()
}

/// `H <- (I - r s y^T) H (I - r y s^T) + r s s^T` for symmetric `H`.
fn bfgs_update(h: &mut [f64], s: &[f64], y: &[f64], sy: f64, n: usize) {
    let rho = 1.0 / sy;
    let hy = mat_vec(h, y, n);
    let yhy = dot(y, &hy);
    let k = rho * rho * yhy + rho;
    for i in 0..n {
        for j in 0..n {
            h[i * n + j] += -rho * (s[i] * hy[j] + hy[i] * s[j]) + k * s[i] * s[j];
        }
    }
}
