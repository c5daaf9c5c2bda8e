use super::gk::gk21;
use super::sum::NeumaierSum;
use super::{QuadValue, QuadratureConfig, QuadratureResult};
use crate::error::{Error, Result};
use std::cmp::Ordering;
use std::collections::BinaryHeap;

/// Hard cap on live subintervals, independent of depth.
const MAX_INTERVALS: usize = 20_000;

#[derive(Debug, Clone, Copy)]
struct Piece<T> {
    a: f64,
    b: f64,
    value: T,
    err: f64,
    depth: u32,
    // no further split can help: depth limit or roundoff floor
    final_: bool,
}

struct ByErr(f64, usize);

impl PartialEq for ByErr {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}
impl Eq for ByErr {}
impl PartialOrd for ByErr {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for ByErr {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0.total_cmp(&other.0).then_with(|| other.1.cmp(&self.1))
    }
}

/// Adaptive integration of f over [a, b]. Fails with MaxDepthExceeded if the
/// tolerance cannot be met.
pub fn integrate_adaptive<T, F>(f: F, a: f64, b: f64, cfg: &QuadratureConfig) -> Result<QuadratureResult<T>>
where
    T: QuadValue,
    F: Fn(f64) -> T,
{
    integrate_adaptive_points(f, &[a, b], cfg)
}

/// As [`integrate_adaptive`] but with interior breakpoints.
pub fn integrate_adaptive_points<T, F>(f: F, points: &[f64], cfg: &QuadratureConfig) -> Result<QuadratureResult<T>>
where
    T: QuadValue,
    F: Fn(f64) -> T,
{
    let r = integrate_adaptive_best(f, points, cfg)?;
    if r.converged {
        Ok(r)
    } else {
        Err(Error::MaxDepthExceeded { estimate: r.value.magnitude(), abs_error: r.abs_error })
    }
}

/// Adaptive integration that always returns its best estimate; `converged`
/// reports whether the tolerance was met. Errors only on bad input or a
/// non-finite integrand.
pub fn integrate_adaptive_best<T, F>(f: F, points: &[f64], cfg: &QuadratureConfig) -> Result<QuadratureResult<T>>
where
    T: QuadValue,
    F: Fn(f64) -> T,
{
    cfg.validate()?;
    if points.len() < 2 || points.windows(2).any(|w| !(w[0] < w[1])) || points.iter().any(|p| !p.is_finite()) {
        return Err(Error::DomainError(format!("integration limits must be finite and increasing: {points:?}")));
    }
    let mut pieces: Vec<Piece<T>> = Vec::new();
    let mut heap = BinaryHeap::new();
    let mut evals = 0usize;

    let eval_piece = |a: f64, b: f64, depth: u32, evals: &mut usize| -> Result<Piece<T>> {
        let (value, err, bad) = gk21(&f, a, b);
        *evals += 21;
        if let Some(x) = bad {
            return Err(Error::NonFiniteIntegrand(x));
        }
        let mid = 0.5 * (a + b);
        let too_narrow = (b - a) <= 4.0 * f64::EPSILON * mid.abs().max(f64::MIN_POSITIVE);
        Ok(Piece { a, b, value, err, depth, final_: depth >= cfg.max_depth || too_narrow })
    };

    for w in points.windows(2) {
        let p = eval_piece(w[0], w[1], 0, &mut evals)?;
        heap.push(ByErr(p.err, pieces.len()));
        pieces.push(p);
    }

    let mut total = sum_pieces(&pieces);
    let mut total_err: f64 = pieces.iter().map(|p| p.err).sum();
    let mut converged = true;
    loop {
        let target = cfg.abs_tol.max(cfg.rel_tol * total.magnitude());
        if total_err <= target {
            break;
        }
        let Some(ByErr(_, idx)) = heap.pop() else {
            converged = false;
            break;
        };
        let p = pieces[idx];
        if p.final_ || pieces.len() >= MAX_INTERVALS {
            // the worst interval cannot be refined further
            converged = roundoff_limited(&pieces, target);
            break;
        }
        let mid = 0.5 * (p.a + p.b);
        let left = eval_piece(p.a, mid, p.depth + 1, &mut evals)?;
        let right = eval_piece(mid, p.b, p.depth + 1, &mut evals)?;
        let mut left = left;
        let mut right = right;
        // children no better than the parent and both at the noise floor
        if left.err + right.err >= p.err && p.err <= 1e3 * f64::EPSILON * p.value.magnitude().max(total.magnitude()) {
            left.final_ = true;
            right.final_ = true;
        }
        pieces[idx] = left;
        heap.push(ByErr(left.err, idx));
        heap.push(ByErr(right.err, pieces.len()));
        pieces.push(right);
        total_err = total_err - p.err + left.err + right.err;
        if pieces.len().is_multiple_of(64) {
            // refresh to avoid drift in the running error
            total_err = pieces.iter().map(|p| p.err).sum();
            total = sum_pieces(&pieces);
        } else {
            total = total - p.value + left.value + right.value;
        }
    }
    let value = sum_pieces(&pieces);
    let abs_error: f64 = pieces.iter().map(|p| p.err).sum();
    Ok(QuadratureResult { value, abs_error, evaluations: evals, converged })
}

fn roundoff_limited<T: QuadValue>(pieces: &[Piece<T>], target: f64) -> bool {
    let refinable: f64 = pieces.iter().filter(|p| !p.final_).map(|p| p.err).sum();
    let stuck: f64 = pieces.iter().filter(|p| p.final_).map(|p| p.err).sum();
    let noise_floor = pieces.iter().map(|p| p.value.magnitude()).fold(0.0, f64::max) * 1e4 * f64::EPSILON;
    refinable <= target && stuck <= noise_floor.max(target)
}

fn sum_pieces<T: QuadValue>(pieces: &[Piece<T>]) -> T {
    let mut order: Vec<usize> = (0..pieces.len()).collect();
    order.sort_by(|&i, &j| pieces[i].a.total_cmp(&pieces[j].a));
    let s: NeumaierSum<T> = order.into_iter().map(|i| pieces[i].value).collect();
    s.value()
}
