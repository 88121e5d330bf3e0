use crate::context::{QContext, TruncatedValue};
use crate::error::{QError, Result};

/// Sum `t_0 + t_1 + ...` where `t_{k+1} = t_k * ratio(k)`.
///
/// Stops once `|t_k| r / (1 - r)` with `r = |ratio(k)|` falls below
/// `series_tol` relative to the accumulated `Σ|t_j|`. That is a rigorous
/// remainder bound whenever the ratios are non-increasing from `k` on,
/// which holds eventually for every series in this workspace (their ratios
/// carry a factor `q^k`).
pub fn sum_by_ratio<R>(first: f64, mut ratio: R, what: &str, ctx: &QContext) -> Result<TruncatedValue>
where
    R: FnMut(usize) -> f64,
{
    if first == 0.0 {
        return Ok(TruncatedValue::exact(0.0, 1));
    }
    let mut sum = first;
    let mut mass = first.abs();
    let mut t = first;
    let mut r = ratio(0);
    for k in 0..ctx.max_terms {
        let ra = r.abs();
        if ra < 1.0 {
            let bound = t.abs() * ra / (1.0 - ra);
            if bound <= ctx.series_tol * mass {
                return Ok(TruncatedValue { value: sum, tail_bound: bound, terms_used: k + 1 });
            }
        }
        t *= r;
        if !t.is_finite() {
            break;
        }
        sum += t;
        mass += t.abs();
        if t == 0.0 {
            return Ok(TruncatedValue { value: sum, tail_bound: 0.0, terms_used: k + 2 });
        }
        r = ratio(k + 1);
    }
    Err(QError::NonConvergence { what: what.to_string(), terms: ctx.max_terms })
}
