use std::cmp::Ordering;

use crate::categorical::CategoricalState;
use crate::error::{Error, Result};
use crate::point::VAPoint;

const KL_EPSILON: f64 = 1e-12;

fn check_lengths(a: usize, b: usize) -> Result<()> {
    if a != b {
        return Err(Error::LengthMismatch {
            expected: a,
            found: b,
        });
    }
    if a == 0 {
        return Err(Error::EmptyInput);
    }
    Ok(())
}

fn check_sets(preds: &[CategoricalState], gts: &[CategoricalState]) -> Result<()> {
    check_lengths(preds.len(), gts.len())?;
    preds
        .iter()
        .zip(gts)
        .try_for_each(|(p, g)| p.ensure_same_set(g))
}

/// Fraction of pairs whose argmax labels agree.
pub fn top1_accuracy(preds: &[CategoricalState], gts: &[CategoricalState]) -> Result<f64> {
    check_sets(preds, gts)?;
    let hits = preds
        .iter()
        .zip(gts)
        .filter(|(p, g)| p.argmax() == g.argmax())
        .count();
    Ok(hits as f64 / preds.len() as f64)
}

/// Unweighted mean of per-class F1 over every class of the emotion set.
/// Classes that never occur in either argmax list score 0.
pub fn macro_f1(preds: &[CategoricalState], gts: &[CategoricalState]) -> Result<f64> {
    check_sets(preds, gts)?;
    let classes = gts[0].len();
    let mut tp = vec![0usize; classes];
    let mut fp = vec![0usize; classes];
    let mut fn_ = vec![0usize; classes];
    for (p, g) in preds.iter().zip(gts) {
        let (pi, gi) = (p.argmax(), g.argmax());
        if pi == gi {
            tp[pi] += 1;
        } else {
            fp[pi] += 1;
            fn_[gi] += 1;
        }
    }
    let total: f64 = (0..classes)
        .map(|c| {
            let denom = 2 * tp[c] + fp[c] + fn_[c];
            if denom == 0 {
                0.0
            } else {
                2.0 * tp[c] as f64 / denom as f64
            }
        })
        .sum();
    Ok(total / classes as f64)
}

/// Kendall tau-b between two probability vectors over the same set.
pub fn kendall_tau(pred: &CategoricalState, gt: &CategoricalState) -> Result<f64> {
    pred.ensure_same_set(gt)?;
    kendall_tau_b(pred.probs(), gt.probs())
}

/// Tau-b by Knight's O(n log n) method: sort by `(x, y)`, then count the
/// strict inversions left in `y` with a merge sort.
pub fn kendall_tau_b(x: &[f64], y: &[f64]) -> Result<f64> {
    if x.len() != y.len() {
        return Err(Error::LengthMismatch {
            expected: x.len(),
            found: y.len(),
        });
    }
    if let Some(&bad) = x.iter().chain(y).find(|v| !v.is_finite()) {
        return Err(Error::NonFinite(bad));
    }
    let n = x.len();
    let cmp = |a: f64, b: f64| a.partial_cmp(&b).unwrap_or(Ordering::Equal);
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| cmp(x[a], x[b]).then(cmp(y[a], y[b])));

    let pairs = |t: usize| (t * t.saturating_sub(1) / 2) as u64;
    let mut ties_x = 0u64;
    let mut ties_xy = 0u64;
    let mut i = 0;
    while i < n {
        let mut j = i + 1;
        while j < n && x[order[j]] == x[order[i]] {
            j += 1;
        }
        ties_x += pairs(j - i);
        let mut k = i;
        while k < j {
            let mut l = k + 1;
            while l < j && y[order[l]] == y[order[k]] {
                l += 1;
            }
            ties_xy += pairs(l - k);
            k = l;
        }
        i = j;
    }

    let mut ys: Vec<f64> = order.iter().map(|&k| y[k]).collect();
    let mut buf = ys.clone();
    let swaps = count_inversions(&mut ys, &mut buf);

    let mut ties_y = 0u64;
    let mut i = 0;
    while i < n {
        let mut j = i + 1;
        while j < n && ys[j] == ys[i] {
            j += 1;
        }
        ties_y += pairs(j - i);
        i = j;
    }

    let total = pairs(n);
    let denom_x = total - ties_x;
    let denom_y = total - ties_y;
    if denom_x == 0 || denom_y == 0 {
        return Err(Error::DegenerateInput);
    }
    let numer = total as f64 - ties_x as f64 - ties_y as f64 + ties_xy as f64 - 2.0 * swaps as f64;
    let tau = numer / ((denom_x as f64) * (denom_y as f64)).sqrt();
    Ok(tau.clamp(-1.0, 1.0))
}

/// Sorts `v` ascending, returning the number of pairs `i < j` with `v[i] > v[j]`.
fn count_inversions(v: &mut [f64], buf: &mut [f64]) -> u64 {
    let n = v.len();
    if n < 2 {
        return 0;
    }
    let mid = n / 2;
    let mut count = {
        let (lo, hi) = v.split_at_mut(mid);
        let (blo, bhi) = buf.split_at_mut(mid);
        count_inversions(lo, blo) + count_inversions(hi, bhi)
    };
    let (mut i, mut j, mut k) = (0, mid, 0);
    while i < mid && j < n {
        if v[j] < v[i] {
            buf[k] = v[j];
            count += (mid - i) as u64;
            j += 1;
        } else {
            buf[k] = v[i];
            i += 1;
        }
        k += 1;
    }
    buf[k..k + mid - i].copy_from_slice(&v[i..mid]);
    k += mid - i;
    buf[k..k + n - j].copy_from_slice(&v[j..n]);
    v.copy_from_slice(&buf[..n]);
    count
}

/// Product-moment correlation, two-pass.
pub fn pearson_r(xs: &[f64], ys: &[f64]) -> Result<f64> {
    check_lengths(xs.len(), ys.len())?;
    if xs.len() < 2 {
        return Err(Error::LengthMismatch {
            expected: 2,
            found: xs.len(),
        });
    }
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let (mut sxy, mut sxx, mut syy) = (0.0, 0.0, 0.0);
    for (x, y) in xs.iter().zip(ys) {
        let (dx, dy) = (x - mx, y - my);
        sxy += dx * dy;
        sxx += dx * dx;
        syy += dy * dy;
    }
    if sxx == 0.0 || syy == 0.0 {
        return Err(Error::ZeroVariance);
    }
    Ok((sxy / (sxx.sqrt() * syy.sqrt())).clamp(-1.0, 1.0))
}

/// Root mean squared error pooled over both axes and all samples.
pub fn rmse(preds: &[VAPoint], gts: &[VAPoint]) -> Result<f64> {
    check_lengths(preds.len(), gts.len())?;
    let sum: f64 = preds
        .iter()
        .zip(gts)
        .map(|(p, g)| p.squared_distance(g))
        .sum();
    Ok((sum / (2 * preds.len()) as f64).sqrt())
}

/// Mean of the two squared per-axis errors.
pub fn mse_loss(pred: &VAPoint, gt: &VAPoint) -> f64 {
    pred.squared_distance(gt) / 2.0
}

/// `KL(target || pred)` with both arguments smoothed by 1e-12 inside the logs.
pub fn kl_divergence(target: &[f64], pred: &[f64]) -> Result<f64> {
    if target.len() != pred.len() {
        return Err(Error::ShapeMismatch {
            expected: format!("{} values", target.len()),
            found: format!("{} values", pred.len()),
        });
    }
    Ok(target
        .iter()
        .zip(pred)
        .filter(|(t, _)| **t > 0.0)
        .map(|(t, p)| t * ((t + KL_EPSILON).ln() - (p + KL_EPSILON).ln()))
        .sum())
}

/// One loss term of a mixed-dataset batch.
#[derive(Debug, Clone, PartialEq)]
pub struct LossTerm {
    pub kind: String,
    pub value: f64,
    pub count: usize,
}

/// Sum of loss values weighted by each kind's share of the batch.
pub fn batch_loss(terms: &[LossTerm]) -> Result<f64> {
    if terms.is_empty() {
        return Err(Error::EmptyBatch);
    }
    for t in terms {
        if t.count == 0 {
            return Err(Error::Format(format!(
                "loss term {:?} has zero count",
                t.kind
            )));
        }
        if !t.value.is_finite() {
            return Err(Error::NonFinite(t.value));
        }
    }
    let total: usize = terms.iter().map(|t| t.count).sum();
    Ok(terms
        .iter()
        .map(|t| t.count as f64 / total as f64 * t.value)
        .sum())
}
