use crate::error::{Error, Result};

/// Affine map of `x` from `src` onto `dst`.
pub fn linear_rescale(x: f64, src: (f64, f64), dst: (f64, f64)) -> Result<f64> {
    let (lo, hi) = src;
    if lo.partial_cmp(&hi) != Some(std::cmp::Ordering::Less) {
        return Err(Error::SourceRangeEmpty { lo, hi });
    }
    if !(lo..=hi).contains(&x) {
        return Err(Error::OutOfRange { value: x, lo, hi });
    }
    Ok(dst.0 + (x - lo) * (dst.1 - dst.0) / (hi - lo))
}
