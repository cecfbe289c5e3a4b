//! Scalar minimization and root finding for the rate analysis.

use crate::error::{QkdError, Result};

const INV_GOLDEN: f64 = 0.618_033_988_749_894_9;

/// Golden-section search for the minimizer of a unimodal function on
/// `[lo, hi]`, to absolute tolerance `tol` in the argument.
pub(crate) fn golden_section_min<F>(mut f: F, mut lo: f64, mut hi: f64, tol: f64) -> Result<f64>
where
    F: FnMut(f64) -> Result<f64>,
{
    if hi < lo {
        std::mem::swap(&mut lo, &mut hi);
    }
    let mut a = hi - INV_GOLDEN * (hi - lo);
    let mut b = lo + INV_GOLDEN * (hi - lo);
    let mut fa = f(a)?;
    let mut fb = f(b)?;
    while hi - lo > tol {
        if fa <= fb {
            hi = b;
            b = a;
            fb = fa;
            a = hi - INV_GOLDEN * (hi - lo);
            fa = f(a)?;
        } else {
            lo = a;
            a = b;
            fa = fb;
            b = lo + INV_GOLDEN * (hi - lo);
            fb = f(b)?;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// Scans `[lo, hi]` with `steps` equal intervals for the first sign change of
/// `f`. Returns the bracketing pair, or the exact root when a sample hits 0.
pub(crate) fn find_sign_change<F>(
    mut f: F,
    lo: f64,
    hi: f64,
    steps: usize,
) -> Result<Option<(f64, f64)>>
where
    F: FnMut(f64) -> Result<f64>,
{
    let step = (hi - lo) / steps as f64;
    let mut x_prev = lo;
    let mut f_prev = f(lo)?;
    if f_prev == 0.0 {
        return Ok(Some((lo, lo)));
    }
    for i in 1..=steps {
        let x = if i == steps { hi } else { lo + step * i as f64 };
        let fx = f(x)?;
        if fx == 0.0 {
            return Ok(Some((x, x)));
        }
        if (fx > 0.0) != (f_prev > 0.0) {
            return Ok(Some((x_prev, x)));
        }
        x_prev = x;
        f_prev = fx;
    }
    Ok(None)
}

/// Bisection root of `f` on a bracket with opposite signs at the endpoints,
/// to absolute tolerance `tol` in the argument.
pub(crate) fn bisect_root<F>(mut f: F, mut lo: f64, mut hi: f64, tol: f64) -> Result<f64>
where
    F: FnMut(f64) -> Result<f64>,
{
    let f_lo = f(lo)?;
    let f_hi = f(hi)?;
    if f_lo == 0.0 {
        return Ok(lo);
    }
    if f_hi == 0.0 {
        return Ok(hi);
    }
    if (f_lo > 0.0) == (f_hi > 0.0) {
        return Err(QkdError::Domain(
            "bisection bracket endpoints have the same sign".into(),
        ));
    }
    let lo_positive = f_lo > 0.0;
    while hi - lo > tol {
        let mid = 0.5 * (lo + hi);
        let fm = f(mid)?;
        if fm == 0.0 {
            return Ok(mid);
        }
        if (fm > 0.0) == lo_positive {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn golden_section_finds_parabola_minimum() {
        let xmin = golden_section_min(|x| Ok((x - 0.37).powi(2)), 0.0, 1.0, 1e-10).unwrap();
        assert!((xmin - 0.37).abs() < 1e-9);
    }

    #[test]
    fn bisection_on_cubic() {
        let f = |x: f64| Ok(x * x * x - 0.2);
        let (lo, hi) = find_sign_change(f, 0.0, 1.0, 64).unwrap().unwrap();
        let root = bisect_root(f, lo, hi, 1e-8).unwrap();
        assert!((root - 0.2f64.powf(1.0 / 3.0)).abs() < 1e-7);
    }

    #[test]
    fn no_sign_change_reported() {
        let none = find_sign_change(|x| Ok(x * x + 1.0), -1.0, 1.0, 32).unwrap();
        assert!(none.is_none());
    }
}
