//! Deterministic numeric formatting for CSV and report output.

/// Formats a value with 9 significant digits, `.` decimal separator, no
/// locale dependence. Values far from unit scale fall back to scientific
/// notation with the same precision.
pub fn sig9(x: f64) -> String {
    if x == 0.0 {
        return "0".to_string();
    }
    if !x.is_finite() {
        return x.to_string();
    }
    let exp = x.abs().log10().floor() as i32;
    if (-4..9).contains(&exp) {
        let decimals = (8 - exp).max(0) as usize;
        format!("{x:.decimals$}")
    } else {
        format!("{x:.8e}")
    }
}

#[cfg(test)]
mod tests {
    use super::sig9;

    #[test]
    fn nine_significant_digits() {
        assert_eq!(sig9(0.0), "0");
        assert_eq!(sig9(0.110027864438), "0.110027864");
        assert_eq!(sig9(1.0), "1.00000000");
        assert_eq!(sig9(-0.5), "-0.500000000");
        assert_eq!(sig9(250.25), "250.250000");
        assert_eq!(sig9(3.0e-7), "3.00000000e-7");
    }
}
