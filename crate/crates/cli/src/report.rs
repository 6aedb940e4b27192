/// Columns of the sweep CSV.
pub const CSV_HEADER: [&str; 11] = [
    "distance_km",
    "eps_tm",
    "va_opt",
    "gain_opt",
    "pbar_succ",
    "i_ab_exact",
    "chi_be_gauss",
    "rate_qs",
    "rate_noqs",
    "tl_plob",
    "status",
];

/// Twelve significant digits in scientific notation.
pub fn num(x: f64) -> String {
    if x == 0.0 {
        // Keep negative zero out of the output.
        format!("{:.11e}", 0.0)
    } else if x.is_finite() {
        format!("{x:.11e}")
    } else if x.is_nan() {
        "nan".into()
    } else if x > 0.0 {
        "inf".into()
    } else {
        "-inf".into()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn twelve_digits() {
        assert_eq!(num(0.0283), "2.83000000000e-2");
        assert_eq!(num(f64::INFINITY), "inf");
        assert_eq!(num(-1.0 / 3.0), "-3.33333333333e-1");
    }
}
