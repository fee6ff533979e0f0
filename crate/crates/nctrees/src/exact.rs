//! Exact integer comparisons against the two irrational thresholds used by
//! the certification: the degree budget `2 + √2` and the length bound
//! `(22 + √2) / 12 ≈ 1.9512`. No floating point enters a correctness-critical
//! predicate; the float value is exposed for display only.

/// `x <= (2 + √2) * k`, decided as `x <= 2k` or `(x - 2k)^2 <= 2 k^2`.
pub fn fits_degree_budget(x: usize, k: usize) -> bool {
    let (x, k) = (x as i128, k as i128);
    if x <= 2 * k {
        return true;
    }
    let d = x - 2 * k;
    d * d <= 2 * k * k
}

/// `(2 + √2) * m > x`, the strict complement used for the descent condition.
pub fn exceeds_degree_budget(x: usize, k: usize) -> bool {
    !fits_degree_budget(x, k)
}

/// `(2 + √2) * m <= 2k`, i.e. `m <= 2k / (2 + √2)`: the bound on how many
/// bad holes an extremal side may contain.
pub fn fits_bad_hole_budget(m: usize, k: usize) -> bool {
    let (m, k) = (m as i128, k as i128);
    if m > k {
        return false;
    }
    let d = 2 * (k - m);
    d * d >= 2 * m * m
}

/// `12 * len <= (22 + √2) * delta`, i.e. `len <= c * delta` for the certified
/// length bound `c = (22 + √2) / 12`.
pub fn fits_length_bound(len: usize, delta: usize) -> bool {
    let (l, d) = (len as i128, delta as i128);
    if 12 * l <= 22 * d {
        return true;
    }
    let r = 12 * l - 22 * d;
    r * r <= 2 * d * d
}

/// `3 * len <= 5 * k`: the budget for matching the chords of a very good
/// side.
pub fn fits_match_budget(len: usize, k: usize) -> bool {
    3 * len <= 5 * k
}

/// The length bound as a float, for reports only.
pub fn length_bound_approx() -> f64 {
    (22.0 + 2.0_f64.sqrt()) / 12.0
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn degree_budget_brackets_the_irrational() {
        // 2 + √2 = 3.4142...
        assert!(fits_degree_budget(3, 1));
        assert!(!fits_degree_budget(4, 1));
        assert!(fits_degree_budget(6, 2));
        assert!(!fits_degree_budget(7, 2));
        assert!(fits_degree_budget(0, 0));
        assert!(!fits_degree_budget(1, 0));
        // Agreement with the float on a wide range.
        let tau = 2.0 + 2.0_f64.sqrt();
        for k in 0..200usize {
            for x in 0..700usize {
                assert_eq!(fits_degree_budget(x, k), x as f64 <= tau * k as f64 + 1e-9);
            }
        }
    }

    #[test]
    fn bad_hole_budget_brackets_the_irrational() {
        // 2k / (2 + √2) = (2 - √2) k = 0.5857... k
        assert!(fits_bad_hole_budget(0, 1));
        assert!(!fits_bad_hole_budget(1, 1));
        assert!(fits_bad_hole_budget(1, 2));
        assert!(!fits_bad_hole_budget(2, 2));
        assert!(fits_bad_hole_budget(2, 4));
        assert!(!fits_bad_hole_budget(3, 4));
    }

    #[test]
    fn length_bound_brackets_the_irrational() {
        // c = 1.9512...; floor(3c) = 5, floor(7c) = 13.
        assert!(fits_length_bound(5, 3));
        assert!(!fits_length_bound(6, 3));
        assert!(fits_length_bound(13, 7));
        assert!(!fits_length_bound(14, 7));
        assert!(fits_length_bound(0, 0));
        assert!(!fits_length_bound(1, 0));
        let c = length_bound_approx();
        for d in 0..300usize {
            for l in 0..600usize {
                assert_eq!(fits_length_bound(l, d), l as f64 <= c * d as f64 + 1e-9);
            }
        }
    }

    #[test]
    fn match_budget() {
        assert!(fits_match_budget(1, 1));
        assert!(!fits_match_budget(2, 1));
        assert!(fits_match_budget(5, 3));
        assert!(!fits_match_budget(6, 3));
    }
}
