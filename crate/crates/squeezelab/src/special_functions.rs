//! Polynomial kernels shared by the eigenfunction and moment code: physicists'
//! Hermite polynomials, generalized Laguerre polynomials, and the parity-split
//! series that normalizes the mixed raising/lowering family.
//!
//! Everything here is plain three-term recurrence work; the subtlety is purely
//! numerical. Hermite values above degree ~50 lose digits to cancellation in
//! the oscillatory region, so the recurrence switches to double-double
//! accumulation there. The parity series is summed in log space to keep large
//! factorials out of intermediate values.

/// Value and first derivative of a polynomial at a point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PolynomialValue {
    pub value: f64,
    pub derivative: f64,
}

/// Hard cap on polynomial degree. Recurrences stay finite well beyond this,
/// but callers upstream never need more and the accuracy story is only
/// validated up to here.
pub const MAX_DEGREE: u32 = 200;

/// Degree above which the Hermite recurrence runs in double-double arithmetic.
const EXTENDED_PRECISION_THRESHOLD: u32 = 50;

/// Physicists' Hermite polynomial H_n and its derivative H_n' = 2n·H_{n-1},
/// via H_{k+1}(x) = 2x·H_k(x) − 2k·H_{k-1}(x).
pub fn hermite_eval(n: u32, x: f64) -> PolynomialValue {
    assert!(n <= MAX_DEGREE, "Hermite degree {n} exceeds cap {MAX_DEGREE}");
    assert!(x.is_finite(), "Hermite argument must be finite, got {x}");
    if n == 0 {
        return PolynomialValue { value: 1.0, derivative: 0.0 };
    }
    if n > EXTENDED_PRECISION_THRESHOLD {
        return hermite_eval_dd(n, x);
    }
    let mut prev = 1.0; // H_{k-1}
    let mut cur = 2.0 * x; // H_k, k = 1
    for k in 1..n {
        let next = 2.0 * x * cur - 2.0 * (k as f64) * prev;
        prev = cur;
        cur = next;
    }
    PolynomialValue { value: cur, derivative: 2.0 * (n as f64) * prev }
}

fn hermite_eval_dd(n: u32, x: f64) -> PolynomialValue {
    let mut prev = Dd::new(1.0);
    let mut cur = Dd::new(2.0 * x);
    for k in 1..n {
        let next = cur.scale(2.0 * x).add(prev.scale(-2.0 * (k as f64)));
        prev = cur;
        cur = next;
    }
    PolynomialValue { value: cur.value(), derivative: 2.0 * (n as f64) * prev.value() }
}

/// Generalized Laguerre polynomial L_n^{(alpha)} and its derivative
/// d/dx L_n^{(alpha)}(x) = −L_{n-1}^{(alpha+1)}(x). Requires alpha > −1 so the
/// underlying weight is integrable; negative x is allowed (the moment formulas
/// evaluate at x = −λ², where every term of the series is positive).
pub fn laguerre_eval(n: u32, alpha: f64, x: f64) -> PolynomialValue {
    assert!(n <= MAX_DEGREE, "Laguerre degree {n} exceeds cap {MAX_DEGREE}");
    assert!(alpha > -1.0, "Laguerre order must satisfy alpha > -1, got {alpha}");
    assert!(x.is_finite(), "Laguerre argument must be finite, got {x}");
    let value = laguerre_value(n, alpha, x);
    let derivative = if n == 0 { 0.0 } else { -laguerre_value(n - 1, alpha + 1.0, x) };
    PolynomialValue { value, derivative }
}

fn laguerre_value(n: u32, alpha: f64, x: f64) -> f64 {
    if n == 0 {
        return 1.0;
    }
    let mut prev = 1.0; // L_0
    let mut cur = 1.0 + alpha - x; // L_1
    for k in 1..n {
        let kf = k as f64;
        let next = ((2.0 * kf + 1.0 + alpha - x) * cur - (kf + alpha) * prev) / (kf + 1.0);
        prev = cur;
        cur = next;
    }
    cur
}

/// Parity-split normalization series for levels built by mixing raising and
/// lowering actions. For even n (m = n/2):
///
/// ```text
/// S_n(λ) = Σ_{l=0..m} 2^{2l} · λ^{n−2l} / ( (2l)! · ((m−l)!)² )
/// ```
///
/// and for odd n (m = (n−1)/2):
///
/// ```text
/// S_n(λ) = Σ_{l=0..m} 2^{2l+1} · λ^{n−1−2l} / ( (2l+1)! · ((m−l)!)² )
/// ```
///
/// Every λ power is even, so each term is ≥ 0 and the sum is strictly positive
/// for all real λ. Terms are assembled in log space so no intermediate
/// factorial overflows.
pub fn parity_sum(n: u32, lambda: f64) -> f64 {
    assert!(n <= MAX_DEGREE, "parity sum level {n} exceeds cap {MAX_DEGREE}");
    assert!(lambda.is_finite(), "parity sum argument must be finite, got {lambda}");
    let ln_fact = ln_factorial_table(n as usize + 1);
    let ln_abs_lambda = lambda.abs().ln(); // -inf at λ = 0 handled below
    let even = n % 2 == 0;
    let m = if even { n / 2 } else { (n - 1) / 2 } as i64;
    let nn = n as i64;
    let mut sum = 0.0;
    for l in 0..=m {
        let (pow2, lam_exp, fact_idx) = if even {
            (2 * l, nn - 2 * l, 2 * l)
        } else {
            (2 * l + 1, nn - 1 - 2 * l, 2 * l + 1)
        };
        let lam_term = if lam_exp == 0 {
            0.0
        } else {
            // λ = 0 with a positive even exponent: ln|λ| = -inf makes the term
            // vanish through exp(), which is the correct limit.
            lam_exp as f64 * ln_abs_lambda
        };
        let ln_term = pow2 as f64 * std::f64::consts::LN_2 + lam_term
            - ln_fact[fact_idx as usize]
            - 2.0 * ln_fact[(m - l) as usize];
        sum += ln_term.exp();
    }
    sum
}

fn ln_factorial_table(len: usize) -> Vec<f64> {
    let mut table = vec![0.0; len.max(1)];
    let mut acc = 0.0;
    for (k, slot) in table.iter_mut().enumerate().skip(1) {
        acc += (k as f64).ln();
        *slot = acc;
    }
    table
}

// Minimal double-double arithmetic: enough for the Hermite recurrence
// (scalar multiply and add). `lo` carries the rounding error of `hi`.
#[derive(Debug, Clone, Copy)]
struct Dd {
    hi: f64,
    lo: f64,
}

fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    let err = (a - (s - bb)) + (b - bb);
    (s, err)
}

fn quick_two_sum(a: f64, b: f64) -> (f64, f64) {
    // Requires |a| >= |b|, which holds for a sum and its rounding error.
    let s = a + b;
    (s, b - (s - a))
}

fn two_prod(a: f64, b: f64) -> (f64, f64) {
    let p = a * b;
    let e = a.mul_add(b, -p);
    (p, e)
}

impl Dd {
    fn new(x: f64) -> Self {
        Dd { hi: x, lo: 0.0 }
    }

    fn add(self, other: Dd) -> Dd {
        let (s, e) = two_sum(self.hi, other.hi);
        let e = e + self.lo + other.lo;
        let (hi, lo) = quick_two_sum(s, e);
        Dd { hi, lo }
    }

    fn scale(self, s: f64) -> Dd {
        let (p, e) = two_prod(self.hi, s);
        let e = e + self.lo * s;
        let (hi, lo) = quick_two_sum(p, e);
        Dd { hi, lo }
    }

    fn value(self) -> f64 {
        self.hi + self.lo
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quadrature::GaussHermite;
    use approx::{assert_abs_diff_eq, assert_relative_eq};
    use proptest::prelude::*;

    fn factorial(n: u32) -> f64 {
        (1..=n).map(|k| k as f64).product()
    }

    #[test]
    fn hermite_low_degrees_match_explicit_polynomials() {
        assert_eq!(hermite_eval(0, 0.37).value, 1.0);
        assert_eq!(hermite_eval(1, 0.7).value, 1.4);
        // H_2 = 4x² − 2, H_3 = 8x³ − 12x, H_4 = 16x⁴ − 48x² + 12
        assert_relative_eq!(hermite_eval(2, 1.3).value, 4.0 * 1.3f64.powi(2) - 2.0, max_relative = 1e-14);
        assert_relative_eq!(hermite_eval(3, 1.0).value, -4.0, max_relative = 1e-14);
        let x: f64 = -0.8;
        assert_relative_eq!(
            hermite_eval(4, x).value,
            16.0 * x.powi(4) - 48.0 * x.powi(2) + 12.0,
            max_relative = 1e-13
        );
    }

    #[test]
    fn hermite_values_at_origin_follow_parity_pattern() {
        // H_{2m}(0) = (−1)^m (2m)!/m!, odd degrees vanish.
        assert_eq!(hermite_eval(5, 0.0).value, 0.0);
        assert_relative_eq!(hermite_eval(10, 0.0).value, -30240.0, max_relative = 1e-13);
        let expected_60 = factorial(60) / factorial(30); // positive since m = 30 is even
        assert_relative_eq!(hermite_eval(60, 0.0).value, expected_60, max_relative = 1e-12);
    }

    #[test]
    fn extended_precision_path_is_consistent_with_plain_path() {
        // Degrees just above the switchover, compared against the plain f64
        // recurrence run explicitly. Agreement is limited by the f64 path.
        for n in [51u32, 60, 80] {
            for &x in &[0.3, 1.7, -2.9, 4.2] {
                let mut prev = 1.0f64;
                let mut cur = 2.0 * x;
                for k in 1..n {
                    let next = 2.0 * x * cur - 2.0 * (k as f64) * prev;
                    prev = cur;
                    cur = next;
                }
                let dd = hermite_eval(n, x);
                assert_relative_eq!(dd.value, cur, max_relative = 1e-9);
            }
        }
    }

    #[test]
    fn hermite_orthogonality_against_gaussian_weight() {
        // ∫ H_m H_n e^{−x²} dx = δ_mn · 2ⁿ n! √π, degrees up to 10.
        let rule = GaussHermite::new(16);
        let sqrt_pi = std::f64::consts::PI.sqrt();
        for m in 0..=10u32 {
            for n in 0..=10u32 {
                let integral =
                    rule.integrate(|t| hermite_eval(m, t).value * hermite_eval(n, t).value);
                if m == n {
                    let expected = 2f64.powi(n as i32) * factorial(n) * sqrt_pi;
                    assert_relative_eq!(integral, expected, max_relative = 1e-10);
                } else {
                    let scale = (2f64.powi(m as i32) * factorial(m) * sqrt_pi
                        * 2f64.powi(n as i32)
                        * factorial(n)
                        * sqrt_pi)
                        .sqrt();
                    assert!(
                        integral.abs() <= 1e-10 * scale,
                        "H_{m}·H_{n} overlap {integral} exceeds 1e-10 of scale {scale}"
                    );
                }
            }
        }
    }

    #[test]
    fn shifted_hermite_norm_matches_laguerre_constant() {
        // ∫ e^{−x²} H_n(x+μ)² dx = 2ⁿ n! √π · L_n^{(0)}(−2μ²)
        let rule = GaussHermite::new(16);
        let sqrt_pi = std::f64::consts::PI.sqrt();
        for n in 0..=8u32 {
            for &mu in &[0.35f64, std::f64::consts::FRAC_1_SQRT_2, 1.2] {
                let integral = rule.integrate(|t| {
                    let h = hermite_eval(n, t + mu).value;
                    h * h
                });
                let expected = 2f64.powi(n as i32)
                    * factorial(n)
                    * sqrt_pi
                    * laguerre_eval(n, 0.0, -2.0 * mu * mu).value;
                assert_relative_eq!(integral, expected, max_relative = 1e-10);
            }
        }
    }

    #[test]
    fn laguerre_low_degrees_match_explicit_polynomials() {
        assert_eq!(laguerre_eval(0, 0.7, 3.1).value, 1.0);
        // L_1^{(α)}(x) = 1 + α − x
        assert_relative_eq!(laguerre_eval(1, 0.0, -1.0).value, 2.0, max_relative = 1e-14);
        assert_relative_eq!(laguerre_eval(1, 1.0, 0.3).value, 1.7, max_relative = 1e-14);
        // L_2^{(0)}(−1) = (x² − 4x + 2)/2 at x = −1
        assert_relative_eq!(laguerre_eval(2, 0.0, -1.0).value, 3.5, max_relative = 1e-14);
    }

    #[test]
    fn parity_sum_small_levels_match_hand_sums() {
        assert_relative_eq!(parity_sum(0, 0.9), 1.0, max_relative = 1e-14);
        assert_relative_eq!(parity_sum(1, -2.3), 2.0, max_relative = 1e-14);
        // n = 2: λ² + 2
        assert_relative_eq!(parity_sum(2, 0.5), 2.25, max_relative = 1e-13);
        // n = 3: 2λ² + 4/3
        assert_relative_eq!(parity_sum(3, 0.7), 2.0 * 0.49 + 4.0 / 3.0, max_relative = 1e-13);
        // λ = 0 keeps only the λ⁰ term: 2ⁿ/n!
        assert_relative_eq!(parity_sum(4, 0.0), 16.0 / 24.0, max_relative = 1e-13);
        assert_relative_eq!(parity_sum(5, 0.0), 32.0 / 120.0, max_relative = 1e-13);
    }

    #[test]
    fn parity_sum_log_space_matches_direct_factorials() {
        for n in 0..=30u32 {
            for &lam in &[0.0f64, 0.1, 0.77, -1.5, 3.0, -6.0] {
                let m = if n % 2 == 0 { n / 2 } else { (n - 1) / 2 };
                let mut direct = 0.0;
                for l in 0..=m {
                    let term = if n % 2 == 0 {
                        let e = (n - 2 * l) as i32;
                        4f64.powi(l as i32) * lam.powi(e)
                            / (factorial(2 * l) * factorial(m - l).powi(2))
                    } else {
                        let e = (n - 1 - 2 * l) as i32;
                        2.0 * 4f64.powi(l as i32) * lam.powi(e)
                            / (factorial(2 * l + 1) * factorial(m - l).powi(2))
                    };
                    direct += term;
                }
                assert_relative_eq!(parity_sum(n, lam), direct, max_relative = 1e-11);
            }
        }
    }

    proptest! {
        #[test]
        fn hermite_derivative_matches_central_difference(n in 0u32..=20, x in -3.5f64..3.5) {
            let h = 1e-6;
            let pv = hermite_eval(n, x);
            let fd = (hermite_eval(n, x + h).value - hermite_eval(n, x - h).value) / (2.0 * h);
            let floor = pv.value.abs().max(pv.derivative.abs()).max(1.0);
            prop_assert!(
                (fd - pv.derivative).abs() <= 1e-6 * floor,
                "n={} x={} analytic={} fd={}", n, x, pv.derivative, fd
            );
        }

        #[test]
        fn laguerre_derivative_matches_central_difference(
            n in 0u32..=20,
            alpha in -0.9f64..3.0,
            x in -8.0f64..8.0,
        ) {
            let h = 1e-6;
            let pv = laguerre_eval(n, alpha, x);
            let fd = (laguerre_eval(n, alpha, x + h).value - laguerre_eval(n, alpha, x - h).value)
                / (2.0 * h);
            let floor = pv.value.abs().max(pv.derivative.abs()).max(1.0);
            prop_assert!(
                (fd - pv.derivative).abs() <= 1e-6 * floor,
                "n={} alpha={} x={} analytic={} fd={}", n, alpha, x, pv.derivative, fd
            );
        }

        #[test]
        fn laguerre_recurrence_matches_explicit_quadratic_and_cubic(
            alpha in -0.9f64..4.0,
            x in -6.0f64..6.0,
        ) {
            let l2 = laguerre_eval(2, alpha, x).value;
            let expect2 = x * x / 2.0 - (alpha + 2.0) * x + (alpha + 1.0) * (alpha + 2.0) / 2.0;
            prop_assert!((l2 - expect2).abs() <= 1e-12 * expect2.abs().max(1.0));
            let l3 = laguerre_eval(3, alpha, x).value;
            let expect3 = -x.powi(3) / 6.0 + (alpha + 3.0) * x * x / 2.0
                - (alpha + 2.0) * (alpha + 3.0) * x / 2.0
                + (alpha + 1.0) * (alpha + 2.0) * (alpha + 3.0) / 6.0;
            prop_assert!((l3 - expect3).abs() <= 1e-12 * expect3.abs().max(1.0));
        }

        #[test]
        fn parity_sum_is_strictly_positive(n in 0u32..=20, lam in -6.0f64..6.0) {
            prop_assert!(parity_sum(n, lam) > 0.0);
        }
    }

    #[test]
    fn degree_cap_is_enforced() {
        let result = std::panic::catch_unwind(|| hermite_eval(MAX_DEGREE + 1, 0.1));
        assert!(result.is_err());
    }

    #[test]
    fn hermite_zero_value_has_zero_abs_diff_not_relative() {
        // Odd Hermite at 0 is exactly 0; keep this pinned since downstream
        // parity arguments rely on it.
        assert_abs_diff_eq!(hermite_eval(7, 0.0).value, 0.0);
    }
}
