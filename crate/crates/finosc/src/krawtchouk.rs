//! Krawtchouk polynomials K_m(k; p, N): hypergeometric evaluation, the
//! three-term recurrence as a second first-class route, and the binomial
//! orthogonality and generating-function identities.

use crate::hyp::{binomial, hyp_terminating_real, pochhammer};
use crate::params::Dimension;
use crate::Error;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KrawtchoukParams {
    pub p: f64,
    pub dim: Dimension,
}

impl KrawtchoukParams {
    /// Evaluation only needs p != 0 (1/p is the series argument); the
    /// orthogonality sums additionally require 0 < p < 1.
    pub fn new(p: f64, dim: Dimension) -> Self {
        assert!(p != 0.0 && p.is_finite(), "p must be finite and nonzero");
        KrawtchoukParams { p, dim }
    }

    pub fn orthogonality_ready(&self) -> bool {
        self.p > 0.0 && self.p < 1.0
    }
}

/// K_m(k; p, N) = 2F1(-m, -k; -N; 1/p); polynomial of degree m in k.
pub fn krawtchouk(m: usize, k: f64, params: &KrawtchoukParams) -> Result<f64, Error> {
    let n = params.dim.n();
    if m > n {
        return Err(Error::DegreeOutOfRange { degree: m, n });
    }
    hyp_terminating_real(&[-(m as f64), -k], &[-(n as f64)], 1.0 / params.p, m)
}

/// Solve the three-term recurrence for K_{m+1} given K_m and K_{m-1}:
/// -k K_m = -[p(N-m) + m(1-p)] K_m + p(N-m) K_{m+1} + m(1-p) K_{m-1}.
pub fn krawtchouk_recurrence_step(
    m: usize,
    k: f64,
    params: &KrawtchoukParams,
    k_m: f64,
    k_m_minus: f64,
) -> Result<f64, Error> {
    let n = params.dim.n() as f64;
    let p = params.p;
    let lead = p * (n - m as f64);
    if lead == 0.0 {
        return Err(Error::SingularPivot(format!(
            "p(N-m) = 0 at m = {}, N = {}",
            m, n
        )));
    }
    let diag = p * (n - m as f64) + m as f64 * (1.0 - p);
    Ok(((diag - k) * k_m - m as f64 * (1.0 - p) * k_m_minus) / lead)
}

/// Generate K_0..K_max on one argument by the recurrence alone.
pub fn krawtchouk_by_recurrence(
    max_degree: usize,
    k: f64,
    params: &KrawtchoukParams,
) -> Result<Vec<f64>, Error> {
    let mut out = Vec::with_capacity(max_degree + 1);
    out.push(1.0);
    if max_degree == 0 {
        return Ok(out);
    }
    out.push(1.0 - k / (params.p * params.dim.n() as f64));
    for m in 1..max_degree {
        let next = krawtchouk_recurrence_step(m, k, params, out[m], out[m - 1])?;
        out.push(next);
    }
    Ok(out)
}

/// Left side: sum_x C(N,x) p^x (1-p)^{N-x} K_m(x) K_n(x). Right side:
/// delta_{nm} (-1)^n n! / (-N)_n ((1-p)/p)^n.
pub fn krawtchouk_orthogonality(
    deg_n: usize,
    deg_m: usize,
    params: &KrawtchoukParams,
) -> Result<(f64, f64), Error> {
    assert!(
        params.orthogonality_ready(),
        "orthogonality needs 0 < p < 1"
    );
    let n = params.dim.n();
    let p = params.p;
    let mut lhs = 0.0;
    for x in 0..=n {
        let w = binomial(n, x) * p.powi(x as i32) * (1.0 - p).powi((n - x) as i32);
        lhs += w * krawtchouk(deg_m, x as f64, params)? * krawtchouk(deg_n, x as f64, params)?;
    }
    let rhs = if deg_n == deg_m {
        let sign = if deg_n % 2 == 0 { 1.0 } else { -1.0 };
        sign * crate::hyp::factorial(deg_n) / pochhammer(-(n as f64), deg_n)
            * ((1.0 - p) / p).powi(deg_n as i32)
    } else {
        0.0
    };
    Ok((lhs, rhs))
}

/// |(1+t)^{N-x} (1 - ((1-p)/p) t)^x - sum_n C(N,n) K_n(x) t^n|.
pub fn krawtchouk_genfun_check(x: usize, t: f64, params: &KrawtchoukParams) -> Result<f64, Error> {
    let n = params.dim.n();
    assert!(x <= n, "x must lie on the integer grid 0..N");
    let p = params.p;
    let product = (1.0 + t).powi((n - x) as i32) * (1.0 - (1.0 - p) / p * t).powi(x as i32);
    let mut series = 0.0;
    for deg in 0..=n {
        series += binomial(n, deg) * krawtchouk(deg, x as f64, params)? * t.powi(deg as i32);
    }
    Ok((product - series).abs())
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn params(p: f64, n: usize) -> KrawtchoukParams {
        KrawtchoukParams::new(p, Dimension(n))
    }

    #[test]
    fn degree_zero_and_argument_zero_are_one() {
        let pr = params(0.3, 9);
        for k in [0.0, 1.0, 4.5, 9.0, -2.0] {
            assert_eq!(krawtchouk(0, k, &pr).unwrap(), 1.0);
        }
        for m in 0..=9 {
            assert_eq!(krawtchouk(m, 0.0, &pr).unwrap(), 1.0);
        }
    }

    #[test]
    fn hand_value_and_degree_bound() {
        // K_1(1; 1/2, 2) = 1 - k/(pN) = 1 - 1/(0.5*2) = 0.
        assert_eq!(krawtchouk(1, 1.0, &params(0.5, 2)).unwrap(), 0.0);
        assert!(matches!(
            krawtchouk(5, 1.0, &params(0.5, 4)),
            Err(Error::DegreeOutOfRange { .. })
        ));
    }

    #[test]
    fn recurrence_step_base_cases() {
        let pr = params(0.4, 6);
        // m = 0 with K_{-1} treated as 0 solves to 1 - k/(pN).
        let k1 = krawtchouk_recurrence_step(0, 2.0, &pr, 1.0, 0.0).unwrap();
        assert!((k1 - (1.0 - 2.0 / (0.4 * 6.0))).abs() < 1e-14);
        // k = 0 propagates the constant column K_m(0) = 1.
        let k2 = krawtchouk_recurrence_step(1, 0.0, &pr, 1.0, 1.0).unwrap();
        assert!((k2 - 1.0).abs() < 1e-14);
    }

    #[test]
    fn recurrence_agrees_with_hypergeometric() {
        let pr = params(0.3, 10);
        for k in 0..=10 {
            let rec = krawtchouk_by_recurrence(10, k as f64, &pr).unwrap();
            for m in 0..=10 {
                let hyp = krawtchouk(m, k as f64, &pr).unwrap();
                let scale = hyp.abs().max(1.0);
                assert!(
                    (rec[m] - hyp).abs() <= 1e-12 * scale,
                    "m={} k={}: {} vs {}",
                    m,
                    k,
                    rec[m],
                    hyp
                );
            }
        }
    }

    #[test]
    fn orthogonality_small_cases() {
        let pr = params(0.5, 2);
        let (lhs, rhs) = krawtchouk_orthogonality(1, 1, &pr).unwrap();
        assert!((rhs - 0.5).abs() < 1e-14);
        assert!((lhs - rhs).abs() < 1e-13);
        let (lhs, _) = krawtchouk_orthogonality(0, 1, &pr).unwrap();
        assert!(lhs.abs() < 1e-12);
        // n = m = 0 reduces to the binomial normalization.
        let (lhs, rhs) = krawtchouk_orthogonality(0, 0, &pr).unwrap();
        assert!((rhs - 1.0).abs() < 1e-15);
        assert!((lhs - 1.0).abs() < 1e-13);
    }

    #[test]
    fn self_duality_full_grid() {
        // The whole (n,m) table satisfies the orthogonality sum at N = 12.
        let pr = params(0.37, 12);
        for n in 0..=12 {
            for m in 0..=12 {
                let (lhs, rhs) = krawtchouk_orthogonality(n, m, &pr).unwrap();
                let scale = rhs.abs().max(1.0);
                assert!((lhs - rhs).abs() < 1e-10 * scale, "n={} m={}", n, m);
            }
        }
    }

    #[test]
    fn generating_function_cases() {
        let pr = params(0.4, 6);
        assert_eq!(krawtchouk_genfun_check(3, 0.0, &pr).unwrap(), 0.0);
        assert!(krawtchouk_genfun_check(3, -0.2, &pr).unwrap() < 1e-12);
        // x = 0 collapses the product side to (1+t)^N.
        let pr8 = params(0.6, 8);
        assert!(krawtchouk_genfun_check(0, 0.37, &pr8).unwrap() < 1e-12);
    }

    proptest! {
        #[test]
        fn prop_recurrence_matches_hypergeometric(
            n in 1usize..12,
            p in 0.05f64..0.95,
            k in -3.0f64..15.0,
        ) {
            let pr = params(p, n);
            let rec = krawtchouk_by_recurrence(n, k, &pr).unwrap();
            for m in 0..=n {
                let hyp = krawtchouk(m, k, &pr).unwrap();
                let scale = hyp.abs().max(1.0);
                prop_assert!((rec[m] - hyp).abs() <= 1e-9 * scale);
            }
        }

        #[test]
        fn prop_self_duality(n in 1usize..9, p in 0.1f64..0.9, m in 0usize..9, k in 0usize..9) {
            let (m, k) = (m.min(n), k.min(n));
            let pr = params(p, n);
            let a = krawtchouk(m, k as f64, &pr).unwrap();
            let b = krawtchouk(k, m as f64, &pr).unwrap();
            let scale = a.abs().max(1.0);
            prop_assert!((a - b).abs() < 1e-10 * scale);
        }
    }
}
