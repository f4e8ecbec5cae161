//! Exact big-rational evaluation of the square-root-free identities: the
//! binomial orthogonality of the Krawtchouk polynomials and the alternating
//! biorthogonality of the squeeze-side vector polynomials hold without any
//! radical for rational p and d, so they can be checked with `==` instead of
//! a tolerance. This is the ground-truth oracle that calibrates the
//! floating-point tolerances.

use crate::params::Dimension;
use crate::vecpoly::BiorthPairing;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

pub type Rat = BigRational;

pub fn rat(num: i64, den: i64) -> Rat {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

fn rat_int(n: i64) -> Rat {
    BigRational::from_integer(BigInt::from(n))
}

/// Rising factorial over the rationals.
pub fn pochhammer_rat(a: &Rat, j: usize) -> Rat {
    let mut acc = Rat::one();
    for i in 0..j {
        acc *= a + rat_int(i as i64);
    }
    acc
}

pub fn factorial_rat(n: usize) -> Rat {
    let mut acc = BigInt::one();
    for i in 2..=n {
        acc *= BigInt::from(i);
    }
    BigRational::from_integer(acc)
}

pub fn binomial_rat(n: usize, k: usize) -> Rat {
    if k > n {
        return Rat::zero();
    }
    let mut acc = BigInt::one();
    for i in 0..k.min(n - k) {
        acc = acc * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    BigRational::from_integer(acc)
}

/// Terminating hypergeometric sum over the rationals; panics on a lower-
/// parameter pole before truncation (the callers' domains exclude it).
pub fn hyp_rat(upper: &[Rat], lower: &[Rat], argument: &Rat, termination: usize) -> Rat {
    let mut term = Rat::one();
    let mut acc = Rat::one();
    for j in 0..termination {
        let mut factor = argument / rat_int(j as i64 + 1);
        for u in upper {
            factor *= u + rat_int(j as i64);
        }
        for l in lower {
            let f = l + rat_int(j as i64);
            assert!(
                !f.is_zero(),
                "rational lower-parameter pole before truncation"
            );
            factor /= f;
        }
        term *= factor;
        if term.is_zero() {
            break;
        }
        acc += &term;
    }
    acc
}

/// Krawtchouk polynomial over the rationals, integer argument.
pub fn krawtchouk_rat(m: usize, k: i64, p: &Rat, dim: Dimension) -> Rat {
    assert!(m <= dim.n());
    hyp_rat(
        &[rat_int(-(m as i64)), rat_int(-k)],
        &[rat_int(-(dim.n() as i64))],
        &p.recip(),
        m,
    )
}

/// Exact binomial orthogonality: returns both sides; they must be equal.
pub fn krawtchouk_orthogonality_rat(
    deg_n: usize,
    deg_m: usize,
    p: &Rat,
    dim: Dimension,
) -> (Rat, Rat) {
    let n = dim.n();
    let one_minus = Rat::one() - p;
    let mut lhs = Rat::zero();
    for x in 0..=n {
        let weight = binomial_rat(n, x) * p.pow(x as i32) * one_minus.pow((n - x) as i32);
        lhs += weight
            * krawtchouk_rat(deg_m, x as i64, p, dim)
            * krawtchouk_rat(deg_n, x as i64, p, dim);
    }
    let rhs = if deg_n == deg_m {
        let sign = if deg_n % 2 == 0 {
            Rat::one()
        } else {
            -Rat::one()
        };
        sign * factorial_rat(deg_n) / pochhammer_rat(&rat_int(-(n as i64)), deg_n)
            * (one_minus / p).pow(deg_n as i32)
    } else {
        Rat::zero()
    };
    (lhs, rhs)
}

/// Squeeze-side vector polynomial over the rationals. The half-integer
/// lower parameters are exact rationals, so every term is rational.
pub fn vector_poly_a_rat(a: usize, b: i64, c: usize, d: &Rat, dim: Dimension) -> Rat {
    let n = dim.n() as i64;
    let cc = c as i64;
    assert!(2 * a as i64 + cc <= n);
    hyp_rat(
        &[rat_int(-(a as i64)), rat_int(-b)],
        &[
            rat(2 * cc + 1, 2),
            BigRational::new(BigInt::from(cc - n), BigInt::from(2)),
            BigRational::new(BigInt::from(cc - n + 1), BigInt::from(2)),
        ],
        &d.recip(),
        a,
    )
}

/// Exact alternating-binomial biorthogonality of the vector polynomials.
pub fn vector_poly_a_biorthogonality_rat(
    a: usize,
    a_prime: usize,
    pairing: BiorthPairing,
    d: &Rat,
    dim: Dimension,
) -> (Rat, Rat) {
    let n = dim.n();
    let (u, c_left, c_right, weight) = match pairing {
        BiorthPairing::Even { c } => {
            assert!(n % 2 == 0 && n >= 2 * c);
            let u = n / 2 - c;
            let w = pochhammer_rat(&rat(2 * c as i64 + 1, 2), u).pow(2);
            (u, c, c, w)
        }
        BiorthPairing::OddInterlaced => {
            assert!(n % 2 == 1);
            let u = (n - 1) / 2;
            let w = pochhammer_rat(&rat(1, 2), u) * pochhammer_rat(&rat(3, 2), u);
            (u, 1, 0, w)
        }
    };
    assert!(a <= u && a_prime <= u);
    let mut lhs = Rat::zero();
    for b in 0..=u {
        let sign = if b % 2 == 0 { Rat::one() } else { -Rat::one() };
        lhs += sign
            * binomial_rat(u, b)
            * vector_poly_a_rat(a, b as i64, c_left, d, dim)
            * vector_poly_a_rat(u - a_prime, (u - b) as i64, c_right, d, dim);
    }
    let rhs = if a == a_prime {
        factorial_rat(a) / (pochhammer_rat(&rat_int(-(u as i64)), a) * weight)
            * d.recip().pow(u as i32)
    } else {
        Rat::zero()
    };
    (lhs, rhs)
}

/// Exact check over the full degree tables; true iff every pair matches
/// exactly.
pub fn krawtchouk_orthogonality_exact_all(p: &Rat, dim: Dimension) -> bool {
    for n in 0..=dim.n() {
        for m in 0..=dim.n() {
            let (lhs, rhs) = krawtchouk_orthogonality_rat(n, m, p, dim);
            if lhs != rhs {
                return false;
            }
        }
    }
    true
}

pub fn vector_poly_biorthogonality_exact_all(
    pairing: BiorthPairing,
    d: &Rat,
    dim: Dimension,
) -> bool {
    let u = match pairing {
        BiorthPairing::Even { c } => dim.n() / 2 - c,
        BiorthPairing::OddInterlaced => (dim.n() - 1) / 2,
    };
    for a in 0..=u {
        for ap in 0..=u {
            let (lhs, rhs) = vector_poly_a_biorthogonality_rat(a, ap, pairing, d, dim);
            if lhs != rhs {
                return false;
            }
        }
    }
    true
}

/// Gap between exact rational evaluation and the double-precision route,
/// used to calibrate floating-point tolerances empirically.
pub fn krawtchouk_float_gap(p_num: i64, p_den: i64, dim: Dimension) -> f64 {
    let p = rat(p_num, p_den);
    let pf = p_num as f64 / p_den as f64;
    let kp = crate::krawtchouk::KrawtchoukParams::new(pf, dim);
    let mut worst = 0.0f64;
    for m in 0..=dim.n() {
        for k in 0..=dim.n() {
            let exact = krawtchouk_rat(m, k as i64, &p, dim);
            let approx = crate::krawtchouk::krawtchouk(m, k as f64, &kp).unwrap();
            let exact_f = rat_to_f64(&exact);
            let scale = exact_f.abs().max(1.0);
            worst = worst.max((exact_f - approx).abs() / scale);
        }
    }
    worst
}

pub fn rat_to_f64(x: &Rat) -> f64 {
    // Scale into i128 range by truncating the fraction at 2^-80.
    let scaled = x * BigRational::from_integer(BigInt::from(1i128 << 80));
    let int = scaled.to_integer();
    let (sign, digits) = int.to_u64_digits();
    let mut value = 0.0f64;
    for d in digits.iter().rev() {
        value = value * 1.8446744073709552e19 + *d as f64;
    }
    let signed = if sign == num_bigint::Sign::Minus {
        -value
    } else {
        value
    };
    signed / 2f64.powi(80)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rational_helpers() {
        assert_eq!(pochhammer_rat(&rat(1, 2), 2), rat(3, 4));
        assert_eq!(factorial_rat(5), rat_int(120));
        assert_eq!(binomial_rat(10, 3), rat_int(120));
        assert!((rat_to_f64(&rat(-7, 16)) + 0.4375).abs() < 1e-15);
    }

    #[test]
    fn krawtchouk_orthogonality_is_exact() {
        // Rational p: equality holds bit for bit, no tolerance anywhere.
        for (num, den, n) in [(1i64, 2i64, 6usize), (3, 10, 8), (2, 7, 10)] {
            assert!(krawtchouk_orthogonality_exact_all(
                &rat(num, den),
                Dimension(n)
            ));
        }
    }

    #[test]
    fn vector_biorthogonality_is_exact() {
        // Even N, both sectors, rational d.
        for c in [0usize, 1] {
            assert!(vector_poly_biorthogonality_exact_all(
                BiorthPairing::Even { c },
                &rat(-9, 25),
                Dimension(10),
            ));
        }
        // Odd N interlaced.
        assert!(vector_poly_biorthogonality_exact_all(
            BiorthPairing::OddInterlaced,
            &rat(-9, 25),
            Dimension(9),
        ));
    }

    #[test]
    fn exact_vs_float_gap_is_tiny() {
        // Calibration: the float Krawtchouk route sits within 1e-12 of the
        // exact rational values on the N = 12 grid.
        assert!(krawtchouk_float_gap(3, 10, Dimension(12)) < 1e-12);
    }

    #[test]
    fn off_diagonal_sums_vanish_exactly() {
        let p = rat(1, 3);
        let (lhs, rhs) = krawtchouk_orthogonality_rat(2, 5, &p, Dimension(9));
        assert!(lhs.is_zero() && rhs.is_zero());
        let d = rat(-4, 9);
        let (lhs, rhs) =
            vector_poly_a_biorthogonality_rat(0, 2, BiorthPairing::Even { c: 0 }, &d, Dimension(8));
        assert!(lhs.is_zero() && rhs.is_zero());
        // Diagonal spot value at N = 2, u = 1, c = 0: rhs = 4/d.
        let (lhs, rhs) =
            vector_poly_a_biorthogonality_rat(0, 0, BiorthPairing::Even { c: 0 }, &d, Dimension(2));
        assert_eq!(rhs, rat_int(4) / &d);
        assert_eq!(lhs, rhs);
    }
}
