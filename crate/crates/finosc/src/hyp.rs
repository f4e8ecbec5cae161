//! Terminating generalized hypergeometric sums and log-scaled prefactor
//! helpers shared by the closed-form matrix elements.

use crate::scalar::C64;
use crate::Error;
use num_complex::Complex;

/// A pFq series pinned to a finite number of terms: at least one upper
/// parameter is a non-positive integer, and no lower parameter may produce a
/// zero Pochhammer factor before the truncation index.
#[derive(Debug, Clone, PartialEq)]
pub struct HypSeriesSpec {
    pub upper: Vec<f64>,
    pub lower: Vec<f64>,
    pub argument: C64,
    pub termination_index: usize,
}

impl HypSeriesSpec {
    pub fn new(upper: Vec<f64>, lower: Vec<f64>, argument: C64, termination_index: usize) -> Self {
        HypSeriesSpec {
            upper,
            lower,
            argument,
            termination_index,
        }
    }
}

/// Sum_{j=0..T} [prod (upper)_j / prod (lower)_j] arg^j / j!, accumulated in
/// ascending j with a multiplicative term update. Terms that become exactly
/// zero (a numerator Pochhammer ran out) end the sum early, so lower-parameter
/// poles past the true termination are never touched.
pub fn hyp_terminating(spec: &HypSeriesSpec) -> Result<C64, Error> {
    let mut term = C64::new(1.0, 0.0);
    let mut acc = term;
    for j in 0..spec.termination_index {
        let mut factor = spec.argument / (j as f64 + 1.0);
        for &u in &spec.upper {
            factor *= u + j as f64;
        }
        for &l in &spec.lower {
            let f = l + j as f64;
            if f == 0.0 {
                return Err(Error::PoleBeforeTruncation {
                    parameter: l,
                    index: j + 1,
                });
            }
            factor /= f;
        }
        term *= factor;
        if term == Complex::new(0.0, 0.0) {
            break;
        }
        acc += term;
    }
    Ok(acc)
}

/// Real-argument wrapper around [`hyp_terminating`].
pub fn hyp_terminating_real(
    upper: &[f64],
    lower: &[f64],
    argument: f64,
    termination_index: usize,
) -> Result<f64, Error> {
    hyp_terminating(&HypSeriesSpec::new(
        upper.to_vec(),
        lower.to_vec(),
        C64::new(argument, 0.0),
        termination_index,
    ))
    .map(|z| z.re)
}

/// Rising factorial (a)_j = a (a+1) ... (a+j-1), with (a)_0 = 1.
pub fn pochhammer(a: f64, j: usize) -> f64 {
    let mut acc = 1.0;
    for i in 0..j {
        acc *= a + i as f64;
    }
    acc
}

pub fn factorial(n: usize) -> f64 {
    let mut acc = 1.0;
    for i in 2..=n {
        acc *= i as f64;
    }
    acc
}

pub fn binomial(n: usize, k: usize) -> f64 {
    if k > n {
        return 0.0;
    }
    // Multiplicative form keeps intermediates at the scale of the result.
    let k = k.min(n - k);
    let mut acc = 1.0;
    for i in 0..k {
        acc = acc * (n - i) as f64 / (i + 1) as f64;
    }
    acc
}

pub fn ln_factorial(n: usize) -> f64 {
    let mut acc = 0.0;
    for i in 2..=n {
        acc += (i as f64).ln();
    }
    acc
}

pub fn ln_binomial(n: usize, k: usize) -> f64 {
    ln_factorial(n) - ln_factorial(k) - ln_factorial(n - k)
}

/// Magnitude carried in log space with an explicit sign, for factorial-scale
/// prefactors that would otherwise flirt with overflow.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LogScaled {
    pub ln_mag: f64,
    pub sign: f64,
}

impl LogScaled {
    pub fn one() -> Self {
        LogScaled {
            ln_mag: 0.0,
            sign: 1.0,
        }
    }

    pub fn zero() -> Self {
        LogScaled {
            ln_mag: f64::NEG_INFINITY,
            sign: 0.0,
        }
    }

    pub fn from_value(x: f64) -> Self {
        if x == 0.0 {
            Self::zero()
        } else {
            LogScaled {
                ln_mag: x.abs().ln(),
                sign: x.signum(),
            }
        }
    }

    /// base^exp for base >= 0; 0^0 = 1.
    pub fn from_pow(base: f64, exp: f64) -> Self {
        assert!(base >= 0.0);
        if base == 0.0 {
            if exp == 0.0 {
                Self::one()
            } else {
                Self::zero()
            }
        } else {
            LogScaled {
                ln_mag: exp * base.ln(),
                sign: 1.0,
            }
        }
    }

    pub fn from_ln(ln_mag: f64) -> Self {
        LogScaled { ln_mag, sign: 1.0 }
    }

    pub fn neg_pow(self, parity: usize) -> Self {
        if parity % 2 == 1 {
            LogScaled {
                ln_mag: self.ln_mag,
                sign: -self.sign,
            }
        } else {
            self
        }
    }

    pub fn mul(self, rhs: Self) -> Self {
        LogScaled {
            ln_mag: self.ln_mag + rhs.ln_mag,
            sign: self.sign * rhs.sign,
        }
    }

    pub fn div(self, rhs: Self) -> Self {
        LogScaled {
            ln_mag: self.ln_mag - rhs.ln_mag,
            sign: self.sign * rhs.sign,
        }
    }

    pub fn value(self) -> f64 {
        self.sign * self.ln_mag.exp()
    }

    /// value() * e^{i phase}.
    pub fn phased(self, phase: f64) -> C64 {
        let m = self.value();
        C64::new(m * phase.cos(), m * phase.sin())
    }
}
