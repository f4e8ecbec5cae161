//! Real scalar abstraction: every numerical kernel is generic over [`Real`]
//! so the same code runs in double precision (`f64`, the default) and in
//! double-double extended precision ([`Dd`], ~31 significant digits) for
//! cross-checks at large basis sizes.

use num_complex::Complex;
use num_traits::{Num, One, Zero};
use twofloat::TwoFloat;

/// Real number type usable as the scalar of all dense linear algebra here.
pub trait Real:
    Num + Copy + PartialOrd + std::fmt::Debug + std::ops::Neg<Output = Self> + 'static
{
    fn from_f64(x: f64) -> Self;
    fn to_f64(self) -> f64;
    fn sqrt(self) -> Self;
    fn exp(self) -> Self;
    fn ln(self) -> Self;
    fn sin(self) -> Self;
    fn cos(self) -> Self;
    fn abs(self) -> Self;

    fn from_usize(n: usize) -> Self {
        Self::from_f64(n as f64)
    }
}

impl Real for f64 {
    fn from_f64(x: f64) -> Self {
        x
    }
    fn to_f64(self) -> f64 {
        self
    }
    fn sqrt(self) -> Self {
        f64::sqrt(self)
    }
    fn exp(self) -> Self {
        f64::exp(self)
    }
    fn ln(self) -> Self {
        f64::ln(self)
    }
    fn sin(self) -> Self {
        f64::sin(self)
    }
    fn cos(self) -> Self {
        f64::cos(self)
    }
    fn abs(self) -> Self {
        f64::abs(self)
    }
}

/// Double-double scalar (~31 significant digits).
///
/// Thin wrapper over [`TwoFloat`]: the wrapped crate's add/sub/mul core is
/// sound, but its division misses an fma correction and its shipped
/// elementary functions lose digits on parts of their domain, so division,
/// exp, ln, sin and cos are rebuilt here from the exact core operations.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct Dd(pub TwoFloat);

fn dd_recip(b: TwoFloat) -> TwoFloat {
    let t0 = TwoFloat::from(b.hi().recip());
    // Two Newton steps; mul/add are double-double exact, so this converges
    // to ~1e-32 relative from the f64 seed.
    let t1 = t0 * (TwoFloat::from(2.0) - b * t0);
    t1 * (TwoFloat::from(2.0) - b * t1)
}

impl std::ops::Add for Dd {
    type Output = Dd;
    fn add(self, rhs: Dd) -> Dd {
        Dd(self.0 + rhs.0)
    }
}
impl std::ops::Sub for Dd {
    type Output = Dd;
    fn sub(self, rhs: Dd) -> Dd {
        Dd(self.0 - rhs.0)
    }
}
impl std::ops::Mul for Dd {
    type Output = Dd;
    fn mul(self, rhs: Dd) -> Dd {
        Dd(self.0 * rhs.0)
    }
}
impl std::ops::Div for Dd {
    type Output = Dd;
    #[allow(clippy::suspicious_arithmetic_impl)]
    fn div(self, rhs: Dd) -> Dd {
        Dd(self.0 * dd_recip(rhs.0))
    }
}
impl std::ops::Rem for Dd {
    type Output = Dd;
    fn rem(self, rhs: Dd) -> Dd {
        let q = (self / rhs).0.trunc();
        Dd(self.0 - q * rhs.0)
    }
}
impl std::ops::Neg for Dd {
    type Output = Dd;
    fn neg(self) -> Dd {
        Dd(-self.0)
    }
}

impl Zero for Dd {
    fn zero() -> Self {
        Dd(TwoFloat::from(0.0))
    }
    fn is_zero(&self) -> bool {
        self.0 == 0.0
    }
}

impl One for Dd {
    fn one() -> Self {
        Dd(TwoFloat::from(1.0))
    }
}

impl Num for Dd {
    type FromStrRadixErr = <f64 as Num>::FromStrRadixErr;
    fn from_str_radix(s: &str, radix: u32) -> Result<Self, Self::FromStrRadixErr> {
        <f64 as Num>::from_str_radix(s, radix).map(|x| Dd(TwoFloat::from(x)))
    }
}

fn dd_exp(x: TwoFloat) -> TwoFloat {
    let k = (x.hi() / std::f64::consts::LN_2).round();
    let r = x - twofloat::consts::LN_2 * TwoFloat::from(k);
    // |r| <= ln2/2; the series reaches ~1e-33 well before 30 terms.
    let mut term = TwoFloat::from(1.0);
    let mut acc = TwoFloat::from(1.0);
    for j in 1..30 {
        term = (term * r) * dd_recip(TwoFloat::from(j as f64));
        acc += term;
    }
    // 2^k is exact in a single f64 for |k| < 1023.
    acc * TwoFloat::from(2f64.powi(k as i32))
}

fn dd_ln(a: TwoFloat) -> TwoFloat {
    assert!(a.hi() > 0.0, "ln of non-positive value");
    let mut y = TwoFloat::from(a.hi().ln());
    for _ in 0..2 {
        y = y + a * dd_exp(-y) - TwoFloat::from(1.0);
    }
    y
}

/// Argument reduced to [-pi, pi]; adequate for the O(1) phases used here.
fn dd_reduce(x: TwoFloat) -> TwoFloat {
    let tau = twofloat::consts::PI * TwoFloat::from(2.0);
    let k = (x.hi() / (2.0 * std::f64::consts::PI)).round();
    x - tau * TwoFloat::from(k)
}

fn dd_sin(x: TwoFloat) -> TwoFloat {
    let r = dd_reduce(x);
    let r2 = r * r;
    let mut term = r;
    let mut acc = r;
    for j in 1..32 {
        term = -(term * r2) * dd_recip(TwoFloat::from((2 * j * (2 * j + 1)) as f64));
        acc += term;
    }
    acc
}

fn dd_cos(x: TwoFloat) -> TwoFloat {
    let r = dd_reduce(x);
    let r2 = r * r;
    let mut term = TwoFloat::from(1.0);
    let mut acc = term;
    for j in 1..32 {
        term = -(term * r2) * dd_recip(TwoFloat::from((2 * j * (2 * j - 1)) as f64));
        acc += term;
    }
    acc
}

impl Real for Dd {
    fn from_f64(x: f64) -> Self {
        Dd(TwoFloat::from(x))
    }
    fn to_f64(self) -> f64 {
        self.0.hi()
    }
    fn sqrt(self) -> Self {
        Dd(TwoFloat::sqrt(self.0))
    }
    fn exp(self) -> Self {
        Dd(dd_exp(self.0))
    }
    fn ln(self) -> Self {
        Dd(dd_ln(self.0))
    }
    fn sin(self) -> Self {
        Dd(dd_sin(self.0))
    }
    fn cos(self) -> Self {
        Dd(dd_cos(self.0))
    }
    fn abs(self) -> Self {
        Dd(TwoFloat::abs(&self.0))
    }
}

/// Complex number over a [`Real`] scalar.
pub type Cx<S> = Complex<S>;

/// Complex double, the default working scalar.
pub type C64 = Complex<f64>;

/// Modulus |z| computed through the scalar's own sqrt.
pub fn cx_abs<S: Real>(z: Cx<S>) -> S {
    (z.re * z.re + z.im * z.im).sqrt()
}

/// exp(z) for complex z over any Real scalar.
pub fn cx_exp<S: Real>(z: Cx<S>) -> Cx<S> {
    let m = z.re.exp();
    Cx::new(m * z.im.cos(), m * z.im.sin())
}

/// Polar form m*e^{i*phase} over any Real scalar.
pub fn cx_polar<S: Real>(modulus: S, phase: S) -> Cx<S> {
    Cx::new(modulus * phase.cos(), modulus * phase.sin())
}

/// Downcast a complex value to complex double.
pub fn cx_to_c64<S: Real>(z: Cx<S>) -> C64 {
    Complex::new(z.re.to_f64(), z.im.to_f64())
}
