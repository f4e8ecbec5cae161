//! Dense square complex matrices.
//!
//! Everything in this crate lives in the (N+1)-dimensional mode basis, so a
//! small hand-rolled square matrix with a fixed summation order is all that
//! is needed. Entry `[row][col]` is the amplitude `<row|Op|col>`; operators
//! act on column vectors of mode amplitudes.

use crate::scalar::{cx_abs, Cx, Real};
use num_traits::Zero;

/// Dense square complex matrix, row-major storage.
#[derive(Debug, Clone, PartialEq)]
pub struct CMat<S: Real> {
    dim: usize,
    data: Vec<Cx<S>>,
}

#[allow(clippy::should_implement_trait)]
impl<S: Real> CMat<S> {
    pub fn zeros(dim: usize) -> Self {
        CMat {
            dim,
            data: vec![Cx::zero(); dim * dim],
        }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            m[(i, i)] = Cx::new(S::one(), S::zero());
        }
        m
    }

    pub fn from_fn(dim: usize, mut f: impl FnMut(usize, usize) -> Cx<S>) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            for j in 0..dim {
                m[(i, j)] = f(i, j);
            }
        }
        m
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Fixed i-k-j loop order keeps results bit-identical between runs.
    pub fn mul(&self, rhs: &Self) -> Self {
        assert_eq!(self.dim, rhs.dim, "dimension mismatch");
        let n = self.dim;
        let mut out = Self::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let a = self[(i, k)];
                if a.re == S::zero() && a.im == S::zero() {
                    continue;
                }
                for j in 0..n {
                    out[(i, j)] = out[(i, j)] + a * rhs[(k, j)];
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[Cx<S>]) -> Vec<Cx<S>> {
        assert_eq!(self.dim, v.len());
        let n = self.dim;
        let mut out = vec![Cx::zero(); n];
        for i in 0..n {
            let mut acc = Cx::zero();
            for j in 0..n {
                acc = acc + self[(i, j)] * v[j];
            }
            out[i] = acc;
        }
        out
    }

    pub fn add(&self, rhs: &Self) -> Self {
        assert_eq!(self.dim, rhs.dim);
        let mut out = self.clone();
        for (a, b) in out.data.iter_mut().zip(rhs.data.iter()) {
            *a = *a + *b;
        }
        out
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        assert_eq!(self.dim, rhs.dim);
        let mut out = self.clone();
        for (a, b) in out.data.iter_mut().zip(rhs.data.iter()) {
            *a = *a - *b;
        }
        out
    }

    pub fn scale(&self, c: Cx<S>) -> Self {
        let mut out = self.clone();
        for a in out.data.iter_mut() {
            *a = *a * c;
        }
        out
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.dim, |i, j| self[(j, i)])
    }

    /// Conjugate transpose.
    pub fn dagger(&self) -> Self {
        Self::from_fn(self.dim, |i, j| self[(j, i)].conj())
    }

    pub fn commutator(&self, rhs: &Self) -> Self {
        self.mul(rhs).sub(&rhs.mul(self))
    }

    /// A^k by repeated multiplication.
    pub fn powi(&self, k: usize) -> Self {
        let mut out = Self::identity(self.dim);
        for _ in 0..k {
            out = out.mul(self);
        }
        out
    }

    /// Largest entry modulus.
    pub fn max_abs(&self) -> S {
        let mut m = S::zero();
        for z in &self.data {
            let a = cx_abs(*z);
            if a > m {
                m = a;
            }
        }
        m
    }

    /// Induced infinity norm (maximum absolute row sum).
    pub fn inf_norm(&self) -> S {
        let mut best = S::zero();
        for i in 0..self.dim {
            let mut row = S::zero();
            for j in 0..self.dim {
                row = row + cx_abs(self[(i, j)]);
            }
            if row > best {
                best = row;
            }
        }
        best
    }

    /// True if every entry strictly above the diagonal is exactly zero and
    /// the diagonal itself is exactly zero (strictly lower triangular).
    pub fn is_strictly_lower(&self) -> bool {
        for i in 0..self.dim {
            for j in i..self.dim {
                if !self[(i, j)].is_zero() {
                    return false;
                }
            }
        }
        true
    }

    pub fn is_strictly_upper(&self) -> bool {
        for i in 0..self.dim {
            for j in 0..=i {
                if !self[(i, j)].is_zero() {
                    return false;
                }
            }
        }
        true
    }

    pub fn is_diagonal(&self) -> bool {
        for i in 0..self.dim {
            for j in 0..self.dim {
                if i != j && !self[(i, j)].is_zero() {
                    return false;
                }
            }
        }
        true
    }

    pub fn column(&self, j: usize) -> Vec<Cx<S>> {
        (0..self.dim).map(|i| self[(i, j)]).collect()
    }

    /// Downcast every entry to complex double.
    pub fn to_c64(&self) -> CMat<f64> {
        CMat {
            dim: self.dim,
            data: self
                .data
                .iter()
                .map(|z| Cx::new(z.re.to_f64(), z.im.to_f64()))
                .collect(),
        }
    }
}

impl<S: Real> std::ops::Index<(usize, usize)> for CMat<S> {
    type Output = Cx<S>;
    fn index(&self, (i, j): (usize, usize)) -> &Cx<S> {
        debug_assert!(
            i < self.dim && j < self.dim,
            "index ({},{}) out of {}",
            i,
            j,
            self.dim
        );
        &self.data[i * self.dim + j]
    }
}

impl<S: Real> std::ops::IndexMut<(usize, usize)> for CMat<S> {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Cx<S> {
        debug_assert!(
            i < self.dim && j < self.dim,
            "index ({},{}) out of {}",
            i,
            j,
            self.dim
        );
        &mut self.data[i * self.dim + j]
    }
}

/// Debug text format: row-major, `re+imi` per entry, tab separated.
impl<S: Real> std::fmt::Display for CMat<S> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        for i in 0..self.dim {
            for j in 0..self.dim {
                let z = self[(i, j)];
                if j > 0 {
                    write!(f, "\t")?;
                }
                let (re, im) = (z.re.to_f64(), z.im.to_f64());
                if im < 0.0 {
                    write!(f, "{}-{}i", re, -im)?;
                } else {
                    write!(f, "{}+{}i", re, im)?;
                }
            }
            writeln!(f)?;
        }
        Ok(())
    }
}

/// Euclidean norm of a complex vector.
pub fn vec_norm<S: Real>(v: &[Cx<S>]) -> S {
    let mut acc = S::zero();
    for z in v {
        acc = acc + z.re * z.re + z.im * z.im;
    }
    acc.sqrt()
}

/// Max entry modulus of a complex vector.
pub fn vec_max_abs<S: Real>(v: &[Cx<S>]) -> S {
    let mut m = S::zero();
    for z in v {
        let a = cx_abs(*z);
        if a > m {
            m = a;
        }
    }
    m
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::C64;

    #[test]
    fn identity_is_multiplicative_unit() {
        let a = CMat::<f64>::from_fn(3, |i, j| C64::new((i + 2 * j) as f64, j as f64 - 1.0));
        let id = CMat::identity(3);
        assert_eq!(a.mul(&id), a);
        assert_eq!(id.mul(&a), a);
    }

    #[test]
    fn dagger_of_product_reverses() {
        let a = CMat::<f64>::from_fn(3, |i, j| C64::new(i as f64 + 0.5, j as f64 - 1.5));
        let b = CMat::<f64>::from_fn(3, |i, j| C64::new(0.3 * j as f64, 0.1 + i as f64));
        let lhs = a.mul(&b).dagger();
        let rhs = b.dagger().mul(&a.dagger());
        assert!(lhs.sub(&rhs).max_abs() < 1e-14);
    }

    #[test]
    fn display_format() {
        let mut a = CMat::<f64>::zeros(2);
        a[(0, 1)] = C64::new(1.5, -0.25);
        let s = a.to_string();
        assert!(s.contains("1.5-0.25i"));
        assert!(s.contains("0+0i"));
    }
}
