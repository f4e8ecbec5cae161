//! Numerical toolkit for the finite u(2) oscillator: squeezed-coherent
//! matrix elements computed two independent ways (dense operator-exponential
//! oracle vs. closed forms built from Krawtchouk and 3-orthogonal vector
//! polynomials), the associated 3x3 matrix multi-orthogonal polynomial layer,
//! and the spin-squeezing observables.

// Index-style loops mirror the two-dimensional summation conventions used
// throughout, and the inherent mul/div names on the small math types are
// deliberate.
#![allow(
    clippy::needless_range_loop,
    clippy::manual_is_multiple_of,
    clippy::should_implement_trait
)]

pub mod elements;
pub mod exact;
pub mod hyp;
pub mod krawtchouk;
pub mod mat;

pub mod multiortho;
pub mod params;
pub mod scalar;
pub mod squeezing;

pub mod su2;
pub mod vecpoly;
pub mod verify;

pub use mat::CMat;
pub use params::{draw_params, Dimension, SqueezeCoherentParams};
pub use scalar::{Cx, Real, C64};

/// Error type shared by the fallible numerical operations.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// Matrix is neither strictly triangular (nilpotent) nor diagonal.
    NotExponentiable,
    /// A lower Pochhammer factor hit zero before the series truncated.
    PoleBeforeTruncation { parameter: f64, index: usize },
    /// Polynomial degree exceeds the representation label.
    DegreeOutOfRange { degree: usize, n: usize },
    /// A recurrence pivot vanished.
    SingularPivot(String),
    /// Left side of a squeezing ratio has no defined direction.
    UndefinedDirection,
    /// Band support leaked outside the expected window.
    BandLeak { expected: (i64, i64), mass: f64 },
}

impl std::fmt::Display for Error {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Error::NotExponentiable => {
                write!(f, "matrix is neither strictly triangular nor diagonal")
            }
            Error::PoleBeforeTruncation { parameter, index } => write!(
                f,
                "lower parameter {} produces a zero Pochhammer factor at term {}",
                parameter, index
            ),
            Error::DegreeOutOfRange { degree, n } => {
                write!(f, "degree {} exceeds representation label N={}", degree, n)
            }
            Error::SingularPivot(what) => write!(f, "singular pivot: {}", what),
            Error::UndefinedDirection => {
                write!(f, "undefined direction: squeezing denominator vanishes")
            }
            Error::BandLeak { expected, mass } => write!(
                f,
                "band support leaks outside [{}, {}]: relative mass {}",
                expected.0, expected.1, mass
            ),
        }
    }
}

impl std::error::Error for Error {}
