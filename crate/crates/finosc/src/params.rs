//! Representation label and squeeze-coherent parameter set.

use crate::scalar::{cx_polar, Cx, Real, C64};
use serde::{Deserialize, Serialize};

/// Representation label N; the mode basis is `|N,0> .. |N,N>`, size N+1.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Dimension(pub usize);

impl Dimension {
    pub fn n(self) -> usize {
        self.0
    }
    /// Basis size N+1.
    pub fn size(self) -> usize {
        self.0 + 1
    }
    /// Default relative tolerance for identity checks at this N.
    pub fn default_tol(self) -> f64 {
        if self.0 <= 20 {
            1e-10
        } else {
            1e-7
        }
    }
}

/// Polar parameters (rho, delta, r, gamma) of the squeeze-coherent operator;
/// eta = rho e^{i delta} drives the displacement factor and xi = r e^{i gamma}
/// the squeeze factor.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SqueezeCoherentParams {
    pub rho: f64,
    pub delta: f64,
    pub r: f64,
    pub gamma: f64,
}

impl SqueezeCoherentParams {
    pub fn new(rho: f64, delta: f64, r: f64, gamma: f64) -> Self {
        assert!(rho >= 0.0 && rho.is_finite(), "rho must be finite and >= 0");
        assert!(r >= 0.0 && r.is_finite(), "r must be finite and >= 0");
        assert!(delta.is_finite() && gamma.is_finite());
        SqueezeCoherentParams {
            rho,
            delta,
            r,
            gamma,
        }
    }

    pub fn coherent(rho: f64, delta: f64) -> Self {
        Self::new(rho, delta, 0.0, 0.0)
    }

    pub fn vacuum() -> Self {
        Self::new(0.0, 0.0, 0.0, 0.0)
    }

    pub fn eta(&self) -> C64 {
        cx_polar(self.rho, self.delta)
    }

    pub fn xi(&self) -> C64 {
        cx_polar(self.r, self.gamma)
    }

    /// mu = log(1 + rho^2).
    pub fn mu(&self) -> f64 {
        (1.0 + self.rho * self.rho).ln()
    }

    /// p = rho^2/(1+rho^2), in [0,1).
    pub fn p(&self) -> f64 {
        let r2 = self.rho * self.rho;
        r2 / (1.0 + r2)
    }

    /// d = -4 r^2, the argument scale of the squeeze-side polynomials.
    pub fn d(&self) -> f64 {
        -4.0 * self.r * self.r
    }

    /// Parameter set with eta -> -eta and xi -> -xi, realized as phase shifts
    /// by pi so that rho, r stay non-negative. This is the replacement that
    /// turns the element table into (the reverse-ordered) inverse table.
    pub fn tilde(&self) -> Self {
        SqueezeCoherentParams {
            rho: self.rho,
            delta: self.delta + std::f64::consts::PI,
            r: self.r,
            gamma: self.gamma + std::f64::consts::PI,
        }
    }

    pub fn eta_in<S: Real>(&self) -> Cx<S> {
        cx_polar(S::from_f64(self.rho), S::from_f64(self.delta))
    }

    pub fn xi_in<S: Real>(&self) -> Cx<S> {
        cx_polar(S::from_f64(self.r), S::from_f64(self.gamma))
    }

    /// mu computed in the target scalar.
    pub fn mu_in<S: Real>(&self) -> S {
        (S::one() + S::from_f64(self.rho) * S::from_f64(self.rho)).ln()
    }
}

/// Working scalar for the dense oracle.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ScalarMode {
    Double,
    /// Double-double, ~31 significant digits.
    Extended,
}

impl ScalarMode {
    /// Reads FINOSC_PRECISION (double | extended); None when unset.
    pub fn from_env() -> Option<ScalarMode> {
        match std::env::var("FINOSC_PRECISION").ok()?.as_str() {
            "double" => Some(ScalarMode::Double),
            "extended" => Some(ScalarMode::Extended),
            other => panic!(
                "FINOSC_PRECISION must be double or extended, got {:?}",
                other
            ),
        }
    }

    /// Conjugating J3 by the non-unitary operator loses digits with N; plain
    /// doubles keep the band noise floor comfortably below 1e-10 only up to
    /// N = 12.
    pub fn auto(dim: Dimension) -> ScalarMode {
        if dim.n() <= 12 {
            ScalarMode::Double
        } else {
            ScalarMode::Extended
        }
    }
}

/// splitmix64 step; tiny deterministic generator for reproducible draws.
fn splitmix64(state: &mut u64) -> u64 {
    *state = state.wrapping_add(0x9e3779b97f4a7c15);
    let mut z = *state;
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d049bb133111eb);
    z ^ (z >> 31)
}

fn unit(state: &mut u64) -> f64 {
    (splitmix64(state) >> 11) as f64 / (1u64 << 53) as f64
}

/// Seeded generic parameter draws: rho in [0.1, 1.5], r in [0.05, 0.5],
/// phases in [0, 2pi).
pub fn draw_params(seed: u64, count: usize) -> Vec<SqueezeCoherentParams> {
    let mut state = seed;
    (0..count)
        .map(|_| {
            let rho = 0.1 + 1.4 * unit(&mut state);
            let delta = std::f64::consts::TAU * unit(&mut state);
            let r = 0.05 + 0.45 * unit(&mut state);
            let gamma = std::f64::consts::TAU * unit(&mut state);
            SqueezeCoherentParams::new(rho, delta, r, gamma)
        })
        .collect()
}
