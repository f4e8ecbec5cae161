//! Exact finite-dimensional su(2) representation and exact operator
//! exponentials. These dense products are the brute-force oracle that every
//! closed-form expression in the crate is checked against.
//!
//! Conventions: entry `[row][col] = <row|Op|col>`, operators act on column
//! vectors of mode amplitudes, and all exponentials are exact terminating
//! sums (the arguments are nilpotent or diagonal), accumulated in a fixed
//! index order.

use crate::mat::CMat;
use crate::params::{Dimension, SqueezeCoherentParams};
use crate::scalar::{cx_exp, Cx, Real};
use crate::Error;

/// Ladder, diagonal and number operators of the (N+1)-dimensional
/// irreducible representation.
#[derive(Debug, Clone)]
pub struct GeneratorSet<S: Real> {
    pub dim: Dimension,
    pub jp: CMat<S>,
    pub jm: CMat<S>,
    pub j3: CMat<S>,
    pub nhat: CMat<S>,
}

/// J+|N,n> = sqrt((n+1)(N-n)) |N,n+1>, J- its transpose, J3 = diag(n - N/2).
pub fn build_generators<S: Real>(dim: Dimension) -> GeneratorSet<S> {
    let n = dim.n();
    let size = dim.size();
    let mut jp = CMat::zeros(size);
    for m in 0..n {
        let amp = (S::from_usize(m + 1) * S::from_usize(n - m)).sqrt();
        jp[(m + 1, m)] = Cx::new(amp, S::zero());
    }
    let jm = jp.transpose();
    let half_n = S::from_usize(n) / (S::one() + S::one());
    let mut j3 = CMat::zeros(size);
    let mut nhat = CMat::zeros(size);
    for m in 0..size {
        j3[(m, m)] = Cx::new(S::from_usize(m) - half_n, S::zero());
        nhat[(m, m)] = Cx::new(S::from_usize(m), S::zero());
    }
    GeneratorSet {
        dim,
        jp,
        jm,
        j3,
        nhat,
    }
}

impl<S: Real> GeneratorSet<S> {
    /// Position operator J1 = (J+ + J-)/2.
    pub fn j1(&self) -> CMat<S> {
        let half = Cx::new(S::one() / (S::one() + S::one()), S::zero());
        self.jp.add(&self.jm).scale(half)
    }

    /// J2 = (J+ - J-)/(2i); the momentum operator is -J2.
    pub fn j2(&self) -> CMat<S> {
        let minus_half_i = Cx::new(S::zero(), -(S::one() / (S::one() + S::one())));
        self.jp.sub(&self.jm).scale(minus_half_i)
    }

    /// Hamiltonian H = J3 + (N+1)/2.
    pub fn hamiltonian(&self) -> CMat<S> {
        let size = self.dim.size();
        let shift = S::from_usize(self.dim.n() + 1) / (S::one() + S::one());
        let mut h = self.j3.clone();
        for i in 0..size {
            h[(i, i)] = h[(i, i)] + Cx::new(shift, S::zero());
        }
        h
    }
}

/// exp(coeff * M) as an exact finite sum. M must be strictly triangular
/// (hence nilpotent; any polynomial in J+ alone or J- alone qualifies) or
/// diagonal.
pub fn exp_poly_in_shift<S: Real>(m: &CMat<S>, coeff: Cx<S>) -> Result<CMat<S>, Error> {
    let size = m.dim();
    if m.is_diagonal() {
        let mut out = CMat::zeros(size);
        for i in 0..size {
            out[(i, i)] = cx_exp(coeff * m[(i, i)]);
        }
        return Ok(out);
    }
    if !(m.is_strictly_lower() || m.is_strictly_upper()) {
        return Err(Error::NotExponentiable);
    }
    let scaled = m.scale(coeff);
    let mut acc = CMat::identity(size);
    let mut term = CMat::identity(size);
    // M^size = 0 structurally, so `size-1` products exhaust the series.
    for alpha in 1..size {
        let inv_alpha = Cx::new(S::one() / S::from_usize(alpha), S::zero());
        term = term.mul(&scaled).scale(inv_alpha);
        if term.max_abs().is_zero() {
            break;
        }
        acc = acc.add(&term);
    }
    Ok(acc)
}

/// Displacement factor D = e^{eta J+} e^{mu J3} e^{-conj(eta) J-}.
pub fn build_d<S: Real>(params: &SqueezeCoherentParams, dim: Dimension) -> CMat<S> {
    let g = build_generators::<S>(dim);
    let eta: Cx<S> = params.eta_in();
    let mu = Cx::new(params.mu_in::<S>(), S::zero());
    let a = exp_poly_in_shift(&g.jp, eta).expect("J+ is strictly lower triangular");
    let b = exp_poly_in_shift(&g.j3, mu).expect("J3 is diagonal");
    let c = exp_poly_in_shift(&g.jm, -eta.conj()).expect("J- is strictly upper triangular");
    a.mul(&b).mul(&c)
}

/// Squeeze factor S = e^{xi J+^2/2} e^{-conj(xi) J-^2/2}; not unitary.
pub fn build_s<S: Real>(params: &SqueezeCoherentParams, dim: Dimension) -> CMat<S> {
    let g = build_generators::<S>(dim);
    let xi: Cx<S> = params.xi_in();
    let two = S::one() + S::one();
    let half = Cx::new(S::one() / two, S::zero());
    let jp2 = g.jp.mul(&g.jp);
    let jm2 = g.jm.mul(&g.jm);
    let a = exp_poly_in_shift(&jp2, xi * half).expect("J+^2 is strictly lower triangular");
    let b = exp_poly_in_shift(&jm2, -xi.conj() * half).expect("J-^2 is strictly upper triangular");
    a.mul(&b)
}

/// Full squeeze-coherent operator R = D * S.
pub fn build_r<S: Real>(params: &SqueezeCoherentParams, dim: Dimension) -> CMat<S> {
    build_d::<S>(params, dim).mul(&build_s::<S>(params, dim))
}

/// R^{-1} = e^{conj(xi)/2 J-^2} e^{-xi/2 J+^2} e^{conj(eta) J-} e^{-mu J3} e^{-eta J+}.
pub fn build_r_inverse<S: Real>(params: &SqueezeCoherentParams, dim: Dimension) -> CMat<S> {
    let g = build_generators::<S>(dim);
    let eta: Cx<S> = params.eta_in();
    let xi: Cx<S> = params.xi_in();
    let mu = Cx::new(params.mu_in::<S>(), S::zero());
    let two = S::one() + S::one();
    let half = Cx::new(S::one() / two, S::zero());
    let jp2 = g.jp.mul(&g.jp);
    let jm2 = g.jm.mul(&g.jm);
    let e1 = exp_poly_in_shift(&jm2, xi.conj() * half).expect("nilpotent");
    let e2 = exp_poly_in_shift(&jp2, -xi * half).expect("nilpotent");
    let e3 = exp_poly_in_shift(&g.jm, eta.conj()).expect("nilpotent");
    let e4 = exp_poly_in_shift(&g.j3, -mu).expect("diagonal");
    let e5 = exp_poly_in_shift(&g.jp, -eta).expect("nilpotent");
    e1.mul(&e2).mul(&e3).mul(&e4).mul(&e5)
}

/// R^{-1} A R.
pub fn conjugate_forward<S: Real>(
    a: &CMat<S>,
    params: &SqueezeCoherentParams,
    dim: Dimension,
) -> CMat<S> {
    build_r_inverse::<S>(params, dim)
        .mul(a)
        .mul(&build_r::<S>(params, dim))
}

/// R A R^{-1}.
pub fn conjugate_reverse<S: Real>(
    a: &CMat<S>,
    params: &SqueezeCoherentParams,
    dim: Dimension,
) -> CMat<S> {
    build_r::<S>(params, dim)
        .mul(a)
        .mul(&build_r_inverse::<S>(params, dim))
}

/// Relative difference of two matrices: max entry of (a-b) over the larger
/// of the two max entries. Exact zero when both vanish.
pub fn rel_diff<S: Real>(a: &CMat<S>, b: &CMat<S>) -> f64 {
    let diff = a.sub(b).max_abs().to_f64();
    let scale = a.max_abs().to_f64().max(b.max_abs().to_f64());
    if scale == 0.0 {
        diff
    } else {
        diff / scale
    }
}

/// One checked operator identity.
#[derive(Debug, Clone)]
pub struct IdentityCheck {
    pub name: String,
    pub residual: f64,
}

/// Dense verification of the ladder/exponential conjugation identities:
/// J3-shift through ladder powers, commutators [J+,J-^n] and [J-,J+^n], and
/// the three exponential-conjugation formulas for monomials P(x) = a x and
/// P(x) = a x^2.
pub fn verify_bch_suite(
    dim: Dimension,
    coeff_linear: Cx<f64>,
    coeff_quadratic: Cx<f64>,
) -> Vec<IdentityCheck> {
    let g = build_generators::<f64>(dim);
    let size = dim.size();
    let mut checks = Vec::new();
    let id = CMat::<f64>::identity(size);

    // J3 J±^n = J±^n (J3 ± n)
    for n in 1..=3usize.min(size) {
        let jpn = g.jp.powi(n);
        let lhs = g.j3.mul(&jpn);
        let rhs = jpn.mul(&g.j3.add(&id.scale(Cx::new(n as f64, 0.0))));
        checks.push(IdentityCheck {
            name: format!("j3_shift_plus_n{}", n),
            residual: rel_diff(&lhs, &rhs),
        });
        let jmn = g.jm.powi(n);
        let lhs = g.j3.mul(&jmn);
        let rhs = jmn.mul(&g.j3.sub(&id.scale(Cx::new(n as f64, 0.0))));
        checks.push(IdentityCheck {
            name: format!("j3_shift_minus_n{}", n),
            residual: rel_diff(&lhs, &rhs),
        });
    }

    // [J+, J-^n] = 2n J3 J-^{n-1} + n(n-1) J-^{n-1} and its mirror.
    for n in 1..=3usize.min(size) {
        let jmn = g.jm.powi(n);
        let jm_prev = g.jm.powi(n - 1);
        let lhs = g.jp.commutator(&jmn);
        let rhs =
            g.j3.mul(&jm_prev)
                .scale(Cx::new(2.0 * n as f64, 0.0))
                .add(&jm_prev.scale(Cx::new((n * (n - 1)) as f64, 0.0)));
        checks.push(IdentityCheck {
            name: format!("commutator_jp_jmn_n{}", n),
            residual: rel_diff(&lhs, &rhs),
        });
        let jpn = g.jp.powi(n);
        let jp_prev = g.jp.powi(n - 1);
        let lhs = g.jm.commutator(&jpn);
        let rhs = jp_prev
            .mul(&g.j3)
            .scale(Cx::new(-2.0 * n as f64, 0.0))
            .sub(&jp_prev.scale(Cx::new((n * (n - 1)) as f64, 0.0)));
        checks.push(IdentityCheck {
            name: format!("commutator_jm_jpn_n{}", n),
            residual: rel_diff(&lhs, &rhs),
        });
    }

    // Exponential conjugations for P(x) = a x^deg, deg = 1, 2.
    for (deg, a) in [(1usize, coeff_linear), (2usize, coeff_quadratic)] {
        for plus in [true, false] {
            let j = if plus { &g.jp } else { &g.jm };
            let pm = j.powi(deg); // P(J) up to the scalar a
            let p_prime = j.powi(deg - 1).scale(a * Cx::new(deg as f64, 0.0));
            let p_second = if deg >= 2 {
                j.powi(deg - 2)
                    .scale(a * Cx::new((deg * (deg - 1)) as f64, 0.0))
            } else {
                CMat::zeros(size)
            };
            let ep = exp_poly_in_shift(&pm, a).expect("nilpotent");
            let em = exp_poly_in_shift(&pm, -a).expect("nilpotent");
            let tag = if plus { "plus" } else { "minus" };

            // e^{P(J±)} J3 e^{-P(J±)} = J3 ∓ J± P'(J±)
            let lhs = ep.mul(&g.j3).mul(&em);
            let rhs = if plus {
                g.j3.sub(&g.jp.mul(&p_prime))
            } else {
                g.j3.add(&g.jm.mul(&p_prime))
            };
            checks.push(IdentityCheck {
                name: format!("conj_j3_{}_deg{}", tag, deg),
                residual: rel_diff(&lhs, &rhs),
            });

            if plus {
                // e^{P(J+)} J- e^{-P(J+)} = J- + 2 P'(J+) J3 + J+ [P''(J+) - P'(J+)^2]
                let lhs = ep.mul(&g.jm).mul(&em);
                let rhs =
                    g.jm.add(&p_prime.mul(&g.j3).scale(Cx::new(2.0, 0.0)))
                        .add(&g.jp.mul(&p_second.sub(&p_prime.mul(&p_prime))));
                checks.push(IdentityCheck {
                    name: format!("conj_jm_by_exp_jp_deg{}", deg),
                    residual: rel_diff(&lhs, &rhs),
                });
            } else {
                // e^{P(J-)} J+ e^{-P(J-)} = J+ - 2 J3 P'(J-) - J- [P''(J-) + P'(J-)^2]
                let lhs = ep.mul(&g.jp).mul(&em);
                let rhs =
                    g.jp.sub(&g.j3.mul(&p_prime).scale(Cx::new(2.0, 0.0)))
                        .sub(&g.jm.mul(&p_second.add(&p_prime.mul(&p_prime))));
                checks.push(IdentityCheck {
                    name: format!("conj_jp_by_exp_jm_deg{}", deg),
                    residual: rel_diff(&lhs, &rhs),
                });
            }
        }
    }
    checks
}

/// `[H,Q] = -iP` and `[H,P] = iQ` with Q = J1, P = -J2, H = J3 + (N+1)/2.
pub fn equations_of_motion_residual(dim: Dimension) -> f64 {
    let g = build_generators::<f64>(dim);
    let h = g.hamiltonian();
    let q = g.j1();
    let p = g.j2().scale(Cx::new(-1.0, 0.0));
    let i = Cx::new(0.0, 1.0);
    let r1 = rel_diff(&h.commutator(&q), &p.scale(-i));
    let r2 = rel_diff(&h.commutator(&p), &q.scale(i));
    r1.max(r2)
}
