//! Observables in the squeezed-coherent states: the normalization kappa(r),
//! first and second moments of J1, J2, J3 via closed-form auxiliary sums
//! (cross-checked against dense-oracle expectation values), the Z^2
//! squeezing ratio, phase sweeps, the even/odd-N squeezing dichotomy and the
//! large-N contraction study.

use crate::hyp::hyp_terminating_real;
use crate::mat::CMat;
use crate::params::{Dimension, SqueezeCoherentParams};
use crate::scalar::C64;
use crate::su2;
use crate::Error;
use serde::Serialize;

/// Squared norm of the squeezed vacuum: the terminating sum
/// 3F0(1/2, -N/2, (1-N)/2; (2r)^2).
pub fn kappa(r: f64, dim: Dimension) -> f64 {
    let n = dim.n() as f64;
    hyp_terminating_real(
        &[0.5, -n / 2.0, (1.0 - n) / 2.0],
        &[],
        (2.0 * r) * (2.0 * r),
        dim.n() / 2,
    )
    .expect("no lower parameters")
}

/// The five kappa-normalized auxiliary sums entering the closed-form
/// moments. They depend on (N, r) only.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct AuxPolynomials {
    pub g: f64,
    pub h: f64,
    pub j: f64,
    pub l: f64,
    pub m: f64,
    pub kappa: f64,
}

pub fn aux_polynomials(dim: Dimension, r: f64) -> AuxPolynomials {
    let big_n = dim.n() as f64;
    let i_max = dim.n() / 2;
    let r2 = r * r;
    // t_i = (r^2)^i / i! (1/2)_i (-N)_{2i}, stepped multiplicatively.
    let mut t = 1.0;
    let (mut kap, mut g, mut h, mut j, mut l) = (0.0, 0.0, 0.0, 0.0, 0.0);
    for i in 0..=i_max {
        let fi = i as f64;
        kap += t;
        g += t * (big_n - 4.0 * fi);
        h += t * (2.0 * fi - big_n / 2.0);
        j += t * (4.0 * fi * fi - 2.0 * fi * big_n + big_n * big_n / 4.0);
        l += t * (-16.0 * fi * fi + 8.0 * fi * big_n - big_n * big_n / 2.0 + big_n);
        t *= r2 * (0.5 + fi) * (-big_n + 2.0 * fi) * (-big_n + 2.0 * fi + 1.0) / (fi + 1.0);
    }
    // u_i = (r^2)^i / i! (1/2)_{i+1} (-N)_{2i+2}. The leading 2 makes the
    // cos(2 delta - gamma) cross terms count both conjugate neighbors of the
    // squeeze ladder; fixed against the dense oracle.
    let mut u = 0.5 * (-big_n) * (-big_n + 1.0);
    let mut m = 0.0;
    for i in 0..=i_max {
        let fi = i as f64;
        m += u;
        u *= r2 * (1.5 + fi) * (-big_n + 2.0 * fi + 2.0) * (-big_n + 2.0 * fi + 3.0) / (fi + 1.0);
    }
    AuxPolynomials {
        g: g / kap,
        h: h / kap,
        j: j / kap,
        l: l / kap,
        m: 2.0 * r * m / kap,
        kappa: kap,
    }
}

/// First moments of J1, J2, J3, the second moment of J3 and the squared norm
/// of the unnormalized state.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct MomentSet {
    pub j1: f64,
    pub j2: f64,
    pub j3: f64,
    pub j3sq: f64,
    pub norm_sq: f64,
}

impl MomentSet {
    pub fn variance_j3(&self) -> f64 {
        self.j3sq - self.j3 * self.j3
    }
}

/// Closed-form moments in the state reached from the vacuum.
pub fn moments(params: &SqueezeCoherentParams, dim: Dimension) -> MomentSet {
    let aux = aux_polynomials(dim, params.r);
    let rho = params.rho;
    let one_plus = 1.0 + rho * rho;
    let j1 = rho * params.delta.cos() / one_plus * aux.g;
    let j2 = -rho * params.delta.sin() / one_plus * aux.g;
    let j3 = (1.0 - rho * rho) / one_plus * aux.h;
    let j3sq = ((1.0 + rho.powi(4)) * aux.j
        + rho * rho * aux.l
        + 2.0 * rho * rho * (2.0 * params.delta - params.gamma).cos() * aux.m)
        / (one_plus * one_plus);
    MomentSet {
        j1,
        j2,
        j3,
        j3sq,
        norm_sq: aux.kappa,
    }
}

/// Same moments through the dense oracle: normalize R e_0 and take
/// expectation values.
pub fn moments_oracle(params: &SqueezeCoherentParams, dim: Dimension) -> MomentSet {
    let r = su2::build_r::<f64>(params, dim);
    let g = su2::build_generators::<f64>(dim);
    let raw = r.column(0);
    let norm_sq: f64 = raw.iter().map(|z| z.norm_sqr()).sum();
    let psi: Vec<C64> = raw.iter().map(|z| z / norm_sq.sqrt()).collect();
    let expect = |op: &CMat<f64>| -> f64 {
        let opv = op.mul_vec(&psi);
        psi.iter()
            .zip(opv.iter())
            .map(|(a, b)| (a.conj() * b).re)
            .sum()
    };
    let j3sq_op = g.j3.mul(&g.j3);
    MomentSet {
        j1: expect(&g.j1()),
        j2: expect(&g.j2()),
        j3: expect(&g.j3),
        j3sq: expect(&j3sq_op),
        norm_sq,
    }
}

/// Z^2 along axis 3 from a moment set: `N Var(J3) / (<J1>^2 + <J2>^2)`.
pub fn z2_axis3(m: &MomentSet, dim: Dimension) -> Result<f64, Error> {
    let denom = m.j1 * m.j1 + m.j2 * m.j2;
    if denom <= 0.0 {
        return Err(Error::UndefinedDirection);
    }
    Ok(dim.n() as f64 * m.variance_j3() / denom)
}

/// Z^2 along any axis through the oracle state (closed forms exist only for
/// axis 3). Axes are 1-based; indices cycle.
pub fn z2_axis_oracle(
    params: &SqueezeCoherentParams,
    dim: Dimension,
    axis: usize,
) -> Result<f64, Error> {
    assert!((1..=3).contains(&axis));
    let r = su2::build_r::<f64>(params, dim);
    let g = su2::build_generators::<f64>(dim);
    let raw = r.column(0);
    let norm: f64 = raw.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    let psi: Vec<C64> = raw.iter().map(|z| z / norm).collect();
    let ops = [g.j1(), g.j2(), g.j3.clone()];
    let expect = |op: &CMat<f64>| -> f64 {
        let opv = op.mul_vec(&psi);
        psi.iter()
            .zip(opv.iter())
            .map(|(a, b)| (a.conj() * b).re)
            .sum()
    };
    let i = axis - 1;
    let main = &ops[i];
    let mean = expect(main);
    let second = expect(&main.mul(main));
    let m1 = expect(&ops[(i + 1) % 3]);
    let m2 = expect(&ops[(i + 2) % 3]);
    let denom = m1 * m1 + m2 * m2;
    // Means never exceed N/2; below this floor the direction is rounding
    // noise rather than a defined axis.
    let floor = 1e-20 * (dim.n() as f64 / 2.0).powi(2);
    if denom <= floor {
        return Err(Error::UndefinedDirection);
    }
    Ok(dim.n() as f64 * (second - mean * mean) / denom)
}

/// Z^2_3 swept over the phase theta = 2 delta - gamma (delta swept, gamma
/// fixed to zero), the only phase combination the closed forms admit.
#[derive(Debug, Clone, Serialize)]
pub struct SqueezeCurve {
    #[serde(rename = "N")]
    pub n: usize,
    pub rho: f64,
    pub r: f64,
    pub phase_convention: String,
    pub theta: Vec<f64>,
    pub z2: Vec<f64>,
}

pub fn sweep(dim: Dimension, rho: f64, r: f64, grid_size: usize) -> Result<SqueezeCurve, Error> {
    assert!(grid_size >= 2, "grid must have at least two points");
    if rho == 0.0 {
        return Err(Error::UndefinedDirection);
    }
    let aux = aux_polynomials(dim, r);
    let big_n = dim.n() as f64;
    let one_plus = 1.0 + rho * rho;
    let j3 = (1.0 - rho * rho) / one_plus * aux.h;
    let denom = rho * rho * aux.g * aux.g / (one_plus * one_plus);
    if denom <= 0.0 {
        return Err(Error::UndefinedDirection);
    }
    let mut theta_grid = Vec::with_capacity(grid_size);
    let mut z2 = Vec::with_capacity(grid_size);
    for i in 0..grid_size {
        let theta = std::f64::consts::TAU * i as f64 / (grid_size - 1) as f64;
        let j3sq = ((1.0 + rho.powi(4)) * aux.j
            + rho * rho * aux.l
            + 2.0 * rho * rho * theta.cos() * aux.m)
            / (one_plus * one_plus);
        theta_grid.push(theta);
        z2.push(big_n * (j3sq - j3 * j3) / denom);
    }
    Ok(SqueezeCurve {
        n: dim.n(),
        rho,
        r,
        phase_convention: "2delta-gamma".to_string(),
        theta: theta_grid,
        z2,
    })
}

impl SqueezeCurve {
    pub fn min_z2(&self) -> f64 {
        self.z2.iter().cloned().fold(f64::INFINITY, f64::min)
    }

    pub fn to_csv(&self) -> String {
        let mut out = format!(
            "# N={}, rho={}, r={}, phase_convention={}\ntheta,z2\n",
            self.n, self.rho, self.r, self.phase_convention
        );
        for (t, z) in self.theta.iter().zip(self.z2.iter()) {
            out.push_str(&format!("{:.16e},{:.16e}\n", t, z));
        }
        out
    }
}

/// Squeezing verdict for one N: the phase-grid minimum of Z^2_3 and whether
/// it dips below 1 beyond rounding.
#[derive(Debug, Clone, Serialize)]
pub struct ParityEntry {
    #[serde(rename = "N")]
    pub n: usize,
    pub min_z2: f64,
    pub squeezed: bool,
}

/// Detection threshold: the exact coherent case sits at Z^2 = 1.
pub const SQUEEZED_THRESHOLD: f64 = 1.0 - 1e-9;

pub fn parity_scan(
    n_range: std::ops::RangeInclusive<usize>,
    rho: f64,
    r: f64,
    grid: usize,
) -> Result<Vec<ParityEntry>, Error> {
    n_range
        .map(|n| {
            let curve = sweep(Dimension(n), rho, r, grid)?;
            let min_z2 = curve.min_z2();
            Ok(ParityEntry {
                n,
                min_z2,
                squeezed: min_z2 < SQUEEZED_THRESHOLD,
            })
        })
        .collect()
}

/// Band-mass bookkeeping for one N in the contraction study.
#[derive(Debug, Clone, Serialize)]
pub struct ContractionEntry {
    #[serde(rename = "N")]
    pub n: usize,
    pub rho_rescaled: f64,
    pub r_rescaled: f64,
    /// Absolute coefficient mass at offsets outside [-2, 2].
    pub out_window_mass: f64,
    /// Mass inside the five-term window [-2, 2].
    pub in_window_mass: f64,
    pub ratio: f64,
    pub kappa: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct ContractionReport {
    pub entries: Vec<ContractionEntry>,
    pub monotone_decreasing: bool,
    /// Exponent alpha in ratio ~ N^{-alpha} fitted by log-log least squares.
    pub decay_exponent: f64,
    /// max_{n<=3} |<n+1| J+/sqrt(N) |n> - sqrt(n+1)|, largest N in the list.
    pub ladder_deviation: f64,
    /// The stated analytic bound 2 (n+1)^{3/2} / N at the worst n.
    pub ladder_bound: f64,
    /// max_{n<=3} |<n| [J-/sqrt(N), J+/sqrt(N)] |n> - 1|.
    pub commutator_deviation: f64,
}

/// Rescale (rho, r) -> (rho/sqrt(N), r/N) and watch the thirteen-term band
/// collapse onto the five-term window [-2, 2].
pub fn contraction_study(n_list: &[usize], rho: f64, r: f64) -> ContractionReport {
    let mut entries = Vec::with_capacity(n_list.len());
    for &n in n_list {
        let dim = Dimension(n);
        let params = SqueezeCoherentParams::new(rho / (n as f64).sqrt(), 0.0, r / n as f64, 0.0);
        let g = su2::build_generators::<f64>(dim);
        let mut m = su2::conjugate_forward(&g.j3, &params, dim);
        for i in 0..dim.size() {
            m[(i, i)] += C64::new(n as f64 / 2.0, 0.0);
        }
        let (mut out_mass, mut in_mass) = (0.0f64, 0.0f64);
        for row in 0..dim.size() {
            for col in 0..dim.size() {
                let off = row as i64 - col as i64;
                let a = m[(row, col)].norm();
                if (-2..=2).contains(&off) {
                    in_mass += a;
                } else {
                    out_mass += a;
                }
            }
        }
        entries.push(ContractionEntry {
            n,
            rho_rescaled: params.rho,
            r_rescaled: params.r,
            out_window_mass: out_mass,
            in_window_mass: in_mass,
            ratio: out_mass / in_mass,
            kappa: kappa(params.r, dim),
        });
    }
    // Identically zero ratios (identity conjugation) count as collapsed.
    let monotone_decreasing = entries
        .windows(2)
        .all(|w| w[1].ratio < w[0].ratio || (w[0].ratio == 0.0 && w[1].ratio == 0.0));
    // Log-log slope over the list (0 when a single N is given).
    let decay_exponent = if entries.len() >= 2 {
        let pts: Vec<(f64, f64)> = entries
            .iter()
            .filter(|e| e.ratio > 0.0)
            .map(|e| ((e.n as f64).ln(), e.ratio.ln()))
            .collect();
        let n = pts.len() as f64;
        let sx: f64 = pts.iter().map(|p| p.0).sum();
        let sy: f64 = pts.iter().map(|p| p.1).sum();
        let sxx: f64 = pts.iter().map(|p| p.0 * p.0).sum();
        let sxy: f64 = pts.iter().map(|p| p.0 * p.1).sum();
        -(n * sxy - sx * sy) / (n * sxx - sx * sx)
    } else {
        0.0
    };
    // Ladder and commutator contraction at the largest N.
    let (mut ladder_deviation, mut ladder_bound, mut commutator_deviation) =
        (0.0f64, 0.0f64, 0.0f64);
    if let Some(&n_big) = n_list.iter().max() {
        let dim = Dimension(n_big);
        let g = su2::build_generators::<f64>(dim);
        let scale = 1.0 / (n_big as f64).sqrt();
        for n in 0..=3.min(n_big - 1) {
            let elem = g.jp[(n + 1, n)].re * scale;
            let dev = (elem - ((n + 1) as f64).sqrt()).abs();
            let bound = 2.0 * ((n + 1) as f64).powf(1.5) / n_big as f64;
            if dev > ladder_deviation {
                ladder_deviation = dev;
                ladder_bound = bound;
            }
        }
        let comm =
            g.jm.commutator(&g.jp)
                .scale(C64::new(1.0 / n_big as f64, 0.0));
        for n in 0..=3.min(n_big) {
            commutator_deviation = commutator_deviation.max((comm[(n, n)].re - 1.0).abs());
        }
    }
    ContractionReport {
        entries,
        monotone_decreasing,
        decay_exponent,
        ladder_deviation,
        ladder_bound,
        commutator_deviation,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn kappa_values() {
        assert_eq!(kappa(0.0, Dimension(10)), 1.0);
        // N=2: single surviving term gives 1 + r^2.
        for r in [0.1, 0.5, 2.0] {
            assert!((kappa(r, Dimension(2)) - (1.0 + r * r)).abs() < 1e-13 * (1.0 + r * r));
        }
        // Oracle: squared norm of S e_0.
        for (n, r) in [(10usize, 0.3), (16, 0.7), (20, 0.45)] {
            let params = SqueezeCoherentParams::new(0.0, 0.0, r, 0.0);
            let s = su2::build_s::<f64>(&params, Dimension(n));
            let norm_sq: f64 = s.column(0).iter().map(|z| z.norm_sqr()).sum();
            let k = kappa(r, Dimension(n));
            assert!((k - norm_sq).abs() < 1e-12 * norm_sq, "N={} r={}", n, r);
        }
    }

    #[test]
    fn aux_values_at_r_zero() {
        let n = 9usize;
        let aux = aux_polynomials(Dimension(n), 0.0);
        let nf = n as f64;
        assert_eq!(aux.kappa, 1.0);
        assert_eq!(aux.g, nf);
        assert_eq!(aux.h, -nf / 2.0);
        assert_eq!(aux.j, nf * nf / 4.0);
        // i = 0 term of the L sum: N - N^2/2.
        assert_eq!(aux.l, nf - nf * nf / 2.0);
        assert_eq!(aux.m, 0.0);
    }

    #[test]
    fn coherent_moments_closed_forms() {
        let n = 11usize;
        let params = SqueezeCoherentParams::new(0.7, 0.4, 0.0, 0.0);
        let m = moments(&params, Dimension(n));
        let nf = n as f64;
        let op = 1.0 + params.rho * params.rho;
        assert!((m.j1 - nf * params.rho * params.delta.cos() / op).abs() < 1e-12);
        assert!((m.j3 + nf / 2.0 * (1.0 - params.rho * params.rho) / op).abs() < 1e-12);
        let var_want = nf * params.rho * params.rho / (op * op);
        assert!((m.variance_j3() - var_want).abs() < 1e-12);
        // rho = 1 zeroes the third mean.
        let m1 = moments(
            &SqueezeCoherentParams::new(1.0, 0.3, 0.0, 0.0),
            Dimension(7),
        );
        assert!(m1.j3.abs() < 1e-14);
    }

    #[test]
    fn moments_match_oracle() {
        let dim = Dimension(10);
        let params = SqueezeCoherentParams::new(0.8, 0.3, 0.2, 0.9);
        let closed = moments(&params, dim);
        let oracle = moments_oracle(&params, dim);
        let pairs = [
            (closed.j1, oracle.j1),
            (closed.j2, oracle.j2),
            (closed.j3, oracle.j3),
            (closed.j3sq, oracle.j3sq),
            (closed.norm_sq, oracle.norm_sq),
        ];
        for (c, o) in pairs {
            assert!((c - o).abs() < 1e-9 * o.abs().max(1.0), "{} vs {}", c, o);
        }
    }

    #[test]
    fn coherent_states_are_never_squeezed() {
        for n in [4usize, 7, 12] {
            for rho in [0.3, 0.8, 1.4] {
                let m = moments(
                    &SqueezeCoherentParams::new(rho, 0.9, 0.0, 0.0),
                    Dimension(n),
                );
                let z = z2_axis3(&m, Dimension(n)).unwrap();
                assert!((z - 1.0).abs() < 1e-10, "N={} rho={} z={}", n, rho, z);
            }
        }
    }

    #[test]
    fn undefined_direction_at_rho_zero() {
        let m = moments(
            &SqueezeCoherentParams::new(0.0, 0.0, 0.3, 0.0),
            Dimension(6),
        );
        assert!(matches!(
            z2_axis3(&m, Dimension(6)),
            Err(Error::UndefinedDirection)
        ));
        assert!(matches!(
            z2_axis_oracle(
                &SqueezeCoherentParams::new(0.0, 0.0, 0.3, 0.0),
                Dimension(6),
                3
            ),
            Err(Error::UndefinedDirection)
        ));
    }

    #[test]
    fn oracle_axes_one_and_two() {
        let dim = Dimension(8);
        let params = SqueezeCoherentParams::new(0.7, 0.4, 0.3, 1.2);
        for axis in [1usize, 2] {
            let z = z2_axis_oracle(&params, dim, axis).unwrap();
            assert!(z.is_finite() && z > 0.0, "axis {} gave {}", axis, z);
        }
        // rho = 1, delta = 0 zeroes both <J2> and <J3>: axis 1 undefined.
        let degenerate = SqueezeCoherentParams::new(1.0, 0.0, 0.0, 0.0);
        assert!(matches!(
            z2_axis_oracle(&degenerate, dim, 1),
            Err(Error::UndefinedDirection)
        ));
    }

    #[test]
    fn norm_is_at_least_one() {
        for n in [3usize, 8, 15] {
            for r in [0.0, 0.2, 0.9, 2.0] {
                assert!(kappa(r, Dimension(n)) >= 1.0);
            }
        }
    }

    #[test]
    fn closed_axis3_matches_oracle_axis3() {
        let dim = Dimension(9);
        let params = SqueezeCoherentParams::new(0.8, 0.25, 0.3, 0.0);
        let closed = z2_axis3(&moments(&params, dim), dim).unwrap();
        let oracle = z2_axis_oracle(&params, dim, 3).unwrap();
        assert!((closed - oracle).abs() < 1e-9 * closed.abs());
    }

    #[test]
    fn phase_dependence_only_through_combination() {
        // <J3^2> is invariant under (delta, gamma) -> (delta+s, gamma+2s).
        let dim = Dimension(12);
        for s in [0.3, 1.1, 2.7] {
            let a = moments(&SqueezeCoherentParams::new(0.8, 0.4, 0.35, 1.0), dim);
            let b = moments(
                &SqueezeCoherentParams::new(0.8, 0.4 + s, 0.35, 1.0 + 2.0 * s),
                dim,
            );
            assert!((a.j3sq - b.j3sq).abs() < 1e-10 * a.j3sq.abs());
        }
    }

    #[test]
    fn sweep_structure() {
        let curve = sweep(Dimension(12), 0.8, 0.0, 33).unwrap();
        for z in &curve.z2 {
            assert!((z - 1.0).abs() < 1e-10);
        }
        let curve = sweep(Dimension(12), 0.8, 1.5, 65).unwrap();
        // Period 2pi and reflection symmetry of cos: z2(theta) = z2(2pi - theta).
        assert!((curve.z2[0] - curve.z2[64]).abs() < 1e-10);
        for i in 1..32 {
            assert!((curve.z2[i] - curve.z2[64 - i]).abs() < 1e-9);
        }
        assert!(matches!(
            sweep(Dimension(8), 0.0, 1.0, 16),
            Err(Error::UndefinedDirection)
        ));
    }

    #[test]
    fn figure_preset_ordering() {
        // N = 40, rho = 0.8, r in {2, 4, 6}: every curve dips below 1 and the
        // modulation amplitude decreases as r grows, so the minima are
        // strictly ordered min(r=2) < min(r=4) < min(r=6) < 1.
        let dim = Dimension(40);
        let m2 = sweep(dim, 0.8, 2.0, 257).unwrap().min_z2();
        let m4 = sweep(dim, 0.8, 4.0, 257).unwrap().min_z2();
        let m6 = sweep(dim, 0.8, 6.0, 257).unwrap().min_z2();
        assert!(m2 < m4 && m4 < m6 && m6 < 1.0, "{} {} {}", m2, m4, m6);
        // Deepest minimum near 0.47, shallowest near 0.73.
        assert!((m2 - 0.4675).abs() < 2e-3, "m2={}", m2);
        assert!((m6 - 0.7228).abs() < 2e-3, "m6={}", m6);
    }

    #[test]
    fn parity_dichotomy() {
        let entries = parity_scan(4..=9, 0.8, 2.0, 129).unwrap();
        for e in &entries {
            assert_eq!(e.squeezed, e.n % 2 == 0, "N={} min={}", e.n, e.min_z2);
        }
        // r = 0: nothing squeezed anywhere.
        for e in parity_scan(4..=9, 0.8, 0.0, 33).unwrap() {
            assert!(!e.squeezed);
        }
        // The larger even case from the phase-sweep preset.
        let e40 = parity_scan(40..=40, 0.8, 2.0, 129).unwrap();
        assert!(e40[0].squeezed);
    }

    #[test]
    fn contraction_collapse() {
        let report = contraction_study(&[8, 16, 32, 64], 0.8, 0.5);
        assert!(report.monotone_decreasing, "{:?}", report.entries);
        assert!(report.decay_exponent > 0.0);
        assert!(report.ladder_deviation <= report.ladder_bound);
        assert!(report.commutator_deviation <= 8.0 / 64.0 + 1e-12);
        // kappa sequence settles down: successive changes shrink.
        let k: Vec<f64> = report.entries.iter().map(|e| e.kappa).collect();
        let d1 = (k[1] - k[0]).abs();
        let d2 = (k[2] - k[1]).abs();
        let d3 = (k[3] - k[2]).abs();
        assert!(d2 < d1 && d3 < d2, "kappa deltas: {} {} {}", d1, d2, d3);
        // Identity conjugation: both degenerate parameters give zero mass.
        let degenerate = contraction_study(&[8, 16], 0.0, 0.0);
        for e in &degenerate.entries {
            assert_eq!(e.ratio, 0.0);
        }
        // A single-N list yields a report with no decay fit.
        let single = contraction_study(&[12], 0.8, 0.5);
        assert_eq!(single.entries.len(), 1);
        assert_eq!(single.decay_exponent, 0.0);
    }

    #[test]
    fn curve_csv_header() {
        let curve = sweep(Dimension(6), 0.8, 1.0, 4).unwrap();
        let csv = curve.to_csv();
        assert!(csv.starts_with("# N=6, rho=0.8, r=1, phase_convention=2delta-gamma\ntheta,z2\n"));
        assert_eq!(csv.lines().count(), 6);
    }
}
