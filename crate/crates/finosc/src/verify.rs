//! Registry of identity checks: every closed form against the dense oracle,
//! the orthogonality and biorthogonality sums, band structure, the matrix
//! polynomial layer, functionals, degree pattern, difference equation,
//! ladders and moments. The command-line `verify` subcommand and the
//! acceptance suite both drive this registry.

use crate::elements;
use crate::krawtchouk::{self, KrawtchoukParams};
use crate::mat::CMat;
use crate::multiortho;
use crate::params::{draw_params, Dimension, ScalarMode, SqueezeCoherentParams};
use crate::scalar::{Dd, C64};
use crate::squeezing;
use crate::su2::{self, rel_diff};
use crate::vecpoly::{self, BiorthPairing, VectorPolyParams};
use serde::Serialize;

#[derive(Debug, Clone, Serialize)]
pub struct IdentityReport {
    pub identity: String,
    #[serde(rename = "N")]
    pub n: usize,
    pub params: SqueezeCoherentParams,
    pub residual: f64,
    pub tolerance: f64,
    /// For most identities pass means residual <= tolerance; the two
    /// lower-bound checks (squeeze non-unitarity, functional conditions one
    /// power beyond the guaranteed range) pass when the residual exceeds it.
    pub pass: bool,
}

#[derive(Debug, Clone)]
pub struct VerifyConfig {
    pub dim: Dimension,
    pub params: SqueezeCoherentParams,
    /// Replaces the per-identity tolerance of every upper-bound check.
    pub tolerance_override: Option<f64>,
    /// Extra seeded parameter draws checked on the core table identities.
    pub random_draws: usize,
    pub seed: u64,
    pub mode: Option<ScalarMode>,
}

impl VerifyConfig {
    pub fn new(dim: Dimension, params: SqueezeCoherentParams) -> Self {
        VerifyConfig {
            dim,
            params,
            tolerance_override: None,
            random_draws: 0,
            seed: 7,
            mode: None,
        }
    }
}

struct Recorder<'a> {
    out: Vec<IdentityReport>,
    dim: Dimension,
    params: SqueezeCoherentParams,
    tolerance_override: Option<f64>,
    suffix: &'a str,
}

impl<'a> Recorder<'a> {
    fn push(&mut self, name: &str, residual: f64, tolerance: f64) {
        // Per-identity tolerances are calibrated for N <= 20; above that the
        // dimension-wide schedule (1e-7) takes over. Structural checks with
        // zero tolerance stay exact at every N.
        let scheduled = if tolerance == 0.0 {
            0.0
        } else {
            tolerance.max(self.dim.default_tol())
        };
        let tolerance = self.tolerance_override.unwrap_or(scheduled);
        self.out.push(IdentityReport {
            identity: format!("{}{}", name, self.suffix),
            n: self.dim.n(),
            params: self.params,
            residual,
            tolerance,
            pass: residual.is_finite() && residual <= tolerance,
        });
    }

    /// Lower-bound check: passes when the residual exceeds the threshold.
    fn push_floor(&mut self, name: &str, residual: f64, floor: f64) {
        self.out.push(IdentityReport {
            identity: format!("{}{}", name, self.suffix),
            n: self.dim.n(),
            params: self.params,
            residual,
            tolerance: floor,
            pass: residual.is_finite() && residual > floor,
        });
    }
}

fn band_mode(cfg: &VerifyConfig) -> ScalarMode {
    cfg.mode.unwrap_or_else(|| ScalarMode::auto(cfg.dim))
}

fn check_operator_layer(rec: &mut Recorder, dim: Dimension, params: &SqueezeCoherentParams) {
    let size = dim.size();
    let r = su2::build_r::<f64>(params, dim);
    let rinv = su2::build_r_inverse::<f64>(params, dim);
    let id = CMat::identity(size);
    let resid = r.mul(&rinv).sub(&id).inf_norm() / (r.inf_norm() * rinv.inf_norm()).max(1e-300);
    rec.push("operator_inverse", resid, 1e-10);

    let d = su2::build_d::<f64>(params, dim);
    rec.push(
        "displacement_unitary",
        d.mul(&d.dagger()).sub(&id).inf_norm(),
        1e-10,
    );
    if params.r >= 0.1 && dim.n() >= 2 {
        let s = su2::build_s::<f64>(params, dim);
        rec.push_floor(
            "squeeze_nonunitary_gap",
            s.mul(&s.dagger()).sub(&id).inf_norm(),
            1e-6,
        );
    }

    let coh = SqueezeCoherentParams::coherent(params.rho, params.delta);
    rec.push(
        "factor_reduction_displacement",
        rel_diff(
            &su2::build_r::<f64>(&coh, dim),
            &su2::build_d::<f64>(&coh, dim),
        ),
        1e-12,
    );
    let sq = SqueezeCoherentParams::new(0.0, 0.0, params.r, params.gamma);
    rec.push(
        "factor_reduction_squeeze",
        rel_diff(
            &su2::build_r::<f64>(&sq, dim),
            &su2::build_s::<f64>(&sq, dim),
        ),
        1e-12,
    );

    rec.push(
        "equations_of_motion",
        su2::equations_of_motion_residual(dim),
        1e-12,
    );
    // The identities hold for any polynomial coefficient; shrink it with N
    // so that ||P(J)|| stays at its N = 6 size and the check remains equally
    // conditioned at every dimension.
    let half = dim.n() as f64 / 2.0;
    let damp = (12.0 / (half * (half + 1.0))).min(1.0);
    let bch = su2::verify_bch_suite(dim, C64::new(0.2, 0.1) * damp, C64::new(0.4, 0.0) * damp);
    let worst = bch.iter().map(|c| c.residual).fold(0.0, f64::max);
    rec.push("ladder_exponential_identities", worst, 1e-10);
}

fn check_table_layer(rec: &mut Recorder, dim: Dimension, params: &SqueezeCoherentParams) {
    rec.push(
        "lambda_oracle_equivalence",
        rel_diff(
            &elements::lambda_table(params, dim).entries,
            &su2::build_d::<f64>(params, dim),
        ),
        1e-9,
    );
    rec.push(
        "phi_oracle_equivalence",
        rel_diff(
            &elements::phi_table(params, dim).entries,
            &su2::build_s::<f64>(params, dim),
        ),
        1e-9,
    );
    let r_oracle = su2::build_r::<f64>(params, dim);
    rec.push(
        "r_oracle_equivalence",
        rel_diff(&elements::r_table(params, dim).entries, &r_oracle),
        1e-9,
    );
    rec.push(
        "r_convolution_route",
        rel_diff(&elements::r_table_product(params, dim).entries, &r_oracle),
        1e-9,
    );
    rec.push(
        "r_inverse_oracle_equivalence",
        rel_diff(
            &elements::r_inverse_table(params, dim).entries,
            &su2::build_r_inverse::<f64>(params, dim),
        ),
        1e-9,
    );

    // Structural parity zeros are exact, not merely small.
    let phi = elements::phi_table(params, dim).entries;
    let mut parity = 0.0f64;
    for m in 0..dim.size() {
        for n in 0..dim.size() {
            if m % 2 != n % 2 {
                parity = parity.max(phi[(m, n)].norm());
            }
        }
    }
    rec.push("phi_parity_structural_zeros", parity, 0.0);

    rec.push(
        "lambda_unitarity",
        elements::lambda_unitarity_residual(params, dim),
        1e-10,
    );
    rec.push(
        "lambda_biorthogonality",
        elements::lambda_biorthogonality_residual(params, dim),
        1e-10,
    );
    rec.push(
        "phi_biorthogonality",
        elements::phi_biorthogonality_residual(params, dim).relative,
        1e-9,
    );
    rec.push(
        "r_biorthogonality",
        elements::r_biorthogonality_residual(params, dim).relative,
        1e-9,
    );

    let (norm_state, norm_sq) = elements::state(0, params, dim);
    rec.push(
        "state_normalization",
        (norm_state.norm_sq() - 1.0).abs(),
        1e-12,
    );
    rec.push(
        "state_norm_matches_kappa",
        (norm_sq - squeezing::kappa(params.r, dim)).abs() / norm_sq,
        1e-10,
    );

    // The double-sum route cancels through binomial-scale terms; past the
    // calibrated regime it is conditioning-limited in doubles.
    if dim.n() <= 20 {
        rec.push(
            "generating_function_consistency",
            elements::generating_consistency_residual(params, dim),
            1e-9,
        );
    }

    let mut ladder_worst = 0.0f64;
    for n in 0..dim.size() {
        let (up, down) = elements::ladder_check(n, params, dim);
        ladder_worst = ladder_worst.max(up).max(down);
    }
    rec.push("ladder_relations", ladder_worst, 1e-9);
}

fn check_polynomial_layer(
    rec: &mut Recorder,
    dim: Dimension,
    params: &SqueezeCoherentParams,
    mode: ScalarMode,
) {
    // Conjugating by the non-unitary operator amplifies rounding by about
    // the product of the operator norms; below this floor a band leak is
    // uncertifiable at the available precision rather than a failure.
    let precision_floor = {
        let r = su2::build_r::<f64>(params, dim);
        let rinv = su2::build_r_inverse::<f64>(params, dim);
        let eps = match mode {
            ScalarMode::Double => 1e-16,
            ScalarMode::Extended => 1e-31,
        };
        1e3 * eps * r.inf_norm() * rinv.inf_norm()
    };
    let push_band = |rec: &mut Recorder, name: &str, outcome: Result<f64, crate::Error>| {
        match outcome {
            Ok(mass) => rec.push(name, mass, 1e-10),
            Err(crate::Error::BandLeak { mass, .. }) => {
                // Below the certifiable floor for this precision the leak is
                // rounding, not structure: skip instead of a false failure.
                if mass >= precision_floor {
                    rec.push(name, mass, 1e-10);
                }
            }
            Err(_) => rec.push(name, f64::NAN, 1e-10),
        }
    };

    match multiortho::extract_recurrence_band_mode(params, dim, mode) {
        Ok(band) => {
            push_band(rec, "forward_band_support", Ok(band.out_of_band_rel_mass));
            let gamma = multiortho::assemble_gamma(&band);
            rec.push(
                "gamma_edge_structure",
                gamma.edge_structure_residual(),
                1e-10,
            );
        }
        other => push_band(
            rec,
            "forward_band_support",
            other.map(|b| b.out_of_band_rel_mass),
        ),
    }
    if let Ok(resid) = multiortho::forward_recurrence_residual(params, dim) {
        rec.push("forward_recurrence", resid, 1e-9);
    }

    push_band(
        rec,
        "difference_band_support",
        multiortho::difference_band_mode(params, dim, mode).map(|b| b.out_of_band_rel_mass),
    );
    if let Ok(resid) = multiortho::difference_equation_residual(params, dim) {
        rec.push("difference_equation", resid, 1e-8);
    }
    match multiortho::inverse_recurrence_band_mode(params, dim, mode) {
        Ok(band) => {
            push_band(rec, "inverse_band_support", Ok(band.out_of_band_rel_mass));
            rec.push(
                "inverse_edge_triangularity",
                multiortho::e_edge_structure_residual(&band),
                1e-10,
            );
        }
        other => push_band(
            rec,
            "inverse_band_support",
            other.map(|b| b.out_of_band_rel_mass),
        ),
    }
    if let Ok(resid) = multiortho::inverse_recurrence_residual(params, dim) {
        rec.push("inverse_recurrence", resid, 1e-8);
    }

    // The matrix-polynomial layer needs generic parameters and at least two
    // full blocks; its deep cancellations are calibrated for the desk-scale
    // regime N <= 20.
    if params.rho == 0.0 || params.r == 0.0 || multiortho::full_block_count(dim) < 2 || dim.n() > 20
    {
        return;
    }
    if let Ok(resid) = multiortho::q_generates_psi_residual(params, dim) {
        rec.push("q_generates_psi", resid, 1e-7);
    }
    if let Ok(resid) = multiortho::q_recurrence_residual(params, dim) {
        rec.push("q_recurrence", resid, 1e-8);
    }
    if let Ok(resid) = multiortho::q_polynomial_structure_residual(params, dim) {
        rec.push("q_polynomial_structure", resid, 1e-6);
    }
    match multiortho::weight_biorthogonality(params, dim) {
        Ok(report) => {
            rec.push("weight_rank_one", report.rank1_residual, 1e-10);
            rec.push(
                "weight_biorthogonality_identity",
                report.identity_form_residual,
                1e-8,
            );
            if let Some(resid) = report.exchange_form_residual {
                rec.push("weight_biorthogonality_exchange", resid, 1e-8);
            }
        }
        Err(_) => rec.push("weight_biorthogonality_identity", f64::NAN, 1e-8),
    }
    match multiortho::functional_annihilation(params, dim) {
        Ok(report) => {
            rec.push("functional_annihilation", report.worst_required(), 1e-8);
            rec.push_floor("functional_beyond_gap", report.weakest_beyond(), 1e-4);
        }
        Err(_) => rec.push("functional_annihilation", f64::NAN, 1e-8),
    }
    if multiortho::max_full_block(dim) >= 3 {
        match multiortho::proposition_degree_check(params, dim, 1e-6) {
            Ok(report) => {
                rec.push(
                    "inverse_seed_reconstruction",
                    report.reconstruction_residual,
                    1e-7,
                );
                rec.push(
                    "inverse_degree_pattern",
                    if report.pattern_matches { 0.0 } else { 1.0 },
                    0.0,
                );
            }
            Err(_) => rec.push("inverse_seed_reconstruction", f64::NAN, 1e-7),
        }
    }
}

fn check_scalar_polynomials(rec: &mut Recorder, dim: Dimension, params: &SqueezeCoherentParams) {
    let dim_k = Dimension(dim.n().min(12));
    let p = params.p().clamp(1e-6, 1.0 - 1e-6);
    let kp = KrawtchoukParams::new(p, dim_k);
    // The family is not normalized, so measure each pair against the larger
    // of the two diagonal norms.
    let diag: Vec<f64> = (0..=dim_k.n())
        .map(|n| krawtchouk::krawtchouk_orthogonality(n, n, &kp).unwrap().1)
        .collect();
    let mut worst = 0.0f64;
    for n in 0..=dim_k.n() {
        for m in 0..=dim_k.n() {
            let (lhs, rhs) = krawtchouk::krawtchouk_orthogonality(n, m, &kp).unwrap();
            let scale = diag[n].abs().max(diag[m].abs()).max(1.0);
            worst = worst.max((lhs - rhs).abs() / scale);
        }
    }
    rec.push("krawtchouk_orthogonality", worst, 1e-10);

    let mut worst = 0.0f64;
    for k in 0..=dim_k.n() {
        let rec_vals = krawtchouk::krawtchouk_by_recurrence(dim_k.n(), k as f64, &kp).unwrap();
        for m in 0..=dim_k.n() {
            let hyp = krawtchouk::krawtchouk(m, k as f64, &kp).unwrap();
            worst = worst.max((rec_vals[m] - hyp).abs() / hyp.abs().max(1.0));
        }
    }
    rec.push("krawtchouk_recurrence_route", worst, 1e-10);

    let mut worst = 0.0f64;
    for (x, t) in [(0usize, 0.37), (dim_k.n() / 2, -0.2), (dim_k.n(), 0.15)] {
        worst = worst.max(krawtchouk::krawtchouk_genfun_check(x, t, &kp).unwrap());
    }
    rec.push("krawtchouk_generating_function", worst, 1e-12);

    if params.r > 0.0 {
        let xi = params.xi();
        let mut worst = 0.0f64;
        for c in [0usize, 1] {
            // The check needs A_{a+1} inside the family: 2(a+1)+c <= N.
            if 2 + c > dim.n() {
                continue;
            }
            let vp = VectorPolyParams::new(c, params.d(), dim);
            let a_max = (dim.n() - c) / 2 - 1;
            for a in 0..=2usize.min(a_max) {
                for b in [0.0, 1.0, 2.5] {
                    worst =
                        worst.max(vecpoly::vector_poly_a_recurrence_check(a, b, &vp, xi).unwrap());
                }
            }
        }
        rec.push("vector_polynomial_recurrence", worst, 1e-10);

        let mut worst = 0.0f64;
        let even_n = dim.n() & !1;
        if even_n >= 4 {
            let dim_e = Dimension(even_n);
            for c in [0usize, 1] {
                let u = even_n / 2 - c;
                for a in 0..=u {
                    for ap in 0..=u {
                        let (lhs, rhs) = vecpoly::vector_poly_a_biorthogonality(
                            a,
                            ap,
                            BiorthPairing::Even { c },
                            params.d(),
                            dim_e,
                        )
                        .unwrap();
                        let scale = rhs.abs().max(1e-2);
                        worst = worst.max((lhs - rhs).abs() / scale);
                    }
                }
            }
        }
        let odd_n = if dim.n() % 2 == 1 {
            dim.n()
        } else {
            dim.n().saturating_sub(1)
        };
        if odd_n >= 3 {
            let dim_o = Dimension(odd_n);
            let u = (odd_n - 1) / 2;
            for a in 0..=u {
                for ap in 0..=u {
                    let (lhs, rhs) = vecpoly::vector_poly_a_biorthogonality(
                        a,
                        ap,
                        BiorthPairing::OddInterlaced,
                        params.d(),
                        dim_o,
                    )
                    .unwrap();
                    let scale = rhs.abs().max(1e-2);
                    worst = worst.max((lhs - rhs).abs() / scale);
                }
            }
        }
        rec.push("vector_polynomial_biorthogonality", worst, 1e-10);
    }
}

fn check_squeezing_layer(rec: &mut Recorder, dim: Dimension, params: &SqueezeCoherentParams) {
    let kappa_dim = Dimension(dim.n().min(20));
    let oracle_s = su2::build_s::<f64>(
        &SqueezeCoherentParams::new(0.0, 0.0, params.r, params.gamma),
        kappa_dim,
    );
    let oracle_norm: f64 = oracle_s.column(0).iter().map(|z| z.norm_sqr()).sum();
    rec.push(
        "kappa_oracle_norm",
        (squeezing::kappa(params.r, kappa_dim) - oracle_norm).abs() / oracle_norm,
        1e-12,
    );

    let closed = squeezing::moments(params, dim);
    let oracle = squeezing::moments_oracle(params, dim);
    let pairs = [
        (closed.j1, oracle.j1),
        (closed.j2, oracle.j2),
        (closed.j3, oracle.j3),
        (closed.j3sq, oracle.j3sq),
        (closed.norm_sq, oracle.norm_sq),
    ];
    let worst = pairs
        .iter()
        .map(|(c, o)| (c - o).abs() / o.abs().max(1.0))
        .fold(0.0, f64::max);
    rec.push("moments_oracle_equivalence", worst, 1e-9);

    if params.rho > 0.0 && dim.n() >= 1 {
        let coh = SqueezeCoherentParams::coherent(params.rho, params.delta);
        let z = squeezing::z2_axis3(&squeezing::moments(&coh, dim), dim).unwrap();
        rec.push("coherent_unity_ratio", (z - 1.0).abs(), 1e-10);

        let m_a = squeezing::moments(params, dim);
        let shifted = SqueezeCoherentParams::new(
            params.rho,
            params.delta + 0.83,
            params.r,
            params.gamma + 1.66,
        );
        let m_b = squeezing::moments(&shifted, dim);
        rec.push(
            "phase_combination_invariance",
            (m_a.j3sq - m_b.j3sq).abs() / m_a.j3sq.abs().max(1.0),
            1e-10,
        );
        rec.push(
            "variance_nonnegative",
            (-squeezing::moments(params, dim).variance_j3()).max(0.0),
            1e-12,
        );
    }
}

fn check_extended_oracle(rec: &mut Recorder, dim: Dimension, params: &SqueezeCoherentParams) {
    let rd = su2::build_r::<f64>(params, dim);
    let rx = su2::build_r::<Dd>(params, dim).to_c64();
    rec.push("extended_oracle_agreement", rel_diff(&rd, &rx), 1e-12);
}

/// Run the full registry at the configured point plus the seeded random
/// draws (the draws exercise the table identities only, keeping runtime
/// linear in the draw count).
pub fn run_all(cfg: &VerifyConfig) -> Vec<IdentityReport> {
    let mut out = Vec::new();
    let mode = band_mode(cfg);
    {
        let mut rec = Recorder {
            out: Vec::new(),
            dim: cfg.dim,
            params: cfg.params,
            tolerance_override: cfg.tolerance_override,
            suffix: "",
        };
        check_operator_layer(&mut rec, cfg.dim, &cfg.params);
        check_table_layer(&mut rec, cfg.dim, &cfg.params);
        check_polynomial_layer(&mut rec, cfg.dim, &cfg.params, mode);
        check_scalar_polynomials(&mut rec, cfg.dim, &cfg.params);
        check_squeezing_layer(&mut rec, cfg.dim, &cfg.params);
        if cfg.mode == Some(ScalarMode::Extended) {
            check_extended_oracle(&mut rec, cfg.dim, &cfg.params);
        }
        out.extend(rec.out);
    }
    for (idx, params) in draw_params(cfg.seed, cfg.random_draws).iter().enumerate() {
        let suffix = format!("[draw {}]", idx);
        let mut rec = Recorder {
            out: Vec::new(),
            dim: cfg.dim,
            params: *params,
            tolerance_override: cfg.tolerance_override,
            suffix: &suffix,
        };
        check_table_layer(&mut rec, cfg.dim, params);
        out.extend(rec.out);
    }
    out
}

pub fn all_pass(reports: &[IdentityReport]) -> bool {
    reports.iter().all(|r| r.pass)
}

pub fn first_failure(reports: &[IdentityReport]) -> Option<&IdentityReport> {
    reports.iter().find(|r| !r.pass)
}
