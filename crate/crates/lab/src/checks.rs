//! Self-checks bundling the invariants of the numerical core.

use bergman_core::gaf::{trial_rng, DEFAULT_TRUNCATION_EPS};
use bergman_core::hyperbolic::{hyperbolic_distance, mobius_phi, DiskPoint, StatisticParams};
use bergman_core::kernel::{gram, real_determinant, GramMatrix};
use bergman_core::moments::*;
use num_complex::Complex64;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use crate::config::RunConfig;
use crate::experiments::{count_points, mean_var};
use crate::report::{CheckOutcome, CheckReport};

/// Random tuples per algebraic check.
pub const TUPLES: usize = 1000;
/// Relative tolerance of the expansion identities.
pub const IDENTITY_TOL: f64 = 1e-10;
/// Largest modulus of random test points.
pub const POINT_RADIUS: f64 = 0.95;

/// Uniform point (by area) in `|w| < radius`.
pub fn random_point(rng: &mut ChaCha8Rng, radius: f64) -> DiskPoint {
    let r = radius * rng.random::<f64>().sqrt();
    Complex64::from_polar(r, std::f64::consts::TAU * rng.random::<f64>())
}

pub fn random_tuple(rng: &mut ChaCha8Rng, k: usize) -> Vec<DiskPoint> {
    (0..k).map(|_| random_point(rng, POINT_RADIUS)).collect()
}

fn outcome(name: &str, failure: Option<String>, ok_detail: String) -> CheckOutcome {
    CheckOutcome { name: name.to_owned(), passed: failure.is_none(), detail: failure.unwrap_or(ok_detail) }
}

fn fmt_points(p: &[DiskPoint]) -> String {
    p.iter().map(|w| format!("({:.17}, {:.17})", w.re, w.im)).collect::<Vec<_>>().join(" ")
}

/// `|a - b| <= tol · max(|a|, |b|)`.
pub fn relative_match(a: Complex64, b: Complex64, tol: f64) -> bool {
    (a - b).norm() <= tol * a.norm().max(b.norm())
}

/// Expanded form of `J_k` against its determinant definition on
/// [`TUPLES`] random `k`-tuples; returns the first failing tuple and the
/// largest relative deviation seen.
pub fn identity_check(
    k: usize,
    seed: u64,
    expanded: impl Fn(&GramMatrix) -> Complex64,
    definition: impl Fn(&GramMatrix) -> Complex64,
) -> (Option<String>, f64) {
    let mut rng = trial_rng(seed, k as u64);
    let mut worst = 0.0f64;
    for _ in 0..TUPLES {
        let pts = random_tuple(&mut rng, k);
        let g = gram(&pts).expect("points lie in the disk");
        let (a, b) = (expanded(&g), definition(&g));
        let rel = (a - b).norm() / a.norm().max(b.norm());
        worst = worst.max(rel);
        if !relative_match(a, b, IDENTITY_TOL) {
            return (Some(format!("expanded {a} vs determinant form {b} at {}", fmt_points(&pts))), rel);
        }
    }
    (None, worst)
}

pub fn check_mobius(seed: u64) -> CheckOutcome {
    let mut rng = trial_rng(seed, 100);
    for _ in 0..TUPLES {
        let (z, x) = (random_point(&mut rng, POINT_RADIUS), random_point(&mut rng, POINT_RADIUS));
        let back = mobius_phi(z, mobius_phi(z, x).unwrap()).unwrap();
        let d = hyperbolic_distance(z, x).unwrap();
        let d_rev = hyperbolic_distance(x, z).unwrap();
        if (back - x).norm() > 1e-10 || mobius_phi(z, z).unwrap().norm() > 1e-14 || (d - d_rev).abs() > 1e-10 * d.max(1.0) {
            return outcome("mobius", Some(format!("involution or symmetry fails at {}", fmt_points(&[z, x]))), String::new());
        }
    }
    outcome("mobius", None, format!("{TUPLES} random pairs"))
}

pub fn check_kernel(seed: u64) -> CheckOutcome {
    let mut rng = trial_rng(seed, 101);
    for i in 0..TUPLES {
        let pts = random_tuple(&mut rng, 1 + i % 8);
        let g = gram(&pts).unwrap();
        for a in 0..g.dim() {
            for b in 0..g.dim() {
                if (g[(a, b)] - g[(b, a)].conj()).norm() > 1e-12 * g[(a, b)].norm() {
                    return outcome("kernel_hermitian", Some(format!("at {}", fmt_points(&pts))), String::new());
                }
                if g[(a, b)].norm_sqr() > g[(a, a)].re * g[(b, b)].re * (1.0 + 1e-12) {
                    return outcome("kernel_cauchy_schwarz", Some(format!("at {}", fmt_points(&pts))), String::new());
                }
            }
        }
    }
    outcome("kernel", None, format!("Hermitian and Cauchy-Schwarz on {TUPLES} tuples"))
}

pub fn check_hadamard(seed: u64) -> CheckOutcome {
    let mut rng = trial_rng(seed, 102);
    for i in 0..TUPLES {
        let pts = random_tuple(&mut rng, 1 + i % 8);
        let g = gram(&pts).unwrap();
        let bound = g.diagonal_product();
        match real_determinant(&g) {
            Ok(det) if det <= bound * (1.0 + 1e-10) && det >= -1e-10 * bound => {}
            other => {
                return outcome("hadamard", Some(format!("det {other:?} vs bound {bound} at {}", fmt_points(&pts))), String::new())
            }
        }
        if pts.len() == 2 {
            let j = CancellationExpansion::default().j2(&g).norm();
            if j > j2_majorant(pts[0], pts[1]).unwrap() * (1.0 + 1e-12) {
                return outcome("hadamard", Some(format!("|J_2| above its majorant at {}", fmt_points(&pts))), String::new());
            }
        }
    }
    outcome("hadamard", None, format!("0 <= det <= prod K_ii and |J_2| majorant on {TUPLES} tuples"))
}

pub fn check_identities(seed: u64, e: &CancellationExpansion) -> Vec<CheckOutcome> {
    let cases: [(&str, usize, &dyn Fn(&GramMatrix) -> Complex64, &dyn Fn(&GramMatrix) -> Complex64); 3] = [
        ("identity_J2", 2, &|g| e.j2(g), &j2_from_determinants),
        ("identity_J3", 3, &|g| e.j3(g), &j3_from_determinants),
        ("identity_J4", 4, &|g| e.j4(g), &j4_from_determinants),
    ];
    cases
        .into_iter()
        .map(|(name, k, exp, def)| {
            let (fail, worst) = identity_check(k, seed, exp, def);
            outcome(name, fail, format!("{TUPLES} tuples, worst relative deviation {worst:.3e}"))
        })
        .collect()
}

pub fn check_r1r2_inequality() -> CheckOutcome {
    for i in 0..200 {
        for j in 0..200 {
            let (r1, r2) = (f64::from(i) / 200.0, f64::from(j) / 200.0);
            if r1r2_inequality_margin(r1, r2) < -1e-15 {
                return outcome("r1r2_inequality", Some(format!("fails at r1={r1}, r2={r2}")), String::new());
            }
        }
    }
    outcome("r1r2_inequality", None, "200x200 grid on [0,1)^2".to_owned())
}

/// Tightening the tolerance changes each integral by no more than the
/// reported error estimate.
pub fn check_quadrature_refinement() -> CheckOutcome {
    for s in [1.1, 1.25, 1.4] {
        for a in [0.0, 0.5] {
            for n in [2, 6, 10] {
                let p = StatisticParams::new(s, Complex64::new(a, 0.0), n).unwrap();
                let pairs = [
                    (expectation_s_n1(&p), expectation_s_n1_with_tol(&p, 1e-12)),
                    (integral_i_n1(&p), integral_i_n1_with_tol(&p, 1e-12)),
                ];
                for (coarse, fine) in pairs {
                    let (c, f) = match (coarse, fine) {
                        (Ok(c), Ok(f)) => (c, f),
                        (Err(e), _) | (_, Err(e)) => {
                            return outcome("quadrature_refinement", Some(format!("s={s} |z|={a} N={n}: {e}")), String::new())
                        }
                    };
                    let slack = c.abs_error_estimate.max(1e-14 * c.value.abs());
                    if (f.value - c.value).abs() > slack {
                        return outcome(
                            "quadrature_refinement",
                            Some(format!("s={s} |z|={a} N={n}: change {} > estimate {}", (f.value - c.value).abs(), slack)),
                            String::new(),
                        );
                    }
                }
            }
        }
    }
    outcome("quadrature_refinement", None, "S_N1 and I_N1 on s x z x N grid".to_owned())
}

/// Expected values lie inside the large-`N` bracket for `N = 8..12`.
pub fn check_bracket() -> CheckOutcome {
    for s in [1.1, 1.25, 1.4] {
        for a in [0.0, 0.5] {
            for n in 8..=12 {
                let p = StatisticParams::new(s, Complex64::new(a, 0.0), n).unwrap();
                let (lo, hi) = expectation_bracket(&p);
                match expected_s_n(&p) {
                    Ok(e) if lo < e.value && e.value < hi => {}
                    other => {
                        return outcome("bracket", Some(format!("s={s} |z|={a} N={n}: {other:?} vs [{lo}, {hi}]")), String::new())
                    }
                }
            }
        }
    }
    outcome("bracket", None, "s in {1.1,1.25,1.4}, |z| in {0,0.5}, N=8..12".to_owned())
}

/// Mean number of points in `U_2(0)` against `sinh²(1)`, within three
/// standard errors.
pub fn check_mean_count(config: &RunConfig) -> CheckOutcome {
    let cfg = RunConfig { n_list: vec![2], eps_truncation: DEFAULT_TRUNCATION_EPS, ..config.clone() };
    let counts = match count_points(&cfg) {
        Ok(c) => c,
        Err(e) => return outcome("mean_count_N2", Some(e.to_string()), String::new()),
    };
    let xs: Vec<f64> = counts.iter().map(|c| c[0] as f64).collect();
    let (mean, var) = mean_var(&xs);
    let se = (var.unwrap_or(f64::INFINITY) / xs.len() as f64).sqrt();
    let expected = 1f64.sinh().powi(2);
    let detail = format!("mean {mean:.5} vs sinh^2(1) = {expected:.5}, stderr {se:.5}, {} trials", xs.len());
    outcome("mean_count_N2", ((mean - expected).abs() > 3.0 * se).then(|| detail.clone()), detail)
}

/// All checks with the given expansion coefficients.
pub fn run_checks_with(config: &RunConfig, expansion: &CancellationExpansion) -> CheckReport {
    let seed = config.master_seed;
    let mut checks = vec![check_mobius(seed), check_kernel(seed), check_hadamard(seed)];
    checks.extend(check_identities(seed, expansion));
    checks.push(check_r1r2_inequality());
    checks.push(check_quadrature_refinement());
    checks.push(check_bracket());
    checks.push(check_mean_count(config));
    CheckReport { checks }
}

pub fn run_checks(config: &RunConfig) -> CheckReport {
    run_checks_with(config, &CancellationExpansion::default())
}
