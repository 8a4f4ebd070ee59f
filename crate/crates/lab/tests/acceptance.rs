//! Acceptance criteria 1-9, each at its stated tolerance. Prints one
//! PASS/FAIL line per criterion and exits with status 1 if any fails.

use std::time::{Duration, Instant};

use bergman_core::gaf::{count_zeros_winding, find_roots, GafSample};
use bergman_core::hyperbolic::{shell_radius, StatisticParams};
use bergman_core::moments::{
    asymptotic_s_n1, expectation_bracket, expectation_s_n1, expected_s_n, least_squares, variance_rate,
    CancellationExpansion,
};
use bergman_lab::checks::{check_hadamard, check_identities, check_kernel, check_r1r2_inequality};
use bergman_lab::experiments::{count_points, mean_var, run_divergence, run_lln};
use bergman_lab::report::ExperimentReport;
use bergman_lab::RunConfig;
use num_complex::Complex64;

const S_GRID: [f64; 3] = [1.1, 1.25, 1.4];
const Z_GRID: [f64; 2] = [0.0, 0.5];
/// Bound applied where a criterion asks for a runtime of "seconds".
const SECONDS: Duration = Duration::from_secs(60);

struct Outcome {
    passed: bool,
    detail: String,
}

fn params(s: f64, a: f64, n: u32) -> StatisticParams {
    StatisticParams::new(s, Complex64::new(a, 0.0), n).unwrap()
}

fn within_runtime(o: Outcome, started: Instant, limit: Option<Duration>) -> Outcome {
    let elapsed = started.elapsed();
    let fast_enough = limit.is_none_or(|l| elapsed <= l);
    let limit_text = limit.map_or(String::new(), |l| format!(" (limit {}s)", l.as_secs()));
    Outcome {
        passed: o.passed && fast_enough,
        detail: format!("{}; {:.1}s{}", o.detail, elapsed.as_secs_f64(), limit_text),
    }
}

/// Mean point count in U_N(0) against sinh²(N/2).
fn criterion_1() -> Outcome {
    let cfg = RunConfig { n_list: vec![1, 2, 3], trials: 5000, master_seed: 101, ..RunConfig::default() };
    let counts = count_points(&cfg).unwrap();
    let mut passed = true;
    let mut parts = Vec::new();
    for (i, &n) in cfg.n_list.iter().enumerate() {
        let xs: Vec<f64> = counts.iter().map(|c| c[i] as f64).collect();
        let (mean, var) = mean_var(&xs);
        let se = (var.unwrap() / xs.len() as f64).sqrt();
        let expected = (0.5 * f64::from(n)).sinh().powi(2);
        let z = (mean - expected) / se;
        passed &= z.abs() <= 3.0;
        parts.push(format!("N={n}: {mean:.4} vs {expected:.4} ({z:+.2} se)"));
    }
    Outcome { passed, detail: parts.join(", ") }
}

/// E[S_{N,1}] over its closed-form asymptote at N = 10 lies in [0.99, 1.01].
fn criterion_2() -> Outcome {
    let mut passed = true;
    let mut parts = Vec::new();
    for s in S_GRID {
        for a in Z_GRID {
            let p = params(s, a, 10);
            let ratio = expectation_s_n1(&p).unwrap().value / asymptotic_s_n1(&p);
            passed &= (0.99..=1.01).contains(&ratio);
            parts.push(format!("({s},{a}): {ratio:.4}"));
        }
    }
    Outcome { passed, detail: parts.join(", ") }
}

/// E[S_N] strictly inside the bracket for N = 8..12.
fn criterion_3() -> Outcome {
    let mut passed = true;
    let mut parts = Vec::new();
    for s in S_GRID {
        for a in Z_GRID {
            let inside: Vec<bool> = (1..=12)
                .map(|n| {
                    let p = params(s, a, n);
                    let e = expected_s_n(&p).unwrap().value;
                    let (lo, hi) = expectation_bracket(&p);
                    lo < e && e < hi
                })
                .collect();
            passed &= inside[7..].iter().all(|b| *b);
            let from = (0..12).rev().take_while(|&i| inside[i]).last().map_or(13, |i| i + 1);
            parts.push(format!("({s},{a}): inside for N>={from}"));
        }
    }
    Outcome { passed, detail: parts.join(", ") }
}

fn mc_vs_quadrature(report: &ExperimentReport) -> (bool, Vec<String>) {
    let mut passed = true;
    let mut parts = Vec::new();
    for r in &report.rows {
        let z = (r.mc_mean - r.quad_expectation) / r.stderr.unwrap();
        passed &= z.abs() <= 3.0;
        parts.push(format!("N={}: {:.4} vs {:.4} ({z:+.2} se)", r.n, r.mc_mean, r.quad_expectation));
    }
    (passed, parts)
}

/// Monte Carlo mean of S_N against expected_S_N.
fn criterion_4() -> Outcome {
    let mut passed = true;
    let mut parts = Vec::new();
    for (z, seed) in [([0.0, 0.0], 401), ([0.3, 0.2], 402)] {
        let cfg = RunConfig { s: 1.25, z, n_list: vec![2, 3], trials: 2000, master_seed: seed, ..RunConfig::default() };
        let (ok, p) = mc_vs_quadrature(&run_lln(&cfg).unwrap());
        passed &= ok;
        parts.push(format!("z=({},{}) {}", z[0], z[1], p.join(", ")));
    }
    Outcome { passed, detail: parts.join("; ") }
}

/// Growth rates: quadrature slope 3-2s ± 0.02 over N = 6..12; mean
/// per-trial slope of log‖Θ_N‖ over N = 2..5 within (3-2s)/2 ± 0.15.
fn criterion_5() -> Outcome {
    let mut passed = true;
    let mut parts = Vec::new();
    let ns: Vec<f64> = (6..=12).map(f64::from).collect();
    for s in S_GRID {
        for a in Z_GRID {
            let logs: Vec<f64> = (6..=12).map(|n| expected_s_n(&params(s, a, n)).unwrap().value.ln()).collect();
            let slope = least_squares(&ns, &logs).unwrap().slope;
            passed &= (slope - (3.0 - 2.0 * s)).abs() <= 0.02;
            parts.push(format!("({s},{a}): {slope:.4} vs {:.2}", 3.0 - 2.0 * s));
        }
    }
    let cfg = RunConfig { n_list: vec![2, 3, 4, 5], trials: 640, master_seed: 501, ..RunConfig::default() };
    let d = run_divergence(&cfg).unwrap();
    passed &= d.fitted_trials >= 500 && (d.slope_mean - d.expected_center).abs() <= 0.15;
    parts.push(format!(
        "per-trial slope {:.4} ± {:.4} vs {:.3} over {} trials",
        d.slope_mean, d.slope_stderr, d.expected_center, d.fitted_trials
    ));
    Outcome { passed, detail: parts.join(", ") }
}

fn lln_run() -> ExperimentReport {
    let cfg = RunConfig { s: 1.25, n_list: vec![2, 3, 4], trials: 5000, master_seed: 601, ..RunConfig::default() };
    run_lln(&cfg).unwrap()
}

/// Variance rate over N = 2, 3, 4 and decreasing Var/mean².
fn criterion_6(report: &ExperimentReport) -> Outcome {
    let ns: Vec<f64> = report.rows.iter().map(|r| f64::from(r.n)).collect();
    let vars: Vec<f64> = report.rows.iter().map(|r| r.mc_var.unwrap()).collect();
    let slope = variance_rate(&ns, &vars).unwrap().slope;
    let rel: Vec<f64> = report.rows.iter().map(|r| r.mc_var.unwrap() / (r.mc_mean * r.mc_mean)).collect();
    let decreasing = rel.windows(2).all(|w| w[1] < w[0]);
    Outcome {
        passed: (slope - 0.5).abs() <= 0.4 && decreasing,
        detail: format!("slope {slope:.4} vs 0.5 ± 0.4, Var/mean^2 {rel:.4?}"),
    }
}

/// Mean of S_N / E[S_N] within 3 standard errors of 1; ratio spread
/// smaller at N = 4 than at N = 2.
fn criterion_7(report: &ExperimentReport) -> Outcome {
    let mut passed = true;
    let mut parts = Vec::new();
    for r in &report.rows {
        let se = r.stderr.unwrap() / r.quad_expectation;
        passed &= (r.ratio - 1.0).abs() <= 3.0 * se;
        parts.push(format!("N={}: {:.4} ± {:.4} (std {:.4})", r.n, r.ratio, se, r.ratio_std().unwrap()));
    }
    let first = report.rows.first().unwrap().ratio_std().unwrap();
    let last = report.rows.last().unwrap().ratio_std().unwrap();
    passed &= last < first;
    Outcome { passed, detail: parts.join(", ") }
}

/// Expansion identities, Hadamard and Cauchy-Schwarz bounds, r1r2 grid.
fn criterion_8() -> Outcome {
    let mut outcomes = check_identities(801, &CancellationExpansion::default());
    outcomes.push(check_kernel(802));
    outcomes.push(check_hadamard(803));
    outcomes.push(check_r1r2_inequality());
    Outcome {
        passed: outcomes.iter().all(|o| o.passed),
        detail: outcomes
            .iter()
            .map(|o| format!("{} {}", o.name, if o.passed { "ok" } else { o.detail.as_str() }))
            .collect::<Vec<_>>()
            .join(", "),
    }
}

/// Root count inside ρ equals the winding count, 100 GAFs of degree <= 500.
fn criterion_9() -> Outcome {
    let radii = [0.5, 0.8, shell_radius(3.0)];
    let mut mismatches = Vec::new();
    for i in 0..100u64 {
        let degree = 5 + (i as usize * 97) % 496;
        let sample = GafSample::draw(degree, 901, i);
        for rho in radii {
            let roots = find_roots(&sample, rho).map(|r| r.len());
            let winding = count_zeros_winding(&sample, rho);
            if roots.as_ref().ok() != winding.as_ref().ok() || roots.is_err() {
                mismatches.push(format!("gaf {i} deg {degree} rho {rho:.4}: {roots:?} vs {winding:?}"));
            }
        }
    }
    Outcome {
        passed: mismatches.is_empty(),
        detail: if mismatches.is_empty() { "300 of 300 counts agree".to_owned() } else { mismatches.join("; ") },
    }
}

fn main() {
    let mut failed = 0;
    let mut report = |k: u32, name: &str, o: Outcome| {
        println!("criterion {k} [{name}]: {} - {}", if o.passed { "PASS" } else { "FAIL" }, o.detail);
        failed += usize::from(!o.passed);
    };
    let t = Instant::now();
    report(1, "first intensity", within_runtime(criterion_1(), t, Some(Duration::from_secs(120))));
    let t = Instant::now();
    report(2, "S_N1 asymptotic constant", within_runtime(criterion_2(), t, Some(SECONDS)));
    let t = Instant::now();
    report(3, "expectation bracket", within_runtime(criterion_3(), t, Some(SECONDS)));
    let t = Instant::now();
    report(4, "sampler vs quadrature", within_runtime(criterion_4(), t, Some(Duration::from_secs(600))));
    let t = Instant::now();
    report(5, "growth rates", within_runtime(criterion_5(), t, None));
    let t = Instant::now();
    let lln = lln_run();
    report(6, "variance rate", within_runtime(criterion_6(&lln), t, None));
    report(7, "law of large numbers", criterion_7(&lln));
    let t = Instant::now();
    report(8, "algebraic identities", within_runtime(criterion_8(), t, Some(SECONDS)));
    let t = Instant::now();
    report(9, "root counts", within_runtime(criterion_9(), t, Some(Duration::from_secs(60))));
    println!("{failed} of 9 criteria failed");
    if failed > 0 {
        std::process::exit(1);
    }
}
