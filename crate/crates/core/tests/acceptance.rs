//! Acceptance gate: one PASS/FAIL line per criterion.
//!
//! Criteria listed in `EXPECTED_RED` are evaluated as stated and reported as
//! FAIL; the run fails if any other criterion fails, or if an expected-red
//! criterion unexpectedly passes.

use std::process::ExitCode;
use std::time::Instant;

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use ratelab::entangling::{
    binary_spectrum, cut_entropy, entangling_rate, evolve, optimize_lambda, AncillaDims,
    AssistedState,
};
use ratelab::linalg::{binary_entropy, operator_norm, shannon_entropy, HermitianOperator};
use ratelab::mixing::{
    ensemble_to_entangling_embedding, ensemble_to_triple, g_bound, max_mixing_rate, mixing_rate,
    sim_binary_bound, Ensemble, EnsembleTriple,
};
use ratelab::random::{self, stream_rng};
use ratelab::solver::{alternate_solve, embezzling_state, figure3_p_grid, SimProblem, SolverConfig, SolveResult};
use ratelab::verify::{g_grid_max, random_feasible_pi, run_suite, Suite, G_GRID_POINTS, G_GRID_Q};

/// λ_opt(1024) = 0.63371 is the true maximizer; the stated asymptotic target
/// (1 + 1/ln d)/2 = 0.57213 is 10.8% away.
const EXPECTED_RED: &[usize] = &[2];

const FD_STEP: f64 = 1e-5;
const FD_TOLERANCE: f64 = 1e3 * FD_STEP;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: String) -> Outcome {
    Outcome { pass, detail }
}

fn timed(limit: Option<f64>, f: impl FnOnce() -> Outcome) -> Outcome {
    let start = Instant::now();
    let mut o = f();
    let secs = start.elapsed().as_secs_f64();
    if let Some(limit) = limit {
        o.pass &= secs < limit;
        o.detail.push_str(&format!("; {secs:.2} s (limit {limit} s)"));
    } else {
        o.detail.push_str(&format!("; {secs:.2} s"));
    }
    o
}

fn rng(tag: u64, i: u64) -> ChaCha8Rng {
    stream_rng(0x00ac_ce97, (tag << 32) | i)
}

fn reference_optimum() -> Outcome {
    let opt = optimize_lambda(2).expect("d = 2 is valid");
    let pass = (0.9158..=0.9178).contains(&opt.lambda) && (1.9113..=1.9133).contains(&opt.gamma);
    outcome(pass, format!("lambda {:.6} in [0.9158, 0.9178], Gamma {:.6} in [1.9113, 1.9133]", opt.lambda, opt.gamma))
}

fn asymptotics() -> Outcome {
    let d = 1024usize;
    let opt = optimize_lambda(d).expect("d = 1024 is valid");
    let lambda_target = 0.5 * (1.0 + 1.0 / (d as f64).ln());
    let lambda_err = (opt.lambda - lambda_target).abs() / lambda_target;
    let s = shannon_entropy(&binary_spectrum(opt.lambda, d));
    let s_target = 0.5 * (d as f64).log2();
    let s_err = (s - s_target).abs() / s_target;
    outcome(
        lambda_err <= 0.05 && s_err <= 0.10,
        format!(
            "lambda {:.6} vs {lambda_target:.6} ({:.1}% <= 5%), S {s:.4} vs {s_target:.4} ({:.1}% <= 10%)",
            opt.lambda,
            100.0 * lambda_err,
            100.0 * s_err
        ),
    )
}

fn rate_derivatives() -> Outcome {
    let mut worst_gamma = 0.0f64;
    for i in 0..100 {
        let mut r = rng(3, i);
        let dims = AncillaDims::bipartite(r.random_range(2..=4), r.random_range(2..=4));
        let psi = AssistedState::new(dims, random::unit_vector(&mut r, dims.total())).unwrap();
        let h = random::unit_norm_hermitian(&mut r, dims.interacting()).unwrap();
        let rate = entangling_rate(&psi, &h).unwrap();
        let fd = (cut_entropy(&evolve(&psi, &h, FD_STEP).unwrap()).unwrap()
            - cut_entropy(&evolve(&psi, &h, -FD_STEP).unwrap()).unwrap())
            / (2.0 * FD_STEP);
        worst_gamma = worst_gamma.max((rate - fd).abs());
    }
    let (mut worst_lambda, mut counted, mut i) = (0.0f64, 0, 0u64);
    while counted < 100 {
        let mut r = rng(30, i);
        i += 1;
        let dim = r.random_range(2..=6);
        let p = r.random_range(0.05..0.95);
        let r0 = r.random_range(1..=dim);
        let r1 = r.random_range(1..=dim);
        let e = Ensemble::new(p, random::density(&mut r, dim, r0).unwrap(), random::density(&mut r, dim, r1).unwrap())
            .unwrap();
        let t = ensemble_to_triple(&e).unwrap();
        if t.restricted_to_support() {
            // rank-deficient average: the entropy is not differentiable at t = 0
            continue;
        }
        let h = random::unit_norm_hermitian(&mut r, dim).unwrap();
        let rate = mixing_rate(&t, &h).unwrap();
        let fd = (e.evolved_average(&h, FD_STEP).unwrap().entropy().unwrap()
            - e.evolved_average(&h, -FD_STEP).unwrap().entropy().unwrap())
            / (2.0 * FD_STEP);
        worst_lambda = worst_lambda.max((rate - fd).abs());
        counted += 1;
    }
    outcome(
        worst_gamma <= FD_TOLERANCE && worst_lambda <= FD_TOLERANCE,
        format!(
            "max |Gamma - FD| {worst_gamma:.2e}, max |Lambda - FD| {worst_lambda:.2e} over 100 + 100 (tolerance {FD_TOLERANCE:.0e})"
        ),
    )
}

fn lemma_suites() -> Outcome {
    let report = run_suite(Suite::Lemmas, 100, 4);
    let wanted = ["holder-commutator", "canonical-reduce", "sie-mu-positivity", "binary-sandwich-identity"];
    let mut pass = true;
    let mut parts = Vec::new();
    for name in wanted {
        match report.checks.iter().find(|c| c.check == name) {
            Some(c) => {
                pass &= c.passed >= 100 && c.failed == 0;
                parts.push(format!("{name} {}/{}", c.passed, c.instances));
            }
            None => {
                pass = false;
                parts.push(format!("{name} missing"));
            }
        }
    }
    outcome(pass, parts.join(", "))
}

fn universal_bound() -> Outcome {
    let (mut worst, mut worst_max) = (0.0f64, 0.0f64);
    for i in 0..500 {
        let mut r = rng(5, i);
        let dim = r.random_range(2..=6);
        let p = r.random_range(0.01..0.99);
        let r0 = r.random_range(1..=dim);
        let r1 = r.random_range(1..=dim);
        let e = Ensemble::new(p, random::density(&mut r, dim, r0).unwrap(), random::density(&mut r, dim, r1).unwrap())
            .unwrap();
        let t = ensemble_to_triple(&e).unwrap();
        let h = random::hermitian(&mut r, dim);
        worst = worst.max(mixing_rate(&t, &h).unwrap() / operator_norm(&h).unwrap());
        worst_max = worst_max.max(max_mixing_rate(&t).unwrap().0);
    }
    outcome(
        worst <= 2.0 && worst_max <= 2.0,
        format!("max Lambda/||H|| {worst:.6}, max over H {worst_max:.6} on 500 ensembles (bound 2)"),
    )
}

fn sim_binary() -> Outcome {
    let (mut violations, mut worst_ratio) = (0, 0.0f64);
    for i in 0..500 {
        let mut r = rng(6, i);
        let dim = r.random_range(2..=12);
        let m = r.random_range(1..dim);
        let rho = random::binary_density(&mut r, dim, m).unwrap();
        let p = r.random_range(0.001..=0.5);
        let pi = random_feasible_pi(&mut r, &rho, p);
        let t = EnsembleTriple::new(p, rho, pi).unwrap();
        let b = sim_binary_bound(&t).unwrap();
        violations += usize::from(b.rate > b.bound);
        worst_ratio = worst_ratio.max(b.rate / binary_entropy(p));
    }
    outcome(
        violations == 0,
        format!("{violations} violations of Lambda <= 6 h2(p) on 500 triples; max Lambda/h2(p) {worst_ratio:.4}"),
    )
}

fn g_grid_bound() -> Outcome {
    let mut pass = true;
    let mut parts = Vec::new();
    for q in G_GRID_Q {
        let max = g_grid_max(q, G_GRID_POINTS).unwrap();
        pass &= max <= g_bound(q);
        parts.push(format!("q {q}: {max:.5} <= {:.5}", g_bound(q)));
    }
    outcome(pass, parts.join(", "))
}

struct SolverRuns {
    results: Vec<(usize, u64, SolveResult)>,
    extra: Vec<SolveResult>,
}

fn solver_runs() -> SolverRuns {
    let mut results = Vec::new();
    for d in [4usize, 8] {
        let rho = embezzling_state(d).unwrap();
        for p in figure3_p_grid(d, 10).unwrap() {
            for seed in [0u64, 1] {
                let config = SolverConfig { master_seed: seed, ..SolverConfig::default() };
                let problem = SimProblem::new(rho.clone(), p).unwrap();
                results.push((d, seed, alternate_solve(&problem, &config).unwrap()));
            }
        }
    }
    let mut extra = Vec::new();
    for i in 0..20 {
        let mut r = rng(8, i);
        let dim = r.random_range(2..=6);
        let rho = random::density(&mut r, dim, dim).unwrap();
        let problem = SimProblem::new(rho, r.random_range(0.02..=0.5)).unwrap();
        let config = SolverConfig { restarts: 16, master_seed: i, ..SolverConfig::default() };
        extra.push(alternate_solve(&problem, &config).unwrap());
    }
    SolverRuns { results, extra }
}

fn duality(runs: &SolverRuns) -> Outcome {
    let all = runs.results.iter().map(|(_, _, r)| r).chain(&runs.extra);
    let (mut gap, mut slack, mut steps, mut failed) = (0.0f64, 0.0f64, 0usize, 0usize);
    for r in all {
        gap = gap.max(r.max_duality_gap);
        slack = slack.max(r.max_slackness);
        steps += r.pi_steps;
        failed += r.restart_failures.len();
    }
    outcome(
        gap <= 1e-6 && slack <= 1e-6 && failed == 0,
        format!("max gap {gap:.2e}, max slackness {slack:.2e} over {steps} Pi-steps; {failed} failed restarts"),
    )
}

fn embezzling_sweep(runs: &SolverRuns) -> Outcome {
    let (mut excess, mut spread, mut rows) = (f64::NEG_INFINITY, 0.0f64, 0);
    for pair in runs.results.chunks(2) {
        let [(_, _, a), (_, _, b)] = pair else { unreachable!() };
        excess = excess.max(a.f_max.max(b.f_max) - binary_entropy(a.p));
        spread = spread.max((a.f_max - b.f_max).abs());
        rows += 1;
    }
    outcome(
        rows == 20 && excess <= 1e-2 && spread <= 1e-2,
        format!("{rows} rows (D 4, 8); max F_max - h2(p) {excess:.4} (<= 1e-2); max seed spread {spread:.2e} (<= 1e-2)"),
    )
}

fn embedding() -> Outcome {
    let mut worst = 0.0f64;
    for i in 0..100 {
        let mut r = rng(10, i);
        let dim = r.random_range(2..=4);
        let p = r.random_range(0.05..0.95);
        let e = Ensemble::new(p, random::density(&mut r, dim, dim).unwrap(), random::density(&mut r, dim, dim).unwrap())
            .unwrap();
        let h = random::hermitian(&mut r, dim);
        let lambda = mixing_rate(&ensemble_to_triple(&e).unwrap(), &h).unwrap();
        let (psi, h_tilde): (AssistedState, HermitianOperator) = ensemble_to_entangling_embedding(&e, &h).unwrap();
        worst = worst.max((entangling_rate(&psi, &h_tilde).unwrap() - lambda).abs());
    }
    outcome(worst <= 1e-8, format!("max |Gamma - Lambda| {worst:.2e} on 100 ensembles (<= 1e-8)"))
}

type Criterion<'a> = (usize, &'static str, Box<dyn Fn() -> Outcome + 'a>);

fn main() -> ExitCode {
    let runs = std::cell::OnceCell::new();
    let criteria: Vec<Criterion> = vec![
        (1, "reference optimum d = 2", Box::new(|| timed(Some(1.0), reference_optimum))),
        (2, "asymptotics d = 1024", Box::new(|| timed(Some(1.0), asymptotics))),
        (3, "rate-derivative consistency", Box::new(|| timed(Some(30.0), rate_derivatives))),
        (4, "lemma suites", Box::new(|| timed(Some(60.0), lemma_suites))),
        (5, "universal bound", Box::new(|| timed(None, universal_bound))),
        (6, "binary-spectrum bound", Box::new(|| timed(None, sim_binary))),
        (7, "g grid", Box::new(|| timed(None, g_grid_bound))),
        (8, "duality", Box::new(|| timed(None, || duality(runs.get_or_init(solver_runs))))),
        (9, "embezzling sweep (runs shared with 8)", Box::new(|| timed(None, || embezzling_sweep(runs.get_or_init(solver_runs))))),
        (10, "cross-module embedding", Box::new(|| timed(None, embedding))),
    ];
    let mut ok = true;
    for (n, name, run) in &criteria {
        let o = run();
        let expected_red = EXPECTED_RED.contains(n);
        let tag = if o.pass { "PASS" } else { "FAIL" };
        let note = if expected_red { " [expected red]" } else { "" };
        println!("{tag} criterion {n:>2} {name}: {}{note}", o.detail);
        ok &= o.pass != expected_red;
    }
    if ok {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
