//! Randomized verification suites.
//!
//! Each check draws its instances from an independent stream
//! `(seed, check_index << 32 | instance)`, so reports do not depend on the
//! thread schedule or on which other checks ran.

use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::entangling::{
    cut_entropy, entangling_rate, evolve, gamma_no_ancilla_max, AncillaDims, AssistedState,
    BipartitePureState,
};
use crate::error::{Error, Result};
use crate::linalg::{binary_entropy, operator_norm, DensityMatrix, HermitianOperator};
use crate::mixing::{
    binary_sandwich_identity, canonical_reduce, check_canonical, ensemble_to_entangling_embedding,
    ensemble_to_triple, g_bound, g_function, holder_commutator_bound, max_mixing_rate,
    mixing_rate, reduced_entangling_expression, sie_reduction, sim_binary_bound, Ensemble,
    EnsembleTriple,
};
use crate::random;
use crate::solver::{
    alternate_solve, dual_shape, lift, maximize_over_pi, objective, SimProblem, SolverConfig,
};
use crate::tolerance::TOL;

/// Step of the central differences used by the rate checks.
pub const FD_STEP: f64 = 1e-5;
/// Agreement required between formula rates and central differences.
pub const FD_TOLERANCE: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Suite {
    Identities,
    Lemmas,
    Bounds,
    Duality,
    All,
}

impl Suite {
    pub const NAMES: [&'static str; 5] = ["identities", "lemmas", "bounds", "duality", "all"];
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self {
            Suite::Identities => "identities",
            Suite::Lemmas => "lemmas",
            Suite::Bounds => "bounds",
            Suite::Duality => "duality",
            Suite::All => "all",
        };
        f.write_str(name)
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "identities" => Ok(Suite::Identities),
            "lemmas" => Ok(Suite::Lemmas),
            "bounds" => Ok(Suite::Bounds),
            "duality" => Ok(Suite::Duality),
            "all" => Ok(Suite::All),
            other => Err(Error::Domain(format!(
                "unknown suite '{other}', expected one of {}",
                Suite::NAMES.join(", ")
            ))),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Failure {
    pub check: String,
    pub instance: usize,
    pub inputs: String,
    pub expected: String,
    pub observed: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct Skip {
    pub check: String,
    pub instance: usize,
    pub reason: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct CheckSummary {
    pub check: String,
    pub instances: usize,
    pub passed: usize,
    pub skipped: usize,
    pub failed: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct VerificationReport {
    pub suite: String,
    pub seed: u64,
    pub instances: usize,
    pub checks: Vec<CheckSummary>,
    pub failures: Vec<Failure>,
    pub skipped: Vec<Skip>,
    /// Kept out of serialized output so reports stay byte-stable.
    #[serde(skip)]
    pub wall_clock_seconds: f64,
}

impl VerificationReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }

    pub fn summary_text(&self) -> String {
        let mut out = format!("suite {} (seed {}, {} instances per check)\n", self.suite, self.seed, self.instances);
        for c in &self.checks {
            out.push_str(&format!(
                "  {:<34} passed {:>5}  skipped {:>4}  failed {:>4}\n",
                c.check, c.passed, c.skipped, c.failed
            ));
        }
        for s in &self.skipped {
            out.push_str(&format!("  skip {}#{}: {}\n", s.check, s.instance, s.reason));
        }
        for f in &self.failures {
            out.push_str(&format!(
                "  FAIL {}#{}: expected {}, observed {} [{}]\n",
                f.check, f.instance, f.expected, f.observed, f.inputs
            ));
        }
        out.push_str(if self.passed() { "result: ok\n" } else { "result: FAILED\n" });
        out
    }
}

enum Verdict {
    Pass,
    Skip(String),
    Fail {
        inputs: String,
        expected: String,
        observed: String,
    },
}

fn at_most(observed: f64, limit: f64, what: &str, inputs: impl FnOnce() -> String) -> Verdict {
    if observed <= limit {
        Verdict::Pass
    } else {
        Verdict::Fail {
            inputs: inputs(),
            expected: format!("{what} <= {limit:.6e}"),
            observed: format!("{observed:.6e}"),
        }
    }
}

type CheckFn = fn(&mut ChaCha8Rng, usize) -> Result<Verdict>;

struct Check {
    name: &'static str,
    run: CheckFn,
    /// Fixed instance count for deterministic checks.
    fixed: Option<usize>,
}

const fn check(name: &'static str, run: CheckFn) -> Check {
    Check {
        name,
        run,
        fixed: None,
    }
}

fn checks_for(suite: Suite) -> Vec<Check> {
    let identities = vec![
        check("mixing-rate-finite-difference", mixing_fd),
        check("entangling-rate-finite-difference", entangling_fd),
        check("transpose-symmetry", transpose_symmetry),
        check("entangling-embedding", embedding),
        check("sie-rate-identity", sie_rate_identity),
        check("objective-cross-check", objective_cross_check),
        check("tensor-lift", tensor_lift),
    ];
    let lemmas = vec![
        check("holder-commutator", holder),
        check("canonical-reduce", canonical),
        check("sie-mu-positivity", sie_positivity),
        check("binary-sandwich-identity", sandwich_identity),
        check("rate-at-most-twice-norm", rate_cap),
        Check {
            name: "g-grid-bound",
            run: g_grid,
            fixed: Some(G_GRID_Q.len()),
        },
        Check {
            name: "binary-entropy-inequality",
            run: entropy_inequality,
            fixed: Some(1),
        },
    ];
    let bounds = vec![
        check("sim-binary-spectrum", sim_binary),
        check("sie-log-dimension", sie_log_dimension),
        check("small-total-mixing", small_total_mixing),
        check("low-weight-rate", low_weight_rate),
    ];
    let duality = vec![
        check("pi-step-duality", pi_step_duality),
        check("dual-shape", dual_shape_check),
        check("alternating-ascent", alternating_ascent),
    ];
    match suite {
        Suite::Identities => identities,
        Suite::Lemmas => lemmas,
        Suite::Bounds => bounds,
        Suite::Duality => duality,
        Suite::All => identities
            .into_iter()
            .chain(lemmas)
            .chain(bounds)
            .chain(duality)
            .collect(),
    }
}

/// Runs every check of `suite` on `instances` random instances each.
pub fn run_suite(suite: Suite, instances: usize, seed: u64) -> VerificationReport {
    let start = Instant::now();
    let mut report = VerificationReport {
        suite: suite.to_string(),
        seed,
        instances,
        checks: Vec::new(),
        failures: Vec::new(),
        skipped: Vec::new(),
        wall_clock_seconds: 0.0,
    };
    for (index, c) in checks_for(suite).iter().enumerate() {
        let count = c.fixed.unwrap_or(instances);
        let stream = stream_base(c.name) ^ ((index as u64) << 48);
        let verdicts: Vec<Verdict> = (0..count)
            .into_par_iter()
            .map(|k| {
                let mut rng = random::stream_rng(seed, stream | k as u64);
                match (c.run)(&mut rng, k) {
                    Ok(v) => v,
                    Err(e) => Verdict::Fail {
                        inputs: format!("instance {k}"),
                        expected: "no numerical error".into(),
                        observed: e.to_string(),
                    },
                }
            })
            .collect();
        let mut summary = CheckSummary {
            check: c.name.into(),
            instances: count,
            passed: 0,
            skipped: 0,
            failed: 0,
        };
        for (k, v) in verdicts.into_iter().enumerate() {
            match v {
                Verdict::Pass => summary.passed += 1,
                Verdict::Skip(reason) => {
                    summary.skipped += 1;
                    report.skipped.push(Skip {
                        check: c.name.into(),
                        instance: k,
                        reason,
                    });
                }
                Verdict::Fail {
                    inputs,
                    expected,
                    observed,
                } => {
                    summary.failed += 1;
                    report.failures.push(Failure {
                        check: c.name.into(),
                        instance: k,
                        inputs,
                        expected,
                        observed,
                    });
                }
            }
        }
        report.checks.push(summary);
    }
    report.wall_clock_seconds = start.elapsed().as_secs_f64();
    report
}

/// Stable per-check stream tag (FNV-1a of the name, upper bits only).
fn stream_base(name: &str) -> u64 {
    let hash = name
        .bytes()
        .fold(0xcbf2_9ce4_8422_2325u64, |h, b| (h ^ b as u64).wrapping_mul(0x100_0000_01b3));
    hash & 0xffff_ffff_0000_0000
}

fn full_rank_ensemble(rng: &mut ChaCha8Rng, dim: usize) -> Result<Ensemble> {
    let p = rng.random_range(0.05..0.95);
    Ensemble::new(p, random::density(rng, dim, dim)?, random::density(rng, dim, dim)?)
}

/// Random ensemble whose members have random ranks; the average may be
/// rank deficient.
fn ranked_ensemble(rng: &mut ChaCha8Rng, dim: usize) -> Result<Ensemble> {
    let p = rng.random_range(0.05..0.95);
    let r0 = rng.random_range(1..=dim);
    let r1 = rng.random_range(1..=dim);
    Ensemble::new(p, random::density(rng, dim, r0)?, random::density(rng, dim, r1)?)
}

/// Random triple with `p = Tr(Pi rho)` and full-rank `rho`.
fn random_triple(rng: &mut ChaCha8Rng, dim: usize) -> Result<EnsembleTriple> {
    let rho = random::density(rng, dim, dim)?;
    let pi = random::contraction(rng, dim);
    let p = pi.trace_product(rho.op()).clamp(0.0, 1.0);
    EnsembleTriple::new(p, rho, pi)
}

fn describe_ensemble(e: &Ensemble) -> String {
    format!("dim {}, p {:.6}", e.dim(), e.p)
}

fn mixing_fd(rng: &mut ChaCha8Rng, _k: usize) -> Result<Verdict> {
    let dim = rng.random_range(2..=6);
    let e = ranked_ensemble(rng, dim)?;
    let triple = ensemble_to_triple(&e)?;
    if triple.restricted_to_support() {
        return Ok(Verdict::Skip(format!(
            "average state has rank {} < {dim}; the rate is not differentiable there",
            triple.functions().support.rank
        )));
    }
    let h = random::unit_norm_hermitian(rng, dim)?;
    let rate = mixing_rate(&triple, &h)?;
    let fd = (e.evolved_average(&h, FD_STEP)?.entropy()? - e.evolved_average(&h, -FD_STEP)?.entropy()?)
        / (2.0 * FD_STEP);
    Ok(at_most((rate - fd).abs(), FD_TOLERANCE, "|rate - finite difference|", || {
        describe_ensemble(&e)
    }))
}

fn random_assisted(rng: &mut ChaCha8Rng, dims: AncillaDims) -> Result<AssistedState> {
    let v = random::unit_vector(rng, dims.total());
    AssistedState::new(dims, v)
}

fn entangling_fd(rng: &mut ChaCha8Rng, _k: usize) -> Result<Verdict> {
    let dims = AncillaDims {
        a: rng.random_range(1..=2),
        alice: rng.random_range(2..=3),
        bob: rng.random_range(2..=3),
        b: rng.random_range(1..=2),
    };
    let psi = random_assisted(rng, dims)?;
    let h = random::unit_norm_hermitian(rng, dims.interacting())?;
    let rate = entangling_rate(&psi, &h)?;
    let fd = (cut_entropy(&evolve(&psi, &h, FD_STEP)?)? - cut_entropy(&evolve(&psi, &h, -FD_STEP)?)?)
        / (2.0 * FD_STEP);
    Ok(at_most((rate - fd).abs(), FD_TOLERANCE, "|rate - finite difference|", || {
        format!("{dims:?}")
    }))
}

fn transpose_symmetry(rng: &mut ChaCha8Rng, _k: usize) -> Result<Verdict> {
    let dim = rng.random_range(2..=6);
    let e = full_rank_ensemble(rng, dim)?;
    let h = random::hermitian(rng, dim);
    let forward = mixing_rate(&ensemble_to_triple(&e)?, &h)?;
    let backward = mixing_rate(&ensemble_to_triple(&e.transposed())?, &h.scale(-1.0))?;
    Ok(at_most((forward - backward).abs(), 1e-10, "|rate - transposed rate|", || {
        describe_ensemble(&e)
    }))
}

fn embedding(rng: &mut ChaCha8Rng, _k: usize) -> Result<Verdict> {
    let dim = rng.random_range(2..=4);
    let e = full_rank_ensemble(rng, dim)?;
    let h = random::hermitian(rng, dim);
    let lambda = mixing_rate(&ensemble_to_triple(&e)?, &h)?;
    let (psi, h_tilde) = ensemble_to_entangling_embedding(&e, &h)?;
    let gamma = entangling_rate(&psi, &h_tilde)?;
    Ok(at_most((gamma - lambda).abs(), 1e-8, "|Gamma - Lambda|", || describe_ensemble(&e)))
}

fn sie_rate_identity(rng: &mut ChaCha8Rng, _k: usize) -> Result<Verdict> {
    let (da, db) = (rng.random_range(2..=3), rng.random_range(2..=3));
    let rho = random::density(rng, da * db, da * db)?;
    let h = random::hermitian(rng, da * db);
    let red = sie_reduction(&rho, (da, db))?;
    let lhs = mixing_rate(&red.triple, &h)?;
    let rhs = reduced_entangling_expression(&rho, (da, db), &h)? / (db * db) as f64;
    Ok(at_most((lhs - rhs).abs(), 1e-9, "|Lambda - B^-2 Gamma-expression|", || {
        format!("A {da}, B {db}")
    }))
}

fn objective_cross_check(rng: &mut ChaCha8Rng, _k: usize) -> Result<Verdict> {
    let dim = rng.random_range(2..=5);
    let t = random_triple(rng, dim)?;
    let k = random::contraction(rng, dim);
    let h = k.scale(2.0).sub(&HermitianOperator::identity(dim));
    let f = objective(&k, t.pi(), t.rho())?;
    let lambda = mixing_rate(&t, &h)?;
    Ok(at_most((f - lambda).abs(), 1e-9, "|F(K, Pi) - Lambda(2K - I)|", || {
        format!("dim {dim}, p {:.6}", t.p())
    }))
}

fn tensor_lift(rng: &mut ChaCha8Rng, _k: usize) -> Result<Verdict> {
    let dim = rng.random_range(2..=4);
    let d = rng.random_range(2..=3);
    let t = random_triple(rng, dim)?;
    let h = random::hermitian(rng, dim);
    let base = mixing_rate(&t, &h)?;
    let (rho, pi) = lift(t.rho(), d, t.pi())?;
    let lifted = EnsembleTriple::new(t.p(), rho, pi)?;
    let lifted_rate = mixing_rate(&lifted, &HermitianOperator::identity(d).kron(&h))?;
    Ok(at_most((base - lifted_rate).abs(), 1e-9, "|base - lifted rate|", || {
        format!("dim {dim}, D {d}")
    }))
}

fn holder(rng: &mut ChaCha8Rng, _k: usize) -> Result<Verdict> {
    let dim = rng.random_range(2..=8);
    let pi = random::contraction(rng, dim);
    let rank = rng.random_range(1..dim);
    let r = random::projector(rng, dim, rank);
    let (lhs, rhs) = holder_commutator_bound(&pi, &r)?;
    Ok(at_most(lhs - rhs, 1e-9, "||[Pi,R]||_1 - bound", || format!("dim {dim}")))
}

fn canonical(rng: &mut ChaCha8Rng, k: usize) -> Result<Verdict> {
    let dim = rng.random_range(2..=10);
    let pi = if k.is_multiple_of(2) {
        let rank = rng.random_range(1..=dim / 2);
        random::projector(rng, dim, rank)
    } else {
        random::contraction(rng, dim)
    };
    let rank = rng.random_range(1..dim);
    let r = random::projector(rng, dim, rank);
    let reduced = canonical_reduce(&pi, &r)?;
    let c = check_canonical(&pi, &reduced, &r)?;
    if c.holds(1e-8) {
        Ok(Verdict::Pass)
    } else {
        Ok(Verdict::Fail {
            inputs: format!("dim {dim}, rank R {:.0}", r.trace()),
            expected: "conditions (i)-(iii) within 1e-8".into(),
            observed: format!("{c:?}"),
        })
    }
}

fn sie_positivity(rng: &mut ChaCha8Rng, _k: usize) -> Result<Verdict> {
    let (da, db) = (rng.random_range(2..=3), rng.random_range(2..=4));
    let rank = rng.random_range(1..=da * db);
    let rho = random::density(rng, da * db, rank)?;
    let red = sie_reduction(&rho, (da, db))?;
    Ok(at_most(-red.mu_min_eigenvalue, 1e-9, "-lambda_min(mu)", || {
        format!("A {da}, B {db}, rank {rank}")
    }))
}

fn sandwich_identity(rng: &mut ChaCha8Rng, _k: usize) -> Result<Verdict> {
    let dim = rng.random_range(2..=12);
    let m = rng.random_range(1..dim);
    let rho = random::binary_density(rng, dim, m)?;
    let pi = random::contraction(rng, dim);
    let p = pi.trace_product(rho.op()).clamp(0.0, 1.0);
    let t = EnsembleTriple::new(p, rho, pi)?;
    let (lhs, rhs) = binary_sandwich_identity(&t)?;
    let gap = operator_norm(&lhs.sub(&rhs))?;
    Ok(at_most(gap, 1e-9, "||lhs - rhs||", || format!("dim {dim}, m {m}")))
}

fn rate_cap(rng: &mut ChaCha8Rng, _k: usize) -> Result<Verdict> {
    let dim = rng.random_range(2..=6);
    let e = full_rank_ensemble(rng, dim)?;
    let h = random::hermitian(rng, dim);
    let ratio = mixing_rate(&ensemble_to_triple(&e)?, &h)? / operator_norm(&h)?;
    Ok(at_most(ratio, 2.0, "Lambda / ||H||", || describe_ensemble(&e)))
}

pub const G_GRID_Q: [f64; 4] = [0.5, 0.25, 0.1, 0.01];
pub const G_GRID_POINTS: usize = 1000;

/// Maximum of `g` over a `points x points` grid on `x2 in [0, q]`, `x1 in [q, 1]`.
pub fn g_grid_max(q: f64, points: usize) -> Result<f64> {
    let mut best = 0.0f64;
    for i in 0..points {
        let x2 = q * i as f64 / (points - 1) as f64;
        for j in 0..points {
            let x1 = q + (1.0 - q) * j as f64 / (points - 1) as f64;
            if x1 > x2 {
                best = best.max(g_function(x1, x2, q)?);
            }
        }
    }
    Ok(best)
}

fn g_grid(_rng: &mut ChaCha8Rng, k: usize) -> Result<Verdict> {
    let q = G_GRID_Q[k];
    let max = g_grid_max(q, G_GRID_POINTS)?;
    Ok(at_most(max, g_bound(q), "max g", || format!("q {q}")))
}

fn entropy_inequality(_rng: &mut ChaCha8Rng, _k: usize) -> Result<Verdict> {
    let n = 10_000;
    let worst = (1..=n)
        .map(|i| {
            let x = 0.5 * i as f64 / n as f64;
            binary_entropy(x) - 2.0 * x * x.log2().abs()
        })
        .fold(f64::NEG_INFINITY, f64::max);
    Ok(at_most(worst, 1e-12, "max h2(x) - 2x|log2 x|", || "grid on (0, 1/2]".into()))
}

fn sim_binary(rng: &mut ChaCha8Rng, _k: usize) -> Result<Verdict> {
    let dim = rng.random_range(2..=12);
    let m = rng.random_range(1..dim);
    let rho = random::binary_density(rng, dim, m)?;
    let pi = random::contraction(rng, dim);
    let p = pi.trace_product(rho.op()).clamp(0.0, 1.0);
    let t = EnsembleTriple::new(p, rho, pi)?;
    let b = sim_binary_bound(&t)?;
    let inputs = || format!("dim {dim}, m {m}, p {p:.6}");
    match at_most(b.rate - b.bound, 1e-12, "Lambda - 6 h2(p)", inputs) {
        Verdict::Pass => Ok(at_most(b.rate, 2.0, "Lambda", inputs)),
        fail => Ok(fail),
    }
}

fn sie_log_dimension(rng: &mut ChaCha8Rng, _k: usize) -> Result<Verdict> {
    let (da, db) = (rng.random_range(2..=4), rng.random_range(2..=4));
    let psi = BipartitePureState::normalized((da, db), random::gaussian_vector(rng, da * db))?;
    let h = random::unit_norm_hermitian(rng, da * db)?;
    let d = da.min(db) as f64;
    let limit = 2.0 * d.log2();
    let gamma = crate::entangling::entangling_rate_bipartite(&psi, &h)?;
    let (gamma_max, _) = gamma_no_ancilla_max(&psi)?;
    Ok(at_most(gamma.max(gamma_max), limit, "Gamma", || format!("A {da}, B {db}")))
}

fn small_total_mixing(rng: &mut ChaCha8Rng, _k: usize) -> Result<Verdict> {
    let dim = rng.random_range(2..=6);
    let e = ranked_ensemble(rng, dim)?;
    let h = random::hermitian(rng, dim);
    let t = rng.random_range(0.0..10.0);
    let s = e.evolved_average(&h, t)?.entropy()?;
    let mean = e.mean_entropy()?;
    let excess = (mean - s).max(s - mean - binary_entropy(e.p));
    Ok(at_most(excess, 1e-9, "distance outside [S, S + h2(p)]", || {
        format!("{}, t {t:.4}", describe_ensemble(&e))
    }))
}

fn low_weight_rate(rng: &mut ChaCha8Rng, _k: usize) -> Result<Verdict> {
    let dim = rng.random_range(2..=5);
    let rho = random::density(rng, dim, dim)?;
    let lmin = rho.op().spectrum()?.min();
    let pi0 = random::contraction(rng, dim);
    let target = lmin * rng.random_range(0.01..0.99);
    let pi = pi0.scale(target / pi0.trace_product(rho.op()));
    let p = pi.trace_product(rho.op());
    let t = EnsembleTriple::new(p, rho, pi)?;
    let (rate, _) = max_mixing_rate(&t)?;
    Ok(at_most(rate, 2.0 * p * p.log2().abs() + 1e-12, "Lambda", || {
        format!("dim {dim}, p {p:.3e}, lambda_min {lmin:.3e}")
    }))
}

fn random_problem(rng: &mut ChaCha8Rng, max_dim: usize) -> Result<SimProblem> {
    let dim = rng.random_range(2..=max_dim);
    let rho = random::density(rng, dim, dim)?;
    SimProblem::new(rho, rng.random_range(0.02..=0.5))
}

/// Feasible `Pi` with `Tr(Pi rho) = p` built from a random contraction.
pub fn random_feasible_pi(rng: &mut impl Rng, rho: &DensityMatrix, p: f64) -> HermitianOperator {
    let n = rho.dim();
    let c = random::contraction(rng, n);
    let w = c.trace_product(rho.op());
    if w >= p {
        c.scale(p / w)
    } else {
        let id = HermitianOperator::identity(n);
        id.sub(&id.sub(&c).scale((1.0 - p) / (1.0 - w)))
    }
}

fn pi_step_duality(rng: &mut ChaCha8Rng, _k: usize) -> Result<Verdict> {
    let problem = random_problem(rng, 5)?;
    let k = random::contraction(rng, problem.dim());
    let step = maximize_over_pi(&k, &problem, &SolverConfig::default())?;
    let inputs = || format!("dim {}, p {:.6}", problem.dim(), problem.p());
    let weight_error = (step.pi.trace_product(problem.rho().op()) - problem.p()).abs();
    let spec = step.pi.spectrum()?;
    let x = problem.x_operator(&k)?;
    let rival = random_feasible_pi(rng, problem.rho(), problem.p()).trace_product(&x);
    let checks = [
        (step.duality_gap, TOL.duality_gap, "|Tr(X Pi) - lambda0|"),
        (step.slackness_positive, TOL.duality_gap, "Tr((I - Pi) A)"),
        (step.slackness_negative, TOL.duality_gap, "Tr(Pi B)"),
        (weight_error, TOL.pi_constraint, "|Tr(Pi rho) - p|"),
        (-spec.min(), TOL.pi_constraint, "-lambda_min(Pi)"),
        (spec.max() - 1.0, TOL.pi_constraint, "lambda_max(Pi) - 1"),
        (rival - step.value, TOL.ascent_slack, "feasible rival - Tr(X Pi)"),
    ];
    for (observed, limit, what) in checks {
        if let v @ Verdict::Fail { .. } = at_most(observed, limit, what, inputs) {
            return Ok(v);
        }
    }
    Ok(Verdict::Pass)
}

fn dual_shape_check(rng: &mut ChaCha8Rng, _k: usize) -> Result<Verdict> {
    let problem = random_problem(rng, 5)?;
    let k = random::contraction(rng, problem.dim());
    let x = problem.x_operator(&k)?;
    let shape = dual_shape(&problem, &x, 64)?;
    let p = problem.p();
    let inputs = || format!("dim {}, p {p:.6}", problem.dim());
    let checks = [
        (-shape.min_second_difference, 1e-8, "-second difference"),
        ((shape.left_slope + 1.0 - p).abs(), 1e-6, "|left slope + (1 - p)|"),
        ((shape.right_slope - p).abs(), 1e-6, "|right slope - p|"),
    ];
    for (observed, limit, what) in checks {
        if let v @ Verdict::Fail { .. } = at_most(observed, limit, what, inputs) {
            return Ok(v);
        }
    }
    Ok(Verdict::Pass)
}

fn alternating_ascent(rng: &mut ChaCha8Rng, _k: usize) -> Result<Verdict> {
    let problem = random_problem(rng, 4)?;
    let config = SolverConfig {
        inner_iterations: 8,
        restarts: 2,
        master_seed: rng.random(),
        ..SolverConfig::default()
    };
    let r = alternate_solve(&problem, &config)?;
    let inputs = || format!("dim {}, p {:.6}", problem.dim(), problem.p());
    let checks = [
        (r.max_descent, TOL.ascent_slack, "objective decrease"),
        (r.max_duality_gap, TOL.duality_gap, "duality gap"),
        (r.max_slackness, TOL.duality_gap, "slackness"),
        (r.f_max, 2.0, "F_max"),
    ];
    for (observed, limit, what) in checks {
        if let v @ Verdict::Fail { .. } = at_most(observed, limit, what, inputs) {
            return Ok(v);
        }
    }
    Ok(Verdict::Pass)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn suite_names_round_trip() {
        for name in Suite::NAMES {
            assert_eq!(name.parse::<Suite>().unwrap().to_string(), name);
        }
        assert!("everything".parse::<Suite>().is_err());
    }

    #[test]
    fn feasible_pi_meets_constraint() {
        let mut rng = random::stream_rng(9, 0);
        let rho = random::density(&mut rng, 4, 4).unwrap();
        for p in [0.05, 0.3, 0.5] {
            let pi = random_feasible_pi(&mut rng, &rho, p);
            assert!((pi.trace_product(rho.op()) - p).abs() < 1e-12);
            let s = pi.spectrum().unwrap();
            assert!(s.min() > -1e-12 && s.max() < 1.0 + 1e-12);
        }
    }

    #[test]
    fn small_run_of_every_suite() {
        let report = run_suite(Suite::All, 3, 11);
        assert!(report.passed(), "{}", report.summary_text());
        assert_eq!(report.checks.len(), 21);
    }
}
