//! Alternating maximization of the mixing rate over ensembles with a fixed
//! average state.
//!
//! With `H = 2K - I` the rate of the triple `(p, rho, Pi)` becomes
//! `F(K, Pi) = Tr(Pi X) = Tr(K Z)`, where
//! `X = 2i rho^{1/2}[K, log2 rho]rho^{1/2}` and
//! `Z = -2i rho^{1/2}[Pi, log2 rho]rho^{1/2}`. For fixed `Pi` the best `K` is
//! the positive spectral projector of `Z`. For fixed `K` the best `Pi` under
//! `Tr(Pi rho) = p` comes from the one-dimensional dual
//! `f(lambda) = lambda (p - 1/2) + ||X - lambda rho||_1 / 2`: its minimizer
//! `lambda0` gives `Pi = P+ + x P0` with `P+`, `P0` the positive and null
//! spectral projectors of `X - lambda0 rho`.

use rand::Rng;
use rayon::prelude::*;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::linalg::{binary_entropy, operator_norm, DensityMatrix, HermitianOperator, Spectrum};
use crate::matrix_io::MatrixFile;
use crate::mixing::StateFunctions;
use crate::optimize::{central_slope, convex_bracket, GoldenSection};
use crate::random;
use crate::tolerance::TOL;

/// Average state and target weight of the maximization.
#[derive(Debug, Clone)]
pub struct SimProblem {
    rho: DensityMatrix,
    p: f64,
    functions: StateFunctions,
}

impl SimProblem {
    /// Needs `0 < p <= 1/2` and a full-rank `rho`.
    pub fn new(rho: DensityMatrix, p: f64) -> Result<Self> {
        if !(p > 0.0 && p <= 0.5) {
            return Err(Error::Domain(format!("p must lie in (0, 1/2], got {p}")));
        }
        let functions = StateFunctions::new(&rho)?;
        if !functions.support.is_full_rank() {
            return Err(Error::Domain(format!(
                "average state has rank {} < {}",
                functions.support.rank,
                rho.dim()
            )));
        }
        Ok(Self { rho, p, functions })
    }

    pub fn rho(&self) -> &DensityMatrix {
        &self.rho
    }

    pub fn p(&self) -> f64 {
        self.p
    }

    pub fn dim(&self) -> usize {
        self.rho.dim()
    }

    /// True when `p` is below the smallest eigenvalue of `rho`.
    pub fn p_below_spectrum(&self) -> bool {
        self.p < self.functions.eigenvalues[0]
    }

    /// `X = 2i rho^{1/2}[K, log2 rho]rho^{1/2}`.
    pub fn x_operator(&self, k: &HermitianOperator) -> Result<HermitianOperator> {
        Ok(self.functions.sandwiched_commutator(k)?.scale(-2.0))
    }

    /// `Z = -2i rho^{1/2}[Pi, log2 rho]rho^{1/2}`.
    pub fn z_operator(&self, pi: &HermitianOperator) -> Result<HermitianOperator> {
        Ok(self.functions.sandwiched_commutator(pi)?.scale(2.0))
    }

    /// `F(K, Pi) = Tr(Pi X)`.
    pub fn value(&self, k: &HermitianOperator, pi: &HermitianOperator) -> Result<f64> {
        Ok(pi.trace_product(&self.x_operator(k)?))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SolverConfig {
    /// Alternating (Pi, K) rounds per restart.
    pub inner_iterations: usize,
    pub restarts: usize,
    pub master_seed: u64,
    /// Width at which the golden-section search on the dual stops.
    pub lambda_tolerance: f64,
    /// Eigenvalues of `X - lambda rho` this small (relative) count as zero.
    pub zero_eigenspace_tolerance: f64,
    /// When set, a restart stops early once a full round improves the
    /// value by no more than this.
    pub stall_tolerance: Option<f64>,
}

impl Default for SolverConfig {
    fn default() -> Self {
        Self {
            inner_iterations: 32,
            restarts: 128,
            master_seed: 0,
            lambda_tolerance: 1e-9,
            zero_eigenspace_tolerance: 1e-8,
            stall_tolerance: None,
        }
    }
}

impl SolverConfig {
    pub fn validate(&self) -> Result<()> {
        if self.inner_iterations == 0 || self.restarts == 0 {
            return Err(Error::Domain("iterations and restarts must be >= 1".into()));
        }
        if !(self.lambda_tolerance > 0.0 && self.zero_eigenspace_tolerance > 0.0) {
            return Err(Error::Domain("solver tolerances must be positive".into()));
        }
        Ok(())
    }
}

fn check_contraction(name: &str, a: &HermitianOperator) -> Result<()> {
    let spec = a.spectrum()?;
    let tol = TOL.pi_constraint;
    if spec.min() < -tol || spec.max() > 1.0 + tol {
        return Err(Error::Inadmissible(format!(
            "{name} eigenvalues span [{:.3e}, {:.12}]",
            spec.min(),
            spec.max()
        )));
    }
    Ok(())
}

/// `F(K, Pi)` for explicit operators; both must be contractions.
pub fn objective(k: &HermitianOperator, pi: &HermitianOperator, rho: &DensityMatrix) -> Result<f64> {
    check_contraction("K", k)?;
    check_contraction("Pi", pi)?;
    let functions = StateFunctions::new(rho)?;
    let x = functions.sandwiched_commutator(k)?.scale(-2.0);
    Ok(pi.trace_product(&x))
}

#[derive(Debug, Clone)]
pub struct KStep {
    pub k: HermitianOperator,
    /// `||Z||_1 / 2`.
    pub value: f64,
}

fn k_step(z: &HermitianOperator) -> Result<KStep> {
    let trace = z.trace();
    let scale = z.max_abs_entry().max(1.0);
    if trace.abs() > TOL.traceless * scale {
        return Err(Error::InvariantViolation(format!("Tr Z = {trace:.3e}, expected 0")));
    }
    let spec = z.spectrum()?;
    let value = 0.5 * spec.values.iter().map(|v| v.abs()).sum::<f64>();
    Ok(KStep {
        k: spec.projector(|v| v > 0.0),
        value,
    })
}

/// Best `K` for fixed `Pi`.
pub fn maximize_over_k(pi: &HermitianOperator, rho: &DensityMatrix) -> Result<KStep> {
    let functions = StateFunctions::new(rho)?;
    k_step(&functions.sandwiched_commutator(pi)?.scale(2.0))
}

fn eigenvalues(m: &HermitianOperator) -> Vec<f64> {
    m.matrix().clone().symmetric_eigenvalues().iter().copied().collect()
}

fn dual_value(x: &HermitianOperator, rho: &HermitianOperator, p: f64, lambda: f64) -> f64 {
    let m = x.sub(&rho.scale(lambda));
    let norm: f64 = eigenvalues(&m).iter().map(|v| v.abs()).sum();
    lambda * (p - 0.5) + 0.5 * norm
}

/// `f(lambda) = lambda (p - 1/2) + ||X - lambda rho||_1 / 2`.
pub fn dual_objective(x: &HermitianOperator, rho: &DensityMatrix, p: f64, lambda: f64) -> Result<f64> {
    if x.dim() != rho.dim() {
        return Err(Error::DimensionMismatch {
            expected: rho.dim(),
            found: x.dim(),
        });
    }
    Ok(dual_value(x, rho.op(), p, lambda))
}

/// Result of the exact maximization over `Pi` for fixed `K`.
#[derive(Debug, Clone)]
pub struct PiStep {
    pub pi: HermitianOperator,
    /// `Tr(X Pi)`.
    pub value: f64,
    /// Smallest dual value found.
    pub lambda0: f64,
    /// Multiplier at which `Pi` was built.
    pub lambda_star: f64,
    /// `|Tr(X Pi) - lambda0|`.
    pub duality_gap: f64,
    /// `Tr((I - Pi) A)` with `A` the positive part of `X - lambda rho`.
    pub slackness_positive: f64,
    /// `Tr(Pi B)` with `B` the negative part of `X - lambda rho`.
    pub slackness_negative: f64,
    /// True when the golden-section multiplier had to be refined by bisection.
    pub used_bisection: bool,
}

/// Spectral split of `X - lambda rho` into positive and null parts.
struct Split {
    lambda: f64,
    spec: Spectrum,
    zero_threshold: f64,
    /// `<v_k| rho |v_k>` for each eigenvector.
    weights: Vec<f64>,
    positive_weight: f64,
    null_weight: f64,
}

impl Split {
    fn new(
        x: &HermitianOperator,
        rho: &HermitianOperator,
        lambda: f64,
        base_scale: f64,
        zero_tolerance: f64,
    ) -> Result<Self> {
        let m = x.sub(&rho.scale(lambda));
        let spec = m.spectrum()?;
        let scale = base_scale.max(spec.max().abs()).max(spec.min().abs());
        let zero_threshold = zero_tolerance * scale;
        let weights: Vec<f64> = (0..spec.dim())
            .map(|k| {
                let u = spec.vector(k);
                (u.adjoint() * rho.matrix() * &u)[(0, 0)].re
            })
            .collect();
        let mut positive_weight = 0.0;
        let mut null_weight = 0.0;
        for (&v, &w) in spec.values.iter().zip(&weights) {
            if v > zero_threshold {
                positive_weight += w;
            } else if v >= -zero_threshold {
                null_weight += w;
            }
        }
        Ok(Self {
            lambda,
            spec,
            zero_threshold,
            weights,
            positive_weight,
            null_weight,
        })
    }

    /// `P+` plus a partial filling of `P0` meeting `Tr(Pi rho) = p`, if the
    /// split allows it. The null band is filled in order of decreasing
    /// `mu_k / <v_k|rho|v_k>`; for an exactly null band this is `P+ + x P0`.
    fn pi_for(&self, p: f64, tol: f64) -> Option<HermitianOperator> {
        let a = self.positive_weight;
        if p < a - tol || p > a + self.null_weight + tol {
            return None;
        }
        let t = self.zero_threshold;
        let values = &self.spec.values;
        let mut fill: Vec<f64> = values.iter().map(|&v| if v > t { 1.0 } else { 0.0 }).collect();
        let mut band: Vec<usize> = (0..values.len()).filter(|&k| values[k].abs() <= t).collect();
        band.sort_by(|&i, &j| {
            let ri = values[i] / self.weights[i].max(f64::MIN_POSITIVE);
            let rj = values[j] / self.weights[j].max(f64::MIN_POSITIVE);
            rj.total_cmp(&ri)
        });
        let mut remaining = (p - a).max(0.0);
        // an empty band cannot absorb any shortfall; the caller's tolerance covers it
        for k in band {
            if remaining <= 0.0 {
                break;
            }
            let w = self.weights[k];
            let x = if w > 0.0 { (remaining / w).min(1.0) } else { 0.0 };
            fill[k] = x;
            remaining -= x * w;
        }
        Some(self.spec.map_indexed(|k, _| fill[k]))
    }
}

/// A split is accepted without refinement only if it meets the weight
/// constraint this tightly.
const STRADDLE_TOLERANCE: f64 = 1e-12;

/// Tr(P+(lambda) rho) is nonincreasing in lambda: bracket the crossing of
/// `p` next to `start`, then bisect. Returns the split that produced Pi.
fn refine_split(
    split_at: &impl Fn(f64) -> Result<Split>,
    start: Split,
    p: f64,
    lo: f64,
    hi: f64,
    lambda_tolerance: f64,
) -> Result<(Split, Option<HermitianOperator>)> {
    let too_small = |s: &Split| s.positive_weight > p;
    let origin = start.lambda;
    let direction = if too_small(&start) { 1.0 } else { -1.0 };
    let mut step = lambda_tolerance.max(1e-12 * origin.abs());
    let mut inner = origin;
    let outer;
    loop {
        let candidate = (origin + direction * step).clamp(lo, hi);
        let s = split_at(candidate)?;
        if let Some(pi) = s.pi_for(p, STRADDLE_TOLERANCE) {
            return Ok((s, Some(pi)));
        }
        if too_small(&s) != too_small(&start) || candidate == lo || candidate == hi {
            outer = candidate;
            break;
        }
        inner = candidate;
        step *= 2.0;
    }
    let (mut a, mut b) = if direction > 0.0 { (inner, outer) } else { (outer, inner) };
    let mut best = start;
    for _ in 0..200 {
        if b - a <= f64::EPSILON * a.abs().max(b.abs()).max(1.0) {
            break;
        }
        let mid = 0.5 * (a + b);
        let s = split_at(mid)?;
        if let Some(pi) = s.pi_for(p, STRADDLE_TOLERANCE) {
            return Ok((s, Some(pi)));
        }
        if too_small(&s) {
            a = mid;
        } else {
            b = mid;
        }
        best = s;
    }
    let pi = best.pi_for(p, TOL.pi_constraint);
    Ok((best, pi))
}

fn pi_step(problem: &SimProblem, x: &HermitianOperator, config: &SolverConfig) -> Result<PiStep> {
    let rho = problem.rho.op();
    let p = problem.p;
    let rho_norm = problem.functions.eigenvalues.last().copied().unwrap_or(1.0);
    let x_norm = operator_norm(x)?;
    let base_scale = x_norm.max(rho_norm);
    let f = |lambda: f64| dual_value(x, rho, p, lambda);

    let initial = (x_norm / rho_norm).max(1e-6);
    let (lo, hi) = convex_bracket(f, initial, 80).ok_or_else(|| {
        Error::Solver(format!(
            "dual bracket did not close: ||X|| = {x_norm:.3e}, p = {p}, initial step {initial:.3e}"
        ))
    })?;
    let pad = 1e-3 * (hi - lo);
    let (lo, hi) = (lo - pad, hi + pad);
    let golden = GoldenSection::new(config.lambda_tolerance).minimize(f, lo, hi);
    let mut lambda0 = golden.value;

    let split_at =
        |lambda: f64| Split::new(x, rho, lambda, base_scale, config.zero_eigenspace_tolerance);
    let golden_split = split_at(golden.x)?;
    let mut refined = false;
    let (split, pi) = match golden_split.pi_for(p, STRADDLE_TOLERANCE) {
        Some(pi) => (golden_split, Some(pi)),
        None => {
            refined = true;
            let (split, pi) = refine_split(&split_at, golden_split, p, lo, hi, config.lambda_tolerance)?;
            lambda0 = lambda0.min(f(split.lambda));
            (split, pi)
        }
    };
    let pi = pi.ok_or_else(|| {
        Error::Solver(format!(
            "no multiplier meets Tr(Pi rho) = {p}: bracket [{lo:.6e}, {hi:.6e}], \
             Tr(P+ rho) = {:.9}, Tr(P0 rho) = {:.3e}",
            split.positive_weight, split.null_weight
        ))
    })?;

    let weight = pi.trace_product(rho);
    if (weight - p).abs() > TOL.pi_constraint {
        return Err(Error::InvariantViolation(format!("Tr(Pi rho) = {weight}, p = {p}")));
    }
    let value = pi.trace_product(x);
    let positive = split.spec.map(|v| v.max(0.0));
    let negative = split.spec.map(|v| (-v).max(0.0));
    let slackness_positive = (positive.trace() - pi.trace_product(&positive)).abs();
    let slackness_negative = pi.trace_product(&negative).abs();
    Ok(PiStep {
        value,
        lambda0,
        lambda_star: split.lambda,
        duality_gap: (value - lambda0).abs(),
        slackness_positive,
        slackness_negative,
        used_bisection: refined,
        pi,
    })
}

/// Best `Pi` for fixed `K` under `Tr(Pi rho) = p`.
pub fn maximize_over_pi(k: &HermitianOperator, problem: &SimProblem, config: &SolverConfig) -> Result<PiStep> {
    let x = problem.x_operator(k)?;
    pi_step(problem, &x, config)
}

/// Sampled shape of the dual around its minimizer.
#[derive(Debug, Clone, Copy)]
pub struct DualShape {
    /// Smallest second difference over the sampled bracket.
    pub min_second_difference: f64,
    /// Slope far to the left; should equal `-(1 - p)`.
    pub left_slope: f64,
    /// Slope far to the right; should equal `p`.
    pub right_slope: f64,
}

/// Samples `f` for convexity and checks its asymptotic slopes, which are
/// reached once `|lambda|` exceeds `||X|| / lambda_min(rho)`.
pub fn dual_shape(problem: &SimProblem, x: &HermitianOperator, samples: usize) -> Result<DualShape> {
    let rho = problem.rho.op();
    let p = problem.p;
    let mut f = |lambda: f64| dual_value(x, rho, p, lambda);
    let reach = 2.0 * operator_norm(x)? / problem.functions.eigenvalues[0] + 1.0;
    let samples = samples.max(3);
    let step = 2.0 * reach / (samples - 1) as f64;
    let values: Vec<f64> = (0..samples).map(|k| f(-reach + step * k as f64)).collect();
    let min_second_difference = values
        .windows(3)
        .map(|w| w[0] - 2.0 * w[1] + w[2])
        .fold(f64::INFINITY, f64::min);
    Ok(DualShape {
        min_second_difference,
        left_slope: central_slope(&mut f, -2.0 * reach, 1e-3 * reach),
        right_slope: central_slope(&mut f, 2.0 * reach, 1e-3 * reach),
    })
}

#[derive(Debug, Clone)]
struct RestartOutcome {
    value: f64,
    k: HermitianOperator,
    pi: HermitianOperator,
    final_gap: f64,
    lambda0: f64,
    max_gap: f64,
    max_slackness: f64,
    max_descent: f64,
    pi_steps: usize,
    bisections: usize,
}

fn run_restart(problem: &SimProblem, config: &SolverConfig, index: usize) -> Result<RestartOutcome> {
    let mut rng = random::stream_rng(config.master_seed, index as u64);
    let rank = rng.random_range(1..=problem.dim());
    let mut k = random::projector(&mut rng, problem.dim(), rank);
    let mut out = RestartOutcome {
        value: f64::NEG_INFINITY,
        k: k.clone(),
        pi: HermitianOperator::zeros(problem.dim()),
        final_gap: 0.0,
        lambda0: 0.0,
        max_gap: 0.0,
        max_slackness: 0.0,
        max_descent: 0.0,
        pi_steps: 0,
        bisections: 0,
    };
    for round in 0..config.inner_iterations {
        let step = pi_step(problem, &problem.x_operator(&k)?, config)?;
        out.pi_steps += 1;
        out.bisections += usize::from(step.used_bisection);
        out.max_gap = out.max_gap.max(step.duality_gap);
        out.max_slackness = out
            .max_slackness
            .max(step.slackness_positive)
            .max(step.slackness_negative);
        if round > 0 {
            out.max_descent = out.max_descent.max(out.value - step.value);
        }
        let ks = k_step(&problem.z_operator(&step.pi)?)?;
        out.max_descent = out.max_descent.max(step.value - ks.value);
        let previous = out.value;
        k = ks.k;
        out.value = ks.value;
        out.k = k.clone();
        out.pi = step.pi;
        out.final_gap = step.duality_gap;
        out.lambda0 = step.lambda0;
        if round > 0 && config.stall_tolerance.is_some_and(|t| out.value - previous <= t) {
            break;
        }
    }
    Ok(out)
}

fn serialize_operator<S: Serializer>(op: &HermitianOperator, s: S) -> std::result::Result<S::Ok, S::Error> {
    MatrixFile::from_operator(op).serialize(s)
}

#[derive(Debug, Clone, Serialize)]
pub struct RestartFailure {
    pub restart: usize,
    pub message: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct SolveResult {
    pub dim: usize,
    pub p: f64,
    pub f_max: f64,
    /// Index of the restart that attained `f_max`.
    pub best_restart: usize,
    #[serde(serialize_with = "serialize_operator")]
    pub k_opt: HermitianOperator,
    #[serde(serialize_with = "serialize_operator")]
    pub pi_opt: HermitianOperator,
    /// Final dual value of the best restart.
    pub lambda0: f64,
    /// `None` for restarts that failed.
    pub per_restart_values: Vec<Option<f64>>,
    pub restart_failures: Vec<RestartFailure>,
    /// Duality gap at the final iterate of the best restart.
    pub duality_gap: f64,
    /// Largest duality gap over every accepted Pi-step of every restart.
    pub max_duality_gap: f64,
    /// Largest complementary-slackness residual over every accepted Pi-step.
    pub max_slackness: f64,
    /// Largest decrease of the objective between consecutive sub-steps.
    pub max_descent: f64,
    /// Spread of the top decile of restart values.
    pub estimated_precision: f64,
    pub pi_steps: usize,
    pub bisection_steps: usize,
    pub p_below_spectrum: bool,
    pub config: SolverConfig,
}

/// Spread `max - min` of the best tenth (at least one) of the values.
pub fn top_decile_spread(values: &[f64]) -> f64 {
    let mut sorted: Vec<f64> = values.to_vec();
    sorted.sort_by(|a, b| b.total_cmp(a));
    let take = sorted.len().div_ceil(10).max(1).min(sorted.len());
    if take == 0 {
        return 0.0;
    }
    sorted[0] - sorted[take - 1]
}

/// Runs `config.restarts` independent restarts of the alternating ascent.
pub fn alternate_solve(problem: &SimProblem, config: &SolverConfig) -> Result<SolveResult> {
    config.validate()?;
    let outcomes: Vec<Result<RestartOutcome>> = (0..config.restarts)
        .into_par_iter()
        .map(|index| run_restart(problem, config, index))
        .collect();

    let mut best: Option<(usize, &RestartOutcome)> = None;
    let mut failures = Vec::new();
    let mut values = Vec::with_capacity(outcomes.len());
    let (mut max_gap, mut max_slack, mut max_descent) = (0.0f64, 0.0f64, 0.0f64);
    let (mut pi_steps, mut bisections) = (0, 0);
    for (index, outcome) in outcomes.iter().enumerate() {
        match outcome {
            Ok(o) => {
                values.push(Some(o.value));
                max_gap = max_gap.max(o.max_gap);
                max_slack = max_slack.max(o.max_slackness);
                max_descent = max_descent.max(o.max_descent);
                pi_steps += o.pi_steps;
                bisections += o.bisections;
                if best.is_none_or(|(_, b)| o.value > b.value) {
                    best = Some((index, o));
                }
            }
            Err(e) => {
                values.push(None);
                failures.push(RestartFailure {
                    restart: index,
                    message: e.to_string(),
                });
            }
        }
    }
    let (best_restart, best) = best.ok_or_else(|| {
        Error::Solver(format!(
            "all {} restarts failed; first: {}",
            failures.len(),
            failures.first().map(|f| f.message.as_str()).unwrap_or("")
        ))
    })?;
    let finite: Vec<f64> = values.iter().flatten().copied().collect();
    Ok(SolveResult {
        dim: problem.dim(),
        p: problem.p,
        f_max: best.value,
        best_restart,
        k_opt: best.k.clone(),
        pi_opt: best.pi.clone(),
        lambda0: best.lambda0,
        duality_gap: best.final_gap,
        per_restart_values: values,
        restart_failures: failures,
        max_duality_gap: max_gap,
        max_slackness: max_slack,
        max_descent,
        estimated_precision: top_decile_spread(&finite),
        pi_steps,
        bisection_steps: bisections,
        p_below_spectrum: problem.p_below_spectrum(),
        config: *config,
    })
}

/// `rho^(D) = diag(1, 1/2, ..., 1/D) / H_D`.
pub fn embezzling_state(d: usize) -> Result<DensityMatrix> {
    if d < 2 {
        return Err(Error::Domain(format!("embezzling state needs D >= 2, got {d}")));
    }
    let weights: Vec<f64> = (1..=d).map(|j| 1.0 / j as f64).collect();
    let z: f64 = weights.iter().sum();
    let probs: Vec<f64> = weights.iter().map(|w| w / z).collect();
    DensityMatrix::from_diagonal(&probs)
}

/// `(rho^(D) ⊗ rho, I ⊗ A)`.
pub fn lift(rho: &DensityMatrix, d: usize, a: &HermitianOperator) -> Result<(DensityMatrix, HermitianOperator)> {
    let rho = embezzling_state(d)?.kron(rho);
    Ok((rho, HermitianOperator::identity(d).kron(a)))
}

/// Solves the base problem, then evaluates its optimal pair on the base
/// and on the lifted problem `(p, rho^(D) ⊗ rho, I ⊗ Pi)` with `H -> I ⊗ H`.
pub fn tensor_stability_check(problem: &SimProblem, d: usize, config: &SolverConfig) -> Result<(f64, f64)> {
    if problem.dim() * d > 64 {
        return Err(Error::Domain(format!(
            "lifted dimension {} exceeds 64",
            problem.dim() * d
        )));
    }
    let solved = alternate_solve(problem, config)?;
    let base = problem.value(&solved.k_opt, &solved.pi_opt)?;
    let (rho, pi) = lift(problem.rho(), d, &solved.pi_opt)?;
    let lifted_problem = SimProblem::new(rho, problem.p)?;
    let k = HermitianOperator::identity(d).kron(&solved.k_opt);
    Ok((base, lifted_problem.value(&k, &pi)?))
}

/// `n` evenly spaced weights in `(lambda_min(rho^(D)), 1/2]`.
pub fn figure3_p_grid(d: usize, n: usize) -> Result<Vec<f64>> {
    if n == 0 {
        return Err(Error::Domain("p grid needs at least one point".into()));
    }
    let lmin = embezzling_state(d)?.op().matrix()[(d - 1, d - 1)].re;
    let step = (0.5 - lmin) / n as f64;
    Ok((1..=n).map(|k| lmin + step * k as f64).collect())
}

pub const FIGURE3_HEADER: &str = "D,p,F_max,entropy_bits,precision";

#[derive(Debug, Clone, Serialize)]
pub struct Figure3Row {
    pub d: usize,
    pub p: f64,
    /// `None` when every restart failed; see `error`.
    pub f_max: Option<f64>,
    pub entropy_bits: f64,
    pub precision: Option<f64>,
    pub error: Option<String>,
}

/// One solver run per `(D, p)` with `rho = rho^(D)` and the default grid.
pub fn figure3_scan(dims: &[usize], pcount: usize, config: &SolverConfig) -> Result<Vec<Figure3Row>> {
    let mut rows = Vec::new();
    for &d in dims {
        let rho = embezzling_state(d)?;
        for p in figure3_p_grid(d, pcount)? {
            let problem = SimProblem::new(rho.clone(), p)?;
            let (f_max, precision, error) = match alternate_solve(&problem, config) {
                Ok(r) => (Some(r.f_max), Some(r.estimated_precision), None),
                Err(e) => (None, None, Some(e.to_string())),
            };
            rows.push(Figure3Row {
                d,
                p,
                f_max,
                entropy_bits: binary_entropy(p),
                precision,
                error,
            });
        }
    }
    Ok(rows)
}
