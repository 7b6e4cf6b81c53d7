//! Stationary uncertainty states.
//!
//! For weights `α, β > 0` the stationary states solve the self-consistent
//! eigenvalue problem
//!
//! ```text
//! (α·K_A(r_A) + β·K_B(r_B)) |ψ⟩ = |ψ⟩ (α x + β y)
//! ```
//!
//! where `K(r)` is the cost operator of a measure at reference `r` and the
//! references are in turn fixed by `|ψ⟩`: the mean for a variance, the
//! nearest proper value for a smallest squared distance, the cheapest
//! reference outcome for a Monge cost and the phase of `⟨E⟩` for the chordal
//! circle measure. Every measure equals `min_r ⟨K(r)⟩`, so the lowest
//! solution gives `u(α, β) = min_ψ (α·m_A + β·m_B)`.
//!
//! The solver alternates between an eigenvector step and a reference step.
//! On branch 0 neither step can increase the objective.

mod border;

use std::f64::consts::{PI, TAU};

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::eigen::{eigh_select, CMatrix, CVector};
use crate::error::{Error, Result};
use crate::measures::{nearest_proper_value, UncertaintyMeasure};
use crate::observable::Observable;
use crate::state::{haar_state, PureState};

pub use border::{legendre_envelope, uncertainty_principle_certificate, BorderCurve, BorderPoint, Certificate};

/// Two observables with the measure applied to each.
#[derive(Debug, Clone)]
pub struct MeasurePair {
    pub a: Observable,
    pub b: Observable,
    pub measure_a: UncertaintyMeasure,
    pub measure_b: UncertaintyMeasure,
}

impl MeasurePair {
    pub fn new(
        a: impl Into<Observable>,
        b: impl Into<Observable>,
        measure_a: UncertaintyMeasure,
        measure_b: UncertaintyMeasure,
    ) -> Result<Self> {
        let (a, b) = (a.into(), b.into());
        if a.dim() != b.dim() {
            return Err(Error::DimensionMismatch {
                expected: a.dim(),
                found: b.dim(),
            });
        }
        measure_a.check_compatible(&a)?;
        measure_b.check_compatible(&b)?;
        Ok(Self {
            a,
            b,
            measure_a,
            measure_b,
        })
    }

    pub fn dim(&self) -> usize {
        self.a.dim()
    }

    /// `(m_A(ψ), m_B(ψ))`.
    pub fn measures(&self, state: &PureState) -> Result<(f64, f64)> {
        Ok((
            self.measure_a.of_state(state, &self.a)?,
            self.measure_b.of_state(state, &self.b)?,
        ))
    }

    fn has_variance(&self) -> bool {
        matches!(self.measure_a, UncertaintyMeasure::Variance) || matches!(self.measure_b, UncertaintyMeasure::Variance)
    }
}

/// Reference point of a cost operator.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Reference {
    /// A real number: the mean (variance) or a proper value (ssd).
    Value(f64),
    /// Index of a proper value (Monge cost).
    Outcome(usize),
    /// A phase in `(−π, π]` (chordal circle measure).
    Phase(f64),
}

impl Reference {
    /// The reference as a real number, for reporting.
    pub fn as_f64(&self) -> f64 {
        match *self {
            Reference::Value(v) | Reference::Phase(v) => v,
            Reference::Outcome(k) => k as f64,
        }
    }
}

/// Which references seed the fixed-point iteration.
#[derive(Debug, Clone, PartialEq)]
pub struct InitStrategy {
    /// Equispaced means across the spectral range, per variance observable.
    pub mean_grid: usize,
    /// Additional starts seeded from Haar-random states; only used when a
    /// variance is involved.
    pub haar_restarts: usize,
    /// Cap on the proper values (or outcomes) enumerated per discrete
    /// observable, chosen by nearness to the centre of the spectrum.
    pub max_enumerated: usize,
    /// Equispaced starting phases for the circle measure.
    pub phases: usize,
    pub seed: u64,
}

impl Default for InitStrategy {
    fn default() -> Self {
        Self {
            mean_grid: 5,
            haar_restarts: 20,
            max_enumerated: 16,
            phases: 8,
            seed: 0x5eed,
        }
    }
}

/// A converged self-consistent solution.
#[derive(Debug, Clone)]
pub struct StationaryResult {
    pub state: PureState,
    pub reference_a: Reference,
    pub reference_b: Reference,
    /// `⟨K_A(r_A)⟩`; equals `m_A(ψ)` on branch 0.
    pub x: f64,
    /// `⟨K_B(r_B)⟩`; equals `m_B(ψ)` on branch 0.
    pub y: f64,
    /// `α x + β y`, the eigenvalue of the branch.
    pub objective: f64,
    pub branch: usize,
    pub converged: bool,
    pub iterations: usize,
    /// `‖H ψ − objective·ψ‖`.
    pub residual: f64,
}

/// All distinct solutions found from one initialization set.
#[derive(Debug, Clone)]
pub struct StationarySet {
    /// Sorted by objective.
    pub solutions: Vec<StationaryResult>,
    /// Starts that hit the iteration cap or a reference cycle.
    pub unconverged: usize,
}

impl StationarySet {
    pub fn lowest(&self) -> &StationaryResult {
        &self.solutions[0]
    }
}

/// The cost operator `K(r)` of one side and its reference update.
enum CostTerm {
    Quadratic {
        matrix: CMatrix,
        square: CMatrix,
        lo: f64,
        hi: f64,
        /// Proper values for ssd; `None` for variance.
        proper: Option<Vec<f64>>,
    },
    Monge {
        /// `Σ_j c(x, j) P_j` per reference outcome `x`.
        operators: Vec<CMatrix>,
    },
    Circle {
        e: CMatrix,
        e_dag: CMatrix,
    },
}

impl CostTerm {
    fn new(obs: &Observable, measure: &UncertaintyMeasure) -> Result<Self> {
        measure.check_compatible(obs)?;
        Ok(match (measure, obs) {
            (UncertaintyMeasure::Variance | UncertaintyMeasure::Ssd, Observable::Hermitian(h)) => CostTerm::Quadratic {
                matrix: h.matrix().clone(),
                square: h.matrix() * h.matrix(),
                lo: h.min_value(),
                hi: h.max_value(),
                proper: matches!(measure, UncertaintyMeasure::Ssd).then(|| h.proper_values()),
            },
            (UncertaintyMeasure::MongeCost(table), _) => {
                let projectors = obs.projectors()?;
                let n = obs.dim();
                let operators = (0..table.len())
                    .map(|x| {
                        projectors
                            .iter()
                            .enumerate()
                            .fold(CMatrix::zeros(n, n), |acc, (j, p)| acc + p.scale(table.get(x, j)))
                    })
                    .collect();
                CostTerm::Monge { operators }
            }
            (UncertaintyMeasure::CircleChordSsd, Observable::Unitary(u)) => CostTerm::Circle {
                e: u.matrix().clone(),
                e_dag: u.matrix().adjoint(),
            },
            _ => {
                return Err(Error::IncompatibleMeasure {
                    measure: measure.name(),
                })
            }
        })
    }

    fn operator(&self, r: Reference) -> CMatrix {
        match (self, r) {
            (CostTerm::Quadratic { matrix, square, .. }, Reference::Value(v)) => {
                let n = matrix.nrows();
                square - matrix.scale(2.0 * v) + CMatrix::identity(n, n).scale(v * v)
            }
            (CostTerm::Monge { operators }, Reference::Outcome(k)) => operators[k].clone(),
            (CostTerm::Circle { e, e_dag }, Reference::Phase(phi)) => {
                let n = e.nrows();
                let w = Complex64::from_polar(0.5, phi);
                CMatrix::identity(n, n) - e_dag * w - e * w.conj()
            }
            _ => unreachable!("reference kind does not match the cost term"),
        }
    }

    fn is_continuous(&self) -> bool {
        match self {
            CostTerm::Quadratic { proper, .. } => proper.is_none(),
            CostTerm::Monge { .. } => false,
            CostTerm::Circle { .. } => true,
        }
    }

    /// The reference minimising `⟨K(r)⟩` for the given state. On excited
    /// branches the circle phase is only fixed modulo π, the choice nearest
    /// the current phase is kept.
    fn target(&self, psi: &CVector, current: Reference, branch: usize) -> Reference {
        match self {
            CostTerm::Quadratic { matrix, proper, .. } => {
                let mean = psi.dotc(&(matrix * psi)).re;
                match proper {
                    None => Reference::Value(mean),
                    Some(values) => Reference::Value(nearest_proper_value(values, mean)),
                }
            }
            CostTerm::Monge { operators } => {
                let mut best = (0, f64::INFINITY);
                for (k, op) in operators.iter().enumerate() {
                    let cost = psi.dotc(&(op * psi)).re;
                    if cost < best.1 {
                        best = (k, cost);
                    }
                }
                Reference::Outcome(best.0)
            }
            CostTerm::Circle { e, .. } => {
                let mean = psi.dotc(&(e * psi));
                let phi = mean.arg();
                if branch == 0 {
                    return Reference::Phase(phi);
                }
                let Reference::Phase(now) = current else {
                    return Reference::Phase(phi);
                };
                let flipped = wrap_phase(phi + PI);
                if wrap_phase(phi - now).abs() <= wrap_phase(flipped - now).abs() {
                    Reference::Phase(phi)
                } else {
                    Reference::Phase(flipped)
                }
            }
        }
    }

    /// Starting references.
    fn starts(&self, init: &InitStrategy) -> Vec<Reference> {
        match self {
            CostTerm::Quadratic {
                lo, hi, proper: None, ..
            } => {
                let n = init.mean_grid.max(1);
                if n == 1 {
                    return vec![Reference::Value(0.5 * (lo + hi))];
                }
                (0..n)
                    .map(|k| Reference::Value(lo + (hi - lo) * k as f64 / (n - 1) as f64))
                    .collect()
            }
            CostTerm::Quadratic {
                lo,
                hi,
                proper: Some(values),
                ..
            } => {
                let centre = 0.5 * (lo + hi);
                let mut sorted = values.clone();
                sorted.sort_by(|a, b| (a - centre).abs().total_cmp(&(b - centre).abs()));
                sorted
                    .into_iter()
                    .take(init.max_enumerated.max(1))
                    .map(Reference::Value)
                    .collect()
            }
            CostTerm::Monge { operators } => {
                let n = operators.len();
                let centre = (n as f64 - 1.0) / 2.0;
                let mut order: Vec<usize> = (0..n).collect();
                order.sort_by(|&a, &b| (a as f64 - centre).abs().total_cmp(&(b as f64 - centre).abs()));
                order
                    .into_iter()
                    .take(init.max_enumerated.max(1))
                    .map(Reference::Outcome)
                    .collect()
            }
            CostTerm::Circle { .. } => {
                let n = init.phases.max(1);
                (0..n)
                    .map(|k| Reference::Phase(wrap_phase(TAU * k as f64 / n as f64)))
                    .collect()
            }
        }
    }

    fn expectation(&self, r: Reference, psi: &CVector) -> f64 {
        psi.dotc(&(self.operator(r) * psi)).re
    }
}

/// Maps a phase into `(−π, π]`.
fn wrap_phase(phi: f64) -> f64 {
    let w = phi.rem_euclid(TAU);
    if w > PI {
        w - TAU
    } else {
        w
    }
}

/// Damped move of a continuous reference towards its target; discrete
/// references jump.
fn step(current: Reference, target: Reference, damping: f64) -> Reference {
    match (current, target) {
        (Reference::Value(c), Reference::Value(t)) => Reference::Value(c + damping * (t - c)),
        (Reference::Phase(c), Reference::Phase(t)) => Reference::Phase(wrap_phase(c + damping * wrap_phase(t - c))),
        (_, t) => t,
    }
}

fn distance(a: Reference, b: Reference) -> f64 {
    match (a, b) {
        (Reference::Value(x), Reference::Value(y)) => (x - y).abs(),
        (Reference::Phase(x), Reference::Phase(y)) => wrap_phase(x - y).abs(),
        (Reference::Outcome(x), Reference::Outcome(y)) if x == y => 0.0,
        _ => f64::INFINITY,
    }
}

/// Alternating-minimisation solver for the stationary states.
#[derive(Debug, Clone)]
pub struct StationarySolver {
    pub init: InitStrategy,
    pub max_iterations: usize,
    /// Convergence threshold on the change of the continuous references.
    pub tolerance: f64,
}

impl Default for StationarySolver {
    fn default() -> Self {
        Self {
            init: InitStrategy::default(),
            max_iterations: 500,
            tolerance: 1e-11,
        }
    }
}

/// Two solutions closer than this in `|Δx| + |Δy|` are the same.
pub const DUPLICATE_TOLERANCE: f64 = 1e-8;

struct Problem<'a> {
    pair: &'a MeasurePair,
    term_a: CostTerm,
    term_b: CostTerm,
    alpha: f64,
    beta: f64,
}

impl<'a> Problem<'a> {
    fn new(pair: &'a MeasurePair, alpha: f64, beta: f64) -> Result<Self> {
        for w in [alpha, beta] {
            if !(w > 0.0 && w.is_finite()) {
                return Err(Error::InvalidParams(format!("weights must be positive, got {w}")));
            }
        }
        Ok(Self {
            pair,
            term_a: CostTerm::new(&pair.a, &pair.measure_a)?,
            term_b: CostTerm::new(&pair.b, &pair.measure_b)?,
            alpha,
            beta,
        })
    }

    fn hamiltonian(&self, ra: Reference, rb: Reference) -> CMatrix {
        self.term_a.operator(ra).scale(self.alpha) + self.term_b.operator(rb).scale(self.beta)
    }

    fn targets(&self, psi: &CVector, ra: Reference, rb: Reference, branch: usize) -> (Reference, Reference) {
        (self.term_a.target(psi, ra, branch), self.term_b.target(psi, rb, branch))
    }

    fn starts(&self, init: &InitStrategy) -> Result<Vec<(Reference, Reference)>> {
        let sa = self.term_a.starts(init);
        let sb = self.term_b.starts(init);
        let mut starts: Vec<(Reference, Reference)> =
            sa.iter().flat_map(|&a| sb.iter().map(move |&b| (a, b))).collect();
        if self.pair.has_variance() && init.haar_restarts > 0 {
            let mut rng = ChaCha8Rng::seed_from_u64(init.seed);
            let (ca, cb) = (sa[0], sb[0]);
            for _ in 0..init.haar_restarts {
                let s = haar_state(self.pair.dim(), &mut rng)?;
                starts.push(self.targets(s.amplitudes(), ca, cb, 0));
            }
        }
        Ok(starts)
    }

    fn finish(
        &self,
        psi: CVector,
        ra: Reference,
        rb: Reference,
        branch: usize,
        iterations: usize,
    ) -> Result<StationaryResult> {
        let x = self.term_a.expectation(ra, &psi);
        let y = self.term_b.expectation(rb, &psi);
        let objective = self.alpha * x + self.beta * y;
        let h = self.hamiltonian(ra, rb);
        let residual = (&h * &psi - &psi * Complex64::new(objective, 0.0)).norm();
        Ok(StationaryResult {
            state: PureState::normalized(psi)?,
            reference_a: ra,
            reference_b: rb,
            x,
            y,
            objective,
            branch,
            converged: true,
            iterations,
            residual,
        })
    }
}

impl StationarySolver {
    pub fn with_init(init: InitStrategy) -> Self {
        Self {
            init,
            ..Self::default()
        }
    }

    /// Iterates from one pair of starting references. `Ok(None)` reports a
    /// start that did not reach a fixed point.
    fn iterate(
        &self,
        problem: &Problem<'_>,
        branch: usize,
        start: (Reference, Reference),
    ) -> Result<Option<StationaryResult>> {
        let (mut ra, mut rb) = start;
        let mut damping = 1.0;
        let mut previous: Option<(Reference, Reference)> = None;
        let mut visited_discrete: Vec<(Reference, Reference)> = Vec::new();
        let continuous = (problem.term_a.is_continuous(), problem.term_b.is_continuous());
        for iteration in 1..=self.max_iterations {
            let h = problem.hamiltonian(ra, rb);
            let psi = eigh_select(&h, branch)?.vector;
            let (ta, tb) = problem.targets(&psi, ra, rb, branch);
            let change = distance(ta, ra).max(distance(tb, rb));
            if change <= self.tolerance {
                return problem.finish(psi, ra, rb, branch, iteration).map(Some);
            }
            let (na, nb) = (step(ra, ta, damping), step(rb, tb, damping));
            let discrete_key = (
                if continuous.0 { Reference::Outcome(0) } else { na },
                if continuous.1 { Reference::Outcome(0) } else { nb },
            );
            let discrete_moved = (!continuous.0 && distance(na, ra) > 0.0) || (!continuous.1 && distance(nb, rb) > 0.0);
            if discrete_moved {
                if visited_discrete.contains(&discrete_key) {
                    return Ok(None);
                }
                visited_discrete.push(discrete_key);
            }
            if let Some((pa, pb)) = previous {
                let back = distance(na, pa).max(distance(nb, pb));
                if back < 0.5 * change {
                    damping *= 0.5;
                }
            }
            previous = Some((ra, rb));
            ra = na;
            rb = nb;
        }
        Ok(None)
    }

    /// Every distinct self-consistent solution on `branch` reachable from the
    /// initialization set, sorted by objective.
    pub fn solve(&self, pair: &MeasurePair, alpha: f64, beta: f64, branch: usize) -> Result<StationarySet> {
        if branch >= pair.dim() {
            return Err(Error::InvalidParams(format!(
                "branch {branch} out of range for dimension {}",
                pair.dim()
            )));
        }
        let problem = Problem::new(pair, alpha, beta)?;
        let mut solutions: Vec<StationaryResult> = Vec::new();
        let mut unconverged = 0;
        for start in problem.starts(&self.init)? {
            match self.iterate(&problem, branch, start)? {
                Some(result) => {
                    let duplicate = solutions
                        .iter()
                        .any(|s| (s.x - result.x).abs() + (s.y - result.y).abs() < DUPLICATE_TOLERANCE);
                    if !duplicate {
                        solutions.push(result);
                    }
                }
                None => unconverged += 1,
            }
        }
        if solutions.is_empty() {
            return Err(Error::NoConvergence(format!(
                "no start converged at alpha={alpha}, beta={beta}, branch={branch}"
            )));
        }
        solutions.sort_by(|a, b| a.objective.total_cmp(&b.objective));
        Ok(StationarySet { solutions, unconverged })
    }

    /// Iterates on `branch` from the references that `state` selects.
    pub fn solve_from_state(
        &self,
        pair: &MeasurePair,
        alpha: f64,
        beta: f64,
        branch: usize,
        state: &PureState,
    ) -> Result<StationaryResult> {
        state.check_dim(pair.dim())?;
        let problem = Problem::new(pair, alpha, beta)?;
        let (sa, sb) = (
            problem.term_a.starts(&self.init)[0],
            problem.term_b.starts(&self.init)[0],
        );
        let start = problem.targets(state.amplitudes(), sa, sb, 0);
        self.iterate(&problem, branch, start)?
            .ok_or_else(|| Error::NoConvergence("iteration from the given state".into()))
    }

    /// `u(α, β)` and the solution attaining it.
    pub fn u_of(&self, pair: &MeasurePair, alpha: f64, beta: f64) -> Result<(f64, StationaryResult)> {
        let set = self.solve(pair, alpha, beta, 0)?;
        let best = set.solutions.into_iter().next().expect("nonempty");
        Ok((best.objective, best))
    }

    /// The border of the convex hull sampled at `α/β = t` for each `t` in
    /// `ratios` (with `β = 1`). Points whose solve fails are kept and marked
    /// invalid.
    pub fn trace_border(&self, pair: &MeasurePair, ratios: &[f64]) -> Result<BorderCurve> {
        if ratios.iter().any(|t| !(*t > 0.0 && t.is_finite())) {
            return Err(Error::InvalidParams("ratios must be positive".into()));
        }
        if ratios.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidParams("ratios must be strictly increasing".into()));
        }
        let points = ratios
            .iter()
            .map(|&t| match self.u_of(pair, t, 1.0) {
                Ok((u, best)) => BorderPoint {
                    alpha: t,
                    beta: 1.0,
                    u,
                    x: best.x,
                    y: best.y,
                    state: Some(best.state),
                },
                Err(_) => BorderPoint::invalid(t, 1.0),
            })
            .collect();
        Ok(BorderCurve { points })
    }
}

/// `‖H(r(ψ))ψ − ⟨H⟩ψ‖` with the references chosen by `ψ` itself: zero
/// exactly when `ψ` solves the stationary equation at weights `(α, β)`.
pub fn self_consistency_residual(pair: &MeasurePair, alpha: f64, beta: f64, state: &PureState) -> Result<f64> {
    state.check_dim(pair.dim())?;
    let problem = Problem::new(pair, alpha, beta)?;
    let psi = state.amplitudes();
    let init = InitStrategy::default();
    let (sa, sb) = (problem.term_a.starts(&init)[0], problem.term_b.starts(&init)[0]);
    let (ra, rb) = problem.targets(psi, sa, sb, 0);
    let h = problem.hamiltonian(ra, rb);
    let hpsi = &h * psi;
    let value = psi.dotc(&hpsi);
    Ok((hpsi - psi * value).norm())
}

/// Convenience wrapper using the default solver with a custom
/// initialization.
pub fn solve_stationary(
    pair: &MeasurePair,
    alpha: f64,
    beta: f64,
    branch: usize,
    init: InitStrategy,
) -> Result<StationarySet> {
    StationarySolver::with_init(init).solve(pair, alpha, beta, branch)
}

/// `n` log-spaced ratios from `tmin` to `tmax` inclusive.
pub fn log_grid(n: usize, tmin: f64, tmax: f64) -> Result<Vec<f64>> {
    if !(tmin > 0.0 && tmax > tmin && tmax.is_finite()) || n < 2 {
        return Err(Error::InvalidParams(format!("invalid ratio grid {n}:{tmin}:{tmax}")));
    }
    let (a, b) = (tmin.log10(), tmax.log10());
    Ok((0..n)
        .map(|k| 10f64.powf(a + (b - a) * k as f64 / (n - 1) as f64))
        .collect())
}
