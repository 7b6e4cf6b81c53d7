//! Uncertainty measures on outcome distributions.
//!
//! Every measure is nonnegative, vanishes exactly on sharp distributions and
//! is concave under mixing of distributions over the same outcomes.

use nalgebra::DMatrix;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Exp1};

use crate::error::{Error, Result};
use crate::observable::{HermitianObservable, Observable, ProbabilityDistribution, ProperValues, UnitaryObservable};
use crate::state::PureState;

/// Transport cost between proper values: zero on the diagonal, strictly
/// positive and symmetric off it.
#[derive(Debug, Clone, PartialEq)]
pub struct CostTable {
    entries: DMatrix<f64>,
}

impl CostTable {
    pub fn new(entries: DMatrix<f64>) -> Result<Self> {
        let n = entries.nrows();
        if entries.ncols() != n {
            return Err(Error::InvalidCostTable(format!("table is {}x{}", n, entries.ncols())));
        }
        for i in 0..n {
            if entries[(i, i)] != 0.0 {
                return Err(Error::InvalidCostTable(format!("nonzero diagonal entry at {i}")));
            }
            for j in 0..n {
                let c = entries[(i, j)];
                if i != j && !(c > 0.0 && c.is_finite()) {
                    return Err(Error::InvalidCostTable(format!(
                        "off-diagonal entry ({i}, {j}) = {c} is not positive"
                    )));
                }
                if c != entries[(j, i)] {
                    return Err(Error::InvalidCostTable(format!("asymmetric at ({i}, {j})")));
                }
            }
        }
        Ok(Self { entries })
    }

    /// `N/(N−1)` for every pair of distinct outcomes; the uniform
    /// distribution then costs exactly one.
    pub fn flat(n: usize) -> Result<Self> {
        if n < 2 {
            return Err(Error::InvalidDimension(n));
        }
        let scale = n as f64 / (n as f64 - 1.0);
        Self::new(DMatrix::from_fn(n, n, |i, j| if i == j { 0.0 } else { scale }))
    }

    pub fn len(&self) -> usize {
        self.entries.nrows()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Cost of moving outcome `to` onto reference `from`.
    pub fn get(&self, from: usize, to: usize) -> f64 {
        self.entries[(from, to)]
    }

    pub fn entries(&self) -> &DMatrix<f64> {
        &self.entries
    }
}

/// The uncertainty measure applied to one observable.
#[derive(Debug, Clone, PartialEq)]
pub enum UncertaintyMeasure {
    Variance,
    /// Smallest squared distance to a proper value.
    Ssd,
    MongeCost(CostTable),
    /// `1 − |⟨E⟩|` for a unitary `E`.
    CircleChordSsd,
}

impl UncertaintyMeasure {
    pub fn name(&self) -> &'static str {
        match self {
            UncertaintyMeasure::Variance => "variance",
            UncertaintyMeasure::Ssd => "ssd",
            UncertaintyMeasure::MongeCost(_) => "mtc",
            UncertaintyMeasure::CircleChordSsd => "circle-ssd",
        }
    }

    /// Whether the measure can be evaluated for `obs`.
    pub fn check_compatible(&self, obs: &Observable) -> Result<()> {
        let ok = match (self, obs) {
            (UncertaintyMeasure::Variance | UncertaintyMeasure::Ssd, Observable::Hermitian(_)) => true,
            (UncertaintyMeasure::CircleChordSsd, Observable::Unitary(_)) => true,
            (UncertaintyMeasure::MongeCost(table), Observable::Hermitian(h)) => table.len() == h.proper_values().len(),
            (UncertaintyMeasure::MongeCost(table), Observable::Unitary(u)) => {
                u.proper_values().map(|v| v.len() == table.len()).unwrap_or(false)
            }
            _ => false,
        };
        if ok {
            Ok(())
        } else {
            Err(Error::IncompatibleMeasure { measure: self.name() })
        }
    }

    /// Evaluates the measure on a distribution.
    pub fn of_distribution(&self, dist: &ProbabilityDistribution) -> Result<f64> {
        match self {
            UncertaintyMeasure::Variance => variance(dist),
            UncertaintyMeasure::Ssd => ssd(dist),
            UncertaintyMeasure::MongeCost(table) => monge_cost(dist, table),
            UncertaintyMeasure::CircleChordSsd => circle_ssd_of_distribution(dist),
        }
    }

    /// Evaluates the measure for `obs` in `state`.
    pub fn of_state(&self, state: &PureState, obs: &Observable) -> Result<f64> {
        self.check_compatible(obs)?;
        match (self, obs) {
            (UncertaintyMeasure::CircleChordSsd, Observable::Unitary(u)) => circle_ssd(state, u),
            _ => self.of_distribution(&obs.distribution(state)?),
        }
    }
}

/// `⟨X²⟩ − ⟨X⟩²`.
pub fn variance(dist: &ProbabilityDistribution) -> Result<f64> {
    let mean = dist.mean()?;
    let values = dist.real_values()?;
    Ok(values
        .iter()
        .zip(dist.probabilities())
        .map(|(x, p)| p * (x - mean) * (x - mean))
        .sum())
}

/// The entry of ascending `values` nearest to `x`; an exact tie resolves to
/// the smaller value.
pub fn nearest_proper_value(values: &[f64], x: f64) -> f64 {
    let mut best = values[0];
    for &v in &values[1..] {
        if (v - x).abs() < (best - x).abs() {
            best = v;
        }
    }
    best
}

/// Variance plus the squared distance from the mean to the nearest proper
/// value; equivalently `⟨(X − x̌)²⟩`.
pub fn ssd(dist: &ProbabilityDistribution) -> Result<f64> {
    let mean = dist.mean()?;
    let values = dist.real_values()?;
    let nearest = nearest_proper_value(values, mean);
    Ok(values
        .iter()
        .zip(dist.probabilities())
        .map(|(x, p)| p * (x - nearest) * (x - nearest))
        .sum())
}

/// Index of the cheapest reference outcome and its expected transport cost.
pub fn monge_reference(dist: &ProbabilityDistribution, table: &CostTable) -> Result<(usize, f64)> {
    let n = dist.len();
    if table.len() != n {
        return Err(Error::CostTableShapeMismatch {
            rows: table.len(),
            cols: table.len(),
            values: n,
        });
    }
    let p = dist.probabilities();
    let mut best = (0, f64::INFINITY);
    for x in 0..n {
        let cost: f64 = (0..n).map(|y| table.get(x, y) * p[y]).sum();
        if cost < best.1 {
            best = (x, cost);
        }
    }
    Ok(best)
}

/// Smallest expected cost of converting `dist` into a sharp distribution.
pub fn monge_cost(dist: &ProbabilityDistribution, table: &CostTable) -> Result<f64> {
    monge_reference(dist, table).map(|(_, cost)| cost)
}

/// `1 − |⟨E⟩|`, from the matrix so that truncated operators work too.
pub fn circle_ssd(state: &PureState, e: &UnitaryObservable) -> Result<f64> {
    Ok((1.0 - e.expectation(state)?.norm()).max(0.0))
}

/// `1 − |Σ p_k λ_k|` for outcomes on the unit circle.
pub fn circle_ssd_of_distribution(dist: &ProbabilityDistribution) -> Result<f64> {
    match dist.values() {
        ProperValues::Circle(_) => Ok((1.0 - dist.complex_mean().norm()).max(0.0)),
        ProperValues::Real(_) => Err(Error::IncompatibleMeasure { measure: "circle-ssd" }),
    }
}

/// `½⟨AB + BA⟩ − ⟨A⟩⟨B⟩`.
pub fn correlation(state: &PureState, a: &HermitianObservable, b: &HermitianObservable) -> Result<f64> {
    let av = state.apply(a.matrix())?;
    let bv = state.apply(b.matrix())?;
    let mean_a = state.amplitudes().dotc(&av).re;
    let mean_b = state.amplitudes().dotc(&bv).re;
    Ok(av.dotc(&bv).re - mean_a * mean_b)
}

/// `1 − |⟨exp(iεX)⟩|²`, summed pairwise so that small `ε` keeps full
/// relative precision.
pub fn no_change_deficit(state: &PureState, x: &HermitianObservable, epsilon: f64) -> Result<f64> {
    let dist = x.distribution(state)?;
    let values = dist.real_values()?;
    let p = dist.probabilities();
    let mut total = 0.0;
    for j in 0..values.len() {
        for k in j + 1..values.len() {
            let s = (0.5 * epsilon * (values[j] - values[k])).sin();
            total += 4.0 * p[j] * p[k] * s * s;
        }
    }
    Ok(total)
}

/// `|⟨exp(iεX)⟩|²`, the probability that a small unitary kick generated by
/// `X` leaves the state unchanged.
pub fn no_change_probability(state: &PureState, x: &HermitianObservable, epsilon: f64) -> Result<f64> {
    Ok(1.0 - no_change_deficit(state, x, epsilon)?)
}

/// Concavity gap `m(w·p + (1−w)·q) − (w·m(p) + (1−w)·m(q))`; nonnegative for
/// every measure.
pub fn concavity_gap(
    measure: &UncertaintyMeasure,
    p: &ProbabilityDistribution,
    q: &ProbabilityDistribution,
    w: f64,
) -> Result<f64> {
    let mixed = measure.of_distribution(&p.mix(q, w)?)?;
    let separate = w * measure.of_distribution(p)? + (1.0 - w) * measure.of_distribution(q)?;
    Ok(mixed - separate)
}

/// Whether the uniform distribution maximises a measure.
#[derive(Debug, Clone, PartialEq)]
pub struct UniformReport {
    pub uniform: f64,
    pub largest_sampled: f64,
    pub uniform_is_maximal: bool,
}

/// Random distribution over `n` outcomes, uniform on the probability simplex.
pub fn random_simplex_point<R: rand::Rng + ?Sized>(n: usize, rng: &mut R) -> Vec<f64> {
    let mut w: Vec<f64> = (0..n).map(|_| Exp1.sample(rng)).collect();
    let total: f64 = w.iter().sum();
    w.iter_mut().for_each(|x| *x /= total);
    w
}

/// Compares the uniform distribution with `samples` random distributions
/// and every two-point distribution over the same outcomes.
pub fn uniform_maximality(
    measure: &UncertaintyMeasure,
    values: ProperValues,
    samples: usize,
    seed: u64,
) -> Result<UniformReport> {
    let n = values.len();
    let uniform = measure.of_distribution(&ProbabilityDistribution::uniform(values.clone())?)?;
    let mut largest: f64 = 0.0;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..samples {
        let p = random_simplex_point(n, &mut rng);
        let d = ProbabilityDistribution::new(values.clone(), p)?;
        largest = largest.max(measure.of_distribution(&d)?);
    }
    for i in 0..n {
        for j in i + 1..n {
            let mut p = vec![0.0; n];
            p[i] = 0.5;
            p[j] = 0.5;
            largest = largest.max(measure.of_distribution(&ProbabilityDistribution::new(values.clone(), p)?)?);
        }
    }
    Ok(UniformReport {
        uniform,
        largest_sampled: largest,
        uniform_is_maximal: largest <= uniform + 1e-12,
    })
}
