//! Hermitian and unitary observables, their spectral decompositions, and
//! Born-rule outcome distributions.

use std::f64::consts::TAU;
use std::ops::Range;

use num_complex::Complex64;

use crate::eigen::{self, CMatrix};
use crate::error::{Error, Result};
use crate::measures::CostTable;
use crate::state::PureState;

/// Maximum entry-wise deviation accepted by [`spectral_decompose`].
pub const HERMITIAN_TOLERANCE: f64 = 1e-10;
/// Maximum entry-wise deviation of `W W^†` from the identity.
pub const UNITARY_TOLERANCE: f64 = 1e-12;
/// Proper values closer than this fraction of the spectral diameter are one
/// outcome.
pub const DEGENERACY_FRACTION: f64 = 1e-9;
/// Accepted deviation of a distribution's total probability from one.
pub const PROBABILITY_TOLERANCE: f64 = 1e-12;

/// Outcome labels of a distribution.
#[derive(Debug, Clone, PartialEq)]
pub enum ProperValues {
    Real(Vec<f64>),
    /// Points on the unit circle.
    Circle(Vec<Complex64>),
}

impl ProperValues {
    pub fn len(&self) -> usize {
        match self {
            ProperValues::Real(v) => v.len(),
            ProperValues::Circle(v) => v.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

/// Probabilities for distinct proper values; they sum to one.
#[derive(Debug, Clone, PartialEq)]
pub struct ProbabilityDistribution {
    values: ProperValues,
    probabilities: Vec<f64>,
}

impl ProbabilityDistribution {
    pub fn new(values: ProperValues, probabilities: Vec<f64>) -> Result<Self> {
        if values.len() != probabilities.len() {
            return Err(Error::DimensionMismatch {
                expected: values.len(),
                found: probabilities.len(),
            });
        }
        if values.is_empty() {
            return Err(Error::InvalidParams("empty distribution".into()));
        }
        if probabilities.iter().any(|p| !p.is_finite() || *p < 0.0) {
            return Err(Error::InvalidParams("negative or non-finite probability".into()));
        }
        let total: f64 = probabilities.iter().sum();
        if (total - 1.0).abs() > PROBABILITY_TOLERANCE {
            return Err(Error::InvalidParams(format!("probabilities sum to {total}, not 1")));
        }
        Ok(Self { values, probabilities })
    }

    pub fn real(values: Vec<f64>, probabilities: Vec<f64>) -> Result<Self> {
        Self::new(ProperValues::Real(values), probabilities)
    }

    pub fn circle(values: Vec<Complex64>, probabilities: Vec<f64>) -> Result<Self> {
        Self::new(ProperValues::Circle(values), probabilities)
    }

    pub fn values(&self) -> &ProperValues {
        &self.values
    }

    pub fn probabilities(&self) -> &[f64] {
        &self.probabilities
    }

    pub fn len(&self) -> usize {
        self.probabilities.len()
    }

    pub fn is_empty(&self) -> bool {
        self.probabilities.is_empty()
    }

    pub fn real_values(&self) -> Result<&[f64]> {
        match &self.values {
            ProperValues::Real(v) => Ok(v),
            ProperValues::Circle(_) => Err(Error::NonRealValues),
        }
    }

    /// Mean of a real-valued distribution.
    pub fn mean(&self) -> Result<f64> {
        let values = self.real_values()?;
        Ok(values.iter().zip(&self.probabilities).map(|(x, p)| x * p).sum())
    }

    /// `Σ p_k λ_k` for either kind of proper values.
    pub fn complex_mean(&self) -> Complex64 {
        match &self.values {
            ProperValues::Real(v) => Complex64::new(v.iter().zip(&self.probabilities).map(|(x, p)| x * p).sum(), 0.0),
            ProperValues::Circle(v) => v.iter().zip(&self.probabilities).map(|(x, p)| x * p).sum(),
        }
    }

    /// True when a single outcome carries all the probability.
    pub fn is_sharp(&self, tolerance: f64) -> bool {
        self.probabilities.iter().any(|p| *p >= 1.0 - tolerance)
    }

    /// The convex combination `w·self + (1 − w)·other` over the same outcomes.
    pub fn mix(&self, other: &Self, w: f64) -> Result<Self> {
        if self.values != other.values {
            return Err(Error::InvalidParams(
                "mixing distributions over different outcomes".into(),
            ));
        }
        if !(0.0..=1.0).contains(&w) {
            return Err(Error::OutOfRange {
                value: w,
                min: 0.0,
                max: 1.0,
            });
        }
        let probabilities = self
            .probabilities
            .iter()
            .zip(&other.probabilities)
            .map(|(p, q)| w * p + (1.0 - w) * q)
            .collect();
        Ok(Self {
            values: self.values.clone(),
            probabilities,
        })
    }

    /// The uniform distribution over the given outcomes.
    pub fn uniform(values: ProperValues) -> Result<Self> {
        let n = values.len();
        Self::new(values, vec![1.0 / n as f64; n])
    }
}

fn born_probabilities(state: &PureState, vectors: &CMatrix, groups: &[Range<usize>]) -> Vec<f64> {
    let overlaps: Vec<f64> = vectors
        .column_iter()
        .map(|v| v.dotc(state.amplitudes()).norm_sqr())
        .collect();
    let mut probabilities: Vec<f64> = groups.iter().map(|g| overlaps[g.clone()].iter().sum()).collect();
    let total: f64 = probabilities.iter().sum();
    probabilities.iter_mut().for_each(|p| *p /= total);
    probabilities
}

fn orthogonal_projector(vectors: &CMatrix, group: &Range<usize>) -> CMatrix {
    let n = vectors.nrows();
    let mut p = CMatrix::zeros(n, n);
    for k in group.clone() {
        let v = vectors.column(k);
        p += v * v.adjoint();
    }
    p
}

/// A hermitian matrix with its spectral decomposition.
#[derive(Debug, Clone)]
pub struct HermitianObservable {
    matrix: CMatrix,
    values: Vec<f64>,
    vectors: CMatrix,
    groups: Vec<Range<usize>>,
}

/// Decomposes a hermitian matrix into proper values and orthonormal
/// eigenvectors.
pub fn spectral_decompose(matrix: &CMatrix) -> Result<HermitianObservable> {
    HermitianObservable::new(matrix.clone())
}

impl HermitianObservable {
    pub fn new(matrix: CMatrix) -> Result<Self> {
        if matrix.nrows() != matrix.ncols() {
            return Err(Error::NotSquare {
                rows: matrix.nrows(),
                cols: matrix.ncols(),
            });
        }
        let deviation = eigen::hermitian_deviation(&matrix);
        if deviation > HERMITIAN_TOLERANCE {
            return Err(Error::NotHermitian(deviation));
        }
        let matrix = (&matrix + matrix.adjoint()).unscale(2.0);
        let decomposition = eigen::eigh(&matrix)?;
        let values = decomposition.values;
        let diameter = values.last().copied().unwrap_or(0.0) - values.first().copied().unwrap_or(0.0);
        let tol = DEGENERACY_FRACTION * diameter;
        let mut groups = Vec::new();
        let mut start = 0;
        for k in 1..=values.len() {
            if k == values.len() || values[k] - values[k - 1] > tol {
                groups.push(start..k);
                start = k;
            }
        }
        Ok(Self {
            matrix,
            values,
            vectors: decomposition.vectors,
            groups,
        })
    }

    /// Builds the observable from a real symmetric matrix given row by row.
    pub fn from_real_rows(rows: &[&[f64]]) -> Result<Self> {
        let n = rows.len();
        let m = CMatrix::from_fn(n, n, |i, j| {
            Complex64::new(rows[i].get(j).copied().unwrap_or(f64::NAN), 0.0)
        });
        Self::new(m)
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    /// Eigenvalues with multiplicity, ascending.
    pub fn eigenvalues(&self) -> &[f64] {
        &self.values
    }

    /// Orthonormal eigenvectors as columns, matching [`Self::eigenvalues`].
    pub fn eigenvectors(&self) -> &CMatrix {
        &self.vectors
    }

    /// Distinct proper values, ascending.
    pub fn proper_values(&self) -> Vec<f64> {
        self.groups
            .iter()
            .map(|g| self.values[g.clone()].iter().sum::<f64>() / g.len() as f64)
            .collect()
    }

    pub fn min_value(&self) -> f64 {
        self.values[0]
    }

    pub fn max_value(&self) -> f64 {
        self.values[self.values.len() - 1]
    }

    /// Spectral projectors, one per distinct proper value.
    pub fn projectors(&self) -> Vec<CMatrix> {
        self.groups
            .iter()
            .map(|g| orthogonal_projector(&self.vectors, g))
            .collect()
    }

    /// `Σ λ |v⟩⟨v|` from the stored decomposition.
    pub fn reconstruct(&self) -> CMatrix {
        let n = self.dim();
        let mut m = CMatrix::zeros(n, n);
        for (k, &lambda) in self.values.iter().enumerate() {
            let v = self.vectors.column(k);
            m += (v * v.adjoint()).scale(lambda);
        }
        m
    }

    pub fn expectation(&self, state: &PureState) -> Result<f64> {
        Ok(state.sandwich(&self.matrix)?.re)
    }

    pub fn distribution(&self, state: &PureState) -> Result<ProbabilityDistribution> {
        state.check_dim(self.dim())?;
        Ok(ProbabilityDistribution {
            values: ProperValues::Real(self.proper_values()),
            probabilities: born_probabilities(state, &self.vectors, &self.groups),
        })
    }
}

#[derive(Debug, Clone)]
struct CircleSpectrum {
    values: Vec<Complex64>,
    vectors: CMatrix,
    groups: Vec<Range<usize>>,
}

/// A unitary matrix whose proper values lie on the unit circle.
///
/// A truncated observable (an isometry only on interior columns) carries no
/// spectrum; only matrix expectations are available for it.
#[derive(Debug, Clone)]
pub struct UnitaryObservable {
    matrix: CMatrix,
    spectrum: Option<CircleSpectrum>,
    cost_table: Option<CostTable>,
}

impl UnitaryObservable {
    pub fn new(matrix: CMatrix) -> Result<Self> {
        let n = matrix.nrows();
        if n != matrix.ncols() {
            return Err(Error::NotSquare {
                rows: n,
                cols: matrix.ncols(),
            });
        }
        let deviation = (&matrix * matrix.adjoint() - CMatrix::identity(n, n))
            .iter()
            .map(|z| z.norm())
            .fold(0.0, f64::max);
        if deviation > UNITARY_TOLERANCE {
            return Err(Error::NotUnitary(deviation));
        }
        let (raw, q, off_diagonal) = eigen::eig_normal(&matrix)?;
        if off_diagonal > 1e-10 {
            return Err(Error::NoConvergence(format!(
                "Schur factor of a unitary matrix is not diagonal ({off_diagonal:e})"
            )));
        }
        let angle = |z: &Complex64| {
            let a = z.arg().rem_euclid(TAU);
            if TAU - a < 1e-12 {
                0.0
            } else {
                a
            }
        };
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by(|&a, &b| angle(&raw[a]).total_cmp(&angle(&raw[b])));
        let values: Vec<Complex64> = order.iter().map(|&k| raw[k] / raw[k].norm()).collect();
        let mut vectors = CMatrix::zeros(n, n);
        for (dst, &src) in order.iter().enumerate() {
            vectors.set_column(dst, &q.column(src));
        }
        let diameter = values
            .iter()
            .flat_map(|a| values.iter().map(move |b| (a - b).norm()))
            .fold(0.0, f64::max);
        let tol = DEGENERACY_FRACTION * diameter;
        let mut groups: Vec<Range<usize>> = Vec::new();
        let mut start = 0;
        for k in 1..=n {
            if k == n || (values[k] - values[k - 1]).norm() > tol {
                groups.push(start..k);
                start = k;
            }
        }
        // The angular ordering puts 0 and values just below 2π at opposite ends.
        if groups.len() > 1 && (values[n - 1] - values[0]).norm() <= tol {
            return Err(Error::InvalidParams(
                "degenerate proper value straddles the branch cut".into(),
            ));
        }
        Ok(Self {
            matrix,
            spectrum: Some(CircleSpectrum {
                values,
                vectors,
                groups,
            }),
            cost_table: None,
        })
    }

    /// A truncated operator with no spectral decomposition.
    pub fn truncated(matrix: CMatrix) -> Result<Self> {
        if matrix.nrows() != matrix.ncols() {
            return Err(Error::NotSquare {
                rows: matrix.nrows(),
                cols: matrix.ncols(),
            });
        }
        Ok(Self {
            matrix,
            spectrum: None,
            cost_table: None,
        })
    }

    /// Attaches a Monge cost table over the distinct proper values.
    pub fn with_cost_table(mut self, table: CostTable) -> Result<Self> {
        let count = self.proper_values()?.len();
        if table.len() != count {
            return Err(Error::CostTableShapeMismatch {
                rows: table.len(),
                cols: table.len(),
                values: count,
            });
        }
        self.cost_table = Some(table);
        Ok(self)
    }

    pub fn cost_table(&self) -> Option<&CostTable> {
        self.cost_table.as_ref()
    }

    pub fn is_truncated(&self) -> bool {
        self.spectrum.is_none()
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    fn spectrum(&self) -> Result<&CircleSpectrum> {
        self.spectrum.as_ref().ok_or(Error::TruncatedObservable)
    }

    /// Distinct proper values ordered by phase in `[0, 2π)`.
    pub fn proper_values(&self) -> Result<Vec<Complex64>> {
        let s = self.spectrum()?;
        Ok(s.groups.iter().map(|g| s.values[g.start]).collect())
    }

    pub fn eigenvectors(&self) -> Result<&CMatrix> {
        Ok(&self.spectrum()?.vectors)
    }

    pub fn projectors(&self) -> Result<Vec<CMatrix>> {
        let s = self.spectrum()?;
        Ok(s.groups.iter().map(|g| orthogonal_projector(&s.vectors, g)).collect())
    }

    /// `⟨W⟩`, available for truncated operators too.
    pub fn expectation(&self, state: &PureState) -> Result<Complex64> {
        state.sandwich(&self.matrix)
    }

    pub fn distribution(&self, state: &PureState) -> Result<ProbabilityDistribution> {
        state.check_dim(self.dim())?;
        let s = self.spectrum()?;
        Ok(ProbabilityDistribution {
            values: ProperValues::Circle(self.proper_values()?),
            probabilities: born_probabilities(state, &s.vectors, &s.groups),
        })
    }
}

/// Either kind of observable.
#[derive(Debug, Clone)]
pub enum Observable {
    Hermitian(HermitianObservable),
    Unitary(UnitaryObservable),
}

impl Observable {
    pub fn matrix(&self) -> &CMatrix {
        match self {
            Observable::Hermitian(h) => h.matrix(),
            Observable::Unitary(u) => u.matrix(),
        }
    }

    pub fn dim(&self) -> usize {
        self.matrix().nrows()
    }

    pub fn distribution(&self, state: &PureState) -> Result<ProbabilityDistribution> {
        match self {
            Observable::Hermitian(h) => h.distribution(state),
            Observable::Unitary(u) => u.distribution(state),
        }
    }

    pub fn projectors(&self) -> Result<Vec<CMatrix>> {
        match self {
            Observable::Hermitian(h) => Ok(h.projectors()),
            Observable::Unitary(u) => u.projectors(),
        }
    }

    pub fn as_hermitian(&self) -> Option<&HermitianObservable> {
        match self {
            Observable::Hermitian(h) => Some(h),
            Observable::Unitary(_) => None,
        }
    }

    pub fn as_unitary(&self) -> Option<&UnitaryObservable> {
        match self {
            Observable::Unitary(u) => Some(u),
            Observable::Hermitian(_) => None,
        }
    }
}

impl From<HermitianObservable> for Observable {
    fn from(h: HermitianObservable) -> Self {
        Observable::Hermitian(h)
    }
}

impl From<UnitaryObservable> for Observable {
    fn from(u: UnitaryObservable) -> Self {
        Observable::Unitary(u)
    }
}

/// Anything with a Born-rule outcome distribution.
pub trait Measurable {
    fn distribution(&self, state: &PureState) -> Result<ProbabilityDistribution>;
}

impl Measurable for HermitianObservable {
    fn distribution(&self, state: &PureState) -> Result<ProbabilityDistribution> {
        HermitianObservable::distribution(self, state)
    }
}

impl Measurable for UnitaryObservable {
    fn distribution(&self, state: &PureState) -> Result<ProbabilityDistribution> {
        UnitaryObservable::distribution(self, state)
    }
}

impl Measurable for Observable {
    fn distribution(&self, state: &PureState) -> Result<ProbabilityDistribution> {
        Observable::distribution(self, state)
    }
}

/// `⟨ψ|A|ψ⟩` for a hermitian `A`; the rounding-level imaginary part is dropped.
pub fn expectation(state: &PureState, obs: &HermitianObservable) -> Result<f64> {
    obs.expectation(state)
}

/// Born-rule distribution of `obs` in `state`, degenerate values merged.
pub fn distribution<O: Measurable + ?Sized>(state: &PureState, obs: &O) -> Result<ProbabilityDistribution> {
    obs.distribution(state)
}
