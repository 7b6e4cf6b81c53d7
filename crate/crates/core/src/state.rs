//! Pure states and Haar-uniform sampling.

use nalgebra::DVector;
use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::eigen::{CMatrix, CVector};
use crate::error::{Error, Result};

/// Tolerance on the norm of a freshly constructed state.
pub const NORM_TOLERANCE: f64 = 1e-12;

/// A unit vector in a complex Hilbert space of dimension at least 2.
#[derive(Debug, Clone, PartialEq)]
pub struct PureState {
    amplitudes: CVector,
}

impl PureState {
    /// Wraps amplitudes that are already normalised.
    pub fn new(amplitudes: CVector) -> Result<Self> {
        check_dimension(amplitudes.len())?;
        let norm = amplitudes.norm();
        if (norm - 1.0).abs() > NORM_TOLERANCE {
            return Err(Error::NotNormalized(norm));
        }
        Ok(Self { amplitudes })
    }

    /// Scales arbitrary nonzero amplitudes to unit length.
    pub fn normalized(amplitudes: CVector) -> Result<Self> {
        check_dimension(amplitudes.len())?;
        let norm = amplitudes.norm();
        if !(norm > 0.0 && norm.is_finite()) {
            return Err(Error::NotNormalized(norm));
        }
        Ok(Self {
            amplitudes: amplitudes.unscale(norm),
        })
    }

    pub fn from_slice(amplitudes: &[Complex64]) -> Result<Self> {
        Self::normalized(DVector::from_column_slice(amplitudes))
    }

    pub fn from_real(amplitudes: &[f64]) -> Result<Self> {
        Self::normalized(DVector::from_iterator(
            amplitudes.len(),
            amplitudes.iter().map(|&x| Complex64::new(x, 0.0)),
        ))
    }

    /// The computational basis state `|index⟩`.
    pub fn basis(dimension: usize, index: usize) -> Result<Self> {
        check_dimension(dimension)?;
        if index >= dimension {
            return Err(Error::InvalidParams(format!(
                "basis index {index} out of range for dimension {dimension}"
            )));
        }
        let mut v = CVector::zeros(dimension);
        v[index] = Complex64::new(1.0, 0.0);
        Ok(Self { amplitudes: v })
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn amplitudes(&self) -> &CVector {
        &self.amplitudes
    }

    pub fn into_amplitudes(self) -> CVector {
        self.amplitudes
    }

    /// `⟨self|other⟩`.
    pub fn inner(&self, other: &PureState) -> Result<Complex64> {
        self.check_dim(other.dim())?;
        Ok(self.amplitudes.dotc(&other.amplitudes))
    }

    /// `⟨self|M|self⟩`.
    pub fn sandwich(&self, m: &CMatrix) -> Result<Complex64> {
        self.check_dim(m.nrows())?;
        self.check_dim(m.ncols())?;
        Ok(self.amplitudes.dotc(&(m * &self.amplitudes)))
    }

    /// `M|self⟩` as a bare vector.
    pub fn apply(&self, m: &CMatrix) -> Result<CVector> {
        self.check_dim(m.ncols())?;
        Ok(m * &self.amplitudes)
    }

    /// Applies a unitary and returns the image state.
    pub fn transformed(&self, w: &CMatrix) -> Result<Self> {
        Self::normalized(self.apply(w)?)
    }

    pub(crate) fn check_dim(&self, n: usize) -> Result<()> {
        if n != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: n,
            });
        }
        Ok(())
    }
}

fn check_dimension(n: usize) -> Result<()> {
    if n < 2 {
        return Err(Error::InvalidDimension(n));
    }
    Ok(())
}

/// Draws one Haar-uniform state from `rng`.
pub fn haar_state<R: rand::Rng + ?Sized>(dimension: usize, rng: &mut R) -> Result<PureState> {
    check_dimension(dimension)?;
    loop {
        let v = CVector::from_fn(dimension, |_, _| {
            Complex64::new(StandardNormal.sample(rng), StandardNormal.sample(rng))
        });
        if v.norm() > 0.0 {
            return PureState::normalized(v);
        }
    }
}

/// `count` Haar-uniform states, a deterministic function of `seed`.
pub fn haar_sample(dimension: usize, seed: u64, count: usize) -> Result<Vec<PureState>> {
    check_dimension(dimension)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count).map(|_| haar_state(dimension, &mut rng)).collect()
}
