//! The lower convex-hull border traced by supporting lines `αx + βy = u`.

use crate::error::{Error, Result};
use crate::state::PureState;

use super::{MeasurePair, StationarySolver};

/// One supporting line with its point of contact.
#[derive(Debug, Clone)]
pub struct BorderPoint {
    pub alpha: f64,
    pub beta: f64,
    /// `NaN` for a point whose solve failed.
    pub u: f64,
    pub x: f64,
    pub y: f64,
    pub state: Option<PureState>,
}

impl BorderPoint {
    pub(super) fn invalid(alpha: f64, beta: f64) -> Self {
        Self {
            alpha,
            beta,
            u: f64::NAN,
            x: f64::NAN,
            y: f64::NAN,
            state: None,
        }
    }

    pub fn is_valid(&self) -> bool {
        self.u.is_finite()
    }
}

/// Border points ordered by increasing `α/β`.
#[derive(Debug, Clone, Default)]
pub struct BorderCurve {
    pub points: Vec<BorderPoint>,
}

impl BorderCurve {
    pub fn valid_points(&self) -> impl Iterator<Item = &BorderPoint> {
        self.points.iter().filter(|p| p.is_valid())
    }

    /// How far `(x, y)` lies below the hull: the largest `u − αx − βy`
    /// over the supporting lines. Nonpositive for accessible pairs.
    pub fn violation(&self, x: f64, y: f64) -> f64 {
        self.valid_points()
            .map(|p| p.u - p.alpha * x - p.beta * y)
            .fold(f64::NEG_INFINITY, f64::max)
    }

    /// Range of `y` over the valid contact points.
    pub fn y_range(&self) -> Option<(f64, f64)> {
        let mut it = self.valid_points().map(|p| p.y);
        let first = it.next()?;
        Some(it.fold((first, first), |(lo, hi), y| (lo.min(y), hi.max(y))))
    }
}

/// The lower hull boundary at `y`: `max_k (u_k − β_k y)/α_k`.
pub fn legendre_envelope(curve: &BorderCurve, y: f64) -> Result<f64> {
    let (lo, hi) = curve
        .y_range()
        .ok_or_else(|| Error::InvalidParams("curve has no valid points".into()))?;
    let slack = 1e-12 * (1.0 + hi.abs());
    if !(y >= lo - slack && y <= hi + slack) {
        return Err(Error::OutOfRange {
            value: y,
            min: lo,
            max: hi,
        });
    }
    Ok(curve
        .valid_points()
        .map(|p| (p.u - p.beta * y) / p.alpha)
        .fold(f64::NEG_INFINITY, f64::max))
}

/// Weights `(α, β)` with `u(α, β) > 1e-6`, proving that a triangle at the
/// origin of the uncertainty plane is inaccessible.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Certificate {
    pub alpha: f64,
    pub beta: f64,
    pub u: f64,
}

/// Tries `α = β = 1`, then `α/β ∈ {1e-2, 1e-1, 1e1, 1e2}`;
/// `None` when every `u` is at most `1e-6` (compatible observables).
pub fn uncertainty_principle_certificate(solver: &StationarySolver, pair: &MeasurePair) -> Result<Option<Certificate>> {
    let candidates = [(1.0, 1.0), (1e-2, 1.0), (1e-1, 1.0), (1e1, 1.0), (1e2, 1.0)];
    for (alpha, beta) in candidates {
        let (u, _) = solver.u_of(pair, alpha, beta)?;
        if u > 1e-6 {
            return Ok(Some(Certificate { alpha, beta, u }));
        }
    }
    Ok(None)
}
