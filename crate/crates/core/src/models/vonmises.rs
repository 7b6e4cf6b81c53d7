//! Von Mises rotor states and their uncertainty pairs.
//!
//! With `C = (E + E†)/4` the state `e^{Ct}|0⟩` has the wave function
//! `e^{(t/2) cos φ}`, whose azimuth density is the von Mises density
//! `e^{t cos φ}/(2π I₀(t))`.

use num_complex::Complex64;

use crate::eigen::{CVector, SymTridiagonal};
use crate::error::{Error, Result};
use crate::state::PureState;

use super::bessel::{bessel_i0_scaled, bessel_ratio};
use super::mathieu::mathieu_be;

/// Largest admissible amplitude at the edges of the truncated window.
pub const VON_MISES_TAIL: f64 = 1e-10;

/// `(X(t), Y(t)) = (1 − I₁/I₀, t I₁/(4 I₀))`, the azimuth and angular
/// momentum uncertainties of a von Mises state.
pub fn von_mises_point(t: f64) -> Result<(f64, f64)> {
    if !(t >= 0.0 && t.is_finite()) {
        return Err(Error::InvalidParams(format!("von Mises parameter {t} must be >= 0")));
    }
    let r = bessel_ratio(t);
    Ok((1.0 - r, 0.25 * t * r))
}

/// `e^{−i(L−ℓ)φ} e^{Ct}|ℓ⟩`, normalised, in the rotor basis of dimension
/// `2Λ + 1` (index `i` carries `ℓ = i − Λ`).
pub fn von_mises_state(phi: f64, ell: i64, t: f64, lambda: usize) -> Result<PureState> {
    if !(t >= 0.0 && t.is_finite()) {
        return Err(Error::InvalidParams(format!("von Mises parameter {t} must be >= 0")));
    }
    let cut = lambda as i64;
    if ell.abs() > cut {
        return Err(Error::OutOfRange {
            value: ell as f64,
            min: -(cut as f64),
            max: cut as f64,
        });
    }
    let n = 2 * lambda + 1;
    let centre = (ell + cut) as usize;
    let c = SymTridiagonal::new(vec![0.0; n], vec![0.25; n - 1]);
    let (values, vectors) = c.eigen()?;
    // Scaled by e^{−t/2}, the largest growth factor on the infinite chain.
    let weights: Vec<f64> = values
        .iter()
        .enumerate()
        .map(|(k, &lam)| (t * (lam - 0.5)).exp() * vectors[centre][k])
        .collect();
    let real: Vec<f64> = (0..n)
        .map(|row| vectors[row].iter().zip(&weights).map(|(z, w)| z * w).sum())
        .collect();
    let norm_sq: f64 = real.iter().map(|a| a * a).sum();
    let tail = real[0].abs().max(real[n - 1].abs()) / norm_sq.sqrt();
    if tail > VON_MISES_TAIL {
        return Err(Error::TruncationTooSmall(tail));
    }
    // Σ_n I_n(t/2)² = I₀(t); in scaled form e^{−t} Σ I_n(t/2)² = e^{−t} I₀(t).
    let expected = bessel_i0_scaled(t);
    if ((norm_sq - expected) / expected).abs() > 1e-8 {
        return Err(Error::TruncationTooSmall((norm_sq - expected).abs()));
    }
    let scale = norm_sq.sqrt();
    let amplitudes = CVector::from_iterator(
        n,
        real.iter().enumerate().map(|(i, a)| {
            let shift = (i as i64 - centre as i64) as f64;
            Complex64::from_polar(a / scale, -shift * phi)
        }),
    );
    PureState::normalized(amplitudes)
}

/// `dX/dt` and `dY/dt`, from `r′ = 1 − r/t − r²` for `r = I₁/I₀`.
fn derivatives(t: f64) -> (f64, f64) {
    let r = bessel_ratio(t);
    let dr = 1.0 - r / t - r * r;
    (-dr, 0.25 * (r + t * dr))
}

/// The von Mises parameter at which `αX + βY` is stationary, by bisection
/// on `(0, 4α/β]`.
pub fn von_mises_parameter(alpha: f64, beta: f64) -> Result<f64> {
    if !(alpha > 0.0 && beta > 0.0 && alpha.is_finite() && beta.is_finite()) {
        return Err(Error::InvalidParams(format!(
            "weights ({alpha}, {beta}) must be positive"
        )));
    }
    let h = |t: f64| {
        let (dx, dy) = derivatives(t);
        alpha * dx + beta * dy
    };
    let mut lo = 1e-8 * (alpha / beta).min(1.0);
    let mut hi = 4.0 * alpha / beta;
    if !(h(lo) < 0.0 && h(hi) > 0.0) {
        return Err(Error::RootNotBracketed { lo, hi });
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if h(mid) < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// One entry of the comparison between von Mises states and the true
/// border.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VonMisesRatio {
    pub alpha_over_beta: f64,
    pub t: f64,
    /// `αX(t) + βY(t)` at the stationary `t`.
    pub u_von_mises: f64,
    /// `(β/4) be₀(8α/β)`.
    pub u: f64,
    pub ratio: f64,
}

/// `ũ/u` for each `α/β` in `ratios` (with `β = 1`).
pub fn von_mises_ratio_curve(ratios: &[f64]) -> Result<Vec<VonMisesRatio>> {
    ratios
        .iter()
        .map(|&a| {
            let t = von_mises_parameter(a, 1.0)?;
            let (x, y) = von_mises_point(t)?;
            let u_von_mises = a * x + y;
            let u = 0.25 * mathieu_be(0, 8.0 * a)?;
            Ok(VonMisesRatio {
                alpha_over_beta: a,
                t,
                u_von_mises,
                u,
                ratio: u_von_mises / u,
            })
        })
        .collect()
}
