//! Characteristic values of the Mathieu equation `y″ + (b − s·cos²x) y = 0`.
//!
//! `be_n(s)` belongs to the even solution with `n` nodes in `[0, π)` and
//! `bo_n(s)` (`n ≥ 1`) to the odd one; even `n` gives period `π`, odd `n`
//! period `2π`. Each symmetry class is a real symmetric tridiagonal matrix
//! in a Fourier basis. In the standard form `y″ + (a − 2q cos 2x) y = 0` the
//! same values read `a = b − s/2` with `q = s/4`.

use crate::eigen::SymTridiagonal;
use crate::error::{Error, Result};

/// Largest admissible weight of the last Fourier coefficient.
pub const TAIL_TOLERANCE: f64 = 1e-12;

const MAX_MODES: usize = 4096;

/// The four Fourier symmetry classes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MathieuClass {
    /// `1/√2, cos 2x, cos 4x, …`
    EvenPi,
    /// `sin 2x, sin 4x, …`
    OddPi,
    /// `cos x, cos 3x, …`
    Even2Pi,
    /// `sin x, sin 3x, …`
    Odd2Pi,
}

impl MathieuClass {
    /// Matrix of the operator `−d²/dx² + s·cos²x` on `modes` basis functions,
    /// and its derivative with respect to `s`.
    fn matrices(self, s: f64, modes: usize) -> (SymTridiagonal, SymTridiagonal) {
        let wavenumber = |k: usize| -> f64 {
            match self {
                MathieuClass::EvenPi => 2.0 * k as f64,
                MathieuClass::OddPi => 2.0 * (k + 1) as f64,
                MathieuClass::Even2Pi | MathieuClass::Odd2Pi => (2 * k + 1) as f64,
            }
        };
        let mut d_diag = vec![0.5; modes];
        match self {
            MathieuClass::Even2Pi => d_diag[0] += 0.25,
            MathieuClass::Odd2Pi => d_diag[0] -= 0.25,
            _ => {}
        }
        let mut d_off = vec![0.25; modes.saturating_sub(1)];
        if self == MathieuClass::EvenPi && modes > 1 {
            d_off[0] = std::f64::consts::SQRT_2 / 4.0;
        }
        let diag = (0..modes).map(|k| wavenumber(k).powi(2) + s * d_diag[k]).collect();
        let off = d_off.iter().map(|c| s * c).collect();
        (SymTridiagonal::new(diag, off), SymTridiagonal::new(d_diag, d_off))
    }
}

fn quadratic_form(t: &SymTridiagonal, v: &[f64]) -> f64 {
    let mut total = 0.0;
    for i in 0..v.len() {
        total += t.diag[i] * v[i] * v[i];
        if i + 1 < v.len() {
            total += 2.0 * t.off[i] * v[i] * v[i + 1];
        }
    }
    total
}

/// A characteristic value with its derivative and eigenvector.
#[derive(Debug, Clone)]
pub struct Characteristic {
    pub value: f64,
    /// `db/ds` by Hellmann–Feynman.
    pub derivative: f64,
    pub coefficients: Vec<f64>,
}

/// Index-th eigenpair of one symmetry class, with the truncation chosen so
/// that the last Fourier coefficient is negligible.
pub fn characteristic(class: MathieuClass, index: usize, s: f64) -> Result<Characteristic> {
    if !s.is_finite() {
        return Err(Error::InvalidParams(format!("non-finite parameter {s}")));
    }
    let mut modes = (index + 16).max(8 + (s.abs().sqrt() * 1.5) as usize);
    let mut last_tail = f64::INFINITY;
    while modes <= MAX_MODES {
        let (m, dm) = class.matrices(s, modes);
        let (_, v) = m.eigenpair(index)?;
        let tail = v[modes - 1].abs().max(v[modes - 2].abs());
        last_tail = tail;
        if tail < TAIL_TOLERANCE {
            return Ok(Characteristic {
                value: quadratic_form(&m, &v),
                derivative: quadratic_form(&dm, &v),
                coefficients: v,
            });
        }
        modes *= 2;
    }
    Err(Error::TruncationTooSmall(last_tail))
}

/// `be_n(s)`.
pub fn mathieu_be(n: usize, s: f64) -> Result<f64> {
    mathieu_be_with_derivative(n, s).map(|(b, _)| b)
}

/// `(be_n(s), be_n′(s))`.
pub fn mathieu_be_with_derivative(n: usize, s: f64) -> Result<(f64, f64)> {
    let c = if n % 2 == 0 {
        characteristic(MathieuClass::EvenPi, n / 2, s)?
    } else {
        characteristic(MathieuClass::Even2Pi, (n - 1) / 2, s)?
    };
    Ok((c.value, c.derivative))
}

/// `bo_n(s)` for `n ≥ 1`.
pub fn mathieu_bo(n: usize, s: f64) -> Result<f64> {
    if n == 0 {
        return Err(Error::InvalidParams("bo_n needs n >= 1".into()));
    }
    let c = if n % 2 == 0 {
        characteristic(MathieuClass::OddPi, n / 2 - 1, s)?
    } else {
        characteristic(MathieuClass::Odd2Pi, (n - 1) / 2, s)?
    };
    Ok(c.value)
}

/// The lowest `count` characteristic values over all `π`-periodic
/// solutions, ascending: `be₀, bo₂, be₂, bo₄, …` for `s > 0`.
pub fn pi_periodic_spectrum(s: f64, count: usize) -> Result<Vec<f64>> {
    let mut values = Vec::with_capacity(2 * count);
    for k in 0..count {
        values.push(characteristic(MathieuClass::EvenPi, k, s)?.value);
        values.push(characteristic(MathieuClass::OddPi, k, s)?.value);
    }
    values.sort_by(f64::total_cmp);
    values.truncate(count);
    Ok(values)
}

/// Holds a truncation and evaluates characteristic values at a fixed
/// Fourier size; useful when many values at modest `s` are needed.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MathieuSolver {
    pub modes: usize,
}

impl MathieuSolver {
    pub fn new(modes: usize) -> Result<Self> {
        if modes < 4 {
            return Err(Error::InvalidParams(format!("{modes} Fourier modes is too few")));
        }
        Ok(Self { modes })
    }

    /// `be_n(s)` at this truncation; fails if the tail is not negligible.
    pub fn be(&self, n: usize, s: f64) -> Result<f64> {
        let (class, index) = if n % 2 == 0 {
            (MathieuClass::EvenPi, n / 2)
        } else {
            (MathieuClass::Even2Pi, (n - 1) / 2)
        };
        if index + 2 > self.modes {
            return Err(Error::InvalidParams(format!("order {n} needs more modes")));
        }
        let (m, _) = class.matrices(s, self.modes);
        let (_, v) = m.eigenpair(index)?;
        let tail = v[self.modes - 1].abs();
        if tail > TAIL_TOLERANCE {
            return Err(Error::TruncationTooSmall(tail));
        }
        Ok(quadratic_form(&m, &v))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    /// Standard-form `a₀(q)` from the continued fraction
    /// `a = −2q² / (4 − a − q² / (16 − a − q² / (36 − a − …)))`, solved by
    /// bisection on `[−2q − 1, 0]`.
    fn a0_continued_fraction(q: f64) -> f64 {
        let g = |a: f64| {
            let mut tail = 0.0;
            for m in (1..60).rev() {
                let k = (2 * m) as f64;
                tail = q * q / (k * k - a - tail);
            }
            // tail now holds q²/(4 − a − …); the equation is a = −2·tail.
            a + 2.0 * tail
        };
        let (mut lo, mut hi) = (-2.0 * q - 1.0, 0.0);
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if g(lo) * g(mid) <= 0.0 {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        0.5 * (lo + hi)
    }

    #[test]
    fn free_equation() {
        assert_eq!(mathieu_be(0, 0.0).unwrap(), 0.0);
        assert!((mathieu_be(2, 0.0).unwrap() - 4.0).abs() < 1e-14);
        assert!((mathieu_be(1, 0.0).unwrap() - 1.0).abs() < 1e-14);
        assert!((mathieu_bo(2, 0.0).unwrap() - 4.0).abs() < 1e-14);
    }

    #[test]
    fn reflection_identity() {
        for s in [1.0, 4.0, 8.0, 16.0] {
            let lhs = mathieu_be(0, s).unwrap();
            let rhs = s + mathieu_be(0, -s).unwrap();
            assert!((lhs - rhs).abs() < 1e-9);
        }
    }

    #[test]
    fn agrees_with_standard_form_continued_fraction() {
        // a₀(2) = −1.5139568850565; be₀(8) = a₀(2) + 4.
        let a = a0_continued_fraction(2.0);
        assert!((a + 1.513_956_885_056_5).abs() < 1e-12);
        assert!((mathieu_be(0, 8.0).unwrap() - (a + 4.0)).abs() < 1e-11);
        for s in [0.5, 3.0, 20.0, 100.0] {
            let b = mathieu_be(0, s).unwrap();
            assert!((b - (a0_continued_fraction(s / 4.0) + s / 2.0)).abs() < 1e-9);
        }
    }

    #[test]
    fn derivative_matches_finite_difference() {
        for s in [0.3, 8.0, 80.0] {
            let (_, d) = mathieu_be_with_derivative(0, s).unwrap();
            let h = 1e-5;
            let fd = (mathieu_be(0, s + h).unwrap() - mathieu_be(0, s - h).unwrap()) / (2.0 * h);
            assert!((d - fd).abs() < 1e-8);
        }
    }

    #[test]
    fn large_parameter_stays_below_harmonic_estimate() {
        // b ≈ √s (harmonic well at x = π/2) for large s.
        let s = 8.0e4;
        let b = mathieu_be(0, s).unwrap();
        assert!((b / s.sqrt() - 1.0).abs() < 0.01);
    }

    #[test]
    fn pi_periodic_ordering() {
        let spectrum = pi_periodic_spectrum(8.0, 4).unwrap();
        let expected = [
            mathieu_be(0, 8.0).unwrap(),
            mathieu_bo(2, 8.0).unwrap(),
            mathieu_be(2, 8.0).unwrap(),
            mathieu_bo(4, 8.0).unwrap(),
        ];
        for (a, b) in spectrum.iter().zip(expected) {
            assert!((a - b).abs() < 1e-12);
        }
    }

    #[test]
    fn fixed_truncation_detects_small_basis() {
        let small = MathieuSolver::new(4).unwrap();
        assert!(matches!(small.be(0, 400.0), Err(Error::TruncationTooSmall(_))));
        let ok = MathieuSolver::new(40).unwrap();
        assert!((ok.be(0, 8.0).unwrap() - mathieu_be(0, 8.0).unwrap()).abs() < 1e-13);
    }

    proptest! {
        #[test]
        fn reflection_holds_for_random_parameters(s in -50.0f64..50.0) {
            let lhs = mathieu_be(0, s).unwrap();
            prop_assert!((lhs - s - mathieu_be(0, -s).unwrap()).abs() < 1e-9);
        }
    }
}
