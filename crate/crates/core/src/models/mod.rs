//! Catalog of observable pairs with known borders.
//!
//! Each model fixes the observables, the uncertainty measures and, where
//! one exists, the closed form of `u(α, β)` and of the border contact point
//! at `α/β = t`.

mod bessel;
mod mathieu;
mod vonmises;

use std::fmt;
use std::str::FromStr;

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::eigen::CMatrix;
use crate::error::{Error, Result};
use crate::measures::{CostTable, UncertaintyMeasure};
use crate::observable::{HermitianObservable, UnitaryObservable};
use crate::state::PureState;
use crate::stationary::{InitStrategy, MeasurePair, StationarySolver};

pub use bessel::{bessel_i0, bessel_i0_scaled, bessel_i1, bessel_i1_scaled, bessel_in, bessel_ratio};
pub use mathieu::{
    characteristic, mathieu_be, mathieu_be_with_derivative, mathieu_bo, pi_periodic_spectrum, Characteristic,
    MathieuClass, MathieuSolver,
};
pub use vonmises::{
    von_mises_parameter, von_mises_point, von_mises_ratio_curve, von_mises_state, VonMisesRatio, VON_MISES_TAIL,
};

pub const DEFAULT_ROTOR_CUTOFF: usize = 64;
pub const DEFAULT_OSCILLATOR_CUTOFF: usize = 200;
/// Largest admissible oscillator ground-state amplitude at the top Fock
/// level.
pub const OSCILLATOR_TAIL: f64 = 1e-12;

/// The catalogued systems.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ModelKind {
    /// `σx, σy` of a qubit.
    Pauli,
    /// `Jx/ħ, Jy/ħ` of spin one, as real symmetric matrices.
    Spin1,
    /// The period-`N` Weyl pair `U, V`.
    Weyl(usize),
    /// Azimuth shift `E` and angular momentum `L` with `|ℓ| ≤ Λ`.
    Rotor(usize),
    /// Position and momentum on Fock levels `0..=nmax`.
    Oscillator(usize),
}

impl ModelKind {
    /// Parses `pauli`, `spin1`, `weyl:N`, `rotor[:Λ]` or `oscillator[:nmax]`;
    /// a missing cutoff is taken from `cutoff`.
    pub fn parse_with_cutoff(s: &str, cutoff: Option<usize>) -> Result<Self> {
        let (name, param) = match s.split_once(':') {
            Some((n, p)) => {
                let value = p
                    .trim()
                    .parse::<usize>()
                    .map_err(|_| Error::InvalidParams(format!("bad model parameter in {s:?}")))?;
                (n.trim(), Some(value))
            }
            None => (s.trim(), None),
        };
        let kind = match (name.to_ascii_lowercase().as_str(), param) {
            ("pauli" | "qubit", None) => ModelKind::Pauli,
            ("spin1", None) => ModelKind::Spin1,
            ("weyl", Some(n)) => ModelKind::Weyl(n),
            ("qutrit", None) => ModelKind::Weyl(3),
            ("rotor", p) => ModelKind::Rotor(p.or(cutoff).unwrap_or(DEFAULT_ROTOR_CUTOFF)),
            ("oscillator", p) => ModelKind::Oscillator(p.or(cutoff).unwrap_or(DEFAULT_OSCILLATOR_CUTOFF)),
            _ => return Err(Error::InvalidParams(format!("unknown model {s:?}"))),
        };
        kind.validate()?;
        Ok(kind)
    }

    fn validate(self) -> Result<()> {
        match self {
            ModelKind::Weyl(n) if n < 2 => Err(Error::InvalidParams(format!("weyl needs N >= 2, got {n}"))),
            ModelKind::Rotor(l) if l < 8 => Err(Error::InvalidParams(format!("rotor needs cutoff >= 8, got {l}"))),
            ModelKind::Oscillator(n) if n < 16 => {
                Err(Error::InvalidParams(format!("oscillator needs nmax >= 16, got {n}")))
            }
            _ => Ok(()),
        }
    }

    /// The measure the model is studied with when none is named.
    pub fn default_measure(self) -> MeasureKind {
        match self {
            ModelKind::Pauli | ModelKind::Spin1 | ModelKind::Oscillator(_) => MeasureKind::Variance,
            ModelKind::Weyl(_) => MeasureKind::Mtc,
            ModelKind::Rotor(_) => MeasureKind::Ssd,
        }
    }

    pub fn dim(self) -> usize {
        match self {
            ModelKind::Pauli => 2,
            ModelKind::Spin1 => 3,
            ModelKind::Weyl(n) => n,
            ModelKind::Rotor(l) => 2 * l + 1,
            ModelKind::Oscillator(n) => n + 1,
        }
    }
}

impl FromStr for ModelKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::parse_with_cutoff(s, None)
    }
}

impl fmt::Display for ModelKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ModelKind::Pauli => write!(f, "pauli"),
            ModelKind::Spin1 => write!(f, "spin1"),
            ModelKind::Weyl(n) => write!(f, "weyl:{n}"),
            ModelKind::Rotor(l) => write!(f, "rotor:{l}"),
            ModelKind::Oscillator(n) => write!(f, "oscillator:{n}"),
        }
    }
}

/// Measure names accepted on the command line.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MeasureKind {
    Variance,
    Ssd,
    Mtc,
}

impl FromStr for MeasureKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "variance" | "var" => Ok(MeasureKind::Variance),
            "ssd" => Ok(MeasureKind::Ssd),
            "mtc" | "monge" => Ok(MeasureKind::Mtc),
            _ => Err(Error::InvalidParams(format!("unknown measure {s:?}"))),
        }
    }
}

impl fmt::Display for MeasureKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            MeasureKind::Variance => "variance",
            MeasureKind::Ssd => "ssd",
            MeasureKind::Mtc => "mtc",
        })
    }
}

/// A model with its measure pair and a solver initialization suited to it.
#[derive(Debug, Clone)]
pub struct ModelSpec {
    pub kind: ModelKind,
    pub measure: MeasureKind,
    pub pair: MeasurePair,
    pub init: InitStrategy,
}

impl ModelSpec {
    pub fn name(&self) -> String {
        format!("{} {}", self.kind, self.measure)
    }

    pub fn solver(&self) -> StationarySolver {
        StationarySolver::with_init(self.init.clone())
    }

    pub fn closed_form_u(&self, alpha: f64, beta: f64) -> Result<f64> {
        closed_form_u(self.kind, self.measure, alpha, beta)
    }

    pub fn closed_form_border_point(&self, t: f64) -> Result<(f64, f64)> {
        closed_form_border_point(self.kind, self.measure, t)
    }

    /// Weight of `state` on the outermost levels of a truncated basis; zero
    /// for finite models.
    pub fn truncation_tail(&self, state: &PureState) -> f64 {
        let amps = state.amplitudes();
        match self.kind {
            ModelKind::Rotor(_) => amps[0].norm().max(amps[amps.len() - 1].norm()),
            ModelKind::Oscillator(_) => amps[amps.len() - 1].norm(),
            _ => 0.0,
        }
    }
}

fn real_matrix(n: usize, f: impl Fn(usize, usize) -> f64) -> CMatrix {
    DMatrix::from_fn(n, n, |i, j| Complex64::new(f(i, j), 0.0))
}

/// `σx`, `σy`.
pub fn pauli_operators() -> (CMatrix, CMatrix) {
    let i = Complex64::i();
    let sx = real_matrix(2, |r, c| if r != c { 1.0 } else { 0.0 });
    let sy = DMatrix::from_row_slice(2, 2, &[0.0.into(), -i, i, 0.0.into()]);
    (sx, sy)
}

/// `Jx/ħ`, `Jy/ħ` in the basis of the zero-eigenvalue kets of `Jx, Jy, Jz`,
/// where both are real.
pub fn spin1_operators() -> (CMatrix, CMatrix) {
    let jx = real_matrix(3, |r, c| if (r, c) == (1, 2) || (r, c) == (2, 1) { 1.0 } else { 0.0 });
    let jy = real_matrix(3, |r, c| if (r, c) == (0, 2) || (r, c) == (2, 0) { 1.0 } else { 0.0 });
    (jx, jy)
}

/// `U = diag(ω^k)` and the cyclic shift `V` with `V_{j, j+1} = 1`,
/// `ω = e^{2πi/N}`.
pub fn weyl_operators(n: usize) -> Result<(CMatrix, CMatrix)> {
    if n < 2 {
        return Err(Error::InvalidDimension(n));
    }
    let omega = |k: usize| Complex64::from_polar(1.0, std::f64::consts::TAU * k as f64 / n as f64);
    let u = DMatrix::from_fn(n, n, |r, c| if r == c { omega(r) } else { Complex64::new(0.0, 0.0) });
    let v = real_matrix(n, |r, c| if c == (r + 1) % n { 1.0 } else { 0.0 });
    Ok((u, v))
}

/// `(U + U†)/2` and `(V + V†)/2`.
pub fn weyl_hermitian_parts(n: usize) -> Result<(HermitianObservable, HermitianObservable)> {
    let (u, v) = weyl_operators(n)?;
    let part = |m: &CMatrix| (m + m.adjoint()) * Complex64::new(0.5, 0.0);
    Ok((HermitianObservable::new(part(&u))?, HermitianObservable::new(part(&v))?))
}

/// Truncated shift `E|ℓ⟩ = |ℓ + 1⟩` (no wrap-around) and `L = diag(−Λ..Λ)`.
pub fn rotor_operators(cutoff: usize) -> (CMatrix, CMatrix) {
    let n = 2 * cutoff + 1;
    let e = real_matrix(n, |r, c| if r == c + 1 { 1.0 } else { 0.0 });
    let l = real_matrix(n, |r, c| if r == c { r as f64 - cutoff as f64 } else { 0.0 });
    (e, l)
}

/// `Q = (a + a†)/√2` and `P = i(a† − a)/√2` on Fock levels `0..=nmax`.
pub fn oscillator_operators(nmax: usize) -> (CMatrix, CMatrix) {
    let n = nmax + 1;
    let a = real_matrix(n, |r, c| if c == r + 1 { (c as f64).sqrt() } else { 0.0 });
    let ad = a.adjoint();
    let s = Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
    let q = (&a + &ad) * s;
    let p = (&ad - &a) * (Complex64::i() * s);
    (q, p)
}

/// The two Hermitian observables used for the inequality suites.
pub fn inequality_pair(kind: ModelKind) -> Result<(HermitianObservable, HermitianObservable)> {
    let (a, b) = match kind {
        ModelKind::Pauli => pauli_operators(),
        ModelKind::Spin1 => spin1_operators(),
        ModelKind::Weyl(n) => return weyl_hermitian_parts(n),
        ModelKind::Oscillator(n) => oscillator_operators(n),
        ModelKind::Rotor(_) => return Err(Error::InvalidParams("the rotor azimuth is not Hermitian".into())),
    };
    Ok((HermitianObservable::new(a)?, HermitianObservable::new(b)?))
}

fn unsupported(kind: ModelKind, measure: MeasureKind) -> Error {
    Error::InvalidParams(format!("model {kind} does not support measure {measure}"))
}

/// Builds the observables and measures of a catalogued model.
pub fn build_model(kind: ModelKind, measure: MeasureKind) -> Result<ModelSpec> {
    kind.validate()?;
    let init = InitStrategy::default();
    let hermitian_pair = |(a, b): (CMatrix, CMatrix), m: UncertaintyMeasure| {
        MeasurePair::new(HermitianObservable::new(a)?, HermitianObservable::new(b)?, m.clone(), m)
    };
    let (pair, init) = match (kind, measure) {
        (ModelKind::Pauli | ModelKind::Spin1, MeasureKind::Variance | MeasureKind::Ssd) => {
            let ops = if kind == ModelKind::Pauli {
                pauli_operators()
            } else {
                spin1_operators()
            };
            let m = if measure == MeasureKind::Variance {
                UncertaintyMeasure::Variance
            } else {
                UncertaintyMeasure::Ssd
            };
            (hermitian_pair(ops, m)?, init)
        }
        (ModelKind::Weyl(n), MeasureKind::Mtc) => {
            let (u, v) = weyl_operators(n)?;
            let table = CostTable::flat(n)?;
            let u = UnitaryObservable::new(u)?.with_cost_table(table.clone())?;
            let v = UnitaryObservable::new(v)?.with_cost_table(table.clone())?;
            let m = UncertaintyMeasure::MongeCost(table);
            (MeasurePair::new(u, v, m.clone(), m)?, init)
        }
        (ModelKind::Rotor(cutoff), MeasureKind::Ssd) => {
            let (e, l) = rotor_operators(cutoff);
            let pair = MeasurePair::new(
                UnitaryObservable::truncated(e)?,
                HermitianObservable::new(l)?,
                UncertaintyMeasure::CircleChordSsd,
                UncertaintyMeasure::Ssd,
            )?;
            (
                pair,
                InitStrategy {
                    max_enumerated: 3,
                    ..init
                },
            )
        }
        // Translations in phase space leave the minimum unchanged, so the
        // centred start suffices; random restarts only wander into the
        // truncation edge and stall there.
        (ModelKind::Oscillator(nmax), MeasureKind::Variance) => (
            hermitian_pair(oscillator_operators(nmax), UncertaintyMeasure::Variance)?,
            InitStrategy {
                mean_grid: 1,
                haar_restarts: 0,
                ..init
            },
        ),
        _ => return Err(unsupported(kind, measure)),
    };
    Ok(ModelSpec {
        kind,
        measure,
        pair,
        init,
    })
}

fn check_weights(alpha: f64, beta: f64) -> Result<()> {
    if alpha > 0.0 && beta > 0.0 && alpha.is_finite() && beta.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidParams(format!(
            "weights ({alpha}, {beta}) must be positive"
        )))
    }
}

fn no_closed_form(kind: ModelKind, measure: MeasureKind) -> Error {
    Error::NoClosedForm(format!("{kind} {measure}"))
}

/// `u(α, β)` from the known border; the rotor value comes from the Mathieu
/// characteristic value.
pub fn closed_form_u(kind: ModelKind, measure: MeasureKind, alpha: f64, beta: f64) -> Result<f64> {
    check_weights(alpha, beta)?;
    let (m, big) = (alpha.min(beta), alpha.max(beta));
    match (kind, measure) {
        (ModelKind::Pauli, MeasureKind::Variance) => Ok(m),
        (ModelKind::Pauli, MeasureKind::Ssd) => Ok(2.0 * (alpha + beta) - 2.0 * alpha.hypot(beta)),
        (ModelKind::Spin1, MeasureKind::Variance) => Ok((8.0 * alpha * beta - m * m) / (16.0 * big)),
        (ModelKind::Spin1, MeasureKind::Ssd) => Ok(0.5 * m + 2.0 * big - 0.5 * (m * m + 16.0 * big * big).sqrt()),
        (ModelKind::Weyl(n), MeasureKind::Mtc) if n >= 2 => {
            let (c, r) = weyl_constants(n, alpha, beta);
            Ok(0.5 * c * (alpha + beta - r))
        }
        (ModelKind::Oscillator(_), MeasureKind::Variance) => Ok((alpha * beta).sqrt()),
        (ModelKind::Rotor(_), MeasureKind::Ssd) => Ok(0.25 * beta * mathieu_be(0, 8.0 * alpha / beta)?),
        _ => Err(no_closed_form(kind, measure)),
    }
}

/// `c = N/(N−1)` and `R = √(α² + β² − kαβ)` with `k = (2N − 4)/N`.
fn weyl_constants(n: usize, alpha: f64, beta: f64) -> (f64, f64) {
    let nf = n as f64;
    let k = (2.0 * nf - 4.0) / nf;
    let r = (alpha * alpha + beta * beta - k * alpha * beta).max(0.0).sqrt();
    (nf / (nf - 1.0), r)
}

/// The contact point `(∂u/∂α, ∂u/∂β)` at `α = t`, `β = 1`. Where the border
/// has a straight segment (`u` has a kink in `t`) the midpoint of the
/// segment is returned.
pub fn closed_form_border_point(kind: ModelKind, measure: MeasureKind, t: f64) -> Result<(f64, f64)> {
    check_weights(t, 1.0)?;
    let mirror = |f: &dyn Fn(f64) -> (f64, f64)| -> (f64, f64) {
        if t < 1.0 {
            f(t)
        } else if t > 1.0 {
            let (x, y) = f(1.0 / t);
            (y, x)
        } else {
            let (x, y) = f(1.0);
            (0.5 * (x + y), 0.5 * (x + y))
        }
    };
    match (kind, measure) {
        (ModelKind::Pauli, MeasureKind::Variance) => Ok(mirror(&|_| (1.0, 0.0))),
        (ModelKind::Pauli, MeasureKind::Ssd) => {
            let r = t.hypot(1.0);
            Ok((2.0 - 2.0 * t / r, 2.0 - 2.0 / r))
        }
        // Below t = 1 the smaller weight is α.
        (ModelKind::Spin1, MeasureKind::Variance) => Ok(mirror(&|s| (0.5 - s / 8.0, s * s / 16.0))),
        (ModelKind::Spin1, MeasureKind::Ssd) => Ok(mirror(&|s| {
            let root = (s * s + 16.0).sqrt();
            (0.5 - 0.5 * s / root, 2.0 - 8.0 / root)
        })),
        (ModelKind::Weyl(n), MeasureKind::Mtc) if n >= 2 => {
            let nf = n as f64;
            let k = (2.0 * nf - 4.0) / nf;
            let (c, r) = weyl_constants(n, t, 1.0);
            Ok((
                0.5 * c * (1.0 - (2.0 * t - k) / (2.0 * r)),
                0.5 * c * (1.0 - (2.0 - k * t) / (2.0 * r)),
            ))
        }
        (ModelKind::Oscillator(_), MeasureKind::Variance) => Ok((0.5 / t.sqrt(), 0.5 * t.sqrt())),
        (ModelKind::Rotor(_), MeasureKind::Ssd) => {
            let (b, db) = mathieu_be_with_derivative(0, 8.0 * t)?;
            Ok((2.0 * db, 0.25 * b - 2.0 * t * db))
        }
        _ => Err(no_closed_form(kind, measure)),
    }
}

/// `u_n(α, β) = (β/4) b_n(8α/β)` with `b_n` the `n`-th value of the sorted
/// spectrum of `π`-periodic Mathieu solutions (2π-periodic wave functions
/// of the rotor).
pub fn rotor_branch_u(n: usize, alpha: f64, beta: f64) -> Result<f64> {
    check_weights(alpha, beta)?;
    Ok(0.25 * beta * pi_periodic_spectrum(8.0 * alpha / beta, n + 1)?[n])
}

/// Seeded random states for scatter plots. Finite models draw from the Haar
/// measure. Truncated models draw Haar states on low windows (`|ℓ| ≤ w` for
/// the rotor, Fock levels `0..=w` for the oscillator) with `w` cycling
/// through `1..=4`; Haar states on the full truncated space sit far from the
/// border and say little.
pub fn sample_states(kind: ModelKind, count: usize, seed: u64) -> Result<Vec<PureState>> {
    use rand::SeedableRng;
    kind.validate()?;
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let dim = kind.dim();
    (0..count)
        .map(|k| {
            let window = 1 + k % 4;
            let (offset, width) = match kind {
                ModelKind::Rotor(cutoff) => (cutoff - window, 2 * window + 1),
                ModelKind::Oscillator(_) => (0, window + 1),
                _ => return crate::state::haar_state(dim, &mut rng),
            };
            let local = crate::state::haar_state(width, &mut rng)?;
            let mut amplitudes = crate::eigen::CVector::zeros(dim);
            amplitudes.rows_mut(offset, width).copy_from(local.amplitudes());
            PureState::new(amplitudes)
        })
        .collect()
}

/// `var(Q)·var(P)` for the four lowest stationary states at `α = β = 1`.
pub fn oscillator_stationary_products(nmax: usize) -> Result<Vec<f64>> {
    let spec = build_model(ModelKind::Oscillator(nmax), MeasureKind::Variance)?;
    let solver = spec.solver();
    (0..4)
        .map(|n| {
            let set = solver.solve(&spec.pair, 1.0, 1.0, n)?;
            let best = set.lowest();
            if n == 0 {
                let tail = spec.truncation_tail(&best.state);
                if tail > OSCILLATOR_TAIL {
                    return Err(Error::TruncationTooSmall(tail));
                }
            }
            let (x, y) = spec.pair.measures(&best.state)?;
            Ok(x * y)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_names() {
        assert_eq!("weyl:5".parse::<ModelKind>().unwrap(), ModelKind::Weyl(5));
        assert_eq!("rotor".parse::<ModelKind>().unwrap(), ModelKind::Rotor(64));
        assert_eq!(
            ModelKind::parse_with_cutoff("rotor", Some(16)).unwrap(),
            ModelKind::Rotor(16)
        );
        assert_eq!(
            ModelKind::parse_with_cutoff("rotor:12", Some(16)).unwrap(),
            ModelKind::Rotor(12)
        );
        assert!("weyl:1".parse::<ModelKind>().is_err());
        assert!("rotor:4".parse::<ModelKind>().is_err());
        assert!("oscillator:8".parse::<ModelKind>().is_err());
        assert!("lattice".parse::<ModelKind>().is_err());
        assert_eq!("var".parse::<MeasureKind>().unwrap(), MeasureKind::Variance);
        for kind in [ModelKind::Pauli, ModelKind::Weyl(4), ModelKind::Oscillator(32)] {
            assert_eq!(kind.to_string().parse::<ModelKind>().unwrap(), kind);
        }
    }

    #[test]
    fn incompatible_measures_are_rejected() {
        assert!(build_model(ModelKind::Weyl(3), MeasureKind::Variance).is_err());
        assert!(build_model(ModelKind::Rotor(8), MeasureKind::Variance).is_err());
        assert!(build_model(ModelKind::Pauli, MeasureKind::Mtc).is_err());
        assert!(matches!(
            closed_form_u(ModelKind::Rotor(8), MeasureKind::Mtc, 1.0, 1.0),
            Err(Error::NoClosedForm(_))
        ));
    }

    #[test]
    fn spin1_spectrum() {
        let (jx, _) = spin1_operators();
        let values = HermitianObservable::new(jx).unwrap().proper_values();
        for (v, e) in values.iter().zip([-1.0, 0.0, 1.0]) {
            assert!((v - e).abs() < 1e-14);
        }
    }

    #[test]
    fn closed_form_examples() {
        let u = |k, m, a, b| closed_form_u(k, m, a, b).unwrap();
        assert_eq!(u(ModelKind::Pauli, MeasureKind::Variance, 1.0, 1.0), 1.0);
        assert!((u(ModelKind::Spin1, MeasureKind::Variance, 1.0, 2.0) - 15.0 / 32.0).abs() < 1e-15);
        assert!((u(ModelKind::Spin1, MeasureKind::Variance, 1.0, 1.0) - 7.0 / 16.0).abs() < 1e-15);
        assert!((u(ModelKind::Oscillator(16), MeasureKind::Variance, 2.0, 8.0) - 4.0).abs() < 1e-15);
        let (x, y) = closed_form_border_point(ModelKind::Spin1, MeasureKind::Variance, 1.0).unwrap();
        assert!((x - 7.0 / 32.0).abs() < 1e-15 && (y - 7.0 / 32.0).abs() < 1e-15);
        let (x, y) = closed_form_border_point(ModelKind::Weyl(3), MeasureKind::Mtc, 1.0).unwrap();
        let expected = (3.0 - 3f64.sqrt()) / 4.0;
        assert!((x - expected).abs() < 1e-14 && (y - expected).abs() < 1e-14);
    }

    /// Finite differences of `u` reproduce the contact point away from
    /// kinks.
    #[test]
    fn border_points_are_gradients() {
        let cases = [
            (ModelKind::Pauli, MeasureKind::Ssd),
            (ModelKind::Spin1, MeasureKind::Variance),
            (ModelKind::Spin1, MeasureKind::Ssd),
            (ModelKind::Weyl(5), MeasureKind::Mtc),
            (ModelKind::Oscillator(16), MeasureKind::Variance),
            (ModelKind::Rotor(8), MeasureKind::Ssd),
        ];
        let h = 1e-6;
        for (kind, measure) in cases {
            for t in [0.05, 0.6, 1.7, 30.0] {
                let (x, y) = closed_form_border_point(kind, measure, t).unwrap();
                let u = |a, b| closed_form_u(kind, measure, a, b).unwrap();
                let dx = (u(t + h, 1.0) - u(t - h, 1.0)) / (2.0 * h);
                let dy = (u(t, 1.0 + h) - u(t, 1.0 - h)) / (2.0 * h);
                assert!((x - dx).abs() < 1e-6 && (y - dy).abs() < 1e-6, "{kind} {measure} t={t}");
            }
        }
    }

    #[test]
    fn weyl_bases_are_unbiased() {
        for n in 2..=7 {
            let (u, v) = weyl_operators(n).unwrap();
            let u = UnitaryObservable::new(u).unwrap();
            let v = UnitaryObservable::new(v).unwrap();
            let overlaps = u.eigenvectors().unwrap().adjoint() * v.eigenvectors().unwrap();
            let target = 1.0 / (n as f64).sqrt();
            assert!(overlaps.iter().all(|o| (o.norm() - target).abs() < 1e-12));
        }
    }

    #[test]
    fn oscillator_commutator() {
        let (q, p) = oscillator_operators(20);
        let comm = &q * &p - &p * &q;
        // [Q, P] = i away from the truncation edge.
        for k in 0..20 {
            assert!((comm[(k, k)] - Complex64::i()).norm() < 1e-12);
        }
    }

    #[test]
    fn windowed_samples_stay_near_the_centre() {
        let states = sample_states(ModelKind::Rotor(8), 8, 1).unwrap();
        let spec = build_model(ModelKind::Rotor(8), MeasureKind::Ssd).unwrap();
        for s in &states {
            assert!(spec.truncation_tail(s) == 0.0);
            let (_, y) = spec.pair.measures(s).unwrap();
            assert!(y <= 16.0);
        }
        let again = sample_states(ModelKind::Rotor(8), 8, 1).unwrap();
        assert!(states.iter().zip(&again).all(|(a, b)| a.amplitudes() == b.amplitudes()));
        assert_eq!(sample_states(ModelKind::Spin1, 3, 1).unwrap().len(), 3);
    }
}
