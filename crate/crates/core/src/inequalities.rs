//! Uncertainty inequalities for a pair of hermitian observables.
//!
//! Everything derives from splitting `(aA + bB)|ψ⟩` into a part along `|ψ⟩`
//! and a part along a unit ket `|⊥⟩` orthogonal to it.

use num_complex::Complex64;

use crate::eigen::{self, CMatrix, CVector};
use crate::error::{Error, Result};
use crate::observable::HermitianObservable;
use crate::state::PureState;

/// Reports with `|slack|` below this are saturated.
pub const SATURATION_TOLERANCE: f64 = 1e-10;
/// `|γ|` below this means `|ψ⟩` is an eigenvector of `aA + bB`.
pub const GAMMA_ZERO: f64 = 1e-12;
/// Overlap `|⟨ψ|⊥′⟩|` accepted as orthogonal.
pub const ORTHOGONALITY_TOLERANCE: f64 = 1e-10;
/// Variances below this make the rescaling in [`schrodinger_from_robertson`]
/// meaningless.
pub const DEGENERATE_VARIANCE: f64 = 1e-12;

/// `(aA + bB)|ψ⟩ = |ψ⟩·parallel + |⊥⟩·γ`.
#[derive(Debug, Clone)]
pub struct PerpDecomposition {
    pub parallel: Complex64,
    pub gamma: Complex64,
    /// Absent when `|γ| < 1e-12`. The first nonzero amplitude is real and
    /// positive.
    pub perp: Option<PureState>,
}

/// `lhs ≥ rhs`, with `slack = lhs − rhs`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InequalityReport {
    pub lhs: f64,
    pub rhs: f64,
    pub slack: f64,
    pub saturated: bool,
}

impl InequalityReport {
    pub fn new(lhs: f64, rhs: f64) -> Self {
        let slack = lhs - rhs;
        Self {
            lhs,
            rhs,
            slack,
            saturated: slack.abs() < SATURATION_TOLERANCE,
        }
    }
}

/// First and second moments of a pair of observables in one state.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PairMoments {
    pub mean_a: f64,
    pub mean_b: f64,
    pub var_a: f64,
    pub var_b: f64,
    /// `½⟨AB + BA⟩ − ⟨A⟩⟨B⟩`.
    pub correlation: f64,
    /// `⟨(i/2)[A, B]⟩`.
    pub commutator: f64,
}

impl PairMoments {
    pub fn new(state: &PureState, a: &HermitianObservable, b: &HermitianObservable) -> Result<Self> {
        let psi = state.amplitudes();
        let av = state.apply(a.matrix())?;
        let bv = state.apply(b.matrix())?;
        let mean_a = psi.dotc(&av).re;
        let mean_b = psi.dotc(&bv).re;
        let da = av - psi * Complex64::new(mean_a, 0.0);
        let db = bv - psi * Complex64::new(mean_b, 0.0);
        let cross = da.dotc(&db);
        Ok(Self {
            mean_a,
            mean_b,
            var_a: da.norm_squared(),
            var_b: db.norm_squared(),
            correlation: cross.re,
            commutator: -cross.im,
        })
    }

    /// `|γ|²` for coefficients `a`, `b` from the moments alone.
    pub fn gamma_squared(&self, a: Complex64, b: Complex64) -> f64 {
        let ab = a.conj() * b;
        a.norm_sqr() * self.var_a
            + b.norm_sqr() * self.var_b
            + 2.0 * ab.re * self.correlation
            + 2.0 * ab.im * self.commutator
    }
}

fn combination(a: &HermitianObservable, b: &HermitianObservable, ca: Complex64, cb: Complex64) -> Result<CMatrix> {
    if a.dim() != b.dim() {
        return Err(Error::DimensionMismatch {
            expected: a.dim(),
            found: b.dim(),
        });
    }
    Ok(a.matrix() * ca + b.matrix() * cb)
}

/// Splits `(aA + bB)|ψ⟩` into its components along and orthogonal to `|ψ⟩`.
pub fn perp_decompose(
    state: &PureState,
    a: &HermitianObservable,
    b: &HermitianObservable,
    ca: Complex64,
    cb: Complex64,
) -> Result<PerpDecomposition> {
    if ca == Complex64::new(0.0, 0.0) && cb == Complex64::new(0.0, 0.0) {
        return Err(Error::ZeroCoefficients);
    }
    let m = combination(a, b, ca, cb)?;
    let psi = state.amplitudes();
    let image = state.apply(&m)?;
    let parallel = psi.dotc(&image);
    let rest: CVector = image - psi * parallel;
    let length = rest.norm();
    if length < GAMMA_ZERO {
        return Ok(PerpDecomposition {
            parallel,
            gamma: Complex64::new(0.0, 0.0),
            perp: None,
        });
    }
    let lead = rest
        .iter()
        .find(|z| z.norm() > GAMMA_ZERO * length)
        .copied()
        .unwrap_or(Complex64::new(1.0, 0.0));
    let phase = lead.conj() / lead.norm();
    let perp = PureState::normalized(rest * phase)?;
    Ok(PerpDecomposition {
        parallel,
        gamma: phase.conj() * length,
        perp: Some(perp),
    })
}

/// `var A · var B ≥ ⟨(i/2)[A, B]⟩²`.
pub fn robertson(state: &PureState, a: &HermitianObservable, b: &HermitianObservable) -> Result<InequalityReport> {
    let m = PairMoments::new(state, a, b)?;
    Ok(InequalityReport::new(m.var_a * m.var_b, m.commutator * m.commutator))
}

/// `var A · var B ≥ cor(A, B)² + ⟨(i/2)[A, B]⟩²`.
pub fn schrodinger(state: &PureState, a: &HermitianObservable, b: &HermitianObservable) -> Result<InequalityReport> {
    let m = PairMoments::new(state, a, b)?;
    Ok(InequalityReport::new(
        m.var_a * m.var_b,
        m.correlation * m.correlation + m.commutator * m.commutator,
    ))
}

/// `cor(A, B)² ≤ var A · var B`.
pub fn correlation_bound(
    state: &PureState,
    a: &HermitianObservable,
    b: &HermitianObservable,
) -> Result<InequalityReport> {
    let m = PairMoments::new(state, a, b)?;
    Ok(InequalityReport::new(m.var_a * m.var_b, m.correlation * m.correlation))
}

/// `|a|² var A + |b|² var B ≥ |⟨⊥′|(aA + bB)|ψ⟩|² ∓ |ab|⟨i[A, B]⟩` with
/// `b` purely imaginary relative to `a`; the sign giving the larger
/// right-hand side is used.
pub fn maccone_pati_1(
    state: &PureState,
    a: &HermitianObservable,
    b: &HermitianObservable,
    ca: f64,
    cb: f64,
    perp_prime: &PureState,
) -> Result<InequalityReport> {
    let overlap = state.inner(perp_prime)?.norm();
    if overlap > ORTHOGONALITY_TOLERANCE {
        return Err(Error::NotOrthogonal(overlap));
    }
    let m = PairMoments::new(state, a, b)?;
    let (ca, cb) = (ca.abs(), cb.abs());
    let lhs = ca * ca * m.var_a + cb * cb * m.var_b;
    let i_commutator = 2.0 * m.commutator;
    let mut rhs = f64::NEG_INFINITY;
    for sign in [1.0, -1.0] {
        let op = combination(a, b, Complex64::new(ca, 0.0), Complex64::new(0.0, sign * cb))?;
        let projected = perp_prime.amplitudes().dotc(&state.apply(&op)?).norm_sqr();
        rhs = rhs.max(projected - sign * ca * cb * i_commutator);
    }
    Ok(InequalityReport::new(lhs, rhs))
}

/// The perpendicular ket that saturates the first bound of
/// [`maccone_pati_1`]: the `|⊥⟩` of `(|a|A ± i|b|B)|ψ⟩` for the sign with
/// the larger `|γ|`. Absent when both signs give `γ = 0`.
pub fn natural_perp_prime(
    state: &PureState,
    a: &HermitianObservable,
    b: &HermitianObservable,
    ca: f64,
    cb: f64,
) -> Result<Option<PureState>> {
    let plus = perp_decompose(
        state,
        a,
        b,
        Complex64::new(ca.abs(), 0.0),
        Complex64::new(0.0, cb.abs()),
    )?;
    let minus = perp_decompose(
        state,
        a,
        b,
        Complex64::new(ca.abs(), 0.0),
        Complex64::new(0.0, -cb.abs()),
    )?;
    Ok(if plus.gamma.norm() >= minus.gamma.norm() {
        plus.perp.or(minus.perp)
    } else {
        minus.perp.or(plus.perp)
    })
}

/// `a² var A + b² var B ≥ ½|⟨⊥|(aA + bB)|ψ⟩|²` for real `a`, `b`.
pub fn maccone_pati_2(
    state: &PureState,
    a: &HermitianObservable,
    b: &HermitianObservable,
    ca: f64,
    cb: f64,
) -> Result<InequalityReport> {
    let m = PairMoments::new(state, a, b)?;
    let lhs = ca * ca * m.var_a + cb * cb * m.var_b;
    let rhs = match perp_decompose(state, a, b, Complex64::new(ca, 0.0), Complex64::new(cb, 0.0)) {
        Ok(d) => 0.5 * d.gamma.norm_sqr(),
        Err(Error::ZeroCoefficients) => 0.0,
        Err(e) => return Err(e),
    };
    Ok(InequalityReport::new(lhs, rhs))
}

/// `|a|·√var A + |b|·√var B ≥ |⟨⊥|(aA + bB)|ψ⟩|` for real `a`, `b`.
pub fn maccone_pati_3(
    state: &PureState,
    a: &HermitianObservable,
    b: &HermitianObservable,
    ca: f64,
    cb: f64,
) -> Result<InequalityReport> {
    let m = PairMoments::new(state, a, b)?;
    let lhs = ca.abs() * m.var_a.sqrt() + cb.abs() * m.var_b.sqrt();
    let rhs = match perp_decompose(state, a, b, Complex64::new(ca, 0.0), Complex64::new(cb, 0.0)) {
        Ok(d) => d.gamma.norm(),
        Err(Error::ZeroCoefficients) => 0.0,
        Err(e) => return Err(e),
    };
    Ok(InequalityReport::new(lhs, rhs))
}

/// Robertson slack for `A′ = A/λ + λB`, `B′ = A/λ − λB` with
/// `λ² = √(var A / var B)`, paired with four times the Schrödinger slack of
/// `(A, B)`. The two numbers agree identically.
pub fn schrodinger_from_robertson(
    state: &PureState,
    a: &HermitianObservable,
    b: &HermitianObservable,
) -> Result<(f64, f64)> {
    let m = PairMoments::new(state, a, b)?;
    for v in [m.var_a, m.var_b] {
        if v < DEGENERATE_VARIANCE {
            return Err(Error::DegenerateVariance(v));
        }
    }
    let lambda = (m.var_a / m.var_b).sqrt().sqrt();
    let plus = HermitianObservable::new(a.matrix().unscale(lambda) + b.matrix().scale(lambda))?;
    let minus = HermitianObservable::new(a.matrix().unscale(lambda) - b.matrix().scale(lambda))?;
    let transformed = robertson(state, &plus, &minus)?;
    let original = schrodinger(state, a, b)?;
    Ok((transformed.slack, 4.0 * original.slack))
}

/// All eigenpairs of `aA + i·bB` for real `a`, `b`: the states that
/// saturate the Robertson inequality. Sorted by real part, then imaginary
/// part, of the eigenvalue.
pub fn robertson_states(
    a: &HermitianObservable,
    b: &HermitianObservable,
    ca: f64,
    cb: f64,
) -> Result<Vec<(PureState, Complex64)>> {
    let op = combination(a, b, Complex64::new(ca, 0.0), Complex64::new(0.0, cb))?;
    eigen::eig_general(&op)?
        .into_iter()
        .map(|(lambda, v)| Ok((PureState::normalized(v)?, lambda)))
        .collect()
}

/// The inequality families that [`sweep`] can check.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Suite {
    Robertson,
    Schrodinger,
    Correlation,
    MacconePati1,
    MacconePati2,
    MacconePati3,
    /// [`schrodinger_from_robertson`]: the two slacks must agree.
    Transform,
}

impl std::str::FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s.trim().to_ascii_lowercase().as_str() {
            "robertson" => Suite::Robertson,
            "schrodinger" => Suite::Schrodinger,
            "correlation" => Suite::Correlation,
            "mp1" => Suite::MacconePati1,
            "mp2" => Suite::MacconePati2,
            "mp3" => Suite::MacconePati3,
            "a15" | "transform" => Suite::Transform,
            _ => return Err(Error::InvalidParams(format!("unknown inequality {s:?}"))),
        })
    }
}

impl std::fmt::Display for Suite {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Suite::Robertson => "robertson",
            Suite::Schrodinger => "schrodinger",
            Suite::Correlation => "correlation",
            Suite::MacconePati1 => "mp1",
            Suite::MacconePati2 => "mp2",
            Suite::MacconePati3 => "mp3",
            Suite::Transform => "a15",
        })
    }
}

/// Outcome of a sweep over random states.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepReport {
    pub suite: Suite,
    pub count: usize,
    /// Smallest slack, or for [`Suite::Transform`] the largest mismatch.
    pub worst: f64,
    /// States skipped for a degenerate variance.
    pub skipped: usize,
    pub passed: bool,
}

/// Checks `suite` on `count` Haar-random states with standard normal
/// coefficients. Slacks must stay above `−1e-10`; the transform mismatch
/// below `1e-9`.
pub fn sweep(
    suite: Suite,
    a: &HermitianObservable,
    b: &HermitianObservable,
    count: usize,
    seed: u64,
) -> Result<SweepReport> {
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let mut worst = if suite == Suite::Transform { 0.0 } else { f64::INFINITY };
    let mut skipped = 0;
    for _ in 0..count {
        let psi = crate::state::haar_state(a.dim(), &mut rng)?;
        let ca: f64 = rng.sample(rand_distr::StandardNormal);
        let cb: f64 = rng.sample(rand_distr::StandardNormal);
        let report = match suite {
            Suite::Robertson => robertson(&psi, a, b)?,
            Suite::Schrodinger => schrodinger(&psi, a, b)?,
            Suite::Correlation => correlation_bound(&psi, a, b)?,
            Suite::MacconePati1 => {
                let prime = loop {
                    let candidate = crate::state::haar_state(a.dim(), &mut rng)?;
                    let rest = candidate.amplitudes() - psi.amplitudes() * psi.inner(&candidate)?;
                    if rest.norm() > 1e-3 {
                        break PureState::normalized(rest)?;
                    }
                };
                maccone_pati_1(&psi, a, b, ca, cb, &prime)?
            }
            Suite::MacconePati2 => maccone_pati_2(&psi, a, b, ca, cb)?,
            Suite::MacconePati3 => maccone_pati_3(&psi, a, b, ca, cb)?,
            Suite::Transform => {
                match schrodinger_from_robertson(&psi, a, b) {
                    Ok((lhs, rhs)) => worst = f64::max(worst, (lhs - rhs).abs()),
                    Err(Error::DegenerateVariance(_)) => skipped += 1,
                    Err(e) => return Err(e),
                }
                continue;
            }
        };
        worst = f64::min(worst, report.slack);
    }
    let passed = match suite {
        Suite::Transform => worst < 1e-9,
        _ => worst >= -SATURATION_TOLERANCE,
    };
    Ok(SweepReport {
        suite,
        count,
        worst,
        skipped,
        passed,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::state::haar_sample;
    use proptest::prelude::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn sx() -> HermitianObservable {
        HermitianObservable::from_real_rows(&[&[0.0, 1.0], &[1.0, 0.0]]).unwrap()
    }

    fn sy() -> HermitianObservable {
        let m = CMatrix::from_row_slice(2, 2, &[c(0., 0.), c(0., -1.), c(0., 1.), c(0., 0.)]);
        HermitianObservable::new(m).unwrap()
    }

    fn jx() -> HermitianObservable {
        HermitianObservable::from_real_rows(&[&[0., 0., 0.], &[0., 0., 1.], &[0., 1., 0.]]).unwrap()
    }

    fn jy() -> HermitianObservable {
        HermitianObservable::from_real_rows(&[&[0., 0., 1.], &[0., 0., 0.], &[1., 0., 0.]]).unwrap()
    }

    #[test]
    fn eigenstate_has_no_perpendicular_part() {
        let plus = PureState::from_real(&[1.0, 1.0]).unwrap();
        let d = perp_decompose(&plus, &sx(), &sy(), c(1.0, 0.0), c(0.0, 0.0)).unwrap();
        assert!(d.perp.is_none());
        assert_eq!(d.gamma, c(0.0, 0.0));
        assert!((d.parallel - c(1.0, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn sigma_x_flips_z_up() {
        let up = PureState::basis(2, 0).unwrap();
        let d = perp_decompose(&up, &sx(), &sy(), c(1.0, 0.0), c(0.0, 0.0)).unwrap();
        assert!((d.gamma.norm_sqr() - 1.0).abs() < 1e-15);
        let down = PureState::basis(2, 1).unwrap();
        assert!((d.perp.unwrap().inner(&down).unwrap().norm() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn zero_coefficients_rejected() {
        let up = PureState::basis(2, 0).unwrap();
        assert!(matches!(
            perp_decompose(&up, &sx(), &sy(), c(0.0, 0.0), c(0.0, 0.0)),
            Err(Error::ZeroCoefficients)
        ));
    }

    #[test]
    fn z_up_saturates_robertson_and_schrodinger() {
        let up = PureState::basis(2, 0).unwrap();
        let r = robertson(&up, &sx(), &sy()).unwrap();
        assert!((r.lhs - 1.0).abs() < 1e-15 && (r.rhs - 1.0).abs() < 1e-15 && r.saturated);
        assert!(schrodinger(&up, &sx(), &sy()).unwrap().saturated);
        let m = PairMoments::new(&up, &sx(), &sy()).unwrap();
        assert!((m.commutator + 1.0).abs() < 1e-15);
    }

    #[test]
    fn eigenstate_of_a_gives_zero_products() {
        let plus = PureState::from_real(&[1.0, 1.0]).unwrap();
        let r = robertson(&plus, &sx(), &sy()).unwrap();
        assert!(r.lhs.abs() < 1e-15 && r.rhs.abs() < 1e-15);
        assert!(schrodinger(&plus, &sx(), &sy()).unwrap().saturated);
    }

    #[test]
    fn maccone_pati_qubit_values() {
        let up = PureState::basis(2, 0).unwrap();
        let r2 = maccone_pati_2(&up, &sx(), &sy(), 1.0, 1.0).unwrap();
        assert!((r2.lhs - 2.0).abs() < 1e-15 && (r2.rhs - 1.0).abs() < 1e-14);
        let r3 = maccone_pati_3(&up, &sx(), &sy(), 1.0, 1.0).unwrap();
        assert!((r3.lhs - 2.0).abs() < 1e-15 && (r3.rhs - 2f64.sqrt()).abs() < 1e-14);
    }

    #[test]
    fn maccone_pati_1_is_tight_for_the_natural_perp() {
        for s in haar_sample(3, 31, 50).unwrap() {
            let perp = natural_perp_prime(&s, &jx(), &jy(), 0.7, 1.3).unwrap().unwrap();
            let r = maccone_pati_1(&s, &jx(), &jy(), 0.7, 1.3, &perp).unwrap();
            assert!(r.slack.abs() < 1e-10, "slack {}", r.slack);
        }
    }

    #[test]
    fn maccone_pati_1_single_observable() {
        let s = &haar_sample(3, 32, 1).unwrap()[0];
        let perp = natural_perp_prime(s, &jx(), &jy(), 0.0, 1.0).unwrap().unwrap();
        let r = maccone_pati_1(s, &jx(), &jy(), 0.0, 1.0, &perp).unwrap();
        let m = PairMoments::new(s, &jx(), &jy()).unwrap();
        assert!((r.lhs - m.var_b).abs() < 1e-15);
        let direct = perp.amplitudes().dotc(&s.apply(jy().matrix()).unwrap()).norm_sqr();
        assert!((r.rhs - direct).abs() < 1e-14);
    }

    #[test]
    fn maccone_pati_1_rejects_non_orthogonal() {
        let s = PureState::basis(2, 0).unwrap();
        assert!(matches!(
            maccone_pati_1(&s, &sx(), &sy(), 1.0, 1.0, &s),
            Err(Error::NotOrthogonal(_))
        ));
    }

    #[test]
    fn a15_identity_without_correlation() {
        // Real-amplitude qubit states in the x-z plane have cor(σx, σy) = 0.
        let s = PureState::from_real(&[0.8, 0.6]).unwrap();
        let m = PairMoments::new(&s, &sx(), &sy()).unwrap();
        assert!(m.correlation.abs() < 1e-15);
        let (left, right) = schrodinger_from_robertson(&s, &sx(), &sy()).unwrap();
        let robertson_slack = robertson(&s, &sx(), &sy()).unwrap().slack;
        assert!((left - right).abs() < 1e-12);
        assert!((right - 4.0 * robertson_slack).abs() < 1e-12);
    }

    #[test]
    fn a15_rejects_sharp_observable() {
        let plus = PureState::from_real(&[1.0, 1.0]).unwrap();
        assert!(matches!(
            schrodinger_from_robertson(&plus, &sx(), &sy()),
            Err(Error::DegenerateVariance(_))
        ));
    }

    #[test]
    fn qubit_robertson_states_have_unit_variance() {
        for (a, b) in [(2.0, 1.0), (1.0, 2.0), (1.0, 0.3)] {
            for (s, _) in robertson_states(&sx(), &sy(), a, b).unwrap() {
                let m = PairMoments::new(&s, &sx(), &sy()).unwrap();
                assert!((m.var_a - 1.0).abs() < 1e-10 || (m.var_b - 1.0).abs() < 1e-10);
            }
        }
    }

    #[test]
    fn robertson_states_with_b_zero_are_eigenstates() {
        let pairs = robertson_states(&jx(), &jy(), 1.0, 0.0).unwrap();
        let values: Vec<f64> = pairs.iter().map(|(_, l)| l.re).collect();
        for (v, e) in values.iter().zip([-1.0, 0.0, 1.0]) {
            assert!((v - e).abs() < 1e-12);
        }
        assert!(pairs.iter().all(|(_, l)| l.im.abs() < 1e-12));
    }

    #[test]
    fn spin1_first_robertson_family() {
        for phi in [0.2f64, 0.9, 1.4] {
            // (cos φ, i sin φ, 0) is the null vector of aJx + ibJy when tan φ = −b/a.
            let (a, b) = (phi.cos(), -phi.sin());
            let target = PureState::from_slice(&[c(phi.cos(), 0.0), c(0.0, phi.sin()), c(0.0, 0.0)]).unwrap();
            let found = robertson_states(&jx(), &jy(), a, b)
                .unwrap()
                .into_iter()
                .find(|(_, l)| l.norm() < 1e-10)
                .unwrap()
                .0;
            assert!((found.inner(&target).unwrap().norm() - 1.0).abs() < 1e-10);
            let m = PairMoments::new(&found, &jx(), &jy()).unwrap();
            assert!((m.var_a - phi.sin().powi(2)).abs() < 1e-10);
            assert!((m.var_b - phi.cos().powi(2)).abs() < 1e-10);
        }
    }

    proptest! {
        #[test]
        fn decomposition_reconstructs_and_matches_moments(
            seed in 0u64..100_000,
            ar in -2.0f64..2.0, ai in -2.0f64..2.0, br in -2.0f64..2.0, bi in -2.0f64..2.0,
        ) {
            let (a, b) = (c(ar, ai), c(br, bi));
            prop_assume!(a.norm() + b.norm() > 1e-6);
            let s = &haar_sample(3, seed, 1).unwrap()[0];
            let d = perp_decompose(s, &jx(), &jy(), a, b).unwrap();
            let image = s.apply(&(jx().matrix() * a + jy().matrix() * b)).unwrap();
            let mut rebuilt = s.amplitudes() * d.parallel;
            if let Some(p) = &d.perp {
                rebuilt += p.amplitudes() * d.gamma;
                prop_assert!(s.inner(p).unwrap().norm() < 1e-10);
            }
            prop_assert!((image - rebuilt).norm() < 1e-10);
            let m = PairMoments::new(s, &jx(), &jy()).unwrap();
            prop_assert!((m.gamma_squared(a, b) - d.gamma.norm_sqr()).abs() < 1e-10);
        }

        #[test]
        fn inequality_chain(seed in 0u64..100_000) {
            let s = &haar_sample(3, seed, 1).unwrap()[0];
            let r = robertson(s, &jx(), &jy()).unwrap();
            let sc = schrodinger(s, &jx(), &jy()).unwrap();
            prop_assert!(r.slack >= -1e-10 && sc.slack >= -1e-10);
            prop_assert!(sc.rhs >= r.rhs);
            let (left, right) = schrodinger_from_robertson(s, &jx(), &jy()).unwrap();
            prop_assert!((left - right).abs() < 1e-9);
        }
    }

    #[test]
    fn sweeps_pass_for_the_qubit() {
        for name in ["robertson", "schrodinger", "correlation", "mp1", "mp2", "mp3", "a15"] {
            let suite: Suite = name.parse().unwrap();
            assert_eq!(suite.to_string().parse::<Suite>().unwrap(), suite);
            let report = sweep(suite, &sx(), &sy(), 500, 3).unwrap();
            assert!(report.passed, "{name}: {report:?}");
        }
        assert!("mp4".parse::<Suite>().is_err());
    }
}
