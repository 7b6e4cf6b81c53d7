use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use uncertainty::eigen::CMatrix;
use uncertainty::inequalities::{maccone_pati_1, natural_perp_prime, robertson, schrodinger};
use uncertainty::models::{build_model, inequality_pair, MeasureKind, ModelKind};
use uncertainty::state::haar_state;
use uncertainty::{haar_sample, Complex64, PureState};

/// One-sample Kolmogorov distance of `samples` from the CDF `cdf`.
fn kolmogorov(mut samples: Vec<f64>, cdf: impl Fn(f64) -> f64) -> f64 {
    samples.sort_by(f64::total_cmp);
    let n = samples.len() as f64;
    samples
        .iter()
        .enumerate()
        .map(|(i, &x)| {
            let f = cdf(x);
            (f - i as f64 / n).abs().max((f - (i + 1) as f64 / n).abs())
        })
        .fold(0.0, f64::max)
}

/// `|⟨0|ψ⟩|²` of a Haar state in dimension `d` has CDF `1 − (1 − x)^{d−1}`,
/// before and after any fixed unitary.
#[test]
fn haar_overlaps_are_unitarily_invariant() {
    let d = 4;
    let states = haar_sample(d, 99, 4000).unwrap();
    let w = uncertainty::models::weyl_operators(d).unwrap().1;
    let mix = CMatrix::from_fn(d, d, |r, c| {
        let diagonal = if r == c { 0.8 } else { 0.0 };
        w[(r, c)] * 0.6 + Complex64::new(diagonal, 0.1 * (r + 2 * c) as f64)
    });
    // Orthonormalise the mixed matrix into a unitary.
    let unitary = mix.qr().q();
    let cdf = |x: f64| 1.0 - (1.0 - x).powi(d as i32 - 1);
    let plain: Vec<f64> = states.iter().map(|s| s.amplitudes()[0].norm_sqr()).collect();
    let rotated: Vec<f64> = states
        .iter()
        .map(|s| s.transformed(&unitary).unwrap().amplitudes()[0].norm_sqr())
        .collect();
    // The 99.9% Kolmogorov quantile is about 1.95/√n.
    let bound = 1.95 / (states.len() as f64).sqrt();
    assert!(kolmogorov(plain, cdf) < bound);
    assert!(kolmogorov(rotated, cdf) < bound);
}

#[test]
fn fixed_seed_reproduces_samples() {
    let a = haar_sample(3, 5, 10).unwrap();
    let b = haar_sample(3, 5, 10).unwrap();
    assert!(a.iter().zip(&b).all(|(x, y)| x.amplitudes() == y.amplitudes()));
}

fn seeded_state(dim: usize, seed: u64) -> PureState {
    haar_state(dim, &mut ChaCha8Rng::seed_from_u64(seed)).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn u_is_homogeneous(t in 0.01f64..100.0, scale in 0.1f64..10.0) {
        let spec = build_model(ModelKind::Spin1, MeasureKind::Ssd).unwrap();
        let solver = spec.solver();
        let (u1, _) = solver.u_of(&spec.pair, t, 1.0).unwrap();
        let (u2, _) = solver.u_of(&spec.pair, scale * t, scale).unwrap();
        prop_assert!((u2 - scale * u1).abs() < 1e-9 * (1.0 + u2));
    }

    #[test]
    fn no_sample_beats_u(seed in any::<u64>(), t in 0.01f64..100.0) {
        let spec = build_model(ModelKind::Weyl(4), MeasureKind::Mtc).unwrap();
        let (u, _) = spec.solver().u_of(&spec.pair, t, 1.0).unwrap();
        let (x, y) = spec.pair.measures(&seeded_state(4, seed)).unwrap();
        prop_assert!(t * x + y >= u - 1e-10);
    }

    #[test]
    fn schrodinger_is_at_least_as_strong_as_robertson(seed in any::<u64>()) {
        let (a, b) = inequality_pair(ModelKind::Spin1).unwrap();
        let psi = seeded_state(3, seed);
        let r = robertson(&psi, &a, &b).unwrap();
        let s = schrodinger(&psi, &a, &b).unwrap();
        prop_assert!(s.rhs >= r.rhs - 1e-15);
        prop_assert!(s.slack >= -1e-10);
    }

    #[test]
    fn natural_perpendicular_saturates_the_first_bound(seed in any::<u64>(), ca in -2.0f64..2.0, cb in -2.0f64..2.0) {
        let (a, b) = inequality_pair(ModelKind::Weyl(3)).unwrap();
        let psi = seeded_state(3, seed);
        if let Some(prime) = natural_perp_prime(&psi, &a, &b, ca, cb).unwrap() {
            let report = maccone_pati_1(&psi, &a, &b, ca, cb, &prime).unwrap();
            prop_assert!(report.slack.abs() < 1e-9);
        }
    }
}
