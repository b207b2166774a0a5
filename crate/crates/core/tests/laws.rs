use lulu::envelopes::{dilate, erode, Radius};
use lulu::lulu::{OperatorWord, SemigroupElement, SmootherConfig};
use lulu::monotonicity::{default_eps, is_locally_monotone, modulus, modulus_hat, ModulusReport};
use lulu::oracle::GridOracle;
use lulu::properties::{full_suite, interior_bounds, Faults};
use lulu::random::{random_padded_pl, random_pl, RandomConfig};
use lulu::{PLFunction, Window};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn draw(seed: u64, jump_prob: f64) -> PLFunction {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    random_pl(&mut rng, &RandomConfig::default().with_jumps(jump_prob)).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn every_law_holds(seed in any::<u64>(), delta in 0.1..3.0_f64, jumps in 0.0..0.6_f64) {
        let f = draw(seed, jumps);
        for c in full_suite(&f, delta, 1e-9, Faults::default()).unwrap() {
            prop_assert!(c.passed, "{:?}", c);
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5eed);
        let g = random_padded_pl(&mut rng, &RandomConfig::default().with_jumps(jumps), 2.0 * delta).unwrap();
        for c in interior_bounds(&g, delta, 1e-9).unwrap() {
            prop_assert!(c.passed, "{:?}", c);
        }
    }

    #[test]
    fn json_round_trip(seed in any::<u64>()) {
        let f = draw(seed, 0.5);
        let back: PLFunction = serde_json::from_str(&serde_json::to_string(&f).unwrap()).unwrap();
        prop_assert_eq!(back, f);
    }

    #[test]
    fn window_queries_bracket_values(seed in any::<u64>(), lo in 0.0..10.0_f64, len in 0.0..4.0_f64) {
        let f = draw(seed, 0.4);
        let w = Window::new(lo, (lo + len).min(10.0)).unwrap();
        let (inf, sup) = (f.window_inf(&w), f.window_sup(&w));
        for k in 0..=50 {
            let x = (w.lo() + (w.hi() - w.lo()) * k as f64 / 50.0).min(w.hi());
            let v = f.eval(x).unwrap();
            prop_assert!(inf <= v && v <= sup);
        }
        prop_assert_eq!(sup, -f.negate().window_inf(&w));
    }

    #[test]
    fn grid_modulus_never_exceeds_exact(seed in any::<u64>(), delta in 0.1..3.0_f64) {
        // with jumps the grid only sees point values and near-side samples,
        // so it bounds the exact modulus from below
        let f = draw(seed, 0.5);
        let o = GridOracle::with_step(&f, 0.02).unwrap();
        let grid = o.grid_modulus(delta).unwrap();
        prop_assert!(grid <= modulus(&f, delta).unwrap() + 1e-9);
    }

    #[test]
    fn moduli_are_ordered(seed in any::<u64>(), delta in 0.1..3.0_f64) {
        let f = draw(seed, 0.3);
        let r = ModulusReport::compute(&f, delta, default_eps(delta)).unwrap();
        prop_assert!(0.0 <= r.mu && r.mu <= r.mu_hat && r.mu_hat <= r.mu_tilde);
        prop_assert_eq!(is_locally_monotone(&f, delta, 1e-9).unwrap(), r.mu <= 1e-9);
    }
}

#[test]
fn monotone_functions_are_fixed_points_away_from_the_ends() {
    // constant near both ends, increasing in between
    let f = PLFunction::from_points(&[(-3.0, 0.0), (0.0, 0.0), (4.0, 2.0), (7.0, 5.0), (10.0, 5.0), (13.0, 5.0)]).unwrap();
    let cfg = SmootherConfig::new(1.5).unwrap();
    assert_eq!(modulus_hat(&f, 1.5, 1e-6).unwrap(), 0.0);
    for e in SemigroupElement::ALL {
        assert!(e.apply(&f, &cfg).sup_norm_diff(&f).unwrap() < 1e-12, "{e}");
    }
}

#[test]
fn all_thirty_words_reduce_consistently() {
    let words = OperatorWord::all_up_to(4);
    assert_eq!(words.len(), 30);
    let f = draw(11, 0.3);
    let cfg = SmootherConfig::new(1.2).unwrap();
    for w in words {
        let direct = w.apply_unreduced(&f, &cfg);
        let reduced = w.reduce().apply(&f, &cfg);
        assert!(direct.sup_norm_diff(&reduced).unwrap() < 1e-9, "{w}");
    }
}

#[test]
fn envelopes_match_grid_for_an_abs_kink() {
    let f = PLFunction::from_points(&[(0.0, 5.0), (5.0, 0.0), (10.0, 5.0)]).unwrap();
    let o = GridOracle::with_step(&f, 1e-3).unwrap();
    let r = Radius::new(1.0).unwrap();
    let (e, d) = (erode(&f, r), dilate(&f, r));
    for ((x, ge), gd) in o.xs().iter().zip(o.grid_erode(1.0)).zip(o.grid_dilate(1.0)) {
        assert!((e.eval(*x).unwrap() - ge).abs() <= 1e-3 + 1e-12);
        assert!((d.eval(*x).unwrap() - gd).abs() <= 1e-3 + 1e-12);
    }
}

