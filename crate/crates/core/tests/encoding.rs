mod common;

use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use supbound_core::encoder::{template_shape, EncodedKind, Env, FormulaDoc};
use supbound_core::{check_model, encode, Criterion, PiMode, Scalar, VerifyOptions};

use common::{load, random_trs};

fn env(pairs: &[(&str, Scalar)]) -> Env {
    pairs
        .iter()
        .map(|(k, v)| ((*k).to_string(), v.clone()))
        .collect()
}

/// Whether every condition holds at every point of `0..=3` (step 1/2) for
/// its universal variables, given `model`.
fn matrix_holds_on_grid(doc: &FormulaDoc, model: &Env) -> Option<String> {
    let grid: Vec<Scalar> = (0..=6).map(|n| Scalar::ratio(n, 2)).collect();
    for c in &doc.conditions {
        let mut idx = vec![0usize; c.vars.len()];
        loop {
            let mut e = model.clone();
            for (v, &i) in c.vars.iter().zip(&idx) {
                e.insert(v.clone(), grid[i].clone());
            }
            if !c.body.eval(&e).unwrap() {
                return Some(c.description.clone());
            }
            let Some(pos) = idx.iter().position(|&i| i + 1 < grid.len()) else {
                break;
            };
            idx[pos] += 1;
            idx[..pos].iter_mut().for_each(|i| *i = 0);
            // keep the cross product small for many-variable conditions
            if c.vars.len() > 4 {
                break;
            }
        }
    }
    None
}

fn random_model<R: Rng>(doc: &FormulaDoc, rng: &mut R) -> Env {
    let mut m: Env = doc
        .coefficients
        .iter()
        .map(|c| (c.clone(), Scalar::from_int(rng.gen_range(0..3))))
        .collect();
    // the side conditions pin nullary constructors
    for c in &doc.coefficients {
        let mut probe = m.clone();
        probe.insert(c.clone(), Scalar::zero());
        if !doc.side.iter().all(|f| f.eval(&m).unwrap())
            && doc.side.iter().all(|f| f.eval(&probe).unwrap())
        {
            m = probe;
        }
    }
    m
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 128, failure_persistence: None, ..ProptestConfig::default() })]

    /// A model the verifier certifies satisfies every encoded condition.
    #[test]
    fn certified_models_satisfy_the_matrix(seed in any::<u64>(), kind in 0..3usize) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let Some(trs) = random_trs(&mut rng) else { return Ok(()) };
        let criterion = [Criterion::Qi, Criterion::Dpi, Criterion::Pi][kind];
        let doc = encode(&trs, criterion, PiMode::Nat, 1, 1, None).unwrap();
        let model = random_model(&doc, &mut rng);
        prop_assume!(doc.side.iter().all(|f| f.eval(&model).unwrap()));
        let report = check_model(&trs, &doc, &model, &VerifyOptions::default()).unwrap();
        if report.is_valid() {
            prop_assert_eq!(matrix_holds_on_grid(&doc, &model), None);
        }
    }

    /// Coefficient names carry the template shape.
    #[test]
    fn shape_round_trips(seed in any::<u64>(), k in 1..3usize, d in 1..3u32) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let Some(trs) = random_trs(&mut rng) else { return Ok(()) };
        let doc = encode(&trs, Criterion::Qi, PiMode::Nat, k, d, None).unwrap();
        let model: Env = doc.coefficients.iter().map(|c| (c.clone(), Scalar::one())).collect();
        prop_assert_eq!(template_shape(&trs, &model), (k, d));
    }
}

#[test]
fn qiex_identity_model() {
    let trs = load("qiex.trs");
    let doc = encode(&trs, Criterion::Qi, PiMode::Nat, 1, 1, None).unwrap();
    let model = env(&[
        ("a_f_1_0", Scalar::zero()),
        ("a_f_1_1", Scalar::one()),
        ("a_s_1_0", Scalar::one()),
        ("a_0_1", Scalar::zero()),
    ]);
    assert!(check_model(&trs, &doc, &model, &VerifyOptions::default())
        .unwrap()
        .is_valid());
    assert_eq!(matrix_holds_on_grid(&doc, &model), None);
}

#[test]
fn halflog_qi_model_fails_in_both_views() {
    let trs = load("halflog.trs");
    let relax = Some(Scalar::one());
    let doc = encode(&trs, Criterion::Qi, PiMode::Nat, 1, 1, relax.clone()).unwrap();
    let half = Scalar::ratio(1, 2);
    let model = env(&[
        ("a_0_1", Scalar::one()),
        ("a_s_1_0", Scalar::one()),
        ("a_half_1_0", half.clone()),
        ("a_half_1_1", half),
        ("a_log_1_0", Scalar::zero()),
        ("a_log_1_1", Scalar::from_int(2)),
    ]);
    let report = check_model(&trs, &doc, &model, &VerifyOptions::relaxed(Scalar::one())).unwrap();
    assert!(!report.is_valid());
    // half(X) = X/2 + 1/2 falls below X past 1
    assert_eq!(
        matrix_holds_on_grid(&doc, &model).as_deref(),
        Some("half dominates argument 1")
    );
}

#[test]
fn pi_delta_adds_a_positive_unknown() {
    let trs = load("doubling.trs");
    let doc = encode(&trs, Criterion::Pi, PiMode::Delta, 1, 1, None).unwrap();
    assert!(doc.coefficients.iter().any(|c| c == "delta"));
    let strict = doc
        .conditions
        .iter()
        .filter(|c| c.kind == EncodedKind::StrictMonotonicity)
        .count();
    assert!(strict > 0);
}
