use proptest::prelude::*;

use scm_core::mitigation::{build_calibration, correct, correct_or_passthrough};
use scm_core::{ConfusionMatrix, ReadoutNoiseModel};

fn noise_model() -> impl Strategy<Value = ReadoutNoiseModel> {
    (1usize..=4).prop_flat_map(|q| {
        (
            prop::collection::vec(0.0..0.2f64, q),
            prop::collection::vec(0.0..0.2f64, q),
        )
            .prop_map(|(a, b)| ReadoutNoiseModel::new(a, b).unwrap())
    })
}

fn distribution(dim: usize) -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(0.0..1.0f64, dim).prop_map(|v| {
        let s: f64 = v.iter().sum::<f64>().max(1e-9);
        v.into_iter().map(|x| x / s).collect()
    })
}

proptest! {
    #[test]
    fn analytic_confusion_is_column_stochastic(model in noise_model()) {
        let cal = model.analytic_confusion();
        for p in 0..cal.dim() {
            let col: f64 = (0..cal.dim()).map(|m| cal.get(m, p)).sum();
            prop_assert!((col - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn correction_inverts_the_analytic_channel(
        (model, p) in noise_model().prop_flat_map(|m| {
            let dim = 1 << m.qubits();
            (Just(m), distribution(dim))
        })
    ) {
        let cal = model.analytic_confusion();
        let measured = cal.apply(&p);
        let back = correct(&measured, &cal).unwrap();
        for (a, b) in back.iter().zip(&p) {
            prop_assert!((a - b).abs() < 1e-9);
        }
    }

    #[test]
    fn corrected_output_is_a_distribution(
        (model, p) in noise_model().prop_flat_map(|m| {
            let dim = 1 << m.qubits();
            (Just(m), distribution(dim))
        }),
        seed in any::<u64>(),
    ) {
        let cal = build_calibration(&model, 256, seed).unwrap();
        let (x, _) = correct_or_passthrough(&p, &cal);
        prop_assert!(x.iter().all(|v| (0.0..=1.0).contains(v)));
        prop_assert!((x.iter().sum::<f64>() - 1.0).abs() < 1e-9);
    }
}

#[test]
fn calibration_converges_to_the_analytic_matrix() {
    let model = ReadoutNoiseModel::new(vec![0.02, 0.05, 0.1], vec![0.04, 0.01, 0.07]).unwrap();
    let cal = build_calibration(&model, 200_000, 9).unwrap();
    // binomial standard error at 2e5 shots is below 7e-4
    assert!(cal.max_abs_diff(&model.analytic_confusion()) < 5e-3);
}

#[test]
fn noiseless_calibration_is_neutral() {
    let model = ReadoutNoiseModel::noiseless(3);
    let cal = build_calibration(&model, 1000, 0).unwrap();
    assert_eq!(cal, ConfusionMatrix::identity(3));
    let p = [0.1, 0.0, 0.2, 0.05, 0.15, 0.3, 0.0, 0.2];
    let x = correct(&p, &cal).unwrap();
    assert!(x.iter().zip(&p).all(|(a, b)| (a - b).abs() < 1e-15));
}

#[test]
fn singular_calibration_falls_back() {
    let cal = ConfusionMatrix::new(2, vec![0.5, 0.5, 0.5, 0.5]).unwrap();
    let (x, err) = correct_or_passthrough(&[0.3, 0.7], &cal);
    assert!(err.is_some());
    assert_eq!(x, vec![0.3, 0.7]);
}

#[test]
fn malformed_inputs_are_rejected() {
    assert!(ReadoutNoiseModel::new(vec![0.6], vec![0.0]).is_err());
    assert!(ReadoutNoiseModel::new(vec![0.1, 0.1], vec![0.0]).is_err());
    let cal = ConfusionMatrix::identity(1);
    assert!(correct(&[0.5, 0.2], &cal).is_err());
    assert!(correct(&[0.5, 0.5, 0.0], &cal).is_err());
}
