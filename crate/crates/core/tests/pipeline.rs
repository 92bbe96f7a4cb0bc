use hscale::fredholm::{
    kernel_cokernel, project_p, project_pplus, solve_const, SingularConfig, SolveConfig,
};
use hscale::operators::{examples, MatrixDiffOp};
use hscale::rofunc::RoFunction;
use hscale::torus::{hnorm_vec, inner_product, random_trig_vector, TrigVector};
use hscale::verify::{
    embedding_chain_check, local_regularity_diagnostic, regularity_lift_experiment,
    ExperimentConfig, ExperimentReport, Verdict,
};
use hscale::Error;
use proptest::prelude::*;

const SHIFTED_JSON: &str = r#"{
  "p": 2,
  "entries": [
    [{"terms": [{"alpha": [1], "coeff": [{"k": [0], "re": 1.0}]}, {"alpha": [0], "coeff": [{"k": [0], "re": -1.0}]}]}, {"terms": []}],
    [{"terms": []}, {"terms": [{"alpha": [1], "coeff": [{"k": [0], "re": 1.0}]}]}]
  ]
}"#;

#[test]
fn literal_to_solution() {
    let a = MatrixDiffOp::from_json(SHIFTED_JSON).unwrap();
    assert_eq!(a.to_literal(), examples::shifted_diag().to_literal());
    let report = kernel_cokernel(&a, &SingularConfig::default()).unwrap();
    assert_eq!(
        (
            report.kernel_basis.len(),
            report.cokernel_basis.len(),
            report.index
        ),
        (2, 2, 0)
    );

    let phi = RoFunction::power(0.5);
    let weights = vec![phi.clone(), phi.clone()];
    let f = random_trig_vector(1, 12, &weights, 1.0, 9, 0).unwrap();
    assert!(matches!(
        solve_const(&a, &f, &phi, &SolveConfig::default()),
        Err(Error::IncompatibleData { .. })
    ));
    let g = project_pplus(&f, &report).unwrap();
    let sol = solve_const(&a, &g, &phi, &SolveConfig::default()).unwrap();
    let back = a.apply(&sol.u).unwrap();
    assert!(hnorm_vec(&(&back - &g), &phi).unwrap() < 1e-12);
    // The minimum-norm solution already lies in the range of P.
    assert!(project_p(&sol.u, &report).unwrap().max_abs_diff(&sol.u) < 1e-14);
}

#[test]
fn reports_are_recomputable_from_json() {
    let cfg = ExperimentConfig {
        bandwidths: vec![8, 16, 32],
        samples: 5,
        ..Default::default()
    };
    let reports = [
        regularity_lift_experiment(&examples::rotation(), &RoFunction::power(1.0), &cfg).unwrap(),
        embedding_chain_check(&RoFunction::log_power(0.7, 1.0, 0.0), 0.2, 1.0, 2, &cfg).unwrap(),
    ];
    for r in reports {
        let back: ExperimentReport = serde_json::from_str(&r.to_json()).unwrap();
        assert!(back.recheck());
        assert_eq!(back.parameters["seed"], 0);
        assert_eq!(back.verdict, Verdict::Pass);
        assert_eq!(r.to_csv().lines().count(), r.observations.len() + 1);
    }
}

#[test]
fn constant_cutoff_matches_global_shells() {
    let a = examples::diag_d(1);
    let u = random_trig_vector(1, 32, &[RoFunction::one(), RoFunction::one()], 1.0, 2, 0).unwrap();
    let one = hscale::torus::TrigPoly::constant(1, hscale::Complex64::new(1.0, 0.0));
    let r = local_regularity_diagnostic(&a, &RoFunction::one(), &one, &u).unwrap();
    let shells = hscale::torus::shell_energies(u.component(0), &RoFunction::power(1.0)).unwrap();
    let recorded: Vec<f64> = r
        .observations
        .iter()
        .filter(|o| o.quantity == "shell_energy_c0")
        .map(|o| o.value)
        .collect();
    assert_eq!(recorded, shells);
    assert_eq!(r.verdict, Verdict::Inconclusive);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn projected_data_is_always_solvable(seed in any::<u64>(), bw in 1u64..10) {
        for a in [examples::diag_d(1), examples::shifted_diag(), examples::coupled()] {
            let report = kernel_cokernel(&a, &SingularConfig::default()).unwrap();
            let w = vec![RoFunction::one(); 2];
            let f = project_pplus(&random_trig_vector(1, bw, &w, 1.0, seed, 0).unwrap(), &report).unwrap();
            for v in &report.cokernel_basis {
                prop_assert!(inner_product(&f, v).unwrap().norm() < 1e-12);
            }
            let sol = solve_const(&a, &f, &RoFunction::one(), &SolveConfig::default()).unwrap();
            prop_assert!(sol.residual < 1e-11);
            for w in &report.kernel_basis {
                prop_assert!(inner_product(&sol.u, w).unwrap().norm() < 1e-12);
            }
        }
    }

    #[test]
    fn solution_operator_is_linear(seed in any::<u64>(), c in -3.0f64..3.0) {
        let a = examples::rotation();
        let w = vec![RoFunction::one(); 2];
        let f = random_trig_vector(1, 6, &w, 1.0, seed, 0).unwrap();
        let g = random_trig_vector(1, 6, &w, 1.0, seed, 1).unwrap();
        let cfg = SolveConfig::default();
        let phi = RoFunction::one();
        let combo: TrigVector = &f.scale(hscale::Complex64::new(c, 0.0)) + &g;
        let lhs = solve_const(&a, &combo, &phi, &cfg).unwrap().u;
        let rhs = &solve_const(&a, &f, &phi, &cfg).unwrap().u.scale(hscale::Complex64::new(c, 0.0))
            + &solve_const(&a, &g, &phi, &cfg).unwrap().u;
        prop_assert!(lhs.max_abs_diff(&rhs) < 1e-12);
    }
}
