use pdmosc_core::eigensolve::{self, EigenGrid, EigenWarning};
use pdmosc_core::model::{AmbiguityTriple, Branch, ModelParams};
use pdmosc_core::quantum::{self, QuantumConfig};

fn config(omega: f64, a: f64, alpha: f64, beta: f64, m0: f64) -> QuantumConfig {
    let params = if a < 0.0 {
        ModelParams::with_branch(omega, a, Branch::Negative).unwrap()
    } else {
        ModelParams::new(omega, a).unwrap()
    };
    QuantumConfig::new(params, AmbiguityTriple::new(alpha, beta).unwrap(), m0).unwrap()
}

fn reference() -> QuantumConfig {
    config(1.0, 1.0, -0.25, -0.5, 1.0)
}

#[test]
fn xi_space_reproduces_reference_levels() {
    let cfg = reference();
    let grid = eigensolve::default_xi_grid(&cfg, 6).unwrap();
    let res = eigensolve::solve_xi_space(&cfg, &grid, 6).unwrap();
    assert!(res.warnings.is_empty());
    for n in 0..6 {
        let exact = 2.0 * n as f64 + 1.0 + 1.25f64.sqrt();
        let err = (res.values[n] - exact).abs();
        assert!(err < 1e-4, "n={n} err={err:e}");
        assert!(
            err <= res.est_error[n] * 1.5,
            "n={n} err={err:e} est={:e}",
            res.est_error[n]
        );
    }
    let refined = eigensolve::refine(&res, &cfg).unwrap();
    for n in 0..6 {
        let err = (refined.values[n] - quantum::analytic_energy(n, &cfg)).abs();
        assert!(err < 1e-6, "refined n={n} err={err:e}");
    }
}

#[test]
fn refinement_of_converged_result_is_stable() {
    let cfg = reference();
    let grid = eigensolve::default_xi_grid(&cfg, 3).unwrap();
    let once =
        eigensolve::refine(&eigensolve::solve_xi_space(&cfg, &grid, 3).unwrap(), &cfg).unwrap();
    let twice = eigensolve::refine(&once, &cfg).unwrap();
    for n in 0..3 {
        assert!((twice.values[n] - once.values[n]).abs() <= once.est_error[n]);
    }
}

#[test]
fn boundary_case_gives_half_oscillator() {
    let cfg = config(1.0, 0.5, 0.0, -1.0, 1.0);
    let grid = eigensolve::default_xi_grid(&cfg, 5).unwrap();
    let res = eigensolve::solve_xi_space(&cfg, &grid, 5).unwrap();
    assert_eq!(res.warnings, vec![EigenWarning::SingularEndpoint]);
    for n in 0..5 {
        let err = (res.values[n] - (2.0 * n as f64 + 1.5)).abs();
        assert!(err < 1e-4, "n={n} err={err:e}");
    }
}

#[test]
fn second_order_convergence() {
    let cfg = reference();
    let hi = eigensolve::default_xi_grid(&cfg, 4).unwrap().hi();
    let coarse =
        eigensolve::solve_xi_space(&cfg, &EigenGrid::half_line(hi, 2000).unwrap(), 4).unwrap();
    let fine =
        eigensolve::solve_xi_space(&cfg, &EigenGrid::half_line(hi, 4000).unwrap(), 4).unwrap();
    for n in 0..4 {
        let e = quantum::analytic_energy(n, &cfg);
        let ratio = (coarse.values[n] - e) / (fine.values[n] - e);
        assert!((ratio - 4.0).abs() < 0.15, "n={n} ratio={ratio}");
    }
}

#[test]
fn solvers_agree_in_both_coordinates() {
    for cfg in [
        reference(),
        config(1.0, 1.0, 0.0, -1.0, 1.0),
        config(0.7, 2.5, 0.3, -1.1, 1.7),
    ] {
        let xi =
            eigensolve::solve_xi_space(&cfg, &eigensolve::default_xi_grid(&cfg, 6).unwrap(), 6)
                .unwrap();
        let x = eigensolve::solve_x_space(&cfg, &eigensolve::default_x_grid(&cfg, 6).unwrap(), 6)
            .unwrap();
        for n in 0..6 {
            let diff = (xi.values[n] - x.values[n]).abs();
            assert!(diff <= 1e-3, "n={n} diff={diff:e}");
            assert!(
                diff <= xi.est_error[n] + x.est_error[n],
                "n={n} diff={diff:e}"
            );
        }
    }
}

#[test]
fn zero_ambiguity_x_space_spectrum() {
    for a in [1.0, 2.0, 3.5] {
        let cfg = config(1.0, a, 0.0, -1.0, 1.0);
        let res = eigensolve::solve_x_space(&cfg, &eigensolve::default_x_grid(&cfg, 4).unwrap(), 4)
            .unwrap();
        for n in 0..4 {
            let err = (res.values[n] - (2.0 * n as f64 + 1.0 + a)).abs();
            assert!(err < 1e-3, "a={a} n={n} err={err:e}");
        }
    }
}

#[test]
fn negative_branch_is_mirrored() {
    let pos = reference();
    let neg = config(1.0, -1.0, -0.25, -0.5, 1.0);
    let gp = eigensolve::default_x_grid(&pos, 3).unwrap();
    let gn = eigensolve::default_x_grid(&neg, 3).unwrap();
    assert_eq!(gp, gn);
    let rp = eigensolve::solve_x_space(&pos, &gp, 3).unwrap();
    let rn = eigensolve::solve_x_space(&neg, &gn, 3).unwrap();
    assert_eq!(rp.values, rn.values);
    assert!(rn.mirrored && !rp.mirrored);
    assert_eq!(rn.coordinate(0), -rp.coordinate(0));
    assert_eq!(rn.sample(1, -2.0), rp.sample(1, 2.0));
}

#[test]
fn eigenvectors_pull_back_between_coordinates() {
    let cfg = reference();
    let xi = eigensolve::solve_xi_space(&cfg, &eigensolve::default_xi_grid(&cfg, 3).unwrap(), 3)
        .unwrap();
    let x =
        eigensolve::solve_x_space(&cfg, &eigensolve::default_x_grid(&cfg, 3).unwrap(), 3).unwrap();
    let h = x.grid.spacing();
    for n in 0..3 {
        let pulled: Vec<f64> = (0..x.grid.n_points())
            .map(|i| {
                let s = quantum::coordinate_map(x.coordinate(i), &cfg).unwrap();
                xi.sample(n, s) / s.sqrt()
            })
            .collect();
        let norm = (pulled.iter().map(|v| v * v).sum::<f64>() * h).sqrt();
        let overlap: f64 = pulled
            .iter()
            .zip(&x.vectors[n])
            .map(|(p, q)| p * q)
            .sum::<f64>()
            * h
            / norm;
        assert!(overlap.abs() > 1.0 - 1e-6, "n={n} overlap={overlap}");
    }
}

#[test]
fn eigenvectors_are_normalised_and_match_analytic() {
    let cfg = reference();
    let res = eigensolve::solve_xi_space(&cfg, &eigensolve::default_xi_grid(&cfg, 3).unwrap(), 3)
        .unwrap();
    let h = res.grid.spacing();
    for n in 0..3 {
        let v = &res.vectors[n];
        assert!((v.iter().map(|x| x * x).sum::<f64>() * h - 1.0).abs() < 1e-10);
        let wf = quantum::Wavefunction::new(n, &cfg).unwrap();
        let overlap: f64 = (0..v.len())
            .map(|i| v[i] * wf.phi(res.grid.node(i)).unwrap())
            .sum::<f64>()
            * h;
        assert!(overlap > 1.0 - 1e-6, "n={n} overlap={overlap}");
    }
}

#[test]
fn sturm_count_matches_closed_form() {
    let cfg = reference();
    let grid = eigensolve::default_xi_grid(&cfg, 6).unwrap();
    let t = eigensolve::xi_operator(&cfg, &grid).unwrap();
    let tx = eigensolve::x_operator(&cfg, &eigensolve::default_x_grid(&cfg, 6).unwrap());
    for k in 0..6 {
        let lambda = quantum::analytic_energy(k, &cfg) + cfg.omega();
        assert_eq!(t.sturm_count(lambda), k + 1);
        assert_eq!(tx.sturm_count(lambda), k + 1);
    }
}

/// Moving the Dirichlet point from the origin to `h` perturbs E₀ by
/// `O(h^{2ν−1})`, against an `O(h²)` discretisation error.
fn dirichlet_shift(cfg: &QuantumConfig, n_points: usize) -> (f64, f64) {
    let hi = eigensolve::default_xi_grid(cfg, 1).unwrap().hi();
    let grid = EigenGrid::half_line(hi, n_points).unwrap();
    let base = eigensolve::solve_xi_space(cfg, &grid, 1).unwrap();
    let shifted = eigensolve::solve_xi_space(cfg, &grid.shifted(1).unwrap(), 1).unwrap();
    (
        (shifted.values[0] - base.values[0]).abs(),
        base.est_error[0],
    )
}

#[test]
fn dirichlet_point_shift_below_error_estimate_for_large_nu() {
    for cfg in [
        config(0.7, 2.5, 0.3, -1.1, 1.7),
        config(1.0, 2.0, -0.25, -0.5, 1.0),
    ] {
        assert!(cfg.nu() >= 2.0);
        let (shift, est) = dirichlet_shift(&cfg, 4000);
        assert!(shift < est, "shift {shift:e} est {est:e}");
    }
}

#[test]
fn dirichlet_point_shift_scales_with_nu() {
    let cfg = reference();
    let (s1, e1) = dirichlet_shift(&cfg, 4000);
    let (s2, e2) = dirichlet_shift(&cfg, 16000);
    let order = (s1 / s2).log2() / 2.0;
    assert!(
        (order - (2.0 * cfg.nu() - 1.0)).abs() < 0.05,
        "order {order}"
    );
    assert!(s2 / e2 < s1 / e1);
}

#[test]
fn spacing_is_independent_of_ordering() {
    let triples = [(-0.25, -0.5), (0.0, -1.0), (-0.5, 0.0)];
    let mut ground = Vec::new();
    for (alpha, beta) in triples {
        let cfg = config(1.0, 1.0, alpha, beta, 1.0);
        assert!(quantum::analytic_spectrum(&cfg, 6)
            .gaps()
            .iter()
            .all(|&g| g == 2.0));
        let res =
            eigensolve::solve_xi_space(&cfg, &eigensolve::default_xi_grid(&cfg, 6).unwrap(), 6)
                .unwrap();
        for g in eigensolve::spacing_report(&res).unwrap() {
            assert!((g - 2.0).abs() < 1e-4, "gap {g}");
        }
        ground.push(res.values[0]);
        let gamma = -1.0 - alpha - beta;
        let e0 = 1.0 + (1.0 + 4.0 * alpha * gamma).sqrt();
        assert!((res.values[0] - e0).abs() < 1e-4);
    }
    assert!((ground[0] - ground[1]).abs() > 0.1 && (ground[1] - ground[2]).abs() > 0.1);
}

#[test]
fn tolerance_gate() {
    let cfg = reference();
    let res =
        eigensolve::solve_xi_space(&cfg, &EigenGrid::half_line(12.0, 200).unwrap(), 3).unwrap();
    assert!(matches!(
        res.clone().require_tolerance(1e-8),
        Err(eigensolve::EigenError::GridTooCoarse { .. })
    ));
    assert!(res.require_tolerance(1.0).is_ok());
    let one =
        eigensolve::solve_xi_space(&cfg, &EigenGrid::half_line(12.0, 200).unwrap(), 1).unwrap();
    assert!(eigensolve::spacing_report(&one).is_err());
}
