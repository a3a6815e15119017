mod common;

use enso_core::oracle::residual_components;
use enso_core::vim::{
    vim_solve, vim_step_coupled, vim_step_delayed, DelayedFunctional, VimState, DEFAULT_DEGREE_CAP,
};
use enso_core::{dtm, CoupledParams, DelayedParams, Model};

#[test]
fn coupled_iterates_match_taylor_coefficients() {
    let mut rng = common::rng(41);
    for _ in 0..50 {
        let p = common::coupled(&mut rng);
        let w = dtm::transform_coupled(&p, 10).unwrap();
        let model = Model::Coupled(p);
        let mut s = VimState::initial(&model, DEFAULT_DEGREE_CAP).unwrap();
        for n in 1..=10 {
            s = vim_step_coupled(&s, &p).unwrap();
            let h = s.depth.as_ref().unwrap();
            for k in 0..=n {
                assert!(
                    common::rel_close(s.sst.coeff(k), w.sst[k], 1e-12),
                    "n={n} k={k}"
                );
                assert!(common::rel_close(
                    h.coeff(k),
                    w.depth.as_ref().unwrap()[k],
                    1e-12
                ));
            }
        }
    }
}

#[test]
fn delayed_iterates_match_taylor_coefficients() {
    let mut rng = common::rng(42);
    for _ in 0..50 {
        let p = common::delayed(&mut rng, 10);
        let w = dtm::transform_delayed(&p, 10).unwrap();
        let model = Model::Delayed(p);
        let mut s = VimState::initial(&model, DEFAULT_DEGREE_CAP).unwrap();
        for n in 1..=10 {
            s = vim_step_delayed(&s, &p, DelayedFunctional::Reduced).unwrap();
            for k in 0..=n {
                assert!(
                    common::rel_close(s.sst.coeff(k), w.sst[k], 1e-12),
                    "n={n} k={k}"
                );
            }
        }
    }
}

#[test]
fn iterate_residual_vanishes_below_iteration_count() {
    let mut rng = common::rng(43);
    for n in 1..=10 {
        let model = Model::Coupled(common::coupled(&mut rng));
        let s = vim_solve(&model, n, DEFAULT_DEGREE_CAP).unwrap();
        let scale = s
            .sst
            .max_abs()
            .max(s.depth.as_ref().unwrap().max_abs())
            .max(1.0);
        let r = residual_components(&s.solution().unwrap(), &model, n).unwrap();
        assert!(r.max() <= 1e-10 * scale, "n={n}: {}", r.max());
    }
}

fn max_gap(a: &enso_core::SeriesPoly, b: &enso_core::SeriesPoly) -> f64 {
    (0..=200)
        .map(|i| i as f64 / 200.0)
        .map(|t| (a.eval(t) - b.eval(t)).abs())
        .fold(0.0, f64::max)
}

#[test]
fn iterate_differences_shrink_on_table_parameters() {
    let table1 = Model::Coupled(CoupledParams::new(1.0, 1.0, 1.0, 1.0, 0.1).unwrap());
    let table3 = Model::Delayed(DelayedParams::new(0.5, 0.3, 0.25, 0.05).unwrap());
    for model in [table1, table3] {
        let iterates: Vec<_> = (0..=12)
            .map(|n| vim_solve(&model, n, DEFAULT_DEGREE_CAP).unwrap().sst)
            .collect();
        let gaps: Vec<f64> = iterates.windows(2).map(|w| max_gap(&w[0], &w[1])).collect();
        for w in gaps.windows(2) {
            assert!(w[1] <= w[0], "{model:?}: {gaps:?}");
        }
    }
}
