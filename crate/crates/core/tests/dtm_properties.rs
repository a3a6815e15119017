mod common;

use common::rel_close;
use enso_core::oracle::residual_check;
use enso_core::{dtm, CoupledParams, DelayedParams, Model};

/// Reference closed forms of the first coupled coefficients.
struct Reference {
    w: [f64; 3],
    v: [f64; 3],
}

fn reference_coupled(p: &CoupledParams) -> Reference {
    let CoupledParams {
        c,
        eta,
        gamma: g,
        theta: th,
        eps: e,
        ..
    } = *p;
    let w3 = c
        * (c * c + eta * c - 13.0 * c * e - 2.0 * eta * th - eta * g - 18.0 * e * eta
            + 27.0 * e * e)
        / 6.0
        - (eta
            * (eta * th - 4.0 * th * e - g * th - g * g - 3.0 * e * g - 21.0 * e * e
                + 6.0 * e * eta)
            - 15.0 * e.powi(3))
            / 6.0;
    let v3 = (th * (-c * c - eta * c + 4.0 * c * e + eta * th + 2.0 * th * g) - g.powi(3)) / 6.0
        + th * (3.0 * eta * e - 3.0 * e * e + c * g - g * e - g * g) / 6.0;
    Reference {
        w: [
            c + eta - e,
            (c * c + eta * (c - 3.0 * e - th - g) + e * (3.0 * e - 4.0 * c)) / 2.0,
            w3,
        ],
        v: [-th - g, (th * (-c - eta + e + g) + g * g) / 2.0, v3],
    }
}

/// W(3), V(3) with the two term errors of the reference form repaired: the `15ε³` term enters with a
/// minus sign, and the `2θγ` inside V(3) is `2ηγ`.
fn repaired_third(p: &CoupledParams) -> (f64, f64) {
    let CoupledParams {
        c,
        eta,
        gamma: g,
        theta: th,
        eps: e,
        ..
    } = *p;
    let w3 = c
        * (c * c + eta * c - 13.0 * c * e - 2.0 * eta * th - eta * g - 18.0 * e * eta
            + 27.0 * e * e)
        / 6.0
        - (eta
            * (eta * th - 4.0 * th * e - g * th - g * g - 3.0 * e * g - 21.0 * e * e
                + 6.0 * e * eta)
            + 15.0 * e.powi(3))
            / 6.0;
    let v3 = (th * (-c * c - eta * c + 4.0 * c * e + eta * th + 2.0 * eta * g) - g.powi(3)) / 6.0
        + th * (3.0 * eta * e - 3.0 * e * e + c * g - g * e - g * g) / 6.0;
    (w3, v3)
}

#[test]
fn coupled_recurrence_matches_closed_forms() {
    let mut rng = common::rng(21);
    for _ in 0..200 {
        let p = common::coupled(&mut rng);
        let r = dtm::transform_coupled(&p, 3).unwrap();
        let v = r.depth.as_ref().unwrap();
        let reference = reference_coupled(&p);
        for k in 1..=2 {
            assert!(
                rel_close(r.sst[k], reference.w[k - 1], 1e-12),
                "W({k}) {p:?}"
            );
            assert!(rel_close(v[k], reference.v[k - 1], 1e-12), "V({k}) {p:?}");
        }
        let (w3, v3) = repaired_third(&p);
        assert!(rel_close(r.sst[3], w3, 1e-12), "W(3) {p:?}");
        assert!(rel_close(v[3], v3, 1e-12), "V(3) {p:?}");

        // the reference third-order forms differ by exactly the erroneous terms
        let (e, g, th, eta) = (p.eps, p.gamma, p.theta, p.eta);
        assert!(rel_close(reference.w[2] - r.sst[3], 5.0 * e.powi(3), 1e-11));
        assert!(rel_close(
            reference.v[2] - v[3],
            g * th * (th - eta) / 3.0,
            1e-11
        ));
    }
}

#[test]
fn delayed_recurrence_matches_closed_forms() {
    let mut rng = common::rng(22);
    for _ in 0..200 {
        let p = common::delayed(&mut rng, 4);
        let r = dtm::transform_delayed(&p, 4).unwrap();
        let (al, be, e) = (p.alpha, p.beta, p.eps);
        let d = be * p.sigma - 1.0;
        let lead = al - be - e;
        let w1 = -lead / d;
        let w2 = 0.5 * lead * (al - be - 3.0 * e) / (d * d);
        assert!(rel_close(r.sst[1], w1, 1e-12), "W(1) {p:?}");
        assert!(rel_close(r.sst[2], w2, 1e-12), "W(2) {p:?}");
        // with 15ε² in place of 15ε³
        let w3 = -lead
            * (al * al - 2.0 * al * be - 12.0 * al * e + be * be + 12.0 * be * e + 15.0 * e * e)
            / (6.0 * d.powi(3));
        assert!(rel_close(r.sst[3], w3, 1e-11), "W(3) {p:?}");
        let w4 = lead
            * (al.powi(3) - 3.0 * al * al * be - 39.0 * al * al * e
                + 3.0 * al * be * be
                + 78.0 * al * be * e
                + 135.0 * al * e * e
                - be.powi(3)
                - 39.0 * be * be * e
                - 135.0 * be * e * e
                - 105.0 * e.powi(3))
            / (24.0 * d.powi(4));
        assert!(rel_close(r.sst[4], w4, 1e-11), "W(4) {p:?}");
    }
}

#[test]
fn assembled_series_has_vanishing_residual() {
    let mut rng = common::rng(23);
    for order in [1, 5, 13, 25, 40] {
        let p = common::coupled(&mut rng);
        if let Ok(r) = dtm::transform_coupled(&p, order) {
            let sol = dtm::assemble(&r).unwrap();
            let scale = r
                .sst
                .iter()
                .chain(r.depth.as_ref().unwrap())
                .fold(1.0f64, |m, x| m.max(x.abs()));
            assert!(residual_check(&sol, &Model::Coupled(p)).unwrap() <= 1e-10 * scale);
        }
        let p = common::delayed(&mut rng, order);
        let r = dtm::transform_delayed(&p, order).unwrap();
        let sol = dtm::assemble(&r).unwrap();
        let scale = r.sst.iter().fold(1.0f64, |m, x| m.max(x.abs()));
        assert!(residual_check(&sol, &Model::Delayed(p)).unwrap() <= 1e-10 * scale);
    }
}

#[test]
fn table_parameter_residuals() {
    for eps in [0.1, 0.2] {
        for c in [1.0, 2.0] {
            let p = CoupledParams::new(c, 1.0, 1.0, 1.0, eps).unwrap();
            let sol = dtm::assemble(&dtm::transform_coupled(&p, 25).unwrap()).unwrap();
            assert!(residual_check(&sol, &Model::Coupled(p)).unwrap() <= 1e-10);
        }
    }
    for (a, b, s) in [(0.5, 0.3, 0.25), (1.0, 0.5, 0.5)] {
        let p = DelayedParams::new(a, b, s, 0.05).unwrap();
        let sol = dtm::assemble(&dtm::transform_delayed(&p, 40).unwrap()).unwrap();
        assert!(residual_check(&sol, &Model::Delayed(p)).unwrap() <= 1e-10);
    }
}

#[test]
fn raising_the_order_keeps_lower_coefficients() {
    let mut rng = common::rng(24);
    for _ in 0..20 {
        let p = common::coupled(&mut rng);
        let lo = dtm::transform_coupled(&p, 12).unwrap();
        let hi = dtm::transform_coupled(&p, 20).unwrap();
        assert_eq!(lo.sst[..], hi.sst[..=12]);
        assert_eq!(lo.depth.unwrap()[..], hi.depth.unwrap()[..=12]);

        let p = common::delayed(&mut rng, 20);
        let lo = dtm::transform_delayed(&p, 12).unwrap();
        let hi = dtm::transform_delayed(&p, 20).unwrap();
        assert_eq!(lo.sst[..], hi.sst[..=12]);
    }
}
