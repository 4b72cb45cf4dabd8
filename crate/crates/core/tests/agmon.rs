mod support;

use std::f64::consts::FRAC_PI_2;

use magstep::agmon::*;
use magstep::reduced2d::{eigenfunction, Eigenstate, StepFieldParams};
use magstep::{Context, Error, Resolution};
use support::ctx;

fn state(ctx: &Context) -> Eigenstate {
    eigenfunction(ctx, &StepFieldParams::new(FRAC_PI_2, 0.0, -1.0).unwrap(), 0.0).unwrap()
}

#[test]
fn half_bound_rate() {
    let st = state(ctx());
    let bound = (st.sigma_ess - st.sigma).sqrt();
    let r = decay_report(&st, 0.5 * bound).unwrap();
    assert!(r.weighted_energy.is_finite());
    assert!(r.eta_fit > 0.0 && r.eta_fit >= 0.5 * bound - 0.1);
    assert!(r.slope <= -2.0 * r.eta_fit + 1e-12);
    assert!(r.r_squared >= 0.98);
    let tail: Vec<f64> = r.shells.iter().filter(|s| s.radius >= r.bulk_radius).map(|s| s.mass).collect();
    assert!(tail.windows(2).all(|w| w[1] <= w[0]));
}

#[test]
fn zero_weight_gives_the_eigenvalue() {
    let st = state(ctx());
    let r = decay_report(&st, 0.0).unwrap();
    assert!((r.weighted_energy - st.sigma).abs() < 1e-8);
}

#[test]
fn rate_at_or_above_bound_is_rejected() {
    let st = state(ctx());
    let bound = (st.sigma_ess - st.sigma).sqrt();
    assert!(matches!(decay_report(&st, bound), Err(Error::EtaOutOfRange { .. })));
    assert!(matches!(decay_report(&st, -0.1), Err(Error::EtaOutOfRange { .. })));
}

#[test]
fn weighted_energy_stable_under_box_enlargement() {
    let st = state(ctx());
    let big_ctx = Context::new(Resolution { box_radius: 60.0, ..Resolution::default() });
    let big = state(&big_ctx);
    let bound = (st.sigma_ess - st.sigma).sqrt();
    for f in [0.2, 0.5, 0.8] {
        let w0 = decay_report(&st, f * bound).unwrap().weighted_energy;
        let w1 = decay_report(&big, f * bound).unwrap().weighted_energy;
        assert!(w1 < 2.0 * w0 && w0 < 2.0 * w1, "eta = {f} bound: {w0} vs {w1}");
    }
}

#[test]
fn shells_csv() {
    let st = state(ctx());
    let r = decay_report(&st, 0.0).unwrap();
    let mut buf = Vec::new();
    write_shells_csv(&r, &mut buf).unwrap();
    let text = String::from_utf8(buf).unwrap();
    assert!(text.starts_with("radius,shell_mass\n"));
    assert_eq!(text.lines().count(), r.shells.len() + 1);
}
