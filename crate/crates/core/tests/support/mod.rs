#![allow(dead_code)]

use std::f64::consts::PI;
use std::sync::OnceLock;

use magstep::Context;

/// One context per test binary so that cached constants are shared.
pub fn ctx() -> &'static Context {
    static CTX: OnceLock<Context> = OnceLock::new();
    CTX.get_or_init(Context::default)
}

const GK_NODES: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const K15_WEIGHTS: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_2,
    0.140_653_259_715_525_9,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_8,
];
const G7_WEIGHTS: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

fn gk15<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> (f64, f64) {
    let (c, h) = (0.5 * (a + b), 0.5 * (b - a));
    let fc = f(c);
    let (mut k, mut g) = (K15_WEIGHTS[7] * fc, G7_WEIGHTS[3] * fc);
    for i in 0..7 {
        let s = f(c - h * GK_NODES[i]) + f(c + h * GK_NODES[i]);
        k += K15_WEIGHTS[i] * s;
        if i % 2 == 1 {
            g += G7_WEIGHTS[i / 2] * s;
        }
    }
    (k * h, ((k - g) * h).abs())
}

/// Adaptive Gauss–Kronrod (7/15) quadrature by bisection.
pub fn adaptive_gk<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, rtol: f64) -> f64 {
    let mut stack = vec![(a, b, 0usize)];
    let (whole, _) = gk15(f, a, b);
    let scale = whole.abs().max(1e-300);
    let mut total = 0.0;
    while let Some((lo, hi, depth)) = stack.pop() {
        let (v, err) = gk15(f, lo, hi);
        if err <= rtol * scale * (hi - lo) / (b - a) || depth > 40 {
            total += v;
        } else {
            let mid = 0.5 * (lo + hi);
            stack.push((lo, mid, depth + 1));
            stack.push((mid, hi, depth + 1));
        }
    }
    total
}

/// Composite Simpson with `n` (even) panels.
pub fn simpson<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, n: usize) -> f64 {
    let h = (b - a) / n as f64;
    let inner: f64 = (1..n).map(|i| f(a + h * i as f64) * if i % 2 == 1 { 4.0 } else { 2.0 }).sum();
    (f(a) + f(b) + inner) * h / 3.0
}

/// Trial energy `Q(u₀) - Λ‖u₀‖²` of `u₀ = exp(-ωρ²/2 - iρ g(θ))` by direct
/// two-dimensional quadrature of the polar integrand: adaptive
/// Gauss–Kronrod in `ρ ∈ (0, 12/√ω]`, composite Simpson in `θ` on each side
/// of the discontinuity.
pub fn trial_energy_quadrature(alpha: f64, gamma: f64, a: f64, omega: f64, lambda: f64, c: [f64; 4]) -> f64 {
    let [c1, c2, c3, c4] = c;
    let (sg, cg) = gamma.sin_cos();
    let radial = |t: f64, left: bool| {
        let (p, m, s) = if left { (c1, c2, a) } else { (c3, c4, 1.0) };
        let (gv, dgv) = (p * t.exp() + m * (-t).exp(), p * t.exp() - m * (-t).exp());
        let integrand = |r: f64| {
            let w = (-omega * r * r).exp();
            r * w * (gv * gv + dgv * dgv - lambda) - r * r * w * s * dgv * cg
                + r.powi(3) * w * (omega * omega + s * s * sg * sg * t.sin().powi(2) + 0.25 * s * s * cg * cg)
        };
        adaptive_gk(&integrand, 0.0, 12.0 / omega.sqrt(), 1e-12)
    };
    simpson(&|t| radial(t, true), alpha - PI, 0.0, 2000) + simpson(&|t| radial(t, false), 0.0, alpha, 2000)
}

/// `A[α, γ, a]` written out independently, with `coth` evaluated directly
/// and the terms summed in a different order.
pub fn coefficient_a_reference(alpha: f64, gamma: f64, a: f64) -> f64 {
    let coth = PI.cosh() / PI.sinh();
    let c2 = gamma.cos().powi(2);
    let s2 = gamma.sin().powi(2);
    let t_tilt = 4.0 * ((2.0 * PI).exp() - 1.0)
        * (2.0 * (a * a - 1.0) * s2 * (2.0 * alpha).sin() + (3.0 - (2.0 * gamma).cos()) * (alpha + a * a * (PI - alpha)));
    let t_field = -2.0 * PI.exp() * ((3.0 - 2.0 * a + 3.0 * a * a) * PI.cosh() - 4.0 * a)
        - (a - 1.0).powi(2) * ((2.0 * alpha).exp() + (2.0 * PI - 2.0 * alpha).exp())
        + 4.0 * (a - 1.0) * ((a * PI.exp() - 1.0) * alpha.exp() + (a - PI.exp()) * (PI - alpha).exp());
    (coth - 1.0) * (t_tilt + PI * c2 * t_field) / 128.0
}
