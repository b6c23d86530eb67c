mod common;

use common::{gl1, gl1_oracle, gl1_pair, rng, wobbly_torus, TAU};
use holonomy2_core::crossed::CrossedModule;
use holonomy2_core::forms::{MCPair, PolyForm, ValueSpace};
use holonomy2_core::lie::LieAlgebra;
use holonomy2_core::linf::{L3Normalization, TwoTermLinf};
use holonomy2_core::loopspace::{
    connection_a0, flatness_residual, surface_holonomy, transport, v_form, LoopTangent, PairFields,
    SampledLoop, SampledSurface, TransportProblem,
};
use holonomy2_core::numeric::{RMat, Stencil};
use holonomy2_core::rational::q;
use holonomy2_core::Error;
use proptest::prelude::*;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

/// Plain Taylor series, no scaling.
fn series_exp(m: &RMat, terms: usize) -> RMat {
    let n = m.rows();
    let mut acc = RMat::identity(n);
    let mut term = RMat::identity(n);
    for k in 1..terms {
        term = term.mul(m).scale(1.0 / k as f64);
        acc = acc.add(&term);
    }
    acc
}

fn random_mat(r: &mut ChaCha8Rng, n: usize, scale: f64) -> RMat {
    let mut m = RMat::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            m[(i, j)] = scale * r.gen_range(-1.0..1.0);
        }
    }
    m
}

/// A smooth loop in R^2 built from a few Fourier modes of amplitude <= 1/2.
fn random_loop(r: &mut ChaCha8Rng, m: usize) -> SampledLoop {
    let c: Vec<f64> = (0..8).map(|_| r.gen_range(-0.5..0.5)).collect();
    SampledLoop::from_fn(m, 2, move |t| {
        let (s1, c1, s2, c2) = ((TAU * t).sin(), (TAU * t).cos(), (2.0 * TAU * t).sin(), (2.0 * TAU * t).cos());
        vec![
            c[0] * s1 + c[1] * c1 + 0.3 * (c[2] * s2 + c[3] * c2),
            c[4] * s1 + c[5] * c1 + 0.3 * (c[6] * s2 + c[7] * c2),
        ]
    })
    .unwrap()
}

fn unit_circle(m: usize) -> SampledLoop {
    SampledLoop::from_fn(m, 2, |t| vec![(TAU * t).cos(), (TAU * t).sin()]).unwrap()
}

fn dxdy(_: &[f64], u: &[f64], v: &[f64]) -> Vec<f64> {
    vec![u[0] * v[1] - u[1] * v[0]]
}

fn zero_connection(n: usize) -> TransportProblem<impl Fn(&[f64], &[f64]) -> RMat> {
    TransportProblem::new(n, move |_: &[f64], _: &[f64]| RMat::zeros(n, n))
}

#[test]
fn constant_connection_matches_series() {
    let mut r = rng(1);
    let line = SampledLoop::from_fn(512, 1, |t| vec![t]).unwrap().with_winding(vec![1.0]).unwrap();
    for _ in 0..5 {
        let m = random_mat(&mut r, 3, 0.6);
        let p = TransportProblem::new(3, |_: &[f64], v: &[f64]| m.scale(v[0]));
        let t = transport(&p, &line, 0.0, 1.0).unwrap();
        assert!(t.max_abs_diff(&series_exp(&m, 20)) < 1e-9);
    }
}

#[test]
fn abelian_transport_is_exponential_of_line_integral() {
    let mut r = rng(2);
    let c = 0.7;
    let p = TransportProblem::new(1, move |_: &[f64], v: &[f64]| RMat::scalar(1, c * v[0]));
    for _ in 0..5 {
        let g = random_loop(&mut r, 256);
        let (k0, k1) = (r.gen_range(0..128), r.gen_range(128..=256));
        let (s0, s1) = (k0 as f64 / 256.0, k1 as f64 / 256.0);
        let t = transport(&p, &g, s0, s1).unwrap();
        let want = (c * (g.point(k1)[0] - g.point(k0)[0])).exp();
        assert!((t[(0, 0)] - want).abs() < 1e-8);
    }
}

#[test]
fn composition_law() {
    let mut r = rng(3);
    for _ in 0..5 {
        let g = random_loop(&mut r, 512);
        let (m1, m2) = (random_mat(&mut r, 3, 0.5), random_mat(&mut r, 3, 0.5));
        let p = TransportProblem::new(3, |x: &[f64], v: &[f64]| {
            m1.scale(v[0] * (1.0 + x[1])).add(&m2.scale(v[1] * x[0]))
        });
        let mut s: Vec<f64> = (0..3).map(|_| r.gen_range(0.0..1.0)).collect();
        s.sort_by(f64::total_cmp);
        let whole = transport(&p, &g, s[0], s[2]).unwrap();
        let split = transport(&p, &g, s[1], s[2]).unwrap().mul(&transport(&p, &g, s[0], s[1]).unwrap());
        assert!(whole.max_abs_diff(&split) < 1e-7);
    }
}

#[test]
fn v_form_examples() {
    let g = unit_circle(64);
    let p = zero_connection(2);
    assert_eq!(v_form(&p, &g, &[]).unwrap(), vec![0.0, 0.0]);
    assert_eq!(v_form(&p, &g, &[(0.3, vec![1.5, -2.0])]).unwrap(), vec![1.5, -2.0]);

    let c = 0.4;
    let p = TransportProblem::new(1, move |_: &[f64], v: &[f64]| RMat::scalar(1, c * v[0]));
    let k = 20;
    let got = v_form(&p, &g, &[(k as f64 / 64.0, vec![2.0])]).unwrap();
    let want = (c * (g.point(64)[0] - g.point(k)[0])).exp() * 2.0;
    assert!((got[0] - want).abs() < 1e-8);

    // Two insertions add their transported vectors.
    let ins = [(0.25, vec![1.0]), (0.5, vec![3.0])];
    let got = v_form(&p, &g, &ins).unwrap()[0];
    let want = (c * (1.0 - g.point(16)[0])).exp() + 3.0 * (c * (1.0 - g.point(32)[0])).exp();
    assert!((got - want).abs() < 1e-8);
}

#[test]
fn a0_trivial_cases() {
    let mut r = rng(4);
    let g = random_loop(&mut r, 128);
    let p = zero_connection(1);
    let radial = LoopTangent::from_fn(128, 2, |t| vec![(TAU * t).cos(), (TAU * t).sin()]).unwrap();
    let zero_b = |_: &[f64], _: &[f64], _: &[f64]| vec![0.0];
    assert_eq!(connection_a0(&p, &zero_b, &g, &radial).unwrap(), vec![0.0]);
    let own = LoopTangent::velocity_of(&g);
    assert!(connection_a0(&p, &dxdy, &g, &own).unwrap()[0].abs() < 1e-14);
}

#[test]
fn a0_on_unit_circle_matches_quadrature_oracle() {
    let m = 512;
    let g = unit_circle(m);
    let radial = LoopTangent::from_fn(m, 2, |t| vec![(TAU * t).cos(), (TAU * t).sin()]).unwrap();
    let got = connection_a0(&zero_connection(1), &dxdy, &g, &radial).unwrap()[0];
    // Oracle: ∫ (ẋ δy - ẏ δx) dσ with analytic derivatives, midpoint rule.
    let n = 20_000;
    let oracle: f64 = (0..n)
        .map(|i| {
            let t = (i as f64 + 0.5) / n as f64;
            let (xd, yd) = (-TAU * (TAU * t).sin(), TAU * (TAU * t).cos());
            (xd * (TAU * t).sin() - yd * (TAU * t).cos()) / n as f64
        })
        .sum();
    assert!((got - oracle).abs() < 1e-6, "{got} vs {oracle}");
    assert!((oracle + TAU).abs() < 1e-9);
}

#[test]
fn surface_trivial_cases() {
    let p = zero_connection(1);
    let f = SampledSurface::from_fn(16, 16, 2, |t, s| {
        vec![(TAU * s).cos() * (1.0 + 0.2 * (TAU * t).sin()), (TAU * s).sin()]
    })
    .unwrap();
    let zero_b = |_: &[f64], _: &[f64], _: &[f64]| vec![0.0];
    assert_eq!(surface_holonomy(&p, &zero_b, &f).unwrap(), vec![0.0]);
    let still = SampledSurface::from_fn(16, 16, 2, |_, s| vec![(TAU * s).cos(), (TAU * s).sin()]).unwrap();
    assert_eq!(surface_holonomy(&p, &dxdy, &still).unwrap(), vec![0.0]);
    let nonab = zero_connection(1).with_abelian_target(false);
    assert!(matches!(surface_holonomy(&nonab, &dxdy, &f), Err(Error::Unsupported(_))));
}

#[test]
fn pair_fields_detect_nonabelian_target() {
    let t = TwoTermLinf::from_crossed(&CrossedModule::identity(&LieAlgebra::sl2())).unwrap();
    let pair = MCPair {
        a: PolyForm::zero(2, ValueSpace::L0, 3),
        b: PolyForm::zero(2, ValueSpace::Lm1, 3),
    };
    let fields = PairFields::new(&pair, &t).unwrap();
    let f = SampledSurface::from_fn(8, 8, 2, |_, s| vec![s, 0.0]).unwrap();
    assert!(matches!(
        surface_holonomy(&fields.problem(), &fields.curving(), &f),
        Err(Error::Unsupported(_))
    ));
}

#[test]
fn gl1_holonomy_matches_weighted_oracle() {
    let pair = gl1_pair((1, 2), (2, 1));
    let fields = PairFields::new(&pair, &gl1()).unwrap();
    let f = SampledSurface::from_fn(128, 128, 2, wobbly_torus).unwrap();
    let got = surface_holonomy(&fields.problem(), &fields.curving(), &f).unwrap()[0];
    let oracle = gl1_oracle(0.5, 2.0, 600);
    assert!(oracle.abs() > 1e-2, "oracle should be nontrivial: {oracle}");
    assert!((got - oracle).abs() < 1e-4 * oracle.abs().max(1.0), "{got} vs {oracle}");
}

#[test]
fn reparametrization_invariance() {
    let pair = gl1_pair((1, 2), (2, 1));
    let fields = PairFields::new(&pair, &gl1()).unwrap();
    let (p, b) = (fields.problem(), fields.curving());
    let phi = |t: f64| t + 0.05 * (TAU * t).sin();
    let psi = |s: f64| s + 0.08 * (TAU * s).sin();
    let f = SampledSurface::from_fn(128, 128, 2, wobbly_torus).unwrap();
    let g = SampledSurface::from_fn(128, 128, 2, |t, s| wobbly_torus(phi(t), psi(s))).unwrap();
    let (a, b2) = (surface_holonomy(&p, &b, &f).unwrap()[0], surface_holonomy(&p, &b, &g).unwrap()[0]);
    assert!((a - b2).abs() < 1e-5, "{a} vs {b2}");
}

#[test]
fn flat_torus_with_unit_winding_integrates_to_one() {
    for stencil in [Stencil::Second, Stencil::Eighth] {
        let f = SampledSurface::from_fn(64, 64, 2, |t, s| {
            vec![s + 0.05 * (TAU * (s + t)).sin(), t + 0.03 * (TAU * s).cos()]
        })
        .unwrap()
        .with_windings(vec![0.0, 1.0], vec![1.0, 0.0])
        .unwrap()
        .with_stencil(stencil);
        let h = surface_holonomy(&zero_connection(1), &dxdy, &f).unwrap()[0];
        assert!((h - 1.0).abs() < 1e-12, "{stencil:?}: {h}");
    }
}

#[test]
fn flatness_family_for_mc_and_control() {
    let based = |r: f64| {
        move |t: f64, s: f64| {
            vec![
                r * (1.0 - (TAU * s).cos()) * (1.0 + 0.5 * (TAU * t).cos()),
                r * (TAU * s).sin() * (1.0 + 0.5 * (TAU * t).sin()),
            ]
        }
    };
    let family: Vec<SampledSurface> = [0.4, 0.2, 0.1]
        .iter()
        .map(|&r| SampledSurface::from_fn(64, 64, 2, based(r)).unwrap())
        .collect();
    let t = gl1();
    let mc = flatness_residual(&gl1_pair((1, 2), (2, 1)), &t, L3Normalization::Literal, &family).unwrap();
    assert!(mc.is_mc);
    for h in &mc.holonomies {
        assert!(h[0].abs() < 1e-9, "{h:?}");
    }
    let control = MCPair {
        a: PolyForm::zero(2, ValueSpace::L0, 1).with_term(q(1), &[1, 0], &[1], 0),
        b: PolyForm::zero(2, ValueSpace::Lm1, 1).with_term(q(1), &[0, 0], &[0, 1], 0),
    };
    let rep = flatness_residual(&control, &t, L3Normalization::Literal, &family).unwrap();
    assert!(!rep.is_mc);
    assert!(rep.holonomies.iter().all(|h| h[0].abs() > 1e-6));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn a0_is_linear_in_tangent(seed in 0u64..10_000, a in -2.0f64..2.0, b in -2.0f64..2.0) {
        let mut r = rng(seed);
        let g = random_loop(&mut r, 128);
        let m1 = random_mat(&mut r, 2, 0.5);
        let p = TransportProblem::new(2, |x: &[f64], v: &[f64]| m1.scale(v[0] + x[1] * v[1]));
        let bf = |x: &[f64], u: &[f64], v: &[f64]| {
            let d = u[0] * v[1] - u[1] * v[0];
            vec![d * (1.0 + x[0]), d * x[1]]
        };
        let c1: Vec<f64> = (0..4).map(|_| r.gen_range(-1.0..1.0)).collect();
        let d1 = LoopTangent::from_fn(128, 2, |t| vec![c1[0] * (TAU * t).cos(), c1[1] * (TAU * t).sin()]).unwrap();
        let d2 = LoopTangent::from_fn(128, 2, |t| vec![c1[2], c1[3] * (2.0 * TAU * t).sin()]).unwrap();
        let lhs = connection_a0(&p, &bf, &g, &d1.combine(a, &d2, b).unwrap()).unwrap();
        let x = connection_a0(&p, &bf, &g, &d1).unwrap();
        let y = connection_a0(&p, &bf, &g, &d2).unwrap();
        for i in 0..2 {
            prop_assert!((lhs[i] - (a * x[i] + b * y[i])).abs() < 1e-10);
        }
    }

    #[test]
    fn composition_law_random(seed in 0u64..10_000) {
        let mut r = rng(seed);
        let g = random_loop(&mut r, 512);
        let m1 = random_mat(&mut r, 2, 0.5);
        let m2 = random_mat(&mut r, 2, 0.5);
        let p = TransportProblem::new(2, |x: &[f64], v: &[f64]| m1.scale(v[0]).add(&m2.scale(v[1] * x[0])));
        let mut s: Vec<f64> = (0..3).map(|_| r.gen_range(0.0..1.0)).collect();
        s.sort_by(f64::total_cmp);
        let whole = transport(&p, &g, s[0], s[2]).unwrap();
        let split = transport(&p, &g, s[1], s[2]).unwrap().mul(&transport(&p, &g, s[0], s[1]).unwrap());
        let err = whole.max_abs_diff(&split);
        prop_assert!(err < 1e-7);
    }
}
