mod common;

use common::rng;
use holonomy2_core::crossed::{skeletal_model, splice_crossed_module, CrossedModule};
use holonomy2_core::fixtures::{random_crossed_module, splice_fixtures};
use holonomy2_core::lie::{LieAlgebra, LieModule};
use holonomy2_core::linf::{LinfViolation, TwoTermLinf};
use holonomy2_core::matrix::QMatrix;
use holonomy2_core::rational::{q, Q};
use num_traits::Zero;
use proptest::prelude::*;

/// Skeletal algebra on `sl2 ⊕ Q` with `V = Q` where the abelian summand acts
/// by the identity and `l3 = 0`.
fn skeletal_sl2_plus_line() -> TwoTermLinf {
    let g = LieAlgebra::sl2().direct_sum(&LieAlgebra::abelian(1));
    let mut act = vec![QMatrix::zeros(1, 1); 3];
    act.push(QMatrix::from_i64(&[&[1]]));
    let v = LieModule::new(1, act).unwrap();
    let x = CrossedModule::from_module(&g, &v);
    TwoTermLinf::from_triplet(&skeletal_model(&x, None).unwrap().triplet).unwrap()
}

fn set_alternating(l3: &mut [Q], d0: usize, dm1: usize, ijk: [usize; 3], a: usize, v: &Q) {
    let perms = [
        ([0, 1, 2], 1),
        ([1, 2, 0], 1),
        ([2, 0, 1], 1),
        ([1, 0, 2], -1),
        ([0, 2, 1], -1),
        ([2, 1, 0], -1),
    ];
    for (p, s) in perms {
        let (i, j, k) = (ijk[p[0]], ijk[p[1]], ijk[p[2]]);
        l3[((i * d0 + j) * d0 + k) * dm1 + a] += v * q(s);
    }
}

#[test]
fn crossed_dgla_is_valid() {
    let x = CrossedModule::identity(&LieAlgebra::heisenberg());
    let t = TwoTermLinf::from_crossed(&x).unwrap();
    assert!(t.validate().is_empty());
    assert!(t.l1().inverse().is_some());
    assert!(!t.is_skeletal());

    let g = LieAlgebra::aff2();
    let zero_mu = CrossedModule::from_module(&g, &LieModule::trivial(&g, 2));
    let t = TwoTermLinf::from_crossed(&zero_mu).unwrap();
    assert!(t.is_skeletal());
    assert!(t.validate().is_empty());
}

#[test]
fn skeletal_with_nonzero_class_is_valid() {
    let (_, ses, alpha) = &splice_fixtures()[0];
    let x = splice_crossed_module(ses, alpha).unwrap();
    let sk = skeletal_model(&x, None).unwrap();
    assert!(!sk.triplet.gamma.is_zero());
    let t = TwoTermLinf::from_triplet(&sk.triplet).unwrap();
    assert!(t.is_skeletal());
    assert!(t.validate().is_empty());
    assert_eq!(t.l3_cochain(), sk.triplet.gamma);
}

#[test]
fn l3_perturbation_breaks_coherence() {
    let t = skeletal_sl2_plus_line();
    assert!(t.validate().is_empty());
    let mut l3 = t.l3_constants().to_vec();
    set_alternating(&mut l3, 4, 1, [0, 1, 2], 0, &q(1));
    let bad = t.with_l3(l3).unwrap();
    let report = bad.validate();
    assert!(report.iter().any(|v| matches!(v, LinfViolation::Coherence { .. })));
    assert!(!report.iter().any(|v| matches!(v, LinfViolation::Jacobi { .. })));
}

#[test]
fn random_perturbation_is_reported() {
    // Brute-force oracle: d l3 on (h, e, f, t) picks up -t . l3(h, e, f).
    let t = skeletal_sl2_plus_line();
    let mut r = rng(19);
    for _ in 0..10 {
        let mut l3 = t.l3_constants().to_vec();
        let v = loop {
            let v = q(rand::Rng::gen_range(&mut r, -3..=3));
            if !v.is_zero() {
                break v;
            }
        };
        set_alternating(&mut l3, 4, 1, [0, 1, 2], 0, &v);
        let w = q(rand::Rng::gen_range(&mut r, -3..=3));
        set_alternating(&mut l3, 4, 1, [0, 1, 3], 0, &w);
        let bad = t.clone().with_l3(l3).unwrap();
        assert!(bad.validate().iter().any(|v| matches!(v, LinfViolation::Coherence { .. })));
    }
}

#[test]
fn non_alternating_l3_is_reported() {
    let t = skeletal_sl2_plus_line();
    let mut l3 = t.l3_constants().to_vec();
    l3[((0 * 4 + 1) * 4 + 2) * 1] = q(1);
    let report = t.with_l3(l3).unwrap().validate();
    assert!(report.iter().any(|v| matches!(v, LinfViolation::L3Antisymmetry { .. })));
}

#[test]
fn l3_on_dgla_breaks_jacobi_identities() {
    let x = CrossedModule::identity(&LieAlgebra::sl2());
    let t = TwoTermLinf::from_crossed(&x).unwrap();
    let mut l3 = t.l3_constants().to_vec();
    set_alternating(&mut l3, 3, 3, [0, 1, 2], 0, &q(1));
    let report = t.with_l3(l3).unwrap().validate();
    assert!(report.iter().any(|v| matches!(v, LinfViolation::Jacobi { .. })));
    assert!(report.iter().any(|v| matches!(v, LinfViolation::MixedJacobi { .. })));
}

#[test]
fn acyclic_extension_with_l3_is_valid() {
    // (ḡ, V, γ) ⊕ (W --id--> W): l1 != 0 and l3 != 0 together.
    let (_, ses, alpha) = &splice_fixtures()[0];
    let x = splice_crossed_module(ses, alpha).unwrap();
    let t = TwoTermLinf::from_triplet(&skeletal_model(&x, None).unwrap().triplet).unwrap();
    let (d0, dm1) = (t.d0() + 1, t.dm1() + 1);
    let mut l1 = QMatrix::zeros(d0, dm1);
    l1[(d0 - 1, dm1 - 1)] = q(1);
    let mut bracket = vec![Q::zero(); d0 * d0 * d0];
    let n = t.d0();
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                bracket[(i * d0 + j) * d0 + k] = t.bracket_constants()[(i * n + j) * n + k].clone();
            }
        }
    }
    let mut action = Vec::new();
    for a in t.action() {
        let mut m = QMatrix::zeros(dm1, dm1);
        for r in 0..t.dm1() {
            for c in 0..t.dm1() {
                m[(r, c)] = a[(r, c)].clone();
            }
        }
        action.push(m);
    }
    action.push(QMatrix::zeros(dm1, dm1));
    let mut l3 = vec![Q::zero(); d0 * d0 * d0 * dm1];
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                for a in 0..t.dm1() {
                    l3[((i * d0 + j) * d0 + k) * dm1 + a] = t.l3_basis(i, j, k)[a].clone();
                }
            }
        }
    }
    let ext = TwoTermLinf::new(d0, dm1, l1, bracket, action, l3).unwrap();
    assert!(!ext.is_skeletal());
    assert!(ext.validate().is_empty());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn from_crossed_always_validates(seed in 0u64..10_000) {
        let x = random_crossed_module(&mut rng(seed));
        let t = TwoTermLinf::from_crossed(&x).unwrap();
        prop_assert!(t.validate().is_empty());
        prop_assert_eq!(t.is_skeletal(), x.mu().is_zero());
    }

    #[test]
    fn skeletal_outputs_are_valid(seed in 0u64..10_000) {
        let x = random_crossed_module(&mut rng(seed));
        let sk = skeletal_model(&x, None).unwrap();
        let t = TwoTermLinf::from_triplet(&sk.triplet).unwrap();
        prop_assert!(t.is_skeletal());
        prop_assert!(t.validate().is_empty());
        prop_assert!(sk.triplet.gbar.validate().is_empty());
    }
}
