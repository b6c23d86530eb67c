mod common;

use common::rng;
use holonomy2_core::cochain::{connecting_map, CEComplex};
use holonomy2_core::crossed::{
    check_elementary_equivalence, extract_triplet, from_strict_lie2, is_inner_derivation,
    isomorphism_defects, outer_action, skeletal_model, splice_crossed_module, splice_gamma_in_v,
    to_strict_lie2, CrossedModule, ElementaryEquivalence, EquivalenceFailure,
};
use holonomy2_core::error::Error;
use holonomy2_core::fixtures::{
    central_quotient, ideal_crossed_module, random_crossed_module, random_invertible,
    splice_fixtures,
};
use holonomy2_core::lie::{LieAlgebra, LieModule};
use holonomy2_core::matrix::QMatrix;
use holonomy2_core::rational::q;
use proptest::prelude::*;

#[test]
fn identity_and_zero_mu_validate() {
    assert!(CrossedModule::identity(&LieAlgebra::sl2()).validate().is_empty());
    let g = LieAlgebra::aff2();
    let m = LieModule::adjoint(&g);
    assert!(CrossedModule::from_module(&g, &m).validate().is_empty());
}

#[test]
fn strict_from_identity_and_zero_mu() {
    let g = LieAlgebra::heisenberg();
    let s = to_strict_lie2(&CrossedModule::identity(&g)).unwrap();
    assert_eq!(s.g_minus1.dim(), 6);
    // t(h, g) = h + g
    assert_eq!(s.t, QMatrix::identity(3).hstack(&QMatrix::identity(3)));

    let one = LieAlgebra::abelian(1);
    let x = CrossedModule::from_module(&one, &LieModule::trivial(&one, 1));
    let s = to_strict_lie2(&x).unwrap();
    assert!(s.g_minus1.is_abelian());
    assert_eq!(s.s, s.t);
    let (back, _) = from_strict_lie2(&s).unwrap();
    assert!(back.mu().is_zero());
}

#[test]
fn strict_in_random_arrow_basis_recovers_isomorphic_module() {
    let mut r = rng(3);
    for _ in 0..10 {
        let x = random_crossed_module(&mut r);
        let s = to_strict_lie2(&x).unwrap();
        let p = random_invertible(&mut r, s.g_minus1.dim());
        let s2 = s.change_arrow_basis(&p).unwrap();
        assert!(s2.validate().is_empty());
        let (y, k2) = from_strict_lie2(&s2).unwrap();
        // Intertwiner h(y) -> h(x): express the kernel vectors in old arrow
        // coordinates and read off their h-part.
        let k1 = s.s.kernel();
        let phi = k1.left_inverse().unwrap().mul(&p).mul(&k2);
        let psi = QMatrix::identity(x.g().dim());
        assert!(isomorphism_defects(&y, &x, &phi, &psi).is_empty());
    }
}

#[test]
fn outer_action_cases() {
    let g = LieAlgebra::aff2();
    let m = LieModule::adjoint(&g);
    let x = CrossedModule::from_module(&g, &m);
    let oa = outer_action(&x, None).unwrap();
    assert!(oa.genuine);
    assert_eq!(oa.derivations, m.action().to_vec());

    let id = CrossedModule::identity(&LieAlgebra::sl2());
    let oa = outer_action(&id, None).unwrap();
    assert!(oa.derivations.is_empty());
    assert!(oa.genuine);
}

#[test]
fn outer_action_sections_differ_by_inner_derivations() {
    // Non-abelian h: the Heisenberg ideal of heis ⊕ Q.
    let g = LieAlgebra::heisenberg().direct_sum(&LieAlgebra::abelian(1));
    let x = ideal_crossed_module(&g, &[0, 1, 2]);
    assert!(x.validate().is_empty());
    assert!(!x.h().is_abelian());
    let cok = x.cokernel();
    let s1 = cok.section.clone();
    // Second section: add mu(h) components.
    let mut s2 = s1.clone();
    s2[(0, 0)] = q(2);
    s2[(2, 0)] = q(-1);
    let a = outer_action(&x, Some(&s1)).unwrap();
    let b = outer_action(&x, Some(&s2)).unwrap();
    assert_ne!(a.derivations, b.derivations);
    for (da, db) in a.derivations.iter().zip(&b.derivations) {
        assert!(is_inner_derivation(x.h(), &db.sub(da)));
    }
    let bad = QMatrix::zeros(4, 1);
    assert!(matches!(outer_action(&x, Some(&bad)), Err(Error::Section(_))));
}

#[test]
fn abelian_h_outer_action_is_section_independent() {
    let x = splice_crossed_module(&splice_fixtures()[0].1, &splice_fixtures()[0].2).unwrap();
    let cok = x.cokernel();
    let mut s2 = cok.section.clone();
    s2[(0, 1)] = q(3);
    let a = outer_action(&x, None).unwrap();
    let b = outer_action(&x, Some(&s2)).unwrap();
    assert!(a.genuine && b.genuine);
    assert_eq!(a.derivations, b.derivations);
}

#[test]
fn skeletal_trivial_cases() {
    // Split: h = V abelian, mu = 0, so σ is a morphism.
    let g = LieAlgebra::sl2();
    let x = CrossedModule::from_module(&g, &LieModule::adjoint(&g));
    let sk = skeletal_model(&x, None).unwrap();
    assert!(sk.phi2.is_zero());
    assert!(sk.triplet.gamma.is_zero());

    let id = extract_triplet(&CrossedModule::identity(&g)).unwrap();
    assert_eq!(id.gbar.dim(), 0);
    assert_eq!(id.v.dim(), 0);
    assert!(id.gamma.is_zero());
}

#[test]
fn skeletal_gamma_is_section_independent() {
    let mut r = rng(5);
    for _ in 0..12 {
        let x = random_crossed_module(&mut r);
        let a = skeletal_model(&x, None).unwrap();
        let cok = x.cokernel();
        let image = x.mu().image();
        let mut s2 = cok.section.clone();
        if image.cols() > 0 {
            for j in 0..s2.cols() {
                for i in 0..s2.rows() {
                    s2[(i, j)] += &image[(i, 0)] * q(j as i64 + 1);
                }
            }
        }
        let b = skeletal_model(&x, Some(&s2)).unwrap();
        assert_eq!(a.triplet.v, b.triplet.v);
        let cx = CEComplex::new(&a.triplet.gbar, &a.triplet.v).unwrap();
        assert!(cx.same_class(&a.triplet.gamma, &b.triplet.gamma));
        assert!(x.mu().mul(&a.kernel_basis).is_zero());
    }
}

#[test]
fn heisenberg_centre_matches_connecting_map() {
    // h = Q^2 abelian, g = heis, mu embeds the centre via k1 -> z.
    let heis = LieAlgebra::heisenberg();
    let mu = QMatrix::from_i64(&[&[0, 0], &[0, 0], &[1, 0]]);
    let x = CrossedModule::new(LieAlgebra::abelian(2), heis, mu, vec![QMatrix::zeros(2, 2); 3]).unwrap();
    let sk = skeletal_model(&x, None).unwrap();
    // Same data as a splice: ḡ = Q^2, I = h = Q^2, Q = span(k1) = im mu, V = span(k2).
    // Here ḡ is 2-dimensional so H^3 = 0 and both classes vanish.
    let cx = CEComplex::new(&sk.triplet.gbar, &sk.triplet.v).unwrap();
    assert!(cx.is_coboundary(&sk.triplet.gamma));
    let gbar = sk.triplet.gbar.clone();
    let triv = LieModule::trivial(&gbar, 1);
    let ses = holonomy2_core::cochain::ShortExactSequence {
        algebra: gbar.clone(),
        sub: triv.clone(),
        mid: LieModule::trivial(&gbar, 2),
        quot: triv,
        inc: QMatrix::from_i64(&[&[0], &[1]]),
        proj: QMatrix::from_i64(&[&[1, 0]]),
    };
    // The extension class of heis: alpha(x, y) = -phi2 read in Q.
    let alpha = sk.phi2.map_values(&QMatrix::from_i64(&[&[-1, 0]]));
    let cm = connecting_map(&ses, &alpha, None).unwrap();
    let cx2 = CEComplex::new(&gbar, &ses.sub).unwrap();
    assert!(cx2.same_class(&cm, &sk.triplet.gamma));
}

#[test]
fn splice_reproduces_connecting_class() {
    for (name, ses, alpha) in splice_fixtures() {
        let x = splice_crossed_module(&ses, &alpha).unwrap();
        assert!(x.validate().is_empty(), "{name}");
        let from_splice = splice_gamma_in_v(&ses, &x).unwrap();
        let cm = connecting_map(&ses, &alpha, None).unwrap();
        let cx = CEComplex::new(&ses.algebra, &ses.sub).unwrap();
        assert!(cx.same_class(&from_splice, &cm), "{name}");
    }
}

#[test]
fn splice_nonzero_class_is_detected() {
    let (_, ses, alpha) = &splice_fixtures()[0];
    let x = splice_crossed_module(ses, alpha).unwrap();
    let g = splice_gamma_in_v(ses, &x).unwrap();
    let cx = CEComplex::new(&ses.algebra, &ses.sub).unwrap();
    assert!(!cx.is_coboundary(&g));
}

#[test]
fn splice_with_zero_quotient_has_zero_mu() {
    let (_, ses, alpha) = &splice_fixtures()[2];
    let x = splice_crossed_module(ses, alpha).unwrap();
    assert!(x.mu().is_zero());
    assert!(extract_triplet(&x).unwrap().gamma.is_zero());
}

fn skeletal_vs_splice() -> (CrossedModule, CrossedModule, ElementaryEquivalence) {
    // Split sequence over aff2 with alpha = 0: the module V -> ḡ (mu = 0)
    // maps to the splice through the inclusion and ḡ -> Q ⊕ ḡ.
    let g = LieAlgebra::aff2();
    let v = LieModule::adjoint(&g);
    let qm = LieModule::trivial(&g, 1);
    let ses = holonomy2_core::cochain::ShortExactSequence::split(&g, &v, &qm);
    let alpha = holonomy2_core::cochain::Cochain::zero(2, 2, 1);
    let splice = splice_crossed_module(&ses, &alpha).unwrap();
    let x = CrossedModule::from_module(&g, &v);
    let psi = QMatrix::zeros(1, 2).vstack(&QMatrix::identity(2));
    (x, splice, ElementaryEquivalence { phi: ses.inc.clone(), psi })
}

#[test]
fn elementary_equivalence_cases() {
    let x = central_quotient();
    let e = ElementaryEquivalence {
        phi: QMatrix::identity(3),
        psi: QMatrix::identity(2),
    };
    assert!(check_elementary_equivalence(&x, &x, &e).is_empty());

    let (a, b, e) = skeletal_vs_splice();
    assert!(check_elementary_equivalence(&a, &b, &e).is_empty());

    // Flipping one column of phi breaks action compatibility.
    let mut partial = e.clone();
    partial.phi[(1, 1)] = q(-1);
    let f = check_elementary_equivalence(&a, &b, &partial);
    assert!(f.iter().any(|f| matches!(f, EquivalenceFailure::ActionCompatibility { .. })));

    // The full flip keeps the (linear) compatibility conditions but moves the kernel.
    let full = ElementaryEquivalence { phi: e.phi.scale(&q(-1)), psi: e.psi.clone() };
    let f = check_elementary_equivalence(&a, &b, &full);
    assert_eq!(f, vec![EquivalenceFailure::KernelIdentity]);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn round_trip_is_exact(seed in 0u64..10_000) {
        let x = random_crossed_module(&mut rng(seed));
        prop_assert!(x.validate().is_empty());
        let s = to_strict_lie2(&x).unwrap();
        prop_assert!(s.validate().is_empty());
        let (y, k) = from_strict_lie2(&s).unwrap();
        let dh = x.h().dim();
        prop_assert_eq!(k, QMatrix::identity(dh).vstack(&QMatrix::zeros(x.g().dim(), dh)));
        prop_assert_eq!(y.h().structure_constants(), x.h().structure_constants());
        prop_assert_eq!(y.g(), x.g());
        prop_assert_eq!(y.mu(), x.mu());
        prop_assert_eq!(y.action(), x.action());
    }

    #[test]
    fn skeletal_gamma_is_closed_in_kernel(seed in 0u64..10_000) {
        let x = random_crossed_module(&mut rng(seed));
        let sk = skeletal_model(&x, None).unwrap();
        prop_assert!(sk.triplet.validate().is_ok());
        let g_in_h = sk.triplet.gamma.map_values(&sk.kernel_basis);
        prop_assert!(g_in_h.map_values(x.mu()).is_zero());
    }
}
