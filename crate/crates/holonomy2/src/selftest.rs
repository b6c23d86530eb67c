//! Invariant suites of every module, run on the shipped fixtures and on
//! seeded random inputs. Each module-level example is one named check.

use std::f64::consts::TAU;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::Instant;

use holonomy2_core::cochain::{ce_cohomology, connecting_map, CEComplex, Cochain, ShortExactSequence};
use holonomy2_core::crossed::{
    check_elementary_equivalence, extract_triplet, from_strict_lie2, is_inner_derivation, isomorphism_defects,
    outer_action, skeletal_model, splice_crossed_module, splice_gamma_in_v, to_strict_lie2, CrossedModule,
    EquivalenceFailure,
};
use holonomy2_core::fixtures::{
    dga_cases, ideal_crossed_module, random_chain, random_crossed_module, random_invertible, splice_fixtures,
};
use holonomy2_core::forms::{fake_curvature, is_maurer_cartan, three_curvature, MCPair, PolyForm, ValueSpace};
use holonomy2_core::hochschild::{
    check_cycle, hochschild_d, hochschild_of_hochschild_d, is_mc_element, p_chain, shuffle, Chain, FinDGA,
};
use holonomy2_core::lie::{LieAlgebra, LieModule, LieViolation};
use holonomy2_core::linf::{L3Normalization, LinfViolation, TwoTermLinf};
use holonomy2_core::loopspace::{
    connection_a0, flatness_residual, surface_holonomy, transport, v_form, LoopTangent, PairFields, SampledLoop,
    SampledSurface, TransportProblem,
};
use holonomy2_core::numeric::RMat;
use holonomy2_core::rational::q;
use holonomy2_core::simplicial::{
    circle_model, circle_to_hochschild, higher_d, induced_map, point_model, product_model, torus_model,
    validate_simplicial, FinSimpSet, HHYChain, SimplicialViolation,
};
use holonomy2_core::{QMatrix, Q};
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::cli::{axioms_check, run as run_cli};
use crate::fixtures::{self as shipped, generate, SHIPPED};
use crate::formats::{from_json, CrossedModuleFile, DgaFile, LieAlgebraFile, McPairFile, SequenceFile, SimpSetFile};
use crate::report::{Check, RunReport};

type Res = Result<(), String>;

fn ensure(cond: bool, msg: impl Into<String>) -> Res {
    if cond {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn err(e: impl std::fmt::Display) -> String {
    e.to_string()
}

struct Suite<'a> {
    report: &'a mut RunReport,
    rng: ChaCha8Rng,
}

impl Suite<'_> {
    fn check(&mut self, name: &str, f: impl FnOnce(&mut ChaCha8Rng) -> Res) {
        let t = Instant::now();
        let rng = &mut self.rng;
        let res = catch_unwind(AssertUnwindSafe(|| f(rng))).unwrap_or_else(|p| {
            let msg = p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default();
            Err(format!("panic: {msg}"))
        });
        let c = match res {
            Ok(()) => Check::new(name, true),
            Err(e) => Check::new(name, false).detail(e),
        };
        self.report.push(c, t);
    }
}

pub fn run(seed: u64, report: &mut RunReport) {
    let mut s = Suite { report, rng: ChaCha8Rng::seed_from_u64(seed) };
    files(&mut s);
    lie(&mut s);
    crossed(&mut s);
    linf(&mut s);
    forms(&mut s);
    loopspace(&mut s);
    hochschild(&mut s);
    simplicial(&mut s);
}

fn files(s: &mut Suite) {
    s.check("fixtures/shipped files match the library", |_| {
        let want = generate();
        ensure(want.len() == SHIPPED.len(), "fixture lists differ")?;
        for (name, text) in want {
            ensure(shipped::shipped(name) == text, format!("{name} is stale"))?;
        }
        Ok(())
    });
    s.check("fixtures/every shipped file parses", |_| {
        for (name, text) in SHIPPED {
            let b = text.as_bytes();
            let dir = name.split('/').next().unwrap_or_default();
            let ok = match dir {
                "lie" => from_json::<LieAlgebraFile>(b, name).and_then(|f| f.to_lie()).map(drop),
                "crossed" if name.ends_with("_maps.json") => Ok(()),
                "crossed" => from_json::<CrossedModuleFile>(b, name).and_then(|f| f.to_crossed()).map(drop),
                "sequences" => from_json::<SequenceFile>(b, name).and_then(|f| f.to_sequence()).map(drop),
                "pairs" => from_json::<McPairFile>(b, name).and_then(|f| f.to_pair()).map(drop),
                "dga" => from_json::<DgaFile>(b, name).and_then(|f| f.to_dga()).map(drop),
                "simplicial" => from_json::<SimpSetFile>(b, name).and_then(|f| f.to_simpset()).map(drop),
                _ => Err(crate::error::CliError::Schema(format!("unknown fixture kind {dir}"))),
            };
            ok.map_err(|e| format!("{name}: {e}"))?;
        }
        Ok(())
    });
    s.check("cli/peiffer violation names axiom (b)", |_| {
        let x = from_json::<CrossedModuleFile>(shipped::shipped("crossed/peiffer_violation.json").as_bytes(), "x")
            .and_then(|f| f.to_crossed())
            .map_err(err)?;
        let c = axioms_check(&x);
        ensure(!c.passed(), "violation not reported")?;
        ensure(c.details.iter().any(|d| d.contains("axiom (b)")), "axiom (b) not named")
    });
    s.check("cli/help exits 0", |_| {
        let o = run_cli(["holonomy2", "--help"]);
        ensure(o.code == 0 && o.stdout.contains("Usage"), "help failed")
    });
}

fn lie(s: &mut Suite) {
    s.check("lie/abelian dim 2 validates", |_| ensure(LieAlgebra::abelian(2).validate().is_empty(), "violations"));
    s.check("lie/sl2 validates", |_| {
        let l = from_json::<LieAlgebraFile>(shipped::shipped("lie/sl2.json").as_bytes(), "sl2")
            .and_then(|f| f.to_lie())
            .map_err(err)?;
        ensure(l.validate().is_empty(), "violations")
    });
    s.check("lie/one-sided sign flip reports antisymmetry at (0,1,1)", |_| {
        let l = from_json::<LieAlgebraFile>(shipped::shipped("lie/sl2_flipped.json").as_bytes(), "sl2")
            .and_then(|f| f.to_lie())
            .map_err(err)?;
        let v = l.validate();
        ensure(v.iter().any(|v| matches!(v, LieViolation::Antisymmetry { i: 0, j: 1, k: 1, .. })), format!("{v:?}"))
    });
    s.check("cochain/betti numbers", |_| {
        let a1 = LieAlgebra::abelian(1);
        let sl2 = LieAlgebra::sl2();
        let triv = LieModule::trivial(&sl2, 1);
        let b = |l: &LieAlgebra, m: &LieModule, p| ce_cohomology(l, m, p).map(|c| c.betti).map_err(err);
        ensure(b(&a1, &LieModule::trivial(&a1, 1), 1)? == 1, "abelian H^1")?;
        ensure(b(&sl2, &triv, 3)? == 1, "sl2 H^3")?;
        ensure(b(&sl2, &triv, 1)? == 0, "sl2 H^1")
    });
    s.check("cochain/connecting map trivial and split cases", |_| {
        let l = LieAlgebra::abelian(2);
        let v = LieModule::trivial(&l, 1);
        let zero_q = LieModule::trivial(&l, 0);
        let ses = ShortExactSequence::split(&l, &v, &zero_q);
        let cm = connecting_map(&ses, &Cochain::zero(2, 2, 0), None).map_err(err)?;
        ensure(cm.is_zero(), "V = I gives nonzero")?;
        let g = LieAlgebra::aff2();
        let ses = ShortExactSequence::split(&g, &LieModule::adjoint(&g), &LieModule::trivial(&g, 1));
        let alpha = Cochain::from_fn(2, 2, 1, |_| vec![q(1)]);
        let cm = connecting_map(&ses, &alpha, None).map_err(err)?;
        let cx = CEComplex::new(&g, &ses.sub).map_err(err)?;
        ensure(cx.is_coboundary(&cm), "split sequence gives a nonzero class")
    });
    s.check("cochain/nonzero class detected", |_| {
        let (ses, alpha) = from_json::<SequenceFile>(shipped::shipped("sequences/nonzero_class.json").as_bytes(), "ses")
            .and_then(|f| f.to_sequence())
            .map_err(err)?;
        let cm = connecting_map(&ses, &alpha, None).map_err(err)?;
        let cx = CEComplex::new(&ses.algebra, &ses.sub).map_err(err)?;
        ensure(!cx.is_coboundary(&cm), "class is zero")
    });
}

fn crossed(s: &mut Suite) {
    s.check("crossed/identity and mu = 0 validate", |_| {
        let x = from_json::<CrossedModuleFile>(shipped::shipped("crossed/identity_sl2.json").as_bytes(), "x")
            .and_then(|f| f.to_crossed())
            .map_err(err)?;
        ensure(x.validate().is_empty(), "identity")?;
        let g = LieAlgebra::aff2();
        ensure(CrossedModule::from_module(&g, &LieModule::adjoint(&g)).validate().is_empty(), "mu = 0")
    });
    s.check("crossed/strict identity has t(h, g) = h + g", |_| {
        let st = to_strict_lie2(&CrossedModule::identity(&LieAlgebra::heisenberg())).map_err(err)?;
        ensure(st.g_minus1.dim() == 6, "arrow dimension")?;
        ensure(st.t == QMatrix::identity(3).hstack(&QMatrix::identity(3)), "target map")
    });
    s.check("crossed/mu = 0 gives s = t and back", |_| {
        let one = LieAlgebra::abelian(1);
        let st = to_strict_lie2(&CrossedModule::from_module(&one, &LieModule::trivial(&one, 1))).map_err(err)?;
        ensure(st.g_minus1.is_abelian() && st.s == st.t, "s != t")?;
        ensure(from_strict_lie2(&st).map_err(err)?.0.mu().is_zero(), "mu != 0")
    });
    s.check("crossed/round trip through strict Lie 2-algebras", |r| {
        for i in 0..10 {
            let x = random_crossed_module(r);
            let st = to_strict_lie2(&x).map_err(err)?;
            ensure(st.validate().is_empty(), "strict axioms")?;
            let p = random_invertible(r, st.g_minus1.dim());
            let s2 = st.change_arrow_basis(&p).map_err(err)?;
            let (y, k2) = from_strict_lie2(&s2).map_err(err)?;
            let phi = st.s.kernel().left_inverse().map_err(err)?.mul(&p).mul(&k2);
            let defects = isomorphism_defects(&y, &x, &phi, &QMatrix::identity(x.g().dim()));
            ensure(defects.is_empty(), format!("module {i}: {defects:?}"))?;
        }
        Ok(())
    });
    s.check("crossed/outer action trivial cases", |_| {
        let g = LieAlgebra::aff2();
        let m = LieModule::adjoint(&g);
        let oa = outer_action(&CrossedModule::from_module(&g, &m), None).map_err(err)?;
        ensure(oa.genuine && oa.derivations == m.action().to_vec(), "mu = 0")?;
        let oa = outer_action(&CrossedModule::identity(&LieAlgebra::sl2()), None).map_err(err)?;
        ensure(oa.genuine && oa.derivations.is_empty(), "identity")
    });
    s.check("crossed/sections differ by inner derivations", |_| {
        let g = LieAlgebra::heisenberg().direct_sum(&LieAlgebra::abelian(1));
        let x = ideal_crossed_module(&g, &[0, 1, 2]);
        let s1 = x.cokernel().section.clone();
        let mut s2 = s1.clone();
        s2[(0, 0)] = q(2);
        s2[(2, 0)] = q(-1);
        let a = outer_action(&x, Some(&s1)).map_err(err)?;
        let b = outer_action(&x, Some(&s2)).map_err(err)?;
        ensure(a.derivations != b.derivations, "sections agree")?;
        for (da, db) in a.derivations.iter().zip(&b.derivations) {
            ensure(is_inner_derivation(x.h(), &db.sub(da)), "difference not inner")?;
        }
        Ok(())
    });
    s.check("crossed/skeletal trivial cases", |_| {
        let g = LieAlgebra::sl2();
        let sk = skeletal_model(&CrossedModule::from_module(&g, &LieModule::adjoint(&g)), None).map_err(err)?;
        ensure(sk.phi2.is_zero() && sk.triplet.gamma.is_zero(), "split case")?;
        let id = extract_triplet(&CrossedModule::identity(&g)).map_err(err)?;
        ensure(id.gbar.dim() == 0 && id.v.dim() == 0 && id.gamma.is_zero(), "identity")
    });
    s.check("crossed/heisenberg centre agrees with connecting map", |_| {
        let x = from_json::<CrossedModuleFile>(shipped::shipped("crossed/heis_centre.json").as_bytes(), "x")
            .and_then(|f| f.to_crossed())
            .map_err(err)?;
        let sk = skeletal_model(&x, None).map_err(err)?;
        let gbar = sk.triplet.gbar.clone();
        let triv = LieModule::trivial(&gbar, 1);
        let ses = ShortExactSequence {
            algebra: gbar.clone(),
            sub: triv.clone(),
            mid: LieModule::trivial(&gbar, 2),
            quot: triv,
            inc: QMatrix::from_i64(&[&[0], &[1]]),
            proj: QMatrix::from_i64(&[&[1, 0]]),
        };
        let alpha = sk.phi2.map_values(&QMatrix::from_i64(&[&[-1, 0]]));
        let cm = connecting_map(&ses, &alpha, None).map_err(err)?;
        let cx = CEComplex::new(&gbar, &ses.sub).map_err(err)?;
        ensure(cx.same_class(&cm, &sk.triplet.gamma), "classes differ")
    });
    s.check("crossed/splice class equals connecting class", |_| {
        for (name, ses, alpha) in splice_fixtures() {
            let x = splice_crossed_module(&ses, &alpha).map_err(err)?;
            ensure(x.validate().is_empty(), format!("{name}: axioms"))?;
            let g = splice_gamma_in_v(&ses, &x).map_err(err)?;
            let cm = connecting_map(&ses, &alpha, None).map_err(err)?;
            let cx = CEComplex::new(&ses.algebra, &ses.sub).map_err(err)?;
            ensure(cx.same_class(&g, &cm), format!("{name}: classes differ"))?;
        }
        Ok(())
    });
    s.check("crossed/splice degenerate cases", |_| {
        let (_, ses, alpha) = &splice_fixtures()[2];
        let x = splice_crossed_module(ses, alpha).map_err(err)?;
        ensure(x.mu().is_zero(), "Q = 0 gives mu != 0")?;
        ensure(extract_triplet(&x).map_err(err)?.gamma.is_zero(), "gamma != 0")?;
        let (ses, alpha, ..) = shipped::aff2_split();
        let x = splice_crossed_module(&ses, &alpha).map_err(err)?;
        let g = splice_gamma_in_v(&ses, &x).map_err(err)?;
        ensure(CEComplex::new(&ses.algebra, &ses.sub).map_err(err)?.is_coboundary(&g), "alpha = 0 class")
    });
    s.check("crossed/elementary equivalences", |_| {
        let x = CrossedModule::identity(&LieAlgebra::sl2());
        let id = holonomy2_core::crossed::ElementaryEquivalence {
            phi: QMatrix::identity(3),
            psi: QMatrix::identity(3),
        };
        ensure(check_elementary_equivalence(&x, &x, &id).is_empty(), "identity maps")?;
        let (_, _, a, b, e) = shipped::aff2_split();
        ensure(check_elementary_equivalence(&a, &b, &e).is_empty(), "splice comparison")?;
        let mut flipped = e.clone();
        flipped.phi[(1, 1)] = q(-1);
        let f = check_elementary_equivalence(&a, &b, &flipped);
        ensure(f.iter().any(|f| matches!(f, EquivalenceFailure::ActionCompatibility { .. })), format!("{f:?}"))
    });
}

fn skeletal_nonzero() -> Result<TwoTermLinf, String> {
    let (_, ses, alpha) = &splice_fixtures()[0];
    let x = splice_crossed_module(ses, alpha).map_err(err)?;
    TwoTermLinf::from_triplet(&skeletal_model(&x, None).map_err(err)?.triplet).map_err(err)
}

fn alternate(l3: &mut [Q], d0: usize, dm1: usize, ijk: [usize; 3], a: usize, v: &Q) {
    for (p, sg) in [([0, 1, 2], 1), ([1, 2, 0], 1), ([2, 0, 1], 1), ([1, 0, 2], -1), ([0, 2, 1], -1), ([2, 1, 0], -1)] {
        let (i, j, k) = (ijk[p[0]], ijk[p[1]], ijk[p[2]]);
        l3[((i * d0 + j) * d0 + k) * dm1 + a] += v * q(sg);
    }
}

fn linf(s: &mut Suite) {
    s.check("linf/crossed-module DGLAs validate", |r| {
        let t = TwoTermLinf::from_crossed(&CrossedModule::identity(&LieAlgebra::heisenberg())).map_err(err)?;
        ensure(t.validate().is_empty() && t.l1().inverse().is_some() && !t.is_skeletal(), "identity")?;
        let g = LieAlgebra::aff2();
        let t = TwoTermLinf::from_crossed(&CrossedModule::from_module(&g, &LieModule::trivial(&g, 2))).map_err(err)?;
        ensure(t.validate().is_empty() && t.is_skeletal(), "mu = 0")?;
        for _ in 0..10 {
            let t = TwoTermLinf::from_crossed(&random_crossed_module(r)).map_err(err)?;
            ensure(t.validate().is_empty(), "random module")?;
        }
        Ok(())
    });
    s.check("linf/skeletal model validates", |_| {
        let t = skeletal_nonzero()?;
        ensure(t.is_skeletal(), "not skeletal")?;
        ensure(t.l3_constants().iter().any(|c| !c.is_zero()), "l3 = 0")?;
        ensure(t.validate().is_empty(), "violations")
    });
    s.check("linf/perturbed l3 breaks the n = 4 identity", |r| {
        // sl2 + R with the line acting by 1 on V: l3(h, e, f) is not closed,
        // since d l3 on (h, e, f, t) picks up -t . l3(h, e, f).
        let g = LieAlgebra::sl2().direct_sum(&LieAlgebra::abelian(1));
        let mut act = vec![QMatrix::zeros(1, 1); 3];
        act.push(QMatrix::from_i64(&[&[1]]));
        let v = LieModule::new(1, act).map_err(err)?;
        let sk = skeletal_model(&CrossedModule::from_module(&g, &v), None).map_err(err)?;
        let t = TwoTermLinf::from_triplet(&sk.triplet).map_err(err)?;
        ensure(t.validate().is_empty(), "unperturbed model")?;
        let (d0, dm1) = (t.d0(), t.dm1());
        let v = q(r.gen_range(1..=3));
        let mut l3 = t.l3_constants().to_vec();
        alternate(&mut l3, d0, dm1, [0, 1, 2], 0, &v);
        let report = t.clone().with_l3(l3).map_err(err)?.validate();
        ensure(report.iter().any(|v| matches!(v, LinfViolation::Coherence { .. })), format!("{report:?}"))
    });
}

fn form(n: usize, space: ValueSpace, vdim: usize) -> PolyForm {
    PolyForm::zero(n, space, vdim)
}

fn forms(s: &mut Suite) {
    s.check("forms/exterior derivative examples", |_| {
        let w = form(2, ValueSpace::L0, 1).with_term(q(1), &[1, 0], &[1], 0);
        ensure(w.d() == form(2, ValueSpace::L0, 1).with_term(q(1), &[0, 0], &[0, 1], 0), "d(x dy)")?;
        ensure(form(3, ValueSpace::L0, 1).with_term(q(7), &[0, 0, 0], &[], 0).d().is_zero(), "d(constant)")?;
        let w = form(3, ValueSpace::L0, 1).with_term(q(1), &[2, 1, 0], &[2], 0);
        let want = form(3, ValueSpace::L0, 1)
            .with_term(q(2), &[1, 1, 0], &[0, 2], 0)
            .with_term(q(1), &[2, 0, 0], &[1, 2], 0);
        ensure(w.d() == want, "d(x^2 y dz)")
    });
    s.check("forms/bracket examples", |r| {
        let ab = TwoTermLinf::from_crossed(&CrossedModule::identity(&LieAlgebra::abelian(1))).map_err(err)?;
        let a = form(2, ValueSpace::L0, 1).with_term(q(1), &[0, 0], &[0], 0);
        ensure(a.wedge_l2(&a, &ab).map_err(err)?.is_zero(), "[A, A] abelian")?;
        let t = TwoTermLinf::from_crossed(&CrossedModule::identity(&LieAlgebra::sl2())).map_err(err)?;
        let a = form(2, ValueSpace::L0, 3).with_term(q(1), &[1, 0], &[0], 1);
        let b = form(2, ValueSpace::L0, 3).with_term(q(1), &[0, 1], &[1], 2);
        let ef = t.bracket(&[q(0), q(1), q(0)], &[q(0), q(0), q(1)]);
        let mut want = form(2, ValueSpace::L0, 3);
        for (k, c) in ef.iter().enumerate() {
            if !c.is_zero() {
                want.add_term(c.clone(), &[1, 1], &[0, 1], k).map_err(err)?;
            }
        }
        ensure(a.wedge_l2(&b, &t).map_err(err)? == want, "[x e dx, y f dy]")?;
        // |A| = 1 and |B| = 2 - 1 = 1: the bracket is symmetric.
        let mut a = form(3, ValueSpace::L0, 3);
        let mut b = form(3, ValueSpace::Lm1, 3);
        for _ in 0..4 {
            let e: Vec<u32> = (0..3).map(|_| r.gen_range(0..3)).collect();
            a.add_term(q(r.gen_range(-3..=3)), &e, &[r.gen_range(0..3)], r.gen_range(0..3)).map_err(err)?;
            b.add_term(q(r.gen_range(-3..=3)), &e, &[0, 1 + r.gen_range(0..2)], r.gen_range(0..3)).map_err(err)?;
        }
        ensure(a.wedge_l2(&b, &t).map_err(err)? == b.wedge_l2(&a, &t).map_err(err)?, "swap rule")
    });
    s.check("forms/fake curvature examples", |_| {
        let gl1 = shipped::gl1();
        let zero = MCPair { a: form(2, ValueSpace::L0, 1), b: form(2, ValueSpace::Lm1, 1) };
        ensure(fake_curvature(&zero, &gl1).map_err(err)?.is_zero(), "(0, 0)")?;
        let p = MCPair { a: shipped::xdy_control().a, b: form(2, ValueSpace::Lm1, 1) };
        let f = fake_curvature(&p, &gl1).map_err(err)?;
        ensure(f == form(2, ValueSpace::L0, 1).with_term(q(1), &[0, 0], &[0, 1], 0), "A = x dy")?;
        // B = -l1^{-1} F_A for the identity crossed module on sl2.
        let t = TwoTermLinf::from_crossed(&CrossedModule::identity(&LieAlgebra::sl2())).map_err(err)?;
        let a = form(2, ValueSpace::L0, 3)
            .with_term(q(1), &[1, 0], &[1], 1)
            .with_term(q(2), &[0, 1], &[0], 2)
            .with_term(q(-1), &[1, 1], &[1], 0);
        let f = fake_curvature(&MCPair { a: a.clone(), b: form(2, ValueSpace::Lm1, 3) }, &t).map_err(err)?;
        let mut b = form(2, ValueSpace::Lm1, 3);
        for (k, c) in f.terms() {
            b.add_term(-c.clone(), &k.exps, &k.dx, k.value).map_err(err)?;
        }
        ensure(fake_curvature(&MCPair { a, b }, &t).map_err(err)?.is_zero(), "constructed flat pair")
    });
    s.check("forms/3-curvature examples", |r| {
        let gl1 = shipped::gl1();
        for _ in 0..10 {
            let mut p = MCPair { a: form(2, ValueSpace::L0, 1), b: form(2, ValueSpace::Lm1, 1) };
            let e = [r.gen_range(0..3), r.gen_range(0..3)];
            p.a.add_term(q(r.gen_range(-3..=3)), &e, &[r.gen_range(0..2)], 0).map_err(err)?;
            p.b.add_term(q(r.gen_range(-3..=3)), &e, &[0, 1], 0).map_err(err)?;
            for norm in [L3Normalization::Literal, L3Normalization::Factorial] {
                ensure(three_curvature(&p, &gl1, norm).map_err(err)?.is_zero(), "chart_dim 2")?;
            }
        }
        let b = form(3, ValueSpace::Lm1, 1)
            .with_term(q(1), &[0, 0, 1], &[0, 1], 0)
            .with_term(q(1), &[0, 1, 0], &[0, 2], 0);
        let p = MCPair { a: form(3, ValueSpace::L0, 1), b };
        ensure(three_curvature(&p, &gl1, L3Normalization::Literal).map_err(err)?.is_zero(), "closed B")?;
        // Constant A = Σ e_i dx_i: the dx1dx2dx3 coefficient is Σ_σ sgn σ l3(e_σ1, e_σ2, e_σ3).
        let t = skeletal_nonzero()?;
        let n = t.d0();
        let mut a = form(3, ValueSpace::L0, n);
        for i in 0..3.min(n) {
            a.add_term(q(1), &[0, 0, 0], &[i], i).map_err(err)?;
        }
        let p = MCPair { a, b: form(3, ValueSpace::Lm1, t.dm1()) };
        let h = three_curvature(&p, &t, L3Normalization::Literal).map_err(err)?;
        let e = |i: usize| (0..n).map(|k| if k == i { Q::one() } else { Q::zero() }).collect::<Vec<_>>();
        let mut want = vec![Q::zero(); t.dm1()];
        for (perm, sg) in [([0, 1, 2], 1), ([1, 2, 0], 1), ([2, 0, 1], 1), ([1, 0, 2], -1), ([0, 2, 1], -1), ([2, 1, 0], -1)] {
            for (w, v) in want.iter_mut().zip(t.l3(&e(perm[0]), &e(perm[1]), &e(perm[2]))) {
                *w += v * q(sg);
            }
        }
        let mut got = vec![Q::zero(); t.dm1()];
        for (k, c) in h.terms() {
            ensure(k.dx == [0, 1, 2], "unexpected form degree")?;
            got[k.value] += c;
        }
        ensure(got == want, format!("l3 term {got:?} vs {want:?}"))
    });
    s.check("forms/maurer-cartan examples", |_| {
        let gl1 = shipped::gl1();
        let lit = L3Normalization::Literal;
        let zero = MCPair { a: form(2, ValueSpace::L0, 1), b: form(2, ValueSpace::Lm1, 1) };
        ensure(is_maurer_cartan(&zero, &gl1, lit).map_err(err)?.is_mc, "(0, 0)")?;
        let (p, t) = from_json::<McPairFile>(shipped::shipped("pairs/gl1_mc.json").as_bytes(), "pair")
            .and_then(|f| f.to_pair())
            .map_err(err)?;
        ensure(is_maurer_cartan(&p, &t, lit).map_err(err)?.is_mc, "A = c dx, B = β dx∧dy")?;
        let p = MCPair {
            a: form(2, ValueSpace::L0, 1).with_term(q(3), &[0, 0], &[0], 0),
            b: form(2, ValueSpace::Lm1, 1).with_term(q(2), &[1, 2], &[0, 1], 0),
        };
        ensure(is_maurer_cartan(&p, &gl1, lit).map_err(err)?.is_mc, "A = c dx, B = β(x, y) dx∧dy")?;
        let r = is_maurer_cartan(&MCPair { a: shipped::xdy_control().a, b: form(2, ValueSpace::Lm1, 1) }, &gl1, lit)
            .map_err(err)?;
        ensure(!r.is_mc, "A = x dy")?;
        ensure(r.fake_curvature == form(2, ValueSpace::L0, 1).with_term(q(1), &[0, 0], &[0, 1], 0), "residual")
    });
}

fn series_exp(m: &RMat, terms: usize) -> RMat {
    let mut acc = RMat::identity(m.rows());
    let mut term = RMat::identity(m.rows());
    for k in 1..terms {
        term = term.mul(m).scale(1.0 / k as f64);
        acc = acc.add(&term);
    }
    acc
}

fn fourier_loop(r: &mut ChaCha8Rng, m: usize) -> SampledLoop {
    let c: Vec<f64> = (0..8).map(|_| r.gen_range(-0.5..0.5)).collect();
    SampledLoop::from_fn(m, 2, move |t| {
        let (s1, c1, s2, c2) = ((TAU * t).sin(), (TAU * t).cos(), (2.0 * TAU * t).sin(), (2.0 * TAU * t).cos());
        vec![
            c[0] * s1 + c[1] * c1 + 0.3 * (c[2] * s2 + c[3] * c2),
            c[4] * s1 + c[5] * c1 + 0.3 * (c[6] * s2 + c[7] * c2),
        ]
    })
    .expect("finite samples")
}

fn dxdy(_: &[f64], u: &[f64], v: &[f64]) -> Vec<f64> {
    vec![u[0] * v[1] - u[1] * v[0]]
}

fn zero_b(_: &[f64], _: &[f64], _: &[f64]) -> Vec<f64> {
    vec![0.0]
}

fn based_torus(r: f64) -> impl Fn(f64, f64) -> Vec<f64> {
    move |t, s| {
        let (u, v) = (TAU * s, TAU * t);
        vec![
            r * ((1.0 - u.cos()) * (1.0 + 0.5 * v.cos()) + 0.3 * u.sin() * v.sin()),
            r * u.sin() * (1.0 + 0.5 * v.sin()),
        ]
    }
}

fn loopspace(s: &mut Suite) {
    let zero = |n: usize| TransportProblem::new(n, move |_: &[f64], _: &[f64]| RMat::zeros(n, n));
    s.check("loopspace/transport examples", |r| {
        let g = fourier_loop(r, 64);
        ensure(transport(&zero(2), &g, 0.1, 0.9).map_err(err)? == RMat::identity(2), "A = 0")?;
        let line = SampledLoop::from_fn(512, 1, |t| vec![t]).map_err(err)?.with_winding(vec![1.0]).map_err(err)?;
        for _ in 0..5 {
            let mut m = RMat::zeros(3, 3);
            for i in 0..3 {
                for j in 0..3 {
                    m[(i, j)] = 0.6 * r.gen_range(-1.0..1.0);
                }
            }
            let p = TransportProblem::new(3, |_: &[f64], v: &[f64]| m.scale(v[0]));
            let e = transport(&p, &line, 0.0, 1.0).map_err(err)?.max_abs_diff(&series_exp(&m, 20));
            ensure(e <= 1e-9, format!("series error {e:e}"))?;
        }
        let c = 0.7;
        let p = TransportProblem::new(1, move |_: &[f64], v: &[f64]| RMat::scalar(1, c * v[0]));
        let g = fourier_loop(r, 256);
        let (k0, k1) = (r.gen_range(0..128), r.gen_range(128..=256));
        let t = transport(&p, &g, k0 as f64 / 256.0, k1 as f64 / 256.0).map_err(err)?;
        let want = (c * (g.point(k1)[0] - g.point(k0)[0])).exp();
        ensure((t[(0, 0)] - want).abs() <= 1e-8, "abelian line integral")
    });
    s.check("loopspace/v-form examples", |r| {
        let g = fourier_loop(r, 64);
        ensure(v_form(&zero(2), &g, &[]).map_err(err)? == vec![0.0, 0.0], "no insertions")?;
        ensure(v_form(&zero(2), &g, &[(0.3, vec![1.5, -2.0])]).map_err(err)? == vec![1.5, -2.0], "A = 0")?;
        let c = 0.4;
        let p = TransportProblem::new(1, move |_: &[f64], v: &[f64]| RMat::scalar(1, c * v[0]));
        let got = v_form(&p, &g, &[(20.0 / 64.0, vec![2.0])]).map_err(err)?[0];
        let want = (c * (g.point(64)[0] - g.point(20)[0])).exp() * 2.0;
        ensure((got - want).abs() <= 1e-8, "abelian weight")
    });
    s.check("loopspace/A0 examples", |r| {
        let m = 512;
        let g = fourier_loop(r, 128);
        let radial = LoopTangent::from_fn(128, 2, |t| vec![(TAU * t).cos(), (TAU * t).sin()]).map_err(err)?;
        ensure(connection_a0(&zero(1), &zero_b, &g, &radial).map_err(err)? == vec![0.0], "B = 0")?;
        let own = LoopTangent::velocity_of(&g);
        ensure(connection_a0(&zero(1), &dxdy, &g, &own).map_err(err)?[0].abs() < 1e-14, "reparametrization")?;
        let circle = SampledLoop::from_fn(m, 2, |t| vec![(TAU * t).cos(), (TAU * t).sin()]).map_err(err)?;
        let radial = LoopTangent::from_fn(m, 2, |t| vec![(TAU * t).cos(), (TAU * t).sin()]).map_err(err)?;
        let got = connection_a0(&zero(1), &dxdy, &circle, &radial).map_err(err)?[0];
        // ∫ (ẋ δy - ẏ δx) dσ = -2π for the unit circle and radial field.
        ensure((got + TAU).abs() <= 1e-6, format!("{got} vs {}", -TAU))
    });
    s.check("loopspace/surface holonomy examples", |_| {
        let f = SampledSurface::from_fn(16, 16, 2, |t, s| vec![(TAU * s).cos() * (1.0 + 0.2 * (TAU * t).sin()), (TAU * s).sin()])
            .map_err(err)?;
        ensure(surface_holonomy(&zero(1), &zero_b, &f).map_err(err)? == vec![0.0], "B = 0")?;
        let still = SampledSurface::from_fn(16, 16, 2, |_, s| vec![(TAU * s).cos(), (TAU * s).sin()]).map_err(err)?;
        ensure(surface_holonomy(&zero(1), &dxdy, &still).map_err(err)? == vec![0.0], "degenerate surface")?;
        let flat = SampledSurface::from_fn(128, 128, 2, |t, s| vec![s + 0.05 * (TAU * (s + t)).sin(), t + 0.03 * (TAU * s).cos()])
            .map_err(err)?
            .with_windings(vec![0.0, 1.0], vec![1.0, 0.0])
            .map_err(err)?;
        let h = surface_holonomy(&zero(1), &dxdy, &flat).map_err(err)?[0];
        ensure((h - 1.0).abs() <= 1e-4, format!("flat torus {h} vs 1"))
    });
    s.check("loopspace/flatness residuals", |_| {
        let gl1 = shipped::gl1();
        let radii = [0.2, 0.1, 0.05];
        let family: Vec<SampledSurface> = radii
            .iter()
            .map(|&r| SampledSurface::from_fn(64, 64, 2, based_torus(r)))
            .collect::<holonomy2_core::Result<_>>()
            .map_err(err)?;
        let lit = L3Normalization::Literal;
        let mc = flatness_residual(&shipped::gl1_mc_pair(), &gl1, lit, &family).map_err(err)?;
        ensure(mc.is_mc, "MC pair flagged non-MC")?;
        for (r, h) in radii.iter().zip(&mc.holonomies) {
            ensure(h[0].abs() <= 1e-9 * r * r, format!("MC residual {} at r = {r}", h[0]))?;
        }
        let ctl = flatness_residual(&shipped::xdy_control(), &gl1, lit, &family).map_err(err)?;
        ensure(!ctl.is_mc, "control flagged MC")?;
        let scaled: Vec<f64> = radii.iter().zip(&ctl.holonomies).map(|(r, h)| h[0] / r.powi(4)).collect();
        ensure(scaled.iter().all(|x| x.abs() > 0.1), format!("control flux vanishes: {scaled:?}"))?;
        let ratio = (scaled[0] - scaled[1]) / (scaled[1] - scaled[2]);
        ensure((3.0..=5.0).contains(&ratio), format!("control does not converge at second order: {ratio}"))?;
        let flat_a = MCPair { a: shipped::gl1_mc_pair().a, b: form(2, ValueSpace::Lm1, 1) };
        let z = flatness_residual(&flat_a, &gl1, lit, &family).map_err(err)?;
        ensure(z.holonomies.iter().all(|h| h[0] == 0.0), "B = 0 gives nonzero")
    });
    s.check("loopspace/pair with non-abelian h is refused", |_| {
        let t = TwoTermLinf::from_crossed(&CrossedModule::identity(&LieAlgebra::sl2())).map_err(err)?;
        let pair = MCPair { a: form(2, ValueSpace::L0, 3), b: form(2, ValueSpace::Lm1, 3) };
        let fields = PairFields::new(&pair, &t).map_err(err)?;
        let f = SampledSurface::from_fn(8, 8, 2, |_, s| vec![s, 0.0]).map_err(err)?;
        let (problem, curving) = (fields.problem(), fields.curving());
        ensure(surface_holonomy(&problem, &curving, &f).is_err(), "accepted")
    });
}

fn chain(terms: &[(&[usize], i64)]) -> Chain<usize> {
    let mut c = Chain::zero();
    for (w, k) in terms {
        c.add_term(w.to_vec(), q(*k));
    }
    c
}

fn hochschild(s: &mut Suite) {
    s.check("hochschild/dga fixtures satisfy the axioms", |_| {
        for name in ["dga/exterior2.json", "dga/truncated_mc.json", "dga/acyclic_pair.json", "dga/matrix2.json"] {
            let a = from_json::<DgaFile>(shipped::shipped(name).as_bytes(), name).and_then(|f| f.to_dga()).map_err(err)?;
            ensure(a.validate().is_empty(), format!("{name}: {:?}", a.validate()))?;
        }
        Ok(())
    });
    s.check("hochschild/differential examples", |_| {
        let a = FinDGA::exterior(1);
        ensure(hochschild_d(&a, &chain(&[(&[0, 0], 1)])).is_zero(), "1⊗1")?;
        ensure(hochschild_d(&a, &chain(&[(&[0, 0, 1], 1)])) == chain(&[(&[1, 0], 1)]), "1⊗1⊗x")?;
        ensure(hochschild_d(&a, &chain(&[(&[0, 1, 0], 1)])) == chain(&[(&[1, 0], -1)]), "1⊗x⊗1")?;
        ensure(hochschild_d(&a, &chain(&[(&[1, 0, 0], 1)])) == chain(&[(&[1, 0], 1)]), "x⊗1⊗1")
    });
    s.check("hochschild/d^2 = 0 on random chains", |r| {
        let algebras = [FinDGA::exterior(2), FinDGA::truncated_odd(4, q(-1)), FinDGA::matrix_algebra(2), FinDGA::acyclic_pair()];
        for i in 0..100 {
            let a = &algebras[i % algebras.len()];
            let c = random_chain(r, a, 3, 4);
            ensure(hochschild_d(a, &hochschild_d(a, &c)).is_zero(), format!("chain {i}"))?;
        }
        Ok(())
    });
    s.check("hochschild/shuffle examples", |r| {
        let a = FinDGA::exterior(2);
        let unit = Chain::word(vec![0]);
        for _ in 0..10 {
            let c = random_chain(r, &a, 3, 3);
            ensure(shuffle(&a, &unit, &c).map_err(err)? == c, "unit")?;
        }
        let sh = shuffle(&a, &Chain::word(vec![0, 1]), &Chain::word(vec![0, 2])).map_err(err)?;
        ensure(sh == chain(&[(&[0, 1, 2], 1), (&[0, 2, 1], 1)]), "2-shuffle")?;
        let h = FinDGA::ce_algebra(&LieAlgebra::heisenberg());
        for _ in 0..15 {
            let x = random_chain(r, &h, 1, 2);
            let y = random_chain(r, &h, 1, 2);
            let (Some((wx, _)), Some(_)) = (x.terms().next(), y.terms().next()) else { continue };
            let dx = holonomy2_core::hochschild::word_degree(&h, wx);
            let sx = if dx.rem_euclid(2) == 1 { -Q::one() } else { Q::one() };
            let lhs = hochschild_d(&h, &shuffle(&h, &x, &y).map_err(err)?);
            let rhs = shuffle(&h, &hochschild_d(&h, &x), &y)
                .map_err(err)?
                .add(&shuffle(&h, &x, &hochschild_d(&h, &y)).map_err(err)?.scale(&sx));
            ensure(lhs == rhs, "derivation identity")?;
        }
        Ok(())
    });
    s.check("hochschild/holonomy chain examples", |_| {
        let a = FinDGA::exterior(1);
        ensure(p_chain(&a, &[], 3).map_err(err)? == Chain::word(vec![0]), "𝒜 = 0")?;
        let p = p_chain(&a, &[(1, q(1))], 2).map_err(err)?;
        ensure(p == chain(&[(&[0], 1), (&[0, 1], 1), (&[0, 1, 1], 1)]), "N = 2")?;
        for case in dga_cases() {
            let max = 4;
            let p = p_chain(&case.dga, &case.element, max + 1).map_err(err)?;
            let dp = hochschild_d(&case.dga, &p);
            let mut kappa = case.dga.d_element(&case.element);
            kappa.extend(case.dga.mul_elements(&case.element, &case.element));
            for len in 0..=max {
                let mut want = Chain::zero();
                for slot in 0..len {
                    let mut words: Vec<(Vec<usize>, Q)> = vec![(vec![case.dga.unit_index()], -Q::one())];
                    for j in 0..len {
                        let factor: &[(usize, Q)] = if j == slot { &kappa } else { &case.element };
                        words = words
                            .iter()
                            .flat_map(|(w, c)| factor.iter().map(move |(b, v)| ([w.as_slice(), &[*b]].concat(), c * v)))
                            .collect();
                    }
                    for (w, c) in words {
                        want.add_term(w, c);
                    }
                }
                ensure(dp.component(len) == want, format!("{}: length {len}", case.name))?;
            }
        }
        Ok(())
    });
    s.check("hochschild/maurer-cartan elements", |_| {
        let t = from_json::<DgaFile>(shipped::shipped("dga/truncated_mc.json").as_bytes(), "dga")
            .and_then(|f| f.to_dga())
            .map_err(err)?;
        ensure(is_mc_element(&t, &[]), "0")?;
        ensure(is_mc_element(&t, &[(1, q(1))]), "dx = -x^2")?;
        ensure(!is_mc_element(&FinDGA::truncated_odd(4, q(0)), &[(1, q(1))]), "dx = 0")
    });
    s.check("hochschild/cycle iff maurer-cartan", |_| {
        for case in dga_cases() {
            let r = check_cycle(&case.dga, &case.element, 4).map_err(err)?;
            ensure(r.is_mc == case.expect_mc && r.consistent(), format!("{}: {r:?}", case.name))?;
        }
        Ok(())
    });
    s.check("hochschild/iterated complex", |r| {
        let a = FinDGA::exterior(2);
        ensure(hochschild_of_hochschild_d(&a, &Chain::word(vec![vec![0]])).map_err(err)?.is_zero(), "units")?;
        for _ in 0..20 {
            let mut c: Chain<Vec<usize>> = Chain::zero();
            for _ in 0..2 {
                let outer = r.gen_range(1..=3);
                let w: Vec<Vec<usize>> = (0..outer)
                    .map(|_| (0..r.gen_range(1..=2)).map(|_| if r.gen_bool(0.5) { 0 } else { r.gen_range(0..4) }).collect())
                    .collect();
                c.add_term(w, q(r.gen_range(1..=3)));
            }
            let d1 = hochschild_of_hochschild_d(&a, &c).map_err(err)?;
            ensure(hochschild_of_hochschild_d(&a, &d1).map_err(err)?.is_zero(), "D^2")?;
        }
        Ok(())
    });
}

fn random_hhy(r: &mut ChaCha8Rng, y: &FinSimpSet, a: &FinDGA) -> HHYChain<usize> {
    let mut c = HHYChain::zero();
    for _ in 0..2 {
        let k = r.gen_range(0..=y.cutoff());
        let w = (0..y.size(k)).map(|_| if r.gen_bool(0.6) { a.unit_index() } else { r.gen_range(0..a.dim()) }).collect();
        c.add_term(k, w, q(r.gen_range(1..=4)));
    }
    c
}

fn simplicial(s: &mut Suite) {
    s.check("simplicial/models satisfy the identities", |_| {
        let c = circle_model(5).map_err(err)?;
        ensure(validate_simplicial(&c).is_empty(), "circle")?;
        ensure(c.sizes()[..3] == [1, 2, 3], "circle sizes")?;
        let t = from_json::<SimpSetFile>(shipped::shipped("simplicial/torus3.json").as_bytes(), "torus")
            .and_then(|f| f.to_simpset())
            .map_err(err)?;
        ensure(validate_simplicial(&t).is_empty(), "torus")?;
        ensure(t.sizes()[..3] == [1, 4, 9], "torus sizes")?;
        ensure(product_model(&c, &point_model(5)).map_err(err)? == c, "product with the point")
    });
    s.check("simplicial/corrupted table is located", |_| {
        let mut c = circle_model(3).map_err(err)?;
        c.face_mut(2, 1)[2] = 0;
        let v = validate_simplicial(&c);
        ensure(v.contains(&SimplicialViolation::FaceDegeneracy { level: 1, i: 1, j: 0, x: 1 }), format!("{v:?}"))
    });
    s.check("simplicial/induced maps", |r| {
        let a = FinDGA::ce_algebra(&LieAlgebra::heisenberg());
        let w = vec![0, 1, 2, 0];
        ensure(induced_map(&a, &[0, 1, 2, 3], 0, 0, 4, &w).map_err(err)? == vec![(w.clone(), Q::one())], "identity")?;
        let xy = a.index_of("x*^y*").ok_or("missing basis element")?;
        ensure(induced_map(&a, &[0, 0, 0, 0], 0, 0, 1, &w).map_err(err)? == vec![(vec![xy], Q::one())], "collapse")?;
        let push = |f: &[usize], dst: usize, c: &[(Vec<usize>, Q)]| -> Result<Chain<usize>, String> {
            let mut out = Chain::zero();
            for (w, v) in c {
                for (nw, x) in induced_map(&a, f, 0, 0, dst, w).map_err(err)? {
                    out.add_term(nw, x * v);
                }
            }
            Ok(out)
        };
        for _ in 0..100 {
            let (n, m, p) = (r.gen_range(1..6), r.gen_range(1..5), r.gen_range(1..4));
            let mut f: Vec<usize> = (0..n).map(|_| r.gen_range(0..m)).collect();
            let mut g: Vec<usize> = (0..m).map(|_| r.gen_range(0..p)).collect();
            f[0] = 0;
            g[0] = 0;
            let gf: Vec<usize> = f.iter().map(|&x| g[x]).collect();
            let w: Vec<usize> = (0..n).map(|_| r.gen_range(0..a.dim())).collect();
            let step = induced_map(&a, &f, 0, 0, m, &w).map_err(err)?;
            ensure(push(&gf, p, &[(w, Q::one())])? == push(&g, p, &step)?, "functoriality")?;
        }
        Ok(())
    });
    s.check("simplicial/unit chains", |_| {
        let a = FinDGA::ce_algebra(&LieAlgebra::aff2());
        let t = torus_model(3).map_err(err)?;
        for k in 0..=3 {
            let d = higher_d(&HHYChain::at_level(k, Chain::word(vec![0; t.size(k)])), &t, &a).map_err(err)?;
            // The alternating face sum leaves one all-unit word at even levels k >= 2.
            let want = if k % 2 == 1 || k == 0 {
                HHYChain::zero()
            } else {
                HHYChain::at_level(k - 1, Chain::word(vec![0; t.size(k - 1)]))
            };
            ensure(d == want, format!("level {k}"))?;
        }
        Ok(())
    });
    s.check("simplicial/D^2 = 0 on circle and torus", |r| {
        let algebras = [FinDGA::acyclic_pair(), FinDGA::ce_algebra(&LieAlgebra::heisenberg())];
        for y in [circle_model(5).map_err(err)?, torus_model(5).map_err(err)?] {
            for i in 0..100 {
                let a = &algebras[i % 2];
                let c = random_hhy(r, &y, a);
                let d1 = higher_d(&c, &y, a).map_err(err)?;
                ensure(higher_d(&d1, &y, a).map_err(err)?.is_zero(), "D^2 != 0")?;
            }
        }
        Ok(())
    });
    s.check("simplicial/circle model is the Hochschild complex", |_| {
        let a = FinDGA::acyclic_pair();
        let y = circle_model(4).map_err(err)?;
        let n = a.dim();
        for k in 0..=3usize {
            for code in 0..n.pow(k as u32 + 1) {
                let w: Vec<usize> = (0..=k).map(|i| code / n.pow(i as u32) % n).collect();
                let ch = HHYChain::at_level(k, Chain::word(w.clone()));
                let lhs = circle_to_hochschild(&a, &higher_d(&ch, &y, &a).map_err(err)?);
                let rhs = hochschild_d(&a, &circle_to_hochschild(&a, &ch));
                ensure(lhs == rhs, format!("word {w:?}"))?;
            }
        }
        Ok(())
    });
}
