//! Standard examples and seeded random generators.
//!
//! Everything here is deterministic given the RNG, so the test suites and
//! the command line self test see the same inputs for the same seed.

use alloc::vec;
use alloc::vec::Vec;

use rand::Rng;

use crate::cochain::{ce_cohomology, Cochain, ShortExactSequence};
use crate::crossed::{splice_crossed_module, CrossedModule};
use crate::hochschild::{maurer_cartan_form, Chain, Element, FinDGA};
use crate::lie::{LieAlgebra, LieModule};
use crate::matrix::QMatrix;
use crate::rational::{q, Q};

/// Random invertible integer matrix: a permutation times unit triangular factors.
pub fn random_invertible<R: Rng + ?Sized>(rng: &mut R, n: usize) -> QMatrix {
    let mut lower = QMatrix::identity(n);
    let mut upper = QMatrix::identity(n);
    for i in 0..n {
        for j in 0..i {
            lower[(i, j)] = q(rng.gen_range(-1..=1));
            upper[(j, i)] = q(rng.gen_range(-1..=1));
        }
    }
    let mut perm: Vec<usize> = (0..n).collect();
    for i in (1..n).rev() {
        perm.swap(i, rng.gen_range(0..=i));
    }
    let p = QMatrix::identity(n).select_columns(&perm);
    p.mul(&lower).mul(&upper)
}

pub fn random_vector<R: Rng + ?Sized>(rng: &mut R, n: usize, range: i64) -> Vec<Q> {
    (0..n).map(|_| q(rng.gen_range(-range..=range))).collect()
}

/// Small Lie algebras of dimension at most `max_dim`.
pub fn lie_catalog(max_dim: usize) -> Vec<LieAlgebra> {
    let mut out = vec![
        LieAlgebra::abelian(1),
        LieAlgebra::abelian(2),
        LieAlgebra::aff2(),
        LieAlgebra::heisenberg(),
        LieAlgebra::sl2(),
        LieAlgebra::abelian(3),
        LieAlgebra::aff2().direct_sum(&LieAlgebra::abelian(1)),
        LieAlgebra::sl2().direct_sum(&LieAlgebra::abelian(1)),
        LieAlgebra::heisenberg().direct_sum(&LieAlgebra::abelian(1)),
        LieAlgebra::aff2().direct_sum(&LieAlgebra::aff2()),
    ];
    out.retain(|l| l.dim() <= max_dim);
    out
}

/// A module over `lie` of dimension at most `max_dim`, in a random basis.
pub fn random_module<R: Rng + ?Sized>(rng: &mut R, lie: &LieAlgebra, max_dim: usize) -> LieModule {
    let mut choices: Vec<LieModule> = vec![LieModule::trivial(lie, 1)];
    if max_dim >= 2 {
        choices.push(LieModule::trivial(lie, 2));
    }
    if lie.dim() <= max_dim {
        choices.push(LieModule::adjoint(lie));
    }
    if lie.dim() < max_dim {
        choices.push(LieModule::adjoint(lie).direct_sum(&LieModule::trivial(lie, 1)));
    }
    if lie.is_abelian() && max_dim >= 2 {
        // Commuting nilpotent and scalar parts.
        let n = 2;
        let mats = (0..lie.dim())
            .map(|_| {
                let a = q(rng.gen_range(-2..=2));
                let b = q(rng.gen_range(-2..=2));
                let mut m = QMatrix::zeros(n, n);
                m[(0, 0)] = a.clone();
                m[(1, 1)] = a;
                m[(0, 1)] = b;
                m
            })
            .collect();
        choices.push(LieModule::new(n, mats).expect("shape"));
    }
    let m = choices.swap_remove(rng.gen_range(0..choices.len()));
    let p = random_invertible(rng, m.dim());
    m.change_basis(&QMatrix::identity(lie.dim()), &p)
        .expect("invertible basis change")
}

/// `h = span(b)` inside `aff2`, `span(y, z)` or the centre inside the
/// Heisenberg algebra, and `sl2` inside `sl2 ⊕ Q`.
pub fn ideal_inclusions() -> Vec<CrossedModule> {
    let mut out = Vec::new();
    let cases: Vec<(LieAlgebra, Vec<usize>)> = vec![
        (LieAlgebra::aff2(), vec![1]),
        (LieAlgebra::heisenberg(), vec![1, 2]),
        (LieAlgebra::heisenberg(), vec![2]),
        (LieAlgebra::sl2().direct_sum(&LieAlgebra::abelian(1)), vec![0, 1, 2]),
        (LieAlgebra::aff2().direct_sum(&LieAlgebra::aff2()), vec![1, 2, 3]),
    ];
    for (g, basis) in cases {
        out.push(ideal_crossed_module(&g, &basis));
    }
    out
}

/// Inclusion of the ideal spanned by the given standard basis vectors.
pub fn ideal_crossed_module(g: &LieAlgebra, basis: &[usize]) -> CrossedModule {
    let n = g.dim();
    let inc = QMatrix::identity(n).select_columns(basis);
    let proj = inc.left_inverse().expect("injective");
    let k = basis.len();
    let mut c = vec![Q::from_integer(0.into()); k * k * k];
    for a in 0..k {
        for b in 0..k {
            let br = proj.mul_vec(&g.bracket_basis(basis[a], basis[b]));
            for (m, v) in br.into_iter().enumerate() {
                c[(a * k + b) * k + m] = v;
            }
        }
    }
    let names = basis.iter().map(|&i| g.basis_names()[i].clone()).collect();
    let h = LieAlgebra::new(k, names, c).expect("shape");
    let action = (0..n).map(|x| proj.mul(&g.ad(x)).mul(&inc)).collect();
    CrossedModule::new(h, g.clone(), inc, action).expect("shape")
}

/// `heis -> heis / centre = Q^2`, the quotient acting through lifts.
pub fn central_quotient() -> CrossedModule {
    let h = LieAlgebra::heisenberg();
    let g = LieAlgebra::abelian(2);
    let mu = QMatrix::from_i64(&[&[1, 0, 0], &[0, 1, 0]]);
    let action = vec![h.ad(0), h.ad(1)];
    CrossedModule::new(h, g, mu, action).expect("shape")
}

/// Sequence with a non-trivial connecting class: `L = Q^3` abelian, `V = Q = Q`
/// trivial, `I = Q^2` with `e3` acting by a nilpotent Jordan block, and
/// `alpha = e1* ∧ e2*`.
pub fn nonzero_class_sequence() -> (ShortExactSequence, Cochain) {
    let l = LieAlgebra::abelian(3);
    let jordan = QMatrix::from_i64(&[&[0, 1], &[0, 0]]);
    let mid = LieModule::new(2, vec![QMatrix::zeros(2, 2), QMatrix::zeros(2, 2), jordan]).expect("shape");
    let ses = ShortExactSequence {
        algebra: l.clone(),
        sub: LieModule::trivial(&l, 1),
        mid,
        quot: LieModule::trivial(&l, 1),
        inc: QMatrix::from_i64(&[&[1], &[0]]),
        proj: QMatrix::from_i64(&[&[0, 1]]),
    };
    let alpha = Cochain::from_fn(2, 3, 1, |ij| vec![q(i64::from(ij == [0, 1]))]);
    (ses, alpha)
}

/// Sequences paired with 2-cocycles for the splice/connecting-map comparison.
/// The first entry has a non-trivial class.
pub fn splice_fixtures() -> Vec<(&'static str, ShortExactSequence, Cochain)> {
    let mut out = Vec::new();
    let (ses, alpha) = nonzero_class_sequence();
    out.push(("abelian3-jordan", ses, alpha));

    // Split sequence over sl2, alpha = 0.
    let sl2 = LieAlgebra::sl2();
    let ses = ShortExactSequence::split(&sl2, &LieModule::adjoint(&sl2), &LieModule::trivial(&sl2, 1));
    out.push(("sl2-split-zero", ses, Cochain::zero(2, 3, 1)));

    // Q = 0: I = V.
    let heis = LieAlgebra::heisenberg();
    let v = LieModule::adjoint(&heis);
    let ses = ShortExactSequence {
        algebra: heis.clone(),
        sub: v.clone(),
        mid: v.clone(),
        quot: LieModule::trivial(&heis, 0),
        inc: QMatrix::identity(3),
        proj: QMatrix::zeros(0, 3),
    };
    out.push(("heis-quotient-zero", ses, Cochain::zero(2, 3, 0)));

    // Split sequence over the Heisenberg algebra with a non-zero cocycle.
    let triv = LieModule::trivial(&heis, 1);
    let alpha = ce_cohomology(&heis, &triv, 2).expect("module").basis[0].clone();
    let ses = ShortExactSequence::split(&heis, &triv, &triv);
    out.push(("heis-split-cocycle", ses, alpha));

    // Non-split sequence over the Heisenberg algebra: x acts by a Jordan block.
    let jordan = QMatrix::from_i64(&[&[0, 1], &[0, 0]]);
    let mid = LieModule::new(2, vec![jordan, QMatrix::zeros(2, 2), QMatrix::zeros(2, 2)]).expect("shape");
    let ses = ShortExactSequence {
        algebra: heis.clone(),
        sub: triv.clone(),
        mid,
        quot: triv.clone(),
        inc: QMatrix::from_i64(&[&[1], &[0]]),
        proj: QMatrix::from_i64(&[&[0, 1]]),
    };
    let alpha = ce_cohomology(&heis, &triv, 2).expect("module").basis[1].clone();
    out.push(("heis-jordan", ses, alpha));

    // Abelian 3-dimensional algebra, alpha = e1* ∧ e3*: the lift stays closed.
    let (mut ses, _) = nonzero_class_sequence();
    ses.algebra = LieAlgebra::abelian(3);
    let alpha = Cochain::from_fn(2, 3, 1, |ij| vec![q(i64::from(ij == [0, 2]))]);
    out.push(("abelian3-jordan-exact", ses, alpha));
    out
}

/// Random valid crossed module with `dim h, dim g <= 4`, presented in random bases.
pub fn random_crossed_module<R: Rng + ?Sized>(rng: &mut R) -> CrossedModule {
    let family = rng.gen_range(0..6);
    let x = match family {
        0 => {
            let cat = lie_catalog(4);
            let g = &cat[rng.gen_range(0..cat.len())];
            let m = random_module(rng, g, 4);
            CrossedModule::from_module(g, &m)
        }
        1 => {
            let cat = lie_catalog(4);
            CrossedModule::identity(&cat[rng.gen_range(0..cat.len())])
        }
        2 => {
            let mut all = ideal_inclusions();
            all.swap_remove(rng.gen_range(0..all.len()))
        }
        3 => central_quotient(),
        4 => {
            let mut all = splice_fixtures();
            let (_, ses, alpha) = all.swap_remove(rng.gen_range(0..all.len()));
            splice_crossed_module(&ses, &alpha).expect("fixture splice")
        }
        _ => {
            let a = CrossedModule::identity(&LieAlgebra::aff2());
            let b = if rng.gen_bool(0.5) {
                central_quotient()
            } else {
                let g = LieAlgebra::abelian(1);
                CrossedModule::from_module(&g, &random_module(rng, &g, 2))
            };
            if b.h().dim() + 2 <= 4 && b.g().dim() + 2 <= 4 {
                a.direct_sum(&b)
            } else {
                a
            }
        }
    };
    let ph = random_invertible(rng, x.h().dim());
    let pg = random_invertible(rng, x.g().dim());
    x.change_basis(&ph, &pg).expect("invertible basis change")
}

/// A DGA with an odd element and whether that element is Maurer–Cartan.
pub struct DgaCase {
    pub name: &'static str,
    pub dga: FinDGA,
    pub element: Element<usize>,
    pub expect_mc: bool,
}

/// Small DGAs with nilpotent odd elements; the MC cases and the controls
/// cover commutative, matrix-valued and non-commutative truncated algebras.
pub fn dga_cases() -> Vec<DgaCase> {
    let e = |i: usize, c: i64| (i, q(c));
    let heis = FinDGA::ce_algebra(&LieAlgebra::heisenberg());
    let aff = FinDGA::ce_algebra(&LieAlgebra::aff2());
    let m2 = FinDGA::matrix_algebra(2);
    let m2_aff = FinDGA::tensor(&m2, &aff);
    let m2_sl2 = FinDGA::tensor(&m2, &FinDGA::ce_algebra(&LieAlgebra::sl2()));
    let m = |r: &[&[i64]]| QMatrix::from_i64(r);
    let aff_rep = [m(&[&[1, 0], &[0, 0]]), m(&[&[0, 1], &[0, 0]])];
    let aff_bad = [m(&[&[0, 1], &[0, 0]]), m(&[&[1, 0], &[0, 0]])];
    let sl2_rep = [m(&[&[1, 0], &[0, -1]]), m(&[&[0, 1], &[0, 0]]), m(&[&[0, 0], &[1, 0]])];
    let mc_form = |lie: &LieAlgebra, rho: &[QMatrix]| maurer_cartan_form(lie, rho).expect("one matrix per generator");
    let mixed = FinDGA::tensor(&FinDGA::exterior(1), &FinDGA::truncated_odd(4, q(-1)));
    vec![
        DgaCase { name: "exterior2-x1", dga: FinDGA::exterior(2), element: vec![e(1, 1)], expect_mc: true },
        DgaCase { name: "exterior3-mix", dga: FinDGA::exterior(3), element: vec![e(1, 1), e(3, 2)], expect_mc: true },
        DgaCase { name: "truncated-mc", dga: FinDGA::truncated_odd(4, q(-1)), element: vec![e(1, 1)], expect_mc: true },
        DgaCase { name: "truncated5-mc", dga: FinDGA::truncated_odd(5, q(-1)), element: vec![e(1, 1)], expect_mc: true },
        DgaCase { name: "truncated-scaled-mc", dga: FinDGA::truncated_odd(4, q(-2)), element: vec![e(1, 2)], expect_mc: true },
        DgaCase { name: "ce-heis-closed", dga: heis.clone(), element: vec![e(1, 1), e(2, -3)], expect_mc: true },
        DgaCase { name: "ce-aff2-closed", dga: aff.clone(), element: vec![e(1, 1)], expect_mc: true },
        DgaCase { name: "m2-aff2-mc-form", dga: m2_aff.clone(), element: mc_form(&LieAlgebra::aff2(), &aff_rep), expect_mc: true },
        DgaCase { name: "m2-sl2-mc-form", dga: m2_sl2, element: mc_form(&LieAlgebra::sl2(), &sl2_rep), expect_mc: true },
        DgaCase { name: "tensor-sum-mc", dga: mixed, element: vec![e(4, 1), e(1, 1)], expect_mc: true },
        DgaCase { name: "truncated-dx0", dga: FinDGA::truncated_odd(4, q(0)), element: vec![e(1, 1)], expect_mc: false },
        DgaCase { name: "truncated-wrong-scale", dga: FinDGA::truncated_odd(4, q(-2)), element: vec![e(1, 1)], expect_mc: false },
        DgaCase { name: "ce-heis-z", dga: heis, element: vec![e(3, 1)], expect_mc: false },
        DgaCase { name: "m2-aff2-not-a-rep", dga: m2_aff, element: mc_form(&LieAlgebra::aff2(), &aff_bad), expect_mc: false },
        DgaCase { name: "acyclic-x", dga: FinDGA::acyclic_pair(), element: vec![e(1, 1)], expect_mc: false },
    ]
}

/// Random word of basis indices over `dga`, module slot first.
pub fn random_word<R: Rng + ?Sized>(rng: &mut R, dga: &FinDGA, bar_len: usize) -> Vec<usize> {
    (0..=bar_len).map(|_| rng.gen_range(0..dga.dim())).collect()
}

/// Random chain with up to `terms` words of bar length at most `max_bar`.
pub fn random_chain<R: Rng + ?Sized>(rng: &mut R, dga: &FinDGA, terms: usize, max_bar: usize) -> Chain<usize> {
    let mut c = Chain::zero();
    for _ in 0..terms {
        let len = rng.gen_range(0..=max_bar);
        let w = random_word(rng, dga, len);
        c.add_term(w, q(rng.gen_range(-3i64..=3)));
    }
    c
}
