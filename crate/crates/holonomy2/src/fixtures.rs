//! Fixture files shipped with the tool. The JSON under `fixtures/` is
//! generated from library objects by [`generate`]; a test keeps the two in sync.

use holonomy2_core::cochain::{Cochain, ShortExactSequence};
use holonomy2_core::crossed::{splice_crossed_module, CrossedModule, ElementaryEquivalence};
use holonomy2_core::fixtures::nonzero_class_sequence;
use holonomy2_core::forms::{MCPair, PolyForm, ValueSpace};
use holonomy2_core::hochschild::FinDGA;
use holonomy2_core::lie::{LieAlgebra, LieModule};
use holonomy2_core::linf::TwoTermLinf;
use holonomy2_core::rational::{q, qr};
use holonomy2_core::simplicial::torus_model;
use holonomy2_core::QMatrix;
use serde::Serialize;

use crate::formats::{
    CrossedModuleFile, DgaFile, EquivalenceFile, LieAlgebraFile, McPairFile, SequenceFile, SimpSetFile,
};

macro_rules! shipped {
    ($($name:literal),* $(,)?) => {
        /// `(relative path, contents)` of every shipped fixture.
        pub const SHIPPED: &[(&str, &str)] = &[
            $(($name, include_str!(concat!("../fixtures/", $name)))),*
        ];
    };
}

shipped!(
    "lie/sl2.json",
    "lie/sl2_flipped.json",
    "crossed/identity_sl2.json",
    "crossed/peiffer_violation.json",
    "crossed/heis_centre.json",
    "crossed/aff2_module.json",
    "crossed/aff2_splice.json",
    "crossed/aff2_maps.json",
    "sequences/nonzero_class.json",
    "sequences/split_aff2.json",
    "pairs/gl1_mc.json",
    "pairs/xdy_control.json",
    "dga/exterior2.json",
    "dga/truncated_mc.json",
    "dga/acyclic_pair.json",
    "dga/matrix2.json",
    "simplicial/torus3.json",
);

pub fn shipped(name: &str) -> &'static str {
    SHIPPED.iter().find(|(n, _)| *n == name).map(|(_, s)| *s).unwrap_or_else(|| panic!("no shipped fixture {name}"))
}

/// `g = gl(1)` acting on `h = R` by the identity, `mu = 0`.
pub fn gl1() -> TwoTermLinf {
    let g = LieAlgebra::abelian(1);
    let v = LieModule::new(1, vec![QMatrix::from_i64(&[&[1]])]).expect("1x1 action");
    TwoTermLinf::from_crossed(&CrossedModule::from_module(&g, &v)).expect("crossed module")
}

/// `A = (1/2) dx`, `B = 2 dx∧dy` on `R^2`.
pub fn gl1_mc_pair() -> MCPair {
    MCPair {
        a: PolyForm::zero(2, ValueSpace::L0, 1).with_term(qr(1, 2), &[0, 0], &[0], 0),
        b: PolyForm::zero(2, ValueSpace::Lm1, 1).with_term(q(2), &[0, 0], &[0, 1], 0),
    }
}

/// `A = x dy`, `B = dx∧dy`: not flat.
pub fn xdy_control() -> MCPair {
    MCPair {
        a: PolyForm::zero(2, ValueSpace::L0, 1).with_term(q(1), &[1, 0], &[1], 0),
        b: PolyForm::zero(2, ValueSpace::Lm1, 1).with_term(q(1), &[0, 0], &[0, 1], 0),
    }
}

pub fn sl2_flipped() -> LieAlgebra {
    let sl2 = LieAlgebra::sl2();
    let mut c = sl2.structure_constants().to_vec();
    c[4] = q(-2);
    LieAlgebra::new(3, sl2.basis_names().to_vec(), c).expect("shape")
}

/// `mu = 0`, `h = sl2` with the trivial action: fails the Peiffer identity.
pub fn peiffer_violation() -> CrossedModule {
    let g = LieAlgebra::abelian(1);
    CrossedModule::new(LieAlgebra::sl2(), g, QMatrix::zeros(1, 3), vec![QMatrix::zeros(3, 3)]).expect("shape")
}

/// `h = Q^2` abelian, `g = heis`, `mu` embedding the centre.
pub fn heis_centre() -> CrossedModule {
    let mu = QMatrix::from_i64(&[&[0, 0], &[0, 0], &[1, 0]]);
    CrossedModule::new(LieAlgebra::abelian(2), LieAlgebra::heisenberg(), mu, vec![QMatrix::zeros(2, 2); 3])
        .expect("shape")
}

/// Split sequence over `aff2` with `alpha = 0`, the module `V -> ḡ` and the
/// natural maps into its splice representative.
pub fn aff2_split() -> (ShortExactSequence, Cochain, CrossedModule, CrossedModule, ElementaryEquivalence) {
    let g = LieAlgebra::aff2();
    let v = LieModule::adjoint(&g);
    let ses = ShortExactSequence::split(&g, &v, &LieModule::trivial(&g, 1));
    let alpha = Cochain::zero(2, 2, 1);
    let splice = splice_crossed_module(&ses, &alpha).expect("split sequence");
    let x = CrossedModule::from_module(&g, &v);
    let psi = QMatrix::zeros(1, 2).vstack(&QMatrix::identity(2));
    let e = ElementaryEquivalence { phi: ses.inc.clone(), psi };
    (ses, alpha, x, splice, e)
}

fn to_json<T: Serialize>(v: &T) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("serializes");
    s.push('\n');
    s
}

/// Canonical contents of every shipped fixture.
pub fn generate() -> Vec<(&'static str, String)> {
    let (ses_split, alpha_split, aff2, splice, e) = aff2_split();
    let (ses, alpha) = nonzero_class_sequence();
    vec![
        ("lie/sl2.json", to_json(&LieAlgebraFile::from_lie(&LieAlgebra::sl2()))),
        ("lie/sl2_flipped.json", to_json(&LieAlgebraFile::from_lie(&sl2_flipped()))),
        ("crossed/identity_sl2.json", to_json(&CrossedModuleFile::from_crossed(&CrossedModule::identity(&LieAlgebra::sl2())))),
        ("crossed/peiffer_violation.json", to_json(&CrossedModuleFile::from_crossed(&peiffer_violation()))),
        ("crossed/heis_centre.json", to_json(&CrossedModuleFile::from_crossed(&heis_centre()))),
        ("crossed/aff2_module.json", to_json(&CrossedModuleFile::from_crossed(&aff2))),
        ("crossed/aff2_splice.json", to_json(&CrossedModuleFile::from_crossed(&splice))),
        ("crossed/aff2_maps.json", to_json(&EquivalenceFile::from_equivalence(&e))),
        ("sequences/nonzero_class.json", to_json(&SequenceFile::from_sequence(&ses, Some(&alpha)))),
        ("sequences/split_aff2.json", to_json(&SequenceFile::from_sequence(&ses_split, Some(&alpha_split)))),
        ("pairs/gl1_mc.json", to_json(&McPairFile::from_pair(&gl1_mc_pair(), &gl1()))),
        ("pairs/xdy_control.json", to_json(&McPairFile::from_pair(&xdy_control(), &gl1()))),
        ("dga/exterior2.json", to_json(&DgaFile::from_dga(&FinDGA::exterior(2)))),
        ("dga/truncated_mc.json", to_json(&DgaFile::from_dga(&FinDGA::truncated_odd(4, q(-1))))),
        ("dga/acyclic_pair.json", to_json(&DgaFile::from_dga(&FinDGA::acyclic_pair()))),
        ("dga/matrix2.json", to_json(&DgaFile::from_dga(&FinDGA::matrix_algebra(2)))),
        ("simplicial/torus3.json", to_json(&SimpSetFile::from_simpset(&torus_model(3).expect("cutoff")))),
    ]
}
