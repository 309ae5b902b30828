#![allow(dead_code)]

use std::path::Path;

use cprop::algebra::{transfer, AlgebraStructure, Direction};
use cprop::chain::{ChainComplex, ChainMap};
use cprop::endo::{ColoredFamily, FamilyMap};
use cprop::format::{render, Document};
use cprop::operad::{ColoredOperad, OperadAlgebra};
use cprop::{samples, Matrix, Palette};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use tempfile::TempDir;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// `X ⊕ E → X`.
pub fn projection(x: &ChainComplex, e: &ChainComplex) -> ChainMap {
    let s = x.direct_sum(e);
    let blocks = (0..s.len() as i64).map(|n| Matrix::hstack(&[&Matrix::identity(x.dim(n)), &Matrix::zeros(x.dim(n), e.dim(n))])).collect();
    ChainMap::new(s, x.clone(), 0, blocks).unwrap()
}

/// `X → X ⊕ E`.
pub fn inclusion(x: &ChainComplex, e: &ChainComplex) -> ChainMap {
    let t = x.direct_sum(e);
    let blocks = (0..x.len() as i64).map(|n| Matrix::vstack(&[&Matrix::identity(x.dim(n)), &Matrix::zeros(e.dim(n), x.dim(n))])).collect();
    ChainMap::new(x.clone(), t, 0, blocks).unwrap()
}

pub fn write(dir: &Path, name: &str, doc: Document) {
    std::fs::write(dir.join(name), render(&doc)).unwrap();
}

/// The pieces of the transfer fixtures: the ground field `k = ℚ[0]`, the
/// family `k ⊕ D` with `D` a disc, and the maps between them.
pub struct Transfer {
    pub ground: AlgebraStructure,
    pub big: ColoredFamily,
    pub proj: FamilyMap,
    pub incl: FamilyMap,
}

pub fn transfer_fixture() -> Transfer {
    let ground = samples::ground_field_algebra();
    let k = ground.family().complexes()[0].clone();
    let d = ChainComplex::disc(1);
    let big = ColoredFamily::new(ground.family().palette(), vec![k.direct_sum(&d)]).unwrap();
    let proj = FamilyMap::new(big.clone(), ground.family().clone(), vec![projection(&k, &d)]).unwrap();
    let incl = FamilyMap::new(ground.family().clone(), big.clone(), vec![inclusion(&k, &d)]).unwrap();
    Transfer { ground, big, proj, incl }
}

/// A workspace holding one document of each kind the commands consume.
pub fn workspace() -> TempDir {
    let dir = tempfile::tempdir().unwrap();
    let w = dir.path();
    let mut r = rng(7);

    let one = Palette::new(["c"]).unwrap();
    let mu = cprop::graph::Signature::new(
        &one,
        vec![cprop::graph::Generator::new("mu", cprop::Profile::from_names(&one, &["c"]).unwrap(), cprop::Profile::from_names(&one, &["c", "c"]).unwrap(), 0).unwrap()],
    )
    .unwrap();
    write(w, "mu.json", Document::Signature(mu));
    write(w, "a_inf.json", Document::Presentation(samples::a_infinity()));

    let t = transfer_fixture();
    write(w, "ground.json", Document::Structure(t.ground.clone()));
    write(w, "big.json", Document::Family(t.big.clone()));
    write(w, "proj.json", Document::FamilyMap(t.proj.clone()));
    write(w, "incl.json", Document::FamilyMap(t.incl.clone()));
    let lifted = transfer(t.ground.presentation(), &t.proj, Direction::AlongAcyclicFibration, &t.ground).unwrap();
    write(w, "lifted.json", Document::Structure(lifted));
    let pushed = transfer(t.ground.presentation(), &t.incl, Direction::AlongAcyclicCofibration, &t.ground).unwrap();
    write(w, "pushed.json", Document::Structure(pushed.clone()));
    write(w, "morph.json", Document::AlgebraMorphism { map: t.incl.clone(), source: t.ground.clone(), target: pushed });
    write(w, "big_id.json", Document::FamilyMap(FamilyMap::identity(&t.big)));
    // a reference-only document: both families come from other files
    std::fs::write(
        w.join("proj_ref.json"),
        serde_json::to_string_pretty(&serde_json::json!({
            "kind": "family_map",
            "source": "big.json",
            "target": {"kind": "family", "colors": ["c"], "complexes": {"c": {"kind": "complex", "dims": [1], "d": []}}},
            "maps": {"c": [[["1/1", "0/1"]], []]},
        }))
        .unwrap(),
    )
    .unwrap();

    let x = samples::complex(&mut r, 8, 3);
    write(w, "x.json", Document::Complex(x.clone()));
    let (_, iso) = samples::change_basis(&mut r, &x);
    write(w, "iso.json", Document::ChainMap(iso));

    let two = Palette::new(["a", "b"]).unwrap();
    write(w, "p.json", Document::Bimodule(samples::bimodule(&mut r, &two, 2, 3, 2)));
    write(w, "q.json", Document::Bimodule(samples::bimodule(&mut r, &two, 2, 3, 2)));

    let assoc = ColoredOperad::associative(3).unwrap();
    write(w, "assoc.json", Document::Operad(assoc.clone()));
    let a = OperadAlgebra::from_associative(&assoc, 1, &Matrix::identity(1)).unwrap();
    write(w, "field.json", Document::Family(a.family().clone()));
    write(w, "field_alg.json", Document::OperadAlgebra(assoc, a));
    dir
}

/// Runs the command line and returns its output and exit code.
pub fn cprop(dir: &Path, args: &[&str]) -> (String, i32) {
    let mut full = vec!["--workspace", dir.to_str().unwrap()];
    full.extend_from_slice(args);
    cprop_cli::run(full)
}
