//! Algebras over quasi-free presentations: evaluation of expressions in an
//! endomorphism PROP, the algebra and morphism checks, and transfer of
//! structures along acyclic fibrations and cofibrations.

use std::collections::BTreeMap;

use crate::chain::{ChainComplex, ChainMap, LiftSystem};
use crate::endo::{endo_horizontal, endo_permute, endo_vertical, morphism_witness, ColoredFamily, EndoElement, FamilyMap, MorphismFailure, MorphismWitness};
use crate::error::{Error, Result};
use crate::graph::{validate_presentation, Expression, Node, PropPresentation};
use crate::matrix::Matrix;
use crate::profile::{Permutation, Profile};
use crate::rational::{sign, Q};

/// A presentation together with the images of its generators in `E_X`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AlgebraStructure {
    presentation: PropPresentation,
    family: ColoredFamily,
    assignment: BTreeMap<String, EndoElement>,
}

impl AlgebraStructure {
    /// Checks that every generator has an image of its profiles and degree.
    pub fn new(presentation: PropPresentation, family: ColoredFamily, assignment: BTreeMap<String, EndoElement>) -> Result<Self> {
        let sig = &presentation.signature;
        if **sig.palette() != **family.palette() {
            return Err(Error::PaletteMismatch);
        }
        for name in assignment.keys() {
            sig.index_of(name)?;
        }
        for g in sig.generators() {
            let image = assignment.get(g.name()).ok_or_else(|| Error::Precondition(format!("generator {} has no image", g.name())))?;
            if image.out() != g.out() || image.input() != g.input() {
                return Err(Error::ProfileMismatch {
                    left: format!("{}: {} <- {}", g.name(), g.out().display(), g.input().display()),
                    right: image.profiles(),
                });
            }
            if image.degree() != g.degree() as i64 {
                return Err(Error::Type(format!("image of {} has degree {}, expected {}", g.name(), image.degree(), g.degree())));
            }
            if image.map().source() != &family.tensor(g.input()) || image.map().target() != &family.tensor(g.out()) {
                return Err(Error::Shape(format!("image of {} is not a map of the family", g.name())));
            }
        }
        Ok(AlgebraStructure { presentation, family, assignment })
    }

    pub fn presentation(&self) -> &PropPresentation {
        &self.presentation
    }

    pub fn family(&self) -> &ColoredFamily {
        &self.family
    }

    pub fn assignment(&self) -> &BTreeMap<String, EndoElement> {
        &self.assignment
    }

    pub fn image(&self, generator: &str) -> Result<&EndoElement> {
        self.assignment.get(generator).ok_or_else(|| Error::UnknownGenerator(generator.to_string()))
    }
}

/// The image of an expression under the PROP morphism determined by the
/// generator images.
pub fn evaluate(e: &Expression, a: &AlgebraStructure) -> Result<EndoElement> {
    evaluate_with(e, &a.presentation, &a.family, &a.assignment)
}

fn evaluate_with(e: &Expression, p: &PropPresentation, family: &ColoredFamily, images: &BTreeMap<String, EndoElement>) -> Result<EndoElement> {
    Ok(match e.node() {
        Node::Gen(i) => {
            let name = p.signature.get(*i).name();
            images.get(name).cloned().ok_or_else(|| Error::UnknownGenerator(name.to_string()))?
        }
        Node::Vert(f, g) => endo_vertical(&evaluate_with(f, p, family, images)?, &evaluate_with(g, p, family, images)?)?,
        Node::Horiz(f, g) => endo_horizontal(family, &evaluate_with(f, p, family, images)?, &evaluate_with(g, p, family, images)?)?,
        Node::Left(sigma, f) => endo_permute(family, sigma, &Permutation::identity(f.input().len()), &evaluate_with(f, p, family, images)?)?,
        Node::Right(f, tau) => endo_permute(family, &Permutation::identity(f.out().len()), tau, &evaluate_with(f, p, family, images)?)?,
    })
}

/// `Σ cᵢ·λ(eᵢ)`, the zero element of the given type when empty.
fn evaluate_sum(
    terms: &[(Q, Expression)],
    out: &Profile,
    input: &Profile,
    degree: i64,
    p: &PropPresentation,
    family: &ColoredFamily,
    images: &BTreeMap<String, EndoElement>,
) -> Result<EndoElement> {
    let mut acc = EndoElement::zero(family, out.clone(), input.clone(), degree);
    for (c, e) in terms {
        acc = acc.add(&evaluate_with(e, p, family, images)?.scale(c))?;
    }
    Ok(acc)
}

/// `λ(δg)` for a generator.
pub fn evaluate_delta(a: &AlgebraStructure, generator: &str) -> Result<EndoElement> {
    delta_image(&a.presentation, &a.family, &a.assignment, generator)
}

fn delta_image(p: &PropPresentation, family: &ColoredFamily, images: &BTreeMap<String, EndoElement>, generator: &str) -> Result<EndoElement> {
    let g = p.signature.get(p.signature.index_of(generator)?);
    evaluate_sum(p.delta_of(generator), g.out(), g.input(), g.degree() as i64 - 1, p, family, images)
}

/// A failed identity `lhs = rhs` with `lhs − rhs`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Residual {
    pub what: String,
    pub residual: ChainMap,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct AlgebraReport {
    pub failures: Vec<Residual>,
}

impl AlgebraReport {
    pub fn is_valid(&self) -> bool {
        self.failures.is_empty()
    }
}

fn is_zero(f: &ChainMap) -> bool {
    f.blocks().iter().all(Matrix::is_zero)
}

/// Verifies `D(λg) = λ(δg)` for every generator and every relation.
pub fn check_algebra(a: &AlgebraStructure) -> Result<AlgebraReport> {
    let mut failures = Vec::new();
    for g in a.presentation.signature.generators() {
        let lhs = a.image(g.name())?.differential();
        let diff = lhs.sub(&evaluate_delta(a, g.name())?)?;
        if !is_zero(diff.map()) {
            failures.push(Residual { what: format!("D(λ{0}) = λ(δ{0})", g.name()), residual: diff.map().clone() });
        }
    }
    for (i, (l, r)) in a.presentation.relations.iter().enumerate() {
        let (el, er) = (evaluate(l, a)?, evaluate(r, a)?);
        if el.degree() != er.degree() {
            return Err(Error::Type(format!("relation {}: sides of degrees {} and {}", i + 1, el.degree(), er.degree())));
        }
        let diff = el.sub(&er)?;
        if !is_zero(diff.map()) {
            failures.push(Residual { what: format!("relation {}: {} = {}", i + 1, l, r), residual: diff.map().clone() });
        }
    }
    Ok(AlgebraReport { failures })
}

/// Whether `f: X → Y` is a morphism of the two algebras.
pub fn check_morphism(f: &FamilyMap, ax: &AlgebraStructure, ay: &AlgebraStructure) -> Result<std::result::Result<MorphismWitness, MorphismFailure>> {
    if ax.presentation != ay.presentation {
        return Err(Error::Precondition("structures use different presentations".into()));
    }
    if f.source() != &ax.family || f.target() != &ay.family {
        return Err(Error::Shape("map does not go between the two families".into()));
    }
    morphism_witness(f, &ax.assignment, &ay.assignment)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Direction {
    /// `f: X → Y` an acyclic fibration, structure given on `Y`, built on `X`.
    AlongAcyclicFibration,
    /// `f: X → Y` an acyclic cofibration, structure given on `X`, built on `Y`.
    AlongAcyclicCofibration,
}

/// Constraints on one unknown map `φ: S → T` of degree `k`.
struct GeneratorSystem<'a> {
    source: &'a ChainComplex,
    target: &'a ChainComplex,
    degree: i64,
    /// `D(φ) = rhs`.
    boundary: &'a ChainMap,
    /// `φ ∘ i = rhs` for each `(i, rhs)`.
    pre: Vec<(ChainMap, ChainMap)>,
    /// `p ∘ φ = rhs` for each `(p, rhs)`.
    post: Vec<(ChainMap, ChainMap)>,
}

impl GeneratorSystem<'_> {
    fn solve(&self) -> std::result::Result<ChainMap, String> {
        let (s, t, k) = (self.source, self.target, self.degree);
        let top = s.len() as i64;
        let mut sys = LiftSystem::new((0..top).map(|n| (t.dim(n + k), s.dim(n))).collect());
        let shape_err = |e: Error| e.to_string();
        for n in 0..top {
            let mut terms: Vec<(usize, Matrix, Matrix)> = vec![(n as usize, t.d(n + k), Matrix::identity(s.dim(n)))];
            if n >= 1 {
                terms.push(((n - 1) as usize, Matrix::identity(t.dim(n - 1 + k)).scale(&-sign(k.rem_euclid(2) == 1)), s.d(n)));
            }
            let refs: Vec<(usize, &Matrix, &Matrix)> = terms.iter().map(|(b, a, c)| (*b, a, c)).collect();
            sys.add(&format!("D(φ) in source degree {n}"), &refs, &self.boundary.block(n)).map_err(shape_err)?;
        }
        for (i, rhs) in &self.pre {
            for n in 0..i.source().len() as i64 {
                let id = Matrix::identity(t.dim(n + k));
                let blk = i.block(n);
                let terms: Vec<(usize, &Matrix, &Matrix)> = if n < top { vec![(n as usize, &id, &blk)] } else { Vec::new() };
                sys.add(&format!("φ∘i in degree {n}"), &terms, &rhs.block(n)).map_err(shape_err)?;
            }
        }
        for (p, rhs) in &self.post {
            for n in 0..top {
                let blk = p.block(n + k);
                let id = Matrix::identity(s.dim(n));
                sys.add(&format!("p∘φ in degree {n}"), &[(n as usize, &blk, &id)], &rhs.block(n)).map_err(shape_err)?;
            }
        }
        let blocks = sys.solve().map_err(|u| format!("{} (residual {})", u.label, crate::rational::format_q(&u.residual)))?;
        ChainMap::new(s.clone(), t.clone(), k, blocks).map_err(|e| e.to_string())
    }
}

fn gate(f: &FamilyMap, want: &str, test: impl Fn(&crate::chain::MapClass) -> bool) -> Result<()> {
    for (c, m) in f.maps().iter().enumerate() {
        let class = m.classify()?;
        if !test(&class) {
            let name = f.source().palette().name(crate::profile::Color(c as u16)).to_string();
            return Err(Error::Precondition(format!("map for color {name} is not {want}")));
        }
    }
    Ok(())
}

fn check_presentation(p: &PropPresentation) -> Result<()> {
    validate_presentation(p).into_result()
}

/// Generator names sorted by degree (stable in signature order).
fn by_degree(p: &PropPresentation) -> Vec<String> {
    let mut gens: Vec<_> = p.signature.generators().iter().collect();
    gens.sort_by_key(|g| g.degree());
    gens.into_iter().map(|g| g.name().to_string()).collect()
}

fn unsolvable(generator: &str, why: String, hint: &str) -> Error {
    Error::Unsolvable(format!("generator {generator}: {why}; {hint}"))
}

fn relations_hold(result: AlgebraStructure) -> Result<AlgebraStructure> {
    if result.presentation.relations.is_empty() {
        return Ok(result);
    }
    let report = check_algebra(&result)?;
    match report.failures.first() {
        None => Ok(result),
        Some(r) => Err(Error::Unsolvable(format!("{} fails after transfer; transfer is only guaranteed for quasi-free presentations", r.what))),
    }
}

/// Builds the structure on the other end of `f` making `f` a morphism.
pub fn transfer(p: &PropPresentation, f: &FamilyMap, direction: Direction, given: &AlgebraStructure) -> Result<AlgebraStructure> {
    check_presentation(p)?;
    if given.presentation != *p {
        return Err(Error::Precondition("structure uses a different presentation".into()));
    }
    let (built, hint) = match direction {
        Direction::AlongAcyclicFibration => {
            gate(f, "an acyclic fibration (surjective quasi-isomorphism)", |c| c.acyclic_fibration)?;
            if given.family != *f.target() {
                return Err(Error::Shape("given structure must live on the target of the map".into()));
            }
            (f.source().clone(), "check that δ is triangular and that every color map is a surjective quasi-isomorphism")
        }
        Direction::AlongAcyclicCofibration => {
            gate(f, "an acyclic cofibration (injective quasi-isomorphism)", |c| c.acyclic_cofibration)?;
            if given.family != *f.source() {
                return Err(Error::Shape("given structure must live on the source of the map".into()));
            }
            (f.target().clone(), "check that δ is triangular and that every color map is an injective quasi-isomorphism")
        }
    };
    let mut images = BTreeMap::new();
    for name in by_degree(p) {
        let g = p.signature.get(p.signature.index_of(&name)?);
        let boundary = delta_image(p, &built, &images, &name)?;
        let (src, tgt) = (built.tensor(g.input()), built.tensor(g.out()));
        let given_image = given.image(&name)?.map();
        let (fc, fd) = (f.tensor_power(g.input()), f.tensor_power(g.out()));
        let mut system = GeneratorSystem { source: &src, target: &tgt, degree: g.degree() as i64, boundary: boundary.map(), pre: Vec::new(), post: Vec::new() };
        match direction {
            Direction::AlongAcyclicFibration => system.post.push((fd, given_image.compose(&fc)?)),
            Direction::AlongAcyclicCofibration => system.pre.push((fc, fd.compose(given_image)?)),
        }
        let phi = system.solve().map_err(|why| unsolvable(&name, why, hint))?;
        images.insert(name, EndoElement::new(&built, g.out().clone(), g.input().clone(), phi)?);
    }
    relations_hold(AlgebraStructure::new(p.clone(), built, images)?)
}

/// A structure on `B` for a factorization `A → B → C` of a morphism of
/// algebras `g = p ∘ i` making both `i` and `p` morphisms.
pub fn factor_algebra(g: &FamilyMap, a: &AlgebraStructure, c: &AlgebraStructure, i: &FamilyMap, p: &FamilyMap) -> Result<AlgebraStructure> {
    let pres = &a.presentation;
    check_presentation(pres)?;
    if c.presentation != *pres {
        return Err(Error::Precondition("structures use different presentations".into()));
    }
    gate(i, "an acyclic cofibration (injective quasi-isomorphism)", |m| m.acyclic_cofibration)?;
    gate(p, "a fibration (surjective in positive degrees)", |m| m.fibration)?;
    if i.source() != &a.family || p.target() != &c.family || g.source() != &a.family || g.target() != &c.family || i.target() != p.source() {
        return Err(Error::Shape("maps do not form a factorization between the two families".into()));
    }
    if p.compose(i)? != *g {
        return Err(Error::Precondition("p ∘ i differs from g".into()));
    }
    let b = i.target().clone();
    let hint = "check that δ is triangular, i is an acyclic cofibration and p a fibration";
    let mut images = BTreeMap::new();
    for name in by_degree(pres) {
        let gen = pres.signature.get(pres.signature.index_of(&name)?);
        let boundary = delta_image(pres, &b, &images, &name)?;
        let (src, tgt) = (b.tensor(gen.input()), b.tensor(gen.out()));
        let (ic, id) = (i.tensor_power(gen.input()), i.tensor_power(gen.out()));
        let (pc, pd) = (p.tensor_power(gen.input()), p.tensor_power(gen.out()));
        let pre_rhs = id.compose(a.image(&name)?.map())?;
        let post_rhs = c.image(&name)?.map().compose(&pc)?;
        let system = GeneratorSystem {
            source: &src,
            target: &tgt,
            degree: gen.degree() as i64,
            boundary: boundary.map(),
            pre: vec![(ic, pre_rhs)],
            post: vec![(pd, post_rhs)],
        };
        let beta = system.solve().map_err(|why| unsolvable(&name, why, hint))?;
        images.insert(name, EndoElement::new(&b, gen.out().clone(), gen.input().clone(), beta)?);
    }
    relations_hold(AlgebraStructure::new(pres.clone(), b, images)?)
}
