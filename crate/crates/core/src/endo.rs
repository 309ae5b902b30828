//! Endomorphism PROPs of colored families of complexes: elements of
//! `Hom(X_c̄, X_d̄)` with vertical and horizontal composition, the symmetric
//! group actions, and maps of families.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::{Arc, Mutex};

use num_traits::Zero;

use crate::chain::{tensor, ChainComplex, ChainMap, TensorLayout};
use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::profile::{Color, Palette, Permutation, Profile};
use crate::rational::{sign, Q};

/// `(degree, index)` of one tensor factor.
pub type FactorIndex = (usize, usize);

/// The basis of `X₁ ⊗ ⋯ ⊗ X_n` (left-nested) with each basis vector
/// labelled by its multi-index of factor basis vectors.
#[derive(Debug)]
pub struct TensorBasis {
    complex: ChainComplex,
    elements: Vec<Vec<Vec<FactorIndex>>>,
    lookup: HashMap<Vec<FactorIndex>, (usize, usize)>,
}

impl TensorBasis {
    pub fn new(parts: &[&ChainComplex]) -> Self {
        let mut acc = ChainComplex::unit();
        let mut layouts = Vec::with_capacity(parts.len());
        for x in parts {
            layouts.push(TensorLayout::new(&acc, x));
            acc = tensor(&acc, x);
        }
        let mut elements: Vec<Vec<Vec<FactorIndex>>> = acc.dims().iter().map(|&d| vec![Vec::new(); d]).collect();
        let mut lookup = HashMap::new();
        let mut multi: Vec<FactorIndex> = Vec::with_capacity(parts.len());
        fn walk(
            k: usize,
            at: (usize, usize),
            parts: &[&ChainComplex],
            layouts: &[TensorLayout],
            multi: &mut Vec<FactorIndex>,
            elements: &mut Vec<Vec<Vec<FactorIndex>>>,
            lookup: &mut HashMap<Vec<FactorIndex>, (usize, usize)>,
        ) {
            if k == parts.len() {
                elements[at.0][at.1] = multi.clone();
                lookup.insert(multi.clone(), at);
                return;
            }
            for (q, &d) in parts[k].dims().iter().enumerate() {
                for j in 0..d {
                    let next = (at.0 + q, layouts[k].index(at.0, at.1, q, j));
                    multi.push((q, j));
                    walk(k + 1, next, parts, layouts, multi, elements, lookup);
                    multi.pop();
                }
            }
        }
        if !acc.is_zero() {
            walk(0, (0, 0), parts, &layouts, &mut multi, &mut elements, &mut lookup);
        }
        TensorBasis { complex: acc, elements, lookup }
    }

    pub fn complex(&self) -> &ChainComplex {
        &self.complex
    }

    pub fn element(&self, degree: usize, index: usize) -> &[FactorIndex] {
        &self.elements[degree][index]
    }

    /// `(degree, index)` of a multi-index.
    pub fn position(&self, multi: &[FactorIndex]) -> (usize, usize) {
        self.lookup[multi]
    }
}

/// One complex per color.
#[derive(Clone)]
pub struct ColoredFamily {
    palette: Arc<Palette>,
    complexes: Vec<ChainComplex>,
    cache: Arc<Mutex<HashMap<Vec<Color>, Arc<TensorBasis>>>>,
}

impl fmt::Debug for ColoredFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ColoredFamily").field("palette", &self.palette).field("complexes", &self.complexes).finish()
    }
}

impl PartialEq for ColoredFamily {
    fn eq(&self, other: &Self) -> bool {
        self.palette == other.palette && self.complexes == other.complexes
    }
}

impl Eq for ColoredFamily {}

impl ColoredFamily {
    pub fn new(palette: &Arc<Palette>, complexes: Vec<ChainComplex>) -> Result<Self> {
        if complexes.len() != palette.len() {
            return Err(Error::LengthMismatch { expected: palette.len(), found: complexes.len() });
        }
        Ok(ColoredFamily { palette: palette.clone(), complexes, cache: Arc::default() })
    }

    pub fn palette(&self) -> &Arc<Palette> {
        &self.palette
    }

    pub fn complexes(&self) -> &[ChainComplex] {
        &self.complexes
    }

    pub fn get(&self, c: Color) -> &ChainComplex {
        &self.complexes[c.0 as usize]
    }

    pub fn total_dim(&self) -> usize {
        self.complexes.iter().map(ChainComplex::total_dim).sum()
    }

    pub fn basis(&self, p: &Profile) -> Arc<TensorBasis> {
        let key = p.colors().to_vec();
        if let Some(b) = self.cache.lock().expect("cache lock").get(&key) {
            return b.clone();
        }
        let parts: Vec<&ChainComplex> = p.colors().iter().map(|&c| self.get(c)).collect();
        let b = Arc::new(TensorBasis::new(&parts));
        self.cache.lock().expect("cache lock").insert(key, b.clone());
        b
    }

    /// `X_c̄ = X_{c₁} ⊗ ⋯ ⊗ X_{cₙ}`.
    pub fn tensor(&self, p: &Profile) -> ChainComplex {
        self.basis(p).complex().clone()
    }

    fn check(&self, p: &Profile) -> Result<()> {
        if **p.palette() != *self.palette {
            return Err(Error::PaletteMismatch);
        }
        Ok(())
    }
}

/// An element of `Hom(X_c̄, X_d̄)` of some degree.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EndoElement {
    out: Profile,
    input: Profile,
    map: ChainMap,
}

impl EndoElement {
    pub fn new(family: &ColoredFamily, out: Profile, input: Profile, map: ChainMap) -> Result<Self> {
        family.check(&out)?;
        family.check(&input)?;
        if *map.source() != family.tensor(&input) || *map.target() != family.tensor(&out) {
            return Err(Error::Shape(format!("map does not go from X{} to X{}", input.display(), out.display())));
        }
        Ok(EndoElement { out, input, map })
    }

    pub fn from_blocks(family: &ColoredFamily, out: Profile, input: Profile, degree: i64, blocks: Vec<Matrix>) -> Result<Self> {
        let map = ChainMap::new(family.tensor(&input), family.tensor(&out), degree, blocks)?;
        Self::new(family, out, input, map)
    }

    pub fn zero(family: &ColoredFamily, out: Profile, input: Profile, degree: i64) -> Self {
        let map = ChainMap::zero(&family.tensor(&input), &family.tensor(&out), degree);
        EndoElement { out, input, map }
    }

    pub fn identity(family: &ColoredFamily, p: Profile) -> Self {
        let map = ChainMap::identity(&family.tensor(&p));
        EndoElement { out: p.clone(), input: p, map }
    }

    pub fn out(&self) -> &Profile {
        &self.out
    }

    pub fn input(&self) -> &Profile {
        &self.input
    }

    pub fn degree(&self) -> i64 {
        self.map.degree()
    }

    pub fn map(&self) -> &ChainMap {
        &self.map
    }

    pub fn is_zero(&self) -> bool {
        self.map.blocks().iter().all(Matrix::is_zero)
    }

    /// `D(f) = d∘f − (−1)^k f∘d`.
    pub fn differential(&self) -> EndoElement {
        EndoElement { map: self.map.differential(), ..self.clone() }
    }

    pub fn add(&self, other: &EndoElement) -> Result<EndoElement> {
        if self.out != other.out || self.input != other.input {
            return Err(Error::ProfileMismatch { left: self.profiles(), right: other.profiles() });
        }
        Ok(EndoElement { map: self.map.add(&other.map)?, ..self.clone() })
    }

    pub fn scale(&self, s: &Q) -> EndoElement {
        EndoElement { map: self.map.scale(s), ..self.clone() }
    }

    pub fn sub(&self, other: &EndoElement) -> Result<EndoElement> {
        self.add(&other.scale(&sign(true)))
    }

    pub fn profiles(&self) -> String {
        format!("{} <- {}", self.out.display(), self.input.display())
    }
}

/// `Hom(X_c̄, X_d̄)` in non-negative degrees; the basis of degree `k` lists,
/// for `j = 0, 1, …`, the entries of `X_j → X_{j+k}` row by row.
pub fn endo_component(family: &ColoredFamily, out: &Profile, input: &Profile) -> ChainComplex {
    let a = family.tensor(input);
    let b = family.tensor(out);
    let top = b.len();
    let hom_dim = |k: usize| (0..a.len()).map(|j| a.dims()[j] * b.dim((j + k) as i64)).sum::<usize>();
    let dims: Vec<usize> = (0..top).map(hom_dim).collect();
    let unflatten = |k: usize, col: usize| -> ChainMap {
        let mut blocks: Vec<Matrix> = (0..a.len()).map(|j| Matrix::zeros(b.dim((j + k) as i64), a.dims()[j])).collect();
        let mut rest = col;
        for blk in blocks.iter_mut() {
            let size = blk.rows() * blk.cols();
            if rest < size {
                let cols = blk.cols();
                blk.set(rest / cols, rest % cols, Q::from_integer(1.into()));
                break;
            }
            rest -= size;
        }
        ChainMap::new(a.clone(), b.clone(), k as i64, blocks).expect("basis element shape")
    };
    let flatten = |f: &ChainMap| -> Vec<Q> { f.blocks().iter().flat_map(|m| m.entries().to_vec()).collect() };
    let boundaries = (1..top)
        .map(|k| {
            let mut m = Matrix::zeros(dims[k - 1], dims[k]);
            for col in 0..dims[k] {
                for (row, v) in flatten(&unflatten(k, col).differential()).into_iter().enumerate() {
                    m.set(row, col, v);
                }
            }
            m
        })
        .collect();
    ChainComplex::new(dims, boundaries).expect("D² = 0 on the hom complex")
}

/// `f ∘ g`.
pub fn endo_vertical(f: &EndoElement, g: &EndoElement) -> Result<EndoElement> {
    if f.input != g.out {
        return Err(Error::ProfileMismatch { left: f.input.display(), right: g.out.display() });
    }
    Ok(EndoElement { out: f.out.clone(), input: g.input.clone(), map: f.map.compose(&g.map)? })
}

/// `f ⊗ g` between flat tensor bases: `(f⊗g)(x⊗y) = (−1)^{|g||x|} f(x)⊗g(y)`.
#[allow(clippy::too_many_arguments)]
fn tensor_flat(
    f: &ChainMap,
    f_src: &TensorBasis,
    f_tgt: &TensorBasis,
    g: &ChainMap,
    g_src: &TensorBasis,
    g_tgt: &TensorBasis,
    src: &TensorBasis,
    tgt: &TensorBasis,
    split: usize,
) -> ChainMap {
    let (kf, kg) = (f.degree(), g.degree());
    let k = kf + kg;
    let s = src.complex();
    let t = tgt.complex();
    let mut blocks: Vec<Matrix> = (0..s.len() as i64).map(|n| Matrix::zeros(t.dim(n + k), s.dim(n))).collect();
    for (n, block) in blocks.iter_mut().enumerate() {
        for col in 0..s.dims()[n] {
            let multi = src.element(n, col);
            let (px, ix) = f_src.position(&multi[..split]);
            let (py, iy) = g_src.position(&multi[split..]);
            let (tx, ty) = (px as i64 + kf, py as i64 + kg);
            if tx < 0 || ty < 0 {
                continue;
            }
            let fb = f.block(px as i64);
            let gb = g.block(py as i64);
            let sgn = sign(kg.rem_euclid(2) == 1 && px % 2 == 1);
            for a in 0..fb.rows() {
                let fa = fb.get(a, ix);
                if fa.is_zero() {
                    continue;
                }
                for b in 0..gb.rows() {
                    let gv = gb.get(b, iy);
                    if gv.is_zero() {
                        continue;
                    }
                    let mut target = f_tgt.element(tx as usize, a).to_vec();
                    target.extend_from_slice(g_tgt.element(ty as usize, b));
                    let (_, row) = tgt.position(&target);
                    block.add_at(row, col, &(&sgn * &(fa * gv)));
                }
            }
        }
    }
    ChainMap::new(s.clone(), t.clone(), k, blocks).expect("tensor of maps")
}

/// `f ⊗ g` at the concatenated profiles.
pub fn endo_horizontal(family: &ColoredFamily, f: &EndoElement, g: &EndoElement) -> Result<EndoElement> {
    let out = f.out.concat(&g.out)?;
    let input = f.input.concat(&g.input)?;
    let map = tensor_flat(
        &f.map,
        &family.basis(&f.input),
        &family.basis(&f.out),
        &g.map,
        &family.basis(&g.input),
        &family.basis(&g.out),
        &family.basis(&input),
        &family.basis(&out),
        f.input.len(),
    );
    Ok(EndoElement { out, input, map })
}

/// The isomorphism `X_c̄ → X_{σc̄}` moving the factor in position `i` to
/// position `σ(i)`, with the Koszul sign of the graded reordering.
pub fn permutation_iso(family: &ColoredFamily, p: &Profile, sigma: &Permutation) -> Result<ChainMap> {
    if sigma.len() != p.len() {
        return Err(Error::LengthMismatch { expected: p.len(), found: sigma.len() });
    }
    let src = family.basis(p);
    let moved = p.left(sigma);
    let tgt = family.basis(&moved);
    let s = src.complex();
    let blocks = (0..s.len())
        .map(|n| {
            let mut m = Matrix::zeros(s.dims()[n], s.dims()[n]);
            for col in 0..s.dims()[n] {
                let multi = src.element(n, col);
                let mut target = multi.to_vec();
                for (i, &x) in multi.iter().enumerate() {
                    target[sigma.apply(i)] = x;
                }
                let odd_swaps = (0..multi.len())
                    .flat_map(|i| (i + 1..multi.len()).map(move |j| (i, j)))
                    .filter(|&(i, j)| sigma.apply(i) > sigma.apply(j) && multi[i].0 % 2 == 1 && multi[j].0 % 2 == 1)
                    .count();
                let (_, row) = tgt.position(&target);
                m.set(row, col, sign(odd_swaps % 2 == 1));
            }
            m
        })
        .collect();
    ChainMap::new(s.clone(), tgt.complex().clone(), 0, blocks)
}

/// `σ·f·τ = P_σ ∘ f ∘ P_τ`, where `P_τ: X_{c̄τ} → X_c̄`.
pub fn endo_permute(family: &ColoredFamily, sigma: &Permutation, tau: &Permutation, f: &EndoElement) -> Result<EndoElement> {
    let out = f.out.left(sigma);
    let input = f.input.right(tau);
    let post = permutation_iso(family, &f.out, sigma)?;
    let pre = permutation_iso(family, &input, tau)?;
    let map = post.compose(&f.map)?.compose(&pre)?;
    Ok(EndoElement { out, input, map })
}

/// A color-indexed family of degree-0 chain maps `f_c: X_c → Y_c`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FamilyMap {
    source: ColoredFamily,
    target: ColoredFamily,
    maps: Vec<ChainMap>,
}

impl FamilyMap {
    pub fn new(source: ColoredFamily, target: ColoredFamily, maps: Vec<ChainMap>) -> Result<Self> {
        if source.palette != target.palette {
            return Err(Error::PaletteMismatch);
        }
        if maps.len() != source.complexes.len() {
            return Err(Error::LengthMismatch { expected: source.complexes.len(), found: maps.len() });
        }
        for (c, f) in maps.iter().enumerate() {
            if f.source() != &source.complexes[c] || f.target() != &target.complexes[c] {
                return Err(Error::Shape(format!("map for color {} has the wrong source or target", source.palette.name(Color(c as u16)))));
            }
            if !f.is_chain_map() {
                return Err(Error::Precondition(format!("map for color {} is not a degree-0 chain map", source.palette.name(Color(c as u16)))));
            }
        }
        Ok(FamilyMap { source, target, maps })
    }

    pub fn identity(family: &ColoredFamily) -> Self {
        FamilyMap { source: family.clone(), target: family.clone(), maps: family.complexes.iter().map(ChainMap::identity).collect() }
    }

    pub fn source(&self) -> &ColoredFamily {
        &self.source
    }

    pub fn target(&self) -> &ColoredFamily {
        &self.target
    }

    pub fn maps(&self) -> &[ChainMap] {
        &self.maps
    }

    pub fn get(&self, c: Color) -> &ChainMap {
        &self.maps[c.0 as usize]
    }

    pub fn compose(&self, other: &FamilyMap) -> Result<FamilyMap> {
        let maps = self.maps.iter().zip(&other.maps).map(|(f, g)| f.compose(g)).collect::<Result<Vec<_>>>()?;
        FamilyMap::new(other.source.clone(), self.target.clone(), maps)
    }

    /// `f_c̄ = f_{c₁} ⊗ ⋯ ⊗ f_{cₙ}: X_c̄ → Y_c̄`.
    pub fn tensor_power(&self, p: &Profile) -> ChainMap {
        if p.is_empty() {
            return ChainMap::identity(&ChainComplex::unit());
        }
        let mut acc_profile = p.slice(0..1).expect("non-empty profile");
        let mut acc = self.get(p.get(0)).clone();
        for i in 1..p.len() {
            let next = p.slice(i..i + 1).expect("index in range");
            let joined = acc_profile.concat(&next).expect("same palette");
            acc = tensor_flat(
                &acc,
                &self.source.basis(&acc_profile),
                &self.target.basis(&acc_profile),
                self.get(p.get(i)),
                &self.source.basis(&next),
                &self.target.basis(&next),
                &self.source.basis(&joined),
                &self.target.basis(&joined),
                i,
            );
            acc_profile = joined;
        }
        acc
    }
}

/// `f_d̄ ∘ φ_X − φ_Y ∘ f_c̄`; zero exactly when the pair lies in the
/// relative endomorphism object `E_f`.
pub fn relative_endo_membership(f: &FamilyMap, phi_x: &EndoElement, phi_y: &EndoElement) -> Result<ChainMap> {
    if phi_x.out != phi_y.out || phi_x.input != phi_y.input || phi_x.degree() != phi_y.degree() {
        return Err(Error::ProfileMismatch { left: phi_x.profiles(), right: phi_y.profiles() });
    }
    let lhs = f.tensor_power(&phi_x.out).compose(&phi_x.map)?;
    let rhs = phi_y.map.compose(&f.tensor_power(&phi_x.input))?;
    lhs.add(&rhs.scale(&sign(true)))
}

/// The first generator whose pair of images fails to lie in `E_f`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MorphismFailure {
    pub generator: String,
    pub residual: ChainMap,
}

/// The common assignment into `E_f`: for each generator, its images in
/// `E_X` and `E_Y`.
pub type MorphismWitness = BTreeMap<String, (EndoElement, EndoElement)>;

/// Succeeds iff every generator's pair of images lies in `E_f`.
pub fn morphism_witness(
    f: &FamilyMap,
    lambda_x: &BTreeMap<String, EndoElement>,
    lambda_y: &BTreeMap<String, EndoElement>,
) -> Result<std::result::Result<MorphismWitness, MorphismFailure>> {
    if lambda_x.keys().ne(lambda_y.keys()) {
        return Err(Error::Precondition("structures assign different generators".into()));
    }
    let mut witness = MorphismWitness::new();
    for (name, x) in lambda_x {
        let y = &lambda_y[name];
        let residual = relative_endo_membership(f, x, y)?;
        if !residual.blocks().iter().all(Matrix::is_zero) {
            return Ok(Err(MorphismFailure { generator: name.clone(), residual }));
        }
        witness.insert(name.clone(), (x.clone(), y.clone()));
    }
    Ok(Ok(witness))
}
