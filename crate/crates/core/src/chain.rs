//! Bounded, non-negatively graded chain complexes over ℚ.
//!
//! Tensor products use the Koszul rule: `d(x⊗y) = dx⊗y + (−1)^p x⊗dy` and
//! `(f⊗g)(x⊗y) = (−1)^{|g||x|} f(x)⊗g(y)`.

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::matrix::{Inconsistent, Matrix};
use crate::rational::{sign, Q};

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ChainComplex {
    dims: Vec<usize>,
    /// `boundary[n]: X_n → X_{n−1}`; `boundary[0]` is the empty `0 × dim₀` map.
    boundary: Vec<Matrix>,
}

impl ChainComplex {
    /// `boundaries[i]` is `d_{i+1}: X_{i+1} → X_i`.
    pub fn new(dims: Vec<usize>, boundaries: Vec<Matrix>) -> Result<Self> {
        let top = dims.len();
        if boundaries.len() + 1 != top.max(1) {
            return Err(Error::InvalidComplex(format!(
                "{} degrees need {} boundary maps, got {}",
                top,
                top.saturating_sub(1),
                boundaries.len()
            )));
        }
        let mut boundary = Vec::with_capacity(top);
        if top > 0 {
            boundary.push(Matrix::zeros(0, dims[0]));
        }
        for (i, b) in boundaries.into_iter().enumerate() {
            let n = i + 1;
            if b.shape() != (dims[n - 1], dims[n]) {
                return Err(Error::InvalidComplex(format!(
                    "d_{n} has shape {:?}, expected {:?}",
                    b.shape(),
                    (dims[n - 1], dims[n])
                )));
            }
            boundary.push(b);
        }
        let x = ChainComplex { dims, boundary };
        for n in 2..x.dims.len() {
            if !(&x.boundary[n - 1] * &x.boundary[n]).is_zero() {
                return Err(Error::InvalidComplex(format!("d_{} d_{} ≠ 0", n - 1, n)));
            }
        }
        Ok(x.trimmed())
    }

    pub fn zero() -> Self {
        ChainComplex { dims: Vec::new(), boundary: Vec::new() }
    }

    /// `ℚⁿ` concentrated in degree 0.
    pub fn concentrated(dim: usize) -> Self {
        Self::in_degree(0, dim)
    }

    pub fn in_degree(degree: usize, dim: usize) -> Self {
        let mut dims = vec![0; degree + 1];
        dims[degree] = dim;
        let boundaries = (1..=degree).map(|n| Matrix::zeros(dims[n - 1], dims[n])).collect();
        Self::new(dims, boundaries).expect("valid")
    }

    /// The monoidal unit `ℚ[0]`.
    pub fn unit() -> Self {
        Self::concentrated(1)
    }

    /// The acyclic disc `ℚ →id ℚ` in degrees `n, n−1` (`n ≥ 1`).
    pub fn disc(n: usize) -> Self {
        assert!(n >= 1, "disc needs n ≥ 1");
        let mut dims = vec![0; n + 1];
        dims[n] = 1;
        dims[n - 1] = 1;
        let boundaries = (1..=n)
            .map(|k| if k == n { Matrix::identity(1) } else { Matrix::zeros(dims[k - 1], dims[k]) })
            .collect();
        Self::new(dims, boundaries).expect("valid")
    }

    fn trimmed(mut self) -> Self {
        while self.dims.last() == Some(&0) {
            self.dims.pop();
            self.boundary.pop();
        }
        self
    }

    /// One past the highest nonzero degree.
    pub fn len(&self) -> usize {
        self.dims.len()
    }

    pub fn is_zero(&self) -> bool {
        self.dims.is_empty()
    }

    pub fn is_empty(&self) -> bool {
        self.is_zero()
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn dim(&self, n: i64) -> usize {
        if n < 0 {
            0
        } else {
            self.dims.get(n as usize).copied().unwrap_or(0)
        }
    }

    pub fn total_dim(&self) -> usize {
        self.dims.iter().sum()
    }

    /// `d_n: X_n → X_{n−1}`, zero outside the support.
    pub fn d(&self, n: i64) -> Matrix {
        if n >= 1 && (n as usize) < self.dims.len() {
            self.boundary[n as usize].clone()
        } else {
            Matrix::zeros(self.dim(n - 1), self.dim(n))
        }
    }

    /// Offset of degree `n` inside the total (degree-ordered) basis.
    pub fn offset(&self, n: usize) -> usize {
        self.dims.iter().take(n).sum()
    }

    /// Degree of the total-basis index `i`.
    pub fn degree_of(&self, mut i: usize) -> usize {
        for (n, &d) in self.dims.iter().enumerate() {
            if i < d {
                return n;
            }
            i -= d;
        }
        panic!("index outside complex")
    }

    /// The differential on the total space.
    pub fn total_differential(&self) -> Matrix {
        let t = self.total_dim();
        let mut m = Matrix::zeros(t, t);
        for n in 1..self.dims.len() {
            m.paste(self.offset(n - 1), self.offset(n), &self.boundary[n]);
        }
        m
    }

    pub fn direct_sum(&self, other: &ChainComplex) -> ChainComplex {
        let top = self.len().max(other.len());
        let dims: Vec<usize> = (0..top as i64).map(|n| self.dim(n) + other.dim(n)).collect();
        let boundaries = (1..top as i64).map(|n| Matrix::block_diag(&[&self.d(n), &other.d(n)])).collect();
        ChainComplex::new(dims, boundaries).expect("direct sum of complexes")
    }

    pub fn direct_sum_all(parts: &[ChainComplex]) -> ChainComplex {
        parts.iter().fold(ChainComplex::zero(), |acc, p| acc.direct_sum(p))
    }

    /// Homology dimensions by rank–nullity, indexed by degree.
    pub fn homology_dims(&self) -> Vec<usize> {
        let ranks: Vec<usize> = (0..=self.len()).map(|n| self.d(n as i64).rank()).collect();
        (0..self.len()).map(|n| self.dims[n] - ranks[n] - ranks[n + 1]).collect()
    }

    pub fn is_acyclic(&self) -> bool {
        self.homology_dims().iter().all(|&h| h == 0)
    }
}

/// Basis bookkeeping for `X ⊗ Y`: degree `n` is `⊕_{p+q=n} X_p ⊗ Y_q`,
/// ordered by increasing `p`, each block `x`-major.
#[derive(Clone, Debug)]
pub struct TensorLayout {
    left: Vec<usize>,
    right: Vec<usize>,
}

impl TensorLayout {
    pub fn new(x: &ChainComplex, y: &ChainComplex) -> Self {
        TensorLayout { left: x.dims().to_vec(), right: y.dims().to_vec() }
    }

    fn ld(&self, p: usize) -> usize {
        self.left.get(p).copied().unwrap_or(0)
    }

    fn rd(&self, q: usize) -> usize {
        self.right.get(q).copied().unwrap_or(0)
    }

    pub fn dim(&self, n: usize) -> usize {
        (0..=n).map(|p| self.ld(p) * self.rd(n - p)).sum()
    }

    pub fn top(&self) -> usize {
        if self.left.is_empty() || self.right.is_empty() {
            0
        } else {
            self.left.len() + self.right.len() - 1
        }
    }

    /// Index within degree `p + q` of `x_i ⊗ y_j` with `x_i ∈ X_p`, `y_j ∈ Y_q`.
    pub fn index(&self, p: usize, i: usize, q: usize, j: usize) -> usize {
        let n = p + q;
        let before: usize = (0..p).map(|a| self.ld(a) * self.rd(n - a)).sum();
        before + i * self.rd(q) + j
    }

    /// Inverse of [`TensorLayout::index`] in degree `n`.
    pub fn split(&self, n: usize, mut k: usize) -> (usize, usize, usize, usize) {
        for p in 0..=n {
            let block = self.ld(p) * self.rd(n - p);
            if k < block {
                let r = self.rd(n - p);
                return (p, k / r, n - p, k % r);
            }
            k -= block;
        }
        panic!("index outside tensor degree")
    }
}

pub fn tensor(x: &ChainComplex, y: &ChainComplex) -> ChainComplex {
    let layout = TensorLayout::new(x, y);
    let top = layout.top();
    let dims: Vec<usize> = (0..top).map(|n| layout.dim(n)).collect();
    let mut boundaries = Vec::new();
    for n in 1..top {
        let mut m = Matrix::zeros(dims[n - 1], dims[n]);
        for p in 0..=n {
            let q = n - p;
            let (dx, dy) = (x.dim(p as i64), y.dim(q as i64));
            if dx * dy == 0 {
                continue;
            }
            if p >= 1 {
                let bx = x.d(p as i64);
                for i in 0..dx {
                    for j in 0..dy {
                        let col = layout.index(p, i, q, j);
                        for i2 in 0..x.dim(p as i64 - 1) {
                            let v = bx.get(i2, i);
                            if !v.is_zero() {
                                m.add_at(layout.index(p - 1, i2, q, j), col, v);
                            }
                        }
                    }
                }
            }
            if q >= 1 {
                let by = y.d(q as i64);
                let s = sign(p % 2 == 1);
                for i in 0..dx {
                    for j in 0..dy {
                        let col = layout.index(p, i, q, j);
                        for j2 in 0..y.dim(q as i64 - 1) {
                            let v = by.get(j2, j);
                            if !v.is_zero() {
                                m.add_at(layout.index(p, i, q - 1, j2), col, &(&s * v));
                            }
                        }
                    }
                }
            }
        }
        boundaries.push(m);
    }
    ChainComplex::new(dims, boundaries).expect("tensor of complexes")
}

/// A homogeneous linear map `X → Y` of degree `k`, stored per source degree.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ChainMap {
    source: ChainComplex,
    target: ChainComplex,
    degree: i64,
    /// `blocks[n]: X_n → Y_{n+k}`.
    blocks: Vec<Matrix>,
}

impl ChainMap {
    pub fn new(source: ChainComplex, target: ChainComplex, degree: i64, blocks: Vec<Matrix>) -> Result<Self> {
        if blocks.len() != source.len() {
            return Err(Error::Shape(format!("{} blocks for {} source degrees", blocks.len(), source.len())));
        }
        for (n, b) in blocks.iter().enumerate() {
            let want = (target.dim(n as i64 + degree), source.dim(n as i64));
            if b.shape() != want {
                return Err(Error::Shape(format!("block {n} has shape {:?}, expected {want:?}", b.shape())));
            }
        }
        Ok(ChainMap { source, target, degree, blocks })
    }

    pub fn zero(source: &ChainComplex, target: &ChainComplex, degree: i64) -> Self {
        let blocks = (0..source.len())
            .map(|n| Matrix::zeros(target.dim(n as i64 + degree), source.dim(n as i64)))
            .collect();
        ChainMap { source: source.clone(), target: target.clone(), degree, blocks }
    }

    pub fn identity(x: &ChainComplex) -> Self {
        let blocks = x.dims().iter().map(|&d| Matrix::identity(d)).collect();
        ChainMap { source: x.clone(), target: x.clone(), degree: 0, blocks }
    }

    pub fn source(&self) -> &ChainComplex {
        &self.source
    }

    pub fn target(&self) -> &ChainComplex {
        &self.target
    }

    pub fn degree(&self) -> i64 {
        self.degree
    }

    pub fn blocks(&self) -> &[Matrix] {
        &self.blocks
    }

    /// The block `X_n → Y_{n+k}`, zero outside the support.
    pub fn block(&self, n: i64) -> Matrix {
        if n >= 0 && (n as usize) < self.blocks.len() {
            self.blocks[n as usize].clone()
        } else {
            Matrix::zeros(self.target.dim(n + self.degree), self.source.dim(n))
        }
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &ChainMap) -> Result<ChainMap> {
        if other.target != self.source {
            return Err(Error::Shape("composition of non-composable maps".into()));
        }
        let k = other.degree;
        let blocks = (0..other.source.len() as i64).map(|n| &self.block(n + k) * &other.block(n)).collect();
        ChainMap::new(other.source.clone(), self.target.clone(), self.degree + k, blocks)
    }

    pub fn add(&self, other: &ChainMap) -> Result<ChainMap> {
        if self.source != other.source || self.target != other.target || self.degree != other.degree {
            return Err(Error::Shape("sum of maps with different types".into()));
        }
        let blocks = self.blocks.iter().zip(&other.blocks).map(|(a, b)| a + b).collect();
        Ok(ChainMap { blocks, ..self.clone() })
    }

    pub fn scale(&self, s: &Q) -> ChainMap {
        ChainMap { blocks: self.blocks.iter().map(|b| b.scale(s)).collect(), ..self.clone() }
    }

    /// `d ∘ f − (−1)^k f ∘ d`, a map of degree `k − 1`.
    pub fn differential(&self) -> ChainMap {
        let k = self.degree;
        let s = sign(k % 2 != 0);
        let blocks = (0..self.source.len() as i64)
            .map(|n| {
                let a = &self.target.d(n + k) * &self.block(n);
                let b = &self.block(n - 1) * &self.source.d(n);
                &a - &b.scale(&s)
            })
            .collect();
        ChainMap { source: self.source.clone(), target: self.target.clone(), degree: k - 1, blocks }
    }

    pub fn is_chain_map(&self) -> bool {
        self.degree == 0 && self.differential().blocks.iter().all(Matrix::is_zero)
    }

    /// The map on total spaces.
    pub fn total_matrix(&self) -> Matrix {
        let mut m = Matrix::zeros(self.target.total_dim(), self.source.total_dim());
        for (n, b) in self.blocks.iter().enumerate() {
            let t = n as i64 + self.degree;
            if b.rows() > 0 && t >= 0 {
                m.paste(self.target.offset(t as usize), self.source.offset(n), b);
            }
        }
        m
    }

    /// Induced maps on homology in each degree, as `(rank of H(f), dim H(X), dim H(Y))`.
    fn homology_ranks(&self) -> Vec<(usize, usize, usize)> {
        let top = self.source.len().max(self.target.len());
        (0..top as i64)
            .map(|n| {
                // rank of H_n(f) = rank[f(Z_n) + B_n(Y)] − rank B_n(Y)
                let kernel = self.source.d(n).nullspace();
                let zx = Matrix::from_fn(self.source.dim(n), kernel.len(), |i, j| kernel[j][i].clone());
                let fz = &self.block(n) * &zx;
                let by = self.target.d(n + 1);
                let both = Matrix::hstack(&[&fz, &by]);
                let r = both.rank() - by.rank();
                let hx = self.source.dim(n) - self.source.d(n).rank() - self.source.d(n + 1).rank();
                let hy = self.target.dim(n) - self.target.d(n).rank() - by.rank();
                (r, hx, hy)
            })
            .collect()
    }

    pub fn is_quasi_iso(&self) -> bool {
        self.degree == 0 && self.homology_ranks().iter().all(|&(r, hx, hy)| r == hx && r == hy)
    }

    pub fn classify(&self) -> Result<MapClass> {
        if !self.is_chain_map() {
            return Err(Error::Precondition("classification needs a degree-0 chain map".into()));
        }
        let top = self.source.len().max(self.target.len());
        let surjective_in = |n: usize| self.block(n as i64).rank() == self.target.dim(n as i64);
        let injective_in = |n: usize| self.block(n as i64).rank() == self.source.dim(n as i64);
        let fibration = (1..top).all(surjective_in);
        let cofibration = (0..top).all(injective_in);
        let quasi_iso = self.is_quasi_iso();
        let acyclic_fibration = quasi_iso && (0..top).all(surjective_in);
        Ok(MapClass {
            quasi_iso,
            fibration,
            cofibration,
            acyclic_fibration,
            acyclic_cofibration: quasi_iso && cofibration,
        })
    }
}

impl ChainMap {
    /// Block sum `f ⊕ g: X ⊕ X' → Y ⊕ Y'`.
    pub fn direct_sum(&self, other: &ChainMap) -> Result<ChainMap> {
        if self.degree != other.degree {
            return Err(Error::Shape("direct sum of maps of different degrees".into()));
        }
        let source = self.source.direct_sum(&other.source);
        let target = self.target.direct_sum(&other.target);
        let blocks = (0..source.len() as i64)
            .map(|n| Matrix::block_diag(&[&self.block(n), &other.block(n)]))
            .collect();
        ChainMap::new(source, target, self.degree, blocks)
    }

    /// Applies a degree-preserving linear operation blockwise.
    pub fn map_blocks(&self, target: ChainComplex, mut f: impl FnMut(usize, &Matrix) -> Matrix) -> Result<ChainMap> {
        let blocks = self.blocks.iter().enumerate().map(|(n, b)| f(n, b)).collect();
        ChainMap::new(self.source.clone(), target, self.degree, blocks)
    }
}

/// A quotient complex `X / W` by a subcomplex `W` given by spanning vectors.
#[derive(Clone, Debug)]
pub struct QuotientComplex {
    pub complex: ChainComplex,
    /// Per degree, the projection `X_n → (X/W)_n`.
    pub projection: Vec<Matrix>,
    /// Per degree, a linear section `(X/W)_n → X_n`.
    pub section: Vec<Matrix>,
}

impl QuotientComplex {
    /// `π ∘ f ∘ s`, the map induced on the quotient by a degree-0 endomorphism
    /// preserving `W`.
    pub fn induced(&self, f: &ChainMap) -> ChainMap {
        let blocks = (0..self.complex.len()).map(|n| &(&self.projection[n] * &f.block(n as i64)) * &self.section[n]).collect();
        ChainMap::new(self.complex.clone(), self.complex.clone(), 0, blocks).expect("induced map")
    }

    pub fn project(&self, n: usize, v: &[Q]) -> Vec<Q> {
        match self.projection.get(n) {
            Some(p) => p.apply(v),
            None => Vec::new(),
        }
    }
}

/// `relations[n]` holds spanning vectors of `W_n` as rows; `W` must be closed under `d`.
pub fn quotient(x: &ChainComplex, relations: &[Matrix]) -> QuotientComplex {
    let top = x.len();
    let mut projection = Vec::with_capacity(top);
    let mut section = Vec::with_capacity(top);
    for n in 0..top {
        let rel = relations.get(n).cloned().unwrap_or_else(|| Matrix::zeros(0, x.dim(n as i64)));
        let q = rel.quotient_by_rows();
        projection.push(q.projection);
        section.push(q.section);
    }
    let dims: Vec<usize> = projection.iter().map(Matrix::rows).collect();
    let boundaries = (1..top).map(|n| &(&projection[n - 1] * &x.d(n as i64)) * &section[n]).collect();
    let complex = ChainComplex::new(dims.clone(), boundaries).expect("quotient by a subcomplex");
    // trailing zero degrees were trimmed from the complex
    projection.truncate(complex.len());
    section.truncate(complex.len());
    QuotientComplex { complex, projection, section }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub struct MapClass {
    pub quasi_iso: bool,
    pub fibration: bool,
    pub cofibration: bool,
    pub acyclic_fibration: bool,
    pub acyclic_cofibration: bool,
}

/// `f ⊗ g` with the Koszul sign `(−1)^{|g||x|}`.
pub fn tensor_maps(f: &ChainMap, g: &ChainMap) -> ChainMap {
    let src = tensor(&f.source, &g.source);
    let tgt = tensor(&f.target, &g.target);
    let ls = TensorLayout::new(&f.source, &g.source);
    let lt = TensorLayout::new(&f.target, &g.target);
    let k = f.degree + g.degree;
    let mut blocks: Vec<Matrix> = (0..src.len() as i64).map(|n| Matrix::zeros(tgt.dim(n + k), src.dim(n))).collect();
    for n in 0..src.len() {
        for col in 0..src.dim(n as i64) {
            let (p, i, q, j) = ls.split(n, col);
            let s = sign(g.degree.rem_euclid(2) == 1 && p % 2 == 1);
            let fp = f.block(p as i64);
            let gq = g.block(q as i64);
            let tp = p as i64 + f.degree;
            let tq = q as i64 + g.degree;
            if tp < 0 || tq < 0 {
                continue;
            }
            for a in 0..fp.rows() {
                let fa = fp.get(a, i);
                if fa.is_zero() {
                    continue;
                }
                for b in 0..gq.rows() {
                    let gb = gq.get(b, j);
                    if gb.is_zero() {
                        continue;
                    }
                    let row = lt.index(tp as usize, a, tq as usize, b);
                    blocks[n].add_at(row, col, &(&s * &(fa * gb)));
                }
            }
        }
    }
    ChainMap { source: src, target: tgt, degree: k, blocks }
}

/// The symmetry `X ⊗ Y → Y ⊗ X`, `x⊗y ↦ (−1)^{pq} y⊗x`.
pub fn symmetry(x: &ChainComplex, y: &ChainComplex) -> ChainMap {
    let src = tensor(x, y);
    let tgt = tensor(y, x);
    let ls = TensorLayout::new(x, y);
    let lt = TensorLayout::new(y, x);
    let blocks = (0..src.len())
        .map(|n| {
            let mut m = Matrix::zeros(tgt.dim(n as i64), src.dim(n as i64));
            for col in 0..src.dim(n as i64) {
                let (p, i, q, j) = ls.split(n, col);
                m.set(lt.index(q, j, p, i), col, sign(p * q % 2 == 1));
            }
            m
        })
        .collect();
    ChainMap { source: src, target: tgt, degree: 0, blocks }
}

/// The factorization `X → Path(X) → X × X`.
#[derive(Clone, Debug)]
pub struct PathObject {
    pub path: ChainComplex,
    pub s: ChainMap,
    pub d0: ChainMap,
    pub d1: ChainMap,
}

/// `P_n = X_n ⊕ X_n ⊕ X_{n+1}` with `∂(x,y,z) = (∂x, ∂y, x − y − ∂z)`, cut
/// down in degree 0 to the cycles `x − y = ∂z` so that the result stays
/// non-negatively graded. Degree 0 is coordinatized by `(y, z)`, with
/// `x = y + ∂z`.
pub fn path_object(x: &ChainComplex) -> PathObject {
    let top = x.len();
    let dims: Vec<usize> = (0..top as i64)
        .map(|n| if n == 0 { x.dim(0) + x.dim(1) } else { 2 * x.dim(n) + x.dim(n + 1) })
        .collect();
    let boundaries = (1..top as i64)
        .map(|n| {
            let (a, b) = (x.dim(n - 1), x.dim(n));
            let mut m = Matrix::zeros(dims[n as usize - 1], dims[n as usize]);
            let dn = x.d(n);
            // the last coordinate x − y − ∂z sits after the first two (or the one, in degree 0)
            let last = if n == 1 {
                m.paste(0, b, &dn);
                a
            } else {
                m.paste(0, 0, &dn);
                m.paste(a, b, &dn);
                2 * a
            };
            m.paste(last, 0, &Matrix::identity(b));
            m.paste(last, b, &-&Matrix::identity(b));
            m.paste(last, 2 * b, &-&x.d(n + 1));
            m
        })
        .collect();
    let path = ChainComplex::new(dims, boundaries).expect("path object is a complex");
    let s_blocks = (0..top as i64)
        .map(|n| {
            let b = x.dim(n);
            let mut m = Matrix::zeros(path.dim(n), b);
            m.paste(0, 0, &Matrix::identity(b));
            if n > 0 {
                m.paste(b, 0, &Matrix::identity(b));
            }
            m
        })
        .collect();
    let proj = |which: usize| {
        (0..top as i64)
            .map(|n| {
                let b = x.dim(n);
                let mut m = Matrix::zeros(b, path.dim(n));
                if n > 0 {
                    m.paste(0, which * b, &Matrix::identity(b));
                } else {
                    m.paste(0, 0, &Matrix::identity(b));
                    if which == 0 {
                        m.paste(0, b, &x.d(1));
                    }
                }
                m
            })
            .collect()
    };
    let s = ChainMap::new(x.clone(), path.clone(), 0, s_blocks).expect("s");
    let d0 = ChainMap::new(path.clone(), x.clone(), 0, proj(0)).expect("d0");
    let d1 = ChainMap::new(path.clone(), x.clone(), 0, proj(1)).expect("d1");
    PathObject { path, s, d0, d1 }
}

/// A linear system whose unknowns are several matrices `Φ_b` and whose
/// equations have the form `Σ A·Φ_b·B = C`.
#[derive(Clone, Debug)]
pub struct LiftSystem {
    shapes: Vec<(usize, usize)>,
    offsets: Vec<usize>,
    rows: Vec<Vec<(usize, Q)>>,
    rhs: Vec<Q>,
    labels: Vec<String>,
}

/// Why a lift does not exist: the equation whose reduced form is `0 = residual`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Unsolvable {
    pub label: String,
    pub residual: Q,
}

impl LiftSystem {
    pub fn new(shapes: Vec<(usize, usize)>) -> Self {
        let mut offsets = Vec::with_capacity(shapes.len());
        let mut acc = 0;
        for &(r, c) in &shapes {
            offsets.push(acc);
            acc += r * c;
        }
        LiftSystem { shapes, offsets, rows: Vec::new(), rhs: Vec::new(), labels: Vec::new() }
    }

    pub fn unknowns(&self) -> usize {
        self.shapes.iter().map(|(r, c)| r * c).sum()
    }

    pub fn equations(&self) -> usize {
        self.rows.len()
    }

    /// Adds `Σ_t A_t · Φ_{b_t} · B_t = C` entrywise.
    pub fn add(&mut self, label: &str, terms: &[(usize, &Matrix, &Matrix)], rhs: &Matrix) -> Result<()> {
        let (rr, rc) = rhs.shape();
        for &(b, a, bm) in terms {
            let (pr, pc) = self.shapes[b];
            if a.shape() != (rr, pr) || bm.shape() != (pc, rc) {
                return Err(Error::Shape(format!(
                    "{label}: term shapes {:?}·{:?}·{:?} do not give {:?}",
                    a.shape(),
                    (pr, pc),
                    bm.shape(),
                    (rr, rc)
                )));
            }
        }
        for i in 0..rr {
            for j in 0..rc {
                let mut row: Vec<(usize, Q)> = Vec::new();
                for &(b, a, bm) in terms {
                    let (pr, pc) = self.shapes[b];
                    for k in 0..pr {
                        let aik = a.get(i, k);
                        if aik.is_zero() {
                            continue;
                        }
                        for l in 0..pc {
                            let blj = bm.get(l, j);
                            if !blj.is_zero() {
                                row.push((self.offsets[b] + k * pc + l, aik * blj));
                            }
                        }
                    }
                }
                self.rows.push(row);
                self.rhs.push(rhs.get(i, j).clone());
                self.labels.push(format!("{label}[{i},{j}]"));
            }
        }
        Ok(())
    }

    fn coefficient_matrix(&self) -> Matrix {
        let mut a = Matrix::zeros(self.rows.len(), self.unknowns());
        for (r, row) in self.rows.iter().enumerate() {
            for (c, v) in row {
                a.add_at(r, *c, v);
            }
        }
        a
    }

    fn unflatten(&self, x: &[Q]) -> Vec<Matrix> {
        self.shapes
            .iter()
            .zip(&self.offsets)
            .map(|(&(r, c), &off)| Matrix::from_fn(r, c, |i, j| x[off + i * c + j].clone()))
            .collect()
    }

    /// A basis of the solutions of the homogeneous system (right-hand sides ignored).
    pub fn homogeneous_basis(&self) -> Vec<Vec<Matrix>> {
        self.coefficient_matrix().nullspace().iter().map(|v| self.unflatten(v)).collect()
    }

    /// Exact solution with free variables set to zero.
    pub fn solve(&self) -> std::result::Result<Vec<Matrix>, Unsolvable> {
        let n = self.unknowns();
        // rows with no unknowns are checked directly
        for (k, row) in self.rows.iter().enumerate() {
            if row.iter().all(|(_, v)| v.is_zero()) && !self.rhs[k].is_zero() {
                return Err(Unsolvable { label: self.labels[k].clone(), residual: self.rhs[k].clone() });
            }
        }
        let live: Vec<usize> = (0..self.rows.len()).filter(|&k| self.rows[k].iter().any(|(_, v)| !v.is_zero())).collect();
        let mut a = Matrix::zeros(live.len(), n);
        let mut b = Matrix::zeros(live.len(), 1);
        for (r, &k) in live.iter().enumerate() {
            for (c, v) in &self.rows[k] {
                a.add_at(r, *c, v);
            }
            b.set(r, 0, self.rhs[k].clone());
        }
        let x = a.solve(&b).map_err(|Inconsistent { equation, residual }| Unsolvable {
            label: self.labels[live[equation]].clone(),
            residual,
        })?;
        Ok(self.unflatten(&x.col_vec(0)))
    }
}

/// Finds `h: X → Z` of degree 0 with `p ∘ h = g`, optionally also a chain map.
pub fn lift_through(p: &ChainMap, g: &ChainMap, chain_map: bool) -> Result<ChainMap> {
    if p.target != g.target || p.degree != 0 || g.degree != 0 {
        return Err(Error::Shape("lift needs p: Z → Y and g: X → Y of degree 0".into()));
    }
    let x = g.source.clone();
    let z = p.source.clone();
    let top = x.len();
    let shapes = (0..top as i64).map(|n| (z.dim(n), x.dim(n))).collect();
    let mut sys = LiftSystem::new(shapes);
    for n in 0..top {
        let ni = n as i64;
        sys.add(&format!("p∘h in degree {n}"), &[(n, &p.block(ni), &Matrix::identity(x.dim(ni)))], &g.block(ni))?;
        if chain_map && n >= 1 {
            let dz = z.d(ni);
            let dx = x.d(ni);
            let minus = -&Matrix::identity(z.dim(ni - 1));
            sys.add(
                &format!("chain condition in degree {n}"),
                &[(n, &dz, &Matrix::identity(x.dim(ni))), (n - 1, &minus, &dx)],
                &Matrix::zeros(z.dim(ni - 1), x.dim(ni)),
            )?;
        }
    }
    let blocks = sys.solve().map_err(|u| Error::Unsolvable(format!("{} (residual {})", u.label, u.residual)))?;
    ChainMap::new(x, z, 0, blocks)
}

/// `(1/|G|) Σ_g ρ_Y(g) · f · ρ_X(g)⁻¹` for a finite group given by its full
/// list of elements acting on source and target.
pub fn equivariant_average(f: &Matrix, source_action: &[Matrix], target_action: &[Matrix]) -> Result<Matrix> {
    if source_action.len() != target_action.len() || source_action.is_empty() {
        return Err(Error::Shape("group element lists differ in length".into()));
    }
    let mut acc = Matrix::zeros(f.rows(), f.cols());
    for (gx, gy) in source_action.iter().zip(target_action) {
        let inv = gx.inverse().ok_or_else(|| Error::InvalidRep("non-invertible action matrix".into()))?;
        acc = &acc + &(&(gy * f) * &inv);
    }
    let n = Q::from_integer((source_action.len() as i64).into());
    Ok(acc.scale(&(Q::one() / n)))
}
