//! Vertical and horizontal composition data on bimodules, and their
//! extension to `⊠_h` and `⊠_v` respectively.
//!
//! Compositions are stored on skeletal coordinates at orbit representatives
//! and are restricted to carriers concentrated in degree 0.

use std::collections::BTreeMap;

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::profile::{OrbitKey, Permutation, Profile};
use crate::rational::Q;

use super::products::{box_h, box_v, split_blocks, BoxHLayout, BoxVLayout};
use super::{ColoredBimodule, Component};

fn require_degree_zero(b: &ColoredBimodule) -> Result<()> {
    if b.components().any(|c| c.carrier().len() > 1) {
        return Err(Error::Precondition("composition data needs carriers concentrated in degree 0".into()));
    }
    Ok(())
}

fn outer(x: &[Q], y: &[Q]) -> Vec<Q> {
    let mut v = Vec::with_capacity(x.len() * y.len());
    for a in x {
        for b in y {
            v.push(a * b);
        }
    }
    v
}

fn unit(n: usize, i: usize) -> Vec<Q> {
    let mut v = vec![Q::zero(); n];
    v[i] = num_traits::One::one();
    v
}

/// A bimodule with a vertical composition `P(d;b) ⊗ P(b;c) → P(d;c)`.
#[derive(Clone, Debug)]
pub struct VProp {
    pub bimodule: ColoredBimodule,
    /// `(d, b, c) ↦` matrix `dim(d,c) × dim(d,b)·dim(b,c)`; absent means zero.
    pub compose: BTreeMap<(OrbitKey, OrbitKey, OrbitKey), Matrix>,
}

impl VProp {
    pub fn new(bimodule: ColoredBimodule, compose: BTreeMap<(OrbitKey, OrbitKey, OrbitKey), Matrix>) -> Result<Self> {
        require_degree_zero(&bimodule)?;
        let v = VProp { bimodule, compose };
        for ((d, b, c), m) in &v.compose {
            let want = (v.bimodule.dim_at(d, c), v.bimodule.dim_at(d, b) * v.bimodule.dim_at(b, c));
            if m.shape() != want {
                return Err(Error::Shape(format!("vertical composition {d:?},{b:?},{c:?}: {:?} vs {want:?}", m.shape())));
            }
        }
        Ok(v)
    }

    pub fn compose_vectors(&self, d: &OrbitKey, b: &OrbitKey, c: &OrbitKey, x: &[Q], y: &[Q]) -> Vec<Q> {
        match self.compose.get(&(d.clone(), b.clone(), c.clone())) {
            Some(m) => m.apply(&outer(x, y)),
            None => vec![Q::zero(); self.bimodule.dim_at(d, c)],
        }
    }

    fn keys(&self) -> Vec<OrbitKey> {
        let mut ks: Vec<OrbitKey> = self.bimodule.support().into_iter().flat_map(|(a, b)| [a, b]).collect();
        ks.sort();
        ks.dedup();
        ks
    }

    /// `(x∘y)∘z = x∘(y∘z)` on every composable triple of basis vectors.
    pub fn check_associative(&self) -> Result<()> {
        let keys = self.keys();
        let bm = &self.bimodule;
        for d in &keys {
            for b in &keys {
                let n1 = bm.dim_at(d, b);
                if n1 == 0 {
                    continue;
                }
                for c in &keys {
                    let n2 = bm.dim_at(b, c);
                    if n2 == 0 {
                        continue;
                    }
                    for e in &keys {
                        let n3 = bm.dim_at(c, e);
                        if n3 == 0 {
                            continue;
                        }
                        for i in 0..n1 {
                            for j in 0..n2 {
                                let xy = self.compose_vectors(d, b, c, &unit(n1, i), &unit(n2, j));
                                for k in 0..n3 {
                                    let z = unit(n3, k);
                                    let lhs = self.compose_vectors(d, c, e, &xy, &z);
                                    let yz = self.compose_vectors(b, c, e, &unit(n2, j), &z);
                                    let rhs = self.compose_vectors(d, b, e, &unit(n1, i), &yz);
                                    if lhs != rhs {
                                        return Err(Error::Precondition(format!(
                                            "vertical composition is not associative at {d:?},{b:?},{c:?},{e:?}"
                                        )));
                                    }
                                }
                            }
                        }
                    }
                }
            }
        }
        Ok(())
    }

    /// Compatibility with both outer actions and balance over the middle stabilizer.
    pub fn check_equivariant(&self) -> Result<()> {
        let bm = &self.bimodule;
        for (d, b, c) in self.compose.keys() {
            let (Some(x), Some(y)) = (bm.get(d, b), bm.get(b, c)) else { continue };
            let Some(z) = bm.get(d, c) else { continue };
            for i in 0..x.dim() {
                for j in 0..y.dim() {
                    let (xi, yj) = (unit(x.dim(), i), unit(y.dim(), j));
                    let base = self.compose_vectors(d, b, c, &xi, &yj);
                    for g in b.stabilizer_generators() {
                        let l = self.compose_vectors(d, b, c, &x.right_matrix(&g).apply(&xi), &yj);
                        let r = self.compose_vectors(d, b, c, &xi, &y.left_matrix(&g).apply(&yj));
                        if l != r {
                            return Err(Error::Precondition(format!("composition not balanced over {b:?}")));
                        }
                    }
                    for g in d.stabilizer_generators() {
                        let l = self.compose_vectors(d, b, c, &x.left_matrix(&g).apply(&xi), &yj);
                        if l != z.left_matrix(&g).apply(&base) {
                            return Err(Error::Precondition(format!("composition not left equivariant at {d:?}")));
                        }
                    }
                    for g in c.stabilizer_generators() {
                        let r = self.compose_vectors(d, b, c, &xi, &y.right_matrix(&g).apply(&yj));
                        if r != z.right_matrix(&g).apply(&base) {
                            return Err(Error::Precondition(format!("composition not right equivariant at {c:?}")));
                        }
                    }
                }
            }
        }
        Ok(())
    }
}

/// The vertical composition on `P ⊠_h Q`: summands compose through `(∘_P, ∘_Q)`
/// when their middle splittings agree and the middle permutation respects the
/// splitting; every other pairing is zero.
pub fn induce_vertical_on_boxh(p: &VProp, q: &VProp) -> Result<(VProp, BoxHLayout)> {
    let layout = box_h(&p.bimodule, &q.bimodule)?;
    let mut compose: BTreeMap<(OrbitKey, OrbitKey, OrbitKey), Matrix> = BTreeMap::new();
    let bm = &layout.bimodule;
    for ((d, b), first) in &layout.summands {
        for ((b2, c), second) in &layout.summands {
            if b != b2 {
                continue;
            }
            let Some(target) = layout.summands.get(&(d.clone(), c.clone())) else { continue };
            let (n1, n2) = (bm.dim_at(d, b), bm.dim_at(b, c));
            let mut m = Matrix::zeros(bm.dim_at(d, c), n1 * n2);
            for s1 in first {
                for s2 in second {
                    let (d1, b1) = &s1.data.p_keys;
                    let (d2, b2k) = &s1.data.q_keys;
                    let (b1p, c1) = &s2.data.p_keys;
                    let (b2p, c2) = &s2.data.q_keys;
                    if b1 != b1p || b2k != b2p {
                        continue;
                    }
                    let Some(s3) = target.iter().find(|s| s.data.p_keys == (d1.clone(), c1.clone()) && s.data.q_keys == (d2.clone(), c2.clone())) else {
                        continue;
                    };
                    let (Some(px), Some(qy)) = (p.bimodule.get(d1, b1), q.bimodule.get(d2, b2k)) else { continue };
                    let (Some(px2), Some(qy2)) = (p.bimodule.get(b1, c1), q.bimodule.get(b2k, c2)) else { continue };
                    let (bs1, bs2, bs3) = (&s1.data.basis, &s2.data.basis, &s3.data.basis);
                    let sizes = [b1.len(), b2k.len()];
                    for (ai, _) in bs1.out_cosets.reps.iter().enumerate() {
                        for (bi, bb) in bs1.in_cosets.reps.iter().enumerate() {
                            for (a2i, a2) in bs2.out_cosets.reps.iter().enumerate() {
                                let pi = bs1.t_in.compose(bb).compose(a2).compose(&bs2.t_out.inverse());
                                if !block_diagonal(&pi, &sizes) {
                                    continue;
                                }
                                let parts = split_blocks(&pi, &sizes);
                                let rp = px.right_matrix(&parts[0]);
                                let rq = qy.right_matrix(&parts[1]);
                                for (b3i, _) in bs2.in_cosets.reps.iter().enumerate() {
                                    for xi in 0..px.dim() {
                                        let xv = rp.apply(&unit(px.dim(), xi));
                                        for yi in 0..qy.dim() {
                                            let yv = rq.apply(&unit(qy.dim(), yi));
                                            let col1 = s1.offsets[0] + bs1.index(0, ai, bi, xi * qy.dim() + yi);
                                            for xj in 0..px2.dim() {
                                                let xz = p.compose_vectors(d1, b1, c1, &xv, &unit(px2.dim(), xj));
                                                for yj in 0..qy2.dim() {
                                                    let yz = q.compose_vectors(d2, b2k, c2, &yv, &unit(qy2.dim(), yj));
                                                    let col2 = s2.offsets[0] + bs2.index(0, a2i, b3i, xj * qy2.dim() + yj);
                                                    let col = col1 * n2 + col2;
                                                    let z = outer(&xz, &yz);
                                                    for (t, val) in z.iter().enumerate() {
                                                        if !val.is_zero() {
                                                            let row = s3.offsets[0] + bs3.index(0, ai, b3i, t);
                                                            m.add_at(row, col, val);
                                                        }
                                                    }
                                                }
                                            }
                                        }
                                    }
                                }
                            }
                        }
                    }
                }
            }
            if !m.is_zero() {
                compose.insert((d.clone(), b.clone(), c.clone()), m);
            }
        }
    }
    let v = VProp::new(layout.bimodule.clone(), compose)?;
    Ok((v, layout))
}

fn block_diagonal(p: &Permutation, sizes: &[usize]) -> bool {
    let mut start = 0;
    for &s in sizes {
        if (start..start + s).any(|i| p.apply(i) < start || p.apply(i) >= start + s) {
            return false;
        }
        start += s;
    }
    true
}

/// A bimodule with a horizontal composition
/// `P(d₁;c₁) ⊗ P(d₂;c₂) → P(d₁d₂; c₁c₂)`.
#[derive(Clone, Debug)]
pub struct HProp {
    pub bimodule: ColoredBimodule,
    /// `((d₁,c₁),(d₂,c₂)) ↦` matrix from `dim₁·dim₂` into the component of the
    /// concatenated keys, in coordinates relative to the canonical transports
    /// of the concatenated representatives.
    pub hcomp: BTreeMap<((OrbitKey, OrbitKey), (OrbitKey, OrbitKey)), Matrix>,
}

/// A concrete element: coordinates relative to the canonical transports of `(out; input)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Element {
    pub out: Profile,
    pub input: Profile,
    pub coords: Vec<Q>,
}

impl HProp {
    pub fn new(bimodule: ColoredBimodule, hcomp: BTreeMap<((OrbitKey, OrbitKey), (OrbitKey, OrbitKey)), Matrix>) -> Result<Self> {
        require_degree_zero(&bimodule)?;
        Ok(HProp { bimodule, hcomp })
    }

    fn target_keys(k1: &(OrbitKey, OrbitKey), k2: &(OrbitKey, OrbitKey)) -> (OrbitKey, OrbitKey) {
        let d = k1.0.rep().concat(k2.0.rep()).expect("same palette");
        let c = k1.1.rep().concat(k2.1.rep()).expect("same palette");
        (d.orbit_key(), c.orbit_key())
    }

    pub fn hcomp_vectors(&self, k1: &(OrbitKey, OrbitKey), k2: &(OrbitKey, OrbitKey), x: &[Q], y: &[Q]) -> Vec<Q> {
        match self.hcomp.get(&(k1.clone(), k2.clone())) {
            Some(m) => m.apply(&outer(x, y)),
            None => {
                let (d, c) = Self::target_keys(k1, k2);
                vec![Q::zero(); self.bimodule.dim_at(&d, &c)]
            }
        }
    }

    /// Horizontal composition of concrete elements, using equivariance to
    /// move both factors to their representatives first.
    pub fn horizontal(&self, x: &Element, y: &Element) -> Result<Element> {
        let (dk1, t1) = x.out.canonicalize();
        let (ck1, s1) = x.input.canonicalize();
        let (dk2, t2) = y.out.canonicalize();
        let (ck2, s2) = y.input.canonicalize();
        let k1 = (dk1, ck1);
        let k2 = (dk2, ck2);
        let v = self.hcomp_vectors(&k1, &k2, &x.coords, &y.coords);
        let e_out = k1.0.rep().concat(k2.0.rep())?;
        let e_in = k1.1.rep().concat(k2.1.rep())?;
        let (dk, te) = e_out.canonicalize();
        let (ck, se) = e_in.canonicalize();
        let out = x.out.concat(&y.out)?;
        let input = x.input.concat(&y.input)?;
        let Some(comp) = self.bimodule.get(&dk, &ck) else {
            return Ok(Element { out, input, coords: Vec::new() });
        };
        let g = t1.direct_sum(&t2).compose(&te);
        let k = se.inverse().compose(&s1.inverse().direct_sum(&s2.inverse()));
        let coords = comp.relocate(&g, &k).total_matrix().apply(&v);
        Ok(Element { out, input, coords })
    }

    /// Associativity on every triple of basis vectors drawn from the given components.
    pub fn check_associative_on(&self, triples: &[[(OrbitKey, OrbitKey); 3]]) -> Result<()> {
        for keys in triples {
            let comps: Vec<&Component> = match keys.iter().map(|(a, b)| self.bimodule.get(a, b)).collect::<Option<Vec<_>>>() {
                Some(c) => c,
                None => continue,
            };
            let basis = |i: usize, j: usize| Element {
                out: keys[i].0.rep().clone(),
                input: keys[i].1.rep().clone(),
                coords: unit(comps[i].dim(), j),
            };
            for a in 0..comps[0].dim() {
                for b in 0..comps[1].dim() {
                    for c in 0..comps[2].dim() {
                        let (x, y, z) = (basis(0, a), basis(1, b), basis(2, c));
                        let lhs = self.horizontal(&self.horizontal(&x, &y)?, &z)?;
                        let rhs = self.horizontal(&x, &self.horizontal(&y, &z)?)?;
                        if lhs != rhs {
                            return Err(Error::Precondition("horizontal composition is not associative".into()));
                        }
                    }
                }
            }
        }
        Ok(())
    }
}

/// `φ((x₁⊗y₁),(x₂⊗y₂)) = [ĥ_P(x₁,x₂) ⊗ ĥ_Q(y₁,y₂)]` on uncollapsed
/// representatives of `P ⊠_v Q`, returned in the coordinates of the target
/// component (relative to the canonical transports of the concatenations).
pub fn horizontal_on_representatives(
    p: &HProp,
    q: &HProp,
    layout: &BoxVLayout,
    first: ((OrbitKey, OrbitKey), &OrbitKey),
    second: ((OrbitKey, OrbitKey), &OrbitKey),
    v1: &[Q],
    v2: &[Q],
) -> Vec<Q> {
    let ((d1, c1), b1) = first;
    let ((d2, c2), b2) = second;
    let d = d1.rep().concat(d2.rep()).expect("palette").orbit_key();
    let c = c1.rep().concat(c2.rep()).expect("palette").orbit_key();
    let b = b1.rep().concat(b2.rep()).expect("palette").orbit_key();
    let dim_out = layout.bimodule.dim_at(&d, &c);
    let mut out = vec![Q::zero(); dim_out];
    let Some(summands) = layout.summands.get(&(d.clone(), c.clone())) else { return out };
    let Some(target) = summands.iter().find(|s| s.data.0 == b) else { return out };
    let (px1, qy1) = (p.bimodule.dim_at(&d1, b1), q.bimodule.dim_at(b1, &c1));
    let (px2, qy2) = (p.bimodule.dim_at(&d2, b2), q.bimodule.dim_at(b2, &c2));
    let qdim = q.bimodule.dim_at(&b, &c);
    let mut uncollapsed = vec![Q::zero(); p.bimodule.dim_at(&d, &b) * qdim];
    for (i1, a1) in v1.iter().enumerate() {
        if a1.is_zero() {
            continue;
        }
        let (x1, y1) = (i1 / qy1, i1 % qy1);
        for (i2, a2) in v2.iter().enumerate() {
            if a2.is_zero() {
                continue;
            }
            let (x2, y2) = (i2 / qy2, i2 % qy2);
            let hp = p.hcomp_vectors(&(d1.clone(), b1.clone()), &(d2.clone(), b2.clone()), &unit(px1, x1), &unit(px2, x2));
            let hq = q.hcomp_vectors(&(b1.clone(), c1.clone()), &(b2.clone(), c2.clone()), &unit(qy1, y1), &unit(qy2, y2));
            let coeff = a1 * a2;
            for (k, val) in outer(&hp, &hq).into_iter().enumerate() {
                if !val.is_zero() {
                    uncollapsed[k] += &coeff * val;
                }
            }
        }
    }
    let projected = target.data.1.quotient.project(0, &uncollapsed);
    for (k, val) in projected.into_iter().enumerate() {
        out[target.offsets[0] + k] = val;
    }
    out
}

/// The horizontal composition on `P ⊠_v Q` induced by those of `P` and `Q`.
pub fn induce_horizontal_on_boxv(p: &HProp, q: &HProp) -> Result<(HProp, BoxVLayout)> {
    let layout = box_v(&p.bimodule, &q.bimodule)?;
    let mut hcomp = BTreeMap::new();
    for (k1, first) in &layout.summands {
        for (k2, second) in &layout.summands {
            let (d, c) = HProp::target_keys(k1, k2);
            let n_out = layout.bimodule.dim_at(&d, &c);
            let (n1, n2) = (layout.bimodule.dim_at(&k1.0, &k1.1), layout.bimodule.dim_at(&k2.0, &k2.1));
            let mut m = Matrix::zeros(n_out, n1 * n2);
            if n_out > 0 {
                for s1 in first {
                    for s2 in second {
                        let sec1 = &s1.data.1.quotient.section[0];
                        let sec2 = &s2.data.1.quotient.section[0];
                        for i in 0..sec1.cols() {
                            let v1 = sec1.col_vec(i);
                            for j in 0..sec2.cols() {
                                let v2 = sec2.col_vec(j);
                                let img = horizontal_on_representatives(p, q, &layout, (k1.clone(), &s1.data.0), (k2.clone(), &s2.data.0), &v1, &v2);
                                let col = (s1.offsets[0] + i) * n2 + s2.offsets[0] + j;
                                for (r, val) in img.iter().enumerate() {
                                    if !val.is_zero() {
                                        m.set(r, col, val.clone());
                                    }
                                }
                            }
                        }
                    }
                }
            }
            if !m.is_zero() {
                hcomp.insert((k1.clone(), k2.clone()), m);
            }
        }
    }
    Ok((HProp::new(layout.bimodule.clone(), hcomp)?, layout))
}
