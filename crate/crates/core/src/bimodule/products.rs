//! The products `⊗_Σ`, `⊠_v`, `⊡` and `⊠_h`.

use std::collections::BTreeMap;

use crate::chain::{quotient, tensor, tensor_maps, ChainMap, QuotientComplex};
use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::profile::{OrbitKey, Permutation, Profile};
use crate::ChainComplex;

use super::induced::{induce, InducedBasis};
use super::{ColoredBimodule, Component};

/// `X ⊗_{Stab(b)} Y` together with the quotient data that produced it.
#[derive(Clone, Debug)]
pub struct TensorOverSigma {
    pub component: Component,
    /// The uncollapsed tensor `X ⊗ Y`.
    pub tensor: ChainComplex,
    pub quotient: QuotientComplex,
}

/// Coinvariants of `X ⊗ Y` under `x·g ⊗ y ∼ x ⊗ g·y` for `g` in the middle stabilizer.
pub fn tensor_over_sigma(x: &Component, y: &Component) -> Result<TensorOverSigma> {
    if x.in_key() != y.out_key() {
        return Err(Error::ProfileMismatch { left: x.in_key().display(), right: y.out_key().display() });
    }
    let t = tensor(x.carrier(), y.carrier());
    let id_x = ChainMap::identity(x.carrier());
    let id_y = ChainMap::identity(y.carrier());
    let mut relations: Vec<Vec<Matrix>> = vec![Vec::new(); t.len()];
    for (rx, ly) in x.right_generators().iter().zip(y.left_generators()) {
        let a = tensor_maps(rx, &id_y);
        let b = tensor_maps(&id_x, ly);
        for (n, rel) in relations.iter_mut().enumerate() {
            rel.push((&a.block(n as i64) - &b.block(n as i64)).transpose());
        }
    }
    let relations: Vec<Matrix> = relations
        .iter()
        .enumerate()
        .map(|(n, r)| if r.is_empty() { Matrix::zeros(0, t.dim(n as i64)) } else { Matrix::vstack(&r.iter().collect::<Vec<_>>()) })
        .collect();
    let q = quotient(&t, &relations);
    let left = x.left_generators().iter().map(|l| q.induced(&tensor_maps(l, &id_y))).collect();
    let right = y.right_generators().iter().map(|r| q.induced(&tensor_maps(&id_x, r))).collect();
    let component = Component::new_unchecked(x.out_key().clone(), y.in_key().clone(), q.complex.clone(), left, right);
    Ok(TensorOverSigma { component, tensor: t, quotient: q })
}

/// Where one summand sits inside a direct-sum component.
#[derive(Clone, Debug)]
pub struct Summand<T> {
    pub data: T,
    /// Per degree, the first basis index of this summand.
    pub offsets: Vec<usize>,
}

pub type SummandMap<T> = BTreeMap<(OrbitKey, OrbitKey), Vec<Summand<T>>>;

fn assemble<T>(template: &ColoredBimodule, parts: Vec<(Component, T)>) -> Result<(ColoredBimodule, SummandMap<T>)> {
    let mut out = ColoredBimodule::new(template.palette());
    let mut layout: SummandMap<T> = BTreeMap::new();
    for (component, data) in parts {
        if component.is_zero() {
            continue;
        }
        let keys = component.keys();
        let offsets = match out.get(&keys.0, &keys.1) {
            Some(existing) => (0..component.carrier().len()).map(|n| existing.carrier().dim(n as i64)).collect(),
            None => vec![0; component.carrier().len()],
        };
        out.insert(component)?;
        layout.entry(keys).or_default().push(Summand { data, offsets });
    }
    Ok((out, layout))
}

/// `P ⊠_v Q` with the summand structure: each summand is tagged by its middle key.
#[derive(Clone, Debug)]
pub struct BoxVLayout {
    pub bimodule: ColoredBimodule,
    pub summands: SummandMap<(OrbitKey, TensorOverSigma)>,
}

/// `(P ⊠_v Q)([d];[c]) = ⊕_{[b]} P([d];[b]) ⊗_{Σ_b} Q([b];[c])`.
pub fn box_v(p: &ColoredBimodule, q: &ColoredBimodule) -> Result<BoxVLayout> {
    if p.palette() != q.palette() {
        return Err(Error::PaletteMismatch);
    }
    let mut parts = Vec::new();
    for x in p.components() {
        for y in q.components() {
            if x.in_key() == y.out_key() {
                let t = tensor_over_sigma(x, y)?;
                parts.push((t.component.clone(), (x.in_key().clone(), t)));
            }
        }
    }
    let (bimodule, summands) = assemble(p, parts)?;
    Ok(BoxVLayout { bimodule, summands })
}

/// Splits a block-diagonal permutation of `sizes` into its blocks.
pub(crate) fn split_blocks(g: &Permutation, sizes: &[usize]) -> Vec<Permutation> {
    let mut out = Vec::with_capacity(sizes.len());
    let mut start = 0;
    for &s in sizes {
        let images = (start..start + s).map(|i| g.apply(i) - start).collect();
        out.push(Permutation::new(images).expect("block-diagonal permutation"));
        start += s;
    }
    out
}

/// Every element of `∏ G_i` as a block sum.
pub(crate) fn product_group(groups: &[Vec<Permutation>]) -> Vec<Permutation> {
    let mut acc: Vec<Vec<Permutation>> = vec![Vec::new()];
    for g in groups {
        let mut next = Vec::with_capacity(acc.len() * g.len());
        for prefix in &acc {
            for e in g {
                let mut v = prefix.clone();
                v.push(e.clone());
                next.push(v);
            }
        }
        acc = next;
    }
    acc.iter().map(|parts| Permutation::direct_sum_all(parts)).collect()
}

/// Left-nested tensor of complexes; the empty tensor is the unit.
pub(crate) fn tensor_all(parts: &[&ChainComplex]) -> ChainComplex {
    parts.iter().fold(ChainComplex::unit(), |acc, x| tensor(&acc, x))
}

pub(crate) fn tensor_maps_all(parts: &[ChainMap]) -> ChainMap {
    parts.iter().fold(ChainMap::identity(&ChainComplex::unit()), |acc, f| tensor_maps(&acc, f))
}

/// `X₁ ⊡ ⋯ ⊡ X_r`: induction of the external tensor product from the block
/// stabilizers to the stabilizers of the concatenated representatives.
pub fn box_dot_all(factors: &[&Component]) -> Result<(Component, InducedBasis)> {
    if factors.is_empty() {
        return Err(Error::EmptyProfile);
    }
    let outs: Vec<Profile> = factors.iter().map(|f| f.out_key().rep().clone()).collect();
    let ins: Vec<Profile> = factors.iter().map(|f| f.in_key().rep().clone()).collect();
    let e_out = Profile::concat_all(&outs)?;
    let e_in = Profile::concat_all(&ins)?;
    let out_sizes: Vec<usize> = outs.iter().map(Profile::len).collect();
    let in_sizes: Vec<usize> = ins.iter().map(Profile::len).collect();
    let sub_out = product_group(&factors.iter().map(|f| f.out_key().stabilizer_elements()).collect::<Vec<_>>());
    let sub_in = product_group(&factors.iter().map(|f| f.in_key().stabilizer_elements()).collect::<Vec<_>>());
    let inner = tensor_all(&factors.iter().map(|f| f.carrier()).collect::<Vec<_>>());
    let act_out = |h: &Permutation| {
        let parts = split_blocks(h, &out_sizes);
        tensor_maps_all(&factors.iter().zip(&parts).map(|(f, g)| f.left_action(g)).collect::<Vec<_>>())
    };
    let act_in = |k: &Permutation| {
        let parts = split_blocks(k, &in_sizes);
        tensor_maps_all(&factors.iter().zip(&parts).map(|(f, g)| f.right_action(g)).collect::<Vec<_>>())
    };
    Ok(induce(&e_out, &e_in, &inner, &sub_out, &sub_in, act_out, act_in))
}

pub fn box_dot(x: &Component, y: &Component) -> Result<(Component, InducedBasis)> {
    box_dot_all(&[x, y])
}

/// One summand of `P ⊠_h Q`: the `⊡` of a component of `P` and one of `Q`.
#[derive(Clone, Debug)]
pub struct BoxHSummand {
    pub p_keys: (OrbitKey, OrbitKey),
    pub q_keys: (OrbitKey, OrbitKey),
    pub basis: InducedBasis,
}

#[derive(Clone, Debug)]
pub struct BoxHLayout {
    pub bimodule: ColoredBimodule,
    pub summands: SummandMap<BoxHSummand>,
}

/// `(P ⊠_h Q)([d];[c]) = ⊕ P([d₁];[c₁]) ⊡ Q([d₂];[c₂])` over ordered splittings.
pub fn box_h(p: &ColoredBimodule, q: &ColoredBimodule) -> Result<BoxHLayout> {
    if p.palette() != q.palette() {
        return Err(Error::PaletteMismatch);
    }
    let mut parts = Vec::new();
    for x in p.components() {
        for y in q.components() {
            let (component, basis) = box_dot(x, y)?;
            parts.push((component, BoxHSummand { p_keys: x.keys(), q_keys: y.keys(), basis }));
        }
    }
    let (bimodule, summands) = assemble(p, parts)?;
    Ok(BoxHLayout { bimodule, summands })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::profile::Palette;
    use std::sync::Arc;

    fn key(p: &Arc<Palette>, s: &str) -> OrbitKey {
        let names: Vec<String> = s.chars().map(|c| c.to_string()).collect();
        Profile::from_names(p, &names).unwrap().orbit_key()
    }

    #[test]
    fn regular_over_trivial() {
        let p = Palette::new(["a"]).unwrap();
        let swap = Matrix::from_i64(2, 2, &[0, 1, 1, 0]);
        let x = Component::from_matrices(key(&p, "a"), key(&p, "aa"), 2, vec![], vec![swap]).unwrap();
        let y = Component::from_matrices(key(&p, "aa"), key(&p, "a"), 1, vec![Matrix::identity(1)], vec![]).unwrap();
        assert_eq!(tensor_over_sigma(&x, &y).unwrap().component.dim(), 1);
    }

    #[test]
    fn sign_over_sign() {
        let p = Palette::new(["a"]).unwrap();
        let m = Matrix::from_i64(1, 1, &[-1]);
        let x = Component::from_matrices(key(&p, "a"), key(&p, "aa"), 1, vec![], vec![m.clone()]).unwrap();
        let y = Component::from_matrices(key(&p, "aa"), key(&p, "a"), 1, vec![m], vec![]).unwrap();
        assert_eq!(tensor_over_sigma(&x, &y).unwrap().component.dim(), 1);
    }

    #[test]
    fn box_dot_examples() {
        let p = Palette::new(["a", "b"]).unwrap();
        let x = Component::from_matrices(key(&p, "a"), key(&p, "a"), 1, vec![], vec![]).unwrap();
        let (c, _) = box_dot(&x, &x).unwrap();
        assert_eq!(c.dim(), 4);
        c.validate().unwrap();
        let y = Component::from_matrices(key(&p, "b"), key(&p, "b"), 1, vec![], vec![]).unwrap();
        let (c, _) = box_dot(&x, &y).unwrap();
        assert_eq!(c.dim(), 1);
    }

    #[test]
    fn box_v_single_middle() {
        let p = Palette::new(["a"]).unwrap();
        let x = Component::from_matrices(key(&p, "a"), key(&p, "a"), 2, vec![], vec![]).unwrap();
        let mut pb = ColoredBimodule::new(&p);
        pb.insert(x).unwrap();
        let v = box_v(&pb, &pb).unwrap();
        assert_eq!(v.bimodule.dim_at(&key(&p, "a"), &key(&p, "a")), 4);
        assert!(box_v(&pb, &ColoredBimodule::new(&p)).unwrap().bimodule.is_zero());
    }
}
