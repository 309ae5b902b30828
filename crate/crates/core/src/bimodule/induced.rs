//! Induction from a subgroup of a stabilizer, with explicit coset bases.
//!
//! The inner space `T` lives at a concrete object `(e_out; e_in)` and carries
//! actions of subgroups `H_out ⊆ Stab(e_out)`, `H_in ⊆ Stab(e_in)`. Its image
//! in the skeleton is `ι(x) = t_out⁻¹·x·t_in`. The induced component has basis
//! `a·ι(x)·b` with `a` a lexicographically least left coset representative
//! of `Stab(K_out)/H'_out` and `b` one of `H'_in\Stab(K_in)`, where `H'` is the
//! subgroup conjugated into the skeleton.

use std::collections::HashMap;

use crate::chain::ChainMap;
use crate::matrix::Matrix;
use crate::profile::{OrbitKey, Permutation, Profile};
use crate::ChainComplex;

use super::Component;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum InducedSide {
    Out,
    In,
}

/// Coset bookkeeping for one side of an induced component.
#[derive(Clone, Debug)]
pub struct CosetTable {
    /// Lexicographically least representatives, in increasing order.
    pub reps: Vec<Permutation>,
    /// `g ↦ (i, h)` with `g = reps[i]·h` (out side) or `g = h·reps[i]` (in side).
    table: HashMap<Permutation, (usize, Permutation)>,
}

impl CosetTable {
    fn build(group: &[Permutation], sub: &[Permutation], side: InducedSide) -> Self {
        let mut table = HashMap::with_capacity(group.len());
        let mut reps = Vec::new();
        for g in group {
            if table.contains_key(g) {
                continue;
            }
            let idx = reps.len();
            reps.push(g.clone());
            for h in sub {
                let member = match side {
                    InducedSide::Out => g.compose(h),
                    InducedSide::In => h.compose(g),
                };
                table.insert(member, (idx, h.clone()));
            }
        }
        CosetTable { reps, table }
    }

    pub fn len(&self) -> usize {
        self.reps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.reps.is_empty()
    }

    pub fn decompose(&self, g: &Permutation) -> &(usize, Permutation) {
        self.table.get(g).expect("element of the stabilizer")
    }
}

/// Everything needed to address basis vectors of an induced component.
#[derive(Clone, Debug)]
pub struct InducedBasis {
    pub out_key: OrbitKey,
    pub in_key: OrbitKey,
    pub inner: ChainComplex,
    /// `t_out`, with `t_out(rep) = e_out`.
    pub t_out: Permutation,
    /// `t_in`, with `t_in(rep) = e_in`.
    pub t_in: Permutation,
    pub out_cosets: CosetTable,
    pub in_cosets: CosetTable,
}

impl InducedBasis {
    pub fn copies(&self) -> usize {
        self.out_cosets.len() * self.in_cosets.len()
    }

    /// Index in degree `n` of `reps_out[a]·ι(x_i)·reps_in[b]`.
    pub fn index(&self, n: usize, a: usize, b: usize, i: usize) -> usize {
        (a * self.in_cosets.len() + b) * self.inner.dim(n as i64) + i
    }

    /// Inverse of [`InducedBasis::index`].
    pub fn split(&self, n: usize, k: usize) -> (usize, usize, usize) {
        let d = self.inner.dim(n as i64);
        let block = k / d;
        (block / self.in_cosets.len(), block % self.in_cosets.len(), k % d)
    }

    /// Conjugates a skeletal subgroup element on the out side back to `e_out`.
    pub fn to_inner_out(&self, h: &Permutation) -> Permutation {
        self.t_out.compose(h).compose(&self.t_out.inverse())
    }

    pub fn to_inner_in(&self, k: &Permutation) -> Permutation {
        self.t_in.compose(k).compose(&self.t_in.inverse())
    }
}

/// Induces the inner representation up to the full stabilizers of the orbit
/// keys of `e_out` and `e_in`. `sub_out`/`sub_in` list every element of the
/// subgroups (as permutations fixing `e_out`/`e_in`); `act_out`/`act_in`
/// give their actions on `inner`.
pub fn induce(
    e_out: &Profile,
    e_in: &Profile,
    inner: &ChainComplex,
    sub_out: &[Permutation],
    sub_in: &[Permutation],
    act_out: impl Fn(&Permutation) -> ChainMap,
    act_in: impl Fn(&Permutation) -> ChainMap,
) -> (Component, InducedBasis) {
    let (out_key, t_out) = e_out.canonicalize();
    let (in_key, t_in) = e_in.canonicalize();
    let conj = |t: &Permutation, h: &Permutation| t.inverse().compose(h).compose(t);
    let h_out: Vec<Permutation> = sub_out.iter().map(|h| conj(&t_out, h)).collect();
    let h_in: Vec<Permutation> = sub_in.iter().map(|h| conj(&t_in, h)).collect();
    let out_cosets = CosetTable::build(&out_key.stabilizer_elements(), &h_out, InducedSide::Out);
    let in_cosets = CosetTable::build(&in_key.stabilizer_elements(), &h_in, InducedSide::In);
    let basis = InducedBasis { out_key: out_key.clone(), in_key: in_key.clone(), inner: inner.clone(), t_out, t_in, out_cosets, in_cosets };

    let copies = basis.copies();
    let top = inner.len();
    let dims: Vec<usize> = (0..top).map(|n| copies * inner.dims()[n]).collect();
    let boundaries = (1..top)
        .map(|n| {
            let d = inner.d(n as i64);
            let blocks: Vec<&Matrix> = std::iter::repeat_n(&d, copies).collect();
            Matrix::block_diag(&blocks)
        })
        .collect();
    let carrier = ChainComplex::new(dims, boundaries).expect("induced carrier");

    let mut out_cache: HashMap<Permutation, ChainMap> = HashMap::new();
    let left = out_key
        .stabilizer_generators()
        .iter()
        .map(|s| {
            let mut blocks: Vec<Matrix> = (0..top).map(|n| Matrix::zeros(carrier.dims()[n], carrier.dims()[n])).collect();
            for (a, rep) in basis.out_cosets.reps.iter().enumerate() {
                let (a2, h) = basis.out_cosets.decompose(&s.compose(rep)).clone();
                let m = out_cache.entry(h.clone()).or_insert_with(|| act_out(&basis.to_inner_out(&h)));
                for b in 0..basis.in_cosets.len() {
                    for n in 0..top {
                        blocks[n].paste(basis.index(n, a2, b, 0), basis.index(n, a, b, 0), &m.block(n as i64));
                    }
                }
            }
            ChainMap::new(carrier.clone(), carrier.clone(), 0, blocks).expect("left action")
        })
        .collect();
    let mut in_cache: HashMap<Permutation, ChainMap> = HashMap::new();
    let right = in_key
        .stabilizer_generators()
        .iter()
        .map(|s| {
            let mut blocks: Vec<Matrix> = (0..top).map(|n| Matrix::zeros(carrier.dims()[n], carrier.dims()[n])).collect();
            for (b, rep) in basis.in_cosets.reps.iter().enumerate() {
                let (b2, k) = basis.in_cosets.decompose(&rep.compose(s)).clone();
                let m = in_cache.entry(k.clone()).or_insert_with(|| act_in(&basis.to_inner_in(&k)));
                for a in 0..basis.out_cosets.len() {
                    for n in 0..top {
                        blocks[n].paste(basis.index(n, a, b2, 0), basis.index(n, a, b, 0), &m.block(n as i64));
                    }
                }
            }
            ChainMap::new(carrier.clone(), carrier.clone(), 0, blocks).expect("right action")
        })
        .collect();
    let component = Component::new_unchecked(out_key, in_key, carrier, left, right);
    (component, basis)
}
