//! Colored Σ-bimodules stored skeletally: one component per pair of orbit
//! keys, carrying commuting actions of the two stabilizers.
//!
//! A vector `v` of the component at `(K_d; K_c)` stands for the element
//! `(t_d; u_c)·v` at a concrete object `(d; c)`, where `t_d` is the canonical
//! transport of `d` and `u_c = t_c⁻¹` (so that `c = rep·u_c`).

mod colors;
mod induced;
mod monoids;
mod products;

use std::collections::BTreeMap;
use std::sync::Arc;

use crate::chain::ChainMap;
use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::profile::{OrbitKey, Palette, Permutation, Profile};
use crate::ChainComplex;

pub use colors::{change_colors, ColorMap, Direction};
pub use induced::{induce, CosetTable, InducedBasis, InducedSide};
pub use monoids::{horizontal_on_representatives, induce_horizontal_on_boxv, induce_vertical_on_boxh, Element, HProp, VProp};
pub use products::{box_dot, box_dot_all, box_h, box_v, tensor_over_sigma, BoxHLayout, BoxHSummand, BoxVLayout, Summand, TensorOverSigma};
pub(crate) use products::split_blocks;

/// A representation of `Stab(out) × Stab(in)ᵒᵖ` on a chain complex.
///
/// `left[i]` is the action of the i-th generator of `out_key` and
/// `right[j]` the right action of the j-th generator of `in_key`, both as
/// degree-0 chain automorphisms of the carrier.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Component {
    out_key: OrbitKey,
    in_key: OrbitKey,
    carrier: ChainComplex,
    left: Vec<ChainMap>,
    right: Vec<ChainMap>,
}

impl Component {
    pub fn new(out_key: OrbitKey, in_key: OrbitKey, carrier: ChainComplex, left: Vec<ChainMap>, right: Vec<ChainMap>) -> Result<Self> {
        let c = Component { out_key, in_key, carrier, left, right };
        c.validate()?;
        Ok(c)
    }

    pub(crate) fn new_unchecked(out_key: OrbitKey, in_key: OrbitKey, carrier: ChainComplex, left: Vec<ChainMap>, right: Vec<ChainMap>) -> Self {
        Component { out_key, in_key, carrier, left, right }
    }

    /// All generators act by the identity.
    pub fn trivial(out_key: OrbitKey, in_key: OrbitKey, carrier: ChainComplex) -> Self {
        let id = ChainMap::identity(&carrier);
        let left = vec![id.clone(); out_key.generator_positions().len()];
        let right = vec![id; in_key.generator_positions().len()];
        Component { out_key, in_key, carrier, left, right }
    }

    /// A component concentrated in degree 0 given by generator matrices.
    pub fn from_matrices(out_key: OrbitKey, in_key: OrbitKey, dim: usize, left: Vec<Matrix>, right: Vec<Matrix>) -> Result<Self> {
        let carrier = ChainComplex::concentrated(dim);
        let wrap = |ms: Vec<Matrix>| -> Result<Vec<ChainMap>> {
            ms.into_iter()
                .map(|m| {
                    let blocks = if dim == 0 { Vec::new() } else { vec![m] };
                    ChainMap::new(carrier.clone(), carrier.clone(), 0, blocks)
                })
                .collect()
        };
        let (left, right) = (wrap(left)?, wrap(right)?);
        Component::new(out_key, in_key, carrier, left, right)
    }

    pub fn out_key(&self) -> &OrbitKey {
        &self.out_key
    }

    pub fn in_key(&self) -> &OrbitKey {
        &self.in_key
    }

    pub fn keys(&self) -> (OrbitKey, OrbitKey) {
        (self.out_key.clone(), self.in_key.clone())
    }

    pub fn carrier(&self) -> &ChainComplex {
        &self.carrier
    }

    pub fn dim(&self) -> usize {
        self.carrier.total_dim()
    }

    pub fn left_generators(&self) -> &[ChainMap] {
        &self.left
    }

    pub fn right_generators(&self) -> &[ChainMap] {
        &self.right
    }

    pub fn is_zero(&self) -> bool {
        self.carrier.is_zero()
    }

    /// The action of a left stabilizer element, via its descent word.
    pub fn left_action(&self, g: &Permutation) -> ChainMap {
        debug_assert!(self.out_key.in_stabilizer(g), "{g:?} is not in the stabilizer of {:?}", self.out_key);
        let mut acc = ChainMap::identity(&self.carrier);
        for p in g.descent_word() {
            let s = &self.left[self.out_key.generator_index(p)];
            acc = s.compose(&acc).expect("endomorphisms");
        }
        acc
    }

    /// The matrix of `v ↦ v·g` for a right stabilizer element.
    pub fn right_action(&self, g: &Permutation) -> ChainMap {
        debug_assert!(self.in_key.in_stabilizer(g), "{g:?} is not in the stabilizer of {:?}", self.in_key);
        let mut acc = ChainMap::identity(&self.carrier);
        for p in g.descent_word() {
            let s = &self.right[self.in_key.generator_index(p)];
            acc = acc.compose(s).expect("endomorphisms");
        }
        acc
    }

    pub fn left_matrix(&self, g: &Permutation) -> Matrix {
        self.left_action(g).total_matrix()
    }

    pub fn right_matrix(&self, g: &Permutation) -> Matrix {
        self.right_action(g).total_matrix()
    }

    /// Skeletal coordinates of `(g; k)·v`, where `g(rep_out) = d` and
    /// `rep_in·k = c`, relative to the canonical transports of `(d; c)`.
    pub fn relocate(&self, g: &Permutation, k: &Permutation) -> ChainMap {
        let d = self.out_key.rep().left(g);
        let c = self.in_key.rep().right(k);
        let (_, td) = d.canonicalize();
        let (_, tc) = c.canonicalize();
        let h = td.inverse().compose(g);
        let kk = k.compose(&tc);
        self.left_action(&h).compose(&self.right_action(&kk)).expect("endomorphisms")
    }

    /// Checks invertibility, compatibility with the differential, the
    /// Coxeter relations of both stabilizers, and that the two sides commute.
    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::InvalidRep(format!("component {:?}→{:?}: {m}", self.out_key, self.in_key)));
        if self.left.len() != self.out_key.generator_positions().len() || self.right.len() != self.in_key.generator_positions().len() {
            return bad("wrong number of generator actions".into());
        }
        for g in self.left.iter().chain(&self.right) {
            if g.source() != &self.carrier || g.target() != &self.carrier || g.degree() != 0 {
                return bad("action is not a degree-0 endomorphism of the carrier".into());
            }
            if !g.is_chain_map() {
                return bad("action does not commute with the differential".into());
            }
        }
        for (key, gens, side) in [(&self.out_key, &self.left, "left"), (&self.in_key, &self.right, "right")] {
            if let Some(msg) = coxeter_violation(key, gens) {
                return bad(format!("{side} action: {msg}"));
            }
        }
        for l in &self.left {
            for r in &self.right {
                if l.compose(r)? != r.compose(l)? {
                    return bad("left and right actions do not commute".into());
                }
            }
        }
        Ok(())
    }

    pub fn direct_sum(&self, other: &Component) -> Result<Component> {
        if self.keys() != other.keys() {
            return Err(Error::ProfileMismatch { left: format!("{:?}", self.keys()), right: format!("{:?}", other.keys()) });
        }
        let sum = |a: &[ChainMap], b: &[ChainMap]| -> Result<Vec<ChainMap>> { a.iter().zip(b).map(|(x, y)| x.direct_sum(y)).collect() };
        Ok(Component {
            out_key: self.out_key.clone(),
            in_key: self.in_key.clone(),
            carrier: self.carrier.direct_sum(&other.carrier),
            left: sum(&self.left, &other.left)?,
            right: sum(&self.right, &other.right)?,
        })
    }

    pub fn zero(out_key: OrbitKey, in_key: OrbitKey) -> Self {
        Component::trivial(out_key, in_key, ChainComplex::zero())
    }
}

fn coxeter_violation(key: &OrbitKey, gens: &[ChainMap]) -> Option<String> {
    let pos = key.generator_positions();
    let Some(first) = gens.first() else { return None };
    let id = ChainMap::identity(first.source());
    let pow = |m: &ChainMap, k: usize| (1..k).fold(m.clone(), |acc, _| acc.compose(m).expect("endomorphisms"));
    for (i, &p) in pos.iter().enumerate() {
        if pow(&gens[i], 2) != id {
            return Some(format!("Coxeter relation s{p}² = 1 fails"));
        }
        for (j, &q) in pos.iter().enumerate().skip(i + 1) {
            let prod = gens[i].compose(&gens[j]).expect("endomorphisms");
            let order = if q == p + 1 { 3 } else { 2 };
            if pow(&prod, order) != id {
                return Some(format!("Coxeter relation (s{p}s{q})^{order} = 1 fails"));
            }
        }
    }
    None
}

/// A finite-support colored Σ-bimodule.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ColoredBimodule {
    palette: Arc<Palette>,
    components: BTreeMap<(OrbitKey, OrbitKey), Component>,
}

/// A component read at a concrete object, with the groupoid action on it.
#[derive(Clone, Debug)]
pub struct ConcreteComponent {
    pub out: Profile,
    pub input: Profile,
    pub component: Component,
}

impl ConcreteComponent {
    pub fn carrier(&self) -> &ChainComplex {
        self.component.carrier()
    }

    /// The map `P(d; c) → P(σd; cτ)` of the structure morphism `(σ; τ)`.
    pub fn transport(&self, sigma: &Permutation, tau: &Permutation) -> ChainMap {
        let (_, td) = self.out.canonicalize();
        let (_, tc) = self.input.canonicalize();
        let uc = tc.inverse();
        self.component.relocate(&sigma.compose(&td), &uc.compose(tau))
    }
}

impl ColoredBimodule {
    pub fn new(palette: &Arc<Palette>) -> Self {
        ColoredBimodule { palette: palette.clone(), components: BTreeMap::new() }
    }

    pub fn palette(&self) -> &Arc<Palette> {
        &self.palette
    }

    /// Adds a component, summing with whatever is already stored there.
    pub fn insert(&mut self, component: Component) -> Result<()> {
        if **component.out_key.rep().palette() != *self.palette {
            return Err(Error::PaletteMismatch);
        }
        if component.is_zero() {
            return Ok(());
        }
        let key = component.keys();
        let merged = match self.components.remove(&key) {
            Some(old) => old.direct_sum(&component)?,
            None => component,
        };
        self.components.insert(key, merged);
        Ok(())
    }

    pub fn get(&self, out_key: &OrbitKey, in_key: &OrbitKey) -> Option<&Component> {
        self.components.get(&(out_key.clone(), in_key.clone()))
    }

    pub fn components(&self) -> impl Iterator<Item = &Component> {
        self.components.values()
    }

    pub fn support(&self) -> Vec<(OrbitKey, OrbitKey)> {
        self.components.keys().cloned().collect()
    }

    pub fn is_zero(&self) -> bool {
        self.components.is_empty()
    }

    /// Total dimension of the component at the orbit pair.
    pub fn dim_at(&self, out_key: &OrbitKey, in_key: &OrbitKey) -> usize {
        self.get(out_key, in_key).map_or(0, Component::dim)
    }

    pub fn component_at(&self, d: &Profile, c: &Profile) -> ConcreteComponent {
        let (dk, ck) = (d.orbit_key(), c.orbit_key());
        let component = self.get(&dk, &ck).cloned().unwrap_or_else(|| Component::zero(dk, ck));
        ConcreteComponent { out: d.clone(), input: c.clone(), component }
    }

    pub fn validate(&self) -> Result<()> {
        self.components.values().try_for_each(Component::validate)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::q;

    fn key(p: &Arc<Palette>, s: &str) -> OrbitKey {
        let names: Vec<String> = s.chars().map(|c| c.to_string()).collect();
        Profile::from_names(p, &names).unwrap().orbit_key()
    }

    #[test]
    fn sign_transport() {
        let p = Palette::new(["a"]).unwrap();
        let comp = Component::from_matrices(key(&p, "aa"), key(&p, "a"), 1, vec![Matrix::from_i64(1, 1, &[-1])], vec![]).unwrap();
        let mut m = ColoredBimodule::new(&p);
        m.insert(comp).unwrap();
        let d = Profile::from_names(&p, &["a", "a"]).unwrap();
        let c = Profile::from_names(&p, &["a"]).unwrap();
        let at = m.component_at(&d, &c);
        let t = at.transport(&Permutation::from_one_line(&[2, 1]).unwrap(), &Permutation::identity(1));
        assert_eq!(t.total_matrix(), Matrix::from_i64(1, 1, &[-1]));
    }

    #[test]
    fn zero_component_is_zero_complex() {
        let p = Palette::new(["a"]).unwrap();
        let m = ColoredBimodule::new(&p);
        let d = Profile::from_names(&p, &["a"]).unwrap();
        assert!(m.component_at(&d, &d).carrier().is_zero());
    }

    #[test]
    fn rejects_broken_relations() {
        let p = Palette::new(["a"]).unwrap();
        let two = Matrix::from_rows(vec![vec![q(2)]]);
        assert!(Component::from_matrices(key(&p, "aa"), key(&p, "a"), 1, vec![two], vec![]).is_err());
    }
}
