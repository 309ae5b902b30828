//! Change of colors along a map of palettes: restriction `α*` and its left
//! adjoint `α_!`.

use std::collections::BTreeMap;
use std::sync::Arc;

use crate::chain::ChainMap;
use crate::error::{Error, Result};
use crate::profile::{Color, OrbitKey, Palette, Permutation, Profile};

use super::induced::induce;
use super::{ColoredBimodule, Component};

/// A function from the colors of one palette to another.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ColorMap {
    source: Arc<Palette>,
    target: Arc<Palette>,
    images: Vec<Color>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Direction {
    Restrict,
    Induce,
}

impl ColorMap {
    pub fn new(source: &Arc<Palette>, target: &Arc<Palette>, images: Vec<Color>) -> Result<Self> {
        if images.len() != source.len() {
            return Err(Error::LengthMismatch { expected: source.len(), found: images.len() });
        }
        if let Some(c) = images.iter().find(|c| c.0 as usize >= target.len()) {
            return Err(Error::UnknownColor(format!("#{}", c.0)));
        }
        Ok(ColorMap { source: source.clone(), target: target.clone(), images })
    }

    pub fn identity(palette: &Arc<Palette>) -> Self {
        ColorMap { source: palette.clone(), target: palette.clone(), images: (0..palette.len() as u16).map(Color).collect() }
    }

    pub fn source(&self) -> &Arc<Palette> {
        &self.source
    }

    pub fn target(&self) -> &Arc<Palette> {
        &self.target
    }

    pub fn image(&self, c: Color) -> Color {
        self.images[c.0 as usize]
    }

    pub fn is_injective(&self) -> bool {
        let mut seen = self.images.clone();
        seen.sort();
        seen.dedup();
        seen.len() == self.images.len()
    }

    pub fn apply(&self, p: &Profile) -> Profile {
        Profile::new(&self.target, p.colors().iter().map(|&c| self.image(c)).collect()).expect("image profile")
    }

    /// Every source orbit key whose image is `key`.
    pub fn preimage_keys(&self, key: &OrbitKey) -> Vec<OrbitKey> {
        let rep = key.rep();
        let mut acc: Vec<Vec<Color>> = vec![Vec::new()];
        let mut start = 0;
        for &size in key.block_sizes() {
            let target_color = rep.get(start);
            let fiber: Vec<Color> = (0..self.source.len() as u16).map(Color).filter(|&c| self.image(c) == target_color).collect();
            let choices = multisets(&fiber, size);
            let mut next = Vec::new();
            for prefix in &acc {
                for m in &choices {
                    let mut v = prefix.clone();
                    v.extend_from_slice(m);
                    next.push(v);
                }
            }
            acc = next;
            start += size;
        }
        let mut keys: Vec<OrbitKey> = acc
            .into_iter()
            .map(|cs| Profile::new(&self.source, cs).expect("preimage profile").orbit_key())
            .collect();
        keys.sort();
        keys.dedup();
        keys
    }
}

/// Non-decreasing sequences of length `k` drawn from `items`.
fn multisets(items: &[Color], k: usize) -> Vec<Vec<Color>> {
    if k == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for (i, &c) in items.iter().enumerate() {
        for mut rest in multisets(&items[i..], k - 1) {
            rest.insert(0, c);
            out.push(rest);
        }
    }
    out
}

pub fn change_colors(alpha: &ColorMap, direction: Direction, p: &ColoredBimodule) -> Result<ColoredBimodule> {
    match direction {
        Direction::Restrict => restrict(alpha, p),
        Direction::Induce => induce_along(alpha, p),
    }
}

/// `(α*P')([d];[c]) = P'(αd; αc)` with the stabilizers of `d`, `c` acting
/// through their inclusion into the stabilizers of `αd`, `αc`.
fn restrict(alpha: &ColorMap, p: &ColoredBimodule) -> Result<ColoredBimodule> {
    if **p.palette() != *alpha.target {
        return Err(Error::PaletteMismatch);
    }
    let mut out = ColoredBimodule::new(&alpha.source);
    for comp in p.components() {
        for dk in alpha.preimage_keys(comp.out_key()) {
            for ck in alpha.preimage_keys(comp.in_key()) {
                let (_, td) = alpha.apply(dk.rep()).canonicalize();
                let (_, tc) = alpha.apply(ck.rep()).canonicalize();
                let uc = tc.inverse();
                let left: Vec<ChainMap> = dk.stabilizer_generators().iter().map(|g| comp.relocate(&g.compose(&td), &uc)).collect();
                let right: Vec<ChainMap> = ck.stabilizer_generators().iter().map(|g| comp.relocate(&td, &uc.compose(g))).collect();
                out.insert(Component::new_unchecked(dk.clone(), ck, comp.carrier().clone(), left, right))?;
            }
        }
    }
    Ok(out)
}

/// `(α_!P)([d'];[c'])` is the sum over preimage orbits of the induction of
/// `P(d; c)` from `Stab(d) × Stab(c)` to `Stab(d') × Stab(c')`, where `d`
/// is the preimage arranged so that `αd` is the representative of `[d']`.
fn induce_along(alpha: &ColorMap, p: &ColoredBimodule) -> Result<ColoredBimodule> {
    if **p.palette() != *alpha.source {
        return Err(Error::PaletteMismatch);
    }
    let mut parts: BTreeMap<(OrbitKey, OrbitKey), Vec<Component>> = BTreeMap::new();
    for comp in p.components() {
        let (_, ta) = alpha.apply(comp.out_key().rep()).canonicalize();
        let (_, tb) = alpha.apply(comp.in_key().rep()).canonicalize();
        let g = ta.inverse();
        let k = tb;
        let d = comp.out_key().rep().left(&g);
        let c = comp.in_key().rep().right(&k);
        let conj = |x: &Permutation, h: &Permutation| x.compose(h).compose(&x.inverse());
        let sub_out: Vec<Permutation> = comp.out_key().stabilizer_elements().iter().map(|h| conj(&g, h)).collect();
        let sub_in: Vec<Permutation> = comp.in_key().stabilizer_elements().iter().map(|h| conj(&k.inverse(), h)).collect();
        let ginv = g.inverse();
        let act_out = |h: &Permutation| comp.left_action(&conj(&ginv, h));
        let act_in = |h: &Permutation| comp.right_action(&conj(&k, h));
        let (component, _) = induce(&alpha.apply(&d), &alpha.apply(&c), comp.carrier(), &sub_out, &sub_in, act_out, act_in);
        parts.entry(component.keys()).or_default().push(component);
    }
    let mut out = ColoredBimodule::new(&alpha.target);
    for (_, comps) in parts {
        for c in comps {
            out.insert(c)?;
        }
    }
    Ok(out)
}
