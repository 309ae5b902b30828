//! Seeded random instances for self-checks and property tests.

use std::collections::BTreeMap;
use std::sync::Arc;

use rand::seq::SliceRandom;
use rand::Rng;

use crate::algebra::AlgebraStructure;
use crate::bimodule::{ColoredBimodule, Component};
use crate::chain::{tensor_maps, ChainComplex, ChainMap, LiftSystem};
use crate::endo::{ColoredFamily, EndoElement};
use crate::graph::{parse, Expression, Generator, PropPresentation, Signature};
use crate::matrix::Matrix;
use crate::operad::{forget_to_operad, ColoredOperad, EndoProp};
use crate::profile::{Color, OrbitKey, Palette, Permutation, Profile};
use crate::rational::{q, Q};

/// A small nonzero-biased rational.
pub fn rational<R: Rng>(rng: &mut R) -> Q {
    let n = rng.gen_range(-3i64..=3);
    let d = if rng.gen_bool(0.2) { rng.gen_range(1i64..=3) } else { 1 };
    Q::new(n.into(), d.into())
}

pub fn matrix<R: Rng>(rng: &mut R, rows: usize, cols: usize) -> Matrix {
    Matrix::from_fn(rows, cols, |_, _| if rng.gen_bool(0.5) { rational(rng) } else { q(0) })
}

/// A random invertible matrix (unit lower times unit upper triangular, then a row shuffle).
pub fn invertible<R: Rng>(rng: &mut R, n: usize) -> Matrix {
    let lower = Matrix::from_fn(n, n, |i, j| if i == j { q(1) } else if i > j && rng.gen_bool(0.4) { q(rng.gen_range(-2..=2)) } else { q(0) });
    let upper = Matrix::from_fn(n, n, |i, j| if i == j { q(1) } else if i < j && rng.gen_bool(0.4) { q(rng.gen_range(-2..=2)) } else { q(0) });
    let mut perm: Vec<usize> = (0..n).collect();
    perm.shuffle(rng);
    &Matrix::permutation(&perm, None) * &(&lower * &upper)
}

pub fn permutation<R: Rng>(rng: &mut R, n: usize) -> Permutation {
    let mut v: Vec<usize> = (0..n).collect();
    v.shuffle(rng);
    Permutation::new(v).expect("shuffle is a permutation")
}

/// A random bounded complex: a sum of discs and spheres in a random basis.
pub fn complex<R: Rng>(rng: &mut R, max_total: usize, max_degree: usize) -> ChainComplex {
    let mut pieces: Vec<ChainComplex> = Vec::new();
    let mut total = 0;
    let target = rng.gen_range(0..=max_total);
    while total < target {
        if max_degree > 0 && rng.gen_bool(0.5) && total + 2 <= target {
            pieces.push(ChainComplex::disc(rng.gen_range(1..=max_degree)));
            total += 2;
        } else {
            pieces.push(ChainComplex::in_degree(rng.gen_range(0..=max_degree), 1));
            total += 1;
        }
    }
    pieces.shuffle(rng);
    let x = ChainComplex::direct_sum_all(&pieces);
    change_basis(rng, &x).0
}

/// Re-expresses `x` in a random basis; also returns the isomorphism `x → result`.
pub fn change_basis<R: Rng>(rng: &mut R, x: &ChainComplex) -> (ChainComplex, ChainMap) {
    let bases: Vec<Matrix> = x.dims().iter().map(|&d| invertible(rng, d)).collect();
    let inverses: Vec<Matrix> = bases.iter().map(|b| b.inverse().expect("invertible")).collect();
    let boundaries = (1..x.len()).map(|n| &(&bases[n - 1] * &x.d(n as i64)) * &inverses[n]).collect();
    let y = ChainComplex::new(x.dims().to_vec(), boundaries).expect("conjugated complex");
    let iso = ChainMap::new(x.clone(), y.clone(), 0, bases).expect("basis change");
    (y, iso)
}

/// Generator matrices of a random representation of the Young subgroup of
/// `key`, as a sum of trivial, sign and permutation pieces in a random basis.
pub fn side_rep<R: Rng>(rng: &mut R, key: &OrbitKey, max_dim: usize) -> (usize, Vec<Matrix>) {
    let positions = key.generator_positions();
    let n = key.len();
    let mut dim = 0;
    let mut gens: Vec<Matrix> = vec![Matrix::zeros(0, 0); positions.len()];
    loop {
        let choice = rng.gen_range(0..3);
        let (d, piece): (usize, Vec<Matrix>) = match choice {
            0 => (1, positions.iter().map(|_| Matrix::identity(1)).collect()),
            1 => (1, positions.iter().map(|_| Matrix::from_i64(1, 1, &[-1])).collect()),
            _ => (n, positions.iter().map(|&p| Matrix::permutation(Permutation::adjacent(n, p).images(), None)).collect()),
        };
        if dim + d > max_dim.max(1) && dim > 0 {
            break;
        }
        dim += d;
        gens = gens.iter().zip(&piece).map(|(a, b)| Matrix::block_diag(&[a, b])).collect();
        if dim >= max_dim || rng.gen_bool(0.5) {
            break;
        }
    }
    let a = invertible(rng, dim);
    let ainv = a.inverse().expect("invertible");
    (dim, gens.iter().map(|g| &(&a * g) * &ainv).collect())
}

/// A random degree-0 component `L ⊗ R` (plus possibly a second such summand).
pub fn component<R: Rng>(rng: &mut R, out_key: &OrbitKey, in_key: &OrbitKey, max_dim: usize) -> Component {
    let mut acc: Option<Component> = None;
    for _ in 0..rng.gen_range(1..=2) {
        let (a, l) = side_rep(rng, out_key, max_dim.clamp(1, 3));
        let (b, r) = side_rep(rng, in_key, max_dim.clamp(1, 3));
        let left = l.iter().map(|m| m.kron(&Matrix::identity(b))).collect();
        let right = r.iter().map(|m| Matrix::identity(a).kron(m)).collect();
        let c = Component::from_matrices(out_key.clone(), in_key.clone(), a * b, left, right).expect("tensor of representations");
        acc = Some(match acc {
            Some(prev) if prev.dim() + c.dim() <= max_dim => prev.direct_sum(&c).expect("same keys"),
            Some(prev) => prev,
            None => c,
        });
    }
    acc.expect("at least one summand")
}

/// A random component whose carrier is a random complex tensored with a
/// random representation.
pub fn graded_component<R: Rng>(rng: &mut R, out_key: &OrbitKey, in_key: &OrbitKey, max_dim: usize) -> Component {
    let rep = component(rng, out_key, in_key, max_dim);
    let c = complex(rng, 3, 2);
    if c.is_zero() {
        return rep;
    }
    let id = ChainMap::identity(&c);
    let carrier = crate::chain::tensor(&c, rep.carrier());
    let left = rep.left_generators().iter().map(|g| tensor_maps(&id, g)).collect();
    let right = rep.right_generators().iter().map(|g| tensor_maps(&id, g)).collect();
    Component::new(out_key.clone(), in_key.clone(), carrier, left, right).expect("graded representation")
}

pub fn profile<R: Rng>(rng: &mut R, palette: &Arc<Palette>, len: usize) -> Profile {
    let colors = (0..len).map(|_| Color(rng.gen_range(0..palette.len() as u16))).collect();
    Profile::new(palette, colors).expect("random profile")
}

pub fn orbit_key<R: Rng>(rng: &mut R, palette: &Arc<Palette>, max_len: usize) -> OrbitKey {
    let len = rng.gen_range(1..=max_len);
    profile(rng, palette, len).orbit_key()
}

/// A bimodule with a few random degree-0 components.
pub fn bimodule<R: Rng>(rng: &mut R, palette: &Arc<Palette>, max_len: usize, max_components: usize, max_dim: usize) -> ColoredBimodule {
    let mut b = ColoredBimodule::new(palette);
    for _ in 0..rng.gen_range(1..=max_components) {
        let (d, c) = (orbit_key(rng, palette, max_len), orbit_key(rng, palette, max_len));
        if b.get(&d, &c).is_some() {
            continue;
        }
        b.insert(component(rng, &d, &c, max_dim)).expect("same palette");
    }
    b
}

/// A random degree-0 chain map `x → y`: a random combination of a basis of
/// all chain maps.
pub fn chain_map<R: Rng>(rng: &mut R, x: &ChainComplex, y: &ChainComplex) -> ChainMap {
    let top = x.len();
    let mut sys = LiftSystem::new((0..top as i64).map(|n| (y.dim(n), x.dim(n))).collect());
    for n in 1..top {
        let ni = n as i64;
        let minus = -&Matrix::identity(y.dim(ni - 1));
        sys.add("chain", &[(n, &y.d(ni), &Matrix::identity(x.dim(ni))), (n - 1, &minus, &x.d(ni))], &Matrix::zeros(y.dim(ni - 1), x.dim(ni)))
            .expect("shapes");
    }
    let mut blocks: Vec<Matrix> = (0..top as i64).map(|n| Matrix::zeros(y.dim(n), x.dim(n))).collect();
    for sol in sys.homogeneous_basis() {
        if rng.gen_bool(0.6) {
            let c = rational(rng);
            for (b, s) in blocks.iter_mut().zip(&sol) {
                *b = &*b + &s.scale(&c);
            }
        }
    }
    ChainMap::new(x.clone(), y.clone(), 0, blocks).expect("random map")
}

/// A random signature over `colors` colors: one unary generator per color
/// plus up to `extra` generators of random biarity (at most 2 outputs, 3
/// inputs) and degree at most `max_degree`.
pub fn signature<R: Rng>(rng: &mut R, colors: usize, extra: usize, max_degree: u32) -> Signature {
    let names: Vec<String> = (0..colors).map(|i| ((b'a' + i as u8) as char).to_string()).collect();
    let palette = Palette::new(names).expect("distinct color names");
    let mut gens = Vec::new();
    for c in 0..colors as u16 {
        let p = Profile::new(&palette, vec![Color(c)]).expect("unary profile");
        gens.push(Generator::new(format!("u{c}"), p.clone(), p, rng.gen_range(0..=max_degree)).expect("unary generator"));
    }
    for k in 0..extra {
        let (m, n) = (rng.gen_range(1..=2), rng.gen_range(1..=3));
        let out = profile(rng, &palette, m);
        let input = profile(rng, &palette, n);
        gens.push(Generator::new(format!("g{k}"), out, input, rng.gen_range(0..=max_degree)).expect("random generator"));
    }
    gens.shuffle(rng);
    Signature::new(&palette, gens).expect("distinct generator names")
}

/// A horizontal product of generators whose output profile is exactly
/// `out`, with random actions.
pub fn layer<R: Rng>(rng: &mut R, sig: &Signature, out: &Profile) -> Expression {
    let mut remaining: Vec<Color> = out.colors().to_vec();
    let mut parts = Vec::new();
    while !remaining.is_empty() {
        let fits = |g: &crate::graph::Generator| {
            let mut left = remaining.clone();
            g.out().colors().iter().all(|c| match left.iter().position(|x| x == c) {
                Some(i) => {
                    left.remove(i);
                    true
                }
                None => false,
            })
        };
        let candidates: Vec<usize> = (0..sig.generators().len()).filter(|&i| fits(sig.get(i))).collect();
        let pick = if rng.gen_bool(0.7) {
            candidates.choose(rng).copied()
        } else {
            candidates.iter().copied().find(|&i| sig.get(i).out().len() == 1 && sig.get(i).input().len() == 1)
        };
        let g = pick.unwrap_or_else(|| candidates[0]);
        for c in sig.get(g).out().colors() {
            let i = remaining.iter().position(|x| x == c).expect("fits");
            remaining.remove(i);
        }
        let mut e = Expression::generator(sig, sig.get(g).name()).expect("known generator");
        if rng.gen_bool(0.3) {
            let tau = permutation(rng, e.input().len());
            e = Expression::right(e, tau).expect("length matches");
        }
        parts.push(e);
    }
    parts.shuffle(rng);
    let mut e = parts.into_iter().reduce(|a, b| Expression::horiz(a, b).expect("same palette")).expect("non-empty");
    // move each produced output to a position of the same color in `out`
    let produced = e.out().colors().to_vec();
    let mut used = vec![false; produced.len()];
    let mut images = vec![0; produced.len()];
    for (j, c) in produced.iter().enumerate() {
        let i = (0..out.len()).find(|&i| !used[i] && out.get(i) == *c).expect("same multiset");
        used[i] = true;
        images[j] = i;
    }
    let sigma = Permutation::new(images).expect("bijection");
    e = Expression::left(sigma, e).expect("length matches");
    debug_assert_eq!(e.out(), out);
    e
}

/// A random expression with output profile `out`, built from `depth` layers.
pub fn expression<R: Rng>(rng: &mut R, sig: &Signature, out: &Profile, depth: usize) -> Expression {
    let mut e = layer(rng, sig, out);
    for _ in 1..depth {
        let below = layer(rng, sig, &e.input().clone());
        e = Expression::vert(e, below).expect("layer matches");
    }
    e
}

/// A random homogeneous map `x → y` of degree `k` (not a chain map).
pub fn graded_map<R: Rng>(rng: &mut R, x: &ChainComplex, y: &ChainComplex, k: i64) -> ChainMap {
    let blocks = (0..x.len() as i64).map(|n| matrix(rng, y.dim(n + k), x.dim(n))).collect();
    ChainMap::new(x.clone(), y.clone(), k, blocks).expect("shapes")
}

/// A family with one random complex per color.
pub fn family<R: Rng>(rng: &mut R, palette: &Arc<Palette>, max_total: usize, max_degree: usize) -> ColoredFamily {
    let complexes = (0..palette.len()).map(|_| complex(rng, max_total, max_degree)).collect();
    ColoredFamily::new(palette, complexes).expect("one complex per color")
}

/// A random element of `Hom(X_input, X_out)` of degree `k`.
pub fn endo_element<R: Rng>(rng: &mut R, family: &ColoredFamily, out: &Profile, input: &Profile, k: i64) -> EndoElement {
    let map = graded_map(rng, &family.tensor(input), &family.tensor(out), k);
    EndoElement::new(family, out.clone(), input.clone(), map).expect("shapes")
}

/// The one-colored presentation with `m: (c) ← (c c)` and `i: (c) ← (c)` in
/// degree 0 and `m3: (c) ← (c c c)` in degree 1 with
/// `δm3 = m∘(m⊗i) − m∘(i⊗m)`.
pub fn a_infinity() -> PropPresentation {
    let p = Palette::new(["c"]).expect("palette");
    let prof = |n: usize| Profile::from_names(&p, &vec!["c"; n]).expect("profile");
    let sig = Signature::new(
        &p,
        vec![
            Generator::new("m", prof(1), prof(2), 0).expect("generator"),
            Generator::new("i", prof(1), prof(1), 0).expect("generator"),
            Generator::new("m3", prof(1), prof(3), 1).expect("generator"),
        ],
    )
    .expect("signature");
    let e = |t: &str| parse(t, &sig).expect("expression");
    let mut delta = BTreeMap::new();
    delta.insert("m3".to_string(), vec![(q(1), e("m o (m * i)")), (q(-1), e("m o (i * m)"))]);
    PropPresentation::new(sig, delta, Vec::new()).expect("presentation")
}

/// `ℚ[0]` with field multiplication, identity and `m3 = 0` for
/// [`a_infinity`].
pub fn ground_field_algebra() -> AlgebraStructure {
    let pres = a_infinity();
    let p = pres.signature.palette().clone();
    let prof = |n: usize| Profile::from_names(&p, &vec!["c"; n]).expect("profile");
    let family = ColoredFamily::new(&p, vec![ChainComplex::unit()]).expect("family");
    let mut images = BTreeMap::new();
    images.insert("m".to_string(), EndoElement::from_blocks(&family, prof(1), prof(2), 0, vec![Matrix::identity(1)]).expect("m"));
    images.insert("i".to_string(), EndoElement::identity(&family, prof(1)));
    images.insert("m3".to_string(), EndoElement::zero(&family, prof(1), prof(3), 1));
    AlgebraStructure::new(pres, family, images).expect("algebra")
}

/// The endomorphism operad of a family of spaces of dimension 1 to
/// `max_dim`, one per color.
pub fn endo_operad<R: Rng>(rng: &mut R, palette: &Arc<Palette>, max_dim: usize, max_arity: usize) -> ColoredOperad {
    let complexes = (0..palette.len()).map(|_| ChainComplex::concentrated(rng.gen_range(1..=max_dim))).collect();
    let family = ColoredFamily::new(palette, complexes).expect("one space per color");
    forget_to_operad(&EndoProp::new(family).expect("degree 0"), max_arity).expect("endomorphism operad")
}
