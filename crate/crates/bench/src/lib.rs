//! Shared fixtures for the benchmark suite.

use cprop::bimodule::Component;
use cprop::graph::{parse, Expression, Generator, Signature};
use cprop::profile::{Palette, Profile};
use cprop::{samples, ChainComplex, Matrix};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// One color `c` and a binary generator `mu`.
pub fn binary_signature() -> Signature {
    let p = Palette::new(["c"]).expect("palette");
    let prof = |n: usize| Profile::from_names(&p, &vec!["c"; n]).expect("profile");
    Signature::new(&p, vec![Generator::new("mu", prof(1), prof(2), 0).expect("generator")]).expect("signature")
}

/// A four-vertex composite over the A∞ signature.
pub fn sample_expression() -> (Signature, Expression) {
    let sig = samples::a_infinity().signature;
    let e = parse("[2 1] . (m * m) o (m3 * i * i * i)", &sig).expect("expression");
    (sig, e)
}

/// Two one-colored components meeting in arity `k`.
pub fn tensor_pair(k: usize, max_dim: usize) -> (Component, Component) {
    let p = Palette::new(["a"]).expect("palette");
    let key = |n: usize| Profile::from_names(&p, &vec!["a"; n]).expect("profile").orbit_key();
    let mut r = rng(1);
    (samples::component(&mut r, &key(2), &key(k), max_dim), samples::component(&mut r, &key(k), &key(1), max_dim))
}

/// A two-colored pair for `⊡`.
pub fn dot_pair() -> (Component, Component) {
    let p = Palette::new(["a", "b"]).expect("palette");
    let key = |s: &[&str]| Profile::from_names(&p, s).expect("profile").orbit_key();
    let mut r = rng(2);
    (samples::component(&mut r, &key(&["a", "b"]), &key(&["a"]), 3), samples::component(&mut r, &key(&["a"]), &key(&["a", "b"]), 3))
}

pub fn complex(total: usize) -> ChainComplex {
    samples::complex(&mut rng(3), total, 4)
}

pub fn square_matrix(n: usize) -> Matrix {
    samples::matrix(&mut rng(4), n, n)
}
