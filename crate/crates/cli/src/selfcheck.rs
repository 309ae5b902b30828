//! Randomized consistency suites driven by `--seed`.

use cprop::bimodule::box_dot;
use cprop::chain::{path_object, ChainMap};
use cprop::graph::{graphs_compare, validate_presentation, Expression, Signature};
use cprop::matrix::Matrix;
use cprop::profile::Profile;
use cprop::samples;
use cprop::Result;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::json;

use crate::{Report, Status};

fn random_signature(r: &mut impl Rng) -> Signature {
    let colors = r.gen_range(1..=3);
    let extra = r.gen_range(1..=(4 - colors).max(1));
    samples::signature(r, colors, extra, 2)
}

fn random_profile(r: &mut impl Rng, sig: &Signature, max: usize) -> Profile {
    let n = r.gen_range(1..=max);
    samples::profile(r, sig.palette(), n)
}

/// `(f₁ ⊗ f₂) ∘ (g₁ ⊗ g₂) = ± (f₁ ∘ g₁) ⊗ (f₂ ∘ g₂)` with the Koszul sign
/// of `g₁` passing `f₂`.
fn interchange(r: &mut impl Rng) -> Result<bool> {
    let sig = random_signature(r);
    let (a1, a2) = (random_profile(r, &sig, 2), random_profile(r, &sig, 2));
    let f1 = samples::expression(r, &sig, &a1, 2);
    let f2 = samples::expression(r, &sig, &a2, 2);
    let g1 = samples::expression(r, &sig, &f1.input().clone(), 1);
    let g2 = samples::expression(r, &sig, &f2.input().clone(), 1);
    let sign = if g1.degree() % 2 == 1 && f2.degree() % 2 == 1 { -1 } else { 1 };
    let lhs = Expression::vert(Expression::horiz(f1.clone(), f2.clone())?, Expression::horiz(g1.clone(), g2.clone())?)?;
    let rhs = Expression::horiz(Expression::vert(f1, g1)?, Expression::vert(f2, g2)?)?;
    Ok(graphs_compare(&lhs, &rhs, &sig)? == Some(sign))
}

fn path_contract(r: &mut impl Rng) -> Result<bool> {
    let x = samples::complex(r, 12, 3);
    let po = path_object(&x);
    let id = ChainMap::identity(&x);
    let surjective = (1..x.len()).all(|n| Matrix::vstack(&[&po.d0.block(n as i64), &po.d1.block(n as i64)]).rank() == 2 * x.dim(n as i64));
    Ok(po.d0.compose(&po.s)? == id && po.d1.compose(&po.s)? == id && po.s.classify()?.acyclic_cofibration && surjective)
}

/// `dim(X ⊡ Y) = [G : H] · dim X · dim Y`.
fn kan_dimension(r: &mut impl Rng) -> Result<bool> {
    let palette = cprop::Palette::new(["a", "b"])?;
    let keys: Vec<_> = (0..4).map(|_| samples::orbit_key(r, &palette, 2)).collect();
    let x = samples::component(r, &keys[0], &keys[1], 2);
    let y = samples::component(r, &keys[2], &keys[3], 2);
    let (z, _) = box_dot(&x, &y)?;
    let whole = |a: &Profile, b: &Profile| -> Result<u128> { Ok(a.concat(b)?.orbit_key().stabilizer_order()) };
    let g = whole(keys[0].rep(), keys[2].rep())? * whole(keys[1].rep(), keys[3].rep())?;
    let h: u128 = keys.iter().map(|k| k.stabilizer_order()).product();
    Ok(z.dim() as u128 * h == g * (x.dim() * y.dim()) as u128)
}

type Suite = fn(&mut ChaCha8Rng) -> Result<bool>;

pub(crate) fn run(seed: u64, trials: usize) -> Result<Report> {
    let suites: [(&str, Suite); 3] = [("interchange", interchange), ("path_object", path_contract), ("kan_dimension", kan_dimension)];
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut results = Vec::new();
    let mut lines = Vec::new();
    let mut all = true;
    for (name, suite) in suites {
        let mut passed = 0;
        for _ in 0..trials {
            if suite(&mut rng)? {
                passed += 1;
            }
        }
        all &= passed == trials;
        lines.push(format!("{name}: {passed}/{trials}"));
        results.push(json!({"suite": name, "passed": passed, "trials": trials}));
    }
    let presentation_ok = validate_presentation(&samples::a_infinity()).is_valid();
    all &= presentation_ok;
    lines.push(format!("a_infinity presentation: {}", if presentation_ok { "valid" } else { "invalid" }));
    let mut rep = Report::new(if all { Status::Ok } else { Status::False }).field("seed", seed).field("suites", results);
    rep.lines = lines;
    Ok(rep)
}
