use cprop::algebra::{check_algebra, check_morphism, factor_algebra, transfer as transfer_structure, AlgebraStructure, Direction};
use cprop::bimodule::{box_h, box_v, ColoredBimodule};
use cprop::chain::{path_object as build_path_object, ChainComplex, ChainMap};
use cprop::endo::{ColoredFamily, FamilyMap};
use cprop::format::{encode, graph_value, Document, Loader};
use cprop::graph::{free_component_dim, graphs_compare, parse, validate_presentation, PropGraph, PropPresentation, Signature};
use cprop::matrix::Matrix;
use cprop::operad::{algebra_round_trip, check_operad_algebra, check_unit_identity, prop_from_operad, ColoredOperad, OperadAlgebra};
use cprop::profile::{Palette, Profile};
use cprop::samples;
use cprop::{Error, FormatError, Result};
use serde_json::{json, Value};
use std::sync::Arc;

use crate::{Context, Report, Status, TransferDirection};

/// A file path, or inline JSON when the argument starts with `{`.
fn load(ctx: &Context, arg: &str) -> Result<Document> {
    if arg.trim_start().starts_with('{') {
        let v = Loader::parse_json(arg, "<argument>")?;
        ctx.loader.decode(&v)
    } else {
        ctx.loader.load(arg)
    }
}

fn wrong_kind(expected: &str, found: &Document) -> Error {
    Error::Format(FormatError::Kind { expected: expected.into(), found: found.kind().into() })
}

macro_rules! expect {
    ($ctx:expr, $arg:expr, $kind:literal, $pat:pat => $out:expr) => {
        match load($ctx, $arg)? {
            $pat => $out,
            other => return Err(wrong_kind($kind, &other)),
        }
    };
}

fn complex(ctx: &Context, arg: &str) -> Result<ChainComplex> {
    Ok(expect!(ctx, arg, "complex", Document::Complex(x) => x))
}

fn chain_map(ctx: &Context, arg: &str) -> Result<ChainMap> {
    Ok(expect!(ctx, arg, "chain_map", Document::ChainMap(f) => f))
}

fn bimodule(ctx: &Context, arg: &str) -> Result<ColoredBimodule> {
    Ok(expect!(ctx, arg, "bimodule", Document::Bimodule(b) => b))
}

fn family(ctx: &Context, arg: &str) -> Result<ColoredFamily> {
    Ok(expect!(ctx, arg, "family", Document::Family(f) => f))
}

fn family_map(ctx: &Context, arg: &str) -> Result<FamilyMap> {
    Ok(expect!(ctx, arg, "family_map", Document::FamilyMap(f) => f))
}

fn structure(ctx: &Context, arg: &str) -> Result<AlgebraStructure> {
    Ok(expect!(ctx, arg, "structure", Document::Structure(a) => a))
}

fn presentation(ctx: &Context, arg: &str) -> Result<PropPresentation> {
    Ok(expect!(ctx, arg, "presentation", Document::Presentation(p) => p))
}

fn operad(ctx: &Context, arg: &str) -> Result<ColoredOperad> {
    Ok(expect!(ctx, arg, "operad", Document::Operad(o) => o))
}

/// A signature, or the signature of a presentation or structure.
fn signature_of(ctx: &Context, arg: &str) -> Result<Signature> {
    Ok(match load(ctx, arg)? {
        Document::Signature(s) => s,
        Document::Presentation(p) => p.signature,
        Document::Structure(a) => a.presentation().signature.clone(),
        other => return Err(wrong_kind("signature", &other)),
    })
}

fn expression_signature(ctx: &Context) -> Result<Signature> {
    match &ctx.signature {
        Some(arg) => signature_of(ctx, arg),
        None => Ok(samples::a_infinity().signature),
    }
}

/// `c,d,c`, or a length when there is a single color.
fn profile_arg(palette: &Arc<Palette>, s: &str) -> Result<Profile> {
    if let Ok(n) = s.trim().parse::<usize>() {
        if palette.len() == 1 {
            let c = palette.colors()[0].as_str();
            return Profile::from_names(palette, &vec![c; n]);
        }
    }
    let names: Vec<&str> = s.split(',').map(str::trim).filter(|n| !n.is_empty()).collect();
    Profile::from_names(palette, &names)
}

fn yes(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

pub(crate) fn check(ctx: &Context, file: &str) -> Result<Report> {
    let doc = load(ctx, file)?;
    let kind = doc.kind();
    let report = match &doc {
        Document::Presentation(p) => {
            let r = validate_presentation(p);
            let mut rep = Report::verdict(r.is_valid()).field("failures", r.failures.clone());
            rep = r.failures.iter().fold(rep, |rep, f| rep.line(format!("fails: {f}")));
            rep
        }
        Document::Operad(o) => {
            let r = o.check_axioms(ctx.seed);
            let rep = Report::verdict(r.failures.is_empty())
                .field("checked", r.checked)
                .field("exhaustive", r.exhaustive)
                .field("failures", r.failures.clone())
                .line(format!("operad axioms checked on {} {}", r.checked, if r.exhaustive { "basis tuples" } else { "sampled tuples" }));
            r.failures.iter().fold(rep, |rep, f| rep.line(format!("fails: {f}")))
        }
        _ => Report::new(Status::Ok),
    };
    let status = if report.status == Status::Ok { "valid" } else { "invalid" };
    Ok(report.field("document", kind).line(format!("{status} {kind}")))
}

pub(crate) fn normalize(ctx: &Context, text: &str) -> Result<Report> {
    let sig = expression_signature(ctx)?;
    let e = parse(text, &sig)?;
    let (g, odd) = PropGraph::from_expression(&e, &sig).canonical(&sig);
    let sign = if odd { -1 } else { 1 };
    Ok(Report::new(Status::Ok).field("sign", sign).document(graph_value(&g)).line(format!("sign {sign:+}")))
}

pub(crate) fn eq(ctx: &Context, lhs: &str, rhs: &str) -> Result<Report> {
    let sig = expression_signature(ctx)?;
    let (a, b) = (parse(lhs, &sig)?, parse(rhs, &sig)?);
    Ok(match graphs_compare(&a, &b, &sig) {
        Ok(Some(1)) => Report::new(Status::Ok).field("equal", true).line("equal"),
        Ok(Some(_)) => Report::new(Status::False).field("equal", false).field("sign", -1).line("not equal: same graph with opposite sign"),
        Ok(None) => Report::new(Status::False).field("equal", false).line("not equal: different canonical graphs"),
        Err(Error::ProfileMismatch { left, right }) => {
            Report::new(Status::False).field("equal", false).line(format!("not equal: profiles {left} and {right} differ"))
        }
        Err(e) => return Err(e),
    })
}

pub(crate) fn dim_free(ctx: &Context, sig: &str, out: &str, input: &str, k: usize) -> Result<Report> {
    let sig = signature_of(ctx, sig)?;
    let (o, i) = (profile_arg(sig.palette(), out)?, profile_arg(sig.palette(), input)?);
    let dim = free_component_dim(&sig, &o, &i, k)?;
    Ok(Report::new(Status::Ok)
        .field("dimension", dim)
        .field("max_vertices", k)
        .field("out", o.names())
        .field("in", i.names())
        .line(dim.to_string()))
}

pub(crate) fn boxes(ctx: &Context, p: &str, q: &str, vertical: bool) -> Result<Report> {
    let (p, q) = (bimodule(ctx, p)?, bimodule(ctx, q)?);
    let b = if vertical { box_v(&p, &q)?.bimodule } else { box_h(&p, &q)?.bimodule };
    let components = b.components().count();
    Ok(Report::new(Status::Ok).field("components", components).document(encode(&Document::Bimodule(b))))
}

pub(crate) fn homology(ctx: &Context, x: &str) -> Result<Report> {
    let h = complex(ctx, x)?.homology_dims();
    let mut rep = Report::new(Status::Ok).field("homology", h.clone());
    if h.is_empty() {
        rep = rep.line("H = 0");
    }
    Ok(h.iter().enumerate().fold(rep, |rep, (n, d)| rep.line(format!("H{n} = {d}"))))
}

pub(crate) fn classify(ctx: &Context, f: &str) -> Result<Report> {
    let c = chain_map(ctx, f)?.classify()?;
    let flags = [
        ("quasi_iso", c.quasi_iso),
        ("fibration", c.fibration),
        ("cofibration", c.cofibration),
        ("acyclic_fibration", c.acyclic_fibration),
        ("acyclic_cofibration", c.acyclic_cofibration),
    ];
    Ok(flags.iter().fold(Report::new(Status::Ok), |rep, &(name, v)| rep.field(name, v).line(format!("{name}: {}", yes(v)))))
}

fn chain_map_json(f: &ChainMap) -> Value {
    encode(&Document::ChainMap(f.clone()))
}

pub(crate) fn path_object(ctx: &Context, x: &str) -> Result<Report> {
    let x = complex(ctx, x)?;
    let po = build_path_object(&x);
    let id = ChainMap::identity(&x);
    let d0s = po.d0.compose(&po.s)? == id;
    let d1s = po.d1.compose(&po.s)? == id;
    let s_class = po.s.classify()?;
    let surjective = (1..x.len()).all(|n| Matrix::vstack(&[&po.d0.block(n as i64), &po.d1.block(n as i64)]).rank() == 2 * x.dim(n as i64));
    let holds = d0s && d1s && s_class.acyclic_cofibration && surjective;
    Ok(Report::verdict(holds)
        .field("path", encode(&Document::Complex(po.path.clone())))
        .field("s", chain_map_json(&po.s))
        .field("d0", chain_map_json(&po.d0))
        .field("d1", chain_map_json(&po.d1))
        .field("d0_s_identity", d0s)
        .field("d1_s_identity", d1s)
        .field("s_acyclic_cofibration", s_class.acyclic_cofibration)
        .field("projection_surjective", surjective)
        .line(format!("path dims {:?}", po.path.dims()))
        .line(format!("d0 s = id: {}", yes(d0s)))
        .line(format!("d1 s = id: {}", yes(d1s)))
        .line(format!("s acyclic cofibration: {}", yes(s_class.acyclic_cofibration)))
        .line(format!("(d0, d1) surjective above degree 0: {}", yes(surjective))))
}

fn failures_report(failures: Vec<String>) -> Report {
    let rep = Report::verdict(failures.is_empty()).field("failures", failures.clone());
    let rep = failures.iter().fold(rep, |rep, f| rep.line(format!("fails: {f}")));
    if failures.is_empty() {
        rep.line("holds")
    } else {
        rep
    }
}

pub(crate) fn algebra_check(ctx: &Context, a: &str) -> Result<Report> {
    match load(ctx, a)? {
        Document::Structure(a) => Ok(failures_report(check_algebra(&a)?.failures.into_iter().map(|r| r.what).collect())),
        Document::OperadAlgebra(o, a) => Ok(failures_report(check_operad_algebra(&o, &a)?)),
        other => Err(wrong_kind("structure", &other)),
    }
}

fn morphism_report(f: &FamilyMap, ax: &AlgebraStructure, ay: &AlgebraStructure) -> Result<Report> {
    Ok(match check_morphism(f, ax, ay)? {
        Ok(_) => Report::new(Status::Ok).field("morphism", true).line("morphism"),
        Err(fail) => Report::new(Status::False)
            .field("morphism", false)
            .field("generator", fail.generator.clone())
            .line(format!("not a morphism: square for {} does not commute", fail.generator)),
    })
}

pub(crate) fn morphism_check(ctx: &Context, f: &str, ax: &str, ay: &str) -> Result<Report> {
    morphism_report(&family_map(ctx, f)?, &structure(ctx, ax)?, &structure(ctx, ay)?)
}

/// Independent re-verification of a computed structure.
fn verified(result: &AlgebraStructure, morphisms: &[(&FamilyMap, &AlgebraStructure, &AlgebraStructure)]) -> Result<bool> {
    if !check_algebra(result)?.is_valid() {
        return Ok(false);
    }
    for (f, x, y) in morphisms {
        if check_morphism(f, x, y)?.is_err() {
            return Ok(false);
        }
    }
    Ok(true)
}

pub(crate) fn transfer(ctx: &Context, p: &str, f: &str, dir: TransferDirection, src: &str) -> Result<Report> {
    let (p, f, given) = (presentation(ctx, p)?, family_map(ctx, f)?, structure(ctx, src)?);
    let direction = match dir {
        TransferDirection::Fibration => Direction::AlongAcyclicFibration,
        TransferDirection::Cofibration => Direction::AlongAcyclicCofibration,
    };
    let built = transfer_structure(&p, &f, direction, &given)?;
    let ok = match dir {
        TransferDirection::Fibration => verified(&built, &[(&f, &built, &given)])?,
        TransferDirection::Cofibration => verified(&built, &[(&f, &given, &built)])?,
    };
    Ok(Report::verdict(ok).field("verified", ok).document(encode(&Document::Structure(built))))
}

pub(crate) fn factor(ctx: &Context, g: &str, i: &str, p: &str, b: &str) -> Result<Report> {
    let (map, source, target) = expect!(ctx, g, "algebra_morphism", Document::AlgebraMorphism { map, source, target } => (map, source, target));
    let (i, p, b) = (family_map(ctx, i)?, family_map(ctx, p)?, family(ctx, b)?);
    if i.target() != &b || p.source() != &b {
        return Err(Error::Shape("i and p must factor through the given family".into()));
    }
    let built = factor_algebra(&map, &source, &target, &i, &p)?;
    let ok = verified(&built, &[(&i, &source, &built), (&p, &built, &target)])?;
    Ok(Report::verdict(ok).field("verified", ok).document(encode(&Document::Structure(built))))
}

pub(crate) fn operad_to_prop(ctx: &Context, o: &str, k: usize) -> Result<Report> {
    let o = operad(ctx, o)?;
    let prop = prop_from_operad(&o, k)?;
    let mut rep = Report::new(Status::Ok);
    let mut comps = Vec::new();
    for c in prop.bimodule().components() {
        let (out, input) = (c.out_key().rep(), c.in_key().rep());
        comps.push(json!({"out": out.names(), "in": input.names(), "dim": c.dim()}));
        rep = rep.line(format!("{} <- {}: {}", out.display(), input.display(), c.dim()));
    }
    rep = rep.field("components", comps);
    if k >= o.max_arity() {
        let u = check_unit_identity(&o, k)?;
        rep.status = if u.is_identity() { Status::Ok } else { Status::False };
        rep = rep
            .field("unit_identity", u.is_identity())
            .field("mismatches", u.mismatches.clone())
            .line(format!("underlying operad equals input: {}", yes(u.is_identity())));
        rep = u.mismatches.iter().fold(rep, |rep, m| rep.line(format!("fails: {m}")));
    } else {
        rep = rep.field("unit_identity", Value::Null).line("underlying operad not compared: truncation below the arity bound");
    }
    Ok(rep)
}

/// `l` is an `operad_algebra` document or a bare array of images.
fn operad_algebra(ctx: &Context, o: &ColoredOperad, x: &ColoredFamily, l: &str) -> Result<OperadAlgebra> {
    let v = if l.trim_start().starts_with('[') || l.trim_start().starts_with('{') { Loader::parse_json(l, "<argument>")? } else { ctx.loader.read_value(l)? };
    let (o_v, x_v) = (encode(&Document::Operad(o.clone())), encode(&Document::Family(x.clone())));
    let images = match &v {
        Value::Array(_) => v.clone(),
        _ => {
            let (lo, la) = match ctx.loader.decode(&v)? {
                Document::OperadAlgebra(lo, la) => (lo, la),
                other => return Err(wrong_kind("operad_algebra", &other)),
            };
            if encode(&Document::Operad(lo)) != o_v || encode(&Document::Family(la.family().clone())) != x_v {
                return Err(Error::Precondition("the algebra is over a different operad or family".into()));
            }
            v.get("images").cloned().unwrap_or(Value::Null)
        }
    };
    let combined = json!({"kind": "operad_algebra", "operad": o_v, "family": x_v, "images": images});
    Ok(ctx.loader.operad_algebra(&combined, "")?.1)
}

pub(crate) fn round_trip(ctx: &Context, o: &str, x: &str, l: &str, limit: usize) -> Result<Report> {
    let (o, x) = (operad(ctx, o)?, family(ctx, x)?);
    let a = operad_algebra(ctx, &o, &x, l)?;
    let r = algebra_round_trip(&o, &a, o.max_arity(), limit)?;
    let mut rep = Report::verdict(r.is_identity())
        .field("checked", r.checked)
        .field("algebra_failures", r.algebra_failures.clone())
        .field("psi_phi_failures", r.psi_phi_failures.clone())
        .field("morphism_failures", r.morphism_failures.clone())
        .line(format!("{} checks", r.checked))
        .line(format!("round trip is the identity: {}", yes(r.is_identity())));
    for f in r.algebra_failures.iter().chain(&r.psi_phi_failures).chain(&r.morphism_failures) {
        rep = rep.line(format!("fails: {f}"));
    }
    Ok(rep)
}
