//! The JSON interchange format.
//!
//! Every object carries a `kind`. Rationals are strings `"p/q"` in lowest
//! terms, profiles are arrays of color names, matrices are arrays of rows.
//! Keys are emitted in sorted order, so rendering a loaded document
//! reproduces the file byte for byte once it is in canonical form. Any
//! nested object may be replaced by a path, resolved against the loader's
//! root directory.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use serde_json::{json, Map, Value};

use crate::algebra::AlgebraStructure;
use crate::bimodule::{ColoredBimodule, Component};
use crate::chain::{ChainComplex, ChainMap};
use crate::endo::{ColoredFamily, EndoElement, FamilyMap};
use crate::error::{Error, FormatError, Result};
use crate::graph::{parse, CanonicalGraph, Generator, PropPresentation, Signature};
use crate::matrix::Matrix;
use crate::operad::{ColoredOperad, GammaKey, OperadAlgebra};
use crate::profile::{Color, OrbitKey, Palette, Profile};
use crate::rational::{format_q, parse_q, Q};

/// Any object the format can hold.
#[derive(Clone, Debug)]
pub enum Document {
    Palette(Arc<Palette>),
    Signature(Signature),
    Presentation(PropPresentation),
    Complex(ChainComplex),
    ChainMap(ChainMap),
    Bimodule(ColoredBimodule),
    Family(ColoredFamily),
    FamilyMap(FamilyMap),
    Structure(AlgebraStructure),
    Operad(ColoredOperad),
    OperadAlgebra(ColoredOperad, OperadAlgebra),
    Graph(CanonicalGraph),
    /// A family map together with the structures on its ends.
    AlgebraMorphism { map: FamilyMap, source: AlgebraStructure, target: AlgebraStructure },
}

impl Document {
    pub fn kind(&self) -> &'static str {
        match self {
            Document::Palette(_) => "palette",
            Document::Signature(_) => "signature",
            Document::Presentation(_) => "presentation",
            Document::Complex(_) => "complex",
            Document::ChainMap(_) => "chain_map",
            Document::Bimodule(_) => "bimodule",
            Document::Family(_) => "family",
            Document::FamilyMap(_) => "family_map",
            Document::Structure(_) => "structure",
            Document::Operad(_) => "operad",
            Document::OperadAlgebra(..) => "operad_algebra",
            Document::Graph(_) => "graph",
            Document::AlgebraMorphism { .. } => "algebra_morphism",
        }
    }
}

fn invalid(at: &str, msg: impl std::fmt::Display) -> Error {
    let at = if at.is_empty() { "document" } else { at };
    Error::Format(FormatError::Invalid(format!("{at}: {msg}")))
}

fn sub(at: &str, field: &str) -> String {
    if at.is_empty() {
        field.to_string()
    } else {
        format!("{at}.{field}")
    }
}

fn idx(at: &str, i: usize) -> String {
    format!("{at}[{i}]")
}

// ---- encoding ----

pub fn q_value(x: &Q) -> Value {
    Value::String(format_q(x))
}

pub fn matrix_value(m: &Matrix) -> Value {
    Value::Array((0..m.rows()).map(|i| Value::Array(m.row(i).iter().map(q_value).collect())).collect())
}

pub fn profile_value(p: &Profile) -> Value {
    json!(p.names())
}

fn colors_value(p: &Palette) -> Value {
    json!(p.colors())
}

fn complex_value(x: &ChainComplex) -> Value {
    json!({
        "kind": "complex",
        "dims": x.dims(),
        "d": (1..x.len()).map(|n| matrix_value(&x.d(n as i64))).collect::<Vec<_>>(),
    })
}

fn blocks_value(f: &ChainMap) -> Value {
    Value::Array(f.blocks().iter().map(matrix_value).collect())
}

fn chain_map_value(f: &ChainMap) -> Value {
    json!({
        "kind": "chain_map",
        "source": complex_value(f.source()),
        "target": complex_value(f.target()),
        "degree": f.degree(),
        "blocks": blocks_value(f),
    })
}

fn signature_value(s: &Signature) -> Value {
    let gens: Vec<Value> = s
        .generators()
        .iter()
        .map(|g| json!({"name": g.name(), "out": profile_value(g.out()), "in": profile_value(g.input()), "degree": g.degree()}))
        .collect();
    json!({"kind": "signature", "colors": colors_value(s.palette()), "generators": gens})
}

fn presentation_value(p: &PropPresentation) -> Value {
    let delta: Map<String, Value> = p
        .delta
        .iter()
        .map(|(name, terms)| {
            let ts: Vec<Value> = terms.iter().map(|(c, e)| json!({"coefficient": q_value(c), "expression": e.to_string()})).collect();
            (name.clone(), Value::Array(ts))
        })
        .collect();
    let relations: Vec<Value> = p.relations.iter().map(|(a, b)| json!([a.to_string(), b.to_string()])).collect();
    json!({"kind": "presentation", "signature": signature_value(&p.signature), "delta": delta, "relations": relations})
}

fn bimodule_value(b: &ColoredBimodule) -> Value {
    let comps: Vec<Value> = b
        .components()
        .map(|c| {
            let acts = |gens: &[ChainMap]| Value::Array(gens.iter().map(blocks_value).collect());
            json!({
                "out": profile_value(c.out_key().rep()),
                "in": profile_value(c.in_key().rep()),
                "dims": c.carrier().dims(),
                "d": (1..c.carrier().len()).map(|n| matrix_value(&c.carrier().d(n as i64))).collect::<Vec<_>>(),
                "left": acts(c.left_generators()),
                "right": acts(c.right_generators()),
            })
        })
        .collect();
    json!({"kind": "bimodule", "colors": colors_value(b.palette()), "components": comps})
}

fn family_value(f: &ColoredFamily) -> Value {
    let complexes: Map<String, Value> = f.palette().colors().iter().zip(f.complexes()).map(|(c, x)| (c.clone(), complex_value(x))).collect();
    json!({"kind": "family", "colors": colors_value(f.palette()), "complexes": complexes})
}

fn family_map_value(f: &FamilyMap) -> Value {
    let maps: Map<String, Value> = f.source().palette().colors().iter().zip(f.maps()).map(|(c, m)| (c.clone(), blocks_value(m))).collect();
    json!({"kind": "family_map", "source": family_value(f.source()), "target": family_value(f.target()), "maps": maps})
}

pub fn endo_value(e: &EndoElement) -> Value {
    json!({"out": profile_value(e.out()), "in": profile_value(e.input()), "degree": e.degree(), "blocks": blocks_value(e.map())})
}

fn structure_value(a: &AlgebraStructure) -> Value {
    let images: Map<String, Value> = a.assignment().iter().map(|(n, e)| (n.clone(), endo_value(e))).collect();
    json!({"kind": "structure", "presentation": presentation_value(a.presentation()), "family": family_value(a.family()), "images": images})
}

fn operad_value(o: &ColoredOperad) -> Value {
    let palette = o.palette();
    let comps: Vec<Value> = o
        .support()
        .into_iter()
        .map(|(d, k)| {
            let c = o.component(d, &k).expect("support");
            let right: Vec<Value> = c.right_generators().iter().map(|g| matrix_value(&g.block(0))).collect();
            json!({"out": palette.name(d), "in": profile_value(k.rep()), "dim": c.dim(), "right": right})
        })
        .collect();
    let gamma: Vec<Value> = o
        .gamma()
        .iter()
        .map(|(k, m)| {
            let parts: Vec<Value> = k.parts.iter().map(|p| profile_value(p.rep())).collect();
            json!({"out": palette.name(k.out), "in": profile_value(k.input.rep()), "parts": parts, "matrix": matrix_value(m)})
        })
        .collect();
    json!({"kind": "operad", "colors": colors_value(palette), "max_arity": o.max_arity(), "components": comps, "gamma": gamma})
}

fn operad_algebra_value(o: &ColoredOperad, a: &OperadAlgebra) -> Value {
    let images: Vec<Value> = a
        .images()
        .iter()
        .map(|((d, k), m)| json!({"out": o.palette().name(*d), "in": profile_value(k.rep()), "matrix": matrix_value(m)}))
        .collect();
    json!({"kind": "operad_algebra", "operad": operad_value(o), "family": family_value(a.family()), "images": images})
}

pub fn graph_value(g: &CanonicalGraph) -> Value {
    json!({
        "kind": "graph",
        "vertices": g.vertices,
        "edges": g.edges.iter().map(|&(a, b, c, d)| json!([a, b, c, d])).collect::<Vec<_>>(),
        "inputs": g.inputs.iter().map(|&(v, p)| json!([v, p])).collect::<Vec<_>>(),
        "outputs": g.outputs.iter().map(|&(v, p)| json!([v, p])).collect::<Vec<_>>(),
    })
}

pub fn encode(doc: &Document) -> Value {
    match doc {
        Document::Palette(p) => json!({"kind": "palette", "colors": colors_value(p)}),
        Document::Signature(s) => signature_value(s),
        Document::Presentation(p) => presentation_value(p),
        Document::Complex(x) => complex_value(x),
        Document::ChainMap(f) => chain_map_value(f),
        Document::Bimodule(b) => bimodule_value(b),
        Document::Family(f) => family_value(f),
        Document::FamilyMap(f) => family_map_value(f),
        Document::Structure(a) => structure_value(a),
        Document::Operad(o) => operad_value(o),
        Document::OperadAlgebra(o, a) => operad_algebra_value(o, a),
        Document::Graph(g) => graph_value(g),
        Document::AlgebraMorphism { map, source, target } => json!({
            "kind": "algebra_morphism",
            "map": family_map_value(map),
            "source": structure_value(source),
            "target": structure_value(target),
        }),
    }
}

/// Pretty JSON with sorted keys and a trailing newline.
pub fn render_value(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("JSON values serialize");
    s.push('\n');
    s
}

pub fn render(doc: &Document) -> String {
    render_value(&encode(doc))
}

// ---- decoding ----

/// Reads documents, resolving string references relative to `root`.
#[derive(Clone, Debug, Default)]
pub struct Loader {
    root: Option<PathBuf>,
}

const MAX_DEPTH: usize = 32;

fn as_array<'a>(v: &'a Value, at: &str) -> Result<&'a Vec<Value>> {
    v.as_array().ok_or_else(|| invalid(at, "expected an array"))
}

fn as_usize(v: &Value, at: &str) -> Result<usize> {
    v.as_u64().map(|n| n as usize).ok_or_else(|| invalid(at, "expected a non-negative integer"))
}

fn as_i64(v: &Value, at: &str) -> Result<i64> {
    v.as_i64().ok_or_else(|| invalid(at, "expected an integer"))
}

fn as_str<'a>(v: &'a Value, at: &str) -> Result<&'a str> {
    v.as_str().ok_or_else(|| invalid(at, "expected a string"))
}

fn field<'a>(v: &'a Value, name: &str, at: &str) -> Result<&'a Value> {
    let obj = v.as_object().ok_or_else(|| invalid(at, "expected an object"))?;
    obj.get(name).ok_or_else(|| invalid(at, format!("missing field {name:?}")))
}

fn opt_field<'a>(v: &'a Value, name: &str) -> Option<&'a Value> {
    v.as_object().and_then(|o| o.get(name))
}

pub fn parse_rational(v: &Value, at: &str) -> Result<Q> {
    match v {
        Value::String(s) => parse_q(s).map_err(|e| invalid(at, e)),
        Value::Number(n) if n.is_i64() => Ok(Q::from_integer(n.as_i64().expect("checked").into())),
        _ => Err(invalid(at, "expected a rational string \"p/q\"")),
    }
}

pub fn parse_matrix(v: &Value, rows: usize, cols: usize, at: &str) -> Result<Matrix> {
    let rs = as_array(v, at)?;
    if rs.len() != rows {
        return Err(invalid(at, format!("expected {rows} rows, found {}", rs.len())));
    }
    let mut m = Matrix::zeros(rows, cols);
    for (i, r) in rs.iter().enumerate() {
        let at_r = idx(at, i);
        let entries = as_array(r, &at_r)?;
        if entries.len() != cols {
            return Err(invalid(&at_r, format!("expected {cols} entries, found {}", entries.len())));
        }
        for (j, e) in entries.iter().enumerate() {
            m.set(i, j, parse_rational(e, &idx(&at_r, j))?);
        }
    }
    Ok(m)
}

fn parse_palette(v: &Value, at: &str) -> Result<Arc<Palette>> {
    let names = as_array(field(v, "colors", at)?, &sub(at, "colors"))?;
    let names = names.iter().enumerate().map(|(i, n)| as_str(n, &idx(&sub(at, "colors"), i)).map(str::to_string)).collect::<Result<Vec<_>>>()?;
    Palette::new(names).map_err(|e| invalid(&sub(at, "colors"), e))
}

pub fn parse_profile(palette: &Arc<Palette>, v: &Value, at: &str) -> Result<Profile> {
    let names = as_array(v, at)?;
    let names = names.iter().enumerate().map(|(i, n)| as_str(n, &idx(at, i))).collect::<Result<Vec<_>>>()?;
    Profile::from_names(palette, &names).map_err(|e| invalid(at, e))
}

fn parse_color(palette: &Arc<Palette>, v: &Value, at: &str) -> Result<Color> {
    palette.index_of(as_str(v, at)?).map_err(|e| invalid(at, e))
}

fn check_kind(v: &Value, want: &str, at: &str) -> Result<()> {
    if let Some(k) = opt_field(v, "kind") {
        let found = as_str(k, &sub(at, "kind"))?;
        if found != want {
            return Err(Error::Format(FormatError::Kind { expected: want.into(), found: found.into() }));
        }
    }
    Ok(())
}

fn parse_carrier(v: &Value, at: &str) -> Result<ChainComplex> {
    let dims = as_array(field(v, "dims", at)?, &sub(at, "dims"))?;
    let dims = dims.iter().enumerate().map(|(i, d)| as_usize(d, &idx(&sub(at, "dims"), i))).collect::<Result<Vec<_>>>()?;
    let empty = Vec::new();
    let ds = match opt_field(v, "d") {
        Some(d) => as_array(d, &sub(at, "d"))?,
        None => &empty,
    };
    if ds.len() != dims.len().saturating_sub(1) {
        return Err(invalid(&sub(at, "d"), format!("expected {} boundary matrices, found {}", dims.len().saturating_sub(1), ds.len())));
    }
    let boundaries = ds.iter().enumerate().map(|(i, m)| parse_matrix(m, dims[i], dims[i + 1], &idx(&sub(at, "d"), i))).collect::<Result<Vec<_>>>()?;
    ChainComplex::new(dims, boundaries).map_err(|e| invalid(at, e))
}

fn parse_blocks(v: &Value, source: &ChainComplex, target: &ChainComplex, degree: i64, at: &str) -> Result<ChainMap> {
    let bs = as_array(v, at)?;
    if bs.len() != source.len() {
        return Err(invalid(at, format!("expected {} blocks, found {}", source.len(), bs.len())));
    }
    let blocks = bs
        .iter()
        .enumerate()
        .map(|(n, b)| parse_matrix(b, target.dim(n as i64 + degree), source.dim(n as i64), &idx(at, n)))
        .collect::<Result<Vec<_>>>()?;
    ChainMap::new(source.clone(), target.clone(), degree, blocks).map_err(|e| invalid(at, e))
}

impl Loader {
    pub fn new(root: Option<PathBuf>) -> Self {
        Loader { root }
    }

    pub fn root(&self) -> Option<&Path> {
        self.root.as_deref()
    }

    fn path_of(&self, name: &str) -> PathBuf {
        match &self.root {
            Some(r) => r.join(name),
            None => PathBuf::from(name),
        }
    }

    /// Parses JSON text, reporting line and column on failure.
    pub fn parse_json(text: &str, origin: &str) -> Result<Value> {
        serde_json::from_str(text).map_err(|e| Error::Format(FormatError::Json(format!("{origin}:{}:{}: {e}", e.line(), e.column()))))
    }

    pub fn read_value(&self, name: &str) -> Result<Value> {
        let path = self.path_of(name);
        let text = std::fs::read_to_string(&path).map_err(|e| Error::Format(FormatError::Invalid(format!("{}: {e}", path.display()))))?;
        Self::parse_json(&text, &path.display().to_string())
    }

    /// An inline object, or the contents of the file a string names.
    fn resolve(&self, v: &Value, depth: usize) -> Result<Value> {
        if depth > MAX_DEPTH {
            return Err(invalid("", "references nested too deeply"));
        }
        match v {
            Value::String(name) => {
                let inner = self.read_value(name)?;
                self.resolve(&inner, depth + 1).map_err(|e| match e {
                    Error::Format(FormatError::Invalid(m)) => Error::Format(FormatError::Invalid(format!("{name}: {m}"))),
                    other => other,
                })
            }
            _ => Ok(v.clone()),
        }
    }

    pub fn load(&self, name: &str) -> Result<Document> {
        let v = self.read_value(name)?;
        self.decode(&v).map_err(|e| match e {
            Error::Format(FormatError::Invalid(m)) => Error::Format(FormatError::Invalid(format!("{name}: {m}"))),
            other => other,
        })
    }

    pub fn decode(&self, v: &Value) -> Result<Document> {
        let v = self.resolve(v, 0)?;
        let kind = as_str(field(&v, "kind", "")?, "kind")?;
        Ok(match kind {
            "palette" => Document::Palette(parse_palette(&v, "")?),
            "signature" => Document::Signature(self.signature(&v, "")?),
            "presentation" => Document::Presentation(self.presentation(&v, "")?),
            "complex" => Document::Complex(self.complex(&v, "")?),
            "chain_map" => Document::ChainMap(self.chain_map(&v, "")?),
            "bimodule" => Document::Bimodule(self.bimodule(&v, "")?),
            "family" => Document::Family(self.family(&v, "")?),
            "family_map" => Document::FamilyMap(self.family_map(&v, "")?),
            "structure" => Document::Structure(self.structure(&v, "")?),
            "operad" => Document::Operad(self.operad(&v, "")?),
            "operad_algebra" => {
                let (o, a) = self.operad_algebra(&v, "")?;
                Document::OperadAlgebra(o, a)
            }
            "graph" => Document::Graph(self.graph(&v, "")?),
            "algebra_morphism" => {
                let map = self.family_map(field(&v, "map", "")?, "map")?;
                let source = self.structure(field(&v, "source", "")?, "source")?;
                let target = self.structure(field(&v, "target", "")?, "target")?;
                if map.source() != source.family() || map.target() != target.family() {
                    return Err(invalid("map", "does not go between the two structures' families"));
                }
                if source.presentation() != target.presentation() {
                    return Err(invalid("target", "structures use different presentations"));
                }
                Document::AlgebraMorphism { map, source, target }
            }
            other => return Err(invalid("kind", format!("unknown kind {other:?}"))),
        })
    }

    fn nested(&self, v: &Value, kind: &str, at: &str) -> Result<Value> {
        let r = self.resolve(v, 0)?;
        check_kind(&r, kind, at)?;
        Ok(r)
    }

    pub fn complex(&self, v: &Value, at: &str) -> Result<ChainComplex> {
        let v = self.nested(v, "complex", at)?;
        parse_carrier(&v, at)
    }

    pub fn chain_map(&self, v: &Value, at: &str) -> Result<ChainMap> {
        let v = self.nested(v, "chain_map", at)?;
        let source = self.complex(field(&v, "source", at)?, &sub(at, "source"))?;
        let target = self.complex(field(&v, "target", at)?, &sub(at, "target"))?;
        let degree = match opt_field(&v, "degree") {
            Some(d) => as_i64(d, &sub(at, "degree"))?,
            None => 0,
        };
        parse_blocks(field(&v, "blocks", at)?, &source, &target, degree, &sub(at, "blocks"))
    }

    pub fn signature(&self, v: &Value, at: &str) -> Result<Signature> {
        let v = self.nested(v, "signature", at)?;
        let palette = parse_palette(&v, at)?;
        let gat = sub(at, "generators");
        let gens = as_array(field(&v, "generators", at)?, &gat)?
            .iter()
            .enumerate()
            .map(|(i, g)| {
                let a = idx(&gat, i);
                let name = as_str(field(g, "name", &a)?, &sub(&a, "name"))?;
                let out = parse_profile(&palette, field(g, "out", &a)?, &sub(&a, "out"))?;
                let input = parse_profile(&palette, field(g, "in", &a)?, &sub(&a, "in"))?;
                let degree = match opt_field(g, "degree") {
                    Some(d) => as_usize(d, &sub(&a, "degree"))? as u32,
                    None => 0,
                };
                Generator::new(name, out, input, degree).map_err(|e| invalid(&a, e))
            })
            .collect::<Result<Vec<_>>>()?;
        Signature::new(&palette, gens).map_err(|e| invalid(&gat, e))
    }

    pub fn presentation(&self, v: &Value, at: &str) -> Result<PropPresentation> {
        let v = self.nested(v, "presentation", at)?;
        let signature = self.signature(field(&v, "signature", at)?, &sub(at, "signature"))?;
        let mut delta = BTreeMap::new();
        if let Some(d) = opt_field(&v, "delta") {
            let dat = sub(at, "delta");
            let obj = d.as_object().ok_or_else(|| invalid(&dat, "expected an object"))?;
            for (name, terms) in obj {
                let nat = sub(&dat, name);
                let terms = as_array(terms, &nat)?
                    .iter()
                    .enumerate()
                    .map(|(i, t)| {
                        let a = idx(&nat, i);
                        let c = parse_rational(field(t, "coefficient", &a)?, &sub(&a, "coefficient"))?;
                        let text = as_str(field(t, "expression", &a)?, &sub(&a, "expression"))?;
                        let e = parse(text, &signature).map_err(|e| invalid(&sub(&a, "expression"), e))?;
                        Ok((c, e))
                    })
                    .collect::<Result<Vec<_>>>()?;
                delta.insert(name.clone(), terms);
            }
        }
        let mut relations = Vec::new();
        if let Some(r) = opt_field(&v, "relations") {
            let rat = sub(at, "relations");
            for (i, pair) in as_array(r, &rat)?.iter().enumerate() {
                let a = idx(&rat, i);
                let pair = as_array(pair, &a)?;
                if pair.len() != 2 {
                    return Err(invalid(&a, "a relation is a pair of expressions"));
                }
                let lhs = parse(as_str(&pair[0], &a)?, &signature).map_err(|e| invalid(&idx(&a, 0), e))?;
                let rhs = parse(as_str(&pair[1], &a)?, &signature).map_err(|e| invalid(&idx(&a, 1), e))?;
                relations.push((lhs, rhs));
            }
        }
        PropPresentation::new(signature, delta, relations).map_err(|e| invalid(at, e))
    }

    pub fn bimodule(&self, v: &Value, at: &str) -> Result<ColoredBimodule> {
        let v = self.nested(v, "bimodule", at)?;
        let palette = parse_palette(&v, at)?;
        let mut b = ColoredBimodule::new(&palette);
        let cat = sub(at, "components");
        for (i, c) in as_array(field(&v, "components", at)?, &cat)?.iter().enumerate() {
            let a = idx(&cat, i);
            let out = parse_profile(&palette, field(c, "out", &a)?, &sub(&a, "out"))?;
            let input = parse_profile(&palette, field(c, "in", &a)?, &sub(&a, "in"))?;
            let (ok, ik) = (out.orbit_key(), input.orbit_key());
            if &out != ok.rep() || &input != ik.rep() {
                return Err(invalid(&a, "components are keyed by sorted profiles"));
            }
            let carrier = parse_carrier(c, &a)?;
            let acts = |name: &str| -> Result<Vec<ChainMap>> {
                let sat = sub(&a, name);
                match opt_field(c, name) {
                    Some(list) => as_array(list, &sat)?.iter().enumerate().map(|(j, g)| parse_blocks(g, &carrier, &carrier, 0, &idx(&sat, j))).collect(),
                    None => Ok(Vec::new()),
                }
            };
            let (left, right) = (acts("left")?, acts("right")?);
            let comp = Component::new(ok, ik, carrier, left, right).map_err(|e| invalid(&a, e))?;
            if b.get(comp.out_key(), comp.in_key()).is_some() {
                return Err(invalid(&a, "duplicate component"));
            }
            b.insert(comp).map_err(|e| invalid(&a, e))?;
        }
        Ok(b)
    }

    pub fn family(&self, v: &Value, at: &str) -> Result<ColoredFamily> {
        let v = self.nested(v, "family", at)?;
        let palette = parse_palette(&v, at)?;
        let cat = sub(at, "complexes");
        let complexes = field(&v, "complexes", at)?;
        let xs = palette
            .colors()
            .iter()
            .map(|c| {
                let x = opt_field(complexes, c).ok_or_else(|| invalid(&cat, format!("no complex for color {c:?}")))?;
                self.complex(x, &sub(&cat, c))
            })
            .collect::<Result<Vec<_>>>()?;
        ColoredFamily::new(&palette, xs).map_err(|e| invalid(at, e))
    }

    pub fn family_map(&self, v: &Value, at: &str) -> Result<FamilyMap> {
        let v = self.nested(v, "family_map", at)?;
        let source = self.family(field(&v, "source", at)?, &sub(at, "source"))?;
        let target = self.family(field(&v, "target", at)?, &sub(at, "target"))?;
        if source.palette() != target.palette() {
            return Err(invalid(at, Error::PaletteMismatch));
        }
        let mat = sub(at, "maps");
        let maps_v = field(&v, "maps", at)?;
        let maps = source
            .palette()
            .colors()
            .iter()
            .enumerate()
            .map(|(i, c)| {
                let m = opt_field(maps_v, c).ok_or_else(|| invalid(&mat, format!("no map for color {c:?}")))?;
                let color = Color(i as u16);
                parse_blocks(m, source.get(color), target.get(color), 0, &sub(&mat, c))
            })
            .collect::<Result<Vec<_>>>()?;
        FamilyMap::new(source, target, maps).map_err(|e| invalid(at, e))
    }

    pub fn endo_element(&self, family: &ColoredFamily, v: &Value, at: &str) -> Result<EndoElement> {
        let palette = family.palette();
        let out = parse_profile(palette, field(v, "out", at)?, &sub(at, "out"))?;
        let input = parse_profile(palette, field(v, "in", at)?, &sub(at, "in"))?;
        let degree = match opt_field(v, "degree") {
            Some(d) => as_i64(d, &sub(at, "degree"))?,
            None => 0,
        };
        let f = parse_blocks(field(v, "blocks", at)?, &family.tensor(&input), &family.tensor(&out), degree, &sub(at, "blocks"))?;
        EndoElement::new(family, out, input, f).map_err(|e| invalid(at, e))
    }

    pub fn structure(&self, v: &Value, at: &str) -> Result<AlgebraStructure> {
        let v = self.nested(v, "structure", at)?;
        let presentation = self.presentation(field(&v, "presentation", at)?, &sub(at, "presentation"))?;
        let family = self.family(field(&v, "family", at)?, &sub(at, "family"))?;
        let iat = sub(at, "images");
        let obj = field(&v, "images", at)?.as_object().ok_or_else(|| invalid(&iat, "expected an object"))?;
        let mut images = BTreeMap::new();
        for (name, e) in obj {
            images.insert(name.clone(), self.endo_element(&family, e, &sub(&iat, name))?);
        }
        AlgebraStructure::new(presentation, family, images).map_err(|e| invalid(at, e))
    }

    pub fn operad(&self, v: &Value, at: &str) -> Result<ColoredOperad> {
        let v = self.nested(v, "operad", at)?;
        let palette = parse_palette(&v, at)?;
        let max_arity = as_usize(field(&v, "max_arity", at)?, &sub(at, "max_arity"))?;
        let cat = sub(at, "components");
        let mut components = Vec::new();
        for (i, c) in as_array(field(&v, "components", at)?, &cat)?.iter().enumerate() {
            let a = idx(&cat, i);
            let d = parse_color(&palette, field(c, "out", &a)?, &sub(&a, "out"))?;
            let input = parse_profile(&palette, field(c, "in", &a)?, &sub(&a, "in"))?;
            let key = input.orbit_key();
            if &input != key.rep() {
                return Err(invalid(&sub(&a, "in"), "components are keyed by sorted profiles"));
            }
            let dim = as_usize(field(c, "dim", &a)?, &sub(&a, "dim"))?;
            let rat = sub(&a, "right");
            let right = match opt_field(c, "right") {
                Some(list) => as_array(list, &rat)?.iter().enumerate().map(|(j, m)| parse_matrix(m, dim, dim, &idx(&rat, j))).collect::<Result<Vec<_>>>()?,
                None => Vec::new(),
            };
            let out_key = Profile::new(&palette, vec![d]).expect("color").orbit_key();
            components.push(Component::from_matrices(out_key, key, dim, Vec::new(), right).map_err(|e| invalid(&a, e))?);
        }
        let shell = ColoredOperad::new(&palette, max_arity, components.clone(), BTreeMap::new()).map_err(|e| invalid(at, e))?;
        let gat = sub(at, "gamma");
        let mut gamma = BTreeMap::new();
        if let Some(list) = opt_field(&v, "gamma") {
            for (i, g) in as_array(list, &gat)?.iter().enumerate() {
                let a = idx(&gat, i);
                let out = parse_color(&palette, field(g, "out", &a)?, &sub(&a, "out"))?;
                let input = parse_profile(&palette, field(g, "in", &a)?, &sub(&a, "in"))?.orbit_key();
                let pat = sub(&a, "parts");
                let parts = as_array(field(g, "parts", &a)?, &pat)?
                    .iter()
                    .enumerate()
                    .map(|(j, p)| parse_profile(&palette, p, &idx(&pat, j)).map(|p| p.orbit_key()))
                    .collect::<Result<Vec<OrbitKey>>>()?;
                let key = GammaKey { out, input, parts };
                if key.parts.len() != key.input.len() {
                    return Err(invalid(&pat, format!("{} parts for {} inputs", key.parts.len(), key.input.len())));
                }
                let rows = shell.dim(out, &key.concat().orbit_key());
                let mut cols = shell.dim(out, &key.input);
                for (j, p) in key.parts.iter().enumerate() {
                    cols *= shell.dim(key.input.rep().get(j), p);
                }
                let m = parse_matrix(field(g, "matrix", &a)?, rows, cols, &sub(&a, "matrix"))?;
                if gamma.insert(key, m).is_some() {
                    return Err(invalid(&a, "duplicate composition"));
                }
            }
        }
        ColoredOperad::new(&palette, max_arity, components, gamma).map_err(|e| invalid(at, e))
    }

    pub fn operad_algebra(&self, v: &Value, at: &str) -> Result<(ColoredOperad, OperadAlgebra)> {
        let v = self.nested(v, "operad_algebra", at)?;
        let operad = self.operad(field(&v, "operad", at)?, &sub(at, "operad"))?;
        let family = self.family(field(&v, "family", at)?, &sub(at, "family"))?;
        let palette = operad.palette().clone();
        let iat = sub(at, "images");
        let mut images = BTreeMap::new();
        for (i, im) in as_array(field(&v, "images", at)?, &iat)?.iter().enumerate() {
            let a = idx(&iat, i);
            let d = parse_color(&palette, field(im, "out", &a)?, &sub(&a, "out"))?;
            let key = parse_profile(&palette, field(im, "in", &a)?, &sub(&a, "in"))?.orbit_key();
            let rows = family.get(d).dim(0) * family.tensor(key.rep()).dim(0);
            let m = parse_matrix(field(im, "matrix", &a)?, rows, operad.dim(d, &key), &sub(&a, "matrix"))?;
            images.insert((d, key), m);
        }
        let algebra = OperadAlgebra::new(&operad, family, images).map_err(|e| invalid(at, e))?;
        Ok((operad, algebra))
    }

    pub fn graph(&self, v: &Value, at: &str) -> Result<CanonicalGraph> {
        let v = self.nested(v, "graph", at)?;
        let pairs = |name: &str| -> Result<Vec<Vec<usize>>> {
            let a = sub(at, name);
            as_array(field(&v, name, at)?, &a)?
                .iter()
                .enumerate()
                .map(|(i, p)| as_array(p, &idx(&a, i))?.iter().map(|x| as_usize(x, &idx(&a, i))).collect())
                .collect()
        };
        let vat = sub(at, "vertices");
        let vertices = as_array(field(&v, "vertices", at)?, &vat)?.iter().enumerate().map(|(i, n)| as_str(n, &idx(&vat, i)).map(str::to_string)).collect::<Result<Vec<_>>>()?;
        let two = |xs: Vec<Vec<usize>>, name: &str| -> Result<Vec<(usize, usize)>> {
            xs.into_iter().map(|p| if p.len() == 2 { Ok((p[0], p[1])) } else { Err(invalid(&sub(at, name), "expected [vertex, port]")) }).collect()
        };
        let edges = pairs("edges")?
            .into_iter()
            .map(|p| if p.len() == 4 { Ok((p[0], p[1], p[2], p[3])) } else { Err(invalid(&sub(at, "edges"), "expected [from, port, to, port]")) })
            .collect::<Result<Vec<_>>>()?;
        Ok(CanonicalGraph { vertices, edges, inputs: two(pairs("inputs")?, "inputs")?, outputs: two(pairs("outputs")?, "outputs")? })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::samples;
    use rand::SeedableRng;

    fn round_trip(doc: &Document) {
        let text = render(doc);
        let again = Loader::default().decode(&Loader::parse_json(&text, "test").unwrap()).unwrap();
        assert_eq!(render(&again), text);
    }

    #[test]
    fn keys_are_sorted() {
        let text = render(&Document::Complex(ChainComplex::disc(1)));
        assert!(text.find("\"d\"").unwrap() < text.find("\"dims\"").unwrap());
        assert!(text.find("\"dims\"").unwrap() < text.find("\"kind\"").unwrap());
        assert!(text.contains("\"1/1\""));
    }

    #[test]
    fn documents_round_trip() {
        let mut rng = rand::rngs::StdRng::seed_from_u64(4);
        let p = Palette::new(["a", "b"]).unwrap();
        round_trip(&Document::Bimodule(samples::bimodule(&mut rng, &p, 3, 4, 2)));
        round_trip(&Document::Family(samples::family(&mut rng, &p, 4, 2)));
        let x = samples::complex(&mut rng, 6, 3);
        round_trip(&Document::ChainMap(samples::chain_map(&mut rng, &x, &x)));
        round_trip(&Document::Structure(samples::ground_field_algebra()));
        round_trip(&Document::Presentation(samples::a_infinity()));
        round_trip(&Document::Operad(ColoredOperad::associative(3).unwrap()));
    }

    #[test]
    fn errors_name_the_location() {
        let v: Value = serde_json::from_str(r#"{"kind":"complex","dims":[1,1],"d":[[["x"]]]}"#).unwrap();
        let err = Loader::default().decode(&v).unwrap_err().to_string();
        assert!(err.contains("d[0][0][0]"), "{err}");
        let bad = Loader::parse_json("{\n  \"kind\": ", "f.json").unwrap_err().to_string();
        assert!(bad.contains("f.json:2:"), "{bad}");
    }
}
