//! JSON workspaces: a field plus named complexes, maps, categories, modules
//! and bimodules.
//!
//! ```json
//! {
//!   "field": {"kind": "prime", "p": 7, "N": 3},
//!   "complexes": {"X": {"dims": {"0": 1, "1": 1}, "d": {"0": [["1"]]}}},
//!   "maps": {"f": {"source": "X", "target": "X", "degree": 0, "components": {"0": [["1"]], "1": [["1"]]}}}
//! }
//! ```
//!
//! Degrees are string keys. Matrices are lists of rows. Basis elements of
//! a complex are numbered by concatenating its degree pieces in ascending
//! degree. Composition entries `[f, g, v]` in the table for objects
//! `[a, b, c]` say that basis `f` of `hom(b, c)` composed with basis `g` of
//! `hom(a, b)` is `v` in `hom(a, c)`. Action entries `[k, g, v]` say that
//! basis `k` of the acting hom sends basis `g` of the source value to `v`.
//! Anything left out is zero.

use std::collections::BTreeMap;
use std::path::Path;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{Matrix, Vector};
use crate::ncx::{validate_ncomplex, GradedMap, GradedSpace, NComplex};
use crate::ndgcat::{NdgBimodule, NdgCategory, NdgModule, Side};
use crate::scalars::{Field, FieldSpec, ScalarRepr};

type RawMatrix = Vec<Vec<ScalarRepr>>;
type RawEntry = (usize, usize, Vec<ScalarRepr>);

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawComplex {
    dims: BTreeMap<i64, usize>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    d: BTreeMap<i64, RawMatrix>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawMap {
    source: String,
    target: String,
    #[serde(default)]
    degree: i64,
    #[serde(default)]
    components: BTreeMap<i64, RawMatrix>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawHom {
    from: String,
    to: String,
    complex: RawComplex,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawTable {
    objects: [String; 3],
    entries: Vec<RawEntry>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawCategory {
    objects: Vec<String>,
    #[serde(default)]
    hom: Vec<RawHom>,
    units: BTreeMap<String, Vec<ScalarRepr>>,
    #[serde(default)]
    compose: Vec<RawTable>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawAction {
    from: String,
    to: String,
    entries: Vec<RawEntry>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawModule {
    category: String,
    side: Side,
    values: BTreeMap<String, RawComplex>,
    #[serde(default)]
    actions: Vec<RawAction>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawBimoduleValue {
    a: String,
    b: String,
    complex: RawComplex,
}

/// Action of one object of the other category, between two objects of
/// the acting one.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawBimoduleAction {
    at: String,
    from: String,
    to: String,
    entries: Vec<RawEntry>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawBimodule {
    /// Category acting on the left (`B` in a B-A bimodule).
    left: String,
    /// Category acting on the right.
    right: String,
    values: Vec<RawBimoduleValue>,
    #[serde(default)]
    right_actions: Vec<RawBimoduleAction>,
    #[serde(default)]
    left_actions: Vec<RawBimoduleAction>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawWorkspace {
    field: FieldSpec,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    complexes: BTreeMap<String, RawComplex>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    maps: BTreeMap<String, RawMap>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    categories: BTreeMap<String, RawCategory>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    modules: BTreeMap<String, RawModule>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    bimodules: BTreeMap<String, RawBimodule>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct NamedMap {
    pub source: String,
    pub target: String,
    pub map: GradedMap,
}

#[derive(Clone, Debug, PartialEq)]
pub struct NamedModule {
    pub category: String,
    pub module: NdgModule,
}

#[derive(Clone, Debug, PartialEq)]
pub struct NamedBimodule {
    pub left: String,
    pub right: String,
    pub bimodule: NdgBimodule,
}

/// Validated named objects over one field. Names are unique across all
/// tables.
#[derive(Clone, Debug)]
pub struct Workspace {
    field: Field,
    pub complexes: BTreeMap<String, NComplex>,
    pub maps: BTreeMap<String, NamedMap>,
    pub categories: BTreeMap<String, Arc<NdgCategory>>,
    pub modules: BTreeMap<String, NamedModule>,
    pub bimodules: BTreeMap<String, NamedBimodule>,
}

impl PartialEq for Workspace {
    fn eq(&self, other: &Self) -> bool {
        self.field.spec() == other.field.spec()
            && self.complexes == other.complexes
            && self.maps == other.maps
            && self.categories == other.categories
            && self.modules == other.modules
            && self.bimodules == other.bimodules
    }
}

fn invalid(name: impl Into<String>) -> impl FnOnce(Error) -> Error {
    let name = name.into();
    move |e| match e {
        Error::Invalid { name: inner_name, inner } => Error::Invalid { name: format!("{name}.{inner_name}"), inner },
        e => Error::Invalid { name, inner: Box::new(e) },
    }
}

fn unknown(kind: &str, name: &str) -> Error {
    Error::Parse(format!("unknown {kind} `{name}`"))
}

// ---------------------------------------------------------------- reading

fn read_matrix(field: &Field, raw: &RawMatrix, rows: usize, cols: usize) -> Result<Matrix> {
    if raw.len() != rows || raw.iter().any(|r| r.len() != cols) {
        let got = raw.first().map_or(0, Vec::len);
        return Err(Error::ShapeError(format!("matrix is {}x{got}, expected {rows}x{cols}", raw.len())));
    }
    let rows = raw.iter().map(|r| r.iter().map(|s| field.parse(s)).collect()).collect::<Result<_>>()?;
    Matrix::from_rows(field, rows).map(|m| if m.rows() == 0 { Matrix::zeros(field, 0, cols) } else { m })
}

fn read_vector(field: &Field, raw: &[ScalarRepr], len: usize) -> Result<Vector> {
    if raw.len() != len {
        return Err(Error::ShapeError(format!("vector has length {}, expected {len}", raw.len())));
    }
    raw.iter().map(|s| field.parse(s)).collect()
}

fn read_complex(field: &Field, raw: &RawComplex) -> Result<NComplex> {
    let space = GradedSpace::new(raw.dims.iter().map(|(&i, &d)| (i, d)));
    let d = raw
        .d
        .iter()
        .map(|(&i, m)| Ok((i, read_matrix(field, m, space.dim(i + 1), space.dim(i)).map_err(invalid(format!("d[{i}]")))?)))
        .collect::<Result<_>>()?;
    validate_ncomplex(field, space, d)
}

/// Fills a table of `count` matrices `rows x cols` from sparse entries.
fn read_entries(field: &Field, entries: &[RawEntry], count: usize, rows: usize, cols: usize) -> Result<Vec<Matrix>> {
    let mut out = vec![Matrix::zeros(field, rows, cols); count];
    for (k, g, v) in entries {
        if *k >= count || *g >= cols {
            return Err(Error::OutOfRange(format!("entry [{k}, {g}] outside {count} basis elements and {cols} columns")));
        }
        for (r, s) in read_vector(field, v, rows)?.into_iter().enumerate() {
            out[*k].set(r, *g, s);
        }
    }
    Ok(out)
}

fn read_category(field: &Field, raw: &RawCategory) -> Result<NdgCategory> {
    let index = |name: &str| raw.objects.iter().position(|o| o == name).ok_or_else(|| Error::UnknownObject(name.into()));
    let mut hom = BTreeMap::new();
    for h in &raw.hom {
        let key = (index(&h.from)?, index(&h.to)?);
        let x = read_complex(field, &h.complex).map_err(invalid(format!("hom({},{})", h.from, h.to)))?;
        if hom.insert(key, x).is_some() {
            return Err(Error::Parse(format!("hom({},{}) given twice", h.from, h.to)));
        }
    }
    let dim = |a: usize, b: usize| hom.get(&(a, b)).map_or(0, |x: &NComplex| x.space().total_dim());
    let mut unit = Vec::new();
    for (a, name) in raw.objects.iter().enumerate() {
        let v = raw.units.get(name).ok_or_else(|| Error::UnitViolation { witness: format!("no unit for `{name}`") })?;
        unit.push(read_vector(field, v, dim(a, a)).map_err(invalid(format!("units.{name}")))?);
    }
    if let Some(extra) = raw.units.keys().find(|k| !raw.objects.contains(k)) {
        return Err(Error::UnknownObject(extra.clone()));
    }
    let mut compose = BTreeMap::new();
    for t in &raw.compose {
        let [a, b, c] = [index(&t.objects[0])?, index(&t.objects[1])?, index(&t.objects[2])?];
        let table = read_entries(field, &t.entries, dim(b, c), dim(a, c), dim(a, b))
            .map_err(invalid(format!("compose({},{},{})", t.objects[0], t.objects[1], t.objects[2])))?;
        if compose.insert((a, b, c), table).is_some() {
            return Err(Error::Parse(format!("table ({},{},{}) given twice", t.objects[0], t.objects[1], t.objects[2])));
        }
    }
    NdgCategory::new(field, raw.objects.clone(), hom, unit, compose)
}

fn read_module(field: &Field, cat: &Arc<NdgCategory>, raw: &RawModule) -> Result<NdgModule> {
    let mut values = vec![NComplex::zero(field); cat.len()];
    for (name, x) in &raw.values {
        values[cat.object_index(name)?] = read_complex(field, x).map_err(invalid(format!("values.{name}")))?;
    }
    let mut action = BTreeMap::new();
    for act in &raw.actions {
        let (from, to) = (cat.object_index(&act.from)?, cat.object_index(&act.to)?);
        let (s, t) = raw.side.acting(from, to);
        let table = read_entries(field, &act.entries, cat.hom_dim(s, t), values[to].space().total_dim(), values[from].space().total_dim())
            .map_err(invalid(format!("action({},{})", act.from, act.to)))?;
        if action.insert((from, to), table).is_some() {
            return Err(Error::Parse(format!("action ({},{}) given twice", act.from, act.to)));
        }
    }
    NdgModule::new(raw.side, cat, values, action)
}

fn read_bimodule(field: &Field, cb: &Arc<NdgCategory>, ca: &Arc<NdgCategory>, raw: &RawBimodule) -> Result<NdgBimodule> {
    let mut values = BTreeMap::new();
    for v in &raw.values {
        let key = (ca.object_index(&v.a)?, cb.object_index(&v.b)?);
        let x = read_complex(field, &v.complex).map_err(invalid(format!("values({},{})", v.a, v.b)))?;
        if values.insert(key, x).is_some() {
            return Err(Error::Parse(format!("value ({},{}) given twice", v.a, v.b)));
        }
    }
    let dim = |a: usize, b: usize| values.get(&(a, b)).map_or(0, |x: &NComplex| x.space().total_dim());
    let mut right = BTreeMap::new();
    for act in &raw.right_actions {
        let (b, a1, a2) = (cb.object_index(&act.at)?, ca.object_index(&act.from)?, ca.object_index(&act.to)?);
        let table = read_entries(field, &act.entries, ca.hom_dim(a2, a1), dim(a2, b), dim(a1, b))
            .map_err(invalid(format!("right_action({};{},{})", act.at, act.from, act.to)))?;
        right.insert((b, a1, a2), table);
    }
    let mut left = BTreeMap::new();
    for act in &raw.left_actions {
        let (a, b1, b2) = (ca.object_index(&act.at)?, cb.object_index(&act.from)?, cb.object_index(&act.to)?);
        let table = read_entries(field, &act.entries, cb.hom_dim(b1, b2), dim(a, b2), dim(a, b1))
            .map_err(invalid(format!("left_action({};{},{})", act.at, act.from, act.to)))?;
        left.insert((a, b1, b2), table);
    }
    NdgBimodule::new(cb, ca, values, right, left)
}

// ---------------------------------------------------------------- writing

fn write_matrix(field: &Field, m: &Matrix) -> RawMatrix {
    (0..m.rows()).map(|r| (0..m.cols()).map(|c| field.to_repr(m.get(r, c))).collect()).collect()
}

fn write_complex(x: &NComplex) -> RawComplex {
    let f = x.field();
    RawComplex {
        dims: x.space().dims().iter().map(|(&i, &d)| (i, d)).collect(),
        d: x.differentials().iter().map(|(&i, m)| (i, write_matrix(f, m))).collect(),
    }
}

fn write_entries(field: &Field, table: &[Matrix]) -> Vec<RawEntry> {
    let mut out = Vec::new();
    for (k, m) in table.iter().enumerate() {
        for g in 0..m.cols() {
            let col = m.column(g);
            if col.iter().any(|s| !s.is_zero()) {
                out.push((k, g, col.iter().map(|s| field.to_repr(s)).collect()));
            }
        }
    }
    out
}

fn write_category(cat: &NdgCategory) -> RawCategory {
    let f = cat.field();
    let names = cat.objects();
    let n = cat.len();
    let mut hom = Vec::new();
    let mut compose = Vec::new();
    for a in 0..n {
        for b in 0..n {
            if !cat.hom(a, b).space().is_zero() {
                hom.push(RawHom { from: names[a].clone(), to: names[b].clone(), complex: write_complex(cat.hom(a, b)) });
            }
            for c in 0..n {
                let entries = write_entries(f, cat.table(a, b, c));
                if !entries.is_empty() {
                    compose.push(RawTable { objects: [names[a].clone(), names[b].clone(), names[c].clone()], entries });
                }
            }
        }
    }
    let units = (0..n).map(|a| (names[a].clone(), cat.unit(a).iter().map(|s| f.to_repr(s)).collect())).collect();
    RawCategory { objects: names.to_vec(), hom, units, compose }
}

fn write_module(category: &str, m: &NdgModule) -> RawModule {
    let names = m.base().objects();
    let values = names.iter().zip(m.values()).filter(|(_, x)| !x.space().is_zero()).map(|(o, x)| (o.clone(), write_complex(x))).collect();
    let mut actions = Vec::new();
    for from in 0..names.len() {
        for to in 0..names.len() {
            let entries = write_entries(m.field(), m.action(from, to));
            if !entries.is_empty() {
                actions.push(RawAction { from: names[from].clone(), to: names[to].clone(), entries });
            }
        }
    }
    RawModule { category: category.into(), side: m.side(), values, actions }
}

fn write_bimodule(left: &str, right: &str, m: &NdgBimodule) -> RawBimodule {
    let (ca, cb) = (m.right_base(), m.left_base());
    let (an, bn) = (ca.objects(), cb.objects());
    let f = m.field();
    let values = m
        .values()
        .iter()
        .filter(|(_, x)| !x.space().is_zero())
        .map(|(&(a, b), x)| RawBimoduleValue { a: an[a].clone(), b: bn[b].clone(), complex: write_complex(x) })
        .collect();
    let mut right_actions = Vec::new();
    for b in 0..cb.len() {
        for a1 in 0..ca.len() {
            for a2 in 0..ca.len() {
                let entries = write_entries(f, m.right_action(b, a1, a2));
                if !entries.is_empty() {
                    right_actions.push(RawBimoduleAction { at: bn[b].clone(), from: an[a1].clone(), to: an[a2].clone(), entries });
                }
            }
        }
    }
    let mut left_actions = Vec::new();
    for a in 0..ca.len() {
        for b1 in 0..cb.len() {
            for b2 in 0..cb.len() {
                let entries = write_entries(f, m.left_action(a, b1, b2));
                if !entries.is_empty() {
                    left_actions.push(RawBimoduleAction { at: an[a].clone(), from: bn[b1].clone(), to: bn[b2].clone(), entries });
                }
            }
        }
    }
    RawBimodule { left: left.into(), right: right.into(), values, right_actions, left_actions }
}

impl Workspace {
    pub fn new(field: &Field) -> Workspace {
        Workspace {
            field: field.clone(),
            complexes: BTreeMap::new(),
            maps: BTreeMap::new(),
            categories: BTreeMap::new(),
            modules: BTreeMap::new(),
            bimodules: BTreeMap::new(),
        }
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn contains(&self, name: &str) -> bool {
        self.complexes.contains_key(name)
            || self.maps.contains_key(name)
            || self.categories.contains_key(name)
            || self.modules.contains_key(name)
            || self.bimodules.contains_key(name)
    }

    fn claim(&self, name: &str) -> Result<()> {
        if self.contains(name) {
            return Err(Error::Parse(format!("name `{name}` is used twice")));
        }
        Ok(())
    }

    fn check_field(&self, f: &Field) -> Result<()> {
        if f.spec() == self.field.spec() {
            Ok(())
        } else {
            Err(Error::FieldMismatch)
        }
    }

    pub fn add_complex(&mut self, name: &str, x: NComplex) -> Result<()> {
        self.claim(name)?;
        self.check_field(x.field())?;
        self.complexes.insert(name.into(), x);
        Ok(())
    }

    pub fn add_map(&mut self, name: &str, source: &str, target: &str, map: GradedMap) -> Result<()> {
        self.claim(name)?;
        self.check_field(map.field())?;
        let (s, t) = (self.complex(source)?, self.complex(target)?);
        if map.source() != s.space() || map.target() != t.space() {
            return Err(Error::Invalid { name: name.into(), inner: Box::new(Error::ShapeError("map spaces differ from its complexes".into())) });
        }
        self.maps.insert(name.into(), NamedMap { source: source.into(), target: target.into(), map });
        Ok(())
    }

    pub fn add_category(&mut self, name: &str, cat: Arc<NdgCategory>) -> Result<()> {
        self.claim(name)?;
        self.check_field(cat.field())?;
        self.categories.insert(name.into(), cat);
        Ok(())
    }

    /// Adds a module, registering its base category under `category` unless
    /// a category of that name already exists (which must then be equal).
    pub fn add_module(&mut self, name: &str, category: &str, module: NdgModule) -> Result<()> {
        self.claim(name)?;
        self.share_category(category, module.base())?;
        self.modules.insert(name.into(), NamedModule { category: category.into(), module });
        Ok(())
    }

    pub fn add_bimodule(&mut self, name: &str, left: &str, right: &str, bimodule: NdgBimodule) -> Result<()> {
        self.claim(name)?;
        self.share_category(left, bimodule.left_base())?;
        self.share_category(right, bimodule.right_base())?;
        self.bimodules.insert(name.into(), NamedBimodule { left: left.into(), right: right.into(), bimodule });
        Ok(())
    }

    fn share_category(&mut self, name: &str, cat: &Arc<NdgCategory>) -> Result<()> {
        match self.categories.get(name) {
            Some(c) if **c == **cat => Ok(()),
            Some(_) => Err(Error::BaseMismatch),
            None => self.add_category(name, cat.clone()),
        }
    }

    pub fn complex(&self, name: &str) -> Result<&NComplex> {
        self.complexes.get(name).ok_or_else(|| unknown("complex", name))
    }

    pub fn map(&self, name: &str) -> Result<&NamedMap> {
        self.maps.get(name).ok_or_else(|| unknown("map", name))
    }

    pub fn category(&self, name: &str) -> Result<&Arc<NdgCategory>> {
        self.categories.get(name).ok_or_else(|| unknown("category", name))
    }

    pub fn module(&self, name: &str) -> Result<&NamedModule> {
        self.modules.get(name).ok_or_else(|| unknown("module", name))
    }

    pub fn bimodule(&self, name: &str) -> Result<&NamedBimodule> {
        self.bimodules.get(name).ok_or_else(|| unknown("bimodule", name))
    }

    /// Parses and validates a workspace. Parse errors carry line and column;
    /// validation errors carry the dotted path of the offending entry.
    pub fn from_json(text: &str) -> Result<Workspace> {
        let raw: RawWorkspace =
            serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        let field = Field::new(&raw.field).map_err(invalid("field"))?;
        let mut ws = Workspace::new(&field);
        for (name, x) in &raw.complexes {
            let x = read_complex(&field, x).map_err(invalid(format!("complexes.{name}")))?;
            ws.add_complex(name, x)?;
        }
        for (name, m) in &raw.maps {
            let at = format!("maps.{name}");
            let (s, t) = (ws.complex(&m.source).map_err(invalid(&at))?, ws.complex(&m.target).map_err(invalid(&at))?);
            let comps = m
                .components
                .iter()
                .map(|(&i, c)| Ok((i, read_matrix(&field, c, t.dim(i + m.degree), s.dim(i))?)))
                .collect::<Result<_>>()
                .map_err(invalid(&at))?;
            let map = GradedMap::new(&field, m.degree, s.space(), t.space(), comps).map_err(invalid(&at))?;
            ws.add_map(name, &m.source, &m.target, map)?;
        }
        for (name, c) in &raw.categories {
            let cat = read_category(&field, c).map_err(invalid(format!("categories.{name}")))?;
            ws.add_category(name, Arc::new(cat))?;
        }
        for (name, m) in &raw.modules {
            let at = format!("modules.{name}");
            let cat = ws.category(&m.category).map_err(invalid(&at))?.clone();
            let module = read_module(&field, &cat, m).map_err(invalid(&at))?;
            ws.add_module(name, &m.category, module)?;
        }
        for (name, m) in &raw.bimodules {
            let at = format!("bimodules.{name}");
            let cb = ws.category(&m.left).map_err(invalid(&at))?.clone();
            let ca = ws.category(&m.right).map_err(invalid(&at))?.clone();
            let bimodule = read_bimodule(&field, &cb, &ca, m).map_err(invalid(&at))?;
            ws.add_bimodule(name, &m.left, &m.right, bimodule)?;
        }
        Ok(ws)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Workspace> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?;
        Workspace::from_json(&text)
    }

    pub fn to_json(&self) -> String {
        let f = &self.field;
        let raw = RawWorkspace {
            field: f.spec(),
            complexes: self.complexes.iter().map(|(n, x)| (n.clone(), write_complex(x))).collect(),
            maps: self
                .maps
                .iter()
                .map(|(n, m)| {
                    let components = m.map.components().iter().map(|(&i, c)| (i, write_matrix(f, c))).collect();
                    (n.clone(), RawMap { source: m.source.clone(), target: m.target.clone(), degree: m.map.degree(), components })
                })
                .collect(),
            categories: self.categories.iter().map(|(n, c)| (n.clone(), write_category(c))).collect(),
            modules: self.modules.iter().map(|(n, m)| (n.clone(), write_module(&m.category, &m.module))).collect(),
            bimodules: self.bimodules.iter().map(|(n, m)| (n.clone(), write_bimodule(&m.left, &m.right, &m.bimodule))).collect(),
        };
        serde_json::to_string_pretty(&raw).expect("workspace serializes")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ncx::{homology_dim, standard_block};
    use crate::ndgcat::{regular_bimodule, representable, truncated_polynomial};

    #[test]
    fn field_only_is_empty() {
        let ws = Workspace::from_json(r#"{"field": {"kind": "cyclotomic", "N": 3}}"#).unwrap();
        assert!(ws.complexes.is_empty() && ws.categories.is_empty());
    }

    #[test]
    fn block_has_no_homology() {
        let text = r#"{"field": {"kind": "prime", "p": 7, "N": 3},
            "complexes": {"B": {"dims": {"0": 1, "1": 1, "2": 1}, "d": {"0": [["1"]], "1": [["1"]]}}}}"#;
        let ws = Workspace::from_json(text).unwrap();
        let b = ws.complex("B").unwrap();
        assert_eq!(b, &standard_block(ws.field(), 0, 3).unwrap());
        for i in -1..=3 {
            for r in 1..3 {
                assert_eq!(homology_dim(b, i, r).unwrap(), 0);
            }
        }
    }

    #[test]
    fn square_nonzero_is_named() {
        let text = r#"{"field": {"kind": "prime", "p": 3, "N": 2},
            "complexes": {"Bad": {"dims": {"0": 1, "1": 1, "2": 1}, "d": {"0": [["1"]], "1": [["1"]]}}}}"#;
        let err = Workspace::from_json(text).unwrap_err();
        match &err {
            Error::Invalid { name, inner } => {
                assert_eq!(name, "complexes.Bad");
                assert_eq!(**inner, Error::NotNDifferential { degree: 0 });
            }
            e => panic!("unexpected {e:?}"),
        }
    }

    #[test]
    fn parse_error_has_location() {
        let err = Workspace::from_json("{\n  \"field\": 3,\n}").unwrap_err();
        assert!(err.to_string().contains("line 2"), "{err}");
    }

    #[test]
    fn duplicate_names_rejected() {
        let text = r#"{"field": {"kind": "prime", "p": 7, "N": 3},
            "complexes": {"X": {"dims": {}}},
            "categories": {"X": {"objects": ["*"], "hom": [{"from": "*", "to": "*", "complex": {"dims": {"0": 1}}}],
                                 "units": {"*": ["1"]}, "compose": [{"objects": ["*", "*", "*"], "entries": [[0, 0, ["1"]]]}]}}}"#;
        assert!(Workspace::from_json(text).is_err());
    }

    #[test]
    fn round_trip_with_categories() {
        let field = Field::new(&FieldSpec::cyclotomic(3)).unwrap();
        let cat = Arc::new(truncated_polynomial(&field, 3, &field.one()).unwrap());
        let mut ws = Workspace::new(&field);
        ws.add_complex("B", standard_block(&field, -1, 3).unwrap()).unwrap();
        let b = ws.complex("B").unwrap().clone();
        ws.add_map("id", "B", "B", b.identity_map()).unwrap();
        ws.add_module("P", "A", representable(&cat, 0, Side::Right).unwrap()).unwrap();
        ws.add_module("L", "A", representable(&cat, 0, Side::Left).unwrap()).unwrap();
        ws.add_bimodule("R", "A", "A", regular_bimodule(&cat).unwrap()).unwrap();
        let text = ws.to_json();
        let back = Workspace::from_json(&text).unwrap();
        assert_eq!(back, ws);
        assert_eq!(back.to_json(), text);
    }
}
