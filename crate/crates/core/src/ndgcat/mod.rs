//! Finite N_qDG categories with their modules and bimodules.
//!
//! Hom complexes and module values are handled in *global* coordinates:
//! the basis of a complex is the concatenation of its degree pieces in
//! increasing degree order (see [`Flat`]). Composition and actions are
//! stored as one matrix per basis element of the acting hom complex, so
//! every axiom becomes a matrix identity that is checked exhaustively.
//!
//! Composition tables are keyed `(a, b, c)`: entry `k` is left
//! multiplication by basis element `k` of `hom(b, c)`, a matrix
//! `hom(a, b) -> hom(a, c)`. Module actions are keyed `(from, to)` and map
//! `value(from) -> value(to)`; a right module is acted on by `hom(to, from)`
//! and a left module by `hom(from, to)`.

mod build;
mod homs;

use std::collections::BTreeMap;
use std::ops::Range;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::linalg::{Matrix, Vector};
use crate::ncx::{GradedMap, GradedSpace, NComplex};
use crate::scalars::{Field, Scalar};

pub use build::*;
pub use homs::*;

// ---------------------------------------------------------------- global coordinates

/// Degree bookkeeping for the global basis of a graded space.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Flat {
    ranges: BTreeMap<i64, (usize, usize)>,
    degrees: Vec<i64>,
}

impl Flat {
    pub fn new(space: &GradedSpace) -> Flat {
        let mut ranges = BTreeMap::new();
        let mut degrees = Vec::new();
        for (&i, &d) in space.dims() {
            ranges.insert(i, (degrees.len(), degrees.len() + d));
            degrees.extend(std::iter::repeat_n(i, d));
        }
        Flat { ranges, degrees }
    }

    pub fn len(&self) -> usize {
        self.degrees.len()
    }

    pub fn is_empty(&self) -> bool {
        self.degrees.is_empty()
    }

    pub fn degree(&self, g: usize) -> i64 {
        self.degrees[g]
    }

    /// Global indices of degree `i` (empty if the degree is absent).
    pub fn range(&self, i: i64) -> Range<usize> {
        self.ranges.get(&i).map_or(0..0, |&(a, b)| a..b)
    }

    pub fn index(&self, i: i64, local: usize) -> usize {
        let r = self.range(i);
        debug_assert!(local < r.len());
        r.start + local
    }

    pub fn local(&self, g: usize) -> usize {
        g - self.range(self.degrees[g]).start
    }
}

/// The differential of `x` as one square matrix on the global basis.
pub fn global_differential(x: &NComplex) -> Matrix {
    let fl = Flat::new(x.space());
    let mut m = Matrix::zeros(x.field(), fl.len(), fl.len());
    for (&i, d) in x.differentials() {
        m.set_block(fl.range(i + 1).start, fl.range(i).start, d);
    }
    m
}

/// A graded map as one matrix between global bases.
pub fn global_map(f: &GradedMap) -> Matrix {
    let src = Flat::new(f.source());
    let tgt = Flat::new(f.target());
    let mut m = Matrix::zeros(f.field(), tgt.len(), src.len());
    for (&i, c) in f.components() {
        if c.rows() > 0 && c.cols() > 0 {
            m.set_block(tgt.range(i + f.degree()).start, src.range(i).start, c);
        }
    }
    m
}

/// Inverse of [`global_map`]; fails if `m` is not homogeneous of `degree`.
pub fn graded_from_global(field: &Field, m: &Matrix, degree: i64, src: &GradedSpace, tgt: &GradedSpace) -> Result<GradedMap> {
    let sf = Flat::new(src);
    let tf = Flat::new(tgt);
    if m.rows() != tf.len() || m.cols() != sf.len() {
        return Err(Error::ShapeError(format!("global matrix is {}x{}, expected {}x{}", m.rows(), m.cols(), tf.len(), sf.len())));
    }
    check_homogeneous(m, &sf, &tf, degree).map_err(|witness| Error::DegreeViolation { witness })?;
    let comps = src
        .dims()
        .keys()
        .map(|&i| (i, m.submatrix(tf.range(i + degree), sf.range(i))))
        .collect();
    GradedMap::new(field, degree, src, tgt, comps)
}

fn check_homogeneous(m: &Matrix, src: &Flat, tgt: &Flat, degree: i64) -> std::result::Result<(), String> {
    for c in 0..m.cols() {
        for r in 0..m.rows() {
            if !m.get(r, c).is_zero() && tgt.degree(r) != src.degree(c) + degree {
                return Err(format!("entry ({r}, {c}) links degree {} to degree {}", src.degree(c), tgt.degree(r)));
            }
        }
    }
    Ok(())
}

/// `diag(q^{deg})` on the global basis.
pub fn q_grading(field: &Field, fl: &Flat) -> Matrix {
    let mut m = Matrix::zeros(field, fl.len(), fl.len());
    for g in 0..fl.len() {
        m.set(g, g, field.q_pow(fl.degree(g)));
    }
    m
}

/// `Σ_k v_k M_k`.
pub fn combine(field: &Field, mats: &[Matrix], v: &[Scalar], rows: usize, cols: usize) -> Matrix {
    let mut out = Matrix::zeros(field, rows, cols);
    for (m, s) in mats.iter().zip(v) {
        if !s.is_zero() {
            out.add_scaled(s, m);
        }
    }
    out
}

fn first_diff_col(a: &Matrix, b: &Matrix) -> Option<usize> {
    (0..a.cols()).find(|&c| (0..a.rows()).any(|r| a.get(r, c) != b.get(r, c)))
}

fn basis_vector(field: &Field, n: usize, k: usize) -> Vector {
    crate::linalg::unit_vector(field, n, k)
}

// ---------------------------------------------------------------- categories

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NdgCategory {
    field: Field,
    objects: Vec<String>,
    hom: BTreeMap<(usize, usize), NComplex>,
    unit: Vec<Vector>,
    compose: BTreeMap<(usize, usize, usize), Vec<Matrix>>,
}

impl NdgCategory {
    /// Assembles and validates a category. Missing hom complexes are zero;
    /// missing composition tables are zero.
    pub fn new(
        field: &Field,
        objects: Vec<String>,
        mut hom: BTreeMap<(usize, usize), NComplex>,
        unit: Vec<Vector>,
        mut compose: BTreeMap<(usize, usize, usize), Vec<Matrix>>,
    ) -> Result<NdgCategory> {
        let n = objects.len();
        for (i, name) in objects.iter().enumerate() {
            if objects[..i].contains(name) {
                return Err(Error::Parse(format!("duplicate object `{name}`")));
            }
        }
        if hom.keys().any(|&(a, b)| a >= n || b >= n) || compose.keys().any(|&(a, b, c)| a >= n || b >= n || c >= n) {
            return Err(Error::OutOfRange("object index".into()));
        }
        if unit.len() != n {
            return Err(Error::ShapeError(format!("{} units for {n} objects", unit.len())));
        }
        for a in 0..n {
            for b in 0..n {
                hom.entry((a, b)).or_insert_with(|| NComplex::zero(field));
            }
        }
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    let (rows, cols) = (hom[&(a, c)].space().total_dim(), hom[&(a, b)].space().total_dim());
                    let count = hom[&(b, c)].space().total_dim();
                    compose.entry((a, b, c)).or_insert_with(|| vec![Matrix::zeros(field, rows, cols); count]);
                }
            }
        }
        let cat = NdgCategory { field: field.clone(), objects, hom, unit, compose };
        validate_category(&cat)?;
        Ok(cat)
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn objects(&self) -> &[String] {
        &self.objects
    }

    pub fn len(&self) -> usize {
        self.objects.len()
    }

    pub fn is_empty(&self) -> bool {
        self.objects.is_empty()
    }

    pub fn object_index(&self, name: &str) -> Result<usize> {
        self.objects.iter().position(|o| o == name).ok_or_else(|| Error::UnknownObject(name.into()))
    }

    pub fn hom(&self, a: usize, b: usize) -> &NComplex {
        &self.hom[&(a, b)]
    }

    pub fn hom_dim(&self, a: usize, b: usize) -> usize {
        self.hom(a, b).space().total_dim()
    }

    pub fn flat(&self, a: usize, b: usize) -> Flat {
        Flat::new(self.hom(a, b).space())
    }

    pub fn unit(&self, a: usize) -> &Vector {
        &self.unit[a]
    }

    /// Left multiplication tables by the basis of `hom(b, c)` on `hom(a, b)`.
    pub fn table(&self, a: usize, b: usize, c: usize) -> &[Matrix] {
        &self.compose[&(a, b, c)]
    }

    /// Left multiplication by `f ∈ hom(b, c)` as a matrix `hom(a, b) -> hom(a, c)`.
    pub fn left_mult(&self, a: usize, b: usize, c: usize, f: &[Scalar]) -> Matrix {
        combine(&self.field, self.table(a, b, c), f, self.hom_dim(a, c), self.hom_dim(a, b))
    }

    /// `f∘g` for `g ∈ hom(a, b)`, `f ∈ hom(b, c)`.
    pub fn compose(&self, a: usize, b: usize, c: usize, f: &[Scalar], g: &[Scalar]) -> Vector {
        self.left_mult(a, b, c, f).apply(g)
    }

    /// `d^t v` for `v ∈ hom(a, b)`.
    pub fn d_power(&self, a: usize, b: usize, v: &[Scalar], t: usize) -> Vector {
        let d = global_differential(self.hom(a, b));
        let mut out = v.to_vec();
        for _ in 0..t {
            out = d.apply(&out);
        }
        out
    }

    pub(crate) fn basis_name(&self, a: usize, b: usize, k: usize) -> String {
        format!("{}->{}[{k}]", self.objects[a], self.objects[b])
    }

    pub(crate) fn pairs(&self) -> impl Iterator<Item = (usize, usize)> {
        let n = self.len();
        (0..n).flat_map(move |a| (0..n).map(move |b| (a, b)))
    }

    pub(crate) fn triples(&self) -> impl Iterator<Item = (usize, usize, usize)> {
        let n = self.len();
        (0..n).flat_map(move |a| (0..n).flat_map(move |b| (0..n).map(move |c| (a, b, c))))
    }
}

/// Checks shapes, homogeneity, unit laws, the q-Leibniz rule,
/// associativity and `d^N = 0`, exhaustively on basis elements.
pub fn validate_category(cat: &NdgCategory) -> Result<()> {
    let field = &cat.field;
    for (&(a, b), h) in &cat.hom {
        if !h.field().same_arith(field) {
            return Err(Error::FieldMismatch);
        }
        if a >= cat.len() || b >= cat.len() {
            return Err(Error::OutOfRange("object index".into()));
        }
    }
    // Shapes and homogeneity.
    for (a, b, c) in cat.triples() {
        let tab = cat.table(a, b, c);
        let (fab, fac, fbc) = (cat.flat(a, b), cat.flat(a, c), cat.flat(b, c));
        if tab.len() != fbc.len() {
            return Err(Error::ShapeError(format!("composition table ({a},{b},{c}) has {} entries, expected {}", tab.len(), fbc.len())));
        }
        for (k, m) in tab.iter().enumerate() {
            if m.shape() != (fac.len(), fab.len()) {
                return Err(Error::ShapeError(format!("composition by {} has the wrong shape", cat.basis_name(b, c, k))));
            }
            check_homogeneous(m, &fab, &fac, fbc.degree(k)).map_err(|e| Error::DegreeViolation {
                witness: format!("composition by {}: {e}", cat.basis_name(b, c, k)),
            })?;
        }
    }
    // Units.
    for a in 0..cat.len() {
        let fl = cat.flat(a, a);
        let u = cat.unit(a);
        if u.len() != fl.len() || u.iter().enumerate().any(|(g, s)| !s.is_zero() && fl.degree(g) != 0) {
            return Err(Error::UnitViolation { witness: format!("unit of {} is not a degree 0 element", cat.objects[a]) });
        }
    }
    for (a, b) in cat.pairs() {
        let left = cat.left_mult(a, b, b, cat.unit(b));
        if let Some(g) = first_diff_col(&left, &Matrix::identity(field, cat.hom_dim(a, b))) {
            return Err(Error::UnitViolation { witness: format!("1·g != g for g = {}", cat.basis_name(a, b, g)) });
        }
        for f in 0..cat.hom_dim(a, b) {
            let e = basis_vector(field, cat.hom_dim(a, b), f);
            if cat.table(a, a, b)[f].apply(cat.unit(a)) != e {
                return Err(Error::UnitViolation { witness: format!("f·1 != f for f = {}", cat.basis_name(a, b, f)) });
            }
        }
    }
    // Leibniz: D_ac L_f = L_{df} + q^{|f|} L_f D_ab.
    for (a, b, c) in cat.triples() {
        let dab = global_differential(cat.hom(a, b));
        let dac = global_differential(cat.hom(a, c));
        let dbc = global_differential(cat.hom(b, c));
        let fbc = cat.flat(b, c);
        for (k, lf) in cat.table(a, b, c).iter().enumerate() {
            let df = dbc.column(k);
            let mut rhs = cat.left_mult(a, b, c, &df);
            rhs.add_scaled(&field.q_pow(fbc.degree(k)), &lf.compose(&dab));
            if let Some(g) = first_diff_col(&dac.compose(lf), &rhs) {
                return Err(Error::LeibnizViolation {
                    witness: format!("f = {}, g = {}", cat.basis_name(b, c, k), cat.basis_name(a, b, g)),
                });
            }
        }
    }
    // Associativity: L_{fg} = L_f L_g.
    let n = cat.len();
    for (a, b, c) in cat.triples() {
        for d in 0..n {
            for f in 0..cat.hom_dim(c, d) {
                for g in 0..cat.hom_dim(b, c) {
                    let fg = cat.table(b, c, d)[f].column(g);
                    let lhs = cat.left_mult(a, b, d, &fg);
                    let rhs = cat.table(a, c, d)[f].compose(&cat.table(a, b, c)[g]);
                    if let Some(h) = first_diff_col(&lhs, &rhs) {
                        return Err(Error::AssocViolation {
                            witness: format!(
                                "f = {}, g = {}, h = {}",
                                cat.basis_name(c, d, f),
                                cat.basis_name(b, c, g),
                                cat.basis_name(a, b, h)
                            ),
                        });
                    }
                }
            }
        }
    }
    for h in cat.hom.values() {
        h.check_nilpotent()?;
    }
    Ok(())
}

// ---------------------------------------------------------------- modules

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    Right,
    Left,
}

impl Side {
    /// The hom complex `(source, target)` acting on `value(from) -> value(to)`.
    pub fn acting(self, from: usize, to: usize) -> (usize, usize) {
        match self {
            Side::Right => (to, from),
            Side::Left => (from, to),
        }
    }
}

#[derive(Clone, Debug)]
pub struct NdgModule {
    side: Side,
    base: Arc<NdgCategory>,
    values: Vec<NComplex>,
    action: BTreeMap<(usize, usize), Vec<Matrix>>,
}

impl PartialEq for NdgModule {
    fn eq(&self, other: &Self) -> bool {
        self.side == other.side && same_base(&self.base, &other.base) && self.values == other.values && self.action == other.action
    }
}

pub(crate) fn same_base(a: &Arc<NdgCategory>, b: &Arc<NdgCategory>) -> bool {
    Arc::ptr_eq(a, b) || **a == **b
}

impl NdgModule {
    /// Assembles and validates a module; missing action tables are zero.
    pub fn new(
        side: Side,
        base: &Arc<NdgCategory>,
        values: Vec<NComplex>,
        action: BTreeMap<(usize, usize), Vec<Matrix>>,
    ) -> Result<NdgModule> {
        let m = NdgModule::unchecked(side, base, values, action)?;
        validate_module(&m)?;
        Ok(m)
    }

    pub(crate) fn unchecked(
        side: Side,
        base: &Arc<NdgCategory>,
        values: Vec<NComplex>,
        mut action: BTreeMap<(usize, usize), Vec<Matrix>>,
    ) -> Result<NdgModule> {
        let n = base.len();
        if values.len() != n {
            return Err(Error::ShapeError(format!("{} values for {n} objects", values.len())));
        }
        if action.keys().any(|&(a, b)| a >= n || b >= n) {
            return Err(Error::OutOfRange("object index".into()));
        }
        let field = base.field();
        for (from, to) in base.pairs() {
            let (s, t) = side.acting(from, to);
            let count = base.hom_dim(s, t);
            let (rows, cols) = (values[to].space().total_dim(), values[from].space().total_dim());
            action.entry((from, to)).or_insert_with(|| vec![Matrix::zeros(field, rows, cols); count]);
        }
        Ok(NdgModule { side, base: base.clone(), values, action })
    }

    pub fn side(&self) -> Side {
        self.side
    }

    pub fn base(&self) -> &Arc<NdgCategory> {
        &self.base
    }

    pub fn field(&self) -> &Field {
        self.base.field()
    }

    pub fn value(&self, a: usize) -> &NComplex {
        &self.values[a]
    }

    pub fn values(&self) -> &[NComplex] {
        &self.values
    }

    pub fn dim(&self, a: usize) -> usize {
        self.values[a].space().total_dim()
    }

    /// Action tables `value(from) -> value(to)`, one per basis element.
    pub fn action(&self, from: usize, to: usize) -> &[Matrix] {
        &self.action[&(from, to)]
    }

    /// The action of an arbitrary element of the acting hom complex.
    pub fn act(&self, from: usize, to: usize, v: &[Scalar]) -> Matrix {
        combine(self.field(), self.action(from, to), v, self.dim(to), self.dim(from))
    }
}

/// Checks the module axioms exhaustively on basis elements.
pub fn validate_module(m: &NdgModule) -> Result<()> {
    let cat = &*m.base;
    let field = cat.field();
    for v in &m.values {
        if !v.field().same_arith(field) {
            return Err(Error::FieldMismatch);
        }
    }
    let flats: Vec<Flat> = m.values.iter().map(|v| Flat::new(v.space())).collect();
    let diffs: Vec<Matrix> = m.values.iter().map(global_differential).collect();
    let name = |from: usize, to: usize, k: usize| {
        let (s, t) = m.side.acting(from, to);
        cat.basis_name(s, t, k)
    };
    for (from, to) in cat.pairs() {
        let (s, t) = m.side.acting(from, to);
        let hf = cat.flat(s, t);
        let tab = m.action(from, to);
        if tab.len() != hf.len() {
            return Err(Error::ShapeError(format!("action table ({from},{to}) has {} entries, expected {}", tab.len(), hf.len())));
        }
        for (k, r) in tab.iter().enumerate() {
            if r.shape() != (flats[to].len(), flats[from].len()) {
                return Err(Error::ShapeError(format!("action of {} has the wrong shape", name(from, to, k))));
            }
            check_homogeneous(r, &flats[from], &flats[to], hf.degree(k))
                .map_err(|e| Error::DegreeViolation { witness: format!("action of {}: {e}", name(from, to, k)) })?;
        }
    }
    for a in 0..cat.len() {
        let u = m.act(a, a, cat.unit(a));
        if let Some(x) = first_diff_col(&u, &Matrix::identity(field, m.dim(a))) {
            return Err(Error::UnitViolation { witness: format!("unit of {} moves basis element {x}", cat.objects()[a]) });
        }
    }
    // Leibniz. Right: D R_k = R_k D + R_{dk} Λ. Left: D L_k = L_{dk} + q^{|k|} L_k D.
    for (from, to) in cat.pairs() {
        let (s, t) = m.side.acting(from, to);
        let dh = global_differential(cat.hom(s, t));
        let hf = cat.flat(s, t);
        let lam = q_grading(field, &flats[from]);
        for (k, r) in m.action(from, to).iter().enumerate() {
            let act_dk = m.act(from, to, &dh.column(k));
            let lhs = diffs[to].compose(r);
            let rhs = match m.side {
                Side::Right => r.compose(&diffs[from]).add(&act_dk.compose(&lam)),
                Side::Left => {
                    let mut x = act_dk;
                    x.add_scaled(&field.q_pow(hf.degree(k)), &r.compose(&diffs[from]));
                    x
                }
            };
            if let Some(x) = first_diff_col(&lhs, &rhs) {
                return Err(Error::LeibnizViolation { witness: format!("action of {} on element {x}", name(from, to, k)) });
            }
        }
    }
    // Associativity.
    for (a1, a2, a3) in cat.triples() {
        match m.side {
            Side::Right => {
                // f ∈ hom(a2,a1), g ∈ hom(a3,a2): R_{fg} = R_g R_f.
                for f in 0..cat.hom_dim(a2, a1) {
                    for g in 0..cat.hom_dim(a3, a2) {
                        let fg = cat.table(a3, a2, a1)[f].column(g);
                        let lhs = m.act(a1, a3, &fg);
                        let rhs = m.action(a2, a3)[g].compose(&m.action(a1, a2)[f]);
                        if let Some(x) = first_diff_col(&lhs, &rhs) {
                            return Err(Error::AssocViolation {
                                witness: format!("x = {x}, f = {}, g = {}", cat.basis_name(a2, a1, f), cat.basis_name(a3, a2, g)),
                            });
                        }
                    }
                }
            }
            Side::Left => {
                // f ∈ hom(a2,a3), g ∈ hom(a1,a2): L_{fg} = L_f L_g.
                for f in 0..cat.hom_dim(a2, a3) {
                    for g in 0..cat.hom_dim(a1, a2) {
                        let fg = cat.table(a1, a2, a3)[f].column(g);
                        let lhs = m.act(a1, a3, &fg);
                        let rhs = m.action(a2, a3)[f].compose(&m.action(a1, a2)[g]);
                        if let Some(x) = first_diff_col(&lhs, &rhs) {
                            return Err(Error::AssocViolation {
                                witness: format!("f = {}, g = {}, x = {x}", cat.basis_name(a2, a3, f), cat.basis_name(a1, a2, g)),
                            });
                        }
                    }
                }
            }
        }
    }
    for v in &m.values {
        v.check_nilpotent()?;
    }
    Ok(())
}

// ---------------------------------------------------------------- bimodules

/// A B-A bimodule: values `M(a, b)` for `a ∈ A`, `b ∈ B`, a right
/// A-module in the first slot and a left B-module in the second.
#[derive(Clone, Debug)]
pub struct NdgBimodule {
    left_base: Arc<NdgCategory>,
    right_base: Arc<NdgCategory>,
    values: BTreeMap<(usize, usize), NComplex>,
    /// Keyed `(b, a1, a2)`: `M(a1, b) -> M(a2, b)` per basis of `A(a2, a1)`.
    right: BTreeMap<(usize, usize, usize), Vec<Matrix>>,
    /// Keyed `(a, b1, b2)`: `M(a, b1) -> M(a, b2)` per basis of `B(b1, b2)`.
    left: BTreeMap<(usize, usize, usize), Vec<Matrix>>,
}

impl PartialEq for NdgBimodule {
    fn eq(&self, other: &Self) -> bool {
        same_base(&self.left_base, &other.left_base)
            && same_base(&self.right_base, &other.right_base)
            && self.values == other.values
            && self.right == other.right
            && self.left == other.left
    }
}

impl NdgBimodule {
    pub fn new(
        left_base: &Arc<NdgCategory>,
        right_base: &Arc<NdgCategory>,
        values: BTreeMap<(usize, usize), NComplex>,
        right: BTreeMap<(usize, usize, usize), Vec<Matrix>>,
        left: BTreeMap<(usize, usize, usize), Vec<Matrix>>,
    ) -> Result<NdgBimodule> {
        let m = NdgBimodule::unchecked(left_base, right_base, values, right, left)?;
        validate_bimodule(&m)?;
        Ok(m)
    }

    pub(crate) fn unchecked(
        left_base: &Arc<NdgCategory>,
        right_base: &Arc<NdgCategory>,
        mut values: BTreeMap<(usize, usize), NComplex>,
        mut right: BTreeMap<(usize, usize, usize), Vec<Matrix>>,
        mut left: BTreeMap<(usize, usize, usize), Vec<Matrix>>,
    ) -> Result<NdgBimodule> {
        let field = right_base.field();
        if !field.same_arith(left_base.field()) {
            return Err(Error::FieldMismatch);
        }
        let (na, nb) = (right_base.len(), left_base.len());
        if values.keys().any(|&(a, b)| a >= na || b >= nb) {
            return Err(Error::OutOfRange("object index".into()));
        }
        for a in 0..na {
            for b in 0..nb {
                values.entry((a, b)).or_insert_with(|| NComplex::zero(field));
            }
        }
        let dim = |a: usize, b: usize| values[&(a, b)].space().total_dim();
        for b in 0..nb {
            for (a1, a2) in right_base.pairs() {
                let count = right_base.hom_dim(a2, a1);
                right.entry((b, a1, a2)).or_insert_with(|| vec![Matrix::zeros(field, dim(a2, b), dim(a1, b)); count]);
            }
        }
        for a in 0..na {
            for (b1, b2) in left_base.pairs() {
                let count = left_base.hom_dim(b1, b2);
                left.entry((a, b1, b2)).or_insert_with(|| vec![Matrix::zeros(field, dim(a, b2), dim(a, b1)); count]);
            }
        }
        Ok(NdgBimodule { left_base: left_base.clone(), right_base: right_base.clone(), values, right, left })
    }

    pub fn left_base(&self) -> &Arc<NdgCategory> {
        &self.left_base
    }

    pub fn right_base(&self) -> &Arc<NdgCategory> {
        &self.right_base
    }

    pub fn field(&self) -> &Field {
        self.right_base.field()
    }

    pub fn value(&self, a: usize, b: usize) -> &NComplex {
        &self.values[&(a, b)]
    }

    pub fn values(&self) -> &BTreeMap<(usize, usize), NComplex> {
        &self.values
    }

    pub fn right_action(&self, b: usize, a1: usize, a2: usize) -> &[Matrix] {
        &self.right[&(b, a1, a2)]
    }

    pub fn left_action(&self, a: usize, b1: usize, b2: usize) -> &[Matrix] {
        &self.left[&(a, b1, b2)]
    }

    /// `M(−, b)` as a right module over the right base.
    pub fn right_module(&self, b: usize) -> NdgModule {
        let values = (0..self.right_base.len()).map(|a| self.values[&(a, b)].clone()).collect();
        let action = self.right_base.pairs().map(|(a1, a2)| ((a1, a2), self.right[&(b, a1, a2)].clone())).collect();
        NdgModule::unchecked(Side::Right, &self.right_base, values, action).expect("complete bimodule data")
    }

    /// `M(a, −)` as a left module over the left base.
    pub fn left_module(&self, a: usize) -> NdgModule {
        let values = (0..self.left_base.len()).map(|b| self.values[&(a, b)].clone()).collect();
        let action = self.left_base.pairs().map(|(b1, b2)| ((b1, b2), self.left[&(a, b1, b2)].clone())).collect();
        NdgModule::unchecked(Side::Left, &self.left_base, values, action).expect("complete bimodule data")
    }
}

/// Module axioms on both sides plus middle associativity `f(mg) = (fm)g`.
pub fn validate_bimodule(m: &NdgBimodule) -> Result<()> {
    for b in 0..m.left_base.len() {
        validate_module(&m.right_module(b))?;
    }
    for a in 0..m.right_base.len() {
        validate_module(&m.left_module(a))?;
    }
    let (ca, cb) = (&m.right_base, &m.left_base);
    for (a1, a2) in ca.pairs() {
        for (b1, b2) in cb.pairs() {
            for f in 0..cb.hom_dim(b1, b2) {
                for g in 0..ca.hom_dim(a2, a1) {
                    let lhs = m.left_action(a2, b1, b2)[f].compose(&m.right_action(b1, a1, a2)[g]);
                    let rhs = m.right_action(b2, a1, a2)[g].compose(&m.left_action(a1, b1, b2)[f]);
                    if let Some(x) = first_diff_col(&lhs, &rhs) {
                        return Err(Error::AssocViolation {
                            witness: format!("f = {}, m = {x}, g = {}", cb.basis_name(b1, b2, f), ca.basis_name(a2, a1, g)),
                        });
                    }
                }
            }
        }
    }
    Ok(())
}

/// Degree-0 family `F_a: X(a) -> Y(a)` (global matrices) commuting with the
/// actions and differentials.
pub fn check_module_map(f: &[Matrix], x: &NdgModule, y: &NdgModule) -> std::result::Result<(), String> {
    if x.side != y.side || !same_base(&x.base, &y.base) {
        return Err("modules over different bases".into());
    }
    let cat = &*x.base;
    if f.len() != cat.len() {
        return Err(format!("{} components for {} objects", f.len(), cat.len()));
    }
    for (a, fa) in f.iter().enumerate() {
        if fa.shape() != (y.dim(a), x.dim(a)) {
            return Err(format!("component at {} has the wrong shape", cat.objects()[a]));
        }
        if global_differential(y.value(a)).compose(fa) != fa.compose(&global_differential(x.value(a))) {
            return Err(format!("component at {} is not a chain map", cat.objects()[a]));
        }
    }
    for (from, to) in cat.pairs() {
        for (k, (rx, ry)) in x.action(from, to).iter().zip(y.action(from, to)).enumerate() {
            if f[to].compose(rx) != ry.compose(&f[from]) {
                let (s, t) = x.side.acting(from, to);
                return Err(format!("not natural for {}", cat.basis_name(s, t, k)));
            }
        }
    }
    Ok(())
}
