//! N-complexes over the base field.
//!
//! Everything is bounded. A complex stores its graded dimensions and the
//! nonzero differentials `d^i: X^i -> X^{i+1}`; missing entries are zero.
//! Coproduct-style constructions (Q_r, suspension, direct sums) list their
//! summands in increasing index order, and hom/tensor bases are ordered
//! lexicographically by (source degree, first index, second index).

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::linalg::{subquotient_dim, Matrix, Vector};
use crate::scalars::{Field, Scalar};

#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct GradedSpace {
    dims: BTreeMap<i64, usize>,
}

impl GradedSpace {
    pub fn new(dims: impl IntoIterator<Item = (i64, usize)>) -> GradedSpace {
        let mut out = BTreeMap::new();
        for (i, d) in dims {
            if d > 0 {
                *out.entry(i).or_insert(0) += d;
            }
        }
        GradedSpace { dims: out }
    }

    pub fn zero() -> GradedSpace {
        GradedSpace::default()
    }

    pub fn concentrated(degree: i64, dim: usize) -> GradedSpace {
        GradedSpace::new([(degree, dim)])
    }

    pub fn dim(&self, i: i64) -> usize {
        self.dims.get(&i).copied().unwrap_or(0)
    }

    pub fn dims(&self) -> &BTreeMap<i64, usize> {
        &self.dims
    }

    pub fn support(&self) -> Option<(i64, i64)> {
        Some((*self.dims.keys().next()?, *self.dims.keys().next_back()?))
    }

    pub fn is_zero(&self) -> bool {
        self.dims.is_empty()
    }

    pub fn total_dim(&self) -> usize {
        self.dims.values().sum()
    }

    /// The space whose degree `m` piece is `self^{m+n}`.
    pub fn shift(&self, n: i64) -> GradedSpace {
        GradedSpace::new(self.dims.iter().map(|(&i, &d)| (i - n, d)))
    }

    pub fn direct_sum(parts: &[&GradedSpace]) -> GradedSpace {
        GradedSpace::new(parts.iter().flat_map(|s| s.dims.iter().map(|(&i, &d)| (i, d))))
    }
}

fn union_window(spaces: &[&GradedSpace]) -> Option<(i64, i64)> {
    spaces.iter().filter_map(|s| s.support()).reduce(|(a, b), (c, d)| (a.min(c), b.max(d)))
}

/// Offsets of consecutive summands of the given sizes.
fn offsets(sizes: &[usize]) -> Vec<usize> {
    let mut out = Vec::with_capacity(sizes.len());
    let mut acc = 0;
    for s in sizes {
        out.push(acc);
        acc += s;
    }
    out
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NComplex {
    field: Field,
    space: GradedSpace,
    d: BTreeMap<i64, Matrix>,
}

/// Checks shapes and that every run of N consecutive differentials
/// composes to zero.
pub fn validate_ncomplex(field: &Field, space: GradedSpace, d: BTreeMap<i64, Matrix>) -> Result<NComplex> {
    let x = NComplex::from_parts(field, space, d)?;
    x.check_nilpotent()?;
    Ok(x)
}

impl NComplex {
    /// Builds the complex after shape checks only.
    pub fn from_parts(field: &Field, space: GradedSpace, d: BTreeMap<i64, Matrix>) -> Result<NComplex> {
        let mut kept = BTreeMap::new();
        for (i, m) in d {
            if !m.field().same_arith(field) {
                return Err(Error::FieldMismatch);
            }
            if m.rows() != space.dim(i + 1) || m.cols() != space.dim(i) {
                return Err(Error::ShapeError(format!(
                    "differential at degree {i} is {}x{}, expected {}x{}",
                    m.rows(),
                    m.cols(),
                    space.dim(i + 1),
                    space.dim(i)
                )));
            }
            if !m.is_zero() {
                kept.insert(i, m);
            }
        }
        Ok(NComplex { field: field.clone(), space, d: kept })
    }

    pub fn zero(field: &Field) -> NComplex {
        NComplex { field: field.clone(), space: GradedSpace::zero(), d: BTreeMap::new() }
    }

    /// `space` with the zero differential.
    pub fn trivial(field: &Field, space: GradedSpace) -> NComplex {
        NComplex { field: field.clone(), space, d: BTreeMap::new() }
    }

    pub fn check_nilpotent(&self) -> Result<()> {
        let n = self.order();
        if let Some((lo, hi)) = self.space.support() {
            for i in lo..=hi {
                if !self.d_power(i, n).is_zero() {
                    return Err(Error::NotNDifferential { degree: i });
                }
            }
        }
        Ok(())
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn order(&self) -> usize {
        self.field.order()
    }

    pub fn space(&self) -> &GradedSpace {
        &self.space
    }

    pub fn dim(&self, i: i64) -> usize {
        self.space.dim(i)
    }

    pub fn support(&self) -> Option<(i64, i64)> {
        self.space.support()
    }

    pub fn differentials(&self) -> &BTreeMap<i64, Matrix> {
        &self.d
    }

    /// Same data viewed over `field`, which must share the arithmetic.
    pub fn with_field(&self, field: &Field) -> Result<NComplex> {
        if !self.field.same_arith(field) {
            return Err(Error::FieldMismatch);
        }
        Ok(NComplex { field: field.clone(), space: self.space.clone(), d: self.d.clone() })
    }

    pub fn d(&self, i: i64) -> Matrix {
        self.d.get(&i).cloned().unwrap_or_else(|| Matrix::zeros(&self.field, self.dim(i + 1), self.dim(i)))
    }

    /// `d^{i+t-1} ∘ ... ∘ d^i`; `t = 0` is the identity of `X^i`.
    pub fn d_power(&self, i: i64, t: usize) -> Matrix {
        let mut m = Matrix::identity(&self.field, self.dim(i));
        for k in 0..t as i64 {
            m = self.d(i + k).compose(&m);
        }
        m
    }

    pub fn identity_map(&self) -> GradedMap {
        GradedMap::identity(&self.field, &self.space)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GradedMap {
    field: Field,
    degree: i64,
    source: GradedSpace,
    target: GradedSpace,
    comps: BTreeMap<i64, Matrix>,
}

impl GradedMap {
    pub fn new(
        field: &Field,
        degree: i64,
        source: &GradedSpace,
        target: &GradedSpace,
        comps: BTreeMap<i64, Matrix>,
    ) -> Result<GradedMap> {
        let mut kept = BTreeMap::new();
        for (i, m) in comps {
            if !m.field().same_arith(field) {
                return Err(Error::FieldMismatch);
            }
            if m.rows() != target.dim(i + degree) || m.cols() != source.dim(i) {
                return Err(Error::ShapeError(format!(
                    "component at degree {i} is {}x{}, expected {}x{}",
                    m.rows(),
                    m.cols(),
                    target.dim(i + degree),
                    source.dim(i)
                )));
            }
            if !m.is_zero() {
                kept.insert(i, m);
            }
        }
        Ok(GradedMap { field: field.clone(), degree, source: source.clone(), target: target.clone(), comps: kept })
    }

    pub fn zero(field: &Field, degree: i64, source: &GradedSpace, target: &GradedSpace) -> GradedMap {
        GradedMap { field: field.clone(), degree, source: source.clone(), target: target.clone(), comps: BTreeMap::new() }
    }

    pub fn identity(field: &Field, space: &GradedSpace) -> GradedMap {
        let comps = space.dims().iter().map(|(&i, &d)| (i, Matrix::identity(field, d))).collect();
        GradedMap { field: field.clone(), degree: 0, source: space.clone(), target: space.clone(), comps }
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn degree(&self) -> i64 {
        self.degree
    }

    pub fn source(&self) -> &GradedSpace {
        &self.source
    }

    pub fn target(&self) -> &GradedSpace {
        &self.target
    }

    pub fn components(&self) -> &BTreeMap<i64, Matrix> {
        &self.comps
    }

    pub fn component(&self, i: i64) -> Matrix {
        self.comps
            .get(&i)
            .cloned()
            .unwrap_or_else(|| Matrix::zeros(&self.field, self.target.dim(i + self.degree), self.source.dim(i)))
    }

    pub fn is_zero(&self) -> bool {
        self.comps.is_empty()
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &GradedMap) -> Result<GradedMap> {
        if other.target != self.source {
            return Err(Error::ShapeError("composing maps with mismatched middle spaces".into()));
        }
        let comps = other
            .source
            .dims()
            .keys()
            .map(|&i| (i, self.component(i + other.degree).compose(&other.component(i))))
            .collect();
        GradedMap::new(&self.field, self.degree + other.degree, &other.source, &self.target, comps)
    }

    fn zip(&self, other: &GradedMap, op: impl Fn(&Matrix, &Matrix) -> Matrix) -> Result<GradedMap> {
        if self.degree != other.degree || self.source != other.source || self.target != other.target {
            return Err(Error::ShapeError("adding maps of different types".into()));
        }
        let comps = self.source.dims().keys().map(|&i| (i, op(&self.component(i), &other.component(i)))).collect();
        GradedMap::new(&self.field, self.degree, &self.source, &self.target, comps)
    }

    pub fn add(&self, other: &GradedMap) -> Result<GradedMap> {
        self.zip(other, Matrix::add)
    }

    pub fn sub(&self, other: &GradedMap) -> Result<GradedMap> {
        self.zip(other, Matrix::sub)
    }

    pub fn scale(&self, s: &Scalar) -> GradedMap {
        let comps = self.comps.iter().map(|(&i, m)| (i, m.scale(s))).filter(|(_, m)| !m.is_zero()).collect();
        GradedMap { comps, ..self.clone() }
    }

    pub fn neg(&self) -> GradedMap {
        let comps = self.comps.iter().map(|(&i, m)| (i, m.neg())).collect();
        GradedMap { comps, ..self.clone() }
    }

    /// Same components, reinterpreted over a field with the same arithmetic.
    pub fn with_field(&self, field: &Field) -> GradedMap {
        GradedMap { field: field.clone(), ..self.clone() }
    }

    /// Degreewise invertible degree-0 map.
    pub fn inverse(&self) -> Option<GradedMap> {
        if self.degree != 0 || self.source != self.target {
            return None;
        }
        let mut comps = BTreeMap::new();
        for &i in self.source.dims().keys() {
            comps.insert(i, self.component(i).inverse()?);
        }
        GradedMap::new(&self.field, 0, &self.target, &self.source, comps).ok()
    }
}

/// `d_Y ∘ F − q^r F ∘ d_X` for `F` of degree `r`.
pub fn hom_differential(f: &GradedMap, x: &NComplex, y: &NComplex) -> Result<GradedMap> {
    check_map_spaces(f, x, y)?;
    let r = f.degree();
    let qr = x.field.q_pow(r);
    let comps = x
        .space()
        .dims()
        .keys()
        .map(|&i| {
            let a = y.d(i + r).compose(&f.component(i));
            let b = f.component(i + 1).compose(&x.d(i)).scale(&qr);
            (i, a.sub(&b))
        })
        .collect();
    GradedMap::new(&x.field, r + 1, x.space(), y.space(), comps)
}

fn check_map_spaces(f: &GradedMap, x: &NComplex, y: &NComplex) -> Result<()> {
    if f.source() != x.space() || f.target() != y.space() {
        return Err(Error::ShapeError("map does not run between the given complexes".into()));
    }
    Ok(())
}

/// Fails with the first degree where `F` does not commute with `d`.
pub fn check_chain_map(f: &GradedMap, x: &NComplex, y: &NComplex) -> Result<()> {
    let df = hom_differential(f, x, y)?;
    if let Some((&i, _)) = df.components().iter().next() {
        return Err(Error::NotChainMap { degree: i });
    }
    Ok(())
}

#[derive(Clone, Debug)]
pub struct HomologySlice {
    pub i: i64,
    pub r: usize,
    pub z_dim: usize,
    pub b_dim: usize,
    pub h_dim: usize,
    pub z_basis: Matrix,
    pub b_basis: Matrix,
}

/// `H^i_(r)(X) = ker d^r at i / im d^{N-r} into i`.
pub fn homology(x: &NComplex, i: i64, r: usize) -> Result<HomologySlice> {
    let n = x.order();
    if r == 0 || r >= n {
        return Err(Error::OutOfRange(format!("amplitude r = {r} must lie in 1..{}", n - 1)));
    }
    let z_basis = x.d_power(i, r).kernel();
    let b_basis = x.d_power(i - (n - r) as i64, n - r).image();
    let h_dim = subquotient_dim(&z_basis, &b_basis)?;
    Ok(HomologySlice { i, r, z_dim: z_basis.cols(), b_dim: b_basis.cols(), h_dim, z_basis, b_basis })
}

pub fn homology_dim(x: &NComplex, i: i64, r: usize) -> Result<usize> {
    Ok(homology(x, i, r)?.h_dim)
}

/// Amplitudes to inspect: `{1}` (resp. `{1, N-1}`) is enough by theory,
/// `all_r` checks every amplitude.
fn amplitudes(n: usize, quasi: bool, all_r: bool) -> Vec<usize> {
    if all_r {
        (1..n).collect()
    } else if quasi && n > 2 {
        vec![1, n - 1]
    } else {
        vec![1]
    }
}

pub fn is_acyclic(x: &NComplex) -> bool {
    is_acyclic_with(x, false)
}

pub fn is_acyclic_with(x: &NComplex, all_r: bool) -> bool {
    let Some((lo, hi)) = x.support() else {
        return true;
    };
    amplitudes(x.order(), false, all_r)
        .into_iter()
        .all(|r| (lo..=hi).all(|i| homology_dim(x, i, r).expect("d^N = 0 holds") == 0))
}

/// First degree with nonzero `H_(1)`, if any.
fn first_nonacyclic(x: &NComplex) -> Option<(i64, usize)> {
    let (lo, hi) = x.support()?;
    (lo..=hi).map(|i| (i, homology_dim(x, i, 1).expect("d^N = 0 holds"))).find(|&(_, h)| h > 0)
}

/// Rank of the map `H^i_(r_src)(src) -> H^{i+deg}_(r_tgt)(tgt)` induced by `f`.
pub fn induced_rank(f: &GradedMap, src: &NComplex, tgt: &NComplex, i: i64, r_src: usize, r_tgt: usize) -> Result<usize> {
    let hs = homology(src, i, r_src)?;
    let ht = homology(tgt, i + f.degree(), r_tgt)?;
    let image = f.component(i).compose(&hs.z_basis);
    let joint = Matrix::hstack(&[&image, &ht.b_basis]).rank();
    Ok(joint - ht.b_dim)
}

/// Whether `f` maps `H^i_(r_src)(src)` to zero in `H_(r_tgt)(tgt)`.
fn induced_is_zero(f: &GradedMap, src: &NComplex, tgt: &NComplex, i: i64, r_src: usize, r_tgt: usize) -> Result<bool> {
    Ok(induced_rank(f, src, tgt, i, r_src, r_tgt)? == 0)
}

pub fn is_quasi_iso(f: &GradedMap, x: &NComplex, y: &NComplex) -> Result<bool> {
    is_quasi_iso_with(f, x, y, false)
}

pub fn is_quasi_iso_with(f: &GradedMap, x: &NComplex, y: &NComplex, all_r: bool) -> Result<bool> {
    check_chain_map(f, x, y)?;
    let Some((lo, hi)) = union_window(&[x.space(), y.space()]) else {
        return Ok(true);
    };
    for r in amplitudes(x.order(), true, all_r) {
        for i in lo..=hi {
            let hx = homology_dim(x, i, r)?;
            let hy = homology_dim(y, i, r)?;
            if hx != hy || induced_rank(f, x, y, i, r, r)? != hx {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

pub fn direct_sum(field: &Field, parts: &[&NComplex]) -> Result<NComplex> {
    let space = GradedSpace::direct_sum(&parts.iter().map(|p| p.space()).collect::<Vec<_>>());
    let mut d = BTreeMap::new();
    if let Some((lo, hi)) = space.support() {
        for i in lo..hi {
            let blocks: Vec<Matrix> = parts.iter().map(|p| p.d(i)).collect();
            d.insert(i, Matrix::block_diag(field, &blocks.iter().collect::<Vec<_>>()));
        }
    }
    validate_ncomplex(field, space, d)
}

pub fn direct_sum_maps(field: &Field, parts: &[&GradedMap]) -> Result<GradedMap> {
    let degree = parts.first().map_or(0, |p| p.degree());
    if parts.iter().any(|p| p.degree() != degree) {
        return Err(Error::ShapeError("summands of different degrees".into()));
    }
    let source = GradedSpace::direct_sum(&parts.iter().map(|p| p.source()).collect::<Vec<_>>());
    let target = GradedSpace::direct_sum(&parts.iter().map(|p| p.target()).collect::<Vec<_>>());
    let comps = source
        .dims()
        .keys()
        .map(|&i| {
            let blocks: Vec<Matrix> = parts.iter().map(|p| p.component(i)).collect();
            (i, Matrix::block_diag(field, &blocks.iter().collect::<Vec<_>>()))
        })
        .collect();
    GradedMap::new(field, degree, &source, &target, comps)
}

/// `k -> k -> ... -> k` with identity maps, `len` copies starting at `start`.
pub fn standard_block(field: &Field, start: i64, len: usize) -> Result<NComplex> {
    let space = GradedSpace::new((0..len as i64).map(|k| (start + k, 1)));
    let d = (0..len as i64 - 1).map(|k| (start + k, Matrix::identity(field, 1))).collect();
    validate_ncomplex(field, space, d)
}

// ---------------------------------------------------------------- hom and tensor

#[derive(Clone, Debug)]
struct Block {
    l: i64,
    offset: usize,
    rows: usize,
    cols: usize,
}

/// Blocks `Hom(U^l, V^{l+i})` of the degree `i` hom space.
fn hom_layout(u: &GradedSpace, v: &GradedSpace, i: i64) -> (Vec<Block>, usize) {
    let mut blocks = Vec::new();
    let mut offset = 0;
    for (&l, &cols) in u.dims() {
        let rows = v.dim(l + i);
        if rows > 0 {
            blocks.push(Block { l, offset, rows, cols });
            offset += rows * cols;
        }
    }
    (blocks, offset)
}

fn hom_window(u: &GradedSpace, v: &GradedSpace) -> Option<(i64, i64)> {
    let (ulo, uhi) = u.support()?;
    let (vlo, vhi) = v.support()?;
    Some((vlo - uhi, vhi - ulo))
}

/// The q-twisted hom complex with `d(f) = d_V f − q^r f d_U`.
pub fn hom_complex(u: &NComplex, v: &NComplex) -> Result<NComplex> {
    let field = u.field();
    if !field.same_arith(v.field()) {
        return Err(Error::FieldMismatch);
    }
    let Some((lo, hi)) = hom_window(u.space(), v.space()) else {
        return Ok(NComplex::zero(field));
    };
    let layouts: BTreeMap<i64, (Vec<Block>, usize)> =
        (lo..=hi).map(|i| (i, hom_layout(u.space(), v.space(), i))).collect();
    let space = GradedSpace::new(layouts.iter().map(|(&i, (_, n))| (i, *n)));
    let mut d = BTreeMap::new();
    for i in lo..hi {
        let (src, ns) = &layouts[&i];
        let (tgt, nt) = &layouts[&(i + 1)];
        let find = |l: i64| tgt.iter().find(|b| b.l == l);
        let mut m = Matrix::zeros(field, *nt, *ns);
        let qi = field.neg(&field.q_pow(i));
        for b in src {
            let dv = v.d(b.l + i);
            let du = u.d(b.l - 1);
            for a in 0..b.rows {
                for c in 0..b.cols {
                    let col = b.offset + a * b.cols + c;
                    // d_V ∘ E_{a,c}: lands in block l.
                    if let Some(t) = find(b.l) {
                        for a2 in 0..t.rows {
                            let s = dv.get(a2, a);
                            if !s.is_zero() {
                                m.set(t.offset + a2 * t.cols + c, col, s.clone());
                            }
                        }
                    }
                    // -q^i E_{a,c} ∘ d_U: lands in block l-1.
                    if let Some(t) = find(b.l - 1) {
                        for c2 in 0..t.cols {
                            let s = du.get(c, c2);
                            if !s.is_zero() {
                                let idx = t.offset + a * t.cols + c2;
                                let v = field.mul_add(m.get(idx, col), &qi, s);
                                m.set(idx, col, v);
                            }
                        }
                    }
                }
            }
        }
        d.insert(i, m);
    }
    validate_ncomplex(field, space, d)
}

/// The graded map with coordinates `coords` in degree `i` of `hom_complex(u, v)`.
pub fn hom_element(u: &NComplex, v: &NComplex, i: i64, coords: &[Scalar]) -> Result<GradedMap> {
    let (blocks, n) = hom_layout(u.space(), v.space(), i);
    if coords.len() != n {
        return Err(Error::ShapeError(format!("expected {n} coordinates, got {}", coords.len())));
    }
    let field = u.field();
    let comps = blocks
        .iter()
        .map(|b| {
            (b.l, Matrix::from_fn(field, b.rows, b.cols, |r, c| coords[b.offset + r * b.cols + c].clone()))
        })
        .collect();
    GradedMap::new(field, i, u.space(), v.space(), comps)
}

/// Coordinates of `f` in its degree of `hom_complex(u, v)`.
pub fn hom_coordinates(f: &GradedMap, u: &NComplex, v: &NComplex) -> Result<Vector> {
    check_map_spaces(f, u, v)?;
    let (blocks, n) = hom_layout(u.space(), v.space(), f.degree());
    let mut out = vec![u.field().zero(); n];
    for b in &blocks {
        let m = f.component(b.l);
        for r in 0..b.rows {
            for c in 0..b.cols {
                out[b.offset + r * b.cols + c] = m.get(r, c).clone();
            }
        }
    }
    Ok(out)
}

/// `Σ_l (−1)^l q^{lr + l(l−1)/2} [n l] d_V^{n−l} ∘ f ∘ d_U^l` for `f` of degree `r`.
pub fn hom_power_explicit(f: &GradedMap, u: &NComplex, v: &NComplex, n: usize) -> Result<GradedMap> {
    check_map_spaces(f, u, v)?;
    let field = u.field();
    let r = f.degree();
    let mut comps: BTreeMap<i64, Matrix> = BTreeMap::new();
    for &i in u.space().dims().keys() {
        let mut acc = Matrix::zeros(field, v.dim(i + r + n as i64), u.dim(i));
        for l in 0..=n {
            let li = l as i64;
            let mut c = field.mul(&field.q_pow(li * r + li * (li - 1) / 2), &field.q_binomial(n, l)?);
            if l % 2 == 1 {
                c = field.neg(&c);
            }
            let term = v
                .d_power(i + li + r, n - l)
                .compose(&f.component(i + li))
                .compose(&u.d_power(i, l));
            acc.add_scaled(&c, &term);
        }
        comps.insert(i, acc);
    }
    GradedMap::new(field, r + n as i64, u.space(), v.space(), comps)
}

/// Blocks `U^l ⊗ V^{i-l}` of the degree `i` tensor space; rows = dim U^l,
/// cols = dim V^{i-l}.
fn tensor_layout(u: &GradedSpace, v: &GradedSpace, i: i64) -> (Vec<Block>, usize) {
    let mut blocks = Vec::new();
    let mut offset = 0;
    for (&l, &rows) in u.dims() {
        let cols = v.dim(i - l);
        if cols > 0 {
            blocks.push(Block { l, offset, rows, cols });
            offset += rows * cols;
        }
    }
    (blocks, offset)
}

fn tensor_window(u: &GradedSpace, v: &GradedSpace) -> Option<(i64, i64)> {
    let (ulo, uhi) = u.support()?;
    let (vlo, vhi) = v.support()?;
    Some((ulo + vlo, uhi + vhi))
}

/// Index of `u_a ⊗ v_b` (u in degree `l`) inside degree `i` of `u ⊗ v`.
pub fn tensor_index(u: &GradedSpace, v: &GradedSpace, l: i64, a: usize, m: i64, b: usize) -> usize {
    let (blocks, _) = tensor_layout(u, v, l + m);
    let blk = blocks.iter().find(|x| x.l == l).expect("nonzero tensor block");
    blk.offset + a * blk.cols + b
}

/// The q-twisted tensor complex with `d(u⊗v) = du⊗v + q^s u⊗dv`, `s = deg u`.
pub fn tensor_complex(u: &NComplex, v: &NComplex) -> Result<NComplex> {
    let field = u.field();
    if !field.same_arith(v.field()) {
        return Err(Error::FieldMismatch);
    }
    let Some((lo, hi)) = tensor_window(u.space(), v.space()) else {
        return Ok(NComplex::zero(field));
    };
    let layouts: BTreeMap<i64, (Vec<Block>, usize)> =
        (lo..=hi).map(|i| (i, tensor_layout(u.space(), v.space(), i))).collect();
    let space = GradedSpace::new(layouts.iter().map(|(&i, (_, n))| (i, *n)));
    let mut d = BTreeMap::new();
    for i in lo..hi {
        let (src, ns) = &layouts[&i];
        let (tgt, nt) = &layouts[&(i + 1)];
        let find = |l: i64| tgt.iter().find(|b| b.l == l);
        let mut m = Matrix::zeros(field, *nt, *ns);
        for b in src {
            let du = u.d(b.l);
            let dv = v.d(i - b.l);
            let ql = field.q_pow(b.l);
            for a in 0..b.rows {
                for c in 0..b.cols {
                    let col = b.offset + a * b.cols + c;
                    if let Some(t) = find(b.l + 1) {
                        for a2 in 0..t.rows {
                            let s = du.get(a2, a);
                            if !s.is_zero() {
                                m.set(t.offset + a2 * t.cols + c, col, s.clone());
                            }
                        }
                    }
                    if let Some(t) = find(b.l) {
                        for c2 in 0..t.cols {
                            let s = dv.get(c2, c);
                            if !s.is_zero() {
                                let idx = t.offset + a * t.cols + c2;
                                let val = field.mul_add(m.get(idx, col), &ql, s);
                                m.set(idx, col, val);
                            }
                        }
                    }
                }
            }
        }
        d.insert(i, m);
    }
    validate_ncomplex(field, space, d)
}

/// `d^n(u⊗v) = Σ_l q^{ls} [n l] d^{n−l}u ⊗ d^l v` as a matrix on degree `i`.
pub fn tensor_power_explicit(u: &NComplex, v: &NComplex, i: i64, n: usize) -> Result<Matrix> {
    let field = u.field();
    let (src, ns) = tensor_layout(u.space(), v.space(), i);
    let target = i + n as i64;
    let (tgt, nt) = tensor_layout(u.space(), v.space(), target);
    let mut m = Matrix::zeros(field, nt, ns);
    for b in &src {
        let s = b.l;
        for l in 0..=n {
            let li = l as i64;
            let Some(t) = tgt.iter().find(|x| x.l == s + (n - l) as i64) else {
                continue;
            };
            let coeff = field.mul(&field.q_pow(li * s), &field.q_binomial(n, l)?);
            if coeff.is_zero() {
                continue;
            }
            let du = u.d_power(s, n - l);
            let dv = v.d_power(i - s, l);
            for a in 0..b.rows {
                for c in 0..b.cols {
                    let col = b.offset + a * b.cols + c;
                    for a2 in 0..t.rows {
                        let x = du.get(a2, a);
                        if x.is_zero() {
                            continue;
                        }
                        for c2 in 0..t.cols {
                            let y = dv.get(c2, c);
                            if y.is_zero() {
                                continue;
                            }
                            let idx = t.offset + a2 * t.cols + c2;
                            let val = field.add(m.get(idx, col), &field.mul(&coeff, &field.mul(x, y)));
                            m.set(idx, col, val);
                        }
                    }
                }
            }
        }
    }
    Ok(m)
}

/// The swap `U ⊗ V -> V ⊗' U`, where `⊗'` uses the inverse root, sending
/// `u ⊗ v` (degrees r, s) to `q^{-rs} v ⊗ u`. Returns the target complex
/// (over the inverse-root field) and the map.
pub fn braiding_iso(u: &NComplex, v: &NComplex) -> Result<(NComplex, GradedMap)> {
    let field = u.field();
    let inv = field.inverse_root();
    let source = tensor_complex(u, v)?;
    let target = tensor_complex(&v.with_field(&inv)?, &u.with_field(&inv)?)?;
    let mut comps = BTreeMap::new();
    if let Some((lo, hi)) = source.support() {
        for i in lo..=hi {
            let (src, _) = tensor_layout(u.space(), v.space(), i);
            let (tgt, _) = tensor_layout(v.space(), u.space(), i);
            let mut m = Matrix::zeros(field, target.dim(i), source.dim(i));
            for b in &src {
                let (r, s) = (b.l, i - b.l);
                let t = tgt.iter().find(|x| x.l == s).expect("swapped block");
                let c = field.q_pow(-r * s);
                for a in 0..b.rows {
                    for bb in 0..b.cols {
                        m.set(t.offset + bb * t.cols + a, b.offset + a * b.cols + bb, c.clone());
                    }
                }
            }
            comps.insert(i, m);
        }
    }
    let map = GradedMap::new(field, 0, source.space(), target.space(), comps)?;
    check_chain_map(&map, &source, &target.with_field(field)?)?;
    Ok((target, map))
}

// ---------------------------------------------------------------- functors

/// `θ^n X`: degree `m` is `X^{m+n}`, differential scaled by `q^{-n}`.
pub fn theta_shift(x: &NComplex, n: i64) -> NComplex {
    let field = x.field();
    let s = field.q_pow(-n);
    let d = x.d.iter().map(|(&i, m)| (i - n, m.scale(&s))).collect();
    NComplex { field: field.clone(), space: x.space.shift(n), d }
}

/// `θ^n F` for a map `F: X -> Y`.
pub fn theta_shift_map(f: &GradedMap, n: i64) -> GradedMap {
    let comps = f.comps.iter().map(|(&i, m)| (i - n, m.clone())).collect();
    GradedMap {
        field: f.field.clone(),
        degree: f.degree,
        source: f.source.shift(n),
        target: f.target.shift(n),
        comps,
    }
}

/// `(U_r X)^n = X^{n+r}`.
pub fn u_functor(r: i64, x: &NComplex) -> GradedSpace {
    x.space().shift(r)
}

pub fn u_functor_map(r: i64, f: &GradedMap) -> GradedMap {
    theta_shift_map(f, r)
}

/// Summand dimensions of `(Q_r M)^n`: `M^{r+n-N+i}` for `i = 1..N`.
fn q_summands(m: &GradedSpace, n_ord: usize, r: i64, n: i64) -> Vec<usize> {
    (1..=n_ord as i64).map(|i| m.dim(r + n - n_ord as i64 + i)).collect()
}

fn q_window(m: &GradedSpace, n_ord: usize, r: i64) -> Option<(i64, i64)> {
    let (lo, hi) = m.support()?;
    Some((lo - r, hi - r + n_ord as i64 - 1))
}

/// Shift matrix sending summand `i+1` of the source to summand `i` of the
/// target, for summand sizes `src` and `tgt` with `tgt[i] == src[i+1]`.
fn staircase(field: &Field, src: &[usize], tgt: &[usize]) -> Matrix {
    let so = offsets(src);
    let to = offsets(tgt);
    let mut m = Matrix::zeros(field, tgt.iter().sum(), src.iter().sum());
    for i in 0..tgt.len().min(src.len().saturating_sub(1)) {
        debug_assert_eq!(tgt[i], src[i + 1]);
        m.set_block(to[i], so[i + 1], &Matrix::identity(field, tgt[i]));
    }
    m
}

/// `Q_r M` with the shift differential `J`.
pub fn q_functor(field: &Field, r: i64, m: &GradedSpace) -> Result<NComplex> {
    let n_ord = field.order();
    let Some((lo, hi)) = q_window(m, n_ord, r) else {
        return Ok(NComplex::zero(field));
    };
    let space = GradedSpace::new((lo..=hi).map(|n| (n, q_summands(m, n_ord, r, n).iter().sum())));
    let d = (lo..hi)
        .map(|n| (n, staircase(field, &q_summands(m, n_ord, r, n), &q_summands(m, n_ord, r, n + 1))))
        .collect();
    validate_ncomplex(field, space, d)
}

/// `Q_r F` for a degree-0 graded map `F: M -> M'`.
pub fn q_functor_map(field: &Field, r: i64, f: &GradedMap) -> Result<GradedMap> {
    let n_ord = field.order() as i64;
    let src = q_functor(field, r, f.source())?;
    let tgt = q_functor(field, r, f.target())?;
    let comps = src
        .space()
        .dims()
        .keys()
        .map(|&n| {
            let blocks: Vec<Matrix> = (1..=n_ord).map(|i| f.component(r + n - n_ord + i)).collect();
            (n, Matrix::block_diag(field, &blocks.iter().collect::<Vec<_>>()))
        })
        .collect();
    GradedMap::new(field, f.degree(), src.space(), tgt.space(), comps)
}

/// Degree `m` summands `X^{m+shift+j}`, `j = 1..N-1`.
fn sigma_summands(x: &GradedSpace, n_ord: usize, shift: i64, m: i64) -> Vec<usize> {
    (1..n_ord as i64).map(|j| x.dim(m + shift + j)).collect()
}

/// Shared builder for Σ (`shift = 0`) and Σ⁻¹ (`shift = -N`): the
/// staircase on the first N-2 rows and `(−d^{N−1}, …, −d)` on the last.
fn sigma_like(x: &NComplex, shift: i64) -> Result<NComplex> {
    let field = x.field();
    let n_ord = x.order();
    let Some((lo, hi)) = x.support() else {
        return Ok(NComplex::zero(field));
    };
    let (mlo, mhi) = (lo - shift - n_ord as i64 + 1, hi - shift - 1);
    let space = GradedSpace::new((mlo..=mhi).map(|m| (m, sigma_summands(x.space(), n_ord, shift, m).iter().sum())));
    let mut d = BTreeMap::new();
    for m in mlo..mhi {
        let src = sigma_summands(x.space(), n_ord, shift, m);
        let tgt = sigma_summands(x.space(), n_ord, shift, m + 1);
        let mut mat = staircase(field, &src, &tgt);
        let so = offsets(&src);
        let to = offsets(&tgt);
        let last = n_ord - 2;
        let top = m + shift + n_ord as i64;
        for j in 1..n_ord {
            let block = x.d_power(m + shift + j as i64, n_ord - j).neg();
            debug_assert_eq!(block.rows(), x.dim(top));
            mat.set_block(to[last], so[j - 1], &block);
        }
        d.insert(m, mat);
    }
    validate_ncomplex(field, space, d)
}

/// `(ΣX)^m = ⊕_{i=1}^{N-1} X^{m+i}`.
pub fn suspend(x: &NComplex) -> Result<NComplex> {
    sigma_like(x, 0)
}

/// `(Σ⁻¹X)^m = ⊕_{i=1}^{N-1} X^{m-N+i}`.
pub fn desuspend(x: &NComplex) -> Result<NComplex> {
    sigma_like(x, -(x.order() as i64))
}

fn sigma_like_map(f: &GradedMap, n_ord: usize, shift: i64) -> Result<GradedMap> {
    let field = f.field();
    let src = sigma_space(f.source(), n_ord, shift);
    let tgt = sigma_space(f.target(), n_ord, shift);
    let comps = src
        .dims()
        .keys()
        .map(|&m| {
            let blocks: Vec<Matrix> = (1..n_ord as i64).map(|j| f.component(m + shift + j)).collect();
            (m, Matrix::block_diag(field, &blocks.iter().collect::<Vec<_>>()))
        })
        .collect();
    GradedMap::new(field, f.degree(), &src, &tgt, comps)
}

fn sigma_space(x: &GradedSpace, n_ord: usize, shift: i64) -> GradedSpace {
    let Some((lo, hi)) = x.support() else {
        return GradedSpace::zero();
    };
    GradedSpace::new(
        (lo - shift - n_ord as i64 + 1..=hi - shift - 1).map(|m| (m, sigma_summands(x, n_ord, shift, m).iter().sum())),
    )
}

pub fn suspend_map(f: &GradedMap) -> Result<GradedMap> {
    sigma_like_map(f, f.field().order(), 0)
}

pub fn desuspend_map(f: &GradedMap) -> Result<GradedMap> {
    let n = f.field().order();
    sigma_like_map(f, n, -(n as i64))
}

/// The maps of `0 -> Σ⁻¹X -ε-> Q_0U_0X -π-> X -> 0` and
/// `0 -> X -η-> Q_{N-1}U_0X -δ-> ΣX -> 0`.
#[derive(Clone, Debug)]
pub struct CanonicalMaps {
    pub desusp: NComplex,
    pub q0: NComplex,
    pub q_top: NComplex,
    pub susp: NComplex,
    pub epsilon: GradedMap,
    pub pi: GradedMap,
    pub eta: GradedMap,
    pub delta: GradedMap,
}

/// `π: Q_0U_0X -> X`, `x ↦ Σ_i d^{N-i} x_i` with `x_i ∈ X^{m-N+i}`.
pub fn counit_pi(x: &NComplex) -> Result<(NComplex, GradedMap)> {
    let field = x.field();
    let n_ord = x.order() as i64;
    let q0 = q_functor(field, 0, x.space())?;
    let comps = q0
        .space()
        .dims()
        .keys()
        .map(|&m| {
            let blocks: Vec<Matrix> = (1..=n_ord).map(|i| x.d_power(m - n_ord + i, (n_ord - i) as usize)).collect();
            (m, Matrix::hstack(&blocks.iter().collect::<Vec<_>>()))
        })
        .collect();
    let pi = GradedMap::new(field, 0, q0.space(), x.space(), comps)?;
    Ok((q0, pi))
}

/// `η: X -> Q_{N-1}U_0X`, `x ↦ (x, dx, …, d^{N-1}x)`.
pub fn unit_eta(x: &NComplex) -> Result<(NComplex, GradedMap)> {
    let field = x.field();
    let n_ord = x.order();
    let qt = q_functor(field, n_ord as i64 - 1, x.space())?;
    let comps = x
        .space()
        .dims()
        .keys()
        .map(|&m| {
            let blocks: Vec<Matrix> = (0..n_ord).map(|t| x.d_power(m, t)).collect();
            (m, Matrix::vstack(&blocks.iter().collect::<Vec<_>>()))
        })
        .collect();
    let eta = GradedMap::new(field, 0, x.space(), qt.space(), comps)?;
    Ok((qt, eta))
}

pub fn canonical_maps(x: &NComplex) -> Result<CanonicalMaps> {
    let field = x.field();
    let n_ord = x.order();
    let ni = n_ord as i64;
    let desusp = desuspend(x)?;
    let susp = suspend(x)?;
    let (q0, pi) = counit_pi(x)?;
    let (q_top, eta) = unit_eta(x)?;

    // ε: identity on the first N-1 summands, last row (−d^{N-1} … −d).
    let mut eps = BTreeMap::new();
    for &m in desusp.space().dims().keys() {
        let src: Vec<usize> = (1..ni).map(|j| x.dim(m - ni + j)).collect();
        let tgt: Vec<usize> = (1..=ni).map(|i| x.dim(m - ni + i)).collect();
        let so = offsets(&src);
        let to = offsets(&tgt);
        let mut mat = Matrix::zeros(field, tgt.iter().sum(), src.iter().sum());
        for j in 0..n_ord - 1 {
            mat.set_block(to[j], so[j], &Matrix::identity(field, src[j]));
            let p = x.d_power(m - ni + j as i64 + 1, n_ord - 1 - j).neg();
            mat.set_block(to[n_ord - 1], so[j], &p);
        }
        eps.insert(m, mat);
    }
    let epsilon = GradedMap::new(field, 0, desusp.space(), q0.space(), eps)?;

    // δ: row j has −d in column j and 1 in column j+1.
    let mut del = BTreeMap::new();
    for &m in q_top.space().dims().keys() {
        let src: Vec<usize> = (1..=ni).map(|i| x.dim(m + i - 1)).collect();
        let tgt: Vec<usize> = (1..ni).map(|j| x.dim(m + j)).collect();
        let so = offsets(&src);
        let to = offsets(&tgt);
        let mut mat = Matrix::zeros(field, tgt.iter().sum(), src.iter().sum());
        for j in 0..n_ord - 1 {
            mat.set_block(to[j], so[j], &x.d(m + j as i64).neg());
            mat.set_block(to[j], so[j + 1], &Matrix::identity(field, tgt[j]));
        }
        del.insert(m, mat);
    }
    let delta = GradedMap::new(field, 0, q_top.space(), susp.space(), del)?;

    check_chain_map(&epsilon, &desusp, &q0)?;
    check_chain_map(&pi, &q0, x)?;
    check_chain_map(&eta, x, &q_top)?;
    check_chain_map(&delta, &q_top, &susp)?;
    Ok(CanonicalMaps { desusp, q0, q_top, susp, epsilon, pi, eta, delta })
}

/// `ξ: Y -> U_r Q_{-r} Y`, inclusion of the last summand.
pub fn unit_xi(field: &Field, r: i64, y: &GradedSpace) -> Result<GradedMap> {
    let n_ord = field.order();
    let q = q_functor(field, -r, y)?;
    let uq = u_functor(r, &q);
    let comps = y
        .dims()
        .keys()
        .map(|&n| {
            let sizes: Vec<usize> = (1..=n_ord as i64).map(|i| y.dim(n - n_ord as i64 + i)).collect();
            let off = offsets(&sizes);
            let mut m = Matrix::zeros(field, sizes.iter().sum(), y.dim(n));
            m.set_block(off[n_ord - 1], 0, &Matrix::identity(field, y.dim(n)));
            (n, m)
        })
        .collect();
    GradedMap::new(field, 0, y, &uq, comps)
}

/// `ζ: U_r Q_{-r+N-1} Y -> Y`, projection onto the first summand.
pub fn counit_zeta(field: &Field, r: i64, y: &GradedSpace) -> Result<GradedMap> {
    let n_ord = field.order() as i64;
    let q = q_functor(field, -r + n_ord - 1, y)?;
    let uq = u_functor(r, &q);
    let comps = uq
        .dims()
        .keys()
        .map(|&n| {
            let total = uq.dim(n);
            let mut m = Matrix::zeros(field, y.dim(n), total);
            m.set_block(0, 0, &Matrix::identity(field, y.dim(n)));
            (n, m)
        })
        .collect();
    GradedMap::new(field, 0, &uq, y, comps)
}

// ---------------------------------------------------------------- homotopy

/// `Σ_l d^{N-l-1} ∘ S ∘ d^l` for `S: X -> Y` of degree `1-N`.
pub fn homotopy_sum(s: &GradedMap, x: &NComplex, y: &NComplex) -> Result<GradedMap> {
    check_map_spaces(s, x, y)?;
    let field = x.field();
    let n_ord = x.order();
    let deg = s.degree();
    let mut comps = BTreeMap::new();
    for &i in x.space().dims().keys() {
        let mut acc = Matrix::zeros(field, y.dim(i + deg + n_ord as i64 - 1), x.dim(i));
        for l in 0..n_ord {
            let li = l as i64;
            let term = y.d_power(i + li + deg, n_ord - 1 - l).compose(&s.component(i + li)).compose(&x.d_power(i, l));
            acc = acc.add(&term);
        }
        comps.insert(i, acc);
    }
    GradedMap::new(field, deg + n_ord as i64 - 1, x.space(), y.space(), comps)
}

/// A degree `1-N` map `S` with `homotopy_sum(S) = F`, if one exists.
pub fn null_homotopy(f: &GradedMap, x: &NComplex, y: &NComplex) -> Result<Option<GradedMap>> {
    check_chain_map(f, x, y)?;
    if f.degree() != 0 {
        return Err(Error::ShapeError("null_homotopy expects a degree-0 map".into()));
    }
    let n_ord = x.order();
    let h = hom_complex(x, y)?;
    let target = hom_coordinates(f, x, y)?;
    let deg = 1 - n_ord as i64;
    let a = h.d_power(deg, n_ord - 1);
    let Some(coords) = a.solve(&target) else {
        return Ok(None);
    };
    let s = hom_element(x, y, deg, &coords)?;
    debug_assert_eq!(homotopy_sum(&s, x, y)?, *f);
    Ok(Some(s))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum KhomFlavor {
    /// `Hom_K(θ^{-n}X, Y)`.
    Susp0,
    /// `Hom_K(θ^{-n}X, ΣY)`, computed as `H^{n+1}_(N-1)` of the hom complex.
    Susp1,
}

pub fn khom_dim(x: &NComplex, y: &NComplex, n: i64, flavor: KhomFlavor) -> Result<usize> {
    let h = hom_complex(x, y)?;
    match flavor {
        KhomFlavor::Susp0 => homology_dim(&h, n, 1),
        // Maps into ΣY land one degree up: H^{n+1}_(N-1), not H^n_(N-1).
        KhomFlavor::Susp1 => homology_dim(&h, n + 1, x.order() - 1),
    }
}

// ---------------------------------------------------------------- quotients and cones

/// A quotient complex with its projection and a degreewise section.
#[derive(Clone, Debug)]
pub struct Quotient {
    pub complex: NComplex,
    pub proj: GradedMap,
    pub section: GradedMap,
}

/// Quotient of `w` by the subcomplex spanned degreewise by the columns of
/// `gens` (which must be stable under `d`). The kept coordinates are the
/// non-pivot ones of the first-pivot rule.
pub fn quotient_complex(w: &NComplex, gens: &BTreeMap<i64, Matrix>) -> Result<Quotient> {
    let field = w.field();
    let mut proj = BTreeMap::new();
    let mut sect = BTreeMap::new();
    let mut dims = Vec::new();
    for (&i, &dim) in w.space().dims() {
        let g = gens.get(&i).cloned().unwrap_or_else(|| Matrix::zeros(field, dim, 0));
        if g.rows() != dim {
            return Err(Error::ShapeError(format!("generators at degree {i} have wrong length")));
        }
        let basis = g.image();
        let keep = basis.complement_coordinates();
        let pivot_rows: Vec<usize> = (0..dim).filter(|r| !keep.contains(r)).collect();
        let bp = basis.select_rows(&pivot_rows);
        let bc = basis.select_rows(&keep);
        let bp_inv = bp.inverse().expect("pivot rows of an image basis are independent");
        // P w = w_keep − B_keep B_piv^{-1} w_piv.
        let corr = bc.compose(&bp_inv).neg();
        let mut p = Matrix::zeros(field, keep.len(), dim);
        let mut s = Matrix::zeros(field, dim, keep.len());
        for (k, &row) in keep.iter().enumerate() {
            p.set(k, row, field.one());
            s.set(row, k, field.one());
        }
        for (j, &row) in pivot_rows.iter().enumerate() {
            for k in 0..keep.len() {
                p.set(k, row, corr.get(k, j).clone());
            }
        }
        dims.push((i, keep.len()));
        proj.insert(i, p);
        sect.insert(i, s);
    }
    let space = GradedSpace::new(dims);
    let mut d = BTreeMap::new();
    for &i in proj.keys() {
        if let (Some(s), Some(pn)) = (sect.get(&i), proj.get(&(i + 1))) {
            d.insert(i, pn.compose(&w.d(i)).compose(s));
        }
    }
    let complex = validate_ncomplex(field, space.clone(), d)?;
    let proj: BTreeMap<i64, Matrix> = proj.into_iter().filter(|(i, _)| space.dim(*i) > 0).collect();
    let sect: BTreeMap<i64, Matrix> = sect.into_iter().filter(|(i, _)| space.dim(*i) > 0).collect();
    let proj = GradedMap::new(field, 0, w.space(), &space, proj)?;
    let section = GradedMap::new(field, 0, &space, w.space(), sect)?;
    check_chain_map(&proj, w, &complex)?;
    Ok(Quotient { complex, proj, section })
}

#[derive(Clone, Debug)]
pub struct Triangle {
    pub x: NComplex,
    pub y: NComplex,
    pub z: NComplex,
    pub f: GradedMap,
    pub g: GradedMap,
    pub h: GradedMap,
}

/// Cone of `F: X -> Y` as the cokernel of `(η_X, −F)ᵀ: X -> Q_{N-1}U_0X ⊕ Y`.
pub fn cone(f: &GradedMap, x: &NComplex, y: &NComplex) -> Result<Triangle> {
    check_chain_map(f, x, y)?;
    if f.degree() != 0 {
        return Err(Error::ShapeError("cone expects a degree-0 map".into()));
    }
    let field = x.field();
    let maps = canonical_maps(x)?;
    let w = direct_sum(field, &[&maps.q_top, y])?;
    let mut gens = BTreeMap::new();
    for &m in w.space().dims().keys() {
        let top = maps.eta.component(m);
        let bottom = f.component(m).neg();
        gens.insert(m, Matrix::vstack(&[&top, &bottom]));
    }
    let quot = quotient_complex(&w, &gens)?;
    let z = quot.complex.clone();

    let mut inc = BTreeMap::new();
    let mut del = BTreeMap::new();
    for &m in w.space().dims().keys() {
        let (qd, yd) = (maps.q_top.dim(m), y.dim(m));
        let mut i_y = Matrix::zeros(field, qd + yd, yd);
        i_y.set_block(qd, 0, &Matrix::identity(field, yd));
        inc.insert(m, i_y);
        let mut dz = Matrix::zeros(field, maps.susp.dim(m), qd + yd);
        dz.set_block(0, 0, &maps.delta.component(m));
        del.insert(m, dz);
    }
    let inc = GradedMap::new(field, 0, y.space(), w.space(), inc.into_iter().filter(|(m, _)| y.dim(*m) > 0).collect())?;
    let delta0 = GradedMap::new(field, 0, w.space(), maps.susp.space(), del)?;
    let g = quot.proj.compose(&inc)?;
    let h = delta0.compose(&quot.section)?;
    check_chain_map(&g, y, &z)?;
    check_chain_map(&h, &z, &maps.susp)?;
    Ok(Triangle { x: x.clone(), y: y.clone(), z, f: f.clone(), g, h })
}

/// `c: ΣX -> X` of degree `r`, `x ↦ Σ_{k=1}^r d^{r-k} x_k`; induces
/// `H^i_(r)(ΣX) ≅ H^{i+r}_(N-r)(X)`.
pub fn suspension_comparison(x: &NComplex, r: usize) -> Result<GradedMap> {
    let field = x.field();
    let n_ord = x.order();
    let susp = suspend(x)?;
    let ri = r as i64;
    let comps = susp
        .space()
        .dims()
        .keys()
        .map(|&m| {
            let blocks: Vec<Matrix> = (1..n_ord)
                .map(|k| {
                    let ki = k as i64;
                    if k <= r {
                        x.d_power(m + ki, r - k)
                    } else {
                        Matrix::zeros(field, x.dim(m + ri), x.dim(m + ki))
                    }
                })
                .collect();
            (m, Matrix::hstack(&blocks.iter().collect::<Vec<_>>()))
        })
        .collect();
    GradedMap::new(field, ri, susp.space(), x.space(), comps)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum HexagonPosition {
    X,
    Y,
    Z,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HexagonEntry {
    pub position: HexagonPosition,
    pub degree: i64,
    pub r: usize,
    pub dim: usize,
    pub rank_in: usize,
    pub rank_out: usize,
    pub exact: bool,
}

#[derive(Clone, Debug)]
pub struct HexagonReport {
    pub entries: Vec<HexagonEntry>,
}

impl HexagonReport {
    pub fn all_exact(&self) -> bool {
        self.entries.iter().all(|e| e.exact)
    }
}

/// Degree window where some homology of the triangle can be nonzero.
pub fn triangle_window(t: &Triangle) -> (i64, i64) {
    let n = t.x.order() as i64;
    union_window(&[t.x.space(), t.y.space(), t.z.space()]).map_or((0, 0), |(lo, hi)| (lo - n, hi + n))
}

/// Exactness of the long sequence
/// `H^i_(r)X -> H^i_(r)Y -> H^i_(r)Z -> H^{i+r}_(N-r)X -> …` at each
/// position with degree in `window`.
pub fn hexagon_report(t: &Triangle, window: Option<(i64, i64)>) -> Result<HexagonReport> {
    let susp = suspend(&t.x)?;
    let as_triangle = |e: Error| Error::NotATriangle(e.to_string());
    check_chain_map(&t.f, &t.x, &t.y).map_err(as_triangle)?;
    check_chain_map(&t.g, &t.y, &t.z).map_err(as_triangle)?;
    check_chain_map(&t.h, &t.z, &susp).map_err(as_triangle)?;
    let n_ord = t.x.order();
    let (lo, hi) = window.unwrap_or_else(|| triangle_window(t));
    let conn: Vec<GradedMap> = (0..n_ord)
        .map(|r| if r == 0 { Ok(t.h.clone()) } else { suspension_comparison(&t.x, r)?.compose(&t.h) })
        .collect::<Result<_>>()?;

    let mut entries = Vec::new();
    for r in 1..n_ord {
        let s = n_ord - r;
        for i in lo..=hi {
            let si = s as i64;
            // At X: in = ∂ from H^{i-s}_(s)Z, out = F.
            let dim = homology_dim(&t.x, i, r)?;
            let rin = induced_rank(&conn[s], &t.z, &t.x, i - si, s, r)?;
            let rout = induced_rank(&t.f, &t.x, &t.y, i, r, r)?;
            let zero = induced_is_zero(&t.f.compose(&conn[s])?, &t.z, &t.y, i - si, s, r)?;
            entries.push(entry(HexagonPosition::X, i, r, dim, rin, rout, zero));
            // At Y: in = F, out = G.
            let dim = homology_dim(&t.y, i, r)?;
            let rin = rout;
            let rout = induced_rank(&t.g, &t.y, &t.z, i, r, r)?;
            let zero = induced_is_zero(&t.g.compose(&t.f)?, &t.x, &t.z, i, r, r)?;
            entries.push(entry(HexagonPosition::Y, i, r, dim, rin, rout, zero));
            // At Z: in = G, out = ∂ to H^{i+r}_(s)X.
            let dim = homology_dim(&t.z, i, r)?;
            let rin = rout;
            let rout = induced_rank(&conn[r], &t.z, &t.x, i, r, s)?;
            let zero = induced_is_zero(&conn[r].compose(&t.g)?, &t.y, &t.x, i, r, s)?;
            entries.push(entry(HexagonPosition::Z, i, r, dim, rin, rout, zero));
        }
    }
    entries.sort_by_key(|e| (e.degree, e.r, e.position));
    Ok(HexagonReport { entries })
}

fn entry(position: HexagonPosition, degree: i64, r: usize, dim: usize, rank_in: usize, rank_out: usize, zero: bool) -> HexagonEntry {
    HexagonEntry { position, degree, r, dim, rank_in, rank_out, exact: zero && rank_in + rank_out == dim }
}

// ---------------------------------------------------------------- contraction

#[derive(Clone, Debug)]
pub struct Contraction {
    /// Degree-0 isomorphism `g: X -> Y` with `g d_X = d_Y g`.
    pub basis_change: GradedMap,
    /// Direct sum of length-N staircase blocks.
    pub normal_form: NComplex,
    /// Start degree of each block, ascending.
    pub blocks: Vec<i64>,
}

/// Rewrites an acyclic complex as a sum of length-N staircase blocks.
///
/// In each degree `n` a complement `C^n` of `ker d^{N-1}` is chosen from
/// standard vectors; the vectors `d^{m-n} c` for `c ∈ C^n` then form a
/// basis of `X^m`, ordered by block start and then by `c`.
pub fn contract_acyclic(x: &NComplex) -> Result<Contraction> {
    let field = x.field();
    if let Some((degree, dim)) = first_nonacyclic(x) {
        return Err(Error::NotAcyclic { degree, dim });
    }
    let n_ord = x.order();
    let Some((lo, hi)) = x.support() else {
        let z = NComplex::zero(field);
        return Ok(Contraction { basis_change: z.identity_map(), normal_form: z, blocks: vec![] });
    };
    let mut gens: BTreeMap<i64, Vec<usize>> = BTreeMap::new();
    let mut blocks = Vec::new();
    for n in lo..=hi {
        let kernel = x.d_power(n, n_ord - 1).kernel();
        let chosen = kernel.extend_to_basis();
        blocks.extend(std::iter::repeat_n(n, chosen.len()));
        gens.insert(n, chosen);
    }
    let mut new_basis = BTreeMap::new();
    for m in lo..=hi {
        let mut cols: Vec<Vector> = Vec::new();
        for (&n, chosen) in gens.range(m - n_ord as i64 + 1..=m) {
            let power = x.d_power(n, (m - n) as usize);
            for &c in chosen {
                cols.push(power.column(c));
            }
        }
        if cols.len() != x.dim(m) {
            return Err(Error::NotAcyclic { degree: m, dim: x.dim(m).abs_diff(cols.len()) });
        }
        new_basis.insert(m, Matrix::from_columns(field, x.dim(m), &cols));
    }
    let mut comps = BTreeMap::new();
    for (&m, p) in &new_basis {
        let inv = p.inverse().ok_or(Error::NotAcyclic { degree: m, dim: 0 })?;
        comps.insert(m, inv);
    }
    let g = GradedMap::new(field, 0, x.space(), x.space(), comps)?;
    let parts: Vec<NComplex> = blocks.iter().map(|&s| standard_block(field, s, n_ord)).collect::<Result<_>>()?;
    let y = block_sum_by_start(field, &parts, &blocks)?;
    check_chain_map(&g, x, &y)?;
    Ok(Contraction { basis_change: g, normal_form: y, blocks })
}

/// Direct sum of blocks with each degree's basis ordered by block start,
/// matching the order used in [`contract_acyclic`].
fn block_sum_by_start(field: &Field, parts: &[NComplex], starts: &[i64]) -> Result<NComplex> {
    let space = GradedSpace::direct_sum(&parts.iter().map(|p| p.space()).collect::<Vec<_>>());
    let mut d = BTreeMap::new();
    if let Some((lo, hi)) = space.support() {
        for m in lo..hi {
            let src: Vec<usize> = parts.iter().map(|p| p.dim(m)).collect();
            let tgt: Vec<usize> = parts.iter().map(|p| p.dim(m + 1)).collect();
            let so = offsets(&src);
            let to = offsets(&tgt);
            let mut mat = Matrix::zeros(field, space.dim(m + 1), space.dim(m));
            for (k, p) in parts.iter().enumerate() {
                if src[k] > 0 && tgt[k] > 0 {
                    mat.set_block(to[k], so[k], &p.d(m));
                }
            }
            d.insert(m, mat);
        }
    }
    let _ = starts;
    validate_ncomplex(field, space, d)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalars::FieldSpec;

    fn f7n3() -> Field {
        Field::new(&FieldSpec::prime_with_root(7, 3, 2)).unwrap()
    }

    fn f7n2() -> Field {
        Field::new(&FieldSpec::prime(7, 2)).unwrap()
    }

    #[test]
    fn validate_examples() {
        let f = f7n3();
        assert!(standard_block(&f, 0, 3).is_ok());
        let g = f7n2();
        let err = standard_block(&g, 0, 4).unwrap_err();
        assert_eq!(err, Error::NotNDifferential { degree: 0 });
        let space = GradedSpace::new([(0, 2), (1, 1)]);
        assert!(validate_ncomplex(&f, space, BTreeMap::new()).is_ok());
    }

    #[test]
    fn d_power_examples() {
        let f = f7n3();
        let b = standard_block(&f, 0, 3).unwrap();
        assert_eq!(b.d_power(0, 2), Matrix::identity(&f, 1));
        assert_eq!(b.d_power(1, 0), Matrix::identity(&f, 1));
        assert!(b.d_power(0, 3).is_zero());
    }

    #[test]
    fn homology_of_block_and_point() {
        let f = f7n3();
        let b = standard_block(&f, 0, 3).unwrap();
        for i in -3..5 {
            for r in 1..3 {
                assert_eq!(homology_dim(&b, i, r).unwrap(), 0);
            }
        }
        assert!(is_acyclic(&b));
        let pt = NComplex::trivial(&f, GradedSpace::concentrated(0, 1));
        assert_eq!(homology_dim(&pt, 0, 1).unwrap(), 1);
        assert_eq!(homology_dim(&pt, 0, 2).unwrap(), 1);
        assert_eq!(homology_dim(&pt, 1, 1).unwrap(), 0);
        assert!(!is_acyclic(&pt));
        let two = direct_sum(&f, &[&b, &standard_block(&f, 1, 3).unwrap()]).unwrap();
        assert!(is_acyclic_with(&two, true));
    }

    #[test]
    fn q_functor_of_a_point() {
        let f = f7n3();
        let q = q_functor(&f, 0, &GradedSpace::concentrated(0, 1)).unwrap();
        assert_eq!(q.support(), Some((0, 2)));
        assert_eq!(q, standard_block(&f, 0, 3).unwrap());
        assert!(is_acyclic(&q));
    }

    #[test]
    fn theta_scales_differential() {
        let f = f7n3();
        let b = standard_block(&f, 0, 3).unwrap();
        let t = theta_shift(&b, 1);
        assert_eq!(t.support(), Some((-1, 1)));
        assert_eq!(t.d(-1), Matrix::from_i64(&f, &[&[4]]));
        assert_eq!(theta_shift(&b, 3).d(-3), Matrix::from_i64(&f, &[&[1]]));
    }

    #[test]
    fn suspension_of_a_point() {
        let f = f7n3();
        let pt = NComplex::trivial(&f, GradedSpace::concentrated(0, 1));
        let s = suspend(&pt).unwrap();
        assert_eq!(s.support(), Some((-2, -1)));
        assert_eq!(s.d(-2), Matrix::from_i64(&f, &[&[1]]));
        for r in 1..3 {
            assert_eq!(homology_dim(&s, -(r as i64), r).unwrap(), 1);
        }
        assert_eq!(suspend(&pt).unwrap(), desuspend(&theta_shift(&pt, 3)).unwrap());
    }

    #[test]
    fn null_homotopy_examples() {
        let f = f7n3();
        let b = standard_block(&f, 0, 3).unwrap();
        let s = null_homotopy(&b.identity_map(), &b, &b).unwrap().expect("block is contractible");
        assert_eq!(homotopy_sum(&s, &b, &b).unwrap(), b.identity_map());
        let pt = NComplex::trivial(&f, GradedSpace::concentrated(0, 1));
        assert!(null_homotopy(&pt.identity_map(), &pt, &pt).unwrap().is_none());
        let zero = GradedMap::zero(&f, 0, pt.space(), pt.space());
        assert!(null_homotopy(&zero, &pt, &pt).unwrap().is_some());
    }

    #[test]
    fn braiding_for_n2() {
        let f = Field::new(&FieldSpec::cyclotomic(2)).unwrap();
        let u = NComplex::trivial(&f, GradedSpace::concentrated(1, 1));
        let (_, b) = braiding_iso(&u, &u).unwrap();
        assert_eq!(b.component(2), Matrix::from_i64(&f, &[&[-1]]));
    }

    #[test]
    fn cone_of_identity_is_acyclic() {
        let f = f7n3();
        let x = direct_sum(&f, &[&standard_block(&f, 0, 2).unwrap(), &NComplex::trivial(&f, GradedSpace::concentrated(1, 1))])
            .unwrap();
        let t = cone(&x.identity_map(), &x, &x).unwrap();
        assert!(is_acyclic_with(&t.z, true));
        assert!(hexagon_report(&t, None).unwrap().all_exact());
    }

    #[test]
    fn contraction_of_block() {
        let f = f7n3();
        let b = standard_block(&f, 2, 3).unwrap();
        let c = contract_acyclic(&b).unwrap();
        assert_eq!(c.blocks, vec![2]);
        assert_eq!(c.basis_change, b.identity_map());
        let pt = NComplex::trivial(&f, GradedSpace::concentrated(0, 1));
        assert!(matches!(contract_acyclic(&pt), Err(Error::NotAcyclic { .. })));
    }
}
