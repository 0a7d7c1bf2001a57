//! Hom complexes between modules, tensor and hom over a category, and the
//! tensor-hom adjunction.

use std::collections::BTreeMap;

use serde::Serialize;

use super::{global_differential, global_map, graded_from_global, same_base, Flat, NdgBimodule, NdgModule, Side};
use crate::error::{Error, Result};
use crate::linalg::{Matrix, Vector};
use crate::ncx::{self, GradedMap, GradedSpace, KhomFlavor, NComplex, Quotient};
use crate::scalars::{Field, Scalar};

// ---------------------------------------------------------------- module hom complexes

/// `Hom_A(X, Y)`: natural families of graded maps, as a subcomplex of
/// `⊕_a hom(X(a), Y(a))`.
#[derive(Clone, Debug)]
pub struct ModuleHom {
    pub complex: NComplex,
    /// Degree `i`: columns spanning the natural families inside the
    /// ambient `⊕_a hom(X(a), Y(a))^i` (objects in order, hom coordinates).
    pub basis: BTreeMap<i64, Matrix>,
    field: Field,
    sources: Vec<GradedSpace>,
    targets: Vec<GradedSpace>,
}

/// `(row in Y, column in X)` of each hom coordinate in degree `i`.
fn hom_positions(x: &GradedSpace, y: &GradedSpace, i: i64) -> Vec<(usize, usize)> {
    let (xf, yf) = (Flat::new(x), Flat::new(y));
    let mut out = Vec::new();
    for (&l, &cols) in x.dims() {
        let rows = y.dim(l + i);
        for r in 0..rows {
            for c in 0..cols {
                out.push((yf.index(l + i, r), xf.index(l, c)));
            }
        }
    }
    out
}

impl ModuleHom {
    fn positions(&self, a: usize, i: i64) -> Vec<(usize, usize)> {
        hom_positions(&self.sources[a], &self.targets[a], i)
    }

    /// The family `F_a` (global matrices) with ambient coordinates `amb`.
    fn family_from_ambient(&self, i: i64, amb: &[Scalar]) -> Vec<Matrix> {
        let mut k = 0;
        (0..self.sources.len())
            .map(|a| {
                let mut m = Matrix::zeros(&self.field, self.targets[a].total_dim(), self.sources[a].total_dim());
                for (r, c) in self.positions(a, i) {
                    m.set(r, c, amb[k].clone());
                    k += 1;
                }
                m
            })
            .collect()
    }

    /// Basis element `g` of the complex as `(degree, family)`.
    pub fn element(&self, g: usize) -> (i64, Vec<Matrix>) {
        let fl = Flat::new(self.complex.space());
        let i = fl.degree(g);
        let amb = self.basis[&i].column(fl.local(g));
        (i, self.family_from_ambient(i, &amb))
    }

    /// Global coordinates of a degree-`i` family; fails if it is not natural.
    pub fn global_coordinates(&self, i: i64, family: &[Matrix]) -> Result<Vector> {
        let mut amb = Vec::new();
        for (a, m) in family.iter().enumerate() {
            for (r, c) in self.positions(a, i) {
                amb.push(m.get(r, c).clone());
            }
        }
        let fl = Flat::new(self.complex.space());
        let mut out = vec![self.field.zero(); fl.len()];
        if let Some(k) = self.basis.get(&i) {
            let c = k.solve(&amb).ok_or(Error::NotChainMap { degree: i })?;
            for (j, v) in c.into_iter().enumerate() {
                out[fl.index(i, j)] = v;
            }
        } else if amb.iter().any(|s| !s.is_zero()) {
            return Err(Error::NotChainMap { degree: i });
        }
        Ok(out)
    }
}

/// Degree-`i` pieces are kernels of the naturality system
/// `F_{a2} ∘ ρ_X(f) = ρ_Y(f) ∘ F_{a1}` over all basis `f`; the differential
/// is the restriction of `F ↦ d_Y F − q^i F d_X`.
pub fn module_hom_complex(x: &NdgModule, y: &NdgModule) -> Result<ModuleHom> {
    if !same_base(x.base(), y.base()) {
        return Err(Error::BaseMismatch);
    }
    if x.side() != Side::Right || y.side() != Side::Right {
        return Err(Error::WrongSide("module hom complexes are built for right modules".into()));
    }
    let cat = x.base();
    let field = cat.field().clone();
    let n = cat.len();
    let pieces: Vec<NComplex> = (0..n).map(|a| ncx::hom_complex(x.value(a), y.value(a))).collect::<Result<_>>()?;
    let mh = ModuleHom {
        complex: NComplex::zero(&field),
        basis: BTreeMap::new(),
        field: field.clone(),
        sources: x.values().iter().map(|v| v.space().clone()).collect(),
        targets: y.values().iter().map(|v| v.space().clone()).collect(),
    };
    let Some((lo, hi)) = pieces.iter().filter_map(|p| p.support()).reduce(|(a, b), (c, d)| (a.min(c), b.max(d))) else {
        return Ok(mh);
    };
    let mut basis = BTreeMap::new();
    for i in lo..=hi {
        let offs: Vec<usize> = pieces
            .iter()
            .scan(0, |acc, p| {
                let o = *acc;
                *acc += p.dim(i);
                Some(o)
            })
            .collect();
        let amb: usize = pieces.iter().map(|p| p.dim(i)).sum();
        if amb == 0 {
            continue;
        }
        let positions: Vec<Vec<(usize, usize)>> = (0..n).map(|a| mh.positions(a, i)).collect();
        let mut rows: Vec<Vector> = Vec::new();
        for (a1, a2) in cat.pairs() {
            let dx1 = x.dim(a1);
            for (rx, ry) in x.action(a1, a2).iter().zip(y.action(a1, a2)) {
                let mut eqs: BTreeMap<usize, Vector> = BTreeMap::new();
                let mut put = |row: usize, col: usize, v: &Scalar, neg: bool| {
                    let e = eqs.entry(row).or_insert_with(|| vec![field.zero(); amb]);
                    e[col] = if neg { field.sub(&e[col], v) } else { field.add(&e[col], v) };
                };
                for (p, &(r, c)) in positions[a2].iter().enumerate() {
                    for c2 in 0..dx1 {
                        let v = rx.get(c, c2);
                        if !v.is_zero() {
                            put(r * dx1 + c2, offs[a2] + p, v, false);
                        }
                    }
                }
                for (p, &(r, c)) in positions[a1].iter().enumerate() {
                    for r2 in 0..ry.rows() {
                        let v = ry.get(r2, r);
                        if !v.is_zero() {
                            put(r2 * dx1 + c, offs[a1] + p, v, true);
                        }
                    }
                }
                rows.extend(eqs.into_values().filter(|e| e.iter().any(|s| !s.is_zero())));
                if rows.len() > 2 * amb {
                    rows = reduce_rows(&field, rows, amb);
                }
            }
        }
        let k = if rows.is_empty() {
            Matrix::identity(&field, amb)
        } else {
            Matrix::from_rows(&field, rows)?.kernel()
        };
        if k.cols() > 0 {
            basis.insert(i, k);
        }
    }
    let space = GradedSpace::new(basis.iter().map(|(&i, k)| (i, k.cols())));
    let mut d = BTreeMap::new();
    for (&i, k) in &basis {
        let Some(next) = basis.get(&(i + 1)) else { continue };
        let blocks: Vec<Matrix> = pieces.iter().map(|p| p.d(i)).collect();
        let amb_d = Matrix::block_diag(&field, &blocks.iter().collect::<Vec<_>>());
        let image = amb_d.compose(k);
        let c = next.solve_matrix(&image).ok_or(Error::NotChainMap { degree: i })?;
        d.insert(i, c);
    }
    let complex = ncx::validate_ncomplex(&field, space, d)?;
    Ok(ModuleHom { complex, basis, ..mh })
}

fn reduce_rows(field: &Field, rows: Vec<Vector>, width: usize) -> Vec<Vector> {
    let m = Matrix::from_rows(field, rows).expect("rows of equal width");
    let e = m.echelon();
    (0..e.pivots.len()).map(|r| e.reduced.row(r)).filter(|r| r.len() == width).collect()
}

/// `Hom_K(X, Y)` in degree `n`: `H^n_(1)` (`Susp0`) or `H^{n+1}_(N−1)`
/// (`Susp1`) of the module hom complex.
pub fn khom_module(x: &NdgModule, y: &NdgModule, n: i64, flavor: KhomFlavor) -> Result<usize> {
    let h = module_hom_complex(x, y)?;
    match flavor {
        KhomFlavor::Susp0 => ncx::homology_dim(&h.complex, n, 1),
        KhomFlavor::Susp1 => ncx::homology_dim(&h.complex, n + 1, x.field().order() - 1),
    }
}

/// The Yoneda map `Hom_A(hom(−, a), X) -> X(a)`, `F ↦ F_a(1_a)`.
pub fn yoneda_map(x: &NdgModule, a: usize) -> Result<(ModuleHom, GradedMap)> {
    let cat = x.base();
    let rep = super::representable(cat, a, Side::Right)?;
    let h = module_hom_complex(&rep, x)?;
    let total = h.complex.space().total_dim();
    let field = cat.field();
    let mut m = Matrix::zeros(field, x.dim(a), total);
    for g in 0..total {
        let (_, fam) = h.element(g);
        for (r, v) in fam[a].apply(cat.unit(a)).into_iter().enumerate() {
            m.set(r, g, v);
        }
    }
    let phi = graded_from_global(field, &m, 0, h.complex.space(), x.value(a).space())?;
    Ok((h, phi))
}

// ---------------------------------------------------------------- tensor over a category

/// Per-object data of `X ⊗_B M`: the cover `⊕_b X(b) ⊗ M(a, b)` and its
/// quotient by the image of `ν`.
#[derive(Clone, Debug)]
pub struct TensorPiece {
    pub cover: NComplex,
    pub quotient: Quotient,
    x_spaces: Vec<GradedSpace>,
    m_spaces: Vec<GradedSpace>,
    offsets: BTreeMap<(i64, usize), usize>,
}

impl TensorPiece {
    /// Global index of `x ⊗ m` in the cover, for global indices `gx ∈ X(b)`
    /// and `gm ∈ M(a, b)`.
    pub fn index(&self, b: usize, gx: usize, gm: usize) -> usize {
        let (xf, mf) = (Flat::new(&self.x_spaces[b]), Flat::new(&self.m_spaces[b]));
        let (dx, dm) = (xf.degree(gx), mf.degree(gm));
        let inner = ncx::tensor_index(&self.x_spaces[b], &self.m_spaces[b], dx, xf.local(gx), dm, mf.local(gm));
        Flat::new(self.cover.space()).index(dx + dm, self.offsets[&(dx + dm, b)] + inner)
    }

    /// Projection cover -> quotient on global bases.
    pub fn projection(&self) -> Matrix {
        global_map(&self.quotient.proj)
    }

    pub fn section(&self) -> Matrix {
        global_map(&self.quotient.section)
    }
}

#[derive(Clone, Debug)]
pub struct TensorProduct {
    pub module: NdgModule,
    pub pieces: Vec<TensorPiece>,
}

/// `(X ⊗_B M)(a) = Cok ν_a` with `ν(x⊗b⊗m) = xb⊗m − x⊗bm`, and right
/// action `(x⊗m)g = x⊗mg`.
pub fn tensor_over_category(x: &NdgModule, m: &NdgBimodule) -> Result<TensorProduct> {
    if x.side() != Side::Right {
        return Err(Error::WrongSide("the first tensor factor must be a right module".into()));
    }
    if !same_base(x.base(), m.left_base()) {
        return Err(Error::BaseMismatch);
    }
    let cb = x.base();
    let ca = m.right_base();
    let field = ca.field();
    let mut pieces = Vec::new();
    for a in 0..ca.len() {
        let parts: Vec<NComplex> = (0..cb.len()).map(|b| ncx::tensor_complex(x.value(b), m.value(a, b))).collect::<Result<_>>()?;
        let cover = ncx::direct_sum(field, &parts.iter().collect::<Vec<_>>())?;
        let mut offsets = BTreeMap::new();
        for &deg in cover.space().dims().keys() {
            let mut acc = 0;
            for (b, p) in parts.iter().enumerate() {
                offsets.insert((deg, b), acc);
                acc += p.dim(deg);
            }
        }
        let mut piece = TensorPiece {
            quotient: Quotient {
                complex: NComplex::zero(field),
                proj: GradedMap::zero(field, 0, &GradedSpace::zero(), &GradedSpace::zero()),
                section: GradedMap::zero(field, 0, &GradedSpace::zero(), &GradedSpace::zero()),
            },
            x_spaces: x.values().iter().map(|v| v.space().clone()).collect(),
            m_spaces: (0..cb.len()).map(|b| m.value(a, b).space().clone()).collect(),
            offsets,
            cover,
        };
        let cf = Flat::new(piece.cover.space());
        let mut gens: BTreeMap<i64, Vec<Vector>> = BTreeMap::new();
        for (b1, b2) in cb.pairs() {
            let rx_all = x.action(b2, b1);
            let lm_all = m.left_action(a, b1, b2);
            for (rx, lm) in rx_all.iter().zip(lm_all) {
                for gx in 0..x.dim(b2) {
                    for gm in 0..m.value(a, b1).space().total_dim() {
                        let mut v = vec![field.zero(); cf.len()];
                        for g1 in 0..rx.rows() {
                            let s = rx.get(g1, gx);
                            if !s.is_zero() {
                                let idx = piece.index(b1, g1, gm);
                                v[idx] = field.add(&v[idx], s);
                            }
                        }
                        for g2 in 0..lm.rows() {
                            let s = lm.get(g2, gm);
                            if !s.is_zero() {
                                let idx = piece.index(b2, gx, g2);
                                v[idx] = field.sub(&v[idx], s);
                            }
                        }
                        if let Some(first) = v.iter().position(|s| !s.is_zero()) {
                            let deg = cf.degree(first);
                            gens.entry(deg).or_default().push(v[cf.range(deg)].to_vec());
                        }
                    }
                }
            }
        }
        let gens: BTreeMap<i64, Matrix> = gens
            .into_iter()
            .map(|(deg, cols)| (deg, Matrix::from_columns(field, piece.cover.dim(deg), &cols)))
            .collect();
        piece.quotient = ncx::quotient_complex(&piece.cover, &gens)?;
        pieces.push(piece);
    }
    let mut action = BTreeMap::new();
    for (a1, a2) in ca.pairs() {
        let (p2, s1) = (pieces[a2].projection(), pieces[a1].section());
        let mats = (0..ca.hom_dim(a2, a1))
            .map(|k| {
                let mut w = Matrix::zeros(field, pieces[a2].cover.space().total_dim(), pieces[a1].cover.space().total_dim());
                for b in 0..cb.len() {
                    let rm = &m.right_action(b, a1, a2)[k];
                    for gx in 0..x.dim(b) {
                        for gm in 0..rm.cols() {
                            for g2 in 0..rm.rows() {
                                let s = rm.get(g2, gm);
                                if !s.is_zero() {
                                    w.set(pieces[a2].index(b, gx, g2), pieces[a1].index(b, gx, gm), s.clone());
                                }
                            }
                        }
                    }
                }
                p2.compose(&w).compose(&s1)
            })
            .collect();
        action.insert((a1, a2), mats);
    }
    let values = pieces.iter().map(|p| p.quotient.complex.clone()).collect();
    let module = NdgModule::new(Side::Right, ca, values, action)?;
    Ok(TensorProduct { module, pieces })
}

// ---------------------------------------------------------------- hom over a category

#[derive(Clone, Debug)]
pub struct HomOver {
    pub module: NdgModule,
    /// `Hom_A(M(−, b), Y)` for each object `b`.
    pub pieces: Vec<ModuleHom>,
}

/// `Hom_A(M, Y)(b) = Hom_A(M(−, b), Y)` with `(Fg)_a(m) = F_a(gm)`.
pub fn hom_over_category(m: &NdgBimodule, y: &NdgModule) -> Result<HomOver> {
    if !same_base(m.right_base(), y.base()) {
        return Err(Error::BaseMismatch);
    }
    let ca = m.right_base();
    let cb = m.left_base();
    let field = cb.field();
    let pieces: Vec<ModuleHom> = (0..cb.len()).map(|b| module_hom_complex(&m.right_module(b), y)).collect::<Result<_>>()?;
    let mut action = BTreeMap::new();
    for (b1, b2) in cb.pairs() {
        let hf = cb.flat(b2, b1);
        let (src, tgt) = (&pieces[b1], &pieces[b2]);
        let mats = (0..hf.len())
            .map(|k| {
                let mut out = Matrix::zeros(field, tgt.complex.space().total_dim(), src.complex.space().total_dim());
                for g in 0..src.complex.space().total_dim() {
                    let (i, fam) = src.element(g);
                    let moved: Vec<Matrix> =
                        (0..ca.len()).map(|a| fam[a].compose(&m.left_action(a, b2, b1)[k])).collect();
                    let col = tgt.global_coordinates(i + hf.degree(k), &moved)?;
                    for (r, v) in col.into_iter().enumerate() {
                        out.set(r, g, v);
                    }
                }
                Ok(out)
            })
            .collect::<Result<Vec<_>>>()?;
        action.insert((b1, b2), mats);
    }
    let values = pieces.iter().map(|p| p.complex.clone()).collect();
    let module = NdgModule::new(Side::Right, cb, values, action)?;
    Ok(HomOver { module, pieces })
}

// ---------------------------------------------------------------- adjunction

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct AdjunctionReport {
    pub lhs_dims: BTreeMap<i64, usize>,
    pub rhs_dims: BTreeMap<i64, usize>,
    pub invertible: bool,
    pub commutes: bool,
    /// Dimensions of the degree-0 chain maps on both sides.
    pub chain_maps: (usize, usize),
    /// Dimensions of the homotopy classes on both sides.
    pub homotopy_classes: (usize, usize),
}

impl AdjunctionReport {
    pub fn passed(&self) -> bool {
        self.invertible
            && self.commutes
            && self.lhs_dims == self.rhs_dims
            && self.chain_maps.0 == self.chain_maps.1
            && self.homotopy_classes.0 == self.homotopy_classes.1
    }
}

fn chain_map_dim(c: &NComplex) -> usize {
    c.dim(0) - c.d(0).rank()
}

/// The map `α(F)_b(x)_a(m) = F_a(x ⊗ m)` from `Hom_A(X ⊗_B M, Y)` to
/// `Hom_B(X, Hom_A(M, Y))` on global bases, with both complexes.
pub fn adjunction_map(x: &NdgModule, m: &NdgBimodule, y: &NdgModule) -> Result<(ModuleHom, ModuleHom, Matrix)> {
    let t = tensor_over_category(x, m)?;
    let lhs = module_hom_complex(&t.module, y)?;
    let h = hom_over_category(m, y)?;
    let rhs = module_hom_complex(x, &h.module)?;
    let field = x.field();
    let cb = x.base();
    let ca = m.right_base();
    let covers: Vec<Matrix> = t.pieces.iter().map(|p| p.projection()).collect();
    let (nl, nr) = (lhs.complex.space().total_dim(), rhs.complex.space().total_dim());
    let mut alpha = Matrix::zeros(field, nr, nl);
    for g in 0..nl {
        let (i, fam) = lhs.element(g);
        let through: Vec<Matrix> = (0..ca.len()).map(|a| fam[a].compose(&covers[a])).collect();
        let mut out = Vec::new();
        for b in 0..cb.len() {
            let xf = Flat::new(x.value(b).space());
            let mut col_b = Matrix::zeros(field, h.module.dim(b), x.dim(b));
            for gx in 0..x.dim(b) {
                let s = xf.degree(gx);
                let fam_b: Vec<Matrix> = (0..ca.len())
                    .map(|a| {
                        let dm = m.value(a, b).space().total_dim();
                        let cols: Vec<usize> = (0..dm).map(|gm| t.pieces[a].index(b, gx, gm)).collect();
                        through[a].select_cols(&cols)
                    })
                    .collect();
                let v = h.pieces[b].global_coordinates(s + i, &fam_b)?;
                for (r, val) in v.into_iter().enumerate() {
                    col_b.set(r, gx, val);
                }
            }
            out.push(col_b);
        }
        for (r, val) in rhs.global_coordinates(i, &out)?.into_iter().enumerate() {
            alpha.set(r, g, val);
        }
    }
    Ok((lhs, rhs, alpha))
}

/// Checks that `α` is an isomorphism of N-complexes and compares the
/// induced chain-map and homotopy-class dimensions.
pub fn adjunction_check(x: &NdgModule, m: &NdgBimodule, y: &NdgModule) -> Result<AdjunctionReport> {
    let (lhs, rhs, alpha) = adjunction_map(x, m, y)?;
    let invertible = alpha.is_square() && alpha.rank() == alpha.rows();
    let commutes =
        alpha.compose(&global_differential(&lhs.complex)) == global_differential(&rhs.complex).compose(&alpha);
    Ok(AdjunctionReport {
        lhs_dims: lhs.complex.space().dims().clone(),
        rhs_dims: rhs.complex.space().dims().clone(),
        invertible,
        commutes,
        chain_maps: (chain_map_dim(&lhs.complex), chain_map_dim(&rhs.complex)),
        homotopy_classes: (ncx::homology_dim(&lhs.complex, 0, 1)?, ncx::homology_dim(&rhs.complex, 0, 1)?),
    })
}

// ---------------------------------------------------------------- dual generators

#[derive(Clone, Copy, Debug, Serialize, PartialEq, Eq)]
pub struct DualCheck {
    /// `dim Hom_K(X, θ^n 𝔻(hom(a, −)))`.
    pub khom: usize,
    /// `dim H^{−n}_(N−1) X(a)`, the dimension of the dual of the homology
    /// that the hom space computes.
    pub homology: usize,
    /// `dim H^n_(1) X(a)`, which agrees with `khom` only in special cases.
    pub naive: usize,
}

impl DualCheck {
    pub fn holds(&self) -> bool {
        self.khom == self.homology
    }
}

/// Compares homotopy classes into the shifted dual of a left representable
/// with the homology of the value at `a`.
///
/// Dualizing an N-complex reverses degrees and swaps the amplitudes 1 and
/// N−1, so `H^n_(1) Hom(X(a), k)` is dual to `H^{−n}_(N−1) X(a)`.
pub fn khom_via_dual(x: &NdgModule, a: usize, n: i64) -> Result<DualCheck> {
    let cat = x.base();
    let dual = super::dual_module(&super::representable(cat, a, Side::Left)?)?;
    let target = super::apply_functor(&dual, super::ModuleFunctor::Theta(n))?;
    let v = x.value(a);
    Ok(DualCheck {
        khom: khom_module(x, &target, 0, KhomFlavor::Susp0)?,
        homology: ncx::homology_dim(v, -n, x.field().order() - 1)?,
        naive: ncx::homology_dim(v, n, 1)?,
    })
}
