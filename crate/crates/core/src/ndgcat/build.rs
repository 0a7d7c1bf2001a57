//! Standard categories, representables, duals, objectwise functors and
//! random instances.

use std::collections::BTreeMap;
use std::sync::Arc;

use rand::Rng;

use super::{global_differential, graded_from_global, Flat, NdgBimodule, NdgCategory, NdgModule, Side};
use crate::error::{Error, Result};
use crate::linalg::{zero_vector, Matrix, Vector};
use crate::ncx::{self, GradedSpace, NComplex};
use crate::random::random_invertible;
use crate::scalars::{Field, Scalar};

// ---------------------------------------------------------------- categories

/// One object whose endomorphisms are `k` in degree 0.
pub fn trivial_category(field: &Field) -> NdgCategory {
    let hom = NComplex::trivial(field, GradedSpace::concentrated(0, 1));
    NdgCategory::new(
        field,
        vec!["*".into()],
        BTreeMap::from([((0, 0), hom)]),
        vec![vec![field.one()]],
        BTreeMap::from([((0, 0, 0), vec![Matrix::identity(field, 1)])]),
    )
    .expect("the trivial category is valid")
}

/// `[j] = 1 + q + … + q^{j−1}` for any `j`.
fn q_number(field: &Field, j: usize) -> Scalar {
    (0..j as i64).fold(field.zero(), |acc, i| field.add(&acc, &field.q_pow(i)))
}

fn polynomial_complex(field: &Field, top: usize, coeffs: &[Scalar], shift: i64) -> Result<NComplex> {
    if coeffs.len() != top {
        return Err(Error::ShapeError(format!("expected {top} differential coefficients, got {}", coeffs.len())));
    }
    let space = GradedSpace::new((0..=top as i64).map(|j| (j - shift, 1)));
    let d = coeffs
        .iter()
        .enumerate()
        .map(|(j, c)| (j as i64 - shift, Matrix::from_fn(field, 1, 1, |_, _| c.clone())))
        .collect();
    NComplex::from_parts(field, space, d)
}

/// Multiplication `x^i · x^j = x^{i+j}` on `span(1, …, x^top)`.
fn monomial_table(field: &Field, rows: usize, cols: usize, count: usize) -> Vec<Matrix> {
    (0..count)
        .map(|i| Matrix::from_fn(field, rows, cols, |r, c| if r == i + c { field.one() } else { field.zero() }))
        .collect()
}

/// `k[x]/(x^{top+1})` with `deg x = 1` and `d(x^j) = coeffs[j] x^{j+1}`.
/// The validator decides whether the coefficients are admissible.
pub fn polynomial_category(field: &Field, top: usize, coeffs: &[Scalar]) -> Result<NdgCategory> {
    let hom = polynomial_complex(field, top, coeffs, 0)?;
    let n = top + 1;
    NdgCategory::new(
        field,
        vec!["*".into()],
        BTreeMap::from([((0, 0), hom)]),
        vec![crate::linalg::unit_vector(field, n, 0)],
        BTreeMap::from([((0, 0, 0), monomial_table(field, n, n, n))]),
    )
}

/// The truncated q-polynomial algebra: `d(x^j) = λ[j] x^{j+1}`.
pub fn truncated_polynomial(field: &Field, top: usize, lambda: &Scalar) -> Result<NdgCategory> {
    let coeffs: Vec<Scalar> = (0..top).map(|j| field.mul(lambda, &q_number(field, j))).collect();
    polynomial_category(field, top, &coeffs)
}

/// Two objects `P`, `S` with `hom(P,P) = R = k[x]/(x^{top+1})` (as in
/// [`truncated_polynomial`]), `hom(S,S) = k`, `hom(P,S) = θ^shift R` as a
/// right R-module and `hom(S,P) = 0`.
pub fn triangular_category(field: &Field, top: usize, lambda: &Scalar, shift: i64) -> Result<NdgCategory> {
    let coeffs: Vec<Scalar> = (0..top).map(|j| field.mul(lambda, &q_number(field, j))).collect();
    let r = polynomial_complex(field, top, &coeffs, 0)?;
    let twisted = ncx::theta_shift(&r, shift);
    let n = top + 1;
    let (p, s) = (0usize, 1usize);
    let hom = BTreeMap::from([
        ((p, p), r),
        ((s, s), NComplex::trivial(field, GradedSpace::concentrated(0, 1))),
        ((p, s), twisted),
    ]);
    let compose = BTreeMap::from([
        ((p, p, p), monomial_table(field, n, n, n)),
        ((p, p, s), monomial_table(field, n, n, n)),
        ((p, s, s), vec![Matrix::identity(field, n)]),
        ((s, s, s), vec![Matrix::identity(field, 1)]),
    ]);
    let units = vec![crate::linalg::unit_vector(field, n, 0), vec![field.one()]];
    NdgCategory::new(field, vec!["P".into(), "S".into()], hom, units, compose)
}

// ---------------------------------------------------------------- modules from a category

/// `hom(−, a)` (right) or `hom(a, −)` (left), acted on by composition.
pub fn representable(cat: &Arc<NdgCategory>, a: usize, side: Side) -> Result<NdgModule> {
    if a >= cat.len() {
        return Err(Error::UnknownObject(format!("#{a}")));
    }
    let field = cat.field();
    let mut action = BTreeMap::new();
    let values = match side {
        Side::Right => {
            for (b1, b2) in cat.pairs() {
                // k ∈ hom(b2, b1) sends x ∈ hom(b1, a) to x∘k.
                let tab = cat.table(b2, b1, a);
                let mats = (0..cat.hom_dim(b2, b1))
                    .map(|k| Matrix::from_fn(field, cat.hom_dim(b2, a), cat.hom_dim(b1, a), |r, x| tab[x].get(r, k).clone()))
                    .collect();
                action.insert((b1, b2), mats);
            }
            (0..cat.len()).map(|b| cat.hom(b, a).clone()).collect()
        }
        Side::Left => {
            for (b1, b2) in cat.pairs() {
                action.insert((b1, b2), cat.table(a, b1, b2).to_vec());
            }
            (0..cat.len()).map(|b| cat.hom(a, b).clone()).collect()
        }
    };
    NdgModule::new(side, cat, values, action)
}

/// The right module `A ↦ Hom(X(A), k)` with `(φa)(y) = φ(ay)`.
pub fn dual_module(x: &NdgModule) -> Result<NdgModule> {
    if x.side() != Side::Left {
        return Err(Error::WrongSide("the dual is taken of a left module".into()));
    }
    let cat = x.base();
    let field = cat.field();
    let unit = NComplex::trivial(field, GradedSpace::concentrated(0, 1));
    let values: Vec<NComplex> = x.values().iter().map(|v| ncx::hom_complex(v, &unit)).collect::<Result<_>>()?;
    let xf: Vec<Flat> = x.values().iter().map(|v| Flat::new(v.space())).collect();
    let df: Vec<Flat> = values.iter().map(|v| Flat::new(v.space())).collect();
    // The dual of basis element g of X(a) sits in degree −deg g.
    let dual_index = |a: usize, g: usize| df[a].index(-xf[a].degree(g), xf[a].local(g));
    let mut action = BTreeMap::new();
    for (a1, a2) in cat.pairs() {
        let mats = x
            .action(a2, a1)
            .iter()
            .map(|l| {
                let mut m = Matrix::zeros(field, df[a2].len(), df[a1].len());
                for g1 in 0..l.rows() {
                    for g2 in 0..l.cols() {
                        let s = l.get(g1, g2);
                        if !s.is_zero() {
                            m.set(dual_index(a2, g2), dual_index(a1, g1), s.clone());
                        }
                    }
                }
                m
            })
            .collect();
        action.insert((a1, a2), mats);
    }
    NdgModule::new(Side::Right, cat, values, action)
}

/// A module over the trivial category: an N-complex with `1` acting as the identity.
pub fn complex_module(x: &NComplex, side: Side) -> Result<NdgModule> {
    let cat = Arc::new(trivial_category(x.field()));
    let n = x.space().total_dim();
    NdgModule::new(side, &cat, vec![x.clone()], BTreeMap::from([((0, 0), vec![Matrix::identity(x.field(), n)])]))
}

// ---------------------------------------------------------------- objectwise functors

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ModuleFunctor {
    Theta(i64),
    Suspend,
    Desuspend,
    /// `Q_r` applied to the underlying graded module.
    Q(i64),
}

/// Applies an objectwise functor to a right module and installs the
/// induced action; the result is re-validated.
pub fn apply_functor(x: &NdgModule, which: ModuleFunctor) -> Result<NdgModule> {
    if x.side() != Side::Right {
        return Err(Error::WrongSide("objectwise functors act on right modules".into()));
    }
    let field = x.field();
    let n_ord = field.order() as i64;
    let cat = x.base();
    let (values, action) = match which {
        ModuleFunctor::Theta(n) => {
            let values = x.values().iter().map(|v| ncx::theta_shift(v, n)).collect();
            let action = cat.pairs().map(|(a, b)| ((a, b), x.action(a, b).to_vec())).collect();
            (values, action)
        }
        ModuleFunctor::Suspend => {
            let values: Vec<NComplex> = x.values().iter().map(ncx::suspend).collect::<Result<_>>()?;
            let action = staircase_action(x, &values, n_ord as usize - 1, 0)?;
            (values, action)
        }
        ModuleFunctor::Desuspend => {
            let values: Vec<NComplex> = x.values().iter().map(ncx::desuspend).collect::<Result<_>>()?;
            let action = staircase_action(x, &values, n_ord as usize - 1, -n_ord)?;
            (values, action)
        }
        ModuleFunctor::Q(r) => {
            let values: Vec<NComplex> = x.values().iter().map(|v| ncx::q_functor(field, r, v.space())).collect::<Result<_>>()?;
            let action = staircase_action(x, &values, n_ord as usize, r - n_ord)?;
            (values, action)
        }
    };
    NdgModule::new(Side::Right, cat, values, action)
}

/// Action on a module whose degree `n` piece is `⊕_{c=1}^{size} X^{n+off+c}`:
/// `(xa)_t = Σ_{s≤t} x_s · [t−1 s−1] q^{n(t−s)} d^{t−s}(a)`.
fn staircase_action(x: &NdgModule, w: &[NComplex], size: usize, off: i64) -> Result<BTreeMap<(usize, usize), Vec<Matrix>>> {
    let cat = x.base();
    let field = cat.field();
    let xf: Vec<Flat> = x.values().iter().map(|v| Flat::new(v.space())).collect();
    let wf: Vec<Flat> = w.iter().map(|v| Flat::new(v.space())).collect();
    let comp_offset = |a: usize, n: i64, c: usize| -> usize {
        (1..c).map(|c2| x.value(a).dim(n + off + c2 as i64)).sum()
    };
    let mut out = BTreeMap::new();
    for (a1, a2) in cat.pairs() {
        let hf = cat.flat(a2, a1);
        let dh = global_differential(cat.hom(a2, a1));
        let mut mats = Vec::with_capacity(hf.len());
        for k in 0..hf.len() {
            let t0 = hf.degree(k);
            // Actions of d^j e_k.
            let mut v = crate::linalg::unit_vector(field, hf.len(), k);
            let mut powers = Vec::with_capacity(size);
            for _ in 0..size {
                powers.push(x.act(a1, a2, &v));
                v = dh.apply(&v);
            }
            let mut m = Matrix::zeros(field, wf[a2].len(), wf[a1].len());
            for &n in w[a1].space().dims().keys() {
                for s in 1..=size {
                    let deg_x = n + off + s as i64;
                    for i in 0..x.value(a1).dim(deg_x) {
                        let col = wf[a1].index(n, comp_offset(a1, n, s) + i);
                        let gx = xf[a1].index(deg_x, i);
                        for t in s..=size {
                            let coeff = field.mul(&field.q_binomial(t - 1, s - 1)?, &field.q_pow(n * (t - s) as i64));
                            let act = &powers[t - s];
                            for g2 in 0..act.rows() {
                                let y = act.get(g2, gx);
                                if y.is_zero() {
                                    continue;
                                }
                                debug_assert_eq!(xf[a2].degree(g2), n + t0 + off + t as i64);
                                let row = wf[a2].index(n + t0, comp_offset(a2, n + t0, t) + xf[a2].local(g2));
                                let val = field.mul_add(m.get(row, col), &coeff, y);
                                m.set(row, col, val);
                            }
                        }
                    }
                }
            }
            mats.push(m);
        }
        out.insert((a1, a2), mats);
    }
    Ok(out)
}

// ---------------------------------------------------------------- sums and base changes

/// Embedding of summand `p` into the direct sum, on global bases.
fn summand_embedding(field: &Field, parts: &[&GradedSpace], p: usize) -> Matrix {
    let sum = GradedSpace::direct_sum(parts);
    let sf = Flat::new(&sum);
    let pf = Flat::new(parts[p]);
    let mut m = Matrix::zeros(field, sf.len(), pf.len());
    for g in 0..pf.len() {
        let i = pf.degree(g);
        let before: usize = parts[..p].iter().map(|s| s.dim(i)).sum();
        m.set(sf.index(i, before + pf.local(g)), g, field.one());
    }
    m
}

pub fn direct_sum_modules(parts: &[&NdgModule]) -> Result<NdgModule> {
    let first = parts.first().ok_or_else(|| Error::ShapeError("empty direct sum".into()))?;
    let cat = first.base();
    let field = cat.field();
    if parts.iter().any(|p| p.side() != first.side() || !super::same_base(p.base(), cat)) {
        return Err(Error::BaseMismatch);
    }
    let mut values = Vec::new();
    let mut embed: Vec<Vec<Matrix>> = Vec::new();
    for a in 0..cat.len() {
        let vs: Vec<&NComplex> = parts.iter().map(|p| p.value(a)).collect();
        values.push(ncx::direct_sum(field, &vs)?);
        let spaces: Vec<&GradedSpace> = vs.iter().map(|v| v.space()).collect();
        embed.push((0..parts.len()).map(|p| summand_embedding(field, &spaces, p)).collect());
    }
    let mut action = BTreeMap::new();
    for (from, to) in cat.pairs() {
        let count = first.action(from, to).len();
        let mats = (0..count)
            .map(|k| {
                let mut m = Matrix::zeros(field, values[to].space().total_dim(), values[from].space().total_dim());
                for (p, part) in parts.iter().enumerate() {
                    m = m.add(&embed[to][p].compose(&part.action(from, to)[k]).compose(&embed[from][p].transpose()));
                }
                m
            })
            .collect();
        action.insert((from, to), mats);
    }
    NdgModule::new(first.side(), cat, values, action)
}

/// Conjugates a module by a random degree-preserving change of basis in
/// every value; returns the new module and the isomorphism (global matrices).
pub fn scramble_module<R: Rng + ?Sized>(x: &NdgModule, rng: &mut R) -> Result<(NdgModule, Vec<Matrix>)> {
    let cat = x.base();
    let field = cat.field();
    let mut g = Vec::new();
    let mut g_inv = Vec::new();
    let mut values = Vec::new();
    for v in x.values() {
        let blocks: Vec<Matrix> = v.space().dims().values().map(|&d| random_invertible(field, d, rng)).collect();
        let gm = Matrix::block_diag(field, &blocks.iter().collect::<Vec<_>>());
        let gi = gm.inverse().expect("invertible");
        let d = gm.compose(&global_differential(v)).compose(&gi);
        let dm = graded_from_global(field, &d, 1, v.space(), v.space())?;
        values.push(ncx::validate_ncomplex(field, v.space().clone(), dm.components().clone())?);
        g.push(gm);
        g_inv.push(gi);
    }
    let action = cat
        .pairs()
        .map(|(from, to)| {
            let mats = x.action(from, to).iter().map(|r| g[to].compose(r).compose(&g_inv[from])).collect();
            ((from, to), mats)
        })
        .collect();
    Ok((NdgModule::new(x.side(), cat, values, action)?, g))
}

// ---------------------------------------------------------------- bimodules

/// `hom(a, b)` with composition on both sides.
pub fn regular_bimodule(cat: &Arc<NdgCategory>) -> Result<NdgBimodule> {
    let field = cat.field();
    let values = cat.pairs().map(|(a, b)| ((a, b), cat.hom(a, b).clone())).collect();
    let mut right = BTreeMap::new();
    let mut left = BTreeMap::new();
    for b in 0..cat.len() {
        for (a1, a2) in cat.pairs() {
            let tab = cat.table(a2, a1, b);
            let mats = (0..cat.hom_dim(a2, a1))
                .map(|g| Matrix::from_fn(field, cat.hom_dim(a2, b), cat.hom_dim(a1, b), |r, m| tab[m].get(r, g).clone()))
                .collect();
            right.insert((b, a1, a2), mats);
        }
    }
    for a in 0..cat.len() {
        for (b1, b2) in cat.pairs() {
            left.insert((a, b1, b2), cat.table(a, b1, b2).to_vec());
        }
    }
    NdgBimodule::new(cat, cat, values, right, left)
}

/// A right A-module as a k-A bimodule.
pub fn bimodule_from_right(x: &NdgModule) -> Result<NdgBimodule> {
    if x.side() != Side::Right {
        return Err(Error::WrongSide("expected a right module".into()));
    }
    let cat = x.base();
    let k = Arc::new(trivial_category(cat.field()));
    let values = (0..cat.len()).map(|a| ((a, 0), x.value(a).clone())).collect();
    let right = cat.pairs().map(|(a1, a2)| ((0, a1, a2), x.action(a1, a2).to_vec())).collect();
    let left = (0..cat.len()).map(|a| ((a, 0, 0), vec![Matrix::identity(cat.field(), x.dim(a))])).collect();
    NdgBimodule::new(&k, cat, values, right, left)
}

/// A left B-module as a B-k bimodule.
pub fn bimodule_from_left(x: &NdgModule) -> Result<NdgBimodule> {
    if x.side() != Side::Left {
        return Err(Error::WrongSide("expected a left module".into()));
    }
    let cat = x.base();
    let k = Arc::new(trivial_category(cat.field()));
    let values = (0..cat.len()).map(|b| ((0, b), x.value(b).clone())).collect();
    let left = cat.pairs().map(|(b1, b2)| ((0, b1, b2), x.action(b1, b2).to_vec())).collect();
    let right = (0..cat.len()).map(|b| ((b, 0, 0), vec![Matrix::identity(cat.field(), x.dim(b))])).collect();
    NdgBimodule::new(cat, &k, values, right, left)
}

// ---------------------------------------------------------------- action matrices

/// The upper triangular matrix `(a^n_{st})` of hom elements with
/// `a^n_{st} = [t−1 s−1] q^{n(t−s)} d^{t−s}(a)` for `s ≤ t`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ActionMatrix {
    /// The hom complex `(source, target)` holding the entries.
    pub hom: (usize, usize),
    pub entries: Vec<Vec<Vector>>,
}

impl ActionMatrix {
    pub fn new(cat: &NdgCategory, hom: (usize, usize), a: &[Scalar], n: i64, size: usize) -> Result<ActionMatrix> {
        let field = cat.field();
        let dim = cat.hom_dim(hom.0, hom.1);
        let mut powers = vec![a.to_vec()];
        for t in 1..size {
            powers.push(cat.d_power(hom.0, hom.1, &powers[t - 1], 1));
        }
        let mut entries = vec![vec![zero_vector(field, dim); size]; size];
        for s in 0..size {
            for t in s..size {
                let c = field.mul(&field.q_binomial(t, s)?, &field.q_pow(n * (t - s) as i64));
                entries[s][t] = powers[t - s].iter().map(|v| field.mul(&c, v)).collect();
            }
        }
        Ok(ActionMatrix { hom, entries })
    }

    pub fn size(&self) -> usize {
        self.entries.len()
    }

    /// `self · other`, entries multiplied by composition `x_{su} ∘ y_{ut}`.
    pub fn product(&self, other: &ActionMatrix, cat: &NdgCategory) -> Result<ActionMatrix> {
        // self ⊂ hom(b, c), other ⊂ hom(a, b).
        let (b, c) = self.hom;
        let (a, b2) = other.hom;
        if b != b2 || self.size() != other.size() {
            return Err(Error::ShapeError("incompatible action matrices".into()));
        }
        let field = cat.field();
        let l = self.size();
        let dim = cat.hom_dim(a, c);
        let mut entries = vec![vec![zero_vector(field, dim); l]; l];
        for (s, row) in entries.iter_mut().enumerate() {
            for (t, e) in row.iter_mut().enumerate() {
                for u in 0..l {
                    let p = cat.compose(a, b, c, &self.entries[s][u], &other.entries[u][t]);
                    *e = crate::linalg::add_vectors(field, e, &p);
                }
            }
        }
        Ok(ActionMatrix { hom: (a, c), entries })
    }

    /// `ᵗJ · self`: row `s` becomes row `s−1`, the first row zero.
    pub fn shift_rows(&self, field: &Field) -> ActionMatrix {
        let l = self.size();
        let zero = zero_vector(field, self.entries[0][0].len());
        let entries =
            (0..l).map(|s| (0..l).map(|t| if s == 0 { zero.clone() } else { self.entries[s - 1][t].clone() }).collect()).collect();
        ActionMatrix { hom: self.hom, entries }
    }

    /// `self · ᵗJ`: column `t` becomes column `t+1`, the last column zero.
    pub fn shift_cols(&self, field: &Field) -> ActionMatrix {
        let l = self.size();
        let zero = zero_vector(field, self.entries[0][0].len());
        let entries = (0..l)
            .map(|s| (0..l).map(|t| if t + 1 == l { zero.clone() } else { self.entries[s][t + 1].clone() }).collect())
            .collect();
        ActionMatrix { hom: self.hom, entries }
    }

    pub fn add(&self, other: &ActionMatrix, field: &Field) -> ActionMatrix {
        let entries = self
            .entries
            .iter()
            .zip(&other.entries)
            .map(|(r1, r2)| r1.iter().zip(r2).map(|(x, y)| crate::linalg::add_vectors(field, x, y)).collect())
            .collect();
        ActionMatrix { hom: self.hom, entries }
    }

    pub fn scale(&self, s: &Scalar, field: &Field) -> ActionMatrix {
        let entries =
            self.entries.iter().map(|r| r.iter().map(|x| crate::linalg::scale_vector(field, s, x)).collect()).collect();
        ActionMatrix { hom: self.hom, entries }
    }
}

// ---------------------------------------------------------------- random instances

/// A random category with at most two objects and hom dimensions at most
/// `max_dim`.
pub fn random_category<R: Rng + ?Sized>(field: &Field, max_dim: usize, rng: &mut R) -> Result<NdgCategory> {
    let lambda = match rng.gen_range(0..3) {
        0 => field.zero(),
        1 => field.one(),
        _ => field.random_nonzero(rng),
    };
    let top = rng.gen_range(1..max_dim.max(2));
    match rng.gen_range(0..5) {
        0 => Ok(trivial_category(field)),
        1 | 2 => truncated_polynomial(field, top, &lambda),
        _ => triangular_category(field, top.min(3), &lambda, rng.gen_range(-1..=1)),
    }
}

/// A scrambled sum of up to `pieces` functor images of representables,
/// regenerated until every value has dimension at most `budget`.
pub fn random_right_module<R: Rng + ?Sized>(cat: &Arc<NdgCategory>, pieces: usize, budget: usize, rng: &mut R) -> Result<NdgModule> {
    let n_ord = cat.field().order() as i64;
    loop {
        let count = rng.gen_range(1..=pieces.max(1));
        let mut parts = Vec::new();
        for _ in 0..count {
            let a = rng.gen_range(0..cat.len());
            let shift = rng.gen_range(-1..=1);
            let part = match rng.gen_range(0..6) {
                0 | 1 => apply_functor(&representable(cat, a, Side::Right)?, ModuleFunctor::Theta(shift))?,
                2 => apply_functor(&representable(cat, a, Side::Right)?, ModuleFunctor::Suspend)?,
                3 => apply_functor(&representable(cat, a, Side::Right)?, ModuleFunctor::Desuspend)?,
                4 => apply_functor(&representable(cat, a, Side::Right)?, ModuleFunctor::Q(rng.gen_range(0..n_ord)))?,
                _ => apply_functor(&dual_module(&representable(cat, a, Side::Left)?)?, ModuleFunctor::Theta(shift))?,
            };
            parts.push(part);
        }
        let sum = direct_sum_modules(&parts.iter().collect::<Vec<_>>())?;
        if (0..cat.len()).any(|a| sum.dim(a) > budget) || (0..cat.len()).all(|a| sum.dim(a) == 0) {
            continue;
        }
        return Ok(scramble_module(&sum, rng)?.0);
    }
}
