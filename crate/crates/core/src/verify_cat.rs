//! Suites over finite categories: structure identities, Yoneda, tensor and
//! hom over a category, the adjunction, and the dual-generator formula.

use std::sync::Arc;

use rand::Rng;

use crate::error::{Error, Result};
use crate::linalg::{unit_vector, Matrix};
use crate::ncx::{self, KhomFlavor, NComplex};
use crate::ndgcat::*;
use crate::random::{self, InstanceRng, Shape};
use crate::scalars::Field;
use crate::verify::{default_field, short_exact_split, trial_contexts, Sink, SuiteConfig, TrialCtx};

type Outcome = std::result::Result<(), String>;

fn expect(ok: bool, msg: impl FnOnce() -> String) -> Outcome {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn fixed_ctx(field: &Field) -> TrialCtx {
    TrialCtx { order: field.order(), field: field.spec(), trial: None, trial_seed: None }
}

/// `[m]` as `(q^m − 1)/(q − 1)`, independent of the summation in the library.
fn q_number_closed(f: &Field, m: usize) -> crate::scalars::Scalar {
    let num = f.sub(&f.q_pow(m as i64), &f.one());
    f.div(&num, &f.sub(&f.q(), &f.one())).expect("q != 1")
}

fn small_complex(field: &Field, rng: &mut InstanceRng) -> Result<NComplex> {
    let n = field.order();
    Ok(random::random_complex_with_blocks(field, Shape { width: n + 1, max_dim: 2, max_blocks: 2 }, rng)?.0)
}

// ---------------------------------------------------------------- fixed examples

fn fixed_checks(f: &Field, sink: &mut Sink<'_>) -> Result<()> {
    let n = f.order();
    let ctx = fixed_ctx(f);
    let poly = truncated_polynomial(f, n, &f.one());
    sink(
        "truncated-polynomial-validates",
        &ctx,
        Ok(poly.as_ref().map(|_| ()).map_err(|e| e.to_string()).and_then(|_| {
            let cat = poly.as_ref().expect("checked");
            let d = global_differential(cat.hom(0, 0));
            (1..n).try_for_each(|m| {
                expect(d.get(m + 1, m) == &q_number_closed(f, m), || format!("d(x^{m}) has the wrong coefficient"))
            })
        })),
    );
    if n >= 3 {
        // d(x) = x² forces d(x²) = (1+q)x³; 2x³ must be rejected.
        let mut coeffs: Vec<_> = (0..n).map(|m| q_number_closed(f, m)).collect();
        coeffs[2] = f.from_i64(2);
        let bad = polynomial_category(f, n, &coeffs);
        sink(
            "leibniz-violation-detected",
            &ctx,
            Ok(expect(matches!(bad, Err(Error::LeibnizViolation { .. })), || format!("got {bad:?}"))),
        );
    }
    if let Ok(cat) = poly {
        let cat = Arc::new(cat);
        let rep = representable(&cat, 0, Side::Right);
        sink(
            "representable-dims",
            &fixed_ctx(f),
            rep.as_ref().map_err(Clone::clone).map(|r| {
                let dims = r.value(0).space().dims().clone();
                expect(dims == (0..=n as i64).map(|i| (i, 1)).collect(), || format!("dims {dims:?}"))
            }),
        );
        let endo = rep.and_then(|r| module_hom_complex(&r, &r));
        sink(
            "representable-endomorphisms",
            &ctx,
            endo.map(|h| {
                let total = h.complex.space().total_dim();
                expect(total == n + 1, || format!("total dimension {total}"))
            }),
        );
    }
    let unit = NComplex::trivial(f, crate::ncx::GradedSpace::concentrated(0, 1));
    let k = complex_module(&unit, Side::Right)?;
    sink(
        "trivial-khom",
        &ctx,
        khom_module(&k, &k, 0, KhomFlavor::Susp0).map(|d| expect(d == 1, || format!("got {d}"))),
    );
    let dual = complex_module(&unit, Side::Left).and_then(|m| dual_module(&m));
    sink("trivial-dual", &ctx, dual.map(|d| expect(d.value(0) == &unit, || "dual of k is not k".into())));
    Ok(())
}

// ---------------------------------------------------------------- structure identities

fn anp(cat: &NdgCategory) -> Outcome {
    let f = cat.field();
    let n = f.order();
    for (a, b, c) in cat.triples() {
        let fbc = cat.flat(b, c);
        for fi in 0..cat.hom_dim(b, c) {
            let r = fbc.degree(fi);
            let ef = unit_vector(f, cat.hom_dim(b, c), fi);
            for gi in 0..cat.hom_dim(a, b) {
                let eg = unit_vector(f, cat.hom_dim(a, b), gi);
                let fg = cat.compose(a, b, c, &ef, &eg);
                for p in 1..=n {
                    let lhs = cat.d_power(a, c, &fg, p);
                    let mut rhs = vec![f.zero(); lhs.len()];
                    for l in 0..=p {
                        let coef = f.mul(&f.q_pow(l as i64 * r), &f.q_binomial(p, l).map_err(|e| e.to_string())?);
                        let term = cat.compose(a, b, c, &cat.d_power(b, c, &ef, p - l), &cat.d_power(a, b, &eg, l));
                        for (x, t) in rhs.iter_mut().zip(term) {
                            *x = f.mul_add(x, &coef, &t);
                        }
                    }
                    if lhs != rhs {
                        return Err(format!("d^{p}(fg) for f = {fi}, g = {gi} on ({a},{b},{c})"));
                    }
                }
            }
        }
    }
    Ok(())
}

fn action_matrix_identities(cat: &NdgCategory) -> std::result::Result<Outcome, Error> {
    let f = cat.field();
    let size = f.order();
    for (s, t) in cat.pairs() {
        let dh = global_differential(cat.hom(s, t));
        for k in 0..cat.hom_dim(s, t) {
            let e = unit_vector(f, cat.hom_dim(s, t), k);
            for n in -2..=2 {
                let an = ActionMatrix::new(cat, (s, t), &e, n, size)?;
                let an1 = ActionMatrix::new(cat, (s, t), &e, n + 1, size)?;
                let da = ActionMatrix::new(cat, (s, t), &dh.apply(&e), n, size)?;
                let rhs = an1.shift_rows(f).add(&da.scale(&f.q_pow(n), f), f);
                if an.shift_cols(f) != rhs {
                    return Ok(Err(format!("J identity fails for basis {k} of ({s},{t}), n = {n}")));
                }
            }
        }
    }
    // (a^n)(b^{n+m}) = (ab)^n for a ∈ hom(a2,a1) of degree m, b ∈ hom(a3,a2).
    for (a3, a2, a1) in cat.triples() {
        let fa = cat.flat(a2, a1);
        for ka in 0..fa.len() {
            let m = fa.degree(ka);
            let ea = unit_vector(f, fa.len(), ka);
            for kb in 0..cat.hom_dim(a3, a2) {
                let eb = unit_vector(f, cat.hom_dim(a3, a2), kb);
                let ab = cat.compose(a3, a2, a1, &ea, &eb);
                for n in -1..=1 {
                    let lhs = ActionMatrix::new(cat, (a2, a1), &ea, n, size)?
                        .product(&ActionMatrix::new(cat, (a3, a2), &eb, n + m, size)?, cat)?;
                    let rhs = ActionMatrix::new(cat, (a3, a1), &ab, n, size)?;
                    if lhs != rhs {
                        return Ok(Err(format!("multiplicativity fails for a = {ka}, b = {kb}, n = {n}")));
                    }
                }
            }
        }
    }
    Ok(Ok(()))
}

fn sigma_sequences(x: &NdgModule) -> std::result::Result<Outcome, Error> {
    let n = x.field().order() as i64;
    let susp = apply_functor(x, ModuleFunctor::Suspend)?;
    let desusp = apply_functor(x, ModuleFunctor::Desuspend)?;
    let q0 = apply_functor(x, ModuleFunctor::Q(0))?;
    let qt = apply_functor(x, ModuleFunctor::Q(n - 1))?;
    let mut fams: [Vec<Matrix>; 4] = Default::default();
    for (a, v) in x.values().iter().enumerate() {
        let cm = ncx::canonical_maps(v)?;
        if &cm.q0 != q0.value(a) || &cm.q_top != qt.value(a) || &cm.susp != susp.value(a) || &cm.desusp != desusp.value(a) {
            return Ok(Err(format!("objectwise functor values differ at object {a}")));
        }
        if let Err(e) = short_exact_split(&cm.epsilon, &cm.pi).and_then(|_| short_exact_split(&cm.eta, &cm.delta)) {
            return Ok(Err(format!("object {a}: {e}")));
        }
        for (fam, m) in fams.iter_mut().zip([&cm.epsilon, &cm.pi, &cm.eta, &cm.delta]) {
            fam.push(global_map(m));
        }
    }
    let pairs = [(&desusp, &q0), (&q0, x), (x, &qt), (&qt, &susp)];
    for (name, (fam, (s, t))) in ["epsilon", "pi", "eta", "delta"].iter().zip(fams.iter().zip(pairs)) {
        if let Err(e) = check_module_map(fam, s, t) {
            return Ok(Err(format!("{name}: {e}")));
        }
    }
    Ok(Ok(()))
}

fn yoneda(x: &NdgModule) -> std::result::Result<Outcome, Error> {
    for a in 0..x.base().len() {
        let (h, phi) = yoneda_map(x, a)?;
        if let Err(e) = ncx::check_chain_map(&phi, &h.complex, x.value(a)) {
            return Ok(Err(format!("object {a}: {e}")));
        }
        if phi.inverse().is_none() {
            return Ok(Err(format!("object {a}: Yoneda map not invertible")));
        }
    }
    Ok(Ok(()))
}

/// A degree-0 family of global matrices is an isomorphism of modules.
fn module_iso(fam: &[Matrix], x: &NdgModule, y: &NdgModule) -> Outcome {
    check_module_map(fam, x, y)?;
    for (a, m) in fam.iter().enumerate() {
        if !m.is_square() || m.rank() != m.rows() {
            return Err(format!("component at object {a} is not invertible"));
        }
    }
    Ok(())
}

/// `hom(−, b) ⊗_B M ≅ M(−, b)` via `x ⊗ m ↦ xm`.
fn tensor_representable(m: &NdgBimodule) -> std::result::Result<Outcome, Error> {
    let cb = m.left_base();
    let ca = m.right_base();
    for b in 0..cb.len() {
        let rep = representable(cb, b, Side::Right)?;
        let t = tensor_over_category(&rep, m)?;
        let target = m.right_module(b);
        let mut fam = Vec::new();
        for a in 0..ca.len() {
            let piece = &t.pieces[a];
            let mut mu = Matrix::zeros(m.field(), target.dim(a), piece.cover.space().total_dim());
            for b2 in 0..cb.len() {
                for gx in 0..cb.hom_dim(b2, b) {
                    let act = &m.left_action(a, b2, b)[gx];
                    for gm in 0..act.cols() {
                        let col = piece.index(b2, gx, gm);
                        for r in 0..act.rows() {
                            mu.set(r, col, act.get(r, gm).clone());
                        }
                    }
                }
            }
            let phi = mu.compose(&piece.section());
            if phi.compose(&piece.projection()) != mu {
                return Ok(Err(format!("multiplication does not vanish on the relations at object {a}")));
            }
            fam.push(phi);
        }
        if let Err(e) = module_iso(&fam, &t.module, &target) {
            return Ok(Err(format!("b = {b}: {e}")));
        }
    }
    Ok(Ok(()))
}

/// `X ⊗_A A ≅ X` via `x ⊗ g ↦ xg`.
fn tensor_regular(x: &NdgModule) -> std::result::Result<Outcome, Error> {
    let cat = x.base();
    let reg = regular_bimodule(cat)?;
    let t = tensor_over_category(x, &reg)?;
    let mut fam = Vec::new();
    for a in 0..cat.len() {
        let piece = &t.pieces[a];
        let mut mu = Matrix::zeros(x.field(), x.dim(a), piece.cover.space().total_dim());
        for b in 0..cat.len() {
            for gx in 0..x.dim(b) {
                for (gm, act) in x.action(b, a).iter().enumerate() {
                    let col = piece.index(b, gx, gm);
                    for r in 0..act.rows() {
                        mu.set(r, col, act.get(r, gx).clone());
                    }
                }
            }
        }
        fam.push(mu.compose(&piece.section()));
    }
    Ok(module_iso(&fam, &t.module, x))
}

/// `(θX) ⊗ M ≅ θ(X ⊗ M)` via `x ⊗ m ↦ x ⊗ m`.
fn tensor_theta(x: &NdgModule, m: &NdgBimodule) -> std::result::Result<Outcome, Error> {
    let tx = apply_functor(x, ModuleFunctor::Theta(1))?;
    let lhs = tensor_over_category(&tx, m)?;
    let plain = tensor_over_category(x, m)?;
    let rhs = apply_functor(&plain.module, ModuleFunctor::Theta(1))?;
    let mut fam = Vec::new();
    for a in 0..m.right_base().len() {
        let (src, tgt) = (&lhs.pieces[a], &plain.pieces[a]);
        let mut w = Matrix::zeros(x.field(), tgt.cover.space().total_dim(), src.cover.space().total_dim());
        for b in 0..x.base().len() {
            for gx in 0..x.dim(b) {
                for gm in 0..m.value(a, b).space().total_dim() {
                    w.set(tgt.index(b, gx, gm), src.index(b, gx, gm), x.field().one());
                }
            }
        }
        fam.push(tgt.projection().compose(&w).compose(&src.section()));
    }
    Ok(module_iso(&fam, &lhs.module, &rhs))
}

/// `Hom_A(A, Y) ≅ Y` via `F ↦ F_b(1_b)` at each object.
fn hom_regular(y: &NdgModule) -> std::result::Result<Outcome, Error> {
    let cat = y.base();
    let h = hom_over_category(&regular_bimodule(cat)?, y)?;
    let mut fam = Vec::new();
    for b in 0..cat.len() {
        let piece = &h.pieces[b];
        let total = piece.complex.space().total_dim();
        let mut m = Matrix::zeros(y.field(), y.dim(b), total);
        for g in 0..total {
            let (_, f) = piece.element(g);
            for (r, v) in f[b].apply(cat.unit(b)).into_iter().enumerate() {
                m.set(r, g, v);
            }
        }
        fam.push(m);
    }
    Ok(module_iso(&fam, &h.module, y))
}

fn over_trivial(field: &Field, rng: &mut InstanceRng) -> std::result::Result<Outcome, Error> {
    let (u, v) = (small_complex(field, rng)?, small_complex(field, rng)?);
    let h = module_hom_complex(&complex_module(&u, Side::Right)?, &complex_module(&v, Side::Right)?)?;
    Ok(expect(h.complex == ncx::hom_complex(&u, &v)?, || "hom complex over k differs from the plain one".into()))
}

fn projective_target(x: &NdgModule, z: &NdgModule, rng: &mut InstanceRng) -> std::result::Result<Outcome, Error> {
    let n = x.field().order() as i64;
    let q = apply_functor(z, ModuleFunctor::Q(rng.gen_range(0..n)))?;
    let h = module_hom_complex(x, &q)?;
    let Some((lo, hi)) = h.complex.support() else { return Ok(Ok(())) };
    for i in lo - 1..=hi + 1 {
        for r in 1..n as usize {
            let d = ncx::homology_dim(&h.complex, i, r)?;
            if d != 0 {
                return Ok(Err(format!("H^{i}_({r}) = {d} for a Q-module target")));
            }
        }
    }
    Ok(Ok(()))
}

fn khom_representable(y: &NdgModule) -> std::result::Result<Outcome, Error> {
    let cat = y.base();
    for a in 0..cat.len() {
        let rep = representable(cat, a, Side::Right)?;
        let Some((lo, hi)) = y.value(a).support() else { continue };
        for n in lo - 1..=hi + 1 {
            let k = khom_module(&rep, y, n, KhomFlavor::Susp0)?;
            let h = ncx::homology_dim(y.value(a), n, 1)?;
            if k != h {
                return Ok(Err(format!("object {a}, n = {n}: {k} vs {h}")));
            }
        }
    }
    Ok(Ok(()))
}

/// `(X, M, Y)` with `X` over `B`, `M` a B-A bimodule and `Y` over `A`,
/// rotating through three shapes of instance.
fn adjunction_instance(
    cat: &Arc<NdgCategory>,
    trial: u64,
    rng: &mut InstanceRng,
) -> Result<(NdgModule, NdgBimodule, NdgModule)> {
    let field = cat.field();
    Ok(match trial % 3 {
        0 => (random_right_module(cat, 2, 8, rng)?, regular_bimodule(cat)?, random_right_module(cat, 2, 8, rng)?),
        1 => (
            complex_module(&small_complex(field, rng)?, Side::Right)?,
            bimodule_from_right(&random_right_module(cat, 1, 6, rng)?)?,
            random_right_module(cat, 2, 8, rng)?,
        ),
        _ => {
            let a = rng.gen_range(0..cat.len());
            let left = representable(cat, a, Side::Left)?;
            (
                random_right_module(cat, 2, 8, rng)?,
                bimodule_from_left(&left)?,
                complex_module(&small_complex(field, rng)?, Side::Right)?,
            )
        }
    })
}

fn lift(r: Result<std::result::Result<Outcome, Error>>) -> Result<Outcome> {
    match r {
        Ok(Ok(o)) => Ok(o),
        Ok(Err(e)) | Err(e) => Err(e),
    }
}

pub fn category_suite(cfg: &SuiteConfig, n: usize, sink: &mut Sink<'_>) -> Result<()> {
    let field = default_field(n)?;
    fixed_checks(&field, sink)?;
    for (ctx, mut rng) in trial_contexts(cfg, &field) {
        let rng = &mut rng;
        let cat = Arc::new(random_category(&field, 6, rng)?);
        sink("lemma-anp", &ctx, Ok(anp(&cat)));
        sink("action-matrix-identities", &ctx, lift(Ok(action_matrix_identities(&cat))));
        let reps: Result<()> = (0..cat.len()).try_for_each(|a| {
            representable(&cat, a, Side::Right)?;
            dual_module(&representable(&cat, a, Side::Left)?)?;
            Ok(())
        });
        sink("constructed-modules-valid", &ctx, reps.map(|_| Ok(())));
        let x = random_right_module(&cat, 2, 10, rng)?;
        let y = random_right_module(&cat, 2, 10, rng)?;
        let sigma_theta = apply_functor(&x, ModuleFunctor::Suspend).and_then(|s| {
            let other = apply_functor(&apply_functor(&x, ModuleFunctor::Theta(n as i64))?, ModuleFunctor::Desuspend)?;
            Ok(expect(s == other, || "ΣX differs from Σ⁻¹θ^N X".into()))
        });
        sink("suspension-theta", &ctx, sigma_theta);
        sink("sigma-sequences", &ctx, lift(Ok(sigma_sequences(&x))));
        sink("yoneda", &ctx, lift(Ok(yoneda(&x))));
        sink("hom-over-trivial", &ctx, lift(Ok(over_trivial(&field, rng))));
        sink("khom-representable", &ctx, lift(Ok(khom_representable(&y))));
        sink("khom-q-target", &ctx, lift(Ok(projective_target(&x, &y, rng))));
        let (ax, am, ay) = adjunction_instance(&cat, ctx.trial.unwrap_or(0), rng)?;
        sink(
            "adjunction-iso",
            &ctx,
            adjunction_check(&ax, &am, &ay).map(|r| expect(r.passed(), || format!("{r:?}"))),
        );
        sink("tensor-representable", &ctx, lift(Ok(tensor_representable(&am))));
        sink("tensor-regular", &ctx, lift(Ok(tensor_regular(&x))));
        sink("tensor-theta", &ctx, lift(Ok(tensor_theta(&ax, &am))));
        sink("hom-regular", &ctx, lift(Ok(hom_regular(&y))));
    }
    Ok(())
}

pub fn dual_generator_suite(cfg: &SuiteConfig, n: usize, sink: &mut Sink<'_>) -> Result<()> {
    let field = default_field(n)?;
    for (ctx, mut rng) in trial_contexts(cfg, &field) {
        let rng = &mut rng;
        let cat = Arc::new(random_category(&field, 6, rng)?);
        let x = random_right_module(&cat, 2, 10, rng)?;
        let duals: Result<Outcome> = (0..cat.len()).try_fold(Ok(()), |acc, a| {
            let left = representable(&cat, a, Side::Left)?;
            let d = dual_module(&left)?;
            let ok = cat.pairs().all(|(b, _)| {
                left.value(b).space().dims().iter().all(|(&i, &dim)| d.value(b).dim(-i) == dim)
                    && d.value(b).space().total_dim() == left.value(b).space().total_dim()
            });
            Ok(acc.and(expect(ok, || format!("dual dims at object {a}"))))
        });
        sink("dual-dims", &ctx, duals);
        let formula: Result<Outcome> = (|| {
            for a in 0..cat.len() {
                let Some((lo, hi)) = x.value(a).support() else { continue };
                for s in -hi - 1..=-lo + 1 {
                    let c = khom_via_dual(&x, a, s)?;
                    if !c.holds() {
                        return Ok(Err(format!("object {a}, n = {s}: {c:?}")));
                    }
                }
            }
            Ok(Ok(()))
        })();
        sink("dual-generator-formula", &ctx, formula);
        let acyclic = random::random_acyclic(&field, Shape { width: n + 2, max_dim: 2, max_blocks: 2 }, rng)?.0;
        let xa = complex_module(&acyclic, Side::Right)?;
        let vanish: Result<Outcome> = (|| {
            let Some((lo, hi)) = acyclic.support() else { return Ok(Ok(())) };
            for s in -hi - 1..=-lo + 1 {
                let c = khom_via_dual(&xa, 0, s)?;
                if c.khom != 0 {
                    return Ok(Err(format!("n = {s}: {c:?}")));
                }
            }
            Ok(Ok(()))
        })();
        sink("acyclic-vanishing", &ctx, vanish);
    }
    Ok(())
}
