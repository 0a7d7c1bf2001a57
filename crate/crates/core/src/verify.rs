//! Seeded verification suites.
//!
//! Each suite checks one family of identities on exhaustive or random
//! instances and tallies the results per check name. A failing trial leaves
//! a [`Reproducer`] carrying the field and per-trial seed.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::ncx::{self, GradedMap, GradedSpace, KhomFlavor, NComplex};
use crate::random::{self, InstanceRng, Shape};
use crate::scalars::{Field, FieldSpec, Scalar};

pub const SUITES: &[&str] = &[
    "q-identities",
    "operator-q-binomial",
    "leibniz-powers",
    "functors",
    "adjunction",
    "homotopy",
    "contraction",
    "hexagon",
    "category",
    "dual-generator",
    "n2-regression",
];

#[derive(Clone, Debug)]
pub struct SuiteConfig {
    pub orders: Vec<usize>,
    pub trials: usize,
    pub seed: u64,
    pub all_r: bool,
}

impl SuiteConfig {
    pub fn new(orders: impl IntoIterator<Item = usize>, trials: usize, seed: u64) -> SuiteConfig {
        SuiteConfig { orders: orders.into_iter().collect(), trials, seed, all_r: false }
    }
}

/// Default order range and trial count of a suite.
pub fn suite_defaults(suite: &str) -> Option<(Vec<usize>, usize)> {
    Some(match suite {
        "q-identities" => ((2..=8).collect(), 1),
        "operator-q-binomial" => ((2..=6).collect(), 100),
        "leibniz-powers" | "functors" | "contraction" => ((2..=5).collect(), 100),
        "adjunction" | "homotopy" | "hexagon" => ((2..=5).collect(), 50),
        "category" | "dual-generator" => ((2..=4).collect(), 25),
        "n2-regression" => (vec![2], 100),
        _ => return None,
    })
}

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct Reproducer {
    pub suite: String,
    pub check: String,
    #[serde(rename = "N")]
    pub order: usize,
    pub field: FieldSpec,
    pub trial: Option<u64>,
    pub trial_seed: Option<u64>,
    pub detail: String,
}

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct CheckOutcome {
    pub name: String,
    pub passed: bool,
    pub instances: usize,
    pub failures: usize,
}

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct SuiteReport {
    pub suite: String,
    pub seed: u64,
    pub checks: Vec<CheckOutcome>,
    pub reproducers: Vec<Reproducer>,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }
}

/// The prime field used for order `n`: F_7 when it works, else the least
/// prime `p ≡ 1 mod n` that is at least 11.
pub fn default_prime(n: usize) -> u64 {
    if 6 % n == 0 {
        return 7;
    }
    let mut p = 11u64;
    loop {
        if (p - 1).is_multiple_of(n as u64) && crate::scalars::is_prime(p) {
            return p;
        }
        p += 1;
    }
}

pub fn default_field(n: usize) -> Result<Field> {
    Field::new(&FieldSpec::prime(default_prime(n), n))
}

#[derive(Clone, Debug)]
struct Ctx {
    order: usize,
    field: FieldSpec,
    trial: Option<u64>,
    trial_seed: Option<u64>,
}

struct Checker {
    suite: String,
    seed: u64,
    order: Vec<String>,
    tally: BTreeMap<String, (usize, usize)>,
    reproducers: Vec<Reproducer>,
}

impl Checker {
    fn new(suite: &str, seed: u64) -> Checker {
        Checker { suite: suite.into(), seed, order: vec![], tally: BTreeMap::new(), reproducers: vec![] }
    }

    /// Records one instance of `name`; errors count as failures.
    fn check(&mut self, name: &str, ctx: &Ctx, outcome: Result<std::result::Result<(), String>>) {
        if !self.tally.contains_key(name) {
            self.order.push(name.to_string());
        }
        let entry = self.tally.entry(name.to_string()).or_insert((0, 0));
        entry.0 += 1;
        let failure = match outcome {
            Ok(Ok(())) => None,
            Ok(Err(msg)) => Some(msg),
            Err(e) => Some(format!("error: {e}")),
        };
        if let Some(detail) = failure {
            entry.1 += 1;
            if entry.1 == 1 {
                self.reproducers.push(Reproducer {
                    suite: self.suite.clone(),
                    check: name.to_string(),
                    order: ctx.order,
                    field: ctx.field.clone(),
                    trial: ctx.trial,
                    trial_seed: ctx.trial_seed,
                    detail,
                });
            }
        }
    }

    fn finish(self) -> SuiteReport {
        let checks = self
            .order
            .iter()
            .map(|name| {
                let (instances, failures) = self.tally[name];
                CheckOutcome { name: name.clone(), passed: failures == 0, instances, failures }
            })
            .collect();
        SuiteReport { suite: self.suite, seed: self.seed, checks, reproducers: self.reproducers }
    }
}

fn expect(ok: bool, msg: impl FnOnce() -> String) -> std::result::Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

/// Runs the trials of one order, handing each a fresh seeded generator.
fn for_trials(cfg: &SuiteConfig, field: &Field, mut body: impl FnMut(&Ctx, &mut InstanceRng)) {
    let n = field.order();
    for t in 0..cfg.trials as u64 {
        let ts = random::trial_seed(cfg.seed.wrapping_add(1_000_003 * n as u64), t);
        let ctx = Ctx { order: n, field: field.spec(), trial: Some(t), trial_seed: Some(ts) };
        let mut rng = random::rng_from_seed(ts);
        body(&ctx, &mut rng);
    }
}

pub fn run_suite(suite: &str, cfg: &SuiteConfig) -> Result<SuiteReport> {
    let mut ck = Checker::new(suite, cfg.seed);
    for &n in &cfg.orders {
        if n < 2 {
            return Err(Error::BadOrder(n));
        }
        match suite {
            "q-identities" => q_identities(&mut ck, n)?,
            "operator-q-binomial" => operator_binomial(&mut ck, cfg, n)?,
            "leibniz-powers" => leibniz_powers(&mut ck, cfg, n)?,
            "functors" => functors(&mut ck, cfg, n)?,
            "adjunction" => adjunction(&mut ck, cfg, n)?,
            "homotopy" => homotopy(&mut ck, cfg, n)?,
            "contraction" => contraction(&mut ck, cfg, n)?,
            "hexagon" => hexagon(&mut ck, cfg, n)?,
            "category" => crate::verify_cat::category_suite(cfg, n, &mut |name, ctx, out| {
                ck.check(name, &Ctx::from(ctx), out)
            })?,
            "dual-generator" => crate::verify_cat::dual_generator_suite(cfg, n, &mut |name, ctx, out| {
                ck.check(name, &Ctx::from(ctx), out)
            })?,
            "n2-regression" => n2_regression(&mut ck, cfg, n)?,
            other => return Err(Error::Parse(format!("unknown suite `{other}`"))),
        }
    }
    Ok(ck.finish())
}

/// Trial context exposed to suites defined in other modules.
#[derive(Clone, Debug)]
pub struct TrialCtx {
    pub order: usize,
    pub field: FieldSpec,
    pub trial: Option<u64>,
    pub trial_seed: Option<u64>,
}

impl From<&TrialCtx> for Ctx {
    fn from(t: &TrialCtx) -> Ctx {
        Ctx { order: t.order, field: t.field.clone(), trial: t.trial, trial_seed: t.trial_seed }
    }
}

pub type Sink<'a> = dyn FnMut(&str, &TrialCtx, Result<std::result::Result<(), String>>) + 'a;

/// Same seeding scheme as the suites in this module.
pub fn trial_contexts(cfg: &SuiteConfig, field: &Field) -> Vec<(TrialCtx, InstanceRng)> {
    let n = field.order();
    (0..cfg.trials as u64)
        .map(|t| {
            let ts = random::trial_seed(cfg.seed.wrapping_add(1_000_003 * n as u64), t);
            (
                TrialCtx { order: n, field: field.spec(), trial: Some(t), trial_seed: Some(ts) },
                random::rng_from_seed(ts),
            )
        })
        .collect()
}

// ---------------------------------------------------------------- q-identities

fn sign(f: &Field, l: usize, x: Scalar) -> Scalar {
    if l % 2 == 1 {
        f.neg(&x)
    } else {
        x
    }
}

fn q_identities(ck: &mut Checker, n: usize) -> Result<()> {
    let fields = [Field::new(&FieldSpec::cyclotomic(n))?, default_field(n)?];
    for f in &fields {
        let ctx = Ctx { order: n, field: f.spec(), trial: None, trial_seed: None };
        let kind = format!("{:?}", f.kind()).to_lowercase();
        let b = |m: usize, l: usize| f.q_binomial(m, l);
        for m in 2..=n {
            for l in 1..m {
                let out = (|| {
                    let lhs1 = f.add(&b(m - 1, l - 1)?, &f.mul(&f.q_pow(l as i64), &b(m - 1, l)?));
                    let lhs2 = f.add(&f.mul(&b(m - 1, l - 1)?, &f.q_pow((m - l) as i64)), &b(m - 1, l)?);
                    let rhs = b(m, l)?;
                    Ok(expect(lhs1 == rhs && lhs2 == rhs, || format!("Pascal fails at m={m}, l={l}")))
                })();
                ck.check(&format!("N={n} {kind} pascal"), &ctx, out);
            }
        }
        for t in 1..=n {
            let out = (|| {
                let mut acc = f.zero();
                for j in 0..=t {
                    let jj = j as i64;
                    acc = f.add(&acc, &sign(f, j, f.mul(&f.q_pow(jj * (jj - 1) / 2), &b(t, j)?)));
                }
                Ok(expect(acc.is_zero(), || format!("alternating sum nonzero at t={t}")))
            })();
            ck.check(&format!("N={n} {kind} alternating-sum"), &ctx, out);
        }
        for t in 1..n {
            for l in 0..=(n - t) {
                let out = (|| {
                    let (li, ti) = (l as i64, t as i64);
                    let lhs = sign(f, l, f.mul(&f.q_pow(li * ti + li * (li - 1) / 2), &b(n - t, l)?));
                    let rhs = b(l + t - 1, l)?;
                    Ok(expect(lhs == rhs, || format!("sign twist fails at t={t}, l={l}")))
                })();
                ck.check(&format!("N={n} {kind} sign-twist"), &ctx, out);
            }
        }
        for l in 1..n {
            let out = b(n, l).map(|v| expect(v.is_zero(), || format!("[N {l}] is nonzero")));
            ck.check(&format!("N={n} {kind} top-row-vanishes"), &ctx, out);
        }
        for m in 0..=n {
            for l in 0..=m {
                let out = (|| Ok(expect(b(m, l)? == b(m, m - l)?, || format!("asymmetric at m={m}, l={l}"))))();
                ck.check(&format!("N={n} {kind} symmetry"), &ctx, out);
            }
        }
    }
    Ok(())
}

// ---------------------------------------------------------------- operator q-binomial

/// `ψ = diag(q^0, …, q^{dim-1})` and the shift `φ: e_i -> e_{i+1}`.
pub fn q_commuting_pair(f: &Field, dim: usize) -> (Matrix, Matrix) {
    let psi = Matrix::from_fn(f, dim, dim, |r, c| if r == c { f.q_pow(r as i64) } else { f.zero() });
    let phi = Matrix::from_fn(f, dim, dim, |r, c| if r == c + 1 { f.one() } else { f.zero() });
    (psi, phi)
}

fn mat_pow(m: &Matrix, e: usize) -> Matrix {
    (0..e).fold(Matrix::identity(m.field(), m.rows()), |acc, _| m.compose(&acc))
}

fn operator_binomial(ck: &mut Checker, cfg: &SuiteConfig, n: usize) -> Result<()> {
    let f = default_field(n)?;
    for_trials(cfg, &f, |ctx, rng| {
        use rand::Rng;
        let dim = rng.gen_range(1..=8);
        let (psi, phi) = q_commuting_pair(&f, dim);
        // Conjugating keeps ψφ = qφψ and varies the instance.
        let g = random::random_invertible(&f, dim, rng);
        let gi = g.inverse().expect("invertible");
        let psi = g.compose(&psi).compose(&gi);
        let phi = g.compose(&phi).compose(&gi);
        let comm = psi.compose(&phi) == phi.compose(&psi).scale(&f.q());
        ck.check(&format!("N={n} q-commutation"), ctx, Ok(expect(comm, || "ψφ ≠ qφψ".into())));
        let sum = phi.add(&psi);
        for m in 1..=n {
            let out = (|| {
                let mut expansion = Matrix::zeros(&f, dim, dim);
                let mut inverse = Matrix::zeros(&f, dim, dim);
                for l in 0..=m {
                    let c = f.q_binomial(m, l)?;
                    expansion.add_scaled(&c, &mat_pow(&phi, m - l).compose(&mat_pow(&psi, l)));
                    let li = l as i64;
                    let c2 = sign(&f, l, f.mul(&f.q_pow(li * (li - 1) / 2), &c));
                    inverse.add_scaled(&c2, &mat_pow(&sum, m - l).compose(&mat_pow(&psi, l)));
                }
                Ok(expect(mat_pow(&sum, m) == expansion && mat_pow(&phi, m) == inverse, || {
                    format!("expansion fails for dim={dim}, m={m}")
                }))
            })();
            ck.check(&format!("N={n} expansions"), ctx, out);
        }
    });
    Ok(())
}

// ---------------------------------------------------------------- Leibniz powers

fn small_shape(n: usize) -> Shape {
    Shape { width: 2 * n, max_dim: 3, max_blocks: 3 }
}

fn leibniz_powers(ck: &mut Checker, cfg: &SuiteConfig, n: usize) -> Result<()> {
    use rand::seq::SliceRandom;
    let f = default_field(n)?;
    for_trials(cfg, &f, |ctx, rng| {
        let pair = (|| {
            let (u, _) = random::random_complex_with_blocks(&f, small_shape(n), rng)?;
            let (v, _) = random::random_complex_with_blocks(&f, small_shape(n), rng)?;
            Ok((u, v))
        })();
        let (u, v) = match pair {
            Ok(p) => p,
            Err(e) => return ck.check(&format!("N={n} generation"), ctx, Err(e)),
        };
        let hom = ncx::hom_complex(&u, &v);
        let ten = ncx::tensor_complex(&u, &v);
        ck.check(&format!("N={n} hom d^N=0"), ctx, hom.as_ref().map(|_| Ok(())).map_err(Clone::clone));
        ck.check(&format!("N={n} tensor d^N=0"), ctx, ten.as_ref().map(|_| Ok(())).map_err(Clone::clone));
        let (Ok(hom), Ok(ten)) = (hom, ten) else { return };
        // Hom: a random map in each of up to three random degrees.
        let mut degrees: Vec<i64> = hom.space().dims().keys().copied().collect();
        degrees.shuffle(rng);
        for &r in degrees.iter().take(3) {
            let out = (|| {
                let coords: Vec<Scalar> = (0..hom.dim(r)).map(|_| f.random(rng)).collect();
                let fmap = ncx::hom_element(&u, &v, r, &coords)?;
                for k in 1..=n {
                    let iterated = hom.d_power(r, k).apply(&coords);
                    let explicit = ncx::hom_coordinates(&ncx::hom_power_explicit(&fmap, &u, &v, k)?, &u, &v)?;
                    if iterated != explicit {
                        return Ok(Err(format!("hom power formula fails at degree {r}, n={k}")));
                    }
                }
                Ok(Ok(()))
            })();
            ck.check(&format!("N={n} hom power formula"), ctx, out);
        }
        if let Some((lo, hi)) = ten.support() {
            let out = (|| {
                for i in lo..=hi {
                    for k in 1..=n {
                        if ten.d_power(i, k) != ncx::tensor_power_explicit(&u, &v, i, k)? {
                            return Ok(Err(format!("tensor power formula fails at degree {i}, n={k}")));
                        }
                    }
                }
                Ok(Ok(()))
            })();
            ck.check(&format!("N={n} tensor power formula"), ctx, out);
        }
    });
    Ok(())
}

// ---------------------------------------------------------------- functors

/// Exactness and degreewise splitting of `0 -> A -a-> B -b-> C -> 0`.
pub fn short_exact_split(a: &GradedMap, b: &GradedMap) -> std::result::Result<(), String> {
    let bspace = a.target();
    let degrees: Vec<i64> =
        GradedSpace::direct_sum(&[a.source(), bspace, b.target()]).dims().keys().copied().collect();
    for i in degrees {
        let (am, bm) = (a.component(i), b.component(i));
        if !bm.compose(&am).is_zero() {
            return Err(format!("composite nonzero at degree {i}"));
        }
        let (ra, rb) = (am.rank(), bm.rank());
        if ra != am.cols() || rb != bm.rows() || ra + rb != bspace.dim(i) {
            return Err(format!("not exact at degree {i}"));
        }
        // A retraction ρ with ρa = 1 solves aᵀρᵀ = 1.
        let id = Matrix::identity(am.field(), am.cols());
        let Some(rt) = am.transpose().solve_matrix(&id) else {
            return Err(format!("no retraction at degree {i}"));
        };
        if rt.transpose().compose(&am) != id {
            return Err(format!("retraction check fails at degree {i}"));
        }
    }
    Ok(())
}

fn functors(ck: &mut Checker, cfg: &SuiteConfig, n: usize) -> Result<()> {
    let f = default_field(n)?;
    let ni = n as i64;
    for_trials(cfg, &f, |ctx, rng| {
        let x = match random::random_complex(&f, rng) {
            Ok(x) => x,
            Err(e) => return ck.check(&format!("N={n} generation"), ctx, Err(e)),
        };
        let out = (|| {
            let s = ncx::suspend(&x)?;
            Ok(expect(s == ncx::desuspend(&ncx::theta_shift(&x, ni))?, || "ΣX differs from Σ⁻¹θ^N X".into()))
        })();
        ck.check(&format!("N={n} sigma = desigma theta^N"), ctx, out);

        let maps = ncx::canonical_maps(&x);
        let out = maps.as_ref().map(|m| short_exact_split(&m.epsilon, &m.pi)).map_err(Clone::clone);
        ck.check(&format!("N={n} sequence eps-pi"), ctx, out);
        let out = maps.as_ref().map(|m| short_exact_split(&m.eta, &m.delta)).map_err(Clone::clone);
        ck.check(&format!("N={n} sequence eta-delta"), ctx, out);

        let out = ncx::cone(&x.identity_map(), &x, &x).map(|t| {
            expect(ncx::is_acyclic_with(&t.z, cfg.all_r), || "cone of the identity is not acyclic".into())
        });
        ck.check(&format!("N={n} cone(id) acyclic"), ctx, out);

        let out = (|| {
            let s = ncx::suspend(&x)?;
            let (lo, hi) = x.support().unwrap_or((0, 0));
            for r in 1..n {
                for i in lo - ni..=hi + ni {
                    let a = ncx::homology_dim(&s, i, r)?;
                    let b = ncx::homology_dim(&x, i + r as i64, n - r)?;
                    if a != b {
                        return Ok(Err(format!("H^{i}_({r}) ΣX = {a} but H^{}_({}) X = {b}", i + r as i64, n - r)));
                    }
                }
            }
            Ok(Ok(()))
        })();
        ck.check(&format!("N={n} suspension homology shift"), ctx, out);

        // Σ⁻¹Σ X has the homology of X.
        let out = (|| {
            let back = ncx::desuspend(&ncx::suspend(&x)?)?;
            let (lo, hi) = x.support().unwrap_or((0, 0));
            for r in 1..n {
                for i in lo - 2 * ni..=hi + 2 * ni {
                    if ncx::homology_dim(&back, i, r)? != ncx::homology_dim(&x, i, r)? {
                        return Ok(Err(format!("homology of Σ⁻¹ΣX differs at ({i}, {r})")));
                    }
                }
            }
            Ok(Ok(()))
        })();
        ck.check(&format!("N={n} desuspension inverts suspension"), ctx, out);
    });
    Ok(())
}

// ---------------------------------------------------------------- adjunction

fn chain_map_dim(x: &NComplex, y: &NComplex) -> Result<usize> {
    let h = ncx::hom_complex(x, y)?;
    Ok(h.dim(0) - h.d(0).rank())
}

fn adjunction(ck: &mut Checker, cfg: &SuiteConfig, n: usize) -> Result<()> {
    use rand::Rng;
    let f = default_field(n)?;
    let ni = n as i64;
    for_trials(cfg, &f, |ctx, rng| {
        let y = random::random_graded_space(n + 2, 3, rng);
        let r = rng.gen_range(0..ni);
        let x = match random::random_complex_with_blocks(&f, small_shape(n), rng) {
            Ok((x, _)) => x,
            Err(e) => return ck.check(&format!("N={n} generation"), ctx, Err(e)),
        };
        let ux = ncx::u_functor(r, &x);
        let graded: usize = y.dims().iter().map(|(&i, &d)| d * ux.dim(i)).sum();

        let out = (|| {
            let left = chain_map_dim(&ncx::q_functor(&f, -r, &y)?, &x)?;
            Ok(expect(left == graded, || format!("Hom(Q_-r Y, X) = {left}, Hom(Y, U_r X) = {graded}")))
        })();
        ck.check(&format!("N={n} left adjoint dims"), ctx, out);
        let out = (|| {
            let right = chain_map_dim(&x, &ncx::q_functor(&f, -r + ni - 1, &y)?)?;
            Ok(expect(right == graded, || format!("Hom(X, Q Y) = {right}, Hom(U_r X, Y) = {graded}")))
        })();
        ck.check(&format!("N={n} right adjoint dims"), ctx, out);

        // Q_{-r} ⊣ U_r with counit π and unit ξ.
        let out = (|| {
            let qy = ncx::q_functor(&f, -r, &y)?;
            let xi = ncx::unit_xi(&f, r, &y)?;
            let (_, pi_qy) = ncx::counit_pi(&qy)?;
            let first = pi_qy.compose(&ncx::q_functor_map(&f, -r, &xi)?)?;
            let (_, pi_x) = ncx::counit_pi(&x)?;
            let xi_ux = ncx::unit_xi(&f, r, &ux)?;
            let second = ncx::u_functor_map(r, &pi_x).compose(&xi_ux)?;
            Ok(expect(first == qy.identity_map() && second == GradedMap::identity(&f, &ux), || {
                "triangle identities for (Q_-r, U_r) fail".into()
            }))
        })();
        ck.check(&format!("N={n} triangle identities Q -| U"), ctx, out);

        // U_r ⊣ Q_{-r+N-1} with unit η and counit ζ.
        let out = (|| {
            let (_, eta_x) = ncx::unit_eta(&x)?;
            let zeta_ux = ncx::counit_zeta(&f, r, &ux)?;
            let first = zeta_ux.compose(&ncx::u_functor_map(r, &eta_x))?;
            let qy = ncx::q_functor(&f, -r + ni - 1, &y)?;
            let (_, eta_qy) = ncx::unit_eta(&qy)?;
            let zeta_y = ncx::counit_zeta(&f, r, &y)?;
            let second = ncx::q_functor_map(&f, -r + ni - 1, &zeta_y)?.compose(&eta_qy)?;
            Ok(expect(first == GradedMap::identity(&f, &ux) && second == qy.identity_map(), || {
                "triangle identities for (U_r, Q_-r+N-1) fail".into()
            }))
        })();
        ck.check(&format!("N={n} triangle identities U -| Q"), ctx, out);
    });
    Ok(())
}

// ---------------------------------------------------------------- homotopy

/// Dimension of degree-0 chain maps `a -> b` modulo null-homotopic ones,
/// solved directly from `dF = Fd` and `F = Σ_l d^{N-l-1} S d^l` without
/// going through the hom complex.
pub fn homotopy_classes_oracle(a: &NComplex, b: &NComplex) -> Result<usize> {
    let f = a.field();
    let n = a.order();
    let ni = n as i64;
    // Unknowns: entries of F^i: a^i -> b^i, row-major, degrees ascending.
    let mut index = BTreeMap::new();
    let mut total = 0;
    for (&i, &da) in a.space().dims() {
        let db = b.dim(i);
        index.insert(i, total);
        total += da * db;
    }
    let var = |i: i64, r: usize, c: usize| index[&i] + r * a.dim(i) + c;
    // Equations d_b F^i − F^{i+1} d_a = 0 at each degree i of a.
    let mut rows: Vec<Vec<Scalar>> = Vec::new();
    for &i in a.space().dims().keys() {
        let (db, da) = (b.d(i), a.d(i));
        for r in 0..b.dim(i + 1) {
            for c in 0..a.dim(i) {
                let mut row = vec![f.zero(); total];
                for k in 0..b.dim(i) {
                    if !db.get(r, k).is_zero() {
                        row[var(i, k, c)] = f.add(&row[var(i, k, c)], db.get(r, k));
                    }
                }
                for k in 0..a.dim(i + 1) {
                    if !da.get(k, c).is_zero() {
                        row[var(i + 1, r, k)] = f.sub(&row[var(i + 1, r, k)], da.get(k, c));
                    }
                }
                rows.push(row);
            }
        }
    }
    let chain_dim = if rows.is_empty() { total } else { total - Matrix::from_rows(f, rows)?.rank() };
    // Null-homotopic maps: images of elementary S: a^j -> b^{j+1-N}.
    let mut images: Vec<Vec<Scalar>> = Vec::new();
    for &j in a.space().dims().keys() {
        let t = j + 1 - ni;
        for r in 0..b.dim(t) {
            for c in 0..a.dim(j) {
                let mut s = Matrix::zeros(f, b.dim(t), a.dim(j));
                s.set(r, c, f.one());
                let mut v = vec![f.zero(); total];
                // Term l lives at degree i = j - l.
                for l in 0..n {
                    let i = j - l as i64;
                    if a.dim(i) == 0 || b.dim(i) == 0 {
                        continue;
                    }
                    let term = b.d_power(t, n - 1 - l).compose(&s).compose(&a.d_power(i, l));
                    for rr in 0..b.dim(i) {
                        for cc in 0..a.dim(i) {
                            let x = term.get(rr, cc);
                            if !x.is_zero() {
                                v[var(i, rr, cc)] = f.add(&v[var(i, rr, cc)], x);
                            }
                        }
                    }
                }
                images.push(v);
            }
        }
    }
    let null_dim = if images.is_empty() { 0 } else { Matrix::from_rows(f, images)?.rank() };
    Ok(chain_dim - null_dim)
}

fn homotopy(ck: &mut Checker, cfg: &SuiteConfig, n: usize) -> Result<()> {
    use rand::Rng;
    let f = default_field(n)?;
    let ni = n as i64;
    let ctx0 = Ctx { order: n, field: f.spec(), trial: None, trial_seed: None };
    let out = (|| {
        let pt = NComplex::trivial(&f, GradedSpace::concentrated(0, 1));
        Ok(expect(ncx::null_homotopy(&pt.identity_map(), &pt, &pt)?.is_none(), || {
            "identity of k is null-homotopic".into()
        }))
    })();
    ck.check(&format!("N={n} point not contractible"), &ctx0, out);
    for_trials(cfg, &f, |ctx, rng| {
        let out = (|| {
            let m = random::random_graded_space(3, 2, rng);
            let r = rng.gen_range(-ni..=ni);
            let q = ncx::q_functor(&f, r, &m)?;
            let Some(s) = ncx::null_homotopy(&q.identity_map(), &q, &q)? else {
                return Ok(Err("identity of a Q-block has no null-homotopy".into()));
            };
            Ok(expect(ncx::homotopy_sum(&s, &q, &q)? == q.identity_map(), || "witness does not sum to 1".into()))
        })();
        ck.check(&format!("N={n} Q-block contractible"), ctx, out);

        let out = (|| {
            let (x, _) = random::random_complex_with_blocks(&f, small_shape(n), rng)?;
            let (y, _) = random::random_complex_with_blocks(&f, small_shape(n), rng)?;
            let deg = rng.gen_range(-ni..=ni);
            let a = ncx::theta_shift(&x, -deg);
            let via_hom0 = ncx::khom_dim(&x, &y, deg, KhomFlavor::Susp0)?;
            let oracle0 = homotopy_classes_oracle(&a, &y)?;
            let via_hom1 = ncx::khom_dim(&x, &y, deg, KhomFlavor::Susp1)?;
            let oracle1 = homotopy_classes_oracle(&a, &ncx::suspend(&y)?)?;
            Ok(expect(via_hom0 == oracle0 && via_hom1 == oracle1, || {
                format!("n={deg}: H gives ({via_hom0}, {via_hom1}), direct count gives ({oracle0}, {oracle1})")
            }))
        })();
        ck.check(&format!("N={n} khom two routes"), ctx, out);
    });
    Ok(())
}

// ---------------------------------------------------------------- contraction

fn contraction(ck: &mut Checker, cfg: &SuiteConfig, n: usize) -> Result<()> {
    let f = default_field(n)?;
    for_trials(cfg, &f, |ctx, rng| {
        let out = (|| {
            let (x, blocks) = random::random_acyclic(&f, Shape::for_order(n), rng)?;
            let c = ncx::contract_acyclic(&x)?;
            let mut starts: Vec<i64> = blocks.iter().map(|b| b.0).collect();
            starts.sort();
            if c.blocks != starts {
                return Ok(Err(format!("blocks {:?}, expected {:?}", c.blocks, starts)));
            }
            let expected = random::block_sum(&f, &blocks)?;
            if c.normal_form != expected {
                return Ok(Err("normal form is not the staircase sum".into()));
            }
            let g = &c.basis_change;
            let Some(_) = g.inverse() else {
                return Ok(Err("basis change is not invertible".into()));
            };
            for &i in x.space().dims().keys() {
                let lhs = g.component(i + 1).compose(&x.d(i));
                let rhs = expected.d(i).compose(&g.component(i));
                if lhs != rhs {
                    return Ok(Err(format!("g d ≠ J g at degree {i}")));
                }
            }
            Ok(Ok(()))
        })();
        ck.check(&format!("N={n} contraction"), ctx, out);
    });
    Ok(())
}

// ---------------------------------------------------------------- hexagon

fn hexagon(ck: &mut Checker, cfg: &SuiteConfig, n: usize) -> Result<()> {
    let f = default_field(n)?;
    for_trials(cfg, &f, |ctx, rng| {
        let tri = (|| {
            let x = random::random_complex(&f, rng)?;
            let y = random::random_complex(&f, rng)?;
            let map = random::random_chain_map(&x, &y, rng)?;
            ncx::cone(&map, &x, &y)
        })();
        let t = match tri {
            Ok(t) => t,
            Err(e) => return ck.check(&format!("N={n} cone"), ctx, Err(e)),
        };
        let out = (|| {
            let (lo, hi) = ncx::triangle_window(&t);
            for m in lo..=hi {
                let expected = t.y.dim(m) + (1..n as i64).map(|i| t.x.dim(m + i)).sum::<usize>();
                if t.z.dim(m) != expected {
                    return Ok(Err(format!("dim Z^{m} = {}, expected {expected}", t.z.dim(m))));
                }
            }
            Ok(Ok(()))
        })();
        ck.check(&format!("N={n} cone dimensions"), ctx, out);
        let out = ncx::hexagon_report(&t, None).map(|rep| {
            match rep.entries.iter().find(|e| !e.exact) {
                None => Ok(()),
                Some(e) => Err(format!("not exact at {:?} degree {} r={}: {e:?}", e.position, e.degree, e.r)),
            }
        });
        ck.check(&format!("N={n} hexagon exact"), ctx, out);
    });
    Ok(())
}

// ---------------------------------------------------------------- N = 2

/// Classical cochain complexes mod p, implemented from scratch.
mod classical {
    use std::collections::BTreeMap;

    pub type Mat = Vec<Vec<u64>>;

    #[derive(Clone, Debug)]
    pub struct Cx {
        pub p: u64,
        pub dims: BTreeMap<i64, usize>,
        pub d: BTreeMap<i64, Mat>,
    }

    fn pow(mut b: u64, mut e: u64, p: u64) -> u64 {
        let mut r = 1;
        b %= p;
        while e > 0 {
            if e & 1 == 1 {
                r = r * b % p;
            }
            b = b * b % p;
            e >>= 1;
        }
        r
    }

    pub fn rank(m: &Mat, p: u64) -> usize {
        let mut a = m.clone();
        let rows = a.len();
        let cols = a.first().map_or(0, Vec::len);
        let mut rank = 0;
        for c in 0..cols {
            let Some(pr) = (rank..rows).find(|&r| a[r][c] != 0) else { continue };
            a.swap(rank, pr);
            let inv = pow(a[rank][c], p - 2, p);
            for x in a[rank].iter_mut() {
                *x = *x * inv % p;
            }
            for r in 0..rows {
                if r != rank && a[r][c] != 0 {
                    let k = a[r][c];
                    for cc in 0..cols {
                        a[r][cc] = (a[r][cc] + p * p - k * a[rank][cc] % p) % p;
                    }
                }
            }
            rank += 1;
        }
        rank
    }

    impl Cx {
        pub fn dim(&self, i: i64) -> usize {
            self.dims.get(&i).copied().unwrap_or(0)
        }

        fn d_or_zero(&self, i: i64) -> Mat {
            self.d.get(&i).cloned().unwrap_or_else(|| vec![vec![0; self.dim(i)]; self.dim(i + 1)])
        }

        pub fn cohomology(&self, i: i64) -> usize {
            let out = rank(&self.d_or_zero(i), self.p);
            let inc = rank(&self.d_or_zero(i - 1), self.p);
            self.dim(i) - out - inc
        }

        pub fn window(&self) -> (i64, i64) {
            let lo = self.dims.keys().next().copied().unwrap_or(0);
            let hi = self.dims.keys().next_back().copied().unwrap_or(0);
            (lo - 2, hi + 2)
        }

        pub fn acyclic(&self) -> bool {
            let (lo, hi) = self.window();
            (lo..=hi).all(|i| self.cohomology(i) == 0)
        }

        /// `ΣX^m = X^{m+1}`, `d = −d_X`.
        pub fn shift(&self) -> Cx {
            let p = self.p;
            Cx {
                p,
                dims: self.dims.iter().map(|(&i, &d)| (i - 1, d)).collect(),
                d: self
                    .d
                    .iter()
                    .map(|(&i, m)| (i - 1, m.iter().map(|r| r.iter().map(|&x| (p - x) % p).collect()).collect()))
                    .collect(),
            }
        }

        /// `C^m = X^{m+1} ⊕ Y^m`, `d(x, y) = (−dx, f x + dy)`.
        pub fn cone(x: &Cx, y: &Cx, f: &BTreeMap<i64, Mat>) -> Cx {
            let p = x.p;
            let mut dims = BTreeMap::new();
            let lo = x.window().0.min(y.window().0);
            let hi = x.window().1.max(y.window().1);
            for m in lo..=hi {
                let d = x.dim(m + 1) + y.dim(m);
                if d > 0 {
                    dims.insert(m, d);
                }
            }
            let mut d = BTreeMap::new();
            for m in lo..hi {
                let (sx, sy) = (x.dim(m + 1), y.dim(m));
                let (tx, ty) = (x.dim(m + 2), y.dim(m + 1));
                let mut mat = vec![vec![0u64; sx + sy]; tx + ty];
                let dx = x.d_or_zero(m + 1);
                let dy = y.d_or_zero(m);
                for r in 0..tx {
                    for c in 0..sx {
                        mat[r][c] = (p - dx[r][c]) % p;
                    }
                }
                if let Some(fm) = f.get(&(m + 1)) {
                    for r in 0..ty {
                        for c in 0..sx {
                            mat[tx + r][c] = fm[r][c];
                        }
                    }
                }
                for r in 0..ty {
                    for c in 0..sy {
                        mat[tx + r][sx + c] = dy[r][c];
                    }
                }
                d.insert(m, mat);
            }
            Cx { p, dims, d }
        }
    }
}

fn to_u64_matrix(m: &Matrix) -> Result<classical::Mat> {
    (0..m.rows())
        .map(|r| {
            (0..m.cols())
                .map(|c| match m.get(r, c) {
                    Scalar::Mod(v) => Ok(*v),
                    Scalar::Cyc(_) => Err(Error::FieldMismatch),
                })
                .collect()
        })
        .collect()
}

fn to_classical(x: &NComplex) -> Result<classical::Cx> {
    Ok(classical::Cx {
        p: x.field().characteristic(),
        dims: x.space().dims().clone(),
        d: x.differentials().iter().map(|(&i, m)| Ok((i, to_u64_matrix(m)?))).collect::<Result<_>>()?,
    })
}

fn n2_regression(ck: &mut Checker, cfg: &SuiteConfig, n: usize) -> Result<()> {
    use rand::Rng;
    if n != 2 {
        return Ok(());
    }
    let f = default_field(2)?;
    for_trials(cfg, &f, |ctx, rng| {
        let out = (|| {
            let q_ok = f.q() == f.from_i64(-1);
            let x = random::random_complex(&f, rng)?;
            let (y, map) = if rng.gen_bool(0.3) {
                // X -> X ⊕ (contractible) is a quasi-isomorphism.
                let extra = random::block_sum(&f, &[(rng.gen_range(0..3), 2)])?;
                let y = ncx::direct_sum(&f, &[&x, &extra])?;
                let mut comps = BTreeMap::new();
                for (&i, &d) in x.space().dims() {
                    let mut m = Matrix::zeros(&f, y.dim(i), d);
                    m.set_block(0, 0, &Matrix::identity(&f, d));
                    comps.insert(i, m);
                }
                let map = GradedMap::new(&f, 0, x.space(), y.space(), comps)?;
                (y, map)
            } else {
                let y = random::random_complex(&f, rng)?;
                let map = random::random_chain_map(&x, &y, rng)?;
                (y, map)
            };
            let cx = to_classical(&x)?;
            let cy = to_classical(&y)?;
            let cf: BTreeMap<i64, classical::Mat> =
                map.components().iter().map(|(&i, m)| Ok((i, to_u64_matrix(m)?))).collect::<Result<_>>()?;
            let (lo, hi) = cx.window();
            for i in lo..=hi {
                if ncx::homology_dim(&x, i, 1)? != cx.cohomology(i) {
                    return Ok(Err(format!("homology differs at degree {i}")));
                }
            }
            let sx = ncx::suspend(&x)?;
            let csx = cx.shift();
            let (lo, hi) = csx.window();
            for i in lo..=hi {
                if ncx::homology_dim(&sx, i, 1)? != csx.cohomology(i) {
                    return Ok(Err(format!("suspension homology differs at degree {i}")));
                }
            }
            let t = ncx::cone(&map, &x, &y)?;
            let cc = classical::Cx::cone(&cx, &cy, &cf);
            let (lo, hi) = cc.window();
            for i in lo..=hi {
                if ncx::homology_dim(&t.z, i, 1)? != cc.cohomology(i) {
                    return Ok(Err(format!("cone homology differs at degree {i}")));
                }
            }
            let qi = ncx::is_quasi_iso_with(&map, &x, &y, cfg.all_r)?;
            if qi != cc.acyclic() {
                return Ok(Err(format!("quasi-isomorphism verdict {qi} disagrees with the classical cone")));
            }
            Ok(expect(q_ok, || "q is not -1".into()))
        })();
        ck.check("N=2 classical agreement", ctx, out);
    });
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_primes() {
        let got: Vec<u64> = (2..=8).map(default_prime).collect();
        assert_eq!(got, vec![7, 7, 13, 11, 7, 29, 17]);
    }

    #[test]
    fn classical_rank() {
        assert_eq!(classical::rank(&vec![vec![1, 2], vec![2, 4]], 7), 1);
        assert_eq!(classical::rank(&vec![vec![1, 2], vec![2, 5]], 7), 2);
    }

    #[test]
    fn oracle_on_point() {
        let f = default_field(3).unwrap();
        let pt = NComplex::trivial(&f, GradedSpace::concentrated(0, 1));
        assert_eq!(homotopy_classes_oracle(&pt, &pt).unwrap(), 1);
        let b = ncx::standard_block(&f, 0, 3).unwrap();
        assert_eq!(homotopy_classes_oracle(&b, &b).unwrap(), 0);
    }
}
