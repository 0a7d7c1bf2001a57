//! Exact coefficient fields carrying a designated primitive `N`-th root of
//! unity `q`, together with q-integers, q-factorials and q-binomials.
//!
//! Two kinds of field are supported: the cyclotomic field `Q(zeta_N)`, whose
//! elements are residue polynomials modulo the `N`-th cyclotomic polynomial
//! with exact rational coefficients, and prime fields `F_p` with `N | p - 1`.

use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FieldKind {
    Cyclotomic,
    Prime,
}

/// Textual form of a scalar: an integer, a rational string such as `"-1/2"`,
/// or (cyclotomic fields) an array of coefficients, constant term first.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ScalarRepr {
    Int(i64),
    Text(String),
    Coeffs(Vec<ScalarRepr>),
}

/// Serialized description of a field, e.g. `{"kind":"prime","p":7,"N":3,"q":2}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FieldSpec {
    pub kind: FieldKind,
    #[serde(rename = "N")]
    pub n: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub p: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub q: Option<ScalarRepr>,
}

impl FieldSpec {
    pub fn cyclotomic(n: usize) -> Self {
        FieldSpec { kind: FieldKind::Cyclotomic, n, p: None, q: None }
    }

    pub fn prime(p: u64, n: usize) -> Self {
        FieldSpec { kind: FieldKind::Prime, n, p: Some(p), q: None }
    }

    pub fn prime_with_root(p: u64, n: usize, q: u64) -> Self {
        FieldSpec { kind: FieldKind::Prime, n, p: Some(p), q: Some(ScalarRepr::Int(q as i64)) }
    }
}

/// A field element. Cyclotomic elements are stored fully reduced, with a
/// coefficient vector of length `deg Phi_N`, so structural equality is field
/// equality.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Scalar {
    Mod(u64),
    Cyc(Box<[BigRational]>),
}

impl Scalar {
    pub fn is_zero(&self) -> bool {
        match self {
            Scalar::Mod(v) => *v == 0,
            Scalar::Cyc(c) => c.iter().all(Zero::is_zero),
        }
    }
}

#[derive(Debug, PartialEq, Eq)]
enum Arith {
    Prime { p: u64 },
    /// Monic `Phi_N`, constant term first.
    Cyclotomic { phi: Vec<BigRational> },
}

#[derive(Debug)]
struct Inner {
    n: usize,
    arith: Arith,
    q: Scalar,
    q_powers: Vec<Scalar>,
}

/// Shared handle to a coefficient field. Cloning is cheap.
#[derive(Clone, Debug)]
pub struct Field {
    inner: Arc<Inner>,
}

impl PartialEq for Field {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.inner, &other.inner)
            || (self.inner.n == other.inner.n
                && self.inner.arith == other.inner.arith
                && self.inner.q == other.inner.q)
    }
}

impl Eq for Field {}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.inner.arith {
            Arith::Prime { p } => write!(f, "F_{} (N={}, q={})", p, self.inner.n, self.format(&self.inner.q)),
            Arith::Cyclotomic { .. } => write!(f, "Q(zeta_{}) (q={})", self.inner.n, self.format(&self.inner.q)),
        }
    }
}

pub fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= p {
        if p.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

fn prime_factors(mut m: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2u64;
    while d * d <= m {
        if m % d == 0 {
            out.push(d);
            while m % d == 0 {
                m /= d;
            }
        }
        d += 1;
    }
    if m > 1 {
        out.push(m);
    }
    out
}

fn pow_mod(mut base: u64, mut exp: u64, p: u64) -> u64 {
    let mut acc = 1 % p;
    base %= p;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * base % p;
        }
        base = base * base % p;
        exp >>= 1;
    }
    acc
}

/// Smallest generator of the multiplicative group of `F_p`.
pub fn primitive_root_mod(p: u64) -> u64 {
    let factors = prime_factors(p - 1);
    (2..p)
        .find(|&g| factors.iter().all(|&f| pow_mod(g, (p - 1) / f, p) != 1))
        .unwrap_or(1)
}

// Polynomials over Q, constant term first, trailing zeros trimmed.

fn trim(mut v: Vec<BigRational>) -> Vec<BigRational> {
    while v.last().is_some_and(Zero::is_zero) {
        v.pop();
    }
    v
}

fn poly_mul(a: &[BigRational], b: &[BigRational]) -> Vec<BigRational> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![BigRational::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    trim(out)
}

fn poly_sub(a: &[BigRational], b: &[BigRational]) -> Vec<BigRational> {
    let len = a.len().max(b.len());
    let out = (0..len)
        .map(|i| {
            let x = a.get(i).cloned().unwrap_or_else(BigRational::zero);
            let y = b.get(i).cloned().unwrap_or_else(BigRational::zero);
            x - y
        })
        .collect();
    trim(out)
}

/// Quotient and remainder of `a` by nonzero `b`.
fn poly_divrem(a: &[BigRational], b: &[BigRational]) -> (Vec<BigRational>, Vec<BigRational>) {
    let b = trim(b.to_vec());
    let mut rem = trim(a.to_vec());
    if rem.len() < b.len() {
        return (Vec::new(), rem);
    }
    let lead = b.last().expect("nonzero divisor").clone();
    let mut quot = vec![BigRational::zero(); rem.len() - b.len() + 1];
    while rem.len() >= b.len() && !rem.is_empty() {
        let shift = rem.len() - b.len();
        let c = rem.last().unwrap() / &lead;
        for (j, bj) in b.iter().enumerate() {
            rem[shift + j] -= &c * bj;
        }
        quot[shift] = c;
        rem.pop();
        rem = trim(rem);
    }
    (trim(quot), rem)
}

/// `Phi_n` as a monic polynomial with rational coefficients.
pub fn cyclotomic_polynomial(n: usize) -> Vec<BigRational> {
    let mut poly = vec![BigRational::zero(); n + 1];
    poly[0] = -BigRational::one();
    poly[n] = BigRational::one();
    for d in 1..n {
        if n % d == 0 {
            let (q, r) = poly_divrem(&poly, &cyclotomic_polynomial(d));
            debug_assert!(r.is_empty());
            poly = q;
        }
    }
    poly
}

fn rat(v: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(v))
}

impl Field {
    pub fn new(spec: &FieldSpec) -> Result<Field> {
        if spec.n < 2 {
            return Err(Error::BadOrder(spec.n));
        }
        let n = spec.n;
        match spec.kind {
            FieldKind::Prime => {
                let p = spec.p.ok_or_else(|| Error::Parse("prime field needs `p`".into()))?;
                if !is_prime(p) {
                    return Err(Error::NotAField(p));
                }
                if p > u32::MAX as u64 {
                    return Err(Error::OutOfRange(format!("p = {p} exceeds 32 bits")));
                }
                if (p - 1) % n as u64 != 0 {
                    return Err(Error::NoPrimitiveRoot { n, p });
                }
                let skeleton = Field::assemble(n, Arith::Prime { p }, Scalar::Mod(1 % p));
                let q = match &spec.q {
                    Some(repr) => skeleton.parse(repr)?,
                    None => Scalar::Mod(pow_mod(primitive_root_mod(p), (p - 1) / n as u64, p)),
                };
                skeleton.with_root(q)
            }
            FieldKind::Cyclotomic => {
                if spec.p.is_some() {
                    return Err(Error::Parse("cyclotomic field takes no `p`".into()));
                }
                let phi = cyclotomic_polynomial(n);
                let skeleton = Field::assemble(n, Arith::Cyclotomic { phi }, Scalar::Mod(0));
                let q = match &spec.q {
                    Some(repr) => skeleton.parse(repr)?,
                    None => skeleton.reduce(vec![BigRational::zero(), BigRational::one()]),
                };
                skeleton.with_root(q)
            }
        }
    }

    fn assemble(n: usize, arith: Arith, q: Scalar) -> Field {
        Field { inner: Arc::new(Inner { n, arith, q, q_powers: Vec::new() }) }
    }

    /// Same underlying field with a different designated root. Fails unless
    /// `q` is a primitive `N`-th root of unity.
    pub fn with_root(&self, q: Scalar) -> Result<Field> {
        let n = self.inner.n;
        let arith = match &self.inner.arith {
            Arith::Prime { p } => Arith::Prime { p: *p },
            Arith::Cyclotomic { phi } => Arith::Cyclotomic { phi: phi.clone() },
        };
        let mut powers = Vec::with_capacity(n);
        let mut acc = self.one();
        for _ in 0..n {
            powers.push(acc.clone());
            acc = self.mul(&acc, &q);
        }
        if acc != self.one() {
            return Err(Error::BadRoot { n, detail: format!("q^{n} = {} != 1", self.format(&acc)) });
        }
        if let Some(l) = (1..n).find(|&l| powers[l] == self.one()) {
            return Err(Error::BadRoot { n, detail: format!("q^{l} = 1") });
        }
        Ok(Field { inner: Arc::new(Inner { n, arith, q, q_powers: powers }) })
    }

    /// The same field with root `q^{-1}`.
    pub fn inverse_root(&self) -> Field {
        self.with_root(self.q_pow(-1)).expect("inverse of a primitive root is primitive")
    }

    pub fn order(&self) -> usize {
        self.inner.n
    }

    pub fn kind(&self) -> FieldKind {
        match self.inner.arith {
            Arith::Prime { .. } => FieldKind::Prime,
            Arith::Cyclotomic { .. } => FieldKind::Cyclotomic,
        }
    }

    pub fn characteristic(&self) -> u64 {
        match self.inner.arith {
            Arith::Prime { p } => p,
            Arith::Cyclotomic { .. } => 0,
        }
    }

    /// Whether the two handles share the same arithmetic (the designated
    /// roots may differ).
    pub fn same_arith(&self, other: &Field) -> bool {
        self.inner.n == other.inner.n && self.inner.arith == other.inner.arith
    }

    pub fn spec(&self) -> FieldSpec {
        match &self.inner.arith {
            Arith::Prime { p } => FieldSpec {
                kind: FieldKind::Prime,
                n: self.inner.n,
                p: Some(*p),
                q: Some(self.to_repr(&self.inner.q)),
            },
            Arith::Cyclotomic { .. } => FieldSpec {
                kind: FieldKind::Cyclotomic,
                n: self.inner.n,
                p: None,
                q: Some(self.to_repr(&self.inner.q)),
            },
        }
    }

    fn degree(&self) -> usize {
        match &self.inner.arith {
            Arith::Prime { .. } => 1,
            Arith::Cyclotomic { phi } => phi.len() - 1,
        }
    }

    fn reduce(&self, poly: Vec<BigRational>) -> Scalar {
        match &self.inner.arith {
            Arith::Cyclotomic { phi } => {
                let (_, r) = poly_divrem(&poly, phi);
                let mut coeffs = r;
                coeffs.resize(phi.len() - 1, BigRational::zero());
                Scalar::Cyc(coeffs.into_boxed_slice())
            }
            Arith::Prime { .. } => unreachable!("reduce is cyclotomic only"),
        }
    }

    pub fn zero(&self) -> Scalar {
        match &self.inner.arith {
            Arith::Prime { .. } => Scalar::Mod(0),
            Arith::Cyclotomic { phi } => Scalar::Cyc(vec![BigRational::zero(); phi.len() - 1].into_boxed_slice()),
        }
    }

    pub fn one(&self) -> Scalar {
        self.from_i64(1)
    }

    pub fn from_i64(&self, v: i64) -> Scalar {
        match &self.inner.arith {
            Arith::Prime { p } => Scalar::Mod(v.rem_euclid(*p as i64) as u64),
            Arith::Cyclotomic { .. } => {
                let mut c = vec![BigRational::zero(); self.degree()];
                c[0] = rat(v);
                Scalar::Cyc(c.into_boxed_slice())
            }
        }
    }

    pub fn from_rational(&self, r: &BigRational) -> Result<Scalar> {
        match &self.inner.arith {
            Arith::Prime { p } => {
                let pb = BigInt::from(*p);
                let num = (r.numer() % &pb + &pb) % &pb;
                let den = (r.denom() % &pb + &pb) % &pb;
                let num: u64 = num.try_into().expect("reduced mod p");
                let den: u64 = den.try_into().expect("reduced mod p");
                if den == 0 {
                    return Err(Error::Parse(format!("denominator of {r} vanishes mod {p}")));
                }
                Ok(Scalar::Mod(num * pow_mod(den, p - 2, *p) % p))
            }
            Arith::Cyclotomic { .. } => {
                let mut c = vec![BigRational::zero(); self.degree()];
                c[0] = r.clone();
                Ok(Scalar::Cyc(c.into_boxed_slice()))
            }
        }
    }

    pub fn add(&self, a: &Scalar, b: &Scalar) -> Scalar {
        match (&self.inner.arith, a, b) {
            (Arith::Prime { p }, Scalar::Mod(x), Scalar::Mod(y)) => Scalar::Mod((x + y) % p),
            (Arith::Cyclotomic { .. }, Scalar::Cyc(x), Scalar::Cyc(y)) => {
                Scalar::Cyc(x.iter().zip(y.iter()).map(|(u, v)| u + v).collect())
            }
            _ => panic!("scalar from a different field"),
        }
    }

    pub fn neg(&self, a: &Scalar) -> Scalar {
        match (&self.inner.arith, a) {
            (Arith::Prime { p }, Scalar::Mod(x)) => Scalar::Mod((p - x) % p),
            (Arith::Cyclotomic { .. }, Scalar::Cyc(x)) => Scalar::Cyc(x.iter().map(|u| -u).collect()),
            _ => panic!("scalar from a different field"),
        }
    }

    pub fn sub(&self, a: &Scalar, b: &Scalar) -> Scalar {
        match (&self.inner.arith, a, b) {
            (Arith::Prime { p }, Scalar::Mod(x), Scalar::Mod(y)) => Scalar::Mod((x + p - y) % p),
            (Arith::Cyclotomic { .. }, Scalar::Cyc(x), Scalar::Cyc(y)) => {
                Scalar::Cyc(x.iter().zip(y.iter()).map(|(u, v)| u - v).collect())
            }
            _ => panic!("scalar from a different field"),
        }
    }

    pub fn mul(&self, a: &Scalar, b: &Scalar) -> Scalar {
        match (&self.inner.arith, a, b) {
            (Arith::Prime { p }, Scalar::Mod(x), Scalar::Mod(y)) => Scalar::Mod(x * y % p),
            (Arith::Cyclotomic { .. }, Scalar::Cyc(x), Scalar::Cyc(y)) => {
                if a.is_zero() || b.is_zero() {
                    return self.zero();
                }
                self.reduce(poly_mul(x, y))
            }
            _ => panic!("scalar from a different field"),
        }
    }

    /// `acc + a * b`.
    pub fn mul_add(&self, acc: &Scalar, a: &Scalar, b: &Scalar) -> Scalar {
        match (&self.inner.arith, acc, a, b) {
            (Arith::Prime { p }, Scalar::Mod(s), Scalar::Mod(x), Scalar::Mod(y)) => Scalar::Mod((s + x * y) % p),
            _ => self.add(acc, &self.mul(a, b)),
        }
    }

    pub fn inv(&self, a: &Scalar) -> Option<Scalar> {
        if a.is_zero() {
            return None;
        }
        match (&self.inner.arith, a) {
            (Arith::Prime { p }, Scalar::Mod(x)) => Some(Scalar::Mod(pow_mod(*x, p - 2, *p))),
            (Arith::Cyclotomic { phi }, Scalar::Cyc(x)) => {
                // Extended Euclid in Q[x]: track s with s * a = r (mod phi).
                let mut r0 = phi.clone();
                let mut r1 = trim(x.to_vec());
                let mut s0: Vec<BigRational> = Vec::new();
                let mut s1: Vec<BigRational> = vec![BigRational::one()];
                while r1.len() > 1 {
                    let (quot, rem) = poly_divrem(&r0, &r1);
                    let s2 = poly_sub(&s0, &poly_mul(&quot, &s1));
                    r0 = std::mem::replace(&mut r1, rem);
                    s0 = std::mem::replace(&mut s1, s2);
                }
                let c = r1.first().cloned()?;
                let scaled: Vec<BigRational> = s1.iter().map(|v| v / &c).collect();
                Some(self.reduce(scaled))
            }
            _ => panic!("scalar from a different field"),
        }
    }

    pub fn div(&self, a: &Scalar, b: &Scalar) -> Option<Scalar> {
        self.inv(b).map(|bi| self.mul(a, &bi))
    }

    pub fn pow(&self, a: &Scalar, mut exp: u64) -> Scalar {
        let mut base = a.clone();
        let mut acc = self.one();
        while exp > 0 {
            if exp & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            base = self.mul(&base, &base);
            exp >>= 1;
        }
        acc
    }

    pub fn q(&self) -> Scalar {
        self.inner.q.clone()
    }

    /// `q^e` for any integer `e`; negative powers use `q^{-1} = q^{N-1}`.
    pub fn q_pow(&self, e: i64) -> Scalar {
        let n = self.inner.n as i64;
        self.inner.q_powers[e.rem_euclid(n) as usize].clone()
    }

    /// `[m] = 1 + q + ... + q^{m-1}` for `0 <= m <= N`.
    pub fn q_int(&self, m: usize) -> Result<Scalar> {
        if m > self.inner.n {
            return Err(Error::OutOfRange(format!("q-integer [{m}] with N = {}", self.inner.n)));
        }
        Ok((0..m).fold(self.zero(), |acc, i| self.add(&acc, &self.q_pow(i as i64))))
    }

    /// `[m]! = [m][m-1]...[1]`, `[0]! = 1`.
    pub fn q_factorial(&self, m: usize) -> Result<Scalar> {
        (1..=m).try_fold(self.one(), |acc, i| Ok(self.mul(&acc, &self.q_int(i)?)))
    }

    /// Gaussian binomial `[m l]` for `0 <= l <= m <= N`, with the conventions
    /// `[N N] = [N 0] = 1` and `[N l] = 0` for `0 < l < N`.
    pub fn q_binomial(&self, m: usize, l: usize) -> Result<Scalar> {
        let n = self.inner.n;
        if l > m || m > n {
            return Err(Error::OutOfRange(format!("q-binomial [{m} {l}] with N = {n}")));
        }
        if l == 0 || l == m {
            return Ok(self.one());
        }
        if m == n {
            return Ok(self.zero());
        }
        let num = self.q_factorial(m)?;
        let den = self.mul(&self.q_factorial(l)?, &self.q_factorial(m - l)?);
        Ok(self.div(&num, &den).expect("[l]![m-l]! is invertible for m < N"))
    }

    pub fn random<R: Rng + ?Sized>(&self, rng: &mut R) -> Scalar {
        match &self.inner.arith {
            Arith::Prime { p } => Scalar::Mod(rng.gen_range(0..*p)),
            Arith::Cyclotomic { .. } => {
                let c: Vec<BigRational> = (0..self.degree()).map(|_| rat(rng.gen_range(-2..=2))).collect();
                Scalar::Cyc(c.into_boxed_slice())
            }
        }
    }

    pub fn random_nonzero<R: Rng + ?Sized>(&self, rng: &mut R) -> Scalar {
        loop {
            let s = self.random(rng);
            if !s.is_zero() {
                return s;
            }
        }
    }

    pub fn parse(&self, repr: &ScalarRepr) -> Result<Scalar> {
        match repr {
            ScalarRepr::Int(v) => Ok(self.from_i64(*v)),
            ScalarRepr::Text(s) => {
                let r = parse_rational(s)?;
                self.from_rational(&r)
            }
            ScalarRepr::Coeffs(items) => {
                if self.kind() == FieldKind::Prime {
                    return Err(Error::Parse("coefficient arrays need a cyclotomic field".into()));
                }
                let coeffs = items
                    .iter()
                    .map(|it| match it {
                        ScalarRepr::Int(v) => Ok(rat(*v)),
                        ScalarRepr::Text(s) => parse_rational(s),
                        ScalarRepr::Coeffs(_) => Err(Error::Parse("nested coefficient array".into())),
                    })
                    .collect::<Result<Vec<_>>>()?;
                Ok(self.reduce(coeffs))
            }
        }
    }

    pub fn parse_str(&self, s: &str) -> Result<Scalar> {
        self.parse(&ScalarRepr::Text(s.to_string()))
    }

    /// Canonical serialized form: a string for prime fields and rational
    /// constants, a coefficient array otherwise.
    pub fn to_repr(&self, a: &Scalar) -> ScalarRepr {
        match a {
            Scalar::Mod(v) => ScalarRepr::Text(v.to_string()),
            Scalar::Cyc(c) => {
                if c.iter().skip(1).all(Zero::is_zero) {
                    ScalarRepr::Text(format_rational(&c[0]))
                } else {
                    ScalarRepr::Coeffs(c.iter().map(|v| ScalarRepr::Text(format_rational(v))).collect())
                }
            }
        }
    }

    pub fn format(&self, a: &Scalar) -> String {
        match self.to_repr(a) {
            ScalarRepr::Text(s) => s,
            ScalarRepr::Int(v) => v.to_string(),
            ScalarRepr::Coeffs(items) => {
                let parts: Vec<String> = items
                    .iter()
                    .map(|it| match it {
                        ScalarRepr::Text(s) => s.clone(),
                        _ => unreachable!(),
                    })
                    .collect();
                format!("[{}]", parts.join(","))
            }
        }
    }

    /// Stable integer fingerprint of a scalar, used for checksums.
    pub fn fingerprint(&self, a: &Scalar) -> u64 {
        match a {
            Scalar::Mod(v) => *v,
            Scalar::Cyc(_) => self.format(a).bytes().fold(1469598103934665603u64, |h, b| {
                (h ^ b as u64).wrapping_mul(1099511628211)
            }),
        }
    }
}

pub fn parse_rational(s: &str) -> Result<BigRational> {
    let s = s.trim();
    let bad = || Error::Parse(format!("bad rational `{s}`"));
    match s.split_once('/') {
        Some((a, b)) => {
            let num: BigInt = a.trim().parse().map_err(|_| bad())?;
            let den: BigInt = b.trim().parse().map_err(|_| bad())?;
            if den.is_zero() {
                return Err(bad());
            }
            Ok(BigRational::new(num, den))
        }
        None => Ok(BigRational::from_integer(s.parse().map_err(|_| bad())?)),
    }
}

pub fn format_rational(r: &BigRational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else if r.is_negative() {
        format!("-{}/{}", -r.numer(), r.denom())
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f7() -> Field {
        Field::new(&FieldSpec::prime_with_root(7, 3, 2)).unwrap()
    }

    #[test]
    fn prime_field_with_root_two() {
        let f = f7();
        assert_eq!(f.q(), Scalar::Mod(2));
        assert_eq!(f.pow(&f.q(), 3), f.one());
        assert_ne!(f.pow(&f.q(), 1), f.one());
        assert_ne!(f.pow(&f.q(), 2), f.one());
    }

    #[test]
    fn cyclotomic_two_is_rationals_with_minus_one() {
        let f = Field::new(&FieldSpec::cyclotomic(2)).unwrap();
        assert_eq!(f.q(), f.from_i64(-1));
        assert_eq!(f.degree(), 1);
    }

    #[test]
    fn field_errors() {
        assert_eq!(Field::new(&FieldSpec::prime(7, 4)).unwrap_err(), Error::NoPrimitiveRoot { n: 4, p: 7 });
        assert_eq!(Field::new(&FieldSpec::prime(9, 2)).unwrap_err(), Error::NotAField(9));
        assert!(matches!(
            Field::new(&FieldSpec::prime_with_root(7, 3, 1)).unwrap_err(),
            Error::BadRoot { .. }
        ));
        // 6 has order 2 mod 7, not 3.
        assert!(matches!(
            Field::new(&FieldSpec::prime_with_root(7, 3, 6)).unwrap_err(),
            Error::BadRoot { .. }
        ));
        assert_eq!(Field::new(&FieldSpec::cyclotomic(1)).unwrap_err(), Error::BadOrder(1));
    }

    #[test]
    fn derived_root_is_primitive() {
        for (p, n) in [(7, 3), (11, 5), (13, 4), (29, 7), (17, 8), (7, 6)] {
            let f = Field::new(&FieldSpec::prime(p, n)).unwrap();
            let q = f.q();
            assert_eq!(f.pow(&q, n as u64), f.one());
            assert!((1..n).all(|l| f.pow(&q, l as u64) != f.one()));
        }
    }

    #[test]
    fn cyclotomic_polynomials() {
        let show = |n| cyclotomic_polynomial(n).iter().map(|c| c.to_string()).collect::<Vec<_>>();
        assert_eq!(show(1), ["-1", "1"]);
        assert_eq!(show(4), ["1", "0", "1"]);
        assert_eq!(show(6), ["1", "-1", "1"]);
        assert_eq!(show(8), ["1", "0", "0", "0", "1"]);
        assert_eq!(cyclotomic_polynomial(7).len(), 7);
    }

    #[test]
    fn cyclotomic_inverse() {
        for n in 2..=8 {
            let f = Field::new(&FieldSpec::cyclotomic(n)).unwrap();
            let a = f.add(&f.q(), &f.from_i64(3));
            let b = f.inv(&a).unwrap();
            assert_eq!(f.mul(&a, &b), f.one());
            assert_eq!(f.mul(&f.q(), &f.q_pow(-1)), f.one());
        }
    }

    #[test]
    fn q_integers() {
        let f = f7();
        assert_eq!(f.q_int(0).unwrap(), f.zero());
        assert_eq!(f.q_int(2).unwrap(), f.add(&f.one(), &f.q()));
        assert_eq!(f.q_int(3).unwrap(), f.zero());
        assert!(f.q_int(4).is_err());
        for n in 2..=8 {
            let c = Field::new(&FieldSpec::cyclotomic(n)).unwrap();
            assert!(c.q_int(n).unwrap().is_zero());
            assert!((1..n).all(|m| !c.q_int(m).unwrap().is_zero()));
        }
    }

    #[test]
    fn q_binomials() {
        let f = Field::new(&FieldSpec::prime_with_root(11, 5, 3)).unwrap();
        // (1+q^2)(1+q+q^2) at q = 3 in F_11: 10 * 13 = 130 = 9 (mod 11).
        assert_eq!(f.q_binomial(4, 2).unwrap(), Scalar::Mod(9));
        assert_eq!(f.q_binomial(3, 0).unwrap(), f.one());
        for l in 1..5 {
            assert!(f.q_binomial(5, l).unwrap().is_zero());
        }
        assert_eq!(f.q_binomial(5, 5).unwrap(), f.one());
        assert_eq!(f.q_binomial(5, 0).unwrap(), f.one());
        assert!(f.q_binomial(6, 1).is_err());
        assert!(f.q_binomial(2, 3).is_err());
    }

    #[test]
    fn scalar_repr_round_trip() {
        let f = Field::new(&FieldSpec::cyclotomic(3)).unwrap();
        let a = f.parse(&ScalarRepr::Coeffs(vec![ScalarRepr::Text("1/2".into()), ScalarRepr::Int(-3)])).unwrap();
        assert_eq!(f.parse(&f.to_repr(&a)).unwrap(), a);
        let half = f.parse_str("1/2").unwrap();
        assert_eq!(f.to_repr(&half), ScalarRepr::Text("1/2".into()));
        let g = f7();
        assert_eq!(g.parse_str("1/2").unwrap(), Scalar::Mod(4));
        assert!(g.parse_str("1/7").is_err());
    }
}
