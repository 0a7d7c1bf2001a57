//! Seeded generation of test instances.
//!
//! All randomness flows through `ChaCha8Rng::seed_from_u64`, so a seed
//! reproduces the same instance on every platform. Complexes are built as
//! direct sums of staircase blocks of length at most N and then scrambled by
//! a random invertible change of basis in each degree; this keeps `d^N = 0`
//! by construction and the block list determines the homology.

use std::collections::BTreeMap;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::Result;
use crate::linalg::Matrix;
use crate::ncx::{self, direct_sum, hom_complex, hom_element, standard_block, GradedMap, GradedSpace, NComplex};
use crate::scalars::Field;

pub type InstanceRng = ChaCha8Rng;

pub fn rng_from_seed(seed: u64) -> InstanceRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Per-trial seed derived from a suite seed, so trials can be rerun alone.
pub fn trial_seed(seed: u64, trial: u64) -> u64 {
    seed.wrapping_mul(0x9E37_79B9_7F4A_7C15).wrapping_add(trial.wrapping_mul(0xBF58_476D_1CE4_E5B9)) ^ trial
}

pub fn random_matrix<R: Rng + ?Sized>(field: &Field, rows: usize, cols: usize, rng: &mut R) -> Matrix {
    Matrix::from_fn(field, rows, cols, |_, _| field.random(rng))
}

pub fn random_invertible<R: Rng + ?Sized>(field: &Field, n: usize, rng: &mut R) -> Matrix {
    loop {
        let m = random_matrix(field, n, n, rng);
        if m.rank() == n {
            return m;
        }
    }
}

/// Limits for generated complexes.
#[derive(Clone, Copy, Debug)]
pub struct Shape {
    /// Support lies in `0..width`.
    pub width: usize,
    pub max_dim: usize,
    pub max_blocks: usize,
}

impl Shape {
    pub fn for_order(n: usize) -> Shape {
        Shape { width: 2 * n, max_dim: 4, max_blocks: 4 }
    }
}

/// A block `(start, length)`; length N blocks are contractible.
pub type BlockSpec = (i64, usize);

fn pick_blocks<R: Rng + ?Sized>(n: usize, shape: Shape, full_only: bool, rng: &mut R) -> Vec<BlockSpec> {
    let count = rng.gen_range(1..=shape.max_blocks);
    let mut dims: BTreeMap<i64, usize> = BTreeMap::new();
    let mut out = Vec::new();
    for _ in 0..count {
        let len = if full_only { n } else { rng.gen_range(1..=n) };
        if len > shape.width {
            continue;
        }
        let start = rng.gen_range(0..=(shape.width - len)) as i64;
        let fits = (start..start + len as i64).all(|i| dims.get(&i).copied().unwrap_or(0) < shape.max_dim);
        if !fits {
            continue;
        }
        for i in start..start + len as i64 {
            *dims.entry(i).or_insert(0) += 1;
        }
        out.push((start, len));
    }
    if out.is_empty() {
        out.push((0, if full_only { n } else { 1 }));
    }
    out.sort();
    out
}

/// Direct sum of the given blocks, in the given order.
pub fn block_sum(field: &Field, blocks: &[BlockSpec]) -> Result<NComplex> {
    let parts: Vec<NComplex> = blocks.iter().map(|&(s, l)| standard_block(field, s, l)).collect::<Result<_>>()?;
    direct_sum(field, &parts.iter().collect::<Vec<_>>())
}

/// Conjugates `x` by a random invertible matrix in each degree; returns the
/// new complex and the isomorphism `x -> new`.
pub fn scramble<R: Rng + ?Sized>(x: &NComplex, rng: &mut R) -> Result<(NComplex, GradedMap)> {
    let field = x.field();
    let mut g = BTreeMap::new();
    let mut g_inv = BTreeMap::new();
    for (&i, &d) in x.space().dims() {
        let m = random_invertible(field, d, rng);
        g_inv.insert(i, m.inverse().expect("invertible"));
        g.insert(i, m);
    }
    let mut d = BTreeMap::new();
    for (&i, m) in x.differentials() {
        d.insert(i, g[&(i + 1)].compose(m).compose(&g_inv[&i]));
    }
    let y = ncx::validate_ncomplex(field, x.space().clone(), d)?;
    let map = GradedMap::new(field, 0, x.space(), y.space(), g)?;
    Ok((y, map))
}

/// A scrambled sum of blocks of length `1..=N`, with the block list.
pub fn random_complex_with_blocks<R: Rng + ?Sized>(field: &Field, shape: Shape, rng: &mut R) -> Result<(NComplex, Vec<BlockSpec>)> {
    let blocks = pick_blocks(field.order(), shape, false, rng);
    let (x, _) = scramble(&block_sum(field, &blocks)?, rng)?;
    Ok((x, blocks))
}

pub fn random_complex<R: Rng + ?Sized>(field: &Field, rng: &mut R) -> Result<NComplex> {
    Ok(random_complex_with_blocks(field, Shape::for_order(field.order()), rng)?.0)
}

/// A scrambled sum of length-N blocks, with the block list.
pub fn random_acyclic<R: Rng + ?Sized>(field: &Field, shape: Shape, rng: &mut R) -> Result<(NComplex, Vec<BlockSpec>)> {
    let blocks = pick_blocks(field.order(), shape, true, rng);
    let (x, _) = scramble(&block_sum(field, &blocks)?, rng)?;
    Ok((x, blocks))
}

pub fn random_graded_space<R: Rng + ?Sized>(width: usize, max_dim: usize, rng: &mut R) -> GradedSpace {
    let space = GradedSpace::new((0..width as i64).map(|i| (i, rng.gen_range(0..=max_dim))));
    if space.is_zero() {
        GradedSpace::concentrated(0, 1)
    } else {
        space
    }
}

/// A random element of degree `deg` of the hom complex, as a graded map.
pub fn random_graded_map<R: Rng + ?Sized>(x: &NComplex, y: &NComplex, deg: i64, rng: &mut R) -> Result<GradedMap> {
    let h = hom_complex(x, y)?;
    let coords: Vec<_> = (0..h.dim(deg)).map(|_| x.field().random(rng)).collect();
    hom_element(x, y, deg, &coords)
}

/// A random chain map of degree 0: a random combination of a basis of
/// the kernel of the hom differential.
pub fn random_chain_map<R: Rng + ?Sized>(x: &NComplex, y: &NComplex, rng: &mut R) -> Result<GradedMap> {
    let field = x.field();
    let h = hom_complex(x, y)?;
    let kernel = h.d(0).kernel();
    let mut coords = vec![field.zero(); h.dim(0)];
    for c in 0..kernel.cols() {
        let s = field.random(rng);
        for (r, v) in coords.iter_mut().enumerate() {
            *v = field.mul_add(v, &s, kernel.get(r, c));
        }
    }
    hom_element(x, y, 0, &coords)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ncx::{check_chain_map, is_acyclic};
    use crate::scalars::FieldSpec;

    #[test]
    fn generated_instances_are_valid() {
        let f = Field::new(&FieldSpec::prime(11, 5)).unwrap();
        let mut rng = rng_from_seed(3);
        for _ in 0..10 {
            let (x, blocks) = random_complex_with_blocks(&f, Shape::for_order(5), &mut rng).unwrap();
            x.check_nilpotent().unwrap();
            let full = blocks.iter().all(|&(_, l)| l == 5);
            assert_eq!(is_acyclic(&x), full);
            let y = random_complex(&f, &mut rng).unwrap();
            let m = random_chain_map(&x, &y, &mut rng).unwrap();
            check_chain_map(&m, &x, &y).unwrap();
        }
    }

    #[test]
    fn same_seed_same_instance() {
        let f = Field::new(&FieldSpec::prime(7, 3)).unwrap();
        let a = random_complex(&f, &mut rng_from_seed(9)).unwrap();
        let b = random_complex(&f, &mut rng_from_seed(9)).unwrap();
        assert_eq!(a, b);
    }
}
