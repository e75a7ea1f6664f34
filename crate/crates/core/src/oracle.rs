//! Numeric cross-checks that do not share code with the combinatorial
//! engine: the generic rank of the rigidity matrix in any dimension, computed
//! exactly over a prime field, and a least-squares sampler that searches for
//! an equivalent framework moving the distance of a vertex pair.
//!
//! Random field coordinates only approximate algebraic independence: a single
//! repetition underestimates the generic rank with probability at most
//! `|E| * d|V| / p`, and the reported rank is the maximum over repetitions.

use std::ops::{Add, Mul, Neg, Sub};

use nalgebra::{DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::Graph;

/// The Mersenne prime `2^61 - 1`.
pub const MODULUS: u64 = (1 << 61) - 1;

/// Default number of independent repetitions of [`generic_rank`].
pub const DEFAULT_REPETITIONS: usize = 2;

pub const SAMPLER_MAX_VERTICES: usize = 12;
pub const RESIDUAL_TOLERANCE: f64 = 1e-10;
pub const GAP_THRESHOLD: f64 = 1e-4;

/// Element of the prime field of order [`MODULUS`].
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub struct Fp(u64);

impl Fp {
    pub const ZERO: Fp = Fp(0);
    pub const ONE: Fp = Fp(1);

    pub fn new(x: u64) -> Self {
        Fp(x % MODULUS)
    }

    pub fn from_i64(x: i64) -> Self {
        let r = x.rem_euclid(MODULUS as i64);
        Fp(r as u64)
    }

    pub fn value(self) -> u64 {
        self.0
    }

    pub fn is_zero(self) -> bool {
        self.0 == 0
    }

    pub fn pow(self, mut e: u64) -> Self {
        let mut base = self;
        let mut acc = Fp::ONE;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * base;
            }
            base = base * base;
            e >>= 1;
        }
        acc
    }

    /// Multiplicative inverse by Fermat's little theorem.
    pub fn inv(self) -> Self {
        assert!(!self.is_zero(), "zero has no inverse");
        self.pow(MODULUS - 2)
    }

    fn random<R: Rng>(rng: &mut R) -> Self {
        Fp(rng.gen_range(0..MODULUS))
    }
}

impl Add for Fp {
    type Output = Fp;
    fn add(self, rhs: Fp) -> Fp {
        let s = self.0 + rhs.0;
        Fp(if s >= MODULUS { s - MODULUS } else { s })
    }
}

impl Sub for Fp {
    type Output = Fp;
    fn sub(self, rhs: Fp) -> Fp {
        Fp(if self.0 >= rhs.0 {
            self.0 - rhs.0
        } else {
            self.0 + MODULUS - rhs.0
        })
    }
}

impl Neg for Fp {
    type Output = Fp;
    fn neg(self) -> Fp {
        Fp::ZERO - self
    }
}

impl Mul for Fp {
    type Output = Fp;
    fn mul(self, rhs: Fp) -> Fp {
        let prod = self.0 as u128 * rhs.0 as u128;
        // Reduction modulo 2^61 - 1: fold the high bits onto the low bits.
        let lo = (prod & MODULUS as u128) as u64;
        let hi = (prod >> 61) as u64;
        Fp(lo) + Fp(hi)
    }
}

/// Scalar type allowed in a rigidity matrix.
pub trait Entry: nalgebra::Scalar + Copy + Sub<Output = Self> {
    fn zero() -> Self;
}

impl Entry for f64 {
    fn zero() -> Self {
        0.0
    }
}

impl Entry for Fp {
    fn zero() -> Self {
        Fp::ZERO
    }
}

/// A framework's coordinates: one `d`-vector per vertex.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Realization<T> {
    pub d: usize,
    pub coords: Vec<Vec<T>>,
}

impl<T: Copy> Realization<T> {
    pub fn new(d: usize, coords: Vec<Vec<T>>) -> Result<Self> {
        if let Some((v, c)) = coords.iter().enumerate().find(|(_, c)| c.len() != d) {
            return Err(Error::MissingCoordinates(format!(
                "vertex {v} has {} coordinates, expected {d}",
                c.len()
            )));
        }
        Ok(Realization { d, coords })
    }

    pub fn n(&self) -> usize {
        self.coords.len()
    }

    fn flat(&self) -> Vec<T> {
        self.coords.iter().flatten().copied().collect()
    }
}

impl Realization<f64> {
    fn from_flat(d: usize, x: &[f64]) -> Self {
        Realization {
            d,
            coords: x.chunks(d).map(<[f64]>::to_vec).collect(),
        }
    }
}

/// The `|E| x d|V|` rigidity matrix, rows in canonical edge order. The row of
/// `uv` holds `p(u) - p(v)` in the columns of `u` and `p(v) - p(u)` in those
/// of `v`.
pub fn rigidity_matrix<T: Entry>(g: &Graph, p: &Realization<T>) -> Result<DMatrix<T>> {
    if p.n() < g.n() {
        return Err(Error::MissingCoordinates(format!(
            "{} of {} vertices have coordinates",
            p.n(),
            g.n()
        )));
    }
    let d = p.d;
    let mut r = DMatrix::from_element(g.m(), d * g.n(), T::zero());
    for (row, &(u, v)) in g.edges().iter().enumerate() {
        for k in 0..d {
            let diff = p.coords[u][k] - p.coords[v][k];
            r[(row, d * u + k)] = diff;
            r[(row, d * v + k)] = T::zero() - diff;
        }
    }
    Ok(r)
}

/// Rank of a matrix over the prime field by Gaussian elimination.
pub fn rank_mod_p(m: &DMatrix<Fp>) -> usize {
    let mut a = m.clone();
    let (rows, cols) = a.shape();
    let mut rank = 0;
    for col in 0..cols {
        if rank == rows {
            break;
        }
        let Some(pivot) = (rank..rows).find(|&r| !a[(r, col)].is_zero()) else {
            continue;
        };
        a.swap_rows(pivot, rank);
        let inv = a[(rank, col)].inv();
        for r in rank + 1..rows {
            let f = a[(r, col)] * inv;
            if f.is_zero() {
                continue;
            }
            for c in col..cols {
                let x = a[(rank, c)];
                a[(r, c)] = a[(r, c)] - f * x;
            }
        }
        rank += 1;
    }
    rank
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RankOracleReport {
    pub rank: usize,
    pub modulus: u64,
    pub seed: u64,
    pub repetitions: usize,
    pub dimension: usize,
}

/// Seed for repetition or trial `index` derived from a base seed.
fn derive_seed(seed: u64, index: u64) -> u64 {
    seed ^ index.wrapping_add(1).wrapping_mul(0x9E37_79B9_7F4A_7C15)
}

/// Generic rank of the `d`-dimensional rigidity matrix with
/// [`DEFAULT_REPETITIONS`] random field realizations.
pub fn generic_rank(g: &Graph, d: usize, seed: u64) -> Result<RankOracleReport> {
    generic_rank_with(g, d, seed, DEFAULT_REPETITIONS)
}

pub fn generic_rank_with(
    g: &Graph,
    d: usize,
    seed: u64,
    repetitions: usize,
) -> Result<RankOracleReport> {
    if d == 0 {
        return Err(Error::LimitExceeded("dimension must be at least 1".into()));
    }
    let repetitions = repetitions.max(2);
    let mut rank = 0;
    for rep in 0..repetitions {
        let mut rng = ChaCha8Rng::seed_from_u64(derive_seed(seed, rep as u64));
        let coords = (0..g.n())
            .map(|_| (0..d).map(|_| Fp::random(&mut rng)).collect())
            .collect();
        let p = Realization { d, coords };
        rank = rank.max(rank_mod_p(&rigidity_matrix(g, &p)?));
    }
    Ok(RankOracleReport {
        rank,
        modulus: MODULUS,
        seed,
        repetitions,
        dimension: d,
    })
}

/// Floating-point rank of the rigidity matrix at `p` from its singular
/// values. Only meant for debugging; tolerance choices make it unreliable.
pub fn float_rank(g: &Graph, p: &Realization<f64>, tolerance: f64) -> Result<usize> {
    let r = rigidity_matrix(g, p)?;
    if r.nrows() == 0 || r.ncols() == 0 {
        return Ok(0);
    }
    Ok(r.rank(tolerance))
}

/// A framework `(G, p)` and an equivalent `(G, q)` in which the distance of
/// `u` and `v` differs, which shows the pair is not globally linked in
/// `(G, p)`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LoosenessWitness {
    pub u: usize,
    pub v: usize,
    pub p: Realization<f64>,
    pub q: Realization<f64>,
    /// Largest relative error of a squared edge length in `q`.
    pub residual: f64,
    /// `| |q(u) - q(v)| - |p(u) - p(v)| |`.
    pub gap: f64,
    pub trial: usize,
}

fn sq_dist(x: &[f64], d: usize, a: usize, b: usize) -> f64 {
    (0..d).map(|k| (x[d * a + k] - x[d * b + k]).powi(2)).sum()
}

fn max_relative_residual(g: &Graph, d: usize, x: &[f64], lengths: &[f64]) -> f64 {
    g.edges()
        .iter()
        .zip(lengths)
        .map(|(&(a, b), &l)| (sq_dist(x, d, a, b) - l).abs() / l)
        .fold(0.0, f64::max)
}

/// Levenberg-Marquardt on the residuals `|x_a - x_b|^2 - l_ab`.
fn solve_lengths(g: &Graph, d: usize, lengths: &[f64], mut x: Vec<f64>) -> Vec<f64> {
    const MAX_ITERATIONS: usize = 500;
    let cols = x.len();
    let residuals = |x: &[f64]| -> DVector<f64> {
        DVector::from_iterator(
            g.m(),
            g.edges()
                .iter()
                .zip(lengths)
                .map(|(&(a, b), &l)| sq_dist(x, d, a, b) - l),
        )
    };
    let mut r = residuals(&x);
    let mut cost = r.norm_squared();
    let mut lambda = 1e-3;
    for _ in 0..MAX_ITERATIONS {
        if max_relative_residual(g, d, &x, lengths) < 1e-14 {
            break;
        }
        let mut j = DMatrix::zeros(g.m(), cols);
        for (row, &(a, b)) in g.edges().iter().enumerate() {
            for k in 0..d {
                let diff = 2.0 * (x[d * a + k] - x[d * b + k]);
                j[(row, d * a + k)] = diff;
                j[(row, d * b + k)] = -diff;
            }
        }
        let jt = j.transpose();
        let grad = &jt * &r;
        let jtj = &jt * &j;
        let mut improved = false;
        while lambda < 1e12 {
            let mut a = jtj.clone();
            for i in 0..cols {
                a[(i, i)] += lambda;
            }
            let Some(chol) = a.cholesky() else {
                lambda *= 4.0;
                continue;
            };
            let step = chol.solve(&(-&grad));
            let trial: Vec<f64> = x.iter().zip(step.iter()).map(|(a, b)| a + b).collect();
            let tr = residuals(&trial);
            let tc = tr.norm_squared();
            if tc < cost {
                x = trial;
                r = tr;
                cost = tc;
                lambda = (lambda / 3.0).max(1e-15);
                improved = true;
                break;
            }
            lambda *= 4.0;
        }
        if !improved {
            break;
        }
    }
    x
}

/// Searches for an equivalent framework that changes the `u`-`v` distance.
///
/// A generic-looking `p` with coordinates `k / 1000` in `[-1, 1]` is drawn
/// from `seed`; each trial starts the solver from an independent random
/// point. The first witness in trial order is returned, so the result does
/// not depend on scheduling. `None` is never evidence of linkedness.
pub fn equivalence_sampler(
    g: &Graph,
    u: usize,
    v: usize,
    d: usize,
    trials: usize,
    seed: u64,
) -> Result<Option<LoosenessWitness>> {
    if !(1..=3).contains(&d) {
        return Err(Error::LimitExceeded(format!(
            "the sampler supports d in 1..=3, got {d}"
        )));
    }
    if g.n() > SAMPLER_MAX_VERTICES {
        return Err(Error::LimitExceeded(format!(
            "the sampler supports at most {SAMPLER_MAX_VERTICES} vertices, got {}",
            g.n()
        )));
    }
    g.check_vertex(u)?;
    g.check_vertex(v)?;
    if u == v {
        return Err(Error::SameVertex(u));
    }

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let p: Vec<f64> = (0..d * g.n())
        .map(|_| rng.gen_range(-1000i32..=1000) as f64 / 1000.0)
        .collect();
    let lengths: Vec<f64> = g
        .edges()
        .iter()
        .map(|&(a, b)| sq_dist(&p, d, a, b))
        .collect();
    if lengths.contains(&0.0) {
        // Coincident endpoints; such a p is far from generic.
        return Ok(None);
    }
    let target = sq_dist(&p, d, u, v).sqrt();

    let found = (0..trials).into_par_iter().find_map_first(|trial| {
        let mut rng = ChaCha8Rng::seed_from_u64(derive_seed(seed, trial as u64));
        let start = (0..d * g.n()).map(|_| rng.gen_range(-1.0..=1.0)).collect();
        let q = solve_lengths(g, d, &lengths, start);
        let residual = max_relative_residual(g, d, &q, &lengths);
        let gap = (sq_dist(&q, d, u, v).sqrt() - target).abs();
        (residual <= RESIDUAL_TOLERANCE && gap >= GAP_THRESHOLD)
            .then_some((trial, q, residual, gap))
    });
    Ok(found.map(|(trial, q, residual, gap)| LoosenessWitness {
        u,
        v,
        p: Realization::from_flat(d, &p),
        q: Realization::from_flat(d, &q),
        residual,
        gap,
        trial,
    }))
}

/// Recomputes a witness from scratch: every edge length agrees to
/// [`RESIDUAL_TOLERANCE`] (relative) and the pair distance moves by at least
/// [`GAP_THRESHOLD`].
pub fn verify_witness(g: &Graph, w: &LoosenessWitness) -> bool {
    let d = w.p.d;
    if w.q.d != d || w.p.n() != g.n() || w.q.n() != g.n() {
        return false;
    }
    let (p, q) = (w.p.flat(), w.q.flat());
    let lengths: Vec<f64> = g
        .edges()
        .iter()
        .map(|&(a, b)| sq_dist(&p, d, a, b))
        .collect();
    if lengths.contains(&0.0) {
        return false;
    }
    let gap = (sq_dist(&q, d, w.u, w.v).sqrt() - sq_dist(&p, d, w.u, w.v).sqrt()).abs();
    max_relative_residual(g, d, &q, &lengths) <= RESIDUAL_TOLERANCE && gap >= GAP_THRESHOLD
}
