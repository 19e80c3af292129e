//! A reproducible collection of small Fano simplices for the property suites.

use num_bigint::BigInt;
use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::lattice::LatticeVector;
use crate::simplex::{degree, validate_fano, FanoSimplex};

pub const DEFAULT_SEED: u64 = 0x5eed_f1a7;

#[derive(Clone, Debug)]
pub struct CorpusConfig {
    pub seed: u64,
    pub dims: Vec<usize>,
    /// Random simplices kept per dimension, on top of the fixed examples.
    pub per_dim: usize,
    /// Vertex coordinates are drawn from `[-bound, bound]`.
    pub bound: i64,
    /// Skip simplices whose degree exceeds this; dual point counts scale with it.
    pub max_degree: u64,
    /// Skip simplices with `h · mult` above this.
    pub max_h_mult: u64,
    pub max_attempts: usize,
}

impl Default for CorpusConfig {
    fn default() -> Self {
        CorpusConfig {
            seed: DEFAULT_SEED,
            dims: vec![3, 4],
            per_dim: 110,
            bound: 8,
            max_degree: 2_000,
            max_h_mult: 10_000,
            max_attempts: 2_000_000,
        }
    }
}

/// Hand-picked simplices that every suite run includes.
pub fn fixed_examples() -> Vec<FanoSimplex> {
    let raw: [&[&[i64]]; 6] = [
        // P(1,1,1,3)
        &[&[1, 0, 0], &[0, 1, 0], &[0, 0, 1], &[-1, -1, -3]],
        // P(1,1,4,6)
        &[&[-1, -1, -3], &[0, 0, 1], &[0, 1, 0], &[4, 3, 6]],
        // P(1,1,4,8)
        &[&[1, -1, 0], &[-2, -2, -1], &[-2, -2, 1], &[0, 1, 0]],
        // P^3
        &[&[1, 0, 0], &[0, 1, 0], &[0, 0, 1], &[-1, -1, -1]],
        // P^3 / (Z/5)
        &[&[1, 0, 0], &[0, 1, 0], &[1, 2, 5], &[-2, -3, -5]],
        // P^4
        &[&[1, 0, 0, 0], &[0, 1, 0, 0], &[0, 0, 1, 0], &[0, 0, 0, 1], &[-1, -1, -1, -1]],
    ];
    raw.iter().map(|v| FanoSimplex::from_i64(v).expect("fixed examples are Fano")).collect()
}

fn within_budget(p: &FanoSimplex, cfg: &CorpusConfig) -> bool {
    let ws = p.weight_system();
    let cost = ws.sum() * ws.multiplicity();
    cost <= BigInt::from(cfg.max_h_mult)
        && degree(ws) <= BigRational::from_integer(BigInt::from(cfg.max_degree))
}

fn random_simplex(rng: &mut ChaCha8Rng, n: usize, bound: i64) -> Option<FanoSimplex> {
    let vertices: Vec<LatticeVector> = (0..=n)
        .map(|_| LatticeVector::from_i64(&(0..n).map(|_| rng.gen_range(-bound..=bound)).collect::<Vec<_>>()))
        .collect();
    validate_fano(vertices).ok()
}

/// The fixed examples followed by `per_dim` random Fano simplices per
/// dimension, drawn from a seeded ChaCha stream so every run sees the same list.
pub fn generate_corpus(cfg: &CorpusConfig) -> Vec<FanoSimplex> {
    let mut out: Vec<FanoSimplex> = fixed_examples()
        .into_iter()
        .filter(|p| cfg.dims.contains(&p.dim()))
        .collect();
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    for &n in &cfg.dims {
        let mut kept = 0;
        let mut attempts = 0;
        while kept < cfg.per_dim && attempts < cfg.max_attempts {
            attempts += 1;
            let Some(p) = random_simplex(&mut rng, n, cfg.bound) else {
                continue;
            };
            if !within_budget(&p, cfg) || out.iter().any(|q| q.vertices() == p.vertices()) {
                continue;
            }
            out.push(p);
            kept += 1;
        }
    }
    out
}
