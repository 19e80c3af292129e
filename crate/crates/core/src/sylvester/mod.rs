//! Sylvester numbers and the maximal-degree weighted projective spaces
//! built from them, together with their mutation towers.

mod appendix;
mod tower;
mod tree;

pub use appendix::{verify_appendix_claims, AppendixReport, ClaimCheck};
pub use tower::{
    kappa_witness, realize_tower_step, tower, tower_move, tower_step, KappaWitness, TowerState,
};
pub use tree::{build_mutation_tree, GraphEdge, GraphNode, MutationGraph, MAX_TREE_DEPTH};

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::One;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::simplex::{is_well_formed, WeightSystem};

/// `y_0 = 2`, `y_n = 1 + y_0 ⋯ y_{n-1}` and `t_n = y_n - 1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SylvesterCache {
    pub y: Vec<BigInt>,
    pub t: Vec<BigInt>,
}

impl SylvesterCache {
    pub fn len(&self) -> usize {
        self.y.len()
    }

    pub fn is_empty(&self) -> bool {
        self.y.is_empty()
    }
}

/// The first `count` Sylvester numbers, computed as `y_n = t_{n-1} y_{n-1} + 1`.
pub fn sylvester_numbers(count: usize) -> SylvesterCache {
    let mut y = Vec::with_capacity(count);
    let mut t = Vec::with_capacity(count);
    for i in 0..count {
        let yi = if i == 0 {
            BigInt::from(2)
        } else {
            &t[i - 1] * &y[i - 1] + 1
        };
        t.push(&yi - 1);
        y.push(yi);
    }
    SylvesterCache { y, t }
}

/// Which singularity class the tower is maximal for. The canonical weights
/// are twice the terminal ones (apart from the two leading ones).
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Variant {
    Canonical,
    Terminal,
}

impl Variant {
    fn factor(self) -> BigInt {
        match self {
            Variant::Canonical => BigInt::from(2),
            Variant::Terminal => BigInt::one(),
        }
    }

    fn min_dim(self) -> usize {
        match self {
            Variant::Canonical => 3,
            Variant::Terminal => 4,
        }
    }
}

impl fmt::Display for Variant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Variant::Canonical => "canonical",
            Variant::Terminal => "terminal",
        })
    }
}

impl FromStr for Variant {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "canonical" => Ok(Variant::Canonical),
            "terminal" => Ok(Variant::Terminal),
            other => Err(Error::OutOfRange(format!("unknown variant {other:?}"))),
        }
    }
}

fn check_dim(n: usize, variant: Variant) -> Result<()> {
    if n < variant.min_dim() {
        return Err(Error::OutOfRange(format!(
            "{variant} towers need dimension at least {}, got {n}",
            variant.min_dim()
        )));
    }
    Ok(())
}

/// `P(1, 1, c t_{n-1}/y_{n-2}, …, c t_{n-1}/y_0)` with `c = 2` for the
/// canonical variant and `c = 1` for the terminal one.
pub fn max_degree_wps(n: usize, variant: Variant) -> Result<WeightSystem> {
    check_dim(n, variant)?;
    let syl = sylvester_numbers(n);
    let top = variant.factor() * &syl.t[n - 1];
    let mut weights = vec![BigInt::one(), BigInt::one()];
    for i in (0..=n - 2).rev() {
        weights.push(&top / &syl.y[i]);
    }
    if !is_well_formed(&weights) {
        return Err(Error::Invariant("maximal-degree weights are not well formed".into()));
    }
    WeightSystem::new(weights, BigInt::one())
}

/// Smallest prime factor by trial division; only used on small Sylvester numbers.
fn smallest_prime_factor(x: &BigInt) -> Option<BigInt> {
    let one = BigInt::one();
    if x <= &one {
        return None;
    }
    let mut p = BigInt::from(2);
    while &p * &p <= *x {
        if (x % &p).bits() == 0 {
            return Some(p);
        }
        p += 1;
    }
    Some(x.clone())
}

/// Distinct prime factors by trial division.
fn prime_factors(x: &BigInt) -> Vec<BigInt> {
    let mut rest = x.clone();
    let mut out = Vec::new();
    while let Some(p) = smallest_prime_factor(&rest) {
        while (&rest % &p).bits() == 0 {
            rest /= &p;
        }
        out.push(p);
    }
    out
}
