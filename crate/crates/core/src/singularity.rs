//! Canonical, terminal and Gorenstein tests, from the cones of the simplex
//! and from the weights.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::lattice::{smith_normal_form, IntegerMatrix, LatticeVector};
use crate::simplex::{integral_facet_functionals, FanoSimplex, WeightSystem};

/// Default bound on `h` for a full scan over `κ`.
pub const DEFAULT_MAX_H: u64 = 1_000_000;

/// Largest number of cone box points `classify_polytope` will visit.
pub const MAX_BOX_POINTS: u64 = 20_000_000;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SingularityReport {
    pub canonical: bool,
    pub terminal: bool,
    pub gorenstein: bool,
    /// Smallest `κ` violating the canonical bound, or, for canonical but
    /// non-terminal weights, the terminal bound.
    pub witness_kappa: Option<BigInt>,
    /// A nonzero lattice point of `P` that breaks the same condition.
    pub witness_point: Option<LatticeVector>,
    /// False when only a supplied list of `κ` was checked.
    pub exhaustive: bool,
}

/// Decides the singularity type from the cones over the facets of `P`.
///
/// Each lattice point of a cone is a box point `Σ c_i v_i` with
/// `c_i ∈ [0,1)` plus a nonnegative integer combination of the generators,
/// and the facet of `P` sits at `Σ c_i = 1`. So `0` is the only interior
/// lattice point iff no nonzero box point has `Σ c_i < 1`, and `P` has no
/// lattice points besides its vertices and `0` iff none has `Σ c_i <= 1`.
pub fn classify_polytope(p: &FanoSimplex) -> Result<SingularityReport> {
    let n = p.dim();
    let total: BigInt = p.cofactors().iter().map(|c| c.abs()).sum();
    if total > BigInt::from(MAX_BOX_POINTS) {
        return Err(Error::TooLarge(format!(
            "{total} cone box points exceed {MAX_BOX_POINTS}"
        )));
    }
    let mut canonical_witness: Option<LatticeVector> = None;
    let mut terminal_witness: Option<LatticeVector> = None;
    for j in 0..=n {
        let gens: Vec<&LatticeVector> = (0..=n).filter(|&i| i != j).map(|i| p.vertex(i)).collect();
        let cols: Vec<LatticeVector> = gens.iter().map(|v| (*v).clone()).collect();
        let c = IntegerMatrix::from_columns(&cols);
        for_each_box_point(&c, |scaled, denom| {
            let sum: BigInt = scaled.iter().sum();
            if &sum > denom {
                return;
            }
            let point = box_point(&gens, scaled, denom);
            if &sum < denom {
                keep_smaller(&mut canonical_witness, point);
            } else {
                keep_smaller(&mut terminal_witness, point);
            }
        });
    }
    let canonical = canonical_witness.is_none();
    let terminal = canonical && terminal_witness.is_none();
    Ok(SingularityReport {
        canonical,
        terminal,
        gorenstein: integral_facet_functionals(p).is_some(),
        witness_kappa: None,
        witness_point: canonical_witness.or(terminal_witness),
        exhaustive: true,
    })
}

fn keep_smaller(slot: &mut Option<LatticeVector>, candidate: LatticeVector) {
    if slot.as_ref().is_none_or(|s| &candidate < s) {
        *slot = Some(candidate);
    }
}

fn box_point(gens: &[&LatticeVector], scaled: &[BigInt], denom: &BigInt) -> LatticeVector {
    let n = gens[0].dim();
    let coords = (0..n)
        .map(|r| {
            let s: BigInt = gens.iter().zip(scaled).map(|(g, c)| &g.coords()[r] * c).sum();
            s / denom
        })
        .collect();
    LatticeVector::new(coords)
}

/// Calls `f(c·D, D)` for every nonzero point `c` of the half-open
/// parallelepiped spanned by the columns of `c`, where `D` is a common
/// denominator and `c·D` has entries in `[0, D)`.
///
/// With `U C W = diag(d)`, the points `C^{-1} x` for `x` running over coset
/// representatives of `Z^n / C Z^n` are `W (k_i / d_i)` for `0 <= k_i < d_i`.
fn for_each_box_point<F>(c: &IntegerMatrix, mut f: F)
where
    F: FnMut(&[BigInt], &BigInt),
{
    let n = c.nrows();
    let snf = smith_normal_form(c);
    let d: Vec<BigInt> = (0..n).map(|i| snf.d.get(i, i).clone()).collect();
    let denom = d[n - 1].clone();
    let steps: Vec<BigInt> = d.iter().map(|di| &denom / di).collect();
    let mut k = vec![BigInt::zero(); n];
    loop {
        // advance the mixed-radix counter first: k = 0 is the origin
        let mut i = 0;
        loop {
            if i == n {
                return;
            }
            k[i] += 1;
            if k[i] < d[i] {
                break;
            }
            k[i] = BigInt::zero();
            i += 1;
        }
        let scaled_k: Vec<BigInt> = k.iter().zip(&steps).map(|(a, b)| a * b).collect();
        let c_scaled: Vec<BigInt> = (0..n)
            .map(|r| {
                let s: BigInt = (0..n).map(|j| snf.v.get(r, j) * &scaled_k[j]).sum();
                s.mod_floor(&denom)
            })
            .collect();
        f(&c_scaled, &denom);
    }
}

/// `Σ {λ_i κ / h}` with `h = Σ λ_i`, as an exact rational.
pub fn sum_of_fractional_parts(weights: &[BigInt], kappa: &BigInt) -> BigRational {
    let h: BigInt = weights.iter().sum();
    let num: BigInt = weights.iter().map(|l| (l * kappa).mod_floor(&h)).sum();
    BigRational::new(num, h)
}

fn require_mult_one(ws: &WeightSystem) -> Result<()> {
    if ws.multiplicity().is_one() {
        Ok(())
    } else {
        Err(Error::MultiplicityNotOne(ws.multiplicity().clone()))
    }
}

fn is_gorenstein(ws: &WeightSystem) -> bool {
    let h = ws.sum();
    ws.weights().iter().all(|l| h.is_multiple_of(l))
}

/// Weight criterion: canonical iff `Σ {λ_i κ/h} ∈ {1, …, n-1}` and terminal
/// iff it lies in `{2, …, n-1}`, for every `κ ∈ {2, …, h-2}`. When
/// `h < 4` that range is empty and both hold. Only weighted projective
/// spaces (multiplicity 1) are accepted.
pub fn classify_weights(ws: &WeightSystem, max_h: u64) -> Result<SingularityReport> {
    require_mult_one(ws)?;
    let h = ws.sum();
    let h64 = h
        .to_u64()
        .filter(|&h| h <= max_h)
        .ok_or_else(|| Error::TooLarge(format!("h = {h} exceeds the scan bound {max_h}")))?;
    let n = ws.dim() as u64;
    let residues: Vec<u128> = ws
        .weights()
        .iter()
        .map(|l| (l % &h).to_u128().expect("residue below h"))
        .collect();
    let h128 = h64 as u128;
    let mut canonical_fail: Option<u64> = None;
    let mut terminal_fail: Option<u64> = None;
    for kappa in 2..h64.saturating_sub(1) {
        let total: u128 = residues.iter().map(|&r| r * kappa as u128 % h128).sum();
        let s = (total / h128) as u64;
        if canonical_fail.is_none() && !(1..n).contains(&s) {
            canonical_fail = Some(kappa);
            break;
        }
        if terminal_fail.is_none() && !(2..n).contains(&s) {
            terminal_fail = Some(kappa);
        }
    }
    let canonical = canonical_fail.is_none();
    let terminal = canonical && terminal_fail.is_none();
    Ok(SingularityReport {
        canonical,
        terminal,
        gorenstein: is_gorenstein(ws),
        witness_kappa: canonical_fail.or(terminal_fail).map(BigInt::from),
        witness_point: None,
        exhaustive: true,
    })
}

/// The weight criterion evaluated only at the given `κ`. The flags report
/// whether any listed `κ` violates them; `exhaustive` is false.
pub fn classify_weights_at(ws: &WeightSystem, kappas: &[BigInt]) -> Result<SingularityReport> {
    require_mult_one(ws)?;
    let h = ws.sum();
    let n = BigInt::from(ws.dim());
    let mut sorted = kappas.to_vec();
    sorted.sort();
    let mut canonical_fail = None;
    let mut terminal_fail = None;
    for kappa in sorted {
        if kappa < BigInt::from(2) || kappa > &h - 2 {
            return Err(Error::OutOfRange(format!("κ = {kappa} is outside 2..=h-2")));
        }
        let s = sum_of_fractional_parts(ws.weights(), &kappa).to_integer();
        if canonical_fail.is_none() && !(s >= BigInt::one() && s < n) {
            canonical_fail = Some(kappa.clone());
        }
        if terminal_fail.is_none() && !(s >= BigInt::from(2) && s < n) {
            terminal_fail = Some(kappa);
        }
    }
    let canonical = canonical_fail.is_none();
    let terminal = canonical && terminal_fail.is_none();
    Ok(SingularityReport {
        canonical,
        terminal,
        gorenstein: is_gorenstein(ws),
        witness_kappa: canonical_fail.or(terminal_fail),
        witness_point: None,
        exhaustive: false,
    })
}
