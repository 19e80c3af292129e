//! Combinatorial mutations: heights, factors, the general hull
//! construction, and the closed form for simplices.

use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::lattice::{gcd_all, primitive_kernel_vector, DualVector, LatticeVector};
use crate::polytope::LatticePolytope;
use crate::simplex::{validate_fano, FanoSimplex, WeightSystem};

/// Heights of a polytope under a primitive `w`, with the lattice points of
/// each nonempty slice `w_h(P)`.
#[derive(Clone, Debug)]
pub struct HeightData {
    pub w: DualVector,
    pub h_min: BigInt,
    pub h_max: BigInt,
    /// Lattice points of `P` at each height; `w_h(P)` is their hull.
    pub slices: BTreeMap<BigInt, Vec<LatticeVector>>,
}

impl HeightData {
    pub fn slice(&self, h: &BigInt) -> &[LatticeVector] {
        self.slices.get(h).map_or(&[], Vec::as_slice)
    }
}

pub fn heights(p: &LatticePolytope, w: &DualVector) -> Result<HeightData> {
    if w.dim() != p.dim() {
        return Err(Error::DimensionMismatch {
            expected: p.dim(),
            got: w.dim(),
        });
    }
    if !w.is_primitive() {
        return Err(Error::NotPrimitive);
    }
    let hs: Vec<BigInt> = p.vertices().iter().map(|v| w.eval(v)).collect();
    let h_min = hs.iter().min().cloned().unwrap_or_default();
    let h_max = hs.iter().max().cloned().unwrap_or_default();
    let mut slices: BTreeMap<BigInt, Vec<LatticeVector>> = BTreeMap::new();
    for x in p.lattice_points()? {
        slices.entry(w.eval(&x)).or_default().push(x);
    }
    Ok(HeightData {
        w: w.clone(),
        h_min,
        h_max,
        slices,
    })
}

/// A validated factor: `F` at height zero together with the polytopes
/// `G_h` for every negative height, each stored as a set of lattice points.
#[derive(Clone, Debug)]
pub struct Factor {
    pub vertices: Vec<LatticeVector>,
    pub g: BTreeMap<BigInt, Vec<LatticeVector>>,
    pub heights: HeightData,
}

/// Checks that `F = conv(factor_points)` is a factor of `P` with respect to
/// `w`. Each `G_h` is the lattice erosion
/// `{x ∈ H_{w,h} ∩ N : x + |h|f ∈ P for every vertex f of F}`, the largest
/// lattice choice with `G_h + |h|F ⊆ w_h(P)`.
pub fn validate_factor(
    p: &LatticePolytope,
    w: &DualVector,
    factor_points: &[LatticeVector],
) -> Result<Factor> {
    if factor_points.iter().any(|f| !w.eval(f).is_zero()) {
        return Err(Error::FactorNotAtHeightZero);
    }
    let fv = LatticePolytope::from_points(factor_points)?.vertices().to_vec();
    let hd = heights(p, w)?;
    let mut g = BTreeMap::new();
    let mut h = hd.h_min.clone();
    while h.is_negative() {
        let depth = -&h;
        let slice: BTreeSet<&LatticeVector> = hd.slice(&h).iter().collect();
        let eroded: Vec<LatticeVector> = hd
            .slice(&h)
            .iter()
            .filter(|x| {
                fv.iter()
                    .all(|f| slice.contains(&(*x + &f.scale(&depth))))
            })
            .cloned()
            .collect();
        let covered = p.vertices().iter().filter(|v| w.eval(v) == h).all(|v| {
            fv.iter()
                .any(|f| eroded.contains(&(v - &f.scale(&depth))))
        });
        if !covered {
            return Err(Error::NotAFactor(h));
        }
        g.insert(h.clone(), eroded);
        h += 1;
    }
    Ok(Factor {
        vertices: fv,
        g,
        heights: hd,
    })
}

impl Factor {
    /// The same factor with each `G_h` shrunk to the points actually needed
    /// to cover the vertices of `P` at height `h`.
    pub fn minimal(&self, p: &LatticePolytope) -> Factor {
        let w = &self.heights.w;
        let mut g = BTreeMap::new();
        for (h, eroded) in &self.g {
            let depth = -h;
            let mut needed = BTreeSet::new();
            for v in p.vertices().iter().filter(|v| &w.eval(v) == h) {
                let x = self
                    .vertices
                    .iter()
                    .map(|f| v - &f.scale(&depth))
                    .find(|x| eroded.contains(x))
                    .expect("validated factor covers its vertices");
                needed.insert(x);
            }
            g.insert(h.clone(), needed.into_iter().collect());
        }
        Factor {
            vertices: self.vertices.clone(),
            g,
            heights: self.heights.clone(),
        }
    }
}

/// `conv(∪_{h<0} G_h ∪ ∪_{h>=0} (w_h(P) + hF))`, reduced to its vertices.
pub fn mutate(factor: &Factor) -> Result<LatticePolytope> {
    let mut points: Vec<LatticeVector> = factor.g.values().flatten().cloned().collect();
    for (h, slice) in factor.heights.slices.range(BigInt::zero()..) {
        for x in slice {
            for f in &factor.vertices {
                points.push(x + &f.scale(h));
            }
        }
    }
    LatticePolytope::from_points(&points)
}

/// A mutation of a simplex onto a simplex: `w` takes its maximum at the
/// apex, its minimum on the min-face, and vanishes on the zero set.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct MutationMove {
    pub w: DualVector,
    pub apex: usize,
    /// The first entry plays the role of `v_1`, which stays fixed.
    pub min_face: Vec<usize>,
    pub zero_set: Vec<usize>,
    pub h_min: BigInt,
    pub h_max: BigInt,
    /// Vertices of `F`, starting with the origin.
    pub factor_vertices: Vec<LatticeVector>,
    /// The min-face weights sum to the apex weight, so the weights do not change.
    pub trivial: bool,
}

impl MutationMove {
    /// Number of vertices on the min-face.
    pub fn k(&self) -> usize {
        self.min_face.len()
    }
}

/// Every partition (apex, min-face of at least two vertices, zero set)
/// admitting a mutation to a simplex, sorted by apex then min-face.
pub fn find_simplex_mutations(p: &FanoSimplex) -> Vec<MutationMove> {
    let n = p.dim();
    let mut moves = Vec::new();
    for apex in 0..=n {
        let others: Vec<usize> = (0..=n).filter(|&i| i != apex).collect();
        for mask in 1u32..(1 << n) {
            if mask.count_ones() < 2 {
                continue;
            }
            let face: Vec<usize> = (0..n).filter(|b| mask >> b & 1 == 1).map(|b| others[b]).collect();
            let zero: Vec<usize> = (0..n).filter(|b| mask >> b & 1 == 0).map(|b| others[b]).collect();
            if let Some(mv) = move_for_partition(p, apex, &face, &zero) {
                moves.push(mv);
            }
        }
    }
    moves.sort_by(|a, b| (a.apex, &a.min_face).cmp(&(b.apex, &b.min_face)));
    moves
}

/// The move with the given apex and min-face (first entry fixed), if
/// the remaining vertices can sit at height zero.
pub fn move_with_face(p: &FanoSimplex, apex: usize, min_face: &[usize]) -> Option<MutationMove> {
    let n = p.dim();
    if apex > n || min_face.len() < 2 || min_face.iter().any(|&i| i > n || i == apex) {
        return None;
    }
    let zero: Vec<usize> = (0..=n).filter(|i| *i != apex && !min_face.contains(i)).collect();
    if zero.len() + min_face.len() != n {
        return None;
    }
    move_for_partition(p, apex, min_face, &zero)
}

fn move_for_partition(
    p: &FanoSimplex,
    apex: usize,
    face: &[usize],
    zero: &[usize],
) -> Option<MutationMove> {
    let v1 = p.vertex(face[0]);
    let diffs: Vec<LatticeVector> = face[1..].iter().map(|&i| p.vertex(i) - v1).collect();
    let rows: Vec<Vec<BigInt>> = zero
        .iter()
        .map(|&z| p.vertex(z).coords().to_vec())
        .chain(diffs.iter().map(|d| d.coords().to_vec()))
        .collect();
    let mut w = DualVector::new(primitive_kernel_vector(&rows)?);
    if w.eval(p.vertex(apex)).is_negative() {
        w = -&w;
    }
    let h_max = w.eval(p.vertex(apex));
    let h_min = w.eval(v1);
    debug_assert!(h_max.is_positive() && h_min.is_negative());
    let depth = -&h_min;
    let mut factor_vertices = vec![LatticeVector::zero(p.dim())];
    for d in &diffs {
        factor_vertices.push(d.div_exact(&depth)?);
    }
    let face_sum: BigInt = face.iter().map(|&i| p.weight(i)).sum();
    Some(MutationMove {
        w,
        apex,
        min_face: face.to_vec(),
        zero_set: zero.to_vec(),
        h_min,
        h_max,
        factor_vertices,
        trivial: &face_sum == p.weight(apex),
    })
}

/// Checks the height pattern and divisibility a move requires on `p`.
pub fn check_move(p: &FanoSimplex, mv: &MutationMove) -> Result<()> {
    let bad = |msg: &str| Err(Error::InvalidMove(msg.to_string()));
    let n = p.dim();
    let mut seen: Vec<usize> = std::iter::once(mv.apex)
        .chain(mv.min_face.iter().copied())
        .chain(mv.zero_set.iter().copied())
        .collect();
    seen.sort_unstable();
    if seen != (0..=n).collect::<Vec<_>>() {
        return bad("apex, min-face and zero set must partition the vertices");
    }
    if mv.min_face.len() < 2 {
        return bad("min-face needs at least two vertices");
    }
    if mv.w.dim() != n || !mv.w.is_primitive() {
        return bad("w must be a primitive functional of the right dimension");
    }
    if mv.w.eval(p.vertex(mv.apex)) != mv.h_max || !mv.h_max.is_positive() {
        return bad("apex is not at height h_max > 0");
    }
    if mv.min_face.iter().any(|&i| mv.w.eval(p.vertex(i)) != mv.h_min) || !mv.h_min.is_negative() {
        return bad("min-face is not at height h_min < 0");
    }
    if mv.zero_set.iter().any(|&i| !mv.w.eval(p.vertex(i)).is_zero()) {
        return bad("zero set is not at height 0");
    }
    let v1 = p.vertex(mv.min_face[0]);
    let depth = -&mv.h_min;
    if mv.min_face[1..]
        .iter()
        .any(|&i| (p.vertex(i) - v1).div_exact(&depth).is_none())
    {
        return bad("h_min does not divide the min-face edge vectors");
    }
    Ok(())
}

/// Closed-form vertices of the mutated simplex: min-face vertices other
/// than the first move to `v_0 + (h_max/|h_min|)(v_i - v_1)`, all others stay.
pub fn mutate_simplex(p: &FanoSimplex, mv: &MutationMove) -> Result<FanoSimplex> {
    check_move(p, mv)?;
    let v0 = p.vertex(mv.apex);
    let v1 = p.vertex(mv.min_face[0]);
    let depth = -&mv.h_min;
    let mut vertices = p.vertices().to_vec();
    for &i in &mv.min_face[1..] {
        let step = (p.vertex(i) - v1)
            .scale(&mv.h_max)
            .div_exact(&depth)
            .expect("divisibility checked");
        vertices[i] = v0 + &step;
    }
    validate_fano(vertices).map_err(|e| Error::Invariant(format!("mutated simplex rejected: {e}")))
}

/// The move on `q = mutate_simplex(p, mv)` that undoes `mv`, using `-w`
/// and the same factor.
pub fn inverse_move(q: &FanoSimplex, mv: &MutationMove) -> MutationMove {
    let mut face = vec![mv.apex];
    face.extend_from_slice(&mv.min_face[1..]);
    let face_sum: BigInt = face.iter().map(|&i| q.weight(i)).sum();
    let trivial = &face_sum == q.weight(mv.min_face[0]);
    MutationMove {
        w: -&mv.w,
        apex: mv.min_face[0],
        min_face: face,
        zero_set: mv.zero_set.clone(),
        h_min: -&mv.h_max,
        h_max: -&mv.h_min,
        factor_vertices: mv.factor_vertices.clone(),
        trivial,
    }
}

/// Raw weights predicted for the mutated simplex, their gcd, and the
/// multiplicity ratio that gcd forces.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeightPrediction {
    /// Indexed like the vertices of the input simplex.
    pub raw: Vec<BigInt>,
    pub d: BigInt,
    /// `mult(X) / mult(Y) = λ_0^{k-1} / (Σ^{k-2} d)`.
    pub mult_ratio: BigRational,
}

impl WeightPrediction {
    pub fn reduced(&self) -> Vec<BigInt> {
        self.raw.iter().map(|x| x / &self.d).collect()
    }

    /// Whether `d · mult_x / mult_y` equals `λ_0^{k-1} / Σ^{k-2}`.
    pub fn multiplicity_relation_holds(&self, mult_x: &BigInt, mult_y: &BigInt) -> bool {
        BigRational::new(mult_x.clone(), mult_y.clone()) == self.mult_ratio
    }
}

/// `λ_0^{k-1} / Σ^{k-2}` as an exact rational (also for `k < 2`).
fn forced_d(lambda0: &BigInt, face_sum: &BigInt, k: usize) -> BigRational {
    let k = k as i32;
    let l0 = BigRational::from_integer(lambda0.clone());
    let s = BigRational::from_integer(face_sum.clone());
    l0.pow(k - 1) / s.pow(k - 2)
}

/// New weights for the labeling (apex, min-face, zero set): the apex gets
/// `λ_0 λ_1`, the first min-face vertex `Σ²`, the other min-face vertices
/// `λ_0 λ_i` and the zero set `λ_i Σ`, where `Σ` is the min-face weight sum.
pub fn predict_weights(
    ws: &WeightSystem,
    apex: usize,
    min_face: &[usize],
    zero_set: &[usize],
) -> Result<WeightPrediction> {
    let lam = ws.weights();
    let n = ws.dim();
    let mut all: Vec<usize> = std::iter::once(apex)
        .chain(min_face.iter().copied())
        .chain(zero_set.iter().copied())
        .collect();
    all.sort_unstable();
    if all != (0..=n).collect::<Vec<_>>() || min_face.is_empty() {
        return Err(Error::InvalidMove("labeling must partition the weights".into()));
    }
    let l0 = &lam[apex];
    let l1 = &lam[min_face[0]];
    let sigma: BigInt = min_face.iter().map(|&i| &lam[i]).sum();
    let mut raw = vec![BigInt::zero(); n + 1];
    raw[apex] = l0 * l1;
    raw[min_face[0]] = &sigma * &sigma;
    for &i in &min_face[1..] {
        raw[i] = l0 * &lam[i];
    }
    for &i in zero_set {
        raw[i] = &lam[i] * &sigma;
    }
    let d = gcd_all(&raw);
    let mult_ratio = forced_d(l0, &sigma, min_face.len()) / BigRational::from_integer(d.clone());
    Ok(WeightPrediction { raw, d, mult_ratio })
}

/// The weights after a multiplicity-preserving mutation, where `d` is forced
/// to `λ_0^{k-1} / Σ^{k-2}`.
pub fn predict_weights_preserving(
    ws: &WeightSystem,
    apex: usize,
    min_face: &[usize],
    zero_set: &[usize],
) -> Result<WeightSystem> {
    let pred = predict_weights(ws, apex, min_face, zero_set)?;
    let sigma: BigInt = min_face.iter().map(|&i| &ws.weights()[i]).sum();
    let forced = forced_d(&ws.weights()[apex], &sigma, min_face.len());
    if !forced.is_integer() || forced.to_integer() != pred.d {
        return Err(Error::CannotPreserveMultiplicity);
    }
    WeightSystem::new(pred.reduced(), ws.multiplicity().clone())
        .map_err(|_| Error::CannotPreserveMultiplicity)
}

/// `λ_0 | (λ_1 + λ_2)²` and `gcd(λ_1, λ_2) | λ_0`.
pub fn check_corollary1(l0: &BigInt, l1: &BigInt, l2: &BigInt) -> bool {
    let s = l1 + l2;
    (&s * &s).is_multiple_of(l0) && l0.is_multiple_of(&l1.gcd(l2))
}
