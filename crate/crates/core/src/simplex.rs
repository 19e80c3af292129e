//! Fano simplices, their weight systems, multiplicity, degree and duals.

use std::fmt;

use itertools::Itertools;
use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::lattice::{
    gcd_all, hermite_normal_form, smith_normal_form, solve_rational, sublattice_index,
    to_rational, DualVector, IntegerMatrix, LatticeVector,
};
use crate::polytope::{bounding_box, facets_of_points, for_each_box_point, lattice_to_rational};

/// Reduced, well-formed positive weights together with a multiplicity.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct WeightSystem {
    weights: Vec<BigInt>,
    multiplicity: BigInt,
}

impl WeightSystem {
    pub fn new(weights: Vec<BigInt>, multiplicity: BigInt) -> Result<Self> {
        if weights.len() < 2 {
            return Err(Error::VertexCount {
                expected: 2,
                got: weights.len(),
            });
        }
        if weights.iter().any(|w| !w.is_positive()) {
            return Err(Error::NonPositiveWeight);
        }
        if !multiplicity.is_positive() {
            return Err(Error::NonPositiveMultiplicity);
        }
        let g = gcd_all(&weights);
        if !g.is_one() {
            return Err(Error::NotReduced(g));
        }
        if !is_well_formed(&weights) {
            return Err(Error::NotWellFormed);
        }
        Ok(Self {
            weights,
            multiplicity,
        })
    }

    pub fn from_u64(weights: &[u64], multiplicity: u64) -> Result<Self> {
        Self::new(
            weights.iter().map(|&w| BigInt::from(w)).collect(),
            BigInt::from(multiplicity),
        )
    }

    /// Weights in the order they were given (for a simplex: vertex order).
    pub fn weights(&self) -> &[BigInt] {
        &self.weights
    }

    pub fn multiplicity(&self) -> &BigInt {
        &self.multiplicity
    }

    /// Dimension `n`; there are `n + 1` weights.
    pub fn dim(&self) -> usize {
        self.weights.len() - 1
    }

    /// `h = λ_0 + ... + λ_n`.
    pub fn sum(&self) -> BigInt {
        self.weights.iter().sum()
    }

    pub fn sorted(&self) -> Vec<BigInt> {
        let mut w = self.weights.clone();
        w.sort();
        w
    }

    /// The same weight system with weights in ascending order.
    pub fn normalized(&self) -> Self {
        Self {
            weights: self.sorted(),
            multiplicity: self.multiplicity.clone(),
        }
    }

    /// Equal as multisets with equal multiplicity.
    pub fn same_multiset(&self, other: &WeightSystem) -> bool {
        self.multiplicity == other.multiplicity && self.sorted() == other.sorted()
    }
}

impl fmt::Display for WeightSystem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.weights.iter().join(","))?;
        if !self.multiplicity.is_one() {
            write!(f, " (mult {})", self.multiplicity)?;
        }
        Ok(())
    }
}

/// Any `n` of the `n + 1` weights are coprime.
pub fn is_well_formed(weights: &[BigInt]) -> bool {
    (0..weights.len()).all(|skip| {
        weights
            .iter()
            .enumerate()
            .filter(|&(i, _)| i != skip)
            .fold(BigInt::zero(), |acc, (_, w)| acc.gcd(w))
            .is_one()
    })
}

/// `(Σλ)^n / (Πλ · mult)`.
pub fn degree(ws: &WeightSystem) -> BigRational {
    let n = ws.dim() as u32;
    let num = num_traits::pow(ws.sum(), n as usize);
    let den: BigInt = ws.weights().iter().product::<BigInt>() * ws.multiplicity();
    BigRational::new(num, den)
}

/// A full-dimensional lattice simplex with primitive vertices and the
/// origin in its strict interior.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FanoSimplex {
    dim: usize,
    vertices: Vec<LatticeVector>,
    cofactors: Vec<BigInt>,
    weights: WeightSystem,
}

/// Signed maximal minors `c_i = (-1)^i det(vertices without v_i)`; they
/// satisfy `Σ c_i v_i = 0`.
pub fn signed_cofactors(vertices: &[LatticeVector]) -> Vec<BigInt> {
    (0..vertices.len())
        .map(|skip| {
            let m = IntegerMatrix::from_rows(
                vertices
                    .iter()
                    .enumerate()
                    .filter(|&(i, _)| i != skip)
                    .map(|(_, v)| v.coords().to_vec())
                    .collect(),
            );
            let d = m.determinant();
            if skip % 2 == 0 {
                d
            } else {
                -d
            }
        })
        .collect()
}

/// Checks the Fano conditions in order: dimension, origin interior,
/// primitive vertices.
pub fn validate_fano(vertices: Vec<LatticeVector>) -> Result<FanoSimplex> {
    let Some(first) = vertices.first() else {
        return Err(Error::VertexCount {
            expected: 2,
            got: 0,
        });
    };
    let n = first.dim();
    if let Some(bad) = vertices.iter().find(|v| v.dim() != n) {
        return Err(Error::DimensionMismatch {
            expected: n,
            got: bad.dim(),
        });
    }
    if vertices.len() != n + 1 || n == 0 {
        return Err(Error::VertexCount {
            expected: n + 1,
            got: vertices.len(),
        });
    }
    let cofactors = signed_cofactors(&vertices);
    // the affine volume is, up to sign, the sum of the signed minors
    if cofactors.iter().sum::<BigInt>().is_zero() {
        return Err(Error::Degenerate);
    }
    let positive = cofactors.iter().all(Signed::is_positive);
    let negative = cofactors.iter().all(Signed::is_negative);
    if !positive && !negative {
        return Err(Error::OriginNotInterior);
    }
    if let Some(v) = vertices.iter().find(|v| !v.is_primitive()) {
        return Err(Error::NonPrimitiveVertex(v.clone()));
    }
    let g = gcd_all(&cofactors);
    let weights: Vec<BigInt> = cofactors.iter().map(|c| c.abs() / &g).collect();
    let multiplicity = sublattice_index(&vertices)?;
    if multiplicity != g {
        return Err(Error::Invariant(format!(
            "sublattice index {multiplicity} differs from minor gcd {g}"
        )));
    }
    let weights = WeightSystem::new(weights, multiplicity)?;
    Ok(FanoSimplex {
        dim: n,
        vertices,
        cofactors,
        weights,
    })
}

impl FanoSimplex {
    pub fn from_i64(vertices: &[&[i64]]) -> Result<Self> {
        validate_fano(vertices.iter().map(|v| LatticeVector::from_i64(v)).collect())
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn vertices(&self) -> &[LatticeVector] {
        &self.vertices
    }

    pub fn vertex(&self, i: usize) -> &LatticeVector {
        &self.vertices[i]
    }

    pub fn cofactors(&self) -> &[BigInt] {
        &self.cofactors
    }

    /// Weights in vertex order.
    pub fn weight_system(&self) -> &WeightSystem {
        &self.weights
    }

    pub fn weight(&self, i: usize) -> &BigInt {
        &self.weights.weights()[i]
    }

    pub fn multiplicity(&self) -> &BigInt {
        self.weights.multiplicity()
    }

    /// The facet functional opposite vertex `j`: `u_j(v_i) = -1` for `i != j`.
    pub fn facet_functional(&self, j: usize) -> Vec<BigRational> {
        let rows: Vec<Vec<BigRational>> = self
            .vertices
            .iter()
            .enumerate()
            .filter(|&(i, _)| i != j)
            .map(|(_, v)| lattice_to_rational(v))
            .collect();
        let rhs = vec![-BigRational::one(); self.dim];
        solve_rational(&rows, &rhs).expect("facet vertices are linearly independent")
    }

    /// `x ∈ kP`, tested against every facet.
    pub fn contains_scaled(&self, x: &[BigRational], k: &BigInt) -> bool {
        let bound = -to_rational(k);
        (0..=self.dim).all(|j| {
            let u = self.facet_functional(j);
            let v: BigRational = u.iter().zip(x).map(|(a, b)| a * b).sum();
            v >= bound
        })
    }

    /// `|kP ∩ N|` by bounding-box enumeration.
    pub fn lattice_point_count(&self, k: u32) -> Result<u64> {
        let kk = BigInt::from(k);
        let functionals: Vec<Vec<BigRational>> =
            (0..=self.dim).map(|j| self.facet_functional(j)).collect();
        let pts: Vec<Vec<BigRational>> = self
            .vertices
            .iter()
            .map(|v| lattice_to_rational(&v.scale(&kk)))
            .collect();
        let (lo, hi) = bounding_box(&pts);
        let bound = -to_rational(&kk);
        let mut count = 0u64;
        for_each_box_point(&lo, &hi, |x| {
            let inside = functionals.iter().all(|u| {
                let v: BigRational = u.iter().zip(x).map(|(a, b)| a * to_rational(b)).sum();
                v >= bound
            });
            if inside {
                count += 1;
            }
        })?;
        Ok(count)
    }
}

impl fmt::Display for FanoSimplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "conv{{{}}}", self.vertices.iter().join(","))
    }
}

impl From<&FanoSimplex> for crate::polytope::LatticePolytope {
    fn from(p: &FanoSimplex) -> Self {
        Self::from_extreme_points(p.vertices().to_vec())
    }
}

pub fn weights_of(p: &FanoSimplex) -> WeightSystem {
    p.weight_system().clone()
}

pub fn multiplicity(p: &FanoSimplex) -> BigInt {
    p.multiplicity().clone()
}

/// The simplex whose vertices are the images of the standard basis of
/// `Z^{n+1}` in `Z^{n+1} / Z·λ ≅ Z^n`, put in Hermite normal form.
pub fn simplex_from_weights(ws: &WeightSystem) -> Result<FanoSimplex> {
    if !ws.multiplicity().is_one() {
        return Err(Error::MultiplicityNotOne(ws.multiplicity().clone()));
    }
    let n = ws.dim();
    let column = IntegerMatrix::from_rows(ws.weights().iter().map(|w| vec![w.clone()]).collect());
    let snf = smith_normal_form(&column);
    // U λ = ±e_0, so rows 1..n of U form a surjection onto the quotient
    let u = snf.u;
    let a = IntegerMatrix::from_rows((1..=n).map(|i| u.row(i).to_vec()).collect());
    let (h, _) = hermite_normal_form(&a);
    let vertices: Vec<LatticeVector> = (0..=n).map(|j| LatticeVector::new(h.column(j))).collect();
    let p = validate_fano(vertices)?;
    if p.weight_system().weights() != ws.weights() || !p.multiplicity().is_one() {
        return Err(Error::Invariant(format!(
            "simplex built from {ws} has weights {}",
            p.weight_system()
        )));
    }
    Ok(p)
}

/// A polytope with rational vertices; used for duals.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RationalPolytope {
    dim: usize,
    vertices: Vec<Vec<BigRational>>,
}

impl RationalPolytope {
    pub fn new(vertices: Vec<Vec<BigRational>>) -> Result<Self> {
        let Some(dim) = vertices.first().map(Vec::len) else {
            return Err(Error::VertexCount {
                expected: 1,
                got: 0,
            });
        };
        if let Some(bad) = vertices.iter().find(|v| v.len() != dim) {
            return Err(Error::DimensionMismatch {
                expected: dim,
                got: bad.len(),
            });
        }
        Ok(Self { dim, vertices })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn vertices(&self) -> &[Vec<BigRational>] {
        &self.vertices
    }

    pub fn is_lattice_polytope(&self) -> bool {
        self.vertices.iter().flatten().all(|x| x.is_integer())
    }

    /// `|kQ ∩ Z^n|` by bounding-box enumeration with exact containment.
    pub fn lattice_point_count(&self, k: u32) -> Result<u64> {
        if k == 0 {
            return Ok(1);
        }
        let kk = to_rational(&BigInt::from(k));
        let scaled: Vec<Vec<BigRational>> = self
            .vertices
            .iter()
            .map(|v| v.iter().map(|x| x * &kk).collect())
            .collect();
        let facets = facets_of_points(&scaled);
        let (lo, hi) = bounding_box(&scaled);
        let mut count = 0u64;
        for_each_box_point(&lo, &hi, |x| {
            if facets.iter().all(|f| f.contains_lattice_point(x)) {
                count += 1;
            }
        })?;
        Ok(count)
    }
}

/// `P* = {u : u(v) >= -1 for all v in P}`, whose vertices are the facet
/// functionals of `P`.
pub fn dual_polytope(p: &FanoSimplex) -> RationalPolytope {
    RationalPolytope {
        dim: p.dim(),
        vertices: (0..=p.dim()).map(|j| p.facet_functional(j)).collect(),
    }
}

/// The facet functionals as dual lattice points, if they are all integral.
pub fn integral_facet_functionals(p: &FanoSimplex) -> Option<Vec<DualVector>> {
    (0..=p.dim())
        .map(|j| {
            let u = p.facet_functional(j);
            u.iter()
                .map(|x| x.is_integer().then(|| x.to_integer()))
                .collect::<Option<Vec<_>>>()
                .map(DualVector::new)
        })
        .collect()
}

/// `|kP* ∩ M|` without a bounding box.
///
/// Writes `u ∈ M` as `a = (u(v_i))_{i≠r}`; these range over the lattice
/// spanned by the columns of the matrix with rows `v_i`, and `u ∈ kP*` iff
/// `a_i >= -k` and `Σ λ_i a_i <= k λ_r`. The lattice is walked through its
/// lower-triangular Hermite basis, heaviest weight first, and the last
/// coordinate is counted in closed form.
pub fn dual_lattice_point_count(p: &FanoSimplex, k: u32) -> Result<u128> {
    let overflow = || Error::TooLarge("dual lattice point count overflows 128 bits".into());
    let n = p.dim();
    let lam = p.weight_system().weights();
    let r = (0..=n).min_by_key(|&i| &lam[i]).unwrap();
    let mut order: Vec<usize> = (0..=n).filter(|&i| i != r).collect();
    order.sort_by(|&i, &j| lam[j].cmp(&lam[i]).then(i.cmp(&j)));

    let b = IntegerMatrix::from_rows(order.iter().map(|&i| p.vertex(i).coords().to_vec()).collect());
    let (h, _) = hermite_normal_form(&b.transpose());
    // basis column j of the lattice is row j of h; entry (i, j) below is h[j][i]
    let mut basis = vec![vec![0i128; n]; n];
    for i in 0..n {
        for j in 0..=i {
            basis[i][j] = h.get(j, i).to_i128().ok_or_else(overflow)?;
        }
    }
    for (i, row) in basis.iter().enumerate() {
        if row[i] <= 0 {
            return Err(Error::Invariant("lattice basis is not triangular".into()));
        }
    }
    let weights: Vec<i128> = order
        .iter()
        .map(|&i| lam[i].to_i128().ok_or_else(overflow))
        .collect::<Result<_>>()?;
    let k = k as i128;
    let lam_r = lam[r].to_i128().ok_or_else(overflow)?;
    let mut suffix = vec![0i128; n + 1];
    for i in (0..n).rev() {
        suffix[i] = suffix[i + 1].checked_add(weights[i]).ok_or_else(overflow)?;
    }
    let budget = k.checked_mul(lam_r).ok_or_else(overflow)?;

    struct Walk<'a> {
        basis: &'a [Vec<i128>],
        weights: &'a [i128],
        suffix: &'a [i128],
        k: i128,
        budget: i128,
        z: Vec<i128>,
    }

    impl Walk<'_> {
        fn count(&mut self, level: usize, partial: i128) -> Option<u128> {
            let n = self.weights.len();
            let mut base = 0i128;
            for j in 0..level {
                base = base.checked_add(self.basis[level][j].checked_mul(self.z[j])?)?;
            }
            let d = self.basis[level][level];
            let lam = self.weights[level];
            let room = self
                .budget
                .checked_sub(partial)?
                .checked_add(self.k.checked_mul(self.suffix[level + 1])?)?;
            let hi = room.div_euclid(lam);
            let lo = -self.k;
            if hi < lo {
                return Some(0);
            }
            let z_lo = div_ceil(lo.checked_sub(base)?, d);
            let z_hi = (hi.checked_sub(base)?).div_euclid(d);
            if z_hi < z_lo {
                return Some(0);
            }
            if level + 1 == n {
                return Some((z_hi - z_lo + 1) as u128);
            }
            let mut total = 0u128;
            for z in z_lo..=z_hi {
                self.z[level] = z;
                let a = base.checked_add(d.checked_mul(z)?)?;
                let next = partial.checked_add(lam.checked_mul(a)?)?;
                total = total.checked_add(self.count(level + 1, next)?)?;
            }
            Some(total)
        }
    }

    let mut walk = Walk {
        basis: &basis,
        weights: &weights,
        suffix: &suffix,
        k,
        budget,
        z: vec![0; n],
    };
    walk.count(0, 0).ok_or_else(overflow)
}

fn div_ceil(a: i128, b: i128) -> i128 {
    -((-a).div_euclid(b))
}

/// True iff some vertex bijection extends to a unimodular change of basis.
pub fn simplex_equivalent(p: &FanoSimplex, q: &FanoSimplex) -> bool {
    equivalence_map(p, q).is_some()
}

/// A unimodular `M` with `M·P = Q` as vertex sets, found by trying every
/// weight-compatible vertex matching.
pub fn equivalence_map(p: &FanoSimplex, q: &FanoSimplex) -> Option<IntegerMatrix> {
    if p.dim() != q.dim() || !p.weight_system().same_multiset(q.weight_system()) {
        return None;
    }
    let n = p.dim();
    let rows: Vec<Vec<BigRational>> = p.vertices()[..n].iter().map(lattice_to_rational).collect();
    for perm in (0..=n).permutations(n + 1) {
        if (0..=n).any(|i| p.weight(i) != q.weight(perm[i])) {
            continue;
        }
        let mut m = Vec::with_capacity(n);
        let mut integral = true;
        for coord in 0..n {
            let rhs: Vec<BigRational> = (0..n)
                .map(|i| to_rational(&q.vertex(perm[i]).coords()[coord]))
                .collect();
            let sol = solve_rational(&rows, &rhs).expect("vertices are independent");
            if sol.iter().any(|x| !x.is_integer()) {
                integral = false;
                break;
            }
            m.push(sol.iter().map(|x| x.to_integer()).collect::<Vec<_>>());
        }
        if !integral {
            continue;
        }
        let m = IntegerMatrix::from_rows(m);
        if !m.is_unimodular() {
            continue;
        }
        if (0..=n).all(|i| m.mul_vec(p.vertex(i).coords()) == q.vertex(perm[i]).coords()) {
            return Some(m);
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;

    fn big(x: i64) -> BigInt {
        BigInt::from(x)
    }

    fn ws(w: &[u64]) -> WeightSystem {
        WeightSystem::from_u64(w, 1).unwrap()
    }

    fn p1113() -> FanoSimplex {
        FanoSimplex::from_i64(&[&[1, 0, 0], &[0, 1, 0], &[0, 0, 1], &[-1, -1, -3]]).unwrap()
    }

    fn p1146() -> FanoSimplex {
        FanoSimplex::from_i64(&[&[-1, -1, -3], &[0, 0, 1], &[0, 1, 0], &[4, 3, 6]]).unwrap()
    }

    fn p2() -> FanoSimplex {
        FanoSimplex::from_i64(&[&[1, 0], &[0, 1], &[-1, -1]]).unwrap()
    }

    /// Brute-force kernel oracle: smallest positive integer solution of
    /// `Σ λ_i v_i = 0` found by search.
    fn kernel_by_search(p: &FanoSimplex, bound: i64) -> Vec<i64> {
        let n = p.dim();
        let mut lam = vec![1i64; n + 1];
        loop {
            let ok = (0..n).all(|c| {
                (0..=n)
                    .map(|i| big(lam[i]) * &p.vertex(i).coords()[c])
                    .sum::<BigInt>()
                    .is_zero()
            });
            if ok {
                return lam;
            }
            let mut i = 0;
            loop {
                assert!(i <= n, "no kernel vector within bound");
                lam[i] += 1;
                if lam[i] <= bound {
                    break;
                }
                lam[i] = 1;
                i += 1;
            }
        }
    }

    #[test]
    fn validation_errors() {
        assert!(FanoSimplex::from_i64(&[&[1, 0, 0], &[0, 1, 0], &[0, 0, 1], &[-1, -1, -3]]).is_ok());
        assert_eq!(
            FanoSimplex::from_i64(&[&[1, 0], &[0, 1], &[1, 1]]),
            Err(Error::OriginNotInterior)
        );
        assert_eq!(
            FanoSimplex::from_i64(&[&[2, 0], &[0, 1], &[-2, -1]]),
            Err(Error::NonPrimitiveVertex(LatticeVector::from_i64(&[2, 0])))
        );
        assert_eq!(
            FanoSimplex::from_i64(&[&[1, 0], &[2, 0], &[-1, 0]]),
            Err(Error::Degenerate)
        );
        assert!(matches!(
            FanoSimplex::from_i64(&[&[1, 0], &[0, 1]]),
            Err(Error::VertexCount { .. })
        ));
    }

    #[test]
    fn weights_examples() {
        let p = p1113();
        assert_eq!(p.weight_system().weights(), &[big(1), big(1), big(3), big(1)]);
        assert_eq!(kernel_by_search(&p, 5), vec![1, 1, 3, 1]);
        assert_eq!(p.multiplicity(), &big(1));

        let q = p1146();
        assert_eq!(q.weight_system().sorted(), vec![big(1), big(1), big(4), big(6)]);
        assert_eq!(kernel_by_search(&q, 8), vec![4, 6, 1, 1]);

        let r = FanoSimplex::from_i64(&[&[1, -1, 0], &[-2, -2, -1], &[-2, -2, 1], &[0, 1, 0]]).unwrap();
        assert_eq!(r.weight_system().sorted(), vec![big(1), big(1), big(4), big(8)]);
        assert_eq!(kernel_by_search(&r, 8), vec![4, 1, 1, 8]);
    }

    #[test]
    fn multiplicity_examples() {
        assert_eq!(p1113().multiplicity(), &big(1));
        assert_eq!(p2().multiplicity(), &big(1));
        // (1,1) and (1,-1) alone span an index-2 sublattice, but (-1,0)
        // completes it to Z^2
        let q = FanoSimplex::from_i64(&[&[1, 1], &[1, -1], &[-1, 0]]).unwrap();
        assert_eq!(q.multiplicity(), &big(1));
        assert_eq!(
            sublattice_index(&[LatticeVector::from_i64(&[1, 1]), LatticeVector::from_i64(&[1, -1])]).unwrap(),
            big(2)
        );
        let r = FanoSimplex::from_i64(&[&[1, 0], &[-1, 2], &[-1, -2]]).unwrap();
        assert_eq!(r.multiplicity(), &big(2));
        assert_eq!(r.weight_system().weights(), &[big(2), big(1), big(1)]);
    }

    #[test]
    fn weight_system_validation() {
        assert!(WeightSystem::from_u64(&[1, 1, 4, 6], 1).is_ok());
        assert_eq!(WeightSystem::from_u64(&[2, 2, 4], 1), Err(Error::NotReduced(big(2))));
        assert_eq!(WeightSystem::from_u64(&[1, 2, 2], 1), Err(Error::NotWellFormed));
        assert_eq!(WeightSystem::from_u64(&[0, 1, 1], 1), Err(Error::NonPositiveWeight));
    }

    #[test]
    fn degree_examples() {
        let q = |a: i64, b: i64| BigRational::new(big(a), big(b));
        assert_eq!(degree(&ws(&[1, 1, 1, 3])), q(72, 1));
        assert_eq!(degree(&ws(&[1, 1, 4, 6])), q(72, 1));
        assert_eq!(degree(&ws(&[1, 1, 1])), q(9, 1));
        assert_eq!(degree(&WeightSystem::from_u64(&[1, 1, 2], 2).unwrap()), q(4, 1));
    }

    #[test]
    fn from_weights_examples() {
        let p = simplex_from_weights(&ws(&[1, 1, 1])).unwrap();
        assert!(simplex_equivalent(&p, &p2()));

        let q = simplex_from_weights(&ws(&[1, 1, 4, 6])).unwrap();
        assert!(simplex_equivalent(&q, &p1146()));
        assert!(!simplex_equivalent(&p1113(), &p1146()));

        let t = simplex_from_weights(&ws(&[1, 1, 6, 14, 21])).unwrap();
        assert_eq!(t.dim(), 4);
        assert_eq!(t.weight_system().weights(), ws(&[1, 1, 6, 14, 21]).weights());

        assert!(simplex_from_weights(&WeightSystem::from_u64(&[1, 1, 2], 2).unwrap()).is_err());
    }

    #[test]
    fn from_weights_is_deterministic() {
        let a = simplex_from_weights(&ws(&[1, 2, 3, 5])).unwrap();
        let b = simplex_from_weights(&ws(&[1, 2, 3, 5])).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn dual_examples() {
        let d = dual_polytope(&p2());
        let expect: Vec<Vec<BigRational>> = [[2, -1], [-1, 2], [-1, -1]]
            .iter()
            .map(|r| r.iter().map(|&x| to_rational(&big(x))).collect())
            .collect();
        assert_eq!(d.vertices(), expect.as_slice());
        // each dual vertex attains -1 on the facet it defines
        for (j, u) in d.vertices().iter().enumerate() {
            for (i, v) in p2().vertices().iter().enumerate() {
                let val: BigRational = u.iter().zip(v.coords()).map(|(a, b)| a * to_rational(b)).sum();
                if i == j {
                    assert!(val > -BigRational::one());
                } else {
                    assert_eq!(val, -BigRational::one());
                }
            }
        }
        let d3 = dual_polytope(&p1113());
        assert_eq!(d3.vertices().len(), 4);
        assert!(d3.is_lattice_polytope());
    }

    #[test]
    fn lattice_point_counts() {
        let square = RationalPolytope::new(
            [[-1, -1], [-1, 1], [1, -1], [1, 1]]
                .iter()
                .map(|r| r.iter().map(|&x| to_rational(&big(x))).collect())
                .collect(),
        )
        .unwrap();
        assert_eq!(square.lattice_point_count(0).unwrap(), 1);
        assert_eq!(square.lattice_point_count(1).unwrap(), 9);
        assert_eq!(square.lattice_point_count(2).unwrap(), 25);

        let cross = FanoSimplex::from_i64(&[&[1, 0], &[0, 1], &[-1, -1]]).unwrap();
        assert_eq!(cross.lattice_point_count(1).unwrap(), 4);

        let a = dual_polytope(&p1113()).lattice_point_count(1).unwrap();
        let b = dual_polytope(&p1146()).lattice_point_count(1).unwrap();
        assert_eq!(a, b);
        assert_eq!(dual_lattice_point_count(&p1113(), 1).unwrap() as u64, a);
        assert_eq!(dual_lattice_point_count(&p1146(), 1).unwrap() as u64, b);
        assert_eq!(dual_lattice_point_count(&p1113(), 0).unwrap(), 1);
    }

    #[test]
    fn equivalence() {
        let p = p1113();
        let mut verts = p.vertices().to_vec();
        verts.rotate_left(2);
        let q = validate_fano(verts).unwrap();
        assert!(simplex_equivalent(&p, &q));
        // an explicit unimodular image
        let m = IntegerMatrix::from_i64_rows(&[&[1, 2, 0], &[0, 1, 0], &[3, 1, 1]]);
        let img = validate_fano(
            p.vertices()
                .iter()
                .map(|v| LatticeVector::new(m.mul_vec(v.coords())))
                .collect(),
        )
        .unwrap();
        assert!(simplex_equivalent(&p, &img));
        assert_eq!(equivalence_map(&p, &img).unwrap(), m);
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        fn well_formed_weights() -> impl Strategy<Value = Vec<u64>> {
            (2usize..=5)
                .prop_flat_map(|n| proptest::collection::vec(1u64..=50, n + 1))
                .prop_filter("well-formed", |w| {
                    let b: Vec<BigInt> = w.iter().map(|&x| BigInt::from(x)).collect();
                    is_well_formed(&b)
                })
        }

        fn unimodular(n: usize) -> impl Strategy<Value = IntegerMatrix> {
            proptest::collection::vec((0usize..n, 0usize..n, -3i64..=3), 0..8).prop_map(move |ops| {
                let mut m = IntegerMatrix::identity(n);
                for (i, j, c) in ops {
                    if i == j {
                        continue;
                    }
                    let mut e = IntegerMatrix::identity(n);
                    e.set(i, j, BigInt::from(c));
                    m = e.mul(&m);
                }
                m
            })
        }

        proptest! {
            #![proptest_config(ProptestConfig::with_cases(64))]

            #[test]
            fn weights_round_trip(w in well_formed_weights()) {
                let ws = WeightSystem::from_u64(&w, 1).unwrap();
                let p = simplex_from_weights(&ws).unwrap();
                prop_assert_eq!(p.weight_system().weights(), ws.weights());
                prop_assert!(p.multiplicity().is_one());
                for i in 0..p.dim() {
                    let s: BigInt = (0..=p.dim()).map(|j| p.weight(j) * &p.vertex(j).coords()[i]).sum();
                    prop_assert!(s.is_zero());
                }
            }

            #[test]
            fn invariants_survive_basis_change(w in well_formed_weights().prop_filter("dim 3", |w| w.len() == 4), m in unimodular(3)) {
                let ws = WeightSystem::from_u64(&w, 1).unwrap();
                let p = simplex_from_weights(&ws).unwrap();
                let q = validate_fano(p.vertices().iter().map(|v| LatticeVector::new(m.mul_vec(v.coords()))).collect()).unwrap();
                prop_assert!(simplex_equivalent(&p, &q));
                prop_assert!(q.weight_system().same_multiset(p.weight_system()));
                prop_assert_eq!(degree(q.weight_system()), degree(p.weight_system()));
                prop_assert_eq!(dual_lattice_point_count(&p, 1).unwrap(), dual_lattice_point_count(&q, 1).unwrap());
            }

            #[test]
            fn fast_dual_count_matches_enumeration(verts in proptest::collection::vec(proptest::collection::vec(-4i64..=4, 3), 4)) {
                let verts: Vec<LatticeVector> = verts.iter().map(|v| LatticeVector::from_i64(v)).collect();
                let Ok(p) = validate_fano(verts) else { return Ok(()); };
                let d = dual_polytope(&p);
                for k in 0..=2u32 {
                    prop_assert_eq!(dual_lattice_point_count(&p, k).unwrap() as u64, d.lattice_point_count(k).unwrap());
                }
            }
        }
    }
}
