//! Lattice polytopes given by vertices, with exact facet, containment and
//! convex-hull computations.

use std::collections::BTreeSet;

use itertools::Itertools;
use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::lattice::{primitive_kernel_vector, to_rational, LatticeVector};

/// Upper bound on the number of box points visited by a single enumeration.
pub const MAX_BOX_POINTS: u64 = 50_000_000;

/// The half-space `normal · x <= offset`; `normal` is a primitive integer vector.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct Halfspace {
    pub normal: Vec<BigInt>,
    pub offset: BigRational,
}

impl Halfspace {
    pub fn value(&self, x: &[BigRational]) -> BigRational {
        self.normal
            .iter()
            .zip(x)
            .map(|(a, b)| b * to_rational(a))
            .sum()
    }

    pub fn contains(&self, x: &[BigRational]) -> bool {
        self.value(x) <= self.offset
    }

    pub fn contains_lattice_point(&self, x: &[BigInt]) -> bool {
        let v: BigInt = self.normal.iter().zip(x).map(|(a, b)| a * b).sum();
        to_rational(&v) <= self.offset
    }
}

/// Facets of the convex hull of a full-dimensional point set, by testing
/// every affinely independent `n`-subset for a supporting hyperplane.
pub fn facets_of_points(points: &[Vec<BigRational>]) -> Vec<Halfspace> {
    let Some(n) = points.first().map(Vec::len) else {
        return Vec::new();
    };
    let mut found = BTreeSet::new();
    for subset in (0..points.len()).combinations(n) {
        let p0 = &points[subset[0]];
        let rows: Vec<Vec<BigInt>> = subset[1..]
            .iter()
            .map(|&j| integer_row(&points[j], p0))
            .collect();
        let normal = if n == 1 {
            vec![BigInt::one()]
        } else {
            match primitive_kernel_vector(&rows) {
                Some(w) => w,
                None => continue,
            }
        };
        let h = Halfspace {
            normal: normal.clone(),
            offset: BigRational::zero(),
        };
        let offset = h.value(p0);
        let (mut below, mut above) = (false, false);
        for p in points {
            let v = h.value(p);
            below |= v < offset;
            above |= v > offset;
        }
        match (below, above) {
            (true, true) | (false, false) => {}
            (true, false) => {
                found.insert(Halfspace { normal, offset });
            }
            (false, true) => {
                found.insert(Halfspace {
                    normal: normal.iter().map(|x| -x).collect(),
                    offset: -offset,
                });
            }
        }
    }
    found.into_iter().collect()
}

/// `p - p0` scaled by a positive integer to clear denominators.
fn integer_row(p: &[BigRational], p0: &[BigRational]) -> Vec<BigInt> {
    let diff: Vec<BigRational> = p.iter().zip(p0).map(|(a, b)| a - b).collect();
    let l = diff
        .iter()
        .fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
    diff.iter()
        .map(|x| (x * to_rational(&l)).to_integer())
        .collect()
}

pub fn lattice_to_rational(v: &LatticeVector) -> Vec<BigRational> {
    v.coords().iter().map(to_rational).collect()
}

/// Decides whether `p` lies in the convex hull of `points` with an exact
/// phase-one simplex method (Bland's rule, so it cannot cycle).
pub fn in_convex_hull(p: &[BigRational], points: &[Vec<BigRational>]) -> bool {
    let n = p.len();
    let cols = points.len();
    if cols == 0 {
        return false;
    }
    // constraints: sum_j mu_j p_j = p, sum_j mu_j = 1, mu >= 0
    let m = n + 1;
    let width = cols + m;
    let mut t: Vec<Vec<BigRational>> = Vec::with_capacity(m);
    let mut rhs: Vec<BigRational> = Vec::with_capacity(m);
    for i in 0..m {
        let mut row = vec![BigRational::zero(); width];
        for (j, q) in points.iter().enumerate() {
            row[j] = if i < n { q[i].clone() } else { BigRational::one() };
        }
        let mut b = if i < n { p[i].clone() } else { BigRational::one() };
        if b.is_negative() {
            for x in row.iter_mut().take(cols) {
                *x = -&*x;
            }
            b = -b;
        }
        row[cols + i] = BigRational::one();
        t.push(row);
        rhs.push(b);
    }
    let mut basis: Vec<usize> = (cols..width).collect();
    let mut cost = vec![BigRational::zero(); width];
    let mut obj = BigRational::zero();
    for i in 0..m {
        for j in 0..cols {
            cost[j] -= &t[i][j];
        }
        obj -= &rhs[i];
    }
    loop {
        let Some(pc) = (0..width).find(|&j| cost[j].is_negative()) else {
            break;
        };
        let mut pr: Option<usize> = None;
        for i in 0..m {
            if !t[i][pc].is_positive() {
                continue;
            }
            let ratio = &rhs[i] / &t[i][pc];
            pr = match pr {
                None => Some(i),
                Some(r) => {
                    let best = &rhs[r] / &t[r][pc];
                    if ratio < best || (ratio == best && basis[i] < basis[r]) {
                        Some(i)
                    } else {
                        Some(r)
                    }
                }
            };
        }
        // phase one is bounded below by zero, so a pivot row always exists
        let pr = pr.expect("unbounded phase-one problem");
        let piv = t[pr][pc].clone();
        for x in t[pr].iter_mut() {
            *x /= &piv;
        }
        rhs[pr] /= &piv;
        let pivot_row = t[pr].clone();
        let pivot_rhs = rhs[pr].clone();
        for i in 0..m {
            if i == pr || t[i][pc].is_zero() {
                continue;
            }
            let f = t[i][pc].clone();
            for j in 0..width {
                if !pivot_row[j].is_zero() {
                    let d = &f * &pivot_row[j];
                    t[i][j] -= d;
                }
            }
            rhs[i] -= &f * &pivot_rhs;
        }
        let f = cost[pc].clone();
        for j in 0..width {
            if !pivot_row[j].is_zero() {
                cost[j] -= &f * &pivot_row[j];
            }
        }
        obj -= &f * &pivot_rhs;
        basis[pr] = pc;
    }
    obj.is_zero()
}

/// The extreme points of a finite point set, sorted and deduplicated.
///
/// Points are inserted one at a time into a running vertex set, so each
/// hull-membership test only sees the current vertices.
pub fn convex_hull_vertices(points: &[LatticeVector]) -> Vec<LatticeVector> {
    let mut distinct: Vec<LatticeVector> = points
        .iter()
        .cloned()
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect();
    // far points first: they are the likeliest vertices
    distinct.sort_by_cached_key(|p| {
        std::cmp::Reverse(p.coords().iter().map(|x| x * x).sum::<BigInt>())
    });
    let mut hull: Vec<(LatticeVector, Vec<BigRational>)> = Vec::new();
    for p in distinct {
        let pq = lattice_to_rational(&p);
        let current: Vec<Vec<BigRational>> = hull.iter().map(|(_, q)| q.clone()).collect();
        if in_convex_hull(&pq, &current) {
            continue;
        }
        hull.push((p, pq));
        let mut i = 0;
        while i < hull.len() {
            let others: Vec<Vec<BigRational>> = hull
                .iter()
                .enumerate()
                .filter(|&(j, _)| j != i)
                .map(|(_, (_, q))| q.clone())
                .collect();
            if in_convex_hull(&hull[i].1, &others) {
                hull.remove(i);
            } else {
                i += 1;
            }
        }
    }
    let mut out: Vec<LatticeVector> = hull.into_iter().map(|(p, _)| p).collect();
    out.sort();
    out
}

/// Integer points of the axis-aligned box `[lo, hi]`, visited in
/// lexicographic order.
pub fn for_each_box_point<F>(lo: &[BigInt], hi: &[BigInt], mut f: F) -> Result<()>
where
    F: FnMut(&[BigInt]),
{
    let n = lo.len();
    let mut total: u64 = 1;
    let mut lo64 = Vec::with_capacity(n);
    let mut hi64 = Vec::with_capacity(n);
    for (a, b) in lo.iter().zip(hi) {
        if b < a {
            return Ok(());
        }
        let (Some(a), Some(b)) = (a.to_i64(), b.to_i64()) else {
            return Err(Error::TooLarge("bounding box coordinates".into()));
        };
        let side = (b - a + 1) as u64;
        total = total
            .checked_mul(side)
            .filter(|&t| t <= MAX_BOX_POINTS)
            .ok_or_else(|| Error::TooLarge(format!("bounding box exceeds {MAX_BOX_POINTS} points")))?;
        lo64.push(a);
        hi64.push(b);
    }
    let mut cur = lo64.clone();
    let mut point: Vec<BigInt> = cur.iter().map(|&x| BigInt::from(x)).collect();
    loop {
        f(&point);
        let mut k = 0;
        loop {
            if k == n {
                return Ok(());
            }
            cur[k] += 1;
            if cur[k] <= hi64[k] {
                point[k] = BigInt::from(cur[k]);
                break;
            }
            cur[k] = lo64[k];
            point[k] = BigInt::from(cur[k]);
            k += 1;
        }
    }
}

/// Componentwise floor and ceiling bounds of a rational point set.
pub fn bounding_box(points: &[Vec<BigRational>]) -> (Vec<BigInt>, Vec<BigInt>) {
    let n = points.first().map_or(0, Vec::len);
    let lo = (0..n)
        .map(|i| points.iter().map(|p| p[i].floor().to_integer()).min().unwrap())
        .collect();
    let hi = (0..n)
        .map(|i| points.iter().map(|p| p[i].ceil().to_integer()).max().unwrap())
        .collect();
    (lo, hi)
}

/// A lattice polytope stored by its vertex set.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LatticePolytope {
    dim: usize,
    vertices: Vec<LatticeVector>,
}

impl LatticePolytope {
    /// Convex hull of the given points, reduced to its vertices.
    pub fn from_points(points: &[LatticeVector]) -> Result<Self> {
        let Some(first) = points.first() else {
            return Err(Error::VertexCount {
                expected: 1,
                got: 0,
            });
        };
        let dim = first.dim();
        if let Some(bad) = points.iter().find(|p| p.dim() != dim) {
            return Err(Error::DimensionMismatch {
                expected: dim,
                got: bad.dim(),
            });
        }
        Ok(Self {
            dim,
            vertices: convex_hull_vertices(points),
        })
    }

    /// Wraps points already known to be in convex position.
    pub(crate) fn from_extreme_points(mut vertices: Vec<LatticeVector>) -> Self {
        vertices.sort();
        Self {
            dim: vertices[0].dim(),
            vertices,
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn vertices(&self) -> &[LatticeVector] {
        &self.vertices
    }

    pub fn is_full_dimensional(&self) -> bool {
        let Some(v0) = self.vertices.first() else {
            return false;
        };
        let diffs: Vec<LatticeVector> = self.vertices[1..].iter().map(|v| v - v0).collect();
        crate::lattice::sublattice_index(&diffs).is_ok()
    }

    /// Facet inequalities; requires a full-dimensional polytope.
    pub fn facets(&self) -> Vec<Halfspace> {
        let pts: Vec<Vec<BigRational>> = self.vertices.iter().map(lattice_to_rational).collect();
        facets_of_points(&pts)
    }

    /// `P ∩ N` by bounding-box enumeration; requires a full-dimensional polytope.
    pub fn lattice_points(&self) -> Result<Vec<LatticeVector>> {
        let facets = self.facets();
        let pts: Vec<Vec<BigRational>> = self.vertices.iter().map(lattice_to_rational).collect();
        let (lo, hi) = bounding_box(&pts);
        let mut out = Vec::new();
        for_each_box_point(&lo, &hi, |x| {
            if facets.iter().all(|f| f.contains_lattice_point(x)) {
                out.push(LatticeVector::new(x.to_vec()));
            }
        })?;
        Ok(out)
    }

    /// Same vertex set up to ordering.
    pub fn same_as(&self, other: &LatticePolytope) -> bool {
        let a: BTreeSet<_> = self.vertices.iter().collect();
        let b: BTreeSet<_> = other.vertices.iter().collect();
        a == b
    }
}
