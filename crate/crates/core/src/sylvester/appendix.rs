use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::tower::{kappa_witness, tower, TowerState};
use super::{prime_factors, sylvester_numbers, Variant};
use crate::error::{Error, Result};
use crate::lattice::gcd_all;

/// One machine-checked divisibility, coprimality or inequality statement.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClaimCheck {
    pub name: String,
    pub statement: String,
    pub instances: usize,
    pub counterexample: Option<String>,
}

impl ClaimCheck {
    pub fn passed(&self) -> bool {
        self.counterexample.is_none()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AppendixReport {
    pub n: usize,
    pub variant: Variant,
    pub m_max: usize,
    pub checks: Vec<ClaimCheck>,
}

impl AppendixReport {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(ClaimCheck::passed)
    }
}

impl fmt::Display for AppendixReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{} towers, n={}, m<={}", self.variant, self.n, self.m_max)?;
        for c in &self.checks {
            match &c.counterexample {
                None => writeln!(f, "PASS {:<36} {:>5} instances  {}", c.name, c.instances, c.statement)?,
                Some(bad) => writeln!(f, "FAIL {:<36} {}  {}", c.name, bad, c.statement)?,
            }
        }
        Ok(())
    }
}

/// Records instances of one claim and the first failing one.
struct Recorder {
    check: ClaimCheck,
}

impl Recorder {
    fn new(name: &str, statement: &str) -> Self {
        Recorder {
            check: ClaimCheck {
                name: name.to_string(),
                statement: statement.to_string(),
                instances: 0,
                counterexample: None,
            },
        }
    }

    fn record(&mut self, ok: bool, context: impl FnOnce() -> String) {
        self.check.instances += 1;
        if !ok && self.check.counterexample.is_none() {
            self.check.counterexample = Some(context());
        }
    }

    fn finish(self) -> ClaimCheck {
        self.check
    }
}

fn divides(d: &BigInt, x: &BigInt) -> bool {
    x.is_multiple_of(d)
}

/// The largest divisor of `g` sharing no prime with `other`.
fn coprime_part(g: &BigInt, other: &BigInt) -> BigInt {
    let mut g = g.clone();
    loop {
        let d = g.gcd(other);
        if d.is_one() || g.is_zero() {
            return g;
        }
        g /= d;
    }
}

fn frac(x: BigRational) -> BigRational {
    &x - x.floor()
}

fn at(s: &TowerState) -> String {
    format!("a={} m={}", s.a, s.m)
}

/// Checks, instance by instance for every `a` and `m ≤ m_max`, the
/// divisibility, coprimality and inequality facts that make the towers
/// integral and rule out canonical (or terminal) singularities past the root.
pub fn verify_appendix_claims(n: usize, variant: Variant, m_max: usize) -> Result<AppendixReport> {
    if !(4..=6).contains(&n) {
        return Err(Error::OutOfRange(format!("appendix checks support n in 4..=6, got {n}")));
    }
    if m_max > 4 {
        return Err(Error::TooLarge(format!("m_max={m_max} exceeds 4")));
    }
    let towers: Vec<Vec<TowerState>> =
        (0..=n - 2).map(|a| tower(n, variant, a, m_max)).collect::<Result<_>>()?;
    let all = || towers.iter().flatten();
    let canonical = variant == Variant::Canonical;
    let mut checks = sylvester_checks(n.max(8));

    let mut r = Recorder::new("weights-nondecreasing", "λ_i^(m) ≤ λ_i^(m+1) and λ_2 grows strictly");
    for t in &towers {
        for w in t.windows(2) {
            let ok = w[0].lambda.iter().zip(&w[1].lambda).all(|(x, y)| x <= y)
                && w[0].lambda[2] < w[1].lambda[2];
            r.record(ok, || at(&w[1]));
        }
    }
    checks.push(r.finish());

    let mut r = Recorder::new("leading-weights-coprime", "λ_0, λ_1, λ_2 pairwise coprime");
    for s in all() {
        let l = &s.lambda;
        let ok = l[0].gcd(&l[1]).is_one() && l[0].gcd(&l[2]).is_one() && l[1].gcd(&l[2]).is_one();
        r.record(ok, || at(s));
    }
    checks.push(r.finish());

    let mut r = Recorder::new(
        "prime-divides-edge-end-and-rest",
        "m ≥ 1: some prime divides λ_2, …, λ_n but not λ_0 or λ_1",
    );
    for s in all().filter(|s| s.m >= 1) {
        let g = gcd_all(&s.lambda[2..]);
        let ok = coprime_part(&g, &(&s.lambda[0] * &s.lambda[1])) > BigInt::one();
        r.record(ok, || at(s));
    }
    checks.push(r.finish());

    let mut r = Recorder::new(
        "prime-divides-apex-and-rest",
        "m ≥ 2: some prime divides λ_0, λ_3, …, λ_n but not λ_1 or λ_2",
    );
    for s in all().filter(|s| s.m >= 2) {
        let mut pool = vec![s.lambda[0].clone()];
        pool.extend_from_slice(&s.lambda[3..]);
        let ok = coprime_part(&gcd_all(&pool), &(&s.lambda[1] * &s.lambda[2])) > BigInt::one();
        r.record(ok, || at(s));
    }
    checks.push(r.finish());

    if canonical {
        let mut r = Recorder::new("parity-pattern", "λ_0, λ_2 odd; λ_1 and λ_3, …, λ_n even");
        let two = BigInt::from(2);
        for s in all() {
            let l = &s.lambda;
            let ok = !divides(&two, &l[0])
                && !divides(&two, &l[2])
                && divides(&two, &l[1])
                && l[3..].iter().all(|x| divides(&two, x));
            r.record(ok, || at(s));
        }
        checks.push(r.finish());
    }

    checks.push(fixed_divisor_check(&towers));
    checks.push(edge_prime_check(&towers));

    let mut r = Recorder::new(
        "weight-sum-relation",
        match variant {
            Variant::Canonical => "h = Σλ_i, h^(m) = (λ_1+λ_2) h^(m-1) / λ_0, h = y_{k_i} λ_i",
            Variant::Terminal => "h = Σλ_i, h^(m) = (λ_1+λ_2) h^(m-1) / λ_0, t h = (t+1) y_{k_i} λ_i",
        },
    );
    for t in &towers {
        for (i, s) in t.iter().enumerate() {
            let mut ok = s.h == s.lambda.iter().sum::<BigInt>() && s.sum_relation_holds();
            if i > 0 {
                let p = &t[i - 1];
                ok &= &s.h * &p.lambda[0] == p.edge_sum() * &p.h;
            }
            r.record(ok, || at(s));
        }
    }
    checks.push(r.finish());

    if canonical {
        let mut r = Recorder::new("edge-end-congruent-to-one", "y_b | λ_2 - 1 for b ≠ a");
        for s in all() {
            let x = &s.lambda[2] - 1;
            for b in (0..=n - 2).filter(|&b| b != s.a) {
                r.record(divides(&s.y[b], &x), || format!("{} b={b}", at(s)));
            }
        }
        checks.push(r.finish());

        let mut r = Recorder::new("apex-edge-product-bound", "m ≥ 1: λ_0 λ_1 / h < 1 / (2 t_{n-1})");
        for s in all().filter(|s| s.m >= 1) {
            let ok = BigInt::from(2) * &s.t * &s.lambda[0] * &s.lambda[1] < s.h;
            r.record(ok, || at(s));
        }
        checks.push(r.finish());

        let mut r = Recorder::new("apex-edge-end-congruence", "y_{k_i} | λ_2 - λ_0 for i ≥ 3");
        for s in all() {
            let x = &s.lambda[2] - &s.lambda[0];
            for &ki in &s.k {
                r.record(divides(&s.y[ki], &x), || format!("{} k={ki}", at(s)));
            }
        }
        checks.push(r.finish());

        let mut r = Recorder::new(
            "apex-fractional-part",
            "m ≥ 1: {κλ_0/h} = 1 - 1/(2t) for odd m and 1 - 1/(2t) - 1/y_a for even m",
        );
        for s in all().filter(|s| s.m >= 1) {
            let w = kappa_witness(s)?;
            let got = frac(BigRational::new(&w.kappa * &s.lambda[0], s.h.clone()));
            let mut want = BigRational::one() - BigRational::new(BigInt::one(), BigInt::from(2) * &s.t);
            if s.m % 2 == 0 {
                want -= BigRational::new(BigInt::one(), s.y[s.a].clone());
            }
            r.record(got == want, || format!("{}: got {got}, expected {want}", at(s)));
        }
        checks.push(r.finish());
    }

    if variant == Variant::Terminal && n >= 5 {
        checks.push(shared_prime_check(&towers));
    }

    let mut r = Recorder::new(
        "kappa-witness",
        match variant {
            Variant::Canonical => "m ≥ 1: κ = h - (λ_1+λ_2)^(m-1) lies in [2, h-2] and Σ{λ_i κ/h} > n-1",
            Variant::Terminal => "m ≥ 1: κ = h^(m) - h^(m-1) lies in [2, h-2] and Σ{λ_i κ/h} < 2",
        },
    );
    for s in all().filter(|s| s.m >= 1) {
        let w = kappa_witness(s)?;
        r.record(w.in_range && w.violates, || format!("{}: κ={} sum={}", at(s), w.kappa, w.sum));
    }
    checks.push(r.finish());

    Ok(AppendixReport { n, variant, m_max, checks })
}

fn sylvester_checks(count: usize) -> Vec<ClaimCheck> {
    let syl = sylvester_numbers(count);
    let mut out = Vec::new();

    let mut r = Recorder::new("sylvester-pairwise-coprime", "gcd(y_i, y_j) = 1 for i < j");
    for i in 0..count {
        for j in i + 1..count {
            r.record(syl.y[i].gcd(&syl.y[j]).is_one(), || format!("i={i} j={j}"));
        }
    }
    out.push(r.finish());

    let mut r = Recorder::new("sylvester-reciprocal-sum", "Σ_{i<k} 1/y_i = (t_k - 1)/t_k");
    let mut sum = BigRational::zero();
    for k in 1..count {
        sum += BigRational::new(BigInt::one(), syl.y[k - 1].clone());
        let want = BigRational::new(&syl.t[k] - 1, syl.t[k].clone());
        r.record(sum == want, || format!("k={k}"));
    }
    out.push(r.finish());

    let mut r = Recorder::new(
        "sylvester-cofactor-divisibility",
        "i < k: y_i | t_k/y_i + 1, y_i ∤ 2t_k/y_i + 1, and prime p | y_i divides t_k/y_j only for j ≠ i",
    );
    for k in 1..count {
        for i in 0..k {
            let q = &syl.t[k] / &syl.y[i];
            let mut ok = divides(&syl.y[i], &syl.t[k])
                && divides(&syl.y[i], &(&q + 1))
                && !divides(&syl.y[i], &(BigInt::from(2) * &q + 1));
            if k < 6 {
                for p in prime_factors(&syl.y[i]) {
                    ok &= !divides(&p, &q);
                    ok &= (0..k).filter(|&j| j != i).all(|j| divides(&p, &(&syl.t[k] / &syl.y[j])));
                }
            }
            r.record(ok, || format!("k={k} i={i}"));
        }
    }
    out.push(r.finish());
    out
}

/// For each zero-set position `i`, one divisor `k > 1` works at every `m`:
/// `k` misses `λ_0, λ_2, λ_i` and divides every other weight.
fn fixed_divisor_check(towers: &[Vec<TowerState>]) -> ClaimCheck {
    let mut r = Recorder::new(
        "fixed-divisor-per-zero-vertex",
        "each i ≥ 3 has k > 1 missing λ_0, λ_2, λ_i and dividing the rest, for all m",
    );
    for t in towers {
        let base = &t[0];
        for (j, &ki) in base.k.iter().enumerate() {
            let i = j + 3;
            let yk = &base.y[ki];
            let candidates = if yk == &BigInt::from(2) {
                vec![BigInt::from(2), BigInt::from(4)]
            } else {
                prime_factors(yk)
            };
            let works = |k: &BigInt| {
                t.iter().all(|s| {
                    s.lambda.iter().enumerate().all(|(idx, l)| {
                        let should_divide = !matches!(idx, 0 | 2) && idx != i;
                        divides(k, l) == should_divide
                    })
                })
            };
            r.record(candidates.iter().any(works), || format!("a={} i={i}", base.a));
        }
    }
    r.finish()
}

/// Some prime divides `λ_1` (constant along the tower) but never `λ_0 + λ_2`.
fn edge_prime_check(towers: &[Vec<TowerState>]) -> ClaimCheck {
    let mut r = Recorder::new(
        "prime-divides-fixed-edge-weight",
        "some prime divides λ_1 but not λ_0 + λ_2, for all m",
    );
    for t in towers {
        let base = &t[0];
        let candidates: Vec<BigInt> = (0..base.y.len())
            .filter(|&b| b != base.a)
            .flat_map(|b| prime_factors(&base.y[b]))
            .filter(|p| p != &BigInt::from(2))
            .collect();
        let works = |p: &BigInt| {
            t.iter().all(|s| divides(p, &s.lambda[1]) && !divides(p, &(&s.lambda[0] + &s.lambda[2])))
        };
        r.record(candidates.iter().any(works), || format!("a={}", base.a));
    }
    r.finish()
}

/// Terminal towers with `n ≥ 5`: for distinct zero-set positions `i, j`, a
/// prime divides `λ_1, λ_i, λ_j` but not `λ_0` or `λ_2`, for all `m`.
fn shared_prime_check(towers: &[Vec<TowerState>]) -> ClaimCheck {
    let mut r = Recorder::new(
        "shared-prime-for-zero-pairs",
        "i ≠ j ≥ 3: a prime divides λ_1, λ_i, λ_j but not λ_0, λ_2, for all m",
    );
    for t in towers {
        let base = &t[0];
        let len = base.k.len();
        for ji in 0..len {
            for jj in ji + 1..len {
                let (i, j) = (ji + 3, jj + 3);
                let candidates: Vec<BigInt> = (0..base.y.len())
                    .filter(|&l| l != base.a && l != base.k[ji] && l != base.k[jj])
                    .flat_map(|l| prime_factors(&base.y[l]))
                    .collect();
                let works = |p: &BigInt| {
                    t.iter().all(|s| {
                        let l = &s.lambda;
                        divides(p, &l[1])
                            && divides(p, &l[i])
                            && divides(p, &l[j])
                            && !divides(p, &l[0])
                            && !divides(p, &l[2])
                    })
                };
                r.record(candidates.iter().any(works), || format!("a={} i={i} j={j}", base.a));
            }
        }
    }
    r.finish()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn report(n: usize, v: Variant, m: usize) -> AppendixReport {
        verify_appendix_claims(n, v, m).unwrap()
    }

    #[test]
    fn canonical_four_passes() {
        let r = report(4, Variant::Canonical, 3);
        assert!(r.all_passed(), "{r}");
        assert!(r.checks.iter().any(|c| c.name == "parity-pattern"));
        assert!(r.checks.iter().all(|c| c.instances > 0), "{r}");
    }

    #[test]
    fn terminal_five_passes() {
        let r = report(5, Variant::Terminal, 3);
        assert!(r.all_passed(), "{r}");
        assert!(r.checks.iter().any(|c| c.name == "shared-prime-for-zero-pairs"));
    }

    #[test]
    fn terminal_four_skips_pair_check() {
        let r = report(4, Variant::Terminal, 2);
        assert!(!r.checks.iter().any(|c| c.name == "shared-prime-for-zero-pairs"));
    }

    #[test]
    fn cofactor_divisibility_instance() {
        let s = sylvester_numbers(4);
        let q = &s.t[3] / &s.y[1];
        assert_eq!(&q + 1, BigInt::from(15));
        assert!(divides(&s.y[1], &(&q + 1)));
        assert_eq!(BigInt::from(2) * &q + 1, BigInt::from(29));
        assert!(!divides(&s.y[1], &(BigInt::from(2) * &q + 1)));
    }

    #[test]
    fn coprime_part_strips_shared_primes() {
        assert_eq!(coprime_part(&BigInt::from(60), &BigInt::from(4)), BigInt::from(15));
        assert_eq!(coprime_part(&BigInt::from(8), &BigInt::from(6)), BigInt::one());
    }

    #[test]
    fn rejects_unsupported_sizes() {
        assert!(verify_appendix_claims(3, Variant::Canonical, 2).is_err());
        assert!(verify_appendix_claims(4, Variant::Canonical, 5).is_err());
    }

    #[test]
    fn broken_claim_is_reported() {
        let mut r = Recorder::new("x", "y");
        r.record(true, || "first".into());
        r.record(false, || "second".into());
        r.record(false, || "third".into());
        let c = r.finish();
        assert_eq!(c.instances, 3);
        assert_eq!(c.counterexample.as_deref(), Some("second"));
    }
}
