use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::{check_dim, sylvester_numbers, Variant};
use crate::error::{Error, Result};
use crate::mutation::{move_with_face, mutate_simplex, MutationMove};
use crate::simplex::{FanoSimplex, WeightSystem};
use crate::singularity::sum_of_fractional_parts;

/// One node `λ^{(m,a)}` of a Sylvester tower.
///
/// Positions 0, 1 and 2 hold the apex and the edge of the next mutation;
/// positions 3.. hold `c t_{n-1} / y_{k_i}` scaled along the tower, where
/// `k_3 > k_4 > …` runs over `{0, …, n-2}` without `a`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TowerState {
    pub n: usize,
    pub variant: Variant,
    pub a: usize,
    pub m: usize,
    pub lambda: Vec<BigInt>,
    pub h: BigInt,
    /// `k_i` for positions `i = 3..=n`.
    pub k: Vec<usize>,
    /// `y_0, …, y_{n-2}`.
    pub y: Vec<BigInt>,
    /// `t_{n-1}`.
    pub t: BigInt,
    /// `λ_1 + λ_2` and `h` one step down the tower.
    pub prev_edge_sum: Option<BigInt>,
    pub prev_h: Option<BigInt>,
}

impl TowerState {
    pub fn base(n: usize, variant: Variant, a: usize) -> Result<Self> {
        check_dim(n, variant)?;
        if a > n - 2 {
            return Err(Error::OutOfRange(format!("tower index a={a} must be at most {}", n - 2)));
        }
        let syl = sylvester_numbers(n);
        let t = syl.t[n - 1].clone();
        let y: Vec<BigInt> = syl.y[..n - 1].to_vec();
        let top = variant.factor() * &t;
        let k: Vec<usize> = (0..=n - 2).rev().filter(|&i| i != a).collect();
        let mut lambda = vec![BigInt::one(), &top / &y[a], BigInt::one()];
        lambda.extend(k.iter().map(|&ki| &top / &y[ki]));
        let h = lambda.iter().sum();
        let state = TowerState {
            n,
            variant,
            a,
            m: 0,
            lambda,
            h,
            k,
            y,
            t,
            prev_edge_sum: None,
            prev_h: None,
        };
        state.check_sum_relation()?;
        Ok(state)
    }

    pub fn weight_system(&self) -> WeightSystem {
        WeightSystem::new(self.lambda.clone(), BigInt::one())
            .expect("tower weights are positive and reduced")
    }

    pub fn edge_sum(&self) -> BigInt {
        &self.lambda[1] + &self.lambda[2]
    }

    /// `h = y_{k_i} λ_i` for the canonical towers and
    /// `t_{n-1} h = (t_{n-1} + 1) y_{k_i} λ_i` for the terminal ones.
    pub fn sum_relation_holds(&self) -> bool {
        self.k.iter().enumerate().all(|(j, &ki)| {
            let rhs = &self.y[ki] * &self.lambda[j + 3];
            match self.variant {
                Variant::Canonical => self.h == rhs,
                Variant::Terminal => &self.t * &self.h == (&self.t + 1) * rhs,
            }
        })
    }

    fn check_sum_relation(&self) -> Result<()> {
        if self.h != self.lambda.iter().sum::<BigInt>() {
            return Err(Error::Invariant("tower weight sum is out of date".into()));
        }
        if !self.sum_relation_holds() {
            return Err(Error::Invariant(format!(
                "weight sum relation fails at m={} a={}",
                self.m, self.a
            )));
        }
        Ok(())
    }
}

fn exact_div(num: BigInt, den: &BigInt) -> Result<BigInt> {
    let (q, r) = num.div_rem(den);
    if !r.is_zero() {
        return Err(Error::Invariant(format!("{num} is not divisible by {den}")));
    }
    Ok(q)
}

/// `λ^{(m+1,a)}`: the apex takes `λ_2`, `λ_1` stays, the edge end becomes
/// `(λ_1+λ_2)²/λ_0` and the rest scale by `(λ_1+λ_2)/λ_0`.
pub fn tower_step(state: &TowerState) -> Result<TowerState> {
    let l = &state.lambda;
    let s = state.edge_sum();
    let mut next = vec![l[2].clone(), l[1].clone(), exact_div(&s * &s, &l[0])?];
    for li in &l[3..] {
        next.push(exact_div(li * &s, &l[0])?);
    }
    let h = exact_div(&s * &state.h, &l[0])?;
    let out = TowerState {
        lambda: next,
        h,
        m: state.m + 1,
        prev_edge_sum: Some(s),
        prev_h: Some(state.h.clone()),
        ..state.clone()
    };
    out.check_sum_relation()?;
    Ok(out)
}

/// `λ^{(0,a)}, …, λ^{(m_max,a)}`.
pub fn tower(n: usize, variant: Variant, a: usize, m_max: usize) -> Result<Vec<TowerState>> {
    let mut states = vec![TowerState::base(n, variant, a)?];
    for _ in 0..m_max {
        let next = tower_step(states.last().expect("non-empty"))?;
        states.push(next);
    }
    Ok(states)
}

/// The `κ` at which a tower node fails the canonical (respectively terminal)
/// criterion, with the fractional-part sum it produces.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KappaWitness {
    pub kappa: BigInt,
    pub sum: BigRational,
    /// `2 ≤ κ ≤ h - 2`.
    pub in_range: bool,
    /// The sum exceeds `n - 1` (canonical) or is below 2 (terminal).
    pub violates: bool,
}

/// `κ = h^{(m)} - (λ_1+λ_2)^{(m-1)}` for canonical towers and
/// `κ = h^{(m)} - h^{(m-1)}` for terminal ones.
pub fn kappa_witness(state: &TowerState) -> Result<KappaWitness> {
    let (Some(edge), Some(prev_h)) = (&state.prev_edge_sum, &state.prev_h) else {
        return Err(Error::OutOfRange("κ witnesses need m ≥ 1".into()));
    };
    let kappa = match state.variant {
        Variant::Canonical => &state.h - edge,
        Variant::Terminal => &state.h - prev_h,
    };
    let sum = sum_of_fractional_parts(&state.lambda, &kappa);
    let in_range = kappa >= BigInt::from(2) && kappa <= &state.h - 2;
    let violates = match state.variant {
        Variant::Canonical => sum > BigRational::from_integer(BigInt::from(state.n - 1)),
        Variant::Terminal => sum < BigRational::from_integer(BigInt::from(2)),
    };
    Ok(KappaWitness { kappa, sum, in_range, violates })
}

/// The edge move realising one tower step on a simplex whose vertex order
/// matches the tower positions: apex 0, with vertex 2 fixed and vertex 1 moving.
pub fn tower_move(p: &FanoSimplex) -> Option<MutationMove> {
    move_with_face(p, 0, &[2, 1])
}

/// Applies [`tower_move`]; the result keeps the tower's vertex order.
pub fn realize_tower_step(p: &FanoSimplex) -> Result<FanoSimplex> {
    let mv = tower_move(p).ok_or_else(|| Error::InvalidMove("no edge move at vertex 0".into()))?;
    mutate_simplex(p, &mv)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mutation::predict_weights;
    use crate::simplex::{simplex_from_weights, weights_of};
    use crate::singularity::{classify_weights, classify_weights_at, DEFAULT_MAX_H};
    use proptest::prelude::*;

    fn ints(v: &[BigInt]) -> Vec<i64> {
        v.iter().map(|x| i64::try_from(x).unwrap()).collect()
    }

    #[test]
    fn base_weights() {
        let s = TowerState::base(3, Variant::Canonical, 1).unwrap();
        assert_eq!(ints(&s.lambda), vec![1, 4, 1, 6]);
        let s = TowerState::base(5, Variant::Terminal, 0).unwrap();
        assert_eq!(ints(&s.lambda), vec![1, 903, 1, 42, 258, 602]);
        assert_eq!(s.k, vec![3, 2, 1]);
        assert!(TowerState::base(4, Variant::Canonical, 3).is_err());
    }

    #[test]
    fn every_base_is_the_maximal_space() {
        for (n, v) in [(3, Variant::Canonical), (4, Variant::Canonical), (5, Variant::Terminal)] {
            let max = super::super::max_degree_wps(n, v).unwrap();
            for a in 0..=n - 2 {
                let s = TowerState::base(n, v, a).unwrap();
                assert!(s.weight_system().same_multiset(&max));
            }
        }
    }

    #[test]
    fn first_canonical_step() {
        let s = TowerState::base(3, Variant::Canonical, 1).unwrap();
        let next = tower_step(&s).unwrap();
        assert_eq!(ints(&next.lambda), vec![1, 4, 25, 30]);
        assert_eq!(next.h, BigInt::from(60));
        assert_eq!(next.m, 1);
    }

    #[test]
    fn terminal_sum_relation_uses_t_plus_one() {
        let s = TowerState::base(4, Variant::Terminal, 2).unwrap();
        assert_eq!(s.h, BigInt::from(43));
        assert_eq!(&s.y[s.k[0]] * &s.lambda[3], BigInt::from(42));
        assert!(s.sum_relation_holds());
    }

    #[test]
    fn step_matches_weight_prediction_with_apex_divisor() {
        for s in tower(4, Variant::Canonical, 0, 3).unwrap().windows(2) {
            let pred = predict_weights(&s[0].weight_system(), 0, &[2, 1], &[3, 4]).unwrap();
            assert_eq!(pred.d, s[0].lambda[0]);
            assert_eq!(pred.reduced(), s[1].lambda);
        }
    }

    #[test]
    fn realization_follows_tower() {
        for (n, v) in [
            (3, Variant::Canonical),
            (4, Variant::Canonical),
            (4, Variant::Terminal),
            (5, Variant::Terminal),
        ] {
            for a in 0..=n - 2 {
                let states = tower(n, v, a, 2).unwrap();
                let mut p = simplex_from_weights(&states[0].weight_system()).unwrap();
                for next in &states[1..] {
                    let mv = tower_move(&p).unwrap();
                    assert!(!mv.trivial);
                    assert_eq!(mv.k(), 2);
                    p = realize_tower_step(&p).unwrap();
                    assert_eq!(weights_of(&p).weights(), next.lambda.as_slice());
                    assert!(p.multiplicity().is_one());
                }
            }
        }
    }

    #[test]
    fn kappa_needs_a_step() {
        let s = TowerState::base(4, Variant::Canonical, 0).unwrap();
        assert!(matches!(kappa_witness(&s), Err(Error::OutOfRange(_))));
    }

    #[test]
    fn canonical_witness_at_first_step() {
        for a in 0..=2 {
            let s = tower_step(&TowerState::base(4, Variant::Canonical, a).unwrap()).unwrap();
            let w = kappa_witness(&s).unwrap();
            assert!(w.in_range && w.violates);
            assert!(w.sum > BigRational::from_integer(BigInt::from(3)));
            let report = classify_weights_at(&s.weight_system(), std::slice::from_ref(&w.kappa)).unwrap();
            assert!(!report.canonical);
        }
    }

    #[test]
    fn terminal_witness_has_vanishing_tail() {
        for a in 0..=3 {
            let s = tower_step(&TowerState::base(5, Variant::Terminal, a).unwrap()).unwrap();
            let w = kappa_witness(&s).unwrap();
            assert!(w.in_range && w.violates);
            for i in 2..s.lambda.len() {
                assert!((&s.lambda[i] * &w.kappa % &s.h).is_zero());
            }
        }
    }

    #[test]
    fn base_is_canonical_or_terminal() {
        let s = TowerState::base(4, Variant::Canonical, 0).unwrap();
        assert!(classify_weights(&s.weight_system(), DEFAULT_MAX_H).unwrap().canonical);
        let s = TowerState::base(5, Variant::Terminal, 0).unwrap();
        assert!(classify_weights(&s.weight_system(), DEFAULT_MAX_H).unwrap().terminal);
    }

    #[test]
    fn exhaustive_scan_agrees_with_witness_on_small_nodes() {
        let s = tower_step(&TowerState::base(3, Variant::Canonical, 1).unwrap()).unwrap();
        let report = classify_weights(&s.weight_system(), DEFAULT_MAX_H).unwrap();
        assert!(!report.canonical);
        let s = tower_step(&TowerState::base(4, Variant::Terminal, 0).unwrap()).unwrap();
        let report = classify_weights(&s.weight_system(), DEFAULT_MAX_H).unwrap();
        assert!(!report.terminal);
    }

    fn variant_strategy() -> impl Strategy<Value = Variant> {
        prop_oneof![Just(Variant::Canonical), Just(Variant::Terminal)]
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]

        #[test]
        fn tower_invariants(n in 4usize..=6, a_seed in 0usize..8, m_max in 1usize..=4, v in variant_strategy()) {
            let a = a_seed % (n - 1);
            let states = tower(n, v, a, m_max).unwrap();
            for pair in states.windows(2) {
                let (s, next) = (&pair[0], &pair[1]);
                prop_assert!(next.sum_relation_holds());
                prop_assert!(next.lambda[2] > s.lambda[2]);
                for i in 0..=n {
                    prop_assert!(next.lambda[i] >= s.lambda[i]);
                }
                let w = kappa_witness(next).unwrap();
                prop_assert!(w.in_range);
            }
        }
    }
}
