//! Corpus-wide property suites: mutation invariants, classifier agreement
//! and the Sylvester tower claims.

use std::fmt;

use num_bigint::BigInt;
use num_traits::One;

use crate::error::Result;
use crate::mutation::{find_simplex_mutations, inverse_move, mutate_simplex, predict_weights};
use crate::simplex::{degree, dual_lattice_point_count, weights_of, FanoSimplex, WeightSystem};
use crate::singularity::{classify_polytope, classify_weights};
use crate::sylvester::{verify_appendix_claims, ClaimCheck, Variant};

/// Per-check instance counts with the first failure of each.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SuiteReport {
    pub title: String,
    pub checks: Vec<ClaimCheck>,
}

impl SuiteReport {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(ClaimCheck::passed)
    }
}

impl fmt::Display for SuiteReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{}", self.title)?;
        for c in &self.checks {
            match &c.counterexample {
                None => writeln!(f, "PASS {:<36} {:>6} instances  {}", c.name, c.instances, c.statement)?,
                Some(bad) => writeln!(f, "FAIL {:<36} {}  {}", c.name, bad, c.statement)?,
            }
        }
        Ok(())
    }
}

struct Tally(ClaimCheck);

impl Tally {
    fn new(name: &str, statement: &str) -> Self {
        Tally(ClaimCheck {
            name: name.into(),
            statement: statement.into(),
            instances: 0,
            counterexample: None,
        })
    }

    fn record(&mut self, ok: bool, context: impl FnOnce() -> String) {
        self.0.instances += 1;
        if !ok && self.0.counterexample.is_none() {
            self.0.counterexample = Some(context());
        }
    }
}

fn describe(p: &FanoSimplex) -> String {
    let verts: Vec<String> = p.vertices().iter().map(ToString::to_string).collect();
    format!("[{}]", verts.join(","))
}

/// Degree, weight prediction, multiplicity relation, edge-only
/// multiplicity-preserving moves, dual point counts and exact inverses over
/// every move of every corpus simplex.
pub fn mutation_suite(corpus: &[FanoSimplex]) -> Result<SuiteReport> {
    let mut deg = Tally::new("degree-invariance", "degree(P) = degree(Q) for every executed move");
    let mut weights = Tally::new(
        "weight-prediction",
        "non-trivial moves: reduced predicted weights = weights_of(Q), positionally",
    );
    let mut mult = Tally::new(
        "multiplicity-relation",
        "non-trivial moves: mult(P)/mult(Q) = λ_0^(k-1) / (Σ^(k-2) d)",
    );
    let mut edge = Tally::new(
        "preserving-moves-are-edges",
        "non-trivial moves with mult(P) = mult(Q) have two min-face vertices",
    );
    let mut dual = Tally::new("dual-count-invariance", "|kP* ∩ M| = |kQ* ∩ M| for k = 1, 2, 3");
    let mut inverse = Tally::new("inverse-move", "mutating Q back gives P exactly");
    let mut trivial = Tally::new("trivial-moves-keep-weights", "trivial moves keep the weight multiset");
    for p in corpus {
        let p_counts: Vec<u128> = (1..=3).map(|k| dual_lattice_point_count(p, k)).collect::<Result<_>>()?;
        for mv in find_simplex_mutations(p) {
            let q = mutate_simplex(p, &mv)?;
            let ctx = || format!("{} apex={} min_face={:?}", describe(p), mv.apex, mv.min_face);
            deg.record(degree(p.weight_system()) == degree(q.weight_system()), ctx);
            let back = mutate_simplex(&q, &inverse_move(&q, &mv))?;
            inverse.record(&back == p, ctx);
            let q_counts: Vec<u128> =
                (1..=3).map(|k| dual_lattice_point_count(&q, k)).collect::<Result<_>>()?;
            dual.record(p_counts == q_counts, ctx);
            if mv.trivial {
                trivial.record(p.weight_system().same_multiset(q.weight_system()), ctx);
                continue;
            }
            let pred = predict_weights(p.weight_system(), mv.apex, &mv.min_face, &mv.zero_set)?;
            weights.record(pred.reduced() == weights_of(&q).weights(), ctx);
            mult.record(pred.multiplicity_relation_holds(p.multiplicity(), q.multiplicity()), ctx);
            if p.multiplicity() == q.multiplicity() {
                edge.record(mv.k() == 2, ctx);
            }
        }
    }
    let mut corpus_size = Tally::new("corpus", "Fano simplices examined");
    corpus_size.0.instances = corpus.len();
    Ok(SuiteReport {
        title: format!("mutation suite over {} simplices", corpus.len()),
        checks: vec![corpus_size.0, deg.0, weights.0, mult.0, edge.0, dual.0, inverse.0, trivial.0],
    })
}

/// Agreement of the lattice-point and weight-side classifiers on every
/// multiplicity-1 corpus simplex with `h ≤ max_h`, plus fixed reference cases.
pub fn singularity_suite(corpus: &[FanoSimplex], max_h: u64) -> Result<SuiteReport> {
    let mut agree = Tally::new(
        "classifier-agreement",
        "classify_polytope and classify_weights agree on canonical and terminal",
    );
    let mut implication = Tally::new("terminal-implies-canonical", "terminal ⇒ canonical");
    for p in corpus {
        if !p.multiplicity().is_one() || p.weight_system().sum() > BigInt::from(max_h) {
            continue;
        }
        let geo = classify_polytope(p)?;
        let wts = classify_weights(p.weight_system(), max_h)?;
        agree.record(geo.canonical == wts.canonical && geo.terminal == wts.terminal, || describe(p));
        implication.record(!geo.terminal || geo.canonical, || describe(p));
    }
    let mut reference = Tally::new(
        "reference-spaces",
        "P(1,1,6,14,21) terminal; P(1,1,1,3) and P(1,1,4,6) canonical and Gorenstein",
    );
    let cases: [(&[u64], bool); 3] =
        [(&[1, 1, 6, 14, 21], true), (&[1, 1, 1, 3], false), (&[1, 1, 4, 6], false)];
    for (w, want_terminal) in cases {
        let ws = WeightSystem::from_u64(w, 1)?;
        let p = crate::simplex::simplex_from_weights(&ws)?;
        let r = classify_polytope(&p)?;
        let ok = if want_terminal { r.terminal } else { r.canonical && r.gorenstein };
        reference.record(ok, || ws.to_string());
    }
    Ok(SuiteReport {
        title: format!("singularity suite over {} simplices (h ≤ {max_h})", corpus.len()),
        checks: vec![agree.0, implication.0, reference.0],
    })
}

/// The tower claims for both variants (terminal only from `n = 4`).
pub fn appendix_suite(n: usize, m_max: usize) -> Result<SuiteReport> {
    let mut checks = Vec::new();
    for variant in [Variant::Canonical, Variant::Terminal] {
        let report = verify_appendix_claims(n, variant, m_max)?;
        for mut c in report.checks {
            c.name = format!("{variant}/{}", c.name);
            checks.push(c);
        }
    }
    Ok(SuiteReport { title: format!("tower claims, n={n}, m<={m_max}"), checks })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::{fixed_examples, generate_corpus, CorpusConfig};

    #[test]
    fn mutation_suite_on_fixed_examples() {
        let r = mutation_suite(&fixed_examples()).unwrap();
        assert!(r.all_passed(), "{r}");
        assert!(r.checks.iter().find(|c| c.name == "weight-prediction").unwrap().instances > 0);
    }

    #[test]
    fn singularity_suite_on_small_corpus() {
        let corpus = generate_corpus(&CorpusConfig { per_dim: 10, ..CorpusConfig::default() });
        let r = singularity_suite(&corpus, 10_000).unwrap();
        assert!(r.all_passed(), "{r}");
    }

    #[test]
    fn appendix_suite_small() {
        let r = appendix_suite(4, 2).unwrap();
        assert!(r.all_passed(), "{r}");
        assert!(r.checks.iter().any(|c| c.name.starts_with("terminal/")));
    }

    #[test]
    fn report_lists_failures() {
        let mut t = Tally::new("x", "y");
        t.record(false, || "bad".into());
        let r = SuiteReport { title: "t".into(), checks: vec![t.0] };
        assert!(!r.all_passed());
        assert!(r.to_string().contains("FAIL x"));
    }
}
