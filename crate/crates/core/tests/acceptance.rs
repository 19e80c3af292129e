//! One PASS/FAIL line per acceptance criterion; exits non-zero if any fail.

use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use simplex_mutator::corpus::{generate_corpus, CorpusConfig};
use simplex_mutator::lattice::gcd_all;
use simplex_mutator::mutation::{find_simplex_mutations, mutate, mutate_simplex, validate_factor};
use simplex_mutator::polytope::LatticePolytope;
use simplex_mutator::simplex::{degree, simplex_from_weights, weights_of};
use simplex_mutator::sylvester::{
    build_mutation_tree, realize_tower_step, sylvester_numbers, tower, verify_appendix_claims, Variant,
};
use simplex_mutator::verify::{mutation_suite, singularity_suite, SuiteReport};
use simplex_mutator::{DualVector, FanoSimplex, LatticeVector, WeightSystem};

/// Per-depth node counts of the published four-dimensional terminal tree, counted by hand.
const DRAWN_DEPTH_COUNTS: [usize; 4] = [1, 3, 7, 14];

type Outcome = Result<String, String>;

fn lv(c: &[i64]) -> LatticeVector {
    LatticeVector::from_i64(c)
}

fn sorted(mut v: Vec<LatticeVector>) -> Vec<LatticeVector> {
    v.sort();
    v
}

fn weights(ws: &WeightSystem) -> String {
    ws.normalized().to_string()
}

fn within(limit: Duration, start: Instant) -> Result<(), String> {
    let took = start.elapsed();
    if took > limit {
        return Err(format!("took {took:.2?}, limit {limit:?}"));
    }
    Ok(())
}

fn suite_check(report: &SuiteReport, name: &str) -> Result<usize, String> {
    let c = report
        .checks
        .iter()
        .find(|c| c.name == name)
        .ok_or_else(|| format!("suite has no check {name}"))?;
    match &c.counterexample {
        None => Ok(c.instances),
        Some(bad) => Err(format!("{name} failed at {bad}")),
    }
}

fn first_mutation() -> Outcome {
    let start = Instant::now();
    let p = FanoSimplex::from_i64(&[&[1, 0, 0], &[0, 1, 0], &[0, 0, 1], &[-1, -1, -3]]).map_err(|e| e.to_string())?;
    let poly = LatticePolytope::from(&p);
    let w = DualVector::from_i64(&[-1, 2, 0]);
    let factor = validate_factor(&poly, &w, &[lv(&[0, 0, 0]), lv(&[2, 1, 3])]).map_err(|e| e.to_string())?;
    let q = mutate(&factor).map_err(|e| e.to_string())?;
    let want = sorted(vec![lv(&[-1, -1, -3]), lv(&[0, 0, 1]), lv(&[0, 1, 0]), lv(&[4, 3, 6])]);
    if sorted(q.vertices().to_vec()) != want {
        return Err(format!("mutated vertices {:?}", q.vertices()));
    }
    let qs = simplex_mutator::simplex::validate_fano(q.vertices().to_vec()).map_err(|e| e.to_string())?;
    if weights(&weights_of(&qs)) != "1,1,4,6" {
        return Err(format!("weights {}", weights(&weights_of(&qs))));
    }
    within(Duration::from_secs(1), start)?;
    Ok(format!("Q has weights 1,1,4,6 in {:.2?}", start.elapsed()))
}

fn second_mutation() -> Outcome {
    let p = FanoSimplex::from_i64(&[&[1, -1, 0], &[-2, -2, -1], &[-2, -2, 1], &[0, 1, 0]]).map_err(|e| e.to_string())?;
    if weights(p.weight_system()) != "1,1,4,8" {
        return Err("P is not P(1,1,4,8)".into());
    }
    let w = DualVector::from_i64(&[1, 0, 0]);
    let mv = find_simplex_mutations(&p)
        .into_iter()
        .find(|m| m.w == w)
        .ok_or("no move with w = (1,0,0)")?;
    let q = mutate_simplex(&p, &mv).map_err(|e| e.to_string())?;
    let want = vec![lv(&[1, -1, 0]), lv(&[-2, -2, -1]), lv(&[1, -1, 1]), lv(&[0, 1, 0])];
    if q.vertices() != want.as_slice() {
        return Err(format!("Q = {:?}", q.vertices()));
    }
    if weights(&weights_of(&q)) != "1,1,1,4" {
        return Err(format!("weights {}", weights(&weights_of(&q))));
    }
    Ok("Q matches exactly, weights 1,1,1,4".into())
}

fn degree_invariance(report: &SuiteReport, corpus_len: usize, elapsed: Duration) -> Outcome {
    let d1 = degree(&WeightSystem::from_u64(&[1, 1, 1, 3], 1).map_err(|e| e.to_string())?);
    let d2 = degree(&WeightSystem::from_u64(&[1, 1, 4, 6], 1).map_err(|e| e.to_string())?);
    let seventy_two = BigRational::from_integer(BigInt::from(72));
    if d1 != seventy_two || d2 != seventy_two {
        return Err(format!("degrees {d1} and {d2}"));
    }
    if corpus_len < 200 {
        return Err(format!("corpus has only {corpus_len} simplices"));
    }
    if elapsed > Duration::from_secs(120) {
        return Err(format!("corpus suite took {elapsed:.2?}"));
    }
    let moves = suite_check(report, "degree-invariance")?;
    Ok(format!("72 = 72; {moves} mutations over {corpus_len} simplices in {elapsed:.2?}"))
}

fn weight_prediction(report: &SuiteReport) -> Outcome {
    let a = suite_check(report, "weight-prediction")?;
    let b = suite_check(report, "multiplicity-relation")?;
    Ok(format!("{a} non-trivial moves, {b} multiplicity relations"))
}

fn edge_only(report: &SuiteReport) -> Outcome {
    let a = suite_check(report, "preserving-moves-are-edges")?;
    Ok(format!("{a} multiplicity-preserving non-trivial moves, all over edges"))
}

fn dual_counts(report: &SuiteReport) -> Outcome {
    let a = suite_check(report, "dual-count-invariance")?;
    Ok(format!("{a} mutations, k = 1..3"))
}

fn singularities(corpus: &[FanoSimplex]) -> Outcome {
    let report = singularity_suite(corpus, 10_000).map_err(|e| e.to_string())?;
    let a = suite_check(&report, "classifier-agreement")?;
    suite_check(&report, "reference-spaces")?;
    Ok(format!("{a} multiplicity-1 simplices agree; reference spaces classified"))
}

fn appendix() -> Outcome {
    let start = Instant::now();
    let mut total = 0;
    for variant in [Variant::Canonical, Variant::Terminal] {
        for n in [4, 5] {
            let r = verify_appendix_claims(n, variant, 3).map_err(|e| e.to_string())?;
            if let Some(c) = r.checks.iter().find(|c| !c.passed()) {
                return Err(format!("{variant} n={n}: {} failed at {:?}", c.name, c.counterexample));
            }
            total += r.checks.iter().map(|c| c.instances).sum::<usize>();
        }
    }
    within(Duration::from_secs(300), start)?;
    Ok(format!("{total} claim instances in {:.2?}", start.elapsed()))
}

fn tower_consistency() -> Outcome {
    let mut steps = 0;
    for (n, variant) in [
        (3, Variant::Canonical),
        (4, Variant::Canonical),
        (5, Variant::Canonical),
        (4, Variant::Terminal),
        (5, Variant::Terminal),
    ] {
        for a in 0..=n - 2 {
            let states = tower(n, variant, a, 2).map_err(|e| e.to_string())?;
            let mut p = simplex_from_weights(&states[0].weight_system()).map_err(|e| e.to_string())?;
            for next in &states[1..] {
                p = realize_tower_step(&p).map_err(|e| e.to_string())?;
                if weights_of(&p).weights() != next.lambda.as_slice() {
                    return Err(format!("{variant} n={n} a={a} m={}", next.m));
                }
                steps += 1;
            }
        }
    }
    Ok(format!("{steps} tower steps match the mutated simplices"))
}

fn sylvester_identities() -> Outcome {
    let s = sylvester_numbers(8);
    for i in 0..8 {
        for j in i + 1..8 {
            if !gcd_all(&[s.y[i].clone(), s.y[j].clone()]).is_one() {
                return Err(format!("y_{i} and y_{j} share a factor"));
            }
        }
    }
    let mut sum = BigRational::zero();
    for n in 1..8 {
        sum += BigRational::new(BigInt::one(), s.y[n - 1].clone());
        if sum != BigRational::new(&s.t[n] - 1, s.t[n].clone()) {
            return Err(format!("reciprocal sum fails at n={n}"));
        }
    }
    Ok("8 terms pairwise coprime, reciprocal sums exact".into())
}

fn terminal_four_tree() -> Outcome {
    let start = Instant::now();
    let g = build_mutation_tree(4, Variant::Terminal, 3).map_err(|e| e.to_string())?;
    let dot = g.to_dot();
    let path = std::path::Path::new(env!("CARGO_TARGET_TMPDIR")).join("terminal-4-depth-3.dot");
    std::fs::write(&path, &dot).map_err(|e| e.to_string())?;
    if !dot.contains("label=\"1,1,6,14,21\"") {
        return Err("root label missing from DOT".into());
    }
    within(Duration::from_secs(600), start)?;
    let counts = g.depth_counts();
    if counts != DRAWN_DEPTH_COUNTS {
        return Err(format!(
            "computed per-depth counts {counts:?} differ from the drawn tree {DRAWN_DEPTH_COUNTS:?}"
        ));
    }
    Ok(format!("counts {counts:?}, DOT at {}", path.display()))
}

fn main() {
    let corpus = generate_corpus(&CorpusConfig::default());
    let start = Instant::now();
    let suite = mutation_suite(&corpus);
    let suite_time = start.elapsed();

    let mut results: Vec<(usize, &str, Outcome)> = Vec::new();
    results.push((1, "P(1,1,1,3) to P(1,1,4,6)", first_mutation()));
    results.push((2, "P(1,1,4,8) to P(1,1,1,4)", second_mutation()));
    match &suite {
        Ok(report) => {
            results.push((3, "degree invariance", degree_invariance(report, corpus.len(), suite_time)));
            results.push((4, "weight prediction", weight_prediction(report)));
            results.push((5, "preserving moves are edges", edge_only(report)));
            results.push((6, "dual point counts", dual_counts(report)));
        }
        Err(e) => {
            for (i, name) in [(3, "degree invariance"), (4, "weight prediction"), (5, "preserving moves are edges"), (6, "dual point counts")] {
                results.push((i, name, Err(format!("mutation suite errored: {e}"))));
            }
        }
    }
    results.push((7, "singularity cross-validation", singularities(&corpus)));
    results.push((8, "tower claims", appendix()));
    results.push((9, "tower steps are mutations", tower_consistency()));
    results.push((10, "Sylvester identities", sylvester_identities()));
    results.push((11, "four-dimensional terminal tree", terminal_four_tree()));

    let mut failed = 0;
    for (i, name, outcome) in &results {
        match outcome {
            Ok(msg) => println!("PASS criterion {i:>2} {name}: {msg}"),
            Err(msg) => {
                failed += 1;
                println!("FAIL criterion {i:>2} {name}: {msg}");
            }
        }
    }
    println!("{} of {} criteria passed", results.len() - failed, results.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
