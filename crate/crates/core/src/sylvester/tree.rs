use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;

use num_bigint::BigInt;
use num_traits::One;

use super::tower::tower;
use super::{max_degree_wps, Variant};
use crate::error::{Error, Result};
use crate::mutation::{find_simplex_mutations, mutate_simplex, predict_weights};
use crate::simplex::{simplex_equivalent, simplex_from_weights, FanoSimplex, WeightSystem};
use crate::singularity::{classify_weights, SingularityReport};

/// Deepest tree [`build_mutation_tree`] will grow.
pub const MAX_TREE_DEPTH: usize = 4;

#[derive(Clone, Debug)]
pub struct GraphNode {
    pub id: usize,
    pub weights: WeightSystem,
    /// Breadth-first distance from the root.
    pub depth: usize,
    pub simplex: FanoSimplex,
    pub singularity: Option<SingularityReport>,
}

impl GraphNode {
    pub fn label(&self) -> String {
        self.weights.normalized().to_string()
    }
}

/// An undirected edge, stored with `from < to`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct GraphEdge {
    pub from: usize,
    pub to: usize,
    /// Vertices on the min-face of the first move found between the two nodes.
    pub k: usize,
    pub d: BigInt,
}

/// Weighted projective spaces reachable from the maximal-degree space by
/// non-trivial mutations, keyed by sorted weights and multiplicity.
#[derive(Clone, Debug)]
pub struct MutationGraph {
    pub n: usize,
    pub variant: Variant,
    pub max_depth: usize,
    pub nodes: Vec<GraphNode>,
    pub edges: Vec<GraphEdge>,
}

type NodeKey = (Vec<BigInt>, BigInt);

fn key_of(ws: &WeightSystem) -> NodeKey {
    (ws.sorted(), ws.multiplicity().clone())
}

/// Grows the graph breadth first from `simplex_from_weights(max_degree_wps(n))`,
/// keeping only mutations whose target has multiplicity 1.
///
/// Where every tower node is known to have exactly its two tower neighbours
/// (canonical with `n ≥ 4`, terminal with `n ≥ 5`) the result is checked
/// against the towers and a mismatch is an error.
pub fn build_mutation_tree(n: usize, variant: Variant, depth: usize) -> Result<MutationGraph> {
    if depth > MAX_TREE_DEPTH {
        return Err(Error::TooLarge(format!("depth {depth} exceeds {MAX_TREE_DEPTH}")));
    }
    let root_ws = max_degree_wps(n, variant)?;
    let root = simplex_from_weights(&root_ws)?;
    let mut graph = MutationGraph { n, variant, max_depth: depth, nodes: Vec::new(), edges: Vec::new() };
    let mut index: BTreeMap<NodeKey, usize> = BTreeMap::new();
    index.insert(key_of(&root_ws), 0);
    graph.nodes.push(GraphNode { id: 0, weights: root_ws, depth: 0, simplex: root, singularity: None });
    let mut edges: BTreeSet<GraphEdge> = BTreeSet::new();
    let mut linked: BTreeSet<(usize, usize)> = BTreeSet::new();

    let mut frontier = vec![0usize];
    for level in 0..depth {
        let mut next = Vec::new();
        for &id in &frontier {
            let p = graph.nodes[id].simplex.clone();
            for mv in find_simplex_mutations(&p).into_iter().filter(|m| !m.trivial) {
                let q = mutate_simplex(&p, &mv)?;
                if !q.multiplicity().is_one() {
                    continue;
                }
                let ws = q.weight_system().clone();
                let target = match index.get(&key_of(&ws)) {
                    Some(&other) => {
                        if !simplex_equivalent(&graph.nodes[other].simplex, &q) {
                            return Err(Error::Invariant(format!(
                                "inequivalent simplices share weights {}",
                                ws.normalized()
                            )));
                        }
                        other
                    }
                    None => {
                        let new_id = graph.nodes.len();
                        index.insert(key_of(&ws), new_id);
                        graph.nodes.push(GraphNode {
                            id: new_id,
                            weights: ws,
                            depth: level + 1,
                            simplex: q,
                            singularity: None,
                        });
                        next.push(new_id);
                        new_id
                    }
                };
                if target == id {
                    continue;
                }
                let (from, to) = (id.min(target), id.max(target));
                if linked.insert((from, to)) {
                    let d = predict_weights(p.weight_system(), mv.apex, &mv.min_face, &mv.zero_set)?.d;
                    edges.insert(GraphEdge { from, to, k: mv.k(), d });
                }
            }
        }
        frontier = next;
    }
    graph.edges = edges.into_iter().collect();

    let chains_expected = match variant {
        Variant::Canonical => n >= 4,
        Variant::Terminal => n >= 5,
    };
    if chains_expected && !graph.is_star_of_chains()? {
        return Err(Error::Invariant(format!(
            "{variant} n={n} graph is not the star of tower chains"
        )));
    }
    Ok(graph)
}

impl MutationGraph {
    /// Node counts at depth `0, 1, …, max_depth`.
    pub fn depth_counts(&self) -> Vec<usize> {
        let mut counts = vec![0; self.max_depth + 1];
        for node in &self.nodes {
            counts[node.depth] += 1;
        }
        counts
    }

    pub fn neighbours(&self, id: usize) -> Vec<usize> {
        let mut out: Vec<usize> = self
            .edges
            .iter()
            .filter_map(|e| {
                if e.from == id {
                    Some(e.to)
                } else if e.to == id {
                    Some(e.from)
                } else {
                    None
                }
            })
            .collect();
        out.sort_unstable();
        out
    }

    /// Whether depth `m` holds exactly the tower nodes `λ^{(m,a)}`, one per
    /// `a`, and each is joined only to its predecessor and successor.
    pub fn is_star_of_chains(&self) -> Result<bool> {
        let n = self.n;
        let towers: Vec<_> = (0..=n - 2)
            .map(|a| tower(n, self.variant, a, self.max_depth))
            .collect::<Result<_>>()?;
        for m in 0..=self.max_depth {
            let mut want: Vec<Vec<BigInt>> =
                towers.iter().map(|t| t[m].weight_system().sorted()).collect();
            want.sort();
            want.dedup();
            let mut got: Vec<Vec<BigInt>> =
                self.nodes.iter().filter(|x| x.depth == m).map(|x| x.weights.sorted()).collect();
            got.sort();
            if got != want {
                return Ok(false);
            }
        }
        for node in &self.nodes {
            let nb = self.neighbours(node.id);
            let down = nb.iter().filter(|&&j| self.nodes[j].depth + 1 == node.depth).count();
            let up = nb.iter().filter(|&&j| self.nodes[j].depth == node.depth + 1).count();
            if nb.len() != down + up {
                return Ok(false);
            }
            let (want_down, want_up) = match node.depth {
                0 => (0, n - 1),
                d if d == self.max_depth => (1, 0),
                _ => (1, 1),
            };
            if down != want_down || (node.depth < self.max_depth && up != want_up) {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Classifies every node whose weight sum is at most `max_h`.
    pub fn annotate_singularities(&mut self, max_h: u64) -> Result<()> {
        for node in &mut self.nodes {
            if node.weights.sum() <= BigInt::from(max_h) {
                node.singularity = Some(classify_weights(&node.weights, max_h)?);
            }
        }
        Ok(())
    }

    /// Graphviz rendering; node labels are weight multisets, edge labels
    /// the min-face size and the weight divisor.
    pub fn to_dot(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "graph mutations {{");
        let _ = writeln!(out, "  // {} n={} depth={}", self.variant, self.n, self.max_depth);
        for node in &self.nodes {
            let _ = writeln!(out, "  n{} [label=\"{}\"];", node.id, node.label());
        }
        for e in &self.edges {
            let _ = writeln!(out, "  n{} -- n{} [label=\"k={} d={}\"];", e.from, e.to, e.k, e.d);
        }
        out.push_str("}\n");
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn labels_at(g: &MutationGraph, depth: usize) -> Vec<String> {
        let mut v: Vec<String> =
            g.nodes.iter().filter(|x| x.depth == depth).map(GraphNode::label).collect();
        v.sort();
        v
    }

    #[test]
    fn depth_limit() {
        assert!(matches!(
            build_mutation_tree(4, Variant::Terminal, 9),
            Err(Error::TooLarge(_))
        ));
    }

    #[test]
    fn canonical_three_reaches_the_other_maximal_space() {
        let g = build_mutation_tree(3, Variant::Canonical, 1).unwrap();
        assert_eq!(g.nodes[0].label(), "1,1,4,6");
        let children = labels_at(&g, 1);
        assert!(children.contains(&"1,1,1,3".to_string()), "{children:?}");
        assert!(children.contains(&"1,4,25,30".to_string()), "{children:?}");
        assert!(children.contains(&"1,6,28,49".to_string()), "{children:?}");
    }

    #[test]
    fn canonical_four_is_a_star_of_chains() {
        let g = build_mutation_tree(4, Variant::Canonical, 2).unwrap();
        assert_eq!(g.nodes[0].label(), "1,1,12,28,42");
        assert_eq!(g.depth_counts(), vec![1, 3, 3]);
        assert_eq!(g.neighbours(0).len(), 3);
        assert!(g.edges.iter().all(|e| e.k == 2));
    }

    #[test]
    fn terminal_five_is_a_star_of_chains() {
        let g = build_mutation_tree(5, Variant::Terminal, 2).unwrap();
        assert_eq!(g.nodes[0].label(), "1,1,42,258,602,903");
        assert_eq!(g.depth_counts(), vec![1, 4, 4]);
    }

    #[test]
    fn terminal_four_depth_three_counts() {
        let g = build_mutation_tree(4, Variant::Terminal, 3).unwrap();
        assert_eq!(g.nodes[0].label(), "1,1,6,14,21");
        assert_eq!(g.depth_counts(), vec![1, 3, 5, 8]);
        let mut grandchildren: Vec<usize> =
            g.neighbours(0).iter().map(|&c| g.neighbours(c).len() - 1).collect();
        grandchildren.sort_unstable();
        assert_eq!(grandchildren, vec![1, 1, 3]);
    }

    #[test]
    fn terminal_four_chain_through_weight_21() {
        let g = build_mutation_tree(4, Variant::Terminal, 3).unwrap();
        let start = g.nodes.iter().find(|x| x.label() == "1,21,132,308,484").unwrap();
        let mut id = start.id;
        for depth in 2..=3 {
            let up: Vec<usize> =
                g.neighbours(id).into_iter().filter(|&j| g.nodes[j].depth == depth).collect();
            assert_eq!(up.len(), 1);
            id = up[0];
        }
    }

    #[test]
    fn dot_output_is_deterministic() {
        let a = build_mutation_tree(3, Variant::Canonical, 1).unwrap().to_dot();
        let b = build_mutation_tree(3, Variant::Canonical, 1).unwrap().to_dot();
        assert_eq!(a, b);
        assert!(a.starts_with("graph mutations {"));
        assert!(a.contains("n0 [label=\"1,1,4,6\"]"));
        assert!(a.contains(" -- "));
    }

    #[test]
    fn annotation_marks_the_root() {
        let mut g = build_mutation_tree(3, Variant::Canonical, 1).unwrap();
        g.annotate_singularities(10_000).unwrap();
        let root = g.nodes[0].singularity.as_ref().unwrap();
        assert!(root.canonical && !root.terminal);
        for node in &g.nodes[1..] {
            if node.label() != "1,1,1,3" {
                assert!(!node.singularity.as_ref().unwrap().canonical, "{}", node.label());
            }
        }
    }
}
