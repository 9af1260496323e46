//! Vantage-point tree with residuum pruning bounds.
//!
//! A split node holds a pivot `p` and the lower median `mu` of the distances
//! from `p` to the remaining points; points at distance `≤ mu` go inner, the
//! rest outer. For a query `q` with `D = d(q, p)`:
//!
//! - inner `x` (`d(p, x) ≤ mu`): `D ≤ d(q, x) ⋆ d(x, p) ≤ d(q, x) ⋆ mu`, so by
//!   residuation `d(q, x) ≥ mu ⊸ D`;
//! - outer `x` (`d(p, x) ≥ mu`): `mu ≤ d(x, q) ⋆ d(q, p) = d(q, x) ⋆ D`, so
//!   `d(q, x) ≥ D ⊸ mu`.
//!
//! Under ⋆_L these are the classical bounds `D − mu` and `mu − D`.
//! A subtree is skipped only when its bound exceeds the current threshold
//! by more than `abs_tol`, so ties and rounding never lose a neighbor.

use std::cmp::Ordering as CmpOrdering;
use std::collections::BinaryHeap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::metric::StarMetricSpace;
use crate::point::{Point, PointSet};
use crate::tdefiner::ToleranceConfig;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Neighbor {
    /// Position of the point in the input set.
    pub index: usize,
    pub point: Point,
    pub distance: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    Inner,
    Outer,
}

/// One pruned subtree, with the brute-force confirmation of the skip.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SkipEvent {
    pub node: usize,
    pub side: Side,
    pub pivot_distance: f64,
    pub mu: f64,
    pub bound: f64,
    pub threshold: f64,
    pub subtree_size: usize,
    /// Smallest query distance inside the skipped subtree.
    pub subtree_min_distance: f64,
    /// Whether every skipped point lies strictly beyond the threshold.
    pub sound: bool,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct SearchStats {
    pub distance_evaluations: usize,
    pub nodes_visited: usize,
    pub subtrees_skipped: usize,
    /// Filled only by audited searches.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub skips: Vec<SkipEvent>,
}

impl SearchStats {
    pub fn audit_sound(&self) -> bool {
        self.skips.iter().all(|s| s.sound)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SearchResult {
    /// Ascending by `(distance, index)`.
    pub neighbors: Vec<Neighbor>,
    /// Set when fewer than `k` points exist.
    pub short: bool,
    pub stats: SearchStats,
}

#[derive(Debug, Clone)]
enum Node {
    Leaf {
        items: Vec<usize>,
    },
    Split {
        id: usize,
        pivot: usize,
        mu: f64,
        inner: Box<Node>,
        outer: Box<Node>,
    },
}

impl Node {
    fn collect(&self, out: &mut Vec<usize>) {
        match self {
            Node::Leaf { items } => out.extend_from_slice(items),
            Node::Split { pivot, inner, outer, .. } => {
                out.push(*pivot);
                inner.collect(out);
                outer.collect(out);
            }
        }
    }

    fn depth(&self) -> usize {
        match self {
            Node::Leaf { .. } => 1,
            Node::Split { inner, outer, .. } => 1 + inner.depth().max(outer.depth()),
        }
    }
}

/// `(distance, index)` ordered lexicographically; the heap top is the worst kept.
#[derive(Debug, Clone, Copy, PartialEq)]
struct Candidate {
    distance: f64,
    index: usize,
}

impl Eq for Candidate {}

impl Ord for Candidate {
    fn cmp(&self, other: &Self) -> CmpOrdering {
        self.distance
            .total_cmp(&other.distance)
            .then(self.index.cmp(&other.index))
    }
}

impl PartialOrd for Candidate {
    fn partial_cmp(&self, other: &Self) -> Option<CmpOrdering> {
        Some(self.cmp(other))
    }
}

/// Exact k-NN and range index over a ⋆-metric space.
#[derive(Debug, Clone)]
pub struct VpTree {
    space: StarMetricSpace,
    points: Vec<Point>,
    root: Node,
    leaf_size: usize,
    seed: u64,
    splits: usize,
}

struct Builder<'a> {
    space: &'a StarMetricSpace,
    points: &'a [Point],
    leaf_size: usize,
    rng: ChaCha8Rng,
    next_id: usize,
}

impl Builder<'_> {
    fn build(&mut self, mut items: Vec<usize>) -> Node {
        if items.len() <= self.leaf_size {
            return Node::Leaf { items };
        }
        let pivot = items.swap_remove(self.rng.gen_range(0..items.len()));
        let pc = self.points[pivot].coords();
        let dists: Vec<f64> = items
            .iter()
            .map(|&i| self.space.dist_raw(pc, self.points[i].coords()))
            .collect();
        let mut sorted = dists.clone();
        sorted.sort_by(f64::total_cmp);
        let mu = sorted[(sorted.len() - 1) / 2];
        let (mut inner, mut outer) = (Vec::new(), Vec::new());
        for (&i, &d) in items.iter().zip(&dists) {
            if d <= mu {
                inner.push(i);
            } else {
                outer.push(i);
            }
        }
        let id = self.next_id;
        self.next_id += 1;
        Node::Split {
            id,
            pivot,
            mu,
            inner: Box::new(self.build(inner)),
            outer: Box::new(self.build(outer)),
        }
    }
}

struct Search<'a> {
    tree: &'a VpTree,
    query: &'a [f64],
    cfg: &'a ToleranceConfig,
    audit: bool,
    stats: SearchStats,
}

enum Goal {
    Knn { k: usize, heap: BinaryHeap<Candidate> },
    Range { radius: f64, hits: Vec<Candidate> },
}

impl Goal {
    fn threshold(&self) -> f64 {
        match self {
            Goal::Knn { k, heap } => {
                if heap.len() < *k {
                    f64::INFINITY
                } else {
                    heap.peek().map_or(f64::INFINITY, |c| c.distance)
                }
            }
            Goal::Range { radius, .. } => *radius,
        }
    }

    fn offer(&mut self, c: Candidate) {
        match self {
            Goal::Knn { k, heap } => {
                if heap.len() < *k {
                    heap.push(c);
                } else if heap.peek().is_some_and(|worst| c < *worst) {
                    heap.pop();
                    heap.push(c);
                }
            }
            Goal::Range { radius, hits } => {
                if c.distance < *radius {
                    hits.push(c);
                }
            }
        }
    }
}

impl Search<'_> {
    fn distance(&mut self, index: usize) -> f64 {
        self.stats.distance_evaluations += 1;
        self.tree
            .space
            .dist_raw(self.query, self.tree.points[index].coords())
    }

    fn visit(&mut self, node: &Node, goal: &mut Goal) -> Result<()> {
        self.stats.nodes_visited += 1;
        match node {
            Node::Leaf { items } => {
                for &i in items {
                    let distance = self.distance(i);
                    goal.offer(Candidate { distance, index: i });
                }
            }
            Node::Split { id, pivot, mu, inner, outer } => {
                let d = self.distance(*pivot);
                goal.offer(Candidate { distance: d, index: *pivot });
                let star = self.tree.space.star();
                let lb_in = star.residuum(*mu, d, self.cfg)?;
                let lb_out = star.residuum(d, *mu, self.cfg)?;
                let order = if d <= *mu {
                    [(Side::Inner, inner, lb_in), (Side::Outer, outer, lb_out)]
                } else {
                    [(Side::Outer, outer, lb_out), (Side::Inner, inner, lb_in)]
                };
                for (side, child, bound) in order {
                    let tau = goal.threshold();
                    if bound > tau + self.cfg.abs_tol {
                        self.stats.subtrees_skipped += 1;
                        if self.audit {
                            self.record_skip(*id, side, d, *mu, bound, tau, child);
                        }
                    } else {
                        self.visit(child, goal)?;
                    }
                }
            }
        }
        Ok(())
    }

    #[allow(clippy::too_many_arguments)]
    fn record_skip(&mut self, node: usize, side: Side, pivot_distance: f64, mu: f64, bound: f64, threshold: f64, child: &Node) {
        let mut items = Vec::new();
        child.collect(&mut items);
        let min = items
            .iter()
            .map(|&i| self.tree.space.dist_raw(self.query, self.tree.points[i].coords()))
            .fold(f64::INFINITY, f64::min);
        self.stats.skips.push(SkipEvent {
            node,
            side,
            pivot_distance,
            mu,
            bound,
            threshold,
            subtree_size: items.len(),
            subtree_min_distance: min,
            sound: min > threshold,
        });
    }
}

impl VpTree {
    /// Builds the tree; pivots are drawn uniformly from each node's points
    /// with a generator seeded by `seed`.
    pub fn build(points: &PointSet, space: &StarMetricSpace, leaf_size: usize, seed: u64) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::Usage("cannot index an empty point set".into()));
        }
        if leaf_size == 0 {
            return Err(Error::Usage("leaf_size must be positive".into()));
        }
        space.validate_set(points)?;
        let mut builder = Builder {
            space,
            points: points.points(),
            leaf_size,
            rng: ChaCha8Rng::seed_from_u64(seed),
            next_id: 0,
        };
        let root = builder.build((0..points.len()).collect());
        let splits = builder.next_id;
        Ok(VpTree {
            space: space.clone(),
            points: points.points().to_vec(),
            root,
            leaf_size,
            seed,
            splits,
        })
    }

    pub fn space(&self) -> &StarMetricSpace {
        &self.space
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn leaf_size(&self) -> usize {
        self.leaf_size
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn split_count(&self) -> usize {
        self.splits
    }

    pub fn depth(&self) -> usize {
        self.root.depth()
    }

    pub fn is_leaf(&self) -> bool {
        matches!(self.root, Node::Leaf { .. })
    }

    /// Input indices in tree order (pivot, inner subtree, outer subtree).
    pub fn indices(&self) -> Vec<usize> {
        let mut out = Vec::with_capacity(self.points.len());
        self.root.collect(&mut out);
        out
    }

    /// Re-checks the partition invariant at every split node and returns
    /// a description of each violation.
    pub fn audit_structure(&self) -> Vec<String> {
        let mut problems = Vec::new();
        self.audit_node(&self.root, &mut problems);
        let mut seen = self.indices();
        seen.sort_unstable();
        if seen != (0..self.points.len()).collect::<Vec<_>>() {
            problems.push("tree does not hold each input point exactly once".into());
        }
        problems
    }

    fn audit_node(&self, node: &Node, problems: &mut Vec<String>) {
        if let Node::Split { id, pivot, mu, inner, outer } = node {
            let pc = self.points[*pivot].coords();
            let mut check = |child: &Node, side: Side| {
                let mut items = Vec::new();
                child.collect(&mut items);
                for i in items {
                    let d = self.space.dist_raw(pc, self.points[i].coords());
                    let ok = match side {
                        Side::Inner => d <= *mu,
                        Side::Outer => d >= *mu,
                    };
                    if !ok {
                        problems.push(format!("node {id}: point {i} at {d} on {side:?} side of mu {mu}"));
                    }
                }
            };
            check(inner, Side::Inner);
            check(outer, Side::Outer);
            self.audit_node(inner, problems);
            self.audit_node(outer, problems);
        }
    }

    fn prepare(&self, q: &Point) -> Result<()> {
        self.space.validate(q)
    }

    fn finish(&self, mut found: Vec<Candidate>) -> Vec<Neighbor> {
        found.sort();
        found
            .into_iter()
            .map(|c| Neighbor {
                index: c.index,
                point: self.points[c.index].clone(),
                distance: c.distance,
            })
            .collect()
    }

    /// The `k` nearest points, ties broken by input index.
    pub fn knn(&self, q: &Point, k: usize, cfg: &ToleranceConfig) -> Result<SearchResult> {
        self.knn_with(q, k, cfg, false)
    }

    /// [`VpTree::knn`], optionally recording and verifying every skip.
    pub fn knn_with(&self, q: &Point, k: usize, cfg: &ToleranceConfig, audit: bool) -> Result<SearchResult> {
        if k == 0 {
            return Err(Error::Usage("k must be at least 1".into()));
        }
        self.prepare(q)?;
        let mut search = Search { tree: self, query: q.coords(), cfg, audit, stats: SearchStats::default() };
        let mut goal = Goal::Knn { k, heap: BinaryHeap::with_capacity(k + 1) };
        search.visit(&self.root, &mut goal)?;
        let found = match goal {
            Goal::Knn { heap, .. } => heap.into_vec(),
            Goal::Range { .. } => unreachable!(),
        };
        Ok(SearchResult {
            neighbors: self.finish(found),
            short: k > self.points.len(),
            stats: search.stats,
        })
    }

    /// All points with `d(q, x) < r`, ascending by `(distance, index)`.
    pub fn range_query(&self, q: &Point, r: f64, cfg: &ToleranceConfig) -> Result<Vec<Neighbor>> {
        Ok(self.range_query_with(q, r, cfg, false)?.neighbors)
    }

    pub fn range_query_with(&self, q: &Point, r: f64, cfg: &ToleranceConfig, audit: bool) -> Result<SearchResult> {
        if !(r > 0.0) || !r.is_finite() {
            return Err(Error::Usage(format!("range radius must be positive and finite, got {r}")));
        }
        self.prepare(q)?;
        let mut search = Search { tree: self, query: q.coords(), cfg, audit, stats: SearchStats::default() };
        let mut goal = Goal::Range { radius: r, hits: Vec::new() };
        search.visit(&self.root, &mut goal)?;
        let found = match goal {
            Goal::Range { hits, .. } => hits,
            Goal::Knn { .. } => unreachable!(),
        };
        Ok(SearchResult {
            neighbors: self.finish(found),
            short: false,
            stats: search.stats,
        })
    }
}

fn scan(points: &PointSet, space: &StarMetricSpace, q: &Point) -> Result<Vec<Candidate>> {
    space.validate_set(points)?;
    space.validate(q)?;
    let mut all: Vec<Candidate> = points
        .iter()
        .enumerate()
        .map(|(index, p)| Candidate {
            distance: space.dist_raw(q.coords(), p.coords()),
            index,
        })
        .collect();
    all.sort();
    Ok(all)
}

fn to_neighbors(points: &PointSet, found: impl Iterator<Item = Candidate>) -> Vec<Neighbor> {
    found
        .map(|c| Neighbor {
            index: c.index,
            point: points.points()[c.index].clone(),
            distance: c.distance,
        })
        .collect()
}

/// Full scan sorted by `(distance, input index)`; the ground truth for the index.
pub fn brute_force(points: &PointSet, space: &StarMetricSpace, q: &Point, k: usize) -> Result<Vec<Neighbor>> {
    if k == 0 {
        return Err(Error::Usage("k must be at least 1".into()));
    }
    let all = scan(points, space, q)?;
    Ok(to_neighbors(points, all.into_iter().take(k)))
}

/// Full scan for `d(q, x) < r`.
pub fn brute_force_range(points: &PointSet, space: &StarMetricSpace, q: &Point, r: f64) -> Result<Vec<Neighbor>> {
    let all = scan(points, space, q)?;
    Ok(to_neighbors(points, all.into_iter().filter(|c| c.distance < r)))
}
