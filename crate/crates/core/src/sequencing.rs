//! Fair-ordering simulator: validator receive orders, the strict-majority
//! digraph over transactions, and the orderings that respect it.
//!
//! An ordering `π` lists transactions by slot, so `π(slot) = tx` and the
//! slot of transaction `i` is `π⁻¹(i)`.

use petgraph::algo::tarjan_scc;
use petgraph::graph::DiGraph;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::intersecting::{intersection_profile, IntersectionProfile};
use crate::payoff_fn::OrderingSet;
use crate::perm::{check_capacity, Permutation};

/// Receive orders reported by validators, one permutation of the
/// transactions each.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "RawProfile")]
pub struct VoteProfile {
    n_tx: usize,
    validators: Vec<Permutation>,
}

#[derive(Deserialize)]
struct RawProfile {
    n_tx: usize,
    validators: Vec<Permutation>,
}

impl TryFrom<RawProfile> for VoteProfile {
    type Error = Error;

    fn try_from(r: RawProfile) -> Result<Self> {
        VoteProfile::new(r.n_tx, r.validators)
    }
}

impl VoteProfile {
    pub fn new(n_tx: usize, validators: Vec<Permutation>) -> Result<Self> {
        if n_tx == 0 {
            return Err(Error::InvalidSpec("n_tx must be at least 1".into()));
        }
        if validators.is_empty() {
            return Err(Error::InvalidSpec("at least one validator is required".into()));
        }
        if let Some((v, p)) = validators.iter().enumerate().find(|(_, p)| p.n() != n_tx) {
            return Err(Error::InvalidSpec(format!("validator {v} orders {} transactions, expected {n_tx}", p.n())));
        }
        Ok(Self { n_tx, validators })
    }

    pub fn n_tx(&self) -> usize {
        self.n_tx
    }

    pub fn validators(&self) -> &[Permutation] {
        &self.validators
    }

    /// Every validator reports `order`.
    pub fn unanimous(order: Permutation, n_validators: usize) -> Result<Self> {
        Self::new(order.n(), vec![order; n_validators])
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MajorityGraph {
    pub n_tx: usize,
    /// `votes[i][j]`: validators placing transaction `i` before `j` (zero-based).
    pub votes: Vec<Vec<usize>>,
    /// One-based `(i, j)`: a strict majority places `i` before `j`.
    pub edges: Vec<(usize, usize)>,
    /// One-based members of each strongly connected component, sorted, with
    /// components ordered by their smallest member.
    pub sccs: Vec<Vec<usize>>,
}

pub fn majority_graph(profile: &VoteProfile) -> MajorityGraph {
    let n = profile.n_tx;
    let mut votes = vec![vec![0usize; n]; n];
    for order in &profile.validators {
        let slot = order.inverse();
        for i in 0..n {
            for j in 0..n {
                if slot.get(i) < slot.get(j) {
                    votes[i][j] += 1;
                }
            }
        }
    }
    let mut edges = Vec::new();
    let mut graph = DiGraph::<(), ()>::new();
    let nodes: Vec<_> = (0..n).map(|_| graph.add_node(())).collect();
    for i in 0..n {
        for j in 0..n {
            if votes[i][j] > votes[j][i] {
                edges.push((i + 1, j + 1));
                graph.add_edge(nodes[i], nodes[j], ());
            }
        }
    }
    let mut sccs: Vec<Vec<usize>> = tarjan_scc(&graph)
        .into_iter()
        .map(|c| {
            let mut c: Vec<usize> = c.into_iter().map(|x| x.index() + 1).collect();
            c.sort_unstable();
            c
        })
        .collect();
    sccs.sort_unstable();
    MajorityGraph { n_tx: n, votes, edges, sccs }
}

impl MajorityGraph {
    /// Zero-based component index of every transaction.
    fn component_of(&self) -> Vec<usize> {
        let mut comp = vec![0; self.n_tx];
        for (c, members) in self.sccs.iter().enumerate() {
            for &m in members {
                comp[m - 1] = c;
            }
        }
        comp
    }

    /// Edges whose endpoints lie in different components.
    pub fn cross_edges(&self) -> Vec<(usize, usize)> {
        let comp = self.component_of();
        self.edges.iter().copied().filter(|&(i, j)| comp[i - 1] != comp[j - 1]).collect()
    }

    /// Whether `order` places the tail of every cross-component edge first.
    pub fn respects(&self, order: &Permutation) -> bool {
        let slot = order.inverse();
        self.cross_edges().iter().all(|&(i, j)| slot.get(i - 1) < slot.get(j - 1))
    }
}

/// Orderings respecting every majority edge between distinct components;
/// order inside a component is free.
pub fn valid_orderings(graph: &MajorityGraph) -> Result<OrderingSet> {
    check_capacity(graph.n_tx)?;
    let cross = graph.cross_edges();
    OrderingSet::filter(graph.n_tx, |p| {
        let slot = p.inverse();
        cross.iter().all(|&(i, j)| slot.get(i - 1) < slot.get(j - 1))
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CondorcetStats {
    pub num_sccs: usize,
    pub largest_scc: usize,
    pub has_cycle: bool,
}

pub fn condorcet_stats(graph: &MajorityGraph) -> CondorcetStats {
    let largest_scc = graph.sccs.iter().map(Vec::len).max().unwrap_or(0);
    CondorcetStats { num_sccs: graph.sccs.len(), largest_scc, has_cycle: largest_scc >= 2 }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LatencyModel {
    /// Each validator sees an independent uniform shuffle.
    IidShuffle { seed: u64 },
    /// Validator `v` sees the identity rotated left by `v mod n_tx`.
    AdversarialCycle,
}

pub fn simulate(n_tx: usize, n_validators: usize, model: LatencyModel) -> Result<VoteProfile> {
    check_capacity(n_tx)?;
    if n_tx == 0 || n_validators == 0 {
        return Err(Error::InvalidSpec("n_tx and n_validators must be positive".into()));
    }
    let validators = match model {
        LatencyModel::IidShuffle { seed } => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            (0..n_validators)
                .map(|_| {
                    let mut images: Vec<usize> = (0..n_tx).collect();
                    images.shuffle(&mut rng);
                    Permutation::from_images(images)
                })
                .collect::<Result<Vec<_>>>()?
        }
        LatencyModel::AdversarialCycle => {
            // A full rotation family gives i → i+1 a majority of n_tx − 1
            // against 1, closing the cycle n_tx → 1.
            if n_tx < 3 || !n_validators.is_multiple_of(n_tx) {
                return Err(Error::InvalidSpec(format!(
                    "adversarial cycle needs n_tx ≥ 3 and n_validators a multiple of n_tx, got {n_tx} and {n_validators}"
                )));
            }
            (0..n_validators)
                .map(|v| Permutation::from_images((0..n_tx).map(|s| (s + v) % n_tx).collect()))
                .collect::<Result<Vec<_>>>()?
        }
    };
    VoteProfile::new(n_tx, validators)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PipelineResult {
    pub graph: MajorityGraph,
    pub stats: CondorcetStats,
    pub set: OrderingSet,
    pub profile: IntersectionProfile,
}

/// Majority graph, valid orderings and their intersection profile.
pub fn run_pipeline(votes: &VoteProfile) -> Result<PipelineResult> {
    let graph = majority_graph(votes);
    let stats = condorcet_stats(&graph);
    let set = valid_orderings(&graph)?;
    let profile = intersection_profile(&set)?;
    Ok(PipelineResult { graph, stats, set, profile })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn perm(v: &[usize]) -> Permutation {
        Permutation::from_one_line(v).unwrap()
    }

    fn cycle_profile() -> VoteProfile {
        VoteProfile::new(3, vec![perm(&[1, 2, 3]), perm(&[2, 3, 1]), perm(&[3, 1, 2])]).unwrap()
    }

    #[test]
    fn unanimity() {
        let v = VoteProfile::unanimous(perm(&[2, 4, 1, 3]), 5).unwrap();
        let g = majority_graph(&v);
        assert_eq!(g.edges.len(), 6);
        let stats = condorcet_stats(&g);
        assert_eq!((stats.num_sccs, stats.has_cycle), (4, false));
        let r = run_pipeline(&v).unwrap();
        assert_eq!(r.set.len(), 1);
        assert_eq!(r.set.permutations().next().unwrap(), perm(&[2, 4, 1, 3]));
        assert_eq!(r.profile.t_max, 4);
    }

    #[test]
    fn condorcet_three_cycle() {
        let g = majority_graph(&cycle_profile());
        assert_eq!(g.edges, vec![(1, 2), (2, 3), (3, 1)]);
        assert_eq!(g.sccs, vec![vec![1, 2, 3]]);
        let stats = condorcet_stats(&g);
        assert_eq!((stats.num_sccs, stats.largest_scc, stats.has_cycle), (1, 3, true));
        let r = run_pipeline(&cycle_profile()).unwrap();
        assert_eq!((r.set.len(), r.profile.t_max), (6, 0));
        assert_eq!(simulate(3, 3, LatencyModel::AdversarialCycle).unwrap(), cycle_profile());
    }

    #[test]
    fn opposite_orders_tie() {
        let v = VoteProfile::new(3, vec![perm(&[1, 2, 3]), perm(&[3, 2, 1])]).unwrap();
        let g = majority_graph(&v);
        assert!(g.edges.is_empty());
        assert_eq!(valid_orderings(&g).unwrap().len(), 6);
    }

    #[test]
    fn single_edge_halves_the_group() {
        // 1 before 2 unanimously; every other pair split 1-1
        let v = VoteProfile::new(4, vec![perm(&[1, 2, 3, 4]), perm(&[4, 3, 1, 2])]).unwrap();
        let g = majority_graph(&v);
        assert_eq!(g.edges, vec![(1, 2)]);
        assert_eq!(valid_orderings(&g).unwrap().len(), 12);
    }

    #[test]
    fn mixed_profile_has_two_components() {
        let v = VoteProfile::new(4, vec![perm(&[1, 2, 3, 4]), perm(&[1, 3, 4, 2]), perm(&[1, 4, 2, 3])]).unwrap();
        let g = majority_graph(&v);
        assert_eq!(g.sccs, vec![vec![1], vec![2, 3, 4]]);
        assert_eq!(condorcet_stats(&g).num_sccs, 2);
        let a = valid_orderings(&g).unwrap();
        assert_eq!(a.len(), 6);
        assert!(a.permutations().all(|p| p.get(0) == 0));
    }

    #[test]
    fn valid_orderings_respect_cross_edges_exhaustively() {
        for seed in 0..10 {
            for n in 3..=6 {
                let v = simulate(n, 5, LatencyModel::IidShuffle { seed }).unwrap();
                let g = majority_graph(&v);
                let a = valid_orderings(&g).unwrap();
                let expect: Vec<u64> =
                    crate::perm::enumerate(n).unwrap().filter(|p| g.respects(p)).map(|p| p.lehmer_rank()).collect();
                assert_eq!(a.members(), expect.as_slice());
                // at most one edge per unordered pair
                assert!(g.edges.iter().all(|&(i, j)| !g.edges.contains(&(j, i))));
            }
        }
    }

    #[test]
    fn adversarial_cycles_are_full() {
        for n in 3..=6 {
            let v = simulate(n, 2 * n, LatencyModel::AdversarialCycle).unwrap();
            let r = run_pipeline(&v).unwrap();
            assert_eq!(r.stats.num_sccs, 1);
            assert_eq!(r.profile.t_max, 0);
        }
        assert!(simulate(4, 3, LatencyModel::AdversarialCycle).is_err());
    }

    #[test]
    fn simulation_is_seeded() {
        let a = simulate(5, 7, LatencyModel::IidShuffle { seed: 9 }).unwrap();
        assert_eq!(a, simulate(5, 7, LatencyModel::IidShuffle { seed: 9 }).unwrap());
        assert_ne!(a, simulate(5, 7, LatencyModel::IidShuffle { seed: 10 }).unwrap());
    }

    #[test]
    fn profile_json() {
        let json = r#"{"n_tx":3,"validators":[[1,2,3],[2,3,1],[3,1,2]]}"#;
        let v: VoteProfile = serde_json::from_str(json).unwrap();
        assert_eq!(v, cycle_profile());
        assert_eq!(serde_json::to_string(&v).unwrap(), json);
        assert!(serde_json::from_str::<VoteProfile>(r#"{"n_tx":3,"validators":[[1,2]]}"#).is_err());
    }
}
