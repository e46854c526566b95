use std::collections::VecDeque;
use std::fmt;

use crate::error::{Error, Result};
use crate::Label;

/// A directed radio network over labels `1..=n` with a designated source.
///
/// Neighbor lists are kept sorted by label. A network is immutable once built.
#[derive(Clone, PartialEq, Eq)]
pub struct Network {
    n: usize,
    source: Label,
    out: Vec<Vec<Label>>,
    inn: Vec<Vec<Label>>,
}

impl Network {
    /// Builds a network from an edge list, rejecting self-loops, duplicate
    /// edges and labels outside `1..=n`.
    pub fn new<I>(n: usize, source: Label, edges: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Label, Label)>,
    {
        if n == 0 {
            return Err(Error::InvalidNetwork(
                "a network has at least one node".into(),
            ));
        }
        check_label(source, n)?;
        let mut out = vec![Vec::new(); n];
        let mut inn = vec![Vec::new(); n];
        for (u, v) in edges {
            check_label(u, n)?;
            check_label(v, n)?;
            if u == v {
                return Err(Error::InvalidNetwork(format!("self-loop on {u}")));
            }
            out[u - 1].push(v);
            inn[v - 1].push(u);
        }
        for (i, list) in out.iter_mut().enumerate() {
            list.sort_unstable();
            if let Some(w) = list.windows(2).find(|w| w[0] == w[1]) {
                return Err(Error::InvalidNetwork(format!(
                    "duplicate edge {} -> {}",
                    i + 1,
                    w[0]
                )));
            }
        }
        for list in &mut inn {
            list.sort_unstable();
        }
        Ok(Self {
            n,
            source,
            out,
            inn,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn source(&self) -> Label {
        self.source
    }

    pub fn labels(&self) -> impl Iterator<Item = Label> {
        1..=self.n
    }

    pub fn contains(&self, v: Label) -> bool {
        (1..=self.n).contains(&v)
    }

    pub fn out_neighbors(&self, v: Label) -> &[Label] {
        &self.out[v - 1]
    }

    pub fn in_neighbors(&self, v: Label) -> &[Label] {
        &self.inn[v - 1]
    }

    pub fn has_edge(&self, u: Label, v: Label) -> bool {
        self.contains(u) && self.out[u - 1].binary_search(&v).is_ok()
    }

    pub fn edge_count(&self) -> usize {
        self.out.iter().map(Vec::len).sum()
    }

    /// All edges in lexicographic `(u, v)` order.
    pub fn edges(&self) -> impl Iterator<Item = (Label, Label)> + '_ {
        self.out
            .iter()
            .enumerate()
            .flat_map(|(i, list)| list.iter().map(move |&v| (i + 1, v)))
    }

    /// Hop distance from the source, `None` for unreachable nodes.
    /// Index `v - 1` holds the distance of label `v`.
    pub fn bfs_depths(&self) -> Vec<Option<usize>> {
        let mut depth = vec![None; self.n];
        depth[self.source - 1] = Some(0);
        let mut queue = VecDeque::from([self.source]);
        while let Some(u) = queue.pop_front() {
            let d = depth[u - 1].unwrap_or(0);
            for &v in self.out_neighbors(u) {
                if depth[v - 1].is_none() {
                    depth[v - 1] = Some(d + 1);
                    queue.push_back(v);
                }
            }
        }
        depth
    }

    pub fn all_reachable(&self) -> bool {
        self.bfs_depths().iter().all(Option::is_some)
    }

    /// Largest hop distance from the source to a reachable node.
    pub fn eccentricity(&self) -> usize {
        self.bfs_depths().into_iter().flatten().max().unwrap_or(0)
    }

    /// Kahn order with smallest-label tie breaking; `None` on a cycle.
    pub fn topological_order(&self) -> Option<Vec<Label>> {
        let mut indeg: Vec<usize> = self.inn.iter().map(Vec::len).collect();
        let mut ready: std::collections::BTreeSet<Label> =
            self.labels().filter(|&v| indeg[v - 1] == 0).collect();
        let mut order = Vec::with_capacity(self.n);
        while let Some(u) = ready.pop_first() {
            order.push(u);
            for &v in self.out_neighbors(u) {
                indeg[v - 1] -= 1;
                if indeg[v - 1] == 0 {
                    ready.insert(v);
                }
            }
        }
        (order.len() == self.n).then_some(order)
    }
}

impl fmt::Debug for Network {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Network")
            .field("n", &self.n)
            .field("source", &self.source)
            .field("edges", &self.edges().collect::<Vec<_>>())
            .finish()
    }
}

fn check_label(v: Label, n: usize) -> Result<()> {
    if v == 0 || v > n {
        Err(Error::InvalidLabel { label: v, max: n })
    } else {
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_bad_edges() {
        assert!(matches!(
            Network::new(3, 1, [(1, 1)]),
            Err(Error::InvalidNetwork(_))
        ));
        assert!(matches!(
            Network::new(3, 1, [(1, 2), (1, 2)]),
            Err(Error::InvalidNetwork(_))
        ));
        assert!(matches!(
            Network::new(3, 1, [(1, 4)]),
            Err(Error::InvalidLabel { label: 4, max: 3 })
        ));
        assert!(Network::new(3, 0, []).is_err());
    }

    #[test]
    fn neighbors_sorted_and_depths() {
        let g = Network::new(4, 1, [(1, 3), (1, 2), (3, 4), (2, 4)]).unwrap();
        assert_eq!(g.out_neighbors(1), &[2, 3]);
        assert_eq!(g.in_neighbors(4), &[2, 3]);
        assert_eq!(g.bfs_depths(), vec![Some(0), Some(1), Some(1), Some(2)]);
        assert_eq!(g.eccentricity(), 2);
        assert_eq!(g.topological_order(), Some(vec![1, 2, 3, 4]));
    }
}
