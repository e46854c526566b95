use std::collections::HashSet;

use crate::error::{Error, Result};
use crate::topology::Network;
use crate::Label;

/// A directed path, listed from its first node to its last.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Chain {
    seq: Vec<Label>,
}

impl Chain {
    pub fn new(seq: Vec<Label>) -> Result<Self> {
        if seq.is_empty() {
            return Err(Error::InvalidChain("a chain has at least one node".into()));
        }
        let mut seen = HashSet::with_capacity(seq.len());
        for &v in &seq {
            if v == 0 {
                return Err(Error::InvalidChain("label 0 is not a node".into()));
            }
            if !seen.insert(v) {
                return Err(Error::InvalidChain(format!("label {v} repeats")));
            }
        }
        Ok(Self { seq })
    }

    pub fn single(v: Label) -> Result<Self> {
        Self::new(vec![v])
    }

    pub fn labels(&self) -> &[Label] {
        &self.seq
    }

    pub fn len(&self) -> usize {
        self.seq.len()
    }

    pub fn is_empty(&self) -> bool {
        self.seq.is_empty()
    }

    pub fn first(&self) -> Label {
        self.seq[0]
    }

    pub fn last(&self) -> Label {
        *self.seq.last().expect("chains are nonempty")
    }

    pub fn contains(&self, v: Label) -> bool {
        self.seq.contains(&v)
    }

    /// `self ∘ other`: the last node of `self` gains an edge to the first of `other`.
    pub fn concat(&self, other: &Chain) -> Result<Chain> {
        if let Some(&v) = other.seq.iter().find(|v| self.seq.contains(v)) {
            return Err(Error::InvalidChain(format!(
                "label {v} appears in both chains"
            )));
        }
        let mut seq = self.seq.clone();
        seq.extend_from_slice(&other.seq);
        Ok(Chain { seq })
    }

    pub fn push(&self, v: Label) -> Result<Chain> {
        self.concat(&Chain::single(v)?)
    }

    pub fn into_labels(self) -> Vec<Label> {
        self.seq
    }
}

/// Path network over exactly the labels in `ids`, which must be a permutation
/// of `1..=ids.len()`. The first label is the source.
pub fn build_chain(ids: &[Label]) -> Result<Network> {
    build_chain_in(ids, ids.len())
}

/// Path network embedded in a universe of `n` labels; labels not on the chain
/// are isolated. Only the adversaries need this, and they always cover `1..=n`.
pub fn build_chain_in(ids: &[Label], n: usize) -> Result<Network> {
    let chain = Chain::new(ids.to_vec())?;
    if let Some(&v) = ids.iter().find(|&&v| v > n) {
        return Err(Error::InvalidChain(format!(
            "label {v} is outside the universe 1..={n}"
        )));
    }
    Network::new(n, chain.first(), ids.windows(2).map(|w| (w[0], w[1])))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn chain_examples() {
        let g = build_chain(&[1]).unwrap();
        assert_eq!(g.n(), 1);
        assert_eq!(g.edge_count(), 0);

        let g = build_chain(&[1, 2, 3]).unwrap();
        assert_eq!(g.edges().collect::<Vec<_>>(), vec![(1, 2), (2, 3)]);
        assert_eq!(g.source(), 1);

        let g = build_chain(&[3, 1, 2]).unwrap();
        assert_eq!(g.edges().collect::<Vec<_>>(), vec![(1, 2), (3, 1)]);
        assert_eq!(g.source(), 3);
        assert_eq!(g.topological_order(), Some(vec![3, 1, 2]));
    }

    #[test]
    fn duplicate_labels_rejected() {
        assert!(matches!(
            build_chain(&[1, 2, 1]),
            Err(Error::InvalidChain(_))
        ));
        assert!(matches!(build_chain(&[1, 5]), Err(Error::InvalidChain(_))));
        assert!(matches!(build_chain(&[]), Err(Error::InvalidChain(_))));
    }

    #[test]
    fn concat_examples() {
        let a = Chain::new(vec![1, 2]).unwrap();
        let b = Chain::new(vec![3]).unwrap();
        assert_eq!(a.concat(&b).unwrap().labels(), &[1, 2, 3]);
        let c = Chain::new(vec![5]).unwrap();
        let d = Chain::new(vec![4, 2]).unwrap();
        assert_eq!(c.concat(&d).unwrap().labels(), &[5, 4, 2]);
        let e = Chain::new(vec![2, 3]).unwrap();
        assert!(matches!(a.concat(&e), Err(Error::InvalidChain(_))));
    }

    #[test]
    fn embedded_chain_leaves_isolated_labels() {
        let g = build_chain_in(&[2, 4], 4).unwrap();
        assert_eq!(g.n(), 4);
        assert_eq!(g.source(), 2);
        assert!(g.out_neighbors(1).is_empty());
    }
}
