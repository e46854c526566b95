use crate::error::{Error, Result};
use crate::topology::Network;
use crate::Label;

/// Layer assignment for the layered family: a single source layer, then
/// layers of two nodes, and a last layer of one or two nodes. Every node of
/// layer `i` has an edge to every node of layer `i + 1`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LayeredSpec {
    layers: Vec<Vec<Label>>,
}

impl LayeredSpec {
    pub fn new(layers: Vec<Vec<Label>>) -> Result<Self> {
        let spec = Self { layers };
        spec.validate()?;
        Ok(spec)
    }

    /// Number of layers `⌊n/2⌋ + 1` used by the family for `n` nodes.
    pub fn layer_count(n: usize) -> usize {
        n / 2 + 1
    }

    /// Layer sizes for `n` nodes: `1, 2, ..., 2, n − 1 − 2(l − 2)`.
    pub fn layer_sizes(n: usize) -> Vec<usize> {
        let l = Self::layer_count(n);
        if n == 1 {
            return vec![1];
        }
        let mut sizes = vec![1];
        sizes.extend(std::iter::repeat_n(2, l - 2));
        sizes.push(n - 1 - 2 * (l - 2));
        sizes
    }

    pub fn layers(&self) -> &[Vec<Label>] {
        &self.layers
    }

    pub fn n(&self) -> usize {
        self.layers.iter().map(Vec::len).sum()
    }

    pub fn source(&self) -> Label {
        self.layers[0][0]
    }

    fn validate(&self) -> Result<()> {
        let l = self.layers.len();
        if l == 0 {
            return Err(Error::InvalidLayering("no layers".into()));
        }
        if self.layers[0].len() != 1 {
            return Err(Error::InvalidLayering(format!(
                "first layer has {} nodes, expected 1",
                self.layers[0].len()
            )));
        }
        for (i, layer) in self.layers.iter().enumerate().skip(1) {
            let ok = if i + 1 == l {
                matches!(layer.len(), 1 | 2)
            } else {
                layer.len() == 2
            };
            if !ok {
                return Err(Error::InvalidLayering(format!(
                    "layer {} has {} nodes",
                    i + 1,
                    layer.len()
                )));
            }
        }
        let n = self.n();
        let mut seen = vec![false; n];
        for &v in self.layers.iter().flatten() {
            if v == 0 || v > n {
                return Err(Error::InvalidLayering(format!(
                    "label {v} is outside 1..={n}"
                )));
            }
            if std::mem::replace(&mut seen[v - 1], true) {
                return Err(Error::InvalidLayering(format!("label {v} repeats")));
            }
        }
        Ok(())
    }
}

/// Materializes the complete bipartite links between consecutive layers.
pub fn build_layered(spec: &LayeredSpec) -> Result<Network> {
    let edges = spec.layers.windows(2).flat_map(|pair| {
        let (from, to) = (&pair[0], &pair[1]);
        from.iter()
            .flat_map(move |&u| to.iter().map(move |&v| (u, v)))
    });
    Network::new(spec.n(), spec.source(), edges)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn layered_examples() {
        let g = build_layered(&LayeredSpec::new(vec![vec![1]]).unwrap()).unwrap();
        assert_eq!(g.n(), 1);
        assert_eq!(g.edge_count(), 0);

        let spec = LayeredSpec::new(vec![vec![1], vec![2, 3], vec![4]]).unwrap();
        let g = build_layered(&spec).unwrap();
        assert_eq!(
            g.edges().collect::<Vec<_>>(),
            vec![(1, 2), (1, 3), (2, 4), (3, 4)]
        );
    }

    #[test]
    fn layer_shape() {
        assert_eq!(LayeredSpec::layer_count(7), 4);
        assert_eq!(LayeredSpec::layer_sizes(7), vec![1, 2, 2, 2]);
        assert_eq!(LayeredSpec::layer_sizes(6), vec![1, 2, 2, 1]);
        assert_eq!(LayeredSpec::layer_sizes(2), vec![1, 1]);
        assert_eq!(LayeredSpec::layer_sizes(3), vec![1, 2]);
        for n in 1..40 {
            let sizes = LayeredSpec::layer_sizes(n);
            assert_eq!(sizes.iter().sum::<usize>(), n);
            assert_eq!(sizes.len(), LayeredSpec::layer_count(n));
        }
    }

    #[test]
    fn malformed_layering() {
        assert!(LayeredSpec::new(vec![vec![1, 2]]).is_err());
        assert!(LayeredSpec::new(vec![vec![1], vec![2], vec![3]]).is_err());
        assert!(LayeredSpec::new(vec![vec![1], vec![2, 3, 4]]).is_err());
        assert!(LayeredSpec::new(vec![vec![1], vec![2, 2]]).is_err());
        assert!(LayeredSpec::new(vec![vec![1], vec![2, 5]]).is_err());
    }

    #[test]
    fn in_neighbors_are_previous_layer() {
        let spec = LayeredSpec::new(vec![vec![3], vec![1, 7], vec![2, 6], vec![4, 5]]).unwrap();
        let g = build_layered(&spec).unwrap();
        for (i, layer) in spec.layers().iter().enumerate().skip(1) {
            for &v in layer {
                let mut expected = spec.layers()[i - 1].clone();
                expected.sort_unstable();
                assert_eq!(g.in_neighbors(v), expected.as_slice());
            }
        }
        assert_eq!(g.edge_count(), 2 + 4 + 4);
    }
}
