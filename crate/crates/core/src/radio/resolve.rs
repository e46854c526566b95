use crate::error::{Error, Result};
use crate::radio::Reception;
use crate::topology::Network;
use crate::Label;

/// Resolves one synchronous step of the collision model.
///
/// Index `v - 1` of the result holds node `v`'s outcome. A node hears `u`
/// iff `u` is its only transmitting in-neighbor and `v` itself is silent.
pub fn resolve_step(network: &Network, transmitters: &[Label]) -> Result<Vec<Reception>> {
    let mut resolver = Resolver::new(network.n());
    resolver.resolve(network, transmitters)?;
    Ok((1..=network.n()).map(|v| resolver.outcome(v)).collect())
}

/// Reusable scratch space for step resolution. Only nodes touched by the
/// last call are non-silent, so a step costs `O(Σ out-degree of transmitters)`.
#[derive(Debug, Clone)]
pub(crate) struct Resolver {
    hits: Vec<u32>,
    from: Vec<Label>,
    transmitting: Vec<bool>,
    touched: Vec<Label>,
    last_tx: Vec<Label>,
}

impl Resolver {
    pub(crate) fn new(n: usize) -> Self {
        Self {
            hits: vec![0; n],
            from: vec![0; n],
            transmitting: vec![false; n],
            touched: Vec::new(),
            last_tx: Vec::new(),
        }
    }

    fn clear(&mut self) {
        for &v in &self.touched {
            self.hits[v - 1] = 0;
        }
        for &v in &self.last_tx {
            self.transmitting[v - 1] = false;
        }
        self.touched.clear();
        self.last_tx.clear();
    }

    pub(crate) fn resolve(&mut self, network: &Network, transmitters: &[Label]) -> Result<()> {
        self.clear();
        for &u in transmitters {
            if !network.contains(u) {
                return Err(Error::InvalidNode(u));
            }
            self.transmitting[u - 1] = true;
            self.last_tx.push(u);
        }
        for &u in transmitters {
            for &w in network.out_neighbors(u) {
                if self.hits[w - 1] == 0 {
                    self.touched.push(w);
                }
                self.hits[w - 1] += 1;
                self.from[w - 1] = u;
            }
        }
        self.touched.sort_unstable();
        Ok(())
    }

    pub(crate) fn is_transmitting(&self, v: Label) -> bool {
        self.transmitting[v - 1]
    }

    pub(crate) fn outcome(&self, v: Label) -> Reception {
        if self.transmitting[v - 1] {
            return Reception::Silence;
        }
        match self.hits[v - 1] {
            0 => Reception::Silence,
            1 => Reception::Delivered(self.from[v - 1]),
            _ => Reception::Collision,
        }
    }

    /// Nodes that had at least one transmitting in-neighbor, ascending.
    pub(crate) fn touched(&self) -> &[Label] {
        &self.touched
    }
}
