//! Directed network model, chain and layered-family constructors, random
//! corpora, and the graph file format.

mod chain;
mod io;
mod layered;
mod network;
mod random;

pub use chain::{build_chain, build_chain_in, Chain};
pub(crate) use io::{key_value, strip_comment};
pub use io::{load_network, network_to_string, parse_network, save_network};
pub use layered::{build_layered, LayeredSpec};
pub use network::Network;
pub use random::{random_chain_order, random_reachable_digraph};
