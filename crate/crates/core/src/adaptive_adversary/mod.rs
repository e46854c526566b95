//! Lower-bound constructions against adaptive k-shot policies.
//!
//! Nodes of one layer hear the same incoming view from the layer before. A
//! transmission tree splits a set of ids by what they would do under that
//! view; two ids that stay together for `d` rounds cannot get the message
//! past their layer before round `d + 1`.

mod layered;
mod oracle;
mod refinement;
mod tree;
mod views;

pub use layered::{
    build_adversarial_layered, layered_delay_floor, LayerChoice, LayeredCertificate,
};
pub use oracle::min_tree_height_bruteforce;
pub use refinement::{
    build_1shot_chain_refinement, one_shot_chain_bound, CollisionWitness, Refinement,
    RefinementOutcome, RefinementStage, StallWitness,
};
pub use tree::{build_transmission_tree, deepest_pair, TransmissionTree, TreeFinding, TreeNode};
pub use views::{
    candidate_action, candidate_history, incoming_view_sequence, incoming_views,
    layered_prefix_views, CandidateAction, IncomingViewSeq,
};
