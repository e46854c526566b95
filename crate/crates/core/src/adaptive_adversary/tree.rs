use crate::adaptive_adversary::IncomingViewSeq;
use crate::error::{Error, Result};
use crate::radio::{decide_checked, Action, History, Incoming, OwnAction, Policy};
use crate::Label;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TreeNode {
    /// Ids sharing this branch, ascending.
    pub ids: Vec<Label>,
    pub depth: usize,
    /// Right children on the path from the root, including this node.
    pub rights: usize,
    /// Ids that receive in round `depth + 1`.
    pub left: Option<usize>,
    /// Ids that transmit in round `depth + 1`.
    pub right: Option<usize>,
}

/// A policy defect found while splitting.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TreeFinding {
    /// A non-singleton node reached the depth cap.
    NeverSeparates { ids: Vec<Label>, depth_cap: usize },
    /// A non-singleton node whose branch already spent all `k` transmissions.
    BudgetDeadlock { ids: Vec<Label>, depth: usize },
}

impl TreeFinding {
    pub fn into_error(self) -> Error {
        match self {
            TreeFinding::NeverSeparates { ids, depth_cap } => {
                Error::PolicyNeverSeparates { ids, depth_cap }
            }
            TreeFinding::BudgetDeadlock { ids, depth } => {
                Error::PolicyBudgetDeadlock { ids, depth }
            }
        }
    }
}

/// Splits of a candidate set, round by round, into receivers (left) and
/// transmitters (right) under one shared incoming view. Node 0 is the root.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TransmissionTree {
    pub nodes: Vec<TreeNode>,
    pub findings: Vec<TreeFinding>,
}

/// Builds the tree over `ids`. A node at depth `d` splits by round `d + 1`;
/// empty children are left out, so a node may have a single child.
pub fn build_transmission_tree<P: Policy + ?Sized>(
    ids: &[Label],
    views: &IncomingViewSeq,
    policy: &P,
    k: usize,
    depth_cap: usize,
) -> Result<TransmissionTree> {
    let mut root_ids = ids.to_vec();
    root_ids.sort_unstable();
    root_ids.dedup();
    let mut nodes = vec![TreeNode {
        ids: root_ids,
        depth: 0,
        rights: 0,
        left: None,
        right: None,
    }];
    let mut findings = Vec::new();
    // Every id in a node shares the same private history.
    let mut stack: Vec<(usize, History)> = vec![(0, History::empty())];

    while let Some((idx, history)) = stack.pop() {
        let (depth, rights) = (nodes[idx].depth, nodes[idx].rights);
        if nodes[idx].ids.len() < 2 {
            continue;
        }
        if rights >= k {
            findings.push(TreeFinding::BudgetDeadlock {
                ids: nodes[idx].ids.clone(),
                depth,
            });
            continue;
        }
        if depth >= depth_cap {
            findings.push(TreeFinding::NeverSeparates {
                ids: nodes[idx].ids.clone(),
                depth_cap,
            });
            continue;
        }
        let round = depth + 1;
        let (mut receivers, mut transmitters) = (Vec::new(), Vec::new());
        for &v in &nodes[idx].ids {
            match decide_checked(policy, v, round, &history)? {
                Action::Transmit => transmitters.push(v),
                Action::Receive => receivers.push(v),
            }
        }

        let mut push_child = |ids: Vec<Label>, rights: usize| {
            nodes.push(TreeNode {
                ids,
                depth: round,
                rights,
                left: None,
                right: None,
            });
            nodes.len() - 1
        };
        let right = (!transmitters.is_empty()).then(|| push_child(transmitters, rights + 1));
        let left = (!receivers.is_empty()).then(|| push_child(receivers, rights));
        nodes[idx].left = left;
        nodes[idx].right = right;

        // Left is pushed last so it is expanded first.
        if let Some(r) = right {
            if nodes[r].ids.len() >= 2 {
                let mut h = history.clone();
                h.record(OwnAction::Transmitted, Incoming::Nothing);
                stack.push((r, h));
            }
        }
        if let Some(l) = left {
            if nodes[l].ids.len() >= 2 {
                let mut h = history;
                h.record(OwnAction::Silent, views.at(round).clone());
                stack.push((l, h));
            }
        }
    }
    Ok(TransmissionTree { nodes, findings })
}

impl TransmissionTree {
    pub fn root(&self) -> &TreeNode {
        &self.nodes[0]
    }

    /// Largest node depth.
    pub fn height(&self) -> usize {
        self.nodes.iter().map(|n| n.depth).max().unwrap_or(0)
    }

    pub fn is_sound(&self) -> bool {
        self.findings.is_empty()
    }

    /// Nodes in left-first preorder.
    pub fn preorder(&self) -> Vec<usize> {
        let mut out = Vec::with_capacity(self.nodes.len());
        let mut stack = vec![0];
        while let Some(i) = stack.pop() {
            out.push(i);
            let n = &self.nodes[i];
            stack.extend(n.right);
            stack.extend(n.left);
        }
        out
    }

    /// Whether every node's children partition its ids.
    pub fn check_partition(&self) -> bool {
        self.nodes.iter().all(|n| {
            if n.left.is_none() && n.right.is_none() {
                return true;
            }
            let mut union: Vec<Label> = n
                .left
                .iter()
                .chain(n.right.iter())
                .flat_map(|&c| self.nodes[c].ids.iter().copied())
                .collect();
            union.sort_unstable();
            union == n.ids
        })
    }

    /// Most right children on any root-to-node path.
    pub fn max_rights(&self) -> usize {
        self.nodes.iter().map(|n| n.rights).max().unwrap_or(0)
    }

    pub fn leaves_are_singletons(&self) -> bool {
        self.nodes
            .iter()
            .filter(|n| n.left.is_none() && n.right.is_none())
            .all(|n| n.ids.len() == 1)
    }
}

/// The two smallest ids of the deepest node with at least two ids (leftmost
/// on ties) and that node's depth.
pub fn deepest_pair(tree: &TransmissionTree) -> Result<(Label, Label, usize)> {
    let mut best: Option<usize> = None;
    for i in tree.preorder() {
        let n = &tree.nodes[i];
        if n.ids.len() >= 2 && best.is_none_or(|b| n.depth > tree.nodes[b].depth) {
            best = Some(i);
        }
    }
    let node = &tree.nodes[best.ok_or(Error::NoPair)?];
    Ok((node.ids[0], node.ids[1], node.depth))
}
