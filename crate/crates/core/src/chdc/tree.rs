//! The rooted-tree encoding of a configuration.
//!
//! A root mark precedes vertex 1 and the vertices form a path. For each dimer
//! `(p, q)` the path edge `p - (p+1)` is cut: `p` keeps a bud and gets `q` as
//! its second child, while the inner vertices `q-1, ..., p+1` hang from `q` as
//! a chain that ends in the matching leaf. Children are ordered
//! `[bud, right endpoint]` at a left endpoint and `[chain, continuation]` at a
//! right endpoint.

use serde::{Deserialize, Serialize};

use super::{is_valid, Configuration, Dimer};
use crate::error::{Error, Result};
use crate::word::{Colour, Word};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase", tag = "kind", content = "colour")]
pub enum NodeKind {
    Root,
    Vertex(Colour),
    Bud,
    Leaf,
}

impl NodeKind {
    /// Buds carry `-1`, leaves `+1`, everything else `0`.
    pub fn charge(self) -> i64 {
        match self {
            NodeKind::Bud => -1,
            NodeKind::Leaf => 1,
            _ => 0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TreeNode {
    #[serde(flatten)]
    pub kind: NodeKind,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub children: Vec<TreeNode>,
}

impl TreeNode {
    pub fn new(kind: NodeKind, children: Vec<TreeNode>) -> Self {
        TreeNode { kind, children }
    }

    fn leafless(kind: NodeKind) -> Self {
        TreeNode::new(kind, Vec::new())
    }

    /// Total charge of the subtree rooted here.
    pub fn charge(&self) -> i64 {
        self.kind.charge() + self.children.iter().map(TreeNode::charge).sum::<i64>()
    }

    fn count(&self, pred: &impl Fn(&TreeNode) -> bool) -> usize {
        usize::from(pred(self)) + self.children.iter().map(|c| c.count(pred)).sum::<usize>()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct HcdTree {
    pub root: TreeNode,
}

impl HcdTree {
    pub fn charge(&self) -> i64 {
        self.root.charge()
    }

    pub fn buds(&self) -> usize {
        self.root.count(&|n| n.kind == NodeKind::Bud)
    }

    pub fn leaves(&self) -> usize {
        self.root.count(&|n| n.kind == NodeKind::Leaf)
    }

    /// Vertices carrying a bud; these are the `b3`/`r3` weighted ones.
    pub fn bud_vertices(&self, colour: Colour) -> usize {
        self.root.count(&|n| {
            n.kind == NodeKind::Vertex(colour)
                && n.children.first().is_some_and(|c| c.kind == NodeKind::Bud)
        })
    }

    /// Bivalent vertices sitting on a chain between a right endpoint and its
    /// leaf; these carry the `y` weight.
    pub fn chain_vertices(&self) -> usize {
        let mut total = 0;
        let mut stack = vec![&self.root];
        while let Some(n) = stack.pop() {
            if let [first, second] = n.children.as_slice() {
                if first.kind == NodeKind::Bud {
                    let mut cur = second.children.first();
                    while let Some(c) = cur {
                        if !matches!(c.kind, NodeKind::Vertex(_)) {
                            break;
                        }
                        total += 1;
                        cur = c.children.first();
                    }
                }
            }
            stack.extend(n.children.iter());
        }
        total
    }

    /// Checks the charge rules: total charge 0, and every subtree other than
    /// a bud has charge 0 or 1.
    pub fn check_charges(&self) -> Result<()> {
        fn go(n: &TreeNode) -> Result<i64> {
            let mut c = n.kind.charge();
            for ch in &n.children {
                c += go(ch)?;
            }
            if n.kind != NodeKind::Bud && !(0..=1).contains(&c) {
                return Err(Error::MalformedTree(format!(
                    "subtree at {:?} has charge {c}",
                    n.kind
                )));
            }
            Ok(c)
        }
        match go(&self.root)? {
            0 => Ok(()),
            c => Err(Error::MalformedTree(format!(
                "total charge {c}, expected 0"
            ))),
        }
    }
}

/// Builds the tree of a valid configuration.
pub fn to_tree(config: &Configuration) -> Result<HcdTree> {
    if !is_valid(config)? {
        return Err(Error::InvalidConfig(format!(
            "cannot build a tree for invalid dimers {:?} on {}",
            config.dimers, config.word
        )));
    }
    let letters = config.word.letters();
    let n = letters.len();
    // partner[p] = Some(q) when (p, q) is a dimer, 1-based.
    let mut partner = vec![None; n + 2];
    let mut is_right = vec![false; n + 2];
    let mut is_inner = vec![false; n + 2];
    for d in &config.dimers {
        partner[d.left] = Some(d.right);
        is_right[d.right] = true;
        is_inner[d.left + 1..d.right].fill(true);
    }

    // Build from the end so continuations exist before they are attached.
    let mut built: Vec<Option<TreeNode>> = vec![None; n + 2];
    for p in (1..=n).rev() {
        if is_inner[p] {
            // attached through the chain of its dimer
            continue;
        }
        let colour = letters[p - 1];
        let node = if let Some(q) = partner[p] {
            let right = built[q].take().expect("right endpoint built first");
            TreeNode::new(
                NodeKind::Vertex(colour),
                vec![TreeNode::leafless(NodeKind::Bud), right],
            )
        } else if is_right[p] {
            let left = config
                .dimers
                .iter()
                .find(|d| d.right == p)
                .map(|d| d.left)
                .expect("dimer ending here");
            let mut chain = TreeNode::leafless(NodeKind::Leaf);
            for inner in left + 1..p {
                chain = TreeNode::new(NodeKind::Vertex(letters[inner - 1]), vec![chain]);
            }
            let mut children = vec![chain];
            if let Some(next) = built[p + 1].take() {
                children.push(next);
            }
            TreeNode::new(NodeKind::Vertex(colour), children)
        } else {
            let children = built[p + 1].take().into_iter().collect();
            TreeNode::new(NodeKind::Vertex(colour), children)
        };
        built[p] = Some(node);
    }
    let children = built[1].take().into_iter().collect();
    Ok(HcdTree {
        root: TreeNode::new(NodeKind::Root, children),
    })
}

/// Reads a configuration back from its tree, merging each bud with the leaf
/// that closes the chain under its sibling.
pub fn from_tree(tree: &HcdTree) -> Result<Configuration> {
    let bad = |msg: String| Error::MalformedTree(msg);
    if tree.root.kind != NodeKind::Root {
        return Err(bad("tree must start at a root mark".into()));
    }
    tree.check_charges()?;
    let mut letters: Vec<Colour> = Vec::new();
    let mut dimers = Vec::new();
    let mut cur = match tree.root.children.as_slice() {
        [] => None,
        [one] => Some(one),
        _ => return Err(bad("root has more than one child".into())),
    };
    while let Some(node) = cur {
        let NodeKind::Vertex(colour) = node.kind else {
            return Err(bad(format!("expected a vertex, found {:?}", node.kind)));
        };
        letters.push(colour);
        cur = match node.children.as_slice() {
            [] => None,
            [bud, right] if bud.kind == NodeKind::Bud => {
                if !bud.children.is_empty() {
                    return Err(bad("bud with children".into()));
                }
                let left = letters.len();
                let NodeKind::Vertex(rc) = right.kind else {
                    return Err(bad(format!("bud sibling is {:?}", right.kind)));
                };
                let (chain, rest) = match right.children.split_first() {
                    Some((chain, rest)) => (chain, rest),
                    None => return Err(bad("unmatched bud: right endpoint has no leaf".into())),
                };
                let mut inner = Vec::new();
                let mut link = chain;
                loop {
                    match (link.kind, link.children.as_slice()) {
                        (NodeKind::Leaf, []) => break,
                        (NodeKind::Vertex(c), [next]) => {
                            inner.push(c);
                            link = next;
                        }
                        (k, _) => return Err(bad(format!("malformed chain at {k:?}"))),
                    }
                }
                letters.extend(inner.iter().rev());
                letters.push(rc);
                dimers.push(Dimer::new(colour, left, letters.len()));
                match rest {
                    [] => None,
                    [next] => Some(next),
                    _ => return Err(bad("right endpoint with too many children".into())),
                }
            }
            [next] if matches!(next.kind, NodeKind::Vertex(_)) => Some(next),
            other => {
                return Err(bad(format!(
                    "vertex with unexpected children {:?}",
                    other.iter().map(|c| c.kind).collect::<Vec<_>>()
                )))
            }
        };
    }
    let config = Configuration::new(Word::new(letters), dimers);
    if !is_valid(&config)? {
        return Err(bad(format!(
            "decoded dimers {:?} are not valid",
            config.dimers
        )));
    }
    Ok(config)
}
