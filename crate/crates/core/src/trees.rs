//! Planar rooted trees and ordered forests.
//!
//! Trees are written with the grammar `tree := "o" | "[" tree* "]"`, where
//! `[t1 ... tk]` is a root whose children are `t1..tk`, leftmost first.
//! Forests are `"1"` (the empty word) or trees separated by single spaces.

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::hash::{Hash, Hasher};
use std::str::FromStr;
use std::sync::Arc;

use crate::error::{Error, Result};

/// Default bound on `max_grade` accepted by [`enumerate_forests`].
pub const DEFAULT_ENUMERATION_BOUND: usize = 6;

struct Node {
    children: Vec<PlanarTree>,
    code: String,
    size: usize,
}

/// An immutable planar rooted tree. Cloning is cheap.
#[derive(Clone)]
pub struct PlanarTree(Arc<Node>);

impl PlanarTree {
    /// The single vertex `o`.
    pub fn leaf() -> Self {
        Self::with_children(Vec::new())
    }

    /// Root with the given ordered children (the `B+` operator).
    pub fn with_children(children: Vec<PlanarTree>) -> Self {
        let size = 1 + children.iter().map(PlanarTree::vertex_count).sum::<usize>();
        let code = if children.is_empty() {
            "o".to_string()
        } else {
            let mut code = String::with_capacity(2 * size);
            code.push('[');
            for c in &children {
                code.push_str(c.encoding());
            }
            code.push(']');
            code
        };
        PlanarTree(Arc::new(Node {
            children,
            code,
            size,
        }))
    }

    pub fn children(&self) -> &[PlanarTree] {
        &self.0.children
    }

    pub fn vertex_count(&self) -> usize {
        self.0.size
    }

    /// Canonical text encoding; injective on trees.
    pub fn encoding(&self) -> &str {
        &self.0.code
    }

    pub fn is_leaf(&self) -> bool {
        self.0.children.is_empty()
    }

    /// Children of the root as a forest.
    pub fn branches(&self) -> Forest {
        Forest::new(self.0.children.clone())
    }

    pub fn parse(text: &str) -> Result<Self> {
        let bytes = text.as_bytes();
        let (tree, end) = parse_tree_at(bytes, 0)?;
        if end != bytes.len() {
            return Err(Error::parse(end, "trailing input after tree"));
        }
        Ok(tree)
    }

    /// Left grafting `self ↷ sigma`: the sum over every vertex `v` of
    /// `sigma` of the tree obtained by attaching `self` as the new leftmost
    /// child of `v`. Multiplicities count coinciding summands.
    pub fn left_graft(&self, sigma: &PlanarTree) -> BTreeMap<PlanarTree, u64> {
        let mut out = BTreeMap::new();
        for t in graft_everywhere(self, sigma) {
            *out.entry(t).or_insert(0) += 1;
        }
        out
    }
}

/// Free-function form of [`PlanarTree::left_graft`].
pub fn left_graft(tau: &PlanarTree, sigma: &PlanarTree) -> BTreeMap<PlanarTree, u64> {
    tau.left_graft(sigma)
}

fn graft_everywhere(tau: &PlanarTree, sigma: &PlanarTree) -> Vec<PlanarTree> {
    let mut out = Vec::with_capacity(sigma.vertex_count());
    let mut at_root = Vec::with_capacity(sigma.children().len() + 1);
    at_root.push(tau.clone());
    at_root.extend(sigma.children().iter().cloned());
    out.push(PlanarTree::with_children(at_root));
    for (i, child) in sigma.children().iter().enumerate() {
        for grafted in graft_everywhere(tau, child) {
            let mut children = sigma.children().to_vec();
            children[i] = grafted;
            out.push(PlanarTree::with_children(children));
        }
    }
    out
}

fn parse_tree_at(bytes: &[u8], pos: usize) -> Result<(PlanarTree, usize)> {
    match bytes.get(pos) {
        Some(b'o') => Ok((PlanarTree::leaf(), pos + 1)),
        Some(b'[') => {
            let mut children = Vec::new();
            let mut at = pos + 1;
            loop {
                match bytes.get(at) {
                    Some(b']') => return Ok((PlanarTree::with_children(children), at + 1)),
                    Some(_) => {
                        let (child, next) = parse_tree_at(bytes, at)?;
                        children.push(child);
                        at = next;
                    }
                    None => return Err(Error::parse(at, "unclosed `[`")),
                }
            }
        }
        Some(&c) => Err(Error::parse(
            pos,
            format!("unexpected character `{}`", c as char),
        )),
        None => Err(Error::parse(pos, "unexpected end of input")),
    }
}

impl PartialEq for PlanarTree {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || self.0.code == other.0.code
    }
}

impl Eq for PlanarTree {}

impl Hash for PlanarTree {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.0.code.hash(state);
    }
}

impl Ord for PlanarTree {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0.code.cmp(&other.0.code)
    }
}

impl PartialOrd for PlanarTree {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for PlanarTree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.encoding())
    }
}

impl fmt::Debug for PlanarTree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "PlanarTree({})", self.encoding())
    }
}

impl FromStr for PlanarTree {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        PlanarTree::parse(s)
    }
}

/// An ordered word of planar trees; the empty forest is the unit `1`.
///
/// Forests are ordered by grade first, then lexicographically by their trees.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Forest(Vec<PlanarTree>);

impl Forest {
    pub fn new(trees: Vec<PlanarTree>) -> Self {
        Forest(trees)
    }

    pub fn empty() -> Self {
        Forest(Vec::new())
    }

    pub fn single(tree: PlanarTree) -> Self {
        Forest(vec![tree])
    }

    pub fn trees(&self) -> &[PlanarTree] {
        &self.0
    }

    pub fn into_trees(self) -> Vec<PlanarTree> {
        self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Total vertex count.
    pub fn grade(&self) -> usize {
        self.0.iter().map(PlanarTree::vertex_count).sum()
    }

    pub fn concat(&self, other: &Forest) -> Forest {
        let mut trees = Vec::with_capacity(self.len() + other.len());
        trees.extend(self.0.iter().cloned());
        trees.extend(other.0.iter().cloned());
        Forest(trees)
    }

    /// First tree and the remaining word, if non-empty.
    pub fn split_first(&self) -> Option<(&PlanarTree, Forest)> {
        self.0
            .split_first()
            .map(|(head, tail)| (head, Forest(tail.to_vec())))
    }

    pub fn reversed(&self) -> Forest {
        Forest(self.0.iter().rev().cloned().collect())
    }

    /// Grafts the forest onto a new root.
    pub fn graft_root(&self) -> PlanarTree {
        PlanarTree::with_children(self.0.clone())
    }

    pub fn parse(text: &str) -> Result<Self> {
        let trimmed = text.trim();
        let lead = text.len() - text.trim_start().len();
        if trimmed == "1" {
            return Ok(Forest::empty());
        }
        if trimmed.is_empty() {
            return Err(Error::parse(lead, "empty forest; write `1` for the unit"));
        }
        let mut trees = Vec::new();
        let mut offset = lead;
        for chunk in trimmed.split(' ') {
            if chunk.is_empty() {
                offset += 1;
                continue;
            }
            let tree = PlanarTree::parse(chunk).map_err(|e| match e {
                Error::Parse { offset: o, message } => Error::Parse {
                    offset: o + offset,
                    message,
                },
                other => other,
            })?;
            trees.push(tree);
            offset += chunk.len() + 1;
        }
        Ok(Forest(trees))
    }
}

impl From<PlanarTree> for Forest {
    fn from(tree: PlanarTree) -> Self {
        Forest::single(tree)
    }
}

impl Ord for Forest {
    fn cmp(&self, other: &Self) -> Ordering {
        self.grade()
            .cmp(&other.grade())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Forest {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Forest {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("1");
        }
        for (i, t) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            f.write_str(t.encoding())?;
        }
        Ok(())
    }
}

impl fmt::Debug for Forest {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Forest({self})")
    }
}

impl FromStr for Forest {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Forest::parse(s)
    }
}

/// All planar trees with exactly `n` vertices, sorted canonically.
pub fn trees_of_size(n: usize) -> Vec<PlanarTree> {
    if n == 0 {
        return Vec::new();
    }
    let mut out: Vec<PlanarTree> = forests_of_grade(n - 1)
        .into_iter()
        .map(|f| f.graft_root())
        .collect();
    out.sort();
    out
}

/// All ordered forests with exactly `n` vertices, sorted canonically.
pub fn forests_of_grade(n: usize) -> Vec<Forest> {
    let mut table: Vec<Vec<Forest>> = vec![vec![Forest::empty()]];
    for g in 1..=n {
        let mut level = Vec::new();
        for first in 1..=g {
            let heads: Vec<PlanarTree> = table[first - 1]
                .iter()
                .map(|f| f.graft_root())
                .collect();
            for head in &heads {
                for tail in &table[g - first] {
                    let mut trees = Vec::with_capacity(tail.len() + 1);
                    trees.push(head.clone());
                    trees.extend(tail.trees().iter().cloned());
                    level.push(Forest(trees));
                }
            }
        }
        level.sort();
        table.push(level);
    }
    table.swap_remove(n)
}

/// Every forest of grade `<= max_grade` exactly once, in canonical order.
pub fn enumerate_forests(max_grade: usize) -> Result<Vec<Forest>> {
    enumerate_forests_bounded(max_grade, DEFAULT_ENUMERATION_BOUND)
}

pub fn enumerate_forests_bounded(max_grade: usize, bound: usize) -> Result<Vec<Forest>> {
    if max_grade > bound {
        return Err(Error::Capacity {
            what: "forest grade",
            requested: max_grade,
            bound,
        });
    }
    let mut out: BTreeSet<Forest> = BTreeSet::new();
    for g in 0..=max_grade {
        out.extend(forests_of_grade(g));
    }
    Ok(out.into_iter().collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn t(s: &str) -> PlanarTree {
        PlanarTree::parse(s).unwrap()
    }

    #[test]
    fn parses_grammar_examples() {
        assert!(t("o").is_leaf());
        let chain = t("[o]");
        assert_eq!(chain.vertex_count(), 2);
        assert_eq!(chain.children(), &[t("o")]);
        let mixed = t("[o[o]]");
        assert_eq!(mixed.children().len(), 2);
        assert_eq!(mixed.children()[0], t("o"));
        assert_eq!(mixed.children()[1], t("[o]"));
        assert_eq!(mixed.vertex_count(), 4);
    }

    #[test]
    fn empty_brackets_are_a_leaf() {
        assert_eq!(t("[]").encoding(), "o");
        assert_eq!(t("[[]o]").encoding(), "[oo]");
    }

    #[test]
    fn parse_errors_carry_offsets() {
        for (input, offset) in [("", 0), ("x", 0), ("[o", 2), ("[ox]", 2), ("oo", 1), ("[o]]", 3)] {
            match PlanarTree::parse(input) {
                Err(Error::Parse { offset: o, .. }) => assert_eq!(o, offset, "input {input:?}"),
                other => panic!("expected parse error for {input:?}, got {other:?}"),
            }
        }
    }

    #[test]
    fn forest_parse_and_print() {
        assert!(Forest::parse("1").unwrap().is_empty());
        let f = Forest::parse("o [o] [o[o]]").unwrap();
        assert_eq!(f.len(), 3);
        assert_eq!(f.grade(), 7);
        assert_eq!(f.to_string(), "o [o] [o[o]]");
        match Forest::parse("o [x]") {
            Err(Error::Parse { offset, .. }) => assert_eq!(offset, 3),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn grafting_examples() {
        let g = t("o").left_graft(&t("o"));
        assert_eq!(g.into_iter().collect::<Vec<_>>(), vec![(t("[o]"), 1)]);

        let g = t("o").left_graft(&t("[o]"));
        let expected: BTreeMap<_, _> = [(t("[oo]"), 1), (t("[[o]]"), 1)].into_iter().collect();
        assert_eq!(g, expected);

        let g = t("[o]").left_graft(&t("o"));
        assert_eq!(g.into_iter().collect::<Vec<_>>(), vec![(t("[[o]]"), 1)]);
    }

    #[test]
    fn grafting_is_leftmost() {
        // attaching at the root of [[o]] puts the new child before the old one
        let g = t("o").left_graft(&t("[[o]]"));
        let expected: BTreeMap<_, _> = [(t("[o[o]]"), 1), (t("[[oo]]"), 1), (t("[[[o]]]"), 1)]
            .into_iter()
            .collect();
        assert_eq!(g, expected);
    }

    #[test]
    fn enumeration_small_cases() {
        let f = enumerate_forests(1).unwrap();
        assert_eq!(
            f.iter().map(|f| f.to_string()).collect::<Vec<_>>(),
            vec!["1", "o"]
        );
        assert_eq!(enumerate_forests(3).unwrap().len(), 9);
        assert!(matches!(
            enumerate_forests(7),
            Err(Error::Capacity { requested: 7, bound: 6, .. })
        ));
    }

    #[test]
    fn canonical_order_is_grade_then_lex() {
        let f = enumerate_forests(3).unwrap();
        let text: Vec<String> = f.iter().map(|f| f.to_string()).collect();
        assert_eq!(
            text,
            vec!["1", "o", "[o]", "o o", "[[o]]", "[o] o", "[oo]", "o [o]", "o o o"]
        );
    }
}
