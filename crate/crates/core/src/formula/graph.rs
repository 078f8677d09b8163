//! Hash-consed syntax DAG: one node per structurally distinct subformula.

use std::collections::{BTreeMap, HashMap};

use super::{FixKind, Formula, FormulaError, Literal, Modality, PositionIndex, Replacement};

pub type NodeId = usize;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Node {
    Lit(Literal),
    Var(String),
    Or(NodeId, NodeId),
    And(NodeId, NodeId),
    Modal {
        modality: Modality,
        action: String,
        pos: PositionIndex,
        body: NodeId,
    },
    Fix {
        kind: FixKind,
        var: String,
        body: NodeId,
    },
    Repl(Replacement, NodeId),
}

impl Node {
    pub fn children(&self) -> Vec<NodeId> {
        match self {
            Node::Lit(_) | Node::Var(_) => vec![],
            Node::Or(a, b) | Node::And(a, b) => vec![*a, *b],
            Node::Modal { body, .. } | Node::Fix { body, .. } | Node::Repl(_, body) => vec![*body],
        }
    }
}

/// The subformulas of a formula as an interned DAG. Node ids are assigned in
/// post-order of first occurrence, so children precede parents and the root
/// is the last node.
#[derive(Clone, Debug)]
pub struct SubformulaGraph {
    nodes: Vec<Node>,
    root: NodeId,
    binders: BTreeMap<String, NodeId>,
}

impl SubformulaGraph {
    /// Requires the unique-binding convention.
    pub fn new(phi: &Formula) -> Result<Self, FormulaError> {
        phi.validate()?;
        let mut nodes = Vec::new();
        let mut index = HashMap::new();
        let root = intern(phi, &mut nodes, &mut index);
        let binders = nodes
            .iter()
            .enumerate()
            .filter_map(|(id, n)| match n {
                Node::Fix { var, .. } => Some((var.clone(), id)),
                _ => None,
            })
            .collect();
        Ok(SubformulaGraph { nodes, root, binders })
    }

    pub fn root(&self) -> NodeId {
        self.root
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn node(&self, id: NodeId) -> &Node {
        &self.nodes[id]
    }

    pub fn nodes(&self) -> impl Iterator<Item = (NodeId, &Node)> {
        self.nodes.iter().enumerate()
    }

    /// The binder node of a bound variable.
    pub fn binder(&self, var: &str) -> Option<NodeId> {
        self.binders.get(var).copied()
    }

    pub fn binders(&self) -> &BTreeMap<String, NodeId> {
        &self.binders
    }

    /// Body of the binder of `var`, i.e. where a variable node continues.
    pub fn unfold(&self, var: &str) -> Option<NodeId> {
        match self.nodes[self.binder(var)?] {
            Node::Fix { body, .. } => Some(body),
            _ => None,
        }
    }

    /// Rebuilds the formula rooted at `id`.
    pub fn formula(&self, id: NodeId) -> Formula {
        match &self.nodes[id] {
            Node::Lit(l) => Formula::Lit(l.clone()),
            Node::Var(x) => Formula::Var(x.clone()),
            Node::Or(a, b) => Formula::or(self.formula(*a), self.formula(*b)),
            Node::And(a, b) => Formula::and(self.formula(*a), self.formula(*b)),
            Node::Modal {
                modality,
                action,
                pos,
                body,
            } => Formula::Modal {
                modality: *modality,
                action: action.clone(),
                pos: *pos,
                body: Box::new(self.formula(*body)),
            },
            Node::Fix { kind, var, body } => Formula::fix(*kind, var.clone(), self.formula(*body)),
            Node::Repl(k, body) => Formula::Repl(k.clone(), Box::new(self.formula(*body))),
        }
    }
}

fn intern(f: &Formula, nodes: &mut Vec<Node>, index: &mut HashMap<Node, NodeId>) -> NodeId {
    let node = match f {
        Formula::Lit(l) => Node::Lit(l.clone()),
        Formula::Var(x) => Node::Var(x.clone()),
        Formula::Or(a, b) => {
            let a = intern(a, nodes, index);
            Node::Or(a, intern(b, nodes, index))
        }
        Formula::And(a, b) => {
            let a = intern(a, nodes, index);
            Node::And(a, intern(b, nodes, index))
        }
        Formula::Modal {
            modality,
            action,
            pos,
            body,
        } => Node::Modal {
            modality: *modality,
            action: action.clone(),
            pos: *pos,
            body: intern(body, nodes, index),
        },
        Formula::Fix { kind, var, body } => Node::Fix {
            kind: *kind,
            var: var.clone(),
            body: intern(body, nodes, index),
        },
        Formula::Repl(k, body) => Node::Repl(k.clone(), intern(body, nodes, index)),
    };
    if let Some(&id) = index.get(&node) {
        return id;
    }
    let id = nodes.len();
    nodes.push(node.clone());
    index.insert(node, id);
    id
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::parse_formula;

    #[test]
    fn node_count_matches_structural_subformulas() {
        for text in [
            "mu X. X",
            "p(1) | p(1)",
            "nu X. (p(1) -> p(2)) & [a]_1 <a>_2 X & {1<->2} X",
            "mu X. p(2) | <b>_1 (nu Y. q(1) & (nu Y'. (mu Z. Y' | <a>_1 Z)) & [b]_2 Y)",
        ] {
            let f = parse_formula(text).unwrap();
            let g = SubformulaGraph::new(&f).unwrap();
            assert_eq!(g.len(), f.subformulas().len(), "{text}");
            assert_eq!(g.formula(g.root()), f);
        }
    }

    #[test]
    fn variables_unfold_to_binder_bodies() {
        let f = parse_formula("nu X. <a>_1 X").unwrap();
        let g = SubformulaGraph::new(&f).unwrap();
        let body = g.unfold("X").unwrap();
        assert_eq!(g.formula(body), parse_formula("<a>_1 X").unwrap());
    }
}
