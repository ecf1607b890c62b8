//! Quasi-alternating certificates.
//!
//! A certificate is a binary tree of diagrams. Each inner node names a
//! crossing whose two smoothings have positive determinants adding up to
//! the node's determinant, and each leaf is a one-circle diagram. Nodes are
//! stored by fingerprint of the simplified diagram, and crossing indices
//! refer to the diagram rebuilt from that fingerprint, so a certificate can
//! be checked without trusting the search that produced it.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::diagram::{Fingerprint, PlanarDiagram, Resolution};
use crate::goeritz;

pub const DEFAULT_BUDGET: usize = 100_000;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum QANode {
    Split {
        fingerprint: Fingerprint,
        det: u64,
        crossing: usize,
        children: Box<[QANode; 2]>,
    },
    Leaf {
        fingerprint: Fingerprint,
        det: u64,
        leaf: bool,
    },
}

impl QANode {
    pub fn det(&self) -> u64 {
        match self {
            QANode::Split { det, .. } | QANode::Leaf { det, .. } => *det,
        }
    }

    pub fn fingerprint(&self) -> &Fingerprint {
        match self {
            QANode::Split { fingerprint, .. } | QANode::Leaf { fingerprint, .. } => fingerprint,
        }
    }

    pub fn depth(&self) -> usize {
        match self {
            QANode::Split { children, .. } => 1 + children[0].depth().max(children[1].depth()),
            QANode::Leaf { .. } => 0,
        }
    }

    pub fn node_count(&self) -> usize {
        match self {
            QANode::Split { children, .. } => {
                1 + children[0].node_count() + children[1].node_count()
            }
            QANode::Leaf { .. } => 1,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct QACertificate {
    pub root: QANode,
}

impl QACertificate {
    pub fn det(&self) -> u64 {
        self.root.det()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("certificate serializes")
    }

    pub fn from_json(text: &str) -> serde_json::Result<Self> {
        serde_json::from_str(text)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum UnknownReason {
    BudgetExhausted,
    SearchExhausted,
    ZeroDeterminant,
}

/// Why the search stopped without a certificate. This is never a proof of
/// non-membership: only the supplied diagram and its smoothings were tried.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct QAUnknown {
    pub reason: UnknownReason,
    pub expansions: usize,
    pub tried: Vec<Fingerprint>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum QAOutcome {
    Certificate(QACertificate),
    Unknown(QAUnknown),
}

impl QAOutcome {
    pub fn certificate(&self) -> Option<&QACertificate> {
        match self {
            QAOutcome::Certificate(c) => Some(c),
            QAOutcome::Unknown(_) => None,
        }
    }

    pub fn is_certificate(&self) -> bool {
        self.certificate().is_some()
    }
}

enum Step {
    Found(QANode),
    Failed,
    OutOfBudget,
}

struct Search {
    budget: usize,
    expansions: usize,
    memo: HashMap<Fingerprint, Option<QANode>>,
}

fn is_unknot_leaf(d: &PlanarDiagram) -> bool {
    d.crossing_count() == 0 && d.free_loops() == 1
}

fn det_of(d: &PlanarDiagram) -> u64 {
    goeritz::determinant(d).unwrap_or(0)
}

/// Simplified smoothing of `d` at `k`, its fingerprint and determinant.
fn child(d: &PlanarDiagram, k: usize, r: Resolution) -> Option<(Fingerprint, u64)> {
    let s = d.resolve(k, r).ok()?.simplify();
    Some((s.fingerprint(), det_of(&s)))
}

impl Search {
    fn visit(&mut self, fp: &Fingerprint, det: u64) -> Step {
        if let Some(hit) = self.memo.get(fp) {
            return match hit {
                Some(node) => Step::Found(node.clone()),
                None => Step::Failed,
            };
        }
        let Ok(d) = fp.to_diagram() else {
            return Step::Failed;
        };
        if is_unknot_leaf(&d) {
            let node = QANode::Leaf {
                fingerprint: fp.clone(),
                det,
                leaf: true,
            };
            self.memo.insert(fp.clone(), Some(node.clone()));
            return Step::Found(node);
        }
        if det == 0 || d.crossing_count() == 0 {
            self.memo.insert(fp.clone(), None);
            return Step::Failed;
        }
        if self.expansions >= self.budget {
            return Step::OutOfBudget;
        }
        self.expansions += 1;

        let mut candidates = Vec::new();
        for k in 0..d.crossing_count() {
            let (Some(a), Some(b)) = (
                child(&d, k, Resolution::Zero),
                child(&d, k, Resolution::One),
            ) else {
                continue;
            };
            if a.1 > 0 && b.1 > 0 && a.1 + b.1 == det {
                candidates.push((a.1.abs_diff(b.1), k, a, b));
            }
        }
        candidates.sort_by_key(|c| (c.0, c.1));

        let mut starved = false;
        for (_, k, a, b) in candidates {
            let left = match self.visit(&a.0, a.1) {
                Step::Found(n) => n,
                Step::Failed => continue,
                Step::OutOfBudget => {
                    starved = true;
                    continue;
                }
            };
            match self.visit(&b.0, b.1) {
                Step::Found(right) => {
                    let node = QANode::Split {
                        fingerprint: fp.clone(),
                        det,
                        crossing: k,
                        children: Box::new([left, right]),
                    };
                    self.memo.insert(fp.clone(), Some(node.clone()));
                    return Step::Found(node);
                }
                Step::Failed => {}
                Step::OutOfBudget => starved = true,
            }
        }
        if starved {
            Step::OutOfBudget
        } else {
            self.memo.insert(fp.clone(), None);
            Step::Failed
        }
    }
}

/// Searches the smoothings of `d` for a quasi-alternating certificate,
/// expanding at most `budget` inner nodes.
pub fn qa_search(d: &PlanarDiagram, budget: usize) -> QAOutcome {
    let s = d.simplify();
    let fp = s.fingerprint();
    let det = det_of(&s);
    if det == 0 {
        return QAOutcome::Unknown(QAUnknown {
            reason: UnknownReason::ZeroDeterminant,
            expansions: 0,
            tried: vec![fp],
        });
    }
    let mut search = Search {
        budget,
        expansions: 0,
        memo: HashMap::new(),
    };
    let step = search.visit(&fp, det);
    let reason = match step {
        Step::Found(root) => return QAOutcome::Certificate(QACertificate { root }),
        Step::Failed => UnknownReason::SearchExhausted,
        Step::OutOfBudget => UnknownReason::BudgetExhausted,
    };
    QAOutcome::Unknown(QAUnknown {
        reason,
        expansions: search.expansions,
        tried: vec![fp],
    })
}

/// Rechecks every node of `c` from its fingerprint alone.
pub fn verify_certificate(c: &QACertificate) -> bool {
    let Ok(d) = c.root.fingerprint().to_diagram() else {
        return false;
    };
    verify_node(&c.root, d.crossing_count())
}

/// As [`verify_certificate`], and also checks that the root is the
/// simplified form of `d`.
pub fn verify_certificate_for(c: &QACertificate, d: &PlanarDiagram) -> bool {
    d.simplify().fingerprint() == *c.root.fingerprint() && verify_certificate(c)
}

fn verify_node(node: &QANode, depth_left: usize) -> bool {
    let Ok(d) = node.fingerprint().to_diagram() else {
        return false;
    };
    if d.fingerprint() != *node.fingerprint() || det_of(&d) != node.det() || node.det() == 0 {
        return false;
    }
    match node {
        QANode::Leaf { leaf, .. } => *leaf && is_unknot_leaf(&d),
        QANode::Split {
            det,
            crossing,
            children,
            ..
        } => {
            if depth_left == 0 || *crossing >= d.crossing_count() {
                return false;
            }
            let kinds = [Resolution::Zero, Resolution::One];
            for (kid, r) in children.iter().zip(kinds) {
                match child(&d, *crossing, r) {
                    Some((fp, _)) if fp == *kid.fingerprint() => {}
                    _ => return false,
                }
            }
            children[0].det() + children[1].det() == *det
                && children.iter().all(|k| verify_node(k, depth_left - 1))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn trefoil() -> PlanarDiagram {
        PlanarDiagram::parse_pd("X 1,5,2,4; X 3,1,4,6; X 5,3,6,2").unwrap()
    }

    #[test]
    fn unknot_is_a_leaf() {
        let out = qa_search(&PlanarDiagram::unknot(), 10);
        let c = out.certificate().expect("leaf certificate");
        assert!(matches!(c.root, QANode::Leaf { det: 1, .. }));
        assert!(verify_certificate(c));
    }

    #[test]
    fn trefoil_splits_one_plus_two() {
        let out = qa_search(&trefoil(), DEFAULT_BUDGET);
        let c = out.certificate().expect("trefoil is quasi-alternating");
        let QANode::Split { det, children, .. } = &c.root else {
            panic!("expected a split root");
        };
        assert_eq!(*det, 3);
        let mut dets = [children[0].det(), children[1].det()];
        dets.sort_unstable();
        assert_eq!(dets, [1, 2]);
        assert!(verify_certificate_for(c, &trefoil()));
    }

    #[test]
    fn tampering_is_detected() {
        let c = qa_search(&trefoil(), DEFAULT_BUDGET)
            .certificate()
            .unwrap()
            .clone();
        let mut bad = c.clone();
        if let QANode::Split { det, .. } = &mut bad.root {
            *det += 1;
        }
        assert!(!verify_certificate(&bad));

        let mut bad = c.clone();
        if let QANode::Split { children, .. } = &mut bad.root {
            children.swap(0, 1);
        }
        assert!(!verify_certificate(&bad));

        let mut bad = c;
        if let QANode::Split { crossing, .. } = &mut bad.root {
            *crossing = 17;
        }
        assert!(!verify_certificate(&bad));
    }

    #[test]
    fn json_round_trip() {
        let c = qa_search(&trefoil(), DEFAULT_BUDGET)
            .certificate()
            .unwrap()
            .clone();
        let text = c.to_json();
        assert!(text.contains("\"leaf\": true"));
        assert_eq!(QACertificate::from_json(&text).unwrap(), c);
    }

    #[test]
    fn hopf_link_and_unlink() {
        let hopf = PlanarDiagram::parse_pd("X 4,1,3,2; X 2,3,1,4").unwrap();
        assert!(qa_search(&hopf, 100).is_certificate());
        let QAOutcome::Unknown(u) = qa_search(&PlanarDiagram::unlink(2), 100) else {
            panic!("two-component unlink has determinant zero");
        };
        assert_eq!(u.reason, UnknownReason::ZeroDeterminant);
    }

    #[test]
    fn tiny_budget_reports_exhaustion() {
        let d = PlanarDiagram::parse_pd(
            "X 1,7,2,6; X 3,10,4,11; X 5,3,6,2; X 7,1,8,12; X 9,4,10,5; X 11,9,12,8",
        )
        .unwrap();
        let QAOutcome::Unknown(u) = qa_search(&d, 1) else {
            panic!("one expansion cannot certify a six-crossing knot");
        };
        assert_eq!(u.reason, UnknownReason::BudgetExhausted);
        assert_eq!(u.expansions, 1);
        assert!(qa_search(&d, DEFAULT_BUDGET).is_certificate());
    }
}
