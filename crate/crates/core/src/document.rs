//! The JSON tree document: the tree itself plus optional per-node payloads
//! (bid/ask quotes, solvency cone generators, a terminal claim).

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::bid_ask::{BidAskError, BidAskProcess};
use crate::hedging::{HedgeError, SolvencyProcess};
use crate::linalg::Vector;
use crate::rational::Rational;
use crate::tree::{
    AdaptedProcess, NodeLabel, RawNode, RawTree, ScalarProcess, ScenarioTree, TreeError,
    VectorProcess,
};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NodeDocument {
    pub id: NodeLabel,
    pub parent: Option<NodeLabel>,
    pub time: usize,
    pub cond_prob: Rational,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub bid: Option<Rational>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ask: Option<Rational>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cone_generators: Option<Vec<Vector>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub claim: Option<Vector>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TreeDocument {
    pub dimension: usize,
    pub horizon: usize,
    pub nodes: Vec<NodeDocument>,
}

#[derive(Debug, Error)]
pub enum DocumentError {
    #[error("malformed JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Tree(#[from] TreeError),
    #[error("node {node}: {what} has length {found}, expected {expected}")]
    Length {
        node: NodeLabel,
        what: &'static str,
        expected: usize,
        found: usize,
    },
    #[error("node {0} has a bid without an ask or an ask without a bid")]
    HalfQuote(NodeLabel),
    #[error("bid/ask quotes must be given at every node or at none; node {0} has none")]
    PartialQuotes(NodeLabel),
    #[error("node {0} mixes bid/ask quotes with cone generators")]
    MixedPayload(NodeLabel),
    #[error("node {0} carries a claim but is not a leaf")]
    ClaimBeforeHorizon(NodeLabel),
    #[error("claim must be given at every leaf or at none; leaf {0} has none")]
    PartialClaim(NodeLabel),
    #[error("the document carries no solvency data (bid/ask or cone_generators)")]
    NoSolvency,
    #[error("the document carries no bid/ask quotes")]
    NoQuotes,
    #[error(transparent)]
    Hedge(#[from] HedgeError),
    #[error(transparent)]
    BidAsk(#[from] BidAskError),
}

/// A validated document.
#[derive(Debug, Clone)]
pub struct Model {
    pub tree: ScenarioTree,
    pub solvency: Option<SolvencyProcess>,
    pub quotes: Option<BidAskProcess>,
    pub claim: Option<VectorProcess>,
}

impl Model {
    pub fn require_solvency(&self) -> Result<&SolvencyProcess, DocumentError> {
        self.solvency.as_ref().ok_or(DocumentError::NoSolvency)
    }

    pub fn require_quotes(&self) -> Result<&BidAskProcess, DocumentError> {
        self.quotes.as_ref().ok_or(DocumentError::NoQuotes)
    }
}

impl TreeDocument {
    pub fn parse(text: &str) -> Result<TreeDocument, DocumentError> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn to_json_string(&self) -> String {
        serde_json::to_string_pretty(self).expect("documents serialise")
    }

    fn raw_tree(&self) -> RawTree {
        RawTree {
            dimension: self.dimension,
            horizon: self.horizon,
            nodes: self
                .nodes
                .iter()
                .map(|n| RawNode {
                    label: n.id.clone(),
                    parent: n.parent.clone(),
                    time: n.time,
                    cond_prob: n.cond_prob.clone(),
                })
                .collect(),
        }
    }

    /// Validates the tree and then the payloads against it.
    pub fn into_model(self) -> Result<Model, DocumentError> {
        let tree = ScenarioTree::validate(self.raw_tree())?;
        let d = tree.dim();
        let by_node: Vec<&NodeDocument> = tree
            .node_ids()
            .map(|n| {
                let label = tree.label(n);
                self.nodes
                    .iter()
                    .find(|doc| &doc.id == label)
                    .expect("validated node")
            })
            .collect();
        let check_len = |doc: &NodeDocument, what, v: &Vector| {
            if v.len() == d {
                Ok(())
            } else {
                Err(DocumentError::Length {
                    node: doc.id.clone(),
                    what,
                    expected: d,
                    found: v.len(),
                })
            }
        };

        let mut quoted = 0;
        for doc in &by_node {
            match (&doc.bid, &doc.ask) {
                (Some(_), Some(_)) => quoted += 1,
                (None, None) => {}
                _ => return Err(DocumentError::HalfQuote(doc.id.clone())),
            }
            if doc.bid.is_some() && doc.cone_generators.is_some() {
                return Err(DocumentError::MixedPayload(doc.id.clone()));
            }
            for g in doc.cone_generators.iter().flatten() {
                check_len(doc, "cone generator", g)?;
            }
            if let Some(c) = &doc.claim {
                check_len(doc, "claim", c)?;
            }
        }
        if quoted > 0 && quoted < by_node.len() {
            let missing = by_node
                .iter()
                .find(|doc| doc.bid.is_none())
                .expect("some node lacks quotes");
            return Err(DocumentError::PartialQuotes(missing.id.clone()));
        }

        let (solvency, quotes) = if quoted > 0 {
            let mut bid = ScalarProcess::new(&tree);
            let mut ask = ScalarProcess::new(&tree);
            for (n, doc) in tree.node_ids().zip(&by_node) {
                bid.set(n, doc.bid.clone().expect("quoted"));
                ask.set(n, doc.ask.clone().expect("quoted"));
            }
            let quotes = BidAskProcess::new(&tree, bid, ask)?;
            (Some(quotes.solvency(&tree)?), Some(quotes))
        } else if by_node.iter().any(|doc| doc.cone_generators.is_some()) {
            let mut gens = AdaptedProcess::<Vec<Vector>>::new(&tree);
            for (n, doc) in tree.node_ids().zip(&by_node) {
                if let Some(g) = &doc.cone_generators {
                    gens.set(n, g.clone());
                }
            }
            (
                Some(SolvencyProcess::from_cone_generators(&tree, &gens)?),
                None,
            )
        } else {
            (None, None)
        };

        let mut claim = None;
        if by_node.iter().any(|doc| doc.claim.is_some()) {
            let mut xi = VectorProcess::new(&tree);
            for (n, doc) in tree.node_ids().zip(&by_node) {
                match (&doc.claim, tree.is_leaf(n)) {
                    (Some(_), false) => {
                        return Err(DocumentError::ClaimBeforeHorizon(doc.id.clone()))
                    }
                    (Some(c), true) => xi.set(n, c.clone()),
                    (None, true) => return Err(DocumentError::PartialClaim(doc.id.clone())),
                    (None, false) => {}
                }
            }
            claim = Some(xi);
        }
        Ok(Model {
            tree,
            solvency,
            quotes,
            claim,
        })
    }
}

pub fn load_model(text: &str) -> Result<Model, DocumentError> {
    TreeDocument::parse(text)?.into_model()
}

/// Writes a tree and optional payload processes back into document form.
pub fn document_from(
    tree: &ScenarioTree,
    quotes: Option<(&ScalarProcess, &ScalarProcess)>,
    generators: Option<&AdaptedProcess<Vec<Vector>>>,
    claim: Option<&VectorProcess>,
) -> TreeDocument {
    let nodes = tree
        .node_ids()
        .map(|n| NodeDocument {
            id: tree.label(n).clone(),
            parent: tree.parent(n).map(|p| tree.label(p).clone()),
            time: tree.time(n),
            cond_prob: tree.cond_prob(n).clone(),
            bid: quotes.map(|(b, _)| b.at(n).clone()),
            ask: quotes.map(|(_, a)| a.at(n).clone()),
            cone_generators: generators.and_then(|g| g.get(n).cloned()),
            claim: claim.and_then(|c| c.get(n).cloned()),
        })
        .collect();
    TreeDocument {
        dimension: tree.dim(),
        horizon: tree.horizon(),
        nodes,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::from_ints;
    use crate::rational::qi;
    use crate::tree::uniform_tree;

    const BINOMIAL: &str = r#"{
        "dimension": 2, "horizon": 1,
        "nodes": [
            {"id": 0, "parent": null, "time": 0, "cond_prob": "1/1", "bid": "10", "ask": "10/1"},
            {"id": 1, "parent": 0, "time": 1, "cond_prob": "1/2", "bid": "12", "ask": "12", "claim": ["0", "1"]},
            {"id": 2, "parent": 0, "time": 1, "cond_prob": "1/2", "bid": "8", "ask": "8", "claim": ["0", "0"]}
        ]
    }"#;

    #[test]
    fn binomial_document_loads() {
        let m = load_model(BINOMIAL).unwrap();
        assert_eq!(m.tree.len(), 3);
        assert!(m.solvency.is_some());
        let q = m.require_quotes().unwrap();
        assert_eq!(q.bid().at(m.tree.root()), &qi(10));
        let claim = m.claim.unwrap();
        assert_eq!(claim.at(m.tree.leaves()[0]), &from_ints(&[0, 1]));
    }

    #[test]
    fn round_trip() {
        let doc = TreeDocument::parse(BINOMIAL).unwrap();
        let again = TreeDocument::parse(&doc.to_json_string()).unwrap();
        assert_eq!(doc, again);
        let m = doc.into_model().unwrap();
        let q = m.quotes.as_ref().unwrap();
        let written = document_from(&m.tree, Some((q.bid(), q.ask())), None, m.claim.as_ref());
        assert_eq!(written, again);
    }

    #[test]
    fn payload_errors() {
        let half = BINOMIAL.replacen(r#", "ask": "10/1""#, "", 1);
        assert!(matches!(
            load_model(&half),
            Err(DocumentError::HalfQuote(_))
        ));
        let partial = BINOMIAL.replacen(r#", "bid": "10", "ask": "10/1""#, "", 1);
        assert!(matches!(
            load_model(&partial),
            Err(DocumentError::PartialQuotes(_))
        ));
        let early = BINOMIAL.replacen(
            r#""ask": "10/1""#,
            r#""ask": "10/1", "claim": ["1", "1"]"#,
            1,
        );
        assert!(matches!(
            load_model(&early),
            Err(DocumentError::ClaimBeforeHorizon(_))
        ));
        let short = BINOMIAL.replacen(r#"["0", "1"]"#, r#"["0"]"#, 1);
        assert!(matches!(
            load_model(&short),
            Err(DocumentError::Length { .. })
        ));
        let crossed = BINOMIAL.replacen(r#""bid": "12""#, r#""bid": "13""#, 1);
        assert!(matches!(
            load_model(&crossed),
            Err(DocumentError::BidAsk(_))
        ));
        let float = BINOMIAL.replacen(r#""1/2""#, "0.5", 1);
        assert!(matches!(load_model(&float), Err(DocumentError::Json(_))));
        let unknown = BINOMIAL.replacen(r#""time": 0,"#, r#""time": 0, "colour": 1,"#, 1);
        assert!(matches!(load_model(&unknown), Err(DocumentError::Json(_))));
        let bad_sum = BINOMIAL.replacen(r#""1/2""#, r#""1/3""#, 1);
        assert!(matches!(
            load_model(&bad_sum),
            Err(DocumentError::Tree(TreeError::ProbabilitySum { .. }))
        ));
    }

    #[test]
    fn cone_generators_extend_the_orthant() {
        let t = uniform_tree(2, &[1]);
        let mut gens = AdaptedProcess::<Vec<Vector>>::new(&t);
        gens.set(t.root(), vec![from_ints(&[3, -1]), from_ints(&[-1, 2])]);
        let doc = document_from(&t, None, Some(&gens), None);
        let m = TreeDocument::parse(&doc.to_json_string())
            .unwrap()
            .into_model()
            .unwrap();
        let k = m.require_solvency().unwrap();
        assert!(k.at(t.root()).contains(&from_ints(&[3, -1])));
        assert_eq!(k.at(t.leaves()[0]), &crate::Polyhedron::orthant(2));
        assert!(m.quotes.is_none());
        let bad = {
            let mut g = gens.clone();
            g.set(t.root(), vec![from_ints(&[-1, -1])]);
            document_from(&t, None, Some(&g), None)
        };
        assert!(matches!(bad.into_model(), Err(DocumentError::Hedge(_))));
    }
}
