use std::fs;
use std::io::Write;
use std::path::Path;

use serde_json::{json, Value};

use setcalc::acceptance::{AccError, AcceptanceFamily, FamilyKind};
use setcalc::arbitrage::{
    check_condition, find_wcps, verify_price_system, verify_witness, ArbError, Condition, Strategy,
    WcpsOutcome, Witness,
};
use setcalc::bid_ask::{check_2d_theorems, BidAskError, Interval};
use setcalc::document::{load_model, Model};
use setcalc::hedging::{superhedge_recursion, zero_claim, HedgeError};
use setcalc::tree::ScenarioTree;

use crate::render::{self, csv_text, json_text, node_header};
use crate::{svg, Common, Format};

pub struct Failure {
    pub code: u8,
    pub message: String,
}

fn malformed(e: impl std::fmt::Display) -> Failure {
    Failure {
        code: 1,
        message: e.to_string(),
    }
}

fn unsupported(e: impl std::fmt::Display) -> Failure {
    Failure {
        code: 2,
        message: e.to_string(),
    }
}

/// Rendered text and the exit status to report after writing it.
pub struct Output {
    pub text: String,
    pub code: u8,
}

impl Output {
    fn ok(text: String) -> Self {
        Output { text, code: 0 }
    }
}

pub fn emit(common: &Common, out: Output) -> Result<u8, Failure> {
    match &common.output {
        Some(path) => fs::write(path, &out.text)
            .map_err(|e| malformed(format!("cannot write {}: {e}", path.display())))?,
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout
                .write_all(out.text.as_bytes())
                .and_then(|_| stdout.flush())
                .map_err(|e| malformed(format!("cannot write output: {e}")))?;
        }
    }
    Ok(out.code)
}

fn read_model(input: &Path) -> Result<Model, Failure> {
    let text = fs::read_to_string(input)
        .map_err(|e| malformed(format!("cannot read {}: {e}", input.display())))?;
    load_model(&text).map_err(|e| malformed(format!("{}: {e}", input.display())))
}

fn no_svg(common: &Common, command: &str) -> Result<(), Failure> {
    if common.format == Format::Svg {
        return Err(unsupported(format!(
            "svg output is not available for {command}"
        )));
    }
    Ok(())
}

fn family_error(e: ArbError) -> Failure {
    match e {
        ArbError::UnsupportedFamily { .. } | ArbError::NotConical(_) | ArbError::BadTime { .. } => {
            unsupported(e)
        }
        ArbError::Acceptance(AccError::Unsupported { .. }) => unsupported(e),
        other => unsupported(format!("computation failed: {other}")),
    }
}

pub fn validate(input: &Path, common: &Common) -> Result<Output, Failure> {
    no_svg(common, "validate")?;
    let m = read_model(input)?;
    let t = &m.tree;
    let source = if m.quotes.is_some() {
        "bid_ask"
    } else if m.solvency.is_some() {
        "cone_generators"
    } else {
        "none"
    };
    let flags = m.solvency.as_ref().map(|k| {
        json!({
            "conical": k.is_conical(),
            "proper": k.is_proper(),
            "strictly_proper": k.is_strictly_proper(),
        })
    });
    if common.format == Format::Csv {
        let header: Vec<String> = [
            "dimension",
            "horizon",
            "nodes",
            "leaves",
            "solvency",
            "claim",
        ]
        .iter()
        .map(|s| s.to_string())
        .collect();
        let row = vec![
            t.dim().to_string(),
            t.horizon().to_string(),
            t.len().to_string(),
            t.leaves().len().to_string(),
            source.to_string(),
            m.claim.is_some().to_string(),
        ];
        return Ok(Output::ok(csv_text(&header, &[row])));
    }
    let doc = json!({
        "command": "validate",
        "valid": true,
        "dimension": t.dim(),
        "horizon": t.horizon(),
        "nodes": t.len(),
        "leaves": t.leaves().len(),
        "solvency": source,
        "solvency_flags": flags,
        "claim": m.claim.is_some(),
    });
    Ok(Output::ok(json_text(doc, common.decimal)))
}

pub fn price(input: &Path, common: &Common) -> Result<Output, Failure> {
    let m = read_model(input)?;
    let t = &m.tree;
    let k = m.require_solvency().map_err(malformed)?;
    if common.format == Format::Svg && t.dim() != 2 {
        return Err(unsupported(format!(
            "svg output needs dimension 2, the tree has dimension {}",
            t.dim()
        )));
    }
    let family = AcceptanceFamily::of(common.acceptance);
    let claim = m.claim.clone().unwrap_or_else(|| zero_claim(t));
    let x = superhedge_recursion(t, k, &claim, &family).map_err(|e| match e {
        HedgeError::Acceptance(_) => unsupported(format!(
            "{} acceptance has no set-valued risk map",
            family.kind
        )),
        other => unsupported(format!("computation failed: {other}")),
    })?;
    match common.format {
        Format::Svg => {
            let panels: Vec<svg::Panel> = t
                .node_ids()
                .map(|n| svg::Panel {
                    title: format!("node {} (t={})", render::label_text(t, n), t.time(n)),
                    row: t.time(n),
                    set: x.at(n).clone(),
                })
                .collect();
            Ok(Output::ok(svg::render(&panels, &common.viewport)))
        }
        Format::Csv => {
            let d = t.dim();
            let mut header: Vec<String> = ["node", "time", "element", "index"]
                .iter()
                .map(|s| s.to_string())
                .collect();
            header.extend(render::coordinate_header("x", d));
            header.push("offset".into());
            let mut rows = Vec::new();
            for n in t.node_ids() {
                let p = x.at(n);
                let base = |kind: &str, i: usize| {
                    vec![
                        render::label_text(t, n),
                        t.time(n).to_string(),
                        kind.to_string(),
                        i.to_string(),
                    ]
                };
                let mut push = |kind: &str,
                                i: usize,
                                v: &[setcalc::Rational],
                                offset: Option<&setcalc::Rational>| {
                    let mut r = base(kind, i);
                    r.extend(v.iter().map(|q| q.to_string()));
                    r.push(offset.map(|o| o.to_string()).unwrap_or_default());
                    rows.push(r);
                };
                if p.is_empty() {
                    push("empty", 0, &vec![setcalc::Rational::zero(); d], None);
                    continue;
                }
                for (i, h) in p.inequalities().iter().enumerate() {
                    push("inequality", i, &h.normal, Some(&h.offset));
                }
                for (i, h) in p.equalities().iter().enumerate() {
                    push("equality", i, &h.normal, Some(&h.offset));
                }
                for (i, v) in p.vertices().iter().enumerate() {
                    push("vertex", i, v, None);
                }
                for (i, v) in p.rays().iter().enumerate() {
                    push("ray", i, v, None);
                }
                for (i, v) in p.lines().iter().enumerate() {
                    push("line", i, v, None);
                }
            }
            Ok(Output::ok(csv_text(&header, &rows)))
        }
        Format::Json => {
            let nodes: Vec<Value> = t
                .node_ids()
                .map(|n| {
                    let mut h = node_header(t, n);
                    h.insert("empty".into(), json!(x.is_empty_at(n)));
                    h.insert("set".into(), render::polyhedron(x.at(n)));
                    Value::Object(h)
                })
                .collect();
            let doc = json!({
                "command": "price",
                "acceptance": family.kind.name(),
                "claim": if m.claim.is_some() { "given" } else { "zero" },
                "nodes": nodes,
            });
            Ok(Output::ok(json_text(doc, common.decimal)))
        }
    }
}

fn strategy_json(tree: &ScenarioTree, s: &Strategy) -> Value {
    let part = |items: &[(setcalc::tree::NodeId, setcalc::linalg::Vector)]| -> Value {
        Value::Array(
            items
                .iter()
                .map(|(n, v)| json!({"node": render::label(tree, *n), "value": render::vector(v)}))
                .collect(),
        )
    };
    json!({"trades": part(&s.trades), "increments": part(&s.increments)})
}

fn witness_json(tree: &ScenarioTree, w: &Witness) -> Value {
    json!({
        "node": render::label(tree, w.node),
        "position": w.position.as_ref().map(|v| render::vector(v)),
        "strategy": w.strategy.as_ref().map(|s| strategy_json(tree, s)),
    })
}

fn default_conditions(kind: FamilyKind) -> Vec<Condition> {
    Condition::ALL
        .iter()
        .copied()
        .filter(|c| kind == FamilyKind::EssInf || !matches!(c, Condition::Na2 | Condition::Nas))
        .collect()
}

pub fn arbitrage(
    input: &Path,
    common: &Common,
    conditions: &[Condition],
    fail_on_arbitrage: bool,
) -> Result<Output, Failure> {
    no_svg(common, "arbitrage")?;
    let m = read_model(input)?;
    let t = &m.tree;
    let k = m.require_solvency().map_err(malformed)?;
    let family = AcceptanceFamily::of(common.acceptance);
    let conditions = if conditions.is_empty() {
        default_conditions(family.kind)
    } else {
        conditions.to_vec()
    };
    let mut verdicts = Vec::new();
    for &c in &conditions {
        let v = check_condition(t, k, &family, c).map_err(family_error)?;
        let verified = verify_witness(t, k, &family, &v);
        verdicts.push((v, verified));
    }
    let any_failed = verdicts.iter().any(|(v, _)| !v.holds);
    let code = if fail_on_arbitrage && any_failed {
        3
    } else {
        0
    };
    if common.format == Format::Csv {
        let header: Vec<String> = [
            "condition",
            "family",
            "holds",
            "method",
            "agreement",
            "witness_node",
            "witness_verified",
        ]
        .iter()
        .map(|s| s.to_string())
        .collect();
        let rows: Vec<Vec<String>> = verdicts
            .iter()
            .map(|(v, ok)| {
                vec![
                    v.condition.name().to_string(),
                    v.family.name().to_string(),
                    v.holds.to_string(),
                    v.method.name().to_string(),
                    v.agreement.map(|a| a.to_string()).unwrap_or_default(),
                    v.witness
                        .as_ref()
                        .map(|w| render::label_text(t, w.node))
                        .unwrap_or_default(),
                    ok.is_ok().to_string(),
                ]
            })
            .collect();
        return Ok(Output {
            text: csv_text(&header, &rows),
            code,
        });
    }
    let items: Vec<Value> = verdicts
        .iter()
        .map(|(v, ok)| {
            json!({
                "condition": v.condition.name(),
                "holds": v.holds,
                "method": v.method.name(),
                "agreement": v.agreement,
                "note": v.note,
                "witness": v.witness.as_ref().map(|w| witness_json(t, w)),
                "witness_verified": ok.is_ok(),
                "verification_error": ok.as_ref().err(),
            })
        })
        .collect();
    let doc = json!({
        "command": "arbitrage",
        "acceptance": family.kind.name(),
        "arbitrage_free": !any_failed,
        "verdicts": items,
    });
    Ok(Output {
        text: json_text(doc, common.decimal),
        code,
    })
}

pub fn cps(input: &Path, common: &Common, strict: bool, time: usize) -> Result<Output, Failure> {
    no_svg(common, "cps")?;
    let m = read_model(input)?;
    let t = &m.tree;
    let k = m.require_solvency().map_err(malformed)?;
    let family = AcceptanceFamily::of(common.acceptance);
    let outcome = find_wcps(t, k, &family, time, strict).map_err(family_error)?;
    let d = t.dim();
    match (&outcome, common.format) {
        (WcpsOutcome::Found(z), Format::Csv) => {
            let mut header: Vec<String> = vec!["node".into(), "time".into()];
            header.extend(render::coordinate_header("m", d));
            let rows: Vec<Vec<String>> = z
                .values
                .entries()
                .map(|(n, v)| {
                    let mut r = vec![render::label_text(t, n), t.time(n).to_string()];
                    r.extend(v.iter().map(|q| q.to_string()));
                    r
                })
                .collect();
            Ok(Output::ok(csv_text(&header, &rows)))
        }
        (WcpsOutcome::Infeasible { farkas, .. }, Format::Csv) => {
            let header = vec!["constraint".to_string(), "multiplier".to_string()];
            let rows: Vec<Vec<String>> = farkas
                .iter()
                .enumerate()
                .map(|(i, y)| vec![i.to_string(), y.to_string()])
                .collect();
            Ok(Output::ok(csv_text(&header, &rows)))
        }
        (WcpsOutcome::Found(z), _) => {
            let report = verify_price_system(t, k, &family, z);
            let system: Vec<Value> = z
                .values
                .entries()
                .map(|(n, v)| {
                    let mut h = node_header(t, n);
                    h.insert("value".into(), render::vector(v));
                    Value::Object(h)
                })
                .collect();
            let failures: Vec<Value> = report
                .failures
                .iter()
                .map(|f| json!({"check": f.kind.to_string(), "node": render::label(t, f.node), "detail": f.detail}))
                .collect();
            let doc = json!({
                "command": "cps",
                "acceptance": family.kind.name(),
                "t": time,
                "strict": strict,
                "found": true,
                "epsilon": render::rational(&z.epsilon),
                "note": z.note,
                "system": system,
                "verification": {"passed": report.passed(), "checked": report.checked, "failures": failures},
            });
            Ok(Output::ok(json_text(doc, common.decimal)))
        }
        (WcpsOutcome::Infeasible { lp, farkas }, _) => {
            let doc = json!({
                "command": "cps",
                "acceptance": family.kind.name(),
                "t": time,
                "strict": strict,
                "found": false,
                "certificate": {
                    "variables": lp.n,
                    "constraints": lp.constraints.len(),
                    "multipliers": render::vector(farkas),
                    "verified": lp.check_farkas(farkas).is_ok(),
                },
            });
            Ok(Output::ok(json_text(doc, common.decimal)))
        }
    }
}

fn interval_json(i: &Interval) -> Value {
    json!({"lower": render::rational(&i.lower), "upper": render::rational(&i.upper), "empty": i.is_empty()})
}

pub fn two_asset(input: &Path, common: &Common) -> Result<Output, Failure> {
    no_svg(common, "two-asset")?;
    let m = read_model(input)?;
    let t = &m.tree;
    let y = m.require_quotes().map_err(malformed)?;
    let report = check_2d_theorems(t, y).map_err(|e| match e {
        BidAskError::Arbitrage(a) => family_error(a),
        other => unsupported(other),
    })?;
    if common.format == Format::Csv {
        let header: Vec<String> = [
            "node",
            "time",
            "bid",
            "ask",
            "tilde_bid",
            "tilde_ask",
            "hat_bid",
            "hat_ask",
        ]
        .iter()
        .map(|s| s.to_string())
        .collect();
        let rows: Vec<Vec<String>> = t
            .node_ids()
            .map(|n| {
                let (s, ti, h) = (y.at(n), report.tilde.at(n), report.hat.at(n));
                [&s.lower, &s.upper, &ti.lower, &ti.upper, &h.lower, &h.upper]
                    .iter()
                    .map(|q| q.to_string())
                    .fold(
                        vec![render::label_text(t, n), t.time(n).to_string()],
                        |mut r, x| {
                            r.push(x);
                            r
                        },
                    )
            })
            .collect();
        return Ok(Output::ok(csv_text(&header, &rows)));
    }
    let nodes: Vec<Value> = t
        .node_ids()
        .map(|n| {
            let mut h = node_header(t, n);
            h.insert("bid".into(), render::rational(y.bid().at(n)));
            h.insert("ask".into(), render::rational(y.ask().at(n)));
            h.insert("tilde".into(), interval_json(report.tilde.at(n)));
            h.insert("hat".into(), interval_json(report.hat.at(n)));
            Value::Object(h)
        })
        .collect();
    let verdicts: Vec<Value> = report
        .checks
        .iter()
        .map(|c| {
            json!({
                "condition": c.condition.name(),
                "family": c.family.name(),
                "holds": c.interval,
                "engine": c.engine,
                "agree": c.agrees(),
                "failing_node": c.node.map(|n| render::label(t, n)),
            })
        })
        .collect();
    let doc = json!({
        "command": "two-asset",
        "nodes": nodes,
        "verdicts": verdicts,
        "all_agree": report.all_agree(),
    });
    Ok(Output::ok(json_text(doc, common.decimal)))
}
