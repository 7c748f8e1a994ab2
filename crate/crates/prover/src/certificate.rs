use crate::expr::{Assumptions, Expr, Predicate};
use crate::parse::{parse, print};
use crate::simplify::{simplify_traced, TraceStep, DEFAULT_STEP_LIMIT};
use crate::ProverError;
use num_rational::BigRational;
use std::fmt::Write as _;

/// Which side of the goal a rewrite acted on.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GoalSide {
    Lhs,
    Rhs,
}

/// Discharged side conditions; the checker re-derives them structurally,
/// except definitional claims, which record modeling axioms verbatim.
#[derive(Debug, Clone, PartialEq)]
pub enum Claim {
    Positive(Expr),
    Nonzero(Expr),
    RealValued(Expr),
    Definitional(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Relation {
    Eq,
    Le,
}

/// One step of a proof trace. Rewrites carry the rule name, position path,
/// and full before/after expressions; numeric-evidence steps carry closed
/// rational expressions compared exactly, and are a distinct kind so purely
/// equational certificates stay distinguishable.
#[derive(Debug, Clone, PartialEq)]
pub enum ProofStep {
    Rewrite {
        side: GoalSide,
        rule: String,
        path: Vec<usize>,
        before: Expr,
        after: Expr,
    },
    SideCondition {
        claim: Claim,
    },
    NumericEvidence {
        description: String,
        relation: Relation,
        lhs: Expr,
        rhs: Expr,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ProofStatus {
    Proved,
    Failed,
}

/// Equational proof trace: replaying every step (and re-deriving every side
/// condition) from the goal is the check.
#[derive(Debug, Clone, PartialEq)]
pub struct ProofCertificate {
    pub name: String,
    pub goal_lhs: Expr,
    pub goal_rhs: Expr,
    pub assumptions: Assumptions,
    pub steps: Vec<ProofStep>,
    pub status: ProofStatus,
    pub step_count: usize,
}

fn rewrite_steps(side: GoalSide, trace: Vec<TraceStep>) -> Vec<ProofStep> {
    trace
        .into_iter()
        .map(|t| ProofStep::Rewrite {
            side,
            rule: t.rule,
            path: t.path,
            before: t.before,
            after: t.after,
        })
        .collect()
}

/// Prove lhs = rhs by rewriting both sides to normal form; proved exactly
/// when the normal forms coincide. Failure is a status, not an error.
pub fn prove_equal(
    name: &str,
    lhs: &Expr,
    rhs: &Expr,
    assumptions: &Assumptions,
) -> Result<ProofCertificate, ProverError> {
    let (nf_l, trace_l) = simplify_traced(lhs, assumptions, DEFAULT_STEP_LIMIT)?;
    let (nf_r, trace_r) = simplify_traced(rhs, assumptions, DEFAULT_STEP_LIMIT)?;
    let mut steps = rewrite_steps(GoalSide::Lhs, trace_l);
    steps.extend(rewrite_steps(GoalSide::Rhs, trace_r));
    let status = if nf_l == nf_r {
        ProofStatus::Proved
    } else {
        ProofStatus::Failed
    };
    let step_count = steps.len();
    Ok(ProofCertificate {
        name: name.to_string(),
        goal_lhs: lhs.clone(),
        goal_rhs: rhs.clone(),
        assumptions: assumptions.clone(),
        steps,
        status,
        step_count,
    })
}

// --- JSON --------------------------------------------------------------------

fn escape(s: &str) -> String {
    let mut out = String::with_capacity(s.len() + 2);
    for ch in s.chars() {
        match ch {
            '"' => out.push_str("\\\""),
            '\\' => out.push_str("\\\\"),
            '\n' => out.push_str("\\n"),
            c if (c as u32) < 0x20 => {
                let _ = write!(out, "\\u{:04x}", c as u32);
            }
            c => out.push(c),
        }
    }
    out
}

fn claim_json(c: &Claim) -> String {
    match c {
        Claim::Positive(e) => format!("{{\"positive\":\"{}\"}}", escape(&print(e))),
        Claim::Nonzero(e) => format!("{{\"nonzero\":\"{}\"}}", escape(&print(e))),
        Claim::RealValued(e) => format!("{{\"real\":\"{}\"}}", escape(&print(e))),
        Claim::Definitional(s) => format!("{{\"definitional\":\"{}\"}}", escape(s)),
    }
}

fn step_json(s: &ProofStep) -> String {
    match s {
        ProofStep::Rewrite {
            side,
            rule,
            path,
            before,
            after,
        } => format!(
            "{{\"kind\":\"rewrite\",\"side\":\"{}\",\"rule\":\"{}\",\"path\":[{}],\
             \"before\":\"{}\",\"after\":\"{}\"}}",
            match side {
                GoalSide::Lhs => "lhs",
                GoalSide::Rhs => "rhs",
            },
            escape(rule),
            path.iter()
                .map(|p| p.to_string())
                .collect::<Vec<_>>()
                .join(","),
            escape(&print(before)),
            escape(&print(after))
        ),
        ProofStep::SideCondition { claim } => {
            format!("{{\"kind\":\"side_condition\",\"claim\":{}}}", claim_json(claim))
        }
        ProofStep::NumericEvidence {
            description,
            relation,
            lhs,
            rhs,
        } => format!(
            "{{\"kind\":\"numeric_evidence\",\"description\":\"{}\",\"relation\":\"{}\",\
             \"lhs\":\"{}\",\"rhs\":\"{}\"}}",
            escape(description),
            match relation {
                Relation::Eq => "eq",
                Relation::Le => "le",
            },
            escape(&print(lhs)),
            escape(&print(rhs))
        ),
    }
}

pub fn proof_certificate_to_json(cert: &ProofCertificate) -> String {
    let mut s = String::from("{\n");
    let _ = writeln!(s, "  \"certificate\": \"proof\",");
    let _ = writeln!(s, "  \"name\": \"{}\",", escape(&cert.name));
    let _ = writeln!(
        s,
        "  \"goal\": {{\"lhs\": \"{}\", \"rhs\": \"{}\"}},",
        escape(&print(&cert.goal_lhs)),
        escape(&print(&cert.goal_rhs))
    );
    let _ = writeln!(
        s,
        "  \"assumptions\": [{}],",
        cert.assumptions
            .entries
            .iter()
            .map(|(sym, p)| format!(
                "{{\"symbol\":\"{}\",\"predicate\":\"{}\"}}",
                escape(sym),
                p.as_str()
            ))
            .collect::<Vec<_>>()
            .join(",")
    );
    let _ = writeln!(
        s,
        "  \"steps\": [\n    {}\n  ],",
        cert.steps
            .iter()
            .map(step_json)
            .collect::<Vec<_>>()
            .join(",\n    ")
    );
    let _ = writeln!(
        s,
        "  \"status\": \"{}\",",
        match cert.status {
            ProofStatus::Proved => "proved",
            ProofStatus::Failed => "failed",
        }
    );
    let _ = writeln!(s, "  \"step_count\": {}", cert.step_count);
    s.push('}');
    s
}

fn get<'a>(v: &'a serde_json::Value, key: &str) -> Result<&'a serde_json::Value, ProverError> {
    v.get(key)
        .ok_or_else(|| ProverError::Malformed(format!("missing key `{key}`")))
}

fn as_str<'a>(v: &'a serde_json::Value) -> Result<&'a str, ProverError> {
    v.as_str()
        .ok_or_else(|| ProverError::Malformed("expected string".into()))
}

fn expr_field(v: &serde_json::Value, key: &str) -> Result<Expr, ProverError> {
    parse(as_str(get(v, key)?)?)
}

pub fn proof_certificate_from_json(text: &str) -> Result<ProofCertificate, ProverError> {
    let v: serde_json::Value =
        serde_json::from_str(text).map_err(|e| ProverError::Malformed(e.to_string()))?;
    if as_str(get(&v, "certificate")?)? != "proof" {
        return Err(ProverError::Malformed("not a proof certificate".into()));
    }
    let goal = get(&v, "goal")?;
    let mut assumptions = Assumptions::new();
    for a in get(&v, "assumptions")?
        .as_array()
        .ok_or_else(|| ProverError::Malformed("assumptions must be an array".into()))?
    {
        let sym = as_str(get(a, "symbol")?)?;
        let p = Predicate::parse(as_str(get(a, "predicate")?)?)
            .ok_or_else(|| ProverError::Malformed("bad predicate".into()))?;
        assumptions = assumptions.with(sym, p);
    }
    let mut steps = Vec::new();
    for sv in get(&v, "steps")?
        .as_array()
        .ok_or_else(|| ProverError::Malformed("steps must be an array".into()))?
    {
        steps.push(match as_str(get(sv, "kind")?)? {
            "rewrite" => ProofStep::Rewrite {
                side: match as_str(get(sv, "side")?)? {
                    "lhs" => GoalSide::Lhs,
                    "rhs" => GoalSide::Rhs,
                    other => {
                        return Err(ProverError::Malformed(format!("bad side `{other}`")))
                    }
                },
                rule: as_str(get(sv, "rule")?)?.to_string(),
                path: get(sv, "path")?
                    .as_array()
                    .ok_or_else(|| ProverError::Malformed("path must be an array".into()))?
                    .iter()
                    .map(|p| {
                        p.as_u64()
                            .map(|u| u as usize)
                            .ok_or_else(|| ProverError::Malformed("bad path index".into()))
                    })
                    .collect::<Result<Vec<_>, _>>()?,
                before: expr_field(sv, "before")?,
                after: expr_field(sv, "after")?,
            },
            "side_condition" => {
                let claim = get(sv, "claim")?;
                let parsed = if let Some(e) = claim.get("positive") {
                    Claim::Positive(parse(as_str(e)?)?)
                } else if let Some(e) = claim.get("nonzero") {
                    Claim::Nonzero(parse(as_str(e)?)?)
                } else if let Some(e) = claim.get("real") {
                    Claim::RealValued(parse(as_str(e)?)?)
                } else if let Some(t) = claim.get("definitional") {
                    Claim::Definitional(as_str(t)?.to_string())
                } else {
                    return Err(ProverError::Malformed("unknown claim kind".into()));
                };
                ProofStep::SideCondition { claim: parsed }
            }
            "numeric_evidence" => ProofStep::NumericEvidence {
                description: as_str(get(sv, "description")?)?.to_string(),
                relation: match as_str(get(sv, "relation")?)? {
                    "eq" => Relation::Eq,
                    "le" => Relation::Le,
                    other => {
                        return Err(ProverError::Malformed(format!("bad relation `{other}`")))
                    }
                },
                lhs: expr_field(sv, "lhs")?,
                rhs: expr_field(sv, "rhs")?,
            },
            other => return Err(ProverError::Malformed(format!("bad step kind `{other}`"))),
        });
    }
    Ok(ProofCertificate {
        name: as_str(get(&v, "name")?)?.to_string(),
        goal_lhs: expr_field(goal, "lhs")?,
        goal_rhs: expr_field(goal, "rhs")?,
        assumptions,
        steps,
        status: match as_str(get(&v, "status")?)? {
            "proved" => ProofStatus::Proved,
            "failed" => ProofStatus::Failed,
            other => return Err(ProverError::Malformed(format!("bad status `{other}`"))),
        },
        step_count: get(&v, "step_count")?
            .as_u64()
            .ok_or_else(|| ProverError::Malformed("bad step_count".into()))? as usize,
    })
}

/// Rational helper for building closed sample expressions in tests and
/// limiter evidence.
pub fn rat(p: i64, q: i64) -> BigRational {
    BigRational::new(p.into(), q.into())
}
