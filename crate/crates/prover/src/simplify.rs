use crate::expr::{Assumptions, Expr};
use crate::rules::rule_table;
use crate::ProverError;

/// One recorded rewrite: rule name, position path, and the whole expression
/// before and after the application.
#[derive(Debug, Clone, PartialEq)]
pub struct TraceStep {
    pub rule: String,
    pub path: Vec<usize>,
    pub before: Expr,
    pub after: Expr,
}

pub const DEFAULT_STEP_LIMIT: usize = 100_000;

/// Find the first applicable (position, rule) pair under the deterministic
/// strategy: innermost-leftmost position, rules in table priority order.
fn find_redex(e: &Expr, assum: &Assumptions, path: &mut Vec<usize>) -> Option<(Vec<usize>, &'static str, Expr)> {
    // Children first (innermost), left to right.
    for i in 0..e.child_count() {
        path.push(i);
        if let Some(hit) = find_redex(e.child(i).unwrap(), assum, path) {
            path.pop();
            return Some(hit);
        }
        path.pop();
    }
    for rule in rule_table() {
        if let Some(next) = (rule.apply)(e, assum) {
            return Some((path.clone(), rule.name, next));
        }
    }
    None
}

/// Rewrite to normal form, recording the trace. Errors if the step limit is
/// exceeded (which would signal a non-terminating rule interaction).
pub fn simplify_traced(
    e: &Expr,
    assum: &Assumptions,
    step_limit: usize,
) -> Result<(Expr, Vec<TraceStep>), ProverError> {
    let mut cur = e.clone();
    let mut trace = Vec::new();
    loop {
        if trace.len() >= step_limit {
            return Err(ProverError::StepLimit(step_limit));
        }
        let mut path = Vec::new();
        match find_redex(&cur, assum, &mut path) {
            None => return Ok((cur, trace)),
            Some((path, rule, local_after)) => {
                let after = cur
                    .replace_at(&path, local_after)
                    .expect("redex path must exist");
                trace.push(TraceStep {
                    rule: rule.to_string(),
                    path,
                    before: cur.clone(),
                    after: after.clone(),
                });
                cur = after;
            }
        }
    }
}

/// Normal form without the trace.
pub fn simplify(e: &Expr, assum: &Assumptions) -> Result<Expr, ProverError> {
    simplify_traced(e, assum, DEFAULT_STEP_LIMIT).map(|(nf, _)| nf)
}
