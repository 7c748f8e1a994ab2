//! Independent certificate checker.
//!
//! Shares only the rule table and the expression matcher with the prover:
//! replay navigates each recorded position, applies the named rule there,
//! and demands the recorded after-expression exactly. Side conditions are
//! re-derived with the checker's own positivity propagation, and numeric
//! evidence is re-evaluated with the checker's own exact rational evaluator.

use crate::certificate::{Claim, GoalSide, ProofCertificate, ProofStatus, ProofStep, Relation};
use crate::expr::{Assumptions, Expr, Op, Predicate};
use crate::rules::apply_named;
use crate::ProverError;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Accept or reject a proof certificate; rejection carries the index of the
/// first failing step.
pub fn check_proof_certificate(cert: &ProofCertificate) -> Result<(), ProverError> {
    let mut cur_lhs = cert.goal_lhs.clone();
    let mut cur_rhs = cert.goal_rhs.clone();
    for (i, step) in cert.steps.iter().enumerate() {
        match step {
            ProofStep::Rewrite {
                side,
                rule,
                path,
                before,
                after,
            } => {
                let cur = match side {
                    GoalSide::Lhs => &mut cur_lhs,
                    GoalSide::Rhs => &mut cur_rhs,
                };
                if before != cur {
                    return reject(i, "before-expression does not chain");
                }
                let sub = match cur.at_path(path) {
                    Some(s) => s.clone(),
                    None => return reject(i, "position path leaves the expression"),
                };
                let rewritten = match apply_named(rule, &sub, &cert.assumptions) {
                    Some(r) => r,
                    None => return reject(i, "named rule does not apply at the position"),
                };
                let rebuilt = match cur.replace_at(path, rewritten) {
                    Some(r) => r,
                    None => return reject(i, "replacement failed"),
                };
                if &rebuilt != after {
                    return reject(i, "after-expression differs from replay");
                }
                *cur = rebuilt;
            }
            ProofStep::SideCondition { claim } => {
                if !claim_holds(claim, &cert.assumptions) {
                    return reject(i, "side condition does not discharge");
                }
            }
            ProofStep::NumericEvidence {
                relation,
                lhs,
                rhs,
                ..
            } => {
                let (a, b) = match (eval_exact(lhs), eval_exact(rhs)) {
                    (Some(a), Some(b)) => (a, b),
                    _ => return reject(i, "numeric evidence is not closed rational"),
                };
                let holds = match relation {
                    Relation::Eq => a == b,
                    Relation::Le => a <= b,
                };
                if !holds {
                    return reject(i, "numeric evidence is false");
                }
            }
        }
    }
    match cert.status {
        ProofStatus::Proved => {
            if cur_lhs != cur_rhs {
                return Err(ProverError::CheckFailed {
                    step: cert.steps.len(),
                    reason: "normal forms differ but status claims proved".into(),
                });
            }
        }
        ProofStatus::Failed => {
            if cur_lhs == cur_rhs {
                return Err(ProverError::CheckFailed {
                    step: cert.steps.len(),
                    reason: "normal forms agree but status claims failed".into(),
                });
            }
        }
    }
    if cert.step_count != cert.steps.len() {
        return Err(ProverError::CheckFailed {
            step: cert.steps.len(),
            reason: "step_count does not match the trace".into(),
        });
    }
    Ok(())
}

fn reject(step: usize, reason: &str) -> Result<(), ProverError> {
    Err(ProverError::CheckFailed {
        step,
        reason: reason.to_string(),
    })
}

/// The checker's own positivity and realness propagation (independent of
/// `Assumptions::positive`).
fn claim_holds(claim: &Claim, assum: &Assumptions) -> bool {
    match claim {
        Claim::Positive(e) => positive(e, assum),
        Claim::Nonzero(e) => nonzero(e, assum),
        Claim::RealValued(e) => real_valued(e, assum),
        // Definitional claims are modeling axioms, recorded verbatim.
        Claim::Definitional(text) => !text.is_empty(),
    }
}

fn assumed(sym: &str, p: Predicate, assum: &Assumptions) -> bool {
    assum.entries.iter().any(|(s, q)| {
        s == sym && (*q == p || (p == Predicate::Nonzero && *q == Predicate::Positive))
    })
}

fn positive(e: &Expr, assum: &Assumptions) -> bool {
    match e {
        Expr::Sym(s) => assumed(s, Predicate::Positive, assum),
        Expr::Num(r) => r.is_positive(),
        Expr::App(Op::Mul | Op::Add | Op::Min | Op::Max, args) => {
            args.iter().all(|a| positive(a, assum))
        }
        Expr::App(Op::Div, args) => positive(&args[0], assum) && positive(&args[1], assum),
        Expr::App(Op::Pow, args) => positive(&args[0], assum),
        Expr::App(Op::Sqrt | Op::Abs, args) => nonzero(&args[0], assum),
        Expr::App(Op::Cosh, _) => true,
        _ => false,
    }
}

fn nonzero(e: &Expr, assum: &Assumptions) -> bool {
    match e {
        Expr::Sym(s) => assumed(s, Predicate::Nonzero, assum),
        Expr::Num(r) => !r.is_zero(),
        Expr::App(Op::Mul | Op::Div, args) => args.iter().all(|a| nonzero(a, assum)),
        Expr::App(Op::Pow, args) => nonzero(&args[0], assum),
        Expr::App(Op::Cosh, _) => true,
        _ => positive(e, assum),
    }
}

/// Real-valuedness: arithmetic over real symbols stays real; square roots
/// need provably positive arguments; reciprocals need nonzero denominators.
fn real_valued(e: &Expr, assum: &Assumptions) -> bool {
    match e {
        Expr::Sym(_) | Expr::Num(_) => true,
        Expr::App(Op::Sqrt, args) => positive(&args[0], assum) && real_valued(&args[0], assum),
        Expr::App(Op::Div, args) => {
            real_valued(&args[0], assum) && real_valued(&args[1], assum) && nonzero(&args[1], assum)
        }
        Expr::App(Op::Pow, args) => {
            let exp_ok = match args[1].as_num() {
                Some(r) if r.is_integer() => {
                    r.numer().to_i64().map(|k| k >= 0).unwrap_or(false) || nonzero(&args[0], assum)
                }
                _ => false,
            };
            real_valued(&args[0], assum) && exp_ok
        }
        Expr::App(_, args) => args.iter().all(|a| real_valued(a, assum)),
        Expr::Piecewise {
            branches,
            otherwise,
        } => {
            branches.iter().all(|(_, v)| real_valued(v, assum))
                && real_valued(otherwise, assum)
        }
    }
}

/// The checker's own exact evaluator over the rational-closed operators.
fn eval_exact(e: &Expr) -> Option<BigRational> {
    Some(match e {
        Expr::Num(r) => r.clone(),
        Expr::Sym(_) => return None,
        Expr::App(op, args) => {
            let vals: Vec<BigRational> =
                args.iter().map(eval_exact).collect::<Option<Vec<_>>>()?;
            match op {
                Op::Add => vals.into_iter().fold(BigRational::zero(), |a, b| a + b),
                Op::Mul => vals.into_iter().fold(BigRational::one(), |a, b| a * b),
                Op::Sub => vals[0].clone() - vals[1].clone(),
                Op::Div => {
                    if vals[1].is_zero() {
                        return None;
                    }
                    vals[0].clone() / vals[1].clone()
                }
                Op::Pow => {
                    let k = vals[1].to_integer().to_i64()?;
                    if !vals[1].is_integer() {
                        return None;
                    }
                    crate::expr::rational_pow(&vals[0], k)?
                }
                Op::Abs => vals[0].abs(),
                Op::Min => vals.into_iter().min()?,
                Op::Max => vals.into_iter().max()?,
                _ => return None,
            }
        }
        Expr::Piecewise { .. } => return None,
    })
}

/// Certificate dispatch on serialized form: proof certificates replay here;
/// bound certificates replay through their own arithmetic checker.
pub fn check_certificate_json(text: &str) -> Result<(), ProverError> {
    let v: serde_json::Value =
        serde_json::from_str(text).map_err(|e| ProverError::Malformed(e.to_string()))?;
    match v.get("certificate").and_then(|k| k.as_str()) {
        Some("proof") => {
            let cert = crate::certificate::proof_certificate_from_json(text)?;
            check_proof_certificate(&cert)
        }
        Some("bound") => {
            let cert = certifier::bound_certificate_from_json(text)
                .map_err(|e| ProverError::Malformed(e.to_string()))?;
            certifier::replay_bound_certificate(&cert).map_err(|e| match e {
                certifier::CertError::ReplayFailed { step, reason } => {
                    ProverError::CheckFailed { step, reason }
                }
                other => ProverError::Malformed(other.to_string()),
            })
        }
        _ => Err(ProverError::Malformed(
            "unknown or missing certificate kind".into(),
        )),
    }
}
