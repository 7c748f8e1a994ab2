use crate::diff::diff;
use crate::expr::{Assumptions, Expr, Op};
use crate::simplify::simplify;
use crate::ProverError;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use std::collections::BTreeMap;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    Left,
    Right,
}

/// Result of a one-sided limit: a finite symbolic value, a signed pole, or
/// an honest refusal.
#[derive(Debug, Clone, PartialEq)]
pub enum LimitResult {
    Value(Expr),
    PosInfinity,
    NegInfinity,
    Undefined(String),
}

/// Pick the piecewise branch seen when approaching `point` from `side`.
fn resolve_piecewise(e: &Expr, var: &str, point: &BigRational, side: Side) -> Expr {
    match e {
        Expr::Piecewise {
            branches,
            otherwise,
        } => {
            for (c, val) in branches {
                if c.var != var {
                    continue;
                }
                // Approaching point from the side: does the guard hold on a
                // punctured neighborhood?
                let holds = match (c.cmp, side) {
                    (crate::expr::Cmp::Lt, Side::Left) => point <= &c.bound,
                    (crate::expr::Cmp::Lt, Side::Right) => point < &c.bound,
                    (crate::expr::Cmp::Le, Side::Left) => point <= &c.bound,
                    (crate::expr::Cmp::Le, Side::Right) => point < &c.bound,
                    (crate::expr::Cmp::Gt, Side::Left) => point > &c.bound,
                    (crate::expr::Cmp::Gt, Side::Right) => point >= &c.bound,
                    (crate::expr::Cmp::Ge, Side::Left) => point > &c.bound,
                    (crate::expr::Cmp::Ge, Side::Right) => point >= &c.bound,
                };
                if holds {
                    return resolve_piecewise(val, var, point, side);
                }
            }
            resolve_piecewise(otherwise, var, point, side)
        }
        Expr::App(op, args) => Expr::App(
            *op,
            args.iter()
                .map(|a| resolve_piecewise(a, var, point, side))
                .collect(),
        ),
        other => other.clone(),
    }
}

/// Sign of a rational-in-`var` expression just to one side of `point`.
fn side_sign(e: &Expr, var: &str, point: &BigRational, side: Side) -> Option<i8> {
    let eps = BigRational::new(1.into(), 1_000_000_000.into());
    let probe = match side {
        Side::Left => point - &eps,
        Side::Right => point + &eps,
    };
    let mut env = BTreeMap::new();
    env.insert(var.to_string(), probe);
    let v = e.eval_rational(&env)?;
    Some(if v.is_zero() {
        0
    } else if v.is_positive() {
        1
    } else {
        -1
    })
}

/// One-sided limit of an expression that is rational or piecewise-rational
/// in `var` near `point`. Substitution when continuous, a single L'Hopital
/// pass for 0/0 quotients, signed infinity for sign-resolved poles, and an
/// honest `Undefined` otherwise.
pub fn limit(
    e: &Expr,
    var: &str,
    point: &BigRational,
    side: Side,
    assum: &Assumptions,
) -> Result<LimitResult, ProverError> {
    let resolved = resolve_piecewise(e, var, point, side);

    // Quotient forms get the 0/0 and pole analysis.
    if let Expr::App(Op::Div, args) = &resolved {
        let num = &args[0];
        let den = &args[1];
        let num_at = substitute_value(num, var, point, assum)?;
        let den_at = substitute_value(den, var, point, assum)?;
        if let (Some(n), Some(d)) = (&num_at, &den_at) {
            if !d.is_zero() {
                let q = simplify(&Expr::div(n.clone(), d.clone()), assum)?;
                return Ok(LimitResult::Value(q));
            }
            if n.is_zero() {
                // Single L'Hopital pass on the 0/0 form.
                let dn = diff(num, var, assum)?;
                let dd = diff(den, var, assum)?;
                let dn_at = substitute_value(&dn, var, point, assum)?;
                let dd_at = substitute_value(&dd, var, point, assum)?;
                return match (dn_at, dd_at) {
                    (Some(a), Some(b)) if !b.is_zero() => Ok(LimitResult::Value(simplify(
                        &Expr::div(a, b),
                        assum,
                    )?)),
                    _ => Ok(LimitResult::Undefined(
                        "0/0 persists after one L'Hopital pass".into(),
                    )),
                };
            }
            // Nonzero over zero: a signed pole when the approach sign is
            // resolved.
            let num_sign = match n.as_num() {
                Some(r) if r.is_positive() => 1,
                Some(r) if r.is_negative() => -1,
                _ => 0,
            };
            if let Some(den_sign) = side_sign(den, var, point, side) {
                if den_sign != 0 {
                    return Ok(if num_sign * den_sign > 0 {
                        LimitResult::PosInfinity
                    } else {
                        LimitResult::NegInfinity
                    });
                }
            }
            return Ok(LimitResult::Undefined("pole of unresolved sign".into()));
        }
        return Ok(LimitResult::Undefined(
            "quotient parts are not rational at the point".into(),
        ));
    }

    // Continuous case: substitute and simplify.
    let subst = resolved.substitute(var, &Expr::Num(point.clone()));
    let nf = simplify(&subst, assum)?;
    let mut free = std::collections::BTreeSet::new();
    nf.free_symbols(&mut free);
    if free.contains(var) {
        return Ok(LimitResult::Undefined(
            "substitution did not eliminate the limit variable".into(),
        ));
    }
    Ok(LimitResult::Value(nf))
}

/// Substitute and simplify; Some(value) only when the result is a plain
/// rational number.
fn substitute_value(
    e: &Expr,
    var: &str,
    point: &BigRational,
    assum: &Assumptions,
) -> Result<Option<Expr>, ProverError> {
    let nf = simplify(&e.substitute(var, &Expr::Num(point.clone())), assum)?;
    Ok(match nf {
        Expr::Num(_) => Some(nf),
        _ => None,
    })
}
