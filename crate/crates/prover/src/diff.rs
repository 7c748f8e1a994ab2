use crate::expr::{Assumptions, Expr, Op};
use crate::simplify::simplify;
use crate::ProverError;
use num_traits::Zero;

/// Symbolic derivative with respect to `var`, simplified. Non-smooth
/// constructs (abs, min, max) are rejected unless the assumption set
/// sign-resolves them first (a positive abs argument simplifies away before
/// differentiation).
pub fn diff(e: &Expr, var: &str, assum: &Assumptions) -> Result<Expr, ProverError> {
    let prepared = simplify(e, assum)?;
    let d = d_raw(&prepared, var)?;
    simplify(&d, assum)
}

fn d_raw(e: &Expr, var: &str) -> Result<Expr, ProverError> {
    Ok(match e {
        Expr::Num(_) => Expr::zero(),
        Expr::Sym(s) => {
            if s == var {
                Expr::one()
            } else {
                Expr::zero()
            }
        }
        Expr::App(op, args) => match op {
            Op::Add => Expr::add(
                args.iter()
                    .map(|a| d_raw(a, var))
                    .collect::<Result<Vec<_>, _>>()?,
            ),
            Op::Sub => Expr::sub(d_raw(&args[0], var)?, d_raw(&args[1], var)?),
            Op::Mul => {
                // Product rule over n factors.
                let mut terms = Vec::with_capacity(args.len());
                for i in 0..args.len() {
                    let mut factors = Vec::with_capacity(args.len());
                    for (j, a) in args.iter().enumerate() {
                        if i == j {
                            factors.push(d_raw(a, var)?);
                        } else {
                            factors.push(a.clone());
                        }
                    }
                    terms.push(Expr::mul(factors));
                }
                Expr::add(terms)
            }
            Op::Div => {
                // (a/b)' = a'/b - a b' / b^2
                let (a, b) = (&args[0], &args[1]);
                Expr::sub(
                    Expr::div(d_raw(a, var)?, b.clone()),
                    Expr::div(
                        Expr::mul(vec![a.clone(), d_raw(b, var)?]),
                        Expr::pow(b.clone(), Expr::int(2)),
                    ),
                )
            }
            Op::Pow => {
                let exp = args[1].as_num().ok_or_else(|| {
                    ProverError::NotDifferentiable("symbolic exponent".into())
                })?;
                if exp.is_zero() {
                    return Ok(Expr::zero());
                }
                // (u^n)' = n u^(n-1) u'
                let n = Expr::Num(exp.clone());
                let nm1 = Expr::Num(exp - num_rational::BigRational::from_integer(1.into()));
                Expr::mul(vec![
                    n,
                    Expr::pow(args[0].clone(), nm1),
                    d_raw(&args[0], var)?,
                ])
            }
            Op::Sqrt => Expr::div(
                d_raw(&args[0], var)?,
                Expr::mul(vec![Expr::int(2), Expr::App(Op::Sqrt, vec![args[0].clone()])]),
            ),
            Op::Sinh => chain(Expr::App(Op::Cosh, vec![args[0].clone()]), &args[0], var)?,
            Op::Cosh => chain(Expr::App(Op::Sinh, vec![args[0].clone()]), &args[0], var)?,
            Op::Tanh => chain(
                Expr::sub(
                    Expr::one(),
                    Expr::pow(Expr::App(Op::Tanh, vec![args[0].clone()]), Expr::int(2)),
                ),
                &args[0],
                var,
            )?,
            Op::Sin => chain(Expr::App(Op::Cos, vec![args[0].clone()]), &args[0], var)?,
            Op::Cos => chain(
                Expr::mul(vec![Expr::int(-1), Expr::App(Op::Sin, vec![args[0].clone()])]),
                &args[0],
                var,
            )?,
            Op::Arcsinh => chain(
                Expr::div(
                    Expr::one(),
                    Expr::App(
                        Op::Sqrt,
                        vec![Expr::add(vec![
                            Expr::one(),
                            Expr::pow(args[0].clone(), Expr::int(2)),
                        ])],
                    ),
                ),
                &args[0],
                var,
            )?,
            Op::Abs | Op::Min | Op::Max => {
                return Err(ProverError::NotDifferentiable(format!(
                    "{} is not differentiable without sign resolution",
                    op.symbol()
                )))
            }
        },
        Expr::Piecewise { .. } => {
            return Err(ProverError::NotDifferentiable(
                "piecewise expressions differentiate only per branch".into(),
            ))
        }
    })
}

fn chain(outer_derivative: Expr, inner: &Expr, var: &str) -> Result<Expr, ProverError> {
    Ok(Expr::mul(vec![outer_derivative, d_raw(inner, var)?]))
}
