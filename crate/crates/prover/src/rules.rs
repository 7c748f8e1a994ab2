use crate::expr::{canonical_cmp, rational_pow, Assumptions, Expr, Op};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// One rewrite rule, applied at the root of a subexpression. Every rule is
/// sound over the reals wherever both sides are defined, under its side
/// conditions (checked against the proof's assumption set).
pub struct RewriteRule {
    pub name: &'static str,
    pub apply: fn(&Expr, &Assumptions) -> Option<Expr>,
}

/// The shared rule table: the prover picks rules from it and the checker
/// replays them by name. Order fixes the prover's priority; the table itself
/// carries no strategy.
pub fn rule_table() -> &'static [RewriteRule] {
    &RULES
}

pub fn apply_named(name: &str, e: &Expr, assum: &Assumptions) -> Option<Expr> {
    RULES
        .iter()
        .find(|r| r.name == name)
        .and_then(|r| (r.apply)(e, assum))
}

static RULES: &[RewriteRule] = &[
    RewriteRule {
        name: "mul-zero",
        apply: |e, _| match e {
            Expr::App(Op::Mul, args) if args.iter().any(Expr::is_zero) => Some(Expr::zero()),
            _ => None,
        },
    },
    RewriteRule {
        name: "sub-expand",
        apply: |e, _| match e {
            Expr::App(Op::Sub, args) => Some(Expr::add(vec![
                args[0].clone(),
                Expr::mul(vec![Expr::int(-1), args[1].clone()]),
            ])),
            _ => None,
        },
    },
    RewriteRule {
        name: "div-expand",
        apply: |e, _| match e {
            Expr::App(Op::Div, args) => Some(Expr::mul(vec![
                args[0].clone(),
                Expr::pow(args[1].clone(), Expr::int(-1)),
            ])),
            _ => None,
        },
    },
    RewriteRule {
        name: "flatten-add",
        apply: |e, _| flatten(e, Op::Add),
    },
    RewriteRule {
        name: "flatten-mul",
        apply: |e, _| flatten(e, Op::Mul),
    },
    RewriteRule {
        name: "num-fold-add",
        apply: |e, _| num_fold(e, Op::Add),
    },
    RewriteRule {
        name: "num-fold-mul",
        apply: |e, _| num_fold(e, Op::Mul),
    },
    RewriteRule {
        name: "pow-num",
        apply: |e, _| match e {
            Expr::App(Op::Pow, args) => {
                let (b, x) = (args[0].as_num()?, args[1].as_num()?);
                if !x.is_integer() {
                    return None;
                }
                let k = num_traits::ToPrimitive::to_i64(&x.to_integer())?;
                rational_pow(b, k).map(Expr::Num)
            }
            _ => None,
        },
    },
    RewriteRule {
        name: "pow-one-exp",
        apply: |e, _| match e {
            Expr::App(Op::Pow, args) if args[1] == Expr::one() => Some(args[0].clone()),
            _ => None,
        },
    },
    RewriteRule {
        name: "pow-zero-exp",
        apply: |e, assum| match e {
            Expr::App(Op::Pow, args)
                if args[1].is_zero() && !args[0].is_num() && assum.nonzero(&args[0]) =>
            {
                Some(Expr::one())
            }
            _ => None,
        },
    },
    RewriteRule {
        name: "unwrap-singleton",
        apply: |e, _| match e {
            Expr::App(Op::Add | Op::Mul | Op::Min | Op::Max, args) if args.len() == 1 => {
                Some(args[0].clone())
            }
            _ => None,
        },
    },
    RewriteRule {
        name: "add-zero",
        apply: |e, _| match e {
            Expr::App(Op::Add, args) if args.len() > 1 && args.iter().any(Expr::is_zero) => {
                let rest: Vec<Expr> = args.iter().filter(|a| !a.is_zero()).cloned().collect();
                Some(match rest.len() {
                    0 => Expr::zero(),
                    1 => rest.into_iter().next().unwrap(),
                    _ => Expr::add(rest),
                })
            }
            _ => None,
        },
    },
    RewriteRule {
        name: "mul-one",
        apply: |e, _| match e {
            Expr::App(Op::Mul, args)
                if args.len() > 1 && args.iter().any(|a| *a == Expr::one()) =>
            {
                let rest: Vec<Expr> =
                    args.iter().filter(|a| **a != Expr::one()).cloned().collect();
                Some(match rest.len() {
                    0 => Expr::one(),
                    1 => rest.into_iter().next().unwrap(),
                    _ => Expr::mul(rest),
                })
            }
            _ => None,
        },
    },
    RewriteRule {
        name: "distribute",
        apply: |e, _| distribute(e),
    },
    RewriteRule {
        name: "sort-args",
        apply: |e, _| match e {
            Expr::App(op @ (Op::Add | Op::Mul | Op::Min | Op::Max), args) => {
                let mut sorted = args.clone();
                sorted.sort_by(canonical_cmp);
                if &sorted != args {
                    Some(Expr::App(*op, sorted))
                } else {
                    None
                }
            }
            _ => None,
        },
    },
    RewriteRule {
        name: "collect-terms",
        apply: |e, _| collect_terms(e),
    },
    RewriteRule {
        name: "collect-powers",
        apply: |e, assum| collect_powers(e, assum),
    },
    RewriteRule {
        name: "abs-num",
        apply: |e, _| match e {
            Expr::App(Op::Abs, args) => args[0].as_num().map(|r| Expr::Num(r.abs())),
            _ => None,
        },
    },
    RewriteRule {
        name: "abs-pos",
        apply: |e, assum| match e {
            Expr::App(Op::Abs, args) if !args[0].is_num() && assum.positive(&args[0]) => {
                Some(args[0].clone())
            }
            _ => None,
        },
    },
    RewriteRule {
        name: "sqrt-num",
        apply: |e, _| match e {
            Expr::App(Op::Sqrt, args) => {
                let r = args[0].as_num()?;
                if r.is_negative() {
                    return None;
                }
                let p = sqrt_exact(r.numer())?;
                let q = sqrt_exact(r.denom())?;
                Some(Expr::Num(BigRational::new(p, q)))
            }
            _ => None,
        },
    },
    RewriteRule {
        name: "sqrt-square",
        apply: |e, _| match e {
            Expr::App(Op::Sqrt, args) => match &args[0] {
                Expr::App(Op::Pow, inner) if inner[1] == Expr::int(2) => {
                    Some(Expr::App(Op::Abs, vec![inner[0].clone()]))
                }
                _ => None,
            },
            _ => None,
        },
    },
    RewriteRule {
        name: "square-sqrt",
        apply: |e, _| match e {
            Expr::App(Op::Pow, args) if args[1] == Expr::int(2) => match &args[0] {
                Expr::App(Op::Sqrt, inner) => Some(inner[0].clone()),
                _ => None,
            },
            _ => None,
        },
    },
    RewriteRule {
        name: "minmax-num",
        apply: |e, _| match e {
            Expr::App(op @ (Op::Min | Op::Max), args) => {
                let nums: Vec<&BigRational> = args.iter().filter_map(Expr::as_num).collect();
                if nums.len() < 2 {
                    return None;
                }
                let folded = match op {
                    Op::Min => nums.into_iter().min().unwrap().clone(),
                    _ => nums.into_iter().max().unwrap().clone(),
                };
                let mut rest: Vec<Expr> =
                    args.iter().filter(|a| !a.is_num()).cloned().collect();
                rest.push(Expr::Num(folded));
                Some(match rest.len() {
                    1 => rest.into_iter().next().unwrap(),
                    _ => Expr::App(*op, rest),
                })
            }
            _ => None,
        },
    },
    RewriteRule {
        name: "idempotent-dedup",
        apply: |e, _| match e {
            Expr::App(op @ (Op::Min | Op::Max), args) if args.len() > 1 => {
                let mut dedup: Vec<Expr> = Vec::with_capacity(args.len());
                for a in args {
                    if !dedup.contains(a) {
                        dedup.push(a.clone());
                    }
                }
                if dedup.len() == args.len() {
                    return None;
                }
                Some(match dedup.len() {
                    1 => dedup.into_iter().next().unwrap(),
                    _ => Expr::App(*op, dedup),
                })
            }
            _ => None,
        },
    },
    RewriteRule {
        name: "eval-at-zero",
        apply: |e, _| match e {
            Expr::App(op, args) if args.len() == 1 && args[0].is_zero() => match op {
                Op::Sinh | Op::Tanh | Op::Arcsinh | Op::Sin => Some(Expr::zero()),
                Op::Cosh | Op::Cos => Some(Expr::one()),
                _ => None,
            },
            _ => None,
        },
    },
    RewriteRule {
        name: "inverse-pair",
        apply: |e, _| match e {
            Expr::App(Op::Sinh, args) => match &args[0] {
                Expr::App(Op::Arcsinh, inner) => Some(inner[0].clone()),
                _ => None,
            },
            Expr::App(Op::Arcsinh, args) => match &args[0] {
                Expr::App(Op::Sinh, inner) => Some(inner[0].clone()),
                _ => None,
            },
            _ => None,
        },
    },
    RewriteRule {
        name: "piecewise-collapse",
        apply: |e, _| match e {
            Expr::Piecewise {
                branches,
                otherwise,
            } if branches.iter().all(|(_, v)| v == otherwise.as_ref()) => {
                Some(otherwise.as_ref().clone())
            }
            _ => None,
        },
    },
];

fn flatten(e: &Expr, op: Op) -> Option<Expr> {
    match e {
        Expr::App(o, args) if *o == op && args.iter().any(|a| matches!(a, Expr::App(i, _) if *i == op)) => {
            let mut out = Vec::with_capacity(args.len() + 2);
            for a in args {
                match a {
                    Expr::App(i, inner) if *i == op => out.extend(inner.iter().cloned()),
                    other => out.push(other.clone()),
                }
            }
            Some(Expr::App(op, out))
        }
        _ => None,
    }
}

fn num_fold(e: &Expr, op: Op) -> Option<Expr> {
    match e {
        Expr::App(o, args) if *o == op => {
            let nums: Vec<&BigRational> = args.iter().filter_map(Expr::as_num).collect();
            if nums.len() < 2 {
                return None;
            }
            let folded = match op {
                Op::Add => nums
                    .into_iter()
                    .fold(BigRational::zero(), |acc, r| acc + r),
                _ => nums
                    .into_iter()
                    .fold(BigRational::one(), |acc, r| acc * r),
            };
            let mut rest: Vec<Expr> = args.iter().filter(|a| !a.is_num()).cloned().collect();
            // Keep the folded constant in front; sort-args settles the rest.
            rest.insert(0, Expr::Num(folded));
            Some(match rest.len() {
                1 => rest.into_iter().next().unwrap(),
                _ => Expr::App(op, rest),
            })
        }
        _ => None,
    }
}

/// Split a product child into (rational coefficient, non-numeric core).
/// The core of a pure number is None.
fn coeff_core(e: &Expr) -> (BigRational, Option<Expr>) {
    match e {
        Expr::Num(r) => (r.clone(), None),
        Expr::App(Op::Mul, args) => {
            let mut coeff = BigRational::one();
            let mut core = Vec::new();
            for a in args {
                match a.as_num() {
                    Some(r) => coeff *= r,
                    None => core.push(a.clone()),
                }
            }
            match core.len() {
                0 => (coeff, None),
                1 => (coeff, Some(core.into_iter().next().unwrap())),
                _ => (coeff, Some(Expr::mul(core))),
            }
        }
        other => (BigRational::one(), Some(other.clone())),
    }
}

fn term_from(coeff: BigRational, core: Expr) -> Option<Expr> {
    if coeff.is_zero() {
        return None;
    }
    if coeff.is_one() {
        return Some(core);
    }
    Some(match core {
        Expr::App(Op::Mul, mut args) => {
            args.insert(0, Expr::Num(coeff));
            Expr::App(Op::Mul, args)
        }
        other => Expr::mul(vec![Expr::Num(coeff), other]),
    })
}

/// Combine addends with structurally equal cores: c1 t + c2 t -> (c1+c2) t,
/// dropping zero-coefficient results.
fn collect_terms(e: &Expr) -> Option<Expr> {
    let args = match e {
        Expr::App(Op::Add, args) if args.len() > 1 => args,
        _ => return None,
    };
    let mut numeric = BigRational::zero();
    let mut had_numeric = false;
    // (core, coeff) in first-appearance order.
    let mut terms: Vec<(Expr, BigRational)> = Vec::new();
    let mut merged = false;
    for a in args {
        let (coeff, core) = coeff_core(a);
        match core {
            None => {
                if had_numeric {
                    merged = true;
                }
                had_numeric = true;
                numeric += coeff;
            }
            Some(core) => match terms.iter_mut().find(|(c, _)| *c == core) {
                Some((_, acc)) => {
                    *acc += coeff;
                    merged = true;
                }
                None => terms.push((core, coeff)),
            },
        }
    }
    if !merged {
        return None;
    }
    let mut out = Vec::new();
    if had_numeric && !numeric.is_zero() {
        out.push(Expr::Num(numeric));
    }
    for (core, coeff) in terms {
        if let Some(t) = term_from(coeff, core) {
            out.push(t);
        }
    }
    Some(match out.len() {
        0 => Expr::zero(),
        1 => out.into_iter().next().unwrap(),
        _ => Expr::add(out),
    })
}

/// Combine product factors with equal bases: x^a x^b -> x^(a+b). Merging
/// that could cancel a zero base (any negative or zero exponent involved)
/// requires the base to be provably nonzero.
fn collect_powers(e: &Expr, assum: &Assumptions) -> Option<Expr> {
    let args = match e {
        Expr::App(Op::Mul, args) if args.len() > 1 => args,
        _ => return None,
    };
    let split = |a: &Expr| -> (Expr, BigRational) {
        match a {
            Expr::App(Op::Pow, pa) => match pa[1].as_num() {
                Some(r) => (pa[0].clone(), r.clone()),
                None => (a.clone(), BigRational::one()),
            },
            other => (other.clone(), BigRational::one()),
        }
    };
    // Sum bases stay atomic (the distributed form is canonical for those).
    let mergeable = |b: &Expr| !matches!(b, Expr::App(Op::Add, _));
    // (base, exp, merged-here, saw a non-positive exponent contribution)
    let mut factors: Vec<(Expr, BigRational, bool, bool)> = Vec::new();
    let mut merged = false;
    let mut passthrough = Vec::new();
    for a in args {
        if a.is_num() {
            passthrough.push(a.clone());
            continue;
        }
        let (base, exp) = split(a);
        if !mergeable(&base) {
            passthrough.push(a.clone());
            continue;
        }
        let nonpos = !exp.is_positive();
        match factors.iter_mut().find(|(b, ..)| *b == base) {
            Some((_, acc, touched, np)) => {
                *acc += exp;
                *touched = true;
                *np |= nonpos;
                merged = true;
            }
            None => factors.push((base, exp, false, nonpos)),
        }
    }
    if !merged {
        return None;
    }
    // Any merge that touches a non-positive exponent can cancel a zero of
    // the base, so it must be licensed by a nonzero assumption.
    for (base, exp, touched, nonpos) in &factors {
        if *touched && (*nonpos || !exp.is_positive()) && !assum.nonzero(base) {
            return None;
        }
    }
    let mut out = passthrough;
    for (base, exp, _, _) in factors {
        if exp.is_zero() {
            continue; // licensed above
        }
        if exp.is_one() {
            out.push(base);
        } else {
            out.push(Expr::pow(base, Expr::Num(exp)));
        }
    }
    Some(match out.len() {
        0 => Expr::one(),
        1 => out.into_iter().next().unwrap(),
        _ => Expr::mul(out),
    })
}

/// Expand a product over the canonically least of its sum factors. Repeated
/// application yields the fully distributed (polynomial-style) normal form,
/// which is the same whatever order redexes are taken in. Sums under integer
/// powers are left atomic: collect-powers never merges sum bases, so the two
/// forms cannot compete.
fn distribute(e: &Expr) -> Option<Expr> {
    let args = match e {
        Expr::App(Op::Mul, args) if args.len() > 1 => args,
        _ => return None,
    };
    let mut target: Option<usize> = None;
    for (i, a) in args.iter().enumerate() {
        if matches!(a, Expr::App(Op::Add, _)) {
            target = Some(match target {
                None => i,
                Some(j) => {
                    if canonical_cmp(a, &args[j]) == std::cmp::Ordering::Less {
                        i
                    } else {
                        j
                    }
                }
            });
        }
    }
    let i = target?;
    let terms = match &args[i] {
        Expr::App(Op::Add, t) => t.clone(),
        _ => unreachable!(),
    };
    let rest: Vec<Expr> = args
        .iter()
        .enumerate()
        .filter(|(j, _)| *j != i)
        .map(|(_, a)| a.clone())
        .collect();
    Some(Expr::add(
        terms
            .into_iter()
            .map(|t| {
                let mut factors = rest.clone();
                factors.push(t);
                Expr::App(Op::Mul, factors)
            })
            .collect(),
    ))
}

fn sqrt_exact(n: &BigInt) -> Option<BigInt> {
    if n.is_negative() {
        return None;
    }
    let r = n.sqrt();
    if &(&r * &r) == n {
        Some(r)
    } else {
        None
    }
}
