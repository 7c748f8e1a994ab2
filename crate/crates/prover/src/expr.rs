use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

/// Operator catalog. Add and Mul are n-ary with canonically ordered
/// arguments; Min and Max are n-ary too.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Op {
    Add,
    Sub,
    Mul,
    Div,
    Pow,
    Sqrt,
    Abs,
    Min,
    Max,
    Sinh,
    Cosh,
    Arcsinh,
    Tanh,
    Sin,
    Cos,
}

impl Op {
    pub fn symbol(&self) -> &'static str {
        match self {
            Op::Add => "+",
            Op::Sub => "-",
            Op::Mul => "*",
            Op::Div => "/",
            Op::Pow => "^",
            Op::Sqrt => "sqrt",
            Op::Abs => "abs",
            Op::Min => "min",
            Op::Max => "max",
            Op::Sinh => "sinh",
            Op::Cosh => "cosh",
            Op::Arcsinh => "arcsinh",
            Op::Tanh => "tanh",
            Op::Sin => "sin",
            Op::Cos => "cos",
        }
    }

    pub fn parse(s: &str) -> Option<Op> {
        Some(match s {
            "+" => Op::Add,
            "-" => Op::Sub,
            "*" => Op::Mul,
            "/" => Op::Div,
            "^" => Op::Pow,
            "sqrt" => Op::Sqrt,
            "abs" => Op::Abs,
            "min" => Op::Min,
            "max" => Op::Max,
            "sinh" => Op::Sinh,
            "cosh" => Op::Cosh,
            "arcsinh" => Op::Arcsinh,
            "tanh" => Op::Tanh,
            "sin" => Op::Sin,
            "cos" => Op::Cos,
            _ => return None,
        })
    }

    /// (min, max) admissible argument count.
    pub fn arity(&self) -> (usize, usize) {
        match self {
            Op::Add | Op::Mul => (1, usize::MAX),
            Op::Min | Op::Max => (1, usize::MAX),
            Op::Sub | Op::Div | Op::Pow => (2, 2),
            _ => (1, 1),
        }
    }
}

/// Guard of a piecewise branch: `var cmp constant`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Cond {
    pub var: String,
    pub cmp: Cmp,
    pub bound: BigRational,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Cmp {
    Lt,
    Le,
    Gt,
    Ge,
}

impl Cmp {
    pub fn symbol(&self) -> &'static str {
        match self {
            Cmp::Lt => "<",
            Cmp::Le => "<=",
            Cmp::Gt => ">",
            Cmp::Ge => ">=",
        }
    }

    pub fn parse(s: &str) -> Option<Cmp> {
        Some(match s {
            "<" => Cmp::Lt,
            "<=" => Cmp::Le,
            ">" => Cmp::Gt,
            ">=" => Cmp::Ge,
            _ => return None,
        })
    }

    pub fn holds(&self, lhs: &BigRational, rhs: &BigRational) -> bool {
        match self {
            Cmp::Lt => lhs < rhs,
            Cmp::Le => lhs <= rhs,
            Cmp::Gt => lhs > rhs,
            Cmp::Ge => lhs >= rhs,
        }
    }
}

/// Symbolic expression tree: symbols, exact rationals, applications, and
/// guarded piecewise forms. Rationals are kept in lowest terms by the
/// underlying representation.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Expr {
    Sym(String),
    Num(BigRational),
    App(Op, Vec<Expr>),
    Piecewise {
        branches: Vec<(Cond, Expr)>,
        otherwise: Box<Expr>,
    },
}

impl Expr {
    pub fn sym(s: &str) -> Expr {
        Expr::Sym(s.to_string())
    }

    pub fn int(v: i64) -> Expr {
        Expr::Num(BigRational::from_integer(BigInt::from(v)))
    }

    pub fn ratio(p: i64, q: i64) -> Expr {
        Expr::Num(BigRational::new(BigInt::from(p), BigInt::from(q)))
    }

    pub fn add(args: Vec<Expr>) -> Expr {
        Expr::App(Op::Add, args)
    }

    pub fn mul(args: Vec<Expr>) -> Expr {
        Expr::App(Op::Mul, args)
    }

    pub fn sub(a: Expr, b: Expr) -> Expr {
        Expr::App(Op::Sub, vec![a, b])
    }

    pub fn div(a: Expr, b: Expr) -> Expr {
        Expr::App(Op::Div, vec![a, b])
    }

    pub fn pow(a: Expr, b: Expr) -> Expr {
        Expr::App(Op::Pow, vec![a, b])
    }

    pub fn is_num(&self) -> bool {
        matches!(self, Expr::Num(_))
    }

    pub fn as_num(&self) -> Option<&BigRational> {
        match self {
            Expr::Num(r) => Some(r),
            _ => None,
        }
    }

    pub fn zero() -> Expr {
        Expr::Num(BigRational::zero())
    }

    pub fn one() -> Expr {
        Expr::Num(BigRational::one())
    }

    pub fn is_zero(&self) -> bool {
        self.as_num().map(|r| r.is_zero()).unwrap_or(false)
    }

    pub fn node_count(&self) -> usize {
        match self {
            Expr::Sym(_) | Expr::Num(_) => 1,
            Expr::App(_, args) => 1 + args.iter().map(Expr::node_count).sum::<usize>(),
            Expr::Piecewise {
                branches,
                otherwise,
            } => {
                1 + otherwise.node_count()
                    + branches.iter().map(|(_, e)| e.node_count() + 1).sum::<usize>()
            }
        }
    }

    /// Child at a position-path step. Piecewise children are indexed as
    /// branch expressions first, then the otherwise arm.
    pub fn child(&self, idx: usize) -> Option<&Expr> {
        match self {
            Expr::App(_, args) => args.get(idx),
            Expr::Piecewise {
                branches,
                otherwise,
            } => {
                if idx < branches.len() {
                    Some(&branches[idx].1)
                } else if idx == branches.len() {
                    Some(otherwise)
                } else {
                    None
                }
            }
            _ => None,
        }
    }

    pub fn child_count(&self) -> usize {
        match self {
            Expr::App(_, args) => args.len(),
            Expr::Piecewise { branches, .. } => branches.len() + 1,
            _ => 0,
        }
    }

    /// Navigate to a subexpression by position path (root = empty path).
    pub fn at_path(&self, path: &[usize]) -> Option<&Expr> {
        let mut cur = self;
        for &i in path {
            cur = cur.child(i)?;
        }
        Some(cur)
    }

    /// Replace the subexpression at `path` and return the new tree.
    pub fn replace_at(&self, path: &[usize], new: Expr) -> Option<Expr> {
        if path.is_empty() {
            return Some(new);
        }
        let idx = path[0];
        match self {
            Expr::App(op, args) => {
                let mut args = args.clone();
                let slot = args.get_mut(idx)?;
                *slot = slot.replace_at(&path[1..], new)?;
                Some(Expr::App(*op, args))
            }
            Expr::Piecewise {
                branches,
                otherwise,
            } => {
                let mut branches = branches.clone();
                let mut otherwise = otherwise.clone();
                if idx < branches.len() {
                    branches[idx].1 = branches[idx].1.replace_at(&path[1..], new)?;
                } else if idx == branches.len() {
                    *otherwise = otherwise.replace_at(&path[1..], new)?;
                } else {
                    return None;
                }
                Some(Expr::Piecewise {
                    branches,
                    otherwise,
                })
            }
            _ => None,
        }
    }

    pub fn substitute(&self, var: &str, value: &Expr) -> Expr {
        match self {
            Expr::Sym(s) if s == var => value.clone(),
            Expr::Sym(_) | Expr::Num(_) => self.clone(),
            Expr::App(op, args) => Expr::App(
                *op,
                args.iter().map(|a| a.substitute(var, value)).collect(),
            ),
            Expr::Piecewise {
                branches,
                otherwise,
            } => Expr::Piecewise {
                branches: branches
                    .iter()
                    .map(|(c, e)| (c.clone(), e.substitute(var, value)))
                    .collect(),
                otherwise: Box::new(otherwise.substitute(var, value)),
            },
        }
    }

    pub fn free_symbols(&self, out: &mut std::collections::BTreeSet<String>) {
        match self {
            Expr::Sym(s) => {
                out.insert(s.clone());
            }
            Expr::Num(_) => {}
            Expr::App(_, args) => {
                for a in args {
                    a.free_symbols(out);
                }
            }
            Expr::Piecewise {
                branches,
                otherwise,
            } => {
                for (c, e) in branches {
                    out.insert(c.var.clone());
                    e.free_symbols(out);
                }
                otherwise.free_symbols(out);
            }
        }
    }

    /// Evaluate to f64 with a numeric environment. None when a symbol is
    /// unbound or an operation leaves the reals.
    pub fn eval(&self, env: &BTreeMap<String, f64>) -> Option<f64> {
        Some(match self {
            Expr::Sym(s) => *env.get(s)?,
            Expr::Num(r) => r.to_f64()?,
            Expr::App(op, args) => {
                let vals: Vec<f64> = args
                    .iter()
                    .map(|a| a.eval(env))
                    .collect::<Option<Vec<_>>>()?;
                match op {
                    Op::Add => vals.iter().sum(),
                    Op::Mul => vals.iter().product(),
                    Op::Sub => vals[0] - vals[1],
                    Op::Div => {
                        if vals[1] == 0.0 {
                            return None;
                        }
                        vals[0] / vals[1]
                    }
                    Op::Pow => {
                        let v = vals[0].powf(vals[1]);
                        if !v.is_finite() {
                            return None;
                        }
                        v
                    }
                    Op::Sqrt => {
                        if vals[0] < 0.0 {
                            return None;
                        }
                        vals[0].sqrt()
                    }
                    Op::Abs => vals[0].abs(),
                    Op::Min => vals.iter().cloned().fold(f64::INFINITY, f64::min),
                    Op::Max => vals.iter().cloned().fold(f64::NEG_INFINITY, f64::max),
                    Op::Sinh => vals[0].sinh(),
                    Op::Cosh => vals[0].cosh(),
                    Op::Arcsinh => vals[0].asinh(),
                    Op::Tanh => vals[0].tanh(),
                    Op::Sin => vals[0].sin(),
                    Op::Cos => vals[0].cos(),
                }
            }
            Expr::Piecewise {
                branches,
                otherwise,
            } => {
                for (c, e) in branches {
                    let v = *env.get(&c.var)?;
                    let b = c.bound.to_f64()?;
                    let holds = match c.cmp {
                        Cmp::Lt => v < b,
                        Cmp::Le => v <= b,
                        Cmp::Gt => v > b,
                        Cmp::Ge => v >= b,
                    };
                    if holds {
                        return e.eval(env);
                    }
                }
                return otherwise.eval(env);
            }
        })
    }

    /// Exact rational evaluation for rational-closed operator subsets.
    pub fn eval_rational(&self, env: &BTreeMap<String, BigRational>) -> Option<BigRational> {
        Some(match self {
            Expr::Sym(s) => env.get(s)?.clone(),
            Expr::Num(r) => r.clone(),
            Expr::App(op, args) => {
                let vals: Vec<BigRational> = args
                    .iter()
                    .map(|a| a.eval_rational(env))
                    .collect::<Option<Vec<_>>>()?;
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
                        let e = &vals[1];
                        if !e.is_integer() {
                            return None;
                        }
                        let k = e.to_integer().to_i64()?;
                        rational_pow(&vals[0], k)?
                    }
                    Op::Abs => vals[0].abs(),
                    Op::Min => vals.into_iter().min()?,
                    Op::Max => vals.into_iter().max()?,
                    _ => return None,
                }
            }
            Expr::Piecewise {
                branches,
                otherwise,
            } => {
                for (c, e) in branches {
                    let v = env.get(&c.var)?;
                    if c.cmp.holds(v, &c.bound) {
                        return e.eval_rational(env);
                    }
                }
                return otherwise.eval_rational(env);
            }
        })
    }
}

pub fn rational_pow(base: &BigRational, exp: i64) -> Option<BigRational> {
    if exp == 0 {
        if base.is_zero() {
            return None;
        }
        return Some(BigRational::one());
    }
    if base.is_zero() && exp < 0 {
        return None;
    }
    let mag = exp.unsigned_abs() as u32;
    if mag > 64 {
        return None; // keep certificate arithmetic small
    }
    let p = base.pow(mag as i32);
    if exp < 0 {
        Some(p.recip())
    } else {
        Some(p)
    }
}

/// Canonical total order used for the commutative operators' argument
/// ordering: numbers first, then symbols, then applications ordered by
/// operator, arity, and children.
pub fn canonical_cmp(a: &Expr, b: &Expr) -> Ordering {
    fn rank(e: &Expr) -> u8 {
        match e {
            Expr::Num(_) => 0,
            Expr::Sym(_) => 1,
            Expr::App(..) => 2,
            Expr::Piecewise { .. } => 3,
        }
    }
    match (a, b) {
        (Expr::Num(x), Expr::Num(y)) => x.cmp(y),
        (Expr::Sym(x), Expr::Sym(y)) => x.cmp(y),
        (Expr::App(op1, a1), Expr::App(op2, a2)) => op1
            .cmp(op2)
            .then(a1.len().cmp(&a2.len()))
            .then_with(|| {
                for (x, y) in a1.iter().zip(a2) {
                    let c = canonical_cmp(x, y);
                    if c != Ordering::Equal {
                        return c;
                    }
                }
                Ordering::Equal
            }),
        _ => rank(a).cmp(&rank(b)),
    }
}

/// Assumption predicates on symbols.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Predicate {
    Positive,
    Nonzero,
    Real,
}

impl Predicate {
    pub fn as_str(&self) -> &'static str {
        match self {
            Predicate::Positive => "positive",
            Predicate::Nonzero => "nonzero",
            Predicate::Real => "real",
        }
    }

    pub fn parse(s: &str) -> Option<Predicate> {
        Some(match s {
            "positive" => Predicate::Positive,
            "nonzero" => Predicate::Nonzero,
            "real" => Predicate::Real,
            _ => return None,
        })
    }
}

/// Symbol assumptions carried by a proof.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Assumptions {
    pub entries: Vec<(String, Predicate)>,
}

impl Assumptions {
    pub fn new() -> Assumptions {
        Assumptions::default()
    }

    pub fn with(mut self, sym: &str, p: Predicate) -> Assumptions {
        self.entries.push((sym.to_string(), p));
        self
    }

    pub fn holds(&self, sym: &str, p: Predicate) -> bool {
        self.entries.iter().any(|(s, q)| {
            s == sym && (*q == p || (p == Predicate::Nonzero && *q == Predicate::Positive))
        })
    }

    /// Structural positivity: positive symbols and rationals, products,
    /// quotients and integer powers of positive things, sums of positives,
    /// exp-like maps of reals, square roots of positives.
    pub fn positive(&self, e: &Expr) -> bool {
        match e {
            Expr::Sym(s) => self.holds(s, Predicate::Positive),
            Expr::Num(r) => r.is_positive(),
            Expr::App(Op::Mul, args) | Expr::App(Op::Add, args) => {
                args.iter().all(|a| self.positive(a))
            }
            Expr::App(Op::Div, args) => self.positive(&args[0]) && self.positive(&args[1]),
            Expr::App(Op::Pow, args) => self.positive(&args[0]),
            Expr::App(Op::Sqrt, args) | Expr::App(Op::Abs, args) => self.nonzero(&args[0]),
            Expr::App(Op::Cosh, _) => true,
            Expr::App(Op::Min, args) | Expr::App(Op::Max, args) => {
                args.iter().all(|a| self.positive(a))
            }
            _ => false,
        }
    }

    pub fn nonzero(&self, e: &Expr) -> bool {
        match e {
            Expr::Sym(s) => self.holds(s, Predicate::Nonzero),
            Expr::Num(r) => !r.is_zero(),
            Expr::App(Op::Mul, args) | Expr::App(Op::Div, args) => {
                args.iter().all(|a| self.nonzero(a))
            }
            Expr::App(Op::Pow, args) => self.nonzero(&args[0]),
            Expr::App(Op::Cosh, _) => true,
            _ => self.positive(e),
        }
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", crate::parse::print(self))
    }
}
