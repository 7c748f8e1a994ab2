use crate::expr::{Cmp, Cond, Expr, Op};
use crate::ProverError;
use num_bigint::BigInt;
use num_rational::BigRational;
use std::str::FromStr;

/// Wire format: parenthesized prefix notation, one expression per line.
/// Rationals print as `p/q` (or `p` for integers), symbols as ASCII
/// identifiers, applications as `(op arg ...)`, piecewise as
/// `(piecewise (cmp var bound) value ... otherwise)`.
pub fn print(e: &Expr) -> String {
    match e {
        Expr::Sym(s) => s.clone(),
        Expr::Num(r) => {
            if r.is_integer() {
                r.numer().to_string()
            } else {
                format!("{}/{}", r.numer(), r.denom())
            }
        }
        Expr::App(op, args) => {
            let inner: Vec<String> = args.iter().map(print).collect();
            format!("({} {})", op.symbol(), inner.join(" "))
        }
        Expr::Piecewise {
            branches,
            otherwise,
        } => {
            let mut parts = vec!["piecewise".to_string()];
            for (c, e) in branches {
                parts.push(format!(
                    "({} {} {})",
                    c.cmp.symbol(),
                    c.var,
                    print(&Expr::Num(c.bound.clone()))
                ));
                parts.push(print(e));
            }
            parts.push(print(otherwise));
            format!("({})", parts.join(" "))
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Token {
    Open,
    Close,
    Atom(String),
}

fn tokenize(s: &str) -> Vec<Token> {
    let mut out = Vec::new();
    let mut cur = String::new();
    for ch in s.chars() {
        match ch {
            '(' | ')' => {
                if !cur.is_empty() {
                    out.push(Token::Atom(std::mem::take(&mut cur)));
                }
                out.push(if ch == '(' { Token::Open } else { Token::Close });
            }
            c if c.is_whitespace() => {
                if !cur.is_empty() {
                    out.push(Token::Atom(std::mem::take(&mut cur)));
                }
            }
            c => cur.push(c),
        }
    }
    if !cur.is_empty() {
        out.push(Token::Atom(cur));
    }
    out
}

fn parse_atom(s: &str) -> Result<Expr, ProverError> {
    if let Some((p, q)) = s.split_once('/') {
        let p = BigInt::from_str(p).map_err(|_| bad(s))?;
        let q = BigInt::from_str(q).map_err(|_| bad(s))?;
        if q == BigInt::from(0) {
            return Err(bad(s));
        }
        return Ok(Expr::Num(BigRational::new(p, q)));
    }
    if let Ok(p) = BigInt::from_str(s) {
        return Ok(Expr::Num(BigRational::from_integer(p)));
    }
    if s.chars().all(|c| c.is_ascii_alphanumeric() || c == '_')
        && s.chars().next().is_some_and(|c| c.is_ascii_alphabetic() || c == '_')
    {
        return Ok(Expr::Sym(s.to_string()));
    }
    Err(bad(s))
}

fn bad(s: &str) -> ProverError {
    ProverError::Parse(format!("bad token `{s}`"))
}

struct Parser {
    tokens: Vec<Token>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Token> {
        self.tokens.get(self.pos)
    }

    fn next(&mut self) -> Result<Token, ProverError> {
        let t = self
            .tokens
            .get(self.pos)
            .cloned()
            .ok_or_else(|| ProverError::Parse("unexpected end of input".into()))?;
        self.pos += 1;
        Ok(t)
    }

    fn parse_expr(&mut self) -> Result<Expr, ProverError> {
        match self.next()? {
            Token::Atom(a) => parse_atom(&a),
            Token::Close => Err(ProverError::Parse("unexpected `)`".into())),
            Token::Open => {
                let head = match self.next()? {
                    Token::Atom(a) => a,
                    _ => return Err(ProverError::Parse("operator expected after `(`".into())),
                };
                if head == "piecewise" {
                    return self.parse_piecewise();
                }
                let op = Op::parse(&head)
                    .ok_or_else(|| ProverError::Parse(format!("unknown operator `{head}`")))?;
                let mut args = Vec::new();
                while !matches!(self.peek(), Some(Token::Close)) {
                    args.push(self.parse_expr()?);
                }
                self.next()?; // consume ')'
                let (lo, hi) = op.arity();
                if args.len() < lo || args.len() > hi {
                    return Err(ProverError::Parse(format!(
                        "`{head}` applied to {} arguments",
                        args.len()
                    )));
                }
                Ok(Expr::App(op, args))
            }
        }
    }

    fn parse_cond(&mut self) -> Result<Cond, ProverError> {
        match self.next()? {
            Token::Open => {}
            _ => return Err(ProverError::Parse("guard must be a list".into())),
        }
        let cmp = match self.next()? {
            Token::Atom(a) => {
                Cmp::parse(&a).ok_or_else(|| ProverError::Parse(format!("bad guard op `{a}`")))?
            }
            _ => return Err(ProverError::Parse("guard operator expected".into())),
        };
        let var = match self.next()? {
            Token::Atom(a) => a,
            _ => return Err(ProverError::Parse("guard variable expected".into())),
        };
        let bound = match self.parse_expr()? {
            Expr::Num(r) => r,
            _ => return Err(ProverError::Parse("guard bound must be rational".into())),
        };
        match self.next()? {
            Token::Close => {}
            _ => return Err(ProverError::Parse("guard not closed".into())),
        }
        Ok(Cond { var, cmp, bound })
    }

    fn parse_piecewise(&mut self) -> Result<Expr, ProverError> {
        // (piecewise guard value guard value ... otherwise)
        let mut items: Vec<(Cond, Expr)> = Vec::new();
        loop {
            match self.peek() {
                Some(Token::Open) => {
                    // Could be a guard or the final otherwise expression; a
                    // guard starts with a comparison operator.
                    let save = self.pos;
                    if let Ok(cond) = self.parse_cond() {
                        let value = self.parse_expr()?;
                        items.push((cond, value));
                        continue;
                    }
                    self.pos = save;
                    let otherwise = self.parse_expr()?;
                    match self.next()? {
                        Token::Close => {}
                        _ => return Err(ProverError::Parse("piecewise not closed".into())),
                    }
                    return Ok(Expr::Piecewise {
                        branches: items,
                        otherwise: Box::new(otherwise),
                    });
                }
                Some(Token::Atom(_)) => {
                    let otherwise = self.parse_expr()?;
                    match self.next()? {
                        Token::Close => {}
                        _ => return Err(ProverError::Parse("piecewise not closed".into())),
                    }
                    return Ok(Expr::Piecewise {
                        branches: items,
                        otherwise: Box::new(otherwise),
                    });
                }
                _ => return Err(ProverError::Parse("piecewise not closed".into())),
            }
        }
    }
}

/// Parse one expression from the wire format.
pub fn parse(s: &str) -> Result<Expr, ProverError> {
    let mut p = Parser {
        tokens: tokenize(s),
        pos: 0,
    };
    let e = p.parse_expr()?;
    if p.pos != p.tokens.len() {
        return Err(ProverError::Parse("trailing tokens".into()));
    }
    Ok(e)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trips() {
        for s in [
            "(+ u (* -1 v))",
            "(* 1/2 (^ u 2))",
            "(sqrt (* gamma P (^ rho -1)))",
            "(piecewise (<= x 0) 1 0)",
            "(max 0 (min 1 theta))",
        ] {
            let e = parse(s).unwrap();
            assert_eq!(print(&e), s);
        }
    }

    #[test]
    fn rejects_garbage() {
        assert!(parse("(+ u").is_err());
        assert!(parse("(bogus 1 2)").is_err());
        assert!(parse("(^ u)").is_err());
        assert!(parse("1/0").is_err());
    }
}
