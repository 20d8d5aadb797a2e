//! Small linear-expression language used by the data files and the CLI,
//! e.g. `6/95 - 3/19*a + 8/95*b`, `56/285*lambda + 14/19`, `-K - 1/2*L_xz`.

use thiserror::Error;
use wdp_core::blowup_lc::{LambdaPoly, ParamForm};
use wdp_core::Rational;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ExprError {
    #[error("unexpected character {0:?} at offset {1}")]
    UnexpectedChar(char, usize),
    #[error("unexpected end of expression")]
    UnexpectedEnd,
    #[error("expected a number or a name at offset {0}")]
    ExpectedFactor(usize),
    #[error("a term may contain at most one variable")]
    TwoVariables,
    #[error("cannot divide by the variable {0}")]
    DivideByVariable(String),
    #[error("division by zero")]
    DivisionByZero,
    #[error("lambda is not allowed here")]
    LambdaNotAllowed,
    #[error("a variable is not allowed here")]
    VariableNotAllowed,
    #[error("number too large")]
    Overflow,
}

/// `coeff · λ^power · var`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Term {
    pub coeff: Rational,
    pub lambda_power: i32,
    pub var: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Token {
    Num(i64),
    Name(String),
    Op(char),
}

fn tokenize(s: &str) -> Result<Vec<(usize, Token)>, ExprError> {
    let mut out = Vec::new();
    let mut chars = s.char_indices().peekable();
    while let Some(&(i, c)) = chars.peek() {
        if c.is_whitespace() {
            chars.next();
        } else if c.is_ascii_digit() {
            let mut v: i64 = 0;
            while let Some(&(_, d)) = chars.peek() {
                let Some(digit) = d.to_digit(10) else { break };
                v = v
                    .checked_mul(10)
                    .and_then(|v| v.checked_add(digit as i64))
                    .ok_or(ExprError::Overflow)?;
                chars.next();
            }
            out.push((i, Token::Num(v)));
        } else if c.is_alphabetic() || c == '_' {
            let mut name = String::new();
            while let Some(&(_, d)) = chars.peek() {
                if !(d.is_alphanumeric() || d == '_') {
                    break;
                }
                name.push(d);
                chars.next();
            }
            out.push((i, Token::Name(name)));
        } else if "+-*/^".contains(c) {
            out.push((i, Token::Op(c)));
            chars.next();
        } else {
            return Err(ExprError::UnexpectedChar(c, i));
        }
    }
    Ok(out)
}

fn is_lambda(name: &str) -> bool {
    name == "lambda" || name == "λ"
}

/// Parse a sum of terms. Like terms are not merged.
pub fn parse_terms(s: &str) -> Result<Vec<Term>, ExprError> {
    let tokens = tokenize(s)?;
    let mut pos = 0;
    let mut terms = Vec::new();
    let mut first = true;
    while pos < tokens.len() || first {
        let mut sign = 1;
        match tokens.get(pos) {
            Some((_, Token::Op('+'))) => pos += 1,
            Some((_, Token::Op('-'))) => {
                sign = -1;
                pos += 1;
            }
            Some((i, _)) if !first => return Err(ExprError::ExpectedFactor(*i)),
            None if !first => return Err(ExprError::UnexpectedEnd),
            _ => {}
        }
        first = false;
        let mut term = Term {
            coeff: Rational::integer(sign),
            lambda_power: 0,
            var: None,
        };
        let mut divide = false;
        loop {
            let (at, tok) = tokens.get(pos).ok_or(ExprError::UnexpectedEnd)?;
            pos += 1;
            match tok {
                Token::Num(n) => {
                    let n = Rational::integer(*n);
                    term.coeff = if divide {
                        term.coeff.checked_div(&n).map_err(|_| ExprError::DivisionByZero)?
                    } else {
                        &term.coeff * &n
                    };
                }
                Token::Name(name) if is_lambda(name) => {
                    let mut power = 1i32;
                    if let Some((_, Token::Op('^'))) = tokens.get(pos) {
                        pos += 1;
                        let neg = matches!(tokens.get(pos), Some((_, Token::Op('-'))));
                        if neg {
                            pos += 1;
                        }
                        match tokens.get(pos) {
                            Some((_, Token::Num(k))) => {
                                power = i32::try_from(*k).map_err(|_| ExprError::Overflow)?;
                                if neg {
                                    power = -power;
                                }
                                pos += 1;
                            }
                            Some((i, _)) => return Err(ExprError::ExpectedFactor(*i)),
                            None => return Err(ExprError::UnexpectedEnd),
                        }
                    }
                    term.lambda_power += if divide { -power } else { power };
                }
                Token::Name(name) => {
                    if divide {
                        return Err(ExprError::DivideByVariable(name.clone()));
                    }
                    if term.var.is_some() {
                        return Err(ExprError::TwoVariables);
                    }
                    term.var = Some(name.clone());
                }
                Token::Op(_) => return Err(ExprError::ExpectedFactor(*at)),
            }
            match tokens.get(pos) {
                Some((_, Token::Op('*'))) => {
                    divide = false;
                    pos += 1;
                }
                Some((_, Token::Op('/'))) => {
                    divide = true;
                    pos += 1;
                }
                _ => break,
            }
        }
        terms.push(term);
    }
    Ok(terms)
}

pub fn parse_param_form(s: &str) -> Result<ParamForm, ExprError> {
    let mut f = ParamForm::default();
    for t in parse_terms(s)? {
        f.add_term(t.var.as_deref(), t.coeff, t.lambda_power);
    }
    Ok(f)
}

pub fn parse_lambda_poly(s: &str) -> Result<LambdaPoly, ExprError> {
    let mut p = LambdaPoly::default();
    for t in parse_terms(s)? {
        if t.var.is_some() {
            return Err(ExprError::VariableNotAllowed);
        }
        p.add_term(t.coeff, t.lambda_power);
    }
    Ok(p)
}

/// A constant expression such as `3/5` or `-7/15`.
pub fn parse_rational(s: &str) -> Result<Rational, ExprError> {
    let mut acc = Rational::zero();
    for t in parse_terms(s)? {
        if t.var.is_some() {
            return Err(ExprError::VariableNotAllowed);
        }
        if t.lambda_power != 0 {
            return Err(ExprError::LambdaNotAllowed);
        }
        acc += t.coeff;
    }
    Ok(acc)
}

/// Terms without `λ`, as `(var, coeff)` pairs; `None` is the constant.
pub fn parse_linear(s: &str) -> Result<Vec<(Option<String>, Rational)>, ExprError> {
    parse_terms(s)?
        .into_iter()
        .map(|t| {
            if t.lambda_power != 0 {
                Err(ExprError::LambdaNotAllowed)
            } else {
                Ok((t.var, t.coeff))
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use wdp_core::q;

    #[test]
    fn rationals() {
        assert_eq!(parse_rational("3/5").unwrap(), q!(3, 5));
        assert_eq!(parse_rational("-7/15").unwrap(), q!(-7, 15));
        assert_eq!(parse_rational("1 + 1/2").unwrap(), q!(3, 2));
        assert_eq!(parse_rational("1/0"), Err(ExprError::DivisionByZero));
        assert_eq!(parse_rational("a"), Err(ExprError::VariableNotAllowed));
        assert_eq!(parse_rational(""), Err(ExprError::UnexpectedEnd));
        assert_eq!(parse_rational("1 +"), Err(ExprError::UnexpectedEnd));
        assert!(matches!(parse_rational("1 % 2"), Err(ExprError::UnexpectedChar('%', 2))));
    }

    #[test]
    fn lambda_forms() {
        let p = parse_lambda_poly("56/285*lambda + 14/19").unwrap();
        assert_eq!(p.eval(&q!(19, 18)).unwrap(), q!(2422, 2565));
        let inv = parse_lambda_poly("1/lambda").unwrap();
        assert_eq!(inv, parse_lambda_poly("lambda^-1").unwrap());
        assert_eq!(parse_lambda_poly("1/7*lambda^-1").unwrap().eval(&q!(19, 18)).unwrap(), q!(18, 133));
        let mu = parse_param_form("3/19*lambda*a + 6/19*lambda*b + lambda*m + 14/19").unwrap();
        let f = mu.eval(&q!(65, 64)).unwrap();
        assert_eq!(f.coefficient("m"), q!(65, 64));
        assert_eq!(f.constant_term(), &q!(14, 19));
    }

    #[test]
    fn variables() {
        let t = parse_linear("-K - 1/2*L_xz").unwrap();
        assert_eq!(t, vec![(Some("K".into()), q!(-1)), (Some("L_xz".into()), q!(-1, 2))]);
        assert_eq!(parse_terms("a*b"), Err(ExprError::TwoVariables));
        assert_eq!(parse_terms("1/a"), Err(ExprError::DivideByVariable("a".into())));
    }
}
