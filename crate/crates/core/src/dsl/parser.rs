use alloc::boxed::Box;
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use super::ast::{BinOp, Expr, FieldExpr, Func};

/// Syntax error at a 1-based byte offset.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("syntax error at byte {offset}: {message}")]
pub struct ParseError {
    pub offset: usize,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(f64),
    Int(i64),
    Ident(String),
    Op(u8),
    LParen,
    RParen,
    End,
}

fn describe(t: &Tok) -> String {
    match t {
        Tok::Num(v) => format!("number {v}"),
        Tok::Int(v) => format!("integer {v}"),
        Tok::Ident(s) => format!("identifier `{s}`"),
        Tok::Op(c) => format!("`{}`", *c as char),
        Tok::LParen => "`(`".into(),
        Tok::RParen => "`)`".into(),
        Tok::End => "end of input".into(),
    }
}

fn lex(src: &str) -> Result<Vec<(Tok, usize)>, ParseError> {
    let b = src.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < b.len() {
        let c = b[i];
        let start = i;
        if c.is_ascii_whitespace() {
            i += 1;
            continue;
        }
        if c.is_ascii_digit() || c == b'.' {
            let mut is_int = true;
            while i < b.len() && b[i].is_ascii_digit() {
                i += 1;
            }
            if i < b.len() && b[i] == b'.' {
                is_int = false;
                i += 1;
                while i < b.len() && b[i].is_ascii_digit() {
                    i += 1;
                }
            }
            if i < b.len() && (b[i] == b'e' || b[i] == b'E') {
                let mut j = i + 1;
                if j < b.len() && (b[j] == b'+' || b[j] == b'-') {
                    j += 1;
                }
                if j < b.len() && b[j].is_ascii_digit() {
                    is_int = false;
                    i = j;
                    while i < b.len() && b[i].is_ascii_digit() {
                        i += 1;
                    }
                }
            }
            let text = &src[start..i];
            let tok = if is_int {
                text.parse::<i64>().map(Tok::Int).ok()
            } else {
                text.parse::<f64>().ok().filter(|v| v.is_finite()).map(Tok::Num)
            };
            match tok {
                Some(t) => out.push((t, start + 1)),
                None => {
                    return Err(ParseError { offset: start + 1, message: format!("malformed number `{text}`") })
                }
            }
            continue;
        }
        if c.is_ascii_alphabetic() || c == b'_' {
            while i < b.len() && (b[i].is_ascii_alphanumeric() || b[i] == b'_') {
                i += 1;
            }
            out.push((Tok::Ident(src[start..i].into()), start + 1));
            continue;
        }
        let tok = match c {
            b'+' | b'-' | b'*' | b'/' | b'^' => Tok::Op(c),
            b'(' => Tok::LParen,
            b')' => Tok::RParen,
            _ => {
                let ch = src[start..].chars().next().unwrap_or('?');
                return Err(ParseError { offset: start + 1, message: format!("unexpected character `{ch}`") });
            }
        };
        out.push((tok, start + 1));
        i += 1;
    }
    out.push((Tok::End, src.len() + 1));
    Ok(out)
}

struct Parser {
    toks: Vec<(Tok, usize)>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].0
    }

    fn offset(&self) -> usize {
        self.toks[self.pos].1
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.pos].0.clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn fail<T>(&self, expected: &str) -> Result<T, ParseError> {
        Err(ParseError {
            offset: self.offset(),
            message: format!("expected {expected}, found {}", describe(self.peek())),
        })
    }

    fn expr(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.term()?;
        loop {
            let op = match self.peek() {
                Tok::Op(b'+') => BinOp::Add,
                Tok::Op(b'-') => BinOp::Sub,
                _ => return Ok(lhs),
            };
            self.bump();
            let rhs = self.term()?;
            lhs = Expr::Binary(op, Box::new(lhs), Box::new(rhs));
        }
    }

    fn term(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.unary()?;
        loop {
            let op = match self.peek() {
                Tok::Op(b'*') => BinOp::Mul,
                Tok::Op(b'/') => BinOp::Div,
                _ => return Ok(lhs),
            };
            self.bump();
            let rhs = self.unary()?;
            lhs = Expr::Binary(op, Box::new(lhs), Box::new(rhs));
        }
    }

    fn unary(&mut self) -> Result<Expr, ParseError> {
        if *self.peek() == Tok::Op(b'-') {
            self.bump();
            return Ok(Expr::Neg(Box::new(self.unary()?)));
        }
        self.power()
    }

    fn power(&mut self) -> Result<Expr, ParseError> {
        let mut base = self.primary()?;
        while *self.peek() == Tok::Op(b'^') {
            self.bump();
            let negative = if *self.peek() == Tok::Op(b'-') {
                self.bump();
                true
            } else {
                false
            };
            let k = match self.peek() {
                Tok::Int(k) => *k,
                _ => return self.fail("integer exponent"),
            };
            let k = if negative { -k } else { k };
            let k = match i32::try_from(k) {
                Ok(k) => k,
                Err(_) => return self.fail("exponent in i32 range"),
            };
            self.bump();
            base = Expr::Pow(Box::new(base), k);
        }
        Ok(base)
    }

    fn primary(&mut self) -> Result<Expr, ParseError> {
        let at = self.offset();
        match self.peek().clone() {
            Tok::Num(v) => {
                self.bump();
                Ok(Expr::Const(v))
            }
            Tok::Int(v) => {
                self.bump();
                Ok(Expr::Const(v as f64))
            }
            Tok::LParen => {
                self.bump();
                let e = self.expr()?;
                if *self.peek() != Tok::RParen {
                    return self.fail("`)`");
                }
                self.bump();
                Ok(e)
            }
            Tok::Ident(name) => {
                self.bump();
                if let Some(func) = Func::from_name(&name) {
                    if *self.peek() != Tok::LParen {
                        return self.fail("`(` after function name");
                    }
                    self.bump();
                    let arg = self.expr()?;
                    if *self.peek() != Tok::RParen {
                        return self.fail("`)`");
                    }
                    self.bump();
                    return Ok(Expr::Call(func, Box::new(arg)));
                }
                variable(&name).ok_or_else(|| ParseError {
                    offset: at,
                    message: format!("unknown identifier `{name}`"),
                })
            }
            _ => self.fail("number, variable, function or `(`"),
        }
    }
}

fn variable(name: &str) -> Option<Expr> {
    if name == "absq" {
        return Some(Expr::AbsSq);
    }
    let (head, digits) = name.split_at(1);
    if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) || digits.starts_with('0') {
        return None;
    }
    let k: usize = digits.parse().ok()?;
    match head {
        "x" => Some(Expr::Re(k - 1)),
        "y" => Some(Expr::Im(k - 1)),
        _ => None,
    }
}

/// Parses a field expression.
pub fn parse(src: &str) -> Result<FieldExpr, ParseError> {
    let mut p = Parser { toks: lex(src)?, pos: 0 };
    let e = p.expr()?;
    if *p.peek() != Tok::End {
        return p.fail("operator or end of input");
    }
    Ok(FieldExpr::new(e))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::point::ChartPoint;
    use alloc::string::ToString;
    use alloc::vec;
    use proptest::prelude::*;

    fn at(xy: &[f64]) -> ChartPoint {
        ChartPoint::from_real(xy).unwrap()
    }

    fn eval(s: &str, xy: &[f64]) -> f64 {
        parse(s).unwrap().eval(&at(xy)).unwrap()
    }

    #[test]
    fn literals_and_variables() {
        assert_eq!(*parse("0").unwrap().ast(), Expr::Const(0.0));
        assert_eq!(*parse("x1").unwrap().ast(), Expr::Re(0));
        assert_eq!(*parse(" y12 ").unwrap().ast(), Expr::Im(11));
        assert_eq!(*parse("log(absq)").unwrap().ast(), Expr::Call(Func::Log, Box::new(Expr::AbsSq)));
    }

    #[test]
    fn evaluation_examples() {
        assert_eq!(eval("x1 + y1", &[1.0, 2.0, 0.0, 0.0]), 3.0);
        assert_eq!(eval("log(absq)", &[1.0, 0.0, 0.0, 0.0]), 0.0);
        assert!((eval("exp(x1)", &[1.0, 0.0, 0.0, 0.0]) - core::f64::consts::E).abs() < 1e-15);
    }

    #[test]
    fn precedence() {
        assert_eq!(eval("2+3*4", &[0.0, 0.0]), 14.0);
        assert_eq!(eval("-x1^2", &[3.0, 0.0]), -9.0);
        assert_eq!(eval("2*x1^2", &[3.0, 0.0]), 18.0);
        assert_eq!(eval("8/2/2", &[0.0, 0.0]), 2.0);
        assert_eq!(eval("8-2-2", &[0.0, 0.0]), 4.0);
        assert_eq!(eval("x1^-2", &[2.0, 0.0]), 0.25);
        assert_eq!(eval("--x1", &[2.0, 0.0]), 2.0);
        assert_eq!(eval("1.5e1 * 2", &[0.0, 0.0]), 30.0);
    }

    #[test]
    fn syntax_errors_carry_offsets() {
        let e = parse("x1 + ").unwrap_err();
        assert_eq!(e.offset, 6);
        assert!(e.message.contains("expected"), "{}", e.message);
        let e = parse("sin x1").unwrap_err();
        assert_eq!(e.offset, 5);
        let e = parse("x1 ^ 2.5").unwrap_err();
        assert!(e.message.contains("integer exponent"));
        let e = parse("(x1").unwrap_err();
        assert!(e.message.contains("`)`"));
        assert!(parse("x1 $ 2").unwrap_err().message.contains("unexpected character"));
        assert!(parse("").is_err());
    }

    #[test]
    fn unknown_identifiers() {
        for s in ["z1", "x0", "x", "tan(x1)", "absq2", "x01"] {
            assert!(parse(s).is_err(), "{s}");
        }
        let e = parse("1 + foo").unwrap_err();
        assert_eq!(e.offset, 5);
        assert!(e.message.contains("unknown identifier"));
    }

    #[test]
    fn index_checked_at_evaluation() {
        let f = parse("x3").unwrap();
        assert_eq!(f.min_dim(), 3);
        assert!(matches!(
            f.eval(&at(&[0.0, 0.0, 0.0, 0.0])),
            Err(super::super::EvalError::IndexOutOfRange { index: 3, dim: 2 })
        ));
    }

    #[test]
    fn domain_errors() {
        let e = parse("log(x1)").unwrap().eval(&at(&[-1.0, 0.0])).unwrap_err();
        assert!(e.to_string().contains("log"), "{e}");
        assert!(parse("sqrt(x1 - 1)").unwrap().eval(&at(&[0.0, 0.0])).is_err());
        assert!(parse("1/x1").unwrap().eval(&at(&[0.0, 0.0])).is_err());
    }

    #[test]
    fn unbalanced_parentheses_rejected() {
        let corpus = vec!["(", ")", "((x1)", "(x1))", "sin(x1", "sin x1)", "()", "(()", "x1)(", ")(", "exp((x1)", "((((1)))", "1+(2*(3)"];
        for s in corpus {
            assert!(parse(s).is_err(), "{s}");
        }
    }

    proptest! {
        #[test]
        fn arbitrary_input_never_panics(s in "[-+*/^() .0-9a-z]{0,40}") {
            let _ = parse(&s);
        }

        #[test]
        fn bracket_soup_rejected(s in "[()]{1,20}") {
            prop_assert!(parse(&s).is_err());
        }
    }

    fn arb_expr() -> impl Strategy<Value = Expr> {
        let leaf = prop_oneof![
            (-5.0f64..5.0).prop_map(Expr::Const),
            (0usize..2).prop_map(Expr::Re),
            (0usize..2).prop_map(Expr::Im),
            Just(Expr::AbsSq),
        ];
        leaf.prop_recursive(4, 24, 2, |inner| {
            prop_oneof![
                inner.clone().prop_map(|e| Expr::Neg(Box::new(e))),
                (inner.clone(), inner.clone(), 0usize..4).prop_map(|(a, b, k)| {
                    let op = [BinOp::Add, BinOp::Sub, BinOp::Mul, BinOp::Div][k];
                    Expr::Binary(op, Box::new(a), Box::new(b))
                }),
                (inner.clone(), -3i32..4).prop_map(|(e, k)| Expr::Pow(Box::new(e), k)),
                (inner, 0usize..5).prop_map(|(e, k)| Expr::Call(Func::ALL[k], Box::new(e))),
            ]
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]
        #[test]
        fn print_parse_round_trip(ast in arb_expr()) {
            let printed = ast.to_string();
            let reparsed = parse(&printed).unwrap();
            // The printer writes negative constants as negation, so compare after one normalization.
            let again = parse(&reparsed.to_string()).unwrap();
            prop_assert_eq!(&again, &reparsed);
            let p = at(&[0.7, -0.3, 0.2, 1.1]);
            let (a, b) = (ast.eval(&p), reparsed.eval(&p));
            match (a, b) {
                (Ok(x), Ok(y)) => prop_assert_eq!(x.to_bits(), y.to_bits()),
                (Err(_), Err(_)) => {}
                (x, y) => prop_assert!(false, "{:?} vs {:?}", x, y),
            }
        }
    }
}
