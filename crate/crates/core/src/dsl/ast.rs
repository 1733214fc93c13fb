use alloc::boxed::Box;
use alloc::string::{String, ToString};
use core::fmt;
use core::str::FromStr;

#[cfg(not(feature = "std"))]
use num_traits::Float;

use super::parser::{parse, ParseError};
use crate::point::ChartPoint;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BinOp {
    Add,
    Sub,
    Mul,
    Div,
}

impl BinOp {
    fn symbol(self) -> char {
        match self {
            BinOp::Add => '+',
            BinOp::Sub => '-',
            BinOp::Mul => '*',
            BinOp::Div => '/',
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Func {
    Sin,
    Cos,
    Exp,
    Log,
    Sqrt,
}

impl Func {
    pub const ALL: [Func; 5] = [Func::Sin, Func::Cos, Func::Exp, Func::Log, Func::Sqrt];

    pub fn name(self) -> &'static str {
        match self {
            Func::Sin => "sin",
            Func::Cos => "cos",
            Func::Exp => "exp",
            Func::Log => "log",
            Func::Sqrt => "sqrt",
        }
    }

    pub fn from_name(s: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|f| f.name() == s)
    }
}

/// Expression tree. Coordinate indices are zero-based internally (`x1` is `Re(0)`).
#[derive(Debug, Clone, PartialEq)]
pub enum Expr {
    Const(f64),
    Re(usize),
    Im(usize),
    AbsSq,
    Neg(Box<Expr>),
    Binary(BinOp, Box<Expr>, Box<Expr>),
    Pow(Box<Expr>, i32),
    Call(Func, Box<Expr>),
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum EvalError {
    #[error("coordinate index {index} exceeds chart dimension {dim}")]
    IndexOutOfRange { index: usize, dim: usize },
    #[error("{func} outside its domain at argument {arg} in `{expr}`")]
    Domain { func: &'static str, arg: f64, expr: String },
    #[error("non-finite value in `{expr}`")]
    NonFinite { expr: String },
}

impl Expr {
    pub fn eval(&self, p: &ChartPoint) -> Result<f64, EvalError> {
        let v = match self {
            Expr::Const(c) => *c,
            Expr::Re(k) | Expr::Im(k) => {
                if *k >= p.dim() {
                    return Err(EvalError::IndexOutOfRange { index: k + 1, dim: p.dim() });
                }
                if matches!(self, Expr::Re(_)) {
                    p.z(*k).re
                } else {
                    p.z(*k).im
                }
            }
            Expr::AbsSq => p.norm_sqr(),
            Expr::Neg(e) => -e.eval(p)?,
            Expr::Binary(op, a, b) => {
                let (a, b) = (a.eval(p)?, b.eval(p)?);
                match op {
                    BinOp::Add => a + b,
                    BinOp::Sub => a - b,
                    BinOp::Mul => a * b,
                    BinOp::Div => a / b,
                }
            }
            Expr::Pow(e, k) => e.eval(p)?.powi(*k),
            Expr::Call(f, e) => {
                let a = e.eval(p)?;
                let bad = match f {
                    Func::Log => a <= 0.0,
                    Func::Sqrt => a < 0.0,
                    _ => false,
                };
                if bad {
                    return Err(EvalError::Domain { func: f.name(), arg: a, expr: self.to_string() });
                }
                match f {
                    Func::Sin => a.sin(),
                    Func::Cos => a.cos(),
                    Func::Exp => a.exp(),
                    Func::Log => a.ln(),
                    Func::Sqrt => a.sqrt(),
                }
            }
        };
        if v.is_finite() {
            Ok(v)
        } else {
            Err(EvalError::NonFinite { expr: self.to_string() })
        }
    }

    /// Largest zero-based coordinate index referenced, if any.
    pub fn max_index(&self) -> Option<usize> {
        match self {
            Expr::Re(k) | Expr::Im(k) => Some(*k),
            Expr::Const(_) | Expr::AbsSq => None,
            Expr::Neg(e) | Expr::Pow(e, _) | Expr::Call(_, e) => e.max_index(),
            Expr::Binary(_, a, b) => match (a.max_index(), b.max_index()) {
                (Some(x), Some(y)) => Some(x.max(y)),
                (x, y) => x.or(y),
            },
        }
    }
}

/// Fully parenthesized, so printing and re-parsing reproduces the tree.
impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Const(c) if *c < 0.0 => write!(f, "(-{:?})", -c),
            Expr::Const(c) => write!(f, "{c:?}"),
            Expr::Re(k) => write!(f, "x{}", k + 1),
            Expr::Im(k) => write!(f, "y{}", k + 1),
            Expr::AbsSq => f.write_str("absq"),
            Expr::Neg(e) => write!(f, "(-{e})"),
            Expr::Binary(op, a, b) => write!(f, "({a} {} {b})", op.symbol()),
            Expr::Pow(e, k) => write!(f, "({e}^{k})"),
            Expr::Call(func, e) => write!(f, "{}({e})", func.name()),
        }
    }
}

/// A parsed real scalar field.
#[derive(Debug, Clone, PartialEq)]
pub struct FieldExpr {
    ast: Expr,
}

impl FieldExpr {
    pub fn new(ast: Expr) -> Self {
        Self { ast }
    }

    pub fn constant(c: f64) -> Self {
        Self { ast: Expr::Const(c) }
    }

    pub fn ast(&self) -> &Expr {
        &self.ast
    }

    pub fn eval(&self, p: &ChartPoint) -> Result<f64, EvalError> {
        self.ast.eval(p)
    }

    /// Smallest chart dimension the expression can be evaluated on.
    pub fn min_dim(&self) -> usize {
        self.ast.max_index().map_or(0, |k| k + 1)
    }
}

impl fmt::Display for FieldExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.ast.fmt(f)
    }
}

impl FromStr for FieldExpr {
    type Err = ParseError;
    fn from_str(s: &str) -> Result<Self, ParseError> {
        parse(s)
    }
}
