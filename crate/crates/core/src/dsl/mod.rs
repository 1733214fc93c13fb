//! A small language for real scalar fields `f(z, z̄)` on a chart.
//!
//! ```text
//! expr    := term (('+' | '-') term)*
//! term    := unary (('*' | '/') unary)*
//! unary   := '-' unary | power
//! power   := primary ('^' ['-'] integer)*
//! primary := number | variable | function '(' expr ')' | '(' expr ')'
//! variable:= 'x' k | 'y' k | 'absq'          (k ≥ 1; x_k = Re z^k, y_k = Im z^k, absq = |z|²)
//! function:= 'sin' | 'cos' | 'exp' | 'log' | 'sqrt'
//! ```
//!
//! Exponents are integer literals only. Derivatives of these fields are
//! always taken by finite differences.

mod ast;
mod parser;

pub use ast::{BinOp, EvalError, Expr, FieldExpr, Func};
pub use parser::{parse, ParseError};
