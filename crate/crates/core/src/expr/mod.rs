//! Expression mini-language for user-supplied scalar functions of `x`.
//!
//! Grammar: numbers, `x`, `+ - * / ^`, unary minus, parentheses, and the
//! calls `exp ln sqrt sin cos`. [`Expr`]'s `Display` emits canonical fully
//! parenthesized infix that parses back to the identical tree.

mod ast;
mod dual;
mod eval;
mod parser;

pub use ast::{BinOp, Expr, Func};
pub use dual::DualValue;
pub use eval::EvalError;
pub use parser::{parse, ParseError, ParseErrorKind};
