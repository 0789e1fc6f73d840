//! Expression language and canonical printing.

pub mod eval;
pub mod format;
pub mod parse;

pub use eval::{eval_operator, eval_word, parse_operator, parse_operator_in, parse_word, OpEnv};
pub use format::{format_dpoly, format_operator, Style};
pub use parse::{parse_expr, Expr};
