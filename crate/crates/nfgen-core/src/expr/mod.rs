//! Plaintext target-function expressions: parsing, double-precision
//! evaluation (including integral-defined special functions), and the static
//! operation census used by the direct-evaluation fallback rule.

mod census;
mod eval;
mod parse;
mod quad;

pub use census::OpCensus;
pub use eval::{EvalContext, EvalError};
pub use parse::ParseError;
pub use quad::{integrate_simpson, QuadError};

use std::fmt;

/// Binary operators in source order of precedence.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BinOp {
    Add,
    Sub,
    Mul,
    Div,
    Pow,
}

/// Function names resolvable at parse time. `lower_inc_gamma` and
/// `upper_inc_gamma` fix their order parameter at parse time (partial
/// application), so evaluation stays single-variable.
#[derive(Debug, Clone, PartialEq)]
pub enum Func {
    Exp,
    Ln,
    Log2,
    Sqrt,
    Abs,
    Tanh,
    Erf,
    Sign,
    Min,
    Max,
    Pow,
    Floor,
    Ite,
    NormalCdf,
    NormalPdf,
    LowerIncGamma { z: f64 },
    UpperIncGamma { z: f64 },
}

impl Func {
    pub fn name(&self) -> &'static str {
        match self {
            Func::Exp => "exp",
            Func::Ln => "ln",
            Func::Log2 => "log2",
            Func::Sqrt => "sqrt",
            Func::Abs => "abs",
            Func::Tanh => "tanh",
            Func::Erf => "erf",
            Func::Sign => "sign",
            Func::Min => "min",
            Func::Max => "max",
            Func::Pow => "pow",
            Func::Floor => "floor",
            Func::Ite => "ite",
            Func::NormalCdf => "normal_cdf",
            Func::NormalPdf => "normal_pdf",
            Func::LowerIncGamma { .. } => "lower_inc_gamma",
            Func::UpperIncGamma { .. } => "upper_inc_gamma",
        }
    }
}

/// Abstract syntax tree over one free variable `x`.
#[derive(Debug, Clone, PartialEq)]
pub enum Expr {
    Num(f64),
    Var,
    Neg(Box<Expr>),
    Bin(BinOp, Box<Expr>, Box<Expr>),
    Call(Func, Vec<Expr>),
}

impl Expr {
    /// True when the subtree contains no occurrence of `x`.
    pub fn is_const(&self) -> bool {
        match self {
            Expr::Num(_) => true,
            Expr::Var => false,
            Expr::Neg(a) => a.is_const(),
            Expr::Bin(_, a, b) => a.is_const() && b.is_const(),
            Expr::Call(_, args) => args.iter().all(|a| a.is_const()),
        }
    }
}

/// A parsed target function `F(x)`.
#[derive(Debug, Clone, PartialEq)]
pub struct Expression {
    root: Expr,
}

impl Expression {
    pub fn parse(text: &str) -> Result<Expression, ParseError> {
        parse::parse(text).map(|root| Expression { root })
    }

    pub fn root(&self) -> &Expr {
        &self.root
    }

    /// Evaluate at `x` in double precision with default quadrature tolerance.
    pub fn eval(&self, x: f64) -> Result<f64, EvalError> {
        self.eval_with(x, &EvalContext::default())
    }

    pub fn eval_with(&self, x: f64, ctx: &EvalContext) -> Result<f64, EvalError> {
        eval::eval(&self.root, x, ctx)
    }

    /// Static counts of each operation kind.
    pub fn census(&self) -> OpCensus {
        census::census(&self.root)
    }
}

impl fmt::Display for Expression {
    fn fmt(&self, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_expr(&self.root, out)
    }
}

fn write_expr(e: &Expr, out: &mut fmt::Formatter<'_>) -> fmt::Result {
    match e {
        Expr::Num(v) => write!(out, "{v}"),
        Expr::Var => write!(out, "x"),
        Expr::Neg(a) => {
            write!(out, "(-")?;
            write_expr(a, out)?;
            write!(out, ")")
        }
        Expr::Bin(op, a, b) => {
            let sym = match op {
                BinOp::Add => "+",
                BinOp::Sub => "-",
                BinOp::Mul => "*",
                BinOp::Div => "/",
                BinOp::Pow => "^",
            };
            write!(out, "(")?;
            write_expr(a, out)?;
            write!(out, " {sym} ")?;
            write_expr(b, out)?;
            write!(out, ")")
        }
        Expr::Call(func, args) => {
            write!(out, "{}(", func.name())?;
            let mut first = true;
            if let Func::LowerIncGamma { z } | Func::UpperIncGamma { z } = func {
                write!(out, "{z}")?;
                first = false;
            }
            for a in args {
                if !first {
                    write!(out, ", ")?;
                }
                write_expr(a, out)?;
                first = false;
            }
            write!(out, ")")
        }
    }
}
