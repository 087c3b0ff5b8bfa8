//! Symbolic scalar expressions in one parameter `t`.
//!
//! Curves are given as four expressions; their derivatives are produced
//! symbolically by [`differentiate`] so that frames and curvatures see exact
//! (up to rounding) jets instead of finite differences.

mod diff;
mod parser;

use std::fmt;

pub use diff::differentiate;
pub use parser::{parse_expr, parse_expr_with, ParseError, ParseErrorKind};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Func {
    Sin,
    Cos,
    Tan,
    Sinh,
    Cosh,
    Tanh,
    Exp,
    Log,
    Sqrt,
}

impl Func {
    pub const ALL: [Func; 9] = [
        Func::Sin,
        Func::Cos,
        Func::Tan,
        Func::Sinh,
        Func::Cosh,
        Func::Tanh,
        Func::Exp,
        Func::Log,
        Func::Sqrt,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Func::Sin => "sin",
            Func::Cos => "cos",
            Func::Tan => "tan",
            Func::Sinh => "sinh",
            Func::Cosh => "cosh",
            Func::Tanh => "tanh",
            Func::Exp => "exp",
            Func::Log => "log",
            Func::Sqrt => "sqrt",
        }
    }

    pub fn from_name(name: &str) -> Option<Func> {
        Func::ALL.into_iter().find(|f| f.name() == name)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Constant {
    Pi,
    E,
}

impl Constant {
    pub fn value(self) -> f64 {
        match self {
            Constant::Pi => std::f64::consts::PI,
            Constant::E => std::f64::consts::E,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Expr {
    Num(f64),
    Param,
    Const(Constant),
    Neg(Box<Expr>),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Div(Box<Expr>, Box<Expr>),
    Pow(Box<Expr>, Box<Expr>),
    Call(Func, Box<Expr>),
}

/// Why an expression could not be evaluated at a parameter value.
#[derive(Clone, Debug, PartialEq)]
pub enum EvalError {
    Log(f64),
    Sqrt(f64),
    DivisionByZero,
    Power { base: f64, exponent: f64 },
    NonFinite,
}

impl fmt::Display for EvalError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            EvalError::Log(x) => write!(f, "log of non-positive value {x}"),
            EvalError::Sqrt(x) => write!(f, "sqrt of negative value {x}"),
            EvalError::DivisionByZero => write!(f, "division by zero"),
            EvalError::Power { base, exponent } => {
                write!(f, "power {base}^{exponent} has no real value")
            }
            EvalError::NonFinite => write!(f, "non-finite result"),
        }
    }
}

impl Expr {
    /// True when the tree does not mention the parameter.
    pub fn is_constant(&self) -> bool {
        match self {
            Expr::Num(_) | Expr::Const(_) => true,
            Expr::Param => false,
            Expr::Neg(a) | Expr::Call(_, a) => a.is_constant(),
            Expr::Add(a, b) | Expr::Sub(a, b) | Expr::Mul(a, b) | Expr::Div(a, b) | Expr::Pow(a, b) => {
                a.is_constant() && b.is_constant()
            }
        }
    }

    pub fn node_count(&self) -> usize {
        match self {
            Expr::Num(_) | Expr::Const(_) | Expr::Param => 1,
            Expr::Neg(a) | Expr::Call(_, a) => 1 + a.node_count(),
            Expr::Add(a, b) | Expr::Sub(a, b) | Expr::Mul(a, b) | Expr::Div(a, b) | Expr::Pow(a, b) => {
                1 + a.node_count() + b.node_count()
            }
        }
    }

    pub fn eval(&self, t: f64) -> Result<f64, EvalError> {
        let v = match self {
            Expr::Num(x) => *x,
            Expr::Param => t,
            Expr::Const(c) => c.value(),
            Expr::Neg(a) => -a.eval(t)?,
            Expr::Add(a, b) => a.eval(t)? + b.eval(t)?,
            Expr::Sub(a, b) => a.eval(t)? - b.eval(t)?,
            Expr::Mul(a, b) => a.eval(t)? * b.eval(t)?,
            Expr::Div(a, b) => {
                let den = b.eval(t)?;
                if den == 0.0 {
                    return Err(EvalError::DivisionByZero);
                }
                a.eval(t)? / den
            }
            Expr::Pow(a, b) => {
                let base = a.eval(t)?;
                let exponent = b.eval(t)?;
                if b.is_constant() {
                    if exponent.fract() == 0.0 && exponent.abs() <= i32::MAX as f64 {
                        if base == 0.0 && exponent < 0.0 {
                            return Err(EvalError::DivisionByZero);
                        }
                        base.powi(exponent as i32)
                    } else if base < 0.0 {
                        return Err(EvalError::Power { base, exponent });
                    } else {
                        base.powf(exponent)
                    }
                } else {
                    // variable exponents go through exp(b·log a)
                    if base <= 0.0 {
                        return Err(EvalError::Power { base, exponent });
                    }
                    (exponent * base.ln()).exp()
                }
            }
            Expr::Call(func, a) => {
                let x = a.eval(t)?;
                match func {
                    Func::Sin => x.sin(),
                    Func::Cos => x.cos(),
                    Func::Tan => x.tan(),
                    Func::Sinh => x.sinh(),
                    Func::Cosh => x.cosh(),
                    Func::Tanh => x.tanh(),
                    Func::Exp => x.exp(),
                    Func::Log => {
                        if x <= 0.0 {
                            return Err(EvalError::Log(x));
                        }
                        x.ln()
                    }
                    Func::Sqrt => {
                        if x < 0.0 {
                            return Err(EvalError::Sqrt(x));
                        }
                        x.sqrt()
                    }
                }
            }
        };
        if v.is_finite() {
            Ok(v)
        } else {
            Err(EvalError::NonFinite)
        }
    }
}

impl From<f64> for Expr {
    fn from(x: f64) -> Self {
        Expr::Num(x)
    }
}

fn write_num(f: &mut fmt::Formatter<'_>, x: f64) -> fmt::Result {
    if x < 0.0 || (x == 0.0 && x.is_sign_negative()) {
        write!(f, "(-{:?})", -x)
    } else {
        write!(f, "{x:?}")
    }
}

/// Fully parenthesized rendering that parses back to an equivalent tree.
impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Num(x) => write_num(f, *x),
            Expr::Param => write!(f, "t"),
            Expr::Const(Constant::Pi) => write!(f, "pi"),
            Expr::Const(Constant::E) => write!(f, "e"),
            Expr::Neg(a) => write!(f, "(-{a})"),
            Expr::Add(a, b) => write!(f, "({a} + {b})"),
            Expr::Sub(a, b) => write!(f, "({a} - {b})"),
            Expr::Mul(a, b) => write!(f, "({a} * {b})"),
            Expr::Div(a, b) => write!(f, "({a} / {b})"),
            Expr::Pow(a, b) => write!(f, "({a} ^ {b})"),
            Expr::Call(func, a) => write!(f, "{}({a})", func.name()),
        }
    }
}
