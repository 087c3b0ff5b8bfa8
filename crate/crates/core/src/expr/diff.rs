use super::{Expr, Func};

// Smart constructors: constant folding and the 0/1 identities, nothing more.

fn num(x: f64) -> Expr {
    Expr::Num(x)
}

fn as_num(e: &Expr) -> Option<f64> {
    match e {
        Expr::Num(x) => Some(*x),
        _ => None,
    }
}

fn folded(x: f64) -> Option<Expr> {
    x.is_finite().then(|| num(x))
}

fn neg(a: Expr) -> Expr {
    match a {
        Expr::Num(x) => num(-x),
        Expr::Neg(inner) => *inner,
        a => Expr::Neg(Box::new(a)),
    }
}

fn add(a: Expr, b: Expr) -> Expr {
    match (as_num(&a), as_num(&b)) {
        (Some(x), Some(y)) => folded(x + y).unwrap_or_else(|| Expr::Add(Box::new(a), Box::new(b))),
        (Some(x), _) if x == 0.0 => b,
        (_, Some(y)) if y == 0.0 => a,
        _ => Expr::Add(Box::new(a), Box::new(b)),
    }
}

fn sub(a: Expr, b: Expr) -> Expr {
    match (as_num(&a), as_num(&b)) {
        (Some(x), Some(y)) => folded(x - y).unwrap_or_else(|| Expr::Sub(Box::new(a), Box::new(b))),
        (Some(x), _) if x == 0.0 => neg(b),
        (_, Some(y)) if y == 0.0 => a,
        _ => Expr::Sub(Box::new(a), Box::new(b)),
    }
}

fn mul(a: Expr, b: Expr) -> Expr {
    match (as_num(&a), as_num(&b)) {
        (Some(x), Some(y)) => folded(x * y).unwrap_or_else(|| Expr::Mul(Box::new(a), Box::new(b))),
        (Some(x), _) if x == 0.0 => num(0.0),
        (_, Some(y)) if y == 0.0 => num(0.0),
        (Some(x), _) if x == 1.0 => b,
        (_, Some(y)) if y == 1.0 => a,
        (Some(x), _) if x == -1.0 => neg(b),
        (_, Some(y)) if y == -1.0 => neg(a),
        _ => Expr::Mul(Box::new(a), Box::new(b)),
    }
}

fn div(a: Expr, b: Expr) -> Expr {
    match (as_num(&a), as_num(&b)) {
        (Some(x), _) if x == 0.0 => num(0.0),
        (_, Some(y)) if y == 1.0 => a,
        _ => Expr::Div(Box::new(a), Box::new(b)),
    }
}

fn pow(a: Expr, b: Expr) -> Expr {
    match as_num(&b) {
        Some(y) if y == 1.0 => a,
        Some(y) if y == 0.0 => num(1.0),
        _ => Expr::Pow(Box::new(a), Box::new(b)),
    }
}

fn call(f: Func, a: Expr) -> Expr {
    Expr::Call(f, Box::new(a))
}

/// Structural derivative with respect to `t`.
pub fn differentiate(e: &Expr) -> Expr {
    match e {
        Expr::Num(_) | Expr::Const(_) => num(0.0),
        Expr::Param => num(1.0),
        Expr::Neg(a) => neg(differentiate(a)),
        Expr::Add(a, b) => add(differentiate(a), differentiate(b)),
        Expr::Sub(a, b) => sub(differentiate(a), differentiate(b)),
        Expr::Mul(a, b) => add(
            mul(differentiate(a), (**b).clone()),
            mul((**a).clone(), differentiate(b)),
        ),
        Expr::Div(a, b) => {
            // a'/b − a·b'/b²
            let lhs = div(differentiate(a), (**b).clone());
            let db = differentiate(b);
            if as_num(&db) == Some(0.0) {
                return lhs;
            }
            sub(lhs, div(mul((**a).clone(), db), pow((**b).clone(), num(2.0))))
        }
        Expr::Pow(a, b) => {
            let da = differentiate(a);
            if b.is_constant() {
                // b·a^(b−1)·a'
                let exponent = match as_num(b) {
                    Some(y) => num(y - 1.0),
                    None => sub((**b).clone(), num(1.0)),
                };
                mul(mul((**b).clone(), pow((**a).clone(), exponent)), da)
            } else {
                // a^b·(b'·log a + b·a'/a)
                let db = differentiate(b);
                let inner = add(
                    mul(db, call(Func::Log, (**a).clone())),
                    div(mul((**b).clone(), da), (**a).clone()),
                );
                mul(e.clone(), inner)
            }
        }
        Expr::Call(f, a) => {
            let da = differentiate(a);
            if as_num(&da) == Some(0.0) {
                return num(0.0);
            }
            let x = (**a).clone();
            let outer = match f {
                Func::Sin => call(Func::Cos, x),
                Func::Cos => neg(call(Func::Sin, x)),
                Func::Tan => add(num(1.0), pow(call(Func::Tan, x), num(2.0))),
                Func::Sinh => call(Func::Cosh, x),
                Func::Cosh => call(Func::Sinh, x),
                Func::Tanh => sub(num(1.0), pow(call(Func::Tanh, x), num(2.0))),
                Func::Exp => e.clone(),
                Func::Log => return div(da, x),
                Func::Sqrt => return div(da, mul(num(2.0), e.clone())),
            };
            mul(outer, da)
        }
    }
}
