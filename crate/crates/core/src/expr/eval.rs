use super::ast::{BinOp, Expr, Func};
use super::dual::DualValue;
use thiserror::Error;

/// Evaluation failures. Domain violations are hard errors so a NaN never
/// reaches a comparison.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum EvalError {
    #[error("division by zero at x = {x}")]
    DivisionByZero { x: f64 },
    #[error("ln of non-positive argument {arg} at x = {x}")]
    LogDomain { arg: f64, x: f64 },
    #[error("sqrt of negative argument {arg} at x = {x}")]
    SqrtDomain { arg: f64, x: f64 },
    #[error("power {base}^{exponent} needs a positive base for a non-integer exponent (x = {x})")]
    PowDomain { base: f64, exponent: f64, x: f64 },
    #[error("non-finite intermediate result at x = {x}")]
    NonFinite { x: f64 },
    #[error("{what} is not differentiable at x = {x}")]
    NotDifferentiable { what: &'static str, x: f64 },
    #[error("x = {x} outside the admissible range [{lo}, {hi}]")]
    OutOfRange { x: f64, lo: f64, hi: f64 },
}

/// Exponents that are exact integers in this range are computed by repeated
/// multiplication, which also admits negative bases.
fn integer_exponent(e: f64) -> Option<i32> {
    if e.fract() == 0.0 && e.abs() <= 1024.0 {
        Some(e as i32)
    } else {
        None
    }
}

fn finite(v: f64, x: f64) -> Result<f64, EvalError> {
    if v.is_finite() {
        Ok(v)
    } else {
        Err(EvalError::NonFinite { x })
    }
}

fn finite_dual(v: DualValue, x: f64) -> Result<DualValue, EvalError> {
    if v.is_finite() {
        Ok(v)
    } else {
        Err(EvalError::NonFinite { x })
    }
}

impl Expr {
    /// Evaluate at `x` in IEEE double precision.
    pub fn eval(&self, x: f64) -> Result<f64, EvalError> {
        let v = match self {
            Expr::Const(c) => *c,
            Expr::Var => x,
            Expr::Neg(e) => -e.eval(x)?,
            Expr::Binary(op, l, r) => {
                let a = l.eval(x)?;
                let b = r.eval(x)?;
                match op {
                    BinOp::Add => a + b,
                    BinOp::Sub => a - b,
                    BinOp::Mul => a * b,
                    BinOp::Div => {
                        if b == 0.0 {
                            return Err(EvalError::DivisionByZero { x });
                        }
                        a / b
                    }
                    BinOp::Pow => match integer_exponent(b) {
                        Some(n) => {
                            if a == 0.0 && n < 0 {
                                return Err(EvalError::DivisionByZero { x });
                            }
                            a.powi(n)
                        }
                        None if a > 0.0 => a.powf(b),
                        None => return Err(EvalError::PowDomain { base: a, exponent: b, x }),
                    },
                }
            }
            Expr::Call(func, e) => {
                let a = e.eval(x)?;
                match func {
                    Func::Exp => a.exp(),
                    Func::Ln => {
                        if a <= 0.0 {
                            return Err(EvalError::LogDomain { arg: a, x });
                        }
                        a.ln()
                    }
                    Func::Sqrt => {
                        if a < 0.0 {
                            return Err(EvalError::SqrtDomain { arg: a, x });
                        }
                        a.sqrt()
                    }
                    Func::Sin => a.sin(),
                    Func::Cos => a.cos(),
                }
            }
        };
        finite(v, x)
    }

    /// Evaluate value and exact derivative by forward-mode propagation.
    pub fn eval_dual(&self, x: f64) -> Result<DualValue, EvalError> {
        self.dual_at(x)
    }

    /// Derivative only.
    pub fn deriv(&self, x: f64) -> Result<f64, EvalError> {
        Ok(self.dual_at(x)?.deriv)
    }

    fn dual_at(&self, x: f64) -> Result<DualValue, EvalError> {
        let v = match self {
            Expr::Const(c) => DualValue::constant(*c),
            Expr::Var => DualValue::variable(x),
            Expr::Neg(e) => -e.dual_at(x)?,
            Expr::Binary(op, l, r) => {
                let a = l.dual_at(x)?;
                let b = r.dual_at(x)?;
                match op {
                    BinOp::Add => a + b,
                    BinOp::Sub => a - b,
                    BinOp::Mul => a * b,
                    BinOp::Div => {
                        if b.value == 0.0 {
                            return Err(EvalError::DivisionByZero { x });
                        }
                        a / b
                    }
                    BinOp::Pow => {
                        let int_exp = if b.deriv == 0.0 { integer_exponent(b.value) } else { None };
                        match int_exp {
                            Some(n) => {
                                if a.value == 0.0 && n < 0 {
                                    return Err(EvalError::DivisionByZero { x });
                                }
                                a.powi(n)
                            }
                            None if a.value > 0.0 => a.powd(b),
                            None => {
                                return Err(EvalError::PowDomain {
                                    base: a.value,
                                    exponent: b.value,
                                    x,
                                })
                            }
                        }
                    }
                }
            }
            Expr::Call(func, e) => {
                let a = e.dual_at(x)?;
                match func {
                    Func::Exp => a.exp(),
                    Func::Ln => {
                        if a.value <= 0.0 {
                            return Err(EvalError::LogDomain { arg: a.value, x });
                        }
                        a.ln()
                    }
                    Func::Sqrt => {
                        if a.value < 0.0 {
                            return Err(EvalError::SqrtDomain { arg: a.value, x });
                        }
                        if a.value == 0.0 {
                            return Err(EvalError::NotDifferentiable { what: "sqrt", x });
                        }
                        a.sqrt()
                    }
                    Func::Sin => a.sin(),
                    Func::Cos => a.cos(),
                }
            }
        };
        finite_dual(v, x)
    }
}

#[cfg(test)]
mod tests {
    use crate::expr::parse;
    use super::*;

    fn ev(s: &str, x: f64) -> Result<f64, EvalError> {
        parse(s).unwrap().eval(x)
    }

    #[test]
    fn direct_arithmetic() {
        assert_eq!(ev("x^2", 3.0).unwrap(), 9.0);
        assert_eq!(ev("1/x", 2.0).unwrap(), 0.5);
        assert_eq!(ev("2+3*4", 0.0).unwrap(), 14.0);
        assert_eq!(ev("2^3^2", 0.0).unwrap(), 512.0);
        assert_eq!(ev("(-2)^3", 0.0).unwrap(), -8.0);
        assert_eq!(ev("x^-1", 4.0).unwrap(), 0.25);
    }

    #[test]
    fn domain_errors_are_reported() {
        assert!(matches!(ev("ln(x)", 0.0), Err(EvalError::LogDomain { .. })));
        assert!(matches!(ev("sqrt(x)", -1.0), Err(EvalError::SqrtDomain { .. })));
        assert!(matches!(ev("1/x", 0.0), Err(EvalError::DivisionByZero { .. })));
        assert!(matches!(ev("x^0.5", -1.0), Err(EvalError::PowDomain { .. })));
        assert!(matches!(ev("x^-2", 0.0), Err(EvalError::DivisionByZero { .. })));
        assert!(matches!(ev("exp(x)", 1000.0), Err(EvalError::NonFinite { .. })));
    }

    #[test]
    fn dual_examples() {
        let d = parse("x^2").unwrap().eval_dual(3.0).unwrap();
        assert_eq!(d, DualValue::new(9.0, 6.0));
        let d = Expr::Const(5.0).eval_dual(1.7).unwrap();
        assert_eq!(d, DualValue::new(5.0, 0.0));
        let d = parse("exp(x)*x").unwrap().eval_dual(1.0).unwrap();
        let e = std::f64::consts::E;
        assert!((d.value - e).abs() < 1e-15);
        assert!((d.deriv - 2.0 * e).abs() < 1e-15);
    }

    #[test]
    fn dual_of_variable_power() {
        // d/dx x^x = x^x (ln x + 1)
        let d = parse("x^x").unwrap().eval_dual(2.0).unwrap();
        assert!((d.deriv - 4.0 * (2f64.ln() + 1.0)).abs() < 1e-14);
        assert!(matches!(
            parse("sqrt(x)").unwrap().eval_dual(0.0),
            Err(EvalError::NotDifferentiable { .. })
        ));
    }
}
