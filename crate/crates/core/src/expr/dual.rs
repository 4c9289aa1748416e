use std::ops::{Add, Div, Mul, Neg, Sub};

/// Forward-mode dual number: a value together with its derivative in `x`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DualValue {
    pub value: f64,
    pub deriv: f64,
}

impl DualValue {
    pub const fn new(value: f64, deriv: f64) -> Self {
        DualValue { value, deriv }
    }

    pub const fn constant(value: f64) -> Self {
        DualValue { value, deriv: 0.0 }
    }

    /// The seed for the independent variable: `dx/dx = 1`.
    pub const fn variable(x: f64) -> Self {
        DualValue { value: x, deriv: 1.0 }
    }

    pub fn is_finite(&self) -> bool {
        self.value.is_finite() && self.deriv.is_finite()
    }

    pub fn exp(self) -> Self {
        let e = self.value.exp();
        DualValue::new(e, e * self.deriv)
    }

    pub fn sin(self) -> Self {
        DualValue::new(self.value.sin(), self.value.cos() * self.deriv)
    }

    pub fn cos(self) -> Self {
        DualValue::new(self.value.cos(), -self.value.sin() * self.deriv)
    }

    /// Natural log; caller guarantees `value > 0`.
    pub fn ln(self) -> Self {
        DualValue::new(self.value.ln(), self.deriv / self.value)
    }

    /// Square root; caller guarantees `value > 0`.
    pub fn sqrt(self) -> Self {
        let s = self.value.sqrt();
        DualValue::new(s, self.deriv / (2.0 * s))
    }

    /// Integer power by repeated multiplication.
    pub fn powi(self, n: i32) -> Self {
        if n == 0 {
            return DualValue::constant(1.0);
        }
        let value = self.value.powi(n);
        let deriv = f64::from(n) * self.value.powi(n - 1) * self.deriv;
        DualValue::new(value, deriv)
    }

    /// General power `self^exponent`; caller guarantees `self.value > 0`.
    pub fn powd(self, exponent: DualValue) -> Self {
        let value = self.value.powf(exponent.value);
        let deriv =
            value * (exponent.deriv * self.value.ln() + exponent.value * self.deriv / self.value);
        DualValue::new(value, deriv)
    }
}

impl Add for DualValue {
    type Output = DualValue;
    fn add(self, rhs: DualValue) -> DualValue {
        DualValue::new(self.value + rhs.value, self.deriv + rhs.deriv)
    }
}

impl Sub for DualValue {
    type Output = DualValue;
    fn sub(self, rhs: DualValue) -> DualValue {
        DualValue::new(self.value - rhs.value, self.deriv - rhs.deriv)
    }
}

impl Mul for DualValue {
    type Output = DualValue;
    fn mul(self, rhs: DualValue) -> DualValue {
        DualValue::new(
            self.value * rhs.value,
            self.deriv * rhs.value + self.value * rhs.deriv,
        )
    }
}

impl Div for DualValue {
    type Output = DualValue;
    fn div(self, rhs: DualValue) -> DualValue {
        let q = self.value / rhs.value;
        DualValue::new(q, (self.deriv - q * rhs.deriv) / rhs.value)
    }
}

impl Neg for DualValue {
    type Output = DualValue;
    fn neg(self) -> DualValue {
        DualValue::new(-self.value, -self.deriv)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn product_and_quotient_rules() {
        let x = DualValue::variable(3.0);
        let p = x * x;
        assert_eq!(p, DualValue::new(9.0, 6.0));
        let q = DualValue::constant(1.0) / x;
        assert!((q.deriv + 1.0 / 9.0).abs() < 1e-16);
    }

    #[test]
    fn powi_zero_is_constant() {
        let x = DualValue::variable(0.0);
        assert_eq!(x.powi(0), DualValue::constant(1.0));
    }
}
