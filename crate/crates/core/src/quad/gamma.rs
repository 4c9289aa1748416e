use super::QuadError;
use std::f64::consts::PI;

// Lanczos coefficients for g = 7, n = 9 (the set published with GSL).
const LANCZOS_G: f64 = 7.0;
#[allow(clippy::excessive_precision)]
const LANCZOS: [f64; 9] = [
    0.999_999_999_999_809_93,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_13,
    -176.615_029_162_140_59,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_571_6e-6,
    1.505_632_735_149_311_6e-7,
];

fn lanczos(x: f64) -> f64 {
    if x < 0.5 {
        // reflection keeps the series in its accurate range
        PI / ((PI * x).sin() * lanczos(1.0 - x))
    } else {
        let z = x - 1.0;
        let mut acc = LANCZOS[0];
        for (i, c) in LANCZOS.iter().enumerate().skip(1) {
            acc += c / (z + i as f64);
        }
        let t = z + LANCZOS_G + 0.5;
        (2.0 * PI).sqrt() * t.powf(z + 0.5) * (-t).exp() * acc
    }
}

/// Gamma function for `x > 0`.
pub fn gamma(x: f64) -> Result<f64, QuadError> {
    if !(x > 0.0) || !x.is_finite() {
        return Err(QuadError::GammaDomain { x });
    }
    // exact factorials for small integers
    if x.fract() == 0.0 && x <= 21.0 {
        let n = x as u64;
        return Ok((1..n).product::<u64>() as f64);
    }
    let g = lanczos(x);
    if g.is_finite() {
        Ok(g)
    } else {
        Err(QuadError::GammaDomain { x })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn factorial_values() {
        assert_eq!(gamma(1.0).unwrap(), 1.0);
        assert_eq!(gamma(5.0).unwrap(), 24.0);
        assert_eq!(gamma(21.0).unwrap(), 2_432_902_008_176_640_000.0);
    }

    #[test]
    fn half_is_sqrt_pi() {
        assert!((gamma(0.5).unwrap() - PI.sqrt()).abs() < 1e-14);
    }

    #[test]
    fn recurrence_holds() {
        let mut x = 0.1;
        while x <= 20.0 {
            let lhs = gamma(x + 1.0).unwrap();
            let rhs = x * gamma(x).unwrap();
            assert!(((lhs - rhs) / lhs).abs() < 1e-13, "x = {x}");
            x += 0.037;
        }
    }

    #[test]
    fn rejects_non_positive() {
        assert!(gamma(0.0).is_err());
        assert!(gamma(-1.5).is_err());
        assert!(gamma(f64::NAN).is_err());
        assert!(gamma(200.0).is_err());
    }
}
