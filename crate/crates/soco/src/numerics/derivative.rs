use crate::error::{Result, SocoError};

fn nonfinite(what: &str, x: f64) -> SocoError {
    SocoError::NonFinite(format!("{what} derivative at {x}"))
}

/// First derivative of `f` at `x` by a five-point stencil with step `epsilon / 10`.
///
/// Falls back to a one-sided stencil when `f` is infinite on one side of `x`.
pub fn derivative1(f: impl Fn(f64) -> f64, x: f64, epsilon: f64) -> Result<f64> {
    let h = epsilon / 10.0;
    let v = |k: f64| f(x + k * h);
    let (m2, m1, p1, p2) = (v(-2.0), v(-1.0), v(1.0), v(2.0));
    if m2.is_finite() && m1.is_finite() && p1.is_finite() && p2.is_finite() {
        return Ok((m2 - 8.0 * m1 + 8.0 * p1 - p2) / (12.0 * h));
    }
    let side = |s: f64| -> Option<f64> {
        let f: Vec<f64> = (0..5).map(|k| v(s * k as f64)).collect();
        f.iter().all(|y| y.is_finite()).then(|| {
            s * (-25.0 * f[0] + 48.0 * f[1] - 36.0 * f[2] + 16.0 * f[3] - 3.0 * f[4]) / (12.0 * h)
        })
    };
    side(1.0).or_else(|| side(-1.0)).ok_or_else(|| nonfinite("first", x))
}

/// Second derivative of `f` at `x` with step `sqrt(epsilon / 10)`.
pub fn derivative2(f: impl Fn(f64) -> f64, x: f64, epsilon: f64) -> Result<f64> {
    let h = (epsilon / 10.0).sqrt();
    let v = |k: f64| f(x + k * h);
    let (m2, m1, c, p1, p2) = (v(-2.0), v(-1.0), v(0.0), v(1.0), v(2.0));
    if [m2, m1, c, p1, p2].iter().all(|y| y.is_finite()) {
        return Ok((-m2 + 16.0 * m1 - 30.0 * c + 16.0 * p1 - p2) / (12.0 * h * h));
    }
    let side = |s: f64| -> Option<f64> {
        let f: Vec<f64> = (0..6).map(|k| v(s * k as f64)).collect();
        f.iter().all(|y| y.is_finite()).then(|| {
            (45.0 * f[0] - 154.0 * f[1] + 214.0 * f[2] - 156.0 * f[3] + 61.0 * f[4] - 10.0 * f[5])
                / (12.0 * h * h)
        })
    };
    side(1.0).or_else(|| side(-1.0)).ok_or_else(|| nonfinite("second", x))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cubic_central() {
        let d1 = derivative1(|x| x * x * x, 2.0, 1e-3).unwrap();
        assert!((d1 - 12.0).abs() < 1e-8, "{d1}");
        let d2 = derivative2(|x| x * x * x, 2.0, 1e-3).unwrap();
        assert!((d2 - 12.0).abs() < 1e-5, "{d2}");
    }

    #[test]
    fn one_sided_near_boundary() {
        let f = |x: f64| if x < 0.0 { f64::INFINITY } else { x * x };
        let d1 = derivative1(f, 0.0, 1e-3).unwrap();
        assert!(d1.abs() < 1e-8, "{d1}");
        let d2 = derivative2(f, 0.0, 1e-3).unwrap();
        assert!((d2 - 2.0).abs() < 1e-5, "{d2}");
        let g = |x: f64| if x > 1.0 { f64::INFINITY } else { x * x };
        let d1 = derivative1(g, 1.0, 1e-3).unwrap();
        assert!((d1 - 2.0).abs() < 1e-8, "{d1}");
    }

    #[test]
    fn infinite_everywhere_fails() {
        assert!(derivative1(|_| f64::INFINITY, 0.0, 1e-3).is_err());
        assert!(derivative2(|_| f64::INFINITY, 0.0, 1e-3).is_err());
    }
}
