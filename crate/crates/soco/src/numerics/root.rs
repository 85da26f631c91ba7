use super::ROOT_BUDGET;
use crate::error::{Result, SocoError};

/// Brent's method on the bracket `[a, b]`, stopping once the bracket is narrower than `xtol`.
pub fn find_root(f: impl Fn(f64) -> f64, a: f64, b: f64, xtol: f64) -> Result<f64> {
    let (mut a, mut b) = (a, b);
    let mut fa = f(a);
    let mut fb = f(b);
    if fa.is_nan() || fb.is_nan() {
        return Err(SocoError::NonFinite(format!("NaN at bracket end of [{a}, {b}]")));
    }
    if fa == 0.0 {
        return Ok(a);
    }
    if fb == 0.0 {
        return Ok(b);
    }
    if fa.signum() == fb.signum() {
        return Err(SocoError::NoSignChange { a, b });
    }
    let mut guard = 0;
    while !(fa.is_finite() && fb.is_finite()) && guard < ROOT_BUDGET {
        guard += 1;
        let m = 0.5 * (a + b);
        let fm = f(m);
        if fm == 0.0 {
            return Ok(m);
        }
        if fm.is_nan() {
            return Err(SocoError::NonFinite(format!("NaN at {m}")));
        }
        if fm.signum() == fa.signum() {
            a = m;
            fa = fm;
        } else {
            b = m;
            fb = fm;
        }
        if (b - a).abs() <= xtol {
            return Ok(if fa.abs() < fb.abs() { a } else { b });
        }
    }
    let mut c = b;
    let mut fc = fb;
    let mut d = b - a;
    let mut e = d;
    for _ in 0..ROOT_BUDGET {
        if fb.signum() == fc.signum() {
            c = a;
            fc = fa;
            d = b - a;
            e = d;
        }
        if fc.abs() < fb.abs() {
            a = b;
            b = c;
            c = a;
            fa = fb;
            fb = fc;
            fc = fa;
        }
        let tol1 = 2.0 * f64::EPSILON * b.abs() + 0.5 * xtol;
        let xm = 0.5 * (c - b);
        if xm.abs() <= tol1 || fb == 0.0 {
            return Ok(b);
        }
        if e.abs() >= tol1 && fa.abs() > fb.abs() {
            let s = fb / fa;
            let (mut p, mut q);
            if a == c {
                p = 2.0 * xm * s;
                q = 1.0 - s;
            } else {
                let qa = fa / fc;
                let r = fb / fc;
                p = s * (2.0 * xm * qa * (qa - r) - (b - a) * (r - 1.0));
                q = (qa - 1.0) * (r - 1.0) * (s - 1.0);
            }
            if p > 0.0 {
                q = -q;
            }
            p = p.abs();
            let min1 = 3.0 * xm * q - (tol1 * q).abs();
            let min2 = (e * q).abs();
            if 2.0 * p < min1.min(min2) {
                e = d;
                d = p / q;
            } else {
                d = xm;
                e = d;
            }
        } else {
            d = xm;
            e = d;
        }
        a = b;
        fa = fb;
        b += if d.abs() > tol1 { d } else { tol1.copysign(xm) };
        fb = f(b);
        if fb.is_nan() {
            return Err(SocoError::NonFinite(format!("NaN at {b}")));
        }
    }
    Err(SocoError::NonConverged { what: "root finding".into(), budget: ROOT_BUDGET })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn linear_root() {
        assert!((find_root(|x| x - 2.0, 0.0, 5.0, 1e-12).unwrap() - 2.0).abs() < 1e-10);
    }

    #[test]
    fn cubic_root() {
        assert!((find_root(|x| x * x * x - x, 0.5, 2.0, 1e-12).unwrap() - 1.0).abs() < 1e-10);
    }

    #[test]
    fn no_sign_change() {
        assert!(matches!(find_root(|x| x * x + 1.0, -1.0, 1.0, 1e-9), Err(SocoError::NoSignChange { .. })));
    }

    #[test]
    fn endpoint_root() {
        assert_eq!(find_root(|x| x, 0.0, 1.0, 1e-9).unwrap(), 0.0);
    }

    #[test]
    fn handles_infinite_end() {
        let r = find_root(|x| if x > 3.0 { f64::INFINITY } else { x - 1.0 }, 0.0, 4.0, 1e-12).unwrap();
        assert!((r - 1.0).abs() < 1e-9);
    }
}
