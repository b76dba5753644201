//! Real branches of the Lambert W function (`W e^W = x`).
//!
//! Both branches use Halley's iteration from branch-specific seeds: the
//! branch-point series near `x = -1/e`, `ln(1 + x)` on the principal
//! branch, and the asymptotic `ln(-x) - ln(-ln(-x))` expansion on `W_{-1}`.

use std::f64::consts::E;

use crate::error::{Error, Result};

const MAX_ITER: usize = 64;
const BRANCH_POINT: f64 = -1.0 / E;

/// Principal branch `W_0`, defined for `x >= -1/e`.
pub fn lambert_w0(x: f64) -> Result<f64> {
    if !(x >= BRANCH_POINT) || !x.is_finite() {
        return Err(Error::InvalidParameter(format!("W_0 undefined at {x}")));
    }
    if x == 0.0 {
        return Ok(0.0);
    }
    let seed = if x < -0.25 {
        branch_point_series(x, 1.0)
    } else if x < 3.0 {
        x.ln_1p()
    } else {
        let l1 = x.ln();
        l1 - l1.ln()
    };
    Ok(halley(x, seed))
}

/// Lower branch `W_{-1}`, defined for `-1/e <= x < 0`.
pub fn lambert_wm1(x: f64) -> Result<f64> {
    if !(BRANCH_POINT..0.0).contains(&x) {
        return Err(Error::InvalidParameter(format!("W_-1 undefined at {x}")));
    }
    let seed = if x < -0.25 {
        branch_point_series(x, -1.0)
    } else {
        let l1 = (-x).ln();
        let l2 = (-l1).ln();
        l1 - l2 + l2 / l1
    };
    Ok(halley(x, seed))
}

// W ≈ -1 + p - p²/3 + 11p³/72 with p = ±sqrt(2(ex + 1))
fn branch_point_series(x: f64, sign: f64) -> f64 {
    let p = sign * (2.0 * (E * x + 1.0)).max(0.0).sqrt();
    -1.0 + p - p * p / 3.0 + 11.0 / 72.0 * p * p * p
}

fn halley(x: f64, mut w: f64) -> f64 {
    for _ in 0..MAX_ITER {
        let ew = w.exp();
        let f = w * ew - x;
        let wp1 = w + 1.0;
        if wp1.abs() < 1e-300 {
            break;
        }
        let denom = ew * wp1 - (w + 2.0) * f / (2.0 * wp1);
        if denom == 0.0 || !denom.is_finite() {
            break;
        }
        let step = f / denom;
        w -= step;
        if step.abs() <= 4.0 * f64::EPSILON * w.abs().max(1.0) {
            break;
        }
    }
    w
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn known_values() {
        assert!((lambert_w0(E).unwrap() - 1.0).abs() < 1e-14);
        assert!((lambert_w0(0.0).unwrap()).abs() < 1e-15);
        assert!((lambert_w0(BRANCH_POINT).unwrap() + 1.0).abs() < 1e-7);
        assert!((lambert_wm1(BRANCH_POINT).unwrap() + 1.0).abs() < 1e-7);
        // -2 e^-2 has W_{-1} = -2
        assert!((lambert_wm1(-2.0 * (-2.0f64).exp()).unwrap() + 2.0).abs() < 1e-12);
        assert!((lambert_w0(-0.5 * (-0.5f64).exp()).unwrap() + 0.5).abs() < 1e-12);
    }

    #[test]
    fn domain_errors() {
        assert!(lambert_w0(-0.5).is_err());
        assert!(lambert_wm1(0.0).is_err());
        assert!(lambert_wm1(0.1).is_err());
        assert!(lambert_w0(f64::NAN).is_err());
    }

    #[test]
    fn branches_are_ordered() {
        for i in 1..200 {
            let x = BRANCH_POINT * i as f64 / 200.0;
            let w0 = lambert_w0(x).unwrap();
            let wm1 = lambert_wm1(x).unwrap();
            assert!(w0 >= -1.0 && wm1 <= -1.0, "x={x}: {w0} {wm1}");
            assert!((w0 * w0.exp() - x).abs() < 1e-12);
            assert!((wm1 * wm1.exp() - x).abs() < 1e-12);
        }
    }

    #[test]
    fn tiny_arguments() {
        let w = lambert_wm1(-1e-300).unwrap();
        assert!((w * w.exp() + 1e-300).abs() < 1e-310);
        assert!(w < -600.0);
        for x in [1e-8, 1.0, 10.0, 1e6] {
            let w = lambert_w0(x).unwrap();
            assert!((w * w.exp() - x).abs() <= 1e-12 * x.max(1.0));
        }
    }
}
