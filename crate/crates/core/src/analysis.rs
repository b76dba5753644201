//! Effective central charge and Poincaré-disk geometry.
//!
//! Shadow-norm exponents of boundary intervals are modelled as
//! `log_d ‖P‖² = k + c_eff ln min(k, N-k)`; `c_eff` is measured in cut units.

use std::f64::consts::PI;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::tiling::boundary_sizes;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FitResult {
    pub c_eff: f64,
    pub stderr: f64,
    pub residual_rms: f64,
    pub n_points: usize,
}

/// Regressors `x = ln min(k, N-k)` and responses `y = log_d_norm - k`, with
/// `k = 0` and `k >= N` dropped.
fn design(points: &[(usize, f64)], n: usize) -> Result<(Vec<f64>, Vec<f64>)> {
    let (xs, ys): (Vec<f64>, Vec<f64>) = points
        .iter()
        .filter(|&&(k, _)| k > 0 && k < n)
        .map(|&(k, y)| ((k.min(n - k) as f64).ln(), y - k as f64))
        .unzip();
    if xs.len() < 2 {
        return Err(Error::DegenerateDesign(format!("{} usable points", xs.len())));
    }
    if xs.iter().all(|&x| x == xs[0]) {
        return Err(Error::DegenerateDesign("all min(k, N-k) are equal".into()));
    }
    Ok((xs, ys))
}

/// Least squares through the origin of `log_d_norm - k` on
/// `ln min(k, N-k)`.
pub fn fit_ceff(points: &[(usize, f64)], n: usize) -> Result<FitResult> {
    let (xs, ys) = design(points, n)?;
    let sxx: f64 = xs.iter().map(|x| x * x).sum();
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| x * y).sum();
    let c = sxy / sxx;
    let ss: f64 = xs.iter().zip(&ys).map(|(x, y)| (y - c * x).powi(2)).sum();
    let m = xs.len() as f64;
    Ok(FitResult { c_eff: c, stderr: (ss / (m - 1.0) / sxx).sqrt(), residual_rms: (ss / m).sqrt(), n_points: xs.len() })
}

/// Diagnostic fit with a free intercept; returns the fit and the intercept.
pub fn fit_ceff_with_intercept(points: &[(usize, f64)], n: usize) -> Result<(FitResult, f64)> {
    let (xs, ys) = design(points, n)?;
    let m = xs.len() as f64;
    let (mx, my) = (xs.iter().sum::<f64>() / m, ys.iter().sum::<f64>() / m);
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let c = sxy / sxx;
    let b = my - c * mx;
    let ss: f64 = xs.iter().zip(&ys).map(|(x, y)| (y - b - c * x).powi(2)).sum();
    let dof = (m - 2.0).max(1.0);
    let fit = FitResult { c_eff: c, stderr: (ss / dof / sxx).sqrt(), residual_rms: (ss / m).sqrt(), n_points: xs.len() };
    Ok((fit, b))
}

/// Discrete estimate from the half-boundary wall: `(2l+1)/ln(N/2)` for
/// `{3,7}` and `(7l/2 + 1/2)/ln(N/2)` for `{5,4}`.
pub fn ceff_approx(l: usize, p: usize, q: usize, n: f64) -> Result<f64> {
    if l < 1 || n <= 2.0 {
        return Err(Error::InvalidParameter(format!("need l >= 1 and N > 2 (l={l}, N={n})")));
    }
    let wall = match (p, q) {
        (3, 7) => 2.0 * l as f64 + 1.0,
        (5, 4) => 3.5 * l as f64 + 0.5,
        _ => return Err(Error::UnsupportedTiling { p, q }),
    };
    Ok(wall / (n / 2.0).ln())
}

/// [`ceff_approx`] for `l = 1..=l_max` with `N` taken from the boundary
/// growth of a graph with `l + 1` layers.
pub fn ceff_approx_series(p: usize, q: usize, l_max: usize) -> Result<Vec<f64>> {
    let sizes = boundary_sizes(p, q, l_max + 1)?;
    (1..=l_max).map(|l| ceff_approx(l, p, q, sizes[l] as f64)).collect()
}

/// Disk parameters with curvature `K = -1/R²` and Ricci scalar `2K`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GeometryParams {
    pub r: f64,
    pub rho: f64,
    pub phi: f64,
}

impl GeometryParams {
    pub fn new(r: f64, rho: f64, phi: f64) -> Result<Self> {
        check_radius(rho)?;
        if !(r > 0.0) || !(phi > 0.0 && phi < 2.0 * PI) {
            return Err(Error::InvalidParameter(format!("need R > 0 and 0 < phi < 2π (R={r}, phi={phi})")));
        }
        Ok(Self { r, rho, phi })
    }

    pub fn curvature(&self) -> f64 {
        -1.0 / (self.r * self.r)
    }

    pub fn ricci_scalar(&self) -> f64 {
        2.0 * self.curvature()
    }
}

fn check_radius(rho: f64) -> Result<()> {
    if (0.0..1.0).contains(&rho) {
        Ok(())
    } else {
        Err(Error::OutsideDisk(rho))
    }
}

/// Length `2 φ R ρ / (1 - ρ²)` of the arc at radius `ρ`.
pub fn arc_length(rho: f64, phi: f64, r: f64) -> Result<f64> {
    check_radius(rho)?;
    Ok(2.0 * phi * r * rho / (1.0 - rho * rho))
}

/// Radius whose arc of angle `φ` has length `l` (positive root).
pub fn rho_from_arc(l: f64, phi: f64, r: f64) -> Result<f64> {
    if !(l >= 0.0) || !(phi > 0.0) || !(r > 0.0) {
        return Err(Error::InvalidParameter(format!("need L >= 0, phi > 0, R > 0 (L={l})")));
    }
    if l == 0.0 {
        return Ok(0.0);
    }
    let pr = phi * r;
    // rationalized form of (-φR + sqrt(L² + φ²R²)) / L
    Ok(l / (pr + (l * l + pr * pr).sqrt()))
}

pub fn poincare_geodesic(rho1: f64, phi1: f64, rho2: f64, phi2: f64, r: f64) -> Result<f64> {
    check_radius(rho1)?;
    check_radius(rho2)?;
    let num = rho1 * rho1 + rho2 * rho2 - 2.0 * rho1 * rho2 * (phi1 - phi2).cos();
    let arg = 1.0 + 2.0 * num.max(0.0) / ((1.0 - rho1 * rho1) * (1.0 - rho2 * rho2));
    Ok(r * arg.acosh())
}

/// Geodesic between the endpoints of the arc, `R arcosh(1 + 4ρ²(1-cos φ)/(1-ρ²)²)`.
pub fn chord_geodesic(rho: f64, phi: f64, r: f64) -> Result<f64> {
    check_radius(rho)?;
    let s = 1.0 - rho * rho;
    Ok(r * (1.0 + 4.0 * rho * rho * (1.0 - phi.cos()) / (s * s)).acosh())
}

/// `d_L / ln L` for the arc of angle `φ` at radius `ρ`.
pub fn ceff_continuous(rho: f64, phi: f64, r: f64) -> Result<f64> {
    let g = GeometryParams::new(r, rho, phi)?;
    let l = arc_length(g.rho, g.phi, g.r)?;
    if l <= 1.0 {
        return Err(Error::InvalidParameter(format!("arc length {l} <= 1 makes ln L non-positive")));
    }
    Ok(poincare_geodesic(rho, 0.0, rho, phi, r)? / l.ln())
}
