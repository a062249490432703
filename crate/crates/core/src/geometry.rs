//! Conformal-map geometry engine.
//!
//! Any exterior two-sphere or sphere-plate configuration in four euclidean
//! dimensions is conformally equivalent to a pair of concentric spheres; the
//! exact Casimir energy depends only on their radii ratio `rho = r_minus /
//! r_plus`. This module carries the configuration descriptors, the reduction
//! to the concentric pair and the point map itself.

use serde::Serialize;

use crate::error::{Error, Result};

/// A point of E^4.
pub type Point4 = [f64; 4];

fn ensure_positive(name: &str, v: f64) -> Result<()> {
    if v.is_finite() && v > 0.0 {
        Ok(())
    } else {
        Err(Error::invalid(format!("{name} must be finite and > 0, got {v}")))
    }
}

/// Two three-spheres of radii `r1`, `r2` with minimum surface gap `gap`,
/// placed one outside the other.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SphereSphereGeometry {
    r1: f64,
    r2: f64,
    gap: f64,
}

impl SphereSphereGeometry {
    pub fn new(r1: f64, r2: f64, gap: f64) -> Result<Self> {
        ensure_positive("r1", r1)?;
        ensure_positive("r2", r2)?;
        ensure_positive("gap", gap)?;
        Ok(Self { r1, r2, gap })
    }

    pub fn r1(&self) -> f64 {
        self.r1
    }

    pub fn r2(&self) -> f64 {
        self.r2
    }

    pub fn gap(&self) -> f64 {
        self.gap
    }

    /// Center-to-center distance s = gap + r1 + r2.
    pub fn center_distance(&self) -> f64 {
        self.gap + self.r1 + self.r2
    }
}

/// A three-sphere of radius `radius` at gap `gap` from a three-plane.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SpherePlateGeometry {
    radius: f64,
    gap: f64,
    /// The dimensionless ratio x = gap / radius.
    x: f64,
}

impl SpherePlateGeometry {
    pub fn new(radius: f64, gap: f64) -> Result<Self> {
        ensure_positive("radius", radius)?;
        ensure_positive("gap", gap)?;
        Ok(Self {
            radius,
            gap,
            x: gap / radius,
        })
    }

    /// Unit-radius configuration with the given gap ratio.
    pub fn from_ratio(x: f64) -> Result<Self> {
        Self::new(1.0, x)
    }

    pub fn radius(&self) -> f64 {
        self.radius
    }

    pub fn gap(&self) -> f64 {
        self.gap
    }

    pub fn x(&self) -> f64 {
        self.x
    }

    pub fn mu(&self) -> f64 {
        // x > 0 is guaranteed by construction.
        mu_of_sphere_plate(self.x).expect("x > 0 by construction")
    }
}

/// The conformally equivalent concentric pair, described by the radii ratio
/// `rho` in (0, 1) and `mu = -ln rho > 0`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ConcentricPair {
    rho: f64,
    mu: f64,
}

impl ConcentricPair {
    pub fn from_rho(rho: f64) -> Result<Self> {
        if !(rho.is_finite() && rho > 0.0 && rho < 1.0) {
            return Err(Error::invalid(format!("rho must lie in (0, 1), got {rho}")));
        }
        Ok(Self { rho, mu: -rho.ln() })
    }

    pub fn from_mu(mu: f64) -> Result<Self> {
        if !(mu.is_finite() && mu > 0.0) {
            return Err(Error::invalid(format!("mu must be finite and > 0, got {mu}")));
        }
        let rho = (-mu).exp();
        if rho >= 1.0 {
            // mu below ~1e-16 rounds rho to 1; the separation is too small to
            // resolve in double precision.
            return Err(Error::invalid(format!(
                "mu = {mu} is too small: rho = exp(-mu) rounds to 1"
            )));
        }
        Ok(Self { rho, mu })
    }

    /// Reduce a two-sphere configuration to its concentric pair.
    pub fn from_geometry(geom: &SphereSphereGeometry) -> Result<Self> {
        concentric_of_kappa(kappa_of_geometry(geom))
    }

    /// Reduce a sphere-plate configuration to its concentric pair.
    pub fn from_sphere_plate(geom: &SpherePlateGeometry) -> Result<Self> {
        Self::from_mu(geom.mu())
    }

    pub fn rho(&self) -> f64 {
        self.rho
    }

    pub fn mu(&self) -> f64 {
        self.mu
    }

    /// The gap ratio x = d/R of the sphere-plate configuration with the same
    /// concentric reduction: x = cosh(mu) - 1.
    pub fn equivalent_sphere_plate_ratio(&self) -> f64 {
        // cosh(mu) - 1 = 2 sinh^2(mu/2), stable for small mu.
        let s = (0.5 * self.mu).sinh();
        2.0 * s * s
    }
}

/// Parameters of the special conformal map: the scale R, the direction of the
/// fixed vector **R**, and the concentric radii it acts on.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ConformalMapParams {
    scale: f64,
    axis: Point4,
    r_minus: f64,
    r_plus: f64,
}

impl ConformalMapParams {
    /// Map with **R** along the first coordinate axis.
    pub fn new(scale: f64, r_minus: f64, r_plus: f64) -> Result<Self> {
        Self::with_axis(scale, [1.0, 0.0, 0.0, 0.0], r_minus, r_plus)
    }

    pub fn with_axis(scale: f64, axis: Point4, r_minus: f64, r_plus: f64) -> Result<Self> {
        ensure_positive("scale", scale)?;
        ensure_positive("r_minus", r_minus)?;
        ensure_positive("r_plus", r_plus)?;
        if r_minus >= r_plus {
            return Err(Error::invalid(format!(
                "r_minus must be < r_plus, got {r_minus} >= {r_plus}"
            )));
        }
        if scale <= r_minus || scale >= r_plus {
            return Err(Error::InteriorConfiguration {
                scale,
                r_minus,
                r_plus,
            });
        }
        let norm = dot(&axis, &axis).sqrt();
        if !norm.is_finite() || (norm - 1.0).abs() > 1e-12 {
            return Err(Error::invalid(format!(
                "axis must be a unit four-vector, got |axis| = {norm}"
            )));
        }
        Ok(Self {
            scale,
            axis,
            r_minus,
            r_plus,
        })
    }

    pub fn scale(&self) -> f64 {
        self.scale
    }

    pub fn axis(&self) -> Point4 {
        self.axis
    }

    pub fn r_minus(&self) -> f64 {
        self.r_minus
    }

    pub fn r_plus(&self) -> f64 {
        self.r_plus
    }

    /// The fixed vector **R** = scale * axis.
    pub fn fixed_vector(&self) -> Point4 {
        scale(&self.axis, self.scale)
    }
}

fn dot(a: &Point4, b: &Point4) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2] + a[3] * b[3]
}

fn scale(a: &Point4, s: f64) -> Point4 {
    [a[0] * s, a[1] * s, a[2] * s, a[3] * s]
}

fn add(a: &Point4, b: &Point4) -> Point4 {
    [a[0] + b[0], a[1] + b[1], a[2] + b[2], a[3] + b[3]]
}

fn sub(a: &Point4, b: &Point4) -> Point4 {
    [a[0] - b[0], a[1] - b[1], a[2] - b[2], a[3] - b[3]]
}

/// kappa = (s^2 - r1^2 - r2^2) / (2 r1 r2) with s the center distance.
///
/// Always > 1 for an exterior configuration with a positive gap.
pub fn kappa_of_geometry(geom: &SphereSphereGeometry) -> f64 {
    let s = geom.center_distance();
    // s^2 - r1^2 - r2^2 = 2 r1 r2 + (gap^2 + 2 gap (r1 + r2)): group the
    // gap terms so kappa - 1 keeps full precision for tiny gaps.
    let g = geom.gap;
    let excess = g * g + 2.0 * g * (geom.r1 + geom.r2);
    debug_assert!(s * s - geom.r1 * geom.r1 - geom.r2 * geom.r2 > 0.0);
    1.0 + excess / (2.0 * geom.r1 * geom.r2)
}

/// Solve kappa = (rho + 1/rho)/2 for the root rho in (0, 1).
///
/// Written as 1/(kappa + sqrt(kappa^2 - 1)) to avoid cancellation at large
/// kappa.
pub fn concentric_of_kappa(kappa: f64) -> Result<ConcentricPair> {
    if !kappa.is_finite() || kappa <= 1.0 {
        return Err(Error::invalid(format!(
            "kappa must be > 1 (non-touching exterior spheres), got {kappa}"
        )));
    }
    let root = (kappa * kappa - 1.0).sqrt();
    let rho = 1.0 / (kappa + root);
    if rho >= 1.0 {
        // kappa - 1 below ~1e-16: spheres effectively touching.
        return Err(Error::invalid(format!(
            "kappa = {kappa} is too close to contact: rho rounds to 1"
        )));
    }
    ConcentricPair::from_rho(rho)
}

/// mu(x) = ln(1 + x + sqrt(x (2 + x))) = arccosh(1 + x) for the sphere-plate
/// configuration with gap ratio x = d/R. Strictly increasing in x.
pub fn mu_of_sphere_plate(x: f64) -> Result<f64> {
    if !(x.is_finite() && x > 0.0) {
        return Err(Error::invalid(format!("x = d/R must be finite and > 0, got {x}")));
    }
    if x >= 1.0 {
        // Factored so x(2 + x) cannot overflow.
        Ok(x.ln() + (1.0 / x + 1.0 + (1.0 + 2.0 / x).sqrt()).ln())
    } else {
        Ok((x + (x * (2.0 + x)).sqrt()).ln_1p())
    }
}

/// Image of the concentric pair under the conformal map: the exterior
/// two-sphere configuration (R1, R2, d).
///
/// R1 is the image of the outer sphere (radius r_plus), R2 the image of the
/// inner one. The plate limit is scale -> r_plus, where R1 diverges.
pub fn map_concentric_to_eccentric(params: &ConformalMapParams) -> SphereSphereGeometry {
    let r = params.scale;
    let (rm, rp) = (params.r_minus, params.r_plus);
    let r1 = 4.0 * r * r * rp / (rp * rp - r * r);
    let r2 = 4.0 * r * r * rm / (r * r - rm * rm);
    let d = 4.0 * r * r * (rp - rm) / ((r + rp) * (r + rm));
    SphereSphereGeometry { r1, r2, gap: d }
}

/// The special conformal transformation
/// r' / |r'|^2 = (r + **R**) / |r + **R**|^2 - **R** / (2 R^2).
///
/// The inversion pole r = -**R** maps to the origin (the continuous limit of
/// the formula); the point whose image lies at infinity (w = 0, reached at
/// r = +**R**) is rejected with a singular-point error.
pub fn conformal_map_point(r: Point4, params: &ConformalMapParams) -> Result<Point4> {
    if r.iter().any(|c| !c.is_finite()) {
        return Err(Error::invalid("point coordinates must be finite".to_string()));
    }
    let big_r = params.fixed_vector();
    let shifted = add(&r, &big_r);
    let shifted_norm2 = dot(&shifted, &shifted);
    if shifted_norm2 == 0.0 {
        // Inversion center: |w| -> infinity, so r' = w/|w|^2 -> 0.
        return Ok([0.0; 4]);
    }
    let w = sub(
        &scale(&shifted, 1.0 / shifted_norm2),
        &scale(&big_r, 1.0 / (2.0 * params.scale * params.scale)),
    );
    let w_norm2 = dot(&w, &w);
    if w_norm2 == 0.0 {
        return Err(Error::SingularPoint(format!(
            "point {r:?} maps to infinity under this conformal map"
        )));
    }
    Ok(scale(&w, 1.0 / w_norm2))
}
