//! The auxiliary functions `F`, `F̄`, the four boundary kernels and the
//! Fourier coefficients `φ_m` of the partially hinged Green function.
//!
//! The public kernels follow the closed forms literally and overflow once
//! `z` exceeds roughly 350. For small `ml`, `φ_m` is evaluated through an
//! exponentially rescaled copy of the same formulas. For larger `ml` the
//! boundary part is expanded into eight exponentials `e^{±m(y±η)−kml}` with
//! polynomial coefficients; the growing pieces cancel symbolically, which keeps
//! the relative error near machine precision even where `φ_m` is
//! exponentially small.

use crate::error::{Error, Result};
use crate::params::MaterialParams;

/// `F(z)` and `F̄(z)`.
pub fn aux_pair(z: f64, params: &MaterialParams) -> Result<(f64, f64)> {
    check_z(z)?;
    let s = params.sigma;
    let lead = 0.5 * (3.0 + s) * (2.0 * z).sinh();
    let corr = z * (1.0 - s);
    Ok((lead - corr, lead + corr))
}

/// Values of `ζ̄(r,z)`, `θ̄(r,z)`, `ψ̄(r,z)`, `ω̄(r,z)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundaryKernels {
    pub zeta: f64,
    pub theta: f64,
    pub psi: f64,
    pub omega: f64,
}

pub fn boundary_kernels(r: f64, z: f64, params: &MaterialParams) -> Result<BoundaryKernels> {
    check_z(z)?;
    let h = Hyper {
        cr: r.cosh(),
        sr: r.sinh(),
        cz: z.cosh(),
        sz: z.sinh(),
    };
    Ok(h.kernels(r, z, params.sigma))
}

fn check_z(z: f64) -> Result<()> {
    if z > 0.0 && z.is_finite() {
        Ok(())
    } else {
        Err(Error::domain(format!("kernel argument z must be positive, got {z}")))
    }
}

/// Hyperbolic factors of `r` and `z`, possibly rescaled by a common factor.
struct Hyper {
    cr: f64,
    sr: f64,
    cz: f64,
    sz: f64,
}

impl Hyper {
    fn kernels(&self, r: f64, z: f64, s: f64) -> BoundaryKernels {
        let Hyper { cr, sr, cz, sz } = *self;
        let a = 4.0 / (1.0 - s) - z * (1.0 + s);
        let b = (1.0 + s) * (1.0 + s) / (1.0 - s) + 2.0 * z;
        let c = 2.0 + (1.0 - s) * z;
        let d = -(1.0 + s) + z * (1.0 - s);
        BoundaryKernels {
            zeta: a * cr * cz + b * cr * sz - 2.0 * r * sr * cz + r * (1.0 + s) * sr * sz,
            theta: r * (1.0 + s) * cr * cz - 2.0 * r * cr * sz + b * sr * cz + a * sr * sz,
            psi: c * cr * cz + d * cr * sz - r * (1.0 - s) * sr * cz - r * (1.0 - s) * sr * sz,
            omega: -r * (1.0 - s) * cr * cz - r * (1.0 - s) * cr * sz + d * sr * cz + c * sr * sz,
        }
    }
}

/// `cosh(t)·e^{-a}` and `sinh(t)·e^{-a}`; finite whenever `|t| ≤ a`.
#[inline]
fn scaled_hyperbolic(t: f64, a: f64) -> (f64, f64) {
    let p = (t - a).exp();
    let q = (-t - a).exp();
    (0.5 * (p + q), 0.5 * (p - q))
}

/// `φ_m(y, η)`; requires `|y|, |η| ≤ l` and `m ≥ 1`.
pub fn phi_m(y: f64, eta: f64, m: u32, params: &MaterialParams) -> Result<f64> {
    let l = params.half_width;
    let slack = l * (1.0 + 1e-12);
    if m == 0 {
        return Err(Error::domain("Fourier index m must be at least 1"));
    }
    if !(y.abs() <= slack && eta.abs() <= slack) {
        return Err(Error::domain(format!(
            "phi_m needs |y|, |eta| <= l = {l}; got y = {y}, eta = {eta}"
        )));
    }
    Ok(phi_unchecked(y, eta, m, params))
}

pub(crate) fn phi_unchecked(y: f64, eta: f64, m: u32, params: &MaterialParams) -> f64 {
    if m as f64 * params.half_width >= EXPANDED_FROM {
        phi_expanded(y, eta, m, params)
    } else {
        phi_rescaled(y, eta, m, params)
    }
}

/// `ml` from which the exponential expansion is used.
const EXPANDED_FROM: f64 = 0.5;

fn phi_rescaled(y: f64, eta: f64, m: u32, params: &MaterialParams) -> f64 {
    let s = params.sigma;
    let mf = m as f64;
    let a = mf * params.half_width;
    let r = mf * y;
    let e = mf * eta;

    let (cr, sr) = scaled_hyperbolic(r, a);
    let (cz, sz) = scaled_hyperbolic(a, a);
    let k = Hyper { cr, sr, cz, sz }.kernels(r, a, s);

    // F(a)·e^{-2a} and F̄(a)·e^{-2a}.
    let lead = 0.25 * (3.0 + s) * -(-4.0 * a).exp_m1();
    let corr = a * (1.0 - s) * (-2.0 * a).exp();
    let f = lead - corr;
    let fb = lead + corr;

    let (ce, se) = scaled_hyperbolic(e, a);
    let even = k.zeta / f + a * k.psi / f - e * k.omega / fb;
    let odd = k.theta / fb + a * k.omega / fb - e * k.psi / f;
    let d = mf * (y - eta).abs();
    ce * even + se * odd + (1.0 + d) * (-d).exp()
}

/// The boundary part as `Σ c_k e^{-x_k} / D` with every `x_k ≥ 0`, where
/// `D = F·F̄·e^{-4ml}`. With `A± = m(l ∓ y)`, `B± = m(l ∓ η)` the two leading
/// coefficients are non-negative polynomials in these distances.
fn phi_expanded(y: f64, eta: f64, m: u32, params: &MaterialParams) -> f64 {
    let s = params.sigma;
    let u = 1.0 - s;
    let w = u * (3.0 + s);
    let k0 = 32.0 / u - 24.0 + 8.0 * u - u * u;
    let v = (4.0 - u) * (4.0 - u);
    let mf = m as f64;
    let l = params.half_width;
    let a = mf * l;
    let p = mf * (y + eta);
    let q = mf * (y - eta);
    let (ay_hi, ay_lo) = (mf * (l - y), mf * (l + y));
    let (be_hi, be_lo) = (mf * (l - eta), mf * (l + eta));

    // each closure is symmetric in its arguments and mirror pairs are added
    // first, so the parities of φ_m hold bit for bit
    let same = |x: f64, z: f64| {
        let t = x + z;
        (2.0 * w * (x * z) + w * t + k0) * (-t).exp()
    };
    let cross = |x: f64, z: f64| {
        let t = x + z;
        (2.0 * u * u * a * ((1.0 + 2.0 * x) * (1.0 + 2.0 * z)) + v * (1.0 + t)) * (-t - 2.0 * a).exp()
    };
    let same_far = |p: f64| {
        let c = -2.0 * w * a * a + 2.0 * w * a * (1.0 - p) - 0.5 * w * p * p + w * p + 0.5 * w * q * q - k0;
        c * (p - 6.0 * a).exp()
    };
    let cross_far = |q: f64| v * (q - 1.0) * (q - 8.0 * a).exp();

    let num = (same(ay_hi, be_hi) + same(ay_lo, be_lo))
        + (cross(ay_hi, be_lo) + cross(ay_lo, be_hi))
        + (same_far(p) + same_far(-p))
        + (cross_far(q) + cross_far(-q));
    let g = 0.25 * (3.0 + s) * -(-4.0 * a).exp_m1();
    let den = g * g - a * a * u * u * (-4.0 * a).exp();
    let d = q.abs();
    num / (16.0 * den) + (1.0 + d) * (-d).exp()
}
