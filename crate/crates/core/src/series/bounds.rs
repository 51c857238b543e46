use std::f64::consts::PI;

use super::{uniform_load_profile, SeriesState, SeriesValue};
use crate::error::{Error, Result};
use crate::obstacle::ObstacleSpec;
use crate::params::MaterialParams;
use crate::sum::CompensatedSum;

const ZETA3: f64 = 1.202_056_903_159_594_3;

/// The constants `A(l,σ)` and `B(l,σ)` bounding the boundary kernels at `z = l`.
pub fn coefficient_bounds(params: &MaterialParams) -> (f64, f64) {
    let (s, l) = (params.sigma, params.half_width);
    let c2 = l.cosh().powi(2);
    let a = ((4.0 + (1.0 + s).powi(2)) / (1.0 - s) + 2.0 * l * (3.0 + s)) * c2;
    let b = (3.0 + s + 4.0 * (1.0 - s) * l) * c2;
    (a, b)
}

/// The constant multiplying the envelope `g`; not the threshold bound of
/// [`analytic_bound_c`].
pub fn envelope_constant(params: &MaterialParams) -> f64 {
    let (s, l) = (params.sigma, params.half_width);
    let f = 0.5 * (3.0 + s) * (2.0 * l).sinh() - l * (1.0 - s);
    l.cosh().powi(2) / (l.exp() * f) * ((4.0 + (1.0 + s).powi(2)) / (1.0 - s) + l * (13.0 - s))
}

/// Even envelope `g(η) ≥ φ_1(y, η)`, strictly increasing on `[0, l]`.
pub fn envelope_g(eta: f64, params: &MaterialParams) -> Result<f64> {
    if !(eta.abs() <= params.half_width * (1.0 + 1e-12)) {
        return Err(Error::domain(format!("envelope needs |eta| <= l, got {eta}")));
    }
    let e = eta.abs();
    Ok(envelope_constant(params) * (e.cosh() + e.sinh()) * (1.0 + e) + 1.0)
}

/// `C(σ, l)`, an explicit upper bound for the threshold `M`.
pub fn analytic_bound_c(params: &MaterialParams) -> f64 {
    let (s, l) = (params.sigma, params.half_width);
    let num = PI
        * l.cosh().powi(2)
        * (5.0 + 2.0 * s + s * s
            + 2.0 * l * (5.0 + 2.0 * s) * (1.0 - s)
            + 8.0 * l * l * (1.0 - s).powi(2));
    let den = 6.0 * (1.0 - s) * ((3.0 + s) * (2.0 * l).sinh() - l * (1.0 + s));
    num / den + PI / 12.0
}

/// Sup-norm bound on the Green-series remainder after `m_max` terms.
///
/// Uses `0 < φ_m ≤ φ_1 ≤ g(l)` and `Σ_{m>N} m⁻³ ≤ 1/(2N²)`; the same bound
/// covers the antisymmetric responses.
pub fn tail_estimate(m_max: u32, params: &MaterialParams) -> Result<f64> {
    if m_max == 0 {
        return Err(Error::validation("m_max must be at least 1"));
    }
    let n = m_max as f64;
    Ok(envelope_g(params.half_width, params)? / (4.0 * PI * n * n))
}

/// `Σ_{odd m > n} m⁻³`.
fn odd_cube_tail(n: u32) -> f64 {
    let head: CompensatedSum = (1..=n)
        .step_by(2)
        .map(|m| {
            let mf = m as f64;
            1.0 / (mf * mf * mf)
        })
        .collect();
    (0.875 * ZETA3 - head.value()).max(0.0)
}

/// Threshold `M(σ, l)` for thin obstacles on the long edges.
///
/// Odd terms up to `m_max` are summed exactly; beyond that each term equals
/// `K/m³` up to a factor exponentially close to one, so the remainder is
/// replaced by `K·Σ_{odd m>m_max} m⁻³` and `tail_bound` bounds what that
/// replacement misses.
pub fn gap_threshold_m(params: &MaterialParams, m_max: u32) -> Result<SeriesValue> {
    params.validate()?;
    if m_max == 0 {
        return Err(Error::validation("m_max must be at least 1"));
    }
    let (s, l) = (params.sigma, params.half_width);
    let pref = 4.0 / (PI * (1.0 - s));
    let q = |a: f64| 2.0 * a * (1.0 - s) / (2.0 * a).sinh();
    let mut sum = CompensatedSum::new();
    for m in (1..=m_max).step_by(2) {
        let mf = m as f64;
        let a = mf * l;
        // sinh²(a) / ((3+σ) sinh(2a) + 2a(1−σ)) written without overflow.
        let ratio = 0.5 * a.tanh() / ((3.0 + s) + q(a));
        sum.add(ratio / (mf * mf * mf));
    }
    let asym = 1.0 / (2.0 * (3.0 + s));
    let tail = odd_cube_tail(m_max);
    sum.add(asym * tail);
    let a_next = (m_max as f64 + 1.0) * l;
    let defect = (1.0 - a_next.tanh()) + q(a_next) / (3.0 + s);
    Ok(SeriesValue {
        value: pref * sum.value(),
        tail_bound: pref * asym * tail * defect,
    })
}

/// `min_samples [min(|ψ₋|, ψ₊) − z]`, with `z` the uniform-load profile.
///
/// A positive value certifies (at sample resolution) empty contact sets for
/// every load with `‖f‖_∞ ≤ 1`.
pub fn empty_contact_margin(obstacles: &ObstacleSpec, state: &SeriesState) -> Result<f64> {
    obstacles.validate()?;
    if obstacles.points.is_empty() {
        return Err(Error::validation("obstacle specification has no samples"));
    }
    let mut margin = f64::INFINITY;
    for ((p, lo), hi) in obstacles.points.iter().zip(&obstacles.lower).zip(&obstacles.upper) {
        let z = uniform_load_profile(*p, state)?;
        margin = margin.min(lo.abs().min(*hi) - z);
    }
    Ok(margin)
}
