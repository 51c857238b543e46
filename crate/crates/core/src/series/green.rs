use std::f64::consts::PI;

use super::{phi_unchecked, AntisymDelta, SeriesState};
use crate::error::{Error, Result};
use crate::params::{MaterialParams, Point};
use crate::quadrature::series_rule;
use crate::sum::CompensatedSum;

/// `G_p(q)` truncated at `state.m_max`.
pub fn green_value(p: Point, q: Point, state: &SeriesState) -> Result<f64> {
    let params = &state.params;
    params.check_point(p, "source point")?;
    params.check_point(q, "field point")?;
    let mut s = CompensatedSum::new();
    for m in 1..=state.m_max {
        let mf = m as f64;
        let phi = phi_unchecked(q.y, p.y, m, params);
        s.add(phi / (mf * mf * mf) * (mf * p.x).sin() * (mf * q.x).sin());
    }
    Ok(s.value() / (2.0 * PI))
}

/// Response `v_{ξ,η}(q)` of the free plate to `T_{ξ,η}`.
pub fn antisym_solution(load: AntisymDelta, q: Point, state: &SeriesState) -> Result<f64> {
    let params = &state.params;
    params.check_point(Point::new(load.xi, load.eta), "load point")?;
    params.check_point(q, "field point")?;
    let mut s = CompensatedSum::new();
    for m in 1..=state.m_max {
        let mf = m as f64;
        let diff = phi_unchecked(q.y, load.eta, m, params) - phi_unchecked(q.y, -load.eta, m, params);
        s.add(diff / (mf * mf * mf) * (mf * load.xi).sin() * (mf * q.x).sin());
    }
    Ok(s.value() / (4.0 * PI))
}

/// `∫_a^b φ_m(y, η) dη`, split at the kink `η = y`.
pub(crate) fn eta_integral(y: f64, m: u32, a: f64, b: f64, params: &MaterialParams) -> f64 {
    let rule = series_rule();
    let f = |eta: f64| phi_unchecked(y, eta, m, params);
    if y > a && y < b {
        rule.integrate(a, y, f) + rule.integrate(y, b, f)
    } else {
        rule.integrate(a, b, f)
    }
}

/// Deflection `z(q) = ∫_Ω G_p(q) dp` under the unit load `f ≡ 1`.
///
/// The ξ-integral of `sin(mξ)` is `2/m` for odd `m` and zero otherwise, so
/// only odd terms contribute.
pub fn uniform_load_profile(q: Point, state: &SeriesState) -> Result<f64> {
    let params = &state.params;
    params.check_point(q, "field point")?;
    let l = params.half_width;
    let mut s = CompensatedSum::new();
    for m in (1..=state.m_max).step_by(2) {
        let mf = m as f64;
        let eta = eta_integral(q.y, m, -l, l, params);
        s.add(eta / (mf * mf * mf * mf) * (mf * q.x).sin());
    }
    Ok(s.value() / PI)
}

/// Maximum of the uniform-load profile over an `(nx+1) × (ny+1)` node grid,
/// with the attaining point.
pub fn uniform_load_profile_max(state: &SeriesState, nx: usize, ny: usize) -> Result<(f64, Point)> {
    if nx == 0 || ny == 0 {
        return Err(Error::validation("grid needs at least one cell per axis"));
    }
    let l = state.params.half_width;
    let mut best = (f64::NEG_INFINITY, Point::new(0.0, 0.0));
    for i in 0..=nx {
        for j in 0..=ny {
            let q = Point::new(PI * i as f64 / nx as f64, l * (2.0 * j as f64 - ny as f64) / ny as f64);
            let z = uniform_load_profile(q, state)?;
            if z > best.0 {
                best = (z, q);
            }
        }
    }
    Ok(best)
}

/// Exact response to the load `sin(m x)`: `sin(mx) / (4m³) · ∫ φ_m(y, η) dη`.
pub fn sine_mode_response(m: u32, q: Point, params: &MaterialParams) -> Result<f64> {
    params.check_point(q, "field point")?;
    if m == 0 {
        return Err(Error::domain("mode index must be at least 1"));
    }
    let l = params.half_width;
    let mf = m as f64;
    Ok((mf * q.x).sin() / (4.0 * mf * mf * mf) * eta_integral(q.y, m, -l, l, params))
}
