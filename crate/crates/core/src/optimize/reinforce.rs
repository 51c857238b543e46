use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use super::forces::ForceClass;
use super::scan::{worst_force_amplitude, Variant};
use crate::error::{Error, Result};
use crate::fem::{ElementMask, Mesh, ReinforcementMask};
use crate::params::MaterialParams;
use crate::vi::{BoxConstraints, SolverSettings};

/// Finite families of reinforcement sets `D`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum ReinforcementFamily {
    /// `N` vertical strips of half-width `μ` and `M` horizontal strips of
    /// half-width `ε`, centers on a lattice. `μ` (or `ε` when `N = 0`) is fixed
    /// by the area constraint.
    CrossType {
        alpha: f64,
        beta: f64,
        x_strips: Vec<usize>,
        y_strips: Vec<usize>,
        epsilon: f64,
        lattice: usize,
    },
    /// `count` equal rectangles of half-height `half_height`, half-width fixed
    /// by the area constraint, inradius at least `inradius`.
    Tiles {
        alpha: f64,
        beta: f64,
        count: usize,
        half_height: f64,
        inradius: f64,
        lattice: usize,
    },
    /// Unions of rectangles `[x0, x1, y0, y1]`, one list per candidate.
    Explicit {
        alpha: f64,
        beta: f64,
        candidates: Vec<Vec<[f64; 4]>>,
    },
}

/// How a candidate was generated.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum CandidateParams {
    Cross {
        mu: f64,
        epsilon: f64,
        x_centers: Vec<f64>,
        y_centers: Vec<f64>,
    },
    Rects {
        rects: Vec<[f64; 4]>,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CandidateReport {
    pub params: CandidateParams,
    pub area: f64,
    pub target_area: f64,
    pub area_tolerance: f64,
    pub feasible: bool,
    /// `None` when the rasterized set misses the area constraint.
    pub value: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReinforcementOutcome {
    pub value: f64,
    pub index: usize,
    pub best: ReinforcementMask,
    pub candidates: Vec<CandidateReport>,
}

struct Candidate {
    params: CandidateParams,
    region: ElementMask,
    tolerance: f64,
}

/// Strip half-widths `(μ, ε)` of a cross with `n` vertical and `m` horizontal
/// strips whose area `4lnμ + 2πmε − 4nmμε` equals `|Ω|(1−α)/(β−α)`.
/// `epsilon` is used as given when both kinds are present.
pub fn cross_mu_for_area(
    params: &MaterialParams,
    alpha: f64,
    beta: f64,
    n: usize,
    m: usize,
    epsilon: f64,
) -> Result<(f64, f64)> {
    let l = params.half_width;
    if !(alpha > 0.0 && alpha < 1.0 && beta > 1.0 && beta.is_finite()) {
        return Err(Error::validation(format!(
            "reinforcement requires alpha < 1 < beta with alpha > 0, got alpha={alpha}, beta={beta}"
        )));
    }
    let target = params.area() * (1.0 - alpha) / (beta - alpha);
    let (nf, mf) = (n as f64, m as f64);
    let (mu, eps) = match (n, m) {
        (0, 0) => return Err(Error::validation("a cross needs at least one strip")),
        (_, 0) => (target / (4.0 * l * nf), 0.0),
        (0, _) => (0.0, target / (2.0 * PI * mf)),
        _ => {
            if !(epsilon > 0.0 && epsilon < l / mf) {
                return Err(Error::validation(format!("epsilon must lie in (0, l/M), got {epsilon}")));
            }
            let rest = target - 2.0 * PI * mf * epsilon;
            (rest / (4.0 * nf * (l - mf * epsilon)), epsilon)
        }
    };
    let mu_ok = n == 0 || (mu > 0.0 && mu < PI / (2.0 * nf));
    let eps_ok = m == 0 || (eps > 0.0 && eps < l / mf);
    if !(mu_ok && eps_ok) {
        return Err(Error::validation(format!(
            "no cross with N={n}, M={m} meets the area constraint |D| = {target:.6e} (mu={mu:.4e}, epsilon={eps:.4e})"
        )));
    }
    Ok((mu, eps))
}

fn combinations(points: &[f64], k: usize, min_gap: f64) -> Vec<Vec<f64>> {
    match k {
        0 => vec![Vec::new()],
        1 => points.iter().map(|&p| vec![p]).collect(),
        _ => {
            let mut out = Vec::new();
            for (i, &a) in points.iter().enumerate() {
                for rest in combinations(&points[i + 1..], k - 1, min_gap) {
                    if rest[0] - a > min_gap {
                        let mut v = vec![a];
                        v.extend(rest);
                        out.push(v);
                    }
                }
            }
            out
        }
    }
}

fn lattice(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    if n <= 1 || hi <= lo {
        return vec![0.5 * (lo + hi)];
    }
    (0..n).map(|k| lo + (hi - lo) * k as f64 / (n - 1) as f64).collect()
}

impl ReinforcementFamily {
    pub fn densities(&self) -> (f64, f64) {
        match self {
            ReinforcementFamily::CrossType { alpha, beta, .. }
            | ReinforcementFamily::Tiles { alpha, beta, .. }
            | ReinforcementFamily::Explicit { alpha, beta, .. } => (*alpha, *beta),
        }
    }

    fn candidates(&self, mesh: &Mesh, params: &MaterialParams) -> Result<Vec<Candidate>> {
        let l = params.half_width;
        let cell = mesh.element_area();
        let mut out = Vec::new();
        match self {
            ReinforcementFamily::CrossType {
                alpha,
                beta,
                x_strips,
                y_strips,
                epsilon,
                lattice: nl,
            } => {
                for &n in x_strips {
                    for &m in y_strips {
                        if n > 2 || m > 2 {
                            return Err(Error::validation("cross-type search is limited to N, M <= 2"));
                        }
                        let Ok((mu, eps)) = cross_mu_for_area(params, *alpha, *beta, n, m, *epsilon) else {
                            continue;
                        };
                        let xs = lattice(mu, PI - mu, *nl);
                        let ys = lattice(-l + eps, l - eps, *nl);
                        for xc in combinations(&xs, n, 2.0 * mu) {
                            for yc in combinations(&ys, m, 2.0 * eps) {
                                let mut rects: Vec<[f64; 4]> = xc.iter().map(|x| [x - mu, x + mu, -l, l]).collect();
                                rects.extend(yc.iter().map(|y| [0.0, PI, y - eps, y + eps]));
                                out.push(Candidate {
                                    params: CandidateParams::Cross {
                                        mu,
                                        epsilon: eps,
                                        x_centers: xc.clone(),
                                        y_centers: yc,
                                    },
                                    region: ElementMask::from_rects(mesh, &rects),
                                    tolerance: (n * mesh.ny + m * mesh.nx) as f64 * cell,
                                });
                            }
                        }
                    }
                }
            }
            ReinforcementFamily::Tiles {
                alpha,
                beta,
                count,
                half_height,
                inradius,
                lattice: nl,
            } => {
                if *count == 0 || *count > 2 {
                    return Err(Error::validation("tile search is limited to 1 or 2 tiles"));
                }
                let b = *half_height;
                let target = params.area() * (1.0 - alpha) / (beta - alpha);
                let a = target / (4.0 * b * *count as f64);
                if !(b > 0.0 && b <= l && a <= 0.5 * PI && a.min(b) >= *inradius && *inradius > 0.0) {
                    return Err(Error::validation(format!(
                        "tiles of half-height {b} and half-width {a:.4e} violate the inradius or size limits"
                    )));
                }
                let xs = lattice(a, PI - a, *nl);
                let mut ys = lattice(-l + b, l - b, *nl);
                ys.dedup();
                let sites: Vec<(f64, f64)> = xs.iter().flat_map(|&x| ys.iter().map(move |&y| (x, y))).collect();
                let rect = |(x, y): (f64, f64)| [x - a, x + a, y - b, y + b];
                let mut push = |rects: Vec<[f64; 4]>| {
                    out.push(Candidate {
                        region: ElementMask::from_rects(mesh, &rects),
                        params: CandidateParams::Rects { rects },
                        tolerance: *count as f64 * (mesh.nx + mesh.ny) as f64 * cell,
                    })
                };
                for (i, &s) in sites.iter().enumerate() {
                    if *count == 1 {
                        push(vec![rect(s)]);
                        continue;
                    }
                    for &t in &sites[i + 1..] {
                        if (s.0 - t.0).abs() >= 2.0 * a || (s.1 - t.1).abs() >= 2.0 * b {
                            push(vec![rect(s), rect(t)]);
                        }
                    }
                }
            }
            ReinforcementFamily::Explicit { candidates, .. } => {
                for rects in candidates {
                    out.push(Candidate {
                        params: CandidateParams::Rects { rects: rects.clone() },
                        region: ElementMask::from_rects(mesh, rects),
                        tolerance: rects.len().max(1) as f64 * ReinforcementMask::default_area_tolerance(mesh),
                    });
                }
            }
        }
        if out.is_empty() {
            return Err(Error::validation("reinforcement family generated no candidates"));
        }
        Ok(out)
    }
}

/// Area screening of every candidate, without solving.
pub fn screen_reinforcement(
    mesh: &Mesh,
    params: &MaterialParams,
    family: &ReinforcementFamily,
) -> Result<Vec<CandidateReport>> {
    let (alpha, beta) = family.densities();
    family
        .candidates(mesh, params)?
        .into_iter()
        .map(|c| {
            let mask = ReinforcementMask::new(c.region, alpha, beta)?;
            Ok(CandidateReport {
                area: mask.region.area(mesh),
                target_area: mask.target_area(params).unwrap_or(f64::NAN),
                area_tolerance: c.tolerance,
                feasible: mask.design_violations(mesh, params, c.tolerance).is_empty(),
                params: c.params,
                value: None,
            })
        })
        .collect()
}

/// Minimizes `𝒜^∞_D` over the family; infeasible candidates are reported
/// with `value = None` and skipped.
pub fn best_reinforcement(
    mesh: &Mesh,
    params: &MaterialParams,
    family: &ReinforcementFamily,
    forces: &ForceClass,
    obstacles: &BoxConstraints,
    variant: Variant,
    settings: &SolverSettings,
) -> Result<ReinforcementOutcome> {
    let (alpha, beta) = family.densities();
    let candidates = family.candidates(mesh, params)?;
    let mut reports = Vec::with_capacity(candidates.len());
    let mut best: Option<(usize, f64, ReinforcementMask)> = None;
    for (k, c) in candidates.into_iter().enumerate() {
        let mask = ReinforcementMask::new(c.region, alpha, beta)?;
        let target = mask.target_area(params).unwrap_or(f64::NAN);
        let area = mask.region.area(mesh);
        let feasible = mask.design_violations(mesh, params, c.tolerance).is_empty();
        let value = if feasible {
            let v = worst_force_amplitude(mesh, params, &mask, forces, obstacles, variant, settings)?.value;
            if best.as_ref().map_or(true, |(_, b, _)| v < *b) {
                best = Some((k, v, mask));
            }
            Some(v)
        } else {
            None
        };
        reports.push(CandidateReport {
            params: c.params,
            area,
            target_area: target,
            area_tolerance: c.tolerance,
            feasible,
            value,
        });
    }
    let (index, value, best) = best.ok_or_else(|| {
        Error::validation("no candidate satisfies the area constraint |D| = |Omega|(1-alpha)/(beta-alpha)")
    })?;
    Ok(ReinforcementOutcome {
        value,
        index,
        best,
        candidates: reports,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cross_area_is_exact() {
        let p = MaterialParams::new(0.2, 0.1).unwrap();
        let target = p.area() * 0.5 / 1.5;
        for (n, m) in [(1, 0), (0, 2), (2, 1), (1, 2)] {
            let (mu, eps) = cross_mu_for_area(&p, 0.5, 2.0, n, m, 0.01).unwrap();
            let (nf, mf) = (n as f64, m as f64);
            let area = 4.0 * 0.1 * nf * mu + 2.0 * PI * mf * eps - 4.0 * nf * mf * mu * eps;
            assert!((area - target).abs() < 1e-14, "{n} {m}");
        }
        assert!(cross_mu_for_area(&p, 1.0, 2.0, 1, 0, 0.01).is_err());
    }

    #[test]
    fn lattice_combinations_respect_separation() {
        let xs = lattice(0.0, 1.0, 5);
        let c = combinations(&xs, 2, 0.3);
        assert!(c.iter().all(|v| v[1] - v[0] > 0.3));
        assert_eq!(c.len(), 6);
    }

    #[test]
    fn cross_candidates_pass_area_check() {
        let p = MaterialParams::new(0.2, 0.1).unwrap();
        let mesh = Mesh::new(32, 8, &p).unwrap();
        let fam = ReinforcementFamily::CrossType {
            alpha: 0.5,
            beta: 2.0,
            x_strips: vec![1, 2],
            y_strips: vec![0, 1],
            epsilon: 0.0125,
            lattice: 5,
        };
        let cands = fam.candidates(&mesh, &p).unwrap();
        assert!(!cands.is_empty());
        let feasible = cands
            .into_iter()
            .filter(|c| {
                let m = ReinforcementMask::new(c.region.clone(), 0.5, 2.0).unwrap();
                m.design_violations(&mesh, &p, c.tolerance).is_empty()
            })
            .count();
        assert!(feasible > 0);
    }
}
