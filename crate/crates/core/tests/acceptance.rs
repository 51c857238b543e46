//! Acceptance suite. Runs every criterion at its stated tolerance and prints
//! one PASS/FAIL line per criterion; exits non-zero if any fails.

mod common;

use std::f64::consts::PI;
use std::sync::Mutex;
use std::time::Instant;

use common::brute_force;
use hinged_plate::fem::{
    assemble_bilinear, assemble_load, symmetry_decompose, Density, ElementMask, LoadSpec, Mesh,
    ReinforcementMask,
};
use hinged_plate::optimize::{
    placement_bound_report, threshold_scan, worst_force_amplitude, worst_gap_force, Force, ForceClass, ScanOutcome,
    Variant,
};
use hinged_plate::series::{
    analytic_bound_c, gap_threshold_m, green_value, phi_m, sine_mode_response, uniform_load_profile_max,
    ScanWindow, SeriesState,
};
use hinged_plate::vi::{solve_linear, solve_obstacle, BoxConstraints, SolverSettings, VISolution};
use hinged_plate::{MaterialParams, Point};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;

/// Largest KKT residual of any solve in the suite.
static KKT: Mutex<f64> = Mutex::new(0.0);

fn note_kkt(v: f64) {
    let mut k = KKT.lock().unwrap();
    *k = k.max(v);
}

fn solved(s: VISolution) -> VISolution {
    note_kkt(s.kkt_residual);
    s
}

fn scanned(s: ScanOutcome) -> ScanOutcome {
    note_kkt(s.max_kkt);
    s
}

fn check(ok: bool, detail: String) -> Outcome {
    if ok {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn desk() -> MaterialParams {
    MaterialParams::new(0.2, 0.1).unwrap()
}

fn series_fem_consistency() -> Outcome {
    let p = desk();
    let mut errs = Vec::new();
    for (nx, ny) in [(16, 4), (32, 8), (64, 16)] {
        let mesh = Mesh::new(nx, ny, &p).unwrap();
        let op = assemble_bilinear(&mesh, &p, None).unwrap();
        let load = LoadSpec::from_density(Density::from_fn(&mesh, |q| q.x.sin()));
        let u = solve_linear(&op, &assemble_load(&mesh, &load, None).unwrap()).unwrap();
        let (mut err, mut norm) = (0.0f64, 0.0f64);
        for k in 0..mesh.n_nodes() {
            let exact = sine_mode_response(1, mesh.node_point(k), &p).unwrap();
            err = err.max((u.node_value(k) - exact).abs());
            norm = norm.max(exact.abs());
        }
        errs.push((err, norm));
    }
    let monotone = errs[1].0 < errs[0].0 && errs[2].0 < errs[1].0;
    let rel = errs[2].0 / errs[2].1;
    check(
        monotone && rel <= 1e-3,
        format!(
            "errors {:.2e} > {:.2e} > {:.2e}, finest relative {rel:.2e} <= 1e-3",
            errs[0].0, errs[1].0, errs[2].0
        ),
    )
}

fn phi_monotonicity() -> Outcome {
    let mut checked = 0;
    for s in [0.2, 0.3] {
        for l in [PI / 150.0, 0.1] {
            let p = MaterialParams::new(s, l).unwrap();
            for a in 0..21 {
                for b in 0..21 {
                    let y = l * (a as f64 / 10.0 - 1.0);
                    let eta = l * (b as f64 / 10.0 - 1.0);
                    let mut prev = phi_m(y, eta, 1, &p).unwrap();
                    for m in 1..=50 {
                        let next = phi_m(y, eta, m + 1, &p).unwrap();
                        if !(prev > 0.0 && next < prev) {
                            return Err(format!("fails at sigma={s}, l={l}, y={y}, eta={eta}, m={m}"));
                        }
                        prev = next;
                        checked += 1;
                    }
                }
            }
        }
    }
    Ok(format!("{checked} inequalities hold"))
}

fn green_positivity() -> Outcome {
    let p = desk();
    let st = SeriesState::with_default_order(p).unwrap();
    let pts: Vec<Point> = (1..=9)
        .flat_map(|i| (0..5).map(move |j| Point::new(PI * i as f64 / 10.0, 0.1 * (j as f64 / 2.0 - 1.0))))
        .collect();
    let (mut min_g, mut max_asym) = (f64::INFINITY, 0.0f64);
    for &a in &pts {
        for &b in &pts {
            let g = green_value(a, b, &st).unwrap();
            min_g = min_g.min(g);
            max_asym = max_asym.max((g - green_value(b, a, &st).unwrap()).abs());
        }
    }
    check(
        min_g > 0.0 && max_asym <= 2.0 * st.tail_bound,
        format!(
            "min G = {min_g:.3e} > 0, max |G_p(q)-G_q(p)| = {max_asym:.1e} <= {:.1e}",
            2.0 * st.tail_bound
        ),
    )
}

fn kkt_and_qp_oracle() -> Outcome {
    let params = MaterialParams::new(0.3, 0.15).unwrap();
    let mesh = Mesh::new(4, 2, &params).unwrap();
    let op = assemble_bilinear(&mesh, &params, None).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let vals: Vec<f64> = (0..mesh.n_elements()).map(|_| rng.gen_range(-1.0..1.0)).collect();
    let f = assemble_load(&mesh, &LoadSpec::from_density(Density::per_element(&mesh, &vals).unwrap()), None).unwrap();
    let peak = solve_linear(&op, &f).unwrap().max_abs_nodal();
    let lo: Vec<f64> = (0..mesh.n_nodes()).map(|_| -rng.gen_range(0.0..0.5) * peak).collect();
    let hi: Vec<f64> = (0..mesh.n_nodes()).map(|_| rng.gen_range(0.0..0.5) * peak).collect();
    let c = BoxConstraints::on_nodes(&mesh, 0..mesh.n_nodes(), |q| lo[mesh.node_at(q).unwrap()], |q| {
        hi[mesh.node_at(q).unwrap()]
    })
    .unwrap();
    let s = solved(solve_obstacle(&op, &f, &c, &SolverSettings::default()).unwrap());
    let oracle = brute_force(&op, &f, &c);
    let scale = oracle.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let err = s.field.dofs.iter().zip(&oracle).fold(0.0f64, |m, (a, b)| m.max((a - b).abs())) / scale;
    let kkt = *KKT.lock().unwrap();
    check(
        err <= 1e-8 && kkt <= 1e-8 && mesh.n_dofs() <= 200,
        format!(
            "{} DOFs, oracle error {err:.1e} <= 1e-8, largest KKT residual in suite {kkt:.1e} <= 1e-8",
            mesh.n_dofs()
        ),
    )
}

fn empty_contact() -> Outcome {
    let p = desk();
    let mesh = Mesh::new(32, 8, &p).unwrap();
    let st = SeriesState::with_default_order(p).unwrap();
    let (zmax, _) = uniform_load_profile_max(&st, mesh.nx, mesh.ny).unwrap();
    let level = 1.1 * zmax;
    let c = BoxConstraints::full_plate(&mesh, |_| -level, |_| level).unwrap();
    let op = assemble_bilinear(&mesh, &p, None).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let mut worst = 0.0f64;
    for k in 0..20 {
        let vals: Vec<f64> = (0..mesh.n_elements()).map(|_| rng.gen_range(-1.0..=1.0)).collect();
        let load = LoadSpec::from_density(Density::per_element(&mesh, &vals).unwrap());
        let s = solved(solve_obstacle(&op, &assemble_load(&mesh, &load, None).unwrap(), &c, &SolverSettings::default()).unwrap());
        if !s.contact_free() {
            return Err(format!("load {k} touches the obstacle"));
        }
        worst = worst.max(s.field.max_abs_nodal());
    }
    Ok(format!("20/20 contact-free, max |u| = {worst:.3e} < psi = {level:.3e}"))
}

fn nearest_to_top_center(f: &Force, l: f64) -> bool {
    matches!(f, Force::Antisym { xi, eta } if (xi - PI / 2.0).abs() < 1e-12 && (eta.abs() - l).abs() < 1e-15)
}

fn threshold_identity() -> Outcome {
    let p = desk();
    let window = ScanWindow::default_for(&p);
    let settings = SolverSettings::default();
    let mut scans = Vec::new();
    for (nx, ny) in [(32, 8), (64, 16)] {
        let mesh = Mesh::new(nx, ny, &p).unwrap();
        scans.push(scanned(threshold_scan(&mesh, &p, window, 33, 9, &settings).unwrap()));
    }
    let m_scan = scans[1].value / 2.0;
    let refine = (scans[1].value - scans[0].value).abs() / 2.0;
    let m = gap_threshold_m(&p, 1000).unwrap();
    let diff = (2.0 * m_scan - 2.0 * m.value).abs();
    let tol = 5.0 * (m.tail_bound + refine);
    let at_center = nearest_to_top_center(&scans[1].argmax, p.half_width);
    check(
        diff <= tol && at_center,
        format!(
            "|2M_scan - 2M| = {diff:.2e} <= {tol:.2e} (M = {:.10}, M_scan = {m_scan:.10}), argmax {:?}",
            m.value, scans[1].argmax
        ),
    )
}

fn regime_dichotomy() -> Outcome {
    let p = desk();
    let mesh = Mesh::new(64, 16, &p).unwrap();
    let window = ScanWindow::default_for(&p);
    let class = ForceClass::AntisymDelta { window, nx: 33, ny: 9 };
    let settings = SolverSettings::default();
    let m = gap_threshold_m(&p, 1000).unwrap().value;
    let free = scanned(threshold_scan(&mesh, &p, window, 33, 9, &settings).unwrap());
    // gap change between the two top η rows at ξ = π/2
    let top: Vec<f64> = free
        .forces
        .iter()
        .zip(&free.values)
        .filter_map(|(f, v)| match f {
            Force::Antisym { xi, eta } if (xi - PI / 2.0).abs() < 1e-12 && *eta > 0.0 => Some((*eta, *v)),
            _ => None,
        })
        .fold(Vec::new(), |mut acc, e| {
            acc.push(e);
            acc
        })
        .windows(2)
        .map(|w| (w[1].1 - w[0].1).abs())
        .collect();
    let tol_scan = top.last().copied().unwrap_or(0.0);

    let large = 1.5 * m;
    let c = BoxConstraints::long_edges(&mesh, |_| -large, |_| large).unwrap();
    let s = scanned(worst_gap_force(&mesh, &p, &c, &class, &settings).unwrap());
    let center_free = s
        .forces
        .iter()
        .zip(&s.contact_free)
        .filter(|(f, _)| matches!(f, Force::Antisym { xi, .. } if (xi - PI / 2.0).abs() < 1e-12))
        .all(|(_, free)| *free);
    let case_i = s.value < 2.0 * large && center_free;

    let small = 0.5 * m;
    let c = BoxConstraints::long_edges(&mesh, |_| -small, |_| small).unwrap();
    let t = scanned(worst_gap_force(&mesh, &p, &c, &class, &settings).unwrap());
    let case_ii = t.value <= 2.0 * small && t.value >= 2.0 * small - tol_scan;
    check(
        case_i && case_ii,
        format!(
            "gamma=1.5M: G = {:.6e} < 2gamma = {:.6e}, centre solves contact-free = {center_free}; \
             gamma=0.5M: G = {:.6e} in [{:.6e}, {:.6e}]",
            s.value,
            2.0 * large,
            t.value,
            2.0 * small - tol_scan,
            2.0 * small
        ),
    )
}

fn relative_part(part: &[f64], whole: &[f64]) -> f64 {
    let a = part.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let b = whole.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    a / b
}

fn symmetry_suite() -> Outcome {
    let p = desk();
    let l = p.half_width;
    let mesh = Mesh::new(32, 8, &p).unwrap();
    let op = assemble_bilinear(&mesh, &p, None).unwrap();
    let settings = SolverSettings::default();
    let solve = |f: &dyn Fn(Point) -> f64, lo: &dyn Fn(Point) -> f64, hi: &dyn Fn(Point) -> f64| {
        let b = assemble_load(&mesh, &LoadSpec::from_density(Density::from_fn(&mesh, f)), None).unwrap();
        let peak = solve_linear(&op, &b).unwrap().max_abs_nodal();
        let c = BoxConstraints::full_plate(&mesh, |q| peak * lo(q), |q| peak * hi(q)).unwrap();
        solved(solve_obstacle(&op, &b, &c, &settings).unwrap())
    };

    let odd = solve(&|q| q.y / l * (1.0 + q.x) * q.x.sin(), &|q| -0.4 - 0.2 * q.x.cos(), &|q| 0.4 + 0.2 * q.x.cos());
    let (e, _) = symmetry_decompose(&odd.field);
    let r_odd = relative_part(&e.nodal_values(), &odd.field.nodal_values());

    let even = solve(&|q| (1.0 + (q.y / l).powi(2)) * q.x, &|_| -0.3, &|q| 0.5 + 0.1 * (q.y / l).powi(2));
    let (_, o) = symmetry_decompose(&even.field);
    let r_even = relative_part(&o.nodal_values(), &even.field.nodal_values());

    let xs = solve(&|q| q.x.sin() * (1.0 + q.y / l), &|_| -0.4, &|q| 0.5 + 0.2 * q.y / l);
    let diff: Vec<f64> = (0..mesh.n_nodes())
        .map(|k| xs.field.node_value(k) - xs.field.node_value(mesh.mirror_node_x(k)))
        .collect();
    let r_x = relative_part(&diff, &xs.field.nodal_values());

    let contact = !odd.contact_free() && !even.contact_free() && !xs.contact_free();
    check(
        r_odd <= 1e-7 && r_even <= 1e-7 && r_x <= 1e-7 && contact,
        format!("odd {r_odd:.1e}, even {r_even:.1e}, x-mirror {r_x:.1e} (all <= 1e-7, all with contact)"),
    )
}

fn pairs_agree(s: &ScanOutcome) -> Result<usize, String> {
    let mut n = 0;
    for (k, f) in s.forces.iter().enumerate() {
        let j = s
            .forces
            .iter()
            .position(|g| *g == f.negated())
            .ok_or_else(|| format!("negation of {f:?} missing from class"))?;
        if s.values[k] != s.values[j] {
            return Err(format!("{f:?}: {} vs {}", s.values[k], s.values[j]));
        }
        n += 1;
    }
    Ok(n)
}

fn sign_symmetry() -> Outcome {
    let p = desk();
    let mesh = Mesh::new(32, 8, &p).unwrap();
    let settings = SolverSettings::default();
    let gamma = 0.5 * gap_threshold_m(&p, 1000).unwrap().value;
    let thin = BoxConstraints::long_edges(&mesh, |_| -gamma, |_| gamma).unwrap();
    let thick = BoxConstraints::full_plate(&mesh, |_| -gamma, |_| gamma).unwrap();
    let mask = ReinforcementMask::new(ElementMask::from_rects(&mesh, &[[0.0, 0.5, -0.1, 0.1]]), 0.5, 2.0).unwrap();
    let window = ScanWindow::default_for(&p);
    let scans = [
        worst_gap_force(&mesh, &p, &thin, &ForceClass::AntisymDelta { window, nx: 33, ny: 9 }, &settings),
        worst_force_amplitude(&mesh, &p, &mask, &ForceClass::SignedDelta { nx: 9, ny: 5 }, &thick, Variant::E1, &settings),
        worst_force_amplitude(&mesh, &p, &mask, &ForceClass::BangBang { cx: 4, cy: 2 }, &thin, Variant::E2, &settings),
    ];
    let mut total = 0;
    for s in scans {
        total += pairs_agree(&scanned(s.map_err(|e| e.to_string())?))?;
    }
    Ok(format!("{total} members match their negation exactly"))
}

fn bound_chain() -> Outcome {
    let settings = SolverSettings::default();
    let mut lines = Vec::new();
    let mut ok = true;
    for (s, l) in [(0.2, 0.1), (0.3, PI / 150.0)] {
        let p = MaterialParams::new(s, l).unwrap();
        let mesh = Mesh::new(32, 8, &p).unwrap();
        let st = SeriesState::with_default_order(p).unwrap();
        let (alpha, beta) = (0.5, 2.0);
        let area = p.area() * (1.0 - alpha) / (beta - alpha);
        let w = area / (2.0 * l) / 2.0;
        let masks = [
            vec![[0.0, 2.0 * w, -l, l]],
            vec![[0.0, w, -l, l], [PI - w, PI, -l, l]],
            vec![[PI / 2.0 - w, PI / 2.0 + w, -l, l]],
            vec![[0.0, PI, -l, -l + area / PI]],
        ];
        for rects in masks {
            let mask = ReinforcementMask::new(ElementMask::from_rects(&mesh, &rects), alpha, beta).unwrap();
            let a = scanned(
                worst_force_amplitude(&mesh, &p, &mask, &ForceClass::BangBang { cx: 4, cy: 2 }, &BoxConstraints::none(), Variant::E2, &settings)
                    .unwrap(),
            )
            .value;
            let b = placement_bound_report(&mask, &mesh, &st).unwrap();
            let pass = a <= b.upperb + b.upperb_tail && b.upperb <= b.coarse;
            ok &= pass;
            lines.push(format!("A-upperb={:.1e} (series tail {:.1e}), upperb={:.6e} <= coarse={:.6e}", a - b.upperb, b.upperb_tail, b.upperb, b.coarse));
        }
        let m = gap_threshold_m(&p, 1000).unwrap().value;
        let c = analytic_bound_c(&p);
        ok &= m <= c;
        lines.push(format!("M={m:.4e} <= C={c:.4e}"));
    }
    check(ok, lines.join("; "))
}

fn main() {
    rayon::ThreadPoolBuilder::new().build_global().ok();
    let criteria: [(&str, f64, fn() -> Outcome); 10] = [
        ("series-FEM consistency", 60.0, series_fem_consistency),
        ("phi monotonicity", 5.0, phi_monotonicity),
        ("Green positivity and reciprocity", 10.0, green_positivity),
        ("empty-contact criterion", 120.0, empty_contact),
        ("threshold identity", 120.0, threshold_identity),
        ("regime dichotomy", 180.0, regime_dichotomy),
        ("symmetry suite", f64::INFINITY, symmetry_suite),
        ("sign symmetry of maximizers", f64::INFINITY, sign_symmetry),
        ("bound chain", f64::INFINITY, bound_chain),
        ("KKT certification", f64::INFINITY, kkt_and_qp_oracle),
    ];
    let number = [1, 2, 3, 5, 6, 7, 8, 9, 10, 4];
    let mut lines = Vec::new();
    let mut failed = 0;
    for ((name, limit, run), n) in criteria.into_iter().zip(number) {
        let t = Instant::now();
        let out = run();
        let secs = t.elapsed().as_secs_f64();
        let (pass, detail) = match out {
            Ok(d) if secs <= limit => (true, d),
            Ok(d) => (false, format!("{d}; too slow: limit {limit} s")),
            Err(d) => (false, d),
        };
        failed += usize::from(!pass);
        lines.push((n, format!("criterion {n:>2} {name}: {} ({secs:.2} s) {detail}", if pass { "PASS" } else { "FAIL" })));
    }
    lines.sort_by_key(|(n, _)| *n);
    for (_, line) in &lines {
        println!("{line}");
    }
    println!("acceptance: {} passed, {failed} failed", lines.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
