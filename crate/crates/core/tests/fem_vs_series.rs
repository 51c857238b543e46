use hinged_plate::fem::{assemble_bilinear, assemble_load, Density, LoadSpec, Mesh};
use hinged_plate::series::sine_mode_response;
use hinged_plate::vi::solve_linear;
use hinged_plate::MaterialParams;

fn sine_load_error(nx: usize, ny: usize, params: &MaterialParams) -> (f64, f64) {
    let mesh = Mesh::new(nx, ny, params).unwrap();
    let op = assemble_bilinear(&mesh, params, None).unwrap();
    let load = LoadSpec::from_density(Density::from_fn(&mesh, |p| p.x.sin()));
    let u = solve_linear(&op, &assemble_load(&mesh, &load, None).unwrap()).unwrap();
    let mut err = 0.0f64;
    let mut norm = 0.0f64;
    for k in 0..mesh.n_nodes() {
        let exact = sine_mode_response(1, mesh.node_point(k), params).unwrap();
        err = err.max((u.node_value(k) - exact).abs());
        norm = norm.max(exact.abs());
    }
    (err, norm)
}

#[test]
fn sine_load_converges_to_series() {
    let params = MaterialParams::new(0.2, 0.1).unwrap();
    let errs: Vec<(f64, f64)> = [(16, 4), (32, 8), (64, 16)]
        .iter()
        .map(|&(nx, ny)| sine_load_error(nx, ny, &params))
        .collect();
    eprintln!("{errs:?}");
    assert!(errs[1].0 < errs[0].0 && errs[2].0 < errs[1].0);
    assert!(errs[2].0 <= 1e-3 * errs[2].1);
}
