//! The active-set solver against exhaustive enumeration of contact patterns.

mod common;

use common::brute_force;
use hinged_plate::fem::{assemble_bilinear, assemble_load, Density, LoadSpec, Mesh, PointMass};
use hinged_plate::vi::{solve_linear, solve_obstacle, BoxConstraints, SolverSettings};
use hinged_plate::{MaterialParams, Point};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[test]
fn matches_exhaustive_enumeration() {
    let params = MaterialParams::new(0.25, 0.2).unwrap();
    let mesh = Mesh::new(4, 2, &params).unwrap();
    assert!(mesh.n_dofs() <= 200);
    let op = assemble_bilinear(&mesh, &params, None).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for _ in 0..4 {
        let vals: Vec<f64> = (0..mesh.n_elements()).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let mut load = LoadSpec::from_density(Density::per_element(&mesh, &vals).unwrap());
        load.point_masses.push(PointMass {
            at: Point::new(rng.gen_range(0.3..2.8), rng.gen_range(-0.2..0.2)),
            weight: rng.gen_range(-2.0..2.0),
        });
        let f = assemble_load(&mesh, &load, None).unwrap();
        let peak = solve_linear(&op, &f).unwrap().max_abs_nodal();
        let lo: Vec<f64> = (0..mesh.n_nodes()).map(|_| -rng.gen_range(0.0..0.6) * peak).collect();
        let hi: Vec<f64> = (0..mesh.n_nodes()).map(|_| rng.gen_range(0.0..0.6) * peak).collect();
        let c = BoxConstraints::on_nodes(
            &mesh,
            0..mesh.n_nodes(),
            |p| lo[mesh.node_at(p).unwrap()],
            |p| hi[mesh.node_at(p).unwrap()],
        )
        .unwrap();
        let s = solve_obstacle(&op, &f, &c, &SolverSettings::default()).unwrap();
        assert!(s.kkt_residual <= 1e-8);
        let oracle = brute_force(&op, &f, &c);
        let scale = oracle.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        let err = s.field.dofs.iter().zip(&oracle).fold(0.0f64, |m, (a, b)| m.max((a - b).abs()));
        assert!(err <= 1e-8 * scale, "err {err:e} scale {scale:e}");
        assert!(!s.contact_free());
    }
}
