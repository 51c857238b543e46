//! Series values against 50-digit references from `oracle/series_oracle.py`.

use std::f64::consts::PI;

use hinged_plate::series::{
    analytic_bound_c, antisym_solution, envelope_constant, gap_threshold_m, green_value, phi_m,
    uniform_load_profile, AntisymDelta, SeriesState,
};
use hinged_plate::{MaterialParams, Point};

fn close(got: f64, want: f64, rel: f64) {
    assert!(
        (got - want).abs() <= rel * want.abs(),
        "got {got:.17e}, want {want:.17e}, rel err {:.2e}",
        (got - want).abs() / want.abs()
    );
}

fn desk() -> MaterialParams {
    MaterialParams::new(0.2, 0.1).unwrap()
}

#[test]
fn phi_reference_values() {
    let p = desk();
    close(phi_m(0.01, -0.02, 1, &p).unwrap(), 20.813561416550843483, 1e-13);
    close(phi_m(0.01, -0.02, 3, &p).unwrap(), 6.8897682882638960739, 1e-13);
    close(phi_m(0.1, 0.1, 40, &p).unwrap(), 3.1250091435013881681, 1e-13);
    close(phi_m(0.05, 0.0, 200, &p).unwrap(), 0.00049939923764562760717, 1e-11);
    let q = MaterialParams::new(0.3, PI / 150.0).unwrap();
    close(phi_m(-PI / 150.0, PI / 150.0, 7, &q).unwrap(), 14.832379685835716778, 1e-13);
}

#[test]
fn phi_exponentially_small_values() {
    let p = MaterialParams::new(0.05, 0.2992595477421979).unwrap();
    let (y, eta) = (0.12955220826211486, -0.2819307966159386);
    let a = phi_m(y, eta, 149, &p).unwrap();
    let b = phi_m(y, eta, 150, &p).unwrap();
    close(a, 1.4876916337526004127e-25, 1e-12);
    close(b, 9.9203006096934449808e-26, 1e-12);
    assert!(b < a);
    let d = desk();
    close(phi_m(0.1, -0.1, 1000, &d).unwrap(), 4.4111701789733021161e-85, 1e-12);
    close(phi_m(0.05, -0.07, 2000, &d).unwrap(), 1.416907130277083234e-102, 1e-12);
}

#[test]
fn green_and_antisym_reference_values() {
    let st = SeriesState::new(desk(), 200).unwrap();
    let g = green_value(Point::new(1.0, 0.03), Point::new(2.0, -0.05), &st).unwrap();
    close(g, 2.3839500793759385516, 1e-12);
    let v = antisym_solution(AntisymDelta::new(PI / 2.0, 0.1), Point::new(PI / 2.0, 0.1), &st).unwrap();
    close(v, 0.023878395242005414492, 1e-12);
}

#[test]
fn threshold_reference_values() {
    close(gap_threshold_m(&desk(), 1000).unwrap().value, 0.023879949450642625364, 1e-12);
    let q = MaterialParams::new(0.3, PI / 150.0).unwrap();
    close(gap_threshold_m(&q, 1000).unwrap().value, 0.0058402433839820011786, 1e-12);
    close(analytic_bound_c(&desk()), 8.2751521629809414724, 1e-14);
    close(envelope_constant(&desk()), 30.496879068605855923, 1e-14);
}

#[test]
fn uniform_profile_reference_value() {
    let st = SeriesState::new(desk(), 41).unwrap();
    close(
        uniform_load_profile(Point::new(PI / 2.0, 0.1), &st).unwrap(),
        1.3217633272954443354,
        1e-12,
    );
}
