//! Cubic Hermite shape functions and their tensor products.

/// The four 1-D cubic Hermite functions on a cell of length `h`, ordered
/// `[value at 0, slope at 0, value at 1, slope at 1]`, with derivatives taken
/// in physical units.
#[derive(Debug, Clone, Copy)]
pub struct Hermite1d {
    pub v: [f64; 4],
    pub d1: [f64; 4],
    pub d2: [f64; 4],
}

pub fn hermite_1d(s: f64, h: f64) -> Hermite1d {
    let s2 = s * s;
    let s3 = s2 * s;
    let v = [
        1.0 - 3.0 * s2 + 2.0 * s3,
        h * (s - 2.0 * s2 + s3),
        3.0 * s2 - 2.0 * s3,
        h * (s3 - s2),
    ];
    let d1 = [
        (6.0 * s2 - 6.0 * s) / h,
        1.0 - 4.0 * s + 3.0 * s2,
        (6.0 * s - 6.0 * s2) / h,
        3.0 * s2 - 2.0 * s,
    ];
    let d2 = [
        (12.0 * s - 6.0) / (h * h),
        (6.0 * s - 4.0) / h,
        (6.0 - 12.0 * s) / (h * h),
        (6.0 * s - 2.0) / h,
    ];
    Hermite1d { v, d1, d2 }
}

/// Values and derivatives of the 16 element basis functions at one point.
#[derive(Debug, Clone, Copy)]
pub struct BasisEval {
    pub v: [f64; 16],
    pub dx: [f64; 16],
    pub dy: [f64; 16],
    pub dxx: [f64; 16],
    pub dyy: [f64; 16],
    pub dxy: [f64; 16],
}

/// Local corner `a` sits at `(CORNER[a].0, CORNER[a].1)` in `[0,1]²`.
const CORNER: [(usize, usize); 4] = [(0, 0), (1, 0), (1, 1), (0, 1)];

/// Basis at local coordinates `(s, t)` of an `hx × hy` element, indexed
/// `4·corner + offset` with offsets `(u, u_x, u_y, u_xy)`.
pub fn element_basis(s: f64, t: f64, hx: f64, hy: f64) -> BasisEval {
    let hx1 = hermite_1d(s, hx);
    let hy1 = hermite_1d(t, hy);
    let mut out = BasisEval {
        v: [0.0; 16],
        dx: [0.0; 16],
        dy: [0.0; 16],
        dxx: [0.0; 16],
        dyy: [0.0; 16],
        dxy: [0.0; 16],
    };
    for (a, &(cx, cy)) in CORNER.iter().enumerate() {
        for c in 0..4 {
            let ix = 2 * cx + (c & 1);
            let iy = 2 * cy + (c >> 1);
            let k = 4 * a + c;
            out.v[k] = hx1.v[ix] * hy1.v[iy];
            out.dx[k] = hx1.d1[ix] * hy1.v[iy];
            out.dy[k] = hx1.v[ix] * hy1.d1[iy];
            out.dxx[k] = hx1.d2[ix] * hy1.v[iy];
            out.dyy[k] = hx1.v[ix] * hy1.d2[iy];
            out.dxy[k] = hx1.d1[ix] * hy1.d1[iy];
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn nodal_interpolation_conditions() {
        let h = 0.7;
        let at0 = hermite_1d(0.0, h);
        let at1 = hermite_1d(1.0, h);
        assert_eq!(at0.v, [1.0, 0.0, 0.0, 0.0]);
        assert_eq!(at1.v, [0.0, 0.0, 1.0, 0.0]);
        for k in 0..4 {
            let want0 = if k == 1 { 1.0 } else { 0.0 };
            let want1 = if k == 3 { 1.0 } else { 0.0 };
            assert!((at0.d1[k] - want0).abs() < 1e-15);
            assert!((at1.d1[k] - want1).abs() < 1e-15);
        }
    }

    #[test]
    fn derivatives_match_finite_differences() {
        let (hx, hy) = (0.3, 0.05);
        let (s, t) = (0.37, 0.61);
        let e = 1e-6;
        let b = element_basis(s, t, hx, hy);
        let bx = element_basis(s + e, t, hx, hy);
        let by = element_basis(s, t + e, hx, hy);
        for k in 0..16 {
            let fx = (bx.v[k] - b.v[k]) / (e * hx);
            let fy = (by.v[k] - b.v[k]) / (e * hy);
            assert!((fx - b.dx[k]).abs() < 1e-4 * (1.0 + b.dx[k].abs()), "dx {k}");
            assert!((fy - b.dy[k]).abs() < 1e-4 * (1.0 + b.dy[k].abs()), "dy {k}");
            let fxy = (by.dx[k] - b.dx[k]) / (e * hy);
            assert!((fxy - b.dxy[k]).abs() < 1e-3 * (1.0 + b.dxy[k].abs()), "dxy {k}");
        }
    }

    #[test]
    fn reproduces_bicubic_monomials() {
        // u = x³y² has nodal data (u, u_x, u_y, u_xy) interpolated exactly.
        let (hx, hy) = (1.3, 0.4);
        let f = |x: f64, y: f64| [x.powi(3) * y * y, 3.0 * x * x * y * y, 2.0 * x.powi(3) * y, 6.0 * x * x * y];
        let mut dofs = [0.0; 16];
        for (a, &(cx, cy)) in CORNER.iter().enumerate() {
            let d = f(cx as f64 * hx, cy as f64 * hy);
            dofs[4 * a..4 * a + 4].copy_from_slice(&d);
        }
        let (s, t) = (0.3, 0.8);
        let b = element_basis(s, t, hx, hy);
        let u: f64 = (0..16).map(|k| dofs[k] * b.v[k]).sum();
        let uxx: f64 = (0..16).map(|k| dofs[k] * b.dxx[k]).sum();
        let (x, y) = (s * hx, t * hy);
        assert!((u - x.powi(3) * y * y).abs() < 1e-13);
        assert!((uxx - 6.0 * x * y * y).abs() < 1e-12);
    }
}
