use std::sync::OnceLock;

use super::banded::{BandedCholesky, BandedSym};
use super::dd::Dd;
use super::mask::{ElementMask, ReinforcementMask};
use super::mesh::Mesh;
use crate::error::{Error, Result};
use crate::params::MaterialParams;

/// 1-D Hermite matrices on a cell of length `h`, DOFs `(v₀, s₀, v₁, s₁)`:
/// mass `∫NᵢNⱼ`, `∫Nᵢ'Nⱼ'`, `∫Nᵢ''Nⱼ''` and `∫Nᵢ''Nⱼ`.
struct Hermite1dMatrices {
    mass: [[Dd; 4]; 4],
    first: [[Dd; 4]; 4],
    second: [[Dd; 4]; 4],
    mixed: [[Dd; 4]; 4],
}

/// `table[i][j] · h^(power[i][j] − shift) / den`, computed in double-double.
fn scaled_table(table: [[i32; 4]; 4], shift: i32, den: i32, h: Dd) -> [[Dd; 4]; 4] {
    let pow = |k: i32| -> Dd {
        let mut p = Dd::int(1);
        for _ in 0..k.abs() {
            p = p * h;
        }
        if k < 0 {
            Dd::int(1) / p
        } else {
            p
        }
    };
    let mut out = [[Dd::ZERO; 4]; 4];
    for i in 0..4 {
        for j in 0..4 {
            // slope DOFs carry one power of h each
            let k = (i % 2 + j % 2) as i32 - shift;
            out[i][j] = Dd::int(table[i][j]) * pow(k) / Dd::int(den);
        }
    }
    out
}

impl Hermite1dMatrices {
    fn new(h: f64) -> Self {
        let h = Dd::from(h);
        let mass = [[156, 22, 54, -13], [22, 4, 13, -3], [54, 13, 156, -22], [-13, -3, -22, 4]];
        let first = [[36, 3, -36, 3], [3, 4, -3, -1], [-36, -3, 36, -3], [3, -1, -3, 4]];
        let second = [[12, 6, -12, 6], [6, 4, -6, 2], [-12, -6, 12, -6], [6, 2, -6, 4]];
        let mixed = [[-36, -3, 36, -3], [-33, -4, 3, 1], [36, 3, -36, 3], [-3, 1, 33, -4]];
        Self {
            mass: scaled_table(mass, -1, 420, h),
            first: scaled_table(first, 1, 30, h),
            second: scaled_table(second, 3, 1, h),
            mixed: scaled_table(mixed, 1, 30, h),
        }
    }
}

/// Local DOF `k = 4·corner + offset` as a pair of 1-D indices.
fn split(k: usize) -> (usize, usize) {
    const CORNER: [(usize, usize); 4] = [(0, 0), (1, 0), (1, 1), (0, 1)];
    let (cx, cy) = CORNER[k / 4];
    let c = k % 4;
    (2 * cx + (c & 1), 2 * cy + (c >> 1))
}

pub(crate) fn element_stiffness_dd(mesh: &Mesh, params: &MaterialParams) -> [[Dd; 16]; 16] {
    let x = Hermite1dMatrices::new(mesh.hx());
    let y = Hermite1dMatrices::new(mesh.hy());
    let sigma = Dd::from(params.sigma);
    let twist = Dd::int(2) * (Dd::int(1) - sigma);
    let mut k = [[Dd::ZERO; 16]; 16];
    for i in 0..16 {
        let (p, r) = split(i);
        for j in 0..16 {
            let (q, s) = split(j);
            let bend = x.second[p][q] * y.mass[r][s] + x.mass[p][q] * y.second[r][s];
            let poisson = x.mixed[p][q] * y.mixed[s][r] + x.mixed[q][p] * y.mixed[r][s];
            let torsion = x.first[p][q] * y.first[r][s];
            k[i][j] = bend + sigma * poisson + twist * torsion;
        }
    }
    k
}

/// Element matrix of `(u, v)_{H²_*}` on one `hx × hy` rectangle, from the
/// closed-form 1-D Hermite integrals.
pub fn element_stiffness(mesh: &Mesh, params: &MaterialParams) -> [[f64; 16]; 16] {
    let dd = element_stiffness_dd(mesh, params);
    let mut k = [[0.0; 16]; 16];
    for i in 0..16 {
        for j in 0..16 {
            k[i][j] = dd[i][j].hi + dd[i][j].lo;
        }
    }
    k
}

/// An assembled symmetric form on the full DOF space (essential constraints
/// not yet applied).
#[derive(Debug, Clone)]
pub struct Operator {
    pub mesh: Mesh,
    pub params: MaterialParams,
    /// Rounded stiffness.
    pub matrix: BandedSym,
    /// What rounding dropped from `matrix`; used only in residuals.
    correction: BandedSym,
    factor: OnceLock<std::result::Result<BandedCholesky, Error>>,
}

impl PartialEq for Operator {
    fn eq(&self, other: &Self) -> bool {
        self.mesh == other.mesh
            && self.params == other.params
            && self.matrix == other.matrix
            && self.correction == other.correction
    }
}

/// Galerkin matrix of `(·,·)_{H²_*}` over `region` (the whole plate if `None`).
pub fn assemble_bilinear(mesh: &Mesh, params: &MaterialParams, region: Option<&ElementMask>) -> Result<Operator> {
    if let Some(r) = region {
        r.check_mesh(mesh)?;
    }
    let weights: Vec<f64> = (0..mesh.n_elements())
        .map(|e| match region {
            Some(r) if !r.contains(e) => 0.0,
            _ => 1.0,
        })
        .collect();
    Ok(Operator::from_weights(mesh, params, &weights))
}

impl Operator {
    fn from_weights(mesh: &Mesh, params: &MaterialParams, weights: &[f64]) -> Self {
        let ke = element_stiffness_dd(mesh, params);
        let (n, bw) = (mesh.n_dofs(), mesh.bandwidth());
        let mut acc = vec![Dd::ZERO; n * (bw + 1)];
        for (e, &w) in weights.iter().enumerate() {
            if w == 0.0 {
                continue;
            }
            let w = Dd::from(w);
            let dofs = mesh.element_dofs(e);
            for i in 0..16 {
                for j in 0..16 {
                    let (gi, gj) = (dofs[i], dofs[j]);
                    if gi >= gj {
                        let slot = gi * (bw + 1) + (gi - gj);
                        acc[slot] = acc[slot] + w * ke[i][j];
                    }
                }
            }
        }
        Self::from_parts(*mesh, *params, n, bw, &acc)
    }

    fn from_parts(mesh: Mesh, params: MaterialParams, n: usize, bw: usize, acc: &[Dd]) -> Self {
        Self {
            mesh,
            params,
            matrix: BandedSym::from_raw(n, bw, acc.iter().map(|d| d.hi).collect()),
            correction: BandedSym::from_raw(n, bw, acc.iter().map(|d| d.lo).collect()),
            factor: OnceLock::new(),
        }
    }

    fn parts(&self) -> Vec<Dd> {
        self.matrix
            .raw()
            .iter()
            .zip(self.correction.raw())
            .map(|(&hi, &lo)| Dd { hi, lo })
            .collect()
    }

    /// `α(·,·)_Ω + (β−α)(·,·)_D`.
    pub fn reinforced(mesh: &Mesh, params: &MaterialParams, mask: &ReinforcementMask) -> Result<Self> {
        mask.region.check_mesh(mesh)?;
        let weights: Vec<f64> = (0..mesh.n_elements()).map(|e| mask.weight(e)).collect();
        Ok(Self::from_weights(mesh, params, &weights))
    }

    /// `a·self + b·other`.
    pub fn combine(&self, a: f64, other: &Operator, b: f64) -> Result<Self> {
        if self.mesh != other.mesh {
            return Err(Error::validation("operators live on different meshes"));
        }
        let (a, b) = (Dd::from(a), Dd::from(b));
        let acc: Vec<Dd> = self.parts().into_iter().zip(other.parts()).map(|(x, y)| a * x + b * y).collect();
        Ok(Self::from_parts(self.mesh, self.params, self.matrix.dim(), self.matrix.bandwidth(), &acc))
    }

    pub fn apply(&self, u: &[f64]) -> Vec<f64> {
        self.matrix.mul_vec(u)
    }

    /// `b − K u` accurate to rounding of the result, with pinned rows zeroed.
    pub fn residual(&self, b: &[f64], u: &[f64]) -> Vec<f64> {
        let lo = self.correction.mul_vec(u);
        let mut r = self.matrix.residual(b, u);
        for (g, (v, c)) in r.iter_mut().zip(&lo).enumerate() {
            *v = if self.mesh.is_pinned(g) { 0.0 } else { *v - c };
        }
        r
    }

    /// `uᵀ A v`.
    pub fn inner(&self, u: &[f64], v: &[f64]) -> f64 {
        self.apply(u).iter().zip(v).map(|(a, b)| a * b).sum()
    }

    /// Matrix with pinned rows and columns replaced by the identity.
    pub fn constrained_matrix(&self) -> BandedSym {
        self.matrix.with_identity_rows(&self.mesh.pinned_mask())
    }

    /// Solves `K u = b` on the essential-constrained space, followed by
    /// iterative refinement with residuals in doubled precision.
    pub fn solve(&self, b: &[f64]) -> Result<Vec<f64>> {
        let chol = self.factor()?;
        let mut u = chol.solve(b);
        for _ in 0..2 {
            let mut r = self.residual(b, &u);
            chol.solve_in_place(&mut r);
            for (x, d) in u.iter_mut().zip(&r) {
                *x += d;
            }
        }
        Ok(u)
    }

    /// Cached Cholesky factor of [`Operator::constrained_matrix`].
    pub fn factor(&self) -> Result<&BandedCholesky> {
        self.factor
            .get_or_init(|| self.constrained_matrix().cholesky())
            .as_ref()
            .map_err(Clone::clone)
    }
}
