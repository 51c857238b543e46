use super::field::DofField;
use super::mesh::{DOFS_PER_NODE, DX, DXY, DY};

/// `u(x, −y)`; y-derivative DOFs change sign.
pub fn mirror_y(field: &DofField) -> DofField {
    mirror(field, true)
}

/// `u(π − x, y)`; x-derivative DOFs change sign.
pub fn mirror_x(field: &DofField) -> DofField {
    mirror(field, false)
}

fn mirror(field: &DofField, in_y: bool) -> DofField {
    let mesh = field.mesh;
    let mut dofs = vec![0.0; field.dofs.len()];
    for k in 0..mesh.n_nodes() {
        let src = if in_y { mesh.mirror_node_y(k) } else { mesh.mirror_node_x(k) };
        for c in 0..DOFS_PER_NODE {
            let flip = if in_y { c == DY || c == DXY } else { c == DX || c == DXY };
            let v = field.dofs[DOFS_PER_NODE * src + c];
            dofs[DOFS_PER_NODE * k + c] = if flip { -v } else { v };
        }
    }
    DofField { mesh, dofs }
}

/// `(u^e, u^o)` with `u^e(x,y) = (u(x,y) + u(x,−y))/2`.
///
/// The uniform mesh is symmetric in `y` by construction, so no error case
/// arises.
pub fn symmetry_decompose(field: &DofField) -> (DofField, DofField) {
    let m = mirror_y(field);
    let even = field.axpy(1.0, &m).scaled(0.5);
    let odd = field.axpy(-1.0, &m).scaled(0.5);
    (even, odd)
}
