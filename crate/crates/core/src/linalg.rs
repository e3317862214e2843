//! Thin helpers over nalgebra's complex SVD.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};

pub type CMatrix = DMatrix<Complex64>;

/// Singular values below this fraction of the largest are treated as zero.
pub const RANK_CUTOFF: f64 = 1e-12;

/// Singular values, largest first.
pub fn singular_values(m: &CMatrix) -> Vec<f64> {
    let mut sv: Vec<f64> = m.singular_values().iter().copied().collect();
    sv.sort_by(|a, b| b.total_cmp(a));
    sv
}

/// Numerical rank under [`RANK_CUTOFF`].
pub fn rank(m: &CMatrix) -> usize {
    let sv = singular_values(m);
    match sv.first() {
        Some(&max) if max > 0.0 => sv.iter().filter(|&&s| s > RANK_CUTOFF * max).count(),
        _ => 0,
    }
}

/// Moore-Penrose pseudo-inverse. With `require_full_column_rank`, a
/// channel whose columns are numerically dependent is rejected; otherwise
/// the small singular values are truncated.
pub fn pseudo_inverse(m: &CMatrix, require_full_column_rank: bool) -> Result<CMatrix> {
    let (rows, cols) = m.shape();
    let svd = m.clone().svd(true, true);
    let u = svd.u.as_ref().expect("requested U");
    let v_t = svd.v_t.as_ref().expect("requested V^H");
    let max = svd.singular_values.iter().copied().fold(0.0, f64::max);
    if max == 0.0 {
        return Err(Error::SingularChannel);
    }
    let kept = svd
        .singular_values
        .iter()
        .filter(|&&s| s > RANK_CUTOFF * max)
        .count();
    if require_full_column_rank && (kept < cols || rows < cols) {
        return Err(Error::SingularChannel);
    }
    let mut out = CMatrix::zeros(cols, rows);
    for (k, &s) in svd.singular_values.iter().enumerate() {
        if s <= RANK_CUTOFF * max {
            continue;
        }
        let vk = v_t.row(k).adjoint();
        let uk = u.column(k).adjoint();
        out += (vk * uk).unscale(s);
    }
    Ok(out)
}
