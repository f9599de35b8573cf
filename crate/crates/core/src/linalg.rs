//! Small fixed-size matrix/vector helpers over `f64` and over jets.

use crate::error::{Error, Result};
use crate::jet::Jet3;

pub fn dot3(a: &[f64; 3], b: &[f64; 3]) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

pub fn cross3(a: &[f64; 3], b: &[f64; 3]) -> [f64; 3] {
    [
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    ]
}

pub fn norm3(a: &[f64; 3]) -> f64 {
    dot3(a, a).sqrt()
}

pub fn det3(m: &[[f64; 3]; 3]) -> f64 {
    m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
        - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
        + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
}

pub fn inv3(m: &[[f64; 3]; 3]) -> Option<[[f64; 3]; 3]> {
    let d = det3(m);
    if d.abs() < 1e-300 || !d.is_finite() {
        return None;
    }
    let inv_d = 1.0 / d;
    let mut out = [[0.0; 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            let (a, b) = ((i + 1) % 3, (i + 2) % 3);
            let (c, e) = ((j + 1) % 3, (j + 2) % 3);
            // adjugate with transposed cofactors
            out[j][i] = (m[a][c] * m[b][e] - m[a][e] * m[b][c]) * inv_d;
        }
    }
    Some(out)
}

pub fn mat3_vec(m: &[[f64; 3]; 3], v: &[f64; 3]) -> [f64; 3] {
    std::array::from_fn(|i| dot3(&m[i], v))
}

/// 3×3 determinant over jets.
pub fn jdet3(m: &[[Jet3; 3]; 3]) -> Jet3 {
    m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
        - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
        + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
}

/// 3×3 inverse over jets via the adjugate.
pub fn jinv3(m: &[[Jet3; 3]; 3]) -> Result<[[Jet3; 3]; 3]> {
    let det = jdet3(m);
    if det.value().abs() < 1e-14 {
        return Err(Error::Singular(format!(
            "3x3 jet matrix inverse, det = {:.3e}",
            det.value()
        )));
    }
    let inv_det = det.recip()?;
    let nv = m[0][0].nvars();
    let mut out = [[Jet3::zero(nv); 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            let (a, b) = ((i + 1) % 3, (i + 2) % 3);
            let (c, e) = ((j + 1) % 3, (j + 2) % 3);
            out[j][i] = (m[a][c] * m[b][e] - m[a][e] * m[b][c]) * inv_det;
        }
    }
    Ok(out)
}

pub fn jmat3_vec(m: &[[Jet3; 3]; 3], v: &[Jet3; 3]) -> [Jet3; 3] {
    std::array::from_fn(|i| m[i][0] * v[0] + m[i][1] * v[1] + m[i][2] * v[2])
}

/// Solve the 2×2 jet system `m x = rhs`.
pub fn jsolve2(m: &[[Jet3; 2]; 2], rhs: &[Jet3; 2]) -> Result<[Jet3; 2]> {
    let det = m[0][0] * m[1][1] - m[0][1] * m[1][0];
    if det.value().abs() < 1e-14 {
        return Err(Error::Singular(format!(
            "2x2 jet solve, det = {:.3e}",
            det.value()
        )));
    }
    let inv_det = det.recip()?;
    Ok([
        (m[1][1] * rhs[0] - m[0][1] * rhs[1]) * inv_det,
        (m[0][0] * rhs[1] - m[1][0] * rhs[0]) * inv_det,
    ])
}
