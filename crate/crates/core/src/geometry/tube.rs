//! Automatic adapted frame from the normal-offset construction.
//!
//! In flat-pullback mode the surface `p(z) = ψ(f(z))` lives in Euclidean
//! `x`-coordinates, where `F(z, s) = p(z) + s·n(z)` parametrizes the tube by
//! the unit Euclidean normal `n`. The frame takes `b³ = n` and Gram-Schmidt
//! of `∂F/∂z_a` for the tangential pair; its dependence on the ambient point
//! comes from jet inversion of `F`.

use crate::error::{Error, Result};
use crate::expr::SmoothMap;
use crate::geometry::{DomainBox, Surface};
use crate::jet::{invert_map3, Jet3};
use crate::linalg::jinv3;

#[derive(Clone, Debug)]
pub struct TubeFrame {
    /// Newton seeds: surface parameter and its Euclidean image.
    seeds: Vec<([f64; 2], [f64; 3])>,
}

fn jcross(a: &[Jet3; 3], b: &[Jet3; 3]) -> [Jet3; 3] {
    [
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    ]
}

fn jdot(a: &[Jet3; 3], b: &[Jet3; 3]) -> Jet3 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

fn jnormalize(a: &[Jet3; 3]) -> Result<[Jet3; 3]> {
    let n2 = jdot(a, a);
    if n2.value() <= 1e-24 {
        return Err(Error::Singular(
            "normal-tube frame: zero-length vector".into(),
        ));
    }
    let inv = n2.sqrt()?.recip()?;
    Ok([a[0] * inv, a[1] * inv, a[2] * inv])
}

/// `p(z)` and the unit normal `n(z)` as z-jets at `z`.
fn surface_and_normal(
    psi: &SmoothMap,
    f: &SmoothMap,
    z: [f64; 2],
    order: usize,
) -> Result<([Jet3; 3], [Jet3; 3])> {
    let fj = f.eval_jet(&z, order)?;
    let p_vec = psi.eval_on_jets(&fj)?;
    let p: [Jet3; 3] = [p_vec[0], p_vec[1], p_vec[2]];
    let t1: [Jet3; 3] = std::array::from_fn(|m| p[m].partial(0));
    let t2: [Jet3; 3] = std::array::from_fn(|m| p[m].partial(1));
    let n = jnormalize(&jcross(&t1, &t2))?;
    Ok((p, n))
}

impl TubeFrame {
    pub fn build(surface: &Surface, domain: &DomainBox) -> Result<TubeFrame> {
        let crate::geometry::AmbientSpace::FlatPullback { psi } = &surface.ambient else {
            return Err(Error::Config(
                "normal-tube frames require a flat-pullback ambient space".into(),
            ));
        };
        let mut seeds = Vec::new();
        for z in domain.grid(25, 25) {
            let yf = surface.f.eval(&z)?;
            let x = psi.eval(&yf)?;
            seeds.push((z, [x[0], x[1], x[2]]));
        }
        Ok(TubeFrame { seeds })
    }

    /// Solve `F(z, s) = x` by Newton iteration from the nearest seed.
    fn locate(&self, psi: &SmoothMap, f: &SmoothMap, x: [f64; 3]) -> Result<([f64; 2], f64)> {
        let mut best = self.seeds[0];
        let mut best_d = f64::INFINITY;
        for &(z, px) in &self.seeds {
            let d = (0..3).map(|m| (px[m] - x[m]).powi(2)).sum::<f64>();
            if d < best_d {
                best_d = d;
                best = (z, px);
            }
        }
        let mut z = best.0;
        let mut s = 0.0;
        for iter in 0..60 {
            let (p, n) = surface_and_normal(psi, f, z, 2)?;
            if iter == 0 {
                s = (0..3).map(|m| n[m].value() * (x[m] - p[m].value())).sum();
            }
            let r: [f64; 3] = std::array::from_fn(|m| p[m].value() + s * n[m].value() - x[m]);
            let res = (r[0] * r[0] + r[1] * r[1] + r[2] * r[2]).sqrt();
            if res < 1e-13 * (1.0 + crate::linalg::norm3(&x)) {
                // exact zero keeps the surface case on the exact-jet path: a
                // residual-sized s would spuriously spend a jet order on the
                // (otherwise vanishing) s·∂n terms
                if s.abs() < 1e-12 {
                    s = 0.0;
                }
                return Ok((z, s));
            }
            let jac: [[f64; 3]; 3] = std::array::from_fn(|m| {
                [
                    p[m].d1(0) + s * n[m].d1(0),
                    p[m].d1(1) + s * n[m].d1(1),
                    n[m].value(),
                ]
            });
            let inv = crate::linalg::inv3(&jac).ok_or_else(|| {
                Error::Singular(format!(
                    "degenerate normal-tube inversion near z = {z:?}, s = {s:.4}"
                ))
            })?;
            let step = crate::linalg::mat3_vec(&inv, &r);
            z[0] -= step[0];
            z[1] -= step[1];
            s -= step[2];
        }
        Err(Error::Singular(format!(
            "normal-tube inversion did not converge for x = {x:?}"
        )))
    }

    /// Frame component jets in the `y` chart at the ambient point `y`.
    pub fn frame_jets(
        &self,
        psi: &SmoothMap,
        f: &SmoothMap,
        y: [f64; 3],
    ) -> Result<[[Jet3; 3]; 3]> {
        let x_vec = psi.eval(&y)?;
        let x0 = [x_vec[0], x_vec[1], x_vec[2]];
        let (z, s) = self.locate(psi, f, x0)?;

        // (z, s)-jets of the tube chart and the frame in x-components
        let (p, n) = surface_and_normal(psi, f, z, 3)?;
        let s_jet = Jet3::variable(s, 2, 3, 3);
        let fmap: [Jet3; 3] = std::array::from_fn(|m| p[m] + s_jet * n[m]);
        let chart_inv = invert_map3(&fmap, [z[0], z[1], s])?;

        let w1: [Jet3; 3] = std::array::from_fn(|m| fmap[m].partial(0));
        let e1 = jnormalize(&w1)?;
        let w2: [Jet3; 3] = std::array::from_fn(|m| fmap[m].partial(1));
        let proj = jdot(&w2, &e1);
        let e2 = jnormalize(&std::array::from_fn(|m| w2[m] - proj * e1[m]))?;
        let bx = [e1, e2, n];

        // push to functions of x, then to y-components through dψ⁻¹
        let psy_vec = psi.eval_jet(&y, 3)?;
        let psy: [Jet3; 3] = [psy_vec[0], psy_vec[1], psy_vec[2]];
        let jpsi: [[Jet3; 3]; 3] =
            std::array::from_fn(|m| std::array::from_fn(|k| psy[m].partial(k)));
        let jpsi_inv = jinv3(&jpsi)?;

        let mut out = [[Jet3::zero(3); 3]; 3];
        for j in 0..3 {
            let bx_of_y: [Jet3; 3] =
                std::array::from_fn(|m| bx[j][m].compose(&chart_inv).compose(&psy));
            for k in 0..3 {
                let mut acc = Jet3::zero(3);
                for m in 0..3 {
                    acc = acc + jpsi_inv[k][m] * bx_of_y[m];
                }
                out[j][k] = acc;
            }
        }
        Ok(out)
    }
}
