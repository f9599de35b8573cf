//! Extensions of surface fields into the tubular neighborhood by integrating
//! the first-order PDE systems along integral curves of `b³` (method of
//! characteristics), with jet transport so tangential derivatives of the
//! extended components stay exact.
//!
//! The integration state along each normal curve is jet-valued: order-2
//! z-jets of the curve position and of the ODE-defined components, so that a
//! query can assemble full (z, s)-jets by a short Picard iteration (formal
//! integration in the s variable of the same right-hand side) and push them
//! to ambient coordinates through jet inversion of the chart. On M the state
//! is the initial data itself, which keeps the decomposition inputs exact.

use std::collections::BTreeMap;
use std::sync::{Arc, Mutex};

use crate::error::{Error, Result};
use crate::expr::SmoothMap;
use crate::fields::{AmbientField, SurfaceField};
use crate::geometry::{AmbientSpace, Geometry, SurfaceJets};
use crate::jet::{invert_map3, Jet3};
use crate::linalg::{det3, jinv3, jmat3_vec};
use crate::ode::{Dopri5, Solution};

const JET_LEN: usize = 10; // coefficients of a 2-variable, order-2 jet block

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ExtensionKind {
    /// `b³(u³) = α1 u¹ + α2 u²`: div(u) restricts to div(v).
    Compatible,
    /// `b³(u³) − (t11+t22) u³ = F`: div(u) = 0 throughout the tube.
    DivergenceFree,
    /// `b³(u^j) = Σ t_jk u^k` plus the compatible (or divergence-free)
    /// equation for u³: curl(u) = rot(v) b³ on M.
    CurlNormal { divfree: bool },
}

impl ExtensionKind {
    fn carries_tangential_state(&self) -> bool {
        matches!(self, ExtensionKind::CurlNormal { .. })
    }

    pub fn name(&self) -> &'static str {
        match self {
            ExtensionKind::Compatible => "compatible",
            ExtensionKind::DivergenceFree => "divergence-free",
            ExtensionKind::CurlNormal { divfree: false } => "curl-normal",
            ExtensionKind::CurlNormal { divfree: true } => "curl-normal-divfree",
        }
    }
}

/// How `u¹, u²` extend off M for the compatible and divergence-free kinds.
#[derive(Clone, Debug)]
pub enum TangentialRule {
    /// Frame components constant along each normal curve.
    ConstantAlongNormal,
    /// User rule `(z1, z2, s) ↦ (u¹, u²)`; must restrict to `v` at `s = 0`.
    ClosedForm(SmoothMap),
}

/// Chart of the tube: `Φ(z, s)` = flow of `b³` for time `s` from `f(z)`.
#[derive(Debug)]
pub struct NormalChart {
    pub geo: Arc<Geometry>,
    pub s_max: f64,
    grid: Vec<[f64; 2]>,
}

/// Signed Riemannian volume distortion of the chart; a sign change or
/// collapse along a curve means the tube folds over.
fn fold_measure(geo: &Geometry, pos: &[Jet3; 3], dpos: &[f64; 3]) -> Result<f64> {
    let cols: [[f64; 3]; 3] = std::array::from_fn(|m| [pos[m].d1(0), pos[m].d1(1), dpos[m]]);
    let d = det3(&cols);
    let y = [pos[0].value(), pos[1].value(), pos[2].value()];
    let weight = match &geo.surface.ambient {
        AmbientSpace::FlatPullback { psi } => {
            let pj = psi.eval_jet(&y, 1)?;
            let jac: [[f64; 3]; 3] = std::array::from_fn(|m| std::array::from_fn(|k| pj[m].d1(k)));
            det3(&jac)
        }
        AmbientSpace::ExplicitMetric { .. } => {
            let g = geo.surface.ambient.metric_jets(&y)?;
            let vals: [[f64; 3]; 3] =
                std::array::from_fn(|k| std::array::from_fn(|l| g[k][l].value()));
            det3(&vals).sqrt()
        }
    };
    Ok(d * weight)
}

fn pack(jets: &[Jet3]) -> Vec<f64> {
    let mut out = Vec::with_capacity(jets.len() * JET_LEN);
    for j in jets {
        out.extend_from_slice(&j.coeffs()[..JET_LEN]);
    }
    out
}

fn unpack(buf: &[f64], count: usize) -> Vec<Jet3> {
    (0..count)
        .map(|c| {
            let mut coeffs = [0.0; crate::jet::NCOEFF];
            coeffs[..JET_LEN].copy_from_slice(&buf[c * JET_LEN..(c + 1) * JET_LEN]);
            Jet3::from_parts(2, 2, coeffs)
        })
        .collect()
}

/// Position-only transport: `dY/ds = b³(Y)` as z-jets.
fn position_rhs(geo: &Geometry, pos: &[Jet3; 3]) -> Result<[Jet3; 3]> {
    let y = [pos[0].value(), pos[1].value(), pos[2].value()];
    let frame = geo.frame_jets(y)?;
    Ok(std::array::from_fn(|m| frame[2][m].compose(pos)))
}

pub fn build_normal_chart(
    geo: Arc<Geometry>,
    grid: (usize, usize),
    s_max: f64,
) -> Result<NormalChart> {
    let nodes = geo.domain.grid(grid.0, grid.1);
    let ode = Dopri5 {
        h_max: (s_max / 20.0).max(1e-4),
        ..Default::default()
    };
    for z in &nodes {
        let fj = geo.surface.f.eval_jet(z, 2)?;
        let pos0: [Jet3; 3] = [fj[0], fj[1], fj[2]];
        let d0 = position_rhs(&geo, &pos0)?;
        let m0 = fold_measure(&geo, &pos0, &[d0[0].value(), d0[1].value(), d0[2].value()])?;
        for dir in [1.0, -1.0] {
            let rhs = |_s: f64, state: &[f64]| -> Result<Vec<f64>> {
                let jets = unpack(state, 3);
                let pos = [jets[0], jets[1], jets[2]];
                let d = position_rhs(&geo, &pos)?;
                Ok(pack(&d))
            };
            let mut last_good = 0.0;
            let sol = match ode.integrate(rhs, 0.0, &pack(&pos0), dir * s_max, |s, state| {
                if state.iter().all(|x| x.is_finite()) {
                    last_good = s;
                    Ok(())
                } else {
                    Err(Error::OdeFailure("chart state diverged".into()))
                }
            }) {
                Ok(sol) => sol,
                Err(Error::OdeFailure(msg)) => {
                    return Err(Error::FoldOver {
                        s: last_good,
                        detail: format!("normal flow broke down past this point ({msg})"),
                    })
                }
                Err(e) => return Err(e),
            };
            // Dense degeneracy sweep. The volume distortion can vanish to
            // even order (the sphere collapses like (1+s)² at its center),
            // so a sign test alone is not enough.
            const SWEEP: usize = 400;
            for k in 1..=SWEEP {
                let s = dir * s_max * (k as f64) / (SWEEP as f64);
                let jets = unpack(&sol.eval(s)?, 3);
                let pos = [jets[0], jets[1], jets[2]];
                let d = position_rhs(&geo, &pos)?;
                let m = fold_measure(&geo, &pos, &[d[0].value(), d[1].value(), d[2].value()])?;
                if m * m0 <= 0.0 || (m / m0).abs() < 1e-4 {
                    return Err(Error::FoldOver {
                        s,
                        detail: format!(
                            "volume distortion collapsed to {:.3e} of its on-surface value",
                            (m / m0).abs()
                        ),
                    });
                }
            }
        }
    }
    Ok(NormalChart {
        geo,
        s_max,
        grid: nodes,
    })
}

impl NormalChart {
    /// `(z, s)`-jets of `Φ` at a point of the tube (z-jets order 2, s-jets
    /// filled by Picard iteration of the flow equation).
    pub fn position_jets(&self, z: [f64; 2], s: f64) -> Result<[Jet3; 3]> {
        if s.abs() > self.s_max + 1e-12 {
            return Err(Error::OutOfTube(format!(
                "|s| = {} exceeds chart half-width {}",
                s.abs(),
                self.s_max
            )));
        }
        let state0 = if s == 0.0 {
            let fj = self.geo.surface.f.eval_jet(&z, 3)?;
            [fj[0], fj[1], fj[2]]
        } else {
            let ode = Dopri5 {
                h_max: (self.s_max / 20.0).max(1e-4),
                ..Default::default()
            };
            let fj = self.geo.surface.f.eval_jet(&z, 2)?;
            let rhs = |_s: f64, state: &[f64]| -> Result<Vec<f64>> {
                let jets = unpack(state, 3);
                let pos = [jets[0], jets[1], jets[2]];
                Ok(pack(&position_rhs(&self.geo, &pos)?))
            };
            let sol = ode.integrate(rhs, 0.0, &pack(&[fj[0], fj[1], fj[2]]), s, |_, _| Ok(()))?;
            let jets = unpack(&sol.y_end, 3);
            [jets[0], jets[1], jets[2]]
        };
        // Picard in s around the transported profile
        let mut pos = state0;
        for _ in 0..3 {
            let d = position_rhs(&self.geo, &pos)?;
            pos = std::array::from_fn(|m| state0[m] + d[m].integrate_var(2));
        }
        Ok(pos)
    }

    /// `|g0(∂Φ/∂s, ∂Φ/∂s) − 1|` at a tube point; the flow is unit speed.
    pub fn unit_speed_residual(&self, z: [f64; 2], s: f64) -> Result<f64> {
        let pos = self.position_jets(z, s)?;
        let y = [pos[0].value(), pos[1].value(), pos[2].value()];
        let aj = self.geo.ambient_jets(y)?;
        let dpos: [Jet3; 3] = std::array::from_fn(|m| pos[m].partial(2));
        Ok((aj.inner(&dpos, &dpos).value() - 1.0).abs())
    }

    pub fn grid_nodes(&self) -> &[[f64; 2]] {
        &self.grid
    }
}

/// A surface field extended into the tube by one of the PDE systems.
pub struct ExtendedField {
    pub geo: Arc<Geometry>,
    pub kind: ExtensionKind,
    pub v: SurfaceField,
    pub rule: TangentialRule,
    pub s_max: f64,
    ode: Dopri5,
    curves: Mutex<BTreeMap<[u64; 2], Arc<Solution>>>,
    curves_back: Mutex<BTreeMap<[u64; 2], Arc<Solution>>>,
}

/// Everything known about the extension at one tube point.
pub struct ExtPoint {
    pub y: [f64; 3],
    /// `(z, s)`-jets of the chart position
    pub pos: [Jet3; 3],
    /// `(z, s)`-jets of the frame components of u
    pub u_zs: [Jet3; 3],
    /// ambient `y`-jets of the frame components (order 2)
    pub u_y: [Jet3; 3],
}

pub fn extend_compatible(
    geo: Arc<Geometry>,
    v: SurfaceField,
    rule: TangentialRule,
    s_max: f64,
) -> Result<ExtendedField> {
    ExtendedField::new(geo, ExtensionKind::Compatible, v, rule, s_max, 1e-11)
}

pub fn extend_divfree(
    geo: Arc<Geometry>,
    v: SurfaceField,
    rule: TangentialRule,
    s_max: f64,
) -> Result<ExtendedField> {
    ExtendedField::new(geo, ExtensionKind::DivergenceFree, v, rule, s_max, 1e-11)
}

pub fn extend_curl_normal(
    geo: Arc<Geometry>,
    v: SurfaceField,
    divfree: bool,
    s_max: f64,
) -> Result<ExtendedField> {
    ExtendedField::new(
        geo,
        ExtensionKind::CurlNormal { divfree },
        v,
        TangentialRule::ConstantAlongNormal,
        s_max,
        1e-11,
    )
}

impl ExtendedField {
    pub fn new(
        geo: Arc<Geometry>,
        kind: ExtensionKind,
        v: SurfaceField,
        rule: TangentialRule,
        s_max: f64,
        tol: f64,
    ) -> Result<ExtendedField> {
        if let TangentialRule::ClosedForm(map) = &rule {
            if map.domain_dim() != 3 || map.codomain_dim() != 2 {
                return Err(Error::Config(
                    "a tangential rule maps (z1, z2, s) to two components".into(),
                ));
            }
            // restriction identity: the rule at s = 0 must reproduce v
            for z in geo.domain.grid(5, 5) {
                let r = map.eval(&[z[0], z[1], 0.0])?;
                let vv = v.maps.eval(&z)?;
                if (r[0] - vv[0]).abs() > 1e-10 || (r[1] - vv[1]).abs() > 1e-10 {
                    return Err(Error::Config(format!(
                        "tangential rule does not restrict to v at z = {z:?}"
                    )));
                }
            }
        }
        Ok(ExtendedField {
            geo,
            kind,
            v,
            rule,
            s_max,
            ode: Dopri5 {
                rtol: tol,
                atol: tol,
                h_max: (s_max / 10.0).max(1e-4),
                ..Default::default()
            },
            curves: Mutex::new(BTreeMap::new()),
            curves_back: Mutex::new(BTreeMap::new()),
        })
    }

    fn state_count(&self) -> usize {
        if self.kind.carries_tangential_state() {
            6
        } else {
            4
        }
    }

    /// Tangential components and their s-derivatives at a point of the
    /// evaluation, as jets in the active variables.
    fn tangential_components(
        &self,
        z_base: [f64; 2],
        s: f64,
        u12_state: Option<&[Jet3; 2]>,
        picard: bool,
        order: usize,
    ) -> Result<([Jet3; 2], [Jet3; 2])> {
        if let Some(state) = u12_state {
            // curl-normal: state carries them; s-derivatives come from the ODE
            // and are filled in by the caller
            return Ok((*state, [Jet3::zero(2), Jet3::zero(2)]));
        }
        match &self.rule {
            TangentialRule::ConstantAlongNormal => {
                let jets = self.v.maps.eval_jet(&z_base, order)?;
                Ok(([jets[0], jets[1]], [Jet3::zero(2), Jet3::zero(2)]))
            }
            TangentialRule::ClosedForm(map) => {
                let args = [
                    Jet3::variable(z_base[0], 0, 3, order),
                    Jet3::variable(z_base[1], 1, 3, order),
                    Jet3::variable(s, 2, 3, order),
                ];
                let jets = map.eval_on_jets(&args)?;
                let fix = |j: &Jet3| if picard { *j } else { j.restrict_var(2) };
                Ok((
                    [fix(&jets[0]), fix(&jets[1])],
                    [fix(&jets[0].partial(2)), fix(&jets[1].partial(2))],
                ))
            }
        }
    }

    /// Shared right-hand side: works on z-jets at fixed s (transport mode)
    /// and on (z, s)-jets (Picard mode); the jet algebra is identical.
    fn rhs_jets(
        &self,
        z_base: [f64; 2],
        s: f64,
        pos: &[Jet3; 3],
        u3: &Jet3,
        u12_state: Option<&[Jet3; 2]>,
        picard: bool,
    ) -> Result<([Jet3; 3], Jet3, Option<[Jet3; 2]>)> {
        let y = [pos[0].value(), pos[1].value(), pos[2].value()];
        let aj = self.geo.ambient_jets(y)?;
        let rz = |phi: &Jet3| phi.compose(pos);

        let c3: [Jet3; 3] = std::array::from_fn(|m| rz(&aj.frame[2][m]));
        let dpos = c3;

        let order = if picard { 3 } else { 2 };
        let (u12, mut du12_ds) = self.tangential_components(z_base, s, u12_state, picard, order)?;

        let alpha = [rz(&aj.alpha[0]), rz(&aj.alpha[1])];
        let t11 = rz(&aj.t[0][0]);
        let t12 = rz(&aj.t[0][1]);
        let t22 = rz(&aj.t[1][1]);

        let du12 = if self.kind.carries_tangential_state() {
            let r1 = t11 * u12[0] + t12 * u12[1];
            let r2 = t12 * u12[0] + t22 * u12[1];
            du12_ds = [r1, r2];
            Some([r1, r2])
        } else {
            None
        };

        let divfree = matches!(
            self.kind,
            ExtensionKind::DivergenceFree | ExtensionKind::CurlNormal { divfree: true }
        );

        let du3 = if divfree {
            // b³(u³) = (t11+t22) u³ + (γ2+α1) u¹ − (γ1−α2) u² − b¹(u¹) − b²(u²)
            let g1 = rz(&aj.gam[0]);
            let g2 = rz(&aj.gam[1]);
            let dphi: [[Jet3; 3]; 3] =
                std::array::from_fn(|m| [pos[m].partial(0), pos[m].partial(1), dpos[m]]);
            let dphi_inv = jinv3(&dphi)?;
            let mut tang_sum = Jet3::zero(2);
            for k in 0..2 {
                let ck: [Jet3; 3] = std::array::from_fn(|m| rz(&aj.frame[k][m]));
                let e = jmat3_vec(&dphi_inv, &ck);
                let bk_uk = e[0] * u12[k].partial(0) + e[1] * u12[k].partial(1) + e[2] * du12_ds[k];
                tang_sum = tang_sum + bk_uk;
            }
            (t11 + t22) * *u3 + (g2 + alpha[0]) * u12[0] - (g1 - alpha[1]) * u12[1] - tang_sum
        } else {
            alpha[0] * u12[0] + alpha[1] * u12[1]
        };

        Ok((dpos, du3, du12))
    }

    fn initial_state(&self, z: [f64; 2], order: usize) -> Result<Vec<Jet3>> {
        let fj = self.geo.surface.f.eval_jet(&z, order)?;
        let mut state = vec![fj[0], fj[1], fj[2], Jet3::zero(2)];
        if self.kind.carries_tangential_state() {
            let vj = self.v.maps.eval_jet(&z, order)?;
            state.push(vj[0]);
            state.push(vj[1]);
        }
        Ok(state)
    }

    fn curve_to(&self, z: [f64; 2], s: f64) -> Result<Arc<Solution>> {
        let key = [z[0].to_bits(), z[1].to_bits()];
        let cache = if s >= 0.0 {
            &self.curves
        } else {
            &self.curves_back
        };
        if let Some(sol) = cache.lock().unwrap().get(&key) {
            return Ok(sol.clone());
        }
        let n = self.state_count();
        let state0 = self.initial_state(z, 2)?;
        let rhs = |s_cur: f64, buf: &[f64]| -> Result<Vec<f64>> {
            let jets = unpack(buf, n);
            let pos = [jets[0], jets[1], jets[2]];
            let u3 = jets[3];
            let u12 = if n == 6 {
                Some([jets[4], jets[5]])
            } else {
                None
            };
            let (dpos, du3, du12) = self.rhs_jets(z, s_cur, &pos, &u3, u12.as_ref(), false)?;
            let mut out = vec![dpos[0], dpos[1], dpos[2], du3];
            if let Some(d) = du12 {
                out.push(d[0]);
                out.push(d[1]);
            }
            Ok(pack(&out))
        };
        let target = if s >= 0.0 { self.s_max } else { -self.s_max };
        let sol = Arc::new(
            self.ode
                .integrate(rhs, 0.0, &pack(&state0), target, |_, st| {
                    if st.iter().all(|x| x.is_finite()) {
                        Ok(())
                    } else {
                        Err(Error::OdeFailure("extension state diverged".into()))
                    }
                })?,
        );
        cache.lock().unwrap().insert(key, sol.clone());
        Ok(sol)
    }

    /// Full jet data at tube point `(z, s)`.
    pub fn point_jets(&self, z: [f64; 2], s: f64) -> Result<ExtPoint> {
        if s.abs() > self.s_max + 1e-12 {
            return Err(Error::OutOfTube(format!(
                "|s| = {} exceeds extension half-width {}",
                s.abs(),
                self.s_max
            )));
        }
        let n = self.state_count();
        let state: Vec<Jet3> = if s == 0.0 {
            self.initial_state(z, 3)?
        } else {
            unpack(&self.curve_to(z, s)?.eval(s)?, n)
        };
        let pos0: [Jet3; 3] = [state[0], state[1], state[2]];
        let u3_0 = state[3];
        let u12_0: Option<[Jet3; 2]> = if n == 6 {
            Some([state[4], state[5]])
        } else {
            None
        };

        // Picard: fill the s-blocks of all transported jets
        let mut pos = pos0;
        let mut u3 = u3_0;
        let mut u12 = u12_0;
        for _ in 0..3 {
            let (dpos, du3, du12) = self.rhs_jets(z, s, &pos, &u3, u12.as_ref(), true)?;
            pos = std::array::from_fn(|m| pos0[m] + dpos[m].integrate_var(2));
            u3 = u3_0 + du3.integrate_var(2);
            if let (Some(base), Some(d)) = (u12_0.as_ref(), du12) {
                u12 = Some([
                    base[0] + d[0].integrate_var(2),
                    base[1] + d[1].integrate_var(2),
                ]);
            }
        }

        let (u1_zs, u2_zs) = match u12 {
            Some(pair) => (pair[0], pair[1]),
            None => {
                let (pair, _) = self.tangential_components(z, s, None, true, 3)?;
                (pair[0], pair[1])
            }
        };
        let u_zs = [u1_zs, u2_zs, u3];

        let y = [pos[0].value(), pos[1].value(), pos[2].value()];
        let chart_inv = invert_map3(&pos, [z[0], z[1], s])?;
        let u_y: [Jet3; 3] = std::array::from_fn(|j| u_zs[j].compose(&chart_inv));

        Ok(ExtPoint { y, pos, u_zs, u_y })
    }

    /// Ambient component jets on M (exact: no integration involved).
    pub fn jets_on_m(&self, z: [f64; 2]) -> Result<[Jet3; 3]> {
        Ok(self.point_jets(z, 0.0)?.u_y)
    }

    pub fn u_values(&self, z: [f64; 2], s: f64) -> Result<[f64; 3]> {
        let p = self.point_jets(z, s)?;
        Ok([p.u_y[0].value(), p.u_y[1].value(), p.u_y[2].value()])
    }

    /// Residual of the defining PDE system at a tube point (max over the
    /// equations of the kind).
    pub fn pde_residual(&self, z: [f64; 2], s: f64) -> Result<f64> {
        let p = self.point_jets(z, s)?;
        let aj = self.geo.ambient_jets(p.y)?;
        let b3 = |phi: &Jet3| aj.frame_deriv(phi, 2).value();
        let u = [p.u_y[0].value(), p.u_y[1].value(), p.u_y[2].value()];
        let alpha = [aj.alpha[0].value(), aj.alpha[1].value()];
        let t = [
            [aj.t[0][0].value(), aj.t[0][1].value()],
            [aj.t[1][0].value(), aj.t[1][1].value()],
        ];
        let mut res: f64 = 0.0;
        match self.kind {
            ExtensionKind::Compatible => {
                res = (b3(&p.u_y[2]) - alpha[0] * u[0] - alpha[1] * u[1]).abs();
            }
            ExtensionKind::DivergenceFree => {
                res = crate::operators::div_ambient(&aj, &p.u_y)?.abs();
            }
            ExtensionKind::CurlNormal { divfree } => {
                res = res.max((b3(&p.u_y[0]) - t[0][0] * u[0] - t[0][1] * u[1]).abs());
                res = res.max((b3(&p.u_y[1]) - t[0][1] * u[0] - t[1][1] * u[1]).abs());
                if divfree {
                    res = res.max(crate::operators::div_ambient(&aj, &p.u_y)?.abs());
                } else {
                    res = res.max((b3(&p.u_y[2]) - alpha[0] * u[0] - alpha[1] * u[1]).abs());
                }
            }
        }
        Ok(res)
    }

    /// `max_j |u^j − v^j| + |u³|` on M.
    pub fn restriction_residual(&self, z: [f64; 2]) -> Result<f64> {
        let u = self.u_values(z, 0.0)?;
        let vv = self.v.maps.eval(&z)?;
        Ok((u[0] - vv[0])
            .abs()
            .max((u[1] - vv[1]).abs())
            .max(u[2].abs()))
    }
}

/// One field, two possible origins: a closed-form ambient field or an
/// ODE-built extension. Decomposition consumes either through this enum.
pub enum FieldSource {
    Closed(AmbientField),
    Extended(Arc<ExtendedField>),
}

impl FieldSource {
    /// y-jets of the frame components at the surface point.
    pub fn jets_on_m(&self, sj: &SurfaceJets) -> Result<[Jet3; 3]> {
        match self {
            FieldSource::Closed(f) => f.jets_at(&sj.y(), 3),
            FieldSource::Extended(e) => e.jets_on_m(sj.z),
        }
    }

    /// z-jets of the restriction `v`.
    pub fn restriction_jets(&self, sj: &SurfaceJets) -> Result<[Jet3; 2]> {
        match self {
            FieldSource::Closed(f) => f.restriction_jets(sj),
            FieldSource::Extended(e) => e.v.jets_at(&sj.z, 3),
        }
    }

    pub fn describe(&self) -> String {
        match self {
            FieldSource::Closed(_) => "closed-form".into(),
            FieldSource::Extended(e) => e.kind.name().into(),
        }
    }
}
