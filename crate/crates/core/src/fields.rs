//! Vector fields in frame components: ambient fields `u = u¹b¹ + u²b² + u³b³`
//! given by scalar components near M, and surface fields `v = v¹b_z¹ + v²b_z²`.

use crate::error::{Error, Result};
use crate::expr::SmoothMap;
use crate::geometry::{Geometry, SurfaceJets};
use crate::jet::Jet3;

/// Closed-form ambient field: three frame-component scalars of `y`.
#[derive(Clone, Debug)]
pub struct AmbientField {
    pub maps: SmoothMap,
}

impl AmbientField {
    pub fn new(maps: SmoothMap) -> Result<AmbientField> {
        if maps.codomain_dim() != 3 || maps.domain_dim() != 3 {
            return Err(Error::Config(
                "an ambient field needs three components over three ambient variables".into(),
            ));
        }
        Ok(AmbientField { maps })
    }

    /// y-jets of the three frame components at `y`.
    pub fn jets_at(&self, y: &[f64; 3], order: usize) -> Result<[Jet3; 3]> {
        let jets = self.maps.eval_jet(y, order)?;
        Ok([jets[0], jets[1], jets[2]])
    }

    /// z-jets of the restriction `v^j(z) = u^j(f(z))` for the tangential pair.
    pub fn restriction_jets(&self, sj: &SurfaceJets) -> Result<[Jet3; 2]> {
        let u = self.jets_at(&sj.y(), 3)?;
        Ok([sj.restrict(&u[0]), sj.restrict(&u[1])])
    }

    /// Check the tangency flag `u³ = 0 on M` on a sample grid.
    pub fn validate_tangent(&self, geo: &Geometry) -> Result<()> {
        for z in geo.domain.grid(5, 5) {
            let y = geo.surface.f.eval(&z)?;
            let vals = self.maps.eval(&y)?;
            if vals[2].abs() > 1e-10 {
                return Err(Error::Inconsistent(format!(
                    "field flagged tangent has u3 = {:.3e} at z = {z:?}",
                    vals[2]
                )));
            }
        }
        Ok(())
    }
}

/// Closed-form surface field: two frame-component scalars of `z`.
#[derive(Clone, Debug)]
pub struct SurfaceField {
    pub maps: SmoothMap,
}

impl SurfaceField {
    pub fn new(maps: SmoothMap) -> Result<SurfaceField> {
        if maps.codomain_dim() != 2 || maps.domain_dim() != 2 {
            return Err(Error::Config(
                "a surface field needs two components over two surface variables".into(),
            ));
        }
        Ok(SurfaceField { maps })
    }

    pub fn parse(sources: [&str; 2], params: &[(&str, f64)]) -> Result<SurfaceField> {
        SurfaceField::new(SmoothMap::parse(&sources, &["z1", "z2"], params)?)
    }

    pub fn jets_at(&self, z: &[f64; 2], order: usize) -> Result<[Jet3; 2]> {
        let jets = self.maps.eval_jet(z, order)?;
        Ok([jets[0], jets[1]])
    }
}
