use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{Instant, MeasureScalar, SpacetimePoint, Velocity, GEOMETRY_TOL};

/// Parameters of the lattice realization. Units: ħ = c = 1, lengths in
/// seconds, mass in 1/sec.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ModelConfig {
    pub mass: MeasureScalar,
    /// Points per axis.
    pub lattice: usize,
    pub spacing: MeasureScalar,
    /// The constructing observer u0.
    pub observer: Velocity,
    /// A u0-instant; the lattice sits on it.
    pub instant: Instant,
    /// Lattice center is the projection of this point onto `instant`.
    pub origin: SpacetimePoint,
    /// Oversampling factor for the general boost interpolation.
    pub pad: usize,
}

impl Default for ModelConfig {
    fn default() -> Self {
        Self::standard()
    }
}

impl ModelConfig {
    /// N = 32, a = 0.25 sec, m = 1/sec, pad = 2, fiducial observer, lattice
    /// centered at the fiducial origin.
    pub fn standard() -> Self {
        let u0 = Velocity::fiducial();
        let o = SpacetimePoint::origin();
        Self {
            mass: MeasureScalar::per_second(1.0),
            lattice: 32,
            spacing: MeasureScalar::seconds(0.25),
            observer: u0,
            instant: Instant::new(u0, o),
            origin: o,
            pad: 2,
        }
    }

    pub fn with_lattice(mut self, n: usize) -> Self {
        self.lattice = n;
        self
    }

    pub fn with_spacing(mut self, a: f64) -> Self {
        self.spacing = MeasureScalar::seconds(a);
        self
    }

    pub fn with_mass(mut self, m: f64) -> Self {
        self.mass = MeasureScalar::per_second(m);
        self
    }

    pub fn with_pad(mut self, pad: usize) -> Self {
        self.pad = pad;
        self
    }

    /// Moves the whole frame: observer, instant through `origin`, origin.
    pub fn with_frame(mut self, observer: Velocity, origin: SpacetimePoint) -> Self {
        self.observer = observer;
        self.origin = origin;
        self.instant = Instant::new(observer, origin);
        self
    }

    pub fn validate(&self) -> Result<()> {
        let n = self.lattice;
        if n < 8 || !n.is_power_of_two() {
            return Err(Error::Config(format!(
                "lattice size must be a power of two >= 8, got {n}"
            )));
        }
        if self.pad < 1 {
            return Err(Error::Config("pad must be at least 1".into()));
        }
        let a = self
            .spacing
            .value_in(1)
            .map_err(|_| Error::Config("spacing must be a time span (sec)".into()))?;
        let m = self
            .mass
            .value_in(-1)
            .map_err(|_| Error::Config("mass must carry dimension 1/sec".into()))?;
        if !(a > 0.0 && a.is_finite()) {
            return Err(Error::Config(format!("spacing must be positive, got {a}")));
        }
        if !(m > 0.0 && m.is_finite()) {
            return Err(Error::Config(format!("mass must be positive, got {m}")));
        }
        if std::f64::consts::PI / a < 8.0 * m {
            return Err(Error::Config(format!(
                "momentum cutoff pi/a = {:.4} is below 8 m = {:.4}",
                std::f64::consts::PI / a,
                8.0 * m
            )));
        }
        if !self
            .instant
            .observer()
            .approx_eq(&self.observer, GEOMETRY_TOL)
        {
            return Err(Error::Config(
                "instant does not belong to the constructing observer".into(),
            ));
        }
        Ok(())
    }

    pub fn spacing_sec(&self) -> f64 {
        self.spacing.value()
    }

    pub fn mass_per_sec(&self) -> f64 {
        self.mass.value()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn standard_is_valid() {
        ModelConfig::standard().validate().unwrap();
    }

    #[test]
    fn rejects_bad_sizes() {
        for n in [0, 4, 7, 12, 33] {
            assert!(matches!(
                ModelConfig::standard().with_lattice(n).validate(),
                Err(Error::Config(_))
            ));
        }
        assert!(ModelConfig::standard().with_pad(0).validate().is_err());
        assert!(ModelConfig::standard().with_spacing(-0.1).validate().is_err());
        assert!(ModelConfig::standard().with_mass(0.0).validate().is_err());
    }

    #[test]
    fn cutoff_rule() {
        // π/a = 8m exactly passes, slightly coarser fails.
        let a = std::f64::consts::PI / 8.0;
        assert!(ModelConfig::standard().with_spacing(a).validate().is_ok());
        assert!(ModelConfig::standard()
            .with_spacing(a * 1.001)
            .validate()
            .is_err());
    }

    #[test]
    fn dimension_errors() {
        let mut cfg = ModelConfig::standard();
        cfg.mass = MeasureScalar::seconds(1.0);
        assert!(cfg.validate().is_err());
    }
}
