//! Elements of 𝐌 and its measure-line quotients.
//!
//! Every vector type stores four components relative to one hidden
//! orthonormal fiducial basis `e0..e3` with `e0·e0 = -1 sec²` and `e0` the
//! fiducial future direction. Arithmetic never looks at individual components;
//! they surface only through the explicit `fiducial_components` and
//! `coordinates_in` queries.

use std::ops::{Add, AddAssign, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

use super::MeasureScalar;
use crate::error::{Error, Result};

/// Relative tolerance for geometry-level equalities.
pub const GEOMETRY_TOL: f64 = 1e-12;

pub(crate) type Raw = [f64; 4];

#[inline]
pub(crate) fn minkowski(a: &Raw, b: &Raw) -> f64 {
    -a[0] * b[0] + a[1] * b[1] + a[2] * b[2] + a[3] * b[3]
}

#[inline]
pub(crate) fn euclid_sq(a: &Raw) -> f64 {
    a.iter().map(|x| x * x).sum()
}

#[inline]
pub(crate) fn axpy(alpha: f64, x: &Raw, y: &Raw) -> Raw {
    [
        alpha * x[0] + y[0],
        alpha * x[1] + y[1],
        alpha * x[2] + y[2],
        alpha * x[3] + y[3],
    ]
}

#[inline]
pub(crate) fn scale(alpha: f64, x: &Raw) -> Raw {
    [alpha * x[0], alpha * x[1], alpha * x[2], alpha * x[3]]
}

mod sealed {
    pub trait Sealed {}
}

/// A vector of 𝐌 ⊗ 𝐈^(DIM-1): shares the Lorentz product with 𝐌 and carries
/// its measure-line exponent in the type.
pub trait MinkowskiVector: sealed::Sealed + Copy {
    const DIM: i32;

    #[doc(hidden)]
    fn raw(&self) -> Raw;

    #[doc(hidden)]
    fn from_raw(raw: Raw) -> Self;
}

macro_rules! linear_vector {
    ($name:ident, $dim:expr, $doc:literal) => {
        #[doc = $doc]
        #[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
        pub struct $name(pub(crate) Raw);

        impl sealed::Sealed for $name {}

        impl MinkowskiVector for $name {
            const DIM: i32 = $dim;
            fn raw(&self) -> Raw {
                self.0
            }
            fn from_raw(raw: Raw) -> Self {
                Self(raw)
            }
        }

        impl $name {
            pub const ZERO: Self = Self([0.0; 4]);

            /// Builds the vector from its components in the fiducial basis.
            pub const fn from_fiducial(components: [f64; 4]) -> Self {
                Self(components)
            }

            /// Explicit basis query: components in the hidden fiducial basis.
            pub fn fiducial_components(&self) -> [f64; 4] {
                self.0
            }

            pub fn is_zero(&self) -> bool {
                self.0.iter().all(|c| *c == 0.0)
            }

            pub fn scaled(&self, alpha: f64) -> Self {
                Self(scale(alpha, &self.0))
            }

            /// Components `(τ_u, ξ1, ξ2, ξ3)` relative to an observer and an
            /// orthonormal basis of its rest space.
            pub fn coordinates_in(&self, u: &Velocity, spatial: &[SpacetimeVector; 3]) -> [f64; 4] {
                [
                    -minkowski(&u.0, &self.0),
                    minkowski(&spatial[0].0, &self.0),
                    minkowski(&spatial[1].0, &self.0),
                    minkowski(&spatial[2].0, &self.0),
                ]
            }

            /// Largest absolute fiducial component, used to scale tolerances.
            pub fn max_abs(&self) -> f64 {
                self.0.iter().fold(0.0_f64, |m, c| m.max(c.abs()))
            }
        }

        impl Add for $name {
            type Output = Self;
            fn add(self, rhs: Self) -> Self {
                Self(axpy(1.0, &rhs.0, &self.0))
            }
        }

        impl AddAssign for $name {
            fn add_assign(&mut self, rhs: Self) {
                self.0 = axpy(1.0, &rhs.0, &self.0);
            }
        }

        impl Sub for $name {
            type Output = Self;
            fn sub(self, rhs: Self) -> Self {
                Self(axpy(-1.0, &rhs.0, &self.0))
            }
        }

        impl Neg for $name {
            type Output = Self;
            fn neg(self) -> Self {
                Self(scale(-1.0, &self.0))
            }
        }

        impl Mul<f64> for $name {
            type Output = Self;
            fn mul(self, rhs: f64) -> Self {
                self.scaled(rhs)
            }
        }
    };
}

linear_vector!(SpacetimeVector, 1, "An element of 𝐌 (dimension sec).");
linear_vector!(
    Momentum,
    -1,
    "An element of 𝐌/(𝐈⊗𝐈), e.g. a four-momentum with ħ = c = 1 (dimension 1/sec)."
);
linear_vector!(
    Direction,
    0,
    "An arbitrary element of 𝐌/𝐈 (dimensionless), not necessarily a velocity."
);

impl SpacetimeVector {
    /// Shorthand: fiducial components given in seconds.
    pub const fn seconds(t: f64, x: f64, y: f64, z: f64) -> Self {
        Self([t, x, y, z])
    }
}

/// An absolute velocity: a future-directed element `u` of 𝐌/𝐈 with `u·u = -1`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Velocity(pub(crate) Raw);

impl sealed::Sealed for Velocity {}

impl MinkowskiVector for Velocity {
    const DIM: i32 = 0;
    fn raw(&self) -> Raw {
        self.0
    }
    fn from_raw(raw: Raw) -> Self {
        Self(raw)
    }
}

impl Velocity {
    /// The fiducial future direction `e0`.
    pub const fn fiducial() -> Self {
        Self([1.0, 0.0, 0.0, 0.0])
    }

    /// Validates fiducial components against the V(1) conditions.
    pub fn from_fiducial(components: [f64; 4]) -> Result<Self> {
        let norm = minkowski(&components, &components);
        let scale = euclid_sq(&components).max(1.0);
        if (norm + 1.0).abs() > GEOMETRY_TOL * scale {
            return Err(Error::NotTimelike);
        }
        if components[0] <= 0.0 {
            return Err(Error::PastDirected);
        }
        Ok(Self(components))
    }

    /// `cosh(χ) u + sinh(χ) n̂` for a direction `n` in the rest space of `u`.
    pub fn boosted(&self, direction: &SpacetimeVector, rapidity: f64) -> Result<Self> {
        let n = unit_in_rest_space(self, direction)?;
        Ok(Self(axpy(
            rapidity.sinh(),
            &n,
            &scale(rapidity.cosh(), &self.0),
        )))
    }

    pub fn fiducial_components(&self) -> [f64; 4] {
        self.0
    }

    /// `dt · u` as a spacetime vector; `dt` must be a time span.
    pub fn displacement(&self, dt: MeasureScalar) -> Result<SpacetimeVector> {
        Ok(SpacetimeVector(scale(dt.value_in(1)?, &self.0)))
    }

    /// `ε · u` as a momentum; `ε` must carry dimension 1/sec.
    pub fn momentum(&self, energy: MeasureScalar) -> Result<Momentum> {
        Ok(Momentum(scale(energy.value_in(-1)?, &self.0)))
    }

    pub fn as_direction(&self) -> Direction {
        Direction(self.0)
    }

    pub fn approx_eq(&self, other: &Velocity, tol: f64) -> bool {
        let scale = euclid_sq(&self.0).sqrt().max(1.0);
        self.0
            .iter()
            .zip(other.0.iter())
            .all(|(a, b)| (a - b).abs() <= tol * scale)
    }

    /// Rapidity between two velocities, `acosh(-u·v)`.
    pub fn rapidity_to(&self, other: &Velocity) -> f64 {
        (-minkowski(&self.0, &other.0)).max(1.0).acosh()
    }
}

/// Unit (dimensionless) vector along `direction`, which must lie in E_u.
pub(crate) fn unit_in_rest_space(u: &Velocity, direction: &SpacetimeVector) -> Result<Raw> {
    let d = direction.0;
    let size = euclid_sq(&d).sqrt();
    if size == 0.0 {
        return Err(Error::ZeroAxis);
    }
    let ortho = minkowski(&u.0, &d);
    if ortho.abs() > 1e-10 * size * euclid_sq(&u.0).sqrt() {
        return Err(Error::NotInRestSpace);
    }
    let len = minkowski(&d, &d).sqrt();
    Ok(scale(1.0 / len, &d))
}

/// Lorentz product; the result carries the summed measure-line exponents,
/// e.g. sec² for two spacetime vectors.
pub fn lorentz_product<A: MinkowskiVector, B: MinkowskiVector>(x: &A, y: &B) -> MeasureScalar {
    MeasureScalar::new(minkowski(&x.raw(), &y.raw()), A::DIM + B::DIM)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CausalClass {
    Timelike,
    Lightlike,
    Spacelike,
    Zero,
}

pub fn causal_class<V: MinkowskiVector>(x: &V) -> CausalClass {
    let raw = x.raw();
    if raw.iter().all(|c| *c == 0.0) {
        return CausalClass::Zero;
    }
    let sq = minkowski(&raw, &raw);
    if sq.abs() <= GEOMETRY_TOL * euclid_sq(&raw) {
        CausalClass::Lightlike
    } else if sq < 0.0 {
        CausalClass::Timelike
    } else {
        CausalClass::Spacelike
    }
}

/// Arrow orientation: a causal vector is future-directed iff its product with
/// the fiducial future vector is negative.
pub fn is_future_directed<V: MinkowskiVector>(x: &V) -> Result<bool> {
    match causal_class(x) {
        CausalClass::Timelike | CausalClass::Lightlike => {
            Ok(minkowski(&x.raw(), &Velocity::fiducial().0) < 0.0)
        }
        _ => Err(Error::NotCausal),
    }
}

pub fn normalize_velocity(x: &SpacetimeVector) -> Result<Velocity> {
    if causal_class(x) != CausalClass::Timelike {
        return Err(Error::NotTimelike);
    }
    if !is_future_directed(x)? {
        return Err(Error::PastDirected);
    }
    let norm = (-minkowski(&x.0, &x.0)).sqrt();
    Ok(Velocity(scale(1.0 / norm, &x.0)))
}

/// `τ_u(x) = -u·x`.
pub fn tau<V: MinkowskiVector>(u: &Velocity, x: &V) -> MeasureScalar {
    MeasureScalar::new(-minkowski(&u.0, &x.raw()), V::DIM)
}

/// `π_u(x) = x - τ_u(x) u`.
pub fn pi<V: MinkowskiVector>(u: &Velocity, x: &V) -> V {
    let raw = x.raw();
    let t = -minkowski(&u.0, &raw);
    V::from_raw(axpy(-t, &u.0, &raw))
}

/// `τ_u(x) u` rebuilt as an element of the same space as `x`.
pub fn time_part<V: MinkowskiVector>(u: &Velocity, x: &V) -> V {
    let t = -minkowski(&u.0, &x.raw());
    V::from_raw(scale(t, &u.0))
}

/// A point of the affine spacetime M, stored as its displacement from a
/// hidden fiducial origin. Only `point - point` and `point ± vector` exist.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SpacetimePoint(pub(crate) Raw);

impl SpacetimePoint {
    /// The fiducial origin.
    pub const fn origin() -> Self {
        Self([0.0; 4])
    }

    /// Explicit basis query: the point `origin + x` for fiducial components `x`.
    pub const fn from_fiducial(components: [f64; 4]) -> Self {
        Self(components)
    }

    pub fn fiducial_coordinates(&self) -> [f64; 4] {
        self.0
    }
}

impl Sub for SpacetimePoint {
    type Output = SpacetimeVector;
    fn sub(self, rhs: Self) -> SpacetimeVector {
        SpacetimeVector(axpy(-1.0, &rhs.0, &self.0))
    }
}

impl Add<SpacetimeVector> for SpacetimePoint {
    type Output = SpacetimePoint;
    fn add(self, rhs: SpacetimeVector) -> SpacetimePoint {
        SpacetimePoint(axpy(1.0, &rhs.0, &self.0))
    }
}

impl Sub<SpacetimeVector> for SpacetimePoint {
    type Output = SpacetimePoint;
    fn sub(self, rhs: SpacetimeVector) -> SpacetimePoint {
        SpacetimePoint(axpy(-1.0, &rhs.0, &self.0))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(t: f64, x: f64, y: f64, z: f64) -> SpacetimeVector {
        SpacetimeVector::seconds(t, x, y, z)
    }

    fn boosted_x(chi: f64) -> Velocity {
        Velocity::from_fiducial([chi.cosh(), chi.sinh(), 0.0, 0.0]).unwrap()
    }

    #[test]
    fn lorentz_product_examples() {
        let e0 = v(1.0, 0.0, 0.0, 0.0);
        assert_eq!(lorentz_product(&e0, &e0), MeasureScalar::new(-1.0, 2));
        assert_eq!(
            lorentz_product(&v(1.0, 2.0, 0.0, 0.0), &v(3.0, 0.0, 1.0, 0.0)),
            MeasureScalar::new(-3.0, 2)
        );
        let null = v(1.0, 1.0, 0.0, 0.0);
        assert_eq!(lorentz_product(&null, &null), MeasureScalar::new(0.0, 2));
        let u = Velocity::fiducial();
        assert_eq!(lorentz_product(&u, &e0).dim(), 1);
        assert_eq!(lorentz_product(&u, &u).dim(), 0);
    }

    #[test]
    fn causal_class_examples() {
        assert_eq!(causal_class(&v(1.0, 0.0, 0.0, 0.0)), CausalClass::Timelike);
        assert_eq!(causal_class(&v(0.0, 1.0, 0.0, 0.0)), CausalClass::Spacelike);
        assert_eq!(causal_class(&v(1.0, 1.0, 0.0, 0.0)), CausalClass::Lightlike);
        assert_eq!(causal_class(&SpacetimeVector::ZERO), CausalClass::Zero);
    }

    #[test]
    fn future_direction() {
        assert_eq!(is_future_directed(&v(1.0, 0.0, 0.0, 0.0)), Ok(true));
        assert_eq!(is_future_directed(&v(-1.0, 0.0, 0.0, 0.0)), Ok(false));
        assert_eq!(is_future_directed(&v(1.0, -1.0, 0.0, 0.0)), Ok(true));
        assert_eq!(
            is_future_directed(&v(0.0, 1.0, 0.0, 0.0)),
            Err(Error::NotCausal)
        );
        assert_eq!(is_future_directed(&SpacetimeVector::ZERO), Err(Error::NotCausal));
    }

    #[test]
    fn normalize_velocity_examples() {
        let u = normalize_velocity(&v(2.0, 0.0, 0.0, 0.0)).unwrap();
        assert_eq!(u, Velocity::fiducial());

        let c = 0.5_f64.cosh();
        let s = 0.5_f64.sinh();
        let u = normalize_velocity(&v(c, s, 0.0, 0.0)).unwrap();
        let uu = lorentz_product(&u, &u).value();
        assert!((uu + 1.0).abs() < 1e-12);
        let comps = u.fiducial_components();
        assert!((comps[0] - c).abs() < 1e-15 && (comps[1] - s).abs() < 1e-15);

        assert_eq!(
            normalize_velocity(&v(0.0, 1.0, 0.0, 0.0)),
            Err(Error::NotTimelike)
        );
        assert_eq!(
            normalize_velocity(&v(-1.0, 0.0, 0.0, 0.0)),
            Err(Error::PastDirected)
        );
    }

    #[test]
    fn tau_examples() {
        let rest = Velocity::fiducial();
        assert_eq!(tau(&rest, &v(5.0, 1.0, 2.0, 3.0)), MeasureScalar::seconds(5.0));
        assert_eq!(tau(&rest, &v(0.0, 1.0, 2.0, 3.0)), MeasureScalar::seconds(0.0));
        // Component-formula oracle: -u·x = u⁰x⁰ - u⃗·x⃗ with x = e0.
        let t = tau(&boosted_x(0.5), &v(1.0, 0.0, 0.0, 0.0));
        assert_eq!(t.dim(), 1);
        assert!((t.value() - 1.127_625_965_206_380_7).abs() < 1e-15);
    }

    #[test]
    fn pi_examples() {
        let rest = Velocity::fiducial();
        assert_eq!(pi(&rest, &v(5.0, 1.0, 2.0, 3.0)), v(0.0, 1.0, 2.0, 3.0));

        let u = boosted_x(0.5);
        let along = SpacetimeVector(scale(2.5, &u.0));
        assert!(pi(&u, &along).max_abs() < 1e-15);

        let x = v(1.0, 0.0, 0.0, 0.0);
        let p = pi(&u, &x);
        assert!(lorentz_product(&u, &p).value().abs() < 1e-12);
        let expected = x - SpacetimeVector(scale(0.5_f64.cosh(), &u.0));
        assert!((p - expected).max_abs() < 1e-15);
    }

    #[test]
    fn velocity_validation() {
        assert!(Velocity::from_fiducial([1.0, 0.1, 0.0, 0.0]).is_err());
        assert_eq!(
            Velocity::from_fiducial([-1.0, 0.0, 0.0, 0.0]),
            Err(Error::PastDirected)
        );
        let u = Velocity::fiducial()
            .boosted(&v(0.0, 0.0, 2.0, 0.0), 0.3)
            .unwrap();
        assert!((lorentz_product(&u, &u).value() + 1.0).abs() < 1e-14);
        assert!((u.rapidity_to(&Velocity::fiducial()) - 0.3).abs() < 1e-12);
        assert_eq!(
            Velocity::fiducial().boosted(&v(1.0, 0.0, 0.0, 0.0), 0.3),
            Err(Error::NotInRestSpace)
        );
    }

    #[test]
    fn point_arithmetic() {
        let o = SpacetimePoint::origin();
        let x = v(1.0, 2.0, 3.0, 4.0);
        let p = o + x;
        assert_eq!(p - o, x);
        assert_eq!(p - x, o);
    }
}
