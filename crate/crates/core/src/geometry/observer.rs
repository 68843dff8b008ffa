//! Inertial observers: instants (u-simultaneous hyperplanes), space points
//! (world lines parallel to u) and orthonormal spatial frames on instants.

use serde::{Deserialize, Serialize};

use super::vector::{axpy, euclid_sq, minkowski, scale, Raw, GEOMETRY_TOL};
use super::{pi, tau, MeasureScalar, SpacetimePoint, SpacetimeVector, Velocity};
use crate::error::{Error, Result};

/// Deterministic orthonormal basis of E_u: Gram–Schmidt on `π_u(e1), π_u(e2),
/// π_u(e3)` in that order. Each vector has length 1 sec. For the fiducial
/// observer this is just `e1, e2, e3`, and the tetrad `(u, b1, b2, b3)` is
/// positively oriented for every `u`.
pub fn rest_space_basis(u: &Velocity) -> [SpacetimeVector; 3] {
    let mut out: [Raw; 3] = [[0.0; 4]; 3];
    for i in 0..3 {
        let mut e = [0.0; 4];
        e[i + 1] = 1.0;
        let mut v = pi(u, &SpacetimeVector(e)).0;
        for b in out.iter().take(i) {
            let c = minkowski(b, &v);
            v = axpy(-c, b, &v);
        }
        let len = minkowski(&v, &v).sqrt();
        out[i] = scale(1.0 / len, &v);
    }
    out.map(SpacetimeVector)
}

/// A u-instant: the hyperplane `{x | u·(x - anchor) = 0}`.
#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct Instant {
    observer: Velocity,
    anchor: SpacetimePoint,
}

impl Instant {
    pub fn new(observer: Velocity, anchor: SpacetimePoint) -> Self {
        Self { observer, anchor }
    }

    pub fn observer(&self) -> &Velocity {
        &self.observer
    }

    pub fn anchor(&self) -> &SpacetimePoint {
        &self.anchor
    }

    /// The same observer's instant `dt` later.
    pub fn later(&self, dt: MeasureScalar) -> Result<Self> {
        Ok(Self::new(
            self.observer,
            self.anchor + self.observer.displacement(dt)?,
        ))
    }

    /// Same hyperplane, different anchor.
    pub fn reanchored(&self, anchor: SpacetimePoint) -> Result<Self> {
        if !self.contains(&anchor) {
            return Err(Error::InvalidArgument(
                "new anchor does not lie on the instant".into(),
            ));
        }
        Ok(Self::new(self.observer, anchor))
    }

    /// τ_u(x - anchor): how far after this instant the point `x` lies.
    pub fn time_of(&self, x: &SpacetimePoint) -> MeasureScalar {
        tau(&self.observer, &(*x - self.anchor))
    }

    pub fn contains(&self, x: &SpacetimePoint) -> bool {
        let d = *x - self.anchor;
        let t = minkowski(&self.observer.0, &d.0);
        t.abs() <= 1e-10 * (1.0 + euclid_sq(&d.0).sqrt()) * euclid_sq(&self.observer.0).sqrt()
    }

    pub fn spatial_basis(&self) -> [SpacetimeVector; 3] {
        rest_space_basis(&self.observer)
    }

    /// Default frame: origin at the anchor, basis from [`rest_space_basis`].
    pub fn frame(&self) -> Frame {
        Frame::new(self.anchor, self.observer, self.spatial_basis())
    }

    /// The point where the world line `{x + s·u}` crosses this instant.
    pub fn project(&self, x: &SpacetimePoint) -> SpacetimePoint {
        let s = self.time_of(x).value();
        *x - SpacetimeVector(scale(s, &self.observer.0))
    }
}

impl PartialEq for Instant {
    fn eq(&self, other: &Self) -> bool {
        self.observer.approx_eq(&other.observer, GEOMETRY_TOL) && self.contains(&other.anchor)
    }
}

/// `t1 - t2 := τ_u(x1 - x2)` for any `x1 ∈ t1`, `x2 ∈ t2`.
pub fn instant_subtract(t1: &Instant, t2: &Instant) -> Result<MeasureScalar> {
    if !t1.observer.approx_eq(&t2.observer, GEOMETRY_TOL) {
        return Err(Error::ObserverMismatch);
    }
    Ok(tau(&t1.observer, &(t1.anchor - t2.anchor)))
}

/// A space point of the observer u: the world line `{anchor + s·u}`.
#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct SpacePoint {
    observer: Velocity,
    anchor: SpacetimePoint,
}

impl SpacePoint {
    pub fn new(observer: Velocity, anchor: SpacetimePoint) -> Self {
        Self { observer, anchor }
    }

    pub fn observer(&self) -> &Velocity {
        &self.observer
    }

    pub fn anchor(&self) -> &SpacetimePoint {
        &self.anchor
    }
}

impl PartialEq for SpacePoint {
    fn eq(&self, other: &Self) -> bool {
        if !self.observer.approx_eq(&other.observer, GEOMETRY_TOL) {
            return false;
        }
        let d = space_subtract_unchecked(&self.observer, &self.anchor, &other.anchor);
        let scale = (self.anchor - other.anchor).max_abs().max(1.0);
        d.max_abs() <= 1e-10 * scale
    }
}

/// `q1 - q2 := π_u(x1 - x2)` for any `x1 ∈ q1`, `x2 ∈ q2`.
pub fn space_subtract(q1: &SpacePoint, q2: &SpacePoint) -> Result<SpacetimeVector> {
    if !q1.observer.approx_eq(&q2.observer, GEOMETRY_TOL) {
        return Err(Error::ObserverMismatch);
    }
    Ok(space_subtract_unchecked(&q1.observer, &q1.anchor, &q2.anchor))
}

fn space_subtract_unchecked(u: &Velocity, a: &SpacetimePoint, b: &SpacetimePoint) -> SpacetimeVector {
    pi(u, &(*a - *b))
}

/// An orthonormal spatial frame on an instant: origin point, observer and a
/// basis of E_u (each vector of length 1 sec). Coordinates are in seconds.
#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct Frame {
    origin: SpacetimePoint,
    observer: Velocity,
    basis: [SpacetimeVector; 3],
}

impl Frame {
    pub fn new(origin: SpacetimePoint, observer: Velocity, basis: [SpacetimeVector; 3]) -> Self {
        Self {
            origin,
            observer,
            basis,
        }
    }

    pub fn origin(&self) -> &SpacetimePoint {
        &self.origin
    }

    pub fn observer(&self) -> &Velocity {
        &self.observer
    }

    pub fn basis(&self) -> &[SpacetimeVector; 3] {
        &self.basis
    }

    /// Spatial coordinates of `x`; the τ_u part of `x - origin` is ignored.
    pub fn coordinates(&self, x: &SpacetimePoint) -> [f64; 3] {
        let d = (*x - self.origin).0;
        [
            minkowski(&self.basis[0].0, &d),
            minkowski(&self.basis[1].0, &d),
            minkowski(&self.basis[2].0, &d),
        ]
    }

    pub fn point(&self, xi: [f64; 3]) -> SpacetimePoint {
        self.origin + self.vector(xi)
    }

    pub fn vector(&self, xi: [f64; 3]) -> SpacetimeVector {
        let b = &self.basis;
        let raw = axpy(
            xi[2],
            &b[2].0,
            &axpy(xi[1], &b[1].0, &scale(xi[0], &b[0].0)),
        );
        SpacetimeVector(raw)
    }

    /// Same basis, origin moved along u onto `instant`.
    pub fn carried_to(&self, instant: &Instant) -> Frame {
        Frame::new(instant.project(&self.origin), self.observer, self.basis)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::lorentz_product;

    fn boosted(chi: f64) -> Velocity {
        Velocity::from_fiducial([chi.cosh(), chi.sinh(), 0.0, 0.0]).unwrap()
    }

    #[test]
    fn instant_subtract_examples() {
        let u = Velocity::fiducial();
        let o = SpacetimePoint::origin();
        let t1 = Instant::new(u, o + SpacetimeVector::seconds(3.0, 0.0, 0.0, 0.0));
        let t2 = Instant::new(u, o);
        assert_eq!(instant_subtract(&t1, &t2), Ok(MeasureScalar::seconds(3.0)));
        assert_eq!(instant_subtract(&t1, &t1), Ok(MeasureScalar::seconds(0.0)));

        let moved = t1
            .reanchored(*t1.anchor() + SpacetimeVector::seconds(0.0, 4.0, -1.0, 2.0))
            .unwrap();
        assert_eq!(moved, t1);
        assert_eq!(instant_subtract(&moved, &t2), Ok(MeasureScalar::seconds(3.0)));

        let other = Instant::new(boosted(0.2), o);
        assert_eq!(instant_subtract(&t1, &other), Err(Error::ObserverMismatch));
    }

    #[test]
    fn boosted_instant_reanchoring() {
        let u = boosted(0.7);
        let t1 = Instant::new(u, SpacetimePoint::from_fiducial([1.0, 0.3, 0.0, 0.0]));
        let t2 = Instant::new(u, SpacetimePoint::origin());
        let d = instant_subtract(&t1, &t2).unwrap();
        let basis = t1.spatial_basis();
        let t1b = t1.reanchored(*t1.anchor() + basis[0] * 2.5 - basis[2]).unwrap();
        let d2 = instant_subtract(&t1b, &t2).unwrap();
        assert!((d.value() - d2.value()).abs() < 1e-12);
    }

    #[test]
    fn space_subtract_examples() {
        let u = Velocity::fiducial();
        let o = SpacetimePoint::origin();
        let q1 = SpacePoint::new(u, o + SpacetimeVector::seconds(0.0, 1.0, 0.0, 0.0));
        let q2 = SpacePoint::new(u, o);
        assert_eq!(
            space_subtract(&q1, &q2),
            Ok(SpacetimeVector::seconds(0.0, 1.0, 0.0, 0.0))
        );
        assert!(space_subtract(&q1, &q1).unwrap().max_abs() == 0.0);

        let slid = SpacePoint::new(u, *q1.anchor() + u.displacement(MeasureScalar::seconds(7.0)).unwrap());
        assert_eq!(slid, q1);
        assert_eq!(
            space_subtract(&slid, &q2),
            Ok(SpacetimeVector::seconds(0.0, 1.0, 0.0, 0.0))
        );
    }

    #[test]
    fn rest_space_basis_is_orthonormal() {
        for chi in [0.0, 0.4, 1.3] {
            let u = Velocity::fiducial()
                .boosted(&SpacetimeVector::seconds(0.0, 1.0, 2.0, -0.5), chi)
                .unwrap();
            let b = rest_space_basis(&u);
            for i in 0..3 {
                assert!(lorentz_product(&u, &b[i]).value().abs() < 1e-12);
                for j in 0..3 {
                    let g = lorentz_product(&b[i], &b[j]).value();
                    let want = if i == j { 1.0 } else { 0.0 };
                    assert!((g - want).abs() < 1e-12);
                }
            }
        }
        let b = rest_space_basis(&Velocity::fiducial());
        assert_eq!(b[0], SpacetimeVector::seconds(0.0, 1.0, 0.0, 0.0));
        assert_eq!(b[2], SpacetimeVector::seconds(0.0, 0.0, 0.0, 1.0));
    }

    #[test]
    fn frame_round_trip() {
        let u = boosted(0.4);
        let t = Instant::new(u, SpacetimePoint::from_fiducial([0.5, 1.0, 0.0, 0.0]));
        let f = t.frame();
        let p = f.point([1.0, -2.0, 0.25]);
        assert!(t.contains(&p));
        let xi = f.coordinates(&p);
        assert!((xi[0] - 1.0).abs() < 1e-12 && (xi[1] + 2.0).abs() < 1e-12);
    }
}
