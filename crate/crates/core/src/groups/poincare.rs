use serde::{Deserialize, Serialize};

use super::lorentz::{time_inversion, LorentzMap, MEMBERSHIP_TOL};
use crate::error::Result;
use crate::geometry::{Frame, Instant, SpacetimePoint, SpacetimeVector, Velocity};

/// An affine map of M over a Lorentz map:
/// `L(x) = o_f + 𝐋(x − o_f) + translation`, with `o_f` the fiducial origin.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PoincareMap {
    linear: LorentzMap,
    translation: SpacetimeVector,
}

impl PoincareMap {
    pub fn new(linear: LorentzMap, translation: SpacetimeVector) -> Self {
        Self {
            linear,
            translation,
        }
    }

    pub fn identity() -> Self {
        Self::new(LorentzMap::identity(), SpacetimeVector::ZERO)
    }

    pub fn translation(a: SpacetimeVector) -> Self {
        Self::new(LorentzMap::identity(), a)
    }

    /// The o-homogeneous map `x ↦ o + 𝐋(x − o)`.
    pub fn about(o: &SpacetimePoint, linear: LorentzMap) -> Self {
        let disp = *o - SpacetimePoint::origin();
        Self::new(linear, disp - linear.apply(&disp))
    }

    /// The u-time inversion with respect to the instant `t`.
    pub fn time_inversion_at(t: &Instant) -> Self {
        Self::about(t.anchor(), time_inversion(t.observer()))
    }

    pub fn linear(&self) -> &LorentzMap {
        &self.linear
    }

    pub fn translation_part(&self) -> &SpacetimeVector {
        &self.translation
    }

    pub fn apply_point(&self, x: &SpacetimePoint) -> SpacetimePoint {
        let disp = *x - SpacetimePoint::origin();
        SpacetimePoint::origin() + self.linear.apply(&disp) + self.translation
    }

    pub fn apply_vector(&self, v: &SpacetimeVector) -> SpacetimeVector {
        self.linear.apply(v)
    }

    /// `𝐋u`; an error unless the map is orthochronous.
    pub fn apply_velocity(&self, u: &Velocity) -> Result<Velocity> {
        self.linear.apply_velocity(u)
    }

    /// `L[t]`: the image hyperplane, labelled by the future-pointing `±𝐋u`.
    pub fn apply_instant(&self, t: &Instant) -> Instant {
        Instant::new(
            self.linear.image_observer(t.observer()),
            self.apply_point(t.anchor()),
        )
    }

    /// Pushes a frame forward: origin mapped, basis vectors mapped by 𝐋.
    pub fn apply_frame(&self, f: &Frame) -> Frame {
        let b = f.basis();
        Frame::new(
            self.apply_point(f.origin()),
            self.linear.image_observer(f.observer()),
            [
                self.linear.apply(&b[0]),
                self.linear.apply(&b[1]),
                self.linear.apply(&b[2]),
            ],
        )
    }

    /// `self ∘ rhs`.
    pub fn compose(&self, rhs: &PoincareMap) -> PoincareMap {
        PoincareMap::new(
            self.linear.compose(&rhs.linear),
            self.linear.apply(&rhs.translation) + self.translation,
        )
    }

    pub fn inverse(&self) -> PoincareMap {
        let inv = self.linear.inverse();
        PoincareMap::new(inv, -inv.apply(&self.translation))
    }

    pub fn is_orthochronous(&self) -> bool {
        self.linear.is_orthochronous()
    }

    /// Membership in 𝓛_o: `L(o) = o`.
    pub fn fixes_point(&self, o: &SpacetimePoint) -> bool {
        let d = self.apply_point(o) - *o;
        let scale = (*o - SpacetimePoint::origin()).max_abs().max(1.0);
        d.max_abs() <= MEMBERSHIP_TOL * scale
    }

    /// Membership in 𝓔_{u,t}: `L[t] = t`, i.e. the anchor image lies in `t`
    /// and 𝐋 maps E_u onto itself (𝐋u = ±u). Elements may reverse u.
    pub fn stabilizes_instant(&self, t: &Instant) -> bool {
        let u = t.observer().fiducial_components();
        let lu = self.linear.apply_raw(&u);
        let scale = u.iter().fold(1.0_f64, |m, c| m.max(c.abs()));
        let same = lu
            .iter()
            .zip(u.iter())
            .all(|(a, b)| (a - b).abs() <= MEMBERSHIP_TOL * scale);
        let flipped = lu
            .iter()
            .zip(u.iter())
            .all(|(a, b)| (a + b).abs() <= MEMBERSHIP_TOL * scale);
        (same || flipped) && t.contains(&self.apply_point(t.anchor()))
    }

    pub fn approx_eq(&self, other: &PoincareMap, tol: f64) -> bool {
        self.linear.approx_eq(&other.linear, tol)
            && (self.translation - other.translation).max_abs() <= tol
    }
}

impl Default for PoincareMap {
    fn default() -> Self {
        Self::identity()
    }
}
