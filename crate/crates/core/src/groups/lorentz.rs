use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{
    axpy, minkowski, rest_space_basis, scale, unit_in_rest_space, MinkowskiVector,
    Momentum, Raw, SpacetimeVector, Velocity,
};

/// Relative tolerance of the membership predicates.
pub const MEMBERSHIP_TOL: f64 = 1e-9;

const ETA: [f64; 4] = [-1.0, 1.0, 1.0, 1.0];

/// A linear map of 𝐌 preserving the Lorentz product. The matrix acts on
/// fiducial components and never leaves the type except through
/// [`LorentzMap::fiducial_matrix`].
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct LorentzMap {
    m: [[f64; 4]; 4],
}

impl LorentzMap {
    pub const fn identity() -> Self {
        let mut m = [[0.0; 4]; 4];
        m[0][0] = 1.0;
        m[1][1] = 1.0;
        m[2][2] = 1.0;
        m[3][3] = 1.0;
        Self { m }
    }

    /// Explicit basis constructor; the caller vouches for product preservation
    /// (check with [`LorentzMap::is_lorentz`]).
    pub const fn from_fiducial_matrix(m: [[f64; 4]; 4]) -> Self {
        Self { m }
    }

    pub fn fiducial_matrix(&self) -> [[f64; 4]; 4] {
        self.m
    }

    /// Builds the map from the images of the fiducial basis vectors.
    fn from_columns(cols: [Raw; 4]) -> Self {
        let mut m = [[0.0; 4]; 4];
        for (j, col) in cols.iter().enumerate() {
            for i in 0..4 {
                m[i][j] = col[i];
            }
        }
        Self { m }
    }

    fn from_fn(f: impl Fn(&Raw) -> Raw) -> Self {
        let mut cols = [[0.0; 4]; 4];
        for (j, col) in cols.iter_mut().enumerate() {
            let mut e = [0.0; 4];
            e[j] = 1.0;
            *col = f(&e);
        }
        Self::from_columns(cols)
    }

    pub(crate) fn apply_raw(&self, x: &Raw) -> Raw {
        let mut y = [0.0; 4];
        for (i, row) in self.m.iter().enumerate() {
            y[i] = row[0] * x[0] + row[1] * x[1] + row[2] * x[2] + row[3] * x[3];
        }
        y
    }

    /// Applies the map to any vector type of the 𝐌 family.
    pub fn apply<V: MinkowskiVector>(&self, x: &V) -> V {
        V::from_raw(self.apply_raw(&x.raw()))
    }

    pub fn apply_vector(&self, x: &SpacetimeVector) -> SpacetimeVector {
        self.apply(x)
    }

    pub fn apply_momentum(&self, p: &Momentum) -> Momentum {
        self.apply(p)
    }

    /// `𝐋u`, which is again a velocity only for orthochronous maps.
    pub fn apply_velocity(&self, u: &Velocity) -> Result<Velocity> {
        let raw = self.apply_raw(&u.fiducial_components());
        if raw[0] <= 0.0 {
            return Err(Error::NotOrthochronous);
        }
        Velocity::from_fiducial(raw).or(Err(Error::NotLorentz))
    }

    /// `±𝐋u`, whichever is future-directed: the observer whose instants are
    /// the images of u-instants.
    pub(crate) fn image_observer(&self, u: &Velocity) -> Velocity {
        let raw = self.apply_raw(&u.fiducial_components());
        let raw = if raw[0] < 0.0 { scale(-1.0, &raw) } else { raw };
        Velocity::from_fiducial(raw).expect("Lorentz image of a velocity is unit timelike")
    }

    /// `self ∘ rhs`.
    pub fn compose(&self, rhs: &LorentzMap) -> LorentzMap {
        let mut m = [[0.0; 4]; 4];
        for (i, row) in m.iter_mut().enumerate() {
            for (j, v) in row.iter_mut().enumerate() {
                *v = (0..4).map(|k| self.m[i][k] * rhs.m[k][j]).sum();
            }
        }
        LorentzMap { m }
    }

    /// `η Mᵀ η`, the inverse of any product-preserving map.
    pub fn inverse(&self) -> LorentzMap {
        let mut m = [[0.0; 4]; 4];
        for (i, row) in m.iter_mut().enumerate() {
            for (j, v) in row.iter_mut().enumerate() {
                *v = ETA[i] * self.m[j][i] * ETA[j];
            }
        }
        LorentzMap { m }
    }

    pub fn is_lorentz(&self) -> bool {
        let scale = self
            .m
            .iter()
            .flatten()
            .fold(1.0_f64, |acc, v| acc.max(v.abs()));
        for i in 0..4 {
            for j in 0..4 {
                let g: f64 = (0..4).map(|k| ETA[k] * self.m[k][i] * self.m[k][j]).sum();
                let want = if i == j { ETA[i] } else { 0.0 };
                if (g - want).abs() > MEMBERSHIP_TOL * scale * scale {
                    return false;
                }
            }
        }
        true
    }

    /// Preserves the arrow: maps the fiducial future vector to a future vector.
    pub fn is_orthochronous(&self) -> bool {
        self.m[0][0] > 0.0
    }

    pub fn is_proper(&self) -> bool {
        self.determinant() > 0.0
    }

    pub fn determinant(&self) -> f64 {
        // Gaussian elimination with partial pivoting on a copy.
        let mut a = self.m;
        let mut det = 1.0;
        for col in 0..4 {
            let pivot = (col..4)
                .max_by(|&i, &j| a[i][col].abs().total_cmp(&a[j][col].abs()))
                .unwrap();
            if a[pivot][col] == 0.0 {
                return 0.0;
            }
            if pivot != col {
                a.swap(pivot, col);
                det = -det;
            }
            det *= a[col][col];
            for row in col + 1..4 {
                let f = a[row][col] / a[col][col];
                for k in col..4 {
                    a[row][k] -= f * a[col][k];
                }
            }
        }
        det
    }

    /// Membership in O_u: `𝐋u = u`.
    pub fn in_rest_group(&self, u: &Velocity) -> bool {
        let uu = u.fiducial_components();
        let lu = self.apply_raw(&uu);
        let scale = uu.iter().fold(1.0_f64, |m, c| m.max(c.abs()));
        lu.iter()
            .zip(uu.iter())
            .all(|(a, b)| (a - b).abs() <= MEMBERSHIP_TOL * scale)
    }

    pub fn approx_eq(&self, other: &LorentzMap, tol: f64) -> bool {
        self.max_abs_diff(other) <= tol
    }

    pub fn max_abs_diff(&self, other: &LorentzMap) -> f64 {
        self.m
            .iter()
            .flatten()
            .zip(other.m.iter().flatten())
            .fold(0.0, |acc, (a, b)| acc.max((a - b).abs()))
    }
}

impl Default for LorentzMap {
    fn default() -> Self {
        Self::identity()
    }
}

/// Membership in O_u.
pub fn in_o_u(l: &LorentzMap, u: &Velocity) -> bool {
    l.in_rest_group(u)
}

/// Rotation of E_u by `angle` about `axis` (right-handed with respect to the
/// orientation of 𝐌), fixing u.
pub fn make_rotation(u: &Velocity, axis: &SpacetimeVector, angle: f64) -> Result<LorentzMap> {
    let n = unit_in_rest_space(u, axis)?;
    let basis = rest_space_basis(u);
    let uu = u.fiducial_components();
    let nc = [
        minkowski(&basis[0].0, &n),
        minkowski(&basis[1].0, &n),
        minkowski(&basis[2].0, &n),
    ];
    let (s, c) = angle.sin_cos();
    Ok(LorentzMap::from_fn(|x| {
        let t = -minkowski(&uu, x);
        let v = [
            minkowski(&basis[0].0, x),
            minkowski(&basis[1].0, x),
            minkowski(&basis[2].0, x),
        ];
        let dot = nc[0] * v[0] + nc[1] * v[1] + nc[2] * v[2];
        let cross = [
            nc[1] * v[2] - nc[2] * v[1],
            nc[2] * v[0] - nc[0] * v[2],
            nc[0] * v[1] - nc[1] * v[0],
        ];
        let mut out = scale(t, &uu);
        for i in 0..3 {
            let r = v[i] * c + cross[i] * s + nc[i] * dot * (1.0 - c);
            out = axpy(r, &basis[i].0, &out);
        }
        out
    }))
}

/// The element of O_u acting on E_u by the orthogonal matrix `r` relative to
/// the orthonormal basis `basis` of E_u: `b_j ↦ Σ_i r[i][j] b_i`.
pub fn orthogonal_in_rest_space(
    u: &Velocity,
    basis: &[SpacetimeVector; 3],
    r: [[f64; 3]; 3],
) -> Result<LorentzMap> {
    for (i, b) in basis.iter().enumerate() {
        unit_in_rest_space(u, b)?;
        for c in basis.iter().skip(i + 1) {
            if minkowski(&b.0, &c.0).abs() > 1e-10 {
                return Err(Error::InvalidArgument("basis is not orthogonal".into()));
            }
        }
    }
    let uu = u.fiducial_components();
    Ok(LorentzMap::from_fn(|x| {
        let t = -minkowski(&uu, x);
        let v = [
            minkowski(&basis[0].0, x),
            minkowski(&basis[1].0, x),
            minkowski(&basis[2].0, x),
        ];
        let mut out = scale(t, &uu);
        for i in 0..3 {
            let r = r[i][0] * v[0] + r[i][1] * v[1] + r[i][2] * v[2];
            out = axpy(r, &basis[i].0, &out);
        }
        out
    }))
}

/// The pure boost taking `u` to `u2`: orthochronous, proper and the identity
/// on `E_u ∩ E_u2`.
pub fn make_boost(u: &Velocity, u2: &Velocity) -> LorentzMap {
    let a = u.fiducial_components();
    let b = u2.fiducial_components();
    let gamma = -minkowski(&a, &b);
    let s = axpy(1.0, &a, &b);
    // x ↦ x + ((u+u2)·x)/(1+γ) (u+u2) − 2 (u·x) u2
    LorentzMap::from_fn(|x| {
        let k = minkowski(&s, x) / (1.0 + gamma);
        let w = minkowski(&a, x);
        axpy(-2.0 * w, &b, &axpy(k, &s, x))
    })
}

/// Boost of rapidity `chi` along a direction of E_u.
pub fn make_boost_along(u: &Velocity, direction: &SpacetimeVector, chi: f64) -> Result<LorentzMap> {
    let u2 = u.boosted(direction, chi)?;
    Ok(make_boost(u, &u2))
}

/// The u-time inversion `x ↦ -τ_u(x)u + π_u(x)`.
pub fn time_inversion(u: &Velocity) -> LorentzMap {
    let uu = u.fiducial_components();
    LorentzMap::from_fn(|x| axpy(2.0 * minkowski(&uu, x), &uu, x))
}

/// The u-space inversion `x ↦ τ_u(x)u - π_u(x)`.
pub fn space_inversion(u: &Velocity) -> LorentzMap {
    let uu = u.fiducial_components();
    LorentzMap::from_fn(|x| axpy(-2.0 * minkowski(&uu, x), &uu, &scale(-1.0, x)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::lorentz_product;
    use std::f64::consts::FRAC_PI_2;

    fn e(i: usize) -> SpacetimeVector {
        let mut c = [0.0; 4];
        c[i] = 1.0;
        SpacetimeVector::from_fiducial(c)
    }

    fn close(a: &SpacetimeVector, b: &SpacetimeVector, tol: f64) -> bool {
        (*a - *b).max_abs() <= tol
    }

    #[test]
    fn rotation_examples() {
        let u = Velocity::fiducial();
        let id = make_rotation(&u, &e(3), 0.0).unwrap();
        assert!(id.approx_eq(&LorentzMap::identity(), 0.0));

        // Matrix oracle for a quarter turn about e3.
        let r = make_rotation(&u, &e(3), FRAC_PI_2).unwrap();
        assert!(close(&r.apply(&e(1)), &e(2), 1e-15));
        assert!(close(&r.apply(&e(2)), &(-e(1)), 1e-15));
        assert!(close(&r.apply(&e(3)), &e(3), 1e-15));
        assert!(r.is_lorentz() && r.is_proper() && r.is_orthochronous());
        assert!(in_o_u(&r, &u));

        let v = Velocity::fiducial()
            .boosted(&SpacetimeVector::seconds(0.0, 1.0, 1.0, 0.0), 0.8)
            .unwrap();
        let axis = rest_space_basis(&v)[1] * 2.0;
        let r = make_rotation(&v, &axis, 1.1).unwrap();
        let lu = r.apply(&v.as_direction());
        assert!((lu - v.as_direction()).max_abs() <= 1e-12);
        assert!(r.is_lorentz());
        assert!(close(&r.apply(&axis), &axis, 1e-12));
    }

    #[test]
    fn rotation_errors() {
        let u = Velocity::fiducial();
        assert_eq!(make_rotation(&u, &e(0), 1.0), Err(Error::NotInRestSpace));
        assert_eq!(
            make_rotation(&u, &SpacetimeVector::ZERO, 1.0),
            Err(Error::ZeroAxis)
        );
    }

    #[test]
    fn boost_examples() {
        let u = Velocity::fiducial();
        assert!(make_boost(&u, &u).approx_eq(&LorentzMap::identity(), 1e-15));

        let chi: f64 = 0.7;
        let u2 = Velocity::from_fiducial([chi.cosh(), chi.sinh(), 0.0, 0.0]).unwrap();
        let b = make_boost(&u, &u2);
        let want = [
            [chi.cosh(), chi.sinh(), 0.0, 0.0],
            [chi.sinh(), chi.cosh(), 0.0, 0.0],
            [0.0, 0.0, 1.0, 0.0],
            [0.0, 0.0, 0.0, 1.0],
        ];
        assert!(b.approx_eq(&LorentzMap::from_fiducial_matrix(want), 1e-14));
        let lu = b.apply_velocity(&u).unwrap();
        assert!(lu.approx_eq(&u2, 1e-12));
        assert!(b.is_lorentz() && b.is_proper() && b.is_orthochronous());
        assert!(close(&b.apply(&e(2)), &e(2), 0.0));

        let back = make_boost(&u2, &u).compose(&b);
        assert!(back.approx_eq(&LorentzMap::identity(), 1e-12));
    }

    #[test]
    fn inversions() {
        let u = Velocity::fiducial();
        let t = time_inversion(&u);
        assert_eq!(
            t.apply(&SpacetimeVector::seconds(1.0, 2.0, 3.0, 4.0)),
            SpacetimeVector::seconds(-1.0, 2.0, 3.0, 4.0)
        );
        assert!(t.compose(&t).approx_eq(&LorentzMap::identity(), 0.0));
        assert!(!t.is_orthochronous());

        let s = space_inversion(&u);
        assert!(s.is_orthochronous() && !s.is_proper());
        let minus = s.compose(&t);
        let neg = LorentzMap::from_fiducial_matrix([
            [-1.0, 0.0, 0.0, 0.0],
            [0.0, -1.0, 0.0, 0.0],
            [0.0, 0.0, -1.0, 0.0],
            [0.0, 0.0, 0.0, -1.0],
        ]);
        assert!(minus.approx_eq(&neg, 0.0));

        let v = Velocity::fiducial()
            .boosted(&SpacetimeVector::seconds(0.0, 0.0, 1.0, 1.0), 1.2)
            .unwrap();
        let tv = time_inversion(&v);
        assert!(tv.is_lorentz());
        assert!(tv.compose(&tv).approx_eq(&LorentzMap::identity(), 1e-12));
        let x = SpacetimeVector::seconds(0.3, -1.0, 2.0, 0.5);
        let y = SpacetimeVector::seconds(1.0, 0.5, 0.1, -0.7);
        let before = lorentz_product(&x, &y).value();
        let after = lorentz_product(&tv.apply(&x), &tv.apply(&y)).value();
        assert!((before - after).abs() < 1e-12);
    }

    #[test]
    fn inverse_and_determinant() {
        let u = Velocity::fiducial();
        let b = make_boost_along(&u, &e(2), -0.4).unwrap();
        let r = make_rotation(&u, &SpacetimeVector::seconds(0.0, 1.0, 2.0, 3.0), 0.9).unwrap();
        let l = b.compose(&r);
        assert!(l.compose(&l.inverse()).approx_eq(&LorentzMap::identity(), 1e-13));
        assert!((l.determinant() - 1.0).abs() < 1e-12);
        assert!((space_inversion(&u).determinant() + 1.0).abs() < 1e-15);
    }
}
