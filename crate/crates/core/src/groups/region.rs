//! Finite unions of half-open boxes on an instant.
//!
//! A region lives on a u-instant and carries an orthonormal spatial frame;
//! boxes are axis-aligned in that frame, coordinates in seconds. Pushing a
//! region through a Poincaré map pushes the frame forward and keeps the box
//! coordinates, so images stay exact.

use serde::{Deserialize, Serialize};

use super::PoincareMap;
use crate::error::{Error, Result};
use crate::geometry::{Frame, Instant, MeasureScalar, SpacetimePoint, GEOMETRY_TOL};

/// `[lo, hi)` along each frame axis.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Box3 {
    pub lo: [f64; 3],
    pub hi: [f64; 3],
}

impl Box3 {
    pub fn new(lo: [f64; 3], hi: [f64; 3]) -> Result<Self> {
        for i in 0..3 {
            if !(lo[i].is_finite() && hi[i].is_finite()) || lo[i] >= hi[i] {
                return Err(Error::InvalidBox(format!(
                    "axis {i}: [{}, {}) is empty or not finite",
                    lo[i], hi[i]
                )));
            }
        }
        Ok(Self { lo, hi })
    }

    /// The cube `[lo, lo + side)³`.
    pub fn cube(lo: f64, side: f64) -> Result<Self> {
        Self::new([lo; 3], [lo + side; 3])
    }

    /// The cube of side `side` centred at `center`.
    pub fn centered(center: [f64; 3], side: f64) -> Result<Self> {
        let h = 0.5 * side;
        Self::new(
            [center[0] - h, center[1] - h, center[2] - h],
            [center[0] + h, center[1] + h, center[2] + h],
        )
    }

    pub fn contains(&self, xi: &[f64; 3]) -> bool {
        (0..3).all(|i| self.lo[i] <= xi[i] && xi[i] < self.hi[i])
    }

    pub fn volume(&self) -> f64 {
        (0..3).map(|i| self.hi[i] - self.lo[i]).product()
    }

    pub fn corners(&self) -> [[f64; 3]; 8] {
        let mut out = [[0.0; 3]; 8];
        for (k, c) in out.iter_mut().enumerate() {
            for (i, x) in c.iter_mut().enumerate() {
                *x = if k >> i & 1 == 0 { self.lo[i] } else { self.hi[i] };
            }
        }
        out
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Region {
    instant: Instant,
    frame: Frame,
    boxes: Vec<Box3>,
}

impl Region {
    /// A region in the instant's default frame (origin at the anchor).
    pub fn new(instant: Instant, boxes: Vec<Box3>) -> Self {
        let frame = instant.frame();
        Self::in_frame(instant, frame, boxes).expect("default frame lies on its instant")
    }

    pub fn empty(instant: Instant) -> Self {
        Self::new(instant, Vec::new())
    }

    /// A region with boxes expressed in an explicit frame on `instant`.
    pub fn in_frame(instant: Instant, frame: Frame, boxes: Vec<Box3>) -> Result<Self> {
        if !instant.contains(frame.origin())
            || !frame.observer().approx_eq(instant.observer(), GEOMETRY_TOL)
        {
            return Err(Error::InvalidArgument(
                "frame does not lie on the region's instant".into(),
            ));
        }
        Ok(Self {
            instant,
            frame,
            boxes: canonicalize(&boxes),
        })
    }

    pub fn instant(&self) -> &Instant {
        &self.instant
    }

    pub fn frame(&self) -> &Frame {
        &self.frame
    }

    pub fn boxes(&self) -> &[Box3] {
        &self.boxes
    }

    pub fn is_empty(&self) -> bool {
        self.boxes.is_empty()
    }

    /// Membership of a point of the instant (half-open along each axis).
    pub fn contains(&self, x: &SpacetimePoint) -> bool {
        let xi = self.frame.coordinates(x);
        self.contains_coords(&xi)
    }

    pub fn contains_coords(&self, xi: &[f64; 3]) -> bool {
        self.boxes.iter().any(|b| b.contains(xi))
    }

    pub fn volume(&self) -> MeasureScalar {
        MeasureScalar::new(self.boxes.iter().map(Box3::volume).sum(), 3)
    }

    /// Union with a region sharing the same instant and frame.
    pub fn union(&self, other: &Region) -> Result<Region> {
        self.check_same_frame(other)?;
        let mut boxes = self.boxes.clone();
        boxes.extend_from_slice(&other.boxes);
        Region::in_frame(self.instant, self.frame, boxes)
    }

    pub fn is_disjoint(&self, other: &Region) -> Result<bool> {
        self.check_same_frame(other)?;
        Ok(self.boxes.iter().all(|a| {
            other
                .boxes
                .iter()
                .all(|b| (0..3).any(|i| a.hi[i] <= b.lo[i] || b.hi[i] <= a.lo[i]))
        }))
    }

    fn check_same_frame(&self, other: &Region) -> Result<()> {
        let same_origin =
            (*self.frame.origin() - *other.frame.origin()).max_abs() <= 1e-12;
        let same_basis = self
            .frame
            .basis()
            .iter()
            .zip(other.frame.basis())
            .all(|(a, b)| (*a - *b).max_abs() <= 1e-12);
        if self.instant == other.instant && same_origin && same_basis {
            Ok(())
        } else {
            Err(Error::InvalidArgument(
                "regions live in different frames".into(),
            ))
        }
    }

    /// `L[E]`: the frame is pushed forward, box coordinates are unchanged.
    pub fn transformed(&self, map: &PoincareMap) -> Region {
        Region {
            instant: map.apply_instant(&self.instant),
            frame: map.apply_frame(&self.frame),
            boxes: self.boxes.clone(),
        }
    }

    /// Same boxes, every side pushed outwards by `margin` seconds.
    pub fn grown(&self, margin: f64) -> Region {
        let boxes = self
            .boxes
            .iter()
            .map(|b| Box3 {
                lo: b.lo.map(|x| x - margin),
                hi: b.hi.map(|x| x + margin),
            })
            .collect::<Vec<_>>();
        Region {
            instant: self.instant,
            frame: self.frame,
            boxes: canonicalize(&boxes),
        }
    }
}

/// Outer box cover of `(E + T) ∩ t2`, with T the closed future cone.
///
/// For a point `x` of the region the causal future meets `t2` in a ball of the
/// u2-rest space, centred at the projection of `x` with radius the u2-time
/// from `x` to `t2`. Both the centre and the radius are affine in `x`, so the
/// support of the shadow of a box in any direction is attained at a corner.
/// Same observer: the output frame is the region's frame carried along u.
/// Otherwise: `t2`'s default basis, origin projected along u2.
pub fn grow_region_causally(e: &Region, t2: &Instant) -> Result<Region> {
    let u2 = *t2.observer();
    let frame = if u2.approx_eq(e.instant.observer(), GEOMETRY_TOL) {
        e.frame.carried_to(t2)
    } else {
        Frame::new(t2.project(e.frame.origin()), u2, t2.spatial_basis())
    };

    let mut covers = Vec::with_capacity(e.boxes.len());
    for b in &e.boxes {
        let mut lo = [f64::INFINITY; 3];
        let mut hi = [f64::NEG_INFINITY; 3];
        for corner in b.corners() {
            let x = e.frame.point(corner);
            let radius = -t2.time_of(&x).value();
            if radius < -1e-12 * (1.0 + radius.abs()) {
                return Err(Error::NotInFuture);
            }
            let radius = radius.max(0.0);
            let xi = frame.coordinates(&x);
            for i in 0..3 {
                lo[i] = lo[i].min(xi[i] - radius);
                hi[i] = hi[i].max(xi[i] + radius);
            }
        }
        covers.push(Box3 { lo, hi });
    }
    if e.boxes.is_empty() && t2.time_of(e.frame.origin()).value() > 0.0 {
        return Err(Error::NotInFuture);
    }
    Region::in_frame(*t2, frame, covers)
}

/// Disjoint, sorted decomposition of a union of boxes.
///
/// The union is cut along every box face into elementary cells, covered cells
/// are merged into runs along the first axis, and runs with equal extents are
/// merged along the second and then the third axis.
fn canonicalize(boxes: &[Box3]) -> Vec<Box3> {
    if boxes.len() <= 1 {
        return boxes.to_vec();
    }
    let cuts: Vec<Vec<f64>> = (0..3)
        .map(|i| {
            let mut c: Vec<f64> = boxes.iter().flat_map(|b| [b.lo[i], b.hi[i]]).collect();
            c.sort_by(f64::total_cmp);
            c.dedup();
            c
        })
        .collect();
    let (nx, ny, nz) = (cuts[0].len() - 1, cuts[1].len() - 1, cuts[2].len() - 1);
    let mid = |axis: usize, k: usize| 0.5 * (cuts[axis][k] + cuts[axis][k + 1]);

    // Runs along x for each (y, z) slab: (x0, x1, j, k).
    let mut runs: Vec<(usize, usize, usize, usize)> = Vec::new();
    for k in 0..nz {
        for j in 0..ny {
            let mut start = None;
            for i in 0..=nx {
                let covered = i < nx && {
                    let p = [mid(0, i), mid(1, j), mid(2, k)];
                    boxes.iter().any(|b| b.contains(&p))
                };
                match (covered, start) {
                    (true, None) => start = Some(i),
                    (false, Some(s)) => {
                        runs.push((s, i, j, k));
                        start = None;
                    }
                    _ => {}
                }
            }
        }
    }

    // Merge along y: same x-run and z, consecutive j.
    let mut slabs: Vec<(usize, usize, usize, usize, usize)> = Vec::new();
    runs.sort_by_key(|&(x0, x1, j, k)| (k, x0, x1, j));
    for (x0, x1, j, k) in runs {
        match slabs.last_mut() {
            Some(last) if last.0 == x0 && last.1 == x1 && last.3 == j && last.4 == k => {
                last.3 = j + 1;
            }
            _ => slabs.push((x0, x1, j, j + 1, k)),
        }
    }

    // Merge along z.
    let mut blocks: Vec<[usize; 6]> = Vec::new();
    slabs.sort_by_key(|&(x0, x1, y0, y1, k)| (x0, x1, y0, y1, k));
    for (x0, x1, y0, y1, k) in slabs {
        match blocks.last_mut() {
            Some(b) if b[0] == x0 && b[1] == x1 && b[2] == y0 && b[3] == y1 && b[5] == k => {
                b[5] = k + 1;
            }
            _ => blocks.push([x0, x1, y0, y1, k, k + 1]),
        }
    }

    let mut out: Vec<Box3> = blocks
        .into_iter()
        .map(|b| Box3 {
            lo: [cuts[0][b[0]], cuts[1][b[2]], cuts[2][b[4]]],
            hi: [cuts[0][b[1]], cuts[1][b[3]], cuts[2][b[5]]],
        })
        .collect();
    out.sort_by(|a, b| {
        a.lo[2]
            .total_cmp(&b.lo[2])
            .then(a.lo[1].total_cmp(&b.lo[1]))
            .then(a.lo[0].total_cmp(&b.lo[0]))
    });
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{SpacetimeVector, Velocity};
    use crate::groups::{make_boost_along, make_rotation};
    use std::f64::consts::FRAC_PI_2;

    fn rest_instant() -> Instant {
        Instant::new(Velocity::fiducial(), SpacetimePoint::origin())
    }

    #[test]
    fn canonical_boxes_are_disjoint_and_cover_the_union() {
        let a = Box3::cube(0.0, 2.0).unwrap();
        let b = Box3::new([1.0, 1.0, 1.0], [3.0, 2.5, 1.5]).unwrap();
        let r = Region::new(rest_instant(), vec![a, b]);
        let total: f64 = r.boxes().iter().map(Box3::volume).sum();
        // |A ∪ B| = 8 + 1.5 - |A ∩ B| with |A ∩ B| = 1·1·0.5.
        assert!((total - (8.0 + 1.5 - 0.5)).abs() < 1e-12);
        for (i, x) in r.boxes().iter().enumerate() {
            for y in r.boxes().iter().skip(i + 1) {
                assert!((0..3).any(|k| x.hi[k] <= y.lo[k] || y.hi[k] <= x.lo[k]));
            }
        }
        for p in [[0.5, 0.5, 0.5], [2.5, 2.0, 1.2], [1.5, 1.5, 1.9]] {
            assert!(r.contains_coords(&p));
        }
        assert!(!r.contains_coords(&[2.5, 2.0, 1.7]));
        assert!(!r.contains_coords(&[2.0, 0.5, 0.5]));
    }

    #[test]
    fn rotated_unit_box_keeps_volume() {
        let t = rest_instant();
        let e = Region::new(t, vec![Box3::cube(0.0, 1.0).unwrap()]);
        let rot = PoincareMap::about(
            t.anchor(),
            make_rotation(
                t.observer(),
                &SpacetimeVector::seconds(0.0, 0.0, 0.0, 1.0),
                FRAC_PI_2,
            )
            .unwrap(),
        );
        let img = e.transformed(&rot);
        assert_eq!(img.volume(), e.volume());
        // Corner-image oracle: (1,0,0) ↦ (0,1,0) in the fiducial frame.
        let fid = t.frame();
        let corner = e.frame().point([0.99, 0.01, 0.5]);
        let moved = rot.apply_point(&corner);
        let c = fid.coordinates(&moved);
        assert!((c[0] + 0.01).abs() < 1e-12 && (c[1] - 0.99).abs() < 1e-12);
        assert!(img.contains(&moved));
        assert!(!img.contains(&fid.point([0.5, 0.5, 0.5])));
        assert!(img.contains(&fid.point([-0.5, 0.5, 0.5])));
    }

    #[test]
    fn translation_moves_instant_anchor() {
        let t = rest_instant();
        let e = Region::new(t, vec![Box3::cube(0.0, 1.0).unwrap()]);
        let a = SpacetimeVector::seconds(1.5, 0.5, 0.0, 0.0);
        let img = e.transformed(&PoincareMap::translation(a));
        assert_eq!(*img.instant().anchor(), *t.anchor() + a);
        assert_eq!(img.instant().observer(), t.observer());
        let id = e.transformed(&PoincareMap::identity());
        assert_eq!(id.boxes(), e.boxes());
    }

    #[test]
    fn causal_growth_same_observer() {
        let t = rest_instant();
        let e = Region::new(t, vec![Box3::cube(0.0, 1.0).unwrap()]);
        let same = grow_region_causally(&e, &t).unwrap();
        assert_eq!(same.boxes(), e.boxes());

        let t2 = t.later(MeasureScalar::seconds(1.0)).unwrap();
        let g = grow_region_causally(&e, &t2).unwrap();
        assert_eq!(g.boxes(), &[Box3::cube(-1.0, 3.0).unwrap()]);
        assert_eq!(g.instant(), &t2);

        let past = t.later(MeasureScalar::seconds(-0.5)).unwrap();
        assert_eq!(grow_region_causally(&e, &past).unwrap_err(), Error::NotInFuture);
    }

    #[test]
    fn causal_growth_boosted_target_matches_ray_oracle() {
        let t = rest_instant();
        let e = Region::new(t, vec![Box3::cube(0.0, 1.0).unwrap()]);
        let u2 = Velocity::fiducial()
            .boosted(&SpacetimeVector::seconds(0.0, 1.0, 0.0, 0.0), 0.4)
            .unwrap();
        let t2 = Instant::new(u2, SpacetimePoint::from_fiducial([3.0, 0.0, 0.0, 0.0]));
        let g = grow_region_causally(&e, &t2).unwrap();
        assert_eq!(g.boxes().len(), 1);
        let cover = g.boxes()[0];

        // Brute force: points of the box pushed along future null rays onto t2.
        let basis = t2.spatial_basis();
        let mut lo = [f64::INFINITY; 3];
        let mut hi = [f64::NEG_INFINITY; 3];
        let steps = 6;
        for a in 0..=steps {
            for b in 0..=steps {
                for c in 0..=steps {
                    let xi = [a, b, c].map(|k| k as f64 / steps as f64);
                    let x = e.frame().point(xi);
                    for dir in 0..6 {
                        let s = if dir % 2 == 0 { 1.0 } else { -1.0 };
                        let n = u2.as_direction().fiducial_components();
                        let sp = basis[dir / 2].fiducial_components();
                        let ray = SpacetimeVector::from_fiducial([
                            n[0] + s * sp[0],
                            n[1] + s * sp[1],
                            n[2] + s * sp[2],
                            n[3] + s * sp[3],
                        ]);
                        // u2·(x + λ ray − anchor) = 0 with u2·ray = −1.
                        let lambda = -t2.time_of(&x).value();
                        let y = x + ray * lambda;
                        assert!(t2.contains(&y));
                        let c = g.frame().coordinates(&y);
                        for i in 0..3 {
                            lo[i] = lo[i].min(c[i]);
                            hi[i] = hi[i].max(c[i]);
                        }
                    }
                }
            }
        }
        for i in 0..3 {
            assert!(lo[i] >= cover.lo[i] - 1e-12 && hi[i] <= cover.hi[i] + 1e-12);
            assert!((lo[i] - cover.lo[i]).abs() < 1e-9, "axis {i} lo");
            assert!((hi[i] - cover.hi[i]).abs() < 1e-9, "axis {i} hi");
        }
    }

    #[test]
    fn causal_growth_commutes_with_boosts() {
        // Growing and then transforming is growing the transformed region.
        let t = rest_instant();
        let e = Region::new(t, vec![Box3::new([0.0, -1.0, 0.0], [1.0, 0.0, 2.0]).unwrap()]);
        let t2 = t.later(MeasureScalar::seconds(2.0)).unwrap();
        let g = grow_region_causally(&e, &t2).unwrap();
        let b = PoincareMap::about(
            t.anchor(),
            make_boost_along(t.observer(), &SpacetimeVector::seconds(0.0, 0.0, 1.0, 0.0), 0.3)
                .unwrap(),
        );
        let g2 = grow_region_causally(&e.transformed(&b), &b.apply_instant(&t2)).unwrap();
        assert_eq!(g2.boxes().len(), 1);
        for i in 0..3 {
            assert!((g2.boxes()[0].lo[i] - g.boxes()[0].lo[i]).abs() < 1e-12);
            assert!((g2.boxes()[0].hi[i] - g.boxes()[0].hi[i]).abs() < 1e-12);
        }
    }

    #[test]
    fn invalid_boxes_rejected() {
        assert!(Box3::new([0.0; 3], [1.0, 0.0, 1.0]).is_err());
        assert!(Box3::new([0.0; 3], [f64::NAN, 1.0, 1.0]).is_err());
    }
}
