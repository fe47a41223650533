//! Arc families on the circle and the projective line.
//!
//! In real dimension one the `2^-N` density bound fails: for every level
//! `k` there is a union of `N_k = ⌈3^k/2⌉` open arcs of radius `d_k/2`
//! whose measure stays above a fixed constant while avoiding every distance
//! `3^i d_k` for `i = 0, …, k`.  The centers sit at consecutive angle steps
//! `2θ_k` with `θ_k = (π/2)/3^k`, so the distance between two points of the
//! family always falls in an open band around an *even* multiple of `d_k`,
//! while the forbidden values are *odd* multiples — parity keeps them apart.
//!
//! [`ArcFamily::build`] constructs the family on `S¹` or `ℝP¹`,
//! [`ArcFamily::check_avoidance`] certifies the band argument numerically
//! and corroborates it by seeded sampling, and [`ArcFamily::measure`]
//! reports the density together with the level-independent lower bound
//! `(3/2)·μ(B_{1,1})`.

use crate::error::{Error, Result};
use crate::spaces::{distance_rp1, distance_s1, SpaceFamily, SpaceKind};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::f64::consts::{FRAC_PI_2, PI};

/// Largest accepted level: `N_12 = 265721` keeps every scan cheap.
pub const MAX_LEVEL: u32 = 12;

/// Tolerance for the center-distance linearity that underpins the band
/// argument.
const LINEARITY_TOL: f64 = 1e-10;

/// A level-`k` family of disjoint open arcs avoiding the distances
/// `d_k, 3 d_k, …, 3^k d_k`.
#[derive(Debug, Clone)]
pub struct ArcFamily {
    space: SpaceKind,
    level: u32,
    /// Half the rotation step between consecutive centers: `(π/2)/3^k`.
    theta: f64,
    /// The base distance `d_k`: half the space distance between
    /// consecutive centers.  Every forbidden distance is `3^i · d_k`.
    base_distance: f64,
    /// Arc radius `d_k/2` in the space metric.
    arc_radius: f64,
    /// Unit-vector centers, all in the nonnegative quadrant.
    centers: Vec<[f64; 2]>,
}

/// Outcome of the avoidance check: the analytic band argument plus a
/// sampled corroboration.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct AvoidanceReport {
    /// Smallest absolute gap between a sampled pair distance and any
    /// forbidden value (infinite when no samples were drawn).
    pub min_gap: f64,
    /// Whether every center pair sits at its even multiple of the base
    /// distance, confining pair distances to bands that exclude all odd
    /// multiples.
    pub analytic_ok: bool,
}

/// Densities of an arc family under the normalized invariant measure.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct MeasureReport {
    /// Measure of a single arc.
    pub arc_measure: f64,
    /// Measure of the whole family (arcs are disjoint).
    pub total: f64,
    /// The level-independent floor `(3/2)·μ(B_{1,1})`.
    pub lower_bound: f64,
}

impl ArcFamily {
    /// Builds the level-`k` family on `S¹` or `ℝP¹`.
    ///
    /// Centers start at `(1, 0)` and advance counterclockwise by `2θ_k`
    /// per step, staying inside the nonnegative quadrant; the base
    /// distance is read off the space metric, which makes `d_k = θ_k` on
    /// the circle and `d_k = 2θ_k` on the projective line.
    pub fn build(space: SpaceKind, level: u32) -> Result<Self> {
        let one_dimensional = matches!(
            space.family(),
            SpaceFamily::Sphere | SpaceFamily::RealProjective
        ) && space.n() == 2;
        if !one_dimensional {
            return Err(Error::domain(format!(
                "arc families exist only on s1 and rp1, not on {space}"
            )));
        }
        if level == 0 || level > MAX_LEVEL {
            return Err(Error::domain(format!(
                "level must lie in 1..={MAX_LEVEL}, got {level}"
            )));
        }
        let power = 3u64.pow(level);
        let theta = FRAC_PI_2 / power as f64;
        let count = ((power + 1) / 2) as usize;
        let centers: Vec<[f64; 2]> = (0..count)
            .map(|i| {
                let angle = 2.0 * i as f64 * theta;
                [angle.cos(), angle.sin()]
            })
            .collect();

        // The rotation step 2θ is below π/3 even at level 1, so the metric
        // distance between consecutive centers is exactly 2θ on the circle
        // and 4θ on the projective line (angle doubling).  Taking the
        // closed form keeps d_k = 3·d_{k+1} exact to machine precision —
        // arccos alone loses ~1e-11 of relative accuracy at deep levels —
        // and the metric evaluation below corroborates it.
        let step = match space.family() {
            SpaceFamily::RealProjective => 4.0 * theta,
            _ => 2.0 * theta,
        };
        let family = ArcFamily {
            space,
            level,
            theta,
            base_distance: step / 2.0,
            arc_radius: step / 4.0,
            centers,
        };
        for pair in family.centers.windows(2) {
            let measured = family.distance(pair[0], pair[1]);
            if (measured - step).abs() > LINEARITY_TOL {
                return Err(Error::numeric(format!(
                    "consecutive centers at metric distance {measured}, expected {step}"
                )));
            }
        }
        Ok(family)
    }

    /// The underlying space (`s1` or `rp1`).
    pub fn space(&self) -> SpaceKind {
        self.space
    }

    /// Construction level `k`.
    pub fn level(&self) -> u32 {
        self.level
    }

    /// The angle `θ_k = (π/2)/3^k`; centers step by `2θ_k`.
    pub fn theta(&self) -> f64 {
        self.theta
    }

    /// The base distance `d_k`.
    pub fn base_distance(&self) -> f64 {
        self.base_distance
    }

    /// Radius `d_k/2` of each open arc, in the space metric.
    pub fn arc_radius(&self) -> f64 {
        self.arc_radius
    }

    /// Number of arcs `N_k = ⌈3^k/2⌉`.
    pub fn arc_count(&self) -> usize {
        self.centers.len()
    }

    /// Arc centers as unit vectors, in rotation order.
    pub fn centers(&self) -> &[[f64; 2]] {
        &self.centers
    }

    fn distance(&self, x: [f64; 2], y: [f64; 2]) -> f64 {
        let result = match self.space.family() {
            SpaceFamily::RealProjective => distance_rp1(x, y),
            _ => distance_s1(x, y),
        };
        result.expect("construction points are unit vectors")
    }

    /// The forbidden distances `[3⁰·d_k, …, 3^up_to·d_k]`; since
    /// `d_k = 3 d_{k+1}`, the value `3^i d_k` is the base distance of
    /// level `k - i`.
    pub fn forbidden_distances(&self, up_to: u32) -> Result<Vec<f64>> {
        if up_to > self.level {
            return Err(Error::domain(format!(
                "up_to = {up_to} exceeds the construction level {}",
                self.level
            )));
        }
        let mut scale = self.base_distance;
        let mut values = Vec::with_capacity(up_to as usize + 1);
        for _ in 0..=up_to {
            values.push(scale);
            scale *= 3.0;
        }
        Ok(values)
    }

    /// A uniform point of a uniformly chosen arc (open interval: the
    /// boundary has measure zero and the generator never returns the
    /// upper endpoint).
    fn sample_point(&self, rng: &mut ChaCha8Rng) -> [f64; 2] {
        let arc = rng.random_range(0..self.centers.len());
        let offset = rng.random_range(-self.theta / 2.0..self.theta / 2.0);
        let angle = 2.0 * arc as f64 * self.theta + offset;
        [angle.cos(), angle.sin()]
    }

    /// Certifies that the family avoids every forbidden distance.
    ///
    /// Analytic part: centers are rotations of one another, so pair
    /// distances depend only on the index difference `m`; the check
    /// confirms `d(e_0, e_m) = 2m·d_k` for every `m`.  Two points of arcs
    /// at index difference `m` then lie within the open band
    /// `((2m-1)·d_k, (2m+1)·d_k)` by the triangle inequality, and every
    /// forbidden value is an odd multiple of `d_k` — the parity mismatch
    /// excludes them all.
    ///
    /// Sampled part: draws `samples` random point pairs from the arcs
    /// (deterministically from `rng_seed`) and reports the smallest gap
    /// between an observed distance and any forbidden value.
    pub fn check_avoidance(&self, samples: u64, rng_seed: u64) -> AvoidanceReport {
        let forbidden = self
            .forbidden_distances(self.level)
            .expect("level is within its own bound");

        let mut analytic_ok = true;
        for m in 1..self.centers.len() {
            let between = self.distance(self.centers[0], self.centers[m]);
            if (between - 2.0 * m as f64 * self.base_distance).abs() > LINEARITY_TOL {
                analytic_ok = false;
            }
        }

        let mut rng = ChaCha8Rng::seed_from_u64(rng_seed);
        let mut min_gap = f64::INFINITY;
        for _ in 0..samples {
            let x = self.sample_point(&mut rng);
            let y = self.sample_point(&mut rng);
            let observed = self.distance(x, y);
            for &value in &forbidden {
                min_gap = min_gap.min((observed - value).abs());
            }
        }
        AvoidanceReport {
            min_gap,
            analytic_ok,
        }
    }

    /// Densities under the normalized invariant measure.
    ///
    /// Under their metrics both spaces are circles of circumference `2π`
    /// (the projective metric doubles angles over half the range), so a
    /// ball of radius `r` has normalized measure `r/π` and each arc
    /// contributes `arc_radius/π`.  The lower bound is
    /// `(3/2)·μ(B_{1,1})` with the level-1 arc measure recovered through
    /// `d_1 = 3^{k-1}·d_k`: `1/8` on the circle, `1/4` on the projective
    /// line.
    pub fn measure(&self) -> Result<MeasureReport> {
        for pair in self.centers.windows(2) {
            let gap = self.distance(pair[0], pair[1]) - 2.0 * self.arc_radius;
            if gap <= 0.0 {
                return Err(Error::invalid_state(format!(
                    "arcs overlap: consecutive centers leave gap {gap}"
                )));
            }
        }
        let arc_measure = self.arc_radius / PI;
        let total = self.centers.len() as f64 * arc_measure;
        let level_one_distance = self.base_distance * 3f64.powi(self.level as i32 - 1);
        let lower_bound = 1.5 * (level_one_distance / 2.0) / PI;
        Ok(MeasureReport {
            arc_measure,
            total,
            lower_bound,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::FRAC_PI_3;

    fn circle() -> SpaceKind {
        "s1".parse().unwrap()
    }

    fn projective_line() -> SpaceKind {
        "rp1".parse().unwrap()
    }

    #[test]
    fn level_one_circle_matches_hand_values() {
        let family = ArcFamily::build(circle(), 1).unwrap();
        assert_eq!(family.level(), 1);
        assert_eq!(family.arc_count(), 2);
        assert!((family.theta() - PI / 6.0).abs() < 1e-15);
        let step = distance_s1(family.centers()[0], family.centers()[1]).unwrap();
        assert!((step - FRAC_PI_3).abs() < 1e-15);
        assert!((family.base_distance() - PI / 6.0).abs() < 1e-15);
        assert!((family.arc_radius() - PI / 12.0).abs() < 1e-15);
    }

    #[test]
    fn level_two_circle_steps_by_pi_over_nine() {
        let family = ArcFamily::build(circle(), 2).unwrap();
        assert_eq!(family.arc_count(), 5);
        let step = distance_s1(family.centers()[0], family.centers()[1]).unwrap();
        assert!((step - PI / 9.0).abs() < 1e-14);
    }

    #[test]
    fn level_one_projective_line_matches_hand_values() {
        let family = ArcFamily::build(projective_line(), 1).unwrap();
        let step = distance_rp1(family.centers()[0], family.centers()[1]).unwrap();
        assert!((step - 2.0 * FRAC_PI_3).abs() < 1e-14);
        assert!((family.base_distance() - FRAC_PI_3).abs() < 1e-14);
    }

    #[test]
    fn build_rejects_wrong_spaces_and_levels() {
        for name in ["s2", "rp2", "cp2", "op2"] {
            let space: SpaceKind = name.parse().unwrap();
            assert!(matches!(
                ArcFamily::build(space, 1),
                Err(Error::Domain(_))
            ));
        }
        assert!(ArcFamily::build(circle(), 0).is_err());
        assert!(ArcFamily::build(circle(), MAX_LEVEL + 1).is_err());
        assert!(ArcFamily::build(circle(), MAX_LEVEL).is_ok());
    }

    #[test]
    fn base_distance_shrinks_by_exactly_three() {
        for space in [circle(), projective_line()] {
            for level in 1..=7 {
                let coarse = ArcFamily::build(space, level).unwrap();
                let fine = ArcFamily::build(space, level + 1).unwrap();
                let ratio = coarse.base_distance() / fine.base_distance();
                assert!(
                    (ratio - 3.0).abs() < 1e-12,
                    "{space} level {level}: ratio {ratio}"
                );
            }
        }
    }

    #[test]
    fn center_distances_are_linear_in_the_index_difference() {
        for space in [circle(), projective_line()] {
            for level in 1..=6 {
                let family = ArcFamily::build(space, level).unwrap();
                let centers = family.centers();
                for i in 0..centers.len() {
                    for j in (i + 1)..centers.len() {
                        let want = 2.0 * (j - i) as f64 * family.base_distance();
                        let got = family.distance(centers[i], centers[j]);
                        assert!(
                            (got - want).abs() < 1e-10,
                            "{space} level {level} pair ({i}, {j}): {got} vs {want}"
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn centers_stay_in_the_nonnegative_quadrant() {
        for space in [circle(), projective_line()] {
            let family = ArcFamily::build(space, 8).unwrap();
            for center in family.centers() {
                assert!(center[0] > 0.0 && center[1] >= 0.0);
            }
        }
    }

    #[test]
    fn forbidden_distances_form_a_triple_ladder() {
        let family = ArcFamily::build(circle(), 3).unwrap();
        let values = family.forbidden_distances(3).unwrap();
        assert_eq!(values.len(), 4);
        assert!((values[0] - family.base_distance()).abs() < 1e-15);
        for pair in values.windows(2) {
            assert!((pair[1] / pair[0] - 3.0).abs() < 1e-12);
        }
        // 3^i·d_k is the base distance of level k-i.
        let coarser = ArcFamily::build(circle(), 2).unwrap();
        assert!((values[1] - coarser.base_distance()).abs() < 1e-12);
        assert!(family.forbidden_distances(4).is_err());

        let shallow = family.forbidden_distances(1).unwrap();
        assert_eq!(shallow.len(), 2);
        assert!((shallow[1] - 3.0 * shallow[0]).abs() < 1e-15);
    }

    #[test]
    fn avoidance_holds_analytically_and_on_samples() {
        for space in [circle(), projective_line()] {
            let family = ArcFamily::build(space, 2).unwrap();
            let report = family.check_avoidance(100_000, 1);
            assert!(report.analytic_ok, "{space}");
            assert!(report.min_gap > 0.0, "{space}: min_gap {}", report.min_gap);
        }
    }

    #[test]
    fn avoidance_is_deterministic_in_the_seed() {
        let family = ArcFamily::build(circle(), 3).unwrap();
        let first = family.check_avoidance(5_000, 99);
        let second = family.check_avoidance(5_000, 99);
        assert_eq!(first.min_gap.to_bits(), second.min_gap.to_bits());
        let other = family.check_avoidance(5_000, 100);
        assert_ne!(first.min_gap.to_bits(), other.min_gap.to_bits());
    }

    #[test]
    fn distances_within_one_arc_stay_below_the_base_distance() {
        let family = ArcFamily::build(circle(), 2).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..10_000 {
            let a = rng.random_range(-family.theta() / 2.0..family.theta() / 2.0);
            let b = rng.random_range(-family.theta() / 2.0..family.theta() / 2.0);
            let x = [a.cos(), a.sin()];
            let y = [b.cos(), b.sin()];
            let within = family.distance(x, y);
            assert!(within < family.base_distance());
        }
    }

    #[test]
    fn measure_matches_level_one_arithmetic() {
        let family = ArcFamily::build(circle(), 1).unwrap();
        let report = family.measure().unwrap();
        assert!((report.arc_measure - 1.0 / 12.0).abs() < 1e-15);
        assert!((report.total - 1.0 / 6.0).abs() < 1e-15);
        assert!((report.lower_bound - 0.125).abs() < 1e-15);

        let family = ArcFamily::build(projective_line(), 1).unwrap();
        let report = family.measure().unwrap();
        assert!((report.arc_measure - 1.0 / 6.0).abs() < 1e-14);
        assert!((report.total - 1.0 / 3.0).abs() < 1e-14);
        assert!((report.lower_bound - 0.25).abs() < 1e-14);
    }

    #[test]
    fn density_never_falls_below_the_floor() {
        for space in [circle(), projective_line()] {
            for level in 1..=8 {
                let family = ArcFamily::build(space, level).unwrap();
                let report = family.measure().unwrap();
                assert!(
                    report.total >= report.lower_bound - 1e-14,
                    "{space} level {level}: {report:?}"
                );
            }
        }
    }

    #[test]
    fn density_scales_with_the_arc_count_over_three() {
        for space in [circle(), projective_line()] {
            for level in 1..=7 {
                let coarse = ArcFamily::build(space, level).unwrap();
                let fine = ArcFamily::build(space, level + 1).unwrap();
                let got = fine.measure().unwrap().total / coarse.measure().unwrap().total;
                let want = fine.arc_count() as f64 / coarse.arc_count() as f64 / 3.0;
                assert!((got - want).abs() < 1e-12, "{space} level {level}");
            }
        }
    }
}
