//! Catalog of the compact, connected, rank-one symmetric spaces.
//!
//! Every such space belongs to one of five families — spheres, real, complex,
//! and quaternionic projective spaces, and the octonionic projective plane —
//! and each family determines a real dimension and a pair of Jacobi
//! parameters `(α, β)` through which zonal averages of distance kernels
//! decompose.  [`SpaceKind::params`] returns that row of the catalog.
//!
//! The two families of real dimension one (the circle `S¹` and the projective
//! line `ℝP¹`) fall outside the density-bound machinery and instead carry the
//! arc counterexample; their exact geodesic metrics live here as
//! [`distance_s1`] and [`distance_rp1`].

use crate::error::{Error, Result};
use crate::jacobi::JacobiParams;

/// The five families of compact rank-one symmetric spaces.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SpaceFamily {
    /// The unit sphere `S^{n-1}` in `ℝ^n`.
    Sphere,
    /// The real projective space `ℝP^{n-1}`.
    RealProjective,
    /// The complex projective space `ℂP^{n-1}`.
    ComplexProjective,
    /// The quaternionic projective space `ℍP^{n-1}`.
    QuaternionicProjective,
    /// The octonionic projective plane `𝕆P²` (no free parameter).
    OctonionicPlane,
}

/// A concrete space: a family together with its integer parameter `n`.
///
/// The parameter follows the superscript convention `S^{n-1}`, `ℝP^{n-1}`,
/// `ℂP^{n-1}`, `ℍP^{n-1}`; the octonionic plane is a single space and stores
/// the fixed `n = 3`.  Textual names use the superscript itself: `"s2"` is
/// the two-sphere (`n = 3`), `"rp1"` the projective line (`n = 2`), `"op2"`
/// the octonionic plane.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
#[serde(into = "String", try_from = "String")]
pub struct SpaceKind {
    family: SpaceFamily,
    n: u32,
}

/// The catalog row of a space: its real dimension and Jacobi parameters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpaceParams {
    /// Dimension of the space as a real manifold.
    pub real_dimension: u64,
    /// The `(α, β)` pair attached to the family by the harmonic decomposition.
    pub jacobi: JacobiParams,
}

impl SpaceKind {
    /// Builds a space from a family and its parameter.
    ///
    /// All parametrized families require `n ≥ 2`; the octonionic plane
    /// admits only its fixed `n = 3`.
    pub fn new(family: SpaceFamily, n: u32) -> Result<Self> {
        match family {
            SpaceFamily::OctonionicPlane => {
                if n != 3 {
                    return Err(Error::domain(format!(
                        "the octonionic plane has no free parameter (got n = {n}, expected 3)"
                    )));
                }
            }
            _ => {
                if n < 2 {
                    return Err(Error::domain(format!(
                        "{family:?} requires n >= 2, got n = {n}"
                    )));
                }
            }
        }
        Ok(SpaceKind { family, n })
    }

    /// The family this space belongs to.
    pub fn family(&self) -> SpaceFamily {
        self.family
    }

    /// The integer parameter `n` (fixed at 3 for the octonionic plane).
    pub fn n(&self) -> u32 {
        self.n
    }

    /// Real dimension and Jacobi parameters for this space.
    pub fn params(&self) -> SpaceParams {
        let n = f64::from(self.n);
        let (real_dimension, alpha, beta) = match self.family {
            SpaceFamily::Sphere => (u64::from(self.n) - 1, (n - 3.0) / 2.0, (n - 3.0) / 2.0),
            SpaceFamily::RealProjective => (u64::from(self.n) - 1, (n - 3.0) / 2.0, -0.5),
            SpaceFamily::ComplexProjective => (2 * (u64::from(self.n) - 1), n - 2.0, 0.0),
            SpaceFamily::QuaternionicProjective => {
                (4 * (u64::from(self.n) - 1), 2.0 * n - 3.0, 1.0)
            }
            SpaceFamily::OctonionicPlane => (16, 7.0, 3.0),
        };
        let jacobi = JacobiParams::new(alpha, beta)
            .expect("catalog rows satisfy alpha, beta > -1 for every n >= 2");
        SpaceParams {
            real_dimension,
            jacobi,
        }
    }

    /// Whether the `2^-N` density bound applies to this space.
    ///
    /// True exactly when the real dimension is at least two — equivalently,
    /// when `α ≥ 0` — which is the hypothesis the distance-sequence
    /// construction needs.  The two spaces of real dimension one (`S¹` and
    /// `ℝP¹`) return false and are handled by the arc counterexample
    /// instead.
    pub fn density_bound_applies(&self) -> bool {
        self.params().real_dimension >= 2
    }
}

impl std::fmt::Display for SpaceKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let m = self.n - 1;
        match self.family {
            SpaceFamily::Sphere => write!(f, "s{m}"),
            SpaceFamily::RealProjective => write!(f, "rp{m}"),
            SpaceFamily::ComplexProjective => write!(f, "cp{m}"),
            SpaceFamily::QuaternionicProjective => write!(f, "hp{m}"),
            SpaceFamily::OctonionicPlane => write!(f, "op2"),
        }
    }
}

impl std::str::FromStr for SpaceKind {
    type Err = Error;

    /// Parses the case-insensitive names `s{m}`, `rp{m}`, `cp{m}`, `hp{m}`,
    /// and `op2`, where `m` is the superscript (so `s2` means `S²`, i.e.
    /// `n = 3`).
    fn from_str(s: &str) -> Result<Self> {
        let lower = s.trim().to_ascii_lowercase();
        let bad = || {
            Error::domain(format!(
                "unknown space name {s:?}; expected s<m>, rp<m>, cp<m>, hp<m>, or op2"
            ))
        };
        if lower == "op2" {
            return SpaceKind::new(SpaceFamily::OctonionicPlane, 3);
        }
        let (family, digits) = if let Some(rest) = lower.strip_prefix("rp") {
            (SpaceFamily::RealProjective, rest)
        } else if let Some(rest) = lower.strip_prefix("cp") {
            (SpaceFamily::ComplexProjective, rest)
        } else if let Some(rest) = lower.strip_prefix("hp") {
            (SpaceFamily::QuaternionicProjective, rest)
        } else if let Some(rest) = lower.strip_prefix('s') {
            (SpaceFamily::Sphere, rest)
        } else {
            return Err(bad());
        };
        let m: u32 = digits.parse().map_err(|_| bad())?;
        let n = m.checked_add(1).ok_or_else(bad)?;
        SpaceKind::new(family, n)
    }
}

impl From<SpaceKind> for String {
    fn from(kind: SpaceKind) -> String {
        kind.to_string()
    }
}

impl TryFrom<String> for SpaceKind {
    type Error = Error;

    fn try_from(value: String) -> Result<Self> {
        value.parse()
    }
}

fn check_unit(label: &str, v: [f64; 2]) -> Result<()> {
    let norm = v[0].hypot(v[1]);
    if (norm - 1.0).abs() > 1e-12 {
        return Err(Error::domain(format!(
            "{label} must be a unit vector (|{label}| = {norm})"
        )));
    }
    Ok(())
}

fn clamped_dot(x: [f64; 2], y: [f64; 2]) -> f64 {
    (x[0] * y[0] + x[1] * y[1]).clamp(-1.0, 1.0)
}

/// Geodesic distance on the circle `S¹`: `d(x, y) = arccos(x · y)`.
///
/// Inputs must be unit vectors in the plane (within `1e-12`); the dot
/// product is clamped to `[-1, 1]` before the arccosine to absorb rounding.
pub fn distance_s1(x: [f64; 2], y: [f64; 2]) -> Result<f64> {
    check_unit("x", x)?;
    check_unit("y", y)?;
    Ok(clamped_dot(x, y).acos())
}

/// Geodesic distance on the projective line `ℝP¹`:
/// `d(x, y) = arccos(2 (x · y)² - 1)`.
///
/// Points are given by unit-vector representatives; the formula is invariant
/// under negating either argument, which realizes the antipodal
/// identification `x ~ -x`.
pub fn distance_rp1(x: [f64; 2], y: [f64; 2]) -> Result<f64> {
    check_unit("x", x)?;
    check_unit("y", y)?;
    let c = clamped_dot(x, y);
    Ok((2.0 * c * c - 1.0).clamp(-1.0, 1.0).acos())
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use std::f64::consts::{FRAC_PI_2, FRAC_PI_3, FRAC_PI_4, PI, TAU};

    fn kind(family: SpaceFamily, n: u32) -> SpaceKind {
        SpaceKind::new(family, n).unwrap()
    }

    fn rotate(v: [f64; 2], angle: f64) -> [f64; 2] {
        let (s, c) = angle.sin_cos();
        [c * v[0] - s * v[1], s * v[0] + c * v[1]]
    }

    #[test]
    fn catalog_rows_match_known_values() {
        let s2 = kind(SpaceFamily::Sphere, 3).params();
        assert_eq!(s2.real_dimension, 2);
        assert_eq!((s2.jacobi.alpha(), s2.jacobi.beta()), (0.0, 0.0));

        let op2 = kind(SpaceFamily::OctonionicPlane, 3).params();
        assert_eq!(op2.real_dimension, 16);
        assert_eq!((op2.jacobi.alpha(), op2.jacobi.beta()), (7.0, 3.0));

        let cp3 = kind(SpaceFamily::ComplexProjective, 4).params();
        assert_eq!(cp3.real_dimension, 6);
        assert_eq!((cp3.jacobi.alpha(), cp3.jacobi.beta()), (2.0, 0.0));

        let rp2 = kind(SpaceFamily::RealProjective, 3).params();
        assert_eq!(rp2.real_dimension, 2);
        assert_eq!((rp2.jacobi.alpha(), rp2.jacobi.beta()), (0.0, -0.5));

        let hp1 = kind(SpaceFamily::QuaternionicProjective, 2).params();
        assert_eq!(hp1.real_dimension, 4);
        assert_eq!((hp1.jacobi.alpha(), hp1.jacobi.beta()), (1.0, 1.0));
    }

    #[test]
    fn catalog_is_consistent_for_small_n() {
        let families = [
            SpaceFamily::Sphere,
            SpaceFamily::RealProjective,
            SpaceFamily::ComplexProjective,
            SpaceFamily::QuaternionicProjective,
        ];
        for family in families {
            for n in 2..=20 {
                let space = kind(family, n);
                let params = space.params();
                assert!(params.real_dimension > 0);
                assert!(params.jacobi.alpha() >= params.jacobi.beta());
                assert_eq!(
                    params.real_dimension >= 2,
                    params.jacobi.alpha() >= 0.0,
                    "dimension gate must coincide with alpha >= 0 for {space}"
                );
                assert_eq!(space.density_bound_applies(), params.real_dimension >= 2);
            }
        }
        let op2 = kind(SpaceFamily::OctonionicPlane, 3);
        assert!(op2.density_bound_applies());
    }

    #[test]
    fn dimension_gate_matches_examples() {
        assert!(!kind(SpaceFamily::Sphere, 2).density_bound_applies());
        assert!(kind(SpaceFamily::Sphere, 3).density_bound_applies());
        assert!(!kind(SpaceFamily::RealProjective, 2).density_bound_applies());
    }

    #[test]
    fn constructor_rejects_bad_parameters() {
        assert!(SpaceKind::new(SpaceFamily::Sphere, 1).is_err());
        assert!(SpaceKind::new(SpaceFamily::ComplexProjective, 0).is_err());
        assert!(SpaceKind::new(SpaceFamily::OctonionicPlane, 2).is_err());
    }

    #[test]
    fn names_parse_and_round_trip() {
        let cases = [
            ("s2", SpaceFamily::Sphere, 3),
            ("s1", SpaceFamily::Sphere, 2),
            ("rp1", SpaceFamily::RealProjective, 2),
            ("rp2", SpaceFamily::RealProjective, 3),
            ("cp3", SpaceFamily::ComplexProjective, 4),
            ("hp2", SpaceFamily::QuaternionicProjective, 3),
            ("op2", SpaceFamily::OctonionicPlane, 3),
        ];
        for (name, family, n) in cases {
            let parsed: SpaceKind = name.parse().unwrap();
            assert_eq!(parsed, kind(family, n), "parsing {name}");
            assert_eq!(parsed.to_string(), name);
            let upper: SpaceKind = name.to_ascii_uppercase().parse().unwrap();
            assert_eq!(upper, parsed);
        }
        for bad in ["", "s", "s0", "rp0", "op3", "q2", "sp2", "s-1", "plane"] {
            assert!(bad.parse::<SpaceKind>().is_err(), "{bad:?} should not parse");
        }
    }

    #[test]
    fn serde_uses_the_name_form() {
        let space = kind(SpaceFamily::ComplexProjective, 3);
        let json = serde_json::to_string(&space).unwrap();
        assert_eq!(json, "\"cp2\"");
        let back: SpaceKind = serde_json::from_str(&json).unwrap();
        assert_eq!(back, space);
        assert!(serde_json::from_str::<SpaceKind>("\"op9\"").is_err());
    }

    #[test]
    fn circle_distance_matches_examples() {
        let e1 = [1.0, 0.0];
        let e2 = [0.0, 1.0];
        assert_eq!(distance_s1(e1, e1).unwrap(), 0.0);
        assert!((distance_s1(e1, e2).unwrap() - FRAC_PI_2).abs() < 1e-15);
        let r = rotate(e1, FRAC_PI_3);
        assert!((distance_s1(e1, r).unwrap() - FRAC_PI_3).abs() < 1e-12);
    }

    #[test]
    fn projective_distance_matches_examples() {
        let e1 = [1.0, 0.0];
        let e2 = [0.0, 1.0];
        assert_eq!(distance_rp1(e1, [-1.0, 0.0]).unwrap(), 0.0);
        assert!((distance_rp1(e1, e2).unwrap() - PI).abs() < 1e-15);
        let r = rotate(e1, FRAC_PI_4);
        assert!((distance_rp1(e1, r).unwrap() - FRAC_PI_2).abs() < 1e-12);
    }

    #[test]
    fn projective_distance_ignores_representatives() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for _ in 0..1000 {
            let x = rotate([1.0, 0.0], rng.random_range(0.0..TAU));
            let y = rotate([1.0, 0.0], rng.random_range(0.0..TAU));
            let d = distance_rp1(x, y).unwrap();
            assert_eq!(distance_rp1([-x[0], -x[1]], y).unwrap(), d);
            assert_eq!(distance_rp1(x, [-y[0], -y[1]]).unwrap(), d);
        }
    }

    #[test]
    fn metric_axioms_hold_on_samples() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        for _ in 0..10_000 {
            let x = rotate([1.0, 0.0], rng.random_range(0.0..TAU));
            let y = rotate([1.0, 0.0], rng.random_range(0.0..TAU));
            let z = rotate([1.0, 0.0], rng.random_range(0.0..TAU));
            for metric in [distance_s1, distance_rp1] {
                let dxy = metric(x, y).unwrap();
                let dyx = metric(y, x).unwrap();
                let dyz = metric(y, z).unwrap();
                let dxz = metric(x, z).unwrap();
                assert!((dxy - dyx).abs() <= 1e-12);
                assert!(dxz <= dxy + dyz + 1e-12);
                assert!((0.0..=PI).contains(&dxz));
            }
        }
    }

    #[test]
    fn non_unit_inputs_are_rejected() {
        let long = [2.0, 0.0];
        let unit = [1.0, 0.0];
        assert!(matches!(distance_s1(long, unit), Err(Error::Domain(_))));
        assert!(matches!(distance_rp1(unit, long), Err(Error::Domain(_))));
    }
}
