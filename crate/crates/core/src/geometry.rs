//! Slope lengths, volume bounds and the hyperbolicity and geodesic
//! certificates built from them.
//!
//! Cusp geometry is modelled by the rectangular lattice spanned by a
//! parallel step 𝐩 and an orthogonal step 𝐨 on the boundary torus of a
//! crossing circle, with the calibrated lower bounds |𝐩| ≥ 1/2 and
//! |𝐨| ≥ 1 taken as given. Every threshold test is decided on integers or
//! rationals; floats are only reported.

use std::f64::consts::TAU;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use serde::Serialize;
use thiserror::Error;

/// Volume of the regular ideal hyperbolic octahedron.
pub const V8: f64 = 3.66386;
/// Normalized-length threshold for the geodesic certificate.
pub const HK: f64 = 7.5832;
pub const SIX: f64 = 6.0;
pub const TWO_PI: f64 = TAU;

/// 7.5832 as a fraction of 10⁴, for exact comparisons.
const HK_NUMERATOR: i64 = 75_832;
const HK_DENOMINATOR: i64 = 10_000;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Constants {
    pub v8: f64,
    pub two_pi: f64,
    pub hk: f64,
    pub six: f64,
}

impl Default for Constants {
    fn default() -> Self {
        Constants {
            v8: V8,
            two_pi: TWO_PI,
            hk: HK,
            six: SIX,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GeometryError {
    #[error("no crossing circles given")]
    NoCircles,
    #[error("lattice lengths must be positive and finite")]
    BadLength,
    #[error("twist region count must be at least 1")]
    NoTwistRegions,
    #[error("circle {circle} has no half-twists; the certificate does not apply")]
    Untwisted { circle: usize },
}

/// A lattice vector a·𝐩 + b·𝐨.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct LatticeVector {
    pub p: i64,
    pub o: i64,
}

/// Homology generators of a crossing-circle cusp in (𝐩, 𝐨) coordinates.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Generators {
    pub mu: LatticeVector,
    pub lambda: LatticeVector,
}

impl Generators {
    /// Determinant of (μ, λ) in lattice steps.
    pub fn determinant(&self) -> i64 {
        self.mu.p * self.lambda.o - self.mu.o * self.lambda.p
    }

    /// μ + nλ.
    pub fn slope(&self, n: i64) -> LatticeVector {
        LatticeVector {
            p: self.mu.p + n * self.lambda.p,
            o: self.mu.o + n * self.lambda.o,
        }
    }
}

/// λ = 2𝐨 and μ = 𝐩 + ε𝐨.
pub fn lattice_generators(epsilon: u8) -> Generators {
    Generators {
        mu: LatticeVector {
            p: 1,
            o: epsilon as i64,
        },
        lambda: LatticeVector { p: 0, o: 2 },
    }
}

/// Signed filling coefficient that places the slope μ + nλ at |ε + 2n| = c
/// steps of 𝐨.
pub fn lattice_coefficient(c: u64) -> i64 {
    let c = c as i64;
    if c % 2 == 0 {
        c / 2
    } else {
        -(c + 1) / 2
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LatticeBasis {
    pub p_len: f64,
    pub o_len: f64,
    pub epsilon: u8,
}

impl LatticeBasis {
    pub fn new(p_len: f64, o_len: f64, epsilon: u8) -> Result<LatticeBasis, GeometryError> {
        check_lengths(p_len, o_len)?;
        Ok(LatticeBasis {
            p_len,
            o_len,
            epsilon,
        })
    }

    /// The smallest lattice allowed in a calibrated maximal cusp.
    pub fn calibrated(epsilon: u8) -> LatticeBasis {
        LatticeBasis {
            p_len: 0.5,
            o_len: 1.0,
            epsilon,
        }
    }

    /// Two rectangles of sides |𝐩| and |𝐨| tile the torus.
    pub fn area(&self) -> f64 {
        2.0 * self.p_len * self.o_len
    }

    pub fn generators(&self) -> Generators {
        lattice_generators(self.epsilon)
    }

    pub fn length(&self, v: LatticeVector) -> f64 {
        (self.p_len * v.p as f64).hypot(self.o_len * v.o as f64)
    }

    pub fn slope_length(&self, n: i64) -> f64 {
        self.length(self.generators().slope(n))
    }
}

fn check_lengths(p_len: f64, o_len: f64) -> Result<(), GeometryError> {
    if p_len > 0.0 && o_len > 0.0 && p_len.is_finite() && o_len.is_finite() {
        Ok(())
    } else {
        Err(GeometryError::BadLength)
    }
}

/// √(1/4 + c²).
pub fn slope_length_lower_bound(c: u64) -> f64 {
    let c = c as f64;
    (0.25 + c * c).sqrt()
}

/// √(p² + c²o²) / √(2po): the length of 𝐩 + c𝐨 over the square root of
/// the cusp area.
pub fn normalized_length(p_len: f64, o_len: f64, c: u64) -> Result<f64, GeometryError> {
    check_lengths(p_len, o_len)?;
    let c = c as f64;
    let len = p_len.hypot(c * o_len);
    Ok(len / (2.0 * p_len * o_len).sqrt())
}

/// √c, the minimum of [`normalized_length`] over all lattice shapes.
pub fn normalized_length_lower_bound(c: u64) -> f64 {
    (c as f64).sqrt()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SlopeEstimate {
    pub c: u64,
    pub length_lb: f64,
    pub normalized_lb: f64,
}

pub fn slope_estimate(c: u64) -> SlopeEstimate {
    SlopeEstimate {
        c,
        length_lb: slope_length_lower_bound(c),
        normalized_lb: normalized_length_lower_bound(c),
    }
}

/// √(1/4 + c²) > 6, decided on integers: 4c² + 1 > 144.
pub fn exceeds_six(c: u64) -> bool {
    let c = c as u128;
    4 * c * c + 1 > 144
}

/// √(1/4 + c²) > 2π. Since 4π² lies in (36.25, 49.25), this holds exactly
/// when c ≥ 7.
pub fn exceeds_two_pi(c: u64) -> bool {
    c >= 7
}

pub const ATTESTATION: &str = "augmentation S^3 - L is hyperbolic (user attestation)";

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct HyperbolicCertificate {
    pub certified: bool,
    pub reasons: Vec<String>,
}

/// Dehn filling along slopes longer than 6 keeps the augmentation
/// hyperbolic, so K is hyperbolic once every region has at least six
/// half-twists.
pub fn six_theorem_certificate(
    cs: &[u64],
    attested_hyperbolic: bool,
) -> Result<HyperbolicCertificate, GeometryError> {
    if cs.is_empty() {
        return Err(GeometryError::NoCircles);
    }
    let mut reasons = Vec::new();
    if !attested_hyperbolic {
        reasons.push("missing hyperbolicity attestation for the augmentation".to_owned());
    }
    for (i, &c) in cs.iter().enumerate() {
        if !exceeds_six(c) {
            reasons.push(format!(
                "circle {}: slope length bound sqrt({}) = {} is not above 6",
                i + 1,
                significant(0.25 + (c as f64).powi(2)),
                significant(slope_length_lower_bound(c)),
            ));
        }
    }
    Ok(HyperbolicCertificate {
        certified: reasons.is_empty(),
        reasons,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GeodesicCertificate {
    pub certified: bool,
    /// Σ 1/c_i.
    pub sum: f64,
    pub sum_exact: String,
    /// 1/7.5832².
    pub threshold: f64,
    pub threshold_exact: String,
    pub reasons: Vec<String>,
}

/// 1/7.5832² as an exact fraction.
pub fn geodesic_threshold() -> BigRational {
    let n = BigInt::from(HK_NUMERATOR);
    let d = BigInt::from(HK_DENOMINATOR);
    BigRational::new(&d * &d, &n * &n)
}

pub fn reciprocal_sum(cs: &[u64]) -> BigRational {
    cs.iter().fold(BigRational::zero(), |acc, &c| {
        acc + BigRational::new(BigInt::from(1), BigInt::from(c))
    })
}

/// The crossing circles are isotopic to geodesics in the filled manifold
/// when Σ 1/c_i < 1/7.5832², since the squared normalized length of each
/// filling slope is at least c_i.
pub fn geodesic_certificate(
    cs: &[u64],
    attested_hyperbolic: bool,
) -> Result<GeodesicCertificate, GeometryError> {
    if cs.is_empty() {
        return Err(GeometryError::NoCircles);
    }
    if let Some(i) = cs.iter().position(|&c| c == 0) {
        return Err(GeometryError::Untwisted { circle: i + 1 });
    }
    let sum = reciprocal_sum(cs);
    let threshold = geodesic_threshold();
    let mut reasons = Vec::new();
    if !attested_hyperbolic {
        reasons.push("missing hyperbolicity attestation for the augmentation".to_owned());
    }
    if sum >= threshold {
        reasons.push(format!(
            "sum of 1/c_i = {} is not below 1/7.5832^2 = {}",
            significant(sum.to_f64().unwrap_or(f64::INFINITY)),
            significant(threshold.to_f64().unwrap_or(0.0)),
        ));
    }
    Ok(GeodesicCertificate {
        certified: reasons.is_empty(),
        sum: sum.to_f64().unwrap_or(f64::INFINITY),
        sum_exact: sum.to_string(),
        threshold: threshold.to_f64().unwrap_or(0.0),
        threshold_exact: threshold.to_string(),
        reasons,
    })
}

/// 2·v8·(tw − 1).
pub fn augmentation_volume_lower_bound(tw: usize) -> Result<f64, GeometryError> {
    if tw < 1 {
        return Err(GeometryError::NoTwistRegions);
    }
    Ok(2.0 * V8 * (tw - 1) as f64)
}

/// Euler characteristic of the augmentation cut along its reflection
/// surface, 2 − 2·tw.
pub fn euler_char_cut(tw: usize) -> Result<i64, GeometryError> {
    if tw < 1 {
        return Err(GeometryError::NoTwistRegions);
    }
    Ok(2 - 2 * tw as i64)
}

/// (1 − (2π/ℓ)²)^{3/2} with ℓ = √(1/4 + c²), when ℓ > 2π.
pub fn filling_volume_factor(c_min: u64) -> Option<f64> {
    if !exceeds_two_pi(c_min) {
        return None;
    }
    let c = c_min as f64;
    let ratio = TWO_PI * TWO_PI / (0.25 + c * c);
    Some((1.0 - ratio).powf(1.5))
}

pub fn filled_volume_lower_bound(tw: usize, c_min: u64) -> Result<Option<f64>, GeometryError> {
    let base = augmentation_volume_lower_bound(tw)?;
    Ok(filling_volume_factor(c_min).map(|f| f * base))
}

/// Formats with six significant digits, dropping trailing zeros.
pub fn significant(x: f64) -> String {
    if x == 0.0 || !x.is_finite() {
        return format!("{x}");
    }
    let sci = format!("{x:.5e}");
    let (mantissa, exp) = sci.split_once('e').unwrap();
    let exp: i32 = exp.parse().unwrap();
    if (-5..6).contains(&exp) {
        let decimals = (5 - exp).max(0) as usize;
        let fixed = format!("{x:.decimals$}");
        if fixed.contains('.') {
            fixed.trim_end_matches('0').trim_end_matches('.').to_owned()
        } else {
            fixed
        }
    } else {
        let mantissa = if mantissa.contains('.') {
            mantissa.trim_end_matches('0').trim_end_matches('.')
        } else {
            mantissa
        };
        format!("{mantissa}e{exp}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol
    }

    #[test]
    fn slope_lengths() {
        assert_eq!(slope_length_lower_bound(0), 0.5);
        assert!(close(slope_length_lower_bound(7), 49.25f64.sqrt(), 1e-15));
        assert!(close(slope_length_lower_bound(7), 7.017834, 1e-6));
        assert!(close(slope_length_lower_bound(6), 6.020797, 1e-6));
        assert!(exceeds_six(6) && !exceeds_six(5));
        assert!(exceeds_two_pi(7) && !exceeds_two_pi(6));
        assert!(slope_length_lower_bound(6) < TWO_PI);
    }

    #[test]
    fn normalized_lengths() {
        assert!(close(
            normalized_length(3.0, 1.0, 3).unwrap(),
            3f64.sqrt(),
            1e-15
        ));
        assert!(close(
            normalized_length(1.0, 1.0, 0).unwrap(),
            0.5f64.sqrt(),
            1e-15
        ));
        assert!(close(
            normalized_length(2.0, 1.0, 4).unwrap(),
            5f64.sqrt(),
            1e-15
        ));
        assert_eq!(
            normalized_length(0.0, 1.0, 2),
            Err(GeometryError::BadLength)
        );
        assert_eq!(normalized_length_lower_bound(4), 2.0);
        assert!(normalized_length_lower_bound(58) > HK);
        assert!(normalized_length_lower_bound(57) < HK);
    }

    #[test]
    fn generators_and_slopes() {
        let g0 = lattice_generators(0);
        assert_eq!(g0.mu, LatticeVector { p: 1, o: 0 });
        assert_eq!(g0.lambda, LatticeVector { p: 0, o: 2 });
        let g1 = lattice_generators(1);
        assert_eq!(g1.mu, LatticeVector { p: 1, o: 1 });
        assert_eq!(g1.determinant().abs(), 2);
        for c in 0..50u64 {
            let eps = (c % 2) as u8;
            let s = lattice_generators(eps).slope(lattice_coefficient(c));
            assert_eq!(s.p, 1);
            assert_eq!(s.o.unsigned_abs(), c);
            let basis = LatticeBasis::calibrated(eps);
            assert!(close(
                basis.slope_length(lattice_coefficient(c)),
                slope_length_lower_bound(c),
                1e-12
            ));
        }
    }

    #[test]
    fn six_theorem() {
        assert!(six_theorem_certificate(&[6, 6, 6], true).unwrap().certified);
        let no = six_theorem_certificate(&[6, 5], true).unwrap();
        assert!(!no.certified);
        assert_eq!(
            no.reasons,
            vec!["circle 2: slope length bound sqrt(25.25) = 5.02494 is not above 6"]
        );
        let unattested = six_theorem_certificate(&[100], false).unwrap();
        assert!(!unattested.certified);
        assert!(unattested.reasons[0].contains("attestation"));
        assert_eq!(
            six_theorem_certificate(&[], true),
            Err(GeometryError::NoCircles)
        );
    }

    #[test]
    fn geodesics() {
        assert_eq!(geodesic_threshold().to_string(), "1562500/89851441");
        assert!(geodesic_certificate(&[58], true).unwrap().certified);
        assert!(!geodesic_certificate(&[57], true).unwrap().certified);
        assert!(geodesic_certificate(&[116, 116], true).unwrap().certified);
        assert!(!geodesic_certificate(&[115, 115], true).unwrap().certified);
        let g = geodesic_certificate(&[116, 116], true).unwrap();
        assert_eq!(g.sum_exact, "1/58");
        assert!(close(g.threshold, 0.0173898, 1e-7));
        assert!(!geodesic_certificate(&[58], false).unwrap().certified);
        assert_eq!(
            geodesic_certificate(&[3, 0], true),
            Err(GeometryError::Untwisted { circle: 2 })
        );
    }

    #[test]
    fn volumes() {
        assert_eq!(augmentation_volume_lower_bound(1).unwrap(), 0.0);
        assert!(close(
            augmentation_volume_lower_bound(2).unwrap(),
            7.32772,
            1e-12
        ));
        assert!(close(
            augmentation_volume_lower_bound(11).unwrap(),
            73.2772,
            1e-10
        ));
        assert!(augmentation_volume_lower_bound(0).is_err());
        assert_eq!(euler_char_cut(1).unwrap(), 0);
        assert_eq!(euler_char_cut(3).unwrap(), -4);
        let f = filled_volume_lower_bound(2, 7).unwrap().unwrap();
        assert!(f > 0.64756 && f < 0.648, "{f}");
        assert_eq!(filled_volume_lower_bound(5, 6).unwrap(), None);
        assert!(filling_volume_factor(1_000_000).unwrap() > 0.999999);
    }

    #[test]
    fn six_digits() {
        assert_eq!(significant(7.32772), "7.32772");
        assert_eq!(significant(0.0), "0");
        assert_eq!(significant(73.27720000001), "73.2772");
        assert_eq!(significant(0.017241379310), "0.0172414");
        assert_eq!(significant(2.0), "2");
        assert_eq!(significant(1234567.0), "1.23457e6");
        assert_eq!(significant(-4.0), "-4");
        assert_eq!(significant(999999.7), "1e6");
    }
}
