//! End-to-end analysis of one diagram and the certificate report.

use std::fmt::Write as _;

use serde::Serialize;
use thiserror::Error;

use crate::augment::{augment, AugmentError, AugmentedLink};
use crate::diagram::link_components;
use crate::format::ParsedInput;
use crate::geometry::{
    augmentation_volume_lower_bound, euler_char_cut, filled_volume_lower_bound,
    filling_volume_factor, geodesic_certificate, significant, six_theorem_certificate,
    slope_estimate, Constants, GeodesicCertificate, GeometryError, HyperbolicCertificate,
    ATTESTATION,
};
use crate::twist::{build_selection, reduce_to_alternating, Prepared, TwistError, TwistSelection};

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct AnalysisOptions {
    pub attest_hyperbolic: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AnalysisError {
    #[error(transparent)]
    Twist(#[from] TwistError),
    #[error(transparent)]
    Augment(#[from] AugmentError),
    #[error(transparent)]
    Geometry(#[from] GeometryError),
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DiagramSummary {
    pub crossings: usize,
    pub components: usize,
    /// Crossings removed by Reidemeister II cancellation before selection.
    pub cancelled_crossings: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CircleReport {
    pub id: usize,
    pub m: usize,
    pub c: u64,
    pub epsilon: u8,
    pub n: u64,
    pub sign: i8,
    pub slope_length_lb: f64,
    pub normalized_length_lb: f64,
    pub reflection_curves: u8,
    /// Crossings of the analyzed diagram in this circle's twist region.
    pub crossings: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Certificates {
    pub hyperbolic_6thm: HyperbolicCertificate,
    pub geodesic_hk: GeodesicCertificate,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VolumeReport {
    pub augmentation_lb: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub filled_lb: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub filling_factor: Option<f64>,
    pub euler_char_cut: i64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CertificateReport {
    pub name: Option<String>,
    pub diagram: DiagramSummary,
    pub hypotheses: Vec<String>,
    pub attested_hyperbolic: bool,
    pub tw: usize,
    pub circles: Vec<CircleReport>,
    pub certificates: Certificates,
    pub volume: VolumeReport,
    pub constants: Constants,
}

#[derive(Debug, Clone)]
pub struct Analysis {
    pub prepared: Prepared,
    pub selection: TwistSelection,
    pub augmented: AugmentedLink,
    pub report: CertificateReport,
}

/// Reduce, select, augment and certify.
pub fn analyze(input: &ParsedInput, options: &AnalysisOptions) -> Result<Analysis, AnalysisError> {
    input
        .diagram
        .require_connected()
        .map_err(TwistError::from)?;
    let prepared = reduce_to_alternating(&input.diagram, &input.annotations)?;
    let selection = build_selection(&prepared.diagram, &prepared.annotations)?;
    let augmented = augment(&prepared.diagram, &selection)?;
    let report = certify(&input.diagram, &prepared, &selection, &augmented, options)?;
    Ok(Analysis {
        prepared,
        selection,
        augmented,
        report,
    })
}

fn certify(
    original: &crate::diagram::Diagram,
    prepared: &Prepared,
    selection: &TwistSelection,
    augmented: &AugmentedLink,
    options: &AnalysisOptions,
) -> Result<CertificateReport, GeometryError> {
    let attested = options.attest_hyperbolic;
    let cs = augmented.half_twists();
    let tw = augmented.tw();
    let circles = augmented
        .circles()
        .iter()
        .zip(selection.regions())
        .map(|(circle, region)| {
            let est = slope_estimate(circle.half_twists);
            CircleReport {
                id: circle.id,
                m: circle.strand_count,
                c: circle.half_twists,
                epsilon: circle.epsilon,
                n: circle.filling_n,
                sign: circle.sign.value(),
                slope_length_lb: est.length_lb,
                normalized_length_lb: est.normalized_lb,
                reflection_curves: circle.reflection_curves(),
                crossings: region.crossing_ids.iter().copied().collect(),
            }
        })
        .collect();
    let c_min = cs.iter().copied().min().unwrap_or(0);
    let mut hypotheses = vec![ATTESTATION.to_owned()];
    if !prepared.annotations.is_empty() {
        hypotheses.push(
            "twisting disks of annotated regions are disjoint in S^3 (not checked)".to_owned(),
        );
    }
    let volume = VolumeReport {
        augmentation_lb: augmentation_volume_lower_bound(tw)?,
        filled_lb: filled_volume_lower_bound(tw, c_min)?,
        filling_factor: filling_volume_factor(c_min),
        euler_char_cut: euler_char_cut(tw)?,
    };
    Ok(CertificateReport {
        name: original.name().map(str::to_owned),
        diagram: DiagramSummary {
            crossings: original.crossing_count(),
            components: link_components(original).component_count,
            cancelled_crossings: original.crossing_count() - prepared.diagram.crossing_count(),
        },
        hypotheses,
        attested_hyperbolic: attested,
        tw,
        circles,
        certificates: Certificates {
            hyperbolic_6thm: six_theorem_certificate(&cs, attested)?,
            geodesic_hk: geodesic_certificate(&cs, attested)?,
        },
        volume,
        constants: Constants::default(),
    })
}

pub fn to_json(report: &CertificateReport) -> String {
    serde_json::to_string_pretty(report).expect("report serializes")
}

fn status(certified: bool) -> &'static str {
    if certified {
        "certified"
    } else {
        "not certified"
    }
}

/// Human-readable report; numbers to six significant digits.
pub fn render_text(r: &CertificateReport) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "{}", r.name.as_deref().unwrap_or("(unnamed diagram)"));
    let _ = write!(
        out,
        "  crossings {}, components {}, tw {}",
        r.diagram.crossings, r.diagram.components, r.tw
    );
    if r.diagram.cancelled_crossings > 0 {
        let _ = write!(
            out,
            " ({} crossings cancelled)",
            r.diagram.cancelled_crossings
        );
    }
    out.push('\n');
    for c in &r.circles {
        let _ = writeln!(
            out,
            "  circle {}: m={} c={} eps={} n={} slope length >= {}, normalized >= {}",
            c.id,
            c.m,
            c.c,
            c.epsilon,
            c.n,
            significant(c.slope_length_lb),
            significant(c.normalized_length_lb)
        );
    }
    let h = &r.certificates.hyperbolic_6thm;
    let _ = writeln!(out, "  hyperbolic (6-theorem): {}", status(h.certified));
    for reason in &h.reasons {
        let _ = writeln!(out, "    - {reason}");
    }
    let g = &r.certificates.geodesic_hk;
    let _ = writeln!(
        out,
        "  geodesic circles: {} (sum 1/c = {}, threshold {})",
        status(g.certified),
        significant(g.sum),
        significant(g.threshold)
    );
    for reason in &g.reasons {
        let _ = writeln!(out, "    - {reason}");
    }
    let v = &r.volume;
    let filled = v
        .filled_lb
        .map(|f| format!(">= {}", significant(f)))
        .unwrap_or_else(|| "n/a (needs c >= 7)".to_owned());
    let _ = writeln!(
        out,
        "  volume: augmentation >= {}, filled {}, chi(cut) = {}",
        significant(v.augmentation_lb),
        filled,
        v.euler_char_cut
    );
    let _ = writeln!(out, "  hypotheses:");
    for hyp in &r.hypotheses {
        let _ = writeln!(out, "    - {hyp}");
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::format::{parse_input, ParseOptions};

    fn run(text: &str, attest: bool) -> Result<Analysis, AnalysisError> {
        let parsed = parse_input(text, &ParseOptions::default()).unwrap();
        analyze(
            &parsed,
            &AnalysisOptions {
                attest_hyperbolic: attest,
            },
        )
    }

    #[test]
    fn figure_eight_report() {
        let a = run(
            r#"{"name": "figure-8", "pd": [[4,2,5,1],[8,6,1,5],[6,3,7,4],[2,7,3,8]]}"#,
            false,
        )
        .unwrap();
        let r = &a.report;
        assert_eq!(r.tw, 2);
        assert_eq!(
            r.circles.iter().map(|c| c.c).collect::<Vec<_>>(),
            vec![2, 2]
        );
        assert!(!r.certificates.hyperbolic_6thm.certified);
        assert_eq!(r.certificates.hyperbolic_6thm.reasons.len(), 3);
        assert_eq!(r.volume.euler_char_cut, -2);
        assert_eq!(r.volume.filled_lb, None);
        let text = render_text(r);
        assert!(text.contains("volume: augmentation >= 7.32772"));
        assert!(text.starts_with("figure-8\n"));
    }

    #[test]
    fn annotated_c58_is_geodesic() {
        // the (2, 58) torus link: one twist region of 58 crossings
        let d = crate::braid::braid_closure(2, &[1; 58]).unwrap();
        let ann = crate::twist::RegionAnnotation {
            crossing_ids: (0..58).collect(),
            strand_count: 2,
            declared_half_twists: 58,
        };
        let text = crate::format::to_json(&d, &[ann]);
        let a = run(&text, true).unwrap();
        assert!(a.report.certificates.geodesic_hk.certified);
        assert_eq!(a.report.circles[0].c, 58);
    }

    #[test]
    fn reduction_is_reported() {
        let d = crate::braid::braid_closure(3, &[2, 1, -1, 2, 1]).unwrap();
        let a = run(&crate::format::to_json(&d, &[]), false).unwrap();
        assert_eq!(a.report.diagram.cancelled_crossings, 2);
        assert_eq!(a.report.diagram.crossings, 5);
    }

    #[test]
    fn unknot_is_refused() {
        assert_eq!(
            run("[]", true).unwrap_err(),
            AnalysisError::Augment(AugmentError::NoRegions)
        );
    }

    #[test]
    fn json_is_deterministic() {
        let t = "[[1,4,2,5],[3,6,4,1],[5,2,6,3]]";
        let a = to_json(&run(t, true).unwrap().report);
        let b = to_json(&run(t, true).unwrap().report);
        assert_eq!(a, b);
        let v: serde_json::Value = serde_json::from_str(&a).unwrap();
        assert_eq!(v["circles"][0]["epsilon"], 1);
        assert!(v["volume"].get("filled_lb").is_none());
    }
}
