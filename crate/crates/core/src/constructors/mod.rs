//! Certificate builders for the knot families, and condition checks for the
//! results whose constructions live outside this crate.

mod diagram;
mod disk;
mod genus1;
mod thresholds;
mod torus;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::certificate::{CertificateError, TorsionCertificate};
use crate::derivation::DerivationError;
use crate::presentation::{wirtinger, Diagram, Presentation, PresentationError, Slope};
use crate::word::WordError;

pub use diagram::positive_diagram_cert;
pub use disk::{singular_disk_cert, with_disk_axiom, DiskAxiom, DiskConjugators};
pub use genus1::{applicable_cases, genus1_cert, Genus1Case};
pub use thresholds::{alexander_genus1, montesinos_c, AlexanderReport, MontesinosReport, RootShape, ThresholdError};
pub use torus::torus_commutator_cert;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ConstructorError {
    #[error("slope condition violated: {0}")]
    SlopeCondition(String),
    #[error("case {case} requires a different sign of q (q = {q})")]
    CaseMismatch { case: u8, q: i64 },
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("presentation has no meridian and longitude")]
    MissingPeripheral,
    #[error("no certificate construction applies: {0}")]
    NotConstructible(String),
    #[error("construction went wrong: {0}")]
    Internal(String),
    #[error(transparent)]
    Presentation(#[from] PresentationError),
    #[error(transparent)]
    Certificate(#[from] CertificateError),
    #[error(transparent)]
    Derivation(#[from] DerivationError),
    #[error(transparent)]
    Word(#[from] WordError),
}

/// A knot family with its parameters.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum FamilySpec {
    Torus { p: i64, q: i64 },
    /// `C[2p, 2q]`.
    Genus1 { p: i64, q: i64 },
    Diagram { diagram: Diagram },
    /// A knot presentation with a disk relator over fresh conjugators.
    AxiomaticDisk { presentation: Presentation, p_count: u32, q_count: u32 },
    /// `τ`-twisted, `ω`-generalized Whitehead double.
    Whitehead { omega: i64, tau: i64 },
    Montesinos { tangles: Vec<Vec<i64>> },
    Cable { p: i64, q: i64 },
    Composite,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EvidenceKind {
    /// [`certificate_for`] builds a certificate for this entry.
    Certificate,
    /// The result rests on an argument that is not reproduced here.
    ExternalCitation,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassificationEntry {
    pub result: String,
    pub condition: String,
    pub applies: bool,
    pub evidence: EvidenceKind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassificationReport {
    pub slope: Slope,
    pub entries: Vec<ClassificationEntry>,
}

impl ClassificationReport {
    pub fn applicable(&self) -> impl Iterator<Item = &ClassificationEntry> {
        self.entries.iter().filter(|e| e.applies)
    }

    /// First applicable entry backed by a certificate construction.
    pub fn buildable(&self) -> Option<&ClassificationEntry> {
        self.applicable().find(|e| e.evidence == EvidenceKind::Certificate)
    }
}

fn entry(result: &str, condition: String, applies: bool, evidence: EvidenceKind, note: Option<&str>) -> ClassificationEntry {
    ClassificationEntry { result: result.into(), condition, applies, evidence, note: note.map(str::to_string) }
}

/// `m/n ≥ c` for `n ≥ 1`.
fn slope_at_least(s: Slope, c: i64) -> bool {
    s.m() >= c * s.n()
}

/// Which results give a generalized torsion element in `π₁(K(m/n))`.
pub fn classify(f: &FamilySpec, s: Slope) -> ClassificationReport {
    use EvidenceKind::{Certificate, ExternalCitation};
    let (m, n) = (s.m(), s.n());
    let entries = match f {
        FamilySpec::Torus { p, q } => vec![entry(
            "torus-commutator",
            format!("T({p},{q}) non-trivial, m/n finite"),
            crate::presentation::torus_presentation(*p, *q).is_ok(),
            Certificate,
            Some("[x,y] stays non-trivial unless the filled group is cyclic; not machine-checked"),
        )],
        FamilySpec::Cable { p, q } => vec![entry(
            "cable-seifert-piece",
            format!("|pqn - m| = |{}| != 1", p * q * n - m),
            (p * q * n - m).abs() != 1,
            ExternalCitation,
            Some("torsion in the Seifert fibered piece (external lemma)"),
        )],
        FamilySpec::Composite => vec![entry(
            "composite-seifert-piece",
            format!("n = {n} not in {{0, 1}}"),
            n != 0 && n != 1,
            ExternalCitation,
            Some("torsion in the Seifert fibered piece (external lemma)"),
        )],
        FamilySpec::Genus1 { p, q } => {
            let valid = *p > 0 && *q != 0;
            let mut out: Vec<ClassificationEntry> = [Genus1Case::One, Genus1Case::Two, Genus1Case::Three]
                .into_iter()
                .map(|c| {
                    let applies = valid && m != 0 && c.fits_q(*q) && c.holds(*p, *q, s);
                    entry(&format!("genus-one-case-{}", c.number()), c.condition().into(), applies, Certificate, None)
                })
                .collect();
            let disk_note = Some("singular spanning disk of C[2p,2q]; subsumed by the genus-one cases");
            out.push(entry("singular-disk", format!("m >= 2np = {}", 2 * n * p), valid && m >= 2 * n * p, ExternalCitation, disk_note));
            let mirrored = if *q > 0 { m <= -2 * n * q } else { m >= -2 * n * q };
            out.push(entry("singular-disk", format!("m vs -2nq = {}", -2 * n * q), valid && mirrored, ExternalCitation, disk_note));
            out
        }
        FamilySpec::Diagram { diagram } => {
            let (applies, condition) = match wirtinger(diagram) {
                Ok((_, d)) => {
                    let c = (d.p - d.k) as i64;
                    (d.negatives_on_base && c > 0 && m - n * c >= 0, format!("negatives under one overarc, m - n(p-k) = {} >= 0", m - n * c))
                }
                Err(e) => (false, format!("invalid diagram: {e}")),
            };
            vec![entry("positive-diagram", condition, applies, Certificate, None)]
        }
        FamilySpec::AxiomaticDisk { p_count, q_count, .. } => {
            let one_sided = (*p_count == 0) != (*q_count == 0);
            let (applies, condition) = if *q_count == 0 {
                (slope_at_least(s, i64::from(*p_count)), format!("m/n >= {p_count}"))
            } else {
                (m <= -i64::from(*q_count) * n, format!("m/n <= -{q_count}"))
            };
            vec![entry("singular-disk", condition, one_sided && applies, Certificate, Some("disk conjugators are adjoined symbols"))]
        }
        FamilySpec::Whitehead { omega, tau: _ } => vec![entry(
            "whitehead-double-disk",
            format!("omega < 0 and m/n >= 2|omega| = {}", 2 * omega.abs()),
            *omega < 0 && slope_at_least(s, 2 * omega.abs()),
            ExternalCitation,
            Some("threshold read as 2|omega| for the (2|omega|, 0) disk"),
        )],
        FamilySpec::Montesinos { tangles } => match montesinos_c(tangles) {
            Ok(r) => vec![entry(
                "montesinos-clasp-disk",
                format!("condition (*) and m/n >= c = {}", r.c),
                r.condition_star && slope_at_least(s, r.c),
                ExternalCitation,
                Some("c sums magnitudes; the literal signed sum is reported by montesinos_c"),
            )],
            Err(e) => vec![entry("montesinos-clasp-disk", format!("invalid tangles: {e}"), false, ExternalCitation, None)],
        },
    };
    ClassificationReport { slope: s, entries }
}

/// Builds the certificate behind the first applicable certificate entry.
pub fn certificate_for(f: &FamilySpec, s: Slope) -> Result<TorsionCertificate, ConstructorError> {
    let report = classify(f, s);
    let Some(e) = report.buildable() else {
        return Err(ConstructorError::NotConstructible(format!("no certificate construction applies at {s}")));
    };
    match f {
        FamilySpec::Torus { p, q } => {
            let cert = torus_commutator_cert(*p, *q)?;
            let filled = crate::presentation::dehn_fill(cert.presentation(), s)?;
            Ok(TorsionCertificate { membership: cert.membership.push_to(&filled)?, evidence: cert.evidence })
        }
        FamilySpec::Genus1 { p, q } => {
            let case = e.result.rsplit('-').next().and_then(|d| d.parse().ok()).and_then(Genus1Case::from_number);
            genus1_cert(*p, *q, s, case)
        }
        FamilySpec::Diagram { diagram } => positive_diagram_cert(diagram, s),
        FamilySpec::AxiomaticDisk { presentation, p_count, q_count } => {
            singular_disk_cert(&with_disk_axiom(presentation, *p_count, *q_count, DiskConjugators::Fresh)?, s)
        }
        _ => Err(ConstructorError::NotConstructible(e.result.clone())),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn slope(text: &str) -> Slope {
        text.parse().unwrap()
    }

    #[test]
    fn external_families() {
        let r = classify(&FamilySpec::Cable { p: 2, q: 3 }, slope("13"));
        assert!(r.entries[0].applies);
        assert_eq!(r.entries[0].evidence, EvidenceKind::ExternalCitation);
        assert!(!classify(&FamilySpec::Cable { p: 2, q: 3 }, slope("7")).entries[0].applies);
        assert!(classify(&FamilySpec::Composite, slope("5/2")).entries[0].applies);
        assert!(!classify(&FamilySpec::Composite, slope("5")).entries[0].applies);
        assert!(certificate_for(&FamilySpec::Composite, slope("5/2")).is_err());
        assert!(classify(&FamilySpec::Whitehead { omega: -2, tau: 1 }, slope("4")).entries[0].applies);
        assert!(!classify(&FamilySpec::Whitehead { omega: -2, tau: 1 }, slope("7/2")).entries[0].applies);
        assert!(classify(&FamilySpec::Montesinos { tangles: vec![vec![2, 1]] }, slope("2")).entries[0].applies);
    }

    #[test]
    fn buildable_entries_build() {
        let families = [
            FamilySpec::Torus { p: 2, q: 3 },
            FamilySpec::Genus1 { p: 1, q: 1 },
            FamilySpec::Genus1 { p: 1, q: -1 },
            FamilySpec::Genus1 { p: 2, q: 3 },
            FamilySpec::AxiomaticDisk { presentation: crate::presentation::lin_presentation(1, 1).unwrap(), p_count: 2, q_count: 0 },
        ];
        for f in &families {
            for s in ["1", "-1", "3/2", "-3/2", "5", "7/2", "-7"] {
                let report = classify(f, slope(s));
                match report.buildable() {
                    Some(_) => {
                        let cert = certificate_for(f, slope(s)).unwrap();
                        assert!(cert.verify().accepted(), "{f:?} at {s}");
                    }
                    None => assert!(certificate_for(f, slope(s)).is_err()),
                }
            }
        }
        let r = classify(&FamilySpec::Genus1 { p: 1, q: 1 }, slope("1"));
        assert_eq!(r.buildable().unwrap().result, "genus-one-case-1");
    }
}
