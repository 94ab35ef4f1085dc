//! Meridians of knots with a one-signed singular spanning disk.
//!
//! A `(p, 0)` disk gives `λ μ^p = ∏_{i≤p} α_i μ α_i⁻¹` for some elements
//! `α_i`; a `(0, q)` disk gives `λ μ^{-q} = ∏_{j≤q} β_j μ⁻¹ β_j⁻¹`. The
//! elements are not computed from a disk: they are adjoined as free symbols
//! (or supplied), and the relation is added as an axiom.

use crate::certificate::{ConjugateProduct, Evidence, Membership, TorsionCertificate};
use crate::presentation::{dehn_fill, Presentation, Provenance, Slope};
use crate::word::Word;

use super::ConstructorError;

/// Where the disk conjugators come from.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum DiskConjugators {
    /// Adjoin fresh generators `alpha…` (or `beta…`).
    Fresh,
    /// Words over the knot presentation's alphabet.
    Given(Vec<Word>),
}

/// A knot presentation extended by a disk relator.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DiskAxiom {
    pub presentation: Presentation,
    pub p_count: u32,
    pub q_count: u32,
    pub conjugators: Vec<Word>,
    /// Index of the disk relator.
    pub relator: usize,
}

impl DiskAxiom {
    /// `μ` for a `(p, 0)` disk, `μ⁻¹` for a `(0, q)` disk.
    fn signed_meridian(&self) -> Result<Word, ConstructorError> {
        let mu = self.presentation.meridian().ok_or(ConstructorError::MissingPeripheral)?;
        Ok(if self.q_count == 0 { mu.clone() } else { mu.inverse() })
    }

    fn count(&self) -> i64 {
        i64::from(self.p_count.max(self.q_count))
    }

    /// `λ μ^p` or `λ μ^{-q}`.
    fn boundary(&self) -> Result<Word, ConstructorError> {
        let lambda = self.presentation.longitude().ok_or(ConstructorError::MissingPeripheral)?;
        Ok(lambda.mul(&self.signed_meridian()?.pow(self.count())))
    }

    fn disk_product(&self) -> Result<ConjugateProduct, ConstructorError> {
        Ok(ConjugateProduct::new(self.signed_meridian()?, self.conjugators.clone())?)
    }

    fn check(&self) -> Result<(), ConstructorError> {
        if (self.p_count == 0) == (self.q_count == 0) {
            return Err(ConstructorError::Precondition(format!(
                "exactly one of the disk counts must be zero, got ({}, {})",
                self.p_count, self.q_count
            )));
        }
        if self.conjugators.len() as i64 != self.count() {
            return Err(ConstructorError::Precondition(format!(
                "{} disk conjugators for {} intersection points",
                self.conjugators.len(),
                self.count()
            )));
        }
        let expected = self.boundary()?.mul(&self.disk_product()?.realize().inverse());
        if self.presentation.relator(self.relator) != Some(&expected) {
            return Err(ConstructorError::Precondition("disk relator is malformed".into()));
        }
        Ok(())
    }
}

/// Adds the disk relator for a `(p_count, q_count)` disk, one of which must be 0.
pub fn with_disk_axiom(
    knot: &Presentation,
    p_count: u32,
    q_count: u32,
    conjugators: DiskConjugators,
) -> Result<DiskAxiom, ConstructorError> {
    if (p_count == 0) == (q_count == 0) {
        return Err(ConstructorError::Precondition(format!(
            "exactly one of the disk counts must be zero, got ({p_count}, {q_count})"
        )));
    }
    let count = p_count.max(q_count) as usize;
    let mut extended = knot.clone();
    let conjugators = match conjugators {
        DiskConjugators::Fresh => {
            let stem = if q_count == 0 { "alpha" } else { "beta" };
            (0..count).map(|_| Word::generator(extended.alphabet_mut().push_fresh(stem))).collect()
        }
        DiskConjugators::Given(ws) => {
            for w in &ws {
                knot.alphabet().check(w)?;
            }
            ws
        }
    };
    let mut axiom = DiskAxiom { presentation: extended.clone(), p_count, q_count, conjugators, relator: 0 };
    if axiom.conjugators.len() != count {
        return Err(ConstructorError::Precondition(format!(
            "{} disk conjugators for {count} intersection points",
            axiom.conjugators.len()
        )));
    }
    let relator = axiom.boundary()?.mul(&axiom.disk_product()?.realize().inverse());
    let provenance = Provenance::DiskAxiom { parent: Box::new(knot.provenance().clone()), p_count, q_count };
    axiom.presentation = extended.with_relator(relator, provenance)?;
    axiom.relator = axiom.presentation.relators().len() - 1;
    Ok(axiom)
}

/// Certificate for `μ` in the `m/n` filling of the extended presentation, with
/// `k = |m|` factors: the disk product conjugated by `μ^{-jp}` for
/// `j = 0..n`, then `m − pn` copies of `μ`, since
/// `λ^n μ^m = ∏_j μ^{-jp}(λ μ^p)μ^{jp} · μ^{m−pn}` in the free group.
/// A `(0, q)` disk gives the same for `μ⁻¹`, which is then inverted.
pub fn singular_disk_cert(axiom: &DiskAxiom, s: Slope) -> Result<TorsionCertificate, ConstructorError> {
    axiom.check()?;
    let (m, n) = (s.m(), s.n());
    let count = axiom.count();
    let mirrored = axiom.q_count != 0;
    let signed_m = if mirrored { -m } else { m };
    if signed_m < count * n {
        let want = if mirrored { format!("m/n <= -{count}") } else { format!("m/n >= {count}") };
        return Err(ConstructorError::SlopeCondition(format!("{want} required, got {s}")));
    }
    let f = dehn_fill(&axiom.presentation, s)?;
    let mu = axiom.signed_meridian()?;
    let disk = Membership::from_product(axiom.disk_product()?)
        .rewrite_by_relator(&f, axiom.boundary()?)?
        .noted("disk relator");
    let mut parts: Vec<Membership> = (0..n).map(|j| disk.conjugate(&mu.pow(-j * count))).collect();
    let rest = signed_m - count * n;
    if rest > 0 {
        parts.push(Membership::power(mu.clone(), rest as usize)?);
    }
    let mut membership = Membership::product_of(&parts)?
        .rewrite_by_relator(&f, Word::identity())?
        .noted("filling relator");
    if mirrored {
        membership = membership.invert_identity()?;
    }
    let m_abs = m.unsigned_abs();
    Ok(TorsionCertificate { membership: membership.into_certificate(&f)?, evidence: Evidence::AbelianOrder { m: m_abs } })
}
