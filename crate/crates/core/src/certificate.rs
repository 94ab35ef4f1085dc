//! Conjugate products and membership in the positive normal closure
//! `⟨⟨g⟩⟩⁺` (all non-empty products of conjugates of `g`).
//!
//! [`Membership`] is the working form used by constructors: a product of
//! conjugates together with an [`Equation`] from its realization to a target.
//! [`MembershipCertificate`] is the serialized form, where the equation has
//! been flattened into a derivation log.

use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::derivation::{
    extract_witness, replay_with, witness_to_log, DerivationError, DerivationLog, Equation, LogJson, ReplayOptions,
    Verdict,
};
use crate::oracle::{element_order_in_h1, Homomorphism};
use crate::presentation::{Presentation, PresentationError, PresentationJson};
use crate::word::{Word, WordError};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CertificateError {
    #[error("non-empty product required")]
    EmptyProduct,
    #[error("products have different bases")]
    BaseMismatch,
    #[error("exponent must be at least 1, got {0}")]
    Exponent(i64),
    #[error("target {actual} is not the expected {expected}")]
    Target { expected: String, actual: String },
    #[error("invalid certificate: {0}")]
    Invalid(String),
    #[error(transparent)]
    Derivation(#[from] DerivationError),
    #[error(transparent)]
    Presentation(#[from] PresentationError),
    #[error(transparent)]
    Word(#[from] WordError),
}

/// `∏ xᵢ·g·xᵢ⁻¹` with at least one factor.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConjugateProduct {
    base: Word,
    conjugators: Vec<Word>,
}

impl ConjugateProduct {
    pub fn new(base: Word, conjugators: Vec<Word>) -> Result<Self, CertificateError> {
        if conjugators.is_empty() {
            return Err(CertificateError::EmptyProduct);
        }
        Ok(ConjugateProduct { base, conjugators })
    }

    /// `k` copies of the base itself.
    pub fn power(base: Word, k: usize) -> Result<Self, CertificateError> {
        Self::new(base, vec![Word::identity(); k])
    }

    pub fn base(&self) -> &Word {
        &self.base
    }

    pub fn conjugators(&self) -> &[Word] {
        &self.conjugators
    }

    pub fn k(&self) -> usize {
        self.conjugators.len()
    }

    pub fn realize(&self) -> Word {
        let mut out = Word::identity();
        for x in &self.conjugators {
            out.mul_assign(&self.base.conjugate(x));
        }
        out
    }

    /// `y·(∏ xᵢ g xᵢ⁻¹)·y⁻¹ = ∏ (y xᵢ) g (y xᵢ)⁻¹`.
    pub fn conjugate_product(&self, y: &Word) -> ConjugateProduct {
        ConjugateProduct {
            base: self.base.clone(),
            conjugators: self.conjugators.iter().map(|x| y.mul(x)).collect(),
        }
    }

    pub fn concat(&self, other: &ConjugateProduct) -> Result<ConjugateProduct, CertificateError> {
        if self.base != other.base {
            return Err(CertificateError::BaseMismatch);
        }
        let mut conjugators = self.conjugators.clone();
        conjugators.extend(other.conjugators.iter().cloned());
        Ok(ConjugateProduct { base: self.base.clone(), conjugators })
    }
}

pub fn concat_products(c1: &ConjugateProduct, c2: &ConjugateProduct) -> Result<ConjugateProduct, CertificateError> {
    c1.concat(c2)
}

/// `gⁿhⁿ` as a product of conjugates of `gh`: conjugators `g^{n-1}, …, g, 1`.
/// This is an identity in the free group.
pub fn lemma41_1(g: &Word, h: &Word, n: i64) -> Result<ConjugateProduct, CertificateError> {
    if n < 1 {
        return Err(CertificateError::Exponent(n));
    }
    let conjugators = (0..n).rev().map(|j| g.pow(j)).collect();
    ConjugateProduct::new(g.mul(h), conjugators)
}

/// A product of conjugates of a base with a proof that it equals `target`.
/// Invariant: `eq.lhs == product.realize()` and `eq.rhs == target`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Membership {
    product: ConjugateProduct,
    eq: Equation,
}

impl Membership {
    /// `t ∈ ⟨⟨t⟩⟩⁺`.
    pub fn base(t: Word) -> Self {
        Self::from_product(ConjugateProduct::power(t, 1).expect("one factor"))
    }

    /// `t^k`, with `k ≥ 1`.
    pub fn power(t: Word, k: usize) -> Result<Self, CertificateError> {
        Ok(Self::from_product(ConjugateProduct::power(t, k)?))
    }

    pub fn from_product(product: ConjugateProduct) -> Self {
        let eq = Equation::refl(product.realize());
        Membership { product, eq }
    }

    pub fn product(&self) -> &ConjugateProduct {
        &self.product
    }

    pub fn equation(&self) -> &Equation {
        &self.eq
    }

    pub fn target(&self) -> &Word {
        &self.eq.rhs
    }

    pub fn k(&self) -> usize {
        self.product.k()
    }

    pub fn conjugate(&self, y: &Word) -> Membership {
        Membership { product: self.product.conjugate_product(y), eq: self.eq.conjugate(y) }
    }

    /// Membership of the product of both targets.
    pub fn mul(&self, other: &Membership) -> Result<Membership, CertificateError> {
        Ok(Membership { product: self.product.concat(&other.product)?, eq: self.eq.mul(&other.eq) })
    }

    /// Product of a non-empty sequence.
    pub fn product_of<'a, I: IntoIterator<Item = &'a Membership>>(parts: I) -> Result<Membership, CertificateError> {
        let mut iter = parts.into_iter();
        let first = iter.next().ok_or(CertificateError::EmptyProduct)?.clone();
        iter.try_fold(first, |acc, m| acc.mul(m))
    }

    /// Replaces the target using `eq`, whose left side must be the current target.
    pub fn rewrite(&self, eq: &Equation) -> Result<Membership, CertificateError> {
        Ok(Membership { product: self.product.clone(), eq: self.eq.trans(eq)? })
    }

    /// Replaces the target by one differing from it by a single relator conjugate.
    pub fn rewrite_by_relator(&self, p: &Presentation, target: Word) -> Result<Membership, CertificateError> {
        self.rewrite(&Equation::by_relator(p, self.target().clone(), target)?)
    }

    pub fn noted(mut self, note: &str) -> Membership {
        self.eq = self.eq.noted(note);
        self
    }

    /// From `gh ∈ ⟨⟨x⟩⟩⁺`, `gⁿhⁿ ∈ ⟨⟨x⟩⟩⁺`: the product `∏_{j=n-1..0} g^j (gh) g^{-j}`.
    pub fn lemma41_2(&self, g: &Word, h: &Word, n: i64) -> Result<Membership, CertificateError> {
        if n < 1 {
            return Err(CertificateError::Exponent(n));
        }
        let gh = g.mul(h);
        if &gh != self.target() {
            return Err(CertificateError::Target { expected: gh.to_string(), actual: self.target().to_string() });
        }
        let parts: Vec<Membership> = (0..n).rev().map(|j| self.conjugate(&g.pow(j))).collect();
        Membership::product_of(&parts)
    }

    /// From `[g,h] ∈ ⟨⟨x⟩⟩⁺`, `[gⁿ,h^m] ∈ ⟨⟨x⟩⟩⁺`, by two applications of
    /// [`Membership::lemma41_2`]: first to `g⁻¹·(h⁻¹gh)`, then to
    /// `(g^{-n}h⁻¹gⁿ)·h`.
    pub fn lemma41_3(&self, g: &Word, h: &Word, n: i64, m: i64) -> Result<Membership, CertificateError> {
        if m < 1 {
            return Err(CertificateError::Exponent(m));
        }
        let h_inv = h.inverse();
        let step1 = self.lemma41_2(&g.inverse(), &g.conjugate(&h_inv), n)?;
        let g2 = g.pow(-n).mul(&h_inv).mul(&g.pow(n));
        step1.lemma41_2(&g2, h, m)
    }

    /// From `∏ xᵢ g xᵢ⁻¹ = 1`, the reversed product of conjugates of `g⁻¹`.
    pub fn invert_identity(&self) -> Result<Membership, CertificateError> {
        if !self.target().is_identity() {
            return Err(CertificateError::Target { expected: "1".into(), actual: self.target().to_string() });
        }
        let mut conjugators = self.product.conjugators.clone();
        conjugators.reverse();
        let product = ConjugateProduct::new(self.product.base.inverse(), conjugators)?;
        Ok(Membership { product, eq: self.eq.inverse() })
    }

    /// Flattens the proof into a derivation log for `realize·target⁻¹`.
    pub fn into_certificate(self, p: &Presentation) -> Result<MembershipCertificate, CertificateError> {
        self.eq.check(p)?;
        let start = self.eq.lhs.mul(&self.eq.rhs.inverse());
        let proof = witness_to_log(p, &start, &self.eq.witness)?;
        Ok(MembershipCertificate { presentation: p.clone(), target: self.eq.rhs, product: self.product, proof })
    }
}

/// `target ∈ ⟨⟨base⟩⟩⁺`, proved by a log reducing `realize·target⁻¹` to 1.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MembershipCertificate {
    pub presentation: Presentation,
    pub target: Word,
    pub product: ConjugateProduct,
    pub proof: DerivationLog,
}

/// Evidence that the base element is non-trivial.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Evidence {
    /// The base has order `m` in H1.
    AbelianOrder { m: u64 },
    /// Images of the generators in a permutation group, under which the base
    /// is not the identity.
    FiniteQuotientWitness { images: Vec<Vec<usize>> },
    /// Not machine-checked.
    Assumed,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TorsionCertificate {
    pub membership: MembershipCertificate,
    pub evidence: Evidence,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Nontriviality {
    /// Checked from H1 or a permutation representation.
    Established,
    /// Claimed by the certificate but not checked.
    Assumed,
    NotEstablished,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub verdict: Verdict,
    pub reasons: Vec<String>,
    /// Index of the failing move, if replay rejected the proof.
    pub failed_step: Option<usize>,
    pub steps: usize,
    pub max_length: u64,
    pub k: usize,
    /// Order of the base in H1, 0 for infinite; torsion certificates only.
    pub h1_order: Option<u64>,
    /// Set only when `k` equals the H1 order and the evidence is that order.
    pub claimed_order: Option<u64>,
    pub nontriviality: Option<Nontriviality>,
}

impl VerificationReport {
    pub fn accepted(&self) -> bool {
        self.verdict == Verdict::Accepted
    }

    fn reject(&mut self, reason: impl Into<String>) {
        if self.verdict == Verdict::Accepted {
            self.verdict = Verdict::Rejected;
        }
        self.reasons.push(reason.into());
    }
}

impl MembershipCertificate {
    pub fn k(&self) -> usize {
        self.product.k()
    }

    pub fn base(&self) -> &Word {
        &self.product.base
    }

    pub fn verify(&self) -> VerificationReport {
        self.verify_with(ReplayOptions::default())
    }

    pub fn verify_with(&self, opts: ReplayOptions) -> VerificationReport {
        let mut report = VerificationReport {
            verdict: Verdict::Accepted,
            reasons: Vec::new(),
            failed_step: None,
            steps: 0,
            max_length: 0,
            k: self.product.k(),
            h1_order: None,
            claimed_order: None,
            nontriviality: None,
        };
        if self.product.conjugators.is_empty() {
            report.reject(CertificateError::EmptyProduct.to_string());
            return report;
        }
        let a = self.presentation.alphabet();
        let words = std::iter::once(&self.product.base).chain(&self.product.conjugators).chain([&self.target]);
        if let Some(e) = words.filter_map(|w| a.check(w).err()).next() {
            report.reject(format!("word outside the alphabet: {e}"));
            return report;
        }
        let expected = self.product.realize().mul(&self.target.inverse());
        if self.proof.start != expected {
            report.reject("proof does not start from realize·target⁻¹");
            return report;
        }
        let replay = replay_with(&self.presentation, &self.proof, opts);
        report.steps = replay.steps;
        report.max_length = replay.max_length;
        if let Some(f) = replay.failure {
            report.verdict = replay.verdict;
            report.failed_step = Some(f.step);
            report.reasons.push(format!("step {}: {}", f.step, f.reason));
        }
        report
    }

    /// Recovers the working form; the proof must replay.
    pub fn to_membership(&self) -> Result<Membership, CertificateError> {
        let report = self.verify();
        if !report.accepted() {
            return Err(CertificateError::Invalid(report.reasons.join("; ")));
        }
        let witness = extract_witness(&self.presentation, &self.proof)?;
        let eq = Equation { lhs: self.product.realize(), rhs: self.target.clone(), witness };
        Ok(Membership { product: self.product.clone(), eq })
    }

    pub fn lemma41_2(&self, g: &Word, h: &Word, n: i64) -> Result<MembershipCertificate, CertificateError> {
        self.to_membership()?.lemma41_2(g, h, n)?.into_certificate(&self.presentation)
    }

    pub fn lemma41_3(&self, g: &Word, h: &Word, n: i64, m: i64) -> Result<MembershipCertificate, CertificateError> {
        self.to_membership()?.lemma41_3(g, h, n, m)?.into_certificate(&self.presentation)
    }

    /// The same certificate over a presentation with more relators.
    pub fn push_to(&self, q: &Presentation) -> Result<MembershipCertificate, CertificateError> {
        if !q.extends(&self.presentation) {
            return Err(CertificateError::Invalid("target presentation does not extend the source".into()));
        }
        Ok(MembershipCertificate { presentation: q.clone(), ..self.clone() })
    }
}

impl TorsionCertificate {
    pub fn k(&self) -> usize {
        self.membership.k()
    }

    pub fn base(&self) -> &Word {
        self.membership.base()
    }

    pub fn presentation(&self) -> &Presentation {
        &self.membership.presentation
    }

    pub fn realize(&self) -> Word {
        self.membership.product.realize()
    }

    pub fn verify(&self) -> VerificationReport {
        self.verify_with(ReplayOptions::default())
    }

    pub fn verify_with(&self, opts: ReplayOptions) -> VerificationReport {
        let mut report = self.membership.verify_with(opts);
        if self.membership.product.conjugators.is_empty() {
            return report;
        }
        let p = &self.membership.presentation;
        if !self.membership.target.is_identity() {
            report.reject("target of a torsion certificate must be the identity");
        }
        let base = self.base();
        let order = element_order_in_h1(p, base);
        report.h1_order = order.to_u64();
        let k = BigInt::from(self.k());
        if order.is_zero() {
            report.reject("base has infinite order in H1, so no product of its conjugates is trivial");
        } else if !(&k % &order).is_zero() {
            report.reject(format!("k = {} is not a multiple of the H1 order {order} of the base", self.k()));
        }
        let mut nontrivial = if order > BigInt::from(1) { Nontriviality::Established } else { Nontriviality::NotEstablished };
        match &self.evidence {
            Evidence::AbelianOrder { m } => {
                if order != BigInt::from(*m) {
                    report.reject(format!("evidence claims H1 order {m}, recomputed {order}"));
                } else if self.k() as u64 == *m {
                    report.claimed_order = Some(*m);
                }
            }
            Evidence::FiniteQuotientWitness { images } => {
                let h = Homomorphism { images: images.clone() };
                if !h.is_valid_for(p) {
                    report.reject("quotient witness is not a homomorphism of the presented group");
                } else if h.kills(base) {
                    report.reject("quotient witness sends the base to the identity");
                } else {
                    nontrivial = Nontriviality::Established;
                }
            }
            Evidence::Assumed => {
                if nontrivial != Nontriviality::Established {
                    nontrivial = Nontriviality::Assumed;
                }
            }
        }
        report.nontriviality = Some(nontrivial);
        report
    }
}

/// Wire format shared by membership and torsion certificates.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CertificateJson {
    pub presentation: PresentationJson,
    pub base: Vec<(String, i64)>,
    pub conjugators: Vec<Vec<(String, i64)>>,
    pub target: Vec<(String, i64)>,
    pub proof: LogJson,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub evidence: Option<Evidence>,
}

impl MembershipCertificate {
    pub fn to_json(&self) -> CertificateJson {
        let a = self.presentation.alphabet();
        CertificateJson {
            presentation: self.presentation.to_json(),
            base: a.word_to_pairs(&self.product.base),
            conjugators: self.product.conjugators.iter().map(|x| a.word_to_pairs(x)).collect(),
            target: a.word_to_pairs(&self.target),
            proof: self.proof.to_json(a),
            evidence: None,
        }
    }

    /// An empty conjugator list is accepted here so that `verify` can report it.
    pub fn from_json(json: &CertificateJson) -> Result<Self, CertificateError> {
        let presentation = Presentation::from_json(&json.presentation)?;
        let a = presentation.alphabet();
        let product = ConjugateProduct {
            base: a.word_from_pairs(&json.base)?,
            conjugators: json.conjugators.iter().map(|x| a.word_from_pairs(x)).collect::<Result<_, _>>()?,
        };
        let target = a.word_from_pairs(&json.target)?;
        let proof = DerivationLog::from_json(&json.proof, a)?;
        Ok(MembershipCertificate { presentation, target, product, proof })
    }
}

impl TorsionCertificate {
    pub fn to_json(&self) -> CertificateJson {
        CertificateJson { evidence: Some(self.evidence.clone()), ..self.membership.to_json() }
    }

    pub fn from_json(json: &CertificateJson) -> Result<Self, CertificateError> {
        let evidence = json.evidence.clone().ok_or_else(|| CertificateError::Invalid("missing evidence".into()))?;
        Ok(TorsionCertificate { membership: MembershipCertificate::from_json(json)?, evidence })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::presentation::{torus_presentation, Provenance};
    use crate::word::testing::word;
    use crate::word::{Alphabet, Gen};
    use proptest::prelude::*;

    fn x() -> Word {
        Word::generator(Gen(0))
    }

    fn y() -> Word {
        Word::generator(Gen(1))
    }

    #[test]
    fn realize_examples() {
        let c = ConjugateProduct::new(x(), vec![Word::identity()]).unwrap();
        assert_eq!(c.realize(), x());
        let comm = Word::commutator(&x(), &y());
        let c = ConjugateProduct::new(comm, vec![Word::identity(), y().pow(-1), y().pow(-2)]).unwrap();
        assert_eq!(c.realize(), Word::commutator(&x(), &y().pow(3)));
        assert_eq!(ConjugateProduct::power(x(), 4).unwrap().realize(), x().pow(4));
        assert_eq!(ConjugateProduct::new(x(), vec![]), Err(CertificateError::EmptyProduct));
    }

    #[test]
    fn lemma41_1_small_cases() {
        let (g, h) = (x(), y());
        assert_eq!(lemma41_1(&g, &h, 1).unwrap().realize(), g.mul(&h));
        assert_eq!(lemma41_1(&g, &h, 2).unwrap().realize(), g.pow(2).mul(&h.pow(2)));
        assert_eq!(lemma41_1(&g, &h, 0), Err(CertificateError::Exponent(0)));
    }

    fn words_up_to(len: usize) -> Vec<Word> {
        let letters = [(Gen(0), 1), (Gen(0), -1), (Gen(1), 1), (Gen(1), -1)];
        let mut out = vec![Word::identity()];
        let mut layer = vec![Word::identity()];
        for _ in 0..len {
            let mut next = Vec::new();
            for w in &layer {
                for &(g, e) in &letters {
                    let v = w.mul(&Word::gen_pow(g, e));
                    if v.len() > w.len() {
                        next.push(v);
                    }
                }
            }
            out.extend(next.iter().cloned());
            layer = next;
        }
        out
    }

    #[test]
    fn lemma41_1_exhaustive_short_words() {
        let words = words_up_to(3);
        for g in &words {
            for h in &words {
                for n in 1..=4 {
                    assert_eq!(lemma41_1(g, h, n).unwrap().realize(), g.pow(n).mul(&h.pow(n)));
                }
            }
        }
    }

    #[test]
    fn lemma41_3_intermediate_identity() {
        let words = words_up_to(2);
        for g in &words {
            for h in &words {
                for n in 1..=3 {
                    let lhs = g.pow(-n).mul(&h.inverse()).mul(&g.pow(n)).mul(h);
                    let rhs = g.pow(-n).mul(&g.conjugate(&h.inverse()).pow(n));
                    assert_eq!(lhs, rhs);
                }
            }
        }
    }

    #[test]
    fn torus_trefoil_commutator_by_hand() {
        // [x,y³] = [x,y](y⁻¹[x,y]y)(y⁻²[x,y]y²), and y³ = x² in the group.
        let p = torus_presentation(2, 3).unwrap();
        let c = Word::commutator(&x(), &y());
        let product = ConjugateProduct::new(c, (0..3).map(|j| y().pow(-j)).collect()).unwrap();
        let m = Membership::from_product(product);
        let target = x().inverse().mul(&x().pow(-2)).mul(&x()).mul(&x().pow(2));
        assert!(target.is_identity());
        let eq = Equation::by_relator(&p, m.target().clone(), x().inverse().mul(&x().pow(-2)).mul(&x()).mul(&y().pow(3)))
            .unwrap();
        let m = m.rewrite(&eq).unwrap().rewrite_by_relator(&p, Word::identity()).unwrap();
        let cert = TorsionCertificate { membership: m.into_certificate(&p).unwrap(), evidence: Evidence::Assumed };
        let r = cert.verify();
        assert!(r.accepted(), "{:?}", r.reasons);
        assert_eq!(r.k, 3);
        assert_eq!(r.nontriviality, Some(Nontriviality::Assumed));
        assert_eq!(r.h1_order, Some(1));

        let json = serde_json::to_string(&cert.to_json()).unwrap();
        let back = TorsionCertificate::from_json(&serde_json::from_str(&json).unwrap()).unwrap();
        assert_eq!(back, cert);

        let mut empty = cert.clone();
        empty.membership.product.conjugators.clear();
        let r = empty.verify();
        assert_eq!(r.verdict, Verdict::Rejected);
        assert_eq!(r.reasons, vec!["non-empty product required".to_string()]);
    }

    #[test]
    fn abelian_evidence_must_match_and_divide() {
        // ⟨x | x⁵⟩: x⁵ = 1 is a product of 5 conjugates of x.
        let a = Alphabet::new(["x"]).unwrap();
        let p = Presentation::new(a, vec![x().pow(5)], None, Provenance::Custom).unwrap();
        let cert = |k: usize, m: u64| {
            let mem = Membership::power(x(), k).unwrap();
            let mem = if k == 5 { mem.rewrite_by_relator(&p, Word::identity()).unwrap() } else { mem };
            TorsionCertificate { membership: mem.into_certificate(&p).unwrap(), evidence: Evidence::AbelianOrder { m } }
        };
        let good = cert(5, 5).verify();
        assert!(good.accepted());
        assert_eq!(good.claimed_order, Some(5));
        assert_eq!(good.nontriviality, Some(Nontriviality::Established));
        assert!(!cert(5, 3).verify().accepted());
        // k = 4: the log cannot reach 1 and 4 is not a multiple of 5
        let r = cert(4, 5).verify();
        assert!(!r.accepted());
        assert!(r.reasons.iter().any(|s| s.contains("not a multiple")));
    }

    #[test]
    fn invert_identity_flips_base() {
        let a = Alphabet::new(["x"]).unwrap();
        let p = Presentation::new(a, vec![x().pow(3)], None, Provenance::Custom).unwrap();
        let m = Membership::power(x(), 3).unwrap().rewrite_by_relator(&p, Word::identity()).unwrap();
        let inv = m.invert_identity().unwrap();
        assert_eq!(inv.product().base(), &x().inverse());
        let cert = inv.into_certificate(&p).unwrap();
        assert!(cert.verify().accepted());
    }

    proptest! {
        #[test]
        fn conjugate_product_conjugates_realization(
            base in word(3, 5),
            xs in proptest::collection::vec(word(3, 5), 1..5),
            y in word(3, 6),
        ) {
            let c = ConjugateProduct::new(base, xs).unwrap();
            let d = c.conjugate_product(&y);
            prop_assert_eq!(d.k(), c.k());
            prop_assert_eq!(d.realize(), c.realize().conjugate(&y));
        }

        #[test]
        fn concat_multiplies(base in word(2, 4), xs in proptest::collection::vec(word(2, 4), 1..4), ys in proptest::collection::vec(word(2, 4), 1..4)) {
            let c1 = ConjugateProduct::new(base.clone(), xs).unwrap();
            let c2 = ConjugateProduct::new(base, ys).unwrap();
            let c = concat_products(&c1, &c2).unwrap();
            prop_assert_eq!(c.k(), c1.k() + c2.k());
            prop_assert_eq!(c.realize(), c1.realize().mul(&c2.realize()));
        }

        #[test]
        fn lemma41_1_is_a_free_identity(g in word(3, 6), h in word(3, 6), n in 1i64..=8) {
            prop_assert_eq!(lemma41_1(&g, &h, n).unwrap().realize(), g.pow(n).mul(&h.pow(n)));
        }

        #[test]
        fn lemma41_2_and_3_replay(g in word(2, 3), h in word(2, 3), n in 1i64..=3, m in 1i64..=3) {
            // In ⟨x, y | x⁻¹ y⁻¹ x y x⁻¹⟩, [x,y] = x.
            let a = Alphabet::new(["x", "y"]).unwrap();
            let rel = Word::commutator(&x(), &y()).mul(&x().inverse());
            let p = Presentation::new(a, vec![rel], None, Provenance::Custom).unwrap();
            let start = Membership::base(x());
            let comm = start.rewrite_by_relator(&p, Word::commutator(&x(), &y())).unwrap();
            let cert = comm.lemma41_3(&x(), &y(), n, m).unwrap();
            prop_assert_eq!(cert.target(), &Word::commutator(&x().pow(n), &y().pow(m)));
            prop_assert!(cert.clone().into_certificate(&p).unwrap().verify().accepted());

            // gh ∈ ⟨⟨gh⟩⟩⁺ trivially; then gⁿhⁿ.
            let gh = Membership::base(g.mul(&h));
            let lifted = gh.lemma41_2(&g, &h, n).unwrap();
            prop_assert_eq!(lifted.target(), &g.pow(n).mul(&h.pow(n)));
            prop_assert_eq!(lifted.k(), n as usize);
            let mc = lifted.into_certificate(&p).unwrap();
            prop_assert!(mc.verify().accepted());
            let again = mc.lemma41_2(&g.pow(n), &h.pow(n), 2).unwrap();
            prop_assert_eq!(&again.target, &g.pow(2 * n).mul(&h.pow(2 * n)));
            prop_assert!(again.verify().accepted());
        }
    }
}
