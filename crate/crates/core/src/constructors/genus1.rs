//! Certificates for the meridian `t` of `C[2p, 2q]` after `m/n` surgery.
//!
//! Relations used, in the group of the knot:
//! `t a^p t⁻¹ = b⁻¹ a^p` (so `a^p t a^{-p} = b t`), `t a = b^q t b^{-q}`,
//! and the surgery relation `t^m L^n = 1` with `L = [b^q, a^p]`.

use serde::{Deserialize, Serialize};

use crate::certificate::{Evidence, Membership, TorsionCertificate};
use crate::presentation::{dehn_fill, lin_presentation, Presentation, Slope};
use crate::word::Word;

use super::ConstructorError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Genus1Case {
    /// `m ≥ (2n−1)p`.
    One,
    /// `q > 0` and `m ≤ −(2n−1)q`.
    Two,
    /// `q < 0` and `m ≥ −(2n−1)q`.
    Three,
}

impl Genus1Case {
    pub fn number(self) -> u8 {
        match self {
            Genus1Case::One => 1,
            Genus1Case::Two => 2,
            Genus1Case::Three => 3,
        }
    }

    pub fn from_number(k: u8) -> Option<Self> {
        match k {
            1 => Some(Genus1Case::One),
            2 => Some(Genus1Case::Two),
            3 => Some(Genus1Case::Three),
            _ => None,
        }
    }

    pub fn condition(self) -> &'static str {
        match self {
            Genus1Case::One => "m >= (2n-1)p",
            Genus1Case::Two => "q > 0 and m <= -(2n-1)q",
            Genus1Case::Three => "q < 0 and m >= -(2n-1)q",
        }
    }

    /// Whether the case's sign requirement on `q` holds.
    pub fn fits_q(self, q: i64) -> bool {
        match self {
            Genus1Case::One => true,
            Genus1Case::Two => q > 0,
            Genus1Case::Three => q < 0,
        }
    }

    /// Whether the slope inequality holds (sign of `q` not checked).
    pub fn holds(self, p: i64, q: i64, s: Slope) -> bool {
        let (m, n) = (s.m(), s.n());
        match self {
            Genus1Case::One => m >= (2 * n - 1) * p,
            Genus1Case::Two => m <= -(2 * n - 1) * q,
            Genus1Case::Three => m >= -(2 * n - 1) * q,
        }
    }
}

/// The cases that apply to `C[2p, 2q]` at `s`, in order.
pub fn applicable_cases(p: i64, q: i64, s: Slope) -> Vec<Genus1Case> {
    [Genus1Case::One, Genus1Case::Two, Genus1Case::Three]
        .into_iter()
        .filter(|c| c.fits_q(q) && c.holds(p, q, s))
        .collect()
}

fn select_case(p: i64, q: i64, s: Slope, case: Option<Genus1Case>) -> Result<Genus1Case, ConstructorError> {
    match case {
        Some(c) if !c.fits_q(q) => Err(ConstructorError::CaseMismatch { case: c.number(), q }),
        Some(c) if !c.holds(p, q, s) => Err(ConstructorError::SlopeCondition(format!(
            "case {} requires {}, got m/n = {s} with p = {p}, q = {q}",
            c.number(),
            c.condition()
        ))),
        Some(c) => Ok(c),
        None => applicable_cases(p, q, s).first().copied().ok_or_else(|| {
            ConstructorError::SlopeCondition(format!("no case applies to m/n = {s} with p = {p}, q = {q}"))
        }),
    }
}

struct Words {
    a: Word,
    b: Word,
    t: Word,
}

impl Words {
    fn new(f: &Presentation) -> Result<Self, ConstructorError> {
        Ok(Words {
            a: Word::generator(f.gen("a")?),
            b: Word::generator(f.gen("b")?),
            t: Word::generator(f.gen("t")?),
        })
    }

    fn t_copies(&self, e: i64) -> Option<Membership> {
        (e > 0).then(|| Membership::power(self.t.clone(), e as usize).expect("positive count"))
    }
}

fn product(parts: &[Option<Membership>]) -> Result<Membership, ConstructorError> {
    Ok(Membership::product_of(parts.iter().flatten())?)
}

/// Certificate that `t` is a generalized torsion element of `π₁(K(m/n))`,
/// `K = C[2p, 2q]`, following the case's chain of memberships. `case = None`
/// picks the first applicable case.
pub fn genus1_cert(p: i64, q: i64, s: Slope, case: Option<Genus1Case>) -> Result<TorsionCertificate, ConstructorError> {
    let knot = lin_presentation(p, q)?;
    if s.m() == 0 {
        return Err(ConstructorError::SlopeCondition("slope 0 is excluded".into()));
    }
    let case = select_case(p, q, s, case)?;
    let f = dehn_fill(&knot, s)?;
    let w = Words::new(&f)?;
    let membership = match case {
        Genus1Case::One => case_one(&f, &w, p, q, s)?,
        Genus1Case::Two => case_two(&f, &w, p, q, s)?,
        Genus1Case::Three => case_three(&f, &w, p, q, s)?,
    };
    if !membership.target().is_identity() {
        return Err(ConstructorError::Internal(format!("chain ended at {}", f.format(membership.target()))));
    }
    let m = s.m().unsigned_abs();
    if !(membership.k() as u64).is_multiple_of(m) {
        return Err(ConstructorError::Internal(format!("k = {} is not a multiple of {m}", membership.k())));
    }
    Ok(TorsionCertificate { membership: membership.into_certificate(&f)?, evidence: Evidence::AbelianOrder { m } })
}

fn case_one(f: &Presentation, w: &Words, p: i64, q: i64, s: Slope) -> Result<Membership, ConstructorError> {
    let Words { a, b, t } = w;
    let (m, n) = (s.m(), s.n());
    let bq = b.pow(q);
    let l = Word::commutator(&bq, &a.pow(p));
    let base = Membership::base(t.clone());

    // t a = b^q t b^{-q}, then t^p a^p
    let tp_ap = base
        .conjugate(&bq)
        .rewrite_by_relator(f, t.mul(a))?
        .noted("t a = b^q t b^-q")
        .lemma41_2(t, a, p)?;
    // t = (b^q t b^{-q}) a⁻¹, then b^q t^p b^{-q} a^{-p}
    let g = t.conjugate(&bq);
    let conj_ap = base
        .rewrite_by_relator(f, g.mul(&a.inverse()))?
        .noted("t a = b^q t b^-q")
        .lemma41_2(&g, &a.inverse(), p)?;
    // t^{2p} [b^q, a^p]
    let shifted = conj_ap.conjugate(&t.pow(p).mul(&bq.inverse())).mul(&tp_ap)?;
    debug_assert_eq!(shifted.target(), &t.pow(2 * p).mul(&l));
    // t^{2(n-1)p} [b^q, a^p]^{n-1}
    let powered = if n > 1 { Some(shifted.lemma41_2(&t.pow(2 * p), &l, n - 1)?) } else { None };
    let e = m - (2 * n - 1) * p;

    // a^p = b^q a^p t^m L^{n-1} b^{-q}
    let a_pos = product(&[Some(tp_ap.conjugate(&t.pow(-p))), w.t_copies(e), powered.clone()])?
        .conjugate(&bq)
        .rewrite_by_relator(f, a.pow(p))?
        .noted("t^m L^n = 1");
    // a^{-p} = t^m L^{n-1} b^{-q} a^{-p} b^q
    let shift = t.pow(m - 2 * (n - 1) * p);
    let a_neg = product(&[powered.map(|d| d.conjugate(&shift)), w.t_copies(e), Some(conj_ap.conjugate(&bq.inverse()))])?
        .rewrite_by_relator(f, a.pow(-p))?
        .noted("t^m L^n = 1");
    Ok(a_pos.mul(&a_neg)?)
}

fn case_two(f: &Presentation, w: &Words, p: i64, q: i64, s: Slope) -> Result<Membership, ConstructorError> {
    let Words { a, b, t } = w;
    let (m, n) = (s.m(), s.n());
    let ap = a.pow(p);
    let l_inv = Word::commutator(&ap, &b.pow(q));
    let base = Membership::base(t.clone());

    // a^p t a^{-p} = b t, then b^q t^q
    let bq_tq = base
        .conjugate(&ap)
        .rewrite_by_relator(f, b.mul(t))?
        .noted("t a^p t^-1 = b^-1 a^p")
        .lemma41_2(b, t, q)?;
    // t = b⁻¹ (a^p t a^{-p}), then b^{-q} a^p t^q a^{-p}
    let g = t.conjugate(&ap);
    let conj = base
        .rewrite_by_relator(f, b.inverse().mul(&g))?
        .noted("t a^p t^-1 = b^-1 a^p")
        .lemma41_2(&b.inverse(), &g, q)?;
    // t^{2q} [a^p, b^q]
    let shifted = conj.conjugate(&t.pow(2 * q).mul(&ap.inverse())).mul(&bq_tq.conjugate(&t.pow(q)))?;
    debug_assert_eq!(shifted.target(), &t.pow(2 * q).mul(&l_inv));
    let powered = if n > 1 { Some(shifted.lemma41_2(&t.pow(2 * q), &l_inv, n - 1)?) } else { None };
    let e = -m - (2 * n - 1) * q;

    let b_pos = product(&[Some(bq_tq.clone()), w.t_copies(e), powered.clone()])?
        .conjugate(&ap)
        .rewrite_by_relator(f, b.pow(q))?
        .noted("t^m L^n = 1");
    let b_neg = product(&[w.t_copies(e), powered.map(|d| d.conjugate(&t.pow(q))), Some(conj.conjugate(&t.pow(q).mul(&ap.inverse())))])?
        .rewrite_by_relator(f, b.pow(-q))?
        .noted("t^m L^n = 1");
    Ok(b_pos.mul(&b_neg)?)
}

fn case_three(f: &Presentation, w: &Words, p: i64, q: i64, s: Slope) -> Result<Membership, ConstructorError> {
    let Words { a, b, t } = w;
    let (m, n) = (s.m(), s.n());
    let ap = a.pow(p);
    let l = Word::commutator(&b.pow(q), &ap);
    let base = Membership::base(t.clone());

    // b^{-q} t^{-q}
    let bt = base.conjugate(&ap).rewrite_by_relator(f, b.mul(t))?.noted("t a^p t^-1 = b^-1 a^p");
    let first = bt.lemma41_2(b, t, -q)?;
    // b^q a^p t^{-q} a^{-p}
    let g = t.conjugate(&ap);
    let second = base
        .rewrite_by_relator(f, b.inverse().mul(&g))?
        .noted("t a^p t^-1 = b^-1 a^p")
        .lemma41_2(&b.inverse(), &g, -q)?;
    // [b^q, a^p] t^{-2q}
    let shifted = first.mul(&second.conjugate(&t.pow(q).mul(&ap.inverse())))?;
    debug_assert_eq!(shifted.target(), &l.mul(&t.pow(-2 * q)));
    let powered = if n > 1 { Some(shifted.lemma41_2(&l, &t.pow(-2 * q), n - 1)?) } else { None };
    let e = (2 * n - 1) * q + m;

    let b_pos = product(&[Some(second.conjugate(&ap.inverse())), powered.clone().map(|d| d.conjugate(&t.pow(q))), w.t_copies(e)])?
        .rewrite_by_relator(f, b.pow(q))?
        .noted("t^m L^n = 1");
    let b_neg = product(&[powered, w.t_copies(e), Some(first.conjugate(&t.pow(-q)))])?
        .conjugate(&ap)
        .rewrite_by_relator(f, b.pow(-q))?
        .noted("t^m L^n = 1");
    Ok(b_pos.mul(&b_neg)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn slope(text: &str) -> Slope {
        text.parse().unwrap()
    }

    #[test]
    fn figure_eight_cases() {
        for (s, case) in [("1/1", Genus1Case::One), ("-1", Genus1Case::Two), ("3/2", Genus1Case::One), ("-3/2", Genus1Case::Two)] {
            let cert = genus1_cert(1, 1, slope(s), Some(case)).unwrap();
            let r = cert.verify();
            assert!(r.accepted(), "{s}: {:?}", r.reasons);
            assert_eq!(r.k as i64 % slope(s).m().abs(), 0);
        }
    }

    #[test]
    fn case_three_and_larger_parameters() {
        for (p, q, s) in [(1, -1, "1"), (1, -1, "3/2"), (2, 3, "7/2"), (2, -3, "9/2"), (3, 2, "-7/2"), (2, -1, "5/3")] {
            let cert = genus1_cert(p, q, slope(s), None).unwrap();
            let r = cert.verify();
            assert!(r.accepted(), "({p},{q}) at {s}: {:?}", r.reasons);
            assert_eq!(r.k as i64, 2 * slope(s).m().abs());
        }
    }

    #[test]
    fn preconditions() {
        assert!(matches!(genus1_cert(1, 1, slope("0"), None), Err(ConstructorError::SlopeCondition(_))));
        assert!(matches!(genus1_cert(1, 1, slope("1/2"), Some(Genus1Case::One)), Err(ConstructorError::SlopeCondition(_))));
        assert!(matches!(genus1_cert(1, 1, slope("5"), Some(Genus1Case::Three)), Err(ConstructorError::CaseMismatch { .. })));
        assert!(matches!(genus1_cert(1, -1, slope("-5"), Some(Genus1Case::Two)), Err(ConstructorError::CaseMismatch { .. })));
        assert!(genus1_cert(0, 1, slope("1"), None).is_err());
        assert_eq!(applicable_cases(1, 1, slope("1")), vec![Genus1Case::One]);
        assert!(applicable_cases(2, 3, slope("1")).is_empty());
    }
}
