//! Meridians of knots with a diagram whose negative crossings all pass under
//! one overarc.

use crate::certificate::{ConjugateProduct, Evidence, Membership, TorsionCertificate};
use crate::derivation::Equation;
use crate::presentation::{dehn_fill, wirtinger, Diagram, OverarcData, Presentation, Slope};
use crate::word::Word;

use super::ConstructorError;

/// `t_a = C_a t_b C_a⁻¹` for every arc, as equations `C_a t_b C_a⁻¹ = t_a`,
/// built crossing by crossing along the walk from the base arc.
fn arc_equations(p: &Presentation, data: &OverarcData) -> Result<Vec<Equation>, ConstructorError> {
    let t = |a: usize| Word::generator(crate::word::Gen(a as u32));
    let mut eqs: Vec<Option<Equation>> = vec![None; data.arc_conjugators.len()];
    eqs[data.base] = Some(Equation::refl(t(data.base)));
    let mut arc = data.base;
    for step in &data.walk {
        if step.arc != data.base {
            let o = t(step.over).pow(i64::from(step.sign));
            let prev = eqs[arc].as_ref().expect("walk visits arcs in order");
            // o^s (C t_b C⁻¹) o^{-s} = o^s t_in o^{-s} = t_out
            let next = prev
                .conjugate(&o)
                .trans(&Equation::by_relator(p, t(arc).conjugate(&o), t(step.arc))?)?;
            debug_assert_eq!(next.lhs, t(data.base).conjugate(&data.arc_conjugators[step.arc]));
            eqs[step.arc] = Some(next);
        }
        arc = step.arc;
    }
    Ok(eqs.into_iter().map(|e| e.expect("every arc is visited")).collect())
}

/// `W` with `λ = t_b^{-(p−k)} W`: one conjugate of `t_b` per positive
/// crossing, read off the walk, with the `t_b^{e}` shifts that move the
/// negative letters `t_b⁻¹` to the right.
fn longitude_product(p: &Presentation, data: &OverarcData) -> Result<Membership, ConstructorError> {
    let tb = Word::generator(crate::word::Gen(data.base as u32));
    let arcs = arc_equations(p, data)?;
    let k = data.k as i64;
    // The longitude's letters after t_b^{-w} run from the last crossing back to the first.
    let mut shift = k;
    let mut parts = Vec::new();
    for step in data.walk.iter().rev() {
        if step.sign < 0 {
            shift -= 1;
            continue;
        }
        let y = tb.pow(shift);
        let conj = y.mul(&data.arc_conjugators[step.over]);
        let factor = Membership::from_product(ConjugateProduct::new(tb.clone(), vec![conj])?)
            .rewrite(&arcs[step.over].conjugate(&y))?
            .noted("arc relation");
        parts.push(factor);
    }
    Ok(Membership::product_of(&parts)?)
}

/// Certificate for `t_b` in `π₁(K(m/n))` with `k_total = m`, when every
/// negative crossing passes under the base overarc and `m − n(p−k) ≥ 0`:
/// `t_b^m λ^n = t_b^{m−n(p−k)} ∏_{j=n−1..0} t_b^{j(p−k)} W t_b^{-j(p−k)}`.
pub fn positive_diagram_cert(d: &Diagram, s: Slope) -> Result<TorsionCertificate, ConstructorError> {
    let (knot, data) = wirtinger(d)?;
    if !data.negatives_on_base {
        return Err(ConstructorError::Precondition(
            "negative crossings must appear successively along a single overarc (the base overarc)".into(),
        ));
    }
    let c = (data.p - data.k) as i64;
    if c == 0 {
        return Err(ConstructorError::Precondition("diagram has no positive crossing".into()));
    }
    let (m, n) = (s.m(), s.n());
    let rest = m - n * c;
    if rest < 0 {
        return Err(ConstructorError::SlopeCondition(format!("m - n(p-k) = {m} - {n}*{c} < 0")));
    }
    let f = dehn_fill(&knot, s)?;
    let tb = knot.meridian().ok_or(ConstructorError::MissingPeripheral)?.clone();
    let w = longitude_product(&f, &data)?;
    let mut parts = Vec::new();
    if rest > 0 {
        parts.push(Membership::power(tb.clone(), rest as usize)?);
    }
    parts.extend((0..n).rev().map(|j| w.conjugate(&tb.pow(j * c))));
    let membership = Membership::product_of(&parts)?
        .rewrite_by_relator(&f, Word::identity())?
        .noted("filling relator");
    Ok(TorsionCertificate { membership: membership.into_certificate(&f)?, evidence: Evidence::AbelianOrder { m: m as u64 } })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn diagram(json: &str) -> Diagram {
        serde_json::from_str(json).unwrap()
    }

    fn trefoil() -> Diagram {
        diagram(
            r#"{"crossings":[{"over":2,"in":0,"out":1,"sign":1},{"over":0,"in":1,"out":2,"sign":1},
                {"over":1,"in":2,"out":0,"sign":1}],"traversal":[0,1,2],"base_overarc":0}"#,
        )
    }

    fn slope(text: &str) -> Slope {
        text.parse().unwrap()
    }

    #[test]
    fn positive_trefoil() {
        for (s, k) in [("3", 3), ("7/2", 7), ("4", 4), ("10/3", 10)] {
            let cert = positive_diagram_cert(&trefoil(), slope(s)).unwrap();
            let r = cert.verify();
            assert!(r.accepted(), "{s}: {:?}", r.reasons);
            assert_eq!(r.k, k);
            assert_eq!(r.claimed_order, Some(k as u64));
        }
        let err = positive_diagram_cert(&trefoil(), slope("2")).unwrap_err();
        assert!(err.to_string().contains("slope condition violated"));
        assert!(positive_diagram_cert(&trefoil(), slope("-3")).is_err());
    }

    #[test]
    fn every_base_arc_works() {
        for base in 0..3 {
            let mut d = trefoil();
            d.base_overarc = base;
            assert!(positive_diagram_cert(&d, slope("5/1")).unwrap().verify().accepted());
        }
    }

    #[test]
    fn negative_crossing_under_base() {
        // Flipping a sign keeps the Wirtinger data well-formed; crossing 1
        // passes under arc 0, the base, so the threshold becomes p - k = 2.
        let mut d = trefoil();
        d.crossings[1].sign = -1;
        let cert = positive_diagram_cert(&d, slope("2")).unwrap();
        let r = cert.verify();
        assert!(r.accepted(), "{:?}", r.reasons);
        assert_eq!(r.k, 2);
        d.base_overarc = 1;
        assert!(matches!(positive_diagram_cert(&d, slope("5")), Err(ConstructorError::Precondition(_))));
    }
}
