use crate::certificate::{ConjugateProduct, Evidence, Membership, TorsionCertificate};
use crate::derivation::Equation;
use crate::presentation::torus_presentation;
use crate::word::Word;

use super::ConstructorError;

/// `[x,y]` in `⟨x, y | x^p y^{-q}⟩`: `[x,y^q] = ∏_{j<q} y^{-j}[x,y]y^j`, and
/// `[x,y^q] = [x,x^p] = 1`. The commutator's nontriviality is not decided
/// here, so the evidence is `Assumed`.
pub fn torus_commutator_cert(p: i64, q: i64) -> Result<TorsionCertificate, ConstructorError> {
    let pres = torus_presentation(p, q)?;
    let x = Word::generator(pres.gen("x")?);
    let y = Word::generator(pres.gen("y")?);
    let product = ConjugateProduct::new(Word::commutator(&x, &y), (0..q).map(|j| y.pow(-j)).collect())?;
    let m = Membership::from_product(product);

    // x⁻¹ y^{-q} x y^q = x⁻¹ x^{-p} x x^p
    let substitute = Equation::product(&[
        Equation::refl(x.inverse()),
        Equation::by_relator(&pres, y.pow(-q), x.pow(-p))?,
        Equation::refl(x.clone()),
        Equation::by_relator(&pres, y.pow(q), x.pow(p))?,
    ])
    .noted("y^q = x^p");
    let m = m.rewrite(&substitute)?;
    debug_assert!(m.target().is_identity());
    Ok(TorsionCertificate { membership: m.into_certificate(&pres)?, evidence: Evidence::Assumed })
}
