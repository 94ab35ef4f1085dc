//! Independent checks: abelianization, coset enumeration and finite quotients.

mod coset;
mod quotient;
mod smith;

use num_bigint::BigInt;

use crate::presentation::{abelianization_matrix, abelianize_word, Presentation};
use crate::word::Word;

pub use coset::{permutation_eval, todd_coxeter, CosetStatus, CosetTable, IncompleteTable};
pub use quotient::{finite_quotient_search, Homomorphism, QuotientReport, QuotientSearch};
pub use smith::{smith_normal_form, SmithForm};

/// Default coset cap for enumeration.
pub const DEFAULT_COSET_CAP: usize = 1_000_000;

/// Smith form of the presentation's exponent-sum matrix.
pub fn abelianization(p: &Presentation) -> SmithForm {
    smith_normal_form(&abelianization_matrix(p))
}

/// Order of the class of `w` in H1 (0 if infinite).
pub fn element_order_in_h1(p: &Presentation, w: &Word) -> BigInt {
    abelianization(p).order_of(&abelianize_word(p, w))
}
