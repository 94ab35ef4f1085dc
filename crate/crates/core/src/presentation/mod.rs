//! Finite presentations with peripheral structure.
//!
//! Builders for torus-knot groups, the genus-one two-bridge (Lin) presentation,
//! Wirtinger presentations of diagrams, and Dehn fillings of any of these.

mod wirtinger;

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::word::{Alphabet, Gen, Word, WordError};

pub use wirtinger::{wirtinger, Crossing, Diagram, OverarcData, WalkStep};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PresentationError {
    #[error(transparent)]
    Word(#[from] WordError),
    #[error("relator {0} is the identity after free reduction")]
    TrivialRelator(usize),
    #[error("torus knot parameters must satisfy 2 <= p < q with gcd(p, q) = 1, got ({p}, {q})")]
    TorusParameters { p: i64, q: i64 },
    #[error("genus-one parameters need p > 0 and q != 0, got ({p}, {q})")]
    LinParameters { p: i64, q: i64 },
    #[error("presentation has no meridian/longitude pair")]
    MissingPeripheral,
    #[error("filling relator is trivial in the free group")]
    TrivialFilling,
    #[error("malformed diagram: {0}")]
    Diagram(String),
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SlopeError {
    #[error(
        "slope infinity is not a filling slope here: it gives back the 3-sphere, \
         whose fundamental group is trivial and has no generalized torsion"
    )]
    Infinite,
    #[error("slope denominator must be >= 1, got {0}")]
    Denominator(i64),
    #[error("slope {m}/{n} is not in lowest terms")]
    NotCoprime { m: i64, n: i64 },
    #[error("cannot parse slope {0:?}")]
    Parse(String),
}

/// Dehn filling slope `m/n` with `n >= 1` and `gcd(|m|, n) = 1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Slope {
    m: i64,
    n: i64,
}

impl Slope {
    pub fn new(m: i64, n: i64) -> Result<Self, SlopeError> {
        if n == 0 {
            return Err(SlopeError::Infinite);
        }
        if n < 0 {
            return Err(SlopeError::Denominator(n));
        }
        if m.unsigned_abs().gcd(&n.unsigned_abs()) != 1 {
            return Err(SlopeError::NotCoprime { m, n });
        }
        Ok(Slope { m, n })
    }

    pub fn integral(m: i64) -> Self {
        Slope { m, n: 1 }
    }

    pub fn m(&self) -> i64 {
        self.m
    }

    pub fn n(&self) -> i64 {
        self.n
    }
}

impl fmt::Display for Slope {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.m, self.n)
    }
}

impl FromStr for Slope {
    type Err = SlopeError;

    fn from_str(text: &str) -> Result<Self, Self::Err> {
        let t = text.trim();
        let lower = t.to_ascii_lowercase();
        if matches!(lower.as_str(), "inf" | "infinity" | "+inf" | "-inf" | "oo") || t.contains('∞') {
            return Err(SlopeError::Infinite);
        }
        let parse = |s: &str| s.trim().parse::<i64>().map_err(|_| SlopeError::Parse(text.to_string()));
        match t.split_once('/') {
            Some((m, n)) => Slope::new(parse(m)?, parse(n)?),
            None => Slope::new(parse(t)?, 1),
        }
    }
}

impl Serialize for Slope {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Slope {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let text = String::deserialize(d)?;
        text.parse().map_err(serde::de::Error::custom)
    }
}

/// Where a presentation came from.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Provenance {
    Torus { p: i64, q: i64 },
    Lin { p: i64, q: i64 },
    Wirtinger { diagram: Diagram },
    Filled { parent: Box<Provenance>, m: i64, n: i64 },
    DiskAxiom { parent: Box<Provenance>, p_count: u32, q_count: u32 },
    Custom,
}

/// Meridian and longitude words.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Peripheral {
    pub meridian: Word,
    pub longitude: Word,
}

/// Generators, relators and an optional peripheral pair.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Presentation {
    alphabet: Alphabet,
    relators: Vec<Word>,
    peripheral: Option<Peripheral>,
    provenance: Provenance,
}

impl Presentation {
    pub fn new(
        alphabet: Alphabet,
        relators: Vec<Word>,
        peripheral: Option<Peripheral>,
        provenance: Provenance,
    ) -> Result<Self, PresentationError> {
        for (i, r) in relators.iter().enumerate() {
            alphabet.check(r)?;
            if r.is_identity() {
                return Err(PresentationError::TrivialRelator(i));
            }
        }
        if let Some(per) = &peripheral {
            alphabet.check(&per.meridian)?;
            alphabet.check(&per.longitude)?;
        }
        Ok(Presentation { alphabet, relators, peripheral, provenance })
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn generator_count(&self) -> usize {
        self.alphabet.len()
    }

    pub fn relators(&self) -> &[Word] {
        &self.relators
    }

    pub fn relator(&self, i: usize) -> Option<&Word> {
        self.relators.get(i)
    }

    pub fn peripheral(&self) -> Option<&Peripheral> {
        self.peripheral.as_ref()
    }

    pub fn meridian(&self) -> Option<&Word> {
        self.peripheral.as_ref().map(|p| &p.meridian)
    }

    pub fn longitude(&self) -> Option<&Word> {
        self.peripheral.as_ref().map(|p| &p.longitude)
    }

    pub fn provenance(&self) -> &Provenance {
        &self.provenance
    }

    pub fn gen(&self, symbol: &str) -> Result<Gen, WordError> {
        self.alphabet.gen(symbol)
    }

    /// Parses a word in this presentation's alphabet.
    pub fn word(&self, text: &str) -> Result<Word, WordError> {
        self.alphabet.parse_word(text)
    }

    pub fn format(&self, w: &Word) -> String {
        self.alphabet.format_word(w)
    }

    /// True if `self` is `parent` with generators and relators appended.
    pub fn extends(&self, parent: &Presentation) -> bool {
        self.alphabet.len() >= parent.alphabet.len()
            && self.alphabet.symbols().zip(parent.alphabet.symbols()).all(|(a, b)| a == b)
            && self.relators.len() >= parent.relators.len()
            && self.relators[..parent.relators.len()] == parent.relators[..]
    }

    /// Returns a copy with the given relator appended.
    pub fn with_relator(&self, r: Word, provenance: Provenance) -> Result<Self, PresentationError> {
        let mut relators = self.relators.clone();
        relators.push(r);
        Presentation::new(self.alphabet.clone(), relators, self.peripheral.clone(), provenance)
    }

    /// Adds generators to the alphabet; existing relators are unchanged.
    pub(crate) fn alphabet_mut(&mut self) -> &mut Alphabet {
        &mut self.alphabet
    }
}

/// `(a, b)` with `a·q + b·p = 1`, choosing the smallest `|a|` (positive on ties).
fn torus_meridian_exponents(p: i64, q: i64) -> (i64, i64) {
    let egcd = q.extended_gcd(&p);
    debug_assert_eq!(egcd.gcd, 1);
    let a0 = egcd.x.rem_euclid(p);
    let a = if a0 * 2 > p { a0 - p } else { a0 };
    let b = (1 - a * q) / p;
    (a, b)
}

/// `⟨x, y | x^p y^{-q}⟩` with meridian `x^a y^b` and longitude `x^p μ^{-pq}`.
pub fn torus_presentation(p: i64, q: i64) -> Result<Presentation, PresentationError> {
    if p < 2 || q <= p || p.gcd(&q) != 1 {
        return Err(PresentationError::TorusParameters { p, q });
    }
    let alphabet = Alphabet::new(["x", "y"])?;
    let (x, y) = (Gen(0), Gen(1));
    let relator = Word::from_syllables([(x, p), (y, -q)]);
    let (a, b) = torus_meridian_exponents(p, q);
    // x ↦ q, y ↦ p identifies H1 with Z; the meridian must map to 1.
    assert_eq!(a * q + b * p, 1, "meridian does not generate H1");
    let meridian = Word::from_syllables([(x, a), (y, b)]);
    let longitude = Word::gen_pow(x, p).mul(&meridian.pow(-p * q));
    Presentation::new(
        alphabet,
        vec![relator],
        Some(Peripheral { meridian, longitude }),
        Provenance::Torus { p, q },
    )
}

/// Three-generator presentation of the genus-one two-bridge knot `C[2p, 2q]`.
///
/// Relators `t a^p t⁻¹ a^{-p} b` and `t b^{-q} a⁻¹ t⁻¹ b^q`; meridian `t`,
/// longitude `[b^q, a^p]`.
pub fn lin_presentation(p: i64, q: i64) -> Result<Presentation, PresentationError> {
    if p <= 0 || q == 0 {
        return Err(PresentationError::LinParameters { p, q });
    }
    let alphabet = Alphabet::new(["a", "b", "t"])?;
    let (a, b, t) = (Gen(0), Gen(1), Gen(2));
    let r1 = Word::from_syllables([(t, 1), (a, p), (t, -1), (a, -p), (b, 1)]);
    let r2 = Word::from_syllables([(t, 1), (b, -q), (a, -1), (t, -1), (b, q)]);
    let longitude = Word::commutator(&Word::gen_pow(b, q), &Word::gen_pow(a, p));
    Presentation::new(
        alphabet,
        vec![r1, r2],
        Some(Peripheral { meridian: Word::generator(t), longitude }),
        Provenance::Lin { p, q },
    )
}

/// The filling relator `μ^m λ^n` for a presentation with peripheral structure.
pub fn filling_relator(p: &Presentation, s: Slope) -> Result<Word, PresentationError> {
    let per = p.peripheral().ok_or(PresentationError::MissingPeripheral)?;
    Ok(per.meridian.pow(s.m()).mul(&per.longitude.pow(s.n())))
}

/// Appends `μ^m λ^n`.
pub fn dehn_fill(p: &Presentation, s: Slope) -> Result<Presentation, PresentationError> {
    let r = filling_relator(p, s)?;
    if r.is_identity() {
        return Err(PresentationError::TrivialFilling);
    }
    p.with_relator(
        r,
        Provenance::Filled { parent: Box::new(p.provenance().clone()), m: s.m(), n: s.n() },
    )
}

/// Dense matrix of exact integers.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntegerMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BigInt>,
}

impl IntegerMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntegerMatrix { rows, cols, data: vec![BigInt::from(0); rows * cols] }
    }

    pub fn from_rows<T: Into<BigInt> + Copy>(rows: &[Vec<T>]) -> Self {
        let cols = rows.first().map_or(0, Vec::len);
        let mut m = IntegerMatrix::zeros(rows.len(), cols);
        for (i, row) in rows.iter().enumerate() {
            assert_eq!(row.len(), cols, "ragged matrix");
            for (j, &v) in row.iter().enumerate() {
                m[(i, j)] = v.into();
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &[BigInt] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn swap_rows(&mut self, a: usize, b: usize) {
        if a != b {
            for j in 0..self.cols {
                self.data.swap(a * self.cols + j, b * self.cols + j);
            }
        }
    }

    pub fn swap_cols(&mut self, a: usize, b: usize) {
        if a != b {
            for i in 0..self.rows {
                self.data.swap(i * self.cols + a, i * self.cols + b);
            }
        }
    }

    /// `row[dst] += k · row[src]`
    pub fn add_row_multiple(&mut self, dst: usize, src: usize, k: &BigInt) {
        for j in 0..self.cols {
            let v = &self.data[src * self.cols + j] * k;
            self.data[dst * self.cols + j] += v;
        }
    }

    /// `col[dst] += k · col[src]`
    pub fn add_col_multiple(&mut self, dst: usize, src: usize, k: &BigInt) {
        for i in 0..self.rows {
            let v = &self.data[i * self.cols + src] * k;
            self.data[i * self.cols + dst] += v;
        }
    }

    pub fn negate_row(&mut self, i: usize) {
        for j in 0..self.cols {
            let v = -&self.data[i * self.cols + j];
            self.data[i * self.cols + j] = v;
        }
    }

    pub fn to_i64_rows(&self) -> Option<Vec<Vec<i64>>> {
        use num_traits::ToPrimitive;
        (0..self.rows)
            .map(|i| self.row(i).iter().map(ToPrimitive::to_i64).collect())
            .collect()
    }
}

impl std::ops::Index<(usize, usize)> for IntegerMatrix {
    type Output = BigInt;
    fn index(&self, (i, j): (usize, usize)) -> &BigInt {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for IntegerMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut BigInt {
        &mut self.data[i * self.cols + j]
    }
}

/// Exponent-sum matrix: one row per relator, one column per generator.
pub fn abelianization_matrix(p: &Presentation) -> IntegerMatrix {
    let mut m = IntegerMatrix::zeros(p.relators().len(), p.generator_count());
    for (i, r) in p.relators().iter().enumerate() {
        for &(g, e) in r.syllables() {
            m[(i, g.index())] += e;
        }
    }
    m
}

/// Exponent-sum vector of a single word.
pub fn abelianize_word(p: &Presentation, w: &Word) -> Vec<BigInt> {
    let mut v = vec![BigInt::from(0); p.generator_count()];
    for &(g, e) in w.syllables() {
        v[g.index()] += e;
    }
    v
}

/// JSON shape of a presentation.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PresentationJson {
    pub generators: Vec<String>,
    pub relators: Vec<Vec<(String, i64)>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub meridian: Option<Vec<(String, i64)>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub longitude: Option<Vec<(String, i64)>>,
    #[serde(default = "custom_provenance")]
    pub provenance: Provenance,
}

fn custom_provenance() -> Provenance {
    Provenance::Custom
}

impl Presentation {
    pub fn to_json(&self) -> PresentationJson {
        let a = &self.alphabet;
        PresentationJson {
            generators: a.symbols().map(str::to_string).collect(),
            relators: self.relators.iter().map(|r| a.word_to_pairs(r)).collect(),
            meridian: self.meridian().map(|w| a.word_to_pairs(w)),
            longitude: self.longitude().map(|w| a.word_to_pairs(w)),
            provenance: self.provenance.clone(),
        }
    }

    pub fn from_json(json: &PresentationJson) -> Result<Self, PresentationError> {
        let alphabet = Alphabet::new(json.generators.iter().cloned())?;
        let relators = json
            .relators
            .iter()
            .map(|r| alphabet.word_from_pairs(r))
            .collect::<Result<Vec<_>, _>>()?;
        let peripheral = match (&json.meridian, &json.longitude) {
            (Some(m), Some(l)) => Some(Peripheral {
                meridian: alphabet.word_from_pairs(m)?,
                longitude: alphabet.word_from_pairs(l)?,
            }),
            (None, None) => None,
            _ => return Err(PresentationError::MissingPeripheral),
        };
        Presentation::new(alphabet, relators, peripheral, json.provenance.clone())
    }
}

impl Serialize for Presentation {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.to_json().serialize(s)
    }
}

impl<'de> Deserialize<'de> for Presentation {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let json = PresentationJson::deserialize(d)?;
        Presentation::from_json(&json).map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rows(m: &IntegerMatrix) -> Vec<Vec<i64>> {
        m.to_i64_rows().unwrap()
    }

    #[test]
    fn slope_parsing() {
        assert_eq!("5".parse::<Slope>().unwrap(), Slope::new(5, 1).unwrap());
        assert_eq!("-3/2".parse::<Slope>().unwrap(), Slope::new(-3, 2).unwrap());
        assert_eq!(" 7/2 ".parse::<Slope>().unwrap(), Slope::new(7, 2).unwrap());
        assert!(matches!("4/2".parse::<Slope>(), Err(SlopeError::NotCoprime { .. })));
        assert!(matches!("inf".parse::<Slope>(), Err(SlopeError::Infinite)));
        assert!(matches!("∞".parse::<Slope>(), Err(SlopeError::Infinite)));
        assert!(matches!("1/0".parse::<Slope>(), Err(SlopeError::Infinite)));
        assert!(matches!("1/-2".parse::<Slope>(), Err(SlopeError::Denominator(-2))));
        assert!(matches!("abc".parse::<Slope>(), Err(SlopeError::Parse(_))));
        assert!("0".parse::<Slope>().is_ok());
        assert!(matches!("0/2".parse::<Slope>(), Err(SlopeError::NotCoprime { .. })));
        let msg = SlopeError::Infinite.to_string();
        assert!(msg.contains("trivial"));
    }

    #[test]
    fn torus_two_three() {
        let p = torus_presentation(2, 3).unwrap();
        assert_eq!(p.format(&p.relators()[0]), "x^2 y^-3");
        assert_eq!(p.format(p.meridian().unwrap()), "x y^-1");
        assert_eq!(rows(&abelianization_matrix(&p)), vec![vec![2, -3]]);
    }

    #[test]
    fn torus_meridian_solves_bezout() {
        for (p, q) in [(2, 3), (3, 5), (2, 5), (3, 4), (4, 7), (5, 12)] {
            let (a, b) = torus_meridian_exponents(p, q);
            assert_eq!(a * q + b * p, 1);
            assert!(2 * a.abs() <= p, "|a| not minimal for ({p},{q})");
        }
        let pres = torus_presentation(3, 5).unwrap();
        let mu = pres.meridian().unwrap();
        let (x, y) = (Gen(0), Gen(1));
        assert_eq!(5 * mu.exponent_sum(x) + 3 * mu.exponent_sum(y), 1);
    }

    #[test]
    fn torus_rejects_bad_parameters() {
        for (p, q) in [(2, 4), (1, 3), (3, 2), (3, 3), (0, 5)] {
            assert!(torus_presentation(p, q).is_err(), "({p},{q}) accepted");
        }
    }

    #[test]
    fn lin_relators_match_the_two_relations() {
        let p = lin_presentation(2, 3).unwrap();
        assert_eq!(p.format(&p.relators()[0]), "t a^2 t^-1 a^-2 b");
        assert_eq!(p.format(&p.relators()[1]), "t b^-3 a^-1 t^-1 b^3");
        assert_eq!(p.format(p.longitude().unwrap()), "b^-3 a^-2 b^3 a^2");
        // both relators have vanishing t-column; a and b columns by direct count
        assert_eq!(rows(&abelianization_matrix(&p)), vec![vec![0, 1, 0], vec![-1, 0, 0]]);
        assert!(lin_presentation(0, 1).is_err());
        assert!(lin_presentation(1, 0).is_err());
    }

    #[test]
    fn filling_appends_one_relator() {
        let p = lin_presentation(1, 1).unwrap();
        let f = dehn_fill(&p, Slope::new(1, 1).unwrap()).unwrap();
        assert!(f.extends(&p));
        assert_eq!(f.relators().len(), 3);
        assert_eq!(f.format(&f.relators()[2]), "t b^-1 a^-1 b a");
        assert_eq!(rows(&abelianization_matrix(&f))[2], vec![0, 0, 1]);
        let f = dehn_fill(&p, Slope::new(-5, 2).unwrap()).unwrap();
        assert_eq!(rows(&abelianization_matrix(&f))[2], vec![0, 0, -5]);
        assert!(matches!(
            f.provenance(),
            Provenance::Filled { m: -5, n: 2, .. }
        ));
        let bare = Presentation::new(Alphabet::new(["x"]).unwrap(), vec![], None, Provenance::Custom)
            .unwrap();
        assert_eq!(dehn_fill(&bare, Slope::integral(1)), Err(PresentationError::MissingPeripheral));
    }

    #[test]
    fn rejects_trivial_or_foreign_relators() {
        let a = Alphabet::new(["x"]).unwrap();
        assert_eq!(
            Presentation::new(a.clone(), vec![Word::identity()], None, Provenance::Custom),
            Err(PresentationError::TrivialRelator(0))
        );
        assert!(Presentation::new(a, vec![Word::generator(Gen(3))], None, Provenance::Custom).is_err());
    }

    #[test]
    fn json_round_trip() {
        let p = dehn_fill(&lin_presentation(2, -3).unwrap(), Slope::new(7, 2).unwrap()).unwrap();
        let text = serde_json::to_string(&p).unwrap();
        let back: Presentation = serde_json::from_str(&text).unwrap();
        assert_eq!(back, p);
        let v: serde_json::Value = serde_json::from_str(&text).unwrap();
        assert_eq!(v["generators"], serde_json::json!(["a", "b", "t"]));
        assert_eq!(v["meridian"], serde_json::json!([["t", 1]]));
        assert_eq!(v["provenance"]["kind"], "filled");
    }
}
