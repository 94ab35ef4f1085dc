//! Replayable triviality proofs.
//!
//! A [`DerivationLog`] starts from a word and inserts conjugated relators
//! `c·r^{±1}·c⁻¹` at letter positions, free-reducing after each move. If the
//! word reaches the identity, the start word is trivial in the presented group.
//!
//! Constructors do not write moves by hand. They build [`Equation`]s, whose
//! [`Witness`] is a list of relator conjugates, and convert the final witness
//! into a log with [`witness_to_log`].

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::presentation::Presentation;
use crate::word::{Alphabet, Letter, Word, WordError};

pub const DEFAULT_MAX_LENGTH: u64 = 1_000_000;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DerivationError {
    #[error("relator index {index} out of range ({count} relators)")]
    RelatorIndex { index: usize, count: usize },
    #[error("move exponent must be +1 or -1, got {0}")]
    Exponent(i64),
    #[error("position {pos} beyond word length {len}")]
    Position { pos: u64, len: u64 },
    #[error(transparent)]
    Word(#[from] WordError),
    #[error("log was not accepted: {0}")]
    NotAccepted(String),
    #[error("{0} is not a conjugate of a single relator or its inverse")]
    NoRelatorConjugate(String),
    #[error("equation sides {lhs} and {rhs} are not related by a product of relator conjugates")]
    Unproven { lhs: String, rhs: String },
}

/// One relator conjugate `conj · r_rel^exp · conj⁻¹`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Factor {
    pub conj: Word,
    pub rel: usize,
    pub exp: i8,
    pub note: Option<String>,
}

impl Factor {
    pub fn new(conj: Word, rel: usize, exp: i8) -> Self {
        Factor { conj, rel, exp, note: None }
    }

    fn inverse(&self) -> Factor {
        Factor { exp: -self.exp, ..self.clone() }
    }

    fn conjugated(&self, y: &Word) -> Factor {
        Factor { conj: y.mul(&self.conj), ..self.clone() }
    }

    pub fn value(&self, p: &Presentation) -> Word {
        p.relators()[self.rel].pow(i64::from(self.exp)).conjugate(&self.conj)
    }
}

/// A product of relator conjugates, read left to right.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Witness(pub Vec<Factor>);

impl Witness {
    pub fn empty() -> Self {
        Witness(Vec::new())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn factors(&self) -> &[Factor] {
        &self.0
    }

    /// Free-reduced product of all factors.
    pub fn value(&self, p: &Presentation) -> Result<Word, DerivationError> {
        let mut out = Word::identity();
        for f in &self.0 {
            check_relator(p, f.rel)?;
            out.mul_assign(&f.value(p));
        }
        Ok(out)
    }

    pub fn inverse(&self) -> Witness {
        Witness(self.0.iter().rev().map(Factor::inverse).collect())
    }

    /// `y · self · y⁻¹`, factor by factor.
    pub fn conjugated(&self, y: &Word) -> Witness {
        if y.is_identity() {
            return self.clone();
        }
        Witness(self.0.iter().map(|f| f.conjugated(y)).collect())
    }

    pub fn append(&mut self, other: Witness) {
        self.0.extend(other.0);
    }

    /// Attaches `note` to every factor that has none yet.
    pub fn noted(mut self, note: &str) -> Witness {
        for f in &mut self.0 {
            f.note.get_or_insert_with(|| note.to_string());
        }
        self
    }
}

fn check_relator(p: &Presentation, index: usize) -> Result<(), DerivationError> {
    let count = p.relators().len();
    if index >= count {
        return Err(DerivationError::RelatorIndex { index, count });
    }
    Ok(())
}

/// `lhs =_G rhs`, certified by `lhs =_free witness · rhs`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Equation {
    pub lhs: Word,
    pub rhs: Word,
    pub witness: Witness,
}

impl Equation {
    pub fn refl(w: Word) -> Self {
        Equation { lhs: w.clone(), rhs: w, witness: Witness::empty() }
    }

    /// `lhs = rhs` where `lhs·rhs⁻¹` is freely trivial or a conjugate of one
    /// relator (or its inverse).
    pub fn by_relator(p: &Presentation, lhs: Word, rhs: Word) -> Result<Self, DerivationError> {
        let diff = lhs.mul(&rhs.inverse());
        if diff.is_identity() {
            return Ok(Equation { lhs, rhs, witness: Witness::empty() });
        }
        let f = find_relator_conjugate(p, &diff)
            .ok_or_else(|| DerivationError::NoRelatorConjugate(p.format(&diff)))?;
        Ok(Equation { lhs, rhs, witness: Witness(vec![f]) })
    }

    /// `(L1 L2) = (R1 R2)`.
    pub fn mul(&self, other: &Equation) -> Equation {
        let mut witness = self.witness.clone();
        witness.append(other.witness.conjugated(&self.rhs));
        Equation { lhs: self.lhs.mul(&other.lhs), rhs: self.rhs.mul(&other.rhs), witness }
    }

    /// Product of a sequence of equations.
    pub fn product<'a, I: IntoIterator<Item = &'a Equation>>(parts: I) -> Equation {
        parts
            .into_iter()
            .fold(Equation::refl(Word::identity()), |acc, e| acc.mul(e))
    }

    /// `L⁻¹ = R⁻¹`.
    pub fn inverse(&self) -> Equation {
        let r_inv = self.rhs.inverse();
        Equation {
            lhs: self.lhs.inverse(),
            witness: self.witness.inverse().conjugated(&r_inv),
            rhs: r_inv,
        }
    }

    /// `y L y⁻¹ = y R y⁻¹`.
    pub fn conjugate(&self, y: &Word) -> Equation {
        Equation {
            lhs: self.lhs.conjugate(y),
            rhs: self.rhs.conjugate(y),
            witness: self.witness.conjugated(y),
        }
    }

    /// `L^k = R^k`; `k` may be negative.
    pub fn pow(&self, k: i64) -> Equation {
        let base = if k < 0 { self.inverse() } else { self.clone() };
        let mut out = Equation::refl(Word::identity());
        for _ in 0..k.unsigned_abs() {
            out = out.mul(&base);
        }
        out
    }

    /// `R = L`.
    pub fn symm(&self) -> Equation {
        Equation { lhs: self.rhs.clone(), rhs: self.lhs.clone(), witness: self.witness.inverse() }
    }

    /// From `A = B` and `B = C`, `A = C`.
    pub fn trans(&self, other: &Equation) -> Result<Equation, DerivationError> {
        if self.rhs != other.lhs {
            return Err(DerivationError::Unproven {
                lhs: self.rhs.to_string(),
                rhs: other.lhs.to_string(),
            });
        }
        let mut witness = self.witness.clone();
        witness.append(other.witness.clone());
        Ok(Equation { lhs: self.lhs.clone(), rhs: other.rhs.clone(), witness })
    }

    pub fn noted(mut self, note: &str) -> Equation {
        self.witness = self.witness.noted(note);
        self
    }

    /// Recomputes `witness · rhs` and compares it with `lhs`.
    pub fn check(&self, p: &Presentation) -> Result<(), DerivationError> {
        let value = self.witness.value(p)?;
        if value.mul(&self.rhs) != self.lhs {
            return Err(DerivationError::Unproven {
                lhs: p.format(&self.lhs),
                rhs: p.format(&self.rhs),
            });
        }
        Ok(())
    }
}

fn letters_of(w: &Word) -> Vec<Letter> {
    w.letters().collect()
}

/// Smallest `j` with `haystack` rotated left by `j` equal to `needle`.
fn rotation_offset(needle: &[Letter], haystack: &[Letter]) -> Option<usize> {
    let n = needle.len();
    if n != haystack.len() {
        return None;
    }
    if n == 0 {
        return Some(0);
    }
    // Knuth–Morris–Pratt over haystack·haystack.
    let mut fail = vec![0usize; n];
    let mut k = 0;
    for i in 1..n {
        while k > 0 && needle[i] != needle[k] {
            k = fail[k - 1];
        }
        if needle[i] == needle[k] {
            k += 1;
        }
        fail[i] = k;
    }
    let mut k = 0;
    for i in 0..2 * n - 1 {
        let c = haystack[i % n];
        while k > 0 && c != needle[k] {
            k = fail[k - 1];
        }
        if c == needle[k] {
            k += 1;
        }
        if k == n {
            return Some(i + 1 - n);
        }
    }
    None
}

/// Finds `c`, `i`, `e` with `w =_free c · r_i^e · c⁻¹`.
pub fn find_relator_conjugate(p: &Presentation, w: &Word) -> Option<Factor> {
    let (d, u) = w.cyclic_reduction();
    let u_letters = letters_of(&u);
    for (i, r) in p.relators().iter().enumerate() {
        for e in [1i8, -1] {
            let (f, v) = r.pow(i64::from(e)).cyclic_reduction();
            let v_letters = letters_of(&v);
            if let Some(j) = rotation_offset(&u_letters, &v_letters) {
                // v = x y and u = y x = x⁻¹ v x with x the first j letters of v.
                let (x, _) = v.split_at_letter(j as u64);
                let conj = d.mul(&x.inverse()).mul(&f.inverse());
                debug_assert_eq!(&r.pow(i64::from(e)).conjugate(&conj), w);
                return Some(Factor::new(conj, i, e));
            }
        }
    }
    None
}

/// Inserts `conjugator · r^exponent · conjugator⁻¹` after `position` letters.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Move {
    pub position: u64,
    pub relator: usize,
    pub exponent: i8,
    pub conjugator: Word,
    pub note: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DerivationLog {
    pub start: Word,
    pub moves: Vec<Move>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Accepted,
    Rejected,
    Overflow,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Failure {
    /// Index of the offending move; equal to the move count when every move
    /// applied but the final word is not the identity.
    pub step: usize,
    pub reason: String,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReplayReport {
    pub verdict: Verdict,
    pub final_word: Word,
    pub steps: usize,
    pub max_length: u64,
    pub failure: Option<Failure>,
}

impl ReplayReport {
    pub fn accepted(&self) -> bool {
        self.verdict == Verdict::Accepted
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ReplayOptions {
    /// Longest intermediate word allowed before the verdict is `Overflow`.
    pub max_length: u64,
    /// Also track `start` times the accumulated relator conjugates and compare
    /// with the reduced word after every move.
    pub check_shadow: bool,
}

impl Default for ReplayOptions {
    fn default() -> Self {
        ReplayOptions { max_length: DEFAULT_MAX_LENGTH, check_shadow: true }
    }
}

fn validate_move(p: &Presentation, w: &Word, mv: &Move) -> Result<(), DerivationError> {
    check_relator(p, mv.relator)?;
    if mv.exponent != 1 && mv.exponent != -1 {
        return Err(DerivationError::Exponent(i64::from(mv.exponent)));
    }
    if mv.position > w.len() {
        return Err(DerivationError::Position { pos: mv.position, len: w.len() });
    }
    p.alphabet().check(&mv.conjugator)?;
    Ok(())
}

/// Applies one move and free-reduces.
pub fn apply_move(p: &Presentation, w: &Word, mv: &Move) -> Result<Word, DerivationError> {
    validate_move(p, w, mv)?;
    let (left, right) = w.split_at_letter(mv.position);
    let inserted = p.relators()[mv.relator].pow(i64::from(mv.exponent)).conjugate(&mv.conjugator);
    let mut out = left;
    out.mul_assign(&inserted);
    out.mul_assign(&right);
    Ok(out)
}

/// The relator conjugate that a move multiplies onto the left of `w`.
fn left_factor(w: &Word, mv: &Move) -> Factor {
    let (prefix, _) = w.split_at_letter(mv.position);
    Factor {
        conj: prefix.mul(&mv.conjugator),
        rel: mv.relator,
        exp: mv.exponent,
        note: mv.note.clone(),
    }
}

pub fn replay(p: &Presentation, log: &DerivationLog) -> ReplayReport {
    replay_with(p, log, ReplayOptions::default())
}

pub fn replay_with(p: &Presentation, log: &DerivationLog, opts: ReplayOptions) -> ReplayReport {
    let mut current = log.start.clone();
    let mut max_length = current.len();
    let report = |verdict, final_word, steps, max_length, failure| ReplayReport {
        verdict,
        final_word,
        steps,
        max_length,
        failure,
    };
    if let Err(e) = p.alphabet().check(&current) {
        let failure = Failure { step: 0, reason: format!("start word: {e}") };
        return report(Verdict::Rejected, current, 0, max_length, Some(failure));
    }
    if max_length > opts.max_length {
        let failure = Failure { step: 0, reason: format!("start word exceeds {} letters", opts.max_length) };
        return report(Verdict::Overflow, current, 0, max_length, Some(failure));
    }
    let mut shadow = current.clone();
    for (step, mv) in log.moves.iter().enumerate() {
        let next = match apply_move(p, &current, mv) {
            Ok(next) => next,
            Err(e) => {
                let failure = Failure { step, reason: e.to_string() };
                return report(Verdict::Rejected, current, step, max_length, Some(failure));
            }
        };
        if opts.check_shadow {
            shadow = left_factor(&current, mv).value(p).mul(&shadow);
            if shadow != next {
                let failure = Failure { step, reason: "reduced word diverged from shadow product".into() };
                return report(Verdict::Rejected, next, step + 1, max_length, Some(failure));
            }
        }
        current = next;
        max_length = max_length.max(current.len());
        if current.len() > opts.max_length {
            let failure = Failure {
                step,
                reason: format!("word length {} exceeds ceiling {}", current.len(), opts.max_length),
            };
            return report(Verdict::Overflow, current, step + 1, max_length, Some(failure));
        }
    }
    let steps = log.moves.len();
    if current.is_identity() {
        report(Verdict::Accepted, current, steps, max_length, None)
    } else {
        let failure = Failure {
            step: steps,
            reason: format!("final word {} is not the identity", p.format(&current)),
        };
        report(Verdict::Rejected, current, steps, max_length, Some(failure))
    }
}

/// Log for `w`, given `w =_free` the product of `witness`.
///
/// Each factor is cancelled from the left in turn. The insertion point skips
/// the longest common prefix of the factor's conjugator and the current word.
pub fn witness_to_log(p: &Presentation, w: &Word, witness: &Witness) -> Result<DerivationLog, DerivationError> {
    let mut current = w.clone();
    let mut moves = Vec::with_capacity(witness.len());
    for f in witness.factors() {
        check_relator(p, f.rel)?;
        let pos = f.conj.common_prefix_len(&current);
        let (_, rest) = f.conj.split_at_letter(pos);
        let mv = Move { position: pos, relator: f.rel, exponent: -f.exp, conjugator: rest, note: f.note.clone() };
        current = apply_move(p, &current, &mv)?;
        moves.push(mv);
    }
    Ok(DerivationLog { start: w.clone(), moves })
}

/// Witness `G_1⁻¹ ⋯ G_N⁻¹` for the start word of an accepted log, where
/// `G_i` is the relator conjugate that move `i` multiplied on the left.
pub fn extract_witness(p: &Presentation, log: &DerivationLog) -> Result<Witness, DerivationError> {
    let report = replay(p, log);
    if !report.accepted() {
        let reason = report.failure.map(|f| f.reason).unwrap_or_default();
        return Err(DerivationError::NotAccepted(reason));
    }
    let mut current = log.start.clone();
    let mut factors = Vec::with_capacity(log.moves.len());
    for mv in &log.moves {
        factors.push(left_factor(&current, mv).inverse());
        current = apply_move(p, &current, mv)?;
    }
    Ok(Witness(factors))
}

/// Log for `u·v` from accepted logs for `u` and `v`; the step count is the sum.
pub fn compose_logs(p: &Presentation, l1: &DerivationLog, l2: &DerivationLog) -> Result<DerivationLog, DerivationError> {
    let mut witness = extract_witness(p, l1)?;
    witness.append(extract_witness(p, l2)?);
    witness_to_log(p, &l1.start.mul(&l2.start), &witness)
}

/// Wire format of a move.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MoveJson {
    pub pos: u64,
    pub rel: usize,
    pub exp: i64,
    pub conj: Vec<(String, i64)>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LogJson {
    pub start: Vec<(String, i64)>,
    pub moves: Vec<MoveJson>,
}

impl DerivationLog {
    pub fn empty(start: Word) -> Self {
        DerivationLog { start, moves: Vec::new() }
    }

    pub fn to_json(&self, a: &Alphabet) -> LogJson {
        LogJson {
            start: a.word_to_pairs(&self.start),
            moves: self
                .moves
                .iter()
                .map(|m| MoveJson {
                    pos: m.position,
                    rel: m.relator,
                    exp: i64::from(m.exponent),
                    conj: a.word_to_pairs(&m.conjugator),
                    note: m.note.clone(),
                })
                .collect(),
        }
    }

    /// Exponents other than ±1 are rejected here rather than at replay.
    pub fn from_json(json: &LogJson, a: &Alphabet) -> Result<Self, DerivationError> {
        let moves = json
            .moves
            .iter()
            .map(|m| {
                let exponent = match m.exp {
                    1 => 1,
                    -1 => -1,
                    e => return Err(DerivationError::Exponent(e)),
                };
                Ok(Move {
                    position: m.pos,
                    relator: m.rel,
                    exponent,
                    conjugator: a.word_from_pairs(&m.conj)?,
                    note: m.note.clone(),
                })
            })
            .collect::<Result<Vec<_>, _>>()?;
        Ok(DerivationLog { start: a.word_from_pairs(&json.start)?, moves })
    }
}
