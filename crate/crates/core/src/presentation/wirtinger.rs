//! Wirtinger presentations of oriented knot diagrams.

use serde::{Deserialize, Serialize};

use super::{Peripheral, Presentation, PresentationError, Provenance};
use crate::word::{Alphabet, Gen, Word};

/// One crossing: the under-strand enters on `in_arc`, leaves on `out_arc`,
/// passing under `over`. `sign` is +1 for a right-handed crossing.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Crossing {
    pub over: usize,
    #[serde(rename = "in")]
    pub in_arc: usize,
    #[serde(rename = "out")]
    pub out_arc: usize,
    pub sign: i8,
}

/// An oriented knot diagram. Arcs run from undercrossing to undercrossing,
/// so there are as many arcs as crossings.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Diagram {
    pub crossings: Vec<Crossing>,
    pub traversal: Vec<usize>,
    pub base_overarc: usize,
}

/// One undercrossing met while walking the knot from the start of the base arc.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WalkStep {
    pub crossing: usize,
    pub over: usize,
    pub sign: i8,
    /// Arc the walk continues on after this crossing.
    pub arc: usize,
}

/// Combinatorics of the diagram needed by the positive-diagram construction.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OverarcData {
    /// Crossing count.
    pub p: usize,
    /// Number of negative crossings.
    pub k: usize,
    pub writhe: i64,
    /// True when every negative crossing passes under the base overarc.
    pub negatives_on_base: bool,
    pub base: usize,
    pub walk: Vec<WalkStep>,
    /// `arc_conjugators[a]` is `C` with `t_a = C t_base C⁻¹` in the knot group.
    #[serde(skip)]
    pub arc_conjugators: Vec<Word>,
}

impl Diagram {
    pub fn arc_count(&self) -> usize {
        self.crossings.len()
    }

    pub fn writhe(&self) -> i64 {
        self.crossings.iter().map(|c| i64::from(c.sign)).sum()
    }

    /// Checks ids, signs, in/out degrees and the traversal.
    pub fn validate(&self) -> Result<(), PresentationError> {
        let bad = |msg: String| Err(PresentationError::Diagram(msg));
        let d = self.arc_count();
        if d == 0 {
            return bad("diagram has no crossings".into());
        }
        let mut in_seen = vec![false; d];
        let mut out_seen = vec![false; d];
        for (i, c) in self.crossings.iter().enumerate() {
            for arc in [c.over, c.in_arc, c.out_arc] {
                if arc >= d {
                    return bad(format!("crossing {i} names arc {arc}, but there are only {d} arcs"));
                }
            }
            if c.sign != 1 && c.sign != -1 {
                return bad(format!("crossing {i} has sign {}, expected +1 or -1", c.sign));
            }
            if std::mem::replace(&mut in_seen[c.in_arc], true) {
                return bad(format!("arc {} ends at more than one crossing", c.in_arc));
            }
            if std::mem::replace(&mut out_seen[c.out_arc], true) {
                return bad(format!("arc {} starts at more than one crossing", c.out_arc));
            }
        }
        if self.base_overarc >= d {
            return bad(format!("base overarc {} out of range", self.base_overarc));
        }
        if self.traversal.len() != d {
            return bad(format!("traversal lists {} arcs, expected {d}", self.traversal.len()));
        }
        let next = self.successor_map();
        let mut listed = vec![false; d];
        for (j, &a) in self.traversal.iter().enumerate() {
            if a >= d || std::mem::replace(&mut listed[a], true) {
                return bad(format!("traversal entry {j} ({a}) is out of range or repeated"));
            }
            let b = self.traversal[(j + 1) % d];
            if next[a] != b {
                return bad(format!("traversal goes {a} -> {b}, but arc {a} continues as arc {}", next[a]));
            }
        }
        Ok(())
    }

    /// `next[a]` is the arc following `a` along the orientation.
    fn successor_map(&self) -> Vec<usize> {
        let mut next = vec![0; self.arc_count()];
        for c in &self.crossings {
            next[c.in_arc] = c.out_arc;
        }
        next
    }

    fn crossing_ending(&self, arc: usize) -> usize {
        self.crossings.iter().position(|c| c.in_arc == arc).expect("validated diagram")
    }
}

fn arc_symbol(a: usize) -> String {
    format!("t{a}")
}

/// Builds the Wirtinger presentation with meridian `t_base` and the
/// null-homologous longitude read off the walk from the base arc.
///
/// Crossing relator: `t_over^s t_in t_over^-s t_out^-1`. Relators that reduce
/// to the identity (a kink whose over, in and out arcs coincide) are dropped.
pub fn wirtinger(d: &Diagram) -> Result<(Presentation, OverarcData), PresentationError> {
    d.validate()?;
    let n = d.arc_count();
    let alphabet = Alphabet::new((0..n).map(arc_symbol))?;
    let t = |a: usize| Gen(a as u32);

    let relators: Vec<Word> = d
        .crossings
        .iter()
        .map(|c| {
            let s = i64::from(c.sign);
            Word::from_syllables([(t(c.over), s), (t(c.in_arc), 1), (t(c.over), -s), (t(c.out_arc), -1)])
        })
        .filter(|r| !r.is_identity())
        .collect();

    let base = d.base_overarc;
    let mut walk = Vec::with_capacity(n);
    let mut arc_conjugators = vec![Word::identity(); n];
    let mut conj = Word::identity();
    let mut arc = base;
    for _ in 0..n {
        let ci = d.crossing_ending(arc);
        let c = d.crossings[ci];
        conj = Word::gen_pow(t(c.over), i64::from(c.sign)).mul(&conj);
        arc = c.out_arc;
        if arc != base {
            arc_conjugators[arc] = conj.clone();
        }
        walk.push(WalkStep { crossing: ci, over: c.over, sign: c.sign, arc });
    }
    debug_assert_eq!(arc, base);

    let writhe = d.writhe();
    let longitude = Word::gen_pow(t(base), -writhe).mul(&conj);
    let k = d.crossings.iter().filter(|c| c.sign < 0).count();
    let negatives_on_base = d.crossings.iter().all(|c| c.sign > 0 || c.over == base);

    let presentation = Presentation::new(
        alphabet,
        relators,
        Some(Peripheral { meridian: Word::generator(t(base)), longitude }),
        Provenance::Wirtinger { diagram: d.clone() },
    )?;
    let data = OverarcData { p: n, k, writhe, negatives_on_base, base, walk, arc_conjugators };
    Ok((presentation, data))
}

#[cfg(test)]
mod tests {
    use super::*;

    pub(crate) fn trefoil() -> Diagram {
        serde_json::from_str(
            r#"{"crossings":[
                {"over":2,"in":0,"out":1,"sign":1},
                {"over":0,"in":1,"out":2,"sign":1},
                {"over":1,"in":2,"out":0,"sign":1}],
              "traversal":[0,1,2],"base_overarc":0}"#,
        )
        .unwrap()
    }

    #[test]
    fn trefoil_presentation() {
        let (p, data) = wirtinger(&trefoil()).unwrap();
        assert_eq!(p.generator_count(), 3);
        assert_eq!(p.relators().len(), 3);
        assert_eq!(data.writhe, 3);
        assert_eq!((data.p, data.k), (3, 0));
        assert!(data.negatives_on_base);
        assert_eq!(p.format(&p.relators()[0]), "t2 t0 t2^-1 t1^-1");
        // walk from arc 0: under t2 (to arc 1), under t0 (to arc 2), under t1 (back to 0)
        assert_eq!(p.format(p.longitude().unwrap()), "t0^-3 t1 t0 t2");
        let l = p.longitude().unwrap();
        assert_eq!((0..3).map(|g| l.exponent_sum(Gen(g))).sum::<i64>(), 0);
        assert_eq!(p.format(&data.arc_conjugators[2]), "t0 t2");
    }

    #[test]
    fn longitude_is_null_homologous() {
        let mut d = trefoil();
        d.crossings[1].sign = -1;
        let (p, data) = wirtinger(&d).unwrap();
        let total: i64 = p.longitude().unwrap().syllables().iter().map(|s| s.1).sum();
        assert_eq!(total, 0);
        assert_eq!(data.k, 1);
        assert!(data.negatives_on_base);
        d.crossings[1].sign = 1;
        d.crossings[2].sign = -1;
        assert!(!wirtinger(&d).unwrap().1.negatives_on_base);
    }

    #[test]
    fn one_crossing_kink_is_accepted() {
        let d = Diagram {
            crossings: vec![Crossing { over: 0, in_arc: 0, out_arc: 0, sign: 1 }],
            traversal: vec![0],
            base_overarc: 0,
        };
        let (p, data) = wirtinger(&d).unwrap();
        assert!(p.relators().is_empty());
        assert_eq!(data.p, 1);
        assert_eq!(p.format(p.longitude().unwrap()), "1");
    }

    #[test]
    fn malformed_diagrams() {
        let mut d = trefoil();
        d.crossings[0].sign = 0;
        assert!(wirtinger(&d).is_err());
        let mut d = trefoil();
        d.crossings[0].out_arc = 2;
        assert!(wirtinger(&d).is_err());
        let mut d = trefoil();
        d.traversal = vec![0, 2, 1];
        assert!(wirtinger(&d).is_err());
        let mut d = trefoil();
        d.base_overarc = 3;
        assert!(wirtinger(&d).is_err());
        let mut d = trefoil();
        d.crossings[2].over = 7;
        assert!(wirtinger(&d).is_err());
        let empty = Diagram { crossings: vec![], traversal: vec![], base_overarc: 0 };
        assert!(wirtinger(&empty).is_err());
    }
}
