//! Bounded Todd–Coxeter coset enumeration (HLT with lookahead).

use serde::{Deserialize, Serialize};

use crate::presentation::Presentation;
use crate::word::Word;

const NONE: u32 = u32::MAX;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum CosetStatus {
    Complete,
    Overflow { cap: usize },
}

/// Result of an enumeration. Complete tables are renumbered so that the
/// subgroup coset is 0 and live cosets are `0..index`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CosetTable {
    status: CosetStatus,
    generators: usize,
    index: usize,
    /// Row-major, two columns per generator (`g`, then `g⁻¹`). Empty on overflow.
    table: Vec<u32>,
    /// Total coset definitions made, including ones later found coincident.
    defined: usize,
}

impl CosetTable {
    pub fn status(&self) -> CosetStatus {
        self.status
    }

    pub fn is_complete(&self) -> bool {
        self.status == CosetStatus::Complete
    }

    /// Number of cosets (live cosets at the moment of overflow otherwise).
    pub fn index(&self) -> usize {
        self.index
    }

    pub fn total_defined(&self) -> usize {
        self.defined
    }

    /// Coset reached from `coset` by right multiplication by generator `g`
    /// (or its inverse).
    pub fn action(&self, coset: usize, g: usize, inverse: bool) -> Option<usize> {
        if !self.is_complete() {
            return None;
        }
        let v = self.table[coset * 2 * self.generators + 2 * g + usize::from(inverse)];
        Some(v as usize)
    }
}

#[derive(Debug, thiserror::Error, Clone, PartialEq, Eq)]
#[error("coset table is incomplete (enumeration overflowed)")]
pub struct IncompleteTable;

/// The permutation of cosets induced by right multiplication by `w`:
/// `perm[c] = c · w`.
pub fn permutation_eval(t: &CosetTable, w: &Word) -> Result<Vec<usize>, IncompleteTable> {
    if !t.is_complete() {
        return Err(IncompleteTable);
    }
    let cols: Vec<usize> = w.letters().map(|l| 2 * l.gen.index() + usize::from(l.inverse)).collect();
    let width = 2 * t.generators;
    Ok((0..t.index)
        .map(|c| cols.iter().fold(c, |cur, &col| t.table[cur * width + col] as usize))
        .collect())
}

struct Enumerator {
    width: usize,
    cap: usize,
    table: Vec<u32>,
    /// Union-find parent; `parent[c] == c` for live cosets.
    parent: Vec<u32>,
    next: usize,
    live: usize,
    defined: usize,
}

#[derive(Debug)]
struct OutOfSpace;

impl Enumerator {
    fn new(generators: usize, cap: usize) -> Self {
        let width = 2 * generators;
        let mut e = Enumerator {
            width,
            cap,
            table: vec![NONE; width],
            parent: vec![0],
            next: 1,
            live: 1,
            defined: 1,
        };
        e.table.reserve(width * cap.min(1 << 16));
        e
    }

    fn get(&self, c: usize, col: usize) -> u32 {
        self.table[c * self.width + col]
    }

    fn set(&mut self, c: usize, col: usize, v: u32) {
        self.table[c * self.width + col] = v;
    }

    fn is_live(&self, c: usize) -> bool {
        self.parent[c] as usize == c
    }

    fn define(&mut self, c: usize, col: usize) -> Result<usize, OutOfSpace> {
        if self.next >= self.cap {
            return Err(OutOfSpace);
        }
        let n = self.next;
        self.next += 1;
        self.live += 1;
        self.defined += 1;
        self.table.extend(std::iter::repeat_n(NONE, self.width));
        self.parent.push(n as u32);
        self.set(c, col, n as u32);
        self.set(n, col ^ 1, c as u32);
        Ok(n)
    }

    fn rep(&mut self, c: usize) -> usize {
        let mut r = c;
        while self.parent[r] as usize != r {
            r = self.parent[r] as usize;
        }
        let mut c = c;
        while self.parent[c] as usize != r {
            let up = self.parent[c] as usize;
            self.parent[c] = r as u32;
            c = up;
        }
        r
    }

    fn merge(&mut self, a: usize, b: usize, queue: &mut Vec<usize>) {
        let (a, b) = (self.rep(a), self.rep(b));
        if a == b {
            return;
        }
        let (keep, kill) = if a < b { (a, b) } else { (b, a) };
        self.parent[kill] = keep as u32;
        self.live -= 1;
        queue.push(kill);
    }

    fn coincidence(&mut self, a: usize, b: usize) {
        let mut queue = Vec::new();
        self.merge(a, b, &mut queue);
        let mut i = 0;
        while i < queue.len() {
            let e = queue[i];
            i += 1;
            for col in 0..self.width {
                let f = self.get(e, col);
                if f == NONE {
                    continue;
                }
                let f = f as usize;
                self.set(f, col ^ 1, NONE);
                let e1 = self.rep(e);
                let f1 = self.rep(f);
                let there = self.get(e1, col);
                if there != NONE {
                    self.merge(f1, there as usize, &mut queue);
                } else {
                    let back = self.get(f1, col ^ 1);
                    if back != NONE {
                        self.merge(e1, back as usize, &mut queue);
                    } else {
                        self.set(e1, col, f1 as u32);
                        self.set(f1, col ^ 1, e1 as u32);
                    }
                }
            }
        }
    }

    /// Traces `w` from `c` forwards and backwards. A single gap becomes a
    /// deduction, a closed cycle with mismatched ends a coincidence; with
    /// `fill`, larger gaps are bridged by defining new cosets.
    fn scan(&mut self, c: usize, w: &[usize], fill: bool) -> Result<(), OutOfSpace> {
        let n = w.len() as isize;
        if n == 0 {
            return Ok(());
        }
        let (mut f, mut i) = (c, 0isize);
        let (mut b, mut j) = (c, n - 1);
        loop {
            while i <= j {
                let v = self.get(f, w[i as usize]);
                if v == NONE {
                    break;
                }
                f = v as usize;
                i += 1;
            }
            if i > j {
                if f != b {
                    self.coincidence(f, b);
                }
                return Ok(());
            }
            while j >= i {
                let v = self.get(b, w[j as usize] ^ 1);
                if v == NONE {
                    break;
                }
                b = v as usize;
                j -= 1;
            }
            if j < i {
                self.coincidence(f, b);
                return Ok(());
            }
            if i == j {
                let col = w[i as usize];
                self.set(f, col, b as u32);
                self.set(b, col ^ 1, f as u32);
                return Ok(());
            }
            if !fill {
                return Ok(());
            }
            self.define(f, w[i as usize])?;
        }
    }

    fn lookahead(&mut self, relators: &[Vec<usize>]) {
        let mut c = 0;
        while c < self.next {
            if self.is_live(c) {
                for r in relators {
                    if !self.is_live(c) {
                        break;
                    }
                    self.scan(c, r, false).expect("lookahead never defines");
                }
            }
            c += 1;
        }
    }

    /// Renumbers live cosets in order; returns the old-to-new map.
    fn compact(&mut self) -> Vec<u32> {
        let mut map = vec![NONE; self.next];
        let mut n = 0u32;
        for (c, slot) in map.iter_mut().enumerate() {
            if self.is_live(c) {
                *slot = n;
                n += 1;
            }
        }
        let mut table = Vec::with_capacity(n as usize * self.width);
        for c in 0..self.next {
            if map[c] == NONE {
                continue;
            }
            for col in 0..self.width {
                let v = self.get(c, col);
                table.push(if v == NONE { NONE } else { map[self.rep(v as usize)] });
            }
        }
        self.table = table;
        self.parent = (0..n).collect();
        self.next = n as usize;
        self.live = n as usize;
        map
    }
}

/// Enumerates cosets of the subgroup generated by `subgroup` using at most
/// `cap` live cosets.
pub fn todd_coxeter(p: &Presentation, subgroup: &[Word], cap: usize) -> CosetTable {
    let cap = cap.max(1);
    let gens = p.generator_count();
    let to_cols = |w: &Word| -> Vec<usize> { w.letters().map(|l| 2 * l.gen.index() + usize::from(l.inverse)).collect() };
    let relators: Vec<Vec<usize>> = p.relators().iter().map(to_cols).collect();
    let subgroup: Vec<Vec<usize>> = subgroup.iter().map(to_cols).collect();
    let mut e = Enumerator::new(gens, cap);
    let overflow = |e: &Enumerator| CosetTable {
        status: CosetStatus::Overflow { cap },
        generators: gens,
        index: e.live,
        table: Vec::new(),
        defined: e.defined,
    };

    let mut pending_subgroup = 0;
    let mut c = 0usize;
    loop {
        let pass: Result<(), OutOfSpace> = (|| {
            while pending_subgroup < subgroup.len() {
                let root = e.rep(0);
                e.scan(root, &subgroup[pending_subgroup], true)?;
                pending_subgroup += 1;
            }
            while c < e.next {
                if e.is_live(c) {
                    for r in &relators {
                        if !e.is_live(c) {
                            break;
                        }
                        e.scan(c, r, true)?;
                    }
                    for col in 0..e.width {
                        if e.is_live(c) && e.get(c, col) == NONE {
                            e.define(c, col)?;
                        }
                    }
                }
                c += 1;
            }
            Ok(())
        })();
        match pass {
            Ok(()) => {
                let gap = (0..e.next).find(|&k| e.is_live(k) && (0..e.width).any(|col| e.get(k, col) == NONE));
                match gap {
                    Some(k) => c = k,
                    None => break,
                }
            }
            Err(OutOfSpace) => {
                e.lookahead(&relators);
                let map = e.compact();
                if e.next >= cap {
                    return overflow(&e);
                }
                c = (c..map.len()).find_map(|old| (map[old] != NONE).then_some(map[old] as usize)).unwrap_or(e.next);
            }
        }
    }
    e.compact();
    debug_assert!(e.table.iter().all(|&v| v != NONE));
    CosetTable { status: CosetStatus::Complete, generators: gens, index: e.next, table: e.table, defined: e.defined }
}
