//! Brute-force search for homomorphisms onto permutation groups of small degree.

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::presentation::Presentation;
use crate::word::{Letter, Word};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuotientSearch {
    pub degree: usize,
    /// Degrees up to this bound are searched exhaustively.
    pub exhaustive_up_to: usize,
    /// Random generator tuples tried above the exhaustive bound.
    pub samples: usize,
    pub seed: u64,
    /// Stop collecting after this many homomorphisms.
    pub max_results: usize,
}

impl QuotientSearch {
    pub fn new(degree: usize) -> Self {
        QuotientSearch { degree, exhaustive_up_to: 5, samples: 200_000, seed: 0x5eed, max_results: 10_000 }
    }
}

/// Generator images, as permutations of `0..degree` acting on the right.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Homomorphism {
    pub images: Vec<Vec<usize>>,
}

impl Homomorphism {
    pub fn degree(&self) -> usize {
        self.images.first().map_or(0, Vec::len)
    }

    fn inverses(&self) -> Vec<Vec<usize>> {
        self.images.iter().map(|p| invert(p)).collect()
    }

    /// Image of `w`, where `perm[i]` is `i` moved by the letters left to right.
    pub fn eval(&self, w: &Word) -> Vec<usize> {
        let inv = self.inverses();
        (0..self.degree()).map(|i| trace(&self.images, &inv, w, i)).collect()
    }

    pub fn kills(&self, w: &Word) -> bool {
        let inv = self.inverses();
        (0..self.degree()).all(|i| trace(&self.images, &inv, w, i) == i)
    }

    /// Checks shapes and that every relator maps to the identity.
    pub fn is_valid_for(&self, p: &Presentation) -> bool {
        let d = self.degree();
        self.images.len() == p.generator_count()
            && self.images.iter().all(|perm| is_permutation(perm, d))
            && p.relators().iter().all(|r| self.kills(r))
    }
}

fn is_permutation(p: &[usize], d: usize) -> bool {
    let mut seen = vec![false; d];
    p.len() == d && p.iter().all(|&x| x < d && !std::mem::replace(&mut seen[x], true))
}

fn invert(p: &[usize]) -> Vec<usize> {
    let mut inv = vec![0; p.len()];
    for (i, &j) in p.iter().enumerate() {
        inv[j] = i;
    }
    inv
}

fn step(images: &[Vec<usize>], inverses: &[Vec<usize>], l: Letter, i: usize) -> usize {
    if l.inverse {
        inverses[l.gen.index()][i]
    } else {
        images[l.gen.index()][i]
    }
}

fn trace(images: &[Vec<usize>], inverses: &[Vec<usize>], w: &Word, i: usize) -> usize {
    w.letters().fold(i, |cur, l| step(images, inverses, l, cur))
}

fn satisfies(images: &[Vec<usize>], relators: &[Vec<Letter>]) -> bool {
    let inverses: Vec<Vec<usize>> = images.iter().map(|p| invert(p)).collect();
    let d = images.first().map_or(0, Vec::len);
    relators
        .iter()
        .all(|r| (0..d).all(|i| r.iter().fold(i, |cur, &l| step(images, &inverses, l, cur)) == i))
}

fn all_permutations(d: usize) -> Vec<Vec<usize>> {
    fn extend(prefix: &mut Vec<usize>, used: &mut [bool], out: &mut Vec<Vec<usize>>) {
        if prefix.len() == used.len() {
            out.push(prefix.clone());
            return;
        }
        for x in 0..used.len() {
            if !used[x] {
                used[x] = true;
                prefix.push(x);
                extend(prefix, used, out);
                prefix.pop();
                used[x] = false;
            }
        }
    }
    let mut out = Vec::new();
    extend(&mut Vec::with_capacity(d), &mut vec![false; d], &mut out);
    out
}

fn partitions(n: usize, max: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for first in (1..=n.min(max)).rev() {
        for mut rest in partitions(n - first, first) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

/// One permutation per cycle type.
fn class_representatives(d: usize) -> Vec<Vec<usize>> {
    partitions(d, d)
        .into_iter()
        .map(|shape| {
            let mut p = vec![0; d];
            let mut start = 0;
            for len in shape {
                for k in 0..len {
                    p[start + k] = start + (k + 1) % len;
                }
                start += len;
            }
            p
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct QuotientReport {
    pub degree: usize,
    pub exhaustive: bool,
    /// Seed of the sampler; absent for exhaustive searches.
    pub seed: Option<u64>,
    pub tried: u64,
    pub homomorphisms: Vec<Homomorphism>,
}

/// Homomorphisms to `S_degree`. Exhaustive searches fix the first generator's
/// image up to conjugacy; larger degrees sample generator tuples from a seeded
/// generator. Results are in a deterministic order.
pub fn finite_quotient_search(p: &Presentation, opts: &QuotientSearch) -> QuotientReport {
    let d = opts.degree;
    let g = p.generator_count();
    let relators: Vec<Vec<Letter>> = p.relators().iter().map(|r| r.letters().collect()).collect();
    let trivial = Homomorphism { images: vec![(0..d).collect(); g] };
    if g == 0 || d <= 1 {
        let homomorphisms = if satisfies(&trivial.images, &relators) { vec![trivial] } else { vec![] };
        return QuotientReport { degree: d, exhaustive: true, seed: None, tried: 1, homomorphisms };
    }
    if d <= opts.exhaustive_up_to {
        let perms = all_permutations(d);
        let reps = class_representatives(d);
        let chunks: Vec<(usize, usize)> = if g == 1 {
            (0..reps.len()).map(|r| (r, 0)).collect()
        } else {
            (0..reps.len()).flat_map(|r| (0..perms.len()).map(move |s| (r, s))).collect()
        };
        let tail_count = perms.len().pow(g.saturating_sub(2) as u32);
        let found: Vec<Vec<Homomorphism>> = chunks
            .par_iter()
            .map(|&(r, s)| {
                let mut out = Vec::new();
                let mut images = vec![reps[r].clone()];
                if g >= 2 {
                    images.push(perms[s].clone());
                }
                for mut t in 0..tail_count {
                    images.truncate(2.min(g));
                    for _ in 2..g {
                        images.push(perms[t % perms.len()].clone());
                        t /= perms.len();
                    }
                    if satisfies(&images, &relators) {
                        out.push(Homomorphism { images: images.clone() });
                    }
                }
                out
            })
            .collect();
        let tried = (chunks.len() * tail_count) as u64;
        let homomorphisms = found.into_iter().flatten().take(opts.max_results).collect();
        return QuotientReport { degree: d, exhaustive: true, seed: None, tried, homomorphisms };
    }
    const CHUNK: usize = 4096;
    let chunk_count = opts.samples.div_ceil(CHUNK);
    let found: Vec<Vec<Homomorphism>> = (0..chunk_count)
        .into_par_iter()
        .map(|chunk| {
            let mut rng = ChaCha8Rng::seed_from_u64(opts.seed.wrapping_add(chunk as u64));
            let count = CHUNK.min(opts.samples - chunk * CHUNK);
            let mut out = Vec::new();
            let mut base: Vec<usize> = (0..d).collect();
            for _ in 0..count {
                let images: Vec<Vec<usize>> = (0..g)
                    .map(|_| {
                        base.shuffle(&mut rng);
                        base.clone()
                    })
                    .collect();
                if satisfies(&images, &relators) {
                    out.push(Homomorphism { images });
                }
            }
            out
        })
        .collect();
    let mut homomorphisms = Vec::new();
    if satisfies(&trivial.images, &relators) {
        homomorphisms.push(trivial);
    }
    homomorphisms.extend(found.into_iter().flatten().filter(|h| h.images.iter().any(|p| p.iter().enumerate().any(|(i, &j)| i != j))));
    homomorphisms.truncate(opts.max_results);
    QuotientReport { degree: d, exhaustive: false, seed: Some(opts.seed), tried: opts.samples as u64, homomorphisms }
}
