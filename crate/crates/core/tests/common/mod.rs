//! Shared corpus and brute-force oracles for the integration tests.
#![allow(dead_code)]

use std::collections::BTreeMap;

use affine_index::generate::{braid_closure, random_braid_word, random_code_seeded, CodeShape};
use affine_index::{serialize, LaurentPoly, LinkCode};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Random knots with 1..=20 crossings.
pub fn knot_corpus(count: u64) -> Vec<LinkCode> {
    (0..count).map(|seed| random_code_seeded(CodeShape::knot((seed % 20 + 1) as usize), seed)).collect()
}

/// Random bar-free links with 1..=3 components and at most 12 crossings.
pub fn link_corpus(count: u64) -> Vec<LinkCode> {
    (0..count)
        .map(|seed| {
            let shape = CodeShape { crossings: (seed % 12 + 1) as usize, components: (seed % 3 + 1) as usize, bars: 0 };
            random_code_seeded(shape, 10_000 + seed)
        })
        .collect()
}

/// Closures of random braids on 2..=4 strands.
pub fn braid_corpus(count: u64) -> Vec<LinkCode> {
    let mut rng = ChaCha8Rng::seed_from_u64(77);
    (0..count)
        .map(|k| {
            let strands = (k % 3 + 2) as usize;
            let word = random_braid_word(strands, (k % 10 + 1) as usize, &mut rng);
            braid_closure(&word, strands)
        })
        .collect()
}

/// Random twisted codes: at most 15 crossings, 3 components and 6 bars.
pub fn twisted_corpus(count: u64) -> Vec<LinkCode> {
    (0..count)
        .map(|seed| {
            let shape = CodeShape {
                crossings: (seed % 15 + 1) as usize,
                components: (seed % 3 + 1) as usize,
                bars: (seed % 7) as usize,
            };
            random_code_seeded(shape, 20_000 + seed)
        })
        .collect()
}

/// A passage read back from the serialized text.
#[derive(Debug, Clone, Copy)]
pub struct RawPassage {
    pub over: bool,
    pub id: u32,
    pub sign: i64,
}

/// Components of the serialized code; bars and cuts dropped.
pub fn raw_components(code: &LinkCode) -> Vec<Vec<RawPassage>> {
    serialize(code)
        .split(';')
        .map(|comp| {
            comp.split_whitespace()
                .filter(|tok| tok.starts_with('O') || tok.starts_with('U'))
                .map(|tok| {
                    let sign = if tok.ends_with('+') { 1 } else { -1 };
                    RawPassage { over: tok.starts_with('O'), id: tok[1..tok.len() - 1].parse().unwrap(), sign }
                })
                .collect()
        })
        .collect()
}

fn flat(p: &RawPassage) -> i64 {
    if p.over {
        -p.sign
    } else {
        p.sign
    }
}

/// `(sign, ind^O, ind^U, component)` of every self-crossing, from the text alone.
pub fn oracle_indices(code: &LinkCode) -> BTreeMap<u32, (i64, i64, i64, usize)> {
    let mut out = BTreeMap::new();
    for (ci, comp) in raw_components(code).iter().enumerate() {
        let n = comp.len();
        let mut pos: BTreeMap<u32, (usize, usize)> = BTreeMap::new();
        for (k, p) in comp.iter().enumerate() {
            let e = pos.entry(p.id).or_insert((usize::MAX, usize::MAX));
            if p.over {
                e.0 = k;
            } else {
                e.1 = k;
            }
        }
        for (&id, &(o, u)) in &pos {
            if o == usize::MAX || u == usize::MAX {
                continue;
            }
            let between = |a: usize, b: usize| -> i64 {
                let mut k = (a + 1) % n;
                let mut sum = 0;
                while k != b {
                    sum += flat(&comp[k]);
                    k = (k + 1) % n;
                }
                sum
            };
            out.insert(id, (comp[o].sign, between(o, u), between(u, o), ci));
        }
    }
    out
}

/// Polynomials as plain term maps `(e_s, e_t) -> coefficient`.
pub type Terms = BTreeMap<(i32, i32), i64>;

pub fn add(terms: &mut Terms, e: (i32, i32), c: i64) {
    *terms.entry(e).or_insert(0) += c;
    if terms[&e] == 0 {
        terms.remove(&e);
    }
}

pub fn terms_of(p: &LaurentPoly) -> Terms {
    p.terms().collect()
}

/// The five link invariants computed straight from their defining sums.
pub struct OracleInvariants {
    pub jo: BTreeMap<i64, i64>,
    pub ju: BTreeMap<i64, i64>,
    pub po: Terms,
    pub pu: Terms,
    pub pou: Terms,
}

pub fn oracle_invariants(code: &LinkCode) -> OracleInvariants {
    let mut r = OracleInvariants { jo: BTreeMap::new(), ju: BTreeMap::new(), po: Terms::new(), pu: Terms::new(), pou: Terms::new() };
    for (sgn, o, u, _) in oracle_indices(code).into_values() {
        if u != 0 {
            *r.jo.entry(o).or_insert(0) += sgn;
            add(&mut r.po, (0, o as i32), sgn);
            add(&mut r.po, (0, 0), -sgn);
        }
        if o != 0 {
            *r.ju.entry(u).or_insert(0) += sgn;
            add(&mut r.pu, (0, u as i32), sgn);
            add(&mut r.pu, (0, 0), -sgn);
        }
        for (e, c) in [((o as i32, u as i32), 1), ((o as i32, 0), -1), ((0, u as i32), -1), ((0, 0), 1)] {
            add(&mut r.pou, e, sgn * c);
        }
    }
    // n-writhes are only defined for n != 0.
    r.jo.retain(|&n, v| n != 0 && *v != 0);
    r.ju.retain(|&n, v| n != 0 && *v != 0);
    r
}
