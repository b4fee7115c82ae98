//! Seeded generators of random codes and braid closures.

use std::collections::BTreeMap;

use rand::prelude::*;
use rand_chacha::ChaCha8Rng;

use crate::gauss::{CrossingId, LinkCode, Sign, Token};

/// Shape of a random code.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CodeShape {
    pub crossings: usize,
    pub components: usize,
    pub bars: usize,
}

impl CodeShape {
    pub fn knot(crossings: usize) -> Self {
        CodeShape { crossings, components: 1, bars: 0 }
    }
}

/// A uniformly shuffled Gauss code with random signs: the `2n` passages are
/// shuffled, split into `components` nonempty runs when possible, and `bars`
/// bars are dropped at random positions.
pub fn random_code(shape: CodeShape, rng: &mut impl Rng) -> LinkCode {
    let n = shape.crossings as CrossingId;
    let k = shape.components.max(1);
    let mut passages: Vec<Token> = (1..=n).flat_map(|c| [Token::over(c), Token::under(c)]).collect();
    passages.shuffle(rng);

    let len = passages.len();
    let mut cuts: Vec<usize> = if len >= k {
        rand::seq::index::sample(rng, len.saturating_sub(1).max(1), k - 1)
            .into_iter()
            .map(|i| i + 1)
            .collect()
    } else {
        (0..k - 1).map(|_| rng.gen_range(0..=len)).collect()
    };
    cuts.sort_unstable();
    let mut components = Vec::with_capacity(k);
    let mut from = 0;
    for &cut in cuts.iter().chain(std::iter::once(&len)) {
        components.push(passages[from..cut].to_vec());
        from = cut;
    }
    for _ in 0..shape.bars {
        let ci = rng.gen_range(0..k);
        let at = rng.gen_range(0..=components[ci].len());
        components[ci].insert(at, Token::Bar);
    }
    let signs: BTreeMap<CrossingId, Sign> =
        (1..=n).map(|c| (c, if rng.gen_bool(0.5) { Sign::Pos } else { Sign::Neg })).collect();
    LinkCode::from_parts(components, signs)
}

pub fn random_code_seeded(shape: CodeShape, seed: u64) -> LinkCode {
    random_code(shape, &mut ChaCha8Rng::seed_from_u64(seed))
}

/// Gauss code of the closure of a braid on `strands` strands.
///
/// Letter `i > 0` is the generator crossing positions `i` and `i + 1` with
/// the left strand over and sign `+`; `-i` is its inverse, right strand over
/// and sign `-`. Letter `k` (0-based) becomes crossing `k + 1`. Components
/// follow the cycles of the braid permutation, in order of their smallest
/// starting position.
///
/// # Panics
/// If a letter is 0 or refers to a position outside `1..strands`.
pub fn braid_closure(word: &[i32], strands: usize) -> LinkCode {
    let mut at_position: Vec<usize> = (0..strands).collect();
    let mut passages: Vec<Vec<Token>> = vec![Vec::new(); strands];
    let mut signs = BTreeMap::new();
    for (k, &letter) in word.iter().enumerate() {
        let i = letter.unsigned_abs() as usize;
        assert!(letter != 0 && i < strands, "braid letter {letter} out of range");
        let c = k as CrossingId + 1;
        let (left, right) = (at_position[i - 1], at_position[i]);
        let (over, under, sign) = if letter > 0 { (left, right, Sign::Pos) } else { (right, left, Sign::Neg) };
        passages[over].push(Token::over(c));
        passages[under].push(Token::under(c));
        signs.insert(c, sign);
        at_position.swap(i - 1, i);
    }
    // Strand starting at position p ends at the position where it now sits.
    let mut end = vec![0; strands];
    for (pos, &strand) in at_position.iter().enumerate() {
        end[strand] = pos;
    }
    let mut seen = vec![false; strands];
    let mut components = Vec::new();
    for start in 0..strands {
        if seen[start] {
            continue;
        }
        let mut comp = Vec::new();
        let mut s = start;
        while !seen[s] {
            seen[s] = true;
            comp.extend_from_slice(&passages[s]);
            s = end[s];
        }
        components.push(comp);
    }
    LinkCode::from_parts(components, signs)
}

/// A random braid word of `length` letters on `strands` strands.
pub fn random_braid_word(strands: usize, length: usize, rng: &mut impl Rng) -> Vec<i32> {
    assert!(strands >= 2, "a braid word needs at least two strands");
    (0..length)
        .map(|_| {
            let i = rng.gen_range(1..strands) as i32;
            if rng.gen_bool(0.5) {
                i
            } else {
                -i
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::affine::{affine_indices, link_invariants};
    use crate::codec::serialize;

    #[test]
    fn random_code_has_requested_shape() {
        for seed in 0..50 {
            let shape = CodeShape { crossings: 6, components: 3, bars: 4 };
            let code = random_code_seeded(shape, seed);
            assert_eq!(code.num_crossings(), 6);
            assert_eq!(code.num_components(), 3);
            assert_eq!(code.bar_count(), 4);
            assert!(code.components().iter().all(|c| !c.is_empty()));
        }
        let empty = random_code_seeded(CodeShape { crossings: 0, components: 2, bars: 0 }, 1);
        assert_eq!(empty.num_components(), 2);
    }

    #[test]
    fn trefoil_closure() {
        let t = braid_closure(&[1, 1, 1], 2);
        assert_eq!(serialize(&t), "O1+ U2+ O3+ U1+ O2+ U3+");
    }

    #[test]
    fn closures_have_zero_indices() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for _ in 0..100 {
            let word = random_braid_word(4, 12, &mut rng);
            let code = braid_closure(&word, 4);
            assert!(affine_indices(&code).values().all(|q| q.o == 0 && q.u == 0));
            assert_eq!(link_invariants(&code).unwrap(), Default::default());
        }
    }

    #[test]
    fn hopf_link_has_two_components() {
        let h = braid_closure(&[1, 1], 2);
        assert_eq!(serialize(&h), "O1+ U2+ ; U1+ O2+");
    }
}
