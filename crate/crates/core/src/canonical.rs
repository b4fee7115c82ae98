//! Canonical form of a code up to component order, rotation and relabeling.

use std::collections::{BTreeMap, BTreeSet};

use crate::codec::serialize;
use crate::gauss::{CodeError, CrossingId, CutDir, LinkCode, Passage, Role, Sign, Token};

/// Largest number of components [`canonical_form`] accepts.
pub const MAX_COMPONENTS: usize = 6;

/// Sort key of one token after relabeling: passages before decorations, then
/// role, crossing id and sign.
type TokenKey = (u8, CrossingId, u8);

fn token_key(t: &Token, new_id: CrossingId, sign: Sign) -> TokenKey {
    let sign = match sign {
        Sign::Pos => 0,
        Sign::Neg => 1,
    };
    match t {
        Token::Passage(Passage { role: Role::Over, .. }) => (0, new_id, sign),
        Token::Passage(Passage { role: Role::Under, .. }) => (1, new_id, sign),
        Token::Bar => (2, 0, 0),
        Token::Cut(CutDir::Along) => (3, 0, 0),
        Token::Cut(CutDir::Against) => (4, 0, 0),
    }
}

#[derive(Clone, PartialEq, Eq, PartialOrd, Ord)]
struct State {
    used: u32,
    relabel: BTreeMap<CrossingId, CrossingId>,
    order: Vec<(usize, usize)>,
}

/// Key of `comp` read from `start`, extending `relabel` by first occurrence.
fn rotation_key(
    code: &LinkCode,
    comp: &[Token],
    start: usize,
    relabel: &mut BTreeMap<CrossingId, CrossingId>,
) -> Vec<TokenKey> {
    let n = comp.len();
    (0..n)
        .map(|k| {
            let t = &comp[(start + k) % n];
            match t.passage() {
                Some(p) => {
                    let next = relabel.len() as CrossingId + 1;
                    let id = *relabel.entry(p.crossing).or_insert(next);
                    token_key(t, id, code.sign(p.crossing))
                }
                None => token_key(t, 0, Sign::Pos),
            }
        })
        .collect()
}

/// The representative chosen by [`canonical_form`].
pub fn canonical_code(code: &LinkCode) -> Result<LinkCode, CodeError> {
    let m = code.num_components();
    if m > MAX_COMPONENTS {
        return Err(CodeError::TooManyComponents { max: MAX_COMPONENTS, got: m });
    }
    // Keys compare component by component, so the minimum is found level by
    // level, keeping every tied partial choice.
    let mut states = vec![State { used: 0, relabel: BTreeMap::new(), order: vec![] }];
    for _ in 0..m {
        let mut best: Option<Vec<TokenKey>> = None;
        let mut next: BTreeSet<State> = BTreeSet::new();
        for st in &states {
            for ci in (0..m).filter(|ci| st.used & (1 << ci) == 0) {
                let comp = code.component(ci);
                for start in 0..comp.len().max(1) {
                    let mut relabel = st.relabel.clone();
                    let key = rotation_key(code, comp, start, &mut relabel);
                    let better = match &best {
                        None => true,
                        Some(b) => key < *b,
                    };
                    if better {
                        best = Some(key.clone());
                        next.clear();
                    }
                    if best.as_ref() == Some(&key) {
                        let mut order = st.order.clone();
                        order.push((ci, start));
                        next.insert(State { used: st.used | (1 << ci), relabel, order });
                    }
                }
            }
        }
        // States with equal (used, relabel) lead to identical futures.
        let mut seen = BTreeSet::new();
        states = next.into_iter().filter(|s| seen.insert((s.used, s.relabel.clone()))).collect();
    }
    let st = &states[0];
    let components = st
        .order
        .iter()
        .map(|&(ci, start)| {
            let comp = code.component(ci);
            let n = comp.len();
            (0..n)
                .map(|k| match comp[(start + k) % n] {
                    Token::Passage(p) => Token::Passage(Passage { role: p.role, crossing: st.relabel[&p.crossing] }),
                    t => t,
                })
                .collect()
        })
        .collect();
    let signs = code.signs().iter().map(|(c, &s)| (st.relabel[c], s)).collect();
    Ok(LinkCode::from_parts(components, signs))
}

/// Minimal serialization over all component orderings, cyclic rotations and
/// relabelings by first occurrence. Two codes get the same string exactly
/// when they are isomorphic as decorated Gauss codes.
pub fn canonical_form(code: &LinkCode) -> Result<String, CodeError> {
    canonical_code(code).map(|c| serialize(&c))
}
