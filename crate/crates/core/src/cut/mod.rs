//! Alexander numberings, oriented cut systems and the cut-index invariants.
//!
//! A component is split into sub-arcs by its marked points (crossing passages
//! and cut points; bars do not split). A numbering assigns an integer, or a
//! residue mod `m`, to every sub-arc such that at each crossing `c`
//!
//! ```text
//! x(over-out) = x(under-in)  = a_c
//! x(over-in)  = x(under-out) = a_c + sgn(c)
//! ```
//!
//! and the value jumps by `+1` across a coherent cut point (`-1` across an
//! incoherent one) in the direction of travel.

mod offset_uf;

use std::collections::BTreeMap;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::affine::{n_writhes_knot, LinkInvariants, WritheTable};
use crate::gauss::{CodeError, CrossingId, CutDir, LinkCode, Role, Sign, Token};
use offset_uf::OffsetUnionFind;

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum CutError {
    #[error("not a cut system")]
    NotACutSystem { defect_gcd: u64 },
    #[error("code already carries cut points")]
    HasCuts,
    #[error("no adjacent coherent/incoherent pair at component {component}, position {index}")]
    NoCancellingPair { component: usize, index: usize },
    #[error("position {index} is out of range for component {component}")]
    OutOfRange { component: usize, index: usize },
    #[error(transparent)]
    Code(#[from] CodeError),
}

/// Sub-arc layout of a code: per component, the token indices of its marked points.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SubArcs {
    marked: Vec<Vec<usize>>,
    offsets: Vec<usize>,
    total: usize,
}

impl SubArcs {
    pub fn of(code: &LinkCode) -> Self {
        let mut marked = Vec::new();
        let mut offsets = Vec::new();
        let mut total = 0;
        for comp in code.components() {
            let m: Vec<usize> = comp
                .iter()
                .enumerate()
                .filter(|(_, t)| t.passage().is_some() || t.cut().is_some())
                .map(|(k, _)| k)
                .collect();
            offsets.push(total);
            total += m.len().max(1);
            marked.push(m);
        }
        SubArcs { marked, offsets, total }
    }

    pub fn len(&self) -> usize {
        self.total
    }

    pub fn is_empty(&self) -> bool {
        self.total == 0
    }

    /// Number of sub-arcs on component `i`.
    pub fn count(&self, i: usize) -> usize {
        self.marked[i].len().max(1)
    }

    /// Global index of sub-arc `k` of component `i`; sub-arc `k` starts just
    /// after the `k`-th marked point.
    pub fn index(&self, i: usize, k: usize) -> usize {
        self.offsets[i] + k
    }

    /// Token indices of the marked points of component `i`.
    pub fn marked(&self, i: usize) -> &[usize] {
        &self.marked[i]
    }

    /// Incoming and outgoing sub-arcs of the `k`-th marked point of component `i`.
    pub fn germs(&self, i: usize, k: usize) -> (usize, usize) {
        let n = self.count(i);
        (self.index(i, (k + n - 1) % n), self.index(i, k))
    }
}

fn constraints(code: &LinkCode) -> (SubArcs, OffsetUnionFind) {
    let arcs = SubArcs::of(code);
    let mut uf = OffsetUnionFind::new(arcs.len());
    let mut germs: BTreeMap<CrossingId, [(usize, usize); 2]> = BTreeMap::new();
    for (i, comp) in code.components().iter().enumerate() {
        for (k, &pos) in arcs.marked(i).iter().enumerate() {
            let (gin, gout) = arcs.germs(i, k);
            match comp[pos] {
                Token::Cut(dir) => uf.relate(gin, gout, dir.jump()),
                Token::Passage(p) => {
                    let slot = match p.role {
                        Role::Over => 0,
                        Role::Under => 1,
                    };
                    germs.entry(p.crossing).or_insert([(0, 0); 2])[slot] = (gin, gout);
                }
                Token::Bar => unreachable!("bars are not marked points"),
            }
        }
    }
    for (c, [(over_in, over_out), (under_in, under_out)]) in germs {
        let s = code.sign(c).value();
        uf.relate(over_out, under_in, 0);
        uf.relate(over_out, over_in, s);
        uf.relate(under_in, under_out, s);
    }
    (arcs, uf)
}

/// gcd of all cycle defects of the numbering constraints; 0 iff an integral
/// numbering exists.
pub fn numbering_defect(code: &LinkCode) -> u64 {
    constraints(code).1.defect_gcd()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Numbering {
    /// 0 for integer numberings.
    pub modulus: u64,
    /// Values per component, indexed by sub-arc.
    pub values: Vec<Vec<i64>>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
#[error("no numbering: cycle defects have gcd {defect_gcd}")]
pub struct DefectReport {
    pub defect_gcd: u64,
}

/// Finds a numbering over the integers (`modulus == 0`) or mod `modulus`.
///
/// Each connected block of sub-arcs is shifted so that its minimum is 0.
pub fn solve_numbering(code: &LinkCode, modulus: u64) -> Result<Numbering, DefectReport> {
    let (arcs, mut uf) = constraints(code);
    let g = uf.defect_gcd();
    let solvable = if modulus == 0 { g == 0 } else { g % modulus == 0 };
    if !solvable {
        return Err(DefectReport { defect_gcd: g });
    }
    let raw: Vec<(usize, i64)> = (0..arcs.len()).map(|v| uf.find(v)).collect();
    let mut min_of_root: BTreeMap<usize, i64> = BTreeMap::new();
    for &(r, p) in &raw {
        let e = min_of_root.entry(r).or_insert(p);
        *e = (*e).min(p);
    }
    let value = |v: usize| {
        let (r, p) = raw[v];
        let x = p - min_of_root[&r];
        if modulus == 0 { x } else { x.rem_euclid(modulus as i64) }
    };
    let values = (0..code.num_components())
        .map(|i| (0..arcs.count(i)).map(|k| value(arcs.index(i, k))).collect())
        .collect();
    Ok(Numbering { modulus, values })
}

/// Checks every local rule of `numbering` directly against the code.
pub fn check_numbering(code: &LinkCode, numbering: &Numbering) -> bool {
    let arcs = SubArcs::of(code);
    if numbering.values.len() != code.num_components() {
        return false;
    }
    let m = numbering.modulus as i64;
    let eq = |a: i64, b: i64| if m == 0 { a == b } else { (a - b).rem_euclid(m) == 0 };
    let mut germ_values: BTreeMap<CrossingId, [(i64, i64); 2]> = BTreeMap::new();
    for (i, comp) in code.components().iter().enumerate() {
        let vals = &numbering.values[i];
        if vals.len() != arcs.count(i) {
            return false;
        }
        let n = vals.len();
        for (k, &pos) in arcs.marked(i).iter().enumerate() {
            let (vin, vout) = (vals[(k + n - 1) % n], vals[k]);
            match comp[pos] {
                Token::Cut(dir) => {
                    if !eq(vout, vin + dir.jump()) {
                        return false;
                    }
                }
                Token::Passage(p) => {
                    let slot = if p.role == Role::Over { 0 } else { 1 };
                    germ_values.entry(p.crossing).or_insert([(0, 0); 2])[slot] = (vin, vout);
                }
                Token::Bar => {}
            }
        }
    }
    germ_values.into_iter().all(|(c, [(oi, oo), (ui, uo)])| {
        let s = code.sign(c).value();
        eq(oo, ui) && eq(oi, oo + s) && eq(uo, ui + s)
    })
}

/// Places a cut point after every over passage (coherent iff the crossing is
/// positive) and before every under passage (coherent iff negative).
pub fn binary_cut_system(code: &LinkCode) -> Result<LinkCode, CutError> {
    if code.has_cuts() {
        return Err(CutError::HasCuts);
    }
    let cut_for = |c: CrossingId, coherent_when: Sign| {
        if code.sign(c) == coherent_when { Token::Cut(CutDir::Along) } else { Token::Cut(CutDir::Against) }
    };
    let components = code
        .components()
        .iter()
        .map(|comp| {
            let mut out = Vec::with_capacity(comp.len() * 2);
            for &t in comp {
                match t.passage() {
                    Some(p) if p.role == Role::Over => {
                        out.push(t);
                        out.push(cut_for(p.crossing, Sign::Pos));
                    }
                    Some(p) => {
                        out.push(cut_for(p.crossing, Sign::Neg));
                        out.push(t);
                    }
                    None => out.push(t),
                }
            }
            out
        })
        .collect();
    Ok(LinkCode::from_parts(components, code.signs().clone()))
}

/// A cut system built from prescribed crossing levels `a_c`.
///
/// Along each semi-arc the required jump `d` is realised by `|d|` cut points.
/// With an `rng`, a cancelling pair is added with probability 1/2 and the cut
/// block is placed at a random slot of the semi-arc; without one, cuts go
/// directly after the semi-arc's starting passage.
pub fn cut_system_with_levels(
    code: &LinkCode,
    levels: &BTreeMap<CrossingId, i64>,
    mut rng: Option<&mut ChaCha8Rng>,
) -> Result<LinkCode, CutError> {
    if code.has_cuts() {
        return Err(CutError::HasCuts);
    }
    let level = |c: CrossingId| levels.get(&c).copied().unwrap_or(0);
    // (in, out) germ values of a passage
    let germ = |role: Role, c: CrossingId| {
        let a = level(c);
        let s = code.sign(c).value();
        match role {
            Role::Over => (a + s, a),
            Role::Under => (a, a + s),
        }
    };
    let mut components = Vec::with_capacity(code.num_components());
    for comp in code.components() {
        let passages: Vec<usize> = comp.iter().enumerate().filter(|(_, t)| t.passage().is_some()).map(|(k, _)| k).collect();
        if passages.is_empty() {
            let mut out = comp.clone();
            if let Some(rng) = rng.as_deref_mut() {
                if rng.gen_bool(0.5) {
                    let slot = rng.gen_range(0..=out.len());
                    let first = if rng.gen_bool(0.5) { CutDir::Along } else { CutDir::Against };
                    out.splice(slot..slot, [Token::Cut(first), Token::Cut(first.flip())]);
                }
            }
            components.push(out);
            continue;
        }
        let n = comp.len();
        // insert_before[k]: cuts placed just before original token k (k == n: at the end)
        let mut insert_before: Vec<Vec<Token>> = vec![Vec::new(); n + 1];
        for (j, &start) in passages.iter().enumerate() {
            let end = passages[(j + 1) % passages.len()];
            let p0 = comp[start].passage().unwrap();
            let p1 = comp[end].passage().unwrap();
            let d = germ(p1.role, p1.crossing).0 - germ(p0.role, p0.crossing).1;
            let dir = if d > 0 { CutDir::Along } else { CutDir::Against };
            let mut cuts: Vec<Token> = (0..d.unsigned_abs()).map(|_| Token::Cut(dir)).collect();
            // number of decorations strictly inside the semi-arc
            let inner = (end + n - start - 1) % n;
            let mut offset = 0;
            if let Some(rng) = rng.as_deref_mut() {
                if rng.gen_bool(0.5) {
                    cuts.push(Token::Cut(CutDir::Along));
                    cuts.push(Token::Cut(CutDir::Against));
                    cuts.shuffle(rng);
                }
                offset = rng.gen_range(0..=inner);
            }
            // slot after the token `offset` steps past the starting passage
            let k = start + offset + 1;
            let slot = if k == n { n } else { k % n };
            insert_before[slot].extend(cuts);
        }
        let mut out = Vec::with_capacity(n);
        for (k, &t) in comp.iter().enumerate() {
            out.append(&mut insert_before[k]);
            out.push(t);
        }
        out.append(&mut insert_before[n]);
        components.push(out);
    }
    Ok(LinkCode::from_parts(components, code.signs().clone()))
}

/// A random cut system, deterministic per `(code, seed)`: levels `a_c` are drawn
/// uniformly from `[-3, 3]`.
pub fn random_cut_system(code: &LinkCode, seed: u64) -> Result<LinkCode, CutError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let levels: BTreeMap<CrossingId, i64> = code.crossings().map(|c| (c, rng.gen_range(-3..=3))).collect();
    cut_system_with_levels(code, &levels, Some(&mut rng))
}

/// Incoherent-minus-coherent cut counts on the over and under counting arcs.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct RhoPair {
    pub o: i64,
    pub u: i64,
}

fn cut_balance(tokens: &[Token]) -> i64 {
    tokens.iter().filter_map(Token::cut).map(|d| -d.jump()).sum()
}

pub fn rho(code: &LinkCode) -> Result<BTreeMap<CrossingId, RhoPair>, CutError> {
    let g = numbering_defect(code);
    if g != 0 {
        return Err(CutError::NotACutSystem { defect_gcd: g });
    }
    let mut out = BTreeMap::new();
    for c in code.self_crossings().iter() {
        let (arc_o, arc_u) = code.counting_arcs(c)?;
        out.insert(c, RhoPair { o: cut_balance(arc_o.tokens()), u: cut_balance(arc_u.tokens()) });
    }
    Ok(out)
}

/// Cut-writhes and affine cut-index polynomials: the link invariants evaluated
/// with `rho` in place of the affine indices.
pub fn cut_invariants(code: &LinkCode) -> Result<LinkInvariants, CutError> {
    let r = rho(code)?;
    Ok(LinkInvariants::from_indices(r.iter().map(|(&c, p)| (code.sign(c), p.o, p.u))))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CutMove {
    /// Insert an adjacent pair whose first cut has the given direction.
    Insert(CutDir),
    /// Delete the adjacent opposite pair starting at the position.
    Delete,
}

/// Oriented cut point move I at `(component, index)`.
pub fn cut_move_i(code: &LinkCode, component: usize, index: usize, mv: CutMove) -> Result<LinkCode, CutError> {
    let out_of_range = CutError::OutOfRange { component, index };
    let (mut comps, signs) = code.clone().into_parts();
    let comp = comps.get_mut(component).ok_or(out_of_range.clone())?;
    match mv {
        CutMove::Insert(first) => {
            if index > comp.len() {
                return Err(out_of_range);
            }
            comp.splice(index..index, [Token::Cut(first), Token::Cut(first.flip())]);
        }
        CutMove::Delete => {
            let n = comp.len();
            if index >= n || n < 2 {
                return Err(out_of_range);
            }
            let next = (index + 1) % n;
            match (comp[index].cut(), comp[next].cut()) {
                (Some(a), Some(b)) if a == b.flip() => {
                    let (hi, lo) = (index.max(next), index.min(next));
                    comp.remove(hi);
                    comp.remove(lo);
                }
                _ => return Err(CutError::NoCancellingPair { component, index }),
            }
        }
    }
    Ok(LinkCode::from_parts(comps, signs))
}

/// What the numbering of a cut-free knot diagram says about its n-writhes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NumberingImplications {
    pub defect_gcd: u64,
    pub integral: bool,
    pub writhes: WritheTable,
    /// Moduli `m >= 2` dividing the defect gcd that were checked.
    pub checked_moduli: Vec<u64>,
    /// `(m, n)` pairs with `J_n != 0` although `m` does not divide `n`.
    pub violations: Vec<(u64, i64)>,
}

impl NumberingImplications {
    pub fn holds(&self) -> bool {
        self.violations.is_empty() && (!self.integral || self.writhes.is_zero())
    }
}

pub fn numbering_implications(code: &LinkCode) -> Result<NumberingImplications, CutError> {
    if code.has_cuts() {
        return Err(CutError::HasCuts);
    }
    let writhes = n_writhes_knot(code)?;
    let g = numbering_defect(code);
    let integral = g == 0;
    let checked_moduli: Vec<u64> = if integral { vec![] } else { (2..=g).filter(|m| g.is_multiple_of(*m)).collect() };
    let mut violations = Vec::new();
    for &m in &checked_moduli {
        for (n, _) in writhes.entries() {
            if n.rem_euclid(m as i64) != 0 {
                violations.push((m, n));
            }
        }
    }
    Ok(NumberingImplications { defect_gcd: g, integral, writhes, checked_moduli, violations })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::affine::{affine_indices, link_invariants};
    use crate::codec::{parse, serialize};

    fn vt() -> LinkCode {
        parse("O1+ O2+ U1+ U2+").unwrap()
    }

    fn trefoil() -> LinkCode {
        parse("O1+ U2+ O3+ U1+ O2+ U3+").unwrap()
    }

    #[test]
    fn classical_trefoil_numbering_alternates() {
        let n = solve_numbering(&trefoil(), 0).unwrap();
        assert_eq!(n.values, vec![vec![0, 1, 0, 1, 0, 1]]);
        assert!(check_numbering(&trefoil(), &n));
    }

    #[test]
    fn virtual_trefoil_has_defect_one() {
        assert_eq!(solve_numbering(&vt(), 0).unwrap_err().defect_gcd, 1);
        assert!(solve_numbering(&vt(), 1).is_ok());
        assert!(solve_numbering(&vt(), 2).is_err());
    }

    #[test]
    fn binary_cut_system_examples() {
        let b = binary_cut_system(&vt()).unwrap();
        assert_eq!(serialize(&b), "O1+ > O2+ > < U1+ < U2+");
        let n = solve_numbering(&b, 0).unwrap();
        assert!(n.values[0].iter().all(|&v| v == 0 || v == 1));
        assert!(check_numbering(&b, &n));

        let neg = binary_cut_system(&parse("O1- U1-").unwrap()).unwrap();
        assert_eq!(serialize(&neg), "O1- < > U1-");

        let empty = binary_cut_system(&LinkCode::unknot()).unwrap();
        assert_eq!(empty, LinkCode::unknot());

        assert_eq!(binary_cut_system(&b).unwrap_err(), CutError::HasCuts);
    }

    #[test]
    fn zero_levels_give_single_coherent_cut_between_o1_and_o2() {
        let c = cut_system_with_levels(&vt(), &BTreeMap::new(), None).unwrap();
        assert_eq!(serialize(&c), "O1+ > O2+ U1+ < U2+");
        assert!(solve_numbering(&c, 0).is_ok());
    }

    #[test]
    fn trefoil_zero_levels_need_no_cuts() {
        let c = cut_system_with_levels(&trefoil(), &BTreeMap::new(), None).unwrap();
        assert_eq!(c, trefoil());
    }

    #[test]
    fn random_cut_systems_are_valid_and_deterministic() {
        for seed in 0..20 {
            let a = random_cut_system(&vt(), seed).unwrap();
            assert_eq!(a, random_cut_system(&vt(), seed).unwrap());
            assert_eq!(numbering_defect(&a), 0, "{a}");
            assert_eq!(a.without_cuts(), vt());
        }
    }

    #[test]
    fn leading_bars_keep_their_place() {
        let code = parse("| O1+ O2+ U1+ U2+").unwrap();
        let c = cut_system_with_levels(&code, &BTreeMap::new(), None).unwrap();
        assert_eq!(c.without_cuts(), code);
        assert_eq!(numbering_defect(&c), 0);
    }

    #[test]
    fn rho_examples() {
        let r = rho(&binary_cut_system(&vt()).unwrap()).unwrap();
        assert_eq!(r[&1], RhoPair { o: -1, u: 1 });
        assert_eq!(r[&2], RhoPair { o: 1, u: -1 });

        let r = rho(&binary_cut_system(&trefoil()).unwrap()).unwrap();
        assert!(r.values().all(|p| *p == RhoPair::default()));

        let r = rho(&trefoil()).unwrap();
        assert!(r.values().all(|p| *p == RhoPair::default()));

        assert!(matches!(rho(&vt()), Err(CutError::NotACutSystem { defect_gcd: 1 })));
        assert_eq!(rho(&vt()).unwrap_err().to_string(), "not a cut system");
    }

    #[test]
    fn rho_matches_indices_on_virtual_trefoil() {
        let r = rho(&binary_cut_system(&vt()).unwrap()).unwrap();
        for (c, q) in affine_indices(&vt()) {
            assert_eq!((r[&c].o, r[&c].u), (q.o, q.u));
        }
    }

    #[test]
    fn cut_invariants_match_link_invariants() {
        let b = binary_cut_system(&vt()).unwrap();
        let ci = cut_invariants(&b).unwrap();
        assert_eq!(ci.jo.as_map(), &BTreeMap::from([(-1, 1), (1, 1)]));
        assert_eq!(ci, link_invariants(&vt()).unwrap());
        let tb = binary_cut_system(&trefoil()).unwrap();
        assert_eq!(cut_invariants(&tb).unwrap(), LinkInvariants::default());
    }

    #[test]
    fn cut_move_insert_then_delete() {
        let b = binary_cut_system(&vt()).unwrap();
        let before = rho(&b).unwrap();
        for idx in 0..=b.component(0).len() {
            let ins = cut_move_i(&b, 0, idx, CutMove::Insert(CutDir::Along)).unwrap();
            assert_eq!(numbering_defect(&ins), 0);
            assert_eq!(rho(&ins).unwrap(), before);
            assert_eq!(cut_move_i(&ins, 0, idx, CutMove::Delete).unwrap(), b);
        }
        let t = cut_move_i(&trefoil(), 0, 2, CutMove::Insert(CutDir::Against)).unwrap();
        assert!(solve_numbering(&t, 0).is_ok());
        assert_eq!(t.tokens().filter(|t| t.cut() == Some(CutDir::Along)).count(), 1);
        assert_eq!(t.tokens().filter(|t| t.cut() == Some(CutDir::Against)).count(), 1);
        assert!(matches!(cut_move_i(&trefoil(), 0, 0, CutMove::Delete), Err(CutError::NoCancellingPair { .. })));
    }

    #[test]
    fn implications_examples() {
        let r = numbering_implications(&trefoil()).unwrap();
        assert!(r.integral && r.holds());
        let r = numbering_implications(&vt()).unwrap();
        assert_eq!(r.defect_gcd, 1);
        assert!(r.checked_moduli.is_empty() && r.holds());
        let r = numbering_implications(&LinkCode::unknot()).unwrap();
        assert!(r.integral && r.writhes.is_zero());
    }
}
