//! Twisted links: bar parities, the `Q` polynomial, and the double covering.

use std::collections::BTreeMap;

use crate::affine::{
    affine_index_polynomial_knot, arc_index, link_invariants, n_writhes_knot, LinkInvariants, WritheTable,
};
use crate::gauss::{CodeError, CrossingId, LinkCode, Passage, Role, Token};
use crate::poly::LaurentPoly;

/// Index and bar parities of one self-crossing, each 0 or 1.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct ParityData {
    pub rho_bar_o: u8,
    pub rho_bar_u: u8,
    pub p_o: u8,
    pub p_u: u8,
}

/// Parities at every self-crossing; indices are computed ignoring bars.
pub fn bar_parities(code: &LinkCode) -> BTreeMap<CrossingId, ParityData> {
    let parity = |n: i64| n.rem_euclid(2) as u8;
    code.self_crossings()
        .iter()
        .map(|c| {
            let (arc_o, arc_u) = code.counting_arcs(c).expect("self-crossing");
            let pd = ParityData {
                rho_bar_o: parity(arc_index(code, &arc_o)),
                rho_bar_u: parity(arc_index(code, &arc_u)),
                p_o: parity(arc_o.bar_count() as i64),
                p_u: parity(arc_u.bar_count() as i64),
            };
            (c, pd)
        })
        .collect()
}

/// `Q(s,t) = sum sgn(c) (s^{rho_O} t^{p_O} - 1)(s^{rho_U} t^{p_U} - 1)` over self-crossings.
pub fn q_polynomial(code: &LinkCode) -> Result<LaurentPoly, CodeError> {
    if code.has_cuts() {
        return Err(CodeError::HasCuts);
    }
    let one = LaurentPoly::one();
    Ok(bar_parities(code)
        .iter()
        .map(|(&c, pd)| {
            let a = &LaurentPoly::monomial(pd.rho_bar_o.into(), pd.p_o.into(), 1) - &one;
            let b = &LaurentPoly::monomial(pd.rho_bar_u.into(), pd.p_u.into(), 1) - &one;
            (&a * &b).scale(code.sign(c).value())
        })
        .sum())
}

/// Sheet label of a lifted crossing.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Sheet {
    Plus,
    Minus,
}

impl Sheet {
    fn toggle(self) -> Self {
        match self {
            Sheet::Plus => Sheet::Minus,
            Sheet::Minus => Sheet::Plus,
        }
    }
}

/// A crossing of the double cover: a base crossing and a sheet.
///
/// Cover codes number `(c, +)` as `2c - 1` and `(c, -)` as `2c`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CoverCrossing {
    pub base: CrossingId,
    pub sheet: Sheet,
}

impl CoverCrossing {
    pub fn id(&self) -> CrossingId {
        match self.sheet {
            Sheet::Plus => 2 * self.base - 1,
            Sheet::Minus => 2 * self.base,
        }
    }

    pub fn from_id(id: CrossingId) -> Self {
        let base = id.div_ceil(2);
        let sheet = if id % 2 == 1 { Sheet::Plus } else { Sheet::Minus };
        CoverCrossing { base, sheet }
    }

    /// Role of this lift of a base passage with role `base`: the `-` sheet is
    /// the base diagram seen from the other side of the surface.
    pub fn role(&self, base: Role) -> Role {
        match self.sheet {
            Sheet::Plus => base,
            Sheet::Minus => base.flip(),
        }
    }
}

fn walk(comp: &[Token], start: Sheet, out: &mut Vec<Token>) -> Sheet {
    let mut sheet = start;
    for t in comp {
        match t {
            Token::Bar => sheet = sheet.toggle(),
            Token::Passage(p) => {
                let cc = CoverCrossing { base: p.crossing, sheet };
                out.push(Token::Passage(Passage { role: cc.role(p.role), crossing: cc.id() }));
            }
            Token::Cut(_) => {}
        }
    }
    sheet
}

/// The bar-free double covering code.
///
/// Each component is walked from sheet `+`, switching sheets at every bar. A
/// component with an odd number of bars lifts to one component of twice the
/// length; otherwise it lifts to two components, the second walked from `-`.
/// Sheet `-` carries the diagram turned over: passage roles are exchanged
/// and crossing signs are kept.
pub fn double_cover(code: &LinkCode) -> Result<LinkCode, CodeError> {
    double_cover_from(code, Sheet::Plus)
}

/// [`double_cover`] with every component walked first from `start`.
pub fn double_cover_from(code: &LinkCode, start: Sheet) -> Result<LinkCode, CodeError> {
    if code.has_cuts() {
        return Err(CodeError::HasCuts);
    }
    let mut components = Vec::new();
    for comp in code.components() {
        let mut first = Vec::new();
        let end = walk(comp, start, &mut first);
        if end != start {
            walk(comp, end, &mut first);
            components.push(first);
        } else {
            let mut second = Vec::new();
            walk(comp, start.toggle(), &mut second);
            components.push(first);
            components.push(second);
        }
    }
    let mut signs = BTreeMap::new();
    for (&c, &s) in code.signs() {
        for sheet in [Sheet::Plus, Sheet::Minus] {
            signs.insert(CoverCrossing { base: c, sheet }.id(), s);
        }
    }
    Ok(LinkCode::from_parts(components, signs))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CoverType {
    /// Odd number of bars: the cover of a knot is a knot.
    Odd,
    Even,
}

/// Invariants of the double cover that only exist when it is a knot.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TildeKnot {
    pub j: WritheTable,
    pub p: LaurentPoly,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TildeInvariants {
    pub cover: LinkCode,
    /// Set when the base code is a knot.
    pub cover_type: Option<CoverType>,
    pub link: LinkInvariants,
    /// Set for odd-type knots.
    pub knot: Option<TildeKnot>,
}

pub fn tilde_invariants(code: &LinkCode) -> Result<TildeInvariants, CodeError> {
    let cover = double_cover(code)?;
    let cover_type = code.is_knot().then(|| if code.bar_count() % 2 == 1 { CoverType::Odd } else { CoverType::Even });
    let link = link_invariants(&cover)?;
    let knot = if cover.is_knot() {
        Some(TildeKnot { j: n_writhes_knot(&cover)?, p: affine_index_polynomial_knot(&cover)? })
    } else {
        None
    };
    Ok(TildeInvariants { cover, cover_type, link, knot })
}
