//! Affine indices and the invariants built from them: n-writhes, the affine
//! index polynomial of a knot, the over/under/over-under polynomials of a
//! link, linking refinements and compatibility.

use std::collections::BTreeMap;

use crate::gauss::{CodeError, CountingArc, CrossingId, LinkCode, Role, Sign};
use crate::poly::LaurentPoly;

/// Flat sign of a passage met along a counting component.
pub fn flat_sign(role: Role, sign: Sign) -> i64 {
    match role {
        Role::Under => sign.value(),
        Role::Over => -sign.value(),
    }
}

/// Sum of flat signs over the passages of an arc; bars and cut points are skipped.
pub fn arc_index(code: &LinkCode, arc: &CountingArc) -> i64 {
    arc.passages().map(|p| flat_sign(p.role, code.sign(p.crossing))).sum()
}

/// The left, right, over and under affine indices of one crossing.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct IndexQuad {
    pub l: i64,
    pub r: i64,
    pub o: i64,
    pub u: i64,
}

impl IndexQuad {
    /// Builds the quad from the over/under indices; left/right follow from the sign.
    pub fn from_over_under(sign: Sign, o: i64, u: i64) -> Self {
        match sign {
            Sign::Pos => IndexQuad { l: u, r: o, o, u },
            Sign::Neg => IndexQuad { l: o, r: u, o, u },
        }
    }

    /// Satoh–Taniguchi index.
    pub fn st_index(&self) -> i64 {
        self.o
    }

    /// Kauffman's weight `W_D(c)`.
    pub fn weight(&self) -> i64 {
        self.u
    }
}

pub fn index_quad(code: &LinkCode, c: CrossingId) -> Result<IndexQuad, CodeError> {
    let (arc_o, arc_u) = code.counting_arcs(c)?;
    Ok(IndexQuad::from_over_under(code.sign(c), arc_index(code, &arc_o), arc_index(code, &arc_u)))
}

/// Index quads of every self-crossing.
pub fn affine_indices(code: &LinkCode) -> BTreeMap<CrossingId, IndexQuad> {
    code.self_crossings()
        .iter()
        .map(|c| (c, index_quad(code, c).expect("self-crossing")))
        .collect()
}

/// Finitely supported map `n -> J_n` over nonzero `n`; zero entries are not stored.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct WritheTable(BTreeMap<i64, i64>);

impl WritheTable {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add(&mut self, n: i64, v: i64) {
        if n == 0 || v == 0 {
            return;
        }
        let e = self.0.entry(n).or_insert(0);
        *e += v;
        if *e == 0 {
            self.0.remove(&n);
        }
    }

    pub fn get(&self, n: i64) -> i64 {
        self.0.get(&n).copied().unwrap_or(0)
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn entries(&self) -> impl Iterator<Item = (i64, i64)> + '_ {
        self.0.iter().map(|(&n, &v)| (n, v))
    }

    pub fn as_map(&self) -> &BTreeMap<i64, i64> {
        &self.0
    }

    pub fn negated(&self) -> Self {
        WritheTable(self.0.iter().map(|(&n, &v)| (n, -v)).collect())
    }
}

impl FromIterator<(i64, i64)> for WritheTable {
    fn from_iter<I: IntoIterator<Item = (i64, i64)>>(iter: I) -> Self {
        let mut t = WritheTable::new();
        for (n, v) in iter {
            t.add(n, v);
        }
        t
    }
}

fn require_plain_knot(code: &LinkCode) -> Result<(), CodeError> {
    if !code.is_knot() {
        return Err(CodeError::NotAKnot);
    }
    if code.has_bars() {
        return Err(CodeError::NotAKnot);
    }
    Ok(())
}

/// `J_n(D)`: signed count of crossings with Satoh–Taniguchi index `n`.
pub fn n_writhes_knot(code: &LinkCode) -> Result<WritheTable, CodeError> {
    require_plain_knot(code)?;
    Ok(affine_indices(code).iter().map(|(&c, q)| (q.st_index(), code.sign(c).value())).collect())
}

/// `P_D(t) = sum sgn(c) (t^{W_D(c)} - 1)`.
pub fn affine_index_polynomial_knot(code: &LinkCode) -> Result<LaurentPoly, CodeError> {
    require_plain_knot(code)?;
    Ok(affine_indices(code)
        .iter()
        .map(|(&c, q)| signed_shift(code.sign(c), 0, q.weight()))
        .sum())
}

/// `sgn * (s^a t^b - 1)`
fn signed_shift(sign: Sign, a: i64, b: i64) -> LaurentPoly {
    let mut p = LaurentPoly::monomial(a as i32, b as i32, sign.value());
    p.add_term((0, 0), -sign.value());
    p
}

/// The over/under n-writhes and the three affine index polynomials of a link.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct LinkInvariants {
    pub jo: WritheTable,
    pub ju: WritheTable,
    pub po: LaurentPoly,
    pub pu: LaurentPoly,
    pub pou: LaurentPoly,
}

impl LinkInvariants {
    /// Evaluates the defining sums from `(sign, over index, under index)` triples.
    pub fn from_indices(items: impl IntoIterator<Item = (Sign, i64, i64)>) -> Self {
        let mut inv = LinkInvariants::default();
        for (sign, o, u) in items {
            let e = sign.value();
            if u != 0 {
                inv.jo.add(o, e);
                inv.po += &signed_shift(sign, 0, o);
            }
            if o != 0 {
                inv.ju.add(u, e);
                inv.pu += &signed_shift(sign, 0, u);
            }
            let s_part = &LaurentPoly::s_pow(o as i32) - &LaurentPoly::one();
            let t_part = &LaurentPoly::t_pow(u as i32) - &LaurentPoly::one();
            inv.pou += &(&s_part * &t_part).scale(e);
        }
        inv
    }
}

fn require_bar_free(code: &LinkCode) -> Result<(), CodeError> {
    if code.has_bars() {
        Err(CodeError::HasBars)
    } else {
        Ok(())
    }
}

pub fn link_invariants(code: &LinkCode) -> Result<LinkInvariants, CodeError> {
    require_bar_free(code)?;
    Ok(LinkInvariants::from_indices(
        affine_indices(code).iter().map(|(&c, q)| (code.sign(c), q.o, q.u)),
    ))
}

/// Component-wise linking numbers, 0-based component indices.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct LinkingData {
    /// `lk[i][j]`: sum of signs of nonself crossings over on `i`, under on `j`.
    pub lk: Vec<Vec<i64>>,
    /// `vlk[i][j] = lk[j][i] - lk[i][j]`.
    pub vlk: Vec<Vec<i64>>,
    /// `lambda[i] = sum_j vlk[i][j]`.
    pub lambda: Vec<i64>,
}

pub fn linking_data(code: &LinkCode) -> LinkingData {
    let n = code.num_components();
    let mut lk = vec![vec![0; n]; n];
    for (c, (o, u)) in code.passage_sites() {
        if o.component != u.component {
            lk[o.component][u.component] += code.sign(c).value();
        }
    }
    let vlk: Vec<Vec<i64>> = (0..n).map(|i| (0..n).map(|j| lk[j][i] - lk[i][j]).collect()).collect();
    let lambda = vlk.iter().map(|row| row.iter().sum()).collect();
    LinkingData { lk, vlk, lambda }
}

/// Invariants restricted to the self-crossings of one component.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct ComponentInvariants {
    pub lambda: i64,
    pub po: LaurentPoly,
    pub pu: LaurentPoly,
    pub pou: LaurentPoly,
    /// Over n-writhe restricted to this component's self-crossings.
    pub jo: WritheTable,
}

pub fn component_split(code: &LinkCode) -> Result<Vec<ComponentInvariants>, CodeError> {
    require_bar_free(code)?;
    let lambda = linking_data(code).lambda;
    let selfx = code.self_crossings();
    let mut out = Vec::with_capacity(code.num_components());
    for (i, &lam) in lambda.iter().enumerate() {
        let mut ci = ComponentInvariants { lambda: lam, ..Default::default() };
        for &c in selfx.on_component(i) {
            let q = index_quad(code, c)?;
            let sign = code.sign(c);
            if q.o != 0 && q.o != lam {
                ci.po += &signed_shift(sign, 0, q.o);
            }
            if q.u != 0 && q.u != lam {
                ci.pu += &signed_shift(sign, 0, q.u);
            }
            if q.u != 0 {
                ci.jo.add(q.o, sign.value());
            }
            let s_part = &LaurentPoly::s_pow(q.o as i32) - &LaurentPoly::one();
            let t_part = &LaurentPoly::t_pow(q.u as i32) - &LaurentPoly::one();
            ci.pou += &(&s_part * &t_part).scale(sign.value());
        }
        out.push(ci);
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Compatibility {
    pub compatible: bool,
    /// The affine index polynomial of a compatible link (equal to `PU`).
    pub p: Option<LaurentPoly>,
}

pub fn compatibility(code: &LinkCode) -> Result<Compatibility, CodeError> {
    require_bar_free(code)?;
    let quads = affine_indices(code);
    let compatible = quads.values().all(|q| q.o == -q.u);
    let p = compatible.then(|| link_invariants(code).map(|inv| inv.pu)).transpose()?;
    Ok(Compatibility { compatible, p })
}
