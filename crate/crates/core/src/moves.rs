//! Rewrites realizing Reidemeister moves I-III and twisted moves I and III on
//! Gauss codes, plus a seeded random walk through equivalent codes.
//!
//! Positions named `gap` are insertion points in a component before the move:
//! gap `k` places new tokens before the token at index `k`, and gap `len`
//! appends.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use rand::distributions::WeightedIndex;
use rand::prelude::*;
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::gauss::{CrossingId, LinkCode, Passage, Role, Sign, Site, Token};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum MoveKind {
    R1Insert,
    R1Delete,
    R2Insert,
    R2Delete,
    R3,
    T1Insert,
    T1Delete,
    T3,
    Rotate,
    Relabel,
}

impl MoveKind {
    pub const ALL: [MoveKind; 10] = [
        MoveKind::R1Insert,
        MoveKind::R1Delete,
        MoveKind::R2Insert,
        MoveKind::R2Delete,
        MoveKind::R3,
        MoveKind::T1Insert,
        MoveKind::T1Delete,
        MoveKind::T3,
        MoveKind::Rotate,
        MoveKind::Relabel,
    ];

    pub fn name(self) -> &'static str {
        match self {
            MoveKind::R1Insert => "R1_insert",
            MoveKind::R1Delete => "R1_delete",
            MoveKind::R2Insert => "R2_insert",
            MoveKind::R2Delete => "R2_delete",
            MoveKind::R3 => "R3",
            MoveKind::T1Insert => "T1_insert",
            MoveKind::T1Delete => "T1_delete",
            MoveKind::T3 => "T3",
            MoveKind::Rotate => "rotate",
            MoveKind::Relabel => "relabel",
        }
    }

    fn is_insert(self) -> bool {
        matches!(self, MoveKind::R1Insert | MoveKind::R2Insert | MoveKind::T1Insert)
    }

    pub fn is_twisted(self) -> bool {
        matches!(self, MoveKind::T1Insert | MoveKind::T1Delete | MoveKind::T3)
    }
}

impl fmt::Display for MoveKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Order of the two passages of an R1 kink.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum KinkOrder {
    OverFirst,
    UnderFirst,
}

/// Relative orientation of the two strands of an R2 bigon.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Strands {
    /// Under strand meets `a` then `b`.
    Parallel,
    /// Under strand meets `b` then `a`.
    Antiparallel,
}

/// Direction of a T3 rewrite.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BarSide {
    /// Bars precede both passages and end up following them.
    Before,
    /// Bars follow both passages and end up preceding them.
    After,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum MoveSpec {
    R1Insert { component: usize, gap: usize, id: CrossingId, sign: Sign, order: KinkOrder },
    R1Delete { id: CrossingId },
    /// New crossings `a` (sign `sign`) and `b` (sign `-sign`); over pair at
    /// `(over_component, over_gap)`, under pair at `(under_component, under_gap)`.
    R2Insert {
        over_component: usize,
        over_gap: usize,
        under_component: usize,
        under_gap: usize,
        a: CrossingId,
        b: CrossingId,
        sign: Sign,
        strands: Strands,
    },
    R2Delete { a: CrossingId, b: CrossingId },
    /// Reverses the three adjacent pairs of a braid-like triangle on `x`, `y`, `z`.
    R3 { x: CrossingId, y: CrossingId, z: CrossingId },
    T1Insert { component: usize, gap: usize },
    /// Removes the bars at `index` and the next position.
    T1Delete { component: usize, index: usize },
    T3 { id: CrossingId, side: BarSide },
    /// Cyclically moves the first `by` tokens of a component to its end.
    Rotate { component: usize, by: usize },
    /// Exchanges ids `a` and `b`; `b` may be unused, which renames `a`.
    Relabel { a: CrossingId, b: CrossingId },
}

impl MoveSpec {
    pub fn kind(&self) -> MoveKind {
        match self {
            MoveSpec::R1Insert { .. } => MoveKind::R1Insert,
            MoveSpec::R1Delete { .. } => MoveKind::R1Delete,
            MoveSpec::R2Insert { .. } => MoveKind::R2Insert,
            MoveSpec::R2Delete { .. } => MoveKind::R2Delete,
            MoveSpec::R3 { .. } => MoveKind::R3,
            MoveSpec::T1Insert { .. } => MoveKind::T1Insert,
            MoveSpec::T1Delete { .. } => MoveKind::T1Delete,
            MoveSpec::T3 { .. } => MoveKind::T3,
            MoveSpec::Rotate { .. } => MoveKind::Rotate,
            MoveSpec::Relabel { .. } => MoveKind::Relabel,
        }
    }
}

#[derive(Debug, Clone, Error, PartialEq, Eq)]
#[error("{kind}: {reason}")]
pub struct MoveError {
    pub kind: MoveKind,
    pub reason: String,
}

fn fail<T>(kind: MoveKind, reason: impl Into<String>) -> Result<T, MoveError> {
    Err(MoveError { kind, reason: reason.into() })
}

fn sign_char(s: Sign) -> char {
    match s {
        Sign::Pos => '+',
        Sign::Neg => '-',
    }
}

impl fmt::Display for MoveSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.kind())?;
        match *self {
            MoveSpec::R1Insert { component, gap, id, sign, order } => {
                let order = match order {
                    KinkOrder::OverFirst => "OU",
                    KinkOrder::UnderFirst => "UO",
                };
                write!(f, " c={component} p={gap} id={id} sign={} order={order}", sign_char(sign))
            }
            MoveSpec::R1Delete { id } => write!(f, " id={id}"),
            MoveSpec::R2Insert { over_component, over_gap, under_component, under_gap, a, b, sign, strands } => {
                let strands = match strands {
                    Strands::Parallel => "parallel",
                    Strands::Antiparallel => "antiparallel",
                };
                write!(
                    f,
                    " c={over_component} p={over_gap} d={under_component} q={under_gap} a={a} b={b} sign={} strands={strands}",
                    sign_char(sign)
                )
            }
            MoveSpec::R2Delete { a, b } => write!(f, " a={a} b={b}"),
            MoveSpec::R3 { x, y, z } => write!(f, " x={x} y={y} z={z}"),
            MoveSpec::T1Insert { component, gap } => write!(f, " c={component} p={gap}"),
            MoveSpec::T1Delete { component, index } => write!(f, " c={component} i={index}"),
            MoveSpec::T3 { id, side } => {
                let side = match side {
                    BarSide::Before => "before",
                    BarSide::After => "after",
                };
                write!(f, " id={id} bars={side}")
            }
            MoveSpec::Rotate { component, by } => write!(f, " c={component} by={by}"),
            MoveSpec::Relabel { a, b } => write!(f, " a={a} b={b}"),
        }
    }
}

#[derive(Debug, Clone, Error, PartialEq, Eq)]
#[error("bad move `{line}`: {reason}")]
pub struct MoveParseError {
    pub line: String,
    pub reason: String,
}

impl FromStr for MoveSpec {
    type Err = MoveParseError;

    fn from_str(line: &str) -> Result<Self, Self::Err> {
        let err = |reason: String| MoveParseError { line: line.trim().to_string(), reason };
        let mut words = line.split_whitespace();
        let name = words.next().ok_or_else(|| err("empty line".into()))?;
        let kind = MoveKind::ALL
            .into_iter()
            .find(|k| k.name() == name)
            .ok_or_else(|| err(format!("unknown move kind `{name}`")))?;
        let mut fields = BTreeMap::new();
        for w in words {
            let (k, v) = w.split_once('=').ok_or_else(|| err(format!("expected key=value, got `{w}`")))?;
            fields.insert(k, v);
        }
        let get = |key: &str| fields.get(key).copied().ok_or_else(|| err(format!("missing `{key}`")));
        let num = |key: &str| -> Result<usize, MoveParseError> {
            get(key)?.parse().map_err(|_| err(format!("`{key}` is not a number")))
        };
        let id = |key: &str| -> Result<CrossingId, MoveParseError> {
            get(key)?.parse().map_err(|_| err(format!("`{key}` is not a crossing id")))
        };
        let sign = || match get("sign")? {
            "+" => Ok(Sign::Pos),
            "-" => Ok(Sign::Neg),
            other => Err(err(format!("bad sign `{other}`"))),
        };
        Ok(match kind {
            MoveKind::R1Insert => MoveSpec::R1Insert {
                component: num("c")?,
                gap: num("p")?,
                id: id("id")?,
                sign: sign()?,
                order: match get("order")? {
                    "OU" => KinkOrder::OverFirst,
                    "UO" => KinkOrder::UnderFirst,
                    other => return Err(err(format!("bad order `{other}`"))),
                },
            },
            MoveKind::R1Delete => MoveSpec::R1Delete { id: id("id")? },
            MoveKind::R2Insert => MoveSpec::R2Insert {
                over_component: num("c")?,
                over_gap: num("p")?,
                under_component: num("d")?,
                under_gap: num("q")?,
                a: id("a")?,
                b: id("b")?,
                sign: sign()?,
                strands: match get("strands")? {
                    "parallel" => Strands::Parallel,
                    "antiparallel" => Strands::Antiparallel,
                    other => return Err(err(format!("bad strands `{other}`"))),
                },
            },
            MoveKind::R2Delete => MoveSpec::R2Delete { a: id("a")?, b: id("b")? },
            MoveKind::R3 => MoveSpec::R3 { x: id("x")?, y: id("y")?, z: id("z")? },
            MoveKind::T1Insert => MoveSpec::T1Insert { component: num("c")?, gap: num("p")? },
            MoveKind::T1Delete => MoveSpec::T1Delete { component: num("c")?, index: num("i")? },
            MoveKind::T3 => MoveSpec::T3 {
                id: id("id")?,
                side: match get("bars")? {
                    "before" => BarSide::Before,
                    "after" => BarSide::After,
                    other => return Err(err(format!("bad bar side `{other}`"))),
                },
            },
            MoveKind::Rotate => MoveSpec::Rotate { component: num("c")?, by: num("by")? },
            MoveKind::Relabel => MoveSpec::Relabel { a: id("a")?, b: id("b")? },
        })
    }
}

/// A replayable sequence of moves, printed one per line.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct MoveLog(pub Vec<MoveSpec>);

impl MoveLog {
    pub fn moves(&self) -> &[MoveSpec] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn truncated(&self, n: usize) -> MoveLog {
        MoveLog(self.0[..n.min(self.0.len())].to_vec())
    }
}

impl fmt::Display for MoveLog {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for m in &self.0 {
            writeln!(f, "{m}")?;
        }
        Ok(())
    }
}

/// Blank lines and `#` comments are ignored.
impl FromStr for MoveLog {
    type Err = MoveParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        s.lines()
            .map(str::trim)
            .filter(|l| !l.is_empty() && !l.starts_with('#'))
            .map(str::parse)
            .collect::<Result<_, _>>()
            .map(MoveLog)
    }
}

fn next_index(len: usize, i: usize) -> usize {
    (i + 1) % len
}

fn prev_index(len: usize, i: usize) -> usize {
    (i + len - 1) % len
}

fn follows(code: &LinkCode, first: Site, second: Site) -> bool {
    first.component == second.component
        && first.index != second.index
        && second.index == next_index(code.component(first.component).len(), first.index)
}

fn passage_at(code: &LinkCode, site: Site) -> Option<Passage> {
    code.component(site.component)[site.index].passage()
}

fn passage_token(role: Role, c: CrossingId) -> Token {
    Token::Passage(Passage { role, crossing: c })
}

/// Removes the tokens at `sites` (distinct) from a component list.
fn remove_sites(components: &mut [Vec<Token>], mut sites: Vec<Site>) {
    sites.sort();
    for s in sites.into_iter().rev() {
        components[s.component].remove(s.index);
    }
}

fn check_component(kind: MoveKind, code: &LinkCode, component: usize) -> Result<(), MoveError> {
    if component >= code.num_components() {
        return fail(kind, format!("component {component} does not exist"));
    }
    Ok(())
}

fn check_gap(kind: MoveKind, code: &LinkCode, component: usize, gap: usize) -> Result<(), MoveError> {
    check_component(kind, code, component)?;
    if gap > code.component(component).len() {
        return fail(kind, format!("gap {gap} is past the end of component {component}"));
    }
    Ok(())
}

fn check_fresh(kind: MoveKind, code: &LinkCode, id: CrossingId) -> Result<(), MoveError> {
    if id == 0 {
        return fail(kind, "crossing id 0 is reserved");
    }
    if code.contains_crossing(id) {
        return fail(kind, format!("crossing id {id} is already in use"));
    }
    Ok(())
}

fn locate(kind: MoveKind, code: &LinkCode, c: CrossingId) -> Result<(Site, Site), MoveError> {
    code.locate(c).or_else(|_| fail(kind, format!("crossing {c} does not occur in the code")))
}

/// Applies one move, checking its preconditions.
pub fn apply_move(code: &LinkCode, m: &MoveSpec) -> Result<LinkCode, MoveError> {
    let kind = m.kind();
    let (mut comps, mut signs) = code.clone().into_parts();
    match *m {
        MoveSpec::R1Insert { component, gap, id, sign, order } => {
            check_gap(kind, code, component, gap)?;
            check_fresh(kind, code, id)?;
            let pair = match order {
                KinkOrder::OverFirst => [Token::over(id), Token::under(id)],
                KinkOrder::UnderFirst => [Token::under(id), Token::over(id)],
            };
            comps[component].splice(gap..gap, pair);
            signs.insert(id, sign);
        }
        MoveSpec::R1Delete { id } => {
            let (o, u) = locate(kind, code, id)?;
            if !follows(code, o, u) && !follows(code, u, o) {
                return fail(kind, format!("passages of crossing {id} are not adjacent"));
            }
            remove_sites(&mut comps, vec![o, u]);
            signs.remove(&id);
        }
        MoveSpec::R2Insert { over_component, over_gap, under_component, under_gap, a, b, sign, strands } => {
            check_gap(kind, code, over_component, over_gap)?;
            check_gap(kind, code, under_component, under_gap)?;
            check_fresh(kind, code, a)?;
            check_fresh(kind, code, b)?;
            if a == b {
                return fail(kind, "the two new crossings need distinct ids");
            }
            let over = [Token::over(a), Token::over(b)];
            let under = match strands {
                Strands::Parallel => [Token::under(a), Token::under(b)],
                Strands::Antiparallel => [Token::under(b), Token::under(a)],
            };
            if over_component == under_component && under_gap > over_gap {
                comps[under_component].splice(under_gap..under_gap, under);
                comps[over_component].splice(over_gap..over_gap, over);
            } else if over_component == under_component && under_gap == over_gap {
                comps[over_component].splice(over_gap..over_gap, over.into_iter().chain(under));
            } else {
                comps[over_component].splice(over_gap..over_gap, over);
                comps[under_component].splice(under_gap..under_gap, under);
            }
            signs.insert(a, sign);
            signs.insert(b, -sign);
        }
        MoveSpec::R2Delete { a, b } => {
            let (oa, ua) = locate(kind, code, a)?;
            let (ob, ub) = locate(kind, code, b)?;
            if a == b {
                return fail(kind, "a bigon needs two distinct crossings");
            }
            if code.sign(a) == code.sign(b) {
                return fail(kind, format!("crossings {a} and {b} have equal signs"));
            }
            if !follows(code, oa, ob) && !follows(code, ob, oa) {
                return fail(kind, format!("over passages of {a} and {b} are not adjacent"));
            }
            if !follows(code, ua, ub) && !follows(code, ub, ua) {
                return fail(kind, format!("under passages of {a} and {b} are not adjacent"));
            }
            remove_sites(&mut comps, vec![oa, ua, ob, ub]);
            signs.remove(&a);
            signs.remove(&b);
        }
        MoveSpec::R3 { x, y, z } => {
            let pairs = r3_pairs(code, x, y, z).ok_or_else(|| MoveError {
                kind,
                reason: format!("crossings {x}, {y}, {z} do not form a braid-like triangle"),
            })?;
            for (s1, s2) in pairs {
                let c = &mut comps[s1.component];
                c.swap(s1.index, s2.index);
            }
        }
        MoveSpec::T1Insert { component, gap } => {
            check_gap(kind, code, component, gap)?;
            comps[component].splice(gap..gap, [Token::Bar, Token::Bar]);
        }
        MoveSpec::T1Delete { component, index } => {
            check_component(kind, code, component)?;
            let len = code.component(component).len();
            if len < 2 || index >= len {
                return fail(kind, format!("no bar pair at index {index} of component {component}"));
            }
            let j = next_index(len, index);
            let comp = code.component(component);
            if !comp[index].is_bar() || !comp[j].is_bar() {
                return fail(kind, format!("no bar pair at index {index} of component {component}"));
            }
            remove_sites(
                &mut comps,
                vec![Site { component, index }, Site { component, index: j }],
            );
        }
        MoveSpec::T3 { id, side } => {
            let (o, u) = locate(kind, code, id)?;
            let bar_site = |s: Site| {
                let len = code.component(s.component).len();
                let index = match side {
                    BarSide::Before => prev_index(len, s.index),
                    BarSide::After => next_index(len, s.index),
                };
                Site { component: s.component, index }
            };
            let (bo, bu) = (bar_site(o), bar_site(u));
            let is_bar = |s: Site| code.component(s.component)[s.index].is_bar();
            if bo == o || bu == u || !is_bar(bo) || !is_bar(bu) {
                let where_ = match side {
                    BarSide::Before => "precede",
                    BarSide::After => "follow",
                };
                return fail(kind, format!("bars do not {where_} both passages of crossing {id}"));
            }
            comps = t3_rewrite(code, id, side, &[bo, bu]);
        }
        MoveSpec::Rotate { component, by } => {
            check_component(kind, code, component)?;
            let len = comps[component].len();
            if len > 0 {
                comps[component].rotate_left(by % len);
            }
        }
        MoveSpec::Relabel { a, b } => {
            if !code.contains_crossing(a) {
                return fail(kind, format!("crossing {a} does not occur in the code"));
            }
            if b == 0 {
                return fail(kind, "crossing id 0 is reserved");
            }
            let swap = |c: CrossingId| {
                if c == a {
                    b
                } else if c == b {
                    a
                } else {
                    c
                }
            };
            for t in comps.iter_mut().flatten() {
                if let Token::Passage(p) = t {
                    p.crossing = swap(p.crossing);
                }
            }
            signs = signs.into_iter().map(|(c, s)| (swap(c), s)).collect();
        }
    }
    Ok(LinkCode::from_parts(comps, signs))
}

/// Positions of the three pairs to reverse, if `x, y, z` form either
/// orientation of the braid-like triangle:
/// `[O_x O_y] [U_x O_z] [U_y U_z]` or `[O_y O_x] [O_z U_x] [U_z U_y]`,
/// all three signs equal.
fn r3_pairs(code: &LinkCode, x: CrossingId, y: CrossingId, z: CrossingId) -> Option<[(Site, Site); 3]> {
    if x == y || y == z || x == z {
        return None;
    }
    let (ox, ux) = code.locate(x).ok()?;
    let (oy, uy) = code.locate(y).ok()?;
    let (oz, uz) = code.locate(z).ok()?;
    if code.sign(x) != code.sign(y) || code.sign(y) != code.sign(z) {
        return None;
    }
    if follows(code, ox, oy) && follows(code, ux, oz) && follows(code, uy, uz) {
        return Some([(ox, oy), (ux, oz), (uy, uz)]);
    }
    if follows(code, oy, ox) && follows(code, oz, ux) && follows(code, uz, uy) {
        return Some([(oy, ox), (oz, ux), (uz, uy)]);
    }
    None
}

fn t3_rewrite(code: &LinkCode, id: CrossingId, side: BarSide, bars: &[Site]) -> Vec<Vec<Token>> {
    code.components()
        .iter()
        .enumerate()
        .map(|(ci, comp)| {
            let mut out = Vec::with_capacity(comp.len());
            for (k, t) in comp.iter().enumerate() {
                if bars.contains(&Site { component: ci, index: k }) {
                    continue;
                }
                match t.passage() {
                    Some(p) if p.crossing == id => {
                        let flipped = passage_token(p.role.flip(), id);
                        match side {
                            BarSide::Before => out.extend([flipped, Token::Bar]),
                            BarSide::After => out.extend([Token::Bar, flipped]),
                        }
                    }
                    _ => out.push(*t),
                }
            }
            out
        })
        .collect()
}

/// Moves available to the random walk.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MoveSet {
    /// Reidemeister moves, rotations and relabelings.
    Virtual,
    /// Additionally the twisted moves T1 and T3.
    Twisted,
}

impl MoveSet {
    /// Twisted for codes that carry bars, virtual otherwise.
    pub fn for_code(code: &LinkCode) -> Self {
        if code.has_bars() {
            MoveSet::Twisted
        } else {
            MoveSet::Virtual
        }
    }

    fn allows(self, kind: MoveKind) -> bool {
        self == MoveSet::Twisted || !kind.is_twisted()
    }
}

fn random_sign(rng: &mut ChaCha8Rng) -> Sign {
    if rng.gen_bool(0.5) {
        Sign::Pos
    } else {
        Sign::Neg
    }
}

fn random_gap(code: &LinkCode, rng: &mut ChaCha8Rng) -> (usize, usize) {
    let c = rng.gen_range(0..code.num_components());
    (c, rng.gen_range(0..=code.component(c).len()))
}

/// Every applicable deletion-type site of `kind` in `code`.
pub fn sites(code: &LinkCode, kind: MoveKind) -> Vec<MoveSpec> {
    let sites = code.passage_sites();
    match kind {
        MoveKind::R1Delete => sites
            .iter()
            .filter(|(_, &(o, u))| follows(code, o, u) || follows(code, u, o))
            .map(|(&id, _)| MoveSpec::R1Delete { id })
            .collect(),
        MoveKind::R2Delete => {
            let mut out = Vec::new();
            for (&a, &(oa, ua)) in &sites {
                let len = code.component(oa.component).len();
                let next = Site { component: oa.component, index: next_index(len, oa.index) };
                let Some(p) = passage_at(code, next).filter(|p| p.role == Role::Over && p.crossing != a) else {
                    continue;
                };
                let b = p.crossing;
                let ub = sites[&b].1;
                if code.sign(a) != code.sign(b) && (follows(code, ua, ub) || follows(code, ub, ua)) {
                    out.push(MoveSpec::R2Delete { a, b });
                }
            }
            out
        }
        MoveKind::R3 => {
            let mut out = Vec::new();
            for (&x, &(ox, ux)) in &sites {
                let next_of = |s: Site| {
                    let len = code.component(s.component).len();
                    passage_at(code, Site { component: s.component, index: next_index(len, s.index) })
                };
                let (Some(py), Some(pz)) = (next_of(ox), next_of(ux)) else {
                    continue;
                };
                if py.role == Role::Over && pz.role == Role::Over && r3_pairs(code, x, py.crossing, pz.crossing).is_some() {
                    out.push(MoveSpec::R3 { x, y: py.crossing, z: pz.crossing });
                }
                // Second orientation: `[O_y O_x]`, `[O_z U_x]`.
                let prev_of = |s: Site| {
                    let len = code.component(s.component).len();
                    passage_at(code, Site { component: s.component, index: prev_index(len, s.index) })
                };
                if let (Some(py), Some(pz)) = (prev_of(ox), prev_of(ux)) {
                    if py.role == Role::Over
                        && pz.role == Role::Over
                        && r3_pairs(code, x, py.crossing, pz.crossing).is_some()
                    {
                        out.push(MoveSpec::R3 { x, y: py.crossing, z: pz.crossing });
                    }
                }
            }
            out
        }
        MoveKind::T1Delete => {
            let mut out = Vec::new();
            for (ci, comp) in code.components().iter().enumerate() {
                let len = comp.len();
                if len < 2 {
                    continue;
                }
                for i in 0..len {
                    if comp[i].is_bar() && comp[next_index(len, i)].is_bar() {
                        out.push(MoveSpec::T1Delete { component: ci, index: i });
                    }
                }
            }
            out
        }
        MoveKind::T3 => {
            let mut out = Vec::new();
            for &id in sites.keys() {
                for side in [BarSide::Before, BarSide::After] {
                    let m = MoveSpec::T3 { id, side };
                    if apply_move(code, &m).is_ok() {
                        out.push(m);
                    }
                }
            }
            out
        }
        _ => Vec::new(),
    }
}

/// Draws one applicable move of `kind`, if any.
fn draw(code: &LinkCode, kind: MoveKind, rng: &mut ChaCha8Rng) -> Option<MoveSpec> {
    match kind {
        MoveKind::R1Insert => {
            let (component, gap) = random_gap(code, rng);
            let order = if rng.gen_bool(0.5) { KinkOrder::OverFirst } else { KinkOrder::UnderFirst };
            Some(MoveSpec::R1Insert { component, gap, id: code.fresh_id(), sign: random_sign(rng), order })
        }
        MoveKind::R2Insert => {
            let (over_component, over_gap) = random_gap(code, rng);
            let (under_component, under_gap) = random_gap(code, rng);
            let a = code.fresh_id();
            let strands = if rng.gen_bool(0.5) { Strands::Parallel } else { Strands::Antiparallel };
            Some(MoveSpec::R2Insert {
                over_component,
                over_gap,
                under_component,
                under_gap,
                a,
                b: a + 1,
                sign: random_sign(rng),
                strands,
            })
        }
        MoveKind::T1Insert => {
            let (component, gap) = random_gap(code, rng);
            Some(MoveSpec::T1Insert { component, gap })
        }
        MoveKind::Rotate => {
            let candidates: Vec<usize> = (0..code.num_components()).filter(|&c| code.component(c).len() > 1).collect();
            let &component = candidates.choose(rng)?;
            let by = rng.gen_range(1..code.component(component).len());
            Some(MoveSpec::Rotate { component, by })
        }
        MoveKind::Relabel => {
            let ids: Vec<CrossingId> = code.crossings().collect();
            let &a = ids.choose(rng)?;
            let mut targets: Vec<CrossingId> = ids.iter().copied().filter(|&c| c != a).collect();
            targets.push(code.fresh_id());
            let &b = targets.choose(rng)?;
            Some(MoveSpec::Relabel { a, b })
        }
        _ => sites(code, kind).choose(rng).copied(),
    }
}

/// Applies `steps` random moves; the same `(code, steps, seed, set)` always
/// gives the same result, and the returned log replays it.
///
/// Each step picks a kind among those with an applicable site, insertions
/// weighted twice as heavily as the rest, then a uniform site of that kind.
pub fn random_equivalent_with(code: &LinkCode, steps: usize, seed: u64, set: MoveSet) -> (LinkCode, MoveLog) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut current = code.clone();
    let mut log = Vec::with_capacity(steps);
    let kinds: Vec<MoveKind> = MoveKind::ALL.into_iter().filter(|k| set.allows(*k)).collect();
    for _ in 0..steps {
        let mut options: Vec<(MoveKind, Vec<MoveSpec>)> = Vec::new();
        for &k in &kinds {
            let available = match k {
                MoveKind::R1Delete | MoveKind::R2Delete | MoveKind::R3 | MoveKind::T1Delete | MoveKind::T3 => {
                    sites(&current, k)
                }
                _ => Vec::new(),
            };
            let generative = matches!(
                k,
                MoveKind::R1Insert | MoveKind::R2Insert | MoveKind::T1Insert | MoveKind::Rotate | MoveKind::Relabel
            );
            if generative || !available.is_empty() {
                options.push((k, available));
            }
        }
        let weights: Vec<u32> = options.iter().map(|(k, _)| if k.is_insert() { 2 } else { 1 }).collect();
        let dist = WeightedIndex::new(&weights).expect("insert kinds are always available");
        let (kind, available) = &options[dist.sample(&mut rng)];
        let m = if available.is_empty() {
            match draw(&current, *kind, &mut rng) {
                Some(m) => m,
                None => continue,
            }
        } else {
            *available.choose(&mut rng).expect("non-empty")
        };
        current = apply_move(&current, &m).expect("drawn moves are applicable");
        log.push(m);
    }
    (current, MoveLog(log))
}

/// [`random_equivalent_with`] using [`MoveSet::for_code`].
pub fn random_equivalent(code: &LinkCode, steps: usize, seed: u64) -> (LinkCode, MoveLog) {
    random_equivalent_with(code, steps, seed, MoveSet::for_code(code))
}

/// Applies every move of `log` in order.
pub fn replay(code: &LinkCode, log: &MoveLog) -> Result<LinkCode, MoveError> {
    log.moves().iter().try_fold(code.clone(), |c, m| apply_move(&c, m))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::affine::{affine_indices, link_invariants};
    use crate::codec::{parse, serialize};

    fn apply(code: &str, m: MoveSpec) -> String {
        serialize(&apply_move(&parse(code).unwrap(), &m).unwrap())
    }

    #[test]
    fn r1_on_unknot() {
        let m = MoveSpec::R1Insert { component: 0, gap: 0, id: 1, sign: Sign::Pos, order: KinkOrder::OverFirst };
        assert_eq!(apply("", m), "O1+ U1+");
        assert_eq!(apply("O1+ U1+", MoveSpec::R1Delete { id: 1 }), "");
        let kinked = apply_move(&LinkCode::unknot(), &m).unwrap();
        assert_eq!(link_invariants(&kinked).unwrap(), Default::default());
    }

    #[test]
    fn r1_delete_needs_adjacent_passages() {
        let err = apply_move(&parse("O1+ O2+ U1+ U2+").unwrap(), &MoveSpec::R1Delete { id: 1 }).unwrap_err();
        assert_eq!(err.to_string(), "R1_delete: passages of crossing 1 are not adjacent");
    }

    #[test]
    fn r2_insert_on_virtual_trefoil() {
        let vt = parse("O1+ O2+ U1+ U2+").unwrap();
        let m = MoveSpec::R2Insert {
            over_component: 0,
            over_gap: 0,
            under_component: 0,
            under_gap: 2,
            a: 3,
            b: 4,
            sign: Sign::Pos,
            strands: Strands::Parallel,
        };
        let out = apply_move(&vt, &m).unwrap();
        assert_eq!(serialize(&out), "O3+ O4- O1+ O2+ U3+ U4- U1+ U2+");
        assert_eq!(link_invariants(&out).unwrap(), link_invariants(&vt).unwrap());
        let quads = affine_indices(&out);
        assert_eq!((quads[&3].o, quads[&3].u), (quads[&4].o, quads[&4].u));
        assert_eq!(apply_move(&out, &MoveSpec::R2Delete { a: 3, b: 4 }).unwrap(), vt);
    }

    #[test]
    fn r2_same_gap_puts_over_pair_first() {
        let m = MoveSpec::R2Insert {
            over_component: 0,
            over_gap: 1,
            under_component: 0,
            under_gap: 1,
            a: 2,
            b: 3,
            sign: Sign::Neg,
            strands: Strands::Antiparallel,
        };
        assert_eq!(apply("O1+ U1+", m), "O1+ O2- O3+ U3+ U2- U1+");
    }

    #[test]
    fn r3_both_directions() {
        let a = "O1+ O2+ ; U1+ O3+ ; U2+ U3+";
        let b = apply(a, MoveSpec::R3 { x: 1, y: 2, z: 3 });
        assert_eq!(b, "O2+ O1+ ; O3+ U1+ ; U3+ U2+");
        assert_eq!(apply(&b, MoveSpec::R3 { x: 1, y: 2, z: 3 }), a);
        let neg = "O1- O2- ; U1- O3- ; U2- U3-";
        assert!(apply_move(&parse(neg).unwrap(), &MoveSpec::R3 { x: 1, y: 2, z: 3 }).is_ok());
        let mixed = parse("O1+ O2+ ; U1+ O3- ; U2+ U3-").unwrap();
        assert!(apply_move(&mixed, &MoveSpec::R3 { x: 1, y: 2, z: 3 }).is_err());
    }

    #[test]
    fn t1_insert_and_delete() {
        let m = MoveSpec::T1Insert { component: 0, gap: 2 };
        assert_eq!(apply("O1+ U1+", m), "O1+ U1+ | |");
        assert_eq!(apply("O1+ U1+ | |", MoveSpec::T1Delete { component: 0, index: 2 }), "O1+ U1+");
        assert_eq!(apply("| O1+ U1+ |", MoveSpec::T1Delete { component: 0, index: 3 }), "O1+ U1+");
    }

    #[test]
    fn t3_moves_bars_across_crossing() {
        let out = apply("| O1+ O2+ | U1+ U2+", MoveSpec::T3 { id: 1, side: BarSide::Before });
        assert_eq!(out, "U1+ | O2+ O1+ | U2+");
        let back = apply(&out, MoveSpec::T3 { id: 1, side: BarSide::After });
        assert_eq!(back, "| O1+ O2+ | U1+ U2+");
        let wrapped = "O1+ O2+ | U1+ U2+ |";
        let there = apply(wrapped, MoveSpec::T3 { id: 1, side: BarSide::Before });
        let back = apply(&there, MoveSpec::T3 { id: 1, side: BarSide::After });
        assert_eq!(apply(&back, MoveSpec::Rotate { component: 0, by: 1 }), wrapped);
        let err = apply_move(&parse("O1+ U1+").unwrap(), &MoveSpec::T3 { id: 1, side: BarSide::Before }).unwrap_err();
        assert!(err.to_string().starts_with("T3: bars do not precede"));
    }

    #[test]
    fn relabel_swaps_or_renames() {
        assert_eq!(apply("O1+ O2- U1+ U2-", MoveSpec::Relabel { a: 1, b: 2 }), "O2+ O1- U2+ U1-");
        assert_eq!(apply("O1+ U1+", MoveSpec::Relabel { a: 1, b: 9 }), "O9+ U9+");
    }

    #[test]
    fn log_round_trip() {
        let vt = parse("O1+ O2+ U1+ U2+ |").unwrap();
        let (out, log) = random_equivalent(&vt, 60, 3);
        let text = log.to_string();
        let parsed: MoveLog = text.parse().unwrap();
        assert_eq!(parsed, log);
        assert_eq!(replay(&vt, &parsed).unwrap(), out);
    }

    #[test]
    fn random_walk_is_deterministic() {
        let vt = parse("O1+ O2+ U1+ U2+").unwrap();
        assert_eq!(random_equivalent(&vt, 0, 5).0, vt);
        assert_eq!(random_equivalent(&vt, 50, 7), random_equivalent(&vt, 50, 7));
        let (out, log) = random_equivalent(&vt, 50, 7);
        assert_eq!(log.len(), 50);
        assert!(!out.has_bars());
        assert_eq!(link_invariants(&out).unwrap(), link_invariants(&vt).unwrap());
    }

    #[test]
    fn unknown_move_is_a_parse_error() {
        assert!("R4 x=1".parse::<MoveSpec>().is_err());
        assert!("R1_delete".parse::<MoveSpec>().is_err());
    }
}
