//! Decorated Gauss codes: the diagram model shared by every other module.
//!
//! A [`LinkCode`] is an ordered list of components. Each component is a cyclic
//! sequence of [`Token`]s: crossing passages (over or under), bars, and
//! oriented cut points. Crossing signs live in a separate map so that both
//! passages of a crossing agree by construction.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use thiserror::Error;

pub type CrossingId = u32;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Role {
    Over,
    Under,
}

impl Role {
    pub fn flip(self) -> Self {
        match self {
            Role::Over => Role::Under,
            Role::Under => Role::Over,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Sign {
    Neg,
    Pos,
}

impl Sign {
    pub fn value(self) -> i64 {
        match self {
            Sign::Pos => 1,
            Sign::Neg => -1,
        }
    }

    pub fn from_value(v: i64) -> Option<Self> {
        match v {
            1 => Some(Sign::Pos),
            -1 => Some(Sign::Neg),
            _ => None,
        }
    }
}

impl std::ops::Neg for Sign {
    type Output = Sign;
    fn neg(self) -> Sign {
        match self {
            Sign::Pos => Sign::Neg,
            Sign::Neg => Sign::Pos,
        }
    }
}

impl std::ops::Mul for Sign {
    type Output = Sign;
    fn mul(self, rhs: Sign) -> Sign {
        if self == rhs { Sign::Pos } else { Sign::Neg }
    }
}

/// Direction of an oriented cut point, relative to the traversal direction.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum CutDir {
    /// Coherent: the cut point agrees with the orientation (`>`).
    Along,
    /// Incoherent (`<`).
    Against,
}

impl CutDir {
    pub fn flip(self) -> Self {
        match self {
            CutDir::Along => CutDir::Against,
            CutDir::Against => CutDir::Along,
        }
    }

    /// The jump of an Alexander numbering across this cut point.
    pub fn jump(self) -> i64 {
        match self {
            CutDir::Along => 1,
            CutDir::Against => -1,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Passage {
    pub role: Role,
    pub crossing: CrossingId,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Token {
    Passage(Passage),
    Bar,
    Cut(CutDir),
}

impl Token {
    pub fn over(c: CrossingId) -> Self {
        Token::Passage(Passage { role: Role::Over, crossing: c })
    }

    pub fn under(c: CrossingId) -> Self {
        Token::Passage(Passage { role: Role::Under, crossing: c })
    }

    pub fn passage(&self) -> Option<Passage> {
        match self {
            Token::Passage(p) => Some(*p),
            _ => None,
        }
    }

    pub fn is_bar(&self) -> bool {
        matches!(self, Token::Bar)
    }

    pub fn cut(&self) -> Option<CutDir> {
        match self {
            Token::Cut(d) => Some(*d),
            _ => None,
        }
    }
}

/// Location of a token: component index and position inside the component.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Site {
    pub component: usize,
    pub index: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    ZeroId,
    DuplicateRole { crossing: CrossingId, role: Role },
    MissingRole { crossing: CrossingId, role: Role },
    SignMismatch { crossing: CrossingId },
    MissingSign { crossing: CrossingId },
    UnusedSign { crossing: CrossingId },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let role_name = |r: &Role| match r {
            Role::Over => "Over",
            Role::Under => "Under",
        };
        match self {
            Violation::ZeroId => write!(f, "crossing id 0 is not allowed"),
            Violation::DuplicateRole { crossing, role } => {
                write!(f, "crossing {crossing} has two {} passages", role_name(role))
            }
            Violation::MissingRole { crossing, role } => {
                write!(f, "crossing {crossing} has no {} passage", role_name(role))
            }
            Violation::SignMismatch { crossing } => write!(f, "sign mismatch at crossing {crossing}"),
            Violation::MissingSign { crossing } => write!(f, "crossing {crossing} has no sign"),
            Violation::UnusedSign { crossing } => {
                write!(f, "sign given for crossing {crossing} which does not occur")
            }
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_ok(&self) -> bool {
        self.violations.is_empty()
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_ok() {
            return write!(f, "ok");
        }
        let msgs: Vec<String> = self.violations.iter().map(|v| v.to_string()).collect();
        write!(f, "{}", msgs.join("; "))
    }
}

impl std::error::Error for ValidationReport {}

/// Checks the structural rules of a decorated Gauss code.
pub fn validate(components: &[Vec<Token>], signs: &BTreeMap<CrossingId, Sign>) -> ValidationReport {
    let mut violations = Vec::new();
    let mut seen: BTreeMap<CrossingId, (u32, u32)> = BTreeMap::new();
    for p in components.iter().flatten().filter_map(Token::passage) {
        let e = seen.entry(p.crossing).or_default();
        match p.role {
            Role::Over => e.0 += 1,
            Role::Under => e.1 += 1,
        }
    }
    for (&c, &(o, u)) in &seen {
        if c == 0 {
            violations.push(Violation::ZeroId);
        }
        for (role, n) in [(Role::Over, o), (Role::Under, u)] {
            if n == 0 {
                violations.push(Violation::MissingRole { crossing: c, role });
            } else if n > 1 {
                violations.push(Violation::DuplicateRole { crossing: c, role });
            }
        }
        if !signs.contains_key(&c) {
            violations.push(Violation::MissingSign { crossing: c });
        }
    }
    for c in signs.keys() {
        if !seen.contains_key(c) {
            violations.push(Violation::UnusedSign { crossing: *c });
        }
    }
    ValidationReport { violations }
}

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum CodeError {
    #[error("crossing {0} does not occur in the code")]
    UnknownCrossing(CrossingId),
    #[error("nonself crossing has no counting components")]
    NonselfCrossing(CrossingId),
    #[error("knot invariant on non-knot code")]
    NotAKnot,
    #[error("code carries bars; this invariant is defined for bar-free codes only")]
    HasBars,
    #[error("code carries cut points; expected a cut-free code")]
    HasCuts,
    #[error("canonical form supports at most {max} components, got {got}")]
    TooManyComponents { max: usize, got: usize },
    #[error("invalid code: {0}")]
    Invalid(ValidationReport),
}

/// An ordered collection of cyclic token sequences together with crossing signs.
///
/// Values are always valid: every crossing id occurs exactly once as an over
/// passage and once as an under passage, and carries exactly one sign.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct LinkCode {
    components: Vec<Vec<Token>>,
    signs: BTreeMap<CrossingId, Sign>,
}

impl LinkCode {
    pub fn new(components: Vec<Vec<Token>>, signs: BTreeMap<CrossingId, Sign>) -> Result<Self, ValidationReport> {
        let report = validate(&components, &signs);
        if report.is_ok() {
            Ok(LinkCode { components, signs })
        } else {
            Err(report)
        }
    }

    /// Builds a code whose validity the caller guarantees.
    pub(crate) fn from_parts(components: Vec<Vec<Token>>, signs: BTreeMap<CrossingId, Sign>) -> Self {
        debug_assert!(validate(&components, &signs).is_ok(), "{}", validate(&components, &signs));
        LinkCode { components, signs }
    }

    pub fn unknot() -> Self {
        LinkCode { components: vec![vec![]], signs: BTreeMap::new() }
    }

    pub fn components(&self) -> &[Vec<Token>] {
        &self.components
    }

    pub fn component(&self, i: usize) -> &[Token] {
        &self.components[i]
    }

    pub fn num_components(&self) -> usize {
        self.components.len()
    }

    pub fn is_knot(&self) -> bool {
        self.components.len() == 1
    }

    pub fn signs(&self) -> &BTreeMap<CrossingId, Sign> {
        &self.signs
    }

    pub fn sign(&self, c: CrossingId) -> Sign {
        self.signs[&c]
    }

    pub fn crossings(&self) -> impl Iterator<Item = CrossingId> + '_ {
        self.signs.keys().copied()
    }

    pub fn num_crossings(&self) -> usize {
        self.signs.len()
    }

    pub fn contains_crossing(&self, c: CrossingId) -> bool {
        self.signs.contains_key(&c)
    }

    pub fn bar_count(&self) -> usize {
        self.tokens().filter(|t| t.is_bar()).count()
    }

    pub fn component_bar_count(&self, i: usize) -> usize {
        self.components[i].iter().filter(|t| t.is_bar()).count()
    }

    pub fn has_bars(&self) -> bool {
        self.tokens().any(|t| t.is_bar())
    }

    pub fn has_cuts(&self) -> bool {
        self.tokens().any(|t| t.cut().is_some())
    }

    pub fn tokens(&self) -> impl Iterator<Item = &Token> + '_ {
        self.components.iter().flatten()
    }

    /// Smallest crossing id not yet in use.
    pub fn fresh_id(&self) -> CrossingId {
        self.signs.keys().next_back().map_or(1, |m| m + 1)
    }

    pub fn into_parts(self) -> (Vec<Vec<Token>>, BTreeMap<CrossingId, Sign>) {
        (self.components, self.signs)
    }

    /// Positions of the over and under passages of `c`.
    pub fn locate(&self, c: CrossingId) -> Result<(Site, Site), CodeError> {
        let mut over = None;
        let mut under = None;
        for (ci, comp) in self.components.iter().enumerate() {
            for (k, t) in comp.iter().enumerate() {
                if let Some(p) = t.passage() {
                    if p.crossing == c {
                        let site = Site { component: ci, index: k };
                        match p.role {
                            Role::Over => over = Some(site),
                            Role::Under => under = Some(site),
                        }
                    }
                }
            }
        }
        match (over, under) {
            (Some(o), Some(u)) => Ok((o, u)),
            _ => Err(CodeError::UnknownCrossing(c)),
        }
    }

    /// All passage positions, keyed by crossing.
    pub fn passage_sites(&self) -> BTreeMap<CrossingId, (Site, Site)> {
        let mut acc: BTreeMap<CrossingId, (Option<Site>, Option<Site>)> = BTreeMap::new();
        for (ci, comp) in self.components.iter().enumerate() {
            for (k, t) in comp.iter().enumerate() {
                if let Some(p) = t.passage() {
                    let e = acc.entry(p.crossing).or_default();
                    let site = Some(Site { component: ci, index: k });
                    match p.role {
                        Role::Over => e.0 = site,
                        Role::Under => e.1 = site,
                    }
                }
            }
        }
        acc.into_iter()
            .map(|(c, (o, u))| (c, (o.expect("valid code"), u.expect("valid code"))))
            .collect()
    }

    pub fn self_crossings(&self) -> SelfCrossingSet {
        SelfCrossingSet::of(self)
    }

    /// Component index carrying both passages of `c`, if `c` is a self-crossing.
    pub fn self_component(&self, c: CrossingId) -> Result<usize, CodeError> {
        let (o, u) = self.locate(c)?;
        if o.component == u.component {
            Ok(o.component)
        } else {
            Err(CodeError::NonselfCrossing(c))
        }
    }

    /// The two counting arcs at a self-crossing: tokens strictly between the
    /// over and the under passage, and strictly between the under and the over
    /// passage, in traversal order.
    pub fn counting_arcs(&self, c: CrossingId) -> Result<(CountingArc, CountingArc), CodeError> {
        let (o, u) = self.locate(c)?;
        if o.component != u.component {
            return Err(CodeError::NonselfCrossing(c));
        }
        let comp = &self.components[o.component];
        Ok((cyclic_between(comp, o.index, u.index), cyclic_between(comp, u.index, o.index)))
    }

    /// Same code with every crossing sign reversed.
    pub fn sign_reversed(&self) -> LinkCode {
        let signs = self.signs.iter().map(|(&c, &s)| (c, -s)).collect();
        LinkCode { components: self.components.clone(), signs }
    }

    /// Drops every token for which `keep` is false; passages are always kept.
    pub fn retain_decorations(&self, keep: impl Fn(&Token) -> bool) -> LinkCode {
        let components = self
            .components
            .iter()
            .map(|comp| comp.iter().filter(|t| t.passage().is_some() || keep(t)).copied().collect())
            .collect();
        LinkCode { components, signs: self.signs.clone() }
    }

    pub fn without_cuts(&self) -> LinkCode {
        self.retain_decorations(|t| t.cut().is_none())
    }

    pub fn without_bars(&self) -> LinkCode {
        self.retain_decorations(|t| !t.is_bar())
    }
}

fn cyclic_between(comp: &[Token], from: usize, to: usize) -> CountingArc {
    let n = comp.len();
    let len = (to + n - from - 1) % n;
    CountingArc((1..=len).map(|k| comp[(from + k) % n]).collect())
}

/// Tokens met along one counting component of a smoothed self-crossing.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct CountingArc(pub Vec<Token>);

impl CountingArc {
    pub fn tokens(&self) -> &[Token] {
        &self.0
    }

    pub fn passages(&self) -> impl Iterator<Item = Passage> + '_ {
        self.0.iter().filter_map(Token::passage)
    }

    pub fn bar_count(&self) -> usize {
        self.0.iter().filter(|t| t.is_bar()).count()
    }

    pub fn cuts(&self) -> impl Iterator<Item = CutDir> + '_ {
        self.0.iter().filter_map(Token::cut)
    }
}

/// Crossings whose over and under passages lie on the same component.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct SelfCrossingSet {
    by_component: Vec<BTreeSet<CrossingId>>,
}

impl SelfCrossingSet {
    pub fn of(code: &LinkCode) -> Self {
        let mut by_component = vec![BTreeSet::new(); code.num_components()];
        for (c, (o, u)) in code.passage_sites() {
            if o.component == u.component {
                by_component[o.component].insert(c);
            }
        }
        SelfCrossingSet { by_component }
    }

    pub fn contains(&self, c: CrossingId) -> bool {
        self.by_component.iter().any(|s| s.contains(&c))
    }

    /// Self-crossings of component `i`.
    pub fn on_component(&self, i: usize) -> &BTreeSet<CrossingId> {
        &self.by_component[i]
    }

    pub fn iter(&self) -> impl Iterator<Item = CrossingId> + '_ {
        let mut all: Vec<CrossingId> = self.by_component.iter().flatten().copied().collect();
        all.sort_unstable();
        all.into_iter()
    }

    pub fn len(&self) -> usize {
        self.by_component.iter().map(|s| s.len()).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

impl From<Vec<Token>> for CountingArc {
    fn from(v: Vec<Token>) -> Self {
        CountingArc(v)
    }
}
