//! Security labels: the lattice interface, three concrete instances, and
//! executable checks of the lattice laws over finite label domains.

use std::collections::BTreeSet;
use std::fmt;

use thiserror::Error;

/// A security label drawn from a bounded lattice.
///
/// `can_flow_to` is the partial order: `a.can_flow_to(b)` means data at `a`
/// may influence a sink at `b`. `join` and `meet` are least upper bound and
/// greatest lower bound, `bottom` is the least element. Implementations must
/// satisfy the laws checked by [`check_laws`].
///
/// `render` must be canonical: equal labels render to identical text, so
/// structural equality of rendered programs and databases coincides with
/// label equality.
pub trait Label: Clone + Eq + fmt::Debug + Send + Sync + 'static {
    fn can_flow_to(&self, other: &Self) -> bool;
    fn join(&self, other: &Self) -> Self;
    fn meet(&self, other: &Self) -> Self;
    fn bottom() -> Self;
    fn render(&self) -> String;
    fn parse(text: &str) -> Result<Self, LabelParseError>;
}

/// Lattices with a greatest element.
///
/// The dual integrity ordering of [`ConfIntegLabel`] needs an inner top to
/// produce its own bottom, so the pair instance is only available over
/// lattices that expose one.
pub trait HasTop: Label {
    fn top() -> Self;
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("invalid label `{input}`: {reason}")]
pub struct LabelParseError {
    pub input: String,
    pub reason: String,
}

impl LabelParseError {
    fn new(input: &str, reason: impl Into<String>) -> Self {
        LabelParseError { input: input.to_string(), reason: reason.into() }
    }
}

/// The two-point lattice: `public` below `secret`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum TwoPointLabel {
    Public,
    Secret,
}

impl Label for TwoPointLabel {
    fn can_flow_to(&self, other: &Self) -> bool {
        !(matches!(self, TwoPointLabel::Secret) && matches!(other, TwoPointLabel::Public))
    }

    fn join(&self, other: &Self) -> Self {
        if *self == TwoPointLabel::Secret || *other == TwoPointLabel::Secret {
            TwoPointLabel::Secret
        } else {
            TwoPointLabel::Public
        }
    }

    fn meet(&self, other: &Self) -> Self {
        if *self == TwoPointLabel::Public || *other == TwoPointLabel::Public {
            TwoPointLabel::Public
        } else {
            TwoPointLabel::Secret
        }
    }

    fn bottom() -> Self {
        TwoPointLabel::Public
    }

    fn render(&self) -> String {
        match self {
            TwoPointLabel::Public => "public".to_string(),
            TwoPointLabel::Secret => "secret".to_string(),
        }
    }

    fn parse(text: &str) -> Result<Self, LabelParseError> {
        match text {
            "public" => Ok(TwoPointLabel::Public),
            "secret" => Ok(TwoPointLabel::Secret),
            _ => Err(LabelParseError::new(text, "expected `public` or `secret`")),
        }
    }
}

impl HasTop for TwoPointLabel {
    fn top() -> Self {
        TwoPointLabel::Secret
    }
}

/// Finite sets of principal names ordered by inclusion: join is union, meet
/// is intersection, bottom is the empty set. The `BTreeSet` representation is
/// canonical (sorted, deduplicated), so structural equality is set equality.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct PowersetLabel {
    principals: BTreeSet<String>,
}

impl PowersetLabel {
    pub fn empty() -> Self {
        PowersetLabel::default()
    }

    pub fn from_names<I, S>(names: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        PowersetLabel { principals: names.into_iter().map(Into::into).collect() }
    }

    /// The full set over a declared universe; the top element of the
    /// powerset lattice restricted to that universe.
    pub fn full(universe: &[String]) -> Self {
        PowersetLabel::from_names(universe.iter().cloned())
    }

    pub fn principals(&self) -> impl Iterator<Item = &str> {
        self.principals.iter().map(String::as_str)
    }

    pub fn is_subset_of_universe(&self, universe: &[String]) -> bool {
        self.principals.iter().all(|p| universe.iter().any(|u| u == p))
    }

    /// All `2^n` subsets of the given universe, in a fixed order.
    pub fn all_subsets(universe: &[String]) -> Vec<PowersetLabel> {
        let n = universe.len();
        assert!(n <= 16, "powerset universe too large to enumerate");
        (0u32..1 << n)
            .map(|mask| {
                PowersetLabel::from_names(
                    universe.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, p)| p.clone()),
                )
            })
            .collect()
    }
}

impl Label for PowersetLabel {
    fn can_flow_to(&self, other: &Self) -> bool {
        self.principals.is_subset(&other.principals)
    }

    fn join(&self, other: &Self) -> Self {
        PowersetLabel { principals: self.principals.union(&other.principals).cloned().collect() }
    }

    fn meet(&self, other: &Self) -> Self {
        PowersetLabel { principals: self.principals.intersection(&other.principals).cloned().collect() }
    }

    fn bottom() -> Self {
        PowersetLabel::empty()
    }

    fn render(&self) -> String {
        let mut out = String::from("{");
        for (i, p) in self.principals.iter().enumerate() {
            if i > 0 {
                out.push(',');
            }
            out.push_str(p);
        }
        out.push('}');
        out
    }

    fn parse(text: &str) -> Result<Self, LabelParseError> {
        let inner = text
            .strip_prefix('{')
            .and_then(|t| t.strip_suffix('}'))
            .ok_or_else(|| LabelParseError::new(text, "expected `{A,B,...}`"))?;
        if inner.is_empty() {
            return Ok(PowersetLabel::empty());
        }
        let mut principals = BTreeSet::new();
        for part in inner.split(',') {
            if part.is_empty() {
                return Err(LabelParseError::new(text, "empty principal name"));
            }
            if part.contains(|c: char| c.is_whitespace() || "{}<>,".contains(c)) {
                return Err(LabelParseError::new(text, format!("bad principal name `{part}`")));
            }
            principals.insert(part.to_string());
        }
        Ok(PowersetLabel { principals })
    }
}

/// A confidentiality/integrity pair. The confidentiality component is
/// ordered normally and the integrity component dually: `<c1,i1>` flows to
/// `<c2,i2>` iff `c1 ⊑ c2` and `i2 ⊑ i1`. Bottom is `<⊥, ⊤>`, which is why
/// the inner lattice must provide a top element.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ConfIntegLabel<L> {
    pub conf: L,
    pub integ: L,
}

impl<L> ConfIntegLabel<L> {
    pub fn new(conf: L, integ: L) -> Self {
        ConfIntegLabel { conf, integ }
    }
}

impl<L: Label + HasTop> Label for ConfIntegLabel<L> {
    fn can_flow_to(&self, other: &Self) -> bool {
        self.conf.can_flow_to(&other.conf) && other.integ.can_flow_to(&self.integ)
    }

    fn join(&self, other: &Self) -> Self {
        ConfIntegLabel { conf: self.conf.join(&other.conf), integ: self.integ.meet(&other.integ) }
    }

    fn meet(&self, other: &Self) -> Self {
        ConfIntegLabel { conf: self.conf.meet(&other.conf), integ: self.integ.join(&other.integ) }
    }

    fn bottom() -> Self {
        ConfIntegLabel { conf: L::bottom(), integ: L::top() }
    }

    fn render(&self) -> String {
        format!("<{},{}>", self.conf.render(), self.integ.render())
    }

    fn parse(text: &str) -> Result<Self, LabelParseError> {
        let inner = text
            .strip_prefix('<')
            .and_then(|t| t.strip_suffix('>'))
            .ok_or_else(|| LabelParseError::new(text, "expected `<CONF,INTEG>`"))?;
        // Split at the comma that sits at nesting depth zero.
        let mut depth = 0usize;
        let mut split = None;
        for (i, c) in inner.char_indices() {
            match c {
                '<' | '{' => depth += 1,
                '>' | '}' => depth = depth.saturating_sub(1),
                ',' if depth == 0 => {
                    split = Some(i);
                    break;
                }
                _ => {}
            }
        }
        let at = split.ok_or_else(|| LabelParseError::new(text, "missing `,` between components"))?;
        let conf = L::parse(&inner[..at])?;
        let integ = L::parse(&inner[at + 1..])?;
        Ok(ConfIntegLabel { conf, integ })
    }
}

impl<L: Label + HasTop> HasTop for ConfIntegLabel<L> {
    fn top() -> Self {
        ConfIntegLabel { conf: L::top(), integ: L::bottom() }
    }
}

/// The lattice laws, as named checks.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LatticeLaw {
    Bottom,
    FlowReflexivity,
    FlowAntisymmetry,
    FlowTransitivity,
    Meet,
    Join,
    CanNotFlowToJoin,
    JoinIff,
}

impl LatticeLaw {
    pub fn name(&self) -> &'static str {
        match self {
            LatticeLaw::Bottom => "lawBot",
            LatticeLaw::FlowReflexivity => "lawFlowReflexivity",
            LatticeLaw::FlowAntisymmetry => "lawFlowAntisymmetry",
            LatticeLaw::FlowTransitivity => "lawFlowTransitivity",
            LatticeLaw::Meet => "lawMeet",
            LatticeLaw::Join => "lawJoin",
            LatticeLaw::CanNotFlowToJoin => "canNotFlowToJoin",
            LatticeLaw::JoinIff => "joinIff",
        }
    }
}

impl fmt::Display for LatticeLaw {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// A law violation together with the labels that witness it.
#[derive(Debug, Clone)]
pub struct LawViolation {
    pub law: LatticeLaw,
    pub witness: Vec<String>,
}

impl fmt::Display for LawViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} violated at ({})", self.law, self.witness.join(", "))
    }
}

/// Result of exhaustively checking the lattice laws over a finite domain.
#[derive(Debug, Clone)]
pub struct LawReport {
    /// Size of the domain after closure under join/meet (bottom included).
    pub domain_size: usize,
    /// Number of triples each triple-quantified law was checked on.
    pub triples_per_law: u64,
    /// Number of quadruples each of lawMeet/lawJoin was checked on.
    pub quadruples_per_law: u64,
    pub violations: Vec<LawViolation>,
}

impl LawReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Close a label sample under join and meet, adding the bottom element.
/// Iteration is capped so that a broken instance cannot loop forever.
pub fn close_under_ops<L: Label>(domain: &[L]) -> Vec<L> {
    let mut out: Vec<L> = vec![L::bottom()];
    for l in domain {
        if !out.contains(l) {
            out.push(l.clone());
        }
    }
    loop {
        let snapshot = out.clone();
        let mut added = false;
        for a in &snapshot {
            for b in &snapshot {
                for c in [a.join(b), a.meet(b)] {
                    if !out.contains(&c) {
                        out.push(c);
                        added = true;
                    }
                }
            }
        }
        if !added || out.len() > 4096 {
            break;
        }
    }
    out
}

const MAX_VIOLATIONS: usize = 64;

/// Exhaustively evaluate every lattice law over the closure of `domain`,
/// reporting each violated law with a witness tuple. Violations are data,
/// not errors: a broken instance yields a report, never a panic.
pub fn check_laws<L: Label>(domain: &[L]) -> LawReport {
    let d = close_under_ops(domain);
    let n = d.len() as u64;
    let mut violations: Vec<LawViolation> = Vec::new();
    let mut record = |law: LatticeLaw, witness: &[&L]| {
        if violations.len() < MAX_VIOLATIONS {
            violations.push(LawViolation { law, witness: witness.iter().map(|l| l.render()).collect() });
        }
    };

    let bot = L::bottom();
    for l in &d {
        if !bot.can_flow_to(l) {
            record(LatticeLaw::Bottom, &[l]);
        }
        if !l.can_flow_to(l) {
            record(LatticeLaw::FlowReflexivity, &[l]);
        }
    }
    for l1 in &d {
        for l2 in &d {
            if l1.can_flow_to(l2) && l2.can_flow_to(l1) && l1 != l2 {
                record(LatticeLaw::FlowAntisymmetry, &[l1, l2]);
            }
        }
    }
    for l1 in &d {
        for l2 in &d {
            for l3 in &d {
                if l1.can_flow_to(l2) && l2.can_flow_to(l3) && !l1.can_flow_to(l3) {
                    record(LatticeLaw::FlowTransitivity, &[l1, l2, l3]);
                }
                if !l1.can_flow_to(l3) && l1.join(l2).can_flow_to(l3) {
                    record(LatticeLaw::CanNotFlowToJoin, &[l1, l2, l3]);
                }
                let both = l1.can_flow_to(l3) && l2.can_flow_to(l3);
                if both != l1.join(l2).can_flow_to(l3) {
                    record(LatticeLaw::JoinIff, &[l1, l2, l3]);
                }
            }
        }
    }
    for z in &d {
        for l1 in &d {
            for l2 in &d {
                for l in &d {
                    if *z == l1.meet(l2) {
                        let lb = z.can_flow_to(l1) && z.can_flow_to(l2);
                        let greatest = !(l.can_flow_to(l1) && l.can_flow_to(l2)) || l.can_flow_to(z);
                        if !(lb && greatest) {
                            record(LatticeLaw::Meet, &[z, l1, l2, l]);
                        }
                    }
                    if *z == l1.join(l2) {
                        let ub = l1.can_flow_to(z) && l2.can_flow_to(z);
                        let least = !(l1.can_flow_to(l) && l2.can_flow_to(l)) || z.can_flow_to(l);
                        if !(ub && least) {
                            record(LatticeLaw::Join, &[z, l1, l2, l]);
                        }
                    }
                }
            }
        }
    }

    LawReport {
        domain_size: d.len(),
        triples_per_law: n * n * n,
        quadruples_per_law: n * n * n * n,
        violations,
    }
}
