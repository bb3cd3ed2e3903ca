//! The instance file format: TOML with sparse tables.
//!
//! Blocks are resolved in a fixed order (algebra, lie_rinehart, action,
//! connection, generator, twilled, element, bracket, bialgebra) and may
//! only refer to blocks of an earlier kind. Every coefficient is either a
//! TOML integer or a string `"p/q"`. Tables list nonzero entries only;
//! repeated entries are added.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use lierine_core::basis::BasisSet;
use lierine_core::bialg::DualPair;
use lierine_core::exactla::{format_rat, parse_rat};
use lierine_core::gerst::{GeneratorOp, Multivector, TopConnection};
use lierine_core::twilled::{AlmostTwilled, BigradedElement};
use lierine_core::{AElem, CommAlg, Derivation, FreeElem, LRModule, LieRinehart, Rat};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

/// A parse or resolution failure with its location.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseError {
    /// Field path such as `lie_rinehart[0].bracket[2].k`, or empty when the
    /// TOML layer already reported a line and column.
    pub location: String,
    pub message: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.location.is_empty() {
            write!(f, "{}", self.message)
        } else {
            write!(f, "{}: {}", self.location, self.message)
        }
    }
}

impl std::error::Error for ParseError {}

fn err<T>(location: impl Into<String>, message: impl Into<String>) -> Result<T, ParseError> {
    Err(ParseError { location: location.into(), message: message.into() })
}

/// A rational coefficient: an integer or a `"p/q"` string.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Coeff(pub Rat);

impl Serialize for Coeff {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let text = format_rat(&self.0);
        match text.parse::<i64>() {
            Ok(n) => s.serialize_i64(n),
            Err(_) => s.serialize_str(&text),
        }
    }
}

impl<'de> Deserialize<'de> for Coeff {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Lit {
            Int(i64),
            Text(String),
        }
        match Lit::deserialize(d).map_err(|_| serde::de::Error::custom("expected an integer or a \"p/q\" string"))? {
            Lit::Int(n) => Ok(Coeff(Rat::from_integer(n.into()))),
            Lit::Text(s) => {
                parse_rat(&s).map(Coeff).map_err(|_| serde::de::Error::custom(format!("malformed rational {s:?}")))
            }
        }
    }
}

#[derive(Serialize, Deserialize, Debug, Clone, Default, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct RawFile {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub algebra: Option<RawAlgebra>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub lie_rinehart: Vec<RawLieRinehart>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub action: Vec<RawAction>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub connection: Vec<RawConnection>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub generator: Vec<RawGenerator>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub twilled: Vec<RawTwilled>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub element: Vec<RawElement>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub bracket: Vec<RawBracket>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub bialgebra: Vec<RawBialgebra>,
}

#[derive(Serialize, Deserialize, Debug, Clone, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct RawAlgebra {
    pub dim: usize,
    pub unit: Vec<Coeff>,
    /// `e_i e_j = value`, both orders listed.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub mult: Vec<MultEntry>,
}

#[derive(Serialize, Deserialize, Debug, Clone, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct MultEntry {
    pub i: usize,
    pub j: usize,
    pub value: Vec<Coeff>,
}

#[derive(Serialize, Deserialize, Debug, Clone, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct RawLieRinehart {
    pub name: String,
    pub rank: usize,
    /// `[e_i, e_j]_k += value` and `[e_j, e_i]_k -= value`.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub bracket: Vec<BracketEntry>,
    /// `[e_i, e_j]_k += value`, with no antisymmetric partner.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub bracket_raw: Vec<BracketEntry>,
    /// `ρ(e_i)(a_basis) = value`.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub anchor: Vec<AnchorEntry>,
}

#[derive(Serialize, Deserialize, Debug, Clone, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct BracketEntry {
    pub i: usize,
    pub j: usize,
    pub k: usize,
    pub value: Vec<Coeff>,
}

#[derive(Serialize, Deserialize, Debug, Clone, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct AnchorEntry {
    pub i: usize,
    pub basis: usize,
    pub value: Vec<Coeff>,
}

#[derive(Serialize, Deserialize, Debug, Clone, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct RawAction {
    pub name: String,
    pub source: String,
    /// Name of the Lie-Rinehart algebra whose underlying module is acted on.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub target: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rank: Option<usize>,
    /// `(e_i · m_j)_k = value`.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub table: Vec<BracketEntry>,
}

#[derive(Serialize, Deserialize, Debug, Clone, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct RawConnection {
    pub name: String,
    pub source: String,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub omega: Vec<OmegaEntry>,
}

#[derive(Serialize, Deserialize, Debug, Clone, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct OmegaEntry {
    pub i: usize,
    pub value: Vec<Coeff>,
}

#[derive(Serialize, Deserialize, Debug, Clone, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct RawGenerator {
    pub name: String,
    pub of: String,
    /// Coefficient of `e_t` in `Δ(a_alpha e_s)`.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub table: Vec<GeneratorEntry>,
}

#[derive(Serialize, Deserialize, Debug, Clone, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct GeneratorEntry {
    pub alpha: usize,
    pub s: Vec<usize>,
    pub t: Vec<usize>,
    pub value: Vec<Coeff>,
}

#[derive(Serialize, Deserialize, Debug, Clone, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct RawTwilled {
    pub name: String,
    pub lprime: String,
    pub lsecond: String,
    pub act_p_on_s: String,
    pub act_s_on_p: String,
    /// A connection on `L'` used by `generator weak-dbv`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub connection: Option<String>,
}

#[derive(Serialize, Deserialize, Debug, Clone, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct RawElement {
    pub name: String,
    pub of: String,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub terms: Vec<TermEntry>,
}

#[derive(Serialize, Deserialize, Debug, Clone, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct TermEntry {
    /// External `L''` indices, only for elements of a twilled block.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub form: Vec<usize>,
    pub s: Vec<usize>,
    pub value: Vec<Coeff>,
}

#[derive(Serialize, Deserialize, Debug, Clone, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct RawBracket {
    pub name: String,
    pub left: String,
    pub right: String,
}

#[derive(Serialize, Deserialize, Debug, Clone, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct RawBialgebra {
    pub name: String,
    pub l: String,
    pub d: String,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NamedLr {
    pub name: String,
    pub lr: LieRinehart,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NamedAction {
    pub name: String,
    pub source: String,
    pub target: Option<String>,
    pub module: LRModule,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NamedConnection {
    pub name: String,
    pub source: String,
    pub connection: TopConnection,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NamedGenerator {
    pub name: String,
    pub of: String,
    pub op: GeneratorOp,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NamedTwilled {
    pub name: String,
    pub lprime: String,
    pub lsecond: String,
    pub act_p_on_s: String,
    pub act_s_on_p: String,
    pub connection: Option<String>,
    pub t: AlmostTwilled,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ElementValue {
    Multivector(Multivector),
    Bigraded(BigradedElement),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NamedElement {
    pub name: String,
    pub of: String,
    pub value: ElementValue,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BracketQuery {
    pub name: String,
    pub left: String,
    pub right: String,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NamedBialgebra {
    pub name: String,
    pub l: String,
    pub d: String,
    pub pair: DualPair,
}

/// A fully resolved instance file.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InstanceSet {
    pub algebra: CommAlg,
    pub lie_rinehart: Vec<NamedLr>,
    pub actions: Vec<NamedAction>,
    pub connections: Vec<NamedConnection>,
    pub generators: Vec<NamedGenerator>,
    pub twilled: Vec<NamedTwilled>,
    pub elements: Vec<NamedElement>,
    pub brackets: Vec<BracketQuery>,
    pub bialgebras: Vec<NamedBialgebra>,
}

/// What a name refers to.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Kind {
    LieRinehart,
    Action,
    Connection,
    Generator,
    Twilled,
    Element,
    Bracket,
    Bialgebra,
}

impl Kind {
    pub fn label(self) -> &'static str {
        match self {
            Kind::LieRinehart => "lie_rinehart",
            Kind::Action => "action",
            Kind::Connection => "connection",
            Kind::Generator => "generator",
            Kind::Twilled => "twilled",
            Kind::Element => "element",
            Kind::Bracket => "bracket",
            Kind::Bialgebra => "bialgebra",
        }
    }
}

impl InstanceSet {
    pub fn lr(&self, name: &str) -> Option<&LieRinehart> {
        self.lie_rinehart.iter().find(|x| x.name == name).map(|x| &x.lr)
    }

    pub fn kind_of(&self, name: &str) -> Option<Kind> {
        let checks: [(Kind, bool); 8] = [
            (Kind::LieRinehart, self.lie_rinehart.iter().any(|x| x.name == name)),
            (Kind::Action, self.actions.iter().any(|x| x.name == name)),
            (Kind::Connection, self.connections.iter().any(|x| x.name == name)),
            (Kind::Generator, self.generators.iter().any(|x| x.name == name)),
            (Kind::Twilled, self.twilled.iter().any(|x| x.name == name)),
            (Kind::Element, self.elements.iter().any(|x| x.name == name)),
            (Kind::Bracket, self.brackets.iter().any(|x| x.name == name)),
            (Kind::Bialgebra, self.bialgebras.iter().any(|x| x.name == name)),
        ];
        checks.iter().find(|(_, hit)| *hit).map(|(k, _)| *k)
    }

    /// All names of one kind, in file order.
    pub fn names(&self, kind: Kind) -> Vec<String> {
        match kind {
            Kind::LieRinehart => self.lie_rinehart.iter().map(|x| x.name.clone()).collect(),
            Kind::Action => self.actions.iter().map(|x| x.name.clone()).collect(),
            Kind::Connection => self.connections.iter().map(|x| x.name.clone()).collect(),
            Kind::Generator => self.generators.iter().map(|x| x.name.clone()).collect(),
            Kind::Twilled => self.twilled.iter().map(|x| x.name.clone()).collect(),
            Kind::Element => self.elements.iter().map(|x| x.name.clone()).collect(),
            Kind::Bracket => self.brackets.iter().map(|x| x.name.clone()).collect(),
            Kind::Bialgebra => self.bialgebras.iter().map(|x| x.name.clone()).collect(),
        }
    }
}

struct Resolver {
    algebra: CommAlg,
    names: BTreeSet<String>,
}

impl Resolver {
    fn dim(&self) -> usize {
        self.algebra.dim()
    }

    fn elem(&self, loc: &str, value: &[Coeff]) -> Result<AElem, ParseError> {
        if value.len() != self.dim() {
            return err(loc, format!("expected {} coefficients, found {}", self.dim(), value.len()));
        }
        Ok(AElem(value.iter().map(|c| c.0.clone()).collect()))
    }

    fn claim(&mut self, loc: &str, name: &str) -> Result<(), ParseError> {
        if name.is_empty() {
            return err(loc, "empty name");
        }
        if !self.names.insert(name.to_string()) {
            return err(loc, format!("duplicate name {name:?}"));
        }
        Ok(())
    }
}

fn index(loc: &str, field: &str, value: usize, bound: usize) -> Result<usize, ParseError> {
    if value >= bound {
        return err(format!("{loc}.{field}"), format!("index {value} out of range 0..{bound}"));
    }
    Ok(value)
}

fn subset(loc: &str, indices: &[usize], bound: usize) -> Result<BasisSet, ParseError> {
    if indices.windows(2).any(|w| w[0] >= w[1]) {
        return err(loc, "indices must be strictly increasing");
    }
    if let Some(&bad) = indices.iter().find(|&&i| i >= bound) {
        return err(loc, format!("index {bad} out of range 0..{bound}"));
    }
    Ok(BasisSet::from_indices(indices).expect("distinct"))
}

fn core_err(loc: &str, e: lierine_core::Error) -> ParseError {
    ParseError { location: loc.into(), message: e.to_string() }
}

fn find<'a, T>(
    loc: &str,
    items: &'a [T],
    name: &str,
    get: impl Fn(&T) -> &str,
    kind: &str,
) -> Result<&'a T, ParseError> {
    match items.iter().find(|x| get(x) == name) {
        Some(x) => Ok(x),
        None => err(loc, format!("unknown {kind} {name:?}")),
    }
}

/// Parses and resolves an instance file.
pub fn parse_instance(text: &str) -> Result<InstanceSet, ParseError> {
    let raw: RawFile =
        toml::from_str(text).map_err(|e| ParseError { location: String::new(), message: e.to_string() })?;
    resolve(&raw)
}

/// Resolves already deserialized blocks.
pub fn resolve(raw: &RawFile) -> Result<InstanceSet, ParseError> {
    let algebra = match &raw.algebra {
        None => CommAlg::rationals(),
        Some(a) => resolve_algebra(a)?,
    };
    let mut r = Resolver { algebra, names: BTreeSet::new() };

    let mut lie_rinehart = Vec::new();
    for (n, b) in raw.lie_rinehart.iter().enumerate() {
        let loc = format!("lie_rinehart[{n}]");
        r.claim(&loc, &b.name)?;
        lie_rinehart.push(NamedLr { name: b.name.clone(), lr: resolve_lr(&r, &loc, b)? });
    }

    let mut actions: Vec<NamedAction> = Vec::new();
    for (n, b) in raw.action.iter().enumerate() {
        let loc = format!("action[{n}]");
        r.claim(&loc, &b.name)?;
        let source = &find(&format!("{loc}.source"), &lie_rinehart, &b.source, |x| &x.name, "lie_rinehart")?.lr;
        let rank = match (&b.target, b.rank) {
            (Some(t), rank) => {
                let target = &find(&format!("{loc}.target"), &lie_rinehart, t, |x| &x.name, "lie_rinehart")?.lr;
                if rank.is_some_and(|k| k != target.rank()) {
                    return err(format!("{loc}.rank"), format!("target {t:?} has rank {}", target.rank()));
                }
                if target.alg() != source.alg() {
                    return err(&loc, "source and target are over different algebras");
                }
                target.rank()
            }
            (None, Some(k)) => k,
            (None, None) => return err(&loc, "one of target or rank is required"),
        };
        let mut table = vec![vec![FreeElem::zero(rank, r.dim()); rank]; source.rank()];
        for (m, e) in b.table.iter().enumerate() {
            let eloc = format!("{loc}.table[{m}]");
            let i = index(&eloc, "i", e.i, source.rank())?;
            let j = index(&eloc, "j", e.j, rank)?;
            let k = index(&eloc, "k", e.k, rank)?;
            table[i][j].0[k] += &r.elem(&format!("{eloc}.value"), &e.value)?;
        }
        let module = LRModule::new(source, rank, table).map_err(|e| core_err(&loc, e))?;
        actions.push(NamedAction { name: b.name.clone(), source: b.source.clone(), target: b.target.clone(), module });
    }

    let mut connections = Vec::new();
    for (n, b) in raw.connection.iter().enumerate() {
        let loc = format!("connection[{n}]");
        r.claim(&loc, &b.name)?;
        let source = &find(&format!("{loc}.source"), &lie_rinehart, &b.source, |x| &x.name, "lie_rinehart")?.lr;
        let mut omega = vec![r.algebra.zero(); source.rank()];
        for (m, e) in b.omega.iter().enumerate() {
            let eloc = format!("{loc}.omega[{m}]");
            let i = index(&eloc, "i", e.i, source.rank())?;
            omega[i] += &r.elem(&format!("{eloc}.value"), &e.value)?;
        }
        let connection = TopConnection::new(source, omega).map_err(|e| core_err(&loc, e))?;
        connections.push(NamedConnection { name: b.name.clone(), source: b.source.clone(), connection });
    }

    let mut generators = Vec::new();
    for (n, b) in raw.generator.iter().enumerate() {
        let loc = format!("generator[{n}]");
        r.claim(&loc, &b.name)?;
        let lr = &find(&format!("{loc}.of"), &lie_rinehart, &b.of, |x| &x.name, "lie_rinehart")?.lr;
        let mut entries: BTreeMap<(usize, BasisSet), Multivector> = BTreeMap::new();
        for (m, e) in b.table.iter().enumerate() {
            let eloc = format!("{loc}.table[{m}]");
            let alpha = index(&eloc, "alpha", e.alpha, lr.dim())?;
            let s = subset(&format!("{eloc}.s"), &e.s, lr.rank())?;
            let t = subset(&format!("{eloc}.t"), &e.t, lr.rank())?;
            let value = r.elem(&format!("{eloc}.value"), &e.value)?;
            entries.entry((alpha, s)).or_insert_with(|| Multivector::zero(lr)).add_term(t, &value);
        }
        let op = GeneratorOp::from_table(lr, entries).map_err(|e| core_err(&loc, e))?;
        generators.push(NamedGenerator { name: b.name.clone(), of: b.of.clone(), op });
    }

    let mut twilled = Vec::new();
    for (n, b) in raw.twilled.iter().enumerate() {
        let loc = format!("twilled[{n}]");
        r.claim(&loc, &b.name)?;
        let lp = &find(&format!("{loc}.lprime"), &lie_rinehart, &b.lprime, |x| &x.name, "lie_rinehart")?.lr;
        let ls = &find(&format!("{loc}.lsecond"), &lie_rinehart, &b.lsecond, |x| &x.name, "lie_rinehart")?.lr;
        let a = find(&format!("{loc}.act_p_on_s"), &actions, &b.act_p_on_s, |x| &x.name, "action")?;
        let c = find(&format!("{loc}.act_s_on_p"), &actions, &b.act_s_on_p, |x| &x.name, "action")?;
        if a.source != b.lprime || a.module.rank() != ls.rank() {
            return err(
                format!("{loc}.act_p_on_s"),
                format!("must be an action of {:?} of rank {}", b.lprime, ls.rank()),
            );
        }
        if c.source != b.lsecond || c.module.rank() != lp.rank() {
            return err(
                format!("{loc}.act_s_on_p"),
                format!("must be an action of {:?} of rank {}", b.lsecond, lp.rank()),
            );
        }
        if let Some(cn) = &b.connection {
            let conn = find(&format!("{loc}.connection"), &connections, cn, |x| &x.name, "connection")?;
            if conn.source != b.lprime {
                return err(format!("{loc}.connection"), format!("must be a connection on {:?}", b.lprime));
            }
        }
        let t = AlmostTwilled::new(lp.clone(), ls.clone(), a.module.clone(), c.module.clone())
            .map_err(|e| core_err(&loc, e))?;
        twilled.push(NamedTwilled {
            name: b.name.clone(),
            lprime: b.lprime.clone(),
            lsecond: b.lsecond.clone(),
            act_p_on_s: b.act_p_on_s.clone(),
            act_s_on_p: b.act_s_on_p.clone(),
            connection: b.connection.clone(),
            t,
        });
    }

    let mut elements: Vec<NamedElement> = Vec::new();
    for (n, b) in raw.element.iter().enumerate() {
        let loc = format!("element[{n}]");
        r.claim(&loc, &b.name)?;
        let value = if let Some(x) = lie_rinehart.iter().find(|x| x.name == b.of) {
            let mut u = Multivector::zero(&x.lr);
            for (m, e) in b.terms.iter().enumerate() {
                let eloc = format!("{loc}.terms[{m}]");
                if !e.form.is_empty() {
                    return err(format!("{eloc}.form"), "only elements of a twilled block have form indices");
                }
                let s = subset(&format!("{eloc}.s"), &e.s, x.lr.rank())?;
                u.add_term(s, &r.elem(&format!("{eloc}.value"), &e.value)?);
            }
            ElementValue::Multivector(u)
        } else if let Some(x) = twilled.iter().find(|x| x.name == b.of) {
            let mut u = BigradedElement::zero(&x.t);
            for (m, e) in b.terms.iter().enumerate() {
                let eloc = format!("{loc}.terms[{m}]");
                let ts = subset(&format!("{eloc}.form"), &e.form, x.t.n_second())?;
                let s = subset(&format!("{eloc}.s"), &e.s, x.t.n_prime())?;
                u.add_term(ts, s, &r.elem(&format!("{eloc}.value"), &e.value)?);
            }
            ElementValue::Bigraded(u)
        } else {
            return err(format!("{loc}.of"), format!("unknown lie_rinehart or twilled {:?}", b.of));
        };
        elements.push(NamedElement { name: b.name.clone(), of: b.of.clone(), value });
    }

    let mut brackets = Vec::new();
    for (n, b) in raw.bracket.iter().enumerate() {
        let loc = format!("bracket[{n}]");
        r.claim(&loc, &b.name)?;
        let left = find(&format!("{loc}.left"), &elements, &b.left, |x| &x.name, "element")?;
        let right = find(&format!("{loc}.right"), &elements, &b.right, |x| &x.name, "element")?;
        if left.of != right.of {
            return err(&loc, format!("elements of {:?} and {:?} cannot be bracketed", left.of, right.of));
        }
        brackets.push(BracketQuery { name: b.name.clone(), left: b.left.clone(), right: b.right.clone() });
    }

    let mut bialgebras = Vec::new();
    for (n, b) in raw.bialgebra.iter().enumerate() {
        let loc = format!("bialgebra[{n}]");
        r.claim(&loc, &b.name)?;
        let l = &find(&format!("{loc}.l"), &lie_rinehart, &b.l, |x| &x.name, "lie_rinehart")?.lr;
        let d = &find(&format!("{loc}.d"), &lie_rinehart, &b.d, |x| &x.name, "lie_rinehart")?.lr;
        let pair = DualPair::new(l.clone(), d.clone()).map_err(|e| core_err(&loc, e))?;
        bialgebras.push(NamedBialgebra { name: b.name.clone(), l: b.l.clone(), d: b.d.clone(), pair });
    }

    Ok(InstanceSet {
        algebra: r.algebra,
        lie_rinehart,
        actions,
        connections,
        generators,
        twilled,
        elements,
        brackets,
        bialgebras,
    })
}

fn resolve_algebra(a: &RawAlgebra) -> Result<CommAlg, ParseError> {
    let d = a.dim;
    if d == 0 {
        return err("algebra.dim", "must be positive");
    }
    let vec_of = |loc: &str, v: &[Coeff]| -> Result<AElem, ParseError> {
        if v.len() != d {
            return err(loc, format!("expected {d} coefficients, found {}", v.len()));
        }
        Ok(AElem(v.iter().map(|c| c.0.clone()).collect()))
    };
    let unit = vec_of("algebra.unit", &a.unit)?;
    let mut mult = vec![vec![AElem::zero(d); d]; d];
    for (m, e) in a.mult.iter().enumerate() {
        let loc = format!("algebra.mult[{m}]");
        let i = index(&loc, "i", e.i, d)?;
        let j = index(&loc, "j", e.j, d)?;
        mult[i][j] += &vec_of(&format!("{loc}.value"), &e.value)?;
    }
    CommAlg::new(d, mult, unit).map_err(|e| core_err("algebra", e))
}

fn resolve_lr(r: &Resolver, loc: &str, b: &RawLieRinehart) -> Result<LieRinehart, ParseError> {
    let (n, d) = (b.rank, r.dim());
    let mut bracket = vec![vec![FreeElem::zero(n, d); n]; n];
    for (m, e) in b.bracket.iter().enumerate() {
        let eloc = format!("{loc}.bracket[{m}]");
        let (i, j, k) = (index(&eloc, "i", e.i, n)?, index(&eloc, "j", e.j, n)?, index(&eloc, "k", e.k, n)?);
        if i == j {
            return err(&eloc, "diagonal entries belong in bracket_raw");
        }
        let v = r.elem(&format!("{eloc}.value"), &e.value)?;
        bracket[i][j].0[k] += &v;
        bracket[j][i].0[k] -= &v;
    }
    for (m, e) in b.bracket_raw.iter().enumerate() {
        let eloc = format!("{loc}.bracket_raw[{m}]");
        let (i, j, k) = (index(&eloc, "i", e.i, n)?, index(&eloc, "j", e.j, n)?, index(&eloc, "k", e.k, n)?);
        bracket[i][j].0[k] += &r.elem(&format!("{eloc}.value"), &e.value)?;
    }
    let mut images = vec![vec![AElem::zero(d); d]; n];
    for (m, e) in b.anchor.iter().enumerate() {
        let eloc = format!("{loc}.anchor[{m}]");
        let i = index(&eloc, "i", e.i, n)?;
        let c = index(&eloc, "basis", e.basis, d)?;
        images[i][c] += &r.elem(&format!("{eloc}.value"), &e.value)?;
    }
    let anchor = images.iter().map(|im| Derivation::from_images(im).expect("square")).collect();
    LieRinehart::new(r.algebra.clone(), bracket, anchor).map_err(|e| core_err(loc, e))
}

fn coeffs(a: &AElem) -> Vec<Coeff> {
    a.0.iter().cloned().map(Coeff).collect()
}

/// Block form of a resolved instance set; resolving it gives the same set.
pub fn to_raw(set: &InstanceSet) -> RawFile {
    let alg = &set.algebra;
    let d = alg.dim();
    let mut mult = Vec::new();
    for i in 0..d {
        for j in 0..d {
            let v = alg.basis_product(i, j);
            if !v.is_zero() {
                mult.push(MultEntry { i, j, value: coeffs(v) });
            }
        }
    }
    let algebra =
        if *alg == CommAlg::rationals() { None } else { Some(RawAlgebra { dim: d, unit: coeffs(alg.unit()), mult }) };

    let lie_rinehart = set
        .lie_rinehart
        .iter()
        .map(|x| {
            let lr = &x.lr;
            let n = lr.rank();
            let (mut bracket, mut bracket_raw, mut anchor) = (Vec::new(), Vec::new(), Vec::new());
            for i in 0..n {
                for k in 0..n {
                    let v = &lr.basis_bracket(i, i).0[k];
                    if !v.is_zero() {
                        bracket_raw.push(BracketEntry { i, j: i, k, value: coeffs(v) });
                    }
                }
            }
            for i in 0..n {
                for j in i + 1..n {
                    for k in 0..n {
                        let v = &lr.basis_bracket(i, j).0[k];
                        if !v.is_zero() {
                            bracket.push(BracketEntry { i, j, k, value: coeffs(v) });
                        }
                        let mut rest = lr.basis_bracket(j, i).0[k].clone();
                        rest += v;
                        if !rest.is_zero() {
                            bracket_raw.push(BracketEntry { i: j, j: i, k, value: coeffs(&rest) });
                        }
                    }
                }
            }
            for i in 0..n {
                for c in 0..d {
                    let v = lr.anchor(i).image(c);
                    if !v.is_zero() {
                        anchor.push(AnchorEntry { i, basis: c, value: coeffs(&v) });
                    }
                }
            }
            bracket_raw.sort_by_key(|e| (e.i, e.j, e.k));
            RawLieRinehart { name: x.name.clone(), rank: n, bracket, bracket_raw, anchor }
        })
        .collect();

    let action = set
        .actions
        .iter()
        .map(|x| {
            let mut table = Vec::new();
            for (i, row) in x.module.table().iter().enumerate() {
                for (j, v) in row.iter().enumerate() {
                    for (k, a) in v.0.iter().enumerate() {
                        if !a.is_zero() {
                            table.push(BracketEntry { i, j, k, value: coeffs(a) });
                        }
                    }
                }
            }
            RawAction {
                name: x.name.clone(),
                source: x.source.clone(),
                target: x.target.clone(),
                rank: if x.target.is_some() { None } else { Some(x.module.rank()) },
                table,
            }
        })
        .collect();

    let connection = set
        .connections
        .iter()
        .map(|x| RawConnection {
            name: x.name.clone(),
            source: x.source.clone(),
            omega: x
                .connection
                .omega()
                .iter()
                .enumerate()
                .filter(|(_, a)| !a.is_zero())
                .map(|(i, a)| OmegaEntry { i, value: coeffs(a) })
                .collect(),
        })
        .collect();

    let generator = set
        .generators
        .iter()
        .map(|x| {
            let mut table = Vec::new();
            for ((alpha, s), image) in x.op.table() {
                for (t, a) in image.terms() {
                    table.push(GeneratorEntry { alpha: *alpha, s: s.indices(), t: t.indices(), value: coeffs(a) });
                }
            }
            RawGenerator { name: x.name.clone(), of: x.of.clone(), table }
        })
        .collect();

    let twilled = set
        .twilled
        .iter()
        .map(|x| RawTwilled {
            name: x.name.clone(),
            lprime: x.lprime.clone(),
            lsecond: x.lsecond.clone(),
            act_p_on_s: x.act_p_on_s.clone(),
            act_s_on_p: x.act_s_on_p.clone(),
            connection: x.connection.clone(),
        })
        .collect();

    let element = set
        .elements
        .iter()
        .map(|x| {
            let terms = match &x.value {
                ElementValue::Multivector(u) => u
                    .terms()
                    .iter()
                    .map(|(s, a)| TermEntry { form: vec![], s: s.indices(), value: coeffs(a) })
                    .collect(),
                ElementValue::Bigraded(u) => u
                    .terms()
                    .iter()
                    .map(|((ts, s), a)| TermEntry { form: ts.indices(), s: s.indices(), value: coeffs(a) })
                    .collect(),
            };
            RawElement { name: x.name.clone(), of: x.of.clone(), terms }
        })
        .collect();

    let bracket = set
        .brackets
        .iter()
        .map(|x| RawBracket { name: x.name.clone(), left: x.left.clone(), right: x.right.clone() })
        .collect();

    let bialgebra =
        set.bialgebras.iter().map(|x| RawBialgebra { name: x.name.clone(), l: x.l.clone(), d: x.d.clone() }).collect();

    RawFile { algebra, lie_rinehart, action, connection, generator, twilled, element, bracket, bialgebra }
}

/// Canonical text of an instance set.
pub fn serialize_instance(set: &InstanceSet) -> String {
    toml::to_string(&to_raw(set)).expect("plain data serializes")
}
