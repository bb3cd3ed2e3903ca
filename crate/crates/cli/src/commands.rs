//! Command dispatch: each command maps onto checkers of `lierine-core`.

use std::fmt;

use lierine_core::bialg::{bialgebra_check, corollary42_check, matched_pair_from_lie_bialgebra, theorem41_check};
use lierine_core::exactla::format_rat;
use lierine_core::gerst::{
    basis_label, connection_curvature, derivation_property_check, generator_from_connection, generator_square,
    generator_to_connection, generator_validate, gerstenhaber_validate, schouten_bracket, GeneratorOp,
};
use lierine_core::instances::lie_bialgebra_pair;
use lierine_core::lrcore::{ce_square_report, euler_characteristic};
use lierine_core::report::tuple;
use lierine_core::twilled::{
    bigraded_generator_validate, crossed_bracket, is_twilled, theorem14_check, theorem21_check, theorem23_check,
    theorem31_check, weak_dbv_for, BigradedGenerator, EquivalenceReport,
};
use lierine_core::{cohomology_dims, lr_validate, module_validate, AElem, Error, LRModule, LieRinehart};

use crate::format::{ElementValue, InstanceSet, Kind};
use crate::report::{Report, Section};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GeneratorMode {
    FromConnection,
    Validate,
    Square,
    ToConnection,
    WeakDbv,
}

impl GeneratorMode {
    pub fn label(self) -> &'static str {
        match self {
            GeneratorMode::FromConnection => "from-connection",
            GeneratorMode::Validate => "validate",
            GeneratorMode::Square => "square",
            GeneratorMode::ToConnection => "to-connection",
            GeneratorMode::WeakDbv => "weak-dbv",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Command {
    CheckLr,
    CheckTwilled,
    Cohomology,
    Bracket,
    Generator(GeneratorMode),
    CheckBialgebra,
}

impl Command {
    pub fn label(self) -> String {
        match self {
            Command::CheckLr => "check-lr".into(),
            Command::CheckTwilled => "check-twilled".into(),
            Command::Cohomology => "cohomology".into(),
            Command::Bracket => "bracket".into(),
            Command::Generator(m) => format!("generator {}", m.label()),
            Command::CheckBialgebra => "check-bialgebra".into(),
        }
    }

    fn accepts(self) -> &'static [Kind] {
        match self {
            Command::CheckLr => &[Kind::LieRinehart, Kind::Action, Kind::Connection],
            Command::CheckTwilled => &[Kind::Twilled],
            Command::Cohomology => &[Kind::LieRinehart, Kind::Action, Kind::Twilled],
            Command::Bracket => &[Kind::Bracket],
            Command::Generator(GeneratorMode::FromConnection) => &[Kind::Connection],
            Command::Generator(GeneratorMode::Square) => &[Kind::Generator, Kind::Connection],
            Command::Generator(GeneratorMode::WeakDbv) => &[Kind::Twilled],
            Command::Generator(_) => &[Kind::Generator],
            Command::CheckBialgebra => &[Kind::Twilled, Kind::Bialgebra],
        }
    }
}

/// A request that cannot be run on the given input.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UsageError(pub String);

impl fmt::Display for UsageError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for UsageError {}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Options {
    pub name: Option<String>,
    pub max_degree: Option<usize>,
}

fn targets(cmd: Command, set: &InstanceSet, name: Option<&str>) -> Result<Vec<(Kind, String)>, UsageError> {
    let accepted = cmd.accepts();
    let labels: Vec<&str> = accepted.iter().map(|k| k.label()).collect();
    if let Some(n) = name {
        let kind = set.kind_of(n).ok_or_else(|| UsageError(format!("no instance named {n:?}")))?;
        if !accepted.contains(&kind) {
            return Err(UsageError(format!(
                "{n:?} is of kind {}; {} accepts {}",
                kind.label(),
                cmd.label(),
                labels.join(", ")
            )));
        }
        return Ok(vec![(kind, n.to_string())]);
    }
    let all: Vec<(Kind, String)> =
        accepted.iter().flat_map(|&k| set.names(k).into_iter().map(move |n| (k, n))).collect();
    if all.is_empty() {
        return Err(UsageError(format!("{} needs a {} block", cmd.label(), labels.join(" or "))));
    }
    Ok(all)
}

/// Runs `cmd` on every matching block, or on the one named in `opts`.
pub fn run(cmd: Command, set: &InstanceSet, opts: &Options) -> Result<Report, UsageError> {
    let mut sections = Vec::new();
    for (kind, name) in targets(cmd, set, opts.name.as_deref())? {
        let mut s = Section::new(kind.label(), &name);
        match cmd {
            Command::CheckLr => check_lr(set, kind, &name, opts, &mut s),
            Command::CheckTwilled => check_twilled(set, &name, &mut s),
            Command::Cohomology => cohomology(set, kind, &name, opts, &mut s),
            Command::Bracket => bracket(set, &name, &mut s),
            Command::Generator(mode) => generator(set, mode, kind, &name, &mut s)?,
            Command::CheckBialgebra => check_bialgebra(set, kind, &name, opts, &mut s),
        }
        sections.push(s);
    }
    Ok(Report::new(cmd.label(), sections))
}

fn elem_text(a: &AElem) -> String {
    let parts: Vec<String> = a.0.iter().map(format_rat).collect();
    format!("[{}]", parts.join(", "))
}

fn source_of<'a>(set: &'a InstanceSet, source: &str) -> &'a LieRinehart {
    set.lr(source).expect("resolved reference")
}

fn check_lr(set: &InstanceSet, kind: Kind, name: &str, opts: &Options, s: &mut Section) {
    match kind {
        Kind::LieRinehart => {
            let lr = set.lr(name).expect("listed");
            let report = lr_validate(lr);
            s.from_report("lie_rinehart", &report);
            if report.is_valid() {
                s.from_report("d_squared", &ce_square_report(lr, &LRModule::trivial(lr)).expect("rank one module"));
                let k = opts.max_degree.unwrap_or(lr.rank().min(3));
                s.from_report("gerstenhaber", &gerstenhaber_validate(lr, k));
            }
        }
        Kind::Action => {
            let a = set.actions.iter().find(|x| x.name == name).expect("listed");
            let lr = source_of(set, &a.source);
            s.from_report("flatness", &module_validate(lr, &a.module));
            match ce_square_report(lr, &a.module) {
                Ok(r) => s.from_report("d_squared", &r),
                Err(e) => s.failure("d_squared", None, e.to_string()),
            }
        }
        Kind::Connection => {
            let c = set.connections.iter().find(|x| x.name == name).expect("listed");
            let lr = source_of(set, &c.source);
            let curvature = connection_curvature(lr, &c.connection);
            match curvature.values().iter().next() {
                None => s.verdict("flatness", true),
                Some((set_, v)) => s.failure(
                    "flatness",
                    Some(format!("curvature {}", tuple(&set_.indices()))),
                    format!("F = {}", elem_text(&v.0[0])),
                ),
            }
            match ce_square_report(lr, &c.connection.line_module(lr)) {
                Ok(r) => s.from_report("d_squared", &r),
                Err(e) => s.failure("d_squared", None, e.to_string()),
            }
        }
        _ => unreachable!("filtered by targets"),
    }
}

fn equivalence(s: &mut Section, r: &EquivalenceReport) {
    for (c, v) in &r.conditions {
        s.from_condition(format!("{}.{c}", r.name), *v, &r.details, c);
    }
    s.verdict(format!("{}.equivalence", r.name), r.holds());
}

fn check_twilled(set: &InstanceSet, name: &str, s: &mut Section) {
    let t = &set.twilled.iter().find(|x| x.name == name).expect("listed").t;
    s.from_report("actions_flat", &t.flatness_report());
    s.from_report("twilled", &is_twilled(t));
    equivalence(s, &theorem14_check(t));
    equivalence(s, &theorem21_check(t));
    equivalence(s, &theorem23_check(t));
}

fn dims_table(s: &mut Section, name: &str, dims: &[usize]) {
    s.table(name, dims.iter().map(usize::to_string).collect());
}

fn cohomology(set: &InstanceSet, kind: Kind, name: &str, opts: &Options, s: &mut Section) {
    let (lr, module) = match kind {
        Kind::LieRinehart => {
            let lr = set.lr(name).expect("listed");
            (lr, LRModule::trivial(lr))
        }
        Kind::Action => {
            let a = set.actions.iter().find(|x| x.name == name).expect("listed");
            (source_of(set, &a.source), a.module.clone())
        }
        Kind::Twilled => {
            let t = &set.twilled.iter().find(|x| x.name == name).expect("listed").t;
            let k = opts.max_degree.unwrap_or(t.n_prime() + t.n_second());
            match theorem31_check(t, k) {
                Ok(cmp) => {
                    s.verdict("theorem31.agree", cmp.agree());
                    dims_table(s, "total_complex", &cmp.total_complex);
                    dims_table(s, "twilled_sum", &cmp.twilled_sum);
                    s.table("euler_characteristic", vec![euler_characteristic(&cmp.total_complex).to_string()]);
                }
                Err(e) => s.from_report("twilled", &failed_report(e)),
            }
            return;
        }
        _ => unreachable!("filtered by targets"),
    };
    let report = lr_validate(lr);
    if !report.is_valid() {
        s.from_report("lie_rinehart", &report);
        return;
    }
    let k = opts.max_degree.unwrap_or(lr.rank());
    match cohomology_dims(lr, &module, k) {
        Ok(dims) => {
            dims_table(s, "dims", &dims);
            s.table("euler_characteristic", vec![euler_characteristic(&dims).to_string()]);
        }
        Err(e) => {
            let r = module_validate(lr, &module);
            if r.is_valid() {
                s.failure("cohomology", None, e.to_string());
            } else {
                s.from_report("flatness", &r);
            }
        }
    }
}

fn failed_report(e: Error) -> lierine_core::ValidationReport {
    let mut r = lierine_core::ValidationReport::new();
    match e {
        Error::NotTwilled(m) => r.push("twilled_sum", "", m),
        other => r.push("error", "", other.to_string()),
    }
    r
}

fn bracket(set: &InstanceSet, name: &str, s: &mut Section) {
    let q = set.brackets.iter().find(|x| x.name == name).expect("listed");
    let get = |n: &str| set.elements.iter().find(|x| x.name == n).expect("resolved reference");
    let (left, right) = (get(&q.left), get(&q.right));
    let result = match (&left.value, &right.value) {
        (ElementValue::Multivector(u), ElementValue::Multivector(v)) => {
            let lr = set.lr(&left.of).expect("resolved reference");
            schouten_bracket(lr, u, v).map(|x| x.display())
        }
        (ElementValue::Bigraded(u), ElementValue::Bigraded(v)) => {
            let t = &set.twilled.iter().find(|x| x.name == left.of).expect("resolved reference").t;
            Ok(crossed_bracket(t, u, v).display())
        }
        _ => unreachable!("checked when resolving"),
    };
    match result {
        Ok(text) => s.table("result", vec![text]),
        Err(e) => s.failure("bracket", None, e.to_string()),
    }
}

fn generator_table(s: &mut Section, g: &GeneratorOp) {
    let rows =
        g.table().iter().map(|((alpha, set_), img)| format!("Δ({}) = {}", basis_label(*alpha, *set_), img.display()));
    s.table("delta", rows.collect());
}

fn generator(
    set: &InstanceSet,
    mode: GeneratorMode,
    kind: Kind,
    name: &str,
    s: &mut Section,
) -> Result<(), UsageError> {
    match (mode, kind) {
        (GeneratorMode::FromConnection, _) | (GeneratorMode::Square, Kind::Connection) => {
            let c = set.connections.iter().find(|x| x.name == name).expect("listed");
            let lr = source_of(set, &c.source);
            let g = generator_from_connection(lr, &c.connection).expect("shapes match");
            if mode == GeneratorMode::FromConnection {
                s.from_report("generator", &generator_validate(lr, &g));
                generator_table(s, &g);
            } else {
                let square = generator_square(lr, &g);
                let flat = connection_curvature(lr, &c.connection).is_zero();
                s.from_report("exactness", &square);
                s.verdict("flat_iff_exact", flat == square.is_valid());
            }
        }
        (GeneratorMode::Validate, _) => {
            let g = set.generators.iter().find(|x| x.name == name).expect("listed");
            let lr = source_of(set, &g.of);
            s.from_report("generator", &generator_validate(lr, &g.op));
            let exact = generator_square(lr, &g.op).is_valid();
            s.table("exact", vec![exact.to_string()]);
            if exact {
                s.from_report("derivation", &derivation_property_check(lr, &g.op));
            }
        }
        (GeneratorMode::Square, _) => {
            let g = set.generators.iter().find(|x| x.name == name).expect("listed");
            s.from_report("exactness", &generator_square(source_of(set, &g.of), &g.op));
        }
        (GeneratorMode::ToConnection, _) => {
            let g = set.generators.iter().find(|x| x.name == name).expect("listed");
            let lr = source_of(set, &g.of);
            match generator_to_connection(lr, &g.op) {
                Ok(c) => {
                    s.table("omega", c.omega().iter().map(elem_text).collect());
                    let back = generator_from_connection(lr, &c).expect("shapes match");
                    s.verdict("round_trip", back == g.op);
                }
                Err(e) => s.failure("generator", None, e.to_string()),
            }
        }
        (GeneratorMode::WeakDbv, _) => {
            let tw = set.twilled.iter().find(|x| x.name == name).expect("listed");
            let cname = tw
                .connection
                .as_ref()
                .ok_or_else(|| UsageError(format!("twilled block {name:?} has no connection")))?;
            let c = set.connections.iter().find(|x| &x.name == cname).expect("resolved reference");
            let bg = BigradedGenerator::from_connection(&tw.t, c.connection.clone());
            s.from_report("bigraded_generator", &bigraded_generator_validate(&tw.t, &bg));
            let r = weak_dbv_for(&bg);
            s.from_condition("weak_dbv", r.weak(), &r.details, "commutator");
            s.table("full_dbv", vec![r.full().to_string()]);
        }
    }
    Ok(())
}

fn check_bialgebra(set: &InstanceSet, kind: Kind, name: &str, opts: &Options, s: &mut Section) {
    match kind {
        Kind::Twilled => {
            let t = &set.twilled.iter().find(|x| x.name == name).expect("listed").t;
            match (theorem41_check(t), corollary42_check(t)) {
                (Ok(r41), Ok(r42)) => {
                    s.from_condition("twilled", r42.right(), &r42.details, "twilled");
                    s.verdict("dg_gerstenhaber", r41.right());
                    s.from_condition("bialgebra", r41.left(), &r41.details, "bialgebra");
                    s.verdict("theorem41.equivalence", r41.holds());
                    s.verdict("corollary42.equivalence", r42.holds());
                }
                (Err(e), _) | (_, Err(e)) => s.failure("semidirect_pair", None, e.to_string()),
            }
        }
        Kind::Bialgebra => {
            let b = set.bialgebras.iter().find(|x| x.name == name).expect("listed");
            let k = opts.max_degree.unwrap_or(b.pair.l().rank());
            let r = bialgebra_check(&b.pair, k);
            match &r.witness {
                None => s.verdict("bialgebra", r.holds),
                Some(w) => s.failure(
                    "bialgebra",
                    Some(format!("bialgebra {}", w.pair)),
                    format!("degree {}: residual {}", w.degree, w.residual),
                ),
            }
            s.verdict("forms_agree", r.agree());
            let (l, d) = (b.pair.l(), b.pair.d());
            if l.dim() == 1 {
                let accepted = matched_pair_from_lie_bialgebra(l, d);
                s.table("matched_pair", vec![if accepted.is_ok() { "accepted" } else { "rejected" }.to_string()]);
                let direct = lie_bialgebra_pair(l, d).ok().and_then(|t| corollary42_check(&t).ok());
                let agrees = direct.is_some_and(|c| (c.left() && c.right()) == accepted.is_ok());
                s.verdict("matched_pair.agrees_with_corollary42", agrees);
            }
        }
        _ => unreachable!("filtered by targets"),
    }
}
