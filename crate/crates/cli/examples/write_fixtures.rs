//! Regenerates `fixtures/` from the named instances of `lierine-core`.
//!
//! `cargo run -p lierine --example write_fixtures`

use std::path::Path;

use lierine_cli::format::{
    BracketQuery, ElementValue, InstanceSet, NamedAction, NamedBialgebra, NamedConnection, NamedElement,
    NamedGenerator, NamedLr, NamedTwilled,
};
use lierine_cli::{parse_instance, serialize_instance};
use lierine_core::basis::BasisSet;
use lierine_core::bialg::DualPair;
use lierine_core::gerst::{generator_from_connection, GeneratorOp, Multivector, TopConnection};
use lierine_core::instances;
use lierine_core::lrcore::FreeElem;
use lierine_core::twilled::{AlmostTwilled, BigradedElement};
use lierine_core::{AElem, CommAlg, LRModule, LieRinehart};

struct Builder {
    header: &'static str,
    set: InstanceSet,
}

impl Builder {
    fn new(header: &'static str, algebra: CommAlg) -> Self {
        let set = InstanceSet {
            algebra,
            lie_rinehart: vec![],
            actions: vec![],
            connections: vec![],
            generators: vec![],
            twilled: vec![],
            elements: vec![],
            brackets: vec![],
            bialgebras: vec![],
        };
        Self { header, set }
    }

    fn lr(&mut self, name: &str, lr: LieRinehart) -> &mut Self {
        self.set.lie_rinehart.push(NamedLr { name: name.into(), lr });
        self
    }

    fn get(&self, name: &str) -> LieRinehart {
        self.set.lr(name).expect("added earlier").clone()
    }

    fn action(&mut self, name: &str, source: &str, target: Option<&str>, module: LRModule) -> &mut Self {
        self.set.actions.push(NamedAction {
            name: name.into(),
            source: source.into(),
            target: target.map(Into::into),
            module,
        });
        self
    }

    fn connection(&mut self, name: &str, source: &str, omega: Vec<AElem>) -> &mut Self {
        let connection = TopConnection::new(&self.get(source), omega).expect("shapes");
        self.set.connections.push(NamedConnection { name: name.into(), source: source.into(), connection });
        self
    }

    fn generator(&mut self, name: &str, of: &str, op: GeneratorOp) -> &mut Self {
        self.set.generators.push(NamedGenerator { name: name.into(), of: of.into(), op });
        self
    }

    /// Adds both summands, both actions and the twilled block.
    fn twilled(&mut self, name: &str, t: &AlmostTwilled, p: &str, s: &str, connection: Option<&str>) -> &mut Self {
        self.lr(p, t.lprime().clone());
        self.lr(s, t.lsecond().clone());
        let (a, b) = (format!("{name}_p_on_s"), format!("{name}_s_on_p"));
        self.action(&a, p, None, t.act_p_on_s().clone());
        self.action(&b, s, None, t.act_s_on_p().clone());
        self.twilled_only(name, t, p, s, &a, &b, connection)
    }

    #[allow(clippy::too_many_arguments)]
    fn twilled_only(
        &mut self,
        name: &str,
        t: &AlmostTwilled,
        p: &str,
        s: &str,
        a: &str,
        b: &str,
        connection: Option<&str>,
    ) -> &mut Self {
        self.set.twilled.push(NamedTwilled {
            name: name.into(),
            lprime: p.into(),
            lsecond: s.into(),
            act_p_on_s: a.into(),
            act_s_on_p: b.into(),
            connection: connection.map(Into::into),
            t: t.clone(),
        });
        self
    }

    fn element(&mut self, name: &str, of: &str, value: ElementValue) -> &mut Self {
        self.set.elements.push(NamedElement { name: name.into(), of: of.into(), value });
        self
    }

    fn bracket(&mut self, name: &str, left: &str, right: &str) -> &mut Self {
        self.set.brackets.push(BracketQuery { name: name.into(), left: left.into(), right: right.into() });
        self
    }

    fn bialgebra(&mut self, name: &str, l: &str, d: &str) -> &mut Self {
        let pair = DualPair::new(self.get(l), self.get(d)).expect("dual ranks");
        self.set.bialgebras.push(NamedBialgebra { name: name.into(), l: l.into(), d: d.into(), pair });
        self
    }

    fn write(&self, dir: &Path, file: &str) {
        let body = serialize_instance(&self.set);
        assert_eq!(parse_instance(&body).expect("serialized text parses"), self.set, "{file}");
        let mut text = String::new();
        for line in self.header.lines() {
            text.push_str(&format!("# {line}\n"));
        }
        text.push('\n');
        text.push_str(&body);
        std::fs::write(dir.join(file), text).expect("writable fixtures dir");
    }
}

fn ints(xs: &[i64]) -> AElem {
    AElem::from_ints(xs)
}

fn set(idx: &[usize]) -> BasisSet {
    BasisSet::from_indices(idx).expect("distinct")
}

fn mv(lr: &LieRinehart, terms: &[(&[usize], AElem)]) -> ElementValue {
    let mut u = Multivector::zero(lr);
    for (s, a) in terms {
        u.add_term(set(s), a);
    }
    ElementValue::Multivector(u)
}

fn bigraded(t: &AlmostTwilled, terms: &[(&[usize], &[usize], AElem)]) -> ElementValue {
    let mut u = BigradedElement::zero(t);
    for (ts, s, a) in terms {
        u.add_term(set(ts), set(s), a);
    }
    ElementValue::Bigraded(u)
}

/// `sl₂` with `[E, F] = 2H` but `[F, E] = -H`.
fn sl2_perturbed() -> LieRinehart {
    let lr = instances::sl2();
    let mut table: Vec<Vec<FreeElem>> =
        (0..3).map(|i| (0..3).map(|j| lr.basis_bracket(i, j).clone()).collect()).collect();
    table[1][2].0[0] += &ints(&[1]);
    let anchor = (0..3).map(|i| lr.anchor(i).clone()).collect();
    LieRinehart::new(lr.alg().clone(), table, anchor).expect("shapes")
}

/// The generator of the zero connection with `Δ(H)` shifted by one.
fn broken_generator(lr: &LieRinehart) -> GeneratorOp {
    let c = TopConnection::new(lr, vec![ints(&[0]); 3]).expect("shapes");
    let g = generator_from_connection(lr, &c).expect("shapes");
    let mut table = g.table().clone();
    table.entry((0, set(&[0]))).or_insert_with(|| Multivector::zero(lr)).add_term(BasisSet::EMPTY, &ints(&[1]));
    GeneratorOp::from_table(lr, table).expect("shapes")
}

fn main() {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures");
    std::fs::create_dir_all(&dir).expect("fixtures dir");
    let q = CommAlg::rationals;

    let mut b = Builder::new("Abelian Lie algebras of rank 1 to 4 and their trivial direct sum.", q());
    for n in 1..=4 {
        b.lr(&format!("abelian{n}"), instances::abelian(n));
    }
    b.connection("abelian2_omega", "abelian2", vec![ints(&[1]), ints(&[2])]);
    let g = generator_from_connection(&b.get("abelian2"), &b.set.connections[0].connection).unwrap();
    b.generator("abelian2_delta", "abelian2", g);
    let sum = AlmostTwilled::direct_sum(instances::abelian(2), instances::abelian(1)).unwrap();
    b.twilled("abelian_sum", &sum, "sum_p", "sum_s", None);
    b.write(&dir, "abelian.toml");

    let sl2 = instances::sl2();
    let mut b = Builder::new("sl2 with basis (H, E, F), its adjoint module and the zero connection.", q());
    b.lr("sl2", sl2.clone());
    b.action("sl2_adjoint", "sl2", Some("sl2"), LRModule::adjoint(&sl2));
    b.connection("sl2_zero", "sl2", vec![ints(&[0]); 3]);
    let g = generator_from_connection(&sl2, &b.set.connections[0].connection).unwrap();
    b.generator("sl2_delta", "sl2", g);
    b.element("E", "sl2", mv(&sl2, &[(&[1], ints(&[1]))]));
    b.element("F", "sl2", mv(&sl2, &[(&[2], ints(&[1]))]));
    b.element("HE", "sl2", mv(&sl2, &[(&[0, 1], ints(&[1]))]));
    b.bracket("E_F", "E", "F");
    b.bracket("HE_F", "HE", "F");
    b.write(&dir, "sl2.toml");

    for k in [2, 3] {
        let alg = CommAlg::truncated_polynomials(k);
        let lr = instances::euler_truncated(k);
        let mut b = Builder::new("Derivations of Q[x]/(x^k) generated by the Euler field x d/dx.", alg.clone());
        b.lr("euler", lr.clone());
        b.connection("euler_zero", "euler", vec![alg.zero()]);
        let g = generator_from_connection(&lr, &b.set.connections[0].connection).unwrap();
        b.generator("euler_delta", "euler", g);
        b.element("x_e", "euler", mv(&lr, &[(&[0], alg.basis(1))]));
        b.element("x2", "euler", mv(&lr, &[(&[], alg.basis(k - 1))]));
        b.bracket("x_e_x2", "x_e", "x2");
        b.write(&dir, &format!("euler_k{k}.toml"));
    }

    let alg = CommAlg::truncated_polynomials(3);
    let mut b = Builder::new("Broken: the coefficientwise d/dx on Q[x]/(x^3), which is not a derivation there.", alg);
    b.lr("ddx", instances::ddx_truncated(3));
    b.write(&dir, "broken_ddx.toml");

    let mut b = Builder::new("Broken: sl2 with one bracket entry perturbed, [E,F] = 2H but [F,E] = -H.", q());
    b.lr("sl2_perturbed", sl2_perturbed());
    b.write(&dir, "broken_bracket.toml");

    let mut b = Builder::new("Broken: twice the adjoint action of sl2 is not flat.", q());
    b.lr("sl2", sl2.clone());
    b.action("sl2_twice_adjoint", "sl2", Some("sl2"), LRModule::adjoint(&sl2).scaled(2));
    b.write(&dir, "broken_action.toml");

    let mut b = Builder::new("Broken: a generator table for sl2 with one entry shifted.", q());
    b.lr("sl2", sl2.clone());
    b.generator("sl2_bad_delta", "sl2", broken_generator(&sl2));
    b.write(&dir, "broken_generator.toml");

    let alg = CommAlg::truncated_polynomials(2);
    let t = instances::dual_numbers_pair();
    let mut b = Builder::new(
        "Over the dual numbers Q[x]/(x^2): a twilled pair with a nontrivial action,\nand a curved connection on an abelian rank two algebra.",
        alg.clone(),
    );
    b.twilled("dual_pair", &t, "lprime", "lsecond", None);
    b.lr("abelian_dual", instances::abelian_over_dual_numbers());
    b.connection("curved", "abelian_dual", vec![alg.zero(), alg.basis(1)]);
    b.write(&dir, "dual_numbers.toml");

    let t = instances::book_bialgebra_pair();
    let mut b =
        Builder::new("The Lie bialgebra on [e0, e1] = e1 with dual bracket [f0, f1] = f1 as a matched pair.", q());
    b.lr("g", t.lprime().clone());
    b.connection("g_omega", "g", vec![ints(&[-1]), ints(&[0])]);
    b.lr("gstar", t.lsecond().clone());
    b.action("g_on_gstar", "g", Some("gstar"), t.act_p_on_s().clone());
    b.action("gstar_on_g", "gstar", Some("g"), t.act_s_on_p().clone());
    b.twilled_only("book_pair", &t, "g", "gstar", "g_on_gstar", "gstar_on_g", Some("g_omega"));
    b.element("f0", "book_pair", bigraded(&t, &[(&[0], &[], ints(&[1]))]));
    b.element("f1_e0", "book_pair", bigraded(&t, &[(&[1], &[0], ints(&[1]))]));
    b.element("e1", "book_pair", bigraded(&t, &[(&[], &[1], ints(&[1]))]));
    b.bracket("f0_e1", "f0", "e1");
    b.bracket("f1e0_e1", "f1_e0", "e1");
    b.bialgebra("book_bialgebra", "g", "gstar");
    b.write(&dir, "book_pair.toml");

    let t = instances::book_pair_flipped();
    let mut b = Builder::new("Broken: the book matched pair with the action of g on g* negated.", q());
    b.twilled("flipped_pair", &t, "g", "gstar", None);
    b.write(&dir, "broken_flipped_pair.toml");

    let t = instances::book_pair_one_sided();
    let mut b = Builder::new("Broken: the book matched pair with the action of g* on g set to zero.", q());
    b.twilled("one_sided_pair", &t, "g", "gstar", None);
    b.write(&dir, "broken_one_sided_pair.toml");

    let t = instances::rank_one_pair();
    let mut b = Builder::new("Two rank one Lie algebras acting on each other by the identity.", q());
    b.twilled("rank_one_pair", &t, "e", "f", None);
    b.write(&dir, "rank_one_pair.toml");

    let mut b = Builder::new("The standard Lie bialgebra structure on sl2.", q());
    b.lr("sl2", sl2.clone());
    b.lr("sl2_dual", instances::lie_algebra(3, &[(1, 0, 1, 1), (2, 0, 2, 1)]));
    b.bialgebra("sl2_standard", "sl2", "sl2_dual");
    b.write(&dir, "sl2_bialgebra.toml");

    let mut b = Builder::new("Broken: sl2 with the dual bracket [E*, F*] = H*, which is not a cocycle.", q());
    b.lr("sl2", sl2.clone());
    b.lr("sl2_bad_dual", instances::lie_algebra(3, &[(1, 2, 0, 1)]));
    b.bialgebra("sl2_bad", "sl2", "sl2_bad_dual");
    b.write(&dir, "broken_sl2_bialgebra.toml");

    std::fs::write(dir.join("malformed_rational.toml"), MALFORMED).expect("writable fixtures dir");
}

const MALFORMED: &str = "# Broken input: a rational with zero denominator.\n\n[[lie_rinehart]]\nname = \"bad\"\nrank = 2\n\n[[lie_rinehart.bracket]]\ni = 0\nj = 1\nk = 1\nvalue = [\"1/0\"]\n";
