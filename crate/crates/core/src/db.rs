//! The labeled in-memory database: table policies, a concrete row-predicate
//! language with syntactically derivable arity, the four check-free query
//! primitives, and the predicate-label functions the evaluator's checks are
//! built from.

use std::fmt;

use crate::label::Label;
use crate::term::{Name, Term};

/// Which row field a predicate examines.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum FieldRef {
    Key,
    Field1,
    Field2,
}

impl FieldRef {
    pub fn render(&self) -> &'static str {
        match self {
            FieldRef::Key => "key",
            FieldRef::Field1 => "f1",
            FieldRef::Field2 => "f2",
        }
    }
}

/// Row predicates. Arity is a pure function of which fields occur: a
/// predicate mentioning `Field2` anywhere has arity 2, else `Field1` gives
/// arity 1, else 0. Key references do not raise arity; key visibility is
/// governed by the table label, which select/delete already fold in.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Pred<L> {
    True,
    False,
    /// Structural equality of a field against a database-value constant.
    Eq(FieldRef, Box<Term<L>>),
    /// Integer less-than; false when the field is not an integer.
    Lt(FieldRef, i64),
    And(Box<Pred<L>>, Box<Pred<L>>),
    Or(Box<Pred<L>>, Box<Pred<L>>),
    Not(Box<Pred<L>>),
}

impl<L> Pred<L> {
    pub fn boxed(self) -> Box<Pred<L>> {
        Box::new(self)
    }

    fn mentions(&self, f: FieldRef) -> bool {
        match self {
            Pred::True | Pred::False => false,
            Pred::Eq(g, _) => *g == f,
            Pred::Lt(g, _) => *g == f,
            Pred::And(a, b) | Pred::Or(a, b) => a.mentions(f) || b.mentions(f),
            Pred::Not(p) => p.mentions(f),
        }
    }

    /// 2 if `Field2` occurs, else 1 if `Field1` occurs, else 0.
    pub fn arity(&self) -> u8 {
        if self.mentions(FieldRef::Field2) {
            2
        } else if self.mentions(FieldRef::Field1) {
            1
        } else {
            0
        }
    }

    pub fn for_each_label<F: FnMut(&L)>(&self, f: &mut F) {
        match self {
            Pred::Eq(_, t) => t.for_each_label(f),
            Pred::And(a, b) | Pred::Or(a, b) => {
                a.for_each_label(f);
                b.for_each_label(f);
            }
            Pred::Not(p) => p.for_each_label(f),
            _ => {}
        }
    }
}

impl<L: Eq> Pred<L> {
    /// Structural evaluation against a row. Total: `Eq` compares terms
    /// structurally (holes equal only holes) and `Lt` is false on
    /// non-integer fields.
    pub fn eval(&self, row: &Row<L>) -> bool {
        let field = |f: &FieldRef| -> &Term<L> {
            match f {
                FieldRef::Key => &row.key,
                FieldRef::Field1 => &row.v1,
                FieldRef::Field2 => &row.v2,
            }
        };
        match self {
            Pred::True => true,
            Pred::False => false,
            Pred::Eq(f, c) => field(f) == &**c,
            Pred::Lt(f, n) => matches!(field(f), Term::Int(v) if v < n),
            Pred::And(a, b) => a.eval(row) && b.eval(row),
            Pred::Or(a, b) => a.eval(row) || b.eval(row),
            Pred::Not(p) => !p.eval(row),
        }
    }
}

/// The label of a row's second field as a total function of the first
/// field's value. A serializable AST stands in for an arbitrary function so
/// policies can be generated, compared and written to files.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LabelFn<L> {
    Const(L),
    /// Takes the first branch when the first field is exactly `Int(n)`,
    /// the second branch otherwise (including non-integer fields).
    IfEqInt(i64, Box<LabelFn<L>>, Box<LabelFn<L>>),
    Join(Box<LabelFn<L>>, Box<LabelFn<L>>),
    Meet(Box<LabelFn<L>>, Box<LabelFn<L>>),
}

impl<L> LabelFn<L> {
    pub fn boxed(self) -> Box<LabelFn<L>> {
        Box::new(self)
    }
}

impl<L: Label> LabelFn<L> {
    pub fn apply(&self, v1: &Term<L>) -> L {
        match self {
            LabelFn::Const(l) => l.clone(),
            LabelFn::IfEqInt(n, then, els) => match v1 {
                Term::Int(k) if k == n => then.apply(v1),
                _ => els.apply(v1),
            },
            LabelFn::Join(f, g) => f.apply(v1).join(&g.apply(v1)),
            LabelFn::Meet(f, g) => f.apply(v1).meet(&g.apply(v1)),
        }
    }

    pub fn for_each_label<F: FnMut(&L)>(&self, f: &mut F) {
        match self {
            LabelFn::Const(l) => f(l),
            LabelFn::IfEqInt(_, a, b) | LabelFn::Join(a, b) | LabelFn::Meet(a, b) => {
                a.for_each_label(f);
                b.for_each_label(f);
            }
        }
    }
}

/// Security policy of a table: the table label protects the table's length,
/// the constant first-field label protects first-field values (and must flow
/// into the table label), the second-field label is a function of the first
/// field, and `fresh` feeds the next insertion key.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TablePolicy<L> {
    pub table_label: L,
    pub fresh: i64,
    pub label_field1: L,
    pub label_field2: LabelFn<L>,
}

impl<L: Label> TablePolicy<L> {
    /// The key the next inserted row receives.
    pub fn fresh_key(&self) -> Term<L> {
        Term::Int(self.fresh)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Row<L> {
    pub key: Term<L>,
    pub v1: Term<L>,
    pub v2: Term<L>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Table<L> {
    pub policy: TablePolicy<L>,
    pub rows: Vec<Row<L>>,
}

impl<L: Label> Table<L> {
    /// Second-field label for a given first-field value.
    pub fn label_f2(&self, v1: &Term<L>) -> L {
        self.policy.label_field2.apply(v1)
    }

    /// Everything a predicate may read from this table: for arity-2
    /// predicates the first-field label joined with the second-field labels
    /// of every row, for arity 1 the first-field label, bottom otherwise.
    pub fn label_pred(&self, p: &Pred<L>) -> L {
        match p.arity() {
            2 => self
                .rows
                .iter()
                .fold(self.policy.label_field1.clone(), |acc, r| acc.join(&self.label_f2(&r.v1))),
            1 => self.policy.label_field1.clone(),
            _ => L::bottom(),
        }
    }

    /// What is needed to read the label of the predicate itself: the
    /// first-field label when the predicate has arity 2, bottom otherwise.
    /// Always flows into `label_pred`.
    pub fn label_read(&self, p: &Pred<L>) -> L {
        if p.arity() == 2 {
            self.policy.label_field1.clone()
        } else {
            L::bottom()
        }
    }
}

/// A named collection of tables; iteration order is insertion order.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Database<L> {
    pub tables: Vec<(Name, Table<L>)>,
}

impl<L> Database<L> {
    pub fn empty() -> Self {
        Database { tables: Vec::new() }
    }

    pub fn lookup_table(&self, name: &str) -> Option<&Table<L>> {
        self.tables.iter().find(|(n, _)| n == name).map(|(_, t)| t)
    }

    fn table_mut(&mut self, name: &str) -> Option<&mut Table<L>> {
        self.tables.iter_mut().find(|(n, _)| n == name).map(|(_, t)| t)
    }
}

impl<L: Label> Database<L> {
    /// Check-free insert (`+=`): appends the row and bumps the table's fresh
    /// counter. Only called after lookup has succeeded; an absent table is a
    /// contract violation.
    pub fn insert_row(mut self, name: &str, row: Row<L>) -> Self {
        let table = self.table_mut(name).expect("insert_row: table must exist");
        debug_assert!(
            matches!(&row.key, Term::Int(k) if *k == table.policy.fresh),
            "insert_row: key must be the fresh counter"
        );
        table.rows.push(row);
        table.policy.fresh += 1;
        self
    }

    /// Check-free select (`?=`): the matching rows, in row order, as a term
    /// list. Each element nests the second field's labeled value (whose
    /// label depends on the first field) under the first field's label, so
    /// that term erasure reproduces row erasure.
    pub fn select_rows(&self, name: &str, pred: &Pred<L>) -> Term<L> {
        let table = self.lookup_table(name).expect("select_rows: table must exist");
        let mut out = Term::Nil;
        for row in table.rows.iter().rev() {
            if pred.eval(row) {
                let l2 = table.label_f2(&row.v1);
                let fields = Term::Cons(
                    row.key.clone().boxed(),
                    Term::Cons(
                        row.v1.clone().boxed(),
                        Term::Cons(
                            Term::Labeled(l2, row.v2.clone().boxed()).boxed(),
                            Term::Nil.boxed(),
                        )
                        .boxed(),
                    )
                    .boxed(),
                );
                let item = Term::Labeled(table.policy.label_field1.clone(), fields.boxed());
                out = Term::Cons(item.boxed(), out.boxed());
            }
        }
        out
    }

    /// Check-free delete (`-=`): drops matching rows, preserving order and
    /// the fresh counter.
    pub fn delete_rows(mut self, name: &str, pred: &Pred<L>) -> Self {
        let table = self.table_mut(name).expect("delete_rows: table must exist");
        table.rows.retain(|r| !pred.eval(r));
        self
    }

    /// Check-free update (`:=`): replaces the values of matching rows,
    /// keeping keys and order. Matching is evaluated against the pre-update
    /// row; a single pass cannot cascade onto newly written rows.
    pub fn update_rows(mut self, name: &str, pred: &Pred<L>, v1: &Term<L>, v2: &Term<L>) -> Self {
        let table = self.table_mut(name).expect("update_rows: table must exist");
        for row in &mut table.rows {
            if pred.eval(row) {
                row.v1 = v1.clone();
                row.v2 = v2.clone();
            }
        }
        self
    }

    /// Validates every table; see [`PolicyViolation`] for what is checked.
    pub fn validate(&self) -> ValidationReport {
        let mut violations = Vec::new();
        for (i, (name, _)) in self.tables.iter().enumerate() {
            if self.tables[..i].iter().any(|(n, _)| n == name) {
                violations.push(PolicyViolation::DuplicateTable { table: name.clone() });
            }
        }
        for (name, table) in &self.tables {
            validate_table(name, table, &mut violations);
        }
        ValidationReport { violations }
    }

    pub fn for_each_label<F: FnMut(&L)>(&self, f: &mut F) {
        for (_, table) in &self.tables {
            f(&table.policy.table_label);
            f(&table.policy.label_field1);
            table.policy.label_field2.for_each_label(f);
            for row in &table.rows {
                row.key.for_each_label(f);
                row.v1.for_each_label(f);
                row.v2.for_each_label(f);
            }
        }
    }
}

fn validate_table<L: Label>(name: &str, table: &Table<L>, out: &mut Vec<PolicyViolation>) {
    let policy = &table.policy;
    if !policy.label_field1.can_flow_to(&policy.table_label) {
        out.push(PolicyViolation::Field1NotBelowTableLabel {
            table: name.to_string(),
            field1: policy.label_field1.render(),
            table_label: policy.table_label.render(),
        });
    }
    if policy.fresh < 0 {
        out.push(PolicyViolation::NegativeFresh { table: name.to_string(), fresh: policy.fresh });
    }
    let mut seen = Vec::new();
    for (i, row) in table.rows.iter().enumerate() {
        match &row.key {
            Term::Int(k) => {
                if seen.contains(k) {
                    out.push(PolicyViolation::DuplicateKey { table: name.to_string(), key: *k });
                }
                if *k >= policy.fresh {
                    out.push(PolicyViolation::KeyNotBelowFresh {
                        table: name.to_string(),
                        key: *k,
                        fresh: policy.fresh,
                    });
                }
                seen.push(*k);
            }
            _ => out.push(PolicyViolation::KeyNotInt { table: name.to_string(), index: i }),
        }
        for (field, value) in [("v1", &row.v1), ("v2", &row.v2)] {
            if !value.is_db_value() {
                out.push(PolicyViolation::StoredValueNotDbValue {
                    table: name.to_string(),
                    index: i,
                    field,
                });
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PolicyViolation {
    Field1NotBelowTableLabel { table: Name, field1: String, table_label: String },
    StoredValueNotDbValue { table: Name, index: usize, field: &'static str },
    KeyNotInt { table: Name, index: usize },
    DuplicateKey { table: Name, key: i64 },
    KeyNotBelowFresh { table: Name, key: i64, fresh: i64 },
    NegativeFresh { table: Name, fresh: i64 },
    DuplicateTable { table: Name },
}

impl fmt::Display for PolicyViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PolicyViolation::Field1NotBelowTableLabel { table, field1, table_label } => write!(
                f,
                "table `{table}`: labelField1 {field1} does not flow to tableLabel {table_label}"
            ),
            PolicyViolation::StoredValueNotDbValue { table, index, field } => {
                write!(f, "table `{table}`: row {index} field {field} is not a database value")
            }
            PolicyViolation::KeyNotInt { table, index } => {
                write!(f, "table `{table}`: row {index} key is not an integer")
            }
            PolicyViolation::DuplicateKey { table, key } => {
                write!(f, "table `{table}`: duplicate key {key}")
            }
            PolicyViolation::KeyNotBelowFresh { table, key, fresh } => {
                write!(f, "table `{table}`: key {key} is not below fresh counter {fresh}")
            }
            PolicyViolation::NegativeFresh { table, fresh } => {
                write!(f, "table `{table}`: negative fresh counter {fresh}")
            }
            PolicyViolation::DuplicateTable { table } => write!(f, "duplicate table `{table}`"),
        }
    }
}

#[derive(Debug, Clone, Default)]
pub struct ValidationReport {
    pub violations: Vec<PolicyViolation>,
}

impl ValidationReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::label::{Label, PowersetLabel};

    type L = PowersetLabel;
    type T = Term<L>;

    fn ps(names: &[&str]) -> L {
        PowersetLabel::from_names(names.iter().copied())
    }

    fn table(table_label: L, field1: L, field2: LabelFn<L>, rows: Vec<(i64, T, T)>) -> Table<L> {
        let fresh = rows.len() as i64;
        Table {
            policy: TablePolicy { table_label, fresh, label_field1: field1, label_field2: field2 },
            rows: rows
                .into_iter()
                .map(|(k, v1, v2)| Row { key: Term::Int(k), v1, v2 })
                .collect(),
        }
    }

    fn one_table_db(rows: Vec<(i64, T, T)>) -> Database<L> {
        let t = table(ps(&["A"]), ps(&["A"]), LabelFn::Const(ps(&["B"])), rows);
        Database { tables: vec![("t".into(), t)] }
    }

    #[test]
    fn lookup() {
        let db = one_table_db(vec![]);
        assert!(db.lookup_table("t").is_some());
        assert!(db.lookup_table("u").is_none());
        assert!(Database::<L>::empty().lookup_table("t").is_none());
    }

    #[test]
    fn pred_arity_from_field_occurrences() {
        assert_eq!(Pred::<L>::True.arity(), 0);
        assert_eq!(Pred::<L>::Eq(FieldRef::Field1, T::Int(3).boxed()).arity(), 1);
        let both = Pred::And(
            Pred::Eq(FieldRef::Field1, T::Int(3).boxed()).boxed(),
            Pred::Lt(FieldRef::Field2, 9).boxed(),
        );
        assert_eq!(both.arity(), 2);
        assert_eq!(Pred::<L>::Eq(FieldRef::Key, T::Int(0).boxed()).arity(), 0);
        assert_eq!(Pred::<L>::Not(Pred::Lt(FieldRef::Field2, 1).boxed()).arity(), 2);
    }

    #[test]
    fn pred_eval() {
        let row = Row { key: Term::Int(0), v1: T::Int(3), v2: T::Unit };
        assert!(Pred::<L>::True.eval(&row));
        assert!(Pred::Eq(FieldRef::Field1, T::Int(3).boxed()).eval(&row));
        assert!(!Pred::<L>::Lt(FieldRef::Field2, 5).eval(&row));
        let holes = Row { key: Term::Int(0), v1: T::Hole, v2: T::Hole };
        assert!(Pred::Eq(FieldRef::Field1, T::Hole.boxed()).eval(&holes));
        assert!(!Pred::Eq(FieldRef::Field1, T::Int(0).boxed()).eval(&holes));
    }

    #[test]
    fn insert_appends_and_bumps_fresh() {
        let db = one_table_db(vec![(0, T::Int(9), T::Unit)]);
        let k1 = db.lookup_table("t").unwrap().policy.fresh;
        assert_eq!(k1, 1);
        let db = db.insert_row("t", Row { key: Term::Int(1), v1: T::Int(5), v2: T::Unit });
        let db = db.insert_row("t", Row { key: Term::Int(2), v1: T::Int(6), v2: T::Unit });
        let t = db.lookup_table("t").unwrap();
        assert_eq!(t.policy.fresh, 3);
        assert_eq!(t.rows.len(), 3);
        assert_eq!(t.rows[1].key, Term::Int(1));
        assert_eq!(t.rows[2].key, Term::Int(2));
    }

    #[test]
    fn select_shapes_rows_as_nested_labeled_lists() {
        let db = one_table_db(vec![(0, T::Int(1), T::Int(9))]);
        let got = db.select_rows("t", &Pred::True);
        let fields = Term::Cons(
            T::Int(0).boxed(),
            Term::Cons(
                T::Int(1).boxed(),
                Term::Cons(
                    Term::Labeled(ps(&["B"]), T::Int(9).boxed()).boxed(),
                    T::Nil.boxed(),
                )
                .boxed(),
            )
            .boxed(),
        );
        let want = Term::Cons(Term::Labeled(ps(&["A"]), fields.boxed()).boxed(), T::Nil.boxed());
        assert_eq!(got, want);

        assert_eq!(one_table_db(vec![]).select_rows("t", &Pred::True), T::Nil);

        let db = one_table_db(vec![(0, T::Int(1), T::Unit), (1, T::Int(5), T::Unit)]);
        let got = db.select_rows("t", &Pred::Eq(FieldRef::Field1, T::Int(5).boxed()));
        match got {
            Term::Cons(head, tail) => {
                assert_eq!(*tail, T::Nil);
                match *head {
                    Term::Labeled(_, fields) => match *fields {
                        Term::Cons(k, _) => assert_eq!(*k, T::Int(1)),
                        other => panic!("unexpected fields {other:?}"),
                    },
                    other => panic!("unexpected element {other:?}"),
                }
            }
            other => panic!("expected one-element list, got {other:?}"),
        }
    }

    #[test]
    fn delete_filters_and_keeps_fresh() {
        let db = one_table_db(vec![(0, T::Int(1), T::Unit), (1, T::Int(2), T::Unit)]);
        let emptied = db.clone().delete_rows("t", &Pred::True);
        assert_eq!(emptied.lookup_table("t").unwrap().rows.len(), 0);
        assert_eq!(emptied.lookup_table("t").unwrap().policy.fresh, 2);

        assert_eq!(db.clone().delete_rows("t", &Pred::False), db);

        let keyed = db.delete_rows("t", &Pred::Eq(FieldRef::Key, T::Int(0).boxed()));
        let rows = &keyed.lookup_table("t").unwrap().rows;
        assert_eq!(rows.len(), 1);
        assert_eq!(rows[0].key, Term::Int(1));
    }

    #[test]
    fn update_replaces_matching_rows_in_one_pass() {
        let db = one_table_db(vec![(0, T::Int(1), T::Unit), (1, T::Int(2), T::Unit)]);
        let all = db.clone().update_rows("t", &Pred::True, &T::Int(7), &T::True);
        let rows = &all.lookup_table("t").unwrap().rows;
        assert_eq!(rows.len(), 2);
        for (i, row) in rows.iter().enumerate() {
            assert_eq!(row.key, Term::Int(i as i64));
            assert_eq!(row.v1, T::Int(7));
            assert_eq!(row.v2, T::True);
        }

        assert_eq!(db.clone().update_rows("t", &Pred::False, &T::Int(7), &T::True), db);

        // Matching is against the pre-update row: writing a value that would
        // itself match does not make the pass re-fire on other rows.
        let db = one_table_db(vec![(0, T::Int(1), T::Unit), (1, T::Int(3), T::Unit)]);
        let out = db.update_rows("t", &Pred::Lt(FieldRef::Field1, 2), &T::Int(0), &T::Unit);
        let rows = &out.lookup_table("t").unwrap().rows;
        assert_eq!(rows[0].v1, T::Int(0));
        assert_eq!(rows[1].v1, T::Int(3));
    }

    #[test]
    fn label_fn_is_total() {
        let f = LabelFn::Const(ps(&["B"]));
        assert_eq!(f.apply(&T::Unit), ps(&["B"]));
        let g = LabelFn::IfEqInt(0, LabelFn::Const(ps(&["B"])).boxed(), LabelFn::Const(ps(&["C"])).boxed());
        assert_eq!(g.apply(&T::Int(0)), ps(&["B"]));
        assert_eq!(g.apply(&T::Int(1)), ps(&["C"]));
        assert_eq!(g.apply(&T::Hole), ps(&["C"]));
        let j = LabelFn::Join(LabelFn::Const(ps(&["A"])).boxed(), LabelFn::Const(ps(&["B"])).boxed());
        assert_eq!(j.apply(&T::True), ps(&["A", "B"]));
    }

    #[test]
    fn label_pred_by_arity() {
        let lf2 = LabelFn::IfEqInt(0, LabelFn::Const(ps(&["B"])).boxed(), LabelFn::Const(ps(&["C"])).boxed());
        let t = table(
            ps(&["A", "B", "C"]),
            ps(&["A"]),
            lf2,
            vec![(0, T::Int(0), T::Unit), (1, T::Int(1), T::Unit)],
        );
        assert_eq!(t.label_pred(&Pred::True), PowersetLabel::bottom());
        assert_eq!(t.label_pred(&Pred::Eq(FieldRef::Field1, T::Int(3).boxed())), ps(&["A"]));
        let p2 = Pred::Lt(FieldRef::Field2, 5);
        assert_eq!(t.label_pred(&p2), ps(&["A", "B", "C"]));
        assert_eq!(t.label_read(&p2), ps(&["A"]));
        assert_eq!(t.label_read(&Pred::Eq(FieldRef::Field1, T::Int(3).boxed())), PowersetLabel::bottom());
        assert_eq!(t.label_read(&Pred::True), PowersetLabel::bottom());
        // labelRead always flows into labelPred.
        for p in [
            Pred::True,
            Pred::Eq(FieldRef::Field1, T::Int(1).boxed()),
            Pred::Lt(FieldRef::Field2, 3),
            Pred::And(Pred::Lt(FieldRef::Key, 9).boxed(), Pred::Lt(FieldRef::Field2, 3).boxed()),
        ] {
            assert!(t.label_read(&p).can_flow_to(&t.label_pred(&p)));
        }
    }

    #[test]
    fn validation() {
        let good = one_table_db(vec![(0, T::Int(1), T::Unit)]);
        assert!(good.validate().passed());

        let mut bad = one_table_db(vec![]);
        bad.tables[0].1.policy.label_field1 = ps(&["A", "B"]);
        bad.tables[0].1.policy.table_label = ps(&["A"]);
        let report = bad.validate();
        assert!(matches!(report.violations[0], PolicyViolation::Field1NotBelowTableLabel { .. }));

        let mut lam_row = one_table_db(vec![(0, T::Int(1), T::Unit)]);
        lam_row.tables[0].1.rows[0].v1 = Term::Lam(0, Term::Var(0).boxed());
        assert!(lam_row
            .validate()
            .violations
            .iter()
            .any(|v| matches!(v, PolicyViolation::StoredValueNotDbValue { .. })));

        let mut stale_key = one_table_db(vec![(0, T::Int(1), T::Unit)]);
        stale_key.tables[0].1.policy.fresh = 0;
        assert!(stale_key
            .validate()
            .violations
            .iter()
            .any(|v| matches!(v, PolicyViolation::KeyNotBelowFresh { .. })));
    }

    #[test]
    fn primitive_ops_preserve_validity_and_counts() {
        let db = one_table_db(vec![(0, T::Int(0), T::Unit), (1, T::Int(1), T::True)]);
        let before = db.lookup_table("t").unwrap().rows.len();

        let inserted = db.clone().insert_row("t", Row { key: Term::Int(2), v1: T::Hole, v2: T::Int(4) });
        assert_eq!(inserted.lookup_table("t").unwrap().rows.len(), before + 1);
        assert!(inserted.validate().passed());

        let deleted = db.clone().delete_rows("t", &Pred::Lt(FieldRef::Key, 1));
        assert!(deleted.lookup_table("t").unwrap().rows.len() <= before);
        assert!(deleted.validate().passed());

        let updated = db.clone().update_rows("t", &Pred::True, &T::Int(9), &T::Hole);
        let t = updated.lookup_table("t").unwrap();
        assert_eq!(t.rows.len(), before);
        let keys: Vec<_> = t.rows.iter().map(|r| r.key.clone()).collect();
        assert_eq!(keys, vec![Term::Int(0), Term::Int(1)]);
        assert!(updated.validate().passed());
    }
}
