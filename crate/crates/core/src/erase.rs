//! Observer-indexed erasure: the functions that define what an attacker at a
//! given label can see of a term, a program and a database.

use crate::db::{Database, Row, Table, TablePolicy};
use crate::label::Label;
use crate::term::{Program, Term};

/// Replaces data protected by labels that do not flow into `observer` with
/// holes.
///
/// Labeled values above the observer keep their label but lose their
/// payload. A pending labeling operation whose (already evaluated) target
/// label is above the observer is erased preemptively, since evaluation
/// would produce exactly such a labeled value. Everything else is
/// homomorphic; names, predicates and leaves are unchanged. Database values
/// erase to database values.
pub fn erase_term<L: Label>(observer: &L, t: &Term<L>) -> Term<L> {
    match t {
        Term::Labeled(l1, inner) => {
            if l1.can_flow_to(observer) {
                Term::Labeled(l1.clone(), erase_term(observer, inner).boxed())
            } else {
                Term::Labeled(l1.clone(), Term::Hole.boxed())
            }
        }
        Term::MkLabeled(lt, inner) => match &**lt {
            Term::Label(l1) if !l1.can_flow_to(observer) => {
                Term::MkLabeled(Term::Label(l1.clone()).boxed(), Term::Hole.boxed())
            }
            _ => Term::MkLabeled(
                erase_term(observer, lt).boxed(),
                erase_term(observer, inner).boxed(),
            ),
        },
        Term::LabelOf(t) => Term::LabelOf(erase_term(observer, t).boxed()),
        Term::Lam(x, t) => Term::Lam(*x, erase_term(observer, t).boxed()),
        Term::App(a, b) => {
            Term::App(erase_term(observer, a).boxed(), erase_term(observer, b).boxed())
        }
        Term::Fix(t) => Term::Fix(erase_term(observer, t).boxed()),
        Term::If(c, a, b) => Term::If(
            erase_term(observer, c).boxed(),
            erase_term(observer, a).boxed(),
            erase_term(observer, b).boxed(),
        ),
        Term::Op(o, a, b) => {
            Term::Op(*o, erase_term(observer, a).boxed(), erase_term(observer, b).boxed())
        }
        Term::Cons(a, b) => {
            Term::Cons(erase_term(observer, a).boxed(), erase_term(observer, b).boxed())
        }
        Term::Bind(a, b) => {
            Term::Bind(erase_term(observer, a).boxed(), erase_term(observer, b).boxed())
        }
        Term::Return(t) => Term::Return(erase_term(observer, t).boxed()),
        Term::Lio(t) => Term::Lio(erase_term(observer, t).boxed()),
        Term::Unlabel(t) => Term::Unlabel(erase_term(observer, t).boxed()),
        Term::ToLabeled(a, b) => {
            Term::ToLabeled(erase_term(observer, a).boxed(), erase_term(observer, b).boxed())
        }
        Term::Insert(n, a, b) => Term::Insert(
            n.clone(),
            erase_term(observer, a).boxed(),
            erase_term(observer, b).boxed(),
        ),
        Term::Update(n, p, a, b) => Term::Update(
            n.clone(),
            p.clone(),
            erase_term(observer, a).boxed(),
            erase_term(observer, b).boxed(),
        ),
        leaf => leaf.clone(),
    }
}

/// A configuration whose current label is above the observer collapses to a
/// hole; its database effects stay visible through database erasure.
pub fn erase_program<L: Label>(observer: &L, p: &Program<L>) -> Program<L> {
    match p {
        Program::Hole { db } => Program::Hole { db: erase_db(observer, db) },
        Program::Pg { label, db, term } => {
            if label.can_flow_to(observer) {
                Program::Pg {
                    label: label.clone(),
                    db: erase_db(observer, db),
                    term: erase_term(observer, term),
                }
            } else {
                Program::Hole { db: erase_db(observer, db) }
            }
        }
    }
}

/// Per-table erasure preserving names and order.
pub fn erase_db<L: Label>(observer: &L, db: &Database<L>) -> Database<L> {
    Database {
        tables: db
            .tables
            .iter()
            .map(|(n, t)| (n.clone(), erase_table(observer, t)))
            .collect(),
    }
}

/// A table whose label is above the observer loses all rows and its fresh
/// counter, hiding its length: the counter counts insertions, so keeping it
/// would leak exactly what dropping the rows hides (every insert bumps it,
/// and inserting requires a current label inside the table label). The rest
/// of the policy is label data and survives. Visible tables erase row by
/// row.
pub fn erase_table<L: Label>(observer: &L, table: &Table<L>) -> Table<L> {
    if !table.policy.table_label.can_flow_to(observer) {
        let mut policy = table.policy.clone();
        policy.fresh = 0;
        Table { policy, rows: Vec::new() }
    } else {
        Table {
            policy: table.policy.clone(),
            rows: table.rows.iter().map(|r| erase_row(observer, &table.policy, r)).collect(),
        }
    }
}

/// If the first field's label is hidden, both fields become holes (the
/// second field's label depends on the first field's value, so it is hidden
/// too). If only the second field's label is hidden, the second field
/// becomes a hole. Keys are never erased.
pub fn erase_row<L: Label>(observer: &L, policy: &TablePolicy<L>, row: &Row<L>) -> Row<L> {
    if !policy.label_field1.can_flow_to(observer) {
        Row { key: row.key.clone(), v1: Term::Hole, v2: Term::Hole }
    } else if !policy.label_field2.apply(&row.v1).can_flow_to(observer) {
        Row { key: row.key.clone(), v1: erase_term(observer, &row.v1), v2: Term::Hole }
    } else {
        Row {
            key: row.key.clone(),
            v1: erase_term(observer, &row.v1),
            v2: erase_term(observer, &row.v2),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::db::LabelFn;
    use crate::label::{PowersetLabel, TwoPointLabel as TP};

    type T = Term<TP>;

    #[test]
    fn labeled_payloads_above_observer_become_holes() {
        let t = T::Labeled(TP::Secret, T::Int(3).boxed());
        assert_eq!(erase_term(&TP::Public, &t), T::Labeled(TP::Secret, T::Hole.boxed()));
        let lo = T::Labeled(TP::Public, T::Int(3).boxed());
        assert_eq!(erase_term(&TP::Secret, &lo), lo);
    }

    #[test]
    fn pending_labeling_is_erased_preemptively() {
        let t = T::MkLabeled(T::Label(TP::Secret).boxed(), T::Int(3).boxed());
        assert_eq!(
            erase_term(&TP::Public, &t),
            T::MkLabeled(T::Label(TP::Secret).boxed(), T::Hole.boxed())
        );
        // An unevaluated label term stays homomorphic.
        let open = T::MkLabeled(
            T::Op(crate::term::LabelOp::Join, T::Label(TP::Secret).boxed(), T::Label(TP::Public).boxed())
                .boxed(),
            T::Labeled(TP::Secret, T::Int(1).boxed()).boxed(),
        );
        match erase_term(&TP::Public, &open) {
            Term::MkLabeled(_, payload) => {
                assert_eq!(*payload, T::Labeled(TP::Secret, T::Hole.boxed()))
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn db_values_stay_db_values() {
        for v in [T::Hole, T::Int(1), T::Unit, T::Label(TP::Secret), T::True, T::False] {
            assert!(erase_term(&TP::Public, &v).is_db_value());
        }
    }

    fn two_point_db(rows: Vec<(i64, T, T)>, table_label: TP, f1: TP, f2: TP) -> Database<TP> {
        let fresh = rows.len() as i64;
        Database {
            tables: vec![(
                "t".into(),
                Table {
                    policy: TablePolicy {
                        table_label,
                        fresh,
                        label_field1: f1,
                        label_field2: LabelFn::Const(f2),
                    },
                    rows: rows
                        .into_iter()
                        .map(|(k, v1, v2)| Row { key: Term::Int(k), v1, v2 })
                        .collect(),
                },
            )],
        }
    }

    #[test]
    fn program_erasure() {
        let db = two_point_db(vec![], TP::Public, TP::Public, TP::Public);
        let hi = Program::pg(TP::Secret, db.clone(), T::Return(T::Unit.boxed()));
        assert_eq!(erase_program(&TP::Public, &hi), Program::Hole { db: db.clone() });
        let lo = Program::pg(TP::Public, db.clone(), T::Return(T::Unit.boxed()));
        assert_eq!(erase_program(&TP::Secret, &lo), lo);
        let hole = Program::Hole { db: db.clone() };
        assert_eq!(erase_program(&TP::Public, &hole), hole);
    }

    #[test]
    fn hidden_tables_lose_rows_and_fresh_but_keep_labels() {
        let db = two_point_db(vec![(0, T::Int(1), T::Int(2))], TP::Secret, TP::Public, TP::Public);
        let erased = erase_db(&TP::Public, &db);
        let t = erased.lookup_table("t").unwrap();
        assert!(t.rows.is_empty());
        assert_eq!(t.policy.fresh, 0);
        let original = &db.lookup_table("t").unwrap().policy;
        assert_eq!(t.policy.table_label, original.table_label);
        assert_eq!(t.policy.label_field1, original.label_field1);
        assert_eq!(t.policy.label_field2, original.label_field2);
        // Visible tables keep their counter.
        let vis = two_point_db(vec![(0, T::Int(1), T::Int(2))], TP::Public, TP::Public, TP::Public);
        assert_eq!(erase_db(&TP::Public, &vis).lookup_table("t").unwrap().policy.fresh, 1);
    }

    #[test]
    fn row_erasure_cases() {
        let ps = |names: &[&str]| PowersetLabel::from_names(names.iter().copied());
        let policy = TablePolicy {
            table_label: ps(&["A", "B"]),
            fresh: 3,
            label_field1: ps(&["A", "B"]),
            label_field2: LabelFn::Const(ps(&["A"])),
        };
        let row = Row { key: Term::Int(0), v1: Term::Int(1), v2: Term::Int(9) };
        // labelF1 = {A,B} hides everything from {A}.
        let erased = erase_row(&ps(&["A"]), &policy, &row);
        assert_eq!(erased, Row { key: Term::Int(0), v1: Term::Hole, v2: Term::Hole });

        // labelF1 = {A} visible, labelF2 depends on v1: {A} for 0, {B} else.
        let policy = TablePolicy {
            table_label: ps(&["A", "B"]),
            fresh: 3,
            label_field1: ps(&["A"]),
            label_field2: LabelFn::IfEqInt(
                0,
                LabelFn::Const(ps(&["A"])).boxed(),
                LabelFn::Const(ps(&["B"])).boxed(),
            ),
        };
        let row = Row { key: Term::Int(2), v1: Term::Int(1), v2: Term::Int(9) };
        let erased = erase_row(&ps(&["A"]), &policy, &row);
        assert_eq!(erased, Row { key: Term::Int(2), v1: Term::Int(1), v2: Term::Hole });
        let row0 = Row { key: Term::Int(2), v1: Term::Int(0), v2: Term::Int(9) };
        assert_eq!(erase_row(&ps(&["A"]), &policy, &row0), row0);
    }

    #[test]
    fn erasure_is_idempotent_on_samples() {
        let samples: Vec<T> = vec![
            T::Labeled(TP::Secret, T::Int(3).boxed()),
            T::MkLabeled(T::Label(TP::Secret).boxed(), T::Int(3).boxed()),
            T::Bind(
                T::Unlabel(T::Labeled(TP::Secret, T::True.boxed()).boxed()).boxed(),
                T::Lam(0, T::Return(T::Var(0).boxed()).boxed()).boxed(),
            ),
        ];
        for t in samples {
            let once = erase_term(&TP::Public, &t);
            assert_eq!(erase_term(&TP::Public, &once), once);
        }
    }

    #[test]
    fn erasure_commutes_with_substitution_on_samples() {
        // erase(subst(x, tx, t)) == subst(x, erase(tx), erase(t))
        let tx = T::Labeled(TP::Secret, T::Int(3).boxed());
        let t = T::Bind(
            T::Unlabel(T::Var(0).boxed()).boxed(),
            T::Lam(1, T::Return(T::Var(1).boxed()).boxed()).boxed(),
        );
        let lhs = erase_term(&TP::Public, &t.clone().subst(0, &tx));
        let rhs = erase_term(&TP::Public, &t).subst(0, &erase_term(&TP::Public, &tx));
        assert_eq!(lhs, rhs);
    }
}
