//! Small-step evaluation: one pure-term step, one monadic step, and the
//! fuel-bounded transitive closure.
//!
//! A single fuel counter is shared across the whole run and decremented once
//! per monadic step, including steps taken inside the nested runs that bind
//! and scoped labeling perform. Runs that do not finish within fuel are
//! reported out of band as [`Outcome::FuelExhausted`], never encoded as an
//! exception term.

use crate::db::Database;
use crate::label::Label;
use crate::term::{Name, Program, Term};

/// Remaining step budget for one run.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Fuel {
    remaining: u64,
}

impl Fuel {
    pub fn new(remaining: u64) -> Self {
        Fuel { remaining }
    }

    pub fn remaining(&self) -> u64 {
        self.remaining
    }

    fn take(&mut self) -> bool {
        if self.remaining == 0 {
            false
        } else {
            self.remaining -= 1;
            true
        }
    }
}

/// Rule mutations used as regression guards: each reproduces a label raise
/// whose omission is a real leak, so the noninterference suite must fail
/// under it.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Mutation {
    #[default]
    None,
    /// Insert does not join the first value's label into the current label.
    InsertSkipValueTaint,
    /// Update does not join the table label into the current label.
    UpdateSkipTableTaint,
}

impl Mutation {
    pub fn parse(s: &str) -> Option<Mutation> {
        match s {
            "none" => Some(Mutation::None),
            "insert-skip-value-taint" => Some(Mutation::InsertSkipValueTaint),
            "update-skip-table-taint" => Some(Mutation::UpdateSkipTableTaint),
            _ => None,
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Mutation::None => "none",
            Mutation::InsertSkipValueTaint => "insert-skip-value-taint",
            Mutation::UpdateSkipTableTaint => "update-skip-table-taint",
        }
    }
}

/// Result of one application of [`eval`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum StepOutcome<L> {
    Stepped(Program<L>),
    /// No fuel was left; carries the configuration that could not step.
    Exhausted(Program<L>),
}

/// Result of [`eval_star`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Outcome<L> {
    /// The term is a value (or the program a hole).
    Terminated(Program<L>),
    /// Fuel ran out; carries the last configuration reached.
    FuelExhausted(Program<L>),
}

impl<L> Outcome<L> {
    pub fn terminated(&self) -> Option<&Program<L>> {
        match self {
            Outcome::Terminated(p) => Some(p),
            Outcome::FuelExhausted(_) => None,
        }
    }

    pub fn program(&self) -> &Program<L> {
        match self {
            Outcome::Terminated(p) | Outcome::FuelExhausted(p) => p,
        }
    }
}

/// Per-step instrumentation record: enough to check label monotonicity,
/// write safety and the table-length discipline on every application of
/// [`eval`], including the nested ones.
#[derive(Debug, Clone)]
pub struct StepRecord<L> {
    pub label_before: L,
    pub label_after: L,
    /// (table, row count, table label) before the step.
    pub tables_before: Vec<(Name, usize, L)>,
    pub tables_after: Vec<(Name, usize, L)>,
    pub safe_after: bool,
}

type Log<'a, L> = Option<&'a mut Vec<StepRecord<L>>>;

/// One pure-term step. Values and variables step to themselves; stuck terms
/// (an application of a non-lambda, a label projection of a non-labeled
/// value) self-step and surface as fuel exhaustion.
pub fn eval_term<L: Label>(t: Term<L>) -> Term<L> {
    match t {
        Term::LabelOf(inner) => match *inner {
            Term::Labeled(l, _) => Term::Label(l),
            other => Term::LabelOf(eval_term(other).boxed()),
        },
        Term::App(f, a) => match *f {
            Term::Lam(x, body) => body.subst(x, &a),
            other => Term::App(eval_term(other).boxed(), a),
        },
        Term::Fix(f) => match *f {
            Term::Lam(x, body) => {
                let rec = Term::Fix(Term::Lam(x, body.clone()).boxed());
                body.subst(x, &rec)
            }
            other => Term::Fix(eval_term(other).boxed()),
        },
        Term::Op(o, a, b) => match (*a, *b) {
            (Term::Label(l1), Term::Label(l2)) => match o {
                crate::term::LabelOp::Meet => Term::Label(l1.meet(&l2)),
                crate::term::LabelOp::Join => Term::Label(l1.join(&l2)),
                crate::term::LabelOp::CanFlowTo => Term::from_bool(l1.can_flow_to(&l2)),
            },
            (Term::Label(l1), b) => {
                Term::Op(o, Term::Label(l1).boxed(), eval_term(b).boxed())
            }
            (a, b) => Term::Op(o, eval_term(a).boxed(), b.boxed()),
        },
        Term::If(c, a, b) => match *c {
            Term::True => *a,
            Term::False => *b,
            other => Term::If(eval_term(other).boxed(), a, b),
        },
        v => v,
    }
}

/// One monadic step.
pub fn eval<L: Label>(p: Program<L>, fuel: &mut Fuel) -> StepOutcome<L> {
    eval_core(p, fuel, Mutation::None, &mut None)
}

pub fn eval_with<L: Label>(p: Program<L>, fuel: &mut Fuel, mutation: Mutation) -> StepOutcome<L> {
    eval_core(p, fuel, mutation, &mut None)
}

/// Applies [`eval`] until the term is a value or the program is a hole.
pub fn eval_star<L: Label>(p: Program<L>, fuel: &mut Fuel) -> Outcome<L> {
    eval_star_core(p, fuel, Mutation::None, &mut None)
}

pub fn eval_star_with<L: Label>(p: Program<L>, fuel: &mut Fuel, mutation: Mutation) -> Outcome<L> {
    eval_star_core(p, fuel, mutation, &mut None)
}

/// Like [`eval_star_with`], but records a [`StepRecord`] for every eval
/// application, nested ones included.
pub fn eval_star_logged<L: Label>(
    p: Program<L>,
    fuel: &mut Fuel,
    mutation: Mutation,
    log: &mut Vec<StepRecord<L>>,
) -> Outcome<L> {
    let mut slot: Log<'_, L> = Some(log);
    eval_star_core(p, fuel, mutation, &mut slot)
}

fn table_snapshot<L: Label>(db: &Database<L>) -> Vec<(Name, usize, L)> {
    db.tables
        .iter()
        .map(|(n, t)| (n.clone(), t.rows.len(), t.policy.table_label.clone()))
        .collect()
}

fn eval_star_core<L: Label>(
    p: Program<L>,
    fuel: &mut Fuel,
    mutation: Mutation,
    log: &mut Log<'_, L>,
) -> Outcome<L> {
    let mut current = p;
    loop {
        let stop = match &current {
            Program::Hole { .. } => true,
            Program::Pg { term, .. } => term.is_value(),
        };
        if stop {
            return Outcome::Terminated(current);
        }
        match eval_core(current, fuel, mutation, log) {
            StepOutcome::Stepped(next) => current = next,
            StepOutcome::Exhausted(last) => return Outcome::FuelExhausted(last),
        }
    }
}

fn eval_core<L: Label>(
    p: Program<L>,
    fuel: &mut Fuel,
    mutation: Mutation,
    log: &mut Log<'_, L>,
) -> StepOutcome<L> {
    // A hole is a stop state; treating it as a step would make simulation
    // checks on erased programs depend on leftover fuel.
    let (lc, db, term) = match p {
        Program::Hole { db } => return StepOutcome::Stepped(Program::Hole { db }),
        Program::Pg { label, db, term } => (label, db, term),
    };
    debug_assert!(term.is_safe(), "eval requires a write-safe program");
    if !fuel.take() {
        return StepOutcome::Exhausted(Program::Pg { label: lc, db, term });
    }
    let snapshot = log.as_ref().map(|_| (lc.clone(), table_snapshot(&db)));
    let out = step_pg(lc, db, term, fuel, mutation, log);
    if let (StepOutcome::Stepped(next), Some((label_before, tables_before))) = (&out, snapshot) {
        if let (Some(sink), Program::Pg { label, db, .. }) = (log.as_mut(), next) {
            sink.push(StepRecord {
                label_before,
                label_after: label.clone(),
                tables_before,
                tables_after: table_snapshot(db),
                safe_after: next.is_safe(),
            });
        }
    }
    out
}

fn step_pg<L: Label>(
    lc: L,
    db: Database<L>,
    term: Term<L>,
    fuel: &mut Fuel,
    mutation: Mutation,
    log: &mut Log<'_, L>,
) -> StepOutcome<L> {
    let stepped = |label: L, db: Database<L>, term: Term<L>| {
        StepOutcome::Stepped(Program::Pg { label, db, term })
    };
    let ret = |t: Term<L>| Term::Return(t.boxed());
    match term {
        Term::Bind(t1, t2) => {
            let inner = Program::Pg { label: lc, db, term: *t1 };
            match eval_star_core(inner, fuel, mutation, log) {
                Outcome::Terminated(Program::Pg { label, db, term: Term::Lio(v) }) => {
                    stepped(label, db, Term::App(t2, v))
                }
                // A run that stops on any other value failed; the exception
                // keeps the label (and database) the inner run reached, so
                // taint acquired there is not dropped.
                Outcome::Terminated(Program::Pg { label, db, term: _ }) => {
                    stepped(label, db, Term::Exception)
                }
                Outcome::Terminated(Program::Hole { .. }) => {
                    unreachable!("a proper program cannot evaluate to a hole")
                }
                Outcome::FuelExhausted(last) => StepOutcome::Exhausted(last),
            }
        }
        Term::Return(t) => stepped(lc, db, Term::Lio(t)),
        Term::GetLabel => stepped(lc.clone(), db, ret(Term::Label(lc))),
        Term::MkLabeled(lt, t) => match *lt {
            Term::Label(l) => {
                if lc.can_flow_to(&l) {
                    stepped(lc, db, ret(Term::Labeled(l, t)))
                } else {
                    stepped(lc, db, Term::Exception)
                }
            }
            other => stepped(lc, db, Term::MkLabeled(eval_term(other).boxed(), t)),
        },
        Term::Unlabel(t) => match *t {
            Term::Labeled(l, v) => stepped(l.join(&lc), db, ret(*v)),
            other => stepped(lc, db, Term::Unlabel(eval_term(other).boxed())),
        },
        Term::ToLabeled(lt, t) => match *lt {
            Term::Label(l) => {
                let inner = Program::Pg { label: lc.clone(), db, term: *t };
                match eval_star_core(inner, fuel, mutation, log) {
                    Outcome::Terminated(Program::Pg { label: lc2, db: db2, term }) => match term {
                        Term::Lio(v) if lc.can_flow_to(&l) && lc2.can_flow_to(&l) => {
                            stepped(lc, db2, ret(Term::Labeled(l, v)))
                        }
                        // The scope's label is restored but the inner run's
                        // database effects persist.
                        _ => stepped(lc, db2, ret(Term::Labeled(l, Term::Exception.boxed()))),
                    },
                    Outcome::Terminated(Program::Hole { .. }) => {
                        unreachable!("a proper program cannot evaluate to a hole")
                    }
                    Outcome::FuelExhausted(last) => StepOutcome::Exhausted(last),
                }
            }
            other => stepped(lc, db, Term::ToLabeled(eval_term(other).boxed(), t)),
        },
        Term::Insert(n, t1, t2) => match (*t1, *t2) {
            (Term::Labeled(l1, v1), Term::Labeled(l2, v2)) => {
                // Checking l2 against the v1-dependent field label examines
                // v1, so the current label is raised by l1 on both branches.
                let raised = match mutation {
                    Mutation::InsertSkipValueTaint => lc.clone(),
                    _ => lc.join(&l1),
                };
                let admit = db.lookup_table(&n).map(|t| {
                    let ok = l1.can_flow_to(&t.policy.label_field1)
                        && l2.can_flow_to(&t.label_f2(&v1))
                        && lc.can_flow_to(&t.policy.table_label);
                    (ok, t.policy.fresh_key(), t.policy.table_label.clone())
                });
                match admit {
                    Some((true, key, table_label)) => {
                        // The returned key is the insertion counter, i.e. a
                        // reading of the table's length history, so success
                        // also folds in the table label.
                        let row = crate::db::Row { key: key.clone(), v1: *v1, v2: *v2 };
                        stepped(raised.join(&table_label), db.insert_row(&n, row), ret(key))
                    }
                    _ => stepped(raised, db, ret(Term::Exception)),
                }
            }
            (a, b) => stepped(lc, db, Term::Insert(n, a.boxed(), b.boxed())),
        },
        Term::Select(n, p) => match db.lookup_table(&n) {
            Some(t) => {
                let raised = lc.join(&t.policy.table_label).join(&t.label_pred(&p));
                let rows = db.select_rows(&n, &p);
                stepped(raised, db, ret(rows))
            }
            None => stepped(lc, db, ret(Term::Exception)),
        },
        Term::Delete(n, p) => {
            // The admission check compares the (row-dependent) predicate
            // label against the table label, so whichever branch is taken
            // reveals a reading of the table's contents; like update, both
            // branches fold in the table label.
            let admit = db.lookup_table(&n).map(|t| {
                let ok = lc.join(&t.label_pred(&p)).can_flow_to(&t.policy.table_label);
                (ok, lc.join(&t.label_read(&p)).join(&t.policy.table_label))
            });
            match admit {
                Some((true, raised)) => stepped(raised, db.delete_rows(&n, &p), ret(Term::Unit)),
                Some((false, raised)) => stepped(raised, db, ret(Term::Exception)),
                None => stepped(lc, db, ret(Term::Exception)),
            }
        }
        Term::Update(n, p, t1, t2) => match (*t1, *t2) {
            (Term::Labeled(l1, v1), Term::Labeled(l2, v2)) => {
                let admit = db.lookup_table(&n).map(|t| {
                    let lp = t.label_pred(&p);
                    let ok = lc.join(&l1).join(&lp).can_flow_to(&t.policy.label_field1)
                        && lc.join(&l2).join(&lp).can_flow_to(&t.label_f2(&v1));
                    // Whether the v1-dependent check even ran depends on the
                    // table's contents, so the table label is folded in on
                    // both branches.
                    let mut raised = lc.join(&l1).join(&t.label_read(&p));
                    if mutation != Mutation::UpdateSkipTableTaint {
                        raised = raised.join(&t.policy.table_label);
                    }
                    (ok, raised)
                });
                match admit {
                    Some((true, raised)) => {
                        stepped(raised, db.update_rows(&n, &p, &v1, &v2), ret(Term::Unit))
                    }
                    Some((false, raised)) => stepped(raised, db, ret(Term::Exception)),
                    None => stepped(lc, db, ret(Term::Exception)),
                }
            }
            (a, b) => stepped(lc, db, Term::Update(n, p, a.boxed(), b.boxed())),
        },
        other => stepped(lc, db, eval_term(other)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::db::{LabelFn, Pred, Row, Table, TablePolicy};
    use crate::label::{Label, PowersetLabel, TwoPointLabel as TP};
    use crate::term::LabelOp;

    type T = Term<TP>;

    fn empty_db<L: Label>() -> Database<L> {
        Database::empty()
    }

    fn pg(label: TP, term: T) -> Program<TP> {
        Program::pg(label, empty_db(), term)
    }

    fn step(p: Program<TP>) -> Program<TP> {
        match eval(p, &mut Fuel::new(100)) {
            StepOutcome::Stepped(next) => next,
            StepOutcome::Exhausted(_) => panic!("unexpected fuel exhaustion"),
        }
    }

    #[test]
    fn pure_steps() {
        let labeled = T::Labeled(TP::Secret, T::Int(1).boxed());
        assert_eq!(eval_term(T::LabelOf(labeled.boxed())), T::Label(TP::Secret));

        let id = T::Lam(0, T::Var(0).boxed());
        assert_eq!(eval_term(T::App(id.boxed(), T::Int(5).boxed())), T::Int(5));

        let a = PowersetLabel::from_names(["A"]);
        let ab = PowersetLabel::from_names(["A", "B"]);
        let flows = Term::Op(
            LabelOp::CanFlowTo,
            Term::Label(a.clone()).boxed(),
            Term::Label(ab.clone()).boxed(),
        );
        assert_eq!(eval_term(flows), Term::True);
        let back = Term::Op(LabelOp::CanFlowTo, Term::Label(ab).boxed(), Term::Label(a).boxed());
        assert_eq!(eval_term::<PowersetLabel>(back), Term::False);
    }

    #[test]
    fn return_becomes_monadic_value() {
        let got = step(pg(TP::Public, T::Return(T::Int(1).boxed())));
        assert_eq!(got, pg(TP::Public, T::Lio(T::Int(1).boxed())));
    }

    #[test]
    fn labeling_below_current_label_throws() {
        let got = step(pg(TP::Secret, T::MkLabeled(T::Label(TP::Public).boxed(), T::Int(1).boxed())));
        assert_eq!(got, pg(TP::Secret, T::Exception));
    }

    #[test]
    fn unlabel_raises_current_label() {
        let got = step(pg(
            TP::Public,
            T::Unlabel(T::Labeled(TP::Secret, T::Int(7).boxed()).boxed()),
        ));
        assert_eq!(got, pg(TP::Secret, T::Return(T::Int(7).boxed())));
    }

    #[test]
    fn insert_with_bottom_labels_succeeds() {
        type L = PowersetLabel;
        let empty = L::bottom();
        let a = PowersetLabel::from_names(["A"]);
        let db = Database {
            tables: vec![(
                "t".into(),
                Table {
                    policy: TablePolicy {
                        table_label: a.clone(),
                        fresh: 0,
                        label_field1: a.clone(),
                        label_field2: LabelFn::Const(a.clone()),
                    },
                    rows: vec![],
                },
            )],
        };
        let ins = Term::Insert(
            "t".into(),
            Term::Labeled(empty.clone(), Term::Int(5).boxed()).boxed(),
            Term::Labeled(empty.clone(), Term::Unit.boxed()).boxed(),
        );
        let got = eval(Program::pg(empty.clone(), db, ins), &mut Fuel::new(10));
        match got {
            StepOutcome::Stepped(Program::Pg { label, db, term }) => {
                // raised by l1 (examined v1) and by the table label (the
                // key reads the length history): {} ⊔ {} ⊔ {A}
                assert_eq!(label, a);
                assert_eq!(term, Term::Return(Term::Int(0).boxed()));
                let t = db.lookup_table("t").unwrap();
                assert_eq!(t.policy.fresh, 1);
                assert_eq!(
                    t.rows,
                    vec![Row { key: Term::Int(0), v1: Term::Int(5), v2: Term::Unit }]
                );
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn eval_star_examples() {
        let hole: Program<TP> = Program::Hole { db: empty_db() };
        assert_eq!(eval_star(hole.clone(), &mut Fuel::new(0)), Outcome::Terminated(hole));

        let bind = T::Bind(
            T::Return(T::Int(1).boxed()).boxed(),
            T::Lam(0, T::Return(T::Var(0).boxed()).boxed()).boxed(),
        );
        let got = eval_star(pg(TP::Public, bind), &mut Fuel::new(100));
        assert_eq!(got, Outcome::Terminated(pg(TP::Public, T::Lio(T::Int(1).boxed()))));

        let omega = T::Fix(T::Lam(0, T::Var(0).boxed()).boxed());
        let got = eval_star(pg(TP::Public, T::Bind(omega.boxed(), T::Lam(0, T::Return(T::Var(0).boxed()).boxed()).boxed())), &mut Fuel::new(100));
        assert!(matches!(got, Outcome::FuelExhausted(_)));
    }

    #[test]
    fn terminated_results_do_not_depend_on_surplus_fuel() {
        let term = T::Bind(
            T::ToLabeled(
                T::Label(TP::Secret).boxed(),
                T::Unlabel(T::Labeled(TP::Secret, T::Int(3).boxed()).boxed()).boxed(),
            )
            .boxed(),
            T::Lam(0, T::Return(T::Var(0).boxed()).boxed()).boxed(),
        );
        let mut fuel = Fuel::new(1000);
        let first = eval_star(pg(TP::Public, term.clone()), &mut fuel);
        let used = 1000 - fuel.remaining();
        let exact = eval_star(pg(TP::Public, term.clone()), &mut Fuel::new(used));
        let surplus = eval_star(pg(TP::Public, term), &mut Fuel::new(used + 17));
        assert_eq!(first, exact);
        assert_eq!(first, surplus);
        // One step fewer and the run cannot finish.
        let Outcome::Terminated(_) = &first else { panic!("expected termination") };
    }

    #[test]
    fn monadic_values_are_stop_states() {
        for t in [T::Lio(T::Int(1).boxed()), T::Exception] {
            let p = pg(TP::Secret, t);
            let got = eval_star(p.clone(), &mut Fuel::new(50));
            assert_eq!(got, Outcome::Terminated(p));
        }
    }

    #[test]
    fn bind_propagates_the_inner_label_on_failure() {
        // The inner run unlabels a secret and then fails; the exception is
        // observable only at the raised label.
        let inner = T::Bind(
            T::Unlabel(T::Labeled(TP::Secret, T::Int(1).boxed()).boxed()).boxed(),
            T::Lam(0, T::MkLabeled(T::Label(TP::Public).boxed(), T::Int(2).boxed()).boxed())
                .boxed(),
        );
        let outer = T::Bind(inner.boxed(), T::Lam(1, T::Return(T::Var(1).boxed()).boxed()).boxed());
        let got = eval_star(pg(TP::Public, outer), &mut Fuel::new(100));
        assert_eq!(got, Outcome::Terminated(pg(TP::Secret, T::Exception)));
    }

    #[test]
    fn to_labeled_restores_label_and_keeps_db_effects() {
        type L = PowersetLabel;
        let bot = L::bottom();
        let a = PowersetLabel::from_names(["A"]);
        let db = Database {
            tables: vec![(
                "t".into(),
                Table {
                    policy: TablePolicy {
                        table_label: bot.clone(),
                        fresh: 0,
                        label_field1: bot.clone(),
                        label_field2: LabelFn::Const(bot.clone()),
                    },
                    rows: vec![],
                },
            )],
        };
        // Insert, then unlabel something above the scope label so the scope
        // fails; the insert must survive.
        let body = Term::Bind(
            Term::Insert(
                "t".into(),
                Term::Labeled(bot.clone(), Term::Int(1).boxed()).boxed(),
                Term::Labeled(bot.clone(), Term::Unit.boxed()).boxed(),
            )
            .boxed(),
            Term::Lam(
                0,
                Term::Unlabel(Term::Labeled(a.clone(), Term::Int(9).boxed()).boxed()).boxed(),
            )
            .boxed(),
        );
        let scoped = Term::ToLabeled(Term::Label(bot.clone()).boxed(), body.boxed());
        let got = eval_star(Program::pg(bot.clone(), db, scoped), &mut Fuel::new(100));
        match got {
            Outcome::Terminated(Program::Pg { label, db, term }) => {
                assert_eq!(label, bot.clone());
                assert_eq!(
                    term,
                    Term::Lio(Term::Labeled(bot, Term::Exception.boxed()).boxed())
                );
                assert_eq!(db.lookup_table("t").unwrap().rows.len(), 1);
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn delete_raises_read_label_even_on_failure() {
        let db = Database {
            tables: vec![(
                "t".into(),
                Table {
                    policy: TablePolicy {
                        table_label: TP::Public,
                        fresh: 1,
                        label_field1: TP::Public,
                        label_field2: LabelFn::Const(TP::Secret),
                    },
                    rows: vec![Row { key: Term::Int(0), v1: Term::Int(1), v2: Term::Int(2) }],
                },
            )],
        };
        // Arity-2 predicate: labelPred = public ⊔ secret = secret, which
        // cannot flow to the public table label.
        let del = Term::Delete("t".into(), Pred::Lt(crate::db::FieldRef::Field2, 5));
        let got = eval(Program::pg(TP::Public, db.clone(), del), &mut Fuel::new(10));
        match got {
            StepOutcome::Stepped(Program::Pg { label, db: db2, term }) => {
                assert_eq!(label, TP::Public); // labelRead = labelF1 = public
                assert_eq!(term, Term::Return(Term::Exception.boxed()));
                assert_eq!(db2, db);
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn step_log_captures_labels_and_row_counts() {
        let term = T::Bind(
            T::Unlabel(T::Labeled(TP::Secret, T::Int(1).boxed()).boxed()).boxed(),
            T::Lam(0, T::Return(T::Var(0).boxed()).boxed()).boxed(),
        );
        let mut log = Vec::new();
        let got = eval_star_logged(pg(TP::Public, term), &mut Fuel::new(100), Mutation::None, &mut log);
        assert!(matches!(got, Outcome::Terminated(_)));
        assert!(!log.is_empty());
        for record in &log {
            assert!(record.label_before.can_flow_to(&record.label_after));
            assert!(record.safe_after);
        }
    }
}
