//! Seeded generation of closed, write-safe programs over valid databases,
//! and of low-equivalent program pairs.
//!
//! Generation stands in for the typing discipline the evaluator assumes:
//! applications only ever apply lambdas (or redexes reducing to lambdas),
//! label projections only see labeled chains, insert and update carry
//! literal labeled database values, and a value is scrutinized (branched on,
//! applied, compared) only when the generator can tell its shape survives
//! erasure at the configured observer. Everything is a pure function of the
//! seed.

use rand::prelude::*;
use rand_chacha::ChaCha8Rng;

use crate::db::{Database, FieldRef, LabelFn, Pred, Row, Table, TablePolicy};
use crate::erase::erase_program;
use crate::label::Label;
use crate::term::{Program, Term, Var};

/// Tuning knobs for one fuzzing run. `labels` is the finite pool labels are
/// drawn from; `observer` is the erasure level the theorem checks use.
#[derive(Debug, Clone)]
pub struct GenConfig<L> {
    pub seed: u64,
    pub trials: u64,
    pub max_term_depth: usize,
    pub max_tables: usize,
    pub max_rows_per_table: usize,
    pub fuel: u64,
    pub labels: Vec<L>,
    pub observer: L,
}

impl<L: Label> GenConfig<L> {
    pub fn new(labels: Vec<L>, observer: L) -> Self {
        assert!(!labels.is_empty(), "label pool must not be empty");
        GenConfig {
            seed: 0,
            trials: 1000,
            max_term_depth: 4,
            max_tables: 2,
            max_rows_per_table: 3,
            fuel: 1000,
            labels,
            observer,
        }
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }
}

/// Derives a per-trial seed from the suite seed. SplitMix64 finalizer, so
/// nearby trial indices get unrelated streams.
pub fn trial_seed(master: u64, index: u64) -> u64 {
    let mut z = master ^ index.wrapping_mul(0x9E37_79B9_7F4A_7C15).wrapping_add(0x6A09_E667_F3BC_C909);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Value shapes the generator tracks for bound variables. A scrutinized
/// position only accepts shapes that survive erasure at the observer;
/// `Opaque` values may still flow through payload positions.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Simple {
    Int,
    Bool,
    Unit,
    LabelVal,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Shape {
    Simple(Simple),
    Labeled { visible: bool, payload: Option<Simple> },
    List,
    Opaque,
}

struct Gen<'c, L: Label> {
    cfg: &'c GenConfig<L>,
    rng: ChaCha8Rng,
    table_names: Vec<String>,
    next_var: Var,
}

impl<'c, L: Label> Gen<'c, L> {
    fn new(cfg: &'c GenConfig<L>, seed: u64) -> Self {
        Gen { cfg, rng: ChaCha8Rng::seed_from_u64(seed), table_names: Vec::new(), next_var: 0 }
    }

    fn fresh_var(&mut self) -> Var {
        let v = self.next_var;
        self.next_var += 1;
        v
    }

    fn roll(&mut self, bound: u32) -> u32 {
        self.rng.gen_range(0..bound)
    }

    fn label(&mut self) -> L {
        self.cfg.labels[self.rng.gen_range(0..self.cfg.labels.len())].clone()
    }

    /// Biased toward bottom so generated configurations often stay visible.
    fn low_label(&mut self) -> L {
        if self.rng.gen_bool(0.6) {
            L::bottom()
        } else {
            self.label()
        }
    }

    /// A label below `bound`, leaning toward the two ends of the allowed
    /// range: the extremes are where the admission checks flip.
    fn label_below(&mut self, bound: &L) -> L {
        match self.roll(100) {
            0..=24 => return L::bottom(),
            25..=49 => return bound.clone(),
            _ => {}
        }
        let candidates: Vec<&L> =
            self.cfg.labels.iter().filter(|l| l.can_flow_to(bound)).collect();
        if candidates.is_empty() {
            L::bottom()
        } else {
            candidates[self.rng.gen_range(0..candidates.len())].clone()
        }
    }

    fn visible_label(&mut self) -> L {
        self.label_below(&self.cfg.observer.clone())
    }

    fn hidden_label(&mut self) -> Option<L> {
        let candidates: Vec<&L> = self
            .cfg
            .labels
            .iter()
            .filter(|l| !l.can_flow_to(&self.cfg.observer))
            .collect();
        if candidates.is_empty() {
            None
        } else {
            Some(candidates[self.rng.gen_range(0..candidates.len())].clone())
        }
    }

    fn db_value(&mut self) -> Term<L> {
        match self.roll(100) {
            0..=49 => Term::Int(self.rng.gen_range(0..5)),
            50..=61 => Term::Unit,
            62..=73 => Term::from_bool(self.rng.gen_bool(0.5)),
            74..=86 => Term::Label(self.label()),
            _ => Term::Hole,
        }
    }

    /// Two labels that differ when the pool allows it; value-dependent
    /// branches with equal arms exercise nothing.
    fn distinct_labels(&mut self) -> (L, L) {
        let a = self.label();
        for _ in 0..4 {
            let b = self.label();
            if b != a {
                return (a, b);
            }
        }
        let b = self.label();
        (a, b)
    }

    fn label_fn(&mut self, depth: usize) -> LabelFn<L> {
        if depth == 0 {
            return LabelFn::Const(self.label());
        }
        match self.roll(100) {
            0..=34 => LabelFn::Const(self.label()),
            35..=59 => {
                let (a, b) = self.distinct_labels();
                LabelFn::IfEqInt(
                    self.rng.gen_range(0..5),
                    LabelFn::Const(a).boxed(),
                    LabelFn::Const(b).boxed(),
                )
            }
            60..=79 => LabelFn::IfEqInt(
                self.rng.gen_range(0..5),
                self.label_fn(depth - 1).boxed(),
                self.label_fn(depth - 1).boxed(),
            ),
            80..=89 => {
                LabelFn::Join(self.label_fn(depth - 1).boxed(), self.label_fn(depth - 1).boxed())
            }
            _ => LabelFn::Meet(self.label_fn(depth - 1).boxed(), self.label_fn(depth - 1).boxed()),
        }
    }

    /// Field references lean toward the second field: arity-2 predicates
    /// drive the row-dependent label checks, which is where the interesting
    /// flows are.
    fn field_ref(&mut self) -> FieldRef {
        match self.roll(100) {
            0..=14 => FieldRef::Key,
            15..=44 => FieldRef::Field1,
            _ => FieldRef::Field2,
        }
    }

    fn pred(&mut self, depth: usize) -> Pred<L> {
        if depth == 0 || self.rng.gen_bool(0.55) {
            match self.roll(100) {
                0..=19 => Pred::True,
                20..=29 => Pred::False,
                30..=74 => {
                    let c = match self.roll(100) {
                        0..=69 => Term::Int(self.rng.gen_range(0..5)),
                        70..=84 => Term::from_bool(self.rng.gen_bool(0.5)),
                        85..=91 => Term::Unit,
                        _ => Term::Hole,
                    };
                    Pred::Eq(self.field_ref(), c.boxed())
                }
                _ => Pred::Lt(self.field_ref(), self.rng.gen_range(0..6)),
            }
        } else {
            match self.roll(3) {
                0 => Pred::And(self.pred(depth - 1).boxed(), self.pred(depth - 1).boxed()),
                1 => Pred::Or(self.pred(depth - 1).boxed(), self.pred(depth - 1).boxed()),
                _ => Pred::Not(self.pred(depth - 1).boxed()),
            }
        }
    }

    fn database(&mut self) -> Database<L> {
        let count = self.rng.gen_range(1..=self.cfg.max_tables.max(1));
        let mut db = Database::empty();
        for i in 0..count {
            let name = format!("t{i}");
            let table_label = self.label();
            let label_field1 = self.label_below(&table_label);
            let label_field2 = self.label_fn(2);
            let nrows = self.rng.gen_range(0..=self.cfg.max_rows_per_table);
            let fresh = nrows as i64 + self.rng.gen_range(0..=2);
            let rows = (0..nrows)
                .map(|k| Row {
                    key: Term::Int(k as i64),
                    v1: self.db_value(),
                    v2: self.db_value(),
                })
                .collect();
            self.table_names.push(name.clone());
            db.tables.push((
                name,
                Table {
                    policy: TablePolicy { table_label, fresh, label_field1, label_field2 },
                    rows,
                },
            ));
        }
        db
    }

    fn table_name(&mut self) -> String {
        if self.table_names.is_empty() || self.rng.gen_bool(0.08) {
            "missing".to_string()
        } else {
            self.table_names[self.rng.gen_range(0..self.table_names.len())].clone()
        }
    }

    fn simple(&mut self) -> Simple {
        match self.roll(4) {
            0 => Simple::Int,
            1 => Simple::Bool,
            2 => Simple::Unit,
            _ => Simple::LabelVal,
        }
    }

    /// A label-valued term, usually a literal, occasionally a one-step redex
    /// so the "step the label term first" rules get exercised.
    fn label_term(&mut self, l: &L) -> Term<L> {
        if self.rng.gen_bool(0.15) {
            Term::Op(
                crate::term::LabelOp::Join,
                Term::Label(l.clone()).boxed(),
                Term::Label(L::bottom()).boxed(),
            )
        } else {
            Term::Label(l.clone())
        }
    }

    fn var_of_shape(&mut self, env: &[(Var, Shape)], want: &dyn Fn(&Shape) -> bool) -> Option<Var> {
        let hits: Vec<Var> =
            env.iter().filter(|(_, s)| want(s)).map(|(v, _)| *v).collect();
        if hits.is_empty() {
            None
        } else {
            Some(hits[self.rng.gen_range(0..hits.len())])
        }
    }

    /// A pure term that reduces, in a bounded number of pure steps, to a
    /// value of the requested simple shape.
    fn pure_simple(&mut self, depth: usize, env: &[(Var, Shape)], shape: Simple) -> Term<L> {
        if self.rng.gen_bool(0.15) {
            if let Some(v) =
                self.var_of_shape(env, &|s| matches!(s, Shape::Simple(x) if *x == shape))
            {
                return Term::Var(v);
            }
        }
        if depth > 0 {
            match self.roll(100) {
                0..=11 => {
                    let cond = self.pure_simple(depth - 1, env, Simple::Bool);
                    let a = self.pure_simple(depth - 1, env, shape);
                    let b = self.pure_simple(depth - 1, env, shape);
                    return Term::If(cond.boxed(), a.boxed(), b.boxed());
                }
                12..=23 => return self.app_redex(depth, env, shape),
                _ => {}
            }
        }
        match shape {
            Simple::Int => Term::Int(self.rng.gen_range(0..5)),
            Simple::Unit => Term::Unit,
            Simple::Bool => {
                if depth > 0 && self.rng.gen_bool(0.4) {
                    let a = self.pure_simple(depth - 1, env, Simple::LabelVal);
                    let b = self.pure_simple(depth - 1, env, Simple::LabelVal);
                    Term::Op(crate::term::LabelOp::CanFlowTo, a.boxed(), b.boxed())
                } else {
                    Term::from_bool(self.rng.gen_bool(0.5))
                }
            }
            Simple::LabelVal => {
                if depth > 0 {
                    match self.roll(100) {
                        0..=24 => {
                            let op = if self.rng.gen_bool(0.5) {
                                crate::term::LabelOp::Join
                            } else {
                                crate::term::LabelOp::Meet
                            };
                            let a = self.pure_simple(depth - 1, env, Simple::LabelVal);
                            let b = self.pure_simple(depth - 1, env, Simple::LabelVal);
                            return Term::Op(op, a.boxed(), b.boxed());
                        }
                        25..=44 => {
                            // Label projection is safe on any labeled chain:
                            // the wrapper label survives erasure.
                            let visible = self.rng.gen_bool(0.5);
                            let t = self.pure_labeled(depth - 1, env, visible);
                            return Term::LabelOf(t.boxed());
                        }
                        _ => {}
                    }
                }
                Term::Label(self.label())
            }
        }
    }

    /// A β-redex (occasionally through the fixpoint rule) reducing to the
    /// requested shape.
    fn app_redex(&mut self, depth: usize, env: &[(Var, Shape)], shape: Simple) -> Term<L> {
        let arg_shape = self.simple();
        let arg = self.pure_simple(depth - 1, env, arg_shape);
        let x = self.fresh_var();
        let mut inner = env.to_vec();
        inner.push((x, Shape::Simple(arg_shape)));
        let body = self.pure_simple(depth - 1, &inner, shape);
        let fun = if self.rng.gen_bool(0.12) {
            // fix (lam f (lam x body)) with f unused reduces to the lambda
            // in one step.
            let f = self.fresh_var();
            Term::Fix(Term::Lam(f, Term::Lam(x, body.boxed()).boxed()).boxed())
        } else {
            Term::Lam(x, body.boxed())
        };
        Term::App(fun.boxed(), arg.boxed())
    }

    /// A term reducing to a labeled value. `visible` asks for a label at or
    /// below the observer; hidden labels fall back to visible ones when the
    /// pool has none.
    fn pure_labeled(&mut self, depth: usize, env: &[(Var, Shape)], visible: bool) -> Term<L> {
        if self.rng.gen_bool(0.15) {
            let want: Box<dyn Fn(&Shape) -> bool> = if visible {
                Box::new(|s| matches!(s, Shape::Labeled { visible: true, payload: Some(_) }))
            } else {
                Box::new(|s| matches!(s, Shape::Labeled { .. }))
            };
            if let Some(v) = self.var_of_shape(env, &|s| want(s)) {
                return Term::Var(v);
            }
        }
        let label = if visible {
            self.visible_label()
        } else {
            self.hidden_label().unwrap_or_else(|| self.visible_label())
        };
        let payload_shape = self.simple();
        let payload = self.pure_simple(depth.saturating_sub(1), env, payload_shape);
        Term::Labeled(label, payload.boxed())
    }

    fn db_op(&mut self, depth: usize) -> (Term<L>, Shape) {
        let name = self.table_name();
        match self.roll(100) {
            0..=29 => {
                let l1 = self.label();
                let l2 = self.label();
                // First values lean toward small integers: they are what
                // value-dependent field labels branch on.
                let v1 = if self.rng.gen_bool(0.7) {
                    Term::Int(self.rng.gen_range(0..5))
                } else {
                    self.db_value()
                };
                let t = Term::Insert(
                    name,
                    Term::Labeled(l1, v1.boxed()).boxed(),
                    Term::Labeled(l2, self.db_value().boxed()).boxed(),
                );
                (t, Shape::Simple(Simple::Int))
            }
            30..=51 => (Term::Select(name, self.pred(depth.min(2))), Shape::List),
            52..=69 => (Term::Delete(name, self.pred(depth.min(2))), Shape::Simple(Simple::Unit)),
            _ => {
                // Write labels lean low so the admission checks pass often
                // enough to exercise the success branches.
                let l1 = self.low_label();
                let l2 = self.low_label();
                let t = Term::Update(
                    name,
                    self.pred(depth.min(2)),
                    Term::Labeled(l1, self.db_value().boxed()).boxed(),
                    Term::Labeled(l2, self.db_value().boxed()).boxed(),
                );
                (t, Shape::Simple(Simple::Unit))
            }
        }
    }

    /// A monadic term together with the shape of the value its successful
    /// run wraps in the monadic result.
    fn monadic(&mut self, depth: usize, env: &mut Vec<(Var, Shape)>) -> (Term<L>, Shape) {
        let pick = self.roll(100);
        if depth > 0 && pick < 40 {
            // monadic connectives
            if pick < 22 {
                let (t1, s1) = self.monadic(depth - 1, env);
                let x = self.fresh_var();
                env.push((x, s1));
                let (t2, s2) = self.monadic(depth - 1, env);
                env.pop();
                return (Term::Bind(t1.boxed(), Term::Lam(x, t2.boxed()).boxed()), s2);
            }
            let l = self.label();
            let lt = self.label_term(&l);
            let (body, _) = self.monadic(depth - 1, env);
            let visible = l.can_flow_to(&self.cfg.observer);
            return (
                Term::ToLabeled(lt.boxed(), body.boxed()),
                Shape::Labeled { visible, payload: None },
            );
        }
        if pick < 65 && !self.table_names.is_empty() {
            return self.db_op(depth);
        }
        if pick < 85 {
            // labeling operations
            match self.roll(100) {
                0..=39 => {
                    let l = self.label();
                    let lt = self.label_term(&l);
                    let shape = self.simple();
                    let payload = self.pure_simple(depth.saturating_sub(1), env, shape);
                    let visible = l.can_flow_to(&self.cfg.observer);
                    return (
                        Term::MkLabeled(lt.boxed(), payload.boxed()),
                        Shape::Labeled { visible, payload: Some(shape) },
                    );
                }
                40..=79 => {
                    let visible = self.rng.gen_bool(0.6);
                    let arg = self.pure_labeled(depth.saturating_sub(1), env, visible);
                    // The payload of a hidden labeled value erases to a
                    // hole, so its unlabeling may only be used opaquely.
                    let shape = match (&arg, visible) {
                        (Term::Labeled(l, payload), _) if l.can_flow_to(&self.cfg.observer) => {
                            shape_of_value(payload).map_or(Shape::Opaque, Shape::Simple)
                        }
                        (Term::Var(v), _) => match env.iter().find(|(y, _)| y == v) {
                            Some((_, Shape::Labeled { visible: true, payload: Some(s) })) => {
                                Shape::Simple(*s)
                            }
                            _ => Shape::Opaque,
                        },
                        _ => Shape::Opaque,
                    };
                    return (Term::Unlabel(arg.boxed()), shape);
                }
                _ => return (Term::GetLabel, Shape::Simple(Simple::LabelVal)),
            }
        }
        let shape = self.simple();
        let t = self.pure_simple(depth.saturating_sub(1), env, shape);
        (Term::Return(t.boxed()), Shape::Simple(shape))
    }

    fn program(&mut self) -> Program<L> {
        let db = self.database();
        let label = self.low_label();
        let mut env = Vec::new();
        let (term, _) = self.monadic(self.cfg.max_term_depth, &mut env);
        Program::Pg { label, db, term }
    }
}

fn shape_of_value<L>(t: &Term<L>) -> Option<Simple> {
    match t {
        Term::Int(_) => Some(Simple::Int),
        Term::True | Term::False => Some(Simple::Bool),
        Term::Unit => Some(Simple::Unit),
        Term::Label(_) => Some(Simple::LabelVal),
        _ => None,
    }
}

/// Generates a closed, write-safe program over a valid generated database.
/// Pure in the seed.
pub fn gen_program<L: Label>(cfg: &GenConfig<L>, seed: u64) -> Program<L> {
    let mut g = Gen::new(cfg, seed);
    let p = g.program();
    debug_assert!(p.is_safe(), "generated program must be write-safe");
    debug_assert!(p.db().validate().passed(), "generated database must be valid");
    debug_assert!(
        p.term().map(|t| t.free_vars().is_empty()).unwrap_or(true),
        "generated program must be closed"
    );
    p
}

/// Generates a standalone database (used by benchmarks and format tests).
pub fn gen_database<L: Label>(cfg: &GenConfig<L>, seed: u64) -> Database<L> {
    Gen::new(cfg, seed).database()
}

/// Generates two programs that are equal after erasure at the configured
/// observer: a template is generated, then every payload guarded by a label
/// that does not flow to the observer (labeled-value payloads, pending
/// labelings, hidden table rows, hidden row fields) is redrawn
/// independently for the second program.
///
/// Panics if the pair fails the erased-equality assertion; that indicates a
/// generator defect, never a property failure.
pub fn gen_low_equiv_pair<L: Label>(cfg: &GenConfig<L>, seed: u64) -> (Program<L>, Program<L>) {
    let p1 = gen_program(cfg, seed);
    let mut rng = ChaCha8Rng::seed_from_u64(trial_seed(seed, 0x5EC2E7));
    let p2 = rerandomize_secrets(&p1, cfg, &mut rng);
    let e1 = erase_program(&cfg.observer, &p1);
    let e2 = erase_program(&cfg.observer, &p2);
    assert!(e1 == e2, "generator defect: pair is not low-equivalent (seed {seed})");
    (p1, p2)
}

fn rerandomize_secrets<L: Label>(
    p: &Program<L>,
    cfg: &GenConfig<L>,
    rng: &mut ChaCha8Rng,
) -> Program<L> {
    let mut out = p.clone();
    match &mut out {
        Program::Pg { db, term, .. } => {
            rerand_term(term, cfg, rng);
            rerand_db(db, cfg, rng);
        }
        Program::Hole { db } => rerand_db(db, cfg, rng),
    }
    out
}

fn redraw_like<L: Label>(t: &Term<L>, cfg: &GenConfig<L>, rng: &mut ChaCha8Rng) -> Option<Term<L>> {
    match t {
        Term::Int(_) => Some(Term::Int(rng.gen_range(0..5))),
        Term::True | Term::False => Some(Term::from_bool(rng.gen_bool(0.5))),
        Term::Label(_) => Some(Term::Label(cfg.labels[rng.gen_range(0..cfg.labels.len())].clone())),
        Term::Unit => Some(Term::Unit),
        Term::Hole => Some(Term::Hole),
        _ => None,
    }
}

fn rerand_payload<L: Label>(payload: &mut Term<L>, cfg: &GenConfig<L>, rng: &mut ChaCha8Rng) {
    if let Some(fresh) = redraw_like(payload, cfg, rng) {
        *payload = fresh;
    } else {
        // Keep the payload's structure (its shape matters to the program)
        // but vary any secrets nested inside it.
        rerand_term(payload, cfg, rng);
    }
}

fn rerand_term<L: Label>(t: &mut Term<L>, cfg: &GenConfig<L>, rng: &mut ChaCha8Rng) {
    match t {
        Term::Labeled(l, payload) if !l.can_flow_to(&cfg.observer) => {
            rerand_payload(payload, cfg, rng);
        }
        Term::MkLabeled(lt, payload) => {
            if matches!(&**lt, Term::Label(l) if !l.can_flow_to(&cfg.observer)) {
                rerand_payload(payload, cfg, rng);
            } else {
                rerand_term(lt, cfg, rng);
                rerand_term(payload, cfg, rng);
            }
        }
        other => {
            for c in other.children_mut() {
                rerand_term(c, cfg, rng);
            }
        }
    }
}

fn db_value_for_pair<L: Label>(cfg: &GenConfig<L>, rng: &mut ChaCha8Rng) -> Term<L> {
    match rng.gen_range(0..100) {
        0..=49 => Term::Int(rng.gen_range(0..5)),
        50..=61 => Term::Unit,
        62..=73 => Term::from_bool(rng.gen_bool(0.5)),
        74..=86 => Term::Label(cfg.labels[rng.gen_range(0..cfg.labels.len())].clone()),
        _ => Term::Hole,
    }
}

fn rerand_db<L: Label>(db: &mut Database<L>, cfg: &GenConfig<L>, rng: &mut ChaCha8Rng) {
    for (_, table) in &mut db.tables {
        let policy = table.policy.clone();
        if !policy.table_label.can_flow_to(&cfg.observer) {
            // The table's length is hidden, so the whole row list may
            // differ; only the policy (with its fresh counter) is shared.
            let max = (policy.fresh.max(0) as usize).min(cfg.max_rows_per_table);
            let count = rng.gen_range(0..=max);
            let mut keys: Vec<i64> = (0..policy.fresh.max(0)).collect();
            keys.shuffle(rng);
            keys.truncate(count);
            keys.sort_unstable();
            table.rows = keys
                .into_iter()
                .map(|k| Row {
                    key: Term::Int(k),
                    v1: db_value_for_pair(cfg, rng),
                    v2: db_value_for_pair(cfg, rng),
                })
                .collect();
        } else if !policy.label_field1.can_flow_to(&cfg.observer) {
            for row in &mut table.rows {
                row.v1 = db_value_for_pair(cfg, rng);
                row.v2 = db_value_for_pair(cfg, rng);
            }
        } else {
            for row in &mut table.rows {
                if !policy.label_field2.apply(&row.v1).can_flow_to(&cfg.observer) {
                    row.v2 = db_value_for_pair(cfg, rng);
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::label::{PowersetLabel, TwoPointLabel as TP};

    fn two_point_cfg() -> GenConfig<TP> {
        GenConfig::new(vec![TP::Public, TP::Secret], TP::Public)
    }

    fn powerset_cfg() -> GenConfig<PowersetLabel> {
        let universe: Vec<String> = ["A", "B", "C"].iter().map(|s| s.to_string()).collect();
        GenConfig::new(PowersetLabel::all_subsets(&universe), PowersetLabel::from_names(["A"]))
    }

    #[test]
    fn generation_is_deterministic() {
        let cfg = two_point_cfg();
        assert_eq!(gen_program(&cfg, 7), gen_program(&cfg, 7));
        let (a1, b1) = gen_low_equiv_pair(&cfg, 11);
        let (a2, b2) = gen_low_equiv_pair(&cfg, 11);
        assert_eq!(a1, a2);
        assert_eq!(b1, b2);
    }

    #[test]
    fn generated_programs_are_safe_closed_and_valid() {
        let cfg = powerset_cfg();
        for seed in 0..200 {
            let p = gen_program(&cfg, seed);
            assert!(p.is_safe());
            assert!(p.db().validate().passed());
            assert!(p.term().unwrap().free_vars().is_empty());
        }
    }

    #[test]
    fn pairs_are_low_equivalent_and_often_differ() {
        let cfg = two_point_cfg();
        let mut differing = 0;
        for seed in 0..200 {
            let (p1, p2) = gen_low_equiv_pair(&cfg, seed);
            assert_eq!(
                erase_program(&cfg.observer, &p1),
                erase_program(&cfg.observer, &p2)
            );
            if p1 != p2 {
                differing += 1;
            }
        }
        assert!(differing > 50, "only {differing} of 200 pairs differ");
    }

    #[test]
    fn most_generated_programs_terminate_within_fuel() {
        use crate::eval::{eval_star, Fuel, Outcome};
        let cfg = powerset_cfg();
        let mut terminated = 0;
        for seed in 0..500 {
            let p = gen_program(&cfg, seed);
            if matches!(eval_star(p, &mut Fuel::new(cfg.fuel)), Outcome::Terminated(_)) {
                terminated += 1;
            }
        }
        assert!(terminated >= 450, "only {terminated} of 500 terminated");
    }

    #[test]
    fn trial_seed_spreads_indices() {
        let a = trial_seed(42, 0);
        let b = trial_seed(42, 1);
        let c = trial_seed(43, 0);
        assert_ne!(a, b);
        assert_ne!(a, c);
        assert_eq!(a, trial_seed(42, 0));
    }
}
