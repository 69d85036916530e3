//! Abstract syntax of labeled monadic programs: terms, programs, value
//! predicates, the write-safety predicate, and capture-free substitution of
//! closed terms.

use std::collections::BTreeSet;

use crate::db::{Database, Pred};

/// Variable identifier.
pub type Var = u32;

/// Table name.
pub type Name = String;

/// Binary operations on label values.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum LabelOp {
    Meet,
    Join,
    CanFlowTo,
}

/// Terms. Pure terms evaluate independently of the current label; monadic
/// terms manipulate the current label and the database.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Term<L> {
    // pure
    Unit,
    Int(i64),
    True,
    False,
    /// A label constant.
    Label(L),
    /// A value wrapped with an explicit label.
    Labeled(L, Box<Term<L>>),
    /// Projects the label out of a labeled value.
    LabelOf(Box<Term<L>>),
    Var(Var),
    Lam(Var, Box<Term<L>>),
    App(Box<Term<L>>, Box<Term<L>>),
    Fix(Box<Term<L>>),
    If(Box<Term<L>>, Box<Term<L>>, Box<Term<L>>),
    Op(LabelOp, Box<Term<L>>, Box<Term<L>>),
    Nil,
    Cons(Box<Term<L>>, Box<Term<L>>),
    /// Placeholder for erased data.
    Hole,
    // monadic
    Bind(Box<Term<L>>, Box<Term<L>>),
    Return(Box<Term<L>>),
    GetLabel,
    /// Result of a finished monadic computation.
    Lio(Box<Term<L>>),
    /// Monadic labeling: wraps the second argument with the label the first
    /// argument evaluates to, provided the current label flows into it.
    MkLabeled(Box<Term<L>>, Box<Term<L>>),
    Unlabel(Box<Term<L>>),
    Exception,
    /// Runs a monadic computation in a scope whose label raise is capped by
    /// (and hidden under) the given label.
    ToLabeled(Box<Term<L>>, Box<Term<L>>),
    Insert(Name, Box<Term<L>>, Box<Term<L>>),
    Select(Name, Pred<L>),
    Delete(Name, Pred<L>),
    Update(Name, Pred<L>, Box<Term<L>>, Box<Term<L>>),
}

impl<L> Term<L> {
    pub fn boxed(self) -> Box<Term<L>> {
        Box::new(self)
    }

    /// Converts a host boolean into a term.
    pub fn from_bool(b: bool) -> Term<L> {
        if b {
            Term::True
        } else {
            Term::False
        }
    }

    /// True exactly for the terms evaluation cannot take further: literals,
    /// labels, labeled values, variables, lambdas, holes, lists, monadic
    /// results and exceptions.
    pub fn is_value(&self) -> bool {
        matches!(
            self,
            Term::Unit
                | Term::Int(_)
                | Term::True
                | Term::False
                | Term::Label(_)
                | Term::Labeled(_, _)
                | Term::Var(_)
                | Term::Lam(_, _)
                | Term::Hole
                | Term::Nil
                | Term::Cons(_, _)
                | Term::Lio(_)
                | Term::Exception
        )
    }

    /// True for the basic terms the database may store: holes, integers,
    /// unit, label constants and booleans. Labeled terms are not permitted;
    /// labels of stored data come from the table policy.
    pub fn is_db_value(&self) -> bool {
        matches!(
            self,
            Term::Hole | Term::Int(_) | Term::Unit | Term::Label(_) | Term::True | Term::False
        )
    }

    /// Write safety: every insert/update anywhere in the term carries
    /// literal labeled database values as its value arguments.
    pub fn is_safe(&self) -> bool {
        match self {
            Term::Insert(_, a, b) | Term::Update(_, _, a, b) => {
                let arg_ok =
                    |t: &Term<L>| matches!(t, Term::Labeled(_, v) if v.is_db_value());
                arg_ok(a) && arg_ok(b)
            }
            _ => self.children().into_iter().all(Term::is_safe),
        }
    }

    /// Constructor name, used in divergence paths and reports.
    pub fn tag(&self) -> &'static str {
        match self {
            Term::Unit => "unit",
            Term::Int(_) => "int",
            Term::True => "true",
            Term::False => "false",
            Term::Label(_) => "label",
            Term::Labeled(_, _) => "labeled",
            Term::LabelOf(_) => "labelof",
            Term::Var(_) => "var",
            Term::Lam(_, _) => "lam",
            Term::App(_, _) => "app",
            Term::Fix(_) => "fix",
            Term::If(_, _, _) => "if",
            Term::Op(_, _, _) => "op",
            Term::Nil => "nil",
            Term::Cons(_, _) => "cons",
            Term::Hole => "hole",
            Term::Bind(_, _) => "bind",
            Term::Return(_) => "return",
            Term::GetLabel => "getlabel",
            Term::Lio(_) => "lio",
            Term::MkLabeled(_, _) => "tlabel",
            Term::Unlabel(_) => "unlabel",
            Term::Exception => "exception",
            Term::ToLabeled(_, _) => "tolabeled",
            Term::Insert(_, _, _) => "insert",
            Term::Select(_, _) => "select",
            Term::Delete(_, _) => "delete",
            Term::Update(_, _, _, _) => "update",
        }
    }

    /// Direct term children, in declaration order. Predicates are not terms
    /// and do not appear here.
    pub fn children(&self) -> Vec<&Term<L>> {
        match self {
            Term::Labeled(_, t)
            | Term::LabelOf(t)
            | Term::Lam(_, t)
            | Term::Fix(t)
            | Term::Return(t)
            | Term::Lio(t)
            | Term::Unlabel(t) => vec![t],
            Term::App(a, b)
            | Term::Op(_, a, b)
            | Term::Cons(a, b)
            | Term::Bind(a, b)
            | Term::MkLabeled(a, b)
            | Term::ToLabeled(a, b)
            | Term::Insert(_, a, b)
            | Term::Update(_, _, a, b) => vec![a, b],
            Term::If(c, a, b) => vec![c, a, b],
            _ => Vec::new(),
        }
    }

    pub fn children_mut(&mut self) -> Vec<&mut Term<L>> {
        match self {
            Term::Labeled(_, t)
            | Term::LabelOf(t)
            | Term::Lam(_, t)
            | Term::Fix(t)
            | Term::Return(t)
            | Term::Lio(t)
            | Term::Unlabel(t) => vec![t],
            Term::App(a, b)
            | Term::Op(_, a, b)
            | Term::Cons(a, b)
            | Term::Bind(a, b)
            | Term::MkLabeled(a, b)
            | Term::ToLabeled(a, b)
            | Term::Insert(_, a, b)
            | Term::Update(_, _, a, b) => vec![a, b],
            Term::If(c, a, b) => vec![c, a, b],
            _ => Vec::new(),
        }
    }

    /// Number of term nodes.
    pub fn size(&self) -> usize {
        1 + self.children().into_iter().map(Term::size).sum::<usize>()
    }

    pub fn free_vars(&self) -> BTreeSet<Var> {
        fn go<L>(t: &Term<L>, bound: &mut Vec<Var>, acc: &mut BTreeSet<Var>) {
            match t {
                Term::Var(x) => {
                    if !bound.contains(x) {
                        acc.insert(*x);
                    }
                }
                Term::Lam(x, body) => {
                    bound.push(*x);
                    go(body, bound, acc);
                    bound.pop();
                }
                _ => {
                    for c in t.children() {
                        go(c, bound, acc);
                    }
                }
            }
        }
        let mut acc = BTreeSet::new();
        go(self, &mut Vec::new(), &mut acc);
        acc
    }

    /// Visits every label occurring in the term, including labels inside
    /// predicate constants.
    pub fn for_each_label<F: FnMut(&L)>(&self, f: &mut F) {
        match self {
            Term::Label(l) => f(l),
            Term::Labeled(l, t) => {
                f(l);
                t.for_each_label(f);
            }
            Term::Select(_, p) | Term::Delete(_, p) => p.for_each_label(f),
            Term::Update(_, p, a, b) => {
                p.for_each_label(f);
                a.for_each_label(f);
                b.for_each_label(f);
            }
            _ => {
                for c in self.children() {
                    c.for_each_label(f);
                }
            }
        }
    }
}

impl<L: Clone> Term<L> {
    /// Substitutes `replacement` for every free occurrence of `Var(x)`.
    ///
    /// `replacement` must be closed; a rebinding `Lam(x, _)` shadows, and
    /// with closed replacements that is all the capture-avoidance needed.
    /// Predicates and names are untouched.
    pub fn subst(self, x: Var, replacement: &Term<L>) -> Term<L> {
        match self {
            Term::Var(y) => {
                if y == x {
                    replacement.clone()
                } else {
                    Term::Var(y)
                }
            }
            Term::Lam(y, body) => {
                if y == x {
                    Term::Lam(y, body)
                } else {
                    Term::Lam(y, body.subst(x, replacement).boxed())
                }
            }
            Term::Labeled(l, t) => Term::Labeled(l, t.subst(x, replacement).boxed()),
            Term::LabelOf(t) => Term::LabelOf(t.subst(x, replacement).boxed()),
            Term::App(a, b) => {
                Term::App(a.subst(x, replacement).boxed(), b.subst(x, replacement).boxed())
            }
            Term::Fix(t) => Term::Fix(t.subst(x, replacement).boxed()),
            Term::If(c, a, b) => Term::If(
                c.subst(x, replacement).boxed(),
                a.subst(x, replacement).boxed(),
                b.subst(x, replacement).boxed(),
            ),
            Term::Op(o, a, b) => {
                Term::Op(o, a.subst(x, replacement).boxed(), b.subst(x, replacement).boxed())
            }
            Term::Cons(a, b) => {
                Term::Cons(a.subst(x, replacement).boxed(), b.subst(x, replacement).boxed())
            }
            Term::Bind(a, b) => {
                Term::Bind(a.subst(x, replacement).boxed(), b.subst(x, replacement).boxed())
            }
            Term::Return(t) => Term::Return(t.subst(x, replacement).boxed()),
            Term::Lio(t) => Term::Lio(t.subst(x, replacement).boxed()),
            Term::MkLabeled(a, b) => {
                Term::MkLabeled(a.subst(x, replacement).boxed(), b.subst(x, replacement).boxed())
            }
            Term::Unlabel(t) => Term::Unlabel(t.subst(x, replacement).boxed()),
            Term::ToLabeled(a, b) => {
                Term::ToLabeled(a.subst(x, replacement).boxed(), b.subst(x, replacement).boxed())
            }
            Term::Insert(n, a, b) => {
                Term::Insert(n, a.subst(x, replacement).boxed(), b.subst(x, replacement).boxed())
            }
            Term::Update(n, p, a, b) => Term::Update(
                n,
                p,
                a.subst(x, replacement).boxed(),
                b.subst(x, replacement).boxed(),
            ),
            leaf => leaf,
        }
    }
}

/// A program configuration: a current label, a database and a term under
/// evaluation, or a hole, which hides everything but the database (the
/// database stays because its effects persist).
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Program<L> {
    Pg { label: L, db: Database<L>, term: Term<L> },
    Hole { db: Database<L> },
}

impl<L> Program<L> {
    pub fn pg(label: L, db: Database<L>, term: Term<L>) -> Self {
        Program::Pg { label, db, term }
    }

    pub fn db(&self) -> &Database<L> {
        match self {
            Program::Pg { db, .. } | Program::Hole { db } => db,
        }
    }

    pub fn current_label(&self) -> Option<&L> {
        match self {
            Program::Pg { label, .. } => Some(label),
            Program::Hole { .. } => None,
        }
    }

    pub fn term(&self) -> Option<&Term<L>> {
        match self {
            Program::Pg { term, .. } => Some(term),
            Program::Hole { .. } => None,
        }
    }

    /// Write safety of the whole configuration; holes are safe.
    pub fn is_safe(&self) -> bool {
        match self {
            Program::Pg { term, .. } => term.is_safe(),
            Program::Hole { .. } => true,
        }
    }

    pub fn size(&self) -> usize {
        let db: usize = self.db().tables.iter().map(|(_, t)| 1 + 3 * t.rows.len()).sum();
        match self {
            Program::Pg { term, .. } => 1 + term.size() + db,
            Program::Hole { .. } => 1 + db,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::label::TwoPointLabel as TP;

    type T = Term<TP>;

    fn var(x: Var) -> T {
        Term::Var(x)
    }

    fn lam(x: Var, b: T) -> T {
        Term::Lam(x, b.boxed())
    }

    fn app(f: T, a: T) -> T {
        Term::App(f.boxed(), a.boxed())
    }

    #[test]
    fn value_predicate() {
        assert!(T::Lio(T::Int(1).boxed()).is_value());
        assert!(T::Exception.is_value());
        assert!(!T::Bind(T::Return(T::Unit.boxed()).boxed(), lam(0, T::Return(var(0).boxed())).boxed())
            .is_value());
        assert!(var(3).is_value());
        assert!(!T::LabelOf(T::Labeled(TP::Secret, T::Int(1).boxed()).boxed()).is_value());
    }

    #[test]
    fn db_value_predicate() {
        assert!(T::Hole.is_db_value());
        assert!(T::Int(42).is_db_value());
        assert!(!T::Labeled(TP::Secret, T::Int(1).boxed()).is_db_value());
        assert!(!lam(0, var(0)).is_db_value());
    }

    #[test]
    fn db_values_are_values() {
        let samples: Vec<T> = vec![
            T::Hole,
            T::Int(7),
            T::Unit,
            T::Label(TP::Secret),
            T::True,
            T::False,
            T::Nil,
            lam(0, var(0)),
            T::Exception,
        ];
        for t in samples {
            if t.is_db_value() {
                assert!(t.is_value(), "{t:?}");
            }
        }
    }

    #[test]
    fn safety_predicate() {
        let labeled = |v: T| T::Labeled(TP::Public, v.boxed());
        let ok = T::Insert("t".into(), labeled(T::Int(1)).boxed(), labeled(T::Unit).boxed());
        assert!(ok.is_safe());
        let bad = T::Insert("t".into(), labeled(lam(0, var(0))).boxed(), labeled(T::Unit).boxed());
        assert!(!bad.is_safe());
        assert!(T::Return(T::Unit.boxed()).is_safe());
        // Unsafe inserts are detected under binders too.
        let nested = T::Bind(T::Return(T::Unit.boxed()).boxed(), lam(0, bad).boxed());
        assert!(!nested.is_safe());
        // A variable in the insert argument position is unsafe by shape.
        let var_arg = T::Insert("t".into(), var(0).boxed(), labeled(T::Unit).boxed());
        assert!(!var_arg.is_safe());
    }

    #[test]
    fn subst_basics() {
        assert_eq!(var(0).subst(0, &T::Int(7)), T::Int(7));
        assert_eq!(lam(0, var(0)).subst(0, &T::Int(7)), lam(0, var(0)));
        assert_eq!(
            app(lam(1, var(0)), var(0)).subst(0, &T::Int(7)),
            app(lam(1, T::Int(7)), T::Int(7))
        );
    }

    #[test]
    fn subst_with_closed_replacement_removes_the_variable() {
        let body = app(lam(1, app(var(0), var(1))), T::If(var(0).boxed(), T::Unit.boxed(), var(2).boxed()));
        let before = body.free_vars();
        assert!(before.contains(&0));
        let after = body.subst(0, &T::Int(1)).free_vars();
        assert!(!after.contains(&0));
        assert!(after.is_subset(&before));
    }

    #[test]
    fn free_vars_respects_shadowing() {
        let t = app(lam(0, var(0)), var(0));
        assert_eq!(t.free_vars().into_iter().collect::<Vec<_>>(), vec![0]);
        let closed = lam(0, lam(1, app(var(0), var(1))));
        assert!(closed.free_vars().is_empty());
    }
}
