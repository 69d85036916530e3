//! Minimization of failing witnesses: repeatedly replace subterms with
//! simpler values and drop rows or whole tables, keeping an edit only when
//! the candidate still satisfies the generator's contracts and still fails
//! the property.

use crate::erase::erase_program;
use crate::eval::Mutation;
use crate::label::Label;
use crate::term::{Program, Term};

use super::checks::{
    check_noninterference_star_with, check_noninterference_with, check_simulation_star_with,
    check_simulation_with, FailWitness,
};

fn still_fails<L: Label>(
    property: &str,
    observer: &L,
    fuel: u64,
    mutation: Mutation,
    programs: &[Program<L>],
) -> bool {
    if programs.iter().any(|p| !p.is_safe() || !p.db().validate().passed()) {
        return false;
    }
    let verdict = match property {
        "simulation" => check_simulation_with(observer, &programs[0], fuel, mutation),
        "simulation-star" => check_simulation_star_with(observer, &programs[0], fuel, mutation),
        "noninterference" | "noninterference-star" => {
            if programs.len() != 2 {
                return false;
            }
            if erase_program(observer, &programs[0]) != erase_program(observer, &programs[1]) {
                return false;
            }
            if property == "noninterference" {
                check_noninterference_with(observer, &programs[0], &programs[1], fuel, mutation)
            } else {
                check_noninterference_star_with(
                    observer,
                    &programs[0],
                    &programs[1],
                    fuel,
                    mutation,
                )
            }
        }
        _ => return false,
    };
    verdict.is_fail()
}

fn subterm_mut<'a, L>(t: &'a mut Term<L>, path: &[usize]) -> Option<&'a mut Term<L>> {
    let mut cur = t;
    for &i in path {
        let children = cur.children_mut();
        if i >= children.len() {
            return None;
        }
        cur = children.into_iter().nth(i).unwrap();
    }
    Some(cur)
}

fn collect_paths<L>(t: &Term<L>, prefix: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
    out.push(prefix.clone());
    for (i, c) in t.children().into_iter().enumerate() {
        prefix.push(i);
        collect_paths(c, prefix, out);
        prefix.pop();
    }
}

fn size<L>(programs: &[Program<L>]) -> usize {
    programs.iter().map(Program::size).sum()
}

fn replacements<L: Label>() -> Vec<Term<L>> {
    vec![
        Term::Unit,
        Term::Int(0),
        Term::Hole,
        Term::Exception,
        Term::Return(Term::Unit.boxed()),
    ]
}

fn term_edits<L: Label>(programs: &[Program<L>]) -> Vec<Vec<Program<L>>> {
    let mut out = Vec::new();
    let Some(Program::Pg { term, .. }) = programs.first() else { return out };
    let mut paths = Vec::new();
    collect_paths(term, &mut Vec::new(), &mut paths);
    for path in paths {
        for replacement in replacements::<L>() {
            let mut candidate = programs.to_vec();
            let mut applied = true;
            for p in &mut candidate {
                let Program::Pg { term, .. } = p else {
                    applied = false;
                    break;
                };
                match subterm_mut(term, &path) {
                    Some(slot) if *slot != replacement => *slot = replacement.clone(),
                    _ => {
                        applied = false;
                        break;
                    }
                }
            }
            if applied {
                out.push(candidate);
            }
        }
    }
    out
}

fn db_edits<L: Label>(programs: &[Program<L>]) -> Vec<Vec<Program<L>>> {
    let mut out = Vec::new();
    let db0 = programs[0].db();
    for t_idx in 0..db0.tables.len() {
        // Drop a whole table from every side.
        let mut candidate = programs.to_vec();
        for p in &mut candidate {
            let db = match p {
                Program::Pg { db, .. } | Program::Hole { db } => db,
            };
            if t_idx < db.tables.len() {
                db.tables.remove(t_idx);
            }
        }
        out.push(candidate);
    }
    // Drop one row from one side (the other side keeps its rows; the
    // low-equivalence recheck discards unsound candidates).
    for (side, p) in programs.iter().enumerate() {
        for (t_idx, (_, table)) in p.db().tables.iter().enumerate() {
            for r_idx in 0..table.rows.len() {
                let mut candidate = programs.to_vec();
                let db = match &mut candidate[side] {
                    Program::Pg { db, .. } | Program::Hole { db } => db,
                };
                db.tables[t_idx].1.rows.remove(r_idx);
                out.push(candidate);
            }
        }
    }
    out
}

/// Greedily minimizes a failing witness. Returns the smallest set of
/// programs found that still fails the same property under the same
/// observer, fuel and mutation.
pub fn shrink_failure<L: Label>(
    observer: &L,
    fuel: u64,
    mutation: Mutation,
    witness: &FailWitness<L>,
) -> Vec<Program<L>> {
    let mut best = witness.programs.clone();
    if !still_fails(witness.property, observer, fuel, mutation, &best) {
        return best;
    }
    'round: for _ in 0..64 {
        let candidates = term_edits(&best).into_iter().chain(db_edits(&best));
        for candidate in candidates {
            if size(&candidate) < size(&best)
                && still_fails(witness.property, observer, fuel, mutation, &candidate)
            {
                best = candidate;
                continue 'round;
            }
        }
        break;
    }
    best
}

/// Re-checks a (possibly minimized) witness against its property.
pub fn witness_still_fails<L: Label>(
    observer: &L,
    fuel: u64,
    mutation: Mutation,
    property: &str,
    programs: &[Program<L>],
) -> bool {
    still_fails(property, observer, fuel, mutation, programs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::db::Database;
    use crate::label::TwoPointLabel as TP;

    type T = Term<TP>;

    #[test]
    fn subterm_paths_address_children() {
        let mut t = T::Bind(
            T::Return(T::Int(1).boxed()).boxed(),
            T::Lam(0, T::Return(T::Var(0).boxed()).boxed()).boxed(),
        );
        let mut paths = Vec::new();
        collect_paths(&t, &mut Vec::new(), &mut paths);
        assert!(paths.contains(&vec![]));
        assert!(paths.contains(&vec![0, 0]));
        let slot = subterm_mut(&mut t, &[0, 0]).unwrap();
        assert_eq!(*slot, T::Int(1));
        *slot = T::Int(9);
        assert!(matches!(&t, T::Bind(a, _) if **a == T::Return(T::Int(9).boxed())));
        assert!(subterm_mut(&mut t, &[5]).is_none());
    }

    #[test]
    fn shrinking_a_passing_witness_is_identity() {
        let p = Program::pg(TP::Public, Database::empty(), T::Return(T::Unit.boxed()));
        let w = FailWitness {
            seed: 0,
            property: "simulation",
            programs: vec![p.clone()],
            database: Database::empty(),
            lhs: p.clone(),
            rhs: p.clone(),
            first_divergence: "equal".into(),
        };
        assert_eq!(shrink_failure(&TP::Public, 100, Mutation::None, &w), vec![p]);
    }
}
