//! Text formats: the s-expression grammar for terms, predicates and
//! programs, the JSON database file format, and canonical digests.
//!
//! Rendering is canonical: rendering then parsing is the identity, and
//! equal values render byte-identically, so reports and traces can be
//! compared as text.

use serde_json::{json, Map, Value};
use sha2::{Digest, Sha256};
use thiserror::Error;

use crate::db::{Database, FieldRef, LabelFn, Pred, Row, Table, TablePolicy};
use crate::label::Label;
use crate::term::{LabelOp, Program, Term};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("{line}:{col}: {msg}")]
    Syntax { line: usize, col: usize, msg: String },
    #[error("{path}: {msg}")]
    Format { path: String, msg: String },
}

impl ParseError {
    fn at(pos: Pos, msg: impl Into<String>) -> Self {
        ParseError::Syntax { line: pos.line, col: pos.col, msg: msg.into() }
    }

    fn fmt(path: impl Into<String>, msg: impl Into<String>) -> Self {
        ParseError::Format { path: path.into(), msg: msg.into() }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
struct Pos {
    line: usize,
    col: usize,
}

#[derive(Debug, Clone)]
enum Sexp {
    Atom(String, Pos),
    Str(String, Pos),
    List(Vec<Sexp>, Pos),
}

impl Sexp {
    fn pos(&self) -> Pos {
        match self {
            Sexp::Atom(_, p) | Sexp::Str(_, p) | Sexp::List(_, p) => *p,
        }
    }
}

#[derive(Debug)]
enum Tok {
    LParen(Pos),
    RParen(Pos),
    Atom(String, Pos),
    Str(String, Pos),
}

fn lex(src: &str) -> Result<Vec<Tok>, ParseError> {
    let mut out = Vec::new();
    let mut line = 1usize;
    let mut col = 1usize;
    let mut chars = src.chars().peekable();
    while let Some(&c) = chars.peek() {
        let pos = Pos { line, col };
        match c {
            '\n' => {
                chars.next();
                line += 1;
                col = 1;
            }
            c if c.is_whitespace() => {
                chars.next();
                col += 1;
            }
            ';' => {
                while let Some(&c) = chars.peek() {
                    if c == '\n' {
                        break;
                    }
                    chars.next();
                    col += 1;
                }
            }
            '(' => {
                chars.next();
                col += 1;
                out.push(Tok::LParen(pos));
            }
            ')' => {
                chars.next();
                col += 1;
                out.push(Tok::RParen(pos));
            }
            '"' => {
                chars.next();
                col += 1;
                let mut s = String::new();
                loop {
                    match chars.next() {
                        None => return Err(ParseError::at(pos, "unterminated string")),
                        Some('"') => {
                            col += 1;
                            break;
                        }
                        Some('\\') => {
                            col += 1;
                            match chars.next() {
                                Some('"') => s.push('"'),
                                Some('\\') => s.push('\\'),
                                _ => return Err(ParseError::at(pos, "bad escape in string")),
                            }
                            col += 1;
                        }
                        Some('\n') => return Err(ParseError::at(pos, "newline in string")),
                        Some(c) => {
                            s.push(c);
                            col += 1;
                        }
                    }
                }
                out.push(Tok::Str(s, pos));
            }
            _ => {
                let mut s = String::new();
                while let Some(&c) = chars.peek() {
                    if c.is_whitespace() || c == '(' || c == ')' || c == '"' || c == ';' {
                        break;
                    }
                    s.push(c);
                    chars.next();
                    col += 1;
                }
                out.push(Tok::Atom(s, pos));
            }
        }
    }
    Ok(out)
}

fn parse_sexp(src: &str) -> Result<Sexp, ParseError> {
    let toks = lex(src)?;
    let mut iter = toks.into_iter().peekable();
    let expr = parse_one(&mut iter)?;
    if let Some(t) = iter.next() {
        let pos = match t {
            Tok::LParen(p) | Tok::RParen(p) | Tok::Atom(_, p) | Tok::Str(_, p) => p,
        };
        return Err(ParseError::at(pos, "trailing input after expression"));
    }
    Ok(expr)
}

fn parse_one(iter: &mut std::iter::Peekable<std::vec::IntoIter<Tok>>) -> Result<Sexp, ParseError> {
    match iter.next() {
        None => Err(ParseError::at(Pos { line: 1, col: 1 }, "empty input")),
        Some(Tok::Atom(s, p)) => Ok(Sexp::Atom(s, p)),
        Some(Tok::Str(s, p)) => Ok(Sexp::Str(s, p)),
        Some(Tok::RParen(p)) => Err(ParseError::at(p, "unexpected `)`")),
        Some(Tok::LParen(p)) => {
            let mut items = Vec::new();
            loop {
                match iter.peek() {
                    None => return Err(ParseError::at(p, "unclosed `(`")),
                    Some(Tok::RParen(_)) => {
                        iter.next();
                        return Ok(Sexp::List(items, p));
                    }
                    Some(_) => items.push(parse_one(iter)?),
                }
            }
        }
    }
}

fn expect_len(items: &[Sexp], n: usize, what: &str, pos: Pos) -> Result<(), ParseError> {
    if items.len() != n {
        Err(ParseError::at(pos, format!("`{what}` takes {} argument(s)", n - 1)))
    } else {
        Ok(())
    }
}

fn atom<'a>(s: &'a Sexp, what: &str) -> Result<&'a str, ParseError> {
    match s {
        Sexp::Atom(a, _) => Ok(a),
        other => Err(ParseError::at(other.pos(), format!("expected {what}"))),
    }
}

fn string(s: &Sexp) -> Result<String, ParseError> {
    match s {
        Sexp::Str(a, _) => Ok(a.clone()),
        other => Err(ParseError::at(other.pos(), "expected a quoted name")),
    }
}

fn integer(s: &Sexp) -> Result<i64, ParseError> {
    let a = atom(s, "an integer")?;
    a.parse::<i64>().map_err(|_| ParseError::at(s.pos(), format!("bad integer `{a}`")))
}

fn label_of<L: Label>(s: &Sexp) -> Result<L, ParseError> {
    let a = atom(s, "a label")?;
    L::parse(a).map_err(|e| ParseError::at(s.pos(), e.to_string()))
}

fn field_ref(s: &Sexp) -> Result<FieldRef, ParseError> {
    match atom(s, "a field (key|f1|f2)")? {
        "key" => Ok(FieldRef::Key),
        "f1" => Ok(FieldRef::Field1),
        "f2" => Ok(FieldRef::Field2),
        other => Err(ParseError::at(s.pos(), format!("bad field `{other}`, expected key|f1|f2"))),
    }
}

fn pred_of<L: Label>(s: &Sexp) -> Result<Pred<L>, ParseError> {
    match s {
        Sexp::Atom(a, p) => match a.as_str() {
            "true" => Ok(Pred::True),
            "false" => Ok(Pred::False),
            other => Err(ParseError::at(*p, format!("bad predicate `{other}`"))),
        },
        Sexp::Str(_, p) => Err(ParseError::at(*p, "expected a predicate")),
        Sexp::List(items, p) => {
            if items.is_empty() {
                return Err(ParseError::at(*p, "empty predicate"));
            }
            let head = atom(&items[0], "a predicate head")?;
            match head {
                "=" => {
                    expect_len(items, 3, "=", *p)?;
                    let c = term_of::<L>(&items[2])?;
                    if !c.is_db_value() {
                        return Err(ParseError::at(
                            items[2].pos(),
                            "equality constant must be a database value",
                        ));
                    }
                    Ok(Pred::Eq(field_ref(&items[1])?, c.boxed()))
                }
                "<" => {
                    expect_len(items, 3, "<", *p)?;
                    Ok(Pred::Lt(field_ref(&items[1])?, integer(&items[2])?))
                }
                "and" => {
                    expect_len(items, 3, "and", *p)?;
                    Ok(Pred::And(pred_of(&items[1])?.boxed(), pred_of(&items[2])?.boxed()))
                }
                "or" => {
                    expect_len(items, 3, "or", *p)?;
                    Ok(Pred::Or(pred_of(&items[1])?.boxed(), pred_of(&items[2])?.boxed()))
                }
                "not" => {
                    expect_len(items, 2, "not", *p)?;
                    Ok(Pred::Not(pred_of(&items[1])?.boxed()))
                }
                other => Err(ParseError::at(*p, format!("bad predicate head `{other}`"))),
            }
        }
    }
}

fn term_of<L: Label>(s: &Sexp) -> Result<Term<L>, ParseError> {
    match s {
        Sexp::Atom(a, p) => match a.as_str() {
            "unit" => Ok(Term::Unit),
            "true" => Ok(Term::True),
            "false" => Ok(Term::False),
            "nil" => Ok(Term::Nil),
            "hole" => Ok(Term::Hole),
            "getlabel" => Ok(Term::GetLabel),
            "exception" => Ok(Term::Exception),
            other => Err(ParseError::at(*p, format!("unknown term `{other}`"))),
        },
        Sexp::Str(_, p) => Err(ParseError::at(*p, "expected a term")),
        Sexp::List(items, p) => {
            if items.is_empty() {
                return Err(ParseError::at(*p, "empty term"));
            }
            let head = atom(&items[0], "a term head")?;
            let t1 = |items: &[Sexp]| term_of::<L>(&items[1]);
            match head {
                "int" => {
                    expect_len(items, 2, "int", *p)?;
                    Ok(Term::Int(integer(&items[1])?))
                }
                "label" => {
                    expect_len(items, 2, "label", *p)?;
                    Ok(Term::Label(label_of(&items[1])?))
                }
                "labeled" => {
                    expect_len(items, 3, "labeled", *p)?;
                    Ok(Term::Labeled(label_of(&items[1])?, term_of::<L>(&items[2])?.boxed()))
                }
                "labelof" => {
                    expect_len(items, 2, "labelof", *p)?;
                    Ok(Term::LabelOf(t1(items)?.boxed()))
                }
                "var" => {
                    expect_len(items, 2, "var", *p)?;
                    let n = integer(&items[1])?;
                    u32::try_from(n)
                        .map(Term::Var)
                        .map_err(|_| ParseError::at(items[1].pos(), "variable id out of range"))
                }
                "lam" => {
                    expect_len(items, 3, "lam", *p)?;
                    let n = integer(&items[1])?;
                    let x = u32::try_from(n)
                        .map_err(|_| ParseError::at(items[1].pos(), "variable id out of range"))?;
                    Ok(Term::Lam(x, term_of::<L>(&items[2])?.boxed()))
                }
                "app" => {
                    expect_len(items, 3, "app", *p)?;
                    Ok(Term::App(t1(items)?.boxed(), term_of::<L>(&items[2])?.boxed()))
                }
                "fix" => {
                    expect_len(items, 2, "fix", *p)?;
                    Ok(Term::Fix(t1(items)?.boxed()))
                }
                "if" => {
                    expect_len(items, 4, "if", *p)?;
                    Ok(Term::If(
                        t1(items)?.boxed(),
                        term_of::<L>(&items[2])?.boxed(),
                        term_of::<L>(&items[3])?.boxed(),
                    ))
                }
                "op" => {
                    expect_len(items, 4, "op", *p)?;
                    let op = match atom(&items[1], "an operator")? {
                        "join" => LabelOp::Join,
                        "meet" => LabelOp::Meet,
                        "canflowto" => LabelOp::CanFlowTo,
                        other => {
                            return Err(ParseError::at(
                                items[1].pos(),
                                format!("bad operator `{other}`, expected join|meet|canflowto"),
                            ))
                        }
                    };
                    Ok(Term::Op(
                        op,
                        term_of::<L>(&items[2])?.boxed(),
                        term_of::<L>(&items[3])?.boxed(),
                    ))
                }
                "cons" => {
                    expect_len(items, 3, "cons", *p)?;
                    Ok(Term::Cons(t1(items)?.boxed(), term_of::<L>(&items[2])?.boxed()))
                }
                "bind" => {
                    expect_len(items, 3, "bind", *p)?;
                    Ok(Term::Bind(t1(items)?.boxed(), term_of::<L>(&items[2])?.boxed()))
                }
                "return" => {
                    expect_len(items, 2, "return", *p)?;
                    Ok(Term::Return(t1(items)?.boxed()))
                }
                "lio" => {
                    expect_len(items, 2, "lio", *p)?;
                    Ok(Term::Lio(t1(items)?.boxed()))
                }
                "tlabel" => {
                    expect_len(items, 3, "tlabel", *p)?;
                    Ok(Term::MkLabeled(t1(items)?.boxed(), term_of::<L>(&items[2])?.boxed()))
                }
                "unlabel" => {
                    expect_len(items, 2, "unlabel", *p)?;
                    Ok(Term::Unlabel(t1(items)?.boxed()))
                }
                "tolabeled" => {
                    expect_len(items, 3, "tolabeled", *p)?;
                    Ok(Term::ToLabeled(t1(items)?.boxed(), term_of::<L>(&items[2])?.boxed()))
                }
                "insert" => {
                    expect_len(items, 4, "insert", *p)?;
                    Ok(Term::Insert(
                        string(&items[1])?,
                        term_of::<L>(&items[2])?.boxed(),
                        term_of::<L>(&items[3])?.boxed(),
                    ))
                }
                "select" => {
                    expect_len(items, 3, "select", *p)?;
                    Ok(Term::Select(string(&items[1])?, pred_of(&items[2])?))
                }
                "delete" => {
                    expect_len(items, 3, "delete", *p)?;
                    Ok(Term::Delete(string(&items[1])?, pred_of(&items[2])?))
                }
                "update" => {
                    expect_len(items, 5, "update", *p)?;
                    Ok(Term::Update(
                        string(&items[1])?,
                        pred_of(&items[2])?,
                        term_of::<L>(&items[3])?.boxed(),
                        term_of::<L>(&items[4])?.boxed(),
                    ))
                }
                other => Err(ParseError::at(*p, format!("unknown term head `{other}`"))),
            }
        }
    }
}

/// Parses a term in the s-expression grammar.
pub fn parse_term<L: Label>(src: &str) -> Result<Term<L>, ParseError> {
    term_of(&parse_sexp(src)?)
}

/// Parses a predicate in the s-expression grammar.
pub fn parse_pred<L: Label>(src: &str) -> Result<Pred<L>, ParseError> {
    pred_of(&parse_sexp(src)?)
}

/// A program file: either a hole, or a term with an optional starting label
/// (the current label defaults to bottom when omitted).
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ParsedProgram<L> {
    Hole,
    Pg { label: Option<L>, term: Term<L> },
}

impl<L: Label> ParsedProgram<L> {
    /// Attaches the database from the database file.
    pub fn assemble(self, db: Database<L>) -> Program<L> {
        match self {
            ParsedProgram::Hole => Program::Hole { db },
            ParsedProgram::Pg { label, term } => {
                Program::Pg { label: label.unwrap_or_else(L::bottom), db, term }
            }
        }
    }
}

/// Parses a program file: `pghole`, `(pg <label> <term>)`, or a bare term.
pub fn parse_program<L: Label>(src: &str) -> Result<ParsedProgram<L>, ParseError> {
    let sexp = parse_sexp(src)?;
    if let Sexp::Atom(a, _) = &sexp {
        if a == "pghole" {
            return Ok(ParsedProgram::Hole);
        }
    }
    if let Sexp::List(items, p) = &sexp {
        if !items.is_empty() && matches!(&items[0], Sexp::Atom(h, _) if h == "pg") {
            expect_len(items, 3, "pg", *p)?;
            return Ok(ParsedProgram::Pg {
                label: Some(label_of(&items[1])?),
                term: term_of(&items[2])?,
            });
        }
    }
    Ok(ParsedProgram::Pg { label: None, term: term_of(&sexp)? })
}

fn escape_name(n: &str) -> String {
    let mut out = String::from("\"");
    for c in n.chars() {
        if c == '"' || c == '\\' {
            out.push('\\');
        }
        out.push(c);
    }
    out.push('"');
    out
}

pub fn render_pred<L: Label>(p: &Pred<L>) -> String {
    match p {
        Pred::True => "true".into(),
        Pred::False => "false".into(),
        Pred::Eq(f, c) => format!("(= {} {})", f.render(), render_term(c)),
        Pred::Lt(f, n) => format!("(< {} {n})", f.render()),
        Pred::And(a, b) => format!("(and {} {})", render_pred(a), render_pred(b)),
        Pred::Or(a, b) => format!("(or {} {})", render_pred(a), render_pred(b)),
        Pred::Not(a) => format!("(not {})", render_pred(a)),
    }
}

/// Renders a term on one line in the s-expression grammar.
pub fn render_term<L: Label>(t: &Term<L>) -> String {
    match t {
        Term::Unit => "unit".into(),
        Term::Int(n) => format!("(int {n})"),
        Term::True => "true".into(),
        Term::False => "false".into(),
        Term::Label(l) => format!("(label {})", l.render()),
        Term::Labeled(l, t) => format!("(labeled {} {})", l.render(), render_term(t)),
        Term::LabelOf(t) => format!("(labelof {})", render_term(t)),
        Term::Var(x) => format!("(var {x})"),
        Term::Lam(x, t) => format!("(lam {x} {})", render_term(t)),
        Term::App(a, b) => format!("(app {} {})", render_term(a), render_term(b)),
        Term::Fix(t) => format!("(fix {})", render_term(t)),
        Term::If(c, a, b) => {
            format!("(if {} {} {})", render_term(c), render_term(a), render_term(b))
        }
        Term::Op(o, a, b) => {
            let name = match o {
                LabelOp::Join => "join",
                LabelOp::Meet => "meet",
                LabelOp::CanFlowTo => "canflowto",
            };
            format!("(op {name} {} {})", render_term(a), render_term(b))
        }
        Term::Nil => "nil".into(),
        Term::Cons(a, b) => format!("(cons {} {})", render_term(a), render_term(b)),
        Term::Hole => "hole".into(),
        Term::Bind(a, b) => format!("(bind {} {})", render_term(a), render_term(b)),
        Term::Return(t) => format!("(return {})", render_term(t)),
        Term::GetLabel => "getlabel".into(),
        Term::Lio(t) => format!("(lio {})", render_term(t)),
        Term::MkLabeled(a, b) => format!("(tlabel {} {})", render_term(a), render_term(b)),
        Term::Unlabel(t) => format!("(unlabel {})", render_term(t)),
        Term::Exception => "exception".into(),
        Term::ToLabeled(a, b) => format!("(tolabeled {} {})", render_term(a), render_term(b)),
        Term::Insert(n, a, b) => {
            format!("(insert {} {} {})", escape_name(n), render_term(a), render_term(b))
        }
        Term::Select(n, p) => format!("(select {} {})", escape_name(n), render_pred(p)),
        Term::Delete(n, p) => format!("(delete {} {})", escape_name(n), render_pred(p)),
        Term::Update(n, p, a, b) => format!(
            "(update {} {} {} {})",
            escape_name(n),
            render_pred(p),
            render_term(a),
            render_term(b)
        ),
    }
}

/// Renders the program part of a configuration (`pghole` or `(pg ...)`);
/// the database is rendered separately as JSON.
pub fn render_program<L: Label>(p: &Program<L>) -> String {
    match p {
        Program::Hole { .. } => "pghole".into(),
        Program::Pg { label, term, .. } => {
            format!("(pg {} {})", label.render(), render_term(term))
        }
    }
}

fn label_fn_to_json<L: Label>(f: &LabelFn<L>) -> Value {
    match f {
        LabelFn::Const(l) => json!({ "const": l.render() }),
        LabelFn::IfEqInt(n, a, b) => {
            json!({ "ifEqInt": [n, label_fn_to_json(a), label_fn_to_json(b)] })
        }
        LabelFn::Join(a, b) => json!({ "join": [label_fn_to_json(a), label_fn_to_json(b)] }),
        LabelFn::Meet(a, b) => json!({ "meet": [label_fn_to_json(a), label_fn_to_json(b)] }),
    }
}

pub fn db_to_json<L: Label>(db: &Database<L>) -> Value {
    let tables: Vec<Value> = db
        .tables
        .iter()
        .map(|(name, t)| {
            let rows: Vec<Value> = t
                .rows
                .iter()
                .map(|r| {
                    let key = match &r.key {
                        Term::Int(k) => json!(k),
                        other => json!(render_term(other)),
                    };
                    json!({ "key": key, "v1": render_term(&r.v1), "v2": render_term(&r.v2) })
                })
                .collect();
            json!({
                "name": name,
                "policy": {
                    "tableLabel": t.policy.table_label.render(),
                    "fresh": t.policy.fresh,
                    "labelField1": t.policy.label_field1.render(),
                    "labelField2": label_fn_to_json(&t.policy.label_field2),
                },
                "rows": rows,
            })
        })
        .collect();
    json!({ "tables": tables })
}

fn json_str<'a>(v: &'a Value, path: &str) -> Result<&'a str, ParseError> {
    v.as_str().ok_or_else(|| ParseError::fmt(path, "expected a string"))
}

fn json_label<L: Label>(v: &Value, path: &str) -> Result<L, ParseError> {
    L::parse(json_str(v, path)?).map_err(|e| ParseError::fmt(path, e.to_string()))
}

fn label_fn_from_json<L: Label>(v: &Value, path: &str) -> Result<LabelFn<L>, ParseError> {
    let obj = v.as_object().ok_or_else(|| ParseError::fmt(path, "expected a label-fn object"))?;
    if obj.len() != 1 {
        return Err(ParseError::fmt(path, "label fn must have exactly one key"));
    }
    let (k, inner) = obj.iter().next().unwrap();
    let pair = |inner: &Value, want: usize| -> Result<Vec<Value>, ParseError> {
        let arr = inner
            .as_array()
            .ok_or_else(|| ParseError::fmt(path, format!("`{k}` expects an array")))?;
        if arr.len() != want {
            return Err(ParseError::fmt(path, format!("`{k}` expects {want} entries")));
        }
        Ok(arr.clone())
    };
    match k.as_str() {
        "const" => Ok(LabelFn::Const(json_label(inner, path)?)),
        "ifEqInt" => {
            let arr = pair(inner, 3)?;
            let n = arr[0]
                .as_i64()
                .ok_or_else(|| ParseError::fmt(path, "`ifEqInt` expects an integer first"))?;
            Ok(LabelFn::IfEqInt(
                n,
                label_fn_from_json(&arr[1], path)?.boxed(),
                label_fn_from_json(&arr[2], path)?.boxed(),
            ))
        }
        "join" => {
            let arr = pair(inner, 2)?;
            Ok(LabelFn::Join(
                label_fn_from_json(&arr[0], path)?.boxed(),
                label_fn_from_json(&arr[1], path)?.boxed(),
            ))
        }
        "meet" => {
            let arr = pair(inner, 2)?;
            Ok(LabelFn::Meet(
                label_fn_from_json(&arr[0], path)?.boxed(),
                label_fn_from_json(&arr[1], path)?.boxed(),
            ))
        }
        other => Err(ParseError::fmt(path, format!("unknown label fn `{other}`"))),
    }
}

fn row_term<L: Label>(v: &Value, path: &str) -> Result<Term<L>, ParseError> {
    let src = json_str(v, path)?;
    let t = parse_term::<L>(src).map_err(|e| ParseError::fmt(path, e.to_string()))?;
    if !t.is_db_value() {
        return Err(ParseError::fmt(path, format!("`{src}` is not a database value")));
    }
    Ok(t)
}

pub fn db_from_json<L: Label>(v: &Value) -> Result<Database<L>, ParseError> {
    let tables = v
        .get("tables")
        .and_then(Value::as_array)
        .ok_or_else(|| ParseError::fmt("db", "expected top-level `tables` array"))?;
    let mut out = Database::empty();
    for (i, tv) in tables.iter().enumerate() {
        let path = format!("tables[{i}]");
        let name = json_str(
            tv.get("name").ok_or_else(|| ParseError::fmt(&path, "missing `name`"))?,
            &path,
        )?
        .to_string();
        let policy_v =
            tv.get("policy").ok_or_else(|| ParseError::fmt(&path, "missing `policy`"))?;
        let ppath = format!("{path}.policy");
        let table_label = json_label::<L>(
            policy_v.get("tableLabel").ok_or_else(|| ParseError::fmt(&ppath, "missing `tableLabel`"))?,
            &ppath,
        )?;
        let label_field1 = json_label::<L>(
            policy_v
                .get("labelField1")
                .ok_or_else(|| ParseError::fmt(&ppath, "missing `labelField1`"))?,
            &ppath,
        )?;
        let label_field2 = label_fn_from_json::<L>(
            policy_v
                .get("labelField2")
                .ok_or_else(|| ParseError::fmt(&ppath, "missing `labelField2`"))?,
            &ppath,
        )?;
        let rows_v = tv.get("rows").and_then(Value::as_array).cloned().unwrap_or_default();
        let mut rows = Vec::new();
        for (j, rv) in rows_v.iter().enumerate() {
            let rpath = format!("{path}.rows[{j}]");
            let key = rv
                .get("key")
                .and_then(Value::as_i64)
                .ok_or_else(|| ParseError::fmt(&rpath, "missing integer `key`"))?;
            let v1 = row_term::<L>(
                rv.get("v1").ok_or_else(|| ParseError::fmt(&rpath, "missing `v1`"))?,
                &rpath,
            )?;
            let v2 = row_term::<L>(
                rv.get("v2").ok_or_else(|| ParseError::fmt(&rpath, "missing `v2`"))?,
                &rpath,
            )?;
            rows.push(Row { key: Term::Int(key), v1, v2 });
        }
        // A file may omit the counter; it then starts at the number of
        // pre-seeded rows.
        let fresh = match policy_v.get("fresh") {
            Some(f) => {
                f.as_i64().ok_or_else(|| ParseError::fmt(&ppath, "`fresh` must be an integer"))?
            }
            None => rows.len() as i64,
        };
        out.tables.push((
            name,
            Table { policy: TablePolicy { table_label, fresh, label_field1, label_field2 }, rows },
        ));
    }
    Ok(out)
}

/// Parses a database file.
pub fn parse_db<L: Label>(src: &str) -> Result<Database<L>, ParseError> {
    let v: Value = serde_json::from_str(src).map_err(|e| ParseError::Syntax {
        line: e.line(),
        col: e.column(),
        msg: e.to_string(),
    })?;
    db_from_json(&v)
}

/// Canonical single-line rendering of a database.
pub fn render_db<L: Label>(db: &Database<L>) -> String {
    canonical_json(&db_to_json(db))
}

pub fn render_db_pretty<L: Label>(db: &Database<L>) -> String {
    serde_json::to_string_pretty(&sort_json(db_to_json(db))).expect("json rendering")
}

/// Serializes with object keys sorted, so equal values render identically.
pub fn canonical_json(v: &Value) -> String {
    serde_json::to_string(&sort_json(v.clone())).expect("json rendering")
}

fn sort_json(v: Value) -> Value {
    match v {
        Value::Object(map) => {
            let mut sorted: Vec<(String, Value)> = map.into_iter().collect();
            sorted.sort_by(|a, b| a.0.cmp(&b.0));
            let mut out = Map::new();
            for (k, v) in sorted {
                out.insert(k, sort_json(v));
            }
            Value::Object(out)
        }
        Value::Array(items) => Value::Array(items.into_iter().map(sort_json).collect()),
        other => other,
    }
}

/// Short stable digest of a database's canonical rendering; traces print
/// this instead of the full store.
pub fn db_digest<L: Label>(db: &Database<L>) -> String {
    let bytes = Sha256::digest(render_db(db).as_bytes());
    let mut out = String::new();
    for b in &bytes[..6] {
        out.push_str(&format!("{b:02x}"));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::label::{PowersetLabel, TwoPointLabel as TP};

    type T = Term<TP>;

    #[test]
    fn grammar_forms_parse() {
        let cases = [
            "unit",
            "(int 5)",
            "true",
            "false",
            "(label secret)",
            "(labeled secret (int 1))",
            "(labelof (labeled public unit))",
            "(var 0)",
            "(lam 0 (var 0))",
            "(app (lam 0 (var 0)) (int 1))",
            "(fix (lam 0 (var 0)))",
            "(if true unit (int 2))",
            "(op join (label public) (label secret))",
            "(op meet (label public) (label secret))",
            "(op canflowto (label public) (label secret))",
            "nil",
            "(cons (int 1) nil)",
            "hole",
            "(bind (return unit) (lam 0 (return (var 0))))",
            "(return unit)",
            "getlabel",
            "(lio unit)",
            "(tlabel (label secret) (int 1))",
            "(unlabel (labeled secret (int 1)))",
            "exception",
            "(tolabeled (label secret) (return unit))",
            "(insert \"t\" (labeled public (int 1)) (labeled public unit))",
            "(select \"t\" true)",
            "(delete \"t\" (= key (int 0)))",
            "(update \"t\" (and (< f1 3) (not (= f2 hole))) (labeled public (int 1)) (labeled public unit))",
        ];
        for src in cases {
            let t = parse_term::<TP>(src).unwrap_or_else(|e| panic!("{src}: {e}"));
            assert_eq!(render_term(&t), src, "rendering is canonical for {src}");
        }
    }

    #[test]
    fn parse_errors_carry_positions() {
        let err = parse_term::<TP>("(int\nx)").unwrap_err();
        match err {
            ParseError::Syntax { line, col, .. } => {
                assert_eq!(line, 2);
                assert_eq!(col, 1);
            }
            other => panic!("unexpected {other:?}"),
        }
        assert!(parse_term::<TP>("(labeled classified unit)").is_err());
        assert!(parse_term::<TP>("(select \"t\" (= f1 (lam 0 (var 0))))").is_err());
    }

    #[test]
    fn program_forms() {
        let p = parse_program::<TP>("(pg secret (return unit))").unwrap();
        assert_eq!(
            p,
            ParsedProgram::Pg { label: Some(TP::Secret), term: T::Return(T::Unit.boxed()) }
        );
        assert_eq!(parse_program::<TP>("pghole").unwrap(), ParsedProgram::Hole);
        let bare = parse_program::<TP>("(return unit)").unwrap();
        assert_eq!(bare, ParsedProgram::Pg { label: None, term: T::Return(T::Unit.boxed()) });
    }

    #[test]
    fn db_json_round_trip() {
        type L = PowersetLabel;
        let ps = |names: &[&str]| PowersetLabel::from_names(names.iter().copied());
        let db = Database::<L> {
            tables: vec![(
                "t".into(),
                Table {
                    policy: TablePolicy {
                        table_label: ps(&["A", "B"]),
                        fresh: 3,
                        label_field1: ps(&["A"]),
                        label_field2: LabelFn::IfEqInt(
                            0,
                            LabelFn::Const(ps(&["B"])).boxed(),
                            LabelFn::Join(
                                LabelFn::Const(ps(&["A"])).boxed(),
                                LabelFn::Const(ps(&["B"])).boxed(),
                            )
                            .boxed(),
                        ),
                    },
                    rows: vec![
                        Row { key: Term::Int(0), v1: Term::Int(1), v2: Term::Hole },
                        Row { key: Term::Int(2), v1: Term::Label(ps(&["A"])), v2: Term::True },
                    ],
                },
            )],
        };
        let text = render_db(&db);
        let back = parse_db::<L>(&text).unwrap();
        assert_eq!(back, db);
        assert_eq!(render_db(&back), text);
    }

    #[test]
    fn db_fresh_defaults_to_row_count() {
        let src = r#"{ "tables": [ { "name": "t",
            "policy": { "tableLabel": "public", "labelField1": "public",
                        "labelField2": {"const": "public"} },
            "rows": [ {"key": 0, "v1": "(int 1)", "v2": "unit"},
                      {"key": 1, "v1": "(int 2)", "v2": "unit"} ] } ] }"#;
        let db = parse_db::<TP>(src).unwrap();
        assert_eq!(db.lookup_table("t").unwrap().policy.fresh, 2);
    }

    #[test]
    fn db_rejects_non_db_values() {
        let src = r#"{ "tables": [ { "name": "t",
            "policy": { "tableLabel": "public", "fresh": 1, "labelField1": "public",
                        "labelField2": {"const": "public"} },
            "rows": [ {"key": 0, "v1": "(lam 0 (var 0))", "v2": "unit"} ] } ] }"#;
        assert!(parse_db::<TP>(src).is_err());
    }

    #[test]
    fn digest_is_stable_and_content_sensitive() {
        let db1 = parse_db::<TP>(r#"{ "tables": [] }"#).unwrap();
        let db2 = parse_db::<TP>(
            r#"{ "tables": [ { "name": "t", "policy": { "tableLabel": "public", "fresh": 0,
                 "labelField1": "public", "labelField2": {"const": "public"} }, "rows": [] } ] }"#,
        )
        .unwrap();
        assert_eq!(db_digest(&db1), db_digest(&db1));
        assert_ne!(db_digest(&db1), db_digest(&db2));
    }

    #[test]
    fn names_with_quotes_round_trip() {
        let t: Term<TP> = Term::Select("a\"b".into(), Pred::True);
        let rendered = render_term(&t);
        assert_eq!(parse_term::<TP>(&rendered).unwrap(), t);
    }
}
