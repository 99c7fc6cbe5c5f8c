//! Session files: bindings of varieties and chains, commands, and reports.

mod syntax;

use std::collections::BTreeMap;

use num_traits::{One, Zero};
use serde_json::{json, Value as Json};

use crate::chains::{boundary, boundary_witness_p1, check_d_squared, is_cycle, normalize, reduce_relative, residue_triple, support, Options, PolarChain, Subvariety, Triple};
use crate::error::{Error, Result};
use crate::forms::{dlog, DifferentialForm};
use crate::geometry::{render_point, DivisorComponent, HomPoint, Kind, Variety};
use crate::homotopy::{residue_table, verify_homotopy_identity};
use crate::maps::Map;
use crate::poly::{index_of, vars_from, Vars};
use crate::rational::RationalFunction;
use crate::residue::{iterated_residue, total_residue_p1};
use crate::scalar::{Rational, Scalar};

pub use syntax::{lex, parse_expr, parse_program, Command, Expr, Pos, Stmt, StmtKind};

#[derive(Clone, Debug)]
pub enum Value {
    Variety(Variety),
    Chain(PolarChain),
    Sub(Subvariety),
    Scalar(Scalar),
    /// A function or form expression, interpreted once coordinates are known.
    Deferred(Expr),
}

impl Value {
    fn kind(&self) -> &'static str {
        match self {
            Value::Variety(_) => "variety",
            Value::Chain(_) => "chain",
            Value::Sub(_) => "subvariety",
            Value::Scalar(_) => "scalar",
            Value::Deferred(_) => "expression",
        }
    }
}

enum F {
    Fun(RationalFunction),
    Form(DifferentialForm),
}

impl F {
    fn form(self) -> DifferentialForm {
        match self {
            F::Fun(f) => DifferentialForm::function(f),
            F::Form(w) => w,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Outcome {
    Ok,
    ComputationError,
    VerificationFailure,
}

#[derive(Clone, Debug)]
pub struct Report {
    pub command: String,
    pub outcome: Outcome,
    pub result: String,
    pub details: Json,
    pub provenance: Vec<String>,
}

impl Report {
    pub fn to_json(&self) -> Json {
        let status = if self.outcome == Outcome::ComputationError { "error" } else { "ok" };
        let mut details = self.details.clone();
        if self.outcome == Outcome::VerificationFailure {
            if let Some(m) = details.as_object_mut() {
                m.insert("verified".into(), Json::Bool(false));
            }
        }
        json!({
            "command": self.command,
            "status": status,
            "result": self.result,
            "details": details,
            "provenance": self.provenance,
        })
    }
}

/// The JSON document for a list of reports.
pub fn reports_json(reports: &[Report]) -> String {
    let doc = json!({ "schema": 1, "reports": reports.iter().map(Report::to_json).collect::<Vec<_>>() });
    serde_json::to_string_pretty(&doc).expect("serializable") + "\n"
}

pub fn reports_text(reports: &[Report]) -> String {
    let mut out = String::new();
    for r in reports {
        out.push_str(&format!("> {}\n{}\n", r.command, r.result));
    }
    out
}

/// 0 ok, 1 computation error, 3 verification failure.
pub fn exit_code(reports: &[Report]) -> i32 {
    if reports.iter().any(|r| r.outcome == Outcome::ComputationError) {
        1
    } else if reports.iter().any(|r| r.outcome == Outcome::VerificationFailure) {
        3
    } else {
        0
    }
}

fn session_error(msg: impl Into<String>) -> Error {
    Error::Session(msg.into())
}

fn integer(s: &Scalar) -> Result<i64> {
    s.as_rational()
        .filter(|r| r.is_integer())
        .and_then(|r| num_traits::ToPrimitive::to_i64(r.numer()))
        .ok_or_else(|| session_error(format!("expected an integer, found {s}")))
}

pub struct Session {
    bindings: BTreeMap<String, Value>,
    opts: Options,
}

struct Outcome2 {
    result: String,
    details: Json,
    provenance: Vec<&'static str>,
    verified: bool,
}

fn ok(result: String, details: Json, provenance: Vec<&'static str>) -> Outcome2 {
    Outcome2 { result, details, provenance, verified: true }
}

impl Session {
    pub fn new(opts: Options) -> Session {
        Session { bindings: BTreeMap::new(), opts }
    }

    pub fn options(&self) -> &Options {
        &self.opts
    }

    /// Parses the whole text, then executes every statement in order.
    pub fn run_source(&mut self, src: &str) -> Result<Vec<Report>> {
        let prog = parse_program(src)?;
        Ok(prog.iter().map(|s| self.execute(s)).collect())
    }

    pub fn execute(&mut self, stmt: &Stmt) -> Report {
        match self.try_execute(stmt) {
            Ok(o) => Report {
                command: stmt.text.clone(),
                outcome: if o.verified { Outcome::Ok } else { Outcome::VerificationFailure },
                result: o.result,
                details: o.details,
                provenance: o.provenance.into_iter().map(String::from).collect(),
            },
            Err(e) => Report {
                command: stmt.text.clone(),
                outcome: Outcome::ComputationError,
                result: format!("error [{}]: {e}", e.rule()),
                details: json!({ "error": e.to_string() }),
                provenance: vec![e.rule().to_string()],
            },
        }
    }

    fn try_execute(&mut self, stmt: &Stmt) -> Result<Outcome2> {
        match &stmt.kind {
            StmtKind::Let(name, e) => {
                if self.bindings.contains_key(name) {
                    return Err(session_error(format!("`{name}` is already defined")));
                }
                let v = self.value(e)?;
                let shown = self.show(&v)?;
                let kind = v.kind();
                self.bindings.insert(name.clone(), v);
                Ok(ok(format!("{name} = {shown}"), json!({ "name": name, "kind": kind }), vec![]))
            }
            StmtKind::Command(c) => self.command(c),
        }
    }

    fn show(&self, v: &Value) -> Result<String> {
        Ok(match v {
            Value::Variety(x) => x.render(),
            Value::Chain(c) => c.render(),
            Value::Sub(z) => z.to_string(),
            Value::Scalar(s) => s.to_string(),
            Value::Deferred(e) => e.to_string(),
        })
    }

    // ---- values ----

    pub fn value(&self, e: &Expr) -> Result<Value> {
        match e {
            Expr::Num(n) => Ok(Value::Scalar(Scalar::from_rational(Rational::from_integer(n.clone())))),
            Expr::Ident(name, _) => Ok(match self.bindings.get(name) {
                Some(v) => v.clone(),
                None if name == "TAU" => Value::Scalar(Scalar::tau_pow(1)),
                None if name == "Point" => Value::Variety(Variety::point()),
                None => Value::Deferred(e.clone()),
            }),
            Expr::Neg(a) => Ok(match self.value(a)? {
                Value::Chain(c) => Value::Chain(c.neg()),
                Value::Scalar(s) => Value::Scalar(-s),
                Value::Deferred(_) => Value::Deferred(e.clone()),
                v => return Err(session_error(format!("cannot negate a {}", v.kind()))),
            }),
            Expr::Bin(op, a, b) => self.binary(e, *op, self.value(a)?, self.value(b)?),
            Expr::Call(name, args, _) => match name.as_str() {
                "P1" | "P2" | "Curve" => Ok(Value::Variety(self.variety_call(e)?)),
                "chain" => Ok(Value::Chain(self.chain_call(args)?)),
                "point" => Ok(Value::Chain(self.point_call(args)?)),
                "zero" => {
                    let [x, q] = args.as_slice() else { return Err(session_error("zero(X, q) takes two arguments")) };
                    Ok(Value::Chain(PolarChain::zero(&self.variety(x)?, self.nonneg(q)?)))
                }
                "sub" => Ok(Value::Sub(self.sub_call(args)?)),
                "relative" => {
                    let [c, z] = args.as_slice() else { return Err(session_error("relative(chain, sub) takes two arguments")) };
                    let Value::Sub(z) = self.value(z)? else { return Err(session_error("relative: second argument must be a sub(...)")) };
                    Ok(Value::Chain(reduce_relative(&self.chain(c)?, &z, &self.opts)?))
                }
                "d" | "dlog" | "wedge" | "inf" => Ok(Value::Deferred(e.clone())),
                _ => Err(session_error(format!("unknown function `{name}`"))),
            },
            Expr::Product(..) => Ok(Value::Variety(self.variety_call(e)?)),
            _ => Ok(Value::Deferred(e.clone())),
        }
    }

    fn binary(&self, e: &Expr, op: char, a: Value, b: Value) -> Result<Value> {
        use Value::*;
        Ok(match (op, a, b) {
            ('+', Chain(x), Chain(y)) => Chain(x.add(&y)?),
            ('-', Chain(x), Chain(y)) => Chain(x.sub(&y)?),
            ('*', Scalar(s), Chain(c)) | ('*', Chain(c), Scalar(s)) => Chain(c.scale(&s)),
            ('/', Chain(c), Scalar(s)) => Chain(c.scale(&s.inv()?)),
            ('+', Scalar(x), Scalar(y)) => Scalar(&x + &y),
            ('-', Scalar(x), Scalar(y)) => Scalar(&x - &y),
            ('*', Scalar(x), Scalar(y)) => Scalar(&x * &y),
            ('/', Scalar(x), Scalar(y)) => Scalar(x.checked_div(&y)?),
            ('^', Scalar(x), Scalar(k)) => {
                let k = integer(&k)?;
                let p = x.pow(k.unsigned_abs() as u32);
                Scalar(if k < 0 { p.inv()? } else { p })
            }
            (_, Scalar(_) | Deferred(_), Scalar(_) | Deferred(_)) => Deferred(e.clone()),
            (op, a, b) => return Err(session_error(format!("`{op}` is not defined between a {} and a {}", a.kind(), b.kind()))),
        })
    }

    fn variety(&self, e: &Expr) -> Result<Variety> {
        match self.value(e)? {
            Value::Variety(v) => Ok(v),
            v => Err(session_error(format!("expected a variety, found a {}", v.kind()))),
        }
    }

    fn chain(&self, e: &Expr) -> Result<PolarChain> {
        match self.value(e)? {
            Value::Chain(c) => Ok(c),
            v => Err(session_error(format!("expected a chain, found a {}", v.kind()))),
        }
    }

    fn scalar(&self, e: &Expr) -> Result<Scalar> {
        match self.value(e)? {
            Value::Scalar(s) => Ok(s),
            v => Err(session_error(format!("expected a number, found `{e}` ({})", v.kind()))),
        }
    }

    fn rational(&self, e: &Expr) -> Result<Rational> {
        let s = self.scalar(e)?;
        s.as_rational().ok_or_else(|| session_error(format!("expected a rational number, found {s}")))
    }

    fn nonneg(&self, e: &Expr) -> Result<usize> {
        let k = integer(&self.scalar(e)?)?;
        usize::try_from(k).map_err(|_| session_error("expected a nonnegative integer"))
    }

    fn name_arg(e: &Expr) -> Result<String> {
        match e {
            Expr::Ident(n, _) => Ok(n.clone()),
            _ => Err(session_error(format!("expected a coordinate name, found `{e}`"))),
        }
    }

    fn variety_call(&self, e: &Expr) -> Result<Variety> {
        match e {
            Expr::Call(name, args, _) if name == "P1" => match args.as_slice() {
                [a] => Ok(Variety::projective_line(&Self::name_arg(a)?)),
                _ => Err(session_error("P1 takes one coordinate name")),
            },
            Expr::Call(name, args, _) if name == "P2" => match args.as_slice() {
                [a, b] => Variety::projective_plane(&Self::name_arg(a)?, &Self::name_arg(b)?),
                _ => Err(session_error("P2 takes two coordinate names")),
            },
            Expr::Call(name, args, _) if name == "Curve" => {
                let names = match args.as_slice() {
                    [p] => {
                        let mut found = Vec::new();
                        self.free_names(p, &mut found);
                        found.sort();
                        found.dedup();
                        found
                    }
                    [_, x, y] => vec![Self::name_arg(x)?, Self::name_arg(y)?],
                    _ => return Err(session_error("Curve takes an equation and optionally two coordinate names")),
                };
                if names.len() != 2 || names[0] == names[1] {
                    return Err(session_error(format!("a plane curve needs two coordinates, found [{}]", names.join(", "))));
                }
                let vars = vars_from(names);
                let F::Fun(f) = self.form_eval(&args[0], &vars)? else { return Err(session_error("a curve equation is a polynomial")) };
                let p = polynomial_of(&f)?;
                Variety::plane_curve(&p)
            }
            Expr::Product(factors, _) => {
                let mut names = Vec::new();
                for f in factors {
                    let Expr::Call(_, args, _) = f else { unreachable!() };
                    let [a] = args.as_slice() else { return Err(session_error("P1 takes one coordinate name")) };
                    names.push(Self::name_arg(a)?);
                }
                Variety::product_of_lines(&names)
            }
            _ => Err(session_error(format!("`{e}` is not a variety"))),
        }
    }

    fn free_names(&self, e: &Expr, out: &mut Vec<String>) {
        match e {
            Expr::Ident(n, _) if n != "TAU" && !self.bindings.contains_key(n) => out.push(n.clone()),
            Expr::Neg(a) => self.free_names(a, out),
            Expr::Bin(_, a, b) => {
                self.free_names(a, out);
                self.free_names(b, out);
            }
            _ => {}
        }
    }

    // ---- forms ----

    fn form_eval(&self, e: &Expr, vars: &Vars) -> Result<F> {
        match e {
            Expr::Num(n) => Ok(F::Fun(RationalFunction::constant(vars, Scalar::from_rational(Rational::from_integer(n.clone()))))),
            Expr::Ident(name, _) => {
                if let Ok(i) = index_of(vars, name) {
                    return Ok(F::Fun(RationalFunction::var(vars, i)));
                }
                if name == "TAU" {
                    return Ok(F::Fun(RationalFunction::constant(vars, Scalar::tau_pow(1))));
                }
                match self.bindings.get(name) {
                    Some(Value::Deferred(d)) => self.form_eval(d, vars),
                    Some(Value::Scalar(s)) => Ok(F::Fun(RationalFunction::constant(vars, s.clone()))),
                    Some(v) => Err(session_error(format!("`{name}` is a {}, not a function or form", v.kind()))),
                    None => match name.strip_prefix('d').map(|c| index_of(vars, c)) {
                        Some(Ok(i)) => Ok(F::Form(DifferentialForm::dvar(vars, i))),
                        _ => Err(Error::UnknownVariable(name.clone())),
                    },
                }
            }
            Expr::Neg(a) => Ok(match self.form_eval(a, vars)? {
                F::Fun(f) => F::Fun(f.neg()),
                F::Form(w) => F::Form(w.neg()),
            }),
            Expr::Bin(op, a, b) => {
                let (x, y) = (self.form_eval(a, vars)?, self.form_eval(b, vars)?);
                Ok(match (op, x, y) {
                    ('+', F::Fun(f), F::Fun(g)) => F::Fun(f.add(&g)),
                    ('-', F::Fun(f), F::Fun(g)) => F::Fun(f.sub(&g)),
                    ('*', F::Fun(f), F::Fun(g)) => F::Fun(f.mul(&g)),
                    ('/', F::Fun(f), F::Fun(g)) => F::Fun(f.div(&g)?),
                    ('^', F::Fun(f), F::Fun(g)) => {
                        let k = g.constant_value().ok_or_else(|| session_error(format!("exponent `{b}` is not a constant")))?;
                        let k = i32::try_from(integer(&k)?).map_err(|_| session_error("exponent out of range"))?;
                        F::Fun(f.pow(k)?)
                    }
                    ('+', x, y) => F::Form(x.form().add(&y.form())?),
                    ('-', x, y) => F::Form(x.form().sub(&y.form())?),
                    ('/', F::Form(w), F::Fun(g)) => F::Form(w.mul_function(&g.inv()?)),
                    ('*' | '^', x, y) => F::Form(x.form().wedge(&y.form())?),
                    (op, _, _) => return Err(session_error(format!("`{op}` is not defined on forms"))),
                })
            }
            Expr::Call(name, args, _) => match (name.as_str(), args.as_slice()) {
                ("d", [a]) => Ok(F::Form(self.form_eval(a, vars)?.form().exterior_derivative())),
                ("dlog", [a]) => match self.form_eval(a, vars)? {
                    F::Fun(f) => Ok(F::Form(dlog(&f)?)),
                    F::Form(_) => Err(session_error("dlog takes a function")),
                },
                ("wedge", [a, b]) => Ok(F::Form(self.form_eval(a, vars)?.form().wedge(&self.form_eval(b, vars)?.form())?)),
                _ => Err(session_error(format!("`{e}` is not a function or form"))),
            },
            _ => Err(session_error(format!("`{e}` is not a function or form"))),
        }
    }

    fn component(&self, e: &Expr, source: &Variety) -> Result<DivisorComponent> {
        match e {
            Expr::Ident(n, _) if n == "inf" => source.infinity_named(None),
            Expr::Call(n, args, _) if n == "inf" => match args.as_slice() {
                [a] => source.infinity_named(Some(&Self::name_arg(a)?)),
                _ => Err(session_error("inf(x) takes one coordinate name")),
            },
            _ => match self.form_eval(e, source.coords())? {
                F::Fun(f) => source.component(&polynomial_of(&f)?),
                F::Form(_) => Err(session_error(format!("pole `{e}` must be a polynomial"))),
            },
        }
    }

    fn map(&self, e: &Expr, source: &Variety, ambient: &Variety) -> Result<Map> {
        let vars = source.coords();
        match e {
            Expr::Ident(n, _) if n == "id" => {
                if source != ambient && !(source.is_curve() && source.coords() == ambient.coords()) {
                    return Err(session_error(format!("`id` needs the source {source} to equal the ambient {ambient}")));
                }
                Ok(Map::identity(ambient))
            }
            Expr::List(items, _) if !items.is_empty() && items.iter().all(|i| matches!(i, Expr::Hom(..))) => {
                let mut factors = Vec::new();
                for it in items {
                    let Expr::Hom(entries, _) = it else { unreachable!() };
                    factors.push(entries.iter().map(|x| self.function(x, vars)).collect::<Result<Vec<_>>>()?);
                }
                Map::from_rational_tuples(vars, factors)
            }
            Expr::List(items, _) => {
                let coords = items
                    .iter()
                    .map(|x| match x {
                        Expr::Ident(n, _) if n == "inf" => Ok(None),
                        _ => self.function(x, vars).map(Some),
                    })
                    .collect::<Result<Vec<_>>>()?;
                Map::from_affine(vars, ambient, &coords)
            }
            _ => Err(session_error(format!("`{e}` is not a map: use `id`, `[f1, f2]` or `[[F0:F1], ...]`"))),
        }
    }

    fn function(&self, e: &Expr, vars: &Vars) -> Result<RationalFunction> {
        match self.form_eval(e, vars)? {
            F::Fun(f) => Ok(f),
            F::Form(_) => Err(session_error(format!("`{e}` is a form, expected a function"))),
        }
    }

    fn chain_call(&self, args: &[Expr]) -> Result<PolarChain> {
        let (args, poles) = match args.split_last() {
            Some((Expr::Tagged(t, poles, _), rest)) if t == "poles" => (rest, poles.as_slice()),
            _ => (args, &[][..]),
        };
        let (source, ambient, map, form) = match args {
            [a, m, w] => {
                let a = self.variety(a)?;
                let x = if a.is_curve() { Variety::projective_plane(&a.coords()[0], &a.coords()[1])? } else { a.clone() };
                (a, x, m, w)
            }
            [a, x, m, w] => (self.variety(a)?, self.variety(x)?, m, w),
            _ => return Err(session_error("chain(A, id, form, poles[...]) or chain(A, X, map, form, poles[...])")),
        };
        let map = self.map(map, &source, &ambient)?;
        let form = self.form_eval(form, source.coords())?.form();
        let poles = poles.iter().map(|p| self.component(p, &source)).collect::<Result<Vec<_>>>()?;
        Ok(PolarChain::from_triple(&ambient, Triple::new(&source, &ambient, &map, &form, &poles)?))
    }

    fn point_coords(&self, e: &Expr, x: &Variety) -> Result<HomPoint> {
        let one = Rational::one();
        let items: Vec<Expr> = match e {
            Expr::List(items, _) => items.clone(),
            other => vec![other.clone()],
        };
        if !items.is_empty() && items.iter().all(|i| matches!(i, Expr::Hom(..))) {
            return items
                .iter()
                .map(|i| {
                    let Expr::Hom(entries, _) = i else { unreachable!() };
                    entries.iter().map(|c| self.rational(c)).collect()
                })
                .collect();
        }
        match x.kind() {
            Kind::Lines(_) => items
                .iter()
                .map(|c| match c {
                    Expr::Ident(n, _) if n == "inf" => Ok(vec![Rational::zero(), one.clone()]),
                    _ => Ok(vec![one.clone(), self.rational(c)?]),
                })
                .collect(),
            Kind::Plane => {
                let coords = items.iter().map(|c| self.rational(c)).collect::<Result<Vec<_>>>()?;
                let mut t = vec![one];
                t.extend(coords);
                Ok(vec![t])
            }
            Kind::Point => Ok(vec![]),
            Kind::Curve(_) => Err(Error::Unsupported("points with a curve as ambient".into())),
        }
    }

    fn point_call(&self, args: &[Expr]) -> Result<PolarChain> {
        let (x, coords, weight) = match args {
            [x, c] => (x, c, Scalar::one()),
            [x, c, w] => (x, c, self.scalar(w)?),
            _ => return Err(session_error("point(X, coordinates[, weight])")),
        };
        let x = self.variety(x)?;
        let pt = self.point_coords(coords, &x)?;
        Ok(PolarChain::from_triple(&x, Triple::point(&x, &pt, weight)?))
    }

    fn sub_call(&self, args: &[Expr]) -> Result<Subvariety> {
        let Some((x, rest)) = args.split_first() else { return Err(session_error("sub(X, points[...], hyper[...])")) };
        let x = self.variety(x)?;
        let mut points = Vec::new();
        let mut hyper = Vec::new();
        for r in rest {
            match r {
                Expr::Tagged(t, items, _) if t == "points" => {
                    for i in items {
                        points.push(self.point_coords(i, &x)?);
                    }
                }
                Expr::Tagged(t, items, _) if t == "hyper" => {
                    for i in items {
                        hyper.push(self.component(i, &x)?);
                    }
                }
                _ => return Err(session_error(format!("unexpected `{r}` in sub(...): use points[...] and hyper[...]"))),
            }
        }
        Subvariety::new(&x, &points, &hyper)
    }

    // ---- commands ----

    fn single_term(&self, e: &Expr) -> Result<(PolarChain, Triple)> {
        let c = normalize(&self.chain(e)?, &self.opts)?;
        match c.terms() {
            [t] => Ok((c.clone(), t.clone())),
            ts => Err(session_error(format!("residue needs a chain with one term, `{e}` has {}", ts.len()))),
        }
    }

    fn basepoint(&self, at: &Option<Expr>) -> Result<Rational> {
        at.as_ref().map_or(Ok(Rational::zero()), |b| self.rational(b))
    }

    fn command(&self, c: &Command) -> Result<Outcome2> {
        let opts = &self.opts;
        match c {
            Command::Print(e) => {
                let v = self.value(e)?;
                let shown = match &v {
                    Value::Chain(c) => normalize(c, opts)?.render(),
                    other => self.show(other)?,
                };
                Ok(ok(shown, json!({ "kind": v.kind() }), vec![]))
            }
            Command::Normalize(e) => {
                let n = normalize(&self.chain(e)?, opts)?;
                Ok(ok(n.render(), json!({ "terms": n.terms().len(), "flags": n.flags() }), vec!["R1", "R2", "R3"]))
            }
            Command::Boundary(e) => {
                let b = boundary(&self.chain(e)?, opts)?;
                let records: Vec<Json> =
                    b.provenance.iter().map(|r| json!({ "term": r.term, "component": r.component, "image": r.image })).collect();
                Ok(ok(b.chain.render(), json!({ "residues": records, "flags": b.chain.flags() }), vec!["boundary", "Poincare residue", "R1", "R2", "R3"]))
            }
            Command::Support(e) => {
                let s = support(&self.chain(e)?, opts)?;
                let lines: Vec<String> = s.iter().map(|x| x.to_string()).collect();
                let result = if lines.is_empty() { "empty".to_string() } else { lines.join("\n") };
                Ok(ok(result, json!({ "components": lines }), vec!["support"]))
            }
            Command::IsCycle(e, rel) => {
                let mut c = self.chain(e)?;
                if let Some(z) = rel {
                    let Value::Sub(z) = self.value(z)? else { return Err(session_error("`rel` expects a sub(...)")) };
                    c = reduce_relative(&c, &z, opts)?;
                }
                let (cycle, b) = is_cycle(&c, opts)?;
                Ok(ok(format!("cycle: {cycle}"), json!({ "cycle": cycle, "boundary": b.render() }), vec!["boundary"]))
            }
            Command::Dsq(e) => {
                let name = match e {
                    Expr::Ident(n, _) => n.clone(),
                    _ => "a".to_string(),
                };
                let r = check_d_squared(&self.chain(e)?, opts)?;
                let mut lines = vec![if r.is_zero() { format!("∂²{name} = 0") } else { format!("∂²{name} ≠ 0: {}", r.second) }];
                let mut table = Vec::new();
                for row in &r.cancellations {
                    let parts: Vec<String> = row.contributions.iter().map(|(p, w)| format!("{p}: {w}")).collect();
                    lines.push(format!("  {}: {}; total {}", row.point, parts.join(", "), row.total()));
                    table.push(json!({
                        "point": row.point,
                        "contributions": row.contributions.iter().map(|(p, w)| json!([p, w.to_string()])).collect::<Vec<_>>(),
                        "total": row.total().to_string(),
                    }));
                }
                let details = json!({ "first": r.first.render(), "second": r.second.render(), "cancellations": table });
                Ok(Outcome2 { result: lines.join("\n"), details, provenance: vec!["boundary", "residue cancellation"], verified: r.is_zero() })
            }
            Command::HomotopyVerify(e, at) => {
                let b = self.basepoint(at)?;
                let r = verify_homotopy_identity(&self.chain(e)?, &b, opts)?;
                let verdict = if r.holds() { "PASS".to_string() } else { format!("FAIL, residual {}", r.residual) };
                let repairs: Vec<Json> = r
                    .homotopy
                    .terms
                    .iter()
                    .enumerate()
                    .filter_map(|(i, t)| t.repaired_with.as_ref().map(|c| json!({ "term": i, "auxiliary_basepoint": crate::scalar::fmt_rational(c) })))
                    .collect();
                let details = json!({
                    "basepoint": crate::scalar::fmt_rational(&b),
                    "h": r.homotopy.chain.render(),
                    "dh": r.dh.render(),
                    "hd": r.hd.render(),
                    "section": r.section.render(),
                    "residual": r.residual.render(),
                    "repairs": repairs,
                });
                Ok(Outcome2 { result: format!("∂h + h∂ = id − s∗π∗: {verdict}"), details, provenance: vec!["cylinder homotopy"], verified: r.holds() })
            }
            Command::HomotopyTable(e, at) => {
                let b = self.basepoint(at)?;
                let rows = residue_table(&self.chain(e)?, &b, opts)?;
                let mut lines = Vec::new();
                let mut js = Vec::new();
                for r in &rows {
                    let v = if r.holds() { "PASS" } else { "FAIL" };
                    lines.push(format!("term {} along {}: {v}", r.term, r.divisor));
                    js.push(json!({ "term": r.term, "divisor": r.divisor, "expected": r.expected.render(), "actual": r.actual.render(), "holds": r.holds() }));
                }
                let all = rows.iter().all(|r| r.holds());
                let result = if lines.is_empty() { "no rows".to_string() } else { lines.join("\n") };
                Ok(Outcome2 { result, details: json!({ "rows": js }), provenance: vec!["cylinder homotopy", "Poincare residue"], verified: all })
            }
            Command::WitnessP1(line, pts) => {
                let x = match line {
                    Some(l) => self.variety(l)?,
                    None => Variety::projective_line("z"),
                };
                let Expr::List(items, _) = pts else { return Err(session_error("witness-p1 expects [(point, weight), ...]")) };
                let mut points = Vec::new();
                for i in items {
                    let Expr::Tuple(pw, _) = i else { return Err(session_error(format!("expected (point, weight), found `{i}`"))) };
                    let [p, w] = pw.as_slice() else { return Err(session_error("expected (point, weight)")) };
                    points.push((self.rational(p)?, self.scalar(w)?));
                }
                let w = boundary_witness_p1(&x, &points, opts)?;
                let result = format!("b = {}\n∂b = input: {}", w.chain.render(), w.verified);
                Ok(Outcome2 { result, details: json!({ "chain": w.chain.render(), "input": w.points.render(), "verified": w.verified }), provenance: vec!["boundary witness"], verified: w.verified })
            }
            Command::Residue(e, along, then) => {
                let (c, t) = self.single_term(e)?;
                let x = c.ambient();
                match (along, then) {
                    (None, _) => {
                        let mut lines = Vec::new();
                        for p in t.poles() {
                            let r = residue_triple(&t, p, x)?;
                            lines.push(format!("along {}: {}", p.label(), r.render(x)));
                        }
                        let result = if lines.is_empty() { "no poles".to_string() } else { lines.join("\n") };
                        Ok(ok(result, json!({ "residues": lines }), vec!["Poincare residue"]))
                    }
                    (Some(d), None) => {
                        let comp = self.component(d, t.source())?;
                        let r = residue_triple(&t, &comp, x)?;
                        let shown = normalize(&PolarChain::from_triple(x, r), opts)?.render();
                        Ok(ok(shown, json!({ "component": comp.label() }), vec!["Poincare residue"]))
                    }
                    (Some(d), Some(d2)) => {
                        let p = self.component(d, t.source())?;
                        let q = self.component(d2, t.source())?;
                        let pts = iterated_residue(t.form(), &p, &q, t.source())?;
                        let lines: Vec<String> = pts.iter().map(|(pt, w)| format!("{}: {w}", render_point(pt))).collect();
                        let result = if lines.is_empty() { "0".to_string() } else { lines.join("\n") };
                        Ok(ok(result, json!({ "points": lines }), vec!["iterated residue"]))
                    }
                }
            }
            Command::TotalResidue(e) => {
                let c = normalize(&self.chain(e)?, opts)?;
                let mut total = Scalar::zero();
                for t in c.terms() {
                    if !t.source().is_projective_line() {
                        return Err(Error::Unsupported(format!("total residue over {}", t.source())));
                    }
                    total = &total + &total_residue_p1(t.form(), t.source())?;
                }
                Ok(ok(total.to_string(), json!({ "total": total.to_string() }), vec!["global residue theorem"]))
            }
        }
    }

    /// Evaluates a chain expression such as the output of [`PolarChain::render`].
    pub fn parse_chain(&self, text: &str) -> Result<PolarChain> {
        self.chain(&parse_expr(text)?)
    }

    /// Evaluates a form expression over the given coordinates.
    pub fn parse_form(&self, text: &str, vars: &Vars) -> Result<DifferentialForm> {
        Ok(self.form_eval(&parse_expr(text)?, vars)?.form())
    }
}

fn polynomial_of(f: &RationalFunction) -> Result<crate::poly::Polynomial> {
    let c = f.den().constant_value().ok_or_else(|| session_error(format!("`{f}` is not a polynomial")))?;
    Ok(f.num().scale(&c.inv()?))
}

#[cfg(test)]
mod tests;
