//! Randomized and corpus-based verification suites.

use std::time::Instant;

use num_traits::One;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::chains::{boundary, boundary_witness_p1, check_d_squared, normalize, Options, PolarChain, Triple};
use crate::error::{Error, Result};
use crate::forms::{dlog, DifferentialForm};
use crate::geometry::{CurveRing, DivisorComponent, Variety};
use crate::homotopy::{corpus, cylinder_homotopy, residue_table, verify_homotopy_identity};
use crate::maps::Map;
use crate::poly::Polynomial;
use crate::rational::RationalFunction;
use crate::residue::{iterated_residue, p1_component, poincare_residue, total_residue_p1};
use crate::scalar::{Rational, Scalar};
use crate::session::{exit_code, parse_program, reports_json, Session};

pub const SUITES: &[&str] = &["dsq", "cancellation", "lemma-table", "homotopy", "witness", "global-residue", "adjunction", "relations", "cli"];

#[derive(Clone, Debug)]
pub struct SuiteReport {
    pub name: &'static str,
    pub cases: usize,
    pub failures: Vec<String>,
    pub notes: Vec<String>,
    pub millis: u128,
}

impl SuiteReport {
    fn new(name: &'static str) -> Self {
        SuiteReport { name, cases: 0, failures: Vec::new(), notes: Vec::new(), millis: 0 }
    }

    pub fn passed(&self) -> bool {
        self.cases > 0 && self.failures.is_empty()
    }

    fn check(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.cases += 1;
        if !ok {
            self.failures.push(what());
        }
    }

    pub fn summary(&self) -> String {
        let mut s = format!("{}: {} cases, {} failures, {} ms", self.name, self.cases, self.failures.len(), self.millis);
        for n in &self.notes {
            s.push_str(&format!("; {n}"));
        }
        s
    }

    pub fn line(&self) -> String {
        format!("{} {}", if self.passed() { "PASS" } else { "FAIL" }, self.summary())
    }
}

pub fn run_suite(name: &str, seed: u64) -> Result<SuiteReport> {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let opts = Options { seed, ..Options::default() };
    let mut r = match name {
        "dsq" => dsq_suite(&mut rng, &opts, 200)?,
        "cancellation" => cancellation_suite(&mut rng, 50)?,
        "lemma-table" => lemma_table_suite(&opts)?,
        "homotopy" => homotopy_suite(&opts)?,
        "witness" => witness_suite(&mut rng, &opts, 100)?,
        "global-residue" => global_residue_suite(&mut rng, 100)?,
        "adjunction" => adjunction_suite(&mut rng, 10)?,
        "relations" => relations_suite(&mut rng, &opts, 20)?,
        "cli" => cli_suite(&mut rng, &opts, 100)?,
        other => return Err(Error::Session(format!("unknown suite `{other}`; known: all, {}", SUITES.join(", ")))),
    };
    r.millis = start.elapsed().as_millis();
    Ok(r)
}

// ---- generators ----

fn int(n: i64) -> Rational {
    Rational::from_integer(n.into())
}

pub fn random_scalar(rng: &mut impl Rng) -> Scalar {
    let num = *[-5i64, -3, -2, -1, 1, 2, 3, 4].choose(rng).unwrap();
    let den = rng.gen_range(1..=3);
    Scalar::monomial(Rational::new(num.into(), den.into()), rng.gen_range(-1..=1))
}

fn distinct_points(rng: &mut impl Rng, n: usize, range: i64) -> Vec<i64> {
    let mut all: Vec<i64> = (-range..=range).collect();
    all.shuffle(rng);
    all.truncate(n);
    all
}

fn lin(v: &crate::poly::Vars, i: usize, c: i64) -> Polynomial {
    Polynomial::var(v, i).sub(&Polynomial::constant(v, Scalar::from_int(c)))
}

fn rf(p: Polynomial) -> RationalFunction {
    RationalFunction::from_poly(p)
}

/// `Σ c_i dz/(z - p_i)` in coordinate `i` of `vars`, with its poles on `P¹`.
fn simple_pole_coefficient(rng: &mut impl Rng, v: &crate::poly::Vars, i: usize) -> Result<(RationalFunction, Vec<Option<Rational>>)> {
    let n = rng.gen_range(1..=3);
    let mut f = RationalFunction::zero(v);
    let mut pts: Vec<Option<Rational>> = Vec::new();
    let mut total = Scalar::zero();
    for p in distinct_points(rng, n, 5) {
        let c = random_scalar(rng);
        total = &total + &c;
        f = f.add(&rf(lin(v, i, p)).inv()?.scale(&c));
        pts.push(Some(int(p)));
    }
    if !total.is_zero() {
        pts.push(None);
    }
    Ok((f, pts))
}

/// A random simple-pole 1-form on a projective line with its declared poles.
pub fn random_p1_form(rng: &mut impl Rng, line: &Variety) -> Result<(DifferentialForm, Vec<DivisorComponent>)> {
    let v = line.coords();
    let (f, pts) = simple_pole_coefficient(rng, v, 0)?;
    let form = DifferentialForm::dvar(v, 0).mul_function(&f);
    let poles = pts.iter().map(|p| p1_component(line, p)).collect::<Result<Vec<_>>>()?;
    Ok((form, poles))
}

fn random_line_map(rng: &mut impl Rng, source: &Variety, target: &Variety) -> Result<Map> {
    let v = source.coords();
    let t = RationalFunction::var(v, 0);
    let f = match rng.gen_range(0..4) {
        0 => return Ok(Map::identity(target).substitute(&[t], v)?),
        1 => t.pow(2)?,
        2 => rf(lin(v, 0, 0).scale(&Scalar::from_int(2)).add(&Polynomial::one(v))).div(&rf(lin(v, 0, 1)))?,
        _ => return Map::constant(v, &vec![vec![Rational::one(), int(rng.gen_range(-3..=3))]]),
    };
    Map::from_affine(v, target, &[Some(f)])
}

fn p1_chain(rng: &mut impl Rng) -> Result<PolarChain> {
    let x = Variety::projective_line("z");
    let a = Variety::projective_line("t");
    let mut c = PolarChain::zero(&x, 1);
    for _ in 0..rng.gen_range(1..=3) {
        let (form, poles) = random_p1_form(rng, &a)?;
        let map = random_line_map(rng, &a, &x)?;
        c = c.add(&PolarChain::from_triple(&x, Triple::new(&a, &x, &map, &form, &poles)?))?;
    }
    Ok(c)
}

fn surface_triple(rng: &mut impl Rng, x: &Variety) -> Result<Triple> {
    let v = x.coords().clone();
    let id = Map::identity(x);
    let lam = random_scalar(rng);
    if rng.gen_bool(0.5) {
        let (f, pf) = simple_pole_coefficient(rng, &v, 0)?;
        let (g, pg) = simple_pole_coefficient(rng, &v, 1)?;
        let omega = DifferentialForm::top(f.mul(&g).scale(&lam));
        let mut poles = Vec::new();
        for (i, pts) in [pf, pg].iter().enumerate() {
            for p in pts {
                poles.push(match p {
                    Some(r) => x.component(&Polynomial::var(&v, i).sub(&Polynomial::constant(&v, Scalar::from_rational(r.clone()))))?,
                    None => x.infinity(i)?,
                });
            }
        }
        return Triple::new(x, x, &id, &omega, &poles);
    }
    let (a, b, c) = (rng.gen_range(-3..=3), rng.gen_range(-3..=3), rng.gen_range(-3..=3));
    let m = *[1i64, -1, 2].choose(rng).unwrap();
    let diag = lin(&v, 1, c).sub(&Polynomial::var(&v, 0).scale(&Scalar::from_int(m)));
    let comps = [lin(&v, 0, a), lin(&v, 1, b), diag];
    let den = comps.iter().fold(Polynomial::one(&v), |acc, p| acc.mul(p));
    let omega = DifferentialForm::top(rf(den).inv()?.scale(&lam));
    let poles = comps.iter().map(|p| x.component(p)).collect::<Result<Vec<_>>>()?;
    Triple::new(x, x, &id, &omega, &poles)
}

fn graph_triple(rng: &mut impl Rng, x: &Variety) -> Result<Triple> {
    let a = Variety::projective_line("t");
    let v = a.coords();
    let t = RationalFunction::var(v, 0);
    let g = match rng.gen_range(0..3) {
        0 => t.pow(2)?,
        1 => t.inv()?.scale(&Scalar::from_int(rng.gen_range(1..=3))),
        _ => t.add(&RationalFunction::constant(v, Scalar::from_int(rng.gen_range(-2..=2)))),
    };
    let map = Map::from_affine(v, x, &[Some(t), Some(g)])?;
    let (form, poles) = random_p1_form(rng, &a)?;
    Triple::new(&a, x, &map, &form, &poles)
}

fn product_chain(rng: &mut impl Rng) -> Result<PolarChain> {
    let x = Variety::product_of_lines(&["x".into(), "y".into()])?;
    if rng.gen_bool(0.2) {
        return Ok(PolarChain::from_triple(&x, graph_triple(rng, &x)?));
    }
    let mut c = PolarChain::zero(&x, 2);
    for _ in 0..rng.gen_range(1..=2) {
        c = c.add(&PolarChain::from_triple(&x, surface_triple(rng, &x)?))?;
    }
    Ok(c)
}

/// Lines and parabolic conics `b = q(a)`, `a = q(b)` of the plane.
fn plane_component(rng: &mut impl Rng, v: &crate::poly::Vars) -> Polynomial {
    let c = |rng: &mut ChaCha8Rng| Scalar::from_int(rng.gen_range(-3..=3));
    let mut r = ChaCha8Rng::seed_from_u64(rng.gen());
    let (a, b) = (Polynomial::var(v, 0), Polynomial::var(v, 1));
    match r.gen_range(0..3) {
        0 => {
            let (mut p, mut q) = (c(&mut r), c(&mut r));
            if p.is_zero() && q.is_zero() {
                p = Scalar::one();
                q = Scalar::from_int(-1);
            }
            a.scale(&p).add(&b.scale(&q)).add(&Polynomial::constant(v, c(&mut r)))
        }
        k => {
            let (u, w) = if k == 1 { (a, b) } else { (b, a) };
            let lead = *[1i64, -1, 2].choose(&mut r).unwrap();
            let q = u.pow(2).scale(&Scalar::from_int(lead)).add(&u.scale(&c(&mut r))).add(&Polynomial::constant(v, c(&mut r)));
            w.sub(&q)
        }
    }
}

/// `λ da∧db / (f g [h])` or `λ dlog f ∧ dlog g` with `f, g, h` lines or parabolas.
fn plane_chain_once(rng: &mut impl Rng) -> Result<PolarChain> {
    let x = Variety::projective_plane("a", "b")?;
    let v = x.coords().clone();
    let n = rng.gen_range(2..=3);
    let comps: Vec<Polynomial> = (0..n).map(|_| plane_component(rng, &v)).collect();
    for (i, p) in comps.iter().enumerate() {
        if comps[..i].iter().any(|q| !p.gcd(q).is_constant()) {
            return Err(Error::Degenerate("repeated component".into()));
        }
    }
    let id = Map::identity(&x);
    if rng.gen_bool(0.5) {
        let omega = dlog(&rf(comps[0].clone()))?.wedge(&dlog(&rf(comps[1].clone()))?)?.scale(&random_scalar(rng));
        if omega.is_zero() {
            return Err(Error::Degenerate("parallel logarithms".into()));
        }
        let mut poles = comps[..2].iter().map(|p| x.component(p)).collect::<Result<Vec<_>>>()?;
        let t = match Triple::new(&x, &x, &id, &omega, &poles) {
            Err(Error::UndeclaredPole { .. }) => {
                poles.push(x.infinity(0)?);
                Triple::new(&x, &x, &id, &omega, &poles)?
            }
            other => other?,
        };
        return Ok(PolarChain::from_triple(&x, t));
    }
    let den = comps.iter().fold(Polynomial::one(&v), |acc, p| acc.mul(p));
    let omega = DifferentialForm::top(rf(den.clone()).inv()?.scale(&random_scalar(rng)));
    let mut poles = comps.iter().map(|p| x.component(p)).collect::<Result<Vec<_>>>()?;
    if den.total_degree() == 2 {
        poles.push(x.infinity(0)?);
    }
    Ok(PolarChain::from_triple(&x, Triple::new(&x, &x, &id, &omega, &poles)?))
}

fn resamplable(e: &Error) -> bool {
    matches!(e, Error::NormalCrossing(_) | Error::NotCoprime(_) | Error::Irrational(_) | Error::ConstantDivisor(_) | Error::Degenerate(_))
}

/// A random 2-chain on `P²` whose poles are lines and parabolic conics in
/// normal crossing; configurations failing validation are redrawn.
pub fn plane_chain(rng: &mut impl Rng, resamples: &mut usize) -> Result<PolarChain> {
    loop {
        match plane_chain_once(rng) {
            Ok(c) => return Ok(c),
            Err(e) if resamplable(&e) => *resamples += 1,
            Err(e) => return Err(e),
        }
    }
}

/// A random chain on `P¹`, `P¹ × P¹` or `P²` by `which = 0, 1, 2`.
pub fn random_chain(rng: &mut impl Rng, which: usize, resamples: &mut usize) -> Result<PolarChain> {
    loop {
        let c = match which {
            0 => p1_chain(rng),
            1 => product_chain(rng),
            _ => return plane_chain(rng, resamples),
        };
        match c {
            Err(e) if resamplable(&e) => *resamples += 1,
            other => return other,
        }
    }
}

// ---- suites ----

fn dsq_suite(rng: &mut ChaCha8Rng, opts: &Options, n: usize) -> Result<SuiteReport> {
    let mut r = SuiteReport::new("dsq");
    let mut resamples = 0;
    let mut counts = [0usize; 3];
    while r.cases < n {
        let which = r.cases % 3;
        let c = random_chain(rng, which, &mut resamples)?;
        match check_d_squared(&c, opts) {
            Ok(rep) => {
                counts[which] += 1;
                r.check(rep.is_zero(), || format!("∂² = {} for {}", rep.second, c));
            }
            Err(e) if resamplable(&e) => resamples += 1,
            Err(e) => r.check(false, || format!("{c}: {e}")),
        }
    }
    r.notes.push(format!("P1 {}, P1xP1 {}, P2 {}, {resamples} resampled", counts[0], counts[1], counts[2]));
    Ok(r)
}

fn cancellation_suite(rng: &mut ChaCha8Rng, n: usize) -> Result<SuiteReport> {
    let mut r = SuiteReport::new("cancellation");
    let mut resamples = 0;
    let mut empty = 0;
    let mut attempts = 0;
    while r.cases < n {
        attempts += 1;
        if attempts > 50 * n {
            r.failures.push(format!("only {} intersecting pairs found", r.cases));
            break;
        }
        let c = random_chain(rng, 1 + attempts % 2, &mut resamples)?;
        let Some(t) = c.terms().first() else { continue };
        if t.source().dimension() != 2 {
            continue;
        }
        let poles = t.poles();
        if poles.len() < 2 {
            continue;
        }
        let i = rng.gen_range(0..poles.len());
        let j = (i + rng.gen_range(1..poles.len())) % poles.len();
        let (p, q) = (&poles[i], &poles[j]);
        let pq = iterated_residue(t.form(), p, q, t.source());
        let qp = iterated_residue(t.form(), q, p, t.source());
        match (pq, qp) {
            (Ok(a), Ok(b)) => {
                if a.is_empty() && b.is_empty() {
                    empty += 1;
                    continue;
                }
                let negated: Vec<_> = b.iter().map(|(pt, w)| (pt.clone(), -w)).collect();
                r.check(a == negated, || format!("{} then {} gives {a:?}, reversed {b:?}", p.label(), q.label()));
            }
            (Err(e), _) | (_, Err(e)) if resamplable(&e) => resamples += 1,
            (Err(e), _) | (_, Err(e)) => r.check(false, || format!("{} / {}: {e}", p.label(), q.label())),
        }
    }
    r.notes.push(format!("{empty} disjoint pairs skipped, {resamples} resampled"));
    Ok(r)
}

fn lemma_table_suite(opts: &Options) -> Result<SuiteReport> {
    let mut r = SuiteReport::new("lemma-table");
    let entries = corpus()?;
    let mut repaired = 0;
    let mut rows = 0;
    for e in &entries {
        if cylinder_homotopy(&e.chain, &e.basepoint, opts)?.terms.iter().any(|t| t.repaired_with.is_some()) {
            repaired += 1;
        }
        for row in residue_table(&e.chain, &e.basepoint, opts)? {
            rows += 1;
            r.check(row.holds(), || format!("{} along {}: expected {}, found {}", e.name, row.divisor, row.expected, row.actual));
        }
    }
    r.check(entries.len() >= 5, || format!("corpus has {} entries", entries.len()));
    r.check(repaired > 0, || "no entry exercises the repair".into());
    r.notes.push(format!("{} entries, {rows} rows, {repaired} repaired", entries.len()));
    Ok(r)
}

fn homotopy_suite(opts: &Options) -> Result<SuiteReport> {
    let mut r = SuiteReport::new("homotopy");
    for e in corpus()? {
        match verify_homotopy_identity(&e.chain, &e.basepoint, opts) {
            Ok(rep) => r.check(rep.holds(), || format!("{}: residual {}", e.name, rep.residual)),
            Err(err) => r.check(false, || format!("{}: {err}", e.name)),
        }
    }
    Ok(r)
}

fn witness_suite(rng: &mut ChaCha8Rng, opts: &Options, n: usize) -> Result<SuiteReport> {
    let mut r = SuiteReport::new("witness");
    let line = Variety::projective_line("z");
    let v = line.coords().clone();
    for _ in 0..n {
        let k = rng.gen_range(2..=6);
        let pts = distinct_points(rng, k, 8);
        let mut weights: Vec<Scalar> = (0..k - 1).map(|_| random_scalar(rng)).collect();
        let rest = weights.iter().fold(Scalar::zero(), |a, w| &a - w);
        weights.push(rest);
        let input: Vec<(Rational, Scalar)> = pts.iter().map(|&p| int(p)).zip(weights.iter().cloned()).collect();
        let w = boundary_witness_p1(&line, &input, opts)?;
        // residues read off directly: TAU * lim (z - p) f(z)
        let mut direct_ok = true;
        if let Some(t) = w.chain.terms().first() {
            let f = t.form().coefficient(&[0]);
            for (p, wt) in &input {
                let near = f.mul(&rf(lin(&v, 0, 0).sub(&Polynomial::constant(&v, Scalar::from_rational(p.clone())))));
                let val = near.evaluate(&[p.clone()]).map(|s| &s * &Scalar::tau_pow(1));
                direct_ok &= val.map(|s| &s == wt).unwrap_or(false);
            }
        }
        r.check(w.verified && direct_ok, || format!("witness for {input:?}"));
        let mut bad = input.clone();
        bad[0].1 = &bad[0].1 + &Scalar::one();
        r.check(matches!(boundary_witness_p1(&line, &bad, opts), Err(Error::NonzeroWeight(_))), || format!("nonzero total accepted: {bad:?}"));
    }
    Ok(r)
}

fn global_residue_suite(rng: &mut ChaCha8Rng, n: usize) -> Result<SuiteReport> {
    let mut r = SuiteReport::new("global-residue");
    let line = Variety::projective_line("z");
    let v = line.coords().clone();
    for _ in 0..n {
        let k = rng.gen_range(1..=4);
        let roots = distinct_points(rng, k, 6);
        let q = roots.iter().fold(Polynomial::one(&v), |acc, &p| acc.mul(&lin(&v, 0, p)));
        let p = (0..roots.len()).fold(Polynomial::zero(&v), |acc, k| {
            acc.add(&Polynomial::var(&v, 0).pow(k as u32).scale(&random_scalar(rng)))
        });
        let form = DifferentialForm::dvar(&v, 0).mul_function(&RationalFunction::new(p, q)?);
        let total = total_residue_p1(&form, &line)?;
        r.check(total.is_zero(), || format!("total residue {total} for {form}"));
    }
    Ok(r)
}

fn adjunction_suite(rng: &mut ChaCha8Rng, n: usize) -> Result<SuiteReport> {
    let mut r = SuiteReport::new("adjunction");
    let x = Variety::projective_plane("x", "y")?;
    let v = x.coords().clone();
    let (px, py) = (Polynomial::var(&v, 0), Polynomial::var(&v, 1));
    while r.cases < 2 * n {
        let (a, b) = (rng.gen_range(-6i64..=6), rng.gen_range(-6i64..=6));
        if 4 * a * a * a + 27 * b * b == 0 {
            continue;
        }
        let f = py.pow(2).sub(&px.pow(3)).sub(&px.scale(&Scalar::from_int(a))).sub(&Polynomial::constant(&v, Scalar::from_int(b)));
        let omega = DifferentialForm::top(rf(f.clone()).inv()?);
        let res = poincare_residue(&omega, &x.component(&f)?, &x)?;
        let ring = CurveRing::new(&f)?;
        let eta = res.form;
        let expected = ring.canonical_form(&DifferentialForm::dvar(&v, 0).mul_function(&rf(py.scale(&Scalar::from_int(-2))).inv()?))?;
        r.check(res.target.source.is_curve() && eta == expected, || format!("(a, b) = ({a}, {b}): residue {eta}"));
        // oracle: η(v) = ω(N, v) with dF(N) = 1 solved by Cramer's rule and v = (F_y, -F_x)
        let (fx, fy) = (rf(f.derivative(0)), rf(f.derivative(1)));
        let norm = fx.mul(&fx).add(&fy.mul(&fy));
        let (nx, ny) = (fx.div(&norm)?, fy.div(&norm)?);
        let omega_nv = nx.mul(&fx.neg()).sub(&ny.mul(&fy));
        let eta_v = eta.coefficient(&[0]).mul(&fy).add(&eta.coefficient(&[1]).mul(&fx.neg()));
        r.check(ring.is_zero(&eta_v.sub(&omega_nv))?, || format!("(a, b) = ({a}, {b}): linear-algebra oracle disagrees"));
    }
    Ok(r)
}

fn relations_suite(rng: &mut ChaCha8Rng, opts: &Options, n: usize) -> Result<SuiteReport> {
    let mut r = SuiteReport::new("relations");
    let s = Session::new(opts.clone());
    let pushed = s.parse_chain("chain(P1(t), P1(w), [t^2], dt/t, poles[t, inf]) - chain(P1(w), id, dw/w, poles[w, inf])")?;
    let n0 = normalize(&pushed, opts)?;
    r.check(n0.is_zero(), || format!("squaring relation leaves {n0}"));
    let a = Variety::projective_line("t");
    let x = Variety::product_of_lines(&["x".into(), "y".into()])?;
    for _ in 0..n {
        let (form, poles) = random_p1_form(rng, &a)?;
        let pt = vec![vec![Rational::one(), int(rng.gen_range(-3..=3))], vec![Rational::one(), int(rng.gen_range(-3..=3))]];
        let c = PolarChain::from_triple(&x, Triple::new(&a, &x, &Map::constant(a.coords(), &pt)?, &form, &poles)?);
        let nc = normalize(&c, opts)?;
        r.check(nc.is_zero(), || format!("constant map survives: {nc}"));
    }
    let mut resamples = 0;
    let target = r.cases + n;
    let mut k = 0;
    while r.cases < target {
        k += 1;
        let c = random_chain(rng, k % 3, &mut resamples)?;
        let messy = c.add(&c)?.sub(&c)?.add(&c.scale(&Scalar::zero()))?;
        let both = boundary(&messy, opts).and_then(|l| Ok((l.chain, boundary(&normalize(&messy, opts)?, opts)?.chain)));
        match both {
            Ok((lhs, rhs)) => r.check(lhs == rhs, || format!("∂ and normalization disagree on {c}")),
            Err(e) if resamplable(&e) => resamples += 1,
            Err(e) => r.check(false, || format!("{c}: {e}")),
        }
    }
    r.notes.push(format!("{resamples} resampled"));
    Ok(r)
}

const DEMO: &str = "let X = P1(z) x P1(w);
let c = chain(X, id, dlog(z)^dlog(w - 1), poles[z, w - 1, inf(z), inf(w)]);
boundary c;
dsq c;
residue c along z then w - 1;
let p = point(P1(u), 2, 1) - point(P1(u), 5, 1);
homotopy-verify p at 1;
witness-p1 [(0, 1), (3, -1)];
";

fn cli_suite(rng: &mut ChaCha8Rng, opts: &Options, n: usize) -> Result<SuiteReport> {
    let mut r = SuiteReport::new("cli");
    let s = Session::new(opts.clone());
    let mut resamples = 0;
    for k in 0..n {
        let c = normalize(&random_chain(rng, k % 3, &mut resamples)?, opts)?;
        let text = c.render();
        match s.parse_chain(&text) {
            Ok(back) => r.check(normalize(&back, opts)?.render() == text, || format!("round trip changed {text}")),
            Err(e) => r.check(false, || format!("{text}: {e}")),
        }
        if let Some(t) = c.terms().first() {
            let ftext = t.form().render();
            match s.parse_form(&ftext, t.source().coords()) {
                Ok(f) => r.check(&f == t.form(), || format!("form round trip changed {ftext}")),
                Err(e) => r.check(false, || format!("{ftext}: {e}")),
            }
        }
    }
    let replay = |src: &str| -> Result<String> { Ok(reports_json(&Session::new(opts.clone()).run_source(src)?)) };
    let (first, second) = (replay(DEMO)?, replay(DEMO)?);
    r.check(first == second, || "replay is not byte-identical".into());
    let code = |src: &str| match Session::new(opts.clone()).run_source(src) {
        Ok(reports) => exit_code(&reports),
        Err(e) if e.is_parse() => 2,
        Err(_) => 1,
    };
    r.check(code(DEMO) == 0, || "demo exit code".into());
    r.check(code("zero(P1(z), 3) + ;") == 2, || "parse error exit code".into());
    r.check(code("witness-p1 [(0, 1)];") == 1, || "computation error exit code".into());
    r.check(parse_program(DEMO).map(|p| p.len()).unwrap_or(0) == 8, || "demo statement count".into());
    r.notes.push(format!("{resamples} resampled"));
    Ok(r)
}

/// Free-standing generator access for tests.
pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}
