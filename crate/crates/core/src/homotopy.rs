//! The cylinder homotopy on `X = M × P¹` contracting chains to the section
//! at a basepoint.

use num_traits::{One, Zero};

use crate::chains::{boundary, normalize, residue_triple, Options, PolarChain, Triple};
use crate::error::{Error, Result};
use crate::forms::DifferentialForm;
use crate::geometry::{DivisorComponent, Kind, Variety};
use crate::maps::Map;
use crate::poly::{Polynomial, Vars};
use crate::rational::RationalFunction;
use crate::scalar::{Rational, Scalar};

/// Number of alternative basepoints tried when `β_b` fails normal crossing.
pub const BASEPOINT_PROBES: usize = 16;

fn lifted_name(ambient: &Variety) -> Result<String> {
    match ambient.kind() {
        Kind::Lines(k) => Ok(format!("{}_h", ambient.coords()[k - 1])),
        _ => Err(Error::Unsupported(format!("cylinder homotopy on {ambient}: the ambient must be a product of lines"))),
    }
}

fn lift_source(a: &Variety, name: &str) -> Result<Variety> {
    match a.kind() {
        Kind::Point => Ok(Variety::projective_line(name)),
        Kind::Lines(_) => {
            let mut names: Vec<String> = a.coords().to_vec();
            if names.iter().any(|n| n == name) {
                return Err(Error::Session(format!("source coordinate `{name}` clashes with the homotopy coordinate")));
            }
            names.push(name.to_string());
            Variety::product_of_lines(&names)
        }
        _ => Err(Error::Unsupported(format!("cylinder homotopy for terms over {a}"))),
    }
}

fn lift_component(a: &Variety, comp: &DivisorComponent, lifted: &Variety) -> Result<DivisorComponent> {
    if let Some(p) = comp.chart_poly(0) {
        return lifted.component(&p.embed(lifted.coords())?);
    }
    if let Kind::Lines(k) = a.kind() {
        for i in 0..*k {
            if &a.infinity(i)? == comp {
                return lifted.infinity(i);
            }
        }
    }
    Err(Error::Unsupported(format!("lifting component {comp} of {a}")))
}

/// Data of `β_b` for one term, before any admissibility check.
struct Lift {
    source: Variety,
    map: Map,
    alpha: DifferentialForm,
    g0: Polynomial,
    g1: Polynomial,
    a1: DivisorComponent,
    base_poles: Vec<DivisorComponent>,
}

impl Lift {
    fn new(t: &Triple, ambient: &Variety) -> Result<Lift> {
        let name = lifted_name(ambient)?;
        let source = lift_source(t.source(), &name)?;
        let lv = source.coords().clone();
        let last = lv.len() - 1;
        let mut factors: Vec<Vec<Polynomial>> =
            t.map().factors().iter().map(|f| f.iter().map(|p| p.embed(&lv)).collect::<Result<Vec<_>>>()).collect::<Result<_>>()?;
        let tail = factors.pop().expect("ambient has a P1 factor");
        let (g0, g1) = (tail[0].clone(), tail[1].clone());
        factors.push(vec![Polynomial::one(&lv), Polynomial::var(&lv, last)]);
        let map = Map::new(&lv, factors)?;
        let alpha = t.form().embed(&lv)?;
        let z = Polynomial::var(&lv, last);
        let a1 = if g0.is_zero() { source.infinity(last)? } else { source.component(&z.mul(&g0).sub(&g1))? };
        let base_poles = t.poles().iter().map(|c| lift_component(t.source(), c, &source)).collect::<Result<Vec<_>>>()?;
        Ok(Lift { source, map, alpha, g0, g1, a1, base_poles })
    }

    fn vars(&self) -> &Vars {
        self.source.coords()
    }

    fn z(&self) -> Polynomial {
        Polynomial::var(self.vars(), self.vars().len() - 1)
    }

    fn shifted(&self, b: &Rational) -> Polynomial {
        self.z().sub(&Polynomial::constant(self.vars(), Scalar::from_rational(b.clone())))
    }

    fn a0(&self, b: &Rational) -> Result<DivisorComponent> {
        self.source.component(&self.shifted(b))
    }

    /// Whether `g ≡ b`.
    fn degenerate(&self, b: &Rational) -> bool {
        self.g1.sub(&self.g0.scale(&Scalar::from_rational(b.clone()))).is_zero()
    }

    /// `TAU⁻¹ f dz ∧ α`
    fn along_fiber(&self, f: &RationalFunction) -> Result<DifferentialForm> {
        let dz = DifferentialForm::dvar(self.vars(), self.vars().len() - 1);
        Ok(dz.mul_function(f).wedge(&self.alpha)?.scale(&Scalar::tau_pow(-1)))
    }

    /// `φ_b = (G1 - b G0)/((z - b)(z G0 - G1))`
    fn phi(&self, b: &Rational) -> Result<RationalFunction> {
        let bs = Scalar::from_rational(b.clone());
        let num = self.g1.sub(&self.g0.scale(&bs));
        let den = self.shifted(b).mul(&self.z().mul(&self.g0).sub(&self.g1));
        RationalFunction::new(num, den)
    }

    fn beta(&self, b: &Rational) -> Result<DifferentialForm> {
        self.along_fiber(&self.phi(b)?)
    }

    fn poles_with(&self, extra: &[DivisorComponent]) -> Vec<DivisorComponent> {
        let mut poles = extra.to_vec();
        poles.extend(self.base_poles.iter().cloned());
        poles
    }

    fn triple(&self, ambient: &Variety, form: &DifferentialForm, extra: &[DivisorComponent]) -> Result<Triple> {
        Triple::new(&self.source, ambient, &self.map, form, &self.poles_with(extra))
    }
}

fn crossing_failure(e: &Error) -> bool {
    matches!(e, Error::NormalCrossing(_) | Error::NotCoprime(_))
}

/// The lift of one term, possibly split at a second basepoint.
#[derive(Clone, Debug)]
pub struct CylinderTerm {
    pub pieces: Vec<Triple>,
    /// The auxiliary basepoint `b'` when `β_b` itself is not admissible.
    pub repaired_with: Option<Rational>,
}

fn basepoint_probes(b: &Rational) -> impl Iterator<Item = Rational> + '_ {
    (1..=BASEPOINT_PROBES as i64 / 2).flat_map(|k| [Rational::from_integer(k.into()), Rational::from_integer((-k).into())]).filter(move |c| c != b)
}

fn cylinder_term(t: &Triple, ambient: &Variety, b: &Rational) -> Result<CylinderTerm> {
    let lift = Lift::new(t, ambient)?;
    if lift.degenerate(b) {
        return Ok(CylinderTerm { pieces: vec![], repaired_with: None });
    }
    let a0 = lift.a0(b)?;
    match lift.triple(ambient, &lift.beta(b)?, &[lift.a1.clone(), a0.clone()]) {
        Ok(tr) => return Ok(CylinderTerm { pieces: vec![tr], repaired_with: None }),
        Err(e) if crossing_failure(&e) => {}
        Err(e) => return Err(e),
    }
    for c in basepoint_probes(b) {
        if lift.degenerate(&c) {
            continue;
        }
        let a0c = lift.a0(&c)?;
        let main = match lift.triple(ambient, &lift.beta(&c)?, &[lift.a1.clone(), a0c.clone()]) {
            Ok(tr) => tr,
            Err(e) if crossing_failure(&e) => continue,
            Err(e) => return Err(e),
        };
        let one = RationalFunction::one(lift.vars());
        let inv = |p: Polynomial| one.div(&RationalFunction::from_poly(p));
        let diff = inv(lift.shifted(&c))?.sub(&inv(lift.shifted(b))?);
        let correction = match lift.triple(ambient, &lift.along_fiber(&diff)?, &[a0.clone(), a0c]) {
            Ok(tr) => tr,
            Err(e) if crossing_failure(&e) => continue,
            Err(e) => return Err(e),
        };
        return Ok(CylinderTerm { pieces: vec![main, correction], repaired_with: Some(c) });
    }
    Err(Error::NoBasepoint(BASEPOINT_PROBES))
}

fn check_chain(a: &PolarChain) -> Result<()> {
    lifted_name(a.ambient())?;
    if a.relative_to().is_some() {
        return Err(Error::Unsupported("cylinder homotopy on relative chains".into()));
    }
    Ok(())
}

#[derive(Clone, Debug)]
pub struct Cylinder {
    pub chain: PolarChain,
    pub terms: Vec<CylinderTerm>,
}

/// `h_b(a)`, term by term over the canonical representative of `a`.
pub fn cylinder_homotopy(a: &PolarChain, b: &Rational, opts: &Options) -> Result<Cylinder> {
    check_chain(a)?;
    let a = normalize(a, opts)?;
    let mut terms = Vec::new();
    let mut pieces = Vec::new();
    for t in a.terms() {
        let ct = cylinder_term(t, a.ambient(), b)?;
        pieces.extend(ct.pieces.iter().cloned());
        terms.push(ct);
    }
    let chain = normalize(&PolarChain::from_terms(a.ambient(), a.degree() + 1, pieces)?, opts)?;
    Ok(Cylinder { chain, terms })
}

fn section_term(t: &Triple, ambient: &Variety, b: &Rational) -> Result<Triple> {
    let vars = t.map().vars().clone();
    let mut factors = t.map().factors().to_vec();
    let last = factors.len() - 1;
    factors[last] = vec![Polynomial::one(&vars), Polynomial::constant(&vars, Scalar::from_rational(b.clone()))];
    Triple::new(t.source(), ambient, &Map::new(&vars, factors)?, t.form(), t.poles())
}

/// `s_* π_* a`: the last coordinate of every map replaced by `b`.
pub fn section_pushforwards(a: &PolarChain, b: &Rational, opts: &Options) -> Result<PolarChain> {
    check_chain(a)?;
    let a = normalize(a, opts)?;
    let terms = a.terms().iter().map(|t| section_term(t, a.ambient(), b)).collect::<Result<Vec<_>>>()?;
    normalize(&PolarChain::from_terms(a.ambient(), a.degree(), terms)?, opts)
}

#[derive(Clone, Debug)]
pub struct HomotopyReport {
    pub basepoint: Rational,
    pub homotopy: Cylinder,
    pub dh: PolarChain,
    pub hd: PolarChain,
    pub section: PolarChain,
    /// `∂h(a) + h(∂a) + s_*π_*a - a`, normalized.
    pub residual: PolarChain,
}

impl HomotopyReport {
    pub fn holds(&self) -> bool {
        self.residual.is_zero()
    }
}

pub fn verify_homotopy_identity(a: &PolarChain, b: &Rational, opts: &Options) -> Result<HomotopyReport> {
    check_chain(a)?;
    let a = normalize(a, opts)?;
    let homotopy = cylinder_homotopy(&a, b, opts)?;
    let dh = boundary(&homotopy.chain, opts)?.chain;
    let hd = if a.degree() == 0 {
        PolarChain::zero(a.ambient(), 0)
    } else {
        cylinder_homotopy(&boundary(&a, opts)?.chain, b, opts)?.chain
    };
    let section = section_pushforwards(&a, b, opts)?;
    let total = dh.add(&hd)?.add(&section)?.sub(&a)?;
    let residual = normalize(&total, opts)?;
    Ok(HomotopyReport { basepoint: b.clone(), homotopy, dh, hd, section, residual })
}

/// One row of the residue table of `β`: actual residues against the
/// predicted chain.
#[derive(Clone, Debug)]
pub struct TableRow {
    pub term: usize,
    pub divisor: String,
    pub expected: PolarChain,
    pub actual: PolarChain,
}

impl TableRow {
    pub fn holds(&self) -> bool {
        self.expected == self.actual
    }
}

fn residues_along(pieces: &[Triple], comp: &DivisorComponent, ambient: &Variety, degree: usize, opts: &Options) -> Result<PolarChain> {
    let tau = Scalar::tau_pow(1);
    let mut terms = Vec::new();
    for p in pieces {
        if p.poles().contains(comp) {
            let r = residue_triple(p, comp, ambient)?;
            terms.push(r.with_form(r.form().scale(&tau)));
        }
    }
    normalize(&PolarChain::from_terms(ambient, degree, terms)?, opts)
}

/// For each term: `TAU res_{A1} β = α`, `TAU res_{A0} β = -s_*π_* α`, and
/// `TAU res_{V×P¹} β = -φ dz ∧ res_V α` for every pole `V` of `α`.
pub fn residue_table(a: &PolarChain, b: &Rational, opts: &Options) -> Result<Vec<TableRow>> {
    check_chain(a)?;
    let a = normalize(a, opts)?;
    let x = a.ambient().clone();
    let q = a.degree();
    let mut rows = Vec::new();
    for (i, t) in a.terms().iter().enumerate() {
        let ct = cylinder_term(t, &x, b)?;
        if ct.pieces.is_empty() {
            continue;
        }
        let lift = Lift::new(t, &x)?;
        let own = normalize(&PolarChain::from_triple(&x, t.clone()), opts)?;
        rows.push(TableRow { term: i, divisor: lift.a1.label().to_string(), expected: own.clone(), actual: residues_along(&ct.pieces, &lift.a1, &x, q, opts)? });
        let section = normalize(&PolarChain::from_triple(&x, section_term(t, &x, b)?), opts)?.neg();
        let a0 = lift.a0(b)?;
        rows.push(TableRow { term: i, divisor: a0.label().to_string(), expected: normalize(&section, opts)?, actual: residues_along(&ct.pieces, &a0, &x, q, opts)? });
        for (v, lifted) in t.poles().iter().zip(&lift.base_poles) {
            let r = residue_triple(t, v, &x)?;
            let rl = Lift::new(&r, &x)?;
            let expected = if rl.degenerate(b) {
                PolarChain::zero(&x, q)
            } else {
                let form = rl.beta(b)?.scale(&Scalar::tau_pow(1)).neg();
                let poles = rl.poles_with(&[rl.a1.clone(), rl.a0(b)?]);
                let raw = Triple::raw(rl.source.clone(), rl.map.clone(), form, poles);
                normalize(&PolarChain::from_terms(&x, q, vec![raw])?, opts)?
            };
            rows.push(TableRow { term: i, divisor: lifted.label().to_string(), expected, actual: residues_along(&ct.pieces, lifted, &x, q, opts)? });
        }
    }
    Ok(rows)
}

/// A labelled chain for the homotopy corpus.
#[derive(Clone, Debug)]
pub struct CorpusEntry {
    pub name: &'static str,
    pub chain: PolarChain,
    pub basepoint: Rational,
}

fn line_pair(first: &str, second: &str) -> Variety {
    Variety::product_of_lines(&[first.to_string(), second.to_string()]).expect("distinct names")
}

fn log_ratio(a: &Variety, p: i64, q: i64) -> Result<(DifferentialForm, Vec<DivisorComponent>)> {
    let v = a.coords();
    let lin = |c: i64| Polynomial::var(v, 0).sub(&Polynomial::constant(v, Scalar::from_int(c)));
    let f = RationalFunction::new(lin(p), lin(q))?;
    let form = crate::forms::dlog(&f)?;
    Ok((form, vec![a.component(&lin(p))?, a.component(&lin(q))?]))
}

fn graph(ambient: &Variety, g0: &[i64], g1: &[i64], alpha: (i64, i64)) -> Result<PolarChain> {
    let a = Variety::projective_line("t");
    let v = a.coords().clone();
    let poly = |cs: &[i64]| {
        cs.iter().enumerate().fold(Polynomial::zero(&v), |acc, (k, &c)| acc.add(&Polynomial::var(&v, 0).pow(k as u32).scale(&Scalar::from_int(c))))
    };
    let map = Map::new(&v, vec![vec![Polynomial::one(&v), Polynomial::var(&v, 0)], vec![poly(g0), poly(g1)]])?;
    let (form, poles) = log_ratio(&a, alpha.0, alpha.1)?;
    Ok(PolarChain::from_triple(ambient, Triple::new(&a, ambient, &map, &form, &poles)?))
}

/// The corpus on which the homotopy identity is checked.
pub fn corpus() -> Result<Vec<CorpusEntry>> {
    let zero = Rational::zero();
    let int = |n: i64| Rational::from_integer(n.into());
    let hp = |xs: &[i64]| xs.iter().map(|&x| vec![Rational::one(), int(x)]).collect::<Vec<_>>();
    let line = Variety::projective_line("z");
    let pair = line_pair("u", "z");
    let mut out = Vec::new();
    let pt = PolarChain::from_triple(&line, Triple::point(&line, &hp(&[3]), Scalar::from_int(2))?);
    out.push(CorpusEntry { name: "point on P1", chain: pt, basepoint: zero.clone() });
    let pts = PolarChain::from_triple(&line, Triple::point(&line, &hp(&[1]), Scalar::one())?)
        .sub(&PolarChain::from_triple(&line, Triple::point(&line, &hp(&[-2]), Scalar::one())?))?;
    out.push(CorpusEntry { name: "point difference on P1", chain: pts, basepoint: int(5) });
    let p2 = PolarChain::from_triple(&pair, Triple::point(&pair, &hp(&[1, 2]), Scalar::from_int(-3))?);
    out.push(CorpusEntry { name: "point on P1 x P1", chain: p2, basepoint: zero.clone() });
    out.push(CorpusEntry { name: "identity graph", chain: graph(&pair, &[1], &[0, 1], (0, 1))?, basepoint: zero.clone() });
    out.push(CorpusEntry { name: "constant graph", chain: graph(&pair, &[1], &[2], (0, 1))?, basepoint: zero.clone() });
    out.push(CorpusEntry { name: "graph at the basepoint", chain: graph(&pair, &[1], &[0], (0, 1))?, basepoint: zero.clone() });
    out.push(CorpusEntry { name: "inversion graph", chain: graph(&pair, &[0, 1], &[1], (2, -1))?, basepoint: zero.clone() });
    out.push(CorpusEntry { name: "quadratic graph", chain: graph(&pair, &[1], &[-1, 0, 1], (3, -3))?, basepoint: int(2) });
    let a = Variety::projective_line("t");
    let sq = Map::new(a.coords(), vec![vec![Polynomial::one(a.coords()), Polynomial::var(a.coords(), 0).pow(2)]])?;
    let (form, poles) = log_ratio(&a, 1, 2)?;
    let on_line = PolarChain::from_triple(&line, Triple::new(&a, &line, &sq, &form, &poles)?);
    out.push(CorpusEntry { name: "squaring cover of P1", chain: on_line, basepoint: zero });
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn corpus_satisfies_identity() {
        let opts = Options::default();
        for e in corpus().unwrap() {
            let r = verify_homotopy_identity(&e.chain, &e.basepoint, &opts).unwrap_or_else(|err| panic!("{}: {err}", e.name));
            assert!(r.holds(), "{}: residual {}", e.name, r.residual);
        }
    }

    #[test]
    fn identity_graph_needs_repair() {
        let opts = Options::default();
        let e = corpus().unwrap().into_iter().find(|e| e.name == "identity graph").unwrap();
        let h = cylinder_homotopy(&e.chain, &e.basepoint, &opts).unwrap();
        assert!(h.terms[0].repaired_with.is_some());
        let degenerate = corpus().unwrap().into_iter().find(|e| e.name == "graph at the basepoint").unwrap();
        assert!(cylinder_homotopy(&degenerate.chain, &degenerate.basepoint, &opts).unwrap().chain.is_zero());
    }

    #[test]
    fn residue_rows_hold() {
        let opts = Options::default();
        for e in corpus().unwrap() {
            for row in residue_table(&e.chain, &e.basepoint, &opts).unwrap() {
                assert!(row.holds(), "{} along {}: {} vs {}", e.name, row.divisor, row.expected, row.actual);
            }
        }
    }

    #[test]
    fn point_lift_matches_closed_form() {
        // a weighted point c on P1 lifts to (λ/TAU) c dz/(z(z - c)) at b = 0
        let opts = Options::default();
        let line = Variety::projective_line("z");
        let c = Rational::from_integer(3.into());
        let a = PolarChain::from_triple(&line, Triple::point(&line, &vec![vec![Rational::one(), c.clone()]], Scalar::from_int(2)).unwrap());
        let h = cylinder_homotopy(&a, &Rational::zero(), &opts).unwrap();
        let t = &h.chain.terms()[0];
        let v = t.source().coords().clone();
        let z = Polynomial::var(&v, 0);
        let den = z.mul(&z.sub(&Polynomial::constant(&v, Scalar::from_rational(c.clone()))));
        let coeff = RationalFunction::new(Polynomial::constant(&v, Scalar::monomial(&c * Rational::from_integer(2.into()), -1)), den).unwrap();
        assert_eq!(t.form().coefficient(&[0]), coeff);
    }
}
