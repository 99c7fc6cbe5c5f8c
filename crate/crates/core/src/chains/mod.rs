//! Polar chains: formal sums of admissible triples `(A, f, ω)`, their
//! canonical form under the relations, and the residue boundary.

mod pushforward;
mod support;

use std::collections::BTreeMap;
use std::fmt;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::forms::{polar_profile, DifferentialForm};
use crate::geometry::{component_contains, normalize_point, pole_chart, render_point, validate_normal_crossing, CurveRing, DivisorComponent, HomPoint, Kind, Variety};
use crate::maps::Map;
use crate::poly::Polynomial;
use crate::rational::RationalFunction;
use crate::residue::{p1_component, p1_poles, poincare_residue};
use crate::scalar::{Rational, Scalar};

pub use pushforward::pushforward_form;
pub use support::{support, Support};

/// Evaluation options shared by normalization and the operators built on it.
#[derive(Clone, Debug)]
pub struct Options {
    /// Decide Jacobian ranks symbolically instead of by probing.
    pub strict: bool,
    pub seed: u64,
    pub probes: usize,
}

impl Default for Options {
    fn default() -> Self {
        Options { strict: false, seed: 0x5eed, probes: 16 }
    }
}

/// An admissible triple. The form lives on the source's standard chart.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Triple {
    source: Variety,
    map: Map,
    form: DifferentialForm,
    poles: Vec<DivisorComponent>,
}

fn check_orders(source: &Variety, form: &DifferentialForm, poles: &[DivisorComponent]) -> Result<()> {
    for ci in 0..source.charts().len() {
        let moved = source.chart_transition(form, 0, ci)?;
        let declared: Vec<Polynomial> = poles.iter().filter_map(|c| c.chart_poly(ci).cloned()).collect();
        let profile = polar_profile(&moved, &declared)?;
        let chart = source.chart(ci).name();
        if let Some((p, o)) = profile.worst() {
            if o < -1 {
                let component = poles.iter().find(|c| c.chart_poly(ci) == Some(p)).map_or(p.to_string(), |c| c.label().to_string());
                return Err(Error::HigherOrderPole { chart, component, order: o });
            }
        }
        if !profile.residual_denominator.is_constant() {
            return Err(Error::UndeclaredPole { chart, residual: profile.residual_denominator.to_string() });
        }
    }
    Ok(())
}

impl Triple {
    /// Validates and builds a triple `(source, map, form)` into `ambient`.
    pub fn new(source: &Variety, ambient: &Variety, map: &Map, form: &DifferentialForm, poles: &[DivisorComponent]) -> Result<Triple> {
        if !map.fits(ambient) {
            return Err(Error::DimensionMismatch(format!("map {map} does not land in {ambient}")));
        }
        if map.vars() != source.coords() || form.vars() != source.coords() {
            return Err(Error::ChartMismatch(format!("map and form must be written over the coordinates of {source}")));
        }
        if form.degree() != source.dimension() {
            return Err(Error::DimensionMismatch(format!("a {}-form on the {}-dimensional {source}", form.degree(), source.dimension())));
        }
        let mut poles = poles.to_vec();
        poles.sort_by(|a, b| a.label().cmp(b.label()));
        poles.dedup();
        for p in &poles {
            if p.chart_count() != source.charts().len() {
                return Err(Error::ChartMismatch(format!("component {p} is not a divisor of {source}")));
            }
        }
        let form = if let Kind::Curve(p) = source.kind() {
            if !poles.is_empty() {
                return Err(Error::Unsupported("declared poles on a curve".into()));
            }
            let canonical = CurveRing::new(p)?.canonical_form(form)?;
            if let Some(chart) = pole_chart(&canonical, source)? {
                return Err(Error::UndeclaredPole { chart, residual: format!("pole of {canonical} on the curve") });
            }
            canonical
        } else {
            validate_normal_crossing(&poles, source)?;
            check_orders(source, form, &poles)?;
            form.clone()
        };
        Ok(Triple { source: source.clone(), map: map.clone(), form, poles })
    }

    /// A weighted point `(pt, constant map, weight)`.
    pub fn point(ambient: &Variety, point: &HomPoint, weight: Scalar) -> Result<Triple> {
        let pt = Variety::point();
        let sizes = ambient.factor_sizes();
        if point.len() != sizes.len() || point.iter().zip(&sizes).any(|(t, &s)| t.len() != s) {
            return Err(Error::NotInAmbient(format!("{} is not a point of {ambient}", render_point(point))));
        }
        if let Kind::Curve(_) = ambient.kind() {
            return Err(Error::Unsupported("chains with a curve as ambient".into()));
        }
        let map = Map::constant(pt.coords(), &normalize_point(point)?)?;
        let form = DifferentialForm::function(RationalFunction::constant(pt.coords(), weight));
        Triple::new(&pt, ambient, &map, &form, &[])
    }

    pub(crate) fn raw(source: Variety, map: Map, form: DifferentialForm, poles: Vec<DivisorComponent>) -> Triple {
        Triple { source, map, form, poles }
    }

    pub fn source(&self) -> &Variety {
        &self.source
    }

    pub fn map(&self) -> &Map {
        &self.map
    }

    pub fn form(&self) -> &DifferentialForm {
        &self.form
    }

    pub fn poles(&self) -> &[DivisorComponent] {
        &self.poles
    }

    pub fn with_form(&self, form: DifferentialForm) -> Triple {
        Triple { form, ..self.clone() }
    }

    /// The weight of a 0-dimensional triple.
    pub fn weight(&self) -> Option<Scalar> {
        self.form.as_function().and_then(|f| f.constant_value())
    }

    /// Order of the form along a component, in the first chart that sees it.
    pub fn order_along(&self, comp: &DivisorComponent) -> Result<Option<i64>> {
        let ci = comp.first_visible();
        let moved = self.source.chart_transition(&self.form, 0, ci)?;
        let p = comp.chart_poly(ci).expect("visible");
        let mut worst: Option<i64> = None;
        for (_, f) in moved.components() {
            if let Some(o) = f.ord_along(p)? {
                worst = Some(worst.map_or(o, |w| w.min(o)));
            }
        }
        Ok(worst)
    }

    /// Drops declared components along which the form has no pole.
    pub fn pruned(&self) -> Result<Triple> {
        let mut poles = Vec::new();
        for c in &self.poles {
            if self.order_along(c)?.is_some_and(|o| o < 0) {
                poles.push(c.clone());
            }
        }
        poles.sort_by(|a, b| a.label().cmp(b.label()));
        poles.dedup();
        Ok(Triple { poles, ..self.clone() })
    }

    fn key(&self) -> (String, String) {
        (self.source.render(), self.map.render())
    }

    pub fn render(&self, ambient: &Variety) -> String {
        let poles: Vec<&str> = self.poles.iter().map(|p| p.label()).collect();
        format!("chain({}, {}, {}, {}, poles[{}])", self.source, ambient, self.map, self.form, poles.join(", "))
    }
}

/// A union of points and hypersurfaces of the ambient variety.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Subvariety {
    ambient: Variety,
    points: Vec<HomPoint>,
    hypersurfaces: Vec<DivisorComponent>,
}

impl Subvariety {
    pub fn new(ambient: &Variety, points: &[HomPoint], hypersurfaces: &[DivisorComponent]) -> Result<Subvariety> {
        let sizes = ambient.factor_sizes();
        let mut pts = Vec::new();
        for p in points {
            if p.len() != sizes.len() || p.iter().zip(&sizes).any(|(t, &s)| t.len() != s) {
                return Err(Error::NotInAmbient(format!("{} is not a point of {ambient}", render_point(p))));
            }
            pts.push(normalize_point(p)?);
        }
        for h in hypersurfaces {
            if h.chart_count() != ambient.charts().len() {
                return Err(Error::NotInAmbient(format!("{h} is not a hypersurface of {ambient}")));
            }
        }
        pts.sort();
        pts.dedup();
        let mut hypersurfaces = hypersurfaces.to_vec();
        hypersurfaces.sort_by(|a, b| a.label().cmp(b.label()));
        hypersurfaces.dedup();
        Ok(Subvariety { ambient: ambient.clone(), points: pts, hypersurfaces })
    }

    pub fn ambient(&self) -> &Variety {
        &self.ambient
    }

    pub fn points(&self) -> &[HomPoint] {
        &self.points
    }

    pub fn hypersurfaces(&self) -> &[DivisorComponent] {
        &self.hypersurfaces
    }

    /// Whether the image of a triple lies in the subvariety.
    pub fn contains_image(&self, t: &Triple) -> Result<bool> {
        if let Some(pt) = t.map.as_point() {
            return Ok(self.points.contains(&pt) || self.hypersurfaces.iter().any(|h| component_contains(&self.ambient, h, &pt)));
        }
        let (chart, coords) = t.map.generic_chart(&self.ambient);
        for h in &self.hypersurfaces {
            let Some(q) = h.chart_poly(chart) else { continue };
            let value = RationalFunction::from_poly(q.clone()).substitute(&coords, t.source.coords())?;
            let vanishes = match t.source.kind() {
                Kind::Curve(p) => CurveRing::new(p)?.is_zero(&value)?,
                _ => value.is_zero(),
            };
            if vanishes {
                return Ok(true);
            }
        }
        Ok(false)
    }
}

impl fmt::Display for Subvariety {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let pts: Vec<String> = self
            .points
            .iter()
            .map(|p| {
                let tuples: Vec<String> = p
                    .iter()
                    .map(|t| format!("[{}]", t.iter().map(crate::scalar::fmt_rational).collect::<Vec<_>>().join(":")))
                    .collect();
                format!("[{}]", tuples.join(","))
            })
            .collect();
        let hyp: Vec<&str> = self.hypersurfaces.iter().map(|h| h.label()).collect();
        write!(f, "sub({}, points[{}], hyper[{}])", self.ambient, pts.join(", "), hyp.join(", "))
    }
}

/// A formal sum of triples of one degree in one ambient variety.
#[derive(Clone, Debug)]
pub struct PolarChain {
    ambient: Variety,
    degree: usize,
    terms: Vec<Triple>,
    relative_to: Option<Subvariety>,
    flags: Vec<String>,
}

impl PartialEq for PolarChain {
    fn eq(&self, o: &Self) -> bool {
        self.ambient == o.ambient && self.degree == o.degree && self.terms == o.terms && self.relative_to == o.relative_to
    }
}

impl PolarChain {
    pub fn zero(ambient: &Variety, degree: usize) -> PolarChain {
        PolarChain { ambient: ambient.clone(), degree, terms: vec![], relative_to: None, flags: vec![] }
    }

    pub fn from_triple(ambient: &Variety, t: Triple) -> PolarChain {
        let degree = t.source.dimension();
        PolarChain { ambient: ambient.clone(), degree, terms: vec![t], relative_to: None, flags: vec![] }
    }

    pub fn from_terms(ambient: &Variety, degree: usize, terms: Vec<Triple>) -> Result<PolarChain> {
        if let Some(t) = terms.iter().find(|t| t.source.dimension() != degree) {
            return Err(Error::DimensionMismatch(format!("term over {} in a {degree}-chain", t.source)));
        }
        Ok(PolarChain { ambient: ambient.clone(), degree, terms, relative_to: None, flags: vec![] })
    }

    pub fn ambient(&self) -> &Variety {
        &self.ambient
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn terms(&self) -> &[Triple] {
        &self.terms
    }

    pub fn relative_to(&self) -> Option<&Subvariety> {
        self.relative_to.as_ref()
    }

    /// Notes recorded while normalizing, such as merges refused for lack of
    /// normal crossing.
    pub fn flags(&self) -> &[String] {
        &self.flags
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add(&self, o: &PolarChain) -> Result<PolarChain> {
        if self.ambient != o.ambient {
            return Err(Error::DimensionMismatch(format!("chains on {} and {}", self.ambient, o.ambient)));
        }
        if self.degree != o.degree {
            return Err(Error::DimensionMismatch(format!("a {}-chain and a {}-chain", self.degree, o.degree)));
        }
        let relative_to = match (&self.relative_to, &o.relative_to) {
            (Some(a), Some(b)) if a != b => return Err(Error::NotInAmbient("chains relative to different subvarieties".into())),
            (a, b) => a.clone().or(b.clone()),
        };
        let mut terms = self.terms.clone();
        terms.extend(o.terms.iter().cloned());
        let mut flags = self.flags.clone();
        flags.extend(o.flags.iter().cloned());
        Ok(PolarChain { ambient: self.ambient.clone(), degree: self.degree, terms, relative_to, flags })
    }

    pub fn neg(&self) -> PolarChain {
        self.scale(&Scalar::from_int(-1))
    }

    pub fn sub(&self, o: &PolarChain) -> Result<PolarChain> {
        self.add(&o.neg())
    }

    /// Scalars are folded into the forms.
    pub fn scale(&self, s: &Scalar) -> PolarChain {
        let terms = self.terms.iter().map(|t| t.with_form(t.form.scale(s))).collect();
        PolarChain { terms, ..self.clone() }
    }

    pub fn with_relative(&self, z: Option<Subvariety>) -> PolarChain {
        PolarChain { relative_to: z, ..self.clone() }
    }

    pub fn render(&self) -> String {
        self.to_string()
    }
}

impl fmt::Display for PolarChain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let body = if self.terms.is_empty() {
            format!("zero({}, {})", self.ambient, self.degree)
        } else {
            self.terms.iter().map(|t| t.render(&self.ambient)).collect::<Vec<_>>().join(" + ")
        };
        match &self.relative_to {
            Some(z) => write!(f, "relative({body}, {z})"),
            None => write!(f, "{body}"),
        }
    }
}

fn term_rank(t: &Triple, ambient: &Variety, opts: &Options, rng: &mut ChaCha8Rng) -> Result<usize> {
    let dim = t.source.dimension();
    if dim == 0 || t.map.is_constant() {
        return Ok(0);
    }
    if let Kind::Curve(p) = t.source.kind() {
        let ring = CurveRing::new(p)?;
        let (_, coords) = t.map.generic_chart(ambient);
        let px = RationalFunction::from_poly(p.derivative(0));
        let py = RationalFunction::from_poly(p.derivative(1));
        for f in &coords {
            let along = f.derivative(1).mul(&px).sub(&f.derivative(0).mul(&py));
            if !ring.is_zero(&along)? {
                return Ok(1);
            }
        }
        return Ok(0);
    }
    Ok(if opts.strict { t.map.jacobian_rank(ambient) } else { t.map.jacobian_rank_probed(ambient, opts.probes, rng) })
}

/// Moves a 1-dimensional term on `P¹` to the identity triple of the ambient line.
fn push_to_line(t: &Triple, ambient: &Variety) -> Result<Triple> {
    let id = Map::identity(ambient);
    if &t.source == ambient && t.map == id {
        return Ok(t.clone());
    }
    let form = pushforward_form(&t.map, &t.form, &t.source, ambient)?;
    let poles = p1_poles(&form, ambient)?.iter().map(|(p, _)| p1_component(ambient, p)).collect::<Result<Vec<_>>>()?;
    Ok(Triple { source: ambient.clone(), map: id, form, poles })
}

/// Canonical representative: scalars folded and zero forms dropped,
/// degenerate terms dropped, terms on a projective line pushed to the
/// identity, equal `(source, map)` pairs merged, poles pruned, terms sorted.
pub fn normalize(c: &PolarChain, opts: &Options) -> Result<PolarChain> {
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let mut flags = c.flags.clone();
    let mut groups: BTreeMap<(String, String), Vec<Triple>> = BTreeMap::new();
    for t in &c.terms {
        if t.form.is_zero() || term_rank(t, &c.ambient, opts, &mut rng)? < c.degree {
            continue;
        }
        let t = if c.degree == 1 && c.ambient.is_projective_line() && t.source.is_projective_line() {
            match push_to_line(t, &c.ambient) {
                Ok(p) => p,
                Err(e) => {
                    flags.push(format!("term over {} kept unpushed: {e}", t.source));
                    t.clone()
                }
            }
        } else {
            t.clone()
        };
        groups.entry(t.key()).or_default().push(t);
    }
    let mut out = Vec::new();
    for ((src, map), group) in groups {
        if group.len() == 1 {
            if !group[0].form.is_zero() {
                out.push(group[0].pruned()?);
            }
            continue;
        }
        let mut form = group[0].form.clone();
        for t in &group[1..] {
            form = form.add(&t.form)?;
        }
        if form.is_zero() {
            continue;
        }
        let poles: Vec<DivisorComponent> = group.iter().flat_map(|t| t.poles.iter().cloned()).collect();
        let merged = Triple { form, poles, ..group[0].clone() }.pruned()?;
        if merged.source.dimension() >= 2 && validate_normal_crossing(&merged.poles, &merged.source).is_err() {
            flags.push(format!("terms over ({src}, {map}) not merged: the union of their poles is not normal crossing"));
            for t in group {
                out.push(t.pruned()?);
            }
            continue;
        }
        out.push(merged);
    }
    if let Some(z) = &c.relative_to {
        let mut kept = Vec::new();
        for t in out {
            if !z.contains_image(&t)? {
                kept.push(t);
            }
        }
        out = kept;
    }
    out.sort_by_cached_key(|t| t.render(&c.ambient));
    flags.dedup();
    Ok(PolarChain { ambient: c.ambient.clone(), degree: c.degree, terms: out, relative_to: c.relative_to.clone(), flags })
}

/// `(res_D A, f ∘ ι, res_D ω)` for a pole component `D` of the term.
pub fn residue_triple(t: &Triple, comp: &DivisorComponent, ambient: &Variety) -> Result<Triple> {
    let r = poincare_residue(&t.form, comp, &t.source)?;
    let src = r.target.source.clone();
    let map = t.map.in_chart(&t.source, r.target.chart)?.substitute(&r.target.images, src.coords())?;
    let poles = if src.is_projective_line() {
        p1_poles(&r.form, &src)?.iter().map(|(p, _)| p1_component(&src, p)).collect::<Result<Vec<_>>>()?
    } else {
        vec![]
    };
    Triple::new(&src, ambient, &map, &r.form, &poles)
}

/// One residue taken while computing a boundary.
#[derive(Clone, Debug)]
pub struct BoundaryRecord {
    /// Index of the term in the normalized input.
    pub term: usize,
    pub component: String,
    /// The residue triple, already multiplied by `TAU`.
    pub image: String,
}

#[derive(Clone, Debug)]
pub struct BoundaryResult {
    pub chain: PolarChain,
    pub provenance: Vec<BoundaryRecord>,
}

/// `∂(A, f, ω) = TAU Σ_D (D, f|_D, res_D ω)`, extended linearly and normalized.
pub fn boundary(c: &PolarChain, opts: &Options) -> Result<BoundaryResult> {
    let c = normalize(c, opts)?;
    if c.degree == 0 {
        return Ok(BoundaryResult { chain: PolarChain::zero(&c.ambient, 0).with_relative(c.relative_to.clone()), provenance: vec![] });
    }
    let tau = Scalar::tau_pow(1);
    let mut terms = Vec::new();
    let mut provenance = Vec::new();
    for (i, t) in c.terms.iter().enumerate() {
        for comp in &t.poles {
            let r = residue_triple(t, comp, &c.ambient)?;
            let r = r.with_form(r.form.scale(&tau));
            provenance.push(BoundaryRecord { term: i, component: comp.label().to_string(), image: r.render(&c.ambient) });
            terms.push(r);
        }
    }
    let raw = PolarChain { ambient: c.ambient.clone(), degree: c.degree - 1, terms, relative_to: c.relative_to.clone(), flags: vec![] };
    Ok(BoundaryResult { chain: normalize(&raw, opts)?, provenance })
}

/// Contributions to one point of `∂∂c` before cancellation.
#[derive(Clone, Debug)]
pub struct Cancellation {
    pub point: String,
    /// `(path, weight)` where the path names the two components crossed.
    pub contributions: Vec<(String, Scalar)>,
}

impl Cancellation {
    pub fn total(&self) -> Scalar {
        self.contributions.iter().fold(Scalar::zero(), |a, (_, w)| &a + w)
    }
}

#[derive(Clone, Debug)]
pub struct DsqReport {
    pub first: PolarChain,
    pub second: PolarChain,
    pub cancellations: Vec<Cancellation>,
}

impl DsqReport {
    pub fn is_zero(&self) -> bool {
        self.second.is_zero()
    }
}

/// Computes `∂∂c` and the table of iterated residues that cancel in it.
pub fn check_d_squared(c: &PolarChain, opts: &Options) -> Result<DsqReport> {
    let c = normalize(c, opts)?;
    let tau = Scalar::tau_pow(1);
    let mut table: BTreeMap<String, Vec<(String, Scalar)>> = BTreeMap::new();
    let mut raw1 = Vec::new();
    for t in &c.terms {
        for d in &t.poles {
            let r = residue_triple(t, d, &c.ambient)?;
            let r = r.with_form(r.form.scale(&tau));
            for e in &r.poles {
                let rr = residue_triple(&r, e, &c.ambient)?;
                let w = rr.weight().map(|w| &w * &tau);
                if let (Some(pt), Some(w)) = (rr.map.as_point(), w) {
                    table.entry(render_point(&pt)).or_default().push((format!("{} then {}", d.label(), e.label()), w));
                }
            }
            raw1.push(r);
        }
    }
    let degree = c.degree.saturating_sub(1);
    let first = normalize(&PolarChain { ambient: c.ambient.clone(), degree, terms: raw1, relative_to: c.relative_to.clone(), flags: vec![] }, opts)?;
    let second = boundary(&first, opts)?.chain;
    let cancellations = table.into_iter().map(|(point, contributions)| Cancellation { point, contributions }).collect();
    Ok(DsqReport { first, second, cancellations })
}

/// `∂c = 0`, modulo the subvariety for relative chains.
pub fn is_cycle(c: &PolarChain, opts: &Options) -> Result<(bool, PolarChain)> {
    let b = boundary(c, opts)?.chain;
    Ok((b.is_zero(), b))
}

/// The image of `c` in the relative group: terms inside `z` are dropped.
pub fn reduce_relative(c: &PolarChain, z: &Subvariety, opts: &Options) -> Result<PolarChain> {
    if z.ambient() != c.ambient() {
        return Err(Error::NotInAmbient(format!("{z} is not in {}", c.ambient)));
    }
    normalize(&c.with_relative(Some(z.clone())), opts)
}

/// A 1-chain on `P¹` whose boundary is the given weighted points:
/// `(P¹, id, TAU⁻¹ Σ λ_i dz/(z - p_i))`. Weights must sum to zero.
#[derive(Clone, Debug)]
pub struct Witness {
    pub points: PolarChain,
    pub chain: PolarChain,
    pub verified: bool,
}

pub fn boundary_witness_p1(line: &Variety, points: &[(Rational, Scalar)], opts: &Options) -> Result<Witness> {
    if !line.is_projective_line() {
        return Err(Error::Unsupported(format!("boundary witnesses on {line}")));
    }
    let mut merged: BTreeMap<Rational, Scalar> = BTreeMap::new();
    for (p, w) in points {
        let e = merged.entry(p.clone()).or_insert_with(Scalar::zero);
        *e = &*e + w;
    }
    merged.retain(|_, w| !w.is_zero());
    let total = merged.values().fold(Scalar::zero(), |a, w| &a + w);
    if !total.is_zero() {
        return Err(Error::NonzeroWeight(total.to_string()));
    }
    let v = line.coords();
    let z = Polynomial::var(v, 0);
    let mut pts = PolarChain::zero(line, 0);
    let mut coeff = RationalFunction::zero(v);
    let mut poles = Vec::new();
    for (p, w) in &merged {
        let lin = z.sub(&Polynomial::constant(v, Scalar::from_rational(p.clone())));
        coeff = coeff.add(&RationalFunction::from_poly(lin.clone()).inv()?.scale(w));
        poles.push(line.component(&lin)?);
        let hp = vec![vec![num_traits::One::one(), p.clone()]];
        pts = pts.add(&PolarChain::from_triple(line, Triple::point(line, &hp, w.clone())?))?;
    }
    let form = DifferentialForm::dvar(v, 0).mul_function(&coeff).scale(&Scalar::tau_pow(-1));
    let chain = if merged.is_empty() {
        PolarChain::zero(line, 1)
    } else {
        PolarChain::from_triple(line, Triple::new(line, line, &Map::identity(line), &form, &poles)?)
    };
    let chain = normalize(&chain, opts)?;
    let points = normalize(&pts, opts)?;
    let verified = boundary(&chain, opts)?.chain == points;
    Ok(Witness { points, chain, verified })
}

#[cfg(test)]
mod tests;
