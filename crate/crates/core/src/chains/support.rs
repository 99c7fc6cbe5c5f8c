//! Images of the terms of a chain.

use std::fmt;

use crate::error::Result;
use crate::geometry::{render_point, DivisorComponent, HomPoint, Kind, Variety};
use crate::poly::qpoly::{groebner, QPoly};
use crate::poly::Polynomial;
use crate::rational::RationalFunction;

use super::{normalize, Options, PolarChain, Triple};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Support {
    Point(HomPoint),
    Whole(String),
    Hypersurface(String),
    /// Image described only by the map, when elimination is out of reach.
    Parametrized(String),
}

impl fmt::Display for Support {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Support::Point(p) => write!(f, "point {}", render_point(p)),
            Support::Whole(x) => write!(f, "whole {x}"),
            Support::Hypersurface(h) => write!(f, "hypersurface {h}"),
            Support::Parametrized(m) => write!(f, "image of {m}"),
        }
    }
}

/// Embeds `p` (over `n` variables) at offset `at` of an `m`-variable ring.
fn shift(p: &QPoly, at: usize, m: usize) -> QPoly {
    let mut out = QPoly::zero(m);
    for (e, c) in &p.terms {
        let mut exps = vec![0u32; m];
        exps[at..at + e.len()].clone_from_slice(e);
        out = out.add(&QPoly::monomial(m, exps, c.clone()));
    }
    out
}

/// Equation of the image of a 1-dimensional source in a surface, as a
/// component of the ambient, by eliminating the source coordinates.
fn implicitize(t: &Triple, ambient: &Variety) -> Result<Option<DivisorComponent>> {
    let (chart, coords) = t.map.generic_chart(ambient);
    let ns = t.source.coords().len();
    let m = 1 + ns + coords.len();
    let target = 1 + ns;
    let mut gens = Vec::new();
    let mut dens = QPoly::one(m);
    for (i, f) in coords.iter().enumerate() {
        let (Ok(num), Ok(den)) = (f.num().to_q(), f.den().to_q()) else { return Ok(None) };
        let (num, den) = (shift(&num, 1, m), shift(&den, 1, m));
        gens.push(num.sub(&QPoly::var(m, target + i).mul(&den)));
        dens = dens.mul(&den);
    }
    if let Kind::Curve(p) = t.source.kind() {
        let Ok(q) = p.to_q() else { return Ok(None) };
        gens.push(shift(&q, 1, m));
    }
    gens.push(QPoly::one(m).sub(&QPoly::var(m, 0).mul(&dens)));
    let basis = groebner(&gens);
    let eliminated = basis
        .into_iter()
        .filter(|g| !g.is_zero() && (0..target).all(|v| !g.uses_var(v)))
        .min_by_key(|g| g.terms.keys().map(|e| e.iter().sum::<u32>()).max().unwrap_or(0));
    let Some(g) = eliminated else { return Ok(None) };
    let mut restricted = QPoly::zero(coords.len());
    for (e, c) in &g.terms {
        restricted = restricted.add(&QPoly::monomial(coords.len(), e[target..].to_vec(), c.clone()));
    }
    let chart_vars = ambient.chart(chart).vars.clone();
    let q = Polynomial::from_q(&chart_vars, &restricted).monic();
    let in_origin = RationalFunction::from_poly(q.clone()).substitute(&ambient.chart(chart).from_origin, ambient.coords())?;
    if !in_origin.num().is_constant() {
        return Ok(Some(ambient.component(in_origin.num())?));
    }
    let infinities = match ambient.kind() {
        Kind::Lines(k) => *k,
        Kind::Plane => 1,
        _ => 0,
    };
    for i in 0..infinities {
        let c = ambient.infinity(i)?;
        if c.chart_poly(chart).is_some_and(|p| p.monic() == q) {
            return Ok(Some(c));
        }
    }
    Ok(None)
}

fn describe(t: &Triple, ambient: &Variety) -> Result<Support> {
    if let Some(p) = t.map.as_point() {
        return Ok(Support::Point(p));
    }
    let dim = t.source.dimension();
    if dim == ambient.dimension() {
        return Ok(Support::Whole(ambient.render()));
    }
    if dim + 1 == ambient.dimension() && dim == 1 {
        if let Some(c) = implicitize(t, ambient)? {
            return Ok(Support::Hypersurface(c.label().to_string()));
        }
    }
    Ok(Support::Parametrized(t.map.render()))
}

/// The distinct images of the terms of the canonical representative.
pub fn support(c: &PolarChain, opts: &Options) -> Result<Vec<Support>> {
    let c = normalize(c, opts)?;
    let mut out: Vec<Support> = Vec::new();
    for t in c.terms() {
        let s = describe(t, c.ambient())?;
        if !out.contains(&s) {
            out.push(s);
        }
    }
    out.sort_by_key(|s| s.to_string());
    Ok(out)
}
