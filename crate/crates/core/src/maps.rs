//! Maps into catalog varieties, stored as homogeneous coordinate tuples (one
//! per projective factor of the target) over the source's standard chart.

use std::fmt;

use num_traits::Zero;
use rand::Rng;

use crate::error::{Error, Result};
use crate::geometry::{normalize_point, HomPoint, Variety};
use crate::poly::{Polynomial, Vars};
use crate::rational::RationalFunction;
use crate::scalar::{Rational, Scalar};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Map {
    vars: Vars,
    factors: Vec<Vec<Polynomial>>,
}

/// Removes the common factor and scales the first nonzero entry's leading
/// coefficient to `1`.
fn normalize_tuple(t: Vec<Polynomial>) -> Result<Vec<Polynomial>> {
    let first = t.iter().find(|p| !p.is_zero()).ok_or_else(|| Error::Degenerate("map with an all-zero coordinate tuple".into()))?;
    let g = t.iter().fold(Polynomial::zero(first.vars()), |acc, p| if acc.is_zero() { p.clone() } else { acc.gcd(p) });
    let t: Vec<Polynomial> = t.iter().map(|p| p.div_exact(&g).expect("gcd divides")).collect();
    let (_, unit) = t.iter().find(|p| !p.is_zero()).unwrap().normalize_unit();
    let inv = unit.inv()?;
    Ok(t.iter().map(|p| p.scale(&inv)).collect())
}

/// Clears denominators of a tuple of rational functions.
fn clear(t: &[RationalFunction]) -> Vec<Polynomial> {
    let vars = t[0].vars().clone();
    let mut l = Polynomial::one(&vars);
    for f in t {
        let g = l.gcd(f.den());
        l = l.mul(&f.den().div_exact(&g).expect("gcd divides"));
    }
    t.iter().map(|f| f.num().mul(&l.div_exact(f.den()).expect("lcm"))).collect()
}

impl Map {
    pub fn new(vars: &Vars, factors: Vec<Vec<Polynomial>>) -> Result<Map> {
        let factors = factors
            .into_iter()
            .map(|t| {
                if t.iter().any(|p| p.vars() != vars) {
                    return Err(Error::ChartMismatch("map entries over a different chart".into()));
                }
                normalize_tuple(t)
            })
            .collect::<Result<_>>()?;
        Ok(Map { vars: vars.clone(), factors })
    }

    /// Tuples whose entries are rational functions (denominators cleared).
    pub fn from_rational_tuples(vars: &Vars, factors: Vec<Vec<RationalFunction>>) -> Result<Map> {
        Map::new(vars, factors.iter().map(|t| clear(t)).collect())
    }

    pub fn identity(v: &Variety) -> Map {
        Map::new(v.coords(), v.identity_tuples()).expect("identity tuples")
    }

    /// The constant map from a source with coordinates `vars` to `point`.
    pub fn constant(vars: &Vars, point: &HomPoint) -> Result<Map> {
        let factors = point
            .iter()
            .map(|t| t.iter().map(|x| Polynomial::constant(vars, Scalar::from_rational(x.clone()))).collect())
            .collect();
        Map::new(vars, factors)
    }

    /// Affine description: one value per standard coordinate of `target`,
    /// `None` standing for the point at infinity of a `P¹` factor.
    pub fn from_affine(vars: &Vars, target: &Variety, coords: &[Option<RationalFunction>]) -> Result<Map> {
        if coords.len() != target.coords().len() {
            return Err(Error::DimensionMismatch(format!("{} coordinates given for {target}", coords.len())));
        }
        let one = RationalFunction::one(vars);
        let zero = RationalFunction::zero(vars);
        let sizes = target.factor_sizes();
        if sizes.iter().all(|&s| s == 2) {
            let factors = coords
                .iter()
                .map(|c| match c {
                    Some(f) => vec![one.clone(), f.clone()],
                    None => vec![zero.clone(), one.clone()],
                })
                .collect();
            return Map::from_rational_tuples(vars, factors);
        }
        let mut t = vec![one];
        for c in coords {
            t.push(c.clone().ok_or_else(|| Error::Unsupported(format!("`inf` as a coordinate of {target}")))?);
        }
        Map::from_rational_tuples(vars, vec![t])
    }

    pub fn vars(&self) -> &Vars {
        &self.vars
    }

    pub fn factors(&self) -> &[Vec<Polynomial>] {
        &self.factors
    }

    pub fn fits(&self, target: &Variety) -> bool {
        self.factors.iter().map(|t| t.len()).collect::<Vec<_>>() == target.factor_sizes()
    }

    /// Composition with `images`, which give each source coordinate over `target_vars`.
    pub fn substitute(&self, images: &[RationalFunction], target_vars: &Vars) -> Result<Map> {
        let factors = self
            .factors
            .iter()
            .map(|t| {
                t.iter()
                    .map(|p| RationalFunction::from_poly(p.clone()).substitute(images, target_vars))
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        Map::from_rational_tuples(target_vars, factors)
    }

    /// The same map written over chart `chart` of its source.
    pub fn in_chart(&self, source: &Variety, chart: usize) -> Result<Map> {
        if chart == 0 {
            return Ok(self.clone());
        }
        let c = source.chart(chart);
        self.substitute(&c.to_origin, &c.vars)
    }

    pub fn is_constant(&self) -> bool {
        self.factors.iter().flatten().all(|p| p.is_constant())
    }

    /// Value at a point of the chart the map is written over.
    pub fn evaluate(&self, point: &[Rational]) -> Result<HomPoint> {
        let raw: Vec<Vec<Rational>> = self
            .factors
            .iter()
            .map(|t| {
                t.iter()
                    .map(|p| p.evaluate(point).as_rational().ok_or_else(|| Error::Irrational("TAU-valued map".into())))
                    .collect()
            })
            .collect::<Result<_>>()?;
        normalize_point(&raw).map_err(|_| Error::Degenerate("map is undefined at this point".into()))
    }

    /// For a constant map, its value.
    pub fn as_point(&self) -> Option<HomPoint> {
        if !self.is_constant() {
            return None;
        }
        self.evaluate(&vec![Rational::zero(); self.vars.len()]).ok()
    }

    /// Index of the target chart containing the generic image point, and the
    /// map's coordinates in that chart.
    pub fn generic_chart(&self, target: &Variety) -> (usize, Vec<RationalFunction>) {
        let mut chart = 0;
        let mut coords = Vec::new();
        let ratio = |a: &Polynomial, b: &Polynomial| RationalFunction::new(a.clone(), b.clone()).expect("nonzero");
        if target.factor_sizes().iter().all(|&s| s == 2) {
            for (i, t) in self.factors.iter().enumerate() {
                if t[0].is_zero() {
                    chart |= 1 << i;
                    coords.push(ratio(&t[0], &t[1]));
                } else {
                    coords.push(ratio(&t[1], &t[0]));
                }
            }
        } else if let Some(t) = self.factors.first() {
            if !t[0].is_zero() {
                coords = vec![ratio(&t[1], &t[0]), ratio(&t[2], &t[0])];
            } else if !t[1].is_zero() {
                chart = 1;
                coords = vec![ratio(&t[0], &t[1]), ratio(&t[2], &t[1])];
            } else {
                chart = 2;
                coords = vec![ratio(&t[1], &t[2]), ratio(&t[0], &t[2])];
            }
        }
        (chart, coords)
    }

    /// Rank of the Jacobian over the function field of the source chart.
    pub fn jacobian_rank(&self, target: &Variety) -> usize {
        let (_, coords) = self.generic_chart(target);
        let rows: Vec<Vec<RationalFunction>> =
            coords.iter().map(|f| (0..self.vars.len()).map(|j| f.derivative(j)).collect()).collect();
        rank(rows, |a| a.is_zero(), |a, b| a.div(b).expect("nonzero pivot"), |a, b| a.mul(b), |a, b| a.sub(b))
    }

    /// Largest Jacobian rank observed at `probes` random rational points.
    pub fn jacobian_rank_probed(&self, target: &Variety, probes: usize, rng: &mut impl Rng) -> usize {
        let (_, coords) = self.generic_chart(target);
        let grads: Vec<Vec<RationalFunction>> =
            coords.iter().map(|f| (0..self.vars.len()).map(|j| f.derivative(j)).collect()).collect();
        let mut best = 0;
        for _ in 0..probes {
            let pt: Vec<Rational> = (0..self.vars.len()).map(|_| Rational::new(rng.gen_range(-97..=97).into(), rng.gen_range(1..=13).into())).collect();
            let rows: Option<Vec<Vec<Scalar>>> =
                grads.iter().map(|r| r.iter().map(|f| f.evaluate(&pt).ok()).collect()).collect();
            let Some(rows) = rows else { continue };
            let Some(rows) = rows.iter().map(|r| r.iter().map(|s| s.as_rational()).collect::<Option<Vec<_>>>()).collect::<Option<Vec<_>>>() else {
                return self.jacobian_rank(target);
            };
            best = best.max(rank(rows, |a| a.is_zero(), |a, b| a / b, |a, b| a * b, |a, b| a - b));
        }
        best
    }

    pub fn render(&self) -> String {
        self.to_string()
    }
}

fn rank<T: Clone>(
    mut m: Vec<Vec<T>>,
    is_zero: impl Fn(&T) -> bool,
    div: impl Fn(&T, &T) -> T,
    mul: impl Fn(&T, &T) -> T,
    sub: impl Fn(&T, &T) -> T,
) -> usize {
    let rows = m.len();
    let cols = m.first().map_or(0, |r| r.len());
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..rows).find(|&i| !is_zero(&m[i][c])) else { continue };
        m.swap(r, p);
        for i in r + 1..rows {
            if is_zero(&m[i][c]) {
                continue;
            }
            let f = div(&m[i][c], &m[r][c]);
            for j in c..cols {
                let v = sub(&m[i][j], &mul(&f, &m[r][j]));
                m[i][j] = v;
            }
        }
        r += 1;
        if r == rows {
            break;
        }
    }
    r
}

impl fmt::Display for Map {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .factors
            .iter()
            .map(|t| format!("[{}]", t.iter().map(|p| p.to_string()).collect::<Vec<_>>().join(":")))
            .collect();
        write!(f, "[{}]", parts.join(","))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::int;

    #[test]
    fn normalization_and_charts() {
        let src = Variety::projective_line("t");
        let v = src.coords().clone();
        let t = RationalFunction::var(&v, 0);
        let target = Variety::product_of_lines(&["x".into(), "y".into()]).unwrap();
        let m = Map::from_affine(&v, &target, &[Some(t.clone()), Some(t.inv().unwrap())]).unwrap();
        assert_eq!(m.to_string(), "[[1:t],[t:1]]");
        let at_inf = m.in_chart(&src, 1).unwrap();
        assert_eq!(at_inf.evaluate(&[int(0)]).unwrap(), vec![vec![int(0), int(1)], vec![int(1), int(0)]]);
        assert_eq!(m.jacobian_rank(&target), 1);
        let c = Map::from_affine(&v, &target, &[Some(RationalFunction::constant(&v, Scalar::from_int(2))), None]).unwrap();
        assert!(c.is_constant());
        assert_eq!(c.jacobian_rank(&target), 0);
        assert_eq!(c.as_point().unwrap(), vec![vec![int(1), int(2)], vec![int(0), int(1)]]);
    }

    #[test]
    fn probed_rank_matches_exact() {
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(1);
        let src = Variety::product_of_lines(&["a".into(), "b".into()]).unwrap();
        let v = src.coords().clone();
        let a = RationalFunction::var(&v, 0);
        let b = RationalFunction::var(&v, 1);
        let target = Variety::projective_plane("x", "y").unwrap();
        let m = Map::from_affine(&v, &target, &[Some(a.mul(&b)), Some(a.mul(&b).pow(2).unwrap())]).unwrap();
        assert_eq!(m.jacobian_rank(&target), 1);
        assert_eq!(m.jacobian_rank_probed(&target, 16, &mut rng), 1);
        let id = Map::identity(&src);
        assert_eq!(id.jacobian_rank(&src), 2);
    }
}
