//! Trace of 1-forms along rational maps between projective lines.

use crate::error::{Error, Result};
use crate::forms::DifferentialForm;
use crate::geometry::Variety;
use crate::maps::Map;
use crate::poly::vars_from;
use crate::rational::RationalFunction;
use crate::univariate::UniPoly;

/// `f_*(r(t) dt) = Σ_{f(t)=w} r(t)/f'(t) dw`, computed as the trace of
/// `r/f'` in `Q(w)[s]/(G1(s) - w G0(s))` through Newton power sums.
pub fn pushforward_form(map: &Map, form: &DifferentialForm, source: &Variety, image: &Variety) -> Result<DifferentialForm> {
    if map == &Map::identity(source) && source == image {
        return Ok(form.clone());
    }
    if !source.is_projective_line() || !image.is_projective_line() || form.degree() != 1 {
        return Err(Error::Unsupported(format!("pushforward from {source} to {image}")));
    }
    let [g0, g1] = [&map.factors()[0][0], &map.factors()[0][1]];
    if map.is_constant() {
        return Err(Error::Unsupported("pushforward along a constant map".into()));
    }
    let both = vars_from(vec!["#s".to_string(), image.coords()[0].clone()]);
    let s = vec![RationalFunction::var(&both, 0)];
    let lift = |f: &RationalFunction| f.substitute(&s, &both);
    let g = RationalFunction::new(g1.clone(), g0.clone())?;
    let ratio = form.coefficient(&[0]).div(&g.derivative(0))?;
    let ratio = lift(&ratio)?;
    let w = RationalFunction::var(&both, 1);
    let fiber = lift(&RationalFunction::from_poly(g1.clone()))?.sub(&w.mul(&lift(&RationalFunction::from_poly(g0.clone()))?));
    let fiber = UniPoly::from_polynomial(fiber.num(), 0);
    let reduced = fiber.reduce_fraction(&ratio)?;
    let trace = fiber.trace(&reduced)?;
    let target = image.coords().clone();
    let down = vec![RationalFunction::zero(&target), RationalFunction::var(&target, 0)];
    let coefficient = trace.substitute(&down, &target)?;
    Ok(DifferentialForm::dvar(&target, 0).mul_function(&coefficient))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::forms::dlog;

    #[test]
    fn squaring_map() {
        let src = Variety::projective_line("z");
        let img = Variety::projective_line("w");
        let z = RationalFunction::var(src.coords(), 0);
        let w = RationalFunction::var(img.coords(), 0);
        let sq = Map::from_affine(src.coords(), &img, &[Some(z.pow(2).unwrap())]).unwrap();
        let pushed = pushforward_form(&sq, &dlog(&z).unwrap(), &src, &img).unwrap();
        assert_eq!(pushed, dlog(&w).unwrap());
        let dz = DifferentialForm::dvar(src.coords(), 0);
        assert!(pushforward_form(&sq, &dz, &src, &img).unwrap().is_zero());
    }

    #[test]
    fn mobius_transport() {
        let src = Variety::projective_line("t");
        let img = Variety::projective_line("w");
        let t = RationalFunction::var(src.coords(), 0);
        let w = RationalFunction::var(img.coords(), 0);
        let inv = Map::from_affine(src.coords(), &img, &[Some(t.inv().unwrap())]).unwrap();
        let one = RationalFunction::one(src.coords());
        let form = dlog(&t.sub(&one)).unwrap();
        // oracle: t = 1/w gives dlog((1 - w)/w)
        let onew = RationalFunction::one(img.coords());
        let expected = dlog(&onew.sub(&w).div(&w).unwrap()).unwrap();
        assert_eq!(pushforward_form(&inv, &form, &src, &img).unwrap(), expected);
    }
}
