use super::{ParamError, SymbolicCovariance};
use crate::graph::Dag;
use crate::poly::{gcd, Monomial, MvPoly};

/// Largest graph for which all `2^n - 1` principal minors are computed.
pub const DEFAULT_PRINCIPAL_MINOR_LIMIT: usize = 12;

/// `|Σ_{S,S}|` under the trek rule for every nonempty `S`, deduplicated, in
/// order of first appearance (subsets by increasing bitmask).
pub fn principal_minor_images(g: &Dag) -> Result<Vec<MvPoly>, ParamError> {
    principal_minor_images_with(&SymbolicCovariance::new(g), DEFAULT_PRINCIPAL_MINOR_LIMIT)
}

fn principal_minor_images_with(s: &SymbolicCovariance, limit: usize) -> Result<Vec<MvPoly>, ParamError> {
    let n = s.dag().n();
    if n > limit {
        return Err(ParamError::TooLarge { n, limit });
    }
    let mut out: Vec<MvPoly> = Vec::new();
    for sub in s.dag().all_nodes().subsets().skip(1) {
        let m = s.principal_minor(sub)?;
        if !out.contains(&m) {
            out.push(m);
        }
    }
    Ok(out)
}

/// Removes from a polynomial every irreducible factor shared with some
/// principal minor, which generates the saturation of the principal ideal.
#[derive(Clone, Debug)]
pub struct Saturator {
    /// Non-monomial parts of the principal minors, made primitive.
    divisors: Vec<MvPoly>,
}

impl Saturator {
    pub fn new(g: &Dag) -> Result<Self, ParamError> {
        Saturator::from_covariance(&SymbolicCovariance::new(g), DEFAULT_PRINCIPAL_MINOR_LIMIT)
    }

    pub fn from_covariance(s: &SymbolicCovariance, limit: usize) -> Result<Self, ParamError> {
        let images = principal_minor_images_with(s, limit)?;
        Ok(Saturator::from_images(&images))
    }

    pub fn from_images(images: &[MvPoly]) -> Self {
        let mut divisors: Vec<MvPoly> = Vec::new();
        for p in images {
            // Principal minors never vanish at Λ = 0, so their monomial part is a product of ω's.
            let (_, rest) = p.monomial_factors().expect("principal minors are nonzero");
            let rest = rest.primitive_part();
            if !rest.is_constant() && !divisors.contains(&rest) {
                divisors.push(rest);
            }
        }
        Saturator { divisors }
    }

    /// The saturated generator: the λ-monomial part of `f` times the
    /// primitive part of what survives after dividing out every shared
    /// factor. Every `ω_v` factor goes, since `|Σ| = ∏ ω_v`.
    pub fn saturate(&self, f: &MvPoly) -> Result<MvPoly, ParamError> {
        let (m, mut rest) = f.monomial_factors()?;
        let lambdas = Monomial::from_factors(m.factors().iter().copied().filter(|(v, _)| v.is_lambda()));
        rest = rest.primitive_part();
        let mut changed = true;
        while changed && !rest.is_constant() {
            changed = false;
            for p in &self.divisors {
                let d = gcd(&rest, p);
                if !d.is_constant() {
                    rest = rest.exact_divide(&d).expect("gcd divides");
                    changed = true;
                }
            }
        }
        Ok(rest
            .primitive_part()
            .with_positive_lead()
            .mul_term(&lambdas, &crate::poly::Integer::ONE))
    }

    pub fn divisors(&self) -> &[MvPoly] {
        &self.divisors
    }
}

pub fn saturate(f: &MvPoly, g: &Dag) -> Result<MvPoly, ParamError> {
    Saturator::new(g)?.saturate(f)
}

#[cfg(test)]
mod tests {
    use super::super::tests::p;
    use super::*;
    use crate::graph::fixtures::running_example;

    #[test]
    fn images_of_running_example() {
        let g = running_example();
        let images = principal_minor_images(&g).unwrap();
        assert!(images.contains(&p("w1*l1_2^2 + w2")));
        assert!(images.contains(&p("w1*w2*w3*w4*w5")));
        let edgeless = principal_minor_images(&Dag::empty(2).unwrap()).unwrap();
        assert_eq!(edgeless, vec![p("w1"), p("w2"), p("w1*w2")]);
    }

    #[test]
    fn saturation_examples() {
        let g = running_example();
        let sat = Saturator::new(&g).unwrap();
        let s = SymbolicCovariance::new(&g);
        let m25_45 = s.minor(&[2, 5], &[4, 5]).unwrap();
        assert_eq!(
            sat.saturate(&m25_45).unwrap().to_string(),
            "w3*l2_4*l3_4*l3_5*l4_5 + w3*l2_4*l3_5^2 + w5*l2_4"
        );
        // The cofactor of ω1λ12 in |Σ_{15,25}| divides |Σ_{25,25}|.
        let m15_25 = s.minor(&[1, 5], &[2, 5]).unwrap();
        assert_eq!(sat.saturate(&m15_25).unwrap(), p("l1_2"));

        let edge = Dag::new(2, [(1, 2)]).unwrap();
        assert_eq!(saturate(&p("w1*l1_2"), &edge).unwrap(), p("l1_2"));
        assert_eq!(saturate(&p("l1_2 + w2"), &edge).unwrap(), p("l1_2 + w2"));
        assert!(saturate(&MvPoly::zero(), &edge).is_err());
    }

    #[test]
    fn saturation_is_idempotent() {
        let g = running_example();
        let sat = Saturator::new(&g).unwrap();
        let s = SymbolicCovariance::new(&g);
        for (a, b) in [([1, 5], [2, 5]), ([2, 5], [4, 5]), ([1, 4], [4, 5]), ([3, 4], [5, 4])] {
            let once = sat.saturate(&s.minor(&a, &b).unwrap()).unwrap();
            assert_eq!(sat.saturate(&once).unwrap(), once);
        }
    }

    #[test]
    fn size_guard() {
        let g = Dag::empty(13).unwrap();
        let s = SymbolicCovariance::new(&g);
        assert_eq!(
            Saturator::from_covariance(&s, 12).unwrap_err(),
            ParamError::TooLarge { n: 13, limit: 12 }
        );
    }
}
