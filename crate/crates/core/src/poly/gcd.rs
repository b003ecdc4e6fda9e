//! Multivariate gcd over the integers by recursive primitive remainder
//! sequences. Adequate for the low-degree, few-term polynomials that arise as
//! covariance minors.

use super::{Integer, Monomial, MvPoly, Var};

/// Greatest common divisor with positive leading coefficient; `gcd(0, 0) = 0`.
pub fn gcd(f: &MvPoly, g: &MvPoly) -> MvPoly {
    if f.is_zero() {
        return g.with_positive_lead();
    }
    if g.is_zero() {
        return f.with_positive_lead();
    }
    let (mf, f1) = f.monomial_factors().unwrap();
    let (mg, g1) = g.monomial_factors().unwrap();
    let m = mf.gcd(&mg);
    let c = f1.content().abs().gcd(&g1.content().abs());
    let core = gcd_primitive(&f1.primitive_part(), &g1.primitive_part());
    core.mul_term(&m, &c)
}

/// Gcd of a list; zero for the empty list.
pub fn gcd_all<'a>(polys: impl IntoIterator<Item = &'a MvPoly>) -> MvPoly {
    let mut acc = MvPoly::zero();
    for p in polys {
        acc = gcd(&acc, p);
        if acc.is_one() {
            break;
        }
    }
    acc
}

/// Both inputs nonzero and primitive with no monomial factor.
fn gcd_primitive(f: &MvPoly, g: &MvPoly) -> MvPoly {
    if f.is_constant() || g.is_constant() {
        return MvPoly::one();
    }
    if f == g {
        return f.with_positive_lead();
    }
    let fv = f.variables();
    let gv = g.variables();
    // A common factor can only involve variables that both sides share.
    let x = fv
        .iter()
        .copied()
        .filter(|v| gv.binary_search(v).is_ok())
        .min_by_key(|&v| f.degree_in(v).max(g.degree_in(v)));
    let Some(x) = x else {
        return MvPoly::one();
    };
    let (cf, ppf) = split_content(f, x);
    let (cg, ppg) = split_content(g, x);
    let cont = gcd(&cf, &cg);
    let h = prs(ppf, ppg, x);
    (&cont * &h).with_positive_lead()
}

/// Content with respect to `x` (gcd of the coefficients in the other
/// variables) and the matching primitive part.
fn split_content(f: &MvPoly, x: Var) -> (MvPoly, MvPoly) {
    let coeffs = f.coefficients_in(x);
    let cont = gcd_all(coeffs.iter());
    if cont.is_constant() {
        let c = cont.leading_coefficient();
        if c.is_one() {
            return (cont, f.clone());
        }
    }
    let pp = f.exact_divide(&cont).expect("content divides every coefficient");
    (cont, pp)
}

fn prs(a: MvPoly, b: MvPoly, x: Var) -> MvPoly {
    let (mut a, mut b) = if a.degree_in(x) >= b.degree_in(x) { (a, b) } else { (b, a) };
    if b.degree_in(x) == 0 {
        return MvPoly::one();
    }
    loop {
        let r = pseudo_remainder(&a, &b, x);
        if r.is_zero() {
            return b.with_positive_lead();
        }
        if r.degree_in(x) == 0 {
            return MvPoly::one();
        }
        a = b;
        b = split_content(&r, x).1.primitive_part();
    }
}

fn pseudo_remainder(a: &MvPoly, b: &MvPoly, x: Var) -> MvPoly {
    let db = b.degree_in(x);
    let lcb = b.coefficients_in(x).pop().unwrap();
    let mut r = a.clone();
    loop {
        let dr = r.degree_in(x);
        if r.is_zero() || dr < db {
            return r;
        }
        let lcr = r.coefficients_in(x).pop().unwrap();
        let shift = MvPoly::term(Monomial::power(x, dr - db), Integer::ONE);
        r = &(&lcb * &r) - &(&(&lcr * &shift) * b);
    }
}

impl MvPoly {
    /// `self` or `-self`, whichever has a positive leading coefficient.
    pub fn with_positive_lead(&self) -> MvPoly {
        if self.leading_coefficient().is_negative() {
            -self
        } else {
            self.clone()
        }
    }

    pub fn gcd(&self, other: &MvPoly) -> MvPoly {
        gcd(self, other)
    }

    /// The product of the distinct irreducible factors, primitive with a
    /// positive leading coefficient. Over characteristic zero the repeated
    /// part is the gcd of `self` with all of its partial derivatives.
    pub fn squarefree_part(&self) -> MvPoly {
        if self.is_zero() {
            return MvPoly::zero();
        }
        let (m, rest) = self.monomial_factors().unwrap();
        let radical = Monomial::from_factors(m.vars().map(|v| (v, 1)));
        let rest = rest.primitive_part();
        let derivs: Vec<MvPoly> = rest.variables().into_iter().map(|v| rest.derivative(v)).collect();
        let repeated = gcd_all(std::iter::once(&rest).chain(&derivs));
        let core = rest.exact_divide(&repeated).expect("gcd divides its argument");
        core.mul_term(&radical, &Integer::ONE).primitive_part().with_positive_lead()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> MvPoly {
        s.parse().unwrap()
    }

    #[test]
    fn squarefree_drops_repeated_factors() {
        let a = p("w1*l1_2^2 + w2");
        let b = p("l2_4 - l3_4");
        let f = &(&a.pow(2) * &b) * &p("3*l2_4^3*w5");
        assert_eq!(f.squarefree_part(), (&(&a * &b) * &p("l2_4*w5")).with_positive_lead());
        assert_eq!(p("-2*l1_2").squarefree_part(), p("l1_2"));
        assert_eq!(p("l1_2^2 - 2*l1_2*l1_3 + l1_3^2").squarefree_part(), p("l1_2 - l1_3"));
    }

    #[test]
    fn gcd_of_products() {
        let a = p("w1*l1_2^2 + w2");
        let b = p("w3*l3_4*l3_5*l4_5 + w3*l3_5^2 + w5");
        let c = p("l1_2 + w3");
        assert_eq!(gcd(&(&a * &b), &(&a * &c)), a);
        assert_eq!(gcd(&(&a * &b), &(&b * &c)), b);
        assert!(gcd(&a, &b).is_one());
        assert!(gcd(&(&a * &b), &c).is_one());
    }

    #[test]
    fn gcd_keeps_monomials_and_content() {
        let a = p("6*w1*l1_2^2 + 6*w1*w2");
        let b = p("-4*w1^2*l1_2");
        assert_eq!(gcd(&a, &b), p("2*w1"));
        assert_eq!(gcd(&MvPoly::zero(), &b), p("4*w1^2*l1_2"));
        assert_eq!(gcd(&a, &MvPoly::zero()), a);
    }

    #[test]
    fn gcd_of_squares() {
        let a = p("w1 + l1_2");
        let b = p("w2 - l1_2");
        let f = &(&a * &a) * &b;
        let g = &a * &(&a * &a);
        assert_eq!(gcd(&f, &g), &a * &a);
    }
}
