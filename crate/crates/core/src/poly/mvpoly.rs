use std::cmp::Ordering;
use std::ops::{Add, Mul, Neg, Sub};

use super::{Integer, Monomial, PolyError, Var};

/// A sparse polynomial with integer coefficients, terms sorted from the
/// largest monomial down, no zero coefficients.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct MvPoly {
    terms: Vec<(Monomial, Integer)>,
}

impl MvPoly {
    pub fn zero() -> Self {
        MvPoly::default()
    }

    pub fn one() -> Self {
        MvPoly::constant(Integer::ONE)
    }

    pub fn constant(c: impl Into<Integer>) -> Self {
        MvPoly::term(Monomial::one(), c)
    }

    pub fn var(v: Var) -> Self {
        MvPoly::term(Monomial::var(v), Integer::ONE)
    }

    pub fn term(m: Monomial, c: impl Into<Integer>) -> Self {
        let c = c.into();
        if c.is_zero() {
            MvPoly::zero()
        } else {
            MvPoly { terms: vec![(m, c)] }
        }
    }

    /// Normalizes an arbitrary list of terms: merges repeats, drops zeros, sorts.
    pub fn from_terms(terms: impl IntoIterator<Item = (Monomial, Integer)>) -> Self {
        let mut terms: Vec<_> = terms.into_iter().collect();
        terms.sort_unstable_by(|a, b| b.0.cmp(&a.0));
        let mut out: Vec<(Monomial, Integer)> = Vec::with_capacity(terms.len());
        for (m, c) in terms {
            match out.last_mut() {
                Some((last, acc)) if *last == m => *acc = &*acc + &c,
                _ => out.push((m, c)),
            }
        }
        out.retain(|(_, c)| !c.is_zero());
        MvPoly { terms: out }
    }

    pub fn terms(&self) -> &[(Monomial, Integer)] {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.terms[0].0.is_one() && self.terms[0].1.is_one()
    }

    /// Exactly one term. The zero polynomial is not a monomial.
    pub fn is_monomial(&self) -> bool {
        self.terms.len() == 1
    }

    pub fn is_constant(&self) -> bool {
        self.terms.iter().all(|(m, _)| m.is_one())
    }

    pub fn leading_term(&self) -> Option<&(Monomial, Integer)> {
        self.terms.first()
    }

    pub fn leading_coefficient(&self) -> Integer {
        self.terms.first().map_or(Integer::ZERO, |(_, c)| c.clone())
    }

    pub fn total_degree(&self) -> u32 {
        self.terms.first().map_or(0, |(m, _)| m.degree())
    }

    /// Every variable occurring in some term, in variable order.
    pub fn variables(&self) -> Vec<Var> {
        let mut vs: Vec<Var> = self.terms.iter().flat_map(|(m, _)| m.vars()).collect();
        vs.sort_unstable();
        vs.dedup();
        vs
    }

    pub fn degree_in(&self, v: Var) -> u32 {
        self.terms.iter().map(|(m, _)| m.exponent(v)).max().unwrap_or(0)
    }

    pub fn scale(&self, c: &Integer) -> MvPoly {
        if c.is_zero() {
            return MvPoly::zero();
        }
        MvPoly {
            terms: self.terms.iter().map(|(m, d)| (m.clone(), d * c)).collect(),
        }
    }

    pub fn mul_term(&self, m: &Monomial, c: &Integer) -> MvPoly {
        if c.is_zero() {
            return MvPoly::zero();
        }
        // Multiplying by a monomial preserves the order of terms.
        MvPoly {
            terms: self.terms.iter().map(|(t, d)| (t.mul(m), d * c)).collect(),
        }
    }

    pub fn pow(&self, e: u32) -> MvPoly {
        let mut acc = MvPoly::one();
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    /// `self + c * other` without materializing `c * other`.
    fn add_scaled(&self, other: &MvPoly, c: &Integer, shift: &Monomial) -> MvPoly {
        let (a, b) = (&self.terms, &other.terms);
        let mut out = Vec::with_capacity(a.len() + b.len());
        let (mut x, mut y) = (0, 0);
        let next_b = |y: usize| (b[y].0.mul(shift), &b[y].1 * c);
        let mut pending = (y < b.len()).then(|| next_b(y));
        while x < a.len() || pending.is_some() {
            match &pending {
                None => {
                    out.extend_from_slice(&a[x..]);
                    break;
                }
                Some((bm, bc)) => {
                    let ord = if x < a.len() { a[x].0.cmp(bm) } else { Ordering::Less };
                    match ord {
                        Ordering::Greater => {
                            out.push(a[x].clone());
                            x += 1;
                            continue;
                        }
                        Ordering::Less => out.push((bm.clone(), bc.clone())),
                        Ordering::Equal => {
                            let s = &a[x].1 + bc;
                            if !s.is_zero() {
                                out.push((bm.clone(), s));
                            }
                            x += 1;
                        }
                    }
                    y += 1;
                    pending = (y < b.len()).then(|| next_b(y));
                }
            }
        }
        MvPoly { terms: out }
    }

    /// Exact quotient over the integers. `NotDivisible` if no integer
    /// polynomial `q` has `self = q * g`.
    pub fn exact_divide(&self, g: &MvPoly) -> Result<MvPoly, PolyError> {
        let (lm, lc) = g.leading_term().ok_or(PolyError::DivisionByZero)?;
        if g.is_monomial() {
            let terms: Option<Vec<_>> = self
                .terms
                .iter()
                .map(|(m, c)| Some((m.div(lm)?, c.div_exact(lc)?)))
                .collect();
            return terms.map(|terms| MvPoly { terms }).ok_or(PolyError::NotDivisible);
        }
        let mut r = self.clone();
        let mut q = Vec::new();
        let neg_one = Integer::from(-1);
        while let Some((rm, rc)) = r.terms.first() {
            let m = rm.div(lm).ok_or(PolyError::NotDivisible)?;
            let c = rc.div_exact(lc).ok_or(PolyError::NotDivisible)?;
            r = r.add_scaled(g, &(&c * &neg_one), &m);
            q.push((m, c));
        }
        Ok(MvPoly { terms: q })
    }

    /// Whether `self` divides `f` over the rationals.
    pub fn divides(&self, f: &MvPoly) -> bool {
        if self.is_zero() {
            return f.is_zero();
        }
        f.exact_divide(&self.primitive_part()).is_ok()
    }

    /// The largest monomial dividing every term, and the cofactor.
    pub fn monomial_factors(&self) -> Result<(Monomial, MvPoly), PolyError> {
        let mut it = self.terms.iter();
        let first = it.next().ok_or(PolyError::ZeroPolynomial)?;
        let mut m = first.0.clone();
        for (t, _) in it {
            if m.is_one() {
                break;
            }
            m = m.gcd(t);
        }
        let rest = if m.is_one() {
            self.clone()
        } else {
            MvPoly {
                terms: self.terms.iter().map(|(t, c)| (t.div(&m).unwrap(), c.clone())).collect(),
            }
        };
        Ok((m, rest))
    }

    /// Nonnegative gcd of the coefficients, signed so that the primitive part
    /// has a positive leading coefficient. Zero for the zero polynomial.
    pub fn content(&self) -> Integer {
        let mut g = Integer::ZERO;
        for (_, c) in &self.terms {
            g = g.gcd(c);
            if g.is_one() {
                break;
            }
        }
        if self.leading_coefficient().is_negative() {
            -g
        } else {
            g
        }
    }

    pub fn primitive_part(&self) -> MvPoly {
        let c = self.content();
        if c.is_zero() || c.is_one() {
            return self.clone();
        }
        MvPoly {
            terms: self.terms.iter().map(|(m, d)| (m.clone(), d.div_exact(&c).unwrap())).collect(),
        }
    }

    pub fn eval_f64(&self, value: &impl Fn(Var) -> f64) -> f64 {
        self.terms.iter().map(|(m, c)| c.to_f64() * m.eval_f64(value)).sum()
    }

    pub fn eval_integer(&self, value: &impl Fn(Var) -> Integer) -> Integer {
        let mut acc = Integer::ZERO;
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for &(v, e) in m.factors() {
                t = &t * &value(v).pow(e);
            }
            acc = &acc + &t;
        }
        acc
    }

    /// Views `self` as a polynomial in `v`: entry `d` is the coefficient of `v^d`.
    pub fn coefficients_in(&self, v: Var) -> Vec<MvPoly> {
        let deg = self.degree_in(v) as usize;
        let mut parts: Vec<Vec<(Monomial, Integer)>> = vec![Vec::new(); deg + 1];
        for (m, c) in &self.terms {
            let e = m.exponent(v) as usize;
            parts[e].push((if e == 0 { m.clone() } else { m.without(v) }, c.clone()));
        }
        // Removing a variable can reorder terms.
        parts.into_iter().map(MvPoly::from_terms).collect()
    }

    /// Partial derivative with respect to `v`.
    pub fn derivative(&self, v: Var) -> MvPoly {
        MvPoly::from_terms(self.terms.iter().filter_map(|(m, c)| {
            let e = m.exponent(v);
            (e > 0).then(|| {
                let lowered = m.without(v).mul(&Monomial::power(v, e - 1));
                (lowered, c * &Integer::from(e as i64))
            })
        }))
    }

    /// Inverse of [`MvPoly::coefficients_in`].
    pub fn from_coefficients(v: Var, coeffs: &[MvPoly]) -> MvPoly {
        MvPoly::from_terms(coeffs.iter().enumerate().flat_map(|(d, p)| {
            let shift = Monomial::power(v, d as u32);
            p.terms.iter().map(move |(m, c)| (m.mul(&shift), c.clone()))
        }))
    }
}

impl From<Var> for MvPoly {
    fn from(v: Var) -> Self {
        MvPoly::var(v)
    }
}

impl Add for &MvPoly {
    type Output = MvPoly;
    fn add(self, rhs: &MvPoly) -> MvPoly {
        self.add_scaled(rhs, &Integer::ONE, &Monomial::one())
    }
}

impl Sub for &MvPoly {
    type Output = MvPoly;
    fn sub(self, rhs: &MvPoly) -> MvPoly {
        self.add_scaled(rhs, &Integer::from(-1), &Monomial::one())
    }
}

impl Neg for &MvPoly {
    type Output = MvPoly;
    fn neg(self) -> MvPoly {
        MvPoly {
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(),
        }
    }
}

impl Mul for &MvPoly {
    type Output = MvPoly;
    fn mul(self, rhs: &MvPoly) -> MvPoly {
        if self.is_zero() || rhs.is_zero() {
            return MvPoly::zero();
        }
        if rhs.is_monomial() {
            return self.mul_term(&rhs.terms[0].0, &rhs.terms[0].1);
        }
        if self.is_monomial() {
            return rhs.mul_term(&self.terms[0].0, &self.terms[0].1);
        }
        let mut out = Vec::with_capacity(self.len() * rhs.len());
        for (a, c) in &self.terms {
            for (b, d) in &rhs.terms {
                out.push((a.mul(b), c * d));
            }
        }
        MvPoly::from_terms(out)
    }
}

macro_rules! forward_owned {
    ($tr:ident, $method:ident) => {
        impl $tr for MvPoly {
            type Output = MvPoly;
            fn $method(self, rhs: MvPoly) -> MvPoly {
                (&self).$method(&rhs)
            }
        }
    };
}

forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for MvPoly {
    type Output = MvPoly;
    fn neg(self) -> MvPoly {
        -&self
    }
}

impl std::iter::Sum for MvPoly {
    fn sum<I: Iterator<Item = MvPoly>>(iter: I) -> MvPoly {
        iter.fold(MvPoly::zero(), |acc, p| &acc + &p)
    }
}

impl std::iter::Product for MvPoly {
    fn product<I: Iterator<Item = MvPoly>>(iter: I) -> MvPoly {
        iter.fold(MvPoly::one(), |acc, p| &acc * &p)
    }
}
