use std::cmp::Ordering;

use smallvec::SmallVec;

use super::Var;

/// A power product of variables, stored as `(variable, exponent)` pairs sorted
/// by variable with every exponent positive. The empty product is `1`.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Monomial {
    degree: u32,
    factors: SmallVec<[(Var, u32); 10]>,
}

impl Monomial {
    pub fn one() -> Self {
        Monomial::default()
    }

    pub fn var(v: Var) -> Self {
        Monomial::power(v, 1)
    }

    pub fn power(v: Var, e: u32) -> Self {
        let mut m = Monomial::one();
        if e > 0 {
            m.factors.push((v, e));
            m.degree = e;
        }
        m
    }

    /// Builds a monomial from arbitrary `(variable, exponent)` pairs, merging
    /// repeats and dropping zero exponents.
    pub fn from_factors(pairs: impl IntoIterator<Item = (Var, u32)>) -> Self {
        let mut factors: SmallVec<[(Var, u32); 10]> = pairs.into_iter().filter(|&(_, e)| e > 0).collect();
        factors.sort_unstable_by_key(|&(v, _)| v);
        let mut merged: SmallVec<[(Var, u32); 10]> = SmallVec::with_capacity(factors.len());
        for (v, e) in factors {
            match merged.last_mut() {
                Some((w, f)) if *w == v => *f += e,
                _ => merged.push((v, e)),
            }
        }
        let degree = merged.iter().map(|&(_, e)| e).sum();
        Monomial { degree, factors: merged }
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn is_one(&self) -> bool {
        self.factors.is_empty()
    }

    pub fn factors(&self) -> &[(Var, u32)] {
        &self.factors
    }

    pub fn vars(&self) -> impl Iterator<Item = Var> + '_ {
        self.factors.iter().map(|&(v, _)| v)
    }

    pub fn exponent(&self, v: Var) -> u32 {
        match self.factors.binary_search_by_key(&v, |&(w, _)| w) {
            Ok(k) => self.factors[k].1,
            Err(_) => 0,
        }
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        if other.is_one() {
            return self.clone();
        }
        if self.is_one() {
            return other.clone();
        }
        let (a, b) = (&self.factors, &other.factors);
        let mut out: SmallVec<[(Var, u32); 10]> = SmallVec::with_capacity(a.len() + b.len());
        let (mut x, mut y) = (0, 0);
        while x < a.len() && y < b.len() {
            match a[x].0.cmp(&b[y].0) {
                Ordering::Less => {
                    out.push(a[x]);
                    x += 1;
                }
                Ordering::Greater => {
                    out.push(b[y]);
                    y += 1;
                }
                Ordering::Equal => {
                    out.push((a[x].0, a[x].1 + b[y].1));
                    x += 1;
                    y += 1;
                }
            }
        }
        out.extend_from_slice(&a[x..]);
        out.extend_from_slice(&b[y..]);
        Monomial {
            degree: self.degree + other.degree,
            factors: out,
        }
    }

    /// `self / other` if `other` divides `self`.
    pub fn div(&self, other: &Monomial) -> Option<Monomial> {
        if other.degree > self.degree {
            return None;
        }
        let mut out: SmallVec<[(Var, u32); 10]> = SmallVec::with_capacity(self.factors.len());
        let mut y = 0;
        let b = &other.factors;
        for &(v, e) in &self.factors {
            if y < b.len() && b[y].0 < v {
                return None;
            }
            if y < b.len() && b[y].0 == v {
                match e.cmp(&b[y].1) {
                    Ordering::Less => return None,
                    Ordering::Equal => {}
                    Ordering::Greater => out.push((v, e - b[y].1)),
                }
                y += 1;
            } else {
                out.push((v, e));
            }
        }
        if y < b.len() {
            return None;
        }
        Some(Monomial {
            degree: self.degree - other.degree,
            factors: out,
        })
    }

    pub fn divides(&self, other: &Monomial) -> bool {
        self.factors.iter().all(|&(v, e)| other.exponent(v) >= e)
    }

    /// Greatest common divisor: the componentwise minimum of exponents.
    pub fn gcd(&self, other: &Monomial) -> Monomial {
        Monomial::from_factors(self.factors.iter().filter_map(|&(v, e)| {
            let f = other.exponent(v);
            (f > 0).then_some((v, e.min(f)))
        }))
    }

    /// Removes every power of `v`.
    pub fn without(&self, v: Var) -> Monomial {
        Monomial::from_factors(self.factors.iter().copied().filter(|&(w, _)| w != v))
    }

    pub fn eval_f64(&self, value: &impl Fn(Var) -> f64) -> f64 {
        self.factors.iter().map(|&(v, e)| value(v).powi(e as i32)).product()
    }
}

/// Graded lexicographic order, with variables earlier in the [`Var`] order
/// weighing more.
impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree.cmp(&other.degree).then_with(|| {
            for (a, b) in self.factors.iter().zip(&other.factors) {
                if a.0 != b.0 {
                    // The side holding the earlier variable is larger.
                    return b.0.cmp(&a.0);
                }
                if a.1 != b.1 {
                    return a.1.cmp(&b.1);
                }
            }
            self.factors.len().cmp(&other.factors.len())
        })
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
