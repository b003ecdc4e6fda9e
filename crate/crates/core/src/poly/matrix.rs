use super::{MvPoly, PolyError};

/// Dense square matrix of polynomials, row-major.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PolyMatrix {
    dim: usize,
    entries: Vec<MvPoly>,
}

/// Below this size the determinant is expanded by cofactors.
const BAREISS_FROM: usize = 4;

impl PolyMatrix {
    pub fn zeros(dim: usize) -> Self {
        PolyMatrix {
            dim,
            entries: vec![MvPoly::zero(); dim * dim],
        }
    }

    pub fn from_rows(rows: Vec<Vec<MvPoly>>) -> Result<Self, PolyError> {
        let dim = rows.len();
        if rows.iter().any(|r| r.len() != dim) {
            return Err(PolyError::NotSquare);
        }
        Ok(PolyMatrix {
            dim,
            entries: rows.into_iter().flatten().collect(),
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, i: usize, j: usize) -> &MvPoly {
        &self.entries[i * self.dim + j]
    }

    pub fn set(&mut self, i: usize, j: usize, p: MvPoly) {
        self.entries[i * self.dim + j] = p;
    }

    pub fn is_symmetric(&self) -> bool {
        (0..self.dim).all(|i| (0..i).all(|j| self.get(i, j) == self.get(j, i)))
    }

    /// The square submatrix on the given (0-based) rows and columns.
    pub fn submatrix(&self, rows: &[usize], cols: &[usize]) -> Result<PolyMatrix, PolyError> {
        if rows.len() != cols.len() {
            return Err(PolyError::NotSquare);
        }
        if rows.iter().chain(cols).any(|&k| k >= self.dim) {
            return Err(PolyError::IndexOutOfRange);
        }
        let mut m = PolyMatrix::zeros(rows.len());
        for (a, &i) in rows.iter().enumerate() {
            for (b, &j) in cols.iter().enumerate() {
                m.set(a, b, self.get(i, j).clone());
            }
        }
        Ok(m)
    }

    pub fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.dim {
            self.entries.swap(a * self.dim + j, b * self.dim + j);
        }
    }

    pub fn determinant(&self) -> MvPoly {
        if self.dim < BAREISS_FROM {
            self.determinant_cofactor()
        } else {
            self.determinant_bareiss()
        }
    }

    /// Laplace expansion along the first row. Exponential; meant for small sizes.
    pub fn determinant_cofactor(&self) -> MvPoly {
        let cols: Vec<usize> = (0..self.dim).collect();
        self.cofactor_rec(0, &cols)
    }

    fn cofactor_rec(&self, row: usize, cols: &[usize]) -> MvPoly {
        match cols.len() {
            0 => MvPoly::one(),
            1 => self.get(row, cols[0]).clone(),
            2 => {
                let (a, b) = (cols[0], cols[1]);
                &(self.get(row, a) * self.get(row + 1, b)) - &(self.get(row, b) * self.get(row + 1, a))
            }
            _ => {
                let mut acc = MvPoly::zero();
                let mut rest = Vec::with_capacity(cols.len() - 1);
                for (k, &c) in cols.iter().enumerate() {
                    let e = self.get(row, c);
                    if e.is_zero() {
                        continue;
                    }
                    rest.clear();
                    rest.extend(cols.iter().copied().filter(|&d| d != c));
                    let term = e * &self.cofactor_rec(row + 1, &rest);
                    acc = if k % 2 == 0 { &acc + &term } else { &acc - &term };
                }
                acc
            }
        }
    }

    /// Fraction-free Gaussian elimination; every division is exact.
    pub fn determinant_bareiss(&self) -> MvPoly {
        let n = self.dim;
        if n == 0 {
            return MvPoly::one();
        }
        let mut m = self.clone();
        let mut negate = false;
        let mut prev = MvPoly::one();
        for k in 0..n - 1 {
            if m.get(k, k).is_zero() {
                match (k + 1..n).find(|&i| !m.get(i, k).is_zero()) {
                    Some(i) => {
                        m.swap_rows(k, i);
                        negate = !negate;
                    }
                    None => return MvPoly::zero(),
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let num = &(m.get(i, j) * m.get(k, k)) - &(m.get(i, k) * m.get(k, j));
                    let q = num
                        .exact_divide(&prev)
                        .expect("Bareiss step divides exactly");
                    m.set(i, j, q);
                }
            }
            prev = m.get(k, k).clone();
        }
        let d = m.get(n - 1, n - 1).clone();
        if negate {
            -d
        } else {
            d
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> MvPoly {
        s.parse().unwrap()
    }

    fn int_matrix(rows: &[&[i64]]) -> PolyMatrix {
        PolyMatrix::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&v| MvPoly::constant(v)).collect())
                .collect(),
        )
        .unwrap()
    }

    #[test]
    fn small_determinants() {
        assert!(PolyMatrix::zeros(0).determinant().is_one());
        let m = PolyMatrix::from_rows(vec![vec![p("w1*l1_2")]]).unwrap();
        assert_eq!(m.determinant(), p("w1*l1_2"));
        let m = int_matrix(&[&[2, 1], &[1, 3]]);
        assert_eq!(m.determinant(), MvPoly::constant(5));
    }

    #[test]
    fn bareiss_matches_cofactor_with_pivoting() {
        let m = int_matrix(&[&[0, 2, 1, 3], &[0, 1, 4, 1], &[5, 0, 2, 2], &[1, 1, 1, 0]]);
        assert_eq!(m.determinant_bareiss(), m.determinant_cofactor());
        let sym = PolyMatrix::from_rows(vec![
            vec![p("w1"), p("w1*l1_2"), p("0"), p("w1*l1_2*l2_4")],
            vec![p("w1*l1_2"), p("w1*l1_2^2 + w2"), p("0"), p("w1*l1_2^2*l2_4 + w2*l2_4")],
            vec![p("0"), p("0"), p("w3"), p("w3*l3_4")],
            vec![
                p("w1*l1_2*l2_4"),
                p("w1*l1_2^2*l2_4 + w2*l2_4"),
                p("w3*l3_4"),
                p("w1*l1_2^2*l2_4^2 + w2*l2_4^2 + w3*l3_4^2 + w4"),
            ],
        ])
        .unwrap();
        assert!(sym.is_symmetric());
        assert_eq!(sym.determinant_bareiss(), sym.determinant_cofactor());
        assert_eq!(sym.determinant(), p("w1*w2*w3*w4"));
    }

    #[test]
    fn singular_matrix() {
        let m = int_matrix(&[&[1, 2, 3, 4], &[2, 4, 6, 8], &[0, 1, 0, 1], &[1, 0, 0, 1]]);
        assert!(m.determinant_bareiss().is_zero());
        assert!(m.determinant_cofactor().is_zero());
    }
}
