//! Exact sparse linear algebra over the rationals.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::rational::Rational;

/// Sparse row: (column, value) sorted by column, no zeros.
pub type SparseRow = Vec<(usize, Rational)>;

#[derive(Clone, Debug, Default)]
pub struct SparseRationalMatrix {
    pub rows: usize,
    pub cols: usize,
    pub entries: Vec<(usize, usize, Rational)>,
}

impl SparseRationalMatrix {
    pub fn new(rows: usize, cols: usize) -> Self {
        SparseRationalMatrix { rows, cols, entries: Vec::new() }
    }

    pub fn from_dense(m: &[Vec<Rational>]) -> Self {
        let rows = m.len();
        let cols = m.first().map_or(0, |r| r.len());
        let mut s = Self::new(rows, cols);
        for (i, r) in m.iter().enumerate() {
            for (j, x) in r.iter().enumerate() {
                s.push(i, j, x.clone());
            }
        }
        s
    }

    pub fn push(&mut self, r: usize, c: usize, x: Rational) {
        if !x.is_zero() {
            self.entries.push((r, c, x));
        }
    }

    pub fn nnz(&self) -> usize {
        self.entries.len()
    }

    /// Rows as sparse vectors with duplicate entries summed.
    pub fn sparse_rows(&self) -> Vec<SparseRow> {
        let mut acc: Vec<BTreeMap<usize, Rational>> = vec![BTreeMap::new(); self.rows];
        for (r, c, x) in &self.entries {
            let e = acc[*r].entry(*c).or_default();
            *e += x;
        }
        acc.into_iter()
            .map(|m| m.into_iter().filter(|(_, x)| !x.is_zero()).collect())
            .collect()
    }
}

/// Scales a rational row to a primitive integer row with positive leading entry.
pub fn primitive(row: &mut SparseRow) {
    if row.is_empty() {
        return;
    }
    let mut den = Rational::one();
    for (_, x) in row.iter() {
        if !x.is_integer() {
            den = Rational::lcm_int(&den, &Rational::from_bigint(x.denom()));
        }
    }
    if !den.is_one() {
        for (_, x) in row.iter_mut() {
            *x = &*x * &den;
        }
    }
    let mut g = Rational::zero();
    for (_, x) in row.iter() {
        g = Rational::gcd_int(&g, x);
        if g.is_one() {
            break;
        }
    }
    if row[0].1.signum() < 0 {
        g = -g;
    }
    if !g.is_one() {
        for (_, x) in row.iter_mut() {
            *x = &*x / &g;
        }
    }
}

/// `a·r − b·p` for sparse rows, dropping zeros.
fn combine(r: &SparseRow, a: &Rational, p: &SparseRow, b: &Rational) -> SparseRow {
    let mut out = Vec::with_capacity(r.len() + p.len());
    let (mut i, mut j) = (0, 0);
    while i < r.len() || j < p.len() {
        let ci = r.get(i).map_or(usize::MAX, |e| e.0);
        let cj = p.get(j).map_or(usize::MAX, |e| e.0);
        if ci < cj {
            out.push((ci, a * &r[i].1));
            i += 1;
        } else if cj < ci {
            out.push((cj, -(b * &p[j].1)));
            j += 1;
        } else {
            let v = &(a * &r[i].1) - &(b * &p[j].1);
            if !v.is_zero() {
                out.push((ci, v));
            }
            i += 1;
            j += 1;
        }
    }
    out
}

/// Incremental fraction-free row echelon form.
///
/// Every stored row is a primitive integer row whose leading column is its
/// pivot, and no stored row has a nonzero entry at a later row's pivot column
/// at insertion time of that later row.
#[derive(Clone, Debug, Default)]
pub struct Echelon {
    pub cols: usize,
    rows: Vec<SparseRow>,
    pivot_row: BTreeMap<usize, usize>,
}

impl Echelon {
    pub fn new(cols: usize) -> Self {
        Echelon { cols, rows: Vec::new(), pivot_row: BTreeMap::new() }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn is_full(&self) -> bool {
        self.rows.len() == self.cols
    }

    /// Reduces `row` against the stored pivots; the result has zeros at all pivot columns.
    pub fn reduce(&self, mut row: SparseRow) -> SparseRow {
        let mut k = 0;
        while k < row.len() {
            let c = row[k].0;
            if let Some(&pi) = self.pivot_row.get(&c) {
                let p = &self.rows[pi];
                let a = p[0].1.clone();
                let b = row[k].1.clone();
                // p has no entries before c, so columns before c are untouched.
                let g = Rational::gcd_int(&a, &b);
                let (a, b) = (&a / &g, &b / &g);
                row = combine(&row, &a, p, &b);
                primitive(&mut row);
                continue;
            }
            k += 1;
        }
        row
    }

    /// Inserts a row; returns true if the rank increased.
    pub fn insert(&mut self, row: SparseRow) -> bool {
        let mut row = row;
        primitive(&mut row);
        let mut row = self.reduce(row);
        if row.is_empty() {
            return false;
        }
        primitive(&mut row);
        self.pivot_row.insert(row[0].0, self.rows.len());
        self.rows.push(row);
        true
    }

    pub fn pivot_cols(&self) -> impl Iterator<Item = &usize> {
        self.pivot_row.keys()
    }

    /// Kernel basis of the stored rows, normalized to reduced echelon form.
    pub fn kernel(&self) -> Vec<Vec<Rational>> {
        let free: Vec<usize> = (0..self.cols).filter(|c| !self.pivot_row.contains_key(c)).collect();
        let order: Vec<(usize, usize)> = self.pivot_row.iter().rev().map(|(&c, &r)| (c, r)).collect();
        let mut basis = Vec::with_capacity(free.len());
        for &f in &free {
            let mut x = vec![Rational::zero(); self.cols];
            x[f] = Rational::one();
            // Pivot rows are upper triangular with respect to their pivot order.
            for &(c, r) in &order {
                let row = &self.rows[r];
                let mut s = Rational::zero();
                for (j, v) in row.iter().skip(1) {
                    if !x[*j].is_zero() {
                        s += &(v * &x[*j]);
                    }
                }
                if !s.is_zero() {
                    x[c] = -(&s / &row[0].1);
                }
            }
            basis.push(x);
        }
        rref_vectors(basis)
    }
}

/// Reduced row echelon form of a list of dense vectors (zero rows dropped).
pub fn rref_vectors(mut v: Vec<Vec<Rational>>) -> Vec<Vec<Rational>> {
    let n = v.first().map_or(0, |x| x.len());
    let mut r = 0;
    for c in 0..n {
        if r == v.len() {
            break;
        }
        let Some(p) = (r..v.len()).find(|&i| !v[i][c].is_zero()) else {
            continue;
        };
        v.swap(r, p);
        let inv = v[r][c].recip();
        for x in v[r].iter_mut() {
            if !x.is_zero() {
                *x = &*x * &inv;
            }
        }
        for i in 0..v.len() {
            if i != r && !v[i][c].is_zero() {
                let f = v[i][c].clone();
                for j in 0..n {
                    if !v[r][j].is_zero() {
                        let t = &v[r][j] * &f;
                        v[i][j] -= &t;
                    }
                }
            }
        }
        r += 1;
    }
    v.truncate(r);
    v
}

/// Kernel of a sparse matrix: basis in reduced echelon form (first nonzero entry 1).
pub fn kernel(m: &SparseRationalMatrix) -> Vec<Vec<Rational>> {
    let mut e = Echelon::new(m.cols);
    for row in m.sparse_rows() {
        if e.is_full() {
            break;
        }
        if !row.is_empty() {
            e.insert(row);
        }
    }
    e.kernel()
}

/// Solves the square system `a·x = b` exactly; `None` if singular.
pub fn solve_dense(a: &[Vec<Rational>], b: &[Rational]) -> Option<Vec<Rational>> {
    let n = a.len();
    let mut m: Vec<Vec<Rational>> = a
        .iter()
        .zip(b)
        .map(|(r, x)| {
            let mut r = r.clone();
            r.push(x.clone());
            r
        })
        .collect();
    for c in 0..n {
        let p = (c..n).find(|&i| !m[i][c].is_zero())?;
        m.swap(c, p);
        let inv = m[c][c].recip();
        for x in m[c].iter_mut() {
            *x = &*x * &inv;
        }
        for i in 0..n {
            if i != c && !m[i][c].is_zero() {
                let f = m[i][c].clone();
                for j in c..=n {
                    if !m[c][j].is_zero() {
                        let t = &m[c][j] * &f;
                        m[i][j] -= &t;
                    }
                }
            }
        }
    }
    Some(m.into_iter().map(|r| r[n].clone()).collect())
}

/// Errors if `nnz` exceeds `cap`.
pub fn check_cap(nnz: usize, cap: usize, what: &str) -> Result<()> {
    if nnz > cap {
        return Err(Error::Resource(format!(
            "{what}: {nnz} matrix entries exceed the cap of {cap}"
        )));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn q(n: i64) -> Rational {
        Rational::from_int(n)
    }

    fn dense(rows: &[&[i64]]) -> SparseRationalMatrix {
        let m: Vec<Vec<Rational>> = rows.iter().map(|r| r.iter().map(|&x| q(x)).collect()).collect();
        SparseRationalMatrix::from_dense(&m)
    }

    fn apply(m: &SparseRationalMatrix, x: &[Rational]) -> Vec<Rational> {
        let mut y = vec![Rational::zero(); m.rows];
        for (r, c, v) in &m.entries {
            y[*r] += &(v * &x[*c]);
        }
        y
    }

    #[test]
    fn kernel_examples() {
        assert!(kernel(&dense(&[&[1, 0, 0], &[0, 1, 0], &[0, 0, 1]])).is_empty());
        let z = SparseRationalMatrix::new(2, 3);
        assert_eq!(kernel(&z).len(), 3);
        let k = kernel(&dense(&[&[1, 2, 3], &[2, 4, 6]]));
        assert_eq!(k.len(), 2);
        // reduced echelon: first vector starts with 1
        assert_eq!(k[0], vec![q(1), q(0), Rational::new(-1, 3)]);
        assert_eq!(k[1], vec![q(0), q(1), Rational::new(-2, 3)]);
    }

    #[test]
    fn solve_small() {
        let a = vec![vec![q(2), q(1)], vec![q(1), q(3)]];
        let x = solve_dense(&a, &[q(3), q(5)]).unwrap();
        assert_eq!(x, vec![Rational::new(4, 5), Rational::new(7, 5)]);
        assert!(solve_dense(&[vec![q(1), q(2)], vec![q(2), q(4)]], &[q(0), q(0)]).is_none());
    }

    proptest! {
        #[test]
        fn kernel_vectors_are_annihilated_and_rank_nullity_holds(
            data in proptest::collection::vec(-3i64..4, 4 * 6),
            keep in proptest::collection::vec(proptest::bool::ANY, 4 * 6),
        ) {
            let mut m = SparseRationalMatrix::new(4, 6);
            for k in 0..24 {
                if keep[k] {
                    m.push(k / 6, k % 6, q(data[k]));
                }
            }
            let ker = kernel(&m);
            for v in &ker {
                prop_assert!(apply(&m, v).iter().all(|x| x.is_zero()));
            }
            // rank via dense elimination of the rows
            let rows: Vec<Vec<Rational>> = {
                let mut d = vec![vec![q(0); 6]; 4];
                for (r, c, v) in &m.entries { d[*r][*c] = v.clone(); }
                d
            };
            let rank = rref_vectors(rows).len();
            prop_assert_eq!(rank + ker.len(), 6);
            prop_assert_eq!(rref_vectors(ker.clone()), ker);
        }
    }
}
