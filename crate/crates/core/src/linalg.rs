//! Exact linear algebra over the rationals: an incremental reduced row echelon
//! form for sparse vectors, and a small dense matrix type.

use std::collections::BTreeMap;
use std::fmt;

use num::{One, Zero};

use crate::scalar::{format_scalar, LinComb, Scalar};

/// Incremental reduced row echelon form over sparse vectors keyed by `K`.
///
/// Every stored row remembers how it was built from the inserted vectors, so
/// membership queries can return an explicit combination of the inputs.
#[derive(Clone, Debug)]
pub struct Echelon<K: Ord + Clone> {
    rows: Vec<Row<K>>,
    pivots: BTreeMap<K, usize>,
    inserted: usize,
}

#[derive(Clone, Debug)]
struct Row<K: Ord + Clone> {
    vector: LinComb<K>,
    origin: LinComb<usize>,
}

impl<K: Ord + Clone> Default for Echelon<K> {
    fn default() -> Self {
        Self { rows: Vec::new(), pivots: BTreeMap::new(), inserted: 0 }
    }
}

impl<K: Ord + Clone> Echelon<K> {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn inserted(&self) -> usize {
        self.inserted
    }

    /// Returns `(residual, combination)` with `v = residual + Σ combination_i · input_i`.
    fn reduce(&self, v: &LinComb<K>) -> (LinComb<K>, LinComb<usize>) {
        let mut residual = v.clone();
        let mut combo = LinComb::zero();
        let mut cursor: Option<K> = None;
        loop {
            let next = residual
                .keys()
                .filter(|k| match &cursor {
                    Some(c) => *k > c,
                    None => true,
                })
                .find(|k| self.pivots.contains_key(*k))
                .cloned();
            let Some(key) = next else { break };
            let row = &self.rows[self.pivots[&key]];
            let c = residual.coeff(&key);
            residual.add_scaled(&row.vector, &-c.clone());
            combo.add_scaled(&row.origin, &c);
            cursor = Some(key);
        }
        (residual, combo)
    }

    /// Inserts `v`; returns `None` when it was independent of earlier inputs,
    /// otherwise the linear relation `v = Σ c_i · input_i` it satisfies.
    pub fn insert(&mut self, v: &LinComb<K>) -> Option<LinComb<usize>> {
        let index = self.inserted;
        self.inserted += 1;
        let (residual, combo) = self.reduce(v);
        let Some((pivot, lead)) = residual.iter().next().map(|(k, c)| (k.clone(), c.clone())) else {
            return Some(combo);
        };
        let inv = Scalar::one() / lead;
        let vector = residual.scale(&inv);
        let mut origin = LinComb::basis(index);
        origin -= &combo;
        let origin = origin.scale(&inv);
        for row in &mut self.rows {
            let c = row.vector.coeff(&pivot);
            if !c.is_zero() {
                row.vector.add_scaled(&vector, &-c.clone());
                row.origin.add_scaled(&origin, &-c);
            }
        }
        self.pivots.insert(pivot, self.rows.len());
        self.rows.push(Row { vector, origin });
        None
    }

    /// Whether `v` lies in the span of the inputs.
    pub fn contains(&self, v: &LinComb<K>) -> bool {
        self.reduce(v).0.is_zero()
    }

    /// Writes `v` as a combination of the inserted vectors, if it is in their span.
    pub fn express(&self, v: &LinComb<K>) -> Option<LinComb<usize>> {
        let (residual, combo) = self.reduce(v);
        residual.is_zero().then_some(combo)
    }

    /// Rows of the reduced echelon form, ordered by pivot.
    pub fn basis(&self) -> Vec<LinComb<K>> {
        self.pivots.values().map(|&i| self.rows[i].vector.clone()).collect()
    }
}

/// Basis of `{c : Σ c_j columns_j = 0}` in reduced echelon form (keys are column indices).
pub fn nullspace<K: Ord + Clone>(columns: &[LinComb<K>]) -> Vec<LinComb<usize>> {
    let mut ech = Echelon::new();
    let mut relations = Echelon::new();
    for (j, col) in columns.iter().enumerate() {
        if let Some(combo) = ech.insert(col) {
            let mut rel = LinComb::basis(j);
            rel -= &combo;
            relations.insert(&rel);
        }
    }
    relations.basis()
}

/// A dense rational matrix, row-major.
#[derive(Clone, PartialEq, Eq)]
pub struct Matrix {
    pub rows: usize,
    pub cols: usize,
    data: Vec<Scalar>,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self { rows, cols, data: vec![Scalar::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, Scalar::one());
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<Scalar>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|row| row.len() == c), "ragged matrix");
        Self { rows: r, cols: c, data: rows.into_iter().flatten().collect() }
    }

    pub fn get(&self, i: usize, j: usize) -> &Scalar {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Scalar) {
        self.data[i * self.cols + j] = v;
    }

    pub fn column(&self, j: usize) -> Vec<Scalar> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn row(&self, i: usize) -> &[Scalar] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn mul(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.cols, other.rows);
        let mut out = Matrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if !b.is_zero() {
                        let v = out.get(i, j) + a * b;
                        out.set(i, j, v);
                    }
                }
            }
        }
        out
    }

    pub fn apply(&self, v: &[Scalar]) -> Vec<Scalar> {
        assert_eq!(self.cols, v.len());
        (0..self.rows)
            .map(|i| self.row(i).iter().zip(v).fold(Scalar::zero(), |acc, (a, b)| acc + a * b))
            .collect()
    }

    pub fn sub(&self, other: &Matrix) -> Matrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a - b).collect(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    /// Inverse by Gauss-Jordan elimination; `None` when singular.
    pub fn inverse(&self) -> Option<Matrix> {
        assert_eq!(self.rows, self.cols);
        let n = self.rows;
        let mut a = self.clone();
        let mut inv = Matrix::identity(n);
        for col in 0..n {
            let pivot = (col..n).find(|&r| !a.get(r, col).is_zero())?;
            if pivot != col {
                a.swap_rows(pivot, col);
                inv.swap_rows(pivot, col);
            }
            let p = Scalar::one() / a.get(col, col).clone();
            a.scale_row(col, &p);
            inv.scale_row(col, &p);
            for r in 0..n {
                if r != col {
                    let f = a.get(r, col).clone();
                    if !f.is_zero() {
                        a.add_row_multiple(r, col, &-f.clone());
                        inv.add_row_multiple(r, col, &-f);
                    }
                }
            }
        }
        Some(inv)
    }

    pub fn rank(&self) -> usize {
        let mut ech = Echelon::new();
        for i in 0..self.rows {
            let row: LinComb<usize> =
                self.row(i).iter().enumerate().map(|(j, c)| (j, c.clone())).collect();
            ech.insert(&row);
        }
        ech.rank()
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    fn scale_row(&mut self, r: usize, f: &Scalar) {
        for j in 0..self.cols {
            let v = self.get(r, j) * f;
            self.set(r, j, v);
        }
    }

    fn add_row_multiple(&mut self, target: usize, source: usize, f: &Scalar) {
        for j in 0..self.cols {
            let v = self.get(target, j) + self.get(source, j) * f;
            self.set(target, j, v);
        }
    }
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "[")?;
        for i in 0..self.rows {
            let row: Vec<String> = self.row(i).iter().map(format_scalar).collect();
            writeln!(f, "  {}", row.join(" "))?;
        }
        write!(f, "]")
    }
}

impl fmt::Display for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            let row: Vec<String> = self.row(i).iter().map(format_scalar).collect();
            writeln!(f, "{}", row.join(" "))?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::int;

    fn vec_of(entries: &[(usize, i64)]) -> LinComb<usize> {
        entries.iter().map(|&(k, c)| (k, int(c))).collect()
    }

    #[test]
    fn echelon_tracks_origins() {
        let mut e = Echelon::new();
        assert!(e.insert(&vec_of(&[(0, 1), (1, 2)])).is_none());
        assert!(e.insert(&vec_of(&[(1, 1), (2, 1)])).is_none());
        let rel = e.insert(&vec_of(&[(0, 1), (1, 3), (2, 1)])).unwrap();
        assert_eq!(rel, vec_of(&[(0, 1), (1, 1)]));
        let combo = e.express(&vec_of(&[(0, 2), (1, 4)])).unwrap();
        assert_eq!(combo, vec_of(&[(0, 2)]));
        assert!(e.express(&vec_of(&[(3, 1)])).is_none());
        assert_eq!(e.rank(), 2);
    }

    #[test]
    fn rref_rows_are_fully_reduced() {
        let mut e = Echelon::new();
        e.insert(&vec_of(&[(1, 1), (2, 1)]));
        e.insert(&vec_of(&[(0, 1), (1, 1)]));
        let basis = e.basis();
        assert_eq!(basis[0], vec_of(&[(0, 1), (2, -1)]));
        assert_eq!(basis[1], vec_of(&[(1, 1), (2, 1)]));
    }

    #[test]
    fn nullspace_of_dependent_columns() {
        let cols = vec![vec_of(&[(0, 1)]), vec_of(&[(0, 2)]), vec_of(&[(1, 1)])];
        let ns = nullspace(&cols);
        let want: LinComb<usize> = [(0, int(1)), (1, crate::scalar::frac(-1, 2))].into_iter().collect();
        assert_eq!(ns, vec![want]);
    }

    #[test]
    fn inverse_round_trip() {
        let m = Matrix::from_rows(vec![vec![int(2), int(1)], vec![int(1), int(1)]]);
        let inv = m.inverse().unwrap();
        assert_eq!(m.mul(&inv), Matrix::identity(2));
        let singular = Matrix::from_rows(vec![vec![int(1), int(2)], vec![int(2), int(4)]]);
        assert!(singular.inverse().is_none());
        assert_eq!(singular.rank(), 1);
    }
}
