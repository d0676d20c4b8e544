//! Exact linear algebra over any [`FieldArith`] instance: canonical reduced
//! row echelon subspaces, membership, linear solves, and row-space
//! intersection (Zassenhaus).

use crate::field::FieldArith;

/// A subspace kept in reduced row echelon form. Equal subspaces have
/// identical row lists, which is what makes subfield bases canonical.
#[derive(Clone, Debug)]
pub struct Subspace<F: FieldArith> {
    field: F,
    width: usize,
    rows: Vec<Vec<F::Elem>>,
    pivots: Vec<usize>,
}

impl<F: FieldArith> Subspace<F> {
    pub fn new(field: F, width: usize) -> Self {
        Subspace {
            field,
            width,
            rows: Vec::new(),
            pivots: Vec::new(),
        }
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    pub fn rows(&self) -> &[Vec<F::Elem>] {
        &self.rows
    }

    pub fn field(&self) -> &F {
        &self.field
    }

    fn reduce_vec(&self, v: &mut [F::Elem]) {
        for (row, &piv) in self.rows.iter().zip(&self.pivots) {
            let c = v[piv].clone();
            if self.field.is_zero(&c) {
                continue;
            }
            for (j, rj) in row.iter().enumerate() {
                if self.field.is_zero(rj) {
                    continue;
                }
                let t = self.field.mul(&c, rj);
                v[j] = self.field.sub(&v[j], &t);
            }
        }
    }

    /// Insert a vector; returns true when the dimension grew.
    pub fn insert(&mut self, mut v: Vec<F::Elem>) -> bool {
        assert_eq!(v.len(), self.width);
        self.reduce_vec(&mut v);
        let piv = match v.iter().position(|c| !self.field.is_zero(c)) {
            None => return false,
            Some(p) => p,
        };
        let inv = self.field.inv(&v[piv]).expect("pivot nonzero");
        for c in v.iter_mut() {
            *c = self.field.mul(c, &inv);
        }
        // eliminate the new pivot from existing rows to stay in RREF
        for row in self.rows.iter_mut() {
            let c = row[piv].clone();
            if self.field.is_zero(&c) {
                continue;
            }
            for (j, vj) in v.iter().enumerate() {
                if self.field.is_zero(vj) {
                    continue;
                }
                let t = self.field.mul(&c, vj);
                row[j] = self.field.sub(&row[j], &t);
            }
        }
        let at = self
            .pivots
            .iter()
            .position(|&p| p > piv)
            .unwrap_or(self.rows.len());
        self.rows.insert(at, v);
        self.pivots.insert(at, piv);
        true
    }

    pub fn contains(&self, v: &[F::Elem]) -> bool {
        let mut w = v.to_vec();
        self.reduce_vec(&mut w);
        w.iter().all(|c| self.field.is_zero(c))
    }

    /// Coordinates of `v` with respect to the echelon rows, if `v` lies in
    /// the span. With RREF rows these are just the entries at the pivots.
    pub fn express(&self, v: &[F::Elem]) -> Option<Vec<F::Elem>> {
        if !self.contains(v) {
            return None;
        }
        Some(self.pivots.iter().map(|&p| v[p].clone()).collect())
    }

    pub fn is_subspace_of(&self, other: &Subspace<F>) -> bool {
        self.rows.iter().all(|r| other.contains(r))
    }

    /// Row-space intersection via the Zassenhaus block trick.
    pub fn intersect(&self, other: &Subspace<F>) -> Subspace<F> {
        let f = &self.field;
        let w = self.width;
        let mut work: Vec<Vec<F::Elem>> = Vec::new();
        for r in &self.rows {
            let mut row = r.clone();
            row.extend(r.iter().cloned());
            work.push(row);
        }
        for r in &other.rows {
            let mut row = r.clone();
            row.extend(std::iter::repeat_n(f.zero(), w));
            work.push(row);
        }
        // eliminate on the left block only
        let mut rank = 0usize;
        for col in 0..w {
            let piv = (rank..work.len()).find(|&i| !f.is_zero(&work[i][col]));
            let piv = match piv {
                None => continue,
                Some(p) => p,
            };
            work.swap(rank, piv);
            let inv = f.inv(&work[rank][col]).expect("pivot nonzero");
            for c in work[rank].iter_mut() {
                *c = f.mul(c, &inv);
            }
            for i in 0..work.len() {
                if i == rank {
                    continue;
                }
                let c = work[i][col].clone();
                if f.is_zero(&c) {
                    continue;
                }
                for j in 0..2 * w {
                    let t = f.mul(&c, &work[rank][j]);
                    work[i][j] = f.sub(&work[i][j], &t);
                }
            }
            rank += 1;
        }
        let mut out = Subspace::new(self.field.clone(), w);
        for row in work.iter().skip(rank) {
            debug_assert!(row[..w].iter().all(|c| f.is_zero(c)));
            out.insert(row[w..].to_vec());
        }
        out
    }
}

impl<F: FieldArith> PartialEq for Subspace<F> {
    fn eq(&self, other: &Self) -> bool {
        self.width == other.width && self.rows == other.rows
    }
}

/// Solve `sum_i c_i columns[i] = target` for the `c_i`. Plain Gaussian
/// elimination on the augmented system; `None` when inconsistent.
pub fn solve_combination<F: FieldArith>(
    field: &F,
    columns: &[Vec<F::Elem>],
    target: &[F::Elem],
) -> Option<Vec<F::Elem>> {
    let n = target.len();
    let k = columns.len();
    // rows: n equations, k unknowns, augmented with the target
    let mut m: Vec<Vec<F::Elem>> = (0..n)
        .map(|i| {
            let mut row: Vec<F::Elem> = columns.iter().map(|c| c[i].clone()).collect();
            row.push(target[i].clone());
            row
        })
        .collect();
    let mut pivot_of_col: Vec<Option<usize>> = vec![None; k];
    let mut rank = 0usize;
    for col in 0..k {
        let piv = (rank..n).find(|&i| !field.is_zero(&m[i][col]));
        let piv = match piv {
            None => continue,
            Some(p) => p,
        };
        m.swap(rank, piv);
        let inv = field.inv(&m[rank][col]).expect("pivot nonzero");
        for c in m[rank].iter_mut() {
            *c = field.mul(c, &inv);
        }
        for i in 0..n {
            if i == rank {
                continue;
            }
            let c = m[i][col].clone();
            if field.is_zero(&c) {
                continue;
            }
            for j in col..=k {
                let t = field.mul(&c, &m[rank][j]);
                m[i][j] = field.sub(&m[i][j], &t);
            }
        }
        pivot_of_col[col] = Some(rank);
        rank += 1;
    }
    // inconsistent if a zero row has nonzero augmented entry
    for row in m.iter().skip(rank) {
        if !field.is_zero(&row[k]) {
            return None;
        }
    }
    let mut sol = vec![field.zero(); k];
    for (col, piv) in pivot_of_col.iter().enumerate() {
        if let Some(r) = piv {
            sol[col] = m[*r][k].clone();
        }
    }
    Some(sol)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::FunctionField;
    use crate::scalar::PrimeBase;

    fn q() -> FunctionField {
        FunctionField::prime(PrimeBase::Rational)
    }

    fn vecs(field: &FunctionField, data: &[&[i64]]) -> Vec<Vec<crate::poly::ratfunc::RatFunc>> {
        data.iter()
            .map(|row| row.iter().map(|&n| field.from_integer(n)).collect())
            .collect()
    }

    #[test]
    fn rref_is_canonical() {
        let f = q();
        let mut s1 = Subspace::new(f.clone(), 3);
        for v in vecs(&f, &[&[1, 2, 3], &[0, 1, 1]]) {
            s1.insert(v);
        }
        let mut s2 = Subspace::new(f.clone(), 3);
        for v in vecs(&f, &[&[1, 3, 4], &[2, 5, 7]]) {
            s2.insert(v);
        }
        assert_eq!(s1, s2);
        assert_eq!(s1.dim(), 2);
    }

    #[test]
    fn intersection() {
        let f = q();
        let mut a = Subspace::new(f.clone(), 3);
        for v in vecs(&f, &[&[1, 0, 0], &[0, 1, 0]]) {
            a.insert(v);
        }
        let mut b = Subspace::new(f.clone(), 3);
        for v in vecs(&f, &[&[0, 1, 1], &[1, 0, 1]]) {
            b.insert(v);
        }
        let i = a.intersect(&b);
        // span{e1,e2} ∩ span{(0,1,1),(1,0,1)} = span{(1,-1,0)}
        assert_eq!(i.dim(), 1);
        assert!(a.contains(&i.rows()[0]));
        assert!(b.contains(&i.rows()[0]));
        assert_eq!(i, b.intersect(&a));
    }

    #[test]
    fn solve() {
        let f = q();
        let cols = vecs(&f, &[&[1, 0, 1], &[0, 1, 1]]);
        let target: Vec<_> = [3, 4, 7].iter().map(|&n| f.from_integer(n)).collect();
        let sol = solve_combination(&f, &cols, &target).unwrap();
        assert_eq!(sol[0], f.from_integer(3));
        assert_eq!(sol[1], f.from_integer(4));
        let bad: Vec<_> = [1, 0, 0].iter().map(|&n| f.from_integer(n)).collect();
        assert!(solve_combination(&f, &cols, &bad).is_none());
    }
}
