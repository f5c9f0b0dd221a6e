//! Exact Gaussian elimination over the rationals and over number fields
//! spanned by declared constants.

use rug::Rational;
use std::collections::BTreeSet;

use super::basis::{Basis, SymbolicReal, ONE};
use crate::error::{Error, Result};

/// Field operations used by the elimination routines.
pub trait FieldOps {
    type E: Clone + PartialEq;
    fn zero(&self) -> Self::E;
    fn one(&self) -> Self::E;
    fn is_zero(&self, x: &Self::E) -> bool;
    fn add(&self, x: &Self::E, y: &Self::E) -> Result<Self::E>;
    fn neg(&self, x: &Self::E) -> Self::E;
    fn mul(&self, x: &Self::E, y: &Self::E) -> Result<Self::E>;
    fn inv(&self, x: &Self::E) -> Result<Self::E>;
    fn sub(&self, x: &Self::E, y: &Self::E) -> Result<Self::E> {
        self.add(x, &self.neg(y))
    }
}

/// The rationals.
pub struct Q;

impl FieldOps for Q {
    type E = Rational;
    fn zero(&self) -> Rational {
        Rational::new()
    }
    fn one(&self) -> Rational {
        Rational::from(1)
    }
    fn is_zero(&self, x: &Rational) -> bool {
        *x == 0
    }
    fn add(&self, x: &Rational, y: &Rational) -> Result<Rational> {
        Ok(Rational::from(x + y))
    }
    fn neg(&self, x: &Rational) -> Rational {
        Rational::from(-x)
    }
    fn mul(&self, x: &Rational, y: &Rational) -> Result<Rational> {
        Ok(Rational::from(x * y))
    }
    fn inv(&self, x: &Rational) -> Result<Rational> {
        Ok(Rational::from(x.recip_ref()))
    }
}

/// The field `Q(symbols)`, where `symbols` is closed under the product table.
pub struct NumberField<'a> {
    pub basis: &'a Basis,
    pub symbols: BTreeSet<String>,
}

impl<'a> NumberField<'a> {
    /// Smallest field containing the given symbols, if the product table closes it.
    pub fn generated_by<'s>(basis: &'a Basis, start: impl IntoIterator<Item = &'s str>) -> Result<Self> {
        let symbols = basis.closure(start)?;
        for s in &symbols {
            if !basis.is_independent(s) {
                return Err(Error::Unknown(format!("constant `{s}` is not declared independent")));
            }
        }
        Ok(NumberField { basis, symbols })
    }

    /// Coordinate names, unit first.
    pub fn coordinates(&self) -> Vec<String> {
        std::iter::once(ONE.to_string()).chain(self.symbols.iter().cloned()).collect()
    }
}

impl FieldOps for NumberField<'_> {
    type E = SymbolicReal;
    fn zero(&self) -> SymbolicReal {
        SymbolicReal::zero()
    }
    fn one(&self) -> SymbolicReal {
        SymbolicReal::one()
    }
    fn is_zero(&self, x: &SymbolicReal) -> bool {
        x.is_zero()
    }
    fn add(&self, x: &SymbolicReal, y: &SymbolicReal) -> Result<SymbolicReal> {
        Ok(x.add(y))
    }
    fn neg(&self, x: &SymbolicReal) -> SymbolicReal {
        x.neg()
    }
    fn mul(&self, x: &SymbolicReal, y: &SymbolicReal) -> Result<SymbolicReal> {
        if let Some(q) = x.as_rational() {
            return Ok(y.scale(&q));
        }
        if let Some(q) = y.as_rational() {
            return Ok(x.scale(&q));
        }
        self.basis.mul(x, y)
    }
    fn inv(&self, x: &SymbolicReal) -> Result<SymbolicReal> {
        self.basis
            .inverse_in(x, &self.symbols)?
            .ok_or_else(|| Error::Precondition("inverse of zero".into()))
    }
}

/// Dense matrix stored by rows.
#[derive(Clone, Debug, PartialEq)]
pub struct Matrix<E> {
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<Vec<E>>,
}

pub type QMatrix = Matrix<Rational>;

impl<E: Clone> Matrix<E> {
    pub fn filled(rows: usize, cols: usize, z: E) -> Self {
        Matrix { rows, cols, data: vec![vec![z; cols]; rows] }
    }

    pub fn from_rows(cols: usize, data: Vec<Vec<E>>) -> Self {
        Matrix { rows: data.len(), cols, data }
    }

    pub fn get(&self, i: usize, j: usize) -> &E {
        &self.data[i][j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: E) {
        self.data[i][j] = v;
    }

    pub fn transpose(&self) -> Self {
        let mut data = Vec::with_capacity(self.cols);
        for j in 0..self.cols {
            data.push((0..self.rows).map(|i| self.data[i][j].clone()).collect());
        }
        Matrix { rows: self.cols, cols: self.rows, data }
    }
}

impl QMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix::filled(rows, cols, Rational::new())
    }

    pub fn solve(&self, rhs: &[Rational]) -> Option<Vec<Rational>> {
        solve(&Q, self, rhs).ok().flatten()
    }

    pub fn nullspace(&self) -> Vec<Vec<Rational>> {
        nullspace(&Q, self).expect("rational elimination cannot fail")
    }
}

/// Reduced row echelon form in place; returns pivot columns.
pub fn rref<F: FieldOps>(f: &F, m: &mut Matrix<F::E>) -> Result<Vec<usize>> {
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..m.cols {
        if r == m.rows {
            break;
        }
        let Some(p) = (r..m.rows).find(|&i| !f.is_zero(&m.data[i][c])) else { continue };
        m.data.swap(r, p);
        let inv = f.inv(&m.data[r][c])?;
        for j in c..m.cols {
            m.data[r][j] = f.mul(&m.data[r][j], &inv)?;
        }
        for i in 0..m.rows {
            if i != r && !f.is_zero(&m.data[i][c]) {
                let factor = m.data[i][c].clone();
                for j in c..m.cols {
                    let t = f.mul(&factor, &m.data[r][j])?;
                    m.data[i][j] = f.sub(&m.data[i][j], &t)?;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    Ok(pivots)
}

pub fn rank<F: FieldOps>(f: &F, m: &Matrix<F::E>) -> Result<usize> {
    let mut a = m.clone();
    Ok(rref(f, &mut a)?.len())
}

/// Basis of the right kernel, one vector per free column.
pub fn nullspace<F: FieldOps>(f: &F, m: &Matrix<F::E>) -> Result<Vec<Vec<F::E>>> {
    let mut a = m.clone();
    let pivots = rref(f, &mut a)?;
    let mut out = Vec::new();
    for free in (0..m.cols).filter(|c| !pivots.contains(c)) {
        let mut v = vec![f.zero(); m.cols];
        v[free] = f.one();
        for (row, &pc) in pivots.iter().enumerate() {
            v[pc] = f.neg(&a.data[row][free]);
        }
        out.push(v);
    }
    Ok(out)
}

/// Some solution of `m x = rhs`, or `None` when inconsistent.
pub fn solve<F: FieldOps>(f: &F, m: &Matrix<F::E>, rhs: &[F::E]) -> Result<Option<Vec<F::E>>> {
    let mut aug = Matrix::filled(m.rows, m.cols + 1, f.zero());
    for i in 0..m.rows {
        for j in 0..m.cols {
            aug.data[i][j] = m.data[i][j].clone();
        }
        aug.data[i][m.cols] = rhs[i].clone();
    }
    let pivots = rref(f, &mut aug)?;
    if pivots.contains(&m.cols) {
        return Ok(None);
    }
    let mut x = vec![f.zero(); m.cols];
    for (row, &pc) in pivots.iter().enumerate() {
        x[pc] = aug.data[row][m.cols].clone();
    }
    Ok(Some(x))
}

/// Rational vectors lying in the column span of a number-field matrix.
///
/// Returns a rational basis of `{z ∈ Q^rows : z ∈ span_F(columns of m)}`.
pub fn rational_points_of_span(field: &NumberField<'_>, m: &Matrix<SymbolicReal>) -> Result<Vec<Vec<Rational>>> {
    // left annihilator: rows v with v m = 0
    let ann = nullspace(field, &m.transpose())?;
    let coords = field.coordinates();
    // each annihilator row gives one rational equation per coordinate
    let mut eqs: Vec<Vec<Rational>> = Vec::new();
    for v in &ann {
        for c in &coords {
            eqs.push(v.iter().map(|x| x.coord(c)).collect());
        }
    }
    if eqs.is_empty() {
        return Ok((0..m.rows)
            .map(|i| {
                let mut e = vec![Rational::new(); m.rows];
                e[i] = Rational::from(1);
                e
            })
            .collect());
    }
    Ok(QMatrix::from_rows(m.rows, eqs).nullspace())
}

#[cfg(test)]
mod tests {
    use super::*;
    use rug::Float;

    fn q(n: i64, d: i64) -> Rational {
        Rational::from((n, d))
    }

    #[test]
    fn rational_kernel() {
        let m = QMatrix::from_rows(3, vec![vec![q(1, 1), q(2, 1), q(3, 1)], vec![q(2, 1), q(4, 1), q(6, 1)]]);
        let k = m.nullspace();
        assert_eq!(k.len(), 2);
        for v in &k {
            let s: Rational = v.iter().zip(&m.data[0]).map(|(a, b)| Rational::from(a * b)).sum();
            assert_eq!(s, 0);
        }
    }

    #[test]
    fn solve_inconsistent() {
        let m = QMatrix::from_rows(1, vec![vec![q(0, 1)]]);
        assert!(m.solve(&[q(1, 1)]).is_none());
    }

    #[test]
    fn sqrt2_field_elimination() {
        let mut b = Basis::new();
        let s = Float::with_val(400, 2).sqrt().to_string_radix(10, Some(90));
        b.declare("s", &s, true).unwrap();
        b.declare_product("s", "s", SymbolicReal::int(2)).unwrap();
        let f = NumberField::generated_by(&b, ["s"]).unwrap();
        // columns (1, s) and (s, 2) are dependent over Q(sqrt2)
        let m = Matrix::from_rows(2, vec![vec![SymbolicReal::one(), SymbolicReal::symbol("s")], vec![
            SymbolicReal::symbol("s"),
            SymbolicReal::int(2),
        ]]);
        assert_eq!(rank(&f, &m).unwrap(), 1);
        let k = nullspace(&f, &m).unwrap();
        assert_eq!(k.len(), 1);
        // the span of column (1, s) contains no nonzero rational vector
        let col = Matrix::from_rows(1, vec![vec![SymbolicReal::one()], vec![SymbolicReal::symbol("s")]]);
        assert!(rational_points_of_span(&f, &col).unwrap().is_empty());
    }
}
