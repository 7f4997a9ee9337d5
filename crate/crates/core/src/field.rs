//! Exact linear algebra over Q or a prime field F_p. A single element
//! representation (BigRational, integral residues for F_p) keeps the
//! code monomorphic; the `Field` value decides the arithmetic.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::matrix::IntegerMatrix;
use crate::nerve::ChainComplex;

#[derive(Clone, PartialEq, Eq, Debug)]
pub enum Field {
    Rational,
    Prime(BigInt),
}

impl Field {
    pub fn prime(p: u64) -> Field {
        Field::Prime(BigInt::from(p))
    }

    pub fn char(&self) -> Option<&BigInt> {
        match self {
            Field::Rational => None,
            Field::Prime(p) => Some(p),
        }
    }

    fn reduce(&self, x: BigRational) -> BigRational {
        match self {
            Field::Rational => x,
            Field::Prime(p) => {
                debug_assert!(x.denom().is_one());
                let mut r = x.numer() % p;
                if r.is_negative() {
                    r += p;
                }
                BigRational::from_integer(r)
            }
        }
    }

    pub fn from_int(&self, x: &BigInt) -> BigRational {
        self.reduce(BigRational::from_integer(x.clone()))
    }

    pub fn add(&self, a: &BigRational, b: &BigRational) -> BigRational {
        self.reduce(a + b)
    }

    pub fn sub(&self, a: &BigRational, b: &BigRational) -> BigRational {
        self.reduce(a - b)
    }

    pub fn mul(&self, a: &BigRational, b: &BigRational) -> BigRational {
        self.reduce(a * b)
    }

    pub fn neg(&self, a: &BigRational) -> BigRational {
        self.reduce(-a)
    }

    pub fn inv(&self, a: &BigRational) -> Result<BigRational> {
        if a.is_zero() {
            return Err(Error::Input("inverse of zero".into()));
        }
        match self {
            Field::Rational => Ok(a.recip()),
            Field::Prime(p) => {
                let (g, x) = ext_gcd(&a.numer().clone(), p);
                if !g.is_one() {
                    return Err(Error::Input(format!("{} not invertible mod {}", a, p)));
                }
                Ok(self.reduce(BigRational::from_integer(x)))
            }
        }
    }
}

// returns (gcd, x) with x*a + y*m = gcd for some y
fn ext_gcd(a: &BigInt, m: &BigInt) -> (BigInt, BigInt) {
    let (mut r0, mut r1) = (a.clone(), m.clone());
    let (mut s0, mut s1) = (BigInt::one(), BigInt::zero());
    while !r1.is_zero() {
        let q = &r0 / &r1;
        let r = &r0 - &q * &r1;
        r0 = std::mem::replace(&mut r1, r);
        let s = &s0 - &q * &s1;
        s0 = std::mem::replace(&mut s1, s);
    }
    if r0.is_negative() {
        (-r0, -s0)
    } else {
        (r0, s0)
    }
}

/// Dense matrix over the given field, row major.
#[derive(Clone, PartialEq, Debug)]
pub struct FieldMatrix {
    pub field: Field,
    rows: usize,
    cols: usize,
    data: Vec<BigRational>,
}

impl FieldMatrix {
    pub fn zero(field: Field, rows: usize, cols: usize) -> Self {
        FieldMatrix {
            field,
            rows,
            cols,
            data: vec![BigRational::zero(); rows * cols],
        }
    }

    pub fn identity(field: Field, n: usize) -> Self {
        let mut m = FieldMatrix::zero(field, n, n);
        for i in 0..n {
            m.set(i, i, BigRational::one());
        }
        m
    }

    pub fn from_integer_matrix(field: &Field, m: &IntegerMatrix) -> Self {
        let mut out = FieldMatrix::zero(field.clone(), m.rows(), m.cols());
        for i in 0..m.rows() {
            for j in 0..m.cols() {
                out.set(i, j, field.from_int(m.get(i, j)));
            }
        }
        out
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &BigRational {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: BigRational) {
        self.data[i * self.cols + j] = v;
    }

    pub fn column(&self, j: usize) -> Vec<BigRational> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn from_columns(field: Field, rows: usize, cols: &[Vec<BigRational>]) -> Self {
        let mut m = FieldMatrix::zero(field, rows, cols.len());
        for (j, c) in cols.iter().enumerate() {
            assert_eq!(c.len(), rows);
            for (i, v) in c.iter().enumerate() {
                m.set(i, j, v.clone());
            }
        }
        m
    }

    pub fn mul(&self, other: &FieldMatrix) -> Result<FieldMatrix> {
        if self.cols != other.rows || self.field != other.field {
            return Err(Error::DimensionMismatch("field matrix product".into()));
        }
        let f = &self.field;
        let mut out = FieldMatrix::zero(f.clone(), self.rows, other.cols);
        for i in 0..self.rows {
            for j in 0..other.cols {
                let mut acc = BigRational::zero();
                for k in 0..self.cols {
                    acc = f.add(&acc, &f.mul(self.get(i, k), other.get(k, j)));
                }
                out.set(i, j, acc);
            }
        }
        Ok(out)
    }

    pub fn mul_vec(&self, v: &[BigRational]) -> Result<Vec<BigRational>> {
        if v.len() != self.cols {
            return Err(Error::DimensionMismatch("field matrix * vector".into()));
        }
        let f = &self.field;
        Ok((0..self.rows)
            .map(|i| {
                let mut acc = BigRational::zero();
                for k in 0..self.cols {
                    acc = f.add(&acc, &f.mul(self.get(i, k), &v[k]));
                }
                acc
            })
            .collect())
    }

    pub fn hstack(&self, other: &FieldMatrix) -> Result<FieldMatrix> {
        if self.rows != other.rows || self.field != other.field {
            return Err(Error::DimensionMismatch("field hstack".into()));
        }
        let mut out = FieldMatrix::zero(self.field.clone(), self.rows, self.cols + other.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.set(i, j, self.get(i, j).clone());
            }
            for j in 0..other.cols {
                out.set(i, self.cols + j, other.get(i, j).clone());
            }
        }
        Ok(out)
    }

    /// In-place reduced column echelon form; returns pivot rows per
    /// surviving column. Zero columns are removed.
    pub fn column_echelon(&mut self) -> Vec<usize> {
        let f = self.field.clone();
        let mut pivots: Vec<usize> = Vec::new();
        let mut next_col = 0usize;
        for row in 0..self.rows {
            // find a column at or after next_col with nonzero entry in row
            let found = (next_col..self.cols).find(|&j| !self.get(row, j).is_zero());
            let Some(j0) = found else { continue };
            self.swap_cols(next_col, j0);
            let inv = f.inv(self.get(row, next_col)).expect("nonzero pivot");
            for i in 0..self.rows {
                let v = f.mul(self.get(i, next_col), &inv);
                self.set(i, next_col, v);
            }
            for j in 0..self.cols {
                if j == next_col || self.get(row, j).is_zero() {
                    continue;
                }
                let c = self.get(row, j).clone();
                for i in 0..self.rows {
                    let v = f.sub(self.get(i, j), &f.mul(self.get(i, next_col), &c));
                    self.set(i, j, v);
                }
            }
            pivots.push(row);
            next_col += 1;
            if next_col == self.cols {
                break;
            }
        }
        // drop trailing zero columns
        self.truncate_cols(next_col);
        pivots
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for i in 0..self.rows {
            self.data.swap(i * self.cols + a, i * self.cols + b);
        }
    }

    fn truncate_cols(&mut self, keep: usize) {
        if keep == self.cols {
            return;
        }
        let mut data = Vec::with_capacity(self.rows * keep);
        for i in 0..self.rows {
            for j in 0..keep {
                data.push(self.data[i * self.cols + j].clone());
            }
        }
        self.cols = keep;
        self.data = data;
    }

    pub fn rank(&self) -> usize {
        let mut m = self.clone();
        m.column_echelon().len()
    }

    /// One solution of self * x = b, if any (Gaussian elimination on the
    /// augmented matrix, transposed to reuse column operations).
    pub fn solve(&self, b: &[BigRational]) -> Option<Vec<BigRational>> {
        assert_eq!(b.len(), self.rows);
        let f = &self.field;
        // kernel of [self | -b]: any kernel vector with nonzero last
        // coordinate yields a solution after rescaling
        let mut aug = FieldMatrix::zero(f.clone(), self.rows, self.cols + 1);
        for i in 0..self.rows {
            for j in 0..self.cols {
                aug.set(i, j, self.get(i, j).clone());
            }
            aug.set(i, self.cols, f.neg(&b[i]));
        }
        let ker = aug.kernel();
        for j in 0..ker.cols() {
            let k = ker.column(j);
            let last = &k[self.cols];
            if !last.is_zero() {
                let inv = f.inv(last).expect("nonzero");
                return Some((0..self.cols).map(|i| f.mul(&k[i], &inv)).collect());
            }
        }
        None
    }

    /// Basis of the right kernel, as columns.
    pub fn kernel(&self) -> FieldMatrix {
        // echelonize [M; I] by columns; kernel columns are those whose
        // M-part vanished
        let f = &self.field;
        let mut stacked = FieldMatrix::zero(f.clone(), self.rows + self.cols, self.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                stacked.set(i, j, self.get(i, j).clone());
            }
        }
        for j in 0..self.cols {
            stacked.set(self.rows + j, j, BigRational::one());
        }
        // eliminate on the M-rows only
        let mut pivcols = 0usize;
        for row in 0..self.rows {
            let found = (pivcols..stacked.cols).find(|&j| !stacked.get(row, j).is_zero());
            let Some(j0) = found else { continue };
            stacked.swap_cols(pivcols, j0);
            let inv = f.inv(stacked.get(row, pivcols)).expect("nonzero pivot");
            for i in 0..stacked.rows {
                let v = f.mul(stacked.get(i, pivcols), &inv);
                stacked.set(i, pivcols, v);
            }
            for j in 0..stacked.cols {
                if j == pivcols || stacked.get(row, j).is_zero() {
                    continue;
                }
                let c = stacked.get(row, j).clone();
                for i in 0..stacked.rows {
                    let v = f.sub(stacked.get(i, j), &f.mul(stacked.get(i, pivcols), &c));
                    stacked.set(i, j, v);
                }
            }
            pivcols += 1;
            if pivcols == stacked.cols {
                break;
            }
        }
        let mut cols = Vec::new();
        'outer: for j in pivcols..stacked.cols {
            for i in 0..self.rows {
                if !stacked.get(i, j).is_zero() {
                    continue 'outer;
                }
            }
            cols.push((0..self.cols).map(|i| stacked.get(self.rows + i, j).clone()).collect());
        }
        FieldMatrix::from_columns(f.clone(), self.cols, &cols)
    }
}

/// A linear subspace of F^n in reduced column echelon basis (canonical,
/// so equality of subspaces is equality of the struct).
#[derive(Clone, PartialEq, Debug)]
pub struct Subspace {
    field: Field,
    ambient: usize,
    basis: FieldMatrix,
    pivots: Vec<usize>,
}

impl Subspace {
    pub fn from_columns(field: Field, ambient: usize, cols: &[Vec<BigRational>]) -> Subspace {
        let mut basis = FieldMatrix::from_columns(field.clone(), ambient, cols);
        let pivots = basis.column_echelon();
        Subspace {
            field,
            ambient,
            basis,
            pivots,
        }
    }

    pub fn from_matrix(m: &FieldMatrix) -> Subspace {
        let cols: Vec<Vec<BigRational>> = (0..m.cols()).map(|j| m.column(j)).collect();
        Subspace::from_columns(m.field.clone(), m.rows(), &cols)
    }

    pub fn zero(field: Field, ambient: usize) -> Subspace {
        Subspace::from_columns(field, ambient, &[])
    }

    pub fn full(field: Field, ambient: usize) -> Subspace {
        Subspace::from_matrix(&FieldMatrix::identity(field, ambient))
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn dim(&self) -> usize {
        self.basis.cols()
    }

    pub fn basis(&self) -> &FieldMatrix {
        &self.basis
    }

    /// Coordinates of v in the echelon basis, or None if outside.
    pub fn coordinates(&self, v: &[BigRational]) -> Option<Vec<BigRational>> {
        assert_eq!(v.len(), self.ambient);
        let f = &self.field;
        let mut rem: Vec<BigRational> = v.to_vec();
        let mut coords = vec![BigRational::zero(); self.dim()];
        for (j, &pr) in self.pivots.iter().enumerate() {
            let c = rem[pr].clone();
            if c.is_zero() {
                continue;
            }
            coords[j] = c.clone();
            for i in 0..self.ambient {
                rem[i] = f.sub(&rem[i], &f.mul(self.basis.get(i, j), &c));
            }
        }
        if rem.iter().all(|x| x.is_zero()) {
            Some(coords)
        } else {
            None
        }
    }

    pub fn contains(&self, v: &[BigRational]) -> bool {
        self.coordinates(v).is_some()
    }

    pub fn contains_subspace(&self, other: &Subspace) -> bool {
        (0..other.dim()).all(|j| self.contains(&other.basis.column(j)))
    }

    pub fn sum(&self, other: &Subspace) -> Subspace {
        let mut cols: Vec<Vec<BigRational>> =
            (0..self.dim()).map(|j| self.basis.column(j)).collect();
        cols.extend((0..other.dim()).map(|j| other.basis.column(j)));
        Subspace::from_columns(self.field.clone(), self.ambient, &cols)
    }

    pub fn intersection(&self, other: &Subspace) -> Subspace {
        // kernel of [A | B]: the A-part of each kernel vector gives a
        // combination lying in both spans
        let joined = match self.basis.hstack(&other.basis) {
            Ok(j) => j,
            Err(_) => return Subspace::zero(self.field.clone(), self.ambient),
        };
        let ker = joined.kernel();
        let cols: Vec<Vec<BigRational>> = (0..ker.cols())
            .map(|j| {
                let k = ker.column(j);
                let mut v = vec![BigRational::zero(); self.ambient];
                for c in 0..self.dim() {
                    for i in 0..self.ambient {
                        v[i] = self
                            .field
                            .add(&v[i], &self.field.mul(self.basis.get(i, c), &k[c]));
                    }
                }
                v
            })
            .collect();
        Subspace::from_columns(self.field.clone(), self.ambient, &cols)
    }

    /// Preimage M^{-1}(self) inside the source of M.
    pub fn preimage(&self, m: &FieldMatrix) -> Result<Subspace> {
        if m.rows() != self.ambient {
            return Err(Error::DimensionMismatch("subspace preimage".into()));
        }
        // kernel of [M | basis]: M x = basis y, keep x
        let joined = m.hstack(&self.basis)?;
        let ker = joined.kernel();
        let cols: Vec<Vec<BigRational>> = (0..ker.cols())
            .map(|j| ker.column(j)[..m.cols()].to_vec())
            .collect();
        Ok(Subspace::from_columns(self.field.clone(), m.cols(), &cols))
    }

    /// Image M(self) inside the target of M.
    pub fn image(&self, m: &FieldMatrix) -> Result<Subspace> {
        if m.cols() != self.ambient {
            return Err(Error::DimensionMismatch("subspace image".into()));
        }
        let cols: Vec<Vec<BigRational>> = (0..self.dim())
            .map(|j| m.mul_vec(&self.basis.column(j)).unwrap())
            .collect();
        Ok(Subspace::from_columns(self.field.clone(), m.rows(), &cols))
    }

    /// dim(self / other); other must be contained in self.
    pub fn quotient_dim(&self, other: &Subspace) -> Result<usize> {
        if !self.contains_subspace(other) {
            return Err(Error::NotContained("subspace quotient".into()));
        }
        Ok(self.dim() - other.dim())
    }

    /// Columns extending `other`'s basis to a basis of self: coset
    /// representatives for self/other.
    pub fn quotient_representatives(&self, other: &Subspace) -> Result<Vec<Vec<BigRational>>> {
        if !self.contains_subspace(other) {
            return Err(Error::NotContained("subspace quotient".into()));
        }
        let mut reps = Vec::new();
        let mut span = other.clone();
        for j in 0..self.dim() {
            let v = self.basis.column(j);
            if !span.contains(&v) {
                reps.push(v.clone());
                span = span.sum(&Subspace::from_columns(
                    self.field.clone(),
                    self.ambient,
                    &[v],
                ));
            }
        }
        Ok(reps)
    }
}

/// dim_F H_n(C ⊗ F) for each degree of C, by rank counting.
pub fn field_homology_dims(c: &ChainComplex, field: &Field) -> Vec<(i64, usize)> {
    let mut out = Vec::new();
    for n in c.lo()..=c.hi() {
        let dn = FieldMatrix::from_integer_matrix(field, &c.d(n)).rank();
        let dn1 = FieldMatrix::from_integer_matrix(field, &c.d(n + 1)).rank();
        let dim = c.rank(n) - dn - dn1;
        if dim > 0 {
            out.push((n, dim));
        }
    }
    out
}
