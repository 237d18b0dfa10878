//! Dense matrices over the ground field: multiplication maps,
//! characteristic and minimal polynomials, and linear solving.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::One;

use crate::arith::modular::{bigint_residue, large_primes, Crt};
use crate::arith::{inv_mod, Field, FieldElement, UniPoly};
use crate::error::{Error, Result};
use crate::multipoly::{Monomial, MultiPoly};
use crate::reduction::QuotientPresentation;

/// Row-major dense matrix.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExactMatrix {
    field: Field,
    rows: usize,
    cols: usize,
    data: Vec<FieldElement>,
}

impl ExactMatrix {
    pub fn zeros(field: Field, rows: usize, cols: usize) -> Self {
        ExactMatrix {
            field,
            rows,
            cols,
            data: vec![field.zero(); rows * cols],
        }
    }

    pub fn identity(field: Field, n: usize) -> Self {
        let mut m = Self::zeros(field, n, n);
        for i in 0..n {
            m.set(i, i, field.one());
        }
        m
    }

    /// Builds a matrix from rows of equal length.
    pub fn from_rows(field: Field, rows: Vec<Vec<FieldElement>>) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        let nrows = rows.len();
        let mut data = Vec::with_capacity(nrows * cols);
        for r in rows {
            if r.len() != cols {
                return Err(Error::ArityMismatch {
                    expected: cols,
                    found: r.len(),
                });
            }
            if r.iter().any(|c| c.field() != field) {
                return Err(Error::FieldMismatch);
            }
            data.extend(r);
        }
        Ok(ExactMatrix {
            field,
            rows: nrows,
            cols,
            data,
        })
    }

    pub fn from_i64_rows(field: Field, rows: &[&[i64]]) -> Result<Self> {
        Self::from_rows(
            field,
            rows.iter()
                .map(|r| r.iter().map(|&x| field.from_i64(x)).collect())
                .collect(),
        )
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &FieldElement {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: FieldElement) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[FieldElement] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn transpose(&self) -> ExactMatrix {
        let mut t = Self::zeros(self.field, self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j).clone());
            }
        }
        t
    }

    pub fn checked_mul(&self, other: &ExactMatrix) -> Result<ExactMatrix> {
        if self.cols != other.rows {
            return Err(Error::ArityMismatch {
                expected: self.cols,
                found: other.rows,
            });
        }
        let mut out = Self::zeros(self.field, self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if !b.is_zero() {
                        out.data[i * other.cols + j] += a * b;
                    }
                }
            }
        }
        Ok(out)
    }

    /// Row vector times matrix, `v * M`.
    pub fn vec_mul(&self, v: &[FieldElement]) -> Vec<FieldElement> {
        assert_eq!(v.len(), self.rows, "vector length");
        let mut out = vec![self.field.zero(); self.cols];
        for (i, a) in v.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (o, b) in out.iter_mut().zip(self.row(i)) {
                if !b.is_zero() {
                    *o += a * b;
                }
            }
        }
        out
    }

    /// Matrix times column vector, `M * v`.
    pub fn mul_vec(&self, v: &[FieldElement]) -> Vec<FieldElement> {
        assert_eq!(v.len(), self.cols, "vector length");
        (0..self.rows)
            .map(|i| {
                let mut acc = self.field.zero();
                for (a, b) in self.row(i).iter().zip(v) {
                    if !a.is_zero() && !b.is_zero() {
                        acc += a * b;
                    }
                }
                acc
            })
            .collect()
    }

    /// `v * p(M)` by Horner's rule.
    pub fn vec_poly_action(&self, v: &[FieldElement], p: &UniPoly) -> Vec<FieldElement> {
        let mut acc = vec![self.field.zero(); self.cols];
        for c in p.coeffs().iter().rev() {
            acc = self.vec_mul(&acc);
            for (a, b) in acc.iter_mut().zip(v) {
                if !b.is_zero() {
                    *a += c * b;
                }
            }
        }
        acc
    }

    fn require_square(&self) -> Result<()> {
        if self.is_square() {
            Ok(())
        } else {
            Err(Error::NotSquare {
                rows: self.rows,
                cols: self.cols,
            })
        }
    }
}

impl fmt::Display for ExactMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            let cells: Vec<String> = self.row(i).iter().map(|c| c.to_string()).collect();
            writeln!(f, "[{}]", cells.join(", "))?;
        }
        Ok(())
    }
}

/// Matrix of multiplication by `r` on the staircase basis `B`: row `i`
/// holds the coordinates of `NF(r * B[i])`.
pub fn multiplication_matrix(r: &MultiPoly, qp: &QuotientPresentation) -> Result<ExactMatrix> {
    let nvars = qp.basis().nvars();
    if r.nvars() != nvars {
        return Err(Error::ArityMismatch {
            expected: nvars,
            found: r.nvars(),
        });
    }
    if r.field() != qp.field() {
        return Err(Error::FieldMismatch);
    }
    let order = qp.basis().order();
    let stair = qp.staircase();
    let mut by_degree: Vec<usize> = (0..stair.len()).collect();
    by_degree.sort_by_key(|&i| stair[i].degree());
    // NF(r*b) = NF(x_j * NF(r*b/x_j)), with b/x_j again standard.
    let mut reduced: Vec<Option<MultiPoly>> = vec![None; stair.len()];
    for i in by_degree {
        let b = &stair[i];
        let step = (0..nvars).find_map(|j| {
            let xj = Monomial::var(nvars, j);
            let prev = qp.index_of(&b.div(&xj)?)?;
            reduced[prev].as_ref().map(|p| (xj, p))
        });
        let nf = match step {
            Some((xj, p)) => qp.normal_form(&p.mul_monomial(&xj)),
            None => qp.normal_form(&r.with_order(order).mul_monomial(b)),
        };
        reduced[i] = Some(nf);
    }
    let rows = reduced
        .iter()
        .map(|p| qp.coordinates(p.as_ref().expect("every row reduced")))
        .collect();
    ExactMatrix::from_rows(qp.field(), rows)
}

/// Algorithm used for characteristic polynomials.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum CharPolyMethod {
    /// Hessenberg reduction over the field itself; over the rationals it is
    /// run on images modulo word-size primes and lifted by Chinese
    /// remaindering past a Hadamard bound.
    #[default]
    Hessenberg,
    /// Hessenberg reduction directly over the rationals.
    RationalHessenberg,
    /// Division-free Berkowitz recurrence.
    Berkowitz,
}

/// `det(t*I - M)`, monic of degree `dim M`.
pub fn char_poly(m: &ExactMatrix) -> Result<UniPoly> {
    char_poly_with(m, CharPolyMethod::Hessenberg)
}

pub fn char_poly_with(m: &ExactMatrix, method: CharPolyMethod) -> Result<UniPoly> {
    m.require_square()?;
    Ok(match method {
        CharPolyMethod::Hessenberg if m.field.is_rational() => modular_char_poly(m),
        CharPolyMethod::Hessenberg | CharPolyMethod::RationalHessenberg => hessenberg_char_poly(m),
        CharPolyMethod::Berkowitz => berkowitz_char_poly(m),
    })
}

/// Characteristic polynomial of a rational matrix from its images modulo
/// primes. With `D` the common denominator, `A = D*M` is integral and
/// `charpoly(M)(t) = D^-n * charpoly(A)(D*t)`. Every coefficient of
/// `charpoly(A)` is at most `2^n * prod max(1, |A_i|)` in absolute value.
fn modular_char_poly(m: &ExactMatrix) -> UniPoly {
    let n = m.rows;
    let field = m.field;
    let entries: Vec<&BigRational> = m
        .data
        .iter()
        .map(|c| c.as_rational().expect("rational matrix"))
        .collect();
    let denom = entries
        .iter()
        .fold(BigInt::one(), |acc, q| acc.lcm(q.denom()));
    let a: Vec<BigInt> = entries
        .iter()
        .map(|q| q.numer() * (&denom / q.denom()))
        .collect();

    let mut bound_bits: u64 = n as u64 + 2;
    for i in 0..n {
        let norm2: BigInt = a[i * n..(i + 1) * n].iter().map(|x| x * x).sum();
        bound_bits += norm2.bits().div_ceil(2);
    }

    let mut crt = Crt::new(n + 1);
    for prime in large_primes() {
        if crt.modulus.bits() > bound_bits {
            break;
        }
        let rows: Vec<Vec<u64>> = (0..n)
            .map(|i| a[i * n..(i + 1) * n].iter().map(|x| bigint_residue(x, prime)).collect())
            .collect();
        crt.add(prime, &hessenberg_mod(rows, prime));
    }

    let coeffs = crt.symmetric();
    let mut scale = BigInt::one();
    let mut out = vec![field.zero(); n + 1];
    for j in (0..=n).rev() {
        out[j] = FieldElement::Rational(BigRational::new(coeffs[j].clone(), scale.clone()));
        scale *= &denom;
    }
    UniPoly::new(field, out)
}

#[inline]
fn mul_mod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

#[inline]
fn sub_mod(a: u64, b: u64, p: u64) -> u64 {
    if a >= b {
        a - b
    } else {
        a + (p - b)
    }
}

#[inline]
fn add_mod(a: u64, b: u64, p: u64) -> u64 {
    let s = a as u128 + b as u128;
    (s % p as u128) as u64
}

/// Hessenberg characteristic polynomial over `F_p`, lowest degree first.
fn hessenberg_mod(mut h: Vec<Vec<u64>>, p: u64) -> Vec<u64> {
    let n = h.len();
    for c in 0..n.saturating_sub(2) {
        let Some(piv) = (c + 1..n).find(|&i| h[i][c] != 0) else {
            continue;
        };
        if piv != c + 1 {
            h.swap(piv, c + 1);
            for row in h.iter_mut() {
                row.swap(piv, c + 1);
            }
        }
        let t_inv = inv_mod(h[c + 1][c], p).expect("nonzero pivot");
        for i in c + 2..n {
            if h[i][c] == 0 {
                continue;
            }
            let u = mul_mod(h[i][c], t_inv, p);
            let (upper, lower) = h.split_at_mut(i);
            let src = &upper[c + 1];
            for (dst, &s) in lower[0].iter_mut().zip(src).skip(c) {
                *dst = sub_mod(*dst, mul_mod(u, s, p), p);
            }
            for row in h.iter_mut() {
                if row[i] != 0 {
                    row[c + 1] = add_mod(row[c + 1], mul_mod(u, row[i], p), p);
                }
            }
        }
    }

    let mut polys: Vec<Vec<u64>> = Vec::with_capacity(n + 1);
    polys.push(vec![1]);
    for k in 1..=n {
        let prev = &polys[k - 1];
        let d = h[k - 1][k - 1];
        let mut next = vec![0u64; k + 1];
        for (j, &c) in prev.iter().enumerate() {
            next[j + 1] = add_mod(next[j + 1], c, p);
            next[j] = sub_mod(next[j], mul_mod(d, c, p), p);
        }
        let mut t = 1u64;
        for i in 1..k {
            t = mul_mod(t, h[k - i][k - i - 1], p);
            if t == 0 {
                break;
            }
            let coef = mul_mod(t, h[k - i - 1][k - 1], p);
            if coef != 0 {
                for (j, &c) in polys[k - i - 1].iter().enumerate() {
                    next[j] = sub_mod(next[j], mul_mod(coef, c, p), p);
                }
            }
        }
        polys.push(next);
    }
    polys.pop().expect("n + 1 polynomials")
}

fn hessenberg_char_poly(m: &ExactMatrix) -> UniPoly {
    let field = m.field;
    let n = m.rows;
    let mut h: Vec<Vec<FieldElement>> = (0..n).map(|i| m.row(i).to_vec()).collect();

    for c in 0..n.saturating_sub(2) {
        let Some(piv) = (c + 1..n).find(|&i| !h[i][c].is_zero()) else {
            continue;
        };
        if piv != c + 1 {
            h.swap(piv, c + 1);
            for row in h.iter_mut() {
                row.swap(piv, c + 1);
            }
        }
        let t_inv = h[c + 1][c].inv().expect("nonzero pivot");
        for i in c + 2..n {
            if h[i][c].is_zero() {
                continue;
            }
            let u = &h[i][c] * &t_inv;
            let (upper, lower) = h.split_at_mut(i);
            let src = &upper[c + 1];
            for (dst, s) in lower[0].iter_mut().zip(src).skip(c) {
                if !s.is_zero() {
                    *dst -= &u * s;
                }
            }
            for row in h.iter_mut() {
                if !row[i].is_zero() {
                    let add = &u * &row[i];
                    row[c + 1] += add;
                }
            }
        }
    }

    let x = UniPoly::x(field);
    let mut p: Vec<UniPoly> = Vec::with_capacity(n + 1);
    p.push(UniPoly::one(field));
    for k in 1..=n {
        let mut next = &(&x - &UniPoly::constant(h[k - 1][k - 1].clone())) * &p[k - 1];
        let mut t = field.one();
        for i in 1..k {
            t = &t * &h[k - i][k - i - 1];
            if t.is_zero() {
                break;
            }
            let coef = &t * &h[k - i - 1][k - 1];
            if !coef.is_zero() {
                next = &next - &p[k - i - 1].scale(&coef);
            }
        }
        p.push(next);
    }
    p.pop().expect("p[n] exists")
}

fn berkowitz_char_poly(m: &ExactMatrix) -> UniPoly {
    let field = m.field;
    let n = m.rows;
    // coefficients highest degree first for the trailing principal submatrix
    let mut vect: Vec<FieldElement> = vec![field.one()];
    for s in (0..n).rev() {
        let size = n - s;
        // partition the submatrix starting at (s, s)
        let a = m.get(s, s);
        let r: Vec<FieldElement> = (s + 1..n).map(|j| m.get(s, j).clone()).collect();
        let mut col: Vec<FieldElement> = (s + 1..n).map(|i| m.get(i, s).clone()).collect();
        let mut diags = vec![field.one(), -a];
        for _ in 0..size.saturating_sub(1) {
            let mut d = field.zero();
            for (x, y) in r.iter().zip(&col) {
                d += x * y;
            }
            diags.push(-d);
            col = (s + 1..n)
                .map(|i| {
                    let mut acc = field.zero();
                    for (j, c) in (s + 1..n).zip(&col) {
                        if !c.is_zero() {
                            acc += m.get(i, j) * c;
                        }
                    }
                    acc
                })
                .collect();
        }
        // Toeplitz (size+1) x size lower triangular times vect (length size)
        let mut next = vec![field.zero(); size + 1];
        for (i, out) in next.iter_mut().enumerate() {
            for (j, v) in vect.iter().enumerate().take(i + 1) {
                if i - j < diags.len() && !v.is_zero() {
                    *out += &diags[i - j] * v;
                }
            }
        }
        vect = next;
    }
    vect.reverse();
    UniPoly::new(field, vect)
}

/// Monic minimal polynomial, as the lcm of the annihilators of the unit
/// vectors under `v -> v * M`.
pub fn min_poly(m: &ExactMatrix) -> Result<UniPoly> {
    m.require_square()?;
    let field = m.field;
    let n = m.rows;
    let mut acc = UniPoly::one(field);
    for j in 0..n {
        if acc.degree() == Some(n) {
            break;
        }
        let mut e = vec![field.zero(); n];
        e[j] = field.one();
        if acc.degree() > Some(0) && m.vec_poly_action(&e, &acc).iter().all(FieldElement::is_zero) {
            continue;
        }
        let ann = vector_annihilator(m, e);
        let g = acc.gcd(&ann);
        acc = (&acc * &ann).div_exact(&g).expect("gcd divides").monic();
    }
    Ok(acc)
}

/// Monic polynomial `q` of least degree with `v * q(M) = 0`.
pub fn vector_annihilator(m: &ExactMatrix, v: Vec<FieldElement>) -> UniPoly {
    let field = m.field;
    let x = UniPoly::x(field);
    // echelon rows: (vector, pivot, polynomial producing it)
    let mut echelon: Vec<(Vec<FieldElement>, usize, UniPoly)> = Vec::new();
    let mut w = v;
    let mut comb = UniPoly::one(field);
    loop {
        for (b, piv, bc) in &echelon {
            if w[*piv].is_zero() {
                continue;
            }
            let f = w[*piv].clone();
            for (wi, bi) in w.iter_mut().zip(b) {
                if !bi.is_zero() {
                    *wi -= &f * bi;
                }
            }
            comb = &comb - &bc.scale(&f);
        }
        let Some(piv) = w.iter().position(|c| !c.is_zero()) else {
            return comb.monic();
        };
        let inv = w[piv].inv().expect("nonzero pivot");
        let wn: Vec<FieldElement> = w.iter().map(|c| c * &inv).collect();
        let cn = comb.scale(&inv);
        w = m.vec_mul(&wn);
        comb = &cn * &x;
        echelon.push((wn, piv, cn));
    }
}

/// Solves `M x = b` for square `M`. A singular matrix yields
/// [`Error::Singular`] carrying a nonzero kernel vector.
pub fn solve(m: &ExactMatrix, b: &[FieldElement]) -> Result<Vec<FieldElement>> {
    m.require_square()?;
    let n = m.rows;
    if b.len() != n {
        return Err(Error::ArityMismatch {
            expected: n,
            found: b.len(),
        });
    }
    let field = m.field;
    let mut a: Vec<Vec<FieldElement>> = (0..n)
        .map(|i| {
            let mut r = m.row(i).to_vec();
            r.push(b[i].clone());
            r
        })
        .collect();
    let mut pivots: Vec<usize> = Vec::new();
    let mut row = 0;
    for col in 0..n {
        let Some(p) = (row..n).find(|&i| !a[i][col].is_zero()) else {
            continue;
        };
        a.swap(row, p);
        let inv = a[row][col].inv().expect("nonzero pivot");
        for c in a[row].iter_mut() {
            *c = &*c * &inv;
        }
        let prow = a[row].clone();
        for (i, r) in a.iter_mut().enumerate() {
            if i == row || r[col].is_zero() {
                continue;
            }
            let f = r[col].clone();
            for (x, y) in r.iter_mut().zip(&prow) {
                if !y.is_zero() {
                    *x -= &f * y;
                }
            }
        }
        pivots.push(col);
        row += 1;
    }
    if pivots.len() < n {
        let free = (0..n).find(|c| !pivots.contains(c)).expect("rank deficient");
        let mut kernel = vec![field.zero(); n];
        kernel[free] = field.one();
        for (i, &pc) in pivots.iter().enumerate() {
            kernel[pc] = -&a[i][free];
        }
        return Err(Error::Singular { kernel });
    }
    let mut x = vec![field.zero(); n];
    for (i, &pc) in pivots.iter().enumerate() {
        x[pc] = a[i][n].clone();
    }
    Ok(x)
}
