//! Dense matrices over GF(2^w).

use std::fmt;
use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::gf::{Field, Symbol};
use crate::word::SymbolWord;

/// Row-major dense matrix over a shared [`Field`].
#[derive(Clone, PartialEq, Eq)]
pub struct Matrix {
    field: &'static Field,
    rows: usize,
    cols: usize,
    data: Vec<Symbol>,
}

/// Result of [`Matrix::row_reduce`].
#[derive(Debug, Clone)]
pub struct Echelon {
    /// Reduced row-echelon form; rows past `rank` are zero.
    pub matrix: Matrix,
    pub rank: usize,
    pub pivots: Vec<usize>,
}

/// Outcome of [`Matrix::solve_erasures`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ErasureSolution {
    /// The erased columns are independent; this is the unique completion.
    Unique(SymbolWord),
    /// Several codewords agree with the known symbols.
    Undetermined,
}

impl Matrix {
    pub fn zeros(field: &'static Field, rows: usize, cols: usize) -> Self {
        Matrix {
            field,
            rows,
            cols,
            data: vec![0; rows * cols],
        }
    }

    pub fn identity(field: &'static Field, n: usize) -> Self {
        let mut m = Self::zeros(field, n, n);
        for i in 0..n {
            m.data[i * n + i] = 1;
        }
        m
    }

    pub fn from_vec(
        field: &'static Field,
        rows: usize,
        cols: usize,
        data: Vec<Symbol>,
    ) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::LengthMismatch {
                expected: rows * cols,
                actual: data.len(),
            });
        }
        if let Some(&bad) = data.iter().find(|&&x| !field.contains(x)) {
            return Err(Error::InvalidParameter(format!("{bad} is not in {field}")));
        }
        Ok(Matrix {
            field,
            rows,
            cols,
            data,
        })
    }

    pub fn from_rows(field: &'static Field, rows: &[Vec<Symbol>]) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        let mut data = Vec::with_capacity(rows.len() * cols);
        for r in rows {
            if r.len() != cols {
                return Err(Error::LengthMismatch {
                    expected: cols,
                    actual: r.len(),
                });
            }
            data.extend_from_slice(r);
        }
        Self::from_vec(field, rows.len(), cols, data)
    }

    /// The `s x w` Vandermonde block whose entry `(r, c)` is `alpha^(c (v + r))`.
    ///
    /// Row `r` evaluates `1, x, x^2, ...` at `x = alpha^(v + r)`. With `s <= w`
    /// and `w` no larger than the order of alpha, the block has rank `s`.
    pub fn vandermonde(field: &'static Field, s: usize, w: usize, v: usize) -> Result<Self> {
        if s == 0 || w == 0 {
            return Err(Error::InvalidParameter(format!(
                "vandermonde block needs s >= 1 and w >= 1 (got s={s}, w={w})"
            )));
        }
        if s > field.alpha_order() {
            return Err(Error::InvalidParameter(format!(
                "s = {s} exceeds the order {} of alpha",
                field.alpha_order()
            )));
        }
        let mut m = Self::zeros(field, s, w);
        for r in 0..s {
            for c in 0..w {
                m.data[r * w + c] = field.alpha_pow((c * (v + r)) as i64);
            }
        }
        Ok(m)
    }

    pub fn field(&self) -> &'static Field {
        self.field
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn data(&self) -> &[Symbol] {
        &self.data
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> Symbol {
        self.data[r * self.cols + c]
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, v: Symbol) {
        self.data[r * self.cols + c] = v;
    }

    pub fn row(&self, r: usize) -> &[Symbol] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn column(&self, c: usize) -> Vec<Symbol> {
        (0..self.rows).map(|r| self.get(r, c)).collect()
    }

    fn same_field(&self, other: &Matrix) -> Result<()> {
        if self.field != other.field {
            return Err(Error::ContextMismatch);
        }
        Ok(())
    }

    /// Kronecker product: block `(i, j)` of the result is `self[i, j] * other`.
    pub fn kronecker(&self, other: &Matrix) -> Result<Matrix> {
        self.same_field(other)?;
        let f = self.field;
        let rows = self.rows * other.rows;
        let cols = self.cols * other.cols;
        let mut out = Self::zeros(f, rows, cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                let a = self.get(i, j);
                if a == 0 {
                    continue;
                }
                let mul = f.mul_row(a);
                for k in 0..other.rows {
                    let dst = (i * other.rows + k) * cols + j * other.cols;
                    for (d, &b) in out.data[dst..dst + other.cols].iter_mut().zip(other.row(k)) {
                        *d = mul[b as usize];
                    }
                }
            }
        }
        Ok(out)
    }

    /// Stacks blocks vertically. All blocks must share the column count.
    pub fn vstack(field: &'static Field, cols: usize, blocks: &[Matrix]) -> Result<Matrix> {
        let mut data = Vec::new();
        let mut rows = 0;
        for b in blocks {
            if b.field != field {
                return Err(Error::ContextMismatch);
            }
            if b.cols != cols {
                return Err(Error::LengthMismatch {
                    expected: cols,
                    actual: b.cols,
                });
            }
            data.extend_from_slice(&b.data);
            rows += b.rows;
        }
        Ok(Matrix {
            field,
            rows,
            cols,
            data,
        })
    }

    pub fn transpose(&self) -> Matrix {
        let mut out = Self::zeros(self.field, self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                out.data[c * self.rows + r] = self.get(r, c);
            }
        }
        out
    }

    pub fn select_rows(&self, idx: &[usize]) -> Matrix {
        let mut data = Vec::with_capacity(idx.len() * self.cols);
        for &r in idx {
            data.extend_from_slice(self.row(r));
        }
        Matrix {
            field: self.field,
            rows: idx.len(),
            cols: self.cols,
            data,
        }
    }

    pub fn select_columns(&self, idx: &[usize]) -> Matrix {
        let mut out = Self::zeros(self.field, self.rows, idx.len());
        for r in 0..self.rows {
            for (j, &c) in idx.iter().enumerate() {
                out.data[r * idx.len() + j] = self.get(r, c);
            }
        }
        out
    }

    /// `self * v`.
    pub fn mul_vec(&self, v: &[Symbol]) -> Result<Vec<Symbol>> {
        if v.len() != self.cols {
            return Err(Error::LengthMismatch {
                expected: self.cols,
                actual: v.len(),
            });
        }
        Ok((0..self.rows)
            .map(|r| {
                self.row(r)
                    .iter()
                    .zip(v)
                    .fold(0, |acc, (&a, &b)| acc ^ self.field.mul(a, b))
            })
            .collect())
    }

    pub fn mul(&self, other: &Matrix) -> Result<Matrix> {
        self.same_field(other)?;
        if self.cols != other.rows {
            return Err(Error::LengthMismatch {
                expected: self.cols,
                actual: other.rows,
            });
        }
        let mut out = Self::zeros(self.field, self.rows, other.cols);
        for r in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(r, k);
                let dst = &mut out.data[r * other.cols..(r + 1) * other.cols];
                self.field.axpy(dst, a, other.row(k));
            }
        }
        Ok(out)
    }

    /// Gauss-Jordan elimination with leftmost-nonzero pivoting.
    pub fn row_reduce(&self) -> Echelon {
        let f = self.field;
        let mut m = self.clone();
        let cols = m.cols;
        let mut pivots = Vec::new();
        let mut rank = 0;
        for c in 0..cols {
            if rank == m.rows {
                break;
            }
            let Some(p) = (rank..m.rows).find(|&r| m.get(r, c) != 0) else {
                continue;
            };
            if p != rank {
                for j in 0..cols {
                    m.data.swap(p * cols + j, rank * cols + j);
                }
            }
            let inv = f.inv(m.get(rank, c)).expect("pivot is nonzero");
            f.scale(&mut m.data[rank * cols..(rank + 1) * cols], inv);
            let pivot_row = m.row(rank).to_vec();
            for r in 0..m.rows {
                if r != rank {
                    let factor = m.get(r, c);
                    f.axpy(&mut m.data[r * cols..(r + 1) * cols], factor, &pivot_row);
                }
            }
            pivots.push(c);
            rank += 1;
        }
        Echelon {
            matrix: m,
            rank,
            pivots,
        }
    }

    pub fn rank(&self) -> usize {
        self.row_reduce().rank
    }

    /// Indices of a maximal independent set of rows, keeping earlier rows first.
    pub fn independent_rows(&self) -> Vec<usize> {
        let mut basis = VectorBasis::new(self.field, self.cols);
        (0..self.rows)
            .filter(|&r| basis.insert(self.row(r)))
            .collect()
    }

    pub fn nonzero_count(&self) -> usize {
        self.data.iter().filter(|&&x| x != 0).count()
    }

    /// Fraction of nonzero entries.
    pub fn density(&self) -> f64 {
        if self.data.is_empty() {
            return 0.0;
        }
        self.nonzero_count() as f64 / self.data.len() as f64
    }

    /// Fills the erased positions of `word` so that `self * word = 0`.
    ///
    /// `self` must be a parity-check matrix of the word's code. The system is
    /// solved over the erased columns only.
    pub fn solve_erasures(&self, word: &SymbolWord) -> Result<ErasureSolution> {
        if word.len() != self.cols {
            return Err(Error::LengthMismatch {
                expected: self.cols,
                actual: word.len(),
            });
        }
        let f = self.field;
        let erased = word.erased_positions();
        let e = erased.len();

        // Augmented system [H_E | H_K y]; characteristic 2 so no sign flip.
        let mut aug = Self::zeros(f, self.rows, e + 1);
        for r in 0..self.rows {
            let row = self.row(r);
            let mut syn = 0;
            for (c, &h) in row.iter().enumerate() {
                if !word.erased[c] {
                    syn ^= f.mul(h, word.symbols[c]);
                }
            }
            for (j, &c) in erased.iter().enumerate() {
                aug.data[r * (e + 1) + j] = row[c];
            }
            aug.data[r * (e + 1) + e] = syn;
        }
        let ech = aug.row_reduce();
        if ech.pivots.last() == Some(&e) {
            return Err(Error::InconsistentWord);
        }
        if ech.rank < e {
            return Ok(ErasureSolution::Undetermined);
        }
        let mut out = word.clone();
        for (i, &c) in erased.iter().enumerate() {
            // Full column rank: pivot i sits in column i.
            out.symbols[c] = ech.matrix.get(i, e);
            out.erased[c] = false;
        }
        Ok(ErasureSolution::Unique(out))
    }

    /// CSV text: a `# gf=2^w rows=R cols=C` header, then one row per line.
    pub fn to_csv(&self) -> String {
        let mut out = format!(
            "# gf=2^{} rows={} cols={}\n",
            self.field.w(),
            self.rows,
            self.cols
        );
        for r in 0..self.rows {
            let line: Vec<String> = self.row(r).iter().map(|x| x.to_string()).collect();
            out.push_str(&line.join(","));
            out.push('\n');
        }
        out
    }

    pub fn from_csv(text: &str) -> Result<Matrix> {
        let mut lines = text.lines();
        let header = lines
            .next()
            .ok_or_else(|| Error::Parse("empty matrix file".into()))?;
        let mut w = None;
        let mut rows = None;
        let mut cols = None;
        for tok in header.trim_start_matches('#').split_whitespace() {
            let (key, val) = tok
                .split_once('=')
                .ok_or_else(|| Error::Parse(format!("bad header token {tok:?}")))?;
            let bad = || Error::Parse(format!("bad header value {tok:?}"));
            match key {
                "gf" => {
                    let exp = val.strip_prefix("2^").ok_or_else(bad)?;
                    w = Some(exp.parse::<u32>().map_err(|_| bad())?);
                }
                "rows" => rows = Some(val.parse::<usize>().map_err(|_| bad())?),
                "cols" => cols = Some(val.parse::<usize>().map_err(|_| bad())?),
                _ => return Err(bad()),
            }
        }
        let missing = || Error::Parse("incomplete matrix header".into());
        let field = Field::get(w.ok_or_else(missing)?)?;
        let (rows, cols) = (rows.ok_or_else(missing)?, cols.ok_or_else(missing)?);
        let mut data = Vec::with_capacity(rows * cols);
        for line in lines.filter(|l| !l.trim().is_empty()) {
            for tok in line.split(',') {
                let v: usize = tok
                    .trim()
                    .parse()
                    .map_err(|_| Error::Parse(format!("bad entry {tok:?}")))?;
                if v >= field.q() {
                    return Err(Error::Parse(format!("entry {v} not in {field}")));
                }
                data.push(v as Symbol);
            }
        }
        Self::from_vec(field, rows, cols, data)
    }

    /// Sparse support listing: `rows cols`, then the 1-based nonzero columns of each row.
    pub fn to_alist(&self) -> String {
        let mut out = format!("{} {}\n", self.rows, self.cols);
        for r in 0..self.rows {
            let idx: Vec<String> = self
                .row(r)
                .iter()
                .enumerate()
                .filter(|(_, &x)| x != 0)
                .map(|(c, _)| (c + 1).to_string())
                .collect();
            let _ = writeln!(out, "{}", idx.join(" "));
        }
        out
    }
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Matrix {}x{} over {}", self.rows, self.cols, self.field)?;
        for r in 0..self.rows {
            writeln!(f, "  {:?}", self.row(r))?;
        }
        Ok(())
    }
}

/// Incrementally maintained basis of a subspace of `GF(q)^dim`.
///
/// Each stored vector is normalised to 1 at its pivot and is zero at the
/// pivots of every earlier vector, so reduction is a single forward pass.
#[derive(Debug, Clone)]
pub struct VectorBasis {
    field: &'static Field,
    dim: usize,
    pivots: Vec<usize>,
    vectors: Vec<Vec<Symbol>>,
    scratch: Vec<Symbol>,
}

impl VectorBasis {
    pub fn new(field: &'static Field, dim: usize) -> Self {
        VectorBasis {
            field,
            dim,
            pivots: Vec::new(),
            vectors: Vec::new(),
            scratch: vec![0; dim],
        }
    }

    pub fn rank(&self) -> usize {
        self.vectors.len()
    }

    pub fn clear(&mut self) {
        self.pivots.clear();
        self.vectors.clear();
    }

    /// Adds `v` if it is independent of the current basis; returns whether it was.
    pub fn insert(&mut self, v: &[Symbol]) -> bool {
        debug_assert_eq!(v.len(), self.dim);
        let f = self.field;
        self.scratch.copy_from_slice(v);
        for (p, b) in self.pivots.iter().zip(&self.vectors) {
            let c = self.scratch[*p];
            if c != 0 {
                f.axpy(&mut self.scratch, c, b);
            }
        }
        let Some(p) = self.scratch.iter().position(|&x| x != 0) else {
            return false;
        };
        let inv = f.inv(self.scratch[p]).expect("nonzero pivot");
        let mut stored = self.scratch.clone();
        f.scale(&mut stored, inv);
        self.pivots.push(p);
        self.vectors.push(stored);
        true
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gf8() -> &'static Field {
        Field::get(3).unwrap()
    }

    #[test]
    fn vandermonde_rows() {
        let f = gf8();
        let h = Matrix::vandermonde(f, 1, 7, 0).unwrap();
        assert_eq!(h.data(), &[1; 7]);

        let h = Matrix::vandermonde(f, 2, 3, 0).unwrap();
        assert_eq!(h.row(0), &[1, 1, 1]);
        assert_eq!(h.row(1), &[1, f.alpha(), f.alpha_pow(2)]);

        let h = Matrix::vandermonde(f, 1, 5, 1).unwrap();
        let expect: Vec<u8> = (0..5).map(|c| f.alpha_pow(c)).collect();
        assert_eq!(h.row(0), &expect[..]);

        assert!(Matrix::vandermonde(f, 8, 8, 0).is_err());
        assert!(Matrix::vandermonde(f, 0, 3, 0).is_err());
    }

    #[test]
    fn vandermonde_prefix_identity() {
        let f = gf8();
        for (s, s2, w, v) in [(1, 2, 7, 0), (2, 3, 6, 1), (3, 1, 4, 2)] {
            let top = Matrix::vandermonde(f, s, w, v).unwrap();
            let bottom = Matrix::vandermonde(f, s2, w, v + s).unwrap();
            let whole = Matrix::vandermonde(f, s + s2, w, v).unwrap();
            assert_eq!(Matrix::vstack(f, w, &[top, bottom]).unwrap(), whole);
        }
    }

    #[test]
    fn kronecker_cases() {
        let f = gf8();
        let b = Matrix::vandermonde(f, 2, 3, 1).unwrap();
        assert_eq!(Matrix::identity(f, 1).kronecker(&b).unwrap(), b);

        let ones = Matrix::vandermonde(f, 1, 2, 0).unwrap();
        let k = ones.kronecker(&b).unwrap();
        assert_eq!((k.rows(), k.cols()), (2, 6));
        for r in 0..2 {
            assert_eq!(&k.row(r)[..3], b.row(r));
            assert_eq!(&k.row(r)[3..], b.row(r));
        }

        let h = Matrix::identity(f, 6)
            .kronecker(&Matrix::vandermonde(f, 1, 7, 0).unwrap())
            .unwrap();
        assert_eq!((h.rows(), h.cols()), (6, 42));
        for r in 0..6 {
            for c in 0..42 {
                assert_eq!(h.get(r, c), u8::from(c / 7 == r));
            }
        }

        let g = Field::get(4).unwrap();
        assert!(matches!(
            b.kronecker(&Matrix::identity(g, 2)),
            Err(Error::ContextMismatch)
        ));
    }

    #[test]
    fn identity_rank() {
        let f = gf8();
        let e = Matrix::identity(f, 5).row_reduce();
        assert_eq!(e.rank, 5);
        assert_eq!(e.pivots, vec![0, 1, 2, 3, 4]);
    }

    #[test]
    fn solve_erasures_on_rs_row_code() {
        // [7,5] code with parity check H_{2,7,0}; any two erasures recover.
        let f = gf8();
        let h = Matrix::vandermonde(f, 2, 7, 0).unwrap();
        // Codeword: solve for the last two symbols from arbitrary data.
        let mut w = SymbolWord::new(vec![3, 1, 4, 1, 5, 0, 0]);
        w.erase(&[5, 6]).unwrap();
        let ErasureSolution::Unique(c) = h.solve_erasures(&w).unwrap() else {
            panic!("two erasures must be solvable");
        };
        assert!(h.mul_vec(&c.symbols).unwrap().iter().all(|&x| x == 0));
        for a in 0..7 {
            for b in a + 1..7 {
                let mut x = c.clone();
                x.erase(&[a, b]).unwrap();
                assert_eq!(
                    h.solve_erasures(&x).unwrap(),
                    ErasureSolution::Unique(c.clone())
                );
            }
        }
        // No erasures: unchanged.
        assert_eq!(
            h.solve_erasures(&c).unwrap(),
            ErasureSolution::Unique(c.clone())
        );
        // Three erasures exceed the rank.
        let mut x = c.clone();
        x.erase(&[0, 1, 2]).unwrap();
        assert_eq!(h.solve_erasures(&x).unwrap(), ErasureSolution::Undetermined);
        // Corrupting a known symbol with one erasure is detected.
        let mut y = c.clone();
        y.symbols[0] ^= 1;
        y.erase(&[6]).unwrap();
        assert!(matches!(h.solve_erasures(&y), Err(Error::InconsistentWord)));
    }

    #[test]
    fn csv_round_trip_and_alist() {
        let f = gf8();
        let h = Matrix::identity(f, 2)
            .kronecker(&Matrix::vandermonde(f, 1, 3, 1).unwrap())
            .unwrap();
        let csv = h.to_csv();
        assert!(csv.starts_with("# gf=2^3 rows=2 cols=6\n"));
        assert_eq!(Matrix::from_csv(&csv).unwrap(), h);
        assert_eq!(h.to_alist(), "2 6\n1 2 3\n4 5 6\n");
        assert!(Matrix::from_csv("# gf=2^3 rows=1 cols=2\n1,9\n").is_err());
    }

    #[test]
    fn vector_basis_tracks_rank() {
        let f = gf8();
        let mut b = VectorBasis::new(f, 3);
        assert!(b.insert(&[1, 1, 1]));
        assert!(b.insert(&[1, 2, 4]));
        assert!(!b.insert(&[0, 3, 5]));
        assert!(!b.insert(&[0, 0, 0]));
        assert!(b.insert(&[0, 0, 1]));
        assert_eq!(b.rank(), 3);
    }
}
