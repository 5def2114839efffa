//! Parity-check matrices for codes of any depth.
//!
//! For a node with children `C_0 > ... > C_{t-1}` and block length `L`:
//!
//! ```text
//! H = [ I_m (x) H(C_0)
//!       V(ŝ_i, m, 0) (x) D(C_{i-1}, C_i)     for i = 1..t-1
//!       V(ŝ_t, m, 0) (x) I_L ]
//! ```
//!
//! where `V(s, w, v)` is the Vandermonde block of [`Matrix::vandermonde`] and
//! `D(a, b)` holds the checks that cut the subcode `b` out of `a`.

use crate::codespec::{tail_sums, Code, CodeSpec};
use crate::error::{Error, Result};
use crate::gf::Field;
use crate::matrix::{ErasureSolution, Matrix};
use crate::word::SymbolWord;

#[derive(Debug, Clone)]
pub struct ParityCheck {
    /// The stacked matrix as constructed; may have dependent rows.
    pub h: Matrix,
    /// Full-rank subset of the rows of `h`, once [`ParityCheck::reduce`] has run.
    pub reduced: Option<Matrix>,
    pub spec_digest: String,
}

pub fn build_parity_check(spec: &CodeSpec) -> ParityCheck {
    ParityCheck {
        h: parity_matrix(spec.field(), spec.code()),
        reduced: None,
        spec_digest: spec.digest(),
    }
}

fn vstack_nonempty(field: &'static Field, cols: usize, blocks: Vec<Matrix>) -> Matrix {
    let blocks: Vec<Matrix> = blocks.into_iter().filter(|b| b.rows() > 0).collect();
    Matrix::vstack(field, cols, &blocks).expect("blocks share width and field")
}

fn vandermonde(field: &'static Field, s: usize, w: usize, v: usize) -> Matrix {
    Matrix::vandermonde(field, s, w, v).expect("validated specs keep s below the order of alpha")
}

fn kron(a: &Matrix, b: &Matrix) -> Matrix {
    a.kronecker(b).expect("same field")
}

/// Parity-check matrix of a (valid) code.
pub fn parity_matrix(field: &'static Field, code: &Code) -> Matrix {
    match code {
        Code::Leaf { n, u } => {
            if *u == 0 {
                Matrix::zeros(field, 0, *n)
            } else {
                vandermonde(field, *u, *n, 0)
            }
        }
        Code::Node { s, children } => {
            let m = code.m();
            let l = code.block_len();
            let t = children.len();
            let hat = tail_sums(s);
            let mut blocks = vec![kron(
                &Matrix::identity(field, m),
                &parity_matrix(field, &children[0]),
            )];
            for i in 1..t {
                if hat[i] > 0 {
                    let d = difference(field, &children[i - 1], &children[i]);
                    blocks.push(kron(&vandermonde(field, hat[i], m, 0), &d));
                }
            }
            if hat[t] > 0 {
                blocks.push(kron(
                    &vandermonde(field, hat[t], m, 0),
                    &Matrix::identity(field, l),
                ));
            }
            vstack_nonempty(field, code.length(), blocks)
        }
    }
}

/// Checks that, stacked under `H(a)`, span the checks of the subcode `b`.
fn difference(field: &'static Field, a: &Code, b: &Code) -> Matrix {
    match (a, b) {
        (Code::Leaf { n, u: ua }, Code::Leaf { u: ub, .. }) => {
            if ub > ua {
                vandermonde(field, ub - ua, *n, *ua)
            } else {
                Matrix::zeros(field, 0, *n)
            }
        }
        (
            Code::Node {
                s: sa,
                children: ga,
            },
            Code::Node { s: sb, .. },
        ) => {
            let m = a.m();
            let l = a.block_len();
            let t = ga.len();
            let (ha, hb) = (tail_sums(sa), tail_sums(sb));
            let mut blocks = Vec::new();
            for j in 1..=t {
                if hb[j] <= ha[j] {
                    continue;
                }
                let inner = if j < t {
                    difference(field, &ga[j - 1], &ga[j])
                } else {
                    Matrix::identity(field, l)
                };
                blocks.push(kron(&vandermonde(field, hb[j] - ha[j], m, ha[j]), &inner));
            }
            vstack_nonempty(field, a.length(), blocks)
        }
        _ => unreachable!("validated siblings share one shape"),
    }
}

impl ParityCheck {
    /// Keeps the earliest linearly independent rows.
    pub fn reduce(mut self) -> ParityCheck {
        let rows = self.h.independent_rows();
        self.reduced = Some(self.h.select_rows(&rows));
        self
    }

    /// The reduced matrix if available, otherwise the constructed one.
    pub fn matrix(&self) -> &Matrix {
        self.reduced.as_ref().unwrap_or(&self.h)
    }

    pub fn rank(&self) -> usize {
        match &self.reduced {
            Some(r) => r.rows(),
            None => self.h.rank(),
        }
    }

    /// Fraction of nonzero entries in the constructed matrix.
    pub fn density(&self) -> f64 {
        self.h.density()
    }

    pub fn syndrome(&self, word: &SymbolWord) -> Result<Vec<u8>> {
        self.matrix().mul_vec(&word.symbols)
    }
}

/// Erasure decoding by solving the parity checks over the erased columns.
pub fn pc_decode(pc: &ParityCheck, word: &SymbolWord) -> Result<ErasureSolution> {
    if word.len() != pc.h.cols() {
        return Err(Error::LengthMismatch {
            expected: pc.h.cols(),
            actual: word.len(),
        });
    }
    pc.matrix().solve_erasures(word)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn leaves(us: &[usize]) -> Vec<Code> {
        us.iter().map(|&u| Code::leaf(7, u)).collect()
    }

    #[test]
    fn leaf_matrix_is_vandermonde() {
        let f = Field::get(3).unwrap();
        let h = parity_matrix(f, &Code::leaf(7, 6));
        assert_eq!(h, Matrix::vandermonde(f, 6, 7, 0).unwrap());
        assert_eq!(parity_matrix(f, &Code::leaf(7, 0)).rows(), 0);
    }

    #[test]
    fn two_layer_shape_and_rank() {
        let f = Field::get(3).unwrap();
        let code = Code::node(vec![1, 1, 1], leaves(&[1, 2]));
        let spec = CodeSpec::new(f, code).unwrap();
        let pc = build_parity_check(&spec).reduce();
        assert_eq!((pc.h.rows(), pc.h.cols()), (12, 21));
        assert_eq!(pc.rank(), 10);
        assert_eq!(pc.rank(), spec.length() - spec.dimension());
    }
}
