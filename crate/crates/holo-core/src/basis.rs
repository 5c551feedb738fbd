//! Bases and the transformations between general signatures and standard
//! signatures: M^{ox n} G = underG for generators and underR M^{ox n} = R
//! for recognizers, together with the matrix-form transport identity
//! underG(t) = M G(t) (M^T)^{ox (n-1)}.

use thiserror::Error;

use crate::matrix::Matrix;
use crate::scalar::Scalar;
use crate::signature::{Role, Signature, SignatureError};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum BasisError {
    #[error("basis must be 2^l x k, got {rows}x{cols} for l={l}")]
    BadShape { rows: usize, cols: usize, l: usize },
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("basis has rank {rank} < k = {k}; transform requires full rank")]
    DegenerateBasis { rank: usize, k: usize },
    #[error(transparent)]
    Signature(#[from] SignatureError),
}

/// A basis of size l on domain size k: a 2^l x k matrix whose rows are
/// indexed by patterns alpha in {0,1}^l and columns by domain elements.
#[derive(Debug, Clone)]
pub struct Basis {
    l: usize,
    k: usize,
    matrix: Matrix,
    full_rank: bool,
}

/// Outcome of the recognizer realizability search. The solution space of
/// underR M^{ox n} = R can be affine; only the canonical particular
/// solution from exact elimination is tried, so a failed check reports
/// Unknown rather than false.
#[derive(Debug, Clone)]
pub enum RecognizerRealizability {
    Realizable(Signature),
    Unknown,
}

impl Basis {
    pub fn new(l: usize, k: usize, matrix: Matrix) -> Result<Self, BasisError> {
        if matrix.rows() != (1 << l) || matrix.cols() != k {
            return Err(BasisError::BadShape { rows: matrix.rows(), cols: matrix.cols(), l });
        }
        let full_rank = matrix.rank() == k;
        Ok(Basis { l, k, matrix, full_rank })
    }

    pub fn identity(k_log2: usize) -> Basis {
        let k = 1 << k_log2;
        Basis::new(k_log2, k, Matrix::identity(k)).expect("square identity basis")
    }

    pub fn l(&self) -> usize {
        self.l
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn matrix(&self) -> &Matrix {
        &self.matrix
    }

    pub fn is_full_rank(&self) -> bool {
        self.full_rank
    }

    fn require_full_rank(&self) -> Result<(), BasisError> {
        if !self.full_rank {
            return Err(BasisError::DegenerateBasis { rank: self.matrix.rank(), k: self.k });
        }
        Ok(())
    }

    /// Standard signature of a generator: the column vector M^{ox n} G
    /// re-indexed as an arity n*l pattern tensor.
    pub fn generator_to_standard(&self, g: &Signature) -> Result<Signature, BasisError> {
        self.require_full_rank()?;
        if g.k() != self.k {
            return Err(BasisError::ShapeMismatch(format!(
                "generator domain {} vs basis k {}",
                g.k(),
                self.k
            )));
        }
        let n = g.arity();
        let big = self.matrix.kronecker_power(n);
        let entries = big.mul_vec(g.entries());
        Ok(Signature::new(2, n * self.l, Role::Generator, entries)?)
    }

    /// Recognizer signature on domain k from a standard signature of arity
    /// n*l: the row-vector product underR M^{ox n}.
    pub fn recognizer_from_standard(&self, under_r: &Signature) -> Result<Signature, BasisError> {
        self.require_full_rank()?;
        if under_r.k() != 2 {
            return Err(BasisError::ShapeMismatch(format!(
                "standard signature must have k=2, got {}",
                under_r.k()
            )));
        }
        if self.l == 0 || under_r.arity() % self.l != 0 {
            return Err(BasisError::ShapeMismatch(format!(
                "arity {} not divisible by l={}",
                under_r.arity(),
                self.l
            )));
        }
        let n = under_r.arity() / self.l;
        let big = self.matrix.kronecker_power(n);
        // row vector times matrix: entries R_j = sum_alpha underR_alpha M[alpha, j]
        let total = self.k.pow(n as u32);
        let mut entries = Vec::with_capacity(total);
        for j in 0..total {
            let mut acc = Scalar::zero();
            for alpha in 0..under_r.entries().len() {
                let u = under_r.flat(alpha);
                if !u.is_zero() {
                    let m = big.at(alpha, j);
                    if !m.is_zero() {
                        acc += &(u * m);
                    }
                }
            }
            entries.push(acc);
        }
        Ok(Signature::new(self.k, n, Role::Recognizer, entries)?)
    }

    /// The transport identity route: M G(t) (M^T)^{ox (n-1)}. Equals
    /// matrix_form(generator_to_standard(G), t) laid out over 2^l blocks.
    pub fn transported_matrix_form(&self, g: &Signature, t: usize) -> Result<Matrix, BasisError> {
        self.require_full_rank()?;
        if g.k() != self.k {
            return Err(BasisError::ShapeMismatch(format!(
                "generator domain {} vs basis k {}",
                g.k(),
                self.k
            )));
        }
        let gt = g.matrix_form(t)?;
        let right = self.matrix.transpose().kronecker_power(g.arity() - 1);
        Ok(self.matrix.mul(&gt).mul(&right))
    }

    /// Generator realizability over this basis: Theorem 2 makes it
    /// decidable via the Parity Condition and the Matchgate Identities.
    pub fn generator_realizable(&self, g: &Signature) -> Result<bool, BasisError> {
        let under = self.generator_to_standard(g)?;
        Ok(under.is_standard_signature()?)
    }

    /// Recognizer realizability: solves underR M^{ox n} = R for the
    /// canonical particular solution and runs the verifier on it.
    pub fn recognizer_realizable(
        &self,
        r: &Signature,
    ) -> Result<RecognizerRealizability, BasisError> {
        self.require_full_rank()?;
        if r.k() != self.k {
            return Err(BasisError::ShapeMismatch(format!(
                "recognizer domain {} vs basis k {}",
                r.k(),
                self.k
            )));
        }
        let n = r.arity();
        let big = self.matrix.kronecker_power(n); // 2^{nl} x k^n
        // underR . big = r  <=>  big^T . underR^T = r^T
        let system = big.transpose();
        let Some(solution) = solve_particular(&system, r.entries()) else {
            return Ok(RecognizerRealizability::Unknown);
        };
        let candidate = Signature::new(2, n * self.l, Role::Recognizer, solution)?;
        if candidate.is_standard_signature()? {
            Ok(RecognizerRealizability::Realizable(candidate))
        } else {
            Ok(RecognizerRealizability::Unknown)
        }
    }
}

/// A particular solution of A x = b by exact Gaussian elimination, free
/// variables pinned to zero. None when the system is inconsistent.
pub fn solve_particular(a: &Matrix, b: &[Scalar]) -> Option<Vec<Scalar>> {
    assert_eq!(a.rows(), b.len());
    let rows = a.rows();
    let cols = a.cols();
    let mut m: Vec<Vec<Scalar>> = (0..rows)
        .map(|i| {
            let mut row: Vec<Scalar> = a.row(i).to_vec();
            row.push(b[i].clone());
            row
        })
        .collect();
    let mut pivot_cols = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        let d = m[r][c].clone();
        for j in c..=cols {
            m[r][j] = &m[r][j] / &d;
        }
        for i in 0..rows {
            if i != r && !m[i][c].is_zero() {
                let f = m[i][c].clone();
                for j in c..=cols {
                    let sub = &f * &m[r][j];
                    m[i][j] = &m[i][j] - &sub;
                }
            }
        }
        pivot_cols.push(c);
        r += 1;
    }
    // inconsistent when a zero row has nonzero rhs
    for row in m.iter().skip(r) {
        if !row[cols].is_zero() {
            return None;
        }
    }
    let mut x = vec![Scalar::zero(); cols];
    for (row_idx, &c) in pivot_cols.iter().enumerate() {
        x[c] = m[row_idx][cols].clone();
    }
    Some(x)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pattern::Pattern;

    fn sig(k: usize, n: usize, role: Role, vals: &[i64]) -> Signature {
        Signature::new(k, n, role, vals.iter().map(|&v| Scalar::from_int(v)).collect()).unwrap()
    }

    fn hadamard_basis() -> Basis {
        Basis::new(1, 2, Matrix::from_int_rows(&[&[1, 1], &[1, -1]])).unwrap()
    }

    #[test]
    fn identity_basis_is_noop() {
        let b = Basis::identity(1);
        let g = sig(2, 2, Role::Generator, &[3, 1, 4, 1]);
        assert_eq!(b.generator_to_standard(&g).unwrap().entries(), g.entries());
        let r = sig(2, 2, Role::Recognizer, &[2, 7, 1, 8]);
        assert_eq!(b.recognizer_from_standard(&r).unwrap().entries(), r.entries());
    }

    #[test]
    fn hadamard_small_products() {
        let b = hadamard_basis();
        let g = sig(2, 1, Role::Generator, &[1, 0]);
        assert_eq!(b.generator_to_standard(&g).unwrap().entries(), sig(2, 1, Role::Generator, &[1, 1]).entries());
        let under_r = sig(2, 1, Role::Recognizer, &[1, 1]);
        assert_eq!(
            b.recognizer_from_standard(&under_r).unwrap().entries(),
            sig(2, 1, Role::Recognizer, &[2, 0]).entries()
        );
    }

    /// Independent blockwise reference for the generator transform.
    fn blockwise_generator(b: &Basis, g: &Signature) -> Vec<Scalar> {
        let n = g.arity();
        let l = b.l();
        let k = b.k();
        let total = 1usize << (n * l);
        let mut out = Vec::with_capacity(total);
        for flat in 0..total {
            let pat = Pattern::from_index(n * l, flat);
            let mut acc = Scalar::zero();
            let mut digits = vec![0usize; n];
            loop {
                let mut term = g.at(&digits).clone();
                if !term.is_zero() {
                    for (i, &j) in digits.iter().enumerate() {
                        let alpha = pat.block(i + 1, l);
                        term *= b.matrix().at(alpha.index(), j);
                    }
                    acc += &term;
                }
                // advance mixed-radix digits
                let mut pos = n;
                loop {
                    if pos == 0 {
                        break;
                    }
                    pos -= 1;
                    digits[pos] += 1;
                    if digits[pos] < k {
                        break;
                    }
                    digits[pos] = 0;
                }
                if digits.iter().all(|&d| d == 0) {
                    break;
                }
            }
            out.push(acc);
        }
        out
    }

    #[test]
    fn blockwise_and_kronecker_agree() {
        // k=3, l=2, n=2 random-ish exact instance
        let m = Matrix::from_int_rows(&[&[1, 0, 2], &[0, 1, -1], &[3, 1, 0], &[-1, 2, 1]]);
        let b = Basis::new(2, 3, m).unwrap();
        let g = sig(3, 2, Role::Generator, &[1, -2, 3, 0, 5, -1, 2, 2, -4]);
        let fast = b.generator_to_standard(&g).unwrap();
        assert_eq!(fast.entries(), blockwise_generator(&b, &g).as_slice());
    }

    /// Independent blockwise reference for the recognizer transform.
    fn blockwise_recognizer(b: &Basis, under_r: &Signature) -> Vec<Scalar> {
        let l = b.l();
        let k = b.k();
        let n = under_r.arity() / l;
        let total = k.pow(n as u32);
        let mut out = Vec::with_capacity(total);
        let mut digits = vec![0usize; n];
        for flat in 0..total {
            let mut rem = flat;
            for t in (0..n).rev() {
                digits[t] = rem % k;
                rem /= k;
            }
            let mut acc = Scalar::zero();
            for alpha_idx in 0..under_r.entries().len() {
                let u = under_r.flat(alpha_idx);
                if u.is_zero() {
                    continue;
                }
                let pat = Pattern::from_index(n * l, alpha_idx);
                let mut term = u.clone();
                for (i, &j) in digits.iter().enumerate() {
                    term *= b.matrix().at(pat.block(i + 1, l).index(), j);
                }
                acc += &term;
            }
            out.push(acc);
        }
        out
    }

    #[test]
    fn recognizer_blockwise_and_matrix_paths_agree() {
        let m = Matrix::from_int_rows(&[&[1, 0, 2], &[0, 1, -1], &[3, 1, 0], &[-1, 2, 1]]);
        let b = Basis::new(2, 3, m).unwrap();
        let under = Signature::from_fn(2, 4, Role::Recognizer, |d| {
            Scalar::from_int((d[0] * 8 + d[1] * 4 + d[2] * 2 + d[3]) as i64 - 6)
        });
        let fast = b.recognizer_from_standard(&under).unwrap();
        assert_eq!(fast.entries(), blockwise_recognizer(&b, &under).as_slice());
    }

    #[test]
    fn transport_identity_matches_relayout() {
        let m = Matrix::from_int_rows(&[&[1, 1], &[2, -1], &[0, 3], &[1, 0]]);
        let b = Basis::new(2, 2, m).unwrap();
        let g = sig(2, 3, Role::Generator, &[1, 2, 0, -1, 3, 1, -2, 4]);
        let under = b.generator_to_standard(&g).unwrap();
        for t in 1..=3 {
            let transported = b.transported_matrix_form(&g, t).unwrap();
            let relayout = under.block_matrix_form(t, 2).unwrap();
            assert_eq!(transported, relayout, "t = {t}");
        }
    }

    #[test]
    fn transport_identity_n1_degenerate_kronecker() {
        let b = hadamard_basis();
        let g = sig(2, 1, Role::Generator, &[2, 5]);
        let got = b.transported_matrix_form(&g, 1).unwrap();
        assert_eq!(got, Matrix::from_int_rows(&[&[7], &[-3]]));
    }

    #[test]
    fn composed_bases_compose_transforms() {
        let m = Matrix::from_int_rows(&[&[1, 2], &[0, 1], &[1, -1], &[2, 0]]);
        let n = Matrix::from_int_rows(&[&[1, 1], &[1, -1]]);
        let bm = Basis::new(2, 2, m.clone()).unwrap();
        let bmn = Basis::new(2, 2, m.mul(&n)).unwrap();
        let bn = Basis::new(1, 2, n).unwrap();
        let g = sig(2, 2, Role::Generator, &[1, -1, 2, 3]);
        let inner = bn.generator_to_standard(&g).unwrap();
        let two_step = bm.generator_to_standard(&inner.with_role(Role::Generator)).unwrap();
        let one_step = bmn.generator_to_standard(&g).unwrap();
        assert_eq!(two_step.entries(), one_step.entries());
    }

    #[test]
    fn generator_realizability_examples() {
        let b = Basis::identity(1);
        assert!(b.generator_realizable(&sig(2, 2, Role::Generator, &[7, 0, 0, 1])).unwrap());
        assert!(!b.generator_realizable(&sig(2, 2, Role::Generator, &[1, 1, 1, 1])).unwrap());
    }

    #[test]
    fn recognizer_realizability_round_trip() {
        let b = hadamard_basis();
        // build R from a known standard signature, then recover a witness
        let under = sig(2, 2, Role::Recognizer, &[5, 0, 0, 1]);
        let r = b.recognizer_from_standard(&under).unwrap();
        match b.recognizer_realizable(&r).unwrap() {
            RecognizerRealizability::Realizable(w) => {
                // square invertible M: the solution is unique
                assert_eq!(w.entries(), under.entries());
            }
            RecognizerRealizability::Unknown => panic!("expected realizable"),
        }
    }

    #[test]
    fn degenerate_basis_rejected() {
        let m = Matrix::from_int_rows(&[&[1, 2], &[2, 4], &[0, 0], &[1, 2]]);
        let b = Basis::new(2, 2, m).unwrap();
        assert!(!b.is_full_rank());
        let g = sig(2, 1, Role::Generator, &[1, 1]);
        assert!(matches!(
            b.generator_to_standard(&g),
            Err(BasisError::DegenerateBasis { rank: 1, k: 2 })
        ));
    }

    #[test]
    fn solve_particular_consistent_and_not() {
        let a = Matrix::from_int_rows(&[&[1, 2, 0], &[0, 0, 1]]);
        let x = solve_particular(&a, &[Scalar::from_int(5), Scalar::from_int(3)]).unwrap();
        assert_eq!(x, vec![Scalar::from_int(5), Scalar::zero(), Scalar::from_int(3)]);
        let bad = Matrix::from_int_rows(&[&[1, 1], &[1, 1]]);
        assert!(solve_particular(&bad, &[Scalar::from_int(1), Scalar::from_int(2)]).is_none());
    }
}
