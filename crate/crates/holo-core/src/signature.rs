//! Signature tensors, their matrix forms, the Parity Condition and the
//! Matchgate Identities verifier, and the degenerate / full-rank
//! classification.
//!
//! A signature over domain size k and arity n is a dense vector of k^n
//! scalars in lexicographic index order j1..jn with j1 most significant.
//! For k = 2 the index is a [`Pattern`]. The Matchgate Identities read,
//! for a pattern alpha and a position vector P = {p1 < .. < ps},
//!
//! ```text
//!   sum_{i=1..s} (-1)^i G^{alpha xor e_{p_i}} G^{alpha xor p xor e_{p_i}} = 0
//! ```
//!
//! and together with the Parity Condition they characterize exactly the
//! standard signatures of planar matchgates. Position vectors of odd
//! weight, and of weight 2, hold automatically once parity does, so the
//! verifier enumerates only even |P| >= 4.

use std::fmt;

use thiserror::Error;

use crate::matrix::Matrix;
use crate::pattern::Pattern;
use crate::scalar::Scalar;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SignatureError {
    #[error("slot index {t} out of range 1..={n}")]
    IndexOutOfRange { t: usize, n: usize },
    #[error("operation requires domain size 2, got {0}")]
    DomainNotBoolean(usize),
    #[error("arity {arity} exceeds the verifier bound {bound}")]
    ArityBoundExceeded { arity: usize, bound: usize },
    #[error("operation requires arity {expected}, got {got}")]
    WrongArity { expected: usize, got: usize },
    #[error("entry count {got} does not match k^n = {expected}")]
    EntryCount { got: usize, expected: usize },
    #[error("arity {arity} not divisible into blocks of {block}")]
    BlockMismatch { arity: usize, block: usize },
    #[error("signature is not a transducer")]
    NotTransducer,
}

/// Role of a signature tensor. Transducers record the (output, input)
/// split of their arity; their flat entries are stored in boundary order
/// (input bits in label order, then output bits in reverse label order).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Role {
    Generator,
    Recognizer,
    Transducer { outputs: usize, inputs: usize },
}

impl fmt::Display for Role {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Role::Generator => write!(f, "generator"),
            Role::Recognizer => write!(f, "recognizer"),
            Role::Transducer { outputs, inputs } => {
                write!(f, "transducer[out={outputs},in={inputs}]")
            }
        }
    }
}

impl std::str::FromStr for Role {
    type Err = String;

    fn from_str(text: &str) -> Result<Self, Self::Err> {
        match text {
            "generator" => return Ok(Role::Generator),
            "recognizer" => return Ok(Role::Recognizer),
            _ => {}
        }
        if let Some(rest) = text.strip_prefix("transducer[").and_then(|r| r.strip_suffix(']')) {
            let mut outputs = None;
            let mut inputs = None;
            for part in rest.split(',') {
                if let Some(v) = part.strip_prefix("out=") {
                    outputs = v.parse::<usize>().ok();
                } else if let Some(v) = part.strip_prefix("in=") {
                    inputs = v.parse::<usize>().ok();
                }
            }
            if let (Some(outputs), Some(inputs)) = (outputs, inputs) {
                return Ok(Role::Transducer { outputs, inputs });
            }
        }
        Err(format!("bad role {text:?}"))
    }
}

/// Dense tensor of scalars over domain size `k`, arity `n`.
#[derive(Clone, PartialEq, Eq)]
pub struct Signature {
    k: usize,
    n: usize,
    role: Role,
    entries: Vec<Scalar>,
}

/// Outcome of the Parity Condition check.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ParityClass {
    /// Support on even-weight patterns only (the all-zero vector included).
    EvenMatchgate,
    /// Support on odd-weight patterns only.
    OddMatchgate,
    /// Nonzero entries on both parity classes; witnesses carried.
    Violation { even_witness: Pattern, odd_witness: Pattern },
}

/// Outcome of the Matchgate Identities check.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum MgiOutcome {
    Pass,
    Fail { alpha: Pattern, positions: Vec<usize>, residual: Scalar },
}

impl MgiOutcome {
    pub fn is_pass(&self) -> bool {
        matches!(self, MgiOutcome::Pass)
    }
}

pub const DEFAULT_MGI_ARITY_BOUND: usize = 16;

impl Signature {
    pub fn new(k: usize, n: usize, role: Role, entries: Vec<Scalar>) -> Result<Self, SignatureError> {
        let expected = k.checked_pow(n as u32).expect("k^n overflow");
        if entries.len() != expected {
            return Err(SignatureError::EntryCount { got: entries.len(), expected });
        }
        Ok(Signature { k, n, role, entries })
    }

    pub fn from_fn(k: usize, n: usize, role: Role, mut f: impl FnMut(&[usize]) -> Scalar) -> Self {
        let total = k.pow(n as u32);
        let mut digits = vec![0usize; n];
        let mut entries = Vec::with_capacity(total);
        for flat in 0..total {
            let mut rem = flat;
            for t in (0..n).rev() {
                digits[t] = rem % k;
                rem /= k;
            }
            entries.push(f(&digits));
        }
        Signature { k, n, role, entries }
    }

    pub fn zero(k: usize, n: usize, role: Role) -> Self {
        Signature { k, n, role, entries: vec![Scalar::zero(); k.pow(n as u32)] }
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn arity(&self) -> usize {
        self.n
    }

    pub fn role(&self) -> Role {
        self.role
    }

    pub fn with_role(mut self, role: Role) -> Self {
        self.role = role;
        self
    }

    pub fn entries(&self) -> &[Scalar] {
        &self.entries
    }

    pub fn into_entries(self) -> Vec<Scalar> {
        self.entries
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(Scalar::is_zero)
    }

    pub fn flat(&self, index: usize) -> &Scalar {
        &self.entries[index]
    }

    /// Entry at digit tuple (j1..jn), each in 0..k.
    pub fn at(&self, digits: &[usize]) -> &Scalar {
        assert_eq!(digits.len(), self.n);
        let mut idx = 0;
        for &d in digits {
            debug_assert!(d < self.k);
            idx = idx * self.k + d;
        }
        &self.entries[idx]
    }

    /// Entry at a bit pattern; domain size 2 only.
    pub fn at_pattern(&self, p: &Pattern) -> &Scalar {
        assert_eq!(self.k, 2);
        assert_eq!(p.len(), self.n);
        &self.entries[p.index()]
    }

    pub fn scale(&self, c: &Scalar) -> Signature {
        Signature {
            k: self.k,
            n: self.n,
            role: self.role,
            entries: self.entries.iter().map(|e| e * c).collect(),
        }
    }

    /// The t-th matrix form. Generators (and transducers) reshape to
    /// k x k^{n-1} with rows indexed by slot t; recognizers to the
    /// transposed k^{n-1} x k shape.
    pub fn matrix_form(&self, t: usize) -> Result<Matrix, SignatureError> {
        if t < 1 || t > self.n {
            return Err(SignatureError::IndexOutOfRange { t, n: self.n });
        }
        let k = self.k;
        let rest = k.pow((self.n - 1) as u32);
        let right = k.pow((self.n - t) as u32); // weight of digits after slot t
        let entry = |row: usize, col: usize| {
            let high = col / right;
            let low = col % right;
            let flat = (high * k + row) * right + low;
            self.entries[flat].clone()
        };
        Ok(match self.role {
            Role::Recognizer => Matrix::from_fn(rest, k, |i, j| entry(j, i)),
            _ => Matrix::from_fn(k, rest, entry),
        })
    }

    /// Matrix form over 2^l-sized blocks: a domain-2 signature of arity
    /// n*l viewed as a domain-2^l signature of arity n, reshaped at block
    /// slot t. Rows are indexed by the t-th block pattern.
    pub fn block_matrix_form(&self, t: usize, block_len: usize) -> Result<Matrix, SignatureError> {
        if self.k != 2 {
            return Err(SignatureError::DomainNotBoolean(self.k));
        }
        if block_len == 0 || self.n % block_len != 0 {
            return Err(SignatureError::BlockMismatch { arity: self.n, block: block_len });
        }
        let blocks = self.n / block_len;
        if t < 1 || t > blocks {
            return Err(SignatureError::IndexOutOfRange { t, n: blocks });
        }
        let rows = 1usize << block_len;
        let cols = 1usize << (self.n - block_len);
        Ok(Matrix::from_fn(rows, cols, |r, c| {
            let alpha = Pattern::from_index(block_len, r);
            let beta = Pattern::from_index(self.n - block_len, c);
            let full = Pattern::splice(&beta, &alpha, t, block_len).expect("splice shapes");
            self.entries[full.index()].clone()
        }))
    }

    /// Reads a matrix laid out like `matrix_form(t)` back into the flat
    /// entry vector (the inverse re-layout).
    pub fn from_matrix_form(
        k: usize,
        n: usize,
        role: Role,
        t: usize,
        m: &Matrix,
    ) -> Result<Signature, SignatureError> {
        if t < 1 || t > n {
            return Err(SignatureError::IndexOutOfRange { t, n });
        }
        let right = k.pow((n - t) as u32);
        let mut sig = Signature::zero(k, n, role);
        let total = k.pow(n as u32);
        for flat in 0..total {
            let low = flat % right;
            let row = (flat / right) % k;
            let high = flat / (right * k);
            let col = high * right + low;
            sig.entries[flat] = match role {
                Role::Recognizer => m.at(col, row).clone(),
                _ => m.at(row, col).clone(),
            };
        }
        Ok(sig)
    }

    /// Parity Condition: standard signatures are supported entirely on one
    /// weight parity. The all-zero vector reports Even by convention.
    pub fn parity_check(&self) -> Result<ParityClass, SignatureError> {
        if self.k != 2 {
            return Err(SignatureError::DomainNotBoolean(self.k));
        }
        let mut even = None;
        let mut odd = None;
        for idx in 0..self.entries.len() {
            if self.entries[idx].is_zero() {
                continue;
            }
            let p = Pattern::from_index(self.n, idx);
            if p.wt() % 2 == 0 {
                even.get_or_insert(p);
            } else {
                odd.get_or_insert(p);
            }
            if even.is_some() && odd.is_some() {
                break;
            }
        }
        Ok(match (even, odd) {
            (Some(e), Some(o)) => ParityClass::Violation { even_witness: e, odd_witness: o },
            (None, Some(_)) => ParityClass::OddMatchgate,
            _ => ParityClass::EvenMatchgate,
        })
    }

    /// Matchgate Identities over every pattern alpha and every position
    /// vector P with |P| even and |P| >= 4, reporting the lexicographically
    /// least failing cell (alpha first, then P as a pattern value).
    pub fn mgi_check(&self) -> Result<MgiOutcome, SignatureError> {
        self.mgi_check_bounded(DEFAULT_MGI_ARITY_BOUND)
    }

    pub fn mgi_check_bounded(&self, bound: usize) -> Result<MgiOutcome, SignatureError> {
        if self.k != 2 {
            return Err(SignatureError::DomainNotBoolean(self.k));
        }
        if self.n > bound {
            return Err(SignatureError::ArityBoundExceeded { arity: self.n, bound });
        }
        let n = self.n;
        if n < 4 {
            return Ok(MgiOutcome::Pass);
        }
        for alpha_idx in 0..(1usize << n) {
            let alpha = Pattern::from_index(n, alpha_idx);
            for p_idx in 0..(1usize << n) {
                let p = Pattern::from_index(n, p_idx);
                let s = p.wt();
                if s < 4 || s % 2 != 0 {
                    continue;
                }
                let residual = self.mgi_residual(&alpha, &p);
                if !residual.is_zero() {
                    return Ok(MgiOutcome::Fail {
                        alpha,
                        positions: p.positions(),
                        residual,
                    });
                }
            }
        }
        Ok(MgiOutcome::Pass)
    }

    /// The Eq.(1) sum for one (alpha, P) cell: sum of (-1)^i over the set
    /// positions p_i of `p` in increasing order.
    pub fn mgi_residual(&self, alpha: &Pattern, p: &Pattern) -> Scalar {
        let n = self.n;
        assert_eq!(alpha.len(), n);
        assert_eq!(p.len(), n);
        let mut acc = Scalar::zero();
        let mut sign_neg = true; // i = 1 carries (-1)^1
        for pos in p.positions() {
            let e = Pattern::unit(n, pos);
            let lhs = &self.entries[alpha.xor(&e).unwrap().index()];
            if !lhs.is_zero() {
                let rhs = &self.entries[alpha.xor(p).unwrap().xor(&e).unwrap().index()];
                if !rhs.is_zero() {
                    let term = lhs * rhs;
                    if sign_neg {
                        acc -= &term;
                    } else {
                        acc += &term;
                    }
                }
            }
            sign_neg = !sign_neg;
        }
        acc
    }

    /// Theorem-2 verifier: Parity Condition plus Matchgate Identities.
    pub fn is_standard_signature(&self) -> Result<bool, SignatureError> {
        if !matches!(self.parity_check()?, ParityClass::Violation { .. }) {
            Ok(self.mgi_check()?.is_pass())
        } else {
            Ok(false)
        }
    }

    /// Arity-4 shortcut: the single nontrivial identity per parity class.
    /// Even support needs G^0000 G^1111 - G^1100 G^0011 + G^1010 G^0101
    /// - G^1001 G^0110 = 0; odd support the mirrored equation.
    pub fn arity4_standard_check(&self) -> Result<bool, SignatureError> {
        if self.k != 2 {
            return Err(SignatureError::DomainNotBoolean(self.k));
        }
        if self.n != 4 {
            return Err(SignatureError::WrongArity { expected: 4, got: self.n });
        }
        let e = |bits: usize| &self.entries[bits];
        match self.parity_check()? {
            ParityClass::Violation { .. } => Ok(false),
            ParityClass::EvenMatchgate => {
                let lhs = &(&(e(0b0000) * e(0b1111)) - &(e(0b1100) * e(0b0011)))
                    + &(&(e(0b1010) * e(0b0101)) - &(e(0b1001) * e(0b0110)));
                Ok(lhs.is_zero())
            }
            ParityClass::OddMatchgate => {
                let lhs = &(&(e(0b1000) * e(0b0111)) - &(e(0b0100) * e(0b1011)))
                    + &(&(e(0b0010) * e(0b1101)) - &(e(0b0001) * e(0b1110)));
                Ok(lhs.is_zero())
            }
        }
    }

    /// Tensor factorization when every matrix form has rank at most 1,
    /// constructed by induction on the first slot. Returns the factor list
    /// gamma_1..gamma_n with the outer product reproducing the entries, or
    /// None for a non-degenerate signature.
    pub fn is_degenerate(&self) -> Option<Vec<Vec<Scalar>>> {
        let factors = self.degenerate_factors()?;
        debug_assert!(self.outer_product_matches(&factors));
        Some(factors)
    }

    fn degenerate_factors(&self) -> Option<Vec<Vec<Scalar>>> {
        if self.is_zero() {
            return Some(vec![vec![Scalar::zero(); self.k]; self.n]);
        }
        if self.n == 1 {
            return Some(vec![self.entries.clone()]);
        }
        let m = self.matrix_form_as_generator(1);
        let pivot_row = (0..self.k).find(|&r| m.row(r).iter().any(|e| !e.is_zero()))?;
        let pivot_col = m.row(pivot_row).iter().position(|e| !e.is_zero()).unwrap();
        let pivot = m.at(pivot_row, pivot_col).clone();
        let mut gamma1 = Vec::with_capacity(self.k);
        for r in 0..self.k {
            let coeff = m.at(r, pivot_col) / &pivot;
            // proportionality of the whole row is exactly rank <= 1
            for c in 0..m.cols() {
                if *m.at(r, c) != &coeff * m.at(pivot_row, c) {
                    return None;
                }
            }
            gamma1.push(coeff);
        }
        let sub = Signature {
            k: self.k,
            n: self.n - 1,
            role: self.role,
            entries: m.row(pivot_row).to_vec(),
        };
        let mut rest = sub.degenerate_factors()?;
        let mut factors = vec![gamma1];
        factors.append(&mut rest);
        Some(factors)
    }

    fn matrix_form_as_generator(&self, t: usize) -> Matrix {
        let sig = Signature {
            k: self.k,
            n: self.n,
            role: Role::Generator,
            entries: self.entries.clone(),
        };
        sig.matrix_form(t).expect("t in range")
    }

    fn outer_product_matches(&self, factors: &[Vec<Scalar>]) -> bool {
        let mut digits = vec![0usize; self.n];
        for flat in 0..self.entries.len() {
            let mut rem = flat;
            for t in (0..self.n).rev() {
                digits[t] = rem % self.k;
                rem /= self.k;
            }
            let mut prod = Scalar::one();
            for (t, &d) in digits.iter().enumerate() {
                prod *= &factors[t][d];
            }
            if prod != self.entries[flat] {
                return false;
            }
        }
        true
    }

    /// Smallest slot t whose matrix form attains rank k, if any.
    pub fn full_rank_slot(&self) -> Option<usize> {
        (1..=self.n).find(|&t| self.matrix_form_as_generator(t).rank() == self.k)
    }

    /// Flat transducer signature from its 2^outputs x 2^inputs matrix
    /// (rows indexed by output pattern y1..yl, columns by input pattern).
    /// The boundary-order flattening is (x1..xs, yl..y1).
    pub fn transducer_from_matrix(m: &Matrix, outputs: usize, inputs: usize) -> Signature {
        assert_eq!(m.rows(), 1 << outputs);
        assert_eq!(m.cols(), 1 << inputs);
        let n = outputs + inputs;
        Signature::from_fn(2, n, Role::Transducer { outputs, inputs }, |digits| {
            let mut x = 0usize;
            for d in &digits[..inputs] {
                x = (x << 1) | d;
            }
            // remaining bits are yl..y1; rebuild y1..yl value
            let mut y = 0usize;
            for (back, d) in digits[inputs..].iter().enumerate() {
                if *d == 1 {
                    y |= 1 << back;
                }
            }
            m.at(y, x).clone()
        })
    }

    /// The 2^outputs x 2^inputs matrix view of a transducer signature.
    pub fn transducer_matrix(&self) -> Result<Matrix, SignatureError> {
        let Role::Transducer { outputs, inputs } = self.role else {
            return Err(SignatureError::NotTransducer);
        };
        Ok(Matrix::from_fn(1 << outputs, 1 << inputs, |y, x| {
            let mut idx = 0usize;
            for pos in (0..inputs).rev() {
                idx = (idx << 1) | ((x >> pos) & 1);
            }
            for back in 0..outputs {
                idx = (idx << 1) | ((y >> back) & 1);
            }
            self.entries[idx].clone()
        }))
    }
}

impl fmt::Debug for Signature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Signature(k={}, n={}, {}) [", self.k, self.n, self.role)?;
        for (i, e) in self.entries.iter().enumerate() {
            write!(f, "{}{}", if i > 0 { " " } else { "" }, e)?;
        }
        write!(f, "]")
    }
}
