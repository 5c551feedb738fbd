//! The constructive basis-collapse machinery: minimal-pair searches over
//! standard signatures, sub-basis extraction, transducer construction,
//! group-property inverses, and the end-to-end pipelines for domain sizes
//! 2 and 4 plus the domain-3 classifier.
//!
//! The distance lemmas are executable assertions here: on any input
//! produced by a genuine basis realization the minimizing row pair sits at
//! Hamming distance 1 (domain 2) or 2 (domain >= 3, same parity), and
//! likewise for the minimizing column pair. A violation means the input
//! was not a real (G, M, underG) realization, and is reported as a typed
//! error naming the lemma.

use thiserror::Error;

use crate::basis::{Basis, BasisError};
use crate::holant::{holant_contract, recognizer_times_transducer_power, HolantError, Wire};
use crate::matrix::{Matrix, MatrixError};
use crate::pattern::Pattern;
use crate::scalar::Scalar;
use crate::signature::{Role, Signature, SignatureError};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CollapseError {
    #[error("matrix form at slot {t} has rank {rank}, need at least {need}")]
    RankTooLow { t: usize, rank: usize, need: usize },
    #[error("{lemma}: minimizing distance is {got}, the lemma proves {expected} for genuine instances")]
    DistanceLemmaViolated { lemma: &'static str, expected: u32, got: u32 },
    #[error("sub-basis rows are singular (invalid instance)")]
    SingularSubbasis,
    #[error("transducer fails the standard-signature verifier at {0} (invalid instance)")]
    TransducerNotStandard(String),
    #[error("rank-4 submatrix is rank deficient (invalid instance)")]
    RankDeficient,
    #[error("matrix form rank does not fit the requested dual-recognizer path (have {rank})")]
    RankMismatch { rank: usize },
    #[error("matrix is not in the even or odd arity-4 group form")]
    FormViolation,
    #[error("sign relation of the arity-4 group property fails")]
    SignRelationViolation,
    #[error("no generator of full rank; the holographic algorithm is trivial")]
    NoFullRankGenerator,
    #[error("input verification failed: {0}")]
    InputMismatch(String),
    #[error("check guaranteed by {lemma} failed on verified input: {detail}")]
    TheoremCheckFailed { lemma: &'static str, detail: String },
    #[error("instance outside the classified cases: {0}")]
    UnclassifiedInstance(String),
    #[error(transparent)]
    Basis(#[from] BasisError),
    #[error(transparent)]
    Signature(#[from] SignatureError),
    #[error(transparent)]
    Matrix(#[from] MatrixError),
    #[error(transparent)]
    Holant(#[from] HolantError),
}

/// Certificate of the minimal linearly-independent row pair (sigma, tau)
/// of the block matrix form and the minimal independent column pair
/// (zeta, eta) of the two picked rows.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MinimalPairCertificate {
    pub t: usize,
    pub block_len: usize,
    pub sigma: Pattern,
    pub tau: Pattern,
    pub zeta: Pattern,
    pub eta: Pattern,
    pub d: u32,
    pub d_prime: u32,
    /// 1-based positions of sigma xor tau inside the t-th block.
    pub p_positions: Vec<usize>,
    /// 1-based positions of zeta xor eta inside the complement string.
    pub q_positions: Vec<usize>,
}

/// Searches the t-th block matrix form of a standard signature for the
/// lexicographically least minimal pairs, asserting the distance lemmas.
pub fn find_minimal_pairs(
    under_g: &Signature,
    block_len: usize,
    t: usize,
    same_parity: bool,
) -> Result<MinimalPairCertificate, CollapseError> {
    let b = under_g.block_matrix_form(t, block_len)?;
    let rows = b.rows();
    let two_rows_independent = |u: usize, v: usize| {
        let m = Matrix::from_fn(2, b.cols(), |i, c| {
            b.at(if i == 0 { u } else { v }, c).clone()
        });
        m.rank() == 2
    };
    let mut best: Option<(u32, usize, usize)> = None;
    for u in 0..rows {
        for v in u + 1..rows {
            if same_parity
                && Pattern::from_index(block_len, u).parity()
                    != Pattern::from_index(block_len, v).parity()
            {
                continue;
            }
            let dist = (u ^ v).count_ones();
            let better = match best {
                None => true,
                Some((bd, bu, bv)) => dist < bd || (dist == bd && (u, v) < (bu, bv)),
            };
            if better && two_rows_independent(u, v) {
                best = Some((dist, u, v));
            }
        }
    }
    let Some((d, su, sv)) = best else {
        return Err(CollapseError::RankTooLow { t, rank: b.rank(), need: 2 });
    };
    let expected_d = if same_parity { 2 } else { 1 };
    if d != expected_d {
        let lemma = if same_parity { "Lemma 5.2" } else { "Lemma 4.2" };
        return Err(CollapseError::DistanceLemmaViolated { lemma, expected: expected_d, got: d });
    }
    let x_independent = |c1: usize, c2: usize| {
        let m = Matrix::from_fn(2, 2, |i, j| {
            let c = if j == 0 { c1 } else { c2 };
            b.at(if i == 0 { su } else { sv }, c).clone()
        });
        m.rank() == 2
    };
    let mut best_cols: Option<(u32, usize, usize)> = None;
    for c1 in 0..b.cols() {
        for c2 in c1 + 1..b.cols() {
            let dist = (c1 ^ c2).count_ones();
            let better = match best_cols {
                None => true,
                Some((bd, bu, bv)) => dist < bd || (dist == bd && (c1, c2) < (bu, bv)),
            };
            if better && x_independent(c1, c2) {
                best_cols = Some((dist, c1, c2));
            }
        }
    }
    let Some((d_prime, zu, zv)) = best_cols else {
        return Err(CollapseError::RankTooLow { t, rank: b.rank(), need: 2 });
    };
    if d_prime != expected_d {
        let lemma = if same_parity { "Lemma 5.3" } else { "Lemma 4.4" };
        return Err(CollapseError::DistanceLemmaViolated {
            lemma,
            expected: expected_d,
            got: d_prime,
        });
    }
    let complement_len = under_g.arity() - block_len;
    let sigma = Pattern::from_index(block_len, su);
    let tau = Pattern::from_index(block_len, sv);
    let zeta = Pattern::from_index(complement_len, zu);
    let eta = Pattern::from_index(complement_len, zv);
    Ok(MinimalPairCertificate {
        t,
        block_len,
        p_positions: sigma.xor(&tau).unwrap().positions(),
        q_positions: zeta.xor(&eta).unwrap().positions(),
        sigma,
        tau,
        zeta,
        eta,
        d,
        d_prime,
    })
}

/// Rows sigma and tau of the basis matrix; invertible for genuine
/// domain-2 instances.
pub fn extract_subbasis_d2(m: &Basis, cert: &MinimalPairCertificate) -> Result<Matrix, CollapseError> {
    let rows = [cert.sigma.index(), cert.tau.index()];
    let sub = Matrix::from_fn(2, m.k(), |i, j| m.matrix().at(rows[i], j).clone());
    if sub.rank() != 2 {
        return Err(CollapseError::SingularSubbasis);
    }
    Ok(sub)
}

/// Block-pattern values of the domain-4 sub-basis rows. Row index read as
/// the 2-bit collapsed block value (x1 x2) with x1 toggling e_p1 and x2
/// toggling e_p2: sigma, sigma+e_p2, sigma+e_p1, sigma+e_p1+e_p2 = tau.
pub fn subbasis_row_patterns_d4(cert: &MinimalPairCertificate) -> Vec<Pattern> {
    let l = cert.block_len;
    let e1 = Pattern::unit(l, cert.p_positions[0]);
    let e2 = Pattern::unit(l, cert.p_positions[1]);
    vec![
        cert.sigma,
        cert.sigma.xor(&e2).unwrap(),
        cert.sigma.xor(&e1).unwrap(),
        cert.sigma.xor(&e1).unwrap().xor(&e2).unwrap(),
    ]
}

/// Rows sigma + {e_p1, e_p2} of the basis matrix; invertible for genuine
/// domain-4 instances.
pub fn extract_subbasis_d4(m: &Basis, cert: &MinimalPairCertificate) -> Result<Matrix, CollapseError> {
    if cert.d != 2 {
        return Err(CollapseError::DistanceLemmaViolated {
            lemma: "Lemma 5.2",
            expected: 2,
            got: cert.d,
        });
    }
    let rows = subbasis_row_patterns_d4(cert);
    let sub = Matrix::from_fn(4, m.k(), |i, j| m.matrix().at(rows[i].index(), j).clone());
    if sub.rank() != 4 {
        return Err(CollapseError::SingularSubbasis);
    }
    Ok(sub)
}

/// Which of the two case layouts the rank-4 submatrix landed in: corners
/// carried by the reference pattern's parity class (even layout) or by
/// the opposite class (odd layout).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Rank4Layout {
    EvenCorners,
    OddCorners,
}

#[derive(Debug, Clone)]
pub struct Rank4Submatrix {
    pub matrix: Matrix,
    /// t-th block values of the four rows (toggling e_p1, e_p2 over sigma).
    pub row_patterns: Vec<Pattern>,
    /// complement values of the four columns (toggling e_q1, e_q2 over zeta).
    pub col_patterns: Vec<Pattern>,
    pub layout: Rank4Layout,
}

/// The 4x4 rank-4 submatrix of the t-th block matrix form located by the
/// certificate: rows toggle (e_p1, e_p2) over sigma, columns toggle
/// (e_q1, e_q2) over zeta.
pub fn rank4_submatrix(
    under_g: &Signature,
    cert: &MinimalPairCertificate,
) -> Result<Rank4Submatrix, CollapseError> {
    if cert.d != 2 || cert.d_prime != 2 {
        return Err(CollapseError::RankDeficient);
    }
    let l = cert.block_len;
    let comp_len = under_g.arity() - l;
    let row_patterns = subbasis_row_patterns_d4(cert);
    let eq1 = Pattern::unit(comp_len, cert.q_positions[0]);
    let eq2 = Pattern::unit(comp_len, cert.q_positions[1]);
    let col_patterns = vec![
        cert.zeta,
        cert.zeta.xor(&eq2).unwrap(),
        cert.zeta.xor(&eq1).unwrap(),
        cert.zeta.xor(&eq1).unwrap().xor(&eq2).unwrap(),
    ];
    let matrix = Matrix::from_fn(4, 4, |r, c| {
        let full = Pattern::splice(&col_patterns[c], &row_patterns[r], cert.t, l).expect("splice");
        under_g.at_pattern(&full).clone()
    });
    if matrix.rank() != 4 {
        return Err(CollapseError::RankDeficient);
    }
    let corner = cert.zeta.wt() + cert.sigma.wt();
    let sig_parity = signature_support_parity(under_g);
    let layout = match sig_parity {
        Some(p) if p == (corner % 2) as u8 => Rank4Layout::EvenCorners,
        Some(_) => Rank4Layout::OddCorners,
        None => Rank4Layout::EvenCorners,
    };
    Ok(Rank4Submatrix { matrix, row_patterns, col_patterns, layout })
}

fn signature_support_parity(sig: &Signature) -> Option<u8> {
    for idx in 0..sig.entries().len() {
        if !sig.flat(idx).is_zero() {
            return Some((Pattern::from_index(sig.arity(), idx).wt() % 2) as u8);
        }
    }
    None
}

/// T = M (M^rows)^{-1}. T restricted to the certificate rows is the
/// identity, and T flattened as an (l-output, s-input) transducer
/// signature in boundary order passes the verifier.
pub fn build_transducer(
    m: &Basis,
    sub: &Matrix,
    row_patterns: &[Pattern],
) -> Result<Matrix, CollapseError> {
    let k = m.k();
    if sub.rows() != k || sub.cols() != k {
        return Err(CollapseError::SingularSubbasis);
    }
    let inv = sub.inverse().map_err(|_| CollapseError::SingularSubbasis)?;
    let t = m.matrix().mul(&inv);
    for (i, p) in row_patterns.iter().enumerate() {
        for j in 0..k {
            let expect = if i == j { Scalar::one() } else { Scalar::zero() };
            if *t.at(p.index(), j) != expect {
                return Err(CollapseError::TheoremCheckFailed {
                    lemma: "T^{sigma,tau} = I",
                    detail: format!("row {p} column {j}"),
                });
            }
        }
    }
    let s = k.trailing_zeros() as usize;
    let flat = Signature::transducer_from_matrix(&t, m.l(), s);
    if !flat.is_standard_signature()? {
        let witness = match flat.mgi_check()? {
            crate::signature::MgiOutcome::Fail { alpha, positions, .. } => {
                format!("alpha={alpha} P={positions:?}")
            }
            crate::signature::MgiOutcome::Pass => "parity violation".to_string(),
        };
        return Err(CollapseError::TransducerNotStandard(witness));
    }
    Ok(t)
}

/// Sparse dual recognizer with underG(t) underR(t) = I. Rank 2 uses the
/// diagonal / antidiagonal 2x2 inverse; rank 4 goes through the rank-4
/// submatrix and the arity-4 group property.
pub fn dual_recognizer(under_g: &Signature, t: usize) -> Result<Signature, CollapseError> {
    let n = under_g.arity();
    let gen_view = under_g.clone().with_role(Role::Generator);
    let rank2 = gen_view.matrix_form(t)?.rank();
    if rank2 == 2 && under_g.k() == 2 {
        let cert = find_minimal_pairs(under_g, 1, t, false)?;
        // A columns are x_zeta, x_eta over rows (0, 1)
        let a = Matrix::from_fn(2, 2, |i, j| {
            let col = if j == 0 { &cert.zeta } else { &cert.eta };
            let row = Pattern::from_index(1, i);
            let full = Pattern::splice(col, &row, t, 1).expect("splice");
            under_g.at_pattern(&full).clone()
        });
        let inv = a.inverse().map_err(|_| CollapseError::RankMismatch { rank: rank2 })?;
        let mut entries = vec![Scalar::zero(); 1 << n];
        for (c, col) in [&cert.zeta, &cert.eta].into_iter().enumerate() {
            for j in 0..2usize {
                let full = Pattern::splice(col, &Pattern::from_index(1, j), t, 1).expect("splice");
                entries[full.index()] = inv.at(c, j).clone();
            }
        }
        let under_r = Signature::new(2, n, Role::Recognizer, entries)?;
        verify_dual_product(&gen_view, &under_r, t, 2)?;
        if !under_r.is_standard_signature()? {
            return Err(CollapseError::TheoremCheckFailed {
                lemma: "Lemma gplemma2",
                detail: "dual recognizer fails the verifier".into(),
            });
        }
        return Ok(under_r);
    }
    // rank-4 path over 2-bit blocks
    let blocks_form = under_g.block_matrix_form(t, 2)?;
    if blocks_form.rank() != 4 {
        return Err(CollapseError::RankMismatch { rank: blocks_form.rank() });
    }
    let cert = find_minimal_pairs(under_g, 2, t, true)?;
    let sub = rank4_submatrix(under_g, &cert)?;
    // group property: detect the sign, invert blockwise, keep the form
    let sign_plus = detect_group_sign(&sub)?;
    let inv = group_inverse_arity4_in_layout(&sub.matrix, sub.layout, sign_plus)?;
    // display row r carries block value row_patterns[r]
    let mut value_to_row = [usize::MAX; 4];
    for (r, p) in sub.row_patterns.iter().enumerate() {
        value_to_row[p.index()] = r;
    }
    let mut entries = vec![Scalar::zero(); 1 << under_g.arity()];
    for (c, col) in sub.col_patterns.iter().enumerate() {
        for b in 0..4usize {
            let full = Pattern::splice(col, &Pattern::from_index(2, b), t, 2).expect("splice");
            entries[full.index()] = inv.at(c, value_to_row[b]).clone();
        }
    }
    let under_r = Signature::new(2, under_g.arity(), Role::Recognizer, entries)?;
    verify_dual_product(&gen_view, &under_r, t, 4)?;
    if !under_r.is_standard_signature()? {
        return Err(CollapseError::TheoremCheckFailed {
            lemma: "Theorem gplemma4",
            detail: "dual recognizer fails the verifier".into(),
        });
    }
    Ok(under_r)
}

fn verify_dual_product(
    gen_view: &Signature,
    under_r: &Signature,
    t: usize,
    k_eff: usize,
) -> Result<(), CollapseError> {
    let g_t = gen_view.block_matrix_form(t, k_eff.trailing_zeros() as usize)?;
    let r_t = under_r
        .clone()
        .with_role(Role::Recognizer)
        .block_matrix_form(t, k_eff.trailing_zeros() as usize)?;
    // recognizer block form here is laid out like the generator's; the
    // product wants underG(t) . underR(t)^T over the complement index
    let prod = g_t.mul(&r_t.transpose());
    if prod != Matrix::identity(k_eff) {
        return Err(CollapseError::TheoremCheckFailed {
            lemma: "gplemma product",
            detail: format!("underG(t) underR(t) != I_{k_eff}"),
        });
    }
    Ok(())
}

fn detect_group_sign(sub: &Rank4Submatrix) -> Result<bool, CollapseError> {
    let (lhs, rhs) = group_sign_sides(&sub.matrix, sub.layout);
    if lhs == rhs {
        Ok(true)
    } else if lhs == -&rhs {
        Ok(false)
    } else {
        Err(CollapseError::SignRelationViolation)
    }
}

fn group_sign_sides(a: &Matrix, layout: Rank4Layout) -> (Scalar, Scalar) {
    match layout {
        Rank4Layout::EvenCorners => {
            // corners block (rows/cols 0,3), central block (rows/cols 1,2)
            let lhs = &(a.at(0, 0) * a.at(3, 3)) - &(a.at(3, 0) * a.at(0, 3));
            let rhs = &(a.at(2, 2) * a.at(1, 1)) - &(a.at(2, 1) * a.at(1, 2));
            (lhs, rhs)
        }
        Rank4Layout::OddCorners => {
            let lhs = &(a.at(2, 0) * a.at(1, 3)) - &(a.at(1, 0) * a.at(2, 3));
            let rhs = &(a.at(0, 2) * a.at(3, 1)) - &(a.at(0, 1) * a.at(3, 2));
            (lhs, rhs)
        }
    }
}

/// Blockwise inverse of a matrix in the arity-4 group form, with the form
/// and the sign relation asserted on both the input and the result.
pub fn group_inverse_arity4(a: &Matrix, sign_plus: bool) -> Result<Matrix, CollapseError> {
    let layout = detect_layout(a)?;
    group_inverse_arity4_in_layout(a, layout, sign_plus)
}

fn detect_layout(a: &Matrix) -> Result<Rank4Layout, CollapseError> {
    if a.rows() != 4 || a.cols() != 4 {
        return Err(CollapseError::FormViolation);
    }
    let even_zero = [(0, 1), (0, 2), (1, 0), (1, 3), (2, 0), (2, 3), (3, 1), (3, 2)];
    let odd_zero = [(0, 0), (0, 3), (1, 1), (1, 2), (2, 1), (2, 2), (3, 0), (3, 3)];
    if even_zero.iter().all(|&(i, j)| a.at(i, j).is_zero()) {
        Ok(Rank4Layout::EvenCorners)
    } else if odd_zero.iter().all(|&(i, j)| a.at(i, j).is_zero()) {
        Ok(Rank4Layout::OddCorners)
    } else {
        Err(CollapseError::FormViolation)
    }
}

fn group_inverse_arity4_in_layout(
    a: &Matrix,
    layout: Rank4Layout,
    sign_plus: bool,
) -> Result<Matrix, CollapseError> {
    if detect_layout(a)? != layout {
        return Err(CollapseError::FormViolation);
    }
    let (lhs, rhs) = group_sign_sides(a, layout);
    let expect = if sign_plus { rhs.clone() } else { -&rhs };
    if lhs != expect {
        return Err(CollapseError::SignRelationViolation);
    }
    let pick = |pairs: [(usize, usize); 4]| {
        Matrix::from_fn(2, 2, |i, j| a.at(pairs[2 * i + j].0, pairs[2 * i + j].1).clone())
    };
    let inv = match layout {
        Rank4Layout::EvenCorners => {
            let outer = pick([(0, 0), (0, 3), (3, 0), (3, 3)])
                .inverse()
                .map_err(|_| CollapseError::RankDeficient)?;
            let central = pick([(1, 1), (1, 2), (2, 1), (2, 2)])
                .inverse()
                .map_err(|_| CollapseError::RankDeficient)?;
            let mut m = Matrix::zero(4, 4);
            *m.at_mut(0, 0) = outer.at(0, 0).clone();
            *m.at_mut(0, 3) = outer.at(0, 1).clone();
            *m.at_mut(3, 0) = outer.at(1, 0).clone();
            *m.at_mut(3, 3) = outer.at(1, 1).clone();
            *m.at_mut(1, 1) = central.at(0, 0).clone();
            *m.at_mut(1, 2) = central.at(0, 1).clone();
            *m.at_mut(2, 1) = central.at(1, 0).clone();
            *m.at_mut(2, 2) = central.at(1, 1).clone();
            m
        }
        Rank4Layout::OddCorners => {
            // rows {1,2} carry cols {0,3}; rows {0,3} carry cols {1,2}
            let b = pick([(0, 1), (0, 2), (3, 1), (3, 2)]);
            let c = pick([(1, 0), (1, 3), (2, 0), (2, 3)]);
            let b_inv = b.inverse().map_err(|_| CollapseError::RankDeficient)?;
            let c_inv = c.inverse().map_err(|_| CollapseError::RankDeficient)?;
            // A = [rows 0,3 -> B over cols 1,2; rows 1,2 -> C over cols 0,3]
            // A^{-1} places C^{-1} on rows 0,3 / cols 1,2 and B^{-1} on
            // rows 1,2 / cols 0,3
            let mut m = Matrix::zero(4, 4);
            *m.at_mut(0, 1) = c_inv.at(0, 0).clone();
            *m.at_mut(0, 2) = c_inv.at(0, 1).clone();
            *m.at_mut(3, 1) = c_inv.at(1, 0).clone();
            *m.at_mut(3, 2) = c_inv.at(1, 1).clone();
            *m.at_mut(1, 0) = b_inv.at(0, 0).clone();
            *m.at_mut(1, 3) = b_inv.at(0, 1).clone();
            *m.at_mut(2, 0) = b_inv.at(1, 0).clone();
            *m.at_mut(2, 3) = b_inv.at(1, 1).clone();
            m
        }
    };
    if a.mul(&inv) != Matrix::identity(4) {
        return Err(CollapseError::RankDeficient);
    }
    if detect_layout(&inv)? != layout {
        return Err(CollapseError::FormViolation);
    }
    let (ilhs, irhs) = group_sign_sides(&inv, layout);
    let iexpect = if sign_plus { irhs.clone() } else { -&irhs };
    if ilhs != iexpect {
        return Err(CollapseError::SignRelationViolation);
    }
    Ok(inv)
}

/// One named verification step of a collapse run.
#[derive(Debug, Clone)]
pub struct CheckLine {
    pub name: String,
    pub pass: bool,
    pub witness: String,
}

impl CheckLine {
    fn pass(name: impl Into<String>, witness: impl Into<String>) -> Self {
        CheckLine { name: name.into(), pass: true, witness: witness.into() }
    }
}

/// A presumed holographic algorithm: the basis with the domain tensors and
/// their claimed standard signatures, plus an optional wiring for the
/// Holant-invariance regression.
#[derive(Debug, Clone)]
pub struct CollapseInstance {
    pub basis: Basis,
    /// (domain-k generator tensor, claimed standard signature)
    pub generators: Vec<(Signature, Signature)>,
    /// (domain-k recognizer tensor, claimed standard signature)
    pub recognizers: Vec<(Signature, Signature)>,
    /// Optional wiring over the domain-k slots for Holant invariance.
    pub wiring: Option<Vec<Wire>>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CollapseOptions {
    /// Verify underG = M^{ox n} G, underR M^{ox m} = R and the standard-
    /// signature checks before collapsing. Disabled only by harnesses that
    /// exercise the deeper lemma-violation detectors on tampered inputs.
    pub verify_inputs: bool,
}

impl Default for CollapseOptions {
    fn default() -> Self {
        CollapseOptions { verify_inputs: true }
    }
}

#[derive(Debug, Clone)]
pub struct CollapseResult {
    pub certificate: Option<MinimalPairCertificate>,
    pub sub_basis: Matrix,
    pub transducer: Matrix,
    /// Collapsed generator standard signatures, one per input generator.
    pub generators: Vec<Signature>,
    /// Collapsed recognizer standard signatures, one per input recognizer.
    pub recognizers: Vec<Signature>,
    pub report: Vec<CheckLine>,
}

fn verify_instance(inst: &CollapseInstance) -> Result<Vec<CheckLine>, CollapseError> {
    let mut report = Vec::new();
    for (j, (g, under_g)) in inst.generators.iter().enumerate() {
        let expect = inst.basis.generator_to_standard(g)?;
        if expect.entries() != under_g.entries() {
            return Err(CollapseError::InputMismatch(format!(
                "generator {j}: underG != M^(ox n) G"
            )));
        }
        if !under_g.is_standard_signature()? {
            return Err(CollapseError::InputMismatch(format!(
                "generator {j}: underG fails the standard-signature verifier"
            )));
        }
        report.push(CheckLine::pass(format!("input-generator-{j}"), "underG = M^(ox n) G, verifier pass"));
    }
    for (i, (r, under_r)) in inst.recognizers.iter().enumerate() {
        let expect = inst.basis.recognizer_from_standard(under_r)?;
        if expect.entries() != r.entries() {
            return Err(CollapseError::InputMismatch(format!(
                "recognizer {i}: underR M^(ox m) != R"
            )));
        }
        if !under_r.is_standard_signature()? {
            return Err(CollapseError::InputMismatch(format!(
                "recognizer {i}: underR fails the standard-signature verifier"
            )));
        }
        report.push(CheckLine::pass(format!("input-recognizer-{i}"), "underR M^(ox m) = R, verifier pass"));
    }
    Ok(report)
}

/// Holant over the domain tensors, over the original standard signatures,
/// and over the collapsed ones; all three must agree exactly.
fn holant_invariance_check(
    inst: &CollapseInstance,
    result: &CollapseResult,
    sub_l: usize,
) -> Result<Option<CheckLine>, CollapseError> {
    let Some(wires) = &inst.wiring else {
        return Ok(None);
    };
    let gens: Vec<Signature> = inst.generators.iter().map(|(g, _)| g.clone()).collect();
    let recs: Vec<Signature> = inst.recognizers.iter().map(|(r, _)| r.clone()).collect();
    let domain_value = holant_contract(&gens, &recs, wires, 24)?;
    let expand = |wires: &[Wire], l: usize| -> Vec<Wire> {
        wires
            .iter()
            .flat_map(|w| {
                (0..l).map(move |b| Wire {
                    generator: w.generator,
                    generator_slot: (w.generator_slot - 1) * l + b + 1,
                    recognizer: w.recognizer,
                    recognizer_slot: (w.recognizer_slot - 1) * l + b + 1,
                })
            })
            .collect()
    };
    let orig_gens: Vec<Signature> = inst.generators.iter().map(|(_, u)| u.clone()).collect();
    let orig_recs: Vec<Signature> = inst.recognizers.iter().map(|(_, u)| u.clone()).collect();
    let orig_value = holant_contract(
        &orig_gens,
        &orig_recs,
        &expand(wires, inst.basis.l()),
        26,
    )?;
    let coll_value = holant_contract(
        &result.generators,
        &result.recognizers,
        &expand(wires, sub_l),
        26,
    )?;
    if domain_value != orig_value || domain_value != coll_value {
        return Err(CollapseError::TheoremCheckFailed {
            lemma: "Holant invariance",
            detail: format!("domain={domain_value} original={orig_value} collapsed={coll_value}"),
        });
    }
    Ok(Some(CheckLine::pass("holant-invariance", format!("Holant = {domain_value}"))))
}

fn collapse_common(
    inst: &CollapseInstance,
    options: CollapseOptions,
    k: usize,
    same_parity: bool,
) -> Result<CollapseResult, CollapseError> {
    let sub_l = k.trailing_zeros() as usize; // collapsed basis size
    if inst.basis.k() != k {
        return Err(CollapseError::InputMismatch(format!(
            "domain-{k} pipeline run on basis with k = {}",
            inst.basis.k()
        )));
    }
    let mut report = if options.verify_inputs {
        verify_instance(inst)?
    } else {
        vec![CheckLine::pass("input-verification", "skipped by options")]
    };

    // trivial call: the basis is already k x k
    if inst.basis.l() == sub_l {
        let sub = inst.basis.matrix().clone();
        if sub.rank() != k {
            return Err(CollapseError::SingularSubbasis);
        }
        report.push(CheckLine::pass("already-minimal", format!("basis size is {sub_l}")));
        let result = CollapseResult {
            certificate: None,
            sub_basis: sub,
            transducer: Matrix::identity(k),
            generators: inst.generators.iter().map(|(_, u)| u.clone()).collect(),
            recognizers: inst.recognizers.iter().map(|(_, u)| u.clone()).collect(),
            report,
        };
        if let Some(line) = holant_invariance_check(inst, &result, sub_l)? {
            let mut result = result;
            result.report.push(line);
            return Ok(result);
        }
        return Ok(result);
    }

    // the first full-rank generator drives the search
    let Some((idx, t)) = inst
        .generators
        .iter()
        .enumerate()
        .find_map(|(j, (g, _))| g.full_rank_slot().map(|t| (j, t)))
    else {
        return Err(CollapseError::NoFullRankGenerator);
    };
    report.push(CheckLine::pass(
        "full-rank-generator",
        format!("generator {idx} at slot t = {t}"),
    ));
    let under_g1 = &inst.generators[idx].1;
    let cert = find_minimal_pairs(under_g1, inst.basis.l(), t, same_parity)?;
    report.push(CheckLine::pass(
        if same_parity { "Lemmas 5.2/5.3 distances" } else { "Lemmas 4.2/4.4 distances" },
        format!(
            "sigma={} tau={} zeta={} eta={} d={} d'={}",
            cert.sigma, cert.tau, cert.zeta, cert.eta, cert.d, cert.d_prime
        ),
    ));
    // Lemma 4.1.1 / 5.1 vanishing rows between the minimizers
    vanishing_check(under_g1, &cert, same_parity, &mut report)?;

    let (sub, row_patterns) = if k == 2 {
        (extract_subbasis_d2(&inst.basis, &cert)?, vec![cert.sigma, cert.tau])
    } else {
        let rows = subbasis_row_patterns_d4(&cert);
        let sub = extract_subbasis_d4(&inst.basis, &cert)?;
        // Theorem "sub-basis": underG(t) carries a rank-4 submatrix
        let r4 = rank4_submatrix(under_g1, &cert)?;
        report.push(CheckLine::pass(
            "Theorem sub-basis rank-4",
            format!("layout {:?}", r4.layout),
        ));
        (sub, rows)
    };
    report.push(CheckLine::pass(
        "sub-basis invertible",
        format!("rows {:?}", row_patterns.iter().map(Pattern::to_string).collect::<Vec<_>>()),
    ));
    let transducer = build_transducer(&inst.basis, &sub, &row_patterns)?;
    report.push(CheckLine::pass("transducer standard", "T = M (M^rows)^{-1} passes the verifier"));
    if transducer.mul(&sub) != *inst.basis.matrix() {
        return Err(CollapseError::TheoremCheckFailed {
            lemma: "T reconstruction",
            detail: "T . sub != M".into(),
        });
    }
    report.push(CheckLine::pass("reconstruction", "T . sub = M"));

    let sub_basis = Basis::new(sub_l, k, sub.clone())?;
    let mut generators = Vec::new();
    for (j, (g, _)) in inst.generators.iter().enumerate() {
        let collapsed = sub_basis.generator_to_standard(g)?;
        if !collapsed.is_standard_signature()? {
            return Err(CollapseError::TheoremCheckFailed {
                lemma: if k == 2 { "Theorem coro5.2" } else { "Theorem lemma4.3" },
                detail: format!("collapsed generator {j} fails the verifier"),
            });
        }
        generators.push(collapsed);
    }
    if !generators.is_empty() {
        report.push(CheckLine::pass(
            "collapsed generators standard",
            format!("{} signatures", generators.len()),
        ));
    }
    let mut recognizers = Vec::new();
    for (i, (r, under_r)) in inst.recognizers.iter().enumerate() {
        let copies = under_r.arity() / inst.basis.l();
        let collapsed = recognizer_times_transducer_power(under_r, &transducer, copies)?;
        if !collapsed.is_standard_signature()? {
            return Err(CollapseError::TheoremCheckFailed {
                lemma: "Lemma product transformer",
                detail: format!("collapsed recognizer {i} fails the verifier"),
            });
        }
        let back = sub_basis.recognizer_from_standard(&collapsed)?;
        if back.entries() != r.entries() {
            return Err(CollapseError::TheoremCheckFailed {
                lemma: "recognizer reconstruction",
                detail: format!("underR' (sub)^(ox m) != R for recognizer {i}"),
            });
        }
        recognizers.push(collapsed);
    }
    if !recognizers.is_empty() {
        report.push(CheckLine::pass(
            "collapsed recognizers standard + reconstructed",
            format!("{} signatures", recognizers.len()),
        ));
    }

    // domain 4: the group property delivers the dual recognizer for the
    // collapsed driver generator
    if k == 4 {
        let dual = dual_recognizer(&generators[idx], t)?;
        report.push(CheckLine::pass(
            "Theorem gplemma4 dual recognizer",
            format!("underG(t) underR(t) = I_4, arity {}", dual.arity()),
        ));
    } else {
        let g_coll = &generators[idx];
        if g_coll.clone().with_role(Role::Generator).matrix_form(t)?.rank() == 2 {
            let dual = dual_recognizer(g_coll, t)?;
            report.push(CheckLine::pass(
                "Lemma gplemma2 dual recognizer",
                format!("underG(t) underR(t) = I_2, arity {}", dual.arity()),
            ));
        }
    }

    let result = CollapseResult {
        certificate: Some(cert),
        sub_basis: sub,
        transducer,
        generators,
        recognizers,
        report,
    };
    let mut result = result;
    if let Some(line) = holant_invariance_check(inst, &result, sub_l)? {
        result.report.push(line);
    }
    Ok(result)
}

fn vanishing_check(
    under_g: &Signature,
    cert: &MinimalPairCertificate,
    same_parity: bool,
    report: &mut Vec<CheckLine>,
) -> Result<(), CollapseError> {
    let b = under_g.block_matrix_form(cert.t, cert.block_len)?;
    let d = cert.d;
    let mut checked = 0usize;
    for a in 0..b.rows() {
        let alpha = Pattern::from_index(cert.block_len, a);
        if same_parity && alpha.parity() != cert.sigma.parity() {
            continue;
        }
        let ds = alpha.xor(&cert.sigma).unwrap().wt();
        let dt = alpha.xor(&cert.tau).unwrap().wt();
        if ds > 0 && ds < d && dt > 0 && dt < d {
            checked += 1;
            if (0..b.cols()).any(|c| !b.at(a, c).is_zero()) {
                return Err(CollapseError::TheoremCheckFailed {
                    lemma: "Lemma 4.1.1/5.1 vanishing",
                    detail: format!("row {alpha} between the minimizers is nonzero"),
                });
            }
        }
    }
    report.push(CheckLine::pass(
        "Lemma 4.1.1/5.1 vanishing rows",
        format!("{checked} intermediate rows all zero"),
    ));
    Ok(())
}

/// Domain-2 collapse: any full-rank realization on a size-l basis is
/// simulated on the size-1 sub-basis M^{sigma,tau}.
pub fn collapse_domain2(
    inst: &CollapseInstance,
    options: CollapseOptions,
) -> Result<CollapseResult, CollapseError> {
    collapse_common(inst, options, 2, false)
}

/// Domain-4 collapse: any full-rank realization on a size-l basis is
/// simulated on the size-2 sub-basis M^{sigma + {e_p1, e_p2}}.
pub fn collapse_domain4(
    inst: &CollapseInstance,
    options: CollapseOptions,
) -> Result<CollapseResult, CollapseError> {
    collapse_common(inst, options, 4, true)
}

/// Domain-3 classification per the full-rank impossibility corollary.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Domain3Classification {
    /// A full-rank generator on a rank-3 basis: the transform provably
    /// fails the verifier; the witness names the failing check.
    FullRankImpossible { witness: String },
    /// Rank-2 basis: the reduction to domain 2 is an external procedure.
    ExternalRank2Reduction,
    /// All generators degenerate: the Holant is trivial.
    TrivialDegenerate,
}

pub fn classify_domain3(
    basis: &Basis,
    generators: &[Signature],
) -> Result<Domain3Classification, CollapseError> {
    if basis.k() != 3 {
        return Err(CollapseError::InputMismatch(format!(
            "domain-3 classifier run on k = {}",
            basis.k()
        )));
    }
    let rank = basis.matrix().rank();
    let full = generators.iter().find(|g| g.full_rank_slot().is_some());
    if let (Some(g), 3) = (full, rank) {
        let under = basis.generator_to_standard(g)?;
        let witness = if !under.is_standard_signature()? {
            match under.parity_check()? {
                crate::signature::ParityClass::Violation { even_witness, odd_witness } => {
                    format!("parity violation: nonzero at {even_witness} and {odd_witness}")
                }
                _ => match under.mgi_check()? {
                    crate::signature::MgiOutcome::Fail { alpha, positions, residual } => {
                        format!("MGI fail at alpha={alpha} P={positions:?} residual={residual}")
                    }
                    crate::signature::MgiOutcome::Pass => unreachable!("verifier said fail"),
                },
            }
        } else {
            // Corollary "rank": two same-parity independent rows force
            // rank >= 4, contradicting rank 3
            let t = g.full_rank_slot().unwrap();
            let r = basis.transported_matrix_form(g, t)?.rank();
            format!("rank(underG(t)) = {r} contradicts Corollary rank >= 4")
        };
        return Ok(Domain3Classification::FullRankImpossible { witness });
    }
    if rank == 2 {
        return Ok(Domain3Classification::ExternalRank2Reduction);
    }
    if generators.iter().all(|g| g.is_degenerate().is_some()) {
        return Ok(Domain3Classification::TrivialDegenerate);
    }
    Err(CollapseError::UnclassifiedInstance(format!(
        "rank(M) = {rank}, generators neither all degenerate nor any full rank"
    )))
}
