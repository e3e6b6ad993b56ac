//! Truncated matrix realizations of `a`, `a⁺`, `J`, `N` in the J-orthonormal
//! basis `ψ̃_k = e_k / √|(e_k, e_k)|`, built from closed-form matrix elements.
//!
//! Truncation is a hard cutoff in the `N`-eigenbasis. Only the corner where a
//! ladder operator would leave the window is wrong; [`InteriorProjector`]
//! compresses that corner away.

use nalgebra::DMatrix;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};

use crate::algebra::{self, FormalState, Generator, OperatorExpr, RepresentationKind};
use crate::error::{Error, Result};
use crate::krein::{MetricContext, Signature};
use crate::linalg::{leading_block, max_abs, op_norm, real, CMatrix, C64};
use crate::scalar::rat_to_f64;

#[derive(Clone, Debug)]
pub struct TruncatedRep {
    kind: RepresentationKind,
    dim: usize,
    /// Basis index `k` of the first row.
    offset: i64,
    a: CMatrix,
    a_dag: CMatrix,
    n: CMatrix,
    metric: MetricContext,
    labels: Vec<String>,
}

/// Compression onto basis rows `lower .. dim − margin`.
///
/// One-sided for Fock and anti-Fock (the spectrum is bounded on one side);
/// the Λ window is cut at both ends.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct InteriorProjector {
    margin: usize,
    dim: usize,
    lower: usize,
}

impl InteriorProjector {
    pub fn new(dim: usize, margin: usize) -> Result<Self> {
        if margin >= dim {
            return Err(Error::MarginTooLarge { margin, dim });
        }
        Ok(Self { margin, dim, lower: 0 })
    }

    fn two_sided(dim: usize, margin: usize) -> Result<Self> {
        if 2 * margin >= dim {
            return Err(Error::MarginTooLarge { margin, dim });
        }
        Ok(Self { margin, dim, lower: margin })
    }

    pub fn margin(&self) -> usize {
        self.margin
    }

    pub fn range(&self) -> std::ops::Range<usize> {
        self.lower..self.dim - self.margin
    }

    pub fn len(&self) -> usize {
        self.range().len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn compress(&self, m: &CMatrix) -> CMatrix {
        let r = self.range();
        if r.start == 0 {
            return leading_block(m, r.len());
        }
        m.view((r.start, r.start), (r.len(), r.len())).into_owned()
    }
}

fn lambda_f64(kind: &RepresentationKind) -> Option<f64> {
    match kind {
        RepresentationKind::Lambda(l) => Some(rat_to_f64(l.value())),
        _ => None,
    }
}

/// Exact `λ + k` as a float, so spectra compare bit-for-bit with the catalog.
fn lambda_shift(kind: &RepresentationKind, k: i64) -> f64 {
    match kind {
        RepresentationKind::Lambda(l) => {
            rat_to_f64(&(l.value() + BigRational::from_integer(BigInt::from(k))))
        }
        _ => unreachable!("lambda_shift on a non-Λ representation"),
    }
}

/// Eigenvalue of `N` on `e_k`.
pub fn number_eigenvalue(kind: &RepresentationKind, k: i64) -> f64 {
    match kind {
        RepresentationKind::Fock => k as f64,
        RepresentationKind::AntiFock => -(k as f64) - 1.0,
        RepresentationKind::Lambda(_) => lambda_shift(kind, k),
    }
}

/// Builds the dimension-`dim` realization. The Λ window is `{−K, …, K}` with
/// `dim = 2K + 1`.
pub fn build_rep(kind: RepresentationKind, dim: usize) -> Result<TruncatedRep> {
    if dim < 2 {
        return Err(Error::InvalidDimension { dim, reason: "dimension must be at least 2".into() });
    }
    let offset = match kind {
        RepresentationKind::Lambda(_) => {
            if dim % 2 == 0 {
                return Err(Error::InvalidDimension {
                    dim,
                    reason: "the Λ window {-K..K} needs an odd dimension 2K+1".into(),
                });
            }
            -((dim as i64 - 1) / 2)
        }
        _ => 0,
    };
    let index = |row: usize| row as i64 + offset;

    let mut a = CMatrix::zeros(dim, dim);
    let mut a_dag = CMatrix::zeros(dim, dim);
    for col in 0..dim {
        let k = index(col);
        let kf = k as f64;
        match &kind {
            RepresentationKind::Fock => {
                if col > 0 {
                    a[(col - 1, col)] = real(kf.sqrt());
                }
                if col + 1 < dim {
                    a_dag[(col + 1, col)] = real((kf + 1.0).sqrt());
                }
            }
            RepresentationKind::AntiFock => {
                if col + 1 < dim {
                    a[(col + 1, col)] = real((kf + 1.0).sqrt());
                }
                if col > 0 {
                    a_dag[(col - 1, col)] = real(-kf.sqrt());
                }
            }
            RepresentationKind::Lambda(_) => {
                let lam = lambda_f64(&kind).unwrap_or_default();
                if col > 0 {
                    a[(col - 1, col)] = real((lam + kf).abs().sqrt());
                }
                if col + 1 < dim {
                    let x = lam + kf + 1.0;
                    a_dag[(col + 1, col)] = real(x.signum() * x.abs().sqrt());
                }
            }
        }
    }

    let signs: Vec<i8> = match &kind {
        RepresentationKind::Fock => vec![1; dim],
        RepresentationKind::AntiFock => (0..dim).map(|r| if r % 2 == 0 { 1 } else { -1 }).collect(),
        RepresentationKind::Lambda(_) => {
            // sign(e_{k+1}) = sign(e_k)·sign(λ + k + 1), with e_0 positive
            let lam = lambda_f64(&kind).unwrap_or_default();
            let zero = (-offset) as usize;
            let mut s = vec![1i8; dim];
            for r in zero + 1..dim {
                s[r] = s[r - 1] * (lam + index(r) as f64).signum() as i8;
            }
            for r in (0..zero).rev() {
                s[r] = s[r + 1] * (lam + index(r) as f64 + 1.0).signum() as i8;
            }
            s
        }
    };

    let n = DMatrix::from_fn(dim, dim, |i, j| {
        if i == j {
            real(number_eigenvalue(&kind, index(i)))
        } else {
            C64::new(0.0, 0.0)
        }
    });

    let labels = (0..dim)
        .map(|r| {
            let k = index(r);
            match &kind {
                RepresentationKind::Fock => format!("psi_{k}"),
                RepresentationKind::AntiFock => format!("psi_-{}", k + 1),
                RepresentationKind::Lambda(_) => format!("psi_lambda{k:+}"),
            }
        })
        .collect();

    Ok(TruncatedRep {
        kind,
        dim,
        offset,
        a,
        a_dag,
        n,
        metric: MetricContext::new(Signature::new(signs)?),
        labels,
    })
}

impl TruncatedRep {
    pub fn kind(&self) -> &RepresentationKind {
        &self.kind
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Basis index `k` of `e_k` sitting at matrix row `row`.
    pub fn basis_index(&self, row: usize) -> i64 {
        row as i64 + self.offset
    }

    pub fn a(&self) -> &CMatrix {
        &self.a
    }

    pub fn a_dag(&self) -> &CMatrix {
        &self.a_dag
    }

    pub fn j(&self) -> CMatrix {
        self.metric.j().to_matrix()
    }

    /// Compression of `N` onto the window. Differs from the truncated product
    /// `a⁺·a` only in the corner where `a` leaves the window.
    pub fn n(&self) -> &CMatrix {
        &self.n
    }

    pub fn metric(&self) -> &MetricContext {
        &self.metric
    }

    pub fn signature(&self) -> &Signature {
        self.metric.signature()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    /// Anti-Fock basis relabeled by the `b`-number: `ψ₋ₙ = ψ̃ₙ₋₁`.
    pub fn b_labels(&self) -> Vec<String> {
        (0..self.dim).map(|m| format!("psit_{m}")).collect()
    }

    pub fn interior(&self, margin: usize) -> Result<InteriorProjector> {
        match self.kind {
            RepresentationKind::Lambda(_) => InteriorProjector::two_sided(self.dim, margin),
            _ => InteriorProjector::new(self.dim, margin),
        }
    }

    /// The pair `(b, b*)` that satisfies the standard relation `[b, b*] = 1`.
    ///
    /// Fock: `b = a`, `b* = a⁺`. Anti-Fock: `b = a⁺`, `b* = J b⁺ J = −a`.
    pub fn b_pair(&self) -> Result<(CMatrix, CMatrix)> {
        match self.kind {
            RepresentationKind::Fock => Ok((self.a.clone(), self.a_dag.clone())),
            RepresentationKind::AntiFock => Ok((self.a_dag.clone(), -&self.a)),
            RepresentationKind::Lambda(_) => Err(Error::UnsupportedKind {
                kind: self.kind.clone(),
                reason: "no standard b-pair for the Λ-case".into(),
            }),
        }
    }

    /// `Ñ = b*·b`: `N` itself for Fock, `−N − 1` for anti-Fock.
    pub fn n_tilde(&self) -> Result<CMatrix> {
        match self.kind {
            RepresentationKind::Fock => Ok(self.n.clone()),
            RepresentationKind::AntiFock => {
                Ok(-&self.n - CMatrix::identity(self.dim, self.dim))
            }
            RepresentationKind::Lambda(_) => Err(Error::UnsupportedKind {
                kind: self.kind.clone(),
                reason: "Ñ is defined only for the Fock and anti-Fock cases".into(),
            }),
        }
    }
}

/// Self-adjoint pair `(P̃, Q̃)` built from the `b`-operators.
#[derive(Clone, Debug)]
pub struct PQPair {
    pub p: CMatrix,
    pub q: CMatrix,
    pub kind: RepresentationKind,
}

impl PQPair {
    pub fn dim(&self) -> usize {
        self.p.nrows()
    }
}

/// `P̃ = (b − b*)/(i√2)`, `Q̃ = (b + b*)/√2`; for anti-Fock this is
/// `P̃ = (a⁺ + a)/(i√2)`, `Q̃ = (a⁺ − a)/√2`.
pub fn build_pq(rep: &TruncatedRep) -> Result<PQPair> {
    let (b, b_star) = rep.b_pair().map_err(|_| Error::UnsupportedKind {
        kind: rep.kind.clone(),
        reason: "no Weyl analogue for the Λ-case".into(),
    })?;
    let inv_i_sqrt2 = C64::new(0.0, -std::f64::consts::FRAC_1_SQRT_2);
    let p = (&b - &b_star) * inv_i_sqrt2;
    let q = (&b + &b_star) * real(std::f64::consts::FRAC_1_SQRT_2);
    Ok(PQPair { p, q, kind: rep.kind.clone() })
}

/// Spectral norm of `[a, a⁺] − 1` on the interior.
pub fn commutator_residual(rep: &TruncatedRep, margin: usize) -> Result<f64> {
    let proj = rep.interior(margin)?;
    let comm = &rep.a * &rep.a_dag - &rep.a_dag * &rep.a - CMatrix::identity(rep.dim, rep.dim);
    Ok(op_norm(&proj.compress(&comm)))
}

/// Eigenvalues of `N`, ascending. `N` is diagonal by construction.
pub fn spectrum_n(rep: &TruncatedRep) -> Vec<f64> {
    let mut ev: Vec<f64> = rep.n.diagonal().iter().map(|z| z.re).collect();
    ev.sort_by(f64::total_cmp);
    ev
}

/// Exact catalog prediction `{k}`, `{−(k+1)}` or `{λ + k}` over the window, ascending.
pub fn predicted_spectrum(kind: &RepresentationKind, dim: usize) -> Vec<BigRational> {
    let offset = match kind {
        RepresentationKind::Lambda(_) => -((dim as i64 - 1) / 2),
        _ => 0,
    };
    let mut out: Vec<BigRational> = (0..dim as i64)
        .map(|r| {
            let k = BigRational::from_integer(BigInt::from(r + offset));
            match kind {
                RepresentationKind::Fock => k,
                RepresentationKind::AntiFock => -k - BigRational::from_integer(1.into()),
                RepresentationKind::Lambda(l) => l.value() + k,
            }
        })
        .collect();
    out.sort();
    out
}

/// Entry `⟨ψ̃_row, X ψ̃_col⟩_J` of a generator computed through the exact
/// symbolic engine: the unnormalized value is exact in ℚ, and the
/// J-normalization `1/√|g_row g_col|` is applied last.
pub fn symbolic_entry(kind: &RepresentationKind, g: Generator, row: i64, col: i64) -> Result<f64> {
    let e_row = FormalState::basis(kind.clone(), row)?;
    let e_col = FormalState::basis(kind.clone(), col)?;
    let image = algebra::apply(&OperatorExpr::generator(g), &e_col);
    let num = algebra::inner_j(&e_row, &image)?;
    let num = num
        .as_rational()
        .cloned()
        .expect("generator matrix elements are rational in the unnormalized basis");
    if num.is_zero() {
        return Ok(0.0);
    }
    let norm = algebra::gram_norm(kind, row).abs() * algebra::gram_norm(kind, col).abs();
    let magnitude = rat_to_f64(&(&num * &num / norm)).sqrt();
    Ok(if num.is_negative() { -magnitude } else { magnitude })
}

/// Largest deviation between the closed-form matrices `A`, `A⁺`, `J` and the
/// symbolic-engine values, over all entries.
pub fn oracle_deviation(rep: &TruncatedRep) -> Result<f64> {
    let jm = rep.j();
    let mut worst = 0.0f64;
    for (g, m) in [(Generator::A, &rep.a), (Generator::ADag, &rep.a_dag), (Generator::J, &jm)] {
        for r in 0..rep.dim {
            for c in 0..rep.dim {
                let exact = symbolic_entry(&rep.kind, g, rep.basis_index(r), rep.basis_index(c))?;
                worst = worst.max((m[(r, c)] - real(exact)).norm());
            }
        }
    }
    Ok(worst)
}

/// Entrywise distance of a matrix from its conjugate transpose.
pub fn hermiticity_residual(m: &CMatrix) -> f64 {
    max_abs(&(m - m.adjoint()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::krein::plus_adjoint;

    fn lambda(n: i64, d: i64) -> RepresentationKind {
        RepresentationKind::lambda(BigRational::new(n.into(), d.into())).unwrap()
    }

    fn diag_re(m: &CMatrix) -> Vec<f64> {
        m.diagonal().iter().map(|z| z.re).collect()
    }

    #[test]
    fn anti_fock_small() {
        let rep = build_rep(RepresentationKind::AntiFock, 3).unwrap();
        assert_eq!(diag_re(rep.n()), vec![-1.0, -2.0, -3.0]);
        assert_eq!(diag_re(&rep.j()), vec![1.0, -1.0, 1.0]);
        assert_eq!(rep.labels(), ["psi_-1", "psi_-2", "psi_-3"]);
    }

    #[test]
    fn fock_two_by_two_ladder() {
        let rep = build_rep(RepresentationKind::Fock, 2).unwrap();
        let expected = CMatrix::from_row_slice(2, 2, &[real(0.0), real(1.0), real(0.0), real(0.0)]);
        assert_eq!(rep.a(), &expected);
    }

    #[test]
    fn anti_fock_a_dag_column() {
        let rep = build_rep(RepresentationKind::AntiFock, 4).unwrap();
        assert_eq!(rep.a_dag()[(1, 2)], real(-(2f64.sqrt())));
    }

    #[test]
    fn a_dag_is_plus_adjoint_of_a() {
        for kind in [RepresentationKind::Fock, RepresentationKind::AntiFock, lambda(-1, 2)] {
            let rep = build_rep(kind, 9).unwrap();
            let plus = plus_adjoint(rep.metric(), rep.a()).unwrap();
            assert!(max_abs(&(plus - rep.a_dag())) < 1e-15);
        }
    }

    #[test]
    fn invalid_dimensions() {
        assert!(matches!(
            build_rep(RepresentationKind::AntiFock, 1),
            Err(Error::InvalidDimension { dim: 1, .. })
        ));
        assert!(build_rep(lambda(-1, 2), 4).is_err());
    }

    #[test]
    fn spectra() {
        let af = build_rep(RepresentationKind::AntiFock, 5).unwrap();
        assert_eq!(spectrum_n(&af), vec![-5.0, -4.0, -3.0, -2.0, -1.0]);
        let f = build_rep(RepresentationKind::Fock, 3).unwrap();
        assert_eq!(spectrum_n(&f), vec![0.0, 1.0, 2.0]);
        let l = build_rep(lambda(-1, 2), 5).unwrap();
        assert_eq!(spectrum_n(&l), vec![-2.5, -1.5, -0.5, 0.5, 1.5]);
    }

    #[test]
    fn lambda_signature_flips_below_reference() {
        let rep = build_rep(lambda(-1, 3), 7).unwrap();
        assert_eq!(rep.signature().signs(), &[-1, 1, -1, 1, 1, 1, 1]);
    }

    #[test]
    fn commutator_corner() {
        let rep = build_rep(RepresentationKind::AntiFock, 16).unwrap();
        assert!(commutator_residual(&rep, 1).unwrap() <= 1e-13);
        assert!((commutator_residual(&rep, 0).unwrap() - 16.0).abs() < 1e-9);
        let small = build_rep(RepresentationKind::AntiFock, 2).unwrap();
        assert!(commutator_residual(&small, 1).unwrap() < 1e-15);
        assert!(matches!(commutator_residual(&rep, 16), Err(Error::MarginTooLarge { .. })));
    }

    #[test]
    fn lambda_commutator_needs_two_sided_interior() {
        let rep = build_rep(lambda(-1, 2), 11).unwrap();
        assert!(commutator_residual(&rep, 1).unwrap() <= 1e-13);
        assert!(rep.interior(6).is_err());
    }

    #[test]
    fn pq_hermitian_and_canonical() {
        let rep = build_rep(RepresentationKind::AntiFock, 2).unwrap();
        let pq = build_pq(&rep).unwrap();
        assert_eq!(hermiticity_residual(&pq.p), 0.0);
        assert_eq!(hermiticity_residual(&pq.q), 0.0);

        let rep = build_rep(RepresentationKind::AntiFock, 24).unwrap();
        let pq = build_pq(&rep).unwrap();
        let comm = &pq.p * &pq.q - &pq.q * &pq.p;
        let target = CMatrix::identity(24, 24) * C64::new(0.0, -1.0);
        let proj = rep.interior(1).unwrap();
        assert!(op_norm(&proj.compress(&(comm - target))) <= 1e-12);
    }

    #[test]
    fn pq_rejects_lambda() {
        let rep = build_rep(lambda(-1, 2), 5).unwrap();
        assert!(matches!(build_pq(&rep), Err(Error::UnsupportedKind { .. })));
    }

    #[test]
    fn oscillator_identity_on_interior() {
        let rep = build_rep(RepresentationKind::AntiFock, 20).unwrap();
        let pq = build_pq(&rep).unwrap();
        let n_tilde = rep.n_tilde().unwrap();
        let lhs = &pq.p * &pq.p + &pq.q * &pq.q;
        let rhs = n_tilde * real(2.0) + CMatrix::identity(20, 20);
        let proj = rep.interior(1).unwrap();
        assert!(max_abs(&proj.compress(&(lhs - rhs))) < 1e-12);
    }

    #[test]
    fn predicted_matches_lambda_window() {
        let kind = lambda(-1, 3);
        let pred = predicted_spectrum(&kind, 5);
        let rep = build_rep(kind, 5).unwrap();
        let got = spectrum_n(&rep);
        assert_eq!(got, pred.iter().map(rat_to_f64).collect::<Vec<_>>());
    }

    #[test]
    fn symbolic_oracle_agrees_small() {
        for kind in [RepresentationKind::Fock, RepresentationKind::AntiFock, lambda(-1, 3)] {
            let rep = build_rep(kind, 7).unwrap();
            assert!(oracle_deviation(&rep).unwrap() <= 1e-14);
        }
    }
}
