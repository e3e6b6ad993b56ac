//! Finite-dimensional Krein-space structure: the sign pattern of a fundamental
//! decomposition, the fundamental symmetry `J`, and the two adjoints.
//!
//! Everything here works in a basis that diagonalizes `J`, so the indefinite
//! product is `Σ σ_k x̄_k y_k` and the J-inner product is the standard one.

use nalgebra::{Complex, DMatrix, DVector};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{max_abs, CMatrix, CVector};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Signature(Vec<i8>);

impl Signature {
    /// Fails on any entry other than ±1.
    pub fn new(signs: Vec<i8>) -> Result<Self> {
        if let Some(pos) = signs.iter().position(|s| *s != 1 && *s != -1) {
            return Err(Error::InvalidDimension {
                dim: signs.len(),
                reason: format!("signature entry {pos} is {}, expected ±1", signs[pos]),
            });
        }
        Ok(Self(signs))
    }

    pub fn positive(dim: usize) -> Self {
        Self(vec![1; dim])
    }

    pub fn signs(&self) -> &[i8] {
        &self.0
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    /// `(n₊, n₋)`.
    pub fn counts(&self) -> (usize, usize) {
        let plus = self.0.iter().filter(|s| **s == 1).count();
        (plus, self.0.len() - plus)
    }
}

/// Fundamental symmetry `J = diag(σ)`.
#[derive(Clone, Debug, PartialEq)]
pub struct JMatrix(DVector<f64>);

impl JMatrix {
    fn from_signature(sig: &Signature) -> Self {
        Self(DVector::from_iterator(sig.dim(), sig.signs().iter().map(|s| f64::from(*s))))
    }

    pub fn diagonal(&self) -> &DVector<f64> {
        &self.0
    }

    pub fn to_matrix(&self) -> CMatrix {
        DMatrix::from_diagonal(&self.0.map(|s| Complex::new(s, 0.0)))
    }

    pub fn apply(&self, x: &CVector) -> CVector {
        x.component_mul(&self.0.map(|s| Complex::new(s, 0.0)))
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct MetricContext {
    signature: Signature,
    j: JMatrix,
    positive_definite: bool,
}

impl MetricContext {
    pub fn new(signature: Signature) -> Self {
        let j = JMatrix::from_signature(&signature);
        let positive_definite = signature.counts().1 == 0;
        Self { signature, j, positive_definite }
    }

    pub fn dim(&self) -> usize {
        self.signature.dim()
    }

    pub fn signature(&self) -> &Signature {
        &self.signature
    }

    pub fn j(&self) -> &JMatrix {
        &self.j
    }

    pub fn is_positive_definite(&self) -> bool {
        self.positive_definite
    }

    fn check_len(&self, got: usize) -> Result<()> {
        if got == self.dim() {
            Ok(())
        } else {
            Err(Error::DimensionMismatch { expected: self.dim(), got })
        }
    }

    fn check_square(&self, m: &CMatrix) -> Result<()> {
        self.check_len(m.nrows())?;
        self.check_len(m.ncols())
    }
}

/// Indefinite product `Σ σ_k x̄_k y_k`.
pub fn indefinite_dot(ctx: &MetricContext, x: &CVector, y: &CVector) -> Result<Complex<f64>> {
    ctx.check_len(x.len())?;
    ctx.check_len(y.len())?;
    Ok(x.iter()
        .zip(y.iter())
        .zip(ctx.signature.signs())
        .map(|((a, b), s)| a.conj() * b * f64::from(*s))
        .sum())
}

/// J-inner product `(x, Jy)`, i.e. the standard positive product in this basis.
pub fn j_dot(ctx: &MetricContext, x: &CVector, y: &CVector) -> Result<Complex<f64>> {
    ctx.check_len(x.len())?;
    ctx.check_len(y.len())?;
    Ok(x.dotc(y))
}

/// `A⁺ = J·A*·J`, where `A*` (the J-adjoint) is the conjugate transpose.
///
/// Computed entrywise as `σ_i·conj(A_ji)·σ_j`, so it is bit-exact.
pub fn plus_adjoint(ctx: &MetricContext, a: &CMatrix) -> Result<CMatrix> {
    ctx.check_square(a)?;
    let s = ctx.signature.signs();
    Ok(CMatrix::from_fn(a.nrows(), a.ncols(), |i, j| {
        a[(j, i)].conj() * f64::from(s[i] * s[j])
    }))
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct SelfAdjointCheck {
    pub residual: f64,
    pub pass: bool,
}

/// Max-entry magnitude of `A − A*`. In the J-orthonormal basis
/// J-self-adjointness is ordinary Hermiticity.
pub fn check_j_selfadjoint(ctx: &MetricContext, a: &CMatrix, tol: f64) -> Result<SelfAdjointCheck> {
    ctx.check_square(a)?;
    let residual = max_abs(&(a - a.adjoint()));
    Ok(SelfAdjointCheck { residual, pass: residual <= tol })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64) -> Complex<f64> {
        Complex::new(re, 0.0)
    }

    fn pm() -> MetricContext {
        MetricContext::new(Signature::new(vec![1, -1]).unwrap())
    }

    #[test]
    fn negative_sector_has_negative_norm() {
        let x = CVector::from_vec(vec![c(0.0), c(1.0)]);
        assert_eq!(indefinite_dot(&pm(), &x, &x).unwrap(), c(-1.0));
        assert_eq!(j_dot(&pm(), &x, &x).unwrap(), c(1.0));
    }

    #[test]
    fn zero_vector() {
        let z = CVector::zeros(2);
        assert_eq!(indefinite_dot(&pm(), &z, &z).unwrap(), c(0.0));
    }

    #[test]
    fn mixed_vectors() {
        let x = CVector::from_vec(vec![c(1.0), c(1.0)]);
        let y = CVector::from_vec(vec![c(1.0), c(-1.0)]);
        assert_eq!(indefinite_dot(&pm(), &x, &y).unwrap(), c(2.0));
        assert_eq!(j_dot(&pm(), &x, &x).unwrap(), c(2.0));
    }

    #[test]
    fn dimension_mismatch() {
        let x = CVector::zeros(3);
        assert!(matches!(
            indefinite_dot(&pm(), &x, &x),
            Err(Error::DimensionMismatch { expected: 2, got: 3 })
        ));
        assert!(plus_adjoint(&pm(), &CMatrix::zeros(3, 3)).is_err());
    }

    #[test]
    fn j_and_identity_are_plus_selfadjoint() {
        let ctx = MetricContext::new(Signature::new(vec![1, -1, 1, -1]).unwrap());
        let j = ctx.j().to_matrix();
        assert_eq!(plus_adjoint(&ctx, &j).unwrap(), j);
        let id = CMatrix::identity(4, 4);
        assert_eq!(plus_adjoint(&ctx, &id).unwrap(), id);
        assert_eq!(&j * &j, id);
    }

    #[test]
    fn bad_signature_rejected() {
        assert!(Signature::new(vec![1, 0, -1]).is_err());
        assert_eq!(Signature::new(vec![1, -1, -1]).unwrap().counts(), (1, 2));
        assert!(!pm().is_positive_definite());
        assert!(MetricContext::new(Signature::positive(3)).is_positive_definite());
    }

    #[test]
    fn selfadjoint_residuals() {
        let ctx = MetricContext::new(Signature::positive(3));
        let d = CMatrix::from_diagonal(&CVector::from_vec(vec![c(1.0), c(2.0), c(3.0)]));
        let chk = check_j_selfadjoint(&ctx, &d, 1e-12).unwrap();
        assert_eq!(chk.residual, 0.0);
        assert!(chk.pass);
        let mut ladder = CMatrix::zeros(3, 3);
        ladder[(0, 1)] = c(1.0);
        ladder[(1, 2)] = c(2f64.sqrt());
        let chk = check_j_selfadjoint(&ctx, &ladder, 1e-12).unwrap();
        assert!(!chk.pass);
        assert!((chk.residual - 2f64.sqrt()).abs() < 1e-15);
    }
}
