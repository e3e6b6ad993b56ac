//! Weyl operators, the Schrödinger target in the oscillator number basis, and
//! the explicit unitary intertwiner that witnesses von Neumann uniqueness for
//! the anti-Fock pair.

use std::collections::BTreeMap;
use std::time::{Duration, Instant};

use nalgebra::{Complex, DVector};
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{max_abs, op_norm, real, CMatrix, C64};
use crate::matrix_rep::{build_pq, hermiticity_residual, PQPair, TruncatedRep};
use crate::algebra::RepresentationKind;

/// Generators must be Hermitian to this entrywise tolerance before exponentiation.
pub const HERMITIAN_TOL: f64 = 1e-10;

/// Largest `|s|`, `|t|` accepted by the Weyl residual routines.
pub const MAX_WEYL_PARAMETER: f64 = 10.0;

/// Spectral decomposition `H = V·diag(λ)·V†` of a Hermitian matrix.
#[derive(Clone, Debug)]
pub struct HermitianSpectrum {
    eigenvalues: DVector<f64>,
    vectors: CMatrix,
}

impl HermitianSpectrum {
    pub fn new(h: &CMatrix) -> Result<Self> {
        if h.nrows() != h.ncols() {
            return Err(Error::DimensionMismatch { expected: h.nrows(), got: h.ncols() });
        }
        let res = hermiticity_residual(h);
        if !(res <= HERMITIAN_TOL) {
            return Err(Error::NotHermitian(res));
        }
        let eig = h.clone().symmetric_eigen();
        if eig.eigenvalues.iter().any(|x| !x.is_finite()) {
            return Err(Error::NotHermitian(f64::NAN));
        }
        Ok(Self { eigenvalues: eig.eigenvalues, vectors: eig.eigenvectors })
    }

    pub fn eigenvalues(&self) -> &DVector<f64> {
        &self.eigenvalues
    }

    /// `exp(i·t·H)`.
    pub fn exp_i(&self, t: f64) -> CMatrix {
        let phases = self.eigenvalues.map(|l| Complex::from_polar(1.0, t * l));
        let mut scaled = self.vectors.clone();
        for (mut col, ph) in scaled.column_iter_mut().zip(phases.iter()) {
            col *= *ph;
        }
        scaled * self.vectors.adjoint()
    }
}

/// Unitary `U = exp(i·t·H)`.
#[derive(Clone, Debug)]
pub struct WeylOperator {
    pub generator: CMatrix,
    pub t: f64,
    pub matrix: CMatrix,
}

impl WeylOperator {
    /// `‖U†U − I‖_max`.
    pub fn unitarity_defect(&self) -> f64 {
        let n = self.matrix.nrows();
        max_abs(&(self.matrix.adjoint() * &self.matrix - CMatrix::identity(n, n)))
    }
}

pub fn expm_hermitian(h: &CMatrix, t: f64) -> Result<WeylOperator> {
    let spec = HermitianSpectrum::new(h)?;
    Ok(WeylOperator { generator: h.clone(), t, matrix: spec.exp_i(t) })
}

fn check_parameter(x: f64) -> Result<()> {
    if x.is_finite() && x.abs() <= MAX_WEYL_PARAMETER {
        Ok(())
    } else {
        Err(Error::InvalidDimension {
            dim: 0,
            reason: format!("Weyl parameter {x} outside [-{MAX_WEYL_PARAMETER}, {MAX_WEYL_PARAMETER}]"),
        })
    }
}

fn interior_len(dim: usize, margin: usize) -> Result<usize> {
    if margin >= dim {
        return Err(Error::MarginTooLarge { margin, dim });
    }
    Ok(dim - margin)
}

fn compressed_norm(m: &CMatrix, keep: usize) -> f64 {
    op_norm(&m.view((0, 0), (keep, keep)).into_owned())
}

/// Cached spectra of a self-adjoint pair, for evaluating many Weyl products.
#[derive(Clone, Debug)]
pub struct WeylPair {
    p: HermitianSpectrum,
    q: HermitianSpectrum,
    dim: usize,
}

impl WeylPair {
    pub fn new(p: &CMatrix, q: &CMatrix) -> Result<Self> {
        Ok(Self { p: HermitianSpectrum::new(p)?, q: HermitianSpectrum::new(q)?, dim: p.nrows() })
    }

    pub fn from_pq(pq: &PQPair) -> Result<Self> {
        Self::new(&pq.p, &pq.q)
    }

    /// `U(t) = exp(itP)`.
    pub fn u(&self, t: f64) -> CMatrix {
        self.p.exp_i(t)
    }

    /// `V(s) = exp(isQ)`.
    pub fn v(&self, s: f64) -> CMatrix {
        self.q.exp_i(s)
    }

    fn residual_from(&self, u: &CMatrix, v: &CMatrix, s: f64, t: f64, keep: usize) -> f64 {
        let phase = Complex::from_polar(1.0, s * t);
        let diff = u * v - v * u * phase;
        compressed_norm(&diff, keep)
    }

    /// Interior spectral norm of `U(t)V(s) − e^{ist} V(s)U(t)`.
    pub fn residual(&self, s: f64, t: f64, margin: usize) -> Result<f64> {
        check_parameter(s)?;
        check_parameter(t)?;
        let keep = interior_len(self.dim, margin)?;
        Ok(self.residual_from(&self.u(t), &self.v(s), s, t, keep))
    }
}

/// Weyl-relation residual of a truncated pair; tends to zero as the dimension grows.
pub fn weyl_residual(pq: &PQPair, s: f64, t: f64, margin: usize) -> Result<f64> {
    interior_len(pq.dim(), margin)?;
    WeylPair::from_pq(pq)?.residual(s, t, margin)
}

/// Schrödinger `p`, `q` written in the Hermite-function (number) basis.
#[derive(Clone, Debug)]
pub struct SchrodingerTarget {
    pub p: CMatrix,
    pub q: CMatrix,
    /// Oscillator lowering operator `c`, `c[n−1, n] = √n`.
    pub c: CMatrix,
}

impl SchrodingerTarget {
    pub fn dim(&self) -> usize {
        self.c.nrows()
    }
}

/// `q = (c⁺ + c)/√2`, `p = i(c⁺ − c)/√2`.
pub fn schrodinger_target(dim: usize) -> Result<SchrodingerTarget> {
    if dim < 2 {
        return Err(Error::InvalidDimension { dim, reason: "dimension must be at least 2".into() });
    }
    let mut c = CMatrix::zeros(dim, dim);
    for n in 1..dim {
        c[(n - 1, n)] = real((n as f64).sqrt());
    }
    let c_dag = c.adjoint();
    let q = (&c_dag + &c) * real(std::f64::consts::FRAC_1_SQRT_2);
    let p = (&c_dag - &c) * C64::new(0.0, std::f64::consts::FRAC_1_SQRT_2);
    Ok(SchrodingerTarget { p, q, c })
}

/// Diagonal unitary `W` mapping `ψ̃_m ↦ φ_m h_m`.
#[derive(Clone, Debug)]
pub struct Intertwiner {
    phases: Vec<C64>,
    pub source: String,
    pub target: String,
}

impl Intertwiner {
    pub fn phases(&self) -> &[C64] {
        &self.phases
    }

    pub fn matrix(&self) -> CMatrix {
        CMatrix::from_diagonal(&DVector::from_vec(self.phases.clone()))
    }

    /// `W·M·W†`, entrywise `φ_i M_ij φ̄_j`.
    pub fn conjugate(&self, m: &CMatrix) -> CMatrix {
        CMatrix::from_fn(m.nrows(), m.ncols(), |i, j| {
            self.phases[i] * m[(i, j)] * self.phases[j].conj()
        })
    }
}

/// Derives the phases from the `b` matrix so that `W b W† = c`: `φ_0 = 1` and
/// `φ_m = φ_{m−1}·b[m−1,m]/|b[m−1,m]|`.
pub fn build_intertwiner(rep: &TruncatedRep) -> Result<Intertwiner> {
    let (b, _) = match rep.kind() {
        RepresentationKind::Lambda(_) => {
            return Err(Error::UnsupportedKind {
                kind: rep.kind().clone(),
                reason: "no Schrödinger intertwiner for the Λ-case".into(),
            })
        }
        _ => rep.b_pair()?,
    };
    let mut phases = vec![real(1.0)];
    for m in 1..rep.dim() {
        let entry = b[(m - 1, m)];
        let prev = phases[m - 1];
        phases.push(prev * entry / entry.norm());
    }
    Ok(Intertwiner {
        phases,
        source: format!("{} b-basis", rep.kind()),
        target: "schrodinger number basis".into(),
    })
}

/// `max(‖W b W† − c‖, ‖W b* W† − c†‖)` entrywise.
pub fn ladder_intertwining_error(rep: &TruncatedRep, w: &Intertwiner) -> Result<f64> {
    let (b, b_star) = rep.b_pair()?;
    let target = schrodinger_target(rep.dim())?;
    Ok(max_abs(&(w.conjugate(&b) - &target.c))
        .max(max_abs(&(w.conjugate(&b_star) - target.c.adjoint()))))
}

#[derive(Clone, Debug, Serialize)]
pub struct GridPoint {
    pub s: f64,
    pub t: f64,
    /// `‖W U(t)V(s) W† − u(t)v(s)‖` on the interior.
    pub intertwined_vs_target: f64,
    pub source_weyl: f64,
    pub target_weyl: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct EquivalenceReport {
    pub dim: usize,
    pub margin: usize,
    pub err_p: f64,
    pub err_q: f64,
    pub err_ladder: f64,
    /// Largest multiplicity of an `N` eigenvalue; 1 means a single Schrödinger summand.
    pub max_multiplicity: usize,
    pub grid: Vec<GridPoint>,
    pub max_intertwined_vs_target: f64,
    pub max_source_weyl: f64,
    pub max_target_weyl: f64,
    /// Excluded from serialized reports so they stay deterministic.
    #[serde(skip)]
    pub wall_clock: Duration,
}

fn max_multiplicity(rep: &TruncatedRep) -> usize {
    let mut counts: BTreeMap<u64, usize> = BTreeMap::new();
    for z in rep.n().diagonal().iter() {
        *counts.entry(z.re.to_bits()).or_default() += 1;
    }
    counts.values().copied().max().unwrap_or(0)
}

/// Intertwines the truncated `(P̃, Q̃)` pair with the Schrödinger pair and
/// compares the Weyl operators on every grid point.
pub fn verify_von_neumann(
    rep: &TruncatedRep,
    grid: &[(f64, f64)],
    margin: usize,
) -> Result<EquivalenceReport> {
    let started = Instant::now();
    if grid.is_empty() {
        return Err(Error::InvalidDimension { dim: rep.dim(), reason: "empty (s,t) grid".into() });
    }
    for &(s, t) in grid {
        check_parameter(s)?;
        check_parameter(t)?;
    }
    let keep = interior_len(rep.dim(), margin)?;
    let pq = build_pq(rep)?;
    let target = schrodinger_target(rep.dim())?;
    let w = build_intertwiner(rep)?;
    let err_p = max_abs(&(w.conjugate(&pq.p) - &target.p));
    let err_q = max_abs(&(w.conjugate(&pq.q) - &target.q));
    let err_ladder = ladder_intertwining_error(rep, &w)?;

    let source = WeylPair::from_pq(&pq)?;
    let dest = WeylPair::new(&target.p, &target.q)?;

    // each distinct parameter is exponentiated once
    let keys = |f: fn(&(f64, f64)) -> f64| {
        let mut v: Vec<u64> = grid.iter().map(|x| f(x).to_bits()).collect();
        v.sort_unstable();
        v.dedup();
        v
    };
    let ts = keys(|x| x.1);
    let ss = keys(|x| x.0);
    let cache = |keys: &[u64], pair: &WeylPair, is_u: bool| -> BTreeMap<u64, CMatrix> {
        keys.par_iter()
            .map(|&k| {
                let x = f64::from_bits(k);
                (k, if is_u { pair.u(x) } else { pair.v(x) })
            })
            .collect()
    };
    let (su, sv) = (cache(&ts, &source, true), cache(&ss, &source, false));
    let (tu, tv) = (cache(&ts, &dest, true), cache(&ss, &dest, false));

    let points: Vec<GridPoint> = grid
        .par_iter()
        .map(|&(s, t)| {
            let (u, v) = (&su[&t.to_bits()], &sv[&s.to_bits()]);
            let (ut, vt) = (&tu[&t.to_bits()], &tv[&s.to_bits()]);
            let intertwined = w.conjugate(&(u * v));
            GridPoint {
                s,
                t,
                intertwined_vs_target: compressed_norm(&(intertwined - ut * vt), keep),
                source_weyl: source.residual_from(u, v, s, t, keep),
                target_weyl: dest.residual_from(ut, vt, s, t, keep),
            }
        })
        .collect();

    let fold = |f: fn(&GridPoint) -> f64| points.iter().map(f).fold(0.0, f64::max);
    Ok(EquivalenceReport {
        dim: rep.dim(),
        margin,
        err_p,
        err_q,
        err_ladder,
        max_multiplicity: max_multiplicity(rep),
        max_intertwined_vs_target: fold(|g| g.intertwined_vs_target),
        max_source_weyl: fold(|g| g.source_weyl),
        max_target_weyl: fold(|g| g.target_weyl),
        grid: points,
        wall_clock: started.elapsed(),
    })
}

/// Interior spectral norm of `P̃² + Q̃² − (2Ñ + 1)`.
pub fn rellich_check(pq: &PQPair, rep: &TruncatedRep, margin: usize) -> Result<f64> {
    let keep = interior_len(rep.dim(), margin)?;
    let n_tilde = rep.n_tilde()?;
    let lhs = &pq.p * &pq.p + &pq.q * &pq.q;
    let rhs = n_tilde * real(2.0) + CMatrix::identity(rep.dim(), rep.dim());
    Ok(compressed_norm(&(lhs - rhs), keep))
}
