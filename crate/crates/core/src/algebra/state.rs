use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed};

use super::{Generator, OperatorExpr, RepresentationKind};
use crate::error::{Error, Result};
use crate::scalar::{factorial, ExactScalar};

/// Exact finite linear combination of the unnormalized basis vectors `e_k`.
///
/// Fock: `e_k = (a⁺)^k ψ₀`. Anti-Fock: `e_k = a^k ψ₋₁`, so `e_{n−1}` is
/// proportional to `ψ₋ₙ`. Λ-case: `e_k` for every `k ∈ ℤ` with `e_0` the
/// reference vector of eigenvalue `λ`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FormalState {
    kind: RepresentationKind,
    coeffs: BTreeMap<i64, ExactScalar>,
}

impl FormalState {
    pub fn zero(kind: RepresentationKind) -> Self {
        Self { kind, coeffs: BTreeMap::new() }
    }

    pub fn basis(kind: RepresentationKind, k: i64) -> Result<Self> {
        Self::from_coefficients(kind, [(k, ExactScalar::one())])
    }

    pub fn from_coefficients(
        kind: RepresentationKind,
        coeffs: impl IntoIterator<Item = (i64, ExactScalar)>,
    ) -> Result<Self> {
        let mut state = Self::zero(kind);
        for (k, c) in coeffs {
            if !state.kind.contains_index(k) {
                return Err(Error::IndexOutOfRange { kind: state.kind, index: k });
            }
            state.add_term(k, c);
        }
        Ok(state)
    }

    pub fn kind(&self) -> &RepresentationKind {
        &self.kind
    }

    pub fn coefficient(&self, k: i64) -> ExactScalar {
        self.coeffs.get(&k).cloned().unwrap_or_default()
    }

    pub fn terms(&self) -> impl Iterator<Item = (i64, &ExactScalar)> {
        self.coeffs.iter().map(|(k, c)| (*k, c))
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    fn add_term(&mut self, k: i64, c: ExactScalar) {
        if c.is_zero() {
            return;
        }
        let entry = self.coeffs.entry(k).or_default();
        *entry += &c;
        if entry.is_zero() {
            self.coeffs.remove(&k);
        }
    }

    pub fn scale(&self, c: &ExactScalar) -> Self {
        let mut out = Self::zero(self.kind.clone());
        for (k, v) in &self.coeffs {
            out.add_term(*k, v * c);
        }
        out
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        check_kinds(&self.kind, &other.kind)?;
        let mut out = self.clone();
        for (k, v) in &other.coeffs {
            out.add_term(*k, v.clone());
        }
        Ok(out)
    }
}

/// Prints `c · e_k` terms, e.g. `-3 · e2` or `e0 - (1/2) · e3`.
impl fmt::Display for FormalState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return f.write_str("0");
        }
        for (idx, (k, c)) in self.coeffs.iter().enumerate() {
            let negative = c.is_simple_negative();
            let c = if negative && idx > 0 { -c } else { c.clone() };
            if idx > 0 {
                f.write_str(if negative { " - " } else { " + " })?;
            }
            if c.is_compound() {
                write!(f, "({c}) · e{k}")?;
            } else {
                write!(f, "{c} · e{k}")?;
            }
        }
        Ok(())
    }
}

fn check_kinds(left: &RepresentationKind, right: &RepresentationKind) -> Result<()> {
    if left == right {
        Ok(())
    } else {
        Err(Error::KindMismatch { left: left.clone(), right: right.clone() })
    }
}

/// Diagonal Gram value `(e_k, e_k)` of the indefinite inner product.
///
/// Fock: `k!`. Anti-Fock: `(−1)^k k!`. Λ-case: `(e_0, e_0) = 1` and
/// `(e_{k+1}, e_{k+1}) = (e_k, e_k) / (λ + k + 1)`, which follows from `N = a⁺a`.
pub fn gram_norm(kind: &RepresentationKind, k: i64) -> BigRational {
    match kind {
        RepresentationKind::Fock => BigRational::from_integer(factorial(k as u64)),
        RepresentationKind::AntiFock => {
            let f = factorial(k as u64);
            BigRational::from_integer(if k % 2 == 0 { f } else { -f })
        }
        RepresentationKind::Lambda(l) => {
            let lambda = l.value();
            let mut g = BigRational::one();
            if k >= 0 {
                for j in 0..k {
                    g /= lambda + BigRational::from_integer(BigInt::from(j + 1));
                }
            } else {
                // (e_j, e_j) = (e_{j+1}, e_{j+1}) · (λ + j + 1)
                for j in (k..0).rev() {
                    g *= lambda + BigRational::from_integer(BigInt::from(j + 1));
                }
            }
            g
        }
    }
}

/// Sign of `(e_k, e_k)`; `J` acts on `e_k` by this sign.
pub fn gram_sign(kind: &RepresentationKind, k: i64) -> i64 {
    match kind {
        RepresentationKind::Fock => 1,
        RepresentationKind::AntiFock => {
            if k % 2 == 0 {
                1
            } else {
                -1
            }
        }
        RepresentationKind::Lambda(_) => {
            if gram_norm(kind, k).is_negative() {
                -1
            } else {
                1
            }
        }
    }
}

/// Image of `e_k` under one generator: `Some((c, k'))` means `c·e_{k'}`.
fn act(kind: &RepresentationKind, g: Generator, k: i64) -> Option<(ExactScalar, i64)> {
    use Generator::*;
    match (kind, g) {
        (_, Id) => Some((ExactScalar::one(), k)),
        (_, J) => Some((ExactScalar::from_int(gram_sign(kind, k)), k)),
        (RepresentationKind::Fock, A) => (k > 0).then(|| (ExactScalar::from_int(k), k - 1)),
        (RepresentationKind::Fock, ADag) => Some((ExactScalar::one(), k + 1)),
        (RepresentationKind::AntiFock, A) => Some((ExactScalar::one(), k + 1)),
        (RepresentationKind::AntiFock, ADag) => {
            (k > 0).then(|| (ExactScalar::from_int(-k), k - 1))
        }
        (RepresentationKind::Lambda(_), A) => Some((ExactScalar::one(), k - 1)),
        (RepresentationKind::Lambda(l), ADag) => {
            let c = l.value() + BigRational::from_integer(BigInt::from(k + 1));
            Some((ExactScalar::from_rational(c), k + 1))
        }
    }
}

fn apply_word(word: &[Generator], state: &FormalState) -> FormalState {
    let mut current = state.clone();
    for &g in word.iter().rev() {
        let mut next = FormalState::zero(current.kind.clone());
        for (k, c) in &current.coeffs {
            if let Some((factor, k2)) = act(&current.kind, g, *k) {
                next.add_term(k2, c * &factor);
            }
        }
        current = next;
        if current.is_zero() {
            break;
        }
    }
    current
}

/// Exact action of an operator expression on a formal state.
pub fn apply(expr: &OperatorExpr, state: &FormalState) -> FormalState {
    let mut out = FormalState::zero(state.kind.clone());
    for m in expr.terms() {
        let image = apply_word(&m.word, state).scale(&m.coeff);
        for (k, c) in image.coeffs {
            out.add_term(k, c);
        }
    }
    out
}

/// Indefinite inner product, conjugate-linear in the first argument.
pub fn inner(x: &FormalState, y: &FormalState) -> Result<ExactScalar> {
    check_kinds(&x.kind, &y.kind)?;
    let mut acc = ExactScalar::zero();
    for (k, cx) in &x.coeffs {
        if let Some(cy) = y.coeffs.get(k) {
            let g = ExactScalar::from_rational(gram_norm(&x.kind, *k));
            acc += &(&(&cx.conj() * cy) * &g);
        }
    }
    Ok(acc)
}

/// J-inner product `(x, Jy)`; positive definite.
pub fn inner_j(x: &FormalState, y: &FormalState) -> Result<ExactScalar> {
    inner(x, &apply(&OperatorExpr::j(), y))
}

/// Checks `lhs e_k = rhs e_k` exactly for every basis index with `|k| ≤ depth`.
pub fn verify_identity(
    lhs: &OperatorExpr,
    rhs: &OperatorExpr,
    kind: &RepresentationKind,
    depth: u32,
) -> bool {
    kind.indices(depth).into_iter().all(|k| {
        let e = FormalState::basis(kind.clone(), k).expect("index drawn from the kind's index set");
        apply(lhs, &e) == apply(rhs, &e)
    })
}
