//! Symbolic engine: words in `a`, `a⁺`, `J` with exact coefficients, a
//! normal-ordering rewriter, and the exact action on formal basis vectors.

mod kind;
pub mod parse;
mod state;

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

pub use kind::{Lambda, RepresentationKind};
pub use state::{apply, gram_norm, gram_sign, inner, inner_j, verify_identity, FormalState};

use crate::error::{Error, Result};
use crate::scalar::ExactScalar;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Generator {
    /// Annihilation operator `a`.
    A,
    /// Its indefinite-metric adjoint `a⁺`.
    ADag,
    /// Fundamental symmetry.
    J,
    Id,
}

impl Generator {
    /// Formal ⁺-adjoint of a single generator.
    pub fn dagger(self) -> Self {
        match self {
            Self::A => Self::ADag,
            Self::ADag => Self::A,
            g => g,
        }
    }

    pub fn token(self) -> &'static str {
        match self {
            Self::A => "a",
            Self::ADag => "a+",
            Self::J => "J",
            Self::Id => "1",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Monomial {
    pub coeff: ExactScalar,
    /// Product read left to right; acting on a state, the rightmost letter applies first.
    pub word: Vec<Generator>,
}

/// Finite sum of scalar-weighted words. Not necessarily normal-ordered; use
/// [`normal_order`] to obtain the canonical representative.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct OperatorExpr {
    terms: Vec<Monomial>,
}

impl OperatorExpr {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn identity() -> Self {
        Self::scalar(ExactScalar::one())
    }

    pub fn scalar(c: ExactScalar) -> Self {
        Self::monomial(c, Vec::new())
    }

    pub fn generator(g: Generator) -> Self {
        Self::monomial(ExactScalar::one(), vec![g])
    }

    pub fn a() -> Self {
        Self::generator(Generator::A)
    }

    pub fn a_dag() -> Self {
        Self::generator(Generator::ADag)
    }

    pub fn j() -> Self {
        Self::generator(Generator::J)
    }

    pub fn word(word: &[Generator]) -> Self {
        Self::monomial(ExactScalar::one(), word.to_vec())
    }

    pub fn monomial(coeff: ExactScalar, word: Vec<Generator>) -> Self {
        if coeff.is_zero() {
            return Self::zero();
        }
        Self { terms: vec![Monomial { coeff, word }] }
    }

    pub fn from_terms(terms: Vec<Monomial>) -> Self {
        Self { terms: terms.into_iter().filter(|m| !m.coeff.is_zero()).collect() }
    }

    pub fn terms(&self) -> &[Monomial] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn contains(&self, g: Generator) -> bool {
        self.terms.iter().any(|m| m.word.contains(&g))
    }

    pub fn scale(&self, c: &ExactScalar) -> Self {
        Self::from_terms(
            self.terms
                .iter()
                .map(|m| Monomial { coeff: &m.coeff * c, word: m.word.clone() })
                .collect(),
        )
    }

    /// `[self, other] = self·other − other·self`, unreduced.
    pub fn commutator(&self, other: &Self) -> Self {
        &(self * other) - &(other * self)
    }

    /// `{self, other} = self·other + other·self`, unreduced.
    pub fn anticommutator(&self, other: &Self) -> Self {
        &(self * other) + &(other * self)
    }

    /// Replace every occurrence of `g` by `with`.
    pub fn substitute(&self, g: Generator, with: &OperatorExpr) -> Self {
        let mut out = Self::zero();
        for m in &self.terms {
            let mut acc = Self::scalar(m.coeff.clone());
            for &h in &m.word {
                acc = if h == g { &acc * with } else { &acc * &Self::generator(h) };
            }
            out = &out + &acc;
        }
        out
    }

    /// Equality of canonical forms under the Krein (anti-Fock) rewrite rules.
    pub fn equivalent(&self, other: &Self) -> bool {
        normal_order(&(self - other)).is_zero()
    }
}

impl Add for &OperatorExpr {
    type Output = OperatorExpr;
    fn add(self, rhs: &OperatorExpr) -> OperatorExpr {
        let mut terms = self.terms.clone();
        terms.extend(rhs.terms.iter().cloned());
        OperatorExpr { terms }
    }
}

impl Sub for &OperatorExpr {
    type Output = OperatorExpr;
    fn sub(self, rhs: &OperatorExpr) -> OperatorExpr {
        self + &(-rhs)
    }
}

impl Neg for &OperatorExpr {
    type Output = OperatorExpr;
    fn neg(self) -> OperatorExpr {
        self.scale(&ExactScalar::from_int(-1))
    }
}

impl Mul for &OperatorExpr {
    type Output = OperatorExpr;
    fn mul(self, rhs: &OperatorExpr) -> OperatorExpr {
        let mut terms = Vec::with_capacity(self.terms.len() * rhs.terms.len());
        for l in &self.terms {
            for r in &rhs.terms {
                let mut word = l.word.clone();
                word.extend_from_slice(&r.word);
                terms.push(Monomial { coeff: &l.coeff * &r.coeff, word });
            }
        }
        OperatorExpr::from_terms(terms)
    }
}

macro_rules! forward_expr {
    ($tr:ident, $m:ident) => {
        impl $tr for OperatorExpr {
            type Output = OperatorExpr;
            fn $m(self, rhs: OperatorExpr) -> OperatorExpr {
                (&self).$m(&rhs)
            }
        }
    };
}
forward_expr!(Add, add);
forward_expr!(Sub, sub);
forward_expr!(Mul, mul);

impl Neg for OperatorExpr {
    type Output = OperatorExpr;
    fn neg(self) -> OperatorExpr {
        -&self
    }
}

/// Canonical word `(a⁺)^creations · a^annihilations · J^j`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
struct NormalWord {
    creations: u32,
    annihilations: u32,
    j: bool,
}

impl NormalWord {
    const ONE: Self = Self { creations: 0, annihilations: 0, j: false };

    fn to_word(self) -> Vec<Generator> {
        let mut w = vec![Generator::ADag; self.creations as usize];
        w.extend(std::iter::repeat_n(Generator::A, self.annihilations as usize));
        if self.j {
            w.push(Generator::J);
        }
        w
    }
}

// Higher total degree first, then more creations, J-free before J.
impl Ord for NormalWord {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        let deg = |w: &Self| w.creations + w.annihilations;
        deg(other)
            .cmp(&deg(self))
            .then(other.creations.cmp(&self.creations))
            .then(self.j.cmp(&other.j))
    }
}

impl PartialOrd for NormalWord {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

fn accumulate(map: &mut BTreeMap<NormalWord, ExactScalar>, w: NormalWord, c: ExactScalar) {
    if c.is_zero() {
        return;
    }
    let entry = map.entry(w).or_insert_with(ExactScalar::zero);
    *entry += &c;
    if entry.is_zero() {
        map.remove(&w);
    }
}

/// Right-multiplies a canonical sum by one generator, restoring canonical form.
///
/// `J^e·a⁺ = (−1)^e a⁺·J^e`, `J^e·a = (−1)^e a·J^e` and
/// `a^n·a⁺ = a⁺·a^n + n·a^{n−1}` (iterated `a·a⁺ → a⁺·a + 1`).
fn right_multiply(
    map: BTreeMap<NormalWord, ExactScalar>,
    g: Generator,
) -> BTreeMap<NormalWord, ExactScalar> {
    let mut out = BTreeMap::new();
    for (w, c) in map {
        let signed = if w.j { -&c } else { c.clone() };
        match g {
            Generator::Id => accumulate(&mut out, w, c),
            Generator::J => accumulate(&mut out, NormalWord { j: !w.j, ..w }, c),
            Generator::A => accumulate(
                &mut out,
                NormalWord { annihilations: w.annihilations + 1, ..w },
                signed,
            ),
            Generator::ADag => {
                if w.annihilations > 0 {
                    let n = ExactScalar::from_int(i64::from(w.annihilations));
                    accumulate(
                        &mut out,
                        NormalWord { annihilations: w.annihilations - 1, ..w },
                        &signed * &n,
                    );
                }
                accumulate(&mut out, NormalWord { creations: w.creations + 1, ..w }, signed);
            }
        }
    }
    out
}

/// Unique canonical form of `expr` under the rewrite system
///
/// ```text
/// a·a⁺ → a⁺·a + 1     J·a → −a·J     J·a⁺ → −a⁺·J     J·J → 1
/// ```
///
/// Every word ends up as `(a⁺)^m a^n J^e` with `e ∈ {0, 1}`. The `J` rules are
/// those of the anti-Fock Krein structure; see [`normal_order_in`] for the
/// representation-aware variant.
pub fn normal_order(expr: &OperatorExpr) -> OperatorExpr {
    let mut total: BTreeMap<NormalWord, ExactScalar> = BTreeMap::new();
    for m in &expr.terms {
        let mut acc = BTreeMap::new();
        acc.insert(NormalWord::ONE, m.coeff.clone());
        for &g in &m.word {
            acc = right_multiply(acc, g);
        }
        for (w, c) in acc {
            accumulate(&mut total, w, c);
        }
    }
    OperatorExpr {
        terms: total
            .into_iter()
            .map(|(w, coeff)| Monomial { coeff, word: w.to_word() })
            .collect(),
    }
}

/// Normal ordering valid in a specific representation.
///
/// The fundamental symmetry anticommutes with `a` only in the anti-Fock case.
/// In the Fock case the metric is positive so `J = 1`. In the Λ-case `J`
/// commutes with `a` up to an `N`-dependent sign, which is not a polynomial
/// relation, so words containing `J` are rejected.
pub fn normal_order_in(expr: &OperatorExpr, kind: &RepresentationKind) -> Result<OperatorExpr> {
    match kind {
        RepresentationKind::AntiFock => Ok(normal_order(expr)),
        RepresentationKind::Fock => {
            Ok(normal_order(&expr.substitute(Generator::J, &OperatorExpr::identity())))
        }
        RepresentationKind::Lambda(_) if expr.contains(Generator::J) => {
            Err(Error::JNotReducible(kind.clone()))
        }
        RepresentationKind::Lambda(_) => Ok(normal_order(expr)),
    }
}

/// Formal ⁺-adjoint: reverse each word, swap `a ↔ a⁺`, conjugate coefficients.
pub fn adjoint_dagger(expr: &OperatorExpr) -> OperatorExpr {
    OperatorExpr::from_terms(
        expr.terms
            .iter()
            .map(|m| Monomial {
                coeff: m.coeff.conj(),
                word: m.word.iter().rev().map(|g| g.dagger()).collect(),
            })
            .collect(),
    )
}

/// Adjoint with respect to the J-inner product, `X* = J·X⁺·J`, normal-ordered.
pub fn adjoint_star(expr: &OperatorExpr) -> OperatorExpr {
    let j = OperatorExpr::j();
    normal_order(&(&(&j * &adjoint_dagger(expr)) * &j))
}

impl fmt::Display for OperatorExpr {
    /// Prints in the textual expression grammar, e.g. `a+ * a - 2 * a * J + 1`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (idx, m) in self.terms.iter().enumerate() {
            let negative = m.coeff.is_simple_negative();
            let coeff = if negative && idx > 0 { -&m.coeff } else { m.coeff.clone() };
            if idx > 0 {
                f.write_str(if negative { " - " } else { " + " })?;
            }
            let word: Vec<&str> = m.word.iter().map(|g| g.token()).collect();
            let word = word.join(" * ");
            let c = if coeff.is_compound() { format!("({coeff})") } else { coeff.to_string() };
            match (word.is_empty(), c.as_str()) {
                (true, _) => f.write_str(&c)?,
                (false, "1") => f.write_str(&word)?,
                (false, "-1") => write!(f, "-{word}")?,
                (false, _) => write!(f, "{c} * {word}")?,
            }
        }
        Ok(())
    }
}
