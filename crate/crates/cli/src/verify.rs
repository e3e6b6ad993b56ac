//! The `verify` suite: exact symbolic identities, truncated-matrix checks and,
//! for Fock and anti-Fock, the Weyl-pair and intertwiner checks.

use std::cmp::Ordering;

use ccr_core::algebra::{
    adjoint_dagger, adjoint_star, apply, inner, inner_j, verify_identity, FormalState, OperatorExpr,
    RepresentationKind,
};
use ccr_core::krein::{check_j_selfadjoint, indefinite_dot, j_dot, plus_adjoint, MetricContext};
use ccr_core::linalg::{max_abs, CMatrix, CVector, C64};
use ccr_core::matrix_rep::{
    build_pq, build_rep, commutator_residual, hermiticity_residual, oracle_deviation,
    predicted_spectrum, spectrum_n, TruncatedRep,
};
use ccr_core::scalar::factorial;
use ccr_core::weyl::{build_intertwiner, rellich_check, verify_von_neumann, WeylPair};
use ccr_core::ExactScalar;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use crate::config::RunConfig;
use crate::report::{Record, ReportEnvelope};
use crate::CliResult;

/// Depth of the symbolic identity checks, `|k| ≤ DEPTH`.
pub const DEPTH: u32 = 50;
/// Largest dimension of the exhaustive symbolic-oracle comparison.
pub const ORACLE_MAX_DIM: usize = 12;

pub const ORACLE_TOL: f64 = 1e-14;
pub const ADJOINT_TOL: f64 = 1e-14;
pub const DOT_TOL: f64 = 1e-14;
pub const ALGEBRAIC_TOL: f64 = 1e-12;
pub const UNITARITY_TOL: f64 = 1e-12;
pub const RELLICH_TOL: f64 = 1e-11;
pub const EXP_TOL: f64 = 1e-10;

const RANDOM_SAMPLES: usize = 16;

const NO_WEYL: &str = "no Weyl-form analogue is defined for the Λ-case representation";
const ANTI_FOCK_ONLY: &str = "the b-relabeling and {a,J} = 0 are specific to the anti-Fock representation";

struct Suite {
    records: Vec<Record>,
    tol: Option<f64>,
}

impl Suite {
    fn tol(&self, default: f64) -> f64 {
        self.tol.unwrap_or(default)
    }

    fn measured(&mut self, id: &str, params: Value, residual: f64, default_tol: f64) {
        let tol = self.tol(default_tol);
        self.records.push(Record::measured(id, params, residual, tol));
    }

    /// Exact check; the residual is the number of mismatches.
    fn exact(&mut self, id: &str, params: Value, mismatches: usize) {
        self.records.push(Record::measured(id, params, mismatches as f64, 0.0));
    }

    fn identity(&mut self, id: &str, lhs: &OperatorExpr, rhs: &OperatorExpr, kind: &RepresentationKind) {
        let mismatches = kind
            .indices(DEPTH)
            .into_iter()
            .filter(|&k| {
                let e = basis(kind, k);
                apply(lhs, &e) != apply(rhs, &e)
            })
            .count();
        self.exact(id, json!({"lhs": lhs.to_string(), "rhs": rhs.to_string(), "depth": DEPTH}), mismatches);
    }

    fn skip(&mut self, id: &str, params: Value, reason: &str) {
        self.records.push(Record::skipped(id, params, reason));
    }

    fn fail(&mut self, id: &str, params: Value, default_tol: f64, err: impl std::fmt::Display) {
        let tol = self.tol(default_tol);
        self.records.push(Record::errored(id, params, tol, err));
    }
}

fn basis(kind: &RepresentationKind, k: i64) -> FormalState {
    FormalState::basis(kind.clone(), k).expect("index drawn from the kind's index set")
}

fn int(n: i64) -> ExactScalar {
    ExactScalar::from_int(n)
}

/// Closed-form Gram value `(e_k, e_k)`, independent of the engine's recursion.
fn expected_gram(kind: &RepresentationKind, k: i64) -> BigRational {
    match kind {
        RepresentationKind::Fock => BigRational::from_integer(factorial(k as u64)),
        RepresentationKind::AntiFock => {
            let f = BigRational::from_integer(factorial(k as u64));
            if k % 2 == 0 { f } else { -f }
        }
        RepresentationKind::Lambda(l) => {
            // (e_k, e_k) = ∏_{j=0}^{k-1} 1/(λ+j+1) for k > 0 and ∏_{j=k}^{-1} (λ+j+1) for k < 0
            let factor = |j: i64| l.value() + BigRational::from_integer(BigInt::from(j + 1));
            if k >= 0 {
                (0..k).fold(BigRational::one(), |acc, j| acc / factor(j))
            } else {
                (k..0).fold(BigRational::one(), |acc, j| acc * factor(j))
            }
        }
    }
}

fn symbolic_suite(s: &mut Suite, kind: &RepresentationKind, seed: u64) {
    let indices = kind.indices(DEPTH);
    let (a, ad, j) = (OperatorExpr::a(), OperatorExpr::a_dag(), OperatorExpr::j());
    let one = OperatorExpr::identity();
    let zero = OperatorExpr::zero();

    // Gram values and their J-normalized signs
    let mut gram_miss = 0;
    let mut sign_miss = 0;
    for &k in &indices {
        let e = basis(kind, k);
        let g = inner(&e, &e).expect("same kind");
        let expected = expected_gram(kind, k);
        if g != ExactScalar::from_rational(expected.clone()) {
            gram_miss += 1;
        }
        let gj = inner_j(&e, &e).expect("same kind");
        let normalized = g.checked_div(&gj);
        let sign = if expected > BigRational::from_integer(0.into()) { 1 } else { -1 };
        if normalized != Some(int(sign)) {
            sign_miss += 1;
        }
    }
    let last = *indices.last().expect("non-empty index set");
    let e_last = basis(kind, last);
    s.exact(
        "symbolic.norm_law",
        json!({"depth": DEPTH, "index": last, "gram": inner(&e_last, &e_last).expect("same kind").to_string()}),
        gram_miss,
    );
    s.exact("symbolic.norm_law_j_normalized", json!({"depth": DEPTH}), sign_miss);

    s.identity("symbolic.ccr", &a.commutator(&ad), &one, kind);
    s.identity("symbolic.j_involution", &(&j * &j), &one, kind);

    let n = &ad * &a;
    let spectrum_miss = indices
        .iter()
        .filter(|&&k| {
            let nu = match kind {
                RepresentationKind::Fock => int(k),
                RepresentationKind::AntiFock => int(-k - 1),
                RepresentationKind::Lambda(l) => {
                    ExactScalar::from_rational(l.value() + BigRational::from_integer(k.into()))
                }
            };
            apply(&n, &basis(kind, k)) != basis(kind, k).scale(&nu)
        })
        .count();
    s.exact("symbolic.number_spectrum", json!({"depth": DEPTH}), spectrum_miss);

    // the extremal vector: aψ₀ = 0 (Fock), a⁺ψ₋₁ = 0 (anti-Fock), none for Λ
    let annihilated: Vec<i64> = indices
        .iter()
        .copied()
        .filter(|&k| apply(&a, &basis(kind, k)).is_zero() || apply(&ad, &basis(kind, k)).is_zero())
        .collect();
    let expected: Vec<i64> = match kind {
        RepresentationKind::Lambda(_) => vec![],
        _ => vec![0],
    };
    s.exact(
        "symbolic.extremal_vector",
        json!({"annihilated_indices": annihilated, "expected": expected}),
        usize::from(annihilated != expected),
    );

    // adjoint compatibility on basis pairs, both products
    let near: Vec<i64> = kind.indices(12);
    let mut adj_miss = 0;
    for x in [&a, &ad, &n] {
        let dag = adjoint_dagger(x);
        let star = &(&j * &dag) * &j;
        for &p in &near {
            for &q in &near {
                let (ep, eq) = (basis(kind, p), basis(kind, q));
                let lhs = inner(&apply(x, &ep), &eq).expect("same kind");
                if lhs != inner(&ep, &apply(&dag, &eq)).expect("same kind") {
                    adj_miss += 1;
                }
                let lhs = inner_j(&apply(x, &ep), &eq).expect("same kind");
                if lhs != inner_j(&ep, &apply(&star, &eq)).expect("same kind") {
                    adj_miss += 1;
                }
            }
        }
    }
    s.exact("symbolic.adjoint_compatibility", json!({"depth": 12, "operators": ["a", "a+", "a+ * a"]}), adj_miss);

    // positivity of the J-inner product on seeded random exact states
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut nonpositive = 0;
    for _ in 0..RANDOM_SAMPLES {
        let terms: Vec<(i64, ExactScalar)> = (0..4)
            .map(|_| {
                let k = near[rng.gen_range(0..near.len())];
                let r = |rng: &mut ChaCha8Rng| {
                    BigRational::new(rng.gen_range(-9i64..=9).into(), rng.gen_range(1i64..=5).into())
                };
                (k, ExactScalar::new(r(&mut rng), r(&mut rng), r(&mut rng), r(&mut rng)))
            })
            .collect();
        let x = FormalState::from_coefficients(kind.clone(), terms).expect("indices in range");
        let v = inner_j(&x, &x).expect("same kind");
        let positive = v.is_real() && (x.is_zero() || v.re().signum() == Ordering::Greater);
        if !positive {
            nonpositive += 1;
        }
    }
    s.exact("symbolic.j_positivity", json!({"samples": RANDOM_SAMPLES, "seed": seed}), nonpositive);

    if *kind != RepresentationKind::AntiFock {
        for id in [
            "symbolic.anticommutator_a_j",
            "symbolic.anticommutator_adag_j",
            "symbolic.adjoint_star_b",
            "symbolic.b_commutator_plus",
            "symbolic.b_commutator_star",
            "symbolic.n_tilde",
        ] {
            s.skip(id, json!({}), ANTI_FOCK_ONLY);
        }
        return;
    }
    s.identity("symbolic.anticommutator_a_j", &a.anticommutator(&j), &zero, kind);
    s.identity("symbolic.anticommutator_adag_j", &ad.anticommutator(&j), &zero, kind);
    // b = a⁺, b⁺ = a, b* = J b⁺ J = −a
    let b = ad.clone();
    let b_plus = adjoint_dagger(&b);
    let b_star = adjoint_star(&b);
    s.exact(
        "symbolic.adjoint_star_b",
        json!({"b": b.to_string(), "b_star": b_star.to_string(), "expected": (-&a).to_string()}),
        usize::from(b_star != -&a),
    );
    s.identity("symbolic.b_commutator_plus", &b.commutator(&b_plus), &-&one, kind);
    s.identity("symbolic.b_commutator_star", &b.commutator(&b_star), &one, kind);
    let n_tilde = &b_star * &b;
    let rhs = &(-&n) - &one;
    let mut miss = usize::from(!verify_identity(&n_tilde, &rhs, kind, DEPTH));
    miss += indices
        .iter()
        .filter(|&&k| apply(&n_tilde, &basis(kind, k)) != basis(kind, k).scale(&int(k)))
        .count();
    s.exact("symbolic.n_tilde", json!({"lhs": "b* * b", "rhs": rhs.to_string(), "depth": DEPTH}), miss);
}

fn random_matrix(rng: &mut ChaCha8Rng, d: usize) -> CMatrix {
    CMatrix::from_fn(d, d, |_, _| C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
}

fn random_vector(rng: &mut ChaCha8Rng, d: usize) -> CVector {
    CVector::from_fn(d, |_, _| C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
}

fn oracle_dim(kind: &RepresentationKind, dim: usize) -> usize {
    let d = dim.min(ORACLE_MAX_DIM);
    match kind {
        RepresentationKind::Lambda(_) if d % 2 == 0 => d - 1,
        _ => d,
    }
}

fn signature_mismatches(rep: &TruncatedRep) -> usize {
    let signs = rep.signature().signs();
    match rep.kind() {
        RepresentationKind::Fock => signs.iter().filter(|&&s| s != 1).count(),
        RepresentationKind::AntiFock => {
            signs.iter().enumerate().filter(|(k, &s)| s != if k % 2 == 0 { 1 } else { -1 }).count()
        }
        // the sign flips between rows k and k+1 exactly where λ+k+1 < 0
        RepresentationKind::Lambda(l) => (0..signs.len() - 1)
            .filter(|&r| {
                let k = rep.basis_index(r);
                let factor = l.value() + BigRational::from_integer((k + 1).into());
                let flips = factor < BigRational::from_integer(0.into());
                (signs[r + 1] != signs[r]) != flips
            })
            .count(),
    }
}

fn matrix_suite(s: &mut Suite, rep: &TruncatedRep, m_id: usize, seed: u64) -> CliResult<()> {
    let kind = rep.kind();
    let d = rep.dim();

    let od = oracle_dim(kind, d);
    let small = build_rep(kind.clone(), od)?;
    s.measured("matrix.oracle", json!({"dim": od}), oracle_deviation(&small)?, ORACLE_TOL);

    s.measured(
        "matrix.commutator",
        json!({"dim": d, "margin": m_id}),
        commutator_residual(rep, m_id)?,
        ALGEBRAIC_TOL,
    );
    let adj = plus_adjoint(rep.metric(), rep.a())?;
    s.measured("matrix.ladder_adjoint", json!({"dim": d}), max_abs(&(adj - rep.a_dag())), ADJOINT_TOL);

    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x6d61_7472);
    let x = random_matrix(&mut rng, d);
    let back = plus_adjoint(rep.metric(), &plus_adjoint(rep.metric(), &x)?)?;
    s.measured(
        "krein.plus_adjoint_involution",
        json!({"dim": d, "seed": seed}),
        max_abs(&(back - &x)),
        ADJOINT_TOL,
    );
    let j = rep.j();
    s.exact("krein.j_involution", json!({"dim": d}), usize::from(&j * &j != CMatrix::identity(d, d)));
    s.measured("krein.dot_consistency", json!({"dim": d, "samples": RANDOM_SAMPLES, "seed": seed}), dot_consistency(rep.metric(), &mut rng)?, DOT_TOL);

    let spectrum = spectrum_n(rep);
    let predicted = predicted_spectrum(kind, d);
    let deviation = spectrum
        .iter()
        .zip(&predicted)
        .map(|(x, p)| (x - p.to_f64().unwrap_or(f64::NAN)).abs())
        .fold(0.0, f64::max);
    let listed: Vec<String> = predicted.iter().map(ToString::to_string).collect();
    s.records.push(Record::measured(
        "matrix.spectrum",
        json!({"dim": d, "predicted": listed}),
        deviation,
        0.0,
    ));
    let (plus, minus) = rep.signature().counts();
    s.exact("matrix.signature", json!({"dim": d, "n_plus": plus, "n_minus": minus}), signature_mismatches(rep));

    if let RepresentationKind::Lambda(_) = kind {
        for id in [
            "matrix.n_tilde_spectrum",
            "matrix.hermiticity_p",
            "matrix.hermiticity_q",
            "matrix.pq_commutator",
            "matrix.b_commutator_plus",
            "matrix.b_commutator_star",
            "matrix.n_tilde",
        ] {
            s.skip(id, json!({}), NO_WEYL);
        }
        return Ok(());
    }

    let nt = rep.n_tilde()?;
    let expected = CMatrix::from_fn(d, d, |i, k| if i == k { C64::new(i as f64, 0.0) } else { C64::new(0.0, 0.0) });
    s.exact("matrix.n_tilde_spectrum", json!({"dim": d}), usize::from(nt != expected));

    let pq = build_pq(rep)?;
    for (id, m) in [("matrix.hermiticity_p", &pq.p), ("matrix.hermiticity_q", &pq.q)] {
        let r = hermiticity_residual(m).max(check_j_selfadjoint(rep.metric(), m, s.tol(ALGEBRAIC_TOL))?.residual);
        s.measured(id, json!({"dim": d}), r, ALGEBRAIC_TOL);
    }
    let proj = rep.interior(m_id)?;
    let comm = &pq.p * &pq.q - &pq.q * &pq.p + CMatrix::identity(d, d) * C64::new(0.0, 1.0);
    s.measured("matrix.pq_commutator", json!({"dim": d, "margin": m_id}), max_abs(&proj.compress(&comm)), ALGEBRAIC_TOL);

    if *kind != RepresentationKind::AntiFock {
        for id in ["matrix.b_commutator_plus", "matrix.b_commutator_star", "matrix.n_tilde"] {
            s.skip(id, json!({}), ANTI_FOCK_ONLY);
        }
        return Ok(());
    }
    let (b, b_star) = rep.b_pair()?;
    let b_plus = plus_adjoint(rep.metric(), &b)?;
    let id = CMatrix::identity(d, d);
    let plus_comm = &b * &b_plus - &b_plus * &b + &id;
    let star_comm = &b * &b_star - &b_star * &b - &id;
    let number = &b_star * &b - &nt;
    for (check, m) in [
        ("matrix.b_commutator_plus", plus_comm),
        ("matrix.b_commutator_star", star_comm),
        ("matrix.n_tilde", number),
    ] {
        s.measured(check, json!({"dim": d, "margin": m_id}), max_abs(&proj.compress(&m)), ALGEBRAIC_TOL);
    }
    Ok(())
}

/// Largest `|(x,y) − (x,Jy)_J|`, relative to `Σ|x_k||y_k|`, over random pairs.
fn dot_consistency(ctx: &MetricContext, rng: &mut ChaCha8Rng) -> CliResult<f64> {
    let d = ctx.dim();
    let mut worst = 0.0f64;
    for _ in 0..RANDOM_SAMPLES {
        let x = random_vector(rng, d);
        let y = random_vector(rng, d);
        let lhs = indefinite_dot(ctx, &x, &y)?;
        let rhs = j_dot(ctx, &x, &ctx.j().apply(&y))?;
        let scale: f64 = x.iter().zip(y.iter()).map(|(a, b)| a.norm() * b.norm()).sum();
        worst = worst.max((lhs - rhs).norm() / scale.max(f64::MIN_POSITIVE));
    }
    Ok(worst)
}

fn weyl_suite(s: &mut Suite, rep: &TruncatedRep, config: &RunConfig) -> CliResult<()> {
    let d = rep.dim();
    let m_w = config.margin.weyl(d);
    let m_r = config.margin.identity().max(2);
    let pq = build_pq(rep)?;
    s.measured("weyl.rellich", json!({"dim": d, "margin": m_r}), rellich_check(&pq, rep, m_r)?, RELLICH_TOL);

    let w = build_intertwiner(rep)?;
    let wm = w.matrix();
    let phases: Vec<f64> = w.phases().iter().map(|z| z.re).collect();
    s.measured(
        "weyl.intertwiner_unitary",
        json!({"dim": d, "phases_head": phases.iter().take(8).collect::<Vec<_>>()}),
        max_abs(&(wm.adjoint() * &wm - CMatrix::identity(d, d))),
        UNITARITY_TOL,
    );

    let report = verify_von_neumann(rep, &config.grid, m_w)?;
    s.measured("weyl.intertwiner_p", json!({"dim": d}), report.err_p, ALGEBRAIC_TOL);
    s.measured("weyl.intertwiner_q", json!({"dim": d}), report.err_q, ALGEBRAIC_TOL);
    s.measured("weyl.intertwiner_ladder", json!({"dim": d}), report.err_ladder, ALGEBRAIC_TOL);
    s.exact("weyl.multiplicity", json!({"dim": d, "max_multiplicity": report.max_multiplicity}), report.max_multiplicity - 1);

    let pair = WeylPair::from_pq(&pq)?;
    let mut params: Vec<f64> = config.grid.iter().flat_map(|&(a, b)| [a, b]).collect();
    params.sort_by(f64::total_cmp);
    params.dedup();
    let id = CMatrix::identity(d, d);
    let defect = params
        .iter()
        .flat_map(|&x| [pair.u(x), pair.v(x)])
        .map(|u| max_abs(&(u.adjoint() * &u - &id)))
        .fold(0.0, f64::max);
    s.measured("weyl.unitarity", json!({"dim": d, "parameters": params}), defect, UNITARITY_TOL);

    // the 10·errP Lipschitz allowance, floored at the exponential-check tolerance
    let allowance = s.tol(EXP_TOL).max(10.0 * report.err_p);
    for g in &report.grid {
        let params = json!({"dim": d, "margin": m_w, "s": g.s, "t": g.t});
        s.measured("weyl.relation", json!({"dim": d, "margin": m_w, "s": g.s, "t": g.t, "target_residual": g.target_weyl}), g.source_weyl, EXP_TOL);
        s.records.push(Record::measured("weyl.intertwined_vs_target", params, g.intertwined_vs_target, allowance));
    }
    Ok(())
}

/// Runs the whole suite for `config.dims[0]`.
pub fn run(config: &RunConfig) -> CliResult<ReportEnvelope> {
    let kind = &config.kind;
    let dim = config.dims[0];
    let mut s = Suite { records: Vec::new(), tol: config.tol };

    symbolic_suite(&mut s, kind, config.seed);

    let rep = build_rep(kind.clone(), dim)?;
    let m_id = config.margin.identity();
    if let Err(e) = matrix_suite(&mut s, &rep, m_id, config.seed) {
        s.fail("matrix.suite", json!({"dim": dim}), ALGEBRAIC_TOL, e);
    }

    match kind {
        RepresentationKind::Lambda(_) => {
            for id in ["weyl.rellich", "weyl.intertwiner", "weyl.von_neumann", "weyl.relation"] {
                s.skip(id, json!({"dim": dim}), NO_WEYL);
            }
        }
        _ => {
            if let Err(e) = weyl_suite(&mut s, &rep, config) {
                s.fail("weyl.suite", json!({"dim": dim}), EXP_TOL, e);
            }
        }
    }
    Ok(ReportEnvelope::new(config, s.records))
}
