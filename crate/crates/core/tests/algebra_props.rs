use std::collections::BTreeMap;

use ccr_core::algebra::{
    adjoint_dagger, adjoint_star, apply, inner, inner_j, normal_order, normal_order_in,
    verify_identity, FormalState, Generator, Monomial, OperatorExpr, RepresentationKind,
};
use ccr_core::ExactScalar;
use num_rational::BigRational;
use proptest::prelude::*;
use Generator::*;

fn lambda(n: i64, d: i64) -> RepresentationKind {
    RepresentationKind::lambda(BigRational::new(n.into(), d.into())).unwrap()
}

fn kinds() -> Vec<RepresentationKind> {
    vec![RepresentationKind::Fock, RepresentationKind::AntiFock, lambda(-1, 2), lambda(-1, 3)]
}

fn e(kind: &RepresentationKind, k: i64) -> FormalState {
    FormalState::basis(kind.clone(), k).unwrap()
}

fn generator() -> impl Strategy<Value = Generator> {
    prop_oneof![Just(A), Just(ADag), Just(J), Just(Id)]
}

fn word() -> impl Strategy<Value = Vec<Generator>> {
    prop::collection::vec(generator(), 0..=6)
}

fn rational() -> impl Strategy<Value = BigRational> {
    (-6i64..=6, 1i64..=4).prop_map(|(n, d)| BigRational::new(n.into(), d.into()))
}

fn scalar() -> impl Strategy<Value = ExactScalar> {
    (rational(), rational(), rational(), rational())
        .prop_map(|(a, b, c, d)| ExactScalar::new(a, b, c, d))
}

fn expr() -> impl Strategy<Value = OperatorExpr> {
    prop::collection::vec((scalar(), word()), 1..=3).prop_map(|terms| {
        OperatorExpr::from_terms(
            terms.into_iter().map(|(coeff, word)| Monomial { coeff, word }).collect(),
        )
    })
}

fn state(kind: RepresentationKind) -> impl Strategy<Value = FormalState> {
    let range = if kind.contains_index(-1) { -5i64..=5 } else { 0i64..=8 };
    prop::collection::vec((range, scalar()), 1..=4)
        .prop_map(move |terms| FormalState::from_coefficients(kind.clone(), terms).unwrap())
}

/// Literal rewriting with the four rules, applied to the leftmost redex until
/// none is left. Independent of the library's incremental normal-ordering.
fn rewrite_oracle(expr: &OperatorExpr) -> BTreeMap<Vec<Generator>, ExactScalar> {
    let mut pending: Vec<(Vec<Generator>, ExactScalar)> = expr
        .terms()
        .iter()
        .map(|m| (m.word.iter().copied().filter(|g| *g != Id).collect(), m.coeff.clone()))
        .collect();
    let mut done: BTreeMap<Vec<Generator>, ExactScalar> = BTreeMap::new();
    while let Some((w, c)) = pending.pop() {
        let redex = w.windows(2).position(|p| {
            matches!(p, [A, ADag] | [J, A] | [J, ADag] | [J, J])
        });
        match redex {
            None => {
                let entry = done.entry(w).or_insert_with(ExactScalar::zero);
                *entry += &c;
            }
            Some(i) => {
                let (head, tail) = (&w[..i], &w[i + 2..]);
                let splice = |mid: &[Generator]| {
                    let mut v = head.to_vec();
                    v.extend_from_slice(mid);
                    v.extend_from_slice(tail);
                    v
                };
                match (w[i], w[i + 1]) {
                    (A, ADag) => {
                        pending.push((splice(&[ADag, A]), c.clone()));
                        pending.push((splice(&[]), c));
                    }
                    (J, g) if g != J => pending.push((splice(&[g, J]), -c)),
                    _ => pending.push((splice(&[]), c)),
                }
            }
        }
    }
    done.retain(|_, c| !c.is_zero());
    done
}

fn as_map(expr: &OperatorExpr) -> BTreeMap<Vec<Generator>, ExactScalar> {
    expr.terms().iter().map(|m| (m.word.clone(), m.coeff.clone())).collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn normal_order_is_idempotent(x in expr()) {
        let once = normal_order(&x);
        prop_assert_eq!(normal_order(&once), once);
    }

    #[test]
    fn normal_order_matches_literal_rewriting(x in expr()) {
        prop_assert_eq!(as_map(&normal_order(&x)), rewrite_oracle(&x));
    }

    #[test]
    fn normal_order_is_extensionally_sound(w in word(), c in scalar()) {
        let x = OperatorExpr::monomial(c, w);
        for kind in kinds() {
            // J has no polynomial reordering rule in the Λ-case
            let Ok(nf) = normal_order_in(&x, &kind) else {
                prop_assert!(matches!(kind, RepresentationKind::Lambda(_)));
                continue;
            };
            for k in kind.indices(20) {
                prop_assert_eq!(apply(&x, &e(&kind, k)), apply(&nf, &e(&kind, k)));
            }
        }
    }

    #[test]
    fn lambda_soundness_without_j(w in prop::collection::vec(prop_oneof![Just(A), Just(ADag), Just(Id)], 0..=6)) {
        let x = OperatorExpr::word(&w);
        let nf = normal_order(&x);
        for kind in [lambda(-1, 2), lambda(-2, 7)] {
            for k in kind.indices(20) {
                prop_assert_eq!(apply(&x, &e(&kind, k)), apply(&nf, &e(&kind, k)));
            }
        }
    }

    #[test]
    fn dagger_is_involution_and_antimultiplicative(x in expr(), y in expr()) {
        prop_assert_eq!(adjoint_dagger(&adjoint_dagger(&x)), x.clone());
        prop_assert_eq!(
            normal_order(&adjoint_dagger(&(&x * &y))),
            normal_order(&(&adjoint_dagger(&y) * &adjoint_dagger(&x)))
        );
    }

    #[test]
    fn dagger_is_the_indefinite_adjoint(x in expr(), sx in state(RepresentationKind::AntiFock), sy in state(RepresentationKind::AntiFock)) {
        let lhs = inner(&apply(&x, &sx), &sy).unwrap();
        let rhs = inner(&sx, &apply(&adjoint_dagger(&x), &sy)).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn dagger_is_the_indefinite_adjoint_lambda(x in expr(), sx in state(lambda(-1, 3)), sy in state(lambda(-1, 3))) {
        let lhs = inner(&apply(&x, &sx), &sy).unwrap();
        let rhs = inner(&sx, &apply(&adjoint_dagger(&x), &sy)).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn star_is_the_j_adjoint(x in expr(), sx in state(RepresentationKind::AntiFock), sy in state(RepresentationKind::AntiFock)) {
        let lhs = inner_j(&apply(&x, &sx), &sy).unwrap();
        let rhs = inner_j(&sx, &apply(&adjoint_star(&x), &sy)).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn raw_j_conjugation_is_the_j_adjoint_in_every_kind(x in expr(), sx in state(RepresentationKind::Fock), sy in state(RepresentationKind::Fock)) {
        let j = OperatorExpr::j();
        let star = &(&j * &adjoint_dagger(&x)) * &j;
        let lhs = inner_j(&apply(&x, &sx), &sy).unwrap();
        let rhs = inner_j(&sx, &apply(&star, &sy)).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn star_is_involutive(x in expr()) {
        prop_assert_eq!(adjoint_star(&adjoint_star(&x)), normal_order(&x));
    }

    #[test]
    fn j_inner_product_is_positive(sx in state(RepresentationKind::AntiFock), sl in state(lambda(-1, 2))) {
        for s in [sx, sl] {
            let v = inner_j(&s, &s).unwrap();
            prop_assert!(v.is_real());
            prop_assert_eq!(v.re().signum(), std::cmp::Ordering::Greater);
        }
    }

    #[test]
    fn inner_is_conjugate_symmetric(sx in state(lambda(-1, 3)), sy in state(lambda(-1, 3))) {
        prop_assert_eq!(inner(&sx, &sy).unwrap(), inner(&sy, &sx).unwrap().conj());
    }
}

#[test]
fn fock_positivity_and_spectrum() {
    let f = RepresentationKind::Fock;
    let n = OperatorExpr::word(&[ADag, A]);
    for k in 0..=40 {
        let g = inner(&e(&f, k), &e(&f, k)).unwrap();
        assert_eq!(g.re().signum(), std::cmp::Ordering::Greater);
        assert_eq!(apply(&n, &e(&f, k)), e(&f, k).scale(&ExactScalar::from_int(k)));
    }
}

#[test]
fn anti_fock_spectrum_and_alternating_signs() {
    let af = RepresentationKind::AntiFock;
    let n = OperatorExpr::word(&[ADag, A]);
    for k in 0..=40 {
        assert_eq!(apply(&n, &e(&af, k)), e(&af, k).scale(&ExactScalar::from_int(-(k + 1))));
        let g = inner(&e(&af, k), &e(&af, k)).unwrap();
        let expected = if k % 2 == 0 { std::cmp::Ordering::Greater } else { std::cmp::Ordering::Less };
        assert_eq!(g.re().signum(), expected);
    }
}

#[test]
fn hilbert_positivity_forbids_negative_eigenvalues() {
    // (Nψ, ψ) = (aψ, aψ) ≥ 0 in the positive-metric (Fock) case, so
    // eigenvalue·(ψ, ψ) ≥ 0 with (ψ, ψ) > 0 forces eigenvalue ≥ 0.
    let f = RepresentationKind::Fock;
    let n = OperatorExpr::word(&[ADag, A]);
    for k in 0..=30 {
        let psi = e(&f, k);
        let lhs = inner(&apply(&n, &psi), &psi).unwrap();
        let a_psi = apply(&OperatorExpr::a(), &psi);
        assert_eq!(lhs, inner(&a_psi, &a_psi).unwrap());
        assert_ne!(lhs.re().signum(), std::cmp::Ordering::Less);
    }
    // the anti-Fock metric is indefinite: same quantity goes negative
    let af = RepresentationKind::AntiFock;
    let psi = e(&af, 0);
    let lhs = inner(&apply(&n, &psi), &psi).unwrap();
    assert_eq!(lhs, ExactScalar::from_int(-1));
}

#[test]
fn b_operator_dictionary() {
    let af = RepresentationKind::AntiFock;
    let b = OperatorExpr::a_dag();
    let b_plus = adjoint_dagger(&b);
    let b_star = adjoint_star(&b);
    assert_eq!(b_star, -OperatorExpr::a());
    let minus_one = -OperatorExpr::identity();
    assert!(verify_identity(&b.commutator(&b_plus), &minus_one, &af, 50));
    assert!(verify_identity(&b.commutator(&b_star), &OperatorExpr::identity(), &af, 50));
    let n_tilde = &b_star * &b;
    for k in 0..=50 {
        assert_eq!(apply(&n_tilde, &e(&af, k)), e(&af, k).scale(&ExactScalar::from_int(k)));
    }
    // Ñ = −N − 1
    let n = OperatorExpr::word(&[ADag, A]);
    let rhs = &(-&n) - &OperatorExpr::identity();
    assert!(verify_identity(&n_tilde, &rhs, &af, 50));
    // b annihilates the anti-Fock vector
    assert!(apply(&b, &e(&af, 0)).is_zero());
}

#[test]
fn anticommutation_with_j() {
    let af = RepresentationKind::AntiFock;
    let j = OperatorExpr::j();
    assert!(verify_identity(&OperatorExpr::a().anticommutator(&j), &OperatorExpr::zero(), &af, 50));
    assert!(verify_identity(&OperatorExpr::a_dag().anticommutator(&j), &OperatorExpr::zero(), &af, 50));
    // in the Fock case J = 1 commutes instead
    let f = RepresentationKind::Fock;
    assert!(!verify_identity(&OperatorExpr::a().anticommutator(&j), &OperatorExpr::zero(), &f, 5));
    assert!(verify_identity(&OperatorExpr::a().commutator(&j), &OperatorExpr::zero(), &f, 50));
}

#[test]
fn anti_fock_norm_law() {
    let af = RepresentationKind::AntiFock;
    let mut factorial = BigRational::from_integer(1.into());
    for n in 1..=50i64 {
        if n > 1 {
            factorial *= BigRational::from_integer((n - 1).into());
        }
        let sign = if (n - 1) % 2 == 0 { 1 } else { -1 };
        let g = inner(&e(&af, n - 1), &e(&af, n - 1)).unwrap();
        assert_eq!(g, ExactScalar::from_rational(factorial.clone()) * ExactScalar::from_int(sign));
    }
}
