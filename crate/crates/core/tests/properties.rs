//! Property tests: the Gröbner engine against dense linear algebra, and
//! algebraic identities that every computed object must satisfy.

use std::sync::Arc;

use arr_core::monomial::monomials_of_degree;
use arr_core::oracle::{lead_term_dim, macaulay_dim, quotient_dim};
use arr_core::{
    buchberger_criterion_holds, groebner_basis_in, hilbert_data, minimal_betti, Budget, Field,
    Grading, Ideal, Monomial, MonomialOrder, Polynomial, PrimeField, Ring,
};
use proptest::prelude::*;

/// A form as (degree, [(monomial index, coefficient)]).
type FormSpec = (u32, Vec<(usize, i64)>);

fn form_spec() -> impl Strategy<Value = FormSpec> {
    (1u32..=4).prop_flat_map(|d| {
        (
            Just(d),
            prop::collection::vec((0usize..1000, -9i64..=9), 1..=5),
        )
    })
}

fn ideal_spec() -> impl Strategy<Value = (usize, Vec<FormSpec>)> {
    (3usize..=4, prop::collection::vec(form_spec(), 1..=4))
}

fn ring(n: usize) -> Arc<Ring<PrimeField>> {
    let b = Budget {
        check_identities: true,
        ..Budget::default()
    };
    Ring::new(PrimeField::default(), n).unwrap().with_budget(b)
}

fn build(ring: &Arc<Ring<PrimeField>>, spec: &[FormSpec]) -> Vec<Polynomial<PrimeField>> {
    let k = ring.field();
    spec.iter()
        .map(|(d, terms)| {
            let mons = monomials_of_degree(ring.nvars(), *d);
            let t = terms
                .iter()
                .map(|&(i, c)| (mons[i % mons.len()], k.from_i64(c)))
                .collect();
            Polynomial::from_terms(ring, t)
        })
        .filter(|f| !f.is_zero())
        .collect()
}

fn config() -> ProptestConfig {
    ProptestConfig {
        cases: 200,
        ..ProptestConfig::default()
    }
}

proptest! {
    #![proptest_config(config())]

    #[test]
    fn basis_dimensions_match_macaulay_ranks((n, spec) in ideal_spec()) {
        let r = ring(n);
        let gens = build(&r, &spec);
        prop_assume!(!gens.is_empty());
        for order in [MonomialOrder::GrevLex, MonomialOrder::Lex] {
            let gb = groebner_basis_in(&r, &gens, order).unwrap();
            prop_assert!(buchberger_criterion_holds(&gb).unwrap());
            for t in 0..=6 {
                prop_assert_eq!(lead_term_dim(&gb, t), macaulay_dim(&gens, n, t), "order {:?}, t = {}", order, t);
            }
            for g in &gens {
                prop_assert!(gb.contains(g).unwrap());
            }
        }
    }

    #[test]
    fn reduced_basis_ignores_generator_order((n, spec) in ideal_spec()) {
        let r = ring(n);
        let gens = build(&r, &spec);
        prop_assume!(!gens.is_empty());
        let mut rev = gens.clone();
        rev.reverse();
        rev.push(gens[0].scale(&r.field().from_i64(7)));
        let a = groebner_basis_in(&r, &gens, MonomialOrder::GrevLex).unwrap().polynomials();
        let b = groebner_basis_in(&r, &rev, MonomialOrder::GrevLex).unwrap().polynomials();
        prop_assert_eq!(a, b);
    }

    #[test]
    fn ideal_operations_keep_their_identities((n, a) in ideal_spec(), b in prop::collection::vec(form_spec(), 1..=3)) {
        let r = ring(n);
        let (ga, gb) = (build(&r, &a), build(&r, &b));
        prop_assume!(!ga.is_empty() && !gb.is_empty());
        let i = Ideal::new(&r, ga).unwrap();
        let j = Ideal::new(&r, gb).unwrap();
        // identities are re-checked by membership inside each call
        let meet = i.intersect(&j).unwrap();
        let quo = i.quotient(&j).unwrap();
        let sat = i.saturate_irrelevant().unwrap();
        prop_assert!(meet.contains_ideal(&i.product(&j).unwrap()).unwrap());
        prop_assert!(sat.contains_ideal(&i.quotient(&Ideal::irrelevant(&r)).unwrap()).unwrap());
        prop_assert!(sat.is_saturated().unwrap());
        for t in 0..=4 {
            let direct = macaulay_dim(quo.gens(), n, t);
            prop_assert_eq!(direct, quotient_dim(i.gens(), j.gens(), n, t));
        }
    }

    #[test]
    fn hilbert_data_and_betti_numbers_agree((n, spec) in ideal_spec()) {
        let r = ring(n);
        let gens = build(&r, &spec);
        prop_assume!(!gens.is_empty());
        let i = Ideal::new(&r, gens).unwrap();
        let h = hilbert_data(&i).unwrap();
        let b = minimal_betti(&i).unwrap();
        for t in 0..=8i64 {
            let all = monomials_of_degree(n, t as u32).len() as i64;
            prop_assert_eq!(h.value(t), all - macaulay_dim(i.gens(), n, t as u32) as i64);
            prop_assert_eq!(b.hilbert_value(n, t), h.value(t));
        }
        prop_assert!(b.projective_dimension().unwrap_or(0) <= n);
    }
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 256, ..ProptestConfig::default() })]

    #[test]
    fn polynomial_arithmetic_is_a_ring(f in form_spec(), g in form_spec(), h in form_spec()) {
        let r = ring(4);
        let v = build(&r, &[f, g, h]);
        prop_assume!(v.len() == 3);
        let (f, g, h) = (&v[0], &v[1], &v[2]);
        let lhs = f.add(g).unwrap().mul(h).unwrap();
        let rhs = f.mul(h).unwrap().add(&g.mul(h).unwrap()).unwrap();
        prop_assert_eq!(lhs, rhs);
        prop_assert_eq!(f.mul(g).unwrap(), g.mul(f).unwrap());
        prop_assert!(f.sub(f).unwrap().is_zero());
        // Leibniz rule and Euler's identity
        for x in 0..4 {
            let d = f.mul(g).unwrap().partial_derivative(x).unwrap();
            let e = f.partial_derivative(x).unwrap().mul(g).unwrap()
                .add(&f.mul(&g.partial_derivative(x).unwrap()).unwrap()).unwrap();
            prop_assert_eq!(d, e);
        }
        prop_assert!(f.euler_check().unwrap());
    }

    #[test]
    fn monomial_orders_are_multiplicative(
        a in prop::collection::vec(0u32..6, 4),
        b in prop::collection::vec(0u32..6, 4),
        c in prop::collection::vec(0u32..6, 4),
    ) {
        let (a, b, c) = (Monomial::new(&a).unwrap(), Monomial::new(&b).unwrap(), Monomial::new(&c).unwrap());
        let grading = Grading::standard();
        for o in [MonomialOrder::GrevLex, MonomialOrder::Lex] {
            let ab = o.cmp(&a, &b, &grading, 4);
            prop_assert_eq!(ab, o.cmp(&a.mul(&c), &b.mul(&c), &grading, 4));
            prop_assert_eq!(ab.reverse(), o.cmp(&b, &a, &grading, 4));
            prop_assert_eq!(ab == std::cmp::Ordering::Equal, a == b);
            prop_assert_ne!(o.cmp(&a.mul(&c), &Monomial::ONE, &grading, 4), std::cmp::Ordering::Less);
        }
    }

    #[test]
    fn prime_field_inverses(a in 1i64..32003) {
        let k = PrimeField::default();
        let x = k.from_i64(a);
        prop_assert!(k.is_one(&k.mul(&x, &k.inv(&x).unwrap())));
    }
}
