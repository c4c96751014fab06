mod common;

use apnspectra::families::FamilyParams;
use apnspectra::lincurves::{
    bezout_bound_check, common_zero_basis, derive_pair, infinity_point, kernel_dimension, LinearizedBivariate,
};
use apnspectra::vbf::component_truth_table;
use apnspectra::{build_function, ComponentSelector, FieldSpec};
use proptest::prelude::*;

fn gcd(a: u32, b: u32) -> u32 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

type Coeffs = Vec<(u32, u32)>;

/// Field, coprime `k` and two coefficient lists of length at most `top + 1`.
fn pair_inputs(max_m: u32, top: usize) -> impl Strategy<Value = (FieldSpec, u32, Coeffs, Coeffs)> {
    (2..=max_m).prop_flat_map(move |m| {
        let field = FieldSpec::new(m).unwrap();
        let ks: Vec<u32> = (1..m.max(2)).filter(|&k| gcd(k, m) == 1).collect();
        let coeffs = proptest::collection::vec((0..field.order(), 0..field.order()), 1..=top + 1);
        (Just(field), proptest::sample::select(ks), coeffs.clone(), coeffs)
    })
}

fn poly(field: FieldSpec, k: u32, c: Vec<(u32, u32)>) -> LinearizedBivariate {
    LinearizedBivariate::new(field, k, c).unwrap()
}

fn brute_common_zeros(a: &LinearizedBivariate, b: &LinearizedBivariate) -> usize {
    let field = a.field();
    field
        .elements()
        .flat_map(|x| field.elements().map(move |y| (x, y)))
        .filter(|&(x, y)| a.eval(x, y) == 0 && b.eval(x, y) == 0)
        .count()
}

fn family_instance() -> impl Strategy<Value = FamilyParams> {
    (2u32..=4, 0usize..4, any::<[u32; 8]>()).prop_filter_map("invalid parameters", |(m, which, r)| {
        let field = FieldSpec::new(m).unwrap();
        let ks: Vec<u32> = (1..m.max(2)).filter(|&k| gcd(k, m) == 1).collect();
        let k = ks[r[0] as usize % ks.len()];
        let nz = |v: u32| 1 + v % field.mask();
        let el = |v: u32| v % field.order();
        match which {
            0 => FamilyParams::taniguchi(field, k, nz(r[1]), el(r[2])).ok(),
            1 => {
                let i = r[3] % m;
                let j = (i + k) % m;
                FamilyParams::carlet11(field, i, j, nz(r[4]), nz(r[5]), el(r[6]), el(r[7])).ok()
            }
            2 => FamilyParams::zhou_pott(field, k, r[3] % m, nz(r[4])).ok(),
            _ => {
                let field = FieldSpec::new(3).unwrap();
                FamilyParams::butterfly(field, 1 + r[1] % 7, 1 + r[2] % 7).ok()
            }
        }
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn kernel_dimension_counts_common_zeros((field, k, ca, cb) in pair_inputs(4, 3)) {
        let (a, b) = (poly(field, k, ca), poly(field, k, cb));
        let dim = kernel_dimension(&a, &b).unwrap();
        prop_assert_eq!(1usize << dim, brute_common_zeros(&a, &b));
        for (x, y) in common_zero_basis(&a, &b).unwrap() {
            prop_assert_eq!((a.eval(x, y), b.eval(x, y)), (0, 0));
        }
    }

    #[test]
    fn kernel_dimension_invariant_under_recombination((field, k, ca, cb) in pair_inputs(5, 3), c in any::<u32>()) {
        let c = c % field.order();
        let (a, b) = (poly(field, k, ca), poly(field, k, cb));
        let dim = kernel_dimension(&a, &b).unwrap();
        prop_assert_eq!(kernel_dimension(&a.add_scaled(&b, c).unwrap(), &b).unwrap(), dim);
        prop_assert_eq!(kernel_dimension(&a, &b.add_scaled(&a, c).unwrap()).unwrap(), dim);
    }

    #[test]
    fn bezout_bound_with_distinct_infinity((field, k, ca, cb) in pair_inputs(5, 3)) {
        let (a, b) = (poly(field, k, ca), poly(field, k, cb));
        let r = bezout_bound_check(&a, &b).unwrap();
        if r.distinct_infinity {
            prop_assert_eq!(r.bound_satisfied, Some(true), "{:?}", r);
        } else {
            prop_assert_eq!(r.bound_satisfied, None);
        }
    }

    #[test]
    fn infinity_point_is_a_normalized_zero_of_the_top_form((field, k, ca, _cb) in pair_inputs(5, 3)) {
        let a = poly(field, k, ca);
        prop_assume!(a.top_index().is_some());
        let p = infinity_point(&a).unwrap();
        prop_assert!(p.px == 1 || (p.px == 0 && p.py == 1));
        let d = a.top_index().unwrap();
        let (c, dd) = a.coefficients()[d as usize];
        let e = i64::from(d * k);
        let top = field.mul(c, field.frobenius_pow(p.px, e)) ^ field.mul(dd, field.frobenius_pow(p.py, e));
        prop_assert_eq!(top, 0);
    }

    #[test]
    fn derived_linear_space_is_the_radical(params in family_instance(), c in any::<u32>()) {
        let field = params.field;
        let n = 2 * field.m();
        let c = 1 + c % ((1 << n) - 1);
        let sel = ComponentSelector::from_index(&field, c).unwrap();
        let f = build_function(&params).unwrap();
        let table = component_truth_table(&f, sel).unwrap();
        let pair = derive_pair(&params, sel.lambda, sel.mu).unwrap();
        let basis = pair.linear_space_basis().unwrap();
        prop_assert_eq!(common::span(&basis, field.m()), common::radical(&table), "{:?} {:?}", params, sel);
    }
}

#[test]
fn taniguchi_infinity_points_distinct_when_mu_nonzero() {
    for m in 2..=4 {
        let field = FieldSpec::new(m).unwrap();
        for k in (1..m.max(2)).filter(|&k| gcd(k, m) == 1) {
            for alpha in field.nonzero_elements() {
                for beta in field.nonzero_elements() {
                    let p = FamilyParams::taniguchi(field, k, alpha, beta).unwrap();
                    for lambda in field.elements() {
                        for mu in field.nonzero_elements() {
                            let pair = derive_pair(&p, lambda, mu).unwrap();
                            let (pa, pb) = (infinity_point(&pair.a).unwrap(), infinity_point(&pair.b).unwrap());
                            assert_ne!(pa, pb, "{p:?} lambda={lambda} mu={mu}");
                            let r = bezout_bound_check(&pair.a, &pair.b).unwrap();
                            assert_eq!(r.bound_satisfied, Some(true));
                            assert!(r.kernel_dim <= 4);
                        }
                    }
                }
            }
        }
    }
}

#[test]
fn identical_curves_do_not_assert_the_bound() {
    let field = FieldSpec::new(3).unwrap();
    let a = poly(field, 1, vec![(1, 1), (3, 5)]);
    let r = bezout_bound_check(&a, &a).unwrap();
    assert!(!r.distinct_infinity);
    assert_eq!(r.bound_satisfied, None);
}

#[test]
fn bezout_needs_coprime_step() {
    let field = FieldSpec::new(4).unwrap();
    let a = poly(field, 2, vec![(1, 0)]);
    let b = poly(field, 2, vec![(0, 1)]);
    assert!(bezout_bound_check(&a, &b).is_err());
}
