//! Enumerative checks on the curve `x^3 = alpha (t^(2^k) + t)` and the set
//! `S = {a^(2^k+1) (t^(2^k) + t)^(1 - 2^j)}` behind the Zhou–Pott APN criterion.

use std::collections::BTreeSet;

use super::grids::coprime_steps;
use super::spectra::format_set;
use super::{Claim, Counterexample, Finding, FindingBuilder, VerifyConfig};
use crate::error::Result;
use crate::gf2m::{hex, FieldSpec};

/// Whether the point-count estimate used for the curve
/// `x^3 = alpha (t^(2^k) + t)` guarantees a solution with `x != 0` and
/// `t^(2^k) + t != 0`: `2^(m/2) (2^(m/2) - 2 (2^l - 1)) > 2` with
/// `l = min(k mod m, m - k mod m)`.
pub fn cube_curve_hypothesis(m: u32, k: u32) -> bool {
    let k = k % m;
    let l = k.min(m - k);
    let q = 1i64 << (m / 2);
    q * (q - 2 * ((1i64 << l) - 1)) > 2
}

fn hyperplane(field: &FieldSpec, k: u32) -> Vec<u32> {
    let values: BTreeSet<u32> = field
        .elements()
        .map(|t| field.frobenius_pow(t, i64::from(k)) ^ t)
        .collect();
    values.into_iter().collect()
}

fn cubes(field: &FieldSpec) -> BTreeSet<u32> {
    field.elements().map(|x| field.pow(x, 3)).collect()
}

/// `S` for given `k`, `j`. Pairs with `t^(2^k) + t = 0` are skipped; `0`
/// is included through `a = 0`.
pub fn s_set(field: &FieldSpec, k: u32, j: u32) -> BTreeSet<u32> {
    let e = 1u64 + (1u64 << (k % field.m()));
    let twisted: Vec<u32> = hyperplane(field, k)
        .into_iter()
        .filter(|&h| h != 0)
        .map(|h| {
            let hj = field.frobenius_pow(h, i64::from(j));
            field.mul(h, field.inv(hj).expect("h is nonzero"))
        })
        .collect();
    let mut set: BTreeSet<u32> = field
        .elements()
        .flat_map(|a| {
            let ae = field.pow(a, e);
            twisted.iter().map(move |&w| field.mul(ae, w))
        })
        .collect();
    set.insert(0);
    set
}

fn describe_set(field: &FieldSpec, set: &BTreeSet<u32>) -> String {
    if field.order() <= 64 {
        format_set(set.iter().map(|&v| hex::format(v)))
    } else {
        format!("{} of {} elements", set.len(), field.order())
    }
}

fn even_ms(config: &VerifyConfig, b: &mut FindingBuilder) -> Vec<u32> {
    let (even, odd): (Vec<u32>, Vec<u32>) = config.ms().partition(|m| m % 2 == 0);
    if !odd.is_empty() {
        b.note(format!("odd m skipped: {}", format_set(odd)));
    }
    even
}

/// For every even `m`, coprime `k` and `alpha != 0`: the trivial solution
/// `(0, 0)` always exists; reports whether a solution with `x != 0` and
/// `t^(2^k) + t != 0` exists.
pub fn verify_cube_curve(config: &VerifyConfig) -> Result<Finding> {
    config.validate()?;
    let mut b = FindingBuilder::new(
        Claim::CubeCurve,
        format!(
            "m={}..={} even; gcd(k,m)=1; every alpha != 0; solutions of x^3 = alpha (t^(2^k) + t) by enumeration",
            config.m_min, config.m_max
        ),
        config,
    );
    for m in even_ms(config, &mut b) {
        let field = FieldSpec::new(m)?;
        let cubes = cubes(&field);
        for k in coprime_steps(m) {
            let hyp = cube_curve_hypothesis(m, k);
            let nonzero_h: Vec<u32> = hyperplane(&field, k).into_iter().filter(|&h| h != 0).collect();
            let mut trivial_only = Vec::new();
            for alpha in field.nonzero_elements() {
                b.instance(0);
                // (a): x = t = 0 is always a solution
                let trivial = field.pow(0, 3) == field.mul(alpha, field.frobenius_pow(0, i64::from(k)));
                if !trivial {
                    b.refute(Counterexample {
                        m,
                        params: None,
                        component: None,
                        reason: format!("k={k} alpha={}: (0, 0) is not a solution", hex::format(alpha)),
                    });
                }
                // (b): alpha h is a nonzero cube for some nonzero h in the image of t^(2^k) + t
                if !nonzero_h.iter().any(|&h| cubes.contains(&field.mul(alpha, h))) {
                    trivial_only.push(alpha);
                    b.fail(
                        hyp,
                        Counterexample {
                            m,
                            params: None,
                            component: None,
                            reason: format!(
                                "k={k} alpha={}: no solution with x != 0 and t^(2^k)+t != 0",
                                hex::format(alpha)
                            ),
                        },
                    );
                }
            }
            b.note(format!(
                "m={m} k={k}: point-count hypothesis {}; nontrivial solutions for {}/{} alphas{}",
                if hyp { "holds" } else { "fails" },
                field.mask() as usize - trivial_only.len(),
                field.mask(),
                if trivial_only.is_empty() {
                    String::new()
                } else {
                    format!(
                        "; only the trivial solution for {}",
                        format_set(trivial_only.iter().map(|&a| hex::format(a)))
                    )
                }
            ));
        }
    }
    Ok(b.finish())
}

/// `S = GF(2^m)` for odd `j` and `S = cubes u {0}` for even `j`, for every
/// even `m` and coprime `k`.
pub fn verify_s_full(config: &VerifyConfig) -> Result<Finding> {
    config.validate()?;
    let mut b = FindingBuilder::new(
        Claim::SFull,
        format!(
            "m={}..={} even; gcd(k,m)=1; 0 <= j < m; pairs with t^(2^k)+t = 0 skipped, 0 contributed by a = 0",
            config.m_min, config.m_max
        ),
        config,
    );
    for m in even_ms(config, &mut b) {
        let field = FieldSpec::new(m)?;
        let full: BTreeSet<u32> = field.elements().collect();
        let cubes = cubes(&field);
        for k in coprime_steps(m) {
            let hyp = cube_curve_hypothesis(m, k);
            for j in 0..m {
                b.instance(0);
                let s = s_set(&field, k, j);
                let (expected, label) = if j % 2 == 1 {
                    (&full, "the whole field")
                } else {
                    (&cubes, "the cubes and 0")
                };
                let outcome = if &s == expected {
                    format!("S is {label}")
                } else {
                    let got = describe_set(&field, &s);
                    b.fail(
                        hyp,
                        Counterexample {
                            m,
                            params: None,
                            component: None,
                            reason: format!("k={k} j={j}: S = {got}, expected {label}"),
                        },
                    );
                    format!("S = {got}, not {label}")
                };
                b.note(format!("m={m} k={k} j={j}: {outcome}"));
            }
        }
    }
    Ok(b.finish())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hypothesis_boundary() {
        assert!(!cube_curve_hypothesis(2, 1));
        assert!(cube_curve_hypothesis(4, 1));
        assert!(cube_curve_hypothesis(4, 3));
        assert!(cube_curve_hypothesis(6, 5));
    }

    #[test]
    fn s_set_m2_is_zero_and_one() {
        let field = FieldSpec::new(2).unwrap();
        assert_eq!(s_set(&field, 1, 1), BTreeSet::from([0, 1]));
    }

    #[test]
    fn cube_curve_m2_alpha_omega_has_only_trivial_solution() {
        let f = verify_cube_curve(&VerifyConfig::range(2, 2)).unwrap();
        assert!(f.boundary_cases.iter().any(|c| c.reason.contains("alpha=0x2:")));
        assert!(f.counterexamples.is_empty());
    }
}
