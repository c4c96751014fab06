//! Spectral and APN sweeps over the four concrete families.

use std::collections::BTreeSet;

use rayon::prelude::*;

use super::analysis::{analyze, Analysis};
use super::enumerative::cube_curve_hypothesis;
use super::grids::{self, Grid};
use super::{Claim, Counterexample, Finding, FindingBuilder, VerifyConfig};
use crate::error::Result;
use crate::families::{
    carlet11_degenerate_triple, carlet11_root_count, taniguchi_root_count, zhoupott_apn_predicate, Family, FamilyParams,
};
use crate::gf2m::FieldSpec;
use crate::vbf::{component_truth_table, differential_spectrum, linear_structures, ComponentSelector};

type Failures = Vec<(bool, Counterexample)>;

pub(crate) fn format_set<T: std::fmt::Display>(items: impl IntoIterator<Item = T>) -> String {
    let parts: Vec<String> = items.into_iter().map(|v| v.to_string()).collect();
    format!("{{{}}}", parts.join(", "))
}

/// Analyzes every instance in parallel and feeds the results to `check` in
/// grid order. Triangle disagreements are always refutations.
fn sweep<T, C>(builder: &mut FindingBuilder, params: &[FamilyParams], config: &VerifyConfig, check: C) -> Result<Vec<T>>
where
    T: Send,
    C: Fn(&FamilyParams, &Analysis) -> Result<(Failures, T)> + Sync,
{
    let results: Vec<(u64, Vec<Counterexample>, Failures, T)> = params
        .par_iter()
        .map(|p| {
            let analysis = analyze(p, config)?;
            let (failures, data) = check(p, &analysis)?;
            Ok((analysis.components(), analysis.disagreements, failures, data))
        })
        .collect::<Result<_>>()?;
    let mut out = Vec::with_capacity(results.len());
    for (components, disagreements, failures, data) in results {
        builder.instance(components);
        for d in disagreements {
            builder.disagreement(d);
        }
        for (in_hypothesis, c) in failures {
            builder.fail(in_hypothesis, c);
        }
        out.push(data);
    }
    Ok(out)
}

fn parseval_failures(params: &FamilyParams, analysis: &Analysis, failures: &mut Failures) {
    if analysis.report.parseval_violations > 0 {
        failures.push((
            true,
            Counterexample::instance(
                params,
                format!("{} components violate Parseval", analysis.report.parseval_violations),
            ),
        ));
    }
}

fn level_summary(analysis: &Analysis) -> String {
    let r = &analysis.report;
    let mut s = format_set(r.counts.iter().map(|(level, n)| format!("{level}: {n}")));
    if r.not_plateaued > 0 {
        s.push_str(&format!(" plus {} not plateaued", r.not_plateaued));
    }
    s
}

fn abs_values(analysis: &Analysis) -> BTreeSet<u64> {
    analysis.report.walsh_values.iter().map(|v| v.unsigned_abs()).collect()
}

/// Tally of "roots of G(X,1)" against "only bent/semibent components".
fn root_pattern(items: impl Iterator<Item = (usize, bool)>) -> String {
    let mut tally: std::collections::BTreeMap<usize, (usize, usize)> = Default::default();
    for (roots, classical) in items {
        let e = tally.entry(roots).or_default();
        if classical {
            e.0 += 1
        } else {
            e.1 += 1
        }
    }
    let parts: Vec<String> = tally
        .iter()
        .map(|(r, (ok, bad))| format!("{r} roots of G(X,1): {ok} bent/semibent only, {bad} with other levels"))
        .collect();
    parts.join("; ")
}

fn grid_text(claim_grid: &str, config: &VerifyConfig) -> String {
    format!(
        "m={}..={}; {claim_grid}; exhaustive for m<={}, {} seeded samples above",
        config.m_min, config.m_max, config.exhaustive_max_m, config.samples
    )
}

/// Every component bent or semibent for `alpha beta != 0`; APN instances
/// have exactly `2(2^2m - 1)/3` bent components.
pub fn verify_taniguchi_spectrum(config: &VerifyConfig) -> Result<Finding> {
    config.validate()?;
    let mut b = FindingBuilder::new(
        Claim::TaniguchiSpectrum,
        grid_text("gcd(k,m)=1, alpha beta != 0", config),
        config,
    );
    for m in config.ms() {
        let field = FieldSpec::new(m)?;
        let grid = grids::taniguchi(field, config);
        let expected_bent = 2 * ((1u64 << (2 * m)) - 1) / 3;
        let per = sweep(&mut b, &grid.params, config, |p, a| {
            let mut failures = Vec::new();
            parseval_failures(p, a, &mut failures);
            let Family::Taniguchi { k, alpha, beta } = p.family else {
                unreachable!()
            };
            let roots = taniguchi_root_count(&p.field, k, alpha, beta)?;
            let apn = roots == 0;
            let classical = a.report.only_bent_or_semibent();
            if !classical {
                failures.push((
                    true,
                    Counterexample::instance(
                        p,
                        format!("plateau levels {}; G(X,1) has {roots} roots", level_summary(a)),
                    ),
                ));
            }
            if apn && a.report.bent_count != expected_bent {
                failures.push((
                    true,
                    Counterexample::instance(
                        p,
                        format!(
                            "APN instance with {} bent components, expected {expected_bent}",
                            a.report.bent_count
                        ),
                    ),
                ));
            }
            Ok((failures, (apn, abs_values(a), roots, classical)))
        })?;
        let apn = per.iter().filter(|x| x.0).count();
        let values: BTreeSet<u64> = per.iter().flat_map(|x| x.1.iter().copied()).collect();
        b.note(format!(
            "{}; {apn} APN; |W| values {}",
            grid.describe(m, config.samples),
            format_set(values)
        ));
        b.note(format!("m={m}: {}", root_pattern(per.iter().map(|x| (x.2, x.3)))));
    }
    Ok(b.finish())
}

/// `2^(2m-1) - 2^(3m/2)` for even `m`, `2^(2m-1) - 2^((3m-1)/2)` for odd `m`.
pub fn carlet11_degenerate_nonlinearity(m: u32) -> u64 {
    let top = 1u64 << (2 * m - 1);
    if m.is_multiple_of(2) {
        top - (1u64 << (3 * m / 2))
    } else {
        top - (1u64 << ((3 * m - 1) / 2))
    }
}

/// Bent/semibent only unless the coefficients form a degenerate triple, in
/// which case the nonlinearity is given by [`carlet11_degenerate_nonlinearity`].
pub fn verify_carlet11(config: &VerifyConfig) -> Result<Finding> {
    config.validate()?;
    let mut b = FindingBuilder::new(
        Claim::Carlet11,
        format!(
            "m={}..={}; i != j with gcd(i-j,m)=1, S T != 0; exhaustive for m<=2, {} seeded samples above; degenerate triples exhaustive for m<={}, sampled above",
            config.m_min, config.m_max, config.samples, config.exhaustive_max_m
        ),
        config,
    );
    for m in config.ms() {
        let field = FieldSpec::new(m)?;
        let mut grid = grids::carlet11(field, config);
        let generic = grid.params.len();
        grid.params.extend(grids::carlet11_degenerate(field, config));
        let expected_nl = carlet11_degenerate_nonlinearity(m);
        let per = sweep(&mut b, &grid.params, config, |p, a| {
            let mut failures = Vec::new();
            parseval_failures(p, a, &mut failures);
            let Family::Carlet11 { i, j, s, t, u, v } = p.family else {
                unreachable!()
            };
            let degenerate = carlet11_degenerate_triple(&p.field, i, j, s, t, u, v).is_some();
            let roots = carlet11_root_count(&p.field, i, j, s, t, u, v)?;
            let classical = a.report.only_bent_or_semibent();
            if degenerate {
                if a.report.nonlinearity != expected_nl {
                    failures.push((
                        true,
                        Counterexample::instance(
                            p,
                            format!(
                                "degenerate triple with NL {}, expected {expected_nl}",
                                a.report.nonlinearity
                            ),
                        ),
                    ));
                }
            } else if !classical {
                failures.push((
                    true,
                    Counterexample::instance(
                        p,
                        format!(
                            "not degenerate, plateau levels {}; G(X,1) has {roots} roots",
                            level_summary(a)
                        ),
                    ),
                ));
            }
            Ok((failures, (degenerate, roots, classical)))
        })?;
        let degenerate = per.iter().filter(|x| x.0).count();
        b.note(format!(
            "m={m}: {generic} generic tuples ({}), {} degenerate triples, {degenerate} instances checked against NL {expected_nl}",
            if grid.exhaustive { "exhaustive" } else { "sampled" },
            grid.params.len() - generic
        ));
        b.note(format!(
            "m={m} non-degenerate: {}",
            root_pattern(per.iter().filter(|x| !x.0).map(|x| (x.1, x.2)))
        ));
    }
    Ok(b.finish())
}

/// Predicate against brute-force uniformity for even `m`, bent/semibent
/// classification by cubicity of `alpha`, and the cube-case nonlinearity
/// `2^(2m-1) - 2^(m+1)`. Failures where the curve-counting step does not
/// apply (in particular `m = 2`) are recorded as boundary cases.
pub fn verify_zhoupott(config: &VerifyConfig) -> Result<Finding> {
    config.validate()?;
    let mut b = FindingBuilder::new(
        Claim::Zhoupott,
        grid_text("gcd(k,m)=1, 0 <= j < m, alpha != 0", config),
        config,
    );
    for m in config.ms() {
        let field = FieldSpec::new(m)?;
        let grid = grids::zhou_pott(field, config);
        let even = m % 2 == 0;
        let cube_nl = (1u64 << (2 * m - 1)) - (1u64 << (m + 1));
        let per = sweep(&mut b, &grid.params, config, |p, a| {
            let mut failures = Vec::new();
            parseval_failures(p, a, &mut failures);
            let Family::ZhouPott { k, j, alpha } = p.family else {
                unreachable!()
            };
            let field = p.field;
            let hypothesis = !even || cube_curve_hypothesis(m, k);
            let mut agree = None;
            if even {
                let predicate = zhoupott_apn_predicate(&field, k, j, alpha)?;
                let brute = differential_spectrum(&a.function).is_apn();
                agree = Some(predicate == brute);
                if predicate != brute {
                    failures.push((
                        hypothesis,
                        Counterexample::instance(
                            p,
                            format!("predicate says APN={predicate}, brute force says APN={brute}"),
                        ),
                    ));
                }
            }
            let cube = field.is_cube(alpha);
            let expect_classical = !even || !cube;
            if a.report.only_bent_or_semibent() != expect_classical {
                failures.push((
                    hypothesis,
                    Counterexample::instance(
                        p,
                        format!(
                            "alpha {} a cube, plateau levels {}",
                            if cube { "is" } else { "is not" },
                            level_summary(a)
                        ),
                    ),
                ));
            }
            if even && cube {
                if a.report.nonlinearity != cube_nl {
                    failures.push((
                        hypothesis,
                        Counterexample::instance(
                            p,
                            format!("cube alpha with NL {}, expected {cube_nl}", a.report.nonlinearity),
                        ),
                    ));
                }
                if !a.report.counts.contains_key(&4) {
                    failures.push((
                        hypothesis,
                        Counterexample::instance(
                            p,
                            format!("cube alpha without 4-plateaued components: {}", level_summary(a)),
                        ),
                    ));
                }
            }
            Ok((failures, (agree, j % 2 == 1, cube, a.report.only_bent_or_semibent())))
        })?;
        let checked: Vec<bool> = per.iter().filter_map(|x| x.0).collect();
        let agreeing = checked.iter().filter(|&&x| x).count();
        let predicate_note = if even {
            format!("APN predicate agrees with brute force on {agreeing}/{}", checked.len())
        } else {
            "APN predicate not defined for odd m".to_string()
        };
        b.note(format!("{}; {predicate_note}", grid.describe(m, config.samples)));
        let mut tally: std::collections::BTreeMap<(bool, bool), (usize, usize)> = Default::default();
        for &(_, odd_j, cube, classical) in &per {
            let e = tally.entry((odd_j, cube)).or_default();
            if classical {
                e.0 += 1
            } else {
                e.1 += 1
            }
        }
        let parts: Vec<String> = tally
            .iter()
            .map(|((odd_j, cube), (ok, bad))| {
                format!(
                    "j {}, alpha {}: {ok} bent/semibent only, {bad} with other levels",
                    if *odd_j { "odd" } else { "even" },
                    if *cube { "cube" } else { "non-cube" }
                )
            })
            .collect();
        b.note(format!("m={m}: {}", parts.join("; ")));
    }
    Ok(b.finish())
}

/// The nonzero `z0` with `z0^3 = 1 / (lambda (alpha + alpha^2))`: component
/// `(lambda, lambda)` of a degenerate butterfly has linear space
/// `{Y = X} u {Y = X + z0}`.
pub fn butterfly_exceptional_offset(field: &FieldSpec, alpha: u32, lambda: u32) -> Result<u32> {
    let c = field.mul(lambda, alpha ^ field.square(alpha));
    let target = field.inv(c)?;
    // cubing is a bijection for odd m; its inverse is x -> x^((2^(m+1) - 1) / 3)
    let e = ((1u64 << (field.m() + 1)) - 1) / 3;
    Ok(field.pow(target, e))
}

fn butterfly_degenerate_checks(p: &FamilyParams, a: &Analysis, failures: &mut Failures) -> Result<()> {
    let field = p.field;
    let m = field.m();
    let Family::Butterfly { alpha, .. } = p.family else {
        unreachable!()
    };
    let expected_nl = (1u64 << (2 * m - 1)) - (1u64 << ((3 * m - 1) / 2));
    if a.report.nonlinearity != expected_nl {
        failures.push((
            true,
            Counterexample::instance(p, format!("NL {}, expected {expected_nl}", a.report.nonlinearity)),
        ));
    }
    let mut wrong_level = Vec::new();
    for (idx, level) in a.levels.iter().enumerate() {
        let sel = ComponentSelector::from_index(&field, idx as u32 + 1)?;
        let exceptional = sel.lambda == sel.mu;
        if exceptional != (*level == Some(m + 1)) {
            wrong_level.push(sel);
        }
    }
    if let Some(&sel) = wrong_level.first() {
        failures.push((
            true,
            Counterexample {
                component: Some(sel),
                ..Counterexample::instance(
                    p,
                    format!(
                        "{} components where level m+1 and lambda = mu do not coincide",
                        wrong_level.len()
                    ),
                )
            },
        ));
    }
    for lambda in field.nonzero_elements() {
        let z0 = butterfly_exceptional_offset(&field, alpha, lambda)?;
        let sel = ComponentSelector::new(lambda, lambda)?;
        let table = component_truth_table(&a.function, sel)?;
        let got: BTreeSet<usize> = linear_structures(&table).into_iter().collect();
        let expected: BTreeSet<usize> = field
            .elements()
            .flat_map(|x| [a.function.index(x, x), a.function.index(x, x ^ z0)])
            .collect();
        if got != expected {
            failures.push((
                true,
                Counterexample {
                    component: Some(sel),
                    ..Counterexample::instance(p, format!("linear space is not {{Y=X}} u {{Y=X+{z0:#x}}}"))
                },
            ));
        }
    }
    Ok(())
}

/// Spectrum `{0, +-2^m, +-2^(m+1)}` off the degenerate branch; on it, the
/// nonlinearity `2^(2m-1) - 2^((3m-1)/2)` and the `(m+1)`-dimensional
/// linear spaces of the components `lambda = mu`.
pub fn verify_butterfly(config: &VerifyConfig) -> Result<Finding> {
    config.validate()?;
    let mut b = FindingBuilder::new(
        Claim::Butterfly,
        format!(
            "m={}..={} odd; alpha beta != 0; exhaustive for m<={}, {} seeded samples above plus every beta = (1+alpha)^3",
            config.m_min, config.m_max, config.exhaustive_max_m, config.samples
        ),
        config,
    );
    for m in config.ms() {
        if m % 2 == 0 {
            b.note(format!("m={m}: skipped, the butterfly needs odd m"));
            continue;
        }
        let field = FieldSpec::new(m)?;
        let grid: Grid = grids::butterfly(field, config);
        let allowed: BTreeSet<u64> = [0, 1u64 << m, 1u64 << (m + 1)].into();
        let per = sweep(&mut b, &grid.params, config, |p, a| {
            let mut failures = Vec::new();
            parseval_failures(p, a, &mut failures);
            let Family::Butterfly { alpha, beta } = p.family else {
                unreachable!()
            };
            let field = p.field;
            let degenerate = beta == field.pow(1 ^ alpha, 3);
            if degenerate {
                butterfly_degenerate_checks(p, a, &mut failures)?;
            } else {
                let extra: Vec<u64> = abs_values(a).difference(&allowed).copied().collect();
                if !extra.is_empty() {
                    failures.push((
                        true,
                        Counterexample::instance(p, format!("|W| values outside the spectrum: {}", format_set(extra))),
                    ));
                }
            }
            let mut apn_checked = false;
            if m == 3 && field.trace(alpha) == 0 && beta == field.pow(alpha, 3) ^ alpha {
                apn_checked = true;
                let u = differential_spectrum(&a.function).uniformity;
                if u != 2 {
                    failures.push((
                        true,
                        Counterexample::instance(p, format!("differential uniformity {u}, expected 2")),
                    ));
                }
            }
            Ok((failures, (degenerate, apn_checked)))
        })?;
        let degenerate = per.iter().filter(|x| x.0).count();
        let apn = per.iter().filter(|x| x.1).count();
        b.note(format!(
            "{}; {degenerate} degenerate; {apn} checked for uniformity 2",
            grid.describe(m, config.samples)
        ));
        if degenerate > 0 {
            b.note(format!(
                "m={m}: degenerate components (lambda, lambda) have linear space {{Y=X}} u {{Y=X+z0}} with z0^3 = 1/(lambda (alpha + alpha^2)); z0 = 1 exactly when lambda = 1/(alpha + alpha^2)"
            ));
        }
    }
    Ok(b.finish())
}

/// Oracle triangle alone, over the union of all family grids.
pub fn verify_kernel_wht_agreement(config: &VerifyConfig) -> Result<Finding> {
    config.validate()?;
    let mut b = FindingBuilder::new(
        Claim::KernelWht,
        grid_text(
            "union of the Taniguchi, Carlet-2011 (with degenerate triples), Zhou-Pott and butterfly grids",
            config,
        ),
        config,
    );
    for m in config.ms() {
        let field = FieldSpec::new(m)?;
        let mut params = grids::taniguchi(field, config).params;
        params.extend(grids::carlet11(field, config).params);
        params.extend(grids::carlet11_degenerate(field, config));
        params.extend(grids::zhou_pott(field, config).params);
        if m % 2 == 1 {
            params.extend(grids::butterfly(field, config).params);
        }
        let before = b.triangle_disagreements;
        sweep(&mut b, &params, config, |p, a| {
            let mut failures = Vec::new();
            parseval_failures(p, a, &mut failures);
            Ok((failures, ()))
        })?;
        b.note(format!(
            "m={m}: {} instances, {} disagreements",
            params.len(),
            b.triangle_disagreements - before
        ));
    }
    Ok(b.finish())
}

#[cfg(test)]
mod tests {
    use super::super::analysis::function_for;
    use super::*;

    #[test]
    fn degenerate_nl_values() {
        assert_eq!(carlet11_degenerate_nonlinearity(3), 16);
        assert_eq!(carlet11_degenerate_nonlinearity(4), 64);
    }

    #[test]
    fn exceptional_offset_is_a_cube_root() {
        let field = FieldSpec::new(5).unwrap();
        for alpha in 2..32 {
            for lambda in 1..32 {
                let z0 = butterfly_exceptional_offset(&field, alpha, lambda).unwrap();
                let c = field.mul(lambda, alpha ^ field.square(alpha));
                assert_eq!(field.mul(field.pow(z0, 3), c), 1);
            }
        }
    }

    #[test]
    fn function_for_flips_one_output_bit() {
        let field = FieldSpec::new(2).unwrap();
        let p = FamilyParams::taniguchi(field, 1, 1, 1).unwrap();
        let clean = function_for(&p, &VerifyConfig::default()).unwrap();
        let cfg = VerifyConfig::default().with_mutation(super::super::Mutation::FlipTableBit { index: 17, bit: 9 });
        let dirty = function_for(&p, &cfg).unwrap();
        let diff: Vec<usize> = (0..16).filter(|&i| clean.words()[i] != dirty.words()[i]).collect();
        assert_eq!(diff, vec![1]);
        assert_eq!(clean.words()[1] ^ dirty.words()[1], 1 << 1);
    }
}
