//! One pass over all components of an instance: Walsh summary plus the
//! three-way comparison of linear-space dimensions.

use super::{Counterexample, Mutation, VerifyConfig};
use crate::error::Result;
use crate::families::{build_function_with, FamilyParams};
use crate::lincurves::{derive_pair, DerivedPair, LinearizedBivariate};
use crate::vbf::{linear_space_dimension, map_components, ComponentSummary, SpectrumReport, VectorialFunction};

pub(crate) struct Analysis {
    pub function: VectorialFunction,
    pub report: SpectrumReport,
    /// Plateau level of component `c`, at position `c - 1`.
    pub levels: Vec<Option<u32>>,
    pub disagreements: Vec<Counterexample>,
}

impl Analysis {
    pub(crate) fn components(&self) -> u64 {
        self.levels.len() as u64
    }
}

pub(crate) fn function_for(params: &FamilyParams, config: &VerifyConfig) -> Result<VectorialFunction> {
    let f = build_function_with(params, config.limits)?;
    Ok(match config.mutation {
        Some(Mutation::FlipTableBit { index, bit }) => {
            let index = index % f.words().len();
            f.with_flipped_bit(index, bit % f.num_vars())
        }
        _ => f,
    })
}

pub(crate) fn pair_for(params: &FamilyParams, config: &VerifyConfig, lambda: u32, mu: u32) -> Result<DerivedPair> {
    let mut pair = derive_pair(params, lambda, mu)?;
    if let Some(Mutation::PerturbCoefficient { delta }) = config.mutation {
        let field = params.field;
        let bump = LinearizedBivariate::new(field, pair.a.k(), vec![(delta & field.mask(), 0)])?;
        pair.a = pair.a.add_scaled(&bump, 1)?;
    }
    Ok(pair)
}

pub(crate) fn analyze(params: &FamilyParams, config: &VerifyConfig) -> Result<Analysis> {
    let function = function_for(params, config)?;
    let per_component = map_components(&function, |sel, table, spectrum| {
        let summary = ComponentSummary::of(spectrum);
        let kernel = pair_for(params, config, sel.lambda, sel.mu).and_then(|p| p.kernel_dimension());
        let brute = linear_space_dimension(table);
        let disagreement = match kernel {
            Ok(k) if summary.level == Some(k) && brute == k => None,
            Ok(k) => Some(format!(
                "kernel dimension {k}, Walsh plateau level {:?}, brute-force linear space {brute}",
                summary.level
            )),
            Err(e) => Some(format!("no (A, B) system: {e}")),
        };
        (sel, summary, disagreement)
    });
    let mut levels = Vec::with_capacity(per_component.len());
    let mut summaries = Vec::with_capacity(per_component.len());
    let mut disagreements = Vec::new();
    for (sel, summary, disagreement) in per_component {
        levels.push(summary.level);
        summaries.push(summary);
        if let Some(reason) = disagreement {
            disagreements.push(Counterexample {
                component: Some(sel),
                ..Counterexample::instance(params, reason)
            });
        }
    }
    let report = SpectrumReport::from_components(function.num_vars(), summaries);
    Ok(Analysis {
        function,
        report,
        levels,
        disagreements,
    })
}
