//! The report document and its JSON and CSV encodings.

use apnspectra::vbf::DifferentialSpectrum;
use apnspectra::verifier::Finding;
use apnspectra::{FamilyParams, FieldSpec, SpectrumReport};
use serde::{Deserialize, Serialize};

pub const SCHEMA: u32 = 1;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReportDocument {
    pub schema: u32,
    pub tool: String,
    pub version: String,
    /// Every field the payload refers to, with its reduction polynomial.
    pub fields: Vec<FieldSpec>,
    pub command: CommandEcho,
    pub payload: Payload,
    /// The only part that differs between identical invocations.
    pub timing: Timing,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CommandEcho {
    pub name: String,
    pub args: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Timing {
    pub elapsed_us: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "data", rename_all = "kebab-case")]
pub enum Payload {
    Spectrum {
        params: FamilyParams,
        report: SpectrumReport,
    },
    Apn(ApnPayload),
    Verify {
        config: VerifyEcho,
        findings: Vec<Finding>,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ApnPayload {
    pub params: FamilyParams,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub brute: Option<DifferentialSpectrum>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub criterion: Option<bool>,
    /// Absent when the two methods disagree.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub verdict: Option<bool>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub refutation: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerifyEcho {
    pub m_min: u32,
    pub m_max: u32,
    pub seed: u64,
    pub samples: usize,
    pub exhaustive_max_m: u32,
    pub max_m: u32,
}

impl ReportDocument {
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report is plain data");
        s.push('\n');
        s
    }

    pub fn to_csv(&self) -> Result<String, csv::Error> {
        let mut w = csv::Writer::from_writer(Vec::new());
        match &self.payload {
            Payload::Spectrum { params, report } => spectrum_csv(&mut w, params, report)?,
            Payload::Apn(apn) => apn_csv(&mut w, apn)?,
            Payload::Verify { findings, .. } => verify_csv(&mut w, findings)?,
        }
        let bytes = w.into_inner().map_err(|e| e.into_error())?;
        Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
    }
}

fn join<T: ToString>(items: impl IntoIterator<Item = T>) -> String {
    items.into_iter().map(|v| v.to_string()).collect::<Vec<_>>().join(" ")
}

type Csv = csv::Writer<Vec<u8>>;

/// One row per plateau level; the summary columns repeat on every row.
fn spectrum_csv(w: &mut Csv, params: &FamilyParams, r: &SpectrumReport) -> csv::Result<()> {
    w.write_record([
        "family",
        "m",
        "reduction_polynomial",
        "level",
        "components",
        "bent_count",
        "semibent_count",
        "nonlinearity",
        "max_abs_walsh",
        "classical",
        "parseval_violations",
        "walsh_values",
    ])?;
    let mut rows: Vec<(String, u64)> = r.counts.iter().map(|(l, n)| (l.to_string(), *n)).collect();
    if r.not_plateaued > 0 {
        rows.push(("none".into(), r.not_plateaued));
    }
    let values = join(&r.walsh_values);
    for (level, n) in rows {
        w.write_record([
            params.name().to_string(),
            params.field.m().to_string(),
            format!("{:#x}", params.field.reduction_polynomial()),
            level,
            n.to_string(),
            r.bent_count.to_string(),
            r.semibent_count.to_string(),
            r.nonlinearity.to_string(),
            r.max_abs_walsh.to_string(),
            r.classical.to_string(),
            r.parseval_violations.to_string(),
            values.clone(),
        ])?;
    }
    Ok(())
}

fn apn_csv(w: &mut Csv, apn: &ApnPayload) -> csv::Result<()> {
    w.write_record([
        "family",
        "m",
        "reduction_polynomial",
        "method",
        "apn",
        "uniformity",
        "histogram",
        "verdict",
    ])?;
    let field = apn.params.field;
    let verdict = apn.verdict.map(|v| v.to_string()).unwrap_or_else(|| "disagree".into());
    let head = [
        apn.params.name().to_string(),
        field.m().to_string(),
        format!("{:#x}", field.reduction_polynomial()),
    ];
    if let Some(d) = &apn.brute {
        let histogram = join(d.histogram.iter().map(|(c, n)| format!("{c}:{n}")));
        let mut row = head.to_vec();
        row.extend([
            "brute".into(),
            d.is_apn().to_string(),
            d.uniformity.to_string(),
            histogram,
            verdict.clone(),
        ]);
        w.write_record(row)?;
    }
    if let Some(c) = apn.criterion {
        let mut row = head.to_vec();
        row.extend(["criterion".into(), c.to_string(), String::new(), String::new(), verdict]);
        w.write_record(row)?;
    }
    Ok(())
}

/// One `finding` row per claim followed by its counterexample, boundary and
/// note rows.
fn verify_csv(w: &mut Csv, findings: &[Finding]) -> csv::Result<()> {
    w.write_record([
        "record",
        "claim",
        "status",
        "seed",
        "instances",
        "components",
        "refutation_count",
        "triangle_disagreements",
        "boundary_count",
        "m",
        "component",
        "params",
        "detail",
    ])?;
    for f in findings {
        let status = serde_json::to_value(f.status).expect("status is a string");
        let status = status.as_str().unwrap_or_default().to_string();
        let claim = f.claim.to_string();
        w.write_record([
            "finding".to_string(),
            claim.clone(),
            status,
            f.seed.to_string(),
            f.instances.to_string(),
            f.components.to_string(),
            f.refutation_count.to_string(),
            f.triangle_disagreements.to_string(),
            f.boundary_count.to_string(),
            String::new(),
            String::new(),
            String::new(),
            f.grid.clone(),
        ])?;
        let cases = f
            .counterexamples
            .iter()
            .map(|c| ("counterexample", c))
            .chain(f.boundary_cases.iter().map(|c| ("boundary", c)));
        for (record, c) in cases {
            let params = c
                .params
                .as_ref()
                .map(|p| serde_json::to_string(p).expect("params are plain data"))
                .unwrap_or_default();
            let component = c
                .component
                .map(|s| format!("{:#x} {:#x}", s.lambda, s.mu))
                .unwrap_or_default();
            let mut row = vec![record.to_string(), claim.clone()];
            row.extend(std::iter::repeat_n(String::new(), 7));
            row.extend([c.m.to_string(), component, params, c.reason.clone()]);
            w.write_record(row)?;
        }
        for note in &f.notes {
            let mut row = vec!["note".to_string(), claim.clone()];
            row.extend(std::iter::repeat_n(String::new(), 10));
            row.push(note.clone());
            w.write_record(row)?;
        }
    }
    Ok(())
}
