use std::path::PathBuf;

use apnspectra::verifier::Claim;
use apnspectra::{FamilyParams, FieldSpec};
use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::Failure;

#[derive(Debug, Parser)]
#[command(
    name = "apnspectra",
    version,
    about = "Spectra and APN checks for quadratic maps on GF(2^m)^2"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Walsh spectrum summary over all nonzero components.
    Spectrum {
        #[command(flatten)]
        family: FamilyArgs,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// APN verdict by brute force, by the general-form criterion, or both.
    Apn {
        #[command(flatten)]
        family: FamilyArgs,
        #[arg(long, value_enum, default_value_t = Method::Both)]
        method: Method,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Sweep a parameter grid and check one claim on every instance.
    Verify {
        #[arg(long, value_parser = parse_claim)]
        claim: Claim,
        #[arg(long)]
        m_min: u32,
        #[arg(long)]
        m_max: u32,
        #[arg(long)]
        seed: Option<u64>,
        /// Tuples drawn per (m, family) above the exhaustive range.
        #[arg(long)]
        samples: Option<usize>,
        #[command(flatten)]
        output: OutputArgs,
    },
}

fn parse_claim(s: &str) -> Result<Claim, String> {
    s.parse().map_err(|_| {
        let names: Vec<&str> = Claim::ALL.iter().map(Claim::as_str).collect();
        format!("unknown claim {s:?}; expected one of {}", names.join(", "))
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FamilyName {
    Taniguchi,
    Carlet11,
    #[value(name = "zhou-pott", alias = "zhoupott")]
    ZhouPott,
    Butterfly,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Method {
    Brute,
    Criterion,
    Both,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Args)]
pub struct OutputArgs {
    /// Write the report here instead of standard output.
    #[arg(long, value_name = "PATH")]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
}

/// Family selection; elements are hex literals in the polynomial basis.
#[derive(Debug, Args)]
pub struct FamilyArgs {
    #[arg(long, value_enum)]
    pub family: FamilyName,
    #[arg(long)]
    pub m: u32,
    #[arg(long)]
    pub k: Option<u32>,
    #[arg(long)]
    pub i: Option<u32>,
    #[arg(long)]
    pub j: Option<u32>,
    #[arg(long, value_name = "HEX")]
    pub alpha: Option<String>,
    #[arg(long, value_name = "HEX")]
    pub beta: Option<String>,
    #[arg(long = "S", value_name = "HEX")]
    pub s: Option<String>,
    #[arg(long = "T", value_name = "HEX")]
    pub t: Option<String>,
    #[arg(long = "U", value_name = "HEX")]
    pub u: Option<String>,
    #[arg(long = "V", value_name = "HEX")]
    pub v: Option<String>,
}

impl FamilyArgs {
    /// Checks that exactly the flags the family needs are present and
    /// builds the parameters.
    pub fn params(&self, field: FieldSpec) -> Result<FamilyParams, Failure> {
        let given: [(&str, bool); 10] = [
            ("k", self.k.is_some()),
            ("i", self.i.is_some()),
            ("j", self.j.is_some()),
            ("alpha", self.alpha.is_some()),
            ("beta", self.beta.is_some()),
            ("S", self.s.is_some()),
            ("T", self.t.is_some()),
            ("U", self.u.is_some()),
            ("V", self.v.is_some()),
            ("m", true),
        ];
        let needed: &[&str] = match self.family {
            FamilyName::Taniguchi => &["m", "k", "alpha", "beta"],
            FamilyName::Carlet11 => &["m", "i", "j", "S", "T", "U", "V"],
            FamilyName::ZhouPott => &["m", "k", "j", "alpha"],
            FamilyName::Butterfly => &["m", "alpha", "beta"],
        };
        let missing: Vec<String> = needed
            .iter()
            .filter(|n| !given.iter().any(|(g, present)| g == *n && *present))
            .map(|n| format!("--{n}"))
            .collect();
        if !missing.is_empty() {
            return Err(Failure::Usage(format!(
                "{:?} needs {}",
                self.family,
                missing.join(", ")
            )));
        }
        let extra: Vec<String> = given
            .iter()
            .filter(|(g, present)| *present && !needed.contains(g))
            .map(|(g, _)| format!("--{g}"))
            .collect();
        if !extra.is_empty() {
            return Err(Failure::Usage(format!(
                "{:?} does not take {}",
                self.family,
                extra.join(", ")
            )));
        }
        let el = |name: &str, v: &Option<String>| -> Result<u32, Failure> {
            let literal = v.as_deref().expect("presence checked above");
            field
                .parse_element(literal)
                .map_err(|e| Failure::Usage(format!("--{name}: {e}")))
        };
        let n = |v: Option<u32>| v.expect("presence checked above");
        let built = match self.family {
            FamilyName::Taniguchi => {
                FamilyParams::taniguchi(field, n(self.k), el("alpha", &self.alpha)?, el("beta", &self.beta)?)
            }
            FamilyName::Carlet11 => FamilyParams::carlet11(
                field,
                n(self.i),
                n(self.j),
                el("S", &self.s)?,
                el("T", &self.t)?,
                el("U", &self.u)?,
                el("V", &self.v)?,
            ),
            FamilyName::ZhouPott => FamilyParams::zhou_pott(field, n(self.k), n(self.j), el("alpha", &self.alpha)?),
            FamilyName::Butterfly => FamilyParams::butterfly(field, el("alpha", &self.alpha)?, el("beta", &self.beta)?),
        };
        built.map_err(|e| Failure::Usage(e.to_string()))
    }
}
