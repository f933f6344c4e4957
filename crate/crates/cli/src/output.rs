//! Tabular records and their CSV / JSON encodings.
//!
//! CSV numbers use 17 significant digits (`{:.16e}`); missing values are
//! empty fields. JSON uses the shortest round-tripping representation and
//! `null` for missing values.

use std::io::Write;

use serde::{Deserialize, Serialize};
use twoterm::verify::{CriterionOutcome, Report};

use crate::config::Format;
use crate::CliError;

pub const LEVEL_COLUMNS: [&str; 10] =
    ["n", "ell_or_kappa", "component", "E", "residual", "A1", "A2", "A3sq", "D", "status"];

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LevelRecord {
    pub n: u32,
    pub ell_or_kappa: i64,
    pub component: String,
    #[serde(rename = "E")]
    pub energy: Option<f64>,
    pub residual: Option<f64>,
    #[serde(rename = "A1")]
    pub a1: Option<f64>,
    #[serde(rename = "A2")]
    pub a2: Option<f64>,
    #[serde(rename = "A3sq")]
    pub a3sq: Option<f64>,
    #[serde(rename = "D")]
    pub d: Option<f64>,
    pub status: String,
}

impl LevelRecord {
    fn fields(&self) -> Vec<String> {
        vec![
            self.n.to_string(),
            self.ell_or_kappa.to_string(),
            self.component.clone(),
            num(self.energy),
            num(self.residual),
            num(self.a1),
            num(self.a2),
            num(self.a3sq),
            num(self.d),
            self.status.clone(),
        ]
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepRecord {
    pub parameter: String,
    pub value: f64,
    pub level: LevelRecord,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WavefunctionRow {
    pub r: f64,
    pub z: f64,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub u: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub f: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub g: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WavefunctionTable {
    pub n: u32,
    pub ell_or_kappa: i64,
    pub component: String,
    #[serde(rename = "N")]
    pub norm: f64,
    pub norm_source: String,
    #[serde(rename = "A1")]
    pub a1: f64,
    #[serde(rename = "D")]
    pub d: f64,
    #[serde(rename = "E")]
    pub energy: f64,
    pub rows: Vec<WavefunctionRow>,
}

pub fn num(x: Option<f64>) -> String {
    x.map(|v| format!("{v:.16e}")).unwrap_or_default()
}

fn csv_error(e: csv::Error) -> CliError {
    CliError::Io(e.to_string())
}

fn write_csv<W: Write>(out: W, header: &[&str], rows: impl Iterator<Item = Vec<String>>) -> Result<(), CliError> {
    let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(out);
    w.write_record(header).map_err(csv_error)?;
    for row in rows {
        w.write_record(&row).map_err(csv_error)?;
    }
    w.flush().map_err(|e| CliError::Io(e.to_string()))
}

fn write_json<W: Write, T: Serialize + ?Sized>(mut out: W, value: &T) -> Result<(), CliError> {
    serde_json::to_writer_pretty(&mut out, value).map_err(|e| CliError::Io(e.to_string()))?;
    out.write_all(b"\n").map_err(|e| CliError::Io(e.to_string()))
}

pub fn write_levels<W: Write>(out: W, format: Format, records: &[LevelRecord]) -> Result<(), CliError> {
    match format {
        Format::Csv => write_csv(out, &LEVEL_COLUMNS, records.iter().map(LevelRecord::fields)),
        Format::Json => write_json(out, records),
    }
}

pub fn write_sweep<W: Write>(out: W, format: Format, records: &[SweepRecord]) -> Result<(), CliError> {
    match format {
        Format::Csv => {
            let mut header = vec!["parameter", "value"];
            header.extend(LEVEL_COLUMNS);
            let rows = records.iter().map(|r| {
                let mut row = vec![r.parameter.clone(), num(Some(r.value))];
                row.extend(r.level.fields());
                row
            });
            write_csv(out, &header, rows)
        }
        Format::Json => write_json(out, records),
    }
}

pub fn write_wavefunction<W: Write>(mut out: W, format: Format, table: &WavefunctionTable) -> Result<(), CliError> {
    match format {
        Format::Csv => {
            writeln!(
                out,
                "# N={},A1={},D={},E={}",
                num(Some(table.norm)),
                num(Some(table.a1)),
                num(Some(table.d)),
                num(Some(table.energy))
            )
            .map_err(|e| CliError::Io(e.to_string()))?;
            let dirac = table.rows.first().is_some_and(|r| r.f.is_some());
            let header: &[&str] = if dirac { &["r", "z", "f", "g"] } else { &["r", "z", "u"] };
            let rows = table.rows.iter().map(|r| {
                let mut row = vec![num(Some(r.r)), num(Some(r.z))];
                if dirac {
                    row.push(num(r.f));
                    row.push(num(r.g));
                } else {
                    row.push(num(r.u));
                }
                row
            });
            write_csv(out, header, rows)
        }
        Format::Json => write_json(out, table),
    }
}

fn outcome_fields(o: &CriterionOutcome) -> Vec<String> {
    vec![
        o.id.to_string(),
        o.name.clone(),
        o.passed.to_string(),
        num(Some(o.measured)),
        num(Some(o.threshold)),
        format!("{:.3}", o.elapsed_s),
        o.detail.clone(),
    ]
}

pub fn write_report<W: Write>(out: W, format: Format, report: &Report) -> Result<(), CliError> {
    match format {
        Format::Csv => write_csv(
            out,
            &["id", "name", "passed", "measured", "threshold", "elapsed_s", "detail"],
            report.outcomes.iter().map(outcome_fields),
        ),
        Format::Json => write_json(out, report),
    }
}
