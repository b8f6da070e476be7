use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::analysis::report::ConvergenceReport;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExportFormat {
    Csv,
    Json,
}

impl std::str::FromStr for ExportFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "csv" => Ok(ExportFormat::Csv),
            "json" => Ok(ExportFormat::Json),
            other => Err(Error::domain(format!("unknown export format {other:?}"))),
        }
    }
}

/// Serialized row; every number is already rendered.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RowRecord {
    pub n: usize,
    pub proper: bool,
    pub verdict: String,
    pub distance: Option<String>,
    pub coeffs: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReportRecord {
    pub system_id: String,
    pub element: String,
    pub metric_id: String,
    pub rows: Vec<RowRecord>,
}

impl From<&ConvergenceReport> for ReportRecord {
    fn from(r: &ConvergenceReport) -> Self {
        let rows = r
            .rows
            .iter()
            .map(|row| RowRecord {
                n: row.n,
                proper: row.verdict.is_proper(),
                verdict: row.verdict.to_string(),
                distance: row.distance.as_ref().map(|d| d.to_string()),
                coeffs: row.coeffs.iter().map(|c| c.to_string()).collect::<Vec<_>>().join(" "),
            })
            .collect();
        ReportRecord { system_id: r.system_id.clone(), element: r.element.clone(), metric_id: r.metric_id.clone(), rows }
    }
}

impl ReportRecord {
    pub fn to_csv(&self) -> String {
        let mut out = String::from("n,proper,distance,coeffs\n");
        for row in &self.rows {
            let dist = row.distance.as_deref().unwrap_or("");
            let dist = if dist.contains(',') { format!("\"{dist}\"") } else { dist.to_string() };
            out.push_str(&format!("{},{},{},\"{}\"\n", row.n, row.proper, dist, row.coeffs.replace('"', "\"\"")));
        }
        out
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report records always serialize");
        s.push('\n');
        s
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::domain(format!("invalid report JSON: {e}")))
    }

    pub fn render(&self, format: ExportFormat) -> String {
        match format {
            ExportFormat::Csv => self.to_csv(),
            ExportFormat::Json => self.to_json(),
        }
    }
}

pub fn export(report: &ConvergenceReport, format: ExportFormat, path: &Path) -> Result<()> {
    fs::write(path, ReportRecord::from(report).render(format))?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analysis::report::{convergence_report, Metric};
    use crate::element::Element;
    use crate::rational::q;
    use crate::real::BaseSystem;

    #[test]
    fn empty_report_is_header_only() {
        let rec = ReportRecord { system_id: "x".into(), element: "0".into(), metric_id: "abs".into(), rows: vec![] };
        assert_eq!(rec.to_csv(), "n,proper,distance,coeffs\n");
    }

    #[test]
    fn csv_and_json_shapes() {
        let rep = convergence_report(&BaseSystem::decimal(), &Element::Rational(q(1, 8)), 3, &Metric::Absolute).unwrap();
        let rec = ReportRecord::from(&rep);
        assert_eq!(
            rec.to_csv(),
            "n,proper,distance,coeffs\n0,true,1/8,\"\"\n1,true,1/40,\"1\"\n2,true,1/200,\"1 2\"\n3,true,0,\"1 2 5\"\n"
        );
        let json = rec.to_json();
        assert_eq!(ReportRecord::from_json(&json).unwrap().to_json(), json);
        assert!(json.contains("\"system_id\": \"decimal\""));
    }
}
