//! Cabello efficiency `η = b_s / (q_t + b_t)` and the comparison table.

use serde::{Deserialize, Serialize};

use crate::choice::SeededChoices;
use crate::protocol::{random_message, run_with, ProtocolKind, RunConfig};
use crate::qcore::Basis;

use super::AnalysisError;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EfficiencyReport {
    pub protocol: String,
    /// Secret bits received by both parties together.
    pub b_s: usize,
    /// Qubits used, check qubits excluded.
    pub q_t: usize,
    /// Classical bits announced for decoding, check traffic excluded.
    pub b_t: usize,
    pub eta: f64,
}

impl EfficiencyReport {
    pub fn percent(&self) -> f64 {
        100.0 * self.eta
    }
}

fn message_run(protocol: ProtocolKind) -> Result<crate::protocol::AnyRunOutcome, AnalysisError> {
    let config = RunConfig::new(protocol, 0);
    let mut choices = SeededChoices::new(config.seed);
    let alice = random_message(config.message_len(), &mut choices);
    let bob = random_message(config.message_len(), &mut choices);
    let run = run_with(&config, &alice, &bob, &mut choices)?;
    if !run.is_completed() {
        return Err(AnalysisError::Aborted(format!("{protocol} reference run")));
    }
    Ok(run)
}

/// Efficiency of one message unit, counted from a simulated run.
pub fn cabello_efficiency(protocol: ProtocolKind) -> Result<EfficiencyReport, AnalysisError> {
    let run = message_run(protocol)?;
    let delivered = run.alice_decoded.as_ref().map_or(0, |b| b.len()) + run.bob_decoded.as_ref().map_or(0, |b| b.len());
    let inputs = run.efficiency_inputs;
    if delivered != inputs.b_s {
        return Err(AnalysisError::Invalid(format!(
            "{protocol} delivered {delivered} bits, accounting says {}",
            inputs.b_s
        )));
    }
    Ok(EfficiencyReport {
        protocol: protocol.name().to_string(),
        b_s: delivered,
        q_t: inputs.q_t,
        b_t: inputs.b_t,
        eta: delivered as f64 / (inputs.q_t + inputs.b_t) as f64,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RowSource {
    Simulated,
    Literature,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Table1Row {
    pub protocol: String,
    pub initial_resource: String,
    pub measurements: String,
    pub efficiency: String,
    pub source: RowSource,
}

fn resource(protocol: ProtocolKind) -> &'static str {
    match protocol {
        ProtocolKind::Bell => "Bell states",
        ProtocolKind::W => "W states",
        ProtocolKind::Ghz => "four-particle GHZ states",
    }
}

fn describe_measurements(bases: &std::collections::BTreeSet<Basis>) -> String {
    let single = bases.iter().any(|b| matches!(b, Basis::Z | Basis::X | Basis::ZZ));
    let bell = bases.contains(&Basis::Bell);
    match (single, bell) {
        (true, true) => "single-particle measurements and Bell-basis measurements",
        (true, false) => "single-particle measurements",
        (false, true) => "Bell-basis measurements",
        (false, false) => "none",
    }
    .to_string()
}

fn format_percent(eta: f64) -> String {
    let pct = 100.0 * eta;
    if (pct - pct.round()).abs() < 1e-9 {
        format!("{pct:.0}%")
    } else {
        format!("{pct:.1}%")
    }
}

/// Row for one of the simulated protocols: measurements are read off the
/// bases the run actually used on message qubits.
pub fn table1_row(protocol: ProtocolKind) -> Result<Table1Row, AnalysisError> {
    let run = message_run(protocol)?;
    let eff = cabello_efficiency(protocol)?;
    Ok(Table1Row {
        protocol: format!("{protocol} (simulated)"),
        initial_resource: resource(protocol).to_string(),
        measurements: describe_measurements(&run.message_bases),
        efficiency: format_percent(eff.eta),
        source: RowSource::Simulated,
    })
}

/// Published figures for earlier leakage-resistant dialogue protocols.
/// These are quoted, not simulated.
pub fn literature_rows() -> Vec<Table1Row> {
    const ROWS: [(&str, &str, &str, &str); 7] = [
        (
            "Opt. Commun. 282 (2009) 2460",
            "Bell states",
            "Bell-basis measurements",
            "66.7%",
        ),
        (
            "Opt. Commun. 283 (2010) 1984",
            "single particles",
            "single-particle measurements",
            "66.7%",
        ),
        (
            "Opt. Commun. 283 (2010) 5275",
            "Bell states and single particles",
            "single-particle measurements and Bell-basis measurements",
            "75%",
        ),
        (
            "Opt. Commun. 283 (2010) 2288",
            "Bell states",
            "Bell-basis measurements",
            "66.7%",
        ),
        (
            "Int. J. Quant. Inform. 11 (2013) 1350051",
            "GHZ states",
            "GHZ-basis measurements",
            "66.7%",
        ),
        (
            "Phys. Scr. 89 (2014) 015103",
            "Bell states",
            "Bell-basis measurements",
            "66.7%",
        ),
        (
            "Commun. Theor. Phys. 62 (2014) 338",
            "nearly single particles",
            "single-particle measurements",
            "nearly 100%",
        ),
    ];
    ROWS.iter()
        .map(|&(p, r, m, e)| Table1Row {
            protocol: p.to_string(),
            initial_resource: r.to_string(),
            measurements: m.to_string(),
            efficiency: e.to_string(),
            source: RowSource::Literature,
        })
        .collect()
}

pub fn table1() -> Result<Vec<Table1Row>, AnalysisError> {
    let mut rows = literature_rows();
    for p in ProtocolKind::ALL {
        rows.push(table1_row(p)?);
    }
    Ok(rows)
}

/// Plain-text rendering with aligned columns.
pub fn render_table1(rows: &[Table1Row]) -> String {
    let header = ["protocol", "initial resource", "measurements", "efficiency", "source"];
    let cells: Vec<[String; 5]> = rows
        .iter()
        .map(|r| {
            [
                r.protocol.clone(),
                r.initial_resource.clone(),
                r.measurements.clone(),
                r.efficiency.clone(),
                match r.source {
                    RowSource::Simulated => "simulated".to_string(),
                    RowSource::Literature => "literature".to_string(),
                },
            ]
        })
        .collect();
    let mut widths = header.map(str::len);
    for row in &cells {
        for (w, c) in widths.iter_mut().zip(row) {
            *w = (*w).max(c.chars().count());
        }
    }
    let line = |row: &[String]| {
        row.iter()
            .zip(&widths)
            .map(|(c, w)| format!("{c:<w$}"))
            .collect::<Vec<_>>()
            .join("  ")
            .trim_end()
            .to_string()
    };
    let mut out = line(&header.map(String::from));
    out.push('\n');
    out.push_str(&line(&widths.map(|w| "-".repeat(w))));
    out.push('\n');
    for row in &cells {
        out.push_str(&line(row));
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn percent_formatting() {
        assert_eq!(format_percent(1.0), "100%");
        assert_eq!(format_percent(0.8), "80%");
        assert_eq!(format_percent(4.0 / 6.0), "66.7%");
    }

    #[test]
    fn rendered_table_is_aligned() {
        let text = render_table1(&literature_rows());
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines.len(), 9);
        let col = lines[0].find("initial resource").unwrap();
        for l in &lines[2..] {
            assert_eq!(l.as_bytes()[col - 1], b' ');
        }
    }
}
