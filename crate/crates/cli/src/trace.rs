//! CSV traces: a `k` column followed by one `x_<agent>_<industry>` column per
//! lifted coordinate, values in `{:.16e}` (17 significant digits).

use std::io::{Read, Write};

use mwio_core::SimulationTrace;

use crate::CliError;

pub fn header(agents: usize, industries: usize) -> Vec<String> {
    let mut h = vec!["k".to_string()];
    for i in 1..=agents {
        for p in 1..=industries {
            h.push(format!("x_{i}_{p}"));
        }
    }
    h
}

pub fn write_trace<W: Write>(
    out: W,
    trace: &SimulationTrace,
    agents: usize,
    industries: usize,
) -> Result<(), CliError> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(header(agents, industries))?;
    for (k, x) in trace.steps.iter().zip(&trace.states) {
        let mut row = vec![k.to_string()];
        row.extend(x.iter().map(|v| format!("{v:.16e}")));
        w.write_record(&row)?;
    }
    w.flush()?;
    Ok(())
}

/// A parsed trace file.
#[derive(Debug, Clone, PartialEq)]
pub struct TraceTable {
    /// `(agent, industry)` of each value column, 1-based.
    pub columns: Vec<(usize, usize)>,
    pub steps: Vec<u64>,
    pub rows: Vec<Vec<f64>>,
}

fn column_name(name: &str) -> Option<(usize, usize)> {
    let rest = name.trim().strip_prefix("x_")?;
    let (i, p) = rest.split_once('_')?;
    Some((i.parse().ok()?, p.parse().ok()?))
}

pub fn read_trace<R: Read>(input: R) -> Result<TraceTable, CliError> {
    let mut r = csv::Reader::from_reader(input);
    let head = r.headers()?.clone();
    if head.get(0).map(str::trim) != Some("k") {
        return Err(CliError::Trace("first column must be \"k\"".into()));
    }
    let columns = head
        .iter()
        .skip(1)
        .map(|name| {
            column_name(name).ok_or_else(|| CliError::Trace(format!("bad column name \"{name}\"")))
        })
        .collect::<Result<Vec<_>, _>>()?;
    let mut steps: Vec<u64> = Vec::new();
    let mut rows = Vec::new();
    for (line, record) in r.records().enumerate() {
        let record = record?;
        let bad = |what: &str| CliError::Trace(format!("data row {}: {what}", line + 1));
        let k: u64 = record[0]
            .trim()
            .parse()
            .map_err(|_| bad("step is not an integer"))?;
        if steps.last().is_some_and(|&prev| k <= prev) {
            return Err(bad("steps must be strictly increasing"));
        }
        let values = record
            .iter()
            .skip(1)
            .map(|v| {
                v.trim()
                    .parse::<f64>()
                    .map_err(|_| bad("value is not a number"))
            })
            .collect::<Result<Vec<_>, _>>()?;
        steps.push(k);
        rows.push(values);
    }
    Ok(TraceTable {
        columns,
        steps,
        rows,
    })
}

/// Per-industry series of one agent (1-based), as CSV with columns
/// `k, x_<agent>_1, …`.
pub fn plot_data<W: Write>(table: &TraceTable, agent: usize, out: W) -> Result<(), CliError> {
    let picked: Vec<usize> = (0..table.columns.len())
        .filter(|&c| table.columns[c].0 == agent)
        .collect();
    if picked.is_empty() {
        return Err(CliError::Trace(format!(
            "agent {agent} does not appear in the trace"
        )));
    }
    let mut w = csv::Writer::from_writer(out);
    let mut head = vec!["k".to_string()];
    head.extend(
        picked
            .iter()
            .map(|&c| format!("x_{}_{}", agent, table.columns[c].1)),
    );
    w.write_record(&head)?;
    for (k, row) in table.steps.iter().zip(&table.rows) {
        let mut record = vec![k.to_string()];
        record.extend(picked.iter().map(|&c| format!("{:.16e}", row[c])));
        w.write_record(&record)?;
    }
    w.flush()?;
    Ok(())
}
