//! Input-output table ingestion, balance validation and network conversion.
//!
//! CSV layout (n sectors, k auxiliary columns):
//!
//! ```text
//! sector,<code_1>,...,<code_n>,final_use,total_output[,aux:<name>...]
//! <code_i>,w_i1,...,w_in,f_i,y_i[,aux values]      (n rows)
//! value_added,x_1,...,x_n,,[,...]
//! total_input,y_1,...,y_n,,[,...]
//! ```

use std::collections::BTreeMap;
use std::fs;
use std::io::Write;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::network::IONetwork;
use crate::registry::SectorRegistry;
use crate::report::fmt_num;

pub const DEFAULT_TOL_BALANCE: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TableFormat {
    Csv,
    Json,
}

impl TableFormat {
    pub fn from_path(path: &Path) -> Option<Self> {
        match path.extension()?.to_str()?.to_ascii_lowercase().as_str() {
            "csv" => Some(TableFormat::Csv),
            "json" => Some(TableFormat::Json),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, Copy, Default)]
pub struct ParseOptions {
    /// Reject sector codes outside the STAN registry.
    pub strict_registry: bool,
}

/// One country-year input-output table. Flows are in million currency units.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IOTable {
    pub sectors: Vec<String>,
    /// Intermediate flows, row-major: `w[i][j]` is sold by sector i to sector j.
    #[serde(rename = "W")]
    pub w: Vec<Vec<f64>>,
    #[serde(rename = "F")]
    pub final_use: Vec<f64>,
    #[serde(rename = "X")]
    pub value_added: Vec<f64>,
    #[serde(rename = "Y")]
    pub total_output: Vec<f64>,
    #[serde(default)]
    pub aux: BTreeMap<String, Vec<f64>>,
}

impl IOTable {
    pub fn n(&self) -> usize {
        self.sectors.len()
    }

    /// Builds a table that balances by construction: `Y = rowsum(W) + F`,
    /// `X = Y - colsum(W)`.
    pub fn balanced(sectors: Vec<String>, w: Vec<Vec<f64>>, final_use: Vec<f64>) -> Result<Self> {
        let n = sectors.len();
        let total_output: Vec<f64> = (0..n)
            .map(|i| w[i].iter().sum::<f64>() + final_use[i])
            .collect();
        let value_added = (0..n)
            .map(|j| total_output[j] - (0..n).map(|i| w[i][j]).sum::<f64>())
            .collect();
        let t = IOTable {
            sectors,
            w,
            final_use,
            value_added,
            total_output,
            aux: BTreeMap::new(),
        };
        t.check_shape()?;
        Ok(t)
    }

    fn check_shape(&self) -> Result<()> {
        let n = self.n();
        if n == 0 {
            return Err(Error::EmptyTable);
        }
        if self.w.len() != n || self.w.iter().any(|r| r.len() != n) {
            return Err(Error::Format(format!("W must be {n}x{n}")));
        }
        for (name, v) in [
            ("F", &self.final_use),
            ("X", &self.value_added),
            ("Y", &self.total_output),
        ] {
            if v.len() != n {
                return Err(Error::Format(format!("{name} has {} entries, expected {n}", v.len())));
            }
        }
        for (name, v) in &self.aux {
            if v.len() != n {
                return Err(Error::Format(format!(
                    "aux column {name:?} has {} entries, expected {n}",
                    v.len()
                )));
            }
        }
        for (i, row) in self.w.iter().enumerate() {
            for (j, &x) in row.iter().enumerate() {
                if !x.is_finite() {
                    return Err(Error::parse(i + 1, j + 1, "non-finite W entry"));
                }
                if x < 0.0 {
                    return Err(Error::parse(i + 1, j + 1, format!("negative W entry {x}")));
                }
            }
        }
        let all = self
            .final_use
            .iter()
            .chain(&self.value_added)
            .chain(self.aux.values().flatten());
        if all.clone().any(|x| !x.is_finite()) {
            return Err(Error::Format("non-finite value in F, X or aux".into()));
        }
        if let Some(i) = self.total_output.iter().position(|y| !(y.is_finite() && *y >= 0.0)) {
            return Err(Error::Format(format!(
                "total output of sector {} must be finite and non-negative",
                self.sectors[i]
            )));
        }
        Ok(())
    }

    fn check_registry(&self, opts: ParseOptions) -> Result<()> {
        let mut seen = std::collections::HashSet::new();
        for code in &self.sectors {
            if !seen.insert(code) {
                return Err(Error::Format(format!("duplicate sector code {code:?}")));
            }
            if opts.strict_registry && !SectorRegistry::stan().contains(code) {
                return Err(Error::Registry { code: code.clone() });
            }
        }
        Ok(())
    }

    pub fn from_json_str(s: &str, opts: ParseOptions) -> Result<Self> {
        let t: IOTable = serde_json::from_str(s)?;
        t.check_shape()?;
        t.check_registry(opts)?;
        Ok(t)
    }

    pub fn from_csv_str(s: &str, opts: ParseOptions) -> Result<Self> {
        let t = parse_csv(s)?;
        t.check_registry(opts)?;
        Ok(t)
    }

    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let n = self.n();
        let k = self.aux.len();
        let mut w = csv::Writer::from_writer(out);
        let mut header = vec!["sector".to_string()];
        header.extend(self.sectors.iter().cloned());
        header.push("final_use".into());
        header.push("total_output".into());
        header.extend(self.aux.keys().map(|name| format!("aux:{name}")));
        w.write_record(&header)?;
        for i in 0..n {
            let mut rec = vec![self.sectors[i].clone()];
            rec.extend(self.w[i].iter().map(|&x| fmt_num(x)));
            rec.push(fmt_num(self.final_use[i]));
            rec.push(fmt_num(self.total_output[i]));
            rec.extend(self.aux.values().map(|col| fmt_num(col[i])));
            w.write_record(&rec)?;
        }
        for (label, values) in [("value_added", &self.value_added), ("total_input", &self.total_output)] {
            let mut rec = vec![label.to_string()];
            rec.extend(values.iter().map(|&x| fmt_num(x)));
            rec.extend(std::iter::repeat_n(String::new(), 2 + k));
            w.write_record(&rec)?;
        }
        w.flush().map_err(|e| Error::io("writing table", e))?;
        Ok(())
    }

    pub fn to_csv_string(&self) -> Result<String> {
        let mut buf = Vec::new();
        self.write_csv(&mut buf)?;
        Ok(String::from_utf8(buf).expect("csv output is utf-8"))
    }

    pub fn to_json_string(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }
}

/// Reads a table from disk. No balance check is performed.
pub fn parse_iot(path: &Path, format: TableFormat, opts: ParseOptions) -> Result<IOTable> {
    if !path.exists() {
        return Err(Error::NoSuchInput(path.to_path_buf()));
    }
    let text = fs::read_to_string(path).map_err(|e| Error::io(format!("reading {}", path.display()), e))?;
    match format {
        TableFormat::Csv => IOTable::from_csv_str(&text, opts),
        TableFormat::Json => IOTable::from_json_str(&text, opts),
    }
}

fn parse_number(cell: &str, row: usize, column: usize) -> Result<f64> {
    let v: f64 = cell
        .trim()
        .parse()
        .map_err(|_| Error::parse(row, column, format!("non-numeric cell {cell:?}")))?;
    if !v.is_finite() {
        return Err(Error::parse(row, column, format!("non-finite cell {cell:?}")));
    }
    Ok(v)
}

fn parse_csv(text: &str) -> Result<IOTable> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .from_reader(text.as_bytes());
    let records = reader.records().collect::<std::result::Result<Vec<_>, _>>()?;
    let header = records
        .first()
        .ok_or_else(|| Error::parse(1, 1, "missing header row"))?;
    let header: Vec<&str> = header.iter().map(str::trim).collect();
    if header.first() != Some(&"sector") {
        return Err(Error::parse(1, 1, "header must start with \"sector\""));
    }
    let fu = header
        .iter()
        .position(|&h| h == "final_use")
        .ok_or_else(|| Error::parse(1, header.len(), "header lacks final_use column"))?;
    let n = fu - 1;
    if header.get(fu + 1) != Some(&"total_output") {
        return Err(Error::parse(1, fu + 2, "expected total_output after final_use"));
    }
    let mut aux_names = Vec::new();
    for (c, h) in header.iter().enumerate().skip(fu + 2) {
        match h.strip_prefix("aux:") {
            Some(name) if !name.is_empty() => aux_names.push(name.to_string()),
            _ => return Err(Error::parse(1, c + 1, format!("unexpected header cell {h:?}"))),
        }
    }
    if n == 0 {
        return Err(Error::EmptyTable);
    }
    let sectors: Vec<String> = header[1..fu].iter().map(|s| s.to_string()).collect();
    let width = header.len();
    if records.len() != n + 3 {
        return Err(Error::Format(format!(
            "expected {} rows (header, {n} sectors, value_added, total_input), found {}",
            n + 3,
            records.len()
        )));
    }

    let mut w = Vec::with_capacity(n);
    let mut final_use = Vec::with_capacity(n);
    let mut total_output = Vec::with_capacity(n);
    let mut aux: Vec<Vec<f64>> = vec![Vec::with_capacity(n); aux_names.len()];
    for (i, rec) in records[1..=n].iter().enumerate() {
        let row = i + 2;
        if rec.len() != width {
            return Err(Error::parse(row, rec.len().min(width) + 1, format!(
                "expected {width} cells, found {}",
                rec.len()
            )));
        }
        if rec[0].trim() != sectors[i] {
            return Err(Error::parse(row, 1, format!(
                "row code {:?} does not match header code {:?}",
                rec[0].trim(),
                sectors[i]
            )));
        }
        let mut wrow = Vec::with_capacity(n);
        for j in 0..n {
            let v = parse_number(&rec[j + 1], row, j + 2)?;
            if v < 0.0 {
                return Err(Error::parse(row, j + 2, format!("negative W entry {v}")));
            }
            wrow.push(v);
        }
        w.push(wrow);
        final_use.push(parse_number(&rec[fu], row, fu + 1)?);
        let y = parse_number(&rec[fu + 1], row, fu + 2)?;
        if y < 0.0 {
            return Err(Error::parse(row, fu + 2, format!("negative total output {y}")));
        }
        total_output.push(y);
        for (a, col) in aux.iter_mut().enumerate() {
            col.push(parse_number(&rec[fu + 2 + a], row, fu + 3 + a)?);
        }
    }

    let trailer = |idx: usize, label: &str| -> Result<Vec<f64>> {
        let rec = &records[idx];
        let row = idx + 1;
        if rec.get(0).map(str::trim) != Some(label) {
            return Err(Error::parse(row, 1, format!("expected {label} row")));
        }
        if rec.len() < n + 1 || rec.len() > width {
            return Err(Error::parse(row, rec.len().min(width) + 1, format!(
                "expected {width} cells, found {}",
                rec.len()
            )));
        }
        if let Some(c) = (n + 1..rec.len()).find(|&c| !rec[c].trim().is_empty()) {
            return Err(Error::parse(row, c + 1, "cell must be empty"));
        }
        (0..n).map(|j| parse_number(&rec[j + 1], row, j + 2)).collect()
    };
    let value_added = trailer(n + 1, "value_added")?;
    let total_input = trailer(n + 2, "total_input")?;
    for j in 0..n {
        let (a, b) = (total_input[j], total_output[j]);
        if (a - b).abs() > 1e-9 * a.abs().max(b.abs()).max(1.0) {
            return Err(Error::parse(n + 3, j + 2, format!(
                "total_input {a} disagrees with total_output {b} of sector {}",
                sectors[j]
            )));
        }
    }

    let t = IOTable {
        sectors,
        w,
        final_use,
        value_added,
        total_output,
        aux: aux_names.into_iter().zip(aux).collect(),
    };
    t.check_shape()?;
    Ok(t)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Axis {
    Row,
    Column,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BalanceFailure {
    pub code: String,
    pub axis: Axis,
    pub residual: f64,
}

/// Residuals are relative: `|Y_i - (sum + F_i)| / max(1, |Y_i|)`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BalanceReport {
    pub tol_balance: f64,
    pub max_row_residual: f64,
    pub max_col_residual: f64,
    pub failing_sectors: Vec<BalanceFailure>,
    pub passed: bool,
}

impl BalanceReport {
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["code", "axis", "residual"])?;
        for f in &self.failing_sectors {
            let axis = match f.axis {
                Axis::Row => "row",
                Axis::Column => "column",
            };
            w.write_record([f.code.as_str(), axis, &fmt_num(f.residual)])?;
        }
        w.flush().map_err(|e| Error::io("writing balance report", e))?;
        Ok(())
    }
}

/// Checks the row identity `Y = rowsum(W) + F` and the column identity
/// `Y = colsum(W) + X` for every sector. Violations are reported, never raised.
pub fn validate_balance(t: &IOTable, tol_balance: f64) -> BalanceReport {
    let n = t.n();
    let rel = |y: f64, lhs: f64| (y - lhs).abs() / y.abs().max(1.0);
    let mut failing = Vec::new();
    let mut max_row: f64 = 0.0;
    let mut max_col: f64 = 0.0;
    for i in 0..n {
        let r = rel(t.total_output[i], t.w[i].iter().sum::<f64>() + t.final_use[i]);
        max_row = max_row.max(r);
        if !(r <= tol_balance) {
            failing.push(BalanceFailure {
                code: t.sectors[i].clone(),
                axis: Axis::Row,
                residual: r,
            });
        }
    }
    for j in 0..n {
        let col: f64 = (0..n).map(|i| t.w[i][j]).sum();
        let r = rel(t.total_output[j], col + t.value_added[j]);
        max_col = max_col.max(r);
        if !(r <= tol_balance) {
            failing.push(BalanceFailure {
                code: t.sectors[j].clone(),
                axis: Axis::Column,
                residual: r,
            });
        }
    }
    BalanceReport {
        tol_balance,
        max_row_residual: max_row,
        max_col_residual: max_col,
        passed: failing.is_empty(),
        failing_sectors: failing,
    }
}

/// Converts a table into its input-output network: one node per sector, an
/// edge i→j for every positive flow `W_ij` (self-loops kept). Value added,
/// final use, total output and every aux column become node attributes.
pub fn to_network(t: &IOTable) -> Result<IONetwork> {
    let n = t.n();
    let edges: Vec<(usize, usize, f64)> = (0..n)
        .flat_map(|i| (0..n).map(move |j| (i, j)))
        .filter(|&(i, j)| t.w[i][j] > 0.0)
        .map(|(i, j)| (i, j, t.w[i][j]))
        .collect();
    if edges.is_empty() {
        return Err(Error::EmptyNetwork);
    }
    let mut g = IONetwork::new(t.sectors.clone(), edges)?
        .with_attr("value_added", t.value_added.clone())?
        .with_attr("final_use", t.final_use.clone())?
        .with_attr("total_output", t.total_output.clone())?;
    for (name, values) in &t.aux {
        g = g.with_attr(name.clone(), values.clone())?;
    }
    Ok(g)
}
