//! JSON, CSV and LaTeX renderings of a character table.

use std::io::Write;

use anyhow::{bail, Context, Result};
use serde::{Deserialize, Serialize};
use sylow_d4_core::cyclotomic::CycInt;
use sylow_d4_core::table::CharTable;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum ValueMode {
    Exact,
    Float,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Latex,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RowDoc {
    pub label: String,
    pub family: String,
    pub degree: u128,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ColDoc {
    pub label: String,
    pub family: String,
    pub size: u128,
    pub representative: String,
}

/// One cell: coefficients on `1, ζ, .., ζ^{p-2}` or a complex number,
/// plus the symbolic form.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Cell {
    Exact { coeffs: Vec<i64>, expr: String },
    Float { value: String, expr: String },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TableDoc {
    pub p: u32,
    pub a: u32,
    pub q: u64,
    pub modulus: Vec<u32>,
    pub values: ValueMode,
    pub characters: Vec<RowDoc>,
    pub classes: Vec<ColDoc>,
    pub table: Vec<Vec<Cell>>,
}

/// `a+bi` with at most seven decimals and trailing zeros dropped, e.g.
/// `0+1.7320508i`.
pub fn format_complex(re: f64, im: f64) -> String {
    let r = trim(re);
    let i = trim(im);
    if i.starts_with('-') {
        format!("{r}{i}i")
    } else {
        format!("{r}+{i}i")
    }
}

fn trim(x: f64) -> String {
    let s = format!("{x:.7}");
    let s = s.trim_end_matches('0').trim_end_matches('.');
    if s == "-0" {
        "0".to_string()
    } else {
        s.to_string()
    }
}

pub fn float_value(x: &CycInt) -> String {
    let (re, im) = x.to_complex();
    format_complex(re, im)
}

impl TableDoc {
    pub fn from_table(t: &CharTable, mode: ValueMode) -> Result<TableDoc> {
        let f = &t.field;
        let q = t.q();
        let characters = t
            .chars
            .labels
            .iter()
            .map(|l| RowDoc {
                label: t.chars.label(l),
                family: t.chars.family_of(l).display(),
                degree: t.chars.degree(q, l),
            })
            .collect();
        let classes = t
            .classes
            .reps
            .iter()
            .map(|r| ColDoc {
                label: t.classes.label(r),
                family: t.classes.family_of(r).label(),
                size: t.classes.class_size(q, r),
                representative: sylow_d4_core::group::format_element(&r.rep),
            })
            .collect();
        let mut table = Vec::with_capacity(t.rows());
        for i in 0..t.rows() {
            let mut row = Vec::with_capacity(t.cols());
            for j in 0..t.cols() {
                let v = t.value_expr(i, j)?;
                let x = t.value(i, j)?;
                let expr = v.describe();
                row.push(match mode {
                    ValueMode::Exact => Cell::Exact {
                        coeffs: x
                            .coeffs()
                            .iter()
                            .map(|&c| i64::try_from(c).context("coefficient exceeds i64"))
                            .collect::<Result<_>>()?,
                        expr,
                    },
                    ValueMode::Float => Cell::Float { value: float_value(&x), expr },
                });
            }
            table.push(row);
        }
        Ok(TableDoc {
            p: f.p(),
            a: f.a(),
            q: q as u64,
            modulus: f.poly().to_vec(),
            values: mode,
            characters,
            classes,
            table,
        })
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn from_json(s: &str) -> Result<TableDoc> {
        Ok(serde_json::from_str(s)?)
    }

    /// The exact value of a cell, when exported exactly.
    pub fn exact(&self, i: usize, j: usize) -> Result<CycInt> {
        match &self.table[i][j] {
            Cell::Exact { coeffs, .. } => {
                if coeffs.len() + 1 != self.p as usize {
                    bail!("cell ({i}, {j}) has {} coefficients for p = {}", coeffs.len(), self.p);
                }
                Ok(CycInt::from_coeffs(self.p, coeffs.iter().map(|&c| c as i128).collect()))
            }
            Cell::Float { .. } => bail!("table was exported with float values"),
        }
    }

    fn cell_text(&self, i: usize, j: usize) -> Result<String> {
        Ok(match &self.table[i][j] {
            Cell::Exact { .. } => self.exact(i, j)?.to_string(),
            Cell::Float { value, .. } => value.clone(),
        })
    }

    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        let mut header = vec!["character".to_string(), "degree".to_string()];
        header.extend(self.classes.iter().map(|c| c.label.clone()));
        w.write_record(&header)?;
        for (i, r) in self.characters.iter().enumerate() {
            let mut rec = vec![r.label.clone(), r.degree.to_string()];
            for j in 0..self.classes.len() {
                rec.push(self.cell_text(i, j)?);
            }
            w.write_record(&rec)?;
        }
        w.flush()?;
        Ok(())
    }

    /// A `longtable` with one block of rows per character family.
    pub fn write_latex<W: Write>(&self, mut out: W) -> Result<()> {
        writeln!(out, "% q = {} (p = {}, a = {}), z = exp(2 pi i / {})", self.q, self.p, self.a, self.p)?;
        writeln!(out, "\\begin{{longtable}}{{l|{}}}", "c".repeat(self.classes.len()))?;
        let heads: Vec<String> =
            self.classes.iter().map(|c| format!("${}$", latex_label(&c.label))).collect();
        writeln!(out, " & {} \\\\", heads.join(" & "))?;
        let mut family = None;
        for (i, r) in self.characters.iter().enumerate() {
            if family != Some(&r.family) {
                writeln!(out, "\\hline")?;
                family = Some(&r.family);
            }
            let cells = (0..self.classes.len())
                .map(|j| Ok(format!("${}$", self.cell_text(i, j)?.replace('*', ""))))
                .collect::<Result<Vec<_>>>()?;
            writeln!(out, "${}$ & {} \\\\", latex_label(&r.label), cells.join(" & "))?;
        }
        writeln!(out, "\\end{{longtable}}")?;
        Ok(())
    }
}

fn latex_label(s: &str) -> String {
    s.replace('_', "\\_").replace("\\_{", "_{")
}
