//! Serialization of result records as JSON, CSV or whitespace columns.

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::failure::Failure;
use crate::manifest::{Command, ResultRecord, Sl3Stat};
use crate::run::{kind_name, ConeSection};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum Format {
    Json,
    Csv,
    Plotdata,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Table {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn to_csv(&self) -> Result<String, Failure> {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(&self.columns)?;
        for r in &self.rows {
            w.write_record(r)?;
        }
        let bytes = w.into_inner().map_err(|e| Failure::runtime(e.to_string()))?;
        String::from_utf8(bytes).map_err(|e| Failure::runtime(e.to_string()))
    }

    pub fn to_columns(&self) -> String {
        let mut out = format!("# {}\n", self.columns.join(" "));
        for r in &self.rows {
            let cells: Vec<&str> = r.iter().map(|c| if c.is_empty() { "nan" } else { c.as_str() }).collect();
            out.push_str(&cells.join(" "));
            out.push('\n');
        }
        out
    }
}

pub fn emit(record: &ResultRecord, format: Format) -> Result<String, Failure> {
    match format {
        Format::Json => {
            let mut s = serde_json::to_string_pretty(record).map_err(|e| Failure::runtime(e.to_string()))?;
            s.push('\n');
            Ok(s)
        }
        Format::Csv => table(record)?.to_csv(),
        Format::Plotdata => match record.manifest.command {
            Command::Rootsys { .. } => cone_plotdata(record),
            _ => Ok(table(record)?.to_columns()),
        },
    }
}

/// Where the tabular part of each output lives: a JSON pointer to an array
/// (or a single object) and (header, field pointer) pairs.
type Spec = (&'static str, &'static [(&'static str, &'static str)]);

fn spec(cmd: &Command) -> Option<Spec> {
    Some(match cmd {
        Command::Rootsys { .. } => ("/table", &[("root", "/root"), ("k_alpha", "/k_alpha"), ("rho_prime", "/rho_prime")]),
        Command::Classify { .. } => (
            "/pairings",
            &[("root", "/root"), ("weight_pairing", "/weight_pairing"), ("root_pairing", "/root_pairing")],
        ),
        Command::Gm { .. } => (
            "/values",
            &[
                ("x", "/x"),
                ("exact", "/exact"),
                ("ln_exact", "/ln_exact"),
                ("asymptote", "/asymptote"),
                ("ln_asymptote", "/ln_asymptote"),
                ("ratio", "/ratio"),
                ("method", "/method"),
            ],
        ),
        Command::Ball { .. } => (
            "/values",
            &[
                ("R", "/R"),
                ("exact", "/exact"),
                ("ln_exact", "/ln_exact"),
                ("asymptote", "/asymptote"),
                ("ln_asymptote", "/ln_asymptote"),
                ("ratio", "/ratio"),
            ],
        ),
        Command::ConeBall { .. } => (
            "/values",
            &[("R", "/R"), ("cone_scaled", "/cone_scaled"), ("ball_scaled", "/ball_scaled"), ("ratio", "/ratio")],
        ),
        Command::Region { .. } => (
            "/estimates",
            &[("T", "/T"), ("value", "/value"), ("stderr", "/stderr"), ("ln_value", "/ln_value")],
        ),
        Command::Projective { .. } | Command::Flags { .. } => ("/series/points", &[("T", "/T"), ("N", "/N")]),
        Command::Horocycles { .. } => ("/points", &[("R", "/R"), ("N", "/N"), ("normalized", "/normalized")]),
        Command::Xi { .. } => (
            "/shells",
            &[("n", "/n"), ("count", "/count"), ("mass", "/mass"), ("bound", "/bound"), ("cumulative", "/cumulative")],
        ),
        Command::SimHorocycle { .. } => (
            "/reports",
            &[("h", "/h"), ("fraction", "/fraction"), ("stderr", "/stderr"), ("target", "/target")],
        ),
        Command::SimSl3 { stat: Sl3Stat::Siegel, .. } => (
            "/summary",
            &[("r", "/r"), ("N", "/N"), ("mean", "/mean"), ("stderr", "/stderr"), ("haar_reference", "/haar_reference")],
        ),
        Command::SimSl3 { stat: Sl3Stat::Escape, .. } => {
            ("/summary", &[("eps", "/eps"), ("N", "/N"), ("escape_fraction", "/escape_fraction")])
        }
        Command::SimSl3 { stat: Sl3Stat::Lambda1, .. } => {
            ("/summary", &[("N", "/N"), ("mean", "/mean"), ("stderr", "/stderr")])
        }
        Command::Concordance { .. } => (
            "/rays",
            &[
                ("a", "/theta/0"),
                ("b", "/theta/1"),
                ("c", "/theta/2"),
                ("verdict", "/verdict/kind"),
                ("outcome", "/outcome"),
                ("escape_fraction", "/escape_fraction"),
                ("siegel_mean", "/siegel/mean"),
                ("concordant", "/concordant"),
            ],
        ),
        Command::Exponents { .. } | Command::Fit { .. } => return None,
    })
}

fn cell(v: Option<&Value>) -> String {
    match v {
        None | Some(Value::Null) => String::new(),
        Some(Value::String(s)) => s.clone(),
        Some(v) => v.to_string(),
    }
}

pub fn table(record: &ResultRecord) -> Result<Table, Failure> {
    let cmd = &record.manifest.command;
    let Some((path, fields)) = spec(cmd) else {
        return Err(Failure::validation(format!("{} output has no tabular form; use --format json", kind_name(cmd))));
    };
    let rows: Vec<&Value> = match record.outputs.pointer(path) {
        Some(Value::Array(items)) => items.iter().collect(),
        Some(obj @ Value::Object(_)) => vec![obj],
        _ => return Err(Failure::runtime(format!("record has no {path} table"))),
    };
    Ok(Table {
        columns: fields.iter().map(|(h, _)| h.to_string()).collect(),
        rows: rows.into_iter().map(|r| fields.iter().map(|(_, p)| cell(r.pointer(p))).collect()).collect(),
    })
}

/// Boundary rays of the Weyl chamber and of its dual cone, one ray per line.
fn cone_plotdata(record: &ResultRecord) -> Result<String, Failure> {
    let Some(v) = record.outputs.get("cone_section") else {
        return Err(Failure::validation("cone sections are drawn for rank-2 data only"));
    };
    let cs: ConeSection = serde_json::from_value(v.clone()).map_err(|e| Failure::runtime(e.to_string()))?;
    let mut out = String::from("# cone ray x y\n");
    for (name, rays) in [("chamber", &cs.chamber), ("dual_cone", &cs.dual_cone)] {
        for (i, r) in rays.iter().enumerate() {
            out.push_str(&format!("{name} {} {} {}\n", i + 1, r[0], r[1]));
        }
    }
    Ok(out)
}

/// Rejects format/command pairs with no rendering before any work is done.
pub fn check_format(cmd: &Command, format: Format) -> Result<(), Failure> {
    if format != Format::Json && spec(cmd).is_none() {
        return Err(Failure::validation(format!(
            "{} output has no tabular form; use --format json",
            kind_name(cmd)
        )));
    }
    Ok(())
}
