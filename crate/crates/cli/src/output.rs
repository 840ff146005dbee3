use std::fs::File;
use std::io::{self, Write};
use std::path::Path;

use serde::Serialize;
use serde_json::Value;

use kneser_topo::Error;

use crate::args::Format;

#[derive(Copy, Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Pass,
    Fail,
    Capped,
}

#[derive(Debug, Serialize)]
pub struct Check {
    pub name: String,
    pub status: Status,
    pub report: Value,
}

impl Check {
    pub fn new(name: &str, ok: bool, report: impl Serialize) -> Check {
        Check {
            name: name.into(),
            status: if ok { Status::Pass } else { Status::Fail },
            report: serde_json::to_value(report).expect("report serializes"),
        }
    }

    /// Turns a resource error into a capped check and passes other errors on.
    pub fn from_result<T: Serialize>(
        name: &str,
        r: kneser_topo::Result<T>,
        ok: impl Fn(&T) -> bool,
    ) -> kneser_topo::Result<Check> {
        match r {
            Ok(v) => Ok(Check::new(name, ok(&v), v)),
            Err(e) if e.is_resource() => Ok(Check {
                name: name.into(),
                status: Status::Capped,
                report: Value::String(e.to_string()),
            }),
            Err(e) => Err(e),
        }
    }
}

#[derive(Debug, Serialize)]
pub struct VerificationReport {
    pub command: &'static str,
    pub params: Value,
    pub checks: Vec<Check>,
    pub pass: bool,
    pub caps_hit: bool,
}

impl VerificationReport {
    pub fn new(command: &'static str, params: impl Serialize, checks: Vec<Check>) -> Self {
        let pass = checks.iter().all(|c| c.status == Status::Pass);
        let caps_hit = checks.iter().any(|c| c.status == Status::Capped);
        VerificationReport {
            command,
            params: serde_json::to_value(params).expect("params serialize"),
            checks,
            pass,
            caps_hit,
        }
    }

    pub fn exit_code(&self) -> i32 {
        if self.checks.iter().any(|c| c.status == Status::Fail) {
            1
        } else if self.caps_hit {
            2
        } else {
            0
        }
    }

    pub fn into_output(self) -> Output {
        let rows = self
            .checks
            .iter()
            .map(|c| vec![c.name.clone(), serde_json::to_value(c.status).unwrap().as_str().unwrap().to_string()])
            .collect();
        let code = self.exit_code();
        Output {
            json: serde_json::to_value(&self).expect("report serializes"),
            header: vec!["check".into(), "status".into()],
            rows,
            exit_code: code,
        }
    }
}

/// What a command hands back: the JSON document, the CSV table, and an exit code.
pub struct Output {
    pub json: Value,
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
    pub exit_code: i32,
}

impl Output {
    pub fn info(json: Value, header: &[&str], rows: Vec<Vec<String>>) -> Self {
        Output {
            json,
            header: header.iter().map(|h| h.to_string()).collect(),
            rows,
            exit_code: 0,
        }
    }
}

pub fn write(out: &Output, format: Format, path: Option<&Path>) -> io::Result<()> {
    let mut sink: Box<dyn Write> = match path {
        Some(p) => Box::new(File::create(p)?),
        None => Box::new(io::stdout().lock()),
    };
    match format {
        Format::Json => {
            serde_json::to_writer_pretty(&mut sink, &out.json)?;
            writeln!(sink)?;
        }
        Format::Csv => {
            let mut w = csv::Writer::from_writer(sink);
            w.write_record(&out.header)?;
            for row in &out.rows {
                w.write_record(row)?;
            }
            w.flush()?;
            return Ok(());
        }
    }
    sink.flush()
}

pub fn exit_code_for(e: &Error) -> i32 {
    match e {
        Error::Parameter(_) => 3,
        Error::Resource { .. } => 2,
        _ => 1,
    }
}

pub fn join(elements: &[u32]) -> String {
    elements.iter().map(u32::to_string).collect::<Vec<_>>().join(" ")
}
