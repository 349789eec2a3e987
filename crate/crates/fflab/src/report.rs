//! Report records and their CSV / JSON-lines serialization.

use std::fmt;
use std::io::{self, BufRead, Write};
use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::{Deserialize, Serialize};

/// One output record. Every value is a string: integers in decimal,
/// rationals as `num/den`, cyclotomic values as `[c_0,...,c_{p-2}]`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReportRecord {
    pub task: String,
    pub record: usize,
    pub kind: String,
    pub fields: Vec<(String, String)>,
}

impl ReportRecord {
    pub fn get(&self, key: &str) -> Option<&str> {
        self.fields.iter().find(|(k, _)| k == key).map(|(_, v)| v.as_str())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Csv,
    Jsonl,
}

impl Format {
    pub fn extension(self) -> &'static str {
        match self {
            Format::Csv => "csv",
            Format::Jsonl => "jsonl",
        }
    }
}

impl FromStr for Format {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "csv" => Ok(Format::Csv),
            "jsonl" | "json-lines" => Ok(Format::Jsonl),
            other => Err(format!("unknown format `{other}` (csv or jsonl)")),
        }
    }
}

impl fmt::Display for Format {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.extension())
    }
}

pub const CSV_HEADER: [&str; 5] = ["task", "record", "kind", "key", "value"];

/// Record collector. Checks are records whose `holds` field is recorded
/// and counted, so the run status falls out of the stream itself.
#[derive(Debug, Clone)]
pub struct Report {
    task: String,
    pub records: Vec<ReportRecord>,
    pub failures: usize,
}

impl Report {
    pub fn new(task: &str) -> Self {
        Report { task: task.to_string(), records: Vec::new(), failures: 0 }
    }

    pub fn push(&mut self, kind: &str, fields: Vec<(&str, String)>) {
        let record = self.records.len();
        self.records.push(ReportRecord {
            task: self.task.clone(),
            record,
            kind: kind.to_string(),
            fields: fields.into_iter().map(|(k, v)| (k.to_string(), v)).collect(),
        });
    }

    /// A record asserting an invariant.
    pub fn check(&mut self, kind: &str, holds: bool, mut fields: Vec<(&str, String)>) {
        fields.push(("holds", holds.to_string()));
        self.failures += !holds as usize;
        self.push(kind, fields);
    }
}

pub fn write_records<W: Write>(records: &[ReportRecord], format: Format, w: W) -> io::Result<()> {
    match format {
        Format::Csv => {
            let mut wr = csv::Writer::from_writer(w);
            wr.write_record(CSV_HEADER)?;
            for r in records {
                let idx = r.record.to_string();
                for (k, v) in &r.fields {
                    wr.write_record([r.task.as_str(), &idx, &r.kind, k, v])?;
                }
            }
            wr.flush()
        }
        Format::Jsonl => {
            let mut w = io::BufWriter::new(w);
            for r in records {
                serde_json::to_writer(&mut w, r)?;
                w.write_all(b"\n")?;
            }
            w.flush()
        }
    }
}

/// Write `<dir>/<task>.<ext>` and return its path.
pub fn emit_report(records: &[ReportRecord], task: &str, format: Format, dir: &Path) -> io::Result<PathBuf> {
    std::fs::create_dir_all(dir)?;
    let path = dir.join(format!("{task}.{}", format.extension()));
    write_records(records, format, std::fs::File::create(&path)?)?;
    Ok(path)
}

fn bad(msg: String) -> io::Error {
    io::Error::new(io::ErrorKind::InvalidData, msg)
}

/// Read records back from either format.
pub fn read_records<R: BufRead>(r: R, format: Format) -> io::Result<Vec<ReportRecord>> {
    match format {
        Format::Jsonl => r
            .lines()
            .filter(|l| l.as_ref().map_or(true, |l| !l.is_empty()))
            .map(|l| serde_json::from_str(&l?).map_err(|e| bad(e.to_string())))
            .collect(),
        Format::Csv => {
            let mut rd = csv::Reader::from_reader(r);
            if rd.headers()?.iter().ne(CSV_HEADER) {
                return Err(bad("unexpected CSV header".into()));
            }
            let mut out: Vec<ReportRecord> = Vec::new();
            for row in rd.records() {
                let row = row?;
                let idx: usize = row[1].parse().map_err(|_| bad(format!("bad record index {:?}", &row[1])))?;
                let field = (row[3].to_string(), row[4].to_string());
                match out.last_mut() {
                    Some(last) if last.record == idx && last.task == row[0] => last.fields.push(field),
                    _ => out.push(ReportRecord {
                        task: row[0].to_string(),
                        record: idx,
                        kind: row[2].to_string(),
                        fields: vec![field],
                    }),
                }
            }
            Ok(out)
        }
    }
}
