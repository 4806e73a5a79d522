//! Versioned reports. The text form has one record per line, fields
//! separated by single tabs (shown here as runs of spaces):
//!
//! ```text
//! ringwalk-report  1
//! command          stationary
//! meta             ring        M_2(F_2)
//! notice           free text
//! table            stationary  generator  pi
//! row              0           14/65
//! check            solve_vs_recursive  pass  exact
//! status           pass
//! ```
//!
//! `row` lines belong to the most recent `table`. Backslash, tab, CR and
//! newline inside fields are written as `\\`, `\t`, `\r`, `\n`.

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub const REPORT_VERSION: u32 = 1;
const MAGIC: &str = "ringwalk-report";

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Table {
    pub name: String,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckRow {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Report {
    pub version: u32,
    pub command: String,
    pub meta: Vec<(String, String)>,
    pub notices: Vec<String>,
    pub tables: Vec<Table>,
    pub checks: Vec<CheckRow>,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ReportError {
    #[error("line {line}: {msg}")]
    Syntax { line: usize, msg: String },
    #[error("unsupported report version {0}")]
    Version(u32),
    #[error("json: {0}")]
    Json(String),
}

impl Report {
    pub fn new(command: &str) -> Report {
        Report { version: REPORT_VERSION, command: command.into(), meta: vec![], notices: vec![], tables: vec![], checks: vec![] }
    }

    pub fn meta(&mut self, key: &str, value: impl ToString) -> &mut Self {
        self.meta.push((key.into(), value.to_string()));
        self
    }

    pub fn get_meta(&self, key: &str) -> Option<&str> {
        self.meta.iter().find(|(k, _)| k == key).map(|(_, v)| v.as_str())
    }

    pub fn notice(&mut self, text: impl Into<String>) {
        self.notices.push(text.into());
    }

    pub fn table(&mut self, name: &str, columns: &[&str]) -> &mut Table {
        self.tables.push(Table { name: name.into(), columns: columns.iter().map(|c| c.to_string()).collect(), rows: vec![] });
        self.tables.last_mut().expect("just pushed")
    }

    pub fn get_table(&self, name: &str) -> Option<&Table> {
        self.tables.iter().find(|t| t.name == name)
    }

    pub fn check(&mut self, name: &str, passed: bool, detail: impl Into<String>) {
        self.checks.push(CheckRow { name: name.into(), passed, detail: detail.into() });
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let mut line = |fields: &[&str]| {
            let esc: Vec<String> = fields.iter().map(|f| escape(f)).collect();
            out.push_str(&esc.join("\t"));
            out.push('\n');
        };
        line(&[MAGIC, &self.version.to_string()]);
        line(&["command", &self.command]);
        for (k, v) in &self.meta {
            line(&["meta", k, v]);
        }
        for n in &self.notices {
            line(&["notice", n]);
        }
        for t in &self.tables {
            let mut head = vec!["table", t.name.as_str()];
            head.extend(t.columns.iter().map(String::as_str));
            line(&head);
            for r in &t.rows {
                let mut row = vec!["row"];
                row.extend(r.iter().map(String::as_str));
                line(&row);
            }
        }
        for c in &self.checks {
            line(&["check", &c.name, if c.passed { "pass" } else { "fail" }, &c.detail]);
        }
        line(&["status", if self.passed() { "pass" } else { "fail" }]);
        out
    }

    pub fn from_text(text: &str) -> Result<Report, ReportError> {
        let mut report: Option<Report> = None;
        let mut status: Option<bool> = None;
        for (i, raw) in text.lines().enumerate() {
            let ln = i + 1;
            let err = |msg: String| ReportError::Syntax { line: ln, msg };
            let fields: Vec<String> = raw.split('\t').map(unescape).collect::<Result<_, _>>().map_err(err)?;
            let err = |msg: &str| ReportError::Syntax { line: ln, msg: msg.into() };
            if status.is_some() {
                return Err(err("content after status"));
            }
            let Some(rep) = report.as_mut() else {
                if fields.len() != 2 || fields[0] != MAGIC {
                    return Err(err("missing report header"));
                }
                let v: u32 = fields[1].parse().map_err(|_| err("bad version"))?;
                if v != REPORT_VERSION {
                    return Err(ReportError::Version(v));
                }
                report = Some(Report::new(""));
                continue;
            };
            let arity = |n: usize| if fields.len() == n { Ok(()) } else { Err(err(&format!("`{}` takes {} fields", fields[0], n - 1))) };
            match fields[0].as_str() {
                "command" => {
                    arity(2)?;
                    rep.command = fields[1].clone();
                }
                "meta" => {
                    arity(3)?;
                    rep.meta.push((fields[1].clone(), fields[2].clone()));
                }
                "notice" => {
                    arity(2)?;
                    rep.notices.push(fields[1].clone());
                }
                "table" => {
                    if fields.len() < 2 {
                        return Err(err("table needs a name"));
                    }
                    rep.tables.push(Table { name: fields[1].clone(), columns: fields[2..].to_vec(), rows: vec![] });
                }
                "row" => {
                    let t = rep.tables.last_mut().ok_or_else(|| err("row before any table"))?;
                    let cells = fields[1..].to_vec();
                    if cells.len() != t.columns.len() {
                        return Err(err(&format!("row has {} cells, table `{}` has {} columns", cells.len(), t.name, t.columns.len())));
                    }
                    t.rows.push(cells);
                }
                "check" => {
                    arity(4)?;
                    let passed = match fields[2].as_str() {
                        "pass" => true,
                        "fail" => false,
                        _ => return Err(err("check outcome must be pass or fail")),
                    };
                    rep.checks.push(CheckRow { name: fields[1].clone(), passed, detail: fields[3].clone() });
                }
                "status" => {
                    arity(2)?;
                    let s = match fields[1].as_str() {
                        "pass" => true,
                        "fail" => false,
                        _ => return Err(err("status must be pass or fail")),
                    };
                    if s != rep.passed() {
                        return Err(err("status disagrees with the checks"));
                    }
                    status = Some(s);
                }
                other => return Err(err(&format!("unknown record `{other}`"))),
            }
        }
        match (report, status) {
            (Some(r), Some(_)) => Ok(r),
            _ => Err(ReportError::Syntax { line: text.lines().count(), msg: "truncated report".into() }),
        }
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(&JsonReport { report: self, status: if self.passed() { "pass" } else { "fail" } })
            .expect("report serializes");
        s.push('\n');
        s
    }

    pub fn from_json(text: &str) -> Result<Report, ReportError> {
        #[derive(Deserialize)]
        struct Owned {
            #[serde(flatten)]
            report: Report,
            status: String,
        }
        let o: Owned = serde_json::from_str(text).map_err(|e| ReportError::Json(e.to_string()))?;
        if o.report.version != REPORT_VERSION {
            return Err(ReportError::Version(o.report.version));
        }
        if (o.status == "pass") != o.report.passed() {
            return Err(ReportError::Json("status disagrees with the checks".into()));
        }
        Ok(o.report)
    }
}

#[derive(Serialize)]
struct JsonReport<'a> {
    #[serde(flatten)]
    report: &'a Report,
    status: &'a str,
}

fn escape(s: &str) -> String {
    let mut out = String::with_capacity(s.len());
    for c in s.chars() {
        match c {
            '\\' => out.push_str("\\\\"),
            '\t' => out.push_str("\\t"),
            '\n' => out.push_str("\\n"),
            '\r' => out.push_str("\\r"),
            c => out.push(c),
        }
    }
    out
}

fn unescape(s: &str) -> Result<String, String> {
    let mut out = String::with_capacity(s.len());
    let mut it = s.chars();
    while let Some(c) = it.next() {
        if c != '\\' {
            out.push(c);
            continue;
        }
        match it.next() {
            Some('\\') => out.push('\\'),
            Some('t') => out.push('\t'),
            Some('n') => out.push('\n'),
            Some('r') => out.push('\r'),
            other => return Err(format!("bad escape `\\{}`", other.map(String::from).unwrap_or_default())),
        }
    }
    Ok(out)
}
