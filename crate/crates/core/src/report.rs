//! Check results and their JSON / plain-text renderings.

use std::fmt;
use std::time::Instant;

use serde::Serialize;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Skipped,
}

/// Where the `got` value comes from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Provenance {
    /// Read off a published table; nothing was recomputed.
    PaperTable,
    /// Recomputed by an independent enumeration or construction.
    DerivedOracle,
    /// A structural identity.
    Trivial,
}

impl fmt::Display for Provenance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Provenance::PaperTable => "paper-table",
            Provenance::DerivedOracle => "derived-oracle",
            Provenance::Trivial => "trivial",
        })
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Check {
    pub name: String,
    pub status: Status,
    pub got: String,
    pub want: String,
    pub provenance: Provenance,
    /// Wall time; only recorded when timings are requested so that the
    /// default output is byte-for-byte reproducible.
    pub millis: Option<u64>,
}

#[derive(Clone, Debug, Default)]
pub struct Report {
    pub checks: Vec<Check>,
    timings: bool,
}

impl Report {
    pub fn new(timings: bool) -> Report {
        Report {
            checks: Vec::new(),
            timings,
        }
    }

    /// Runs `f`, which returns `(got, want)`, and records a check that
    /// passes when they are equal. An error becomes a failure whose `got`
    /// is the error message.
    pub fn run<T, F>(&mut self, name: &str, provenance: Provenance, f: F)
    where
        T: fmt::Display + PartialEq,
        F: FnOnce() -> crate::Result<(T, T)>,
    {
        let start = Instant::now();
        let result = f();
        let millis = self.timings.then(|| start.elapsed().as_millis() as u64);
        let (status, got, want) = match result {
            Ok((got, want)) => {
                let status = if got == want { Status::Pass } else { Status::Fail };
                (status, got.to_string(), want.to_string())
            }
            Err(e) => (Status::Fail, format!("error: {e}"), String::new()),
        };
        self.checks.push(Check {
            name: name.into(),
            status,
            got,
            want,
            provenance,
            millis,
        });
    }

    pub fn skip(&mut self, name: &str, provenance: Provenance, reason: &str) {
        self.checks.push(Check {
            name: name.into(),
            status: Status::Skipped,
            got: reason.into(),
            want: String::new(),
            provenance,
            millis: None,
        });
    }

    pub fn count(&self, status: Status) -> usize {
        self.checks.iter().filter(|c| c.status == status).count()
    }

    pub fn passed(&self) -> bool {
        self.count(Status::Fail) == 0
    }

    /// A flat JSON list of checks.
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.checks).expect("report serializes")
    }
}

impl fmt::Display for Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let width = self.checks.iter().map(|c| c.name.len()).max().unwrap_or(0);
        for c in &self.checks {
            let tag = match c.status {
                Status::Pass => "PASS",
                Status::Fail => "FAIL",
                Status::Skipped => "SKIP",
            };
            write!(f, "{tag}  {:width$}  got {}", c.name, c.got)?;
            if !c.want.is_empty() {
                write!(f, ", want {}", c.want)?;
            }
            write!(f, "  [{}]", c.provenance)?;
            if let Some(ms) = c.millis {
                write!(f, "  {ms} ms")?;
            }
            writeln!(f)?;
        }
        write!(
            f,
            "{} passed, {} failed, {} skipped",
            self.count(Status::Pass),
            self.count(Status::Fail),
            self.count(Status::Skipped)
        )
    }
}
