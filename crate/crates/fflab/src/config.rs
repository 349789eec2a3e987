//! Run configuration: a TOML file of `key = value` sections plus a form file.

use std::fmt;
use std::path::{Path, PathBuf};

use fflab_core::circle::CountingProblem;
use fflab_core::field::{FieldSpec, Fq};
use fflab_core::forms::{parse_form, HypersurfaceForm};
use fflab_core::Budget;
use serde::Deserialize;

use crate::report::Format;

pub const TASKS: [&str; 12] = [
    "dissect-verify",
    "major-arc",
    "weyl-check",
    "shrink-check",
    "pointwise-measure",
    "lattice-minima",
    "ratio-lemma",
    "cape-lemma",
    "exponent-audit",
    "count-cone",
    "count-morphisms",
    "langweil-report",
];

/// A configuration problem, located by file and line or by field name.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConfigError {
    pub path: PathBuf,
    pub line: Option<usize>,
    pub msg: String,
}

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.line {
            Some(l) => write!(f, "{}:{}: {}", self.path.display(), l, self.msg),
            None => write!(f, "{}: {}", self.path.display(), self.msg),
        }
    }
}

impl std::error::Error for ConfigError {}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConfig {
    task: Option<String>,
    #[serde(default)]
    run: RawRun,
    field: RawField,
    problem: RawProblem,
    #[serde(default)]
    params: Params,
    #[serde(default)]
    extension: Vec<Extension>,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawRun {
    seed: Option<u64>,
    workers: Option<usize>,
    budget: Option<u64>,
    out: Option<PathBuf>,
    format: Option<String>,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawField {
    p: u32,
    f: Option<u32>,
    modulus: Option<Vec<u32>>,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawProblem {
    d: usize,
    n: usize,
    e: usize,
    form: Option<PathBuf>,
}

/// Task parameters; each task reads the ones it needs and ignores the rest.
#[derive(Debug, Clone, Default, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct Params {
    /// random atoms to test; absent means every atom
    pub samples: Option<usize>,
    /// shrink parameters as `"num/den"`; absent means every admissible one
    pub eta: Option<Vec<String>>,
    /// weyl-check: also run the `M^(v)` chain
    pub v: Option<usize>,
    /// weyl-check: also run the curly-N chain (kappa follows from e)
    pub curly: Option<bool>,
    /// arc filters for pointwise-measure
    pub deg_r: Option<Vec<usize>>,
    pub beta: Option<Vec<i64>>,
    pub ell_max: Option<u32>,
    pub k_max: Option<u32>,
    /// lattice tasks
    pub instances: Option<usize>,
    pub lattice_n: Option<usize>,
    pub m: Option<Vec<i64>>,
    pub gamma_lo: Option<i64>,
    pub gamma_hi: Option<i64>,
    pub z_min: Option<i64>,
    /// exponent-audit runs `e ..= e_max`
    pub e_max: Option<usize>,
    /// count-morphisms: also count lines as an independent check
    pub lines: Option<bool>,
}

/// An explicit modulus for `F_{q^ell}` over the base field.
#[derive(Debug, Clone, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct Extension {
    pub ell: u32,
    pub modulus: Vec<u32>,
}

#[derive(Debug, Clone)]
pub struct RunConfig {
    pub path: PathBuf,
    pub task: Option<String>,
    pub field: Fq,
    pub d: usize,
    pub n: usize,
    pub e: usize,
    pub form_path: Option<PathBuf>,
    pub form: Option<HypersurfaceForm>,
    pub params: Params,
    pub extensions: Vec<Extension>,
    pub budget: Budget,
    pub seed: u64,
    pub workers: usize,
    pub out: PathBuf,
    pub format: Format,
}

impl RunConfig {
    pub fn load(path: &Path) -> Result<Self, ConfigError> {
        let text = std::fs::read_to_string(path).map_err(|e| ConfigError {
            path: path.to_path_buf(),
            line: None,
            msg: format!("cannot read config: {e}"),
        })?;
        let dir = path.parent().unwrap_or(Path::new("."));
        Self::parse(&text, path, dir)
    }

    /// Parse config text; relative form paths resolve against `dir`.
    pub fn parse(text: &str, path: &Path, dir: &Path) -> Result<Self, ConfigError> {
        let err = |line: Option<usize>, msg: String| ConfigError { path: path.to_path_buf(), line, msg };
        let raw: RawConfig = toml::from_str(text).map_err(|e| {
            let line = e.span().map(|s| text[..s.start].matches('\n').count() + 1);
            err(line, e.message().to_string())
        })?;
        let line_of = |key: &str| {
            text.lines()
                .position(|l| l.trim_start().starts_with(key))
                .map(|i| i + 1)
        };

        let spec = match (raw.field.f.unwrap_or(1), raw.field.modulus) {
            (1, _) => FieldSpec::prime(raw.field.p),
            (f, Some(m)) => {
                if m.len() != f as usize + 1 {
                    return Err(err(line_of("modulus"), format!("field.modulus must have {} coefficients", f + 1)));
                }
                FieldSpec::extension(raw.field.p, m)
            }
            (f, None) => return Err(err(line_of("f"), format!("field.f = {f} needs an explicit field.modulus"))),
        };
        let field = Fq::new(&spec).map_err(|e| err(line_of("p"), e.to_string()))?;
        let pr = raw.problem;
        if pr.d < 2 {
            return Err(err(line_of("d"), format!("problem.d = {} must be at least 2", pr.d)));
        }
        if field.p() as usize <= pr.d {
            return Err(err(line_of("p"), format!("field characteristic {} must exceed d = {}", field.p(), pr.d)));
        }
        if pr.n == 0 || pr.e == 0 {
            return Err(err(None, "problem.n and problem.e must be positive".into()));
        }
        if let Some(t) = &raw.task {
            if !TASKS.contains(&t.as_str()) {
                return Err(err(line_of("task"), format!("unknown task `{t}`")));
            }
        }

        let (form_path, form) = match pr.form {
            Some(rel) => {
                let fp = dir.join(rel);
                let text = std::fs::read_to_string(&fp).map_err(|e| ConfigError {
                    path: fp.clone(),
                    line: None,
                    msg: format!("cannot read form file: {e}"),
                })?;
                let form = parse_form(&text, pr.n, pr.d, &field).map_err(|e| match e {
                    fflab_core::Error::Parse { line, msg } => ConfigError { path: fp.clone(), line: Some(line), msg },
                    other => ConfigError { path: fp.clone(), line: None, msg: other.to_string() },
                })?;
                (Some(fp), Some(form))
            }
            None => (None, None),
        };

        let run = raw.run;
        let budget = run.budget.unwrap_or(1_000_000_000);
        if budget == 0 {
            return Err(err(line_of("budget"), "run.budget must be positive".into()));
        }
        let workers = run.workers.unwrap_or(1);
        if workers == 0 {
            return Err(err(line_of("workers"), "run.workers must be positive".into()));
        }
        let format = match run.format.as_deref() {
            None => Format::Csv,
            Some(s) => s.parse().map_err(|m| err(line_of("format"), m))?,
        };
        for ext in &raw.extension {
            if ext.ell < 2 || ext.modulus.len() != ext.ell as usize + 1 {
                return Err(err(
                    line_of("ell"),
                    format!("extension ell = {} needs ell >= 2 and ell + 1 modulus coefficients", ext.ell),
                ));
            }
        }
        if let Some(eta) = &raw.params.eta {
            for s in eta {
                s.parse::<num_rational::Rational64>()
                    .map_err(|_| err(line_of("eta"), format!("params.eta entry `{s}` is not a rational")))?;
            }
        }

        Ok(RunConfig {
            path: path.to_path_buf(),
            task: raw.task,
            field,
            d: pr.d,
            n: pr.n,
            e: pr.e,
            form_path,
            form,
            params: raw.params,
            extensions: raw.extension,
            budget: Budget(budget as u128),
            seed: run.seed.unwrap_or(0),
            workers,
            out: run.out.unwrap_or_else(|| PathBuf::from("out")),
            format,
        })
    }

    /// The counting problem, for tasks that need a form.
    pub fn problem(&self) -> Result<CountingProblem, ConfigError> {
        let form = self.form.clone().ok_or_else(|| ConfigError {
            path: self.path.clone(),
            line: None,
            msg: "this task needs problem.form".into(),
        })?;
        CountingProblem::new(self.field.clone(), form, self.e).map_err(|e| ConfigError {
            path: self.path.clone(),
            line: None,
            msg: e.to_string(),
        })
    }

    /// The configured modulus for `F_{q^ell}`.
    pub fn extension_modulus(&self, ell: u32) -> Result<Option<Vec<u32>>, ConfigError> {
        if ell == 1 {
            return Ok(None);
        }
        self.extensions
            .iter()
            .find(|x| x.ell == ell)
            .map(|x| Some(x.modulus.clone()))
            .ok_or_else(|| ConfigError {
                path: self.path.clone(),
                line: None,
                msg: format!("no [[extension]] entry with ell = {ell}"),
            })
    }
}
