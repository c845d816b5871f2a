//! Flat `key=value` experiment configs with `--set` overrides.

use std::collections::BTreeMap;
use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use anyhow::{anyhow, bail, Context, Result};
use automorph::euler::SynthModel;
use automorph::oscillate::{preset, ExponentProfile, DEFAULT_EPSILON, DEFAULT_RATIO};
use num_rational::Rational64;

const KEYS: &[&str] = &[
    "source",
    "j",
    "m",
    "model",
    "seed",
    "path",
    "weight",
    "symplectic",
    "N",
    "preset",
    "alpha",
    "beta",
    "gamma",
    "r",
    "epsilon",
    "outputs",
    "tasks",
    "label",
    "x_min",
    "x_max",
    "ratio",
    "fit_min",
];

/// Smallest N accepted when a task fits growth exponents.
pub const MIN_FIT_LIMIT: usize = 1000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Task {
    Windows,
    Cumulative,
    Moments,
    RankinCheck,
    DivisorBoundCheck,
}

impl Task {
    pub fn name(self) -> &'static str {
        match self {
            Task::Windows => "windows",
            Task::Cumulative => "cumulative",
            Task::Moments => "moments",
            Task::RankinCheck => "rankin-check",
            Task::DivisorBoundCheck => "divisor-bound-check",
        }
    }

    fn fits(self) -> bool {
        self != Task::DivisorBoundCheck
    }
}

impl FromStr for Task {
    type Err = anyhow::Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "windows" => Task::Windows,
            "cumulative" => Task::Cumulative,
            "moments" => Task::Moments,
            "rankin-check" => Task::RankinCheck,
            "divisor-bound-check" => Task::DivisorBoundCheck,
            _ => bail!(
                "unknown task `{s}` (expected windows, cumulative, moments, rankin-check or divisor-bound-check)"
            ),
        })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Source {
    Delta,
    SymK {
        j: u32,
    },
    Synthetic {
        m: usize,
        model: SynthModel,
        seed: u64,
    },
    SpinorSynthetic {
        seed: u64,
        symplectic: bool,
    },
    SpinorIngest {
        path: PathBuf,
        weight: u32,
    },
}

impl Source {
    fn name(&self) -> &'static str {
        match self {
            Source::Delta => "delta",
            Source::SymK { .. } => "symk",
            Source::Synthetic { .. } => "synthetic",
            Source::SpinorSynthetic { .. } => "spinor-synthetic",
            Source::SpinorIngest { .. } => "spinor-ingest",
        }
    }

    /// Preset used when the config names none.
    fn default_preset(&self) -> String {
        match self {
            Source::Delta => "gl2-selfdual".into(),
            Source::SymK { j } => format!("glm-ramanujan({})", j + 1),
            Source::Synthetic { m, .. } => format!("glm-ramanujan({m})"),
            Source::SpinorSynthetic { .. } | Source::SpinorIngest { .. } => "siegel-spinor".into(),
        }
    }

    pub fn seed(&self) -> Option<u64> {
        match self {
            Source::Synthetic { seed, .. } | Source::SpinorSynthetic { seed, .. } => Some(*seed),
            _ => None,
        }
    }
}

/// Where a setting came from, for diagnostics.
#[derive(Clone, Debug)]
enum Origin {
    Line(PathBuf, usize),
    Override(usize),
}

impl fmt::Display for Origin {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Origin::Line(path, line) => write!(f, "{}:{line}", path.display()),
            Origin::Override(k) => write!(f, "--set #{k}"),
        }
    }
}

#[derive(Clone, Debug)]
struct Entry {
    value: String,
    origin: Origin,
}

/// Raw settings after merging the file and overrides.
#[derive(Clone, Debug, Default)]
pub struct RawConfig {
    entries: BTreeMap<String, Entry>,
}

fn split_pair(text: &str, origin: &Origin) -> Result<(String, String)> {
    let (key, value) = text
        .split_once('=')
        .ok_or_else(|| anyhow!("{origin}: expected `key=value`, found `{text}`"))?;
    let key = key.trim();
    if !KEYS.contains(&key) {
        bail!("{origin}: unknown key `{key}`");
    }
    Ok((key.to_string(), value.trim().to_string()))
}

impl RawConfig {
    pub fn parse(text: &str, path: &Path) -> Result<Self> {
        let mut raw = RawConfig::default();
        for (i, line) in text.lines().enumerate() {
            let origin = Origin::Line(path.to_path_buf(), i + 1);
            let line = line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = split_pair(line, &origin)?;
            if let Some(prev) = raw.entries.get(&key) {
                bail!(
                    "{origin}: duplicate key `{key}` (first set at {})",
                    prev.origin
                );
            }
            raw.entries.insert(key, Entry { value, origin });
        }
        Ok(raw)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .with_context(|| format!("cannot read config {}", path.display()))?;
        Self::parse(&text, path)
    }

    pub fn apply_overrides(&mut self, overrides: &[String]) -> Result<()> {
        for (k, text) in overrides.iter().enumerate() {
            let origin = Origin::Override(k + 1);
            let (key, value) = split_pair(text, &origin)?;
            self.entries.insert(key, Entry { value, origin });
        }
        Ok(())
    }

    /// Effective settings, for echoing in the run summary.
    pub fn settings(&self) -> BTreeMap<String, String> {
        self.entries
            .iter()
            .map(|(k, e)| (k.clone(), e.value.clone()))
            .collect()
    }

    fn get(&self, key: &str) -> Option<&Entry> {
        self.entries.get(key)
    }

    fn parsed<T: FromStr>(&self, key: &str) -> Result<Option<T>>
    where
        T::Err: fmt::Display,
    {
        self.get(key)
            .map(|e| {
                e.value.parse::<T>().map_err(|err| {
                    anyhow!(
                        "{}: invalid value `{}` for `{key}`: {err}",
                        e.origin,
                        e.value
                    )
                })
            })
            .transpose()
    }

    fn required<T: FromStr>(&self, key: &str, context: &str) -> Result<T>
    where
        T::Err: fmt::Display,
    {
        self.parsed(key)?
            .ok_or_else(|| anyhow!("missing key `{key}` {context}"))
    }

    fn rational(&self, key: &str) -> Result<Option<Rational64>> {
        let Some(e) = self.get(key) else {
            return Ok(None);
        };
        if let Ok(q) = e.value.parse::<Rational64>() {
            return Ok(Some(q));
        }
        e.value
            .parse::<f64>()
            .ok()
            .filter(|x| x.is_finite() && *x >= 0.0)
            .and_then(Rational64::approximate_float)
            .map(Some)
            .ok_or_else(|| {
                anyhow!(
                    "{}: `{key}` must be a nonnegative rational such as 7/64, got `{}`",
                    e.origin,
                    e.value
                )
            })
    }

    /// Rejects keys that only make sense for other sources.
    fn reject_unused(&self, source: &str, allowed: &[&str]) -> Result<()> {
        for key in ["j", "m", "model", "seed", "path", "weight", "symplectic"] {
            if let Some(e) = self.get(key) {
                if !allowed.contains(&key) {
                    bail!(
                        "{}: key `{key}` does not apply to source {source}",
                        e.origin
                    );
                }
            }
        }
        Ok(())
    }
}

#[derive(Clone, Debug)]
pub struct ExperimentConfig {
    pub source: Source,
    pub limit: usize,
    pub profile: ExponentProfile,
    pub outputs: PathBuf,
    pub tasks: Vec<Task>,
    pub label: String,
    pub x_min: usize,
    pub x_max: Option<usize>,
    pub ratio: f64,
    pub fit_min: usize,
    pub settings: BTreeMap<String, String>,
}

impl ExperimentConfig {
    pub fn from_raw(raw: &RawConfig) -> Result<Self> {
        let source_name: String = raw.required(
            "source",
            "(one of delta, symk, synthetic, spinor-synthetic, spinor-ingest)",
        )?;
        let source = match source_name.as_str() {
            "delta" => {
                raw.reject_unused("delta", &[])?;
                Source::Delta
            }
            "symk" => {
                raw.reject_unused("symk", &["j"])?;
                let j: u32 = raw.required("j", "for source symk")?;
                if j == 0 {
                    bail!("`j` must be at least 1");
                }
                Source::SymK { j }
            }
            "synthetic" => {
                raw.reject_unused("synthetic", &["m", "model", "seed"])?;
                Source::Synthetic {
                    m: raw.required("m", "for source synthetic")?,
                    model: raw.parsed("model")?.unwrap_or(SynthModel::RamanujanUniform),
                    seed: raw.required("seed", "for source synthetic")?,
                }
            }
            "spinor-synthetic" => {
                raw.reject_unused("spinor-synthetic", &["seed", "symplectic"])?;
                Source::SpinorSynthetic {
                    seed: raw.required("seed", "for source spinor-synthetic")?,
                    symplectic: raw.parsed("symplectic")?.unwrap_or(false),
                }
            }
            "spinor-ingest" => {
                raw.reject_unused("spinor-ingest", &["path", "weight"])?;
                Source::SpinorIngest {
                    path: raw.required("path", "for source spinor-ingest")?,
                    weight: raw.required("weight", "for source spinor-ingest")?,
                }
            }
            other => {
                let origin = &raw.get("source").expect("present").origin;
                bail!("{origin}: unknown source `{other}`")
            }
        };

        let limit: usize = raw.required("N", "(series length)")?;
        let tasks: Vec<Task> = match raw.get("tasks") {
            None => Vec::new(),
            Some(e) => {
                let mut tasks = e
                    .value
                    .split(',')
                    .map(str::trim)
                    .filter(|t| !t.is_empty())
                    .map(|t| {
                        t.parse::<Task>()
                            .map_err(|err| anyhow!("{}: {err}", e.origin))
                    })
                    .collect::<Result<Vec<_>>>()?;
                tasks.sort();
                tasks.dedup();
                tasks
            }
        };
        if limit < 2 {
            bail!("`N` must be at least 2, got {limit}");
        }
        if limit < MIN_FIT_LIMIT {
            if let Some(t) = tasks.iter().find(|t| t.fits()) {
                bail!(
                    "task {} fits growth exponents and needs N >= {MIN_FIT_LIMIT}, got {limit}",
                    t.name()
                );
            }
        }
        if tasks.contains(&Task::RankinCheck) && matches!(source, Source::SpinorIngest { .. }) {
            bail!("task rankin-check needs Satake parameters, which ingested eigenvalues do not provide");
        }

        let epsilon: f64 = raw.parsed("epsilon")?.unwrap_or(DEFAULT_EPSILON);
        if !(epsilon > 0.0 && epsilon < 1.0) {
            bail!("`epsilon` must lie in (0, 1), got {epsilon}");
        }
        let explicit = [
            raw.rational("alpha")?,
            raw.rational("beta")?,
            raw.rational("gamma")?,
        ];
        let mut profile = match (raw.get("preset"), explicit) {
            (Some(e), [None, None, None]) => {
                preset(&e.value, epsilon).map_err(|err| anyhow!("{}: {err}", e.origin))?
            }
            (Some(e), _) => bail!(
                "{}: give either `preset` or `alpha`, `beta`, `gamma`, not both",
                e.origin
            ),
            (None, [Some(a), Some(b), Some(g)]) => {
                ExponentProfile::new("explicit", a, b, g, epsilon, "user supplied")
            }
            (None, [None, None, None]) => preset(&source.default_preset(), epsilon)?,
            (None, _) => bail!("an explicit profile needs all of `alpha`, `beta` and `gamma`"),
        };
        if let Some(r) = raw.parsed::<f64>("r")? {
            profile = profile.with_r(r);
        }
        // α + β ≥ 1 forces the threshold to at least 1, so this also covers
        // the first hypothesis of the criterion.
        if !(profile.threshold_f64() < profile.r && profile.r < 1.0) {
            let origin = raw
                .get("r")
                .map_or(String::new(), |e| format!("{}: ", e.origin));
            bail!(
                "{origin}r = {} must lie strictly between max{{alpha+beta, gamma}} = {} and 1",
                profile.r,
                profile.threshold()
            );
        }

        let ratio: f64 = raw.parsed("ratio")?.unwrap_or(DEFAULT_RATIO);
        if !(ratio > 1.0) {
            bail!("`ratio` must exceed 1, got {ratio}");
        }
        let x_min: usize = raw.parsed("x_min")?.unwrap_or(1);
        let x_max: Option<usize> = raw.parsed("x_max")?;
        if x_min == 0 || x_max.is_some_and(|x| x < x_min || x > limit) {
            bail!("window range must satisfy 1 <= x_min <= x_max <= N");
        }
        let fit_min: usize = raw.parsed("fit_min")?.unwrap_or(MIN_FIT_LIMIT.min(limit));
        if fit_min == 0 || fit_min > limit {
            bail!("`fit_min` must lie in [1, N]");
        }
        let label: String = raw
            .parsed("label")?
            .unwrap_or_else(|| source.name().to_string());
        if label.is_empty() || label.contains(['/', '\\']) {
            bail!("`label` must be a nonempty file-name component, got `{label}`");
        }

        Ok(ExperimentConfig {
            source,
            limit,
            profile,
            outputs: raw.parsed("outputs")?.unwrap_or_else(|| PathBuf::from(".")),
            tasks,
            label,
            x_min,
            x_max,
            ratio,
            fit_min,
            settings: raw.settings(),
        })
    }
}
