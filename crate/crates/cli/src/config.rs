//! Scenario configuration files.
//!
//! Plain text, `[section]` headers and `key = value` lines; `#` or `;`
//! start a comment. Dimensional values carry a unit suffix:
//!
//! ```text
//! [run]
//! scenario = dprf
//! seed = 7
//!
//! [params]
//! g = 135 ueV
//! t1f = 0.1 ns
//! ```
//!
//! Parsing never stops at the first problem; [`parse_config`] returns every
//! error it finds, each with the line and column it refers to.

use std::collections::BTreeMap;
use std::fmt;
use std::path::PathBuf;

use qdcavity::dynamics::{DriveTarget, SystemParams};
use qdcavity::units::HBAR_UEV_PS;

use crate::scenarios;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Dimension {
    /// μeV
    Energy,
    /// ps
    Time,
    /// rad
    Angle,
    Dimensionless,
}

impl Dimension {
    /// Accepted suffixes and their factor to the canonical unit.
    fn units(self) -> &'static [(&'static str, f64)] {
        match self {
            Self::Energy => &[("ueV", 1.0), ("μeV", 1.0), ("µeV", 1.0), ("meV", 1e3), ("eV", 1e6)],
            Self::Time => &[("fs", 1e-3), ("ps", 1.0), ("ns", 1e3)],
            Self::Angle => &[("rad", 1.0), ("pi", std::f64::consts::PI), ("deg", std::f64::consts::PI / 180.0)],
            Self::Dimensionless => &[("", 1.0), ("%", 0.01)],
        }
    }

    fn canonical(self) -> &'static str {
        match self {
            Self::Energy => "ueV",
            Self::Time => "ps",
            Self::Angle => "rad",
            Self::Dimensionless => "",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Bound {
    Any,
    NonNegative,
    Positive,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Kind {
    Quantity(Dimension, Bound),
    QuantityList(Dimension, Bound),
    Integer { min: u64 },
    Choice(&'static [&'static str]),
    Text,
}

struct Field {
    section: &'static str,
    key: &'static str,
    kind: Kind,
    required: bool,
}

const fn field(section: &'static str, key: &'static str, kind: Kind) -> Field {
    Field {
        section,
        key,
        kind,
        required: false,
    }
}

const fn required(section: &'static str, key: &'static str, kind: Kind) -> Field {
    Field {
        section,
        key,
        kind,
        required: true,
    }
}

use Bound::*;
use Dimension::*;

const FIELDS: &[Field] = &[
    required("run", "scenario", Kind::Text),
    required("run", "seed", Kind::Integer { min: 0 }),
    field("run", "format", Kind::Choice(&["csv", "json"])),
    field("run", "output_dir", Kind::Text),
    field("params", "two_kappa", Kind::Quantity(Energy, Positive)),
    field("params", "g", Kind::Quantity(Energy, NonNegative)),
    field("params", "gamma1_prime", Kind::Quantity(Energy, NonNegative)),
    field("params", "delta_al", Kind::Quantity(Energy, Any)),
    field("params", "delta_cl", Kind::Quantity(Energy, Any)),
    field("params", "fock_cutoff", Kind::Integer { min: 1 }),
    field("params", "t1f", Kind::Quantity(Time, Positive)),
    field("params", "t2_star", Kind::Quantity(Time, Positive)),
    field("drive", "pulse_fwhm", Kind::Quantity(Time, Positive)),
    field("drive", "area", Kind::Quantity(Angle, NonNegative)),
    field("drive", "target", Kind::Choice(&["emitter", "cavity"])),
    field("trajectories", "count", Kind::Integer { min: 1 }),
    field("trajectories", "jobs", Kind::Integer { min: 0 }),
    field("scan", "points", Kind::Integer { min: 2 }),
    field("scan", "t_end", Kind::Quantity(Time, Positive)),
    field("scan", "noise", Kind::Quantity(Dimensionless, Positive)),
    field("scan", "irf_fwhm", Kind::Quantity(Time, Positive)),
    field("scan", "lifetime", Kind::Quantity(Time, Positive)),
    field("scan", "t2", Kind::Quantity(Time, Positive)),
    field("scan", "tp_over_t1", Kind::QuantityList(Dimensionless, Positive)),
];

const SECTIONS: &[&str] = &["run", "params", "drive", "trajectories", "scan"];

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Format {
    #[default]
    Csv,
    Json,
}

impl Format {
    pub fn extension(self) -> &'static str {
        match self {
            Self::Csv => "csv",
            Self::Json => "json",
        }
    }
}

impl std::str::FromStr for Format {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "csv" => Ok(Self::Csv),
            "json" => Ok(Self::Json),
            _ => Err(format!("unknown format `{s}`, expected csv or json")),
        }
    }
}

/// System parameters in the units of the config file.
#[derive(Clone, Debug, PartialEq)]
pub struct ParamsSpec {
    pub two_kappa_uev: f64,
    pub g_uev: f64,
    pub gamma1_prime_uev: f64,
    pub delta_al_uev: f64,
    pub delta_cl_uev: f64,
    pub fock_cutoff: usize,
    pub t1f_ps: Option<f64>,
    pub t2_star_ps: Option<f64>,
}

impl Default for ParamsSpec {
    fn default() -> Self {
        Self {
            two_kappa_uev: 2510.0,
            g_uev: 135.0,
            gamma1_prime_uev: 0.68,
            delta_al_uev: 0.0,
            delta_cl_uev: 0.0,
            fock_cutoff: 4,
            t1f_ps: None,
            t2_star_ps: None,
        }
    }
}

impl ParamsSpec {
    pub fn is_device(&self) -> bool {
        let d = Self::default();
        self.two_kappa_uev == d.two_kappa_uev
            && self.g_uev == d.g_uev
            && self.gamma1_prime_uev == d.gamma1_prime_uev
            && self.delta_al_uev == 0.0
            && self.delta_cl_uev == 0.0
    }

    pub fn to_system(&self) -> Result<SystemParams<f64>, String> {
        let mut p = SystemParams::from_uev(self.two_kappa_uev, self.g_uev, self.gamma1_prime_uev);
        p.delta_al = self.delta_al_uev / HBAR_UEV_PS;
        p.delta_cl = self.delta_cl_uev / HBAR_UEV_PS;
        p.t2_star = self.t2_star_ps;
        if let Some(t) = self.t1f_ps {
            p = p.with_relaxation(t);
        }
        let p = p.with_fock_cutoff(self.fock_cutoff).map_err(|e| e.to_string())?;
        p.validate().map_err(|e| e.to_string())?;
        Ok(p)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct DriveSpec {
    /// Scenario default when absent.
    pub pulse_fwhm_ps: Option<f64>,
    /// Calibrated or exact π when absent, depending on the scenario.
    pub area_rad: Option<f64>,
    pub target: DriveTarget,
}

impl Default for DriveSpec {
    fn default() -> Self {
        Self {
            pulse_fwhm_ps: None,
            area_rad: None,
            target: DriveTarget::Emitter,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct TrajectorySpec {
    pub count: usize,
    /// 0 = all cores.
    pub jobs: usize,
}

impl Default for TrajectorySpec {
    fn default() -> Self {
        Self { count: 2000, jobs: 0 }
    }
}

/// Scenario-specific knobs; each scenario documents its defaults.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct ScanSpec {
    pub points: Option<usize>,
    pub t_end_ps: Option<f64>,
    pub noise: Option<f64>,
    pub irf_fwhm_ps: Option<f64>,
    pub lifetime_ps: Option<f64>,
    pub t2_ps: Option<f64>,
    pub tp_over_t1: Option<Vec<f64>>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ScenarioConfig {
    pub scenario: String,
    pub seed: u64,
    pub format: Format,
    pub output_dir: PathBuf,
    pub params: ParamsSpec,
    pub drive: DriveSpec,
    pub trajectories: TrajectorySpec,
    pub scan: ScanSpec,
}

impl ScenarioConfig {
    /// Defaults for `scenario`, as if the file named only it and the seed.
    pub fn defaults(scenario: &str, seed: u64) -> Self {
        Self {
            scenario: scenario.to_string(),
            seed,
            format: Format::Csv,
            output_dir: PathBuf::from("out"),
            params: ParamsSpec::default(),
            drive: DriveSpec::default(),
            trajectories: TrajectorySpec::default(),
            scan: ScanSpec::default(),
        }
    }

    /// Canonical text: every section in fixed order, canonical units,
    /// unset optional keys omitted.
    pub fn to_config_string(&self) -> String {
        let mut out = String::new();
        let mut line = |k: &str, v: String| out.push_str(&format!("{k} = {v}\n"));
        line("[run]\nscenario", self.scenario.clone());
        line("seed", self.seed.to_string());
        line("format", self.format.extension().to_string());
        line("output_dir", self.output_dir.display().to_string());
        let q = |v: f64, d: Dimension| {
            let u = d.canonical();
            if u.is_empty() {
                format!("{v:?}")
            } else {
                format!("{v:?} {u}")
            }
        };
        let p = &self.params;
        line("\n[params]\ntwo_kappa", q(p.two_kappa_uev, Energy));
        line("g", q(p.g_uev, Energy));
        line("gamma1_prime", q(p.gamma1_prime_uev, Energy));
        line("delta_al", q(p.delta_al_uev, Energy));
        line("delta_cl", q(p.delta_cl_uev, Energy));
        line("fock_cutoff", p.fock_cutoff.to_string());
        if let Some(v) = p.t1f_ps {
            line("t1f", q(v, Time));
        }
        if let Some(v) = p.t2_star_ps {
            line("t2_star", q(v, Time));
        }
        let d = &self.drive;
        let target = match d.target {
            DriveTarget::Emitter => "emitter",
            DriveTarget::Cavity => "cavity",
        };
        line("\n[drive]\ntarget", target.to_string());
        if let Some(v) = d.pulse_fwhm_ps {
            line("pulse_fwhm", q(v, Time));
        }
        if let Some(v) = d.area_rad {
            line("area", q(v, Angle));
        }
        line("\n[trajectories]\ncount", self.trajectories.count.to_string());
        line("jobs", self.trajectories.jobs.to_string());
        let s = &self.scan;
        let mut scan = Vec::new();
        if let Some(v) = s.points {
            scan.push(("points", v.to_string()));
        }
        for (k, v) in [
            ("t_end", s.t_end_ps),
            ("irf_fwhm", s.irf_fwhm_ps),
            ("lifetime", s.lifetime_ps),
            ("t2", s.t2_ps),
        ] {
            if let Some(v) = v {
                scan.push((k, q(v, Time)));
            }
        }
        if let Some(v) = s.noise {
            scan.push(("noise", q(v, Dimensionless)));
        }
        if let Some(v) = &s.tp_over_t1 {
            scan.push(("tp_over_t1", v.iter().map(|x| format!("{x:?}")).collect::<Vec<_>>().join(", ")));
        }
        if !scan.is_empty() {
            out.push_str("\n[scan]\n");
            for (k, v) in scan {
                out.push_str(&format!("{k} = {v}\n"));
            }
        }
        out
    }
}

/// One problem in a config file. Line and column are 1-based; a missing
/// field points just past the end of the file.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConfigError {
    pub line: usize,
    pub column: usize,
    pub message: String,
}

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}: {}", self.line, self.column, self.message)
    }
}

#[derive(Clone, Debug, PartialEq)]
enum Value {
    Number(f64),
    List(Vec<f64>),
    Integer(u64),
    Text(String),
}

struct Entry {
    value: Value,
    line: usize,
    column: usize,
}

fn parse_quantity(raw: &str, dim: Dimension, bound: Bound) -> Result<f64, String> {
    let raw = raw.trim();
    let split = raw
        .find(|c: char| !(c.is_ascii_digit() || "+-.eE".contains(c)))
        .unwrap_or(raw.len());
    // "1e" followed by a unit starting with e (eV) must not eat the e
    let (mut num, mut unit) = raw.split_at(split);
    while num.ends_with(['e', 'E']) && num.parse::<f64>().is_err() {
        let cut = num.len() - 1;
        (num, unit) = raw.split_at(cut);
    }
    let unit = unit.trim();
    let value: f64 = num
        .parse()
        .map_err(|_| format!("`{raw}` is not a number followed by a unit"))?;
    let factor = dim
        .units()
        .iter()
        .find(|(u, _)| *u == unit)
        .map(|(_, f)| *f)
        .ok_or_else(|| {
            let names: Vec<_> = dim.units().iter().map(|(u, _)| if u.is_empty() { "none" } else { u }).collect();
            if unit.is_empty() {
                format!("missing unit, expected one of {}", names.join(", "))
            } else {
                format!("unit `{unit}` is not allowed here, expected one of {}", names.join(", "))
            }
        })?;
    let v = value * factor;
    if !v.is_finite() {
        return Err(format!("`{raw}` is not finite"));
    }
    match bound {
        Positive if v <= 0.0 => Err(format!("must be positive, got {raw}")),
        NonNegative if v < 0.0 => Err(format!("must not be negative, got {raw}")),
        _ => Ok(v),
    }
}

fn parse_value(raw: &str, kind: Kind) -> Result<Value, String> {
    match kind {
        Kind::Quantity(d, b) => parse_quantity(raw, d, b).map(Value::Number),
        Kind::QuantityList(d, b) => {
            let items: Result<Vec<f64>, String> = raw.split(',').map(|s| parse_quantity(s, d, b)).collect();
            let items = items?;
            if items.is_empty() {
                return Err("empty list".into());
            }
            Ok(Value::List(items))
        }
        Kind::Integer { min } => {
            let v: u64 = raw
                .parse()
                .map_err(|_| format!("`{raw}` is not a non-negative integer"))?;
            if v < min {
                return Err(format!("must be at least {min}, got {v}"));
            }
            Ok(Value::Integer(v))
        }
        Kind::Choice(options) => {
            if options.contains(&raw) {
                Ok(Value::Text(raw.to_string()))
            } else {
                Err(format!("`{raw}` is not one of {}", options.join(", ")))
            }
        }
        Kind::Text => {
            if raw.is_empty() {
                Err("empty value".into())
            } else {
                Ok(Value::Text(raw.to_string()))
            }
        }
    }
}

/// Parses and validates a config file, collecting every error.
pub fn parse_config(text: &str) -> Result<ScenarioConfig, Vec<ConfigError>> {
    let mut errors = Vec::new();
    let mut entries: BTreeMap<(&'static str, &'static str), Entry> = BTreeMap::new();
    // every key that appeared, valid or not, with its line
    let mut seen: BTreeMap<(&'static str, &'static str), usize> = BTreeMap::new();
    let mut section: Option<&'static str> = Some("run");
    let mut last_line = 0;

    for (i, raw_line) in text.lines().enumerate() {
        let line_no = i + 1;
        last_line = line_no;
        let content = match raw_line.find(['#', ';']) {
            Some(p) => &raw_line[..p],
            None => raw_line,
        };
        let indent = content.len() - content.trim_start().len();
        let content = content.trim();
        if content.is_empty() {
            continue;
        }
        let err = |column: usize, message: String| ConfigError {
            line: line_no,
            column,
            message,
        };
        if let Some(rest) = content.strip_prefix('[') {
            let Some(name) = rest.strip_suffix(']') else {
                errors.push(err(indent + 1, "unterminated section header".into()));
                section = None;
                continue;
            };
            let name = name.trim();
            section = SECTIONS.iter().copied().find(|s| *s == name);
            if section.is_none() {
                errors.push(err(indent + 1, format!("unknown section `[{name}]`")));
            }
            continue;
        }
        let Some(eq) = content.find('=') else {
            errors.push(err(indent + 1, "expected `key = value`".into()));
            continue;
        };
        // keys in an unknown section were already reported with the header
        let Some(sec) = section else { continue };
        let key = content[..eq].trim();
        let Some(spec) = FIELDS.iter().find(|f| f.section == sec && f.key == key) else {
            errors.push(err(indent + 1, format!("unknown key `{key}` in [{sec}]")));
            continue;
        };
        let after = &content[eq + 1..];
        let value_col = indent + eq + 2 + (after.len() - after.trim_start().len());
        let raw = after.trim();
        if let Some(prev) = seen.insert((sec, spec.key), line_no) {
            seen.insert((sec, spec.key), prev);
            errors.push(err(indent + 1, format!("`{key}` already set on line {prev}")));
            continue;
        }
        match parse_value(raw, spec.kind) {
            Ok(value) => {
                entries.insert(
                    (sec, spec.key),
                    Entry {
                        value,
                        line: line_no,
                        column: value_col,
                    },
                );
            }
            Err(m) => errors.push(err(value_col, format!("[{sec}] {key}: {m}"))),
        }
    }

    for f in FIELDS.iter().filter(|f| f.required) {
        if !seen.contains_key(&(f.section, f.key)) {
            errors.push(ConfigError {
                line: last_line + 1,
                column: 1,
                message: format!("missing required field `{}` in [{}]", f.key, f.section),
            });
        }
    }

    let num = |s, k| match entries.get(&(s, k)).map(|e| &e.value) {
        Some(Value::Number(v)) => Some(*v),
        _ => None,
    };
    let int = |s, k| match entries.get(&(s, k)).map(|e| &e.value) {
        Some(Value::Integer(v)) => Some(*v),
        _ => None,
    };
    let text_of = |s, k| match entries.get(&(s, k)).map(|e| &e.value) {
        Some(Value::Text(v)) => Some(v.clone()),
        _ => None,
    };

    if let (Some(name), Some(e)) = (text_of("run", "scenario"), entries.get(&("run", "scenario"))) {
        if scenarios::find(&name).is_none() {
            errors.push(ConfigError {
                line: e.line,
                column: e.column,
                message: format!(
                    "unknown scenario `{name}`; registered: {}",
                    scenarios::REGISTRY.iter().map(|s| s.name).collect::<Vec<_>>().join(", ")
                ),
            });
        }
    }

    let d = ParamsSpec::default();
    let params = ParamsSpec {
        two_kappa_uev: num("params", "two_kappa").unwrap_or(d.two_kappa_uev),
        g_uev: num("params", "g").unwrap_or(d.g_uev),
        gamma1_prime_uev: num("params", "gamma1_prime").unwrap_or(d.gamma1_prime_uev),
        delta_al_uev: num("params", "delta_al").unwrap_or(0.0),
        delta_cl_uev: num("params", "delta_cl").unwrap_or(0.0),
        fock_cutoff: int("params", "fock_cutoff").map_or(d.fock_cutoff, |v| v as usize),
        t1f_ps: num("params", "t1f"),
        t2_star_ps: num("params", "t2_star"),
    };
    let target = match text_of("drive", "target").as_deref() {
        Some("cavity") => DriveTarget::Cavity,
        _ => DriveTarget::Emitter,
    };
    if target == DriveTarget::Cavity && params.g_uev == 0.0 {
        let e = &entries[&("drive", "target")];
        errors.push(ConfigError {
            line: e.line,
            column: e.column,
            message: "[drive] target: a cavity drive needs g > 0".into(),
        });
    }
    let tp_over_t1 = match entries.get(&("scan", "tp_over_t1")).map(|e| &e.value) {
        Some(Value::List(v)) => Some(v.clone()),
        _ => None,
    };

    if !errors.is_empty() {
        errors.sort_by_key(|e| (e.line, e.column));
        return Err(errors);
    }
    Ok(ScenarioConfig {
        scenario: text_of("run", "scenario").unwrap_or_default(),
        seed: int("run", "seed").unwrap_or(0),
        format: text_of("run", "format").map_or(Format::Csv, |f| f.parse().expect("validated")),
        output_dir: text_of("run", "output_dir").map_or_else(|| PathBuf::from("out"), PathBuf::from),
        params,
        drive: DriveSpec {
            pulse_fwhm_ps: num("drive", "pulse_fwhm"),
            area_rad: num("drive", "area"),
            target,
        },
        trajectories: TrajectorySpec {
            count: int("trajectories", "count").map_or(2000, |v| v as usize),
            jobs: int("trajectories", "jobs").map_or(0, |v| v as usize),
        },
        scan: ScanSpec {
            points: int("scan", "points").map(|v| v as usize),
            t_end_ps: num("scan", "t_end"),
            noise: num("scan", "noise"),
            irf_fwhm_ps: num("scan", "irf_fwhm"),
            lifetime_ps: num("scan", "lifetime"),
            t2_ps: num("scan", "t2"),
            tp_over_t1,
        },
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn units_convert() {
        assert_eq!(parse_quantity("2.51 meV", Energy, Positive).unwrap(), 2510.0);
        assert_eq!(parse_quantity("1e-3eV", Energy, Positive).unwrap(), 1000.0);
        assert_eq!(parse_quantity("0.1 ns", Time, Positive).unwrap(), 100.0);
        assert_eq!(parse_quantity("2%", Dimensionless, Positive).unwrap(), 0.02);
        assert!((parse_quantity("1 pi", Angle, Any).unwrap() - std::f64::consts::PI).abs() < 1e-15);
        assert!(parse_quantity("13", Time, Positive).unwrap_err().contains("missing unit"));
        assert!(parse_quantity("13 ueV", Time, Positive).unwrap_err().contains("not allowed"));
    }

    #[test]
    fn minimal_file() {
        let c = parse_config("scenario = budget\nseed = 3\n").unwrap();
        assert_eq!(c, ScenarioConfig::defaults("budget", 3));
    }

    #[test]
    fn errors_carry_positions() {
        let errs = parse_config("[run]\nscenario = dprf\nseed = x\n[drive]\npulse_fwhm = 13 ueV\n").unwrap_err();
        assert_eq!(errs.len(), 2);
        assert_eq!((errs[0].line, errs[0].column), (3, 8));
        assert_eq!((errs[1].line, errs[1].column), (5, 14));
    }
}
