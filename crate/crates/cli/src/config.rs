//! `key=value` run files. One key per line; `#` starts a comment.

use std::collections::HashSet;
use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use gqw_core::geometry::expr::Expr;
use gqw_core::lattice::{CoinVariant, OperatorPath, Strategy};
use gqw_core::walk::{PacketShape, StepTime};
use gqw_core::Complex64;
use thiserror::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Scenario {
    Flat,
    FlatHybrid,
    Gem,
    CustomMetric,
}

impl FromStr for Scenario {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "flat" => Ok(Scenario::Flat),
            "flat-hybrid" => Ok(Scenario::FlatHybrid),
            "gem" => Ok(Scenario::Gem),
            "custom-metric" => Ok(Scenario::CustomMetric),
            _ => Err(format!("unknown scenario '{s}' (flat, flat-hybrid, gem, custom-metric)")),
        }
    }
}

impl fmt::Display for Scenario {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Scenario::Flat => "flat",
            Scenario::FlatHybrid => "flat-hybrid",
            Scenario::Gem => "gem",
            Scenario::CustomMetric => "custom-metric",
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub scenario: Scenario,
    pub n_sites: usize,
    pub eps: f64,
    pub steps: u64,
    pub mass: f64,
    pub g: f64,
    pub packet_center: f64,
    pub packet_variance: f64,
    pub packet_momentum: f64,
    pub packet_mix: (Complex64, Complex64),
    pub packet_shape: PacketShape,
    pub coin_variant: CoinVariant,
    pub unitarize_strategy: Strategy,
    pub step_time: StepTime,
    pub operator_path: OperatorPath,
    pub snapshot_cadence: u64,
    pub output_dir: PathBuf,
    pub rng_seed: u64,
    /// Covariant components for `custom-metric`, as expressions in `x0` and `x1`.
    pub metric: Option<[String; 3]>,
}

#[derive(Debug, Error, PartialEq)]
pub enum ConfigError {
    #[error("line {line}: {key}: {message}")]
    Parse { line: usize, key: String, message: String },
    #[error("invalid configuration:\n  {}", .0.join("\n  "))]
    Validation(Vec<String>),
}

const KEYS: &[&str] = &[
    "scenario",
    "nSites",
    "eps",
    "steps",
    "mass",
    "g",
    "packetCenter",
    "packetVariance",
    "packetMomentum",
    "packetMix",
    "packetShape",
    "coinVariant",
    "unitarizeStrategy",
    "stepTime",
    "operatorPath",
    "snapshotCadence",
    "outputDir",
    "rngSeed",
    "metricG00",
    "metricG01",
    "metricG11",
];

#[derive(Default)]
struct Raw {
    scenario: Option<Scenario>,
    n_sites: Option<i64>,
    eps: Option<f64>,
    steps: Option<i64>,
    mass: Option<f64>,
    g: Option<f64>,
    center: Option<f64>,
    variance: Option<f64>,
    momentum: Option<f64>,
    mix: Option<(Complex64, Complex64)>,
    shape: Option<PacketShape>,
    coin: Option<CoinVariant>,
    strategy: Option<Strategy>,
    step_time: Option<StepTime>,
    path: Option<OperatorPath>,
    cadence: Option<i64>,
    output_dir: Option<PathBuf>,
    seed: Option<u64>,
    g00: Option<String>,
    g01: Option<String>,
    g11: Option<String>,
}

fn parse_mix(v: &str) -> Result<(Complex64, Complex64), String> {
    let nums: Vec<f64> = v
        .split(',')
        .map(|s| s.trim().parse::<f64>().map_err(|e| format!("'{}': {e}", s.trim())))
        .collect::<Result<_, _>>()?;
    match nums[..] {
        [m, p] => Ok((Complex64::new(m, 0.0), Complex64::new(p, 0.0))),
        [mr, mi, pr, pi] => Ok((Complex64::new(mr, mi), Complex64::new(pr, pi))),
        _ => Err(format!("expected 2 or 4 comma-separated numbers, got {}", nums.len())),
    }
}

fn parse_shape(v: &str) -> Result<PacketShape, String> {
    match v {
        "gaussian" => Ok(PacketShape::Gaussian),
        "delta" => Ok(PacketShape::Delta),
        _ => Err(format!("unknown packet shape '{v}' (gaussian, delta)")),
    }
}

fn parse_path(v: &str) -> Result<OperatorPath, String> {
    match v {
        "auto" => Ok(OperatorPath::Auto),
        "dense" => Ok(OperatorPath::Dense),
        _ => Err(format!("unknown operator path '{v}' (auto, dense)")),
    }
}

fn num<T: FromStr>(v: &str) -> Result<T, String>
where
    T::Err: fmt::Display,
{
    v.parse::<T>().map_err(|e| format!("'{v}': {e}"))
}

/// Parses and validates a run file, filling defaults.
pub fn parse_config(text: &str) -> Result<RunConfig, ConfigError> {
    let mut raw = Raw::default();
    let mut seen = HashSet::new();
    for (i, line) in text.lines().enumerate() {
        let line_no = i + 1;
        let content = line.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let Some((key, value)) = content.split_once('=') else {
            return Err(ConfigError::Parse { line: line_no, key: content.to_string(), message: "expected key=value".into() });
        };
        let (key, value) = (key.trim(), value.trim());
        let err = |message: String| ConfigError::Parse { line: line_no, key: key.to_string(), message };
        if !KEYS.contains(&key) {
            return Err(err("unknown key".into()));
        }
        if !seen.insert(key.to_string()) {
            return Err(err("duplicate key".into()));
        }
        match key {
            "scenario" => raw.scenario = Some(value.parse().map_err(err)?),
            "nSites" => raw.n_sites = Some(num(value).map_err(err)?),
            "eps" => raw.eps = Some(num(value).map_err(err)?),
            "steps" => raw.steps = Some(num(value).map_err(err)?),
            "mass" => raw.mass = Some(num(value).map_err(err)?),
            "g" => raw.g = Some(num(value).map_err(err)?),
            "packetCenter" => raw.center = Some(num(value).map_err(err)?),
            "packetVariance" => raw.variance = Some(num(value).map_err(err)?),
            "packetMomentum" => raw.momentum = Some(num(value).map_err(err)?),
            "packetMix" => raw.mix = Some(parse_mix(value).map_err(err)?),
            "packetShape" => raw.shape = Some(parse_shape(value).map_err(err)?),
            "coinVariant" => raw.coin = Some(value.parse().map_err(err)?),
            "unitarizeStrategy" => raw.strategy = Some(value.parse().map_err(err)?),
            "stepTime" => raw.step_time = Some(value.parse().map_err(err)?),
            "operatorPath" => raw.path = Some(parse_path(value).map_err(err)?),
            "snapshotCadence" => raw.cadence = Some(num(value).map_err(err)?),
            "outputDir" => raw.output_dir = Some(PathBuf::from(value)),
            "rngSeed" => raw.seed = Some(num(value).map_err(err)?),
            "metricG00" => raw.g00 = Some(value.to_string()),
            "metricG01" => raw.g01 = Some(value.to_string()),
            "metricG11" => raw.g11 = Some(value.to_string()),
            _ => unreachable!("key list and match arms agree"),
        }
    }
    validate(raw)
}

fn validate(raw: Raw) -> Result<RunConfig, ConfigError> {
    let mut v = Vec::new();
    let Some(scenario) = raw.scenario else {
        return Err(ConfigError::Validation(vec!["scenario is required".into()]));
    };
    let n_sites = raw.n_sites.unwrap_or(2048);
    if n_sites < 4 {
        v.push(format!("nSites = {n_sites} must be at least 4"));
    }
    let n = n_sites.max(4) as usize;
    let steps = raw.steps.unwrap_or(100);
    if steps < 0 {
        v.push(format!("steps = {steps} must be non-negative"));
    }
    let cadence = raw.cadence.unwrap_or(1);
    if cadence < 1 {
        v.push(format!("snapshotCadence = {cadence} must be at least 1"));
    }
    let eps = raw.eps.unwrap_or(1.0);
    if !(eps.is_finite() && eps > 0.0) {
        v.push(format!("eps = {eps} must be finite and positive"));
    }
    let mass = raw.mass.unwrap_or(0.0);
    let g = raw.g.unwrap_or(if scenario == Scenario::Gem { -0.2 } else { 0.0 });
    let center = raw.center.unwrap_or(if scenario == Scenario::Gem { n as f64 / 4.0 } else { n as f64 / 2.0 });
    let variance = raw.variance.unwrap_or(300.0);
    let momentum = raw.momentum.unwrap_or(0.0);
    for (name, x) in [("mass", mass), ("g", g), ("packetCenter", center), ("packetMomentum", momentum)] {
        if !x.is_finite() {
            v.push(format!("{name} = {x} must be finite"));
        }
    }
    let mix = raw.mix.unwrap_or((Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0)));
    if [mix.0, mix.1].iter().any(|z| !z.is_finite()) || mix.0.norm_sqr() + mix.1.norm_sqr() == 0.0 {
        v.push("packetMix must be finite and not all zero".into());
    }
    let shape = raw.shape.unwrap_or(PacketShape::Gaussian);
    if shape == PacketShape::Gaussian {
        if !(variance.is_finite() && variance > 0.0) {
            v.push(format!("packetVariance = {variance} must be finite and positive"));
        } else if 3.0 * variance.sqrt() >= n as f64 / 2.0 {
            v.push(format!("packet too wide: 3σ = {:.3} must be below nSites/2 = {}", 3.0 * variance.sqrt(), n as f64 / 2.0));
        }
    }
    let strategy = raw.strategy.unwrap_or_default();
    if scenario == Scenario::FlatHybrid && raw.strategy.is_some() {
        v.push("unitarizeStrategy cannot be set for flat-hybrid, which fixes the strategy per component".into());
    }
    let metric = match (&raw.g00, &raw.g01, &raw.g11) {
        (Some(a), Some(b), Some(c)) => Some([a.clone(), b.clone(), c.clone()]),
        (None, None, None) => None,
        _ => {
            v.push("metricG00, metricG01 and metricG11 must be given together".into());
            None
        }
    };
    match (&metric, scenario) {
        (None, Scenario::CustomMetric) if raw.g00.is_none() && raw.g01.is_none() && raw.g11.is_none() => {
            v.push("custom-metric requires metricG00, metricG01 and metricG11".into());
        }
        (Some(_), s) if s != Scenario::CustomMetric => {
            v.push(format!("metric expressions are only used by custom-metric, not {s}"));
        }
        _ => {}
    }
    if let Some(exprs) = &metric {
        for (name, e) in ["metricG00", "metricG01", "metricG11"].iter().zip(exprs) {
            if let Err(err) = Expr::parse(e) {
                v.push(format!("{name}: {err}"));
            }
        }
    }
    if !v.is_empty() {
        return Err(ConfigError::Validation(v));
    }
    Ok(RunConfig {
        scenario,
        n_sites: n,
        eps,
        steps: steps as u64,
        mass,
        g,
        packet_center: center,
        packet_variance: variance,
        packet_momentum: momentum,
        packet_mix: mix,
        packet_shape: shape,
        coin_variant: raw.coin.unwrap_or_default(),
        unitarize_strategy: strategy,
        step_time: raw.step_time.unwrap_or_default(),
        operator_path: raw.path.unwrap_or_default(),
        snapshot_cadence: cadence as u64,
        output_dir: raw.output_dir.unwrap_or_else(|| PathBuf::from("out")),
        rng_seed: raw.seed.unwrap_or(0),
        metric,
    })
}

impl RunConfig {
    /// Settings echoed into the record header.
    pub fn echo(&self) -> Vec<(String, String)> {
        let mut out = vec![
            ("scenario".to_string(), self.scenario.to_string()),
            ("mass".to_string(), self.mass.to_string()),
            ("g".to_string(), self.g.to_string()),
            ("packetCenter".to_string(), self.packet_center.to_string()),
            ("packetVariance".to_string(), self.packet_variance.to_string()),
            ("packetMomentum".to_string(), self.packet_momentum.to_string()),
            ("coinVariant".to_string(), self.coin_variant.to_string()),
            ("unitarizeStrategy".to_string(), self.unitarize_strategy.to_string()),
            ("stepTime".to_string(), self.step_time.to_string()),
        ];
        if let Some([a, b, c]) = &self.metric {
            out.push(("metric".to_string(), format!("{a}; {b}; {c}")));
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn minimal_gem_gets_gem_defaults() {
        let c = parse_config("scenario=gem\n").unwrap();
        assert_eq!(c.g, -0.2);
        assert_eq!(c.packet_variance, 300.0);
        assert_eq!(c.eps, 1.0);
        assert_eq!(c.coin_variant, CoinVariant::DeterminantOne);
        assert_eq!(c.unitarize_strategy, Strategy::Auto);
        assert_eq!(c.packet_center, 512.0);
    }

    #[test]
    fn comments_and_whitespace() {
        let c = parse_config("# run\n scenario = flat  # inline\n\nnSites=64\npacketVariance=16\n").unwrap();
        assert_eq!(c.scenario, Scenario::Flat);
        assert_eq!(c.n_sites, 64);
        assert_eq!(c.packet_center, 32.0);
    }

    #[test]
    fn negative_steps_is_a_validation_error() {
        assert!(matches!(parse_config("scenario=flat\nsteps=-5\n"), Err(ConfigError::Validation(_))));
    }

    #[test]
    fn custom_metric_needs_expressions() {
        let e = parse_config("scenario=custom-metric\n").unwrap_err();
        assert!(matches!(e, ConfigError::Validation(ref v) if v[0].contains("requires")));
        let ok = parse_config("scenario=custom-metric\nmetricG00=1\nmetricG01=0.1*x0\nmetricG11=-1\n").unwrap();
        assert!(ok.metric.is_some());
        let bad = parse_config("scenario=custom-metric\nmetricG00=1+\nmetricG01=0\nmetricG11=-1\n").unwrap_err();
        assert!(matches!(bad, ConfigError::Validation(ref v) if v[0].starts_with("metricG00")));
    }

    #[test]
    fn all_violations_are_listed() {
        let Err(ConfigError::Validation(v)) = parse_config("scenario=flat\nsteps=-1\neps=0\nsnapshotCadence=0\n") else {
            panic!("expected validation error");
        };
        assert_eq!(v.len(), 3);
    }

    #[test]
    fn parse_errors_carry_line_and_key() {
        assert_eq!(
            parse_config("scenario=flat\nnSites=abc\n").unwrap_err(),
            ConfigError::Parse { line: 2, key: "nSites".into(), message: "'abc': invalid digit found in string".into() }
        );
        assert!(matches!(parse_config("scenario=flat\nbogus=1\n"), Err(ConfigError::Parse { line: 2, .. })));
        assert!(matches!(parse_config("scenario=flat\nscenario=gem\n"), Err(ConfigError::Parse { line: 2, .. })));
        assert!(matches!(parse_config("scenario\n"), Err(ConfigError::Parse { line: 1, .. })));
    }

    #[test]
    fn mix_forms() {
        let c = parse_config("scenario=flat\npacketMix=0.6,0.8\n").unwrap();
        assert_eq!(c.packet_mix, (Complex64::new(0.6, 0.0), Complex64::new(0.8, 0.0)));
        let c = parse_config("scenario=flat\npacketMix=0,0.6,0.8,0\n").unwrap();
        assert_eq!(c.packet_mix, (Complex64::new(0.0, 0.6), Complex64::new(0.8, 0.0)));
        assert!(parse_config("scenario=flat\npacketMix=1,2,3\n").is_err());
    }

    #[test]
    fn packet_must_fit() {
        assert!(matches!(parse_config("scenario=flat\nnSites=64\n"), Err(ConfigError::Validation(_))));
        assert!(parse_config("scenario=flat\nnSites=64\npacketShape=delta\n").is_ok());
    }
}
