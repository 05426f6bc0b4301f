use std::fs::{self, File};
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use gqw_core::geometry::MetricField;
use gqw_core::lattice::LatticeSpec;
use gqw_core::oracles::{write_oracle_csv, Branch, CharacteristicCurve};
use gqw_core::output::{write_density_txt, write_pgm, write_record_csv};
use gqw_core::walk::{init_packet, PacketSpec, RecorderConfig, StepOptions, Walker};

use crate::config::{RunConfig, Scenario};
use crate::CliError;

#[derive(Debug, Clone, PartialEq)]
pub struct RunSummary {
    pub steps: u64,
    pub norm_drift: f64,
    pub files: Vec<PathBuf>,
}

pub fn metric_for(cfg: &RunConfig) -> gqw_core::Result<MetricField> {
    match cfg.scenario {
        Scenario::Flat | Scenario::FlatHybrid => Ok(MetricField::Flat),
        Scenario::Gem => Ok(MetricField::gem(cfg.g)),
        Scenario::CustomMetric => {
            let [a, b, c] = cfg.metric.as_ref().expect("validated config carries metric expressions");
            MetricField::from_expressions(a, b, c)
        }
    }
}

pub fn step_options(cfg: &RunConfig) -> StepOptions {
    let base = StepOptions {
        coin: cfg.coin_variant,
        step_time: cfg.step_time,
        path: cfg.operator_path,
        ..StepOptions::default()
    };
    match cfg.scenario {
        Scenario::FlatHybrid => base.hybrid(),
        _ => base.with_strategy(cfg.unitarize_strategy),
    }
}

fn write_file<F>(dir: &Path, name: &str, files: &mut Vec<PathBuf>, body: F) -> Result<(), CliError>
where
    F: FnOnce(&mut BufWriter<File>) -> std::io::Result<()>,
{
    let path = dir.join(name);
    let result = File::create(&path).and_then(|f| {
        let mut w = BufWriter::new(f);
        body(&mut w)?;
        w.flush()
    });
    result.map_err(|e| CliError::Io { path: path.clone(), source: e })?;
    files.push(path);
    Ok(())
}

/// Runs the configured scenario and writes its outputs to `out_dir`.
pub fn run_scenario(cfg: &RunConfig, out_dir: &Path) -> Result<RunSummary, CliError> {
    let lattice = LatticeSpec::new(cfg.n_sites, cfg.eps)?;
    let metric = metric_for(cfg)?;
    let packet = PacketSpec {
        center: cfg.packet_center,
        variance: cfg.packet_variance,
        momentum: cfg.packet_momentum,
        mix: cfg.packet_mix,
        shape: cfg.packet_shape,
    };
    let mut state = init_packet(&packet, &lattice)?;
    let recorder = RecorderConfig { snapshot_cadence: cfg.snapshot_cadence, keep_amplitudes: false, echo: cfg.echo() };
    let record = Walker::new(metric, cfg.mass, lattice, step_options(cfg)).evolve(&mut state, cfg.steps, &recorder)?;

    fs::create_dir_all(out_dir).map_err(|e| CliError::Io { path: out_dir.to_path_buf(), source: e })?;
    let mut files = Vec::new();
    write_file(out_dir, "record.csv", &mut files, |w| write_record_csv(w, &record))?;
    write_file(out_dir, "density.txt", &mut files, |w| write_density_txt(w, &record))?;
    write_file(out_dir, "density.pgm", &mut files, |w| write_pgm(w, &record))?;
    if cfg.scenario == Scenario::Gem {
        let x1_0 = cfg.packet_center * cfg.eps;
        let plus = CharacteristicCurve { branch: Branch::Plus, g: cfg.g, x1_0 };
        let minus = CharacteristicCurve { branch: Branch::Minus, ..plus };
        let times = (0..=cfg.steps).map(|j| lattice.x0(j));
        write_file(out_dir, "oracle.csv", &mut files, |w| write_oracle_csv(w, &plus, &minus, times))?;
    }
    Ok(RunSummary { steps: cfg.steps, norm_drift: record.norm_drift(), files })
}
