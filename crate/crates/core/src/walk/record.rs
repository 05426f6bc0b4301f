use num_complex::Complex64;

#[derive(Debug, Clone, Default, PartialEq)]
pub struct RecorderConfig {
    /// Density snapshots are taken every this many steps, starting with the initial state.
    pub snapshot_cadence: u64,
    /// Also keep full amplitudes at the snapshot cadence.
    pub keep_amplitudes: bool,
    /// Key/value pairs echoed into the record metadata.
    pub echo: Vec<(String, String)>,
}

impl RecorderConfig {
    pub fn every(cadence: u64) -> Self {
        RecorderConfig { snapshot_cadence: cadence, ..Default::default() }
    }

    pub fn with_amplitudes(self) -> Self {
        RecorderConfig { keep_amplitudes: true, ..self }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunMeta {
    pub n_sites: usize,
    pub eps: f64,
    pub start_j: u64,
    pub n_steps: u64,
    pub snapshot_cadence: u64,
    pub echo: Vec<(String, String)>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RecordRow {
    pub j: u64,
    pub norm: f64,
    /// Unwrapped `⟨x1⟩` of `Φ⁻`; `None` while the component is empty.
    pub centroid_minus: Option<f64>,
    pub centroid_plus: Option<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DensitySnapshot {
    pub j: u64,
    pub density: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct AmplitudeFrame {
    pub j: u64,
    pub minus: Vec<Complex64>,
    pub plus: Vec<Complex64>,
}

/// Lattice amplitudes at a sequence of steps, as produced by the walk or by a reference evolution.
#[derive(Debug, Clone, PartialEq)]
pub struct AmplitudeTrace {
    pub n_sites: usize,
    pub eps: f64,
    pub frames: Vec<AmplitudeFrame>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunRecord {
    pub meta: RunMeta,
    /// One row per step, including the initial state.
    pub rows: Vec<RecordRow>,
    pub snapshots: Vec<DensitySnapshot>,
    pub amplitudes: Option<AmplitudeTrace>,
}

impl RunRecord {
    /// Largest `|norm − norm₀|` over the run.
    pub fn norm_drift(&self) -> f64 {
        let Some(first) = self.rows.first() else { return 0.0 };
        self.rows.iter().map(|r| (r.norm - first.norm).abs()).fold(0.0, f64::max)
    }

    pub fn max_density(&self) -> f64 {
        self.snapshots.iter().flat_map(|s| s.density.iter().copied()).fold(0.0, f64::max)
    }
}
