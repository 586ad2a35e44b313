//! Declarative sweep runner and rate-region comparison.
//!
//! A [`SweepSpec`] names one swept parameter, a value list, a scheme set
//! and Monte Carlo budgets; [`run_sweep`] evaluates the closed-form bound
//! and/or the simulation at every grid point and emits an ordered,
//! deterministic [`ResultTable`]. [`compare_ldm_vs_tdmfdm`] produces the
//! operating-point pairs for the power-split versus time/bandwidth-split
//! rate-region comparison.
//!
//! Grid points are evaluated in grid order; each point's Monte Carlo work
//! runs on its own RNG stream block, so tables are reproducible for any
//! worker count.

use std::hash::Hasher;

use crate::capacity::{self, SeBreakdown};
use crate::model::{Layer, Scheme, SystemConfig, TdmFdmShare};
use crate::montecarlo::{self, RngSpec, SinrSource};
use crate::sinr;
use crate::{Error, Result};

/// The one parameter a sweep varies.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SweepParam {
    NRm,
    NRf,
    SnrMlDb,
    SnrFlDb,
    InjectionLevelDb,
}

impl SweepParam {
    pub const ALL: [SweepParam; 5] = [
        SweepParam::NRm,
        SweepParam::NRf,
        SweepParam::SnrMlDb,
        SweepParam::SnrFlDb,
        SweepParam::InjectionLevelDb,
    ];

    pub fn name(self) -> &'static str {
        match self {
            SweepParam::NRm => "nrm",
            SweepParam::NRf => "nrf",
            SweepParam::SnrMlDb => "snr-ml-db",
            SweepParam::SnrFlDb => "snr-fl-db",
            SweepParam::InjectionLevelDb => "il-db",
        }
    }

    pub fn parse(name: &str) -> Result<Self> {
        SweepParam::ALL
            .into_iter()
            .find(|p| p.name() == name)
            .ok_or_else(|| {
                Error::invalid(
                    "sweep",
                    format!("unknown sweep parameter `{name}` (expected nrm, nrf, snr-ml-db, snr-fl-db or il-db)"),
                )
            })
    }

    /// Applies one swept value to the base configuration.
    pub fn apply(self, base: &SystemConfig, value: f64) -> Result<SystemConfig> {
        let mut cfg = *base;
        match self {
            SweepParam::NRm => cfg.n_rm = count_value(value, "nrm")?,
            SweepParam::NRf => cfg.n_rf = count_value(value, "nrf")?,
            SweepParam::SnrMlDb => cfg.snr_ml_db = value,
            SweepParam::SnrFlDb => cfg.snr_fl_db = value,
            SweepParam::InjectionLevelDb => cfg.injection_level_db = value,
        }
        cfg.validate()?;
        Ok(cfg)
    }
}

fn count_value(value: f64, field: &'static str) -> Result<usize> {
    if value.fract() != 0.0 || value < 1.0 || value > 4096.0 {
        return Err(Error::invalid(
            field,
            format!("antenna counts must be positive integers, got {value}"),
        ));
    }
    Ok(value as usize)
}

/// What a sweep computes per grid point.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    Bound,
    Simulate,
    Both,
}

impl Mode {
    pub fn parse(name: &str) -> Result<Self> {
        match name {
            "bound" => Ok(Mode::Bound),
            "simulate" => Ok(Mode::Simulate),
            "both" => Ok(Mode::Both),
            other => Err(Error::invalid(
                "mode",
                format!("unknown mode `{other}` (expected bound, simulate or both)"),
            )),
        }
    }

    fn wants_bound(self) -> bool {
        matches!(self, Mode::Bound | Mode::Both)
    }

    fn wants_simulation(self) -> bool {
        matches!(self, Mode::Simulate | Mode::Both)
    }
}

/// Row tag distinguishing closed-form and simulated values.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RowMode {
    Bound,
    Simulate,
}

impl RowMode {
    pub fn as_str(self) -> &'static str {
        match self {
            RowMode::Bound => "bound",
            RowMode::Simulate => "simulate",
        }
    }
}

/// Monte Carlo budgets for the simulate mode.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct McBudgets {
    /// Channel trials per moment estimation.
    pub trials: u64,
    /// Samples per spatial-MI estimate.
    pub mi_samples: u64,
}

impl Default for McBudgets {
    fn default() -> Self {
        McBudgets {
            trials: 100_000,
            mi_samples: 1_000_000,
        }
    }
}

/// How simulate-mode rows obtain their SINR vectors.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SinrSourceKind {
    ClosedForm,
    Empirical,
}

impl SinrSourceKind {
    pub fn parse(name: &str) -> Result<Self> {
        match name {
            "closed-form" => Ok(SinrSourceKind::ClosedForm),
            "empirical" => Ok(SinrSourceKind::Empirical),
            other => Err(Error::invalid(
                "sinr-source",
                format!("unknown sinr source `{other}` (expected closed-form or empirical)"),
            )),
        }
    }

    fn to_source(self, budgets: &McBudgets) -> SinrSource {
        match self {
            SinrSourceKind::ClosedForm => SinrSource::ClosedForm,
            SinrSourceKind::Empirical => SinrSource::Empirical {
                trials: budgets.trials,
            },
        }
    }
}

/// One declarative sweep: vary `param` over `values` for every scheme in
/// `schemes`, holding the rest of `base` fixed.
#[derive(Debug, Clone)]
pub struct SweepSpec {
    pub schemes: Vec<Scheme>,
    pub param: SweepParam,
    pub values: Vec<f64>,
    pub base: SystemConfig,
    pub mode: Mode,
    pub rng: RngSpec,
    pub budgets: McBudgets,
    pub sinr_source: SinrSourceKind,
    /// Resource shares for `sm-tdm-fdm` rows; ignored by other schemes.
    pub share: TdmFdmShare,
}

impl SweepSpec {
    pub fn validate(&self) -> Result<()> {
        if self.schemes.is_empty() {
            return Err(Error::invalid("scheme", "scheme set must be nonempty"));
        }
        if self.values.is_empty() {
            return Err(Error::invalid("values", "swept value list must be nonempty"));
        }
        strictly_monotone(&self.values, "values")?;
        self.share.validate()?;
        if self.mode.wants_simulation() {
            if self.budgets.mi_samples < 10_000 {
                return Err(Error::invalid("mi-samples", "need at least 1e4 samples"));
            }
            if self.budgets.trials < 1000 {
                return Err(Error::invalid("trials", "need at least 1000 trials"));
            }
        }
        for v in &self.values {
            self.param.apply(&self.base, *v)?;
        }
        Ok(())
    }
}

fn strictly_monotone(values: &[f64], field: &'static str) -> Result<()> {
    let increasing = values.windows(2).all(|w| w[0] < w[1]);
    let decreasing = values.windows(2).all(|w| w[0] > w[1]);
    if values.len() > 1 && !increasing && !decreasing {
        return Err(Error::invalid(
            field,
            "swept values must be strictly monotone",
        ));
    }
    Ok(())
}

/// One table entry: a per-layer SE breakdown at one grid point.
#[derive(Debug, Clone)]
pub struct ResultRow {
    pub scheme: Scheme,
    pub layer: Layer,
    pub param_name: String,
    pub param_value: f64,
    pub mode: RowMode,
    pub breakdown: SeBreakdown,
    /// Effective configuration at this grid point.
    pub cfg: SystemConfig,
    /// Effective shares (sm-tdm-fdm rows only).
    pub share: Option<TdmFdmShare>,
    /// Extra family key when one table interleaves several grids
    /// (for example `nt=2` in the rate-region comparison).
    pub group: Option<String>,
}

/// Ordered, deterministic collection of sweep results.
#[derive(Debug, Clone, Default)]
pub struct ResultTable {
    pub rows: Vec<ResultRow>,
    /// Count of spatial-bound evaluations clamped into `[0, log2 n_t]`.
    pub clamp_events: u64,
    /// Count of zero-SINR short-circuits in the spatial bound.
    pub zero_sinr_events: u64,
}

impl ResultTable {
    pub fn extend(&mut self, other: ResultTable) {
        self.rows.extend(other.rows);
        self.clamp_events += other.clamp_events;
        self.zero_sinr_events += other.zero_sinr_events;
    }

    /// Order-sensitive content hash; equal tables hash equally across
    /// runs and worker counts.
    pub fn digest(&self) -> u64 {
        let mut h = Fnv64::new();
        for row in &self.rows {
            h.write(row.scheme.as_str().as_bytes());
            h.write(row.layer.as_str().as_bytes());
            h.write(row.param_name.as_bytes());
            h.write_u64(row.param_value.to_bits());
            h.write(row.mode.as_str().as_bytes());
            h.write_u64(row.breakdown.constellation_mi.to_bits());
            h.write_u64(row.breakdown.spatial_mi.to_bits());
            h.write_u64(row.breakdown.total_se.to_bits());
            h.write_u64(row.breakdown.stderr.unwrap_or(-1.0).to_bits());
            if let Some(g) = &row.group {
                h.write(g.as_bytes());
            }
        }
        h.finish()
    }
}

struct Fnv64(u64);

impl Fnv64 {
    fn new() -> Self {
        Fnv64(0xcbf29ce484222325)
    }
}

impl Hasher for Fnv64 {
    fn finish(&self) -> u64 {
        self.0
    }

    fn write(&mut self, bytes: &[u8]) {
        for b in bytes {
            self.0 ^= u64::from(*b);
            self.0 = self.0.wrapping_mul(0x100000001b3);
        }
    }
}

/// Stream spacing between grid points; inner runs split their block
/// further (see [`montecarlo::STREAM_BLOCK`]).
const POINT_STREAM_STRIDE: u64 = 1 << 32;

/// Closed-form per-layer breakdowns for one scheme at one configuration.
pub fn bound_breakdowns(
    scheme: Scheme,
    cfg: &SystemConfig,
    share: &TdmFdmShare,
) -> Result<(SeBreakdown, SeBreakdown, u64, u64)> {
    let split = cfg.power_split()?;
    let mut clamps = 0;
    let mut zeros = 0;
    let mut count = |d: &capacity::SpatialMiDetail| {
        clamps += u64::from(d.clamped);
        zeros += u64::from(d.zero_sinr);
    };
    let (ml, fl) = match scheme {
        Scheme::SmLdm => {
            let (ml, dm) = capacity::sm_se_lower_bound_detailed(&sinr::mrc_sinr_ml(cfg, &split));
            let (fl, df) = capacity::sm_se_lower_bound_detailed(&sinr::mrc_sinr_fl(cfg, &split));
            count(&dm);
            count(&df);
            (ml, fl)
        }
        Scheme::SingleTaLdm => {
            let (s_ml, s_fl) = sinr::single_ta_sinr(cfg, &split);
            let (ml, fl) = capacity::single_ta_se(&s_ml, &s_fl);
            (
                SeBreakdown::new(ml, 0.0, None),
                SeBreakdown::new(fl, 0.0, None),
            )
        }
        Scheme::SmxLdm => {
            let (s_ml, s_fl) = sinr::smx_sinr(cfg, &split);
            let (ml, fl) = capacity::smx_se(&s_ml, &s_fl);
            (
                SeBreakdown::new(ml, 0.0, None),
                SeBreakdown::new(fl, 0.0, None),
            )
        }
        Scheme::SmTdmFdm => {
            let (s_ml, s_fl) = sinr::tdmfdm_sinr(cfg);
            let (ml, fl) = capacity::tdmfdm_se(&s_ml, &s_fl, share)?;
            (ml, fl)
        }
    };
    Ok((ml, fl, clamps, zeros))
}

fn simulate_breakdowns(
    scheme: Scheme,
    cfg: &SystemConfig,
    share: &TdmFdmShare,
    source: SinrSource,
    mi_samples: u64,
    rng: &RngSpec,
) -> Result<(SeBreakdown, SeBreakdown)> {
    let split = cfg.power_split()?;
    let ml = montecarlo::simulated_se(Layer::Ml, scheme, cfg, &split, source, mi_samples, rng)?;
    let fl = montecarlo::simulated_se(
        Layer::Fl,
        scheme,
        cfg,
        &split,
        source,
        mi_samples,
        &rng.with_stream_offset(POINT_STREAM_STRIDE / 2),
    )?;
    if scheme == Scheme::SmTdmFdm {
        Ok((
            ml.scaled(share.ml_fraction()),
            fl.scaled(share.fl_fraction()),
        ))
    } else {
        Ok((ml, fl))
    }
}

/// Runs one sweep; rows appear in grid order (scheme-major, then swept
/// value), with bound rows before simulate rows per point and the mobile
/// layer before the fixed layer.
pub fn run_sweep(spec: &SweepSpec) -> Result<ResultTable> {
    spec.validate()?;
    let mut table = ResultTable::default();
    let mut point_index = 0u64;
    for scheme in &spec.schemes {
        for value in &spec.values {
            let cfg = spec.param.apply(&spec.base, *value)?;
            let point_rng = spec
                .rng
                .with_stream_offset(point_index.wrapping_mul(POINT_STREAM_STRIDE));
            point_index += 1;

            let mut push = |layer: Layer, mode: RowMode, breakdown: SeBreakdown| {
                table.rows.push(ResultRow {
                    scheme: *scheme,
                    layer,
                    param_name: spec.param.name().to_string(),
                    param_value: *value,
                    mode,
                    breakdown,
                    cfg,
                    share: (*scheme == Scheme::SmTdmFdm).then_some(spec.share),
                    group: None,
                });
            };

            if spec.mode.wants_bound() {
                let (ml, fl, clamps, zeros) = bound_breakdowns(*scheme, &cfg, &spec.share)?;
                table.clamp_events += clamps;
                table.zero_sinr_events += zeros;
                push(Layer::Ml, RowMode::Bound, ml);
                push(Layer::Fl, RowMode::Bound, fl);
            }
            if spec.mode.wants_simulation() {
                let (ml, fl) = simulate_breakdowns(
                    *scheme,
                    &cfg,
                    &spec.share,
                    spec.sinr_source.to_source(&spec.budgets),
                    spec.budgets.mi_samples,
                    &point_rng,
                )?;
                push(Layer::Ml, RowMode::Simulate, ml);
                push(Layer::Fl, RowMode::Simulate, fl);
            }
        }
    }
    Ok(table)
}

/// Grids for the rate-region comparison between power-split layering and
/// orthogonal time/bandwidth sharing.
#[derive(Debug, Clone)]
pub struct RateRegionSpec {
    /// Fixed fields (SNRs, receive antennas, power); `n_t` is overridden
    /// per family and the injection level per operating point.
    pub base: SystemConfig,
    pub n_t_values: Vec<usize>,
    pub il_db_values: Vec<f64>,
    /// Mobile-layer share fractions in `[0, 1]`; the fixed layer gets the
    /// complement.
    pub share_ml_fractions: Vec<f64>,
}

impl RateRegionSpec {
    pub fn validate(&self) -> Result<()> {
        if self.n_t_values.is_empty() {
            return Err(Error::invalid("nt", "antenna grid must be nonempty"));
        }
        if self.il_db_values.is_empty() {
            return Err(Error::invalid("il-db", "injection-level grid must be nonempty"));
        }
        if self.share_ml_fractions.is_empty() {
            return Err(Error::invalid("share-ml", "share grid must be nonempty"));
        }
        strictly_monotone(&self.il_db_values, "il-db")?;
        strictly_monotone(&self.share_ml_fractions, "share-ml")?;
        for f in &self.share_ml_fractions {
            if !(0.0..=1.0).contains(f) {
                return Err(Error::invalid(
                    "share-ml",
                    format!("share fractions must lie in [0, 1], got {f}"),
                ));
            }
        }
        for nt in &self.n_t_values {
            for il in &self.il_db_values {
                SystemConfig {
                    n_t: *nt,
                    injection_level_db: *il,
                    ..self.base
                }
                .validate()?;
            }
        }
        Ok(())
    }
}

/// Emits `(ML SE, FL SE)` operating points: power-split layering across
/// the injection-level grid and orthogonal sharing across the share
/// grid, one family per transmit-antenna count. Closed forms only.
pub fn compare_ldm_vs_tdmfdm(spec: &RateRegionSpec) -> Result<ResultTable> {
    spec.validate()?;
    let mut table = ResultTable::default();
    let many_families = spec.n_t_values.len() > 1;
    for nt in &spec.n_t_values {
        let group = many_families.then(|| format!("nt={nt}"));
        let unit_share = TdmFdmShare { l_ml: 1.0, l_fl: 1.0 };

        for il in &spec.il_db_values {
            let cfg = SystemConfig {
                n_t: *nt,
                injection_level_db: *il,
                ..spec.base
            };
            let (ml, fl, clamps, zeros) = bound_breakdowns(Scheme::SmLdm, &cfg, &unit_share)?;
            table.clamp_events += clamps;
            table.zero_sinr_events += zeros;
            for (layer, b) in [(Layer::Ml, ml), (Layer::Fl, fl)] {
                table.rows.push(ResultRow {
                    scheme: Scheme::SmLdm,
                    layer,
                    param_name: "il-db".to_string(),
                    param_value: *il,
                    mode: RowMode::Bound,
                    breakdown: b,
                    cfg,
                    share: None,
                    group: group.clone(),
                });
            }
        }

        for frac in &spec.share_ml_fractions {
            let cfg = SystemConfig { n_t: *nt, ..spec.base };
            let share = TdmFdmShare {
                l_ml: *frac,
                l_fl: 1.0 - *frac,
            };
            let (ml, fl, clamps, zeros) = bound_breakdowns(Scheme::SmTdmFdm, &cfg, &share)?;
            table.clamp_events += clamps;
            table.zero_sinr_events += zeros;
            for (layer, b) in [(Layer::Ml, ml), (Layer::Fl, fl)] {
                table.rows.push(ResultRow {
                    scheme: Scheme::SmTdmFdm,
                    layer,
                    param_name: "share-ml".to_string(),
                    param_value: *frac,
                    mode: RowMode::Bound,
                    breakdown: b,
                    cfg,
                    share: Some(share),
                    group: group.clone(),
                });
            }
        }
    }
    Ok(table)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn base_cfg() -> SystemConfig {
        SystemConfig::new(2, 2, 2, 5.0, 0.0, 20.0, 1.0).unwrap()
    }

    fn small_spec() -> SweepSpec {
        SweepSpec {
            schemes: vec![Scheme::SmLdm],
            param: SweepParam::NRm,
            values: vec![1.0, 2.0, 4.0, 8.0],
            base: base_cfg(),
            mode: Mode::Bound,
            rng: RngSpec::new(1, 0),
            budgets: McBudgets {
                trials: 2000,
                mi_samples: 20_000,
            },
            sinr_source: SinrSourceKind::ClosedForm,
            share: TdmFdmShare { l_ml: 1.0, l_fl: 1.0 },
        }
    }

    #[test]
    fn bound_sweep_shape_and_monotonicity() {
        let table = run_sweep(&small_spec()).unwrap();
        assert_eq!(table.rows.len(), 16);
        let ml_se: Vec<f64> = table
            .rows
            .iter()
            .filter(|r| r.layer == Layer::Ml)
            .map(|r| r.breakdown.total_se)
            .collect();
        assert!(ml_se.windows(2).all(|w| w[1] > w[0]), "{ml_se:?}");
    }

    #[test]
    fn both_mode_emits_bound_and_simulate_rows() {
        let mut spec = small_spec();
        spec.values = vec![2.0];
        spec.mode = Mode::Both;
        let table = run_sweep(&spec).unwrap();
        assert_eq!(table.rows.len(), 4);
        assert_eq!(table.rows[0].mode, RowMode::Bound);
        assert_eq!(table.rows[2].mode, RowMode::Simulate);
        assert!(table.rows[2].breakdown.stderr.is_some());
        assert!(table.rows[0].breakdown.stderr.is_none());
    }

    #[test]
    fn sweep_validation_errors() {
        let mut spec = small_spec();
        spec.schemes.clear();
        assert!(matches!(
            run_sweep(&spec),
            Err(Error::Validation { field: "scheme", .. })
        ));

        let mut spec = small_spec();
        spec.values = vec![2.0, 1.0, 4.0];
        assert!(run_sweep(&spec).is_err());

        let mut spec = small_spec();
        spec.values = vec![1.5];
        assert!(run_sweep(&spec).is_err());

        let mut spec = small_spec();
        spec.param = SweepParam::InjectionLevelDb;
        spec.values = vec![-3.0, 5.0];
        assert!(run_sweep(&spec).is_err());
    }

    #[test]
    fn rerun_is_bit_identical() {
        let mut spec = small_spec();
        spec.mode = Mode::Both;
        spec.values = vec![1.0, 2.0];
        let a = run_sweep(&spec).unwrap();
        let b = run_sweep(&spec).unwrap();
        assert_eq!(a.digest(), b.digest());

        spec.rng = RngSpec::new(2, 0);
        let c = run_sweep(&spec).unwrap();
        assert_ne!(a.digest(), c.digest());
    }

    #[test]
    fn tdmfdm_rows_scale_with_share() {
        let mut spec = small_spec();
        spec.schemes = vec![Scheme::SmTdmFdm];
        spec.values = vec![2.0];
        spec.share = TdmFdmShare { l_ml: 1.0, l_fl: 0.0 };
        let table = run_sweep(&spec).unwrap();
        let fl = table
            .rows
            .iter()
            .find(|r| r.layer == Layer::Fl)
            .unwrap();
        assert_eq!(fl.breakdown.total_se, 0.0);
    }

    #[test]
    fn rate_region_families_and_axis_points() {
        let spec = RateRegionSpec {
            base: base_cfg(),
            n_t_values: vec![1, 2, 4],
            il_db_values: vec![5.0, 10.0],
            share_ml_fractions: vec![0.0, 0.5, 1.0],
        };
        let table = compare_ldm_vs_tdmfdm(&spec).unwrap();
        // Per family: 2 IL points + 3 share points, two layers each.
        assert_eq!(table.rows.len(), 3 * (2 + 3) * 2);
        let groups: Vec<_> = table
            .rows
            .iter()
            .filter_map(|r| r.group.clone())
            .collect();
        assert!(groups.contains(&"nt=1".to_string()));
        assert!(groups.contains(&"nt=4".to_string()));

        // share (1, 0) puts the orthogonal point on the ML axis.
        let on_axis = table
            .rows
            .iter()
            .find(|r| {
                r.scheme == Scheme::SmTdmFdm
                    && r.layer == Layer::Fl
                    && r.param_value == 1.0
                    && r.group.as_deref() == Some("nt=2")
            })
            .unwrap();
        assert_eq!(on_axis.breakdown.total_se, 0.0);
    }

    #[test]
    fn rate_region_dominance_at_interior_share() {
        // At the midpoint share there is an injection level whose
        // power-split operating point dominates in both layers.
        let spec = RateRegionSpec {
            base: base_cfg(),
            n_t_values: vec![2],
            il_db_values: (1..=30).map(f64::from).collect(),
            share_ml_fractions: vec![0.5],
        };
        let table = compare_ldm_vs_tdmfdm(&spec).unwrap();
        let tf_ml = table
            .rows
            .iter()
            .find(|r| r.scheme == Scheme::SmTdmFdm && r.layer == Layer::Ml)
            .unwrap()
            .breakdown
            .total_se;
        let tf_fl = table
            .rows
            .iter()
            .find(|r| r.scheme == Scheme::SmTdmFdm && r.layer == Layer::Fl)
            .unwrap()
            .breakdown
            .total_se;
        let dominated = table
            .rows
            .iter()
            .filter(|r| r.scheme == Scheme::SmLdm && r.layer == Layer::Ml)
            .any(|ml_row| {
                let fl_row = table
                    .rows
                    .iter()
                    .find(|r| {
                        r.scheme == Scheme::SmLdm
                            && r.layer == Layer::Fl
                            && r.param_value == ml_row.param_value
                    })
                    .unwrap();
                ml_row.breakdown.total_se >= tf_ml && fl_row.breakdown.total_se >= tf_fl
            });
        assert!(dominated);
    }

    #[test]
    fn single_ta_rows_have_zero_spatial_mi() {
        let mut spec = small_spec();
        spec.schemes = vec![Scheme::SingleTaLdm];
        spec.values = vec![2.0, 4.0];
        let table = run_sweep(&spec).unwrap();
        assert!(table.rows.iter().all(|r| r.breakdown.spatial_mi == 0.0));
    }

    #[test]
    fn smx_matches_sm_at_high_snr_for_fl() {
        // Closed-form ordering spot check used by the figure presets.
        let mut spec = small_spec();
        spec.schemes = vec![Scheme::SmLdm, Scheme::SmxLdm];
        spec.param = SweepParam::SnrFlDb;
        spec.values = vec![35.0];
        let table = run_sweep(&spec).unwrap();
        let se = |scheme: Scheme| {
            table
                .rows
                .iter()
                .find(|r| r.scheme == scheme && r.layer == Layer::Fl)
                .unwrap()
                .breakdown
                .total_se
        };
        assert!(se(Scheme::SmxLdm) > se(Scheme::SmLdm));
    }

    #[test]
    fn table_digest_tracks_content() {
        let t1 = run_sweep(&small_spec()).unwrap();
        let mut t2 = t1.clone();
        t2.rows[0].breakdown.total_se += 1e-9;
        assert_ne!(t1.digest(), t2.digest());
    }

    #[test]
    fn sweep_param_round_trip() {
        for p in SweepParam::ALL {
            assert_eq!(SweepParam::parse(p.name()).unwrap(), p);
        }
        assert!(SweepParam::parse("bandwidth").is_err());
    }

    #[test]
    fn count_params_validated() {
        let base = base_cfg();
        assert!(SweepParam::NRm.apply(&base, 2.0).is_ok());
        assert!(SweepParam::NRm.apply(&base, 2.5).is_err());
        assert!(SweepParam::NRm.apply(&base, 0.0).is_err());
    }

    #[test]
    fn equal_share_rate_region_half_identity() {
        // TDM/FDM at share 0.5 is exactly half the full-resource bound.
        let spec = RateRegionSpec {
            base: base_cfg(),
            n_t_values: vec![2],
            il_db_values: vec![5.0],
            share_ml_fractions: vec![0.5],
        };
        let table = compare_ldm_vs_tdmfdm(&spec).unwrap();
        let cfg = base_cfg();
        let (s_ml, _) = sinr::tdmfdm_sinr(&cfg);
        let full = capacity::sm_se_lower_bound(&s_ml);
        let got = table
            .rows
            .iter()
            .find(|r| r.scheme == Scheme::SmTdmFdm && r.layer == Layer::Ml)
            .unwrap()
            .breakdown
            .total_se;
        assert_relative_eq!(got, full.total_se / 2.0, max_relative = 1e-12);
    }
}
