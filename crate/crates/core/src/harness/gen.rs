//! Instance generation with ground truth recorded as META lines.

use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use itertools::Itertools;

use crate::format::{read_instance, InstanceFile};
use crate::lowerbound::compound::{gen_compound, DEFAULT_C_WEIGHT};
use crate::lowerbound::median::{gen_median_instance, MedianParams, MedianReport, DEFAULT_MAX_ATTEMPTS};
use crate::lowerbound::modify::gen_modified_instance_general;
use crate::lowerbound::slab::{gen_slab_instance, SlabLabel};
use crate::lowerbound::median::gen_random_instance;
use crate::numfmt::fmt_g;
use crate::planted::gen_planted;
use crate::rng;
use crate::system::SetSystem;

use super::{HarnessError, KvConfig};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GenKind {
    Random,
    Planted,
    Median,
    Modified,
    Compound,
    Slab,
}

impl GenKind {
    pub fn label(self) -> &'static str {
        match self {
            GenKind::Random => "random",
            GenKind::Planted => "planted",
            GenKind::Median => "median",
            GenKind::Modified => "modified",
            GenKind::Compound => "compound",
            GenKind::Slab => "slab",
        }
    }
}

impl fmt::Display for GenKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

impl FromStr for GenKind {
    type Err = HarnessError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Ok(match s {
            "random" => GenKind::Random,
            "planted" => GenKind::Planted,
            "median" => GenKind::Median,
            "modified" => GenKind::Modified,
            "compound" => GenKind::Compound,
            "slab" => GenKind::Slab,
            other => return Err(HarnessError::Usage(format!("unknown instance kind `{other}`"))),
        })
    }
}

/// Generator parameters; which ones are required depends on the kind.
#[derive(Debug, Clone, Default)]
pub struct GenParams {
    pub m: Option<usize>,
    pub n: Option<usize>,
    pub k: Option<usize>,
    /// Incidence density for `random`.
    pub p: Option<f64>,
    /// `yes` or `no` for slabs.
    pub label: Option<String>,
    /// Number of parts for compounds.
    pub t: Option<usize>,
    /// Existing median instance for `modified`/`compound`.
    pub from: Option<PathBuf>,
    /// Median keys (`p0`, `variant`, `median_k`, `median_alpha`, `mode`,
    /// `max_attempts`, `c_weight`).
    pub config: KvConfig,
}

fn need<T: Copy>(v: Option<T>, name: &str, kind: GenKind) -> Result<T, HarnessError> {
    v.ok_or_else(|| HarnessError::Usage(format!("`{kind}` needs --{name}")))
}

#[derive(Debug, Clone)]
pub struct Generated {
    pub file: InstanceFile,
    /// Property report for median instances.
    pub report: Option<MedianReport>,
}

/// Median parameters from `m`, `n` and the median config keys.
pub fn median_params(m: usize, n: usize, cfg: &KvConfig) -> Result<MedianParams, HarnessError> {
    use crate::lowerbound::median::Variant;
    let variant = match cfg.get("variant").unwrap_or("simplified") {
        "simplified" => Variant::Simplified,
        "general" => Variant::General {
            k: cfg.parsed("median_k")?.unwrap_or(2),
            alpha: cfg.parsed("median_alpha")?.unwrap_or(1.05),
        },
        other => return Err(HarnessError::Usage(format!("unknown median variant `{other}`"))),
    };
    match (cfg.parsed::<f64>("p0")?, variant) {
        // An explicit p0 bypasses the shape check on the derived value.
        (Some(p0), variant) => Ok(MedianParams { m, n, variant, p0: 0.5 }.with_p0(p0)?),
        (None, Variant::Simplified) => Ok(MedianParams::simplified(m, n)?),
        (None, Variant::General { k, alpha }) => Ok(MedianParams::general(m, n, k, alpha)?),
    }
}

fn draw_median(m: usize, n: usize, cfg: &KvConfig, seed: u64) -> Result<(MedianParams, crate::lowerbound::median::MedianDraw), HarnessError> {
    let params = median_params(m, n, cfg)?;
    let attempts = cfg.parsed("max_attempts")?.unwrap_or(DEFAULT_MAX_ATTEMPTS);
    let draw = gen_median_instance(&params, cfg.check_mode()?, &mut rng::stream(seed, "gen-median", 0), attempts)?;
    Ok((params, draw))
}

/// A median from `params.from` or a fresh draw keyed by `seed`.
pub fn median_source(params: &GenParams, seed: u64) -> Result<(SetSystem, String), HarnessError> {
    if let Some(path) = &params.from {
        return Ok((read_instance(path)?.system, path.display().to_string()));
    }
    let (m, n) = (need(params.m, "m", GenKind::Median)?, need(params.n, "n", GenKind::Median)?);
    let (_, draw) = draw_median(m, n, &params.config, seed)?;
    Ok((draw.system, format!("median:{m}x{n}:seed={seed}")))
}

fn id_list(ids: impl IntoIterator<Item = u32>) -> String {
    ids.into_iter().join(",")
}

pub fn generate(kind: GenKind, params: &GenParams, seed: u64) -> Result<Generated, HarnessError> {
    let label = format!("gen-{kind}");
    let mut rng = rng::stream(seed, &label, 0);
    let mut report = None;
    let file = match kind {
        GenKind::Random => {
            let (m, n) = (need(params.m, "m", kind)?, need(params.n, "n", kind)?);
            let p = params.p.unwrap_or(0.5);
            if !(0.0..=1.0).contains(&p) {
                return Err(HarnessError::Usage(format!("density must lie in [0, 1], got {p}")));
            }
            InstanceFile::new(gen_random_instance(m, n, 1.0 - p, &mut rng))
                .with_meta("kind", kind)
                .with_meta("seed", seed)
                .with_meta("p", fmt_g(p))
        }
        GenKind::Planted => {
            let (m, n, k) = (need(params.m, "m", kind)?, need(params.n, "n", kind)?, need(params.k, "k", kind)?);
            let planted = gen_planted(m, n, k, &mut rng)?;
            InstanceFile::new(planted.system)
                .with_meta("kind", kind)
                .with_meta("seed", seed)
                .with_meta("k", k)
                .with_meta("opt", k)
                .with_meta("planted", id_list(planted.planted.iter().map(|s| s.0)))
        }
        GenKind::Median => {
            let (m, n) = (need(params.m, "m", kind)?, need(params.n, "n", kind)?);
            let (mp, draw) = draw_median(m, n, &params.config, seed)?;
            let variant = match mp.variant {
                crate::lowerbound::median::Variant::Simplified => "simplified".to_string(),
                crate::lowerbound::median::Variant::General { k, alpha } => {
                    format!("general(k={k},alpha={})", fmt_g(alpha))
                }
            };
            let file = InstanceFile::new(draw.system)
                .with_meta("kind", kind)
                .with_meta("seed", seed)
                .with_meta("variant", variant)
                .with_meta("p0", fmt_g(mp.p0))
                .with_meta("attempts", draw.attempts)
                .with_meta("properties", "all-hold");
            report = Some(draw.report);
            file
        }
        GenKind::Modified => {
            let (median, source) = median_source(params, seed)?;
            let k = params.k.unwrap_or(2);
            let inst = gen_modified_instance_general(&median, k, &mut rng)?;
            let single = inst.system.set_ids().any(|s| inst.system.set_size(s) == inst.system.n());
            let mut file = InstanceFile::new(inst.system)
                .with_meta("kind", kind)
                .with_meta("seed", seed)
                .with_meta("source", source)
                .with_meta("k", k)
                .with_meta("chosen", id_list(inst.chosen_sets.iter().map(|s| s.0)))
                .with_meta("swaps", inst.swaps.len());
            if k == 2 {
                file = file.with_meta("opt", if single { 1 } else { 2 });
            }
            file
        }
        GenKind::Compound => {
            let (median, source) = median_source(params, seed)?;
            let t = need(params.t, "t", kind)?;
            let c = params.config.parsed("c_weight")?.unwrap_or(DEFAULT_C_WEIGHT);
            let comp = gen_compound(&median, t, c, &mut rng)?;
            let lb = comp.opt_lower_bound();
            InstanceFile::new(comp.system.clone())
                .with_meta("kind", kind)
                .with_meta("seed", seed)
                .with_meta("source", source)
                .with_meta("t", t)
                .with_meta("c_weight", fmt_g(c))
                .with_meta("median_parts", comp.median_parts())
                .with_meta("opt_lower_bound", lb)
        }
        GenKind::Slab => {
            let (n, k) = (need(params.n, "n", kind)?, need(params.k, "k", kind)?);
            let label = match params.label.as_deref().unwrap_or("yes") {
                "yes" => SlabLabel::Yes,
                "no" => SlabLabel::No,
                other => return Err(HarnessError::Usage(format!("slab label must be yes or no, got `{other}`"))),
            };
            let inst = gen_slab_instance(n, k, label, &mut rng)?;
            let swaps = inst
                .swaps_per_slab
                .iter()
                .map(|s| s.map(|(x, y)| format!("{x}:{y}")).unwrap_or_else(|| "-".into()))
                .join(",");
            let mut file = InstanceFile::new(inst.system.clone())
                .with_meta("kind", kind)
                .with_meta("seed", seed)
                .with_meta("k", k)
                .with_meta("label", label.label())
                .with_meta("query_cover", id_list(1..=k as u32))
                .with_meta("swaps", swaps);
            if let Some(w) = inst.witness() {
                file = file.with_meta("witness", w.0);
            }
            file
        }
    };
    Ok(Generated { file, report })
}

/// `<out>.report.csv`, the sidecar path for median property reports.
pub fn report_path(out: &Path) -> PathBuf {
    let mut s = out.as_os_str().to_owned();
    s.push(".report.csv");
    PathBuf::from(s)
}
