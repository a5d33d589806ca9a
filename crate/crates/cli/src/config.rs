//! Strict `key = value` configuration files with `[section]` headers.
//!
//! Unknown keys, malformed values and misplaced sections are rejected with
//! the offending key and line number. Every key has a default, so an empty
//! (or absent) file yields the stock configuration.

use std::path::Path;

use thermotrack::data::{MotionModel, OccluderSpec, SynthSpec, TargetShape};
use thermotrack::error::{Error, Result};
use thermotrack::eval::EaoInterval;
use thermotrack::tracker::TrackerConfig;
use thermotrack::Real;

/// Evaluation options carried by the config file.
#[derive(Debug, Clone, PartialEq)]
pub struct EvalConfig {
    pub fail_threshold: Real,
    pub reinit_gap: usize,
    pub eao_interval: EaoInterval,
}

impl Default for EvalConfig {
    fn default() -> Self {
        EvalConfig {
            fail_threshold: 0.0,
            reinit_gap: 5,
            eao_interval: EaoInterval::Auto,
        }
    }
}

/// Fully resolved run configuration.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub tracker: TrackerConfig<Real>,
    pub eval: EvalConfig,
    pub seed: u64,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            tracker: TrackerConfig::default(),
            eval: EvalConfig::default(),
            seed: 1,
        }
    }
}

#[derive(Clone, Copy)]
struct KeyValue<'a> {
    key: &'a str,
    value: &'a str,
    line: usize,
}

fn split_lines(path: &Path, text: &str) -> Result<Vec<(String, String, String, usize)>> {
    let mut section = String::new();
    let mut out = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let stripped = raw.split('#').next().unwrap_or("").trim();
        if stripped.is_empty() {
            continue;
        }
        if stripped.starts_with('[') {
            if !stripped.ends_with(']') {
                return Err(Error::Parse {
                    path: path.display().to_string(),
                    line,
                    message: format!("malformed section header {stripped:?}"),
                });
            }
            section = stripped[1..stripped.len() - 1].trim().to_string();
            continue;
        }
        let Some((k, v)) = stripped.split_once('=') else {
            return Err(Error::Parse {
                path: path.display().to_string(),
                line,
                message: format!("expected `key = value`, got {stripped:?}"),
            });
        };
        out.push((
            section.clone(),
            k.trim().to_string(),
            v.trim().to_string(),
            line,
        ));
    }
    Ok(out)
}

fn parse_as<T: std::str::FromStr>(path: &Path, kv: &KeyValue<'_>) -> Result<T>
where
    T::Err: std::fmt::Display,
{
    kv.value.parse::<T>().map_err(|e| Error::Parse {
        path: path.display().to_string(),
        line: kv.line,
        message: format!("key {}: bad value {:?}: {e}", kv.key, kv.value),
    })
}

fn parse_bool(path: &Path, kv: &KeyValue<'_>) -> Result<bool> {
    match kv.value {
        "true" | "yes" | "on" | "1" => Ok(true),
        "false" | "no" | "off" | "0" => Ok(false),
        other => Err(Error::Parse {
            path: path.display().to_string(),
            line: kv.line,
            message: format!("key {}: expected a boolean, got {other:?}", kv.key),
        }),
    }
}

fn apply_tracker_key(path: &Path, cfg: &mut RunConfig, kv: &KeyValue<'_>) -> Result<()> {
    let t = &mut cfg.tracker;
    match kv.key {
        "channels" => {
            t.channels.intensity = false;
            t.channels.hog = false;
            t.channels.motion.enabled = false;
            for part in kv.value.split(',').map(str::trim).filter(|p| !p.is_empty()) {
                match part {
                    "intensity" => t.channels.intensity = true,
                    "hog" => t.channels.hog = true,
                    "motion" => t.channels.motion.enabled = true,
                    other => {
                        return Err(Error::Parse {
                            path: path.display().to_string(),
                            line: kv.line,
                            message: format!("unknown channel {other:?}"),
                        })
                    }
                }
            }
        }
        "intensity_cell" => t.channels.intensity_cell = parse_as(path, kv)?,
        "hog_cell" => t.channels.hog_cell = parse_as(path, kv)?,
        "zero_mean_intensity" => t.channels.zero_mean_intensity = parse_bool(path, kv)?,
        "motion_threshold" => t.channels.motion.threshold = parse_as(path, kv)?,
        "crop_factor" => t.crop_factor = parse_as(path, kv)?,
        "patch_size" => t.patch_size = parse_as(path, kv)?,
        "label_sigma_factor" => t.label_sigma_factor = parse_as(path, kv)?,
        "filter_reg_base" => t.filter_reg_base = parse_as(path, kv)?,
        "filter_reg_edge_factor" => t.filter_reg_edge_factor = parse_as(path, kv)?,
        "projection_reg" => t.projection_reg = parse_as(path, kv)?,
        "learning_rate" => t.learning_rate = parse_as(path, kv)?,
        "memory_capacity" => t.memory_capacity = parse_as(path, kv)?,
        "scales" => t.scale_count = parse_as(path, kv)?,
        "scale_step" => t.scale_step = parse_as(path, kv)?,
        "scale_damping" => t.scale_damping = parse_as(path, kv)?,
        "update_interval" => {
            t.update_interval = if kv.value == "never" {
                usize::MAX
            } else {
                parse_as(path, kv)?
            }
        }
        "projected_channels" => {
            t.projected_channels = if kv.value == "none" {
                None
            } else {
                Some(parse_as(path, kv)?)
            }
        }
        "gn_iterations" => t.gn_iterations = parse_as(path, kv)?,
        "cg_first_frame" => t.cg_first_frame = parse_as(path, kv)?,
        "cg_update" => t.cg_update = parse_as(path, kv)?,
        "cg_tolerance" => t.cg_tolerance = parse_as(path, kv)?,
        "score_oversample" => t.score_oversample = parse_as(path, kv)?,
        other => {
            return Err(Error::Parse {
                path: path.display().to_string(),
                line: kv.line,
                message: format!("unknown key {other:?} in section [tracker]"),
            })
        }
    }
    Ok(())
}

fn apply_eval_key(path: &Path, cfg: &mut RunConfig, kv: &KeyValue<'_>) -> Result<()> {
    match kv.key {
        "fail_threshold" => cfg.eval.fail_threshold = parse_as(path, kv)?,
        "reinit_gap" => cfg.eval.reinit_gap = parse_as(path, kv)?,
        "eao_interval" => {
            cfg.eval.eao_interval = if kv.value == "auto" {
                EaoInterval::Auto
            } else {
                let Some((lo, hi)) = kv.value.split_once(':') else {
                    return Err(Error::Parse {
                        path: path.display().to_string(),
                        line: kv.line,
                        message: format!(
                            "eao_interval must be `auto` or `lo:hi`, got {:?}",
                            kv.value
                        ),
                    });
                };
                let lo_kv = KeyValue { value: lo.trim(), ..*kv };
                let hi_kv = KeyValue { value: hi.trim(), ..*kv };
                EaoInterval::Fixed(parse_as(path, &lo_kv)?, parse_as(path, &hi_kv)?)
            }
        }
        other => {
            return Err(Error::Parse {
                path: path.display().to_string(),
                line: kv.line,
                message: format!("unknown key {other:?} in section [eval]"),
            })
        }
    }
    Ok(())
}

/// Parses a run configuration. A missing file yields the defaults.
pub fn parse_config(path: &Path) -> Result<RunConfig> {
    let mut cfg = RunConfig::default();
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    for (section, key, value, line) in split_lines(path, &text)? {
        let kv = KeyValue {
            key: &key,
            value: &value,
            line,
        };
        match section.as_str() {
            "" | "tracker" => apply_tracker_key(path, &mut cfg, &kv)?,
            "eval" => apply_eval_key(path, &mut cfg, &kv)?,
            "run" => match key.as_str() {
                "seed" => cfg.seed = parse_as(path, &kv)?,
                other => {
                    return Err(Error::Parse {
                        path: path.display().to_string(),
                        line,
                        message: format!("unknown key {other:?} in section [run]"),
                    })
                }
            },
            other => {
                return Err(Error::Parse {
                    path: path.display().to_string(),
                    line,
                    message: format!("unknown section [{other}]"),
                })
            }
        }
    }
    cfg.tracker.validate().map_err(|e| match e {
        Error::Config(m) => Error::Config(format!("{}: {m}", path.display())),
        other => other,
    })?;
    Ok(cfg)
}

/// Parses a synthetic-sequence spec file (flat `key = value`, no sections).
pub fn parse_synth_spec(path: &Path) -> Result<SynthSpec> {
    let mut spec = SynthSpec::default();
    let mut occ = OccluderSpec {
        center: (0.0, 0.0),
        size: (0.0, 0.0),
        velocity: (0.0, 0.0),
        intensity: 0,
        frames: (0, 0),
    };
    let mut occ_set = false;
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    for (section, key, value, line) in split_lines(path, &text)? {
        if !section.is_empty() && section != "synth" {
            return Err(Error::Parse {
                path: path.display().to_string(),
                line,
                message: format!("unknown section [{section}]"),
            });
        }
        let kv = KeyValue {
            key: &key,
            value: &value,
            line,
        };
        match key.as_str() {
            "width" => spec.width = parse_as(path, &kv)?,
            "height" => spec.height = parse_as(path, &kv)?,
            "length" => spec.length = parse_as(path, &kv)?,
            "shape" => {
                spec.shape = match value.as_str() {
                    "rectangle" => TargetShape::Rectangle,
                    "disc" => TargetShape::Disc,
                    other => {
                        return Err(Error::Parse {
                            path: path.display().to_string(),
                            line,
                            message: format!("unknown shape {other:?}"),
                        })
                    }
                }
            }
            "target_w" => spec.target_size.0 = parse_as(path, &kv)?,
            "target_h" => spec.target_size.1 = parse_as(path, &kv)?,
            "start_x" => {
                let x: f64 = parse_as(path, &kv)?;
                let y = spec.start_center.map(|c| c.1).unwrap_or(0.0);
                spec.start_center = Some((x, y));
            }
            "start_y" => {
                let y: f64 = parse_as(path, &kv)?;
                let x = spec.start_center.map(|c| c.0).unwrap_or(0.0);
                spec.start_center = Some((x, y));
            }
            "motion" => {
                spec.motion = match value.as_str() {
                    "static" => MotionModel::Static,
                    other => {
                        let parts: Vec<&str> = other.split(':').collect();
                        match parts.as_slice() {
                            ["linear", rest] => {
                                let nums: Vec<&str> = rest.split(',').collect();
                                if nums.len() != 2 {
                                    return Err(Error::Parse {
                                        path: path.display().to_string(),
                                        line,
                                        message: "linear motion needs `linear:vx,vy`".into(),
                                    });
                                }
                                let vx = KeyValue { value: nums[0], ..kv };
                                let vy = KeyValue { value: nums[1], ..kv };
                                MotionModel::Linear {
                                    vx: parse_as(path, &vx)?,
                                    vy: parse_as(path, &vy)?,
                                }
                            }
                            ["sinusoidal", rest] => {
                                let nums: Vec<&str> = rest.split(',').collect();
                                if nums.len() != 3 {
                                    return Err(Error::Parse {
                                        path: path.display().to_string(),
                                        line,
                                        message: "sinusoidal motion needs `sinusoidal:ax,ay,period`"
                                            .into(),
                                    });
                                }
                                let ax = KeyValue { value: nums[0], ..kv };
                                let ay = KeyValue { value: nums[1], ..kv };
                                let p = KeyValue { value: nums[2], ..kv };
                                MotionModel::Sinusoidal {
                                    amp_x: parse_as(path, &ax)?,
                                    amp_y: parse_as(path, &ay)?,
                                    period: parse_as(path, &p)?,
                                }
                            }
                            _ => {
                                return Err(Error::Parse {
                                    path: path.display().to_string(),
                                    line,
                                    message: format!("unknown motion model {other:?}"),
                                })
                            }
                        }
                    }
                }
            }
            "scale_per_frame" => spec.scale_per_frame = parse_as(path, &kv)?,
            "foreground" => spec.foreground = parse_as(path, &kv)?,
            "background" => spec.background = parse_as(path, &kv)?,
            "noise_sigma" => spec.noise_sigma = parse_as(path, &kv)?,
            "seed" => spec.seed = parse_as(path, &kv)?,
            "occluder_x" => { occ.center.0 = parse_as(path, &kv)?; occ_set = true; }
            "occluder_y" => { occ.center.1 = parse_as(path, &kv)?; occ_set = true; }
            "occluder_w" => { occ.size.0 = parse_as(path, &kv)?; occ_set = true; }
            "occluder_h" => { occ.size.1 = parse_as(path, &kv)?; occ_set = true; }
            "occluder_vx" => { occ.velocity.0 = parse_as(path, &kv)?; occ_set = true; }
            "occluder_vy" => { occ.velocity.1 = parse_as(path, &kv)?; occ_set = true; }
            "occluder_intensity" => { occ.intensity = parse_as(path, &kv)?; occ_set = true; }
            "occluder_from" => { occ.frames.0 = parse_as(path, &kv)?; occ_set = true; }
            "occluder_to" => { occ.frames.1 = parse_as(path, &kv)?; occ_set = true; }
            other => {
                return Err(Error::Parse {
                    path: path.display().to_string(),
                    line,
                    message: format!("unknown key {other:?} in synth spec"),
                })
            }
        }
    }
    if occ_set {
        spec.occluder = Some(occ);
    }
    spec.validate()?;
    Ok(spec)
}

/// Renders the effective configuration as a config file, including every
/// default, for provenance. Identical configs render byte-identically.
pub fn render_effective(cfg: &RunConfig) -> String {
    let t = &cfg.tracker;
    let mut channels = Vec::new();
    if t.channels.intensity {
        channels.push("intensity");
    }
    if t.channels.hog {
        channels.push("hog");
    }
    if t.channels.motion.enabled {
        channels.push("motion");
    }
    let interval = match cfg.eval.eao_interval {
        EaoInterval::Auto => "auto".to_string(),
        EaoInterval::Fixed(lo, hi) => format!("{lo}:{hi}"),
    };
    let update = if t.update_interval == usize::MAX {
        "never".to_string()
    } else {
        t.update_interval.to_string()
    };
    let projected = match t.projected_channels {
        None => "none".to_string(),
        Some(n) => n.to_string(),
    };
    format!(
        "# effective configuration (thermotrack {version})\n\
         [tracker]\n\
         channels = {channels}\n\
         intensity_cell = {icell}\n\
         hog_cell = {hcell}\n\
         zero_mean_intensity = {zmean}\n\
         motion_threshold = {mthr}\n\
         crop_factor = {crop}\n\
         patch_size = {patch}\n\
         label_sigma_factor = {sigma}\n\
         filter_reg_base = {base}\n\
         filter_reg_edge_factor = {edge}\n\
         projection_reg = {preg}\n\
         learning_rate = {lr}\n\
         memory_capacity = {mem}\n\
         scales = {scales}\n\
         scale_step = {sstep}\n\
         scale_damping = {sdamp}\n\
         update_interval = {update}\n\
         projected_channels = {projected}\n\
         gn_iterations = {gn}\n\
         cg_first_frame = {cgf}\n\
         cg_update = {cgu}\n\
         cg_tolerance = {cgtol}\n\
         score_oversample = {oversample}\n\
         \n\
         [eval]\n\
         fail_threshold = {fthr}\n\
         reinit_gap = {gap}\n\
         eao_interval = {interval}\n\
         \n\
         [run]\n\
         seed = {seed}\n",
        version = thermotrack::VERSION,
        channels = channels.join(","),
        icell = t.channels.intensity_cell,
        hcell = t.channels.hog_cell,
        zmean = t.channels.zero_mean_intensity,
        mthr = t.channels.motion.threshold,
        crop = t.crop_factor,
        patch = t.patch_size,
        sigma = t.label_sigma_factor,
        base = t.filter_reg_base,
        edge = t.filter_reg_edge_factor,
        preg = t.projection_reg,
        lr = t.learning_rate,
        mem = t.memory_capacity,
        scales = t.scale_count,
        sstep = t.scale_step,
        sdamp = t.scale_damping,
        gn = t.gn_iterations,
        cgf = t.cg_first_frame,
        cgu = t.cg_update,
        cgtol = t.cg_tolerance,
        oversample = t.score_oversample,
        fthr = cfg.eval.fail_threshold,
        gap = cfg.eval.reinit_gap,
        seed = cfg.seed,
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::path::PathBuf;
    use std::sync::atomic::{AtomicU64, Ordering};

    static ID: AtomicU64 = AtomicU64::new(0);

    fn write_tmp(content: &str) -> PathBuf {
        let p = std::env::temp_dir().join(format!(
            "thermotrack-cfg-{}-{}.conf",
            std::process::id(),
            ID.fetch_add(1, Ordering::Relaxed)
        ));
        std::fs::write(&p, content).unwrap();
        p
    }

    #[test]
    fn empty_file_yields_defaults() {
        let p = write_tmp("");
        let cfg = parse_config(&p).unwrap();
        assert_eq!(cfg, RunConfig::default());
        assert_eq!(cfg.tracker.learning_rate, 0.003);
        assert_eq!(cfg.tracker.scale_count, 5);
        assert_eq!(cfg.tracker.channels.motion.threshold, 25.0);
        std::fs::remove_file(&p).unwrap();
    }

    #[test]
    fn even_scale_count_is_rejected_with_message() {
        let p = write_tmp("[tracker]\nscales = 4\n");
        let err = parse_config(&p).unwrap_err().to_string();
        assert!(err.contains("odd"), "{err}");
        std::fs::remove_file(&p).unwrap();
    }

    #[test]
    fn unknown_key_is_named() {
        let p = write_tmp("[tracker]\ncolour = blue\n");
        let err = parse_config(&p).unwrap_err().to_string();
        assert!(err.contains("colour"), "{err}");
        std::fs::remove_file(&p).unwrap();
    }

    #[test]
    fn values_and_sections_are_applied() {
        let p = write_tmp(
            "# comment\n[tracker]\nlearning_rate = 0.01\nchannels = intensity,hog\n\
             update_interval = never\n[eval]\neao_interval = 10:50\n[run]\nseed = 7\n",
        );
        let cfg = parse_config(&p).unwrap();
        assert_eq!(cfg.tracker.learning_rate, 0.01);
        assert!(!cfg.tracker.channels.motion.enabled);
        assert_eq!(cfg.tracker.update_interval, usize::MAX);
        assert_eq!(cfg.eval.eao_interval, EaoInterval::Fixed(10, 50));
        assert_eq!(cfg.seed, 7);
        std::fs::remove_file(&p).unwrap();
    }

    #[test]
    fn bad_value_reports_line_number() {
        let p = write_tmp("[tracker]\n\nlearning_rate = fast\n");
        match parse_config(&p).unwrap_err() {
            Error::Parse { line, .. } => assert_eq!(line, 3),
            other => panic!("unexpected error {other}"),
        }
        std::fs::remove_file(&p).unwrap();
    }

    #[test]
    fn effective_config_round_trips() {
        let cfg = RunConfig::default();
        let rendered = render_effective(&cfg);
        let p = write_tmp(&rendered);
        let parsed = parse_config(&p).unwrap();
        assert_eq!(parsed, cfg);
        assert_eq!(render_effective(&parsed), rendered);
        std::fs::remove_file(&p).unwrap();
    }

    #[test]
    fn synth_spec_parses_motion_models() {
        let p = write_tmp(
            "width = 160\nheight = 120\nlength = 30\nmotion = linear:3,0\nseed = 5\n",
        );
        let spec = parse_synth_spec(&p).unwrap();
        assert_eq!(spec.width, 160);
        assert_eq!(spec.motion, MotionModel::Linear { vx: 3.0, vy: 0.0 });
        std::fs::remove_file(&p).unwrap();
    }
}
