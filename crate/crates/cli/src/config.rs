//! Layered solve settings: defaults, then a `key=value` file, then `--params`,
//! then dedicated flags.

use std::path::Path;

use oscsat::{IntegratorConfig, Objective, S2Mode, SolveConfig, SystemKind, SystemParams};

#[derive(Debug)]
pub struct ConfigError(pub String);

impl std::fmt::Display for ConfigError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

/// Ordered `key=value` pairs; later entries win.
#[derive(Debug, Default, Clone)]
pub struct Layer(pub Vec<(String, String)>);

impl Layer {
    pub fn parse_file(text: &str) -> Result<Self, ConfigError> {
        let mut out = Vec::new();
        for (n, line) in text.lines().enumerate() {
            let line = line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (k, v) = line
                .split_once('=')
                .ok_or_else(|| ConfigError(format!("config line {}: expected key=value", n + 1)))?;
            out.push((k.trim().to_string(), v.trim().to_string()));
        }
        Ok(Self(out))
    }

    pub fn load(path: &Path) -> std::io::Result<String> {
        std::fs::read_to_string(path)
    }

    /// `A=1.5,As=0.01,...`
    pub fn parse_inline(text: &str) -> Result<Self, ConfigError> {
        let mut out = Vec::new();
        for part in text.split(',').map(str::trim).filter(|p| !p.is_empty()) {
            let (k, v) = part
                .split_once('=')
                .ok_or_else(|| ConfigError(format!("--params entry `{part}`: expected key=value")))?;
            out.push((k.trim().to_string(), v.trim().to_string()));
        }
        Ok(Self(out))
    }

    fn get(&self, key: &str) -> Option<&str> {
        self.0.iter().rev().find(|(k, _)| k == key).map(|(_, v)| v.as_str())
    }
}

const KEYS: &[&str] = &[
    "system", "objective", "mode", "normalized", "A", "As", "omega", "an", "dt", "periods",
    "t_end", "seed", "restarts", "workers", "stride", "window", "oracle",
];

fn parse<T: std::str::FromStr>(key: &str, v: &str) -> Result<T, ConfigError> {
    v.parse()
        .map_err(|_| ConfigError(format!("invalid value `{v}` for `{key}`")))
}

fn parse_bool(key: &str, v: &str) -> Result<bool, ConfigError> {
    match v {
        "1" | "true" | "yes" | "on" => Ok(true),
        "0" | "false" | "no" | "off" => Ok(false),
        _ => Err(ConfigError(format!("invalid value `{v}` for `{key}`"))),
    }
}

/// Builds a solve configuration from `layers`, lowest precedence first.
pub fn resolve(layers: &[&Layer]) -> Result<SolveConfig, ConfigError> {
    for layer in layers {
        if let Some((k, _)) = layer.0.iter().find(|(k, _)| !KEYS.contains(&k.as_str())) {
            return Err(ConfigError(format!("unknown setting `{k}`")));
        }
    }
    let lookup = |key: &str| layers.iter().rev().find_map(|l| l.get(key));
    let err = |e: oscsat::Error| ConfigError(e.to_string());

    let system: SystemKind = match lookup("system") {
        Some(v) => v.parse().map_err(err)?,
        None => SystemKind::One,
    };
    let mut params = match system {
        SystemKind::One => SystemParams::system_one(),
        SystemKind::Two => SystemParams::system_two(),
    };
    if let Some(v) = lookup("A") {
        params.a = parse("A", v)?;
    }
    if let Some(v) = lookup("As") {
        params.a_s = parse("As", v)?;
    }
    if let Some(v) = lookup("omega") {
        params.omega = parse("omega", v)?;
    }
    if let Some(v) = lookup("mode") {
        params.s2_mode = v.parse::<S2Mode>().map_err(err)?;
    }
    if let Some(v) = lookup("normalized") {
        params.kernel_normalized = parse_bool("normalized", v)?;
    }

    let mut cfg = SolveConfig::new(system, params);
    if let Some(v) = lookup("objective") {
        cfg.objective = v.parse::<Objective>().map_err(err)?;
    }
    let mut integ = IntegratorConfig {
        t_end: 100.0 * params.period(),
        ..IntegratorConfig::default()
    };
    if let Some(v) = lookup("dt") {
        integ.dt = parse("dt", v)?;
    }
    if let Some(v) = lookup("an") {
        integ.a_n = parse("an", v)?;
    }
    match (lookup("t_end"), lookup("periods")) {
        (Some(_), Some(_)) => {
            return Err(ConfigError("set either `t_end` or `periods`, not both".into()))
        }
        (Some(v), None) => integ.t_end = parse("t_end", v)?,
        (None, Some(v)) => integ.t_end = parse::<f64>("periods", v)? * params.period(),
        (None, None) => {}
    }
    if let Some(v) = lookup("seed") {
        integ.rng_seed = parse("seed", v)?;
    }
    if let Some(v) = lookup("stride") {
        integ.sample_stride = parse("stride", v)?;
    }
    cfg.integrator = integ;
    if let Some(v) = lookup("restarts") {
        cfg.restarts = parse("restarts", v)?;
    }
    if let Some(v) = lookup("workers") {
        cfg.workers = Some(parse("workers", v)?);
    }
    if let Some(v) = lookup("window") {
        cfg.window_periods = parse("window", v)?;
    }
    if let Some(v) = lookup("oracle") {
        cfg.use_oracle = parse_bool("oracle", v)?;
    }
    cfg.validate().map_err(err)?;
    Ok(cfg)
}
