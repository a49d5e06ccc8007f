//! Run configuration: defaults, then the MONOGAMY_SEED fallback, then the
//! key=value config file, then command-line flags.

use std::path::PathBuf;

use monogamy_core::roof::RoofConfig;
use monogamy_core::Seed;

pub const DEFAULT_SEED: u64 = 20140901;

#[derive(Clone, Debug)]
pub struct RunConfig {
    pub seed: u64,
    pub samples: Option<usize>,
    pub grid_rows: Option<usize>,
    pub grid_cols: Option<usize>,
    pub out_dir: PathBuf,
    pub tol: Option<f64>,
    pub restarts: usize,
    pub focus: usize,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            seed: DEFAULT_SEED,
            samples: None,
            grid_rows: None,
            grid_cols: None,
            out_dir: PathBuf::from("."),
            tol: None,
            restarts: 32,
            focus: 0,
        }
    }
}

impl RunConfig {
    pub fn roof_config(&self) -> RoofConfig {
        RoofConfig::default()
            .with_restarts(self.restarts)
            .with_seed(Seed(self.seed))
    }

    pub fn apply_env(&mut self) -> Result<(), String> {
        if let Ok(v) = std::env::var("MONOGAMY_SEED") {
            self.seed = v
                .parse()
                .map_err(|_| format!("MONOGAMY_SEED `{v}` is not a 64-bit unsigned integer"))?;
        }
        Ok(())
    }

    pub fn apply_key(&mut self, key: &str, value: &str) -> Result<(), String> {
        let parse_usize = |v: &str| {
            v.parse::<usize>()
                .map_err(|_| format!("`{v}` is not a positive integer"))
        };
        match key {
            "seed" => {
                self.seed = value
                    .parse()
                    .map_err(|_| format!("seed `{value}` is not a 64-bit unsigned integer"))?;
            }
            "samples" => {
                let n = parse_usize(value)?;
                if n == 0 {
                    return Err("samples must be positive".into());
                }
                self.samples = Some(n);
            }
            "grid" => {
                let (r, c) = parse_grid(value)?;
                self.grid_rows = Some(r);
                self.grid_cols = Some(c);
            }
            "out" => self.out_dir = PathBuf::from(value),
            "tol" => {
                let t: f64 = value
                    .parse()
                    .map_err(|_| format!("tol `{value}` is not a float"))?;
                if !t.is_finite() || t <= 0.0 {
                    return Err("tol must be positive".into());
                }
                self.tol = Some(t);
            }
            "restarts" => {
                let n = parse_usize(value)?;
                if n == 0 {
                    return Err("restarts must be positive".into());
                }
                self.restarts = n;
            }
            "focus" => self.focus = parse_usize(value)?,
            other => return Err(format!("unknown configuration key `{other}`")),
        }
        Ok(())
    }

    pub fn apply_config_file(&mut self, path: &str) -> Result<(), String> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| format!("cannot read config {path}: {e}"))?;
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| format!("{path}:{}: expected key=value", lineno + 1))?;
            self.apply_key(key.trim(), value.trim())
                .map_err(|e| format!("{path}:{}: {e}", lineno + 1))?;
        }
        Ok(())
    }
}

pub fn parse_grid(value: &str) -> Result<(usize, usize), String> {
    let parts: Vec<&str> = value.split('x').collect();
    let parse = |v: &str| {
        v.parse::<usize>()
            .map_err(|_| format!("grid component `{v}` is not a positive integer"))
    };
    match parts.as_slice() {
        [n] => {
            let n = parse(n)?;
            Ok((n, n))
        }
        [r, c] => Ok((parse(r)?, parse(c)?)),
        _ => Err(format!("grid `{value}` must be N or RxC")),
    }
}
