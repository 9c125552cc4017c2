//! Run configuration: built from flags, optionally overridden by a JSON
//! file, validated, then embedded verbatim in every JSON report.

use std::path::{Path, PathBuf};

use mandelstuff::algebra::PowerMode;
use mandelstuff::dynamics::{Box3, EscapeMode, RadiusPolicy};
use mandelstuff::{EscapeConfig, Window};
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::CliError;

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub subcommand: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ring: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub degree: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub window: Option<[f64; 4]>,
    #[serde(default, rename = "box", skip_serializing_if = "Option::is_none")]
    pub bbox: Option<[f64; 6]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub resolution: Option<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub max_iter: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub escape_radius: Option<RadiusPolicy>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub escape_mode: Option<EscapeMode>,
    /// Fixed values of the coordinates not spanned by the scan.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub slice: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub out: Option<PathBuf>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub format: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub palette: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub method: Option<String>,
    /// Parameter `c` as a flat coordinate list.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub c: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub samples: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub burn_in: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub eps: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub levels: Option<Vec<u32>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub csv: Option<PathBuf>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub svg: Option<PathBuf>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub p: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub frobenius: Option<bool>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub exponent: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub escape_point: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub adjacency: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub bound: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub range: Option<[f64; 2]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub power_mode: Option<PowerMode>,
    /// Additive constant of the Pollard map `x ↦ x² + c (mod n)`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rho_c: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub x0: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub retries: Option<u32>,
}

impl RunConfig {
    pub fn new(subcommand: &str) -> Self {
        Self { subcommand: subcommand.to_string(), ..Self::default() }
    }

    /// Keys present in the JSON file replace the flag values.
    pub fn overlay_file(self, path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Usage(format!("cannot read config {}: {e}", path.display())))?;
        let file: Value =
            serde_json::from_str(&text).map_err(|e| CliError::Usage(format!("config {}: {e}", path.display())))?;
        self.overlay(file)
    }

    pub fn overlay(self, file: Value) -> Result<Self, CliError> {
        let Value::Object(file) = file else {
            return Err(CliError::Usage("config must be a JSON object".into()));
        };
        let Value::Object(mut merged) = serde_json::to_value(&self).expect("config serializes") else { unreachable!() };
        for (k, v) in file {
            if k == "subcommand" && v != Value::String(self.subcommand.clone()) {
                return Err(CliError::Usage(format!("config is for subcommand {v}, not {}", self.subcommand)));
            }
            merged.insert(k, v);
        }
        serde_json::from_value(Value::Object(merged)).map_err(|e| CliError::Usage(format!("config: {e}")))
    }

    pub fn ring(&self) -> &str {
        self.ring.as_deref().unwrap_or("complex")
    }

    pub fn degree(&self) -> u32 {
        self.degree.unwrap_or(2)
    }

    pub fn max_iter(&self) -> u32 {
        self.max_iter.unwrap_or(100)
    }

    pub fn window(&self) -> Result<Window, CliError> {
        let [x0, x1, y0, y1] = self.window.ok_or_else(|| CliError::Usage("missing window".into()))?;
        let w = Window::new(x0, x1, y0, y1);
        w.validate().map_err(|e| CliError::Usage(e.to_string()))?;
        Ok(w)
    }

    pub fn bbox(&self) -> Result<Box3, CliError> {
        let [x0, x1, y0, y1, z0, z1] = self.bbox.ok_or_else(|| CliError::Usage("missing box".into()))?;
        let b = Box3::new(x0, x1, y0, y1, z0, z1);
        b.validate().map_err(|e| CliError::Usage(e.to_string()))?;
        Ok(b)
    }

    pub fn res2(&self) -> Result<(usize, usize), CliError> {
        match self.resolution.as_deref() {
            Some(&[n]) if n > 0 => Ok((n, n)),
            Some(&[w, h]) if w > 0 && h > 0 => Ok((w, h)),
            other => Err(CliError::Usage(format!("expected a WxH resolution, got {other:?}"))),
        }
    }

    pub fn res3(&self) -> Result<(usize, usize, usize), CliError> {
        match self.resolution.as_deref() {
            Some(&[w, h, d]) if w > 0 && h > 0 && d > 0 => Ok((w, h, d)),
            other => Err(CliError::Usage(format!("expected a WxHxD resolution, got {other:?}"))),
        }
    }

    pub fn escape(&self) -> Result<EscapeConfig, CliError> {
        let cfg = EscapeConfig::new(self.max_iter())
            .with_radius(self.escape_radius.unwrap_or(RadiusPolicy::MaxTwoAbsC))
            .with_mode(self.escape_mode.unwrap_or(EscapeMode::Escape));
        cfg.validate().map_err(|e| CliError::Usage(e.to_string()))?;
        Ok(cfg)
    }

    /// Slice coordinate `k`, zero when absent.
    pub fn slice_at(&self, k: usize) -> f64 {
        self.slice.as_ref().and_then(|s| s.get(k).copied()).unwrap_or(0.0)
    }

    pub fn c_coords<const N: usize>(&self) -> Result<[f64; N], CliError> {
        let c = self.c.as_deref().unwrap_or(&[]);
        c.try_into().map_err(|_| CliError::Usage(format!("c needs {N} coordinates, got {}", c.len())))
    }
}

fn floats(s: &str, expect: usize, what: &str) -> Result<Vec<f64>, String> {
    let v: Vec<f64> = s
        .split(',')
        .map(|t| t.trim().parse::<f64>())
        .collect::<Result<_, _>>()
        .map_err(|e| format!("{what} {s:?}: {e}"))?;
    if v.len() != expect {
        return Err(format!("{what} needs {expect} comma-separated numbers, got {}", v.len()));
    }
    if v.iter().any(|x| !x.is_finite()) {
        return Err(format!("{what} has a non-finite value"));
    }
    Ok(v)
}

/// `x0,x1,y0,y1`.
pub fn parse_window(s: &str) -> Result<[f64; 4], String> {
    let v = floats(s, 4, "window")?;
    Ok([v[0], v[1], v[2], v[3]])
}

/// `x0,x1,y0,y1,z0,z1`.
pub fn parse_box(s: &str) -> Result<[f64; 6], String> {
    let v = floats(s, 6, "box")?;
    Ok([v[0], v[1], v[2], v[3], v[4], v[5]])
}

/// `WxH`, `WxHxD`, or a single `N` for a square raster.
pub fn parse_res(s: &str) -> Result<Vec<usize>, String> {
    s.split(['x', 'X']).map(|t| t.trim().parse::<usize>().map_err(|e| format!("resolution {s:?}: {e}"))).collect()
}

pub fn parse_list(s: &str) -> Result<Vec<f64>, String> {
    s.split(',').map(|t| t.trim().parse::<f64>().map_err(|e| format!("{s:?}: {e}"))).collect()
}

pub fn parse_levels(s: &str) -> Result<Vec<u32>, String> {
    s.split(',').map(|t| t.trim().parse::<u32>().map_err(|e| format!("{s:?}: {e}"))).collect()
}

/// `auto` for `max(2, |c|)` or a fixed radius.
pub fn parse_radius(s: &str) -> Result<RadiusPolicy, String> {
    match s {
        "auto" => Ok(RadiusPolicy::MaxTwoAbsC),
        _ => s.parse::<f64>().map(RadiusPolicy::Fixed).map_err(|e| format!("escape radius {s:?}: {e}")),
    }
}

pub fn parse_mode(s: &str) -> Result<EscapeMode, String> {
    match s {
        "escape" => Ok(EscapeMode::Escape),
        "green-threshold" | "green_threshold" => Ok(EscapeMode::GreenThreshold),
        _ => Err(format!("unknown escape mode {s:?} (escape, green-threshold)")),
    }
}
