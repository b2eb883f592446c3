//! TOML run configuration with defaults and eager, line-anchored validation.

use std::fmt;

use clap::ValueEnum;
use helixforge_core::grid::HostKind;
use helixforge_core::group::{Group, GroupDescriptor, GroupElement, DEFAULT_ENUMERATION_CAP};
use helixforge_core::helix::HelixError;
use helixforge_core::transforms::TransformError;
use helixforge_core::{
    BlowDownSpec, BlowUpSpec, CremonaSpec, CubicHelixSpec, DivisorClass, QuadraticHelixSpec,
    RoundTripStart, Translation,
};
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    VerifyHelix,
    Blowup,
    Blowdown,
    Cremona,
    Invert,
    Roundtrip,
    Dims,
    Grid,
    IbasisCheck,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::VerifyHelix => "verify-helix",
            Command::Blowup => "blowup",
            Command::Blowdown => "blowdown",
            Command::Cremona => "cremona",
            Command::Invert => "invert",
            Command::Roundtrip => "roundtrip",
            Command::Dims => "dims",
            Command::Grid => "grid",
            Command::IbasisCheck => "ibasis-check",
        }
    }

    fn is_geometric(self) -> bool {
        !matches!(self, Command::Dims | Command::Grid | Command::IbasisCheck)
    }
}

impl fmt::Display for Command {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Inclusive integer range, written `[lo, hi]` in the config.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Window(pub i64, pub i64);

impl Window {
    pub fn range(self) -> std::ops::RangeInclusive<i64> {
        self.0..=self.1
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
pub enum Geometry {
    Quadratic {
        #[serde(rename = "L")]
        l: DivisorClass,
        psi: GroupElement,
    },
    Cubic {
        #[serde(rename = "L0")]
        l0: DivisorClass,
        #[serde(rename = "L1")]
        l1: DivisorClass,
        alpha: GroupElement,
    },
}

impl Geometry {
    pub fn quadratic(&self) -> Option<QuadraticHelixSpec> {
        match *self {
            Geometry::Quadratic { l, psi } => Some(QuadraticHelixSpec { l, psi: Translation(psi) }),
            Geometry::Cubic { .. } => None,
        }
    }

    pub fn cubic(&self) -> Option<CubicHelixSpec> {
        match *self {
            Geometry::Cubic { l0, l1, alpha } => Some(CubicHelixSpec { l0, l1, alpha: Translation(alpha) }),
            Geometry::Quadratic { .. } => None,
        }
    }

    pub fn host(&self) -> HostKind {
        match self {
            Geometry::Quadratic { .. } => HostKind::Quadratic,
            Geometry::Cubic { .. } => HostKind::Cubic,
        }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Points {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub p: Option<GroupElement>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub q: Option<GroupElement>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub r: Option<GroupElement>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Windows {
    pub helix: Window,
    pub triviality: Window,
    pub dims: Window,
}

impl Default for Windows {
    fn default() -> Self {
        Windows { helix: Window(-10, 10), triviality: Window(-10, 10), dims: Window(0, 200) }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct GridConfig {
    /// Filled from the geometry kind when absent, quadratic without geometry.
    pub host: Option<HostKind>,
    pub a: Window,
    pub b: Window,
    pub paths: u64,
}

impl Default for GridConfig {
    fn default() -> Self {
        GridConfig { host: None, a: Window(-5, 5), b: Window(-5, 10), paths: 1000 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct IbasisConfig {
    pub a: Window,
    pub b: Window,
    pub n: Window,
    pub h: Window,
}

impl Default for IbasisConfig {
    fn default() -> Self {
        IbasisConfig { a: Window(-12, -2), b: Window(0, 40), n: Window(0, 60), h: Window(0, 20) }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RandomConfig {
    /// Extra seeded random instances checked alongside the configured one.
    pub instances: u64,
    pub tries: u64,
}

impl Default for RandomConfig {
    fn default() -> Self {
        RandomConfig { instances: 0, tries: 200 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Caps {
    /// Largest group order any exhaustive search may enumerate.
    pub enumeration: u64,
    /// Largest total degree of brute-force monomial enumeration.
    pub degree: u64,
    /// Largest number of indices in any single window.
    pub window: u64,
}

impl Default for Caps {
    fn default() -> Self {
        Caps { enumeration: DEFAULT_ENUMERATION_CAP, degree: 60, window: 10_000 }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    #[serde(default)]
    pub seed: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub group: Option<GroupDescriptor>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub geometry: Option<Geometry>,
    #[serde(default)]
    pub points: Points,
    #[serde(default)]
    pub windows: Windows,
    #[serde(default)]
    pub grid: GridConfig,
    #[serde(default)]
    pub ibasis: IbasisConfig,
    #[serde(default)]
    pub random: RandomConfig,
    #[serde(default)]
    pub caps: Caps,
}

/// Command-line values that replace config entries before validation.
#[derive(Debug, Clone, Copy, Default)]
pub struct Overrides {
    /// Replaces the command's main window: `windows.dims` for dims, `grid.b` for grid,
    /// `ibasis.b` for ibasis-check and `windows.helix` otherwise.
    pub window: Option<Window>,
    pub seed: Option<u64>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub struct ConfigError {
    /// 1-based line of the offending entry, when it can be located.
    pub line: Option<usize>,
    pub message: String,
}

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.line {
            Some(line) => write!(f, "config line {line}: {}", self.message),
            None => write!(f, "config: {}", self.message),
        }
    }
}

/// A validated config together with the objects it describes.
#[derive(Debug, Clone)]
pub struct Resolved {
    pub config: RunConfig,
    pub group: Option<Group>,
}

impl Resolved {
    pub fn group(&self) -> &Group {
        self.group.as_ref().expect("validated geometric config carries a group")
    }

    pub fn geometry(&self) -> Geometry {
        self.config.geometry.expect("validated geometric config carries a geometry")
    }

    pub fn blow_up_spec(&self) -> Option<BlowUpSpec> {
        let host = self.geometry().quadratic()?;
        Some(BlowUpSpec { host, p: self.config.points.p?, q: self.config.points.q? })
    }

    pub fn blow_down_spec(&self) -> Option<BlowDownSpec> {
        let host = self.geometry().cubic()?;
        Some(BlowDownSpec { host, p: self.config.points.p? })
    }

    pub fn cremona_spec(&self) -> Option<CremonaSpec> {
        let host = self.geometry().quadratic()?;
        let pts = self.config.points;
        Some(CremonaSpec { host, p: pts.p?, q: pts.q?, r: pts.r? })
    }

    pub fn start(&self) -> Option<RoundTripStart> {
        match self.geometry() {
            Geometry::Quadratic { .. } => self.blow_up_spec().map(RoundTripStart::BlowUp),
            Geometry::Cubic { .. } => self.blow_down_spec().map(RoundTripStart::BlowDown),
        }
    }
}

/// Locates `key` inside `[section]` (`""` for the top level), or the section header itself.
fn locate(text: &str, section: &str, key: Option<&str>) -> Option<usize> {
    let mut current = String::new();
    let mut header = None;
    for (n, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if let Some(name) = line.strip_prefix('[').and_then(|l| l.split(']').next()) {
            current = name.trim().to_string();
            if current == section {
                header = Some(n + 1);
            }
            continue;
        }
        if current != section {
            continue;
        }
        if let Some(key) = key {
            let is_key = line
                .strip_prefix(key)
                .is_some_and(|rest| rest.trim_start().starts_with('='));
            if is_key {
                return Some(n + 1);
            }
        }
    }
    header
}

fn line_of_offset(text: &str, offset: usize) -> usize {
    text[..offset.min(text.len())].matches('\n').count() + 1
}

struct Ctx<'a> {
    text: &'a str,
}

impl Ctx<'_> {
    fn err(&self, section: &str, key: Option<&str>, message: impl Into<String>) -> ConfigError {
        ConfigError { line: locate(self.text, section, key), message: message.into() }
    }
}

fn check_window(ctx: &Ctx, caps: &Caps, section: &str, key: &str, w: Window) -> Result<(), ConfigError> {
    if w.0 > w.1 {
        return Err(ctx.err(section, Some(key), format!("{section}.{key}: lower bound {} exceeds upper bound {}", w.0, w.1)));
    }
    let len = w.1.abs_diff(w.0).saturating_add(1);
    if len > caps.window {
        return Err(ctx.err(section, Some(key), format!("{section}.{key} spans {len} indices, above caps.window = {}", caps.window)));
    }
    Ok(())
}

fn check_nonnegative(ctx: &Ctx, section: &str, key: &str, w: Window) -> Result<(), ConfigError> {
    if w.0 < 0 {
        return Err(ctx.err(section, Some(key), format!("{section}.{key} must start at 0 or above, got {}", w.0)));
    }
    Ok(())
}

fn geometry_key(err: &HelixError) -> Option<&'static str> {
    match err {
        HelixError::Degree { role, .. } => Some(match *role {
            "L0" => "L0",
            "L1" => "L1",
            _ => "L",
        }),
        _ => None,
    }
}

/// Maps a transform rejection to the config entry that causes it.
fn transform_error(ctx: &Ctx, err: TransformError) -> ConfigError {
    let (section, key) = match &err {
        TransformError::SameTauOrbit { second, .. } => ("points", Some(*second)),
        TransformError::Collinear => ("points", Some("r")),
        TransformError::Msplits { .. } => ("points", Some("q")),
        TransformError::TrivialTau => ("geometry", None),
        TransformError::Helix(h) => ("geometry", geometry_key(h)),
        _ => ("points", None),
    };
    ctx.err(section, key, err.to_string())
}

fn require_point(ctx: &Ctx, cfg: &RunConfig, cmd: Command, key: &str) -> Result<(), ConfigError> {
    let present = match key {
        "p" => cfg.points.p.is_some(),
        "q" => cfg.points.q.is_some(),
        _ => cfg.points.r.is_some(),
    };
    if present {
        Ok(())
    } else {
        Err(ctx.err("points", None, format!("{cmd} needs points.{key}")))
    }
}

/// Parses TOML, applies overrides, fills defaults and checks everything `cmd` will rely on.
pub fn parse_config(text: &str, cmd: Command, overrides: Overrides) -> Result<Resolved, ConfigError> {
    let ctx = Ctx { text };
    let mut cfg: RunConfig = toml::from_str(text).map_err(|e| ConfigError {
        line: e.span().map(|s| line_of_offset(text, s.start)),
        message: e.message().to_string(),
    })?;

    if let Some(seed) = overrides.seed {
        cfg.seed = seed;
    }
    if let Some(w) = overrides.window {
        match cmd {
            Command::Dims => cfg.windows.dims = w,
            Command::Grid => cfg.grid.b = w,
            Command::IbasisCheck => cfg.ibasis.b = w,
            _ => cfg.windows.helix = w,
        }
    }
    if cfg.grid.host.is_none() {
        cfg.grid.host = Some(cfg.geometry.map_or(HostKind::Quadratic, |g| g.host()));
    }

    let caps = cfg.caps;
    for (section, key, w) in [
        ("windows", "helix", cfg.windows.helix),
        ("windows", "triviality", cfg.windows.triviality),
        ("windows", "dims", cfg.windows.dims),
        ("grid", "a", cfg.grid.a),
        ("grid", "b", cfg.grid.b),
        ("ibasis", "a", cfg.ibasis.a),
        ("ibasis", "b", cfg.ibasis.b),
        ("ibasis", "n", cfg.ibasis.n),
        ("ibasis", "h", cfg.ibasis.h),
    ] {
        check_window(&ctx, &caps, section, key, w)?;
    }
    check_nonnegative(&ctx, "windows", "dims", cfg.windows.dims)?;
    for key in ["b", "n", "h"] {
        let w = match key {
            "b" => cfg.ibasis.b,
            "n" => cfg.ibasis.n,
            _ => cfg.ibasis.h,
        };
        check_nonnegative(&ctx, "ibasis", key, w)?;
    }
    if cmd == Command::IbasisCheck {
        let top = (cfg.ibasis.a.1 + cfg.ibasis.b.1).max(cfg.ibasis.n.1);
        if top > caps.degree as i64 {
            return Err(ctx.err("ibasis", None, format!(
                "brute-force degree {top} exceeds caps.degree = {}", caps.degree
            )));
        }
    }

    if !cmd.is_geometric() {
        return Ok(Resolved { group: None, config: cfg });
    }

    let descriptor = cfg.group.ok_or_else(|| ctx.err("group", None, format!("{cmd} needs a [group] section")))?;
    let group = Group::with_cap(descriptor, caps.enumeration).map_err(|e| ctx.err("group", None, e.to_string()))?;
    group.order().map_err(|e| ctx.err("caps", Some("enumeration"), e.to_string()))?;

    let geometry = cfg.geometry.ok_or_else(|| ctx.err("geometry", None, format!("{cmd} needs a [geometry] section")))?;
    let helix_check = match geometry {
        Geometry::Quadratic { l, psi } => QuadraticHelixSpec::new(&group, l, Translation(psi)).map(|_| ()),
        Geometry::Cubic { l0, l1, alpha } => CubicHelixSpec::new(&group, l0, l1, Translation(alpha)).map(|_| ()),
    };
    helix_check.map_err(|e| ctx.err("geometry", geometry_key(&e), e.to_string()))?;

    for (key, point) in [("p", cfg.points.p), ("q", cfg.points.q), ("r", cfg.points.r)] {
        if let Some(x) = point {
            group.check(&x).map_err(|e| ctx.err("points", Some(key), e.to_string()))?;
        }
    }

    let wrong_kind = |expected: &str| ctx.err("geometry", Some("kind"), format!("{cmd} needs a {expected} geometry"));
    let resolved = Resolved { group: Some(group), config: cfg };
    let group = resolved.group();
    match cmd {
        Command::Blowup => {
            if geometry.quadratic().is_none() {
                return Err(wrong_kind("quadratic"));
            }
            require_point(&ctx, &resolved.config, cmd, "p")?;
            require_point(&ctx, &resolved.config, cmd, "q")?;
            resolved.blow_up_spec().unwrap().validate(group).map_err(|e| transform_error(&ctx, e))?;
        }
        Command::Cremona => {
            if geometry.quadratic().is_none() {
                return Err(wrong_kind("quadratic"));
            }
            for key in ["p", "q", "r"] {
                require_point(&ctx, &resolved.config, cmd, key)?;
            }
            resolved.cremona_spec().unwrap().validate(group).map_err(|e| transform_error(&ctx, e))?;
        }
        Command::Blowdown => {
            if geometry.cubic().is_none() {
                return Err(wrong_kind("cubic"));
            }
            require_point(&ctx, &resolved.config, cmd, "p")?;
            resolved.blow_down_spec().unwrap().validate(group).map_err(|e| transform_error(&ctx, e))?;
        }
        Command::Invert | Command::Roundtrip => {
            require_point(&ctx, &resolved.config, cmd, "p")?;
            if geometry.quadratic().is_some() {
                require_point(&ctx, &resolved.config, cmd, "q")?;
            }
            // the orbit hypothesis is reported by these commands, not enforced
            resolved.start().unwrap().validate_structure(group).map_err(|e| transform_error(&ctx, e))?;
        }
        Command::VerifyHelix => {}
        Command::Dims | Command::Grid | Command::IbasisCheck => unreachable!(),
    }
    Ok(resolved)
}
