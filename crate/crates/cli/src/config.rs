//! Run configuration: map source, base, battery, penalties and weights.
//!
//! Values come from an optional TOML file and are then overridden by
//! command-line flags.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use covplan_core::{
    build_grid, generate_gaussian_map, load_mask_map, shipped, CellIndex, ClassScores, Energy,
    GaussianSpec, GridMap, ImportanceClass, PenaltyConfig, Thresholds, WeightVector,
};
use serde::Deserialize;

use crate::error::{CliError, Result};

#[derive(Debug, Clone, PartialEq)]
pub enum MapSource {
    /// One of the bundled maps (`island`, `gaussian`).
    Shipped(String),
    /// A `B/G/Y/R` mask file.
    Mask(PathBuf),
    Gaussian(GaussianSpec),
    Inline {
        width: u32,
        height: u32,
        cells: Vec<(CellIndex, ImportanceClass)>,
    },
}

impl MapSource {
    /// Parses a map reference: `shipped:<name>`, `gaussian:<params>`, or a mask path.
    pub fn parse_ref(s: &str) -> Result<Self> {
        if let Some(name) = s.strip_prefix("shipped:") {
            if shipped::by_name(name).is_none() {
                return Err(CliError::Config(format!("no bundled map named {name:?}")));
            }
            Ok(MapSource::Shipped(name.to_string()))
        } else if let Some(params) = s.strip_prefix("gaussian:") {
            Ok(MapSource::Gaussian(parse_gaussian(params)?))
        } else {
            Ok(MapSource::Mask(PathBuf::from(s)))
        }
    }

    /// Canonical reference string; `parse_ref` reads it back (inline maps excepted).
    pub fn describe(&self) -> String {
        match self {
            MapSource::Shipped(name) => format!("shipped:{name}"),
            MapSource::Mask(path) => path.display().to_string(),
            MapSource::Gaussian(spec) => format!("gaussian:{}", format_gaussian(spec)),
            MapSource::Inline { .. } => "inline".to_string(),
        }
    }

    /// Short identifier safe for file names.
    pub fn slug(&self) -> String {
        let raw = match self {
            MapSource::Shipped(name) => name.clone(),
            MapSource::Mask(path) => path
                .file_stem()
                .map(|s| s.to_string_lossy().into_owned())
                .unwrap_or_else(|| "mask".into()),
            MapSource::Gaussian(spec) => format!("gaussian-{}", spec.seed),
            MapSource::Inline { .. } => "inline".into(),
        };
        raw.chars()
            .map(|c| {
                if c.is_ascii_alphanumeric() || c == '-' {
                    c
                } else {
                    '_'
                }
            })
            .collect()
    }

    pub fn load(&self, base_dir: Option<&Path>) -> Result<GridMap> {
        Ok(match self {
            MapSource::Shipped(name) => shipped::by_name(name)
                .ok_or_else(|| CliError::Config(format!("no bundled map named {name:?}")))?,
            MapSource::Mask(path) => {
                let path = match base_dir {
                    Some(dir) if path.is_relative() => dir.join(path),
                    _ => path.clone(),
                };
                let text = std::fs::read_to_string(&path)
                    .map_err(|source| CliError::Read { path, source })?;
                load_mask_map(&text)?
            }
            MapSource::Gaussian(spec) => generate_gaussian_map(spec)?,
            MapSource::Inline {
                width,
                height,
                cells,
            } => build_grid(*width, *height, 1.0, cells)?,
        })
    }
}

fn floats(s: &str, what: &str) -> Result<Vec<f64>> {
    s.split(',')
        .map(|v| {
            v.trim()
                .parse::<f64>()
                .map_err(|_| CliError::Config(format!("bad number {v:?} in {what}")))
        })
        .collect()
}

fn exactly<const N: usize>(s: &str, what: &str) -> Result<[f64; N]> {
    let v = floats(s, what)?;
    v.try_into().map_err(|v: Vec<f64>| {
        CliError::Config(format!("{what} needs {N} values, got {}", v.len()))
    })
}

pub fn parse_alphas(s: &str) -> Result<WeightVector> {
    let [a1, a2, a3] = exactly::<3>(s, "--alphas")?;
    Ok(WeightVector::new(a1, a2, a3)?)
}

pub fn parse_scores(s: &str) -> Result<ClassScores> {
    let [z, l, m, h] = exactly::<4>(s, "--scores")?;
    Ok(ClassScores::new(z, l, m, h)?)
}

pub fn parse_batteries(s: &str) -> Result<Vec<Energy>> {
    let list = s
        .split(',')
        .map(|v| {
            v.trim()
                .parse::<Energy>()
                .map_err(|_| CliError::Config(format!("bad battery value {v:?}")))
        })
        .collect::<Result<Vec<_>>>()?;
    if list.is_empty() {
        return Err(CliError::Config("battery list is empty".into()));
    }
    Ok(list)
}

pub fn parse_cell(s: &str) -> Result<CellIndex> {
    s.parse::<CellIndex>()
        .map_err(|e| CliError::Config(format!("bad base {s:?}: {e}")))
}

/// Parses `seed=… mean=x,y cov=a,b,c,d thresholds=h,m,l [size=WxH]`.
pub fn parse_gaussian(s: &str) -> Result<GaussianSpec> {
    let mut seed = None;
    let mut mean = None;
    let mut cov = None;
    let mut thresholds = None;
    let mut size = (15, 15);
    for token in s
        .split(|c: char| c.is_whitespace() || c == ';')
        .filter(|t| !t.is_empty())
    {
        let (key, value) = token
            .split_once('=')
            .ok_or_else(|| CliError::Config(format!("expected key=value, got {token:?}")))?;
        match key {
            "seed" => {
                seed = Some(
                    value
                        .parse::<u64>()
                        .map_err(|_| CliError::Config(format!("bad gaussian seed {value:?}")))?,
                )
            }
            "mean" => mean = Some(exactly::<2>(value, "gaussian mean")?),
            "cov" => cov = Some(exactly::<4>(value, "gaussian cov")?),
            "thresholds" => thresholds = Some(exactly::<3>(value, "gaussian thresholds")?),
            "size" => {
                let (w, h) = value
                    .split_once('x')
                    .ok_or_else(|| CliError::Config(format!("size must be WxH, got {value:?}")))?;
                let dim = |v: &str| {
                    v.parse::<u32>()
                        .map_err(|_| CliError::Config(format!("bad gaussian size {value:?}")))
                };
                size = (dim(w)?, dim(h)?);
            }
            other => return Err(CliError::Config(format!("unknown gaussian key {other:?}"))),
        }
    }
    let missing = |k: &str| CliError::Config(format!("gaussian map needs `{k}=`"));
    let [a, b, c, d] = cov.ok_or_else(|| missing("cov"))?;
    let [high, medium, low] = thresholds.ok_or_else(|| missing("thresholds"))?;
    Ok(GaussianSpec {
        width: size.0,
        height: size.1,
        mean: mean.ok_or_else(|| missing("mean"))?,
        covariance: [[a, b], [c, d]],
        thresholds: Thresholds { high, medium, low },
        seed: seed.ok_or_else(|| missing("seed"))?,
    })
}

pub fn format_gaussian(spec: &GaussianSpec) -> String {
    let [[a, b], [c, d]] = spec.covariance;
    let t = spec.thresholds;
    let mut out = String::new();
    let _ = write!(
        out,
        "seed={} mean={},{} cov={a},{b},{c},{d} thresholds={},{},{} size={}x{}",
        spec.seed, spec.mean[0], spec.mean[1], t.high, t.medium, t.low, spec.width, spec.height
    );
    out
}

/// On-disk configuration. Every field is optional; flags fill the gaps.
#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileConfig {
    pub map: Option<String>,
    pub gaussian: Option<GaussianTable>,
    pub inline: Option<InlineTable>,
    pub cell_size: Option<f64>,
    pub scores: Option<[f64; 4]>,
    pub base: Option<[u32; 2]>,
    pub battery: Option<Energy>,
    pub batteries: Option<Vec<Energy>>,
    pub revisit_penalty: Option<f64>,
    pub unspent_penalty: Option<f64>,
    pub alphas: Option<[f64; 3]>,
    pub out: Option<PathBuf>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GaussianTable {
    pub seed: u64,
    pub mean: [f64; 2],
    pub covariance: [[f64; 2]; 2],
    pub thresholds: [f64; 3],
    #[serde(default = "default_side")]
    pub width: u32,
    #[serde(default = "default_side")]
    pub height: u32,
}

fn default_side() -> u32 {
    15
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InlineTable {
    pub width: u32,
    pub height: u32,
    #[serde(default)]
    pub cells: Vec<InlineCell>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InlineCell {
    pub x: u32,
    pub y: u32,
    pub class: String,
}

impl FileConfig {
    pub fn read(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|source| CliError::Read {
            path: path.to_path_buf(),
            source,
        })?;
        toml::from_str(&text)
            .map_err(|e| CliError::Config(format!("{}: {}", path.display(), e.message())))
    }

    fn map_source(&self) -> Result<Option<MapSource>> {
        let present = [
            self.map.is_some(),
            self.gaussian.is_some(),
            self.inline.is_some(),
        ]
        .iter()
        .filter(|&&p| p)
        .count();
        if present > 1 {
            return Err(CliError::Config(
                "config file names more than one map source (map, gaussian, inline)".into(),
            ));
        }
        if let Some(m) = &self.map {
            return MapSource::parse_ref(m).map(Some);
        }
        if let Some(g) = &self.gaussian {
            let [[a, b], [c, d]] = g.covariance;
            let [high, medium, low] = g.thresholds;
            return Ok(Some(MapSource::Gaussian(GaussianSpec {
                width: g.width,
                height: g.height,
                mean: g.mean,
                covariance: [[a, b], [c, d]],
                thresholds: Thresholds { high, medium, low },
                seed: g.seed,
            })));
        }
        if let Some(i) = &self.inline {
            let cells = i
                .cells
                .iter()
                .map(|c| {
                    Ok((
                        CellIndex::new(c.x, c.y),
                        c.class.parse::<ImportanceClass>()?,
                    ))
                })
                .collect::<Result<Vec<_>>>()?;
            return Ok(Some(MapSource::Inline {
                width: i.width,
                height: i.height,
                cells,
            }));
        }
        Ok(None)
    }
}

/// Command-line values; each one present wins over the file.
#[derive(Debug, Default, Clone)]
pub struct Overrides {
    pub maps: Vec<String>,
    pub gaussian: Option<String>,
    pub bases: Vec<String>,
    pub battery: Option<Energy>,
    pub batteries: Option<String>,
    pub revisit_penalty: Option<f64>,
    pub unspent_penalty: Option<f64>,
    pub alphas: Option<String>,
    pub scores: Option<String>,
    pub cell_size: Option<f64>,
    pub out: Option<PathBuf>,
}

/// A fully resolved configuration. May name several maps and bases (for sweeps).
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub maps: Vec<MapSource>,
    pub bases: Vec<CellIndex>,
    pub battery: Option<Energy>,
    pub batteries: Option<Vec<Energy>>,
    pub penalties: PenaltyConfig,
    pub weights: WeightVector,
    pub scores: ClassScores,
    pub cell_size: f64,
    pub out_dir: PathBuf,
    /// Directory that relative mask paths in the config file are resolved against.
    pub config_dir: Option<PathBuf>,
}

impl RunConfig {
    pub fn resolve(file: Option<(&Path, FileConfig)>, cli: &Overrides) -> Result<Self> {
        let (config_dir, file) = match file {
            Some((path, cfg)) => (path.parent().map(Path::to_path_buf), cfg),
            None => (None, FileConfig::default()),
        };

        if !cli.maps.is_empty() && cli.gaussian.is_some() {
            return Err(CliError::Config(
                "give either --map or --gaussian, not both".into(),
            ));
        }
        let mut from_cli = false;
        let maps = if let Some(g) = &cli.gaussian {
            from_cli = true;
            vec![MapSource::Gaussian(parse_gaussian(g)?)]
        } else if !cli.maps.is_empty() {
            from_cli = true;
            cli.maps
                .iter()
                .map(|m| MapSource::parse_ref(m))
                .collect::<Result<_>>()?
        } else {
            file.map_source()?.into_iter().collect()
        };

        let bases = if !cli.bases.is_empty() {
            cli.bases
                .iter()
                .map(|b| parse_cell(b))
                .collect::<Result<_>>()?
        } else {
            file.base
                .map(|[x, y]| vec![CellIndex::new(x, y)])
                .unwrap_or_default()
        };

        let defaults = PenaltyConfig::default();
        let penalties = PenaltyConfig::new(
            cli.revisit_penalty
                .or(file.revisit_penalty)
                .unwrap_or(defaults.revisit_penalty),
            cli.unspent_penalty
                .or(file.unspent_penalty)
                .unwrap_or(defaults.unspent_penalty),
        )?;
        let weights = match (&cli.alphas, file.alphas) {
            (Some(s), _) => parse_alphas(s)?,
            (None, Some([a, b, c])) => WeightVector::new(a, b, c)?,
            (None, None) => WeightVector::default(),
        };
        let scores = match (&cli.scores, file.scores) {
            (Some(s), _) => parse_scores(s)?,
            (None, Some([z, l, m, h])) => ClassScores::new(z, l, m, h)?,
            (None, None) => ClassScores::default(),
        };
        let batteries = match &cli.batteries {
            Some(s) => Some(parse_batteries(s)?),
            None => file.batteries.clone(),
        };
        let out_dir = cli
            .out
            .clone()
            .or_else(|| file.out.clone())
            .unwrap_or_else(|| PathBuf::from("out"));

        Ok(Self {
            maps,
            bases,
            battery: cli.battery.or(file.battery),
            batteries,
            penalties,
            weights,
            scores,
            cell_size: cli.cell_size.or(file.cell_size).unwrap_or(1.0),
            out_dir,
            config_dir: if from_cli { None } else { config_dir },
        })
    }

    /// Loads a map and applies the configured cell size and class scores.
    pub fn load_map(&self, source: &MapSource) -> Result<GridMap> {
        let grid = source.load(self.config_dir.as_deref())?;
        Ok(grid
            .with_scores(self.scores)
            .with_cell_size(self.cell_size)?)
    }

    pub fn single_map(&self) -> Result<&MapSource> {
        match self.maps.as_slice() {
            [one] => Ok(one),
            [] => Err(CliError::Config(
                "no map given (use --map, --gaussian or a config file)".into(),
            )),
            _ => Err(CliError::Config(
                "exactly one map source is required here".into(),
            )),
        }
    }

    pub fn single_base(&self) -> Result<CellIndex> {
        match self.bases.as_slice() {
            [one] => Ok(*one),
            [] => Err(CliError::Config("no base given (use --base X,Y)".into())),
            _ => Err(CliError::Config("exactly one base is required here".into())),
        }
    }

    pub fn single_battery(&self) -> Result<Energy> {
        let b = self
            .battery
            .ok_or_else(|| CliError::Config("no battery given (use --battery N)".into()))?;
        if b < 0 {
            return Err(CliError::Config(format!(
                "battery must be nonnegative, got {b}"
            )));
        }
        Ok(b)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gaussian_string_round_trips() {
        let spec = shipped::gaussian_spec();
        let text = format_gaussian(&spec);
        assert_eq!(parse_gaussian(&text).unwrap(), spec);
        let src = MapSource::Gaussian(spec);
        assert_eq!(MapSource::parse_ref(&src.describe()).unwrap(), src);
    }

    #[test]
    fn gaussian_string_errors() {
        assert!(parse_gaussian("seed=1 mean=1,2").is_err());
        assert!(parse_gaussian("seed=1 mean=1 cov=1,0,0,1 thresholds=3,2,1").is_err());
        assert!(parse_gaussian("bogus").is_err());
    }

    #[test]
    fn cli_overrides_file() {
        let file: FileConfig = toml::from_str(
            r#"
            map = "shipped:island"
            base = [7, 6]
            battery = 25
            revisit_penalty = 50
            alphas = [1, 2, 3]
            "#,
        )
        .unwrap();
        let cli = Overrides {
            battery: Some(40),
            alphas: Some("0,0,1".into()),
            ..Default::default()
        };
        let cfg = RunConfig::resolve(Some((Path::new("cfg.toml"), file)), &cli).unwrap();
        assert_eq!(cfg.battery, Some(40));
        assert_eq!(cfg.weights, WeightVector::new(0.0, 0.0, 1.0).unwrap());
        assert_eq!(cfg.penalties.revisit_penalty, 50.0);
        assert_eq!(cfg.single_base().unwrap(), CellIndex::new(7, 6));
        assert_eq!(
            cfg.single_map().unwrap(),
            &MapSource::Shipped("island".into())
        );
    }

    #[test]
    fn two_map_sources_are_rejected() {
        let file: FileConfig = toml::from_str(
            r#"
            map = "shipped:island"
            [inline]
            width = 2
            height = 2
            "#,
        )
        .unwrap();
        assert!(
            RunConfig::resolve(Some((Path::new("c.toml"), file)), &Overrides::default()).is_err()
        );
        let cli = Overrides {
            maps: vec!["shipped:island".into()],
            gaussian: Some(format_gaussian(&shipped::gaussian_spec())),
            ..Default::default()
        };
        assert!(RunConfig::resolve(None, &cli).is_err());
    }

    #[test]
    fn inline_maps_load() {
        let file: FileConfig = toml::from_str(
            r#"
            base = [1, 1]
            [inline]
            width = 3
            height = 2
            cells = [{ x = 3, y = 2, class = "high" }]
            "#,
        )
        .unwrap();
        let cfg =
            RunConfig::resolve(Some((Path::new("c.toml"), file)), &Overrides::default()).unwrap();
        let grid = cfg.load_map(cfg.single_map().unwrap()).unwrap();
        assert_eq!(grid.importance(CellIndex::new(3, 2)), 100.0);
        assert_eq!(grid.to_mask(), "BBB\nBBR");
    }

    #[test]
    fn list_parsers() {
        assert_eq!(parse_batteries("20, 30,40").unwrap(), vec![20, 30, 40]);
        assert!(parse_batteries("20,x").is_err());
        assert!(parse_alphas("1,2").is_err());
        assert_eq!(parse_scores("0,2,20,200").unwrap().high, 200.0);
        assert!(parse_scores("0,-1,2,3").is_err());
        assert!(parse_cell("3").is_err());
    }
}
