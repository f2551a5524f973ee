//! Synthetic datasets and their JSON-lines format.
//!
//! The first line is a header `{"setting", "n", "grid_u", "seed", "dim"}`;
//! each further line is one object `{"setting", "color", "coords"}`.

use crate::error::{CrcError, Result};
use crate::geom::*;
use crate::oracle::{Instance, Setting};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use std::io::{BufRead, Write};
use std::str::FromStr;

#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum Distribution {
    Uniform,
    /// Each color lives in a small window around its own center.
    Clustered,
    /// Each color's points lie on an anti-diagonal, so every point is on
    /// its color's skyline.
    SkylineAdversarial,
}

impl FromStr for Distribution {
    type Err = CrcError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "uniform" => Ok(Distribution::Uniform),
            "clustered" => Ok(Distribution::Clustered),
            "skyline-adversarial" => Ok(Distribution::SkylineAdversarial),
            _ => Err(CrcError::BadParams(format!("unknown distribution `{s}`"))),
        }
    }
}

#[derive(Clone, Debug)]
pub struct GenSpec {
    pub setting: Setting,
    pub n: usize,
    pub colors: u32,
    pub dist: Distribution,
    pub seed: u64,
    /// Coordinates are drawn from `[0, grid_u)`.
    pub grid_u: i64,
    /// Dimension, used only by the `ortho-rd` setting.
    pub dim: usize,
}

impl GenSpec {
    pub fn new(setting: Setting, n: usize, colors: u32, dist: Distribution, seed: u64) -> Self {
        Self { setting, n, colors, dist, seed, grid_u: (n as i64).max(16), dim: 2 }
    }

    pub fn dim_of_points(&self) -> usize {
        match self.setting {
            Setting::IntervalStab1d => 1,
            Setting::Dom3d | Setting::Stab5s3d => 3,
            Setting::OrthoRd => self.dim,
            _ => 2,
        }
    }
}

/// Draws a dataset; identical specs give identical instances.
pub fn generate(spec: &GenSpec) -> Result<Instance> {
    if spec.colors == 0 && spec.n > 0 {
        return Err(CrcError::BadParams("at least one color is needed".into()));
    }
    if spec.grid_u < 2 {
        return Err(CrcError::BadParams(format!("grid size {} is too small", spec.grid_u)));
    }
    if spec.setting == Setting::OrthoRd && !(1..=4).contains(&spec.dim) {
        return Err(CrcError::SettingUnsupported(format!("dimension {}", spec.dim)));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let u = spec.grid_u;
    let d = spec.dim_of_points();
    let centers: Vec<Vec<i64>> = (0..spec.colors).map(|_| (0..d).map(|_| rng.gen_range(0..u)).collect()).collect();
    let window = (u / 8).max(1);
    let draw = |rng: &mut ChaCha8Rng| -> (u32, Vec<i64>) {
        let c = rng.gen_range(0..spec.colors.max(1));
        let coords = match spec.dist {
            Distribution::Uniform => (0..d).map(|_| rng.gen_range(0..u)).collect(),
            Distribution::Clustered => {
                centers[c as usize].iter().map(|&m| (m + rng.gen_range(-window..=window)).clamp(0, u - 1)).collect()
            }
            Distribution::SkylineAdversarial => {
                let t = rng.gen_range(0..u);
                let mut v: Vec<i64> = (0..d).map(|_| rng.gen_range(0..u)).collect();
                v[0] = t;
                if d > 1 {
                    v[1] = u - 1 - t;
                }
                v
            }
        };
        (c, coords)
    };
    let n = spec.n;
    let mut pts = Vec::with_capacity(n);
    for _ in 0..n {
        pts.push(draw(&mut rng));
    }
    let len = |rng: &mut ChaCha8Rng| rng.gen_range(0..(u / 4).max(1));
    Ok(match spec.setting {
        Setting::IntervalStab1d => {
            Instance::Intervals(pts.iter().map(|(c, p)| ColoredInterval::new(p[0], p[0] + len(&mut rng), *c)).collect())
        }
        Setting::Dom2d => Instance::Dom2d(pts.iter().map(|(c, p)| ColoredPoint2::new(p[0], p[1], *c)).collect()),
        Setting::Range3s2d => Instance::Range3s(pts.iter().map(|(c, p)| ColoredPoint2::new(p[0], p[1], *c)).collect()),
        Setting::Range4s2d => Instance::Range4s(pts.iter().map(|(c, p)| ColoredPoint2::new(p[0], p[1], *c)).collect()),
        Setting::Stab3s2d => Instance::Stab3s(
            pts.iter().map(|(c, p)| ColoredRect3S::new(p[0], p[0] + len(&mut rng), p[1], *c)).collect(),
        ),
        Setting::Dom3d => Instance::Dom3d(pts.iter().map(|(c, p)| ColoredPoint3::new(p[0], p[1], p[2], *c)).collect()),
        Setting::Stab5s3d => Instance::Stab5s(
            pts.iter()
                .map(|(_, p)| {
                    let (w, h) = (len(&mut rng), len(&mut rng));
                    let mut side = |v: i64, inf: i64| if rng.gen_bool(0.2) { inf } else { v };
                    let (x1, y1) = (side(p[0], NEG_INF), side(p[1], NEG_INF));
                    let (x2, y2) = (side(p[0] + w, POS_INF), side(p[1] + h, POS_INF));
                    Rect5::new(x1, x2, y1, y2, p[2])
                })
                .collect(),
        ),
        Setting::OrthoRd => {
            Instance::Ortho { dim: d, points: pts.into_iter().map(|(c, p)| ColoredPointD::new(p, c)).collect() }
        }
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Header {
    pub setting: String,
    pub n: usize,
    pub grid_u: i64,
    pub seed: u64,
    pub dim: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
struct Record {
    setting: String,
    color: u32,
    coords: Vec<i64>,
}

fn records(inst: &Instance) -> Vec<(u32, Vec<i64>)> {
    match inst {
        Instance::Intervals(v) => v.iter().map(|i| (i.color.0, vec![i.lo, i.hi])).collect(),
        Instance::Dom2d(v) | Instance::Range3s(v) | Instance::Range4s(v) => {
            v.iter().map(|p| (p.color.0, vec![p.x, p.y])).collect()
        }
        Instance::Stab3s(v) => v.iter().map(|r| (r.color.0, vec![r.rect.x1, r.rect.x2, r.rect.y])).collect(),
        Instance::Dom3d(v) => v.iter().map(|p| (p.color.0, p.coords.to_vec())).collect(),
        Instance::Stab5s(v) => v.iter().map(|r| (0, vec![r.x1, r.x2, r.y1, r.y2, r.ztop])).collect(),
        Instance::Ortho { points, .. } => points.iter().map(|p| (p.color.0, p.coords.clone())).collect(),
    }
}

fn json_err(e: serde_json::Error) -> CrcError {
    CrcError::BadParams(format!("dataset: {e}"))
}

/// Writes the header and one line per object.
pub fn write_jsonl(inst: &Instance, header: &Header, mut w: impl Write) -> Result<()> {
    writeln!(w, "{}", serde_json::to_string(header).map_err(json_err)?)?;
    for (color, coords) in records(inst) {
        let r = Record { setting: header.setting.clone(), color, coords };
        writeln!(w, "{}", serde_json::to_string(&r).map_err(json_err)?)?;
    }
    Ok(())
}

pub fn read_jsonl(r: impl BufRead) -> Result<(Header, Instance)> {
    let mut lines = r.lines();
    let first = lines.next().ok_or_else(|| CrcError::BadParams("dataset: missing header".into()))??;
    let header: Header = serde_json::from_str(&first).map_err(json_err)?;
    let setting = Setting::from_str(&header.setting)?;
    let mut recs = Vec::with_capacity(header.n);
    for line in lines {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let r: Record = serde_json::from_str(&line).map_err(json_err)?;
        recs.push(r);
    }
    let arity = match setting {
        Setting::IntervalStab1d | Setting::Dom2d | Setting::Range3s2d | Setting::Range4s2d => 2,
        Setting::Stab3s2d | Setting::Dom3d => 3,
        Setting::Stab5s3d => 5,
        Setting::OrthoRd => header.dim,
    };
    if let Some(bad) = recs.iter().find(|r| r.coords.len() != arity) {
        return Err(CrcError::BadParams(format!("dataset: record {:?} has the wrong arity", bad.coords)));
    }
    let it = recs.iter();
    let inst = match setting {
        Setting::IntervalStab1d => {
            Instance::Intervals(it.map(|r| ColoredInterval::new(r.coords[0], r.coords[1], r.color)).collect())
        }
        Setting::Dom2d => Instance::Dom2d(it.map(|r| ColoredPoint2::new(r.coords[0], r.coords[1], r.color)).collect()),
        Setting::Range3s2d => {
            Instance::Range3s(it.map(|r| ColoredPoint2::new(r.coords[0], r.coords[1], r.color)).collect())
        }
        Setting::Range4s2d => {
            Instance::Range4s(it.map(|r| ColoredPoint2::new(r.coords[0], r.coords[1], r.color)).collect())
        }
        Setting::Stab3s2d => {
            Instance::Stab3s(it.map(|r| ColoredRect3S::new(r.coords[0], r.coords[1], r.coords[2], r.color)).collect())
        }
        Setting::Dom3d => {
            Instance::Dom3d(it.map(|r| ColoredPoint3::new(r.coords[0], r.coords[1], r.coords[2], r.color)).collect())
        }
        Setting::Stab5s3d => Instance::Stab5s(
            it.map(|r| Rect5::new(r.coords[0], r.coords[1], r.coords[2], r.coords[3], r.coords[4])).collect(),
        ),
        Setting::OrthoRd => Instance::Ortho {
            dim: header.dim,
            points: it.map(|r| ColoredPointD::new(r.coords.clone(), r.color)).collect(),
        },
    };
    Ok((header, inst))
}
