//! Plumbing behind the `crc` binary: a registry of buildable structures, the
//! differential verifier and the benchmark driver.

use anyhow::{anyhow, bail, Context, Result};
use crc_core::apps_nd::{build_colored_orthocount, OrthoRdConfig};
use crc_core::dataset::{read_jsonl, Header};
use crc_core::oracle::{enumerate_queries, exact_colored_count, exact_standard_count};
use crc_core::ortho2d::{build_colored_3sided, build_colored_4sided, BucketedCApprox, Opening, OrthoConfig};
use crc_core::reductions::ReductionConfig;
use crc_core::stab2d::{ColoredStabCounter, StabCounterConfig};
use crc_core::stab3d::{ColoredDominance3, RecursionTree, SampledConfig, SampledStabber, TreeConfig};
use crc_core::{ApproxAnswer, Instance, Query, Setting};
use serde::Serialize;
use std::fs::File;
use std::io::{BufReader, Write};
use std::path::Path;
use std::time::Instant;

pub const ATTEMPT_CAP_VAR: &str = "CRC_ATTEMPT_CAP";

/// Structure names accepted by `--structure`, with the settings they serve.
pub const STRUCTURES: &[(&str, &str)] = &[
    ("oracle", "any"),
    ("stab2d", "interval-stab-1d, dom2d, stab3s-2d"),
    ("stab3d", "dom3d"),
    ("recursion-tree", "stab5s-3d"),
    ("sampled-5s", "stab5s-3d"),
    ("ortho3s", "range3s-2d"),
    ("capprox3s", "range3s-2d"),
    ("ortho4s", "range4s-2d"),
    ("ortho-rd", "ortho-rd"),
];

#[derive(Clone, Debug)]
pub struct BuildOpts {
    pub eps: f64,
    pub seed: u64,
    pub attempt_cap: usize,
    /// Test hook: inflate every answer so the contract breaks.
    pub corrupt: bool,
}

/// Attempt cap from the environment, or the library default.
pub fn attempt_cap_from_env() -> Result<usize> {
    match std::env::var(ATTEMPT_CAP_VAR) {
        Ok(v) => v.trim().parse().with_context(|| format!("{ATTEMPT_CAP_VAR}={v} is not a count")),
        Err(_) => Ok(crc_core::rng::DEFAULT_ATTEMPT_CAP),
    }
}

/// Exact count: distinct colors, or boxes for the uncolored 5-sided setting.
pub fn truth(inst: &Instance, q: &Query) -> crc_core::Result<u64> {
    let k = match inst {
        Instance::Stab5s(_) => exact_standard_count(inst, q)?,
        _ => exact_colored_count(inst, q)?,
    };
    Ok(k as u64)
}

type Answerer = Box<dyn Fn(&Query) -> crc_core::Result<ApproxAnswer>>;

/// A built structure behind a uniform query interface.
pub struct Built {
    pub name: String,
    pub space_units: usize,
    answer: Answerer,
}

impl Built {
    pub fn query(&self, q: &Query) -> crc_core::Result<ApproxAnswer> {
        (self.answer)(q)
    }
}

fn point3(q: &Query) -> crc_core::Result<[i64; 3]> {
    match q {
        Query::Point3(p) => Ok(*p),
        _ => Err(crc_core::CrcError::QueryMalformed(format!("{q:?} is not a 3D point"))),
    }
}

fn unsupported(name: &str, inst: &Instance) -> anyhow::Error {
    anyhow!("structure `{name}` does not support setting {}", inst.setting())
}

pub fn build(name: &str, inst: &Instance, o: &BuildOpts) -> Result<Built> {
    let red = ReductionConfig { attempt_cap: o.attempt_cap, seed: o.seed, ..Default::default() };
    let sampled = SampledConfig { attempt_cap: o.attempt_cap, seed: o.seed, ..Default::default() };
    let (space_units, answer): (usize, Answerer) = match (name, inst) {
        ("oracle", _) => {
            let inst = inst.clone();
            (inst.len(), Box::new(move |q| Ok(ApproxAnswer::exact(truth(&inst, q)?))))
        }
        ("stab2d", Instance::Intervals(_) | Instance::Dom2d(_) | Instance::Stab3s(_)) => {
            let cfg = StabCounterConfig { attempt_cap: o.attempt_cap, seed: o.seed, ..Default::default() };
            let s = ColoredStabCounter::build(inst, o.eps, &cfg)?;
            (s.space_units(), Box::new(move |q| s.query(q)))
        }
        ("stab3d", Instance::Dom3d(_)) => {
            let s = ColoredDominance3::from_instance(inst, o.eps, &sampled)?;
            (s.space_units(), Box::new(move |q| s.query(q)))
        }
        ("recursion-tree", Instance::Stab5s(r)) => {
            let s = RecursionTree::build(r, o.eps, &TreeConfig::default())?;
            (s.space_units(), Box::new(move |q| Ok(s.query(&point3(q)?))))
        }
        ("sampled-5s", Instance::Stab5s(r)) => {
            let s = SampledStabber::build(r, o.eps, &sampled)?;
            (s.space_units(), Box::new(move |q| Ok(s.query(&point3(q)?))))
        }
        ("ortho3s", Instance::Range3s(p)) => {
            let s = build_colored_3sided(p, o.eps, &OrthoConfig { reduction: red, ..Default::default() })?;
            (s.space_units(), Box::new(move |q| s.query(q)))
        }
        ("capprox3s", Instance::Range3s(p)) => {
            let s = BucketedCApprox::build(p, Opening::Up, &Default::default());
            let space = s.space_units();
            let answer = move |q: &Query| match q {
                Query::Range3s { x1, x2, y } => {
                    Ok(ApproxAnswer::capprox(s.count(*x1, *x2, *y)? as f64, BucketedCApprox::FACTOR))
                }
                _ => Err(crc_core::CrcError::QueryMalformed(format!("{q:?}"))),
            };
            (space, Box::new(answer))
        }
        ("ortho4s", Instance::Range4s(p)) => {
            let s = build_colored_4sided(p, o.eps, &OrthoConfig { reduction: red, ..Default::default() })?;
            (s.space_units(), Box::new(move |q| s.query(q)))
        }
        ("ortho-rd", Instance::Ortho { dim, points }) => {
            let s =
                build_colored_orthocount(points, *dim, o.eps, &OrthoRdConfig { reduction: red, ..Default::default() })?;
            (s.space_units(), Box::new(move |q| s.query(q)))
        }
        (n, _) if STRUCTURES.iter().any(|(s, _)| *s == n) => return Err(unsupported(n, inst)),
        (n, _) => bail!("unknown structure `{n}`"),
    };
    let answer: Answerer = if o.corrupt {
        Box::new(move |q| {
            let mut a = answer(q)?;
            a.value = a.value * 3.0 + 1.0;
            Ok(a)
        })
    } else {
        answer
    };
    Ok(Built { name: name.to_string(), space_units, answer })
}

pub fn load_dataset(path: &Path) -> Result<(Header, Instance)> {
    let f = File::open(path).with_context(|| format!("opening {}", path.display()))?;
    Ok(read_jsonl(BufReader::new(f))?)
}

/// Outcome of one invariant in a verify run.
#[derive(Clone, Debug)]
pub struct Check {
    pub name: &'static str,
    pub violations: usize,
    pub first: Option<String>,
}

#[derive(Clone, Debug)]
pub struct Report {
    pub queries: usize,
    pub exhaustive: bool,
    pub max_ratio_err: f64,
    pub checks: Vec<Check>,
}

impl Report {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.violations == 0)
    }
}

/// Differential suite of `built` against the oracle over at most `budget`
/// enumerated queries. `rebuilt` is a second build from the same seed.
pub fn verify(inst: &Instance, built: &Built, rebuilt: Option<&Built>, budget: usize, seed: u64) -> Result<Report> {
    let universe = enumerate_queries(inst)?.limit(budget, seed);
    let mut checks = [("contract", 0, None), ("empty-is-zero", 0, None), ("reproducible", 0, None)]
        .map(|(name, violations, first)| Check { name, violations, first });
    let flag = |c: &mut Check, what: String| {
        c.violations += 1;
        c.first.get_or_insert(what);
    };
    let mut max_err = 0f64;
    for q in universe.iter() {
        let k = truth(inst, &q)?;
        let a = built.query(&q)?;
        if !a.holds_for(k) {
            flag(&mut checks[0], format!("{q:?}: k={k}, got {} ({:?})", a.value, a.kind));
        }
        if k == 0 && a.value != 0.0 {
            flag(&mut checks[1], format!("{q:?}: got {}", a.value));
        }
        if let Some(b) = rebuilt {
            if b.query(&q)?.value.to_bits() != a.value.to_bits() {
                flag(&mut checks[2], format!("{q:?}"));
            }
        }
        max_err = max_err.max(a.ratio_error(k));
    }
    let checks = checks.into_iter().filter(|c| rebuilt.is_some() || c.name != "reproducible").collect();
    Ok(Report { queries: universe.len(), exhaustive: universe.is_exhaustive(), max_ratio_err: max_err, checks })
}

pub fn print_report(r: &Report, mut w: impl Write) -> std::io::Result<()> {
    let scope = if r.exhaustive { "exhaustive" } else { "sampled" };
    writeln!(w, "queries: {} ({scope})", r.queries)?;
    for c in &r.checks {
        let verdict = if c.violations == 0 { "PASS" } else { "FAIL" };
        write!(w, "{verdict} {}: {} violations", c.name, c.violations)?;
        match &c.first {
            Some(f) => writeln!(w, ", first {f}")?,
            None => writeln!(w)?,
        }
    }
    writeln!(w, "max_ratio_err: {}", r.max_ratio_err)?;
    writeln!(w, "result: {}", if r.passed() { "PASS" } else { "FAIL" })
}

/// One CSV row; field order fixes the header.
#[derive(Clone, Debug, Serialize)]
pub struct BenchRow {
    pub structure: String,
    pub n: usize,
    pub eps: f64,
    pub build_ms: f64,
    pub qps: f64,
    pub space_units: usize,
    pub max_ratio_err: f64,
}

pub const CSV_HEADER: &str = "structure,n,eps,build_ms,qps,space_units,max_ratio_err";

/// Builds `reps` times and times queries over a fixed sample of the
/// universe. Reports the median build time and the best query rate.
pub fn bench(inst: &Instance, name: &str, o: &BuildOpts, reps: usize, queries: usize) -> Result<BenchRow> {
    let qs: Vec<Query> = enumerate_queries(inst)?.limit(queries, o.seed).iter().collect();
    let truth = qs.iter().map(|q| Ok(truth(inst, q)?)).collect::<Result<Vec<_>>>()?;
    let (mut builds, mut best_qps, mut space, mut max_err) = (Vec::new(), 0f64, 0, 0f64);
    for _ in 0..reps.max(1) {
        let t = Instant::now();
        let b = build(name, inst, o)?;
        builds.push(t.elapsed().as_secs_f64() * 1e3);
        space = b.space_units;
        let t = Instant::now();
        let answers = qs.iter().map(|q| b.query(q)).collect::<crc_core::Result<Vec<_>>>()?;
        let secs = t.elapsed().as_secs_f64();
        if !qs.is_empty() {
            best_qps = best_qps.max(qs.len() as f64 / secs.max(1e-9));
        }
        max_err = answers.iter().zip(&truth).map(|(a, &k)| a.ratio_error(k)).fold(max_err, f64::max);
    }
    builds.sort_by(f64::total_cmp);
    Ok(BenchRow {
        structure: name.to_string(),
        n: inst.len(),
        eps: o.eps,
        build_ms: builds[builds.len() / 2],
        qps: best_qps,
        space_units: space,
        max_ratio_err: max_err,
    })
}

pub fn write_csv(rows: &[BenchRow], w: impl Write) -> Result<()> {
    let mut out = csv::Writer::from_writer(w);
    if rows.is_empty() {
        out.write_record(CSV_HEADER.split(','))?;
    }
    for r in rows {
        out.serialize(r)?;
    }
    out.flush()?;
    Ok(())
}

/// Default structure for a setting.
pub fn default_structure(s: Setting) -> &'static str {
    match s {
        Setting::IntervalStab1d | Setting::Dom2d | Setting::Stab3s2d => "stab2d",
        Setting::Dom3d => "stab3d",
        Setting::Stab5s3d => "sampled-5s",
        Setting::Range3s2d => "ortho3s",
        Setting::Range4s2d => "ortho4s",
        Setting::OrthoRd => "ortho-rd",
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crc_core::dataset::{generate, Distribution, GenSpec};

    fn opts(eps: f64) -> BuildOpts {
        BuildOpts { eps, seed: 1, attempt_cap: 64, corrupt: false }
    }

    fn inst(setting: Setting, n: usize) -> Instance {
        let mut spec = GenSpec::new(setting, n, 40, Distribution::Uniform, 5);
        spec.grid_u = 24;
        generate(&spec).unwrap()
    }

    #[test]
    fn every_setting_has_a_verified_default() {
        for s in Setting::ALL {
            let i = inst(s, 120);
            let b = build(default_structure(s), &i, &opts(0.5)).unwrap();
            let r = verify(&i, &b, None, 3000, 0).unwrap();
            assert!(r.passed(), "{s}: {r:?}");
        }
    }

    #[test]
    fn oracle_has_zero_error_and_corruption_fails() {
        let i = inst(Setting::Dom2d, 200);
        let r = verify(&i, &build("oracle", &i, &opts(0.5)).unwrap(), None, 10_000, 0).unwrap();
        assert!(r.passed() && r.max_ratio_err == 0.0);
        let bad = build("stab2d", &i, &BuildOpts { corrupt: true, ..opts(0.5) }).unwrap();
        assert!(!verify(&i, &bad, None, 10_000, 0).unwrap().passed());
    }

    #[test]
    fn mismatched_and_unknown_structures_are_rejected() {
        let i = inst(Setting::Dom2d, 10);
        assert!(build("ortho4s", &i, &opts(0.5)).is_err());
        assert!(build("nope", &i, &opts(0.5)).is_err());
    }

    #[test]
    fn csv_header_is_fixed() {
        let mut buf = Vec::new();
        write_csv(&[], &mut buf).unwrap();
        assert_eq!(String::from_utf8(buf).unwrap().trim_end(), CSV_HEADER);
        let i = inst(Setting::Range3s2d, 100);
        let row = bench(&i, "capprox3s", &opts(0.5), 1, 500).unwrap();
        let mut buf = Vec::new();
        write_csv(&[row], &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert_eq!(text.lines().next(), Some(CSV_HEADER));
        assert!(text.lines().nth(1).unwrap().starts_with("capprox3s,100,0.5,"));
    }
}
