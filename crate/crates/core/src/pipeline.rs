//! End-to-end analysis of a trajectory set: build the requested medusas,
//! compute their diagrams and the images of the requested inclusions, check
//! them against the oracle, and write a hashed output bundle.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use num_bigint::BigInt;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::builder::{build_inclusion, inclusion_supported, BuildDiagnostics, ComplexKind, FrameSlices, TargetSpec, TrajectorySet};
use crate::complex::{ColorScope, InclusionMap, Medusa};
use crate::error::{Error, Result};
use crate::geometry::BigRational;
use crate::oracle::{self, DotKey};
use crate::persistence::{extended_persistence, image_persistence, PersistenceDiagram};
use crate::summary::{hole_type, render_diagram, summarize, RenderOptions, SummaryTable};
use crate::time::{fmt_decimal, parse_decimal, to_f64, Rational};

/// Relative distance from `alpha0` below which a slice counts as degenerate
/// for the raster comparison.
pub const GENERIC_MARGIN: f64 = 0.05;

mod decimal {
    use super::*;

    pub fn serialize<S: serde::Serializer>(r: &Rational, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&fmt_decimal(r))
    }

    pub fn deserialize<'de, D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Rational, D::Error> {
        let text = match serde_json::Value::deserialize(d)? {
            serde_json::Value::Number(n) => n.to_string(),
            serde_json::Value::String(s) => s,
            other => return Err(serde::de::Error::custom(format!("expected a decimal, found {other}"))),
        };
        parse_decimal(&text).ok_or_else(|| serde::de::Error::custom(format!("bad decimal `{text}`")))
    }
}

/// A sub-medusa and the medusa it is included in.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct InclusionSpec {
    pub sub: TargetSpec,
    pub ambient: TargetSpec,
}

impl InclusionSpec {
    pub fn new(sub: TargetSpec, ambient: TargetSpec) -> Self {
        Self { sub, ambient }
    }

    /// File-name label, e.g. `image-alpha-mono1-in-alpha-multi`.
    pub fn name(&self) -> String {
        format!("image-{}-in-{}", self.sub.name(), self.ambient.name())
    }
}

impl fmt::Display for InclusionSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}->{}", self.sub, self.ambient)
    }
}

impl FromStr for InclusionSpec {
    type Err = Error;

    /// Accepts `alpha:mono1->alpha:multi` or `alpha:mono1,alpha:multi`.
    fn from_str(s: &str) -> Result<Self> {
        let (a, b) = s
            .split_once("->")
            .or_else(|| s.split_once(','))
            .ok_or_else(|| Error::ConfigInvalid(format!("bad inclusion `{s}`")))?;
        Ok(Self { sub: a.trim().parse()?, ambient: b.trim().parse()? })
    }
}

impl Serialize for InclusionSpec {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for InclusionSpec {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        String::deserialize(d)?.parse().map_err(serde::de::Error::custom)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct AnalysisConfig {
    /// Radius of the balls the Voronoi cells are restricted to.
    #[serde(with = "decimal")]
    pub alpha0: Rational,
    /// Medusas to build; empty means alpha multi plus alpha mono per color.
    pub targets: Vec<TargetSpec>,
    pub inclusions: Vec<InclusionSpec>,
    /// Dots of smaller persistence are left out of diagram CSVs and plots.
    #[serde(with = "decimal")]
    pub min_persistence: Rational,
    pub out_dir: Option<PathBuf>,
    pub oracle_check: bool,
}

impl Default for AnalysisConfig {
    fn default() -> Self {
        Self {
            alpha0: Rational::from_integer(4),
            targets: Vec::new(),
            inclusions: Vec::new(),
            min_persistence: Rational::from_integer(0),
            out_dir: None,
            oracle_check: false,
        }
    }
}

impl AnalysisConfig {
    pub fn validate(&self) -> Result<()> {
        if self.alpha0 <= Rational::from_integer(0) {
            return Err(Error::ConfigInvalid("alpha0 must be positive".into()));
        }
        if self.min_persistence < Rational::from_integer(0) {
            return Err(Error::ConfigInvalid("min_persistence must be non-negative".into()));
        }
        for inc in &self.inclusions {
            if !inclusion_supported(inc.sub, inc.ambient) {
                return Err(Error::UnsupportedInclusion(inc.to_string()));
            }
        }
        Ok(())
    }

    pub fn alpha0_big(&self) -> BigRational {
        BigRational::new(BigInt::from(*self.alpha0.numer()), BigInt::from(*self.alpha0.denom()))
    }

    /// Requested targets (or the default set) followed by any target named
    /// only by an inclusion, without repeats.
    pub fn resolved_targets(&self, ts: &TrajectorySet) -> Vec<TargetSpec> {
        let mut out: Vec<TargetSpec> = if self.targets.is_empty() {
            std::iter::once(ColorScope::Multi)
                .chain(ts.colors().into_iter().map(ColorScope::Mono))
                .map(|s| TargetSpec::new(ComplexKind::Alpha, s))
                .collect()
        } else {
            self.targets.clone()
        };
        for inc in &self.inclusions {
            for t in [inc.sub, inc.ambient] {
                if !out.contains(&t) {
                    out.push(t);
                }
            }
        }
        let mut seen = BTreeSet::new();
        out.retain(|t| seen.insert(*t));
        out
    }
}

#[derive(Clone, Debug)]
pub struct TargetResult {
    pub spec: TargetSpec,
    pub medusa: Medusa,
    pub diagnostics: BuildDiagnostics,
    pub diagram: PersistenceDiagram,
    pub summary: SummaryTable,
}

#[derive(Clone, Debug)]
pub struct ImageResult {
    pub spec: InclusionSpec,
    pub diagram: PersistenceDiagram,
    pub summary: SummaryTable,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum CheckStatus {
    Agree,
    Disagree,
    Skipped,
}

/// Engine-versus-oracle comparison of one diagram.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct OracleCheck {
    pub name: String,
    pub cells: usize,
    pub status: CheckStatus,
    pub diff: Vec<String>,
}

fn compare(name: String, cells: usize, engine: &[DotKey], oracle: Result<Vec<DotKey>>) -> OracleCheck {
    let (status, diff) = match oracle {
        Err(Error::TooLarge { .. }) => (CheckStatus::Skipped, vec![]),
        Err(e) => (CheckStatus::Disagree, vec![e.to_string()]),
        Ok(o) => {
            let diff = oracle::diagram_diff(engine, &o);
            (if diff.is_empty() { CheckStatus::Agree } else { CheckStatus::Disagree }, diff)
        }
    };
    OracleCheck { name, cells, status, diff }
}

pub fn check_extended(name: String, m: &Medusa, diagram: &PersistenceDiagram) -> OracleCheck {
    let oracle = oracle::rank_table_extended(m).and_then(|rt| oracle::diagram_from_ranks(&rt));
    compare(name, m.len(), &diagram.keys(false), oracle)
}

pub fn check_image(name: String, inc: &InclusionMap, diagram: &PersistenceDiagram) -> OracleCheck {
    let oracle = oracle::rank_table_image(inc).and_then(|rt| oracle::diagram_from_ranks(&rt));
    compare(name, inc.sub.len() + inc.ambient.len(), &diagram.keys(false), oracle)
}

/// Everything computed by one analysis run.
#[derive(Clone, Debug)]
pub struct Analysis {
    pub config: AnalysisConfig,
    pub ts_dim: usize,
    pub points: usize,
    pub time_map: (Rational, Rational),
    pub targets: Vec<TargetResult>,
    pub images: Vec<ImageResult>,
    pub checks: Vec<OracleCheck>,
}

pub fn analyze(ts: &TrajectorySet, cfg: &AnalysisConfig) -> Result<Analysis> {
    cfg.validate()?;
    let specs = cfg.resolved_targets(ts);
    let slices = FrameSlices::compute(ts, &cfg.alpha0_big())?;
    let targets = specs
        .par_iter()
        .map(|&spec| {
            let (medusa, diagnostics) = slices.build(ts, spec)?;
            let diagram = extended_persistence(&medusa)?;
            let summary = summarize(&diagram);
            Ok(TargetResult { spec, medusa, diagnostics, diagram, summary })
        })
        .collect::<Result<Vec<_>>>()?;
    let find = |s: TargetSpec| targets.iter().find(|t| t.spec == s).expect("inclusion targets are resolved");

    let mut images = Vec::new();
    let mut checks = Vec::new();
    for &spec in &cfg.inclusions {
        let (sub, amb) = (find(spec.sub), find(spec.ambient));
        let inc = build_inclusion(&sub.medusa, spec.sub, &amb.medusa, spec.ambient)?;
        let diagram = image_persistence(&inc)?;
        if cfg.oracle_check {
            checks.push(check_image(spec.name(), &inc, &diagram));
        }
        let summary = summarize(&diagram);
        images.push(ImageResult { spec, diagram, summary });
    }
    if cfg.oracle_check {
        let ext: Vec<OracleCheck> = targets
            .par_iter()
            .map(|t| check_extended(t.spec.name(), &t.medusa, &t.diagram))
            .collect();
        checks.splice(0..0, ext);
    }
    Ok(Analysis {
        config: cfg.clone(),
        ts_dim: ts.dim,
        points: ts.trajectories.len(),
        time_map: ts.grid.affine_map(),
        targets,
        images,
        checks,
    })
}

#[derive(Serialize)]
struct DotRow {
    dim: usize,
    subdiagram: String,
    birth: String,
    death: String,
    persistence: String,
    hole_type: Option<&'static str>,
    creator: u32,
    destroyer: u32,
}

#[derive(Serialize)]
struct SummaryRow {
    hole_type: String,
    subdiagram: String,
    count: usize,
    norm: String,
}

#[derive(Serialize)]
struct DiagramReport {
    name: String,
    cells: Option<usize>,
    dots: Vec<DotRow>,
    summary: Vec<SummaryRow>,
}

fn diagram_report(name: String, cells: Option<usize>, d: &PersistenceDiagram, s: &SummaryTable, min: Rational) -> DiagramReport {
    let dots = d
        .visible(min)
        .map(|x| DotRow {
            dim: x.dim,
            subdiagram: x.subdiagram.to_string(),
            birth: fmt_decimal(&x.birth),
            death: fmt_decimal(&x.death),
            persistence: fmt_decimal(&x.persistence()),
            hole_type: hole_type(x, d.ambient_dim).map(|h| h.as_str()),
            creator: x.creator.0,
            destroyer: x.destroyer.0,
        })
        .collect();
    let summary = s
        .to_csv()
        .lines()
        .skip(1)
        .map(|l| {
            let f: Vec<&str> = l.split(',').collect();
            SummaryRow {
                hole_type: f[0].into(),
                subdiagram: f[1].into(),
                count: f[2].parse().unwrap_or(0),
                norm: f[3].into(),
            }
        })
        .collect();
    DiagramReport { name, cells, dots, summary }
}

#[derive(Serialize)]
struct Report<'a> {
    alpha0: String,
    dim: usize,
    points: usize,
    min_persistence: String,
    targets: Vec<DiagramReport>,
    images: Vec<DiagramReport>,
    diagnostics: Vec<&'a BuildDiagnostics>,
    oracle: &'a [OracleCheck],
}

impl Analysis {
    /// Engine-oracle disagreements, one line per diagram.
    pub fn failures(&self) -> Vec<String> {
        self.checks
            .iter()
            .filter(|c| c.status == CheckStatus::Disagree)
            .map(|c| format!("{}: {}", c.name, c.diff.join("; ")))
            .collect()
    }

    pub fn target(&self, spec: TargetSpec) -> Option<&TargetResult> {
        self.targets.iter().find(|t| t.spec == spec)
    }

    /// The bundle contents keyed by file name, excluding the manifest.
    pub fn files(&self) -> Result<BTreeMap<String, String>> {
        let min = self.config.min_persistence;
        let mut files = BTreeMap::new();
        let render = |name: &str, d: &PersistenceDiagram| {
            render_diagram(d, &RenderOptions { title: Some(name.to_string()), min_persistence: min })
        };
        for t in &self.targets {
            let name = t.spec.name();
            files.insert(format!("{name}.diagram.csv"), t.diagram.to_csv(min));
            files.insert(format!("{name}.summary.csv"), t.summary.to_csv());
            files.insert(format!("{name}.svg"), render(&name, &t.diagram));
            files.insert(format!("{name}.medusa.txt"), t.medusa.to_text());
        }
        for im in &self.images {
            let name = im.spec.name();
            files.insert(format!("{name}.diagram.csv"), im.diagram.to_csv(min));
            files.insert(format!("{name}.summary.csv"), im.summary.to_csv());
            files.insert(format!("{name}.svg"), render(&name, &im.diagram));
        }
        let diagnostics: Vec<&BuildDiagnostics> = self.targets.iter().map(|t| &t.diagnostics).collect();
        files.insert("diagnostics.json".into(), serde_json::to_string_pretty(&diagnostics)? + "\n");
        let report = Report {
            alpha0: fmt_decimal(&self.config.alpha0),
            dim: self.ts_dim,
            points: self.points,
            min_persistence: fmt_decimal(&min),
            targets: self
                .targets
                .iter()
                .map(|t| diagram_report(t.spec.to_string(), Some(t.medusa.len()), &t.diagram, &t.summary, min))
                .collect(),
            images: self
                .images
                .iter()
                .map(|i| diagram_report(i.spec.to_string(), None, &i.diagram, &i.summary, min))
                .collect(),
            diagnostics,
            oracle: &self.checks,
        };
        files.insert("report.json".into(), serde_json::to_string_pretty(&report)? + "\n");
        Ok(files)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Artifact {
    pub path: String,
    pub bytes: usize,
    pub sha256: String,
}

/// Normalized time is `(raw - time_offset) / time_scale`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Manifest {
    pub alpha0: String,
    pub time_offset: String,
    pub time_scale: String,
    pub artifacts: Vec<Artifact>,
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

/// Writes every file of the analysis plus `manifest.json` into `dir`.
pub fn write_bundle(analysis: &Analysis, dir: &Path) -> Result<Manifest> {
    std::fs::create_dir_all(dir)?;
    let mut artifacts = Vec::new();
    for (path, content) in analysis.files()? {
        std::fs::write(dir.join(&path), &content)?;
        artifacts.push(Artifact { path, bytes: content.len(), sha256: sha256_hex(content.as_bytes()) });
    }
    let (scale, offset) = analysis.time_map;
    let manifest = Manifest {
        alpha0: fmt_decimal(&analysis.config.alpha0),
        time_offset: fmt_decimal(&offset),
        time_scale: fmt_decimal(&scale),
        artifacts,
    };
    std::fs::write(dir.join("manifest.json"), serde_json::to_string_pretty(&manifest)? + "\n")?;
    Ok(manifest)
}

/// Analyzes, writes the bundle, then fails with a verification error if the
/// oracle disagreed with the engine anywhere.
pub fn run_analysis(ts: &TrajectorySet, cfg: &AnalysisConfig, dir: &Path) -> Result<(Analysis, Manifest)> {
    let analysis = analyze(ts, cfg)?;
    let manifest = write_bundle(&analysis, dir)?;
    let failures = analysis.failures();
    if !failures.is_empty() {
        return Err(Error::Verification(failures.join(" | ")));
    }
    Ok((analysis, manifest))
}

/// Betti numbers of one slice, from the alpha complex and from the raster.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RasterRow {
    pub frame: usize,
    pub scope: String,
    pub alpha: (usize, usize),
    pub raster: (usize, usize),
    pub resolution: usize,
    pub generic: bool,
}

impl RasterRow {
    pub fn agrees(&self) -> bool {
        self.alpha == self.raster
    }
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct OracleReport {
    pub checks: Vec<OracleCheck>,
    pub raster: Vec<RasterRow>,
}

impl OracleReport {
    /// No diagram disagreement and no raster disagreement on a generic slice.
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.status != CheckStatus::Disagree)
            && self.raster.iter().all(|r| !r.generic || r.agrees())
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        for c in &self.checks {
            let status = match c.status {
                CheckStatus::Agree => "agree",
                CheckStatus::Disagree => "DISAGREE",
                CheckStatus::Skipped => "skipped (too large)",
            };
            let _ = writeln!(s, "{}: {} ({} cells)", c.name, status, c.cells);
            for d in &c.diff {
                let _ = writeln!(s, "  {d}");
            }
        }
        if !self.raster.is_empty() {
            s.push_str("frame,scope,alpha_b0,alpha_b1,raster_b0,raster_b1,resolution,generic\n");
            for r in &self.raster {
                let _ = writeln!(
                    s,
                    "{},{},{},{},{},{},{},{}",
                    r.frame, r.scope, r.alpha.0, r.alpha.1, r.raster.0, r.raster.1, r.resolution, r.generic
                );
            }
        }
        s
    }
}

/// Oracle comparison for every resolved target and inclusion, plus the raster
/// comparison for every frame and color scope of planar input. When
/// `medusa_text` is given, its diagram is compared against the oracle run on
/// the medusa built from the frames for the first target of the same scope.
pub fn oracle_report(ts: &TrajectorySet, cfg: &AnalysisConfig, medusa_text: Option<&str>) -> Result<OracleReport> {
    cfg.validate()?;
    let slices = FrameSlices::compute(ts, &cfg.alpha0_big())?;
    let mut report = OracleReport::default();
    if let Some(text) = medusa_text {
        let given = Medusa::from_text(text)?;
        let spec = cfg
            .resolved_targets(ts)
            .into_iter()
            .find(|t| t.scope == given.scope)
            .unwrap_or(TargetSpec::new(ComplexKind::Alpha, given.scope));
        let (built, _) = slices.build(ts, spec)?;
        let name = format!("{} (given medusa)", spec.name());
        let oracle = oracle::rank_table_extended(&built).and_then(|rt| oracle::diagram_from_ranks(&rt));
        let check = match extended_persistence(&given) {
            Ok(d) => compare(name, given.len(), &d.keys(false), oracle),
            Err(e) => {
                let mut diff = vec![e.to_string()];
                diff.extend(given.validate().violations.iter().map(|v| v.to_string()));
                OracleCheck { name, cells: given.len(), status: CheckStatus::Disagree, diff }
            }
        };
        report.checks.push(check);
    } else {
        let mut check_cfg = cfg.clone();
        check_cfg.oracle_check = true;
        report.checks = analyze(ts, &check_cfg)?.checks;
    }
    if ts.dim == 2 {
        let a0 = to_f64(&cfg.alpha0);
        let scopes: Vec<ColorScope> =
            std::iter::once(ColorScope::Multi).chain(ts.colors().into_iter().map(ColorScope::Mono)).collect();
        let rows: Vec<Vec<RasterRow>> = slices
            .slices
            .par_iter()
            .enumerate()
            .map(|(frame, slice)| {
                let generic = oracle::is_generic(slice, a0, GENERIC_MARGIN);
                scopes
                    .iter()
                    .map(|&scope| {
                        let rep = oracle::lemma_a(slice, scope, a0);
                        RasterRow {
                            frame,
                            scope: scope.to_string(),
                            alpha: rep.alpha,
                            raster: rep.raster,
                            resolution: rep.resolution,
                            generic,
                        }
                    })
                    .collect()
            })
            .collect();
        report.raster = rows.into_iter().flatten().collect();
    }
    Ok(report)
}
