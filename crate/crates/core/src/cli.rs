//! Command-line frontend: argument parsing, dispatch and report documents.
//!
//! Every command produces a document `{calibration, command, config, results, version}`
//! serialized with sorted keys. Field elements are written as discrete
//! logarithms with respect to the generator of the field whose modulus is
//! recorded alongside.

use std::collections::BTreeSet;
use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use thiserror::Error;

use crate::engeance::{calibrate, kisin_shape, Calibration, Engeance, EngeanceError};
use crate::ext1::{
    bm_check, default_window, deformation_ring, engeances_for, family_images, independent,
    Ext1Error, RingReport,
};
use crate::figures::{
    figure1_instances, point_family_first, point_family_second, projective_line_family,
};
use crate::gf::{Field, GaloisField, GfError};
use crate::phimod::{companion_reduce, PhiModError};
use crate::weights::{
    nongeneric_oracle, weights_intersect, weights_of_rep, weights_of_type_f2, NongenericCase,
    RepSpec, SerreWeight, TameType, WeightError,
};

/// Exit code for invalid input.
pub const EXIT_USAGE: i32 = 2;
/// Exit code for internal inconsistencies.
pub const EXIT_INTERNAL: i32 = 3;

/// Failures of a command run.
#[derive(Debug, Error)]
pub enum CliError {
    #[error("usage error: {0}")]
    Usage(String),
    #[error("internal inconsistency: {0}")]
    Internal(String),
}

impl CliError {
    /// Process exit code.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => EXIT_USAGE,
            CliError::Internal(_) => EXIT_INTERNAL,
        }
    }
}

impl From<WeightError> for CliError {
    fn from(e: WeightError) -> Self {
        CliError::Usage(e.to_string())
    }
}

impl From<GfError> for CliError {
    fn from(e: GfError) -> Self {
        CliError::Usage(e.to_string())
    }
}

impl From<EngeanceError> for CliError {
    fn from(e: EngeanceError) -> Self {
        match e {
            EngeanceError::Weight(w) => w.into(),
            EngeanceError::CalibrationMissing(_) => CliError::Usage(e.to_string()),
            other => CliError::Internal(other.to_string()),
        }
    }
}

impl From<Ext1Error> for CliError {
    fn from(e: Ext1Error) -> Self {
        match e {
            Ext1Error::Weight(w) => w.into(),
            Ext1Error::UnsupportedDegree(_) => CliError::Usage(e.to_string()),
            Ext1Error::Engeance(inner) => inner.into(),
            other => CliError::Internal(other.to_string()),
        }
    }
}

impl From<PhiModError> for CliError {
    fn from(e: PhiModError) -> Self {
        CliError::Internal(e.to_string())
    }
}

/// Top-level parser.
#[derive(Debug, Parser)]
#[command(
    name = "kisinvar",
    version,
    about = "Serre weights, Kisin varieties and deformation rings"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

/// Subcommands.
#[derive(Debug, Subcommand)]
pub enum Command {
    /// Serre weights of an irreducible representation.
    WeightsRep(CommonArgs),
    /// Serre weights of a tame type (f = 2).
    WeightsType(CommonArgs),
    /// Common weights of a representation and a type.
    Intersect(CommonArgs),
    /// Engeances of a type for a representation, with the Kisin variety shape.
    Engeances(CommonArgs),
    /// Residual class of a representation and companion data of its engeances.
    Residual(CommonArgs),
    /// Extension classes of a transcribed tangent family.
    ExtTangent(CommonArgs),
    /// Deformation ring label with tangent evidence.
    Defring(CommonArgs),
    /// Multiplicity comparison over all types.
    BmCheck(CommonArgs),
    /// Engeance table for f = 2.
    Figure1(CommonArgs),
    /// Common-weight table for f = 2.
    Figure3(CommonArgs),
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::WeightsRep(_) => "weights-rep",
            Command::WeightsType(_) => "weights-type",
            Command::Intersect(_) => "intersect",
            Command::Engeances(_) => "engeances",
            Command::Residual(_) => "residual",
            Command::ExtTangent(_) => "ext-tangent",
            Command::Defring(_) => "defring",
            Command::BmCheck(_) => "bm-check",
            Command::Figure1(_) => "figure1",
            Command::Figure3(_) => "figure3",
        }
    }

    fn args(&self) -> &CommonArgs {
        match self {
            Command::WeightsRep(a)
            | Command::WeightsType(a)
            | Command::Intersect(a)
            | Command::Engeances(a)
            | Command::Residual(a)
            | Command::ExtTangent(a)
            | Command::Defring(a)
            | Command::BmCheck(a)
            | Command::Figure1(a)
            | Command::Figure3(a) => a,
        }
    }
}

/// Flags shared by every subcommand.
#[derive(Debug, Clone, Default, Args)]
pub struct CommonArgs {
    /// The prime p.
    #[arg(long)]
    pub p: Option<u32>,
    /// Residue degree f.
    #[arg(long)]
    pub f: Option<u32>,
    /// Degree over F_p of the coefficient field k (default f).
    #[arg(long)]
    pub field_degree: Option<u32>,
    /// First digit r0 of the representation (f = 2).
    #[arg(long, allow_hyphen_values = true)]
    pub r0: Option<i64>,
    /// Second digit r1 of the representation (f = 2).
    #[arg(long, allow_hyphen_values = true)]
    pub r1: Option<i64>,
    /// Niveau-2f exponent c, instead of digits.
    #[arg(long, allow_hyphen_values = true)]
    pub c: Option<i64>,
    /// Twist s.
    #[arg(long, allow_hyphen_values = true)]
    pub s: Option<i64>,
    /// Discrete logarithm of theta in k.
    #[arg(long)]
    pub theta: Option<u64>,
    /// Exponent of eta.
    #[arg(long, allow_hyphen_values = true)]
    pub k_eta: Option<i64>,
    /// Exponent of eta'.
    #[arg(long, allow_hyphen_values = true)]
    pub k_eta_p: Option<i64>,
    /// Tangent family for ext-tangent: point-first, point-second or projective-line.
    #[arg(long)]
    pub family: Option<String>,
    /// Exponent d1 of the tangent family.
    #[arg(long)]
    pub d1: Option<i64>,
    /// Emit every nongeneric list (weights-rep).
    #[arg(long)]
    pub all_nongeneric: bool,
    /// Emit JSON instead of a table.
    #[arg(long)]
    pub json: bool,
    /// Write the output to a file.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Compare against the golden corpus.
    #[arg(long)]
    pub verify: bool,
    /// Working precision window.
    #[arg(long)]
    pub precision: Option<i64>,
    /// JSON file with default values for the flags.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Directory of the golden corpus.
    #[arg(long)]
    pub golden_dir: Option<PathBuf>,
}

/// Resolved run configuration, echoed in every document.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct RunConfig {
    pub p: Option<u32>,
    pub f: Option<u32>,
    pub field_degree: Option<u32>,
    pub r0: Option<i64>,
    pub r1: Option<i64>,
    pub c: Option<i64>,
    pub s: Option<i64>,
    pub theta: Option<u64>,
    pub k_eta: Option<i64>,
    pub k_eta_p: Option<i64>,
    pub family: Option<String>,
    pub d1: Option<i64>,
    pub precision: Option<i64>,
}

impl RunConfig {
    /// Flags override values read from the config file.
    fn merge(args: &CommonArgs, file: RunConfig) -> RunConfig {
        RunConfig {
            p: args.p.or(file.p),
            f: args.f.or(file.f),
            field_degree: args.field_degree.or(file.field_degree),
            r0: args.r0.or(file.r0),
            r1: args.r1.or(file.r1),
            c: args.c.or(file.c),
            s: args.s.or(file.s),
            theta: args.theta.or(file.theta),
            k_eta: args.k_eta.or(file.k_eta),
            k_eta_p: args.k_eta_p.or(file.k_eta_p),
            family: args.family.clone().or(file.family),
            d1: args.d1.or(file.d1),
            precision: args.precision.or(file.precision),
        }
    }

    fn p(&self) -> Result<u32, CliError> {
        self.p
            .ok_or_else(|| CliError::Usage("--p is required".into()))
    }

    fn f(&self) -> u32 {
        self.f.unwrap_or(2)
    }

    fn field(&self) -> Result<Field, CliError> {
        Ok(GaloisField::new(
            self.p()?,
            self.field_degree.unwrap_or(self.f()),
        )?)
    }

    fn window(&self) -> Result<i64, CliError> {
        match self.precision {
            Some(w) if w <= 0 => Err(CliError::Usage("--precision must be positive".into())),
            Some(w) => Ok(w),
            None => Ok(default_window(self.p()?, self.f())),
        }
    }

    fn rep(&self) -> Result<RepSpec, CliError> {
        let p = self.p()?;
        let s = self.s.unwrap_or(0);
        let theta = self.theta.unwrap_or(0);
        match (self.c, self.r0, self.r1) {
            (Some(c), None, None) => Ok(RepSpec::new(p, self.f(), c, s, theta)?),
            (None, Some(r0), Some(r1)) if self.f() == 2 => {
                Ok(RepSpec::from_digits(p, &[r0, r1], s, theta)?)
            }
            _ => Err(CliError::Usage(
                "give either --c or both --r0 and --r1 (f = 2)".into(),
            )),
        }
    }

    fn tame_type(&self) -> Result<TameType, CliError> {
        match (self.k_eta, self.k_eta_p) {
            (Some(a), Some(b)) => Ok(TameType::new(self.p()?, self.f(), a, b)?),
            _ => Err(CliError::Usage("--k-eta and --k-eta-p are required".into())),
        }
    }

    fn need_f2(&self) -> Result<(), CliError> {
        if self.f() != 2 {
            return Err(CliError::Usage("this command requires f = 2".into()));
        }
        Ok(())
    }
}

/// A command's payload and text rendering.
struct Outcome {
    results: Value,
    calibration: Option<(Calibration, Field)>,
    text: String,
}

fn weight_json(w: &SerreWeight) -> Value {
    json!({"r": w.r, "w": w.w})
}

fn weights_json<'a>(ws: impl IntoIterator<Item = &'a SerreWeight>) -> Value {
    Value::Array(ws.into_iter().map(weight_json).collect())
}

fn weights_text<'a>(ws: impl IntoIterator<Item = &'a SerreWeight>) -> String {
    let text: String = ws.into_iter().map(|w| format!("{w}\n")).collect();
    if text.is_empty() {
        "(none)\n".to_string()
    } else {
        text
    }
}

fn dlog_json(k: &Field, x: u32) -> Value {
    match k.dlog(x) {
        Ok(d) => json!(d),
        Err(_) => Value::Null,
    }
}

/// JSON form of an engeance: genres and discrete logarithms, `null` for zero.
pub fn engeance_json(e: &Engeance) -> Value {
    let k = e.field();
    json!({
        "genres": e.genres,
        "alpha": dlog_json(k, e.alpha),
        "alphaP": dlog_json(k, e.alpha_p),
        "a": e.a.iter().map(|&x| dlog_json(k, x)).collect::<Vec<_>>(),
        "aP": e.a_p.iter().map(|&x| dlog_json(k, x)).collect::<Vec<_>>(),
    })
}

fn type_json(t: &TameType) -> Value {
    json!({"kEta": t.k_eta, "kEtaP": t.k_eta_p, "d": t.d()})
}

fn calibration_json(cal: &Calibration, k: &Field) -> Value {
    json!({
        "k_omega": cal.k_omega,
        "u_omega": cal.u_omega,
        "field": {"p": k.p(), "degree": k.degree(), "modulus": k.modulus()},
    })
}

fn ring_json(r: &RingReport, k: &Field) -> Value {
    json!({
        "ring": r.ring,
        "label": r.ring.to_string(),
        "shape": r.shape.label(),
        "points": r.shape.point_count(),
        "directions": r.directions,
        "images": r.images.iter().map(|c| c.to_terms(k)).collect::<Vec<_>>(),
    })
}

fn cmd_weights_rep(cfg: &RunConfig, all: bool) -> Result<Outcome, CliError> {
    if all {
        let p = cfg.p()?;
        let mut rows = Vec::new();
        let mut text = String::new();
        for case in NongenericCase::all(p) {
            let list = nongeneric_oracle(p, case, 0)?;
            let computed = weights_of_rep(&case.rep(p, 0, 0)?)?;
            let listed: BTreeSet<SerreWeight> = list.iter().cloned().collect();
            if listed != computed {
                return Err(CliError::Internal(format!(
                    "case {} disagrees with the congruence",
                    case.label()
                )));
            }
            text.push_str(&format!(
                "case {} {:?}\n{}",
                case.label(),
                case,
                weights_text(&list)
            ));
            rows.push(json!({
                "case": case,
                "c": case.exponent(p),
                "totally_nongeneric": case.totally_nongeneric(),
                "modified": weight_json(&list[0]),
                "weights": weights_json(&list),
            }));
        }
        return Ok(Outcome {
            results: Value::Array(rows),
            calibration: None,
            text,
        });
    }
    let spec = cfg.rep()?;
    let ws = weights_of_rep(&spec)?;
    Ok(Outcome {
        results: weights_json(&ws),
        calibration: None,
        text: weights_text(&ws),
    })
}

fn cmd_weights_type(cfg: &RunConfig) -> Result<Outcome, CliError> {
    cfg.need_f2()?;
    let ws = weights_of_type_f2(&cfg.tame_type()?)?;
    Ok(Outcome {
        results: weights_json(&ws),
        calibration: None,
        text: weights_text(&ws),
    })
}

fn cmd_intersect(cfg: &RunConfig) -> Result<Outcome, CliError> {
    cfg.need_f2()?;
    let ws = weights_intersect(
        &weights_of_type_f2(&cfg.tame_type()?)?,
        &weights_of_rep(&cfg.rep()?)?,
    )?;
    Ok(Outcome {
        results: weights_json(&ws),
        calibration: None,
        text: weights_text(&ws),
    })
}

fn calibrated(cfg: &RunConfig) -> Result<(Field, Calibration), CliError> {
    let k = cfg.field()?;
    let cal = calibrate(cfg.p()?, cfg.f(), &k)?;
    Ok((k, cal))
}

fn cmd_engeances(cfg: &RunConfig) -> Result<Outcome, CliError> {
    let (k, cal) = calibrated(cfg)?;
    let spec = cfg.rep()?;
    let t = cfg.tame_type()?;
    let list = engeances_for(&spec, &t, &k, &cal)?;
    let shape = kisin_shape(&list, &k)?;
    let mut text = format!("shape: {} ({} points)\n", shape.label(), list.len());
    for e in &list {
        text.push_str(&format!("{e}\n"));
    }
    Ok(Outcome {
        results: json!({
            "shape": shape.label(),
            "engeances": list.iter().map(engeance_json).collect::<Vec<_>>(),
        }),
        calibration: Some((cal, k)),
        text,
    })
}

fn cmd_residual(cfg: &RunConfig) -> Result<Outcome, CliError> {
    let (k, cal) = calibrated(cfg)?;
    let spec = cfg.rep()?;
    let class = cal.class_of(&spec, &k);
    let mut text = format!("class: h = {}, delta = g^{}\n", class.h, class.delta);
    let mut points = Vec::new();
    if cfg.k_eta.is_some() || cfg.k_eta_p.is_some() {
        let t = cfg.tame_type()?;
        for e in engeances_for(&spec, &t, &k, &cal)? {
            let comp = companion_reduce(&e.frobenius(&t)?, cfg.f(), cfg.window()?)?;
            text.push_str(&format!(
                "{e}: h = {}, delta = g^{}\n",
                comp.h,
                k.dlog(comp.delta)?
            ));
            points.push(json!({
                "engeance": engeance_json(&e),
                "h": comp.h,
                "delta": dlog_json(&k, comp.delta),
            }));
        }
    }
    Ok(Outcome {
        results: json!({"class": class, "companions": points}),
        calibration: Some((cal, k)),
        text,
    })
}

fn cmd_ext_tangent(cfg: &RunConfig) -> Result<Outcome, CliError> {
    cfg.need_f2()?;
    let k = cfg.field()?;
    let theta = k.from_dlog(cfg.theta.unwrap_or(0) as i64);
    let d1 = cfg
        .d1
        .ok_or_else(|| CliError::Usage("--d1 is required".into()))?;
    let p = cfg.p()? as i64;
    let name = cfg.family.as_deref().unwrap_or("point-first");
    let (fam, range) = match name {
        "point-first" => (point_family_first(&k, d1, theta)?, 1..=p - 1),
        "point-second" => (point_family_second(&k, d1, theta)?, 2..=p - 1),
        "projective-line" => (projective_line_family(&k, d1, theta)?, 1..=p - 2),
        other => return Err(CliError::Usage(format!("unknown family {other}"))),
    };
    if !range.contains(&d1) {
        return Err(CliError::Usage(format!("d1 = {d1} outside {range:?}")));
    }
    let images = family_images(&fam, cfg.window()?)?;
    let mut text = String::new();
    for ((n, _), c) in fam.directions.iter().zip(&images) {
        text.push_str(&format!("{n}* -> {}\n", c.render(&k)));
    }
    let indep = independent(&images, &k);
    text.push_str(&format!("independent: {indep}\n"));
    Ok(Outcome {
        results: json!({
            "family": name,
            "directions": fam.directions.iter().map(|(n, _)| *n).collect::<Vec<_>>(),
            "images": images.iter().map(|c| c.to_terms(&k)).collect::<Vec<_>>(),
            "independent": indep,
        }),
        calibration: None,
        text,
    })
}

fn cmd_defring(cfg: &RunConfig) -> Result<Outcome, CliError> {
    cfg.need_f2()?;
    let (k, cal) = calibrated(cfg)?;
    let r = deformation_ring(&cfg.rep()?, &cfg.tame_type()?, &k, &cal, cfg.window()?)?;
    let text = format!(
        "ring: {}\nshape: {} ({} points)\n",
        r.ring,
        r.shape.label(),
        r.shape.point_count()
    );
    Ok(Outcome {
        results: ring_json(&r, &k),
        calibration: Some((cal, k)),
        text,
    })
}

fn cmd_bm_check(cfg: &RunConfig) -> Result<Outcome, CliError> {
    cfg.need_f2()?;
    let (k, cal) = calibrated(cfg)?;
    let rep = bm_check(&cfg.rep()?, &k, &cal, cfg.window()?)?;
    let mut text = String::new();
    for e in &rep.entries {
        text.push_str(&format!(
            "type ({}, {}): {} mu = {} common = {} {:?}\n",
            e.tame_type.k_eta,
            e.tame_type.k_eta_p,
            e.ring,
            e.multiplicity.map_or("?".to_string(), |m| m.to_string()),
            e.common_weights.len(),
            e.status
        ));
    }
    text.push_str(&format!("certified:\n{}", weights_text(&rep.certified)));
    text.push_str(&format!("uncovered:\n{}", weights_text(&rep.uncovered)));
    Ok(Outcome {
        results: serde_json::to_value(&rep).map_err(|e| CliError::Internal(e.to_string()))?,
        calibration: Some((cal, k)),
        text,
    })
}

fn cmd_figure1(cfg: &RunConfig) -> Result<Outcome, CliError> {
    cfg.need_f2()?;
    let (k, cal) = calibrated(cfg)?;
    let mut rows = Vec::new();
    let mut text = String::new();
    for row in figure1_instances(cfg.p()?)? {
        for theta in [1, k.generator()] {
            let theta_log = k.dlog(theta)? as u64;
            let spec = row.target(theta_log)?;
            let list = engeances_for(&spec, &row.tame_type, &k, &cal)?;
            let shape = kisin_shape(&list, &k)?;
            text.push_str(&format!(
                "{} param={} type=({}, {}) theta=g^{} shape={} points={}\n",
                row.family,
                row.param,
                row.tame_type.k_eta,
                row.tame_type.k_eta_p,
                theta_log,
                shape.label(),
                list.len()
            ));
            rows.push(json!({
                "family": row.family,
                "param": row.param,
                "type": type_json(&row.tame_type),
                "blue": row.blue,
                "theta": theta_log,
                "shape": shape.label(),
                "engeances": list.iter().map(engeance_json).collect::<Vec<_>>(),
            }));
        }
    }
    Ok(Outcome {
        results: Value::Array(rows),
        calibration: Some((cal, k)),
        text,
    })
}

fn cmd_figure3(cfg: &RunConfig) -> Result<Outcome, CliError> {
    cfg.need_f2()?;
    let mut rows = Vec::new();
    let mut text = String::new();
    for row in figure1_instances(cfg.p()?)? {
        let spec = row.target(0)?;
        let common = weights_intersect(
            &weights_of_type_f2(&row.tame_type)?,
            &weights_of_rep(&spec)?,
        )?;
        text.push_str(&format!(
            "{} param={} type=({}, {}): {}\n",
            row.family,
            row.param,
            row.tame_type.k_eta,
            row.tame_type.k_eta_p,
            common
                .iter()
                .map(|w| w.to_string())
                .collect::<Vec<_>>()
                .join("; ")
        ));
        rows.push(json!({
            "family": row.family,
            "param": row.param,
            "type": type_json(&row.tame_type),
            "blue": row.blue,
            "weights": weights_json(&common),
        }));
    }
    Ok(Outcome {
        results: Value::Array(rows),
        calibration: None,
        text,
    })
}

fn golden_name(command: &str, all_nongeneric: bool, p: u32) -> Option<String> {
    match command {
        "figure1" => Some(format!("figure1_p{p}.json")),
        "figure3" => Some(format!("figure3_p{p}.json")),
        "weights-rep" if all_nongeneric => Some(format!("nongeneric_lists_p{p}.json")),
        _ => None,
    }
}

fn default_golden_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("tests")
        .join("golden")
}

fn read_config(path: &Path) -> Result<RunConfig, CliError> {
    let text = fs::read_to_string(path)
        .map_err(|e| CliError::Usage(format!("cannot read {}: {e}", path.display())))?;
    serde_json::from_str(&text)
        .map_err(|e| CliError::Usage(format!("invalid config {}: {e}", path.display())))
}

/// Builds the report document for a parsed command line.
pub fn execute(cli: &Cli) -> Result<(Value, String), CliError> {
    let args = cli.command.args();
    let file = match &args.config {
        Some(path) => read_config(path)?,
        None => RunConfig::default(),
    };
    let cfg = RunConfig::merge(args, file);
    let outcome = match &cli.command {
        Command::WeightsRep(_) => cmd_weights_rep(&cfg, args.all_nongeneric)?,
        Command::WeightsType(_) => cmd_weights_type(&cfg)?,
        Command::Intersect(_) => cmd_intersect(&cfg)?,
        Command::Engeances(_) => cmd_engeances(&cfg)?,
        Command::Residual(_) => cmd_residual(&cfg)?,
        Command::ExtTangent(_) => cmd_ext_tangent(&cfg)?,
        Command::Defring(_) => cmd_defring(&cfg)?,
        Command::BmCheck(_) => cmd_bm_check(&cfg)?,
        Command::Figure1(_) => cmd_figure1(&cfg)?,
        Command::Figure3(_) => cmd_figure3(&cfg)?,
    };
    let calibration = match &outcome.calibration {
        Some((cal, k)) => calibration_json(cal, k),
        None => Value::Null,
    };
    let doc = json!({
        "command": cli.command.name(),
        "config": serde_json::to_value(&cfg).map_err(|e| CliError::Internal(e.to_string()))?,
        "results": outcome.results,
        "calibration": calibration,
        "version": env!("CARGO_PKG_VERSION"),
    });
    if args.verify {
        let p = cfg.p()?;
        let name = golden_name(cli.command.name(), args.all_nongeneric, p)
            .ok_or_else(|| CliError::Usage(format!("no golden file for {}", cli.command.name())))?;
        let dir = args.golden_dir.clone().unwrap_or_else(default_golden_dir);
        let path = dir.join(name);
        let text = fs::read_to_string(&path)
            .map_err(|e| CliError::Usage(format!("cannot read {}: {e}", path.display())))?;
        let golden: Value = serde_json::from_str(&text)
            .map_err(|e| CliError::Internal(format!("invalid golden file: {e}")))?;
        if golden.get("results") != doc.get("results")
            || golden.get("calibration") != doc.get("calibration")
        {
            return Err(CliError::Internal(format!(
                "output differs from {}",
                path.display()
            )));
        }
    }
    Ok((doc, outcome.text))
}

/// Parses `argv`, runs the command and writes its output; returns the exit code.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    let args = cli.command.args().clone();
    match execute(&cli) {
        Ok((doc, text)) => {
            let body = if args.json {
                let mut s = serde_json::to_string_pretty(&doc).expect("serializable document");
                s.push('\n');
                s
            } else {
                text
            };
            match &args.out {
                Some(path) => {
                    if let Err(e) = fs::write(path, body) {
                        eprintln!("cannot write {}: {e}", path.display());
                        return EXIT_USAGE;
                    }
                }
                None => print!("{body}"),
            }
            0
        }
        Err(e) => {
            eprintln!("{e}");
            e.exit_code()
        }
    }
}
