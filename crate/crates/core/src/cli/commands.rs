//! Subcommand handlers.

use std::io::Write;
use std::path::PathBuf;

use serde_json::{json, Value};

use super::{
    BoundsArgs, CacheAction, CliError, Command, ElementArgs, FactorizationArgs, McArgs, MomentArgs, PathsArgs, SeriesArgs,
    Settings, ValueArgs, CACHE_ENV, EXIT_CHECK_FAILED, EXIT_OK,
};
use crate::bounds::{self, BoundReport};
use crate::cache::{self, Cache, DEFAULT_VERIFY_FRACTION};
use crate::error::WgError;
use crate::exact::{Engine, Family, SeriesCoefficients, SolveOptions};
use crate::graph::{enumerate_paths, path_to_factorization, GraphKind, GraphNode};
use crate::mc::{self, EnsembleSpec};
use crate::moments::MomentSpec;
use crate::rational::format_rational;
use crate::symcore::IntegerPartition;

type CmdResult = Result<i32, CliError>;

const DEFAULT_SAMPLES: usize = 200_000;
const DEFAULT_SEED: u64 = 1;

pub(super) fn dispatch(command: &Command, settings: &Settings, out: &mut dyn Write, err: &mut dyn Write) -> CmdResult {
    let engine = Engine::new();
    let mut o = Output { json: settings.json, out };
    match command {
        Command::Value(a) => value(&engine, a, &mut o, err),
        Command::Series(a) => series(&engine, a, &mut o),
        Command::Paths(a) => paths(&engine, a, &mut o),
        Command::Factorizations(a) => factorizations(&engine, a, &mut o),
        Command::Moment(a) => moment(&engine, a, &mut o, err),
        Command::Bounds(a) => bounds_cmd(&engine, a, &mut o),
        Command::Mc(a) => mc_cmd(&engine, a, settings, &mut o),
        Command::Cache { action } => cache_cmd(&engine, action, settings, &mut o),
    }
}

struct Output<'a> {
    json: bool,
    out: &'a mut dyn Write,
}

impl Output<'_> {
    /// Writes `text`, or `record` as one JSON line.
    fn emit(&mut self, text: impl std::fmt::Display, record: Value) -> Result<(), CliError> {
        let r = if self.json {
            writeln!(self.out, "{record}")
        } else {
            writeln!(self.out, "{text}")
        };
        r.map_err(|e| CliError::new("output", WgError::from(e)))
    }
}

/// Picks the flag an engine error is about.
fn blame(e: WgError) -> CliError {
    let arg = match &e {
        WgError::InvalidArgument { arg, .. } => format!("--{arg}"),
        WgError::DimensionOutOfRange { .. } | WgError::Singular { .. } | WgError::Precondition { .. } => "--dim".into(),
        WgError::LengthMismatch(_) => "--rows".into(),
        WgError::CapExceeded { .. } => "--limit".into(),
        WgError::LevelMismatch { .. } | WgError::NotMonotone(_) | WgError::ProductMismatch(_) => "element".into(),
        WgError::Unsupported(_) => "--family".into(),
        WgError::CacheCorruption { .. } | WgError::Io(_) => "cache".into(),
        _ => "argument".into(),
    };
    CliError::new(arg, e)
}

fn family(text: &str, allowed: &[Family]) -> Result<Family, CliError> {
    let f: Family = text.parse().map_err(|e| CliError::new("--family", e))?;
    if !allowed.contains(&f) {
        let names: Vec<String> = allowed.iter().map(|f| f.to_string()).collect();
        return Err(CliError::new(
            "--family",
            WgError::Unsupported(format!("{f} is not available here; choose one of {}", names.join(", "))),
        ));
    }
    Ok(f)
}

fn element(kind: GraphKind, a: &ElementArgs) -> Result<GraphNode, CliError> {
    let wrong = |flag: &str, want: &str| {
        CliError::new(
            flag,
            WgError::InvalidArgument {
                arg: "element",
                reason: format!("the {kind} graph takes {want}"),
            },
        )
    };
    match (&a.perm, &a.pairing, &a.class) {
        (Some(p), _, _) => {
            if kind.uses_pairings() {
                return Err(wrong("--perm", "--pairing"));
            }
            kind.parse_node(p).map_err(|e| CliError::new("--perm", e))
        }
        (_, Some(p), _) => {
            if !kind.uses_pairings() {
                return Err(wrong("--pairing", "--perm"));
            }
            kind.parse_node(p).map_err(|e| CliError::new("--pairing", e))
        }
        (_, _, Some(c)) => {
            let mu: IntegerPartition = c.parse().map_err(|e| CliError::new("--class", e))?;
            Ok(kind.representative(&mu))
        }
        _ => Err(CliError::new(
            "element",
            WgError::InvalidArgument {
                arg: "element",
                reason: "give one of --perm, --pairing or --class".into(),
            },
        )),
    }
}

fn value(engine: &Engine, a: &ValueArgs, o: &mut Output, err: &mut dyn Write) -> CmdResult {
    let fam = family(&a.family, &Family::ALL)?;
    let node = element(fam.graph_kind(), &a.element)?;
    if a.symbolic {
        let rep = engine.reconstruct_rational(fam, &node, a.dm).map_err(blame)?;
        let coeffs = |v: &[crate::ExactRational]| v.iter().map(format_rational).collect::<Vec<_>>();
        o.emit(
            &rep,
            json!({
                "family": fam.to_string(),
                "element": node.to_string(),
                "dm": a.dm,
                "symbolic": rep.to_string(),
                "numerator": coeffs(&rep.numerator),
                "denominator": coeffs(&rep.denominator),
            }),
        )?;
        return Ok(EXIT_OK);
    }
    let d = a.dim.ok_or_else(|| {
        CliError::new(
            "--dim",
            WgError::InvalidArgument {
                arg: "dim",
                reason: "required unless --symbolic".into(),
            },
        )
    })?;
    let opts = SolveOptions { force: a.force };
    let k = node.level();
    let cache_path = a.cache.clone().or_else(|| std::env::var_os(CACHE_ENV).map(PathBuf::from));
    let cached = match &cache_path {
        Some(p) => Cache::load(p).map_err(|e| CliError::new("cache", e))?.table(fam, k, d, a.dm),
        None => None,
    };
    let table = match cached {
        Some(t) => t,
        None => {
            let t = engine.table(fam, k, d, a.dm, opts).map_err(blame)?;
            if let Some(p) = &cache_path {
                cache::store(p, &cache::records_from_table(&t)).map_err(|e| CliError::new("cache", e))?;
            }
            t
        }
    };
    for note in &table.notes {
        let _ = writeln!(err, "note: {note}");
    }
    let class = node.class_key();
    let v = &table.values[&class];
    o.emit(
        format_rational(v),
        json!({
            "family": fam.to_string(),
            "element": node.to_string(),
            "class": class.to_string(),
            "d": d,
            "dm": a.dm,
            "value": format_rational(v),
        }),
    )?;
    Ok(EXIT_OK)
}

fn series(engine: &Engine, a: &SeriesArgs, o: &mut Output) -> CmdResult {
    let fam = family(&a.family, &Family::ALL)?;
    let node = element(fam.graph_kind(), &a.element)?;
    let s = engine.series(fam, &node, a.order).map_err(blame)?;
    let coefficients = match &s.coefficients {
        SeriesCoefficients::Counts(c) => json!(c.iter().map(|x| x.to_string()).collect::<Vec<_>>()),
        SeriesCoefficients::Bivariate(terms) => json!(terms
            .iter()
            .map(|t| json!({
                "solid": t.solid,
                "dashed": t.dashed,
                "squiggled": t.squiggled,
                "count": t.count.to_string(),
            }))
            .collect::<Vec<_>>()),
    };
    o.emit(
        &s,
        json!({
            "family": fam.to_string(),
            "element": node.to_string(),
            "leading_exponent": s.leading_exponent,
            "order": s.order,
            "coefficients": coefficients,
        }),
    )?;
    Ok(EXIT_OK)
}

fn paths(engine: &Engine, a: &PathsArgs, o: &mut Output) -> CmdResult {
    let fam = family(&a.family, &Family::ALL)?;
    let kind = fam.graph_kind();
    let node = element(kind, &a.element)?;
    if a.dashed.is_some() && kind != GraphKind::AIII {
        return Err(CliError::new(
            "--dashed",
            WgError::InvalidArgument {
                arg: "dashed",
                reason: "only the aiii graph has a free number of dashed edges".into(),
            },
        ));
    }
    let table = engine.path_counts();
    if a.list {
        let found = enumerate_paths(kind, &node, a.solid, Some(a.limit), table).map_err(blame)?;
        for p in found.iter().filter(|p| a.dashed.is_none_or(|n| p.dashed_count() == n as usize)) {
            o.emit(
                p,
                json!({
                    "path": p.to_string(),
                    "solid": p.solid_count(),
                    "dashed": p.dashed_count(),
                    "squiggled": p.squiggled_count(),
                }),
            )?;
        }
    } else {
        let count = match a.dashed {
            Some(n) => table.count_aiii_refined(&node, a.solid, n),
            None => table.count(kind, &node, a.solid),
        };
        o.emit(
            &count,
            json!({
                "family": kind.name(),
                "element": node.to_string(),
                "solid": a.solid,
                "dashed": a.dashed,
                "count": count.to_string(),
            }),
        )?;
    }
    Ok(EXIT_OK)
}

fn factorizations(engine: &Engine, a: &FactorizationArgs, o: &mut Output) -> CmdResult {
    let fam = family(&a.family, &[Family::Unitary, Family::Orthogonal])?;
    let kind = fam.graph_kind();
    let node = element(kind, &a.element)?;
    let table = engine.path_counts();
    if a.count {
        let n = table.count(kind, &node, a.length);
        o.emit(
            &n,
            json!({"family": fam.to_string(), "element": node.to_string(), "length": a.length, "count": n.to_string()}),
        )?;
        return Ok(EXIT_OK);
    }
    for p in enumerate_paths(kind, &node, a.length, Some(a.limit), table).map_err(blame)? {
        let f = path_to_factorization(&p).map_err(blame)?;
        let pairs: Vec<[usize; 2]> = f.transpositions.iter().map(|&(i, j)| [i, j]).collect();
        o.emit(&f, json!({"factorization": f.to_string(), "transpositions": pairs}))?;
    }
    Ok(EXIT_OK)
}

fn moment(engine: &Engine, a: &MomentArgs, o: &mut Output, err: &mut dyn Write) -> CmdResult {
    let fam = family(&a.family, &[Family::Unitary, Family::Orthogonal, Family::Coe, Family::AIII])?;
    let text = match &a.monomial {
        Some(m) => m.clone(),
        None => [("rows", &a.rows), ("cols", &a.cols), ("crows", &a.crows), ("ccols", &a.ccols)]
            .iter()
            .filter_map(|(k, v)| v.as_ref().map(|v| format!("{k}={v}")))
            .collect::<Vec<_>>()
            .join(";"),
    };
    let flag = if a.monomial.is_some() { "--monomial" } else { "--rows" };
    let spec = MomentSpec::parse_monomial(fam, &text, a.dim, a.dm).map_err(|e| CliError::new(flag, e))?;
    let v = spec.evaluate(engine).map_err(blame)?;
    for note in &v.notes {
        let _ = writeln!(err, "note: {note}");
    }
    o.emit(
        format_rational(&v.value),
        json!({
            "family": fam.to_string(),
            "monomial": spec.to_string(),
            "d": a.dim,
            "dm": a.dm,
            "value": format_rational(&v.value),
        }),
    )?;
    Ok(EXIT_OK)
}

fn bounds_cmd(engine: &Engine, a: &BoundsArgs, o: &mut Output) -> CmdResult {
    let fam = family(&a.family, &[Family::Unitary, Family::Orthogonal, Family::Symplectic])?;
    if a.k == 0 {
        return Err(CliError::new(
            "--k",
            WgError::InvalidArgument {
                arg: "k",
                reason: "must be at least 1".into(),
            },
        ));
    }
    let table = engine.path_counts();
    let ratio_err = |e: WgError| CliError::new("--d", e);
    let mut reports: Vec<BoundReport> = Vec::new();
    let mut dyck = Vec::new();
    match fam {
        Family::Unitary => {
            reports.push(bounds::certify_unitary_bounds(table, a.k, a.gmax));
            reports.push(bounds::certify_injection(table, a.k, 2 * a.gmax));
            reports.push(bounds::certify_neighborhood(table, GraphKind::Unitary, a.k));
            if let Some(d) = a.d {
                reports.push(bounds::certify_wg_ratio_unitary(engine, a.k, d).map_err(ratio_err)?);
            }
        }
        Family::Orthogonal => {
            reports.push(bounds::certify_orthogonal_bounds(table, a.k, a.gmax));
            reports.push(bounds::certify_neighborhood(table, GraphKind::Orthogonal, a.k));
            if let Some(d) = a.d {
                reports.push(bounds::certify_orthogonal_ratio(engine, a.k, d).map_err(ratio_err)?);
            }
            dyck = IntegerPartition::all(a.k)
                .iter()
                .map(|mu| bounds::dyck_area_report(table, mu))
                .collect();
        }
        _ => {
            let d = a.d.ok_or_else(|| {
                CliError::new(
                    "--d",
                    WgError::InvalidArgument {
                        arg: "d",
                        reason: "the symplectic ratio bound needs a dimension".into(),
                    },
                )
            })?;
            reports.push(bounds::certify_sp_ratio(engine, a.k, d).map_err(ratio_err)?);
        }
    }
    let mut ok = true;
    for r in &reports {
        ok &= r.passed();
        let record = serde_json::to_value(r).map_err(|e| CliError::new("output", WgError::Io(e.to_string())))?;
        o.emit(r, record)?;
    }
    for r in &dyck {
        let record = serde_json::to_value(r).map_err(|e| CliError::new("output", WgError::Io(e.to_string())))?;
        o.emit(r, record)?;
    }
    Ok(if ok { EXIT_OK } else { EXIT_CHECK_FAILED })
}

fn parse_signature(text: &str) -> Result<(usize, usize), CliError> {
    let bad = || {
        CliError::new(
            "--sig",
            WgError::Parse {
                what: "signature",
                reason: format!("{text:?} is not a,b"),
            },
        )
    };
    let (a, b) = text.split_once(',').ok_or_else(bad)?;
    Ok((a.trim().parse().map_err(|_| bad())?, b.trim().parse().map_err(|_| bad())?))
}

fn mc_cmd(engine: &Engine, a: &McArgs, settings: &Settings, o: &mut Output) -> CmdResult {
    // sp is refused by the ensemble itself, with the reason
    let fam = family(&a.family, &Family::ALL)?;
    let sig = a.sig.as_deref().map(parse_signature).transpose()?;
    let ens = EnsembleSpec::new(fam, a.dim, sig).map_err(blame)?;
    let n = a.samples.or(settings.config.samples).unwrap_or(DEFAULT_SAMPLES);
    let seed = a.seed.or(settings.config.seed).unwrap_or(DEFAULT_SEED);
    let specs = a
        .moment
        .iter()
        .map(|m| MomentSpec::parse_monomial(fam, m, a.dim as i64, ens.dminus()))
        .collect::<Result<Vec<_>, _>>()
        .map_err(|e| CliError::new("--moment", e))?;
    let reports = mc::compare_with_exact(engine, &ens, &specs, n, seed).map_err(|e| match e {
        WgError::InvalidArgument { arg: "moment", .. } | WgError::LengthMismatch(_) => CliError::new("--moment", e),
        e => blame(e),
    })?;
    let mut ok = true;
    for r in &reports {
        ok &= r.passed;
        let mut record = serde_json::to_value(r).map_err(|e| CliError::new("output", WgError::Io(e.to_string())))?;
        record["ensemble"] = json!(ens.to_string());
        o.emit(r, record)?;
    }
    Ok(if ok { EXIT_OK } else { EXIT_CHECK_FAILED })
}

fn cache_path(arg: &Option<PathBuf>) -> Result<PathBuf, CliError> {
    arg.clone().or_else(|| std::env::var_os(CACHE_ENV).map(PathBuf::from)).ok_or_else(|| {
        CliError::new(
            "--path",
            WgError::InvalidArgument {
                arg: "path",
                reason: format!("no cache file; pass --path or set {CACHE_ENV}"),
            },
        )
    })
}

fn cache_cmd(engine: &Engine, action: &CacheAction, settings: &Settings, o: &mut Output) -> CmdResult {
    match action {
        CacheAction::Export { path, family: f, k, dim, dm } => {
            let path = cache_path(path)?;
            let fam = family(f, &Family::ALL)?;
            let dims = dim
                .split(',')
                .map(|t| t.trim().parse::<i64>())
                .collect::<Result<Vec<_>, _>>()
                .map_err(|e| {
                    CliError::new(
                        "--dim",
                        WgError::Parse {
                            what: "dimension list",
                            reason: e.to_string(),
                        },
                    )
                })?;
            let mut written = 0;
            for &d in &dims {
                for level in 1..=*k {
                    let t = engine.table(fam, level, d, *dm, SolveOptions::default()).map_err(blame)?;
                    written += cache::store(&path, &cache::records_from_table(&t)).map_err(|e| CliError::new("--path", e))?;
                }
            }
            o.emit(
                format!("wrote {written} records to {}", path.display()),
                json!({"path": path.display().to_string(), "written": written}),
            )?;
            Ok(EXIT_OK)
        }
        CacheAction::Verify { path, fraction, seed } => {
            let path = cache_path(path)?;
            let cache = Cache::load(&path).map_err(|e| CliError::new("--path", e))?;
            let fraction = fraction.or(settings.config.fraction).unwrap_or(DEFAULT_VERIFY_FRACTION);
            let seed = seed.or(settings.config.seed).unwrap_or(0);
            let report = cache::verify(engine, &cache, fraction, seed).map_err(|e| match e {
                WgError::InvalidArgument { .. } => CliError::new("--fraction", e),
                e => CliError::new("--path", e),
            })?;
            o.emit(
                format!("verified {} of {} records: ok", report.checked, report.records),
                serde_json::to_value(&report).map_err(|e| CliError::new("output", WgError::Io(e.to_string())))?,
            )?;
            Ok(EXIT_OK)
        }
    }
}
