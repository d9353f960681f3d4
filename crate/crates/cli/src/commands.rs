use std::collections::HashSet;
use std::fs;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use ddes_core::aggregate::{
    aggregate_records, group_by_image, AggregationConfig, AnchorChain, AnchorSource,
    AnnotationRecord,
};
use ddes_core::analysis::{hemisphere_mass, project_to_wheel, quadrant_mass, top_k, Axis};
use ddes_core::convert::{ConversionParams, ConversionTarget, ConverterRegistry};
use ddes_core::format::{fmt_sig9, sig9_vec};
use ddes_core::io::{encode_binary, grid_to_json};
use ddes_core::metrics::{evaluate, MetricRegistry};
use ddes_core::{DensityGrid, EmotionSet, EmotionState, GridGeometry, Kind, Lexicon};
use rayon::prelude::*;
use serde::Serialize;
use serde_json::Value;

use crate::cli::{
    AggregateArgs, AnalyzeArgs, ConvertArgs, EvalArgs, GeometryArgs, GridFormat, LexiconAction,
    ResampleArgs,
};
use crate::error::{CliError, CliResult};
use crate::records::{jsonl, load_set, parse_records, read_input, state_to_json, write_output};

fn geometry(args: &GeometryArgs) -> CliResult<GridGeometry> {
    GridGeometry::new(args.height, args.width).map_err(|e| CliError::Config(e.to_string()))
}

fn load_lexicon(path: &Path) -> CliResult<Lexicon> {
    Lexicon::load(path).map_err(|e| CliError::Config(format!("lexicon {}: {e}", path.display())))
}

/// Runs `f` over the records in parallel and returns outputs in input order,
/// or the error of the earliest failing line.
fn map_records<T, F>(records: &[crate::records::Record], f: F) -> CliResult<Vec<T>>
where
    T: Send,
    F: Fn(&crate::records::Record) -> CliResult<T> + Sync,
{
    let results: Vec<CliResult<T>> = records
        .par_iter()
        .map(|r| {
            f(r).map_err(|e| match e {
                CliError::Data(m) => CliError::at_line(r.line, m),
                other => other,
            })
        })
        .collect();
    results.into_iter().collect()
}

pub fn convert(args: &ConvertArgs) -> CliResult<()> {
    let from = Kind::from(args.from);
    let to = Kind::from(args.to);
    let params = args.params.params()?;
    let registry = ConverterRegistry::default();
    registry
        .get(from, to)
        .map_err(|e| CliError::Config(e.to_string()))?;
    let source_set = args.source_set.as_deref().map(load_set).transpose()?;
    if from == Kind::Ces && source_set.is_none() {
        return Err(CliError::Config("--from ces needs --source-set".into()));
    }
    let target = ConversionTarget {
        set: args.set.as_deref().map(load_set).transpose()?,
        geometry: geometry(&args.geometry)?,
    };
    if to == Kind::Ces && target.set.is_none() {
        return Err(CliError::Config("--to ces needs --set".into()));
    }
    let bin = args.format == GridFormat::Bin;
    if bin && (to != Kind::Ddes || args.output.is_none()) {
        return Err(CliError::Config(
            "--format bin needs --to ddes and --output".into(),
        ));
    }

    let bytes = read_input(&args.input)?;
    let records = parse_records(&bytes, from, source_set.as_ref())?;
    let converted = map_records(&records, |r| {
        Ok(registry.convert(&r.state, to, &target, &params)?)
    })?;

    if bin {
        let [only] = converted.as_slice() else {
            return Err(CliError::Data(format!(
                "--format bin writes one grid, input has {} records",
                converted.len()
            )));
        };
        let grid = only.as_grid().expect("ddes converter yields a grid");
        return write_output(args.output.as_deref(), &encode_binary(grid));
    }
    let lines = converted
        .iter()
        .zip(&records)
        .map(|(s, r)| state_to_json(s, r.id.as_ref()))
        .collect::<CliResult<Vec<_>>>()?;
    write_output(args.output.as_deref(), &jsonl(&lines))
}

pub fn resample(args: &ResampleArgs) -> CliResult<()> {
    let params = ConversionParams {
        epsilon_dist: args.epsilon_dist,
        ..Default::default()
    };
    params
        .validate()
        .map_err(|e| CliError::Config(e.to_string()))?;
    let source = load_set(&args.source_set)?;
    let target = ConversionTarget::with_set(load_set(&args.set)?);
    let registry = ConverterRegistry::default();

    let bytes = read_input(&args.input)?;
    let records = parse_records(&bytes, Kind::Ces, Some(&source))?;
    let out = map_records(&records, |r| {
        let s = registry.convert(&r.state, Kind::Ces, &target, &params)?;
        state_to_json(&s, r.id.as_ref())
    })?;
    write_output(args.output.as_deref(), &jsonl(&out))
}

#[derive(Serialize)]
struct AggregateSummary<'a> {
    image_id: &'a str,
    records: usize,
    points: usize,
    cov: [Cov; 2],
    fallback: bool,
    file: String,
}

#[derive(Serialize)]
struct Cov(#[serde(serialize_with = "sig9_vec")] [f64; 2]);

/// File-name-safe version of an image id.
fn sanitize(id: &str) -> String {
    let s: String = id
        .chars()
        .map(|c| {
            if c.is_ascii_alphanumeric() || matches!(c, '-' | '_' | '.') {
                c
            } else {
                '_'
            }
        })
        .collect();
    match s.trim_start_matches('.') {
        "" => "_".to_string(),
        t => t.to_string(),
    }
}

fn unique_names(ids: &[&str]) -> Vec<String> {
    let mut used = HashSet::new();
    ids.iter()
        .map(|id| {
            let base = sanitize(id);
            let mut name = base.clone();
            let mut n = 1;
            while !used.insert(name.clone()) {
                n += 1;
                name = format!("{base}-{n}");
            }
            name
        })
        .collect()
}

pub fn aggregate(args: &AggregateArgs) -> CliResult<()> {
    let config = match &args.config {
        Some(p) => {
            let text = read_input(p)?;
            let text = String::from_utf8(text)
                .map_err(|_| CliError::Config(format!("{} is not UTF-8", p.display())))?;
            AggregationConfig::from_json_str(&text)
                .map_err(|e| CliError::Config(format!("config {}: {e}", p.display())))?
        }
        None => AggregationConfig::default(),
    };
    let strategy = config
        .bandwidth
        .strategy()
        .map_err(|e| CliError::Config(e.to_string()))?;
    let set = args.set.as_deref().map(load_set).transpose()?;
    let lexicon = args.lexicon.as_deref().map(load_lexicon).transpose()?;
    let mut sources: Vec<&dyn AnchorSource> = Vec::new();
    if let Some(s) = &set {
        sources.push(s.as_ref());
    }
    if let Some(l) = &lexicon {
        sources.push(l);
    }
    if sources.is_empty() {
        return Err(CliError::Config(
            "aggregate needs --set and/or --lexicon to resolve labels".into(),
        ));
    }
    let anchors = AnchorChain(sources);

    let bytes = read_input(&args.annotations)?;
    let text =
        String::from_utf8(bytes).map_err(|_| CliError::Data("annotations are not UTF-8".into()))?;
    let mut records = Vec::new();
    for (n, line) in text.lines().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let rec = AnnotationRecord::from_json_str(line).map_err(|e| CliError::at_line(n + 1, e))?;
        if anchors.resolve(&rec.emotion_label).is_none() {
            return Err(CliError::at_line(
                n + 1,
                ddes_core::Error::UnresolvableLabel(rec.emotion_label),
            ));
        }
        records.push(rec);
    }
    if records.is_empty() {
        return Err(ddes_core::Error::EmptyInput.into());
    }

    let groups = group_by_image(records);
    let aggregated = groups
        .par_iter()
        .map(|(id, recs)| {
            aggregate_records(recs, &anchors, config.grid, strategy.as_ref())
                .map_err(|e| CliError::Data(format!("image {id:?}: {e}")))
        })
        .collect::<Vec<_>>()
        .into_iter()
        .collect::<CliResult<Vec<_>>>()?;

    fs::create_dir_all(&args.out_dir)
        .map_err(|e| CliError::Data(format!("cannot create {}: {e}", args.out_dir.display())))?;
    let ids: Vec<&str> = groups.iter().map(|(id, _)| id.as_str()).collect();
    let ext = match args.format {
        GridFormat::Json => "json",
        GridFormat::Bin => "ddes",
    };
    let mut summary = Vec::with_capacity(groups.len());
    for (((id, recs), agg), name) in groups.iter().zip(&aggregated).zip(unique_names(&ids)) {
        let path: PathBuf = args.out_dir.join(format!("{name}.{ext}"));
        let bytes = match args.format {
            GridFormat::Json => {
                let mut s = grid_to_json(&agg.grid)?;
                s.push('\n');
                s.into_bytes()
            }
            GridFormat::Bin => encode_binary(&agg.grid),
        };
        write_output(Some(&path), &bytes)?;
        let cov = agg.bandwidth.cov();
        summary.push(serde_json::to_string(&AggregateSummary {
            image_id: id,
            records: recs.len(),
            points: agg.points,
            cov: [Cov(cov[0]), Cov(cov[1])],
            fallback: agg.bandwidth.is_fallback(),
            file: path.display().to_string(),
        })?);
    }
    write_output(None, &jsonl(&summary))
}

pub fn eval(args: &EvalArgs) -> CliResult<()> {
    let params = args.params.params()?;
    let registry = MetricRegistry::default();
    for name in &args.metrics {
        registry
            .get(name)
            .map_err(|e| CliError::Config(e.to_string()))?;
    }
    let shared = args.set.as_deref().map(load_set).transpose()?;
    let pick = |own: &Option<PathBuf>| -> CliResult<Option<Arc<EmotionSet>>> {
        match own {
            Some(p) => load_set(p).map(Some),
            None => Ok(shared.clone()),
        }
    };
    let pred_set = pick(&args.pred_set)?;
    let gt_set = pick(&args.gt_set)?;

    let preds = parse_records(
        &read_input(&args.pred)?,
        args.pred_kind.into(),
        pred_set.as_ref(),
    )
    .map_err(|e| prefix("predictions", e))?;
    let gts = parse_records(&read_input(&args.gt)?, args.gt_kind.into(), gt_set.as_ref())
        .map_err(|e| prefix("ground truth", e))?;
    let preds: Vec<EmotionState> = preds.into_iter().map(|r| r.state).collect();
    let gts: Vec<EmotionState> = gts.into_iter().map(|r| r.state).collect();

    let target = ConversionTarget {
        set: shared.or(gt_set).or(pred_set),
        geometry: geometry(&args.geometry)?,
    };
    let names: Vec<&str> = args.metrics.iter().map(String::as_str).collect();
    let mut lines = Vec::new();
    let mut failures = Vec::new();
    for (name, result) in evaluate(&preds, &gts, &names, &target, &params) {
        match result {
            Ok(report) => lines.push(serde_json::to_string(&report)?),
            Err(e) => failures.push(format!("{name}: {e}")),
        }
    }
    write_output(args.output.as_deref(), &jsonl(&lines))?;
    if failures.is_empty() {
        Ok(())
    } else {
        Err(CliError::Data(format!(
            "{} metric(s) failed\n  {}",
            failures.len(),
            failures.join("\n  ")
        )))
    }
}

fn prefix(what: &str, e: CliError) -> CliError {
    match e {
        CliError::Data(m) => CliError::Data(format!("{what}: {m}")),
        CliError::Config(m) => CliError::Config(format!("{what}: {m}")),
    }
}

#[derive(Serialize)]
struct Hemispheres(#[serde(serialize_with = "sig9_vec")] [f64; 2]);

#[derive(Serialize)]
struct HemisphereReport {
    valence: Hemispheres,
    arousal: Hemispheres,
}

#[derive(Serialize)]
struct RankedEmotion<'a>(
    &'a str,
    #[serde(serialize_with = "ddes_core::format::sig9")] f64,
);

#[derive(Serialize)]
struct AnalysisReport<'a> {
    #[serde(skip_serializing_if = "Option::is_none")]
    id: Option<&'a Value>,
    #[serde(
        skip_serializing_if = "Option::is_none",
        serialize_with = "opt_sig9_vec"
    )]
    quadrants: Option<[f64; 4]>,
    #[serde(skip_serializing_if = "Option::is_none")]
    hemispheres: Option<HemisphereReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    top_k: Option<Vec<RankedEmotion<'a>>>,
}

fn opt_sig9_vec<S: serde::Serializer>(xs: &Option<[f64; 4]>, s: S) -> Result<S::Ok, S::Error> {
    sig9_vec(xs.as_ref().expect("skipped when absent"), s)
}

fn load_grids(path: &Path) -> CliResult<Vec<(Option<Value>, DensityGrid)>> {
    let bytes = fs::read(path)
        .map_err(|e| CliError::Data(format!("cannot read {}: {e}", path.display())))?;
    let records = parse_records(&bytes, Kind::Ddes, None)
        .map_err(|e| prefix(&path.display().to_string(), e))?;
    Ok(records
        .into_iter()
        .map(|r| match r.state {
            EmotionState::Density(g) => (r.id, g),
            _ => unreachable!("ddes records parse to grids"),
        })
        .collect())
}

pub fn analyze(args: &AnalyzeArgs) -> CliResult<()> {
    let wheel = args.wheel.as_deref().map(load_set).transpose()?;
    let k = match (&wheel, args.top_k) {
        (Some(w), None) => w.len(),
        (Some(w), Some(k)) if k == 0 || k > w.len() => {
            return Err(CliError::Config(format!(
                "--top-k must be in 1..={}, got {k}",
                w.len()
            )))
        }
        (_, k) => k.unwrap_or(0),
    };
    let defaults = !args.quadrants && !args.hemispheres && wheel.is_none();
    let want_quadrants = args.quadrants || defaults;
    let want_hemispheres = args.hemispheres || defaults;

    let mut grids = Vec::new();
    for path in &args.inputs {
        grids.extend(load_grids(path)?);
    }
    let ranked = grids
        .par_iter()
        .map(|(_, g)| {
            wheel
                .as_ref()
                .map(|w| top_k(&project_to_wheel(g, w.clone())?, k))
                .transpose()
        })
        .collect::<Result<Vec<_>, _>>()?;

    let mut lines = Vec::with_capacity(grids.len());
    for ((id, grid), ranked) in grids.iter().zip(&ranked) {
        let report = AnalysisReport {
            id: id.as_ref(),
            quadrants: want_quadrants.then(|| quadrant_mass(grid)),
            hemispheres: want_hemispheres.then(|| HemisphereReport {
                valence: Hemispheres(hemisphere_mass(grid, Axis::Valence)),
                arousal: Hemispheres(hemisphere_mass(grid, Axis::Arousal)),
            }),
            top_k: ranked
                .as_ref()
                .map(|r| r.iter().map(|(l, p)| RankedEmotion(l, *p)).collect()),
        };
        lines.push(serde_json::to_string(&report)?);
    }
    write_output(args.output.as_deref(), &jsonl(&lines))
}

pub fn lexicon(action: &LexiconAction) -> CliResult<()> {
    match action {
        LexiconAction::Lookup { lexicon, words } => {
            let lex = load_lexicon(lexicon)?;
            let missing: Vec<&str> = words
                .iter()
                .filter(|w| lex.entry(w).is_none())
                .map(String::as_str)
                .collect();
            if !missing.is_empty() {
                return Err(ddes_core::Error::WordNotFound(missing.join(", ")).into());
            }
            let mut out = String::new();
            for w in words {
                let p = lex.lookup_va(w)?;
                out.push_str(&format!(
                    "{} {}\n",
                    fmt_sig9(p.valence()),
                    fmt_sig9(p.arousal())
                ));
            }
            write_output(None, out.as_bytes())
        }
        LexiconAction::BuildSet {
            lexicon,
            name,
            output,
            words,
        } => {
            let lex = load_lexicon(lexicon)?;
            let mut json = lex.build_set(name, words)?.to_json_string()?;
            json.push('\n');
            write_output(output.as_deref(), json.as_bytes())
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sanitized_names_are_unique() {
        let names = unique_names(&["a/b", "a_b", "../x", "", "ok-1.png"]);
        assert_eq!(names, ["a_b", "a_b-2", "_x", "_", "ok-1.png"]);
    }
}
