use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use ddes_core::convert::{ConversionParams, Sigma};
use ddes_core::grid::DEFAULT_SIZE;
use ddes_core::Kind;

use crate::error::CliError;

#[derive(Parser, Debug)]
#[command(
    name = "ddes-kit",
    version,
    about = "Convert, aggregate, evaluate and analyze emotion representations"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Convert records between ces, des and ddes.
    Convert(ConvertArgs),
    /// Build one density grid per image from crowd annotations.
    Aggregate(AggregateArgs),
    /// Resample categorical states onto another emotion set.
    Resample(ResampleArgs),
    /// Score predictions against ground truth.
    Eval(EvalArgs),
    /// Quadrant, hemisphere and wheel summaries of density grids.
    Analyze(AnalyzeArgs),
    /// Look up words in a VAD lexicon or build an emotion set from them.
    Lexicon(LexiconArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum KindArg {
    Ces,
    Des,
    Ddes,
}

impl From<KindArg> for Kind {
    fn from(k: KindArg) -> Self {
        match k {
            KindArg::Ces => Kind::Ces,
            KindArg::Des => Kind::Des,
            KindArg::Ddes => Kind::Ddes,
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, ValueEnum)]
pub enum GridFormat {
    #[default]
    Json,
    Bin,
}

#[derive(Args, Debug, Clone)]
pub struct ParamArgs {
    /// Gaussian kernel width for conversions into a grid: a number or `auto`.
    #[arg(long, default_value = "auto")]
    pub sigma: String,
    /// Sharpness of the point-to-categorical softmax.
    #[arg(long, default_value_t = 10.0)]
    pub k: f64,
    /// Sharpening temperature applied before taking a grid's center of mass.
    #[arg(long, default_value_t = 0.05)]
    pub tau: f64,
    /// Distance offset in categorical resampling.
    #[arg(long, default_value_t = 1e-6)]
    pub epsilon_dist: f64,
    /// Cell floor used when sharpening.
    #[arg(long, default_value_t = 1e-12)]
    pub epsilon_temp: f64,
}

impl ParamArgs {
    pub fn params(&self) -> Result<ConversionParams, CliError> {
        let sigma = if self.sigma.eq_ignore_ascii_case("auto") {
            Sigma::Auto
        } else {
            Sigma::Fixed(self.sigma.parse().map_err(|_| {
                CliError::Config(format!(
                    "--sigma must be a number or `auto`, got {:?}",
                    self.sigma
                ))
            })?)
        };
        let params = ConversionParams {
            epsilon_dist: self.epsilon_dist,
            sharpness_k: self.k,
            sigma,
            temperature_tau: self.tau,
            epsilon_temp: self.epsilon_temp,
        };
        params
            .validate()
            .map_err(|e| CliError::Config(e.to_string()))?;
        Ok(params)
    }
}

#[derive(Args, Debug, Clone)]
pub struct GeometryArgs {
    #[arg(long, default_value_t = DEFAULT_SIZE)]
    pub height: usize,
    #[arg(long, default_value_t = DEFAULT_SIZE)]
    pub width: usize,
}

#[derive(Args, Debug)]
pub struct ConvertArgs {
    #[arg(long, value_enum)]
    pub from: KindArg,
    #[arg(long, value_enum)]
    pub to: KindArg,
    /// JSON Lines input (a DDES binary file is also accepted for `--from ddes`).
    #[arg(long, short)]
    pub input: PathBuf,
    /// Output path; stdout when omitted.
    #[arg(long, short)]
    pub output: Option<PathBuf>,
    /// Target emotion set (required for `--to ces`).
    #[arg(long)]
    pub set: Option<PathBuf>,
    /// Emotion set of the input records (required for `--from ces`).
    #[arg(long)]
    pub source_set: Option<PathBuf>,
    /// Grid output format; `bin` needs a single record and `--output`.
    #[arg(long, value_enum, default_value_t)]
    pub format: GridFormat,
    #[command(flatten)]
    pub geometry: GeometryArgs,
    #[command(flatten)]
    pub params: ParamArgs,
}

#[derive(Args, Debug)]
pub struct ResampleArgs {
    #[arg(long, short)]
    pub input: PathBuf,
    #[arg(long, short)]
    pub output: Option<PathBuf>,
    #[arg(long)]
    pub source_set: PathBuf,
    #[arg(long)]
    pub set: PathBuf,
    /// Distance offset in categorical resampling.
    #[arg(long, default_value_t = 1e-6)]
    pub epsilon_dist: f64,
}

#[derive(Args, Debug)]
pub struct AggregateArgs {
    /// Annotations, JSON Lines: {"image_id", "emotion", "sentence_va": [v, a] | null}.
    #[arg(long)]
    pub annotations: PathBuf,
    /// Aggregation config JSON; defaults to a 28x28 grid with Scott's rule.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Emotion set used to resolve labels (checked before the lexicon).
    #[arg(long)]
    pub set: Option<PathBuf>,
    #[arg(long, env = "DDES_KIT_LEXICON")]
    pub lexicon: Option<PathBuf>,
    #[arg(long)]
    pub out_dir: PathBuf,
    #[arg(long, value_enum, default_value_t)]
    pub format: GridFormat,
}

#[derive(Args, Debug)]
pub struct EvalArgs {
    #[arg(long)]
    pub pred: PathBuf,
    #[arg(long, value_enum)]
    pub pred_kind: KindArg,
    #[arg(long)]
    pub gt: PathBuf,
    #[arg(long, value_enum)]
    pub gt_kind: KindArg,
    /// Comma-separated metric names.
    #[arg(long, value_delimiter = ',', default_value = "accuracy,f1,kendall")]
    pub metrics: Vec<String>,
    /// Emotion set for categorical metrics when ground truth is a grid; also
    /// the default for --pred-set and --gt-set.
    #[arg(long)]
    pub set: Option<PathBuf>,
    #[arg(long)]
    pub pred_set: Option<PathBuf>,
    #[arg(long)]
    pub gt_set: Option<PathBuf>,
    #[arg(long, short)]
    pub output: Option<PathBuf>,
    #[command(flatten)]
    pub geometry: GeometryArgs,
    #[command(flatten)]
    pub params: ParamArgs,
}

#[derive(Args, Debug)]
pub struct AnalyzeArgs {
    /// Grid files: DDES binary or JSON Lines of grids.
    #[arg(required = true)]
    pub inputs: Vec<PathBuf>,
    #[arg(long)]
    pub quadrants: bool,
    #[arg(long)]
    pub hemispheres: bool,
    /// Emotion wheel to project onto; enables `top_k` output.
    #[arg(long)]
    pub wheel: Option<PathBuf>,
    /// Number of ranked wheel emotions (default: all).
    #[arg(long, requires = "wheel")]
    pub top_k: Option<usize>,
    #[arg(long, short)]
    pub output: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct LexiconArgs {
    #[command(subcommand)]
    pub action: LexiconAction,
}

#[derive(Subcommand, Debug)]
pub enum LexiconAction {
    /// Print `valence arousal` in [-1, 1] for each word.
    Lookup {
        #[arg(long, env = "DDES_KIT_LEXICON")]
        lexicon: PathBuf,
        #[arg(required = true)]
        words: Vec<String>,
    },
    /// Write an emotion set whose anchors are the words' lexicon coordinates.
    BuildSet {
        #[arg(long, env = "DDES_KIT_LEXICON")]
        lexicon: PathBuf,
        #[arg(long, default_value = "custom")]
        name: String,
        #[arg(long, short)]
        output: Option<PathBuf>,
        #[arg(required = true)]
        words: Vec<String>,
    },
}
