use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use treeiso::profile::{iso_profile, ProfileConfig, DEFAULT_DP_CAP, DEFAULT_ORACLE_LIMIT};
use treeiso::report::{
    analyze_tree, binary_trend_verdict, emit, flux_seed, paper_tables, random_inputs, render_profile, render_report,
    render_suite, render_sweep, structured_inputs, verify_suite, OutputFormat, SuiteInput, SuiteOptions, TreeSource,
    DEFAULT_FLUX_SAMPLES,
};
use treeiso::tree::{generate_tree, parse_tree, serialize_tree, RootedTree, TreeFormat, TreeKind};

const EXIT_FAIL: u8 = 1;
const EXIT_INPUT: u8 = 2;

#[derive(Parser)]
#[command(name = "treeiso", version, about = "Exact isoperimetric profiles of rooted trees and their bounds")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a tree file.
    Generate {
        /// complete_tary, path, star, caterpillar, random_recursive, random_prufer
        kind: String,
        /// Generator parameter, e.g. `-p t=2 -p d=3`.
        #[arg(short = 'p', long = "param", value_parser = parse_key_val)]
        params: Vec<(String, u64)>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, value_enum, default_value_t = TreeFileFormat::Json)]
        format: TreeFileFormat,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Edge and vertex isoperimetric profiles of a tree file.
    Profile {
        tree: PathBuf,
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
        #[arg(long, value_enum)]
        input_format: Option<TreeFileFormat>,
        #[arg(long, default_value_t = DEFAULT_DP_CAP)]
        dp_cap: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Full bounds report for one tree file.
    Bounds {
        tree: PathBuf,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
        #[arg(long, value_enum)]
        input_format: Option<TreeFileFormat>,
        #[command(flatten)]
        suite: SuiteArgs,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run every check over a list of trees.
    Verify {
        /// Tree files.
        trees: Vec<PathBuf>,
        /// Generated tree, `kind:key=value,...`, e.g. `complete_tary:t=2,d=3`.
        #[arg(long = "gen")]
        generated: Vec<String>,
        /// Add every path, star, caterpillar and complete t-ary tree with at most this many vertices.
        #[arg(long)]
        structured: Option<usize>,
        /// Add this many seeded random trees.
        #[arg(long, default_value_t = 0)]
        random: usize,
        /// Vertex limit for `--random` trees.
        #[arg(long, default_value_t = 16)]
        max_n: usize,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
        #[arg(long, value_enum)]
        input_format: Option<TreeFileFormat>,
        #[command(flatten)]
        suite: SuiteArgs,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Complete binary and t-ary sweep of peaks against depth.
    PaperTables {
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
        #[arg(long, default_value_t = DEFAULT_DP_CAP)]
        dp_cap: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Args)]
struct SuiteArgs {
    #[arg(long, default_value_t = DEFAULT_ORACLE_LIMIT)]
    oracle_limit: usize,
    #[arg(long, default_value_t = DEFAULT_DP_CAP)]
    dp_cap: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Largest k in the counting-bound table (default: the edge peak).
    #[arg(long)]
    k_max: Option<usize>,
    #[arg(long, default_value_t = DEFAULT_FLUX_SAMPLES)]
    flux_samples: usize,
}

impl SuiteArgs {
    fn options(&self) -> SuiteOptions {
        SuiteOptions {
            profile: ProfileConfig { dp_cap: self.dp_cap, oracle_limit: self.oracle_limit, ..ProfileConfig::default() },
            k_max: self.k_max,
            seed: self.seed,
            flux_samples: self.flux_samples,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Csv,
    Json,
}

impl From<Format> for OutputFormat {
    fn from(f: Format) -> Self {
        match f {
            Format::Csv => OutputFormat::Csv,
            Format::Json => OutputFormat::Json,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum TreeFileFormat {
    Json,
    ParentList,
}

impl From<TreeFileFormat> for TreeFormat {
    fn from(f: TreeFileFormat) -> Self {
        match f {
            TreeFileFormat::Json => TreeFormat::Json,
            TreeFileFormat::ParentList => TreeFormat::ParentList,
        }
    }
}

fn parse_key_val(s: &str) -> Result<(String, u64), String> {
    let (k, v) = s.split_once('=').ok_or_else(|| format!("expected key=value, got {s:?}"))?;
    let v = v.trim().parse::<u64>().map_err(|e| format!("{k}: {e}"))?;
    Ok((k.trim().to_string(), v))
}

fn parse_gen_spec(spec: &str) -> Result<(TreeKind, BTreeMap<String, u64>), String> {
    let (kind, rest) = spec.split_once(':').unwrap_or((spec, ""));
    let kind: TreeKind = kind.parse().map_err(|e: treeiso::tree::GenerateError| e.to_string())?;
    let params = rest.split(',').filter(|s| !s.is_empty()).map(parse_key_val).collect::<Result<_, _>>()?;
    Ok((kind, params))
}

fn read_tree(path: &Path, format: Option<TreeFileFormat>) -> Result<RootedTree, String> {
    let bytes = std::fs::read(path).map_err(|e| format!("{}: {e}", path.display()))?;
    let format = format.map(TreeFormat::from).unwrap_or_else(|| {
        if bytes.iter().find(|b| !b.is_ascii_whitespace()) == Some(&b'{') {
            TreeFormat::Json
        } else {
            TreeFormat::ParentList
        }
    });
    parse_tree(&bytes, format).map_err(|e| format!("{}: {e}", path.display()))
}

fn write_out(bytes: &[u8], out: Option<&Path>) -> Result<(), u8> {
    emit(bytes, out).map_err(|e| {
        eprintln!("error: cannot write {}: {e}", out.map_or("stdout".into(), |p| p.display().to_string()));
        EXIT_INPUT
    })
}

fn run(cli: Cli) -> Result<(), u8> {
    let input_error = |msg: String| {
        eprintln!("error: {msg}");
        EXIT_INPUT
    };
    match cli.command {
        Command::Generate { kind, params, seed, format, out } => {
            let kind: TreeKind = kind.parse().map_err(|e: treeiso::tree::GenerateError| input_error(e.to_string()))?;
            let params: BTreeMap<String, u64> = params.into_iter().collect();
            let tree = generate_tree(kind, &params, seed).map_err(|e| input_error(e.to_string()))?;
            write_out(&serialize_tree(&tree, format.into()), out.as_deref())
        }
        Command::Profile { tree, format, input_format, dp_cap, out } => {
            let tree = read_tree(&tree, input_format).map_err(input_error)?;
            let config = ProfileConfig { dp_cap, ..ProfileConfig::default() };
            let profile = iso_profile(&tree, &config).map_err(|e| input_error(e.to_string()))?;
            write_out(&render_profile(&profile, format.into()), out.as_deref())
        }
        Command::Bounds { tree: path, format, input_format, suite, out } => {
            let tree = read_tree(&path, input_format).map_err(input_error)?;
            let options = suite.options();
            let source = TreeSource::File(path.display().to_string());
            let report =
                analyze_tree(&tree, &source, &options, flux_seed(options.seed, 0)).map_err(|e| input_error(e.to_string()))?;
            write_out(&render_report(&report, format.into()), out.as_deref())?;
            if report.mandatory_pass() {
                Ok(())
            } else {
                Err(EXIT_FAIL)
            }
        }
        Command::Verify { trees, generated, structured, random, max_n, format, input_format, suite, out } => {
            let options = suite.options();
            let mut inputs: Vec<SuiteInput> = trees
                .iter()
                .map(|p| SuiteInput { source: TreeSource::File(p.display().to_string()), tree: read_tree(p, input_format) })
                .collect();
            for spec in &generated {
                let (kind, params) = parse_gen_spec(spec).map_err(input_error)?;
                inputs.push(SuiteInput::generated(kind, params, options.seed, treeiso::tree::DEFAULT_MAX_VERTICES));
            }
            if let Some(max) = structured {
                inputs.extend(structured_inputs(max));
            }
            inputs.extend(random_inputs(random, max_n, options.seed));
            if inputs.is_empty() {
                return Err(input_error("no trees given".into()));
            }
            let outcome = verify_suite(&inputs, &options);
            write_out(&render_suite(&outcome, format.into()), out.as_deref())?;
            match outcome.exit_code {
                0 => Ok(()),
                code => Err(code as u8),
            }
        }
        Command::PaperTables { format, dp_cap, out } => {
            let config = ProfileConfig { dp_cap, ..ProfileConfig::default() };
            let rows = paper_tables(&config).map_err(|e| input_error(e.to_string()))?;
            write_out(&render_sweep(&rows, format.into()), out.as_deref())?;
            let trend = binary_trend_verdict(&rows);
            if !trend.pass {
                eprintln!("binary trend check failed: {}", trend.details);
            }
            if trend.pass && rows.iter().all(|r| r.theorem1_pass && r.sandwich_pass) {
                Ok(())
            } else {
                Err(EXIT_FAIL)
            }
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(code) => ExitCode::from(code),
    }
}
