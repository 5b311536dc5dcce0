use clap::{Args, Parser, Subcommand, ValueEnum};
use qhj::catalog::{get_model, list_models, Model, ModelId, RawParams};
use qhj::oracle::verify::{verify_model, VerifyOptions};
use qhj::report;
use qhj::spectrum::{solve_spectrum, SolveOptions};
use qhj::wavefunction::Normalization;
use qhj::QhjError;
use serde_json::Value;
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "qhj", version, about = "Quantum Hamilton-Jacobi spectra, wavefunctions and grid verification")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// List catalog models, or document one model's parameters.
    List {
        model: Option<String>,
        #[arg(long)]
        json: bool,
    },
    /// Solve a model: energies, residues and wavefunction forms.
    Solve {
        #[command(flatten)]
        common: Common,
        /// Number of n values tried for models whose energy is fixed by quantization.
        #[arg(long)]
        levels: Option<u32>,
    },
    /// Compare analytic levels with grid diagonalization.
    Verify {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        tol: Option<f64>,
        #[arg(long)]
        levels: Option<u32>,
    },
    /// Sample one analytic eigenfunction.
    Wavefunction {
        #[command(flatten)]
        common: Common,
        /// Index into the solved spectrum, in `solve` order.
        #[arg(long)]
        state: Option<usize>,
        #[arg(long)]
        samples: Option<usize>,
        #[arg(long, value_enum)]
        normalization: Option<NormArg>,
        #[arg(long)]
        levels: Option<u32>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum NormArg {
    Sup,
    L2,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
    Csv,
}

#[derive(Args)]
struct Common {
    /// Model id; may instead come from the config file.
    model: Option<String>,
    /// JSON object with a `model` key, parameter keys and command options.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long, value_enum)]
    format: Option<Format>,
    /// Shorthand for `--format json`.
    #[arg(long)]
    json: bool,
    #[arg(long, short)]
    output: Option<PathBuf>,
    #[command(flatten)]
    params: ParamFlags,
}

#[derive(Args)]
struct ParamFlags {
    #[arg(long)]
    e2: Option<String>,
    #[arg(long)]
    l: Option<String>,
    #[arg(long = "A")]
    big_a: Option<String>,
    #[arg(long = "B")]
    big_b: Option<String>,
    #[arg(long)]
    alpha: Option<String>,
    #[arg(long)]
    s: Option<String>,
    #[arg(long)]
    j: Option<String>,
    #[arg(long)]
    m: Option<String>,
    #[arg(long)]
    a: Option<String>,
    #[arg(long)]
    b: Option<String>,
    #[arg(long)]
    zeta: Option<String>,
    #[arg(long = "M")]
    big_m: Option<String>,
}

impl ParamFlags {
    fn pairs(&self) -> Vec<(&'static str, &Option<String>)> {
        vec![
            ("e2", &self.e2),
            ("l", &self.l),
            ("A", &self.big_a),
            ("B", &self.big_b),
            ("alpha", &self.alpha),
            ("s", &self.s),
            ("j", &self.j),
            ("m", &self.m),
            ("a", &self.a),
            ("b", &self.b),
            ("zeta", &self.zeta),
            ("M", &self.big_m),
        ]
    }
}

const OPTION_KEYS: [&str; 8] = ["model", "levels", "tol", "state", "samples", "normalization", "format", "output"];

/// Model, parameters and options after merging the config file with flags.
struct Resolved {
    model: Model,
    options: serde_json::Map<String, Value>,
    format: Option<Format>,
    output: Option<PathBuf>,
}

fn config_error(msg: impl Into<String>) -> QhjError {
    QhjError::Config(msg.into())
}

fn resolve(common: &Common) -> Result<Resolved, QhjError> {
    let mut options = serde_json::Map::new();
    let mut raw = RawParams::new();
    if let Some(path) = &common.config {
        let text = std::fs::read_to_string(path)?;
        let Value::Object(map) = serde_json::from_str::<Value>(&text)? else {
            return Err(config_error("config must be a JSON object"));
        };
        for (k, v) in map {
            if OPTION_KEYS.contains(&k.as_str()) {
                options.insert(k, v);
            } else {
                raw.insert(k, v);
            }
        }
    }
    for (name, value) in common.params.pairs() {
        if let Some(v) = value {
            raw.insert(name.to_string(), Value::String(v.clone()));
        }
    }
    let model_name = match (&common.model, options.get("model")) {
        (Some(m), _) => m.clone(),
        (None, Some(Value::String(m))) => m.clone(),
        (None, Some(_)) => return Err(config_error("`model` must be a string")),
        (None, None) => return Err(config_error("no model given")),
    };
    let id: ModelId = model_name.parse()?;
    let model = get_model(id, &raw)?;
    let format = match (common.json, common.format) {
        (true, _) => Some(Format::Json),
        (false, Some(f)) => Some(f),
        (false, None) => match options.get("format") {
            Some(v) => Some(parse_enum::<Format>("format", v)?),
            None => None,
        },
    };
    let output = match (&common.output, options.get("output")) {
        (Some(p), _) => Some(p.clone()),
        (None, Some(Value::String(p))) => Some(PathBuf::from(p)),
        (None, Some(_)) => return Err(config_error("`output` must be a string")),
        (None, None) => None,
    };
    Ok(Resolved { model, options, format, output })
}

fn parse_enum<T: ValueEnum>(key: &str, v: &Value) -> Result<T, QhjError> {
    let s = v.as_str().ok_or_else(|| config_error(format!("`{key}` must be a string")))?;
    T::from_str(s, true).map_err(|_| config_error(format!("invalid `{key}`: {s}")))
}

fn option_u64(opts: &serde_json::Map<String, Value>, key: &str) -> Result<Option<u64>, QhjError> {
    match opts.get(key) {
        None => Ok(None),
        Some(v) => v.as_u64().map(Some).ok_or_else(|| config_error(format!("`{key}` must be a nonnegative integer"))),
    }
}

fn option_f64(opts: &serde_json::Map<String, Value>, key: &str) -> Result<Option<f64>, QhjError> {
    match opts.get(key) {
        None => Ok(None),
        Some(v) => v.as_f64().map(Some).ok_or_else(|| config_error(format!("`{key}` must be a number"))),
    }
}

fn levels(flag: Option<u32>, r: &Resolved) -> Result<SolveOptions, QhjError> {
    let mut so = SolveOptions::default();
    if let Some(l) = flag.or(option_u64(&r.options, "levels")?.map(|l| l as u32)) {
        so.levels = l;
    }
    Ok(so)
}

fn emit(text: &str, output: &Option<PathBuf>) -> Result<(), QhjError> {
    match output {
        Some(p) => std::fs::write(p, text)?,
        None => print!("{text}"),
    }
    Ok(())
}

fn run(cli: Cli) -> Result<ExitCode, QhjError> {
    match cli.command {
        Command::List { model, json } => {
            let infos = list_models();
            let text = match model {
                Some(name) => {
                    let id: ModelId = name.parse()?;
                    let info = infos.into_iter().find(|i| i.id == id).expect("catalog covers every id");
                    if json { report::to_json(&info)? } else { report::model_text(&info) }
                }
                None if json => report::to_json(&infos)?,
                None => report::catalog_text(&infos),
            };
            print!("{text}");
            Ok(ExitCode::SUCCESS)
        }
        Command::Solve { common, levels: lv } => {
            let r = resolve(&common)?;
            let spectrum = solve_spectrum(&r.model, levels(lv, &r)?)?;
            let doc = report::spectrum_document(&r.model, &spectrum)?;
            let text = match r.format.unwrap_or(Format::Text) {
                Format::Text => report::spectrum_text(&doc),
                Format::Json => report::to_json(&doc)?,
                Format::Csv => report::spectrum_csv(&doc)?,
            };
            emit(&text, &r.output)?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Verify { common, tol, levels: lv } => {
            let r = resolve(&common)?;
            let opts = VerifyOptions {
                tol: tol.or(option_f64(&r.options, "tol")?),
                levels: Some(levels(lv, &r)?.levels),
            };
            let rep = verify_model(&r.model, opts)?;
            let text = match r.format.unwrap_or(Format::Text) {
                Format::Text => report::verify_text(&rep),
                Format::Json => report::to_json(&rep)?,
                Format::Csv => report::verify_csv(&rep)?,
            };
            emit(&text, &r.output)?;
            Ok(if rep.pass { ExitCode::SUCCESS } else { ExitCode::from(3) })
        }
        Command::Wavefunction { common, state, samples, normalization, levels: lv } => {
            let r = resolve(&common)?;
            let state = match state {
                Some(s) => s,
                None => option_u64(&r.options, "state")?.unwrap_or(0) as usize,
            };
            let samples = match samples {
                Some(s) => s,
                None => option_u64(&r.options, "samples")?.unwrap_or(400) as usize,
            };
            let normalization = match normalization {
                Some(NormArg::Sup) => Normalization::SupNormOne,
                Some(NormArg::L2) => Normalization::L2One,
                None => match r.options.get("normalization") {
                    Some(v) => match parse_enum::<NormArg>("normalization", v)? {
                        NormArg::Sup => Normalization::SupNormOne,
                        NormArg::L2 => Normalization::L2One,
                    },
                    None => Normalization::SupNormOne,
                },
            };
            let spectrum = solve_spectrum(&r.model, levels(lv, &r)?)?;
            let line = spectrum.lines.get(state).ok_or_else(|| {
                config_error(format!("state {state} out of range: the spectrum has {} lines", spectrum.lines.len()))
            })?;
            let sampled = line.recipe.sample(samples, normalization)?;
            let text = match r.format.unwrap_or(Format::Csv) {
                Format::Json => report::to_json(&report::wavefunction_document(line, &sampled)?)?,
                Format::Csv | Format::Text => report::wavefunction_csv(&sampled)?,
            };
            emit(&text, &r.output)?;
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn main() -> ExitCode {
    if let Some(n) = std::env::var("QHJ_NUM_THREADS").ok().and_then(|v| v.parse::<usize>().ok()) {
        if n > 0 {
            let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
        }
    }
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            match e {
                QhjError::NoAdmissibleAssignment(_) => ExitCode::from(2),
                _ => ExitCode::from(1),
            }
        }
    }
}
