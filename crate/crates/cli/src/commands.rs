use std::fs;
use std::path::{Path, PathBuf};
use std::time::{SystemTime, UNIX_EPOCH};

use clap::Args;
use olcqubo::chimera::{
    chimera_graph, default_chain_strength, embed_ising, find_embedding, logical_couplings,
    verify_embedding, ChimeraGraph,
};
use olcqubo::ising::qubo_to_ising;
use olcqubo::qaoa::{build_cost_hamiltonian, run_qaoa};
use olcqubo::qubo::{
    assemble_sequence, decode_solution, read_qubo_file, tsp_to_qubo, write_qubo_file, Decoded,
};
use olcqubo::reads::{overlap_graph, tour_cost, OverlapGraph};
use olcqubo::samplers::{solve_exact, solve_sa, AnnealSchedule, SamplerModel, EXACT_VARIABLE_CAP};
use olcqubo::{IsingModel, QuboModel, ReadSet, SampleSet, Vartype};
use serde_json::{json, Value};

use crate::config::{
    Backend, PipelineConfig, SaSettings, Scale, Settings, DEFAULT_OUTPUT_DIR, OUTPUT_DIR_ENV,
};
use crate::Failure;

/// States listed individually in reports.
const REPORT_STATES: usize = 32;
/// Cap on the optimal-state listing for highly degenerate models.
const REPORT_OPTIMAL: usize = 256;
const OPTIMAL_TOLERANCE: f64 = 1e-9;

fn read_text(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path)
        .map_err(|e| Failure::io(format!("cannot read {}: {e}", path.display())))
}

struct Artifacts {
    dir: PathBuf,
    written: Vec<String>,
}

impl Artifacts {
    fn create(dir: &Path) -> Result<Self, Failure> {
        fs::create_dir_all(dir)
            .map_err(|e| Failure::io(format!("cannot create {}: {e}", dir.display())))?;
        Ok(Self {
            dir: dir.to_path_buf(),
            written: Vec::new(),
        })
    }

    fn write(&mut self, name: &str, contents: &str) -> Result<(), Failure> {
        let path = self.dir.join(name);
        fs::write(&path, contents)
            .map_err(|e| Failure::io(format!("cannot write {}: {e}", path.display())))?;
        self.written.push(name.to_string());
        Ok(())
    }

    fn write_json(&mut self, name: &str, value: &Value) -> Result<(), Failure> {
        let mut text = serde_json::to_string_pretty(value).expect("JSON values serialize");
        text.push('\n');
        self.write(name, &text)
    }

    /// Wall-clock data kept out of the reproducible report.
    fn write_metadata(&mut self, command: &str) -> Result<(), Failure> {
        let created = SystemTime::now()
            .duration_since(UNIX_EPOCH)
            .map(|d| d.as_secs())
            .unwrap_or(0);
        self.write_json(
            "metadata.json",
            &json!({
                "command": command,
                "created_unix": created,
                "version": env!("CARGO_PKG_VERSION"),
            }),
        )
    }

    fn summary(&self, headline: String) -> String {
        format!(
            "{headline}\nwrote {} to {}",
            self.written.join(", "),
            self.dir.display()
        )
    }
}

fn check_exact_size(num_variables: usize) -> Result<(), Failure> {
    if num_variables > EXACT_VARIABLE_CAP {
        return Err(Failure::backend(format!(
            "exact backend enumerates at most {EXACT_VARIABLE_CAP} variables, model has {num_variables}"
        )));
    }
    Ok(())
}

fn anneal<M: SamplerModel>(model: &M, sa: &SaSettings, seed: u64) -> Result<SampleSet, Failure> {
    let defaults = AnnealSchedule::for_model(model, seed);
    let schedule = AnnealSchedule {
        sweeps: sa.sweeps.unwrap_or(defaults.sweeps),
        reads: sa.reads.unwrap_or(defaults.reads),
        beta_start: sa.beta_start.unwrap_or(defaults.beta_start),
        beta_end: sa.beta_end.unwrap_or(defaults.beta_end),
        seed,
    };
    schedule.validate()?;
    Ok(solve_sa(model, &schedule)?)
}

fn sample_json(s: &olcqubo::samples::Sample<'_>) -> Value {
    json!({"state": s.bitstring(), "energy": s.energy, "count": s.count})
}

/// One decoded sample: its tour and assembled sequence, or what it violates.
fn describe(
    s: &olcqubo::samples::Sample<'_>,
    model: &QuboModel,
    reads: &ReadSet,
    raw: &OverlapGraph,
) -> Result<Value, Failure> {
    let mut entry = sample_json(s);
    let fields = entry.as_object_mut().expect("object");
    match decode_solution(model, &s.values())? {
        Decoded::Tour(tour) => {
            let assembly = assemble_sequence(reads, &tour, raw)?;
            fields.insert("valid".into(), json!(true));
            fields.insert("tour".into(), json!(tour));
            fields.insert("tour_cost".into(), json!(tour_cost(raw, &tour)?));
            fields.insert("sequence".into(), json!(assembly.sequence));
            fields.insert("closing_overlap".into(), json!(assembly.closing_overlap));
        }
        Decoded::Invalid(why) => {
            fields.insert("valid".into(), json!(false));
            fields.insert("violations".into(), json!(why.classes()));
            fields.insert(
                "detail".into(),
                serde_json::to_value(&why).expect("serializable"),
            );
        }
    }
    Ok(entry)
}

pub fn assemble(
    input: &Path,
    settings: Settings,
    forced: Option<Backend>,
) -> Result<String, Failure> {
    let mut config = PipelineConfig::resolve(input, settings.clone(), Backend::Exact)?;
    if let Some(backend) = forced {
        if settings.backend.is_some_and(|b| b != backend) {
            return Err(Failure::validation(format!(
                "this command always uses the {} backend",
                backend.name()
            )));
        }
        config.backend = backend;
    }

    let reads = ReadSet::parse(&read_text(&config.input)?)?;
    let raw = overlap_graph(&reads, config.max_mismatch)?;
    let graph = match config.scale {
        Scale::Raw => raw.clone(),
        Scale::Normalized => raw.normalized()?,
    };
    let model = tsp_to_qubo(&graph, config.penalties)?;
    let n = reads.len();
    match config.backend {
        Backend::Exact => check_exact_size(model.num_variables())?,
        Backend::Qaoa if model.num_variables() > olcqubo::qaoa::MAX_QUBITS => {
            return Err(Failure::backend(format!(
                "qaoa backend simulates at most {} qubits, {n} reads need {}",
                olcqubo::qaoa::MAX_QUBITS,
                model.num_variables()
            )))
        }
        _ => {}
    }

    let mut out = Artifacts::create(&config.output)?;
    out.write("model.qubo", &write_qubo_file(&model))?;
    out.write_json("ising.json", &qubo_to_ising(&model).to_json())?;

    let mut qaoa_report = None;
    let samples = match config.backend {
        Backend::Exact => solve_exact(&model)?,
        Backend::Sa => anneal(&model, &config.sa, config.seed)?,
        Backend::Qaoa => {
            let h = build_cost_hamiltonian(&graph, config.qaoa_weight)?;
            let result = run_qaoa(&h, &config.qaoa)?;
            out.write("qaoa_log.jsonl", &result.log_json_lines())?;
            // top states in probability order, scored by the QUBO itself
            let mut set = SampleSet::new(Vartype::Binary, model.num_variables());
            for state in result.samples().iter() {
                set.push(&state.state(), model.energy(&state.values())?, 1);
            }
            qaoa_report = Some(result.report_json());
            set
        }
    };

    let lowest = samples.lowest_energy();
    let mut by_energy = samples.clone();
    by_energy.sort_by_energy();
    let optimal: Vec<Value> = by_energy
        .lowest(OPTIMAL_TOLERANCE)
        .iter()
        .take(REPORT_OPTIMAL)
        .map(|s| describe(s, &model, &reads, &raw))
        .collect::<Result<_, _>>()?;
    let listed = if config.backend == Backend::Qaoa {
        &samples
    } else {
        &by_energy
    };
    let states: Vec<Value> = listed
        .iter()
        .take(REPORT_STATES)
        .map(|s| describe(&s, &model, &reads, &raw))
        .collect::<Result<_, _>>()?;
    let (mut valid, mut invalid) = (0u64, 0u64);
    for s in samples.iter() {
        match decode_solution(&model, &s.values())? {
            Decoded::Tour(_) => valid += s.count,
            Decoded::Invalid(_) => invalid += s.count,
        }
    }

    let mut report = json!({
        "command": if forced.is_some() { "qaoa" } else { "assemble" },
        "input": config.input.display().to_string(),
        "seed": config.seed,
        "config": config.to_json(),
        "reads": reads.iter().collect::<Vec<_>>(),
        "overlaps": (0..n).map(|i| (0..n).map(|j| raw.weight(i, j)).collect::<Vec<_>>()).collect::<Vec<_>>(),
        "num_variables": model.num_variables(),
        "lowest_energy": lowest,
        "distinct_states": samples.len(),
        "total_count": samples.total_count(),
        "classification": {"valid_tour": valid, "invalid": invalid},
        "optimal_count": by_energy.lowest(OPTIMAL_TOLERANCE).len(),
        "optimal": optimal,
        "states": states,
    });
    if let Some(q) = qaoa_report {
        report["qaoa"] = q;
    }

    out.write("samples.csv", &samples.to_csv())?;
    out.write_json("histogram.json", &histogram_json(&samples, config.bins))?;
    out.write_json("report.json", &report)?;
    out.write_metadata(report["command"].as_str().unwrap_or("assemble"))?;

    let headline = match (lowest, report["optimal_count"].as_u64()) {
        (Some(e), Some(k)) => format!(
            "{} backend: lowest energy {e} ({k} state{})",
            config.backend.name(),
            if k == 1 { "" } else { "s" }
        ),
        _ => format!("{} backend: no samples", config.backend.name()),
    };
    Ok(out.summary(headline))
}

fn histogram_json(samples: &SampleSet, bins: usize) -> Value {
    serde_json::to_value(samples.histogram(bins)).expect("histogram serializes")
}

pub fn solve_qubo(input: &Path, ising: bool, settings: Settings) -> Result<String, Failure> {
    let config = PipelineConfig::resolve(input, settings, Backend::Exact)?;
    let file = read_qubo_file(&read_text(input)?)?;
    let mut out;
    let samples = if ising {
        let model = IsingModel::from_coefficients(&file);
        let samples = run_backend(&model, model.num_variables(), &config)?;
        out = Artifacts::create(&config.output)?;
        out.write_json("ising.json", &model.to_json())?;
        samples
    } else {
        let samples = run_backend(&file, file.num_variables(), &config)?;
        out = Artifacts::create(&config.output)?;
        out.write("model.qubo", &write_qubo_file(&file))?;
        out.write_json("ising.json", &qubo_to_ising(&file).to_json())?;
        samples
    };
    let mut sorted = samples.clone();
    sorted.sort_by_energy();
    let report = json!({
        "command": "solve-qubo",
        "input": input.display().to_string(),
        "interpretation": if ising { "ising" } else { "qubo" },
        "seed": config.seed,
        "backend": config.backend.name(),
        "config": config.to_json(),
        "num_variables": file.num_variables(),
        "lowest_energy": sorted.lowest_energy(),
        "distinct_states": sorted.len(),
        "total_count": sorted.total_count(),
        "states": sorted.iter().take(REPORT_STATES).map(|s| sample_json(&s)).collect::<Vec<_>>(),
    });
    out.write("samples.csv", &sorted.to_csv())?;
    out.write_json("histogram.json", &histogram_json(&sorted, config.bins))?;
    out.write_json("report.json", &report)?;
    out.write_metadata("solve-qubo")?;
    let headline = match sorted.lowest_energy() {
        Some(e) => format!("{} backend: lowest energy {e}", config.backend.name()),
        None => format!("{} backend: no samples", config.backend.name()),
    };
    Ok(out.summary(headline))
}

fn run_backend<M: SamplerModel>(
    model: &M,
    n: usize,
    config: &PipelineConfig,
) -> Result<SampleSet, Failure> {
    match config.backend {
        Backend::Exact => {
            check_exact_size(n)?;
            Ok(solve_exact(model)?)
        }
        Backend::Sa => anneal(model, &config.sa, config.seed),
        Backend::Qaoa => Err(Failure::validation(
            "solve-qubo supports the exact and sa backends",
        )),
    }
}

#[derive(Debug, Clone, Args)]
pub struct EmbedArgs {
    /// `ising.json` as written by the other commands, or a `.qubo` file.
    pub model: PathBuf,
    /// Chimera rows.
    #[arg(long, short = 'm', default_value_t = 16)]
    pub rows: usize,
    /// Chimera columns.
    #[arg(long, short = 'n', default_value_t = 16)]
    pub cols: usize,
    /// Qubits per cell shore.
    #[arg(long, short = 't', default_value_t = 4)]
    pub shore: usize,
    /// Hardware graph as JSON `{"qubits": N, "edges": [[a, b], ...]}`,
    /// replacing the Chimera lattice.
    #[arg(long)]
    pub graph: Option<PathBuf>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = 10)]
    pub tries: usize,
    /// Intra-chain coupling magnitude (default: twice the largest |J|).
    #[arg(long)]
    pub chain_strength: Option<f64>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

fn load_graph(args: &EmbedArgs) -> Result<ChimeraGraph, Failure> {
    let Some(path) = &args.graph else {
        return Ok(chimera_graph(args.rows, args.cols, args.shore)?);
    };
    let value: Value = serde_json::from_str(&read_text(path)?)
        .map_err(|e| Failure::validation(format!("{}: {e}", path.display())))?;
    let qubits = value["qubits"]
        .as_u64()
        .ok_or_else(|| Failure::validation("graph JSON needs an integer `qubits`"))?
        as usize;
    let edges = value["edges"]
        .as_array()
        .ok_or_else(|| Failure::validation("graph JSON needs an `edges` array"))?
        .iter()
        .map(|e| match e.as_array().map(|p| p.as_slice()) {
            Some([a, b]) => match (a.as_u64(), b.as_u64()) {
                (Some(a), Some(b)) => Ok((a as usize, b as usize)),
                _ => Err(Failure::validation(format!("invalid edge {e}"))),
            },
            _ => Err(Failure::validation(format!("invalid edge {e}"))),
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(ChimeraGraph::from_edges(qubits, &edges)?)
}

pub fn embed(args: &EmbedArgs) -> Result<String, Failure> {
    let text = read_text(&args.model)?;
    let model = if args.model.extension().is_some_and(|e| e == "qubo") {
        qubo_to_ising(&read_qubo_file(&text)?)
    } else {
        let value: Value = serde_json::from_str(&text)
            .map_err(|e| Failure::validation(format!("{}: {e}", args.model.display())))?;
        IsingModel::from_json(&value)?
    };
    if let Some(s) = args.chain_strength {
        if !(s.is_finite() && s >= 0.0) {
            return Err(Failure::validation(format!(
                "chain strength must be non-negative, got {s}"
            )));
        }
    }
    let graph = load_graph(args)?;
    let couplings = logical_couplings(&model);
    let embedding = find_embedding(
        &couplings,
        model.num_variables(),
        &graph,
        args.seed,
        args.tries,
    )?;
    let report = verify_embedding(&graph, &embedding, &couplings);
    let chain_strength = args
        .chain_strength
        .unwrap_or_else(|| default_chain_strength(&model));
    let physical = embed_ising(&model, &embedding, &graph, chain_strength)?;

    let dir = args
        .out
        .clone()
        .or_else(|| std::env::var_os(OUTPUT_DIR_ENV).map(PathBuf::from))
        .unwrap_or_else(|| PathBuf::from(DEFAULT_OUTPUT_DIR));
    let mut out = Artifacts::create(&dir)?;
    let (rows, cols, shore) = graph.dimensions();
    out.write_json("embedding.json", &embedding.to_json())?;
    out.write_json("embedded_ising.json", &physical.to_json())?;
    out.write_json(
        "embedding_report.json",
        &json!({
            "command": "embed",
            "input": args.model.display().to_string(),
            "seed": args.seed,
            "graph": {
                "rows": rows,
                "cols": cols,
                "shore": shore,
                "qubits": graph.num_qubits(),
                "edges": graph.num_edges(),
            },
            "variables": model.num_variables(),
            "couplings": couplings.len(),
            "chain_strength": chain_strength,
            "passed": report.passed(),
            "qubit_count": report.qubit_count,
            "max_chain_length": report.max_chain_length,
            "verification": report,
        }),
    )?;
    out.write_metadata("embed")?;
    Ok(out.summary(format!(
        "embedded {} variables on {} qubits, max chain length {}",
        model.num_variables(),
        embedding.qubit_count(),
        embedding.max_chain_length()
    )))
}
