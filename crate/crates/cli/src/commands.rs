use std::fmt;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use serde_json::json;
use trifree_core::construct::FamilyParams;
use trifree_core::detect::{analyze_square, GeneratorInfo, GraphRecord};
use trifree_core::format::{
    parse_graph, parse_state_file, write_cmat, write_graph, write_state, write_triple,
};
use trifree_core::{
    cycle_realization, detect_rectangular, enumerate_tf_cyclic_connected, extract_abc,
    find_certificate, graph_realization, independent_set_reduction, monte_carlo_project,
    project_cldui, project_ldoi, sample_family, ASampling, BipartiteState, ComplexMatrix, Error,
    Outcome, SearchBudget, Tolerances, TwirlMode, Verdict, VerdictReport,
};

use crate::{Command, ConstructCommand, GraphCommand, Mode, TolArgs};

pub const EXIT_USAGE: u8 = 64;
pub const EXIT_DATA: u8 = 65;
pub const EXIT_CONSTRUCT: u8 = 66;
pub const EXIT_IO: u8 = 74;

#[derive(Debug)]
pub enum CliError {
    Core(Error),
    Io { path: PathBuf, source: std::io::Error },
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Io { .. } => EXIT_IO,
            CliError::Core(e) => match e {
                Error::Parse { .. } => EXIT_USAGE,
                Error::CycleTooShort(_)
                | Error::NotTriangleFree
                | Error::Acyclic
                | Error::SearchFailed
                | Error::RejectionBudgetExceeded(_) => EXIT_CONSTRUCT,
                _ => EXIT_DATA,
            },
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Core(e) => write!(f, "{e}"),
            CliError::Io { path, source } => write!(f, "{}: {source}", path.display()),
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Core(e)
    }
}

type CliResult<T> = Result<T, CliError>;

fn read(path: &Path) -> CliResult<String> {
    fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.to_owned(),
        source,
    })
}

fn emit(output: Option<&Path>, text: &str) -> CliResult<()> {
    match output {
        Some(path) => fs::write(path, text).map_err(|source| CliError::Io {
            path: path.to_owned(),
            source,
        }),
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(text.as_bytes())
                .and_then(|_| out.flush())
                .map_err(|source| CliError::Io {
                    path: PathBuf::from("<stdout>"),
                    source,
                })
        }
    }
}

fn tolerances(t: TolArgs) -> CliResult<Tolerances> {
    Ok(Tolerances::new(t.psd, t.zero)?)
}

fn load_state(path: &Path, dims: Option<Vec<usize>>, tol: &Tolerances) -> CliResult<BipartiteState> {
    let file = parse_state_file(&read(path)?)?;
    let n = file.matrix.rows();
    let (d1, d2) = match dims.as_deref() {
        Some(&[d1, d2]) => (d1, d2),
        _ => match file.dims {
            Some(d) => d,
            None => {
                let d = (n as f64).sqrt().round() as usize;
                if d * d != n {
                    return Err(Error::DimensionMismatch(format!(
                        "{n}x{n} matrix has no `# dims` line and is not d*d x d*d; pass --dims"
                    ))
                    .into());
                }
                (d, d)
            }
        },
    };
    Ok(BipartiteState::new(file.matrix, d1, d2, tol)?)
}

/// The same state with the two factors exchanged.
fn swap_factors(state: &BipartiteState, tol: &Tolerances) -> CliResult<BipartiteState> {
    let (d1, d2) = (state.d1(), state.d2());
    let rho = state.rho();
    let swapped = ComplexMatrix::from_fn(d1 * d2, d1 * d2, |r, c| {
        let (j, i) = (r / d1, r % d1);
        let (l, k) = (c / d1, c % d1);
        rho[(i * d2 + j, k * d2 + l)]
    });
    Ok(BipartiteState::new(swapped, d2, d1, tol)?)
}

pub fn run(command: Command) -> CliResult<u8> {
    match command {
        Command::Analyze {
            file,
            dims,
            subgraph,
            tol,
            max_column_subsets,
            exhaustive_limit,
            max_subsets,
            greedy_restarts,
        } => {
            let tol = tolerances(tol)?;
            let budget = SearchBudget {
                exhaustive_limit,
                max_subsets,
                greedy_restarts,
            };
            analyze(&file, dims, subgraph, &tol, max_column_subsets, &budget)
        }
        Command::Project {
            file,
            mode,
            dims,
            samples,
            seed,
            triple,
            normalize,
            output,
        } => {
            let tol = Tolerances::default();
            let state = load_state(&file, dims, &tol)?;
            let mut projected = match (samples, mode) {
                (None, Mode::Ldoi) => project_ldoi(&state)?,
                (None, Mode::Cldui) => project_cldui(&state)?,
                (Some(n), Mode::Ldoi) => monte_carlo_project(&state, TwirlMode::Ldoi, n, seed)?,
                (Some(n), Mode::Cldui) => monte_carlo_project(&state, TwirlMode::Cldui, n, seed)?,
            };
            if normalize {
                projected = projected.normalize();
            }
            let text = if triple {
                write_triple(&extract_abc(&projected)?)
            } else {
                write_state(&projected)
            };
            emit(output.as_deref(), &text)?;
            Ok(0)
        }
        Command::Construct(c) => construct(c),
        Command::Graph(g) => graph(g),
    }
}

fn analyze(
    file: &Path,
    dims: Option<Vec<usize>>,
    subgraph: bool,
    tol: &Tolerances,
    max_column_subsets: usize,
    budget: &SearchBudget,
) -> CliResult<u8> {
    let state = load_state(file, dims, tol)?;
    let verdict = match state.d1().cmp(&state.d2()) {
        std::cmp::Ordering::Equal => {
            let mut verdict = analyze_square(&state, tol)?;
            if subgraph && verdict.outcome == Outcome::Inconclusive {
                let t = extract_abc(&state)?;
                if let Some(hit) = find_certificate(&t.a, &t.b, &t.c, budget, tol)? {
                    verdict = hit.verdict;
                }
            }
            verdict
        }
        std::cmp::Ordering::Less => detect_rectangular(&state, tol, max_column_subsets)?,
        std::cmp::Ordering::Greater => {
            detect_rectangular(&swap_factors(&state, tol)?, tol, max_column_subsets)?
        }
    };
    let code = exit_code(&verdict);
    emit(None, &(VerdictReport::new(verdict, *tol).to_json() + "\n"))?;
    Ok(code)
}

fn exit_code(v: &Verdict) -> u8 {
    match v.outcome {
        Outcome::Entangled => 0,
        Outcome::Separable => 1,
        Outcome::Inconclusive => 2,
    }
}

fn construct(c: ConstructCommand) -> CliResult<u8> {
    match c {
        ConstructCommand::Cycle { k, output } => {
            emit(output.as_deref(), &write_cmat(&cycle_realization(k)?))?;
        }
        ConstructCommand::Realize { graph, output } => {
            let g = parse_graph(&read(&graph)?)?;
            emit(output.as_deref(), &write_cmat(&graph_realization(&g)?))?;
        }
        ConstructCommand::Family {
            graph,
            count,
            seed,
            out_dir,
            c_scale,
            lower_bound,
            normalize,
            max_attempts,
            tol,
        } => {
            let g = parse_graph(&read(&graph)?)?;
            let b = graph_realization(&g)?;
            let mut params = FamilyParams::new(g.clone(), b);
            params.count = count;
            params.seed = seed;
            params.c_scale = c_scale;
            params.a_sampling = if lower_bound {
                ASampling::LowerBound
            } else {
                ASampling::Uniform
            };
            params.normalize = normalize;
            params.max_attempts = max_attempts;
            params.tolerances = tolerances(tol)?;
            let samples = sample_family(&params)?;

            fs::create_dir_all(&out_dir).map_err(|source| CliError::Io {
                path: out_dir.clone(),
                source,
            })?;
            let record = GraphRecord::from(&g);
            let mut files = Vec::with_capacity(samples.len());
            for s in &samples {
                let stem = format!("state-{:04}", s.index);
                let triple_path = out_dir.join(format!("{stem}.triple"));
                let json_path = out_dir.join(format!("{stem}.json"));
                emit(Some(&triple_path), &write_triple(&s.triple))?;
                let mut report = VerdictReport::new(s.verdict.clone(), params.tolerances);
                report.generator = Some(GeneratorInfo {
                    graph: record.clone(),
                    seed,
                    index: s.index,
                });
                emit(Some(&json_path), &(report.to_json() + "\n"))?;
                files.push(json!({
                    "index": s.index,
                    "triple": triple_path,
                    "certificate": json_path,
                    "attempts": s.attempts,
                }));
            }
            let summary = json!({ "count": samples.len(), "states": files });
            emit(None, &(serde_json::to_string_pretty(&summary).unwrap() + "\n"))?;
        }
    }
    Ok(0)
}

fn graph(g: GraphCommand) -> CliResult<u8> {
    match g {
        GraphCommand::Check { graph } => {
            let g = parse_graph(&read(&graph)?)?;
            let report = json!({
                "n": g.vertex_count(),
                "m": g.edge_count(),
                "triangle_free": g.is_triangle_free(),
                "acyclic": g.is_acyclic(),
                "connected": g.is_connected(),
            });
            emit(None, &(serde_json::to_string_pretty(&report).unwrap() + "\n"))?;
        }
        GraphCommand::Enumerate { d, output } => {
            let e = enumerate_tf_cyclic_connected(d)?;
            if let Some(path) = output.as_deref() {
                let text: String = e.representatives.iter().map(write_graph).collect();
                emit(Some(path), &text)?;
            }
            let report = json!({ "d": e.d, "count": e.count });
            emit(None, &(serde_json::to_string_pretty(&report).unwrap() + "\n"))?;
        }
        GraphCommand::Reduce { graph, output } => {
            let g = parse_graph(&read(&graph)?)?;
            emit(output.as_deref(), &write_graph(&independent_set_reduction(&g)))?;
        }
    }
    Ok(0)
}
