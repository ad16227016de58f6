use std::ffi::OsString;
use std::fmt::Write as _;
use std::io::Write;
use std::num::NonZeroUsize;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};

use super::files::{pgrec_from_ratings, read_classes, read_session, write_het};
use super::layout::{read_layout, write_layout};
use super::{parse_graph_file, read_text, AppError, FileKind, GraphModel};
use crate::ars::{ars_recommend, ArsQuery};
use crate::graph::{memory_profile, Digraph, RepresentationKind};
use crate::hetnet::{
    match_metapath, recommend_via_metapath, EdgeType, HetError, MetaPathPattern, RatingScale,
};
use crate::pagerank::{
    rank_positions, solve_linear_with, DanglingPolicy, PageRankConfig, PageRankError,
    PowerIteration, Variant,
};
use crate::session::SessionError;

#[derive(Debug, Parser)]
#[command(name = "grafrec", version, about = "Graph-based recommendation engine")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Check a session file against the bipartite and class rules.
    Validate {
        #[arg(long)]
        graph: PathBuf,
        /// Class file replacing the classes declared in the session file.
        #[arg(long)]
        classes: Option<PathBuf>,
    },
    /// Rank objects related to one object of a session graph.
    Ars {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        object: String,
        /// Only kernels of this class take part.
        #[arg(long = "class")]
        class: Option<String>,
        #[arg(long)]
        top: Option<NonZeroUsize>,
    },
    /// Rank the nodes of a link graph.
    Pagerank {
        #[arg(long)]
        edges: PathBuf,
        #[arg(long, value_parser = |s: &str| s.parse::<Variant>())]
        variant: Variant,
        #[arg(long)]
        d: Option<f64>,
        #[arg(long)]
        epsilon: Option<f64>,
        #[arg(long)]
        max_iter: Option<usize>,
        /// Run exactly this many update steps.
        #[arg(long)]
        steps: Option<usize>,
        #[arg(long, value_enum, default_value_t = Method::Iterative)]
        method: Method,
        #[arg(long, value_parser = |s: &str| s.parse::<DanglingPolicy>())]
        dangling: Option<DanglingPolicy>,
    },
    /// Preference-graph tools.
    Pgrec {
        #[command(subcommand)]
        action: PgrecAction,
    },
    /// Count typed walks from a node, or recommend objects along them.
    Metapath {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        pattern: String,
        #[arg(long)]
        start: String,
        #[arg(long)]
        recommend: bool,
        #[arg(long, requires = "recommend")]
        top: Option<NonZeroUsize>,
    },
    /// Re-encode a graph in another layout.
    Convert {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long, value_parser = |s: &str| s.parse::<RepresentationKind>())]
        from: RepresentationKind,
        #[arg(long, value_parser = |s: &str| s.parse::<RepresentationKind>())]
        to: RepresentationKind,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Print the stored-cell count of a layout.
    Profile {
        #[arg(long, value_parser = |s: &str| s.parse::<RepresentationKind>())]
        kind: RepresentationKind,
        #[arg(long)]
        n: u64,
        #[arg(long)]
        e: u64,
    },
}

#[derive(Debug, Subcommand)]
enum PgrecAction {
    /// Build the preference graph of a ratings file.
    Build {
        #[arg(long)]
        ratings: PathBuf,
        /// Rating scale as MIN:MAX.
        #[arg(long, allow_hyphen_values = true, value_parser = parse_scale)]
        scale: RatingScale,
        #[arg(long)]
        out: PathBuf,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Method {
    Iterative,
    Linear,
}

fn parse_scale(s: &str) -> Result<RatingScale, String> {
    let (lo, hi) = s.split_once(':').ok_or("expected MIN:MAX")?;
    let lo: i64 = lo
        .trim()
        .parse()
        .map_err(|_| format!("invalid minimum `{lo}`"))?;
    let hi: i64 = hi
        .trim()
        .parse()
        .map_err(|_| format!("invalid maximum `{hi}`"))?;
    RatingScale::new(lo, hi).map_err(|e| e.to_string())
}

/// Runs one command line (`argv[0]` is the program name). The report goes
/// to `out`, diagnostics to `err`; the return value is the exit code.
pub fn run_cli<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() {
                let _ = write!(err, "{e}");
                2
            } else {
                let _ = write!(out, "{e}");
                0
            };
            return code;
        }
    };
    match execute(cli.command) {
        Ok(Outcome { report, failed }) => {
            if out.write_all(report.as_bytes()).is_err() {
                return 2;
            }
            match failed {
                Some(message) => {
                    let _ = writeln!(err, "grafrec: {message}");
                    1
                }
                None => 0,
            }
        }
        Err(e) => {
            let _ = writeln!(err, "grafrec: {e}");
            e.exit_code()
        }
    }
}

struct Outcome {
    report: String,
    /// Set when the report itself describes a validation failure.
    failed: Option<String>,
}

impl From<String> for Outcome {
    fn from(report: String) -> Self {
        Outcome {
            report,
            failed: None,
        }
    }
}

fn execute(command: Command) -> Result<Outcome, AppError> {
    match command {
        Command::Validate { graph, classes } => validate(&graph, classes.as_deref()),
        Command::Ars {
            graph,
            object,
            class,
            top,
        } => ars(&graph, &object, class, top).map(Outcome::from),
        Command::Pagerank {
            edges,
            variant,
            d,
            epsilon,
            max_iter,
            steps,
            method,
            dangling,
        } => {
            let mut config = PageRankConfig::for_variant(variant);
            if let Some(d) = d {
                config = config.with_damping(d);
            }
            if let Some(e) = epsilon {
                config = config.with_epsilon(e);
            }
            if let Some(m) = max_iter {
                config = config.with_max_iter(m);
            }
            if let Some(p) = dangling {
                config = config.with_dangling(p);
            }
            pagerank(&edges, config, steps, method).map(Outcome::from)
        }
        Command::Pgrec {
            action:
                PgrecAction::Build {
                    ratings,
                    scale,
                    out,
                },
        } => pgrec_build(&ratings, scale, &out).map(Outcome::from),
        Command::Metapath {
            graph,
            pattern,
            start,
            recommend,
            top,
        } => metapath(&graph, &pattern, &start, recommend, top).map(Outcome::from),
        Command::Convert {
            input,
            from,
            to,
            out,
        } => convert(&input, from, to, out.as_deref()).map(Outcome::from),
        Command::Profile { kind, n, e } => {
            let p = memory_profile(kind, n, e);
            Ok(format!(
                "kind={} n={} e={} cells={} class={}\n",
                p.kind, p.n, p.e, p.cells, p.asymptotic_class
            )
            .into())
        }
    }
}

fn validate(path: &Path, classes: Option<&Path>) -> Result<Outcome, AppError> {
    let origin = path.display().to_string();
    let session = read_session(&read_text(path)?, &origin)?;
    let override_classes = match classes {
        Some(c) => Some(read_classes(
            &read_text(c)?,
            &c.display().to_string(),
            &session.labels,
        )?),
        None => None,
    };
    let partition = override_classes.as_ref().or(session.graph.classes());
    let violations = session.graph.validate(partition);
    if violations.is_empty() {
        let g = &session.graph;
        return Ok(format!(
            "ok kernels={} objects={} arcs={} classes={}\n",
            g.kernels().len(),
            g.objects().len(),
            g.arcs().len(),
            partition.map_or(0, |p| p.classes().len())
        )
        .into());
    }
    let mut report = String::new();
    for v in &violations {
        let _ = writeln!(report, "{}", session.describe(v));
    }
    Ok(Outcome {
        report,
        failed: Some(format!("{origin}: {} violation(s)", violations.len())),
    })
}

fn ars(
    path: &Path,
    object: &str,
    class: Option<String>,
    top: Option<NonZeroUsize>,
) -> Result<String, AppError> {
    let GraphModel::Session(s) = parse_graph_file(path, FileKind::Session)? else {
        unreachable!("session kind yields a session model")
    };
    let m = s.labels.id(object).ok_or_else(|| {
        AppError::Usage(format!(
            "--object `{object}` is not a node of {}",
            path.display()
        ))
    })?;
    let mut query = ArsQuery::new(m);
    if let Some(c) = class {
        query = query.with_class(c);
    }
    if let Some(n) = top {
        query = query.with_top_n(n);
    }
    let ranked = ars_recommend(&s.graph, &query).map_err(|e| match e {
        SessionError::UnknownObject(_) => {
            AppError::Usage(format!("--object `{object}` is not an object"))
        }
        SessionError::UnknownClass(c) => AppError::Usage(format!("--class `{c}` is not declared")),
        other => AppError::Validation {
            path: path.display().to_string(),
            message: other.to_string(),
        },
    })?;
    let mut report = String::new();
    for (i, r) in ranked.iter().enumerate() {
        let _ = writeln!(report, "{} {} {}", i + 1, s.labels.name(r.object), r.score);
    }
    Ok(report)
}

fn pagerank(
    path: &Path,
    config: PageRankConfig,
    steps: Option<usize>,
    method: Method,
) -> Result<String, AppError> {
    let GraphModel::Link(g) = parse_graph_file(path, FileKind::Link)? else {
        unreachable!("link kind yields a link graph")
    };
    let failure = |e: PageRankError| match e {
        PageRankError::InvalidConfig(m) => AppError::Usage(m),
        other => AppError::Validation {
            path: path.display().to_string(),
            message: other.to_string(),
        },
    };
    let state = match (method, steps) {
        (Method::Linear, Some(_)) => {
            return Err(AppError::Usage(
                "--steps applies only to --method iterative".into(),
            ))
        }
        (Method::Linear, None) => {
            config.validate().map_err(failure)?;
            solve_linear_with(&g, &config).map_err(failure)?
        }
        (Method::Iterative, steps) => {
            let engine = PowerIteration::new(&g, config).map_err(failure)?;
            match steps {
                Some(n) => engine.run_steps(n),
                None => engine.run(),
            }
            .map_err(failure)?
        }
    };
    let mut report = format!(
        "# variant={} method={} dangling={} d={} epsilon={} iterations={} converged={}\n",
        config.variant.name(),
        match method {
            Method::Iterative => "iterative",
            Method::Linear => "linear",
        },
        config.dangling.name(),
        config.damping,
        config.epsilon,
        state.iterations,
        state.converged
    );
    for p in rank_positions(&state) {
        let _ = writeln!(report, "{p}");
    }
    Ok(report)
}

fn pgrec_build(ratings: &Path, scale: RatingScale, out: &Path) -> Result<String, AppError> {
    let GraphModel::Ratings(r) = parse_graph_file(ratings, FileKind::Ratings(scale))? else {
        unreachable!("ratings kind yields a rating matrix")
    };
    let (pg, labels) = pgrec_from_ratings(&r, &ratings.display().to_string())?;
    std::fs::write(out, write_het(pg.graph(), &labels)).map_err(|source| AppError::Io {
        path: out.display().to_string(),
        source,
    })?;
    let g = pg.graph();
    let count = |t: EdgeType| g.edges_of_type(t).count();
    Ok(format!(
        "users={} objects={} preferences={} UO={} PO={} UP={}\n",
        r.matrix.users().len(),
        r.matrix.objects().len(),
        pg.preferences().len(),
        count(EdgeType::Rating),
        count(EdgeType::PreferenceObject),
        count(EdgeType::UserPreference)
    ))
}

fn metapath(
    path: &Path,
    pattern: &str,
    start: &str,
    recommend: bool,
    top: Option<NonZeroUsize>,
) -> Result<String, AppError> {
    let GraphModel::Het(h) = parse_graph_file(path, FileKind::Het)? else {
        unreachable!("het kind yields a heterogeneous graph")
    };
    let query_error = |e: HetError| match e {
        HetError::TypeMismatch {
            expected, found, ..
        } => AppError::Usage(format!(
            "--start `{start}` has type {found}, the pattern starts with {expected}"
        )),
        other => AppError::Usage(other.to_string()),
    };
    let pattern: MetaPathPattern = pattern.parse().map_err(query_error)?;
    let v = h.labels.id(start).ok_or_else(|| {
        AppError::Usage(format!(
            "--start `{start}` is not a node of {}",
            path.display()
        ))
    })?;
    let mut report = String::new();
    if recommend {
        let ranked = recommend_via_metapath(&h.graph, v, &pattern, top).map_err(query_error)?;
        for (i, r) in ranked.iter().enumerate() {
            let _ = writeln!(report, "{} {} {}", i + 1, h.labels.name(r.object), r.score);
        }
    } else {
        let counts = match_metapath(&h.graph, &pattern, v).map_err(query_error)?;
        for (end, count) in counts {
            let _ = writeln!(report, "{} {count}", h.labels.name(end));
        }
    }
    Ok(report)
}

fn convert(
    input: &Path,
    from: RepresentationKind,
    to: RepresentationKind,
    out: Option<&Path>,
) -> Result<String, AppError> {
    let g = read_layout(&read_text(input)?, &input.display().to_string(), from)?;
    debug_assert_eq!(g.kind(), from);
    let text = write_layout(&g.convert(to));
    match out {
        Some(p) => {
            std::fs::write(p, text).map_err(|source| AppError::Io {
                path: p.display().to_string(),
                source,
            })?;
            Ok(String::new())
        }
        None => Ok(text),
    }
}
