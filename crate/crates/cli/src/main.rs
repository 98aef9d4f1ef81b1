use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use discrete_homotopy::audits::{
    inclusion, joinability_audit, projection_surjectivity_audit, prop2_crosscheck, uniformly_open_map,
    uniformly_open_subset, AuditReport, Status,
};
use discrete_homotopy::chains::{Budget, Chain, HomotopyContext, Verdict};
use discrete_homotopy::derived::{class_id, enumerate_classes, ClassOptions, DerivedOptions, DerivedSpace};
use discrete_homotopy::io::{model_to_json, parse_json, parse_model, replay_document, to_stable_string, Artifact};
use discrete_homotopy::paperlab::{run_claims, ClaimOptions, ClaimStatus, Fixture};
use discrete_homotopy::rips::build_skeleton2;
use discrete_homotopy::UniformModel;

/// Exit status for malformed input or usage errors.
const EXIT_ERROR: u8 = 3;

#[derive(Parser)]
#[command(name = "dhomotopy", version, about = "Rips complexes, chain homotopy and derived structures on finite models")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum FixtureArg {
    /// Hexagon with a standing square, metric ladder {1, 1/n}.
    Hexagon,
    /// Same points, metric scale 1 over segment adjacency.
    HexagonGraph,
}

impl From<FixtureArg> for Fixture {
    fn from(f: FixtureArg) -> Self {
        match f {
            FixtureArg::Hexagon => Fixture::Metric,
            FixtureArg::HexagonGraph => Fixture::Graph,
        }
    }
}

#[derive(Args)]
struct Input {
    /// Model file (JSON).
    #[arg(long, conflicts_with = "fixture", required_unless_present = "fixture")]
    model: Option<PathBuf>,
    /// Builtin fixture instead of a model file.
    #[arg(long, value_enum)]
    fixture: Option<FixtureArg>,
    /// Samples per unit length for fixtures.
    #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u32).range(1..))]
    n: u32,
}

impl Input {
    fn load(&self) -> Result<UniformModel> {
        match (&self.model, self.fixture) {
            (Some(path), _) => {
                let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
                parse_model(&text).with_context(|| format!("in {}", path.display()))
            }
            (None, Some(f)) => Ok(Fixture::from(f).build(self.n)?),
            (None, None) => bail!("either --model or --fixture is required"),
        }
    }
}

#[derive(Args, Clone, Copy)]
struct BudgetArgs {
    /// Search state budget for each homotopy decision.
    #[arg(long, env = "DHOMOTOPY_BUDGET_STATES", default_value_t = 2_000_000, value_parser = clap::value_parser!(u64).range(1..))]
    budget_states: u64,
    /// How far intermediate chains may grow beyond the longer input.
    #[arg(long, default_value_t = 6, value_parser = clap::value_parser!(u64).range(1..))]
    budget_len: u64,
}

impl BudgetArgs {
    fn budget(&self) -> Budget {
        Budget { length_slack: self.budget_len as usize, max_states: self.budget_states as usize }
    }
}

#[derive(Args)]
struct ClassArgs {
    /// Base point (defaults to `a` when present, else the first point).
    #[arg(long)]
    base: Option<String>,
    /// Longest representative to enumerate (default: from the hop diameter).
    #[arg(long)]
    max_len: Option<usize>,
    #[arg(long, default_value_t = 5000)]
    max_classes: usize,
}

impl ClassArgs {
    fn options(&self, budget: Budget) -> ClassOptions {
        ClassOptions { max_len: self.max_len, max_classes: self.max_classes, budget }
    }

    fn base(&self, m: &UniformModel) -> Result<usize> {
        match &self.base {
            Some(b) => Ok(m.point_index(b)?),
            None => Ok(m.point_index("a").unwrap_or(0)),
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
    Dot,
    /// The model itself (`rips` only).
    Model,
}

#[derive(Clone, Copy, ValueEnum)]
enum AuditKind {
    /// Is `--points` a uniformly open subset?
    Subset,
    /// Is the inclusion of `--points` a uniformly open map?
    Inclusion,
    Joinability,
    Surjectivity,
    /// Joinability, endpoint-map openness and image openness compared.
    Prop2,
}

#[derive(Subcommand)]
enum Command {
    /// Rips 2-skeleton sizes, or the complex itself as JSON or DOT.
    Rips {
        #[command(flatten)]
        input: Input,
        /// Scale tag (default: every scale; DOT uses the coarsest).
        #[arg(long)]
        scale: Option<String>,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// First homology of the Rips complex.
    H1 {
        #[command(flatten)]
        input: Input,
        #[arg(long)]
        scale: Option<String>,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Decide whether two chains are homotopic relative to their endpoints.
    Decide {
        #[command(flatten)]
        input: Input,
        #[arg(long)]
        scale: String,
        /// Comma-separated point names; give exactly two.
        #[arg(long = "chain", num_args = 1, required = true)]
        chains: Vec<String>,
        #[command(flatten)]
        budget: BudgetArgs,
        /// Write the witness or certificate here.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Enumerate chain classes from a base point.
    Classes {
        #[command(flatten)]
        input: Input,
        #[arg(long)]
        scale: String,
        #[command(flatten)]
        classes: ClassArgs,
        #[command(flatten)]
        budget: BudgetArgs,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Build the derived relations and write them as model files.
    Derive {
        #[command(flatten)]
        input: Input,
        #[arg(long)]
        scale: String,
        /// Scale of the approximants (default: the finest).
        #[arg(long)]
        fine: Option<String>,
        /// Endpoint closeness scale (default: `--scale`).
        #[arg(long)]
        close: Option<String>,
        #[command(flatten)]
        classes: ClassArgs,
        #[command(flatten)]
        budget: BudgetArgs,
        /// Directory for classes.json, a.json and ea.json.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Uniform openness, joinability and surjectivity audits.
    Audit {
        #[arg(value_enum)]
        kind: AuditKind,
        #[command(flatten)]
        input: Input,
        /// Comma-separated subset for `subset` and `inclusion`.
        #[arg(long)]
        points: Option<String>,
        /// Coarse scale (default: the coarsest).
        #[arg(long)]
        scale: Option<String>,
        #[arg(long)]
        fine: Option<String>,
        #[command(flatten)]
        classes: ClassArgs,
        #[command(flatten)]
        budget: BudgetArgs,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run the hexagon claim suite.
    Paperlab {
        #[arg(long, default_value_t = 4, value_parser = clap::value_parser!(u32).range(1..))]
        n: u32,
        /// Use segment adjacency as the fine scale.
        #[arg(long)]
        graph: bool,
        #[command(flatten)]
        classes: ClassArgs,
        #[command(flatten)]
        budget: BudgetArgs,
        /// Directory for claim files, a summary and DOT exports.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Re-verify witnesses and certificates from a file.
    Replay {
        file: Option<PathBuf>,
        #[arg(long, conflicts_with = "file")]
        witness: Option<PathBuf>,
        #[arg(long, conflicts_with_all = ["file", "witness"])]
        certificate: Option<PathBuf>,
    },
}

/// Writes through a temporary file in the target directory, then renames.
fn write_atomic(path: &Path, contents: &str) -> Result<()> {
    let dir = path.parent().filter(|p| !p.as_os_str().is_empty()).unwrap_or(Path::new("."));
    std::fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
    let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
    tmp.write_all(contents.as_bytes())?;
    tmp.persist(path).with_context(|| format!("writing {}", path.display()))?;
    Ok(())
}

fn emit(out: &Option<PathBuf>, contents: &str) -> Result<()> {
    match out {
        Some(p) => write_atomic(p, contents),
        None => {
            print!("{contents}");
            Ok(())
        }
    }
}

fn scale_or(m: &UniformModel, tag: &Option<String>, default: usize) -> Result<usize> {
    match tag {
        Some(t) => Ok(m.scale_index(t)?),
        None => Ok(default),
    }
}

fn parse_chain(m: &UniformModel, scale: usize, text: &str) -> Result<Chain> {
    let names: Vec<&str> = text.split(',').map(str::trim).filter(|s| !s.is_empty()).collect();
    Ok(Chain::parse(m, scale, &names)?)
}

fn status_code(s: Status) -> u8 {
    match s {
        Status::Pass => 0,
        Status::Fail => 1,
        Status::Unknown => 2,
    }
}

fn print_report(r: &AuditReport) {
    println!("{:<24} {}", r.name, r.status);
    for l in &r.lines {
        println!("    {l}");
    }
}

fn run(cli: Cli) -> Result<u8> {
    match cli.command {
        Command::Rips { input, scale, format, out } => {
            let m = input.load()?;
            if format == Format::Model {
                emit(&out, &to_stable_string(&model_to_json(&m)))?;
                return Ok(0);
            }
            let scales: Vec<usize> = match &scale {
                Some(t) => vec![m.scale_index(t)?],
                None if format == Format::Dot => vec![0],
                None => (0..m.ladder().len()).collect(),
            };
            let mut text = String::new();
            let mut json_scales = Vec::new();
            for &s in &scales {
                let k = build_skeleton2(&m, s)?;
                let (v, e, t) = k.counts();
                match format {
                    Format::Text => text.push_str(&format!("{}: V={v} E={e} T={t}\n", m.scale_tag(s))),
                    Format::Json => json_scales.push(json!({"tag": m.scale_tag(s), "complex": k.to_json(&m)})),
                    Format::Dot => text.push_str(&k.to_dot(&m, &format!("R(X, {})", m.scale_tag(s)))),
                    Format::Model => unreachable!("handled above"),
                }
            }
            if format == Format::Json {
                text = to_stable_string(&json!({"scales": json_scales}));
            }
            emit(&out, &text)?;
            Ok(0)
        }
        Command::H1 { input, scale, format } => {
            let m = input.load()?;
            let scales: Vec<usize> = match &scale {
                Some(t) => vec![m.scale_index(t)?],
                None => (0..m.ladder().len()).collect(),
            };
            let mut rows = Vec::new();
            for s in scales {
                let ctx = HomotopyContext::new(&m, s)?;
                let h = ctx.solver().h1();
                let torsion: Vec<String> = h.torsion.iter().map(|t| t.to_string()).collect();
                match format {
                    Format::Json => rows.push(json!({"tag": m.scale_tag(s), "betti1": h.betti1, "torsion": torsion})),
                    _ => println!("{}: betti1 = {}, torsion = [{}]", m.scale_tag(s), h.betti1, torsion.join(", ")),
                }
            }
            if format == Format::Json {
                print!("{}", to_stable_string(&json!({"h1": rows})));
            }
            Ok(0)
        }
        Command::Decide { input, scale, chains, budget, out } => {
            let m = input.load()?;
            let s = m.scale_index(&scale)?;
            if chains.len() != 2 {
                bail!("decide needs exactly two --chain arguments");
            }
            let c = parse_chain(&m, s, &chains[0])?;
            let d = parse_chain(&m, s, &chains[1])?;
            let ctx = HomotopyContext::new(&m, s)?;
            let verdict = ctx.decide(&c, &d, &budget.budget())?;
            println!("{}", verdict.label());
            let model = std::sync::Arc::new(m);
            let (artifact, code) = match verdict {
                Verdict::Equivalent(witness) => {
                    println!("witness: {} moves", witness.len());
                    (Some(Artifact::Witness { model: model.clone(), scale: s, from: c, to: d, witness }), 0)
                }
                Verdict::Inequivalent(certificate) => {
                    println!("obstruction pairing: {}", certificate.obstruction.pairing);
                    (Some(Artifact::Certificate { model: model.clone(), scale: s, certificate }), 1)
                }
                Verdict::Unknown(stats) => {
                    println!("budget exhausted: {stats:?}");
                    (None, 2)
                }
            };
            if let (Some(path), Some(a)) = (&out, artifact) {
                write_atomic(path, &to_stable_string(&a.to_json()))?;
            }
            Ok(code)
        }
        Command::Classes { input, scale, classes, budget, format, out } => {
            let m = input.load()?;
            let s = m.scale_index(&scale)?;
            let ctx = HomotopyContext::new(&m, s)?;
            let table = enumerate_classes(&ctx, classes.base(&m)?, &classes.options(budget.budget()))?;
            let text = match format {
                Format::Json => {
                    let rows: Vec<Value> = (0..table.len())
                        .map(|k| {
                            json!({
                                "id": class_id(k),
                                "endpoint": m.points()[table.endpoint(k)].id,
                                "rep": table.rep(k).iter().map(|&p| m.points()[p].id.clone()).collect::<Vec<_>>(),
                            })
                        })
                        .collect();
                    to_stable_string(&json!({"complete": table.is_complete(), "max_len": table.max_len(), "classes": rows}))
                }
                _ => {
                    let mut t = format!("{} classes (length bound {}, complete: {})\n", table.len(), table.max_len(), table.is_complete());
                    for k in 0..table.len() {
                        t.push_str(&format!("{}  {:<8} [{}]\n", class_id(k), m.name(table.endpoint(k)), table.rep_names(&m, k)));
                    }
                    t
                }
            };
            emit(&out, &text)?;
            Ok(if table.is_complete() { 0 } else { 2 })
        }
        Command::Derive { input, scale, fine, close, classes, budget, out } => {
            let m = input.load()?;
            let s = m.scale_index(&scale)?;
            let f = scale_or(&m, &fine, m.bottom())?;
            let close = close.as_ref().map(|t| m.scale_index(t)).transpose()?;
            let ctx = HomotopyContext::new(&m, s)?;
            let opts = DerivedOptions { classes: classes.options(budget.budget()), close };
            let space = DerivedSpace::build(&ctx, f, classes.base(&m)?, &opts)?;
            println!("classes: {} (complete: {})", space.table.len(), space.table.is_complete());
            println!("approximants: {}, realized classes: {}", space.approximants.len(), space.realized.classes.len());
            for r in [&space.fhat, &space.star, &space.d, &space.ea] {
                println!("{:?}: {} pairs, {} undecided", r.kind, r.pairs.len(), r.unknown.len());
            }
            let identity = space.pullback() == space.star.pairs;
            println!("pullback of D equals E*: {identity}");
            if let Some(dir) = &out {
                write_atomic(&dir.join("classes.json"), &to_stable_string(&model_to_json(&space.class_model(&m)?)))?;
                let a = space.a_space(&m, &classes.options(budget.budget()))?;
                write_atomic(&dir.join("a.json"), &to_stable_string(&model_to_json(a.model())))?;
                write_atomic(&dir.join("ea.json"), &to_stable_string(&model_to_json(&space.ea_model(&m)?)))?;
            }
            let undecided = !space.table.is_complete()
                || !space.realized.complete
                || [&space.fhat, &space.star].iter().any(|r| !r.unknown.is_empty());
            Ok(if !identity {
                1
            } else if undecided {
                2
            } else {
                0
            })
        }
        Command::Audit { kind, input, points, scale, fine, classes, budget, out } => {
            let m = input.load()?;
            let s = scale_or(&m, &scale, 0)?;
            let subset = || -> Result<Vec<usize>> {
                let p = points.as_deref().context("--points is required for this audit")?;
                p.split(',').map(|x| Ok(m.point_index(x.trim())?)).collect()
            };
            let (doc, code) = match kind {
                AuditKind::Subset => {
                    let r = uniformly_open_subset(&m, &subset()?)?.report(&m);
                    print_report(&r);
                    (r.to_json(), status_code(r.status))
                }
                AuditKind::Inclusion => {
                    let (dom, f) = inclusion(&m, &subset()?)?;
                    let r = uniformly_open_map(&f, &dom, &m)?.report(&dom, &m);
                    print_report(&r);
                    (r.to_json(), status_code(r.status))
                }
                AuditKind::Joinability => {
                    let r = joinability_audit(&m, s, &budget.budget())?.report(&m);
                    print_report(&r);
                    (r.to_json(), status_code(r.status))
                }
                AuditKind::Surjectivity => {
                    let f = scale_or(&m, &fine, m.bottom())?;
                    let ctx = HomotopyContext::new(&m, s)?;
                    let opts = DerivedOptions { classes: classes.options(budget.budget()), close: None };
                    let space = DerivedSpace::build(&ctx, f, classes.base(&m)?, &opts)?;
                    let r = projection_surjectivity_audit(&space).report(&m, &space.table);
                    print_report(&r);
                    (r.to_json(), status_code(r.status))
                }
                AuditKind::Prop2 => {
                    let r = prop2_crosscheck(&m, s, classes.base(&m)?, &classes.options(budget.budget()))?;
                    if let Some(p) = &r.precondition {
                        println!("precondition failed: {p}");
                    }
                    for a in r.audits() {
                        print_report(a);
                    }
                    println!("consistent: {}", r.consistent());
                    let code = if !r.consistent() {
                        1
                    } else if r.audits().iter().any(|a| a.status == Status::Unknown) {
                        2
                    } else {
                        0
                    };
                    (r.to_json(), code)
                }
            };
            if let Some(p) = &out {
                write_atomic(p, &to_stable_string(&doc))?;
            }
            Ok(code)
        }
        Command::Paperlab { n, graph, classes, budget, out } => {
            let fixture = if graph { Fixture::Graph } else { Fixture::Metric };
            let opts = ClaimOptions { budget: budget.budget(), classes: classes.options(budget.budget()) };
            let suite = run_claims(fixture, n, &opts)?;
            let table = suite.summary_table();
            print!("{table}");
            println!("shared setup: {:.3}s", suite.setup.as_secs_f64());
            if let Some(dir) = &out {
                for r in &suite.results {
                    write_atomic(&dir.join(format!("{}.json", r.id)), &to_stable_string(&r.to_json()))?;
                }
                write_atomic(&dir.join("claims.json"), &to_stable_string(&suite.to_json()))?;
                write_atomic(&dir.join("summary.txt"), &table)?;
                let coarse = build_skeleton2(&suite.model, 0)?;
                write_atomic(&dir.join("rips_X_1.dot"), &coarse.to_dot(&suite.model, "R(X, 1)"))?;
                if let Some(a) = &suite.a_model {
                    write_atomic(&dir.join("rips_A_D.dot"), &build_skeleton2(a, 0)?.to_dot(a, "R(A, D)"))?;
                }
            }
            let statuses: Vec<ClaimStatus> = suite.results.iter().map(|r| r.status).collect();
            Ok(if statuses.contains(&ClaimStatus::Refuted) {
                1
            } else if statuses.contains(&ClaimStatus::Unknown) {
                2
            } else {
                0
            })
        }
        Command::Replay { file, witness, certificate } => {
            let path = file.or(witness).or(certificate).context("give a file to replay")?;
            let text = std::fs::read_to_string(&path).with_context(|| format!("reading {}", path.display()))?;
            let doc = parse_json(&text).with_context(|| format!("in {}", path.display()))?;
            match replay_document(&doc) {
                Ok(count) => {
                    println!("verified {count} artifact(s)");
                    Ok(0)
                }
                Err(e) => {
                    println!("replay failed: {e}");
                    Ok(1)
                }
            }
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_ERROR } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(EXIT_ERROR)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn exec(args: &[&str]) -> Result<u8> {
        let cli = Cli::try_parse_from(std::iter::once("dhomotopy").chain(args.iter().copied()))?;
        run(cli)
    }

    fn path(dir: &tempfile::TempDir, name: &str) -> String {
        dir.path().join(name).to_string_lossy().into_owned()
    }

    #[test]
    fn homology_and_decisions() {
        assert_eq!(exec(&["h1", "--fixture", "hexagon", "--n", "1", "--scale", "1"]).unwrap(), 0);
        let dir = tempfile::tempdir().unwrap();
        let cert = path(&dir, "c.json");
        let args = ["decide", "--fixture", "hexagon", "--n", "1", "--scale", "1", "--chain", "a,g,h,o", "--chain", "a,o"];
        assert_eq!(exec(&[&args[..], &["--out", &cert]].concat()).unwrap(), 1);
        assert_eq!(exec(&["replay", "--certificate", &cert]).unwrap(), 0);
        let w = path(&dir, "w.json");
        let args = ["decide", "--fixture", "hexagon", "--scale", "1", "--chain", "a,b,c,d,e,f,a", "--chain", "a", "--out", &w];
        assert_eq!(exec(&args).unwrap(), 0);
        assert_eq!(exec(&["replay", "--witness", &w]).unwrap(), 0);

        let mut doc = parse_json(&std::fs::read_to_string(&w).unwrap()).unwrap();
        doc["moves"].as_array_mut().unwrap().truncate(1);
        std::fs::write(&w, to_stable_string(&doc)).unwrap();
        assert_eq!(exec(&["replay", &w]).unwrap(), 1);
    }

    #[test]
    fn tight_budget_yields_unknown() {
        let args = ["decide", "--fixture", "hexagon", "--n", "2", "--scale", "1", "--chain", "a,g,h,o", "--chain", "a,o"];
        assert_eq!(exec(&[&args[..], &["--budget-states", "1"]].concat()).unwrap(), 2);
        assert_eq!(exec(&args).unwrap(), 0);
    }

    #[test]
    fn usage_and_parse_errors() {
        assert!(exec(&["h1", "--fixture", "hexagon", "--scale", "1/7"]).unwrap_err().to_string().contains("unknown scale"));
        assert!(exec(&["decide", "--fixture", "hexagon", "--scale", "1", "--chain", "a,o"]).is_err());
        assert!(exec(&["h1", "--fixture", "hexagon", "--n", "0"]).is_err());
        assert!(exec(&["decide", "--fixture", "hexagon", "--scale", "1", "--chain", "a,d", "--chain", "a,d"]).is_err());
        let dir = tempfile::tempdir().unwrap();
        let bad = path(&dir, "bad.json");
        std::fs::write(&bad, "{\n  \"radicand\": 3,\n  \"points\": [\n").unwrap();
        let e = exec(&["h1", "--model", &bad]).unwrap_err();
        assert!(format!("{e:#}").contains("line"), "{e:#}");
    }

    #[test]
    fn model_export_round_trips_byte_for_byte() {
        let dir = tempfile::tempdir().unwrap();
        let (a, b) = (path(&dir, "a.json"), path(&dir, "b.json"));
        assert_eq!(exec(&["rips", "--fixture", "hexagon-graph", "--format", "model", "--out", &a]).unwrap(), 0);
        assert_eq!(exec(&["rips", "--model", &a, "--format", "model", "--out", &b]).unwrap(), 0);
        assert_eq!(std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
        assert_eq!(exec(&["classes", "--model", &a, "--scale", "1", "--format", "json", "--out", &b]).unwrap(), 0);
        let first = std::fs::read(&b).unwrap();
        exec(&["classes", "--model", &a, "--scale", "1", "--format", "json", "--out", &b]).unwrap();
        assert_eq!(std::fs::read(&b).unwrap(), first);
    }

    #[test]
    fn derive_and_audits() {
        let dir = tempfile::tempdir().unwrap();
        let out = path(&dir, "derived");
        assert_eq!(exec(&["derive", "--fixture", "hexagon-graph", "--scale", "1", "--out", &out]).unwrap(), 0);
        let a = path(&dir, "derived/a.json");
        assert_eq!(exec(&["h1", "--model", &a]).unwrap(), 0);
        assert_eq!(exec(&["audit", "subset", "--fixture", "hexagon", "--n", "2", "--points", "o"]).unwrap(), 1);
        assert_eq!(exec(&["audit", "inclusion", "--fixture", "hexagon", "--n", "2", "--points", "o"]).unwrap(), 1);
        assert_eq!(exec(&["audit", "joinability", "--fixture", "hexagon-graph"]).unwrap(), 0);
        assert_eq!(exec(&["audit", "surjectivity", "--fixture", "hexagon-graph"]).unwrap(), 1);
        let report = path(&dir, "prop2.json");
        assert_eq!(exec(&["audit", "prop2", "--fixture", "hexagon-graph", "--out", &report]).unwrap(), 0);
        let doc = parse_json(&std::fs::read_to_string(&report).unwrap()).unwrap();
        assert_eq!(doc["consistent"], Value::Bool(true));
        assert!(exec(&["audit", "subset", "--fixture", "hexagon"]).is_err());
    }

    #[test]
    fn paperlab_writes_replayable_claims() {
        let dir = tempfile::tempdir().unwrap();
        let out = path(&dir, "lab");
        assert_eq!(exec(&["paperlab", "--graph", "--n", "1", "--out", &out]).unwrap(), 0);
        for id in 1..=7 {
            assert_eq!(exec(&["replay", &path(&dir, &format!("lab/C{id}.json"))]).unwrap(), 0);
        }
        for f in ["claims.json", "summary.txt", "rips_X_1.dot", "rips_A_D.dot"] {
            assert!(dir.path().join("lab").join(f).exists(), "{f}");
        }
        // A single-scale ladder leaves C3 to C7 undecided.
        assert_eq!(exec(&["paperlab", "--n", "1"]).unwrap(), 2);
    }
}
