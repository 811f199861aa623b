use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use zn_complex::complex::{HomologyGroup, SimplicialComplex};
use zn_complex::construction::build_w;
use zn_complex::factorization::{orthogonal_pair, verify_orthogonal_pair};
use zn_complex::pipeline::{
    parse_ratio, reduce, report_bounds, run_lower, run_upper, write_upper_artifacts, Pass, PipelineError,
};
use zn_complex::presentation::{extract_presentation, Presentation};
use zn_complex::sg::{is_delta_sg, sg_reduce, Hypergraph3, PointConfig};

#[derive(Parser)]
#[command(
    name = "zncx",
    version,
    about = "Build and check small complexes with fundamental group Z^n"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Write W_n as a .scx file, with vertex labels next to it.
    BuildW {
        #[arg(long)]
        n: usize,
        #[arg(short)]
        o: PathBuf,
    },
    /// Build X_m, certify it and write it as a .scx file.
    BuildX {
        #[arg(long)]
        m: usize,
        #[arg(short)]
        o: PathBuf,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Also write W, its labels, the factorization pair and the spurs here.
        #[arg(long)]
        artifacts: Option<PathBuf>,
    },
    /// Validate a complex and print its homology up to degree 2.
    Verify {
        file: PathBuf,
        /// Require H1 = Z^R and H2 = Z^C(R,2), both torsion-free.
        #[arg(long)]
        expect_rank: Option<usize>,
    },
    /// Print integer homology in degrees 0..=K.
    Homology {
        file: PathBuf,
        #[arg(long)]
        dim: usize,
    },
    /// Write a presentation of the fundamental group as JSON.
    Extract {
        file: PathBuf,
        #[arg(long)]
        basepoint: usize,
        #[arg(short)]
        o: PathBuf,
    },
    /// Find and verify an orthogonal pair of 1-factorizations of K_size.
    Orth {
        #[arg(long)]
        size: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(short)]
        o: PathBuf,
    },
    /// Rewrite a presentation with the listed passes.
    Reduce {
        file: PathBuf,
        #[arg(long, value_delimiter = ',', default_value = "minimize")]
        passes: Vec<Pass>,
        #[arg(short)]
        o: Option<PathBuf>,
    },
    /// Delta-SG test of a point configuration, optionally followed by pruning.
    SgCheck {
        points: PathBuf,
        #[arg(long)]
        delta: String,
        /// Hyperedges on the points, `{"edges": [[i, j, k], ...]}`.
        #[arg(long, requires = "lambda")]
        edges: Option<PathBuf>,
        #[arg(long)]
        lambda: Option<String>,
    },
    /// Run the lower-bound reduction on a presentation of Z^n.
    Pipeline {
        file: PathBuf,
        #[arg(long, default_value = "24")]
        c: String,
    },
    /// Smallest k meeting the counting constraints for n.
    Bounds {
        #[arg(long)]
        n: u64,
    },
}

enum Failure {
    /// A check failed; the message is the witness.
    Check(String),
    /// Bad arguments or unreadable input.
    Input(String),
}

type Outcome = Result<(), Failure>;

fn input<E: std::fmt::Display>(e: E) -> Failure {
    Failure::Input(e.to_string())
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

fn write(path: &Path, text: &str) -> Outcome {
    fs::write(path, text).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

fn load_complex(path: &Path) -> Result<SimplicialComplex, Failure> {
    SimplicialComplex::from_scx(&read(path)?).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

fn load_presentation(path: &Path) -> Result<Presentation, Failure> {
    Presentation::from_json(&read(path)?).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

fn pipeline_failure(e: PipelineError) -> Failure {
    match e {
        PipelineError::Presentation { .. } | PipelineError::Sg { .. } | PipelineError::Degenerate(_) => {
            Failure::Check(e.to_string())
        }
        other => input(other),
    }
}

fn homology_line(h: &[HomologyGroup]) -> String {
    h.iter()
        .enumerate()
        .map(|(k, g)| format!("H{k} = {g}"))
        .collect::<Vec<_>>()
        .join(", ")
}

fn run(cmd: Command) -> Outcome {
    match cmd {
        Command::BuildW { n, o } => {
            let (w, labels) = build_w(n).map_err(input)?;
            write(&o, &w.to_scx())?;
            let mut lp = o.clone().into_os_string();
            lp.push(".labels");
            write(Path::new(&lp), &labels.to_text())?;
            println!(
                "W_{n}: f-vector {:?}, Euler characteristic {}",
                w.f_vector(),
                w.euler_characteristic()
            );
            Ok(())
        }
        Command::BuildX { m, o, seed, artifacts } => {
            let (xc, report) = run_upper(m, seed).map_err(input)?;
            write(&o, &xc.x.to_scx())?;
            if let Some(dir) = artifacts {
                write_upper_artifacts(&xc, &dir).map_err(input)?;
            }
            println!("{report}");
            if report.passed() {
                Ok(())
            } else {
                Err(Failure::Check(format!("X_{m} failed certification")))
            }
        }
        Command::Verify { file, expect_rank } => {
            let c = load_complex(&file)?;
            let h = c.homology_upto(2).map_err(input)?;
            println!(
                "f-vector {:?}, Euler characteristic {}",
                c.f_vector(),
                c.euler_characteristic()
            );
            println!("{}", homology_line(&h));
            if let Some(r) = expect_rank {
                let want = [HomologyGroup::free(r), HomologyGroup::free(r * r.saturating_sub(1) / 2)];
                for (k, g) in want.iter().enumerate() {
                    if h.get(k + 1) != Some(g) {
                        return Err(Failure::Check(format!(
                            "H{} = {}, expected {g}",
                            k + 1,
                            h.get(k + 1).map_or("-".to_string(), ToString::to_string)
                        )));
                    }
                }
                println!("H1 = Z^{r} and H2 = Z^{} as expected", r * r.saturating_sub(1) / 2);
            }
            Ok(())
        }
        Command::Homology { file, dim } => {
            let c = load_complex(&file)?;
            println!("{}", homology_line(&c.homology_upto(dim).map_err(input)?));
            Ok(())
        }
        Command::Extract { file, basepoint, o } => {
            let c = load_complex(&file)?;
            let ex = extract_presentation(&c, basepoint).map_err(input)?;
            write(&o, &ex.presentation.to_json())?;
            println!(
                "component of {basepoint}: {} vertices, {} edges, {} triangles; |S| = {}, |R| = {}",
                ex.component_size,
                ex.edge_count,
                ex.triangle_count,
                ex.presentation.generator_count(),
                ex.presentation.relation_count()
            );
            Ok(())
        }
        Command::Orth { size, seed, o } => {
            let pair = orthogonal_pair(size, seed).map_err(input)?;
            if let Some(w) = verify_orthogonal_pair(&pair).map_err(input)? {
                return Err(Failure::Check(format!("not orthogonal: {w}")));
            }
            write(&o, &pair.to_text())?;
            println!("orthogonal pair of 1-factorizations of K_{size} verified");
            Ok(())
        }
        Command::Reduce { file, passes, o } => {
            let p = load_presentation(&file)?;
            let (q, log) = reduce(&p, &passes).map_err(pipeline_failure)?;
            for line in log {
                println!("{line}");
            }
            match o {
                Some(path) => write(&path, &q.to_json()),
                None => {
                    println!("{q}");
                    Ok(())
                }
            }
        }
        Command::SgCheck {
            points,
            delta,
            edges,
            lambda,
        } => {
            let v = PointConfig::from_json(&read(&points)?).map_err(input)?;
            let delta = parse_ratio(&delta).map_err(Failure::Input)?;
            let r = is_delta_sg(&v, &delta).map_err(input)?;
            println!("{} points, threshold {}: tallies {:?}", v.len(), r.threshold, r.tallies);
            let mut ok = r.holds();
            if !ok {
                println!("points below the threshold: {:?}", r.failing);
            }
            if let (Some(e), Some(l)) = (edges, lambda) {
                let h = Hypergraph3::from_json(v.len(), &read(&e)?).map_err(input)?;
                let l = parse_ratio(&l).map_err(Failure::Input)?;
                let red = sg_reduce(&v, &h, &l).map_err(|e| Failure::Check(e.to_string()))?;
                println!(
                    "pruned to {} vertices and {} edges; removed {} (< {}: {}); dim span {} (<= {}: {})",
                    red.pruned.vertices.len(),
                    red.pruned.edges.len(),
                    red.removed_edges,
                    red.removal_bound,
                    red.removal_bound_holds,
                    red.dim_span,
                    red.bound,
                    red.bound_holds
                );
                ok &= red.removal_bound_holds && red.bound_holds;
            }
            if ok {
                Ok(())
            } else {
                Err(Failure::Check("check failed".into()))
            }
        }
        Command::Pipeline { file, c } => {
            let p = load_presentation(&file)?;
            let c = parse_ratio(&c).map_err(Failure::Input)?;
            let report = run_lower(&p, &c).map_err(pipeline_failure)?;
            println!("{report}");
            if report.passed() {
                Ok(())
            } else {
                Err(Failure::Check("pipeline checks failed".into()))
            }
        }
        Command::Bounds { n } => {
            if n == 0 {
                return Err(Failure::Input("n must be positive".into()));
            }
            print!("{}", report_bounds(n));
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Check(msg)) => {
            println!("{msg}");
            ExitCode::from(1)
        }
        Err(Failure::Input(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
