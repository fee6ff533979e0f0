//! Command-line frontend: family generation, certified transformations,
//! sequence verification, exact oracle distances, enumeration, SVG rendering
//! and a transformation benchmark.

use clap::{Parser, Subcommand, ValueEnum};
use nctrees::analysis::{classify_side, find_extremal_side, side_of, Owner, SideOrientation};
use nctrees::exact;
use nctrees::families;
use nctrees::flip::{verify_sequence, FlipModel, FlipSequence};
use nctrees::oracle;
use nctrees::render::{render_frame, render_sequence, RenderSpec};
use nctrees::sampling;
use nctrees::transform::{transform, transform_border_projection};
use nctrees::tree::{symmetric_difference, Edge, Tree};
use nctrees::exec;
use serde_json::json;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

#[derive(Parser)]
#[command(name = "nctrees", version, about = "Flip sequences between non-crossing spanning trees")]
struct Cli {
    /// Worker threads for oracle searches and benches (1 = sequential).
    #[arg(long, global = true, default_value_t = 1)]
    jobs: usize,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum ModelArg {
    Flip,
    Ncflip,
    Rotation,
}

impl From<ModelArg> for FlipModel {
    fn from(m: ModelArg) -> Self {
        match m {
            ModelArg::Flip => FlipModel::Flip,
            ModelArg::Ncflip => FlipModel::NonCrossingFlip,
            ModelArg::Rotation => FlipModel::Rotation,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum TransformModelArg {
    Flip,
    Ncflip,
}

#[derive(Clone, Copy, ValueEnum)]
enum FamilyArg {
    Flip,
    Ncflip,
    Rotation,
    Hernando,
}

#[derive(Clone, Copy, ValueEnum)]
enum ArcArg {
    Low,
    High,
}

#[derive(Subcommand)]
enum Command {
    /// Emit the two trees of a lower-bound family.
    Gen {
        #[arg(long, value_enum)]
        family: FamilyArg,
        #[arg(long, default_value_t = 1)]
        k: usize,
        /// Write the first tree here instead of stdout.
        #[arg(long)]
        out1: Option<PathBuf>,
        /// Write the second tree here instead of stdout.
        #[arg(long)]
        out2: Option<PathBuf>,
    },
    /// Compute a certified flip sequence between two tree files.
    Transform {
        in1: PathBuf,
        in2: PathBuf,
        /// Write the sequence JSON here; the certification record goes to
        /// stdout either way.
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum, default_value = "flip")]
        model: TransformModelArg,
    },
    /// Verify a sequence file against a target tree file.
    Verify { sequence: PathBuf, target: PathBuf },
    /// Exact BFS distance between two tree files.
    Distance {
        in1: PathBuf,
        in2: PathBuf,
        #[arg(long, value_enum, default_value = "flip")]
        model: ModelArg,
        #[arg(long, default_value_t = oracle::DEFAULT_CAP)]
        cap: usize,
    },
    /// Enumerate all non-crossing spanning trees of an instance.
    Enumerate {
        #[arg(long)]
        n: usize,
        /// Print only the number of trees.
        #[arg(long)]
        count_only: bool,
        #[arg(long, default_value_t = oracle::DEFAULT_CAP)]
        cap: usize,
    },
    /// Maximum BFS distance over all ordered pairs.
    Diameter {
        #[arg(long)]
        n: usize,
        #[arg(long, value_enum, default_value = "flip")]
        model: ModelArg,
        #[arg(long, default_value_t = oracle::DEFAULT_DIAMETER_CAP)]
        cap: usize,
    },
    /// Side analysis of a tree pair: the extremal side by default, or a
    /// chosen chord of the first tree.
    Analyze {
        in1: PathBuf,
        in2: PathBuf,
        /// Chord of the first tree as two indices.
        #[arg(long, num_args = 2)]
        chord: Option<Vec<usize>>,
        #[arg(long, value_enum, default_value = "low")]
        arc: ArcArg,
    },
    /// Render a tree, a two-tree array, or a sequence file as SVG frames.
    Render {
        input: PathBuf,
        /// Output file; multi-frame inputs get `_NNN` suffixes.
        #[arg(long)]
        out: PathBuf,
    },
    /// Transformation wall-times and length/delta ratios on random pairs.
    Bench {
        #[arg(long, value_delimiter = ',', default_value = "20,50,100,200")]
        sizes: Vec<usize>,
        #[arg(long, default_value_t = 5)]
        pairs: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

struct Failure {
    code: u8,
    message: String,
}

fn fail(code: u8, message: impl Into<String>) -> Failure {
    Failure { code, message: message.into() }
}

fn read_tree(path: &Path) -> Result<Tree, Failure> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| fail(2, format!("cannot read {}: {e}", path.display())))?;
    Tree::from_json(&text).map_err(|e| fail(2, format!("{}: {e}", path.display())))
}

fn write_or_print(path: Option<&Path>, content: &str) -> Result<(), Failure> {
    match path {
        Some(p) => std::fs::write(p, content)
            .map_err(|e| fail(1, format!("cannot write {}: {e}", p.display()))),
        None => {
            println!("{content}");
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    exec::configure_jobs(cli.jobs);
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}

fn run(command: Command) -> Result<(), Failure> {
    match command {
        Command::Gen { family, k, out1, out2 } => {
            let (t1, t2) = match family {
                FamilyArg::Flip => families::flip_family(k),
                FamilyArg::Ncflip => families::nc_family(k),
                FamilyArg::Rotation => families::rotation_family(k),
                FamilyArg::Hernando => Ok(families::hernando_example()),
            }
            .map_err(|e| fail(1, e.to_string()))?;
            write_or_print(out1.as_deref(), &t1.to_json())?;
            write_or_print(out2.as_deref(), &t2.to_json())
        }
        Command::Transform { in1, in2, out, model } => {
            let t1 = read_tree(&in1)?;
            let t2 = read_tree(&in2)?;
            if t1.n() != t2.n() {
                return Err(fail(3, "trees live on instances of different sizes"));
            }
            let (sequence, delta) = match model {
                TransformModelArg::Flip => {
                    let cert = transform(&t1, &t2).map_err(|e| fail(4, e.to_string()))?;
                    (cert.sequence, cert.delta)
                }
                TransformModelArg::Ncflip => {
                    let seq =
                        transform_border_projection(&t1, &t2).map_err(|e| fail(4, e.to_string()))?;
                    let delta = symmetric_difference(&t1, &t2)
                        .map_err(|e| fail(3, e.to_string()))?
                        .delta();
                    (seq, delta)
                }
            };
            verify_sequence(&sequence, &t2).map_err(|e| fail(4, e.to_string()))?;
            let bound_check = match model {
                TransformModelArg::Flip => exact::fits_length_bound(sequence.len(), delta),
                TransformModelArg::Ncflip => sequence.len() <= 2 * delta,
            };
            if !bound_check {
                return Err(fail(4, "length bound violated"));
            }
            if let Some(path) = out {
                std::fs::write(&path, sequence.to_json())
                    .map_err(|e| fail(1, format!("cannot write {}: {e}", path.display())))?;
            } else {
                println!("{}", sequence.to_json());
            }
            let record =
                json!({ "delta": delta, "length": sequence.len(), "bound_check": bound_check });
            println!("{record}");
            Ok(())
        }
        Command::Verify { sequence, target } => {
            let text = std::fs::read_to_string(&sequence)
                .map_err(|e| fail(2, format!("cannot read {}: {e}", sequence.display())))?;
            let seq = FlipSequence::from_json(&text)
                .map_err(|e| fail(2, format!("{}: {e}", sequence.display())))?;
            let target = read_tree(&target)?;
            match verify_sequence(&seq, &target) {
                Ok(()) => {
                    println!("verified: {} steps under model {}", seq.len(), seq.model);
                    Ok(())
                }
                Err(e) => Err(fail(1, e.to_string())),
            }
        }
        Command::Distance { in1, in2, model, cap } => {
            let t1 = read_tree(&in1)?;
            let t2 = read_tree(&in2)?;
            let d = oracle::flip_distance(&t1, &t2, model.into(), cap)
                .map_err(|e| fail(1, e.to_string()))?;
            match d {
                Some(d) => println!("{d}"),
                None => println!("unreachable"),
            }
            Ok(())
        }
        Command::Enumerate { n, count_only, cap } => {
            if count_only {
                let keys = oracle::enumerate_keys(n, cap).map_err(|e| fail(1, e.to_string()))?;
                println!("{}", keys.len());
            } else {
                let trees = oracle::enumerate_trees(n, cap).map_err(|e| fail(1, e.to_string()))?;
                for t in trees {
                    println!("{}", t.to_json());
                }
            }
            Ok(())
        }
        Command::Diameter { n, model, cap } => {
            let d = oracle::diameter(n, model.into(), cap).map_err(|e| fail(1, e.to_string()))?;
            match d {
                Some(d) => println!("{d}"),
                None => println!("unreachable"),
            }
            Ok(())
        }
        Command::Analyze { in1, in2, chord, arc } => {
            let t1 = read_tree(&in1)?;
            let t2 = read_tree(&in2)?;
            let (owner, side) = match chord {
                Some(ends) => {
                    let chord = Edge::try_new(ends[0], ends[1])
                        .map_err(|e| fail(2, e.to_string()))?;
                    let orientation = match arc {
                        ArcArg::Low => SideOrientation::FromLow,
                        ArcArg::High => SideOrientation::FromHigh,
                    };
                    let side =
                        side_of(&t1, chord, orientation).map_err(|e| fail(1, e.to_string()))?;
                    (Owner::First, side)
                }
                None => find_extremal_side(&t1, &t2).map_err(|e| fail(1, e.to_string()))?,
            };
            let (own, other) = match owner {
                Owner::First => (&t1, &t2),
                Owner::Second => (&t2, &t1),
            };
            let report = classify_side(own, &side, other);
            let out = json!({
                "owner": owner,
                "chord": [side.chord().a(), side.chord().b()],
                "arc_start": side.arc_start(),
                "arc_len": side.arc_len(),
                "report": report,
            });
            println!("{out}");
            Ok(())
        }
        Command::Render { input, out } => {
            let text = std::fs::read_to_string(&input)
                .map_err(|e| fail(2, format!("cannot read {}: {e}", input.display())))?;
            let spec = RenderSpec::default();
            let frames: Vec<String> = if let Ok(seq) = FlipSequence::from_json(&text) {
                render_sequence(&spec, &seq).map_err(|e| fail(2, e.to_string()))?
            } else if let Ok(pair) = serde_json::from_str::<Vec<Tree>>(&text) {
                match pair.as_slice() {
                    [t] => vec![render_frame(&spec, t, None, None)],
                    [t1, t2] => vec![render_frame(&spec, t1, Some(t2), None)],
                    _ => return Err(fail(2, "tree arrays must hold one or two trees")),
                }
            } else {
                let tree = Tree::from_json(&text)
                    .map_err(|e| fail(2, format!("{}: {e}", input.display())))?;
                vec![render_frame(&spec, &tree, None, None)]
            };
            if frames.len() == 1 {
                std::fs::write(&out, &frames[0])
                    .map_err(|e| fail(1, format!("cannot write {}: {e}", out.display())))?;
            } else {
                let stem = out.with_extension("");
                for (i, frame) in frames.iter().enumerate() {
                    let path = PathBuf::from(format!("{}_{i:03}.svg", stem.display()));
                    std::fs::write(&path, frame)
                        .map_err(|e| fail(1, format!("cannot write {}: {e}", path.display())))?;
                }
            }
            Ok(())
        }
        Command::Bench { sizes, pairs, seed } => bench(&sizes, pairs, seed),
    }
}

fn bench(sizes: &[usize], pairs: usize, seed: u64) -> Result<(), Failure> {
    let mut max_ratio = 0.0f64;
    let mut all_within_bound = true;
    println!("{:>6} {:>6} {:>8} {:>8} {:>10} {:>10}", "n", "pair", "delta", "length", "ratio", "ms");
    for &n in sizes {
        let instance = nctrees::tree::ConvexInstance::new(n);
        let mut rng = sampling::rng_from_seed(seed ^ n as u64);
        for pair in 0..pairs {
            let (t1, t2) = sampling::random_pair(instance, 3 * n, &mut rng);
            let started = Instant::now();
            let cert = transform(&t1, &t2).map_err(|e| fail(1, e.to_string()))?;
            let elapsed = started.elapsed().as_secs_f64() * 1000.0;
            all_within_bound &= exact::fits_length_bound(cert.sequence.len(), cert.delta);
            // Pairs with empty symmetric difference carry no ratio.
            let ratio = if cert.delta == 0 {
                0.0
            } else {
                cert.sequence.len() as f64 / cert.delta as f64
            };
            if cert.delta > 0 {
                max_ratio = max_ratio.max(ratio);
            }
            println!(
                "{n:>6} {pair:>6} {:>8} {:>8} {ratio:>10.4} {elapsed:>10.2}",
                cert.delta,
                cert.sequence.len()
            );
        }
    }
    println!(
        "max ratio {max_ratio:.4} (bound {:.4}), exact bound check: {}",
        exact::length_bound_approx(),
        if all_within_bound { "pass" } else { "FAIL" }
    );
    if !all_within_bound {
        return Err(fail(4, "a pair exceeded the certified length bound"));
    }
    Ok(())
}
