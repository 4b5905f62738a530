use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;

use anyhow::{bail, Context};
use clap::{Parser, Subcommand, ValueEnum};
use pseudoalg::constructions::{
    annihilation_build, coeff_build, curr_build, curr_extend, plus_minus, w_build, Inclusion, Sign,
};
use pseudoalg::format::{emit, parse_file, DefinitionFile, GroupBlock, DEFAULT_CUTOFF};
use pseudoalg::hopf::{hopf_axiom_suite, AxiomReport};
use pseudoalg::linalg::Matrix;
use pseudoalg::ordinary::IsoSearch;
use pseudoalg::pseudo::render_element;
use pseudoalg::scalar::{format_scalar, parse_scalar};
use pseudoalg::tkk::{current_iso_check, tkk_build, IsoOutcome};
use pseudoalg::varieties::{ann_l, check_variety, Variety};
use pseudoalg::{HopfAlgebra, LieData, PseudoAlgebra};

#[derive(Parser)]
#[command(name = "pseudoalg", version, about = "Exact computations with finite pseudoalgebras over U(h)")]
struct Cli {
    /// Override the H-degree cutoff of every loaded file.
    #[arg(long, global = true)]
    degree_cutoff: Option<u32>,
    /// Seed for randomized searches.
    #[arg(long, global = true, default_value_t = 0x5eed)]
    seed: u64,
    /// Worker threads for parallel sweeps (default: all cores).
    #[arg(long, global = true)]
    jobs: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check the identities of a variety on every basis tuple.
    Check {
        file: PathBuf,
        #[arg(long, value_enum)]
        variety: VarietyArg,
    },
    /// Build a new pseudoalgebra and emit it as a definition file.
    Build {
        #[command(subcommand)]
        kind: BuildKind,
        /// Write to this file instead of stdout.
        #[arg(long, short, global = true)]
        output: Option<PathBuf>,
    },
    /// Coefficient algebra window of a pseudoalgebra over a one-dimensional H.
    Coeff {
        file: PathBuf,
        #[arg(long)]
        window: i64,
    },
    /// Annihilation algebra window up to a probe degree.
    Ann {
        file: PathBuf,
        #[arg(long)]
        probe: u32,
    },
    /// Left annihilator, searched up to a probe degree.
    Annihilator {
        file: PathBuf,
        #[arg(long)]
        probe: u32,
    },
    /// Hopf axioms on the basis of H (or H # k[G]) up to a degree.
    Axioms {
        file: PathBuf,
        #[arg(long)]
        degree: u32,
    },
    /// Search for a scalar basis change to the current algebra of an ordinary algebra.
    Iso { file: PathBuf, ordinary: PathBuf },
}

#[derive(Subcommand)]
enum BuildKind {
    /// Curr A of an ordinary algebra A over U(h).
    Curr {
        ordinary: PathBuf,
        #[command(flatten)]
        over: Over,
    },
    /// W(h) inside (H ⊗ H)(-).
    Walg {
        #[command(flatten)]
        over: Over,
    },
    /// Symmetrized product a*b + σ(b*a).
    Plus { file: PathBuf },
    /// Commutator product a*b - σ(b*a).
    Minus { file: PathBuf },
    /// Tits-Kantor-Koecher construction of a Jordan pseudoalgebra.
    Tkk {
        file: PathBuf,
        /// H-degree bound for the generators of S0.
        #[arg(long, default_value_t = 1)]
        bound: u32,
    },
    /// Extend along an inclusion of Lie algebras h' -> h.
    Extend {
        file: PathBuf,
        #[command(flatten)]
        over: Over,
        /// Images of the generators of h' as columns: rows separated by `;`.
        #[arg(long)]
        images: String,
    },
}

#[derive(clap::Args)]
struct Over {
    /// Lie algebra h: `abelian:N`, `aff1` or `sl2`.
    #[arg(long, conflicts_with = "hopf")]
    lie: Option<String>,
    /// Take h from the [hopf] section of this definition file.
    #[arg(long)]
    hopf: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum VarietyArg {
    Commutative,
    Jordan,
    Lie,
    Associative,
}

impl From<VarietyArg> for Variety {
    fn from(v: VarietyArg) -> Self {
        match v {
            VarietyArg::Commutative => Variety::Commutative,
            VarietyArg::Jordan => Variety::Jordan,
            VarietyArg::Lie => Variety::Lie,
            VarietyArg::Associative => Variety::Associative,
        }
    }
}

enum Outcome {
    Success,
    Failure,
}

fn load(path: &Path, cutoff: Option<u32>) -> anyhow::Result<DefinitionFile> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    parse_file(&text, cutoff).with_context(|| format!("parsing {}", path.display()))
}

fn lie_preset(name: &str) -> anyhow::Result<LieData> {
    match name {
        "aff1" => Ok(LieData::aff1()),
        "sl2" => Ok(LieData::sl2()),
        other => match other.strip_prefix("abelian:").map(str::parse::<usize>) {
            Some(Ok(n)) => Ok(LieData::abelian(n)),
            _ => bail!("unknown Lie algebra `{other}`; expected abelian:N, aff1 or sl2"),
        },
    }
}

fn resolve_hopf(over: &Over, cutoff: Option<u32>) -> anyhow::Result<Arc<HopfAlgebra>> {
    let cutoff = cutoff.unwrap_or(DEFAULT_CUTOFF);
    match (&over.lie, &over.hopf) {
        (Some(name), _) => Ok(Arc::new(HopfAlgebra::new(lie_preset(name)?, cutoff)?)),
        (None, Some(path)) => {
            let f = load(path, Some(cutoff))?;
            Ok(f.hopf)
        }
        (None, None) => bail!("give the Lie algebra with --lie or --hopf"),
    }
}

fn parse_matrix(text: &str) -> anyhow::Result<Matrix> {
    let rows = text
        .split(';')
        .map(|row| {
            row.split_whitespace()
                .map(|c| parse_scalar(c).with_context(|| format!("`{c}` is not a rational number")))
                .collect::<anyhow::Result<Vec<_>>>()
        })
        .collect::<anyhow::Result<Vec<_>>>()?;
    if rows.iter().any(|r| r.len() != rows[0].len()) {
        bail!("matrix rows have different lengths");
    }
    Ok(Matrix::from_rows(rows))
}

fn format_matrix(m: &Matrix) -> String {
    (0..m.rows)
        .map(|r| m.row(r).iter().map(format_scalar).collect::<Vec<_>>().join(" "))
        .collect::<Vec<_>>()
        .join(" ; ")
}

fn axiom_lines(report: &AxiomReport, out: &mut Vec<String>) -> Outcome {
    for r in &report.results {
        match &r.witness {
            None => out.push(format!("{}: PASS", r.name)),
            Some(w) => out.push(format!("{}: FAIL basis={w}", r.name)),
        }
    }
    if report.all_passed() {
        Outcome::Success
    } else {
        Outcome::Failure
    }
}

fn build(kind: &BuildKind, cli: &Cli) -> anyhow::Result<(PseudoAlgebra, Option<GroupBlock>)> {
    let cutoff = cli.degree_cutoff;
    Ok(match kind {
        BuildKind::Curr { ordinary, over } => {
            let a = load(ordinary, None)?.ordinary()?;
            (curr_build(resolve_hopf(over, cutoff)?, &a)?, None)
        }
        BuildKind::Walg { over } => (w_build(resolve_hopf(over, cutoff)?)?, None),
        BuildKind::Plus { file } => {
            let f = load(file, cutoff)?;
            (plus_minus(&f.algebra, Sign::Plus)?, f.group)
        }
        BuildKind::Minus { file } => {
            let f = load(file, cutoff)?;
            (plus_minus(&f.algebra, Sign::Minus)?, f.group)
        }
        BuildKind::Tkk { file, bound } => {
            let f = load(file, cutoff)?;
            (tkk_build(&f.algebra, *bound)?.algebra, f.group)
        }
        BuildKind::Extend { file, over, images } => {
            let sub = load(file, cutoff)?;
            let hopf = resolve_hopf(over, cutoff.or(Some(sub.hopf.cutoff())))?;
            let inclusion = Inclusion::new(&sub.hopf, &hopf, parse_matrix(images)?)?;
            (curr_extend(hopf, &inclusion, &sub.algebra)?, None)
        }
    })
}

fn run(cli: &Cli) -> anyhow::Result<(Outcome, Vec<String>)> {
    let mut out = Vec::new();
    let cutoff = cli.degree_cutoff;
    let outcome = match &cli.command {
        Command::Check { file, variety } => {
            let f = load(file, cutoff)?;
            let report = check_variety(&f.algebra, (*variety).into())?;
            out.push(format!("VARIETY: {}", report.variety.name()));
            for r in &report.results {
                match &r.witness {
                    None => out.push(format!("{}: PASS", r.name)),
                    Some(w) => {
                        let tuple = w.tuple.iter().map(usize::to_string).collect::<Vec<_>>().join(",");
                        let residual = w.residual.render(f.algebra.names());
                        out.push(format!("{}: FAIL tuple=({tuple}) residual={residual}", r.name));
                    }
                }
            }
            if report.passed() {
                Outcome::Success
            } else {
                Outcome::Failure
            }
        }
        Command::Build { kind, output } => {
            let (algebra, group) = build(kind, cli)?;
            let text = emit(&algebra, group.as_ref());
            match output {
                Some(path) => {
                    fs::write(path, &text).with_context(|| format!("writing {}", path.display()))?;
                    out.push(format!("WROTE: {}", path.display()));
                    out.push(format!("RANK: {}", algebra.rank()));
                }
                None => out.extend(text.lines().map(String::from)),
            }
            Outcome::Success
        }
        Command::Coeff { file, window } => {
            let f = load(file, cutoff)?;
            let w = coeff_build(&f.algebra, *window)?;
            out.push(format!("DIM: {}", w.dim()));
            out.push(format!("OVERFLOWS: {}", w.overflow_count()));
            out.extend(w.render());
            Outcome::Success
        }
        Command::Ann { file, probe } => {
            let f = load(file, cutoff)?;
            let w = annihilation_build(&f.algebra, *probe)?;
            out.push(format!("DIM: {}", w.dim()));
            out.push(format!("OVERFLOWS: {}", w.overflow_count()));
            out.extend(w.render());
            Outcome::Success
        }
        Command::Annihilator { file, probe } => {
            let f = load(file, cutoff)?;
            let basis = ann_l(&f.algebra, *probe)?;
            out.push(format!("PROBE: {probe}"));
            out.push(format!("DIM: {}", basis.len()));
            for b in &basis {
                out.push(format!("ELEMENT: {}", render_element(b, f.algebra.names())));
            }
            Outcome::Success
        }
        Command::Axioms { file, degree } => {
            let f = load(file, cutoff)?;
            match f.smash()? {
                Some(smash) => axiom_lines(&hopf_axiom_suite(&smash, *degree)?, &mut out),
                None => axiom_lines(&hopf_axiom_suite(&*f.hopf, *degree)?, &mut out),
            }
        }
        Command::Iso { file, ordinary } => {
            let f = load(file, cutoff)?;
            let g = load(ordinary, None)?.ordinary()?;
            let search = IsoSearch { seed: cli.seed, ..IsoSearch::default() };
            match current_iso_check(&f.algebra, &g, &search)? {
                IsoOutcome::Iso(m) => {
                    out.push("RESULT: ISO".into());
                    out.push(format!("MATRIX: {}", format_matrix(&m)));
                    Outcome::Success
                }
                IsoOutcome::Fail(why) => {
                    out.push("RESULT: FAIL".into());
                    out.push(format!("REASON: {why}"));
                    Outcome::Failure
                }
            }
        }
    };
    Ok((outcome, out))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(n) = cli.jobs {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    }
    match run(&cli) {
        Ok((outcome, lines)) => {
            let mut stdout = io::stdout().lock();
            for line in lines {
                if writeln!(stdout, "{line}").is_err() {
                    break;
                }
            }
            match outcome {
                Outcome::Success => ExitCode::SUCCESS,
                Outcome::Failure => ExitCode::from(1),
            }
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
