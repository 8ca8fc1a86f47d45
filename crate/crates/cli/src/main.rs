use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use serde_json::Value;

use winlose_core::arith::Field;
use winlose_core::enumerate::enumerate_ne_bimatrix;
use winlose_core::gadgets::{build_gadget, verify_gadget, GadgetId};
use winlose_core::game::{check_structure, is_nash, Game, MixedProfile};
use winlose_core::ghr::{diagonal_embed, ghr_count_identity_check, ghr_symmetrize, pup_complete, GhrLayout, PupCompletion};
use winlose_core::io::{game_from_json, game_to_json, profile_from_json, profile_to_json, read_json_file, write_json_file, AnyProfile};
use winlose_core::reduction::{build_reduction, reduction_equivalence_check, REFUTATION_SAMPLES};
use winlose_core::report::Report;
use winlose_core::sat::{count_sat, parse_dimacs, CnfFormula};
use winlose_core::scenario::{run_scenario, ScenarioId};
use winlose_core::{Error, Scalar};

const SEED_ENV: &str = "WINLOSE_LAB_SEED";

#[derive(Parser)]
#[command(name = "winlose-lab", version, about = "Exact experiments with win-lose games")]
struct Cli {
    /// Seed for refutation sampling; WINLOSE_LAB_SEED takes precedence.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Worker threads (default: all cores).
    #[arg(long, global = true)]
    jobs: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Write a gadget game as JSON.
    Gadget {
        id: String,
        #[arg(long)]
        h: Option<usize>,
        #[arg(long)]
        k: Option<usize>,
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
    /// Machine-check a gadget's claimed properties ("all" runs the suite).
    GadgetVerify {
        id: String,
        #[arg(long)]
        h: Option<usize>,
        #[arg(long)]
        k: Option<usize>,
    },
    /// Count satisfying assignments of a DIMACS formula.
    SatCount {
        cnf: PathBuf,
        /// Write the satisfying assignments as JSON.
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
    /// Build the reduction game G(gadget, formula).
    Reduce {
        #[arg(long)]
        gadget: String,
        #[arg(long)]
        cnf: PathBuf,
        #[arg(long)]
        h: Option<usize>,
        #[arg(long)]
        k: Option<usize>,
        #[arg(long)]
        players: Option<usize>,
        #[arg(short, long)]
        out: Option<PathBuf>,
        #[arg(long)]
        layout: Option<PathBuf>,
    },
    /// Check satisfiability equivalence of the reduction game.
    ReduceCheck {
        #[arg(long)]
        gadget: String,
        #[arg(long)]
        cnf: PathBuf,
        #[arg(long)]
        h: Option<usize>,
        #[arg(long)]
        k: Option<usize>,
        #[arg(long, default_value_t = REFUTATION_SAMPLES)]
        samples: usize,
    },
    /// GHR-symmetrize a win-lose bimatrix game.
    Symmetrize {
        game: PathBuf,
        #[arg(short, long)]
        out: Option<PathBuf>,
        #[arg(long)]
        layout: Option<PathBuf>,
    },
    /// Append k diagonal strategies to a symmetrized reduction game.
    EmbedDiagonal {
        game: PathBuf,
        #[arg(long)]
        layout: Option<PathBuf>,
        #[arg(long)]
        k: usize,
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
    /// Return a pure equilibrium or an equivalent game with PUP.
    PupComplete {
        game: PathBuf,
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
    /// List all equilibria of a small bimatrix game.
    Enumerate {
        game: PathBuf,
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
    /// Exact Nash test of a profile.
    Verify {
        game: PathBuf,
        profile: PathBuf,
        #[arg(long)]
        field: Option<Field>,
    },
    /// Check |NE(GHR(g))| = |NE(g)|(|NE(g)|+2) on a small game.
    GhrCount { game: PathBuf },
    /// Run a prebuilt scenario.
    Scenario {
        name: String,
        #[arg(long)]
        cnf: PathBuf,
        #[arg(long)]
        h: Option<usize>,
        #[arg(long)]
        k: Option<usize>,
    },
}

/// Failure modes mapped to exit codes.
enum Fail {
    Usage(String),
    Property,
    Degenerate(String),
}

impl From<Error> for Fail {
    fn from(e: Error) -> Self {
        match e {
            Error::Degenerate => Fail::Degenerate(e.to_string()),
            other => Fail::Usage(other.to_string()),
        }
    }
}

type Outcome = Result<(), Fail>;

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    if let Some(j) = cli.jobs {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(j.max(1)).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    }
    let seed = match std::env::var(SEED_ENV) {
        Ok(s) => match s.trim().parse() {
            Ok(v) => v,
            Err(_) => {
                eprintln!("error: {SEED_ENV}={s:?} is not an unsigned integer");
                return ExitCode::from(2);
            }
        },
        Err(_) => cli.seed,
    };
    match run(cli.command, seed) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Fail::Property) => ExitCode::from(1),
        Err(Fail::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Fail::Degenerate(msg)) => {
            eprintln!("aborted: {msg}");
            ExitCode::from(3)
        }
    }
}

fn read_game(path: &Path) -> Result<Game, Fail> {
    Ok(game_from_json(&read_json_file(path)?)?)
}

fn read_cnf(path: &Path) -> Result<CnfFormula, Fail> {
    let text = std::fs::read_to_string(path).map_err(|e| Fail::Usage(format!("{}: {e}", path.display())))?;
    parse_dimacs(&text).map_err(|e| Fail::Usage(format!("{}: {e}", path.display())))
}

fn emit(out: Option<&Path>, v: &Value) -> Outcome {
    match out {
        Some(p) => Ok(write_json_file(p, v)?),
        None => {
            use std::io::Write;
            let text = serde_json::to_string_pretty(v).map_err(Error::from)?;
            match writeln!(std::io::stdout().lock(), "{text}") {
                Err(e) if e.kind() != std::io::ErrorKind::BrokenPipe => Err(Fail::Usage(format!("stdout: {e}"))),
                _ => Ok(()),
            }
        }
    }
}

/// A gadget id, or a path to a game JSON file.
fn load_gadget(arg: &str, h: Option<usize>, k: Option<usize>) -> Result<Game, Fail> {
    let path = Path::new(arg);
    if path.is_file() {
        return read_game(path);
    }
    Ok(build_gadget(GadgetId::parse(arg, h, k)?)?)
}

fn finish(rep: &Report) -> Outcome {
    print!("{rep}");
    if rep.skipped.is_some() {
        return Err(Fail::Degenerate("check skipped on a degenerate game".into()));
    }
    if rep.passed() {
        Ok(())
    } else {
        Err(Fail::Property)
    }
}

fn describe<S: Scalar>(g: &Game, p: &MixedProfile<S>) -> String {
    (0..g.players())
        .map(|i| {
            let parts: Vec<String> = p.support(i).iter().map(|&t| format!("{}:{}", g.labels(i)[t], p.prob(i, t))).collect();
            format!("[{}]", parts.join(" "))
        })
        .collect::<Vec<_>>()
        .join(" ")
}

fn run(cmd: Command, seed: u64) -> Outcome {
    match cmd {
        Command::Gadget { id, h, k, out } => {
            let g = build_gadget(GadgetId::parse(&id, h, k)?)?;
            emit(out.as_deref(), &game_to_json(&g))
        }
        Command::GadgetVerify { id, h, k } => {
            let ids = if id.eq_ignore_ascii_case("all") {
                let mut v: Vec<GadgetId> = [1, 2, 3, 5].into_iter().map(GadgetId::G1).collect();
                v.extend([GadgetId::G2, GadgetId::G3, GadgetId::G4]);
                v.extend((1..=4).map(GadgetId::G5));
                v
            } else {
                vec![GadgetId::parse(&id, h, k)?]
            };
            let mut ok = true;
            for id in ids {
                let rep = verify_gadget(id, seed)?;
                print!("{rep}");
                ok &= rep.passed();
            }
            if ok {
                Ok(())
            } else {
                Err(Fail::Property)
            }
        }
        Command::SatCount { cnf, out } => {
            let f = read_cnf(&cnf)?;
            let c = count_sat(&f, out.is_some())?;
            println!("#phi={} parity={}", c.count, c.parity);
            match out {
                Some(p) => Ok(write_json_file(&p, &serde_json::to_value(&c.witnesses).map_err(Error::from)?)?),
                None => Ok(()),
            }
        }
        Command::Reduce { gadget, cnf, h, k, players, out, layout } => {
            let gad = load_gadget(&gadget, h, k)?;
            if let Some(r) = players {
                if r != gad.players() {
                    return Err(Fail::Usage(format!("--players {r} but the gadget has {} players", gad.players())));
                }
            }
            let f = read_cnf(&cnf)?;
            let (g, l) = build_reduction(&gad, &f)?;
            if let Some(p) = layout {
                write_json_file(&p, &serde_json::to_value(&l).map_err(Error::from)?)?;
            }
            eprintln!("reduction game: strategies {:?}", g.sizes());
            emit(out.as_deref(), &game_to_json(&g))
        }
        Command::ReduceCheck { gadget, cnf, h, k, samples } => {
            let gad = load_gadget(&gadget, h, k)?;
            let f = read_cnf(&cnf)?;
            finish(&reduction_equivalence_check(&gad, &f, seed, samples)?)
        }
        Command::Symmetrize { game, out, layout } => {
            let g = read_game(&game)?;
            let (s, l) = ghr_symmetrize(&g)?;
            if let Some(p) = layout {
                write_json_file(&p, &serde_json::to_value(&l).map_err(Error::from)?)?;
            }
            emit(out.as_deref(), &game_to_json(&s))
        }
        Command::EmbedDiagonal { game, layout, k, out } => {
            let s = read_game(&game)?;
            let l: GhrLayout = match layout {
                Some(p) => serde_json::from_value(read_json_file(&p)?).map_err(Error::from)?,
                None => GhrLayout::from_labels(s.labels(0))?,
            };
            emit(out.as_deref(), &game_to_json(&diagonal_embed(&s, &l, k)?))
        }
        Command::PupComplete { game, out } => {
            let g = read_game(&game)?;
            match pup_complete(&g)? {
                PupCompletion::PureNe(s) => {
                    let p = MixedProfile::<winlose_core::Rational>::pure(&g.sizes(), &s);
                    println!("pure equilibrium: {}", describe(&g, &p));
                    emit(out.as_deref(), &profile_to_json(&g, &p)?)
                }
                PupCompletion::Completed(h) => {
                    let added = h.num_strategies(0) - g.num_strategies(0);
                    eprintln!("completed game: {added} strategy added per player, pup={}", check_structure(&h).pup);
                    emit(out.as_deref(), &game_to_json(&h))
                }
            }
        }
        Command::Enumerate { game, out } => {
            let g = read_game(&game)?;
            let res = enumerate_ne_bimatrix(&g)?;
            for p in &res.equilibria {
                println!("{}", describe(&g, p));
            }
            println!("{} equilibria", res.equilibria.len());
            if let Some(p) = out {
                let list = res.equilibria.iter().map(|e| profile_to_json(&g, e)).collect::<Result<Vec<_>, _>>()?;
                write_json_file(&p, &Value::Array(list))?;
            }
            if res.degenerate {
                return Err(Fail::Degenerate(format!(
                    "degenerate support pair after {} supports; the list above is partial",
                    res.supports_scanned
                )));
            }
            Ok(())
        }
        Command::Verify { game, profile, field } => {
            let g = read_game(&game)?;
            let p = profile_from_json(&g, &read_json_file(&profile)?)?;
            let p = match (field, p) {
                (Some(Field::QuadExt), p) => AnyProfile::QuadExt(p.to_quad()),
                (Some(Field::Rational), AnyProfile::QuadExt(q)) => AnyProfile::Rational(
                    q.to_rational().ok_or_else(|| Fail::Usage("profile is irrational; use --field quad_ext".into()))?,
                ),
                (_, p) => p,
            };
            let witness = match &p {
                AnyProfile::Rational(r) => is_nash(&g, r)?.witness.map(|w| (w.player, w.better, w.worse, w.better_utility.to_string(), w.worse_utility.to_string())),
                AnyProfile::QuadExt(q) => is_nash(&g, q)?.witness.map(|w| (w.player, w.better, w.worse, w.better_utility.to_string(), w.worse_utility.to_string())),
            };
            match witness {
                None => {
                    println!("NASH");
                    Ok(())
                }
                Some((i, b, w, bu, wu)) => {
                    println!(
                        "NOT NASH: player {} gains by moving from {} ({wu}) to {} ({bu})",
                        i + 1,
                        g.labels(i)[w],
                        g.labels(i)[b]
                    );
                    Err(Fail::Property)
                }
            }
        }
        Command::GhrCount { game } => finish(&ghr_count_identity_check(&read_game(&game)?)?),
        Command::Scenario { name, cnf, h, k } => {
            let id = ScenarioId::parse(&name, h, k)?;
            let f = read_cnf(&cnf)?;
            finish(&run_scenario(id, &f)?)
        }
    }
}
