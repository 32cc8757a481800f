use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context};
use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use nakamura_core::aggregation::{verify_core_theorem, CheckMode};
use nakamura_core::constructions::appendix_a::{appendix_a_tables, IndexOracle, OracleSpec};
use nakamura_core::constructions::audit::audit_appendix_a;
use nakamura_core::constructions::{self, GameSpec, Pairing};
use nakamura_core::effectivity::{derive_alpha_game, derive_exact_game, GameForm};
use nakamura_core::nakamura::nakamura_witness_bounded;
use nakamura_core::report::run_table_report;
use nakamura_core::{classify, nakamura_number, Game};

/// Simple games, their axioms and Nakamura numbers.
#[derive(Parser)]
#[command(name = "nakamura-lab", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Mode {
    Exhaustive,
    Sampled,
}

#[derive(Clone, Copy, ValueEnum)]
enum PairingArg {
    EvenOdd,
    Shift,
}

#[derive(Clone, Copy, ValueEnum)]
enum Notion {
    Alpha,
    Exact,
}

#[derive(Clone, Copy, ValueEnum)]
enum OracleArg {
    Alternating,
    Seeded,
}

#[derive(Subcommand)]
enum Command {
    /// Type signature of a finite game, with witnesses.
    Classify {
        #[arg(long)]
        game: PathBuf,
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
    /// Nakamura number; a bounded witness for games given by determining strings.
    Nakamura {
        #[arg(long)]
        game: PathBuf,
        #[arg(long, default_value_t = 16)]
        depth: usize,
        #[arg(long, default_value_t = 8)]
        family_limit: usize,
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
    /// Checks that every profile has a nonempty core exactly when m is below ν.
    CoreCheck {
        #[arg(long)]
        game: PathBuf,
        #[arg(long)]
        alternatives: usize,
        #[arg(long, value_enum, default_value_t = Mode::Exhaustive)]
        mode: Mode,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 1000)]
        samples: usize,
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
    /// Writes a catalog game as a JSON spec.
    Build {
        #[arg(long)]
        name: String,
        /// Block sizes, comma separated.
        #[arg(long, value_delimiter = ',')]
        sizes: Option<Vec<usize>>,
        #[arg(long)]
        n: Option<usize>,
        #[arg(long)]
        player: Option<usize>,
        #[arg(long, value_delimiter = ',')]
        members: Option<Vec<usize>>,
        #[arg(long)]
        k: Option<usize>,
        #[arg(long)]
        allow_singletons: bool,
        #[arg(long, value_enum)]
        oracle: Option<OracleArg>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Write the explicit winning family instead of the construction.
        #[arg(long)]
        expand: bool,
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
    /// Writes the product of two games as a JSON spec.
    Product {
        #[arg(long)]
        left: PathBuf,
        #[arg(long)]
        right: PathBuf,
        #[arg(long, value_enum, default_value_t = PairingArg::EvenOdd)]
        pairing: PairingArg,
        #[arg(long)]
        shift_k: Option<usize>,
        #[arg(long)]
        expand: bool,
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
    /// Derives a simple game from a game form.
    Effectivity {
        #[arg(long, conflicts_with = "veto_free")]
        form: Option<PathBuf>,
        #[arg(long)]
        veto_free: Option<usize>,
        #[arg(long, value_enum, default_value_t = Notion::Alpha)]
        notion: Notion,
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
    /// Audits the determining-string construction for one oracle.
    #[command(name = "appendixA")]
    AppendixA {
        #[arg(long, value_enum, default_value_t = OracleArg::Alternating)]
        oracle: OracleArg,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 12)]
        max_len: usize,
        #[arg(long)]
        dump_tables: bool,
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
    /// Reproduces the table of possible Nakamura numbers.
    Table {
        #[arg(long, default_value_t = 6)]
        max_k: usize,
        #[arg(long, default_value_t = 14)]
        depth: usize,
        #[arg(short, long)]
        out: Option<PathBuf>,
        #[arg(long)]
        md: Option<PathBuf>,
    },
}

/// Input problems exit with 2, failed verifications with 1.
enum Outcome {
    Pass,
    Fail,
}

fn read_spec(path: &Path) -> anyhow::Result<GameSpec> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    GameSpec::from_json(&text).with_context(|| format!("parsing {}", path.display()))
}

fn read_game(path: &Path) -> anyhow::Result<Game> {
    Ok(read_spec(path)?.to_game()?)
}

fn emit(value: &Value, out: Option<&Path>) -> anyhow::Result<()> {
    let text = serde_json::to_string_pretty(value)?;
    match out {
        Some(p) => fs::write(p, text + "\n").with_context(|| format!("writing {}", p.display())),
        None => {
            println!("{text}");
            Ok(())
        }
    }
}

fn oracle_spec(oracle: OracleArg, seed: u64) -> OracleSpec {
    match oracle {
        OracleArg::Alternating => OracleSpec::Alternating,
        OracleArg::Seeded => OracleSpec::Seeded { seed },
    }
}

fn run(cli: Cli) -> anyhow::Result<Outcome> {
    match cli.command {
        Command::Classify { game, out } => {
            let g = read_game(&game)?;
            let g = g
                .as_finite()
                .ok_or_else(|| anyhow!("classify needs a finite game; use `nakamura` for determining-string games"))?;
            let c = classify(g)?;
            emit(
                &json!({
                    "type_index": c.signature.type_index(),
                    "pattern": c.signature.pattern(),
                    "signature": c.signature,
                    "witness": c.witness,
                }),
                out.as_deref(),
            )?;
            Ok(Outcome::Pass)
        }
        Command::Nakamura {
            game,
            depth,
            family_limit,
            out,
        } => {
            match read_game(&game)? {
                Game::Finite(g) => {
                    let r = nakamura_number(&g);
                    emit(&json!({"nu": r.value, "witness": r.witness}), out.as_deref())?;
                }
                Game::Prefix(p) => {
                    let w = nakamura_witness_bounded(&p, depth, family_limit);
                    emit(
                        &json!({
                            "nu_at_most": w.as_ref().map(|w| w.size()),
                            "depth": depth,
                            "witness": w.map(|w| w.members.iter().map(|m| m.string.to_string()).collect::<Vec<_>>()),
                        }),
                        out.as_deref(),
                    )?;
                }
            }
            Ok(Outcome::Pass)
        }
        Command::CoreCheck {
            game,
            alternatives,
            mode,
            seed,
            samples,
            out,
        } => {
            let g = read_game(&game)?
                .into_finite()
                .ok_or_else(|| anyhow!("core-check needs a finite game"))?;
            let mode = match mode {
                Mode::Exhaustive => CheckMode::Exhaustive,
                Mode::Sampled => CheckMode::Sampled { seed, count: samples },
            };
            let v = verify_core_theorem(&g, alternatives, mode)?;
            emit(&serde_json::to_value(&v)?, out.as_deref())?;
            Ok(if v.holds { Outcome::Pass } else { Outcome::Fail })
        }
        Command::Build {
            name,
            sizes,
            n,
            player,
            members,
            k,
            allow_singletons,
            oracle,
            seed,
            expand,
            out,
        } => {
            let mut params = serde_json::Map::new();
            let mut put = |key: &str, v: Value| {
                params.insert(key.to_string(), v);
            };
            if let Some(s) = sizes {
                put("sizes", json!(s));
            }
            if let Some(v) = n {
                put("n", json!(v));
            }
            if let Some(v) = player {
                put("player", json!(v));
            }
            if let Some(v) = members {
                put("members", json!(v));
            }
            if let Some(v) = k {
                put("k", json!(v));
            }
            if allow_singletons {
                put("allow_singletons", json!(true));
            }
            if let Some(o) = oracle {
                put("oracle", serde_json::to_value(oracle_spec(o, seed))?);
            }
            let params = if params.is_empty() { Value::Null } else { Value::Object(params) };
            let game = constructions::build(&name, params.clone())?;
            let spec = match (expand, &game) {
                (true, Game::Finite(g)) => GameSpec::from_finite(g),
                (true, Game::Prefix(_)) => bail!("`{name}` has no finite expansion"),
                (false, _) => {
                    let mut obj = serde_json::Map::new();
                    obj.insert("kind".into(), json!("construction"));
                    obj.insert("name".into(), json!(name));
                    if !params.is_null() {
                        obj.insert("params".into(), params);
                    }
                    serde_json::from_value(Value::Object(obj))?
                }
            };
            emit(&serde_json::to_value(&spec)?, out.as_deref())?;
            Ok(Outcome::Pass)
        }
        Command::Product {
            left,
            right,
            pairing,
            shift_k,
            expand,
            out,
        } => {
            let pairing = match (pairing, shift_k) {
                (PairingArg::EvenOdd, None) => Pairing::EvenOdd,
                (PairingArg::EvenOdd, Some(_)) => bail!("--shift-k only applies to the shift pairing"),
                (PairingArg::Shift, Some(k)) => Pairing::Shift { k },
                (PairingArg::Shift, None) => bail!("the shift pairing needs --shift-k"),
            };
            let spec = GameSpec::Product {
                left: Box::new(read_spec(&left)?),
                right: Box::new(read_spec(&right)?),
                pairing,
            };
            let game = spec.to_game()?;
            let spec = match (expand, &game) {
                (true, Game::Finite(g)) => GameSpec::from_finite(g),
                (true, Game::Prefix(_)) => bail!("the product has no finite expansion"),
                (false, _) => spec,
            };
            emit(&serde_json::to_value(&spec)?, out.as_deref())?;
            Ok(Outcome::Pass)
        }
        Command::Effectivity {
            form,
            veto_free,
            notion,
            out,
        } => {
            let gf = match (form, veto_free) {
                (Some(p), None) => {
                    let text = fs::read_to_string(&p).with_context(|| format!("reading {}", p.display()))?;
                    GameForm::from_json(&text)?
                }
                (None, Some(k)) => GameForm::veto_free(k)?,
                _ => bail!("give exactly one of --form and --veto-free"),
            };
            let g = match notion {
                Notion::Alpha => derive_alpha_game(&gf)?,
                Notion::Exact => derive_exact_game(&gf)?,
            };
            emit(&serde_json::to_value(GameSpec::from_finite(&g))?, out.as_deref())?;
            Ok(Outcome::Pass)
        }
        Command::AppendixA {
            oracle,
            seed,
            max_len,
            dump_tables,
            out,
        } => {
            let o = IndexOracle::from_spec(&oracle_spec(oracle, seed))?;
            let report = audit_appendix_a(&o, max_len)?;
            let mut value = serde_json::to_value(&report)?;
            if dump_tables {
                value["tables"] = serde_json::to_value(appendix_a_tables(&o, max_len)?)?;
            }
            emit(&value, out.as_deref())?;
            Ok(if report.passed() { Outcome::Pass } else { Outcome::Fail })
        }
        Command::Table { max_k, depth, out, md } => {
            let report = run_table_report(max_k, depth)?;
            if let Some(p) = &md {
                fs::write(p, report.to_markdown()).with_context(|| format!("writing {}", p.display()))?;
            }
            if out.is_some() || md.is_none() {
                emit(&serde_json::to_value(&report)?, out.as_deref())?;
            }
            Ok(if report.passed() { Outcome::Pass } else { Outcome::Fail })
        }
    }
}

fn main() -> ExitCode {
    env_logger::init();
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(2) } else { ExitCode::SUCCESS };
        }
    };
    match run(cli) {
        Ok(Outcome::Pass) => ExitCode::SUCCESS,
        Ok(Outcome::Fail) => {
            eprintln!("verification failed");
            ExitCode::from(1)
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
