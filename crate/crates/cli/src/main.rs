use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value as Json};

use semiteam::algebraic::{compile, export_existential, LiteralMode};
use semiteam::atoms::{dep_zero_divisor_anomaly, eval_atom, eval_atom_in_structure};
use semiteam::formula::{parse_atom, parse_atoms, parse_fo, parse_team};
use semiteam::interpretation::truth_interpretation;
use semiteam::probes::{axiom_probe, mixing_probe, paper_suite, shipped_kinds};
use semiteam::provenance::{annotate, parse_binding, provenance_polynomials, specialize};
use semiteam::repairs::{
    repair_min_nonindep, repair_subteam, repair_superteam, repair_symmetric, RepairNotion, RepairSpace,
};
use semiteam::team_semantics::{check, CheckTrace, SplitStrategy};
use semiteam::{
    fixtures, DependencyAtom, Error, KInterpretation, KTeam, SemiringSpec, Structure, Vocabulary,
};

#[derive(Parser)]
#[command(name = "semiteam", version, about = "Semiring team semantics toolkit")]
struct Cli {
    /// Semiring: boolean, nat, rat, tropical, lukasiewicz, zmod:<n> or poly:<p1,...>
    #[arg(long, global = true)]
    semiring: Option<String>,
    /// Seed for the probe commands.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Also write the output to this file.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
}

#[derive(Clone, Copy, ValueEnum)]
enum Example {
    /// The boolean team {aa, ab}.
    Team,
    /// The multiteam {aa: 2, bb: 5}.
    Multiteam,
    /// The probabilistic team {aa: 1/4, ab: 3/4}.
    Probabilistic,
    /// The eight-row mod-4 team.
    Zmod4Mixing,
}

#[derive(Args)]
struct TeamInput {
    /// Team CSV file (header `x,y,...,weight`).
    #[arg(long, conflicts_with = "example")]
    team: Option<PathBuf>,
    /// A bundled example team instead of a file.
    #[arg(long, value_enum)]
    example: Option<Example>,
    /// Structure file; its universe is shared with the team.
    #[arg(long)]
    structure: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Value and verdict of a dependency atom on a team.
    CheckAtom {
        #[command(flatten)]
        input: TeamInput,
        #[arg(long)]
        atom: String,
    },
    /// Value of a first-order sentence under an interpretation.
    Eval {
        /// Interpretation file.
        #[arg(long)]
        interpretation: Option<PathBuf>,
        /// Structure file, read as its truth interpretation.
        #[arg(long, conflicts_with = "interpretation")]
        structure: Option<PathBuf>,
        /// Team CSV file, read as its team interpretation.
        #[arg(long, conflicts_with_all = ["interpretation", "structure"])]
        team: Option<PathBuf>,
        #[arg(long, value_enum, conflicts_with_all = ["interpretation", "structure", "team"])]
        example: Option<Example>,
        /// Relation symbol naming the team.
        #[arg(long, default_value = "R")]
        relation: String,
        #[arg(long)]
        sentence: String,
    },
    /// Satisfaction of a team-logic formula.
    Teamcheck {
        #[command(flatten)]
        input: TeamInput,
        #[arg(long)]
        formula: String,
        /// exact, denom:<d> or export
        #[arg(long, default_value = "exact")]
        strategy: String,
        /// Write the witness trace to this file.
        #[arg(long)]
        trace: Option<PathBuf>,
    },
    /// The constrained polynomial of a formula.
    Poly {
        #[command(flatten)]
        input: TeamInput,
        #[arg(long)]
        formula: String,
        #[arg(long, value_enum, default_value_t = PolyEmit::Ir)]
        emit: PolyEmit,
        #[arg(long, default_value = "exact")]
        strategy: String,
    },
    /// Provenance polynomials of a formula over a team.
    Provenance {
        #[command(flatten)]
        input: TeamInput,
        #[arg(long)]
        formula: String,
        #[arg(long, value_enum, default_value_t = ProvEmit::Poly)]
        emit: ProvEmit,
        /// Token bindings such as `p1=2,p2=5`; defaults to the team weights.
        #[arg(long)]
        bind: Option<String>,
        #[arg(long, default_value = "exact")]
        strategy: String,
    },
    /// Minimal repairs of a team against dependency constraints.
    Repair {
        #[command(flatten)]
        input: TeamInput,
        /// Comma-separated atoms, e.g. `dep(x;y), inc(x;y)`.
        #[arg(long, default_value = "")]
        constraints: String,
        #[arg(long, default_value = "sym")]
        notion: String,
        /// Candidate weights; must include 0.
        #[arg(long, default_value = "0,1")]
        weights: String,
        /// Left variables for the nonindep notion.
        #[arg(long, default_value = "x")]
        left: String,
        /// Right variables for the nonindep notion.
        #[arg(long, default_value = "y")]
        right: String,
    },
    /// Semiring axiom and mixing-rule probes.
    Axioms {
        #[arg(long, default_value_t = 1000)]
        samples: usize,
        #[arg(long, default_value_t = 500)]
        mixing_samples: usize,
    },
    /// Re-derives the bundled worked examples.
    PaperSuite,
}

#[derive(Clone, Copy, ValueEnum)]
enum PolyEmit {
    Ir,
    Smt2,
    Count,
}

#[derive(Clone, Copy, ValueEnum)]
enum ProvEmit {
    Poly,
    Specialized,
}

enum Failure {
    Engine(Error),
    Io(PathBuf, std::io::Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Engine(e)
    }
}

const OK: u8 = 0;
const UNSATISFIED: u8 = 1;
const ERROR: u8 = 2;
const INCOMPLETE: u8 = 3;

struct Output {
    json: Json,
    code: u8,
    /// Replaces the JSON in the `--out` file.
    raw: Option<String>,
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::Io(path.to_path_buf(), e))
}

fn spec_arg(cli: &Cli) -> Result<Option<SemiringSpec>, Failure> {
    Ok(cli.semiring.as_deref().map(str::parse).transpose()?)
}

fn example_team(e: Example) -> KTeam {
    match e {
        Example::Team => fixtures::example_team(),
        Example::Multiteam => fixtures::example_multiteam(),
        Example::Probabilistic => fixtures::example_probabilistic(),
        Example::Zmod4Mixing => fixtures::zmod4_mixing_team(),
    }
}

/// Structure and team; a missing structure is the empty one over the team's
/// universe. File teams default to the natural semiring.
fn load(cli: &Cli, input: &TeamInput) -> Result<(Structure, KTeam), Failure> {
    let structure = input
        .structure
        .as_deref()
        .map(read)
        .transpose()?
        .map(|t| Structure::parse(&t))
        .transpose()?;
    let spec = spec_arg(cli)?;
    let team = match (&input.team, input.example) {
        (Some(path), _) => {
            let universe = structure.as_ref().map(|s| s.universe().clone());
            KTeam::read_csv(&read(path)?, universe, &spec.unwrap_or(SemiringSpec::Natural))?
        }
        (None, Some(e)) => {
            let t = example_team(e);
            match spec {
                Some(s) if s != *t.spec() => {
                    return Err(Error::SpecMismatch {
                        left: s.to_string(),
                        right: t.spec().to_string(),
                    }
                    .into())
                }
                _ => t,
            }
        }
        (None, None) => return Err(Error::Input("give --team or --example".into()).into()),
    };
    let structure = match structure {
        Some(s) => {
            if **s.universe() != **team.universe() {
                return Err(Error::Input("team and structure universes differ".into()).into());
            }
            s
        }
        None => Structure::new(team.universe().clone(), Vocabulary::new()),
    };
    Ok((structure, team))
}

fn team_json(t: &KTeam) -> Json {
    let u = t.universe();
    Json::Array(
        t.iter()
            .map(|(row, w)| {
                let mut m = serde_json::Map::new();
                for (var, &e) in t.domain().iter().zip(row) {
                    m.insert(var.clone(), json!(u.name(e)));
                }
                m.insert("weight".into(), json!(w.to_string()));
                Json::Object(m)
            })
            .collect(),
    )
}

fn trace_json(t: &CheckTrace) -> Json {
    match t {
        CheckTrace::Literal => json!({"node": "literal"}),
        CheckTrace::Atom { value } => json!({"node": "atom", "value": value.to_string()}),
        CheckTrace::And(l, r) => json!({"node": "and", "left": trace_json(l), "right": trace_json(r)}),
        CheckTrace::Or {
            left_team,
            right_team,
            left,
            right,
        } => json!({
            "node": "or",
            "left_team": team_json(left_team),
            "right_team": team_json(right_team),
            "left": trace_json(left),
            "right": trace_json(right),
        }),
        CheckTrace::Exists { var, team, inner } | CheckTrace::Forall { var, team, inner } => json!({
            "node": if matches!(t, CheckTrace::Exists { .. }) { "exists" } else { "forall" },
            "var": var,
            "team": team_json(team),
            "inner": trace_json(inner),
        }),
    }
}

fn verdict_code(satisfied: bool) -> u8 {
    if satisfied {
        OK
    } else {
        UNSATISFIED
    }
}

fn run(cli: &Cli) -> Result<Output, Failure> {
    let plain = |json: Json, code: u8| Output {
        json,
        code,
        raw: None,
    };
    match &cli.command {
        Command::CheckAtom { input, atom } => {
            let (a, x) = load(cli, input)?;
            let atom = parse_atom(atom)?;
            let value = match &atom {
                DependencyAtom::Lit(_) => eval_atom_in_structure(&a, &x, &atom)?,
                _ if input.structure.is_some() => eval_atom_in_structure(&a, &x, &atom)?,
                _ => eval_atom(&x, &atom)?,
            };
            let satisfied = !value.is_zero();
            let mut out = json!({
                "atom": atom.to_string(),
                "semiring": x.spec().to_string(),
                "value": value.to_string(),
                "satisfied": satisfied,
            });
            if matches!(atom, DependencyAtom::Dep { .. }) {
                out["zero_divisor_anomaly"] = json!(dep_zero_divisor_anomaly(&x, &atom)?);
            }
            Ok(plain(out, verdict_code(satisfied)))
        }
        Command::Eval {
            interpretation,
            structure,
            team,
            example,
            relation,
            sentence,
        } => {
            let spec = spec_arg(cli)?;
            let pi = if let Some(p) = interpretation {
                KInterpretation::parse(&read(p)?, spec.as_ref())?
            } else if let Some(p) = structure {
                truth_interpretation(
                    &Structure::parse(&read(p)?)?,
                    &spec.unwrap_or(SemiringSpec::Boolean),
                )
            } else {
                let x = match (team, example) {
                    (Some(p), _) => KTeam::read_csv(&read(p)?, None, &spec.unwrap_or(SemiringSpec::Natural))?,
                    (None, Some(e)) => example_team(*e),
                    (None, None) => {
                        return Err(Error::Input(
                            "give --interpretation, --structure, --team or --example".into(),
                        )
                        .into())
                    }
                };
                x.to_interpretation_named(relation)
            };
            let f = parse_fo(sentence, pi.vocabulary())?;
            if !f.is_sentence() {
                let free: Vec<String> = f.free_vars().into_iter().collect();
                return Err(Error::UnboundVariable(free.join(",")).into());
            }
            let value = pi.eval_sentence(&f)?;
            Ok(plain(
                json!({"semiring": pi.spec().to_string(), "sentence": f.to_string(), "value": value.to_string()}),
                OK,
            ))
        }
        Command::Teamcheck {
            input,
            formula,
            strategy,
            trace,
        } => {
            let (a, x) = load(cli, input)?;
            let strat: SplitStrategy = strategy.parse()?;
            let f = parse_team(formula, a.vocabulary())?;
            let r = check(&a, &x, &f, strat)?;
            let mut out = json!({
                "formula": f.to_string(),
                "semiring": x.spec().to_string(),
                "strategy": strat.to_string(),
                "verdict": r.verdict,
                "complete": r.complete,
            });
            if let Some(path) = trace {
                let t = r.trace.as_ref().map(trace_json).unwrap_or(Json::Null);
                let text = serde_json::to_string_pretty(&t).expect("trace serialises");
                fs::write(path, text + "\n").map_err(|e| Failure::Io(path.clone(), e))?;
                out["trace"] = t;
            }
            let code = match (r.verdict, r.complete) {
                (true, _) => OK,
                (false, true) => UNSATISFIED,
                (false, false) => INCOMPLETE,
            };
            Ok(plain(out, code))
        }
        Command::Poly {
            input,
            formula,
            emit,
            strategy,
        } => {
            let (a, x) = load(cli, input)?;
            let f = parse_team(formula, a.vocabulary())?;
            let c = compile(&a, &f, x.domain(), x.spec(), LiteralMode::Indicator)?;
            match emit {
                PolyEmit::Ir => {
                    let p = c.poly()?;
                    let families: Vec<Json> = c
                        .families()
                        .iter()
                        .map(|fam| json!({"name": fam.name, "domain": fam.domain}))
                        .collect();
                    Ok(plain(
                        json!({
                            "formula": f.to_string(),
                            "semiring": x.spec().to_string(),
                            "polynomial": c.render(&p),
                            "size": p.size(),
                            "chi_count": p.chi_count(),
                            "families": families,
                        }),
                        OK,
                    ))
                }
                PolyEmit::Smt2 => {
                    let text = export_existential(&c, &x)?;
                    Ok(Output {
                        json: json!({"formula": f.to_string(), "smt2": text}),
                        code: OK,
                        raw: Some(text),
                    })
                }
                PolyEmit::Count => {
                    let strat: SplitStrategy = strategy.parse()?;
                    let values = c.witness_values(&x, strat)?;
                    let witnesses: u128 = values.iter().filter(|(v, _)| !v.is_zero()).map(|(_, n)| n).sum();
                    let total: u128 = values.values().sum();
                    Ok(plain(
                        json!({
                            "formula": f.to_string(),
                            "strategy": strat.to_string(),
                            "valuations": total.to_string(),
                            "witnesses": witnesses.to_string(),
                            "range_nonzero": witnesses > 0,
                        }),
                        verdict_code(witnesses > 0),
                    ))
                }
            }
        }
        Command::Provenance {
            input,
            formula,
            emit,
            bind,
            strategy,
        } => {
            let (a, x) = load(cli, input)?;
            let f = parse_team(formula, a.vocabulary())?;
            let strat: SplitStrategy = strategy.parse()?;
            let ax = annotate(&x)?;
            let polys = provenance_polynomials(&a, &f, &ax, strat)?;
            let u = x.universe();
            let tokens: Vec<Json> = ax
                .tokens
                .iter()
                .map(|(row, tok)| {
                    let assignment: serde_json::Map<String, Json> = x
                        .domain()
                        .iter()
                        .zip(row)
                        .map(|(v, &e)| (v.clone(), json!(u.name(e))))
                        .collect();
                    json!({"token": tok, "assignment": assignment, "weight": x.weight(row).to_string()})
                })
                .collect();
            let entries: Vec<Json> = match emit {
                ProvEmit::Poly => polys
                    .iter()
                    .map(|(p, n)| json!({"polynomial": p.to_string(), "multiplicity": n.to_string()}))
                    .collect(),
                ProvEmit::Specialized => {
                    let sub = match bind {
                        Some(text) => parse_binding(text, x.spec())?,
                        None => ax.original_binding(),
                    };
                    polys
                        .iter()
                        .map(|(p, n)| {
                            Ok(json!({
                                "polynomial": p.to_string(),
                                "value": specialize(p, &sub, x.spec())?.to_string(),
                                "multiplicity": n.to_string(),
                            }))
                        })
                        .collect::<Result<_, Error>>()?
                }
            };
            let explains = polys.iter().any(|(p, _)| !p.is_zero());
            Ok(plain(
                json!({
                    "formula": f.to_string(),
                    "semiring": ax.spec().to_string(),
                    "tokens": tokens,
                    "polynomials": entries,
                }),
                verdict_code(explains),
            ))
        }
        Command::Repair {
            input,
            constraints,
            notion,
            weights,
            left,
            right,
        } => {
            let (_, x) = load(cli, input)?;
            let notion: RepairNotion = notion.parse()?;
            let atoms = if constraints.trim().is_empty() {
                Vec::new()
            } else {
                parse_atoms(constraints)?
            };
            let weights = weights
                .split(',')
                .map(str::trim)
                .filter(|w| !w.is_empty())
                .map(|w| x.spec().parse_value(w))
                .collect::<Result<Vec<_>, _>>()?;
            let space = RepairSpace::new(weights);
            let vars = |s: &str| {
                s.split(',')
                    .map(|v| v.trim().to_string())
                    .filter(|v| !v.is_empty())
                    .collect::<Vec<_>>()
            };
            let r = match notion {
                RepairNotion::Symmetric => repair_symmetric(&x, &atoms, &space)?,
                RepairNotion::Subteam => repair_subteam(&x, &atoms, &space)?,
                RepairNotion::Superteam => repair_superteam(&x, &atoms, &space)?,
                RepairNotion::MinNonindep => repair_min_nonindep(&x, &vars(left), &vars(right), &space)?,
            };
            let mut out = json!({
                "notion": r.notion.to_string(),
                "constraints": atoms.iter().map(ToString::to_string).collect::<Vec<_>>(),
                "distance": r.distance.to_string(),
                "exhaustive": r.exhaustive,
                "candidates": r.candidates,
                "repairs": r.teams.iter().map(team_json).collect::<Vec<_>>(),
            });
            if notion == RepairNotion::Symmetric {
                out["reading"] = json!(
                    "minimal symmetric-difference distance among candidates satisfying every constraint"
                );
            }
            Ok(plain(out, OK))
        }
        Command::Axioms {
            samples,
            mixing_samples,
        } => {
            let kinds = match spec_arg(cli)? {
                Some(s) => vec![s],
                None => shipped_kinds(),
            };
            let axioms: Vec<_> = kinds.iter().map(|k| axiom_probe(k, *samples, cli.seed)).collect();
            let mixing_kinds = match &cli.semiring {
                Some(_) => kinds.clone(),
                None => vec![
                    SemiringSpec::Boolean,
                    SemiringSpec::Natural,
                    SemiringSpec::Rational,
                    SemiringSpec::IntMod(4),
                ],
            };
            let mixing = mixing_kinds
                .iter()
                .map(|k| mixing_probe(k, *mixing_samples, cli.seed))
                .collect::<Result<Vec<_>, _>>()?;
            let passed = axioms.iter().all(|r| r.passed()) && mixing.iter().all(|m| m.passed);
            Ok(plain(
                json!({"passed": passed, "axioms": axioms, "mixing": mixing}),
                verdict_code(passed),
            ))
        }
        Command::PaperSuite => {
            let r = paper_suite();
            let passed = r.passed();
            Ok(plain(
                json!({"passed": passed, "report": r}),
                verdict_code(passed),
            ))
        }
    }
}

fn error_json(f: &Failure) -> Json {
    let (code, message) = match f {
        Failure::Engine(e) => (e.code(), e.to_string()),
        Failure::Io(path, e) => ("IoError", format!("{}: {e}", path.display())),
    };
    json!({"error": {"code": code, "message": message}})
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let Format::Json = cli.format;
    let (json, code, raw) = match run(&cli) {
        Ok(o) => (o.json, o.code, o.raw),
        Err(f) => (error_json(&f), ERROR, None),
    };
    let text = serde_json::to_string_pretty(&json).expect("output serialises") + "\n";
    print!("{text}");
    if let Some(path) = &cli.out {
        if let Err(e) = fs::write(path, raw.unwrap_or(text)) {
            eprintln!("cannot write {}: {e}", path.display());
            return ExitCode::from(ERROR);
        }
    }
    ExitCode::from(code)
}
