use std::fs;
use std::io::{self, Read, Write};
use std::process::ExitCode;
use std::sync::Arc;

use clap::{Parser, Subcommand, ValueEnum};
use predres::dsl::emit::{self, BasisReport};
use predres::dsl::{self, emit_hasse, print, Environment, Record, ToRecord};
use predres::optable::{composite_laws, random_operator};
use predres::relalg::{check_galois, check_negation_laws, EXHAUSTIVE_BUDGET_BITS};
use predres::resolve::{self, fixpoints, fixpoints_as, minimal_basis};
use predres::setcore::DEFAULT_CAP;
use predres::{
    BasisChoice, BasisKind, ClosureForm, Error, FactorVariant, OperatorKind, OperatorTable, RandomKind, Universe,
};
use serde_json::{json, Value};

#[derive(Parser)]
#[command(name = "predres", version, about = "Relation-induced predicate transformers and resolutions of interior and closure operators")]
struct Cli {
    /// Print JSON records instead of prose
    #[arg(long, global = true)]
    json: bool,
    /// Largest universe accepted when reading a file
    #[arg(long, global = true, value_name = "N", default_value_t = DEFAULT_CAP)]
    max_universe: usize,
    /// Print nothing on success; rely on the exit code
    #[arg(long, short, global = true)]
    quiet: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Parse and evaluate a file
    Check { file: String },
    /// Check the interior/closure axioms of an operator
    Classify {
        #[arg(short = 'o', long = "operator")]
        operator: String,
        file: String,
    },
    /// List the fixpoints of an interior or closure operator
    Fix {
        #[arg(short = 'o', long = "operator")]
        operator: String,
        file: String,
        /// Write the Hasse diagram in dot format to PATH (`-` for stdout)
        #[arg(long, value_name = "PATH")]
        dot: Option<String>,
    },
    /// Compute the minimal basis of the fixpoint lattice
    Basis {
        #[arg(short = 'o', long = "operator")]
        operator: String,
        file: String,
        #[arg(long, value_enum)]
        kind: Option<BasisArg>,
    },
    /// Resolve an interior or closure operator through an interpolant
    Resolve {
        #[arg(short = 'o', long = "operator")]
        operator: String,
        file: String,
        #[arg(long, value_enum)]
        form: FormArg,
        #[arg(long, value_enum, default_value_t = ChoiceArg::Minimal)]
        basis: ChoiceArg,
    },
    /// Factor a monotone transformer through the powerset of its domain
    Factorize {
        #[arg(short = 'o', long = "operator")]
        operator: String,
        file: String,
        #[arg(long, value_enum, default_value_t = VariantArg::AngelDemon)]
        variant: VariantArg,
    },
    /// Apply an operator to one subset
    Eval {
        #[arg(short = 'o', long = "operator")]
        operator: String,
        /// Subset such as `{a,b}` or `a,b`
        #[arg(short = 's', long = "subset", allow_hyphen_values = true)]
        subset: String,
        file: String,
    },
    /// Check negation, Galois and composite laws on every relation
    Laws { file: String },
    /// Print a seeded random operator as a table declaration
    Random {
        #[arg(long, value_enum)]
        kind: KindArg,
        #[arg(short = 'n', long = "size")]
        size: usize,
        #[arg(long)]
        seed: u64,
        /// Generating family size (pairs for monotone operators); defaults to the universe size
        #[arg(long)]
        family: Option<usize>,
        #[arg(long, default_value = "F")]
        name: String,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum BasisArg {
    Join,
    Meet,
}

#[derive(Clone, Copy, ValueEnum)]
enum FormArg {
    Interior,
    ClosureDemonic,
    ClosureOrtho,
}

#[derive(Clone, Copy, ValueEnum)]
enum ChoiceArg {
    Minimal,
    Fixpoints,
}

#[derive(Clone, Copy, ValueEnum)]
enum VariantArg {
    AngelDemon,
    DemonAngel,
    OrthoOrtho,
}

#[derive(Clone, Copy, ValueEnum)]
enum KindArg {
    Interior,
    Closure,
    Monotone,
}

/// Exit status 1: the input was read fine but a property does not hold.
const VIOLATION: u8 = 1;
/// Exit status 2: usage, I/O, parse or evaluation error.
const USAGE: u8 = 2;

struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn usage(message: impl Into<String>) -> Failure {
        Failure {
            code: USAGE,
            message: message.into(),
        }
    }

    fn violation(message: impl Into<String>) -> Failure {
        Failure {
            code: VIOLATION,
            message: message.into(),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Failure {
        let code = match e {
            Error::NotMonotone { .. }
            | Error::NotInterior(_)
            | Error::NotClosure(_)
            | Error::NotInteriorOrClosure(_)
            | Error::VerificationFailed(_) => VIOLATION,
            _ => USAGE,
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

type Outcome = Result<Output, Failure>;

/// What a command prints, and whether a property failed.
struct Output {
    text: String,
    violation: bool,
}

struct Ctx {
    json: bool,
    cap: usize,
}

impl Ctx {
    fn load(&self, file: &str) -> Result<Environment, Failure> {
        let src = if file == "-" {
            let mut s = String::new();
            io::stdin()
                .read_to_string(&mut s)
                .map_err(|e| Failure::usage(format!("stdin: {e}")))?;
            s
        } else {
            fs::read_to_string(file).map_err(|e| Failure::usage(format!("{file}: {e}")))?
        };
        let program = dsl::parse(&src).map_err(|e| Failure::usage(format!("{file}:{e}")))?;
        dsl::eval_with_cap(&program, self.cap).map_err(|e| Failure::usage(format!("{file}:{e}")))
    }

    fn operator<'e>(&self, env: &'e Environment, name: &str) -> Result<&'e OperatorTable, Failure> {
        env.operator(name)
            .ok_or_else(|| Failure::usage(format!("unknown operator `{name}`")))
    }

    fn emit(&self, record: Record, prose: String, violation: bool) -> Outcome {
        let text = if self.json { record.render() + "\n" } else { prose };
        Ok(Output { text, violation })
    }
}

fn input(file: &str, operator: &str) -> Value {
    json!({ "file": file, "operator": operator })
}

fn check(ctx: &Ctx, file: &str) -> Outcome {
    let env = ctx.load(file)?;
    let names = |it: Vec<&String>| json!(it);
    let record = Record::new(
        "check",
        json!({ "file": file }),
        json!({
            "universes": names(env.universes.keys().collect()),
            "relations": names(env.relations.keys().collect()),
            "operators": names(env.operators.keys().collect()),
        }),
        vec![],
    );
    let prose = format!(
        "ok: {} universe(s), {} relation(s), {} operator(s)\n",
        env.universes.len(),
        env.relations.len(),
        env.operators.len()
    );
    ctx.emit(record, prose, false)
}

fn classify(ctx: &Ctx, file: &str, name: &str) -> Outcome {
    let env = ctx.load(file)?;
    let report = ctx.operator(&env, name)?.classify()?;
    let mut prose = String::new();
    let line = |prose: &mut String, axiom: &str, witness: Option<String>| match witness {
        None => prose.push_str(&format!("  {axiom:<12} yes\n")),
        Some(w) => prose.push_str(&format!("  {axiom:<12} no   {w}\n")),
    };
    prose.push_str(&format!("{name} on {}\n", report.universe.name()));
    line(
        &mut prose,
        "monotone",
        report
            .monotone
            .witness()
            .map(|(a, b)| format!("{name}({a}) is not contained in {name}({b})")),
    );
    line(&mut prose, "contractive", report.contractive.witness().map(|w| format!("{name}({w}) is not contained in {w}")));
    line(&mut prose, "expansive", report.expansive.witness().map(|w| format!("{w} is not contained in {name}({w})")));
    line(&mut prose, "F <= FF", report.deflation_ok.witness().map(|w| format!("fails at {w}")));
    line(&mut prose, "FF <= F", report.inflation_ok.witness().map(|w| format!("fails at {w}")));
    let verdict = match (report.is_interior(), report.is_closure()) {
        (true, true) => "interior and closure",
        (true, false) => "interior",
        (false, true) => "closure",
        (false, false) => "neither interior nor closure",
    };
    prose.push_str(&format!("{name} is {verdict}\n"));
    let violation = !report.is_interior() && !report.is_closure();
    ctx.emit(report.to_record(input(file, name)), prose, violation)
}

fn lattice_for(f: &OperatorTable, kind: Option<BasisArg>) -> Result<predres::FixLattice, Failure> {
    Ok(match kind {
        None => fixpoints(f)?,
        Some(BasisArg::Join) => fixpoints_as(f, OperatorKind::Interior)?,
        Some(BasisArg::Meet) => fixpoints_as(f, OperatorKind::Closure)?,
    })
}

fn fix(ctx: &Ctx, file: &str, name: &str, dot: Option<&str>) -> Outcome {
    let env = ctx.load(file)?;
    let l = fixpoints(ctx.operator(&env, name)?)?;
    let u = l.universe();
    let mut prose = format!("{name} is {}; {} fixpoint(s)\n", l.kind(), l.fixpoints().len());
    let mark = match l.kind() {
        OperatorKind::Interior => "join-irreducible",
        OperatorKind::Closure => "meet-irreducible",
    };
    for (&m, &irr) in l.fixpoints().members().iter().zip(l.irreducible()) {
        let tag = if irr { format!("  ({mark})") } else { String::new() };
        prose.push_str(&format!("  {}{tag}\n", u.render_word(m)));
    }
    let mut out = ctx.emit(l.to_record(input(file, name)), prose, false)?;
    if let Some(path) = dot {
        let graph = emit_hasse(&l);
        if path == "-" {
            out.text = graph;
        } else {
            fs::write(path, graph).map_err(|e| Failure::usage(format!("{path}: {e}")))?;
        }
    }
    Ok(out)
}

fn basis(ctx: &Ctx, file: &str, name: &str, kind: Option<BasisArg>) -> Outcome {
    let env = ctx.load(file)?;
    let l = lattice_for(ctx.operator(&env, name)?, kind)?;
    let bk = BasisKind::for_kind(l.kind());
    let b = minimal_basis(&l, bk)?;
    let prose = format!(
        "minimal {} basis of {name}: {} member(s) of {} fixpoint(s)\n  {}\n",
        bk.name(),
        b.len(),
        l.fixpoints().len(),
        b.render()
    );
    let report = BasisReport {
        lattice: &l,
        kind: bk,
        basis: &b,
    };
    ctx.emit(report.to_record(input(file, name)), prose, false)
}

fn resolve_cmd(ctx: &Ctx, file: &str, name: &str, form: FormArg, choice: ChoiceArg) -> Outcome {
    let env = ctx.load(file)?;
    let f = ctx.operator(&env, name)?;
    let choice = match choice {
        ChoiceArg::Minimal => BasisChoice::Minimal,
        ChoiceArg::Fixpoints => BasisChoice::Fixpoints,
    };
    let report = f.classify()?;
    let (wanted, r) = match form {
        FormArg::Interior => (OperatorKind::Interior, None),
        FormArg::ClosureDemonic => (OperatorKind::Closure, Some(ClosureForm::Demonic)),
        FormArg::ClosureOrtho => (OperatorKind::Closure, Some(ClosureForm::Biorthogonal)),
    };
    if let Some(why) = report.failure_for(wanted) {
        return Err(Failure::violation(format!("{name} is not {} operator: {why}", article(wanted))));
    }
    let res = match r {
        None => resolve::resolve_interior(f, choice)?,
        Some(cf) => resolve::resolve_closure(f, cf, choice)?,
    };
    let mut echo = input(file, name);
    echo["form"] = json!(res.form().name());
    echo["basis"] = json!(choice.name());
    ctx.emit(res.to_record(echo), print::resolution_source(name, &res), false)
}

fn article(k: OperatorKind) -> String {
    match k {
        OperatorKind::Interior => "an interior".into(),
        OperatorKind::Closure => "a closure".into(),
    }
}

fn factorize(ctx: &Ctx, file: &str, name: &str, variant: VariantArg) -> Outcome {
    let env = ctx.load(file)?;
    let f = ctx.operator(&env, name)?;
    let variant = match variant {
        VariantArg::AngelDemon => FactorVariant::AngelDemon,
        VariantArg::DemonAngel => FactorVariant::DemonAngel,
        VariantArg::OrthoOrtho => FactorVariant::OrthoOrtho,
    };
    let fz = resolve::factorize_monotone_with_cap(f, variant, ctx.cap)?;
    let mut echo = input(file, name);
    echo["variant"] = json!(variant.name());
    ctx.emit(fz.to_record(echo), print::factorization_source(name, &fz), false)
}

fn parse_subset(u: &Arc<Universe>, text: &str) -> Result<predres::SubsetMask, Failure> {
    let inner = text.trim().trim_start_matches('{').trim_end_matches('}');
    let names: Vec<&str> = inner.split(',').map(str::trim).filter(|s| !s.is_empty()).collect();
    Ok(u.mask_of(&names)?)
}

fn eval_cmd(ctx: &Ctx, file: &str, name: &str, subset: &str) -> Outcome {
    let env = ctx.load(file)?;
    let f = ctx.operator(&env, name)?;
    let u = parse_subset(f.domain(), subset)?;
    let v = f.apply(&u)?;
    let mut echo = input(file, name);
    echo["subset"] = emit::subset(&u);
    let record = Record::new("eval", echo, json!({ "output": emit::subset(&v) }), vec![]);
    ctx.emit(record, format!("{name}({u}) = {v}\n"), false)
}

fn laws(ctx: &Ctx, file: &str) -> Outcome {
    let env = ctx.load(file)?;
    let mut prose = String::new();
    let mut results = serde_json::Map::new();
    let mut witnesses = vec![];
    let mut violation = false;
    for (name, r) in &env.relations {
        let bits = r.source().len() + r.target().len();
        if bits > EXHAUSTIVE_BUDGET_BITS {
            prose.push_str(&format!("{name}: skipped, {bits} bits exceeds the exhaustive budget\n"));
            results.insert(name.clone(), json!({ "skipped": true }));
            continue;
        }
        let negation = check_negation_laws(r)?;
        let galois = check_galois(r)?;
        let composites = composite_laws(r)?;
        let mut entry = json!({
            "negation": negation.holds(),
            "galois": galois.holds(),
        });
        prose.push_str(&format!("{name}:\n"));
        for (label, rep) in [("negation", &negation), ("galois", &galois)] {
            match &rep.counterexample {
                None => prose.push_str(&format!("  {label:<28} holds\n")),
                Some(c) => {
                    violation = true;
                    prose.push_str(&format!(
                        "  {label:<28} FAILS ({}: V = {}, {} vs {})\n",
                        c.law.name(),
                        c.v,
                        c.lhs,
                        c.rhs
                    ));
                    let mut w = emit::counterexample(c);
                    w["relation"] = json!(name);
                    witnesses.push(w);
                }
            }
        }
        for c in &composites {
            let key = c.describe();
            entry[format!("{key} is {}", c.expected)] = json!(match c.expected {
                OperatorKind::Interior => c.report.is_interior(),
                OperatorKind::Closure => c.report.is_closure(),
            });
            entry[format!("{key} triple")] = json!(c.triple.holds());
            if c.holds() {
                prose.push_str(&format!("  {key:<28} {} and triple identity hold\n", c.expected));
            } else {
                violation = true;
                let why = c
                    .report
                    .failure_for(c.expected)
                    .or_else(|| c.triple.witness().map(|w| format!("triple identity fails at {w}")))
                    .unwrap_or_default();
                prose.push_str(&format!("  {key:<28} FAILS: {why}\n"));
                witnesses.push(json!({ "relation": name, "composite": key, "failure": why }));
            }
        }
        results.insert(name.clone(), entry);
    }
    if env.relations.is_empty() {
        prose.push_str("no relations declared\n");
    }
    let record = Record::new("laws", json!({ "file": file }), Value::Object(results), witnesses);
    ctx.emit(record, prose, violation)
}

fn letter_labels(n: usize) -> Vec<String> {
    if n <= 26 {
        (0..n).map(|i| ((b'a' + i as u8) as char).to_string()).collect()
    } else {
        (0..n).map(|i| format!("x{i}")).collect()
    }
}

fn random_cmd(ctx: &Ctx, kind: KindArg, n: usize, seed: u64, family: Option<usize>, name: &str) -> Outcome {
    if !dsl::is_identifier(name) {
        return Err(Failure::usage(format!("`{name}` is not a valid operator name")));
    }
    let u = Universe::with_cap("X", &letter_labels(n), ctx.cap.max(n))?;
    let kind = match kind {
        KindArg::Interior => RandomKind::Interior,
        KindArg::Closure => RandomKind::Closure,
        KindArg::Monotone => RandomKind::Monotone,
    };
    let k = family.unwrap_or(n);
    let f = random_operator(&u, kind, seed, k)?;
    let source = format!(
        "# random {} operator, seed {seed}, family {k}\n{}\n{}\n",
        kind.name(),
        print::universe_decl("X", &u),
        print::table_decl(name, &f)
    );
    let record = Record::new(
        "random",
        json!({ "kind": kind.name(), "size": n, "seed": seed, "family": k }),
        json!({ "source": source }),
        vec![],
    );
    ctx.emit(record, source, false)
}

fn run(cli: &Cli) -> Outcome {
    let ctx = Ctx {
        json: cli.json,
        cap: cli.max_universe,
    };
    match &cli.command {
        Command::Check { file } => check(&ctx, file),
        Command::Classify { operator, file } => classify(&ctx, file, operator),
        Command::Fix { operator, file, dot } => fix(&ctx, file, operator, dot.as_deref()),
        Command::Basis { operator, file, kind } => basis(&ctx, file, operator, *kind),
        Command::Resolve {
            operator,
            file,
            form,
            basis,
        } => resolve_cmd(&ctx, file, operator, *form, *basis),
        Command::Factorize {
            operator,
            file,
            variant,
        } => factorize(&ctx, file, operator, *variant),
        Command::Eval { operator, subset, file } => eval_cmd(&ctx, file, operator, subset),
        Command::Laws { file } => laws(&ctx, file),
        Command::Random {
            kind,
            size,
            seed,
            family,
            name,
        } => random_cmd(&ctx, *kind, *size, *seed, *family, name),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { USAGE } else { 0 });
        }
    };
    match run(&cli) {
        Ok(out) => {
            if !cli.quiet {
                let mut stdout = io::stdout().lock();
                let _ = stdout.write_all(out.text.as_bytes());
            }
            ExitCode::from(if out.violation { VIOLATION } else { 0 })
        }
        Err(f) => {
            eprintln!("predres: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
