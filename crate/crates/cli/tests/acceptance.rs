//! Acceptance suite: one PASS/FAIL line per criterion, each under its time limit.

use std::path::{Path, PathBuf};
use std::process::{Command, ExitCode};
use std::sync::Arc;
use std::time::{Duration, Instant};

use predres::dsl::{self, parse};
use predres::optable::{composite_laws, random_monotone_between, random_operator};
use predres::relalg::{check_galois, check_negation_laws, extract_relation};
use predres::resolve::{
    basis_from_resolution, factorize_monotone, fixpoints, is_basis, minimal_basis, resolve_closure, resolve_interior,
    verify_resolution,
};
use predres::{
    BasisChoice, BasisKind, ClosureForm, FactorVariant, MorphismKind, OperatorKind, OperatorTable, RandomKind, Relation,
    TransformKind, Universe,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::Value;

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn universe(name: &str, n: usize) -> Arc<Universe> {
    let labels: Vec<String> = (0..n).map(|i| format!("{}{i}", name.to_lowercase())).collect();
    Universe::new(name, &labels).unwrap()
}

fn relation_from_bits(x: &Arc<Universe>, y: &Arc<Universe>, bits: u64) -> Relation {
    let ny = y.len();
    Relation::from_fn(Arc::clone(x), Arc::clone(y), |i, j| bits >> (i * ny + j) & 1 == 1)
}

fn join_below(family: &[u64], u: u64) -> u64 {
    family.iter().filter(|&&v| v & !u == 0).fold(0, |a, &v| a | v)
}

fn meet_above(family: &[u64], u: u64, full: u64) -> u64 {
    family.iter().filter(|&&v| u & !v == 0).fold(full, |a, &v| a & v)
}

/// Join-irreducible by definition: not the union of the members strictly below.
fn count_join_irreducible(family: &[u64]) -> usize {
    family
        .iter()
        .filter(|&&u| family.iter().filter(|&&v| v != u && v & !u == 0).fold(0, |a, &v| a | v) != u)
        .count()
}

/// `b` generates every fixpoint as the union of its members below it.
fn is_join_basis_oracle(b: &[u64], fix: &[u64]) -> bool {
    fix.iter().all(|&u| join_below(b, u) == u)
}

fn random_interior(rng: &mut ChaCha8Rng, max_n: usize) -> OperatorTable {
    let n = rng.gen_range(1..=max_n);
    let k = rng.gen_range(0..=2 * n);
    random_operator(&universe("X", n), RandomKind::Interior, rng.gen(), k).unwrap()
}

fn random_closure(rng: &mut ChaCha8Rng, max_n: usize) -> OperatorTable {
    let n = rng.gen_range(1..=max_n);
    let k = rng.gen_range(0..=2 * n);
    random_operator(&universe("X", n), RandomKind::Closure, rng.gen(), k).unwrap()
}

fn exhaustive_3x3(check: impl Fn(&Relation) -> bool) -> Outcome {
    let x = universe("X", 3);
    let y = universe("Y", 3);
    for bits in 0..512u64 {
        let r = relation_from_bits(&x, &y, bits);
        ensure(check(&r), || format!("fails on {r}"))?;
    }
    Ok("512 relations, 64 (U,V) pairs each".into())
}

fn galois() -> Outcome {
    exhaustive_3x3(|r| check_galois(r).unwrap().holds())
}

fn negation() -> Outcome {
    exhaustive_3x3(|r| check_negation_laws(r).unwrap().holds())
}

fn morphism_round_trip() -> Outcome {
    let mut count = 0;
    for nx in 1..=4 {
        for ny in 1..=4 {
            let (x, y) = (universe("X", nx), universe("Y", ny));
            for bits in 0..1u64 << (nx * ny) {
                let r = relation_from_bits(&x, &y, bits);
                for (t, m) in [
                    (TransformKind::Angel, MorphismKind::Sup),
                    (TransformKind::Demon, MorphismKind::Inf),
                    (TransformKind::Ortho, MorphismKind::Antitone),
                ] {
                    let table = OperatorTable::from_relation(t, &r).unwrap();
                    ensure(extract_relation(&table, m) == r, || format!("{t} round trip fails on {r}"))?;
                }
                count += 1;
            }
        }
    }
    Ok(format!("{count} relations x 3 kinds"))
}

fn composites() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    for i in 0..1000 {
        let (nx, ny) = (rng.gen_range(1..=8), rng.gen_range(1..=8));
        let density = rng.gen_range(0.0..=1.0);
        let r = Relation::random(universe("X", nx), universe("Y", ny), density, &mut rng);
        for c in composite_laws(&r).unwrap() {
            ensure(c.holds(), || format!("relation #{i} {r}: {} fails", c.describe()))?;
        }
    }
    Ok("1000 relations, 3 composites and 3 triple identities each".into())
}

fn interior_resolutions() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for i in 0..500 {
        let f = random_interior(&mut rng, 8);
        for choice in [BasisChoice::Fixpoints, BasisChoice::Minimal] {
            let r = resolve_interior(&f, choice).map_err(|e| format!("#{i}: {e}"))?;
            ensure(verify_resolution(&f, &r).unwrap().holds(), || format!("#{i} {}", choice.name()))?;
            // independent pointwise recheck of the composite
            let comp = r.composite();
            ensure(f.entries() == comp.entries(), || format!("#{i} composite differs"))?;
        }
        let fix = fixpoints(&f).unwrap();
        let expected = count_join_irreducible(fix.fixpoints().members());
        let got = resolve_interior(&f, BasisChoice::Minimal).unwrap().interpolant().len();
        ensure(got == expected, || format!("#{i}: interpolant {got}, join-irreducibles {expected}"))?;
    }
    Ok("500 interiors, both basis choices".into())
}

fn closure_resolutions() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    for i in 0..500 {
        let f = random_closure(&mut rng, 8);
        for form in [ClosureForm::Demonic, ClosureForm::Biorthogonal] {
            for choice in [BasisChoice::Fixpoints, BasisChoice::Minimal] {
                let r = resolve_closure(&f, form, choice).map_err(|e| format!("#{i}: {e}"))?;
                ensure(verify_resolution(&f, &r).unwrap().holds(), || format!("#{i} {form:?}"))?;
                ensure(f.entries() == r.composite().entries(), || format!("#{i} composite differs"))?;
            }
        }
    }
    Ok("500 closures, demonic and biorthogonal".into())
}

fn minimality() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for i in 0..200 {
        let f = random_interior(&mut rng, 6);
        let l = fixpoints(&f).unwrap();
        let fix = l.fixpoints().members();
        let min = minimal_basis(&l, BasisKind::Join).unwrap();
        for choice in [BasisChoice::Fixpoints, BasisChoice::Minimal] {
            let b = basis_from_resolution(&resolve_interior(&f, choice).unwrap()).unwrap();
            ensure(is_basis(&b, &l, BasisKind::Join).unwrap().holds(), || format!("#{i} {}", choice.name()))?;
            ensure(is_join_basis_oracle(b.members(), fix), || format!("#{i} oracle disagrees"))?;
            if choice == BasisChoice::Minimal {
                ensure(b == min, || format!("#{i}: extracted {b}, minimal {min}"))?;
            }
        }
        for &m in min.members() {
            let dropped = min.without(m);
            ensure(!is_basis(&dropped, &l, BasisKind::Join).unwrap().holds(), || format!("#{i}: {dropped} still a basis"))?;
            ensure(!is_join_basis_oracle(dropped.members(), fix), || format!("#{i}: oracle disagrees"))?;
        }
    }
    Ok("200 interiors".into())
}

fn factorizations() -> Outcome {
    let x = universe("X", 4);
    let y = universe("Y", 4);
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    for i in 0..200 {
        let pairs = rng.gen_range(0..12);
        let f = random_monotone_between(&x, &y, rng.gen(), pairs).unwrap();
        for v in [FactorVariant::AngelDemon, FactorVariant::DemonAngel, FactorVariant::OrthoOrtho] {
            let fz = factorize_monotone(&f, v).map_err(|e| format!("#{i}: {e}"))?;
            let comp = fz.composite();
            for w in 0..16u64 {
                ensure(comp.apply_word(w) == f.apply_word(w), || format!("#{i} {} at {w}", v.name()))?;
            }
        }
    }
    Ok("200 transformers x 3 variants x 16 inputs".into())
}

fn threshold_echo() -> Outcome {
    let f = OperatorTable::threshold(universe("X", 5), 3).unwrap();
    let l = fixpoints(&f).unwrap();
    let fix: Vec<u64> = l.fixpoints().members().to_vec();
    ensure(fix.len() == 17, || format!("{} fixpoints", fix.len()))?;
    let min = minimal_basis(&l, BasisKind::Join).unwrap();
    ensure(min.len() == 10, || format!("minimal basis has {} members", min.len()))?;
    ensure(is_join_basis_oracle(min.members(), &fix), || "minimal basis fails the oracle".into())?;
    // no 9-member subfamily of the fixpoints generates them all
    let mut checked = 0u32;
    for pick in 0u32..1 << fix.len() {
        if pick.count_ones() != 9 {
            continue;
        }
        let sub: Vec<u64> = (0..fix.len()).filter(|&i| pick >> i & 1 == 1).map(|i| fix[i]).collect();
        ensure(!is_join_basis_oracle(&sub, &fix), || format!("9-member basis {sub:?}"))?;
        checked += 1;
    }
    ensure(checked == 24310, || format!("checked {checked} subfamilies"))?;
    Ok(format!("basis 10 > |X| = 5; {checked} nine-member subfamilies rejected"))
}

fn fixpoint_formulas() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    for i in 0..500 {
        let f = random_interior(&mut rng, 8);
        let fix = fixpoints(&f).unwrap();
        for w in 0..=f.domain().full_word() {
            ensure(f.apply_word(w) == join_below(fix.fixpoints().members(), w), || format!("interior #{i} at {w}"))?;
        }
        let c = random_closure(&mut rng, 8);
        let full = c.domain().full_word();
        let fix = fixpoints(&c).unwrap();
        ensure(fix.kind() == OperatorKind::Closure || c.classify().unwrap().is_interior(), || format!("#{i} kind"))?;
        for w in 0..=full {
            ensure(c.apply_word(w) == meet_above(fix.fixpoints().members(), w, full), || format!("closure #{i} at {w}"))?;
        }
    }
    Ok("500 interiors and 500 closures, all inputs".into())
}

fn bin() -> &'static str {
    env!("CARGO_BIN_EXE_predres")
}

fn run_cli(args: &[&str]) -> Result<(i32, String), String> {
    let out = Command::new(bin()).args(args).output().map_err(|e| e.to_string())?;
    Ok((
        out.status.code().unwrap_or(-1),
        String::from_utf8(out.stdout).map_err(|e| e.to_string())?,
    ))
}

fn performance(dir: &Path) -> Outcome {
    let mut notes = vec![];
    let generated = dir.join("random14.rl");
    let (code, src) = run_cli(&["random", "--kind", "interior", "-n", "14", "--seed", "2024", "--family", "12"])?;
    ensure(code == 0, || format!("random exited {code}"))?;
    std::fs::write(&generated, src).map_err(|e| e.to_string())?;
    // worst case for the fixpoint count: 12 singletons generate 2^12 open sets
    let dense = dir.join("dense14.rl");
    std::fs::write(
        &dense,
        "universe X = {a,b,c,d,e,f,g,h,i,j,k,l,m,n}\n\
         operator F on X = interior_from {{a},{b},{c},{d},{e},{f},{g},{h},{i},{j},{k},{l}}\n",
    )
    .map_err(|e| e.to_string())?;
    for path in [&generated, &dense] {
        let file = path.to_str().unwrap();
        let (_, fix) = run_cli(&["fix", "-o", "F", file, "--json"])?;
        let count = serde_json::from_str::<Value>(&fix).map_err(|e| e.to_string())?["result"]["count"]
            .as_u64()
            .unwrap_or(u64::MAX);
        ensure(count <= 4096, || format!("{count} fixpoints"))?;
        let start = Instant::now();
        let (code, out) = run_cli(&["resolve", "-o", "F", file, "--form", "interior", "--basis", "fixpoints", "--json"])?;
        let took = start.elapsed();
        ensure(code == 0, || format!("resolve exited {code}"))?;
        let v: Value = serde_json::from_str(&out).map_err(|e| e.to_string())?;
        ensure(v["result"]["interpolant_size"].as_u64() == Some(count), || "interpolant is not Fix(F)".into())?;
        ensure(took < Duration::from_secs(10), || format!("took {took:.2?}"))?;
        notes.push(format!("|Fix| = {count} in {took:.2?}"));
    }
    Ok(notes.join(", "))
}

fn corpus_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../corpus")
}

fn corpus_round_trip() -> Outcome {
    let mut files: Vec<PathBuf> = std::fs::read_dir(corpus_dir())
        .map_err(|e| e.to_string())?
        .map(|e| e.unwrap().path())
        .filter(|p| p.extension().is_some_and(|e| e == "rl"))
        .collect();
    files.sort();
    ensure(files.len() >= 12, || format!("only {} fixtures", files.len()))?;
    let mut runs = 0;
    for path in &files {
        let name = path.file_name().unwrap().to_string_lossy().into_owned();
        let src = std::fs::read_to_string(path).map_err(|e| e.to_string())?;
        let p = parse(&src).map_err(|e| format!("{name}: {e}"))?;
        let env = dsl::eval(&p).map_err(|e| format!("{name}: {e}"))?;
        let again = parse(&p.to_string()).map_err(|e| format!("{name} reprinted: {e}"))?;
        ensure(p == again, || format!("{name}: round trip changed the program"))?;
        let file = path.to_str().unwrap();
        let mut commands: Vec<Vec<&str>> = vec![vec!["check", file], vec!["laws", file]];
        for op in env.operators.keys() {
            commands.push(vec!["classify", "-o", op, file]);
            commands.push(vec!["fix", "-o", op, file]);
            commands.push(vec!["basis", "-o", op, file]);
            commands.push(vec!["resolve", "-o", op, file, "--form", "interior"]);
            commands.push(vec!["resolve", "-o", op, file, "--form", "closure-ortho"]);
            commands.push(vec!["factorize", "-o", op, file]);
            commands.push(vec!["eval", "-o", op, "-s", "{}", file]);
        }
        for mut args in commands {
            args.push("--json");
            let (code, first) = run_cli(&args)?;
            let (code2, second) = run_cli(&args)?;
            ensure(code == code2 && first == second, || format!("{args:?} is not byte-stable"))?;
            if code == 0 {
                let v: Value = serde_json::from_str(&first).map_err(|e| format!("{args:?}: {e}"))?;
                let keys: Vec<&String> = v.as_object().map(|o| o.keys().collect()).unwrap_or_default();
                ensure(keys == ["input", "kind", "result", "witnesses"], || format!("{args:?}: keys {keys:?}"))?;
            }
            runs += 1;
        }
    }
    let (_, a) = run_cli(&["random", "--kind", "interior", "-n", "4", "--seed", "7"])?;
    let (_, b) = run_cli(&["random", "--kind", "interior", "-n", "4", "--seed", "7"])?;
    ensure(a == b, || "random output differs".into())?;
    Ok(format!("{} fixtures, {runs} JSON invocations run twice", files.len()))
}

fn main() -> ExitCode {
    let dir = tempfile::tempdir().expect("temp dir");
    let criteria: Vec<(&str, u64, Box<dyn Fn() -> Outcome>)> = vec![
        ("1 Galois laws, all 3x3 relations", 1, Box::new(galois)),
        ("2 negation laws, all 3x3 relations", 1, Box::new(negation)),
        ("3 morphism round trip, |X|,|Y| <= 4", 5, Box::new(morphism_round_trip)),
        ("4 composite classification and triple identities", 30, Box::new(composites)),
        ("5 interior resolutions and interpolant size", 60, Box::new(interior_resolutions)),
        ("6 closure resolutions, both forms", 60, Box::new(closure_resolutions)),
        ("7 extracted bases and minimality", 30, Box::new(minimality)),
        ("8 monotone factorizations", 10, Box::new(factorizations)),
        ("9 threshold n=5 k=3 basis size", 10, Box::new(threshold_echo)),
        ("10 fixpoint join and meet formulas", 30, Box::new(fixpoint_formulas)),
        ("11 resolve at n = 14 via the CLI, each run under 10 s", 30, Box::new(|| performance(dir.path()))),
        ("12 corpus round trip and stable JSON", 120, Box::new(corpus_round_trip)),
    ];
    let mut failed = 0;
    for (name, limit, run) in &criteria {
        let start = Instant::now();
        let outcome = run();
        let took = start.elapsed();
        let outcome = outcome.and_then(|detail| {
            if took < Duration::from_secs(*limit) {
                Ok(detail)
            } else {
                Err(format!("took {took:.2?}, limit {limit} s"))
            }
        });
        match outcome {
            Ok(detail) => println!("PASS  {name}  [{took:.2?}]  {detail}"),
            Err(why) => {
                failed += 1;
                println!("FAIL  {name}  [{took:.2?}]  {why}");
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
