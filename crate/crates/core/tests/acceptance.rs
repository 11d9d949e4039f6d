mod common;

use std::collections::BTreeSet;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use gtlogic::fixtures::{run_deduction, run_derivation, DEDUCTIONS, DERIVATIONS};
use gtlogic::formula::{parse_formula, Formula};
use gtlogic::graph::{ac_equal, enumerate_graphs};
use gtlogic::hilbert::{theorem_corpus, AxiomSchema};
use gtlogic::kripke::{
    bounded_valid, correspondence_check, equivalent_in, FrameClass, FrameProperty, KripkeModel,
    ModelSpace, SearchOptions, Verdict, DEFAULT_MODEL_BUDGET,
};
use gtlogic::rewrite::{rule_soundness_suite, GraphSystem, RuleId, SuiteOptions};
use gtlogic::translate::{is_t1_canonical, to_formula, to_graph};

const ROUND_TRIP_CASES: usize = 10_000;

type Check = fn() -> Result<String, String>;

fn jobs() -> usize {
    std::thread::available_parallelism().map_or(1, |n| n.get())
}

fn f(s: &str) -> Formula {
    parse_formula(s).expect("formula parses")
}

fn options() -> SearchOptions {
    SearchOptions {
        jobs: jobs(),
        ..SearchOptions::default()
    }
}

fn secs(d: Duration) -> String {
    format!("{:.3}s", d.as_secs_f64())
}

fn countermodel_from_cli(args: &[&str]) -> Result<(KripkeModel, Duration), String> {
    let start = Instant::now();
    let (code, out) = common::cli(args);
    let elapsed = start.elapsed();
    if code != 1 || out["verdict"] != "countermodel" {
        return Err(format!("exit {code}, output {out}"));
    }
    let model = KripkeModel::from_json(&out["model"].to_string()).map_err(|e| e.to_string())?;
    Ok((model, elapsed))
}

fn criterion_1() -> Result<String, String> {
    let target = f("p -> (-p -> q)");
    let (model, elapsed) = countermodel_from_cli(&[
        "valid",
        "--formula",
        "p -> (-p -> q)",
        "--max-worlds",
        "2",
        "--frame",
        "t",
    ])?;
    let fr = model.frame();
    let m = model.actual();
    if fr.len() != 2 {
        return Err(format!("{} worlds", fr.len()));
    }
    let n = 1 - m;
    if !(fr.related(m, n) && !fr.related(n, m)) {
        return Err(format!("relation {:?} is not M<N", fr.edges()));
    }
    if !(model.atom_true("p", m) && !model.atom_true("p", n) && !model.atom_true("q", m)) {
        return Err("valuation differs from p@M only, q false at M".into());
    }
    let name = &model.world_names()[m];
    if model.eval(name, &target).map_err(|e| e.to_string())? {
        return Err("eval reports the formula true at M".into());
    }
    if elapsed >= Duration::from_secs(1) {
        return Err(format!("took {}", secs(elapsed)));
    }
    Ok(format!(
        "M={name}, edges {:?}, eval false at M, {}",
        fr.edges(),
        secs(elapsed)
    ))
}

fn criterion_2() -> Result<String, String> {
    let start = Instant::now();
    let vars = ["p", "q", "r"].map(Formula::atom);
    let mut instances = Vec::new();
    for schema in AxiomSchema::GT {
        for x in &vars {
            for y in &vars {
                for z in &vars {
                    let a = schema.instantiate(x, y, z);
                    instances.push(Formula::necessarily(a.clone()));
                    instances.push(a);
                }
            }
        }
    }
    let unique: BTreeSet<Formula> = instances.into_iter().collect();
    for a in &unique {
        let verdict = bounded_valid(a, 3, FrameClass::T, &options()).map_err(|e| e.to_string())?;
        if let Verdict::Countermodel(m) = verdict {
            return Err(format!("`{a}` fails in {m}"));
        }
    }
    let elapsed = start.elapsed();
    if elapsed >= Duration::from_secs(60) {
        return Err(format!("took {}", secs(elapsed)));
    }
    Ok(format!(
        "{} distinct instances and peels valid, {}",
        unique.len(),
        secs(elapsed)
    ))
}

fn criterion_3() -> Result<String, String> {
    let start = Instant::now();
    let corpus = theorem_corpus();
    for (name, t) in &corpus {
        let verdict = bounded_valid(t, 3, FrameClass::T, &options()).map_err(|e| e.to_string())?;
        if let Verdict::Countermodel(m) = verdict {
            return Err(format!("{name} `{t}` fails in {m}"));
        }
    }
    let elapsed = start.elapsed();
    if elapsed >= Duration::from_secs(60) {
        return Err(format!("took {}", secs(elapsed)));
    }
    Ok(format!(
        "{} formulas valid, {}",
        corpus.len(),
        secs(elapsed)
    ))
}

fn criterion_4() -> Result<String, String> {
    let start = Instant::now();
    let report = correspondence_check(&f("+p -> (-(+p & q) -> -q)"), FrameProperty::Transitive, 3)
        .map_err(|e| e.to_string())?;
    let elapsed = start.elapsed();
    if !report.holds() {
        return Err(format!(
            "{} exceptions, first {:?}",
            report.failures.len(),
            report.failures[0]
        ));
    }
    if elapsed >= Duration::from_secs(300) {
        return Err(format!("took {}", secs(elapsed)));
    }
    Ok(format!(
        "{} frames, {} transitive, {} validate the schema, 0 exceptions, {}",
        report.frames_checked,
        report.frames_with_property,
        report.frames_validating_schema,
        secs(elapsed)
    ))
}

fn criterion_5() -> Result<String, String> {
    let axiom = f("+p -> (-(+p & q) -> -q)");
    let verdict = bounded_valid(&axiom, 3, FrameClass::T, &options()).map_err(|e| e.to_string())?;
    let Verdict::Countermodel(model) = verdict else {
        return Err("no countermodel".into());
    };
    let fr = model.frame();
    if fr.len() < 3 {
        return Err(format!("only {} worlds", fr.len()));
    }
    if model.holds(&axiom) {
        return Err("countermodel satisfies the axiom".into());
    }
    // a -> b -> c with a not seeing c, starting at the actual world
    let a = model.actual();
    let chain = (0..fr.len()).any(|b| {
        (0..fr.len()).any(|c| {
            a != b && b != c && a != c && fr.related(a, b) && fr.related(b, c) && !fr.related(a, c)
        })
    });
    if !chain {
        return Err(format!(
            "edges {:?} contain no chain from the actual world",
            fr.edges()
        ));
    }
    Ok(format!(
        "{} worlds, edges {:?}, actual {}",
        fr.len(),
        fr.edges(),
        model.world_names()[a]
    ))
}

fn suite(
    system: GraphSystem,
    frame: FrameClass,
    rules: Option<Vec<RuleId>>,
    size: usize,
) -> Result<(usize, usize, Duration), String> {
    let mut opts = SuiteOptions::new(system, size, 3);
    opts.frame = frame;
    opts.jobs = jobs();
    if let Some(r) = rules {
        opts.rules = r;
    }
    let start = Instant::now();
    let report = rule_soundness_suite(&opts).map_err(|e| e.to_string())?;
    if !report.checker_disagreements.is_empty() {
        return Err(format!(
            "step checker disagrees on {:?}",
            report.checker_disagreements[0]
        ));
    }
    Ok((report.steps, report.violation_count, start.elapsed()))
}

fn criterion_6() -> Result<String, String> {
    let start = Instant::now();
    let (get_steps, get_bad, get_t) = suite(GraphSystem::Get, FrameClass::T, None, 3)?;
    let (g4_steps, g4_bad, g4_t) = suite(GraphSystem::Get4, FrameClass::S4, None, 3)?;
    let sid = Some(vec![RuleId::SidIterate]);
    let (_, sid3_bad, _) = suite(GraphSystem::Get4, FrameClass::T, sid.clone(), 3)?;
    // the smallest unsound SID_iterate step has five nodes
    let (sid_steps, sid_bad, sid_t) = suite(GraphSystem::Get4, FrameClass::T, sid, 5)?;
    let summary = format!(
        "GET/t size 3: {get_steps} steps, {get_bad} violations ({}); GET4/s4 size 3: {g4_steps} steps, {g4_bad} violations ({}); SID_iterate/t: {sid3_bad} violations at size 3, {sid_bad} of {sid_steps} steps at size 5 ({})",
        secs(get_t),
        secs(g4_t),
        secs(sid_t)
    );
    if get_bad != 0 || g4_bad != 0 || sid_bad == 0 {
        return Err(summary);
    }
    if start.elapsed() >= Duration::from_secs(600) {
        return Err(format!("{summary}; took {}", secs(start.elapsed())));
    }
    Ok(summary)
}

fn criterion_7() -> Result<String, String> {
    let required = [
        "strong_lambda",
        "scroll_identity",
        "falsum_explodes",
        "ax1",
        "ax2",
        "ax3",
        "ax4",
        "ax5",
        "ax6",
        "ax7",
    ];
    for name in required {
        if !DERIVATIONS.iter().any(|d| d.name == name && d.accepted) {
            return Err(format!("missing fixture {name}"));
        }
    }
    let mut accepted = 0;
    for fx in DERIVATIONS {
        run_derivation(fx, jobs()).map_err(|e| format!("{}: {e}", fx.name))?;
        accepted += fx.accepted as usize;
    }
    Ok(format!(
        "{accepted} derivations accepted with valid conclusions, {} rejections confirmed",
        DERIVATIONS.len() - accepted
    ))
}

fn criterion_8() -> Result<String, String> {
    let start = Instant::now();
    let atoms: BTreeSet<String> = ["p", "q"].map(String::from).into();
    let space = ModelSpace::new(&atoms, 3, FrameClass::T, DEFAULT_MODEL_BUDGET)
        .map_err(|e| e.to_string())?;

    let formulas = common::samples(&common::formula(6), ROUND_TRIP_CASES, 1);
    let mut canonical = 0;
    for x in &formulas {
        let back = to_formula(&to_graph(x));
        if is_t1_canonical(x) {
            canonical += 1;
            if back != *x {
                return Err(format!("T2(T1({x})) = {back}"));
            }
        }
        if !equivalent_in(&space, x, &back) {
            return Err(format!("{x} and {back} differ"));
        }
    }

    let mut graphs = enumerate_graphs(&["p", "q"], 5);
    let exhaustive = graphs.len();
    graphs.extend(common::samples(&common::graph(4), ROUND_TRIP_CASES, 2));
    for g in &graphs {
        let x = to_formula(g);
        let back = to_graph(&x);
        if !ac_equal(&back, g) || common::oracle_canonical(&back) != common::oracle_canonical(g) {
            return Err(format!("T1(T2({g})) = {back}"));
        }
        if !equivalent_in(&space, &x, &to_formula(&back)) {
            return Err(format!("{g} changes meaning"));
        }
    }
    let elapsed = start.elapsed();
    if elapsed >= Duration::from_secs(300) {
        return Err(format!("took {}", secs(elapsed)));
    }
    Ok(format!(
        "{} formulas ({canonical} canonical), {} graphs ({exhaustive} exhaustive), 0 failures, {}",
        formulas.len(),
        graphs.len(),
        secs(elapsed)
    ))
}

fn criterion_9() -> Result<String, String> {
    if !DEDUCTIONS.iter().any(|d| d.conclusion == "p -> ~~p") {
        return Err("no p -> ~~p fixture".into());
    }
    for fx in DEDUCTIONS {
        run_deduction(fx).map_err(|e| format!("{}: {e}", fx.name))?;
    }
    Ok(format!(
        "{} transformed proofs accepted with the discharged implication",
        DEDUCTIONS.len()
    ))
}

fn criterion_10() -> Result<String, String> {
    let (model, elapsed) = countermodel_from_cli(&[
        "valid",
        "--formula",
        "p -> (-p -> q)",
        "--max-worlds",
        "3",
        "--frame",
        "s5",
    ])?;
    let fr = model.frame();
    if fr.len() > 2 || !fr.is_symmetric() || !fr.is_transitive() {
        return Err(format!("{} worlds, edges {:?}", fr.len(), fr.edges()));
    }
    if model.holds(&f("p -> (-p -> q)")) {
        return Err("model satisfies the formula".into());
    }
    if elapsed >= Duration::from_secs(1) {
        return Err(format!("took {}", secs(elapsed)));
    }
    Ok(format!(
        "{} worlds, edges {:?}, {}",
        fr.len(),
        fr.edges(),
        secs(elapsed)
    ))
}

fn main() -> ExitCode {
    let criteria: [(&str, Check); 10] = [
        ("paraconsistency countermodel on t", criterion_1),
        ("axiom instances valid", criterion_2),
        ("theorem corpus valid", criterion_3),
        ("transitivity correspondence", criterion_4),
        ("GT4 axiom fails on t", criterion_5),
        ("rule soundness", criterion_6),
        ("graph theorem fixtures", criterion_7),
        ("translation round trips", criterion_8),
        ("deduction transform", criterion_9),
        ("paraconsistency countermodel on s5", criterion_10),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        match check() {
            Ok(detail) => println!("PASS {:>2} {name}: {detail}", i + 1),
            Err(detail) => {
                failed += 1;
                println!("FAIL {:>2} {name}: {detail}", i + 1);
            }
        }
    }
    println!("{} passed, {failed} failed", criteria.len() - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
