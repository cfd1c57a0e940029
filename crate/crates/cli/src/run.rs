use std::collections::BTreeMap;
use std::error::Error;
use std::fs;
use std::io::Read;
use std::ops::ControlFlow;

use serde_json::{json, Value};
use tclab_core::corpus::{formula_corpus, CorpusParams};
use tclab_core::finite_model::{for_each_model, sat_bounded, size_vectors, CardinalityVector, SatVerdict};
use tclab_core::logic::{arrangement_formula, Arrangement, Formula, FreshVars, Var};
use tclab_core::minimal_model::{decide_by_witness, decide_from_mm, decide_s_membership, MmCapability};
use tclab_core::property_lab::{
    check_convexity, check_finite_smoothness, check_not_smooth_star, check_stable_infiniteness, find_assignment,
    reproduce_table1, reproduce_venn, table1_markdown, venn_markdown, ConvexityBounds, PropertyReport,
    ReproduceBounds, SmoothInput, StarModel,
};
use tclab_core::textio::{
    interpretation_to_json, mm_to_json, parse_arrangement, parse_formula, parse_formula_bytes, print_formula,
    verdict_to_json,
};
use tclab_core::theories::{
    build_star, make_theory, HOracle, Rho, SOracle, StarElement, TheoryConfig, TheoryHandle, TreeNode,
};
use tclab_core::witness::{
    complete_to_witness_model, flatten, identity_witness, cycle_witness, shiny_witness, theory_witness,
    verify_strong_witness, wit_ti, VerifyOptions, WitnessFn,
};

use crate::args::{Artifact, CheckKind, Command, DecideVia, FormulaArgs, MmAlgo, TheoryArgs, WitnessChoice};

type CliResult<T> = Result<T, Box<dyn Error>>;

/// What to print and whether the run refuted something.
pub struct Outcome {
    pub stdout: String,
    pub refuted: bool,
}

impl Outcome {
    fn json(value: &Value) -> Self {
        Outcome { stdout: pretty(value), refuted: false }
    }

    fn report(value: &Value, refuted: bool) -> Self {
        Outcome { stdout: pretty(value), refuted }
    }
}

fn pretty(value: &Value) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("JSON values always serialize");
    s.push('\n');
    s
}

fn to_value<T: serde::Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("report types serialize")
}

impl TheoryArgs {
    fn name(&self) -> CliResult<&str> {
        self.theory.as_deref().ok_or_else(|| "--theory is required for this subcommand".into())
    }

    fn h_oracle(&self) -> CliResult<HOracle> {
        let text = match fs::metadata(&self.h) {
            Ok(meta) if meta.is_file() => fs::read_to_string(&self.h)?,
            _ => self.h.clone(),
        };
        Ok(HOracle::parse(&text)?)
    }

    fn handle(&self) -> CliResult<TheoryHandle> {
        let config = TheoryConfig { s: Some(SOracle::new(self.s_set.iter().copied())?), h: Some(self.h_oracle()?) };
        Ok(make_theory(self.name()?, &config)?)
    }
}

impl FormulaArgs {
    fn read(&self, t: &TheoryHandle) -> CliResult<Formula> {
        self.read_or(t, None)
    }

    fn read_or(&self, t: &TheoryHandle, default: Option<&str>) -> CliResult<Formula> {
        let sig = t.signature();
        if let Some(text) = &self.formula {
            return Ok(parse_formula(text, sig)?);
        }
        match &self.file {
            Some(path) if path.as_os_str() == "-" => {
                let mut bytes = Vec::new();
                std::io::stdin().read_to_end(&mut bytes)?;
                Ok(parse_formula_bytes(&bytes, sig)?)
            }
            Some(path) => {
                let bytes = fs::read(path).map_err(|e| format!("{}: {e}", path.display()))?;
                parse_formula_bytes(&bytes, sig).map_err(|e| format!("{}:{e}", path.display()).into())
            }
            None => match default {
                Some(text) => Ok(parse_formula(text, sig)?),
                None => Err("no formula: pass a file or --formula".into()),
            },
        }
    }
}

/// The theory's complete size bound for `phi`, else `fallback` per sort.
fn bound_for(t: &TheoryHandle, phi: &Formula, fallback: Option<u64>) -> CliResult<CardinalityVector> {
    let sorts = t.signature().sorts().len();
    let sizes: Vec<u64> = match (fallback, t.bound_hint(phi)) {
        (Some(b), _) => vec![b; sorts],
        (None, Some(hint)) => hint.into_iter().map(|k| k as u64).collect(),
        (None, None) => vec![6; sorts],
    };
    if let Some(&big) = sizes.iter().find(|&&k| k > crate::args::MAX_BOUND) {
        return Err(format!("bound overflow: the size bound {big} exceeds {}", crate::args::MAX_BOUND).into());
    }
    Ok(CardinalityVector::finite(t.signature(), &sizes)?)
}

fn pick_witness(t: &TheoryHandle, choice: WitnessChoice, bound: usize) -> CliResult<WitnessFn> {
    Ok(match choice {
        WitnessChoice::Theory => theory_witness(t, bound)?,
        WitnessChoice::Cycle => cycle_witness(t.signature()),
        WitnessChoice::Shiny => shiny_witness(t, bound)?,
        WitnessChoice::Identity => identity_witness(),
    })
}

pub fn dispatch(command: Command) -> CliResult<Outcome> {
    match command {
        Command::Sat { theory, input, bound } => {
            let t = theory.handle()?;
            let phi = input.read(&t)?;
            let bound = bound_for(&t, &phi, bound)?;
            Ok(Outcome::json(&verdict_to_json(&sat_bounded(&t, &phi, &bound)?)))
        }
        Command::Models { theory, input, bound, limit } => {
            let t = theory.handle()?;
            let phi = input.read(&t)?;
            phi.require_quantifier_free()?;
            let limits = vec![bound as usize; t.signature().sorts().len()];
            let mut models = Vec::new();
            for sizes in size_vectors(&limits) {
                if models.len() >= limit {
                    break;
                }
                for_each_model(&t, &phi, &sizes, |m| {
                    models.push(interpretation_to_json(&m));
                    if models.len() >= limit {
                        ControlFlow::Break(())
                    } else {
                        ControlFlow::Continue(())
                    }
                })?;
            }
            Ok(Outcome::json(&json!({"count": models.len(), "models": models})))
        }
        Command::Mm { theory, input, algo, bound, cap } => {
            let t = theory.handle()?;
            let phi = input.read(&t)?;
            let mm = mm_capability(&t, algo, bound, cap)?;
            Ok(Outcome::json(&mm_to_json(&mm.compute(&phi)?)))
        }
        Command::Decide { theory, input, via, bound } => {
            let t = theory.handle()?;
            let phi = input.read(&t)?;
            let (satisfiable, complete) = match via {
                DecideVia::Search => {
                    let complete = t.bound_hint(&phi).is_some();
                    let bound = bound_for(&t, &phi, if complete { None } else { Some(bound) })?;
                    (sat_bounded(&t, &phi, &bound)?.is_sat(), complete)
                }
                DecideVia::Witness => (decide_by_witness(&t, &phi)?, true),
                DecideVia::Mm => (decide_from_mm(&MmCapability::brute(&t, bound as usize), &phi)?, true),
            };
            let via = format!("{via:?}").to_lowercase();
            Ok(Outcome::json(&json!({
                "theory": t.name(),
                "formula": print_formula(&phi),
                "via": via,
                "satisfiable": satisfiable,
                "complete": complete,
            })))
        }
        Command::DecideS { theory, n, algo, cap } => {
            let t = theory.handle()?;
            let mm = mm_capability(&t, algo, 8, cap)?;
            Ok(Outcome::json(&to_value(&decide_s_membership(&mm, n)?)))
        }
        Command::Witness { theory, input, witness } => {
            let t = theory.handle()?;
            let phi = input.read(&t)?;
            let wit = pick_witness(&t, witness, 6)?;
            let out = wit.apply(&phi)?;
            Ok(Outcome::json(&json!({
                "theory": t.name(),
                "witness": wit.name(),
                "strength": format!("{:?}", wit.strength()).to_lowercase(),
                "input": print_formula(&phi),
                "output": print_formula(&out),
            })))
        }
        Command::Complete { theory, input, arrangement } => complete(&theory, &input, &arrangement),
        Command::VerifyWitness { theory, witness, corpus, bound, seed, max_vars, equivalence } => {
            let t = theory.handle()?;
            let wit = pick_witness(&t, witness, bound as usize)?;
            let formulas =
                formula_corpus(t.signature(), seed, corpus, CorpusParams { vars: 2, literals: 3, depth: 1 });
            let opts = VerifyOptions { bound: bound as usize, extra_vars: 0, max_vars, check_equivalence: equivalence };
            let report = verify_strong_witness(&t, &wit, &formulas, opts)?;
            Ok(Outcome::report(&to_value(&report), !report.passed()))
        }
        Command::Check { property, theory, input, model_bound, seed, formulas, max_k, max_size, paths, levels } => {
            let report = match property {
                CheckKind::Convexity => {
                    let t = theory.handle()?;
                    let defaults = ConvexityBounds::default();
                    let b = ConvexityBounds {
                        model_bound: model_bound as usize,
                        premises: formulas.unwrap_or(defaults.premises),
                        seed,
                        ..defaults
                    };
                    check_convexity(&t, &b)?
                }
                CheckKind::Si => {
                    let t = theory.handle()?;
                    check_stable_infiniteness(&t, formulas.unwrap_or(20), max_k, model_bound as usize, seed)?
                }
                CheckKind::Fsmooth => check_fsmooth(&theory, &input, model_bound, max_size)?,
                CheckKind::Star => {
                    let family = paths
                        .iter()
                        .enumerate()
                        .map(|(i, bits)| Ok((format!("r{i}"), TreeNode::parse(bits)?.0)))
                        .collect::<CliResult<Vec<_>>>()?;
                    check_not_smooth_star(&family, &levels)?
                }
            };
            Ok(property_outcome(&report))
        }
        Command::Reproduce { artifact, json, markdown: _, seed } => {
            let b = ReproduceBounds { seed, ..ReproduceBounds::default() };
            let stdout = match artifact {
                Artifact::Table1 => {
                    let rows = reproduce_table1(&b)?;
                    if json { pretty(&to_value(&rows)) } else { table1_markdown(&rows) }
                }
                Artifact::Venn => {
                    let rows = reproduce_venn(&b)?;
                    if json { pretty(&to_value(&rows)) } else { venn_markdown(&rows) }
                }
            };
            Ok(Outcome { stdout, refuted: false })
        }
        Command::Corpus { theory, count, seed, vars, literals, depth, out } => {
            let t = theory.handle()?;
            let texts: Vec<String> = formula_corpus(t.signature(), seed, count, CorpusParams { vars, literals, depth })
                .iter()
                .map(print_formula)
                .collect();
            match out {
                None => Ok(Outcome::json(&json!(texts))),
                Some(dir) => {
                    fs::create_dir_all(&dir)?;
                    let width = count.max(1).to_string().len();
                    for (i, text) in texts.iter().enumerate() {
                        fs::write(dir.join(format!("{i:0width$}.fml")), format!("{text}\n"))?;
                    }
                    Ok(Outcome::json(&json!({"written": texts.len(), "dir": dir.display().to_string()})))
                }
            }
        }
    }
}

fn mm_capability(t: &TheoryHandle, algo: MmAlgo, bound: u64, cap: Option<u64>) -> CliResult<MmCapability> {
    let mm = match algo {
        MmAlgo::Brute => MmCapability::brute(t, bound as usize),
        MmAlgo::FromDecision => MmCapability::from_decision(t)?,
    };
    Ok(match cap {
        Some(c) => mm.with_cap(c as usize),
        None => mm,
    })
}

fn property_outcome(report: &PropertyReport) -> Outcome {
    Outcome::report(&to_value(report), report.is_refuted())
}

fn complete(theory: &TheoryArgs, input: &FormulaArgs, arrangement: &str) -> CliResult<Outcome> {
    let t = theory.handle()?;
    let (index, s) = t.cycle_base().ok_or_else(|| format!("`{}` is not one of t1..t4", t.name()))?;
    let phi = input.read_or(&t, Some("true"))?;
    let sig = t.signature();
    let mut fresh = FreshVars::avoiding([&phi]);
    let flat = flatten(&phi, &mut fresh)?;
    let witphi = wit_ti(&flat, sig, &mut fresh);
    let given = parse_arrangement(arrangement, sig)?;
    let mut blocks: Vec<Vec<Var>> = given.blocks().to_vec();
    for v in witphi.vars().into_iter().chain(phi.vars()) {
        if given.block_of(&v).is_none() && !blocks.iter().flatten().any(|w| *w == v) {
            blocks.push(vec![v]);
        }
    }
    let delta = Arrangement::new(blocks)?;
    let query = Formula::conj(vec![witphi.to_formula(), arrangement_formula(&delta)]);
    let bound = CardinalityVector::uniform(sig, delta.num_blocks() as u64 + 2)?;
    let verdict = sat_bounded(&t, &query, &bound)?;
    let SatVerdict::Sat(seed) = &verdict else {
        return Ok(Outcome::json(&verdict_to_json(&verdict)));
    };
    let completion = complete_to_witness_model(index, s, &witphi, &delta, seed)?;
    eprintln!("completion case: {}", to_value(&completion.case).as_str().unwrap_or_default());
    Ok(Outcome::json(&interpretation_to_json(&completion.model)))
}

/// The starting model for `fsmooth`: for `star`, the full star with the
/// configured levels and an all-zero path function per `f_ρ` symbol of the
/// formula; otherwise the smallest model within the bound.
fn check_fsmooth(
    theory: &TheoryArgs,
    input: &FormulaArgs,
    model_bound: u64,
    max_size: Option<usize>,
) -> CliResult<PropertyReport> {
    let t = theory.handle()?;
    let default = t.signature().sorts().first().map(|s| format!("(= (as x {0}) (as x {0}))", s.name()));
    let phi = input.read_or(&t, default.as_deref())?;
    let start = if t.name() == "star" {
        let n = theory.star_n as usize;
        let top = StarElement::Node(TreeNode::root());
        let rhos = phi
            .function_symbols()
            .into_iter()
            .filter_map(|f| f.strip_prefix("f_").map(str::to_string))
            .map(|rho| Ok((rho, Rho::from_bits(&"0".repeat(n), top.clone())?)))
            .collect::<CliResult<Vec<_>>>()?;
        let star = build_star(n, TreeNode::all_of_length(n - 1), rhos)?;
        let m = find_assignment(&star.to_interpretation(), &phi)?
            .ok_or("the formula has no assignment in the starting star interpretation")?;
        let domain = star.domain();
        let assignment: BTreeMap<Var, StarElement> =
            phi.vars().into_iter().filter_map(|v| m.value(&v).map(|i| (v, domain[i].clone()))).collect();
        SmoothInput::Star(StarModel { star, assignment })
    } else {
        let bound = bound_for(&t, &phi, Some(model_bound))?;
        match sat_bounded(&t, &phi, &bound)? {
            SatVerdict::Sat(m) => SmoothInput::Plain(m),
            _ => return Err(format!("no model of the formula within bound {model_bound}").into()),
        }
    };
    let size = start.interpretation()?.total_size();
    Ok(check_finite_smoothness(&t, &start, &phi, max_size.unwrap_or(size + 4))?)
}
