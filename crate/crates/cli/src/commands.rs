//! Command dispatch: input resolution, report assembly and exit status.

use std::io::Read;

use clap::ValueEnum;
use rayon::prelude::*;
use serde::de::DeserializeOwned;
use serde::Serialize;
use serde_json::{json, Map, Value};

use fellbundle::act::{self, SpaceAction};
use fellbundle::fdalg::{AlgElement, PartialIsoAction};
use fellbundle::gpdalg;
use fellbundle::isg::{self, InverseSemigroup};
use fellbundle::json::{self as docs, ActionDoc, FdActionDoc, GroupoidDoc, IauDoc, SemigroupDoc};
use fellbundle::linalg::{self, seeded};
use fellbundle::topo::{self, Semilattice};
use fellbundle::xprod::iau::{crossed_01m1, IauData};
use fellbundle::xprod::{self, CrossedElement, CrossedProduct, SlotOrder};
use fellbundle::{corpus, tol, Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Command {
    /// Check the inverse-semigroup axioms of a Cayley table.
    ValidateIsg,
    /// E-unitarity, E*-unitarity and the order condition.
    EUnitary,
    /// Character space of the idempotent semilattice.
    Spectrum,
    /// The groupoid of germs of an action on a finite space.
    GermGroupoid,
    /// Whether the groupoid of germs is Hausdorff.
    Hausdorff,
    /// Whether the unit space is closed, with the per-element criterion.
    UnitsClosed,
    /// E*-unitarity against closed units of the universal action.
    #[value(name = "cross-check-69", alias = "cross-check")]
    CrossCheck69,
    /// Adjointness, bimodularity and faithfulness of the expectation.
    Expectation,
    /// Dimension, simple summands and faithfulness of the crossed product.
    CrossedProduct,
    /// A representation induced from block multiplicities.
    Induce,
    /// The crossed product by {1,-1,0} built from (I, α, u) data.
    #[value(name = "verify-01m1")]
    Verify01m1,
    /// Crossed product of C(X) against the groupoid algebra of germs.
    VerifyIterated,
    /// Run a batch of jobs in parallel.
    CorpusRun,
}

impl Command {
    fn name(self) -> String {
        self.to_possible_value().expect("no skipped variants").get_name().to_owned()
    }
}

#[derive(Debug, Clone)]
pub struct Options {
    pub seed: u64,
    pub tol: f64,
    pub cap: usize,
    pub order: SlotOrder,
    pub mult: Option<Vec<usize>>,
}

enum Source {
    Fixture(String),
    Text(String),
    Value(Value),
}

impl Source {
    fn open(input: &str) -> Result<Source> {
        if let Some(name) = input.strip_prefix("fixture:") {
            return Ok(Source::Fixture(name.to_owned()));
        }
        let text = if input == "-" {
            let mut buf = String::new();
            std::io::stdin()
                .read_to_string(&mut buf)
                .map_err(|e| Error::Precondition(format!("cannot read standard input: {e}")))?;
            buf
        } else {
            std::fs::read_to_string(input).map_err(|e| Error::Precondition(format!("cannot read {input}: {e}")))?
        };
        Ok(Source::Text(text))
    }

    fn doc<T: DeserializeOwned>(&self) -> Result<T> {
        match self {
            Source::Text(text) => docs::parse(text),
            Source::Value(v) => Ok(T::deserialize(v)?),
            Source::Fixture(name) => Err(Error::Precondition(format!("fixture {name} is not a document"))),
        }
    }
}

fn semigroup(src: &Source, o: &Options) -> Result<InverseSemigroup> {
    match src {
        Source::Fixture(name) => corpus::semigroup(name),
        _ => src.doc::<SemigroupDoc>()?.build(o.cap),
    }
}

fn space_action(src: &Source, o: &Options) -> Result<SpaceAction> {
    match src {
        Source::Fixture(name) if name == "01m1-discrete" => corpus::discrete_01m1(),
        Source::Fixture(name) => corpus::space_action(name),
        _ => src.doc::<ActionDoc>()?.build(o.cap),
    }
}

fn fd_action(src: &Source, o: &Options) -> Result<PartialIsoAction> {
    match src {
        Source::Fixture(name) => corpus::fd_action(name),
        _ => src.doc::<FdActionDoc>()?.build(o.cap),
    }
}

fn iau_data(src: &Source) -> Result<IauData> {
    match src {
        Source::Fixture(name) => corpus::iau_fixture(name),
        _ => src.doc::<IauDoc>()?.build(),
    }
}

fn to_value(x: &impl Serialize) -> Value {
    serde_json::to_value(x).expect("reports serialise")
}

fn labelled(s: &InverseSemigroup, witness: Option<(usize, usize)>) -> Value {
    witness.map_or(Value::Null, |(e, t)| json!([s.label(e), s.label(t)]))
}

fn error_report(e: &Error) -> Value {
    let mut body = Map::new();
    body.insert("kind".into(), json!(e.kind()));
    body.insert("message".into(), json!(e.to_string()));
    if let Error::Parse { line, column, .. } = e {
        body.insert("line".into(), json!(line));
        body.insert("column".into(), json!(column));
    }
    json!({ "error": body })
}

fn status_of(e: &Error) -> u8 {
    match e {
        Error::Internal(_) | Error::Conditioning { .. } => 1,
        _ => 2,
    }
}

/// Runs `command` on the raw INPUT argument; returns the exit status and the
/// report.
pub fn run_input(command: Command, input: &str, o: &Options) -> (u8, Value) {
    match Source::open(input) {
        Ok(src) => run(command, &src, o),
        Err(e) => (status_of(&e), error_report(&e)),
    }
}

fn run(command: Command, src: &Source, o: &Options) -> (u8, Value) {
    let outcome = match command {
        Command::ValidateIsg => validate_isg(src, o),
        Command::EUnitary => e_unitary(src, o),
        Command::Spectrum => spectrum(src, o),
        Command::GermGroupoid => germ_groupoid(src, o),
        Command::Hausdorff => hausdorff(src, o),
        Command::UnitsClosed => units_closed(src, o),
        Command::CrossCheck69 => cross_check(src, o),
        Command::Expectation => expectation(src, o),
        Command::CrossedProduct => crossed_product(src, o),
        Command::Induce => induce(src, o),
        Command::Verify01m1 => verify_01m1(src, o),
        Command::VerifyIterated => verify_iterated(src, o),
        Command::CorpusRun => return corpus_run(src, o),
    };
    match outcome {
        Ok((true, report)) => (0, report),
        Ok((false, report)) => (1, report),
        Err(e) => (status_of(&e), error_report(&e)),
    }
}

type Outcome = Result<(bool, Value)>;

fn validate_isg(src: &Source, o: &Options) -> Outcome {
    let doc = match src {
        Source::Fixture(name) => SemigroupDoc::from_semigroup(&corpus::semigroup(name)?),
        _ => src.doc::<SemigroupDoc>()?,
    };
    let Some(table) = doc.checked_table()? else {
        // A generated semigroup is valid by construction.
        let s = doc.build(o.cap)?;
        return Ok((true, json!({ "valid": true, "size": s.size(), "generated": true, "violations": [] })));
    };
    if doc.generators.is_some() {
        return Err(Error::Structural("a semigroup needs exactly one of \"table\" and \"generators\"".into()));
    }
    let inverse = doc.inverse.clone().unwrap_or_else(|| docs::derive_inverse(table));
    let report = isg::validate(table, &inverse, doc.unit, doc.zero)?;
    let valid = report.is_valid();
    Ok((valid, json!({ "valid": valid, "size": table.len(), "generated": false, "violations": report.violations })))
}

fn e_unitary(src: &Source, o: &Options) -> Outcome {
    let s = semigroup(src, o)?;
    let e = s.is_e_unitary();
    let (star, order) = match s.zero() {
        Some(_) => (Some(s.is_e_star_unitary()?), Some(s.order_condition()?)),
        None => (None, None),
    };
    if let (Some(a), Some(b)) = (star, order) {
        if a.holds != b.holds {
            return Err(Error::Internal("E*-unitarity and the order condition disagree".into()));
        }
    }
    Ok((
        true,
        json!({
            "size": s.size(),
            "has_zero": s.zero().is_some(),
            "e_unitary": e.holds,
            "e_unitary_witness": labelled(&s, e.witness),
            "e_star_unitary": star.map(|v| v.holds),
            "order_condition": order.map(|v| v.holds),
            "witness": labelled(&s, star.and_then(|v| v.witness)),
        }),
    ))
}

fn spectrum(src: &Source, o: &Options) -> Outcome {
    let s = semigroup(src, o)?;
    let lattice = Semilattice::of_idempotents(&s)?;
    let spec = topo::semilattice_spectrum(&lattice)?;
    let x = spec.space();
    let lattice_labels = |set: &topo::PointSet| topo::members(set).into_iter().map(|e| lattice.label(e)).collect::<Vec<_>>();
    let space_labels = |set: &topo::PointSet| topo::members(set).into_iter().map(|p| x.label(p)).collect::<Vec<_>>();
    let characters: Vec<Value> = (0..spec.len())
        .map(|i| {
            json!({
                "label": x.label(i),
                "generator": lattice.label(spec.generator(i)),
                "filter": lattice_labels(spec.character(i)),
                "neighbourhood": space_labels(x.minimal_neighbourhood(i)),
            })
        })
        .collect();
    let ultra = spec.ultracharacters()?;
    let bijection = spec.ideal_open_bijection_check(o.cap)?;
    Ok((
        bijection,
        json!({
            "idempotents": lattice.len(),
            "characters": characters,
            "ultracharacters": space_labels(&ultra.members),
            "tight": space_labels(&ultra.closure),
            "hausdorff": x.is_hausdorff()?,
            "ideal_open_bijection": bijection,
        }),
    ))
}

fn germ_groupoid(src: &Source, o: &Options) -> Outcome {
    let g = act::germ_groupoid(&space_action(src, o)?)?;
    Ok((true, to_value(&GroupoidDoc::from_groupoid(&g))))
}

fn hausdorff(src: &Source, o: &Options) -> Outcome {
    let a = space_action(src, o)?;
    let g = act::germ_groupoid(&a)?;
    let closed = act::units_closed(&g)?;
    let space = a.space().is_hausdorff()?;
    let groupoid = act::groupoid_is_hausdorff(&g)?;
    if groupoid != (closed && space) {
        return Err(Error::Internal("Hausdorffness disagrees with closed units over a Hausdorff space".into()));
    }
    Ok((
        true,
        json!({ "arrows": g.len(), "groupoid_hausdorff": groupoid, "space_hausdorff": space, "units_closed": closed }),
    ))
}

fn units_closed(src: &Source, o: &Options) -> Outcome {
    let a = space_action(src, o)?;
    let closed = act::units_closed(&act::germ_groupoid(&a)?)?;
    let criterion = act::criterion_d1t_closed(&a)?;
    if closed != criterion.holds {
        return Err(Error::Internal("closed units disagree with the per-element criterion".into()));
    }
    Ok((true, json!({ "units_closed": closed, "criterion": criterion })))
}

fn cross_check(src: &Source, o: &Options) -> Outcome {
    let s = semigroup(src, o)?;
    let own: Vec<SpaceAction> = corpus::space_actions()?
        .into_iter()
        .filter(|f| f.action.is_zero_preserving() && f.action.semigroup().table() == s.table())
        .map(|f| f.action)
        .collect();
    let report = act::e_unitary_cross_check(&s, &own)?;
    let mut value = to_value(&report);
    value["corpus_size"] = json!(own.len());
    Ok((report.consistent, value))
}

fn expectation(src: &Source, o: &Options) -> Outcome {
    const SAMPLES: usize = 10;
    let cp = CrossedProduct::new(fd_action(src, o)?, o.order)?;
    let action = cp.action();
    let alg = action.algebra();
    let one = action.semigroup().unit().expect("crossed products are unital in S");
    let mut rng = seeded(o.seed);
    let (mut adjoint, mut bimodular, mut faithful) = (true, true, true);
    let mut min_eigenvalue = f64::INFINITY;
    for _ in 0..SAMPLES {
        let x = cp.random_element(&mut rng);
        let e = cp.expectation(&x);
        adjoint &= cp.expectation(&cp.star_raw(&x)).is_close(&e.star(), o.tol);
        let a = AlgElement::random(alg, alg.full_ideal(), &mut rng);
        let b = AlgElement::random(alg, alg.full_ideal(), &mut rng);
        let axb = cp.multiply_raw(
            &cp.multiply_raw(&CrossedElement::single(one, a.clone()), &x),
            &CrossedElement::single(one, b.clone()),
        );
        bimodular &= cp.expectation(&axb).is_close(&(&(&a * &e) * &b), o.tol);
        let p = cp.positivity_check(&x)?;
        min_eigenvalue = min_eigenvalue.min(p.min_eigenvalue);
        faithful &= p.expectation_zero == p.normal_form_zero;
    }
    let positive = min_eigenvalue >= -tol::SPECTRAL;
    Ok((
        adjoint && bimodular && positive && faithful,
        json!({
            "dim_crossed": cp.dim(),
            "samples": SAMPLES,
            "adjoint": adjoint,
            "bimodular": bimodular,
            "positive": positive,
            "faithful": faithful,
            "min_eigenvalue": min_eigenvalue,
        }),
    ))
}

fn unit_family(blocks: usize) -> Vec<Vec<usize>> {
    (0..blocks).map(|b| (0..blocks).map(|c| usize::from(b == c)).collect()).collect()
}

fn crossed_product(src: &Source, o: &Options) -> Outcome {
    let cp = CrossedProduct::new(fd_action(src, o)?, o.order)?;
    let relations = cp.relation_report()?;
    let rep = xprod::regular_representation(&cp)?;
    let kernel = rep.kernel_rank(&cp, o.seed);
    let images: Vec<_> = cp.basis().iter().map(|&u| rep.apply(&cp.unit_element(u))).collect();
    let mut blocks: Vec<usize> = linalg::wedderburn(&images, o.seed, tol::SPECTRAL)?.iter().map(|b| b.size).collect();
    blocks.sort_unstable();
    let summands: usize = blocks.iter().map(|d| d * d).sum();
    let faithful = xprod::e_faithful_check(&cp, &unit_family(cp.action().algebra().block_count()))?;
    let witness = if kernel == 0 { Value::Null } else { json!({ "regular_kernel_rank": kernel }) };
    Ok((
        kernel == 0 && faithful.induced_faithful && summands == cp.dim(),
        json!({
            "dim_crossed": cp.dim(),
            "blocks": blocks,
            "E_faithful": faithful.induced_faithful,
            "witness": witness,
            "relations": relations,
        }),
    ))
}

fn induce(src: &Source, o: &Options) -> Outcome {
    let cp = CrossedProduct::new(fd_action(src, o)?, o.order)?;
    let blocks = cp.action().algebra().block_count();
    let mult = o.mult.clone().unwrap_or_else(|| vec![1; blocks]);
    if mult.len() != blocks {
        return Err(Error::Structural(format!("--mult has {} entries for {blocks} blocks", mult.len())));
    }
    let rep = xprod::induce(&cp, &mult)?;
    let axioms = rep.check_axioms(&cp, o.seed);
    let faithful = xprod::e_faithful_check(&cp, std::slice::from_ref(&mult))?;
    let holds = axioms.holds(o.tol.max(tol::SPECTRAL));
    Ok((
        holds,
        json!({
            "dim": rep.dim(),
            "multiplicities": mult,
            "axioms": axioms,
            "axioms_hold": holds,
            "faithful_on_algebra": faithful.faithful_on_algebra,
            "induced_faithful": faithful.induced_faithful,
            "kernel_rank_induced": faithful.kernel_rank_induced,
        }),
    ))
}

fn verify_01m1(src: &Source, o: &Options) -> Outcome {
    let report = crossed_01m1(&iau_data(src)?, o.seed)?;
    let mut value = to_value(&report);
    value["holds"] = json!(report.holds());
    Ok((report.holds(), value))
}

fn verify_iterated(src: &Source, o: &Options) -> Outcome {
    let report = gpdalg::verify_iterated_iso(&space_action(src, o)?)?;
    Ok((report.iso, to_value(&report)))
}

struct Job {
    command: Command,
    label: Value,
    source: Result<Source>,
}

fn fixture_job(command: Command, name: &str) -> Job {
    Job { command, label: json!(format!("fixture:{name}")), source: Ok(Source::Fixture(name.to_owned())) }
}

/// Every bundled fixture under the command that exercises it.
fn bundled_jobs() -> Result<Vec<Job>> {
    let mut jobs = Vec::new();
    for &name in corpus::E_STAR_SUITE {
        for command in [Command::EUnitary, Command::CrossCheck69, Command::Spectrum] {
            jobs.push(fixture_job(command, name));
        }
    }
    for f in corpus::space_actions()? {
        jobs.push(fixture_job(Command::UnitsClosed, &f.name));
        if f.action.space().is_discrete() {
            jobs.push(fixture_job(Command::VerifyIterated, &f.name));
        }
    }
    for f in corpus::fd_actions()? {
        jobs.push(fixture_job(Command::CrossedProduct, &f.name));
    }
    for f in corpus::iau_fixtures()? {
        jobs.push(fixture_job(Command::Verify01m1, &f.name));
    }
    Ok(jobs)
}

fn parse_job(entry: &Value) -> Result<Job> {
    let bad = |msg: &str| Error::Structural(format!("job: {msg}"));
    let obj = entry.as_object().ok_or_else(|| bad("expected an object"))?;
    if let Some(key) = obj.keys().find(|k| *k != "command" && *k != "input") {
        return Err(bad(&format!("unknown field {key:?}")));
    }
    let name = obj.get("command").and_then(Value::as_str).ok_or_else(|| bad("missing \"command\""))?;
    let command = Command::from_str(name, false).map_err(|_| bad(&format!("unknown command {name:?}")))?;
    if command == Command::CorpusRun {
        return Err(Error::Precondition("corpus-run jobs cannot nest".into()));
    }
    let input = obj.get("input").ok_or_else(|| bad("missing \"input\""))?;
    let source = match input {
        Value::String(s) if s == "-" => Err(Error::Precondition("jobs cannot read standard input".into())),
        Value::String(s) => Source::open(s),
        Value::Object(_) => Ok(Source::Value(input.clone())),
        _ => return Err(bad("\"input\" must be a string or an object")),
    };
    Ok(Job { command, label: input.clone(), source })
}

fn corpus_run(src: &Source, o: &Options) -> (u8, Value) {
    let jobs = match src {
        Source::Fixture(name) if name == "bundled" => bundled_jobs(),
        Source::Fixture(name) => Err(Error::Precondition(format!("unknown corpus {name:?}; the built-in one is \"bundled\""))),
        _ => src.doc::<Value>().and_then(|doc| {
            let list = doc
                .as_object()
                .filter(|m| m.len() == 1)
                .and_then(|m| m.get("jobs"))
                .and_then(Value::as_array)
                .ok_or_else(|| Error::Structural("expected {\"jobs\": [...]}".into()))?;
            list.iter().map(parse_job).collect()
        }),
    };
    let jobs = match jobs {
        Ok(jobs) => jobs,
        Err(e) => return (status_of(&e), error_report(&e)),
    };
    let outcomes: Vec<(u8, Value)> = jobs
        .par_iter()
        .map(|job| match &job.source {
            Ok(source) => run(job.command, source, o),
            Err(e) => (status_of(e), error_report(e)),
        })
        .collect();
    let status = outcomes.iter().map(|(s, _)| *s).max().unwrap_or(0);
    let results: Vec<Value> = jobs
        .iter()
        .zip(outcomes)
        .map(|(job, (status, report))| {
            json!({ "command": job.command.name(), "input": job.label, "status": status, "report": report })
        })
        .collect();
    (status, json!({ "results": results }))
}
