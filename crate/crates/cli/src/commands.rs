use num_bigint::BigInt;
use serde::Serialize;
use sumset_core::experiments::{
    minima_statistics, random_subset_experiment, type_census_with, ExperimentConfig, Histogram, MinimaConfig,
    RandomExperiment, DEFAULT_EXHAUSTIVE_BUDGET,
};
use sumset_core::lattice::{coefficient_lattice_basis, successive_minima};
use sumset_core::sumset::{h_fold_sumset, sumset_profile};
use sumset_core::theory::{
    construct_cute_set, construct_lemma_set, extreme_and_realizable, predicted_size, verify_main_theorem_with_horizon,
};
use sumset_core::types::{
    embed_real_to_integers, h_type, product_to_sum, product_type, separation, sum_to_product, TypePartition,
};
use sumset_core::{decimal, BigIntegerSet, BigRational, BigRationalSet, CompositionTable};

use crate::input::{to_integer_set, to_rational_set, SetInput};
use crate::report::{Report, Table};
use crate::{CliError, Command, ExperimentCmd, LatticeCmd, SumsetCmd, TheoryCmd, TypesCmd};

type Reports = Result<Vec<(String, Report)>, CliError>;

#[derive(Serialize)]
struct SumsetOutput {
    set: BigIntegerSet,
    h: u32,
    size: usize,
    sumset: BigIntegerSet,
}

#[derive(Serialize)]
struct PredictOutput {
    h: u64,
    k: usize,
    h1: u64,
    #[serde(with = "decimal::int")]
    predicted_size: BigInt,
}

#[derive(Serialize)]
struct SeparationOutput {
    set: BigRationalSet,
    h: u32,
    #[serde(with = "decimal::ratio")]
    separation: BigRational,
}

#[derive(Serialize)]
struct TransportOutput {
    input: BigIntegerSet,
    #[serde(skip_serializing_if = "Option::is_none")]
    h: Option<u32>,
    output: BigIntegerSet,
}

fn single(report: Report) -> Reports {
    Ok(vec![(String::new(), report)])
}

/// Runs `f` on every input set, labeling each result with the set it came from.
fn per_set(input: &SetInput, mut f: impl FnMut(&[BigRational]) -> Result<Report, CliError>) -> Reports {
    input
        .load()?
        .iter()
        .map(|raw| {
            let label = raw.iter().map(ToString::to_string).collect::<Vec<_>>().join(",");
            Ok((format!("{{{label}}}"), f(raw)?))
        })
        .collect()
}

fn element_table(set: &BigIntegerSet) -> Table {
    let mut t = Table::new("element");
    for x in set.elements() {
        t.row([x]);
    }
    t
}

fn coord_header(prefix: &str, k: usize) -> String {
    let coords: Vec<String> = (1..=k).map(|i| format!("c{i}")).collect();
    format!("{prefix},{}", coords.join(","))
}

fn histogram_table(value_header: &str, hist: &Histogram) -> Table {
    let csv = hist.to_csv(value_header);
    let mut lines = csv.lines();
    Table {
        header: lines.next().unwrap_or_default().to_string(),
        rows: lines.map(str::to_string).collect(),
    }
}

fn type_table(partition: &TypePartition) -> Result<Table, CliError> {
    let comps = CompositionTable::new(partition.h, partition.k)?;
    let mut t = Table::new("index,composition,class");
    for (i, (c, id)) in comps.rows().zip(&partition.class_ids).enumerate() {
        let c: Vec<String> = c.iter().map(ToString::to_string).collect();
        t.row([i.to_string(), format!("({})", c.join(",")), id.to_string()]);
    }
    Ok(t)
}

fn random_report(run: &RandomExperiment) -> Result<Report, CliError> {
    Report::new(run, histogram_table("size", &run.histogram))
}

pub fn run(command: &Command) -> Reports {
    match command {
        Command::Sumset(cmd) => sumset(cmd),
        Command::Lattice(cmd) => lattice(cmd),
        Command::Theory(cmd) => theory(cmd),
        Command::Types(cmd) => types(cmd),
        Command::Experiment(cmd) => experiment(cmd),
    }
}

fn sumset(cmd: &SumsetCmd) -> Reports {
    match cmd {
        SumsetCmd::Compute { input, h } => per_set(input, |raw| {
            let set = to_integer_set(raw)?;
            let sum = h_fold_sumset(&set, *h)?;
            let table = element_table(&sum);
            Report::new(&SumsetOutput { size: sum.k(), set, h: *h, sumset: sum }, table)
        }),
        SumsetCmd::Profile { input, horizon } => per_set(input, |raw| {
            let p = sumset_profile(&to_integer_set(raw)?, *horizon)?;
            let mut t = Table::new("h,size,deficit,first_difference");
            for (i, (size, deficit)) in p.sizes.iter().zip(&p.deficits).enumerate() {
                let diff = i.checked_sub(1).map_or(String::new(), |j| p.deficit_first_differences[j].to_string());
                t.row([(i + 1).to_string(), size.to_string(), deficit.to_string(), diff]);
            }
            Report::new(&p, t)
        }),
    }
}

fn lattice(cmd: &LatticeCmd) -> Reports {
    match cmd {
        LatticeCmd::Basis { input } => per_set(input, |raw| {
            let set = to_integer_set(raw)?;
            let basis = coefficient_lattice_basis(&set)?;
            let mut t = Table::new(coord_header("l1_norm", set.k()));
            for v in &basis.rows {
                t.row(std::iter::once(v.l1_norm.to_string()).chain(v.coords.iter().map(ToString::to_string)));
            }
            Report::new(&basis, t)
        }),
        LatticeCmd::Minima { input, count, cap } => per_set(input, |raw| {
            let set = to_integer_set(raw)?;
            let m = successive_minima(&set, *count, *cap)?;
            let mut t = Table::new(coord_header("i,lambda,h", set.k()));
            for (i, (lambda, y)) in m.minima.iter().zip(&m.minimizers).enumerate() {
                let head = [(i + 1).to_string(), lambda.to_string(), (lambda / 2).to_string()];
                t.row(head.into_iter().chain(y.iter().map(ToString::to_string)));
            }
            Report::new(&m, t)
        }),
    }
}

fn theory(cmd: &TheoryCmd) -> Reports {
    match cmd {
        TheoryCmd::Predict { h, k, h1 } => {
            let size = predicted_size(*h, *k, *h1)?;
            let mut t = Table::new("h,k,h1,predicted_size");
            t.row([h.to_string(), k.to_string(), h1.to_string(), size.to_string()]);
            single(Report::new(&PredictOutput { h: *h, k: *k, h1: *h1, predicted_size: size }, t)?)
        }
        TheoryCmd::Verify { input, horizon } => per_set(input, |raw| {
            let r = verify_main_theorem_with_horizon(&to_integer_set(raw)?, *horizon)?;
            let mut t = Table::new("h,brute_size,predicted_size,match");
            for row in &r.per_h {
                t.row([row.h.to_string(), row.brute_size.to_string(), row.predicted_size.to_string(), row.matches.to_string()]);
            }
            Report::new(&r, t)
        }),
        TheoryCmd::ConstructLemma { a, b, k } => {
            let set: BigIntegerSet = construct_lemma_set(*a, *b, *k)?;
            single(Report::new(&set, element_table(&set))?)
        }
        TheoryCmd::ConstructCute { b } => {
            let set: BigIntegerSet = construct_cute_set(*b)?;
            single(Report::new(&set, element_table(&set))?)
        }
        TheoryCmd::Extremes { h, k } => {
            let e = extreme_and_realizable::<BigInt>(*h, *k)?;
            let mut t = Table::new("size,a,b,witness");
            t.row([e.min_size.to_string(), String::new(), String::new(), "arithmetic progression".into()]);
            for r in &e.realizable {
                t.row([r.size.to_string(), r.a.to_string(), r.b.to_string(), r.witness.to_string()]);
            }
            single(Report::new(&e, t)?)
        }
    }
}

fn types(cmd: &TypesCmd) -> Reports {
    match cmd {
        TypesCmd::Type { input, h, product } => per_set(input, |raw| {
            let partition = if *product {
                product_type(&to_integer_set(raw)?, *h)?
            } else if raw.iter().all(|x| x.is_integer()) {
                h_type(&to_integer_set(raw)?, *h)?
            } else {
                h_type(&to_rational_set(raw)?, *h)?
            };
            let t = type_table(&partition)?;
            Report::new(&partition, t)
        }),
        TypesCmd::Separation { input, h } => per_set(input, |raw| {
            let set = to_rational_set(raw)?;
            let sep = separation(&set, *h)?;
            let mut t = Table::new("h,separation");
            t.row([h.to_string(), sep.to_string()]);
            Report::new(&SeparationOutput { set, h: *h, separation: sep }, t)
        }),
        TypesCmd::Embed { input, h } => per_set(input, |raw| {
            let (_, trace) = embed_real_to_integers(&to_rational_set(raw)?, *h)?;
            let mut t = Table::new("element,epsilon");
            for (a, e) in trace.result.elements().iter().zip(&trace.epsilons) {
                t.row([a.to_string(), e.to_string()]);
            }
            Report::new(&trace, t)
        }),
        TypesCmd::ToProduct { input } => per_set(input, |raw| {
            let set = to_integer_set(raw)?;
            let out = sum_to_product(&set)?;
            let t = element_table(&out);
            Report::new(&TransportOutput { input: set, h: None, output: out }, t)
        }),
        TypesCmd::ToSum { input, h } => per_set(input, |raw| {
            let set = to_integer_set(raw)?;
            let out = product_to_sum(&set, *h)?;
            let t = element_table(&out);
            Report::new(&TransportOutput { input: set, h: Some(*h), output: out }, t)
        }),
    }
}

fn experiment(cmd: &ExperimentCmd) -> Reports {
    match cmd {
        ExperimentCmd::Random { n, k, h, samples, seed, parallel } => {
            let config = ExperimentConfig { n: *n, k: *k, h: *h, samples: *samples, seed: *seed, workers: parallel.workers };
            single(random_report(&random_subset_experiment(&config)?)?)
        }
        ExperimentCmd::Scan { n, k, h, parallel } => {
            let config = ExperimentConfig { n: *n, k: *k, h: *h, samples: 0, seed: 0, workers: parallel.workers };
            single(random_report(&random_subset_experiment(&config)?)?)
        }
        ExperimentCmd::MinimaStats { n, k, samples, seed, cap, parallel } => {
            let config = MinimaConfig { n: *n, k: *k, samples: *samples, seed: *seed, cap: *cap, workers: parallel.workers };
            let s = minima_statistics(&config)?;
            let mut t = Table::new("minimum,value,count,proportion");
            for (name, hist) in [("h1", &s.h1_histogram), ("h2", &s.h2_histogram)] {
                for row in histogram_table("value", hist).rows {
                    t.rows.push(format!("{name},{row}"));
                }
            }
            single(Report::new(&s, t)?)
        }
        ExperimentCmd::TypeCensus { n, k, h, parallel } => {
            let census = type_census_with(*n, *k, *h, parallel.workers, DEFAULT_EXHAUSTIVE_BUDGET)?;
            let mut t = Table::new("representative,class_count,multiplicity");
            for e in &census.types {
                t.row([e.representative.to_string(), e.class_count.to_string(), e.multiplicity.to_string()]);
            }
            single(Report::new(&census, t)?)
        }
    }
}
