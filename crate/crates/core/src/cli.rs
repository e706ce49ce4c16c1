//! Pipeline orchestration behind the `prym-verifier` binary: run configuration,
//! report assembly, content hashing and the exit-code contract.

use std::ops::RangeInclusive;

use serde::Serialize;
use serde_json::Value;
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::exact::{Field, MERSENNE_61, SECOND_PRIME};
use crate::formulas::{formula_table, formula_tables, to_csv, MAX_GENUS};
use crate::genus5::run_genus5;
use crate::linsys::Verdict;
use crate::planeprym::{prym_parameters, run_prym, verify_claims, PrymRunOptions};

pub const SCHEMA: &str = "prym-verifier/1";
pub const PRIMES_ENV: &str = "PRYM_VERIFIER_PRIMES";

pub const EXIT_PASS: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_FAIL: i32 = 2;
pub const EXIT_INCONCLUSIVE: i32 = 3;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Command {
    Formulas,
    Claims,
    Prym,
    Genus5,
    All,
}

#[derive(Clone, Debug)]
pub struct RunConfig {
    pub command: Command,
    pub genera: RangeInclusive<u32>,
    pub seed: u64,
    pub trials: usize,
    pub primes: Vec<u64>,
    pub point_count: bool,
    pub spot_samples: usize,
    pub verbosity: u8,
}

impl RunConfig {
    pub fn new(command: Command) -> RunConfig {
        RunConfig {
            command,
            genera: 5..=5,
            seed: 1,
            trials: 3,
            primes: vec![MERSENNE_61, SECOND_PRIME],
            point_count: false,
            spot_samples: 200,
            verbosity: 0,
        }
    }

    pub fn validate(&self) -> Result<Vec<Field>> {
        let (lo, hi) = (*self.genera.start(), *self.genera.end());
        if lo < 5 || hi > MAX_GENUS || lo > hi {
            return Err(Error::InvalidConfiguration(format!("genus range {lo}..{hi} must lie within 5..{MAX_GENUS}")));
        }
        if self.trials == 0 {
            return Err(Error::InvalidConfiguration("trials must be at least 1".into()));
        }
        if self.primes.is_empty() {
            return Err(Error::InvalidConfiguration("at least one prime is required".into()));
        }
        self.primes.iter().map(|&p| Field::new(p)).collect()
    }
}

/// `N` or an inclusive range `A..B`.
pub fn parse_genus_range(s: &str) -> Result<RangeInclusive<u32>> {
    let num = |t: &str| t.trim().parse::<u32>().map_err(|_| Error::Parse(format!("bad genus `{t}`")));
    match s.split_once("..") {
        Some((a, b)) => Ok(num(a)?..=num(b.trim_start_matches('='))?),
        None => {
            let g = num(s)?;
            Ok(g..=g)
        }
    }
}

/// Comma-separated primes, as in `--primes` and the environment override.
pub fn parse_primes(s: &str) -> Result<Vec<u64>> {
    s.split(',')
        .filter(|t| !t.trim().is_empty())
        .map(|t| t.trim().parse::<u64>().map_err(|_| Error::Parse(format!("bad prime `{t}`"))))
        .collect()
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ResultEntry {
    pub key: String,
    pub verdict: Verdict,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
    pub body: Value,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Meta {
    pub version: &'static str,
    pub command: Command,
    pub genera: [u32; 2],
    pub primes: Vec<u64>,
    pub seed: u64,
    pub trials: usize,
    pub point_count: bool,
}

/// Run-dependent information kept out of the content hash.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RunInfo {
    pub timestamp_unix: u64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Report {
    pub schema: &'static str,
    pub meta: Meta,
    pub results: Vec<ResultEntry>,
    pub content_hash: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub run_info: Option<RunInfo>,
}

#[derive(Serialize)]
struct Hashed<'a> {
    schema: &'a str,
    meta: &'a Meta,
    results: &'a [ResultEntry],
}

impl Report {
    pub fn verdicts(&self) -> Vec<Verdict> {
        self.results.iter().map(|r| r.verdict).collect()
    }

    pub fn exit_code(&self) -> i32 {
        exit_code(&self.verdicts())
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

/// sha256 of the canonical JSON of schema, meta and results.
pub fn content_hash(meta: &Meta, results: &[ResultEntry]) -> String {
    let bytes = serde_json::to_vec(&Hashed { schema: SCHEMA, meta, results }).expect("report serializes");
    hex::encode(Sha256::digest(&bytes))
}

/// 0 when every verdict passes, 2 on any failure, 3 when only inconclusive
/// verdicts remain; an empty report counts as inconclusive.
pub fn exit_code(verdicts: &[Verdict]) -> i32 {
    if verdicts.contains(&Verdict::Fail) {
        EXIT_FAIL
    } else if verdicts.is_empty() || verdicts.contains(&Verdict::Inconclusive) {
        EXIT_INCONCLUSIVE
    } else {
        EXIT_PASS
    }
}

fn entry<T: Serialize>(key: String, outcome: Result<(Verdict, T)>) -> ResultEntry {
    match outcome {
        Ok((verdict, body)) => ResultEntry {
            key,
            verdict,
            error: None,
            body: serde_json::to_value(body).expect("certificate serializes"),
        },
        // a pipeline that cannot complete has not certified anything
        Err(e) => ResultEntry { key, verdict: Verdict::Fail, error: Some(e.to_string()), body: Value::Null },
    }
}

struct Progress(u8);

impl Progress {
    fn note(&self, msg: &str) {
        if self.0 > 0 {
            eprintln!("prym-verifier: {msg}");
        }
    }
}

fn formulas(cfg: &RunConfig, out: &mut Vec<ResultEntry>) {
    for g in cfg.genera.clone() {
        out.push(entry(
            format!("formulas/g{g:02}"),
            formula_table(g).map(|t| (Verdict::from_flag(t.violations().is_empty()), t)),
        ));
    }
}

fn claims(cfg: &RunConfig, primes: &[Field], out: &mut Vec<ResultEntry>, log: &Progress) {
    for g in cfg.genera.clone() {
        log.note(&format!("claims g = {g}"));
        let certs = prym_parameters(g).and_then(|p| verify_claims(&p, cfg.trials, primes, cfg.seed));
        match certs {
            Ok(certs) => {
                for c in certs {
                    out.push(entry(format!("claims/{}", c.claim), Ok((c.verdict, c.clone()))));
                }
            }
            Err(e) => out.push(entry::<()>(format!("claims/g{g}"), Err(e))),
        }
    }
}

fn prym(cfg: &RunConfig, primes: &[Field], out: &mut Vec<ResultEntry>, log: &Progress) {
    let opts = PrymRunOptions {
        trials: cfg.trials,
        primes: primes.to_vec(),
        spot_samples: cfg.spot_samples,
        point_count: cfg.point_count,
    };
    for g in cfg.genera.clone() {
        log.note(&format!("prym g = {g}"));
        out.push(entry(format!("prym/g{g:02}"), run_prym(g, cfg.seed, &opts).map(|c| (c.verdict, c))));
    }
}

fn genus5(cfg: &RunConfig, primes: &[Field], out: &mut Vec<ResultEntry>, log: &Progress) {
    for &f in primes {
        log.note(&format!("genus5 p = {}", f.modulus()));
        out.push(entry(format!("genus5/p{}", f.modulus()), run_genus5(cfg.seed, f).map(|c| (c.verdict, c))));
    }
}

/// Runs the configured pipelines. Pipeline errors become FAIL entries; only
/// an invalid configuration is returned as an error.
pub fn run(cfg: &RunConfig) -> Result<Report> {
    let primes = cfg.validate()?;
    let log = Progress(cfg.verbosity);
    let mut results = Vec::new();
    match cfg.command {
        Command::Formulas => formulas(cfg, &mut results),
        Command::Claims => claims(cfg, &primes, &mut results, &log),
        Command::Prym => prym(cfg, &primes, &mut results, &log),
        Command::Genus5 => genus5(cfg, &primes, &mut results, &log),
        Command::All => {
            formulas(cfg, &mut results);
            prym(cfg, &primes, &mut results, &log);
            genus5(cfg, &primes, &mut results, &log);
        }
    }
    results.sort_by(|a, b| a.key.cmp(&b.key));
    let meta = Meta {
        version: env!("CARGO_PKG_VERSION"),
        command: cfg.command,
        genera: [*cfg.genera.start(), *cfg.genera.end()],
        primes: cfg.primes.clone(),
        seed: cfg.seed,
        trials: cfg.trials,
        point_count: cfg.point_count,
    };
    let content_hash = content_hash(&meta, &results);
    Ok(Report { schema: SCHEMA, meta, results, content_hash, run_info: None })
}

/// CSV of the formula table over the configured genus range.
pub fn formulas_csv(cfg: &RunConfig) -> Result<String> {
    cfg.validate()?;
    to_csv(&formula_tables(cfg.genera.clone())?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn verdict() -> impl Strategy<Value = Verdict> {
        prop_oneof![Just(Verdict::Pass), Just(Verdict::Fail), Just(Verdict::Inconclusive)]
    }

    proptest! {
        #[test]
        fn exit_code_contract(vs in proptest::collection::vec(verdict(), 0..12)) {
            let code = exit_code(&vs);
            let any_fail = vs.iter().any(|v| *v == Verdict::Fail);
            let all_pass = !vs.is_empty() && vs.iter().all(|v| *v == Verdict::Pass);
            prop_assert_eq!(code == EXIT_FAIL, any_fail);
            prop_assert_eq!(code == EXIT_PASS, all_pass);
            prop_assert_eq!(code == EXIT_INCONCLUSIVE, !any_fail && !all_pass);
            prop_assert_ne!(code, EXIT_USAGE);
        }

        #[test]
        fn planted_failure_dominates(mut vs in proptest::collection::vec(verdict(), 0..12), at in 0usize..12) {
            vs.insert(at.min(vs.len()), Verdict::Fail);
            prop_assert_eq!(exit_code(&vs), EXIT_FAIL);
        }
    }

    #[test]
    fn genus_ranges_parse() {
        assert_eq!(parse_genus_range("5").unwrap(), 5..=5);
        assert_eq!(parse_genus_range("5..12").unwrap(), 5..=12);
        assert_eq!(parse_genus_range("5..=12").unwrap(), 5..=12);
        assert!(parse_genus_range("five").is_err());
        assert_eq!(parse_primes("101, 103").unwrap(), [101, 103]);
    }

    #[test]
    fn resource_guard_and_trials() {
        let mut c = RunConfig::new(Command::Formulas);
        c.genera = 5..=65;
        assert!(c.validate().is_err());
        c.genera = 4..=6;
        assert!(c.validate().is_err());
        c.genera = 5..=64;
        assert!(c.validate().is_ok());
        c.trials = 0;
        assert!(c.validate().is_err());
        c.trials = 1;
        c.primes = vec![15];
        assert_eq!(c.validate().unwrap_err(), Error::InvalidModulus(15));
    }

    #[test]
    fn formulas_report_is_sorted_and_hashed() {
        let mut c = RunConfig::new(Command::Formulas);
        c.genera = 5..=12;
        let r = run(&c).unwrap();
        assert_eq!(r.results.len(), 8);
        assert!(r.results.windows(2).all(|w| w[0].key < w[1].key));
        assert_eq!(r.exit_code(), EXIT_PASS);
        assert_eq!(r.content_hash.len(), 64);
        assert_eq!(r.content_hash, run(&c).unwrap().content_hash);
        assert_eq!(r.results[0].body["dim_rg"], 12);
        c.seed = 2;
        assert_ne!(r.content_hash, run(&c).unwrap().content_hash);
    }

    #[test]
    fn single_prime_claims_are_inconclusive() {
        let mut c = RunConfig::new(Command::Claims);
        c.primes = vec![MERSENNE_61];
        c.trials = 1;
        let r = run(&c).unwrap();
        assert_eq!(r.results.len(), 3);
        assert_eq!(r.exit_code(), EXIT_INCONCLUSIVE);
    }

    #[test]
    fn pipeline_errors_become_failures() {
        // a prime this small cannot host the configuration sampler for g = 7
        let mut c = RunConfig::new(Command::Prym);
        c.genera = 7..=7;
        c.primes = vec![5];
        let r = run(&c).unwrap();
        assert_eq!(r.results[0].verdict, Verdict::Fail);
        assert!(r.results[0].error.is_some());
        assert_eq!(r.exit_code(), EXIT_FAIL);
    }
}
