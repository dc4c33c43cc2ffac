//! Batch CLI: reads one JSON config, runs one command, emits JSON or CSV.
//!
//! Exit codes: 0 success, 1 check failure, 2 config error.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, ValueEnum};
use serde_json::{json, Value};

use wallcross::coeff::{s_coeff, u_coeff};
use wallcross::cone::{beta_box, decompositions, NumClass};
use wallcross::config::RunConfig;
use wallcross::error::{Error, Result};
use wallcross::hall::{
    delta_from_eps, eps_from_delta, invert_delta, transform_delta, transform_eps, GeneratorSet,
    HallExpr, Sym,
};
use wallcross::integrate::{l_from_pn_window, l_wallcross, TableKind};
use wallcross::rat::{fmt_rat, rat_int};
use wallcross::series::{expan_build, Coef};
use wallcross::stability::{walls, StabilityParam};

#[derive(Parser)]
#[command(name = "wallcross", about = "Exact wall-crossing calculus for stable-pair invariants")]
struct Cli {
    /// Path to the JSON run configuration.
    #[arg(long)]
    config: PathBuf,
    /// Command to run.
    #[arg(long, value_enum)]
    command: Command,
    /// Directory for output artifacts; stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Command {
    CoeffS,
    CoeffU,
    Decomp,
    Walls,
    HallVerify,
    Transform,
    Series,
    Verify,
    Selftest,
}

impl Command {
    fn name(self) -> &'static str {
        match self {
            Command::CoeffS => "coeff-s",
            Command::CoeffU => "coeff-u",
            Command::Decomp => "decomp",
            Command::Walls => "walls",
            Command::HallVerify => "hall-verify",
            Command::Transform => "transform",
            Command::Series => "series",
            Command::Verify => "verify",
            Command::Selftest => "selftest",
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

/// One command's output: a JSON value and a CSV rendering of the same data.
struct Artifact {
    json: Value,
    csv: String,
    /// False when the command ran but a verification failed.
    checks_ok: bool,
}

fn class_json(c: &NumClass) -> Value {
    json!({ "r": c.r, "beta": c.beta, "n": c.n })
}

fn beta_csv(b: &[i64]) -> String {
    b.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(" ")
}

fn scalar_artifact(command: Command, value: String) -> Artifact {
    Artifact {
        json: json!({ "command": command.name(), "value": value }),
        csv: format!("value\n{value}\n"),
        checks_ok: true,
    }
}

fn run_coeff(cfg: &RunConfig, command: Command) -> Result<Artifact> {
    let model = cfg.model()?;
    let tuple = cfg.tuple()?;
    let k = cfg.k()?;
    let k_prime = cfg
        .k_prime()
        .unwrap_or_else(|_| StabilityParam::new(rat_int(0)));
    let value = match command {
        Command::CoeffS => s_coeff(&tuple, &k, &k_prime, &model)?.to_string(),
        _ => fmt_rat(&u_coeff(&tuple, &k, &k_prime, &model)?),
    };
    Ok(scalar_artifact(command, value))
}

fn run_decomp(cfg: &RunConfig) -> Result<Artifact> {
    let model = cfg.model()?;
    let v = cfg.class()?;
    let k = cfg.k()?;
    let decs = decompositions(&v, &k, &model)?;
    let mut csv = String::from("tuple,part,r,beta,n\n");
    for (t, tuple) in decs.iter().enumerate() {
        for (p, part) in tuple.iter().enumerate() {
            csv.push_str(&format!("{t},{p},{};{};{}\n", part.r, beta_csv(&part.beta), part.n));
        }
    }
    let tuples: Vec<Value> = decs
        .iter()
        .map(|t| Value::Array(t.iter().map(class_json).collect()))
        .collect();
    Ok(Artifact {
        json: json!({
            "command": "decomp",
            "class": class_json(&v),
            "k": fmt_rat(k.value()),
            "count": decs.len(),
            "decompositions": tuples,
        }),
        csv,
        checks_ok: true,
    })
}

fn run_walls(cfg: &RunConfig) -> Result<Artifact> {
    let model = cfg.model()?;
    let beta = cfg.beta()?;
    let ws = walls(&beta, &model)?;
    let denominators: Vec<i64> = ws.denominators().iter().copied().collect();
    let in_range = ws.walls_in(&rat_int(-3), &rat_int(0));
    let mut rows = Vec::new();
    let mut csv = String::from("wall,sample_below,sample_above\n");
    for k0 in &in_range {
        let (lo, hi) = ws.chamber_samples(k0)?;
        csv.push_str(&format!("{},{},{}\n", fmt_rat(k0), fmt_rat(&lo), fmt_rat(&hi)));
        rows.push(json!({
            "wall": fmt_rat(k0),
            "sample_below": fmt_rat(&lo),
            "sample_above": fmt_rat(&hi),
        }));
    }
    Ok(Artifact {
        json: json!({
            "command": "walls",
            "beta": beta,
            "denominators": denominators,
            "walls_in_minus3_0": rows,
        }),
        csv: format!("denominators,{}\n{csv}", denominators.iter().map(|d| d.to_string()).collect::<Vec<_>>().join(" ")),
        checks_ok: true,
    })
}

fn is_word(expr: &HallExpr, sym: Sym) -> bool {
    *expr == HallExpr::word(vec![sym], rat_int(1))
}

fn run_hall_verify(cfg: &RunConfig) -> Result<Artifact> {
    let model = cfg.model()?;
    let v = cfg.class()?;
    let k = cfg.k()?;
    let k_prime = cfg.k_prime()?;
    let max_len = cfg.hall.as_ref().map_or(6, |h| h.max_len);
    let gens = GeneratorSet::from_decompositions(&v, &k, &model, max_len)?;
    let mut checks = Vec::new();

    let eps = eps_from_delta(&v, &gens, &k, &model)?;
    let back = eps.substitute(&gens, &mut |sym| {
        Ok(Some(delta_from_eps(&sym.class, &gens, &k, &model)?))
    })?;
    checks.push(("eps-delta round trip", is_word(&back, Sym::eps(v.clone(), &k))));

    let inverted = invert_delta(&v, &gens, &k, &k_prime, &model)?;
    let expanded = inverted.substitute(&gens, &mut |sym| {
        Ok(Some(transform_delta(&sym.class, &gens, &k, &k_prime, &model)?))
    })?;
    checks.push((
        "transform-invert round trip",
        is_word(&expanded, Sym::delta(v.clone(), &k)),
    ));

    let same = transform_eps(&v, &gens, &k, &k, &model)?;
    checks.push((
        "equal-parameter transform is the identity",
        is_word(&same, Sym::eps(v.clone(), &k)),
    ));

    let all_ok = checks.iter().all(|(_, ok)| *ok);
    let mut csv = String::from("check,result\n");
    let mut rows = Vec::new();
    for (name, ok) in &checks {
        let mark = if *ok { "pass" } else { "FAIL" };
        csv.push_str(&format!("{name},{mark}\n"));
        rows.push(json!({ "check": name, "result": mark }));
    }
    Ok(Artifact {
        json: json!({
            "command": "hall-verify",
            "class": class_json(&v),
            "checks": rows,
            "pass": all_ok,
        }),
        csv,
        checks_ok: all_ok,
    })
}

fn table_rows(table: &std::collections::BTreeMap<(Vec<i64>, i64), wallcross::rat::Rat>) -> (Vec<Value>, String) {
    let mut rows = Vec::new();
    let mut csv = String::from("beta,n,value\n");
    for ((beta, n), value) in table {
        csv.push_str(&format!("{},{n},{}\n", beta_csv(beta), fmt_rat(value)));
        rows.push(json!({ "beta": beta, "n": n, "value": fmt_rat(value) }));
    }
    (rows, csv)
}

fn run_transform(cfg: &RunConfig) -> Result<Artifact> {
    let model = cfg.model()?;
    let cutoff = cfg.beta_cutoff()?;
    let (n_lo, n_hi) = cfg.q_window()?;
    let n_tab = cfg.n_table(&model)?;
    let mut out = json!({ "command": "transform" });
    let mut csv = String::new();
    let mut produced = false;
    if cfg.tables.as_ref().and_then(|t| t.l.as_ref()).is_some() {
        let l_tab = cfg.window_table(TableKind::L)?;
        let k = cfg.k()?;
        let mut table = std::collections::BTreeMap::new();
        for beta in beta_box(&cutoff) {
            for n in n_lo..=n_hi {
                let v = l_wallcross(n, &beta, &k, &l_tab, &n_tab, &model)?;
                if v != rat_int(0) {
                    table.insert((beta.clone(), n), v);
                }
            }
        }
        let (rows, section) = table_rows(&table);
        out["l_wallcross"] = Value::Array(rows);
        csv.push_str("l_wallcross\n");
        csv.push_str(&section);
        produced = true;
    }
    if cfg.tables.as_ref().and_then(|t| t.p.as_ref()).is_some() {
        let p_tab = cfg.window_table(TableKind::P)?;
        let table = l_from_pn_window(&cutoff, n_lo, n_hi, &p_tab, &n_tab, &model)?;
        let (rows, section) = table_rows(&table);
        out["l_from_pn"] = Value::Array(rows);
        csv.push_str("l_from_pn\n");
        csv.push_str(&section);
        produced = true;
    }
    if !produced {
        return Err(Error::Config(
            "field `tables.l` (with `k`) or `tables.p` is required for `transform`".into(),
        ));
    }
    Ok(Artifact { json: out, csv, checks_ok: true })
}

fn run_series(cfg: &RunConfig) -> Result<Artifact> {
    let model = cfg.model()?;
    let cutoff = cfg.beta_cutoff()?;
    let mode = cfg.mode()?;
    let n_tab = cfg.n_table(&model)?;
    let l_tab = cfg.window_table(TableKind::L)?;
    let mut l_series = wallcross::series::ConeSeries::new(cutoff.clone());
    for beta in beta_box(&cutoff) {
        let mut p = wallcross::series::LaurentPoly::zero();
        for (&n, v) in l_tab.windows().get(&beta).into_iter().flatten() {
            p.set(n, v.clone());
        }
        let coef = match mode {
            wallcross::series::SeriesMode::Window { .. } => Coef::Window(p),
            wallcross::series::SeriesMode::Closed => {
                Coef::Closed(wallcross::series::RationalFn::from_laurent(&p))
            }
        };
        l_series.set(beta, coef)?;
    }
    let p_series = expan_build(&l_series, &n_tab, &model, &cutoff, mode)?;
    let mut terms = Vec::new();
    let mut csv = String::new();
    for (beta, coef) in p_series.terms() {
        match coef {
            Coef::Window(p) => {
                let coeffs: Vec<Value> = p
                    .coeffs()
                    .iter()
                    .map(|(e, c)| json!([e, fmt_rat(c)]))
                    .collect();
                for (e, c) in p.coeffs() {
                    csv.push_str(&format!("{},window,{e},{}\n", beta_csv(beta), fmt_rat(c)));
                }
                terms.push(json!({ "beta": beta, "window": coeffs }));
            }
            Coef::Closed(f) => {
                let num: Vec<String> = f.num().coeffs().iter().map(fmt_rat).collect();
                let den: Vec<String> = f.den().coeffs().iter().map(fmt_rat).collect();
                for (i, c) in num.iter().enumerate() {
                    csv.push_str(&format!("{},num,{i},{c}\n", beta_csv(beta)));
                }
                for (i, c) in den.iter().enumerate() {
                    csv.push_str(&format!("{},den,{i},{c}\n", beta_csv(beta)));
                }
                terms.push(json!({ "beta": beta, "num": num, "den": den }));
            }
        }
    }
    Ok(Artifact {
        json: json!({ "command": "series", "terms": terms }),
        csv: format!("beta,kind,exponent,value\n{csv}"),
        checks_ok: true,
    })
}

fn run_verify(cfg: &RunConfig) -> Result<Artifact> {
    let model = cfg.model()?;
    let cutoff = cfg.beta_cutoff()?;
    let window = cfg.q_window()?;
    let n_tab = cfg.n_table(&model)?;
    let p_tab = cfg.window_table(TableKind::P)?;
    let report = wallcross::series::verify_roundtrip(&p_tab, &n_tab, &model, &cutoff, window)?;
    let recovered: Vec<Value> = report
        .recovered_l
        .iter()
        .map(|((b, n), v)| json!({ "beta": b, "n": n, "value": fmt_rat(v) }))
        .collect();
    Ok(Artifact {
        json: json!({
            "command": "verify",
            "pass": report.pass(),
            "report": report.to_string(),
            "recovered_l": recovered,
        }),
        csv: format!("pass\n{}\n{}", report.pass(), report),
        checks_ok: report.pass(),
    })
}

fn run_selftest(cfg: &RunConfig) -> Result<Artifact> {
    let seed = cfg.seed.unwrap_or(0);
    let report = wallcross::selftest::run(seed)?;
    let text = report.render();
    Ok(Artifact {
        json: json!({ "command": "selftest", "pass": report.passed(), "report": text }),
        csv: text.clone(),
        checks_ok: report.passed(),
    })
}

fn dispatch(cfg: &RunConfig, command: Command) -> Result<Artifact> {
    match command {
        Command::CoeffS | Command::CoeffU => run_coeff(cfg, command),
        Command::Decomp => run_decomp(cfg),
        Command::Walls => run_walls(cfg),
        Command::HallVerify => run_hall_verify(cfg),
        Command::Transform => run_transform(cfg),
        Command::Series => run_series(cfg),
        Command::Verify => run_verify(cfg),
        Command::Selftest => run_selftest(cfg),
    }
}

fn emit(cli: &Cli, artifact: &Artifact) -> std::io::Result<()> {
    let (body, ext) = match cli.format {
        Format::Json => (format!("{:#}\n", artifact.json), "json"),
        Format::Csv => (artifact.csv.clone(), "csv"),
    };
    match &cli.out {
        Some(dir) => {
            std::fs::create_dir_all(dir)?;
            let path = dir.join(format!("{}.{ext}", cli.command.name()));
            std::fs::write(path, body)
        }
        None => {
            print!("{body}");
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let cfg = match RunConfig::from_path(&cli.config) {
        Ok(cfg) => cfg,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };
    match dispatch(&cfg, cli.command) {
        Ok(artifact) => {
            if let Err(e) = emit(&cli, &artifact) {
                eprintln!("error: {e}");
                return ExitCode::from(2);
            }
            if artifact.checks_ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
