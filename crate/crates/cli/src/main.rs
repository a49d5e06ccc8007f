//! Command-line front end: reproduction subcommands, Monte Carlo
//! verification, CSV emission, and violation reporting.
//!
//! Exit status: 0 = all checks passed, 1 = a numerical check failed,
//! 2 = usage or parse error.

mod commands;
mod config;

use commands::{
    cmd_bound, cmd_fig1, cmd_fig2, cmd_locc, cmd_montecarlo, cmd_table1,
    cmd_verify_propositions, McKind,
};
use config::RunConfig;

const USAGE: &str = "\
monogamy - multiqubit squared-EoF monogamy toolkit

USAGE:
    monogamy <SUBCOMMAND> [ARGS] [FLAGS]

SUBCOMMANDS:
    verify-propositions          derivative positivity and endpoint checks
    montecarlo <KIND>            inequality sweep; KIND = pure3|pure4|rank2mixed3
    fig1                         GHZ/W mixture indicator curve
    fig2                         cavity-reservoir tau2 surface
    table1 [N ...]               W_N/|1^N> mixture indicator values
    locc                         LOCC non-monotonicity counterexample
    bound <STATE_FILE>           square-sum EoF lower bound for a state file

FLAGS:
    --seed U64          master seed (fallback: MONOGAMY_SEED, then 20140901)
    --samples N         Monte Carlo sample count
    --grid RxC          grid size (fig2) or point count (fig1)
    --out DIR           output directory for CSV files (default .)
    --tol FLOAT         residual tolerance override
    --restarts N        convex-roof restarts (default 32)
    --focus K           focus qubit for `bound` (default 0)
    --config PATH       flat key=value configuration file
";

fn fail_usage(msg: &str) -> ! {
    eprintln!("error: {msg}\n\n{USAGE}");
    std::process::exit(2);
}

fn main() {
    let args: Vec<String> = std::env::args().skip(1).collect();
    if args.is_empty() || args[0] == "--help" || args[0] == "-h" || args[0] == "help" {
        print!("{USAGE}");
        std::process::exit(if args.is_empty() { 2 } else { 0 });
    }

    let subcommand = args[0].clone();
    let mut positional: Vec<String> = Vec::new();
    let mut cfg = RunConfig::default();
    if let Err(e) = cfg.apply_env() {
        fail_usage(&e);
    }

    // collect flags; --config applies immediately so later flags override it
    let mut pending: Vec<(String, String)> = Vec::new();
    let mut it = args[1..].iter();
    while let Some(arg) = it.next() {
        if let Some(key) = arg.strip_prefix("--") {
            let value = match it.next() {
                Some(v) => v.clone(),
                None => fail_usage(&format!("flag --{key} expects a value")),
            };
            if key == "config" {
                if let Err(e) = cfg.apply_config_file(&value) {
                    fail_usage(&e);
                }
            } else {
                pending.push((key.to_string(), value));
            }
        } else {
            positional.push(arg.clone());
        }
    }
    for (key, value) in pending {
        if let Err(e) = cfg.apply_key(&key, &value) {
            fail_usage(&e);
        }
    }

    let outcome = match subcommand.as_str() {
        "verify-propositions" => cmd_verify_propositions(&cfg),
        "montecarlo" => {
            if positional.len() != 1 {
                fail_usage("montecarlo expects exactly one kind argument");
            }
            match McKind::parse(&positional[0]) {
                Ok(kind) => cmd_montecarlo(&kind, &cfg),
                Err(e) => fail_usage(&e),
            }
        }
        "fig1" => cmd_fig1(&cfg),
        "fig2" => cmd_fig2(&cfg),
        "table1" => {
            let mut ns = Vec::new();
            for p in &positional {
                match p.parse::<usize>() {
                    Ok(n) => ns.push(n),
                    Err(_) => fail_usage(&format!("table1 argument `{p}` is not an integer")),
                }
            }
            cmd_table1(&ns, &cfg)
        }
        "locc" => cmd_locc(&cfg),
        "bound" => {
            if positional.len() != 1 {
                fail_usage("bound expects exactly one state file argument");
            }
            cmd_bound(&positional[0], &cfg)
        }
        other => fail_usage(&format!("unknown subcommand `{other}`")),
    };

    match outcome {
        Ok(true) => std::process::exit(0),
        Ok(false) => std::process::exit(1),
        Err(e) => {
            eprintln!("error: {e}");
            std::process::exit(2);
        }
    }
}
