use std::io::{self, BufRead, Read, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use polarcalc::chains::Options;
use polarcalc::session::{exit_code, parse_program, reports_json, reports_text, Session};
use polarcalc::verify::{run_suite, SUITES};

#[derive(Parser)]
#[command(name = "polarcalc", version, about = "Exact polar chain calculus")]
struct Cli {
    /// Exact Jacobian ranks instead of random probes.
    #[arg(long, global = true)]
    strict: bool,
    #[arg(long, global = true, default_value_t = 0x5eed)]
    seed: u64,
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Run a session file (`-` reads standard input).
    Run {
        file: PathBuf,
        /// Also write the reports as JSON.
        #[arg(long)]
        json: Option<PathBuf>,
    },
    /// Read statements interactively.
    Repl,
    /// Run a verification suite.
    Verify {
        #[arg(long, default_value = "all")]
        suite: String,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let opts = Options { strict: cli.strict, seed: cli.seed, ..Options::default() };
    let code = match cli.command {
        Cmd::Run { file, json } => run(&file, json.as_ref(), opts),
        Cmd::Repl => repl(opts),
        Cmd::Verify { suite } => verify(&suite, cli.seed),
    };
    ExitCode::from(code)
}

fn run(file: &PathBuf, json: Option<&PathBuf>, opts: Options) -> u8 {
    let src = if file.as_os_str() == "-" {
        let mut s = String::new();
        io::stdin().read_to_string(&mut s).map(|_| s)
    } else {
        std::fs::read_to_string(file)
    };
    let src = match src {
        Ok(s) => s,
        Err(e) => {
            eprintln!("error: cannot read {}: {e}", file.display());
            return 1;
        }
    };
    let reports = match Session::new(opts).run_source(&src) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error [{}]: {e}", e.rule());
            return if e.is_parse() { 2 } else { 1 };
        }
    };
    print!("{}", reports_text(&reports));
    if let Some(path) = json {
        if let Err(e) = std::fs::write(path, reports_json(&reports)) {
            eprintln!("error: cannot write {}: {e}", path.display());
            return 1;
        }
    }
    exit_code(&reports) as u8
}

fn repl(opts: Options) -> u8 {
    let mut session = Session::new(opts);
    let mut pending = String::new();
    let mut worst = 0;
    let stdin = io::stdin();
    let prompt = |more: bool| {
        print!("{}", if more { "... " } else { "polarcalc> " });
        let _ = io::stdout().flush();
    };
    prompt(false);
    for line in stdin.lock().lines() {
        let Ok(line) = line else { break };
        pending.push_str(&line);
        pending.push('\n');
        if !pending.trim_end().ends_with(';') {
            prompt(!pending.trim().is_empty());
            continue;
        }
        match parse_program(&pending) {
            Ok(stmts) => {
                for s in &stmts {
                    let r = session.execute(s);
                    println!("{}", r.result);
                    worst = worst.max(exit_code(std::slice::from_ref(&r)));
                }
            }
            Err(e) => {
                println!("error [{}]: {e}", e.rule());
                worst = 2;
            }
        }
        pending.clear();
        prompt(false);
    }
    println!();
    worst as u8
}

fn verify(suite: &str, seed: u64) -> u8 {
    let names: Vec<&str> = if suite == "all" { SUITES.to_vec() } else { vec![suite] };
    let mut code = 0;
    for name in names {
        match run_suite(name, seed) {
            Ok(r) => {
                println!("{}", r.line());
                for f in r.failures.iter().take(5) {
                    println!("  {f}");
                }
                if !r.passed() {
                    code = 3;
                }
            }
            Err(e) => {
                println!("ERROR {name}: {e}");
                code = 1;
            }
        }
    }
    code
}
