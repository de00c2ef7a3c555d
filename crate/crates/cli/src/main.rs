//! `freer-chor`: run the bundled choreographies, in one process or one
//! role per process over TCP, and print static analyses of their endpoint
//! projections.

use std::collections::BTreeMap;
use std::path::PathBuf;
use std::process::ExitCode;
use std::sync::Arc;
use std::time::Duration;

use anyhow::Context;
use clap::{Parser, Subcommand, ValueEnum};
use freer_arrows::arrow::StoreSnapshot;
use freer_arrows::choreo::{self, participants, Choreography};
use freer_arrows::effects::fixtures;
use freer_arrows::network::{
    broadcast_targets, collect, envs_with_scripts, epp, partners, run_endpoint, Cluster, Endpoint,
    EndpointConfig, TcpTransport,
};
use freer_arrows::prelude::*;
use serde_json::{json, Value};

#[derive(Parser)]
#[command(name = "freer-chor", version, about = "Run and analyze choreographies")]
#[command(arg_required_else_help = true)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a choreography.
    Run(RunArgs),
    /// Print the static analysis of one location's endpoint program, or the
    /// stages of a web-service fixture.
    Analyze {
        name: String,
        role: Option<String>,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// List the available fixtures.
    List {
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
}

#[derive(clap::Args)]
struct RunArgs {
    #[arg(long)]
    choreography: String,
    #[arg(long, value_enum, default_value_t = TransportKind::Mem)]
    transport: TransportKind,
    /// Location to run (tcp only).
    #[arg(long)]
    role: Option<String>,
    /// Endpoint address file (tcp only).
    #[arg(long)]
    config: Option<PathBuf>,
    /// One input line for a location, as `location=line`. Repeatable.
    #[arg(long = "script", value_name = "LOC=LINE")]
    scripts: Vec<String>,
    /// A newline-separated input file for a location, as `location=path`.
    #[arg(long = "script-file", value_name = "LOC=PATH")]
    script_files: Vec<String>,
    #[arg(long, default_value_t = 1)]
    rounds: usize,
    /// Receive timeout in milliseconds.
    #[arg(long, default_value_t = 5000)]
    timeout_ms: u64,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum TransportKind {
    Mem,
    Tcp,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

/// Failures the user can fix by changing the command line.
#[derive(Debug)]
struct Usage(String);

impl std::fmt::Display for Usage {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for Usage {}

fn usage(msg: impl Into<String>) -> anyhow::Error {
    anyhow::Error::new(Usage(msg.into()))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Run(args) => run(&args),
        Command::Analyze { name, role, format } => analyze(&name, role.as_deref(), format),
        Command::List { format } => list(format),
    };
    match result {
        Ok(out) => {
            print!("{out}");
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            if e.is::<Usage>() {
                ExitCode::from(2)
            } else {
                ExitCode::from(1)
            }
        }
    }
}

fn choreography(name: &str) -> anyhow::Result<Choreography<(), Located<String>>> {
    choreo::by_name(name).ok_or_else(|| usage(format!("unknown choreography {name:?}")))
}

fn location(name: &str) -> anyhow::Result<Location> {
    Location::new(name).map_err(|e| usage(e.to_string()))
}

fn parse_scripts(args: &RunArgs) -> anyhow::Result<BTreeMap<Location, Vec<String>>> {
    let mut scripts: BTreeMap<Location, Vec<String>> = BTreeMap::new();
    for s in &args.scripts {
        let (l, line) = s
            .split_once('=')
            .ok_or_else(|| usage(format!("--script needs LOC=LINE, got {s:?}")))?;
        scripts
            .entry(location(l)?)
            .or_default()
            .push(line.to_owned());
    }
    for s in &args.script_files {
        let (l, path) = s
            .split_once('=')
            .ok_or_else(|| usage(format!("--script-file needs LOC=PATH, got {s:?}")))?;
        let text = std::fs::read_to_string(path).with_context(|| format!("reading {path}"))?;
        scripts
            .entry(location(l)?)
            .or_default()
            .extend(text.lines().map(str::to_owned));
    }
    Ok(scripts)
}

fn run(args: &RunArgs) -> anyhow::Result<String> {
    let c = choreography(&args.choreography)?;
    let scripts = parse_scripts(args)?;
    let timeout = Duration::from_millis(args.timeout_ms);
    match args.transport {
        TransportKind::Mem => {
            let envs = envs_with_scripts(participants(&c), &scripts);
            let cluster = Cluster::new(&c, envs, timeout)?;
            let mut rounds = Vec::new();
            for _ in 0..args.rounds {
                rounds.push(cluster.round(())?);
            }
            Ok(report(args.format, &rounds, &cluster.stores()))
        }
        TransportKind::Tcp => {
            let role = args
                .role
                .as_deref()
                .ok_or_else(|| usage("--transport tcp needs --role"))?;
            let role = location(role)?;
            if !participants(&c).contains(&role) {
                return Err(usage(format!(
                    "{role} does not take part in {}",
                    args.choreography
                )));
            }
            let path = args
                .config
                .as_ref()
                .ok_or_else(|| usage("--transport tcp needs --config"))?;
            let config = EndpointConfig::load(path)?;
            let transport = TcpTransport::bind(config, role.clone())?.with_recv_timeout(timeout);
            let endpoint = Endpoint::new(role.clone(), Arc::new(transport))?;
            let env = HostEnv::new(role.clone());
            env.push_script(scripts.get(&role).cloned().unwrap_or_default());
            let program = epp(&c, &role);
            let mut rounds = Vec::new();
            for _ in 0..args.rounds {
                let out = run_endpoint(&program, &endpoint, &env, ())?;
                rounds.push(BTreeMap::from([(role.clone(), out)]));
            }
            Ok(report(
                args.format,
                &rounds,
                &BTreeMap::from([(role, env.stores())]),
            ))
        }
    }
}

fn store_text(s: &StoreSnapshot) -> String {
    let entries: Vec<String> = s
        .values()
        .flatten()
        .map(|(k, v)| format!("{k}: {v}"))
        .collect();
    format!("{{{}}}", entries.join(", "))
}

fn report(
    format: Format,
    rounds: &[BTreeMap<Location, Located<String>>],
    stores: &BTreeMap<Location, StoreSnapshot>,
) -> String {
    let present = |out: &BTreeMap<Location, Located<String>>| -> Vec<(Location, String)> {
        out.iter()
            .filter_map(|(l, v)| v.clone().unwrap_at(l).ok().map(|s| (l.clone(), s)))
            .collect()
    };
    match format {
        Format::Text => {
            let mut text = String::new();
            for out in rounds {
                for (l, s) in present(out) {
                    text.push_str(&format!("{l}: {s:?}\n"));
                }
            }
            for (l, s) in stores.iter().filter(|(_, s)| !s.is_empty()) {
                text.push_str(&format!("{l}: {}\n", store_text(s)));
            }
            text
        }
        Format::Json => {
            let outputs: Vec<Value> = rounds
                .iter()
                .map(|out| {
                    let m: serde_json::Map<String, Value> = present(out)
                        .into_iter()
                        .map(|(l, s)| (l.to_string(), json!(s)))
                        .collect();
                    Value::Object(m)
                })
                .collect();
            let stores: serde_json::Map<String, Value> = stores
                .iter()
                .map(|(l, s)| (l.to_string(), json!(s)))
                .collect();
            format!("{}\n", json!({ "outputs": outputs, "stores": stores }))
        }
    }
}

fn names(ls: impl IntoIterator<Item = Location>) -> Vec<String> {
    ls.into_iter().map(|l| l.to_string()).collect()
}

fn analyze(name: &str, role: Option<&str>, format: Format) -> anyhow::Result<String> {
    if let Some((count, stages)) = fixtures::describe(name) {
        return Ok(match format {
            Format::Text => format!("effect_count: {count}\n{stages}\n"),
            Format::Json => {
                let stages: Vec<&str> = stages.lines().collect();
                format!("{}\n", json!({ "effect_count": count, "stages": stages }))
            }
        });
    }
    let c = choreography(name)?;
    let role = role.ok_or_else(|| usage(format!("analyze {name} needs a role")))?;
    let role = location(role)?;
    if !participants(&c).contains(&role) {
        return Err(usage(format!("unknown role {role} for {name}")));
    }
    let p = epp(&c, &role);
    let events: Vec<String> = collect(&p).iter().map(ToString::to_string).collect();
    let partners = names(partners(&p));
    let targets: Vec<Vec<String>> = broadcast_targets(&p).into_iter().map(names).collect();
    Ok(match format {
        Format::Text => {
            let sets: Vec<String> = targets
                .iter()
                .map(|t| format!("{{{}}}", t.join(", ")))
                .collect();
            format!(
                "effect_count: {}\nevents: [{}]\npartners: {{{}}}\nbroadcast_targets: [{}]\n",
                p.count(),
                events.join(", "),
                partners.join(", "),
                sets.join(", ")
            )
        }
        Format::Json => format!(
            "{}\n",
            json!({
                "effect_count": p.count(),
                "events": events,
                "partners": partners,
                "broadcast_targets": targets,
            })
        ),
    })
}

fn list(format: Format) -> anyhow::Result<String> {
    let mut chor = Vec::new();
    for name in choreo::CHOREOGRAPHIES {
        chor.push((name, names(participants(&choreography(name)?))));
    }
    Ok(match format {
        Format::Text => {
            let mut text = String::new();
            for (name, ps) in &chor {
                text.push_str(&format!("{name} {{{}}}\n", ps.join(", ")));
            }
            for name in fixtures::FIXTURE_NAMES {
                text.push_str(&format!("{name} (web)\n"));
            }
            text
        }
        Format::Json => {
            let chor: serde_json::Map<String, Value> = chor
                .into_iter()
                .map(|(n, ps)| (n.to_owned(), json!(ps)))
                .collect();
            format!(
                "{}\n",
                json!({ "choreographies": chor, "web": fixtures::FIXTURE_NAMES })
            )
        }
    })
}
