use std::process::{Command, Output};

use serde_json::{json, Value};

fn cli(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_freer-chor"))
        .args(args)
        .output()
        .expect("spawn")
}

fn stdout(args: &[&str]) -> String {
    let out = cli(args);
    assert!(
        out.status.success(),
        "{args:?}: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).unwrap()
}

fn code(args: &[&str]) -> i32 {
    cli(args).status.code().unwrap()
}

fn json_out(args: &[&str]) -> Value {
    serde_json::from_str(&stdout(args)).unwrap()
}

#[test]
fn list_names_everything() {
    assert_eq!(
        stdout(&["list"]),
        "echo {client, server}\nkvs {backup, client, primary}\necho_ws (web)\nforward (web)\nforwardIf (web)\n"
    );
    assert_eq!(
        json_out(&["list", "--format", "json"]),
        json!({
            "choreographies": {"echo": ["client", "server"], "kvs": ["backup", "client", "primary"]},
            "web": ["echo_ws", "forward", "forwardIf"],
        })
    );
}

#[test]
fn analyze_endpoints() {
    assert_eq!(
        stdout(&["analyze", "echo", "client"]),
        "effect_count: 3\nevents: [LocalStep, Sent(server), Received(server)]\npartners: {server}\nbroadcast_targets: []\n"
    );
    assert_eq!(
        json_out(&["analyze", "kvs", "primary", "--format", "json"]),
        json!({
            "effect_count": 6,
            "events": ["Received(client)", "LocalStep", "LocalStep", "Broadcast({backup})", "Sent(backup)", "Sent(client)"],
            "partners": ["backup", "client"],
            "broadcast_targets": [["backup"]],
        })
    );
    let backup = json_out(&["analyze", "kvs", "backup", "--format", "json"]);
    assert_eq!(
        backup["events"],
        json!(["Received(primary)", "Received(primary)", "LocalStep"])
    );
}

#[test]
fn analyze_web_fixtures() {
    assert_eq!(
        stdout(&["analyze", "echo_ws"]),
        "effect_count: 2\nStage0: WsGet(u1, [])\nStage1: WsPost(u2, [])\nTerminal\n"
    );
    let v = json_out(&["analyze", "forwardIf", "--format", "json"]);
    assert_eq!(v["effect_count"], 3);
    assert_eq!(v["stages"].as_array().unwrap().len(), 4);
    assert_eq!(
        json_out(&["analyze", "forward", "--format", "json"])["effect_count"],
        3
    );
}

#[test]
fn run_echo_and_kvs() {
    assert_eq!(
        stdout(&["run", "--choreography", "echo", "--script", "client=hello"]),
        "client: \"hello\"\n"
    );
    let kvs = [
        "run",
        "--choreography",
        "kvs",
        "--script",
        "client=Put k v",
        "--script",
        "client=Get k",
        "--rounds",
        "2",
    ];
    assert_eq!(
        stdout(&kvs),
        "client: \"Ack\"\nclient: \"v\"\nbackup: {k: v}\nprimary: {k: v}\n"
    );
    let mut as_json = kvs.to_vec();
    as_json.extend(["--format", "json"]);
    assert_eq!(
        json_out(&as_json),
        json!({
            "outputs": [{"client": "Ack"}, {"client": "v"}],
            "stores": {"backup": {"kv": {"k": "v"}}, "client": {}, "primary": {"kv": {"k": "v"}}},
        })
    );
}

#[test]
fn script_files_are_read_line_by_line() {
    let path = std::env::temp_dir().join(format!("freer-chor-script-{}.txt", std::process::id()));
    std::fs::write(&path, "Put a 1\nPut b 2\nGet a\n").unwrap();
    let arg = format!("client={}", path.display());
    let out = stdout(&[
        "run",
        "--choreography",
        "kvs",
        "--script-file",
        &arg,
        "--rounds",
        "3",
    ]);
    std::fs::remove_file(&path).unwrap();
    assert_eq!(out, "client: \"Ack\"\nclient: \"Ack\"\nclient: \"1\"\nbackup: {a: 1, b: 2}\nprimary: {a: 1, b: 2}\n");
}

#[test]
fn in_memory_runs_are_deterministic() {
    let args = [
        "run",
        "--choreography",
        "kvs",
        "--script",
        "client=Put k v",
        "--script",
        "client=Get k",
        "--rounds",
        "2",
    ];
    let first = stdout(&args);
    for _ in 0..5 {
        assert_eq!(stdout(&args), first);
    }
}

#[test]
fn exit_codes() {
    assert_eq!(code(&[]), 2);
    assert_eq!(code(&["run", "--choreography", "nope"]), 2);
    assert_eq!(code(&["analyze", "kvs", "nobody"]), 2);
    assert_eq!(code(&["analyze", "kvs"]), 2);
    assert_eq!(
        code(&[
            "run",
            "--choreography",
            "echo",
            "--script",
            "no-equals-sign"
        ]),
        2
    );
    assert_eq!(
        code(&["run", "--choreography", "echo", "--transport", "tcp"]),
        2
    );
    assert_eq!(
        code(&[
            "run",
            "--choreography",
            "echo",
            "--transport",
            "tcp",
            "--role",
            "server"
        ]),
        2
    );
    // Running out of input is a runtime failure.
    assert_eq!(code(&["run", "--choreography", "echo"]), 1);
    assert_eq!(
        code(&[
            "run",
            "--choreography",
            "echo",
            "--transport",
            "tcp",
            "--role",
            "client",
            "--config",
            "/nonexistent.toml"
        ]),
        1
    );
}
