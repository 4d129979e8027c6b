use serde_json::{json, Value as Json};
use strongclean_cli::{run, EXIT_OK, EXIT_UNKNOWN, EXIT_USAGE};

fn cli(args: &[&str]) -> (i32, String) {
    let mut full = vec!["strongclean"];
    full.extend_from_slice(args);
    let out = run(full);
    (out.code, if out.stdout.is_empty() { out.stderr } else { out.stdout })
}

fn doc(args: &[&str]) -> (i32, Json) {
    let (code, text) = cli(args);
    (code, serde_json::from_str(&text).unwrap())
}

const ZZ2: &str = r#"{"type":"product","factors":[{"type":"zloc","p":2},{"type":"zloc","p":2}]}"#;

#[test]
fn documented_examples() {
    let (code, d) = doc(&["decide", "--ring", ZZ2, "--poly", "[[2,3],[3,1],[1,1]]", "--companion"]);
    assert_eq!(code, EXIT_OK);
    assert_eq!((d["verdict"].as_str(), d["route"].as_str()), (Some("Yes"), Some("gSRC")));
    assert_eq!(d["certificate"]["gsrc"]["block_count"], 2);

    let (code, d) = doc(&["decide", "--ring", r#"{"type":"zloc","p":2}"#, "--poly", "[2,-1,1]", "--companion"]);
    assert_eq!(code, EXIT_OK);
    assert_eq!(d["verdict"], "No");

    let (code, d) = doc(&["audit", "--ring", r#"{"type":"zmod","n":6}"#, "--degree", "2"]);
    assert_eq!(code, EXIT_OK);
    assert_eq!(d["instances"], 36);
    assert_eq!(d["disagreements"], json!([]));
}

#[test]
fn identical_invocations_are_byte_identical() {
    let cases: [&[&str]; 4] = [
        &["audit", "--ring", r#"{"type":"zmod","n":12}"#, "--degree", "2", "--seed", "3"],
        &["decide", "--ring", r#"{"type":"zmod","n":12}"#, "--poly", "[5,7,1]", "--seed", "11"],
        &["z5-example"],
        &["factor", "--ring", ZZ2, "--poly", "[[2,3],[3,1],[1,1]]"],
    ];
    for args in cases {
        assert_eq!(cli(args), cli(args), "{args:?}");
    }
}

#[test]
fn exit_codes() {
    assert_eq!(cli(&["decide"]).0, EXIT_USAGE);
    assert_eq!(cli(&["frobnicate"]).0, EXIT_USAGE);
    assert_eq!(cli(&["decide", "--ring", "{}", "--degree", "2"]).0, EXIT_USAGE);
    assert_eq!(cli(&["decide", "--ring", r#"{"type":"zmod","n":1}"#, "--degree", "2"]).0, EXIT_USAGE);
    assert_eq!(cli(&["decide", "--ring", r#"{"type":"zloc","p":4}"#, "--degree", "2"]).0, EXIT_USAGE);
    let (code, d) = doc(&["decide", "--ring", r#"{"type":"zloc","p":2}"#, "--degree", "3"]);
    assert_eq!(code, EXIT_UNKNOWN);
    assert_eq!(d["verdict"], "Unknown");
    assert!(d["reason"].is_string());
    assert_eq!(cli(&["--help"]).0, EXIT_OK);
}

#[test]
fn tampered_certificates_fail_verification() {
    let (_, mut d) = doc(&["decide", "--ring", r#"{"type":"zmod","n":8}"#, "--poly", "[2,3,1]", "--companion"]);
    assert_eq!(cli(&["verify", "--certificate", &d.to_string()]).0, EXIT_OK);
    d["certificate"]["strong_clean"]["E"][0][0] = json!([3]);
    assert_eq!(cli(&["verify", "--certificate", &d.to_string()]).0, strongclean_cli::EXIT_VERIFY);
}

#[test]
fn file_indirection_and_timing() {
    let dir = std::env::temp_dir().join(format!("strongclean-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let ring = dir.join("ring.json");
    let matrix = dir.join("matrix.json");
    std::fs::write(&ring, r#"{"type":"zmod","n":6}"#).unwrap();
    std::fs::write(&matrix, "[[1,2],[3,4]]").unwrap();
    let r = format!("@{}", ring.display());
    let m = format!("@{}", matrix.display());
    let (code, d) = doc(&["pi-regular", "--ring", &r, "--matrix", &m]);
    assert_eq!(code, EXIT_OK);
    assert_eq!(d["verdict"], "Yes");
    assert!(d.get("wall_time_ms").is_none());
    let (_, d) = doc(&["--timing", "ring", "--ring", &r]);
    assert!(d["wall_time_ms"].is_u64());
    assert_eq!(d["primitive_idempotents"], json!([3, 4]));
    std::fs::remove_dir_all(dir).unwrap();
}
