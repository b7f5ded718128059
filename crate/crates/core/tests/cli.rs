use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use tempfile::TempDir;

const BIN: &str = env!("CARGO_BIN_EXE_eventgraph");

fn data(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("data").join(name)
}

fn run(args: &[&str]) -> Output {
    Command::new(BIN).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn extract_fixture(dir: &Path) -> Output {
    run(&["extract", "--input", data("headlines.tsv").to_str().unwrap(), "--out-dir", dir.to_str().unwrap()])
}

#[test]
fn extract_fixture_writes_all_outputs() {
    let tmp = TempDir::new().unwrap();
    let out = extract_fixture(tmp.path());
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    assert_eq!(stdout(&out).trim(), "records=9 events=9 skipped=0");
    let nt = fs::read_to_string(tmp.path().join("events.nt")).unwrap();
    for class in ["Communication", "Meet", "Murder"] {
        let needle = format!("#singletonPropertyOf> <http://example.org/eventgraph/{class}> .");
        assert_eq!(nt.lines().filter(|l| l.ends_with(&needle)).count(), 3, "{class}");
    }
    assert_eq!(fs::read_to_string(tmp.path().join("skipped.tsv")).unwrap(), "");
    assert!(fs::read_to_string(tmp.path().join("audit.log")).unwrap().contains("no7\tlink\tObama"));
    assert!(!tmp.path().join("events.ttl").exists());
}

#[test]
fn extract_writes_turtle_on_request() {
    let tmp = TempDir::new().unwrap();
    let input = data("headlines.tsv");
    let out = run(&["extract", "--input", input.to_str().unwrap(), "--out-dir", tmp.path().to_str().unwrap(), "--turtle"]);
    assert_eq!(out.status.code(), Some(0));
    let ttl = fs::read_to_string(tmp.path().join("events.ttl")).unwrap();
    assert!(ttl.contains(":Meet_no2\n"));
    assert!(ttl.contains("rdf:singletonPropertyOf :Meet"));
}

#[test]
fn extract_empty_input() {
    let tmp = TempDir::new().unwrap();
    let input = tmp.path().join("empty.tsv");
    fs::write(&input, "").unwrap();
    let out_dir = tmp.path().join("out");
    let out = run(&["extract", "--input", input.to_str().unwrap(), "--out-dir", out_dir.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout(&out).trim(), "records=0 events=0 skipped=0");
    assert_eq!(fs::read_to_string(out_dir.join("events.nt")).unwrap(), "");
}

#[test]
fn extract_with_skips_exits_2() {
    let tmp = TempDir::new().unwrap();
    let input = tmp.path().join("in.tsv");
    fs::write(&input, "a\tCNN\t2016-03-14\tStorms kill three in Virginia\nb\tCNN\t31/2/16\tStorms kill three\nc\tBBC\t2016-03-14\tSunny day in Berlin\n").unwrap();
    let out = run(&["extract", "--input", input.to_str().unwrap(), "--out-dir", tmp.path().to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(stdout(&out).trim(), "records=3 events=1 skipped=2");
    let skipped = fs::read_to_string(tmp.path().join("skipped.tsv")).unwrap();
    let ids: Vec<&str> = skipped.lines().map(|l| l.split('\t').next().unwrap()).collect();
    assert_eq!(ids, ["b", "c"]);
    assert!(skipped.lines().all(|l| l.split('\t').count() == 2));
}

#[test]
fn missing_lexicon_is_fatal_and_writes_nothing() {
    let tmp = TempDir::new().unwrap();
    let out_dir = tmp.path().join("out");
    let input = data("headlines.tsv");
    let out = run(&[
        "extract",
        "--input",
        input.to_str().unwrap(),
        "--lexicon",
        tmp.path().join("missing.tsv").to_str().unwrap(),
        "--out-dir",
        out_dir.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(1));
    assert!(!out_dir.exists());
    assert!(String::from_utf8_lossy(&out.stderr).contains("lexicon"));
}

#[test]
fn bad_config_is_fatal() {
    let tmp = TempDir::new().unwrap();
    let config = tmp.path().join("c.toml");
    fs::write(&config, "[iri]\nbase = \"no-scheme/\"\n").unwrap();
    let input = data("headlines.tsv");
    let out_dir = tmp.path().join("out");
    let out = run(&[
        "extract",
        "--input",
        input.to_str().unwrap(),
        "--config",
        config.to_str().unwrap(),
        "--out-dir",
        out_dir.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(1));
    assert!(!out_dir.exists());
}

#[test]
fn custom_base_iri_from_config() {
    let tmp = TempDir::new().unwrap();
    let config = tmp.path().join("c.toml");
    fs::write(&config, "[iri]\nbase = \"http://news.example/kg#\"\nhas_source = \"publisher\"\n").unwrap();
    let input = data("headlines.tsv");
    let out = run(&[
        "extract",
        "--input",
        input.to_str().unwrap(),
        "--config",
        config.to_str().unwrap(),
        "--out-dir",
        tmp.path().to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let nt = fs::read_to_string(tmp.path().join("events.nt")).unwrap();
    assert!(nt.contains("<http://news.example/kg#Meet_no2> <http://news.example/kg#publisher> <http://news.example/kg#source/CNN> ."));
    let q = run(&["query", "--events", tmp.path().join("events.nt").to_str().unwrap(), "--config", config.to_str().unwrap()]);
    assert_eq!(stdout(&q).lines().count(), 9);
}

#[test]
fn interlink_writes_links() {
    let tmp = TempDir::new().unwrap();
    extract_fixture(tmp.path());
    let events = tmp.path().join("events.nt");
    let out = run(&["interlink", "--events", events.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    // no5 and no8: both Meet on 2016-03-10 from BBC and NYT, sharing Pope Francis
    assert_eq!(stdout(&out).trim(), "sameas=1 related=0");
    let links = fs::read_to_string(tmp.path().join("links.nt")).unwrap();
    assert_eq!(
        links,
        "<http://example.org/eventgraph/Meet_no5> <http://www.w3.org/2002/07/owl#sameAs> <http://example.org/eventgraph/Meet_no8> .\n"
    );
    // an unsatisfiable threshold; same-day reports are not related either (zero time gap)
    let out = run(&["interlink", "--events", events.to_str().unwrap(), "--same-jaccard", "1.01"]);
    assert_eq!(stdout(&out).trim(), "sameas=0 related=0");
}

#[test]
fn interlink_synthetic_duplicates() {
    let tmp = TempDir::new().unwrap();
    let input = tmp.path().join("dup.tsv");
    fs::write(
        &input,
        "a\tCNN\t2016-03-10\tPope Francis meets Patriarch Kirill in Cuba\n\
         b\tBBC\t2016-03-11\tPope Francis meets Kirill in Havana\n\
         c\tNYT\t2016-03-15\tPope Francis visits Mexico\n",
    )
    .unwrap();
    let out = run(&["extract", "--input", input.to_str().unwrap(), "--out-dir", tmp.path().to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let events = tmp.path().join("events.nt");
    let links = tmp.path().join("l.nt");
    let out = run(&["interlink", "--events", events.to_str().unwrap(), "--out", links.to_str().unwrap()]);
    assert_eq!(stdout(&out).trim(), "sameas=1 related=2");
    let out = run(&[
        "interlink",
        "--events",
        events.to_str().unwrap(),
        "--out",
        links.to_str().unwrap(),
        "--same-window-hours",
        "12",
        "--related-horizon-days",
        "1",
    ]);
    assert_eq!(stdout(&out).trim(), "sameas=0 related=1");
}

#[test]
fn interlink_single_event() {
    let tmp = TempDir::new().unwrap();
    let input = tmp.path().join("one.tsv");
    fs::write(&input, "a\tCNN\t2016-03-10\tPope Francis visits Cuba\n").unwrap();
    run(&["extract", "--input", input.to_str().unwrap(), "--out-dir", tmp.path().to_str().unwrap()]);
    let out = run(&["interlink", "--events", tmp.path().join("events.nt").to_str().unwrap()]);
    assert_eq!(stdout(&out).trim(), "sameas=0 related=0");
}

#[test]
fn unparseable_graph() {
    let tmp = TempDir::new().unwrap();
    let bad = tmp.path().join("bad.nt");
    fs::write(&bad, "<http://x/a> <http://x/b> .\n").unwrap();
    for cmd in ["interlink", "query"] {
        let out = run(&[cmd, "--events", bad.to_str().unwrap()]);
        assert_eq!(out.status.code(), Some(1), "{cmd}");
        assert!(String::from_utf8_lossy(&out.stderr).contains("line 1"), "{cmd}");
    }
}

#[test]
fn query_filters() {
    let tmp = TempDir::new().unwrap();
    extract_fixture(tmp.path());
    let events = tmp.path().join("events.nt");
    let ev = events.to_str().unwrap();
    let ids = |o: Output| -> Vec<String> {
        stdout(&o).lines().map(|l| l.split('\t').next().unwrap().rsplit('/').next().unwrap().to_string()).collect()
    };
    assert_eq!(ids(run(&["query", "--events", ev, "--publisher", "BBC", "--publisher", "CNN", "--class", "Murder"])), ["Murder_no3", "Murder_no6"]);
    assert_eq!(ids(run(&["query", "--events", ev, "--class", "Murder", "--location", "Yemen"])), ["Murder_no9"]);
    assert!(ids(run(&["query", "--events", ev, "--publisher", "BBC,CNN", "--class", "Murder", "--location", "Yemen"])).is_empty());
    assert_eq!(ids(run(&["query", "--events", ev])).len(), 9);
    assert_eq!(
        ids(run(&["query", "--events", ev, "--from", "2016-03-14", "--to", "2016-03-16"])),
        ["Communication_no1", "Communication_no4", "Murder_no3"]
    );
    let row = stdout(&run(&["query", "--events", ev, "--class", "Meet", "--publisher", "CNN"]));
    assert_eq!(
        row,
        "http://example.org/eventgraph/Meet_no2\tMeet\tCNN\t2016-02-26\thttp://dbpedia.org/resource/Kevin_Systrom,http://dbpedia.org/resource/Pope_Francis\n"
    );
}

#[test]
fn validate_exit_codes() {
    let status = |name: &str| run(&["validate", data(&format!("models/{name}")).to_str().unwrap()]);
    let lode = status("lode.toml");
    assert_eq!(lode.status.code(), Some(2));
    let text = stdout(&lode);
    assert!(text.contains("R2\tfail"));
    assert!(text.contains("R3\tpass_loosely"));
    assert_eq!(status("eventgraph.toml").status.code(), Some(0));

    let tmp = TempDir::new().unwrap();
    let bad = tmp.path().join("bad.toml");
    fs::write(&bad, "name = \"x\"\nunknown_key = 1\n").unwrap();
    let out = run(&["validate", bad.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("unknown"));
}

#[test]
fn repeated_runs_are_byte_identical() {
    let a = TempDir::new().unwrap();
    let b = TempDir::new().unwrap();
    for dir in [a.path(), b.path()] {
        extract_fixture(dir);
        run(&["interlink", "--events", dir.join("events.nt").to_str().unwrap()]);
    }
    for name in ["events.nt", "links.nt", "audit.log", "skipped.tsv"] {
        assert_eq!(fs::read(a.path().join(name)).unwrap(), fs::read(b.path().join(name)).unwrap(), "{name}");
    }
}
