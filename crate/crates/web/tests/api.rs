use runlaw_web::{distribution_json, dna_json, waiting_json, MAX_N};
use serde_json::Value;

fn parse(s: String) -> Value {
    serde_json::from_str(&s).unwrap()
}

#[test]
fn distribution_rows() {
    let v = parse(distribution_json("1:1..1,2:1..1", "1/2,1/2", 4, 6).unwrap());
    let exact: Vec<&str> =
        v["rows"].as_array().unwrap().iter().map(|r| r["probability_exact"].as_str().unwrap()).collect();
    assert_eq!(exact, ["3/4", "3/16", "1/16"]);
    assert_eq!(v["mean"], "5/16");
}

#[test]
fn waiting_table() {
    let v = parse(waiting_json("1:1..inf,2:1..inf", "0.5,0.5", 1, 4, 6).unwrap());
    assert_eq!(v["table"]["mean_exact"], "4/1");
    assert_eq!(v["table"]["rows"][4]["probability_exact"], "3/16");
}

#[test]
fn dna_from_pasted_fasta() {
    let v = parse(dna_json(">a\nACGGTA\nTTGCA\n>b\nacgt\n", "ACGGT", "exactly", 30, 1, 4).unwrap());
    assert_eq!(v["records"], 2);
    assert_eq!(v["report"]["literal"], "ACGGT");
    assert_eq!(v["probs"].as_array().unwrap().len(), 4);
}

#[test]
fn errors_are_messages() {
    assert!(distribution_json("1:1..1", "1", 3, 6).is_err());
    assert!(distribution_json("1:1..1,2:1..1", "1/2,1/2", MAX_N + 1, 6).is_err());
    assert!(waiting_json("1:1..1,2:1..1", "1/2,1/2", 0, 5, 6).is_err());
    assert!(dna_json("", "ACGT", "exactly", 10, 1, 6).is_err());
    assert!(dna_json(">x\nACGT\n", "ACGT", "sometimes", 10, 1, 6).is_err());
}
