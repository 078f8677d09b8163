//! The golden rows of GADGETS.md must match the encoder.

use polymu::fixed_sig::{gadget_path, Datum};

fn datum(row: &str) -> Datum {
    let mut words = row.split_whitespace();
    let kind = words.next().unwrap();
    let arg = |w: Option<&str>| -> usize { w.unwrap().split('=').nth(1).unwrap().parse().unwrap() };
    let (a, b) = (words.next(), words.next());
    match kind {
        "literal" => Datum::Literal { j: arg(a), i: arg(b) },
        "fixpoint" => Datum::Fixpoint { depth: arg(a) },
        "modality" => Datum::Modality { i: arg(a) },
        "swap" => Datum::Swap { x: arg(a), y: arg(b) },
        "copy" => Datum::Copy {
            from: arg(a),
            to: arg(b),
        },
        other => panic!("unknown datum kind {other}"),
    }
}

#[test]
fn golden_rows_match_gadget_path() {
    let doc = std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/../../GADGETS.md")).unwrap();
    let start = doc.find("<!-- golden:begin -->").unwrap();
    let end = doc.find("<!-- golden:end -->").unwrap();
    let mut rows = 0;
    for line in doc[start..end].lines().skip(3) {
        let cells: Vec<&str> = line.split('|').map(str::trim).filter(|c| !c.is_empty()).collect();
        let [row, k, path] = cells[..] else { continue };
        let k: usize = k.parse().unwrap();
        let want: Vec<bool> = path.trim_matches('`').chars().map(|c| c == '*').collect();
        assert_eq!(gadget_path(datum(row), k), want, "{row} at k={k}");
        rows += 1;
    }
    assert!(rows >= 10, "only {rows} golden rows found");
}
