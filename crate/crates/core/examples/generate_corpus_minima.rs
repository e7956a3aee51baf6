//! Regenerates `fixtures/corpus_minima.tsv` from the dense-grid ground truth.

use gaussflow::corpus::{format_minima_row, ground_truth, DEFINITIONS, GROUND_TRUTH_GRID};
use gaussflow::Domain;

fn main() {
    let mut out = String::from("# name\tf_min\tminimizers (x or lo:hi, ';'-separated); generated by the generate_corpus_minima example\n");
    for d in DEFINITIONS {
        let domain = Domain::new(d.x_min, d.x_max).expect("valid domain");
        let gt = ground_truth(&d.f, &domain, GROUND_TRUTH_GRID);
        out.push_str(&format_minima_row(d.name, &gt));
        out.push('\n');
    }
    let path = std::path::Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures/corpus_minima.tsv");
    std::fs::write(&path, out).expect("write fixture");
    println!("wrote {}", path.display());
}
