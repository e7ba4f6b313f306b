//! Runs the claims audit and prints the text report; pass `--json` for JSON.

use oneway::audit::{audit_all, AuditConfig};

fn main() {
    let cfg = AuditConfig::default();
    let report = audit_all(&cfg);
    if std::env::args().any(|a| a == "--json") {
        println!("{}", report.to_json());
    } else {
        print!("{}", report.render_text());
    }
}
