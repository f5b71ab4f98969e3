//! Recomputes every row of the invariant table and prints the comparison.

use std::time::Instant;

use rankmetric::table::{default_rows, supplementary_rows, table1_row};
use rankmetric::Search;

fn main() -> rankmetric::Result<()> {
    let search = Search::default();
    for row in default_rows().iter().chain(&supplementary_rows()) {
        let t = Instant::now();
        let r = table1_row(row, &search)?;
        println!(
            "{:<24} q={} [{},{}] h={} ind={:?} ({:?}) L={} R={} field={} -> {} {:?} ({:.1?})",
            r.spec, r.q, r.n, r.k, r.h, r.ind, r.ind_status, r.l_exp, r.r_exp, r.r_is_field,
            r.verdict, r.mismatches, t.elapsed()
        );
    }
    Ok(())
}
