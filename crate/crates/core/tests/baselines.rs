//! Full (non-invariant) homology of CP^r with sl2, produced by the engine and
//! pinned as regression baselines. CP² is also confirmed by the CE route.

use rephom::ce::CeComplex;
use rephom::lie::builtin;
use rephom::models::Space;
use rephom::rep::RepComplex;

fn full(r: u32) -> String {
    let n = 3 * (r as i64).pow(2);
    let g = builtin("sl2").unwrap();
    let rc = RepComplex::build(&Space::Cp(r).quillen(n).unwrap(), &g, n).unwrap();
    rc.homology_series(n).unwrap().to_string()
}

#[test]
fn cp2_full_series() {
    assert_eq!(full(2), "1 + 3z + 8z^4 + 6z^5 + 6z^7 + 8z^8 + 3z^11 + z^12");
    let g = builtin("sl2").unwrap();
    let ce = CeComplex::for_degree(&g, &Space::Cp(2).sullivan(), 12).unwrap();
    assert_eq!(ce.series(12, false).unwrap().to_string(), full(2));
}

#[test]
fn cp3_full_series() {
    assert_eq!(
        full(3),
        "1 + 3z + 5z^4 + 3z^6 + 6z^7 + 13z^9 + 10z^10 + z^11 + 15z^12 + 7z^13 + 7z^14 + 15z^15 + z^16 + 10z^17 + 13z^18 + 6z^20 + 3z^21 + 5z^23 + 3z^26 + z^27"
    );
}
