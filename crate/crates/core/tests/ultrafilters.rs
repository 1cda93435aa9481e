mod common;

use std::collections::BTreeSet;

use arrovian::decisive::{enumerate_ultrafilters, is_ultrafilter, principal_element, CoalitionFamily};
use arrovian::preferences::Coalition;
use common::is_principal_family;

#[test]
fn ultrafilters_are_exactly_the_principal_families() {
    for n in 1..=3usize {
        let coalitions = 1u32 << n;
        for mask in 0u64..1 << coalitions {
            let members: BTreeSet<u32> = (0..coalitions).filter(|&c| mask >> c & 1 == 1).collect();
            let fam = CoalitionFamily::from_coalitions(n, members.iter().map(|&c| Coalition::from_bits(c)));
            let principal = is_principal_family(n, &members);
            assert_eq!(is_ultrafilter(&fam), principal.is_some(), "n={n} family {fam}");
            if let Some(i) = principal {
                assert_eq!(principal_element(&fam).unwrap(), i);
            }
        }
        let found = enumerate_ultrafilters(n).unwrap();
        assert_eq!(found.len(), n);
        let mut voters: Vec<usize> = found.iter().map(|f| principal_element(f).unwrap()).collect();
        voters.sort();
        assert_eq!(voters, (0..n).collect::<Vec<_>>());
    }
}

#[test]
fn four_voters_have_four_ultrafilters() {
    assert_eq!(enumerate_ultrafilters(4).unwrap().len(), 4);
    assert!(enumerate_ultrafilters(5).is_err());
}
