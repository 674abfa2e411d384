use proptest::prelude::*;

use tutte_core::series::rat;
use tutte_core::{BiSeries, Trunc};

fn series() -> impl Strategy<Value = BiSeries> {
    (0u32..6, 0u32..6)
        .prop_flat_map(|(x, y)| {
            let terms = prop::collection::vec((0..=x, 0..=y, -20i64..20, 1i64..9), 0..12);
            (Just(Trunc::new(x, y)), terms)
        })
        .prop_map(|(t, terms)| BiSeries::from_terms(terms.into_iter().map(|(i, j, n, d)| (i, j, rat(n, d))), t))
}

proptest! {
    #[test]
    fn json_round_trip(s in series()) {
        let back = BiSeries::from_json_str(&s.to_json_string()).unwrap();
        prop_assert_eq!(back, s);
    }

    #[test]
    fn log_inverts_exp(s in series()) {
        let f = &s - &BiSeries::constant(s.constant_term(), s.trunc());
        prop_assert_eq!(f.exp().unwrap().log().unwrap(), f);
    }
}
