use proptest::prelude::*;
use runlaw::pattern::{RunPattern, SymbolBound, Upper};
use runlaw::polyalg::{int, rat, rat_equal, Poly, RatFun, Rational};
use runlaw::transfer::{
    at_u, chained_double_gf, free_system, right_end_chain, system_gf, two_symbol_system, BlockSystem, Marker,
};

fn bound() -> impl Strategy<Value = SymbolBound> {
    (1u32..=4, prop::option::of(0u32..=3)).prop_map(|(lower, extra)| SymbolBound {
        lower,
        upper: extra.map_or(Upper::Unbounded, |e| Upper::Bounded(lower + e)),
    })
}

fn probability() -> impl Strategy<Value = Rational> {
    (1i64..=12, 13i64..=20).prop_map(|(a, b)| rat(a, b))
}

fn pattern(m: usize) -> impl Strategy<Value = RunPattern> {
    (prop::collection::vec(bound(), m), prop::collection::vec(1i64..=9, m)).prop_map(|(bounds, weights)| {
        let total: i64 = weights.iter().sum();
        let probs = weights.iter().map(|&w| rat(w, total)).collect();
        RunPattern::new(bounds, probs).unwrap()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(20))]

    #[test]
    fn six_block_system_matches_closed_form(b1 in bound(), b2 in bound(), p in probability()) {
        let pat = RunPattern::new(vec![b1, b2], vec![p.clone(), int(1) - p]).unwrap();
        let solved = at_u(&two_symbol_system(&pat).unwrap().gf().unwrap(), &int(0)).unwrap();
        prop_assert!(rat_equal(&solved, &pat.double_gf().phi()));
    }

    #[test]
    fn chain_reproduces_right_end_functions(pat in pattern(4)) {
        let chain = right_end_chain(&pat, 4).unwrap();
        for (k, (y, n)) in (2..=4).zip(&chain) {
            let (ye, ne) = pat.right_end_gfs_prefix(k).unwrap();
            prop_assert_eq!(y, &ye, "Y_{}", k);
            prop_assert_eq!(n, &ne, "N_{}", k);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(8))]

    #[test]
    fn chained_phi_three_symbols(pat in pattern(3)) {
        prop_assert_eq!(chained_double_gf(&pat).unwrap(), pat.double_gf().phi());
    }
}

#[test]
fn free_system_counts_every_sequence() {
    let probs = [rat(1, 6), rat(1, 3), rat(1, 2)];
    let g = at_u(&system_gf(&free_system(&probs).unwrap()).unwrap(), &int(1)).unwrap();
    let expected = RatFun::new(Poly::one(), Poly::one_minus(int(1))).unwrap();
    assert!(rat_equal(&g.map_coeffs(|c| c.coeff(0)).unwrap(), &expected));
}

#[test]
fn system_shapes_are_validated() {
    let block = RatFun::new(Poly::monomial(rat(1, 2), 1), Poly::one_minus(rat(1, 2))).unwrap();
    assert!(BlockSystem::new(vec![], vec![]).is_err());
    assert!(BlockSystem::new(vec![block.clone()], vec![vec![Marker::Free]]).is_err());
    assert!(BlockSystem::new(vec![block.clone(), block], vec![vec![Marker::Forbidden]]).is_err());
}
