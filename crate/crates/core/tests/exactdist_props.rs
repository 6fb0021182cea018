use runlaw::exactdist::{moment, moments_recursive, pmf, pmf_recursive, pmf_two_term, pmf_upto};
use runlaw::pattern::{RunMode, RunPattern, Upper};
use runlaw::polyalg::{int, rat, Rational};
use runlaw::transfer::chained_double_gf;
use runlaw::verify::{m2_grid, m3_grid};

fn grid() -> Vec<RunPattern> {
    m2_grid().into_iter().step_by(2).chain(m3_grid().into_iter().step_by(2)).collect()
}

#[test]
fn tables_are_distributions() {
    let zero = int(0);
    for pat in grid() {
        for table in pmf_upto(&pat, 30) {
            assert_eq!(table.total(), int(1), "{pat}");
            assert!(table.probs().iter().all(|p| *p >= zero), "{pat}");
            assert_eq!(table.s_max(), table.n() / pat.min_len());
        }
    }
}

#[test]
fn recursion_agrees_with_series() {
    for pat in grid() {
        let series = pmf_upto(&pat, 30);
        for n in [0, 1, pat.min_len(), 17, 30] {
            assert_eq!(pmf_recursive(&pat, n), series[n], "{pat} n={n}");
        }
    }
}

#[test]
fn at_least_one_occurrence_is_nondecreasing() {
    for pat in grid() {
        let tables = pmf_upto(&pat, 30);
        for w in tables.windows(2) {
            assert!(w[1].tail(1) >= w[0].tail(1), "{pat} n={}", w[1].n());
        }
    }
}

#[test]
fn cauchy_schwarz_on_moments() {
    for pat in grid() {
        for n in [5, 12, 25] {
            let m1 = moment(&pat, n, 1);
            assert!(&m1 * &m1 <= moment(&pat, n, 2), "{pat} n={n}");
        }
    }
}

#[test]
fn moments_below_min_length() {
    let pat = RunPattern::from_modes(&[RunMode::Exactly(3), RunMode::AtLeast(2)], vec![rat(1, 3), rat(2, 3)]).unwrap();
    let mu = moments_recursive(&pat, 4, 3);
    for row in &mu {
        assert_eq!(row, &vec![int(1), int(0), int(0), int(0)]);
    }
}

#[test]
fn two_term_recursion_exact_when_every_run_unbounded() {
    for pat in grid().into_iter().filter(|p| p.bounded_count() == 0) {
        for n in [pat.min_len(), 11, 20] {
            assert_eq!(pmf_two_term(&pat, n), pmf(&pat, n), "{pat} n={n}");
        }
    }
}

#[test]
fn three_symbol_at_least_matches_block_systems() {
    let pat = RunPattern::from_modes(
        &[RunMode::AtLeast(1), RunMode::AtLeast(2), RunMode::AtLeast(1)],
        vec![rat(1, 4), rat(1, 4), rat(1, 2)],
    )
    .unwrap();
    assert!(pat.bounds().iter().all(|b| b.upper == Upper::Unbounded));
    let phi = chained_double_gf(&pat).unwrap();
    let c = phi.series(20).unwrap();
    for n in [4, 9, 20] {
        let expected: Vec<Rational> = pmf(&pat, n).probs().to_vec();
        let got: Vec<Rational> = (0..expected.len()).map(|s| c[n].coeff(s)).collect();
        assert_eq!(got, expected, "n={n}");
    }
}
