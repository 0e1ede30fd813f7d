//! Cross-checks of the pairwise estimator against independent routes:
//! one-way ANOVA mean squares, pair counting, and the weighted group
//! statistic.

mod common;

use krippendorff::{
    alpha_point, anova_alpha_oracle, expected_disagreement, mrpp_delta, observed_disagreement,
    DistanceSpec, MrppInput,
};

#[test]
fn interval_alpha_matches_anova_on_complete_data() {
    let mut rng = common::rng(601);
    for case in 0..200 {
        let m = common::random_complete(&mut rng);
        let pairwise = alpha_point(&m, &DistanceSpec::Interval).unwrap().alpha;
        let anova = anova_alpha_oracle(&m).unwrap();
        let err = (pairwise - anova).abs() / anova.abs().max(1.0);
        assert!(
            err < 1e-12,
            "case {case}: pairwise {pairwise} vs anova {anova} ({}x{})",
            m.n_units(),
            m.n_coders()
        );
    }
}

#[test]
fn observed_disagreement_is_a_weighted_group_statistic() {
    let mut rng = common::rng(602);
    for case in 0..200 {
        let rate = (case % 5) as f64 * 0.1; // 0% to 40% missing
        let m = common::random_with_missing(&mut rng, rate);
        let d_o = observed_disagreement(&m, &DistanceSpec::Interval).unwrap();

        // Pairable units become groups weighted by their share of scores.
        let mut groups = Vec::new();
        let mut sizes = Vec::new();
        for unit in 0..m.n_units() {
            let scores: Vec<f64> = m.row(unit).iter().flatten().copied().collect();
            if scores.len() >= 2 {
                sizes.push(scores.len());
                groups.push(scores);
            }
        }
        let n_pairable: usize = sizes.iter().sum();
        let weights: Vec<f64> = sizes.iter().map(|s| *s as f64 / n_pairable as f64).collect();
        let input = MrppInput::new(groups, weights).unwrap();
        let delta = mrpp_delta(&input, |a, b| (a - b) * (a - b));
        assert!(
            (d_o - delta).abs() < 1e-12,
            "case {case}: Do {d_o} vs delta {delta}"
        );
    }
}

#[test]
fn nominal_disagreements_match_pair_counting() {
    let mut rng = common::rng(603);
    for case in 0..100 {
        let rate = (case % 4) as f64 * 0.1;
        let m = common::random_nominal(&mut rng, rate);
        let d = DistanceSpec::Nominal;
        let d_o = observed_disagreement(&m, &d).unwrap();
        let d_e = expected_disagreement(&m, &d).unwrap();
        let d_o_counted = common::nominal_do_by_counting(&m);
        let d_e_counted = common::nominal_de_by_counting(&m);
        assert!((d_o - d_o_counted).abs() < 1e-12, "case {case}: Do");
        assert!((d_e - d_e_counted).abs() < 1e-12, "case {case}: De");
    }
}

#[test]
fn ordinal_behaves_as_interval_on_rank_scores() {
    // Scores that already are ranks: the two specs must agree exactly.
    let mut rng = common::rng(604);
    for _ in 0..50 {
        let m = common::random_nominal(&mut rng, 0.1);
        let a = alpha_point(&m, &DistanceSpec::Ordinal).unwrap().alpha;
        let b = alpha_point(&m, &DistanceSpec::Interval).unwrap().alpha;
        assert_eq!(a.to_bits(), b.to_bits());
    }
}
