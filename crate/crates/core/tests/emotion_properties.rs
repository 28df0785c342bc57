mod support;

use proptest::prelude::*;
use tasml::emotion::{
    fuzzy_blend, fuzzy_blend_with, membership_split, score_intensities, EmotionBlend, EmotionLabel, EmotionLexicon,
    EmotionWheel, IntensityProfile,
};

use support::strategies::profile;

/// Pinned tolerance for weight sums.
const SUM_TOL: f64 = 1e-9;

/// An arc of the wheel, or two exactly tied top emotions.
fn blend_is_admissible(blend: &EmotionBlend, profile: &IntensityProfile, wheel: &EmotionWheel) -> bool {
    let labels = blend.labels();
    if wheel.is_arc(&labels) {
        return true;
    }
    let top = profile.iter().map(|(_, v)| v).fold(0.0, f64::max);
    labels.len() == 2
        && blend.components()[0].1 == blend.components()[1].1
        && labels.iter().all(|l| profile.get(*l) == top)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn blends_stay_on_the_wheel(profile in profile()) {
        let wheel = EmotionWheel::default();
        match fuzzy_blend(&profile, &wheel) {
            None => prop_assert!(profile.is_empty()),
            Some(blend) => {
                prop_assert!(blend_is_admissible(&blend, &profile, &wheel), "{:?} from {:?}", blend, profile);
                let n = blend.components().len();
                prop_assert!((1..=3).contains(&n));
                let sum: f64 = blend.components().iter().map(|(_, w)| w).sum();
                prop_assert!((sum - 1.0).abs() <= SUM_TOL);
                prop_assert!(blend.components().iter().all(|(_, w)| *w > 0.0 && *w <= 1.0));
                prop_assert!(blend.components().windows(2).all(|p| p[0].1 >= p[1].1));
                let top = profile.iter().map(|(_, v)| v).fold(0.0, f64::max);
                prop_assert!(blend.labels().iter().any(|l| profile.get(*l) == top));
            }
        }
    }

    #[test]
    fn third_component_needs_its_share(profile in profile(), third_min in 0.0..=1.0f64) {
        let wheel = EmotionWheel::default();
        if let Some(blend) = fuzzy_blend_with(&profile, &wheel, third_min) {
            let labels = blend.labels();
            let top = profile.iter().map(|(_, v)| v).fold(0.0, f64::max);
            let tops: Vec<_> = labels.iter().filter(|l| profile.get(**l) == top).collect();
            if labels.len() == 3 && tops.len() == 1 {
                let a = *tops[0];
                let others: Vec<EmotionLabel> = labels.iter().copied().filter(|l| *l != a).collect();
                // with A in the middle, B is its stronger neighbour; otherwise C is the far end
                let c = if others.iter().all(|l| wheel.adjacent(a, *l)) {
                    profile.get(others[0]).min(profile.get(others[1]))
                } else {
                    profile.get(*others.iter().find(|l| !wheel.adjacent(a, **l)).unwrap())
                };
                let total: f64 = labels.iter().map(|l| profile.get(*l)).sum();
                prop_assert!(c / total >= third_min - SUM_TOL);
            }
        }
    }

    #[test]
    fn membership_weights_complement(mu in 0.0..=1.0f64) {
        let (a, b) = membership_split(mu).unwrap();
        prop_assert_eq!(a, mu);
        prop_assert!((a + b - 1.0).abs() <= SUM_TOL);
    }

    #[test]
    fn intensities_peak_at_one(counts in proptest::collection::vec(0usize..4, 9)) {
        let mut lex = EmotionLexicon::new();
        let mut tokens = Vec::new();
        for (i, label) in EmotionLabel::ALL.iter().enumerate() {
            let word = format!("w{i}");
            lex.insert(&word, *label, 0.1 + 0.1 * i as f64).unwrap();
            tokens.extend(std::iter::repeat_n(word, counts[i]));
        }
        let p = score_intensities(&tokens, &lex);
        if counts.iter().any(|c| *c > 0) {
            let top = p.iter().map(|(_, v)| v).fold(0.0, f64::max);
            prop_assert_eq!(top, 1.0);
            prop_assert!(p.iter().all(|(_, v)| v > 0.0 && v <= 1.0));
        } else {
            prop_assert!(p.is_empty());
        }
    }
}

#[test]
fn suffering_fear_seventy_thirty() {
    use EmotionLabel::*;
    let wheel = EmotionWheel::default();
    let p = IntensityProfile::new([(Suffering, 0.7), (Fear, 0.3)]).unwrap();
    let b = fuzzy_blend(&p, &wheel).unwrap();
    assert_eq!(b.labels(), vec![Suffering, Fear]);
    assert!((b.weight(Suffering) - 0.7).abs() <= SUM_TOL);
    assert!((b.weight(Fear) - 0.3).abs() <= SUM_TOL);
}

#[test]
fn non_neighbours_do_not_blend_unless_tied() {
    use EmotionLabel::*;
    let wheel = EmotionWheel::default();
    let b = fuzzy_blend(&IntensityProfile::new([(Joy, 0.9), (Fear, 0.5)]).unwrap(), &wheel).unwrap();
    assert_eq!(b.labels(), vec![Joy]);
    let b = fuzzy_blend(&IntensityProfile::new([(Surprise, 0.6), (Fear, 0.6)]).unwrap(), &wheel).unwrap();
    assert_eq!(b.compound_name(), "surprise-fear");
    assert!(EmotionBlend::new(vec![(Joy, 0.7), (Fear, 0.3)], &wheel).is_err());
}
