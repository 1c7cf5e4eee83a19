mod common;

use common::props;
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn normalization_is_pointwise_equivalent(c in props::normalize_strategy()) {
        props::normalize_pointwise(c)?;
    }

    #[test]
    fn compose_matches_substitution(c in props::compose_strategy()) {
        props::compose_substitution(c)?;
    }

    #[test]
    fn decomposition_is_pointwise_sound(c in props::decompose_strategy()) {
        props::decompose_pointwise(c)?;
    }

    #[test]
    fn nonnegative_functions_are_monotone(c in props::monotone_strategy()) {
        props::monotone(c)?;
    }
}
