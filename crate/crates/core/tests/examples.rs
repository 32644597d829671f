macro_rules! example {
    ($module:ident, $file:literal, $test:ident) => {
        #[allow(dead_code)]
        mod $module {
            include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/", $file));
        }

        #[test]
        fn $test() {
            $module::run_example().expect(concat!($file, " should run"));
        }
    };
}

example!(reference_models, "reference_models.rs", reference_models_runs);
example!(raw_comparison, "raw_comparison.rs", raw_comparison_runs);
example!(lag_selection, "lag_selection.rs", lag_selection_runs);
example!(revision_profile, "revision_profile.rs", revision_profile_runs);
example!(index_and_convert, "index_and_convert.rs", index_and_convert_runs);
example!(predict_ahead, "predict_ahead.rs", predict_ahead_runs);
example!(ols_from_scratch, "ols_from_scratch.rs", ols_from_scratch_runs);
