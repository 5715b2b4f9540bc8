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

example!(quickstart, "quickstart.rs", quickstart_runs);
example!(walkthrough, "walkthrough.rs", walkthrough_runs);
example!(sibling_order, "sibling_order.rs", sibling_order_runs);
example!(causal_delivery, "causal_delivery.rs", causal_delivery_runs);
example!(
    random_convergence,
    "random_convergence.rs",
    random_convergence_runs
);
example!(restore_cache, "restore_cache.rs", restore_cache_runs);
example!(scenario_file, "scenario_file.rs", scenario_file_runs);
