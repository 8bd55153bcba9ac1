macro_rules! example_test {
    ($name:ident) => {
        mod $name {
            include!(concat!(
                env!("CARGO_MANIFEST_DIR"),
                "/examples/",
                stringify!($name),
                ".rs"
            ));
        }

        #[test]
        fn $name() {
            $name::run().expect(concat!(stringify!($name), " should run"));
        }
    };
}

example_test!(fig1_walkthrough);
example_test!(instance_io);
example_test!(discrepancy_search);
example_test!(equivalence_cuts);
example_test!(bound_comparison);
example_test!(oracle_crosscheck);
example_test!(anytime_beam);
example_test!(benchmark_matrix);
