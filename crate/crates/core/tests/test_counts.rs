use knottab::colortests::{enumerate_tests, irreducible, validate};

#[test]
fn tests_per_color_count() {
    let expected = [1, 0, 1, 1, 2, 2, 3, 2, 6];
    for (n, &want) in (1..=9).zip(&expected) {
        let tests = enumerate_tests(n);
        assert_eq!(tests.len(), want, "{n} colors");
        for m in &tests {
            assert!(validate(m) && irreducible(m));
        }
    }
}

// about half a minute in release mode
#[test]
#[ignore]
fn ten_colors() {
    assert_eq!(enumerate_tests(10).len(), 1);
}
