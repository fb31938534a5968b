mod common;

use common::dt_oracle::dt_drawable;
use knottab::code::enumerate_codes;
use knottab::realize::{enumerate_loops, is_realizable, jordan_test};

#[test]
fn three_routes_agree_up_to_six() {
    for n in 0..=6 {
        let mut drawable = 0;
        for code in enumerate_codes(n, false) {
            let j = jordan_test(&code);
            let d = dt_drawable(&code);
            let r = is_realizable(&code);
            assert_eq!(j, r, "jordan vs realize on {code}");
            assert_eq!(d, r, "oracle vs realize on {code}");
            assert!(enumerate_loops(&code).len() <= 3usize.pow(n as u32), "{code}");
            drawable += usize::from(r);
        }
        eprintln!("n={n}: {drawable} drawable codes");
    }
}
