use mordell::report::{fmt_sig, round_sig};
use proptest::prelude::*;

proptest! {
    #[test]
    fn twelve_digits_survive_printing(m in -1.0f64..1.0, e in -30i32..30) {
        let x = m * 10f64.powi(e);
        let y: f64 = fmt_sig(x).parse().unwrap();
        prop_assert!((y - x).abs() <= 5e-12 * x.abs());
        prop_assert_eq!(round_sig(y), y);
        prop_assert_eq!(fmt_sig(y), fmt_sig(x));
    }
}
