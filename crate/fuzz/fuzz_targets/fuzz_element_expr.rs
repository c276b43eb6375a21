//! The `"3 + 2*th^2"` element-expression parser over two fixed orders.

#![no_main]

use ghg_core::field::NumberFieldOrder;
use libfuzzer_sys::fuzz_target;
use std::sync::OnceLock;

fn orders() -> &'static [NumberFieldOrder; 2] {
    static ORDERS: OnceLock<[NumberFieldOrder; 2]> = OnceLock::new();
    ORDERS.get_or_init(|| {
        [
            NumberFieldOrder::quadratic(2).expect("valid"),
            NumberFieldOrder::new(
                [-1i64, -2, 1, 1].iter().map(|&c| num_bigint::BigInt::from(c)).collect(),
            )
            .expect("valid"),
        ]
    })
}

fuzz_target!(|data: &[u8]| {
    let Ok(input) = std::str::from_utf8(data) else { return };
    for order in orders() {
        let _ = order.parse_element(input);
    }
});
