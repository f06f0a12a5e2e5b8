#![no_main]

use libfuzzer_sys::fuzz_target;

use fairaudit::generator::{generate_document, GeneratorParams, WeightStyle};

// Every document the generator emits must pass the validating parser, for
// any parameters decoded from the fuzz input.
fuzz_target!(|data: &[u8]| {
    if data.len() < 14 {
        return;
    }
    let seed = u64::from_le_bytes(data[0..8].try_into().unwrap());
    let lo = 2 + (data[8] % 12) as usize;
    let hi = lo + (data[9] % 4) as usize;
    let feat_lo = (data[10] % 4) as usize;
    let feat_hi = feat_lo + (data[11] % 3) as usize;
    let params = GeneratorParams {
        seed,
        instances: (lo, hi),
        features: (feat_lo, feat_hi),
        alphabet: 1 + (data[12] % 4) as usize,
        weights: if data[13] & 1 == 0 {
            WeightStyle::Uniform
        } else {
            WeightStyle::RandomRational { max_numerator: 1 + (data[13] >> 1) as usize }
        },
        tasks: 1,
    };
    let document = generate_document(&params).expect("parameters are feasible");
    fairaudit::parse_domain(&document).expect("generated documents validate");
});
