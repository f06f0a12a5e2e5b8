#![no_main]

use libfuzzer_sys::fuzz_target;

// The document parser must never panic; on success, the validated document
// must satisfy its own invariants again when re-serialized quantities are
// recomputed.
fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    let Ok(doc) = fairaudit::parse_domain(text) else { return };
    // weights of a valid document sum to one and every task is total
    let total: fairaudit::Rat = doc.domain.weights().iter().sum();
    assert_eq!(total, fairaudit::rat(1, 1));
    for name in doc.domain.task_names().map(str::to_string).collect::<Vec<_>>() {
        assert_eq!(doc.domain.task(&name).unwrap().len(), doc.domain.len());
    }
    for feature in doc.features.values() {
        assert_eq!(feature.len(), doc.domain.len());
    }
});
