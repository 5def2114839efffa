mod common;

use common::*;
use eii::codec::{self, DecodeOutcome, Encoder};
use eii::pcheck::{self, build_parity_check};
use eii::{Code, CodeSpec, ErasureSolution, Error, Symbol, SymbolWord, ValidationError};
use proptest::prelude::*;

/// Every codeword of a tiny code, by running the encoder over all messages.
fn all_codewords(spec: &CodeSpec) -> Vec<SymbolWord> {
    let q = spec.field().q();
    let k = spec.dimension();
    let enc = Encoder::new(spec);
    let mut data = vec![0 as Symbol; k];
    let mut out = Vec::new();
    loop {
        out.push(enc.encode(&data).unwrap());
        let mut i = 0;
        while i < k {
            data[i] += 1;
            if (data[i] as usize) < q {
                break;
            }
            data[i] = 0;
            i += 1;
        }
        if i == k {
            return out;
        }
    }
}

#[test]
fn nesting_holds_on_every_codeword() {
    let f = gf(2);
    let l = leaves(3, &[0, 1, 2]);
    let bigger = node(&[1, 1, 0, 0], &l);
    let smaller = node(&[0, 1, 1, 0], &l);
    assert!(bigger.is_nested(&smaller).unwrap());
    assert!(!smaller.is_nested(&bigger).unwrap());
    let (a, b) = (
        CodeSpec::new(f, bigger).unwrap(),
        CodeSpec::new(f, smaller).unwrap(),
    );
    let words = all_codewords(&b);
    assert_eq!(words.len(), 4usize.pow(b.dimension() as u32));
    for w in &words {
        assert!(codec::is_codeword(&a, w).unwrap());
    }
    let outside = all_codewords(&a)
        .into_iter()
        .filter(|w| !codec::is_codeword(&b, w).unwrap())
        .count();
    assert!(outside > 0);
}

#[test]
fn leaf_nesting_by_redundancy() {
    assert!(Code::leaf(7, 1).is_nested(&Code::leaf(7, 3)).unwrap());
    assert!(!Code::leaf(7, 3).is_nested(&Code::leaf(7, 1)).unwrap());
    assert!(matches!(
        Code::leaf(7, 1).is_nested(&Code::leaf(6, 2)),
        Err(Error::DifferentChildren)
    ));
}

#[test]
fn encoder_output_is_a_codeword_and_systematic() {
    let mut seed = 1u32;
    for (name, spec) in example_codes() {
        let enc = Encoder::new(&spec);
        assert_eq!(enc.data_positions().len(), spec.dimension(), "{name}");
        let q = spec.field().q();
        let data: Vec<Symbol> = (0..spec.dimension())
            .map(|_| {
                seed = seed.wrapping_mul(1_103_515_245).wrapping_add(12_345);
                ((seed >> 16) as usize % q) as Symbol
            })
            .collect();
        let c = enc.encode(&data).unwrap();
        assert!(codec::is_codeword(&spec, &c).unwrap(), "{name}");
        let back: Vec<Symbol> = enc.data_positions().iter().map(|&p| c.symbols[p]).collect();
        assert_eq!(back, data, "{name}");
        let syndrome = build_parity_check(&spec).syndrome(&c).unwrap();
        assert!(syndrome.iter().all(|&s| s == 0), "{name}");
    }
}

#[test]
fn encoder_rejects_wrong_message_length() {
    let spec = worked_example();
    let k = spec.dimension();
    assert!(matches!(
        codec::encode(&spec, &vec![0; k + 1]),
        Err(Error::LengthMismatch { .. })
    ));
}

#[test]
fn rank_equals_redundancy() {
    for (name, spec) in example_codes() {
        let pc = build_parity_check(&spec).reduce();
        assert_eq!(pc.rank(), spec.length() - spec.dimension(), "{name}");
        assert_eq!(pc.matrix().rows(), pc.rank(), "{name}");
    }
}

#[test]
fn capability_round_trip_through_codes() {
    for (cap, n) in [
        ("(1,1,1,1,1,2,2,2,2,3,3,3)", 7),
        ("((1,1,2),(1,2,3),(1,2,3),(1,2,3))", 7),
        ("(((1,1,2),(1,2,3)),((1,2,3),(1,2,3)))", 7),
        ("((0,0,1),(1,1,3),(1,1,3),(2,3,6))", 7),
        ("(22)", 84),
    ] {
        let spec = from_capability(cap, n);
        assert_eq!(spec.capability().to_string(), cap);
        assert_eq!(spec.length(), 84);
        assert_eq!(spec.dimension(), 62);
    }
}

#[test]
fn capability_picks_smallest_field() {
    assert_eq!(from_capability("(22)", 84).field().q(), 128);
    assert_eq!(
        from_capability("(1,1,1,1,1,2,2,2,2,3,3,3)", 7).field().q(),
        16
    );
    assert_eq!(
        from_capability("((1,1,2),(1,2,3),(1,2,3),(1,2,3))", 7)
            .field()
            .q(),
        8
    );
}

#[test]
fn capability_tables_of_the_three_row_family() {
    let spec = spec8(node(&[1, 3, 0], &[family_123().c2_0, family_123().c2_1]));
    assert_eq!(
        spec.capability().to_string(),
        "((1,1,2),(1,2,3),(1,2,3),(1,2,3))"
    );
    assert_eq!(spec.code().levels(), 2);
    assert_eq!(spec.code().layers(), 3);
}

#[test]
fn validation_rejects_bad_trees() {
    let f = gf(3);
    let not_nested = node(&[1, 1, 0], &leaves(7, &[2, 1]));
    assert!(matches!(
        CodeSpec::new(f, not_nested),
        Err(Error::Validation(ValidationError::NotNested(..)))
    ));
    let too_many_rows = node(&[8, 1], &leaves(7, &[1]));
    assert!(matches!(
        CodeSpec::new(f, too_many_rows),
        Err(Error::Validation(_))
    ));
    let leaf_too_long = Code::leaf(9, 2);
    assert!(CodeSpec::new(f, leaf_too_long).is_err());
}

#[test]
fn json_round_trip_keeps_digest() {
    for (name, spec) in example_codes() {
        let back = CodeSpec::from_json(&spec.to_json()).unwrap();
        assert_eq!(back, spec, "{name}");
        assert_eq!(back.digest(), spec.digest(), "{name}");
    }
}

#[test]
fn json_rejects_negative_multiplicity() {
    let ok = r#"{"field":{"w":3},"code":{"node":{"s":[1,1,0],"children":[{"leaf":{"n":7,"u":1}},{"leaf":{"n":7,"u":2}}]}}}"#;
    assert_eq!(
        CodeSpec::from_json(ok).unwrap().params().to_string(),
        "[14, 11, 3]"
    );
    let text = ok.replace("[1,1,0]", "[1,-1,0]");
    assert!(matches!(
        CodeSpec::from_json(&text),
        Err(Error::Validation(ValidationError::NegativeMultiplicity {
            index: 1,
            value: -1
        }))
    ));
}

#[test]
fn decode_reports_failure_past_capability() {
    let spec = worked_example();
    let c = codec::encode(&spec, &vec![1; spec.dimension()]).unwrap();
    let mut w = c.clone();
    let all: Vec<usize> = (0..spec.length()).collect();
    w.erase(&all).unwrap();
    let (_, rep) = codec::decode(&spec, &w).unwrap();
    assert_ne!(rep.outcome, DecodeOutcome::Recovered);
}

#[test]
fn decode_flags_inconsistent_words() {
    let spec = spec8(family_123().c2_1);
    let mut w = codec::encode(&spec, &vec![3; spec.dimension()]).unwrap();
    w.symbols[0] ^= 1;
    w.erase(&[5]).unwrap();
    assert!(matches!(
        codec::decode(&spec, &w),
        Err(Error::InconsistentWord)
    ));
}

fn tiny_mask(n: usize) -> impl Strategy<Value = Vec<bool>> {
    prop::collection::vec(prop::bool::weighted(0.25), n)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn capability_decoder_agrees_with_matrix_decoder(
        mask in tiny_mask(49),
        data in prop::collection::vec(0u8..8, 24),
    ) {
        let spec = worked_example();
        let c = codec::encode(&spec, &data).unwrap();
        let mut w = c.clone();
        let positions: Vec<usize> = (0..49).filter(|&i| mask[i]).collect();
        w.erase(&positions).unwrap();
        let pc = build_parity_check(&spec).reduce();
        let by_matrix = pcheck::pc_decode(&pc, &w).unwrap();
        if codec::correctable(spec.code(), &w.erased) {
            let (out, rep) = codec::decode(&spec, &w).unwrap();
            prop_assert_eq!(rep.outcome, DecodeOutcome::Recovered);
            prop_assert_eq!(&out, &c);
            prop_assert_eq!(by_matrix, ErasureSolution::Unique(c));
        } else if let ErasureSolution::Unique(out) = by_matrix {
            prop_assert_eq!(out, c);
        }
    }
}
