use ldp_contraction::contraction::eta_tv_exact;
use ldp_contraction::io::{parse_channel, Format};
use ldp_contraction::mechanisms::{random_ldp_channel, randomized_response};
use ldp_contraction::report::{from_json, to_json};
use ldp_contraction::rng::StreamRng;

#[test]
fn floats_round_trip_bitwise() {
    let mut rng = StreamRng::new(12);
    let values: Vec<f64> = (0..5000)
        .map(|i| (rng.uniform() - 0.5) * 10f64.powi(i % 40 - 20))
        .collect();
    let back: Vec<f64> = from_json(&to_json(&values).unwrap()).unwrap();
    assert!(values.iter().zip(&back).all(|(a, b)| a.to_bits() == b.to_bits()));
}

#[test]
fn channels_round_trip_through_json_and_csv() {
    let mut rng = StreamRng::new(13);
    for i in 0..50 {
        let k = random_ldp_channel(2 + i % 4, 2 + i % 5, 0.5 + (i as f64) / 10.0, &mut rng).unwrap();
        let json = to_json(&k).unwrap();
        let back = parse_channel(&json, Format::Json).unwrap();
        assert_eq!(back, k);
        assert_eq!(to_json(&back).unwrap(), json);
    }
}

#[test]
fn binary_rr_dobrushin_survives_round_trip() {
    for i in 1..=20 {
        let k = randomized_response(2, 0.25 * i as f64).unwrap();
        let back = parse_channel(&to_json(&k).unwrap(), Format::Json).unwrap();
        assert_eq!(eta_tv_exact(&back).value.to_bits(), eta_tv_exact(&k).value.to_bits());
    }
}
