use liftcodec::codec::bits::{BitReader, BitWriter};
use liftcodec::codec::dwt::{spatial_dwt_53, DwtDirection};
use liftcodec::codec::{mv, rice};
use liftcodec::metrics::{psnr_lp, ssim_lp};
use liftcodec::volume::{decode_raw, encode_raw};
use liftcodec::*;
use proptest::prelude::*;

fn frame(max_w: usize, max_h: usize, lo: Sample, hi: Sample) -> impl Strategy<Value = Frame> {
    (1..=max_w, 1..=max_h).prop_flat_map(move |(w, h)| {
        prop::collection::vec(lo..=hi, w * h).prop_map(move |s| Frame::new(w, h, s).unwrap())
    })
}

fn sequence(max_w: usize, max_h: usize) -> impl Strategy<Value = Sequence> {
    (1..=max_w, 1..=max_h, 1..=3usize).prop_flat_map(|(w, h, pairs)| {
        prop::collection::vec(0..=4095, w * h * pairs * 2).prop_map(move |s| {
            let frames = s.chunks(w * h).map(|c| Frame::new(w, h, c.to_vec()).unwrap()).collect();
            Sequence::new(frames, 12).unwrap()
        })
    })
}

fn any_mode() -> impl Strategy<Value = LiftingMode> {
    prop::sample::select(LiftingMode::ALL.to_vec())
}

fn any_kind() -> impl Strategy<Value = DenoiseKind> {
    prop::sample::select(DenoiseKind::ALL.to_vec())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn raw_round_trip(seq in sequence(12, 9)) {
        let bytes = encode_raw(&seq);
        let back = decode_raw(&bytes, seq.width(), seq.height(), seq.len(), 12).unwrap();
        prop_assert_eq!(back, seq);
    }

    #[test]
    fn dwt_round_trip(f in frame(40, 40, -20000, 20000), levels in 0usize..=6) {
        let fwd = spatial_dwt_53(&f, levels, DwtDirection::Forward);
        prop_assert_eq!(spatial_dwt_53(&fwd, levels, DwtDirection::Inverse), f);
    }

    #[test]
    fn rice_round_trip(f in frame(33, 33, -70000, 70000), levels in 0usize..=4) {
        let mut w = BitWriter::new();
        rice::encode_plane(&f, levels, &mut w);
        let bytes = w.finish();
        let back = rice::decode_plane(&mut BitReader::new(&bytes, 0), f.width(), f.height(), levels).unwrap();
        prop_assert_eq!(back, f);
    }

    #[test]
    fn motion_field_round_trip(
        (w, h, grid) in (1usize..60, 1usize..60, 1usize..12),
        seed in any::<u64>(),
    ) {
        let (bx, by) = motion::block_counts(w, h, grid);
        let mut s = seed;
        let vectors = (0..bx * by)
            .map(|_| {
                s = s.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
                MotionVector::new((s >> 40) as i32 % 300 - 150, (s >> 20) as i32 % 17 - 8)
            })
            .collect();
        let mf = MotionField::from_vectors(w, h, grid, vectors).unwrap();
        let mut out = BitWriter::new();
        mv::encode_motion_field(&mf, &mut out);
        let bytes = out.finish();
        let back = mv::decode_motion_field(&mut BitReader::new(&bytes, 0), w, h, grid).unwrap();
        prop_assert_eq!(back, mf);
    }

    #[test]
    fn psnr_lp_and_ssim_lp_are_symmetric_in_the_pair(
        (a, b, c) in (8usize..20, 8usize..20).prop_flat_map(|(w, h)| {
            let f = move || prop::collection::vec(0..=4095, w * h).prop_map(move |s| Frame::new(w, h, s).unwrap());
            (f(), f(), f())
        })
    ) {
        let p1 = psnr_lp::<f64>(&a, &b, &c, 4095).unwrap();
        let p2 = psnr_lp::<f64>(&a, &c, &b, 4095).unwrap();
        prop_assert_eq!(p1, p2);
        let s1 = ssim_lp::<f64>(&a, &b, &c, 4095).unwrap();
        let s2 = ssim_lp::<f64>(&a, &c, &b, 4095).unwrap();
        prop_assert!((s1 - s2).abs() <= 1e-12);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn lifting_round_trip(
        seq in sequence(24, 20),
        mode in any_mode(),
        kind in any_kind(),
        xi in 0u16..=100,
        grid in 1usize..=8,
        range in 0usize..=4,
    ) {
        let cfg = LiftingConfig::new(
            mode,
            DenoiseConfig::with_integer_xi(kind, xi),
            MotionConfig { grid_size: grid, search_range: range },
        );
        let pairs = analyze_sequence(&seq, &cfg).unwrap();
        prop_assert_eq!(synthesize_sequence(&pairs, &cfg, 12).unwrap(), seq);
    }

    #[test]
    fn codec_round_trip(seq in sequence(20, 18), mode in any_mode(), kind in any_kind(), xi in 0u16..=24) {
        let cfg = CodecConfig::new(mode, DenoiseConfig::with_integer_xi(kind, xi), MotionConfig::default());
        let enc = encode_sequence(&seq, &cfg).unwrap();
        prop_assert_eq!(decode_sequence(&enc.bytes, Layers::BasePlusEnhancement).unwrap(), Decoded::Full(seq));
        prop_assert_eq!(enc.sizes.total(), enc.bytes.len());
    }

    #[test]
    fn motion_ignores_a_constant_offset(
        (r, c) in (4usize..24, 4usize..24).prop_flat_map(|(w, h)| {
            let f = move || prop::collection::vec(0..=3000, w * h).prop_map(move |s| Frame::new(w, h, s).unwrap());
            (f(), f())
        }),
        offset in -500i32..=500,
    ) {
        let cfg = MotionConfig { grid_size: 4, search_range: 3 };
        let shifted = (r.map(|s| s + offset), c.map(|s| s + offset));
        prop_assert_eq!(
            estimate_motion(&r, &c, &cfg).unwrap(),
            estimate_motion(&shifted.0, &shifted.1, &cfg).unwrap()
        );
    }
}

#[test]
fn every_truncation_of_a_stream_fails_to_decode_fully() {
    let seq = synthesize_phantom(&PhantomSpec::moving_heart(32, 32, 4, 1).with_noise(6.0, 3)).unwrap();
    let cfg = CodecConfig::new(
        LiftingMode::Wldpu,
        DenoiseConfig::with_integer_xi(DenoiseKind::Awf, 4),
        MotionConfig::default(),
    );
    let enc = encode_sequence(&seq, &cfg).unwrap();
    for cut in 0..enc.bytes.len() {
        assert!(
            decode_sequence(&enc.bytes[..cut], Layers::BasePlusEnhancement).is_err(),
            "cut at {cut}"
        );
    }
    let bl = enc.sizes.base_layer_len();
    for cut in bl..=enc.bytes.len() {
        assert!(decode_sequence(&enc.bytes[..cut], Layers::BaseOnly).is_ok(), "cut at {cut}");
    }
    for cut in 0..bl {
        assert!(decode_sequence(&enc.bytes[..cut], Layers::BaseOnly).is_err(), "cut at {cut}");
    }
}

#[test]
fn odd_length_sequences_are_rejected() {
    let seq = synthesize_phantom(&PhantomSpec::moving_heart(32, 32, 3, 1)).unwrap();
    let cfg = CodecConfig::new(LiftingMode::Mctf, DenoiseConfig::identity(), MotionConfig::default());
    assert!(matches!(encode_sequence(&seq, &cfg), Err(Error::Parameter(_))));
}

#[test]
fn static_noiseless_haar_plain_codes_near_empty_hp() {
    let seq = synthesize_phantom(&PhantomSpec::moving_heart(64, 64, 10, 0)).unwrap();
    let cfg = CodecConfig::new(LiftingMode::HaarPlain, DenoiseConfig::identity(), MotionConfig::default());
    let enc = encode_sequence(&seq, &cfg).unwrap();
    // All-zero planes cost one 5-bit k plus one bit per coefficient.
    let per_pair = 4 + (13usize * 5 + 64 * 64).div_ceil(8);
    assert!(enc.sizes.hp_bytes <= 5 * per_pair, "{}", enc.sizes.hp_bytes);
    assert_eq!(decode_sequence(&enc.bytes, Layers::BasePlusEnhancement).unwrap(), Decoded::Full(seq));
}
