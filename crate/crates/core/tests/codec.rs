use freer_arrows::choreo::Request;
use freer_arrows::network::Codec;
use freer_arrows::Either;
use proptest::prelude::*;

fn request() -> impl Strategy<Value = Request> {
    let key = "[A-Za-z0-9_.-]{1,10}";
    prop_oneof![
        (key, "\\PC{1,20}").prop_map(|(k, v)| Request::Put(k, v)),
        key.prop_map(Request::Get),
    ]
}

proptest! {
    #[test]
    fn requests_round_trip(r in request()) {
        prop_assert_eq!(Request::decode(&r.encode()), Ok(r));
    }

    #[test]
    fn tagged_requests_round_trip(r in request(), left in any::<bool>()) {
        let e: Either<Request, ()> = if left { Either::Left(r) } else { Either::Right(()) };
        prop_assert_eq!(Either::<Request, ()>::decode(&e.encode()), Ok(e));
    }

    #[test]
    fn nested_sums_round_trip(x in any::<i64>(), s in "\\PC*", pick in 0..3u8) {
        let v: Either<i64, Either<String, bool>> = match pick {
            0 => Either::Left(x),
            1 => Either::Right(Either::Left(s)),
            _ => Either::Right(Either::Right(x % 2 == 0)),
        };
        prop_assert_eq!(Codec::decode(&v.encode()), Ok(v));
    }

    #[test]
    fn strings_are_verbatim(s in "\\PC*") {
        prop_assert_eq!(s.encode(), s.clone());
    }
}

#[test]
fn request_examples() {
    assert_eq!(
        Request::decode("Put k v"),
        Ok(Request::Put("k".into(), "v".into()))
    );
    assert_eq!(
        Request::decode("Put k two words"),
        Ok(Request::Put("k".into(), "two words".into()))
    );
    assert_eq!(Request::decode("Get k"), Ok(Request::Get("k".into())));
    for bad in ["", "Get", "Get a b", "Put k", "Put  v", "Delete k", "get k"] {
        assert!(Request::decode(bad).is_err(), "{bad:?} decoded");
    }
    assert_eq!(Either::<Request, ()>::Right(()).encode(), "R:");
    assert_eq!(
        Either::<Request, ()>::Left(Request::Get("k".into())).encode(),
        "L:Get k"
    );
    assert!(Either::<Request, ()>::decode("X:Get k").is_err());
    assert!(<()>::decode("x").is_err());
    assert!(i64::decode("1.5").is_err());
}
