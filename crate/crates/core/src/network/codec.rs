//! Text encodings for values that cross the network.

use crate::arrow::Payload;
use crate::either::Either;

/// A value with a text form. `decode(&v.encode())` must give back `v`.
pub trait Codec: Payload + Sized {
    fn encode(&self) -> String;
    fn decode(text: &str) -> Result<Self, String>;
}

impl Codec for String {
    fn encode(&self) -> String {
        self.clone()
    }

    fn decode(text: &str) -> Result<Self, String> {
        Ok(text.to_owned())
    }
}

impl Codec for i64 {
    fn encode(&self) -> String {
        self.to_string()
    }

    fn decode(text: &str) -> Result<Self, String> {
        text.parse().map_err(|e| format!("{e}"))
    }
}

impl Codec for bool {
    fn encode(&self) -> String {
        self.to_string()
    }

    fn decode(text: &str) -> Result<Self, String> {
        text.parse().map_err(|e| format!("{e}"))
    }
}

impl Codec for () {
    fn encode(&self) -> String {
        String::new()
    }

    fn decode(text: &str) -> Result<Self, String> {
        if text.is_empty() {
            Ok(())
        } else {
            Err(format!("expected an empty payload, got {text:?}"))
        }
    }
}

/// `L:` or `R:` followed by the side's own encoding.
impl<L: Codec, R: Codec> Codec for Either<L, R> {
    fn encode(&self) -> String {
        match self {
            Either::Left(l) => format!("L:{}", l.encode()),
            Either::Right(r) => format!("R:{}", r.encode()),
        }
    }

    fn decode(text: &str) -> Result<Self, String> {
        if let Some(rest) = text.strip_prefix("L:") {
            L::decode(rest).map(Either::Left)
        } else if let Some(rest) = text.strip_prefix("R:") {
            R::decode(rest).map(Either::Right)
        } else {
            Err(format!("missing L:/R: tag in {text:?}"))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn round_trip<T: Codec + PartialEq + std::fmt::Debug>(v: T) {
        assert_eq!(T::decode(&v.encode()), Ok(v));
    }

    #[test]
    fn fixed_values() {
        round_trip(String::new());
        round_trip("multi\nline text".to_owned());
        round_trip(());
        round_trip(-17i64);
        round_trip(Either::<i64, ()>::Right(()));
        round_trip(Either::<Either<String, i64>, bool>::Left(Either::Left(
            "L:x".into(),
        )));
    }

    #[test]
    fn bad_input_is_rejected() {
        assert!(i64::decode("4x").is_err());
        assert!(<()>::decode("x").is_err());
        assert!(Either::<i64, i64>::decode("X:1").is_err());
    }

    proptest! {
        #[test]
        fn strings_and_ints_round_trip(s in ".*", n in any::<i64>()) {
            prop_assert_eq!(String::decode(&s.encode()), Ok(s.clone()));
            prop_assert_eq!(i64::decode(&n.encode()), Ok(n));
            let e: Either<String, i64> = Either::Left(s.clone());
            prop_assert_eq!(Either::decode(&e.encode()), Ok(e));
        }
    }
}
