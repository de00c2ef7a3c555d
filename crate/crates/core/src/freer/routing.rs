//! Pure bijections used to re-route carried and bypass values when
//! strengthening or branching a chain. Each function is the inverse of its
//! partner.

use crate::either::Either;

pub fn assoc<A, B, C>(((a, b), c): ((A, B), C)) -> (A, (B, C)) {
    (a, (b, c))
}

pub fn unassoc<A, B, C>((a, (b, c)): (A, (B, C))) -> ((A, B), C) {
    ((a, b), c)
}

pub fn distr<A, B, C, D>((e, d): (Either<(A, B), C>, D)) -> Either<((A, B), D), (C, D)> {
    match e {
        Either::Left(ab) => Either::Left((ab, d)),
        Either::Right(c) => Either::Right((c, d)),
    }
}

pub fn undistr<A, B, C, D>(e: Either<((A, B), D), (C, D)>) -> (Either<(A, B), C>, D) {
    match e {
        Either::Left((ab, d)) => (Either::Left(ab), d),
        Either::Right((c, d)) => (Either::Right(c), d),
    }
}

pub fn assocsum<X, Y, Z>(e: Either<Either<X, Y>, Z>) -> Either<X, Either<Y, Z>> {
    match e {
        Either::Left(Either::Left(x)) => Either::Left(x),
        Either::Left(Either::Right(y)) => Either::Right(Either::Left(y)),
        Either::Right(z) => Either::Right(Either::Right(z)),
    }
}

pub fn unassocsum<X, Y, Z>(e: Either<X, Either<Y, Z>>) -> Either<Either<X, Y>, Z> {
    match e {
        Either::Left(x) => Either::Left(Either::Left(x)),
        Either::Right(Either::Left(y)) => Either::Left(Either::Right(y)),
        Either::Right(Either::Right(z)) => Either::Right(z),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn fixed_inverse_pairs() {
        assert_eq!(unassoc(assoc(((1, 2), 3))), ((1, 2), 3));
        let x: (Either<(i32, i32), &str>, &str) = (Either::Left((1, 2)), "d");
        assert_eq!(undistr(distr(x)), x);
        let s: Either<Either<i32, i32>, i32> = Either::Left(Either::Left(1));
        assert_eq!(unassocsum(assocsum(s)), s);
    }

    fn either3() -> impl Strategy<Value = Either<Either<i8, u8>, bool>> {
        prop_oneof![
            any::<i8>().prop_map(|x| Either::Left(Either::Left(x))),
            any::<u8>().prop_map(|y| Either::Left(Either::Right(y))),
            any::<bool>().prop_map(Either::Right),
        ]
    }

    proptest! {
        #[test]
        fn assoc_roundtrips(a: i8, b: u8, c: bool) {
            prop_assert_eq!(unassoc(assoc(((a, b), c))), ((a, b), c));
            prop_assert_eq!(assoc(unassoc((a, (b, c)))), (a, (b, c)));
        }

        #[test]
        fn distr_roundtrips(left: bool, a: i8, b: u8, c: i16, d: bool) {
            let e = if left { Either::Left((a, b)) } else { Either::Right(c) };
            prop_assert_eq!(undistr(distr((e, d))), (e, d));
        }

        #[test]
        fn assocsum_roundtrips(e in either3()) {
            prop_assert_eq!(unassocsum(assocsum(e)), e);
        }
    }
}
