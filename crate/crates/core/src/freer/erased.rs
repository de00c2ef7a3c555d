//! Type-erased payloads at stage seams.
//!
//! The stage-local types of a freer chain (the effect's input and output,
//! the carried value, the bypass value) are existential. Chains store
//! closures over [`Val`]; the typed wrappers box on the way in and downcast
//! on the way out. Products and sums inside a chain are always
//! `(Val, Val)` and `Either<Val, Val>` boxed as a `Val`.

use std::any::{type_name, Any};
use std::sync::Arc;

use crate::arrow::Payload;
use crate::either::Either;

/// A boxed value whose static type is known only to the typed layer.
pub type Val = Box<dyn Any + Send>;

pub(crate) type ErasedFn = Arc<dyn Fn(Val) -> Val + Send + Sync>;

pub fn into_val<T: Payload>(t: T) -> Val {
    Box::new(t)
}

/// Recovers a typed value.
///
/// # Panics
///
/// Panics if the payload is not a `T`. The typed construction API makes
/// this unreachable; a panic here means a chain was assembled by hand with
/// mismatched [`Op`](super::Op) types.
pub fn from_val<T: Payload>(v: Val) -> T {
    match v.downcast::<T>() {
        Ok(b) => *b,
        Err(_) => panic!("type mismatch at stage seam: expected {}", type_name::<T>()),
    }
}

pub(crate) fn unit() -> Val {
    into_val(())
}

pub(crate) fn pair(a: Val, b: Val) -> Val {
    into_val::<(Val, Val)>((a, b))
}

pub(crate) fn unpair(v: Val) -> (Val, Val) {
    from_val::<(Val, Val)>(v)
}

pub(crate) fn sum(e: Either<Val, Val>) -> Val {
    into_val(e)
}

pub(crate) fn unsum(v: Val) -> Either<Val, Val> {
    from_val::<Either<Val, Val>>(v)
}

pub(crate) fn lift<X: Payload, Y: Payload>(f: impl Fn(X) -> Y + Send + Sync + 'static) -> ErasedFn {
    Arc::new(move |v| into_val(f(from_val::<X>(v))))
}

pub(crate) fn after(first: ErasedFn, second: ErasedFn) -> ErasedFn {
    Arc::new(move |v| second(first(v)))
}
