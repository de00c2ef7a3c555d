//! Global choreographies.
//!
//! A [`Choreography`] is one program describing what every location does.
//! Values are [`Located`] at an owner; three operations act on them:
//!
//! - [`locally`]: the owner runs a host arrow on its value;
//! - [`comm`]: the value moves from one location to another;
//! - [`cond_raw`] / [`cond_prime`]: the owner of a scrutinee shares it with
//!   the participants of a sub-choreography, which then branch on it.
//!
//! The network module projects a choreography to one endpoint program per
//! location.

mod fixtures;

use std::collections::BTreeSet;
use std::fmt;
use std::sync::Arc;

pub use fixtures::{
    as_put, by_name, echo_choreo, get_input, get_request, handle_request, kvs_choreo, Request,
    CHOREOGRAPHIES, KV_STORE,
};

use crate::arrow::{HostArrow, Payload};
use crate::error::{Error, Result};
use crate::freer::{from_val, into_val, FreerChoiceArrow, MonoidSpec, Op, Reified, Val};
use crate::location::{Located, Location};
use crate::network::Codec;

pub type Choreography<B, A> = FreerChoiceArrow<ChoreoOp, B, A>;

pub(crate) type Encoder = Arc<dyn Fn(Val, &Location) -> Result<String> + Send + Sync>;
pub(crate) type Decoder = Arc<dyn Fn(&str) -> Result<Val, String> + Send + Sync>;
pub(crate) type Unwrapper = Arc<dyn Fn(Val, &Location) -> Result<Val> + Send + Sync>;
pub(crate) type Splitter = Arc<dyn Fn(Val, &Location) -> Result<(String, Val)> + Send + Sync>;
pub(crate) type Maker = Arc<dyn Fn() -> Val + Send + Sync>;

/// The choreography effect signature. Values are erased; the typed smart
/// constructors in this module build them.
pub enum ChoreoOp {
    Local(LocalOp),
    Comm(CommOp),
    Cond(CondOp),
}

pub struct LocalOp {
    pub(crate) loc: Location,
    /// `Located<B> -> Located<A>`, unwrapping at the running location.
    pub(crate) run: HostArrow<Val, Val>,
    pub(crate) absent: Maker,
}

pub struct CommOp {
    pub(crate) src: Location,
    pub(crate) dst: Location,
    /// Unwraps at the sender and encodes the payload.
    pub(crate) encode: Encoder,
    /// Decodes into a value present at `dst`.
    pub(crate) decode: Decoder,
    pub(crate) absent: Maker,
}

pub struct CondOp {
    pub(crate) loc: Location,
    pub(crate) sub: Choreography<Val, Val>,
    pub(crate) participants: BTreeSet<Location>,
    pub(crate) unwrap: Unwrapper,
    pub(crate) split: Splitter,
    pub(crate) decode: Decoder,
    /// Result at locations outside `participants`.
    pub(crate) outside: Maker,
}

impl LocalOp {
    pub fn loc(&self) -> &Location {
        &self.loc
    }
}

impl CommOp {
    pub fn src(&self) -> &Location {
        &self.src
    }

    pub fn dst(&self) -> &Location {
        &self.dst
    }
}

impl CondOp {
    pub fn loc(&self) -> &Location {
        &self.loc
    }

    /// The scrutinee owner together with every participant of the
    /// sub-choreography.
    pub fn participants(&self) -> &BTreeSet<Location> {
        &self.participants
    }

    /// The branch body, with its input and output erased.
    pub fn sub(&self) -> &Choreography<Val, Val> {
        &self.sub
    }
}

impl ChoreoOp {
    /// Locations this single operation involves.
    pub fn locations(&self) -> BTreeSet<Location> {
        match self {
            ChoreoOp::Local(op) => BTreeSet::from([op.loc.clone()]),
            ChoreoOp::Comm(op) => BTreeSet::from([op.src.clone(), op.dst.clone()]),
            ChoreoOp::Cond(op) => op.participants.clone(),
        }
    }
}

impl fmt::Debug for ChoreoOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ChoreoOp::Local(op) => write!(f, "Local({})", op.loc),
            ChoreoOp::Comm(op) => write!(f, "Comm({}, {})", op.src, op.dst),
            ChoreoOp::Cond(op) => {
                write!(
                    f,
                    "Cond({}, {:?}, {} stages)",
                    op.loc,
                    op.participants,
                    op.sub.count()
                )
            }
        }
    }
}

/// A pure function placing a value at `owner`. Inside a branch the
/// scrutinee arrives unwrapped at every participant; wrapping it again is
/// what lets the owner run local steps on it or send it.
pub fn wrap<T>(owner: Location) -> impl Fn(T) -> Located<T> + Clone + Send + Sync + 'static {
    move |t| Located::present(owner.clone(), t)
}

pub fn discard<B: Payload>() -> Choreography<B, ()> {
    FreerChoiceArrow::hom(|_| ())
}

/// `loc` runs `inner` on its value.
pub fn locally<B: Payload, A: Payload>(
    loc: Location,
    inner: HostArrow<B, A>,
) -> Choreography<Located<B>, Located<A>> {
    let run = HostArrow::new(move |v: Val, env| {
        let at = env.location();
        let b = from_val::<Located<B>>(v).unwrap_at(at)?;
        let a = inner.run(b, env)?;
        Ok(into_val(Located::present(at.clone(), a)))
    });
    let owner = loc.clone();
    let absent: Maker = Arc::new(move || into_val(Located::<A>::absent(owner.clone())));
    FreerChoiceArrow::embed(Op::declare(ChoreoOp::Local(LocalOp { loc, run, absent })))
}

/// `locally` for a step that needs no input.
pub fn locally0<A: Payload>(
    loc: Location,
    inner: HostArrow<(), A>,
) -> Choreography<(), Located<A>> {
    let owner = loc.clone();
    locally(loc, inner).lmap(move |()| Located::present(owner.clone(), ()))
}

/// `src ~> dst`: moves a value. Fails with [`Error::SelfCommunication`]
/// when `src == dst`.
pub fn comm<T: Codec>(
    src: Location,
    dst: Location,
) -> Result<Choreography<Located<T>, Located<T>>> {
    if src == dst {
        return Err(Error::SelfCommunication(src));
    }
    let encode: Encoder =
        Arc::new(|v: Val, at: &Location| Ok(from_val::<Located<T>>(v).unwrap_at(at)?.encode()));
    let to = dst.clone();
    let decode: Decoder =
        Arc::new(move |s: &str| Ok(into_val(Located::present(to.clone(), T::decode(s)?))));
    let owner = dst.clone();
    let absent: Maker = Arc::new(move || into_val(Located::<T>::absent(owner.clone())));
    Ok(FreerChoiceArrow::embed(Op::declare(ChoreoOp::Comm(
        CommOp {
            src,
            dst,
            encode,
            decode,
            absent,
        },
    ))))
}

fn cond_with<B: Codec, A: Payload>(
    loc: Location,
    sub: Choreography<B, A>,
    outside: Maker,
) -> Choreography<Located<B>, A> {
    let mut participants = participants(&sub);
    participants.insert(loc.clone());
    let unwrap: Unwrapper =
        Arc::new(|v: Val, at: &Location| Ok(into_val(from_val::<Located<B>>(v).unwrap_at(at)?)));
    let split: Splitter = Arc::new(|v: Val, at: &Location| {
        let b = from_val::<Located<B>>(v).unwrap_at(at)?;
        Ok((b.encode(), into_val(b)))
    });
    let decode: Decoder = Arc::new(|s: &str| B::decode(s).map(into_val));
    let op = CondOp {
        loc,
        sub: sub.erase(),
        participants,
        unwrap,
        split,
        decode,
        outside,
    };
    FreerChoiceArrow::embed(Op::declare(ChoreoOp::Cond(op)))
}

/// The owner of a `B` shares it with the participants of `sub`, and they
/// all run `sub` on it. Locations outside `sub` get `()`.
pub fn cond_raw<B: Codec>(loc: Location, sub: Choreography<B, ()>) -> Choreography<Located<B>, ()> {
    cond_with(loc, sub, Arc::new(|| into_val(())))
}

/// `cond_raw` for a branch whose result lives at `owner`. Locations
/// outside the branch get an absent value owned by `owner`, so `owner` must
/// take part in it.
pub fn cond_raw_located<B: Codec, T: Payload>(
    loc: Location,
    sub: Choreography<B, Located<T>>,
    owner: Location,
) -> Result<Choreography<Located<B>, Located<T>>> {
    if owner != loc && !participants(&sub).contains(&owner) {
        return Err(Error::NonParticipantOwner { owner });
    }
    Ok(cond_with(
        loc,
        sub,
        Arc::new(move || into_val(Located::<T>::absent(owner.clone()))),
    ))
}

/// Branches on the result of a local computation at `loc`.
pub fn cond_prime<B: Payload, X: Codec>(
    loc: Location,
    scrutinee: HostArrow<B, X>,
    sub: Choreography<X, ()>,
) -> Choreography<Located<B>, ()> {
    locally(loc.clone(), scrutinee).then(cond_raw(loc, sub))
}

pub fn cond_prime_located<B: Payload, X: Codec, T: Payload>(
    loc: Location,
    scrutinee: HostArrow<B, X>,
    sub: Choreography<X, Located<T>>,
    owner: Location,
) -> Result<Choreography<Located<B>, Located<T>>> {
    Ok(locally(loc.clone(), scrutinee).then(cond_raw_located(loc, sub, owner)?))
}

/// Every location the choreography involves, including those inside
/// conditionals.
pub fn participants<B, A>(c: &Choreography<B, A>) -> BTreeSet<Location> {
    c.approximate(ChoreoOp::locations, &MonoidSpec::set_union())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arrow::{Host, PreArrow};
    use crate::either::Either;
    use crate::location::loc;

    #[test]
    fn single_operations() {
        let l = locally(loc("a"), Host::arr(|x: i64| x + 1));
        assert_eq!(l.count(), 1);
        assert_eq!(participants(&l), BTreeSet::from([loc("a")]));
        let c = comm::<i64>(loc("a"), loc("b")).unwrap();
        assert_eq!(participants(&c), BTreeSet::from([loc("a"), loc("b")]));
        assert_eq!(participants(&discard::<i64>()), BTreeSet::new());
    }

    #[test]
    fn self_communication_is_rejected() {
        assert_eq!(
            comm::<String>(loc("client"), loc("client")).err(),
            Some(Error::SelfCommunication(loc("client")))
        );
    }

    #[test]
    fn cond_collects_nested_participants() {
        let sub = FreerChoiceArrow::hom(wrap::<i64>(loc("a")))
            .then(comm::<i64>(loc("a"), loc("b")).unwrap())
            .then(discard());
        let c = cond_raw(loc("c"), sub.clone());
        assert_eq!(c.count(), 1);
        assert_eq!(
            participants(&c),
            BTreeSet::from([loc("a"), loc("b"), loc("c")])
        );
        let p = cond_prime(loc("c"), Host::arr(|x: i64| x), sub);
        assert_eq!(p.count(), 2);
    }

    #[test]
    fn located_branch_owner_must_participate() {
        let sub = FreerChoiceArrow::hom(wrap::<Either<i64, i64>>(loc("a")));
        assert!(cond_raw_located(loc("a"), sub.clone(), loc("a")).is_ok());
        assert_eq!(
            cond_raw_located(loc("a"), sub, loc("z")).err(),
            Some(Error::NonParticipantOwner { owner: loc("z") })
        );
    }
}
