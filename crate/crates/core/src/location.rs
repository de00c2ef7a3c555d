//! Location names and values annotated with their owner.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::Error;

/// A named participant. Names are nonempty and contain no whitespace, so
/// they can be written into line-oriented wire frames verbatim.
///
/// Locations are totally ordered by name; broadcast targets are sent to in
/// this order.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub struct Location(String);

impl Location {
    pub fn new(name: impl Into<String>) -> Result<Self, Error> {
        let name = name.into();
        if name.is_empty() || name.chars().any(char::is_whitespace) {
            return Err(Error::InvalidLocation(name));
        }
        Ok(Location(name))
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl TryFrom<String> for Location {
    type Error = Error;

    fn try_from(s: String) -> Result<Self, Error> {
        Location::new(s)
    }
}

impl From<Location> for String {
    fn from(l: Location) -> String {
        l.0
    }
}

impl std::str::FromStr for Location {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        Location::new(s)
    }
}

impl fmt::Display for Location {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl fmt::Debug for Location {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

/// Shorthand for building a location from a literal known to be valid.
///
/// # Panics
///
/// Panics if `name` is empty or contains whitespace.
pub fn loc(name: &str) -> Location {
    Location::new(name).expect("invalid location literal")
}

/// A value of type `T` that lives at `owner`.
///
/// While an endpoint program runs at location `L`, the payload is only ever
/// read through [`Located::unwrap_at`], which fails unless the owner is `L`
/// and the payload is present.
#[derive(Clone, PartialEq, Eq)]
pub struct Located<T> {
    owner: Location,
    payload: Option<T>,
}

impl<T> Located<T> {
    pub fn present(owner: Location, value: T) -> Self {
        Located {
            owner,
            payload: Some(value),
        }
    }

    pub fn absent(owner: Location) -> Self {
        Located {
            owner,
            payload: None,
        }
    }

    pub fn owner(&self) -> &Location {
        &self.owner
    }

    pub fn is_present(&self) -> bool {
        self.payload.is_some()
    }

    /// Reads the payload while executing at `at`.
    pub fn unwrap_at(self, at: &Location) -> Result<T, Error> {
        if &self.owner != at {
            return Err(Error::WrongLocation {
                owner: self.owner,
                at: at.clone(),
            });
        }
        self.payload
            .ok_or_else(|| Error::AbsentPayload { owner: at.clone() })
    }

    /// The payload, if any, without a location check. Used by oracles and
    /// reporting code that inspects results after execution.
    pub fn payload(&self) -> Option<&T> {
        self.payload.as_ref()
    }

    pub fn into_payload(self) -> Option<T> {
        self.payload
    }
}

impl<T: fmt::Debug> fmt::Debug for Located<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.payload {
            Some(v) => write!(f, "{v:?} @ {}", self.owner),
            None => write!(f, "<absent> @ {}", self.owner),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_whitespace_and_empty_names() {
        assert!(Location::new("").is_err());
        assert!(Location::new("a b").is_err());
        assert!(Location::new("a\nb").is_err());
        assert!(Location::new("client").is_ok());
    }

    #[test]
    fn unwrap_checks_owner_and_presence() {
        let v = Located::present(loc("client"), 3);
        assert_eq!(v.clone().unwrap_at(&loc("client")), Ok(3));
        assert!(matches!(
            v.unwrap_at(&loc("server")),
            Err(Error::WrongLocation { .. })
        ));
        let a: Located<i32> = Located::absent(loc("server"));
        assert!(matches!(
            a.unwrap_at(&loc("server")),
            Err(Error::AbsentPayload { .. })
        ));
    }

    #[test]
    fn ordering_is_lexicographic() {
        let mut v = vec![loc("primary"), loc("backup"), loc("client")];
        v.sort();
        assert_eq!(v, vec![loc("backup"), loc("client"), loc("primary")]);
    }
}
