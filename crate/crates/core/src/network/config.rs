//! Endpoint address files.
//!
//! A TOML document with one `[endpoints]` table mapping location names to
//! `host:port`:
//!
//! ```toml
//! [endpoints]
//! client = "127.0.0.1:7301"
//! server = "127.0.0.1:7302"
//! ```

use std::collections::BTreeMap;
use std::path::Path;

use serde::Deserialize;

use crate::error::{Error, Result};
use crate::location::Location;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EndpointConfig {
    endpoints: BTreeMap<Location, String>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct Raw {
    endpoints: BTreeMap<String, String>,
}

impl EndpointConfig {
    pub fn new<I, S>(entries: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Location, S)>,
        S: Into<String>,
    {
        let mut endpoints = BTreeMap::new();
        for (l, addr) in entries {
            let addr = addr.into();
            check_address(&l, &addr)?;
            endpoints.insert(l, addr);
        }
        Ok(EndpointConfig { endpoints })
    }

    pub fn parse(text: &str) -> Result<Self> {
        let raw: Raw = toml::from_str(text).map_err(|e| Error::Config(e.message().to_owned()))?;
        let entries = raw
            .endpoints
            .into_iter()
            .map(|(name, addr)| Ok((Location::new(name)?, addr)))
            .collect::<Result<Vec<_>>>()?;
        Self::new(entries)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Config(format!("{}: {e}", path.display())))?;
        Self::parse(&text)
    }

    pub fn address(&self, l: &Location) -> Result<&str> {
        self.endpoints
            .get(l)
            .map(String::as_str)
            .ok_or_else(|| Error::UnknownLocation(l.clone()))
    }

    pub fn locations(&self) -> impl Iterator<Item = &Location> {
        self.endpoints.keys()
    }

    pub fn to_toml(&self) -> String {
        let mut out = String::from("[endpoints]\n");
        for (l, addr) in &self.endpoints {
            out.push_str(&format!("{l} = {addr:?}\n"));
        }
        out
    }
}

fn check_address(l: &Location, addr: &str) -> Result<()> {
    match addr.rsplit_once(':') {
        Some((host, port)) if !host.is_empty() && port.parse::<u16>().is_ok() => Ok(()),
        _ => Err(Error::Config(format!(
            "address of {l} must be host:port, got {addr:?}"
        ))),
    }
}
