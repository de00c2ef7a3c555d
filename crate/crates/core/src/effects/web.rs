//! A web-service signature with a scripted test double for its handler.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::{Arc, Mutex};

use crate::arrow::HostArrow;
use crate::error::Error;
use crate::freer::{from_val, into_val, Op, Val};

/// `Get` takes no input and yields the response body; `Post` takes a body
/// and yields nothing.
#[derive(Clone, PartialEq, Eq)]
pub enum WebServiceEffect {
    Get { url: String, params: Vec<String> },
    Post { url: String, params: Vec<String> },
}

impl WebServiceEffect {
    /// # Panics
    ///
    /// Panics if `url` is empty.
    pub fn get(url: &str, params: &[&str]) -> Op<Self, (), String> {
        assert!(!url.is_empty(), "url must be nonempty");
        Op::declare(WebServiceEffect::Get {
            url: url.to_owned(),
            params: owned(params),
        })
    }

    /// # Panics
    ///
    /// Panics if `url` is empty.
    pub fn post(url: &str, params: &[&str]) -> Op<Self, String, ()> {
        assert!(!url.is_empty(), "url must be nonempty");
        Op::declare(WebServiceEffect::Post {
            url: url.to_owned(),
            params: owned(params),
        })
    }

    pub fn url(&self) -> &str {
        match self {
            WebServiceEffect::Get { url, .. } | WebServiceEffect::Post { url, .. } => url,
        }
    }
}

fn owned(params: &[&str]) -> Vec<String> {
    params.iter().map(|s| (*s).to_owned()).collect()
}

impl fmt::Debug for WebServiceEffect {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            WebServiceEffect::Get { url, params } => write!(f, "WsGet({url}, {params:?})"),
            WebServiceEffect::Post { url, params } => write!(f, "WsPost({url}, {params:?})"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PostRecord {
    pub url: String,
    pub params: Vec<String>,
    pub body: String,
}

/// Canned `Get` responses keyed by `(url, params)`, and a log of every
/// `Post` performed.
#[derive(Debug, Default)]
pub struct WebBackendScript {
    get_responses: BTreeMap<(String, Vec<String>), String>,
    post_log: Mutex<Vec<PostRecord>>,
}

impl WebBackendScript {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn respond(mut self, url: &str, params: &[&str], body: &str) -> Self {
        self.get_responses
            .insert((url.to_owned(), owned(params)), body.to_owned());
        self
    }

    pub fn post_log(&self) -> Vec<PostRecord> {
        self.post_log.lock().unwrap().clone()
    }

    fn lookup(&self, url: &str, params: &[String]) -> Result<String, Error> {
        self.get_responses
            .get(&(url.to_owned(), params.to_vec()))
            .cloned()
            .ok_or_else(|| Error::NoScriptedResponse {
                url: url.to_owned(),
            })
    }

    fn record(&self, url: &str, params: &[String], body: String) {
        self.post_log.lock().unwrap().push(PostRecord {
            url: url.to_owned(),
            params: params.to_vec(),
            body,
        });
    }
}

/// Interprets web effects against `script`.
pub fn web_handler(
    script: Arc<WebBackendScript>,
) -> impl Fn(&WebServiceEffect) -> HostArrow<Val, Val> + Clone + Send + Sync {
    move |e: &WebServiceEffect| {
        let script = script.clone();
        match e.clone() {
            WebServiceEffect::Get { url, params } => {
                HostArrow::new(move |_: Val, _| script.lookup(&url, &params).map(into_val))
            }
            WebServiceEffect::Post { url, params } => HostArrow::new(move |v: Val, _| {
                script.record(&url, &params, from_val::<String>(v));
                Ok(into_val(()))
            }),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arrow::HostEnv;
    use crate::location::loc;

    fn env() -> HostEnv {
        HostEnv::new(loc("web"))
    }

    #[test]
    fn get_returns_scripted_text() {
        let script = Arc::new(WebBackendScript::new().respond("u1", &[], "5"));
        let h = web_handler(script);
        let out = h(WebServiceEffect::get("u1", &[]).effect()).run(into_val(()), &env());
        assert_eq!(from_val::<String>(out.unwrap()), "5");
    }

    #[test]
    fn post_appends_to_log() {
        let script = Arc::new(WebBackendScript::new());
        let h = web_handler(script.clone());
        h(WebServiceEffect::post("u2", &[]).effect())
            .run(into_val("hello".to_owned()), &env())
            .unwrap();
        assert_eq!(
            script.post_log(),
            vec![PostRecord {
                url: "u2".into(),
                params: vec![],
                body: "hello".into()
            }]
        );
    }

    #[test]
    fn unknown_url_is_named_in_error() {
        let h = web_handler(Arc::new(WebBackendScript::new()));
        let err = h(WebServiceEffect::get("u9", &[]).effect())
            .run(into_val(()), &env())
            .err()
            .unwrap();
        assert_eq!(err.to_string(), "no scripted response for u9");
    }
}
