//! The web-service example programs.

use super::web::WebServiceEffect;
use crate::either::Either;
use crate::error::Error;
use crate::freer::{FreerArrow, FreerChoiceArrow, Reified};

/// `get url1 >>> post url2`.
pub fn echo_ws(url1: &str, url2: &str, params: &[&str]) -> FreerArrow<WebServiceEffect, (), ()> {
    FreerArrow::embed(WebServiceEffect::get(url1, params))
        .then(FreerArrow::embed(WebServiceEffect::post(url2, params)))
}

/// Gets from `url1` and posts the same body to `url2` and then `url3`.
pub fn forward(
    url1: &str,
    url2: &str,
    url3: &str,
    params: &[&str],
) -> FreerArrow<WebServiceEffect, (), ()> {
    let post2 = FreerArrow::embed(WebServiceEffect::post(url2, params));
    let post3 = FreerArrow::embed(WebServiceEffect::post(url3, params));
    FreerArrow::embed(WebServiceEffect::get(url1, params))
        .then(post2.fanout(post3))
        .then(FreerArrow::hom(|_| ()))
}

/// Gets a number from `url1`; posts `m1` to `url2` if it is positive and
/// `m2` to `url3` otherwise. A body that does not parse as an integer
/// skips both posts and ends in `Err`.
pub fn forward_if(
    url1: &str,
    url2: &str,
    url3: &str,
    params: &[&str],
    m1: &str,
    m2: &str,
) -> FreerChoiceArrow<WebServiceEffect, (), Result<(), Error>> {
    let (m1, m2) = (m1.to_owned(), m2.to_owned());
    let route = move |body: String| match parse_int(&body) {
        Ok(n) if n > 0 => Either::Left(Either::Left(m1.clone())),
        Ok(_) => Either::Left(Either::Right(m2.clone())),
        Err(e) => Either::Right(e),
    };
    let post2 = FreerChoiceArrow::embed(WebServiceEffect::post(url2, params));
    let post3 = FreerChoiceArrow::embed(WebServiceEffect::post(url3, params));
    FreerChoiceArrow::embed(WebServiceEffect::get(url1, params))
        .map(route)
        .then(post2.fanin(post3).left::<Error>())
        .map(|r: Either<(), Error>| match r {
            Either::Left(()) => Ok(()),
            Either::Right(e) => Err(e),
        })
}

/// Surrounding whitespace is ignored; otherwise strict decimal.
pub fn parse_int(s: &str) -> Result<i64, Error> {
    s.trim().parse::<i64>().map_err(|e| Error::Parse {
        input: s.to_owned(),
        reason: e.to_string(),
    })
}

pub const FIXTURE_NAMES: [&str; 3] = ["echo_ws", "forward", "forwardIf"];

/// Stage count and rendering of a named fixture built with urls `u1`,
/// `u2`, `u3`, no params and messages `m1`, `m2`.
pub fn describe(name: &str) -> Option<(usize, String)> {
    match name {
        "echo_ws" => {
            let p = echo_ws("u1", "u2", &[]);
            Some((p.count(), p.render()))
        }
        "forward" => {
            let p = forward("u1", "u2", "u3", &[]);
            Some((p.count(), p.render()))
        }
        "forwardIf" => {
            let p = forward_if("u1", "u2", "u3", &[], "m1", "m2");
            Some((p.count(), p.render()))
        }
        _ => None,
    }
}
