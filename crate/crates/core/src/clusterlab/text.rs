//! Plain-text graph format:
//!
//! ```text
//! # five-site chain with one noisy link
//! site 1
//! site 2
//! edge 1 2 0.25
//! kappa 2 1
//! ```
//!
//! `edge` takes an optional phase (default 0). Sites must be declared before
//! they are referenced.

use std::fmt::Write as _;
use std::str::FromStr;

use super::{ClusterGraph, Site};
use crate::error::{Error, Result};

fn parse_err(line: usize, msg: impl Into<String>) -> Error {
    Error::Parse { line, msg: msg.into() }
}

fn field<T: FromStr>(tok: Option<&str>, line: usize, what: &str) -> Result<T> {
    let tok = tok.ok_or_else(|| parse_err(line, format!("missing {what}")))?;
    tok.parse().map_err(|_| parse_err(line, format!("bad {what} `{tok}`")))
}

impl ClusterGraph {
    pub fn from_text(src: &str) -> Result<Self> {
        let mut g = ClusterGraph::new(Vec::new())?;
        for (idx, raw) in src.lines().enumerate() {
            let line = idx + 1;
            let body = raw.split('#').next().unwrap_or("");
            let mut toks = body.split_whitespace();
            let Some(kind) = toks.next() else { continue };
            match kind {
                "site" => {
                    let s: Site = field(toks.next(), line, "site label")?;
                    if g.contains(s) {
                        return Err(parse_err(line, format!("duplicate site {s}")));
                    }
                    g.sites.push(s);
                    g.kappa.insert(s, 0);
                }
                "edge" => {
                    let a: Site = field(toks.next(), line, "edge endpoint")?;
                    let b: Site = field(toks.next(), line, "edge endpoint")?;
                    let theta = match toks.next() {
                        Some(t) => field(Some(t), line, "edge phase")?,
                        None => 0.0,
                    };
                    g.add_edge(a, b, theta).map_err(|e| parse_err(line, e.to_string()))?;
                }
                "kappa" => {
                    let s: Site = field(toks.next(), line, "site label")?;
                    let v: u8 = field(toks.next(), line, "kappa value")?;
                    g.set_kappa(s, v).map_err(|e| parse_err(line, e.to_string()))?;
                }
                other => return Err(parse_err(line, format!("unknown declaration `{other}`"))),
            }
            if let Some(extra) = toks.next() {
                return Err(parse_err(line, format!("unexpected token `{extra}`")));
            }
        }
        Ok(g)
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for s in &self.sites {
            writeln!(out, "site {s}").unwrap();
        }
        for ((a, b), t) in self.edges() {
            if t == 0.0 {
                writeln!(out, "edge {a} {b}").unwrap();
            } else {
                writeln!(out, "edge {a} {b} {t:?}").unwrap();
            }
        }
        for s in &self.sites {
            if self.kappa[s] != 0 {
                writeln!(out, "kappa {s} {}", self.kappa[s]).unwrap();
            }
        }
        out
    }
}
