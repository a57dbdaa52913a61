//! Target selectors: `doc`, `page:<n>`, `struct:<ID>`, `res:<name>`,
//! `xobj:<num>`, `annot:<num>` and `mcid:<page>:<first>-<last>`.

use std::fmt;
use std::str::FromStr;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Selector {
    Document,
    /// Zero-based page index.
    Page(usize),
    /// A structure element by /ID, or by object number.
    Struct(String),
    /// A named /Properties resource used by marked content.
    Resource(String),
    XObject(u32),
    Annotation(u32),
    McidRange {
        page: usize,
        first: i64,
        last: i64,
    },
}

impl fmt::Display for Selector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Selector::Document => write!(f, "doc"),
            Selector::Page(n) => write!(f, "page:{n}"),
            Selector::Struct(id) => write!(f, "struct:{id}"),
            Selector::Resource(name) => write!(f, "res:{name}"),
            Selector::XObject(n) => write!(f, "xobj:{n}"),
            Selector::Annotation(n) => write!(f, "annot:{n}"),
            Selector::McidRange { page, first, last } => write!(f, "mcid:{page}:{first}-{last}"),
        }
    }
}

impl FromStr for Selector {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        if s == "doc" {
            return Ok(Selector::Document);
        }
        let (kind, rest) = s
            .split_once(':')
            .ok_or_else(|| format!("bad selector {s:?}; expected doc, page:<n>, struct:<ID>, res:<name>, xobj:<num> or mcid:<page>:<a>-<b>"))?;
        let number = |v: &str| {
            v.parse::<u32>()
                .map_err(|_| format!("bad number {v:?} in selector {s:?}"))
        };
        let nonempty = |v: &str| {
            if v.is_empty() {
                Err(format!("empty name in selector {s:?}"))
            } else {
                Ok(v.to_string())
            }
        };
        match kind {
            "page" => Ok(Selector::Page(number(rest)? as usize)),
            "struct" => Ok(Selector::Struct(nonempty(rest)?)),
            "res" => Ok(Selector::Resource(nonempty(rest.strip_prefix('/').unwrap_or(rest))?)),
            "xobj" => Ok(Selector::XObject(number(rest)?)),
            "annot" => Ok(Selector::Annotation(number(rest)?)),
            "mcid" => {
                let (page, range) = rest
                    .split_once(':')
                    .ok_or_else(|| format!("bad selector {s:?}; expected mcid:<page>:<first>-<last>"))?;
                let (first, last) = range.split_once('-').unwrap_or((range, range));
                let mcid = |v: &str| {
                    v.parse::<i64>()
                        .map_err(|_| format!("bad MCID {v:?} in selector {s:?}"))
                };
                let (first, last) = (mcid(first)?, mcid(last)?);
                if first > last {
                    return Err(format!("empty MCID range in selector {s:?}"));
                }
                Ok(Selector::McidRange {
                    page: number(page)? as usize,
                    first,
                    last,
                })
            }
            _ => Err(format!("unknown selector kind {kind:?} in {s:?}")),
        }
    }
}
