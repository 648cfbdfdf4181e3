use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Maximum path length a robber (or a blocked path) may use.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Speed {
    Finite(u32),
    Unbounded,
}

impl Speed {
    pub fn finite(s: u32) -> Result<Speed> {
        if s == 0 {
            return Err(Error::InvalidParameter("speed must be at least 1".into()));
        }
        Ok(Speed::Finite(s))
    }

    /// Path-length limit, `None` when unbounded.
    pub fn limit(self) -> Option<usize> {
        match self {
            Speed::Finite(s) => Some(s as usize),
            Speed::Unbounded => None,
        }
    }

    /// True when every simple path in an `n`-vertex graph is an s-path.
    pub fn covers_all_paths(self, n: usize) -> bool {
        match self {
            Speed::Finite(s) => s as usize + 1 >= n,
            Speed::Unbounded => true,
        }
    }
}

impl PartialOrd for Speed {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Speed {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        use Speed::*;
        match (self, other) {
            (Finite(a), Finite(b)) => a.cmp(b),
            (Finite(_), Unbounded) => std::cmp::Ordering::Less,
            (Unbounded, Finite(_)) => std::cmp::Ordering::Greater,
            (Unbounded, Unbounded) => std::cmp::Ordering::Equal,
        }
    }
}

impl fmt::Display for Speed {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Speed::Finite(s) => write!(f, "{s}"),
            Speed::Unbounded => write!(f, "inf"),
        }
    }
}

impl FromStr for Speed {
    type Err = Error;

    fn from_str(s: &str) -> Result<Speed> {
        match s.trim() {
            "inf" | "infinity" | "∞" => Ok(Speed::Unbounded),
            t => {
                let v: u32 = t
                    .parse()
                    .map_err(|_| Error::InvalidParameter(format!("bad speed `{t}`")))?;
                Speed::finite(v)
            }
        }
    }
}
