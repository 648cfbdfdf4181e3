use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::cuts::{flow, is_walk, max_edge_disjoint_paths, Cut};
use crate::error::{Error, Result};
use crate::multigraph::{Dense, EdgeId, MultiGraph, VertexId};

/// `k+1` pairwise edge-disjoint `(x, y)`-paths: a `θ_{k+1}` immersion.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ImmersionWitness {
    pub x: VertexId,
    pub y: VertexId,
    pub paths: Vec<Vec<EdgeId>>,
}

impl ImmersionWitness {
    pub fn order(&self) -> usize {
        self.paths.len()
    }

    /// Checks that the paths are edge-disjoint `(x, y)`-walks of `g` and that
    /// there are at least `k+1` of them.
    pub fn verify(&self, g: &MultiGraph, k: usize) -> Result<()> {
        let bad = |m: String| Err(Error::InvalidCertificate(m));
        if self.x == self.y {
            return bad("witness endpoints coincide".into());
        }
        if self.paths.len() < k + 1 {
            return bad(format!("{} paths, need {}", self.paths.len(), k + 1));
        }
        let mut used = BTreeSet::new();
        for p in &self.paths {
            if !is_walk(g, p, self.x, self.y) {
                return bad("a witness path is not an (x, y)-walk".into());
            }
            for &e in p {
                if !used.insert(e) {
                    return bad(format!("edge {e} used twice"));
                }
            }
        }
        Ok(())
    }

    pub fn to_text(&self) -> String {
        let mut out = format!("witness {} {}\n", self.x, self.y);
        for p in &self.paths {
            out.push_str("path");
            for e in p {
                out.push_str(&format!(" {e}"));
            }
            out.push('\n');
        }
        out
    }

    pub fn parse(text: &str) -> Result<Self> {
        let bad = |m: &str| Error::InvalidCertificate(m.to_string());
        let mut lines = text
            .lines()
            .map(str::trim)
            .filter(|l| !l.is_empty() && !l.starts_with('#'));
        let head = lines.next().ok_or_else(|| bad("empty witness"))?;
        let parts: Vec<&str> = head.split_whitespace().collect();
        let (x, y) = match parts.as_slice() {
            ["witness", x, y] => (
                x.parse().map_err(|_| bad("bad vertex"))?,
                y.parse().map_err(|_| bad("bad vertex"))?,
            ),
            _ => return Err(bad("expected `witness x y`")),
        };
        let mut paths = Vec::new();
        for line in lines {
            let mut it = line.split_whitespace();
            if it.next() != Some("path") {
                return Err(bad("expected `path` line"));
            }
            paths.push(
                it.map(|e| e.parse().map(EdgeId).map_err(|_| bad("bad edge id")))
                    .collect::<Result<_>>()?,
            );
        }
        Ok(ImmersionWitness {
            x: VertexId(x),
            y: VertexId(y),
            paths,
        })
    }
}

/// Cuts of size at most `k` on the tree edges of a flow-equivalent tree.
/// Every pair's edge connectivity is the minimum over its tree path.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FreeCertificate {
    pub k: usize,
    pub cuts: Vec<(VertexId, VertexId, Cut)>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ThetaCheck {
    Free(FreeCertificate),
    Witness(ImmersionWitness),
}

impl ThetaCheck {
    pub fn witness(&self) -> Option<&ImmersionWitness> {
        match self {
            ThetaCheck::Witness(w) => Some(w),
            ThetaCheck::Free(_) => None,
        }
    }

    pub fn is_free(&self) -> bool {
        matches!(self, ThetaCheck::Free(_))
    }
}

/// Flow-equivalent tree (Gusfield): for each `s >= 1`, its tree parent and
/// the source side of a minimum cut between them. Node 0 is the root.
pub(crate) fn equivalent_flow_tree(d: &Dense) -> Vec<(usize, usize, Vec<bool>)> {
    let n = d.n();
    let mut parent = vec![0usize; n];
    let mut out = Vec::with_capacity(n.saturating_sub(1));
    for s in 1..n {
        let t = parent[s];
        let f = flow::max_flow(d, s, t, None);
        for (i, p) in parent.iter_mut().enumerate().skip(s + 1) {
            if *p == t && f.source_side[i] {
                *p = s;
            }
        }
        out.push((s, t, f.source_side));
    }
    out
}

/// Decides whether `θ_{k+1}` immerses in `g`, i.e. whether some pair of
/// vertices is joined by `k+1` edge-disjoint paths.
pub fn theta_free(g: &MultiGraph, k: usize) -> Result<ThetaCheck> {
    let d = Dense::new(g);
    let mut cuts = Vec::new();
    for (s, t, side) in equivalent_flow_tree(&d) {
        let (x, y) = (d.ids[s], d.ids[t]);
        let members: BTreeSet<_> = (0..d.n()).filter(|&i| side[i]).map(|i| d.ids[i]).collect();
        let cut = Cut::new(g, members)?;
        if cut.size() > k {
            let mut fam = max_edge_disjoint_paths(g, x, y)?;
            fam.paths.truncate(k + 1);
            return Ok(ThetaCheck::Witness(ImmersionWitness {
                x,
                y,
                paths: fam.paths,
            }));
        }
        cuts.push((x, y, cut));
    }
    Ok(ThetaCheck::Free(FreeCertificate { k, cuts }))
}

/// Membership in `A_k`: at most one vertex of degree above `k`.
pub fn is_almost_bounded(g: &MultiGraph, k: usize) -> bool {
    g.vertices()
        .filter(|&v| g.degree(v).unwrap_or(0) > k)
        .nth(1)
        .is_none()
}
