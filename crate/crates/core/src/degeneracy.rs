//! s-edge-degeneracy with dual certificates.
//!
//! `check_degeneracy` peels vertices from the back of the layout: at each step
//! it places last the lowest-id vertex whose support into the remaining set is
//! at most `k`. When no vertex qualifies the remaining set is the maximal
//! `(k+1, s)`-edge-hide-out.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::cuts::{supp_with, CutOptions};
use crate::error::{Error, Result};
use crate::multigraph::{MultiGraph, VertexId};
use crate::speed::Speed;

/// Vertex ordering with the support of each vertex into its predecessors.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Layout {
    pub speed: Speed,
    pub order: Vec<VertexId>,
    pub supports: Vec<usize>,
}

impl Layout {
    /// Builds a layout from an ordering, computing supports.
    pub fn from_order(g: &MultiGraph, speed: Speed, order: Vec<VertexId>) -> Result<Layout> {
        let supports = layout_supports(g, speed, &order)?;
        Ok(Layout {
            speed,
            order,
            supports,
        })
    }

    pub fn degeneracy(&self) -> usize {
        self.supports.iter().copied().max().unwrap_or(0)
    }

    pub fn to_text(&self) -> String {
        let mut out = format!("layout speed={} k={}\n", self.speed, self.degeneracy());
        out.push_str(&join_line("order", self.order.iter()));
        out.push_str(&join_line("support", self.supports.iter()));
        out
    }
}

/// Vertex set in which every member has support at least `k` into the rest.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct HideOut {
    pub speed: Speed,
    pub k: usize,
    pub vertices: BTreeSet<VertexId>,
    /// Exact `supp(x, R \ {x})` for each member.
    pub supports: BTreeMap<VertexId, usize>,
}

impl HideOut {
    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn to_text(&self) -> String {
        let mut out = format!("hideout speed={} k={}\n", self.speed, self.k);
        out.push_str(&join_line("vertices", self.vertices.iter()));
        out.push_str(&join_line("support", self.supports.values()));
        out
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum DegeneracyVerdict {
    Layout(Layout),
    HideOut(HideOut),
}

impl DegeneracyVerdict {
    pub fn layout(&self) -> Option<&Layout> {
        match self {
            DegeneracyVerdict::Layout(l) => Some(l),
            DegeneracyVerdict::HideOut(_) => None,
        }
    }

    pub fn hideout(&self) -> Option<&HideOut> {
        match self {
            DegeneracyVerdict::Layout(_) => None,
            DegeneracyVerdict::HideOut(h) => Some(h),
        }
    }
}

/// `δ` together with a layout achieving it and, when `δ > 0`, the maximal
/// `(δ, s)`-edge-hide-out showing that `δ - 1` is not enough.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Degeneracy {
    pub value: usize,
    pub layout: Layout,
    pub hideout: Option<HideOut>,
}

fn join_line<T: std::fmt::Display>(head: &str, items: impl Iterator<Item = T>) -> String {
    let mut line = head.to_string();
    for it in items {
        let _ = write!(line, " {it}");
    }
    line.push('\n');
    line
}

fn check_permutation(g: &MultiGraph, order: &[VertexId]) -> Result<()> {
    let seen: BTreeSet<_> = order.iter().copied().collect();
    if seen.len() != order.len() || &seen != g.vertex_set() {
        return Err(Error::InvalidLayout(
            "ordering is not a permutation of the vertex set".into(),
        ));
    }
    Ok(())
}

fn exact_supp(g: &MultiGraph, s: Speed, x: VertexId, rest: &BTreeSet<VertexId>) -> Result<usize> {
    let b = supp_with(g, s, x, rest, None, CutOptions::default())?;
    Ok(b.expect("unbounded query").size())
}

/// `supp(v_i, L_{<i})` for every position.
pub fn layout_supports(g: &MultiGraph, s: Speed, order: &[VertexId]) -> Result<Vec<usize>> {
    check_permutation(g, order)?;
    let mut before = BTreeSet::new();
    let mut out = Vec::with_capacity(order.len());
    for &v in order {
        out.push(exact_supp(g, s, v, &before)?);
        before.insert(v);
    }
    Ok(out)
}

/// Maximum support over the positions of `order`.
pub fn layout_degeneracy(g: &MultiGraph, s: Speed, order: &[VertexId]) -> Result<usize> {
    Ok(layout_supports(g, s, order)?.into_iter().max().unwrap_or(0))
}

pub fn check_degeneracy(g: &MultiGraph, s: Speed, k: usize) -> Result<DegeneracyVerdict> {
    check_degeneracy_with(g, s, k, CutOptions::default())
}

pub fn check_degeneracy_with(
    g: &MultiGraph,
    s: Speed,
    k: usize,
    opts: CutOptions,
) -> Result<DegeneracyVerdict> {
    let mut remaining = g.vertex_set().clone();
    let mut reversed = Vec::with_capacity(remaining.len());
    let mut supports = Vec::with_capacity(remaining.len());
    while !remaining.is_empty() {
        let mut placed = None;
        for &x in &remaining {
            let mut rest = remaining.clone();
            rest.remove(&x);
            if let Some(b) = supp_with(g, s, x, &rest, Some(k), opts)? {
                placed = Some((x, b.size()));
                break;
            }
        }
        let Some((x, size)) = placed else {
            let mut sup = BTreeMap::new();
            for &x in &remaining {
                let mut rest = remaining.clone();
                rest.remove(&x);
                let b = supp_with(g, s, x, &rest, None, opts)?.expect("unbounded query");
                sup.insert(x, b.size());
            }
            return Ok(DegeneracyVerdict::HideOut(HideOut {
                speed: s,
                k: k + 1,
                vertices: remaining,
                supports: sup,
            }));
        };
        remaining.remove(&x);
        reversed.push(x);
        supports.push(size);
    }
    reversed.reverse();
    supports.reverse();
    Ok(DegeneracyVerdict::Layout(Layout {
        speed: s,
        order: reversed,
        supports,
    }))
}

pub fn edge_degeneracy(g: &MultiGraph, s: Speed) -> Result<Degeneracy> {
    edge_degeneracy_with(g, s, CutOptions::default())
}

pub fn edge_degeneracy_with(g: &MultiGraph, s: Speed, opts: CutOptions) -> Result<Degeneracy> {
    if g.vertex_count() == 0 {
        return Err(Error::EmptyVertexSet);
    }
    let mut previous = None;
    for k in 0..=g.max_degree() {
        match check_degeneracy_with(g, s, k, opts)? {
            DegeneracyVerdict::Layout(layout) => {
                return Ok(Degeneracy {
                    value: k,
                    layout,
                    hideout: previous,
                })
            }
            DegeneracyVerdict::HideOut(h) => previous = Some(h),
        }
    }
    unreachable!("the last placed vertex has support at most its degree")
}

/// The unique maximal `(k, s)`-edge-hide-out; empty when none exists.
pub fn maximal_hideout(g: &MultiGraph, s: Speed, k: usize) -> Result<HideOut> {
    maximal_hideout_with(g, s, k, CutOptions::default())
}

pub fn maximal_hideout_with(g: &MultiGraph, s: Speed, k: usize, opts: CutOptions) -> Result<HideOut> {
    if k == 0 {
        return Err(Error::InvalidParameter("hide-out parameter must be at least 1".into()));
    }
    Ok(match check_degeneracy_with(g, s, k - 1, opts)? {
        DegeneracyVerdict::HideOut(h) => h,
        DegeneracyVerdict::Layout(_) => HideOut {
            speed: s,
            k,
            vertices: BTreeSet::new(),
            supports: BTreeMap::new(),
        },
    })
}

/// Re-derives the supports of `layout` and checks them against the record
/// and, when given, against the claimed bound `k`.
pub fn verify_layout(g: &MultiGraph, layout: &Layout, k: Option<usize>) -> Result<()> {
    let fresh = layout_supports(g, layout.speed, &layout.order)?;
    if fresh != layout.supports {
        return Err(Error::InvalidCertificate(format!(
            "recorded supports {:?} differ from recomputed {:?}",
            layout.supports, fresh
        )));
    }
    if let Some(k) = k {
        if layout.degeneracy() > k {
            return Err(Error::InvalidCertificate(format!(
                "layout degeneracy {} exceeds {k}",
                layout.degeneracy()
            )));
        }
    }
    Ok(())
}

/// Checks the hide-out property with exact recorded supports.
pub fn verify_hideout(g: &MultiGraph, h: &HideOut) -> Result<()> {
    if h.supports.keys().ne(h.vertices.iter()) {
        return Err(Error::InvalidCertificate(
            "supports must list exactly the hide-out vertices".into(),
        ));
    }
    for &x in &h.vertices {
        if !g.contains_vertex(x) {
            return Err(Error::UnknownVertex(x));
        }
        let mut rest = h.vertices.clone();
        rest.remove(&x);
        let value = exact_supp(g, h.speed, x, &rest)?;
        if value != h.supports[&x] {
            return Err(Error::InvalidCertificate(format!(
                "vertex {x}: recorded support {} but recomputed {value}",
                h.supports[&x]
            )));
        }
        if value < h.k {
            return Err(Error::InvalidCertificate(format!(
                "vertex {x} has support {value} < {}",
                h.k
            )));
        }
    }
    Ok(())
}

/// [`verify_hideout`] plus maximality: no outside vertex can join.
pub fn verify_maximal_hideout(g: &MultiGraph, h: &HideOut) -> Result<()> {
    verify_hideout(g, h)?;
    if h.k == 0 {
        return Err(Error::InvalidCertificate("hide-out parameter must be positive".into()));
    }
    let max = maximal_hideout(g, h.speed, h.k)?;
    if max.vertices != h.vertices {
        return Err(Error::InvalidCertificate(
            "hide-out is not the maximal one".into(),
        ));
    }
    Ok(())
}

fn parse_header(line: Option<&str>, kind: &str) -> Result<(Speed, usize)> {
    let bad = |m: String| Error::InvalidCertificate(m);
    let line = line.ok_or_else(|| bad("empty certificate".into()))?;
    let mut parts = line.split_whitespace();
    if parts.next() != Some(kind) {
        return Err(bad(format!("expected `{kind}` header")));
    }
    let mut speed = None;
    let mut k = None;
    for p in parts {
        match p.split_once('=') {
            Some(("speed", v)) => speed = Some(v.parse::<Speed>()?),
            Some(("k", v)) => {
                k = Some(v.parse().map_err(|_| bad(format!("bad k `{v}`")))?)
            }
            _ => return Err(bad(format!("unexpected header field `{p}`"))),
        }
    }
    match (speed, k) {
        (Some(s), Some(k)) => Ok((s, k)),
        _ => Err(bad("header needs speed= and k=".into())),
    }
}

fn parse_list<T: std::str::FromStr>(line: Option<&str>, head: &str) -> Result<Vec<T>> {
    let bad = |m: String| Error::InvalidCertificate(m);
    let line = line.ok_or_else(|| bad(format!("missing `{head}` line")))?;
    let mut parts = line.split_whitespace();
    if parts.next() != Some(head) {
        return Err(bad(format!("expected `{head}` line")));
    }
    parts
        .map(|p| p.parse().map_err(|_| bad(format!("bad entry `{p}` in `{head}`"))))
        .collect()
}

fn content_lines(text: &str) -> impl Iterator<Item = &str> {
    text.lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'))
}

/// Parses the text produced by [`Layout::to_text`]; returns the layout and
/// the header's `k`.
pub fn parse_layout(text: &str) -> Result<(Layout, usize)> {
    let mut lines = content_lines(text);
    let (speed, k) = parse_header(lines.next(), "layout")?;
    let order: Vec<u32> = parse_list(lines.next(), "order")?;
    let supports: Vec<usize> = parse_list(lines.next(), "support")?;
    if order.len() != supports.len() {
        return Err(Error::InvalidCertificate("order and support lengths differ".into()));
    }
    Ok((
        Layout {
            speed,
            order: order.into_iter().map(VertexId).collect(),
            supports,
        },
        k,
    ))
}

pub fn parse_hideout(text: &str) -> Result<HideOut> {
    let mut lines = content_lines(text);
    let (speed, k) = parse_header(lines.next(), "hideout")?;
    let vertices: Vec<u32> = parse_list(lines.next(), "vertices")?;
    let supports: Vec<usize> = parse_list(lines.next(), "support")?;
    if vertices.len() != supports.len() {
        return Err(Error::InvalidCertificate("vertex and support lengths differ".into()));
    }
    let set: BTreeSet<_> = vertices.iter().copied().map(VertexId).collect();
    if set.len() != vertices.len() || vertices.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::InvalidCertificate("vertices must be strictly increasing".into()));
    }
    Ok(HideOut {
        speed,
        k,
        vertices: set,
        supports: vertices.into_iter().map(VertexId).zip(supports).collect(),
    })
}
