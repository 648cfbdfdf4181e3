use crate::error::{Error, Result};
use crate::multigraph::MultiGraph;

use super::edge_sum::{edge_sum, EdgeSumSpec};
use super::partition::{Torso, TreePartition};

/// Rebuilds the graph from the torsos of `d` by edge sums along tree edges.
///
/// Folding runs from the leaves up to node 0. Each tree edge glues the two
/// satellites facing each other; their incident edges carry the same ids,
/// which gives the matching.
pub fn recompose(d: &TreePartition) -> Result<MultiGraph> {
    d.validate()?;
    let torsos = (0..d.node_count())
        .map(|t| d.torso(t))
        .collect::<Result<Vec<_>>>()?;
    recompose_torsos(d, &torsos)
}

/// As [`recompose`], from precomputed torsos indexed by node.
pub fn recompose_torsos(d: &TreePartition, torsos: &[Torso]) -> Result<MultiGraph> {
    if torsos.len() != d.node_count() {
        return Err(Error::InvalidPartition("one torso per node required".into()));
    }
    fold(d, torsos, 0, None)
}

fn fold(d: &TreePartition, torsos: &[Torso], t: usize, from: Option<usize>) -> Result<MultiGraph> {
    let mut acc = torsos[t].graph.clone();
    for (c, i) in d.neighbors(t) {
        if Some(i) == from {
            continue;
        }
        let child = fold(d, torsos, c, Some(i))?;
        let (lv, rv) = (d.satellite_label(i, t), d.satellite_label(i, c));
        let matching = acc
            .incident(lv)?
            .iter()
            .map(|&e| {
                if child.endpoints(e).is_ok_and(|ends| ends.touches(rv)) {
                    Ok((e, e))
                } else {
                    Err(Error::InvalidPartition(format!(
                        "edge {e} at satellite {lv} has no partner at {rv}"
                    )))
                }
            })
            .collect::<Result<Vec<_>>>()?;
        acc = edge_sum(&EdgeSumSpec {
            left: acc,
            left_vertex: lv,
            right: child,
            right_vertex: rv,
            matching,
        })?;
    }
    Ok(acc)
}
