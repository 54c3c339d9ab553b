//! Reconstruction of the residual rows `7..=n` from the triangles around
//! each residual vertex.

use crate::facetrace::{chain_link, verify_embedding, FaceProfile, LinkError};
use crate::rotation::{RotationSystem, HEXAGON_LEN};

use super::state::PartialState;
use super::SearchError;

/// Oriented triangles on residual vertices only, as faces `a -> b -> c`.
fn residual_triangles(state: &PartialState) -> Vec<[u8; 3]> {
    let n = state.n;
    let mut out = Vec::new();
    for a in HEXAGON_LEN + 1..=n {
        for b in a + 1..=n {
            for c in b + 1..=n {
                for face in [[a, b, c], [a, c, b]] {
                    if !state.is_triangle_registered(face) {
                        out.push(face);
                    }
                }
            }
        }
    }
    out
}

fn directed_edges(face: &[u8; 3]) -> [(u8, u8); 3] {
    [(face[0], face[1]), (face[1], face[2]), (face[2], face[0])]
}

/// Rows `7..=n` implied by a set of triangle faces, or the first residual
/// vertex whose link does not close into one cycle.
pub(crate) fn residual_rows(n: u8, faces: &[[u8; 3]]) -> Result<Vec<Vec<u8>>, LinkError> {
    (HEXAGON_LEN + 1..=n)
        .map(|j| {
            // Face a -> b -> c: at b, c is immediately followed by a.
            let corners = faces.iter().filter_map(|f| {
                let k = f.iter().position(|&x| x == j)?;
                Some((f[(k + 1) % 3], f[(k + 2) % 3]))
            });
            chain_link(j, corners, n as usize - 1)
        })
        .collect()
}

/// Every rotation system completing `state` (rows `1..=6` accepted) to a
/// hexagon-plus-triangles embedding.
///
/// The missing `d = max_triangles - mentioned` faces can only be triangles on
/// residual vertices; every `d`-subset of those is tried.
pub fn complete_residual(state: &PartialState) -> Result<Vec<RotationSystem>, SearchError> {
    if state.filled_rows() != HEXAGON_LEN as usize {
        return Err(SearchError::NotReady(state.filled_rows()));
    }
    let n = state.n;
    let Some(missing) = state.max_triangles.checked_sub(state.triangle_count()) else {
        return Ok(Vec::new());
    };
    let registered = state.triangles();
    let candidates = residual_triangles(state);
    let hex_rows: Vec<Vec<u8>> = (1..=HEXAGON_LEN).map(|v| state.row(v).to_vec()).collect();
    let profile = FaceProfile::hexagon_and_triangles(state.max_triangles);
    let mut taken = [[false; 16]; 16];
    for f in &registered {
        for (x, y) in directed_edges(f) {
            taken[x as usize][y as usize] = true;
        }
    }

    let mut out = Vec::new();
    let mut chosen: Vec<usize> = Vec::with_capacity(missing);
    let mut faces = registered.clone();
    subsets(candidates.len(), missing, &mut chosen, &mut |idx| {
        faces.truncate(registered.len());
        let mut local = taken;
        for &k in idx {
            for (x, y) in directed_edges(&candidates[k]) {
                if std::mem::replace(&mut local[x as usize][y as usize], true) {
                    return Ok(());
                }
            }
            faces.push(candidates[k]);
        }
        let Ok(residual) = residual_rows(n, &faces) else {
            return Ok(());
        };
        let rows: Vec<Vec<u8>> = hex_rows.iter().cloned().chain(residual).collect();
        let rs =
            RotationSystem::from_rows(&rows).map_err(|e| SearchError::Internal(e.to_string()))?;
        let report = verify_embedding(&rs, None, Some(&profile));
        if !report.profile_ok() || !report.hexagon_distinct {
            return Err(SearchError::Internal(format!(
                "reconstructed system fails verification (profile {}):\n{}",
                report.profile,
                rs.to_text()
            )));
        }
        out.push(rs);
        Ok(())
    })?;
    Ok(out)
}

/// Calls `f` with every `k`-subset of `0..len` in lexicographic order.
fn subsets<E>(
    len: usize,
    k: usize,
    chosen: &mut Vec<usize>,
    f: &mut impl FnMut(&[usize]) -> Result<(), E>,
) -> Result<(), E> {
    if chosen.len() == k {
        return f(chosen);
    }
    let start = chosen.last().map_or(0, |&x| x + 1);
    let remaining = k - chosen.len();
    for i in start..len {
        if len - i < remaining {
            break;
        }
        chosen.push(i);
        subsets(len, k, chosen, f)?;
        chosen.pop();
    }
    Ok(())
}
