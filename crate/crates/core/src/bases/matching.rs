use super::BasisError;

/// Perfect matching of `K_{d,d}`: left vertex `a` is matched to `image[a]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PermutationMatching {
    pub d: usize,
    pub image: Vec<usize>,
}

impl PermutationMatching {
    pub fn new(image: Vec<usize>) -> Result<Self, BasisError> {
        let d = image.len();
        let mut seen = vec![false; d];
        for &b in &image {
            if b >= d || std::mem::replace(&mut seen[b], true) {
                return Err(BasisError::NotBijection(image));
            }
        }
        Ok(Self { d, image })
    }

    pub fn identity(d: usize) -> Self {
        Self {
            d,
            image: (0..d).collect(),
        }
    }

    /// Permutation made of consecutive cycles with the given lengths, each
    /// cycle sending `a` to `a + 1` and its last vertex back to its first.
    pub fn from_cycles(lengths: &[usize]) -> Self {
        let d = lengths.iter().sum();
        let mut image = vec![0; d];
        let mut start = 0;
        for &len in lengths {
            for a in start..start + len {
                image[a] = if a + 1 == start + len { start } else { a + 1 };
            }
            start += len;
        }
        Self { d, image }
    }
}

/// Kuhn's augmenting path step; right vertices are tried in ascending order.
fn augment(
    a: usize,
    adj: &[Vec<bool>],
    visited: &mut [bool],
    match_right: &mut [Option<usize>],
) -> bool {
    for b in 0..adj.len() {
        if adj[a][b] && !visited[b] {
            visited[b] = true;
            if match_right[b].is_none_or(|a2| augment(a2, adj, visited, match_right)) {
                match_right[b] = Some(a);
                return true;
            }
        }
    }
    false
}

fn perfect_matching(adj: &[Vec<bool>]) -> Option<Vec<usize>> {
    let d = adj.len();
    let mut match_right: Vec<Option<usize>> = vec![None; d];
    for a in 0..d {
        let mut visited = vec![false; d];
        if !augment(a, adj, &mut visited, &mut match_right) {
            return None;
        }
    }
    let mut image = vec![0; d];
    for (b, a) in match_right.iter().enumerate() {
        image[a.expect("every right vertex matched")] = b;
    }
    Some(image)
}

/// Splits a `k`-regular bipartite graph on `d + d` vertices into `k`
/// edge-disjoint perfect matchings.
pub fn regular_bipartite_edge_coloring(
    d: usize,
    adjacency: &[Vec<bool>],
    k: usize,
) -> Result<Vec<PermutationMatching>, BasisError> {
    if adjacency.len() != d || adjacency.iter().any(|r| r.len() != d) {
        return Err(BasisError::NotRegular { k });
    }
    for i in 0..d {
        let row = adjacency[i].iter().filter(|&&e| e).count();
        let col = adjacency.iter().filter(|r| r[i]).count();
        if row != k || col != k {
            return Err(BasisError::NotRegular { k });
        }
    }
    let mut adj = adjacency.to_vec();
    let mut out = Vec::with_capacity(k);
    for _ in 0..k {
        let image = perfect_matching(&adj).ok_or(BasisError::MatchingFailed)?;
        for (a, &b) in image.iter().enumerate() {
            adj[a][b] = false;
        }
        out.push(PermutationMatching { d, image });
    }
    Ok(out)
}
