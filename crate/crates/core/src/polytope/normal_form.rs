use super::Polytope;
use crate::zlattice::{determinant, hnf_with_transform, mat_vec, IntMatrix, LatticeVector};

fn ordered_subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for rest in ordered_subsets(n, k - 1) {
        for i in 0..n {
            if !rest.contains(&i) {
                let mut s = rest.clone();
                s.push(i);
                out.push(s);
            }
        }
    }
    out
}

/// Canonical representative of the `GL(d, Z)`-orbit of `p`.
///
/// For each ordered `d`-subset of vertices with nonzero determinant, the
/// unique `g` putting the subset matrix (vertices as columns) into row HNF is
/// applied to all vertices; the lexicographically smallest sorted image wins.
/// Since `HNF(h B) = HNF(B)` for unimodular `h`, the result is constant on orbits.
pub fn normal_form(p: &Polytope) -> Polytope {
    let d = p.dim();
    let verts = p.vertices();
    let mut best: Option<Vec<LatticeVector>> = None;
    for subset in ordered_subsets(verts.len(), d) {
        let cols: IntMatrix = (0..d).map(|r| subset.iter().map(|&i| verts[i][r]).collect()).collect();
        if determinant(&cols).expect("small determinant") == 0 {
            continue;
        }
        let (_, g) = hnf_with_transform(&cols, d).expect("small entries");
        let mut image: Vec<LatticeVector> =
            verts.iter().map(|v| mat_vec(&g, v).expect("small entries")).collect();
        image.sort();
        if best.as_ref().is_none_or(|b| image < *b) {
            best = Some(image);
        }
    }
    Polytope::hull(&best.expect("full-dimensional polytope has a basis subset")).expect("image is full-dimensional")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::*;
    use crate::zlattice::UnimodularMap;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn nf_examples() {
        let s = UnimodularMap::new(vec![vec![0, -1], vec![1, 0]]).unwrap();
        let t = UnimodularMap::new(vec![vec![1, 1], vec![0, 1]]).unwrap();
        assert_eq!(normal_form(&nabla_minus_inf().transform(&s)), normal_form(&nabla_minus_inf()));
        assert_ne!(normal_form(&nabla(0)), normal_form(&nabla(1)));
        assert_eq!(normal_form(&nabla(2).transform(&t)), normal_form(&nabla(2)));
    }

    #[test]
    fn nf_orbit_invariance_3d() {
        let mut rng = ChaCha8Rng::seed_from_u64(37);
        let [v1, v2, v3, v4, v5, _, v7] = obstruction_vectors();
        let p = Polytope::hull(&[v1, v2, v3, v4, v5, v7]).unwrap();
        let nf = normal_form(&p);
        for _ in 0..20 {
            let g = UnimodularMap::random(3, &mut rng, 10);
            assert_eq!(normal_form(&p.transform(&g)), nf);
        }
    }
}
