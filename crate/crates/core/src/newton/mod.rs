//! Newton polyhedra at infinity, their faces away from the origin, and
//! non-degeneracy tests on those faces.
//!
//! All polytope arithmetic is exact over the integers; floating point only
//! enters in the root search of [`check_khovanskii`].

mod khovanskii;
mod lp;
mod polytope;

pub use khovanskii::{
    check_khovanskii, scaled_jacobian, KhovanskiiBudget, KhovanskiiCheck, KhovanskiiReport,
    KhovanskiiStatus, KhovanskiiWitness,
};
pub use lp::in_convex_hull;
pub use polytope::{dot, primitive, LatticePolytope, PolytopeFace};

use serde::{Serialize, Serializer};
use thiserror::Error;

use crate::poly::{PolyMap, Polynomial};

/// Largest ambient dimension with face enumeration.
pub const MAX_FACE_DIM: usize = 4;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum NewtonError {
    #[error("face enumeration supports at most {MAX_FACE_DIM} variables, got {0}")]
    DimensionUnsupported(usize),
    #[error("the given face does not support the Newton polytope")]
    FaceMismatch,
}

fn exponents_i64(e: &[u32]) -> Vec<i64> {
    e.iter().map(|&k| k as i64).collect()
}

/// Hull of the exponent support together with the origin.
pub fn newton_polytope(p: &Polynomial) -> LatticePolytope {
    let n = p.nvars();
    let mut gens: Vec<Vec<i64>> = vec![vec![0; n]];
    gens.extend(p.terms().map(|(e, _)| exponents_i64(e.as_slice())));
    LatticePolytope::from_points(n, &gens)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ConvenienceReport {
    pub components: Vec<bool>,
    pub convenient: bool,
}

/// A component is convenient when each variable appears alone to some
/// positive power.
pub fn is_convenient(f: &PolyMap) -> ConvenienceReport {
    let n = f.nvars();
    let components: Vec<bool> = f
        .components()
        .iter()
        .map(|p| {
            (0..n).all(|j| {
                p.terms().any(|(e, _)| {
                    let e = e.as_slice();
                    e[j] > 0 && e.iter().enumerate().all(|(k, &v)| k == j || v == 0)
                })
            })
        })
        .collect();
    let convenient = components.iter().all(|&c| c);
    ConvenienceReport {
        components,
        convenient,
    }
}

/// A face of the Minkowski-sum polytope not containing the origin.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FaceAtInfinity {
    /// Primitive integer normal in the relative interior of the face's
    /// normal cone.
    #[serde(serialize_with = "rational_pairs")]
    pub normal: Vec<i64>,
    /// `h(w)`, always positive.
    pub support: i64,
    pub dimension: usize,
    pub vertex_subset: Vec<Vec<i64>>,
    /// Vertex sets of the faces `Δ_i` of each component polytope.
    pub decomposition: Vec<Vec<Vec<i64>>>,
}

fn rational_pairs<S: Serializer>(w: &[i64], s: S) -> Result<S::Ok, S::Error> {
    let pairs: Vec<[i64; 2]> = w.iter().map(|&v| [v, 1]).collect();
    pairs.serialize(s)
}

/// Dimension of the affine hull of `points`.
fn affine_rank(points: &[Vec<i64>]) -> usize {
    let Some(p0) = points.first() else { return 0 };
    let diffs: Vec<Vec<i64>> = points[1..]
        .iter()
        .map(|p| p.iter().zip(p0).map(|(a, b)| a - b).collect())
        .collect();
    polytope::rank(&diffs)
}

#[derive(Debug, Clone, Serialize)]
pub struct NewtonComplex {
    pub components: Vec<LatticePolytope>,
    pub sum: LatticePolytope,
    pub faces: Vec<FaceAtInfinity>,
}

/// Minkowski sum of the component polytopes and its faces away from the
/// origin, each with its decomposition into component faces.
pub fn faces_at_infinity(f: &PolyMap) -> Result<NewtonComplex, NewtonError> {
    let n = f.nvars();
    if n > MAX_FACE_DIM {
        return Err(NewtonError::DimensionUnsupported(n));
    }
    let components: Vec<LatticePolytope> = f.components().iter().map(newton_polytope).collect();
    let sum = LatticePolytope::minkowski_sum(&components);
    let faces = sum
        .faces()
        .into_iter()
        .filter_map(|face| {
            let h = sum.support(&face.normal);
            if h <= 0 {
                return None;
            }
            let decomposition = components.iter().map(|c| c.argmax(&face.normal)).collect();
            Some(FaceAtInfinity {
                dimension: affine_rank(&face.vertices),
                support: h as i64,
                normal: face.normal,
                vertex_subset: face.vertices,
                decomposition,
            })
        })
        .collect();
    Ok(NewtonComplex {
        components,
        sum,
        faces,
    })
}

/// Terms of `p` on the face of `𝒩(p)` exposed by `w`.
pub fn principal_part_along(p: &Polynomial, w: &[i64]) -> Polynomial {
    let h = newton_polytope(p).support(w);
    p.filter_terms(|e| dot(w, &exponents_i64(e)) == h)
}

/// Terms of `p` whose exponents lie on `face`; the face must be exposed in
/// `𝒩(p)` by its normal.
pub fn principal_part(p: &Polynomial, face: &PolytopeFace) -> Result<Polynomial, NewtonError> {
    if newton_polytope(p).argmax(&face.normal) != face.vertices {
        return Err(NewtonError::FaceMismatch);
    }
    Ok(principal_part_along(p, &face.normal))
}

/// The map `f_Δ = (f_{1,Δ_1}, …, f_{m,Δ_m})` on a face at infinity.
pub fn principal_map(f: &PolyMap, face: &FaceAtInfinity) -> PolyMap {
    let parts = f
        .components()
        .iter()
        .map(|p| principal_part_along(p, &face.normal))
        .collect();
    PolyMap::new(parts).expect("principal parts share the variable count")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn map(text: &str, n: usize) -> PolyMap {
        PolyMap::parse(text, n).unwrap()
    }

    #[test]
    fn motzkin_polytope() {
        let m = map("x1^2*x2^4 + x1^4*x2^2 - 3*x1^2*x2^2 + 1", 2);
        let p = newton_polytope(m.component(0));
        assert_eq!(p.vertices, vec![vec![0, 0], vec![2, 4], vec![4, 2]]);
        assert!(!is_convenient(&m).convenient);
    }

    #[test]
    fn quartic_polytope_and_convenience() {
        let m = map("x1^4 + x2^4 + x1*x2", 2);
        assert_eq!(
            newton_polytope(m.component(0)).vertices,
            vec![vec![0, 0], vec![0, 4], vec![4, 0]]
        );
        assert!(is_convenient(&m).convenient);
        let c = PolyMap::parse("1", 3).unwrap();
        assert_eq!(newton_polytope(c.component(0)).vertices, vec![vec![0, 0, 0]]);
        assert!(is_convenient(&map("x1^2 + x2^2\nx1^2 - x2^2", 2)).convenient);
    }

    #[test]
    fn sum_of_squares_faces() {
        let cx = faces_at_infinity(&map("x1^2 + x2^2", 2)).unwrap();
        assert_eq!(cx.faces.len(), 3);
        let seg = cx.faces.iter().find(|f| f.dimension == 1).unwrap();
        assert_eq!(seg.normal, vec![1, 1]);
        assert_eq!(seg.vertex_subset, vec![vec![0, 2], vec![2, 0]]);
    }

    #[test]
    fn separate_squares_decompose() {
        let cx = faces_at_infinity(&map("x1^2\nx2^2", 2)).unwrap();
        assert_eq!(cx.sum.vertices.len(), 4);
        let top = cx.faces.iter().find(|f| f.vertex_subset == vec![vec![2, 2]]).unwrap();
        assert_eq!(top.normal, vec![1, 1]);
        assert_eq!(top.decomposition, vec![vec![vec![2, 0]], vec![vec![0, 2]]]);
    }

    #[test]
    fn constant_map_has_no_faces() {
        assert!(faces_at_infinity(&map("3\n-1", 2)).unwrap().faces.is_empty());
        assert!(matches!(
            faces_at_infinity(&map("x5", 5)),
            Err(NewtonError::DimensionUnsupported(5))
        ));
    }

    #[test]
    fn principal_parts() {
        let m = map("x1^2*x2^4 + x1^4*x2^2 - 3*x1^2*x2^2 + 1", 2);
        let p = m.component(0);
        let face = PolytopeFace {
            normal: vec![1, 1],
            vertices: vec![vec![2, 4], vec![4, 2]],
        };
        let pp = principal_part(p, &face).unwrap();
        assert_eq!(pp, crate::poly::parse_polynomial("x1^2*x2^4 + x1^4*x2^2", 2).unwrap());
        let wrong = PolytopeFace {
            normal: vec![1, 1],
            vertices: vec![vec![2, 4]],
        };
        assert_eq!(principal_part(p, &wrong), Err(NewtonError::FaceMismatch));
        let q = map("x1^4 + x2^4 + x1*x2", 2);
        let v = PolytopeFace {
            normal: vec![2, 1],
            vertices: vec![vec![4, 0]],
        };
        assert_eq!(
            principal_part(q.component(0), &v).unwrap(),
            crate::poly::parse_polynomial("x1^4", 2).unwrap()
        );
    }
}
