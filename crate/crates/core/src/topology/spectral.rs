//! Dense symmetric eigensolver (cyclic Jacobi) for expansion quality checks.
//!
//! Sized for subnetwork adjacency matrices (up to ~1k nodes); cost is
//! cubic in the matrix dimension.

/// Eigenvalues of a symmetric matrix (row-major, `n x n`), sorted descending.
pub fn symmetric_eigenvalues(matrix: &[f64], n: usize) -> Vec<f64> {
    assert_eq!(matrix.len(), n * n, "matrix must be n*n");
    let mut a = matrix.to_vec();
    let idx = |r: usize, c: usize| r * n + c;

    let off = |a: &[f64]| -> f64 {
        let mut sum = 0.0;
        for r in 0..n {
            for c in 0..n {
                if r != c {
                    sum += a[idx(r, c)] * a[idx(r, c)];
                }
            }
        }
        sum
    };

    let tol = 1e-22 * (1.0 + off(&a));
    for _sweep in 0..100 {
        if off(&a) <= tol {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = a[idx(p, q)];
                if apq.abs() < 1e-300 {
                    continue;
                }
                let app = a[idx(p, p)];
                let aqq = a[idx(q, q)];
                let theta = (aqq - app) / (2.0 * apq);
                let t = if theta >= 0.0 {
                    1.0 / (theta + (1.0 + theta * theta).sqrt())
                } else {
                    -1.0 / (-theta + (1.0 + theta * theta).sqrt())
                };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = t * c;
                for k in 0..n {
                    let akp = a[idx(k, p)];
                    let akq = a[idx(k, q)];
                    a[idx(k, p)] = c * akp - s * akq;
                    a[idx(k, q)] = s * akp + c * akq;
                }
                for k in 0..n {
                    let apk = a[idx(p, k)];
                    let aqk = a[idx(q, k)];
                    a[idx(p, k)] = c * apk - s * aqk;
                    a[idx(q, k)] = s * apk + c * aqk;
                }
            }
        }
    }

    let mut eigs: Vec<f64> = (0..n).map(|i| a[idx(i, i)]).collect();
    eigs.sort_by(|x, y| y.partial_cmp(x).expect("eigenvalues are finite"));
    eigs
}

/// Build the dense adjacency matrix of a graph given per-node neighbor lists
/// over local indices `0..n`.
pub fn adjacency_matrix(neighbors: &[Vec<usize>]) -> Vec<f64> {
    let n = neighbors.len();
    let mut m = vec![0.0; n * n];
    for (v, nbrs) in neighbors.iter().enumerate() {
        for &u in nbrs {
            m[v * n + u] = 1.0;
        }
    }
    m
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn complete_graph_spectrum() {
        // K_n: eigenvalues n-1 once, -1 with multiplicity n-1
        let n = 16;
        let nbrs: Vec<Vec<usize>> = (0..n)
            .map(|v| (0..n).filter(|&u| u != v).collect())
            .collect();
        let eigs = symmetric_eigenvalues(&adjacency_matrix(&nbrs), n);
        assert!((eigs[0] - 15.0).abs() < 1e-9);
        for &e in &eigs[1..] {
            assert!((e + 1.0).abs() < 1e-9);
        }
    }

    #[test]
    fn cycle_spectrum() {
        // C_n: eigenvalues 2 cos(2 pi k / n)
        let n = 16;
        let nbrs: Vec<Vec<usize>> = (0..n).map(|v| vec![(v + 1) % n, (v + n - 1) % n]).collect();
        let eigs = symmetric_eigenvalues(&adjacency_matrix(&nbrs), n);
        assert!((eigs[0] - 2.0).abs() < 1e-9);
        let expected = 2.0 * (2.0 * std::f64::consts::PI / n as f64).cos();
        assert!((eigs[1] - expected).abs() < 1e-9);
    }
}
