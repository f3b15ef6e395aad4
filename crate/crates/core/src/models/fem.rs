//! Piecewise linear elements on uniform meshes of `[0, 1]`.

use ndarray::{s, Array2};
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::HermitianMatrix;

/// Boundary treatment of one solution component.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Space {
    /// Hats at interior nodes only, `N - 1` functions.
    Dirichlet,
    /// Hats at all nodes, `N + 1` functions.
    Free,
}

impl Space {
    pub fn dim(self, cells: usize) -> usize {
        match self {
            Space::Dirichlet => cells - 1,
            Space::Free => cells + 1,
        }
    }

    fn index(self, node: usize, cells: usize) -> Option<usize> {
        match self {
            Space::Dirichlet if node == 0 || node == cells => None,
            Space::Dirichlet => Some(node - 1),
            Space::Free => Some(node),
        }
    }
}

/// Which factors of trial and test function enter a bilinear term.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Pairing {
    /// `trial * test`
    ValueValue,
    /// `trial * test'`
    ValueDeriv,
    /// `trial' * test`
    DerivValue,
    /// `trial' * test'`
    DerivDeriv,
}

/// `integral coefficient(x) * (trial factor) * conj(test factor)` between a
/// trial component and a test component.
#[derive(Clone, Copy)]
pub struct Term {
    pub test: usize,
    pub trial: usize,
    pub pairing: Pairing,
    pub coefficient: fn(f64) -> Complex64,
}

/// Two-point Gauss rule on `[0, 1]`: exact for cubics.
fn gauss_points() -> [(f64, f64); 2] {
    let d = 0.5 / 3f64.sqrt();
    [(0.5 - d, 0.5), (0.5 + d, 0.5)]
}

/// Total dimension and component offsets of a product of P1 spaces.
pub fn layout(components: &[Space], cells: usize) -> (usize, Vec<usize>) {
    let mut offsets = Vec::with_capacity(components.len());
    let mut dim = 0;
    for c in components {
        offsets.push(dim);
        dim += c.dim(cells);
    }
    (dim, offsets)
}

/// Assembles `sum over terms` on a mesh with `cells` elements. Entry
/// `(j, k)` pairs trial basis function `k` with test function `j`.
pub fn assemble(components: &[Space], cells: usize, terms: &[Term]) -> Array2<Complex64> {
    let (dim, offsets) = layout(components, cells);
    let h = 1.0 / cells as f64;
    let mut out = Array2::zeros((dim, dim));
    for e in 0..cells {
        let x0 = e as f64 * h;
        for (xi, w) in gauss_points() {
            let x = x0 + xi * h;
            let w = w * h;
            let value = [1.0 - xi, xi];
            let deriv = [-1.0 / h, 1.0 / h];
            for term in terms {
                let c = (term.coefficient)(x) * w;
                for a in 0..2 {
                    let Some(row) = components[term.test].index(e + a, cells) else {
                        continue;
                    };
                    for b in 0..2 {
                        let Some(col) = components[term.trial].index(e + b, cells) else {
                            continue;
                        };
                        let f = match term.pairing {
                            Pairing::ValueValue => value[b] * value[a],
                            Pairing::ValueDeriv => value[b] * deriv[a],
                            Pairing::DerivValue => deriv[b] * value[a],
                            Pairing::DerivDeriv => deriv[b] * deriv[a],
                        };
                        out[(offsets[term.test] + row, offsets[term.trial] + col)] += c * f;
                    }
                }
            }
        }
    }
    out
}

/// Block-diagonal P1 mass matrix.
pub fn mass(components: &[Space], cells: usize) -> HermitianMatrix {
    let terms: Vec<Term> = (0..components.len())
        .map(|c| Term {
            test: c,
            trial: c,
            pairing: Pairing::ValueValue,
            coefficient: |_| Complex64::new(1.0, 0.0),
        })
        .collect();
    HermitianMatrix::symmetrized(assemble(components, cells, &terms))
}

/// Validates a mesh parameter `N` (a power of two, at least 2).
pub fn check_cells(cells: usize) -> Result<()> {
    if cells < 2 || !cells.is_power_of_two() {
        return Err(Error::InvalidRefinement(format!(
            "mesh must have a power-of-two number of cells >= 2, got 1/{cells}"
        )));
    }
    Ok(())
}

/// Free-space prolongation: row `i` expresses coarse hat `i` in the fine hats.
fn free_prolongation(coarse: usize, fine: usize) -> Array2<f64> {
    let mut t = Array2::eye(coarse + 1);
    let mut n = coarse;
    while n < fine {
        let mut step = Array2::zeros((n + 1, 2 * n + 1));
        for i in 0..=n {
            step[(i, 2 * i)] = 1.0;
            if i > 0 {
                step[(i, 2 * i - 1)] = 0.5;
            }
            if i < n {
                step[(i, 2 * i + 1)] = 0.5;
            }
        }
        t = t.dot(&step);
        n *= 2;
    }
    t
}

/// Block-diagonal inclusion matrix between two nested meshes.
pub fn prolongation(components: &[Space], coarse: usize, fine: usize) -> Result<Array2<f64>> {
    check_cells(coarse)?;
    check_cells(fine)?;
    if coarse > fine {
        return Err(Error::NotNested {
            coarse: format!("1/{coarse}"),
            fine: format!("1/{fine}"),
        });
    }
    let free = free_prolongation(coarse, fine);
    let dirichlet = free.slice(s![1..coarse, 1..fine]).to_owned();
    let (rows, row_offsets) = layout(components, coarse);
    let (cols, col_offsets) = layout(components, fine);
    let mut t = Array2::zeros((rows, cols));
    for (c, space) in components.iter().enumerate() {
        let block = match space {
            Space::Dirichlet => &dirichlet,
            Space::Free => &free,
        };
        let (r, k) = (row_offsets[c], col_offsets[c]);
        t.slice_mut(s![r..r + block.nrows(), k..k + block.ncols()])
            .assign(block);
    }
    Ok(t)
}

/// Nodal interpolant of `f` in one component space.
pub fn interpolate(space: Space, cells: usize, f: impl Fn(f64) -> f64) -> Vec<f64> {
    let h = 1.0 / cells as f64;
    (0..=cells)
        .filter(|&j| space.index(j, cells).is_some())
        .map(|j| f(j as f64 * h))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::complexify;
    use approx::assert_abs_diff_eq;

    const ONE: fn(f64) -> Complex64 = |_| Complex64::new(1.0, 0.0);

    fn laplace(space: Space, cells: usize) -> Array2<Complex64> {
        assemble(
            &[space],
            cells,
            &[Term {
                test: 0,
                trial: 0,
                pairing: Pairing::DerivDeriv,
                coefficient: ONE,
            }],
        )
    }

    #[test]
    fn interior_hat_stiffness_is_two_over_h() {
        let a = laplace(Space::Dirichlet, 2);
        assert_eq!(a.dim(), (1, 1));
        assert_abs_diff_eq!(a[(0, 0)].re, 4.0, epsilon = 1e-14);
        let a = laplace(Space::Free, 4);
        assert_abs_diff_eq!(a[(1, 1)].re, 8.0, epsilon = 1e-13);
        assert_abs_diff_eq!(a[(1, 2)].re, -4.0, epsilon = 1e-13);
        assert_abs_diff_eq!(a[(0, 0)].re, 4.0, epsilon = 1e-13);
    }

    #[test]
    fn mass_matrix_entries() {
        let m = mass(&[Space::Free], 4);
        let h = 0.25;
        assert_abs_diff_eq!(m[(1, 1)].re, 2.0 * h / 3.0, epsilon = 1e-15);
        assert_abs_diff_eq!(m[(1, 2)].re, h / 6.0, epsilon = 1e-15);
        assert_abs_diff_eq!(m[(0, 0)].re, h / 3.0, epsilon = 1e-15);
        let total: f64 = m.as_array().iter().map(|z| z.re).sum();
        assert_abs_diff_eq!(total, 1.0, epsilon = 1e-14);
    }

    #[test]
    fn one_level_prolongation_row() {
        let t = prolongation(&[Space::Free], 2, 4).unwrap();
        assert_eq!(t.row(1).to_vec(), vec![0.0, 0.5, 1.0, 0.5, 0.0]);
        let t = prolongation(&[Space::Dirichlet], 2, 4).unwrap();
        assert_eq!(t.row(0).to_vec(), vec![0.5, 1.0, 0.5]);
    }

    #[test]
    fn prolongation_rejects_non_nested() {
        assert!(matches!(
            prolongation(&[Space::Free], 8, 4),
            Err(Error::NotNested { .. })
        ));
        assert!(prolongation(&[Space::Free], 3, 12).is_err());
    }

    #[test]
    fn nesting_reproduces_coarse_matrices() {
        let spaces = [Space::Dirichlet, Space::Free];
        let t = complexify(&prolongation(&spaces, 2, 16).unwrap());
        let (c, f) = (mass(&spaces, 2), mass(&spaces, 16));
        let back = t.dot(&f.as_array().dot(&t.t()));
        for (x, y) in back.iter().zip(c.as_array()) {
            assert_abs_diff_eq!((x - y).norm(), 0.0, epsilon = 1e-12);
        }
        let (c, f) = (laplace(Space::Dirichlet, 4), laplace(Space::Dirichlet, 32));
        let t = complexify(&prolongation(&[Space::Dirichlet], 4, 32).unwrap());
        let back = t.dot(&f.dot(&t.t()));
        for (x, y) in back.iter().zip(&c) {
            assert_abs_diff_eq!((x - y).norm(), 0.0, epsilon = 1e-12);
        }
    }
}
