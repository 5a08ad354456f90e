//! Dense complex linear algebra used by the algebra modules: ranks, null
//! spaces, spans of matrices, algebra closures and block decompositions.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::Serialize;

use crate::error::{Error, Result};

pub type C64 = Complex64;
pub type CMat = DMatrix<C64>;
pub type CVec = DVector<C64>;

pub fn c(re: f64) -> C64 {
    C64::new(re, 0.0)
}

pub fn seeded(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn singular_values(m: &CMat) -> Vec<f64> {
    if m.nrows() == 0 || m.ncols() == 0 {
        return Vec::new();
    }
    m.clone().svd(false, false).singular_values.iter().copied().collect()
}

/// Numerical rank: singular values above `tol * max(1, σ_max)`.
pub fn rank(m: &CMat, tol: f64) -> usize {
    let sv = singular_values(m);
    let top = sv.iter().copied().fold(1.0_f64, f64::max);
    sv.iter().filter(|&&s| s > tol * top).count()
}

/// Largest singular value.
pub fn op_norm(m: &CMat) -> f64 {
    singular_values(m).into_iter().fold(0.0, f64::max)
}

/// Largest absolute entry.
pub fn max_abs(m: &CMat) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

/// Column-major flattening.
pub fn vectorize(m: &CMat) -> CVec {
    CVec::from_iterator(m.len(), m.iter().copied())
}

/// Matrix whose columns are the given vectors.
pub fn columns(rows: usize, vectors: &[CVec]) -> CMat {
    let mut out = CMat::zeros(rows, vectors.len());
    for (j, v) in vectors.iter().enumerate() {
        out.set_column(j, v);
    }
    out
}

/// Orthonormal basis (as columns) of the kernel of `m`.
pub fn null_space(m: &CMat, tol: f64) -> CMat {
    let n = m.ncols();
    if n == 0 {
        return CMat::zeros(0, 0);
    }
    // reduce tall inputs to their n×n triangular factor first
    let square = if m.nrows() > n {
        m.clone().qr().r()
    } else {
        let mut padded = CMat::zeros(n, n);
        padded.view_mut((0, 0), (m.nrows(), n)).copy_from(m);
        padded
    };
    let svd = square.svd(false, true);
    let v_t = svd.v_t.expect("requested");
    let top = svd.singular_values.iter().copied().fold(1.0_f64, f64::max);
    let null: Vec<CVec> = (0..n)
        .filter(|&i| svd.singular_values[i] <= tol * top)
        .map(|i| v_t.row(i).adjoint())
        .collect();
    columns(n, &null)
}

/// Orthonormal basis of the column space of `m`.
pub fn column_space(m: &CMat, tol: f64) -> CMat {
    let r = m.nrows();
    if r == 0 || m.ncols() == 0 {
        return CMat::zeros(r, 0);
    }
    let wide = if m.ncols() < r {
        let mut padded = CMat::zeros(r, r);
        padded.view_mut((0, 0), (r, m.ncols())).copy_from(m);
        padded
    } else {
        m.clone()
    };
    let svd = wide.svd(true, false);
    let u = svd.u.expect("requested");
    let top = svd.singular_values.iter().copied().fold(1.0_f64, f64::max);
    let keep: Vec<CVec> = (0..svd.singular_values.len())
        .filter(|&i| svd.singular_values[i] > tol * top)
        .map(|i| u.column(i).into_owned())
        .collect();
    columns(r, &keep)
}

/// Eigen-decomposition of a Hermitian matrix, eigenvalues ascending.
pub fn hermitian_eigen(m: &CMat) -> (Vec<f64>, CMat) {
    let n = m.nrows();
    if n == 0 {
        return (Vec::new(), CMat::zeros(0, 0));
    }
    let sym = (m + m.adjoint()) * c(0.5);
    let eig = sym.symmetric_eigen();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let values = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let vectors = columns(n, &order.iter().map(|&i| eig.eigenvectors.column(i).into_owned()).collect::<Vec<_>>());
    (values, vectors)
}

pub fn min_hermitian_eigenvalue(m: &CMat) -> f64 {
    hermitian_eigen(m).0.first().copied().unwrap_or(0.0)
}

/// Incrementally grown orthonormal basis of a subspace of matrices.
#[derive(Debug, Clone)]
pub struct MatrixSpan {
    rows: usize,
    cols: usize,
    tol: f64,
    basis: Vec<CVec>,
    members: Vec<CMat>,
}

impl MatrixSpan {
    pub fn new(rows: usize, cols: usize, tol: f64) -> Self {
        MatrixSpan {
            rows,
            cols,
            tol,
            basis: Vec::new(),
            members: Vec::new(),
        }
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    /// Members added so far, each independent of the earlier ones.
    pub fn members(&self) -> &[CMat] {
        &self.members
    }

    fn residual(&self, m: &CMat) -> (CVec, f64) {
        let mut v = vectorize(m);
        let scale = v.norm().max(1.0);
        // two passes of Gram-Schmidt for stability
        for _ in 0..2 {
            for b in &self.basis {
                let coef = b.dotc(&v);
                v -= b * coef;
            }
        }
        let norm = v.norm();
        (v, norm / scale)
    }

    pub fn contains(&self, m: &CMat) -> bool {
        self.residual(m).1 <= self.tol
    }

    /// Adds `m` if it is independent of the current span.
    pub fn insert(&mut self, m: &CMat) -> bool {
        assert_eq!((m.nrows(), m.ncols()), (self.rows, self.cols), "matrix shape");
        let (v, rel) = self.residual(m);
        if rel <= self.tol {
            return false;
        }
        let norm = v.norm();
        self.basis.push(v / c(norm));
        self.members.push(m.clone());
        true
    }
}

/// Basis of the algebra generated by `generators` (all of one shape),
/// obtained by multiplying by generators until the span stops growing.
pub fn algebra_closure(generators: &[CMat], tol: f64) -> Vec<CMat> {
    let Some(first) = generators.first() else { return Vec::new() };
    let n = first.nrows();
    let mut span = MatrixSpan::new(n, first.ncols(), tol);
    for g in generators {
        span.insert(g);
    }
    let mut frontier = span.members().to_vec();
    let cap = n * n;
    while !frontier.is_empty() && span.dim() < cap {
        let mut next = Vec::new();
        for f in &frontier {
            for g in generators {
                let p = f * g;
                if span.insert(&p) {
                    next.push(p);
                }
            }
        }
        frontier = next;
    }
    span.members().to_vec()
}

/// One simple summand `M_size` of a matrix algebra, appearing `multiplicity`
/// times in the ambient representation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct SimpleBlock {
    pub size: usize,
    pub multiplicity: usize,
}

/// Wedderburn decomposition of the *-closed matrix algebra spanned by `basis`.
///
/// Minimal central projections are the spectral projections of a random
/// self-adjoint central element; minimality is certified by checking that
/// each cut-down has a one-dimensional centre, with reseeding on failure.
pub fn wedderburn(basis: &[CMat], seed: u64, tol: f64) -> Result<Vec<SimpleBlock>> {
    let Some(first) = basis.first() else { return Ok(Vec::new()) };
    let n = first.nrows();
    let d = basis.len();
    let centre = centre_of(basis, tol);
    // unit of the algebra: projection onto the joint range
    let mut stacked = CMat::zeros(n, n * d);
    for (i, b) in basis.iter().enumerate() {
        stacked.view_mut((0, i * n), (n, n)).copy_from(b);
    }
    let range = column_space(&stacked, tol);
    let hermitian_centre: Vec<CMat> = centre
        .iter()
        .flat_map(|z| [z + z.adjoint(), (z - z.adjoint()) * C64::new(0.0, 1.0)])
        .collect();

    let mut rng = seeded(seed);
    for _attempt in 0..8 {
        let mut h = CMat::zeros(n, n);
        for z in &hermitian_centre {
            h += z * c(rng.random_range(-1.0..1.0));
        }
        let restricted = range.adjoint() * &h * &range;
        let (values, vectors) = hermitian_eigen(&restricted);
        let spread = values.iter().fold(0.0_f64, |m, v| m.max(v.abs())).max(1.0);
        let mut clusters: Vec<Vec<usize>> = Vec::new();
        for (i, &v) in values.iter().enumerate() {
            match clusters.last_mut() {
                Some(cl) if (v - values[*cl.last().expect("nonempty")]).abs() <= 1e-6 * spread => cl.push(i),
                _ => clusters.push(vec![i]),
            }
        }
        let mut blocks = Vec::new();
        let mut total = 0;
        let mut minimal = true;
        for cl in &clusters {
            let w = &range * columns(vectors.nrows(), &cl.iter().map(|&i| vectors.column(i).into_owned()).collect::<Vec<_>>());
            let q = &w * w.adjoint();
            let cut: Vec<CMat> = basis.iter().map(|b| &q * b).collect();
            let dim = span_dim(&cut, tol);
            let centre_dim = span_dim(&centre.iter().map(|z| &q * z).collect::<Vec<_>>(), tol);
            let size = (dim as f64).sqrt().round() as usize;
            if centre_dim != 1 || size * size != dim || cl.len() % size != 0 {
                minimal = false;
                break;
            }
            total += dim;
            blocks.push(SimpleBlock {
                size,
                multiplicity: cl.len() / size,
            });
        }
        if minimal && total == d {
            blocks.sort();
            return Ok(blocks);
        }
    }
    Err(Error::internal("no splitting central element found for the block decomposition"))
}

/// Basis of the centre of the algebra spanned by `basis`.
pub fn centre_of(basis: &[CMat], tol: f64) -> Vec<CMat> {
    let d = basis.len();
    if d == 0 {
        return Vec::new();
    }
    let n2 = basis[0].len();
    let mut system = CMat::zeros(n2 * d, d);
    for (j, bj) in basis.iter().enumerate() {
        for (i, bi) in basis.iter().enumerate() {
            let comm = bi * bj - bj * bi;
            system.view_mut((j * n2, i), (n2, 1)).copy_from(&vectorize(&comm));
        }
    }
    let null = null_space(&system, tol);
    (0..null.ncols())
        .map(|k| {
            let mut z = CMat::zeros(basis[0].nrows(), basis[0].ncols());
            for (i, b) in basis.iter().enumerate() {
                z += b * null[(i, k)];
            }
            z
        })
        .collect()
}

/// Dimension of the linear span of a list of equally shaped matrices.
pub fn span_dim(mats: &[CMat], tol: f64) -> usize {
    let Some(first) = mats.first() else { return 0 };
    let vs: Vec<CVec> = mats.iter().map(vectorize).collect();
    rank(&columns(first.len(), &vs), tol)
}

pub fn random_gaussian(rng: &mut impl Rng, rows: usize, cols: usize) -> CMat {
    CMat::from_fn(rows, cols, |_, _| C64::new(rng.sample(StandardNormal), rng.sample(StandardNormal)))
}

/// Haar-distributed unitary via QR with the diagonal phases of `R` removed.
pub fn random_unitary(rng: &mut impl Rng, n: usize) -> CMat {
    let qr = random_gaussian(rng, n, n).qr();
    let (q, r) = (qr.q(), qr.r());
    let mut out = q;
    for j in 0..n {
        let d = r[(j, j)];
        let phase = if d.norm() > 0.0 { d / d.norm() } else { c(1.0) };
        for i in 0..n {
            out[(i, j)] *= phase;
        }
    }
    out
}

/// `V diag(±1) V*` with random signs.
pub fn random_symmetry(rng: &mut impl Rng, n: usize) -> CMat {
    let v = random_unitary(rng, n);
    let signs = CVec::from_fn(n, |_, _| if rng.random_bool(0.5) { c(1.0) } else { c(-1.0) });
    &v * CMat::from_diagonal(&signs) * v.adjoint()
}

/// Rescales by a unimodular scalar so the first nonzero entry, scanning
/// rows left to right, is real and positive.
pub fn normalize_phase(u: &CMat) -> CMat {
    let scale = max_abs(u).max(1.0);
    for i in 0..u.nrows() {
        for j in 0..u.ncols() {
            let z = u[(i, j)];
            if z.norm() > 1e-8 * scale {
                return u * (z.conj() / z.norm());
            }
        }
    }
    u.clone()
}

/// If `v = λu` for a unimodular `λ`, returns the error `‖v − λu‖_max`.
pub fn phase_distance(u: &CMat, v: &CMat) -> f64 {
    if u.shape() != v.shape() {
        return f64::INFINITY;
    }
    let overlap = u.dotc(v);
    let lambda = if overlap.norm() > 0.0 { overlap / overlap.norm() } else { c(1.0) };
    max_abs(&(v - u * lambda))
}

pub fn is_unitary(u: &CMat, tol: f64) -> bool {
    u.is_square() && max_abs(&(u.adjoint() * u - CMat::identity(u.nrows(), u.ncols()))) <= tol
}

pub fn matrix_unit(n: usize, p: usize, q: usize) -> CMat {
    let mut m = CMat::zeros(n, n);
    m[(p, q)] = c(1.0);
    m
}

/// Block-diagonal assembly.
pub fn direct_sum(parts: &[CMat]) -> CMat {
    let n: usize = parts.iter().map(|p| p.nrows()).sum();
    let mut out = CMat::zeros(n, n);
    let mut at = 0;
    for p in parts {
        out.view_mut((at, at), p.shape()).copy_from(p);
        at += p.nrows();
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rank_and_null_space() {
        let m = CMat::from_row_slice(2, 3, &[c(1.0), c(2.0), c(3.0), c(2.0), c(4.0), c(6.0)]);
        assert_eq!(rank(&m, 1e-9), 1);
        let ns = null_space(&m, 1e-9);
        assert_eq!(ns.ncols(), 2);
        assert!(max_abs(&(&m * &ns)) < 1e-12);
        let tall = m.transpose();
        assert_eq!(null_space(&tall, 1e-9).ncols(), 1);
    }

    #[test]
    fn closure_of_matrix_units_is_full_matrix_algebra() {
        let gens = vec![matrix_unit(3, 0, 1), matrix_unit(3, 1, 0), matrix_unit(3, 1, 2), matrix_unit(3, 2, 1)];
        assert_eq!(algebra_closure(&gens, 1e-9).len(), 9);
    }

    #[test]
    fn wedderburn_of_block_diagonal_algebras() {
        // M_2 ⊗ 1_2 ⊕ C inside M_5
        let mut basis = Vec::new();
        for p in 0..2 {
            for q in 0..2 {
                let e = matrix_unit(2, p, q);
                basis.push(direct_sum(&[e.clone(), e, CMat::zeros(1, 1)]));
            }
        }
        basis.push(direct_sum(&[CMat::zeros(4, 4), CMat::identity(1, 1)]));
        let blocks = wedderburn(&basis, 7, 1e-9).unwrap();
        assert_eq!(
            blocks,
            vec![SimpleBlock { size: 1, multiplicity: 1 }, SimpleBlock { size: 2, multiplicity: 2 }]
        );
    }

    #[test]
    fn wedderburn_of_a_conjugated_commutative_algebra() {
        let mut rng = seeded(3);
        let u = random_unitary(&mut rng, 3);
        let basis: Vec<CMat> = (0..3).map(|i| &u * matrix_unit(3, i, i) * u.adjoint()).collect();
        let blocks = wedderburn(&basis, 1, 1e-9).unwrap();
        assert_eq!(blocks, vec![SimpleBlock { size: 1, multiplicity: 1 }; 3]);
    }

    #[test]
    fn random_unitaries_and_symmetries() {
        let mut rng = seeded(11);
        for n in 1..5 {
            let u = random_unitary(&mut rng, n);
            assert!(is_unitary(&u, 1e-10));
            let s = random_symmetry(&mut rng, n);
            assert!(is_unitary(&s, 1e-10));
            assert!(max_abs(&(&s - s.adjoint())) < 1e-10);
            let v = &u * C64::from_polar(1.0, 0.7);
            assert!(phase_distance(&u, &v) < 1e-12);
            assert!(phase_distance(&normalize_phase(&u), &normalize_phase(&v)) < 1e-12);
            assert!(max_abs(&(normalize_phase(&u) - normalize_phase(&v))) < 1e-12);
        }
    }

    #[test]
    fn hermitian_eigenvalues_are_sorted() {
        let m = CMat::from_diagonal(&CVec::from_vec(vec![c(3.0), c(-1.0), c(2.0)]));
        let (values, _) = hermitian_eigen(&m);
        assert_eq!(values, vec![-1.0, 2.0, 3.0]);
        assert!((op_norm(&m) - 3.0).abs() < 1e-12);
    }
}
