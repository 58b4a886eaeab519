use super::Matrix;

const TAYLOR_TERMS: usize = 20;

/// Matrix exponential by scaling and squaring with a truncated Taylor kernel.
///
/// The argument is scaled until its 1-norm is at most 1/2; twenty Taylor
/// terms then leave a truncation error below `0.5^21 / 21!`.
pub fn expm(m: &Matrix) -> Matrix {
    let n = m.nrows();
    assert_eq!(n, m.ncols(), "expm needs a square matrix");
    let norm = one_norm(m);
    let squarings = if norm > 0.5 { (norm / 0.5).log2().ceil() as i32 } else { 0 };
    let scaled = m / 2f64.powi(squarings);

    let mut sum = Matrix::identity(n, n);
    let mut term = Matrix::identity(n, n);
    for k in 1..=TAYLOR_TERMS {
        term = &term * &scaled / k as f64;
        sum += &term;
    }
    for _ in 0..squarings {
        sum = &sum * &sum;
    }
    sum
}

fn one_norm(m: &Matrix) -> f64 {
    m.column_iter().map(|c| c.iter().map(|v| v.abs()).sum::<f64>()).fold(0.0, f64::max)
}

/// `exp` of a 2x2 skew matrix `[[0, -t], [t, 0]]`.
pub fn planar_rotation_exp(m: &Matrix) -> Matrix {
    let t = 0.5 * (m[(1, 0)] - m[(0, 1)]);
    let (s, c) = t.sin_cos();
    Matrix::from_row_slice(2, 2, &[c, -s, s, c])
}

/// `exp` of a 3x3 skew matrix via Rodrigues' formula.
pub fn rodrigues_exp(m: &Matrix) -> Matrix {
    let w = [0.5 * (m[(2, 1)] - m[(1, 2)]), 0.5 * (m[(0, 2)] - m[(2, 0)]), 0.5 * (m[(1, 0)] - m[(0, 1)])];
    let theta2 = w.iter().map(|v| v * v).sum::<f64>();
    let theta = theta2.sqrt();
    let k = Matrix::from_row_slice(3, 3, &[0.0, -w[2], w[1], w[2], 0.0, -w[0], -w[1], w[0], 0.0]);
    let (a, b) = if theta < 1e-6 {
        (1.0 - theta2 / 6.0, 0.5 - theta2 / 24.0)
    } else {
        (theta.sin() / theta, (1.0 - theta.cos()) / theta2)
    };
    Matrix::identity(3, 3) + &k * a + &k * &k * b
}
