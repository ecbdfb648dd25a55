/// Determinant of a dense row-major `n × n` matrix by Gaussian elimination
/// with partial pivoting.
///
/// Returns exactly `0.0` as soon as a column has no non-zero pivot candidate,
/// so a matrix with an all-zero row or column always yields `0.0`.
pub fn determinant(values: &[f64], n: usize) -> f64 {
    assert_eq!(values.len(), n * n, "determinant: expected {n}x{n} values");
    let mut a = values.to_vec();
    let mut det = 1.0;
    for col in 0..n {
        let mut pivot_row = col;
        let mut pivot_abs = a[col * n + col].abs();
        for row in col + 1..n {
            let v = a[row * n + col].abs();
            if v > pivot_abs {
                pivot_row = row;
                pivot_abs = v;
            }
        }
        if pivot_abs == 0.0 {
            return 0.0;
        }
        if pivot_row != col {
            for k in 0..n {
                a.swap(col * n + k, pivot_row * n + k);
            }
            det = -det;
        }
        let pivot = a[col * n + col];
        det *= pivot;
        for row in col + 1..n {
            let factor = a[row * n + col] / pivot;
            if factor == 0.0 {
                continue;
            }
            for k in col + 1..n {
                a[row * n + k] -= factor * a[col * n + k];
            }
        }
    }
    det
}
