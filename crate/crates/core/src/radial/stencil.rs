/// Finite-difference weights for the `order`-th derivative at `z` from the
/// nodes `xs` (Fornberg's recursion). Works on arbitrary distinct nodes.
pub fn fd_weights(z: f64, xs: &[f64], order: usize) -> Vec<f64> {
    let n = xs.len();
    assert!(n > order, "need more nodes than the derivative order");
    let mut c = vec![vec![0.0; order + 1]; n];
    let mut c1 = 1.0;
    let mut c4 = xs[0] - z;
    c[0][0] = 1.0;
    for i in 1..n {
        let mn = i.min(order);
        let mut c2 = 1.0;
        let c5 = c4;
        c4 = xs[i] - z;
        for j in 0..i {
            let c3 = xs[i] - xs[j];
            c2 *= c3;
            if j == i - 1 {
                for k in (1..=mn).rev() {
                    c[i][k] = c1 * (k as f64 * c[i - 1][k - 1] - c5 * c[i - 1][k]) / c2;
                }
                c[i][0] = -c1 * c5 * c[i - 1][0] / c2;
            }
            for k in (1..=mn).rev() {
                c[j][k] = (c4 * c[j][k] - k as f64 * c[j][k - 1]) / c3;
            }
            c[j][0] = c4 * c[j][0] / c3;
        }
        c1 = c2;
    }
    c.into_iter().map(|row| row[order]).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn classic_centered_weights() {
        let w = fd_weights(0.0, &[-1.0, 0.0, 1.0], 1);
        assert_eq!(w, vec![-0.5, 0.0, 0.5]);
        let w = fd_weights(0.0, &[-1.0, 0.0, 1.0], 2);
        assert_eq!(w, vec![1.0, -2.0, 1.0]);
        let w = fd_weights(0.0, &[-2.0, -1.0, 0.0, 1.0, 2.0], 1);
        let expect = [1.0 / 12.0, -2.0 / 3.0, 0.0, 2.0 / 3.0, -1.0 / 12.0];
        for (a, b) in w.iter().zip(expect) {
            assert!((a - b).abs() < 1e-14);
        }
    }

    #[test]
    fn exact_on_polynomials_nonuniform() {
        let xs = [0.0, 0.1, 0.25, 0.3, 0.42, 0.6, 0.61];
        let z = xs[3];
        let w = fd_weights(z, &xs, 1);
        // degree 6 polynomial differentiated exactly by 7 nodes
        let poly = |x: f64| 1.0 - 2.0 * x + 3.0 * x.powi(4) - x.powi(6);
        let dpoly = |x: f64| -2.0 + 12.0 * x.powi(3) - 6.0 * x.powi(5);
        let approx: f64 = w.iter().zip(xs).map(|(w, x)| w * poly(x)).sum();
        assert!((approx - dpoly(z)).abs() < 1e-10);
    }
}
