//! Cyclic Jacobi diagonalization of dense Hermitian matrices.

use crate::opalg::{LinearOp, C64, ZERO};
use crate::{Error, Result};

const MAX_SWEEPS: usize = 100;

/// All eigenvalues of a Hermitian operator, ascending.
///
/// Each rotation zeroes one off-diagonal pair `(p, q)` after rotating its
/// phase onto the real axis; sweeps repeat until the off-diagonal mass is
/// negligible relative to the Frobenius norm.
pub fn hermitian_eigenvalues(op: &LinearOp) -> Result<Vec<f64>> {
    let n = op.dim();
    let scale = op.max_abs().max(1.0);
    let deviation = op.hermitian_deviation();
    if deviation > 1e-12 * scale {
        return Err(Error::NotHermitian { deviation });
    }
    let mut a: Vec<C64> = op.entries().to_vec();
    for i in 0..n {
        a[i * n + i] = C64::new(a[i * n + i].re, 0.0);
    }
    let frob: f64 = a.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    let threshold = f64::EPSILON * frob.max(f64::MIN_POSITIVE);

    for _ in 0..MAX_SWEEPS {
        let mut off = 0.0;
        for p in 0..n {
            for q in (p + 1)..n {
                off += a[p * n + q].norm_sqr();
            }
        }
        if off.sqrt() <= threshold {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = a[p * n + q];
                let r = apq.norm();
                if r <= threshold * 1e-3 {
                    continue;
                }
                rotate(&mut a, n, p, q, apq / r, r);
            }
        }
    }

    let mut eig: Vec<f64> = (0..n).map(|i| a[i * n + i].re).collect();
    eig.sort_by(f64::total_cmp);
    Ok(eig)
}

fn rotate(a: &mut [C64], n: usize, p: usize, q: usize, phase: C64, r: f64) {
    let app = a[p * n + p].re;
    let aqq = a[q * n + q].re;
    let theta = (aqq - app) / (2.0 * r);
    let t = if theta >= 0.0 {
        1.0 / (theta + (1.0 + theta * theta).sqrt())
    } else {
        -1.0 / (-theta + (1.0 + theta * theta).sqrt())
    };
    let c = 1.0 / (1.0 + t * t).sqrt();
    let s = t * c;
    // G = diag(1, conj(phase)) · [[c, s], [-s, c]], applied as G† A G
    let back = phase.conj();
    let g_pp = C64::new(c, 0.0);
    let g_pq = C64::new(s, 0.0);
    let g_qp = back * -s;
    let g_qq = back * c;

    for k in 0..n {
        let akp = a[k * n + p];
        let akq = a[k * n + q];
        a[k * n + p] = akp * g_pp + akq * g_qp;
        a[k * n + q] = akp * g_pq + akq * g_qq;
    }
    for k in 0..n {
        let apk = a[p * n + k];
        let aqk = a[q * n + k];
        a[p * n + k] = g_pp.conj() * apk + g_qp.conj() * aqk;
        a[q * n + k] = g_pq.conj() * apk + g_qq.conj() * aqk;
    }
    a[p * n + q] = ZERO;
    a[q * n + p] = ZERO;
    a[p * n + p] = C64::new(a[p * n + p].re, 0.0);
    a[q * n + q] = C64::new(a[q * n + q].re, 0.0);
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::opalg::ONE;
    use proptest::prelude::*;

    #[test]
    fn diagonal_input() {
        let op = LinearOp::from_diag(&[C64::from(3.0), C64::from(-1.0)]);
        assert_eq!(hermitian_eigenvalues(&op).unwrap(), vec![-1.0, 3.0]);
    }

    #[test]
    fn two_by_two_block() {
        let op = LinearOp::from_rows(2, vec![C64::from(0.0), C64::new(1.0, -1.0), C64::new(1.0, 1.0), C64::from(0.0)]).unwrap();
        let e = hermitian_eigenvalues(&op).unwrap();
        let r2 = 2f64.sqrt();
        assert!((e[0] + r2).abs() < 1e-14 && (e[1] - r2).abs() < 1e-14);
    }

    #[test]
    fn rejects_non_hermitian() {
        let op = LinearOp::from_rows(2, vec![ONE, ONE, C64::from(0.0), ONE]).unwrap();
        assert!(matches!(hermitian_eigenvalues(&op), Err(Error::NotHermitian { .. })));
    }

    fn hermitian(n: usize, raw: &[(f64, f64)]) -> LinearOp {
        let mut op = LinearOp::zeros(n);
        let mut k = 0;
        for i in 0..n {
            for j in i..n {
                let (re, im) = raw[k];
                k += 1;
                if i == j {
                    op.set(i, i, C64::from(re));
                } else {
                    op.set(i, j, C64::new(re, im));
                    op.set(j, i, C64::new(re, -im));
                }
            }
        }
        op
    }

    proptest! {
        // power sums of the eigenvalues equal traces of powers
        #[test]
        fn power_sums_match_traces(raw in prop::collection::vec((-2.0..2.0f64, -2.0..2.0f64), 21)) {
            let a = hermitian(6, &raw);
            let e = hermitian_eigenvalues(&a).unwrap();
            let trace = |m: &LinearOp| (0..6).map(|i| m.get(i, i).re).sum::<f64>();
            let a2 = &a * &a;
            let a3 = &a2 * &a;
            for (k, m) in [(1, &a), (2, &a2), (3, &a3)] {
                let s: f64 = e.iter().map(|x| x.powi(k)).sum();
                prop_assert!((s - trace(m)).abs() < 1e-10 * (1.0 + trace(m).abs()));
            }
            prop_assert!(e.windows(2).all(|w| w[0] <= w[1]));
        }
    }
}
