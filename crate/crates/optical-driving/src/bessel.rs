//! Bessel functions of the first kind of integer order.

const SERIES_LIMIT: f64 = 2.0;
const RESCALE_ABOVE: f64 = 1e250;

/// J_n(x) for 0 ≤ |x| < 2 from the power series.
fn series(n: usize, x: f64) -> f64 {
    let h = 0.5 * x;
    let mut term = 1.0;
    for i in 1..=n {
        term *= h / i as f64;
        if term == 0.0 {
            return 0.0;
        }
    }
    let h2 = h * h;
    let mut sum = term;
    for k in 1..200 {
        term *= -h2 / (k as f64 * (k + n) as f64);
        sum += term;
        if term.abs() <= 1e-17 * sum.abs() {
            break;
        }
    }
    sum
}

/// J_0(x), …, J_{n_max}(x) by normalized downward (Miller) recurrence.
fn miller(n_max: usize, x: f64) -> Vec<f64> {
    let ax = x.abs();
    let reach = (n_max as f64).max(ax);
    let mut start = (reach + 30.0 + (50.0 * reach).sqrt()).ceil() as usize;
    start += start % 2;

    let mut j = vec![0.0; start + 2];
    j[start] = 1e-300;
    for k in (1..=start).rev() {
        j[k - 1] = (2.0 * k as f64 / x) * j[k] - j[k + 1];
        if j[k - 1].abs() > RESCALE_ABOVE {
            for v in &mut j[k - 1..] {
                *v /= RESCALE_ABOVE;
            }
        }
    }
    let norm = j[0] + 2.0 * j.iter().skip(2).step_by(2).sum::<f64>();
    j.truncate(n_max + 1);
    j.iter_mut().for_each(|v| *v /= norm);
    j
}

/// J_0(x), …, J_{n_max}(x).
pub fn bessel_j_ladder(n_max: usize, x: f64) -> Vec<f64> {
    if x == 0.0 {
        let mut v = vec![0.0; n_max + 1];
        v[0] = 1.0;
        return v;
    }
    if x < 0.0 {
        let mut v = bessel_j_ladder(n_max, -x);
        v.iter_mut().skip(1).step_by(2).for_each(|j| *j = -*j);
        return v;
    }
    if x < SERIES_LIMIT {
        return (0..=n_max).map(|n| series(n, x)).collect();
    }
    miller(n_max, x)
}

/// J_n(x) for any integer n, using J₋ₙ = (−1)ⁿ Jₙ.
pub fn bessel_jn(n: i64, x: f64) -> f64 {
    let m = n.unsigned_abs() as usize;
    let v = if x.abs() < SERIES_LIMIT {
        if x < 0.0 {
            series(m, -x) * if m % 2 == 1 { -1.0 } else { 1.0 }
        } else {
            series(m, x)
        }
    } else {
        bessel_j_ladder(m, x)[m]
    };
    if n < 0 && m % 2 == 1 {
        -v
    } else {
        v
    }
}

/// Looks up J_k for any integer k from a non-negative ladder.
pub(crate) fn from_ladder(ladder: &[f64], k: i64) -> f64 {
    let m = k.unsigned_abs() as usize;
    let v = ladder.get(m).copied().unwrap_or(0.0);
    if k < 0 && m % 2 == 1 {
        -v
    } else {
        v
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    /// (1/2π)∫ cos(nθ − x sinθ) dθ by the periodic trapezoid rule.
    fn integral_oracle(n: i64, x: f64) -> f64 {
        let m = 512;
        let h = std::f64::consts::TAU / m as f64;
        (0..m).map(|k| (n as f64 * k as f64 * h - x * (k as f64 * h).sin()).cos()).sum::<f64>() / m as f64
    }

    #[test]
    fn reference_values() {
        let table = [
            (0, 1.0, 0.7651976865579666),
            (1, 1.0, 0.44005058574493355),
            (5, 1.5, 0.0017994217673606126),
            (3, 7.0, -0.16755558799533432),
            (10, 10.0, 0.2074861066333589),
            (25, 30.0, 0.08429274064303181),
            (40, 60.0, -0.07764619740471498),
            (0, 60.0, -0.09147180408906189),
            (1, 59.5, 0.08529170609526628),
            (15, 16.5, 0.2590646558736666),
            (7, 0.3, 3.380544310218753e-10),
            (2, 45.3, -0.09961359204717729),
        ];
        for (n, x, want) in table {
            assert!((bessel_jn(n, x) - want).abs() < 1e-13, "J_{n}({x})");
        }
        assert_eq!(bessel_jn(0, 0.0), 1.0);
        assert_eq!(bessel_jn(3, 0.0), 0.0);
        assert!(bessel_jn(0, 2.4048).abs() < 3e-5);
    }

    #[test]
    fn matches_integral_representation() {
        for &x in &[0.01, 0.7, 1.99, 2.0, 3.3, 9.0, 17.5, 33.0, 59.9, -4.2, -0.5] {
            for n in -40..=40 {
                let got = bessel_jn(n, x);
                let want = integral_oracle(n, x);
                assert!((got - want).abs() <= 1e-12, "J_{n}({x}): {got} vs {want}");
            }
        }
    }

    #[test]
    fn normalization_and_recurrence() {
        let x = 10.0;
        let ladder = bessel_j_ladder(40, x);
        let total = ladder[0] * ladder[0] + 2.0 * ladder[1..].iter().map(|j| j * j).sum::<f64>();
        assert!((total - 1.0).abs() < 1e-10);
        for &x in &[0.3, 2.5, 7.7, 21.0, 48.0] {
            for n in 1..35 {
                let lhs = bessel_jn(n - 1, x) + bessel_jn(n + 1, x);
                let rhs = 2.0 * n as f64 / x * bessel_jn(n, x);
                assert!((lhs - rhs).abs() < 1e-10);
            }
        }
    }

    #[test]
    fn symmetries() {
        for n in -6i64..=6 {
            let sign = if n.rem_euclid(2) == 1 { -1.0 } else { 1.0 };
            assert!((bessel_jn(-n, 3.7) - sign * bessel_jn(n, 3.7)).abs() < 1e-15);
            assert!((bessel_jn(n, -3.7) - sign * bessel_jn(n, 3.7)).abs() < 1e-15);
        }
        let ladder = bessel_j_ladder(10, 5.0);
        for (n, &v) in ladder.iter().enumerate() {
            assert!((v - bessel_jn(n as i64, 5.0)).abs() < 1e-15);
        }
    }
}
