//! Real roots of univariate polynomials on an interval.
//!
//! Roots are isolated recursively: the critical points of `p` (roots of
//! `p'`) split the interval into monotone pieces, each of which holds at
//! most one simple root, located by sign-change bisection. Critical points
//! where `|p|` is within the touch tolerance are reported as roots too, so
//! even-multiplicity roots (which have no sign change) are not lost.

/// Dense polynomial, coefficients in ascending order of degree.
#[derive(Debug, Clone, PartialEq)]
pub struct Polynomial(pub Vec<f64>);

impl Polynomial {
    pub fn eval(&self, x: f64) -> f64 {
        self.0.iter().rev().fold(0.0, |acc, &c| acc * x + c)
    }

    pub fn derivative(&self) -> Self {
        Self(self.0.iter().enumerate().skip(1).map(|(i, &c)| i as f64 * c).collect())
    }

    /// Drops trailing coefficients that are negligible next to the largest.
    fn trimmed(&self) -> Self {
        let scale = self.0.iter().fold(0.0f64, |m, c| m.max(c.abs()));
        let mut coeffs = self.0.clone();
        while coeffs.last().is_some_and(|c| c.abs() <= scale * 1e-15) {
            coeffs.pop();
        }
        Self(coeffs)
    }

    /// True when every coefficient is below `eps` in magnitude.
    pub fn is_zero(&self, eps: f64) -> bool {
        self.0.iter().all(|c| c.abs() <= eps)
    }

    /// Roots in `[lo, hi]`, sorted and deduplicated. Local extrema with
    /// `|p| <= touch` count as roots.
    pub fn roots_in(&self, lo: f64, hi: f64, touch: f64) -> Vec<f64> {
        let p = self.trimmed();
        let mut roots = match p.0.len() {
            0 | 1 => Vec::new(),
            2 => {
                let r = -p.0[0] / p.0[1];
                if (lo..=hi).contains(&r) {
                    vec![r]
                } else {
                    Vec::new()
                }
            }
            _ => {
                let critical = p.derivative().roots_in(lo, hi, 0.0);
                let mut knots = Vec::with_capacity(critical.len() + 2);
                knots.push(lo);
                knots.extend(critical.iter().copied().filter(|&c| c > lo && c < hi));
                knots.push(hi);
                let mut found = Vec::new();
                for pair in knots.windows(2) {
                    let (a, b) = (pair[0], pair[1]);
                    let (fa, fb) = (p.eval(a), p.eval(b));
                    if fa == 0.0 {
                        found.push(a);
                    }
                    if fa * fb < 0.0 {
                        found.push(bisect(&p, a, b, fa));
                    }
                }
                if p.eval(hi) == 0.0 {
                    found.push(hi);
                }
                found.extend(critical.iter().copied().filter(|&c| p.eval(c).abs() <= touch));
                found
            }
        };
        roots.sort_by(f64::total_cmp);
        roots.dedup_by(|a, b| (*a - *b).abs() <= 1e-13);
        roots
    }
}

/// Bisection to floating-point resolution; requires a sign change.
fn bisect(p: &Polynomial, mut a: f64, mut b: f64, mut fa: f64) -> f64 {
    for _ in 0..200 {
        let mid = 0.5 * (a + b);
        if mid <= a || mid >= b {
            break;
        }
        let fm = p.eval(mid);
        if fm == 0.0 {
            return mid;
        }
        if (fm < 0.0) == (fa < 0.0) {
            a = mid;
            fa = fm;
        } else {
            b = mid;
        }
    }
    0.5 * (a + b)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn simple_roots() {
        // (x - 0.2)(x - 0.5)(x - 0.9)
        let p = Polynomial(vec![-0.09, 0.73, -1.6, 1.0]);
        let r = p.roots_in(0.0, 1.0, 0.0);
        assert_eq!(r.len(), 3);
        for (x, e) in r.iter().zip([0.2, 0.5, 0.9]) {
            assert!((x - e).abs() < 1e-14);
        }
        assert_eq!(p.roots_in(0.3, 0.4, 0.0), Vec::<f64>::new());
    }

    #[test]
    fn double_root_is_found() {
        // (x - 0.3)^2 (x - 0.8)
        let p = Polynomial(vec![-0.072, 0.57, -1.4, 1.0]);
        let r = p.roots_in(0.0, 1.0, 1e-12);
        assert_eq!(r.len(), 2);
        assert!((r[0] - 0.3).abs() < 1e-12);
        assert!((r[1] - 0.8).abs() < 1e-12);
    }

    #[test]
    fn endpoints_and_degenerate() {
        let p = Polynomial(vec![0.0, 1.0, -1.0]); // x(1 - x)
        assert_eq!(p.roots_in(0.0, 1.0, 0.0), vec![0.0, 1.0]);
        assert!(Polynomial(vec![2.0]).roots_in(0.0, 1.0, 0.0).is_empty());
        assert!(Polynomial(vec![0.0, 0.0]).is_zero(0.0));
    }
}
