//! Gauss–Legendre rules on segments and symmetric rules on the reference
//! triangle.

use crate::mesh::AffineMap;

/// Gauss–Legendre rule on `[0, 1]`.
#[derive(Debug, Clone, PartialEq)]
pub struct SegmentRule {
    pub points: Vec<f64>,
    pub weights: Vec<f64>,
}

impl SegmentRule {
    /// `n`-point rule, exact for polynomials of degree `2n - 1`.
    pub fn gauss_legendre(n: usize) -> Self {
        assert!(n >= 1, "segment rule needs at least one point");
        let mut points = vec![0.0; n];
        let mut weights = vec![0.0; n];
        for i in 0..n.div_ceil(2) {
            // Newton on P_n starting from the Chebyshev-like guess.
            let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
            let mut dp = 0.0;
            for _ in 0..100 {
                let (p, d) = legendre(n, x);
                dp = d;
                let dx = p / d;
                x -= dx;
                if dx.abs() < 1e-16 {
                    break;
                }
            }
            let (_, d) = legendre(n, x);
            dp = if d != 0.0 { d } else { dp };
            let w = 2.0 / ((1.0 - x * x) * dp * dp);
            // Map [-1, 1] -> [0, 1]; nodes ascending.
            points[i] = 0.5 * (1.0 - x);
            points[n - 1 - i] = 0.5 * (1.0 + x);
            weights[i] = 0.5 * w;
            weights[n - 1 - i] = 0.5 * w;
        }
        SegmentRule { points, weights }
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Highest polynomial degree integrated exactly.
    pub fn degree(&self) -> usize {
        2 * self.points.len() - 1
    }
}

impl Default for SegmentRule {
    fn default() -> Self {
        SegmentRule::gauss_legendre(16)
    }
}

/// Legendre polynomial and its derivative at `x`.
fn legendre(n: usize, x: f64) -> (f64, f64) {
    let (mut p0, mut p1) = (1.0, x);
    for k in 2..=n {
        let k = k as f64;
        let p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
    }
    let p = if n == 0 { 1.0 } else { p1 };
    let prev = if n == 0 { 0.0 } else { p0 };
    let d = n as f64 * (x * p - prev) / (x * x - 1.0);
    (p, d)
}

/// Quadrature rule on the reference triangle (0,0),(1,0),(0,1). Weights sum
/// to the area 1/2.
#[derive(Debug, Clone, PartialEq)]
pub struct TriangleRule {
    pub points: Vec<[f64; 2]>,
    pub weights: Vec<f64>,
    pub degree: usize,
}

/// Symmetric orbit in barycentric form, weight normalised to unit area.
enum Orbit {
    Centroid(f64),
    /// (weight, a) with barycentric (a, b, b), b = (1 - a) / 2.
    Three(f64, f64),
    /// (weight, a, b) with barycentric permutations of (a, b, 1 - a - b).
    Six(f64, f64, f64),
}

impl TriangleRule {
    /// Rule exact for total degree `degree`. Degrees 1, 2, 4, 5, 6 and 8 use
    /// fully symmetric rules with positive weights; other degrees use a
    /// collapsed Gauss product rule.
    pub fn with_degree(degree: usize) -> Self {
        let orbits: Option<Vec<Orbit>> = match degree {
            0 | 1 => Some(vec![Orbit::Centroid(1.0)]),
            2 => Some(vec![Orbit::Three(1.0 / 3.0, 2.0 / 3.0)]),
            4 => Some(vec![
                Orbit::Three(0.223381589678011, 0.108103018168070),
                Orbit::Three(0.109951743655322, 0.816847572980459),
            ]),
            5 => {
                let s = 15f64.sqrt();
                Some(vec![
                    Orbit::Centroid(9.0 / 40.0),
                    Orbit::Three((155.0 + s) / 1200.0, (9.0 - 2.0 * s) / 21.0),
                    Orbit::Three((155.0 - s) / 1200.0, (9.0 + 2.0 * s) / 21.0),
                ])
            }
            6 => Some(vec![
                Orbit::Three(0.116786275726379, 0.501426509658179),
                Orbit::Three(0.050844906370207, 0.873821971016996),
                Orbit::Six(0.082851075618374, 0.053145049844817, 0.310352451033784),
            ]),
            8 => Some(vec![
                Orbit::Centroid(0.144315607677787),
                Orbit::Three(0.095091634267285, 0.081414823414554),
                Orbit::Three(0.103217370534718, 0.658861384496480),
                Orbit::Three(0.032458497623198, 0.898905543365938),
                Orbit::Six(0.027230314174435, 0.008394777409958, 0.263112829634638),
            ]),
            _ => None,
        };
        match orbits {
            Some(orbits) => Self::from_orbits(&orbits, degree.max(1)),
            None => Self::collapsed_gauss(degree),
        }
    }

    fn from_orbits(orbits: &[Orbit], degree: usize) -> Self {
        let mut points = Vec::new();
        let mut weights = Vec::new();
        // Barycentric (l0, l1, l2) -> cartesian (l1, l2).
        let mut push = |l: [f64; 3], w: f64| {
            points.push([l[1], l[2]]);
            weights.push(0.5 * w);
        };
        for o in orbits {
            match *o {
                Orbit::Centroid(w) => push([1.0 / 3.0; 3], w),
                Orbit::Three(w, a) => {
                    let b = 0.5 * (1.0 - a);
                    push([a, b, b], w);
                    push([b, a, b], w);
                    push([b, b, a], w);
                }
                Orbit::Six(w, a, b) => {
                    let c = 1.0 - a - b;
                    for l in [[a, b, c], [a, c, b], [b, a, c], [b, c, a], [c, a, b], [c, b, a]] {
                        push(l, w);
                    }
                }
            }
        }
        TriangleRule {
            points,
            weights,
            degree,
        }
    }

    /// Duffy-collapsed tensor Gauss rule, exact for total degree `degree`.
    pub fn collapsed_gauss(degree: usize) -> Self {
        let q = (degree + 2).div_ceil(2);
        let g = SegmentRule::gauss_legendre(q);
        let mut points = Vec::with_capacity(q * q);
        let mut weights = Vec::with_capacity(q * q);
        for (&u, &wu) in g.points.iter().zip(&g.weights) {
            for (&v, &wv) in g.points.iter().zip(&g.weights) {
                points.push([u, v * (1.0 - u)]);
                weights.push(wu * wv * (1.0 - u));
            }
        }
        TriangleRule {
            points,
            weights,
            degree,
        }
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }
}

impl Default for TriangleRule {
    fn default() -> Self {
        TriangleRule::with_degree(8)
    }
}

/// `∫_0^L f(a + s (b - a) / L) ds`, `L = |b - a|`. Zero for `a == b`.
pub fn integrate_segment<const N: usize, E>(
    mut f: impl FnMut([f64; N]) -> Result<f64, E>,
    a: [f64; N],
    b: [f64; N],
    rule: &SegmentRule,
) -> Result<f64, E> {
    let mut d = [0.0; N];
    for k in 0..N {
        d[k] = b[k] - a[k];
    }
    let len = d.iter().map(|x| x * x).sum::<f64>().sqrt();
    if len == 0.0 {
        return Ok(0.0);
    }
    let mut sum = 0.0;
    for (&t, &w) in rule.points.iter().zip(&rule.weights) {
        let mut p = a;
        for k in 0..N {
            p[k] += t * d[k];
        }
        sum += w * f(p)?;
    }
    Ok(sum * len)
}

/// Quadrature sum over the reference triangle.
pub fn integrate_triangle<E>(
    mut f: impl FnMut([f64; 2]) -> Result<f64, E>,
    rule: &TriangleRule,
) -> Result<f64, E> {
    let mut sum = 0.0;
    for (&p, &w) in rule.points.iter().zip(&rule.weights) {
        sum += w * f(p)?;
    }
    Ok(sum)
}

/// Integral over a physical triangle of `f` given in physical coordinates.
pub fn integrate_element<E>(
    mut f: impl FnMut([f64; 2]) -> Result<f64, E>,
    map: &AffineMap,
    rule: &TriangleRule,
) -> Result<f64, E> {
    Ok(map.det.abs() * integrate_triangle(|r| f(map.apply(r)), rule)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::convert::Infallible;

    fn ok(v: f64) -> Result<f64, Infallible> {
        Ok(v)
    }

    /// Closed form of ∫_K̂ x^a y^b = a! b! / (a + b + 2)!.
    fn monomial_integral(a: u32, b: u32) -> f64 {
        let fact = |n: u32| (1..=n).map(f64::from).product::<f64>();
        fact(a) * fact(b) / fact(a + b + 2)
    }

    #[test]
    fn segment_rules_are_exact() {
        for n in 1..=20 {
            let r = SegmentRule::gauss_legendre(n);
            assert!(r.weights.iter().all(|&w| w > 0.0));
            assert!((r.weights.iter().sum::<f64>() - 1.0).abs() < 1e-14);
            for p in 0..=r.degree() as i32 {
                let q: f64 = r.points.iter().zip(&r.weights).map(|(x, w)| w * x.powi(p)).sum();
                let exact = 1.0 / (p as f64 + 1.0);
                assert!((q - exact).abs() < 1e-14 * exact.max(1e-2), "n={n} p={p}: {q} vs {exact}");
            }
        }
    }

    #[test]
    fn segment_examples() {
        let r = SegmentRule::default();
        let one = integrate_segment(|_| ok(1.0), [0.0, 0.0], [1.0, 0.0], &r).unwrap();
        assert!((one - 1.0).abs() < 1e-15);
        let e = integrate_segment(|p| ok(p[0].exp()), [0.0, 0.0], [1.0, 0.0], &r).unwrap();
        assert!((e - (std::f64::consts::E - 1.0)).abs() < 1e-13);
        let z = integrate_segment(|_| ok(1.0), [0.3, 0.4], [0.3, 0.4], &r).unwrap();
        assert_eq!(z, 0.0);
        // Length scaling on a diagonal.
        let d = integrate_segment(|_| ok(2.0), [0.0, 0.0], [3.0, 4.0], &r).unwrap();
        assert!((d - 10.0).abs() < 1e-13);
    }

    #[test]
    fn triangle_rules_are_exact() {
        for degree in 1..=10 {
            let r = TriangleRule::with_degree(degree);
            assert!((r.weights.iter().sum::<f64>() - 0.5).abs() < 1e-14, "degree {degree}");
            assert!(r.weights.iter().all(|&w| w > 0.0));
            for a in 0..=degree as u32 {
                for b in 0..=(degree as u32 - a) {
                    let q = integrate_triangle(|p| ok(p[0].powi(a as i32) * p[1].powi(b as i32)), &r)
                        .unwrap();
                    let exact = monomial_integral(a, b);
                    assert!(
                        (q - exact).abs() < 1e-14,
                        "degree {degree}: x^{a} y^{b}: {q} vs {exact}"
                    );
                }
            }
        }
    }

    #[test]
    fn triangle_examples() {
        let r = TriangleRule::default();
        assert!((integrate_triangle(|_| ok(1.0), &r).unwrap() - 0.5).abs() < 1e-15);
        assert!((integrate_triangle(|p| ok(p[0]), &r).unwrap() - 1.0 / 6.0).abs() < 1e-15);
        let r6 = TriangleRule::with_degree(6);
        let v = integrate_triangle(|p| ok(p[0] * p[0] * p[1] * p[1]), &r6).unwrap();
        assert!((v - 1.0 / 180.0).abs() < 1e-15);
    }

    #[test]
    fn element_integral_scales_by_det() {
        let map = AffineMap::from_vertices([[1.0, 1.0], [3.0, 1.0], [1.0, 2.0]]).unwrap();
        let area = integrate_element(|_| ok(1.0), &map, &TriangleRule::default()).unwrap();
        assert!((area - 1.0).abs() < 1e-14);
        // ∫ x over the triangle = area * centroid_x = 1 * 5/3.
        let mx = integrate_element(|p| ok(p[0]), &map, &TriangleRule::default()).unwrap();
        assert!((mx - 5.0 / 3.0).abs() < 1e-14);
    }
}
