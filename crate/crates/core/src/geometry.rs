//! Point configurations used to build vector flows from covers, and their
//! pairwise-distance statistics.

use crate::error::{Error, Result};
use crate::flows::{norm, SigmaProjection};

#[derive(Clone, Debug, PartialEq)]
pub struct PointConfiguration {
    pub m: usize,
    pub points: Vec<Vec<f64>>,
    /// All coordinates are integers.
    pub exact: bool,
}

impl PointConfiguration {
    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn centroid(&self) -> Vec<f64> {
        let mut c = vec![0.0; self.m];
        for p in &self.points {
            for (a, b) in c.iter_mut().zip(p) {
                *a += b;
            }
        }
        let k = self.points.len().max(1) as f64;
        c.iter_mut().for_each(|x| *x /= k);
        c
    }
}

fn require_d(d: usize, min: usize) -> Result<()> {
    if d < min {
        Err(Error::InvalidArgument(format!("d = {d} must be at least {min}")))
    } else {
        Ok(())
    }
}

/// `e_i - e_j` for all ordered pairs `i != j`, sorted by `(i, j)`.
pub fn hd_vectors(d: usize) -> Vec<Vec<i64>> {
    let mut out = Vec::with_capacity(d * d.saturating_sub(1));
    for i in 0..d {
        for j in 0..d {
            if i != j {
                let mut v = vec![0i64; d];
                v[i] = 1;
                v[j] = -1;
                out.push(v);
            }
        }
    }
    out
}

/// The `d(d-1)` integer points of the zero-sum sphere, ordered by
/// (position of `+1`, position of `-1`).
pub fn hd_points(d: usize) -> Result<PointConfiguration> {
    require_d(d, 3)?;
    Ok(PointConfiguration {
        m: d,
        points: hd_vectors(d)
            .into_iter()
            .map(|v| v.into_iter().map(|c| c as f64).collect())
            .collect(),
        exact: true,
    })
}

/// `d` points in `R^(d-1)`: for `i < d`, `a_i` has `d*sqrt(d) - 2*sqrt(d) - 1`
/// in entry `i` and `-sqrt(d) - 1` elsewhere; `a_d` is `d - 1` everywhere.
///
/// Every `|a_i - a_j|` equals `(d-1) sqrt(2d)` and every `|a_i + a_j|`
/// equals `(d-1) sqrt(2(d-2))`, and the points sum to zero.
pub fn cover_points(d: usize) -> Result<PointConfiguration> {
    require_d(d, 3)?;
    let df = d as f64;
    let s = df.sqrt();
    let diag = df * s - 2.0 * s - 1.0;
    let off = -s - 1.0;
    let mut points = Vec::with_capacity(d);
    for i in 0..d - 1 {
        let mut p = vec![off; d - 1];
        p[i] = diag;
        points.push(p);
    }
    points.push(vec![df - 1.0; d - 1]);
    Ok(PointConfiguration {
        m: d - 1,
        points,
        exact: false,
    })
}

/// Regular `n`-simplex with the given side length, centred at the origin.
///
/// Built by centring the standard basis of `R^(n+1)` and expressing it in
/// an orthonormal basis of the zero-sum hyperplane.
pub fn regular_simplex(n: usize, side: f64) -> Result<PointConfiguration> {
    if side <= 0.0 {
        return Err(Error::InvalidArgument(format!("side {side} must be positive")));
    }
    if n == 0 {
        return Ok(PointConfiguration {
            m: 0,
            points: vec![Vec::new()],
            exact: false,
        });
    }
    // The projection scales by 1/sqrt(2); basis vectors are sqrt(2) apart.
    let proj = SigmaProjection::new(n + 1)?;
    let c = 1.0 / (n + 1) as f64;
    let points = (0..=n)
        .map(|i| {
            let v: Vec<f64> = (0..=n).map(|j| if i == j { 1.0 - c } else { -c }).collect();
            proj.project(&v).into_iter().map(|x| x * side).collect()
        })
        .collect();
    Ok(PointConfiguration {
        m: n,
        points,
        exact: false,
    })
}

/// Simplex dimensions `(d1, d2)` with `d1 <= d2`, `d1 + d2 = d - 2`.
pub fn two_simplex_split(d: usize) -> (usize, usize) {
    let d1 = (d - 2) / 2;
    (d1, d - 2 - d1)
}

/// Common side length of the two simplices.
pub fn two_simplex_side(d: usize) -> f64 {
    let df = d as f64;
    if d.is_multiple_of(2) {
        (df - 2.0).sqrt()
    } else {
        (df - 1.0 / df - 2.0).sqrt()
    }
}

/// `d` points in `R^(d-2)`: a regular `d1`-simplex in the first `d1`
/// coordinates and a regular `d2`-simplex in the remaining `d2`, both
/// centred at the origin with side [`two_simplex_side`]. The smaller simplex
/// comes first.
pub fn two_simplex_points(d: usize) -> Result<PointConfiguration> {
    require_d(d, 4)?;
    let (d1, d2) = two_simplex_split(d);
    let side = two_simplex_side(d);
    let f1 = regular_simplex(d1, side)?;
    let f2 = regular_simplex(d2, side)?;
    let m = d - 2;
    let mut points = Vec::with_capacity(d);
    for p in &f1.points {
        let mut x = vec![0.0; m];
        x[..d1].copy_from_slice(p);
        points.push(x);
    }
    for p in &f2.points {
        let mut x = vec![0.0; m];
        x[d1..].copy_from_slice(p);
        points.push(x);
    }
    Ok(PointConfiguration {
        m,
        points,
        exact: false,
    })
}

/// Upper bound on the flow number from an unoriented d-cover.
pub fn cover_flow_bound(d: usize) -> f64 {
    let df = d as f64;
    1.0 + (df / (df - 2.0)).sqrt()
}

/// Upper bound on the flow number from an oriented d-cover, `d >= 4`.
pub fn oriented_cover_flow_bound(d: usize) -> f64 {
    let df = d as f64;
    if d.is_multiple_of(2) {
        1.0 + (df / (df - 2.0)).sqrt()
    } else {
        1.0 + ((df * df - 1.0) / (df * df - 2.0 * df - 1.0)).sqrt()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ProfileMode {
    DifferencesOnly,
    SumsAndDifferences,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DistanceClass {
    pub value: f64,
    pub count: usize,
}

#[derive(Clone, Debug, PartialEq)]
pub struct DistanceProfile {
    pub classes: Vec<DistanceClass>,
    pub min: f64,
    pub max: f64,
    pub ratio: f64,
}

/// Pairwise `|P_i - P_j|` (and `|P_i + P_j|` in the second mode) over
/// `i < j`, grouped into classes whose consecutive members differ by at
/// most `tol` relative to the value.
pub fn distance_profile(
    p: &PointConfiguration,
    mode: ProfileMode,
    tol: f64,
) -> Result<DistanceProfile> {
    if p.len() < 2 {
        return Err(Error::InvalidArgument("need at least two points".into()));
    }
    let mut dists = Vec::new();
    for i in 0..p.len() {
        for j in i + 1..p.len() {
            let a = &p.points[i];
            let b = &p.points[j];
            let diff: Vec<f64> = a.iter().zip(b).map(|(x, y)| x - y).collect();
            dists.push(norm(&diff));
            if mode == ProfileMode::SumsAndDifferences {
                let sum: Vec<f64> = a.iter().zip(b).map(|(x, y)| x + y).collect();
                dists.push(norm(&sum));
            }
        }
    }
    dists.sort_by(f64::total_cmp);
    let mut classes: Vec<DistanceClass> = Vec::new();
    let mut anchor = f64::NAN;
    for x in dists.iter().copied() {
        match classes.last_mut() {
            Some(c) if (x - anchor).abs() <= tol * anchor.abs().max(1.0) => {
                c.count += 1;
            }
            _ => {
                anchor = x;
                classes.push(DistanceClass { value: x, count: 1 });
            }
        }
    }
    let min = dists[0];
    let max = *dists.last().unwrap();
    Ok(DistanceProfile {
        classes,
        min,
        max,
        ratio: if min > 0.0 { max / min } else { f64::INFINITY },
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn dist(a: &[f64], b: &[f64]) -> f64 {
        norm(&a.iter().zip(b).map(|(x, y)| x - y).collect::<Vec<_>>())
    }

    #[test]
    fn hd_points_d3_matches_listed_set() {
        let p = hd_points(3).unwrap();
        let mut got: Vec<Vec<i64>> = p
            .points
            .iter()
            .map(|v| v.iter().map(|&c| c as i64).collect())
            .collect();
        let mut want = vec![
            vec![1, -1, 0],
            vec![-1, 1, 0],
            vec![1, 0, -1],
            vec![-1, 0, 1],
            vec![0, 1, -1],
            vec![0, -1, 1],
        ];
        got.sort();
        want.sort();
        assert_eq!(got, want);
        assert_eq!(hd_points(4).unwrap().len(), 12);
        assert!(hd_points(2).is_err());
    }

    #[test]
    fn cover_points_d3() {
        let p = cover_points(3).unwrap();
        let s = 3f64.sqrt();
        let want = [[s - 1.0, -s - 1.0], [-s - 1.0, s - 1.0], [2.0, 2.0]];
        for (a, b) in p.points.iter().zip(want.iter()) {
            assert!(dist(a, b) < 1e-12);
        }
        let c = p.centroid();
        assert!(c.iter().all(|x| x.abs() < 1e-12));
    }

    #[test]
    fn simplex_examples() {
        let s = regular_simplex(1, 3.0).unwrap();
        let mut xs: Vec<f64> = s.points.iter().map(|p| p[0]).collect();
        xs.sort_by(f64::total_cmp);
        assert!((xs[0] + 1.5).abs() < 1e-12 && (xs[1] - 1.5).abs() < 1e-12);

        let t = regular_simplex(2, 1.0).unwrap();
        for p in &t.points {
            assert!((norm(p) - 1.0 / 3f64.sqrt()).abs() < 1e-12);
        }
        let z = regular_simplex(0, 1.0).unwrap();
        assert_eq!(z.points, vec![Vec::<f64>::new()]);
    }

    #[test]
    fn two_simplex_points_d4() {
        let p = two_simplex_points(4).unwrap();
        let h = 2f64.sqrt() / 2.0;
        let want = [[h, 0.0], [-h, 0.0], [0.0, h], [0.0, -h]];
        for (a, b) in p.points.iter().zip(want.iter()) {
            assert!(dist(a, b) < 1e-12, "{a:?} vs {b:?}");
        }
        let prof = distance_profile(&p, ProfileMode::DifferencesOnly, 1e-9).unwrap();
        assert_eq!(prof.classes.len(), 2);
        assert!((prof.ratio - 2f64.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn two_simplex_d5_ratio() {
        let p = two_simplex_points(5).unwrap();
        assert_eq!(p.len(), 5);
        assert_eq!(p.m, 3);
        let prof = distance_profile(&p, ProfileMode::DifferencesOnly, 1e-9).unwrap();
        assert!((prof.ratio - (24.0f64 / 14.0).sqrt()).abs() < 1e-12);
    }

    #[test]
    fn cover_points_profile_d4() {
        let p = cover_points(4).unwrap();
        let prof = distance_profile(&p, ProfileMode::SumsAndDifferences, 1e-9).unwrap();
        assert_eq!(prof.classes.len(), 2);
        assert!((prof.min - 6.0).abs() < 1e-9);
        assert!((prof.max - 6.0 * 2f64.sqrt()).abs() < 1e-9);
    }

    #[test]
    fn hexagon_distance_classes() {
        // brute force over the 15 pairs
        let p = hd_points(3).unwrap();
        let prof = distance_profile(&p, ProfileMode::DifferencesOnly, 1e-9).unwrap();
        let values: Vec<f64> = prof.classes.iter().map(|c| c.value).collect();
        let want = [2f64.sqrt(), 6f64.sqrt(), 2.0 * 2f64.sqrt()];
        assert_eq!(values.len(), 3);
        for (a, b) in values.iter().zip(want) {
            assert!((a - b).abs() < 1e-12);
        }
        let counts: Vec<usize> = prof.classes.iter().map(|c| c.count).collect();
        assert_eq!(counts, vec![6, 6, 3]);
    }

    #[test]
    fn bounds_at_small_d() {
        assert!((cover_flow_bound(3) - (1.0 + 3f64.sqrt())).abs() < 1e-15);
        assert!((oriented_cover_flow_bound(4) - (1.0 + 2f64.sqrt())).abs() < 1e-15);
        assert!((oriented_cover_flow_bound(5) - (1.0 + (12.0f64 / 7.0).sqrt())).abs() < 1e-15);
    }
}
