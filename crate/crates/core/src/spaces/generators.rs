//! Standard example systems.

use num_integer::Integer;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use super::metric::{MetricSpace, WordInfo};
use super::spec::SystemSpec;
use super::system::{Csr, SystemMap};
use crate::error::{Error, Result};
use crate::rational::{self, Rational, RationalString};

/// Largest word space a truncated shift may have.
pub const MAX_WORDS: usize = 1 << 12;

/// `i -> i + step (mod n)` on the circle `Z_n`.
pub fn make_rotation(n: usize, step: i64) -> Result<SystemMap> {
    if n == 0 {
        return Err(Error::invalid("rotation needs n >= 1"));
    }
    let space = MetricSpace::circle(n)?;
    let s = step.rem_euclid(n as i64) as usize;
    let table = (0..n).map(|i| (i + s) % n).collect();
    SystemMap::with_spec(space, table, SystemSpec::Rotation { n, step })
}

/// `i -> a*i (mod n)` on the circle `Z_n`.
pub fn make_multiply(n: usize, a: u64) -> Result<SystemMap> {
    if n == 0 {
        return Err(Error::invalid("multiply needs n >= 1"));
    }
    let space = MetricSpace::circle(n)?;
    let table = (0..n).map(|i| ((a as u128 * i as u128) % n as u128) as usize).collect();
    SystemMap::with_spec(space, table, SystemSpec::Multiply { n, a })
}

/// How a real image value is moved onto the grid `{i/m}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Snap {
    /// Largest grid point not above the value.
    Down,
    /// Closest grid point; ties go up.
    Nearest,
}

/// A continuous piecewise-linear map of `[0, 1]` given by its breakpoints.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PiecewiseLinear {
    points: Vec<(Rational, Rational)>,
}

impl PiecewiseLinear {
    /// Breakpoints must start at `x = 0`, end at `x = 1`, have strictly
    /// increasing `x`, and `y` values in `[0, 1]`.
    pub fn new(points: Vec<(Rational, Rational)>) -> Result<Self> {
        let (zero, one) = (Rational::zero(), Rational::one());
        if points.len() < 2 {
            return Err(Error::invalid("need at least two breakpoints"));
        }
        if points[0].0 != zero || points[points.len() - 1].0 != one {
            return Err(Error::invalid("breakpoints must span x = 0 to x = 1"));
        }
        if points.windows(2).any(|w| w[0].0 >= w[1].0) {
            return Err(Error::invalid("breakpoint x values must increase strictly"));
        }
        if let Some((x, y)) = points.iter().find(|(_, y)| *y < zero || *y > one) {
            return Err(Error::invalid(format!(
                "f({}) = {} leaves [0,1]",
                rational::label(x),
                rational::label(y)
            )));
        }
        Ok(PiecewiseLinear { points })
    }

    /// One of the built-in maps: `half`, `identity`, `tent`, `constant`.
    pub fn named(name: &str) -> Result<Self> {
        let r = Rational::new;
        let pts = match name {
            "half" => vec![(r(0, 1), r(0, 1)), (r(1, 1), r(1, 2))],
            "identity" => vec![(r(0, 1), r(0, 1)), (r(1, 1), r(1, 1))],
            "tent" => vec![(r(0, 1), r(0, 1)), (r(1, 2), r(1, 1)), (r(1, 1), r(0, 1))],
            "constant" => vec![(r(0, 1), r(0, 1)), (r(1, 1), r(0, 1))],
            _ => return Err(Error::invalid(format!("unknown grid map `{name}`"))),
        };
        Self::new(pts)
    }

    pub fn breakpoints(&self) -> &[(Rational, Rational)] {
        &self.points
    }

    pub fn eval(&self, x: Rational) -> Rational {
        let seg = self
            .points
            .windows(2)
            .find(|w| x <= w[1].0)
            .unwrap_or(&self.points[self.points.len() - 2..]);
        let ((x0, y0), (x1, y1)) = (seg[0], seg[1]);
        y0 + (y1 - y0) * (x - x0) / (x1 - x0)
    }
}

/// Grid index of `y` on `{i/m}` under the given snapping rule.
fn snap_index(y: Rational, m: usize, snap: Snap) -> usize {
    let scaled = y * Rational::from_integer(m as i64);
    let idx = match snap {
        Snap::Down => scaled.floor(),
        Snap::Nearest => (scaled + Rational::new(1, 2)).floor(),
    };
    (*idx.numer()).clamp(0, m as i64) as usize
}

/// The map `f` sampled on `{0, 1/m, ..., 1}` and snapped back to the grid.
pub fn make_grid_interval_map(f: &PiecewiseLinear, m: usize, snap: Snap) -> Result<SystemMap> {
    let space = MetricSpace::unit_grid(m)?;
    let table = (0..=m)
        .map(|i| snap_index(f.eval(Rational::new(i as i64, m as i64)), m, snap))
        .collect();
    let spec = SystemSpec::GridMap {
        m,
        snap,
        breakpoints: f
            .points
            .iter()
            .map(|&(x, y)| [RationalString(x), RationalString(y)])
            .collect(),
    };
    SystemMap::with_spec(space, table, spec)
}

/// Vertex shift of finite type truncated at words of length `resolution`.
///
/// Points are the allowed words `u` of length `k`, with
/// `d(u, v) = 2^-i` for the first index `i` where they differ. The dynamics
/// is the relation `u -> u[1..]a` over allowed transitions `u[k-1] -> a`:
/// the shift is only known up to the symbol that enters on the right.
pub fn make_sft(alphabet: Vec<String>, transitions: Vec<Vec<u8>>, resolution: usize) -> Result<SystemMap> {
    let q = alphabet.len();
    if q == 0 {
        return Err(Error::invalid("alphabet is empty"));
    }
    if resolution == 0 {
        return Err(Error::invalid("resolution must be at least 1"));
    }
    if transitions.len() != q || transitions.iter().any(|r| r.len() != q) {
        return Err(Error::invalid(format!("transition matrix must be {q}x{q}")));
    }
    if transitions.iter().flatten().any(|&e| e > 1) {
        return Err(Error::invalid("transition entries must be 0 or 1"));
    }
    let allowed = |a: usize, b: usize| transitions[a][b] == 1;
    for (v, sym) in alphabet.iter().enumerate() {
        let out = (0..q).any(|b| allowed(v, b));
        let inc = (0..q).any(|a| allowed(a, v));
        if !out || !inc {
            return Err(Error::invalid(format!(
                "symbol `{}` is stranded in the transition graph",
                sym
            )));
        }
    }
    let mut words: Vec<Vec<u8>> = (0..q).map(|a| vec![a as u8]).collect();
    for _ in 1..resolution {
        let mut next = Vec::new();
        for w in &words {
            let last = *w.last().unwrap() as usize;
            for b in (0..q).filter(|&b| allowed(last, b)) {
                let mut v = w.clone();
                v.push(b as u8);
                next.push(v);
            }
        }
        if next.len() > MAX_WORDS {
            return Err(Error::BoundExceeded {
                what: "truncated shift word space",
                requested: next.len() as u128,
                limit: MAX_WORDS as u128,
            });
        }
        words = next;
    }
    let n = words.len();
    let index: std::collections::HashMap<&[u8], usize> =
        words.iter().enumerate().map(|(i, w)| (w.as_slice(), i)).collect();
    let sep = if alphabet.iter().all(|s| s.chars().count() == 1) {
        ""
    } else {
        "."
    };
    let labels: Vec<String> = words
        .iter()
        .map(|w| {
            w.iter()
                .map(|&a| alphabet[a as usize].as_str())
                .collect::<Vec<_>>()
                .join(sep)
        })
        .collect();
    let mut dist = Vec::with_capacity(n * n);
    for u in &words {
        for v in &words {
            dist.push(match u.iter().zip(v).position(|(a, b)| a != b) {
                None => Rational::zero(),
                Some(i) => Rational::new(1, 1i64 << i),
            });
        }
    }
    let succ = Csr::from_rows(words.iter().map(|w| {
        let last = *w.last().unwrap() as usize;
        (0..q)
            .filter(|&b| allowed(last, b))
            .map(|b| {
                let mut v = w[1..].to_vec();
                v.push(b as u8);
                index[v.as_slice()]
            })
            .collect::<Vec<_>>()
    }));
    let info = WordInfo {
        alphabet: alphabet.clone(),
        resolution,
        words,
    };
    let space = MetricSpace::words(labels, dist, info);
    let spec = SystemSpec::Sft {
        alphabet,
        transitions,
        resolution,
    };
    SystemMap::from_relation(space, succ, spec)
}

/// The full shift on `symbols` letters `0, 1, ...`, truncated at `resolution`.
pub fn make_full_shift(symbols: usize, resolution: usize) -> Result<SystemMap> {
    let alphabet = (0..symbols).map(|a| a.to_string()).collect();
    make_sft(alphabet, vec![vec![1; symbols]; symbols], resolution)
}

/// The golden-mean shift: binary words with no two consecutive `1`s.
pub fn make_golden_mean(resolution: usize) -> Result<SystemMap> {
    make_sft(vec!["0".into(), "1".into()], vec![vec![1, 1], vec![1, 0]], resolution)
}

/// `x -> -x (mod n)` on `Z_n`, an isometric involution.
pub fn make_reflection(n: usize) -> Result<SystemMap> {
    if n == 0 {
        return Err(Error::invalid("reflection needs n >= 1"));
    }
    let space = MetricSpace::circle(n)?;
    let table: Vec<usize> = (0..n).map(|i| (n - i) % n).collect();
    SystemMap::from_table(space, table)
}

/// Multiplicative order of `a` modulo `n`, if `gcd(a, n) = 1`.
pub fn multiplicative_order(a: u64, n: u64) -> Option<u64> {
    if n == 1 {
        return Some(1);
    }
    if a.gcd(&n) != 1 {
        return None;
    }
    let mut x = a % n;
    let mut k = 1;
    while x != 1 {
        x = x * a % n;
        k += 1;
    }
    Some(k)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat;

    #[test]
    fn rotation_cycles_back() {
        let r = make_rotation(4, 1).unwrap();
        assert_eq!(r.apply_n(0, 4), 0);
        assert!(r.is_surjective());
        assert_eq!(make_rotation(5, -1).unwrap().apply(0), 4);
        assert!(make_rotation(0, 1).is_err());
    }

    #[test]
    fn multiply_surjectivity_follows_gcd() {
        for n in 1..=12usize {
            for a in 1..=12u64 {
                let t = make_multiply(n, a).unwrap();
                assert_eq!(t.is_surjective(), a.gcd(&(n as u64)) == 1, "n={n} a={a}");
            }
        }
        assert_eq!(multiplicative_order(2, 9), Some(6));
    }

    #[test]
    fn halving_map_orbit() {
        let t = make_grid_interval_map(&PiecewiseLinear::named("half").unwrap(), 8, Snap::Down).unwrap();
        let orbit: Vec<usize> = (0..5).map(|k| t.apply_n(8, k)).collect();
        assert_eq!(orbit, vec![8, 4, 2, 1, 0]);
    }

    #[test]
    fn tent_on_eighths_misses_odd_points() {
        let t = make_grid_interval_map(&PiecewiseLinear::named("tent").unwrap(), 8, Snap::Nearest).unwrap();
        let image: std::collections::BTreeSet<usize> = t.table().unwrap().iter().map(|&y| y as usize).collect();
        assert_eq!(image.into_iter().collect::<Vec<_>>(), vec![0, 2, 4, 6, 8]);
        assert!(!t.is_surjective());
    }

    #[test]
    fn snapping_rules() {
        assert_eq!(snap_index(rat(3, 16), 8, Snap::Down), 1);
        assert_eq!(snap_index(rat(3, 16), 8, Snap::Nearest), 2);
        assert_eq!(snap_index(rat(5, 32), 8, Snap::Nearest), 1);
    }

    #[test]
    fn rejects_maps_leaving_the_interval() {
        assert!(PiecewiseLinear::new(vec![(rat(0, 1), rat(0, 1)), (rat(1, 1), rat(3, 2))]).is_err());
        assert!(PiecewiseLinear::new(vec![(rat(0, 1), rat(0, 1)), (rat(1, 2), rat(1, 1))]).is_err());
    }

    #[test]
    fn full_shift_words_and_metric() {
        let s = make_full_shift(2, 3).unwrap();
        assert_eq!(s.len(), 8);
        let sp = s.space();
        let (a, b) = (sp.index_of("010").unwrap(), sp.index_of("011").unwrap());
        assert_eq!(sp.dist(a, b), rat(1, 4));
        assert_eq!(sp.dist(a, sp.index_of("110").unwrap()), rat(1, 1));
        let succ: Vec<String> = s.successors(a).into_iter().map(|y| sp.label(y)).collect();
        assert_eq!(succ, vec!["100", "101"]);
        assert!(sp.validate().is_empty());
    }

    #[test]
    fn golden_mean_avoids_11() {
        let s = make_golden_mean(3).unwrap();
        assert_eq!(s.len(), 5);
        assert!((0..s.len()).all(|i| !s.space().label(i).contains("11")));
    }

    #[test]
    fn stranded_symbols_are_rejected() {
        let r = make_sft(vec!["a".into(), "b".into()], vec![vec![1, 1], vec![0, 0]], 2);
        assert!(r.is_err());
    }
}
