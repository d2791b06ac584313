use crate::bounds::Bounds;
use crate::error::{Error, Result};
use crate::spaces::{
    make_full_shift, make_golden_mean, make_grid_interval_map, make_multiply, make_reflection, make_rotation,
    product_system, PiecewiseLinear, Snap, SystemMap, SystemSpec,
};

/// Generator syntax accepted by [`parse_system`].
pub const GENERATORS: &[(&str, &str)] = &[
    ("point", "the one-point system"),
    ("rotation:n,s", "i -> i + s (mod n) on the circle Z_n"),
    ("reflection:n", "i -> -i (mod n) on the circle Z_n"),
    ("multiply:n,a", "i -> a*i (mod n) on the circle Z_n"),
    (
        "gridmap:f,m[,down|nearest]",
        "f in half|identity|tent|constant on {0, 1/m, ..., 1}, snapped down by default",
    ),
    ("shift:q,k", "full shift on q symbols, words of length k"),
    ("golden:k", "golden mean shift, words of length k"),
    ("file:path", "a system spec in JSON"),
];

/// Built-in systems used by the theorem checks and test suites.
pub const BUILTIN: &[&str] = &[
    "point",
    "rotation:2,1",
    "rotation:3,1",
    "rotation:4,1",
    "rotation:5,1",
    "rotation:5,2",
    "rotation:6,1",
    "rotation:6,2",
    "rotation:12,1",
    "reflection:3",
    "reflection:4",
    "reflection:5",
    "multiply:5,2",
    "multiply:7,3",
    "multiply:8,2",
    "multiply:9,2",
    "gridmap:half,8",
    "gridmap:tent,4,nearest",
    "gridmap:identity,4",
    "gridmap:constant,4",
    "shift:2,3",
    "golden:3",
];

/// Theorem ids understood by the harness.
pub const THEOREMS: &[(&str, &str)] = &[
    ("transitivity", "base weakly mixing <=> hyperspace transitive <=> hyperspace weakly mixing <=> fuzzy F^{=λ} transitive <=> fuzzy F^{=λ} weakly mixing"),
    ("mixing", "base mixing <=> hyperspace mixing <=> fuzzy F^{=λ} mixing"),
    ("f-mixing", "base F-mixing <=> hyperspace F-transitive <=> hyperspace F-mixing <=> fuzzy F^{=λ} F-transitive <=> fuzzy F^{=λ} F-mixing, for a full family F"),
    ("devaney", "hyperspace Devaney chaotic <=> fuzzy F^{=λ} Devaney chaotic"),
    ("mild-mixing", "base mildly mixing <=> hyperspace mildly mixing <=> fuzzy F^{=λ} mildly mixing (catalog-relative)"),
    ("a-transitivity", "base weakly mixing and a-transitive <=> hyperspace a-transitive <=> fuzzy F^{=λ} a-transitive"),
    ("equicontinuity", "base equicontinuous <=> hyperspace equicontinuous <=> fuzzy F_0 equicontinuous"),
    ("uniform-rigidity", "base uniformly rigid <=> hyperspace <=> F_0 <=> fuzzy F^{=λ} <=> fuzzy F^{>=λ} uniformly rigid"),
    ("proximality", "diam(T^n X) -> 0 <=> hyperspace proximal <=> fuzzy F^{=λ} proximal; the F_0 lift is not proximal"),
    ("height-invariance", "levelwise distance between sets of different heights stays diam(X); the unconstrained and F_0 lifts are not transitive"),
    ("cut-lemma", "[(T_F^g)^n A]_α = T^n([A]_{ξ_g^n(α)})"),
    ("conjugacy", "d_H(T_K^n A, T_K^n B) = d_∞(T_F^n(λχ_A), T_F^n(λχ_B))"),
    ("periodic-density", "hyperspace periodically dense <=> fuzzy F^{=λ} periodically dense"),
];

fn numbers(args: &str, want: std::ops::RangeInclusive<usize>, what: &str) -> Result<Vec<i64>> {
    let v = args
        .split(',')
        .map(|a| a.trim().parse::<i64>())
        .collect::<std::result::Result<Vec<_>, _>>()
        .map_err(|_| Error::invalid(format!("bad arguments `{args}` for {what}")))?;
    if !want.contains(&v.len()) {
        return Err(Error::invalid(format!("{what} takes {want:?} arguments")));
    }
    Ok(v)
}

fn positive(x: i64, what: &str) -> Result<usize> {
    usize::try_from(x)
        .ok()
        .filter(|&x| x > 0)
        .ok_or_else(|| Error::invalid(format!("{what} must be positive")))
}

/// Builds a system from its generator string, e.g. `rotation:12,1`.
pub fn parse_system(s: &str, bounds: &Bounds) -> Result<SystemMap> {
    let (name, args) = s.split_once(':').unwrap_or((s, ""));
    let sys = match name {
        "point" => make_rotation(1, 0),
        "rotation" => {
            let v = numbers(args, 2..=2, "rotation")?;
            make_rotation(positive(v[0], "n")?, v[1])
        }
        "reflection" => {
            let v = numbers(args, 1..=1, "reflection")?;
            make_reflection(positive(v[0], "n")?)
        }
        "multiply" => {
            let v = numbers(args, 2..=2, "multiply")?;
            let a = u64::try_from(v[1]).map_err(|_| Error::invalid("multiplier must be nonnegative"))?;
            make_multiply(positive(v[0], "n")?, a)
        }
        "gridmap" => {
            let parts: Vec<&str> = args.split(',').map(str::trim).collect();
            if !(2..=3).contains(&parts.len()) {
                return Err(Error::invalid("gridmap takes f,m[,snap]"));
            }
            let f = PiecewiseLinear::named(parts[0])?;
            let m = parts[1]
                .parse()
                .map_err(|_| Error::invalid(format!("bad grid size `{}`", parts[1])))?;
            let snap = match parts.get(2).copied() {
                None | Some("down") => Snap::Down,
                Some("nearest") => Snap::Nearest,
                Some(x) => return Err(Error::invalid(format!("unknown snap `{x}`"))),
            };
            make_grid_interval_map(&f, m, snap)
        }
        "shift" => {
            let v = numbers(args, 2..=2, "shift")?;
            make_full_shift(positive(v[0], "q")?, positive(v[1], "k")?)
        }
        "golden" => {
            let v = numbers(args, 1..=1, "golden")?;
            make_golden_mean(positive(v[0], "k")?)
        }
        "file" => {
            let text =
                std::fs::read_to_string(args).map_err(|e| Error::invalid(format!("cannot read `{args}`: {e}")))?;
            SystemSpec::from_json(&text)?.build(bounds)
        }
        _ => Err(Error::invalid(format!("unknown system `{s}`"))),
    }?;
    Ok(sys)
}

/// Every built-in system with its generator string.
pub fn builtin_systems() -> Vec<(String, SystemMap)> {
    let b = Bounds::default();
    BUILTIN
        .iter()
        .map(|s| (s.to_string(), parse_system(s, &b).expect("built-in systems are valid")))
        .collect()
}

/// Built-in point maps with at most `max_points` points.
pub fn small_systems(max_points: usize) -> Vec<(String, SystemMap)> {
    builtin_systems()
        .into_iter()
        .filter(|(_, s)| s.is_map() && s.len() <= max_points)
        .collect()
}

pub fn is_bijection(sys: &SystemMap) -> bool {
    sys.is_map() && sys.is_surjective()
}

pub fn is_isometry(sys: &SystemMap) -> bool {
    let Some(t) = sys.table() else { return false };
    let space = sys.space();
    (0..t.len()).all(|x| (x + 1..t.len()).all(|y| space.dist(t[x] as usize, t[y] as usize) == space.dist(x, y)))
}

/// Transitive partners for the bounded mild mixing check: cycles of
/// length 2 to 6, the 8-cycle standing in for an odometer, a product of
/// coprime cycles, and two mixing shifts.
pub fn mild_mixing_catalog(bounds: &Bounds) -> Result<Vec<(String, SystemMap)>> {
    let mut out = Vec::new();
    for n in 2..=6 {
        out.push((format!("rotation:{n},1"), make_rotation(n, 1)?));
    }
    out.push(("rotation:8,1".into(), make_rotation(8, 1)?));
    let c = product_system(&[(make_rotation(2, 1)?, 1), (make_rotation(3, 1)?, 1)], bounds)?;
    out.push(("rotation:2,1 x rotation:3,1".into(), c));
    out.push(("shift:2,2".into(), make_full_shift(2, 2)?));
    out.push(("golden:3".into(), make_golden_mean(3)?));
    Ok(out)
}
