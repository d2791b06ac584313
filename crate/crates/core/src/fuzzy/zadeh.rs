use super::gfunction::GFunction;
use super::set::FuzzySet;
use crate::error::{Error, Result};
use crate::spaces::SystemMap;

/// `T_F(A)(x) = max{A(y) : T(y) = x}`, and 0 when `x` has no preimage.
pub fn zadeh_apply(sys: &SystemMap, a: &FuzzySet) -> Result<FuzzySet> {
    push_forward(sys, a, |j| j)
}

/// `T_F^g(A)(x) = max{g(A(y)) : T(y) = x}`.
pub fn g_fuzzify_apply(sys: &SystemMap, g: &GFunction, a: &FuzzySet) -> Result<FuzzySet> {
    if g.grid() != a.grid() {
        return Err(Error::invalid("g and the fuzzy set use different grids"));
    }
    push_forward(sys, a, |j| g.apply(j))
}

fn push_forward(sys: &SystemMap, a: &FuzzySet, g: impl Fn(u8) -> u8) -> Result<FuzzySet> {
    if !sys.space().same(a.base()) {
        return Err(Error::SpaceMismatch);
    }
    let src = a.grade_indices();
    let mut out = vec![0u8; src.len()];
    for (y, &j) in src.iter().enumerate() {
        if j == 0 {
            continue;
        }
        let v = g(j);
        sys.for_each_successor(y, &mut |x| out[x] = out[x].max(v));
    }
    FuzzySet::from_indices(a.base(), a.grid(), out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fuzzy::{alpha_cut, embed_indicator, support, LevelGrid};
    use crate::hyperspace::{induced_apply, CompactSet};
    use crate::rational::rat;
    use crate::spaces::{make_multiply, make_rotation};

    #[test]
    fn indicator_pushes_forward() {
        let t = make_multiply(8, 2).unwrap();
        let grid = LevelGrid::new(2).unwrap();
        let c = CompactSet::from_indices(t.space(), &[1, 3, 6]).unwrap();
        let a = embed_indicator(grid, rat(1, 2), &c).unwrap();
        let image = zadeh_apply(&t, &a).unwrap();
        let expect = embed_indicator(grid, rat(1, 2), &induced_apply(&t, &c).unwrap()).unwrap();
        assert_eq!(image, expect);
        // Points 1 and 5 have no preimage.
        assert_eq!(image.grade(1), rat(0, 1));
    }

    #[test]
    fn saturating_g_gives_indicator_of_support_image() {
        let t = make_rotation(5, 2).unwrap();
        let grid = LevelGrid::new(3).unwrap();
        let g = GFunction::new(grid, vec![0, 3, 3, 3]).unwrap();
        let a = crate::fuzzy::FuzzySet::from_indices(t.space(), grid, vec![1, 0, 2, 0, 0]).unwrap();
        let out = g_fuzzify_apply(&t, &g, &a).unwrap();
        let supp = induced_apply(&t, &support(&a)).unwrap();
        assert_eq!(out, embed_indicator(grid, rat(1, 1), &supp).unwrap());
        assert_eq!(alpha_cut(&out, rat(1, 1)).unwrap(), supp);
    }

    #[test]
    fn grid_mismatch() {
        let t = make_rotation(3, 1).unwrap();
        let a = crate::fuzzy::FuzzySet::empty(t.space(), LevelGrid::new(2).unwrap());
        let g = GFunction::identity(LevelGrid::new(3).unwrap());
        assert!(g_fuzzify_apply(&t, &g, &a).is_err());
        assert!(zadeh_apply(&t, &a).unwrap().is_empty());
    }
}
