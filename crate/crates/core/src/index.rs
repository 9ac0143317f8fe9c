//! Cofinal and bicofinal reindexing maps.
//!
//! Every map is stored as its values on a finite window plus slope-one affine
//! tails, which is enough to make equality, ordering and composition decidable.

use std::fmt;

use crate::error::{Error, Result};

/// A map `Z+ -> Z+` given by `(φ(0), …, φ(N))` and `φ(n) = φ(N) + (n - N)` for `n > N`.
#[derive(Clone)]
pub struct CofinalMap {
    window: Vec<usize>,
}

impl fmt::Debug for CofinalMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "CofinalMap{:?}+tail", self.window)
    }
}

impl PartialEq for CofinalMap {
    fn eq(&self, other: &Self) -> bool {
        let n = self.last_index().max(other.last_index());
        (0..=n).all(|i| self.eval(i) == other.eval(i))
    }
}

impl Eq for CofinalMap {}

impl CofinalMap {
    /// Stores the window as given, without checking monotonicity.
    pub fn from_window(window: Vec<usize>) -> Self {
        assert!(!window.is_empty(), "a cofinal map needs at least one window value");
        Self { window }
    }

    /// Builds a map and checks that it is nondecreasing.
    pub fn new(window: Vec<usize>) -> Result<Self> {
        let m = Self::from_window(window);
        if m.is_cofinal() {
            Ok(m)
        } else {
            Err(Error::NotCofinal(format!("{:?}", m.window)))
        }
    }

    pub fn identity() -> Self {
        Self { window: vec![0] }
    }

    /// `n ↦ n + k`.
    pub fn shift(k: usize) -> Self {
        Self { window: vec![k] }
    }

    /// Samples `f` on `0..=last` and continues with slope one.
    pub fn from_fn(last: usize, f: impl FnMut(usize) -> usize) -> Self {
        Self::from_window((0..=last).map(f).collect())
    }

    pub fn window(&self) -> &[usize] {
        &self.window
    }

    pub fn last_index(&self) -> usize {
        self.window.len() - 1
    }

    pub fn eval(&self, n: usize) -> usize {
        let last = self.last_index();
        if n <= last {
            self.window[n]
        } else {
            self.window[last] + (n - last)
        }
    }

    /// Nondecreasing on the window; the tail has slope one, so the limit is infinite.
    pub fn is_cofinal(&self) -> bool {
        self.window.windows(2).all(|w| w[0] <= w[1])
    }

    /// `self ∘ inner`.
    pub fn compose(&self, inner: &CofinalMap) -> CofinalMap {
        let ni = inner.last_index();
        let reach = self.last_index().saturating_sub(inner.eval(ni));
        CofinalMap::from_fn(ni + reach, |n| self.eval(inner.eval(n)))
    }

    /// Pointwise `self <= other`. Beyond both windows the two maps differ by a
    /// constant, so comparing up to the larger window decides it.
    pub fn leq(&self, other: &CofinalMap) -> bool {
        let n = self.last_index().max(other.last_index());
        (0..=n).all(|i| self.eval(i) <= other.eval(i))
    }

    /// Pointwise maximum.
    pub fn max(&self, other: &CofinalMap) -> CofinalMap {
        let n = self.last_index().max(other.last_index());
        CofinalMap::from_fn(n, |i| self.eval(i).max(other.eval(i)))
    }
}

/// `ψ` with `ψ <= id`, built from `φ >= id` by taking the largest preimage of
/// `j`, or of the largest image point below `j`, or `0` if there is none.
///
/// The window extends to `max(up_to, φ(N))`; past `φ(N)` every `j` is hit
/// exactly once, so the returned slope-one tail is exact.
pub fn psi_of(phi: &CofinalMap, up_to: usize) -> Result<CofinalMap> {
    if !phi.is_cofinal() {
        return Err(Error::NotCofinal(format!("{:?}", phi.window)));
    }
    if let Some(i) = (0..=phi.last_index()).find(|&i| phi.eval(i) < i) {
        return Err(Error::NotAboveIdentity(i as i64));
    }
    let top = up_to.max(phi.eval(phi.last_index()));
    let mut largest_preimage: Vec<Option<usize>> = vec![None; top + 1];
    // φ(i) >= i, so every preimage of a point <= top is itself <= top.
    for i in 0..=top {
        let v = phi.eval(i);
        if v <= top {
            largest_preimage[v] = Some(i);
        }
    }
    let mut current = None;
    let window = largest_preimage
        .iter()
        .map(|hit| {
            if hit.is_some() {
                current = *hit;
            }
            current.unwrap_or(0)
        })
        .collect();
    Ok(CofinalMap::from_window(window))
}

/// A nondecreasing map `Z -> Z` given on `[lo, hi]`, with slope-one tails on both sides.
#[derive(Clone)]
pub struct BicofinalMap {
    lo: i64,
    window: Vec<i64>,
}

impl fmt::Debug for BicofinalMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BicofinalMap[{}..={}]{:?}", self.lo, self.hi(), self.window)
    }
}

impl PartialEq for BicofinalMap {
    fn eq(&self, other: &Self) -> bool {
        let lo = self.lo.min(other.lo);
        let hi = self.hi().max(other.hi());
        (lo..=hi).all(|n| self.eval(n) == other.eval(n))
    }
}

impl Eq for BicofinalMap {}

impl BicofinalMap {
    pub fn from_window(lo: i64, window: Vec<i64>) -> Self {
        assert!(!window.is_empty(), "a bicofinal map needs at least one window value");
        Self { lo, window }
    }

    pub fn new(lo: i64, window: Vec<i64>) -> Result<Self> {
        let m = Self::from_window(lo, window);
        if m.is_bicofinal() {
            Ok(m)
        } else {
            Err(Error::NotCofinal(format!("{m:?}")))
        }
    }

    /// Samples `f` on `[lo, hi]`.
    pub fn from_fn(lo: i64, hi: i64, f: impl FnMut(i64) -> i64) -> Self {
        assert!(lo <= hi);
        Self::from_window(lo, (lo..=hi).map(f).collect())
    }

    /// The identity, stored on `[lo, hi]`.
    pub fn identity_on(lo: i64, hi: i64) -> Self {
        Self::from_fn(lo, hi, |n| n)
    }

    /// Translation `n ↦ n + k`, stored on `[lo, hi]`.
    pub fn shift_on(lo: i64, hi: i64, k: i64) -> Self {
        Self::from_fn(lo, hi, |n| n + k)
    }

    pub fn lo(&self) -> i64 {
        self.lo
    }

    pub fn hi(&self) -> i64 {
        self.lo + self.window.len() as i64 - 1
    }

    pub fn eval(&self, n: i64) -> i64 {
        let hi = self.hi();
        if n < self.lo {
            self.window[0] - (self.lo - n)
        } else if n > hi {
            self.window[self.window.len() - 1] + (n - hi)
        } else {
            self.window[(n - self.lo) as usize]
        }
    }

    pub fn is_bicofinal(&self) -> bool {
        self.window.windows(2).all(|w| w[0] <= w[1])
    }

    /// `self ∘ inner`, stored on a window outside of which both maps are affine.
    pub fn compose(&self, inner: &BicofinalMap) -> BicofinalMap {
        let lo = inner.lo.min(inner.lo - (inner.eval(inner.lo) - self.lo).max(0));
        let hi = inner.hi().max(inner.hi() + (self.hi() - inner.eval(inner.hi())).max(0));
        BicofinalMap::from_fn(lo, hi, |n| self.eval(inner.eval(n)))
    }

    pub fn leq(&self, other: &BicofinalMap) -> bool {
        let lo = self.lo.min(other.lo);
        let hi = self.hi().max(other.hi());
        (lo..=hi).all(|n| self.eval(n) <= other.eval(n))
    }

    /// Pointwise maximum, stored on the union of both windows.
    pub fn max(&self, other: &BicofinalMap) -> BicofinalMap {
        let lo = self.lo.min(other.lo);
        let hi = self.hi().max(other.hi());
        BicofinalMap::from_fn(lo, hi, |n| self.eval(n).max(other.eval(n)))
    }

    /// The induced endomap of the index preorder `{(i, j) : i <= j}`.
    pub fn tilde(&self, p: PiPoint) -> PiPoint {
        PiPoint { i: self.eval(p.i), j: self.eval(p.j) }
    }
}

/// `(i, j) ↦ (φ(i), φ(j))`.
pub fn tilde_phi(phi: &BicofinalMap) -> impl Fn(PiPoint) -> PiPoint + '_ {
    move |p| phi.tilde(p)
}

/// A point `(i, j)` of the preorder `{(i, j) : i <= j}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PiPoint {
    i: i64,
    j: i64,
}

impl PiPoint {
    pub fn new(i: i64, j: i64) -> Result<Self> {
        if i <= j {
            Ok(Self { i, j })
        } else {
            Err(Error::Precondition(format!("({i}, {j}) is not a point with i <= j")))
        }
    }

    pub fn i(self) -> i64 {
        self.i
    }

    pub fn j(self) -> i64 {
        self.j
    }

    /// The product order.
    pub fn leq(self, other: PiPoint) -> bool {
        self.i <= other.i && self.j <= other.j
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    /// The three-case definition, evaluated literally.
    fn psi_oracle(phi: &CofinalMap, j: usize) -> usize {
        let preimages = |t: usize| (0..=t).filter(|&i| phi.eval(i) == t).max();
        if let Some(i0) = preimages(j) {
            return i0;
        }
        match (0..=j).rev().find(|&j0| preimages(j0).is_some()) {
            Some(j0) => preimages(j0).unwrap(),
            None => 0,
        }
    }

    #[test]
    fn cofinality() {
        assert!(CofinalMap::identity().is_cofinal());
        assert!(CofinalMap::from_window(vec![0, 0, 0]).is_cofinal());
        assert!(!CofinalMap::from_window(vec![0, 2, 1]).is_cofinal());
        assert!(CofinalMap::new(vec![0, 2, 1]).is_err());
    }

    #[test]
    fn compose_and_order() {
        let phi = CofinalMap::from_fn(4, |n| 2 * n);
        assert_eq!(CofinalMap::identity().compose(&phi), phi);
        assert_eq!(phi.compose(&CofinalMap::identity()), phi);
        assert!(CofinalMap::identity().leq(&CofinalMap::identity()));
        // n ↦ n vs n ↦ 2n on [0..4]: pointwise on the window, then tails 8 + (n-4) >= n.
        assert!(CofinalMap::identity().leq(&phi));
        assert!(!phi.leq(&CofinalMap::identity()));
        assert_eq!(CofinalMap::shift(2).compose(&CofinalMap::shift(3)), CofinalMap::shift(5));
        let sq = phi.compose(&phi);
        for n in 0..20 {
            assert_eq!(sq.eval(n), phi.eval(phi.eval(n)));
        }
    }

    #[test]
    fn psi_examples() {
        assert_eq!(psi_of(&CofinalMap::identity(), 10).unwrap(), CofinalMap::identity());

        let double = CofinalMap::from_fn(10, |i| 2 * i);
        let psi = psi_of(&double, 20).unwrap();
        for j in 0..=20 {
            assert_eq!(psi.eval(j), j / 2, "j = {j}");
        }

        let plus3 = CofinalMap::shift(3);
        let psi = psi_of(&plus3, 10).unwrap();
        for j in 0..=30 {
            assert_eq!(psi.eval(j), j.saturating_sub(3), "j = {j}");
        }
    }

    #[test]
    fn psi_errors() {
        assert!(matches!(psi_of(&CofinalMap::from_window(vec![3, 1]), 4), Err(Error::NotCofinal(_))));
        assert!(matches!(psi_of(&CofinalMap::from_window(vec![0, 0, 5]), 4), Err(Error::NotAboveIdentity(1))));
    }

    /// All nondecreasing windows with `φ(i) >= i` of the given length and value bound.
    fn windows_above_identity(len: usize, max_value: usize) -> Vec<Vec<usize>> {
        let mut out = vec![vec![]];
        for i in 0..len {
            out = out
                .into_iter()
                .flat_map(|w: Vec<usize>| {
                    let start = w.last().copied().unwrap_or(0).max(i);
                    (start..=max_value).map(move |v| {
                        let mut w = w.clone();
                        w.push(v);
                        w
                    })
                })
                .collect();
        }
        out
    }

    #[test]
    fn psi_matches_case_analysis_exhaustively() {
        let mut checked = 0;
        for len in 1..=6 {
            for w in windows_above_identity(len, 8) {
                let phi = CofinalMap::from_window(w);
                let psi = psi_of(&phi, 12).unwrap();
                for j in 0..=16 {
                    assert_eq!(psi.eval(j), psi_oracle(&phi, j), "{phi:?} at {j}");
                    assert!(psi.eval(j) <= j);
                }
                for i in 0..=12 {
                    assert!(psi.eval(phi.eval(i)) >= i);
                }
                checked += 1;
            }
        }
        assert!(checked > 1000);
    }

    #[test]
    fn bicofinal_basics() {
        let id = BicofinalMap::identity_on(-3, 3);
        assert_eq!(id.tilde(PiPoint::new(-1, 2).unwrap()), PiPoint::new(-1, 2).unwrap());
        let s = BicofinalMap::shift_on(0, 0, 1);
        assert_eq!(s.tilde(PiPoint::new(0, 2).unwrap()), PiPoint::new(1, 3).unwrap());
        let d = BicofinalMap::from_fn(-2, 2, |n| 2 * n);
        assert_eq!(tilde_phi(&d)(PiPoint::new(-1, 1).unwrap()), PiPoint::new(-2, 2).unwrap());
        assert_eq!(d.eval(-5), -7);
        assert_eq!(d.eval(5), 7);
        assert!(PiPoint::new(2, 1).is_err());
        assert!(BicofinalMap::new(0, vec![0, -1]).is_err());
        assert_eq!(BicofinalMap::identity_on(0, 0), BicofinalMap::identity_on(-5, 5));
    }

    fn arb_cofinal() -> impl Strategy<Value = CofinalMap> {
        prop::collection::vec(0usize..4, 1..6).prop_map(|steps| {
            let mut acc = 0;
            CofinalMap::from_window(
                steps
                    .into_iter()
                    .map(|s| {
                        acc += s;
                        acc
                    })
                    .collect(),
            )
        })
    }

    fn arb_bicofinal() -> impl Strategy<Value = BicofinalMap> {
        (-4i64..4, -6i64..6, prop::collection::vec(0i64..4, 1..6)).prop_map(|(lo, start, steps)| {
            let mut acc = start;
            BicofinalMap::from_window(
                lo,
                steps
                    .into_iter()
                    .map(|s| {
                        acc += s;
                        acc
                    })
                    .collect(),
            )
        })
    }

    proptest! {
        #[test]
        fn compose_is_associative(a in arb_cofinal(), b in arb_cofinal(), c in arb_cofinal()) {
            prop_assert_eq!(a.compose(&b).compose(&c), a.compose(&b.compose(&c)));
            prop_assert!(a.compose(&b).is_cofinal());
            for n in 0..30 {
                prop_assert_eq!(a.compose(&b).eval(n), a.eval(b.eval(n)));
            }
        }

        #[test]
        fn leq_is_a_partial_order(a in arb_cofinal(), b in arb_cofinal(), c in arb_cofinal()) {
            prop_assert!(a.leq(&a));
            if a.leq(&b) && b.leq(&a) {
                prop_assert_eq!(&a, &b);
            }
            if a.leq(&b) && b.leq(&c) {
                prop_assert!(a.leq(&c));
            }
            for n in 0..30 {
                if a.leq(&b) {
                    prop_assert!(a.eval(n) <= b.eval(n));
                }
            }
        }

        #[test]
        fn bicofinal_compose_matches_pointwise(a in arb_bicofinal(), b in arb_bicofinal()) {
            let ab = a.compose(&b);
            for n in -30..30 {
                prop_assert_eq!(ab.eval(n), a.eval(b.eval(n)));
            }
        }

        #[test]
        fn tilde_is_functorial(a in arb_bicofinal(), b in arb_bicofinal(), i in -10i64..10, d in 0i64..10) {
            let p = PiPoint::new(i, i + d).unwrap();
            let q = a.compose(&b).tilde(p);
            prop_assert_eq!(q, a.tilde(b.tilde(p)));
            prop_assert!(q.i() <= q.j());
        }
    }
}
