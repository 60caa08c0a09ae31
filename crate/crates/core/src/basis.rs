//! Word basis functions `f_w` built by left extension,
//! `f_{k·s} = f'_s f_k`, and the census of non-vanishing words.
//!
//! Two interfaces are provided. [`BasisLevel`] materialises one length at a
//! time and is convenient for small lengths. [`walk`] traverses the suffix
//! tree depth first, so only the current root-to-leaf path is resident; it is
//! what the census and the series assemblies use at large lengths.

use rayon::prelude::*;

use crate::algebra::{Jacobian, Scalar, VecField, ZeroTest};
use crate::model::FourierModel;
use crate::words::{Letter, Word};

/// The basis function of the empty word: the identity map `x ↦ x`.
///
/// It is not a trigonometric polynomial (the `φ` component is `φ` itself),
/// so series evaluation treats it as "the point itself".
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct IdentityMap;

impl IdentityMap {
    pub fn eval(&self, phi: f64, y: f64) -> [f64; 2] {
        [phi, y]
    }

    pub fn jacobian<S: Scalar>(&self) -> Jacobian<S> {
        Jacobian::identity()
    }
}

pub fn basis_identity() -> IdentityMap {
    IdentityMap
}

/// All non-vanishing basis functions of one word length.
#[derive(Clone, Debug)]
pub struct BasisLevel<S> {
    pub n: usize,
    /// Sorted by word; only words with `f_w ≢ 0`.
    pub entries: Vec<(Word, VecField<S>)>,
    /// Optional cache, aligned with `entries`.
    pub jacobians: Option<Vec<Jacobian<S>>>,
}

impl<S: Scalar> BasisLevel<S> {
    /// Length-one words: the non-zero `f_k` themselves.
    pub fn first(model: &FourierModel<S>) -> Self {
        let entries = model
            .fields()
            .filter(|(_, f)| !f.is_zero())
            .map(|(k, f)| (Word::letter(k), f.clone()))
            .collect();
        BasisLevel { n: 1, entries, jacobians: None }
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn get(&self, w: &Word) -> Option<&VecField<S>> {
        self.entries.binary_search_by(|(x, _)| x.cmp(w)).ok().map(|i| &self.entries[i].1)
    }

    pub fn with_jacobians(mut self) -> Self {
        self.jacobians = Some(self.entries.iter().map(|(_, f)| f.jacobian()).collect());
        self
    }
}

fn support<S: Scalar>(model: &FourierModel<S>) -> Vec<(Letter, VecField<S>)> {
    model.fields().filter(|(_, f)| !f.is_zero()).map(|(k, f)| (k, f.clone())).collect()
}

/// Level `n` from level `n - 1`: every surviving suffix is paired with every
/// support letter, its Jacobian computed once for all of them.
pub fn extend_level<S: Scalar>(prev: &BasisLevel<S>, model: &FourierModel<S>) -> BasisLevel<S> {
    let letters = support(model);
    let mut entries = Vec::new();
    for (idx, (suffix, f_s)) in prev.entries.iter().enumerate() {
        let owned;
        let jac = match &prev.jacobians {
            Some(j) => &j[idx],
            None => {
                owned = f_s.jacobian();
                &owned
            }
        };
        if jac.is_empty() {
            continue;
        }
        for (k, f_k) in &letters {
            let f = jac.apply(f_k);
            if !f.is_zero() {
                entries.push((suffix.prepend(*k), f));
            }
        }
    }
    entries.sort_by(|a, b| a.0.cmp(&b.0));
    BasisLevel { n: prev.n + 1, entries, jacobians: None }
}

/// `acc += Σ_w weights(w) f_w` over a level.
pub fn accumulate<S: Scalar, F: Fn(&Word) -> S>(level: &BasisLevel<S>, weights: F, acc: &mut VecField<S>) {
    for (w, f) in &level.entries {
        let c = weights(w);
        if !c.is_zero() {
            *acc = acc.add(&f.scale(c));
        }
    }
}

/// Callback interface of the depth-first traversal.
pub trait Visitor<S> {
    /// Per-node data made available to descendants.
    type State;

    /// Called for every word with `f_w ≢ 0`. `path` holds the states of the
    /// proper suffixes of `word`, shortest first, so `path.last()` belongs to
    /// the parent. Returning `None` prunes the subtree.
    fn visit(&mut self, word: &Word, field: &VecField<S>, path: &[Self::State]) -> Option<Self::State>;

    /// Called for candidate words whose basis function vanishes.
    fn vanished(&mut self, _word: &Word) {}
}

/// Depth-first traversal of all words of length `1..=n_max` with
/// non-vanishing basis functions, starting at the given root letters.
///
/// Children `k·s` of a node `s` are visited in ascending letter order.
pub struct Walk<'m, S> {
    letters: Vec<(Letter, VecField<S>)>,
    n_max: usize,
    zero_test: &'m ZeroTest,
}

impl<'m, S: Scalar> Walk<'m, S> {
    pub fn new(model: &FourierModel<S>, n_max: usize) -> Self {
        Walk { letters: support(model), n_max, zero_test: ZeroTest::standard() }
    }

    pub fn with_zero_test(mut self, test: &'m ZeroTest) -> Self {
        self.zero_test = test;
        self
    }

    pub fn letters(&self) -> Vec<Letter> {
        self.letters.iter().map(|(k, _)| *k).collect()
    }

    fn is_zero(&self, f: &VecField<S>) -> bool {
        f.components.iter().all(|c| c.is_zero_with(self.zero_test))
    }

    /// Runs the traversal over every root letter.
    pub fn run<V: Visitor<S>>(&self, visitor: &mut V) {
        for idx in 0..self.letters.len() {
            self.run_root(idx, visitor);
        }
    }

    /// Runs the traversal below one root letter (the last letter of every
    /// visited word), identified by its index among the support letters.
    pub fn run_root<V: Visitor<S>>(&self, idx: usize, visitor: &mut V) {
        if self.n_max == 0 {
            return;
        }
        let (k, f) = &self.letters[idx];
        let mut path = Vec::with_capacity(self.n_max);
        self.descend(&Word::letter(*k), f, visitor, &mut path);
    }

    fn descend<V: Visitor<S>>(&self, word: &Word, field: &VecField<S>, visitor: &mut V, path: &mut Vec<V::State>) {
        let Some(state) = visitor.visit(word, field, path) else { return };
        if word.len() >= self.n_max {
            return;
        }
        let jac = field.jacobian();
        if jac.is_empty() {
            for (k, _) in &self.letters {
                visitor.vanished(&word.prepend(*k));
            }
            return;
        }
        path.push(state);
        for (k, f_k) in &self.letters {
            let child = jac.apply(f_k);
            let child_word = word.prepend(*k);
            if self.is_zero(&child) {
                visitor.vanished(&child_word);
            } else {
                self.descend(&child_word, &child, visitor, path);
            }
        }
        path.pop();
    }
}

/// Convenience: traverse with a plain closure and no per-node state.
pub fn walk<S: Scalar, F: FnMut(&Word, &VecField<S>)>(model: &FourierModel<S>, n_max: usize, f: F) {
    struct Plain<F>(F);
    impl<S, F: FnMut(&Word, &VecField<S>)> Visitor<S> for Plain<F> {
        type State = ();
        fn visit(&mut self, word: &Word, field: &VecField<S>, _: &[()]) -> Option<()> {
            (self.0)(word, field);
            Some(())
        }
    }
    Walk::new(model, n_max).run(&mut Plain(f));
}

/// `acc += Σ_{1 ≤ |w| ≤ n_max} weights(w) f_w` by streaming traversal.
pub fn accumulate_walk<S: Scalar, F: FnMut(&Word) -> S>(
    model: &FourierModel<S>,
    n_max: usize,
    mut weights: F,
    acc: &mut VecField<S>,
) {
    walk(model, n_max, |w, f| {
        let c = weights(w);
        if !c.is_zero() {
            *acc = acc.add(&f.scale(c));
        }
    });
}

/// Census entry: number of `n`-letter words with `f_w ≢ 0`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CensusRow {
    pub n: usize,
    pub count: u64,
}

#[derive(Default)]
struct Counter {
    nonzero: Vec<u64>,
    vanished: Vec<u64>,
}

impl<S> Visitor<S> for Counter {
    type State = ();
    fn visit(&mut self, word: &Word, _: &VecField<S>, _: &[()]) -> Option<()> {
        self.nonzero[word.len()] += 1;
        Some(())
    }
    fn vanished(&mut self, word: &Word) {
        self.vanished[word.len()] += 1;
    }
}

/// Counts non-vanishing words of every length `1..=n_max`.
///
/// Root subtrees are counted in parallel; the result does not depend on
/// scheduling. Float models use the probabilistic zero test `test`.
pub fn census_with<S: Scalar>(model: &FourierModel<S>, n_max: usize, test: &ZeroTest) -> Vec<CensusRow> {
    let walker = Walk::new(model, n_max).with_zero_test(test);
    let per_root: Vec<Counter> = (0..walker.letters.len())
        .into_par_iter()
        .map(|idx| {
            let mut c = Counter { nonzero: vec![0; n_max + 1], vanished: vec![0; n_max + 1] };
            walker.run_root(idx, &mut c);
            c
        })
        .collect();
    (1..=n_max)
        .map(|n| CensusRow { n, count: per_root.iter().map(|c| c.nonzero[n]).sum() })
        .collect()
}

pub fn census<S: Scalar>(model: &FourierModel<S>, n_max: usize) -> Vec<CensusRow> {
    census_with(model, n_max, ZeroTest::standard())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{Gaussian, Monomial, Rational, TrigPoly};
    use crate::model::ModelParams;

    fn exact() -> FourierModel<Gaussian> {
        FourierModel::exact(ModelParams::default())
    }

    fn w(s: &str) -> Word {
        s.parse().unwrap()
    }

    fn q(n: i128, d: i128) -> Gaussian {
        Gaussian::real(Rational::new(n, d))
    }

    /// `y^j u^m A^a B^b ν^e`
    fn mono(m: i8, j: u8, a: u8, b: u8, e: u8) -> Monomial {
        Monomial::new(m, j, a, b, e, 0)
    }

    #[test]
    fn identity_marker() {
        let id = basis_identity();
        assert_eq!(id.eval(0.3, -1.0), [0.3, -1.0]);
        assert_eq!(id.jacobian::<Gaussian>(), Jacobian::identity());
    }

    #[test]
    fn two_letter_fields_by_hand() {
        let model = exact();
        let l1 = BasisLevel::first(&model);
        assert_eq!(l1.len(), 7);
        let l2 = extend_level(&l1.with_jacobians(), &model);
        assert_eq!(l2.len(), 35);
        assert!(l2.get(&w("3.3")).is_none());

        // f_31 = f'_1 f_3 = (0, 3iBy · (-i/8) B^3) = (0, 3/8 B^4 y)
        let f31 = l2.get(&w("3.1")).unwrap();
        assert!(f31.phi().is_empty());
        assert_eq!(f31.y(), &TrigPoly::term(mono(0, 1, 0, 4, 0), q(3, 8)));

        // f_00 y = -Aν sin φ + (1 - 3/2 B^2 - 3y^2)(y - 3/2 B^2 y - y^3 + A cos φ)
        let half = Rational::new(1, 2);
        let sin_part = TrigPoly::from_terms([
            (mono(1, 0, 1, 0, 1), Gaussian::new(0.into(), half)),
            (mono(-1, 0, 1, 0, 1), Gaussian::new(0.into(), -half)),
        ]);
        let g = TrigPoly::from_terms([
            (mono(0, 0, 0, 0, 0), q(1, 1)),
            (mono(0, 0, 0, 2, 0), q(-3, 2)),
            (mono(0, 2, 0, 0, 0), q(-3, 1)),
        ]);
        let f0y = model.field(0).unwrap().y().clone();
        let expected = sin_part.add(&g.mul(&f0y));
        assert_eq!(l2.get(&w("0.0")).unwrap().y(), &expected);
    }

    #[test]
    fn level_accumulation() {
        let model = exact();
        let l1 = BasisLevel::first(&model);
        let mut acc = VecField::zero();
        accumulate(&l1, |w| if w.letters() == [0] { Gaussian::one() } else { Gaussian::zero() }, &mut acc);
        assert_eq!(&acc, model.field(0).unwrap());
        let mut acc2 = VecField::zero();
        accumulate(&l1, |_| Gaussian::zero(), &mut acc2);
        assert!(acc2.is_empty());
    }

    #[test]
    fn walk_agrees_with_levels() {
        let model = exact();
        let mut levels = vec![BasisLevel::first(&model)];
        for _ in 1..3 {
            let next = extend_level(levels.last().unwrap(), &model);
            levels.push(next);
        }
        let mut seen = 0;
        walk(&model, 3, |word, field| {
            assert_eq!(levels[word.len() - 1].get(word), Some(field));
            seen += 1;
        });
        assert_eq!(seen, 7 + 35 + 217);
    }

    #[test]
    fn census_small_lengths() {
        let rows = census(&exact(), 4);
        let counts: Vec<u64> = rows.iter().map(|r| r.count).collect();
        assert_eq!(counts, vec![7, 35, 217, 1407]);
        let float: Vec<u64> = census(&exact().to_float(), 4).iter().map(|r| r.count).collect();
        assert_eq!(float, counts);
    }

    #[test]
    fn conjugation_symmetry_of_basis() {
        let model = exact();
        let mut fields = std::collections::HashMap::new();
        walk(&model, 3, |word, field| {
            fields.insert(word.clone(), field.clone());
        });
        for (word, field) in &fields {
            let mirrored = fields.get(&word.negated()).expect("negated word must survive");
            assert_eq!(mirrored, &field.conj());
        }
    }

    #[test]
    fn float_conjugation_spot_check() {
        let model = FourierModel::float(ModelParams::default());
        let mut fields = std::collections::HashMap::new();
        walk(&model, 4, |word, field| {
            if word.letters()[0] != 0 || word.len() < 4 {
                fields.insert(word.clone(), field.clone());
            }
        });
        let point = ModelParams::default().point();
        for (word, field) in fields.iter().take(400) {
            if let Some(m) = fields.get(&word.negated()) {
                let a = field.eval(0.7, 0.4, &point);
                let b = m.eval(0.7, 0.4, &point);
                for i in 0..2 {
                    assert!((a[i].conj() - b[i]).norm() <= 1e-10 * (1.0 + a[i].norm()));
                }
            }
        }
    }

    #[test]
    fn letters_outside_support_vanish() {
        let model = exact();
        let mut fields = std::collections::BTreeMap::new();
        for (k, f) in model.fields() {
            fields.insert(k, f.clone());
        }
        fields.insert(4, VecField::zero());
        fields.insert(-5, VecField::zero());
        let padded = FourierModel::from_fields(fields, model.params);
        let l1 = BasisLevel::first(&padded);
        let l2 = extend_level(&l1, &padded);
        assert!(l2.entries.iter().all(|(w, _)| w.letters().iter().all(|k| k.abs() <= 3)));
        assert_eq!(l2.len(), 35);
    }
}
