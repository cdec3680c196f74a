use alloc::vec;
use alloc::vec::Vec;

use hashbrown::HashMap;
use num_bigint::BigInt;
use num_complex::Complex64;
use rand::seq::SliceRandom;
use rand::RngCore;

use super::filling::{column_determinant_product, FillingPair};
use crate::combinatorics::{binomial, next_permutation, sort_sign, subset_rank, subsets_lex};
use crate::error::{invalid, Error, Result};
use crate::poly::{Monomial, SparsePoly};

const BITS_PER_DET: usize = 8;
const MAX_DETS: usize = 64 / BITS_PER_DET;

/// The symmetrized polynomial, `raw = scale · poly` with `poly` normalized.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Invariant {
    pub poly: SparsePoly,
    pub scale: BigInt,
}

/// Evaluate-mode output. `magnitude` is the same contraction run on absolute
/// values, i.e. the sum of moduli of all expansion paths.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Evaluation {
    pub value: Complex64,
    pub magnitude: f64,
}

impl Evaluation {
    pub fn vanishes(&self, rel_tol: f64) -> bool {
        self.value.norm() <= rel_tol * self.magnitude
    }

    pub fn relative(&self) -> f64 {
        if self.magnitude == 0.0 {
            0.0
        } else {
            self.value.norm() / self.magnitude
        }
    }
}

#[derive(Debug, Clone)]
struct Step {
    v: (usize, usize),
    w: Vec<(usize, usize)>,
}

/// Iterated contraction of `p_V · p_W` kept in factored form: a state records,
/// for each column determinant, which of its columns are still unused, so the
/// remaining polynomial is the product of the complementary minors.
#[derive(Debug, Clone)]
struct Plan {
    v_dim: usize,
    w_dim: usize,
    wedge: usize,
    wedge_count: usize,
    start: Option<u64>,
    steps: Vec<Step>,
    rank_of_mask: Vec<usize>,
}

fn mask_of(key: u64, det: usize) -> u64 {
    (key >> (BITS_PER_DET * det)) & 0xff
}

fn clear(key: u64, det: usize, col: usize) -> u64 {
    key & !(1u64 << (BITS_PER_DET * det + col))
}

fn parity_sign(n: u32) -> i32 {
    if n % 2 == 0 {
        1
    } else {
        -1
    }
}

impl Plan {
    fn new(filling: &FillingPair) -> Result<Plan> {
        let (v_dim, w_dim, wedge) = (filling.v_dim(), filling.w_dim(), filling.wedge());
        if v_dim > BITS_PER_DET || w_dim > BITS_PER_DET {
            return Err(invalid("spaces of dimension above 8 are not supported"));
        }
        let v_cols = filling.v_columns();
        let w_cols = filling.w_columns();
        let num_dets = v_cols.len() + w_cols.len();
        if num_dets > MAX_DETS {
            return Err(invalid("too many tableau columns"));
        }
        let mut rank_of_mask = vec![usize::MAX; 1 << w_dim];
        for s in subsets_lex(w_dim, wedge) {
            let m = s.iter().fold(0usize, |m, &c| m | (1 << c));
            rank_of_mask[m] = subset_rank(&s, w_dim);
        }
        let mut plan = Plan {
            v_dim,
            w_dim,
            wedge,
            wedge_count: binomial(w_dim, wedge),
            start: None,
            steps: Vec::new(),
            rank_of_mask,
        };
        if !filling.is_valid() {
            return Ok(plan);
        }

        // rows[d] lists (letter, occurrence) per row of determinant d; occurrence 0 for V
        let mut rows: Vec<Vec<(u8, usize)>> = v_cols.iter().map(|c| c.iter().map(|&l| (l, 0)).collect()).collect();
        rows.extend(w_cols.iter().cloned());
        let mut consumed: Vec<Vec<bool>> = rows.iter().map(|r| vec![false; r.len()]).collect();
        let mut take = |det_range: core::ops::Range<usize>, letter: u8, occ: usize| -> (usize, usize) {
            for d in det_range {
                if let Some(r) = rows[d].iter().position(|&x| x == (letter, occ)) {
                    let pos = consumed[d][..r].iter().filter(|&&c| !c).count();
                    consumed[d][r] = true;
                    return (d, pos);
                }
            }
            unreachable!("valid filling contains every row")
        };
        for letter in 0..filling.degree() as u8 {
            let v = take(0..v_cols.len(), letter, 0);
            let w = (0..wedge).map(|occ| take(v_cols.len()..num_dets, letter, occ)).collect();
            plan.steps.push(Step { v, w });
        }
        let mut start = 0u64;
        for d in 0..num_dets {
            let width = if d < v_cols.len() { v_dim } else { w_dim };
            start |= ((1u64 << width) - 1) << (BITS_PER_DET * d);
        }
        plan.start = Some(start);
        Ok(plan)
    }

    fn num_coords(&self) -> usize {
        self.v_dim * self.wedge_count
    }

    /// Calls `emit(next_key, sign, x_var)` for every term of one contraction step.
    fn transitions(&self, step: &Step, key: u64, emit: &mut impl FnMut(u64, i32, usize)) {
        let (vd, vpos) = step.v;
        let vm = mask_of(key, vd);
        let mut cols = [0usize; BITS_PER_DET];
        for i in 0..BITS_PER_DET {
            if vm & (1 << i) == 0 {
                continue;
            }
            let sign = parity_sign(vpos as u32 + (vm & ((1 << i) - 1)).count_ones());
            self.w_rec(step, 0, clear(key, vd, i), sign, i, &mut cols, emit);
        }
    }

    #[allow(clippy::too_many_arguments)]
    fn w_rec(
        &self,
        step: &Step,
        r: usize,
        key: u64,
        sign: i32,
        i: usize,
        cols: &mut [usize; BITS_PER_DET],
        emit: &mut impl FnMut(u64, i32, usize),
    ) {
        if r == self.wedge {
            let s = sort_sign(&cols[..r]);
            if s == 0 {
                return;
            }
            let m = cols[..r].iter().fold(0usize, |m, &c| m | (1 << c));
            emit(key, sign * s, i * self.wedge_count + self.rank_of_mask[m]);
            return;
        }
        let (d, pos) = step.w[r];
        let m = mask_of(key, d);
        for c in 0..self.w_dim {
            if m & (1 << c) == 0 {
                continue;
            }
            cols[r] = c;
            let s = parity_sign(pos as u32 + (m & ((1 << c) - 1)).count_ones());
            self.w_rec(step, r + 1, clear(key, d, c), sign * s, i, cols, emit);
        }
    }
}

type Poly64 = HashMap<Monomial, i64>;

/// Full mode: the invariant as an exact polynomial in the coordinates
/// `x_{i,J}` (indexed as in [`crate::SecantSpec::coord_index`]).
pub fn young_symmetrize(filling: &FillingPair) -> Result<Invariant> {
    let plan = Plan::new(filling)?;
    let num_vars = plan.num_coords();
    let zero = Invariant {
        poly: SparsePoly::zero(num_vars),
        scale: BigInt::from(0),
    };
    let Some(start) = plan.start else {
        return Ok(zero);
    };
    let mut states: HashMap<u64, Poly64> = HashMap::new();
    states.insert(start, Poly64::from_iter([(Monomial::ONE, 1)]));
    for step in &plan.steps {
        let mut next: HashMap<u64, Poly64> = HashMap::new();
        for (&key, poly) in &states {
            let mut failure = None;
            plan.transitions(step, key, &mut |k, sign, var| {
                let target = next.entry(k).or_default();
                for (m, &c) in poly {
                    let slot = match m.times_var(var) {
                        Ok(m) => target.entry(m).or_insert(0),
                        Err(e) => {
                            failure = Some(e);
                            return;
                        }
                    };
                    match slot.checked_add(i64::from(sign) * c) {
                        Some(v) => *slot = v,
                        None => failure = Some(Error::CoefficientOverflow),
                    }
                }
            });
            if let Some(e) = failure {
                return Err(e);
            }
        }
        for poly in next.values_mut() {
            poly.retain(|_, c| *c != 0);
        }
        next.retain(|_, p| !p.is_empty());
        states = next;
    }
    let Some(last) = states.remove(&0) else {
        return Ok(zero);
    };
    let raw = SparsePoly::from_terms(num_vars, last.into_iter().map(|(m, c)| (m, BigInt::from(c))));
    let poly = raw.normalized();
    let scale = match (raw.terms().next(), poly.terms().next()) {
        (Some((_, r)), Some((_, p))) => r / p,
        _ => BigInt::from(0),
    };
    Ok(Invariant { poly, scale })
}

/// Evaluate mode at each of `points` (coordinate vectors), substituting as
/// soon as each coordinate variable appears.
pub fn young_symmetrize_eval(filling: &FillingPair, points: &[&[Complex64]]) -> Result<Vec<Evaluation>> {
    let plan = Plan::new(filling)?;
    if points.iter().any(|p| p.len() != plan.num_coords()) {
        return Err(invalid("point has the wrong number of coordinates"));
    }
    let n = points.len();
    let zero = vec![Evaluation { value: Complex64::new(0.0, 0.0), magnitude: 0.0 }; n];
    let Some(start) = plan.start else {
        return Ok(zero);
    };
    let abs: Vec<Vec<f64>> = points.iter().map(|p| p.iter().map(|z| z.norm()).collect()).collect();
    // per key: values then magnitudes
    let mut states: HashMap<u64, Vec<Complex64>> = HashMap::new();
    states.insert(start, vec![Complex64::new(1.0, 0.0); 2 * n]);
    for step in &plan.steps {
        let mut next: HashMap<u64, Vec<Complex64>> = HashMap::new();
        for (&key, vals) in &states {
            plan.transitions(step, key, &mut |k, sign, var| {
                let target = next.entry(k).or_insert_with(|| vec![Complex64::new(0.0, 0.0); 2 * n]);
                let s = f64::from(sign);
                for p in 0..n {
                    target[p] += vals[p] * points[p][var] * s;
                    target[n + p] += vals[n + p] * abs[p][var];
                }
            });
        }
        states = next;
    }
    Ok(match states.get(&0) {
        Some(v) => (0..n)
            .map(|p| Evaluation {
                value: v[p],
                magnitude: v[n + p].re,
            })
            .collect(),
        None => zero,
    })
}

/// The contraction algorithm taken literally: expand `p_V · p_W`, then for
/// each letter replace `F` by `Σ x_{i,J} · (ℓ_i · ℓ_{1,J_1} ∧ … ∧ ℓ_{q,J_q}) ⌟ F`.
/// Only feasible for small shapes; returns the raw (unnormalized) result.
pub fn symmetrize_by_expansion(filling: &FillingPair, max_terms: usize) -> Result<SparsePoly> {
    let cd = column_determinant_product(filling)?;
    let (v_dim, w_dim, q) = (filling.v_dim(), filling.w_dim(), filling.wedge());
    let letter_vars = cd.num_letter_vars();
    let wedge_count = binomial(w_dim, q);
    let universe = letter_vars + v_dim * wedge_count;
    let num_coords = v_dim * wedge_count;
    if !filling.is_valid() {
        return Ok(SparsePoly::zero(num_coords));
    }
    let expanded = cd.expand(max_terms)?;
    let mut f = SparsePoly::from_terms(universe, expanded.terms().map(|(m, c)| (*m, c.clone())));
    let subsets = subsets_lex(w_dim, q);
    for letter in 0..filling.degree() {
        let first_w = cd.w_var(letter, 0, 0);
        let in_group = |v: usize| {
            (cd.v_var(letter, 0)..cd.v_var(letter, 0) + v_dim).contains(&v)
                || (first_w..first_w + q * w_dim).contains(&v)
        };
        let mut g = SparsePoly::zero(universe);
        for i in 0..v_dim {
            for (rank, subset) in subsets.iter().enumerate() {
                let x = SparsePoly::var(universe, letter_vars + i * wedge_count + rank)?;
                let mut perm: Vec<usize> = (0..q).collect();
                loop {
                    let mut vars = vec![cd.v_var(letter, i)];
                    vars.extend(perm.iter().enumerate().map(|(r, &p)| cd.w_var(letter, r, subset[p])));
                    let coeff = f.coefficient_in(&Monomial::from_vars(&vars)?, in_group);
                    let term = coeff.mul(&x)?.scale(&BigInt::from(sort_sign(&perm)));
                    g = g.add(&term);
                    if !next_permutation(&mut perm) {
                        break;
                    }
                }
            }
        }
        if g.len() > max_terms {
            return Err(Error::Refused(alloc::format!("expansion would exceed {max_terms} terms")));
        }
        f = g;
    }
    let shifted = f.terms().map(|(m, c)| {
        let vars: Vec<usize> = m.vars().map(|v| v - letter_vars).collect();
        (Monomial::from_vars(&vars).expect("degree unchanged"), c.clone())
    });
    Ok(SparsePoly::from_terms(num_coords, shifted.collect::<Vec<_>>()))
}

/// Where [`filling_search`] draws candidates from.
pub enum CandidateSource<'a> {
    /// The `W` fillings after `start` in lexicographic order of the cell
    /// sequence, keeping the `V` tableau of `start`.
    Lexicographic(FillingPair),
    /// Random valid fillings with the shape of `template`.
    Random { template: FillingPair, rng: &'a mut dyn RngCore },
    List(Vec<FillingPair>),
}

#[derive(Debug, Clone, PartialEq)]
pub struct SearchHit {
    pub filling: FillingPair,
    pub evaluation: Evaluation,
}

/// Screens up to `budget` candidates by evaluate mode at `probe` and keeps
/// those whose value does not vanish relative to `rel_tol`. A hit is not a
/// proof of nonzero image.
pub fn filling_search(
    source: CandidateSource<'_>,
    budget: usize,
    probe: &[Complex64],
    rel_tol: f64,
) -> Result<Vec<SearchHit>> {
    if budget == 0 {
        return Err(invalid("budget must be at least 1"));
    }
    let candidates: Vec<FillingPair> = match source {
        CandidateSource::List(list) => list.into_iter().take(budget).collect(),
        CandidateSource::Lexicographic(start) => {
            let v = start.v_cells();
            let mut w = start.w_cells();
            let mut out = vec![start.clone()];
            while out.len() < budget && next_permutation(&mut w) {
                out.push(start.from_cells(&v, &w));
            }
            out
        }
        CandidateSource::Random { template, rng } => {
            let mut v = template.v_cells();
            let mut w = template.w_cells();
            (0..budget)
                .map(|_| {
                    v.shuffle(rng);
                    w.shuffle(rng);
                    template.from_cells(&v, &w)
                })
                .collect()
        }
    };
    let mut hits = Vec::new();
    for filling in candidates {
        let evaluation = young_symmetrize_eval(&filling, &[probe])?[0];
        if evaluation.magnitude > 0.0 && !evaluation.vanishes(rel_tol) {
            hits.push(SearchHit { filling, evaluation });
        }
    }
    Ok(hits)
}
